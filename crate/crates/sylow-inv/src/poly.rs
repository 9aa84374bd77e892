//! Sparse multivariate polynomials over a [`FieldCtx`], ordered by grevlex
//! with x_1 < x_2 < ... < x_n.
//!
//! Terms live in a `BTreeMap` keyed by the monomial order, so every
//! polynomial has one canonical representation and serialized output is
//! reproducible. Powers are taken through base-p digit chains: f^(p^k) is a
//! term-wise Frobenius twist, which keeps the iterated q-power expressions
//! used throughout the invariant families sparse.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::caps::caps;
use crate::error::{Error, Result};
use crate::field::{Fel, FieldCtx};
use crate::matrix::Mat;

/// Exponent vector of fixed length n.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= n, "variables are 1-based up to n");
        let mut e = vec![0; n];
        e[i - 1] = 1;
        Monomial(e)
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.0.len(), other.0.len());
        let cap = caps().exponent;
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| {
                    let e = a as u64 + b as u64;
                    assert!(e <= cap, "monomial exponent {e} exceeds cap {cap}");
                    e as u32
                })
                .collect(),
        )
    }

    pub fn pow_scale(&self, k: u64) -> Monomial {
        let cap = caps().exponent;
        Monomial(
            self.0
                .iter()
                .map(|&a| {
                    let e = a as u64 * k;
                    assert!(e <= cap, "monomial exponent {e} exceeds cap {cap}");
                    e as u32
                })
                .collect(),
        )
    }
}

/// Grevlex with x_1 < x_2 < ... < x_n: higher total degree wins, and on ties
/// the monomial whose exponent vector is smaller at the first difference
/// scanning from x_1 upward is the larger one.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.0.len(), other.0.len());
        let da = self.total_degree();
        let db = other.total_degree();
        if da != db {
            return da.cmp(&db);
        }
        for (a, b) in self.0.iter().zip(&other.0) {
            if a != b {
                // smaller entry first from x_1 means the larger monomial
                return if a < b { Ordering::Greater } else { Ordering::Less };
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone)]
pub struct MultiPoly {
    ctx: Arc<FieldCtx>,
    n: usize,
    terms: BTreeMap<Monomial, Fel>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.ctx.same_field(&other.ctx) && self.terms == other.terms
    }
}
impl Eq for MultiPoly {}

impl MultiPoly {
    pub fn zero(ctx: Arc<FieldCtx>, n: usize) -> Self {
        MultiPoly {
            ctx,
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ctx: Arc<FieldCtx>, n: usize, c: Fel) -> Self {
        let mut p = Self::zero(ctx, n);
        if c != Fel::ZERO {
            p.terms.insert(Monomial::one(n), c);
        }
        p
    }

    pub fn one(ctx: Arc<FieldCtx>, n: usize) -> Self {
        Self::constant(ctx, n, Fel::ONE)
    }

    /// The variable x_i (1-based).
    pub fn var(ctx: Arc<FieldCtx>, n: usize, i: usize) -> Self {
        let mut p = Self::zero(ctx, n);
        p.terms.insert(Monomial::var(n, i), Fel::ONE);
        p
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Fel)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Fel {
        self.terms.get(m).copied().unwrap_or(Fel::ZERO)
    }

    pub fn add_term(&mut self, m: Monomial, c: Fel) {
        if c == Fel::ZERO {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = self.ctx.add(*o.get(), c);
                if s == Fel::ZERO {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn assert_compat(&self, other: &MultiPoly) {
        assert!(
            self.n == other.n && self.ctx.same_field(&other.ctx),
            "polynomials from different rings"
        );
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        self.assert_compat(other);
        let mut out = self.clone();
        for (m, &c) in other.terms.iter() {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = self.ctx.neg(*c);
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: Fel) -> MultiPoly {
        if c == Fel::ZERO {
            return MultiPoly::zero(self.ctx.clone(), self.n);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = self.ctx.mul(*v, c);
        }
        out
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        self.assert_compat(other);
        let mut out = MultiPoly::zero(self.ctx.clone(), self.n);
        for (ma, &ca) in self.terms.iter() {
            for (mb, &cb) in other.terms.iter() {
                out.add_term(ma.mul(mb), self.ctx.mul(ca, cb));
            }
        }
        out
    }

    /// f^(p^k): term-wise Frobenius.
    pub fn pow_pk(&self, k: u32) -> MultiPoly {
        let pk = (self.ctx.p() as u128).pow(k);
        assert!(pk <= caps().exponent as u128, "p-power exceeds exponent cap");
        let mut out = MultiPoly::zero(self.ctx.clone(), self.n);
        for (m, &c) in self.terms.iter() {
            out.terms
                .insert(m.pow_scale(pk as u64), self.ctx.frobenius(c, k));
        }
        out
    }

    /// f^e through base-p digits of e, so p-power factors stay sparse.
    pub fn pow(&self, e: u64) -> MultiPoly {
        if e == 0 {
            return MultiPoly::one(self.ctx.clone(), self.n);
        }
        let p = self.ctx.p();
        let mut digits = Vec::new();
        let mut k = e;
        while k > 0 {
            digits.push((k % p) as u32);
            k /= p;
        }
        let mut acc = MultiPoly::one(self.ctx.clone(), self.n);
        for (j, &d) in digits.iter().enumerate() {
            if d == 0 {
                continue;
            }
            let base = self.pow_pk(j as u32);
            acc = acc.mul(&bin_pow(&base, d as u64));
        }
        acc
    }

    /// Image under the algebra map x_i -> images[i-1].
    pub fn substitute(&self, images: &[MultiPoly]) -> Result<MultiPoly> {
        if images.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "map supplies {} images for {} variables",
                images.len(),
                self.n
            )));
        }
        let out_n = if let Some(first) = images.first() {
            for img in images {
                if !img.ctx.same_field(&self.ctx) {
                    return Err(Error::ContextMismatch);
                }
                if img.n != first.n {
                    return Err(Error::DimensionMismatch(
                        "images live in different rings".into(),
                    ));
                }
            }
            first.n
        } else {
            0
        };
        let mut out = MultiPoly::zero(self.ctx.clone(), out_n);
        // power cache per (variable, exponent); base-p chains underneath
        let mut chains: Vec<Vec<MultiPoly>> = images.iter().map(|f| vec![f.clone()]).collect();
        let mut cache: HashMap<(usize, u32), MultiPoly> = HashMap::new();
        for (m, &c) in self.terms.iter() {
            let mut acc = MultiPoly::constant(self.ctx.clone(), out_n, c);
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = match cache.get(&(i, e)) {
                    Some(p) => p.clone(),
                    None => {
                        let p = var_power(&mut chains[i], e as u64, self.ctx.p());
                        cache.insert((i, e), p.clone());
                        p
                    }
                };
                acc = acc.mul(&pw);
            }
            out = out.add(&acc);
        }
        Ok(out)
    }

    /// The action f |-> f(Mx): substitute x_i -> sum_j `M[i][j]` x_j.
    pub fn act(&self, m: &Mat) -> Result<MultiPoly> {
        if m.rows() != self.n || m.cols() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, ring has {} variables",
                m.rows(),
                m.cols(),
                self.n
            )));
        }
        if !m.ctx().same_field(&self.ctx) {
            return Err(Error::ContextMismatch);
        }
        let images: Vec<MultiPoly> = (0..self.n)
            .map(|i| {
                let mut row = MultiPoly::zero(self.ctx.clone(), self.n);
                for j in 0..self.n {
                    let c = m.get(i, j);
                    if c != Fel::ZERO {
                        row.add_term(Monomial::var(self.n, j + 1), c);
                    }
                }
                row
            })
            .collect();
        self.substitute(&images)
    }

    pub fn total_degree(&self) -> Result<u64> {
        self.terms
            .keys()
            .map(|m| m.total_degree())
            .max()
            .ok_or(Error::ZeroPolynomial)
    }

    /// Max exponent of x_i (1-based) over all terms.
    pub fn degree_in(&self, i: usize) -> Result<u64> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        assert!(i >= 1 && i <= self.n);
        Ok(self
            .terms
            .keys()
            .map(|m| m.0[i - 1] as u64)
            .max()
            .unwrap())
    }

    pub fn leading_monomial(&self) -> Result<Monomial> {
        self.terms
            .keys()
            .next_back()
            .cloned()
            .ok_or(Error::ZeroPolynomial)
    }

    /// True when no term touches a variable above x_j.
    pub fn uses_only_first(&self, j: usize) -> bool {
        self.terms
            .keys()
            .all(|m| m.0.iter().skip(j).all(|&e| e == 0))
    }

    /// Reinterpret in a ring with `new_n >= n` variables (or fewer, when the
    /// discarded tail is unused).
    pub fn resize_vars(&self, new_n: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(self.ctx.clone(), new_n);
        for (m, &c) in self.terms.iter() {
            let mut e = m.0.clone();
            if new_n >= self.n {
                e.resize(new_n, 0);
            } else {
                assert!(
                    e.iter().skip(new_n).all(|&x| x == 0),
                    "cannot drop used variables"
                );
                e.truncate(new_n);
            }
            out.terms.insert(Monomial(e), c);
        }
        out
    }

    /// Human-readable form: terms in decreasing grevlex order.
    pub fn display(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, &c)| {
                let mut factors = vec![self.ctx.fmt_elem(c)];
                for (i, &e) in m.0.iter().enumerate() {
                    if e == 1 {
                        factors.push(format!("x{}", i + 1));
                    } else if e > 1 {
                        factors.push(format!("x{}^{}", i + 1, e));
                    }
                }
                factors.join("*")
            })
            .collect();
        parts.join(" + ")
    }

    /// Machine form: list of (exponent vector, coefficient digit vector) in
    /// decreasing grevlex order.
    pub fn to_json(&self) -> serde_json::Value {
        let items: Vec<serde_json::Value> = self
            .terms
            .iter()
            .rev()
            .map(|(m, &c)| serde_json::json!([m.0, self.ctx.digits(c)]))
            .collect();
        serde_json::Value::Array(items)
    }
}

fn bin_pow(f: &MultiPoly, mut e: u64) -> MultiPoly {
    let mut acc = MultiPoly::one(f.ctx().clone(), f.nvars());
    let mut base = f.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base);
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base);
        }
    }
    acc
}

fn var_power(chain: &mut Vec<MultiPoly>, e: u64, p: u64) -> MultiPoly {
    let mut digits = Vec::new();
    let mut k = e;
    while k > 0 {
        digits.push((k % p) as u32);
        k /= p;
    }
    while chain.len() < digits.len() {
        let last = chain.last().unwrap();
        chain.push(last.pow_pk(1));
    }
    let mut acc: Option<MultiPoly> = None;
    for (j, &d) in digits.iter().enumerate() {
        if d == 0 {
            continue;
        }
        let part = bin_pow(&chain[j], d as u64);
        acc = Some(match acc {
            None => part,
            Some(a) => a.mul(&part),
        });
    }
    acc.expect("e > 0")
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display())
    }
}

/// An algebra endomorphism given by the images of the variables.
#[derive(Clone, Debug)]
pub struct AlgebraMap {
    pub images: Vec<MultiPoly>,
}

impl AlgebraMap {
    pub fn identity(ctx: Arc<FieldCtx>, n: usize) -> Self {
        AlgebraMap {
            images: (1..=n).map(|i| MultiPoly::var(ctx.clone(), n, i)).collect(),
        }
    }

    pub fn apply(&self, f: &MultiPoly) -> Result<MultiPoly> {
        f.substitute(&self.images)
    }
}

/// Monomial orders. Only grevlex with x_1 < x_2 < ... < x_n is supported;
/// it is also the `Ord` on [`Monomial`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MonomialOrder {
    #[default]
    Grevlex,
}

pub fn leading_monomial(f: &MultiPoly, ord: MonomialOrder) -> Result<Monomial> {
    let MonomialOrder::Grevlex = ord;
    f.leading_monomial()
}

#[derive(Clone, Copy, Debug)]
pub enum PolyArith {
    Add,
    Mul,
}

pub fn poly_arith(f: &MultiPoly, g: &MultiPoly, kind: PolyArith) -> Result<MultiPoly> {
    if f.nvars() != g.nvars() || !f.ctx().same_field(g.ctx()) {
        return Err(Error::ContextMismatch);
    }
    Ok(match kind {
        PolyArith::Add => f.add(g),
        PolyArith::Mul => f.mul(g),
    })
}
