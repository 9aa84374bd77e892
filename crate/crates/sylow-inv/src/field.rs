//! Exact arithmetic in GF(p^s).
//!
//! Elements are stored as packed base-p digit indices (`Fel`), so they are
//! `Copy` and canonical by construction; all arithmetic goes through the
//! owning [`FieldCtx`]. The modulus is the lexicographically smallest monic
//! irreducible of its degree (coefficient vectors compared low-degree-first),
//! which keeps every run of the tool bit-reproducible.

use std::fmt;
use std::sync::Arc;

use crate::caps::caps;
use crate::error::{Error, Result};

/// A field element: the packed index `sum(digit_i * p^i)` of its coordinate
/// vector in the power basis of the modulus.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Fel(pub u32);

impl Fel {
    pub const ZERO: Fel = Fel(0);
    pub const ONE: Fel = Fel(1);
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithKind {
    Add,
    Sub,
    Mul,
    Div,
}

/// Context for GF(p^s): modulus, reduction rows and (for small fields)
/// a multiplication table.
pub struct FieldCtx {
    p: u64,
    s: u32,
    r: u64,
    /// Monic modulus, low-degree-first, length s+1.
    modulus: Vec<u64>,
    /// red[i] = digits of t^(s+i) reduced mod the modulus, i in 0..s-1.
    red: Vec<Vec<u64>>,
    mul_tbl: Option<Vec<u32>>,
    inv_tbl: Option<Vec<u32>>,
}

const TABLE_LIMIT: u64 = 1024;

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Remainder of a by b over GF(p); both low-degree-first.
fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut rem: Vec<u64> = a.to_vec();
    let db = b.len() - 1;
    assert_eq!(b[db], 1, "divisor must be monic");
    while rem.len() > db {
        let lead = *rem.last().unwrap() % p;
        let deg = rem.len() - 1;
        if lead != 0 {
            for i in 0..=db {
                let idx = deg - db + i;
                rem[idx] = (rem[idx] + p - (lead * b[i]) % p) % p;
            }
        }
        rem.pop();
        while rem.len() > 1 && (*rem.last().unwrap()).is_multiple_of(p) {
            rem.pop();
        }
        if rem.len() <= db {
            break;
        }
    }
    rem.iter().map(|c| c % p).collect()
}

fn is_irreducible(f: &[u64], p: u64) -> bool {
    let s = f.len() - 1;
    if s == 1 {
        return true;
    }
    // trial division against all monic polynomials of degree <= s/2
    for d in 1..=(s / 2) {
        let count = p.pow(d as u32);
        for idx in 0..count {
            let mut g = vec![0u64; d + 1];
            let mut k = idx;
            for c in g.iter_mut().take(d) {
                *c = k % p;
                k /= p;
            }
            g[d] = 1;
            let rem = poly_rem(f, &g, p);
            if rem.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl FieldCtx {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// Number of elements.
    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn same_field(&self, other: &FieldCtx) -> bool {
        self.p == other.p && self.s == other.s && self.modulus == other.modulus
    }

    pub fn elem(&self, idx: u64) -> Result<Fel> {
        if idx >= self.r {
            return Err(Error::FieldMismatch(idx, self.r));
        }
        Ok(Fel(idx as u32))
    }

    pub fn elements(&self) -> impl Iterator<Item = Fel> {
        (0..self.r).map(|i| Fel(i as u32))
    }

    pub fn check(&self, a: Fel) -> Result<()> {
        if (a.0 as u64) < self.r {
            Ok(())
        } else {
            Err(Error::FieldMismatch(a.0 as u64, self.r))
        }
    }

    pub fn digits(&self, a: Fel) -> Vec<u64> {
        let mut v = vec![0u64; self.s as usize];
        let mut k = a.0 as u64;
        for d in v.iter_mut() {
            *d = k % self.p;
            k /= self.p;
        }
        v
    }

    pub fn from_digits(&self, digits: &[u64]) -> Fel {
        let mut idx = 0u64;
        for &d in digits.iter().rev() {
            idx = idx * self.p + d % self.p;
        }
        debug_assert!(idx < self.r);
        Fel(idx as u32)
    }

    fn add_raw(&self, a: Fel, b: Fel) -> Fel {
        if self.p == 2 {
            return Fel(a.0 ^ b.0);
        }
        let da = self.digits(a);
        let db = self.digits(b);
        let sum: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.from_digits(&sum)
    }

    fn mul_raw(&self, a: Fel, b: Fel) -> Fel {
        let da = self.digits(a);
        let db = self.digits(b);
        let s = self.s as usize;
        let mut conv = vec![0u64; 2 * s - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                conv[i + j] = (conv[i + j] + x * y) % self.p;
            }
        }
        // fold t^(s+i) through the reduction rows
        let mut out = vec![0u64; s];
        for (i, o) in out.iter_mut().enumerate() {
            *o = conv[i];
        }
        for i in s..(2 * s - 1) {
            let c = conv[i];
            if c == 0 {
                continue;
            }
            for (j, &rdigit) in self.red[i - s].iter().enumerate() {
                out[j] = (out[j] + c * rdigit) % self.p;
            }
        }
        self.from_digits(&out)
    }

    pub fn add(&self, a: Fel, b: Fel) -> Fel {
        self.add_raw(a, b)
    }

    pub fn neg(&self, a: Fel) -> Fel {
        let da = self.digits(a);
        let nd: Vec<u64> = da.iter().map(|&x| (self.p - x) % self.p).collect();
        self.from_digits(&nd)
    }

    pub fn sub(&self, a: Fel, b: Fel) -> Fel {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fel, b: Fel) -> Fel {
        if let Some(t) = &self.mul_tbl {
            return Fel(t[a.0 as usize * self.r as usize + b.0 as usize]);
        }
        self.mul_raw(a, b)
    }

    pub fn inv(&self, a: Fel) -> Result<Fel> {
        if a == Fel::ZERO {
            return Err(Error::DivisionByZero);
        }
        if let Some(t) = &self.inv_tbl {
            return Ok(Fel(t[a.0 as usize]));
        }
        Ok(self.pow(a, (self.r - 2) as u128))
    }

    pub fn div(&self, a: Fel, b: Fel) -> Result<Fel> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fel, mut e: u128) -> Fel {
        if e == 0 {
            return Fel::ONE;
        }
        if a == Fel::ZERO {
            return Fel::ZERO;
        }
        // exponents reduce mod r-1 on the nonzero cyclic group
        e %= (self.r - 1) as u128;
        if e == 0 {
            return Fel::ONE;
        }
        let mut base = a;
        let mut acc = Fel::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// a^(p^k).
    pub fn frobenius(&self, a: Fel, k: u32) -> Fel {
        let kk = k % self.s;
        let mut out = a;
        for _ in 0..kk {
            out = self.pow(out, self.p as u128);
        }
        out
    }

    /// Half-exponent q = p^(s/2) of a quadratic extension viewed as F_{q^2}.
    pub fn sub_q(&self) -> Result<u64> {
        if !self.s.is_multiple_of(2) {
            return Err(Error::NotAQuadraticExtension(self.r));
        }
        Ok(self.p.pow(self.s / 2))
    }

    /// The bar map a -> a^q on F_{q^2}.
    pub fn conjugate(&self, a: Fel) -> Result<Fel> {
        if !self.s.is_multiple_of(2) {
            return Err(Error::NotAQuadraticExtension(self.r));
        }
        Ok(self.frobenius(a, self.s / 2))
    }

    /// All elements with a + conjugate(a) = 0, plus the canonical basis
    /// element c - conjugate(c) for the smallest c outside the subfield.
    pub fn trace_kernel(&self) -> Result<(Vec<Fel>, Fel)> {
        let q = self.sub_q()?;
        let kernel: Vec<Fel> = self
            .elements()
            .filter(|&a| self.add(a, self.conjugate(a).unwrap()) == Fel::ZERO)
            .collect();
        assert_eq!(kernel.len() as u64, q, "trace kernel must have q elements");
        let c = self
            .elements()
            .find(|&c| self.conjugate(c).unwrap() != c)
            .expect("a proper quadratic extension has elements outside the subfield");
        let basis = self.sub(c, self.conjugate(c)?);
        Ok((kernel, basis))
    }

    /// Elements of the index-q subfield of F_{q^2}.
    pub fn subfield_elements(&self) -> Result<Vec<Fel>> {
        self.sub_q()?;
        Ok(self
            .elements()
            .filter(|&a| self.conjugate(a).unwrap() == a)
            .collect())
    }

    pub fn fmt_elem(&self, a: Fel) -> String {
        let d = self.digits(a);
        if self.s == 1 {
            format!("{}", d[0])
        } else {
            let inner: Vec<String> = d.iter().map(|x| x.to_string()).collect();
            format!("[{}]", inner.join(","))
        }
    }

    /// Integer-like embedding of small scalars; n is reduced mod p.
    pub fn from_int(&self, n: i64) -> Fel {
        let p = self.p as i64;
        let v = ((n % p) + p) % p;
        self.from_digits(&[v as u64])
    }
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.s)
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.same_field(other)
    }
}
impl Eq for FieldCtx {}

/// Build GF(p^s) with the lexicographically smallest monic irreducible
/// modulus of degree s; deterministic across runs.
pub fn make_field(p: u64, s: u32) -> Result<Arc<FieldCtx>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    assert!(s >= 1, "extension degree must be positive");
    let r128 = (p as u128).checked_pow(s).unwrap_or(u128::MAX);
    if r128 > caps().cardinality as u128 {
        return Err(Error::CardinalityCapExceeded(r128, caps().cardinality));
    }
    let r = r128 as u64;

    // lexicographic scan over constant-first coefficient vectors
    let mut modulus = None;
    let count = p.pow(s);
    'outer: for idx in 0..count {
        let mut f = vec![0u64; s as usize + 1];
        // idx digits give (c_0, c_1, ..., c_{s-1}) with c_0 most significant
        // in the lex comparison, so peel from the high end.
        let mut k = idx;
        for pos in (0..s as usize).rev() {
            f[pos] = k % p;
            k /= p;
        }
        f[s as usize] = 1;
        if is_irreducible(&f, p) {
            modulus = Some(f);
            break 'outer;
        }
    }
    let modulus = modulus.expect("an irreducible polynomial of every degree exists");

    // reduction rows: red[i] = t^(s+i) mod modulus, for i in 0..s-1
    let s_us = s as usize;
    let mut red: Vec<Vec<u64>> = Vec::new();
    if s_us >= 2 {
        let t_s: Vec<u64> = (0..s_us).map(|j| (p - modulus[j] % p) % p).collect();
        red.push(t_s);
        for _ in 1..(s_us - 1) {
            let cur = red.last().unwrap().clone();
            let carry = cur[s_us - 1];
            let mut next = vec![0u64; s_us];
            for j in (1..s_us).rev() {
                next[j] = cur[j - 1];
            }
            if carry != 0 {
                for j in 0..s_us {
                    next[j] = (next[j] + carry * red[0][j]) % p;
                }
            }
            red.push(next);
        }
    }

    let mut ctx = FieldCtx {
        p,
        s,
        r,
        modulus,
        red,
        mul_tbl: None,
        inv_tbl: None,
    };

    if r <= TABLE_LIMIT {
        let n = r as usize;
        let mut tbl = vec![0u32; n * n];
        for a in 0..n {
            for b in a..n {
                let v = ctx.mul_raw(Fel(a as u32), Fel(b as u32)).0;
                tbl[a * n + b] = v;
                tbl[b * n + a] = v;
            }
        }
        ctx.mul_tbl = Some(tbl);
        let mut inv = vec![0u32; n];
        for a in 1..n {
            inv[a] = ctx.pow(Fel(a as u32), (r - 2) as u128).0;
        }
        ctx.inv_tbl = Some(inv);
    }
    Ok(Arc::new(ctx))
}

/// Spec-level arithmetic entry point with explicit error channel.
pub fn arith(ctx: &FieldCtx, a: Fel, b: Fel, kind: ArithKind) -> Result<Fel> {
    ctx.check(a)?;
    ctx.check(b)?;
    match kind {
        ArithKind::Add => Ok(ctx.add(a, b)),
        ArithKind::Sub => Ok(ctx.sub(a, b)),
        ArithKind::Mul => Ok(ctx.mul(a, b)),
        ArithKind::Div => ctx.div(a, b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_gf2() {
        let f = make_field(2, 1).unwrap();
        assert_eq!(f.r(), 2);
        assert_eq!(f.add(Fel::ONE, Fel::ONE), Fel::ZERO);
    }

    #[test]
    fn gf4_modulus_and_generator_square() {
        let f = make_field(2, 2).unwrap();
        // t^2 + t + 1 is the only monic irreducible quadratic over GF(2)
        assert_eq!(f.modulus(), &[1, 1, 1]);
        let t = f.from_digits(&[0, 1]);
        let t1 = f.from_digits(&[1, 1]);
        assert_eq!(f.mul(t, t), t1);
    }

    #[test]
    fn gf9_modulus_is_lex_smallest() {
        let f = make_field(3, 2).unwrap();
        // scan of monic quadratics over GF(3) in (c0,c1) lex order: first
        // root-free one is t^2 + 1
        assert_eq!(f.modulus(), &[1, 0, 1]);
        for a in f.elements().skip(1) {
            let inv = f.inv(a).unwrap();
            assert_eq!(f.mul(a, inv), Fel::ONE);
        }
    }

    #[test]
    fn not_prime_and_caps() {
        assert!(matches!(make_field(6, 1), Err(Error::NotPrime(6))));
        assert!(matches!(
            make_field(2, 40),
            Err(Error::CardinalityCapExceeded(..))
        ));
    }

    #[test]
    fn frobenius_basics() {
        let f2 = make_field(2, 1).unwrap();
        for a in f2.elements() {
            assert_eq!(f2.frobenius(a, 5), a);
        }
        let f4 = make_field(2, 2).unwrap();
        let t = f4.from_digits(&[0, 1]);
        assert_eq!(f4.frobenius(t, 1), f4.from_digits(&[1, 1]));
        assert_eq!(f4.frobenius(t, 0), t);
    }

    #[test]
    fn conjugation() {
        let f4 = make_field(2, 2).unwrap();
        assert_eq!(f4.conjugate(Fel::ONE).unwrap(), Fel::ONE);
        let t = f4.from_digits(&[0, 1]);
        assert_eq!(f4.conjugate(t).unwrap(), f4.from_digits(&[1, 1]));
        let f9 = make_field(3, 2).unwrap();
        for a in f9.elements() {
            let c = f9.conjugate(a).unwrap();
            assert_eq!(f9.conjugate(c).unwrap(), a);
        }
        let f3 = make_field(3, 1).unwrap();
        assert!(matches!(
            f3.conjugate(Fel::ONE),
            Err(Error::NotAQuadraticExtension(3))
        ));
    }

    #[test]
    fn trace_kernel_small() {
        let f4 = make_field(2, 2).unwrap();
        let (k, basis) = f4.trace_kernel().unwrap();
        assert_eq!(k, vec![Fel::ZERO, Fel::ONE]);
        assert!(k.contains(&Fel::ZERO));
        // (c - cbar)^(q-1) = -1
        let q = f4.sub_q().unwrap();
        assert_eq!(f4.pow(basis, (q - 1) as u128), f4.neg(Fel::ONE));

        let f9 = make_field(3, 2).unwrap();
        let (k9, basis9) = f9.trace_kernel().unwrap();
        assert_eq!(k9.len(), 3);
        assert_eq!(f9.pow(basis9, 2), f9.neg(Fel::ONE));
        // closed under subfield scaling
        for &a in &k9 {
            for s in f9.subfield_elements().unwrap() {
                assert!(k9.contains(&f9.mul(a, s)));
            }
        }
    }

    #[test]
    fn division() {
        let f9 = make_field(3, 2).unwrap();
        assert!(matches!(
            f9.div(Fel::ONE, Fel::ZERO),
            Err(Error::DivisionByZero)
        ));
        let a = f9.elem(5).unwrap();
        let b = f9.elem(7).unwrap();
        let c = f9.div(a, b).unwrap();
        assert_eq!(f9.mul(c, b), a);
    }

    #[test]
    fn exhaustive_axioms_small_fields() {
        for (p, s) in [(2, 1), (3, 1), (2, 2), (5, 1), (2, 3), (3, 2), (7, 1), (2, 4), (5, 2), (3, 3), (2, 6), (3, 4)] {
            let f = make_field(p, s).unwrap();
            let els: Vec<Fel> = f.elements().collect();
            for &a in &els {
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &els {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(
                            f.mul(a, f.add(b, c)),
                            f.add(f.mul(a, b), f.mul(a, c))
                        );
                    }
                }
            }
            // frobenius is an additive and multiplicative bijection fixing
            // the prime field, with frobenius(., s) = identity
            let mut seen = std::collections::HashSet::new();
            for &a in &els {
                let fa = f.frobenius(a, 1);
                seen.insert(fa);
                assert_eq!(f.frobenius(a, s), a);
                for &b in &els {
                    assert_eq!(f.frobenius(f.add(a, b), 1), f.add(fa, f.frobenius(b, 1)));
                    assert_eq!(f.frobenius(f.mul(a, b), 1), f.mul(fa, f.frobenius(b, 1)));
                }
            }
            assert_eq!(seen.len(), els.len());
        }
    }

    #[test]
    fn arith_checks_membership() {
        let f4 = make_field(2, 2).unwrap();
        assert!(matches!(
            arith(&f4, Fel(9), Fel::ONE, ArithKind::Add),
            Err(Error::FieldMismatch(9, 4))
        ));
    }
}
