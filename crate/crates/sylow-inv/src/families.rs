//! The invariant polynomial families: additive subspace products F_{l,r},
//! Dickson coefficients, the variable-killing endomorphisms psi_l, the
//! Omega/Gamma/Lambda families, the per-family h_k, orbit products under the
//! Sylow generators, the invariant-field generator lists and the minimal-degree
//! bound tables.

use std::collections::HashSet;
use std::sync::Arc;

use crate::caps::caps;
use crate::error::{Error, Result};
use crate::field::{Fel, FieldCtx};
use crate::groups::{self, Family, GroupSpec, Sign};
use crate::matrix::Mat;
use crate::poly::{AlgebraMap, Monomial, MultiPoly};

/// The endomorphism x_i -> F_{l,r}(x_i); kills x_1..x_l and commutes with
/// the unitriangular action.
#[derive(Clone, Debug)]
pub struct PsiMap {
    pub l: usize,
    pub map: AlgebraMap,
}

impl PsiMap {
    pub fn apply(&self, f: &MultiPoly) -> Result<MultiPoly> {
        self.map.apply(f)
    }
}

/// Build psi_l on n variables through the linear recursion
/// psi_l(x_i) = psi_{l-1}(x_i)^r - psi_{l-1}(x_l)^(r-1) psi_{l-1}(x_i).
pub fn psi_map(l: usize, ctx: &Arc<FieldCtx>, n: usize) -> Result<PsiMap> {
    if l > n {
        return Err(Error::OutOfRange(format!("psi level {l} exceeds {n} variables")));
    }
    let r = ctx.r();
    let s = ctx.s();
    let mut images: Vec<MultiPoly> = (1..=n).map(|i| MultiPoly::var(ctx.clone(), n, i)).collect();
    for step in 1..=l {
        let t = images[step - 1].clone();
        let t_pow = t.pow(r - 1);
        for img in images.iter_mut() {
            let pr = img.pow_pk(s); // img^r
            *img = pr.sub(&t_pow.mul(img));
        }
    }
    Ok(PsiMap {
        l,
        map: AlgebraMap { images },
    })
}

/// Product of (target + w) over all w in the F_p-span of `basis`, computed
/// through the additive chain: one p-power and one multiplication per basis
/// vector, so the result stays sparse.
pub fn subspace_product(target: &MultiPoly, basis: &[MultiPoly]) -> MultiPoly {
    let ctx = target.ctx().clone();
    let p = ctx.p();
    let mut vals: Vec<MultiPoly> = Vec::with_capacity(basis.len() + 1);
    vals.push(target.clone());
    vals.extend(basis.iter().cloned());
    for step in 0..basis.len() {
        // after this step vals[j] = prod over span(b_1..b_step) shifts
        let t = vals[step + 1].clone();
        let t_pow = t.pow(p - 1);
        for j in (0..1).chain(step + 2..basis.len() + 1) {
            let v = &vals[j];
            let vp = v.pow(p);
            vals[j] = vp.sub(&t_pow.mul(v));
        }
    }
    vals.swap_remove(0)
}

/// Same product by literal expansion over every span element; the
/// independent oracle for the chain version.
pub fn subspace_product_naive(target: &MultiPoly, basis: &[MultiPoly]) -> Result<MultiPoly> {
    let ctx = target.ctx().clone();
    let p = ctx.p();
    let count = (p as u128).pow(basis.len() as u32);
    if count > caps().span as u128 {
        return Err(Error::ExpansionTooLarge(count, caps().span));
    }
    let mut members = vec![MultiPoly::zero(ctx.clone(), target.nvars())];
    for b in basis {
        let mut next = Vec::with_capacity(members.len() * p as usize);
        for w in &members {
            let mut shift = w.clone();
            next.push(shift.clone());
            for _ in 1..p {
                shift = shift.add(b);
                next.push(shift.clone());
            }
        }
        members = next;
    }
    let mut acc = MultiPoly::one(ctx, target.nvars());
    for w in &members {
        acc = acc.mul(&target.add(w));
    }
    Ok(acc)
}

/// F_p-basis of the span of x_1..x_l over the whole field: l * s vectors.
fn full_span_basis(ctx: &Arc<FieldCtx>, n: usize, l: usize) -> Vec<MultiPoly> {
    let mut basis = Vec::new();
    for i in 1..=l {
        for d in 0..ctx.s() {
            let mut digits = vec![0u64; ctx.s() as usize];
            digits[d as usize] = 1;
            let c = ctx.from_digits(&digits);
            basis.push(MultiPoly::var(ctx.clone(), n, i).scale(c));
        }
    }
    basis
}

/// Check F_{l,r}(X) = F_{l-1,r}(X)^r - F_{l-1,r}(x_l)^(r-1) F_{l-1,r}(X)
/// against the brute-force product over the span of x_1..x_l, with X
/// realized as the variable x_{l+1}.
pub fn additive_poly_recursion_check(l: usize, ctx: &Arc<FieldCtx>, n: usize) -> Result<bool> {
    assert!(l >= 1 && n > l);
    let psi_l = psi_map(l, ctx, n)?;
    let f_l = psi_l.map.images[l].clone(); // F_{l,r}(x_{l+1})
    let brute = subspace_product_naive(
        &MultiPoly::var(ctx.clone(), n, l + 1),
        &full_span_basis(ctx, n, l),
    )?;
    if f_l != brute {
        return Ok(false);
    }
    // recursion on the brute side alone
    let prev_basis = full_span_basis(ctx, n, l - 1);
    let f_prev_x = subspace_product_naive(&MultiPoly::var(ctx.clone(), n, l + 1), &prev_basis)?;
    let f_prev_xl = subspace_product_naive(&MultiPoly::var(ctx.clone(), n, l), &prev_basis)?;
    let r = ctx.r();
    let rhs = f_prev_x
        .pow_pk(ctx.s())
        .sub(&f_prev_xl.pow(r - 1).mul(&f_prev_x));
    Ok(brute == rhs)
}

/// Coefficients c_0..c_{n-1} of the full-span product
/// prod_{u in span(x_1..x_n)} (X - u) = X^(q^n) + sum (-1)^(n-i) c_i X^(q^i).
pub fn dickson_coeffs(n: usize, ctx: &Arc<FieldCtx>) -> Result<Vec<MultiPoly>> {
    let q = ctx.r();
    let total = (q as u128).pow(n as u32);
    if total > caps().span as u128 {
        return Err(Error::ExpansionTooLarge(total, caps().span));
    }
    // X lives at slot n+1; negation of span elements is absorbed because the
    // span is symmetric under negation
    let wide = n + 1;
    let product = subspace_product(
        &MultiPoly::var(ctx.clone(), wide, n + 1),
        &full_span_basis(ctx, wide, n),
    );
    let mut coeffs = vec![MultiPoly::zero(ctx.clone(), n); n];
    for (mono, &c) in product.terms() {
        let xdeg = mono.0[n] as u64;
        let mut tail = mono.0.clone();
        tail.truncate(n);
        let rest = Monomial(tail);
        if xdeg == (q as u128).pow(n as u32) as u64 {
            assert!(rest.total_degree() == 0 && c == Fel::ONE);
            continue;
        }
        let i = (0..n)
            .find(|&i| (q as u128).pow(i as u32) as u64 == xdeg)
            .expect("X-degrees of the span product are q-powers");
        // strip the sign (-1)^(n-i)
        let sign = if (n - i).is_multiple_of(2) {
            Fel::ONE
        } else {
            ctx.neg(Fel::ONE)
        };
        coeffs[i].add_term(rest, ctx.mul(c, sign));
    }
    Ok(coeffs)
}

/// The polynomial families. `j` is +/-1; `lambda` and the minus-family
/// scalar are elements of the acting field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    Omega { s: u32, j: i8 },
    Gamma { s: u32, lambda: Fel },
    Lambda { s: u32, lambda: Fel },
}

/// Positions of the square terms of Gamma: the centre pair for even n, the
/// centre and its right neighbour for odd n.
fn gamma_square_positions(n: usize) -> (usize, usize) {
    if n.is_multiple_of(2) {
        (n / 2, n / 2 + 1)
    } else {
        (n.div_ceil(2), (n + 3) / 2)
    }
}

pub fn family_poly(kind: FamilyKind, n: usize, ctx: &Arc<FieldCtx>) -> Result<MultiPoly> {
    let r = ctx.r();
    let m = n / 2; // (n-1)/2 for odd n by integer division
    let mut out = MultiPoly::zero(ctx.clone(), n);
    match kind {
        FamilyKind::Omega { s, j } => {
            assert!(j == 1 || j == -1, "j must be +/-1");
            if s == 0 {
                if j == -1 {
                    return Ok(out);
                }
                for i in 1..=m {
                    out.add_term(Monomial::var(n, n - i + 1).mul(&Monomial::var(n, i)), Fel::ONE);
                }
                return Ok(out);
            }
            let e = checked_pow_u64(r, s)?;
            let jf = if j == 1 { Fel::ONE } else { ctx.neg(Fel::ONE) };
            for i in 1..=m {
                let hi = Monomial::var(n, n - i + 1);
                let lo = Monomial::var(n, i);
                out.add_term(hi.pow_scale(e).mul(&lo), Fel::ONE);
                out.add_term(hi.mul(&lo.pow_scale(e)), jf);
            }
            Ok(out)
        }
        FamilyKind::Gamma { s, lambda } => {
            let (c1, c2) = gamma_square_positions(n);
            if lambda != Fel::ZERO && c2 > n {
                return Err(Error::OutOfRange(format!(
                    "Gamma needs variable x{c2} in a {n}-variable ring"
                )));
            }
            let omega = family_poly(FamilyKind::Omega { s, j: 1 }, n, ctx)?;
            let e = checked_pow_u64(r, s)? + 1;
            let factor = if s == 0 { Fel::ONE } else { ctx.from_int(2) };
            let mut tail = MultiPoly::zero(ctx.clone(), n);
            tail.add_term(Monomial::var(n, c1).pow_scale(e), Fel::ONE);
            if lambda != Fel::ZERO {
                tail.add_term(Monomial::var(n, c2).pow_scale(e), lambda);
            }
            Ok(omega.add(&tail.scale(factor)))
        }
        FamilyKind::Lambda { s, lambda } => {
            if !ctx.s().is_multiple_of(2) {
                return Err(Error::LambdaRequiresQuadraticExtension);
            }
            assert!(s >= 1, "Lambda starts at level 1");
            let q = ctx.sub_q()?;
            let e = checked_pow_u64(q, 2 * s - 1)?;
            for i in 1..=m {
                let hi = Monomial::var(n, n - i + 1);
                let lo = Monomial::var(n, i);
                out.add_term(hi.pow_scale(e).mul(&lo), Fel::ONE);
                out.add_term(hi.mul(&lo.pow_scale(e)), Fel::ONE);
            }
            if lambda != Fel::ZERO {
                out.add_term(Monomial::var(n, m + 1).pow_scale(e + 1), lambda);
            }
            Ok(out)
        }
    }
}

fn checked_pow_u64(b: u64, e: u32) -> Result<u64> {
    let v = (b as u128).pow(e);
    if v > caps().exponent as u128 {
        return Err(Error::ExpansionTooLarge(v, caps().exponent));
    }
    Ok(v as u64)
}

/// Largest h index of the family's invariant-field generator list.
pub fn h_range_end(spec: &GroupSpec) -> usize {
    match spec.family {
        Family::GuEven | Family::Sp | Family::OPlus => spec.m - 1,
        Family::GuOdd | Family::OMinus | Family::OOdd => spec.m,
    }
}

/// The family-specific invariant h_k.
pub fn h_k(spec: &GroupSpec, k: usize) -> Result<MultiPoly> {
    if k < 1 || k > h_range_end(spec) {
        return Err(Error::OutOfRange(format!(
            "h index {k} outside 1..={} for {:?}",
            h_range_end(spec),
            spec
        )));
    }
    let n = spec.n;
    let ctx = &spec.ctx;
    match spec.family {
        Family::GuEven => family_poly(
            FamilyKind::Lambda {
                s: k as u32,
                lambda: Fel::ZERO,
            },
            n,
            ctx,
        ),
        Family::GuOdd => family_poly(
            FamilyKind::Lambda {
                s: k as u32,
                lambda: Fel::ONE,
            },
            n,
            ctx,
        ),
        Family::Sp => family_poly(FamilyKind::Omega { s: k as u32, j: -1 }, n, ctx),
        Family::OPlus => family_poly(
            FamilyKind::Omega {
                s: (k - 1) as u32,
                j: 1,
            },
            n,
            ctx,
        ),
        Family::OMinus => {
            let a = spec.minus_form_scalar()?;
            family_poly(
                FamilyKind::Gamma {
                    s: (k - 1) as u32,
                    lambda: a,
                },
                n,
                ctx,
            )
        }
        Family::OOdd => family_poly(
            FamilyKind::Gamma {
                s: (k - 1) as u32,
                lambda: Fel::ZERO,
            },
            n,
            ctx,
        ),
    }
}

/// Steenrod index with h_k = P^index(h_{k-1}), for k >= 2.
pub fn steenrod_chain_index(spec: &GroupSpec, k: usize) -> u64 {
    let q = spec.q;
    match spec.family {
        Family::GuEven | Family::GuOdd => (q as u128).pow(2 * k as u32 - 3) as u64,
        Family::Sp => (q as u128).pow(k as u32 - 1) as u64,
        Family::OPlus | Family::OMinus | Family::OOdd => (q as u128).pow(k as u32 - 2) as u64,
    }
}

/// Walk the orbit of f under the generated group (generators and inverses).
pub fn orbit_of(gens: &[Mat], f: &MultiPoly, cap: u64) -> Result<Vec<MultiPoly>> {
    let mut all: Vec<Mat> = gens.to_vec();
    for g in gens {
        let inv = g.inverse()?;
        if !all.iter().any(|h| h == &inv) {
            all.push(inv);
        }
    }
    let mut seen = HashSet::new();
    let mut orbit = vec![f.clone()];
    seen.insert(format!("{:?}", f));
    let mut frontier = vec![f.clone()];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for h in &frontier {
            for g in &all {
                let img = h.act(g)?;
                let key = format!("{:?}", img);
                if seen.insert(key) {
                    if orbit.len() as u64 >= cap {
                        return Err(Error::OrbitCapExceeded(cap));
                    }
                    orbit.push(img.clone());
                    next.push(img);
                }
            }
        }
        frontier = next;
    }
    Ok(orbit)
}

/// Orbit product of x_i under the group generated by `gens`. When the orbit
/// is a coset x_i + W of an additive group of linear forms (always the case
/// for these families) the product is taken through the additive chain;
/// otherwise it falls back to the literal product.
pub fn orbit_product(gens: &[Mat], i: usize, ctx: &Arc<FieldCtx>, n: usize) -> Result<MultiPoly> {
    let xi = MultiPoly::var(ctx.clone(), n, i);
    let orbit = orbit_of(gens, &xi, caps().orbit)?;
    let shifts: Vec<MultiPoly> = orbit.iter().map(|o| o.sub(&xi)).collect();
    let keyed: HashSet<String> = shifts.iter().map(|w| format!("{:?}", w)).collect();
    let is_subgroup = shifts.iter().all(|w1| {
        shifts
            .iter()
            .all(|w2| keyed.contains(&format!("{:?}", w1.add(w2))))
    });
    if is_subgroup {
        let mut basis: Vec<MultiPoly> = Vec::new();
        let mut span: HashSet<String> = HashSet::new();
        span.insert(format!("{:?}", MultiPoly::zero(ctx.clone(), n)));
        let p = ctx.p();
        for w in &shifts {
            if span.contains(&format!("{:?}", w)) {
                continue;
            }
            basis.push(w.clone());
            let old: Vec<String> = span.iter().cloned().collect();
            let members: Vec<MultiPoly> = shifts
                .iter()
                .filter(|s| old.contains(&format!("{:?}", s)))
                .cloned()
                .collect();
            for mem in members {
                let mut acc = mem;
                for _ in 0..p {
                    span.insert(format!("{:?}", acc));
                    acc = acc.add(w);
                }
            }
        }
        debug_assert_eq!(
            (p as u128).pow(basis.len() as u32),
            shifts.len() as u128,
            "basis must span the orbit shifts"
        );
        let prod = subspace_product(&xi, &basis);
        Ok(prod)
    } else {
        let mut acc = MultiPoly::one(ctx.clone(), n);
        for o in &orbit {
            acc = acc.mul(o);
        }
        Ok(acc)
    }
}

/// The ordered transcendence-basis list generating the invariant field, with labels
/// and the h_k polynomials used.
#[derive(Clone, Debug)]
pub struct GeneratorList {
    pub phis: Vec<MultiPoly>,
    pub labels: Vec<String>,
    pub h_polys: Vec<MultiPoly>,
}

/// Upper variable index of the norm range.
pub fn norm_range_end(spec: &GroupSpec) -> usize {
    match spec.family {
        Family::OMinus => spec.m + 2,
        _ => spec.m + 1,
    }
}

/// Orbit products N(x_1)..N(x_j) under the unitriangular part G1.
pub fn norms(spec: &GroupSpec, up_to: usize) -> Result<Vec<MultiPoly>> {
    let gens = groups::g1_generators(spec)?;
    (1..=up_to)
        .map(|j| orbit_product(&gens, j, &spec.ctx, spec.n))
        .collect()
}

/// The generator list of the family's invariant field. For the
/// even-characteristic +/- orthogonal families this is the descent list with
/// the symmetric combinations of the middle norms.
pub fn field_generators(spec: &GroupSpec) -> Result<GeneratorList> {
    let nr = norm_range_end(spec);
    let norms_list = norms(spec, nr)?;
    let h_polys: Vec<MultiPoly> = (1..=h_range_end(spec))
        .map(|k| h_k(spec, k))
        .collect::<Result<_>>()?;

    let mut phis = Vec::new();
    let mut labels = Vec::new();
    let m = spec.m;
    if spec.has_adjoined() {
        match spec.family {
            Family::OPlus => {
                // x_1, N(x_2)..N(x_{m-1}), N(x_m)+N(x_{m+1}), N(x_m)N(x_{m+1})
                for j in 1..=(m - 1) {
                    phis.push(norms_list[j - 1].clone());
                    labels.push(norm_label(j));
                }
                let (nm, nm1) = (&norms_list[m - 1], &norms_list[m]);
                phis.push(nm.add(nm1));
                labels.push(format!("N(x{})+N(x{})", m, m + 1));
                phis.push(nm.mul(nm1));
                labels.push(format!("N(x{})*N(x{})", m, m + 1));
            }
            Family::OMinus => {
                // x_1, N(x_2)..N(x_m), N(x_{m+1})^2 + N(x_{m+2}) N(x_{m+1}), N(x_{m+2})
                for j in 1..=m {
                    phis.push(norms_list[j - 1].clone());
                    labels.push(norm_label(j));
                }
                let (nm1, nm2) = (&norms_list[m], &norms_list[m + 1]);
                phis.push(nm1.mul(nm1).add(&nm2.mul(nm1)));
                labels.push(format!("N(x{})^2+N(x{})*N(x{})", m + 1, m + 2, m + 1));
                phis.push(nm2.clone());
                labels.push(norm_label(m + 2));
            }
            _ => unreachable!(),
        }
    } else {
        for j in 1..=nr {
            phis.push(norms_list[j - 1].clone());
            labels.push(norm_label(j));
        }
    }
    for (k, h) in h_polys.iter().enumerate() {
        phis.push(h.clone());
        labels.push(format!("h{}", k + 1));
    }
    Ok(GeneratorList {
        phis,
        labels,
        h_polys,
    })
}

fn norm_label(j: usize) -> String {
    if j == 1 {
        "x1".to_string()
    } else {
        format!("N(x{j})")
    }
}

// The identity suites over these families run in the verification layer;
// the module-level names stay available here as well.
pub use crate::verify::suites::{
    degree_suite as degree_table_suite, psi_suite as psi_recursion_suite,
};

/// (t, d) of the abelian corner subgroup H used for the minimal-degree
/// bounds, plus which symmetry block it is.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HBlock {
    Plus,
    Minus,
    /// Minus block with the anti-diagonal pinned to zero (even q orthogonal).
    MinusZeroDiag,
}

pub fn h_block_data(spec: &GroupSpec) -> (usize, usize, HBlock) {
    let m = spec.m;
    match spec.family {
        Family::GuEven => (m - 1, 2, HBlock::Minus),
        Family::GuOdd => (m, 1, HBlock::Minus),
        Family::Sp => (m - 1, 2, HBlock::Plus),
        Family::OPlus => (
            m - 1,
            2,
            if spec.is_even_char() {
                HBlock::MinusZeroDiag
            } else {
                HBlock::Minus
            },
        ),
        Family::OMinus => (
            m,
            2,
            if spec.is_even_char() {
                HBlock::MinusZeroDiag
            } else {
                HBlock::Minus
            },
        ),
        Family::OOdd => (
            m,
            1,
            if spec.is_even_char() {
                HBlock::MinusZeroDiag
            } else {
                HBlock::Minus
            },
        ),
    }
}

/// The lower bound for the minimal degree in x_{t+d+k} of an invariant of
/// the corner subgroup, per block kind and field kind.
pub fn minimal_degree_bound(spec: &GroupSpec, k: usize) -> Result<u128> {
    let (t, _d, block) = h_block_data(spec);
    if k < 1 || k > t {
        return Err(Error::OutOfRange(format!("k={k} outside 1..={t}")));
    }
    let q = spec.q as u128;
    let tk = (t - k) as u32;
    Ok(match (block, spec.hermitian()) {
        (_, true) => q.pow(2 * tk + 1),
        (HBlock::Plus, false) => q.pow(tk + 1),
        (HBlock::Minus, false) => {
            if spec.is_even_char() {
                q.pow(tk + 1)
            } else {
                q.pow(tk)
            }
        }
        (HBlock::MinusZeroDiag, false) => q.pow(tk),
    })
}

/// Constraint predicate of the corner block: c_{i,j} = +/- conj(c_{t-j+1,t-i+1}).
pub fn corner_constraint_ok(spec_bar: &dyn Fn(Fel) -> Fel, ctx: &FieldCtx, sign: Sign, c: &Mat) -> bool {
    let t = c.rows();
    for i in 0..t {
        for j in 0..t {
            let mirror = spec_bar(c.get(t - 1 - j, t - 1 - i));
            let expect = match sign {
                Sign::Plus => mirror,
                Sign::Minus => ctx.neg(mirror),
            };
            if c.get(i, j) != expect {
                return false;
            }
        }
    }
    true
}

/// Build the corner-subgroup element of U(2t+d) with the given lower block.
pub fn corner_element(ctx: &Arc<FieldCtx>, t: usize, d: usize, c: &Mat) -> Mat {
    let n = 2 * t + d;
    let mut m = Mat::identity(ctx.clone(), n);
    for i in 0..t {
        for j in 0..t {
            m.set(t + d + i, j, c.get(i, j));
        }
    }
    m
}

/// Generators of the layer subgroup L_k inside the corner subgroup: the
/// corner matrices with rows below k-1 zeroed, restricted by the +/- mirror
/// constraint. Returned as full (2t+d)-square matrices.
pub fn layer_subgroup_generators(
    ctx: &Arc<FieldCtx>,
    bar: &dyn Fn(Fel) -> Fel,
    sign: Sign,
    zero_anti_diag: bool,
    t: usize,
    d: usize,
    k: usize,
) -> Vec<Mat> {
    assert!(k >= 1 && k <= t);
    // free slots of row k: columns 1..t-k+1; the anti-diagonal slot
    // (k, t-k+1) carries the constrained value set
    let mut gens = Vec::new();
    let row = k - 1;
    let anti_col = t - k; // zero-based column of the anti-diagonal entry
    let s = ctx.s();
    for col in 0..=anti_col {
        let values: Vec<Fel> = if col == anti_col {
            let mut vals: Vec<Fel> = ctx
                .elements()
                .filter(|&v| {
                    let mirror = match sign {
                        Sign::Plus => bar(v),
                        Sign::Minus => ctx.neg(bar(v)),
                    };
                    mirror == v
                })
                .collect();
            if zero_anti_diag {
                vals = vec![Fel::ZERO];
            }
            vals
        } else {
            (0..s)
                .map(|i| {
                    let mut digits = vec![0u64; s as usize];
                    digits[i as usize] = 1;
                    ctx.from_digits(&digits)
                })
                .collect()
        };
        for v in values {
            if v == Fel::ZERO {
                continue;
            }
            let mut c = Mat::zero(ctx.clone(), t, t);
            c.set(row, col, v);
            // complete the mirror entry so the corner constraint holds
            let (mi, mj) = (t - 1 - col, t - 1 - row);
            if (mi, mj) != (row, col) {
                let mv = match sign {
                    Sign::Plus => bar(v),
                    Sign::Minus => ctx.neg(bar(v)),
                };
                c.set(mi, mj, mv);
            }
            gens.push(corner_element(ctx, t, d, &c));
        }
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use crate::groups::{generators, GroupSpec};
    use crate::steenrod;

    fn gf(p: u64, s: u32) -> Arc<FieldCtx> {
        make_field(p, s).unwrap()
    }

    #[test]
    fn psi_zero_is_identity_and_psi_kills_prefix() {
        let ctx = gf(3, 1);
        let psi0 = psi_map(0, &ctx, 3).unwrap();
        let f = MultiPoly::var(ctx.clone(), 3, 2).pow(2);
        assert_eq!(psi0.apply(&f).unwrap(), f);
        for l in 1..=3 {
            let psi = psi_map(l, &ctx, 3).unwrap();
            for k in 1..=l {
                assert!(psi.map.images[k - 1].is_zero(), "psi_{l} must kill x{k}");
            }
        }
    }

    #[test]
    fn psi_one_images() {
        for r in [2u64, 3] {
            let ctx = gf(r, 1);
            let psi1 = psi_map(1, &ctx, 2).unwrap();
            let x1 = MultiPoly::var(ctx.clone(), 2, 1);
            let x2 = MultiPoly::var(ctx.clone(), 2, 2);
            let expect = x2.pow(r).sub(&x1.pow(r - 1).mul(&x2));
            assert_eq!(psi1.map.images[1], expect);
            assert_eq!(psi1.map.images[1].degree_in(2).unwrap(), r);
        }
    }

    #[test]
    fn additive_recursion_small() {
        for (l, p, s) in [(1, 2, 1), (2, 2, 1), (1, 3, 1), (2, 3, 1), (1, 2, 2), (2, 2, 2)] {
            let ctx = gf(p, s);
            assert!(
                additive_poly_recursion_check(l, &ctx, l + 1).unwrap(),
                "recursion fails at l={l} over GF({})",
                ctx.r()
            );
        }
    }

    #[test]
    fn brute_product_example_l1_r2() {
        let ctx = gf(2, 1);
        let x1 = MultiPoly::var(ctx.clone(), 2, 1);
        let x2 = MultiPoly::var(ctx.clone(), 2, 2);
        let prod = subspace_product_naive(&x2, &[x1.clone()]).unwrap();
        // x2 (x2 + x1) = x2^2 + x1 x2
        assert_eq!(prod, x2.pow(2).add(&x1.mul(&x2)));
        assert_eq!(prod, subspace_product(&x2, &[x1]));
    }

    #[test]
    fn chain_and_naive_products_agree() {
        let ctx = gf(2, 2);
        let x1 = MultiPoly::var(ctx.clone(), 3, 1);
        let x2 = MultiPoly::var(ctx.clone(), 3, 2);
        let t = ctx.from_digits(&[0, 1]);
        let basis = vec![x1.clone(), x1.scale(t), x2.clone()];
        let target = MultiPoly::var(ctx.clone(), 3, 3);
        assert_eq!(
            subspace_product(&target, &basis),
            subspace_product_naive(&target, &basis).unwrap()
        );
    }

    #[test]
    fn dickson_rank_one() {
        for q in [2u64, 3] {
            let ctx = gf(q, 1);
            let c = dickson_coeffs(1, &ctx).unwrap();
            let x1 = MultiPoly::var(ctx.clone(), 1, 1);
            assert_eq!(c[0], x1.pow(q - 1));
        }
    }

    #[test]
    fn dickson_invariance_small() {
        use crate::rng::SplitMix64;
        let ctx = gf(2, 1);
        let cs = dickson_coeffs(2, &ctx).unwrap();
        let mut rng = SplitMix64::new(3);
        for _ in 0..10 {
            let m = loop {
                let mut m = Mat::zero(ctx.clone(), 2, 2);
                for i in 0..2 {
                    for j in 0..2 {
                        m.set(i, j, Fel(rng.below(2) as u32));
                    }
                }
                if m.det() != Fel::ZERO {
                    break m;
                }
            };
            for c in &cs {
                assert_eq!(&c.act(&m).unwrap(), c);
            }
        }
    }

    #[test]
    fn omega_basics() {
        let ctx = gf(2, 1);
        let om = family_poly(FamilyKind::Omega { s: 0, j: 1 }, 4, &ctx).unwrap();
        // x4 x1 + x3 x2
        assert_eq!(om.num_terms(), 2);
        assert_eq!(om.coeff(&Monomial(vec![1, 0, 0, 1])), Fel::ONE);
        assert_eq!(om.coeff(&Monomial(vec![0, 1, 1, 0])), Fel::ONE);
        let zero = family_poly(FamilyKind::Omega { s: 0, j: -1 }, 4, &ctx).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn lambda_matches_rank8_display() {
        // q = 2: Lambda_{1,0} on 8 variables
        let ctx = gf(2, 2);
        let lam = family_poly(
            FamilyKind::Lambda {
                s: 1,
                lambda: Fel::ZERO,
            },
            8,
            &ctx,
        )
        .unwrap();
        let mut expect = MultiPoly::zero(ctx.clone(), 8);
        for i in 1..=4usize {
            let hi = Monomial::var(8, 8 - i + 1);
            let lo = Monomial::var(8, i);
            expect.add_term(hi.pow_scale(2).mul(&lo), Fel::ONE);
            expect.add_term(hi.mul(&lo.pow_scale(2)), Fel::ONE);
        }
        assert_eq!(lam, expect);
        let f3 = gf(3, 1);
        assert!(matches!(
            family_poly(FamilyKind::Lambda { s: 1, lambda: Fel::ZERO }, 4, &f3),
            Err(Error::LambdaRequiresQuadraticExtension)
        ));
    }

    #[test]
    fn gamma_char2_tail_vanishes() {
        let ctx = gf(2, 1);
        let g = family_poly(
            FamilyKind::Gamma {
                s: 1,
                lambda: Fel::ONE,
            },
            4,
            &ctx,
        )
        .unwrap();
        let om = family_poly(FamilyKind::Omega { s: 1, j: 1 }, 4, &ctx).unwrap();
        assert_eq!(g, om);
    }

    #[test]
    fn h1_equals_quadratic_form_for_orthogonal() {
        for (fam, m, q) in [
            (Family::OPlus, 2, 2),
            (Family::OPlus, 3, 3),
            (Family::OMinus, 2, 2),
            (Family::OMinus, 2, 3),
            (Family::OOdd, 2, 2),
            (Family::OOdd, 2, 3),
        ] {
            let spec = GroupSpec::new(fam, m, q).unwrap();
            let h1 = h_k(&spec, 1).unwrap();
            let fd = groups::form_of(&spec).unwrap();
            assert_eq!(h1, fd.q_form.unwrap(), "{:?}", spec);
        }
    }

    #[test]
    fn sp_h1_display() {
        let spec = GroupSpec::new(Family::Sp, 2, 3).unwrap();
        let h1 = h_k(&spec, 1).unwrap();
        let ctx = &spec.ctx;
        let mut expect = MultiPoly::zero(ctx.clone(), 4);
        for i in 1..=2usize {
            let hi = Monomial::var(4, 4 - i + 1);
            let lo = Monomial::var(4, i);
            expect.add_term(hi.pow_scale(3).mul(&lo), Fel::ONE);
            expect.add_term(hi.mul(&lo.pow_scale(3)), ctx.neg(Fel::ONE));
        }
        assert_eq!(h1, expect);
    }

    #[test]
    fn orbit_products_small() {
        // x_1 is fixed by any unitriangular group
        let spec = GroupSpec::new(Family::Sp, 2, 2).unwrap();
        let gens = generators(&spec).unwrap();
        let n1 = orbit_product(&gens, 1, &spec.ctx, spec.n).unwrap();
        assert_eq!(n1, MultiPoly::var(spec.ctx.clone(), spec.n, 1));

        // full unitriangular U(2, q): N(x_2) = x_2^q - x_1^(q-1) x_2
        for q in [2u64, 3] {
            let ctx = gf(q, 1);
            let mut gen = Mat::identity(ctx.clone(), 2);
            gen.set(1, 0, Fel::ONE);
            let n2 = orbit_product(&[gen], 2, &ctx, 2).unwrap();
            let x1 = MultiPoly::var(ctx.clone(), 2, 1);
            let x2 = MultiPoly::var(ctx.clone(), 2, 2);
            assert_eq!(n2, x2.pow(q).sub(&x1.pow(q - 1).mul(&x2)));
        }
    }

    #[test]
    fn psi_matches_full_unitriangular_orbit_product() {
        for (p, s, n) in [(2u64, 1u32, 3usize), (3, 1, 3), (2, 2, 2)] {
            let ctx = gf(p, s);
            // elementary generators of U(n, F)
            let mut gens = Vec::new();
            for i in 1..n {
                for j in 0..i {
                    for d in 0..s {
                        let mut digits = vec![0u64; s as usize];
                        digits[d as usize] = 1;
                        let mut g = Mat::identity(ctx.clone(), n);
                        g.set(i, j, ctx.from_digits(&digits));
                        gens.push(g);
                    }
                }
            }
            for l in 0..n {
                let psi = psi_map(l, &ctx, n).unwrap();
                let np = orbit_product(&gens, l + 1, &ctx, n).unwrap();
                assert_eq!(psi.map.images[l], np, "l={l} over GF({})", ctx.r());
            }
        }
    }

    #[test]
    fn gu_even_top_norm_closed_form() {
        // Sylow of the even unitary family at m=2, q=2: the orbit product of
        // x_{m+1} has degree q^(2m-1) and matches the trace-kernel formula
        let spec = GroupSpec::new(Family::GuEven, 2, 2).unwrap();
        let gens = generators(&spec).unwrap();
        let ctx = &spec.ctx;
        let q = spec.q;
        let l = 2usize; // x_3 picks up full spans of x_1 and kernel multiples of x_2
        let n3 = orbit_product(&gens, 3, &ctx.clone(), spec.n).unwrap();
        assert_eq!(n3.degree_in(3).unwrap(), q.pow(2 * spec.m as u32 - 1));
        let psi_prev = psi_map(l - 1, ctx, spec.n).unwrap();
        let f_xi = psi_prev.map.images[2].clone();
        let f_xl = psi_prev.map.images[1].clone();
        let expect = f_xi.pow(q).add(&f_xl.pow(q - 1).mul(&f_xi));
        assert_eq!(n3, expect);
    }

    #[test]
    fn generator_list_shapes() {
        let gu = GroupSpec::new(Family::GuEven, 4, 2).unwrap();
        let gl = field_generators(&gu).unwrap();
        assert_eq!(gl.phis.len(), gu.n);
        assert_eq!(
            gl.labels,
            vec!["x1", "N(x2)", "N(x3)", "N(x4)", "N(x5)", "h1", "h2", "h3"]
        );

        let op = GroupSpec::new(Family::OPlus, 4, 2).unwrap();
        let gl = field_generators(&op).unwrap();
        assert_eq!(gl.phis.len(), op.n);
        assert!(gl.labels.contains(&"N(x4)+N(x5)".to_string()));
        assert!(gl.labels.contains(&"N(x4)*N(x5)".to_string()));

        for (fam, m, q) in [
            (Family::GuOdd, 2, 2),
            (Family::Sp, 2, 3),
            (Family::OPlus, 2, 3),
            (Family::OMinus, 2, 2),
            (Family::OMinus, 2, 3),
            (Family::OOdd, 2, 2),
        ] {
            let spec = GroupSpec::new(fam, m, q).unwrap();
            let gl = field_generators(&spec).unwrap();
            assert_eq!(gl.phis.len(), spec.n, "{:?}", spec);
        }
    }

    #[test]
    fn minimal_degree_bound_tables() {
        // unitary even family at n = 8: q^5, q^3, q
        let gu = GroupSpec::new(Family::GuEven, 4, 2).unwrap();
        let q = 2u128;
        assert_eq!(minimal_degree_bound(&gu, 1).unwrap(), q.pow(5));
        assert_eq!(minimal_degree_bound(&gu, 2).unwrap(), q.pow(3));
        assert_eq!(minimal_degree_bound(&gu, 3).unwrap(), q);
        // symplectic: q^(m-k)
        let sp = GroupSpec::new(Family::Sp, 3, 3).unwrap();
        assert_eq!(minimal_degree_bound(&sp, 1).unwrap(), 9);
        assert_eq!(minimal_degree_bound(&sp, 2).unwrap(), 3);
        // plus orthogonal, odd q: q^(m-1-k)
        let op = GroupSpec::new(Family::OPlus, 3, 3).unwrap();
        assert_eq!(minimal_degree_bound(&op, 1).unwrap(), 3);
        assert_eq!(minimal_degree_bound(&op, 2).unwrap(), 1);
        assert!(minimal_degree_bound(&op, 3).is_err());
    }

    #[test]
    fn h_chain_via_steenrod() {
        for (fam, m, q) in [
            (Family::GuEven, 3, 2),
            (Family::Sp, 3, 2),
            (Family::OPlus, 3, 2),
            (Family::OOdd, 2, 3),
        ] {
            let spec = GroupSpec::new(fam, m, q).unwrap();
            let r = spec.ctx.r();
            for k in 2..=h_range_end(&spec) {
                let prev = h_k(&spec, k - 1).unwrap();
                let idx = steenrod_chain_index(&spec, k);
                let next = steenrod::steenrod_op(&prev, idx as usize, r);
                assert_eq!(next, h_k(&spec, k).unwrap(), "{:?} k={k}", spec);
            }
        }
    }
}
