//! The r-Steenrod operations on F[x_1,...,x_n] for r = |F|: the total
//! operator P(zeta) sending x_i to x_i + x_i^r zeta, its graded components
//! P^i of degree i(r-1), and the specialization P at zeta = -1.
//!
//! P(zeta) is realized by substituting into a ring enlarged by one auxiliary
//! variable and collecting coefficients of its powers; nothing here needs
//! power series.

use crate::error::Result;
use crate::poly::{AlgebraMap, Monomial, MultiPoly};

/// Components [P^0(f), ..., P^d(f)] with d = total degree of f.
#[derive(Clone, Debug)]
pub struct SteenrodExpansion {
    pub source: MultiPoly,
    pub r: u64,
    pub components: Vec<MultiPoly>,
}

impl SteenrodExpansion {
    pub fn component(&self, i: usize) -> MultiPoly {
        self.components
            .get(i)
            .cloned()
            .unwrap_or_else(|| MultiPoly::zero(self.source.ctx().clone(), self.source.nvars()))
    }
}

fn check_r(f: &MultiPoly, r: u64) {
    assert_eq!(
        f.ctx().r(),
        r,
        "operator cardinality must match the coefficient field"
    );
}

/// Expand f under x_i -> x_i + x_i^r zeta and collect zeta-degrees.
pub fn steenrod_expand(f: &MultiPoly, r: u64) -> SteenrodExpansion {
    check_r(f, r);
    let ctx = f.ctx().clone();
    let n = f.nvars();
    let d = if f.is_zero() {
        0
    } else {
        f.total_degree().unwrap() as usize
    };
    // auxiliary variable zeta at slot n+1 of an enlarged ring
    let wide = f.resize_vars(n + 1);
    let zeta = MultiPoly::var(ctx.clone(), n + 1, n + 1);
    let mut images: Vec<MultiPoly> = Vec::with_capacity(n + 1);
    for i in 1..=n {
        let x = MultiPoly::var(ctx.clone(), n + 1, i);
        images.push(x.add(&x.pow(r).mul(&zeta)));
    }
    images.push(zeta.clone());
    let expanded = wide.substitute(&images).expect("shapes match");

    let mut components = vec![MultiPoly::zero(ctx.clone(), n); d + 1];
    for (m, &c) in expanded.terms() {
        let zdeg = m.0[n] as usize;
        debug_assert!(zdeg <= d, "zeta-degree is bounded by the total degree");
        let mut e = m.0.clone();
        e.truncate(n);
        components[zdeg].add_term(Monomial(e), c);
    }
    SteenrodExpansion {
        source: f.clone(),
        r,
        components,
    }
}

/// P^i(f); zero beyond the total degree.
pub fn steenrod_op(f: &MultiPoly, i: usize, r: u64) -> MultiPoly {
    steenrod_expand(f, r).component(i)
}

/// The algebra map x_i -> x_i - x_i^r, i.e. the total operator at zeta = -1.
pub fn p_bullet(f: &MultiPoly, r: u64) -> MultiPoly {
    check_r(f, r);
    let ctx = f.ctx().clone();
    let n = f.nvars();
    let images: Vec<MultiPoly> = (1..=n)
        .map(|i| {
            let x = MultiPoly::var(ctx.clone(), n, i);
            x.sub(&x.pow(r))
        })
        .collect();
    f.substitute(&images).expect("shapes match")
}

/// The alternating sum P^0(f) - P^1(f) + P^2(f) - ... from the expansion;
/// equals `p_bullet` and is kept as the second route for the identity suite.
pub fn p_bullet_alternating(f: &MultiPoly, r: u64) -> MultiPoly {
    let exp = steenrod_expand(f, r);
    let ctx = f.ctx().clone();
    let n = f.nvars();
    let minus_one = ctx.neg(crate::field::Fel::ONE);
    let mut sign = crate::field::Fel::ONE;
    let mut acc = MultiPoly::zero(ctx.clone(), n);
    for comp in &exp.components {
        acc = acc.add(&comp.scale(sign));
        sign = ctx.mul(sign, minus_one);
    }
    acc
}

/// Apply the total operator as an [`AlgebraMap`] at a fixed scalar zeta.
pub fn p_at(f: &MultiPoly, r: u64, zeta: crate::field::Fel) -> Result<MultiPoly> {
    check_r(f, r);
    let ctx = f.ctx().clone();
    let n = f.nvars();
    let map = AlgebraMap {
        images: (1..=n)
            .map(|i| {
                let x = MultiPoly::var(ctx.clone(), n, i);
                x.add(&x.pow(r).scale(zeta))
            })
            .collect(),
    };
    map.apply(f)
}
