//! End-to-end reproduction of the two rank-8 worked examples: the Sylow
//! subgroup of the even unitary group on 8 variables at q = 2, and of the
//! split orthogonal group on 8 variables in characteristic 2. Generator
//! lists, displayed h polynomials, invariance and the stated degrees are all
//! checked against literally-constructed polynomials.

use crate::error::Result;
use crate::families::{field_generators, h_k, norms, psi_map};
use crate::field::Fel;
use crate::groups::{generators, Family, GroupSpec};
use crate::poly::{Monomial, MultiPoly};
use crate::verify::suites::check_invariance;
use crate::verify::CheckResult;

fn run(id: String, f: impl FnOnce() -> Result<Option<String>>) -> CheckResult {
    match f() {
        Ok(None) => CheckResult::pass(id),
        Ok(Some(w)) => CheckResult::fail(id, w),
        Err(e) => CheckResult::fail(id, format!("error: {e}")),
    }
}

/// Sum over the four dual pairs of x_{9-i}^e x_i + x_{9-i} x_i^e.
fn paired_power_sum(ctx: &std::sync::Arc<crate::field::FieldCtx>, e: u64) -> MultiPoly {
    let n = 8;
    let mut out = MultiPoly::zero(ctx.clone(), n);
    for i in 1..=4usize {
        let hi = Monomial::var(n, n - i + 1);
        let lo = Monomial::var(n, i);
        if e == 1 {
            out.add_term(hi.mul(&lo), Fel::ONE);
        } else {
            out.add_term(hi.pow_scale(e).mul(&lo), Fel::ONE);
            out.add_term(hi.mul(&lo.pow_scale(e)), Fel::ONE);
        }
    }
    out
}

pub fn rank8_examples() -> Vec<CheckResult> {
    let mut out = Vec::new();
    out.extend(unitary_rank8());
    out.extend(orthogonal_rank8());
    out
}

fn unitary_rank8() -> Vec<CheckResult> {
    let mut out = Vec::new();
    let spec = match GroupSpec::new(Family::GuEven, 4, 2) {
        Ok(s) => s,
        Err(e) => return vec![CheckResult::fail("examples/gu-rank8/spec", e.to_string())],
    };
    let q = spec.q;

    // displayed h_k: the paired q^(2k-1)-power sums
    for k in 1..=3usize {
        out.push(run(format!("examples/gu-rank8/h{k}-display"), || {
            let want = paired_power_sum(&spec.ctx, q.pow(2 * k as u32 - 1));
            let got = h_k(&spec, k)?;
            if got == want {
                Ok(None)
            } else {
                Ok(Some(format!("h{k} = {}", got.display())))
            }
        }));
    }

    // generator list shape
    out.push(run("examples/gu-rank8/generator-list".into(), || {
        let gl = field_generators(&spec)?;
        let want = vec!["x1", "N(x2)", "N(x3)", "N(x4)", "N(x5)", "h1", "h2", "h3"];
        if gl.labels != want {
            return Ok(Some(format!("labels {:?}", gl.labels)));
        }
        if gl.phis.len() != spec.n {
            return Ok(Some("list length differs from n".into()));
        }
        Ok(None)
    }));

    // invariance of every listed generator under the Sylow generators
    match (field_generators(&spec), generators(&spec)) {
        (Ok(gl), Ok(gens)) => {
            for (phi, label) in gl.phis.iter().zip(&gl.labels) {
                out.push(check_invariance(
                    format!("examples/gu-rank8/invariant/{label}"),
                    &gens,
                    phi,
                ));
            }
        }
        (Err(e), _) | (_, Err(e)) => {
            out.push(CheckResult::fail("examples/gu-rank8/invariant", e.to_string()));
        }
    }

    // norm degrees q^(2(j-1)) for j <= 4 and q^7 at the top
    out.push(run("examples/gu-rank8/norm-degrees".into(), || {
        let ns = norms(&spec, 5)?;
        for (j, npoly) in ns.iter().enumerate().take(4) {
            let want = q.pow(2 * j as u32);
            let got = if j == 0 { 1 } else { npoly.degree_in(j + 1)? };
            if got != want {
                return Ok(Some(format!("deg N(x{}) = {got} != {want}", j + 1)));
            }
        }
        let top = ns[4].degree_in(5)?;
        if top != q.pow(7) {
            return Ok(Some(format!("deg N(x5) = {top}")));
        }
        Ok(None)
    }));

    // the psi witnesses live in the right prefix with degree q^(7-2k)
    out.push(run("examples/gu-rank8/witness-degrees".into(), || {
        let h1 = h_k(&spec, 1)?;
        for k in 1..=3usize {
            let psi = psi_map(3 - k, &spec.ctx, spec.n)?;
            let w = psi.apply(&h1)?;
            if !w.uses_only_first(5 + k) {
                return Ok(Some(format!("witness for k={k} leaves R[{}]", 5 + k)));
            }
            let d = w.degree_in(5 + k)?;
            if d != q.pow(7 - 2 * k as u32) {
                return Ok(Some(format!("k={k}: degree {d}")));
            }
        }
        Ok(None)
    }));

    out
}

fn orthogonal_rank8() -> Vec<CheckResult> {
    let mut out = Vec::new();
    let spec = match GroupSpec::new(Family::OPlus, 4, 2) {
        Ok(s) => s,
        Err(e) => return vec![CheckResult::fail("examples/o-plus-rank8/spec", e.to_string())],
    };
    let q = spec.q;

    // displayed h_k: h_1 is the plain pairing sum, h_2 and h_3 its q- and
    // q^2-power pair sums
    for (k, e) in [(1usize, 1u64), (2, q), (3, q * q)] {
        out.push(run(format!("examples/o-plus-rank8/h{k}-display"), || {
            let want = paired_power_sum(&spec.ctx, e);
            let got = h_k(&spec, k)?;
            if got == want {
                Ok(None)
            } else {
                Ok(Some(format!("h{k} = {}", got.display())))
            }
        }));
    }

    out.push(run("examples/o-plus-rank8/generator-list".into(), || {
        let gl = field_generators(&spec)?;
        let want = vec![
            "x1",
            "N(x2)",
            "N(x3)",
            "N(x4)+N(x5)",
            "N(x4)*N(x5)",
            "h1",
            "h2",
            "h3",
        ];
        if gl.labels != want {
            return Ok(Some(format!("labels {:?}", gl.labels)));
        }
        if gl.phis.len() != spec.n {
            return Ok(Some("list length differs from n".into()));
        }
        Ok(None)
    }));

    // L swaps the two middle norms and fixes the rest of the G1 list
    out.push(run("examples/o-plus-rank8/descent-action".into(), || {
        let l_elt = spec.adjoined_element().unwrap();
        let ns = norms(&spec, 5)?;
        for j in [1usize, 2, 3] {
            if ns[j - 1].act(&l_elt)? != ns[j - 1] {
                return Ok(Some(format!("N(x{j}) moves under L")));
            }
        }
        if ns[3].act(&l_elt)? != ns[4] || ns[4].act(&l_elt)? != ns[3] {
            return Ok(Some("L does not swap N(x4) and N(x5)".into()));
        }
        for k in 1..=3usize {
            let h = h_k(&spec, k)?;
            if h.act(&l_elt)? != h {
                return Ok(Some(format!("h{k} moves under L")));
            }
        }
        Ok(None)
    }));

    // invariance of the full list under G1 and L
    match (field_generators(&spec), generators(&spec)) {
        (Ok(gl), Ok(gens)) => {
            for (phi, label) in gl.phis.iter().zip(&gl.labels) {
                let clean: String = label
                    .chars()
                    .map(|c| if c == '*' { '.' } else { c })
                    .collect();
                out.push(check_invariance(
                    format!("examples/o-plus-rank8/invariant/{clean}"),
                    &gens,
                    phi,
                ));
            }
        }
        (Err(e), _) | (_, Err(e)) => {
            out.push(CheckResult::fail(
                "examples/o-plus-rank8/invariant",
                e.to_string(),
            ));
        }
    }

    // G1-level witnesses: degrees q^(m-1-k) = q^(3-k) in x_{5+k}
    out.push(run("examples/o-plus-rank8/witness-degrees".into(), || {
        let h1 = h_k(&spec, 1)?;
        for k in 1..=3usize {
            let psi = psi_map(3 - k, &spec.ctx, spec.n)?;
            let w = psi.apply(&h1)?;
            if !w.uses_only_first(5 + k) {
                return Ok(Some(format!("witness for k={k} leaves R[{}]", 5 + k)));
            }
            let d = w.degree_in(5 + k)?;
            if d != q.pow(3 - k as u32) {
                return Ok(Some(format!("k={k}: degree {d}")));
            }
        }
        Ok(None)
    }));

    // norms under G1 have degree q^(j-1) up to j = 4 and q^3 at the top
    out.push(run("examples/o-plus-rank8/norm-degrees".into(), || {
        let ns = norms(&spec, 5)?;
        for j in 2..=4usize {
            let d = ns[j - 1].degree_in(j)?;
            if d != q.pow(j as u32 - 1) {
                return Ok(Some(format!("deg N(x{j}) = {d}")));
            }
        }
        let top = ns[4].degree_in(5)?;
        if top != q.pow(3) {
            return Ok(Some(format!("deg N(x5) = {top}")));
        }
        Ok(None)
    }));

    out
}
