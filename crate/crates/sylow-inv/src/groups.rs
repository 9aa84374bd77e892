//! Construction of the Sylow p-subgroups of the six classical families as
//! explicit lower-unitriangular matrices.
//!
//! A form matrix X with the three-block anti-diagonal shape is fixed per
//! family; the subgroup of U(2k+l, F) preserving it is parameterized by a
//! unitriangular block A, a free block B, a constrained block F and a block
//! S solving S + eps*conj(S)^T = -B^T X2 conj(B). Orthogonal groups in even
//! characteristic additionally pin the diagonal of S through the quadratic
//! form and adjoin one order-two element (L or L1) to reach full Sylow size.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::caps::caps;
use crate::error::{Error, Result};
use crate::field::{make_field, Fel, FieldCtx};
use crate::matrix::Mat;
use crate::poly::{Monomial, MultiPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Family {
    GuEven,
    GuOdd,
    Sp,
    OPlus,
    OMinus,
    OOdd,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::GuEven => "gu-even",
            Family::GuOdd => "gu-odd",
            Family::Sp => "sp",
            Family::OPlus => "o-plus",
            Family::OMinus => "o-minus",
            Family::OOdd => "o-odd",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        Some(match s {
            "gu-even" => Family::GuEven,
            "gu-odd" => Family::GuOdd,
            "sp" => Family::Sp,
            "o-plus" => Family::OPlus,
            "o-minus" => Family::OMinus,
            "o-odd" => Family::OOdd,
            _ => return None,
        })
    }

    pub fn all() -> [Family; 6] {
        [
            Family::GuEven,
            Family::GuOdd,
            Family::Sp,
            Family::OPlus,
            Family::OMinus,
            Family::OOdd,
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// A classical family with its rank parameter and base prime power, plus the
/// derived shape data for the matrix construction.
#[derive(Clone)]
pub struct GroupSpec {
    pub family: Family,
    pub m: usize,
    pub q: u64,
    pub p: u64,
    pub e: u32,
    /// Acting field: GF(q^2) for the unitary families, GF(q) otherwise.
    pub ctx: Arc<FieldCtx>,
    pub eps: Sign,
    /// Matrix size.
    pub n: usize,
    /// Size of the X1 corner blocks.
    pub n_blk: usize,
    /// Size of the middle X2 block.
    pub l: usize,
    hermitian: bool,
}

fn factor_prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            let mut e = 0;
            let mut k = q;
            while k.is_multiple_of(p) {
                k /= p;
                e += 1;
            }
            return if k == 1 { Some((p, e)) } else { None };
        }
        p += 1;
    }
    Some((q, 1))
}

impl GroupSpec {
    pub fn new(family: Family, m: usize, q: u64) -> Result<GroupSpec> {
        if m < 1 {
            return Err(Error::OutOfRange("m must be at least 1".into()));
        }
        let (p, e) = factor_prime_power(q)
            .ok_or_else(|| Error::InconsistentParams(format!("q={q} is not a prime power")))?;
        let hermitian = matches!(family, Family::GuEven | Family::GuOdd);
        let s = if hermitian { 2 * e } else { e };
        let ctx = make_field(p, s)?;
        let (n, n_blk, l, eps) = match family {
            Family::GuEven => (2 * m, m - 1, 2, Sign::Plus),
            Family::GuOdd => (2 * m + 1, m, 1, Sign::Plus),
            Family::Sp => (2 * m, m - 1, 2, Sign::Minus),
            Family::OPlus => (2 * m, m - 1, 2, Sign::Plus),
            Family::OMinus => (2 * m + 2, m, 2, Sign::Plus),
            Family::OOdd => (2 * m + 1, m, 1, Sign::Plus),
        };
        debug_assert_eq!(n, 2 * n_blk + l);
        Ok(GroupSpec {
            family,
            m,
            q,
            p,
            e,
            ctx,
            eps,
            n,
            n_blk,
            l,
            hermitian,
        })
    }

    pub fn is_even_char(&self) -> bool {
        self.p == 2
    }

    pub fn is_orthogonal(&self) -> bool {
        matches!(self.family, Family::OPlus | Family::OMinus | Family::OOdd)
    }

    /// True when the Sylow group is generated by the unitriangular part G1
    /// together with an adjoined order-two element.
    pub fn has_adjoined(&self) -> bool {
        self.is_even_char() && matches!(self.family, Family::OPlus | Family::OMinus)
    }

    pub fn hermitian(&self) -> bool {
        self.hermitian
    }

    /// Entry-wise bar map: a -> a^q on GF(q^2) for unitary families, the
    /// identity otherwise.
    pub fn bar(&self, a: Fel) -> Fel {
        if self.hermitian {
            self.ctx.frobenius(a, self.e)
        } else {
            a
        }
    }

    pub fn bar_mat(&self, m: &Mat) -> Mat {
        if self.hermitian {
            m.map(|a| self.bar(a))
        } else {
            m.clone()
        }
    }

    /// The smallest a with X^2 + X + a root-free over GF(q), for the minus
    /// orthogonal family.
    pub fn minus_form_scalar(&self) -> Result<Fel> {
        if self.family != Family::OMinus {
            return Err(Error::InconsistentParams(
                "form scalar a only exists for the minus orthogonal family".into(),
            ));
        }
        let ctx = &self.ctx;
        let values: HashSet<Fel> = ctx
            .elements()
            .map(|x| ctx.neg(ctx.add(ctx.mul(x, x), x)))
            .collect();
        for a in ctx.elements() {
            if !values.contains(&a) {
                return Ok(a);
            }
        }
        unreachable!("x^2+x+a cannot have roots for every a")
    }

    /// The middle block X2 of the form matrix.
    pub fn x2(&self) -> Result<Mat> {
        let ctx = self.ctx.clone();
        Ok(match self.family {
            Family::GuEven => Mat::anti_identity(ctx, 2),
            Family::GuOdd => Mat::identity(ctx, 1),
            Family::Sp => {
                let one = Fel::ONE;
                Mat::from_rows(
                    ctx.clone(),
                    vec![vec![Fel::ZERO, one], vec![ctx.neg(one), Fel::ZERO]],
                )
            }
            Family::OPlus => Mat::anti_identity(ctx, 2),
            Family::OMinus => {
                if self.is_even_char() {
                    Mat::anti_identity(ctx, 2)
                } else {
                    let a = self.minus_form_scalar()?;
                    let two_a = ctx.add(a, a);
                    Mat::from_rows(ctx, vec![vec![a, Fel::ONE], vec![Fel::ONE, two_a]])
                }
            }
            Family::OOdd => {
                if self.is_even_char() {
                    Mat::zero(ctx, 1, 1)
                } else {
                    let two = ctx.from_int(2);
                    Mat::from_rows(ctx, vec![vec![two]])
                }
            }
        })
    }

    /// The adjoined order-two element for even-characteristic O+/O-.
    pub fn adjoined_element(&self) -> Option<Mat> {
        if !self.has_adjoined() {
            return None;
        }
        let ctx = self.ctx.clone();
        let k = self.n_blk;
        let mut m = Mat::identity(ctx.clone(), self.n);
        match self.family {
            Family::OPlus => {
                // middle J_2 block
                m.set(k, k, Fel::ZERO);
                m.set(k, k + 1, Fel::ONE);
                m.set(k + 1, k, Fel::ONE);
                m.set(k + 1, k + 1, Fel::ZERO);
            }
            Family::OMinus => {
                // middle [[1,1],[0,1]] block
                m.set(k, k + 1, Fel::ONE);
            }
            _ => unreachable!(),
        }
        Some(m)
    }
}

impl std::fmt::Debug for GroupSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}(m={}, q={})", self.family.name(), self.m, self.q)
    }
}

/// The form matrix, quadratic form (orthogonal families) and the scalar a
/// (minus orthogonal family).
#[derive(Clone, Debug)]
pub struct FormData {
    pub x: Mat,
    pub q_form: Option<MultiPoly>,
    pub a: Option<Fel>,
}

pub fn form_of(spec: &GroupSpec) -> Result<FormData> {
    let ctx = spec.ctx.clone();
    let k = spec.n_blk;
    let n = spec.n;
    let x2 = spec.x2()?;
    let mut x = Mat::zero(ctx.clone(), n, n);
    // [[0,0,X1],[0,X2,0],[eps*conj(X1)^T,0,0]] with X1 = J_k
    for i in 0..k {
        x.set(i, n - 1 - i, Fel::ONE);
    }
    for i in 0..spec.l {
        for j in 0..spec.l {
            x.set(k + i, k + j, x2.get(i, j));
        }
    }
    let corner = match spec.eps {
        Sign::Plus => Fel::ONE,
        Sign::Minus => ctx.neg(Fel::ONE),
    };
    for i in 0..k {
        x.set(n - 1 - i, i, corner);
    }

    let (q_form, a) = if spec.is_orthogonal() {
        let m = spec.m;
        let mut q = MultiPoly::zero(ctx.clone(), n);
        let pair_count = m;
        for i in 1..=pair_count {
            let mono = Monomial::var(n, n - i + 1).mul(&Monomial::var(n, i));
            q.add_term(mono, Fel::ONE);
        }
        let a = match spec.family {
            Family::OMinus => Some(spec.minus_form_scalar()?),
            _ => None,
        };
        match spec.family {
            Family::OPlus => {}
            Family::OOdd => {
                q.add_term(Monomial::var(n, m + 1).pow_scale(2), Fel::ONE);
            }
            Family::OMinus => {
                let av = a.unwrap();
                q.add_term(Monomial::var(n, m + 1).pow_scale(2), Fel::ONE);
                q.add_term(
                    Monomial::var(n, m + 1).mul(&Monomial::var(n, m + 2)),
                    Fel::ONE,
                );
                q.add_term(Monomial::var(n, m + 2).pow_scale(2), av);
            }
            _ => unreachable!(),
        }
        (Some(q), a)
    } else {
        (None, None)
    };
    Ok(FormData { x, q_form, a })
}

/// Free coordinates of one group element: A unitriangular, B arbitrary,
/// F from the allowed solution set, the strictly-lower entries of S and the
/// free diagonal coordinates of S where the family admits them.
#[derive(Clone, Debug)]
pub struct ElementParams {
    pub a: Mat,
    pub b: Mat,
    pub f: Mat,
    /// Strictly-lower entries of S, row-major: (1,0),(2,0),(2,1),...
    pub s_lower: Vec<Fel>,
    /// Free diagonal coordinates; length must equal `diag_freedom(spec)`.
    pub s_diag: Vec<Fel>,
}

impl ElementParams {
    pub fn trivial(spec: &GroupSpec) -> Result<ElementParams> {
        Ok(ElementParams {
            a: Mat::identity(spec.ctx.clone(), spec.n_blk),
            b: Mat::zero(spec.ctx.clone(), spec.l, spec.n_blk),
            f: Mat::identity(spec.ctx.clone(), spec.l),
            s_lower: vec![Fel::ZERO; spec.n_blk * (spec.n_blk.saturating_sub(1)) / 2],
            s_diag: vec![Fel::ZERO; diag_freedom(spec)],
        })
    }
}

/// Number of free diagonal coordinates of S for the family.
pub fn diag_freedom(spec: &GroupSpec) -> usize {
    match spec.family {
        Family::GuEven | Family::GuOdd => spec.n_blk, // trace-kernel summand
        Family::Sp => spec.n_blk,                     // fully free
        _ => 0,                                       // pinned by the quadratic form or by 1/2
    }
}

/// A fixed c with c + conj(c) = 1, used for the particular solution of the
/// diagonal equation over GF(q^2).
fn half_trace_unit(spec: &GroupSpec) -> Fel {
    debug_assert!(spec.hermitian);
    let ctx = &spec.ctx;
    ctx.elements()
        .find(|&c| ctx.add(c, spec.bar(c)) == Fel::ONE)
        .expect("the trace map onto the subfield is surjective")
}

/// Complete S from its free coordinates so that S + eps*conj(S)^T = Y with
/// Y = -B^T X2 conj(B), applying the family's diagonal rule.
fn complete_s(spec: &GroupSpec, params: &ElementParams, y: &Mat, a_form: Option<Fel>) -> Result<Mat> {
    let ctx = &spec.ctx;
    let k = spec.n_blk;
    let mut s = Mat::zero(spec.ctx.clone(), k, k);
    let expected_lower = k * k.saturating_sub(1) / 2;
    if params.s_lower.len() != expected_lower {
        return Err(Error::InconsistentParams(format!(
            "expected {expected_lower} strictly-lower S coordinates, got {}",
            params.s_lower.len()
        )));
    }
    if params.s_diag.len() != diag_freedom(spec) {
        return Err(Error::InconsistentParams(format!(
            "expected {} free diagonal coordinates, got {}",
            diag_freedom(spec),
            params.s_diag.len()
        )));
    }
    // strictly lower entries are free
    let mut idx = 0;
    for i in 0..k {
        for j in 0..i {
            s.set(i, j, params.s_lower[idx]);
            idx += 1;
        }
    }
    // upper entries forced: s_ij = Y_ij - eps*conj(s_ji), i < j
    let eps = match spec.eps {
        Sign::Plus => Fel::ONE,
        Sign::Minus => ctx.neg(Fel::ONE),
    };
    for i in 0..k {
        for j in (i + 1)..k {
            let v = ctx.sub(y.get(i, j), ctx.mul(eps, spec.bar(s.get(j, i))));
            s.set(i, j, v);
        }
    }
    // diagonal per family
    for i in 0..k {
        let yii = y.get(i, i);
        let v = match spec.family {
            Family::GuEven | Family::GuOdd => {
                let c = half_trace_unit(spec);
                let t = params.s_diag[i];
                if ctx.add(t, spec.bar(t)) != Fel::ZERO {
                    return Err(Error::InconsistentParams(
                        "diagonal summand must lie in the trace kernel".into(),
                    ));
                }
                ctx.add(ctx.mul(c, yii), t)
            }
            Family::Sp => {
                if yii != Fel::ZERO {
                    return Err(Error::InconsistentParams(
                        "alternating right-hand side must have zero diagonal".into(),
                    ));
                }
                params.s_diag[i]
            }
            Family::OPlus | Family::OMinus | Family::OOdd => {
                if spec.is_even_char() {
                    if yii != Fel::ZERO {
                        return Err(Error::HypothesisHViolated);
                    }
                    let b1 = params.b.get(0, i);
                    match spec.family {
                        Family::OPlus => ctx.mul(b1, params.b.get(1, i)),
                        Family::OOdd => ctx.mul(b1, b1),
                        Family::OMinus => {
                            let b2 = params.b.get(1, i);
                            let a = a_form.expect("minus family carries a");
                            let t1 = ctx.mul(b1, b1);
                            let t2 = ctx.mul(b1, b2);
                            let t3 = ctx.mul(a, ctx.mul(b2, b2));
                            ctx.add(ctx.add(t1, t2), t3)
                        }
                        _ => unreachable!(),
                    }
                } else {
                    // 2*s_ii = Y_ii
                    let two_inv = ctx.inv(ctx.from_int(2))?;
                    ctx.mul(yii, two_inv)
                }
            }
        };
        s.set(i, i, v);
    }
    Ok(s)
}

/// F-block candidates satisfying F^T X2 conj(F) = X2 inside U(l), with the
/// quadratic-form filter applied for the even-characteristic orthogonal
/// families.
pub fn fblk_solutions(spec: &GroupSpec, quadratic_filter: bool) -> Result<Vec<Mat>> {
    let ctx = spec.ctx.clone();
    let x2 = spec.x2()?;
    if spec.l == 1 {
        return Ok(vec![Mat::identity(ctx, 1)]);
    }
    let form = if quadratic_filter && spec.is_even_char() && spec.is_orthogonal() {
        Some(form_of(spec)?)
    } else {
        None
    };
    let mut out = Vec::new();
    for c in ctx.elements() {
        let mut f = Mat::identity(ctx.clone(), 2);
        f.set(1, 0, c);
        let lhs = f.transpose().mul(&x2).mul(&spec.bar_mat(&f));
        if lhs != x2 {
            continue;
        }
        if let Some(fd) = &form {
            // the block-diagonal element carrying only F must fix Q
            let k = spec.n_blk;
            let id_k = Mat::identity(ctx.clone(), k);
            let zero_b = Mat::zero(ctx.clone(), 2, k);
            let zero_c = Mat::zero(ctx.clone(), k, k);
            let zero_d = Mat::zero(ctx.clone(), k, 2);
            let m = Mat::block3(ctx.clone(), k, 2, &id_k, &zero_b, &f, &zero_c, &zero_d, &id_k);
            let q = fd.q_form.as_ref().unwrap();
            if &q.act(&m)? != q {
                continue;
            }
        }
        out.push(f);
    }
    Ok(out)
}

/// The constructive F-block set used to parameterize G1: even-characteristic
/// orthogonal families pin F to the identity (the adjoined element supplies
/// the index-two part); elsewhere it is the full solution set.
pub fn fblk_constructive(spec: &GroupSpec) -> Result<Vec<Mat>> {
    if spec.is_even_char() && spec.is_orthogonal() {
        return Ok(vec![Mat::identity(spec.ctx.clone(), spec.l)]);
    }
    fblk_solutions(spec, false)
}

pub type GroupElement = Mat;

/// Assemble the group element determined by the free parameters.
pub fn element(spec: &GroupSpec, params: &ElementParams) -> Result<GroupElement> {
    let ctx = spec.ctx.clone();
    let k = spec.n_blk;
    let l = spec.l;
    if params.a.rows() != k || params.a.cols() != k {
        return Err(Error::InconsistentParams("A block has wrong shape".into()));
    }
    if !params.a.is_lower_unitriangular() {
        return Err(Error::InconsistentParams("A must be unitriangular".into()));
    }
    if params.b.rows() != l || params.b.cols() != k {
        return Err(Error::InconsistentParams("B block has wrong shape".into()));
    }
    if params.f.rows() != l || params.f.cols() != l {
        return Err(Error::InconsistentParams("F block has wrong shape".into()));
    }
    let allowed = fblk_constructive(spec)?;
    if !allowed.iter().any(|f| f == &params.f) {
        return Err(Error::InconsistentParams(
            "F block is outside the allowed solution set".into(),
        ));
    }

    let x2 = spec.x2()?;
    let form = form_of(spec)?;
    // Y = -B^T X2 conj(B)
    let y = params
        .b
        .transpose()
        .mul(&x2)
        .mul(&spec.bar_mat(&params.b))
        .neg();
    let s = complete_s(spec, params, &y, form.a)?;

    let j_k = Mat::anti_identity(ctx.clone(), k);
    let a_bar_inv_t = spec.bar_mat(&params.a).inverse()?.transpose();
    let p_blk = j_k.mul(&a_bar_inv_t);
    let c_blk = p_blk.mul(&spec.bar_mat(&s));
    let d_blk = p_blk
        .mul(&spec.bar_mat(&params.b).transpose())
        .mul(&spec.bar_mat(&x2))
        .mul(&params.f)
        .neg();
    let e_blk = p_blk.mul(&j_k);
    Ok(Mat::block3(
        ctx, k, l, &params.a, &params.b, &params.f, &c_blk, &d_blk, &e_blk,
    ))
}

/// Membership test for the Sylow group: lower unitriangular, preserves the
/// form (M^T X conj(M) = X), preserves the quadratic form in even
/// characteristic, and has an admissible F block. For the families with an
/// adjoined element L, membership of M in <G1, L> is tested as membership of
/// M or L*M in G1.
pub fn is_member(spec: &GroupSpec, m: &Mat) -> Result<bool> {
    if m.rows() != spec.n || m.cols() != spec.n {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{}, expected {}",
            m.rows(),
            m.cols(),
            spec.n
        )));
    }
    if in_g1(spec, m)? {
        return Ok(true);
    }
    if let Some(l_elt) = spec.adjoined_element() {
        return in_g1(spec, &l_elt.mul(m));
    }
    Ok(false)
}

fn in_g1(spec: &GroupSpec, m: &Mat) -> Result<bool> {
    if !m.is_lower_unitriangular() {
        return Ok(false);
    }
    let form = form_of(spec)?;
    let lhs = m.transpose().mul(&form.x).mul(&spec.bar_mat(m));
    if lhs != form.x {
        return Ok(false);
    }
    if spec.is_even_char() && spec.is_orthogonal() {
        let q = form.q_form.as_ref().unwrap();
        if &q.act(m)? != q {
            return Ok(false);
        }
        // even O+/O-: the F block must come from the constructive set
        let k = spec.n_blk;
        let fblk = m.block_at(k, k, spec.l, spec.l);
        if !fblk_constructive(spec)?.iter().any(|f| f == &fblk) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// F_p-basis of the acting field in the power basis.
fn field_basis(ctx: &Arc<FieldCtx>) -> Vec<Fel> {
    (0..ctx.s())
        .map(|i| {
            let mut digits = vec![0u64; ctx.s() as usize];
            digits[i as usize] = 1;
            ctx.from_digits(&digits)
        })
        .collect()
}

/// Greedy F_p-basis of a subset closed under addition.
fn additive_basis(ctx: &Arc<FieldCtx>, set: &[Fel]) -> Vec<Fel> {
    let mut basis: Vec<Fel> = Vec::new();
    let mut span: HashSet<Fel> = HashSet::new();
    span.insert(Fel::ZERO);
    for &v in set {
        if span.contains(&v) {
            continue;
        }
        basis.push(v);
        // close the span under addition with multiples of v
        let old: Vec<Fel> = span.iter().copied().collect();
        for &w in &old {
            let mut acc = w;
            for _ in 0..(ctx.p() - 1) {
                acc = ctx.add(acc, v);
                span.insert(acc);
            }
        }
    }
    basis
}

/// One-parameter generators: each free coordinate runs over an F_p-basis of
/// its value set, all other coordinates zero; plus the adjoined element for
/// the even-characteristic +/- orthogonal families.
pub fn generators(spec: &GroupSpec) -> Result<Vec<GroupElement>> {
    let ctx = spec.ctx.clone();
    let k = spec.n_blk;
    let basis = field_basis(&ctx);
    let mut out = Vec::new();

    // A slots
    for i in 1..k {
        for j in 0..i {
            for &t in &basis {
                let mut params = ElementParams::trivial(spec)?;
                params.a.set(i, j, t);
                out.push(element(spec, &params)?);
            }
        }
    }
    // B slots
    for i in 0..spec.l {
        for j in 0..k {
            for &t in &basis {
                let mut params = ElementParams::trivial(spec)?;
                params.b.set(i, j, t);
                out.push(element(spec, &params)?);
            }
        }
    }
    // F slot
    let fset = fblk_constructive(spec)?;
    if fset.len() > 1 {
        let c_values: Vec<Fel> = fset.iter().map(|f| f.get(1, 0)).collect();
        for &c in &additive_basis(&ctx, &c_values) {
            let mut params = ElementParams::trivial(spec)?;
            params.f.set(1, 0, c);
            out.push(element(spec, &params)?);
        }
    }
    // S strictly-lower slots
    let lower_len = k * k.saturating_sub(1) / 2;
    for idx in 0..lower_len {
        for &t in &basis {
            let mut params = ElementParams::trivial(spec)?;
            params.s_lower[idx] = t;
            out.push(element(spec, &params)?);
        }
    }
    // S diagonal slots
    let diag_values: Vec<Fel> = match spec.family {
        Family::GuEven | Family::GuOdd => {
            let (kernel, _) = ctx.trace_kernel()?;
            additive_basis(&ctx, &kernel)
        }
        Family::Sp => basis.clone(),
        _ => Vec::new(),
    };
    for i in 0..diag_freedom(spec) {
        for &t in &diag_values {
            let mut params = ElementParams::trivial(spec)?;
            params.s_diag[i] = t;
            out.push(element(spec, &params)?);
        }
    }
    if let Some(l_elt) = spec.adjoined_element() {
        out.push(l_elt);
    }
    // drop identity duplicates (a slot with basis value can be the identity
    // only if the basis were zero, which it is not) and exact duplicates
    let mut seen = HashSet::new();
    out.retain(|m| seen.insert(m.key()));
    Ok(out)
}

/// Generators of the unitriangular part G1 only.
pub fn g1_generators(spec: &GroupSpec) -> Result<Vec<GroupElement>> {
    let mut gens = generators(spec)?;
    if let Some(l_elt) = spec.adjoined_element() {
        gens.retain(|g| g != &l_elt);
    }
    Ok(gens)
}

fn all_tuples(r: u64, len: usize) -> impl Iterator<Item = Vec<u64>> {
    let total = (r as u128).pow(len as u32);
    (0..total).map(move |idx| {
        let mut v = Vec::with_capacity(len);
        let mut k = idx;
        for _ in 0..len {
            v.push((k % r as u128) as u64);
            k /= r as u128;
        }
        v
    })
}

/// Exhaustive enumeration over all admissible parameters; errors when the
/// closed-form order exceeds the cap.
pub fn enumerate_group(spec: &GroupSpec, cap: u64) -> Result<Vec<GroupElement>> {
    let order = group_order(spec);
    if order > cap as u128 {
        return Err(Error::CapExceeded(order, cap));
    }
    let ctx = spec.ctx.clone();
    let k = spec.n_blk;
    let r = ctx.r();
    let lower_len = k * k.saturating_sub(1) / 2;

    // value sets for the free diagonal coordinates
    let diag_values: Vec<Fel> = match spec.family {
        Family::GuEven | Family::GuOdd => ctx.trace_kernel()?.0,
        Family::Sp => ctx.elements().collect(),
        _ => Vec::new(),
    };
    let fset = fblk_constructive(spec)?;

    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for a_tuple in all_tuples(r, lower_len) {
        let mut a = Mat::identity(ctx.clone(), k);
        let mut idx = 0;
        for i in 1..k {
            for j in 0..i {
                a.set(i, j, Fel(a_tuple[idx] as u32));
                idx += 1;
            }
        }
        for b_tuple in all_tuples(r, spec.l * k) {
            let mut b = Mat::zero(ctx.clone(), spec.l, k);
            for (pos, &v) in b_tuple.iter().enumerate() {
                b.set(pos / k, pos % k, Fel(v as u32));
            }
            for f in &fset {
                for s_tuple in all_tuples(r, lower_len) {
                    let s_lower: Vec<Fel> = s_tuple.iter().map(|&v| Fel(v as u32)).collect();
                    let diag_len = diag_freedom(spec);
                    let diag_choices: Box<dyn Iterator<Item = Vec<Fel>>> = if diag_len == 0 {
                        Box::new(std::iter::once(Vec::new()))
                    } else {
                        let dv = diag_values.clone();
                        let dlen = dv.len() as u64;
                        Box::new(all_tuples(dlen, diag_len).map(move |t| {
                            t.iter().map(|&i| dv[i as usize]).collect()
                        }))
                    };
                    for s_diag in diag_choices {
                        let params = ElementParams {
                            a: a.clone(),
                            b: b.clone(),
                            f: f.clone(),
                            s_lower: s_lower.clone(),
                            s_diag,
                        };
                        let g = element(spec, &params)?;
                        if seen.insert(g.key()) {
                            out.push(g);
                        }
                    }
                }
            }
        }
    }
    if let Some(l_elt) = spec.adjoined_element() {
        let coset: Vec<Mat> = out.iter().map(|g| l_elt.mul(g)).collect();
        for g in coset {
            if seen.insert(g.key()) {
                out.push(g);
            }
        }
    }
    Ok(out)
}

fn pow128(b: u64, e: u32) -> u128 {
    (b as u128).pow(e)
}

/// Closed-form Sylow order.
pub fn group_order(spec: &GroupSpec) -> u128 {
    let q = spec.q;
    let m = spec.m as u32;
    match spec.family {
        Family::GuEven => pow128(q, 2 * m * m - m),
        Family::GuOdd => pow128(q, 2 * m * m + m),
        Family::Sp => pow128(q, m * m),
        Family::OPlus => {
            let base = pow128(q, m * (m - 1));
            if spec.is_even_char() {
                2 * base
            } else {
                base
            }
        }
        Family::OMinus => {
            let base = pow128(q, m * (m + 1));
            if spec.is_even_char() {
                2 * base
            } else {
                base
            }
        }
        Family::OOdd => pow128(q, m * m),
    }
}

/// Order of the ambient classical group.
pub fn classical_order(spec: &GroupSpec) -> u128 {
    let q = spec.q as u128;
    let m = spec.m as u32;
    match spec.family {
        Family::GuEven | Family::GuOdd => {
            let n = spec.n as u32;
            let mut o = (q).pow(n * (n - 1) / 2);
            for i in 1..=n {
                let qi = q.pow(i);
                let term = if i % 2 == 0 { qi - 1 } else { qi + 1 };
                o *= term;
            }
            o
        }
        Family::Sp => {
            let mut o = q.pow(m * m);
            for i in 1..=m {
                o *= q.pow(2 * i) - 1;
            }
            o
        }
        Family::OPlus => {
            let mut o = 2 * q.pow(m * (m - 1)) * (q.pow(m) - 1);
            for i in 1..m {
                o *= q.pow(2 * i) - 1;
            }
            o
        }
        Family::OMinus => {
            let mut o = 2 * q.pow(m * (m + 1)) * (q.pow(m + 1) + 1);
            for i in 1..=m {
                o *= q.pow(2 * i) - 1;
            }
            o
        }
        Family::OOdd => {
            let mut o = q.pow(m * m);
            for i in 1..=m {
                o *= q.pow(2 * i) - 1;
            }
            if spec.q % 2 == 1 {
                o *= 2;
            }
            o
        }
    }
}

/// Largest power of p dividing x.
pub fn p_part(mut x: u128, p: u64) -> u128 {
    let mut out = 1u128;
    while x.is_multiple_of(p as u128) {
        x /= p as u128;
        out *= p as u128;
    }
    out
}

/// The number of S blocks solving S + eps*conj(S)^T = -B^T X2 conj(B),
/// independent of B; hypothesis (H) is asserted in even characteristic.
pub fn count_s_solutions(spec: &GroupSpec, b: &Mat) -> Result<u128> {
    let ctx = &spec.ctx;
    let k = spec.n_blk;
    if b.rows() != spec.l || b.cols() != k {
        return Err(Error::DimensionMismatch("B block has wrong shape".into()));
    }
    let x2 = spec.x2()?;
    let y = b.transpose().mul(&x2).mul(&spec.bar_mat(b)).neg();
    let q = spec.q;
    let kk = k as u32;
    if spec.hermitian {
        return Ok(pow128(q, kk * (kk.saturating_sub(1))) * pow128(q, kk));
    }
    let even = spec.is_even_char();
    if even {
        for i in 0..k {
            if y.get(i, i) != Fel::ZERO {
                return Err(Error::HypothesisHViolated);
            }
        }
    }
    let half = kk * kk.saturating_sub(1) / 2;
    match spec.eps {
        Sign::Plus => {
            if even {
                Ok(pow128(q, half) * pow128(q, kk))
            } else {
                Ok(pow128(q, half))
            }
        }
        Sign::Minus => {
            // the alternating right-hand side has zero diagonal over F_q
            for i in 0..k {
                debug_assert_eq!(y.get(i, i), Fel::ZERO);
            }
            let _ = ctx;
            Ok(pow128(q, half) * pow128(q, kk))
        }
    }
}

/// Exhaustive count of S solutions, the oracle for `count_s_solutions`.
pub fn count_s_solutions_brute(spec: &GroupSpec, b: &Mat) -> Result<u128> {
    let ctx = spec.ctx.clone();
    let k = spec.n_blk;
    let r = ctx.r();
    let total = (r as u128).pow((k * k) as u32);
    if total > caps().span as u128 * caps().span as u128 {
        return Err(Error::ExpansionTooLarge(total, caps().span));
    }
    let x2 = spec.x2()?;
    let y = b.transpose().mul(&x2).mul(&spec.bar_mat(b)).neg();
    let eps = match spec.eps {
        Sign::Plus => Fel::ONE,
        Sign::Minus => ctx.neg(Fel::ONE),
    };
    let mut count = 0u128;
    for tuple in all_tuples(r, k * k) {
        let mut s = Mat::zero(ctx.clone(), k, k);
        for (pos, &v) in tuple.iter().enumerate() {
            s.set(pos / k, pos % k, Fel(v as u32));
        }
        let lhs = s.add(&spec.bar_mat(&s).transpose().scale(eps));
        if lhs == y {
            count += 1;
        }
    }
    Ok(count)
}

/// BFS closure of a generating set; errors beyond the cap.
pub fn closure(gens: &[Mat], cap: u64) -> Result<Vec<Mat>> {
    let Some(first) = gens.first() else {
        return Ok(Vec::new());
    };
    let id = Mat::identity(first.ctx().clone(), first.rows());
    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut out = vec![id.clone()];
    seen.insert(id.key(), 0);
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for g in &frontier {
            for h in gens {
                let prod = g.mul(h);
                let key = prod.key();
                if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(key) {
                    if out.len() as u64 >= cap {
                        return Err(Error::CapExceeded(out.len() as u128 + 1, cap));
                    }
                    e.insert(out.len());
                    out.push(prod.clone());
                    next.push(prod);
                }
            }
        }
        frontier = next;
    }
    Ok(out)
}
