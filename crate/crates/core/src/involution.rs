//! Anti-automorphisms and involutions compatible with a grading of `M_n`.
//!
//! Block data come in structured form: `ℓ` invariant blocks of odd size,
//! `m − ℓ` invariant blocks of even size and `k − m` swapped pairs.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::abgroup::{FiniteSubgroup, GroupElement, GroupSpec};
use crate::bichar::{BicharWire, Bicharacter, QuadForm};
use crate::cyclotomic::CycloNum;
use crate::error::{GradingError, Result};
use crate::graded_matrix::{
    construct_with_realization, standard_division_realization, verify_associative_grading, DivisionRealization,
    GradedAlgebra, MatrixGradingParams, VerificationReport,
};
use crate::linalg::{Echelon, Matrix};
use crate::CycloMatrix;

/// `κ = (q_1, …, q_ℓ, 2q_{ℓ+1}, …, 2q_m, q_{m+1}, q_{m+1}, …, q_k, q_k)`
/// with `γ = (g_1, …, g_m, g'_{m+1}, g''_{m+1}, …, g'_k, g''_k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StructuredKappaGamma {
    pub ell: usize,
    pub m: usize,
    pub k: usize,
    pub q: Vec<usize>,
    pub gamma_single: Vec<GroupElement>,
    pub gamma_pairs: Vec<(GroupElement, GroupElement)>,
}

impl StructuredKappaGamma {
    pub fn new(
        ell: usize,
        m: usize,
        k: usize,
        q: Vec<usize>,
        gamma_single: Vec<GroupElement>,
        gamma_pairs: Vec<(GroupElement, GroupElement)>,
    ) -> Result<Self> {
        let s = StructuredKappaGamma { ell, m, k, q, gamma_single, gamma_pairs };
        s.check_shape()?;
        Ok(s)
    }

    fn check_shape(&self) -> Result<()> {
        let bad = |m: String| Err(GradingError::InvalidParams(m));
        if !(self.ell <= self.m && self.m <= self.k) {
            return bad(format!("need ell <= m <= k, got {} {} {}", self.ell, self.m, self.k));
        }
        if self.k == 0 {
            return bad("at least one block is required".into());
        }
        if self.q.len() != self.k {
            return bad(format!("q has {} entries, expected k = {}", self.q.len(), self.k));
        }
        if self.q.contains(&0) {
            return bad("q entries must be positive".into());
        }
        if self.q[..self.ell].iter().any(|q| q % 2 == 0) {
            return bad("q_1, ..., q_ell must be odd".into());
        }
        if self.gamma_single.len() != self.m || self.gamma_pairs.len() != self.k - self.m {
            return bad("gamma_single needs m entries and gamma_pairs k - m".into());
        }
        Ok(())
    }

    /// The flattened `κ` of the underlying matrix grading.
    pub fn flat_kappa(&self) -> Vec<usize> {
        let mut out = vec![];
        for i in 0..self.m {
            out.push(if i < self.ell { self.q[i] } else { 2 * self.q[i] });
        }
        for i in self.m..self.k {
            out.extend([self.q[i], self.q[i]]);
        }
        out
    }

    pub fn flat_gamma(&self) -> Vec<GroupElement> {
        let mut out = self.gamma_single.clone();
        for (a, b) in &self.gamma_pairs {
            out.extend([a.clone(), b.clone()]);
        }
        out
    }

    /// `|κ|`.
    pub fn size(&self) -> usize {
        self.flat_kappa().iter().sum()
    }

    /// All flattened entries must lie in distinct cosets of `T`.
    pub fn check_distinct(&self, g: &GroupSpec, t: &FiniteSubgroup) -> Result<()> {
        let flat = self.flat_gamma();
        for x in &flat {
            if !g.contains(x) {
                return Err(GradingError::NotInGroup(format!("{x:?}"), g.to_string()));
            }
        }
        for i in 0..flat.len() {
            for j in i + 1..flat.len() {
                if t.coset_eq(&flat[i], &flat[j]) {
                    return Err(GradingError::InvalidParams(format!(
                        "gamma entries {i} and {j} lie in the same coset of T"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Every entry inverted.
    pub fn inverse(&self, g: &GroupSpec) -> Self {
        StructuredKappaGamma {
            gamma_single: self.gamma_single.iter().map(|x| g.inv(x)).collect(),
            gamma_pairs: self.gamma_pairs.iter().map(|(a, b)| (g.inv(a), g.inv(b))).collect(),
            ..self.clone()
        }
    }

    /// `g_i² (i ≤ m)` followed by `g'_i g''_i (i > m)`.
    pub fn squares(&self, g: &GroupSpec) -> Vec<GroupElement> {
        self.gamma_single
            .iter()
            .map(|x| g.square(x))
            .chain(self.gamma_pairs.iter().map(|(a, b)| g.mul(a, b)))
            .collect()
    }

    /// All squares `γ_i²` (`i ≤ m`) and products `γ'_j γ''_j` congruent modulo `T`.
    pub fn squares_congruent(&self, g: &GroupSpec, t: &FiniteSubgroup) -> bool {
        let sq = self.squares(g);
        sq.iter().all(|x| t.coset_eq(x, &sq[0]))
    }
}

/// Outcome of a successful `*`-admissibility check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarAdmissible {
    /// `t_1, …, t_ℓ` with `g_1² t_1 = ⋯ = g_ℓ² t_ℓ`.
    pub tau_prefix: Vec<GroupElement>,
    /// Common value of `β(t_1), …, β(t_ℓ)` when `ℓ > 0`.
    pub delta: Option<i8>,
}

/// The quadratic form `t ↦ β(t)` of the standard realization (`ᵗX_t = β(t) X_t`).
pub fn quadratic_form(beta: &Bicharacter) -> Result<QuadForm> {
    let div = standard_division_realization(beta)?;
    crate::bichar::quadratic_form_from_basis(beta, div.basis())
}

/// All values `c` such that `γ_i² t_i = γ'_j γ''_j = c` can hold:
/// `c ∈ g_1² T` (or `g'_1 g''_1 T` when `m = 0`) and, writing
/// `t_i = c g_i⁻²`, the values `β(t_1), …, β(t_ℓ)` agree.
pub fn star_common_values(beta: &Bicharacter, sg: &StructuredKappaGamma) -> Result<Vec<GroupElement>> {
    let g = beta.parent();
    let t = beta.subgroup();
    if !t.is_elementary_2() {
        return Err(GradingError::NotElementaryTwo);
    }
    if !sg.squares_congruent(g, t) {
        return Ok(vec![]);
    }
    let qf = quadratic_form(beta)?;
    let sq = sg.squares(g);
    let mut out = vec![];
    for u in t.elements() {
        let c = g.mul(&sq[0], u);
        let vals: Vec<i8> = (0..sg.ell).map(|i| qf.value(&g.div(&c, &sq[i]))).collect::<Result<_>>()?;
        if vals.windows(2).all(|w| w[0] == w[1]) {
            out.push(c);
        }
    }
    out.sort();
    Ok(out)
}

/// Congruence of squares plus agreement of `β(t_i)` on odd blocks; `None` when either fails.
pub fn check_star_admissible(beta: &Bicharacter, sg: &StructuredKappaGamma) -> Result<Option<StarAdmissible>> {
    let g = beta.parent();
    let Some(c) = star_common_values(beta, sg)?.into_iter().next() else {
        return Ok(None);
    };
    let qf = quadratic_form(beta)?;
    let tau_prefix: Vec<GroupElement> = sg.gamma_single[..sg.ell].iter().map(|x| g.div(&c, &g.square(x))).collect();
    let delta = tau_prefix.first().map(|t| qf.value(t)).transpose()?;
    Ok(Some(StarAdmissible { tau_prefix, delta }))
}

/// Replaces `g''_i` by `g''_i t_i` for `i > m`; `tau_full` has `k` entries.
pub fn normalize_common_value(
    g: &GroupSpec,
    t: &FiniteSubgroup,
    sg: &StructuredKappaGamma,
    tau_full: &[GroupElement],
) -> Result<StructuredKappaGamma> {
    if tau_full.len() != sg.k {
        return Err(GradingError::InvalidParams("tau needs k entries".into()));
    }
    if let Some(x) = tau_full.iter().find(|x| !t.contains(x)) {
        return Err(GradingError::NotInSubgroup(format!("{x:?}")));
    }
    let mut out = sg.clone();
    for (j, pair) in out.gamma_pairs.iter_mut().enumerate() {
        pair.1 = g.mul(&pair.1, &tau_full[sg.m + j]);
    }
    Ok(out)
}

/// Normalizes to `γ_i² t_i = γ'_j γ''_j = c` and returns the data
/// with `τ = (c g_1⁻², …, c g_m⁻²)`.
pub fn normalize_with_value(
    g: &GroupSpec,
    t: &FiniteSubgroup,
    sg: &StructuredKappaGamma,
    c: &GroupElement,
) -> Result<(StructuredKappaGamma, Vec<GroupElement>)> {
    let mut tau_full = vec![];
    for x in &sg.gamma_single {
        tau_full.push(g.div(c, &g.square(x)));
    }
    for (a, b) in &sg.gamma_pairs {
        tau_full.push(g.div(c, &g.mul(a, b)));
    }
    if let Some(x) = tau_full.iter().find(|x| !t.contains(x)) {
        return Err(GradingError::InvalidParams(format!("squares are not congruent modulo T: {x:?} is not in T")));
    }
    let out = normalize_common_value(g, t, sg, &tau_full)?;
    tau_full.truncate(sg.m);
    Ok((out, tau_full))
}

/// Checks `γ_i² t_i = γ'_j γ''_j` exactly.
fn check_common_value(g: &GroupSpec, t: &FiniteSubgroup, sg: &StructuredKappaGamma, tau: &[GroupElement]) -> Result<()> {
    if tau.len() != sg.m {
        return Err(GradingError::InvalidParams(format!("tau has {} entries, expected m = {}", tau.len(), sg.m)));
    }
    if let Some(x) = tau.iter().find(|x| !t.contains(x)) {
        return Err(GradingError::NotInSubgroup(format!("{x:?}")));
    }
    let mut vals: Vec<GroupElement> = sg.gamma_single.iter().zip(tau).map(|(x, t)| g.mul(&g.square(x), t)).collect();
    vals.extend(sg.gamma_pairs.iter().map(|(a, b)| g.mul(a, b)));
    if vals.iter().any(|v| v != &vals[0]) {
        return Err(GradingError::InvalidParams("gamma and tau do not satisfy g_i^2 t_i = g'_j g''_j".into()));
    }
    Ok(())
}

/// `M*(G, T, β, κ, γ, τ, δ)`.
#[derive(Clone, Debug)]
pub struct InvolutionParams {
    group: GroupSpec,
    beta: Bicharacter,
    sg: StructuredKappaGamma,
    tau: Vec<GroupElement>,
    delta: i8,
}

impl InvolutionParams {
    pub fn new(
        group: &GroupSpec,
        beta: Bicharacter,
        sg: StructuredKappaGamma,
        tau: Vec<GroupElement>,
        delta: i8,
    ) -> Result<Self> {
        sg.check_shape()?;
        let t = beta.subgroup().clone();
        if beta.parent() != group {
            return Err(GradingError::InvalidParams("bicharacter lives in a different group".into()));
        }
        if !t.is_elementary_2() {
            return Err(GradingError::NotElementaryTwo);
        }
        if !beta.is_nondegenerate() {
            return Err(GradingError::Degenerate);
        }
        if delta != 1 && delta != -1 {
            return Err(GradingError::InvalidParams("delta must be +1 or -1".into()));
        }
        sg.check_distinct(group, &t)?;
        check_common_value(group, &t, &sg, &tau)?;
        let qf = quadratic_form(&beta)?;
        for (i, ti) in tau[..sg.ell].iter().enumerate() {
            if qf.value(ti)? != delta {
                return Err(GradingError::InvalidParams(format!(
                    "beta(t_{}) = {} differs from delta = {delta}",
                    i + 1,
                    qf.value(ti)?
                )));
            }
        }
        Ok(InvolutionParams { group: group.clone(), beta, sg, tau, delta })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn beta(&self) -> &Bicharacter {
        &self.beta
    }

    pub fn subgroup(&self) -> &FiniteSubgroup {
        self.beta.subgroup()
    }

    pub fn structured(&self) -> &StructuredKappaGamma {
        &self.sg
    }

    pub fn tau(&self) -> &[GroupElement] {
        &self.tau
    }

    pub fn delta(&self) -> i8 {
        self.delta
    }

    pub fn n(&self) -> usize {
        self.sg.size() * crate::graded_matrix::square_root_order(self.subgroup()).unwrap_or(1)
    }

    /// `sgn(S_i) = δ β(t_i)` for `ℓ < i ≤ m`.
    pub fn s_signs(&self) -> Result<Vec<i8>> {
        let qf = quadratic_form(&self.beta)?;
        self.tau[self.sg.ell..].iter().map(|t| Ok(self.delta * qf.value(t)?)).collect()
    }

    pub fn matrix_params(&self) -> Result<MatrixGradingParams> {
        MatrixGradingParams::new(&self.group, self.beta.clone(), self.sg.flat_kappa(), self.sg.flat_gamma())
    }

    pub fn phi_spec(&self) -> Result<PhiSpec> {
        let mu = vec![CycloNum::from_integer(self.delta as i64); self.sg.k - self.sg.m];
        PhiSpec::new(self.sg.clone(), self.tau.clone(), self.s_signs()?, mu)
    }

    pub fn to_wire(&self) -> InvolutionWire {
        let s = &self.sg;
        InvolutionWire {
            group: self.group.clone(),
            t: self.beta.to_wire(),
            ell: s.ell,
            m: s.m,
            k: s.k,
            q: s.q.clone(),
            gamma_single: s.gamma_single.clone(),
            gamma_pairs: s.gamma_pairs.clone(),
            tau: self.tau.clone(),
            delta: self.delta,
        }
    }

    pub fn from_wire(w: &InvolutionWire) -> Result<Self> {
        let g = w.group.clone().validated()?;
        let beta = Bicharacter::from_wire(&g, &w.t)?;
        let sg = StructuredKappaGamma::new(w.ell, w.m, w.k, w.q.clone(), w.gamma_single.clone(), w.gamma_pairs.clone())?;
        InvolutionParams::new(&g, beta, sg, w.tau.clone(), w.delta)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvolutionWire {
    pub group: GroupSpec,
    #[serde(rename = "T")]
    pub t: BicharWire,
    pub ell: usize,
    pub m: usize,
    pub k: usize,
    pub q: Vec<usize>,
    pub gamma_single: Vec<GroupElement>,
    pub gamma_pairs: Vec<(GroupElement, GroupElement)>,
    #[serde(default)]
    pub tau: Vec<GroupElement>,
    pub delta: i8,
}

/// The data of a block-diagonal form matrix `Φ`.
#[derive(Clone, Debug)]
pub struct PhiSpec {
    pub sg: StructuredKappaGamma,
    /// `t_1, …, t_m`.
    pub tau: Vec<GroupElement>,
    /// `sgn(S_i)` for `ℓ < i ≤ m`.
    pub s_signs: Vec<i8>,
    /// `μ_i` for `m < i ≤ k`.
    pub mu: Vec<CycloNum>,
}

impl PhiSpec {
    pub fn new(sg: StructuredKappaGamma, tau: Vec<GroupElement>, s_signs: Vec<i8>, mu: Vec<CycloNum>) -> Result<Self> {
        let bad = |m: &str| Err(GradingError::InvalidParams(m.to_string()));
        if tau.len() != sg.m {
            return bad("tau needs m entries");
        }
        if s_signs.len() != sg.m - sg.ell || s_signs.iter().any(|s| *s != 1 && *s != -1) {
            return bad("one sign in {+1, -1} is needed per even invariant block");
        }
        if mu.len() != sg.k - sg.m {
            return bad("one mu is needed per swapped pair");
        }
        if mu.iter().any(|x| x.is_zero()) {
            return bad("mu values must be nonzero");
        }
        Ok(PhiSpec { sg, tau, s_signs, mu })
    }

    /// The matrix `Φ` in the block layout of the flattened `(κ, γ)`.
    pub fn assemble(&self, div: &DivisionRealization) -> Result<CycloMatrix> {
        let d = div.dim();
        let n = self.sg.size() * d;
        let mut phi = Matrix::zeros(n, n);
        let one = CycloNum::one();
        let mut off = 0;
        for i in 0..self.sg.m {
            let q = self.sg.q[i];
            let x = div.matrix(&self.tau[i])?;
            let s = if i < self.sg.ell {
                Matrix::identity(q)
            } else if self.s_signs[i - self.sg.ell] == 1 {
                Matrix::identity(2 * q)
            } else {
                let mut s = Matrix::zeros(2 * q, 2 * q);
                for r in 0..q {
                    s.set(r, q + r, one.clone());
                    s.set(q + r, r, -one.clone());
                }
                s
            };
            let block = s.kron(x);
            phi.place(off, off, &block);
            off += block.rows();
        }
        for (j, mu) in self.mu.iter().enumerate() {
            let q = self.sg.q[self.sg.m + j];
            let mut s = Matrix::zeros(2 * q, 2 * q);
            for r in 0..q {
                s.set(r, q + r, one.clone());
                s.set(q + r, r, mu.clone());
            }
            let block = s.kron(&Matrix::identity(d));
            phi.place(off, off, &block);
            off += block.rows();
        }
        Ok(phi)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AntiAutKind {
    Involution,
    AntiAutomorphism,
}

/// A graded algebra with `φ(X) = Φ⁻¹ ᵗX Φ`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradedAlgebraWithAntiAut {
    pub algebra: GradedAlgebra,
    pub phi: CycloMatrix,
    pub kind: AntiAutKind,
}

impl GradedAlgebraWithAntiAut {
    pub fn new(algebra: GradedAlgebra, phi: CycloMatrix, kind: AntiAutKind) -> Result<Self> {
        if phi.rows() != algebra.n || phi.cols() != algebra.n {
            return Err(GradingError::InvalidParams("form matrix has the wrong size".into()));
        }
        Ok(GradedAlgebraWithAntiAut { algebra, phi, kind })
    }

    /// A closure computing `φ`; `None` if `Φ` is singular.
    pub fn map(&self) -> Option<impl Fn(&CycloMatrix) -> CycloMatrix + '_> {
        let inv = self.phi.inverse()?;
        Some(move |x: &CycloMatrix| inv.mul(&x.transpose()).mul(&self.phi))
    }
}

/// Anti-multiplicativity and degree preservation on basis pairs, plus
/// `φ² = id` on the basis for involutions (on `R_e` otherwise).
pub fn verify_involution(a: &GradedAlgebraWithAntiAut) -> VerificationReport {
    let mut report = verify_associative_grading(&a.algebra);
    if !report.passed {
        return report;
    }
    let Some(phi) = a.map() else {
        report.passed = false;
        report.violations.push(crate::graded_matrix::Violation {
            left: 0,
            right: 0,
            message: "form matrix is singular".into(),
        });
        return report;
    };
    let comps = a.algebra.components();
    let n2 = a.algebra.n * a.algebra.n;
    let empty = Echelon::new(n2);
    let images: Vec<CycloMatrix> = a.algebra.basis.iter().map(|h| phi(&h.matrix)).collect();
    let e = a.algebra.group.identity();
    let mut fail = |i: usize, j: usize, m: String| {
        report.passed = false;
        report.violations.push(crate::graded_matrix::Violation { left: i, right: j, message: m });
    };
    for (i, h) in a.algebra.basis.iter().enumerate() {
        let comp = comps.get(&h.degree).unwrap_or(&empty);
        if !comp.contains(images[i].as_slice()) {
            fail(i, i, format!("phi moves basis element {i} out of degree {:?}", h.degree));
        }
        let need_square = match a.kind {
            AntiAutKind::Involution => true,
            AntiAutKind::AntiAutomorphism => h.degree == e,
        };
        if need_square && phi(&images[i]) != h.matrix {
            fail(i, i, format!("phi squared is not the identity on basis element {i}"));
        }
    }
    for (i, x) in a.algebra.basis.iter().enumerate() {
        for (j, y) in a.algebra.basis.iter().enumerate() {
            let lhs = phi(&x.matrix.mul(&y.matrix));
            if lhs != images[j].mul(&images[i]) {
                fail(i, j, format!("phi does not reverse the product of {i} and {j}"));
            }
        }
    }
    report.checks += a.algebra.basis.len() * (a.algebra.basis.len() + 1);
    report
}

/// `+1` if `ᵗΦ = Φ`, `−1` if `ᵗΦ = −Φ`.
pub fn involution_sign(a: &GradedAlgebraWithAntiAut) -> Result<i8> {
    if a.kind != AntiAutKind::Involution {
        return Err(GradingError::InvalidParams("the sign is defined for involutions only".into()));
    }
    form_sign(&a.phi)
}

pub fn form_sign(phi: &CycloMatrix) -> Result<i8> {
    let t = phi.transpose();
    if &t == phi {
        Ok(1)
    } else if t == phi.neg() {
        Ok(-1)
    } else {
        Err(GradingError::Inconsistent("form matrix is neither symmetric nor skew".into()))
    }
}

/// Builds `M*(G, T, β, κ, γ, τ, δ)` with its block-diagonal `Φ`.
pub fn build_involution(p: &InvolutionParams) -> Result<GradedAlgebraWithAntiAut> {
    let div = standard_division_realization(p.beta())?;
    let algebra = construct_with_realization(&p.matrix_params()?, &div);
    let phi = p.phi_spec()?.assemble(&div)?;
    GradedAlgebraWithAntiAut::new(algebra, phi, AntiAutKind::Involution)
}

/// Builds `M(G, T, β, κ, γ)` with the anti-automorphism `X ↦ Φ⁻¹ ᵗX Φ`;
/// `γ` and `τ` must satisfy `γ_i² t_i = γ'_j γ''_j`.
pub fn build_anti_automorphism(
    group: &GroupSpec,
    beta: &Bicharacter,
    spec: &PhiSpec,
) -> Result<GradedAlgebraWithAntiAut> {
    let t = beta.subgroup();
    if !t.is_elementary_2() {
        return Err(GradingError::NotElementaryTwo);
    }
    spec.sg.check_distinct(group, t)?;
    check_common_value(group, t, &spec.sg, &spec.tau)?;
    let div = standard_division_realization(beta)?;
    let p = MatrixGradingParams::new(group, beta.clone(), spec.sg.flat_kappa(), spec.sg.flat_gamma())?;
    let algebra = construct_with_realization(&p, &div);
    let phi = spec.assemble(&div)?;
    GradedAlgebraWithAntiAut::new(algebra, phi, AntiAutKind::AntiAutomorphism)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::RootOfUnity;

    fn e(c: &[i64]) -> GroupElement {
        GroupElement::new(c)
    }

    fn cq(k: i64) -> CycloNum {
        CycloNum::from_integer(k)
    }

    fn pauli() -> (GroupSpec, Bicharacter) {
        let g = GroupSpec::finite(&[2, 2]);
        let b = Bicharacter::new(&g, &[e(&[1, 0]), e(&[0, 1])], 2, &[vec![0, 1], vec![1, 0]]).unwrap();
        (g, b)
    }

    fn sg(ell: usize, m: usize, k: usize, q: &[usize], single: &[&[i64]], pairs: &[(&[i64], &[i64])]) -> StructuredKappaGamma {
        StructuredKappaGamma::new(
            ell,
            m,
            k,
            q.to_vec(),
            single.iter().map(|c| e(c)).collect(),
            pairs.iter().map(|(a, b)| (e(a), e(b))).collect(),
        )
        .unwrap()
    }

    #[test]
    fn flattening() {
        let s = sg(1, 2, 3, &[3, 1, 2], &[&[0], &[1]], &[(&[2], &[3])]);
        assert_eq!(s.flat_kappa(), vec![3, 2, 2, 2]);
        assert_eq!(s.flat_gamma(), vec![e(&[0]), e(&[1]), e(&[2]), e(&[3])]);
        assert_eq!(s.size(), 9);
        assert!(StructuredKappaGamma::new(1, 1, 1, vec![2], vec![e(&[0])], vec![]).is_err());
        assert!(StructuredKappaGamma::new(1, 1, 2, vec![1, 1], vec![e(&[0])], vec![]).is_err());
    }

    #[test]
    fn admissibility_examples() {
        let z4 = GroupSpec::cyclic(4);
        let triv = Bicharacter::trivial(&z4);
        let one_block = sg(1, 1, 1, &[3], &[&[1]], &[]);
        assert!(check_star_admissible(&triv, &one_block).unwrap().is_some());
        let fails = sg(0, 2, 2, &[1, 1], &[&[0], &[1]], &[]);
        assert!(check_star_admissible(&triv, &fails).unwrap().is_none());

        let (g, b) = pauli();
        let s = sg(1, 1, 1, &[1], &[&[0, 0]], &[]);
        let vals = star_common_values(&b, &s).unwrap();
        assert_eq!(vals.len(), 4);
        let _ = g;
        let adm = check_star_admissible(&b, &s).unwrap().unwrap();
        assert_eq!(adm.tau_prefix.len(), 1);
        assert!(adm.delta.is_some());
    }

    #[test]
    fn odd_block_sign_condition_can_fail() {
        // G = Z_4², T = 2G: the squares of the four odd-block degrees run
        // over all of T, so β(c g_i⁻²) takes both signs for every c
        let g = GroupSpec::finite(&[4, 4]);
        let t = FiniteSubgroup::generate(&g, &[e(&[2, 0]), e(&[0, 2])]).unwrap();
        let b = Bicharacter::from_basis_exponents(&t, vec![vec![0, 1], vec![1, 0]]).unwrap();
        let qf = quadratic_form(&b).unwrap();
        let s = sg(4, 4, 4, &[1, 1, 1, 1], &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]], &[]);
        assert!(s.squares_congruent(&g, &t));
        assert!(check_star_admissible(&b, &s).unwrap().is_none());
        // brute force over all τ-prefixes
        let mut found = false;
        for t1 in t.elements() {
            let c = g.mul(&g.square(&s.gamma_single[0]), t1);
            let vals: Vec<i8> = s.gamma_single.iter().map(|x| qf.value(&g.div(&c, &g.square(x))).unwrap()).collect();
            found |= vals.iter().all(|v| *v == vals[0]);
        }
        assert!(!found);
        // three of the four blocks are admissible
        let s3 = sg(3, 3, 3, &[1, 1, 1], &[&[0, 0], &[1, 0], &[0, 1]], &[]);
        assert!(check_star_admissible(&b, &s3).unwrap().is_some());
    }

    #[test]
    fn normalization() {
        let (g, b) = pauli();
        let t = b.subgroup();
        let s = sg(0, 0, 1, &[1], &[], &[(&[0, 0], &[1, 0])]);
        let c = g.identity();
        assert!(normalize_with_value(&g, t, &s, &c).is_ok());
        let (n, tau) = normalize_with_value(&g, t, &s, &c).unwrap();
        assert!(tau.is_empty());
        assert_eq!(n.gamma_pairs[0], (e(&[0, 0]), e(&[0, 0])));
        // cosets modulo T are unchanged
        assert!(t.coset_eq(&n.gamma_pairs[0].1, &s.gamma_pairs[0].1));
        let same = normalize_common_value(&g, t, &n, &[g.identity()]).unwrap();
        assert_eq!(same, n);
    }

    #[test]
    fn transpose_involution_on_m2() {
        let z2 = GroupSpec::cyclic(2);
        let s = sg(2, 2, 2, &[1, 1], &[&[0], &[1]], &[]);
        let p = InvolutionParams::new(&z2, Bicharacter::trivial(&z2), s, vec![e(&[0]), e(&[0])], 1).unwrap();
        let a = build_involution(&p).unwrap();
        assert_eq!(a.phi, Matrix::identity(2));
        assert!(verify_involution(&a).passed);
        assert_eq!(involution_sign(&a).unwrap(), 1);
        // g_1² t_1 = g_2² t_2 with t = e holds since 1 + 1 = 0 in Z_2
    }

    #[test]
    fn symplectic_on_m2() {
        let g = GroupSpec::trivial();
        let s = sg(0, 0, 1, &[1], &[], &[(&[], &[])]);
        let p = InvolutionParams::new(&g, Bicharacter::trivial(&g), s.clone(), vec![], -1);
        // a pair needs two distinct cosets: impossible in the trivial group
        assert!(p.is_err());
        let z2 = GroupSpec::cyclic(2);
        let s = sg(0, 0, 1, &[1], &[], &[(&[0], &[0])]);
        assert!(InvolutionParams::new(&z2, Bicharacter::trivial(&z2), s, vec![], -1).is_err());
        let z3 = GroupSpec::cyclic(3);
        let s = sg(0, 0, 1, &[1], &[], &[(&[1], &[2])]);
        let p = InvolutionParams::new(&z3, Bicharacter::trivial(&z3), s, vec![], -1).unwrap();
        let a = build_involution(&p).unwrap();
        assert_eq!(a.phi, Matrix::from_rows(vec![vec![cq(0), cq(1)], vec![cq(-1), cq(0)]]));
        assert!(verify_involution(&a).passed);
        assert_eq!(involution_sign(&a).unwrap(), -1);
    }

    #[test]
    fn pauli_involution() {
        let (g, b) = pauli();
        let div = standard_division_realization(&b).unwrap();
        let qf = quadratic_form(&b).unwrap();
        for t in b.subgroup().elements() {
            let x = div.matrix(t).unwrap();
            assert_eq!(x.transpose(), x.scale(&cq(qf.value(t).unwrap() as i64)));
        }
        let s = sg(1, 1, 1, &[1], &[&[0, 0]], &[]);
        // the element with beta(t) = -1 is the product of the pair
        let (a0, b0) = div.basis().pairs[0].clone();
        let ab = g.mul(&a0, &b0);
        assert_eq!(qf.value(&ab).unwrap(), -1);
        let p = InvolutionParams::new(&g, b.clone(), s.clone(), vec![ab.clone()], -1).unwrap();
        let a = build_involution(&p).unwrap();
        assert_eq!(a.phi, Matrix::from_rows(vec![vec![cq(0), cq(-1)], vec![cq(1), cq(0)]]));
        assert!(verify_involution(&a).passed);
        assert_eq!(involution_sign(&a).unwrap(), -1);
        // delta must match beta(t_1)
        assert!(InvolutionParams::new(&g, b.clone(), s.clone(), vec![ab], 1).is_err());
        // transpose on the Pauli grading
        let p = InvolutionParams::new(&g, b, s, vec![g.identity()], 1).unwrap();
        let a = build_involution(&p).unwrap();
        assert_eq!(a.phi, Matrix::identity(2));
        assert!(verify_involution(&a).passed);
    }

    #[test]
    fn mixed_blocks_sign_matches_delta() {
        // Z_2 x Z_4 with T trivial: blocks g = 0, (0,2), pair (0,1),(0,3)
        let g = GroupSpec::finite(&[2, 4]);
        let b = Bicharacter::trivial(&g);
        for delta in [1i8, -1] {
            let s = sg(0, 2, 3, &[1, 1, 1], &[&[0, 0], &[1, 0]], &[(&[0, 1], &[0, 3])]);
            let p = InvolutionParams::new(&g, b.clone(), s, vec![e(&[0, 0]), e(&[0, 0])], delta).unwrap();
            let a = build_involution(&p).unwrap();
            assert_eq!(a.algebra.n, 6);
            let r = verify_involution(&a);
            assert!(r.passed, "{:?}", r.violations.first());
            assert_eq!(involution_sign(&a).unwrap(), delta);
        }
    }

    #[test]
    fn anti_automorphism_with_mu() {
        let z3 = GroupSpec::cyclic(3);
        let b = Bicharacter::trivial(&z3);
        let s = sg(0, 0, 1, &[1], &[], &[(&[1], &[2])]);
        let i4 = RootOfUnity::new(4, 1).to_cyclo();
        let spec = PhiSpec::new(s.clone(), vec![], vec![], vec![i4.clone()]).unwrap();
        let a = build_anti_automorphism(&z3, &b, &spec).unwrap();
        assert!(verify_involution(&a).passed);
        // φ² is conjugation by ᵗΦ⁻¹Φ = diag(μ, μ⁻¹)
        let w = a.phi.transpose().inverse().unwrap().mul(&a.phi);
        let want = Matrix::from_rows(vec![vec![i4.clone(), cq(0)], vec![cq(0), i4.inv().unwrap()]]);
        assert_eq!(w, want);
        let phi = a.map().unwrap();
        for h in &a.algebra.basis {
            let twice = phi(&phi(&h.matrix));
            assert_eq!(twice, w.inverse().unwrap().mul(&h.matrix).mul(&w));
        }
        assert!(PhiSpec::new(s, vec![], vec![], vec![CycloNum::zero()]).is_err());
        assert!(involution_sign(&a).is_err());
    }

    #[test]
    fn non_block_form_fails_degree_check() {
        let z2 = GroupSpec::cyclic(2);
        let s = sg(2, 2, 2, &[1, 1], &[&[0], &[1]], &[]);
        let p = InvolutionParams::new(&z2, Bicharacter::trivial(&z2), s, vec![e(&[0]), e(&[0])], 1).unwrap();
        let mut a = build_involution(&p).unwrap();
        a.phi = Matrix::from_rows(vec![vec![cq(1), cq(1)], vec![cq(1), cq(2)]]);
        let r = verify_involution(&a);
        assert!(!r.passed);
    }

    #[test]
    fn wire_round_trip() {
        let (g, b) = pauli();
        let s = sg(1, 1, 1, &[1], &[&[0, 0]], &[]);
        let p = InvolutionParams::new(&g, b, s, vec![g.identity()], 1).unwrap();
        let w = serde_json::to_value(p.to_wire()).unwrap();
        assert_eq!(w["ell"], 1);
        let q = InvolutionParams::from_wire(&serde_json::from_value(w).unwrap()).unwrap();
        assert_eq!(q.structured(), p.structured());
        assert_eq!(q.delta(), 1);
    }
}
