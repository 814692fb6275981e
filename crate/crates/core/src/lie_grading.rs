//! Gradings on the classical simple Lie algebras realized inside `M_n`:
//! Type I and Type II gradings on `sl_n`, and `so_n`, `sp_n` as skew
//! elements of a graded algebra with involution.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::abgroup::{
    chi_squared_on_quotient, quotient_by_order2, solve_character, Character, FiniteSubgroup, GroupElement, GroupSpec,
    QuotientContext,
};
use crate::bichar::{BicharWire, Bicharacter};
use crate::cyclotomic::{CycloNum, RootOfUnity};
use crate::error::{GradingError, Result};
use crate::graded_matrix::{
    construct_matrix_grading, construct_with_realization, square_root_order, standard_division_realization,
    AlgebraKind, GradedAlgebra, Homogeneous, LieFamily, MatrixGradingParams, MatrixParamsWire,
};
use crate::involution::{
    build_involution, quadratic_form, AntiAutKind, GradedAlgebraWithAntiAut, InvolutionParams, InvolutionWire, PhiSpec,
    StructuredKappaGamma,
};
use crate::linalg::{Echelon, Matrix};
use crate::CycloMatrix;

/// `(G, h, H)` with the canonical character `χ` (`χ(h) = −1`), the
/// quotient `Ḡ = G/⟨h⟩`, `T = H ∩ ker χ` and its image `T̄ ⊂ Ḡ`.
#[derive(Clone, Debug)]
pub struct TypeIIContext {
    group: GroupSpec,
    h: GroupElement,
    hsub: FiniteSubgroup,
    quotient: QuotientContext,
    chi: Character,
    t: FiniteSubgroup,
    tbar: FiniteSubgroup,
}

impl TypeIIContext {
    pub fn new(group: &GroupSpec, h: &GroupElement, h_gens: &[GroupElement]) -> Result<Self> {
        let quotient = quotient_by_order2(group, h)?;
        let hsub = FiniteSubgroup::generate(group, h_gens)?;
        if !hsub.contains(h) {
            return Err(GradingError::InvalidParams("h must lie in H".into()));
        }
        let rank = hsub.rank_2()?;
        if rank % 2 == 0 {
            return Err(GradingError::InvalidParams(format!("H has even rank {rank}")));
        }
        let chi = solve_character(group, h)?;
        let t = hsub.kernel_of(&chi);
        let tbar_gens: Vec<GroupElement> = t.elements().iter().map(|x| quotient.project(x)).collect();
        let tbar = FiniteSubgroup::generate(quotient.quotient(), &tbar_gens)?;
        Ok(TypeIIContext { group: group.clone(), h: h.clone(), hsub, quotient, chi, t, tbar })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn h(&self) -> &GroupElement {
        &self.h
    }

    pub fn big_h(&self) -> &FiniteSubgroup {
        &self.hsub
    }

    pub fn quotient(&self) -> &QuotientContext {
        &self.quotient
    }

    pub fn quotient_group(&self) -> &GroupSpec {
        self.quotient.quotient()
    }

    pub fn chi(&self) -> &Character {
        &self.chi
    }

    /// `T = H ∩ ker χ`.
    pub fn t(&self) -> &FiniteSubgroup {
        &self.t
    }

    /// `T̄ = H/⟨h⟩` inside `Ḡ`.
    pub fn tbar(&self) -> &FiniteSubgroup {
        &self.tbar
    }

    pub fn project(&self, g: &GroupElement) -> GroupElement {
        self.quotient.project(g)
    }

    /// The representative in `T` of `ū ∈ T̄`.
    pub fn lift_t(&self, u: &GroupElement) -> Result<GroupElement> {
        if !self.tbar.contains(u) {
            return Err(GradingError::NotInSubgroup(format!("{u:?}")));
        }
        let [a, b] = self.quotient.fiber(u);
        Ok(if self.t.contains(&a) { a } else { b })
    }

    /// `χ²(ḡ)`.
    pub fn chi2(&self, gbar: &GroupElement) -> RootOfUnity {
        chi_squared_on_quotient(&self.chi, &self.quotient, gbar)
    }

    /// Moves a bicharacter on `T ⊂ G` (given on generators in `H`) to `T̄`.
    pub fn beta_bar(&self, beta: &Bicharacter) -> Result<Bicharacter> {
        if beta.parent() != &self.group {
            return Err(GradingError::InvalidParams("bicharacter lives in a different group".into()));
        }
        let src = beta.subgroup();
        if src.elements().iter().any(|x| !self.hsub.contains(x)) {
            return Err(GradingError::InvalidParams("bicharacter support is not inside H".into()));
        }
        let gens: Vec<GroupElement> = src.basis().iter().map(|(b, _)| b.clone()).collect();
        let proj: Vec<GroupElement> = gens.iter().map(|x| self.project(x)).collect();
        let n = beta.value_order();
        let mut exps = vec![vec![0i64; gens.len()]; gens.len()];
        for i in 0..gens.len() {
            for j in 0..gens.len() {
                let v = beta.eval(&gens[i], &gens[j])?.with_n(n as u32).ok_or_else(|| {
                    GradingError::Inconsistent("bicharacter value outside its value group".into())
                })?;
                exps[i][j] = v.k() as i64;
            }
        }
        let out = Bicharacter::new(self.quotient_group(), &proj, n, &exps)?;
        if out.subgroup() != &self.tbar {
            return Err(GradingError::InvalidParams("bicharacter support must map onto H/<h>".into()));
        }
        Ok(out)
    }

    /// The bicharacter on `T ⊂ G` matching `β̄` on `T̄`.
    pub fn beta_on_t(&self, beta_bar: &Bicharacter) -> Result<Bicharacter> {
        let gens: Vec<GroupElement> = beta_bar.subgroup().basis().iter().map(|(b, _)| b.clone()).collect();
        let lifted: Vec<GroupElement> = gens.iter().map(|u| self.lift_t(u)).collect::<Result<_>>()?;
        let n = beta_bar.value_order();
        let mut exps = vec![vec![0i64; gens.len()]; gens.len()];
        for i in 0..gens.len() {
            for j in 0..gens.len() {
                exps[i][j] = beta_bar.eval(&gens[i], &gens[j])?.with_n(n as u32).expect("value group").k() as i64;
            }
        }
        Bicharacter::new(&self.group, &lifted, n, &exps)
    }
}

/// `make_type_II_context` under its Rust name.
pub fn make_type_ii_context(g: &GroupSpec, h: &GroupElement, h_gens: &[GroupElement]) -> Result<TypeIIContext> {
    TypeIIContext::new(g, h, h_gens)
}

/// All common values `c ∈ Ḡ` with `ḡ_i² t̄_i = ḡ'_j ḡ''_j = c` possible and, with
/// `t̄_i = c ḡ_i⁻²`, the values `β(t̄_i) χ²(ḡ_i)` agree for `i ≤ ℓ`.
pub fn admissible_common_values(
    ctx: &TypeIIContext,
    beta_bar: &Bicharacter,
    sg: &StructuredKappaGamma,
) -> Result<Vec<GroupElement>> {
    let g = ctx.quotient_group();
    let t = ctx.tbar();
    if !sg.squares_congruent(g, t) {
        return Ok(vec![]);
    }
    let qf = quadratic_form(beta_bar)?;
    let sq = sg.squares(g);
    let mut out = vec![];
    for u in t.elements() {
        let c = g.mul(&sq[0], u);
        let mut vals = vec![];
        for i in 0..sg.ell {
            let b = qf.value(&g.div(&c, &sq[i]))?;
            vals.push(ctx.chi2(&sg.gamma_single[i]).mul(&RootOfUnity::from_sign(b)));
        }
        if vals.windows(2).all(|w| w[0] == w[1]) {
            out.push(c);
        }
    }
    out.sort();
    Ok(out)
}

/// Admissibility of Type II data; the `τ`-prefix on success.
pub fn check_admissible(
    ctx: &TypeIIContext,
    beta_bar: &Bicharacter,
    sg: &StructuredKappaGamma,
) -> Result<Option<Vec<GroupElement>>> {
    let g = ctx.quotient_group();
    Ok(admissible_common_values(ctx, beta_bar, sg)?
        .into_iter()
        .next()
        .map(|c| sg.gamma_single[..sg.ell].iter().map(|x| g.div(&c, &g.square(x))).collect()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeIIData {
    /// `ℓ > 0`.
    II1 { tau: Vec<GroupElement> },
    /// `ℓ = 0 < m`.
    II2 { tau: Vec<GroupElement>, delta: Vec<i8> },
    /// `m = 0`.
    II3 { mu: RootOfUnity },
}

/// `A^(II)(G, H, h, β, κ, γ, …)`; `γ` lives in `Ḡ` and `τ` in `T̄`.
#[derive(Clone, Debug)]
pub struct TypeIIParams {
    ctx: TypeIIContext,
    beta_bar: Bicharacter,
    sg: StructuredKappaGamma,
    data: TypeIIData,
}

impl TypeIIParams {
    pub fn new(ctx: TypeIIContext, beta_bar: Bicharacter, sg: StructuredKappaGamma, data: TypeIIData) -> Result<Self> {
        let bad = |m: String| Err(GradingError::InvalidParams(m));
        if beta_bar.parent() != ctx.quotient_group() || beta_bar.subgroup() != ctx.tbar() {
            return bad("bicharacter must live on H/<h>".into());
        }
        if !beta_bar.is_nondegenerate() {
            return Err(GradingError::Degenerate);
        }
        let gb = ctx.quotient_group().clone();
        sg.check_distinct(&gb, ctx.tbar())?;
        match (&data, sg.ell, sg.m) {
            (TypeIIData::II1 { .. }, l, _) if l > 0 => {}
            (TypeIIData::II2 { .. }, 0, m) if m > 0 => {}
            (TypeIIData::II3 { .. }, _, 0) => {}
            _ => return bad("variant does not match (ell, m)".into()),
        }
        let d = square_root_order(ctx.tbar()).unwrap_or(0);
        if sg.size() * d == 2 {
            return bad("sl_2 has no Type II gradings".into());
        }
        let p = TypeIIParams { ctx, beta_bar, sg, data };
        p.phi_spec()?;
        Ok(p)
    }

    pub fn context(&self) -> &TypeIIContext {
        &self.ctx
    }

    pub fn beta_bar(&self) -> &Bicharacter {
        &self.beta_bar
    }

    pub fn structured(&self) -> &StructuredKappaGamma {
        &self.sg
    }

    pub fn data(&self) -> &TypeIIData {
        &self.data
    }

    pub fn n(&self) -> usize {
        self.sg.size() * square_root_order(self.ctx.tbar()).unwrap_or(1)
    }

    pub fn tau(&self) -> &[GroupElement] {
        match &self.data {
            TypeIIData::II1 { tau } | TypeIIData::II2 { tau, .. } => tau,
            TypeIIData::II3 { .. } => &[],
        }
    }

    pub fn variant_name(&self) -> &'static str {
        match self.data {
            TypeIIData::II1 { .. } => "A_II1",
            TypeIIData::II2 { .. } => "A_II2",
            TypeIIData::II3 { .. } => "A_II3",
        }
    }

    /// `(κ, γ⁻¹, …)` with `μ⁻¹` in the II₃ case.
    pub fn with_inverse_gamma(&self) -> Result<TypeIIParams> {
        let gb = self.ctx.quotient_group();
        let data = match &self.data {
            TypeIIData::II3 { mu } => TypeIIData::II3 { mu: mu.inv() },
            other => other.clone(),
        };
        TypeIIParams::new(self.ctx.clone(), self.beta_bar.clone(), self.sg.inverse(gb), data)
    }

    /// Solves the compatibility chain for the signs of `S_i` and the scalars `μ_i`.
    pub fn phi_spec(&self) -> Result<PhiSpec> {
        let g = self.ctx.quotient_group();
        let t = self.ctx.tbar();
        let sg = &self.sg;
        let tau = self.tau().to_vec();
        if tau.len() != sg.m {
            return Err(GradingError::InvalidParams("tau needs m entries".into()));
        }
        if let Some(x) = tau.iter().find(|x| !t.contains(x)) {
            return Err(GradingError::NotInSubgroup(format!("{x:?}")));
        }
        // ḡ_i² t̄_i = ḡ'_j ḡ''_j
        let mut vals: Vec<GroupElement> =
            sg.gamma_single.iter().zip(&tau).map(|(x, u)| g.mul(&g.square(x), u)).collect();
        vals.extend(sg.gamma_pairs.iter().map(|(a, b)| g.mul(a, b)));
        if vals.iter().any(|v| v != &vals[0]) {
            return Err(GradingError::InvalidParams("gamma and tau do not satisfy g_i^2 t_i = g'_j g''_j".into()));
        }
        let qf = quadratic_form(&self.beta_bar)?;
        let chi2 = |x: &GroupElement| self.ctx.chi2(x);
        let sign = |r: RootOfUnity, what: String| {
            r.as_sign().ok_or_else(|| GradingError::Inconsistent(format!("{what} is not a sign")))
        };
        let b = |i: usize| -> Result<RootOfUnity> { Ok(RootOfUnity::from_sign(qf.value(&tau[i])?)) };
        // λ: the common value of the chain
        let (lambda, s_signs): (RootOfUnity, Vec<i8>) = match &self.data {
            TypeIIData::II1 { .. } => {
                let lambda = b(0)?.mul(&chi2(&sg.gamma_single[0]));
                for i in 1..sg.ell {
                    if b(i)?.mul(&chi2(&sg.gamma_single[i])) != lambda {
                        return Err(GradingError::InvalidParams(format!(
                            "beta(t_{}) chi^2(g_{}) differs from the first block",
                            i + 1,
                            i + 1
                        )));
                    }
                }
                let mut s = vec![];
                for i in sg.ell..sg.m {
                    let r = lambda.mul(&b(i)?.mul(&chi2(&sg.gamma_single[i])).inv());
                    s.push(sign(r, format!("sgn(S_{})", i + 1))?);
                }
                (lambda, s)
            }
            TypeIIData::II2 { delta, .. } => {
                if delta.len() != sg.m || delta.iter().any(|d| *d != 1 && *d != -1) {
                    return Err(GradingError::InvalidParams("delta needs m signs".into()));
                }
                let lambda = b(0)?.mul(&chi2(&sg.gamma_single[0])).mul(&RootOfUnity::from_sign(delta[0]));
                for i in 1..sg.m {
                    let v = b(i)?.mul(&chi2(&sg.gamma_single[i])).mul(&RootOfUnity::from_sign(delta[i]));
                    if v != lambda {
                        return Err(GradingError::InvalidParams(format!(
                            "beta(t_{0}) chi^2(g_{0}) delta_{0} differs from the first block",
                            i + 1
                        )));
                    }
                }
                (lambda, delta.clone())
            }
            TypeIIData::II3 { mu } => {
                let c = chi2(&vals[0]);
                if mu.pow(2) != c {
                    return Err(GradingError::InvalidParams(format!(
                        "mu^2 = {} differs from chi^2(g' g'') = {c}",
                        mu.pow(2)
                    )));
                }
                (*mu, vec![])
            }
        };
        let mut mus = vec![];
        for (a, bb) in &sg.gamma_pairs {
            let m = chi2(a).mul(&lambda.inv());
            if m.mul(&chi2(bb)) != lambda {
                return Err(GradingError::InvalidParams("swapped pair is incompatible with the chain value".into()));
            }
            mus.push(m.to_cyclo());
        }
        PhiSpec::new(sg.clone(), tau, s_signs, mus)
    }

    /// The `Ḡ`-graded algebra `R` with its anti-automorphism `φ`.
    pub fn build_quotient_pair(&self) -> Result<GradedAlgebraWithAntiAut> {
        let gb = self.ctx.quotient_group();
        let div = standard_division_realization(&self.beta_bar)?;
        let p = MatrixGradingParams::new(gb, self.beta_bar.clone(), self.sg.flat_kappa(), self.sg.flat_gamma())?;
        let algebra = construct_with_realization(&p, &div);
        let phi = self.phi_spec()?.assemble(&div)?;
        GradedAlgebraWithAntiAut::new(algebra, phi, AntiAutKind::AntiAutomorphism)
    }

    pub fn to_wire(&self) -> TypeIIWire {
        let ctx = &self.ctx;
        let lift = |x: &GroupElement| ctx.quotient.section(x);
        let beta = ctx.beta_on_t(&self.beta_bar).expect("beta lifts to T");
        let (delta, mu) = match &self.data {
            TypeIIData::II2 { delta, .. } => (Some(delta.clone()), None),
            TypeIIData::II3 { mu } => (None, Some(*mu)),
            TypeIIData::II1 { .. } => (None, None),
        };
        TypeIIWire {
            group: ctx.group.clone(),
            h: ctx.h.clone(),
            big_h: ctx.hsub.basis().iter().map(|(b, _)| b.clone()).collect(),
            t: beta.to_wire(),
            ell: self.sg.ell,
            m: self.sg.m,
            k: self.sg.k,
            q: self.sg.q.clone(),
            gamma_single: self.sg.gamma_single.iter().map(lift).collect(),
            gamma_pairs: self.sg.gamma_pairs.iter().map(|(a, b)| (lift(a), lift(b))).collect(),
            tau: self.tau().iter().map(|u| ctx.lift_t(u).expect("tau in T")).collect(),
            delta,
            mu,
        }
    }

    pub fn from_wire(w: &TypeIIWire) -> Result<Self> {
        let g = w.group.clone().validated()?;
        let ctx = TypeIIContext::new(&g, &w.h, &w.big_h)?;
        let beta = Bicharacter::from_wire(&g, &w.t)?;
        let beta_bar = ctx.beta_bar(&beta)?;
        let p = |x: &GroupElement| -> Result<GroupElement> {
            if !g.contains(x) {
                return Err(GradingError::NotInGroup(format!("{x:?}"), g.to_string()));
            }
            Ok(ctx.project(x))
        };
        let single = w.gamma_single.iter().map(p).collect::<Result<Vec<_>>>()?;
        let pairs = w.gamma_pairs.iter().map(|(a, b)| Ok((p(a)?, p(b)?))).collect::<Result<Vec<_>>>()?;
        let tau = w.tau.iter().map(p).collect::<Result<Vec<_>>>()?;
        let sg = StructuredKappaGamma::new(w.ell, w.m, w.k, w.q.clone(), single, pairs)?;
        let data = match (sg.ell, sg.m) {
            (l, _) if l > 0 => TypeIIData::II1 { tau },
            (0, m) if m > 0 => TypeIIData::II2 {
                tau,
                delta: w.delta.clone().ok_or_else(|| GradingError::InvalidParams("Type II2 needs delta".into()))?,
            },
            _ => TypeIIData::II3 {
                mu: w.mu.ok_or_else(|| GradingError::InvalidParams("Type II3 needs mu".into()))?,
            },
        };
        TypeIIParams::new(ctx, beta_bar, sg, data)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypeIIWire {
    pub group: GroupSpec,
    pub h: GroupElement,
    #[serde(rename = "H")]
    pub big_h: Vec<GroupElement>,
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
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<Vec<i8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<RootOfUnity>,
}

/// Independent elements of the images of the given matrices, keeping the
/// original (unreduced) matrices.
fn independent(mats: impl IntoIterator<Item = CycloMatrix>, n: usize) -> Vec<CycloMatrix> {
    let mut ech = Echelon::new(n * n);
    mats.into_iter().filter(|m| !m.is_zero() && ech.insert(m.as_slice().to_vec())).collect()
}

/// A basis of the trace-zero part of the span of `mats` (assumed independent).
fn trace_zero_part(mut mats: Vec<CycloMatrix>) -> Vec<CycloMatrix> {
    let Some(p) = mats.iter().position(|m| !m.trace().is_zero()) else {
        return mats;
    };
    let pivot = mats.remove(p);
    let tp = pivot.trace();
    let inv = tp.inv().expect("nonzero trace");
    mats.into_iter()
        .map(|m| {
            let tr = m.trace();
            if tr.is_zero() {
                m
            } else {
                m.sub(&pivot.scale(&(&tr * &inv)))
            }
        })
        .collect()
}

/// `R_g = {X ∈ R_ḡ : −φ(X) = χ(g) X}` for both lifts `g` of each `ḡ`;
/// the result is a `G`-grading of the Lie algebra `R^(−)` on all of `M_n`.
pub fn refine_to_g_grading(pair: &GradedAlgebraWithAntiAut, ctx: &TypeIIContext) -> Result<GradedAlgebra> {
    let r = &pair.algebra;
    if &r.group != ctx.quotient_group() {
        return Err(GradingError::InvalidParams("algebra is not graded by G/<h>".into()));
    }
    let phi = pair.map().ok_or_else(|| GradingError::InvalidParams("form matrix is singular".into()))?;
    let n = r.n;
    let mut by_degree: BTreeMap<GroupElement, Vec<CycloMatrix>> = BTreeMap::new();
    for h in &r.basis {
        let img = phi(&h.matrix);
        let c = ctx.chi2(&h.degree).to_cyclo();
        if phi(&img) != h.matrix.scale(&c) {
            return Err(GradingError::Inconsistent(format!(
                "phi^2 does not act as chi^2 on degree {:?}",
                h.degree
            )));
        }
        by_degree.entry(h.degree.clone()).or_default().push(h.matrix.clone());
    }
    let mut basis = vec![];
    for (gbar, mats) in by_degree {
        let dim = independent(mats.iter().cloned(), n).len();
        let mut total = 0;
        for g in ctx.quotient().fiber(&gbar) {
            let c = ctx.chi.eval(&g).to_cyclo();
            let imgs = mats.iter().map(|x| phi(x).neg().add(&x.scale(&c)));
            let part = independent(imgs, n);
            total += part.len();
            basis.extend(part.into_iter().map(|m| Homogeneous { matrix: m, degree: g.clone() }));
        }
        if total != dim {
            return Err(GradingError::Inconsistent(format!(
                "refinement of degree {gbar:?} has dimension {total}, expected {dim}"
            )));
        }
    }
    let mut out = GradedAlgebra::associative(n, &ctx.group, basis);
    out.kind = AlgebraKind::Lie;
    Ok(out)
}

/// Parameters of a graded classical Lie algebra.
#[derive(Clone, Debug)]
pub enum LieGradingParams {
    /// `A^(I)(G, T, β, κ, γ)`.
    AI(MatrixGradingParams),
    /// `A^(II₁)`, `A^(II₂)`, `A^(II₃)`.
    AII(TypeIIParams),
    /// `B(G, κ, γ)`: `δ = 1`, `n` odd, `T = {e}`.
    B(InvolutionParams),
    /// `C(G, T, β, κ, γ, τ)`: `δ = −1`.
    C(InvolutionParams),
    /// `D(G, T, β, κ, γ, τ)`: `δ = 1`, `n` even.
    D(InvolutionParams),
}

impl LieGradingParams {
    pub fn family(&self) -> LieFamily {
        match self {
            LieGradingParams::AI(_) | LieGradingParams::AII(_) => LieFamily::A,
            LieGradingParams::B(_) => LieFamily::B,
            LieGradingParams::C(_) => LieFamily::C,
            LieGradingParams::D(_) => LieFamily::D,
        }
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            LieGradingParams::AI(_) => "A_I",
            LieGradingParams::AII(p) => p.variant_name(),
            LieGradingParams::B(_) => "B",
            LieGradingParams::C(_) => "C",
            LieGradingParams::D(_) => "D",
        }
    }

    pub fn group(&self) -> &GroupSpec {
        match self {
            LieGradingParams::AI(p) => p.group(),
            LieGradingParams::AII(p) => p.context().group(),
            LieGradingParams::B(p) | LieGradingParams::C(p) | LieGradingParams::D(p) => p.group(),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            LieGradingParams::AI(p) => p.n(),
            LieGradingParams::AII(p) => p.n(),
            LieGradingParams::B(p) | LieGradingParams::C(p) | LieGradingParams::D(p) => p.n(),
        }
    }

    /// Checks the family constraints for B, C, D.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(GradingError::InvalidParams(m.to_string()));
        match self {
            LieGradingParams::AI(p) if p.n() < 2 => bad("sl_n needs n >= 2"),
            LieGradingParams::B(p) => {
                if p.delta() != 1 || p.n() % 2 == 0 {
                    return bad("type B needs delta = 1 and odd n");
                }
                if p.subgroup().order() != 1 {
                    return bad("type B needs T = {e}");
                }
                Ok(())
            }
            LieGradingParams::C(p) if p.delta() != -1 => bad("type C needs delta = -1"),
            LieGradingParams::D(p) if p.delta() != 1 || p.n() % 2 == 1 => bad("type D needs delta = 1 and even n"),
            _ => Ok(()),
        }
    }

    pub fn to_wire(&self) -> LieParamsWire {
        match self {
            LieGradingParams::AI(p) => LieParamsWire::AI(p.to_wire()),
            LieGradingParams::AII(p) => match p.data() {
                TypeIIData::II1 { .. } => LieParamsWire::AII1(p.to_wire()),
                TypeIIData::II2 { .. } => LieParamsWire::AII2(p.to_wire()),
                TypeIIData::II3 { .. } => LieParamsWire::AII3(p.to_wire()),
            },
            LieGradingParams::B(p) => LieParamsWire::B(p.to_wire()),
            LieGradingParams::C(p) => LieParamsWire::C(p.to_wire()),
            LieGradingParams::D(p) => LieParamsWire::D(p.to_wire()),
        }
    }

    pub fn from_wire(w: &LieParamsWire) -> Result<Self> {
        let out = match w {
            LieParamsWire::AI(p) => LieGradingParams::AI(MatrixGradingParams::from_wire(p)?),
            LieParamsWire::AII1(p) | LieParamsWire::AII2(p) | LieParamsWire::AII3(p) => {
                let q = TypeIIParams::from_wire(p)?;
                let expected = match w {
                    LieParamsWire::AII1(_) => "A_II1",
                    LieParamsWire::AII2(_) => "A_II2",
                    _ => "A_II3",
                };
                if q.variant_name() != expected {
                    return Err(GradingError::InvalidParams(format!(
                        "data describe {} rather than {expected}",
                        q.variant_name()
                    )));
                }
                LieGradingParams::AII(q)
            }
            LieParamsWire::B(p) => LieGradingParams::B(InvolutionParams::from_wire(p)?),
            LieParamsWire::C(p) => LieGradingParams::C(InvolutionParams::from_wire(p)?),
            LieParamsWire::D(p) => LieGradingParams::D(InvolutionParams::from_wire(p)?),
        };
        out.validate()?;
        Ok(out)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum LieParamsWire {
    #[serde(rename = "A_I")]
    AI(MatrixParamsWire),
    #[serde(rename = "A_II1")]
    AII1(TypeIIWire),
    #[serde(rename = "A_II2")]
    AII2(TypeIIWire),
    #[serde(rename = "A_II3")]
    AII3(TypeIIWire),
    B(InvolutionWire),
    C(InvolutionWire),
    D(InvolutionWire),
}

/// Skew elements `X − φ(X)` of each component.
fn skew_part(pair: &GradedAlgebraWithAntiAut) -> Result<Vec<Homogeneous>> {
    let phi = pair.map().ok_or_else(|| GradingError::InvalidParams("form matrix is singular".into()))?;
    let r = &pair.algebra;
    let mut by_degree: BTreeMap<GroupElement, Vec<CycloMatrix>> = BTreeMap::new();
    for h in &r.basis {
        by_degree.entry(h.degree.clone()).or_default().push(h.matrix.sub(&phi(&h.matrix)));
    }
    Ok(by_degree
        .into_iter()
        .flat_map(|(g, mats)| {
            independent(mats, r.n).into_iter().map(move |m| Homogeneous { matrix: m, degree: g.clone() })
        })
        .collect())
}

fn lie_algebra(n: usize, group: &GroupSpec, basis: Vec<Homogeneous>, family: LieFamily) -> GradedAlgebra {
    let mut a = GradedAlgebra::associative(n, group, basis);
    a.kind = AlgebraKind::Lie;
    a.lie_family = Some(family);
    a.classification_incomplete = family == LieFamily::D && n == 8;
    a
}

/// `sl_n`-parts of the components of a grading of `M_n` (or of `R^(−)`).
pub fn trace_zero_grading(r: &GradedAlgebra) -> Vec<Homogeneous> {
    let mut by_degree: BTreeMap<GroupElement, Vec<CycloMatrix>> = BTreeMap::new();
    for h in &r.basis {
        by_degree.entry(h.degree.clone()).or_default().push(h.matrix.clone());
    }
    by_degree
        .into_iter()
        .flat_map(|(g, mats)| {
            trace_zero_part(independent(mats, r.n)).into_iter().map(move |m| Homogeneous { matrix: m, degree: g.clone() })
        })
        .collect()
}

/// The graded Lie algebra of the given parameters, as matrices.
pub fn construct_lie(p: &LieGradingParams) -> Result<GradedAlgebra> {
    p.validate()?;
    match p {
        LieGradingParams::AI(mp) => {
            let r = construct_matrix_grading(mp)?;
            Ok(lie_algebra(r.n, &r.group, trace_zero_grading(&r), LieFamily::A))
        }
        LieGradingParams::AII(tp) => {
            let pair = tp.build_quotient_pair()?;
            let refined = refine_to_g_grading(&pair, tp.context())?;
            Ok(lie_algebra(refined.n, &refined.group, trace_zero_grading(&refined), LieFamily::A))
        }
        LieGradingParams::B(ip) | LieGradingParams::C(ip) | LieGradingParams::D(ip) => {
            let pair = build_involution(ip)?;
            let basis = skew_part(&pair)?;
            Ok(lie_algebra(pair.algebra.n, ip.group(), basis, p.family()))
        }
    }
}

/// `dim L_e` of `K(R, φ)` predicted from the block structure alone.
pub fn expected_skew_identity_dim(p: &InvolutionParams) -> Result<usize> {
    let sg = p.structured();
    let signs = p.s_signs()?;
    let mut total = 0;
    for i in 0..sg.m {
        let q = sg.q[i];
        total += if i < sg.ell {
            q * (q - 1) / 2
        } else if signs[i - sg.ell] == 1 {
            q * (2 * q - 1)
        } else {
            q * (2 * q + 1)
        };
    }
    for i in sg.m..sg.k {
        total += sg.q[i] * sg.q[i];
    }
    Ok(total)
}

/// A block-diagonal matrix helper used by tests and recognition checks.
pub fn block_identity(n: usize, off: usize, size: usize) -> CycloMatrix {
    let mut m = Matrix::zeros(n, n);
    for r in off..off + size {
        m.set(r, r, CycloNum::from_integer(1));
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded_matrix::verify_lie_grading;

    fn e(c: &[i64]) -> GroupElement {
        GroupElement::new(c)
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
    fn context_examples() {
        let z2 = GroupSpec::cyclic(2);
        let c = TypeIIContext::new(&z2, &e(&[1]), &[e(&[1])]).unwrap();
        assert_eq!(c.t().order(), 1);
        assert_eq!(c.quotient_group().order(), Some(1));

        let g = GroupSpec::finite(&[2, 2, 2]);
        let gens = [e(&[1, 0, 0]), e(&[0, 1, 0]), e(&[0, 0, 1])];
        let c = TypeIIContext::new(&g, &e(&[1, 0, 0]), &gens).unwrap();
        assert_eq!(c.t().order(), 4);
        assert_eq!(c.tbar().order(), 4);
        for x in c.t().elements() {
            assert!(c.chi().eval(x).is_one());
        }
        assert_eq!(c.chi().eval(c.h()), RootOfUnity::minus_one());

        let g = GroupSpec::finite(&[4, 2, 2]);
        let c = TypeIIContext::new(&g, &e(&[2, 0, 0]), &[e(&[2, 0, 0]), e(&[0, 1, 0]), e(&[0, 0, 1])]).unwrap();
        assert_eq!(c.t().order(), 4);
        // H of even rank or missing h is rejected
        assert!(TypeIIContext::new(&g, &e(&[2, 0, 0]), &[e(&[2, 0, 0]), e(&[0, 1, 0])]).is_err());
        assert!(TypeIIContext::new(&g, &e(&[2, 0, 0]), &[e(&[0, 1, 0])]).is_err());
    }

    #[test]
    fn refinement_of_transpose() {
        // trivial Ḡ: G = Z_2, φ = transpose on M_n (I_n ⊗ X_e, one odd block)
        let z2 = GroupSpec::cyclic(2);
        let ctx = TypeIIContext::new(&z2, &e(&[1]), &[e(&[1])]).unwrap();
        let gb = ctx.quotient_group().clone();
        let beta_bar = Bicharacter::trivial(&gb);
        for n in [3usize, 4] {
            let s = StructuredKappaGamma::new(
                if n % 2 == 1 { 1 } else { 0 },
                1,
                1,
                vec![if n % 2 == 1 { n } else { n / 2 }],
                vec![gb.identity()],
                vec![],
            )
            .unwrap();
            let data = if n % 2 == 1 {
                TypeIIData::II1 { tau: vec![gb.identity()] }
            } else {
                TypeIIData::II2 { tau: vec![gb.identity()], delta: vec![1] }
            };
            let p = TypeIIParams::new(ctx.clone(), beta_bar.clone(), s, data).unwrap();
            let pair = p.build_quotient_pair().unwrap();
            let r = refine_to_g_grading(&pair, &ctx).unwrap();
            let sym = n * (n + 1) / 2;
            let skew = n * (n - 1) / 2;
            // −ᵗX = X has eigenvalue χ(e) = 1 on skew, χ(h) = −1 on symmetric
            assert_eq!(r.component_dimension(&e(&[0])), skew);
            assert_eq!(r.component_dimension(&e(&[1])), sym);
            assert!(verify_lie_grading(&r).passed);
        }
    }

    #[test]
    fn type_ii_rejects_n2() {
        let z2 = GroupSpec::cyclic(2);
        let ctx = TypeIIContext::new(&z2, &e(&[1]), &[e(&[1])]).unwrap();
        let gb = ctx.quotient_group().clone();
        let s = StructuredKappaGamma::new(0, 1, 1, vec![1], vec![gb.identity()], vec![]).unwrap();
        let data = TypeIIData::II2 { tau: vec![gb.identity()], delta: vec![-1] };
        assert!(TypeIIParams::new(ctx.clone(), Bicharacter::trivial(&gb), s, data).is_err());
        // G = Z_2³, H = G: n = |κ| √(|H|/2) = 2
        let g = GroupSpec::finite(&[2, 2, 2]);
        let gens = [e(&[1, 0, 0]), e(&[0, 1, 0]), e(&[0, 0, 1])];
        let ctx = TypeIIContext::new(&g, &e(&[1, 0, 0]), &gens).unwrap();
        let gb = ctx.quotient_group().clone();
        let tb = ctx.tbar().clone();
        let beta = Bicharacter::from_basis_exponents(&tb, vec![vec![0, 1], vec![1, 0]]).unwrap();
        let s = StructuredKappaGamma::new(1, 1, 1, vec![1], vec![gb.identity()], vec![]).unwrap();
        let r = TypeIIParams::new(ctx, beta, s, TypeIIData::II1 { tau: vec![gb.identity()] });
        assert!(r.is_err());
    }

    #[test]
    fn cartan_sl3() {
        let z = GroupSpec::new(1, vec![]).unwrap();
        let p = MatrixGradingParams::new(&z, Bicharacter::trivial(&z), vec![1, 1, 1], vec![e(&[0]), e(&[1]), e(&[2])])
            .unwrap();
        let l = construct_lie(&LieGradingParams::AI(p)).unwrap();
        assert!(verify_lie_grading(&l).passed);
        assert_eq!(l.basis.len(), 8);
        assert_eq!(l.component_dimension(&e(&[0])), 2);
        for d in [-2i64, -1, 1, 2] {
            let expect = if d.abs() == 1 { 2 } else { 1 };
            // degrees ±1 come from (1,2),(2,3) pairs; ±2 from (1,3)
            assert_eq!(l.component_dimension(&e(&[d])), expect);
        }
        let roots: usize = l.dimension_profile().iter().filter(|(g, _)| !g.is_identity()).map(|(_, d)| d).sum();
        assert_eq!(roots, 6);
    }

    #[test]
    fn orthogonal_and_symplectic_dims() {
        let g = GroupSpec::cyclic(2);
        let b = Bicharacter::trivial(&g);
        // so_5, trivial grading
        let s = sg(1, 1, 1, &[5], &[&[0]], &[]);
        let p = InvolutionParams::new(&g, b.clone(), s, vec![e(&[0])], 1).unwrap();
        let l = construct_lie(&LieGradingParams::B(p.clone())).unwrap();
        assert_eq!(l.basis.len(), 10);
        assert_eq!(l.component_dimension(&e(&[0])), 10);
        assert_eq!(l.component_dimension(&e(&[0])), expected_skew_identity_dim(&p).unwrap());
        assert!(verify_lie_grading(&l).passed);
        // sp_2 = sl_2 via a pair with δ = −1 over Z_3
        let z3 = GroupSpec::cyclic(3);
        let s = sg(0, 0, 1, &[1], &[], &[(&[1], &[2])]);
        let p = InvolutionParams::new(&z3, Bicharacter::trivial(&z3), s, vec![], -1).unwrap();
        let l = construct_lie(&LieGradingParams::C(p)).unwrap();
        assert_eq!(l.basis.len(), 3);
        assert!(verify_lie_grading(&l).passed);
        // sp_6 with a mixed block structure over Z_4
        let z4 = GroupSpec::cyclic(4);
        let s = sg(0, 1, 2, &[1, 2], &[&[0]], &[(&[1], &[3])]);
        let p = InvolutionParams::new(&z4, Bicharacter::trivial(&z4), s, vec![e(&[0])], -1).unwrap();
        let l = construct_lie(&LieGradingParams::C(p.clone())).unwrap();
        assert_eq!(l.basis.len(), 21);
        assert!(verify_lie_grading(&l).passed);
        assert_eq!(l.component_dimension(&e(&[0])), expected_skew_identity_dim(&p).unwrap());
        let pair = build_involution(&p).unwrap();
        let phi = pair.map().unwrap();
        for h in &l.basis {
            assert_eq!(phi(&h.matrix), h.matrix.neg());
        }
        // so_8 is flagged
        let s = sg(0, 1, 1, &[4], &[&[0]], &[]);
        let p = InvolutionParams::new(&z4, Bicharacter::trivial(&z4), s, vec![e(&[0])], 1).unwrap();
        let l = construct_lie(&LieGradingParams::D(p.clone())).unwrap();
        assert!(l.classification_incomplete);
        assert_eq!(l.basis.len(), 28);
        assert!(construct_lie(&LieGradingParams::C(p)).is_err());
    }

    fn z2cubed_ctx() -> (TypeIIContext, Bicharacter) {
        let g = GroupSpec::finite(&[2, 2, 2]);
        let gens = [e(&[1, 0, 0]), e(&[0, 1, 0]), e(&[0, 0, 1])];
        let ctx = TypeIIContext::new(&g, &e(&[1, 0, 0]), &gens).unwrap();
        let beta = Bicharacter::from_basis_exponents(ctx.tbar(), vec![vec![0, 1], vec![1, 0]]).unwrap();
        (ctx, beta)
    }

    #[test]
    fn type_ii_constructions_verify() {
        // G = Z_2³ × Z_3 style data are large; Z_2³ with κ = (2) gives n = 4
        let (ctx, beta) = z2cubed_ctx();
        let gb = ctx.quotient_group().clone();
        let id = gb.identity();
        for tau in ctx.tbar().elements() {
            let s = StructuredKappaGamma::new(0, 1, 1, vec![1], vec![id.clone()], vec![]).unwrap();
            for d in [1i8, -1] {
                let data = TypeIIData::II2 { tau: vec![tau.clone()], delta: vec![d] };
                let p = TypeIIParams::new(ctx.clone(), beta.clone(), s.clone(), data).unwrap();
                let l = construct_lie(&LieGradingParams::AII(p)).unwrap();
                assert_eq!(l.basis.len(), 15);
                assert!(verify_lie_grading(&l).passed);
            }
        }
        // II₃ over Z_4 × Z_2 with h = (0, 1): Ḡ = Z_4, T = {e}
        let g = GroupSpec::finite(&[4, 2]);
        let ctx = TypeIIContext::new(&g, &e(&[0, 1]), &[e(&[0, 1])]).unwrap();
        let gb = ctx.quotient_group().clone();
        let b = Bicharacter::trivial(&gb);
        let a1 = ctx.project(&e(&[1, 0]));
        let a3 = ctx.project(&e(&[3, 0]));
        let a0 = gb.identity();
        let a2 = ctx.project(&e(&[2, 0]));
        let s = StructuredKappaGamma::new(0, 0, 2, vec![1, 1], vec![], vec![(a1, a3), (a0.clone(), a2.clone())]);
        // products 0 and 2 differ: the products condition fails
        let s = s.unwrap();
        let c = ctx.chi2(&gb.identity());
        let mu = RootOfUnity::new(2 * c.n(), c.k() as i64);
        assert!(TypeIIParams::new(ctx.clone(), b.clone(), s, TypeIIData::II3 { mu }).is_err());
        let s = StructuredKappaGamma::new(0, 0, 2, vec![1, 1], vec![], vec![
            (ctx.project(&e(&[1, 0])), ctx.project(&e(&[3, 0]))),
            (ctx.project(&e(&[0, 0])), ctx.project(&e(&[0, 0]))),
        ]);
        assert!(s.unwrap().check_distinct(&gb, ctx.tbar()).is_err());
        let s = StructuredKappaGamma::new(0, 0, 1, vec![2], vec![], vec![(a0.clone(), a2.clone())]).unwrap();
        let c = ctx.chi2(&a2);
        for root in [RootOfUnity::new(2 * c.n(), c.k() as i64), RootOfUnity::new(2 * c.n(), c.k() as i64 + c.n() as i64)] {
            assert_eq!(root.pow(2), c);
            let p = TypeIIParams::new(ctx.clone(), b.clone(), s.clone(), TypeIIData::II3 { mu: root }).unwrap();
            let pair = p.build_quotient_pair().unwrap();
            let refined = refine_to_g_grading(&pair, &ctx).unwrap();
            for gbar in gb.elements().unwrap() {
                let [x, y] = ctx.quotient().fiber(&gbar);
                let sum = refined.component_dimension(&x) + refined.component_dimension(&y);
                assert_eq!(sum, pair.algebra.component_dimension(&gbar));
            }
            let l = construct_lie(&LieGradingParams::AII(p)).unwrap();
            assert_eq!(l.basis.len(), 15);
            assert!(verify_lie_grading(&l).passed);
        }
    }

    #[test]
    fn ii3_mu_from_chain() {
        // k = 1 pair with χ²(ḡ'ḡ'') = 1 and μ = 1: μ_1 = χ²(ḡ')
        let g = GroupSpec::finite(&[4, 2]);
        let ctx = TypeIIContext::new(&g, &e(&[0, 1]), &[e(&[0, 1])]).unwrap();
        let gb = ctx.quotient_group().clone();
        let a1 = ctx.project(&e(&[1, 0]));
        let a3 = ctx.project(&e(&[3, 0]));
        assert!(ctx.chi2(&gb.mul(&a1, &a3)).is_one());
        let s = StructuredKappaGamma::new(0, 0, 1, vec![2], vec![], vec![(a1.clone(), a3)]).unwrap();
        let p = TypeIIParams::new(ctx.clone(), Bicharacter::trivial(&gb), s, TypeIIData::II3 { mu: RootOfUnity::one() })
            .unwrap();
        let spec = p.phi_spec().unwrap();
        assert_eq!(spec.mu, vec![ctx.chi2(&a1).to_cyclo()]);
    }

    #[test]
    fn ii2_two_delta_choices() {
        let (ctx, beta) = z2cubed_ctx();
        let gb = ctx.quotient_group().clone();
        let s = StructuredKappaGamma::new(0, 1, 1, vec![1], vec![gb.identity()], vec![]).unwrap();
        let mut specs = vec![];
        for d in [1i8, -1] {
            let p = TypeIIParams::new(
                ctx.clone(),
                beta.clone(),
                s.clone(),
                TypeIIData::II2 { tau: vec![gb.identity()], delta: vec![d] },
            )
            .unwrap();
            specs.push(p.phi_spec().unwrap().s_signs);
        }
        assert_ne!(specs[0], specs[1]);
    }

    #[test]
    fn admissibility_type_ii() {
        let (ctx, beta) = z2cubed_ctx();
        let gb = ctx.quotient_group().clone();
        let one = StructuredKappaGamma::new(1, 1, 1, vec![3], vec![gb.identity()], vec![]).unwrap();
        assert!(check_admissible(&ctx, &beta, &one).unwrap().is_some());
        // (21) violated: with T̄ = Ḡ every pair of singles is in one coset, so use Z_4 × Z_2 × Z_2
        let g = GroupSpec::finite(&[4, 2, 2]);
        let ctx = TypeIIContext::new(&g, &e(&[2, 0, 0]), &[e(&[2, 0, 0]), e(&[0, 1, 0]), e(&[0, 0, 1])]).unwrap();
        let gb = ctx.quotient_group().clone();
        let beta = Bicharacter::from_basis_exponents(ctx.tbar(), vec![vec![0, 1], vec![1, 0]]).unwrap();
        let x = ctx.project(&e(&[1, 0, 0]));
        let s = StructuredKappaGamma::new(2, 2, 2, vec![1, 1], vec![gb.identity(), x], vec![]).unwrap();
        assert!(s.check_distinct(&gb, ctx.tbar()).is_ok());
        // brute force agreement with the definition
        let adm = check_admissible(&ctx, &beta, &s).unwrap();
        let qf = quadratic_form(&beta).unwrap();
        let mut brute = false;
        let sq = s.squares(&gb);
        if sq.iter().all(|y| ctx.tbar().coset_eq(y, &sq[0])) {
            for u in ctx.tbar().elements() {
                let c = gb.mul(&sq[0], u);
                let v: Vec<RootOfUnity> = (0..2)
                    .map(|i| {
                        RootOfUnity::from_sign(qf.value(&gb.div(&c, &sq[i])).unwrap())
                            .mul(&ctx.chi2(&s.gamma_single[i]))
                    })
                    .collect();
                brute |= v[0] == v[1];
            }
        }
        assert_eq!(adm.is_some(), brute);
    }

    #[test]
    fn wire_round_trips() {
        let (ctx, beta) = z2cubed_ctx();
        let gb = ctx.quotient_group().clone();
        let s = StructuredKappaGamma::new(0, 1, 1, vec![1], vec![gb.identity()], vec![]).unwrap();
        let tau = ctx.tbar().elements()[1].clone();
        let p = TypeIIParams::new(ctx, beta, s, TypeIIData::II2 { tau: vec![tau], delta: vec![-1] }).unwrap();
        let w = LieGradingParams::AII(p.clone()).to_wire();
        let text = serde_json::to_string(&w).unwrap();
        assert!(text.contains("\"family\":\"A_II2\""));
        let back = LieGradingParams::from_wire(&serde_json::from_str(&text).unwrap()).unwrap();
        let LieGradingParams::AII(q) = back else { panic!("variant") };
        assert_eq!(q.structured(), p.structured());
        assert_eq!(q.data(), p.data());
        assert!(q.beta_bar().same_as(p.beta_bar()));
        let bad = text.replacen("{", "{\"extra\":1,", 1);
        assert!(serde_json::from_str::<LieParamsWire>(&bad).is_err());
    }
}
