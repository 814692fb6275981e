//! Isomorphism of graded algebras: the relations `~` and `≈`, pairwise
//! deciders with witnesses, canonical keys, and recognition of the
//! invariants of a concretely given grading on `M_n`.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::abgroup::{FiniteSubgroup, GroupElement, GroupSpec};
use crate::bichar::{bichar_eq, Bicharacter};
use crate::cyclotomic::{CycloNum, RootOfUnity};
use crate::error::{GradingError, Result};
use crate::graded_matrix::{
    construct_matrix_grading, square_root_order, verify_associative_grading, AlgebraKind, GradedAlgebra,
    MatrixGradingParams, MatrixParamsWire,
};
use crate::involution::{InvolutionParams, InvolutionWire, StructuredKappaGamma};
use crate::lie_grading::{LieGradingParams, LieParamsWire, TypeIIContext, TypeIIData, TypeIIParams, TypeIIWire};
use crate::linalg::{Echelon, Matrix};
use crate::CycloMatrix;

/// Data witnessing an equivalence: block `i` of the second tuple comes from
/// block `perm[i]` of the first, shifted by `shift` (after inverting `γ`
/// when `inverted`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub shift: GroupElement,
    pub perm: Vec<usize>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub inverted: bool,
}

/// One block of a tuple, before reduction modulo `T`.
#[derive(Clone, Debug)]
struct Block {
    /// 0 matrix block, 1 odd single, 2 even single, 3 swapped pair.
    class: u8,
    q: usize,
    entries: Vec<GroupElement>,
    t: Option<GroupElement>,
    delta: Option<i8>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
struct Item {
    class: u8,
    q: usize,
    cosets: Vec<GroupElement>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t: Option<GroupElement>,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta: Option<i8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
struct Form {
    items: Vec<Item>,
    #[serde(skip_serializing_if = "Option::is_none")]
    product: Option<GroupElement>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mu: Option<(u32, u32)>,
}

/// Everything the shift/permutation action touches.
#[derive(Clone)]
struct Shape<'a> {
    group: &'a GroupSpec,
    sub: &'a FiniteSubgroup,
    blocks: Vec<Block>,
    /// `g'_i g''_i` when there are no single blocks.
    product: Option<GroupElement>,
    mu: Option<RootOfUnity>,
    ctx: Option<&'a TypeIIContext>,
}

impl<'a> Shape<'a> {
    fn matrix(group: &'a GroupSpec, sub: &'a FiniteSubgroup, kappa: &[usize], gamma: &[GroupElement]) -> Self {
        let blocks = kappa
            .iter()
            .zip(gamma)
            .map(|(&q, g)| Block { class: 0, q, entries: vec![g.clone()], t: None, delta: None })
            .collect();
        Shape { group, sub, blocks, product: None, mu: None, ctx: None }
    }

    fn structured(
        group: &'a GroupSpec,
        sub: &'a FiniteSubgroup,
        sg: &StructuredKappaGamma,
        tau: &[GroupElement],
        delta: Option<&[i8]>,
    ) -> Self {
        let mut blocks = vec![];
        for i in 0..sg.m {
            blocks.push(Block {
                class: if i < sg.ell { 1 } else { 2 },
                q: sg.q[i],
                entries: vec![sg.gamma_single[i].clone()],
                t: tau.get(i).cloned(),
                delta: delta.map(|d| d[i]),
            });
        }
        for (j, (a, b)) in sg.gamma_pairs.iter().enumerate() {
            blocks.push(Block { class: 3, q: sg.q[sg.m + j], entries: vec![a.clone(), b.clone()], t: None, delta: None });
        }
        let product = (sg.m == 0).then(|| group.mul(&sg.gamma_pairs[0].0, &sg.gamma_pairs[0].1));
        Shape { group, sub, blocks, product, mu: None, ctx: None }
    }

    fn inverse(&self) -> Self {
        let g = self.group;
        let mut out = self.clone();
        for b in &mut out.blocks {
            for x in &mut b.entries {
                *x = g.inv(x);
            }
        }
        out.product = self.product.as_ref().map(|p| g.inv(p));
        out.mu = self.mu.map(|m| m.inv());
        out
    }

    /// Sorted items after shifting by `g`, with the original block index of each.
    fn form(&self, g: &GroupElement) -> (Form, Vec<usize>) {
        let grp = self.group;
        let mut items: Vec<(Item, usize)> = self
            .blocks
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let mut cosets: Vec<GroupElement> =
                    b.entries.iter().map(|x| self.sub.coset_rep(&grp.mul(x, g))).collect();
                cosets.sort();
                (Item { class: b.class, q: b.q, cosets, t: b.t.clone(), delta: b.delta }, i)
            })
            .collect();
        items.sort();
        let order = items.iter().map(|(_, i)| *i).collect();
        let product = self.product.as_ref().map(|p| grp.mul(p, &grp.square(g)));
        let mu = self.mu.map(|m| {
            let ctx = self.ctx.expect("mu needs a Type II context");
            m.mul(&ctx.chi2(g)).reduced()
        });
        (Form { items: items.into_iter().map(|(it, _)| it).collect(), product, mu }, order)
    }

    fn candidate_shifts(&self, other: &Shape) -> Vec<GroupElement> {
        let g = self.group;
        let target = &other.blocks[0].entries[0];
        let mut out = BTreeSet::new();
        for b in &self.blocks {
            for x in &b.entries {
                let base = g.div(target, x);
                for t in self.sub.elements() {
                    out.insert(g.mul(&base, t));
                }
            }
        }
        out.into_iter().collect()
    }
}

/// Searches for a shift and permutation taking `a` to `b`.
fn match_shapes(a: &Shape, b: &Shape) -> Option<Witness> {
    if a.blocks.len() != b.blocks.len() || a.blocks.is_empty() {
        return None;
    }
    let (fb, ob) = b.form(&b.group.identity());
    for g in a.candidate_shifts(b) {
        let (fa, oa) = a.form(&g);
        if fa == fb {
            let mut perm = vec![0; ob.len()];
            for (p, &i) in ob.iter().enumerate() {
                perm[i] = oa[p];
            }
            return Some(Witness { shift: g, perm, inverted: false });
        }
    }
    None
}

fn match_either(a: &Shape, b: &Shape, allow_inverse: bool) -> Option<Witness> {
    match_shapes(a, b).or_else(|| {
        if allow_inverse {
            match_shapes(&a.inverse(), b).map(|w| Witness { inverted: true, ..w })
        } else {
            None
        }
    })
}

/// `(κ₁, γ₁) ~ (κ₂, γ₂)` modulo `T`: some `g` and `π` with `k̃_i = k_{π(i)}`
/// and `g̃_i ≡ g_{π(i)} g`.
pub fn equiv_shift_perm(
    g: &GroupSpec,
    t: &FiniteSubgroup,
    k1: &[usize],
    g1: &[GroupElement],
    k2: &[usize],
    g2: &[GroupElement],
) -> Option<Witness> {
    if k1.len() != g1.len() || k2.len() != g2.len() {
        return None;
    }
    match_shapes(&Shape::matrix(g, t, k1, g1), &Shape::matrix(g, t, k2, g2))
}

fn same_group(a: &GroupSpec, b: &GroupSpec) -> Result<()> {
    if a != b {
        return Err(GradingError::InvalidParams(format!("gradings by different groups {a} and {b}")));
    }
    Ok(())
}

/// Isomorphism of `M(G, T₁, β₁, κ₁, γ₁)` and `M(G, T₂, β₂, κ₂, γ₂)`.
pub fn iso_matrix_gradings(p1: &MatrixGradingParams, p2: &MatrixGradingParams) -> Result<Option<Witness>> {
    same_group(p1.group(), p2.group())?;
    if p1.n() != p2.n() {
        return Err(GradingError::InvalidParams(format!("sizes differ: {} vs {}", p1.n(), p2.n())));
    }
    if p1.subgroup() != p2.subgroup() || !bichar_eq(p1.beta(), p2.beta()) {
        return Ok(None);
    }
    Ok(equiv_shift_perm(p1.group(), p1.subgroup(), p1.kappa(), p1.gamma(), p2.kappa(), p2.gamma()))
}

/// `(κ₁, γ₁, τ₁) ≈ (κ₂, γ₂, τ₂)` for normalized data over an elementary 2-group `T`.
pub fn equiv_star(
    g: &GroupSpec,
    t: &FiniteSubgroup,
    sg1: &StructuredKappaGamma,
    tau1: &[GroupElement],
    sg2: &StructuredKappaGamma,
    tau2: &[GroupElement],
) -> Option<Witness> {
    if (sg1.ell, sg1.m, sg1.k) != (sg2.ell, sg2.m, sg2.k) {
        return None;
    }
    match_shapes(&Shape::structured(g, t, sg1, tau1, None), &Shape::structured(g, t, sg2, tau2, None))
}

/// The `m = 0` case of [`equiv_star`].
pub fn equiv_star_m0(g: &GroupSpec, t: &FiniteSubgroup, sg1: &StructuredKappaGamma, sg2: &StructuredKappaGamma) -> Option<Witness> {
    if sg1.m != 0 || sg2.m != 0 {
        return None;
    }
    equiv_star(g, t, sg1, &[], sg2, &[])
}

/// Isomorphism of `M*(G, T₁, β₁, κ₁, γ₁, τ₁, δ₁)` and `M*(G, T₂, …, δ₂)`.
pub fn iso_graded_involution(p1: &InvolutionParams, p2: &InvolutionParams) -> Result<Option<Witness>> {
    same_group(p1.group(), p2.group())?;
    if p1.subgroup() != p2.subgroup() || !bichar_eq(p1.beta(), p2.beta()) || p1.delta() != p2.delta() {
        return Ok(None);
    }
    Ok(equiv_star(p1.group(), p1.subgroup(), p1.structured(), p1.tau(), p2.structured(), p2.tau()))
}

fn type_ii_shape(p: &TypeIIParams) -> Shape<'_> {
    let ctx = p.context();
    let delta = match p.data() {
        TypeIIData::II2 { delta, .. } => Some(delta.as_slice()),
        _ => None,
    };
    let mut s = Shape::structured(ctx.quotient_group(), ctx.tbar(), p.structured(), p.tau(), delta);
    if let TypeIIData::II3 { mu } = p.data() {
        s.mu = Some(*mu);
    }
    s.ctx = Some(ctx);
    s
}

fn same_context(a: &TypeIIParams, b: &TypeIIParams) -> bool {
    let (x, y) = (a.context(), b.context());
    x.group() == y.group() && x.h() == y.h() && x.big_h() == y.big_h() && bichar_eq(a.beta_bar(), b.beta_bar())
}

/// The relation of one Type II variant, without the `γ⁻¹` branch.
pub fn equiv_type_ii(p1: &TypeIIParams, p2: &TypeIIParams) -> Option<Witness> {
    if p1.variant_name() != p2.variant_name() || !same_context(p1, p2) {
        return None;
    }
    let (a, b) = (p1.structured(), p2.structured());
    if (a.ell, a.m, a.k) != (b.ell, b.m, b.k) {
        return None;
    }
    match_shapes(&type_ii_shape(p1), &type_ii_shape(p2))
}

/// `(κ, γ, τ, δ) ≈ (κ̃, γ̃, τ̃, δ̃)` for Type II₂ data.
pub fn equiv_ii2(p1: &TypeIIParams, p2: &TypeIIParams) -> Option<Witness> {
    matches!(p1.data(), TypeIIData::II2 { .. }).then(|| equiv_type_ii(p1, p2)).flatten()
}

/// `(κ, γ, μ) ≈ (κ̃, γ̃, μ̃)` for Type II₃ data, with `μ̃ = μ χ²(ḡ)`.
pub fn equiv_ii3(p1: &TypeIIParams, p2: &TypeIIParams) -> Option<Witness> {
    matches!(p1.data(), TypeIIData::II3 { .. }).then(|| equiv_type_ii(p1, p2)).flatten()
}

fn refuse_so8(p: &LieGradingParams) -> Result<()> {
    if matches!(p, LieGradingParams::D(_)) && p.n() == 8 {
        return Err(GradingError::Refused("so_8 is outside the classified range".into()));
    }
    Ok(())
}

/// Isomorphism of graded classical Lie algebras given by parameters.
pub fn iso_lie(p1: &LieGradingParams, p2: &LieGradingParams) -> Result<Option<Witness>> {
    refuse_so8(p1)?;
    refuse_so8(p2)?;
    same_group(p1.group(), p2.group())?;
    if p1.n() != p2.n() || p1.variant_name() != p2.variant_name() {
        return Ok(None);
    }
    Ok(match (p1, p2) {
        (LieGradingParams::AI(a), LieGradingParams::AI(b)) => {
            if a.subgroup() != b.subgroup() || !bichar_eq(a.beta(), b.beta()) {
                return Ok(None);
            }
            let sa = Shape::matrix(a.group(), a.subgroup(), a.kappa(), a.gamma());
            let sb = Shape::matrix(b.group(), b.subgroup(), b.kappa(), b.gamma());
            match_either(&sa, &sb, true)
        }
        (LieGradingParams::AII(a), LieGradingParams::AII(b)) => {
            if !same_context(a, b) || (a.structured().ell, a.structured().m, a.structured().k)
                != (b.structured().ell, b.structured().m, b.structured().k)
            {
                return Ok(None);
            }
            match_either(&type_ii_shape(a), &type_ii_shape(b), true)
        }
        (LieGradingParams::B(a), LieGradingParams::B(b))
        | (LieGradingParams::C(a), LieGradingParams::C(b))
        | (LieGradingParams::D(a), LieGradingParams::D(b)) => iso_graded_involution(a, b)?,
        _ => None,
    })
}

/// Parameters of any supported family.
#[derive(Clone, Debug)]
pub enum InvariantTuple {
    Matrix(MatrixGradingParams),
    MatrixWithInvolution(InvolutionParams),
    Lie(LieGradingParams),
}

impl InvariantTuple {
    pub fn family(&self) -> &'static str {
        match self {
            InvariantTuple::Matrix(_) => "matrix",
            InvariantTuple::MatrixWithInvolution(_) => "matrix-with-involution",
            InvariantTuple::Lie(p) => p.variant_name(),
        }
    }

    pub fn group(&self) -> &GroupSpec {
        match self {
            InvariantTuple::Matrix(p) => p.group(),
            InvariantTuple::MatrixWithInvolution(p) => p.group(),
            InvariantTuple::Lie(p) => p.group(),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            InvariantTuple::Matrix(p) => p.n(),
            InvariantTuple::MatrixWithInvolution(p) => p.n(),
            InvariantTuple::Lie(p) => p.n(),
        }
    }

    pub fn to_wire(&self) -> InvariantWire {
        match self {
            InvariantTuple::Matrix(p) => InvariantWire::Matrix(p.to_wire()),
            InvariantTuple::MatrixWithInvolution(p) => InvariantWire::MatrixWithInvolution(p.to_wire()),
            InvariantTuple::Lie(p) => match p.to_wire() {
                LieParamsWire::AI(w) => InvariantWire::AI(w),
                LieParamsWire::AII1(w) => InvariantWire::AII1(w),
                LieParamsWire::AII2(w) => InvariantWire::AII2(w),
                LieParamsWire::AII3(w) => InvariantWire::AII3(w),
                LieParamsWire::B(w) => InvariantWire::B(w),
                LieParamsWire::C(w) => InvariantWire::C(w),
                LieParamsWire::D(w) => InvariantWire::D(w),
            },
        }
    }

    pub fn from_wire(w: &InvariantWire) -> Result<Self> {
        let lie = |lw: LieParamsWire| LieGradingParams::from_wire(&lw).map(InvariantTuple::Lie);
        match w.clone() {
            InvariantWire::Matrix(p) => Ok(InvariantTuple::Matrix(MatrixGradingParams::from_wire(&p)?)),
            InvariantWire::MatrixWithInvolution(p) => {
                Ok(InvariantTuple::MatrixWithInvolution(InvolutionParams::from_wire(&p)?))
            }
            InvariantWire::AI(p) => lie(LieParamsWire::AI(p)),
            InvariantWire::AII1(p) => lie(LieParamsWire::AII1(p)),
            InvariantWire::AII2(p) => lie(LieParamsWire::AII2(p)),
            InvariantWire::AII3(p) => lie(LieParamsWire::AII3(p)),
            InvariantWire::B(p) => lie(LieParamsWire::B(p)),
            InvariantWire::C(p) => lie(LieParamsWire::C(p)),
            InvariantWire::D(p) => lie(LieParamsWire::D(p)),
        }
    }
}

/// JSON form of an [`InvariantTuple`], tagged by `family`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum InvariantWire {
    #[serde(rename = "matrix")]
    Matrix(MatrixParamsWire),
    #[serde(rename = "matrix-with-involution")]
    MatrixWithInvolution(InvolutionWire),
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

/// Pairwise isomorphism within one family; different families are never
/// isomorphic.
pub fn iso_tuples(a: &InvariantTuple, b: &InvariantTuple) -> Result<Option<Witness>> {
    match (a, b) {
        (InvariantTuple::Matrix(x), InvariantTuple::Matrix(y)) => {
            if x.n() != y.n() {
                return Ok(None);
            }
            iso_matrix_gradings(x, y)
        }
        (InvariantTuple::MatrixWithInvolution(x), InvariantTuple::MatrixWithInvolution(y)) => {
            if x.n() != y.n() {
                return Ok(None);
            }
            iso_graded_involution(x, y)
        }
        (InvariantTuple::Lie(x), InvariantTuple::Lie(y)) => iso_lie(x, y),
        _ => {
            same_group(a.group(), b.group())?;
            Ok(None)
        }
    }
}

#[derive(Serialize)]
struct KeyData<'a> {
    family: &'a str,
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    h: Option<&'a GroupElement>,
    #[serde(skip_serializing_if = "Option::is_none")]
    big_h: Option<&'a [GroupElement]>,
    t: &'a [GroupElement],
    beta: &'a [Vec<u64>],
    #[serde(skip_serializing_if = "Option::is_none")]
    delta: Option<i8>,
    form: &'a Form,
}

struct Best {
    form: Form,
    order: Vec<usize>,
    inverted: bool,
    bytes: Vec<u8>,
}

/// Least serialized form over all shifts in `G` (and `γ ↦ γ⁻¹` if allowed).
fn minimize(shape: &Shape, allow_inverse: bool) -> Result<Best> {
    let elements = shape.group.elements().map_err(|_| GradingError::Refused("canonical keys need a finite group".into()))?;
    let mut best: Option<Best> = None;
    let inv = shape.inverse();
    let variants: Vec<(&Shape, bool)> =
        if allow_inverse { vec![(shape, false), (&inv, true)] } else { vec![(shape, false)] };
    for (s, inverted) in variants {
        for g in &elements {
            let (form, order) = s.form(g);
            let bytes = serde_json::to_vec(&form).expect("forms serialize");
            if best.as_ref().map_or(true, |b| bytes < b.bytes) {
                best = Some(Best { form, order, inverted, bytes });
            }
        }
    }
    best.ok_or_else(|| GradingError::InvalidParams("empty group".into()))
}

fn key_of(data: &KeyData) -> String {
    format!("gk1:{}", hex::encode(serde_json::to_vec(data).expect("keys serialize")))
}

/// Rebuilds structured data from the minimizing shift: entries become
/// coset representatives and the second entry of each pair is fixed by the
/// common value.
fn rebuild_structured(shape: &Shape, best: &Best, sg: &StructuredKappaGamma) -> (StructuredKappaGamma, Vec<GroupElement>, Vec<i8>) {
    let src = if best.inverted { shape.inverse() } else { shape.clone() };
    let g = src.group;
    let blocks: Vec<&Block> = best.order.iter().map(|&i| &src.blocks[i]).collect();
    let mut q = vec![];
    let mut single = vec![];
    let mut tau = vec![];
    let mut delta = vec![];
    let mut pairs = vec![];
    for (b, item) in blocks.iter().zip(&best.form.items) {
        q.push(b.q);
        if b.class == 3 {
            pairs.push(item.cosets[0].clone());
        } else {
            single.push(item.cosets[0].clone());
            if let Some(t) = &b.t {
                tau.push(t.clone());
            }
            if let Some(d) = b.delta {
                delta.push(d);
            }
        }
    }
    let c = match (&best.form.product, single.first()) {
        (Some(p), _) => p.clone(),
        (None, Some(x)) => g.mul(&g.square(x), &tau[0]),
        (None, None) => unreachable!("pairs without singles carry a product"),
    };
    let pairs = pairs.into_iter().map(|a| { let b = g.div(&c, &a); (a, b) }).collect();
    let out = StructuredKappaGamma::new(sg.ell, sg.m, sg.k, q, single, pairs).expect("same shape");
    (out, tau, delta)
}

/// The lexicographically least representative of the class of `t`.
pub fn canonical_form(t: &InvariantTuple) -> Result<InvariantTuple> {
    Ok(canonical(t)?.0)
}

/// `gk1:` followed by the hex of the least serialized form.
pub fn canonical_key(t: &InvariantTuple) -> Result<String> {
    Ok(canonical(t)?.1)
}

fn matrix_canonical(p: &MatrixGradingParams, family: &str, allow_inverse: bool) -> Result<(MatrixGradingParams, String)> {
    let shape = Shape::matrix(p.group(), p.subgroup(), p.kappa(), p.gamma());
    let best = minimize(&shape, allow_inverse)?;
    let kappa = best.order.iter().map(|&i| p.kappa()[i]).collect();
    let gamma = best.form.items.iter().map(|it| it.cosets[0].clone()).collect();
    let q = MatrixGradingParams::new(p.group(), p.beta().clone(), kappa, gamma)?;
    let key = key_of(&KeyData {
        family,
        n: p.n(),
        h: None,
        big_h: None,
        t: p.subgroup().elements(),
        beta: p.beta().basis_exponents(),
        delta: None,
        form: &best.form,
    });
    Ok((q, key))
}

fn involution_canonical(p: &InvolutionParams, family: &str) -> Result<(InvolutionParams, String)> {
    let shape = Shape::structured(p.group(), p.subgroup(), p.structured(), p.tau(), None);
    let best = minimize(&shape, false)?;
    let (sg, tau, _) = rebuild_structured(&shape, &best, p.structured());
    let q = InvolutionParams::new(p.group(), p.beta().clone(), sg, tau, p.delta())?;
    let key = key_of(&KeyData {
        family,
        n: p.n(),
        h: None,
        big_h: None,
        t: p.subgroup().elements(),
        beta: p.beta().basis_exponents(),
        delta: Some(p.delta()),
        form: &best.form,
    });
    Ok((q, key))
}

fn type_ii_canonical(p: &TypeIIParams) -> Result<(TypeIIParams, String)> {
    let shape = type_ii_shape(p);
    let best = minimize(&shape, true)?;
    let (sg, tau, delta) = rebuild_structured(&shape, &best, p.structured());
    let data = match p.data() {
        TypeIIData::II1 { .. } => TypeIIData::II1 { tau },
        TypeIIData::II2 { .. } => TypeIIData::II2 { tau, delta },
        TypeIIData::II3 { .. } => {
            let (n, k) = best.form.mu.expect("II3 carries mu");
            TypeIIData::II3 { mu: RootOfUnity::new(n, k as i64) }
        }
    };
    let ctx = p.context();
    let q = TypeIIParams::new(ctx.clone(), p.beta_bar().clone(), sg, data)?;
    let key = key_of(&KeyData {
        family: p.variant_name(),
        n: p.n(),
        h: Some(ctx.h()),
        big_h: Some(ctx.big_h().elements()),
        t: ctx.tbar().elements(),
        beta: p.beta_bar().basis_exponents(),
        delta: None,
        form: &best.form,
    });
    Ok((q, key))
}

pub(crate) fn canonical(t: &InvariantTuple) -> Result<(InvariantTuple, String)> {
    if !t.group().is_finite() {
        return Err(GradingError::Refused("canonical keys need a finite group".into()));
    }
    Ok(match t {
        InvariantTuple::Matrix(p) => {
            let (q, k) = matrix_canonical(p, "matrix", false)?;
            (InvariantTuple::Matrix(q), k)
        }
        InvariantTuple::MatrixWithInvolution(p) => {
            let (q, k) = involution_canonical(p, "matrix-with-involution")?;
            (InvariantTuple::MatrixWithInvolution(q), k)
        }
        InvariantTuple::Lie(l) => {
            refuse_so8(l)?;
            let (q, k) = match l {
                LieGradingParams::AI(p) => {
                    let (q, k) = matrix_canonical(p, "A_I", true)?;
                    (LieGradingParams::AI(q), k)
                }
                LieGradingParams::AII(p) => {
                    let (q, k) = type_ii_canonical(p)?;
                    (LieGradingParams::AII(q), k)
                }
                LieGradingParams::B(p) => {
                    let (q, k) = involution_canonical(p, "B")?;
                    (LieGradingParams::B(q), k)
                }
                LieGradingParams::C(p) => {
                    let (q, k) = involution_canonical(p, "C")?;
                    (LieGradingParams::C(q), k)
                }
                LieGradingParams::D(p) => {
                    let (q, k) = involution_canonical(p, "D")?;
                    (LieGradingParams::D(q), k)
                }
            };
            (InvariantTuple::Lie(q), k)
        }
    })
}

/// Outcome of [`recognize_matrix_grading`].
#[derive(Clone, Debug)]
pub struct Recognition {
    /// Canonical parameters.
    pub params: MatrixGradingParams,
    /// Largest distance of a measured commutation factor from its root of unity.
    pub beta_residual: f64,
    /// Smallest relative norm of a Peirce component used to place a block.
    pub peirce_margin: f64,
}

fn fail(m: impl Into<String>) -> GradingError {
    GradingError::Recognition(m.into())
}

/// Independent matrices of each component, by degree.
fn component_bases(a: &GradedAlgebra) -> Vec<(GroupElement, Vec<CycloMatrix>)> {
    let mut out: Vec<(GroupElement, Vec<CycloMatrix>)> = vec![];
    for (g, idx) in crate::graded_matrix::basis_by_degree(a) {
        let mut ech = Echelon::new(a.n * a.n);
        let mats: Vec<CycloMatrix> =
            idx.iter().map(|&i| a.basis[i].matrix.clone()).filter(|m| ech.insert(m.as_slice().to_vec())).collect();
        if !mats.is_empty() {
            out.push((g, mats));
        }
    }
    out
}

/// Elements of `span(mats)` commuting with every element of `with`.
fn centralizer_part(mats: &[CycloMatrix], with: &[CycloMatrix]) -> Vec<CycloMatrix> {
    let k = mats.len();
    let mut rows = Echelon::new(k);
    let mut kept: Vec<Vec<CycloNum>> = vec![];
    'outer: for y in with {
        let comms: Vec<CycloMatrix> = mats.iter().map(|x| x.commutator(y)).collect();
        let len = comms[0].as_slice().len();
        for p in 0..len {
            let row: Vec<CycloNum> = comms.iter().map(|c| c.as_slice()[p].clone()).collect();
            if row.iter().all(Zero::is_zero) {
                continue;
            }
            if rows.insert(row.clone()) {
                kept.push(row);
                if kept.len() == k {
                    break 'outer;
                }
            }
        }
    }
    if kept.is_empty() {
        return mats.to_vec();
    }
    let m = Matrix::from_rows(kept);
    m.kernel()
        .into_iter()
        .map(|c| {
            let mut acc = Matrix::zeros(mats[0].rows(), mats[0].cols());
            for (ci, x) in c.iter().zip(mats) {
                if !ci.is_zero() {
                    acc = acc.add(&x.scale(ci));
                }
            }
            acc
        })
        .collect()
}

fn first_nonzero(m: &CycloMatrix) -> Option<usize> {
    m.as_slice().iter().position(|x| !x.is_zero())
}

/// Exact `r` with `X Y = r Y X`, if `X Y ≠ 0` and such `r` exists.
fn commutation_factor(x: &CycloMatrix, y: &CycloMatrix) -> Option<CycloNum> {
    let xy = x.mul(y);
    let yx = y.mul(x);
    let p = first_nonzero(&yx)?;
    let r = &xy.as_slice()[p] * &yx.as_slice()[p].inv().ok()?;
    (xy == yx.scale(&r)).then_some(r)
}

fn to_dmatrix(m: &CycloMatrix) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m.get(i, j).to_complex())
}

/// Draws of the generic central element before recognition gives up.
const SPECTRUM_ATTEMPTS: usize = 8;

/// A random element `z` of the span of `center` (a commutative semisimple
/// algebra of dimension `s`) with its `s` distinct eigenvalues, read off the
/// `s × s` matrix of multiplication by `z` on that span.
fn central_spectrum(center: &[DMatrix<Complex64>], rng: &mut ChaCha8Rng) -> Result<(DMatrix<Complex64>, Vec<Complex64>)> {
    let s = center.len();
    let n = center[0].nrows();
    let cols = DMatrix::from_fn(n * n, s, |r, j| center[j][r]);
    let gram = (cols.adjoint() * &cols).lu();
    for _ in 0..SPECTRUM_ATTEMPTS {
        let mut z = DMatrix::<Complex64>::zeros(n, n);
        for c in center {
            z += c * Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        let prods: Vec<DMatrix<Complex64>> = center.iter().map(|c| &z * c).collect();
        let images = DMatrix::from_fn(n * n, s, |r, j| prods[j][r]);
        let lz = gram.solve(&(cols.adjoint() * images)).ok_or_else(|| fail("center basis is numerically dependent"))?;
        let Some(eig) = Schur::try_new(lz, f64::EPSILON, 1000 * s).and_then(|x| x.eigenvalues()) else { continue };
        let eig: Vec<Complex64> = eig.iter().copied().collect();
        let scale = eig.iter().map(|x| x.norm()).fold(1.0, f64::max);
        let separated = (0..s).all(|i| (i + 1..s).all(|j| (eig[i] - eig[j]).norm() > 1e-6 * scale));
        if separated {
            return Ok((z, eig));
        }
    }
    Err(fail("no central element with a separated spectrum"))
}

/// Seed of the generic central element used by [`recognize_matrix_grading`].
pub const DEFAULT_RECOGNITION_SEED: u64 = 0x5eed;

/// Recovers `(T, β, κ, γ)` from a grading of `M_n` given by matrices.
pub fn recognize_matrix_grading(a: &GradedAlgebra, tol: f64) -> Result<Recognition> {
    recognize_with_seed(a, tol, DEFAULT_RECOGNITION_SEED)
}

/// [`recognize_matrix_grading`] with an explicit seed for the generic central element.
pub fn recognize_with_seed(a: &GradedAlgebra, tol: f64, seed: u64) -> Result<Recognition> {
    if a.kind != AlgebraKind::Associative {
        return Err(fail("recognition expects an associative grading"));
    }
    let report = verify_associative_grading(a);
    if !report.passed {
        return Err(fail(format!("input is not a grading of M_{}: {} violations", a.n, report.violations.len())));
    }
    let g = &a.group;
    let comps = component_bases(a);
    let r_e = comps.iter().find(|(d, _)| d.is_identity()).map(|(_, m)| m.clone()).unwrap_or_default();
    if r_e.is_empty() {
        return Err(fail("identity component is zero"));
    }
    // centralizer of R_e, one component at a time
    let zc: Vec<(GroupElement, Vec<CycloMatrix>)> = comps
        .iter()
        .map(|(d, mats)| (d.clone(), centralizer_part(mats, &r_e)))
        .filter(|(_, z)| !z.is_empty())
        .collect();
    let support: Vec<GroupElement> = zc.iter().map(|(d, _)| d.clone()).collect();
    let t = FiniteSubgroup::generate(g, &support).map_err(|e| fail(e.to_string()))?;
    if t.elements() != support.as_slice() {
        return Err(fail("support of the centralizer is not a subgroup"));
    }
    let d = square_root_order(&t).ok_or_else(|| fail("support of the centralizer has non-square order"))?;
    let zc_of = |u: &GroupElement| &zc.iter().find(|(x, _)| x == u).expect("u in T").1;
    // β on the basis of T
    let basis: Vec<GroupElement> = t.basis().iter().map(|(b, _)| b.clone()).collect();
    let e = t.basis().iter().fold(1u64, |acc, (_, o)| num_integer::lcm(acc, *o));
    let mut exps = vec![vec![0i64; basis.len()]; basis.len()];
    let mut beta_residual: f64 = 0.0;
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            if i == j {
                continue;
            }
            let (xu, xv) = (zc_of(&basis[i]), zc_of(&basis[j]));
            let mut found = None;
            'pairs: for x in xu {
                for y in xv {
                    if let Some(r) = commutation_factor(x, y) {
                        found = Some(r);
                        break 'pairs;
                    }
                }
            }
            if found.is_none() {
                let sum = |ms: &[CycloMatrix]| ms.iter().skip(1).fold(ms[0].clone(), |acc, m| acc.add(m));
                found = commutation_factor(&sum(xu), &sum(xv));
            }
            let r = found.ok_or_else(|| fail("no commuting pair determines the bicharacter"))?;
            let z = r.to_complex();
            let k = ((z.arg() / (2.0 * std::f64::consts::PI) * e as f64).round() as i64).rem_euclid(e as i64);
            let snapped = RootOfUnity::new(e as u32, k);
            let residual = (z - snapped.to_complex()).norm();
            if residual > 1e-6 || snapped.to_cyclo() != r {
                return Err(fail(format!("commutation factor {r} is not an {e}-th root of unity")));
            }
            beta_residual = beta_residual.max(residual);
            exps[i][j] = k;
        }
    }
    let beta = Bicharacter::new(g, &basis, e, &exps).map_err(|x| fail(x.to_string()))?;
    if !beta.is_nondegenerate() {
        return Err(fail("recovered bicharacter is degenerate"));
    }
    // idempotents from a generic central element of R_e
    let center = zc_of(&g.identity()).clone();
    let s = center.len();
    let n = a.n;
    let (kappa, gamma, margin) = if s == 1 {
        (vec![n / d], vec![g.identity()], 1.0)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (z, eig) = central_spectrum(&center.iter().map(to_dmatrix).collect::<Vec<_>>(), &mut rng)?;
        let id = DMatrix::<Complex64>::identity(n, n);
        let idem: Vec<DMatrix<Complex64>> = (0..s)
            .map(|i| {
                let mut p = id.clone();
                for j in 0..s {
                    if j != i {
                        p = p * (&z - &id * eig[j]) / (eig[i] - eig[j]);
                    }
                }
                p
            })
            .collect();
        let mut kappa = vec![];
        for p in &idem {
            let tr = p.trace();
            let mult = tr.re.round();
            if (tr.re - mult).abs() > 1e-4 || tr.im.abs() > 1e-4 || mult < 1.0 || mult as usize % d != 0 {
                return Err(fail("idempotent trace is not a positive multiple of the division degree"));
            }
            kappa.push(mult as usize / d);
        }
        let numeric: Vec<(GroupElement, DMatrix<Complex64>)> =
            a.basis.iter().map(|h| (h.degree.clone(), to_dmatrix(&h.matrix))).collect();
        let mut gamma = vec![g.identity()];
        let mut margin = f64::INFINITY;
        for i in 1..s {
            let mut best: Option<(f64, &GroupElement)> = None;
            for (deg, x) in &numeric {
                let nx = x.norm();
                if nx == 0.0 {
                    continue;
                }
                let r = (&idem[0] * x * &idem[i]).norm() / nx;
                if best.map_or(true, |(b, _)| r > b) {
                    best = Some((r, deg));
                }
            }
            let (r, deg) = best.ok_or_else(|| fail("no basis element meets a Peirce block"))?;
            if r < tol.sqrt() {
                return Err(fail("Peirce component below tolerance"));
            }
            margin = margin.min(r);
            gamma.push(deg.clone());
        }
        (kappa, gamma, margin)
    };
    let p = MatrixGradingParams::new(g, beta, kappa, gamma).map_err(|x| fail(x.to_string()))?;
    // exact re-check of the recovered data against the input
    let rebuilt = construct_matrix_grading(&p)?;
    if rebuilt.dimension_profile() != a.dimension_profile() {
        return Err(fail("recovered parameters do not reproduce the component dimensions"));
    }
    let InvariantTuple::Matrix(params) = canonical_form(&InvariantTuple::Matrix(p))? else {
        unreachable!("matrix family")
    };
    Ok(Recognition { params, beta_residual, peirce_margin: margin })
}
