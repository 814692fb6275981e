//! Division gradings (generalized Pauli matrices), the graded algebras
//! `M(G, T, β, κ, γ)`, axiom verification, monomial isomorphisms and
//! scrambling by random conjugation.

use std::collections::{BTreeMap, HashMap};

use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::abgroup::{FiniteSubgroup, GroupElement, GroupSpec};
use crate::bichar::{BicharWire, Bicharacter, SymplecticBasis};
use crate::cyclotomic::{CycloNum, RootOfUnity};
use crate::error::{GradingError, Result};
use crate::linalg::{Echelon, Matrix};
use crate::rational::Rational;
use crate::CycloMatrix;

/// Explicit matrices `X_t` realizing a division grading with support `T`.
#[derive(Clone, Debug)]
pub struct DivisionRealization {
    beta: Bicharacter,
    basis: SymplecticBasis,
    dim: usize,
    /// `X_t` by element index of `T`.
    matrices: Vec<CycloMatrix>,
    /// `(i_1, j_1, …)` exponents of each element of `T` on the basis.
    coords: Vec<Vec<u64>>,
}

impl DivisionRealization {
    pub fn beta(&self) -> &Bicharacter {
        &self.beta
    }

    pub fn basis(&self) -> &SymplecticBasis {
        &self.basis
    }

    pub fn subgroup(&self) -> &FiniteSubgroup {
        self.beta.subgroup()
    }

    /// `ℓ_1 ⋯ ℓ_r`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `X_t`; `t` must lie in `T`.
    pub fn matrix(&self, t: &GroupElement) -> Result<&CycloMatrix> {
        self.subgroup()
            .index_of(t)
            .map(|i| &self.matrices[i])
            .ok_or_else(|| GradingError::NotInSubgroup(format!("{t:?}")))
    }

    pub fn matrix_at(&self, i: usize) -> &CycloMatrix {
        &self.matrices[i]
    }

    /// `σ(u, v)` with `X_u X_v = σ(u, v) X_{uv}`:
    /// `Π_k β(b_k, a_k)^{j_k(u) i_k(v)}`.
    pub fn sigma(&self, u: &GroupElement, v: &GroupElement) -> Result<RootOfUnity> {
        let t = self.subgroup();
        let (Some(iu), Some(iv)) = (t.index_of(u), t.index_of(v)) else {
            return Err(GradingError::NotInSubgroup(format!("{u:?} or {v:?}")));
        };
        let (cu, cv) = (&self.coords[iu], &self.coords[iv]);
        let mut acc = RootOfUnity::one();
        for (k, (a, b)) in self.basis.pairs.iter().enumerate() {
            let e = cu[2 * k + 1] * cv[2 * k];
            if e != 0 {
                acc = acc.mul(&self.beta.eval(b, a)?.pow(e as i64));
            }
        }
        Ok(acc)
    }
}

/// Clock and shift matrices for one hyperbolic pair with `ε = ζ_ℓ^k`.
fn clock_shift(l: usize, eps: &RootOfUnity) -> (CycloMatrix, CycloMatrix) {
    let mut x = Matrix::zeros(l, l);
    let mut y = Matrix::zeros(l, l);
    for r in 0..l {
        x.set(r, r, eps.pow((l - 1 - r) as i64).to_cyclo());
        y.set(r, (r + 1) % l, CycloNum::one());
    }
    (x, y)
}

/// Tensor products of clock/shift pairs over a symplectic basis of `(T, β)`,
/// with `X_t` the ordered product `X_{a_1}^{i_1} X_{b_1}^{j_1} ⋯`.
pub fn standard_division_realization(beta: &Bicharacter) -> Result<DivisionRealization> {
    let basis = beta.symplectic_basis()?;
    let g = beta.parent();
    let mut factors = vec![];
    for ((a, b), &l) in basis.pairs.iter().zip(&basis.orders) {
        let eps = beta.eval(a, b)?;
        let (mut x, mut y) = clock_shift(l as usize, &eps);
        // The data structure promises X_a X_b = β(a, b) X_b X_a.
        let lhs = x.mul(&y);
        let rhs = y.mul(&x).scale(&eps.to_cyclo());
        if lhs != rhs {
            std::mem::swap(&mut x, &mut y);
            let lhs = x.mul(&y);
            let rhs = y.mul(&x).scale(&eps.to_cyclo());
            if lhs != rhs {
                return Err(GradingError::Inconsistent("clock/shift commutation value".into()));
            }
        }
        factors.push((x, y, l as usize));
    }
    let coord_map = basis.coordinate_map(g);
    let t = beta.subgroup();
    let mut matrices = Vec::with_capacity(t.order());
    let mut coords = Vec::with_capacity(t.order());
    for el in t.elements() {
        let c = coord_map[el].clone();
        let mut m = Matrix::<CycloNum>::identity(1);
        for (k, (x, y, l)) in factors.iter().enumerate() {
            let f = x.pow(c[2 * k]).mul(&y.pow(c[2 * k + 1]));
            debug_assert_eq!(f.rows(), *l);
            m = m.kron(&f);
        }
        matrices.push(m);
        coords.push(c);
    }
    Ok(DivisionRealization { beta: beta.clone(), dim: basis.dim(), basis, matrices, coords })
}

/// `(G, T, β, κ, γ)`.
#[derive(Clone, Debug)]
pub struct MatrixGradingParams {
    group: GroupSpec,
    beta: Bicharacter,
    kappa: Vec<usize>,
    gamma: Vec<GroupElement>,
}

impl MatrixGradingParams {
    pub fn new(group: &GroupSpec, beta: Bicharacter, kappa: Vec<usize>, gamma: Vec<GroupElement>) -> Result<Self> {
        let bad = |m: String| Err(GradingError::InvalidParams(m));
        if beta.parent() != group {
            return bad("bicharacter lives in a different group".into());
        }
        if kappa.is_empty() || kappa.len() != gamma.len() {
            return bad(format!("kappa has {} entries, gamma {}", kappa.len(), gamma.len()));
        }
        if kappa.contains(&0) {
            return bad("block multiplicities must be positive".into());
        }
        for g in &gamma {
            if !group.contains(g) {
                return Err(GradingError::NotInGroup(format!("{g:?}"), group.to_string()));
            }
        }
        let t = beta.subgroup();
        for i in 0..gamma.len() {
            for j in i + 1..gamma.len() {
                if t.coset_eq(&gamma[i], &gamma[j]) {
                    return bad(format!("g_{i} and g_{j} lie in the same coset of T"));
                }
            }
        }
        if !beta.is_nondegenerate() {
            return Err(GradingError::Degenerate);
        }
        let d = (t.order() as f64).sqrt().round() as usize;
        if d * d != t.order() {
            return bad("|T| is not a perfect square".into());
        }
        Ok(MatrixGradingParams { group: group.clone(), beta, kappa, gamma })
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

    pub fn kappa(&self) -> &[usize] {
        &self.kappa
    }

    pub fn gamma(&self) -> &[GroupElement] {
        &self.gamma
    }

    /// `√|T|`.
    pub fn division_dim(&self) -> usize {
        (self.subgroup().order() as f64).sqrt().round() as usize
    }

    /// `|κ| √|T|`.
    pub fn n(&self) -> usize {
        self.kappa.iter().sum::<usize>() * self.division_dim()
    }

    /// Same data with every `g_i` inverted.
    pub fn with_inverse_gamma(&self) -> MatrixGradingParams {
        let gamma = self.gamma.iter().map(|g| self.group.inv(g)).collect();
        MatrixGradingParams { gamma, ..self.clone() }
    }

    pub fn to_wire(&self) -> MatrixParamsWire {
        MatrixParamsWire {
            group: self.group.clone(),
            t: self.beta.to_wire(),
            kappa: self.kappa.clone(),
            gamma: self.gamma.clone(),
        }
    }

    pub fn from_wire(w: &MatrixParamsWire) -> Result<Self> {
        let g = w.group.clone().validated()?;
        let beta = Bicharacter::from_wire(&g, &w.t)?;
        MatrixGradingParams::new(&g, beta, w.kappa.clone(), w.gamma.clone())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixParamsWire {
    pub group: GroupSpec,
    #[serde(rename = "T")]
    pub t: BicharWire,
    pub kappa: Vec<usize>,
    pub gamma: Vec<GroupElement>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraKind {
    Associative,
    Lie,
}

/// Lie algebra families, for expected dimensions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LieFamily {
    A,
    B,
    C,
    D,
}

impl LieFamily {
    /// Dimension of the Lie algebra realized inside `M_n`.
    pub fn dim(&self, n: usize) -> usize {
        match self {
            LieFamily::A => n * n - 1,
            LieFamily::B | LieFamily::D => n * (n - 1) / 2,
            LieFamily::C => n * (n + 1) / 2,
        }
    }
}

/// Homogeneous basis element.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Homogeneous {
    pub matrix: CycloMatrix,
    pub degree: GroupElement,
}

/// Block layout of the idempotents `e_1, …, e_s`: `(offset, size)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeirceData {
    pub blocks: Vec<(usize, usize)>,
}

impl PeirceData {
    pub fn idempotent(&self, n: usize, i: usize) -> CycloMatrix {
        let (o, s) = self.blocks[i];
        let mut m = Matrix::zeros(n, n);
        for r in o..o + s {
            m.set(r, r, CycloNum::one());
        }
        m
    }
}

/// A concrete graded matrix algebra (or Lie subalgebra of `M_n`).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradedAlgebra {
    pub n: usize,
    pub group: GroupSpec,
    pub basis: Vec<Homogeneous>,
    #[serde(default = "default_kind")]
    pub kind: AlgebraKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lie_family: Option<LieFamily>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub peirce: Option<PeirceData>,
    /// Set on so₈, whose gradings fall outside the classification.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub classification_incomplete: bool,
}

fn default_kind() -> AlgebraKind {
    AlgebraKind::Associative
}

impl GradedAlgebra {
    pub fn associative(n: usize, group: &GroupSpec, basis: Vec<Homogeneous>) -> Self {
        GradedAlgebra {
            n,
            group: group.clone(),
            basis,
            kind: AlgebraKind::Associative,
            lie_family: None,
            peirce: None,
            classification_incomplete: false,
        }
    }

    /// Expected total dimension.
    pub fn expected_dim(&self) -> usize {
        match (self.kind, self.lie_family) {
            (AlgebraKind::Associative, _) => self.n * self.n,
            (AlgebraKind::Lie, Some(f)) => f.dim(self.n),
            (AlgebraKind::Lie, None) => self.basis.len(),
        }
    }

    /// Spans of the components, keyed by degree.
    pub fn components(&self) -> BTreeMap<GroupElement, Echelon<CycloNum>> {
        let mut out: BTreeMap<GroupElement, Echelon<CycloNum>> = BTreeMap::new();
        for h in &self.basis {
            out.entry(h.degree.clone())
                .or_insert_with(|| Echelon::new(self.n * self.n))
                .insert(h.matrix.as_slice().to_vec());
        }
        out
    }

    pub fn component_dimension(&self, g: &GroupElement) -> usize {
        let mut ech = Echelon::new(self.n * self.n);
        for h in self.basis.iter().filter(|h| &h.degree == g) {
            ech.insert(h.matrix.as_slice().to_vec());
        }
        ech.rank()
    }

    /// Degrees with a nonzero component, in canonical order.
    pub fn support(&self) -> Vec<GroupElement> {
        self.components().into_iter().filter(|(_, e)| e.rank() > 0).map(|(g, _)| g).collect()
    }

    /// Dimension of every nonzero component.
    pub fn dimension_profile(&self) -> BTreeMap<GroupElement, usize> {
        self.components().into_iter().map(|(g, e)| (g, e.rank())).filter(|(_, d)| *d > 0).collect()
    }

    /// Conjugates every basis matrix: `X ↦ S X S⁻¹`.
    pub fn conjugate(&self, s: &CycloMatrix, s_inv: &CycloMatrix) -> GradedAlgebra {
        let basis = self
            .basis
            .iter()
            .map(|h| Homogeneous { matrix: s.mul(&h.matrix).mul(s_inv), degree: h.degree.clone() })
            .collect();
        GradedAlgebra { basis, peirce: None, ..self.clone() }
    }
}

/// One failed axiom check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub left: usize,
    pub right: usize,
    pub message: String,
}

/// Outcome of an exhaustive verification.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub checks: usize,
    pub dimension: usize,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    fn fail(&mut self, left: usize, right: usize, message: String) {
        self.passed = false;
        self.violations.push(Violation { left, right, message });
    }
}

/// Shared checks: shapes, degrees in G, independence and total dimension.
fn check_basis(a: &GradedAlgebra, report: &mut VerificationReport) -> Echelon<CycloNum> {
    let n2 = a.n * a.n;
    let mut all = Echelon::new(n2);
    for (i, h) in a.basis.iter().enumerate() {
        if h.matrix.rows() != a.n || h.matrix.cols() != a.n {
            report.fail(i, i, format!("basis matrix {i} is not {n}x{n}", n = a.n));
            continue;
        }
        if !a.group.contains(&h.degree) {
            report.fail(i, i, format!("degree {:?} is not an element of {}", h.degree, a.group));
        }
        if !all.insert(h.matrix.as_slice().to_vec()) {
            report.fail(i, i, format!("basis element {i} is linearly dependent on earlier ones"));
        }
    }
    report.dimension = all.rank();
    if all.rank() != a.expected_dim() {
        report.fail(0, 0, format!("dimension {} differs from the expected {}", all.rank(), a.expected_dim()));
    }
    all
}

fn check_products(
    a: &GradedAlgebra,
    report: &mut VerificationReport,
    op: impl Fn(&CycloMatrix, &CycloMatrix) -> CycloMatrix,
    what: &str,
) {
    if !report.passed {
        return;
    }
    let comps = a.components();
    let n2 = a.n * a.n;
    let empty = Echelon::new(n2);
    for (i, x) in a.basis.iter().enumerate() {
        for (j, y) in a.basis.iter().enumerate() {
            let p = op(&x.matrix, &y.matrix);
            report.checks += 1;
            if p.is_zero() {
                continue;
            }
            let d = a.group.mul(&x.degree, &y.degree);
            let comp = comps.get(&d).unwrap_or(&empty);
            if !comp.contains(p.as_slice()) {
                report.fail(
                    i,
                    j,
                    format!("{what} of degrees {:?} and {:?} leaves the component of degree {:?}", x.degree, y.degree, d),
                );
            }
        }
    }
}

/// Checks `R_g R_h ⊆ R_{gh}` for all basis pairs, independence and `Σ dim = n²`.
pub fn verify_associative_grading(a: &GradedAlgebra) -> VerificationReport {
    let mut report = VerificationReport { passed: true, ..Default::default() };
    check_basis(a, &mut report);
    check_products(a, &mut report, |x, y| x.mul(y), "product");
    report
}

/// Checks `[L_g, L_h] ⊆ L_{gh}`, which also gives closure of `L`, and the
/// expected dimension.
pub fn verify_lie_grading(a: &GradedAlgebra) -> VerificationReport {
    let mut report = VerificationReport { passed: true, ..Default::default() };
    check_basis(a, &mut report);
    check_products(a, &mut report, |x, y| x.commutator(y), "bracket");
    report
}

/// Dispatches on the algebra kind.
pub fn verify(a: &GradedAlgebra) -> VerificationReport {
    match a.kind {
        AlgebraKind::Associative => verify_associative_grading(a),
        AlgebraKind::Lie => verify_lie_grading(a),
    }
}

/// `M(G, T, β, κ, γ)`: basis `E_pq ⊗ X_t` of degree `g_i⁻¹ t g_j` for `E_pq`
/// in block `(i, j)`.
pub fn construct_matrix_grading(p: &MatrixGradingParams) -> Result<GradedAlgebra> {
    let div = standard_division_realization(p.beta())?;
    Ok(construct_with_realization(p, &div))
}

pub fn construct_with_realization(p: &MatrixGradingParams, div: &DivisionRealization) -> GradedAlgebra {
    let g = p.group();
    let d = div.dim();
    let k: usize = p.kappa.iter().sum();
    let n = k * d;
    let mut block_of = vec![];
    for (i, &ki) in p.kappa.iter().enumerate() {
        block_of.extend(std::iter::repeat(i).take(ki));
    }
    let t = p.subgroup();
    let mut basis = Vec::with_capacity(n * n);
    for bp in 0..k {
        for bq in 0..k {
            let (i, j) = (block_of[bp], block_of[bq]);
            let shift = g.div(&p.gamma[j], &p.gamma[i]);
            for (ti, te) in t.elements().iter().enumerate() {
                let mut m = Matrix::zeros(n, n);
                m.place(bp * d, bq * d, div.matrix_at(ti));
                basis.push(Homogeneous { matrix: m, degree: g.mul(te, &shift) });
            }
        }
    }
    let mut blocks = vec![];
    let mut off = 0;
    for &ki in &p.kappa {
        blocks.push((off, ki * d));
        off += ki * d;
    }
    let mut a = GradedAlgebra::associative(n, g, basis);
    a.peirce = Some(PeirceData { blocks });
    a
}

/// `dim R_g = Σ_{(i,j): g ∈ g_i⁻¹ T g_j} k_i k_j` (independent count).
pub fn expected_component_dim(p: &MatrixGradingParams, g: &GroupElement) -> usize {
    let grp = p.group();
    let t = p.subgroup();
    let mut total = 0;
    for (i, gi) in p.gamma.iter().enumerate() {
        for (j, gj) in p.gamma.iter().enumerate() {
            let base = grp.mul(&grp.inv(gi), gj);
            if t.coset_eq(g, &base) {
                total += p.kappa[i] * p.kappa[j];
            }
        }
    }
    total
}

/// The monomial isomorphism of a permutation `π`, twists `t_i ∈ T` and a
/// shift `g`: the returned parameters are `k̃_i = k_{π(i)}`,
/// `g̃_i = g_{π(i)} t_{π(i)} g`, and the returned algebra is the image of
/// `a` under `Y ↦ P⁻¹ (B Y B⁻¹) P` with `B = Σ e_i ⊗ X_{t_i}` and `P` the
/// block permutation; degrees are unchanged.
pub fn apply_monomial_iso(
    p: &MatrixGradingParams,
    a: &GradedAlgebra,
    pi: &[usize],
    t_vec: &[GroupElement],
    shift: &GroupElement,
) -> Result<(MatrixGradingParams, GradedAlgebra)> {
    let s = p.kappa.len();
    let bad = |m: &str| Err(GradingError::InvalidParams(m.to_string()));
    if pi.len() != s || t_vec.len() != s {
        return bad("permutation and twists must have one entry per block");
    }
    let mut seen = vec![false; s];
    for &x in pi {
        if x >= s || seen[x] {
            return bad("not a permutation");
        }
        seen[x] = true;
    }
    if !p.group.contains(shift) {
        return Err(GradingError::NotInGroup(format!("{shift:?}"), p.group.to_string()));
    }
    if a.n != p.n() {
        return bad("algebra does not match the parameters");
    }
    let div = standard_division_realization(p.beta())?;
    let d = div.dim();
    let n = a.n;
    let mut b = Matrix::zeros(n, n);
    let mut b_inv = Matrix::zeros(n, n);
    let mut offsets = vec![];
    let mut off = 0;
    for (i, &ki) in p.kappa.iter().enumerate() {
        offsets.push(off);
        let x = div.matrix(&t_vec[i])?;
        let xi = x.inverse().expect("X_t is invertible");
        for r in 0..ki {
            b.place(off + r * d, off + r * d, x);
            b_inv.place(off + r * d, off + r * d, &xi);
        }
        off += ki * d;
    }
    // position in the new layout → position in the old layout
    let mut sigma = Vec::with_capacity(n);
    for &src in pi {
        let size = p.kappa[src] * d;
        sigma.extend(offsets[src]..offsets[src] + size);
    }
    let basis = a
        .basis
        .iter()
        .map(|h| {
            let z = b.mul(&h.matrix).mul(&b_inv);
            let mut m = Matrix::zeros(n, n);
            for (x, &sx) in sigma.iter().enumerate() {
                for (y, &sy) in sigma.iter().enumerate() {
                    let v = z.get(sx, sy);
                    if !v.is_zero() {
                        m.set(x, y, v.clone());
                    }
                }
            }
            Homogeneous { matrix: m, degree: h.degree.clone() }
        })
        .collect();
    let g = &p.group;
    let kappa = pi.iter().map(|&i| p.kappa[i]).collect();
    let gamma = pi.iter().map(|&i| g.mul(&g.mul(&p.gamma[i], &t_vec[i]), shift)).collect();
    let q = MatrixGradingParams::new(g, p.beta.clone(), kappa, gamma)?;
    let mut out = GradedAlgebra { basis, ..a.clone() };
    let mut blocks = vec![];
    let mut off = 0;
    for &ki in &q.kappa {
        blocks.push((off, ki * d));
        off += ki * d;
    }
    out.peirce = Some(PeirceData { blocks });
    Ok((q, out))
}

/// A pseudo-random invertible integer matrix with entries in `{−2, …, 2}`,
/// and its exact inverse. Singular draws move on to the next seed.
pub fn random_invertible(n: usize, seed: u64) -> (Matrix<Rational>, Matrix<Rational>) {
    let mut s = seed;
    loop {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let data: Vec<Rational> = (0..n * n).map(|_| Rational::from_integer(rng.gen_range(-2..=2))).collect();
        let m = Matrix::from_vec(n, n, data);
        if let Some(inv) = m.inverse() {
            return (m, inv);
        }
        s = s.wrapping_add(1);
    }
}

/// Conjugates every basis matrix by one random invertible integer matrix.
pub fn scramble(a: &GradedAlgebra, seed: u64) -> GradedAlgebra {
    let (s, s_inv) = random_invertible(a.n, seed);
    let lift = |m: &Matrix<Rational>| m.map(|q| CycloNum::from_rational(q.clone()));
    a.conjugate(&lift(&s), &lift(&s_inv))
}

/// `√|T|` dimension check helper for callers working with raw subgroups.
pub fn square_root_order(t: &FiniteSubgroup) -> Option<usize> {
    let d = (t.order() as f64).sqrt().round() as usize;
    (d * d == t.order()).then_some(d)
}

/// Groups a basis by degree (canonical order).
pub fn basis_by_degree(a: &GradedAlgebra) -> BTreeMap<GroupElement, Vec<usize>> {
    let mut out: BTreeMap<GroupElement, Vec<usize>> = BTreeMap::new();
    for (i, h) in a.basis.iter().enumerate() {
        out.entry(h.degree.clone()).or_default().push(i);
    }
    out
}

/// Least common multiple of the conductors of all entries.
pub fn common_conductor(a: &GradedAlgebra) -> u32 {
    let mut c = 1u32;
    for h in &a.basis {
        for x in h.matrix.as_slice() {
            if !x.is_rational() {
                c = c.lcm(&x.conductor());
            }
        }
    }
    c
}

/// Element index map of a finite subgroup, for callers keyed by element.
pub fn index_map(t: &FiniteSubgroup) -> HashMap<GroupElement, usize> {
    t.elements().iter().cloned().enumerate().map(|(i, g)| (g, i)).collect()
}
