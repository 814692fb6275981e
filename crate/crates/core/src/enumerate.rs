//! Exhaustive tables of isomorphism classes for small finite `G` and `n`,
//! deduplicated by canonical key.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::abgroup::{FiniteSubgroup, GroupElement, GroupSpec};
use crate::bichar::Bicharacter;
use crate::classify::{canonical, InvariantTuple, InvariantWire};
use crate::cyclotomic::RootOfUnity;
use crate::error::{GradingError, Result};
use crate::graded_matrix::{square_root_order, MatrixGradingParams};
use crate::involution::{quadratic_form, star_common_values, normalize_with_value, InvolutionParams, StructuredKappaGamma};
use crate::lie_grading::{admissible_common_values, LieGradingParams, TypeIIContext, TypeIIData, TypeIIParams};

/// Largest `n` accepted by the enumerators.
pub const MAX_N: usize = 12;
/// Largest `|G|` accepted by the enumerators.
pub const MAX_GROUP: u64 = 64;

/// The algebra whose gradings are enumerated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraSpec {
    Matrix,
    #[serde(rename = "matrix-involution")]
    MatrixInvolution,
    Sl,
    So,
    Sp,
}

/// Lie type for [`enum_lie_gradings`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LieType {
    A,
    B,
    C,
    D,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnumerationRequest {
    pub group: GroupSpec,
    pub algebra: AlgebraSpec,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
}

impl EnumerationRequest {
    pub fn run(&self) -> Result<ClassificationTable> {
        let mut table = match self.algebra {
            AlgebraSpec::Matrix => enum_matrix_gradings(&self.group, self.n)?,
            AlgebraSpec::MatrixInvolution => enum_graded_involutions(&self.group, self.n)?,
            AlgebraSpec::Sl => enum_lie_gradings(&self.group, LieType::A, self.n)?,
            AlgebraSpec::So => {
                let ty = if self.n % 2 == 1 { LieType::B } else { LieType::D };
                enum_lie_gradings(&self.group, ty, self.n)?
            }
            AlgebraSpec::Sp => enum_lie_gradings(&self.group, LieType::C, self.n)?,
        };
        if let Some(f) = &self.family {
            table.entries.retain(|e| &e.family == f);
            table.recount();
        }
        Ok(table)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableEntry {
    pub key: String,
    pub family: String,
    pub tuple: InvariantWire,
}

/// Canonical representatives sorted by key, with counts per family.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassificationTable {
    pub group: GroupSpec,
    pub algebra: AlgebraSpec,
    pub n: usize,
    pub counts: BTreeMap<String, usize>,
    pub entries: Vec<TableEntry>,
}

impl ClassificationTable {
    fn from_map(group: &GroupSpec, algebra: AlgebraSpec, n: usize, map: BTreeMap<String, InvariantTuple>) -> Self {
        let entries = map
            .into_iter()
            .map(|(key, t)| TableEntry { key, family: t.family().to_string(), tuple: t.to_wire() })
            .collect();
        let mut out = ClassificationTable { group: group.clone(), algebra, n, counts: BTreeMap::new(), entries };
        out.recount();
        out
    }

    fn recount(&mut self) {
        self.counts.clear();
        for e in &self.entries {
            *self.counts.entry(e.family.clone()).or_default() += 1;
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn tuples(&self) -> Result<Vec<InvariantTuple>> {
        self.entries.iter().map(|e| InvariantTuple::from_wire(&e.tuple)).collect()
    }

    /// One line per family and a total.
    pub fn summary(&self) -> String {
        let mut s = format!("{} n={} over {}\n", algebra_name(self.algebra), self.n, self.group);
        for (f, c) in &self.counts {
            s += &format!("  {f}: {c}\n");
        }
        s += &format!("  total: {}\n", self.len());
        s
    }
}

fn algebra_name(a: AlgebraSpec) -> &'static str {
    match a {
        AlgebraSpec::Matrix => "M",
        AlgebraSpec::MatrixInvolution => "M*",
        AlgebraSpec::Sl => "sl",
        AlgebraSpec::So => "so",
        AlgebraSpec::Sp => "sp",
    }
}

fn check_bounds(g: &GroupSpec, n: usize) -> Result<Vec<GroupElement>> {
    let order = g.order().ok_or_else(|| GradingError::InvalidParams("enumeration needs a finite group".into()))?;
    if order > MAX_GROUP {
        return Err(GradingError::InvalidParams(format!("|G| = {order} exceeds {MAX_GROUP}")));
    }
    if n == 0 || n > MAX_N {
        return Err(GradingError::InvalidParams(format!("n = {n} outside 1..={MAX_N}")));
    }
    g.elements()
}

/// Every subgroup of a finite `G`, sorted by element list.
pub fn all_subgroups(g: &GroupSpec) -> Result<Vec<FiniteSubgroup>> {
    let els = g.elements()?;
    let mut seen: BTreeMap<Vec<GroupElement>, FiniteSubgroup> = BTreeMap::new();
    let triv = FiniteSubgroup::trivial(g);
    seen.insert(triv.elements().to_vec(), triv.clone());
    let mut frontier = vec![triv];
    while let Some(s) = frontier.pop() {
        for x in &els {
            if s.contains(x) {
                continue;
            }
            let mut gens = s.generators().to_vec();
            gens.push(x.clone());
            let bigger = FiniteSubgroup::generate(g, &gens)?;
            if !seen.contains_key(bigger.elements()) {
                seen.insert(bigger.elements().to_vec(), bigger.clone());
                frontier.push(bigger);
            }
        }
    }
    Ok(seen.into_values().collect())
}

/// `T ≅ A × A`: every `d`-torsion count is a perfect square.
pub fn is_square_shape(t: &FiniteSubgroup) -> bool {
    let g = t.parent();
    let exp = t.basis().iter().fold(1u64, |acc, (_, o)| num_integer::lcm(acc, *o));
    (1..=exp).filter(|d| exp % d == 0).all(|d| {
        let c = t.elements().iter().filter(|x| g.pow(x, d as i64).is_identity()).count();
        let r = (c as f64).sqrt().round() as usize;
        r * r == c
    })
}

/// Subgroups `T` of square shape with `√|T|` dividing `n`, with `√|T|`.
pub fn enum_division_supports(g: &GroupSpec, n: usize) -> Result<Vec<(FiniteSubgroup, usize)>> {
    Ok(all_subgroups(g)?
        .into_iter()
        .filter(|t| is_square_shape(t))
        .filter_map(|t| square_root_order(&t).filter(|d| n % d == 0).map(|d| (t, d)))
        .collect())
}

/// All nondegenerate alternating bicharacters on `T`.
pub fn enum_bicharacters(t: &FiniteSubgroup) -> Result<Vec<Bicharacter>> {
    if t.order() > 256 {
        return Err(GradingError::InvalidParams("enum_bicharacters needs |T| <= 256".into()));
    }
    let orders: Vec<u64> = t.basis().iter().map(|(_, o)| *o).collect();
    let r = orders.len();
    let e = orders.iter().fold(1u64, |acc, o| num_integer::lcm(acc, *o));
    let slots: Vec<(usize, usize, u64)> = (0..r)
        .flat_map(|i| (i + 1..r).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, num_integer::gcd(orders[i], orders[j])))
        .collect();
    let mut out = vec![];
    let mut idx = vec![0u64; slots.len()];
    loop {
        let mut m = vec![vec![0u64; r]; r];
        for (s, &(i, j, gij)) in slots.iter().enumerate() {
            let a = idx[s] * (e / gij);
            m[i][j] = a % e;
            m[j][i] = (e - a % e) % e;
        }
        let b = Bicharacter::from_basis_exponents(t, m)?;
        if b.is_nondegenerate() {
            out.push(b);
        }
        let mut s = 0;
        while s < slots.len() && idx[s] + 1 == slots[s].2 {
            idx[s] = 0;
            s += 1;
        }
        if s == slots.len() {
            break;
        }
        idx[s] += 1;
    }
    Ok(out)
}

/// Sorted canonical representatives of `G/T`.
fn coset_reps(g: &GroupSpec, t: &FiniteSubgroup) -> Result<Vec<GroupElement>> {
    let set: BTreeSet<GroupElement> = g.elements()?.iter().map(|x| t.coset_rep(x)).collect();
    Ok(set.into_iter().collect())
}

/// Nonincreasing sequences of values from `parts` summing to `total`.
fn partitions(total: usize, parts: &[usize]) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, parts: &[usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for &p in parts.iter().filter(|&&p| p <= max && p <= rest) {
            cur.push(p);
            go(rest - p, p, parts, cur, out);
            cur.pop();
        }
    }
    let mut desc: Vec<usize> = parts.to_vec();
    desc.sort_unstable_by(|a, b| b.cmp(a));
    let mut out = vec![];
    go(total, usize::MAX, &desc, &mut vec![], &mut out);
    out
}

/// Assignments of coset indices to blocks `(class, q)`: pairs (class 3) take
/// two indices `a < b`; all indices distinct; block 0 pinned to index 0;
/// first indices increasing along runs of equal blocks.
fn assignments(specs: &[(u8, usize)], ncosets: usize) -> Vec<Vec<Vec<usize>>> {
    fn go(
        specs: &[(u8, usize)],
        ncosets: usize,
        used: &mut Vec<bool>,
        cur: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        let i = cur.len();
        if i == specs.len() {
            out.push(cur.clone());
            return;
        }
        let lo = if i > 0 && specs[i] == specs[i - 1] { cur[i - 1][0] + 1 } else { 0 };
        let hi = if i == 0 { 1.min(ncosets) } else { ncosets };
        for a in lo..hi {
            if used[a] {
                continue;
            }
            used[a] = true;
            if specs[i].0 == 3 {
                for b in a + 1..ncosets {
                    if used[b] {
                        continue;
                    }
                    used[b] = true;
                    cur.push(vec![a, b]);
                    go(specs, ncosets, used, cur, out);
                    cur.pop();
                    used[b] = false;
                }
            } else {
                cur.push(vec![a]);
                go(specs, ncosets, used, cur, out);
                cur.pop();
            }
            used[a] = false;
        }
    }
    let mut out = vec![];
    go(specs, ncosets, &mut vec![false; ncosets], &mut vec![], &mut out);
    out
}

/// Raw `(κ, γ)` candidates for `M_{size·d}` over `G/T`.
fn matrix_candidates(g: &GroupSpec, t: &FiniteSubgroup, size: usize) -> Result<Vec<(Vec<usize>, Vec<GroupElement>)>> {
    let reps = coset_reps(g, t)?;
    let all: Vec<usize> = (1..=size).collect();
    let mut out = vec![];
    for kappa in partitions(size, &all) {
        if kappa.len() > reps.len() {
            continue;
        }
        let specs: Vec<(u8, usize)> = kappa.iter().map(|&q| (0, q)).collect();
        for asg in assignments(&specs, reps.len()) {
            out.push((kappa.clone(), asg.iter().map(|v| reps[v[0]].clone()).collect()));
        }
    }
    Ok(out)
}

/// Raw structured `(κ, γ)` with `|κ| = size` over `G/T`.
fn structured_candidates(g: &GroupSpec, t: &FiniteSubgroup, size: usize) -> Result<Vec<StructuredKappaGamma>> {
    let reps = coset_reps(g, t)?;
    let mut out = vec![];
    for s1 in 0..=size {
        for s2 in (0..=size - s1).filter(|s2| s2 % 2 == 0) {
            let s3 = size - s1 - s2;
            if s3 % 2 == 1 {
                continue;
            }
            let odd: Vec<usize> = (1..=s1).filter(|q| q % 2 == 1).collect();
            let half: Vec<usize> = (1..=size / 2).collect();
            for p1 in partitions(s1, &odd) {
                for p2 in partitions(s2 / 2, &half) {
                    for p3 in partitions(s3 / 2, &half) {
                        let (ell, m) = (p1.len(), p1.len() + p2.len());
                        let k = m + p3.len();
                        if k == 0 || m + 2 * p3.len() > reps.len() {
                            continue;
                        }
                        let specs: Vec<(u8, usize)> = p1
                            .iter()
                            .map(|&q| (1, q))
                            .chain(p2.iter().map(|&q| (2, q)))
                            .chain(p3.iter().map(|&q| (3, q)))
                            .collect();
                        let q: Vec<usize> = specs.iter().map(|s| s.1).collect();
                        for asg in assignments(&specs, reps.len()) {
                            let single = asg[..m].iter().map(|v| reps[v[0]].clone()).collect();
                            let pairs = asg[m..].iter().map(|v| (reps[v[0]].clone(), reps[v[1]].clone())).collect();
                            out.push(StructuredKappaGamma::new(ell, m, k, q.clone(), single, pairs)?);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

fn insert(map: &mut BTreeMap<String, InvariantTuple>, t: InvariantTuple) -> Result<()> {
    let (c, key) = canonical(&t)?;
    map.entry(key).or_insert(c);
    Ok(())
}

/// Every `M(G, T, β, κ, γ)` with `M_n` up to isomorphism.
pub fn enum_matrix_gradings(g: &GroupSpec, n: usize) -> Result<ClassificationTable> {
    let map = matrix_map(g, n, false)?;
    Ok(ClassificationTable::from_map(g, AlgebraSpec::Matrix, n, map))
}

fn matrix_map(g: &GroupSpec, n: usize, lie: bool) -> Result<BTreeMap<String, InvariantTuple>> {
    check_bounds(g, n)?;
    let mut map = BTreeMap::new();
    for (t, d) in enum_division_supports(g, n)? {
        let cands = matrix_candidates(g, &t, n / d)?;
        for beta in enum_bicharacters(&t)? {
            for (kappa, gamma) in &cands {
                let p = MatrixGradingParams::new(g, beta.clone(), kappa.clone(), gamma.clone())?;
                let tup = if lie { InvariantTuple::Lie(LieGradingParams::AI(p)) } else { InvariantTuple::Matrix(p) };
                insert(&mut map, tup)?;
            }
        }
    }
    Ok(map)
}

/// Pairs `(H, h)` admissible for Type II: `H` elementary 2 of odd rank, `h ∈ H \ {e}`.
pub fn type_ii_contexts(g: &GroupSpec) -> Result<Vec<TypeIIContext>> {
    let mut out = vec![];
    for hsub in all_subgroups(g)? {
        if hsub.order() == 1 || !hsub.is_elementary_2() || hsub.rank_2()? % 2 == 0 {
            continue;
        }
        for h in hsub.elements().iter().filter(|x| !x.is_identity()) {
            if let Ok(ctx) = TypeIIContext::new(g, h, hsub.generators()) {
                out.push(ctx);
            }
        }
    }
    Ok(out)
}

/// The Type II data compatible with normalized `(κ, γ, τ)`.
fn type_ii_data(ctx: &TypeIIContext, beta: &Bicharacter, sg: &StructuredKappaGamma, tau: &[GroupElement]) -> Result<Vec<TypeIIData>> {
    let gb = ctx.quotient_group();
    Ok(if sg.ell > 0 {
        vec![TypeIIData::II1 { tau: tau.to_vec() }]
    } else if sg.m > 0 {
        let qf = quadratic_form(beta)?;
        let base: Vec<RootOfUnity> = (0..sg.m)
            .map(|i| Ok(RootOfUnity::from_sign(qf.value(&tau[i])?).mul(&ctx.chi2(&sg.gamma_single[i]))))
            .collect::<Result<_>>()?;
        let mut out = vec![];
        for d0 in [1i8, -1] {
            let lambda = base[0].mul(&RootOfUnity::from_sign(d0));
            let delta: Option<Vec<i8>> = base.iter().map(|b| lambda.mul(&b.inv()).as_sign()).collect();
            if let Some(delta) = delta {
                out.push(TypeIIData::II2 { tau: tau.to_vec(), delta });
            }
        }
        out
    } else {
        let (a, b) = &sg.gamma_pairs[0];
        let r = ctx.chi2(&gb.mul(a, b));
        let n = 2 * r.n();
        let root = |k: u32| {
            let (n, k) = RootOfUnity::new(n, k as i64).reduced();
            TypeIIData::II3 { mu: RootOfUnity::new(n, k as i64) }
        };
        vec![root(r.k()), root(r.k() + r.n())]
    })
}

/// Gradings of `sl_n`, `so_n` or `sp_n` up to isomorphism.
pub fn enum_lie_gradings(g: &GroupSpec, ty: LieType, n: usize) -> Result<ClassificationTable> {
    check_bounds(g, n)?;
    let algebra = match ty {
        LieType::A => AlgebraSpec::Sl,
        LieType::B | LieType::D => AlgebraSpec::So,
        LieType::C => AlgebraSpec::Sp,
    };
    let bad = |m: &str| Err(GradingError::InvalidParams(m.to_string()));
    match ty {
        LieType::A if n < 2 => return bad("sl_n needs n >= 2"),
        LieType::B if n % 2 == 0 || n < 3 => return bad("type B needs odd n >= 3"),
        LieType::C if n % 2 == 1 => return bad("type C needs even n"),
        LieType::D if n == 8 => return Err(GradingError::Refused("so_8 is outside the classified range".into())),
        LieType::D if n % 2 == 1 || n < 6 => return bad("type D needs even n >= 6 other than 8"),
        _ => {}
    }
    let mut map = BTreeMap::new();
    match ty {
        LieType::A => {
            map = matrix_map(g, n, true)?;
            if n > 2 {
                for ctx in type_ii_contexts(g)? {
                    let gb = ctx.quotient_group().clone();
                    let d = square_root_order(ctx.tbar()).expect("H/<h> has square order");
                    if n % d != 0 {
                        continue;
                    }
                    let cands = structured_candidates(&gb, ctx.tbar(), n / d)?;
                    for beta in enum_bicharacters(ctx.tbar())? {
                        for sg in &cands {
                            for c in admissible_common_values(&ctx, &beta, sg)? {
                                let (sg2, tau) = normalize_with_value(&gb, ctx.tbar(), sg, &c)?;
                                for data in type_ii_data(&ctx, &beta, &sg2, &tau)? {
                                    if let Ok(p) = TypeIIParams::new(ctx.clone(), beta.clone(), sg2.clone(), data) {
                                        insert(&mut map, InvariantTuple::Lie(LieGradingParams::AII(p)))?;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        LieType::B | LieType::C | LieType::D => {
            let delta = if ty == LieType::C { -1 } else { 1 };
            for p in involution_tuples(g, n, delta)? {
                if ty == LieType::B && p.subgroup().order() != 1 {
                    continue;
                }
                let l = match ty {
                    LieType::B => LieGradingParams::B(p),
                    LieType::C => LieGradingParams::C(p),
                    _ => LieGradingParams::D(p),
                };
                if l.validate().is_ok() {
                    insert(&mut map, InvariantTuple::Lie(l))?;
                }
            }
        }
    }
    Ok(ClassificationTable::from_map(g, algebra, n, map))
}

/// Normalized `*`-admissible tuples on `M_n` with the given `δ`, before deduplication.
fn involution_tuples(g: &GroupSpec, n: usize, delta: i8) -> Result<Vec<InvolutionParams>> {
    let mut out = vec![];
    for (t, d) in enum_division_supports(g, n)? {
        if !t.is_elementary_2() {
            continue;
        }
        let cands = structured_candidates(g, &t, n / d)?;
        for beta in enum_bicharacters(&t)? {
            for sg in &cands {
                for c in star_common_values(&beta, sg)? {
                    let (sg2, tau) = normalize_with_value(g, &t, sg, &c)?;
                    if let Ok(p) = InvolutionParams::new(g, beta.clone(), sg2, tau, delta) {
                        out.push(p);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Every `M*(G, T, β, κ, γ, τ, δ)` with `M_n` up to isomorphism, both signs `δ`.
pub fn enum_graded_involutions(g: &GroupSpec, n: usize) -> Result<ClassificationTable> {
    check_bounds(g, n)?;
    let mut map = BTreeMap::new();
    for delta in [1, -1] {
        for p in involution_tuples(g, n, delta)? {
            insert(&mut map, InvariantTuple::MatrixWithInvolution(p))?;
        }
    }
    Ok(ClassificationTable::from_map(g, AlgebraSpec::MatrixInvolution, n, map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{canonical_key, iso_tuples};
    use crate::graded_matrix::{construct_matrix_grading, verify};
    use crate::lie_grading::construct_lie;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn division_supports() {
        let z2 = GroupSpec::cyclic(2);
        assert_eq!(enum_division_supports(&z2, 2).unwrap().len(), 1);
        let v4 = GroupSpec::finite(&[2, 2]);
        let s = enum_division_supports(&v4, 2).unwrap();
        assert_eq!(s.iter().map(|(t, _)| t.order()).collect::<Vec<_>>(), vec![1, 4]);
        let z6 = GroupSpec::finite(&[6, 6]);
        let mut orders: Vec<usize> = enum_division_supports(&z6, 6).unwrap().iter().map(|(t, _)| t.order()).collect();
        orders.sort();
        assert_eq!(orders, vec![1, 4, 9, 36]);
        // Z_4 x Z_2 is not of square shape
        let g = GroupSpec::finite(&[4, 2]);
        assert!(!is_square_shape(&FiniteSubgroup::whole(&g).unwrap()));
        assert!(is_square_shape(&FiniteSubgroup::whole(&GroupSpec::finite(&[4, 4])).unwrap()));
    }

    #[test]
    fn subgroup_counts() {
        // Z_2^3 has 16 subgroups, Z_4 x Z_2 has 8
        assert_eq!(all_subgroups(&GroupSpec::finite(&[2, 2, 2])).unwrap().len(), 16);
        assert_eq!(all_subgroups(&GroupSpec::finite(&[4, 2])).unwrap().len(), 8);
    }

    #[test]
    fn bicharacter_counts() {
        let count = |tors: &[u64]| {
            let g = GroupSpec::finite(tors);
            enum_bicharacters(&FiniteSubgroup::whole(&g).unwrap()).unwrap().len()
        };
        assert_eq!(count(&[]), 1);
        assert_eq!(count(&[2, 2]), 1);
        assert_eq!(count(&[2, 2, 2, 2]), 28);
        assert_eq!(count(&[3, 3]), 2);
        assert_eq!(count(&[2, 2, 2]), 0);
    }

    #[test]
    fn matrix_counts() {
        let c = |tors: &[u64], n| enum_matrix_gradings(&GroupSpec::finite(tors), n).unwrap().len();
        assert_eq!(c(&[2], 2), 2);
        assert_eq!(c(&[2, 2], 2), 5);
        assert_eq!(c(&[3], 2), 2);
    }

    #[test]
    fn sl2_counts() {
        let c = |tors: &[u64]| {
            let t = enum_lie_gradings(&GroupSpec::finite(tors), LieType::A, 2).unwrap();
            assert!(t.counts.keys().all(|f| f == "A_I"));
            t.len()
        };
        assert_eq!(c(&[2]), 2);
        assert_eq!(c(&[3]), 2);
        assert_eq!(c(&[4]), 3);
        assert_eq!(c(&[2, 2]), 5);
    }

    #[test]
    fn refusals() {
        let z2 = GroupSpec::cyclic(2);
        assert!(matches!(enum_lie_gradings(&z2, LieType::D, 8), Err(GradingError::Refused(_))));
        assert!(enum_lie_gradings(&z2, LieType::C, 3).is_err());
        assert!(enum_matrix_gradings(&GroupSpec::new(1, vec![]).unwrap(), 2).is_err());
        assert!(enum_matrix_gradings(&z2, 13).is_err());
    }

    fn check_table(t: &ClassificationTable) {
        let tuples = t.tuples().unwrap();
        for (entry, tup) in t.entries.iter().zip(&tuples) {
            assert_eq!(canonical_key(tup).unwrap(), entry.key);
            let a = match tup {
                InvariantTuple::Matrix(p) => construct_matrix_grading(p).unwrap(),
                InvariantTuple::Lie(l) => construct_lie(l).unwrap(),
                InvariantTuple::MatrixWithInvolution(_) => unreachable!(),
            };
            assert!(verify(&a).passed, "{}", entry.family);
        }
        for i in 0..tuples.len() {
            for j in i + 1..tuples.len() {
                assert!(iso_tuples(&tuples[i], &tuples[j]).unwrap().is_none());
            }
        }
    }

    #[test]
    fn tables_are_sound() {
        let z2 = GroupSpec::cyclic(2);
        let v4 = GroupSpec::finite(&[2, 2]);
        check_table(&enum_lie_gradings(&z2, LieType::B, 5).unwrap());
        check_table(&enum_lie_gradings(&v4, LieType::C, 4).unwrap());
        check_table(&enum_lie_gradings(&v4, LieType::A, 3).unwrap());
        check_table(&enum_lie_gradings(&GroupSpec::cyclic(4), LieType::A, 4).unwrap());
        check_table(&enum_lie_gradings(&z2, LieType::D, 6).unwrap());
        check_table(&enum_matrix_gradings(&GroupSpec::finite(&[2, 4]), 3).unwrap());
    }

    #[test]
    fn type_ii_present_for_n3() {
        let t = enum_lie_gradings(&GroupSpec::cyclic(2), LieType::A, 3).unwrap();
        assert!(t.counts.get("A_II1").copied().unwrap_or(0) > 0);
        let t = enum_lie_gradings(&GroupSpec::finite(&[2, 2]), LieType::A, 4).unwrap();
        assert!(t.counts.keys().any(|f| f.starts_with("A_II")));
    }

    #[test]
    fn so5_over_z2_matches_brute_force() {
        // with two cosets only shapes with at most two entries fit:
        // odd (5), odd (1) + even 2·2, odd (3) + even 2·1
        let g = GroupSpec::cyclic(2);
        let t = FiniteSubgroup::trivial(&g);
        let b = Bicharacter::trivial(&g);
        let els = g.elements().unwrap();
        let shapes: [(usize, usize, Vec<usize>); 3] = [(1, 1, vec![5]), (1, 2, vec![1, 2]), (1, 2, vec![3, 1])];
        let mut raw = vec![];
        for (ell, m, q) in shapes {
            for x in &els {
                for y in &els {
                    let single = if m == 1 { vec![x.clone()] } else { vec![x.clone(), y.clone()] };
                    let s = StructuredKappaGamma::new(ell, m, m, q.clone(), single, vec![]).unwrap();
                    assert_eq!(s.size(), 5);
                    if s.check_distinct(&g, &t).is_err() {
                        continue;
                    }
                    for c in star_common_values(&b, &s).unwrap() {
                        let (s2, tau) = normalize_with_value(&g, &t, &s, &c).unwrap();
                        if let Ok(p) = InvolutionParams::new(&g, b.clone(), s2, tau, 1) {
                            raw.push(InvariantTuple::Lie(LieGradingParams::B(p)));
                        }
                    }
                }
            }
        }
        let mut classes: Vec<InvariantTuple> = vec![];
        for r in raw {
            if !classes.iter().any(|c| iso_tuples(c, &r).unwrap().is_some()) {
                classes.push(r);
            }
        }
        let table = enum_lie_gradings(&g, LieType::B, 5).unwrap();
        assert_eq!(classes.len(), 3);
        assert_eq!(table.len(), classes.len());
        let tuples = table.tuples().unwrap();
        for c in &classes {
            assert_eq!(tuples.iter().filter(|t| iso_tuples(t, c).unwrap().is_some()).count(), 1);
        }
    }

    #[test]
    fn random_probes_hit_one_entry() {
        let g = GroupSpec::finite(&[2, 4]);
        let table = enum_matrix_gradings(&g, 4).unwrap();
        let tuples = table.tuples().unwrap();
        let els = g.elements().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut probes = 0;
        while probes < 200 {
            let s = rng.gen_range(1..=4);
            let mut kappa = vec![1; s];
            for _ in s..4 {
                let i = rng.gen_range(0..s);
                kappa[i] += 1;
            }
            let gamma: Vec<GroupElement> = (0..s).map(|_| els[rng.gen_range(0..els.len())].clone()).collect();
            let Ok(p) = MatrixGradingParams::new(&g, Bicharacter::trivial(&g), kappa, gamma) else { continue };
            let probe = InvariantTuple::Matrix(p);
            let hits = tuples.iter().filter(|t| iso_tuples(t, &probe).unwrap().is_some()).count();
            assert_eq!(hits, 1);
            probes += 1;
        }
    }

    #[test]
    fn graded_involutions() {
        // M_1 over Z_2: only γ = (e), τ = (e), δ = 1
        assert_eq!(enum_graded_involutions(&GroupSpec::cyclic(2), 1).unwrap().len(), 1);
        // M_2 over Z_2, T = {e}: odd (1, 1) with γ = (e, g); even 2·1 with δ = ±1; odd (2)? no, q odd;
        // a pair (e, g) with δ = ±1
        let t = enum_graded_involutions(&GroupSpec::cyclic(2), 2).unwrap();
        let tuples = t.tuples().unwrap();
        for (i, a) in tuples.iter().enumerate() {
            let InvariantTuple::MatrixWithInvolution(p) = a else { panic!() };
            let pair = crate::involution::build_involution(p).unwrap();
            assert!(crate::involution::verify_involution(&pair).passed);
            assert_eq!(crate::involution::involution_sign(&pair).unwrap(), p.delta());
            for b in &tuples[i + 1..] {
                assert!(iso_tuples(a, b).unwrap().is_none());
            }
        }
        assert_eq!(t.len(), 5);
    }

    #[test]
    fn deterministic_json() {
        let g = GroupSpec::finite(&[2, 2]);
        let a = serde_json::to_string(&enum_lie_gradings(&g, LieType::A, 3).unwrap()).unwrap();
        let b = serde_json::to_string(&enum_lie_gradings(&g, LieType::A, 3).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
