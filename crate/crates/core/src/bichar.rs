//! Alternating bicharacters on finite subgroups, symplectic bases and the
//! quadratic form attached to a basis of an elementary 2-group.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::abgroup::{FiniteSubgroup, GroupElement, GroupSpec};
use crate::cyclotomic::RootOfUnity;
use crate::error::{GradingError, Result};

const EXHAUSTIVE_CHECK_LIMIT: usize = 256;

/// An alternating bicharacter on a finite subgroup `T`.
///
/// Internally the values are kept on the independent basis of `T` with
/// exponents of `ζ_e`, `e` the exponent of `T`.
#[derive(Clone)]
pub struct Bicharacter {
    t: FiniteSubgroup,
    e: u64,
    /// `β(b_k, b_l) = ζ_e^{m[k][l]}` on the basis of `T`.
    m: Vec<Vec<u64>>,
}

/// Wire form: values on an arbitrary generating list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BicharWire {
    pub generators: Vec<GroupElement>,
    #[serde(rename = "N")]
    pub n: u64,
    pub exponents: Vec<Vec<i64>>,
}

impl Bicharacter {
    /// `β(g_i, g_j) = ζ_N^{E_ij}` on the given generators of `T`.
    pub fn new(parent: &GroupSpec, gens: &[GroupElement], n: u64, exps: &[Vec<i64>]) -> Result<Self> {
        let bad = |m: &str| Err(GradingError::InvalidBicharacter(m.to_string()));
        if n == 0 {
            return bad("N must be positive");
        }
        if exps.len() != gens.len() || exps.iter().any(|r| r.len() != gens.len()) {
            return bad("exponent matrix must be square with one row per generator");
        }
        let t = FiniteSubgroup::generate(parent, gens)?;
        let e = exponent_of(&t);
        let m = gens.len();
        let ex: Vec<Vec<u64>> = exps.iter().map(|r| r.iter().map(|&x| x.rem_euclid(n as i64) as u64).collect()).collect();
        for i in 0..m {
            if ex[i][i] != 0 {
                return bad("diagonal exponents must vanish");
            }
            for j in 0..m {
                if (ex[i][j] + ex[j][i]) % n != 0 {
                    return bad("exponent matrix must be antisymmetric");
                }
            }
        }
        // Words for every element along a spanning tree of the Cayley graph.
        let mut words: HashMap<GroupElement, Vec<i64>> = HashMap::new();
        words.insert(parent.identity(), vec![0; m]);
        let mut queue = VecDeque::from([parent.identity()]);
        let mut relations: Vec<Vec<i64>> = vec![];
        while let Some(x) = queue.pop_front() {
            let wx = words[&x].clone();
            for (i, g) in gens.iter().enumerate() {
                let y = parent.mul(&x, g);
                let mut w = wx.clone();
                w[i] += 1;
                match words.get(&y) {
                    Some(wy) => relations.push(w.iter().zip(wy).map(|(a, b)| a - b).collect()),
                    None => {
                        words.insert(y.clone(), w);
                        queue.push_back(y);
                    }
                }
            }
        }
        // Every relation among the generators must be killed by E.
        for r in &relations {
            for j in 0..m {
                let s: i128 = (0..m).map(|i| r[i] as i128 * ex[i][j] as i128).sum();
                if s.rem_euclid(n as i128) != 0 {
                    return bad("values are incompatible with the relations of T");
                }
            }
        }
        // Values must be e-th roots of unity.
        let scale = |k: u64| -> Option<u64> { (k * e % n == 0).then(|| k * e / n) };
        let eval_words = |u: &[i64], v: &[i64]| -> i128 {
            let mut s = 0i128;
            for i in 0..m {
                if u[i] == 0 {
                    continue;
                }
                for j in 0..m {
                    s += u[i] as i128 * v[j] as i128 * ex[i][j] as i128;
                }
            }
            s.rem_euclid(n as i128)
        };
        let basis: Vec<&GroupElement> = t.basis().iter().map(|(b, _)| b).collect();
        let mut mm = vec![vec![0u64; basis.len()]; basis.len()];
        for (k, bk) in basis.iter().enumerate() {
            for (l, bl) in basis.iter().enumerate() {
                let v = eval_words(&words[*bk], &words[*bl]) as u64;
                mm[k][l] = match scale(v) {
                    Some(x) => x,
                    None => return bad("values are incompatible with the relations of T"),
                };
            }
        }
        let b = Bicharacter { t, e, m: mm };
        if b.t.order() <= EXHAUSTIVE_CHECK_LIMIT {
            b.check_exhaustive()?;
        }
        Ok(b)
    }

    pub fn from_wire(parent: &GroupSpec, w: &BicharWire) -> Result<Self> {
        for g in &w.generators {
            if !parent.contains(g) {
                return Err(GradingError::NotInGroup(format!("{g:?}"), parent.to_string()));
            }
        }
        Bicharacter::new(parent, &w.generators, w.n, &w.exponents)
    }

    /// Values on the basis of `T`, as exponents of `ζ_e` (`e = exp T`).
    pub fn from_basis_exponents(t: &FiniteSubgroup, m: Vec<Vec<u64>>) -> Result<Self> {
        let e = exponent_of(t);
        let r = t.basis().len();
        if m.len() != r || m.iter().any(|row| row.len() != r) {
            return Err(GradingError::InvalidBicharacter("matrix shape must match the basis of T".into()));
        }
        for k in 0..r {
            for l in 0..r {
                let g = t.basis()[k].1.gcd(&t.basis()[l].1);
                if (m[k][l] % e) * g % e != 0 || (m[k][l] + m[l][k]) % e != 0 || (k == l && m[k][k] % e != 0) {
                    return Err(GradingError::InvalidBicharacter("not an alternating bicharacter on T".into()));
                }
            }
        }
        let m = m.into_iter().map(|row| row.into_iter().map(|x| x % e).collect()).collect();
        Ok(Bicharacter { t: t.clone(), e, m })
    }

    /// The unique bicharacter on the trivial subgroup.
    pub fn trivial(parent: &GroupSpec) -> Self {
        Bicharacter { t: FiniteSubgroup::trivial(parent), e: 1, m: vec![] }
    }

    pub fn to_wire(&self) -> BicharWire {
        BicharWire {
            generators: self.t.basis().iter().map(|(b, _)| b.clone()).collect(),
            n: self.e,
            exponents: self.m.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect(),
        }
    }

    pub fn subgroup(&self) -> &FiniteSubgroup {
        &self.t
    }

    pub fn parent(&self) -> &GroupSpec {
        self.t.parent()
    }

    /// All values are `e`-th roots of unity.
    pub fn value_order(&self) -> u64 {
        self.e
    }

    /// Basis exponent matrix (units of `ζ_e`).
    pub fn basis_exponents(&self) -> &[Vec<u64>] {
        &self.m
    }

    fn exp_coords(&self, cu: &[u64], cv: &[u64]) -> u64 {
        let mut s = 0u64;
        for (k, &a) in cu.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (l, &b) in cv.iter().enumerate() {
                if b != 0 {
                    s = (s + a * b % self.e * self.m[k][l]) % self.e;
                }
            }
        }
        s
    }

    /// Exponent of `ζ_e` for `β(t_i, t_j)` by element indices of `T`.
    pub fn exponent_at(&self, i: usize, j: usize) -> u64 {
        self.exp_coords(self.t.coordinates_at(i), self.t.coordinates_at(j))
    }

    pub fn eval_at(&self, i: usize, j: usize) -> RootOfUnity {
        RootOfUnity::new(self.e as u32, self.exponent_at(i, j) as i64)
    }

    /// `β(u, v)`; both arguments must lie in `T`.
    pub fn eval(&self, u: &GroupElement, v: &GroupElement) -> Result<RootOfUnity> {
        let (Some(i), Some(j)) = (self.t.index_of(u), self.t.index_of(v)) else {
            return Err(GradingError::NotInSubgroup(format!("{u:?} or {v:?}")));
        };
        Ok(self.eval_at(i, j))
    }

    fn check_exhaustive(&self) -> Result<()> {
        let n = self.t.order();
        for i in 0..n {
            if self.exponent_at(i, i) != 0 {
                return Err(GradingError::InvalidBicharacter("not alternating".into()));
            }
        }
        Ok(())
    }

    /// Elements `t` with `β(u, t) = 1` for all `u ∈ T`.
    pub fn radical(&self) -> Vec<GroupElement> {
        let n = self.t.order();
        (0..n)
            .filter(|&j| (0..self.m.len()).all(|k| {
                let mut unit = vec![0u64; self.m.len()];
                unit[k] = 1;
                self.exp_coords(&unit, self.t.coordinates_at(j)) == 0
            }))
            .map(|j| self.t.elements()[j].clone())
            .collect()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.radical().len() == 1
    }

    /// Same subgroup and same values everywhere.
    pub fn same_as(&self, o: &Bicharacter) -> bool {
        if self.t != o.t {
            return false;
        }
        let basis: Vec<&GroupElement> = self.t.basis().iter().map(|(b, _)| b).collect();
        basis.iter().all(|u| {
            basis.iter().all(|v| self.eval(u, v).expect("in T") == o.eval(u, v).expect("same T"))
        })
    }

    /// Hyperbolic pairs: at each step the least element `a` of largest order
    /// in what remains, the least partner `b` with `β(a, b)` of that order,
    /// then recursion on the β-orthogonal complement of `⟨a, b⟩`.
    pub fn symplectic_basis(&self) -> Result<SymplecticBasis> {
        if !self.is_nondegenerate() {
            return Err(GradingError::Degenerate);
        }
        let g = self.parent();
        let mut rest: Vec<usize> = (0..self.t.order()).collect();
        let mut pairs = vec![];
        let mut orders = vec![];
        while rest.len() > 1 {
            let ord = |i: usize| g.order_of(&self.t.elements()[i]);
            let l = rest.iter().map(|&i| ord(i)).max().expect("non-empty");
            let a = *rest.iter().find(|&&i| ord(i) == l).expect("max exists");
            let b = *rest
                .iter()
                .find(|&&j| self.eval_at(a, j).order() as u64 == l)
                .ok_or(GradingError::Degenerate)?;
            rest.retain(|&j| self.exponent_at(a, j) == 0 && self.exponent_at(b, j) == 0);
            pairs.push((self.t.elements()[a].clone(), self.t.elements()[b].clone()));
            orders.push(l);
        }
        let sb = SymplecticBasis { pairs, orders };
        sb.validate(self)?;
        Ok(sb)
    }
}

impl PartialEq for Bicharacter {
    fn eq(&self, o: &Self) -> bool {
        self.same_as(o)
    }
}

impl Eq for Bicharacter {}

impl fmt::Debug for Bicharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bicharacter({:?}, e={}, {:?})", self.t, self.e, self.m)
    }
}

/// `bichar_eq`: equal subgroups and equal values.
pub fn bichar_eq(a: &Bicharacter, b: &Bicharacter) -> bool {
    a.same_as(b)
}

fn exponent_of(t: &FiniteSubgroup) -> u64 {
    t.basis().iter().fold(1, |a, (_, o)| a.lcm(o))
}

/// Hyperbolic pairs `(a_i, b_i)` with `β(a_i, b_i)` of exact order `ℓ_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticBasis {
    pub pairs: Vec<(GroupElement, GroupElement)>,
    pub orders: Vec<u64>,
}

impl SymplecticBasis {
    /// `ℓ_1 ⋯ ℓ_r`.
    pub fn dim(&self) -> usize {
        self.orders.iter().product::<u64>() as usize
    }

    /// Exponents `(i_1, j_1, …, i_r, j_r)` with `t = Π a_k^{i_k} b_k^{j_k}`,
    /// for every element of `T`, keyed by element.
    pub fn coordinate_map(&self, g: &GroupSpec) -> HashMap<GroupElement, Vec<u64>> {
        let gens: Vec<(&GroupElement, u64)> =
            self.pairs.iter().zip(&self.orders).flat_map(|((a, b), &l)| [(a, l), (b, l)]).collect();
        let mut out = HashMap::new();
        let mut c = vec![0u64; gens.len()];
        let mut cur = g.identity();
        loop {
            out.insert(cur.clone(), c.clone());
            let mut i = 0;
            loop {
                if i == c.len() {
                    return out;
                }
                c[i] += 1;
                cur = g.mul(&cur, gens[i].0);
                if c[i] < gens[i].1 {
                    break;
                }
                c[i] = 0;
                i += 1;
            }
        }
    }

    fn validate(&self, beta: &Bicharacter) -> Result<()> {
        let fail = |m: &str| Err(GradingError::Inconsistent(format!("symplectic basis: {m}")));
        let sq: u64 = self.orders.iter().map(|l| l * l).product();
        if sq != beta.t.order() as u64 {
            return fail("orders do not account for |T|");
        }
        for (i, (a, b)) in self.pairs.iter().enumerate() {
            if beta.eval(a, b)?.order() as u64 != self.orders[i] {
                return fail("pair value has the wrong order");
            }
            for (j, (c, d)) in self.pairs.iter().enumerate() {
                if i == j {
                    continue;
                }
                for x in [a, b] {
                    for y in [c, d] {
                        if !beta.eval(x, y)?.is_one() {
                            return fail("pairs are not orthogonal");
                        }
                    }
                }
            }
        }
        if self.coordinate_map(beta.parent()).len() != beta.t.order() {
            return fail("pairs do not generate T");
        }
        Ok(())
    }
}

/// `t ↦ β(t) ∈ {±1}` on an elementary 2-group, indexed like `T`'s elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadForm {
    t: FiniteSubgroup,
    values: Vec<i8>,
}

impl QuadForm {
    pub fn value(&self, t: &GroupElement) -> Result<i8> {
        self.t
            .index_of(t)
            .map(|i| self.values[i])
            .ok_or_else(|| GradingError::NotInSubgroup(format!("{t:?}")))
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    pub fn subgroup(&self) -> &FiniteSubgroup {
        &self.t
    }
}

/// `β(t) = σ(t, t)` for the cocycle of ordered products
/// `X_t = X_{a_1}^{i_1} X_{b_1}^{j_1} ⋯`, i.e. `Π β(b_k, a_k)^{i_k j_k}`.
pub fn quadratic_form_from_basis(beta: &Bicharacter, basis: &SymplecticBasis) -> Result<QuadForm> {
    if !beta.subgroup().is_elementary_2() || basis.orders.iter().any(|&l| l != 2) {
        return Err(GradingError::NotElementaryTwo);
    }
    let coords = basis.coordinate_map(beta.parent());
    let t = beta.subgroup().clone();
    let values = t
        .elements()
        .iter()
        .map(|x| {
            let c = &coords[x];
            let s: u64 = (0..basis.pairs.len()).map(|k| c[2 * k] * c[2 * k + 1]).sum();
            if s % 2 == 0 {
                1
            } else {
                -1
            }
        })
        .collect();
    Ok(QuadForm { t, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(c: &[i64]) -> GroupElement {
        GroupElement::new(c)
    }

    fn units(r: usize) -> Vec<GroupElement> {
        (0..r)
            .map(|i| {
                let mut c = vec![0; r];
                c[i] = 1;
                e(&c)
            })
            .collect()
    }

    fn pauli(d: u64) -> Bicharacter {
        let g = GroupSpec::finite(&[d, d]);
        Bicharacter::new(&g, &units(2), d, &[vec![0, 1], vec![-1, 0]]).unwrap()
    }

    #[test]
    fn evaluation_examples() {
        let b = pauli(2);
        assert_eq!(b.eval(&e(&[1, 0]), &e(&[0, 1])).unwrap(), RootOfUnity::minus_one());
        for u in b.subgroup().elements() {
            assert!(b.eval(u, u).unwrap().is_one());
            for v in b.subgroup().elements() {
                assert!(b.eval(u, v).unwrap().mul(&b.eval(v, u).unwrap()).is_one());
            }
        }
        let z4 = GroupSpec::cyclic(4);
        let t = Bicharacter::trivial(&z4);
        assert!(t.eval(&e(&[1]), &e(&[0])).is_err());
    }

    #[test]
    fn rejects_non_bicharacters() {
        let g = GroupSpec::finite(&[2, 2]);
        // value of order 4 on elements of order 2
        assert!(Bicharacter::new(&g, &units(2), 4, &[vec![0, 1], vec![-1, 0]]).is_err());
        // not alternating
        assert!(Bicharacter::new(&g, &units(2), 2, &[vec![1, 0], vec![0, 0]]).is_err());
        // redundant generator with inconsistent values
        let gens = vec![e(&[1, 0]), e(&[0, 1]), e(&[1, 1])];
        let bad = vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 0]];
        assert!(Bicharacter::new(&g, &gens, 2, &bad).is_err());
        let good = vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]];
        assert!(Bicharacter::new(&g, &gens, 2, &good).is_ok());
    }

    #[test]
    fn nondegeneracy_examples() {
        let z2 = GroupSpec::finite(&[2, 2]);
        assert!(Bicharacter::trivial(&z2).is_nondegenerate());
        let zero = Bicharacter::new(&z2, &units(2), 2, &[vec![0, 0], vec![0, 0]]).unwrap();
        assert!(!zero.is_nondegenerate());
        assert!(pauli(2).is_nondegenerate());
    }

    /// Independent count: an alternating form on F_2^4 is nondegenerate iff
    /// its Gram matrix is invertible mod 2, i.e. its Pfaffian is odd.
    #[test]
    fn twenty_eight_on_z2_4() {
        let g = GroupSpec::finite(&[2, 2, 2, 2]);
        let idx = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let mut count = 0;
        let mut pf_count = 0;
        for mask in 0..64u32 {
            let mut m = vec![vec![0i64; 4]; 4];
            for (bit, &(i, j)) in idx.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    m[i][j] = 1;
                    m[j][i] = 1;
                }
            }
            let b = Bicharacter::new(&g, &units(4), 2, &m).unwrap();
            if b.is_nondegenerate() {
                count += 1;
            }
            let pf = m[0][1] * m[2][3] + m[0][2] * m[1][3] + m[0][3] * m[1][2];
            if pf % 2 == 1 {
                pf_count += 1;
            }
        }
        assert_eq!(count, 28);
        assert_eq!(pf_count, 28);
    }

    #[test]
    fn symplectic_examples() {
        let sb = pauli(2).symplectic_basis().unwrap();
        assert_eq!(sb.orders, vec![2]);
        let sb = pauli(3).symplectic_basis().unwrap();
        assert_eq!(sb.orders, vec![3]);
        let g = GroupSpec::finite(&[2, 2, 2, 2]);
        let m = vec![vec![0, 1, 0, 0], vec![1, 0, 0, 0], vec![0, 0, 0, 1], vec![0, 0, 1, 0]];
        let b = Bicharacter::new(&g, &units(4), 2, &m).unwrap();
        let sb = b.symplectic_basis().unwrap();
        assert_eq!(sb.orders, vec![2, 2]);
        let zero = Bicharacter::new(&GroupSpec::finite(&[2, 2]), &units(2), 2, &[vec![0, 0], vec![0, 0]]).unwrap();
        assert_eq!(zero.symplectic_basis(), Err(GradingError::Degenerate));
    }

    fn reconstruct(b: &Bicharacter, sb: &SymplecticBasis) -> bool {
        let g = b.parent();
        let coords = sb.coordinate_map(g);
        let vals: Vec<RootOfUnity> =
            sb.pairs.iter().map(|(a, bb)| b.eval(a, bb).unwrap()).collect();
        b.subgroup().elements().iter().all(|u| {
            b.subgroup().elements().iter().all(|v| {
                let (cu, cv) = (&coords[u], &coords[v]);
                let mut acc = RootOfUnity::one();
                for k in 0..sb.pairs.len() {
                    let ex = cu[2 * k] as i64 * cv[2 * k + 1] as i64 - cu[2 * k + 1] as i64 * cv[2 * k] as i64;
                    acc = acc.mul(&vals[k].pow(ex));
                }
                acc == b.eval(u, v).unwrap()
            })
        })
    }

    #[test]
    fn symplectic_round_trip_all_nondegenerate() {
        for tors in [vec![2u64, 2], vec![3, 3], vec![4, 4], vec![2, 2, 2, 2], vec![6, 6], vec![2, 4, 2, 4]] {
            let g = GroupSpec::finite(&tors);
            let r = tors.len();
            let n = *tors.iter().max().unwrap();
            // every form built from upper-triangular exponents
            let mut found = 0;
            let pairs = (r * (r - 1) / 2) as u32;
            for seed in 0..n.pow(pairs) {
                let mut m = vec![vec![0i64; r]; r];
                let mut s = seed;
                for i in 0..r {
                    for j in i + 1..r {
                        let x = (s % n) as i64;
                        s /= n;
                        m[i][j] = x;
                        m[j][i] = -x;
                    }
                }
                let Ok(b) = Bicharacter::new(&g, &units(r), n, &m) else { continue };
                if !b.is_nondegenerate() {
                    continue;
                }
                found += 1;
                let sb = b.symplectic_basis().unwrap();
                assert_eq!(sb.orders.iter().map(|l| l * l).product::<u64>(), b.subgroup().order() as u64);
                assert!(reconstruct(&b, &sb));
            }
            assert!(found > 0, "{tors:?}");
        }
    }

    #[test]
    fn quadratic_form_examples() {
        let b = pauli(2);
        let sb = b.symplectic_basis().unwrap();
        let q = quadratic_form_from_basis(&b, &sb).unwrap();
        let (a, bb) = sb.pairs[0].clone();
        let g = b.parent();
        assert_eq!(q.value(&g.identity()).unwrap(), 1);
        assert_eq!(q.value(&a).unwrap(), 1);
        assert_eq!(q.value(&bb).unwrap(), 1);
        assert_eq!(q.value(&g.mul(&a, &bb)).unwrap(), -1);

        let g4 = GroupSpec::finite(&[2, 2, 2, 2]);
        let m = vec![vec![0, 1, 0, 0], vec![1, 0, 0, 0], vec![0, 0, 0, 1], vec![0, 0, 1, 0]];
        let b4 = Bicharacter::new(&g4, &units(4), 2, &m).unwrap();
        let q4 = quadratic_form_from_basis(&b4, &b4.symplectic_basis().unwrap()).unwrap();
        assert_eq!(q4.values().iter().filter(|&&v| v == -1).count(), 6);
        assert!(quadratic_form_from_basis(&pauli(3), &pauli(3).symplectic_basis().unwrap()).is_err());
    }

    #[test]
    fn polarization_identity() {
        let g4 = GroupSpec::finite(&[2, 2, 2, 2]);
        let mut checked = 0;
        for mask in 0..64u32 {
            let idx = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
            let mut m = vec![vec![0i64; 4]; 4];
            for (bit, &(i, j)) in idx.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    m[i][j] = 1;
                    m[j][i] = 1;
                }
            }
            let b = Bicharacter::new(&g4, &units(4), 2, &m).unwrap();
            if !b.is_nondegenerate() {
                continue;
            }
            let q = quadratic_form_from_basis(&b, &b.symplectic_basis().unwrap()).unwrap();
            for u in b.subgroup().elements() {
                for v in b.subgroup().elements() {
                    let lhs = b.eval(u, v).unwrap().as_sign().unwrap();
                    let rhs = q.value(&g4.mul(u, v)).unwrap() * q.value(u).unwrap() * q.value(v).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
            checked += 1;
        }
        assert_eq!(checked, 28);
    }

    #[test]
    fn equality_examples() {
        let b = pauli(3);
        assert!(bichar_eq(&b, &b));
        let g = GroupSpec::finite(&[3, 3]);
        let b2 = Bicharacter::new(&g, &units(2), 3, &[vec![0, 2], vec![1, 0]]).unwrap();
        assert!(!bichar_eq(&b, &b2));
        // the same form on Z2² presented on {a, ab}
        let k4 = GroupSpec::finite(&[2, 2]);
        let alt = Bicharacter::new(&k4, &[e(&[1, 0]), e(&[1, 1])], 2, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(bichar_eq(&pauli(2), &alt));
        for u in alt.subgroup().elements() {
            for v in alt.subgroup().elements() {
                assert_eq!(alt.eval(u, v).unwrap(), pauli(2).eval(u, v).unwrap());
            }
        }
        assert_eq!(pauli(2).is_nondegenerate(), alt.is_nondegenerate());
    }

    #[test]
    fn wire_round_trip() {
        let b = pauli(4);
        let w = b.to_wire();
        let json = serde_json::to_string(&w).unwrap();
        let back: BicharWire = serde_json::from_str(&json).unwrap();
        let b2 = Bicharacter::from_wire(b.parent(), &back).unwrap();
        assert!(bichar_eq(&b, &b2));
    }
}
