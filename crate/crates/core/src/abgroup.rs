//! Finitely generated abelian groups `Z^f × Z_{d_1} × … × Z_{d_k}`.
//!
//! Elements are exponent tuples with torsion coordinates reduced into
//! `[0, d_i)`. The canonical total order compares tuples lexicographically,
//! each coordinate by `(|x|, x < 0)`; torsion coordinates are non-negative,
//! so this is the plain order on them.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::cyclotomic::RootOfUnity;
use crate::error::{GradingError, Result};

/// An exponent tuple; meaningful relative to a [`GroupSpec`].
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(pub SmallVec<[i64; 4]>);

impl GroupElement {
    pub fn new(coords: &[i64]) -> Self {
        GroupElement(SmallVec::from_slice(coords))
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

fn coord_key(x: i64) -> (u64, bool) {
    (x.unsigned_abs(), x < 0)
}

impl Ord for GroupElement {
    fn cmp(&self, o: &Self) -> Ordering {
        for (a, b) in self.0.iter().zip(&o.0) {
            match coord_key(*a).cmp(&coord_key(*b)) {
                Ordering::Equal => {}
                c => return c,
            }
        }
        self.0.len().cmp(&o.0.len())
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `Z^free_rank × Z_{torsion[0]} × …`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    free_rank: usize,
    torsion: Vec<u64>,
}

impl fmt::Debug for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 { "Z".into() } else { format!("Z^{}", self.free_rank) });
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z{d}")));
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("x"))
        }
    }
}

impl GroupSpec {
    pub fn new(free_rank: usize, torsion: Vec<u64>) -> Result<Self> {
        if let Some(d) = torsion.iter().find(|&&d| d < 2) {
            return Err(GradingError::InvalidParams(format!("cyclic factor order {d} < 2")));
        }
        Ok(GroupSpec { free_rank, torsion })
    }

    /// Validates a deserialized value.
    pub fn validated(self) -> Result<Self> {
        GroupSpec::new(self.free_rank, self.torsion)
    }

    pub fn trivial() -> Self {
        GroupSpec { free_rank: 0, torsion: vec![] }
    }

    pub fn cyclic(d: u64) -> Self {
        GroupSpec::new(0, vec![d]).expect("order >= 2")
    }

    pub fn finite(torsion: &[u64]) -> Self {
        GroupSpec::new(0, torsion.to_vec()).expect("orders >= 2")
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }

    /// Number of coordinates of an element.
    pub fn rank(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// `|G|` for finite G.
    pub fn order(&self) -> Option<u64> {
        self.is_finite().then(|| self.torsion_order())
    }

    /// `|G_tors|`.
    pub fn torsion_order(&self) -> u64 {
        self.torsion.iter().product()
    }

    /// Exponent of the torsion part (1 if there is none).
    pub fn exponent(&self) -> u64 {
        self.torsion.iter().fold(1, |a, &d| a.lcm(&d))
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(SmallVec::from_elem(0, self.rank()))
    }

    /// Builds an element, reducing torsion coordinates.
    pub fn elem(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.rank() {
            return Err(GradingError::NotInGroup(format!("{coords:?}"), self.to_string()));
        }
        let mut g = GroupElement::new(coords);
        self.reduce(&mut g);
        Ok(g)
    }

    /// True if `g` has the right length and reduced torsion coordinates.
    pub fn contains(&self, g: &GroupElement) -> bool {
        g.len() == self.rank()
            && g.0[self.free_rank..].iter().zip(&self.torsion).all(|(&x, &d)| x >= 0 && (x as u64) < d)
    }

    fn check(&self, g: &GroupElement) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(GradingError::NotInGroup(format!("{g:?}"), self.to_string()))
        }
    }

    fn reduce(&self, g: &mut GroupElement) {
        for (x, &d) in g.0[self.free_rank..].iter_mut().zip(&self.torsion) {
            *x = x.rem_euclid(d as i64);
        }
    }

    /// Checked product.
    pub fn op(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    /// Checked inverse.
    pub fn elem_inv(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        Ok(self.inv(a))
    }

    /// Checked order (0 means infinite).
    pub fn elem_order(&self, a: &GroupElement) -> Result<u64> {
        self.check(a)?;
        Ok(self.order_of(a))
    }

    /// Product of members; unchecked.
    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        debug_assert_eq!(a.len(), self.rank());
        let mut out = GroupElement(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect());
        self.reduce(&mut out);
        out
    }

    pub fn inv(&self, a: &GroupElement) -> GroupElement {
        let mut out = GroupElement(a.0.iter().map(|x| -x).collect());
        self.reduce(&mut out);
        out
    }

    pub fn div(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.mul(a, &self.inv(b))
    }

    pub fn pow(&self, a: &GroupElement, k: i64) -> GroupElement {
        let mut out = GroupElement(
            a.0.iter()
                .enumerate()
                .map(|(i, &x)| if i < self.free_rank { x * k } else { x * k.rem_euclid(self.torsion[i - self.free_rank] as i64) })
                .collect(),
        );
        self.reduce(&mut out);
        out
    }

    pub fn square(&self, a: &GroupElement) -> GroupElement {
        self.mul(a, a)
    }

    /// Least `n > 0` with `a^n = e`, or 0 if `a` has infinite order.
    pub fn order_of(&self, a: &GroupElement) -> u64 {
        if a.0[..self.free_rank].iter().any(|&x| x != 0) {
            return 0;
        }
        a.0[self.free_rank..]
            .iter()
            .zip(&self.torsion)
            .fold(1, |acc, (&x, &d)| acc.lcm(&(d / (x as u64).gcd(&d))))
    }

    /// All elements of a finite group in canonical order.
    pub fn elements(&self) -> Result<Vec<GroupElement>> {
        if !self.is_finite() {
            return Err(GradingError::Refused(format!("{self} is infinite")));
        }
        let mut out = vec![self.identity()];
        for (i, &d) in self.torsion.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * d as usize);
            for g in &out {
                for x in 0..d as i64 {
                    let mut h = g.clone();
                    h.0[i] = x;
                    next.push(h);
                }
            }
            out = next;
        }
        out.sort();
        Ok(out)
    }
}

/// An explicit finite subgroup of a [`GroupSpec`].
#[derive(Clone)]
pub struct FiniteSubgroup {
    parent: GroupSpec,
    elements: Arc<[GroupElement]>,
    generators: Vec<GroupElement>,
    index: Arc<HashMap<GroupElement, usize>>,
    basis: Arc<[(GroupElement, u64)]>,
    /// Basis coordinates of each element, by element index.
    coords: Arc<[Vec<u64>]>,
}

impl PartialEq for FiniteSubgroup {
    fn eq(&self, o: &Self) -> bool {
        self.parent == o.parent && self.elements == o.elements
    }
}

impl Eq for FiniteSubgroup {}

impl fmt::Debug for FiniteSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{:?}> in {} (order {})", self.generators, self.parent, self.elements.len())
    }
}

impl FiniteSubgroup {
    /// The subgroup generated by `gens`.
    pub fn generate(parent: &GroupSpec, gens: &[GroupElement]) -> Result<Self> {
        for g in gens {
            parent.check(g)?;
            if parent.order_of(g) == 0 {
                return Err(GradingError::InfiniteOrder(format!("{g:?}")));
            }
        }
        let mut seen: HashSet<GroupElement> = HashSet::new();
        let e = parent.identity();
        seen.insert(e.clone());
        let mut frontier = vec![e];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = parent.mul(&x, g);
                if seen.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        let mut elements: Vec<GroupElement> = seen.into_iter().collect();
        elements.sort();
        Ok(Self::from_sorted(parent.clone(), elements, gens.to_vec()))
    }

    pub fn trivial(parent: &GroupSpec) -> Self {
        Self::from_sorted(parent.clone(), vec![parent.identity()], vec![])
    }

    /// The whole of a finite group.
    pub fn whole(parent: &GroupSpec) -> Result<Self> {
        let elements = parent.elements()?;
        let gens = (0..parent.rank())
            .map(|i| {
                let mut g = parent.identity();
                g.0[i] = 1;
                g
            })
            .collect();
        Ok(Self::from_sorted(parent.clone(), elements, gens))
    }

    fn from_sorted(parent: GroupSpec, elements: Vec<GroupElement>, generators: Vec<GroupElement>) -> Self {
        let index: HashMap<GroupElement, usize> = elements.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
        let basis = compute_basis(&parent, &elements);
        let mut coords = vec![vec![]; elements.len()];
        let mut cur = parent.identity();
        let mut c = vec![0u64; basis.len()];
        'outer: loop {
            coords[index[&cur]] = c.clone();
            let mut i = 0;
            loop {
                if i == c.len() {
                    break 'outer;
                }
                c[i] += 1;
                cur = parent.mul(&cur, &basis[i].0);
                if c[i] < basis[i].1 {
                    break;
                }
                c[i] = 0;
                i += 1;
            }
        }
        FiniteSubgroup {
            parent,
            elements: elements.into(),
            generators,
            index: Arc::new(index),
            basis: basis.into(),
            coords: coords.into(),
        }
    }

    pub fn parent(&self) -> &GroupSpec {
        &self.parent
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.index.contains_key(g)
    }

    /// Position of `g` in the sorted element list.
    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        self.index.get(g).copied()
    }

    /// Independent generators with their orders, each of prime-power order,
    /// whose orders multiply to `|T|`.
    pub fn basis(&self) -> &[(GroupElement, u64)] {
        &self.basis
    }

    /// Exponents of `t` on [`Self::basis`].
    pub fn coordinates(&self, t: &GroupElement) -> Option<&[u64]> {
        self.index_of(t).map(|i| self.coords[i].as_slice())
    }

    /// Exponents of the element with index `i`.
    pub fn coordinates_at(&self, i: usize) -> &[u64] {
        &self.coords[i]
    }

    pub fn is_elementary_2(&self) -> bool {
        self.elements.iter().all(|x| self.parent.order_of(x) <= 2)
    }

    /// `log₂|T|` for an elementary 2-group.
    pub fn rank_2(&self) -> Result<u32> {
        if !self.is_elementary_2() {
            return Err(GradingError::NotElementaryTwo);
        }
        Ok(self.order().trailing_zeros())
    }

    /// True if `a·b⁻¹ ∈ T`.
    pub fn coset_eq(&self, a: &GroupElement, b: &GroupElement) -> bool {
        self.contains(&self.parent.div(a, b))
    }

    /// The least element of `aT`.
    pub fn coset_rep(&self, a: &GroupElement) -> GroupElement {
        self.elements.iter().map(|t| self.parent.mul(a, t)).min().expect("T is non-empty")
    }

    /// Intersection with the kernel of a character.
    pub fn kernel_of(&self, chi: &Character) -> FiniteSubgroup {
        let els: Vec<GroupElement> = self.elements.iter().filter(|t| chi.eval(t).is_one()).cloned().collect();
        FiniteSubgroup::generate(&self.parent, &els).expect("finite elements")
    }
}

/// Greedy decomposition of each primary part: repeatedly take the least
/// element of largest order modulo what is already spanned and lift it
/// to an element of that exact order.
fn compute_basis(g: &GroupSpec, elements: &[GroupElement]) -> Vec<(GroupElement, u64)> {
    let n = elements.len() as u64;
    let mut primes = vec![];
    let mut m = n;
    let mut p = 2;
    while m > 1 {
        if m % p == 0 {
            primes.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    let mut basis = vec![];
    for p in primes {
        let part: Vec<&GroupElement> =
            elements.iter().filter(|x| is_power_of(g.order_of(x), p)).collect();
        let mut span: Vec<GroupElement> = vec![g.identity()];
        let mut span_set: HashSet<GroupElement> = span.iter().cloned().collect();
        while span.len() < part.len() {
            let quotient_order = |x: &GroupElement| {
                let mut y = x.clone();
                let mut o = 1u64;
                while !span_set.contains(&y) {
                    y = g.pow(&y, p as i64);
                    o *= p;
                }
                o
            };
            let mut best: Option<(&GroupElement, u64)> = None;
            for &x in &part {
                let o = quotient_order(x);
                if best.map_or(true, |(_, b)| o > b) {
                    best = Some((x, o));
                }
            }
            let (x, o) = best.expect("non-empty part");
            let y = span
                .iter()
                .map(|s| g.mul(x, s))
                .filter(|y| g.order_of(y) == o)
                .min()
                .expect("a lift of exact order exists in a finite p-group");
            let mut next = Vec::with_capacity(span.len() * o as usize);
            let mut pw = g.identity();
            for _ in 0..o {
                for s in &span {
                    next.push(g.mul(s, &pw));
                }
                pw = g.mul(&pw, &y);
            }
            span_set = next.iter().cloned().collect();
            span = next;
            basis.push((y, o));
        }
    }
    basis
}

fn is_power_of(mut n: u64, p: u64) -> bool {
    while n > 1 && n % p == 0 {
        n /= p;
    }
    n == 1
}

/// Free function forms of the coset helpers.
pub fn coset_eq(a: &GroupElement, b: &GroupElement, t: &FiniteSubgroup) -> bool {
    t.coset_eq(a, b)
}

pub fn canonical_coset_rep(a: &GroupElement, t: &FiniteSubgroup) -> GroupElement {
    t.coset_rep(a)
}

/// A character `G → ⟨ζ_N⟩`, trivial on free generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    domain: GroupSpec,
    n: u64,
    values: Vec<u64>,
}

impl Character {
    /// Values are exponents of ζ_N on the coordinate generators.
    pub fn new(domain: &GroupSpec, n: u64, values: Vec<u64>) -> Result<Self> {
        if values.len() != domain.rank() {
            return Err(GradingError::InvalidParams("character needs one value per generator".into()));
        }
        for (i, &v) in values.iter().enumerate() {
            let ok = if i < domain.free_rank {
                v % n == 0
            } else {
                (v as u128 * domain.torsion[i - domain.free_rank] as u128) % n as u128 == 0
            };
            if !ok {
                return Err(GradingError::InvalidParams(format!("value {v} on generator {i} is not a character")));
            }
        }
        Ok(Character { domain: domain.clone(), n, values: values.into_iter().map(|v| v % n).collect() })
    }

    pub fn domain(&self) -> &GroupSpec {
        &self.domain
    }

    pub fn target_order(&self) -> u64 {
        self.n
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn eval(&self, g: &GroupElement) -> RootOfUnity {
        let n = self.n as i128;
        let k = g.0.iter().zip(&self.values).map(|(&x, &v)| x as i128 * v as i128).sum::<i128>().rem_euclid(n);
        RootOfUnity::new(self.n as u32, k as i64)
    }

    /// The product character.
    pub fn mul(&self, o: &Character) -> Character {
        let n = self.n.lcm(&o.n);
        let values = self
            .values
            .iter()
            .zip(&o.values)
            .map(|(a, b)| (a * (n / self.n) + b * (n / o.n)) % n)
            .collect();
        Character { domain: self.domain.clone(), n, values }
    }
}

/// The canonical character with `χ(h) = −1`: trivial on free generators,
/// target order `N = lcm(torsion orders, 2)`, and lexicographically least
/// values `a_i ∈ [0, d_i)` where `χ(e_i) = ζ_N^{a_i N / d_i}`.
pub fn solve_character(g: &GroupSpec, h: &GroupElement) -> Result<Character> {
    g.check(h)?;
    if g.order_of(h) != 2 {
        return Err(GradingError::NotOrderTwo(format!("{h:?}")));
    }
    let n = g.exponent().lcm(&2);
    let f = g.free_rank;
    let k = g.torsion.len();
    // coefficient of a_i in the exponent of χ(h)
    let c: Vec<u64> = (0..k).map(|i| (h.0[f + i] as u64 * (n / g.torsion[i])) % n).collect();
    let target = n / 2;
    let solvable = |from: usize, t: u64| {
        let d = c[from..].iter().fold(n, |acc, &x| acc.gcd(&x));
        t % d == 0
    };
    let mut a = vec![0u64; k];
    let mut acc = 0u64;
    for i in 0..k {
        let choice = (0..g.torsion[i]).find(|&ai| {
            let s = (acc + ai * c[i]) % n;
            solvable(i + 1, (target + n - s) % n)
        });
        let ai = choice.expect("an order-2 element always admits such a character");
        a[i] = ai;
        acc = (acc + ai * c[i]) % n;
    }
    let mut values = vec![0u64; f];
    values.extend((0..k).map(|i| a[i] * (n / g.torsion[i])));
    Ok(Character { domain: g.clone(), n, values })
}

/// `Ḡ = G/⟨h⟩` with explicit projection and section.
#[derive(Clone, Debug)]
pub struct QuotientContext {
    source: GroupSpec,
    h: GroupElement,
    quotient: GroupSpec,
    v: Vec<Vec<i64>>,
    v_inv: Vec<Vec<i64>>,
    /// For each quotient coordinate, the column of `xV` it reads.
    cols: Vec<usize>,
    /// Modulus of each quotient coordinate (0 for free ones).
    moduli: Vec<u64>,
}

impl QuotientContext {
    pub fn source(&self) -> &GroupSpec {
        &self.source
    }

    pub fn h(&self) -> &GroupElement {
        &self.h
    }

    pub fn quotient(&self) -> &GroupSpec {
        &self.quotient
    }

    pub fn project(&self, x: &GroupElement) -> GroupElement {
        let r = self.v.len();
        let y: Vec<i64> = (0..r).map(|j| (0..r).map(|i| x.0[i] * self.v[i][j]).sum()).collect();
        let coords: Vec<i64> = self
            .cols
            .iter()
            .zip(&self.moduli)
            .map(|(&j, &m)| if m == 0 { y[j] } else { y[j].rem_euclid(m as i64) })
            .collect();
        GroupElement::new(&coords)
    }

    pub fn section(&self, y: &GroupElement) -> GroupElement {
        let r = self.v.len();
        let mut full = vec![0i64; r];
        for (&j, &c) in self.cols.iter().zip(y.0.iter()) {
            full[j] = c;
        }
        let x: Vec<i64> = (0..r).map(|j| (0..r).map(|i| full[i] * self.v_inv[i][j]).sum()).collect();
        let mut g = GroupElement::new(&x);
        self.source.reduce(&mut g);
        g
    }

    /// Both preimages of `ḡ`.
    pub fn fiber(&self, y: &GroupElement) -> [GroupElement; 2] {
        let s = self.section(y);
        let sh = self.source.mul(&s, &self.h);
        [s, sh]
    }
}

/// Builds `G/⟨h⟩` by diagonalizing the relation matrix over the integers.
pub fn quotient_by_order2(g: &GroupSpec, h: &GroupElement) -> Result<QuotientContext> {
    g.check(h)?;
    if g.order_of(h) != 2 {
        return Err(GradingError::NotOrderTwo(format!("{h:?}")));
    }
    let r = g.rank();
    let f = g.free_rank;
    let mut rel: Vec<Vec<i64>> = (0..g.torsion.len())
        .map(|i| {
            let mut row = vec![0i64; r];
            row[f + i] = g.torsion[i] as i64;
            row
        })
        .collect();
    rel.push(h.0.to_vec());
    let (diag, v, v_inv) = diagonalize(rel, r);
    let mut free_cols = vec![];
    let mut tors_cols = vec![];
    for j in 0..r {
        let d = diag.get(j).copied().unwrap_or(0).unsigned_abs();
        match d {
            0 => free_cols.push(j),
            1 => {}
            _ => tors_cols.push((j, d)),
        }
    }
    let mut cols = free_cols.clone();
    let mut moduli = vec![0u64; free_cols.len()];
    cols.extend(tors_cols.iter().map(|&(j, _)| j));
    moduli.extend(tors_cols.iter().map(|&(_, d)| d));
    let quotient = GroupSpec::new(free_cols.len(), tors_cols.iter().map(|&(_, d)| d).collect())?;
    Ok(QuotientContext { source: g.clone(), h: h.clone(), quotient, v, v_inv, cols, moduli })
}

/// Diagonalizes `rel` (rows × r) by unimodular row and column operations,
/// returning the diagonal, the column transform `V` and its inverse.
fn diagonalize(mut a: Vec<Vec<i64>>, r: usize) -> (Vec<i64>, Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let rows = a.len();
    let ident = |n: usize| (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect::<Vec<_>>()).collect::<Vec<_>>();
    let mut v = ident(r);
    let mut v_inv = ident(r);
    let mut diag = vec![];
    // column op: col_j += c * col_i  ⇒ V col_j += c V col_i; V⁻¹ row_i -= c V⁻¹ row_j
    let col_add = |a: &mut Vec<Vec<i64>>, v: &mut Vec<Vec<i64>>, vi: &mut Vec<Vec<i64>>, j: usize, i: usize, c: i64| {
        for row in a.iter_mut() {
            row[j] += c * row[i];
        }
        for row in v.iter_mut() {
            row[j] += c * row[i];
        }
        for k in 0..r {
            vi[i][k] -= c * vi[j][k];
        }
    };
    let col_swap = |a: &mut Vec<Vec<i64>>, v: &mut Vec<Vec<i64>>, vi: &mut Vec<Vec<i64>>, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
        vi.swap(i, j);
    };
    for t in 0..rows.min(r) {
        loop {
            // smallest nonzero entry in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..r {
                    if a[i][j] != 0 && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return (diag, v, v_inv);
            };
            a.swap(t, bi);
            if bj != t {
                col_swap(&mut a, &mut v, &mut v_inv, t, bj);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = a[i][t].div_euclid(p);
                if q != 0 {
                    let src = a[t].clone();
                    for (x, y) in a[i].iter_mut().zip(&src) {
                        *x -= q * y;
                    }
                }
                if a[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..r {
                let q = a[t][j].div_euclid(p);
                if q != 0 {
                    col_add(&mut a, &mut v, &mut v_inv, j, t, -q);
                }
                if a[t][j] != 0 {
                    clean = false;
                }
            }
            if clean {
                diag.push(p);
                break;
            }
        }
    }
    (diag, v, v_inv)
}

/// χ²(ḡ) via the section; well defined because χ²(h) = 1.
pub fn chi_squared_on_quotient(chi: &Character, q: &QuotientContext, gbar: &GroupElement) -> RootOfUnity {
    chi.eval(&q.section(gbar)).pow(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e(c: &[i64]) -> GroupElement {
        GroupElement::new(c)
    }

    #[test]
    fn element_operations() {
        let z4 = GroupSpec::cyclic(4);
        assert_eq!(z4.op(&e(&[2]), &e(&[2])).unwrap(), e(&[0]));
        assert_eq!(z4.elem_order(&e(&[2])).unwrap(), 2);
        let g = GroupSpec::new(1, vec![2]).unwrap();
        assert_eq!(g.elem_order(&e(&[1, 0])).unwrap(), 0);
        assert!(z4.op(&e(&[1]), &e(&[1, 0])).is_err());
        assert!(z4.op(&e(&[5]), &e(&[1])).is_err());
    }

    #[test]
    fn subgroup_generation() {
        let k4 = GroupSpec::finite(&[2, 2]);
        assert_eq!(FiniteSubgroup::generate(&k4, &[e(&[1, 0]), e(&[0, 1])]).unwrap().order(), 4);
        let z4 = GroupSpec::cyclic(4);
        let t = FiniteSubgroup::generate(&z4, &[e(&[2])]).unwrap();
        assert_eq!(t.elements(), &[e(&[0]), e(&[2])]);
        let z2c = GroupSpec::finite(&[2, 2, 2]);
        let t = FiniteSubgroup::generate(&z2c, &[e(&[1, 1, 0]), e(&[0, 1, 1])]).unwrap();
        assert_eq!(t.order(), 4);
        assert!(t.contains(&e(&[1, 0, 1])));
        let inf = GroupSpec::new(1, vec![]).unwrap();
        assert!(matches!(FiniteSubgroup::generate(&inf, &[e(&[1])]), Err(GradingError::InfiniteOrder(_))));
    }

    #[test]
    fn cosets() {
        let z4 = GroupSpec::cyclic(4);
        let t = FiniteSubgroup::generate(&z4, &[e(&[2])]).unwrap();
        assert!(coset_eq(&e(&[1]), &e(&[3]), &t));
        assert!(!coset_eq(&e(&[1]), &e(&[2]), &t));
        assert_eq!(canonical_coset_rep(&e(&[3]), &t), e(&[1]));
    }

    #[test]
    fn quotient_examples() {
        let z2 = GroupSpec::cyclic(2);
        let q = quotient_by_order2(&z2, &e(&[1])).unwrap();
        assert_eq!(q.quotient().order(), Some(1));
        let z4 = GroupSpec::cyclic(4);
        let q = quotient_by_order2(&z4, &e(&[2])).unwrap();
        assert_eq!(q.quotient(), &GroupSpec::cyclic(2));
        assert_eq!(q.project(&e(&[1])), e(&[1]));
        let k4 = GroupSpec::finite(&[2, 2]);
        let q = quotient_by_order2(&k4, &e(&[1, 1])).unwrap();
        assert_eq!(q.quotient().order(), Some(2));
        assert!(matches!(quotient_by_order2(&z4, &e(&[1])), Err(GradingError::NotOrderTwo(_))));
    }

    #[test]
    fn quotient_with_free_part() {
        let g = GroupSpec::new(1, vec![2, 4]).unwrap();
        let h = e(&[0, 1, 2]);
        let q = quotient_by_order2(&g, &h).unwrap();
        assert_eq!(q.quotient().free_rank(), 1);
        assert_eq!(q.quotient().torsion_order(), 4);
        for x in [e(&[3, 1, 1]), e(&[-2, 0, 3]), e(&[0, 1, 2])] {
            let y = q.project(&x);
            let back = q.project(&q.section(&y));
            assert_eq!(back, y);
            let s = q.section(&y);
            let d = g.div(&x, &s);
            assert!(d.is_identity() || d == h, "{x:?} vs {s:?}");
        }
    }

    fn all_order2(g: &GroupSpec) -> Vec<GroupElement> {
        g.elements().unwrap().into_iter().filter(|x| g.order_of(x) == 2).collect()
    }

    #[test]
    fn quotient_fibers_exhaustive() {
        for tors in [vec![2u64], vec![4], vec![2, 2], vec![2, 4], vec![4, 4], vec![2, 2, 2], vec![6, 2], vec![8, 2, 2]] {
            let g = GroupSpec::finite(&tors);
            for h in all_order2(&g) {
                let q = quotient_by_order2(&g, &h).unwrap();
                let qb = q.quotient();
                assert_eq!(qb.torsion_order() * 2, g.torsion_order());
                let mut fibers: HashMap<GroupElement, usize> = HashMap::new();
                for x in g.elements().unwrap() {
                    *fibers.entry(q.project(&x)).or_default() += 1;
                    // homomorphism
                    let y = g.mul(&x, &x);
                    assert_eq!(q.project(&y), qb.mul(&q.project(&x), &q.project(&x)));
                }
                assert!(fibers.values().all(|&c| c == 2));
                assert_eq!(fibers.len() as u64, qb.torsion_order());
                for y in qb.elements().unwrap() {
                    assert_eq!(q.project(&q.section(&y)), y);
                }
                assert!(q.project(&h).is_identity());
            }
        }
    }

    #[test]
    fn character_examples() {
        let z2 = GroupSpec::cyclic(2);
        let chi = solve_character(&z2, &e(&[1])).unwrap();
        assert_eq!(chi.eval(&e(&[1])), RootOfUnity::minus_one());
        let z4 = GroupSpec::cyclic(4);
        let chi = solve_character(&z4, &e(&[2])).unwrap();
        assert_eq!(chi.eval(&e(&[1])), RootOfUnity::new(4, 1));
        let k4 = GroupSpec::finite(&[2, 2]);
        let chi = solve_character(&k4, &e(&[1, 0])).unwrap();
        assert_eq!(chi.eval(&e(&[1, 0])), RootOfUnity::minus_one());
        assert!(chi.eval(&e(&[0, 1])).is_one());
        assert_eq!(solve_character(&k4, &e(&[1, 0])).unwrap(), chi);
    }

    #[test]
    fn characters_send_h_to_minus_one() {
        for tors in [vec![2u64, 4], vec![4, 4], vec![6, 2], vec![8, 2, 2], vec![2, 2, 2]] {
            let g = GroupSpec::new(1, tors).unwrap();
            let fin = GroupSpec::finite(g.torsion());
            for h in all_order2(&fin) {
                let mut hc = vec![0i64];
                hc.extend_from_slice(h.coords());
                let h = e(&hc);
                let chi = solve_character(&g, &h).unwrap();
                assert_eq!(chi.eval(&h), RootOfUnity::minus_one());
                assert_eq!(chi.values()[0], 0);
                let q = quotient_by_order2(&g, &h).unwrap();
                let y = q.project(&e(&{
                    let mut c = vec![3i64];
                    c.extend(std::iter::repeat(1).take(g.torsion().len()));
                    c
                }));
                let s = q.section(&y);
                assert_eq!(chi.eval(&s).pow(2), chi.eval(&g.mul(&s, &h)).pow(2));
            }
        }
    }

    #[test]
    fn chi_squared_examples() {
        let z4 = GroupSpec::cyclic(4);
        let q = quotient_by_order2(&z4, &e(&[2])).unwrap();
        let chi = solve_character(&z4, &e(&[2])).unwrap();
        assert!(chi_squared_on_quotient(&chi, &q, &e(&[0])).is_one());
        assert_eq!(chi_squared_on_quotient(&chi, &q, &e(&[1])), RootOfUnity::minus_one());
    }

    #[test]
    fn elementary_two() {
        let k4 = GroupSpec::finite(&[2, 2]);
        let t = FiniteSubgroup::trivial(&k4);
        assert!(t.is_elementary_2());
        assert_eq!(t.rank_2().unwrap(), 0);
        let w = FiniteSubgroup::whole(&k4).unwrap();
        assert_eq!(w.rank_2().unwrap(), 2);
        let z4 = FiniteSubgroup::whole(&GroupSpec::cyclic(4)).unwrap();
        assert!(!z4.is_elementary_2());
        assert_eq!(z4.rank_2(), Err(GradingError::NotElementaryTwo));
    }

    #[test]
    fn basis_orders_multiply_to_order() {
        for tors in [vec![2u64, 2], vec![4, 2], vec![6, 6], vec![4, 4], vec![8, 2], vec![3, 9], vec![2, 2, 2, 2]] {
            let g = GroupSpec::finite(&tors);
            let t = FiniteSubgroup::whole(&g).unwrap();
            let prod: u64 = t.basis().iter().map(|(_, o)| o).product();
            assert_eq!(prod, t.order() as u64);
            for x in t.elements() {
                let c = t.coordinates(x).unwrap().to_vec();
                let mut y = g.identity();
                for ((b, _), k) in t.basis().iter().zip(&c) {
                    y = g.mul(&y, &g.pow(b, *k as i64));
                }
                assert_eq!(&y, x);
            }
        }
    }

    #[test]
    fn subgroup_closure_and_order_divides() {
        let g = GroupSpec::finite(&[4, 2, 2]);
        let els = g.elements().unwrap();
        for a in &els {
            for b in els.iter().step_by(3) {
                let t = FiniteSubgroup::generate(&g, &[a.clone(), b.clone()]).unwrap();
                assert_eq!(g.torsion_order() % t.order() as u64, 0);
                for x in t.elements() {
                    for y in t.elements() {
                        assert!(t.contains(&g.mul(x, y)));
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn canonical_order_is_total(a in proptest::collection::vec(-3i64..4, 3),
                                    b in proptest::collection::vec(-3i64..4, 3),
                                    c in proptest::collection::vec(-3i64..4, 3)) {
            let (a, b, c) = (e(&a), e(&b), e(&c));
            let n = [a < b, a == b, a > b].iter().filter(|&&x| x).count();
            prop_assert_eq!(n, 1);
            if a <= b && b <= c {
                prop_assert!(a <= c);
            }
        }
    }
}
