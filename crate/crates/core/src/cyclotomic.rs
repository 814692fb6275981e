//! Exact arithmetic in cyclotomic fields Q(ζ_N).
//!
//! An element of Q(ζ_N) is stored by its coordinates in the power basis
//! `1, ζ, …, ζ^{φ(N)−1}` modulo the N-th cyclotomic polynomial, so stored
//! coordinates determine the value uniquely. Operands with different
//! conductors are lifted to the lcm through `ζ_M ↦ ζ_N^{N/M}`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

use crate::error::{GradingError, Result};
use crate::linalg::Field;
use crate::rational::Rational;

type Coeffs = SmallVec<[Rational; 4]>;

/// Per-conductor reduction data.
#[derive(Debug)]
pub struct FieldTables {
    n: u32,
    phi: usize,
    /// Coefficients of Φ_N, lowest degree first.
    poly: Vec<i64>,
    /// `x^k mod Φ_N` for `0 ≤ k < max(N, 2φ−1)`.
    powers: Vec<Vec<i64>>,
}

impl FieldTables {
    fn build(n: u32) -> Self {
        let poly = cyclotomic_polynomial(n);
        let phi = poly.len() - 1;
        let top = (n as usize).max(2 * phi);
        let mut powers = Vec::with_capacity(top);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..top {
            powers.push(cur.clone());
            // multiply by x and reduce: x^phi = -(poly[0] + … + poly[phi-1] x^{phi-1})
            let carry = cur[phi - 1];
            for j in (1..phi).rev() {
                cur[j] = cur[j - 1];
            }
            cur[0] = 0;
            if carry != 0 {
                for j in 0..phi {
                    cur[j] -= carry * poly[j];
                }
            }
        }
        FieldTables { n, phi, poly, powers }
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.phi
    }

    pub fn minimal_polynomial(&self) -> &[i64] {
        &self.poly
    }
}

fn tables(n: u32) -> &'static FieldTables {
    static CACHE: OnceLock<RwLock<HashMap<u32, &'static FieldTables>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(t) = cache.read().expect("cache poisoned").get(&n) {
        return t;
    }
    let mut w = cache.write().expect("cache poisoned");
    w.entry(n).or_insert_with(|| Box::leak(Box::new(FieldTables::build(n))))
}

/// The N-th cyclotomic polynomial as integer coefficients, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    assert!(n >= 1, "cyclotomic polynomial of order 0");
    static MEMO: OnceLock<RwLock<HashMap<u32, Vec<i64>>>> = OnceLock::new();
    let memo = MEMO.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(p) = memo.read().expect("memo poisoned").get(&n) {
        return p.clone();
    }
    // x^n − 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in (1..n).filter(|d| n % d == 0) {
        num = divide_monic(&num, &cyclotomic_polynomial(d));
    }
    memo.write().expect("memo poisoned").insert(n, num.clone());
    num
}

fn divide_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut quo = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd];
        quo[i] = c;
        if c != 0 {
            for (j, &dc) in den.iter().enumerate() {
                rem[i + j] -= c * dc;
            }
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0), "inexact cyclotomic division");
    quo
}

/// Euler's totient.
pub fn totient(n: u32) -> u32 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// An exact element of Q(ζ_N).
#[derive(Clone)]
pub struct CycloNum {
    t: &'static FieldTables,
    coeffs: Coeffs,
}

impl CycloNum {
    pub fn zero_in(n: u32) -> Self {
        let t = tables(n);
        CycloNum { t, coeffs: SmallVec::from_elem(Rational::zero(), t.phi) }
    }

    pub fn from_rational(q: Rational) -> Self {
        let mut c = CycloNum::zero_in(1);
        c.coeffs[0] = q;
        c
    }

    pub fn from_integer(k: i64) -> Self {
        Self::from_rational(Rational::from_integer(k))
    }

    /// ζ_N^k.
    pub fn root(n: u32, k: i64) -> Self {
        let t = tables(n);
        let e = k.rem_euclid(n as i64) as usize;
        CycloNum { t, coeffs: t.powers[e].iter().map(|&x| Rational::from_integer(x)).collect() }
    }

    /// Builds from power-basis coordinates; the length must be φ(N).
    pub fn from_coeffs(n: u32, coeffs: Vec<Rational>) -> Result<Self> {
        let t = tables(n);
        if coeffs.len() != t.phi {
            return Err(GradingError::InvalidParams(format!(
                "Q(zeta_{n}) needs {} coordinates, got {}",
                t.phi,
                coeffs.len()
            )));
        }
        Ok(CycloNum { t, coeffs: coeffs.into() })
    }

    pub fn conductor(&self) -> u32 {
        self.t.n
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then(|| &self.coeffs[0])
    }

    /// Embeds into Q(ζ_M); `M` must be a multiple of the conductor.
    pub fn lift(&self, m: u32) -> Result<Self> {
        let n = self.t.n;
        if m % n != 0 {
            return Err(GradingError::ConductorMismatch(n, m));
        }
        if m == n {
            return Ok(self.clone());
        }
        let mut out = CycloNum::zero_in(m);
        let step = (m / n) as usize;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, &r) in out.coeffs.iter_mut().zip(&out.t.powers[j * step]) {
                if r != 0 {
                    *o += &(c * &Rational::from_integer(r));
                }
            }
        }
        Ok(out)
    }

    /// Brings two operands into a common field, avoiding lifts for rationals.
    fn align<'a>(a: &'a Self, b: &'a Self) -> (std::borrow::Cow<'a, Self>, std::borrow::Cow<'a, Self>) {
        use std::borrow::Cow;
        if a.t.n == b.t.n {
            return (Cow::Borrowed(a), Cow::Borrowed(b));
        }
        if a.is_rational() {
            let mut x = CycloNum::zero_in(b.t.n);
            x.coeffs[0] = a.coeffs[0].clone();
            return (Cow::Owned(x), Cow::Borrowed(b));
        }
        if b.is_rational() {
            let mut y = CycloNum::zero_in(a.t.n);
            y.coeffs[0] = b.coeffs[0].clone();
            return (Cow::Borrowed(a), Cow::Owned(y));
        }
        let m = a.t.n.lcm(&b.t.n);
        (Cow::Owned(a.lift(m).expect("lcm lift")), Cow::Owned(b.lift(m).expect("lcm lift")))
    }

    fn add_same(&self, o: &Self) -> Self {
        CycloNum { t: self.t, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }

    fn sub_same(&self, o: &Self) -> Self {
        CycloNum { t: self.t, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect() }
    }

    fn scale_rational(&self, q: &Rational) -> Self {
        CycloNum { t: self.t, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    fn mul_same(&self, o: &Self) -> Self {
        if o.is_rational() {
            return self.scale_rational(&o.coeffs[0]);
        }
        if self.is_rational() {
            return o.scale_rational(&self.coeffs[0]);
        }
        let phi = self.t.phi;
        let mut prod: SmallVec<[Rational; 8]> = SmallVec::from_elem(Rational::zero(), 2 * phi - 1);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += &(a * b);
                }
            }
        }
        let mut out: Coeffs = prod[..phi].iter().cloned().collect();
        for (k, c) in prod.iter().enumerate().skip(phi) {
            if c.is_zero() {
                continue;
            }
            for (o, &r) in out.iter_mut().zip(&self.t.powers[k]) {
                if r != 0 {
                    *o += &(c * &Rational::from_integer(r));
                }
            }
        }
        CycloNum { t: self.t, coeffs: out }
    }

    /// Multiplicative inverse via the norm-free route: solve `self · y = 1`
    /// as a φ×φ rational linear system.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(GradingError::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            let mut y = CycloNum::zero_in(self.t.n);
            y.coeffs[0] = q.recip().expect("nonzero");
            return Ok(y);
        }
        // Columns: self · ζ^j in coordinates.
        let phi = self.t.phi;
        let mut sys = crate::linalg::Matrix::<Rational>::zeros(phi, phi + 1);
        for j in 0..phi {
            let col = self.mul_same(&CycloNum::root(self.t.n, j as i64));
            for i in 0..phi {
                sys.set(i, j, col.coeffs[i].clone());
            }
        }
        sys.set(0, phi, Rational::from_integer(-1));
        let ker = sys.kernel();
        let v = ker
            .into_iter()
            .find(|v| !v[phi].is_zero())
            .ok_or(GradingError::DivisionByZero)?;
        let s = v[phi].recip().expect("nonzero");
        Ok(CycloNum { t: self.t, coeffs: v[..phi].iter().map(|x| x * &s).collect() })
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = CycloNum::from_integer(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Returns `k` with `self = ζ_M^k`, where `M` is the conductor rounded
    /// up to an even number (Q(ζ_N) for odd N also contains −ζ_N).
    pub fn as_root_of_unity(&self) -> Option<RootOfUnity> {
        let n = self.t.n;
        let m = if n % 2 == 0 { n } else { 2 * n };
        if let Some(q) = self.as_rational() {
            return if q.is_one() {
                Some(RootOfUnity::new(m, 0))
            } else if *q == Rational::from_integer(-1) {
                Some(RootOfUnity::new(m, m as i64 / 2))
            } else {
                None
            };
        }
        (0..m as i64).map(|k| RootOfUnity::new(m, k)).find(|r| r.to_cyclo() == *self)
    }

    /// Complex value under ζ_N ↦ e^{2πi/N}, in double precision.
    pub fn to_complex(&self) -> Complex64 {
        let n = self.t.n as f64;
        let mut z = Complex64::new(0.0, 0.0);
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                z += Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / n) * c.to_f64();
            }
        }
        z
    }

    /// Conjugation ζ ↦ ζ^{-1}.
    pub fn conj(&self) -> Self {
        let mut out = CycloNum::zero_in(self.t.n);
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let p = &self.t.powers[(self.t.n as usize - j) % self.t.n as usize];
            for (o, &r) in out.coeffs.iter_mut().zip(p) {
                if r != 0 {
                    *o += &(c * &Rational::from_integer(r));
                }
            }
        }
        out
    }
}

/// Operation selector for [`field_op`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Mul,
    Neg,
    Inv,
    Eq,
}

/// Result of [`field_op`]: a field element or a truth value.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldValue {
    Num(CycloNum),
    Bool(bool),
}

/// Strict field arithmetic: binary operands must share the conductor.
pub fn field_op(op: FieldOp, a: &CycloNum, b: Option<&CycloNum>) -> Result<FieldValue> {
    let need_b = || b.ok_or_else(|| GradingError::InvalidParams(format!("{op:?} needs two operands")));
    let same = |b: &CycloNum| {
        if a.conductor() == b.conductor() {
            Ok(())
        } else {
            Err(GradingError::ConductorMismatch(a.conductor(), b.conductor()))
        }
    };
    Ok(match op {
        FieldOp::Add => {
            let b = need_b()?;
            same(b)?;
            FieldValue::Num(a.add_same(b))
        }
        FieldOp::Mul => {
            let b = need_b()?;
            same(b)?;
            FieldValue::Num(a.mul_same(b))
        }
        FieldOp::Eq => {
            let b = need_b()?;
            same(b)?;
            FieldValue::Bool(a.coeffs == b.coeffs)
        }
        FieldOp::Neg => FieldValue::Num(-a),
        FieldOp::Inv => FieldValue::Num(a.inv()?),
    })
}

impl PartialEq for CycloNum {
    fn eq(&self, o: &Self) -> bool {
        if self.t.n == o.t.n {
            return self.coeffs == o.coeffs;
        }
        let (a, b) = CycloNum::align(self, o);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycloNum {}

impl<'a> Add<&'a CycloNum> for &'a CycloNum {
    type Output = CycloNum;
    fn add(self, o: &'a CycloNum) -> CycloNum {
        if self.t.n == o.t.n {
            return self.add_same(o);
        }
        let (a, b) = CycloNum::align(self, o);
        a.add_same(&b)
    }
}

impl<'a> Sub<&'a CycloNum> for &'a CycloNum {
    type Output = CycloNum;
    fn sub(self, o: &'a CycloNum) -> CycloNum {
        if self.t.n == o.t.n {
            return self.sub_same(o);
        }
        let (a, b) = CycloNum::align(self, o);
        a.sub_same(&b)
    }
}

impl<'a> Mul<&'a CycloNum> for &'a CycloNum {
    type Output = CycloNum;
    fn mul(self, o: &'a CycloNum) -> CycloNum {
        if self.t.n == o.t.n {
            return self.mul_same(o);
        }
        let (a, b) = CycloNum::align(self, o);
        a.mul_same(&b)
    }
}

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        CycloNum { t: self.t, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CycloNum {
            type Output = CycloNum;
            fn $m(self, o: CycloNum) -> CycloNum {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        -&self
    }
}

impl Zero for CycloNum {
    fn zero() -> Self {
        CycloNum::zero_in(1)
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

impl One for CycloNum {
    fn one() -> Self {
        CycloNum::from_integer(1)
    }
}

impl Field for CycloNum {
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        CycloNum::inv(self).ok()
    }
    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        let p = a * b;
        if self.t.n == p.t.n {
            for (x, y) in self.coeffs.iter_mut().zip(&p.coeffs) {
                if !y.is_zero() {
                    *x += y;
                }
            }
        } else {
            *self = &*self + &p;
        }
    }
}

impl From<Rational> for CycloNum {
    fn from(q: Rational) -> Self {
        CycloNum::from_rational(q)
    }
}

impl From<RootOfUnity> for CycloNum {
    fn from(r: RootOfUnity) -> Self {
        r.to_cyclo()
    }
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| match j {
                0 => c.to_string(),
                1 => format!("{c}*z{}", self.t.n),
                _ => format!("{c}*z{}^{j}", self.t.n),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl fmt::Debug for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// ζ_N^k in compact form. Equality compares values, so `(6, 3) == (2, 1)`.
#[derive(Clone, Copy, Debug)]
pub struct RootOfUnity {
    n: u32,
    k: u32,
}

impl RootOfUnity {
    pub fn new(n: u32, k: i64) -> Self {
        assert!(n >= 1, "root of unity of order 0");
        RootOfUnity { n, k: k.rem_euclid(n as i64) as u32 }
    }

    pub fn one() -> Self {
        RootOfUnity { n: 1, k: 0 }
    }

    pub fn minus_one() -> Self {
        RootOfUnity { n: 2, k: 1 }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Reduced form `k/N` in lowest terms.
    pub fn reduced(&self) -> (u32, u32) {
        let g = self.n.gcd(&self.k);
        (self.n / g, self.k / g)
    }

    /// Multiplicative order.
    pub fn order(&self) -> u32 {
        self.reduced().0
    }

    pub fn is_one(&self) -> bool {
        self.k == 0
    }

    /// Re-expresses with denominator `m`, if `m` is a multiple of the order.
    pub fn with_n(&self, m: u32) -> Option<Self> {
        let (n, k) = self.reduced();
        (m % n == 0).then(|| RootOfUnity { n: m, k: k * (m / n) })
    }

    pub fn mul(&self, o: &Self) -> Self {
        let m = self.n.lcm(&o.n);
        let k = self.k as u64 * (m / self.n) as u64 + o.k as u64 * (m / o.n) as u64;
        RootOfUnity { n: m, k: (k % m as u64) as u32 }
    }

    pub fn inv(&self) -> Self {
        RootOfUnity { n: self.n, k: (self.n - self.k) % self.n }
    }

    pub fn pow(&self, e: i64) -> Self {
        let k = (self.k as i64 * e.rem_euclid(self.n as i64)).rem_euclid(self.n as i64);
        RootOfUnity { n: self.n, k: k as u32 }
    }

    /// ±1 as an integer when the value is real.
    pub fn as_sign(&self) -> Option<i8> {
        match self.reduced() {
            (1, _) => Some(1),
            (2, 1) => Some(-1),
            _ => None,
        }
    }

    pub fn from_sign(s: i8) -> Self {
        if s >= 0 {
            Self::one()
        } else {
            Self::minus_one()
        }
    }

    pub fn to_cyclo(&self) -> CycloNum {
        CycloNum::root(self.n, self.k as i64)
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * self.k as f64 / self.n as f64)
    }
}

impl PartialEq for RootOfUnity {
    fn eq(&self, o: &Self) -> bool {
        self.reduced() == o.reduced()
    }
}

impl Eq for RootOfUnity {}

impl std::hash::Hash for RootOfUnity {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.reduced().hash(state);
    }
}

impl PartialOrd for RootOfUnity {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by the angle `k/N ∈ [0, 1)`.
impl Ord for RootOfUnity {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        (self.k as u64 * o.n as u64).cmp(&(o.k as u64 * self.n as u64))
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.reduced() {
            (1, _) => write!(f, "1"),
            (2, _) => write!(f, "-1"),
            (n, k) => write!(f, "z{n}^{k}"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RootWire {
    #[serde(rename = "N")]
    n: u32,
    k: i64,
}

impl Serialize for RootOfUnity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RootWire { n: self.n, k: self.k as i64 }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RootOfUnity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = RootWire::deserialize(d)?;
        if w.n == 0 {
            return Err(D::Error::custom("N must be positive"));
        }
        Ok(RootOfUnity::new(w.n, w.k))
    }
}

/// An integer that may exceed `i64`: JSON number when small, string otherwise.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WireInt {
    Small(i64),
    Big(String),
}

impl WireInt {
    fn from_big(b: &BigInt) -> Self {
        match b.to_i64() {
            Some(x) => WireInt::Small(x),
            None => WireInt::Big(b.to_string()),
        }
    }

    fn to_big(&self) -> std::result::Result<BigInt, String> {
        match self {
            WireInt::Small(x) => Ok(BigInt::from(*x)),
            WireInt::Big(s) => s.parse().map_err(|_| format!("bad integer {s:?}")),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CycloWire {
    #[serde(rename = "N")]
    n: u32,
    coeffs: Vec<(WireInt, WireInt)>,
}

impl Serialize for CycloNum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycloWire {
            n: self.t.n,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| (WireInt::from_big(&c.numer()), WireInt::from_big(&c.denom())))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloNum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = CycloWire::deserialize(d)?;
        if w.n == 0 {
            return Err(D::Error::custom("N must be positive"));
        }
        let coeffs = w
            .coeffs
            .iter()
            .map(|(a, b)| {
                let (a, b) = (a.to_big().map_err(D::Error::custom)?, b.to_big().map_err(D::Error::custom)?);
                Rational::from_bigints(a, b).ok_or_else(|| D::Error::custom("zero denominator"))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        CycloNum::from_coeffs(w.n, coeffs).map_err(D::Error::custom)
    }
}
