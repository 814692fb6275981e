//! Dense matrices and exact linear algebra over a generic [`Field`].
//!
//! Products skip zero entries, which keeps the monomial matrices produced by
//! the constructions cheap to multiply.

use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::rational::Rational;

/// Scalars usable as matrix entries.
///
/// Exact fields ([`Rational`], [`crate::CycloNum`]) give exact ranks and
/// kernels; the floating-point impls exist for numeric post-processing and
/// treat only exact zeros as zero.
pub trait Field: Clone + PartialEq + fmt::Debug + Zero + One + Send + Sync + 'static {
    fn add_ref(&self, o: &Self) -> Self;
    fn sub_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn inv(&self) -> Option<Self>;

    /// `self += a * b`
    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        let p = a.mul_ref(b);
        *self = self.add_ref(&p);
    }
}

macro_rules! impl_field_via_ops {
    ($t:ty, $inv:expr) => {
        impl Field for $t {
            fn add_ref(&self, o: &Self) -> Self {
                self.clone() + o.clone()
            }
            fn sub_ref(&self, o: &Self) -> Self {
                self.clone() - o.clone()
            }
            fn mul_ref(&self, o: &Self) -> Self {
                self.clone() * o.clone()
            }
            fn neg_ref(&self) -> Self {
                -self.clone()
            }
            fn inv(&self) -> Option<Self> {
                let f: fn(&Self) -> Option<Self> = $inv;
                f(self)
            }
        }
    };
}

impl_field_via_ops!(f64, |x| if *x == 0.0 { None } else { Some(1.0 / x) });
impl_field_via_ops!(Complex64, |x| if x.is_zero() { None } else { Some(x.inv()) });

impl Field for Rational {
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
        self.recip()
    }
}

/// A dense row-major matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

/// Serialized as a list of rows.
impl<F: Field + serde::Serialize> serde::Serialize for Matrix<F> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            seq.serialize_element(self.row(i))?;
        }
        seq.end()
    }
}

impl<'de, F: Field + serde::Deserialize<'de>> serde::Deserialize<'de> for Matrix<F> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<F>> = Vec::deserialize(d)?;
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != c) {
            return Err(serde::de::Error::custom("matrix rows have different lengths"));
        }
        Ok(Matrix::from_rows(rows))
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = F::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<F>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length mismatch");
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// The matrix with a single `value` at `(i, j)`.
    pub fn unit(rows: usize, cols: usize, i: usize, j: usize, value: F) -> Self {
        let mut m = Self::zeros(rows, cols);
        m.set(i, j, value);
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn as_slice(&self) -> &[F] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<F> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn mul(&self, o: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        let mut out: Matrix<F> = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                let orow = &o.data[k * o.cols..(k + 1) * o.cols];
                let dst = &mut out.data[i * o.cols..(i + 1) * o.cols];
                for (d, b) in dst.iter_mut().zip(orow) {
                    if !b.is_zero() {
                        d.add_mul_assign(a, b);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Matrix<F>) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.add_ref(b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, o: &Matrix<F>) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.sub_ref(b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Matrix<F> {
        self.map(F::neg_ref)
    }

    pub fn scale(&self, s: &F) -> Matrix<F> {
        if s.is_one_ref() {
            return self.clone();
        }
        self.map(|x| if x.is_zero() { F::zero() } else { x.mul_ref(s) })
    }

    /// `[self, o] = self·o − o·self`
    pub fn commutator(&self, o: &Matrix<F>) -> Matrix<F> {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn transpose(&self) -> Matrix<F> {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j].clone();
            }
        }
        out
    }

    pub fn trace(&self) -> F {
        let mut t = F::zero();
        for i in 0..self.rows.min(self.cols) {
            t = t.add_ref(self.get(i, i));
        }
        t
    }

    /// Kronecker product `self ⊗ o`.
    pub fn kron(&self, o: &Matrix<F>) -> Matrix<F> {
        let (r, c) = (self.rows * o.rows, self.cols * o.cols);
        let mut out = Matrix::zeros(r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        let b = o.get(k, l);
                        if !b.is_zero() {
                            out.set(i * o.rows + k, j * o.cols + l, a.mul_ref(b));
                        }
                    }
                }
            }
        }
        out
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn place(&mut self, r0: usize, c0: usize, block: &Matrix<F>) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    pub fn pow(&self, mut e: u64) -> Matrix<F> {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Gauss–Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Matrix<F>> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let piv = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if piv != col {
                a.swap_rows(piv, col);
                inv.swap_rows(piv, col);
            }
            let p = a.get(col, col).inv()?;
            a.scale_row(col, &p);
            inv.scale_row(col, &p);
            for r in 0..n {
                if r != col && !a.get(r, col).is_zero() {
                    let f = a.get(r, col).clone();
                    a.sub_row_multiple(r, col, &f);
                    inv.sub_row_multiple(r, col, &f);
                }
            }
        }
        Some(inv)
    }

    pub fn determinant(&self) -> F {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut det = F::one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
                return F::zero();
            };
            if piv != col {
                a.swap_rows(piv, col);
                det = det.neg_ref();
            }
            let p = a.get(col, col).clone();
            det = det.mul_ref(&p);
            let pinv = p.inv().expect("nonzero pivot");
            for r in col + 1..n {
                if !a.get(r, col).is_zero() {
                    let f = a.get(r, col).mul_ref(&pinv);
                    a.sub_row_multiple(r, col, &f);
                }
            }
        }
        det
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.cols);
        (0..self.rows).filter(|&i| e.insert(self.row(i).to_vec())).count()
    }

    /// Basis of the right null space `{x : self·x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let mut a = self.clone();
        let (rows, cols) = (a.rows, a.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(piv) = (r..rows).find(|&i| !a.get(i, c).is_zero()) else {
                continue;
            };
            a.swap_rows(piv, r);
            let p = a.get(r, c).inv().expect("nonzero pivot");
            a.scale_row(r, &p);
            for i in 0..rows {
                if i != r && !a.get(i, c).is_zero() {
                    let f = a.get(i, c).clone();
                    a.sub_row_multiple(i, r, &f);
                }
            }
            pivots.push(c);
            r += 1;
        }
        let mut basis = Vec::new();
        for free in (0..cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![F::zero(); cols];
            v[free] = F::one();
            for (i, &pc) in pivots.iter().enumerate() {
                let x = a.get(i, free);
                if !x.is_zero() {
                    v[pc] = x.neg_ref();
                }
            }
            basis.push(v);
        }
        basis
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, s: &F) {
        for j in 0..self.cols {
            let x = &mut self.data[r * self.cols + j];
            if !x.is_zero() {
                *x = x.mul_ref(s);
            }
        }
    }

    /// row[dst] -= f * row[src]
    fn sub_row_multiple(&mut self, dst: usize, src: usize, f: &F) {
        for j in 0..self.cols {
            let s = self.data[src * self.cols + j].clone();
            if !s.is_zero() {
                let d = &mut self.data[dst * self.cols + j];
                *d = d.sub_ref(&f.mul_ref(&s));
            }
        }
    }
}

trait IsOne {
    fn is_one_ref(&self) -> bool;
}

impl<F: Field> IsOne for F {
    fn is_one_ref(&self) -> bool {
        *self == F::one()
    }
}

impl<F: Field + fmt::Display> fmt::Display for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} ", self.rows, self.cols)?;
        f.debug_list().entries(self.data.chunks(self.cols.max(1))).finish()
    }
}

/// Incremental row-echelon form for span membership and coordinates.
///
/// Rows are kept with unit pivots; each row is reduced against all earlier
/// rows, so sequential reduction in insertion order is exact. When tracking
/// is enabled every stored row also remembers its expression in terms of the
/// accepted input vectors.
#[derive(Clone, Debug)]
pub struct Echelon<F> {
    dim: usize,
    rows: Vec<(usize, Vec<F>)>,
    track: Option<Vec<Vec<F>>>,
    accepted: usize,
}

impl<F: Field> Echelon<F> {
    pub fn new(dim: usize) -> Self {
        Echelon { dim, rows: Vec::new(), track: None, accepted: 0 }
    }

    /// Records coordinates so [`Echelon::coordinates`] is available.
    pub fn with_tracking(dim: usize) -> Self {
        Echelon { dim, rows: Vec::new(), track: Some(Vec::new()), accepted: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn reduce_with(&self, v: &mut [F], mut coeffs: Option<&mut Vec<F>>) {
        for (idx, (p, row)) in self.rows.iter().enumerate() {
            if v[*p].is_zero() {
                continue;
            }
            let c = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = x.sub_ref(&c.mul_ref(r));
                }
            }
            if let (Some(cs), Some(track)) = (coeffs.as_deref_mut(), self.track.as_ref()) {
                for (a, t) in cs.iter_mut().zip(&track[idx]) {
                    if !t.is_zero() {
                        *a = a.sub_ref(&c.mul_ref(t));
                    }
                }
            }
        }
    }

    /// Residual of `v` after reduction; zero iff `v` lies in the span.
    pub fn reduce(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.dim);
        let mut w = v.to_vec();
        self.reduce_with(&mut w, None);
        w
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Adds `v`; returns `false` (and stores nothing) if it is already in the span.
    pub fn insert(&mut self, v: Vec<F>) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut w = v;
        let index = self.accepted;
        let mut coeffs = self.track.as_ref().map(|_| {
            let mut c = vec![F::zero(); index + 1];
            c[index] = F::one();
            c
        });
        if let Some(track) = self.track.as_mut() {
            for t in track.iter_mut() {
                t.resize(index + 1, F::zero());
            }
        }
        self.reduce_with(&mut w, coeffs.as_mut());
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            if let Some(track) = self.track.as_mut() {
                for t in track.iter_mut() {
                    t.truncate(index);
                }
            }
            return false;
        };
        let inv = w[p].inv().expect("nonzero pivot");
        for x in w.iter_mut() {
            if !x.is_zero() {
                *x = x.mul_ref(&inv);
            }
        }
        if let (Some(track), Some(mut cs)) = (self.track.as_mut(), coeffs) {
            for c in cs.iter_mut() {
                if !c.is_zero() {
                    *c = c.mul_ref(&inv);
                }
            }
            track.push(cs);
        }
        self.rows.push((p, w));
        self.accepted += 1;
        true
    }

    /// Coordinates of `v` with respect to the accepted input vectors.
    pub fn coordinates(&self, v: &[F]) -> Option<Vec<F>> {
        let track = self.track.as_ref().expect("coordinates need a tracking echelon");
        assert_eq!(v.len(), self.dim);
        let mut w = v.to_vec();
        let mut acc = vec![F::zero(); self.accepted];
        // Reduction subtracts c·row; the coordinates accumulate +c·track.
        for (idx, (p, row)) in self.rows.iter().enumerate() {
            if w[*p].is_zero() {
                continue;
            }
            let c = w[*p].clone();
            for (x, r) in w.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = x.sub_ref(&c.mul_ref(r));
                }
            }
            for (a, t) in acc.iter_mut().zip(&track[idx]) {
                if !t.is_zero() {
                    a.add_mul_assign(&c, t);
                }
            }
        }
        if w.iter().all(Zero::is_zero) {
            Some(acc)
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn qm(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    #[test]
    fn inverse_and_determinant() {
        let a = qm(&[&[2, 1], &[1, 1]]);
        assert_eq!(a.determinant(), q(1));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        assert!(qm(&[&[1, 2], &[2, 4]]).inverse().is_none());
        assert_eq!(qm(&[&[0, 1], &[1, 0]]).determinant(), q(-1));
    }

    #[test]
    fn kernel_spans_null_space() {
        let a = qm(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = a.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            let x = Matrix::from_vec(3, 1, v.clone());
            assert!(a.mul(&x).is_zero());
        }
    }

    #[test]
    fn echelon_coordinates_round_trip() {
        let vs = [vec![q(1), q(1), q(0)], vec![q(0), q(1), q(1)], vec![q(1), q(2), q(1)]];
        let mut e = Echelon::with_tracking(3);
        assert!(e.insert(vs[0].clone()));
        assert!(e.insert(vs[1].clone()));
        assert!(!e.insert(vs[2].clone()));
        let target = vec![q(2), q(5), q(3)];
        let c = e.coordinates(&target).unwrap();
        let recon: Vec<Rational> =
            (0..3).map(|j| &(&c[0] * &vs[0][j]) + &(&c[1] * &vs[1][j])).collect();
        assert_eq!(recon, target);
        assert!(e.coordinates(&[q(0), q(0), q(1)]).is_none());
    }

    #[test]
    fn kron_matches_block_layout() {
        let a = qm(&[&[1, 2], &[3, 4]]);
        let i2 = Matrix::<Rational>::identity(2);
        let k = a.kron(&i2);
        assert_eq!(k.get(2, 0), &q(3));
        assert_eq!(k.get(3, 1), &q(3));
        assert_eq!(k.get(0, 3), &q(0));
        assert_eq!(k.trace(), q(10));
    }
}
