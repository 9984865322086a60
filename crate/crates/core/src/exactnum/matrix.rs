use std::fmt;

use super::ratfun::RatFun;
use super::scalar::Scalar;

/// Minimal exact field interface for Gaussian elimination.
pub trait Field: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Panics on zero.
    fn inv(&self) -> Self;
}

impl Field for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        Scalar::inv(self)
    }
}

impl Field for RatFun {
    fn zero() -> Self {
        RatFun::zero()
    }
    fn one() -> Self {
        RatFun::one()
    }
    fn is_zero(&self) -> bool {
        RatFun::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        RatFun::inv(self).expect("inverse of zero")
    }
}

/// Dense row-major matrix over an exact field.
#[derive(Clone, PartialEq)]
pub struct Matrix<F: Field = Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

pub type ExactMatrix = Matrix<Scalar>;

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        assert!(rows.iter().all(|v| v.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<F>], nrows: usize) -> Self {
        let mut m = Self::zeros(nrows, cols.len());
        for (j, v) in cols.iter().enumerate() {
            for (i, x) in v.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn diagonal(d: Vec<F>) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, v) in d.into_iter().enumerate() {
            m.set(i, i, v);
        }
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

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, a: &F) -> Self {
        if a.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        self.map(|v| if v.is_zero() { F::zero() } else { v.mul(a) })
    }

    /// Adds `a * o` in place.
    pub fn axpy(&mut self, a: &F, o: &Self) {
        if a.is_zero() {
            return;
        }
        for (x, y) in self.data.iter_mut().zip(&o.data) {
            if !y.is_zero() {
                *x = x.add(&a.mul(y));
            }
        }
    }

    /// Product skipping zero entries; most operators here are sparse.
    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].add(&a.mul(b));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = F::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Stack matrices vertically (same column count).
    pub fn vstack(ms: &[Self]) -> Self {
        let cols = ms.first().map_or(0, |m| m.cols);
        let mut data = Vec::new();
        let mut rows = 0;
        for m in ms {
            assert_eq!(m.cols, cols);
            rows += m.rows;
            data.extend(m.data.iter().cloned());
        }
        Matrix { rows, cols, data }
    }

    /// In-place reduced row echelon form; returns pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self.get(r, c).inv();
            for j in c..self.cols {
                let idx = r * self.cols + j;
                if !self.data[idx].is_zero() {
                    self.data[idx] = self.data[idx].mul(&inv);
                }
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let b = self.data[r * self.cols + j].clone();
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * self.cols + j;
                    self.data[idx] = self.data[idx].sub(&f.mul(&b));
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let p = m.rref_in_place();
        (m, p)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Kernel basis, one vector per free column, in reduced echelon form.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![None; self.cols];
        for (row, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(row);
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free].is_some() {
                continue;
            }
            let mut v = vec![F::zero(); self.cols];
            v[free] = F::one();
            for (row, &c) in pivots.iter().enumerate() {
                v[c] = r.get(row, free).neg();
            }
            basis.push(v);
        }
        basis
    }

    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, F::one());
        }
        let piv = aug.rref_in_place();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Some(out)
    }

    /// Solve self · X = B; None if inconsistent. Picks the particular solution with free variables zero.
    pub fn solve(&self, b: &Self) -> Option<Self> {
        assert_eq!(self.rows, b.rows);
        let n = self.cols;
        let mut aug = Self::zeros(self.rows, n + b.cols);
        for i in 0..self.rows {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            for j in 0..b.cols {
                aug.set(i, n + j, b.get(i, j).clone());
            }
        }
        let piv = aug.rref_in_place();
        if piv.iter().any(|&c| c >= n) {
            return None;
        }
        let mut x = Self::zeros(n, b.cols);
        for (row, &c) in piv.iter().enumerate() {
            for j in 0..b.cols {
                x.set(c, j, aug.get(row, n + j).clone());
            }
        }
        Some(x)
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    /// Matrix of this operator on an invariant subspace spanned by independent columns;
    /// None if the span is not invariant.
    pub fn restrict_to(&self, basis: &[Vec<F>]) -> Option<Self> {
        let w = Self::from_cols(basis, self.rows);
        w.solve(&self.mul(&w))
    }
}

impl Matrix<Scalar> {
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Scalar::from_int(v)).collect())
                .collect(),
        )
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).fold(Scalar::zero(), |acc, i| acc + self.get(i, i))
    }

    /// Characteristic polynomial det(x − A) via Faddeev–LeVerrier.
    pub fn char_poly(&self) -> super::poly::Poly {
        assert!(self.is_square());
        let n = self.rows;
        let mut c = vec![Scalar::zero(); n + 1];
        c[n] = Scalar::one();
        let mut m = Matrix::<Scalar>::zeros(n, n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let mut next = self.mul(&m);
            for i in 0..n {
                let v = next.get(i, i) + &c[n - k + 1];
                next.set(i, i, v);
            }
            m = next;
            let am = self.mul(&m);
            c[n - k] = -(am.trace() / Scalar::from_int(k as i64));
        }
        super::poly::Poly::new(c)
    }
}

impl<F: Field + fmt::Display> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Rank of a set of vectors.
pub fn span_rank<F: Field>(vs: &[Vec<F>], dim: usize) -> usize {
    if vs.is_empty() {
        return 0;
    }
    Matrix::from_rows(vs.iter().map(|v| {
        assert_eq!(v.len(), dim);
        v.clone()
    }).collect())
    .rank()
}

/// Incremental echelon basis: insert vectors, keep the independent ones.
#[derive(Clone, Debug)]
pub struct EchelonBasis<F: Field = Scalar> {
    dim: usize,
    // (pivot index, normalized vector with 1 at pivot)
    rows: Vec<(usize, Vec<F>)>,
}

impl<F: Field> EchelonBasis<F> {
    pub fn new(dim: usize) -> Self {
        EchelonBasis { dim, rows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Reduce `v` against the basis; returns the residue.
    pub fn reduce(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.dim);
        let mut w = v.to_vec();
        for (p, r) in &self.rows {
            let f = w[*p].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in w.iter_mut().zip(r) {
                if !y.is_zero() {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Returns true if `v` was independent and got added.
    pub fn insert(&mut self, v: &[F]) -> bool {
        let w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[p].inv();
        let w: Vec<F> = w.iter().map(|x| if x.is_zero() { F::zero() } else { x.mul(&inv) }).collect();
        self.rows.push((p, w));
        true
    }

    pub fn vectors(&self) -> Vec<Vec<F>> {
        self.rows.iter().map(|(_, v)| v.clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::poly::Poly;
    use crate::exactnum::scalar::int;

    #[test]
    fn kernel_and_rank() {
        let m = ExactMatrix::from_int_rows(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(|v| v.is_zero()));
    }

    #[test]
    fn inverse_and_solve() {
        let m = ExactMatrix::from_int_rows(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), ExactMatrix::identity(2));
        let s = ExactMatrix::from_int_rows(&[&[1, 1], &[1, 1]]);
        assert!(s.inverse().is_none());
        let b = ExactMatrix::from_int_rows(&[&[3], &[2]]);
        assert_eq!(m.solve(&b).unwrap(), ExactMatrix::from_int_rows(&[&[1], &[1]]));
    }

    #[test]
    fn char_poly_of_companion() {
        let m = ExactMatrix::from_int_rows(&[&[0, -6], &[1, 5]]);
        assert_eq!(m.char_poly(), Poly::from_roots(&[int(2), int(3)]));
    }

    #[test]
    fn echelon_basis() {
        let mut b = EchelonBasis::<Scalar>::new(3);
        assert!(b.insert(&[int(1), int(1), int(0)]));
        assert!(b.insert(&[int(0), int(1), int(1)]));
        assert!(!b.insert(&[int(1), int(2), int(1)]));
        assert_eq!(b.len(), 2);
    }
}
