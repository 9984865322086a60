use crate::exactnum::{binomial, ExactMatrix, Matrix, Poly, RatFun, Scalar};

/// Operator-valued polynomial Σ M_m x^m on a space of fixed dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct OpPoly {
    dim: usize,
    c: Vec<ExactMatrix>,
}

impl OpPoly {
    pub fn new(dim: usize, mut c: Vec<ExactMatrix>) -> Self {
        while c.last().is_some_and(|m| m.is_zero()) {
            c.pop();
        }
        assert!(c.iter().all(|m| m.rows() == dim && m.cols() == dim));
        OpPoly { dim, c }
    }

    pub fn zero(dim: usize) -> Self {
        OpPoly { dim, c: Vec::new() }
    }

    /// p(x) · identity
    pub fn scalar(dim: usize, p: &Poly) -> Self {
        let id = Matrix::identity(dim);
        OpPoly::new(dim, p.coeffs().iter().map(|a| id.scale(a)).collect())
    }

    pub fn constant(m: ExactMatrix) -> Self {
        OpPoly::new(m.rows(), vec![m])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &[ExactMatrix] {
        &self.c
    }

    pub fn coeff(&self, m: usize) -> ExactMatrix {
        self.c.get(m).cloned().unwrap_or_else(|| Matrix::zeros(self.dim, self.dim))
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn add(&self, o: &OpPoly) -> OpPoly {
        let n = self.c.len().max(o.c.len());
        OpPoly::new(self.dim, (0..n).map(|m| self.coeff(m).add(&o.coeff(m))).collect())
    }

    pub fn sub(&self, o: &OpPoly) -> OpPoly {
        let n = self.c.len().max(o.c.len());
        OpPoly::new(self.dim, (0..n).map(|m| self.coeff(m).sub(&o.coeff(m))).collect())
    }

    pub fn neg(&self) -> OpPoly {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn scale(&self, a: &Scalar) -> OpPoly {
        OpPoly::new(self.dim, self.c.iter().map(|m| m.scale(a)).collect())
    }

    pub fn mul(&self, o: &OpPoly) -> OpPoly {
        if self.is_zero() || o.is_zero() {
            return OpPoly::zero(self.dim);
        }
        let mut out = vec![Matrix::zeros(self.dim, self.dim); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        OpPoly::new(self.dim, out)
    }

    /// Multiply by a scalar polynomial.
    pub fn mul_poly(&self, p: &Poly) -> OpPoly {
        self.mul(&OpPoly::scalar(self.dim, p))
    }

    /// Left-multiply every coefficient by a constant matrix.
    pub fn left_mul(&self, m: &ExactMatrix) -> OpPoly {
        OpPoly::new(self.dim, self.c.iter().map(|c| m.mul(c)).collect())
    }

    pub fn right_mul(&self, m: &ExactMatrix) -> OpPoly {
        OpPoly::new(self.dim, self.c.iter().map(|c| c.mul(m)).collect())
    }

    /// A(x + a)
    pub fn shift(&self, a: &Scalar) -> OpPoly {
        if a.is_zero() {
            return self.clone();
        }
        let n = self.c.len();
        let pw: Vec<Scalar> = (0..n).map(|e| a.pow(e as u32)).collect();
        let mut out = vec![Matrix::zeros(self.dim, self.dim); n];
        for (m, cm) in self.c.iter().enumerate() {
            for (j, o) in out.iter_mut().enumerate().take(m + 1) {
                let f = &Scalar::from_int(binomial(m, j) as i64) * &pw[m - j];
                o.axpy(&f, cm);
            }
        }
        OpPoly::new(self.dim, out)
    }

    /// A^{[m]}(x) = A(x − m)
    pub fn bracket(&self, m: i64) -> OpPoly {
        self.shift(&Scalar::from_int(-m))
    }

    /// Division by a scalar polynomial: self = q·d + r with deg r < deg d.
    pub fn div_rem_poly(&self, d: &Poly) -> (OpPoly, OpPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.deg();
        if self.c.len() <= dd {
            return (OpPoly::zero(self.dim), self.clone());
        }
        let inv = d.lead().inv();
        let mut r = self.c.clone();
        let mut q = vec![Matrix::zeros(self.dim, self.dim); r.len() - dd];
        for i in (0..q.len()).rev() {
            let f = r[i + dd].scale(&inv);
            if f.is_zero() {
                continue;
            }
            for (j, dv) in d.coeffs().iter().enumerate() {
                r[i + j].axpy(&-dv, &f);
            }
            q[i] = f;
        }
        r.truncate(dd);
        (OpPoly::new(self.dim, q), OpPoly::new(self.dim, r))
    }

    pub fn eval(&self, x: &Scalar) -> ExactMatrix {
        let mut acc = Matrix::zeros(self.dim, self.dim);
        for m in self.c.iter().rev() {
            acc = acc.scale(x).add(m);
        }
        acc
    }

    /// A(x)v as a vector of polynomials.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Poly> {
        let cols: Vec<Vec<Scalar>> = self.c.iter().map(|m| m.mul_vec(v)).collect();
        (0..self.dim)
            .map(|i| Poly::new(cols.iter().map(|c| c[i].clone()).collect()))
            .collect()
    }

    /// A(x)v for a polynomial-valued vector.
    pub fn apply_poly(&self, v: &[Poly]) -> Vec<Poly> {
        let mut out = vec![Poly::zero(); self.dim];
        for (m, cm) in self.c.iter().enumerate() {
            let xm = Poly::monomial(Scalar::one(), m);
            for i in 0..self.dim {
                for (j, vj) in v.iter().enumerate() {
                    let a = cm.get(i, j);
                    if a.is_zero() || vj.is_zero() {
                        continue;
                    }
                    out[i] = &out[i] + &(&xm * &vj.scale(a));
                }
            }
        }
        out
    }

    /// Entry (i, j) as a polynomial.
    pub fn entry(&self, i: usize, j: usize) -> Poly {
        Poly::new(self.c.iter().map(|m| m.get(i, j).clone()).collect())
    }

    /// If this is p(x)·identity, return p.
    pub fn as_scalar(&self) -> Option<Poly> {
        let p = self.entry(0, 0);
        (*self == OpPoly::scalar(self.dim, &p)).then_some(p)
    }

    /// Matrix of rational functions A(x)/d(x).
    pub fn to_ratfun_matrix(&self, d: &Poly) -> Matrix<RatFun> {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m.set(i, j, RatFun::new(self.entry(i, j), d.clone()));
            }
        }
        m
    }
}

/// Vector of polynomials (one per basis vector) equal to p(x)·v.
pub fn scalar_times(p: &Poly, v: &[Scalar]) -> Vec<Poly> {
    v.iter().map(|a| p.scale(a)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;

    #[test]
    fn shift_matches_eval() {
        let a = OpPoly::new(
            2,
            vec![
                ExactMatrix::from_int_rows(&[&[1, 2], &[0, 1]]),
                ExactMatrix::from_int_rows(&[&[0, 1], &[3, 0]]),
                ExactMatrix::identity(2),
            ],
        );
        let s = a.shift(&int(3));
        for x in [-2, 0, 5] {
            assert_eq!(s.eval(&int(x)), a.eval(&int(x + 3)));
        }
    }

    #[test]
    fn product_matches_eval() {
        let a = OpPoly::new(2, vec![ExactMatrix::from_int_rows(&[&[0, 1], &[1, 0]]), ExactMatrix::identity(2)]);
        let b = OpPoly::new(2, vec![ExactMatrix::from_int_rows(&[&[2, 0], &[0, 1]]), ExactMatrix::identity(2)]);
        let p = a.mul(&b);
        assert_eq!(p.eval(&int(7)), a.eval(&int(7)).mul(&b.eval(&int(7))));
    }
}
