use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactnum::{Matrix, RatFun, Scalar};

/// Operator-valued rational function of x.
pub type RatMatrix = Matrix<RatFun>;

/// A(x) ↦ A(x − m)
pub fn bracket_matrix(a: &RatMatrix, m: i64) -> RatMatrix {
    if m == 0 {
        return a.clone();
    }
    a.map(|f| f.bracket(m))
}

pub fn scalar_matrix(f: &RatFun, dim: usize) -> RatMatrix {
    Matrix::identity(dim).scale(f)
}

/// If `a` is f·1, return f.
pub fn as_scalar_matrix(a: &RatMatrix) -> Option<RatFun> {
    let f = a.get(0, 0).clone();
    (*a == scalar_matrix(&f, a.rows())).then_some(f)
}

/// Σ_k A_k(x) τ^k with τ f(x) = f(x − 1) τ, truncated above τ-degree `order`.
///
/// Negative degrees are allowed; there is no lower truncation.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffOp {
    dim: usize,
    order: i64,
    terms: BTreeMap<i64, RatMatrix>,
}

impl DiffOp {
    pub fn zero(dim: usize, order: i64) -> Self {
        DiffOp { dim, order, terms: BTreeMap::new() }
    }

    pub fn monomial(a: RatMatrix, k: i64, order: i64) -> Self {
        let mut d = DiffOp::zero(a.rows(), order);
        if k <= order && !a.is_zero() {
            d.terms.insert(k, a);
        }
        d
    }

    pub fn one(dim: usize, order: i64) -> Self {
        DiffOp::monomial(Matrix::identity(dim), 0, order)
    }

    pub fn scalar(f: &RatFun, k: i64, dim: usize, order: i64) -> Self {
        DiffOp::monomial(scalar_matrix(f, dim), k, order)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn coeff(&self, k: i64) -> RatMatrix {
        self.terms.get(&k).cloned().unwrap_or_else(|| Matrix::zeros(self.dim, self.dim))
    }

    /// (degree, coefficient) pairs with nonzero coefficient, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &RatMatrix)> {
        self.terms.iter().map(|(k, a)| (*k, a))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lowest(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn highest(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    fn push(&mut self, k: i64, a: RatMatrix) {
        if k > self.order || a.is_zero() {
            return;
        }
        let next = match self.terms.remove(&k) {
            Some(b) => b.add(&a),
            None => a,
        };
        if !next.is_zero() {
            self.terms.insert(k, next);
        }
    }

    pub fn with_order(&self, order: i64) -> Self {
        let mut d = DiffOp::zero(self.dim, order);
        for (k, a) in &self.terms {
            d.push(*k, a.clone());
        }
        d
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut d = self.with_order(self.order.min(o.order));
        for (k, a) in &o.terms {
            d.push(*k, a.clone());
        }
        d
    }

    pub fn neg(&self) -> Self {
        let mut d = self.clone();
        for a in d.terms.values_mut() {
            *a = a.scale(&RatFun::constant(-Scalar::one()));
        }
        d
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// (Aτ^a)(Bτ^b) = A·B^{[a]} τ^{a+b}
    pub fn mul(&self, o: &Self) -> Self {
        let mut d = DiffOp::zero(self.dim, self.order.min(o.order));
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                if a + b > d.order {
                    continue;
                }
                d.push(a + b, ca.mul(&bracket_matrix(cb, *a)));
            }
        }
        d
    }

    /// Left multiplication by a function of x (no τ).
    pub fn left_scale(&self, f: &RatFun) -> Self {
        let mut d = self.clone();
        for a in d.terms.values_mut() {
            *a = a.scale(f);
        }
        d
    }

    /// Two-sided inverse. The lowest term Aτ^d must have A invertible; the rest is
    /// inverted as a geometric series. A monomial inverts exactly; otherwise the
    /// result is reliable up to τ-degree order − 2d, which becomes its truncation.
    pub fn inverse(&self) -> Result<Self> {
        let d0 = self.lowest().ok_or_else(|| Error::NotInvertible("zero difference operator".into()))?;
        let a = &self.terms[&d0];
        let ainv = a
            .inverse()
            .ok_or_else(|| Error::NotInvertible(format!("leading coefficient at τ^{d0}")))?;
        // (Aτ^d)^{-1} = A^{-1}(x + d) τ^{-d}
        let lead_inv = DiffOp::monomial(bracket_matrix(&ainv, -d0), -d0, self.order.max(-d0));
        if self.terms.len() == 1 {
            return Ok(lead_inv);
        }
        let order = self.order - 2 * d0.max(0);
        let work = self.order - d0;
        let rest = self.sub(&DiffOp::monomial(a.clone(), d0, self.order));
        let u = lead_inv.mul(&rest).with_order(work).neg();
        let mut sum = DiffOp::one(self.dim, work);
        let mut pw = DiffOp::one(self.dim, work);
        // u has τ-degrees ≥ 1, so u^k vanishes under truncation once k > work
        for _ in 0..work.max(0) {
            pw = pw.mul(&u);
            if pw.is_zero() {
                break;
            }
            sum = sum.add(&pw);
        }
        Ok(sum.mul(&lead_inv.with_order(work)).with_order(order))
    }

    /// True when every coefficient is a scalar multiple of the identity.
    pub fn is_scalar(&self) -> bool {
        self.terms.values().all(|a| as_scalar_matrix(a).is_some())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, Poly};

    fn x_minus(a: i64) -> RatFun {
        RatFun::from_poly(Poly::linear(&int(a)))
    }

    #[test]
    fn tau_moves_past_functions() {
        // τ·x = (x − 1)·τ
        let tau = DiffOp::scalar(&RatFun::one(), 1, 1, 4);
        let x = DiffOp::scalar(&x_minus(0), 0, 1, 4);
        let lhs = tau.mul(&x);
        assert_eq!(lhs.coeff(1), scalar_matrix(&x_minus(1), 1));
        assert_eq!(lhs.terms().count(), 1);
    }

    #[test]
    fn inverse_of_monomial_and_series() {
        let f = RatFun::new(Poly::linear(&int(-1)), Poly::linear(&int(0)));
        let m = DiffOp::scalar(&f, 1, 1, 3);
        let mi = m.inverse().unwrap();
        assert_eq!(m.mul(&mi), DiffOp::one(1, 3));
        assert_eq!(mi.mul(&m), DiffOp::one(1, 3));
        // 1 − fτ has inverse Σ (fτ)^k
        let l = DiffOp::one(1, 3).sub(&m);
        let li = l.inverse().unwrap();
        assert_eq!(l.mul(&li), DiffOp::one(1, 3));
        assert_eq!(li.mul(&l), DiffOp::one(1, 3));
        assert_eq!(li.coeff(2), scalar_matrix(&(&f * &f.bracket(1)), 1));
    }
}
