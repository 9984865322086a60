use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::poly::Poly;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Reduced rational function: monic denominator coprime to the numerator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFun::zero();
        }
        let g = Poly::gcd(&num, &den);
        let (mut n, mut d) = if g.is_constant() {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        let l = d.lead();
        if !l.is_one() {
            let li = l.inv();
            n = n.scale(&li);
            d = d.scale(&li);
        }
        RatFun { num: n, den: d }
    }

    pub fn zero() -> Self {
        RatFun {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        RatFun::from_poly(Poly::one())
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFun {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(a: Scalar) -> Self {
        RatFun::from_poly(Poly::constant(a))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_constant()
    }

    pub fn as_poly(&self) -> Option<Poly> {
        self.is_poly().then(|| self.num.clone())
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NotInvertible("zero rational function".into()));
        }
        Ok(RatFun::new(self.den.clone(), self.num.clone()))
    }

    pub fn eval(&self, x: &Scalar) -> Result<Scalar> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::Pole(1));
        }
        Ok(self.num.eval(x) / d)
    }

    pub fn scale(&self, a: &Scalar) -> Self {
        RatFun::new(self.num.scale(a), self.den.clone())
    }

    /// f(x + a)
    pub fn shift(&self, a: &Scalar) -> Self {
        RatFun::new(self.num.shift(a), self.den.shift(a))
    }

    /// f^{[m]}(x) = f(x - m)
    pub fn bracket(&self, m: i64) -> Self {
        self.shift(&Scalar::from_int(-m))
    }

    /// Coefficients of x^0, x^-1, …, x^-order of the expansion at infinity.
    pub fn laurent_expand(&self, order: usize) -> Result<Vec<Scalar>> {
        let d = self.den.deg();
        if !self.num.is_zero() && self.num.deg() > d {
            return Err(Error::NotExpandable);
        }
        let lead_inv = self.den.lead().inv();
        let mut r = self.num.clone();
        let mut out = Vec::with_capacity(order + 1);
        for _ in 0..=order {
            let c = &r.coeff(d) * &lead_inv;
            if !c.is_zero() {
                r = &r - &self.den.scale(&c);
            }
            r = &r * &Poly::x();
            out.push(c);
        }
        Ok(out)
    }

    /// Value at 0 when the variable is read as ε.
    pub fn eps_limit(&self) -> Result<Scalar> {
        match self.den.valuation() {
            Some(0) => Ok(self.num.eval(&Scalar::zero()) / self.den.eval(&Scalar::zero())),
            Some(v) => Err(Error::Pole(v)),
            None => unreachable!("denominator is never zero"),
        }
    }

    /// Order at 0: positive for zeros, negative for poles; None for zero.
    pub fn order_at_zero(&self) -> Option<i64> {
        let n = self.num.valuation()? as i64;
        Some(n - self.den.valuation().unwrap_or(0) as i64)
    }

    /// Coefficient of ε^k in the expansion at ε = 0 (k may be negative down to the pole order).
    pub fn eps_coefficient(&self, k: i64) -> Scalar {
        let Some(ord) = self.order_at_zero() else {
            return Scalar::zero();
        };
        if k < ord {
            return Scalar::zero();
        }
        // f = ε^ord · u(ε) with u regular at 0; expand u by power series division.
        let nv = self.num.valuation().unwrap();
        let dv = self.den.valuation().unwrap_or(0);
        let n: Vec<Scalar> = self.num.coeffs()[nv..].to_vec();
        let d: Vec<Scalar> = self.den.coeffs()[dv..].to_vec();
        let want = (k - ord) as usize;
        let d0inv = d[0].inv();
        let mut u: Vec<Scalar> = Vec::with_capacity(want + 1);
        for i in 0..=want {
            let mut s = n.get(i).cloned().unwrap_or_else(Scalar::zero);
            for j in 1..=i.min(d.len() - 1) {
                s -= &(&d[j] * &u[i - j]);
            }
            u.push(&s * &d0inv);
        }
        u[want].clone()
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_poly() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl serde::Serialize for RatFun {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("RatFun", 2)?;
        st.serialize_field("num", &self.num)?;
        st.serialize_field("den", &self.den)?;
        st.end()
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFun({self})")
    }
}

impl Add for &RatFun {
    type Output = RatFun;
    fn add(self, o: &RatFun) -> RatFun {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RatFun::new(&self.num + &o.num, self.den.clone());
        }
        RatFun::new(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }
}

impl Sub for &RatFun {
    type Output = RatFun;
    fn sub(self, o: &RatFun) -> RatFun {
        self + &(-o)
    }
}

impl Mul for &RatFun {
    type Output = RatFun;
    fn mul(self, o: &RatFun) -> RatFun {
        if self.is_zero() || o.is_zero() {
            return RatFun::zero();
        }
        RatFun::new(&self.num * &o.num, &self.den * &o.den)
    }
}

impl Div for &RatFun {
    type Output = RatFun;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: &RatFun) -> RatFun {
        self * &o.inv().expect("division by zero rational function")
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl From<Poly> for RatFun {
    fn from(p: Poly) -> Self {
        RatFun::from_poly(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::scalar::{int, q};

    fn rf(n: &[i64], d: &[i64]) -> RatFun {
        RatFun::new(Poly::from_ints(n), Poly::from_ints(d))
    }

    #[test]
    fn reduces() {
        let f = rf(&[-2, 0, 2], &[2, 2]);
        assert_eq!(f, RatFun::from_poly(Poly::from_ints(&[-1, 1])));
    }

    #[test]
    fn laurent_examples() {
        let a = q(3, 2);
        let f = RatFun::new(Poly::one(), Poly::linear(&a));
        assert_eq!(
            f.laurent_expand(3).unwrap(),
            vec![int(0), int(1), a.clone(), &a * &a]
        );
        assert_eq!(rf(&[1, 1], &[0, 1]).laurent_expand(2).unwrap(), vec![int(1), int(1), int(0)]);
        assert_eq!(rf(&[2, 1], &[0, 1]).laurent_expand(2).unwrap(), vec![int(1), int(2), int(0)]);
        assert_eq!(rf(&[0, 0, 1], &[0, 1]).laurent_expand(2), Err(Error::NotExpandable));
    }

    #[test]
    fn eps_examples() {
        assert_eq!(rf(&[0, 2, 1], &[0, 1]).eps_limit().unwrap(), int(2));
        assert_eq!(rf(&[1], &[0, 1]).eps_limit(), Err(Error::Pole(1)));
        assert_eq!(rf(&[0, 0, 0, 3], &[0, 0, 0, 1]).eps_limit().unwrap(), int(3));
    }

    #[test]
    fn eps_series_coefficients() {
        // 1/(1-ε) = 1 + ε + ε² + …
        let f = rf(&[1], &[1, -1]);
        assert_eq!(f.eps_coefficient(4), int(1));
        // (ε+ε²)/ε² = 1/ε + 1
        let g = rf(&[0, 1, 1], &[0, 0, 1]);
        assert_eq!(g.order_at_zero(), Some(-1));
        assert_eq!(g.eps_coefficient(-1), int(1));
        assert_eq!(g.eps_coefficient(0), int(1));
        assert_eq!(g.eps_coefficient(1), int(0));
    }
}
