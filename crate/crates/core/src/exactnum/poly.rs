use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::scalar::Scalar;

/// Univariate polynomial over the rationals, coefficients lowest degree first.
/// The zero polynomial has an empty coefficient list.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    c: Vec<Scalar>,
}

impl Poly {
    pub fn new(mut c: Vec<Scalar>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&v| Scalar::from_int(v)).collect())
    }

    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Scalar::one())
    }

    pub fn constant(a: Scalar) -> Self {
        Poly::new(vec![a])
    }

    pub fn x() -> Self {
        Poly::new(vec![Scalar::zero(), Scalar::one()])
    }

    /// x - a
    pub fn linear(a: &Scalar) -> Self {
        Poly::new(vec![-a, Scalar::one()])
    }

    pub fn monomial(a: Scalar, d: usize) -> Self {
        let mut c = vec![Scalar::zero(); d + 1];
        c[d] = a;
        Poly::new(c)
    }

    /// ∏ (x - r)
    pub fn from_roots<'a>(roots: impl IntoIterator<Item = &'a Scalar>) -> Self {
        roots
            .into_iter()
            .fold(Poly::one(), |acc, r| &acc * &Poly::linear(r))
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.c.get(i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    /// Degree; the zero polynomial reports None.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lead(&self) -> Scalar {
        self.c.last().cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead().inv();
        self.scale(&l)
    }

    pub fn scale(&self, a: &Scalar) -> Self {
        if a.is_zero() {
            return Poly::zero();
        }
        Poly::new(self.c.iter().map(|v| v * a).collect())
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for v in self.c.iter().rev() {
            acc = &acc * x + v;
        }
        acc
    }

    /// Evaluate at a polynomial argument.
    pub fn compose(&self, g: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for v in self.c.iter().rev() {
            acc = &(&acc * g) + &Poly::constant(v.clone());
        }
        acc
    }

    /// p(x + a)
    pub fn shift(&self, a: &Scalar) -> Poly {
        if a.is_zero() {
            return self.clone();
        }
        self.compose(&Poly::new(vec![a.clone(), Scalar::one()]))
    }

    /// p^{[m]}(x) = p(x - m)
    pub fn bracket(&self, m: i64) -> Poly {
        self.shift(&Scalar::from_int(-m))
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, v)| v * Scalar::from_int(i as i64))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Poly::one(), |acc, _| &acc * self)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.deg();
        if self.degree().is_none_or(|s| s < dd) {
            return (Poly::zero(), self.clone());
        }
        let inv = d.lead().inv();
        let mut r = self.c.clone();
        let mut qc = vec![Scalar::zero(); r.len() - dd];
        for i in (0..qc.len()).rev() {
            let f = &r[i + dd] * &inv;
            if f.is_zero() {
                continue;
            }
            for (j, dv) in d.c.iter().enumerate() {
                r[i + j] -= &(&f * dv);
            }
            qc[i] = f;
        }
        r.truncate(dd);
        (Poly::new(qc), Poly::new(r))
    }

    /// Exact quotient when `d` divides `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, p: &Poly) -> bool {
        !self.is_zero() && p.div_rem(self).1.is_zero()
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Order of vanishing at 0; None for the zero polynomial.
    pub fn valuation(&self) -> Option<usize> {
        self.c.iter().position(|v| !v.is_zero())
    }

    /// Wronskian θ₁θ₂′ − θ₁′θ₂.
    pub fn wronskian(a: &Poly, b: &Poly) -> Poly {
        &(a * &b.derivative()) - &(&a.derivative() * b)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.c.iter().map(|v| v.to_string()).collect()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, v) in self.c.iter().enumerate().rev() {
            if v.is_zero() {
                continue;
            }
            let neg = v.is_negative();
            let a = v.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let coef = if a.is_one() && i > 0 {
                String::new()
            } else if i > 0 {
                format!("{a}*")
            } else {
                a.to_string()
            };
            match i {
                0 => write!(f, "{coef}")?,
                1 => write!(f, "{coef}x")?,
                _ => write!(f, "{coef}x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Scalar::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += &(a * b);
            }
        }
        Poly::new(c)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.c.iter().map(|v| -v).collect())
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, o: Poly) -> Poly {
        &self + &o
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, o: Poly) -> Poly {
        &self - &o
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, o: Poly) -> Poly {
        &self * &o
    }
}

impl serde::Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::scalar::{int, q};

    #[test]
    fn division_and_gcd() {
        let a = Poly::from_roots(&[int(1), int(2), q(1, 2)]);
        let b = Poly::from_roots(&[int(2), int(3)]);
        assert_eq!(Poly::gcd(&a, &b), Poly::linear(&int(2)));
        let (qq, r) = a.div_rem(&b);
        assert_eq!(&(&qq * &b) + &r, a);
    }

    #[test]
    fn shift_and_display() {
        let p = Poly::from_ints(&[1, 2, 1]);
        assert_eq!(p.bracket(1), Poly::from_ints(&[0, 0, 1]));
        assert_eq!(Poly::new(vec![q(1, 2), int(2)]).to_string(), "2*x + 1/2");
        assert_eq!(Poly::from_ints(&[3, 0, -1]).to_string(), "-x^2 + 3");
    }

    #[test]
    fn wronskian_linear() {
        let w = Poly::wronskian(&Poly::from_ints(&[1, 1]), &Poly::x());
        assert_eq!(w, Poly::from_ints(&[1]));
    }
}
