use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::Poly;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// p = lead · ∏ f^m with f monic irreducible over Q.
#[derive(Clone, Debug, PartialEq)]
pub struct Factorization {
    pub lead: Scalar,
    pub factors: Vec<(Poly, usize)>,
}

impl Factorization {
    pub fn expand(&self) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(self.lead.clone()), |acc, (f, m)| &acc * &f.pow(*m as u32))
    }

    /// True when every factor is linear.
    pub fn splits(&self) -> bool {
        self.factors.iter().all(|(f, _)| f.deg() == 1)
    }

    /// Roots with multiplicities (linear factors only), sorted descending.
    pub fn roots(&self) -> Vec<(Scalar, usize)> {
        let mut r: Vec<(Scalar, usize)> = self
            .factors
            .iter()
            .filter(|(f, _)| f.deg() == 1)
            .map(|(f, m)| (-f.coeff(0), *m))
            .collect();
        r.sort_by(|a, b| b.0.cmp(&a.0));
        r
    }
}

// Tries above this many divisor combinations give up instead of stalling.
const KRONECKER_BUDGET: u64 = 4_000_000;

pub fn factor_over_rationals(p: &Poly) -> Result<Factorization> {
    if p.is_zero() {
        return Err(Error::ZeroInput);
    }
    let lead = p.lead();
    let mut factors = Vec::new();
    for (sqf, mult) in square_free(&p.monic()) {
        let mut rest = sqf;
        // x itself first, then nonzero rational roots
        if rest.coeff(0).is_zero() {
            factors.push((Poly::x(), mult));
            rest = rest.div_rem(&Poly::x()).0;
        }
        for r in rational_roots_squarefree(&rest) {
            let lin = Poly::linear(&r);
            rest = rest.div_exact(&lin).expect("root divides");
            factors.push((lin, mult));
        }
        for f in split_no_linear(&rest)? {
            factors.push((f, mult));
        }
    }
    factors.sort_by(|a, b| {
        (a.0.deg(), a.0.coeffs().to_vec(), a.1).cmp(&(b.0.deg(), b.0.coeffs().to_vec(), b.1))
    });
    Ok(Factorization { lead, factors })
}

/// Yun's square-free decomposition of a monic polynomial: (part, multiplicity).
pub fn square_free(f: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let fp = f.derivative();
    let a0 = Poly::gcd(f, &fp);
    let mut b = f.div_rem(&a0).0;
    let c = fp.div_rem(&a0).0;
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while b.deg() > 0 {
        let a = Poly::gcd(&b, &d);
        b = b.div_rem(&a).0;
        let c = d.div_rem(&a).0;
        d = &c - &b.derivative();
        if a.deg() > 0 {
            out.push((a.monic(), i));
        }
        i += 1;
    }
    out
}

/// Primitive integer coefficient vector proportional to p.
fn primitive_integer(p: &Poly) -> Vec<BigInt> {
    let l = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| c.numer() * (&l / c.denom()))
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    ints.into_iter().map(|v| v / &g).collect()
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![];
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            small.push(d.clone());
            let e = &n / &d;
            if e != d {
                large.push(e);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Distinct nonzero rational roots of a square-free polynomial with p(0) ≠ 0.
fn rational_roots_squarefree(p: &Poly) -> Vec<Scalar> {
    if p.deg() == 0 {
        return vec![];
    }
    let c = primitive_integer(p);
    let a0 = c[0].clone();
    let an = c.last().unwrap().clone();
    let mut roots = Vec::new();
    for num in divisors(&a0) {
        for den in divisors(&an) {
            for s in [1i64, -1] {
                let r = Scalar::from_bigints(&num * s, den.clone());
                if !roots.contains(&r) && p.eval(&r).is_zero() {
                    roots.push(r);
                }
            }
        }
    }
    roots.sort();
    roots
}

/// Split a monic square-free polynomial without rational roots into irreducibles.
fn split_no_linear(p: &Poly) -> Result<Vec<Poly>> {
    let m = p.deg();
    if m <= 3 {
        return Ok(if m == 0 { vec![] } else { vec![p.clone()] });
    }
    for d in 2..=m / 2 {
        if let Some(g) = kronecker_factor(p, d)? {
            let h = p.div_exact(&g).expect("factor divides");
            let mut out = split_no_linear(&g)?;
            out.extend(split_no_linear(&h.monic())?);
            return Ok(out);
        }
    }
    Ok(vec![p.clone()])
}

/// Search for a factor of exact degree d by Kronecker interpolation.
fn kronecker_factor(p: &Poly, d: usize) -> Result<Option<Poly>> {
    let ip = Poly::new(
        primitive_integer(p)
            .into_iter()
            .map(|v| Scalar::from_bigints(v, BigInt::one()))
            .collect(),
    );
    let pts: Vec<Scalar> = (0..=d as i64)
        .map(|k| Scalar::from_int(if k % 2 == 0 { -k / 2 } else { (k + 1) / 2 }))
        .collect();
    let vals: Vec<BigInt> = pts.iter().map(|x| ip.eval(x).numer().clone()).collect();
    let choices: Vec<Vec<BigInt>> = vals
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let ds = divisors(v);
            if i == 0 {
                ds
            } else {
                ds.iter().flat_map(|x| [x.clone(), -x]).collect()
            }
        })
        .collect();
    let total = choices
        .iter()
        .try_fold(1u64, |acc, c| acc.checked_mul(c.len() as u64))
        .unwrap_or(u64::MAX);
    if total > KRONECKER_BUDGET {
        return Err(Error::FactorBudget(p.deg()));
    }
    let mut idx = vec![0usize; choices.len()];
    loop {
        let ys: Vec<Scalar> = idx
            .iter()
            .zip(&choices)
            .map(|(&i, c)| Scalar::from_bigints(c[i].clone(), BigInt::one()))
            .collect();
        let g = lagrange(&pts, &ys);
        if g.deg() == d && g.divides(&ip) {
            return Ok(Some(g.monic()));
        }
        // odometer increment
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(None);
            }
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

pub fn lagrange(xs: &[Scalar], ys: &[Scalar]) -> Poly {
    let mut acc = Poly::zero();
    for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut term = Poly::constant(yi.clone());
        for (j, xj) in xs.iter().enumerate() {
            if i != j {
                term = (&term * &Poly::linear(xj)).scale(&(xi - xj).inv());
            }
        }
        acc = &acc + &term;
    }
    acc
}

/// Small nonnegative integer from a scalar count (used by callers building binomials).
pub fn as_count(s: &Scalar) -> Option<usize> {
    s.is_integer().then(|| s.numer().to_usize()).flatten()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::scalar::{int, q};

    #[test]
    fn double_root_example() {
        let p = Poly::new(vec![q(3, 4), int(3), int(3)]);
        let f = factor_over_rationals(&p).unwrap();
        assert_eq!(f.lead, int(3));
        assert_eq!(f.factors, vec![(Poly::linear(&q(-1, 2)), 2)]);
        assert_eq!(f.expand(), p);
    }

    #[test]
    fn trivial_examples() {
        let f = factor_over_rationals(&Poly::from_ints(&[2, 1])).unwrap();
        assert_eq!(f.factors, vec![(Poly::from_ints(&[2, 1]), 1)]);
        let g = factor_over_rationals(&Poly::from_ints(&[1, 0, 1])).unwrap();
        assert_eq!(g.factors, vec![(Poly::from_ints(&[1, 0, 1]), 1)]);
        assert!(!g.splits());
        assert_eq!(factor_over_rationals(&Poly::zero()), Err(Error::ZeroInput));
    }

    #[test]
    fn quartic_into_quadratics() {
        let a = Poly::from_ints(&[1, 0, 1]);
        let b = Poly::from_ints(&[-2, 0, 1]);
        let f = factor_over_rationals(&(&a * &b)).unwrap();
        assert_eq!(f.factors.len(), 2);
        assert_eq!(f.expand(), &a * &b);
    }

    #[test]
    fn sextic_mixed() {
        let p = &(&Poly::from_ints(&[1, 1, 1]).pow(2) * &Poly::from_roots(&[q(1, 3)])) * &Poly::x();
        let f = factor_over_rationals(&p.scale(&int(-5))).unwrap();
        assert_eq!(f.lead, int(-5));
        assert_eq!(f.factors.len(), 3);
        assert_eq!(f.expand(), p.scale(&int(-5)));
    }
}
