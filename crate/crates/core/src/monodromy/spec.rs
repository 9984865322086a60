use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{Poly, Scalar};
use crate::superlin::{GlAction, Weight};

/// Physical chain: evaluation modules L_{λ⁽ˢ⁾}(b_s) and a diagonal twist Q = diag(q₁, q₂).
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleSpec {
    legs: Vec<(Weight, Scalar)>,
    q1: Scalar,
    q2: Scalar,
}

/// On-disk form: weights = [[l1, l2], …], points = ["p/q", …], twist = ["q1", "q2"].
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub weights: Vec<[i64; 2]>,
    pub points: Vec<String>,
    pub twist: [String; 2],
}

impl ModuleSpec {
    pub fn new(legs: Vec<(Weight, Scalar)>, q1: Scalar, q2: Scalar) -> Result<Self> {
        if legs.is_empty() {
            return Err(Error::Invalid("at least one tensor factor is required".into()));
        }
        for (s, (w, _)) in legs.iter().enumerate() {
            if !w.is_polynomial() {
                return Err(Error::Invalid(format!("weight {w} of factor {} is not polynomial", s + 1)));
            }
            if w.is_degenerate() {
                return Err(Error::Invalid(format!("weight {w} of factor {} is degenerate", s + 1)));
            }
        }
        if q1.is_zero() || q2.is_zero() {
            return Err(Error::Invalid("twist entries must be nonzero".into()));
        }
        let spec = ModuleSpec { legs, q1, q2 };
        if spec.q1 == spec.q2 && spec.n() == 0 {
            return Err(Error::Invalid("q1 = q2 with |λ| = 0 is not supported".into()));
        }
        Ok(spec)
    }

    /// Convenience constructor from integer weights and rational points.
    pub fn from_parts(weights: &[(i64, i64)], points: &[Scalar], q1: Scalar, q2: Scalar) -> Result<Self> {
        if weights.len() != points.len() {
            return Err(Error::Invalid("weights and points differ in length".into()));
        }
        let legs = weights
            .iter()
            .zip(points)
            .map(|(&(a, b), p)| (Weight::ints(a, b), p.clone()))
            .collect();
        ModuleSpec::new(legs, q1, q2)
    }

    pub fn from_file(f: &SpecFile) -> Result<Self> {
        let points = f
            .points
            .iter()
            .map(|s| s.parse::<Scalar>())
            .collect::<Result<Vec<_>>>()?;
        let ws: Vec<(i64, i64)> = f.weights.iter().map(|w| (w[0], w[1])).collect();
        ModuleSpec::from_parts(&ws, &points, f.twist[0].parse()?, f.twist[1].parse()?)
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        let f: SpecFile = toml::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        ModuleSpec::from_file(&f)
    }

    pub fn to_file(&self) -> SpecFile {
        SpecFile {
            weights: self
                .legs
                .iter()
                .map(|(w, _)| [w.l1.to_i64().unwrap(), w.l2.to_i64().unwrap()])
                .collect(),
            points: self.legs.iter().map(|(_, b)| b.to_string()).collect(),
            twist: [self.q1.to_string(), self.q2.to_string()],
        }
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(&self.to_file()).expect("spec serializes")
    }

    pub fn legs(&self) -> &[(Weight, Scalar)] {
        &self.legs
    }

    pub fn weights(&self) -> Vec<Weight> {
        self.legs.iter().map(|(w, _)| w.clone()).collect()
    }

    pub fn points(&self) -> Vec<Scalar> {
        self.legs.iter().map(|(_, b)| b.clone()).collect()
    }

    pub fn q1(&self) -> &Scalar {
        &self.q1
    }

    pub fn q2(&self) -> &Scalar {
        &self.q2
    }

    pub fn twisted(&self) -> bool {
        self.q1 != self.q2
    }

    pub fn with_twist(&self, q1: Scalar, q2: Scalar) -> Result<Self> {
        ModuleSpec::new(self.legs.clone(), q1, q2)
    }

    pub fn k(&self) -> usize {
        self.legs.len()
    }

    /// |λ| = Σ (λ₁ + λ₂)
    pub fn n(&self) -> usize {
        self.legs
            .iter()
            .map(|(w, _)| w.total().to_i64().unwrap() as usize)
            .sum()
    }

    pub fn dim(&self) -> usize {
        1 << self.k()
    }

    /// ∏ (x − b_s)
    pub fn normalizer(&self) -> Poly {
        Poly::from_roots(self.legs.iter().map(|(_, b)| b))
    }

    /// φ = ∏ (x − b_s + λ₁⁽ˢ⁾)
    pub fn phi(&self) -> Poly {
        self.legs
            .iter()
            .fold(Poly::one(), |acc, (w, b)| &acc * &Poly::linear(&(b - &w.l1)))
    }

    /// ψ = ∏ (x − b_s − λ₂⁽ˢ⁾)
    pub fn psi(&self) -> Poly {
        self.legs
            .iter()
            .fold(Poly::one(), |acc, (w, b)| &acc * &Poly::linear(&(b + &w.l2)))
    }

    /// γ_Q = q₁φ − q₂ψ
    pub fn gamma(&self) -> Poly {
        &self.phi().scale(&self.q1) - &self.psi().scale(&self.q2)
    }

    pub fn gl_action(&self) -> GlAction {
        GlAction::on_tensor(&self.weights())
    }

    /// Weight of level l: (Σλ₁ − l, Σλ₂ + l).
    pub fn level_weight(&self, l: usize) -> Weight {
        let (a, b) = self.legs.iter().fold((Scalar::zero(), Scalar::zero()), |(a, b), (w, _)| {
            (a + &w.l1, b + &w.l2)
        });
        let l = Scalar::from_int(l as i64);
        Weight::new(a - &l, b + &l)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, q};

    #[test]
    fn parse_roundtrip() {
        let text = "weights = [[1, 0], [1, 0]]\npoints = [\"0\", \"1/2\"]\ntwist = [\"1\", \"1\"]\n";
        let s = ModuleSpec::from_toml_str(text).unwrap();
        assert_eq!(s.k(), 2);
        assert_eq!(s.n(), 2);
        assert_eq!(s.points(), vec![int(0), q(1, 2)]);
        assert_eq!(ModuleSpec::from_toml_str(&s.to_toml_string()).unwrap(), s);
    }

    #[test]
    fn rejects_bad_input() {
        let zero_twist = "weights = [[1, 0]]\npoints = [\"0\"]\ntwist = [\"0\", \"1\"]\n";
        assert!(ModuleSpec::from_toml_str(zero_twist).is_err());
        let degenerate = "weights = [[0, 0]]\npoints = [\"0\"]\ntwist = [\"2\", \"1\"]\n";
        assert!(ModuleSpec::from_toml_str(degenerate).is_err());
        let nonpoly = "weights = [[0, 1]]\npoints = [\"0\"]\ntwist = [\"2\", \"1\"]\n";
        assert!(ModuleSpec::from_toml_str(nonpoly).is_err());
        assert!(ModuleSpec::from_toml_str("weights = [[1, 0]]").is_err());
    }

    #[test]
    fn char_polys() {
        let s = ModuleSpec::from_parts(&[(1, 0), (1, 0)], &[int(0), q(1, 2)], int(1), int(1)).unwrap();
        assert_eq!(s.gamma(), Poly::new(vec![q(1, 2), int(2)]));
        let e1 = ModuleSpec::from_parts(&[(1, 0)], &[int(0)], int(2), int(1)).unwrap();
        assert_eq!(e1.gamma(), Poly::from_ints(&[2, 1]));
    }
}
