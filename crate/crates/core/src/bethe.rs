//! Algebraic Bethe ansatz: divisors of γ, Bethe vectors, eigenvalues and completeness.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{binomial, factor_over_rationals, joint_generalized_eigenspaces, ExactMatrix, Matrix, Poly, RatFun, Scalar};
use crate::monodromy::{tensor_monodromy, transfer_pencil, ModuleSpec, MonodromyPencil, OpPoly};
use crate::superlin::{singular_subspace, weight_space};

#[derive(Clone, Debug, PartialEq)]
pub struct CharPair {
    pub phi: Poly,
    pub psi: Poly,
    pub gamma: Poly,
    pub normalizer: Poly,
}

impl CharPair {
    /// ζ₁ = φ/∏(x − b_s)
    pub fn zeta1(&self) -> RatFun {
        RatFun::new(self.phi.clone(), self.normalizer.clone())
    }

    /// ζ₂ = ψ/∏(x − b_s)
    pub fn zeta2(&self) -> RatFun {
        RatFun::new(self.psi.clone(), self.normalizer.clone())
    }
}

pub fn char_pair(spec: &ModuleSpec) -> CharPair {
    CharPair { phi: spec.phi(), psi: spec.psi(), gamma: spec.gamma(), normalizer: spec.normalizer() }
}

/// Monic y of degree l dividing γ, with its root multiset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divisor {
    pub y: Poly,
    /// (root, multiplicity), roots descending
    pub roots: Vec<(Scalar, usize)>,
}

impl Divisor {
    pub fn from_roots(roots: Vec<(Scalar, usize)>) -> Self {
        let mut roots: Vec<(Scalar, usize)> = roots.into_iter().filter(|(_, m)| *m > 0).collect();
        roots.sort_by(|a, b| b.0.cmp(&a.0));
        let y = roots
            .iter()
            .fold(Poly::one(), |acc, (r, m)| &acc * &Poly::linear(r).pow(*m as u32));
        Divisor { y, roots }
    }

    pub fn degree(&self) -> usize {
        self.y.deg()
    }

    pub fn mult(&self, a: &Scalar) -> usize {
        self.roots.iter().find(|(r, _)| r == a).map_or(0, |(_, m)| *m)
    }

    pub fn has_simple_roots(&self) -> bool {
        self.roots.iter().all(|(_, m)| *m == 1)
    }

    /// Roots repeated by multiplicity, ascending.
    pub fn root_list(&self) -> Vec<Scalar> {
        let mut out: Vec<Scalar> = self
            .roots
            .iter()
            .flat_map(|(r, m)| std::iter::repeat_n(r.clone(), *m))
            .collect();
        out.sort();
        out
    }
}

/// All monic degree-l divisors of a split γ, in lexicographic order of multiplicity vectors.
pub fn enumerate_divisors(gamma: &Poly, l: usize) -> Result<Vec<Divisor>> {
    if gamma.is_zero() {
        return Err(Error::ZeroInput);
    }
    let f = factor_over_rationals(gamma)?;
    if !f.splits() {
        return Err(Error::NotSplit);
    }
    let roots = f.roots();
    let mut out = Vec::new();
    let mut pick = vec![0usize; roots.len()];
    fn rec(i: usize, left: usize, roots: &[(Scalar, usize)], pick: &mut Vec<usize>, out: &mut Vec<Divisor>) {
        if i == roots.len() {
            if left == 0 {
                let r = roots.iter().zip(pick.iter()).map(|((a, _), &m)| (a.clone(), m)).collect();
                out.push(Divisor::from_roots(r));
            }
            return;
        }
        for m in (0..=roots[i].1.min(left)).rev() {
            pick[i] = m;
            rec(i + 1, left - m, roots, pick, out);
        }
        pick[i] = 0;
    }
    rec(0, l, &roots, &mut pick, &mut out);
    Ok(out)
}

/// Multiplicities of γ's roots, for generalized-dimension counts ∏ C(Mult_a γ, Mult_a y).
pub fn generalized_dim_formula(gamma: &Poly, y: &Divisor) -> Result<usize> {
    let f = factor_over_rationals(gamma)?;
    Ok(f.roots().iter().map(|(a, m)| binomial(*m, y.mult(a))).product())
}

#[derive(Clone, Debug, PartialEq)]
pub struct BetheVector {
    /// 𝔹̂ in the module basis
    pub vector: Vec<Scalar>,
    /// Roots in the order used for the product (ascending).
    pub roots: Vec<Scalar>,
    /// Order in ε of the leading term when t_i ↦ t_i + iε was needed; None if evaluated directly.
    pub eps_order: Option<usize>,
}

impl BetheVector {
    pub fn is_zero(&self) -> bool {
        self.vector.iter().all(|c| c.is_zero())
    }

    /// 𝔹 = 𝔹̂ / ∏∏(t_i − b_s + λ₁⁽ˢ⁾), when that product is nonzero.
    pub fn unnormalized(&self, spec: &ModuleSpec) -> Result<Vec<Scalar>> {
        let phi = spec.phi();
        let d = self.roots.iter().fold(Scalar::one(), |acc, t| acc * phi.eval(t));
        if d.is_zero() {
            return Err(Error::BetheUndefined);
        }
        let inv = d.inv();
        Ok(self.vector.iter().map(|c| c * &inv).collect())
    }
}

fn vacuum(dim: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); dim];
    v[0] = Scalar::one();
    v
}

/// Apply an operator polynomial evaluated at a polynomial argument to a polynomial vector.
fn apply_at(p: &OpPoly, arg: &Poly, v: &[Poly]) -> Vec<Poly> {
    let dim = p.dim();
    let mut out = vec![Poly::zero(); dim];
    let mut pw = Poly::one();
    for m in p.coeffs() {
        for i in 0..dim {
            for (j, vj) in v.iter().enumerate() {
                let a = m.get(i, j);
                if a.is_zero() || vj.is_zero() {
                    continue;
                }
                out[i] = &out[i] + &(&pw * &vj.scale(a));
            }
        }
        pw = &pw * arg;
    }
    out
}

/// 𝔹̂_l(t) = ∏_{i<j} (t_j − t_i + 1)^{-1} T̂₁₂(t₁)⋯T̂₁₂(t_l)|0⟩.
///
/// Roots are sorted ascending, so no t_j − t_i + 1 vanishes. With coincident roots the
/// product is taken at t_i + iε and the leading ε-coefficient is returned (order 0 when the
/// plain limit is already nonzero).
pub fn bethe_vector(m: &MonodromyPencil, t: &[Scalar]) -> Result<BetheVector> {
    if t.len() > m.k() {
        return Err(Error::Invalid(format!("level {} exceeds the number of factors {}", t.len(), m.k())));
    }
    let mut roots = t.to_vec();
    roots.sort();
    let distinct = roots.windows(2).all(|w| w[0] != w[1]);
    let t12 = m.entry(1, 2);
    let dim = m.dim();
    let pref = |roots: &[Scalar]| {
        let mut d = Scalar::one();
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                d = d * (&(&roots[j] - &roots[i]) + &Scalar::one());
            }
        }
        d.inv()
    };
    if distinct {
        let mut v = vacuum(dim);
        for ti in roots.iter().rev() {
            v = t12.eval(ti).mul_vec(&v);
        }
        let c = pref(&roots);
        let vector = v.iter().map(|a| a * &c).collect();
        return Ok(BetheVector { vector, roots, eps_order: None });
    }
    // polynomial vector in ε
    let mut v: Vec<Poly> = vacuum(dim).into_iter().map(Poly::constant).collect();
    for (i, ti) in roots.iter().enumerate().rev() {
        let arg = Poly::new(vec![ti.clone(), Scalar::from_int(i as i64 + 1)]);
        v = apply_at(t12, &arg, &v);
    }
    let Some(order) = v.iter().filter_map(|p| p.valuation()).min() else {
        return Ok(BetheVector { vector: vec![Scalar::zero(); dim], roots, eps_order: None });
    };
    // the prefactor is regular and nonzero at ε = 0 for ascending roots
    let c = pref(&roots);
    let vector = v.iter().map(|p| &p.coeff(order) * &c).collect();
    Ok(BetheVector { vector, roots, eps_order: Some(order) })
}

/// Ê(x) = y(x − 1)·γ(x)/y(x).
pub fn eigenvalue_pencil(y: &Divisor, spec: &ModuleSpec) -> Result<Poly> {
    let gamma = spec.gamma();
    let q = gamma
        .div_exact(&y.y)
        .ok_or_else(|| Error::Invalid(format!("{} does not divide γ = {}", y.y, gamma)))?;
    Ok(&y.y.bracket(1) * &q)
}

/// Checks y(x)·𝒯̂(x)𝔹̂ = y(x − 1)γ(x)𝔹̂; on failure returns the first mismatching x-degree.
pub fn check_eigen_equation(
    transfer: &OpPoly,
    gamma: &Poly,
    t: &[Scalar],
    v: &[Scalar],
) -> std::result::Result<(), usize> {
    let y = Poly::from_roots(t);
    let lhs: Vec<Poly> = transfer.apply(v).iter().map(|p| p * &y).collect();
    let e = &y.bracket(1) * gamma;
    let rhs: Vec<Poly> = v.iter().map(|a| e.scale(a)).collect();
    let deg = lhs.iter().chain(rhs.iter()).map(|p| p.deg()).max().unwrap_or(0);
    for d in 0..=deg {
        if lhs.iter().zip(&rhs).any(|(a, b)| a.coeff(d) != b.coeff(d)) {
            return Err(d);
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OnShell {
    pub pass: bool,
    pub nonzero: bool,
    pub first_failing_degree: Option<usize>,
}

/// 𝒯̂_Q(x)·𝔹̂ = Ê(x)·𝔹̂ for the roots t (y = ∏(x − t_i)).
pub fn verify_on_shell(spec: &ModuleSpec, t: &[Scalar]) -> Result<OnShell> {
    let m = tensor_monodromy(spec);
    verify_on_shell_with(&m, spec, t)
}

pub fn verify_on_shell_with(m: &MonodromyPencil, spec: &ModuleSpec, t: &[Scalar]) -> Result<OnShell> {
    let b = bethe_vector(m, t)?;
    let tr = transfer_pencil(m, spec.q1(), spec.q2());
    let res = check_eigen_equation(&tr, &spec.gamma(), t, &b.vector);
    Ok(OnShell { pass: res.is_ok(), nonzero: !b.is_zero(), first_failing_degree: res.err() })
}

/// Weight space of level l, or its singular part when the twist is trivial.
pub fn level_subspace(spec: &ModuleSpec, l: usize) -> Result<Vec<Vec<Scalar>>> {
    let act = spec.gl_action();
    let w = spec.level_weight(l);
    if spec.twisted() {
        weight_space(&act, &w)
    } else {
        singular_subspace(&act, &w)
    }
}

/// Coefficients of 𝒯̂ (x⁰ … x^k) restricted to an invariant subspace.
pub fn restricted_transfer(transfer: &OpPoly, k: usize, basis: &[Vec<Scalar>]) -> Result<Vec<ExactMatrix>> {
    (0..=k)
        .map(|d| {
            transfer
                .coeff(d)
                .restrict_to(basis)
                .ok_or_else(|| Error::Invalid("subspace is not invariant under the transfer matrix".into()))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DivisorReport {
    pub divisor: Poly,
    pub eigenvalue: Poly,
    pub onshell: bool,
    pub nonzero: bool,
    pub eps_order: Option<usize>,
    pub eigenspace_dim: usize,
    pub generalized_dim: usize,
    pub expected_generalized_dim: usize,
    pub bethe_in_eigenspace: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelReport {
    pub level: usize,
    pub subspace_dim: usize,
    pub divisors: Vec<DivisorReport>,
    /// every eigenvector is a multiple of an on-shell Bethe vector
    pub complete: bool,
    pub diagonalizable: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompletenessReport {
    pub singular_only: bool,
    pub levels: Vec<LevelReport>,
    pub complete: bool,
}

fn in_span(basis: &[Vec<Scalar>], v: &[Scalar]) -> bool {
    let mut e = crate::exactnum::EchelonBasis::new(v.len());
    for b in basis {
        e.insert(b);
    }
    e.contains(v)
}

/// Per level: divisors, Bethe vectors, and the joint spectral decomposition of the transfer
/// family on the level subspace. Eigenvalues not coming from a divisor show up as a deficit
/// of the generalized dimensions.
pub fn completeness_report(spec: &ModuleSpec) -> Result<CompletenessReport> {
    let m = tensor_monodromy(spec);
    let tr = transfer_pencil(&m, spec.q1(), spec.q2());
    let gamma = spec.gamma();
    let k = spec.k();
    let mut levels = Vec::new();
    for l in 0..=k {
        let basis = level_subspace(spec, l)?;
        let divisors = if l <= gamma.deg() { enumerate_divisors(&gamma, l)? } else { vec![] };
        if basis.is_empty() && divisors.is_empty() {
            continue;
        }
        let ops = restricted_transfer(&tr, k, &basis)?;
        let mut chars = Vec::new();
        let mut eigenvalues = Vec::new();
        for y in &divisors {
            let e = eigenvalue_pencil(y, spec)?;
            chars.push((0..=k).map(|d| e.coeff(d)).collect::<Vec<_>>());
            eigenvalues.push(e);
        }
        let spaces = if basis.is_empty() {
            vec![]
        } else {
            joint_generalized_eigenspaces(&ops, &chars)?
        };
        let w = Matrix::from_cols(&basis, spec.dim());
        let mut reports = Vec::new();
        let mut total_gen = 0;
        let mut complete = true;
        let mut diagonalizable = true;
        for (idx, y) in divisors.iter().enumerate() {
            let roots = y.root_list();
            let b = bethe_vector(&m, &roots)?;
            let check = check_eigen_equation(&tr, &gamma, &roots, &b.vector);
            let (eig, gen, inside) = match spaces.get(idx) {
                Some(s) => {
                    let amb: Vec<Vec<Scalar>> = s.eigen.iter().map(|c| w.mul_vec(c)).collect();
                    (s.eigen.len(), s.generalized.len(), !b.is_zero() && in_span(&amb, &b.vector))
                }
                None => (0, 0, false),
            };
            total_gen += gen;
            complete &= check.is_ok() && !b.is_zero() && eig == 1 && inside;
            diagonalizable &= eig == gen;
            reports.push(DivisorReport {
                divisor: y.y.clone(),
                eigenvalue: eigenvalues[idx].clone(),
                onshell: check.is_ok(),
                nonzero: !b.is_zero(),
                eps_order: b.eps_order,
                eigenspace_dim: eig,
                generalized_dim: gen,
                expected_generalized_dim: generalized_dim_formula(&gamma, y)?,
                bethe_in_eigenspace: inside,
            });
        }
        // generalized spaces of distinct characters are independent; full coverage rules out other eigenvalues
        complete &= total_gen == basis.len();
        diagonalizable &= total_gen == basis.len();
        levels.push(LevelReport { level: l, subspace_dim: basis.len(), divisors: reports, complete, diagonalizable });
    }
    let complete = levels.iter().all(|l| l.complete);
    Ok(CompletenessReport { singular_only: !spec.twisted(), levels, complete })
}
