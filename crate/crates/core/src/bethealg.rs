//! Image of the Bethe algebra on weight (or singular weight) subspaces.

use serde::Serialize;

use crate::bethe::{eigenvalue_pencil, enumerate_divisors, generalized_dim_formula, level_subspace, Divisor};
use crate::error::{Error, Result};
use crate::exactnum::{binomial, joint_generalized_eigenspaces, EchelonBasis, ExactMatrix, Matrix, Poly, Scalar};
use crate::monodromy::{
    cyclicity_and_irreducibility, string_points_reduced, tensor_monodromy, transfer_pencil, ModuleSpec, OpPoly,
};

/// Elementary symmetric polynomials σ₀ … σ_n of the given points.
pub fn elementary_symmetric(pts: &[Scalar]) -> Vec<Scalar> {
    let mut e = vec![Scalar::one()];
    for a in pts {
        let mut next = vec![Scalar::zero(); e.len() + 1];
        for (i, v) in e.iter().enumerate() {
            next[i] += v;
            next[i + 1] += &(v * a);
        }
        e = next;
    }
    e
}

/// c(x) = x^n + Σ(−1)^i C_i x^{n−i} = ∏(x − a) over the string points.
pub fn central_polynomial(spec: &ModuleSpec) -> Poly {
    Poly::from_roots(&string_points_reduced(spec))
}

/// B_i (i = 1..n) as coefficients of x^{n−i} in c(x)·𝒯̂(x)/∏(x − b_s).
pub fn b_coefficients(spec: &ModuleSpec, transfer: &OpPoly) -> Vec<ExactMatrix> {
    let n = spec.n();
    let (q, _) = transfer.mul_poly(&central_polynomial(spec)).div_rem_poly(&spec.normalizer());
    (1..=n).map(|i| q.coeff(n - i)).collect()
}

/// Scalar version for an eigenvalue Ê of 𝒯̂.
pub fn b_eigenvalues(spec: &ModuleSpec, e: &Poly) -> Vec<Scalar> {
    let n = spec.n();
    let (q, _) = (&central_polynomial(spec) * e).div_rem(&spec.normalizer());
    (1..=n).map(|i| q.coeff(n - i)).collect()
}

#[derive(Clone, Debug)]
pub struct CoefficientFamily {
    pub level: usize,
    /// ambient coordinates of the subspace basis
    pub basis: Vec<Vec<Scalar>>,
    pub b: Vec<ExactMatrix>,
    pub c: Vec<ExactMatrix>,
}

impl CoefficientFamily {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn generators(&self) -> Vec<ExactMatrix> {
        self.b.iter().chain(self.c.iter()).cloned().collect()
    }

    pub fn commutes(&self) -> bool {
        let g = self.generators();
        (0..g.len()).all(|i| (i + 1..g.len()).all(|j| g[i].commutator(&g[j]).is_zero()))
    }
}

pub fn coefficient_family(spec: &ModuleSpec, level: usize, singular_only: bool) -> Result<CoefficientFamily> {
    if !spec.twisted() && !singular_only {
        return Err(Error::Invalid("trivial twist requires the singular subspace".into()));
    }
    if level > spec.k() {
        return Err(Error::Invalid(format!("level {level} exceeds k = {}", spec.k())));
    }
    let basis = if singular_only == !spec.twisted() {
        level_subspace(spec, level)?
    } else {
        let act = spec.gl_action();
        let w = spec.level_weight(level);
        if singular_only {
            crate::superlin::singular_subspace(&act, &w)?
        } else {
            crate::superlin::weight_space(&act, &w)?
        }
    };
    let m = tensor_monodromy(spec);
    let tr = transfer_pencil(&m, spec.q1(), spec.q2());
    let d = basis.len();
    let restrict = |a: &ExactMatrix| {
        a.restrict_to(&basis)
            .ok_or_else(|| Error::Invalid("subspace is not invariant under the Bethe algebra".into()))
    };
    let b = b_coefficients(spec, &tr).iter().map(restrict).collect::<Result<Vec<_>>>()?;
    let sig = elementary_symmetric(&string_points_reduced(spec));
    let c = (1..=spec.n()).map(|i| Matrix::identity(d).scale(&sig[i])).collect();
    Ok(CoefficientFamily { level, basis, b, c })
}

fn flatten(m: &ExactMatrix) -> Vec<Scalar> {
    m.entries().to_vec()
}

fn unflatten(v: &[Scalar], d: usize) -> ExactMatrix {
    Matrix::from_rows(v.chunks(d).map(|r| r.to_vec()).collect())
}

#[derive(Clone, Debug)]
pub struct AlgebraImage {
    pub d: usize,
    pub basis: Vec<ExactMatrix>,
}

impl AlgebraImage {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, m: &ExactMatrix) -> bool {
        let mut e = EchelonBasis::new(self.d * self.d);
        for b in &self.basis {
            e.insert(&flatten(b));
        }
        e.contains(&flatten(m))
    }

    pub fn is_commutative(&self) -> bool {
        let b = &self.basis;
        (0..b.len()).all(|i| (i + 1..b.len()).all(|j| b[i].commutator(&b[j]).is_zero()))
    }
}

/// Unital algebra generated by `gens` on a d-dimensional space, by span saturation.
pub fn algebra_closure(gens: &[ExactMatrix], d: usize) -> AlgebraImage {
    if d == 0 {
        return AlgebraImage { d, basis: vec![] };
    }
    let mut ech = EchelonBasis::new(d * d);
    let mut basis = vec![Matrix::identity(d)];
    ech.insert(&flatten(&basis[0]));
    let mut frontier = basis.clone();
    // each round raises the word length by one; at most d² rounds
    for _ in 0..d * d {
        let mut next = Vec::new();
        for a in &frontier {
            for g in gens {
                let p = a.mul(g);
                if ech.insert(&flatten(&p)) {
                    next.push(p.clone());
                    basis.push(p);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    AlgebraImage { d, basis }
}

/// Basis of {X : XA = AX for all A in gens}.
pub fn commutant(gens: &[ExactMatrix], d: usize) -> Vec<ExactMatrix> {
    if d == 0 {
        return vec![];
    }
    // unknown X flattened row-major: X[i][j] ↦ i·d + j
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for a in gens {
        for i in 0..d {
            for j in 0..d {
                // (XA − AX)[i][j] = Σ_r X[i][r]A[r][j] − A[i][r]X[r][j]
                let mut row = vec![Scalar::zero(); d * d];
                for r in 0..d {
                    row[i * d + r] += a.get(r, j);
                    row[r * d + j] -= a.get(i, r);
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    if rows.is_empty() {
        return (0..d * d)
            .map(|k| {
                let mut v = vec![Scalar::zero(); d * d];
                v[k] = Scalar::one();
                unflatten(&v, d)
            })
            .collect();
    }
    Matrix::from_rows(rows).kernel().iter().map(|v| unflatten(v, d)).collect()
}

/// The algebra is maximal commutative iff its commutant is itself.
pub fn is_maximal_commutative(alg: &AlgebraImage) -> bool {
    let c = commutant(&alg.basis, alg.d);
    alg.is_commutative() && c.len() == alg.dim() && c.iter().all(|m| alg.contains(m))
}

/// A vector v with alg·v = whole space, searched among a fixed deterministic candidate list.
pub fn find_cyclic_vector(alg: &AlgebraImage) -> Option<Vec<Scalar>> {
    let d = alg.d;
    if d == 0 {
        return Some(vec![]);
    }
    let mut cands: Vec<Vec<Scalar>> = (0..d)
        .map(|i| (0..d).map(|j| Scalar::from_int((i == j) as i64)).collect())
        .collect();
    for s in 1..=3i64 {
        cands.push((0..d).map(|j| Scalar::from_int((j as i64 + 1).pow(s as u32))).collect());
        cands.push((0..d).map(|j| Scalar::from_int(1 + s * j as i64 * j as i64 - j as i64)).collect());
    }
    cands.into_iter().find(|v| generates(alg, v))
}

fn generates(alg: &AlgebraImage, v: &[Scalar]) -> bool {
    let mut e = EchelonBasis::new(alg.d);
    for a in &alg.basis {
        e.insert(&a.mul_vec(v));
    }
    e.len() == alg.d
}

/// Restriction of an algebra to an invariant subspace (basis in the algebra's coordinates).
pub fn restrict_algebra(alg: &AlgebraImage, sub: &[Vec<Scalar>]) -> Option<AlgebraImage> {
    let ms: Vec<ExactMatrix> = alg.basis.iter().map(|a| a.restrict_to(sub)).collect::<Option<_>>()?;
    Some(algebra_closure(&ms, sub.len()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralEntry {
    pub divisor: Poly,
    pub eigenvalue: Poly,
    pub eigenspace_dim: usize,
    pub generalized_dim: usize,
    pub expected_generalized_dim: usize,
    /// the generalized eigenspace is a cyclic module over the algebra
    pub cyclic: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelAnalysis {
    pub level: usize,
    pub subspace_dim: usize,
    pub algebra_dim: usize,
    pub expected_algebra_dim: usize,
    pub commutative: bool,
    pub maximal_commutative: bool,
    pub cyclic_vector: Option<Vec<Scalar>>,
    pub presentation_ok: bool,
    pub spectral: Vec<SpectralEntry>,
    /// Σ generalized dims = subspace dim
    pub generalized_total_ok: bool,
}

impl LevelAnalysis {
    pub fn pass(&self) -> bool {
        self.commutative
            && self.algebra_dim == self.expected_algebra_dim
            && self.maximal_commutative
            && self.cyclic_vector.is_some()
            && self.presentation_ok
            && self.generalized_total_ok
            && self
                .spectral
                .iter()
                .all(|s| s.eigenspace_dim == 1 && s.generalized_dim == s.expected_generalized_dim && s.cyclic)
    }
}

/// Presentation by symmetric functions: with w the roots of γ (those of y first),
/// lead(γ)·∏_{i≤l}(x − w_i − 1)∏_{j>l}(x − w_j) must equal Ê, and
/// γ = lead·(x^D + Σ(−1)^i ε_i x^{D−i}) with ε_i = σ_i(w).
pub fn presentation_check(spec: &ModuleSpec, y: &Divisor) -> Result<bool> {
    let gamma = spec.gamma();
    let lead = gamma.lead();
    let rest = gamma
        .div_exact(&y.y)
        .ok_or_else(|| Error::Invalid("not a divisor".into()))?;
    let comp = crate::bethe::enumerate_divisors(&rest, rest.deg())?
        .pop()
        .map(|d| d.root_list())
        .unwrap_or_default();
    let w: Vec<Scalar> = y.root_list().into_iter().chain(comp.iter().cloned()).collect();
    let shifted: Vec<Scalar> = y.root_list().iter().map(|a| a + &Scalar::one()).collect();
    let target = (&Poly::from_roots(&shifted) * &Poly::from_roots(&comp)).scale(&lead);
    let sig = elementary_symmetric(&w);
    let dd = w.len();
    let rebuilt = Poly::new(
        (0..=dd)
            .map(|j| {
                let i = dd - j;
                let s = if i % 2 == 1 { -&sig[i] } else { sig[i].clone() };
                &s * &lead
            })
            .collect(),
    );
    Ok(target == eigenvalue_pencil(y, spec)? && rebuilt == gamma)
}

/// Full analysis of one level: algebra dimension, maximal commutativity, cyclic vector,
/// presentation, and per-divisor (generalized) eigenspaces.
pub fn analyze_level(spec: &ModuleSpec, l: usize) -> Result<LevelAnalysis> {
    let fam = coefficient_family(spec, l, !spec.twisted())?;
    let d = fam.dim();
    let gens = fam.generators();
    let alg = algebra_closure(&gens, d);
    let k = spec.k();
    let expected_algebra_dim = if spec.twisted() { binomial(k, l) } else { binomial(k - 1, l) };
    let gamma = spec.gamma();
    let divisors = if l <= gamma.deg() { enumerate_divisors(&gamma, l)? } else { vec![] };
    let mut chars = Vec::new();
    let mut eigs = Vec::new();
    let sig = elementary_symmetric(&string_points_reduced(spec));
    for y in &divisors {
        let e = eigenvalue_pencil(y, spec)?;
        let mut ch = b_eigenvalues(spec, &e);
        ch.extend((1..=spec.n()).map(|i| sig[i].clone()));
        chars.push(ch);
        eigs.push(e);
    }
    let spaces = if d == 0 { vec![] } else { joint_generalized_eigenspaces(&gens, &chars)? };
    let mut spectral = Vec::new();
    let mut total = 0;
    let mut presentation_ok = true;
    for (i, y) in divisors.iter().enumerate() {
        presentation_ok &= presentation_check(spec, y)?;
        let (eig, gen) = spaces.get(i).map_or((0, 0), |s| (s.eigen.len(), s.generalized.len()));
        let cyclic = spaces
            .get(i)
            .and_then(|s| restrict_algebra(&alg, &s.generalized))
            .is_some_and(|a| gen > 0 && find_cyclic_vector(&a).is_some());
        total += gen;
        spectral.push(SpectralEntry {
            divisor: y.y.clone(),
            eigenvalue: eigs[i].clone(),
            eigenspace_dim: eig,
            generalized_dim: gen,
            expected_generalized_dim: generalized_dim_formula(&gamma, y)?,
            cyclic,
        });
    }
    Ok(LevelAnalysis {
        level: l,
        subspace_dim: d,
        algebra_dim: alg.dim(),
        expected_algebra_dim,
        commutative: fam.commutes() && alg.is_commutative(),
        maximal_commutative: is_maximal_commutative(&alg),
        cyclic_vector: find_cyclic_vector(&alg),
        presentation_ok,
        spectral,
        generalized_total_ok: total == d,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlgebraReport {
    pub cyclic_module: bool,
    pub levels: Vec<LevelAnalysis>,
}

impl AlgebraReport {
    pub fn pass(&self) -> bool {
        self.cyclic_module && self.levels.iter().all(|l| l.pass())
    }
}

/// All levels with a nonzero subspace. Non-cyclic modules are flagged and not analyzed.
pub fn analyze(spec: &ModuleSpec) -> Result<AlgebraReport> {
    if !cyclicity_and_irreducibility(spec).cyclic {
        return Ok(AlgebraReport { cyclic_module: false, levels: vec![] });
    }
    let mut levels = Vec::new();
    for l in 0..=spec.k() {
        let a = analyze_level(spec, l)?;
        if a.subspace_dim > 0 {
            levels.push(a);
        }
    }
    Ok(AlgebraReport { cyclic_module: true, levels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, q};

    fn spec(ws: &[(i64, i64)], bs: &[Scalar], q1: i64, q2: i64) -> ModuleSpec {
        ModuleSpec::from_parts(ws, bs, int(q1), int(q2)).unwrap()
    }

    #[test]
    fn b1_is_n_untwisted() {
        let s = spec(&[(1, 0), (2, 1)], &[int(0), q(1, 3)], 1, 1);
        let tr = transfer_pencil(&tensor_monodromy(&s), s.q1(), s.q2());
        let b = b_coefficients(&s, &tr);
        assert_eq!(b.len(), 4);
        assert_eq!(b[0], Matrix::identity(s.dim()).scale(&int(4)));
    }

    #[test]
    fn central_values() {
        let s = spec(&[(1, 0), (1, 0)], &[int(3), q(1, 2)], 1, 1);
        let sig = elementary_symmetric(&string_points_reduced(&s));
        assert_eq!(sig[1], q(7, 2));
        assert_eq!(sig[2], q(3, 2));
    }

    #[test]
    fn e2_family() {
        let s = spec(&[(1, 0), (1, 0)], &[int(0), q(1, 2)], 1, 1);
        let f = coefficient_family(&s, 1, true).unwrap();
        assert_eq!(f.dim(), 1);
        assert!(f.commutes());
        assert!(coefficient_family(&s, 1, false).is_err());
        let a = analyze_level(&s, 1).unwrap();
        assert!(a.pass(), "{a:?}");
    }

    #[test]
    fn closure_and_commutant() {
        let n = ExactMatrix::from_int_rows(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let alg = algebra_closure(std::slice::from_ref(&n), 3);
        assert_eq!(alg.dim(), 3);
        assert!(is_maximal_commutative(&alg));
        assert!(find_cyclic_vector(&alg).is_some());
        let id = algebra_closure(&[], 2);
        assert_eq!(id.dim(), 1);
        assert!(!is_maximal_commutative(&id));
    }

    #[test]
    fn dimensions() {
        let generic = spec(&[(1, 0); 3], &[int(0), q(1, 4), int(3)], 1, 1);
        let r = analyze(&generic).unwrap();
        assert!(r.pass(), "{r:?}");
        assert_eq!(r.levels[1].algebra_dim, 2);
        let tw = spec(&[(1, 0), (1, 0)], &[int(0), q(-1, 4)], 3, 1);
        let r = analyze(&tw).unwrap();
        assert!(r.pass());
        assert_eq!(r.levels[1].algebra_dim, 2);
    }

    #[test]
    fn double_root() {
        let s = spec(&[(1, 0); 3], &[int(0), q(1, 2), q(-1, 2)], 1, 1);
        let r = analyze(&s).unwrap();
        assert!(r.pass(), "{r:?}");
        let l1 = &r.levels[1];
        assert_eq!(l1.algebra_dim, 2);
        assert_eq!((l1.spectral[0].eigenspace_dim, l1.spectral[0].generalized_dim), (1, 2));
    }

    #[test]
    fn non_cyclic_flagged() {
        let s = spec(&[(1, 0), (1, 0)], &[int(0), int(1)], 1, 1);
        assert!(!analyze(&s).unwrap().cyclic_module);
    }
}
