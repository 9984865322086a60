//! Monodromy matrices of Y(gl(1|1)) on evaluation modules, tensor products and the
//! Lax model; RTT verification and twisted transfer matrices.

mod pencil;
mod spec;

pub use pencil::{scalar_times, OpPoly};
pub use spec::{ModuleSpec, SpecFile};

use crate::error::{Error, Result};
use crate::exactnum::{ExactMatrix, Matrix, Poly, RatFun, Scalar};
use crate::superlin::{gl11_on_irrep, super_kron, GlAction, Parity, SuperOperator, SuperSpace, Weight};

/// T̂_ij(x) = ∏(x − b_s)·T_ij(x) as operator polynomials, plus the normalizer.
#[derive(Clone, Debug, PartialEq)]
pub struct MonodromyPencil {
    pub space: SuperSpace,
    /// t[i][j] = T̂_{i+1, j+1}
    pub t: [[OpPoly; 2]; 2],
    pub norm: Poly,
}

/// Parity |i| + |j| of T_ij (1-based).
pub fn entry_parity(i: usize, j: usize) -> Parity {
    Parity::of_index(i).plus(Parity::of_index(j))
}

pub(crate) fn op_kron(a: &OpPoly, left: &[Parity], b: &OpPoly, pb: Parity) -> OpPoly {
    let dim = a.dim() * b.dim();
    if a.is_zero() || b.is_zero() {
        return OpPoly::zero(dim);
    }
    let mut out = vec![Matrix::zeros(dim, dim); a.coeffs().len() + b.coeffs().len() - 1];
    for (i, x) in a.coeffs().iter().enumerate() {
        for (j, y) in b.coeffs().iter().enumerate() {
            if x.is_zero() || y.is_zero() {
                continue;
            }
            out[i + j] = out[i + j].add(&super_kron(x, left, y, pb));
        }
    }
    OpPoly::new(dim, out)
}

impl MonodromyPencil {
    /// T̂_ij with 1-based indices.
    pub fn entry(&self, i: usize, j: usize) -> &OpPoly {
        &self.t[i - 1][j - 1]
    }

    pub fn k(&self) -> usize {
        self.norm.deg()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Coproduct: Δ(T_ij) = Σ_r T_rj ⊗ T_ir.
    pub fn tensor(&self, o: &MonodromyPencil) -> MonodromyPencil {
        let left = self.space.parities();
        let mk = |i: usize, j: usize| {
            let mut acc = OpPoly::zero(self.dim() * o.dim());
            for r in 1..=2 {
                acc = acc.add(&op_kron(self.entry(r, j), left, o.entry(i, r), entry_parity(i, r)));
            }
            acc
        };
        MonodromyPencil {
            space: self.space.concat(&o.space),
            t: [[mk(1, 1), mk(1, 2)], [mk(2, 1), mk(2, 2)]],
            norm: &self.norm * &o.norm,
        }
    }

    /// Σ E_ij ⊗ T̂_ij on ℂ^{1|1} ⊗ M (auxiliary leg first).
    pub fn aux_operator(&self) -> OpPoly {
        let aux = SuperSpace::qubits(1);
        let mut acc = OpPoly::zero(2 * self.dim());
        for i in 1..=2 {
            for j in 1..=2 {
                let e = OpPoly::constant(SuperOperator::e(i, j).mat);
                acc = acc.add(&op_kron(&e, aux.parities(), self.entry(i, j), entry_parity(i, j)));
            }
        }
        acc
    }

    /// Copy with T̂₂₁ negated; used as a negative control for the verifiers.
    pub fn with_flipped_t21(&self) -> MonodromyPencil {
        let mut m = self.clone();
        m.t[1][0] = m.t[1][0].neg();
        m
    }

    /// T^{(1)}_ij: coefficient of x^{-1} in T_ij(x).
    pub fn first_coefficient(&self, i: usize, j: usize) -> ExactMatrix {
        let k = self.k();
        let mut c = self.entry(i, j).coeff(k - 1);
        if i == j {
            c = c.sub(&Matrix::identity(self.dim()).scale(&self.norm.coeff(k - 1)));
        }
        c
    }
}

/// Evaluation module L_λ(b): T̂_ij(x) = (x − b)δ_ij + (−1)^{|j|} e_ji.
pub fn evaluation_monodromy(w: &Weight, b: &Scalar) -> Result<MonodromyPencil> {
    if !w.is_polynomial() {
        return Err(Error::Invalid(format!("weight {w} is not polynomial")));
    }
    if w.is_degenerate() && !(w.l1.is_zero() && w.l2.is_zero()) {
        return Err(Error::Invalid(format!("degenerate weight {w}")));
    }
    let e = gl11_on_irrep(w);
    let d = w.dim();
    let lin = Poly::linear(b);
    let mk = |i: usize, j: usize| {
        let mut p = if i == j { OpPoly::scalar(d, &lin) } else { OpPoly::zero(d) };
        let eji = e[j - 1][i - 1].mat.scale(&Parity::of_index(j).sign());
        p = p.add(&OpPoly::constant(eji));
        p
    };
    Ok(MonodromyPencil {
        space: SuperSpace::tensor(&[d]),
        t: [[mk(1, 1), mk(1, 2)], [mk(2, 1), mk(2, 2)]],
        norm: lin,
    })
}

/// Iterated coproduct over arbitrary legs (degenerate (0,0) legs allowed).
pub fn monodromy_of_legs(legs: &[(Weight, Scalar)]) -> Result<MonodromyPencil> {
    let mut it = legs.iter();
    let (w, b) = it.next().ok_or_else(|| Error::Invalid("no legs".into()))?;
    let mut m = evaluation_monodromy(w, b)?;
    for (w, b) in it {
        m = m.tensor(&evaluation_monodromy(w, b)?);
    }
    Ok(m)
}

pub fn tensor_monodromy(spec: &ModuleSpec) -> MonodromyPencil {
    monodromy_of_legs(spec.legs()).expect("validated spec")
}

/// L(x) = (x − a_n + P^{(0,n)})⋯(x − a_1 + P^{(0,1)}) on (ℂ^{1|1})^{⊗n}.
pub fn lax_monodromy(points: &[Scalar]) -> MonodromyPencil {
    let n = points.len();
    assert!(n > 0, "lax model needs at least one site");
    let space = SuperSpace::qubits(n);
    let dim = space.dim();
    let site = |s: usize| -> [[OpPoly; 2]; 2] {
        let mk = |i: usize, j: usize| {
            let mut p = if i == j {
                OpPoly::scalar(dim, &Poly::linear(&points[s]))
            } else {
                OpPoly::zero(dim)
            };
            let eji = space.embed(s, &SuperOperator::e(j, i)).mat;
            p = p.add(&OpPoly::constant(eji.scale(&Parity::of_index(j).sign())));
            p
        };
        [[mk(1, 1), mk(1, 2)], [mk(2, 1), mk(2, 2)]]
    };
    let mut acc = site(0);
    for s in 1..n {
        acc = super_matmul(&site(s), &acc);
    }
    MonodromyPencil {
        space,
        t: acc,
        norm: Poly::from_roots(points),
    }
}

/// Product of even super matrices Σ E_ij⊗A_ij · Σ E_kl⊗B_kl.
pub fn super_matmul(a: &[[OpPoly; 2]; 2], b: &[[OpPoly; 2]; 2]) -> [[OpPoly; 2]; 2] {
    let dim = a[0][0].dim();
    let mk = |i: usize, l: usize| {
        let mut acc = OpPoly::zero(dim);
        for j in 0..2 {
            let t = a[i][j].mul(&b[j][l]);
            let neg = entry_parity(i + 1, j + 1).pair_sign(entry_parity(j + 1, l + 1));
            acc = if neg { acc.sub(&t) } else { acc.add(&t) };
        }
        acc
    };
    [[mk(0, 0), mk(0, 1)], [mk(1, 0), mk(1, 1)]]
}

/// Location of the first RTT mismatch: indices (1-based) and the coefficient of x₁^a x₂^b.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct RttWitness {
    pub i: usize,
    pub j: usize,
    pub r: usize,
    pub s: usize,
    pub x1_degree: usize,
    pub x2_degree: usize,
}

type Bivariate = Vec<Vec<ExactMatrix>>;

/// (x₁−x₂)[T_ij(x₁),T_rs(x₂)] = (−1)^{|i||r|+|s||i|+|s||r|}(T_rj(x₂)T_is(x₁) − T_rj(x₁)T_is(x₂)),
/// checked coefficientwise for the normalized pencil.
pub fn verify_rtt(m: &MonodromyPencil) -> std::result::Result<(), RttWitness> {
    let dim = m.dim();
    let deg = m.k();
    let zero = Matrix::zeros(dim, dim);
    let entries: Vec<(usize, usize)> = vec![(1, 1), (1, 2), (2, 1), (2, 2)];
    let idx = |i: usize, j: usize| (i - 1) * 2 + (j - 1);
    // prod[e][f][a][b] = coeff_a(T_e) · coeff_b(T_f)
    let mut prod: Vec<Vec<Bivariate>> = Vec::with_capacity(4);
    for &(i, j) in &entries {
        let mut row = Vec::with_capacity(4);
        for &(r, s) in &entries {
            let (a, b) = (m.entry(i, j), m.entry(r, s));
            let mut bi = vec![vec![zero.clone(); deg + 1]; deg + 1];
            for (p, ca) in a.coeffs().iter().enumerate() {
                for (q, cb) in b.coeffs().iter().enumerate() {
                    bi[p][q] = ca.mul(cb);
                }
            }
            row.push(bi);
        }
        prod.push(row);
    }
    let get = |bi: &Bivariate, a: usize, b: usize| -> ExactMatrix {
        bi.get(a).and_then(|r| r.get(b)).cloned().unwrap_or_else(|| zero.clone())
    };
    let transposed = |bi: &Bivariate, a: usize, b: usize| get(bi, b, a);
    for &(i, j) in &entries {
        for &(r, s) in &entries {
            let (pa, pb) = (entry_parity(i, j), entry_parity(r, s));
            let super_sign = pa.pair_sign(pb);
            let (pi, pr, ps) = (Parity::of_index(i), Parity::of_index(r), Parity::of_index(s));
            let rhs_neg = pi.pair_sign(pr) ^ ps.pair_sign(pi) ^ ps.pair_sign(pr);
            let ab = &prod[idx(i, j)][idx(r, s)];
            let ba = &prod[idx(r, s)][idx(i, j)];
            let cd = &prod[idx(r, j)][idx(i, s)];
            // commutator C[a][b], a ↔ x₁, b ↔ x₂
            let comm = |a: usize, b: usize| {
                let x = get(ab, a, b);
                let y = transposed(ba, a, b);
                if super_sign {
                    x.add(&y)
                } else {
                    x.sub(&y)
                }
            };
            for a in 0..=deg + 1 {
                for b in 0..=deg + 1 {
                    let mut lhs = zero.clone();
                    if a > 0 {
                        lhs = lhs.add(&comm(a - 1, b));
                    }
                    if b > 0 {
                        lhs = lhs.sub(&comm(a, b - 1));
                    }
                    let mut rhs = transposed(cd, a, b).sub(&get(cd, a, b));
                    if rhs_neg {
                        rhs = rhs.scale(&Scalar::from_int(-1));
                    }
                    if lhs != rhs {
                        return Err(RttWitness { i, j, r, s, x1_degree: a, x2_degree: b });
                    }
                }
            }
        }
    }
    Ok(())
}

/// 𝒯̂_Q(x) = q₁T̂₁₁(x) − q₂T̂₂₂(x)
pub fn transfer_pencil(m: &MonodromyPencil, q1: &Scalar, q2: &Scalar) -> OpPoly {
    m.entry(1, 1).scale(q1).sub(&m.entry(2, 2).scale(q2))
}

/// [E_rs⊗1 + 1⊗e_rs, T(x)] = 0 on ℂ^{1|1}⊗M for all r, s.
pub fn verify_gl_commutation(m: &MonodromyPencil, act: &GlAction) -> bool {
    let aux = SuperSpace::qubits(1);
    let t = m.aux_operator();
    (1..=2).all(|r| {
        (1..=2).all(|s| {
            let e = SuperOperator::e(r, s);
            let lhs = super_kron(&e.mat, aux.parities(), &Matrix::identity(m.dim()), Parity::Even);
            let rhs = super_kron(&Matrix::identity(2), aux.parities(), &act.e[r - 1][s - 1].mat, e.parity);
            let x = OpPoly::constant(lhs.add(&rhs));
            x.mul(&t).sub(&t.mul(&x)).is_zero()
        })
    })
}

/// True when all coefficients pairwise commute.
pub fn coefficients_commute(p: &OpPoly) -> bool {
    let c = p.coeffs();
    (0..c.len()).all(|i| (i + 1..c.len()).all(|j| c[i].commutator(&c[j]).is_zero()))
}

/// λ̃ = (λ₁+λ₂, 0), b̃ = b + λ₂ and ξ = ∏(x − b_s)/(x − b_s − λ₂⁽ˢ⁾).
/// L(λ, b) ⊗ ℂ_ξ = L(λ̃, b̃), i.e. T on the reduced module equals ξ·T on the original.
pub fn reduce_lambda2(spec: &ModuleSpec) -> (ModuleSpec, RatFun) {
    let legs: Vec<(Weight, Scalar)> = spec
        .legs()
        .iter()
        .map(|(w, b)| (Weight::new(w.total(), Scalar::zero()), b + &w.l2))
        .collect();
    let num = spec.normalizer();
    let den = Poly::from_roots(spec.legs().iter().map(|(w, b)| b + &w.l2).collect::<Vec<_>>().iter());
    let reduced = ModuleSpec::new(legs, spec.q1().clone(), spec.q2().clone()).expect("reduction keeps validity");
    (reduced, RatFun::new(num, den))
}

/// Checks 𝒯_reduced = ξ·𝒯_original as operator-valued rational functions.
pub fn verify_reduction(spec: &ModuleSpec) -> bool {
    let (red, xi) = reduce_lambda2(spec);
    let a = transfer_pencil(&tensor_monodromy(spec), spec.q1(), spec.q2());
    let b = transfer_pencil(&tensor_monodromy(&red), spec.q1(), spec.q2());
    // a/N · ξ = b/Ñ  ⇔  a · num(ξ) · Ñ = b · den(ξ) · N
    let lhs = a.mul_poly(&(xi.num() * &red.normalizer()));
    let rhs = b.mul_poly(&(xi.den() * &spec.normalizer()));
    lhs == rhs
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ModuleFlags {
    pub cyclic: bool,
    pub irreducible: bool,
}

/// Cyclic iff b_j ≠ b_i + λ₂⁽ⁱ⁾ + λ₁⁽ʲ⁾ for i < j; irreducible iff gcd(φ, ψ) = 1.
pub fn cyclicity_and_irreducibility(spec: &ModuleSpec) -> ModuleFlags {
    let legs = spec.legs();
    let mut cyclic = true;
    for i in 0..legs.len() {
        for j in i + 1..legs.len() {
            if legs[j].1 == &(&legs[i].1 + &legs[i].0.l2) + &legs[j].0.l1 {
                cyclic = false;
            }
        }
    }
    let irreducible = Poly::gcd(&spec.phi(), &spec.psi()).is_constant();
    ModuleFlags { cyclic, irreducible }
}

/// Union of the strings {b_s, b_s − 1, …, b_s − λ₁⁽ˢ⁾ + 1}, sorted descending (stable).
pub fn string_points(spec: &ModuleSpec) -> Result<Vec<Scalar>> {
    if spec.legs().iter().any(|(w, _)| !w.l2.is_zero()) {
        return Err(Error::Invalid("string points need λ₂ = 0; reduce first".into()));
    }
    let mut pts = Vec::new();
    for (w, b) in spec.legs() {
        let len = w.l1.to_i64().unwrap();
        for i in 0..len {
            pts.push(b - &Scalar::from_int(i));
        }
    }
    pts.sort_by(|a, b| b.cmp(a));
    Ok(pts)
}

/// String points after λ₂-reduction.
pub fn string_points_reduced(spec: &ModuleSpec) -> Vec<Scalar> {
    string_points(&reduce_lambda2(spec).0).expect("reduced spec")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, q};

    fn spec(ws: &[(i64, i64)], bs: &[Scalar], q1: i64, q2: i64) -> ModuleSpec {
        ModuleSpec::from_parts(ws, bs, int(q1), int(q2)).unwrap()
    }

    #[test]
    fn evaluation_examples() {
        let m = evaluation_monodromy(&Weight::ints(1, 0), &int(0)).unwrap();
        let v1 = vec![int(1), int(0)];
        assert_eq!(m.entry(1, 1).apply(&v1), scalar_times(&Poly::from_ints(&[1, 1]), &v1));
        assert_eq!(m.entry(2, 2).apply(&v1), scalar_times(&Poly::x(), &v1));
        let t = transfer_pencil(&m, &int(2), &int(1));
        let v2 = vec![int(0), int(1)];
        assert_eq!(t.apply(&v2), scalar_times(&Poly::from_ints(&[1, 1]), &v2));
        let triv = evaluation_monodromy(&Weight::ints(0, 0), &int(3)).unwrap();
        assert_eq!(triv.entry(1, 1), &OpPoly::scalar(1, &Poly::linear(&int(3))));
        assert!(triv.entry(1, 2).is_zero());
        assert!(evaluation_monodromy(&Weight::ints(0, 1), &int(0)).is_err());
    }

    #[test]
    fn vacuum_values_are_phi_psi() {
        let s = spec(&[(1, 0), (2, 1)], &[int(0), q(1, 2)], 1, 1);
        let m = tensor_monodromy(&s);
        let mut vac = vec![int(0); m.dim()];
        vac[0] = int(1);
        assert_eq!(m.entry(1, 1).apply(&vac), scalar_times(&s.phi(), &vac));
        assert_eq!(m.entry(2, 2).apply(&vac), scalar_times(&s.psi(), &vac));
    }

    #[test]
    fn rtt_on_small_modules() {
        for w in [(1, 0), (2, 0), (2, 1)] {
            assert!(verify_rtt(&evaluation_monodromy(&Weight::ints(w.0, w.1), &q(1, 3)).unwrap()).is_ok());
        }
        let s = spec(&[(1, 0), (2, 1)], &[int(0), q(1, 2)], 1, 1);
        let m = tensor_monodromy(&s);
        assert!(verify_rtt(&m).is_ok());
        assert!(verify_rtt(&m.with_flipped_t21()).is_err());
    }

    #[test]
    fn coassociative() {
        let legs = [(Weight::ints(1, 0), int(0)), (Weight::ints(2, 0), q(1, 2)), (Weight::ints(1, 1), int(3))];
        let ev: Vec<MonodromyPencil> = legs.iter().map(|(w, b)| evaluation_monodromy(w, b).unwrap()).collect();
        let left = ev[0].tensor(&ev[1]).tensor(&ev[2]);
        let right = ev[0].tensor(&ev[1].tensor(&ev[2]));
        assert_eq!(left, right);
    }

    #[test]
    fn lax_agrees_with_tensor() {
        let pts = [int(0), q(1, 2), int(-2)];
        for n in 1..=3 {
            let s = spec(&vec![(1, 0); n], &pts[..n], 1, 1);
            assert_eq!(lax_monodromy(&pts[..n]), tensor_monodromy(&s));
        }
    }

    #[test]
    fn gl_commutation_and_first_coefficients() {
        let s = spec(&[(1, 0), (2, 1)], &[int(0), q(1, 2)], 1, 1);
        let m = tensor_monodromy(&s);
        let act = s.gl_action();
        assert!(verify_gl_commutation(&m, &act));
        // e_ij = (−1)^{|i|} T^{(1)}_ji
        for i in 1..=2 {
            for j in 1..=2 {
                let t1 = m.first_coefficient(j, i).scale(&Parity::of_index(i).sign());
                assert_eq!(t1, act.e[i - 1][j - 1].mat);
            }
        }
        assert!(!verify_gl_commutation(&m.with_flipped_t21(), &act));
    }

    #[test]
    fn transfer_commutes() {
        let s = spec(&[(1, 0), (1, 0), (2, 0)], &[int(0), q(1, 2), int(3)], 3, 1);
        let t = transfer_pencil(&tensor_monodromy(&s), s.q1(), s.q2());
        assert!(coefficients_commute(&t));
        assert_eq!(t.coeffs().last().unwrap(), &Matrix::identity(8).scale(&int(2)));
    }

    #[test]
    fn reduction() {
        let s = spec(&[(2, 1)], &[int(0)], 2, 1);
        let (r, xi) = reduce_lambda2(&s);
        assert_eq!(r.weights(), vec![Weight::ints(3, 0)]);
        assert_eq!(r.points(), vec![int(1)]);
        assert_eq!(xi, RatFun::new(Poly::x(), Poly::linear(&int(1))));
        assert!(verify_reduction(&s));
        let mixed = spec(&[(1, 0), (2, 1)], &[int(0), q(1, 3)], 2, 1);
        assert!(verify_reduction(&mixed));
        let (_, one) = reduce_lambda2(&spec(&[(1, 0)], &[int(0)], 2, 1));
        assert_eq!(one, RatFun::one());
    }

    #[test]
    fn flags() {
        let f = |b: &[Scalar], ws: &[(i64, i64)]| cyclicity_and_irreducibility(&spec(ws, b, 1, 1));
        assert_eq!(f(&[int(0), q(1, 2)], &[(1, 0), (1, 0)]), ModuleFlags { cyclic: true, irreducible: true });
        assert!(!f(&[int(0), int(1)], &[(1, 0), (1, 0)]).cyclic);
        assert_eq!(
            f(&[int(0), q(1, 2), q(-1, 2)], &[(1, 0), (1, 0), (1, 0)]),
            ModuleFlags { cyclic: true, irreducible: false }
        );
    }

    #[test]
    fn strings() {
        assert_eq!(string_points(&spec(&[(2, 0)], &[int(0)], 1, 2)).unwrap(), vec![int(0), int(-1)]);
        assert_eq!(
            string_points(&spec(&[(1, 0), (1, 0)], &[int(0), q(1, 2)], 1, 1)).unwrap(),
            vec![q(1, 2), int(0)]
        );
        assert_eq!(
            string_points(&spec(&[(2, 0), (1, 0)], &[int(0), int(5)], 1, 1)).unwrap(),
            vec![int(5), int(0), int(-1)]
        );
        assert!(string_points(&spec(&[(2, 1)], &[int(0)], 1, 1)).is_err());
    }
}
