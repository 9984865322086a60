//! Shapovalov-type form B_{λ,b}: R-matrices, the Gram matrix, contravariance and norms
//! of Bethe vectors.

use serde::Serialize;

use crate::bethe::{bethe_vector, enumerate_divisors, Divisor};
use crate::error::{Error, Result};
use crate::exactnum::{ExactMatrix, Matrix, Poly, Scalar};
use crate::monodromy::{
    entry_parity, evaluation_monodromy, op_kron, tensor_monodromy, transfer_pencil, ModuleSpec, MonodromyPencil,
    OpPoly,
};
use crate::superlin::{super_kron, Parity, SuperOperator, SuperSpace, Weight};

/// c·E_ab ⊗ E_cd as ((a, b), (c, d), c)
pub type RTerm = ((usize, usize), (usize, usize), Scalar);

/// R(x) on L_{λ⁽ⁱ⁾} ⊗ L_{λ⁽ʲ⁾} as a list of terms c·E_ab ⊗ E_cd.
#[derive(Clone, Debug, PartialEq)]
pub struct RMatrix {
    pub terms: Vec<RTerm>,
}

pub fn r_matrix(wi: &Weight, wj: &Weight, x: &Scalar) -> Result<RMatrix> {
    let den = &(&wj.l1 + &wi.l2) + x;
    if den.is_zero() {
        return Err(Error::RMatrixPole(format!("R-matrix undefined for {wi}, {wj} at x = {x}")));
    }
    let inv = den.inv();
    let f = |a: Scalar| &a * &inv;
    let terms = vec![
        ((1, 1), (1, 1), Scalar::one()),
        ((2, 2), (2, 2), -f(&(&wi.l1 + &wj.l2) - x)),
        ((1, 1), (2, 2), f(&(&wj.l1 - &wi.l1) + x)),
        ((2, 2), (1, 1), f(&(&wi.l2 - &wj.l2) + x)),
        ((1, 2), (2, 1), -f(wi.total())),
        ((2, 1), (1, 2), f(wj.total())),
    ];
    Ok(RMatrix { terms })
}

impl RMatrix {
    /// Matrix on the two-leg space.
    pub fn on_pair(&self) -> ExactMatrix {
        let left = [Parity::Even, Parity::Odd];
        let mut m = Matrix::zeros(4, 4);
        for ((a, b), (c, d), k) in &self.terms {
            let e2 = SuperOperator::e(*c, *d);
            let t = super_kron(&SuperOperator::e(*a, *b).mat, &left, &e2.mat, e2.parity);
            m.axpy(k, &t);
        }
        m
    }

    /// R^{(i,j)} on a multi-leg space, i < j.
    pub fn embed(&self, space: &SuperSpace, i: usize, j: usize) -> ExactMatrix {
        let mut m = Matrix::zeros(space.dim(), space.dim());
        for ((a, b), (c, d), k) in &self.terms {
            let t = space
                .embed(i, &SuperOperator::e(*a, *b))
                .mat
                .mul(&space.embed(j, &SuperOperator::e(*c, *d)).mat);
            m.axpy(k, &t);
        }
        m
    }
}

/// Δ^op(T_ij) = Σ_r (−1)^{(|i|+|r|)(|r|+|j|)} T_ir ⊗ T_rj.
pub fn opposite_tensor(a: &MonodromyPencil, b: &MonodromyPencil) -> [[OpPoly; 2]; 2] {
    let left = a.space.parities();
    let mk = |i: usize, j: usize| {
        let mut acc = OpPoly::zero(a.dim() * b.dim());
        for r in 1..=2 {
            let t = op_kron(a.entry(i, r), left, b.entry(r, j), entry_parity(r, j));
            let neg = entry_parity(i, r).pair_sign(entry_parity(r, j));
            acc = if neg { acc.sub(&t) } else { acc.add(&t) };
        }
        acc
    };
    [[mk(1, 1), mk(1, 2)], [mk(2, 1), mk(2, 2)]]
}

/// Δ^op(T̂_ij(x))·R(b_i − b_j) = R(b_i − b_j)·Δ(T̂_ij(x)) on L_{λ⁽ⁱ⁾}(b_i) ⊗ L_{λ⁽ʲ⁾}(b_j).
pub fn verify_intertwiner(wi: &Weight, bi: &Scalar, wj: &Weight, bj: &Scalar) -> Result<bool> {
    let r = r_matrix(wi, wj, &(bi - bj))?.on_pair();
    let a = evaluation_monodromy(wi, bi)?;
    let b = evaluation_monodromy(wj, bj)?;
    let delta = a.tensor(&b);
    let op = opposite_tensor(&a, &b);
    Ok((1..=2).all(|i| {
        (1..=2).all(|j| op[i - 1][j - 1].right_mul(&r) == delta.entry(i, j).left_mul(&r))
    }))
}

/// Gram matrix of B_λ = ⊗B_{λ⁽ˢ⁾} with B(v₂,v₂) = −(λ₁+λ₂) and the Koszul sign (−1)^{p(p−1)/2}.
pub fn tensor_shapovalov(weights: &[Weight]) -> ExactMatrix {
    let space = SuperSpace::tensor(&vec![2; weights.len()]);
    let diag = (0..space.dim())
        .map(|b| {
            let mi = space.multi_index(b);
            let mut v = Scalar::one();
            let mut p = 0;
            for (s, &i) in mi.iter().enumerate() {
                if i == 1 {
                    v = v * -weights[s].total();
                    p += 1;
                }
            }
            if (p * (p.max(1) - 1) / 2) % 2 == 1 {
                v = -v;
            }
            v
        })
        .collect();
    Matrix::diagonal(diag)
}

/// R_{λ,b} = →∏_i →∏_{j>i} R^{(i,j)}(b_i − b_j).
pub fn r_product(spec: &ModuleSpec) -> Result<ExactMatrix> {
    let legs = spec.legs();
    let space = SuperSpace::tensor(&vec![2; legs.len()]);
    let mut acc = Matrix::identity(space.dim());
    for i in 0..legs.len() {
        for j in i + 1..legs.len() {
            let r = r_matrix(&legs[i].0, &legs[j].0, &(&legs[i].1 - &legs[j].1))?;
            acc = acc.mul(&r.embed(&space, i, j));
        }
    }
    Ok(acc)
}

/// Gram matrix of B_{λ,b}(w₁, w₂) = B_λ(w₁, R_{λ,b} w₂).
pub fn form_matrix(spec: &ModuleSpec) -> Result<ExactMatrix> {
    Ok(tensor_shapovalov(&spec.weights()).mul(&r_product(spec)?))
}

pub fn bilinear(g: &ExactMatrix, a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(g.mul_vec(b)).fold(Scalar::zero(), |acc, (x, y)| acc + x * &y)
}

/// ι(T_ij) = (−1)^{|i||j|+|i|} T_ji; checks B(Xw₁,w₂) = (−1)^{|X||w₁|}B(w₁,ι(X)w₂) for every
/// coefficient X of every T̂_ij, i.e. Xᵀ·G = S_{|X|}·G·ι(X).
pub fn verify_iota(spec: &ModuleSpec, g: &ExactMatrix) -> bool {
    let m = tensor_monodromy(spec);
    (1..=2).all(|i| {
        (1..=2).all(|j| {
            let p = entry_parity(i, j);
            let s = m.space.parity_sign_matrix(p);
            let pi = Parity::of_index(i);
            let sg = Scalar::sign(pi.pair_sign(Parity::of_index(j)) ^ pi.is_odd());
            let iota = m.entry(j, i).scale(&sg);
            (0..=m.k()).all(|d| {
                let x = m.entry(i, j).coeff(d);
                x.transpose().mul(g) == s.mul(g).mul(&iota.coeff(d))
            })
        })
    })
}

/// Gram·𝒯̂(x) = 𝒯̂(x)ᵀ·Gram coefficientwise.
pub fn verify_transfer_self_adjoint(spec: &ModuleSpec, g: &ExactMatrix) -> bool {
    let t = transfer_pencil(&tensor_monodromy(spec), spec.q1(), spec.q2());
    t.coeffs().iter().all(|c| g.mul(c) == c.transpose().mul(g))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormEntry {
    pub divisor: Poly,
    pub lhs: Scalar,
    /// (q₂/q₁)^l ∏ Wr(φ,ψ)(t_i)/y′(t_i)
    pub rhs: Scalar,
    /// q₂^l/q₁^{2l} ∏ Wr(γ,ψ)(t_i)/y′(t_i)
    pub rhs_alt: Scalar,
    /// (−1)^l ∏ Wr(φ,ψ)(t_i)/y′(t_i), the Q-independent value found by exact computation
    pub rhs_signed: Scalar,
    pub equal: bool,
    pub equal_alt: bool,
    pub equal_signed: bool,
    /// lhs/rhs when rhs ≠ 0
    pub ratio: Option<Scalar>,
    /// repeated roots: not compared
    pub skipped: bool,
}

pub fn norm_check(spec: &ModuleSpec, y: &Divisor) -> Result<NormEntry> {
    let g = form_matrix(spec)?;
    norm_check_with(spec, &g, &tensor_monodromy(spec), y)
}

pub fn norm_check_with(spec: &ModuleSpec, g: &ExactMatrix, m: &MonodromyPencil, y: &Divisor) -> Result<NormEntry> {
    let t = y.root_list();
    let l = t.len() as u32;
    let b = bethe_vector(m, &t)?;
    let lhs = bilinear(g, &b.vector, &b.vector);
    let (phi, psi, gamma) = (spec.phi(), spec.psi(), spec.gamma());
    let yp = y.y.derivative();
    let (q1, q2) = (spec.q1(), spec.q2());
    let skipped = !y.has_simple_roots();
    if skipped {
        return Ok(NormEntry {
            divisor: y.y.clone(),
            lhs,
            rhs: Scalar::zero(),
            rhs_alt: Scalar::zero(),
            rhs_signed: Scalar::zero(),
            equal: false,
            equal_alt: false,
            equal_signed: false,
            ratio: None,
            skipped,
        });
    }
    let w1 = Poly::wronskian(&phi, &psi);
    let w2 = Poly::wronskian(&gamma, &psi);
    let prod = |w: &Poly| t.iter().fold(Scalar::one(), |acc, ti| acc * (w.eval(ti) / yp.eval(ti)));
    let rhs = (q2 / q1).pow(l) * prod(&w1);
    let rhs_alt = q2.pow(l) / q1.pow(2 * l) * prod(&w2);
    let rhs_signed = Scalar::from_int(-1).pow(l) * prod(&w1);
    let ratio = (!rhs.is_zero()).then(|| &lhs / &rhs);
    Ok(NormEntry {
        divisor: y.y.clone(),
        equal: lhs == rhs,
        equal_alt: lhs == rhs_alt,
        equal_signed: lhs == rhs_signed,
        lhs,
        rhs,
        rhs_alt,
        rhs_signed,
        ratio,
        skipped,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormReport {
    pub symmetric: bool,
    pub vacuum_one: bool,
    pub nondegenerate: bool,
    pub iota: bool,
    pub self_adjoint: bool,
    pub norms: Vec<NormEntry>,
    /// B(𝔹̂(y₁), 𝔹̂(y₂)) = 0 for all distinct on-shell pairs
    pub orthogonal: bool,
}

pub fn norm_report(spec: &ModuleSpec) -> Result<NormReport> {
    let g = form_matrix(spec)?;
    let m = tensor_monodromy(spec);
    let gamma = spec.gamma();
    let mut norms = Vec::new();
    let mut vecs = Vec::new();
    for l in 0..=gamma.deg().min(spec.k()) {
        for y in enumerate_divisors(&gamma, l)? {
            norms.push(norm_check_with(spec, &g, &m, &y)?);
            vecs.push(bethe_vector(&m, &y.root_list())?.vector);
        }
    }
    let mut orthogonal = true;
    for i in 0..vecs.len() {
        for j in 0..vecs.len() {
            if i != j && !bilinear(&g, &vecs[i], &vecs[j]).is_zero() {
                orthogonal = false;
            }
        }
    }
    Ok(NormReport {
        symmetric: g.transpose() == g,
        vacuum_one: g.get(0, 0).is_one(),
        nondegenerate: g.rank() == g.rows(),
        iota: verify_iota(spec, &g),
        self_adjoint: verify_transfer_self_adjoint(spec, &g),
        norms,
        orthogonal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, q};

    fn spec(ws: &[(i64, i64)], bs: &[Scalar], q1: i64, q2: i64) -> ModuleSpec {
        ModuleSpec::from_parts(ws, bs, int(q1), int(q2)).unwrap()
    }

    #[test]
    fn fundamental_r_matrix() {
        let w = Weight::ints(1, 0);
        let x = q(2, 3);
        let r = r_matrix(&w, &w, &x).unwrap().on_pair();
        let flip = SuperSpace::qubits(2).flip(0, 1);
        let expect = Matrix::identity(4).scale(&x).add(&flip).scale(&(&x + &int(1)).inv());
        assert_eq!(r, expect);
        assert!(r_matrix(&w, &w, &int(-1)).is_err());
    }

    #[test]
    fn intertwiners() {
        let ws = [Weight::ints(1, 0), Weight::ints(2, 1), Weight::ints(3, 0)];
        for a in &ws {
            for b in &ws {
                assert!(verify_intertwiner(a, &q(1, 3), b, &int(-2)).unwrap());
                assert!(verify_intertwiner(a, &int(0), b, &int(0)).unwrap_or(true));
            }
        }
    }

    #[test]
    fn single_leg_gram() {
        let g = form_matrix(&spec(&[(1, 0)], &[int(0)], 1, 1)).unwrap();
        assert_eq!(g, Matrix::diagonal(vec![int(1), int(-1)]));
    }

    #[test]
    fn e2_form() {
        let s = spec(&[(1, 0), (1, 0)], &[int(0), q(1, 2)], 1, 1);
        let r = norm_report(&s).unwrap();
        assert!(r.symmetric && r.vacuum_one && r.nondegenerate && r.iota && r.self_adjoint && r.orthogonal);
    }

    #[test]
    fn single_leg_norm_by_hand() {
        // B(v₂, v₂) = −λ₁ while (q₂/q₁)·Wr(φ,ψ)(t)/y′(t) = (q₂/q₁)·λ₁
        let s = spec(&[(2, 0)], &[int(0)], 3, 1);
        let y = Divisor::from_roots(vec![(int(-3), 1)]);
        let n = norm_check(&s, &y).unwrap();
        assert_eq!(n.lhs, int(-2));
        assert_eq!(n.rhs, q(2, 3));
        assert_eq!(n.rhs_alt, n.rhs);
        assert!(n.equal_signed && !n.equal);
    }

    #[test]
    fn mixed_weights_form() {
        let s = spec(&[(1, 0), (2, 1), (1, 1)], &[int(0), q(1, 3), int(3)], 2, 1);
        let g = form_matrix(&s).unwrap();
        assert_eq!(g.transpose(), g);
        assert!(verify_iota(&s, &g));
        assert!(verify_transfer_self_adjoint(&s, &g));
        let split = spec(&[(1, 0); 3], &[int(0), q(1, 4), q(-5, 2)], 2, 1);
        for n in norm_report(&split).unwrap().norms {
            assert!(n.skipped || n.equal_signed);
        }
        let bad = g.add(&Matrix::diagonal(vec![int(0), int(0), int(0), int(1), int(0), int(0), int(0), int(0)]));
        assert!(!verify_iota(&s, &bad));
    }
}
