//! Super vector spaces built from copies of ℂ^{1|1} (and one-dimensional even legs).

use std::fmt;

use crate::error::{Error, Result};
use crate::exactnum::{ExactMatrix, Matrix, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_odd(odd: bool) -> Self {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    /// Parity of the basis vector v_i of ℂ^{1|1}, i ∈ {1, 2}.
    pub fn of_index(i: usize) -> Self {
        Parity::from_odd(i == 2)
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn sign(self) -> Scalar {
        Scalar::sign(self.is_odd())
    }

    pub fn plus(self, o: Parity) -> Parity {
        Parity::from_odd(self.is_odd() ^ o.is_odd())
    }

    /// (−1)^{self·o}
    pub fn pair_sign(self, o: Parity) -> bool {
        self.is_odd() && o.is_odd()
    }
}

/// gl(1|1) weight (λ₁, λ₂).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct Weight {
    pub l1: Scalar,
    pub l2: Scalar,
}

impl Weight {
    pub fn new(l1: Scalar, l2: Scalar) -> Self {
        Weight { l1, l2 }
    }

    pub fn ints(l1: i64, l2: i64) -> Self {
        Weight::new(Scalar::from_int(l1), Scalar::from_int(l2))
    }

    pub fn total(&self) -> Scalar {
        &self.l1 + &self.l2
    }

    pub fn is_degenerate(&self) -> bool {
        self.total().is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        let nonneg_int = |s: &Scalar| s.is_integer() && !s.is_negative();
        nonneg_int(&self.l1)
            && nonneg_int(&self.l2)
            && (!self.l1.is_zero() || self.l2.is_zero())
    }

    /// Dimension of the irreducible L_λ.
    pub fn dim(&self) -> usize {
        if self.is_degenerate() {
            1
        } else {
            2
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.l1, self.l2)
    }
}

/// Tensor product of legs, each of dimension 1 (even) or 2 (ℂ^{1|1}: v₁ even, v₂ odd).
/// The basis is lexicographic in multi-indices, first leg most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperSpace {
    legs: Vec<usize>,
    parities: Vec<Parity>,
}

impl SuperSpace {
    pub fn tensor(legs: &[usize]) -> Self {
        assert!(legs.iter().all(|&d| d == 1 || d == 2), "legs must have dimension 1 or 2");
        let dim: usize = legs.iter().product();
        let mut s = SuperSpace {
            legs: legs.to_vec(),
            parities: Vec::with_capacity(dim),
        };
        for b in 0..dim {
            let odd = s.multi_index(b).iter().filter(|&&i| i == 1).count() % 2 == 1;
            s.parities.push(Parity::from_odd(odd));
        }
        s
    }

    pub fn qubits(n: usize) -> Self {
        SuperSpace::tensor(&vec![2; n])
    }

    pub fn dim(&self) -> usize {
        self.parities.len()
    }

    pub fn legs(&self) -> &[usize] {
        &self.legs
    }

    pub fn parity(&self, b: usize) -> Parity {
        self.parities[b]
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parities
    }

    /// Leg indices (0 for v₁, 1 for v₂) of a basis vector.
    pub fn multi_index(&self, mut b: usize) -> Vec<usize> {
        let mut out = vec![0; self.legs.len()];
        for (p, &d) in self.legs.iter().enumerate().rev() {
            out[p] = b % d;
            b /= d;
        }
        out
    }

    pub fn index_of(&self, mi: &[usize]) -> usize {
        mi.iter().zip(&self.legs).fold(0, |acc, (&i, &d)| acc * d + i)
    }

    /// Basis label such as "1221".
    pub fn label(&self, b: usize) -> String {
        self.multi_index(b).iter().map(|i| if *i == 0 { '1' } else { '2' }).collect()
    }

    /// Place `op` (acting on leg `leg`) into the full space with the Koszul sign
    /// (−1)^{|op|·(|v₁|+…+|v_{leg−1}|)}.
    pub fn embed(&self, leg: usize, op: &SuperOperator) -> SuperOperator {
        let d = self.legs[leg];
        assert_eq!(op.mat.rows(), d, "leg operator has wrong size");
        let mut m = Matrix::zeros(self.dim(), self.dim());
        for col in 0..self.dim() {
            let mi = self.multi_index(col);
            let before = mi[..leg].iter().filter(|&&i| i == 1).count() % 2 == 1;
            let neg = op.parity.is_odd() && before;
            for r in 0..d {
                let a = op.mat.get(r, mi[leg]);
                if a.is_zero() {
                    continue;
                }
                let mut mr = mi.clone();
                mr[leg] = r;
                let v = if neg { -a } else { a.clone() };
                m.set(self.index_of(&mr), col, v);
            }
        }
        SuperOperator { mat: m, parity: op.parity }
    }

    pub fn supertrace(&self, op: &ExactMatrix) -> Scalar {
        let mut acc = Scalar::zero();
        for b in 0..self.dim() {
            let v = op.get(b, b);
            if self.parity(b).is_odd() {
                acc -= v;
            } else {
                acc += v;
            }
        }
        acc
    }

    /// E_ij ↦ (−1)^{|i||j|+|i|} E_ji.
    pub fn supertranspose(&self, op: &ExactMatrix) -> ExactMatrix {
        let n = self.dim();
        let mut t = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let a = op.get(i, j);
                if a.is_zero() {
                    continue;
                }
                let (pi, pj) = (self.parity(i), self.parity(j));
                let neg = pi.pair_sign(pj) ^ pi.is_odd();
                t.set(j, i, if neg { -a } else { a.clone() });
            }
        }
        t
    }

    /// Diagonal sign matrix (−1)^{|p|·|b|} on basis vectors b.
    pub fn parity_sign_matrix(&self, p: Parity) -> ExactMatrix {
        Matrix::diagonal(
            (0..self.dim())
                .map(|b| Scalar::sign(p.pair_sign(self.parity(b))))
                .collect(),
        )
    }

    /// Graded flip of legs i and j (both two-dimensional): v⊗w ↦ (−1)^{|v||w|} w⊗v,
    /// with the sign for passing the legs in between.
    pub fn flip(&self, i: usize, j: usize) -> ExactMatrix {
        assert!(i < j && self.legs[i] == 2 && self.legs[j] == 2);
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for col in 0..n {
            let mi = self.multi_index(col);
            let (a, b) = (mi[i] == 1, mi[j] == 1);
            let mid = mi[i + 1..j].iter().filter(|&&x| x == 1).count() % 2 == 1;
            // moving v past the middle and w; then w past the middle
            let neg = (a && b) ^ (a && mid) ^ (b && mid);
            let mut mr = mi.clone();
            mr.swap(i, j);
            m.set(self.index_of(&mr), col, Scalar::sign(neg));
        }
        m
    }
}

/// Homogeneous operator with explicitly declared parity.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperOperator {
    pub mat: ExactMatrix,
    pub parity: Parity,
}

impl SuperOperator {
    pub fn new(mat: ExactMatrix, parity: Parity) -> Self {
        SuperOperator { mat, parity }
    }

    /// Checks the matrix support against the declared parity.
    pub fn respects_parity(&self, space: &SuperSpace) -> bool {
        (0..space.dim()).all(|i| {
            (0..space.dim()).all(|j| {
                self.mat.get(i, j).is_zero()
                    || space.parity(i).plus(space.parity(j)) == self.parity
            })
        })
    }

    /// Elementary matrix E_ij on ℂ^{1|1} (1-based indices).
    pub fn e(i: usize, j: usize) -> Self {
        let mut m = Matrix::zeros(2, 2);
        m.set(i - 1, j - 1, Scalar::one());
        SuperOperator::new(m, Parity::of_index(i).plus(Parity::of_index(j)))
    }

    pub fn identity(n: usize) -> Self {
        SuperOperator::new(Matrix::identity(n), Parity::Even)
    }

    pub fn mul(&self, o: &Self) -> Self {
        SuperOperator::new(self.mat.mul(&o.mat), self.parity.plus(o.parity))
    }

    /// Supercommutator AB − (−1)^{|A||B|}BA.
    pub fn supercommutator(&self, o: &Self) -> ExactMatrix {
        let ab = self.mat.mul(&o.mat);
        let ba = o.mat.mul(&self.mat);
        if self.parity.pair_sign(o.parity) {
            ab.add(&ba)
        } else {
            ab.sub(&ba)
        }
    }
}

/// (A₁⊗…⊗A_n)(v) with the Koszul rule (A⊗B)(v⊗w) = (−1)^{|B||v|}Av⊗Bw.
pub fn koszul_apply(legs: &[SuperOperator], target: &SuperSpace, v: &[Scalar]) -> Result<Vec<Scalar>> {
    if legs.len() != target.legs().len() {
        return Err(Error::Invalid("leg count does not match tensor factors".into()));
    }
    let mut full = SuperOperator::identity(target.dim());
    for (p, a) in legs.iter().enumerate() {
        let leg_space = SuperSpace::tensor(&[target.legs()[p]]);
        if !a.respects_parity(&leg_space) {
            return Err(Error::Invalid(format!("leg {p} operator is not homogeneous of its declared parity")));
        }
        full = full.mul(&target.embed(p, a));
    }
    Ok(full.mat.mul_vec(v))
}

/// gl(1|1) generators e_ij acting on L_λ in the basis v₁, v₂ = e₂₁v₁.
pub fn gl11_on_irrep(w: &Weight) -> [[SuperOperator; 2]; 2] {
    if w.is_degenerate() {
        let one = |s: &Scalar, p| SuperOperator::new(Matrix::from_rows(vec![vec![s.clone()]]), p);
        let zero = |p| SuperOperator::new(Matrix::zeros(1, 1), p);
        return [
            [one(&w.l1, Parity::Even), zero(Parity::Odd)],
            [zero(Parity::Odd), one(&w.l2, Parity::Even)],
        ];
    }
    let one = Scalar::one();
    let e11 = Matrix::diagonal(vec![w.l1.clone(), &w.l1 - &one]);
    let e22 = Matrix::diagonal(vec![w.l2.clone(), &w.l2 + &one]);
    let e12 = SuperOperator::e(1, 2).mat.scale(&w.total());
    let e21 = SuperOperator::e(2, 1).mat;
    [
        [SuperOperator::new(e11, Parity::Even), SuperOperator::new(e12, Parity::Odd)],
        [SuperOperator::new(e21, Parity::Odd), SuperOperator::new(e22, Parity::Even)],
    ]
}

/// Diagonal gl(1|1) action on a tensor product of irreducibles.
#[derive(Clone, Debug)]
pub struct GlAction {
    pub space: SuperSpace,
    /// e[i][j] = e_{i+1, j+1}
    pub e: [[SuperOperator; 2]; 2],
}

impl GlAction {
    pub fn on_tensor(weights: &[Weight]) -> Self {
        let space = SuperSpace::tensor(&weights.iter().map(|w| w.dim()).collect::<Vec<_>>());
        let n = space.dim();
        let mk = |i: usize, j: usize| {
            let parity = Parity::of_index(i + 1).plus(Parity::of_index(j + 1));
            let mut acc = Matrix::zeros(n, n);
            for (s, w) in weights.iter().enumerate() {
                let local = &gl11_on_irrep(w)[i][j];
                acc = acc.add(&space.embed(s, local).mat);
            }
            SuperOperator::new(acc, parity)
        };
        let e = [[mk(0, 0), mk(0, 1)], [mk(1, 0), mk(1, 1)]];
        GlAction { space, e }
    }

    pub fn qubits(n: usize) -> Self {
        GlAction::on_tensor(&vec![Weight::ints(1, 0); n])
    }
}

/// Decompose into joint eigenspaces of e₁₁, e₂₂, ordered by decreasing λ₁.
pub fn weight_spaces(act: &GlAction) -> Result<Vec<(Weight, Vec<Vec<Scalar>>)>> {
    let (h1, h2) = (&act.e[0][0].mat, &act.e[1][1].mat);
    let n = act.space.dim();
    let diagonal = |m: &ExactMatrix| (0..n).all(|i| (0..n).all(|j| i == j || m.get(i, j).is_zero()));
    let mut out: Vec<(Weight, Vec<Vec<Scalar>>)> = Vec::new();
    if diagonal(h1) && diagonal(h2) {
        for b in 0..n {
            let w = Weight::new(h1.get(b, b).clone(), h2.get(b, b).clone());
            let mut v = vec![Scalar::zero(); n];
            v[b] = Scalar::one();
            match out.iter_mut().find(|(x, _)| *x == w) {
                Some((_, basis)) => basis.push(v),
                None => out.push((w, vec![v])),
            }
        }
    } else {
        let roots = |m: &ExactMatrix| -> Result<Vec<Scalar>> {
            let f = crate::exactnum::factor_over_rationals(&m.char_poly())?;
            if !f.splits() {
                return Err(Error::NotDiagonalizable);
            }
            Ok(f.roots().into_iter().map(|(r, _)| r).collect())
        };
        let mut total = 0;
        for a in roots(h1)? {
            for b in roots(h2)? {
                let s1 = h1.sub(&Matrix::identity(n).scale(&a));
                let s2 = h2.sub(&Matrix::identity(n).scale(&b));
                let k = Matrix::vstack(&[s1, s2]).kernel();
                if !k.is_empty() {
                    total += k.len();
                    out.push((Weight::new(a.clone(), b), k));
                }
            }
        }
        if total != n {
            return Err(Error::NotDiagonalizable);
        }
    }
    out.sort_by(|a, b| b.0.l1.cmp(&a.0.l1).then(a.0.l2.cmp(&b.0.l2)));
    Ok(out)
}

/// Basis of the weight space of `w` (empty if absent).
pub fn weight_space(act: &GlAction, w: &Weight) -> Result<Vec<Vec<Scalar>>> {
    Ok(weight_spaces(act)?
        .into_iter()
        .find(|(x, _)| x == w)
        .map(|(_, b)| b)
        .unwrap_or_default())
}

/// ker e₁₂ ∩ (M)_w.
pub fn singular_subspace(act: &GlAction, w: &Weight) -> Result<Vec<Vec<Scalar>>> {
    let basis = weight_space(act, w)?;
    Ok(kernel_within(&act.e[0][1].mat, &basis, act.space.dim()))
}

/// Kernel of `op` restricted to span(basis), expressed in ambient coordinates.
pub fn kernel_within(op: &ExactMatrix, basis: &[Vec<Scalar>], dim: usize) -> Vec<Vec<Scalar>> {
    if basis.is_empty() {
        return vec![];
    }
    let w = Matrix::from_cols(basis, dim);
    op.mul(&w)
        .kernel()
        .into_iter()
        .map(|c| w.mul_vec(&c))
        .collect()
}


/// (A⊗B) on left⊗right with (A⊗B)(v⊗w) = (−1)^{|B||v|} Av⊗Bw.
/// `left` lists the parities of the left basis; `pb` is the parity of B.
pub fn super_kron(a: &ExactMatrix, left: &[Parity], b: &ExactMatrix, pb: Parity) -> ExactMatrix {
    let (dl, dr) = (a.rows(), b.rows());
    assert_eq!(left.len(), dl);
    let mut m = Matrix::zeros(dl * dr, dl * dr);
    for ac in 0..dl {
        let neg = pb.pair_sign(left[ac]);
        for ar in 0..dl {
            let x = a.get(ar, ac);
            if x.is_zero() {
                continue;
            }
            for bc in 0..dr {
                for br in 0..dr {
                    let y = b.get(br, bc);
                    if y.is_zero() {
                        continue;
                    }
                    let v = x * y;
                    m.set(ar * dr + br, ac * dr + bc, if neg { -v } else { v });
                }
            }
        }
    }
    m
}

impl SuperSpace {
    /// self ⊗ other, legs concatenated.
    pub fn concat(&self, other: &SuperSpace) -> SuperSpace {
        let mut legs = self.legs.clone();
        legs.extend_from_slice(&other.legs);
        SuperSpace::tensor(&legs)
    }
}
