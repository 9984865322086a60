//! Higher transfer matrices, the Berezinian of Z^Q(x, τ) = T^t(x)Qτ, rational
//! difference operators and the relations between them.

mod diffop;

pub use diffop::{as_scalar_matrix, bracket_matrix, scalar_matrix, DiffOp, RatMatrix};

use serde::Serialize;

use crate::bethe::{bethe_vector, char_pair, enumerate_divisors, Divisor};
use crate::error::{Error, Result};
use crate::exactnum::{ExactMatrix, Matrix, Poly, RatFun, Scalar};
use crate::monodromy::{cyclicity_and_irreducibility, entry_parity, tensor_monodromy, transfer_pencil, ModuleSpec, MonodromyPencil, OpPoly};
use crate::superlin::SuperSpace;

// ---------------------------------------------------------------------------
// symmetrizers

/// Normalized antisymmetrizer A_m and symmetrizer H_m on (ℂ^{1|1})^{⊗m}, with
/// adjacent transpositions acting by graded flips.
#[derive(Clone, Debug, PartialEq)]
pub struct Symmetrizers {
    pub m: usize,
    pub anti: ExactMatrix,
    pub sym: ExactMatrix,
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(m - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, m - 1);
            out.push(q);
        }
    }
    out
}

pub fn symmetrizers(m: usize) -> Result<Symmetrizers> {
    if m == 0 {
        return Err(Error::Invalid("symmetrizers need m ≥ 1".into()));
    }
    let space = SuperSpace::qubits(m);
    let d = space.dim();
    let flips: Vec<ExactMatrix> = (0..m.saturating_sub(1)).map(|i| space.flip(i, i + 1)).collect();
    let mut anti = Matrix::zeros(d, d);
    let mut sym = Matrix::zeros(d, d);
    let mut count = 0i64;
    for mut p in permutations(m) {
        // bubble sort gives a reduced word; the sign is the parity of its length
        let mut g = Matrix::identity(d);
        let mut odd = false;
        for pass in 0..m {
            for i in 0..m - 1 - pass.min(m - 1) {
                if p[i] > p[i + 1] {
                    p.swap(i, i + 1);
                    g = g.mul(&flips[i]);
                    odd = !odd;
                }
            }
        }
        sym = sym.add(&g);
        anti.axpy(&Scalar::sign(odd), &g);
        count += 1;
    }
    let inv = Scalar::from_int(count).inv();
    Ok(Symmetrizers { m, anti: anti.scale(&inv), sym: sym.scale(&inv) })
}

// ---------------------------------------------------------------------------
// higher transfer matrices

/// Operator-valued rational function num(x)/den(x).
#[derive(Clone, Debug, PartialEq)]
pub struct OpRat {
    pub num: OpPoly,
    pub den: Poly,
}

impl OpRat {
    pub fn to_matrix(&self) -> RatMatrix {
        self.num.to_ratfun_matrix(&self.den)
    }

    /// num·v as polynomials over the common denominator `den`.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Poly> {
        self.num.apply(v)
    }
}

/// ∏_{i=0}^{m−1} N(x − i) for the normalizer N.
fn shifted_norm(m: &MonodromyPencil, count: usize) -> Poly {
    (0..count as i64).fold(Poly::one(), |acc, i| &acc * &m.norm.bracket(i))
}

/// str over m auxiliary legs of S·Q⁽¹⁾T⁽¹'ᵐ⁺¹⁾(x)Q⁽²⁾T⁽²'ᵐ⁺¹⁾(x−1)⋯, where S is a
/// scalar operator on the auxiliary legs. Computed blockwise: the factor for leg a
/// only connects auxiliary basis vectors differing at a.
pub fn fused_supertrace(mono: &MonodromyPencil, q1: &Scalar, q2: &Scalar, s: &ExactMatrix) -> OpRat {
    let aux_dim = s.rows();
    let m = aux_dim.trailing_zeros() as usize;
    let aux = SuperSpace::qubits(m);
    let dim = mono.dim();
    let q = [q1, q2];
    let bits: Vec<Vec<usize>> = (0..aux_dim).map(|c| aux.multi_index(c)).collect();
    // shifted[a][i][j] = q_i·T̂_ij(x − a)
    let shifted: Vec<Vec<Vec<OpPoly>>> = (0..m)
        .map(|a| {
            (1..=2)
                .map(|i| (1..=2).map(|j| mono.entry(i, j).bracket(a as i64).scale(q[i - 1])).collect())
                .collect()
        })
        .collect();
    // factor for leg a at block (c, c'), where c' is c with leg a set to j
    let factor = |a: usize, c: usize, j: usize| -> (usize, OpPoly) {
        let i = bits[c][a];
        let mut mi = bits[c].clone();
        mi[a] = j;
        let cp = aux.index_of(&mi);
        let odd_tail = mi[a..].iter().filter(|&&b| b == 1).count() % 2 == 1;
        let neg = entry_parity(i + 1, j + 1).is_odd() && odd_tail;
        let mut op = shifted[a][i][j].clone();
        if neg {
            op = op.neg();
        }
        (cp, op)
    };
    // W = L_a L_{a+1} ⋯ L_m, built from the right
    let mut w: Vec<Vec<Option<OpPoly>>> = vec![vec![None; aux_dim]; aux_dim];
    for (c, row) in w.iter_mut().enumerate() {
        for j in 0..2 {
            let (cp, op) = factor(m - 1, c, j);
            row[cp] = Some(op);
        }
    }
    for a in (0..m - 1).rev() {
        let mut next: Vec<Vec<Option<OpPoly>>> = vec![vec![None; aux_dim]; aux_dim];
        for (c, row) in next.iter_mut().enumerate() {
            for j in 0..2 {
                let (cp, op) = factor(a, c, j);
                for (d, slot) in row.iter_mut().enumerate() {
                    if let Some(wb) = &w[cp][d] {
                        let t = op.mul(wb);
                        *slot = Some(match slot.take() {
                            Some(acc) => acc.add(&t),
                            None => t,
                        });
                    }
                }
            }
        }
        w = next;
    }
    let mut num = OpPoly::zero(dim);
    for c in 0..aux_dim {
        let sign = aux.parity(c).sign();
        for d in 0..aux_dim {
            let coef = s.get(c, d);
            if coef.is_zero() {
                continue;
            }
            if let Some(wb) = &w[d][c] {
                num = num.add(&wb.scale(&(coef * &sign)));
            }
        }
    }
    OpRat { num, den: shifted_norm(mono, m) }
}

/// 𝔗_m^Q(x) from the antisymmetrized fused product.
pub fn higher_transfer_fused(mono: &MonodromyPencil, q1: &Scalar, q2: &Scalar, m: usize) -> Result<OpRat> {
    let s = symmetrizers(m)?;
    Ok(fused_supertrace(mono, q1, q2, &s.anti))
}

/// ℌ_m^Q(x), the same with the symmetrizer.
pub fn symmetric_transfer(mono: &MonodromyPencil, q1: &Scalar, q2: &Scalar, m: usize) -> Result<OpRat> {
    let s = symmetrizers(m)?;
    Ok(fused_supertrace(mono, q1, q2, &s.sym))
}

/// 𝔗_m^Q(x) from the expansion of the Berezinian of 1 − Z in τ.
pub fn higher_transfer_expanded(mono: &MonodromyPencil, q1: &Scalar, q2: &Scalar, m: usize) -> Result<OpRat> {
    if m == 0 {
        return Err(Error::Invalid("higher transfer needs m ≥ 1".into()));
    }
    let dim = mono.dim();
    let t22 = |i: usize| mono.entry(2, 2).bracket(i as i64);
    let prod22 = |from: usize, to: usize| (from..=to).fold(OpPoly::scalar(dim, &Poly::one()), |acc, i| acc.mul(&t22(i)));
    let tr = transfer_pencil(mono, q1, q2);
    let mut tilde = tr.mul(&prod22(1, m - 1)).neg();
    for s in 1..m {
        let term = mono
            .entry(1, 2)
            .scale(q1)
            .mul(&prod22(1, s - 1))
            .mul(&mono.entry(2, 1).bracket(s as i64))
            .mul(&prod22(s + 1, m - 1));
        tilde = tilde.add(&term);
    }
    // 𝔗_m = (−1)^m q₂^{m−1} 𝔗̃_m
    let f = &Scalar::sign(m % 2 == 1) * &q2.pow(m as u32 - 1);
    Ok(OpRat { num: tilde.scale(&f), den: shifted_norm(mono, m) })
}

// ---------------------------------------------------------------------------
// checks

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    fn ok(name: impl Into<String>) -> Self {
        Check { name: name.into(), pass: true, witness: None }
    }

    fn fail(name: impl Into<String>, witness: impl Into<String>) -> Self {
        Check { name: name.into(), pass: false, witness: Some(witness.into()) }
    }

    fn from_bool(name: impl Into<String>, pass: bool, witness: impl FnOnce() -> String) -> Self {
        if pass {
            Check::ok(name)
        } else {
            Check::fail(name, witness())
        }
    }
}

fn first_difference(a: &OpPoly, b: &OpPoly) -> Option<String> {
    let n = a.coeffs().len().max(b.coeffs().len());
    (0..n).find_map(|d| {
        let (x, y) = (a.coeff(d), b.coeff(d));
        (x != y).then(|| {
            let dim = x.rows();
            let (i, j) = (0..dim)
                .flat_map(|i| (0..dim).map(move |j| (i, j)))
                .find(|&(i, j)| x.get(i, j) != y.get(i, j))
                .unwrap_or((0, 0));
            format!("x^{d} entry ({i},{j}): {} vs {}", x.get(i, j), y.get(i, j))
        })
    })
}

/// A_m and H_m are idempotent of rank 2.
pub fn symmetrizer_check(m: usize) -> Result<Check> {
    let s = symmetrizers(m)?;
    let ra = s.anti.rank();
    let rh = s.sym.rank();
    let idem = s.anti.mul(&s.anti) == s.anti && s.sym.mul(&s.sym) == s.sym;
    Ok(Check::from_bool(format!("symmetrizers m={m}"), idem && ra == 2 && rh == 2, || {
        format!("idempotent={idem} rank(A)={ra} rank(H)={rh}")
    }))
}

/// Both constructions of 𝔗_m agree (same denominator, compare numerators).
pub fn routes_agree(mono: &MonodromyPencil, q1: &Scalar, q2: &Scalar, m: usize) -> Result<Check> {
    let a = higher_transfer_fused(mono, q1, q2, m)?;
    let b = higher_transfer_expanded(mono, q1, q2, m)?;
    let diff = first_difference(&a.num, &b.num);
    Ok(Check::from_bool(format!("routes m={m}"), diff.is_none(), || diff.unwrap_or_default()))
}

/// T_ij(x) as rational matrices (1-based).
fn t_matrices(mono: &MonodromyPencil) -> [[RatMatrix; 2]; 2] {
    let f = |i: usize, j: usize| mono.entry(i, j).to_ratfun_matrix(&mono.norm);
    [[f(1, 1), f(1, 2)], [f(2, 1), f(2, 2)]]
}

/// Entries of Z^Q = T^t Q τ in the 𝒦 convention: K₁₁ = q₁T₁₁τ, K₁₂ = q₂T₂₁τ,
/// K₂₁ = q₁T₁₂τ, K₂₂ = q₂T₂₂τ.
fn z_entries(t: &[[RatMatrix; 2]; 2], q1: &Scalar, q2: &Scalar, order: i64) -> [[DiffOp; 2]; 2] {
    let k = |a: &RatMatrix, q: &Scalar| DiffOp::monomial(a.scale(&RatFun::constant(q.clone())), 1, order);
    [[k(&t[0][0], q1), k(&t[1][0], q2)], [k(&t[0][1], q1), k(&t[1][1], q2)]]
}

/// The four expressions for Ber(𝒦).
pub fn berezinian_forms(k: &[[DiffOp; 2]; 2]) -> Result<[DiffOp; 4]> {
    let [[k11, k12], [k21, k22]] = k;
    let i11 = k11.inverse()?;
    let i22 = k22.inverse()?;
    let f1 = k11.mul(&k22.sub(&k21.mul(&i11).mul(k12)).inverse()?);
    let f2 = k22.add(&k12.mul(&i11).mul(k21)).inverse()?.mul(k11);
    let f3 = i22.mul(&k11.sub(&k12.mul(&i22).mul(k21)));
    let f4 = k11.add(&k21.mul(&i22).mul(k12)).mul(&i22);
    Ok([f1, f2, f3, f4])
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BerezinianReport {
    /// Ber^Q(x) as a scalar rational function, when it is one.
    pub value: Option<RatFun>,
    pub expected: RatFun,
    pub checks: Vec<Check>,
}

impl BerezinianReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Ber^Q(x) = Ber(Z^Q(x, τ)) on the module, from the first expression.
pub fn berezinian_value(spec: &ModuleSpec) -> Result<DiffOp> {
    berezinian_of(&tensor_monodromy(spec), spec.q1(), spec.q2())
}

pub fn berezinian_of(mono: &MonodromyPencil, q1: &Scalar, q2: &Scalar) -> Result<DiffOp> {
    let t = t_matrices(mono);
    let [f1, ..] = berezinian_forms(&z_entries(&t, q1, q2, 4))?;
    Ok(f1)
}

/// (q₁/q₂)·φ/ψ
pub fn berezinian_expected(spec: &ModuleSpec) -> RatFun {
    RatFun::new(spec.phi(), spec.psi()).scale(&(spec.q1() * &spec.q2().inv()))
}

pub fn berezinian(spec: &ModuleSpec) -> Result<BerezinianReport> {
    let mono = tensor_monodromy(spec);
    let t = t_matrices(&mono);
    let forms = berezinian_forms(&z_entries(&t, spec.q1(), spec.q2(), 4))?;
    let expected = berezinian_expected(spec);
    let mut checks = Vec::new();
    let f1 = &forms[0];
    let tau0 = f1.terms().all(|(k, _)| k == 0);
    checks.push(Check::from_bool("only τ⁰ survives", tau0, || {
        format!("τ-degrees {:?}", f1.terms().map(|(k, _)| k).collect::<Vec<_>>())
    }));
    let ber = f1.coeff(0);
    let value = as_scalar_matrix(&ber);
    checks.push(Check::from_bool("scalar (q1/q2)φ/ψ", value.as_ref() == Some(&expected), || {
        format!("got {:?}, expected {expected}", value.as_ref().map(|v| v.to_string()))
    }));
    for (i, f) in forms.iter().enumerate().skip(1) {
        checks.push(Check::from_bool(format!("expression {} agrees", i + 1), f == f1, || {
            format!("τ-degrees {:?}", f.terms().map(|(k, _)| k).collect::<Vec<_>>())
        }));
    }
    let central = t.iter().flatten().all(|tij| ber.commutator(tij).is_zero());
    checks.push(Check::from_bool("central", central, || "nonzero commutator with some T_ij".into()));
    // Ber^Q·q₂/q₁ does not depend on Q
    let other = spec.with_twist(spec.q1() + &Scalar::one(), spec.q2().clone())?;
    let t_other = berezinian_value(&other)?.coeff(0);
    let lhs = ber.scale(&RatFun::constant(spec.q2() / spec.q1()));
    let rhs = t_other.scale(&RatFun::constant(other.q2() / other.q1()));
    checks.push(Check::from_bool("Ber·q2/q1 independent of Q", lhs == rhs, || {
        format!("twists ({}, {}) and ({}, {}) differ", spec.q1(), spec.q2(), other.q1(), other.q2())
    }));
    Ok(BerezinianReport { value, expected, checks })
}

/// 𝒟^Q(x, τ) = Ber(1 − Z^Q(x, τ)) up to τ^order, via (K₁₁ + K₂₁K₂₂⁻¹K₁₂)K₂₂⁻¹.
pub fn difference_operator(mono: &MonodromyPencil, q1: &Scalar, q2: &Scalar, order: i64) -> Result<DiffOp> {
    let t = t_matrices(mono);
    let z = z_entries(&t, q1, q2, order);
    let one = DiffOp::one(mono.dim(), order);
    let k = [[one.sub(&z[0][0]), z[0][1].neg()], [z[1][0].neg(), one.sub(&z[1][1])]];
    let [_, _, _, f4] = berezinian_forms(&k)?;
    Ok(f4)
}

/// Coefficients of 𝒟^Q(x, τ) are (−1)^m 𝔗_m^Q(x), and those of its inverse are ℌ_m^Q(x).
pub fn generating_function_check(mono: &MonodromyPencil, q1: &Scalar, q2: &Scalar, order: usize) -> Result<Check> {
    let d = difference_operator(mono, q1, q2, order as i64)?;
    let dinv = d.inverse()?;
    for m in 1..=order {
        let t = higher_transfer_fused(mono, q1, q2, m)?.to_matrix();
        let want = t.scale(&RatFun::constant(Scalar::sign(m % 2 == 1)));
        if d.coeff(m as i64) != want {
            return Ok(Check::fail("generating functions", format!("𝒟 coefficient at τ^{m}")));
        }
        let h = symmetric_transfer(mono, q1, q2, m)?.to_matrix();
        if dinv.coeff(m as i64) != h {
            return Ok(Check::fail("generating functions", format!("𝒟⁻¹ coefficient at τ^{m}")));
        }
    }
    Ok(Check::ok("generating functions"))
}

/// 𝔗_m∏(1 − Ber(x − i)) = ∏𝒯_Q(x − i + 1) and
/// ℌ_m∏(Ber(x − i) − 1) = ∏𝒯_Q(x − i + 1)∏Ber(x − i), i.e. with every factor
/// over the common denominator ∏N(x − i + 1).
pub fn transfer_relation_check(spec: &ModuleSpec, m: usize) -> Result<[Check; 2]> {
    require_cyclic(spec)?;
    let mono = tensor_monodromy(spec);
    let (q1, q2) = (spec.q1(), spec.q2());
    let ber = berezinian_expected(spec);
    let one = RatFun::one();
    let prod_t = (0..m as i64).fold(OpPoly::scalar(mono.dim(), &Poly::one()), |acc, i| {
        acc.mul(&transfer_pencil(&mono, q1, q2).bracket(i))
    });
    let one_minus = (1..m as i64).fold(RatFun::one(), |acc, i| &acc * &(&one - &ber.bracket(i)));
    let ber_prod = (1..m as i64).fold(RatFun::one(), |acc, i| &acc * &ber.bracket(i));
    let minus_one = if m.is_multiple_of(2) { -&one_minus } else { one_minus.clone() };

    let t = higher_transfer_fused(&mono, q1, q2, m)?;
    let lhs = t.num.mul_poly(one_minus.num());
    let rhs = prod_t.mul_poly(one_minus.den());
    let c1 = Check::from_bool(format!("𝔗 relation m={m}"), lhs == rhs, || {
        first_difference(&lhs, &rhs).unwrap_or_default()
    });

    // ℌ_m·P/R = ∏𝒯̂·B/C  ⇔  ℌ_m·P·C = ∏𝒯̂·B·R with ∏(Ber(x−i) − 1) = P/R, ∏Ber(x−i) = B/C
    let h = symmetric_transfer(&mono, q1, q2, m)?;
    let lhs = h.num.mul_poly(&(minus_one.num() * ber_prod.den()));
    let rhs = prod_t.mul_poly(&(ber_prod.num() * minus_one.den()));
    let c2 = Check::from_bool(format!("ℌ relation m={m}"), lhs == rhs, || {
        first_difference(&lhs, &rhs).unwrap_or_default()
    });
    Ok([c1, c2])
}

fn require_cyclic(spec: &ModuleSpec) -> Result<()> {
    if cyclicity_and_irreducibility(spec).cyclic {
        Ok(())
    } else {
        Err(Error::Invalid("module is not cyclic".into()))
    }
}

/// D_y(x, τ) = (1 − q₁ζ₁(y^{[1]}/y)τ)(1 − q₂ζ₂(y^{[1]}/y)τ)^{-1} as a scalar operator.
pub fn oper_of_divisor(spec: &ModuleSpec, y: &Poly, order: i64) -> Result<DiffOp> {
    let cp = char_pair(spec);
    let ratio = RatFun::new(y.bracket(1), y.clone());
    let a = DiffOp::scalar(&(&cp.zeta1() * &ratio).scale(spec.q1()), 1, 1, order);
    let b = DiffOp::scalar(&(&cp.zeta2() * &ratio).scale(spec.q2()), 1, 1, order);
    let one = DiffOp::one(1, order);
    Ok(one.sub(&a).mul(&one.sub(&b).inverse()?))
}

/// Closed form of the τ^m coefficient of D_y for m ≥ 1:
/// −q₂^{m−1}(q₁ζ₁ − q₂ζ₂)(y^{[m]}/y)∏_{i=1}^{m−1}ζ₂^{[i]}.
pub fn oper_coefficient(spec: &ModuleSpec, y: &Poly, m: usize) -> RatFun {
    let cp = char_pair(spec);
    let (z1, z2) = (cp.zeta1(), cp.zeta2());
    let lead = &z1.scale(spec.q1()) - &z2.scale(spec.q2());
    let mut f = &lead * &RatFun::new(y.bracket(m as i64), y.clone());
    for i in 1..m as i64 {
        f = &f * &z2.bracket(i);
    }
    -&f.scale(&spec.q2().pow(m as u32 - 1))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OperEntry {
    pub divisor: Poly,
    pub checks: Vec<Check>,
}

/// For each simple-root divisor y of γ: (−1)^m𝔗_m𝔹̂ equals the τ^m coefficient of
/// D_y times 𝔹̂ for m = 1..order, and that coefficient has the closed form above.
pub fn oper_action_check(spec: &ModuleSpec, y: &Divisor, order: usize) -> Result<OperEntry> {
    if !y.has_simple_roots() {
        return Err(Error::Invalid("oper action needs simple roots".into()));
    }
    let mono = tensor_monodromy(spec);
    let b = bethe_vector(&mono, &y.root_list())?;
    let dy = oper_of_divisor(spec, &y.y, order as i64)?;
    let mut checks = Vec::new();
    for m in 1..=order {
        let c = as_scalar_matrix(&dy.coeff(m as i64)).unwrap_or_else(RatFun::zero);
        let closed = oper_coefficient(spec, &y.y, m);
        checks.push(Check::from_bool(format!("D_y expansion τ^{m}"), c == closed, || format!("{c} vs {closed}")));
        let t = higher_transfer_fused(&mono, spec.q1(), spec.q2(), m)?;
        // (−1)^m·num·v·c.den == c.num·v·den
        let lhs: Vec<Poly> = t.apply(&b.vector).iter().map(|p| (p * c.den()).scale(&Scalar::sign(m % 2 == 1))).collect();
        let rhs: Vec<Poly> = b.vector.iter().map(|a| (c.num() * &t.den).scale(a)).collect();
        let pos = lhs.iter().zip(&rhs).position(|(a, b)| a != b);
        checks.push(Check::from_bool(format!("𝔗_{m} on Bethe vector"), pos.is_none(), || {
            format!("component {}", pos.unwrap_or(0))
        }));
    }
    Ok(OperEntry { divisor: y.y.clone(), checks })
}

/// 𝒟^Q against both forms built from Ber and 𝒯_Q, up to τ^order.
pub fn universal_oper_check(spec: &ModuleSpec, order: usize) -> Result<[Check; 2]> {
    let mono = tensor_monodromy(spec);
    universal_oper_check_with(&mono, spec.q1(), spec.q2(), &berezinian_expected(spec), order)
}

pub fn universal_oper_check_with(
    mono: &MonodromyPencil,
    q1: &Scalar,
    q2: &Scalar,
    ber: &RatFun,
    order: usize,
) -> Result<[Check; 2]> {
    let one_rf = RatFun::one();
    if *ber == one_rf {
        return Err(Error::Invalid("Ber = 1, so Ber − 1 is not invertible".into()));
    }
    let ord = order as i64;
    let dim = mono.dim();
    let d = difference_operator(mono, q1, q2, ord)?;
    let tr = transfer_pencil(mono, q1, q2).to_ratfun_matrix(&mono.norm);
    let one = DiffOp::one(dim, ord);
    let inv = (ber - &one_rf).inv()?;
    let a = DiffOp::monomial(tr.scale(&(ber * &inv)), 1, ord);
    let b = DiffOp::monomial(tr.scale(&inv), 1, ord);
    let form1 = one.sub(&a).mul(&one.sub(&b).inverse()?);
    let c1 = Check::from_bool("universal oper, first form", form1 == d, || {
        let k = (0..=ord).find(|&k| form1.coeff(k) != d.coeff(k)).unwrap_or(0);
        format!("τ^{k} coefficient differs")
    });
    let c = &one_rf - &ber.shift(&Scalar::one());
    let lead = DiffOp::scalar(&c, 0, dim, ord);
    let a2 = lead.add(&DiffOp::monomial(tr.scale(ber), 1, ord));
    let b2 = lead.add(&DiffOp::monomial(tr.clone(), 1, ord));
    let form2 = a2.mul(&b2.inverse()?);
    let c2 = Check::from_bool("universal oper, second form", form2 == d, || {
        let k = (0..=ord).find(|&k| form2.coeff(k) != d.coeff(k)).unwrap_or(0);
        format!("τ^{k} coefficient differs")
    });
    Ok([c1, c2])
}

/// [𝔗_m(x₁), 𝔗_{m'}(x₂)] = 0 coefficientwise.
pub fn mutual_commutativity(mono: &MonodromyPencil, q1: &Scalar, q2: &Scalar, max_m: usize) -> Result<Check> {
    let ts: Vec<OpRat> = (1..=max_m).map(|m| higher_transfer_fused(mono, q1, q2, m)).collect::<Result<_>>()?;
    for (i, a) in ts.iter().enumerate() {
        for (j, b) in ts.iter().enumerate().skip(i) {
            for (da, ca) in a.num.coeffs().iter().enumerate() {
                for (db, cb) in b.num.coeffs().iter().enumerate() {
                    if !ca.commutator(cb).is_zero() {
                        return Ok(Check::fail(
                            "mutual commutativity",
                            format!("m={} x₁^{da}, m={} x₂^{db}", i + 1, j + 1),
                        ));
                    }
                }
            }
        }
    }
    Ok(Check::ok("mutual commutativity"))
}

// ---------------------------------------------------------------------------
// report

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FusionReport {
    pub max_m: usize,
    pub tau_order: usize,
    pub checks: Vec<Check>,
    pub berezinian: BerezinianReport,
    pub oper: Vec<OperEntry>,
    /// τ-degree and level pairs not checked because γ does not split, etc.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl FusionReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
            && self.berezinian.pass()
            && self.oper.iter().all(|e| e.checks.iter().all(|c| c.pass))
    }
}

/// Everything above for one cyclic spec; the second universal form is reported
/// but does not enter `pass`.
pub fn fusion_report(spec: &ModuleSpec, max_m: usize, tau_order: usize) -> Result<FusionReport> {
    require_cyclic(spec)?;
    let mono = tensor_monodromy(spec);
    let (q1, q2) = (spec.q1(), spec.q2());
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    for m in 1..=max_m {
        checks.push(symmetrizer_check(m)?);
        checks.push(routes_agree(&mono, q1, q2, m)?);
        checks.extend(transfer_relation_check(spec, m)?);
    }
    checks.push(generating_function_check(&mono, q1, q2, max_m)?);
    checks.push(mutual_commutativity(&mono, q1, q2, max_m.min(2))?);
    let berezinian = berezinian(spec)?;
    if berezinian_expected(spec) != RatFun::one() {
        let [u1, u2] = universal_oper_check(spec, tau_order.max(spec.n() + 2))?;
        checks.push(u1);
        if !u2.pass {
            notes.push(format!("second universal form: {}", u2.witness.clone().unwrap_or_default()));
        }
    } else {
        notes.push("Ber = 1: universal oper not applicable".into());
    }
    let mut oper = Vec::new();
    for l in 0..=spec.k() {
        match enumerate_divisors(&spec.gamma(), l) {
            Ok(ds) => {
                for y in ds.iter().filter(|y| y.has_simple_roots()) {
                    oper.push(oper_action_check(spec, y, tau_order)?);
                }
            }
            Err(Error::NotSplit) => notes.push(format!("level {l}: γ does not split, oper action skipped")),
            Err(Error::ZeroInput) => notes.push("γ = 0: oper action skipped".into()),
            Err(e) => return Err(e),
        }
    }
    Ok(FusionReport { max_m, tau_order, checks, berezinian, oper, notes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, q};
    use crate::monodromy::monodromy_of_legs;
    use crate::superlin::Weight;

    fn e1() -> ModuleSpec {
        ModuleSpec::from_parts(&[(1, 0)], &[int(0)], int(2), int(1)).unwrap()
    }

    fn e2() -> ModuleSpec {
        ModuleSpec::from_parts(&[(1, 0), (1, 0)], &[int(0), q(1, 2)], int(1), int(1)).unwrap()
    }

    fn t2() -> ModuleSpec {
        ModuleSpec::from_parts(&[(1, 0), (1, 0)], &[int(0), q(-1, 4)], int(3), int(1)).unwrap()
    }

    #[test]
    fn symmetrizer_ranks() {
        for m in 1..=4 {
            assert!(symmetrizer_check(m).unwrap().pass, "m={m}");
        }
        let s = symmetrizers(2).unwrap();
        let p = SuperSpace::qubits(2).flip(0, 1);
        let half = q(1, 2);
        assert_eq!(s.anti, Matrix::identity(4).sub(&p).scale(&half));
        assert_eq!(s.sym, Matrix::identity(4).add(&p).scale(&half));
        // v₂⊗v₂ is antisymmetric
        assert_eq!(s.anti.mul_vec(&[int(0), int(0), int(0), int(1)]), vec![int(0), int(0), int(0), int(1)]);
    }

    #[test]
    fn first_transfer_is_supertrace() {
        let spec = t2();
        let mono = tensor_monodromy(&spec);
        let t = higher_transfer_fused(&mono, spec.q1(), spec.q2(), 1).unwrap();
        assert_eq!(t.num, transfer_pencil(&mono, spec.q1(), spec.q2()));
        assert_eq!(t.den, mono.norm);
    }

    #[test]
    fn routes_agree_on_suite() {
        for spec in [e1(), e2(), t2()] {
            let mono = tensor_monodromy(&spec);
            for m in 1..=3 {
                let c = routes_agree(&mono, spec.q1(), spec.q2(), m).unwrap();
                assert!(c.pass, "{:?}", c);
            }
        }
    }

    #[test]
    fn second_transfer_on_single_leg_vacuum() {
        // n = 1, λ = (1,0), b = a: 𝔗₂ v₁ = −q₂(q₁(x−a+1) − q₂(x−a))/(x−a) v₁
        let (a, q1, q2) = (q(1, 3), int(5), int(2));
        let spec = ModuleSpec::from_parts(&[(1, 0)], std::slice::from_ref(&a), q1.clone(), q2.clone()).unwrap();
        let mono = tensor_monodromy(&spec);
        let t = higher_transfer_fused(&mono, &q1, &q2, 2).unwrap();
        let v = t.apply(&[int(1), int(0)]);
        let xa = Poly::linear(&a);
        let num = (&xa.shift(&int(1)).scale(&q1) - &xa.scale(&q2)).scale(&-&q2);
        let got = RatFun::new(v[0].clone(), t.den.clone());
        assert_eq!(got, RatFun::new(num, xa));
        assert!(v[1].is_zero());
    }

    #[test]
    fn berezinian_single_leg() {
        let spec = ModuleSpec::from_parts(&[(1, 0)], &[q(2, 3)], int(3), int(2)).unwrap();
        let r = berezinian(&spec).unwrap();
        assert!(r.pass(), "{:?}", r.checks);
        let xa = Poly::linear(&q(2, 3));
        let want = RatFun::new(xa.shift(&int(1)), xa).scale(&q(3, 2));
        assert_eq!(r.value, Some(want));
    }

    #[test]
    fn berezinian_trivial_weight() {
        let mono = monodromy_of_legs(&[(Weight::ints(0, 0), int(0))]).unwrap();
        let v = berezinian_of(&mono, &int(3), &int(2)).unwrap();
        assert_eq!(as_scalar_matrix(&v.coeff(0)), Some(RatFun::constant(q(3, 2))));
    }

    #[test]
    fn berezinian_two_legs() {
        for spec in [e2(), t2()] {
            let r = berezinian(&spec).unwrap();
            assert!(r.pass(), "{:?}", r.checks);
        }
    }

    #[test]
    fn transfer_relation_single_leg_by_hand() {
        // 𝔗₂(1 − Ber(x−1)) on v₁ = 𝒯(x)𝒯(x−1) on v₁
        let (a, q1, q2) = (int(1), int(3), int(2));
        let spec = ModuleSpec::from_parts(&[(1, 0)], std::slice::from_ref(&a), q1.clone(), q2.clone()).unwrap();
        let [c1, c2] = transfer_relation_check(&spec, 2).unwrap();
        assert!(c1.pass && c2.pass);
        let mono = tensor_monodromy(&spec);
        let tr = transfer_pencil(&mono, &q1, &q2);
        let xa = Poly::linear(&a);
        let e = |s: i64| &xa.bracket(s - 1).scale(&q1) - &xa.bracket(s).scale(&q2);
        let want = RatFun::new(&e(0) * &e(1), &xa * &xa.bracket(1));
        let got = tr.mul(&tr.bracket(1)).apply(&[int(1), int(0)]);
        assert_eq!(RatFun::new(got[0].clone(), &mono.norm * &mono.norm.bracket(1)), want);
    }

    #[test]
    fn transfer_relations_up_to_three() {
        for spec in [e1(), e2(), t2()] {
            for m in 1..=3 {
                let [c1, c2] = transfer_relation_check(&spec, m).unwrap();
                assert!(c1.pass, "{:?}", c1);
                assert!(c2.pass, "{:?}", c2);
            }
        }
    }

    #[test]
    fn generating_functions() {
        for spec in [e1(), t2()] {
            let mono = tensor_monodromy(&spec);
            let c = generating_function_check(&mono, spec.q1(), spec.q2(), 3).unwrap();
            assert!(c.pass, "{:?}", c);
        }
    }

    #[test]
    fn oper_action_e1_e2() {
        let spec = e1();
        let y = Divisor::from_roots(vec![(int(-2), 1)]);
        let e = oper_action_check(&spec, &y, 3).unwrap();
        assert!(e.checks.iter().all(|c| c.pass), "{:?}", e.checks);
        let spec = e2();
        let y = Divisor::from_roots(vec![(q(-1, 4), 1)]);
        let e = oper_action_check(&spec, &y, 3).unwrap();
        assert!(e.checks.iter().all(|c| c.pass), "{:?}", e.checks);
    }

    #[test]
    fn universal_oper_forms() {
        for spec in [e1(), t2()] {
            let n = spec.n();
            let [u1, u2] = universal_oper_check(&spec, n + 2).unwrap();
            assert!(u1.pass, "{:?}", u1);
            assert!(u2.pass, "{:?}", u2);
        }
        // q₁ = q₂ on the trivial module: Ber = 1
        let mono = monodromy_of_legs(&[(Weight::ints(0, 0), int(0))]).unwrap();
        let ber = as_scalar_matrix(&berezinian_of(&mono, &int(1), &int(1)).unwrap().coeff(0)).unwrap();
        assert_eq!(ber, RatFun::one());
        assert!(universal_oper_check_with(&mono, &int(1), &int(1), &ber, 2).is_err());
    }

    #[test]
    fn commuting_higher_transfers() {
        let spec = t2();
        let mono = tensor_monodromy(&spec);
        assert!(mutual_commutativity(&mono, spec.q1(), spec.q2(), 2).unwrap().pass);
    }
}
