//! Acceptance criteria, one PASS/FAIL line each. Criterion 6 is expected to FAIL: the
//! stated norm prefactor disagrees with exact computation. The program checks that the
//! disagreement is exactly the documented one and exits nonzero on anything else.

use std::time::{Duration, Instant};

use gl11::bethe::{completeness_report, enumerate_divisors, eigenvalue_pencil, verify_on_shell};
use gl11::bethealg::analyze;
use gl11::exactnum::{binomial, int, Poly, RatFun, Scalar};
use gl11::fusion::{
    berezinian, berezinian_expected, higher_transfer_fused, oper_action_check, routes_agree, transfer_relation_check,
    universal_oper_check,
};
use gl11::monodromy::{
    cyclicity_and_irreducibility, lax_monodromy, tensor_monodromy, transfer_pencil, verify_rtt, ModuleSpec,
};
use gl11::report::{suite_specs, weighted_specs};
use gl11::shapoform::norm_report;
use gl11::weylspace::{specialization_check, weyl_report};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: Vec<String>, ok: impl Into<String>) -> Outcome {
    if failures.is_empty() {
        Outcome { pass: true, detail: ok.into() }
    } else {
        Outcome { pass: false, detail: failures.join("; ") }
    }
}

fn specs() -> Vec<(&'static str, ModuleSpec)> {
    suite_specs()
}

fn spec(name: &str) -> ModuleSpec {
    specs().into_iter().find(|(n, _)| *n == name).unwrap().1
}

fn split(s: &ModuleSpec) -> bool {
    let g = s.gamma();
    !g.is_zero() && enumerate_divisors(&g, g.deg()).is_ok()
}

fn within(t: Instant, budget: Duration, fails: &mut Vec<String>) -> Duration {
    let e = t.elapsed();
    if e > budget {
        fails.push(format!("runtime {e:?} exceeds {budget:?}"));
    }
    e
}

fn rtt() -> Outcome {
    let t = Instant::now();
    let mut fails = Vec::new();
    let mut count = 0;
    for (name, s) in specs().into_iter().chain(weighted_specs()) {
        count += 1;
        if let Err(w) = verify_rtt(&tensor_monodromy(&s)) {
            fails.push(format!("{name}: {w:?}"));
        }
    }
    for n in 1..=5i64 {
        count += 1;
        let pts: Vec<Scalar> = (0..n).map(|s| Scalar::frac(3 * s - s * s, 2)).collect();
        if let Err(w) = verify_rtt(&lax_monodromy(&pts)) {
            fails.push(format!("lax n={n}: {w:?}"));
        }
    }
    let e = within(t, Duration::from_secs(10), &mut fails);
    outcome(fails, format!("{count} monodromies, entrywise exact, {e:.2?}"))
}

fn eigenvalues() -> Outcome {
    let mut fails = Vec::new();
    let mut count = 0;
    for (name, s) in specs() {
        if !cyclicity_and_irreducibility(&s).cyclic || !split(&s) {
            continue;
        }
        let c = completeness_report(&s).unwrap();
        for l in &c.levels {
            for d in &l.divisors {
                count += 1;
                let o = verify_on_shell(&s, &Divisor::roots(&d.divisor)).unwrap();
                if !(o.pass && o.nonzero) {
                    fails.push(format!("{name}: y={} {o:?}", d.divisor));
                }
                // joint-eigenvalue oracle: the predicted eigenvalue occurs in the spectrum
                if d.eigenspace_dim == 0 || !d.bethe_in_eigenspace {
                    fails.push(format!("{name}: y={} not found by the joint spectral decomposition", d.divisor));
                }
            }
        }
    }
    let got = |name: &str| -> Vec<Poly> {
        let s = spec(name);
        let g = s.gamma();
        let mut v: Vec<Poly> = (0..=g.deg())
            .flat_map(|l| enumerate_divisors(&g, l).unwrap())
            .map(|y| eigenvalue_pencil(&y, &s).unwrap())
            .collect();
        v.sort_by_key(|p| p.to_string());
        v
    };
    let sorted = |mut v: Vec<Poly>| {
        v.sort_by_key(|p| p.to_string());
        v
    };
    let e1 = sorted(vec![Poly::from_ints(&[2, 1]), Poly::from_ints(&[1, 1])]);
    if got("E1") != e1 {
        fails.push(format!("E1 eigenvalues {:?}", got("E1")));
    }
    let e2 = sorted(vec![
        Poly::new(vec![Scalar::frac(1, 2), int(2)]),
        Poly::new(vec![Scalar::frac(-3, 2), int(2)]),
    ]);
    if got("E2") != e2 {
        fails.push(format!("E2 eigenvalues {:?}", got("E2")));
    }
    outcome(fails, format!("{count} divisors on-shell; E1 {{x+2, x+1}}, E2 {{2x+1/2, 2x−3/2}}"))
}

/// Roots of a split monic polynomial, via the divisor enumeration.
struct Divisor;

impl Divisor {
    fn roots(y: &Poly) -> Vec<Scalar> {
        if y.deg() == 0 {
            return vec![];
        }
        enumerate_divisors(y, y.deg()).unwrap().pop().unwrap().root_list()
    }
}

fn completeness() -> Outcome {
    let mut fails = Vec::new();
    let mut names = Vec::new();
    for (name, s) in specs() {
        let f = cyclicity_and_irreducibility(&s);
        if !f.irreducible || !split(&s) {
            continue;
        }
        names.push(name);
        let c = completeness_report(&s).unwrap();
        if !c.complete {
            fails.push(format!("{name}: not complete"));
        }
        let k = s.k();
        for l in &c.levels {
            let want = if s.twisted() { binomial(k, l.level) } else { binomial(k - 1, l.level) };
            if l.divisors.len() != want || l.divisors.iter().any(|d| d.eigenspace_dim != 1) {
                fails.push(format!("{name} level {}: {} divisors, want {want}", l.level, l.divisors.len()));
            }
        }
    }
    outcome(fails, format!("bijective with one-dimensional eigenspaces on {}", names.join(", ")))
}

fn jordan() -> Outcome {
    let s = spec("double-root");
    let mut fails = Vec::new();
    if s.gamma() != Poly::from_roots(&[Scalar::frac(-1, 2), Scalar::frac(-1, 2)]).scale(&int(3)) {
        fails.push(format!("γ = {}", s.gamma()));
    }
    let c = completeness_report(&s).unwrap();
    let level = |l: usize| c.levels.iter().find(|x| x.level == l).unwrap();
    let l1 = level(1);
    if l1.divisors.len() != 1 || l1.divisors[0].eigenspace_dim != 1 || l1.divisors[0].generalized_dim != 2 {
        fails.push(format!("level 1: {:?}", l1.divisors));
    }
    let l2 = level(2);
    if l2.divisors.len() != 1 || l2.divisors[0].generalized_dim != 1 {
        fails.push(format!("level 2: {:?}", l2.divisors));
    }
    outcome(fails, "level 1: one divisor, eigenspace 1, generalized 2; level 2: generalized 1")
}

fn algebra() -> Outcome {
    let t = Instant::now();
    let mut fails = Vec::new();
    let mut names = Vec::new();
    for (name, s) in specs() {
        if !cyclicity_and_irreducibility(&s).cyclic || !split(&s) {
            continue;
        }
        names.push(name);
        let a = analyze(&s).unwrap();
        if !a.pass() {
            fails.push(format!("{name}: {:?}", a.levels.iter().find(|l| !l.pass()).map(|l| l.level)));
        }
    }
    let e = within(t, Duration::from_secs(30), &mut fails);
    outcome(fails, format!("dimension, double commutant, cyclic vector, presentation on {}; {e:.2?}", names.join(", ")))
}

/// Returns the outcome for the stated formula and whether the documented correction holds.
fn norms() -> (Outcome, bool) {
    let mut stated_fail = Vec::new();
    let mut compared = 0;
    let mut corrected = true;
    let mut orthogonal = true;
    let mut ratio_ok = true;
    for (name, s) in specs() {
        if !split(&s) {
            continue;
        }
        let r = norm_report(&s).unwrap();
        orthogonal &= r.orthogonal;
        let c = -(s.q1() / s.q2());
        for e in r.norms.iter().filter(|e| !e.skipped) {
            compared += 1;
            corrected &= e.equal_signed;
            let l = e.divisor.deg() as u32;
            // on reducible modules both sides can vanish
            ratio_ok &= match &e.ratio {
                Some(r) => *r == c.pow(l),
                None => e.lhs.is_zero(),
            };
            if !e.equal {
                stated_fail.push(format!("{name} y={}", e.divisor));
            }
        }
    }
    let analysis = format!(
        "stated prefactor (q₂/q₁)^l fails on {} of {compared} simple-root divisors ({}); \
         exact ratio B/stated = (−q₁/q₂)^l wherever the stated value is nonzero: {ratio_ok}; \
         B(𝔹̂,𝔹̂) = (−1)^l ∏ Wr(φ,ψ)(t_i)/y′(t_i) on all: {corrected}; orthogonality: {orthogonal}",
        stated_fail.len(),
        stated_fail.join(", ")
    );
    (Outcome { pass: stated_fail.is_empty(), detail: analysis }, corrected && orthogonal && ratio_ok)
}

fn fusion() -> Outcome {
    let mut fails = Vec::new();
    let mut names = Vec::new();
    for (name, s) in specs() {
        if s.n() > 4 || !cyclicity_and_irreducibility(&s).cyclic {
            continue;
        }
        names.push(name);
        let mono = tensor_monodromy(&s);
        for m in 1..=3 {
            for c in transfer_relation_check(&s, m).unwrap() {
                if !c.pass {
                    fails.push(format!("{name} m={m}: {} {:?}", c.name, c.witness));
                }
            }
            let c = routes_agree(&mono, s.q1(), s.q2(), m).unwrap();
            if !c.pass {
                fails.push(format!("{name} m={m}: routes differ {:?}", c.witness));
            }
        }
    }
    // single leg λ = (1,0) at a, m = 2, on v₁: with E(x) = (q₁(x−a+1) − q₂(x−a))/(x−a),
    // 𝔗₂ = −q₂E(x) and 1 − Ber(x−1) = −E(x−1)/q₂, so 𝔗₂(x)(1 − Ber(x−1)) = E(x)E(x−1)
    let (a, q1, q2) = (Scalar::frac(1, 3), int(5), int(2));
    let s = ModuleSpec::from_parts(&[(1, 0)], std::slice::from_ref(&a), q1.clone(), q2.clone()).unwrap();
    let mono = tensor_monodromy(&s);
    let xa = Poly::linear(&a);
    let e = RatFun::new(&xa.shift(&int(1)).scale(&q1) - &xa.scale(&q2), xa.clone());
    let t2 = higher_transfer_fused(&mono, &q1, &q2, 2).unwrap();
    let v = t2.apply(&[int(1), int(0)]);
    let t2v = RatFun::new(v[0].clone(), t2.den.clone());
    let ber1 = berezinian_expected(&s).bracket(1);
    let lhs = &t2v * &(&RatFun::one() - &ber1);
    let tr = transfer_pencil(&mono, &q1, &q2);
    let tt = tr.mul(&tr.bracket(1)).apply(&[int(1), int(0)]);
    let rhs = RatFun::new(tt[0].clone(), &mono.norm * &mono.norm.bracket(1));
    if t2v != e.scale(&-&q2) || lhs != &e * &e.bracket(1) || lhs != rhs || !v[1].is_zero() {
        fails.push("single-leg m=2 hand computation".into());
    }
    outcome(fails, format!("m ≤ 3 on {}; route A = route B; single-leg m=2 by hand", names.join(", ")))
}

fn berezinians() -> Outcome {
    let mut fails = Vec::new();
    for (name, s) in specs() {
        let r = berezinian(&s).unwrap();
        if !r.pass() {
            fails.push(format!("{name}: {:?}", r.checks.iter().filter(|c| !c.pass).collect::<Vec<_>>()));
        }
        if r.value.as_ref() != Some(&berezinian_expected(&s)) {
            fails.push(format!("{name}: value {:?}", r.value));
        }
    }
    outcome(fails, "τ⁰ only, (q₁/q₂)φ/ψ, four expressions agree, central, on all suite specs")
}

fn opers() -> Outcome {
    let mut fails = Vec::new();
    let mut count = 0;
    for (name, s) in specs() {
        if !cyclicity_and_irreducibility(&s).cyclic || !split(&s) {
            continue;
        }
        let g = s.gamma();
        for l in 0..=g.deg() {
            for y in enumerate_divisors(&g, l).unwrap().iter().filter(|y| y.has_simple_roots()) {
                count += 1;
                let r = oper_action_check(&s, y, 3).unwrap();
                for c in r.checks.iter().filter(|c| !c.pass) {
                    fails.push(format!("{name} y={}: {}", y.y, c.name));
                }
            }
        }
        if s.k() <= 2 && berezinian_expected(&s) != RatFun::one() {
            for c in universal_oper_check(&s, s.n() + 2).unwrap() {
                if !c.pass {
                    fails.push(format!("{name}: {}", c.name));
                }
            }
        }
    }
    outcome(fails, format!("oper action to τ³ on {count} Bethe vectors; both universal forms to τ^(n+2) for k ≤ 2"))
}

fn weyl() -> Outcome {
    let t = Instant::now();
    let mut fails = Vec::new();
    let r = weyl_report(4, 4).unwrap();
    for c in r.characters.iter().filter(|c| !c.pass()) {
        fails.push(format!("character n={} ℓ={}", c.n, c.l));
    }
    for c in r.checks.iter().filter(|c| !c.pass) {
        fails.push(c.name.clone());
    }
    let points: [&[(i64, i64)]; 4] = [&[(0, 1)], &[(1, 2), (0, 1)], &[(0, 1), (1, 3), (-2, 1)], &[(2, 1), (2, 1), (0, 1)]];
    let mut n_spec = r.specializations.len();
    for s in &r.specializations {
        if !s.pass() {
            fails.push(format!("specialization {:?}", s.points));
        }
    }
    for p in points {
        let a: Vec<Scalar> = p.iter().map(|&(x, y)| Scalar::frac(x, y)).collect();
        n_spec += 1;
        if !specialization_check(&a).unwrap().pass() {
            fails.push(format!("specialization {a:?}"));
        }
    }
    if specialization_check(&[int(0), int(1)]).is_ok() {
        fails.push("unordered points accepted".into());
    }
    let e = within(t, Duration::from_secs(60), &mut fails);
    outcome(
        fails,
        format!(
            "{} character rows (n ≤ 4, d ≤ 4), {} model checks, {n_spec} specializations (n ≤ 3); {e:.2?}",
            r.characters.len(),
            r.checks.len()
        ),
    )
}

fn main() {
    let (norm, corrected) = norms();
    let results: Vec<(u32, &str, Outcome)> = vec![
        (1, "RTT identity", rtt()),
        (2, "Bethe eigenvalues", eigenvalues()),
        (3, "completeness", completeness()),
        (4, "Jordan structure", jordan()),
        (5, "Bethe algebra structure", algebra()),
        (6, "norm formula", norm),
        (7, "fusion transfer relations", fusion()),
        (8, "Berezinian", berezinians()),
        (9, "oper action", opers()),
        (10, "Weyl model", weyl()),
    ];
    let mut unexpected = Vec::new();
    for (id, title, o) in &results {
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {id:>2} {status}: {title}: {}", o.detail);
        let expected = *id != 6;
        if o.pass != expected {
            unexpected.push(*id);
        }
    }
    if !corrected {
        println!("criterion 6 analysis does not hold: the corrected identity or orthogonality fails");
        unexpected.push(6);
    }
    if unexpected.is_empty() {
        println!("acceptance: 9 PASS, 1 FAIL (criterion 6, documented prefactor discrepancy)");
    } else {
        println!("acceptance: unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
