//! End-to-end checks on the worked examples, one line per criterion.

mod common;

use std::time::{Duration, Instant};

use common::*;
use prescope_core::algebra::linalg::Matrix;
use prescope_core::algebra::{Field, PolyNK, Rat, RatN};
use prescope_core::automorphism::{commutator, find_automorphisms, sigma_matrix, MatN};
use prescope_core::ore::OreOp;
use prescope_core::ratsum::{finite_sum, vanishing_sum_check, Block, NicoleDenominator, NicoleNumerator};
use prescope_core::telescope::{
    direct_prescoper, minimal_annihilator, minimal_prescoper, minimal_telescoper, minimal_telescoper_of, zero_sum_certify,
    Bound, HyperModule, SpecialForm, SumRange,
};
use prescope_core::term::{parse, HyperTerm, Lin};
use proptest::test_runner::{Config, TestRunner};

type Check = std::result::Result<(), String>;
type Criterion = (u32, &'static str, Box<dyn FnOnce() -> (Check, Duration)>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn term(s: &str) -> HyperTerm {
    HyperTerm::parse(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn op(s: &str) -> OreOp {
    OreOp::parse(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// `sum_i c_i(n0) s(n0 + i)`.
fn apply_to_values(l: &OreOp, n0: i64, s: impl Fn(i64) -> Rat) -> Option<Rat> {
    let mut acc = Rat::zero();
    for (i, c) in l.coeffs().iter().enumerate() {
        acc = acc.plus(&c.eval(&Rat::from_int(n0))?.times(&s(n0 + i as i64)));
    }
    Some(acc)
}

fn annihilates(l: &OreOp, ns: std::ops::RangeInclusive<i64>, s: impl Fn(i64) -> Rat) -> Check {
    for n0 in ns {
        let v = apply_to_values(l, n0, &s).ok_or_else(|| format!("coefficient pole at n = {n0}"))?;
        ensure(v.is_zero(), || format!("{l} applied to the sums at n = {n0} gives {v}"))?;
    }
    Ok(())
}

fn alternating_square() -> Check {
    let h = term("(-1)^k*binomial(2*n+1,k)^2");
    let t = minimal_telescoper(&h).map_err(err)?;
    let want = op("(2*n+3)*Sn + 8*n + 8").canonical();
    ensure(t == want, || format!("got {t}, expected {want}"))?;
    annihilates(&t, 3..=8, |n| finite_sum(&h, n, 0, 2 * n + 1))
}

fn second_order() -> Check {
    let h = term("(-1)^k*binomial(n,k)*binomial(3*k,n)");
    let t = minimal_telescoper(&h).map_err(err)?;
    let want = op("Sn^2 + 3*(5*n+7)/(2*(2*n+3))*Sn + 9*(n+1)/(2*(2*n+3))").canonical();
    ensure(t == want, || format!("got {t}, expected {want}"))?;
    annihilates(&t, 3..=10, |n| finite_sum(&h, n, 0, n))
}

fn first_prescoper() -> Check {
    let h = term("(-1)^k*binomial(3*n+1,k)*binomial(3*n-k,n)^3");
    let module = HyperModule::new(&h).map_err(err)?;
    let h0 = module.h0().map_err(err)?;
    let want_h0 = h.scaled(&rf("k-3*n-1")).map_err(err)?;
    for (n0, k0) in [(2, 1), (3, 4), (4, 2), (5, 7)] {
        ensure(h0.eval_int(n0, k0) == want_h0.eval_int(n0, k0), || format!("H0 differs at ({n0}, {k0})"))?;
    }
    let r = minimal_prescoper(&h).map_err(err)?;
    ensure(r.op == op("Sn - 1"), || format!("prescoper {}", r.op))?;
    let p = rf("(37*n^7+96*n^6+81*n^5+22*n^4)/(8*(n+1)^3*(9*n^2+10*n+3))");
    let v = prescope_core::algebra::RatNK::from_poly(module.v().clone());
    ensure(r.residual() == p.div(&v), || format!("residual {}", r.residual()))
}

fn order_six_remainder() -> (Check, Duration) {
    let run = || -> std::result::Result<Duration, String> {
        let h0 = term("binomial(5*n,3*k)^2/binomial(n,k)");
        let module = HyperModule::new(&h0).map_err(err)?;
        let k = rf("(3*k-5*n)^2*(3*k-5*n+1)^2*(3*k-5*n+2)^2/(9*(n-k)*(k+1)*(3*k+1)^2*(3*k+2)^2)");
        ensure(module.kernel() == &k, || format!("kernel {}", module.kernel()))?;
        let f = rf("1/(2*n+k)");
        let sf = SpecialForm::from_multiplier(&f).map_err(err)?;
        let r = direct_prescoper(&module, &sf).map_err(err)?;
        let mut printed = String::from("3*(3*n+1)*(3*n+2)");
        for i in 1..=5 {
            printed.push_str(&format!("*(5*n+{i})^2"));
        }
        for i in 0..=5 {
            printed.push_str(&format!("*(6*n+{i})^2"));
        }
        printed.push_str("/(2*n*(2*n+1)");
        for i in 1..=11 {
            printed.push_str(&format!("*(11*n+{i})^2"));
        }
        printed.push(')');
        let ratio = rf(&printed).as_ratn().expect("k-free");
        let want = OreOp::new(vec![ratio.negated(), RatN::one()]);
        ensure(r.op == want, || format!("direct prescoper {}", r.op))?;
        let remainder = module.apply(&r.op, &f);
        let start = Instant::now();
        let t = minimal_telescoper_of(&module, &remainder).map_err(err)?;
        let spent = start.elapsed();
        ensure(t.order() == 6, || format!("telescoper of the remainder has order {}", t.order()))?;
        Ok(spent)
    };
    match run() {
        Ok(spent) if spent < Duration::from_secs(120) => (Ok(()), spent),
        Ok(spent) => (Err(format!("order-6 stage took {:.1} s", spent.as_secs_f64())), spent),
        Err(e) => (Err(e), Duration::ZERO),
    }
}

fn complement_bases() -> Check {
    for s in ["(-1)^k*binomial(3*n+1,k)*binomial(3*n-k,n)^3", "(-1)^k*binomial(n,k)*binomial(3*k,n)"] {
        let start = Instant::now();
        let module = HyperModule::new(&term(s)).map_err(err)?;
        let basis = module.reducer().wk_basis();
        ensure(basis == [0, 3], || format!("{s}: basis {basis:?}"))?;
        let spent = start.elapsed();
        ensure(spent < Duration::from_secs(2), || format!("{s}: {:.1} s", spent.as_secs_f64()))?;
    }
    Ok(())
}

fn annihilators() -> Check {
    let h = term("(-1)^k*binomial(3*n+1,k)*binomial(3*n-k,n)^3");
    let module = HyperModule::new(&h).map_err(err)?;
    let z = zero_sum_certify(&module, &SumRange::all(), &[]).map_err(err)?;
    let t = minimal_annihilator(&module, &z).map_err(err)?;
    ensure(t == op("Sn - 1"), || format!("first annihilator {t}"))?;
    // natural support: S_k(H)/H vanishes at k = 2n
    for n0 in 2..=10 {
        let s = finite_sum(&h, n0, 0, 2 * n0);
        ensure(s == Rat::one(), || format!("first sum at n = {n0} is {s}"))?;
    }
    annihilates(&t, 2..=9, |n| finite_sum(&h, n, 0, 2 * n))?;

    let h = term("(-1)^k*binomial(n,k)*binomial(3*k,n)");
    let module = HyperModule::new(&h).map_err(err)?;
    let range = SumRange { lo: Bound::At(Lin::constant(0)), hi: Bound::At(Lin::new(1, 0, 0)) };
    let z = zero_sum_certify(&module, &range, &[]).map_err(err)?;
    let t = minimal_annihilator(&module, &z).map_err(err)?;
    ensure(t == op("Sn + 3"), || format!("second annihilator {t}"))?;
    for n0 in 3..=10 {
        let s = finite_sum(&h, n0, 0, n0);
        ensure(s == Rat::from_int(-3).pow(n0), || format!("second sum at n = {n0} is {s}"))?;
    }
    annihilates(&t, 3..=9, |n| finite_sum(&h, n, 0, n))
}

fn vanishing_sums() -> Check {
    let all = NicoleDenominator { lo: Lin::constant(0), hi: Lin::new(1, 0, 0) };
    for j in 0..=11u32 {
        let t = term(&format!("(-1)^k*binomial(n,k)*k^{j}"));
        let mut base = PolyNK::constant(Rat::one());
        for _ in 0..j {
            base = base.mul(&PolyNK::k().scale(&Rat::from_int(-1)));
        }
        let p = NicoleNumerator { scale: parse("factorial(n)").map_err(err)?, base, blocks: Vec::new() };
        let v = vanishing_sum_check(&t, &p, &all).map_err(err)?;
        ensure(v.certified, || format!("j = {j} not certified"))?;
        let from = v.valid_from.expect("certified");
        ensure(from <= (j as i64 + 1).max(2), || format!("j = {j} valid only from {from}"))?;
        for n0 in (j as i64 + 1).max(2)..=12 {
            let s = finite_sum(&t, n0, 0, n0);
            ensure(s.is_zero(), || format!("j = {j}, n = {n0}: sum {s}"))?;
        }
    }
    let t = term("binomial(2*k,k)*binomial(2*n-2*k,n-k)/(2*k-1)");
    let block = Block { lo: Lin::constant(1), hi: Lin::new(1, 0, -1), s: 2, t: 2, c: 1, e: 1 };
    let p = NicoleNumerator { scale: parse("-2^n").map_err(err)?, base: PolyNK::constant(Rat::one()), blocks: vec![block] };
    let v = vanishing_sum_check(&t, &p, &all).map_err(err)?;
    ensure(v.certified && v.valid_from == Some(1), || format!("second vanishing sum {v:?}"))?;
    for n0 in 1..=12 {
        let s = finite_sum(&t, n0, 0, n0);
        ensure(s.is_zero(), || format!("second vanishing sum at n = {n0} is {s}"))?;
    }
    Ok(())
}

fn printed_psi() -> MatN {
    let rows = [
        ["12*n^3+16*n+64", "-64*n^2+32*n+192", "128*n+192"],
        ["4*n^4-2*n^3+4*n^2-8*n-48", "-20*n^3+16*n^2-16*n-128", "32*n^2-16*n-96"],
        ["n^5-2*n^4+4*n^3+32", "-4*n^4+16*n^3-16*n^2-32*n+64", "4*n^3-40*n^2-48*n+32"],
    ];
    let d = rf("4*(n+2)^3").as_ratn().expect("k-free");
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|s| rf(s).as_ratn().expect("k-free").over(&d)).collect()).collect())
}

fn automorphism() -> Check {
    let module = HyperModule::new(&term("binomial(n,2*k)^2")).map_err(err)?;
    let sigma = sigma_matrix(&module).map_err(err)?;
    ensure(sigma.rows() == 3, || format!("dim W_K = {}", sigma.rows()))?;
    let den = rf("4*(n+2)^3").as_ratn().expect("k-free").numer().clone();
    let sols = find_automorphisms(&sigma, 5, &den).map_err(err)?;
    ensure(sols.len() == 2, || format!("solution space has dimension {}", sols.len()))?;
    let flat = |m: &MatN| m.to_rows().concat();
    let id = MatN::identity(3);
    let psi = printed_psi();
    ensure(commutator(&sigma, &psi).is_zero(), || "printed matrix does not commute".into())?;
    ensure(psi.mul(&psi) == id, || "printed matrix is not an involution".into())?;
    let span: Vec<Vec<RatN>> = sols.iter().map(flat).collect();
    for (name, m) in [("identity", &id), ("printed matrix", &psi)] {
        let mut rows = span.clone();
        rows.push(flat(m));
        ensure(Matrix::from_rows(rows).rank() == 2, || format!("{name} is outside the solution space"))?;
    }
    Ok(())
}

fn run_prop<S: proptest::strategy::Strategy>(
    cases: u32,
    strategy: S,
    check: impl Fn(S::Value) -> std::result::Result<(), proptest::test_runner::TestCaseError>,
) -> Check {
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, check).map_err(|e| e.to_string())
}

fn properties() -> Check {
    run_prop(100, ratfunc(), |f| check_abramov(&f)).map_err(|e| format!("Abramov identity: {e}"))?;
    run_prop(100, linear_pole_ratfunc(), |f| check_summability(&f)).map_err(|e| format!("summability: {e}"))?;
    run_prop(50, binomial_product(), |h| check_reduction(&h)).map_err(|e| format!("reduction identity: {e}"))?;
    for t in corpus_terms() {
        check_prescoper_divides(&t)?;
    }
    run_prop(50, (operator(2), operator(2)), |(a, b)| check_lclm(&a, &b)).map_err(|e| format!("lclm: {e}"))?;
    run_prop(100, (operator(6), 1usize..5), |(r, l)| check_separation(&r, l)).map_err(|e| format!("separation: {e}"))
}

fn timed(limit: u64, f: impl FnOnce() -> Check) -> (Check, Duration) {
    let start = Instant::now();
    let out = f();
    let spent = start.elapsed();
    match out {
        Ok(()) if spent > Duration::from_secs(limit) => (Err(format!("took {:.1} s, limit {limit} s", spent.as_secs_f64())), spent),
        other => (other, spent),
    }
}

fn main() {
    let filter: Option<u32> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let criteria: Vec<Criterion> = vec![
        (1, "telescoper of (-1)^k binomial(2n+1,k)^2", Box::new(|| timed(5, alternating_square))),
        (2, "second-order telescoper and exact sums", Box::new(|| timed(10, second_order))),
        (3, "prescoper S_n - 1 and its residual", Box::new(|| timed(10, first_prescoper))),
        (4, "kernel, direct prescoper and order-6 telescoper", Box::new(order_six_remainder)),
        (5, "complement bases {1, k^3}", Box::new(|| timed(4, complement_bases))),
        (6, "zero-sum annihilators and exact sums", Box::new(|| timed(60, annihilators))),
        (7, "vanishing sums", Box::new(|| timed(60, vanishing_sums))),
        (8, "automorphism of binomial(n,2k)^2", Box::new(|| timed(60, automorphism))),
        (9, "property suites", Box::new(|| timed(600, properties))),
    ];
    let mut failed = 0;
    for (id, name, run) in criteria {
        if filter.is_some_and(|f| f != id) {
            continue;
        }
        let (out, spent) = run();
        let secs = spent.as_secs_f64();
        match out {
            Ok(()) => println!("criterion {id}: PASS  {name} ({secs:.2} s)"),
            Err(e) => {
                failed += 1;
                println!("criterion {id}: FAIL  {name} ({secs:.2} s): {e}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
