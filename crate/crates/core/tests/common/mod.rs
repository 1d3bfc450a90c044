//! Generators and checks shared by the property suites and the acceptance run.

#![allow(dead_code)]

use std::path::PathBuf;

use prescope_core::algebra::{Field, Rat, RatN, RatNK};
use prescope_core::ore::OreOp;
use prescope_core::ratsum::{abramov_reduce, discrete_residues, is_summable};
use prescope_core::telescope::{exponent_separation, minimal_prescoper, minimal_telescoper, residual_of, HyperModule};
use prescope_core::term::{parse_ratfunc, HyperTerm};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub fn rf(s: &str) -> RatNK {
    parse_ratfunc(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn small_poly_nk() -> impl Strategy<Value = String> {
    prop::collection::vec((-4i64..=4, 0u32..=2, 0u32..=2), 1..4).prop_map(|ts| {
        let parts: Vec<String> = ts.iter().map(|(c, a, b)| format!("({c})*n^{a}*k^{b}")).collect();
        parts.join("+")
    })
}

fn linear_factor() -> impl Strategy<Value = String> {
    (1i64..=2, -2i64..=2, -3i64..=3, 1u32..=2).prop_map(|(s, a, b, e)| format!("({s}*k+{a}*n+{b})^{e}"))
}

/// Random `f` in `Q(n)(k)` whose denominator mixes linear and quadratic factors.
pub fn ratfunc() -> impl Strategy<Value = String> {
    let quad = (1i64..=3).prop_map(|c| format!("(k^2+{c}*n+1)"));
    let dens = prop::collection::vec(prop_oneof![3 => linear_factor(), 1 => quad], 1..4);
    (small_poly_nk(), dens).prop_map(|(num, ds)| format!("({num})/({})", ds.join("*")))
}

/// Random `f` with linear poles; half of the cases are differences `S_k(g) - g`.
pub fn linear_pole_ratfunc() -> impl Strategy<Value = String> {
    let term = (-3i64..=3, 1i64..=3, -2i64..=2, -3i64..=3, 1u32..=2)
        .prop_map(|(c, d, a, b, e)| format!("({c})/({d}*(k+{a}*n+{b})^{e})"));
    (prop::collection::vec(term, 1..4), any::<bool>()).prop_map(|(ts, diff)| {
        let g = ts.join("+");
        if diff {
            let shifted = g.replace('k', "(k+1)");
            format!("{shifted}-({g})")
        } else {
            g
        }
    })
}

pub fn check_abramov(s: &str) -> Result<(), TestCaseError> {
    let f = rf(s);
    let d = abramov_reduce(&f);
    prop_assert_eq!(d.g.shift_k(1).sub(&d.g).add(&d.r), f.clone(), "{}", s);
    if !d.r.is_zero() {
        prop_assert!(d.r.num().degree() < d.r.den().degree(), "remainder of {} is not proper", s);
    }
    Ok(())
}

pub fn check_summability(s: &str) -> Result<(), TestCaseError> {
    let f = rf(s);
    let residues = discrete_residues(&f).map_err(|e| TestCaseError::fail(format!("{s}: {e}")))?;
    prop_assert_eq!(is_summable(&f), residues.is_empty(), "{}", s);
    Ok(())
}

/// Random products of binomials and linear factors.
pub fn binomial_product() -> impl Strategy<Value = String> {
    let binom = (1i64..=3, 0i64..=2, 1i64..=2, 0i64..=1, 1u32..=2, any::<bool>()).prop_map(|(a, b, c, d, e, inv)| {
        let bin = format!("binomial({a}*n+{b},{c}*k+{d})^{e}");
        if inv {
            format!("1/{bin}")
        } else {
            bin
        }
    });
    let extra = prop_oneof![
        Just(String::new()),
        (1i64..=2, 1i64..=3).prop_map(|(m, c)| format!("/(n+{m}*k+{c})")),
        (1i64..=3).prop_map(|c| format!("*(k+{c})")),
    ];
    (prop::collection::vec(binom, 1..3), any::<bool>(), extra).prop_map(|(bs, sign, extra)| {
        let sign = if sign { "(-1)^k*" } else { "" };
        format!("{sign}{}{extra}", bs.join("*"))
    })
}

/// `H = Delta_k(r H0) + (a/b + p/v) H0` symbolically and at sample points.
pub fn check_reduction(s: &str) -> Result<(), TestCaseError> {
    let h = HyperTerm::parse(s).map_err(|e| TestCaseError::fail(format!("{s}: {e}")))?;
    let module = HyperModule::new(&h).map_err(|e| TestCaseError::fail(format!("{s}: {e}")))?;
    let f = module.shell().clone();
    let res = residual_of(&module);
    prop_assert!(module.reducer().defect(&f, &res).is_zero(), "defect of {}", s);
    let basis = module.reducer().wk_basis();
    for d in 0..=res.p.degree() {
        prop_assert!(res.p.coeff(d).is_zero() || basis.contains(&d), "p of {} leaves W_K", s);
    }
    let h0 = module.h0().map_err(|e| TestCaseError::fail(format!("{s}: {e}")))?;
    let r = res.certificate();
    let m = res.multiplier(module.v());
    let mut checked = 0;
    for n0 in 3..9i64 {
        for k0 in 0..=n0 {
            let (Some(a), Some(b), Some(full)) = (h0.eval_int(n0, k0), h0.eval_int(n0, k0 + 1), h.eval_int(n0, k0)) else {
                continue;
            };
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let (n, k, k1) = (Rat::from_int(n0), Rat::from_int(k0), Rat::from_int(k0 + 1));
            let (Some(fv), Some(r0), Some(r1), Some(mv), Some(kv)) =
                (f.eval(&n, &k), r.eval(&n, &k), r.eval(&n, &k1), m.eval(&n, &k), module.kernel().eval(&n, &k))
            else {
                continue;
            };
            if kv != b.over(&a) {
                continue;
            }
            prop_assert_eq!(fv.times(&a), full.clone(), "H0 of {} at ({}, {})", s, n0, k0);
            let rhs = r1.times(&b).minus(&r0.times(&a)).plus(&mv.times(&a));
            prop_assert_eq!(full, rhs, "{} at ({}, {})", s, n0, k0);
            checked += 1;
        }
    }
    prop_assert!(checked > 0, "no sample point for {}", s);
    Ok(())
}

fn ratn_coeff() -> impl Strategy<Value = RatN> {
    (prop::collection::vec(-3i64..=3, 1..3), -2i64..=3, 0u32..=1).prop_map(|(c, shift, dpow)| {
        let num: Vec<String> = c.iter().enumerate().map(|(i, v)| format!("({v})*n^{i}")).collect();
        let text = format!("({})/(n+{})^{dpow}", num.join("+"), shift + 4);
        rf(&text).as_ratn().expect("k-free")
    })
}

/// Random operator of order at most `max` with nonzero leading coefficient.
pub fn operator(max: usize) -> impl Strategy<Value = OreOp> {
    prop::collection::vec(ratn_coeff(), 1..=max + 1).prop_map(|mut cs| {
        if cs.last().is_some_and(|c| c.is_zero()) {
            *cs.last_mut().expect("nonempty") = RatN::one();
        }
        OreOp::new(cs)
    })
}

pub fn check_lclm(a: &OreOp, b: &OreOp) -> Result<(), TestCaseError> {
    let l = a.lclm(b).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert!(l.order() <= a.order() + b.order());
    for d in [a, b] {
        let (_, rem) = l.rdivmod(d).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!(rem.is_zero(), "lclm({}, {}) = {} not divisible by {}", a, b, l, d);
    }
    Ok(())
}

pub fn check_separation(r: &OreOp, l: usize) -> Result<(), TestCaseError> {
    let parts = exponent_separation(r, l);
    prop_assert_eq!(parts.len(), l);
    let total = parts.iter().fold(OreOp::zero(), |acc, p| acc.add(p));
    prop_assert_eq!(&total, r);
    for (i, p) in parts.iter().enumerate() {
        for (d, c) in p.coeffs().iter().enumerate() {
            prop_assert!(c.is_zero() || d % l == i);
        }
    }
    Ok(())
}

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../cli/corpus")
}

/// Terms of the corpus jobs that ask for a telescoper or a prescoper and succeed.
pub fn corpus_terms() -> Vec<String> {
    let mut paths: Vec<_> = std::fs::read_dir(corpus_dir()).expect("corpus directory").flatten().map(|e| e.path()).collect();
    paths.sort();
    let mut out = Vec::new();
    for p in paths {
        if p.extension().and_then(|e| e.to_str()) != Some("json") {
            continue;
        }
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&p).expect("readable")).expect("json");
        let job = &v["job"];
        let verb = job["verb"].as_str().unwrap_or_default();
        let plain = job.get("multiplier").is_none() && job.get("pre").is_none() && v["expected"].get("error").is_none();
        if matches!(verb, "telescoper" | "prescoper" | "annihilator") && plain {
            if let Some(t) = job["term"].as_str() {
                if !out.iter().any(|s: &String| s == t) {
                    out.push(t.to_string());
                }
            }
        }
    }
    out
}

pub fn check_prescoper_divides(s: &str) -> Result<(), String> {
    let h = HyperTerm::parse(s).map_err(|e| format!("{s}: {e}"))?;
    let t = minimal_telescoper(&h).map_err(|e| format!("{s}: {e}"))?;
    let r = minimal_prescoper(&h).map_err(|e| format!("{s}: {e}"))?;
    let (_, rem) = t.rdivmod(&r.op).map_err(|e| format!("{s}: {e}"))?;
    if rem.is_zero() {
        Ok(())
    } else {
        Err(format!("{s}: prescoper {} does not divide {t}", r.op))
    }
}
