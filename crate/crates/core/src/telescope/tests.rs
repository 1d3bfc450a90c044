use super::*;
use crate::term::{parse_ratfunc, Lin};

fn rf(s: &str) -> RatNK {
    parse_ratfunc(s).unwrap()
}

fn nk(s: &str) -> PolyNK {
    rf(s).integer_parts().0
}

fn op(s: &str) -> OreOp {
    OreOp::parse(s).unwrap()
}

fn term(s: &str) -> HyperTerm {
    HyperTerm::parse(s).unwrap()
}

fn ex1() -> HyperTerm {
    term("(-1)^k*binomial(3*n+1,k)*binomial(3*n-k,n)^3")
}

fn ex2() -> HyperTerm {
    term("(-1)^k*binomial(n,k)*binomial(3*k,n)")
}

#[test]
fn telescoper_of_alternating_square() {
    let t = minimal_telescoper(&term("(-1)^k*binomial(2*n+1,k)^2")).unwrap();
    assert_eq!(t, op("(2*n+3)*Sn + 8*n + 8").canonical());
}

#[test]
fn telescoper_of_second_order() {
    let t = minimal_telescoper(&ex2()).unwrap();
    let want = op("Sn^2 + 3*(5*n+7)/(2*(2*n+3))*Sn + 9*(n+1)/(2*(2*n+3))");
    assert_eq!(t, want.canonical());
}

#[test]
fn telescoper_of_shifted_pole() {
    let t = minimal_telescoper(&term("1/(n+2*k)")).unwrap();
    assert_eq!(t, op("Sn^2 - 1"));
}

#[test]
fn no_telescoper_for_non_integer_linear_pole() {
    let err = minimal_telescoper(&term("1/(n^2+k^2)")).unwrap_err();
    assert!(matches!(err, Error::NoTelescoper(_)), "{err}");
}

#[test]
fn integer_linear_factors() {
    let fs = integer_linear_decompose(&nk("(2*n+k)*(2*n+k+3)")).unwrap();
    assert_eq!(fs.len(), 1);
    assert_eq!((fs[0].m, fs[0].l), (2, 1));
    assert!(integer_linear_decompose(&nk("n^2+k")).is_err());
    let fs = integer_linear_decompose(&nk("3*k-n+1")).unwrap();
    assert_eq!((fs[0].m, fs[0].l), (-1, 3));
    assert!(telescoper_exists(&nk("(3*k-n+1)*(k+n)^2")));
    assert!(!telescoper_exists(&nk("k^2+n")));
}

#[test]
fn prescoper_of_first_example() {
    let h = ex1();
    let module = HyperModule::new(&h).unwrap();
    let h0 = module.h0().unwrap();
    let want_h0 = h.scaled(&rf("k-3*n-1")).unwrap();
    for (n0, k0) in [(2, 1), (3, 4), (4, 2)] {
        assert_eq!(h0.eval_int(n0, k0), want_h0.eval_int(n0, k0));
    }
    assert_eq!(module.v(), &rf("(k+1)*(k-3*n)^2").num().monic());
    let r = minimal_prescoper(&h).unwrap();
    assert_eq!(r.op, op("Sn - 1"));
    let p = rf("(37*n^7+96*n^6+81*n^5+22*n^4)/(8*(n+1)^3*(9*n^2+10*n+3))");
    assert_eq!(r.residual(), p.div(&RatNK::from_poly(module.v().clone())));
}

#[test]
fn prescoper_is_one_when_already_in_kernel_submodule() {
    let r = minimal_prescoper(&ex2()).unwrap();
    assert_eq!(r.op, OreOp::one());
}

#[test]
fn prescoper_divides_telescoper() {
    for s in ["(-1)^k*binomial(2*n+1,k)^2", "(-1)^k*binomial(n,k)*binomial(3*k,n)", "1/(n+2*k)", "binomial(n,k)^2/(n+3*k+1)"] {
        let h = term(s);
        let t = minimal_telescoper(&h).unwrap();
        let r = minimal_prescoper(&h).unwrap();
        let (_, rem) = t.rdivmod(&r.op).unwrap();
        assert!(rem.is_zero(), "{s}");
    }
}

#[test]
fn direct_prescoper_of_special_multiplier() {
    let h0 = term("binomial(5*n,3*k)^2/binomial(n,k)");
    let module = HyperModule::new(&h0).unwrap();
    let sf = SpecialForm::from_multiplier(&rf("1/(2*n+k)")).unwrap();
    assert_eq!((sf.m, sf.l, sf.lambda), (2, 1, 1));
    let r = direct_prescoper(&module, &sf).unwrap();
    let num = "3*(3*n+1)*(3*n+2)*(5*n+1)^2*(5*n+2)^2*(5*n+3)^2*(5*n+4)^2*(5*n+5)^2\
               *(6*n)^2*(6*n+1)^2*(6*n+2)^2*(6*n+3)^2*(6*n+4)^2*(6*n+5)^2";
    let mut den = String::from("2*n*(2*n+1)");
    for i in 1..=11 {
        den.push_str(&format!("*(11*n+{i})^2"));
    }
    let ratio = rf(&format!("({num})/({den})")).as_ratn().unwrap();
    assert_eq!(r.op, OreOp::new(vec![ratio.negated(), RatN::one()]));
    let general = minimal_prescoper_of(&module, &rf("1/(2*n+k)")).unwrap();
    assert_eq!(general.op, r.op);
}

#[test]
fn direct_prescoper_recurses_on_lambda() {
    let module = HyperModule::new(&term("binomial(n,k)")).unwrap();
    let f = rf("1/(n+2*k+1)^2");
    let sf = SpecialForm::from_multiplier(&f).unwrap();
    assert_eq!(sf.lambda, 2);
    let d = direct_prescoper(&module, &sf).unwrap();
    let g = minimal_prescoper_of(&module, &f).unwrap();
    assert_eq!(d.op, g.op);
    assert_eq!(d.op.order(), 4);
}

#[test]
fn direct_prescoper_rejects_bad_forms() {
    let module = HyperModule::new(&term("binomial(n,k)")).unwrap();
    let sf = SpecialForm { q: rf("k").num().clone(), m: 1, l: 2, alpha: Rat::zero(), lambda: 1 };
    assert!(matches!(direct_prescoper(&module, &sf), Err(Error::PreconditionViolated(_))));
    assert!(SpecialForm::from_multiplier(&rf("1/(k^2+n)")).is_err());
}

#[test]
fn groups_lclm_matches_joint_search() {
    let module = HyperModule::new(&term("binomial(n,k)")).unwrap();
    let f = rf("1/(n+2*k+1) + 1/(2*n+k) + 1/(n+3*k)");
    assert_eq!(polar_groups(&module, &f).unwrap().len(), 3);
    let joint = minimal_prescoper_of(&module, &f).unwrap();
    let split = prescoper_by_groups(&module, &f).unwrap();
    assert_eq!(joint.op, split.op);
}

#[test]
fn exponent_parts_sum_back() {
    let r = op("Sn^5 + n*Sn^4 - Sn^2 + 3*Sn + n^2");
    let parts = exponent_separation(&r, 2);
    assert_eq!(parts.len(), 2);
    assert_eq!(parts[0], op("n*Sn^4 - Sn^2 + n^2"));
    assert_eq!(parts[0].add(&parts[1]), r);
}

#[test]
fn zero_sum_first_example() {
    let h = ex1();
    let module = HyperModule::new(&h).unwrap();
    assert_eq!(module.reducer().wk_basis(), &[0, 3]);
    let z = zero_sum_certify(&module, &SumRange::all(), &[]).unwrap();
    assert_eq!(z.certified_degrees(), vec![0]);
    assert!(z.closure);
    let t = minimal_annihilator(&module, &z).unwrap();
    assert_eq!(t, op("Sn - 1"));
}

#[test]
fn zero_sum_second_example() {
    let module = HyperModule::new(&ex2()).unwrap();
    assert_eq!(module.reducer().wk_basis(), &[0, 3]);
    let range = SumRange { lo: Bound::At(Lin::constant(0)), hi: Bound::At(Lin::new(1, 0, 0)) };
    let z = zero_sum_certify(&module, &range, &[]).unwrap();
    assert_eq!(z.certified_degrees(), vec![0]);
    assert_eq!(z.n_min, Some(3));
    assert!(z.closure);
    let c = rf("(-9*n^3-21*n^2+36*n+84)/(2*(n+2)*(2*n+5)*(3*n+4))").as_ratn().unwrap();
    assert_eq!(z.closure_matrix, vec![vec![c]]);
    let t = minimal_annihilator(&module, &z).unwrap();
    assert_eq!(t, op("Sn + 3"));
}

#[test]
fn zero_sum_fails_without_a_certificate() {
    let module = HyperModule::new(&term("binomial(n,k)")).unwrap();
    let z = zero_sum_certify(&module, &SumRange::all(), &[]).unwrap();
    assert!(z.is_empty());
    assert!(matches!(minimal_annihilator(&module, &z), Err(Error::NoOperatorFound(1))));
}
