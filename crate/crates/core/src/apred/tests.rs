use super::*;
use crate::term::{parse_ratfunc, HyperTerm};

fn rf(s: &str) -> RatNK {
    parse_ratfunc(s).unwrap()
}

fn kp(s: &str) -> KPoly {
    let r = rf(s);
    assert!(r.den().is_one());
    r.num().clone()
}

#[test]
fn normal_form_of_a_pure_shell() {
    let nf = rational_normal_form(&rf("(k+1)/k"));
    assert_eq!(nf.kernel, RatNK::one());
    assert_eq!(nf.shell, rf("k"));
    let nf = rational_normal_form(&RatNK::one());
    assert_eq!((nf.kernel, nf.shell), (RatNK::one(), RatNK::one()));
}

#[test]
fn normal_form_identity() {
    let g = rf("(k+3)*(k-n)^2*(2*k+1)/((k+1)*(k-n+2)*(2*k+5)*(k^2+n))");
    let nf = rational_normal_form(&g);
    assert_eq!(nf.shell.shift_k(1).div(&nf.shell).mul(&nf.kernel), g);
    assert!(dispersion_set(nf.kernel.num(), nf.kernel.den()).is_empty());
}

#[test]
fn shift_reduced_kernel_is_kept() {
    let t = HyperTerm::parse("binomial(5*n,3*k)^2/binomial(n,k)").unwrap();
    let nf = rational_normal_form(t.gk());
    assert_eq!(nf.shell, RatNK::one());
    let printed = rf("(3*k-5*n)^2*(3*k-5*n+1)^2*(3*k-5*n+2)^2/(9*(n-k)*(k+1)*(3*k+1)^2*(3*k+2)^2)");
    assert_eq!(nf.kernel, printed);
}

#[test]
fn strong_primeness() {
    let t = HyperTerm::parse("binomial(5*n,3*k)^2/binomial(n,k)").unwrap();
    assert!(strongly_prime(&kp("2*n+k"), t.gk()));
    let k2 = rf("(k-2*n)^3/((k+1)*(k-3*n)^2)");
    assert!(!strongly_prime(&kp("k+1"), &k2));
    assert!(strongly_prime(&KPoly::one(), &k2));
}

#[test]
fn complement_bases() {
    let red = Reducer::new(&rf("(k-2*n)^3/((k+1)*(k-3*n)^2)")).unwrap();
    assert_eq!(red.wk_basis(), &[0, 3]);
    let t = HyperTerm::parse("(-1)^k*binomial(n,k)*binomial(3*k,n)").unwrap();
    let red = Reducer::new(&rational_normal_form(t.gk()).kernel).unwrap();
    assert_eq!(red.wk_basis(), &[0, 3]);
    assert_eq!(red.v(), &kp("(3*k-n+1)*(3*k-n+2)*(3*k-n+3)"));
    let t = HyperTerm::parse("binomial(n,2*k)^2").unwrap();
    let red = Reducer::new(&rational_normal_form(t.gk()).kernel).unwrap();
    assert_eq!(red.wk_basis(), &[0, 1, 2]);
}

#[test]
fn image_elements_are_summable() {
    let red = Reducer::new(&rf("(k-2*n)^3/((k+1)*(k-3*n)^2)")).unwrap();
    for q in ["1", "k", "k^4 + n*k - 3", "(n+1)*k^2"] {
        let q = kp(q);
        let f = RatNK::new(red.image().phi(&q), red.v().clone());
        let res = red.reduce(&f);
        assert!(is_hyper_summable(&res), "phi({q:?}) not summable");
        assert!(red.defect(&f, &res).is_zero());
    }
    let r = rf("1/(k+n) + k/(k-3*n+2)^2");
    let f = red.kernel().mul(&r.shift_k(1)).sub(&r);
    let res = red.reduce(&f);
    assert!(res.is_zero());
    assert!(red.defect(&f, &res).is_zero());
}

#[test]
fn first_zero_sum_residual() {
    let h = HyperTerm::parse("(-1)^k*binomial(3*n+1,k)*binomial(3*n-k,n)^3").unwrap();
    let shell = rf("1/(k-3*n-1)");
    let kernel = h.gk().mul(&shell).div(&shell.shift_k(1));
    let red = Reducer::new(&kernel).unwrap();
    assert_eq!(red.v(), &kp("(k+1)*(k-3*n)^2"));
    let f = h.gn().sub(&RatNK::one()).mul(&shell);
    let res = red.reduce(&f);
    assert!(!res.has_polar_part());
    let expected = rf("(37*n^7+96*n^6+81*n^5+22*n^4)/(8*(n+1)^3*(9*n^2+10*n+3))");
    assert_eq!(RatNK::from_poly(res.p.clone()), expected);
    assert!(red.defect(&f, &res).is_zero());
}

#[test]
fn second_zero_sum_residual() {
    let h = HyperTerm::parse("(-1)^k*binomial(n,k)*binomial(3*k,n)").unwrap();
    let nf = rational_normal_form(h.gk());
    assert_eq!(nf.shell, RatNK::one());
    let red = Reducer::new(&nf.kernel).unwrap();
    let res = red.reduce(&RatNK::one());
    assert!(!res.has_polar_part());
    let expected = rf("(81*k^3*n-n^4+108*k^3+4*n^3-12*n^2+12*n+18)/(3*n+4)");
    assert_eq!(RatNK::from_poly(res.p.clone()), expected);
    assert!(red.defect(&RatNK::one(), &res).is_zero());
    let form = ResidualForm::new(&red, &res);
    assert!(!form.is_hyper_summable());
    assert_eq!(form.p, expected);
    assert!(form.a.is_zero());
}

#[test]
fn rational_case_orbits_merge() {
    let red = Reducer::new(&RatNK::one()).unwrap();
    let f = rf("1/(k-3*n) + 1/(k-3*n+5)");
    let res = red.reduce(&f);
    assert_eq!(res.ab(), rf("2/(k-3*n)"));
    assert!(red.defect(&f, &res).is_zero());
    let res = red.reduce(&rf("1/(k*(k+1))"));
    assert!(res.is_zero());
}
