use super::*;
use crate::algebra::kpoly::{k_linear, k_var};
use crate::term::parse;

fn rf(s: &str) -> RatNK {
    crate::term::parse_ratfunc(s).unwrap()
}

#[test]
fn abramov_examples() {
    let d = abramov_reduce(&rf("1/(k*(k+1))"));
    assert!(d.r.is_zero());
    assert_eq!(d.g, rf("-1/k"));
    let d = abramov_reduce(&rf("1/k"));
    assert_eq!(d.r, rf("1/k"));
    assert!(d.g.is_zero());
    let d = abramov_reduce(&rf("1/(k-3*n) + 1/(k-3*n+5)"));
    assert_eq!(d.r, rf("2/(k-3*n)"));
    let d = abramov_reduce(&rf("k^3 + n*k"));
    assert!(d.r.is_zero());
}

#[test]
fn residues_by_orbit() {
    assert!(discrete_residues(&rf("1/(k*(k+1))")).unwrap().is_empty());
    let r = discrete_residues(&rf("1/k + 2/(k+7)")).unwrap();
    assert_eq!(r, vec![OrbitResidue { orbit_rep: RatN::zero(), multiplicity: 1, residue: RatN::int(3) }]);
    let r = discrete_residues(&rf("1/(3*k-n+1)^2 - 1/(3*k-n+4)^2 + n/(k+1/2)")).unwrap();
    assert_eq!(r.len(), 1);
    assert_eq!(r[0].orbit_rep, RatN::from_rat(&Rat::frac(1, 2)));
    assert_eq!(r[0].residue, RatN::var());
    assert!(matches!(
        discrete_residues(&rf("1/(k^2+n)")),
        Err(Error::NonLinearDenominator { degree: 2, .. })
    ));
}

#[test]
fn euler_residues_vanish_at_fixed_n() {
    // n = 4, j = 2: 4! (-y)^2 / (y (y+1) ... (y+4))
    let mut den = KPoly::one();
    for i in 0..=4 {
        den = den.mul_ref(&k_linear(0, 1, i));
    }
    let num = k_var().pow(2).scale(&RatN::int(24));
    let f = RatNK::new(num, den);
    assert!(discrete_residues(&f).unwrap().is_empty());
    assert!(is_summable(&f));
}

#[test]
fn summability() {
    assert!(is_summable(&rf("1/(k*(k+1))")));
    assert!(!is_summable(&rf("1/k")));
    assert!(is_summable(&rf("k/(k*(k+1)*(k+2)*(k+3))")));
}

#[test]
fn nicole_degree_bound() {
    let b = |v: &[i64]| v.iter().map(|&x| RatN::int(x)).collect::<Vec<_>>();
    let p = PolyNK::n().scale(&Rat::from(2)).add(&PolyNK::constant(Rat::one()));
    assert!(nicole_certify(&p, &b(&[0, 1, 2])).unwrap());
    assert!(!nicole_certify(&PolyNK::k().mul(&PolyNK::k()), &b(&[0, 1, 2])).unwrap());
    let half = vec![RatN::zero(), RatN::from_rat(&Rat::frac(1, 2))];
    assert!(matches!(nicole_certify(&PolyNK::k(), &half), Err(Error::BadOrbit(_))));
    // the vanisum numerator at n = 5
    let mut p = PolyNK::constant(Rat::from(-32));
    for i in 1..=4 {
        let f = PolyNK::k().scale(&Rat::from(2)).add(&PolyNK::constant(Rat::from(2 * i + 1)));
        p = p.mul(&f);
    }
    assert!(nicole_certify(&p, &b(&[0, 1, 2, 3, 4, 5])).unwrap());
}

fn euler(j: u32) -> (HyperTerm, NicoleNumerator, NicoleDenominator) {
    let t = HyperTerm::parse(&format!("(-1)^k*binomial(n,k)*k^{j}")).unwrap();
    let mut base = PolyNK::constant(Rat::one());
    for _ in 0..j {
        base = base.mul(&PolyNK::k().scale(&Rat::from(-1)));
    }
    let num = NicoleNumerator { scale: parse("factorial(n)").unwrap(), base, blocks: Vec::new() };
    (t, num, NicoleDenominator { lo: Lin::constant(0), hi: Lin::new(1, 0, 0) })
}

fn vanisum() -> (HyperTerm, NicoleNumerator, NicoleDenominator) {
    let t = HyperTerm::parse("binomial(2*k,k)*binomial(2*n-2*k,n-k)/(2*k-1)").unwrap();
    let block = Block { lo: Lin::constant(1), hi: Lin::new(1, 0, -1), s: 2, t: 2, c: 1, e: 1 };
    let num = NicoleNumerator { scale: parse("-2^n").unwrap(), base: PolyNK::constant(Rat::one()), blocks: vec![block] };
    (t, num, NicoleDenominator { lo: Lin::constant(0), hi: Lin::new(1, 0, 0) })
}

#[test]
fn euler_vanishing_sums() {
    for j in 0..4 {
        let (t, p, q) = euler(j);
        let v = vanishing_sum_check(&t, &p, &q).unwrap();
        assert!(v.certified);
        assert_eq!(v.valid_from, Some(j as i64 + 1));
        for n in (j as i64 + 1).max(2)..=9 {
            assert!(finite_sum(&t, n, -2, n + 2).is_zero(), "n = {n}, j = {j}");
        }
    }
}

#[test]
fn vanisum_certified() {
    let (t, p, q) = vanisum();
    let v = vanishing_sum_check(&t, &p, &q).unwrap();
    assert!(v.certified);
    assert_eq!(v.valid_from, Some(1));
    for n in 1..=9 {
        assert!(finite_sum(&t, n, 0, n).is_zero());
    }
}

#[test]
fn perturbed_numerator_is_rejected() {
    let (t, mut p, q) = euler(2);
    p.base = p.base.add(&PolyNK::k().mul(&PolyNK::k()).mul(&PolyNK::k()));
    assert!(matches!(vanishing_sum_check(&t, &p, &q), Err(Error::MismatchedTerm(_))));
    let (t, mut p, q) = vanisum();
    p.scale = parse("2^n").unwrap();
    assert!(matches!(vanishing_sum_check(&t, &p, &q), Err(Error::MismatchedTerm(_))));
}

#[test]
fn degree_bound_failure_is_not_certified() {
    let (t, mut p, q) = euler(0);
    let t = t.scaled(&rf("k^3")).unwrap();
    p.base = PolyNK::k().mul(&PolyNK::k()).mul(&PolyNK::k()).scale(&Rat::from(-1));
    let v = vanishing_sum_check(&t, &p, &q).unwrap();
    assert_eq!(v.valid_from, Some(4));
    assert!(!finite_sum(&t, 3, 0, 3).is_zero());
}
