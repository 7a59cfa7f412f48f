use std::collections::BTreeMap;

use poisson_forge::{parse_expr, Algebra, AlgebraError, DerivationSpec, LaurentPoly, Rational, WeightVector};

const OMEGA1: &str = "X1*X3*X5 - 3/2*X1*X4 - 1/2*X2*X5 + 1/2*X3^2";
const OMEGA2: &str = "X2*X4*X6 - 2/3*X3^3*X6 - 2/3*X2*X5^3 + 2*X3^2*X5^2 - 3*X3*X4*X5 + 3/2*X4^2";

fn p(a: &Algebra, s: &str) -> LaurentPoly {
    parse_expr(s, a.context()).unwrap()
}

#[test]
fn table_value() {
    let a = Algebra::builtin();
    let s = &a.structure;
    assert_eq!(s.bracket(&p(&a, "X2"), &p(&a, "X1")), p(&a, "-3*X1*X2"));
}

#[test]
fn bracket_with_inverse_follows_leibniz() {
    let a = Algebra::builtin();
    let s = a.structure.localized(&["X5"]).unwrap();
    let ctx = s.context().clone();
    let x6 = parse_expr("X6", &ctx).unwrap();
    let x5inv = parse_expr("X5^-1", &ctx).unwrap();
    let got = s.checked_bracket(&x6, &x5inv).unwrap();
    assert_eq!(got, parse_expr("3*X5^-1*X6", &ctx).unwrap());
}

#[test]
fn casimirs_are_central() {
    let a = Algebra::builtin();
    for om in [OMEGA1, OMEGA2] {
        let f = p(&a, om);
        for j in 0..6 {
            assert!(a.structure.bracket(&f, &LaurentPoly::var_at(a.context(), j)).is_zero());
        }
        assert!(a.structure.hamiltonian(&f).is_zero());
    }
}

#[test]
fn jacobi_and_single_mutation() {
    let a = Algebra::builtin();
    assert!(a.structure.check_jacobi().is_none());
    let mutated = a.structure.with_entry(2, 0, p(&a, "-X1*X3 - 2*X2"));
    assert!(mutated.check_jacobi().is_some());
}

#[test]
fn log_canonical_tables_satisfy_jacobi() {
    let ctx = poisson_forge::VarContext::polynomial(&["a", "b", "c", "d"]).unwrap();
    let raw = [[0, 2, -1, 5], [-2, 0, 7, -3], [1, -7, 0, 4], [-5, 3, -4, 0]];
    let m: Vec<Vec<Rational>> = raw.iter().map(|r| r.iter().map(|&x| Rational::integer(x)).collect()).collect();
    let s = poisson_forge::PoissonStructure::log_canonical(&ctx, &m).unwrap();
    assert!(s.check_jacobi().is_none());
}

#[test]
fn derivation_checks() {
    let a = Algebra::builtin();
    let s = &a.structure;
    assert!(s.check_poisson_derivation(&DerivationSpec::zero(a.context())).is_none());
    let h = s.hamiltonian(&p(&a, "X1*X6 + X3^2 - 5*X2"));
    assert!(s.check_poisson_derivation(&h).is_none());
    assert!(s.hamiltonian(&LaurentPoly::one(a.context())).is_zero());

    let mut images = BTreeMap::new();
    for (i, name) in ["X1", "X2", "X3", "X4", "X5", "X6"].iter().enumerate() {
        let img = if i == 0 { p(&a, "X1") } else { LaurentPoly::zero(a.context()) };
        images.insert(name.to_string(), img);
    }
    let d = DerivationSpec::new(a.context(), images).unwrap();
    let v = s.check_poisson_derivation(&d).expect("not a Poisson derivation");
    // On (X1,X2) both sides equal 3X1X2; the first defect is on (X1,X3),
    // where D({X1,X3}) = X1X3 but {X1,X3} = X1X3 + X2.
    assert_eq!(v.pair, (0, 2));
    assert_eq!(v.residue, p(&a, "-X2"));
    assert!(s.derivation_defect(&d, 0, 1).is_zero());
}

#[test]
fn eta_values() {
    let a = Algebra::builtin();
    let o = a.ore.as_ref().unwrap();
    let etas: Vec<Rational> = (2..6).map(|i| o.compute_eta(i).unwrap()).collect();
    assert_eq!(etas, [2, 6, 2, 6].map(Rational::integer));
    assert_eq!(o.compute_eta(1), Err(AlgebraError::EtaUndefined(2)));
    for i in 2..6 {
        assert!(o.nilpotency_witness(i, 16).unwrap() <= 4);
    }
}

#[test]
fn grading() {
    let a = Algebra::builtin();
    let w = a.weights.as_ref().unwrap();
    assert!(a.structure.check_grading(w).unwrap().is_none());
    assert_eq!(w.homogeneous_weight(&p(&a, OMEGA1)), Some(vec![4, 2]));
    assert_eq!(w.homogeneous_weight(&p(&a, OMEGA2)), Some(vec![6, 4]));
    // Zero weights grade every table trivially; a flat weight does not.
    let zero = WeightVector::new(vec![vec![0, 0]; 6]).unwrap();
    assert!(a.structure.check_grading(&zero).unwrap().is_none());
    let flat = WeightVector::new(vec![vec![1, 0]; 6]).unwrap();
    let v = a.structure.check_grading(&flat).unwrap().expect("not graded");
    assert_eq!(v.pair, (0, 2));
}
