use poisson_forge::pdda::{check_toral_contract, one_step_forms, verify_target_torus};
use poisson_forge::{run_chain, Algebra, Chain, Rational};

const M: [[i64; 6]; 6] = [
    [0, 3, 1, 0, -1, -3],
    [-3, 0, 3, 3, 0, -3],
    [-1, -3, 0, 3, 1, 0],
    [0, -3, -3, 0, 3, 3],
    [1, 0, -1, -3, 0, 3],
    [3, 3, 0, -3, -3, 0],
];

fn chain() -> (Algebra, Chain) {
    let a = Algebra::builtin();
    let ore = a.ore.clone().unwrap().with_computed_eta().unwrap();
    let c = run_chain(&a.structure, &ore, 16).unwrap();
    (a, c)
}

fn assert_level_eq(c: &mut Chain, level: usize, i: usize, expr: &str, at: usize) {
    let want = c.evaluate_str(at, expr).unwrap();
    let got = c.stage(level).unwrap().gens[i - 1].clone();
    assert!(c.field().equal(&got, &want), "X_{{{i},{level}}} != {expr}");
}

#[test]
fn explicit_formulas() {
    let (_, mut c) = chain();
    assert_level_eq(&mut c, 6, 1, "X1 - 1/2*X5*X6^-1", 7);
    assert_level_eq(&mut c, 6, 2, "X2 + 3/2*X4*X6^-1 - 3*X3*X5*X6^-1 + X5^3*X6^-2", 7);
    assert_level_eq(&mut c, 6, 3, "X3 - X5^2*X6^-1", 7);
    assert_level_eq(&mut c, 6, 4, "X4 - 2/3*X5^3*X6^-1", 7);
    assert_level_eq(&mut c, 6, 5, "X5", 7);
    assert_level_eq(&mut c, 5, 1, "X1 - X3*X5^-1 + 3/4*X4*X5^-2", 6);
    assert_level_eq(&mut c, 5, 2, "X2 - 3*X3^2*X5^-1 + 9/2*X3*X4*X5^-2 - 9/4*X4^2*X5^-3", 6);
    assert_level_eq(&mut c, 5, 3, "X3 - 3/2*X4*X5^-1", 6);
    assert_level_eq(&mut c, 4, 1, "X1 - 1/3*X3^2*X4^-1", 5);
    assert_level_eq(&mut c, 4, 2, "X2 - 2/3*X3^3*X4^-1", 5);
    assert_level_eq(&mut c, 3, 1, "X1 - 1/2*X2*X3^-1", 4);
    assert_level_eq(&mut c, 2, 5, "X5", 7);
    assert_level_eq(&mut c, 2, 6, "X6", 7);
}

#[test]
fn target_torus() {
    let (a, c) = chain();
    let m: Vec<Vec<Rational>> = M.iter().map(|r| r.iter().map(|&x| Rational::integer(x)).collect()).collect();
    let res = verify_target_torus(c.field(), c.torus(), &m, &a.structure);
    assert_eq!(res.len(), 15);
    assert!(res.iter().all(|(_, _, r)| r.is_zero()));
    let ore = a.ore.as_ref().unwrap();
    assert!(check_toral_contract(&c, ore, &a.structure).is_none());
}

#[test]
fn one_step_forms_agree_with_ambient_route() {
    let (a, mut c) = chain();
    let ore = a.ore.as_ref().unwrap();
    for level in 2..=6 {
        let f = one_step_forms(ore, level, 16).unwrap();
        assert!(f.weights_shift_by_eta, "level {level}");
        for (i, form) in f.forms.iter().enumerate() {
            let want = c.evaluate_at(level + 1, form).unwrap();
            let got = c.stage(level).unwrap().gens[i].clone();
            assert!(c.field().equal(&got, &want), "level {level} generator {}", i + 1);
        }
    }
}
