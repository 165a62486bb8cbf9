use mvroot::algebra::max_diff;
use mvroot::closed_form::{closed_form_any, same_root_sets, sullivan_roots};
use mvroot::equations::{mv_inverse, solve_quadratic, solve_riccati, RiccatiProblem, SignChoice};
use mvroot::{
    mv_approx_eq, mv_exp, parse_mv, spectral_sqrt, sqrt_minus_one, Multivector, RootStatus, Signature,
    SqrtConfig,
};

fn sig(p: usize, q: usize) -> Signature {
    Signature::new(p, q).unwrap()
}

fn mv(p: usize, q: usize, text: &str) -> Multivector {
    parse_mv(text, sig(p, q)).unwrap()
}

#[test]
fn four_roots_in_cl30() {
    let a = mv(3, 0, "-1 + e3 - e12 + 1/2 e123");
    let r = spectral_sqrt(&a, &SqrtConfig::default());
    assert_eq!(r.accepted().len(), 4);
    let cf = closed_form_any(&a, &SqrtConfig::default()).unwrap();
    assert!(same_root_sets(&r.accepted(), &cf.accepted(), 1e-10));
    let sul = sullivan_roots(&a, &SqrtConfig::default()).unwrap();
    assert!(same_root_sets(&r.accepted(), &sul.accepted(), 1e-10));
}

#[test]
fn minus_one_root_counts() {
    // standard basis: roots of -1 are diagonal in C classes only; in H and
    // R classes they come in continuous families
    for (p, q, n) in [(0, 1, 2), (1, 1, 0), (0, 2, 0), (3, 0, 4), (4, 1, 16), (2, 2, 0)] {
        let r = sqrt_minus_one(sig(p, q), None, &SqrtConfig::default());
        assert_eq!(r.accepted().len(), n, "Cl({p},{q})");
    }
}

#[test]
fn hyperbolic_plane_rejects_complex_patterns() {
    let a = mv(1, 1, "2 + e1");
    let r = spectral_sqrt(&a, &SqrtConfig::default());
    assert_eq!(r.accepted().len(), 4);
    let neg = spectral_sqrt(&mv(1, 1, "-2 + e1"), &SqrtConfig::default());
    assert!(neg.accepted().len() < 4);
    assert!(neg.entries.iter().any(|e| e.status == RootStatus::RejectedComplex));
}

#[test]
fn nilpotent_and_zero_have_no_listed_roots() {
    for text in ["0", "e1 + e12"] {
        let a = mv(2, 0, text);
        assert!(spectral_sqrt(&a, &SqrtConfig::default()).accepted().is_empty(), "{text}");
    }
}

#[test]
fn exp_of_bivector_is_rotor() {
    let x = mv_exp(&mv(3, 0, "0.7 e12"), &SqrtConfig::default()).unwrap();
    let want = Multivector::from_coeffs(sig(3, 0), {
        let mut c = vec![0.0; 8];
        c[0] = 0.7f64.cos();
        c[3] = 0.7f64.sin();
        c
    })
    .unwrap();
    assert!(mv_approx_eq(&x, &want, 1e-12));
}

#[test]
fn inverse_round_trip_in_cl6() {
    let a = mv(3, 3, "2 + e1 - 0.5 e26 + 0.25 e1345");
    let x = mv_inverse(&a).unwrap();
    assert!(max_diff(&(&a * &x), &Multivector::one(a.sig())) < 1e-12);
}

#[test]
fn quadratic_solutions_satisfy_equation() {
    let a = mv(2, 1, "e1 + 0.3 e23");
    let b = mv(2, 1, "-3 + e2");
    let s = solve_quadratic(&a, &b, &SqrtConfig::default()).unwrap();
    assert!(!s.solutions.is_empty());
    for x in s.xs() {
        let lhs = &(&(&x.square() + &(&a * x)) + &(x * &a)) + &b;
        assert!(lhs.max_abs() < 1e-9);
    }
}

#[test]
fn riccati_sign_choices_partition() {
    let base = RiccatiProblem {
        a: mv(3, 0, "1 + 2e123"),
        b: mv(3, 0, "2 + 3e123"),
        c: mv(3, 0, "3 + 4e123"),
        sign: SignChoice::Both,
    };
    let cfg = SqrtConfig::default();
    let n = |sign| solve_riccati(&RiccatiProblem { sign, ..base.clone() }, &cfg).unwrap().solutions.len();
    assert_eq!(n(SignChoice::Plus) + n(SignChoice::Minus), n(SignChoice::Both));
    assert!(n(SignChoice::Plus) > 0);
}

#[test]
fn basis_reaches_quaternion_units() {
    let s = sig(0, 2);
    let r = sqrt_minus_one(s, Some(&mv(0, 2, "e1 + 0.5 e12")), &SqrtConfig::default());
    let acc = r.accepted();
    assert_eq!(acc.len(), 2);
    for b in acc {
        assert!(max_diff(&b.square(), &Multivector::scalar(s, -1.0)) < 1e-12);
    }
}
