use proptest::prelude::*;

use mvroot::algebra::max_diff;
use mvroot::closed_form::{closed_form_sqrt, closed_form_sqrt_4d, is_degenerate, same_root_sets};
use mvroot::{format_mv, Blade, is_primary, parse_mv, spectral_sqrt, Multivector, Representation, Signature, SqrtConfig};

fn mv_in(sigs: Vec<Signature>) -> impl Strategy<Value = Multivector> {
    (0..sigs.len())
        .prop_flat_map(move |k| {
            let s = sigs[k];
            (Just(s), prop::collection::vec((-2.0f64..2.0, 0u8..3), s.dim()))
        })
        .prop_map(|(s, raw)| {
            // about a third of the coefficients dropped, so sparse shapes show up
            let c = raw.into_iter().map(|(x, keep)| if keep == 0 { 0.0 } else { x }).collect();
            Multivector::from_coeffs(s, c).unwrap()
        })
}

fn any_mv() -> impl Strategy<Value = Multivector> {
    mv_in(Signature::all())
}

fn small_mv() -> impl Strategy<Value = Multivector> {
    mv_in(Signature::all().into_iter().filter(|s| s.n() <= 3).collect())
}

// the 4D shapes with closed forms: even part of Cl(4,0) and Cl(3,1),
// rotor and boost parts of Cl(1,3)
fn shaped_4d() -> impl Strategy<Value = Multivector> {
    const EVEN: [usize; 8] = [0, 3, 5, 6, 9, 10, 12, 15];
    let shapes: Vec<(Signature, Vec<usize>)> = vec![
        (Signature::new(4, 0).unwrap(), EVEN.to_vec()),
        (Signature::new(3, 1).unwrap(), EVEN.to_vec()),
        (Signature::new(1, 3).unwrap(), vec![0, 6, 10, 12, 15]),
        (Signature::new(1, 3).unwrap(), vec![0, 3, 5, 9, 15]),
    ];
    (0..shapes.len(), prop::collection::vec((-2.0f64..2.0, 0u8..3), 8)).prop_map(move |(k, raw)| {
        let (s, masks) = &shapes[k];
        let mut a = Multivector::zero(*s);
        for (&m, &(x, keep)) in masks.iter().zip(&raw) {
            // the bivector slot right after the scalar is always kept, so
            // the Cl(1,3) shapes stay recognizable
            if keep != 0 || m == masks[1] {
                a.set(Blade(m as u32), x);
            }
        }
        a
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn accepted_roots_square_back(a in any_mv()) {
        let cfg = SqrtConfig::default();
        let r = spectral_sqrt(&a, &cfg);
        for b in r.accepted() {
            prop_assert!(max_diff(&b.square(), &a) <= cfg.root_tol * (1.0 + a.max_abs()));
        }
        prop_assert!(r.accepted().len() <= a.sig().max_roots());
    }

    #[test]
    fn roots_come_in_pairs(a in any_mv()) {
        let r = spectral_sqrt(&a, &SqrtConfig::default());
        let acc = r.accepted();
        for b in &acc {
            let nb = -*b;
            prop_assert!(acc.iter().any(|c| max_diff(c, &nb) <= 1e-9 * (1.0 + b.max_abs())));
        }
    }

    #[test]
    fn text_round_trip(a in any_mv()) {
        let back = parse_mv(&format_mv(&a, 17), a.sig()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn representation_is_multiplicative(a in any_mv(), b_raw in prop::collection::vec(-2.0f64..2.0, 64)) {
        let s = a.sig();
        let b = Multivector::from_coeffs(s, b_raw[..s.dim()].to_vec()).unwrap();
        let rep = Representation::get(s);
        let lhs = rep.mv_to_matrix(&(&a * &b));
        let rhs = rep.mv_to_matrix(&a) * rep.mv_to_matrix(&b);
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + a.max_abs() * b.max_abs()));
        let back = rep.matrix_to_mv(&rep.mv_to_matrix(&a)).unwrap();
        prop_assert!(max_diff(&back.mv, &a) <= 1e-12 * (1.0 + a.max_abs()));
    }

    #[test]
    fn closed_form_matches_spectral(a in small_mv()) {
        let cfg = SqrtConfig::default();
        let sp = spectral_sqrt(&a, &cfg);
        if let Some(cf) = closed_form_sqrt(&a, &cfg) {
            prop_assume!(!is_degenerate(&cf));
            for b in cf.accepted() {
                prop_assert!(max_diff(&b.square(), &a) <= cfg.root_tol * (1.0 + a.max_abs()));
            }
            // with a repeated eigenvalue only the primary roots are pinned down
            let primary = |r: &[&Multivector]| -> Vec<Multivector> {
                r.iter().filter(|b| is_primary(&a, b, 1e-7)).map(|b| (*b).clone()).collect()
            };
            let (ps, pc) = (primary(&sp.accepted()), primary(&cf.accepted()));
            prop_assert!(same_root_sets(&ps.iter().collect::<Vec<_>>(), &pc.iter().collect::<Vec<_>>(), 1e-7));
        }
    }

    #[test]
    fn closed_form_4d_matches_spectral(a in shaped_4d()) {
        let cfg = SqrtConfig::default();
        let sp = spectral_sqrt(&a, &cfg);
        let cf = closed_form_sqrt_4d(&a, &cfg).expect("shape has a closed form");
        prop_assume!(!is_degenerate(&cf));
        for b in cf.accepted() {
            prop_assert!(max_diff(&b.square(), &a) <= cfg.root_tol * (1.0 + a.max_abs()));
        }
        let ps: Vec<&Multivector> = sp.accepted().into_iter().filter(|b| is_primary(&a, b, 1e-7)).collect();
        let pc: Vec<&Multivector> = cf.accepted().into_iter().filter(|b| is_primary(&a, b, 1e-7)).collect();
        prop_assert!(same_root_sets(&ps, &pc, 1e-7));
    }
}
