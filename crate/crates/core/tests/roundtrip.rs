mod common;

use common::*;
use gbound::gfraction::{closed_form_g2, recurrence_coefficients, synthesize_function};
use gbound::{
    extract_coefficients, scale_taylor, DomainSpec, ExtractionStop, GFraction, TaylorData,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn recover(frac: &GFraction, spec: &DomainSpec, order: usize) -> gbound::Extraction {
    let taylor = TaylorData::new(oracle_taylor(frac, spec, order)).unwrap();
    let scaled = scale_taylor(&taylor, spec).unwrap();
    extract_coefficients(&scaled, spec, order).unwrap()
}

#[test]
fn oracle_agrees_with_real_evaluation() {
    let frac = GFraction::new(1.4, vec![0.3, 0.6, 0.2]).unwrap();
    for spec in [
        DomainSpec::rectangle(1.0, 1.3, 0.7).unwrap(),
        DomainSpec::strip(2.0, 0.8).unwrap(),
        DomainSpec::semi_strip(1.5, 0.6, 1.1).unwrap(),
    ] {
        let f = synthesize_function(&frac, &spec);
        for i in 0..20 {
            let x = -0.5 + 0.05 * i as f64;
            let a = oracle_real(&frac, &spec, x);
            let b = f.eval(x).unwrap();
            assert!((a - b).abs() < 1e-13, "{} at {x}: {a} vs {b}", spec.name());
        }
    }
}

#[test]
fn fixed_rectangle_round_trip() {
    let spec = DomainSpec::rectangle(1.0, 1.0, 1.0).unwrap();
    let frac = GFraction::new(2.0, vec![0.3, 0.6, 0.2]).unwrap();
    let ex = recover(&frac, &spec, 6);
    assert!((ex.fraction.mu0() - 2.0).abs() < 1e-8);
    for (got, want) in ex.fraction.coeffs().iter().zip([0.3, 0.6, 0.2, 0.0]) {
        assert!((got - want).abs() < 1e-8, "{:?}", ex.fraction.coeffs());
    }
    assert_eq!(ex.stop, Some(ExtractionStop::RationalTail { index: 4 }));
}

#[test]
fn random_round_trips_all_domains() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for kind in 0..3 {
        for _ in 0..30 {
            let spec = random_spec(&mut rng, kind);
            let frac = random_fraction(&mut rng, 4);
            let ex = recover(&frac, &spec, 4);
            assert!((ex.fraction.mu0() - frac.mu0()).abs() < 1e-8);
            let n = frac.len();
            for i in 0..n {
                let err = (ex.fraction.coeffs()[i] - frac.coeffs()[i]).abs();
                assert!(
                    err < 1e-8,
                    "{} g_{} off by {err}: {:?} vs {:?}",
                    spec.name(),
                    i + 1,
                    ex.fraction.coeffs(),
                    frac.coeffs()
                );
            }
            if n < 4 {
                assert_eq!(ex.stop, Some(ExtractionStop::RationalTail { index: n + 1 }));
            } else {
                assert_eq!(ex.stop, None);
            }
        }
    }
}

#[test]
fn closed_forms_match_recurrence() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for kind in 0..2 {
        for _ in 0..30 {
            let spec = random_spec(&mut rng, kind);
            let frac = random_fraction(&mut rng, 4);
            let taylor = TaylorData::new(oracle_taylor(&frac, &spec, 3)).unwrap();
            let scaled = scale_taylor(&taylor, &spec).unwrap();
            let closed = extract_coefficients(&scaled, &spec, 2).unwrap();
            let peeled = recurrence_coefficients(&scaled, &spec, 2).unwrap();
            for (a, b) in closed
                .fraction
                .coeffs()
                .iter()
                .zip(peeled.fraction.coeffs())
            {
                assert!((a - b).abs() < 1e-10);
            }
            assert!(closed_form_g2(scaled.coeffs(), &spec).is_some());
        }
    }
}
