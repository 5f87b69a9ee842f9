#![allow(clippy::needless_range_loop)]

use gbound::conformal::{canonical_coordinate, canonical_inverse};
use gbound::format::sig17;
use gbound::gfraction::{apriori_bounds, closed_form_bounds, eval_truncated, synthesize_function};
use gbound::return_time::{classify_region, quadratic_roots, sign_test_region};
use gbound::series::Series;
use gbound::three_body::{accelerations, sundman_half_height, ThreeBodySystem};
use gbound::{envelope, DomainSpec, GFraction};
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = f64> {
    0.01f64..0.99
}

fn spec_strategy() -> impl Strategy<Value = DomainSpec> {
    (0usize..3, 0.5f64..2.0, 0.5f64..2.0, 0.5f64..2.0).prop_map(|(kind, m, t, b)| match kind {
        0 => DomainSpec::rectangle(m, t, b).unwrap(),
        1 => DomainSpec::strip(m, b).unwrap(),
        _ => DomainSpec::semi_strip(m, t, b).unwrap(),
    })
}

fn vec3() -> impl Strategy<Value = [f64; 3]> {
    [-3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0]
}

proptest! {
    #[test]
    fn bounds_sandwich_and_nest(g in prop::collection::vec(coeff(), 1..7), w in -0.999f64..50.0) {
        let full = eval_truncated(&g, w).unwrap();
        let mut prev: Option<(f64, f64)> = None;
        for p in 1..=g.len() {
            let (lo, hi) = apriori_bounds(&g[..p], w).unwrap();
            let tol = 1e-12 * (1.0 + hi.abs());
            prop_assert!(lo - tol <= full && full <= hi + tol, "p={p}: {lo} {full} {hi}");
            if let Some((plo, phi)) = prev {
                prop_assert!(plo - tol <= lo && hi <= phi + tol);
            }
            prev = Some((lo, hi));
        }
    }

    #[test]
    fn closed_forms_match_general_bounds(g in prop::collection::vec(coeff(), 3), w in -0.999f64..20.0) {
        for k in 1..=3 {
            let (a, b) = apriori_bounds(&g[..k], w).unwrap();
            let (c, d) = closed_form_bounds(k, &g, w).unwrap();
            let (c, d) = (c.min(d), c.max(d));
            prop_assert!((a - c).abs() < 1e-12 * (1.0 + a.abs()));
            prop_assert!((b - d).abs() < 1e-12 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn envelope_contains_function(
        spec in spec_strategy(),
        mu0 in 0.3f64..3.0,
        g in prop::collection::vec(coeff(), 1..5),
        frac_z in 0.02f64..0.98,
    ) {
        let (lo, hi) = spec.interval();
        let (lo, hi) = (lo.max(-4.0), hi.min(4.0));
        let z = lo + (hi - lo) * frac_z;
        let frac = GFraction::new(mu0, g).unwrap();
        let f = synthesize_function(&frac, &spec).eval(z).unwrap();
        for p in 1..=frac.len() {
            let s = envelope(&frac, &spec, p, &[z]).unwrap()[0].clone().unwrap();
            let tol = 1e-10 * spec.bound();
            prop_assert!(s.lower - tol <= f && f <= s.upper + tol, "p={p} z={z}: {} {f} {}", s.lower, s.upper);
            prop_assert!(s.lower >= -spec.bound() - tol && s.upper <= spec.bound() + tol);
        }
    }

    #[test]
    fn sig17_round_trips(bits in any::<u64>()) {
        let x = f64::from_bits(bits);
        prop_assume!(x.is_finite());
        let text = sig17(x);
        prop_assert_eq!(text.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{}", text);
    }

    #[test]
    fn canonical_map_monotone_with_inverse(spec in spec_strategy(), a in 0.02f64..0.98, b in 0.02f64..0.98) {
        let (lo, hi) = spec.interval();
        let (lo, hi) = (lo.max(-4.0), hi.min(4.0));
        let (z1, z2) = (lo + (hi - lo) * a.min(b), lo + (hi - lo) * a.max(b));
        let w1 = canonical_coordinate(z1, &spec).unwrap();
        let w2 = canonical_coordinate(z2, &spec).unwrap();
        prop_assert!(w1 <= w2);
        prop_assert!(w1 >= -1.0);
        if 1.0 + w1 > 1e-6 && w1.abs() < 1e8 {
            let back = canonical_inverse(w1, &spec).unwrap();
            prop_assert!((back - z1).abs() < 1e-7 * (1.0 + z1.abs()), "{} vs {}", back, z1);
        }
    }

    #[test]
    fn quadratic_roots_positive_and_regions_agree(g1 in coeff(), g2 in coeff()) {
        let r = quadratic_roots(g1, g2);
        for (small, large) in [(r.t11, r.t12), (r.t21, r.t22)] {
            if let (Some(s), Some(l)) = (small, large) {
                prop_assert!(s > 0.0 && s <= l);
            }
        }
        let region = classify_region(g1, g2);
        prop_assert_eq!(region, sign_test_region(g1, g2));
        if let Some(reg) = region {
            let expected = if g1 < 0.5 { r.t21 } else { r.t11 };
            prop_assert!(expected.is_some());
            prop_assert!(reg.sign() == 1.0 || reg.sign() == -1.0);
        }
    }

    #[test]
    fn series_reciprocal_identity(c in prop::collection::vec(-2.0f64..2.0, 1..8), a0 in 0.5f64..2.0) {
        let mut coeffs = c;
        coeffs[0] = a0;
        let s = Series::new(coeffs);
        let prod = s.mul(&s.recip());
        prop_assert!((prod.coeff(0) - 1.0).abs() < 1e-12);
        for n in 1..=prod.order() {
            prop_assert!(prod.coeff(n).abs() < 1e-9 * 4f64.powi(n as i32));
        }
    }

    #[test]
    fn sundman_height_decreases(m in 0.1f64..2.0, gamma in 1.0f64..6.0, kc in 0.0f64..5.0, chi in 0.01f64..1.0, d in 0.01f64..1.0) {
        prop_assume!(m <= gamma);
        let b = sundman_half_height(m, gamma, kc, chi);
        prop_assert!(b > 0.0);
        prop_assert!(sundman_half_height(m, gamma, kc + d, chi) < b);
        prop_assert!(sundman_half_height(m, gamma + d, kc, chi) < b);
    }

    #[test]
    fn internal_forces_cancel(
        masses in [0.1f64..5.0, 0.1f64..5.0, 0.1f64..5.0],
        p in [vec3(), vec3(), vec3()],
        v in [vec3(), vec3(), vec3()],
    ) {
        prop_assume!((0..3).all(|i| (0..i).all(|j| {
            let d: f64 = (0..3).map(|c| (p[i][c] - p[j][c]).powi(2)).sum();
            d > 0.01
        })));
        let sys = ThreeBodySystem::new(masses, p, v).unwrap();
        let a = accelerations(&sys).unwrap();
        let scale: f64 = (0..3).map(|i| masses[i] * a[i].iter().map(|x| x.abs()).sum::<f64>()).sum();
        for c in 0..3 {
            let total: f64 = (0..3).map(|i| masses[i] * a[i][c]).sum();
            prop_assert!(total.abs() <= 1e-12 * (1.0 + scale));
        }
    }
}
