use rocbound_core::channel::Prior;
use rocbound_core::roc::bound_pmd;
use rocbound_web::{bound_curve, detector_curve, equilibrium_curve};

fn interpolate(curve: &[(f64, f64)], x0: f64) -> f64 {
    let w = curve.windows(2).find(|w| w[0].0 <= x0 && x0 <= w[1].0).unwrap();
    w[0].1 + (x0 - w[0].0) / (w[1].0 - w[0].0) * (w[1].1 - w[0].1)
}

#[test]
fn bound_curve_spans_the_grid_and_falls() {
    let c = bound_curve(0.5, 0.0, false, 50).unwrap();
    let x = c.x();
    assert_eq!(x.len(), 50);
    assert_eq!((x[0], x[49]), (1e-4, 0.9999));
    assert!(c.y().windows(2).all(|w| w[1] <= w[0] + 1e-12));
    assert!(c.information() > 0.0 && c.information() < 1.0);
    assert!(c.reference().is_empty());
}

#[test]
fn fading_costs_information_at_high_snr() {
    let fixed = bound_curve(0.5, 10.0, false, 10).unwrap().information();
    let faded = bound_curve(0.5, 10.0, true, 10).unwrap().information();
    assert!(faded < fixed, "{faded} vs {fixed}");
}

#[test]
fn detector_never_beats_the_bound() {
    for (snr_db, kn, fading) in [(0.0, 1, false), (5.0, 4, false), (8.0, 2, true)] {
        let det = detector_curve(0.3, snr_db, kn, fading, 120).unwrap();
        let mi = bound_curve(0.3, snr_db, fading, 2).unwrap().information();
        for (pfa, pmd) in det.points() {
            if pfa > 0.0 && pfa < 1.0 {
                let floor = bound_pmd(Prior::new(0.3).unwrap(), mi, pfa).unwrap();
                assert!(pmd >= floor - 1e-9, "snr {snr_db} kn {kn}: pfa {pfa} pmd {pmd} < {floor}");
            }
        }
    }
}

#[test]
fn equilibrium_meets_the_bound_on_its_diagonal() {
    let eq = equilibrium_curve(0.5, -5.0, 10.0, false, 4).unwrap();
    assert_eq!(eq.x(), vec![-5.0, 0.0, 5.0, 10.0]);
    for (snr_db, peq) in eq.points() {
        // the bound solver, walked along Pfa, crosses Pmd = Pfa at Peq
        let b = bound_curve(0.5, snr_db, false, 2000).unwrap();
        let gap: Vec<(f64, f64)> = b.points().map(|(pfa, pmd)| (pfa, pmd - pfa)).collect();
        let below = gap.iter().position(|g| g.1 <= 0.0).unwrap();
        let (a, c) = (gap[below - 1], gap[below]);
        let crossing = a.0 - a.1 * (c.0 - a.0) / (c.1 - a.1);
        assert!((crossing / peq - 1.0).abs() < 1e-3, "{snr_db} dB: {crossing} vs {peq}");
    }
    let reference = eq.reference();
    assert!((reference[1] - (-1.0f64).exp()).abs() < 1e-15);
}

#[test]
fn equilibrium_worsens_under_fading() {
    let fixed = equilibrium_curve(0.5, 0.0, 15.0, false, 4).unwrap().y();
    let faded = equilibrium_curve(0.5, 0.0, 15.0, true, 4).unwrap().y();
    assert!(fixed.iter().zip(&faded).skip(1).all(|(f, r)| r > f));
}

#[test]
fn longer_windows_at_fixed_energy_trail_single_sample() {
    // same additive SNR over 1 and 8 samples
    let one: Vec<_> = detector_curve(0.5, 6.0, 1, false, 300).unwrap().points().collect();
    let eight: Vec<_> = detector_curve(0.5, 6.0, 8, false, 300).unwrap().points().collect();
    let sorted = |mut v: Vec<(f64, f64)>| {
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        v
    };
    let (one, eight) = (sorted(one), sorted(eight));
    for pfa in [0.01, 0.1, 0.3] {
        assert!(interpolate(&eight, pfa) > interpolate(&one, pfa));
    }
}

#[test]
fn invalid_inputs_are_reported() {
    assert!(bound_curve(1.5, 0.0, false, 10).is_err());
    assert!(bound_curve(0.5, 0.0, false, 1).is_err());
    assert!(detector_curve(0.5, 0.0, 0, false, 10).is_err());
    assert!(detector_curve(0.5, 90.0, 1, false, 10).is_err());
    assert!(detector_curve(0.5, f64::NAN, 1, false, 10).is_err());
    assert!(equilibrium_curve(0.5, 10.0, 0.0, false, 10).is_err());
}
