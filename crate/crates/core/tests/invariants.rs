use zeno_core::continuous::{effective_width, noclick_c_large_lambda};
use zeno_core::model::linear_times;
use zeno_core::pulsed::{noclick_bb, noclick_bb_inf, w_lambda, w_lambda_inf};
use zeno_core::{Continuous, Detector, System, Tol};

fn unit() -> System {
    System::unit()
}

fn model(lambda: f64, sigma: f64, t_max: f64) -> Continuous {
    Continuous::new(
        unit(),
        Detector::continuous(lambda, sigma).unwrap(),
        Tol::default(),
        t_max,
    )
    .unwrap()
}

#[test]
fn unitarity_without_detection() {
    let m = model(3.0, 0.0, 5.0);
    let times = linear_times(5.0, 50);
    let n = m.noclick_c(&times).unwrap();
    let worst = n
        .values()
        .iter()
        .map(|v| (v - 1.0).abs())
        .fold(0.0, f64::max);
    assert!(worst <= 1e-4, "{worst:e}");
}

#[test]
fn flux_identity() {
    let s = 3.0;
    let m = model(3.0, s, 2.5);
    let h = 1e-3;
    for t in [0.5, 1.0, 2.0] {
        let ev = m.evolve(&[t - h, t, t + h]).unwrap();
        let n = ev.noclick_values();
        let slope = (n[2] - n[0]) / (2.0 * h);
        let flux = -s * ev.band_density[1];
        assert!(
            ((slope - flux) / flux).abs() < 1e-3,
            "t = {t}: {slope} vs {flux}"
        );
    }
}

#[test]
fn effective_width_decreases_with_efficiency() {
    let det = |s: f64| Detector::continuous(3.0, s).unwrap();
    assert_eq!(effective_width(&unit(), &det(0.0)), 1.0);
    let widths: Vec<f64> = [0.1, 1.0, 3.0, 10.0, 100.0]
        .iter()
        .map(|&s| effective_width(&unit(), &det(s)))
        .collect();
    assert!(widths.windows(2).all(|w| w[1] < w[0]), "{widths:?}");
}

#[test]
fn stronger_detection_slows_decay() {
    // sigma -> 0 is the never-click limit, so the ordering only starts past
    // the minimum near sigma ~ gamma
    let t = 2.0;
    let values: Vec<f64> = [3.0, 10.0, 40.0, 400.0]
        .iter()
        .map(|&s| model(3.0, s, t).noclick_c(&[t]).unwrap().values()[0])
        .collect();
    assert!(values.windows(2).all(|w| w[1] > w[0]), "{values:?}");
}

#[test]
fn schulman_pairing_fails_at_long_times() {
    let s = 40.0;
    let m = model(3.0, s, 10.0);
    let pulsed = Detector::pulsed(3.0, 4.0 / s).unwrap();
    let times = linear_times(10.0, 401);
    let c = m.noclick_c(&times).unwrap();
    let bb = noclick_bb(&times, &unit(), &pulsed, &Tol::default()).unwrap();
    let short = c
        .iter()
        .zip(bb.values())
        .filter(|((t, _), _)| *t <= 0.2)
        .map(|((_, a), b)| (a - b).abs())
        .fold(0.0, f64::max);
    assert!(short < 0.02, "{short}");
    let long = (c.values()[400] - bb.values()[400]).abs();
    assert!(long > 0.05, "{long}");
    let c_inf = m.noclick_c_inf().unwrap();
    let bb_inf = noclick_bb_inf(&unit(), &pulsed, &Tol::default()).unwrap();
    assert!(c_inf < bb_inf, "{c_inf} vs {bb_inf}");
}

#[test]
fn curves_stay_above_free_decay() {
    for s in [3.0, 40.0] {
        let m = model(3.0, s, 10.0);
        let times = linear_times(10.0, 41);
        let c = m.noclick_c(&times).unwrap();
        let bb = noclick_bb(
            &times,
            &unit(),
            &Detector::pulsed(3.0, 4.0 / s).unwrap(),
            &Tol::default(),
        )
        .unwrap();
        for ((t, pc), pb) in c.iter().zip(bb.values()) {
            let free = (-t).exp();
            assert!(
                pc >= free - 1e-9 && *pb >= free - 1e-9,
                "sigma = {s}, t = {t}"
            );
        }
    }
}

#[test]
fn large_sigma_closed_form_is_exponential() {
    let det = Detector::continuous(1e3, 1e4).unwrap();
    let times = linear_times(5.0, 11);
    let c = noclick_c_large_lambda(&times, &unit(), &det).unwrap();
    for (t, p) in c.iter() {
        assert!((p - (-t).exp()).abs() < 1e-3);
    }
}

#[test]
fn single_precision_tracks_double() {
    let sys32 = zeno_core::SystemParams::<f32>::unit();
    let det32 = zeno_core::DetectorParams::<f32>::pulsed(3.0, 0.5).unwrap();
    let tol32 = zeno_core::Tolerances::<f32> {
        rel_tol: 1e-5,
        abs_tol: 1e-7,
        ..zeno_core::Tolerances::default()
    };
    let det = Detector::pulsed(3.0, 0.5).unwrap();
    let w32 = w_lambda(0.5f32, &sys32, &det32, &tol32).unwrap();
    let w64 = w_lambda(0.5, &unit(), &det, &Tol::default()).unwrap();
    assert!((w32 as f64 - w64).abs() < 1e-5, "{w32} vs {w64}");
    assert!((w_lambda_inf(&sys32, &det32) as f64 - w_lambda_inf(&unit(), &det)).abs() < 1e-6);
}
