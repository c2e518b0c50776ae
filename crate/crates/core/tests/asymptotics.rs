use plasmon_casimir::plasmon_energy::{theta, theta_asymptotic_intermediate, theta_asymptotic_short};
use plasmon_casimir::Config;

fn log_slope(tau: f64, lo: f64, hi: f64) -> f64 {
    let cfg = Config::default();
    let n = 11;
    let pts: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let l = lo * (hi / lo).powf(i as f64 / (n - 1) as f64);
            (l.ln(), theta(l, tau, &cfg).unwrap().abs().ln())
        })
        .collect();
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n as f64;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n as f64;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[test]
fn theta_short_distance_form() {
    let cfg = Config::default();
    for l in [1e-5, 1e-4, 1e-3] {
        let r = theta(l, 1e-3, &cfg).unwrap() / theta_asymptotic_short(l, 1e-3, &cfg).unwrap();
        assert!((r - 1.0).abs() < 5e-3, "{l}: {r}");
    }
}

#[test]
fn theta_quadratic_regime_deep_window() {
    // τ² ≪ λ ≪ 1
    let s = log_slope(1e-3, 1e-4, 1e-3);
    assert!((s - 2.0).abs() < 0.01, "{s}");
    let r =
        theta(0.1, 1e-3, &Config::default()).unwrap() / theta_asymptotic_short(0.1, 1e-3, &Config::default()).unwrap();
    assert!(r < 0.75, "{r}");
}

#[test]
fn theta_linear_regime() {
    let s = log_slope(0.1, 1e-7, 1e-6);
    assert!((s - 1.0).abs() < 0.01, "{s}");
}

#[test]
fn theta_intermediate_distance() {
    let cfg = Config::default();
    for (l, tau) in [(30.0, 1e-4), (100.0, 1e-4)] {
        let r = theta(l, tau, &cfg).unwrap() / theta_asymptotic_intermediate(l, tau);
        assert!((r - 1.0).abs() < 0.05, "{l} {tau}: {r}");
    }
}
