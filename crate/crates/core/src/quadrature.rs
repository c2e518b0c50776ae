//! Adaptive Gauss–Kronrod integration on finite and semi-infinite ranges.
//!
//! The engine is globally adaptive: all panels live in one pool and the panel
//! with the largest error estimate is bisected until the summed estimate meets
//! `max(rel_tol·|I|, abs_tol)`. Semi-infinite ranges grow by appending panels of
//! doubling width until a new panel contributes nothing at the requested accuracy.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::{CompensatedSum, Real};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig<T> {
    pub rel_tol: T,
    /// Absolute error floor applied to each integral the engine is asked for.
    pub abs_tol: T,
    pub max_subdivisions: usize,
    /// Decay exponent at which integrand tails are considered negligible.
    pub tail_cut_exponent: T,
}

impl<T: Real> Default for QuadratureConfig<T> {
    fn default() -> Self {
        Self {
            rel_tol: T::lit(1e-10),
            abs_tol: T::lit(1e-14),
            max_subdivisions: 5000,
            tail_cut_exponent: T::lit(34.0),
        }
    }
}

impl<T: Real> QuadratureConfig<T> {
    pub fn with_tolerances(rel_tol: T, abs_tol: T) -> Result<Self> {
        let cfg = Self {
            rel_tol,
            abs_tol,
            ..Self::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > T::zero()) || !(self.abs_tol > T::zero()) {
            return Err(Error::domain(format!(
                "tolerances must be positive (rel_tol = {}, abs_tol = {})",
                self.rel_tol, self.abs_tol
            )));
        }
        if self.max_subdivisions < 10 {
            return Err(Error::domain("max_subdivisions must be at least 10"));
        }
        if !(self.tail_cut_exponent > T::zero()) {
            return Err(Error::domain("tail_cut_exponent must be positive"));
        }
        Ok(())
    }

    /// Same configuration with the absolute floor rescaled by `1/scale`, for
    /// integrals that are multiplied by `scale` before being reported.
    pub(crate) fn scaled_abs(&self, scale: T) -> Self {
        let s = scale.abs();
        let mut cfg = *self;
        if s > T::zero() && s.is_finite() {
            cfg.abs_tol = (self.abs_tol / s).max(T::min_positive_value());
        }
        cfg
    }

    /// Tighter configuration for integrals evaluated inside another integrand, so
    /// that their noise stays below the outer tolerance.
    pub(crate) fn nested(&self) -> Self {
        let mut cfg = *self;
        cfg.rel_tol = (self.rel_tol / T::lit(100.0)).max(T::epsilon() * T::lit(8.0));
        cfg.abs_tol = (self.abs_tol / T::lit(100.0)).max(T::min_positive_value());
        cfg
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, PartialEq)]
pub struct Integral<T> {
    pub value: T,
    pub error: T,
    /// Final partition, in ascending order.
    pub panels: Vec<(T, T)>,
}

impl<T: Real> Integral<T> {
    fn zero() -> Self {
        Self {
            value: T::zero(),
            error: T::zero(),
            panels: Vec::new(),
        }
    }

    /// Sum of two integrals over adjacent or unrelated ranges.
    pub fn combine(mut self, other: Integral<T>) -> Self {
        self.value = self.value + other.value;
        self.error = self.error + other.error;
        self.panels.extend(other.panels);
        self
    }

    pub fn scale(mut self, factor: T) -> Self {
        self.value = self.value * factor;
        self.error = self.error * factor.abs();
        self
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_0,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

struct Panel<T> {
    a: T,
    b: T,
    value: T,
    error: T,
    /// Error estimate sits at the roundoff floor; splitting cannot improve it.
    saturated: bool,
    /// `50 ε ∫|f|` over the panel.
    floor: T,
}

/// Seven-point Gauss / fifteen-point Kronrod pair with QUADPACK error scaling.
fn gk15<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> Panel<T> {
    let half = (b - a) / T::lit(2.0);
    let center = a + half;
    let f_center = f(center);
    let mut result_k = f_center * T::lit(WGK[7]);
    let mut result_g = f_center * T::lit(WG[3]);
    let mut abs_k = result_k.abs();
    let mut fv1 = [T::zero(); 7];
    let mut fv2 = [T::zero(); 7];
    for j in 0..7 {
        let dx = half * T::lit(XGK[j]);
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        let w = T::lit(WGK[j]);
        result_k = result_k + w * (f1 + f2);
        abs_k = abs_k + w * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            result_g = result_g + T::lit(WG[j / 2]) * (f1 + f2);
        }
    }
    let mean = result_k / T::lit(2.0);
    let mut asc = T::lit(WGK[7]) * (f_center - mean).abs();
    for j in 0..7 {
        asc = asc + T::lit(WGK[j]) * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = result_k * half;
    let abs_value = abs_k * half.abs();
    let asc = asc * half.abs();
    let mut error = ((result_k - result_g) * half).abs();
    if asc != T::zero() && error != T::zero() {
        let ratio = (T::lit(200.0) * error / asc).powf(T::lit(1.5));
        error = asc * ratio.min(T::one());
    }
    let floor = T::lit(50.0) * T::epsilon() * abs_value;
    let saturated = error <= floor;
    if floor > T::min_positive_value() {
        error = error.max(floor);
    }
    if !value.is_finite() || !error.is_finite() {
        return Panel {
            a,
            b,
            value,
            error: T::infinity(),
            saturated: false,
            floor,
        };
    }
    Panel {
        a,
        b,
        value,
        error,
        saturated,
        floor,
    }
}

struct ByError<T>(Panel<T>);

impl<T: Real> PartialEq for ByError<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T: Real> Eq for ByError<T> {}
impl<T: Real> PartialOrd for ByError<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Real> Ord for ByError<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.error.partial_cmp(&other.0.error).unwrap_or(Ordering::Equal)
    }
}

/// Pool of panels refined globally by largest error.
struct Pool<T> {
    active: BinaryHeap<ByError<T>>,
    finished: Vec<Panel<T>>,
    splits: usize,
}

impl<T: Real> Pool<T> {
    fn new() -> Self {
        Self {
            active: BinaryHeap::new(),
            finished: Vec::new(),
            splits: 0,
        }
    }

    fn push(&mut self, panel: Panel<T>) {
        let width_resolvable = {
            let mid = panel.a + (panel.b - panel.a) / T::lit(2.0);
            mid > panel.a && mid < panel.b
        };
        if panel.saturated || panel.error == T::zero() || !width_resolvable {
            self.finished.push(panel);
        } else {
            self.active.push(ByError(panel));
        }
    }

    fn add<F: FnMut(T) -> T>(&mut self, f: &mut F, a: T, b: T) {
        if b > a {
            let p = gk15(f, a, b);
            self.push(p);
        }
    }

    fn totals(&self) -> (T, T, T) {
        let mut value = CompensatedSum::new();
        let mut error = T::zero();
        let mut floor = T::zero();
        for p in self.finished.iter().chain(self.active.iter().map(|p| &p.0)) {
            value.add(p.value);
            error = error + p.error;
            floor = floor + p.floor;
        }
        (value.value(), error, floor)
    }

    fn refine<F: FnMut(T) -> T>(&mut self, f: &mut F, cfg: &QuadratureConfig<T>, context: &str) -> Result<()> {
        let (mut value, mut error, mut floor) = self.totals();
        let mut since_resum = 0;
        // cancellation between panels can put the target below the roundoff floor
        let target_for = |value: T, floor: T| (cfg.rel_tol * value.abs()).max(cfg.abs_tol).max(T::lit(2.0) * floor);
        loop {
            let target = target_for(value, floor);
            if error <= target || self.active.is_empty() {
                // running totals drift; confirm against an exact resummation
                let (v, e, fl) = self.totals();
                value = v;
                error = e;
                floor = fl;
                let target = target_for(value, floor);
                if error <= target || self.active.is_empty() {
                    if error.is_finite() {
                        return Ok(());
                    }
                    return Err(Error::non_convergence(context, value.as_f64(), error.as_f64()));
                }
            }
            if self.splits >= cfg.max_subdivisions {
                return Err(Error::non_convergence(context, value.as_f64(), error.as_f64()));
            }
            let worst = match self.active.pop() {
                Some(p) => p.0,
                None => continue,
            };
            let mid = worst.a + (worst.b - worst.a) / T::lit(2.0);
            let left = gk15(f, worst.a, mid);
            let right = gk15(f, mid, worst.b);
            value = value - worst.value + left.value + right.value;
            error = error - worst.error + left.error + right.error;
            floor = floor - worst.floor + left.floor + right.floor;
            if !error.is_finite() {
                since_resum = usize::MAX / 2;
            }
            self.push(left);
            self.push(right);
            self.splits += 1;
            since_resum += 1;
            if since_resum > 64 {
                let (v, e, fl) = self.totals();
                value = v;
                error = e;
                floor = fl;
                since_resum = 0;
            }
        }
    }

    fn into_integral(self) -> Integral<T> {
        let mut panels: Vec<Panel<T>> = self.finished;
        panels.extend(self.active.into_iter().map(|p| p.0));
        panels.sort_by(|x, y| x.a.partial_cmp(&y.a).unwrap_or(Ordering::Equal));
        let mut value = CompensatedSum::new();
        let mut error = T::zero();
        for p in &panels {
            value.add(p.value);
            error = error + p.error;
        }
        Integral {
            value: value.value(),
            error,
            panels: panels.iter().map(|p| (p.a, p.b)).collect(),
        }
    }
}

fn sorted_points<T: Real>(a: T, b: T, hints: &[T]) -> Vec<T> {
    let mut pts: Vec<T> = hints
        .iter()
        .copied()
        .filter(|&x| x > a && x < b && x.is_finite())
        .collect();
    pts.push(a);
    pts.push(b);
    pts.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));
    pts.dedup();
    pts
}

/// `∫_a^b f`, with optional interior breakpoints where `f` changes character.
pub fn integrate_with_breakpoints<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    a: T,
    b: T,
    breakpoints: &[T],
    cfg: &QuadratureConfig<T>,
) -> Result<Integral<T>> {
    cfg.validate()?;
    if !(a <= b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain(format!(
            "integration limits must be finite with a ≤ b, got [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok(Integral::zero());
    }
    let pts = sorted_points(a, b, breakpoints);
    let mut pool = Pool::new();
    for w in pts.windows(2) {
        pool.add(&mut f, w[0], w[1]);
    }
    pool.refine(&mut f, cfg, "finite-range quadrature")?;
    Ok(pool.into_integral())
}

/// `∫_a^b f` for `a ≤ b`.
pub fn integrate_finite<T: Real, F: FnMut(T) -> T>(f: F, a: T, b: T, cfg: &QuadratureConfig<T>) -> Result<Integral<T>> {
    integrate_with_breakpoints(f, a, b, &[], cfg)
}

/// `∫_a^∞ f`. The range up to the largest hint (at least `a + tail_cut_exponent`)
/// is refined first; beyond it, panels of doubling width are appended until two
/// consecutive ones are negligible.
pub fn integrate_semi_infinite<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    a: T,
    hints: &[T],
    cfg: &QuadratureConfig<T>,
) -> Result<Integral<T>> {
    cfg.validate()?;
    if !a.is_finite() {
        return Err(Error::domain("semi-infinite integral needs a finite lower limit"));
    }
    let mut end = a + cfg.tail_cut_exponent;
    for &h in hints {
        if h.is_finite() && h > end {
            end = h;
        }
    }
    let pts = sorted_points(a, end, hints);
    let mut pool = Pool::new();
    for w in pts.windows(2) {
        pool.add(&mut f, w[0], w[1]);
    }
    pool.refine(&mut f, cfg, "semi-infinite quadrature")?;
    let mut width = (end - a).max(T::one());
    let mut quiet = 0;
    for _ in 0..200 {
        let next = end + width;
        let panel = gk15(&mut f, end, next);
        let (total, _, _) = pool.totals();
        let target = (cfg.rel_tol * total.abs()).max(cfg.abs_tol);
        let negligible = panel.value.abs() + panel.error <= target * T::lit(0.01) && panel.error.is_finite();
        pool.push(panel);
        pool.refine(&mut f, cfg, "semi-infinite quadrature tail")?;
        end = next;
        width = width * T::lit(2.0);
        if negligible {
            quiet += 1;
            if quiet >= 2 {
                return Ok(pool.into_integral());
            }
        } else {
            quiet = 0;
        }
    }
    let (v, e, _) = pool.totals();
    Err(Error::non_convergence(
        "semi-infinite quadrature tail",
        v.as_f64(),
        e.as_f64(),
    ))
}

/// Re-evaluates `f` on a fixed partition with the fifteen-point rule.
///
/// Used where an integral must be a smooth function of a parameter, e.g. for
/// finite differences.
pub fn integrate_on_panels<T: Real, F: FnMut(T) -> T>(mut f: F, panels: &[(T, T)]) -> T {
    let mut acc = CompensatedSum::new();
    for &(a, b) in panels {
        acc.add(gk15(&mut f, a, b).value);
    }
    acc.value()
}

/// `∫_{z_lo}^∞ f(z) dz` split at `0` and `(2πλ)²`.
///
/// The pieces `[z_lo, 0]`, `[0, (2πλ)²]` and the tail are integrated in `u = √|z|`.
pub fn integrate_split<T: Real, F: FnMut(T) -> T>(f: F, z_lo: T, lambda: T, cfg: &QuadratureConfig<T>) -> Result<T> {
    integrate_split_with_hints(f, z_lo, lambda, &[], cfg).map(|i| i.value)
}

/// As [`integrate_split`], with extra breakpoints given in `u = √z` on the positive side.
pub fn integrate_split_with_hints<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    z_lo: T,
    lambda: T,
    u_hints: &[T],
    cfg: &QuadratureConfig<T>,
) -> Result<Integral<T>> {
    if !(lambda > T::zero()) {
        return Err(Error::domain(format!("λ must be positive, got {lambda}")));
    }
    if z_lo.is_nan() || z_lo > T::zero() {
        return Err(Error::domain(format!("split integration needs z_lo ≤ 0, got {z_lo}")));
    }
    let two = T::lit(2.0);
    let mut total = Integral::zero();
    if z_lo < T::zero() {
        let u_lo = (-z_lo).sqrt();
        let neg = integrate_finite(|u: T| two * u * f(-u * u), T::zero(), u_lo, cfg)?;
        total = total.combine(neg);
    }
    let a = T::TAU() * lambda;
    let mut hints: Vec<T> = u_hints.to_vec();
    hints.push(a);
    let pos = integrate_semi_infinite(
        |u: T| {
            if u == T::zero() {
                T::zero()
            } else {
                two * u * f(u * u)
            }
        },
        T::zero(),
        &hints,
        cfg,
    )?;
    Ok(total.combine(pos))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn cfg() -> QuadratureConfig<f64> {
        QuadratureConfig::default()
    }

    #[test]
    fn finite_examples() {
        let c = cfg();
        assert!((integrate_finite(|x: f64| x * x, 0.0, 1.0, &c).unwrap().value - 1.0 / 3.0).abs() < 1e-14);
        assert!((integrate_finite(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, &c).unwrap().value - 2.0).abs() < 1e-9);
        assert!((integrate_finite(f64::sin, 0.0, PI, &c).unwrap().value - 2.0).abs() < 1e-14);
    }

    #[test]
    fn split_examples() {
        let c = cfg();
        let one = integrate_split(|z: f64| (-z.sqrt()).exp(), 0.0, 1.0, &c).unwrap();
        assert!((one - 2.0).abs() < 1e-12);
        // 2∫u³e^{-u}du = 2·3! = 12
        let two = integrate_split(|z: f64| z * (-z.sqrt()).exp(), 0.0, 1.0, &c).unwrap();
        assert!((two - 12.0).abs() < 1e-10);
        let three = integrate_split(|z: f64| if z <= 0.0 { 1.0 } else { 0.0 }, -PI * PI, 0.3, &c).unwrap();
        assert!((three - PI * PI).abs() < 1e-12);
    }

    #[test]
    fn semi_infinite_gaussian() {
        let i = integrate_semi_infinite(|x: f64| (-x * x).exp(), 0.0, &[], &cfg()).unwrap();
        assert!((i.value - PI.sqrt() / 2.0).abs() < 1e-13);
        assert!(i.error <= 1e-10 * i.value, "error {}", i.error);
    }

    #[test]
    fn panels_reproduce_value() {
        let i = integrate_finite(|x: f64| (3.0 * x).cos() * x.exp(), 0.0, 2.0, &cfg()).unwrap();
        let again = integrate_on_panels(|x: f64| (3.0 * x).cos() * x.exp(), &i.panels);
        assert!((i.value - again).abs() < 1e-14);
    }

    #[test]
    fn tighter_tolerance_does_not_hurt() {
        let exact = 2.0 / 3.0;
        let f = |x: f64| x.sqrt();
        let loose = integrate_finite(f, 0.0, 1.0, &QuadratureConfig::with_tolerances(1e-6, 1e-30).unwrap()).unwrap();
        let tight = integrate_finite(f, 0.0, 1.0, &QuadratureConfig::with_tolerances(5e-7, 1e-30).unwrap()).unwrap();
        assert!((tight.value - exact).abs() <= (loose.value - exact).abs() + 1e-15);
    }

    #[test]
    fn non_convergence_reported() {
        let c = QuadratureConfig {
            max_subdivisions: 10,
            ..cfg()
        };
        let r = integrate_finite(|x: f64| (1.0 / x).sin() / x.sqrt(), 1e-8, 1.0, &c);
        assert!(matches!(r, Err(Error::NonConvergence { .. })));
    }

    #[test]
    fn rejects_bad_config() {
        assert!(QuadratureConfig::with_tolerances(0.0, 1e-14).is_err());
        assert!(integrate_finite(|x: f64| x, 1.0, 0.0, &cfg()).is_err());
    }

    #[test]
    fn f32_works() {
        let c = QuadratureConfig::<f32>::with_tolerances(1e-5, 1e-7).unwrap();
        let v = integrate_finite(|x: f32| x * x, 0.0, 1.0, &c).unwrap().value;
        assert!((v - 1.0 / 3.0).abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn linearity(alpha in -3.0f64..3.0, beta in -3.0f64..3.0, k in 0.1f64..4.0) {
            let c = cfg();
            let f = |x: f64| (k * x).sin();
            let g = |x: f64| (-(x - k).powi(2)).exp();
            let fg = integrate_finite(|x| alpha * f(x) + beta * g(x), 0.0, 3.0, &c).unwrap().value;
            let sep = alpha * integrate_finite(f, 0.0, 3.0, &c).unwrap().value
                + beta * integrate_finite(g, 0.0, 3.0, &c).unwrap().value;
            prop_assert!((fg - sep).abs() <= 10.0 * c.rel_tol * (fg.abs() + sep.abs()) + 1e-13);
        }

        #[test]
        fn split_matches_direct(decay in 0.3f64..3.0, lambda in 0.01f64..5.0) {
            let c = cfg();
            // ∫₀^∞ e^{-decay √z} dz = 2/decay²
            let v = integrate_split(|z: f64| (-decay * z.sqrt()).exp(), 0.0, lambda, &c).unwrap();
            let exact = 2.0 / (decay * decay);
            prop_assert!((v - exact).abs() <= 10.0 * c.rel_tol * exact);
            let direct = integrate_semi_infinite(|z: f64| (-decay * z.sqrt()).exp(), 0.0, &[], &c).unwrap().value;
            prop_assert!((v - direct).abs() <= 1e-8 * exact);
        }
    }
}
