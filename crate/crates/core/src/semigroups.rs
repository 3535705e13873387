//! The Ornstein-Uhlenbeck semigroup `T_t` and the Poisson-Hermite semigroup
//! `P_t`: spectral action, kernel and subordination forms, time derivatives,
//! and the one-sided stable measure of order 1/2 that links them.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermite::{HermiteExpansion, QuadratureRule};
use crate::quad::{integrate_checked, Adaptive, Estimate};

/// Logarithmically spaced points on `[t_min, t_max]`, carrying the Haar
/// measure `dt/t` through a trapezoid rule in `log t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub count: usize,
}

impl TimeGrid {
    pub fn new(t_min: f64, t_max: f64, count: usize) -> Result<Self> {
        let g = TimeGrid {
            t_min,
            t_max,
            count,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_min > 0.0 && self.t_max > self.t_min && self.t_max.is_finite()) {
            return Err(Error::precondition(format!(
                "time grid needs 0 < t_min < t_max < ∞, got [{}, {}]",
                self.t_min, self.t_max
            )));
        }
        if self.count < 2 {
            return Err(Error::precondition("time grid needs at least 2 points"));
        }
        Ok(())
    }

    /// Grid with spacing `log_step` in `log t`, rounded up to cover the range.
    pub fn with_step(t_min: f64, t_max: f64, log_step: f64) -> Result<Self> {
        if !(log_step > 0.0) {
            return Err(Error::precondition("log step must be positive"));
        }
        let span = (t_max / t_min).ln();
        let count = ((span / log_step).ceil() as usize).max(1) + 1;
        Self::new(t_min, t_max, count)
    }

    pub fn log_step(&self) -> f64 {
        (self.t_max / self.t_min).ln() / (self.count - 1) as f64
    }

    pub fn points(&self) -> Vec<f64> {
        let h = self.log_step();
        let l0 = self.t_min.ln();
        (0..self.count)
            .map(|i| {
                if i == 0 {
                    self.t_min
                } else if i + 1 == self.count {
                    self.t_max
                } else {
                    (l0 + h * i as f64).exp()
                }
            })
            .collect()
    }

    /// Trapezoid weights for `∫ φ(t) dt/t`.
    pub fn haar_weights(&self) -> Vec<f64> {
        let h = self.log_step();
        let mut w = vec![h; self.count];
        w[0] *= 0.5;
        w[self.count - 1] *= 0.5;
        w
    }

    /// Weights for `∫ φ(t) dt` on the same nodes (`t_i` times the Haar
    /// weights).
    pub fn lebesgue_weights(&self) -> Vec<f64> {
        self.points()
            .iter()
            .zip(self.haar_weights())
            .map(|(t, w)| t * w)
            .collect()
    }

    /// Same range with `factor` times the density; every old point is kept.
    pub fn refine(&self, factor: usize) -> Self {
        let factor = factor.max(1);
        TimeGrid {
            t_min: self.t_min,
            t_max: self.t_max,
            count: (self.count - 1) * factor + 1,
        }
    }
}

fn check_time(t: f64, what: &str) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::precondition(format!(
            "{what}: t must be ≥ 0, got {t}"
        )));
    }
    Ok(())
}

fn check_positive_time(t: f64, what: &str) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::precondition(format!(
            "{what}: t must be > 0, got {t}"
        )));
    }
    Ok(())
}

/// `T_t f` on the spectral side: `T_t h_ν = e^{−t|ν|} h_ν`.
pub fn ou_apply_spectral(f: &HermiteExpansion, t: f64) -> Result<HermiteExpansion> {
    check_time(t, "ou_apply_spectral")?;
    Ok(f.apply_multiplier(|n| (-t * n as f64).exp()))
}

/// `T_t g(x) = ∫ g(√(1−e^{−2t}) u + e^{−t} x) γ_d(du)` by quadrature.
pub fn ou_apply_kernel<G: Fn(&[f64]) -> f64>(
    g: G,
    t: f64,
    x: &[f64],
    rule: &QuadratureRule,
) -> Result<f64> {
    check_positive_time(t, "ou_apply_kernel")?;
    if x.len() != rule.dim() {
        return Err(Error::DimensionMismatch {
            expected: rule.dim(),
            found: x.len(),
        });
    }
    let spread = (-(-2.0 * t).exp_m1()).sqrt();
    let shrink = (-t).exp();
    let mut point = vec![0.0; x.len()];
    Ok(rule
        .nodes()
        .zip(rule.weights())
        .map(|(u, w)| {
            for ((p, &ui), &xi) in point.iter_mut().zip(u).zip(x) {
                *p = spread * ui + shrink * xi;
            }
            w * g(&point)
        })
        .sum())
}

/// `P_t f` on the spectral side: `P_t h_ν = e^{−t√|ν|} h_ν`.
pub fn poisson_apply_spectral(f: &HermiteExpansion, t: f64) -> Result<HermiteExpansion> {
    check_time(t, "poisson_apply_spectral")?;
    Ok(f.apply_multiplier(|n| (-t * (n as f64).sqrt()).exp()))
}

/// `∂^k/∂t^k P_t f`: coefficient-wise `(−√|ν|)^k e^{−t√|ν|}`.
pub fn poisson_derivative(f: &HermiteExpansion, t: f64, k: u32) -> Result<HermiteExpansion> {
    if k == 0 {
        check_time(t, "poisson_derivative")?;
    } else {
        check_positive_time(t, "poisson_derivative")?;
    }
    Ok(f.apply_multiplier(|n| poisson_derivative_multiplier(n, t, k)))
}

pub(crate) fn poisson_derivative_multiplier(order: u32, t: f64, k: u32) -> f64 {
    let a = (order as f64).sqrt();
    (-a).powi(k as i32) * (-t * a).exp()
}

/// Node/weight set for `∫_0^∞ φ(u) e^{−u} u^{−1/2} du`.
///
/// Uses `u = e^σ` and a trapezoid rule in `σ`; the integrands met here
/// (`e^{−c/u}` times the weight) are analytic in a strip around the real
/// `σ` axis and decay double-exponentially at both ends, so the rule
/// converges geometrically in the step.
#[derive(Debug, Clone, PartialEq)]
pub struct SubordinationQuadrature {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    step: f64,
}

impl Default for SubordinationQuadrature {
    fn default() -> Self {
        Self::new(0.125, -60.0, 4.5).expect("default subordination rule")
    }
}

impl SubordinationQuadrature {
    /// Rule with step `step` in `σ = log u` over `[sigma_min, sigma_max]`.
    pub fn new(step: f64, sigma_min: f64, sigma_max: f64) -> Result<Self> {
        if !(step > 0.0) || !(sigma_max > sigma_min) {
            return Err(Error::precondition("invalid subordination rule range"));
        }
        let n = ((sigma_max - sigma_min) / step).round() as usize + 1;
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            let u = (sigma_min + step * i as f64).exp();
            nodes.push(u);
            // du = u dσ, so the weight is step · u · e^{−u} u^{−1/2}.
            weights.push(step * u.sqrt() * (-u).exp());
        }
        Ok(SubordinationQuadrature {
            nodes,
            weights,
            step,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `Σ w_i`, which approximates `√π`.
    pub fn mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Same rule at twice the step, for residual estimates.
    pub fn coarsened(&self) -> Self {
        SubordinationQuadrature {
            nodes: self.nodes.iter().step_by(2).copied().collect(),
            weights: self.weights.iter().step_by(2).map(|w| 2.0 * w).collect(),
            step: 2.0 * self.step,
        }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, phi: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&u, &w)| w * phi(u))
            .sum()
    }

    /// `π^{−1/2} ∫ u^{−1/2} e^{−u} e^{−(t²/4u) n} du`, normalized by the
    /// rule's own mass so that `n = 0` gives exactly 1.
    fn multiplier(&self, t: f64, n: u32) -> f64 {
        if n == 0 {
            return 1.0;
        }
        let c = t * t * n as f64 / 4.0;
        self.integrate(|u| (-c / u).exp()) / self.mass()
    }
}

const SUBORDINATION_TOL: f64 = 1e-10;

/// `P_t f = π^{−1/2} ∫_0^∞ u^{−1/2} e^{−u} T_{t²/4u} f du` applied
/// coefficient-wise.
pub fn poisson_apply_subordination(
    f: &HermiteExpansion,
    t: f64,
    quad: &SubordinationQuadrature,
) -> Result<HermiteExpansion> {
    check_positive_time(t, "poisson_apply_subordination")?;
    let coarse = quad.coarsened();
    let mut orders: Vec<u32> = f.terms().map(|(k, _)| k.order()).collect();
    orders.sort_unstable();
    orders.dedup();
    let mut table = std::collections::BTreeMap::new();
    for n in orders {
        let fine = quad.multiplier(t, n);
        let residual = (fine - coarse.multiplier(t, n)).abs();
        if residual > SUBORDINATION_TOL {
            return Err(Error::Residual {
                context: "subordination integral",
                residual,
                tolerance: SUBORDINATION_TOL,
            });
        }
        table.insert(n, fine);
    }
    Ok(f.apply_multiplier(|n| table[&n]))
}

/// Mehler factor `exp(−|y − r x|²/(1−r²)) / (1−r²)^{d/2}` with `r = e^{−s}`.
fn mehler_factor(s: f64, x: &[f64], y: &[f64]) -> f64 {
    let r = (-s).exp();
    let one_minus_r2 = -(-2.0 * s).exp_m1();
    let dist2: f64 = x
        .iter()
        .zip(y)
        .map(|(xi, yi)| {
            let d = yi - r * xi;
            d * d
        })
        .sum();
    (-dist2 / one_minus_r2).exp() / one_minus_r2.powf(x.len() as f64 / 2.0)
}

/// The Poisson-Hermite kernel `p(t, x, y)` (against Lebesgue `dy`).
///
/// The `r`-integral is split at `r = e^{−1}`. On `(e^{−1}, 1)` it is taken in
/// `s = −log r`, where the factor `e^{−t²/4s}` tames the growth of
/// `(1−r²)^{−d/2}`; on `(0, e^{−1})` the substitution `s = 1/v²` turns the
/// slowly decaying `s^{−3/2}` tail into a smooth integrand on `(0, 1)`.
/// The returned error is the sum of the adaptive residual estimates.
pub fn poisson_kernel_eval(t: f64, x: &[f64], y: &[f64], opts: Adaptive) -> Result<Estimate> {
    check_positive_time(t, "poisson_kernel_eval")?;
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    let d = x.len() as f64;
    let prefactor = 1.0 / (2.0 * PI.powf((d + 1.0) / 2.0));
    let near = |s: f64| {
        if s <= 0.0 {
            return 0.0;
        }
        let damp = (-t * t / (4.0 * s)).exp();
        if damp == 0.0 {
            return 0.0;
        }
        t * damp * s.powf(-1.5) * mehler_factor(s, x, y)
    };
    let far = |v: f64| {
        if v <= 0.0 {
            let y2: f64 = y.iter().map(|v| v * v).sum();
            return 2.0 * t * (-y2).exp();
        }
        2.0 * t * (-t * t * v * v / 4.0).exp() * mehler_factor(1.0 / (v * v), x, y)
    };
    let a = integrate_checked(near, 0.0, 1.0, &[], opts, "poisson kernel (r near 1)")?;
    let b = integrate_checked(far, 0.0, 1.0, &[], opts, "poisson kernel (r near 0)")?;
    Ok(Estimate {
        value: prefactor * (a.value + b.value),
        error: prefactor * (a.error + b.error),
    })
}

/// Density of the one-sided 1/2-stable measure,
/// `μ_t(ds) = t/(2√π) e^{−t²/4s} s^{−3/2} ds`.
pub fn stable_measure_density(t: f64, s: f64) -> f64 {
    if !(s > 0.0) {
        return 0.0;
    }
    t / (2.0 * PI.sqrt()) * (-t * t / (4.0 * s)).exp() * s.powf(-1.5)
}

/// Largest derivative order supported by [`stable_density_t_derivative`].
pub const MAX_STABLE_DERIVATIVE: u32 = 4;

// ∂^k/∂t^k [t e^{−a t²}] = e^{−a t²} P_k(t, a).
fn stable_polynomial(k: u32, t: f64, a: f64) -> f64 {
    match k {
        0 => t,
        1 => 1.0 - 2.0 * a * t * t,
        2 => -6.0 * a * t + 4.0 * a * a * t.powi(3),
        3 => -6.0 * a + 24.0 * a * a * t * t - 8.0 * a.powi(3) * t.powi(4),
        4 => 60.0 * a * a * t - 80.0 * a.powi(3) * t.powi(3) + 16.0 * a.powi(4) * t.powi(5),
        _ => f64::NAN,
    }
}

// Sign changes of P_k in the variable z = t²/4s.
fn stable_sign_changes(k: u32) -> Vec<f64> {
    match k {
        1 => vec![0.5],
        2 => vec![1.5],
        3 => {
            let r = 384f64.sqrt();
            vec![(24.0 - r) / 16.0, (24.0 + r) / 16.0]
        }
        4 => {
            let r = 2560f64.sqrt();
            vec![(80.0 - r) / 32.0, (80.0 + r) / 32.0]
        }
        _ => Vec::new(),
    }
}

/// `∂^k/∂t^k` of the stable density, `k ≤ 4`.
pub fn stable_density_t_derivative(t: f64, s: f64, k: u32) -> f64 {
    if !(s > 0.0) {
        return 0.0;
    }
    let a = 1.0 / (4.0 * s);
    (-a * t * t).exp() * s.powf(-1.5) * stable_polynomial(k, t, a) / (2.0 * PI.sqrt())
}

/// `∫_0^∞ |∂^k μ_t/∂t^k|(ds)`.
///
/// Integrated in `y = t/(2√s)`, where the integrand is smooth on `[0, ∞)`
/// and decays like `e^{−y²}`; the range is split at the sign changes of the
/// derivative so each piece contributes its absolute value.
pub fn stable_derivative_mass(t: f64, k: u32, opts: Adaptive) -> Result<Estimate> {
    check_positive_time(t, "stable_derivative_mass")?;
    if k > MAX_STABLE_DERIVATIVE {
        return Err(Error::precondition(format!(
            "stable derivative order {k} exceeds {MAX_STABLE_DERIVATIVE}"
        )));
    }
    const Y_MAX: f64 = 10.0;
    let integrand = |y: f64| {
        // s = t²/(4y²), |ds/dy| = t²/(2y³), s^{−3/2} = 8y³/t³.
        let a = y * y / (t * t);
        let jac_times_power = 4.0 / t;
        (-y * y).exp() * jac_times_power * stable_polynomial(k, t, a) / (2.0 * PI.sqrt())
    };
    let mut cuts = vec![0.0];
    cuts.extend(stable_sign_changes(k).into_iter().map(f64::sqrt));
    cuts.push(Y_MAX);
    let mut value = 0.0;
    let mut error = 0.0;
    for w in cuts.windows(2) {
        let piece = integrate_checked(integrand, w[0], w[1], &[], opts, "stable derivative mass")?;
        value += piece.value.abs();
        error += piece.error;
    }
    Ok(Estimate { value, error })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::{gauss_rule, MultiIndex};

    fn h(n: u32) -> HermiteExpansion {
        HermiteExpansion::basis(MultiIndex::new(vec![n]))
    }

    #[test]
    fn time_grid_weights() {
        let g = TimeGrid::new(1e-3, 10.0, 101).unwrap();
        let p = g.points();
        assert_eq!(p.len(), 101);
        assert!(p.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(p[0], 1e-3);
        assert_eq!(p[100], 10.0);
        // ∫ dt/t over the range = log(t_max/t_min)
        let s: f64 = g.haar_weights().iter().sum();
        assert!((s - 1e4f64.ln()).abs() < 1e-12);
        let r = g.refine(2);
        assert_eq!(r.count, 201);
        assert!(TimeGrid::new(0.0, 1.0, 10).is_err());
        assert!(TimeGrid::new(1.0, 2.0, 1).is_err());
    }

    #[test]
    fn ou_spectral_examples() {
        let f = h(2);
        assert_eq!(ou_apply_spectral(&f, 0.0).unwrap(), f);
        let g = ou_apply_spectral(&f, 2f64.ln()).unwrap();
        assert!((g.coefficient(&MultiIndex::new(vec![2])) - 0.25).abs() < 1e-15);
        assert_eq!(ou_apply_spectral(&h(0), 3.0).unwrap(), h(0));
        assert!(ou_apply_spectral(&f, -1.0).is_err());
    }

    #[test]
    fn ou_kernel_examples() {
        let rule = gauss_rule(1, 30).unwrap();
        assert!((ou_apply_kernel(|_| 1.0, 0.7, &[0.3], &rule).unwrap() - 1.0).abs() < 1e-13);
        let h1 = h(1);
        let v = ou_apply_kernel(|x| h1.eval(x).unwrap(), 1.0, &[1.0], &rule).unwrap();
        assert!((v - (-1f64).exp() * 2f64.sqrt()).abs() < 1e-8);
        let h2 = h(2);
        let v = ou_apply_kernel(|x| h2.eval(x).unwrap(), 20.0, &[1.5], &rule).unwrap();
        assert!(v.abs() < 1e-8);
        assert!(ou_apply_kernel(|_| 1.0, 0.0, &[0.0], &rule).is_err());
    }

    #[test]
    fn poisson_spectral_examples() {
        let f = h(4);
        let g = poisson_apply_spectral(&f, 1.0).unwrap();
        assert!((g.coefficient(&MultiIndex::new(vec![4])) - (-2f64).exp()).abs() < 1e-15);
        assert_eq!(poisson_apply_spectral(&f, 0.0).unwrap(), f);
        let mixed = HermiteExpansion::from_terms(
            1,
            (0..6).map(|n| (MultiIndex::new(vec![n]), 1.0 + n as f64)),
        )
        .unwrap();
        let a = poisson_apply_spectral(&poisson_apply_spectral(&mixed, 0.4).unwrap(), 0.9).unwrap();
        let b = poisson_apply_spectral(&mixed, 1.3).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-12);
    }

    #[test]
    fn subordination_rule_mass() {
        let q = SubordinationQuadrature::default();
        assert!((q.mass() - PI.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn subordination_matches_spectral() {
        let q = SubordinationQuadrature::default();
        assert_eq!(poisson_apply_subordination(&h(0), 0.5, &q).unwrap(), h(0));
        for n in 0..=25 {
            for &t in &[0.1, 0.37, 1.0, 2.2, 5.0] {
                let got = poisson_apply_subordination(&h(n), t, &q).unwrap();
                let want = (-t * (n as f64).sqrt()).exp();
                let c = got.coefficient(&MultiIndex::new(vec![n]));
                assert!((c - want).abs() < 1e-8, "n={n} t={t}");
            }
        }
        let small = poisson_apply_subordination(&h(3), 1e-3, &q).unwrap();
        let c3 = small.coefficient(&MultiIndex::new(vec![3]));
        assert!((c3 - (-1e-3 * 3f64.sqrt()).exp()).abs() < 1e-8);
        assert!((c3 - 1.0).abs() < 2e-3);
        assert!(poisson_apply_subordination(&h(1), 0.0, &q).is_err());
    }

    #[test]
    fn subordination_flags_unresolved_rule() {
        let crude = SubordinationQuadrature::new(2.0, -60.0, 4.5).unwrap();
        let r = poisson_apply_subordination(&h(5), 0.3, &crude);
        assert!(matches!(r, Err(Error::Residual { .. })));
    }

    #[test]
    fn poisson_derivative_examples() {
        let f = h(1);
        let d1 = poisson_derivative(&f, 0.8, 1).unwrap();
        assert!((d1.coefficient(&MultiIndex::new(vec![1])) + (-0.8f64).exp()).abs() < 1e-15);
        assert_eq!(
            poisson_derivative(&f, 0.8, 0).unwrap(),
            poisson_apply_spectral(&f, 0.8).unwrap()
        );
        assert!(poisson_derivative(&f, 0.0, 1).is_err());
        assert!(poisson_derivative(&f, 0.0, 0).is_ok());
    }

    #[test]
    fn poisson_derivative_finite_differences() {
        let f = HermiteExpansion::from_terms(
            1,
            (0..8).map(|n| (MultiIndex::new(vec![n]), 0.5 + 0.25 * n as f64)),
        )
        .unwrap();
        let t = 0.9;
        let step = 1e-4;
        let at = |s: f64| poisson_apply_spectral(&f, s).unwrap();
        let (m, c, p) = (at(t - step), at(t), at(t + step));
        for (nu, _) in f.terms() {
            let fd1 = (p.coefficient(nu) - m.coefficient(nu)) / (2.0 * step);
            let fd2 =
                (p.coefficient(nu) - 2.0 * c.coefficient(nu) + m.coefficient(nu)) / (step * step);
            let d1 = poisson_derivative(&f, t, 1).unwrap().coefficient(nu);
            let d2 = poisson_derivative(&f, t, 2).unwrap().coefficient(nu);
            assert!((fd1 - d1).abs() < 1e-6, "{nu}");
            assert!((fd2 - d2).abs() < 1e-6, "{nu}");
        }
    }

    #[test]
    fn poisson_derivative_nesting() {
        let f = HermiteExpansion::from_terms(1, (0..6).map(|n| (MultiIndex::new(vec![n]), 1.0)))
            .unwrap();
        let t = 0.6;
        // Apply ∂_t once k times at the multiplier level.
        for k in 1..4 {
            let direct = poisson_derivative(&f, t, k).unwrap();
            let mut nested = poisson_apply_spectral(&f, t).unwrap();
            for _ in 0..k {
                nested = nested.apply_multiplier(|n| -(n as f64).sqrt());
            }
            assert!(direct.max_abs_diff(&nested) < 1e-15);
        }
    }

    #[test]
    fn stable_density_values() {
        let v = stable_measure_density(1.0, 1.0);
        assert!((v - (-0.25f64).exp() / (2.0 * PI.sqrt())).abs() < 1e-16);
        assert!((v - 0.219_695).abs() < 1e-6);
        for &(t, s, c) in &[(0.7, 1.3, 2.0), (2.0, 0.1, 0.3)] {
            let lhs = stable_measure_density(c * t, c * c * s) * c * c;
            assert!((lhs - stable_measure_density(t, s)).abs() < 1e-14 * lhs.max(1.0));
        }
    }

    #[test]
    fn stable_derivatives_match_finite_differences() {
        let s = 0.8;
        let t = 1.1;
        let step = 1e-3;
        let d = |k: u32, t: f64| stable_density_t_derivative(t, s, k);
        for k in 0..4 {
            let fd = (d(k, t + step) - d(k, t - step)) / (2.0 * step);
            assert!((fd - d(k + 1, t)).abs() < 1e-5, "k = {k}");
        }
        assert!((d(0, t) - stable_measure_density(t, s)).abs() < 1e-16);
    }

    #[test]
    fn stable_mass_and_scaling() {
        let opts = Adaptive::default();
        let m0 = stable_derivative_mass(0.7, 0, opts).unwrap();
        assert!((m0.value - 1.0).abs() < 1e-10);
        for k in 1..=4 {
            let base = stable_derivative_mass(1.0, k, opts).unwrap().value;
            for &t in &[0.05, 0.3, 2.0, 40.0] {
                let m = stable_derivative_mass(t, k, opts).unwrap().value;
                assert!(
                    (m * t.powi(k as i32) - base).abs() < 1e-10 * base.max(1.0),
                    "k={k} t={t}"
                );
            }
        }
        assert!(stable_derivative_mass(1.0, 5, opts).is_err());
    }

    #[test]
    fn poisson_kernel_reproduces_spectral_action() {
        let opts = Adaptive::default();
        let outer = Adaptive::with_tol(1e-12, 1e-10);
        for &t in &[0.5, 2.0] {
            for &x in &[0.0, 0.7, -1.3] {
                for n in 0..3u32 {
                    let hn = h(n);
                    let v = crate::quad::integrate_with_breaks(
                        |y: f64| {
                            poisson_kernel_eval(t, &[x], &[y], opts).unwrap().value
                                * hn.eval(&[y]).unwrap()
                        },
                        -12.0,
                        12.0,
                        &[x],
                        outer,
                    )
                    .value;
                    let want = (-t * (n as f64).sqrt()).exp() * hn.eval(&[x]).unwrap();
                    assert!((v - want).abs() < 1e-7, "t={t} x={x} n={n}: {v} vs {want}");
                }
            }
        }
        assert!(poisson_kernel_eval(1.0, &[0.0], &[0.0, 1.0], opts).is_err());
        assert!(poisson_kernel_eval(0.0, &[0.0], &[0.0], opts).is_err());
    }
}
