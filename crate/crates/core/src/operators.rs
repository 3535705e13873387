//! Gaussian Bessel potentials `J_β` and fractional derivatives `D^β`, in
//! spectral and integral form, plus forward differences.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::hermite::HermiteExpansion;
use crate::quad::{integrate_checked, Adaptive};
use crate::semigroups::TimeGrid;
use crate::special::{binomial, gamma};

/// `β > 0` together with `k = ⌊β⌋ + 1`, the smallest integer above `β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselOrder {
    beta: f64,
    k: u32,
}

impl BesselOrder {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::precondition(format!(
                "Bessel order must be > 0, got {beta}"
            )));
        }
        Ok(BesselOrder {
            beta,
            k: beta.floor() as u32 + 1,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn k(&self) -> u32 {
        self.k
    }
}

/// `Δ_s^k(φ, t) = Σ_j C(k,j) (−1)^j φ(t + (k−j)s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForwardDifference {
    pub order: u32,
    pub increment: f64,
    pub base: f64,
}

impl ForwardDifference {
    pub fn apply<F: Fn(f64) -> f64>(&self, phi: F) -> f64 {
        forward_difference(phi, self.order, self.increment, self.base)
    }
}

pub fn forward_difference<F: Fn(f64) -> f64>(phi: F, k: u32, s: f64, t: f64) -> f64 {
    (0..=k)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * binomial(k, j) * phi(t + (k - j) as f64 * s)
        })
        .sum()
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::precondition(format!("β must be ≥ 0, got {beta}")));
    }
    Ok(())
}

/// `J_β h_ν = (1 + √|ν|)^{−β} h_ν`; `β = 0` is the identity.
pub fn bessel_potential_spectral(f: &HermiteExpansion, beta: f64) -> Result<HermiteExpansion> {
    check_beta(beta)?;
    Ok(f.apply_multiplier(|n| (1.0 + (n as f64).sqrt()).powf(-beta)))
}

/// `D^β h_ν = (1 + √|ν|)^β h_ν`; `β = 0` is the identity.
pub fn bessel_derivative_spectral(f: &HermiteExpansion, beta: f64) -> Result<HermiteExpansion> {
    check_beta(beta)?;
    Ok(f.apply_multiplier(|n| (1.0 + (n as f64).sqrt()).powf(beta)))
}

/// `(P_t − I)^k f`, multiplier `(e^{−t√|ν|} − 1)^k`.
pub fn semigroup_difference_power(
    f: &HermiteExpansion,
    t: f64,
    k: u32,
) -> Result<HermiteExpansion> {
    if !(t >= 0.0) {
        return Err(Error::precondition("t must be ≥ 0"));
    }
    Ok(f.apply_multiplier(|n| (-t * (n as f64).sqrt()).exp_m1().powi(k as i32)))
}

/// Tolerance met by the integral representations on their default grids.
pub const REPRESENTATION_TOL: f64 = 1e-10;
const REPRESENTATION_LOG_STEP: f64 = 1.0 / 16.0;

// Upper cutoff: first integer T ≥ t0 with bound(T) < tol.
fn upper_cutoff<F: Fn(f64) -> f64>(t0: f64, tol: f64, bound: F) -> f64 {
    let mut t = t0.max(1.0).ceil();
    while bound(t) >= tol && t < 1e4 {
        t += 1.0;
    }
    t
}

// ∫_T^∞ t^{s−1} e^{−t} dt ≤ T^{s−1} e^{−T} / (1 − (s−1)/T) for T > s − 1.
fn gamma_upper_tail(s: f64, t: f64) -> f64 {
    let ratio = ((s - 1.0) / t).max(0.0);
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    t.powf(s - 1.0) * (-t).exp() / (1.0 - ratio)
}

fn potential_upper_tail(beta: f64, t: f64) -> f64 {
    2.0 * gamma_upper_tail(beta, t) / gamma(beta)
}

// |e^{−(1+a)t} − e^{−t}| ≤ a t.
fn potential_lower_tail(beta: f64, a_max: f64, t: f64) -> f64 {
    a_max * t.powf(beta + 1.0) / ((beta + 1.0) * gamma(beta))
}

/// Largest `√|ν|` the default potential grid is sized for.
const POTENTIAL_GRID_MAX_A: f64 = 100.0;

/// Grid on which the `J_β` representation is truncated below
/// [`REPRESENTATION_TOL`] for `|ν| ≤ 10⁴`: both cutoffs come from analytic
/// tail bounds.
pub fn bessel_potential_grid(beta: f64) -> Result<TimeGrid> {
    BesselOrder::new(beta)?;
    let tol = 0.1 * REPRESENTATION_TOL;
    let t_min = (tol * (beta + 1.0) * gamma(beta) / POTENTIAL_GRID_MAX_A).powf(1.0 / (beta + 1.0));
    let t_max = upper_cutoff(beta + 1.0, tol, |t| potential_upper_tail(beta, t));
    TimeGrid::with_step(t_min, t_max, REPRESENTATION_LOG_STEP)
}

// The profile t^β e^{−t}, with integral Γ(β), is subtracted so that the
// remainder vanishes like t^{β+1} at zero.
fn potential_multiplier(beta: f64, a: f64, ts: &[f64], ws: &[f64]) -> f64 {
    let body: f64 = ts
        .iter()
        .zip(ws)
        .map(|(t, w)| w * t.powf(beta) * (-t).exp() * (-t * a).exp_m1())
        .sum();
    1.0 + body / gamma(beta)
}

fn coarsened(grid: &TimeGrid) -> TimeGrid {
    TimeGrid {
        count: (grid.count - 1) / 2 + 1,
        ..*grid
    }
}

fn residual_guard(context: &'static str, residual: f64) -> Result<()> {
    if residual > REPRESENTATION_TOL {
        return Err(Error::Residual {
            context,
            residual,
            tolerance: REPRESENTATION_TOL,
        });
    }
    Ok(())
}

/// `J_β f = Γ(β)^{−1} ∫_0^∞ t^β e^{−t} P_t f dt/t`, applied per coefficient
/// by the trapezoid rule in `log t` on `grid`.
///
/// Fails with a residual error when the grid's range or density leaves
/// more than [`REPRESENTATION_TOL`] unresolved.
pub fn bessel_potential_integral(
    f: &HermiteExpansion,
    beta: f64,
    grid: &TimeGrid,
) -> Result<HermiteExpansion> {
    BesselOrder::new(beta)?;
    grid.validate()?;
    let a_max = (f.max_order() as f64).sqrt();
    let truncation =
        potential_lower_tail(beta, a_max, grid.t_min) + potential_upper_tail(beta, grid.t_max);
    residual_guard("Bessel potential truncation", truncation)?;
    let (ts, ws) = (grid.points(), grid.haar_weights());
    let coarse = coarsened(grid);
    let (tc, wc) = (coarse.points(), coarse.haar_weights());
    let mut table = BTreeMap::new();
    for (nu, _) in f.terms() {
        let n = nu.order();
        if table.contains_key(&n) {
            continue;
        }
        let a = (n as f64).sqrt();
        let fine = potential_multiplier(beta, a, &ts, &ws);
        let rough = potential_multiplier(beta, a, &tc, &wc);
        residual_guard("Bessel potential discretization", (fine - rough).abs())?;
        table.insert(n, fine);
    }
    Ok(f.apply_multiplier(|n| table[&n]))
}

/// `c_β^k = ∫_0^∞ u^{−β−1} (e^{−u} − 1)^k du` for `0 < β < k`.
///
/// Split at `u = 1`. On `(0, 1)` the substitution `u = v^m`, `m = 1/(k−β)`,
/// cancels the `u^{k−β−1}` endpoint behaviour exactly; on `(1, ∞)` the
/// substitution `u = w^{−1/β}` maps the algebraic tail to `(0, 1)`.
pub fn c_beta(k: u32, beta: f64) -> Result<f64> {
    if k == 0 || !(beta > 0.0) || !(beta < k as f64) {
        return Err(Error::precondition(format!(
            "c_beta needs k ≥ 1 and 0 < β < k, got k = {k}, β = {beta}"
        )));
    }
    let kk = k as i32;
    let m = 1.0 / (k as f64 - beta);
    let near = |v: f64| {
        let u = v.powf(m);
        let ratio = if u < 1e-300 { -1.0 } else { (-u).exp_m1() / u };
        m * ratio.powi(kk)
    };
    let far = |w: f64| {
        if w <= 0.0 {
            return (-1f64).powi(kk) / beta;
        }
        (-w.powf(-1.0 / beta)).exp_m1().powi(kk) / beta
    };
    let opts = Adaptive::with_tol(1e-14, 1e-13);
    let a = integrate_checked(near, 0.0, 1.0, &[], opts, "c_beta near zero")?;
    let b = integrate_checked(far, 0.0, 1.0, &[], opts, "c_beta tail")?;
    Ok(a.value + b.value)
}

// Two smooth profiles are subtracted: s(t) = 1 − e^{−t^k}, with integral
// Γ(1 − β/k)/β against t^{−β} dt/t, carries the limit at infinity, and
// ((1+a)^k − 1) t^k e^{−t}, with integral ((1+a)^k − 1) Γ(k − β), cancels
// the t^{k−β} behaviour at zero. The remainder is O(t^{k+1−β}) at zero.
fn derivative_integrand(beta: f64, k: u32, a: f64, t: f64) -> f64 {
    let kk = k as i32;
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let main = (-t * (1.0 + a)).exp_m1().powi(kk);
    let profile = -(-t.powi(kk)).exp_m1();
    let head = ((1.0 + a).powi(kk) - 1.0) * t.powi(kk) * (-t).exp();
    t.powf(-beta) * (main - sign * (profile + head))
}

fn derivative_profile_integral(beta: f64, k: u32, a: f64) -> f64 {
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let kf = k as f64;
    sign * (gamma(1.0 - beta / kf) / beta + ((1.0 + a).powi(k as i32) - 1.0) * gamma(kf - beta))
}

// Bounds for the pieces of ∫ t^{−β}(…) dt/t outside [t_min, t_max]; the
// lower one holds for (1 + a_max) t ≤ 1.
fn derivative_lower_tail(beta: f64, k: u32, a_max: f64, t: f64) -> f64 {
    if (1.0 + a_max) * t > 1.0 {
        return f64::INFINITY;
    }
    let kf = k as f64;
    (kf + 2.0) * (2.0 + a_max).powi(k as i32 + 1) * t.powf(kf + 1.0 - beta) / (kf + 1.0 - beta)
}

fn derivative_upper_tail(beta: f64, k: u32, a_max: f64, t: f64) -> f64 {
    let kf = k as f64;
    (kf * (-t).exp() + (-t.powi(k as i32)).exp()) * t.powf(-beta) / beta
        + ((1.0 + a_max).powi(k as i32) + 1.0) * gamma_upper_tail(kf - beta, t)
}

/// Grid on which the `D^β` representation is truncated below
/// [`REPRESENTATION_TOL`] for every chaos order up to `max_order`.
pub fn bessel_derivative_grid(beta: f64, max_order: u32) -> Result<TimeGrid> {
    let order = BesselOrder::new(beta)?;
    let k = order.k();
    let tol = 0.1 * REPRESENTATION_TOL * c_beta(k, beta)?.abs();
    let a_max = (max_order as f64).sqrt();
    let e = k as f64 + 1.0 - beta;
    let scale = (k as f64 + 2.0) * (2.0 + a_max).powi(k as i32 + 1) / e;
    let t_min = (tol / scale).powf(1.0 / e).min(0.5 / (1.0 + a_max));
    let t_max = upper_cutoff(1.0, tol, |t| derivative_upper_tail(beta, k, a_max, t));
    TimeGrid::with_step(t_min, t_max, REPRESENTATION_LOG_STEP)
}

fn derivative_multiplier(beta: f64, k: u32, a: f64, ts: &[f64], ws: &[f64], c: f64) -> f64 {
    let body: f64 = ts
        .iter()
        .zip(ws)
        .map(|(&t, w)| w * derivative_integrand(beta, k, a, t))
        .sum();
    (body + derivative_profile_integral(beta, k, a)) / c
}

/// `D^β f = (c_β^k)^{−1} ∫_0^∞ t^{−β−1} (e^{−t} P_t − I)^k f dt` with
/// `k = ⌊β⌋ + 1`, applied per coefficient on `grid`.
///
/// The integrand tends to the constant `(−1)^k t^{−β}` at infinity; a smooth
/// profile with the same limit and a closed-form integral is subtracted so
/// that the trapezoid rule in `log t` sees an integrand decaying at both
/// ends.
pub fn bessel_derivative_integral(
    f: &HermiteExpansion,
    beta: f64,
    grid: &TimeGrid,
) -> Result<HermiteExpansion> {
    let order = BesselOrder::new(beta)?;
    let k = order.k();
    grid.validate()?;
    let c = c_beta(k, beta)?;
    let a_max = (f.max_order() as f64).sqrt();
    let truncation = (derivative_lower_tail(beta, k, a_max, grid.t_min)
        + derivative_upper_tail(beta, k, a_max, grid.t_max))
        / c.abs();
    residual_guard("Bessel derivative truncation", truncation)?;
    let (ts, ws) = (grid.points(), grid.haar_weights());
    let coarse = coarsened(grid);
    let (tc, wc) = (coarse.points(), coarse.haar_weights());
    let mut table = BTreeMap::new();
    for (nu, _) in f.terms() {
        let n = nu.order();
        if table.contains_key(&n) {
            continue;
        }
        let a = (n as f64).sqrt();
        let fine = derivative_multiplier(beta, k, a, &ts, &ws, c);
        let rough = derivative_multiplier(beta, k, a, &tc, &wc, c);
        residual_guard(
            "Bessel derivative discretization",
            (fine - rough).abs() / fine.abs().max(1.0),
        )?;
        table.insert(n, fine);
    }
    Ok(f.apply_multiplier(|n| table[&n]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::MultiIndex;
    use crate::semigroups::poisson_apply_spectral;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn h(n: u32) -> HermiteExpansion {
        HermiteExpansion::basis(MultiIndex::new(vec![n]))
    }

    fn coef(f: &HermiteExpansion, n: u32) -> f64 {
        f.coefficient(&MultiIndex::new(vec![n]))
    }

    fn ladder(max: u32) -> HermiteExpansion {
        HermiteExpansion::from_terms(
            1,
            (0..=max).map(|n| (MultiIndex::new(vec![n]), 1.0 + 0.1 * n as f64)),
        )
        .unwrap()
    }

    #[test]
    fn bessel_order_k() {
        assert_eq!(BesselOrder::new(0.5).unwrap().k(), 1);
        assert_eq!(BesselOrder::new(1.0).unwrap().k(), 2);
        assert_eq!(BesselOrder::new(2.5).unwrap().k(), 3);
        assert!(BesselOrder::new(0.0).is_err());
    }

    #[test]
    fn spectral_actions() {
        assert_eq!(bessel_potential_spectral(&h(0), 1.7).unwrap(), h(0));
        assert!((coef(&bessel_potential_spectral(&h(1), 1.0).unwrap(), 1) - 0.5).abs() < 1e-15);
        assert_eq!(bessel_potential_spectral(&h(5), 0.0).unwrap(), h(5));
        assert!((coef(&bessel_derivative_spectral(&h(9), 2.0).unwrap(), 9) - 16.0).abs() < 1e-13);
        assert_eq!(bessel_derivative_spectral(&h(0), 0.7).unwrap(), h(0));
        let f = ladder(12);
        let back =
            bessel_derivative_spectral(&bessel_potential_spectral(&f, 1.3).unwrap(), 1.3).unwrap();
        assert!(back.max_abs_diff(&f) < 1e-14);
        assert!(bessel_potential_spectral(&f, -1.0).is_err());
    }

    #[test]
    fn forward_difference_examples() {
        let phi = |t: f64| t.sin();
        assert_eq!(
            forward_difference(phi, 1, 0.3, 1.0),
            (1.3f64).sin() - (1.0f64).sin()
        );
        for t in [0.0, 0.7, 3.0] {
            let d = forward_difference(|t: f64| t * t, 2, 0.5, t);
            assert!((d - 0.5).abs() < 1e-14);
        }
        let a = 1.3;
        for k in 1..5 {
            let (s, t) = (0.4, 0.9);
            let d = forward_difference(|t: f64| (-a * t).exp(), k, s, t);
            let want = (-a * t).exp() * ((-a * s).exp() - 1.0).powi(k as i32);
            assert!((d - want).abs() < 1e-14);
        }
        let fd = ForwardDifference {
            order: 3,
            increment: 0.2,
            base: 0.0,
        };
        assert!((fd.apply(|t| t.powi(3)) - 6.0 * 0.008).abs() < 1e-14);
    }

    #[test]
    fn forward_difference_derivative_identities() {
        let phi = |t: f64| (-t).exp() * (2.0 * t).cos();
        let dphi = |t: f64| -(-t).exp() * ((2.0 * t).cos() + 2.0 * (2.0 * t).sin());
        let h = 1e-5;
        for k in 1..4u32 {
            let (s, t) = (0.35, 0.6);
            let ds = (forward_difference(phi, k, s + h, t) - forward_difference(phi, k, s - h, t))
                / (2.0 * h);
            let want = k as f64 * forward_difference(dphi, k - 1, s, t + s);
            assert!((ds - want).abs() < 1e-6, "k={k}");
            let dt = (forward_difference(phi, k, s, t + h) - forward_difference(phi, k, s, t - h))
                / (2.0 * h);
            assert!(
                (dt - forward_difference(dphi, k, s, t)).abs() < 1e-6,
                "k={k}"
            );
        }
    }

    #[test]
    fn forward_difference_nested_integral() {
        // Δ_s^k(φ, t) = ∫_0^s…∫_0^s φ^{(k)}(t + s_1 + … + s_k) ds_1…ds_k,
        // checked for φ = e^{−t} with Gauss-Legendre nested sums.
        let (x, w) = crate::quad::gauss_legendre(20);
        let s = 0.8;
        let t = 0.3;
        let nodes: Vec<(f64, f64)> = x
            .iter()
            .zip(&w)
            .map(|(x, w)| (0.5 * s * (x + 1.0), 0.5 * s * w))
            .collect();
        for k in 1..=3u32 {
            let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
            let mut total = 0.0;
            let mut idx = vec![0usize; k as usize];
            loop {
                let (mut arg, mut weight) = (t, 1.0);
                for &i in &idx {
                    arg += nodes[i].0;
                    weight *= nodes[i].1;
                }
                total += weight * sign * (-arg).exp();
                let mut pos = 0;
                while pos < idx.len() {
                    idx[pos] += 1;
                    if idx[pos] < nodes.len() {
                        break;
                    }
                    idx[pos] = 0;
                    pos += 1;
                }
                if pos == idx.len() {
                    break;
                }
            }
            let direct = forward_difference(|u: f64| (-u).exp(), k, s, t);
            assert!((total - direct).abs() < 1e-8, "k={k}");
        }
    }

    #[test]
    fn difference_power_matches_forward_difference() {
        let f = ladder(9);
        let t = 0.45;
        for k in 1..4 {
            let lhs = semigroup_difference_power(&f, t, k).unwrap();
            for (nu, c) in f.terms() {
                let a = (nu.order() as f64).sqrt();
                let rhs = c * forward_difference(|s: f64| (-s * a).exp(), k, t, 0.0);
                assert!((lhs.coefficient(nu) - rhs).abs() < 1e-10);
            }
            // And against the binomial sum of semigroup applications.
            let mut sum = HermiteExpansion::zero(1);
            for j in 0..=k {
                let sign = if (k - j).is_multiple_of(2) { 1.0 } else { -1.0 };
                let term = poisson_apply_spectral(&f, j as f64 * t).unwrap();
                sum = sum.add(&term.scale(sign * binomial(k, j))).unwrap();
            }
            assert!(sum.max_abs_diff(&lhs) < 1e-10);
        }
    }

    // Γ(−β) Σ_j C(k,j)(−1)^{k−j} j^β, valid for non-integer β.
    fn c_beta_series(k: u32, beta: f64) -> f64 {
        (1..=k)
            .map(|j| {
                let sign = if (k - j).is_multiple_of(2) { 1.0 } else { -1.0 };
                sign * binomial(k, j) * (j as f64).powf(beta)
            })
            .sum::<f64>()
            * gamma(-beta)
    }

    // Second scheme: u = x/(1−x) on (0, 1) with plain adaptive quadrature.
    fn c_beta_mapped(k: u32, beta: f64) -> f64 {
        let f = |x: f64| {
            let u = x / (1.0 - x);
            let du = 1.0 / ((1.0 - x) * (1.0 - x));
            u.powf(-beta - 1.0) * (-u).exp_m1().powi(k as i32) * du
        };
        crate::quad::integrate(f, 0.0, 1.0, Adaptive::with_tol(1e-15, 1e-14)).value
    }

    #[test]
    fn c_beta_values() {
        assert!((c_beta(1, 0.5).unwrap() + 2.0 * PI.sqrt()).abs() < 1e-8);
        for &(k, beta) in &[(1, 0.3), (2, 1.5), (3, 2.5), (2, 0.7), (4, 3.2)] {
            let got = c_beta(k, beta).unwrap();
            let want = c_beta_series(k, beta);
            assert!(
                (got - want).abs() < 1e-9 * want.abs().max(1.0),
                "k={k} β={beta}"
            );
        }
        let a = c_beta(2, 1.5).unwrap();
        let b = c_beta_mapped(2, 1.5);
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        let a = c_beta(2, 1.0).unwrap();
        let b = c_beta_mapped(2, 1.0);
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        assert!(c_beta(1, 1.0).is_err());
        assert!(c_beta(2, 0.0).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn c_beta_sign(k in 1u32..5, frac in 0.02f64..0.98) {
            let beta = k as f64 - 1.0 + frac;
            prop_assume!(beta > 0.0);
            let c = c_beta(k, beta).unwrap();
            let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
            prop_assert!(sign * c > 0.0);
        }

        #[test]
        fn potential_is_linear(a in prop::collection::vec(-3.0f64..3.0, 6), b in prop::collection::vec(-3.0f64..3.0, 6)) {
            let mk = |v: &[f64]| HermiteExpansion::from_terms(
                1, v.iter().enumerate().map(|(n, c)| (MultiIndex::new(vec![n as u32]), *c))).unwrap();
            let (f, g) = (mk(&a), mk(&b));
            let lhs = bessel_potential_spectral(&f.add(&g).unwrap(), 0.8).unwrap();
            let rhs = bessel_potential_spectral(&f, 0.8).unwrap()
                .add(&bessel_potential_spectral(&g, 0.8).unwrap()).unwrap();
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-14);
        }
    }

    #[test]
    fn potential_integral_matches_spectral() {
        let f = ladder(25);
        for beta in [0.5, 1.0, 1.5, 2.5] {
            let grid = bessel_potential_grid(beta).unwrap();
            let integral = bessel_potential_integral(&f, beta, &grid).unwrap();
            let spectral = bessel_potential_spectral(&f, beta).unwrap();
            assert!(integral.max_abs_diff(&spectral) < 1e-8, "β={beta}");
        }
        let grid = bessel_potential_grid(1.5).unwrap();
        let c = coef(&bessel_potential_integral(&h(4), 1.5, &grid).unwrap(), 4);
        assert!((c - 3f64.powf(-1.5)).abs() < 1e-8);
        assert!((c - 0.19245).abs() < 1e-5);
        assert!(
            (coef(
                &bessel_potential_integral(&h(0), 0.7, &bessel_potential_grid(0.7).unwrap())
                    .unwrap(),
                0
            ) - 1.0)
                .abs()
                < 1e-10
        );
    }

    #[test]
    fn representations_near_integer_orders() {
        let f = ladder(16);
        for beta in [0.01, 0.999, 1.9963, 2.999] {
            let g =
                bessel_derivative_integral(&f, beta, &bessel_derivative_grid(beta, 16).unwrap())
                    .unwrap();
            let s = bessel_derivative_spectral(&f, beta).unwrap();
            for (nu, c) in s.terms() {
                let rel = (g.coefficient(nu) - c).abs() / c.abs();
                assert!(rel < 1e-8, "D β={beta} ν={nu}: {rel:e}");
            }
        }
        for beta in [0.01, 0.05, 3.999] {
            let g =
                bessel_potential_integral(&f, beta, &bessel_potential_grid(beta).unwrap()).unwrap();
            assert!(
                g.max_abs_diff(&bessel_potential_spectral(&f, beta).unwrap()) < 1e-9,
                "J β={beta}"
            );
        }
    }

    #[test]
    fn potential_integral_flags_short_grid() {
        let narrow = TimeGrid::new(1e-2, 5.0, 200).unwrap();
        assert!(matches!(
            bessel_potential_integral(&h(1), 1.0, &narrow),
            Err(Error::Residual { .. })
        ));
        let sparse = TimeGrid::new(1e-20, 60.0, 12).unwrap();
        assert!(matches!(
            bessel_potential_integral(&h(1), 1.0, &sparse),
            Err(Error::Residual { .. })
        ));
    }

    #[test]
    fn derivative_integral_matches_spectral() {
        let f = ladder(25);
        for beta in [0.5, 1.0, 1.5, 2.5] {
            let grid = bessel_derivative_grid(beta, 25).unwrap();
            let integral = bessel_derivative_integral(&f, beta, &grid).unwrap();
            let spectral = bessel_derivative_spectral(&f, beta).unwrap();
            for (nu, c) in spectral.terms() {
                let rel = (integral.coefficient(nu) - c).abs() / c.abs();
                assert!(rel < 1e-8, "β={beta} ν={nu}: rel {rel:e}");
            }
        }
        let grid = bessel_derivative_grid(0.5, 1).unwrap();
        let c = coef(&bessel_derivative_integral(&h(1), 0.5, &grid).unwrap(), 1);
        assert!((c - 2f64.sqrt()).abs() < 1e-6);
        let c0 = coef(&bessel_derivative_integral(&h(0), 0.5, &grid).unwrap(), 0);
        assert!((c0 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn derivative_inverts_potential_through_integrals() {
        let f = ladder(9);
        for beta in [0.5, 1.5] {
            let jf =
                bessel_potential_integral(&f, beta, &bessel_potential_grid(beta).unwrap()).unwrap();
            let back =
                bessel_derivative_integral(&jf, beta, &bessel_derivative_grid(beta, 9).unwrap())
                    .unwrap();
            assert!(back.max_abs_diff(&f) < 1e-6);
        }
    }
}
