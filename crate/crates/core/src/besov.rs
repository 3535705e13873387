//! Variable Gaussian Besov-Lipschitz norms
//! `‖f‖_{p(·)} + ‖t^{k−α} ‖∂_t^k P_t f‖_{p(·),γ_d}‖_{q(·),dt/t}`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponents::{luxemburg_norm_sampled, ExponentFunction, OuterExponent};
use crate::hermite::{HermiteExpansion, QuadratureRule, SampledBasis};
use crate::semigroups::{poisson_derivative_multiplier, TimeGrid};

/// Parameters of a Besov norm. `k` defaults to `⌊α⌋ + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BesovParams {
    pub alpha: f64,
    pub k: u32,
    pub p: ExponentFunction,
    pub q: OuterExponent,
    pub grid: TimeGrid,
    pub rule: QuadratureRule,
}

/// `⌊α⌋ + 1`.
pub fn default_k(alpha: f64) -> u32 {
    alpha.floor() as u32 + 1
}

impl BesovParams {
    pub fn new(
        alpha: f64,
        p: ExponentFunction,
        q: OuterExponent,
        rule: QuadratureRule,
    ) -> Result<Self> {
        let params = BesovParams {
            alpha,
            k: default_k(alpha.max(0.0)),
            p,
            q,
            grid: crate::defaults::default_time_grid(),
            rule,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_k(mut self, k: u32) -> Result<Self> {
        self.k = k;
        self.validate()?;
        Ok(self)
    }

    pub fn with_grid(mut self, grid: TimeGrid) -> Result<Self> {
        self.grid = grid;
        self.validate()?;
        Ok(self)
    }

    pub fn with_alpha(mut self, alpha: f64) -> Result<Self> {
        self.alpha = alpha;
        self.k = default_k(alpha.max(0.0));
        self.validate()?;
        Ok(self)
    }

    pub fn with_q(mut self, q: OuterExponent) -> Result<Self> {
        self.q = q;
        self.validate()?;
        Ok(self)
    }

    /// Same parameters on a grid `factor` times denser.
    pub fn refined(&self, factor: usize) -> Self {
        BesovParams {
            grid: self.grid.refine(factor),
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha >= 0.0) || !self.alpha.is_finite() {
            return Err(Error::precondition(format!(
                "α must be ≥ 0, got {}",
                self.alpha
            )));
        }
        if !((self.k as f64) > self.alpha) {
            return Err(Error::precondition(format!(
                "k = {} must exceed α = {}",
                self.k, self.alpha
            )));
        }
        self.p.validate(1.0)?;
        if !(self.p.lower() > 1.0) {
            return Err(Error::precondition("inner exponent needs p₋ > 1"));
        }
        if let OuterExponent::Finite(q) = &self.q {
            q.validate(1.0)?;
        }
        self.grid.validate()
    }
}

/// Seminorm value with the inner-norm trace `g(t)` it was computed from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeminormResult {
    pub value: f64,
    pub times: Vec<f64>,
    /// `g(t) = ‖∂_t^k P_t f‖_{p(·),γ_d}` at each grid time.
    pub trace: Vec<f64>,
    /// Change of the value when every other grid point is dropped.
    pub residual: f64,
    /// False when the value is infinite or moves by more than 5% between
    /// the grid and its half-density subgrid.
    pub in_space: bool,
    /// For `q = ∞`: the maximizing time, and whether it sits on the grid
    /// boundary.
    pub t_star: Option<f64>,
    pub boundary: bool,
}

const IN_SPACE_SLACK: f64 = 0.05;

impl SeminormResult {
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.times.iter().copied().zip(self.trace.iter().copied())
    }

    /// `t,g` table with a header row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,g\n");
        for (t, g) in self.rows() {
            out.push_str(&format!("{t:.16e},{g:.16e}\n"));
        }
        out
    }
}

/// Evaluates `t ↦ ‖∂_t^k P_t f‖_{p(·),γ_d}` with the basis tabulated once.
pub(crate) struct DerivativeNorms {
    basis: SampledBasis,
    orders: Vec<u32>,
    coeffs: Vec<f64>,
    weights: Vec<f64>,
    exps: Vec<f64>,
    k: u32,
}

impl DerivativeNorms {
    pub(crate) fn new(
        f: &HermiteExpansion,
        p: &ExponentFunction,
        rule: &QuadratureRule,
        k: u32,
    ) -> Result<Self> {
        if f.dim() != rule.dim() {
            return Err(Error::DimensionMismatch {
                expected: rule.dim(),
                found: f.dim(),
            });
        }
        let (indices, coeffs): (Vec<_>, Vec<_>) = f
            .terms()
            .filter(|(nu, c)| *c != 0.0 && (k == 0 || nu.order() > 0))
            .map(|(nu, c)| (nu.clone(), c))
            .unzip();
        let orders = indices.iter().map(|nu| nu.order()).collect();
        let exps = rule.nodes().map(|x| p.at(x)).collect();
        Ok(DerivativeNorms {
            basis: SampledBasis::new(indices, rule)?,
            orders,
            coeffs,
            weights: rule.weights().to_vec(),
            exps,
            k,
        })
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub(crate) fn norm_with<F: Fn(u32) -> f64>(&self, multiplier: F) -> Result<f64> {
        if self.is_zero() {
            return Ok(0.0);
        }
        let c: Vec<f64> = self
            .coeffs
            .iter()
            .zip(&self.orders)
            .map(|(c, &n)| c * multiplier(n))
            .collect();
        let values = self.basis.combine_coefficients(&c);
        luxemburg_norm_sampled(&values, &self.weights, &self.exps)
    }

    pub(crate) fn at(&self, t: f64) -> Result<f64> {
        let k = self.k;
        self.norm_with(|n| poisson_derivative_multiplier(n, t, k))
    }

    pub(crate) fn trace(&self, ts: &[f64]) -> Result<Vec<f64>> {
        ts.par_iter().map(|&t| self.at(t)).collect()
    }
}

// Outer norm of φ_i on a uniform log grid with step h. For finite q, a
// pseudo-node carries ∫_0^{t_0} (φ_0 (t/t_0)^s)^{q_0} dt/t = φ_0^{q_0}/(s q_0),
// the lower tail under the small-t power law φ ~ t^s.
fn outer_norm(ts: &[f64], phi: &[f64], h: f64, q: &ExponentFunction, s: f64) -> Result<f64> {
    let n = ts.len();
    let mut values = phi.to_vec();
    let mut weights = vec![h; n];
    weights[0] *= 0.5;
    weights[n - 1] *= 0.5;
    let mut exps: Vec<f64> = ts.iter().map(|&t| q.at_radius(t)).collect();
    if s > 0.0 {
        values.push(phi[0]);
        weights.push(1.0 / (s * exps[0]));
        exps.push(exps[0]);
    }
    luxemburg_norm_sampled(&values, &weights, &exps)
}

struct OuterValue {
    value: f64,
    residual: f64,
    t_star: Option<f64>,
    boundary: bool,
}

fn golden_max<F: Fn(f64) -> Result<f64>>(phi: F, mut lo: f64, mut hi: f64) -> Result<(f64, f64)> {
    // Maximize φ(e^σ) over σ ∈ [lo, hi].
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut a = hi - r * (hi - lo);
    let mut b = lo + r * (hi - lo);
    let mut fa = phi(a.exp())?;
    let mut fb = phi(b.exp())?;
    for _ in 0..80 {
        if hi - lo < 1e-12 {
            break;
        }
        if fa >= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - r * (hi - lo);
            fa = phi(a.exp())?;
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + r * (hi - lo);
            fb = phi(b.exp())?;
        }
    }
    Ok(if fa >= fb {
        (a.exp(), fa)
    } else {
        (b.exp(), fb)
    })
}

fn sup_refined(
    norms: &DerivativeNorms,
    ts: &[f64],
    phi: &[f64],
    s: f64,
) -> Result<(f64, f64, bool)> {
    let (imax, &vmax) =
        phi.iter().enumerate().fold(
            (0, &phi[0]),
            |best, (i, v)| if *v > *best.1 { (i, v) } else { best },
        );
    if vmax == 0.0 {
        return Ok((0.0, ts[imax], false));
    }
    if imax == 0 || imax + 1 == ts.len() {
        return Ok((vmax, ts[imax], true));
    }
    let f = |t: f64| Ok(t.powf(s) * norms.at(t)?);
    let (t_star, v) = golden_max(f, ts[imax - 1].ln(), ts[imax + 1].ln())?;
    Ok((
        v.max(vmax),
        if v >= vmax { t_star } else { ts[imax] },
        false,
    ))
}

fn outer_value(
    norms: &DerivativeNorms,
    grid: &TimeGrid,
    ts: &[f64],
    trace: &[f64],
    s: f64,
    q: &OuterExponent,
) -> Result<OuterValue> {
    let phi: Vec<f64> = ts.iter().zip(trace).map(|(t, g)| t.powf(s) * g).collect();
    match q {
        OuterExponent::Infinity => {
            let (value, t_star, boundary) = sup_refined(norms, ts, &phi, s)?;
            let coarse = phi.iter().step_by(2).fold(0.0f64, |m, v| m.max(*v));
            Ok(OuterValue {
                value,
                residual: (value - coarse).abs(),
                t_star: Some(t_star),
                boundary,
            })
        }
        OuterExponent::Finite(q) => {
            let h = grid.log_step();
            let value = outer_norm(ts, &phi, h, q, s)?;
            let tc: Vec<f64> = ts.iter().step_by(2).copied().collect();
            let pc: Vec<f64> = phi.iter().step_by(2).copied().collect();
            let coarse = if tc.len() >= 2 {
                outer_norm(&tc, &pc, 2.0 * h, q, s)?
            } else {
                value
            };
            Ok(OuterValue {
                value,
                residual: (value - coarse).abs(),
                t_star: None,
                boundary: false,
            })
        }
    }
}

/// `‖t^{k−α} ‖∂_t^k P_t f‖_{p(·),γ_d}‖_{q(·),dt/t}`; for `q = ∞` this is
/// [`besov_infty_constant`].
///
/// A non-normalizable outer norm is reported through `in_space = false`
/// with an infinite value rather than as an error.
pub fn besov_seminorm(f: &HermiteExpansion, params: &BesovParams) -> Result<SeminormResult> {
    params.validate()?;
    let norms = DerivativeNorms::new(f, &params.p, &params.rule, params.k)?;
    let ts = params.grid.points();
    if norms.is_zero() {
        return Ok(SeminormResult {
            value: 0.0,
            trace: vec![0.0; ts.len()],
            times: ts,
            residual: 0.0,
            in_space: true,
            t_star: None,
            boundary: false,
        });
    }
    let trace = norms.trace(&ts)?;
    let s = params.k as f64 - params.alpha;
    let outer = match outer_value(&norms, &params.grid, &ts, &trace, s, &params.q) {
        Ok(v) => v,
        Err(Error::NotNormalizable) => OuterValue {
            value: f64::INFINITY,
            residual: f64::INFINITY,
            t_star: None,
            boundary: false,
        },
        Err(e) => return Err(e),
    };
    let in_space = outer.value.is_finite()
        && outer.residual <= IN_SPACE_SLACK * outer.value
        && !outer.boundary;
    Ok(SeminormResult {
        value: outer.value,
        times: ts,
        trace,
        residual: outer.residual,
        in_space,
        t_star: outer.t_star,
        boundary: outer.boundary,
    })
}

/// `A_k(f) = sup_t t^{k−α} ‖∂_t^k P_t f‖_{p(·),γ_d}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InftyConstant {
    pub value: f64,
    pub t_star: f64,
    /// The grid maximum sits on the first or last grid point.
    pub boundary: bool,
}

/// Grid supremum of `t^{k−α} g(t)`, refined by golden-section search in
/// `log t` around the best grid point.
pub fn besov_infty_constant(
    f: &HermiteExpansion,
    alpha: f64,
    k: u32,
    p: &ExponentFunction,
    grid: &TimeGrid,
    rule: &QuadratureRule,
) -> Result<InftyConstant> {
    if !((k as f64) > alpha) || !(alpha >= 0.0) {
        return Err(Error::precondition(format!(
            "k = {k} must exceed α = {alpha} ≥ 0"
        )));
    }
    grid.validate()?;
    let norms = DerivativeNorms::new(f, p, rule, k)?;
    let ts = grid.points();
    if norms.is_zero() {
        return Ok(InftyConstant {
            value: 0.0,
            t_star: ts[0],
            boundary: false,
        });
    }
    let trace = norms.trace(&ts)?;
    let s = k as f64 - alpha;
    let phi: Vec<f64> = ts.iter().zip(&trace).map(|(t, g)| t.powf(s) * g).collect();
    let (value, t_star, boundary) = sup_refined(&norms, &ts, &phi, s)?;
    Ok(InftyConstant {
        value,
        t_star,
        boundary,
    })
}

/// The two pieces of a Besov norm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BesovNorm {
    pub lebesgue: f64,
    pub seminorm: SeminormResult,
}

impl BesovNorm {
    pub fn total(&self) -> f64 {
        self.lebesgue + self.seminorm.value
    }
}

pub fn besov_norm_parts(f: &HermiteExpansion, params: &BesovParams) -> Result<BesovNorm> {
    params.validate()?;
    let lebesgue = DerivativeNorms::new(f, &params.p, &params.rule, 0)?.norm_with(|_| 1.0)?;
    Ok(BesovNorm {
        lebesgue,
        seminorm: besov_seminorm(f, params)?,
    })
}

/// `‖f‖_{p(·),γ_d}` plus the seminorm (or `A_k(f)` when `q = ∞`).
pub fn besov_norm(f: &HermiteExpansion, params: &BesovParams) -> Result<f64> {
    Ok(besov_norm_parts(f, params)?.total())
}

/// Seminorm of `h_ν` for `p = 2` and constant finite `q`:
/// `a^α q^{−(k−α)} Γ((k−α)q)^{1/q}` with `a = √|ν|`.
pub fn eigen_seminorm_closed_form(order: u32, alpha: f64, k: u32, q: f64) -> f64 {
    let a = (order as f64).sqrt();
    let s = k as f64 - alpha;
    a.powf(alpha) * q.powf(-s) * crate::special::gamma(s * q).powf(1.0 / q)
}

/// `A_k(h_ν)` for `p = 2`: `((k−α)/e)^{k−α} a^α`.
pub fn eigen_infty_closed_form(order: u32, alpha: f64, k: u32) -> f64 {
    let a = (order as f64).sqrt();
    let s = k as f64 - alpha;
    (s / std::f64::consts::E).powf(s) * a.powf(alpha)
}

fn q_at(q: &OuterExponent, t: f64) -> f64 {
    match q {
        OuterExponent::Infinity => f64::INFINITY,
        OuterExponent::Finite(q) => q.at_radius(t),
    }
}

/// Embedding `B^{α₁}_{p,q₁} ⊂ B^{α₂}_{p,q₂}` as a norm-ratio certificate.
/// Requires `α₁ > α₂`, or `α₁ = α₂` with `q₁ ≤ q₂` at every grid time.
pub fn inclusion_diagnostic(
    h: &crate::verify::Harness,
    from: (f64, &OuterExponent),
    to: (f64, &OuterExponent),
    p: &ExponentFunction,
) -> Result<crate::verify::VerificationReport> {
    let holds = if from.0 > to.0 {
        true
    } else if from.0 == to.0 {
        h.grid
            .points()
            .iter()
            .all(|&t| q_at(from.1, t) <= q_at(to.1, t))
    } else {
        false
    };
    if !holds {
        return Err(Error::precondition(format!(
            "inclusion needs α₁ > α₂ or α₁ = α₂ with q₁ ≤ q₂ (α₁ = {}, q₁ = {}, α₂ = {}, q₂ = {})",
            from.0, from.1, to.0, to.1
        )));
    }
    crate::verify::inclusion_certificate(h, from, to, p)
}

/// Seminorm ratios `|f|_{to} / |f|_{from}` member by member; growth along a
/// family witnesses that no embedding constant exists.
pub fn inclusion_growth_profile(
    members: &[crate::verify::Member],
    from: &BesovParams,
    to: &BesovParams,
) -> Result<Vec<(String, f64)>> {
    members
        .par_iter()
        .map(|m| {
            let top = besov_seminorm(&m.f, to)?.value;
            let bottom = besov_seminorm(&m.f, from)?.value;
            Ok((m.label.clone(), top / bottom))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::defaults::default_inner_rule;
    use crate::hermite::MultiIndex;
    use proptest::prelude::*;

    fn h(n: u32) -> HermiteExpansion {
        HermiteExpansion::basis(MultiIndex::new(vec![n]))
    }

    fn params(alpha: f64, q: OuterExponent) -> BesovParams {
        BesovParams::new(
            alpha,
            ExponentFunction::constant(2.0),
            q,
            default_inner_rule(1).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn params_validation() {
        let p = params(0.5, OuterExponent::constant(2.0));
        assert_eq!(p.k, 1);
        assert_eq!(params(1.0, OuterExponent::Infinity).k, 2);
        assert!(p.clone().with_k(0).is_err());
        let bad_p = BesovParams::new(
            0.5,
            ExponentFunction::constant(1.0),
            OuterExponent::constant(2.0),
            default_inner_rule(1).unwrap(),
        );
        assert!(bad_p.is_err());
    }

    #[test]
    fn constant_has_zero_seminorm() {
        let p = params(0.5, OuterExponent::constant(2.0));
        let s = besov_seminorm(&h(0), &p).unwrap();
        assert_eq!(s.value, 0.0);
        assert!(s.trace.iter().all(|g| *g == 0.0));
        assert!((besov_norm(&h(0), &p).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigen_seminorm_example() {
        let p = params(0.5, OuterExponent::constant(2.0));
        let s = besov_seminorm(&h(1), &p).unwrap();
        assert!((s.value - 0.5f64.sqrt()).abs() < 1e-4, "{}", s.value);
        assert!((s.value - eigen_seminorm_closed_form(1, 0.5, 1, 2.0)).abs() < 1e-8);
        assert!(s.in_space);
        assert!((besov_norm(&h(1), &p).unwrap() - (1.0 + 0.5f64.sqrt())).abs() < 1e-4);
    }

    #[test]
    fn eigen_closed_forms_across_orders() {
        for alpha in [0.5, 1.5] {
            for q in [1.0, 2.0, 4.0] {
                let p = params(alpha, OuterExponent::constant(q));
                for n in [1, 4, 9, 16] {
                    let got = besov_seminorm(&h(n), &p).unwrap().value;
                    let want = eigen_seminorm_closed_form(n, alpha, p.k, q);
                    assert!(
                        (got - want).abs() < 1e-6 * want,
                        "α={alpha} q={q} n={n}: {got} vs {want}"
                    );
                }
            }
        }
    }

    #[test]
    fn infty_constant_closed_form() {
        let rule = default_inner_rule(1).unwrap();
        let grid = crate::defaults::default_time_grid();
        let two = ExponentFunction::constant(2.0);
        let a = besov_infty_constant(&h(1), 0.5, 1, &two, &grid, &rule).unwrap();
        assert!((a.value - 0.5f64.sqrt() * (-0.5f64).exp()).abs() < 1e-10);
        assert!((a.value - 0.428882).abs() < 1e-6);
        assert!((a.t_star - 0.5).abs() < 1e-4);
        assert!(!a.boundary);
        let z = besov_infty_constant(&h(0), 0.5, 1, &two, &grid, &rule).unwrap();
        assert_eq!(z.value, 0.0);
        for n in [2, 7, 25] {
            let a = besov_infty_constant(&h(n), 1.5, 2, &two, &grid, &rule).unwrap();
            let want = eigen_infty_closed_form(n, 1.5, 2);
            assert!((a.value - want).abs() < 1e-9 * want);
        }
        assert!(besov_infty_constant(&h(1), 1.0, 1, &two, &grid, &rule).is_err());
    }

    #[test]
    fn infty_boundary_is_flagged() {
        let rule = default_inner_rule(1).unwrap();
        let narrow = TimeGrid::new(1.0, 5.0, 40).unwrap();
        let a = besov_infty_constant(
            &h(4),
            0.5,
            1,
            &ExponentFunction::constant(2.0),
            &narrow,
            &rule,
        )
        .unwrap();
        assert!(a.boundary);
        assert_eq!(a.t_star, 1.0);
    }

    #[test]
    fn q_infinity_branch_is_limit_of_large_q() {
        let f = HermiteExpansion::from_terms(
            1,
            [
                (MultiIndex::new(vec![1]), 1.0),
                (MultiIndex::new(vec![3]), -0.5),
            ],
        )
        .unwrap();
        let sup = besov_seminorm(&f, &params(0.5, OuterExponent::Infinity))
            .unwrap()
            .value;
        // ‖t^s e^{−ta}‖_q ~ (s/e)^s (2π/(sq))^{1/(2q)}: increasing once q > 2πe/s.
        let mut prev = 0.0;
        for q in [64.0, 256.0, 1024.0, 4096.0] {
            let v = besov_seminorm(&f, &params(0.5, OuterExponent::constant(q)))
                .unwrap()
                .value;
            assert!(v > prev - 1e-3);
            prev = v;
        }
        assert!((prev - sup).abs() < 0.01 * sup, "{prev} vs {sup}");
    }

    #[test]
    fn seminorm_csv_rows() {
        let s = besov_seminorm(&h(2), &params(0.5, OuterExponent::constant(2.0))).unwrap();
        let csv = s.to_csv();
        assert!(csv.starts_with("t,g\n"));
        assert_eq!(csv.lines().count(), s.times.len() + 1);
    }

    #[test]
    fn variable_exponent_seminorm_is_finite_and_stable() {
        let p = BesovParams::new(
            0.5,
            ExponentFunction::rational_decay(2.0, 1.0, 2.0),
            OuterExponent::Finite(ExponentFunction::RationalDecay {
                limit: 2.0,
                amplitude: 1.0,
                offset: 1.0,
                power: 1.0,
            }),
            default_inner_rule(1).unwrap(),
        )
        .unwrap();
        let f = HermiteExpansion::from_terms(1, (0..6).map(|n| (MultiIndex::new(vec![n]), 1.0)))
            .unwrap();
        let a = besov_seminorm(&f, &p).unwrap();
        let b = besov_seminorm(&f, &p.refined(2)).unwrap();
        assert!(a.in_space);
        assert!((a.value - b.value).abs() < 1e-6 * a.value);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]
        #[test]
        fn seminorm_is_homogeneous(c in -20.0f64..20.0, coeffs in prop::collection::vec(-2.0f64..2.0, 5)) {
            let f = HermiteExpansion::from_terms(
                1, coeffs.iter().enumerate().map(|(n, c)| (MultiIndex::new(vec![n as u32 + 1]), *c))).unwrap();
            let p = params(0.5, OuterExponent::constant(2.0));
            let a = besov_seminorm(&f, &p).unwrap().value;
            let b = besov_seminorm(&f.scale(c), &p).unwrap().value;
            prop_assert!((b - c.abs() * a).abs() <= 1e-10 * (1.0 + c.abs() * a));
        }

        #[test]
        fn norm_triangle_inequality(a in prop::collection::vec(-2.0f64..2.0, 6), b in prop::collection::vec(-2.0f64..2.0, 6)) {
            let mk = |v: &[f64]| HermiteExpansion::from_terms(
                1, v.iter().enumerate().map(|(n, c)| (MultiIndex::new(vec![n as u32]), *c))).unwrap();
            let (f, g) = (mk(&a), mk(&b));
            let p = BesovParams::new(
                0.5,
                ExponentFunction::rational_decay(2.0, 1.0, 2.0),
                OuterExponent::constant(2.0),
                default_inner_rule(1).unwrap(),
            ).unwrap();
            let lhs = besov_norm(&f.add(&g).unwrap(), &p).unwrap();
            let rhs = besov_norm(&f, &p).unwrap() + besov_norm(&g, &p).unwrap();
            prop_assert!(lhs <= rhs + 1e-8);
        }
    }
}
