//! Variable exponents, the modular, and Luxemburg norms against `γ_d`, the
//! Haar measure `dt/t`, and flat `dt`.

use std::f64::consts::E;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hermite::QuadratureRule;
use crate::semigroups::TimeGrid;

fn default_offset() -> f64 {
    E
}

/// A radial exponent `x ↦ p(‖x‖)`; on `ℝ⁺` the radius is `t` itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ExponentFunction {
    Constant {
        value: f64,
    },
    /// `limit + amplitude / (offset + r)^power`.
    RationalDecay {
        limit: f64,
        amplitude: f64,
        #[serde(default = "default_offset")]
        offset: f64,
        power: f64,
    },
    /// Piecewise-linear in `r` through `[r, p]` knots, constant outside the
    /// knot range. A repeated abscissa is a jump (right-continuous).
    Table {
        knots: Vec<[f64; 2]>,
    },
}

impl ExponentFunction {
    pub fn constant(value: f64) -> Self {
        ExponentFunction::Constant { value }
    }

    /// `limit + amplitude / (e + r)^power`.
    pub fn rational_decay(limit: f64, amplitude: f64, power: f64) -> Self {
        ExponentFunction::RationalDecay {
            limit,
            amplitude,
            offset: E,
            power,
        }
    }

    pub fn table(knots: Vec<[f64; 2]>) -> Result<Self> {
        let p = ExponentFunction::Table { knots };
        p.check_shape()?;
        Ok(p)
    }

    fn check_shape(&self) -> Result<()> {
        match self {
            ExponentFunction::Constant { value } => {
                if !value.is_finite() {
                    return Err(Error::precondition("exponent value must be finite"));
                }
            }
            ExponentFunction::RationalDecay {
                limit,
                amplitude,
                offset,
                power,
            } => {
                if ![*limit, *amplitude, *offset, *power]
                    .iter()
                    .all(|v| v.is_finite())
                {
                    return Err(Error::precondition("exponent parameters must be finite"));
                }
                if !(*offset > 0.0) || *power < 0.0 {
                    return Err(Error::precondition(
                        "rational-decay exponent needs offset > 0 and power ≥ 0",
                    ));
                }
            }
            ExponentFunction::Table { knots } => {
                if knots.is_empty() {
                    return Err(Error::precondition(
                        "exponent table needs at least one knot",
                    ));
                }
                if knots.iter().flatten().any(|v| !v.is_finite()) {
                    return Err(Error::precondition("exponent table entries must be finite"));
                }
                if knots[0][0] < 0.0 || knots.windows(2).any(|w| w[1][0] < w[0][0]) {
                    return Err(Error::precondition(
                        "exponent table abscissae must be non-negative and non-decreasing",
                    ));
                }
            }
        }
        Ok(())
    }

    /// Checks finiteness, shape, and `p₋ ≥ min_lower`.
    pub fn validate(&self, min_lower: f64) -> Result<()> {
        self.check_shape()?;
        if self.lower() < min_lower {
            return Err(Error::precondition(format!(
                "exponent lower bound {} is below {}",
                self.lower(),
                min_lower
            )));
        }
        Ok(())
    }

    pub fn at_radius(&self, r: f64) -> f64 {
        match self {
            ExponentFunction::Constant { value } => *value,
            ExponentFunction::RationalDecay {
                limit,
                amplitude,
                offset,
                power,
            } => limit + amplitude / (offset + r).powf(*power),
            ExponentFunction::Table { knots } => {
                let i = knots.partition_point(|k| k[0] <= r);
                if i == 0 {
                    knots[0][1]
                } else if i == knots.len() {
                    knots[i - 1][1]
                } else {
                    let [x0, y0] = knots[i - 1];
                    let [x1, y1] = knots[i];
                    y0 + (y1 - y0) * (r - x0) / (x1 - x0)
                }
            }
        }
    }

    /// `p(x)` at a point of `ℝ^d`.
    pub fn at(&self, x: &[f64]) -> f64 {
        self.at_radius(x.iter().map(|v| v * v).sum::<f64>().sqrt())
    }

    pub fn is_constant(&self) -> bool {
        match self {
            ExponentFunction::Constant { .. } => true,
            ExponentFunction::RationalDecay {
                amplitude, power, ..
            } => *amplitude == 0.0 || *power == 0.0,
            ExponentFunction::Table { knots } => knots.iter().all(|k| k[1] == knots[0][1]),
        }
    }

    fn extremes(&self) -> (f64, f64) {
        match self {
            ExponentFunction::Constant { value } => (*value, *value),
            ExponentFunction::RationalDecay { .. } => {
                let a = self.at_radius(0.0);
                let b = self.at_infinity();
                (a.min(b), a.max(b))
            }
            ExponentFunction::Table { knots } => knots
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), k| {
                    (lo.min(k[1]), hi.max(k[1]))
                }),
        }
    }

    /// `p₋`.
    pub fn lower(&self) -> f64 {
        self.extremes().0
    }

    /// `p₊`.
    pub fn upper(&self) -> f64 {
        self.extremes().1
    }

    /// `p_∞ = lim_{r→∞} p`.
    pub fn at_infinity(&self) -> f64 {
        match self {
            ExponentFunction::Constant { value } => *value,
            ExponentFunction::RationalDecay {
                limit,
                amplitude,
                power,
                ..
            } => {
                if *power == 0.0 {
                    limit + amplitude
                } else {
                    *limit
                }
            }
            ExponentFunction::Table { knots } => knots[knots.len() - 1][1],
        }
    }

    /// `p(0)`.
    pub fn at_zero(&self) -> f64 {
        self.at_radius(0.0)
    }

    /// Abscissae where the exponent is not smooth (table knots).
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            ExponentFunction::Table { knots } => knots.iter().map(|k| k[0]).collect(),
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for ExponentFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExponentFunction::Constant { value } => write!(f, "{value}"),
            ExponentFunction::RationalDecay {
                limit,
                amplitude,
                offset,
                power,
            } => write!(f, "{limit}+{amplitude}/({offset}+r)^{power}"),
            ExponentFunction::Table { knots } => write!(f, "table[{}]", knots.len()),
        }
    }
}

/// Outer exponent of a Besov norm: a finite exponent on `ℝ⁺`, or `∞`
/// (supremum). Serialized as an exponent object or the string `"infinity"`.
#[derive(Debug, Clone, PartialEq)]
pub enum OuterExponent {
    Finite(ExponentFunction),
    Infinity,
}

impl OuterExponent {
    pub fn constant(q: f64) -> Self {
        OuterExponent::Finite(ExponentFunction::constant(q))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, OuterExponent::Infinity)
    }
}

impl fmt::Display for OuterExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OuterExponent::Finite(q) => q.fmt(f),
            OuterExponent::Infinity => f.write_str("infinity"),
        }
    }
}

impl Serialize for OuterExponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            OuterExponent::Finite(q) => q.serialize(s),
            OuterExponent::Infinity => s.serialize_str("infinity"),
        }
    }
}

impl<'de> Deserialize<'de> for OuterExponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Word(String),
            Number(f64),
            Exponent(ExponentFunction),
        }
        match Repr::deserialize(d)? {
            Repr::Word(w) if w == "infinity" || w == "inf" => Ok(OuterExponent::Infinity),
            Repr::Word(w) => Err(serde::de::Error::custom(format!(
                "unknown outer exponent `{w}` (expected \"infinity\" or an exponent object)"
            ))),
            Repr::Number(v) => Ok(OuterExponent::constant(v)),
            Repr::Exponent(q) => Ok(OuterExponent::Finite(q)),
        }
    }
}

/// Samples `|f(x_i)|` paired with the weights of the underlying measure.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedFunction {
    dim: usize,
    points: Vec<f64>,
    values: Vec<f64>,
    weights: Vec<f64>,
}

impl DiscretizedFunction {
    /// `points` is flat (`dim` coordinates per sample).
    pub fn new(dim: usize, points: Vec<f64>, values: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if values.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: weights.len(),
                found: values.len(),
            });
        }
        if points.len() != dim * values.len() {
            return Err(Error::DimensionMismatch {
                expected: dim * values.len(),
                found: points.len(),
            });
        }
        if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::precondition(
                "measure weights must be finite and non-negative",
            ));
        }
        Ok(DiscretizedFunction {
            dim,
            points,
            values,
            weights,
        })
    }

    /// Samples at the nodes of a `γ_d` rule.
    pub fn on_rule(rule: &QuadratureRule, values: Vec<f64>) -> Result<Self> {
        Self::new(
            rule.dim(),
            rule.flat_nodes().to_vec(),
            values,
            rule.weights().to_vec(),
        )
    }

    /// Samples on a time grid against the Haar measure `dt/t`.
    pub fn on_time_grid(grid: &TimeGrid, values: Vec<f64>) -> Result<Self> {
        Self::new(1, grid.points(), values, grid.haar_weights())
    }

    /// Samples on a time grid against Lebesgue `dt`.
    pub fn on_time_grid_flat(grid: &TimeGrid, values: Vec<f64>) -> Result<Self> {
        Self::new(1, grid.points(), values, grid.lebesgue_weights())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    /// Same nodes and weights, new values.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        Self::new(self.dim, self.points.clone(), values, self.weights.clone())
    }

    /// `p(x_i)` at every node.
    pub fn exponents(&self, p: &ExponentFunction) -> Vec<f64> {
        (0..self.len()).map(|i| p.at(self.point(i))).collect()
    }
}

fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

fn check_exponents(exps: &[f64]) -> Result<()> {
    if exps.iter().any(|p| !(*p >= 1.0) || !p.is_finite()) {
        return Err(Error::precondition("exponent values must lie in [1, ∞)"));
    }
    Ok(())
}

fn raw_modular(values: &[f64], weights: &[f64], exps: &[f64], scale: f64) -> f64 {
    values
        .iter()
        .zip(weights)
        .zip(exps)
        .map(|((v, w), p)| {
            let a = v.abs() / scale;
            if a == 0.0 {
                0.0
            } else {
                w * a.powf(*p)
            }
        })
        .sum()
}

/// `Σ w_i |f_i|^{p_i}` for pre-sampled exponent values.
pub fn modular_sampled(values: &[f64], weights: &[f64], exps: &[f64]) -> Result<f64> {
    check_finite(values)?;
    check_exponents(exps)?;
    Ok(raw_modular(values, weights, exps, 1.0))
}

/// The quadrature modular `ρ_{p(·)}(f) = Σ w_i |f(x_i)|^{p(x_i)}`.
pub fn modular(f: &DiscretizedFunction, p: &ExponentFunction) -> Result<f64> {
    modular_sampled(&f.values, &f.weights, &f.exponents(p))
}

const BRACKET_STEPS: usize = 64;
const LAMBDA_REL_TOL: f64 = 1e-14;

/// Luxemburg norm for pre-sampled exponent values.
///
/// Brackets the root of `ρ(f/λ) = 1` by doubling/halving from the sup of
/// `|f|`, then runs an Illinois-safeguarded secant in `log λ` on
/// `log ρ(f/λ)`.
pub fn luxemburg_norm_sampled(values: &[f64], weights: &[f64], exps: &[f64]) -> Result<f64> {
    check_finite(values)?;
    check_exponents(exps)?;
    let active = values
        .iter()
        .zip(weights)
        .any(|(v, w)| *v != 0.0 && *w > 0.0);
    if !active {
        return Ok(0.0);
    }
    let peak = values
        .iter()
        .zip(weights)
        .filter(|(_, w)| **w > 0.0)
        .fold(0.0f64, |m, (v, _)| m.max(v.abs()));
    if let Some(&p) = exps.first() {
        if exps.iter().all(|&q| q == p) {
            let m = raw_modular(values, weights, exps, peak);
            return Ok(peak * m.powf(1.0 / p));
        }
    }
    let phi = |s: f64| raw_modular(values, weights, exps, s.exp()).ln();

    let mut lo = peak.ln();
    let mut flo = phi(lo);
    let mut hi = lo;
    let mut fhi = flo;
    let ln2 = std::f64::consts::LN_2;
    let mut steps = 0;
    if flo > 0.0 {
        while fhi > 0.0 {
            steps += 1;
            if steps > BRACKET_STEPS {
                return Err(Error::NotNormalizable);
            }
            lo = hi;
            flo = fhi;
            hi += ln2;
            fhi = phi(hi);
        }
    } else {
        while flo <= 0.0 {
            if flo == 0.0 {
                return Ok(lo.exp());
            }
            steps += 1;
            if steps > BRACKET_STEPS {
                return Err(Error::NotNormalizable);
            }
            hi = lo;
            fhi = flo;
            lo -= ln2;
            flo = phi(lo);
        }
    }
    // Invariant: phi(lo) > 0 ≥ phi(hi).
    let mut side = 0i8;
    for _ in 0..200 {
        if hi - lo <= LAMBDA_REL_TOL {
            break;
        }
        let mut s = hi - fhi * (hi - lo) / (fhi - flo);
        if !(s > lo && s < hi) {
            s = 0.5 * (lo + hi);
        }
        let fs = phi(s);
        if fs == 0.0 {
            return Ok(s.exp());
        }
        if fs > 0.0 {
            lo = s;
            flo = fs;
            if side == -1 {
                fhi *= 0.5;
            }
            side = -1;
        } else {
            hi = s;
            fhi = fs;
            if side == 1 {
                flo *= 0.5;
            }
            side = 1;
        }
    }
    Ok((0.5 * (lo + hi)).exp())
}

/// `‖f‖_{p(·)} = inf{λ > 0 : ρ(f/λ) ≤ 1}` against the measure carried by `f`.
pub fn luxemburg_norm(f: &DiscretizedFunction, p: &ExponentFunction) -> Result<f64> {
    luxemburg_norm_sampled(&f.values, &f.weights, &f.exponents(p))
}

/// Norm of `g` against `dt/t`; for `q = ∞` the grid supremum of `|g|`.
pub fn haar_norm(g: &DiscretizedFunction, q: &OuterExponent) -> Result<f64> {
    match q {
        OuterExponent::Finite(q) => luxemburg_norm(g, q),
        OuterExponent::Infinity => {
            check_finite(&g.values)?;
            Ok(g.values.iter().fold(0.0f64, |m, v| m.max(v.abs())))
        }
    }
}

/// Grid certificates for the log-Hölder conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogHolderConstants {
    /// `max |p(x)−p(y)| log(e + 1/|x−y|)` over grid pairs.
    pub local: f64,
    /// `max |p(x)−p_∞| log(e + |x|)` over the grid (base point 0).
    pub at_infinity: f64,
}

/// Estimates the log-Hölder constants of `p` on a point set.
pub fn check_log_holder(p: &ExponentFunction, grid: &[Vec<f64>]) -> Result<LogHolderConstants> {
    if grid.len() < 2 {
        return Err(Error::precondition(
            "log-Hölder check needs at least 2 points",
        ));
    }
    let vals: Vec<f64> = grid.iter().map(|x| p.at(x)).collect();
    let p_inf = p.at_infinity();
    let mut local = 0.0f64;
    for i in 0..grid.len() {
        for j in i + 1..grid.len() {
            let dist = grid[i]
                .iter()
                .zip(&grid[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            if dist == 0.0 {
                continue;
            }
            local = local.max((vals[i] - vals[j]).abs() * (E + 1.0 / dist).ln());
        }
    }
    let at_infinity = grid
        .iter()
        .zip(&vals)
        .map(|(x, v)| {
            let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
            (v - p_inf).abs() * (E + r).ln()
        })
        .fold(0.0f64, f64::max);
    Ok(LogHolderConstants { local, at_infinity })
}

/// `max ‖x‖² |p(x) − p_∞|` over the grid: the constant of the Gaussian
/// decay class, finite on every grid when the class condition holds.
pub fn gaussian_decay_constant(p: &ExponentFunction, grid: &[Vec<f64>]) -> f64 {
    let p_inf = p.at_infinity();
    grid.iter()
        .map(|x| {
            let r2: f64 = x.iter().map(|c| c * c).sum();
            r2 * (p.at(x) - p_inf).abs()
        })
        .fold(0.0, f64::max)
}

/// Smallest `A` for the endpoint conditions of the half-line class:
/// `|q(t) − q(0)| ≤ A/ln(1/t)` on `(0, 1/2]` and `|q(t) − q(∞)| ≤ A/ln t`
/// for `t > 2`, estimated on the given points.
pub fn half_line_class_constant(q: &ExponentFunction, ts: &[f64]) -> f64 {
    let q0 = q.at_zero();
    let qi = q.at_infinity();
    ts.iter()
        .map(|&t| {
            if t > 0.0 && t <= 0.5 {
                (q.at_radius(t) - q0).abs() * (1.0 / t).ln()
            } else if t > 2.0 {
                (q.at_radius(t) - qi).abs() * t.ln()
            } else {
                0.0
            }
        })
        .fold(0.0, f64::max)
}
