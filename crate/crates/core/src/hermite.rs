//! Normalized Hermite polynomials on ℝ^d, quadrature against the Gaussian
//! measure `γ_d(dx) = π^{-d/2} e^{-|x|²} dx`, Fourier-Hermite coefficients and
//! Wiener-chaos projections.
//!
//! `h_ν(x) = Π_i H_{ν_i}(x_i) / (2^{|ν|} ν!)^{1/2}` where `H_n` are the
//! physicists' Hermite polynomials. The family is orthonormal in `L²(γ_d)`.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::gauss_legendre;

/// Largest per-axis node count accepted by [`gauss_rule`].
pub const MAX_RULE_POINTS: usize = 200;

/// A multi-index `ν = (ν_1, …, ν_d)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zero(dim: usize) -> Self {
        MultiIndex(vec![0; dim])
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|ν| = Σ ν_i`.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `ν! = Π ν_i!`.
    pub fn factorial(&self) -> f64 {
        self.0
            .iter()
            .map(|&n| crate::special::factorial(n))
            .product()
    }

    /// All multi-indices of dimension `dim` with `|ν| = order`, in
    /// lexicographic order.
    pub fn with_order(dim: usize, order: u32) -> Vec<MultiIndex> {
        fn rec(dim: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if prefix.len() + 1 == dim {
                prefix.push(left);
                out.push(MultiIndex(prefix.clone()));
                prefix.pop();
                return;
            }
            for first in (0..=left).rev() {
                prefix.push(first);
                rec(dim, left - first, prefix, out);
                prefix.pop();
            }
        }
        if dim == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        rec(dim, order, &mut Vec::with_capacity(dim), &mut out);
        out.sort();
        out
    }

    /// All multi-indices with `|ν| ≤ max_order`.
    pub fn up_to_order(dim: usize, max_order: u32) -> Vec<MultiIndex> {
        (0..=max_order)
            .flat_map(|n| MultiIndex::with_order(dim, n))
            .collect()
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ")")
    }
}

/// `[h_0(x), …, h_n(x)]` by the normalized three-term recurrence
/// `h_{k+1} = x √(2/(k+1)) h_k − √(k/(k+1)) h_{k−1}`.
pub fn hermite_1d_all(n: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n == 0 {
        return out;
    }
    out.push(std::f64::consts::SQRT_2 * x);
    for k in 1..n {
        let kf = k as f64;
        let next = x * (2.0 / (kf + 1.0)).sqrt() * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}

/// `h_n(x)` for a single order.
pub fn hermite_1d(n: u32, x: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..n {
        let kf = k as f64;
        let next = x * (2.0 / (kf + 1.0)).sqrt() * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Evaluates `h_ν(x)`.
pub fn hermite_eval(nu: &MultiIndex, x: &[f64]) -> Result<f64> {
    if nu.dim() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: nu.dim(),
            found: x.len(),
        });
    }
    Ok(nu
        .entries()
        .iter()
        .zip(x)
        .map(|(&n, &xi)| hermite_1d(n, xi))
        .product())
}

/// Nodes and positive weights for integration against `γ_d`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    dim: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    degree: Option<usize>,
}

impl QuadratureRule {
    fn tensor(dim: usize, x: &[f64], w: &[f64], degree: Option<usize>) -> Self {
        let n = x.len();
        let total = n.pow(dim as u32);
        let mut nodes = Vec::with_capacity(total * dim);
        let mut weights = Vec::with_capacity(total);
        let mut idx = vec![0usize; dim];
        for _ in 0..total {
            let mut weight = 1.0;
            for &i in &idx {
                nodes.push(x[i]);
                weight *= w[i];
            }
            weights.push(weight);
            for slot in idx.iter_mut().rev() {
                *slot += 1;
                if *slot < n {
                    break;
                }
                *slot = 0;
            }
        }
        QuadratureRule {
            dim,
            nodes,
            weights,
            degree,
        }
    }

    /// Composite Gauss-Legendre rule against `γ_d` on `[-half_width,
    /// half_width]^d`, with `panels_per_side` equal panels on each side of 0
    /// and `points` Legendre nodes per panel.
    ///
    /// Suited to integrands with kinks on the coordinate hyperplanes, such as
    /// `|f|^{p(x)}` with a radial exponent.
    pub fn panels(
        dim: usize,
        half_width: f64,
        panels_per_side: usize,
        points: usize,
    ) -> Result<Self> {
        if dim == 0 || panels_per_side == 0 || points == 0 || half_width <= 0.0 {
            return Err(Error::precondition(
                "panel rule needs positive dimension, width, panel and point counts",
            ));
        }
        let (gx, gw) = gauss_legendre(points);
        let h = half_width / panels_per_side as f64;
        let norm = std::f64::consts::PI.sqrt().recip();
        let mut x = Vec::new();
        let mut w = Vec::new();
        for p in 0..2 * panels_per_side {
            let a = -half_width + p as f64 * h;
            for (&gxi, &gwi) in gx.iter().zip(&gw) {
                let xi = a + 0.5 * h * (gxi + 1.0);
                x.push(xi);
                w.push(0.5 * h * gwi * norm * (-xi * xi).exp());
            }
        }
        Ok(Self::tensor(dim, &x, &w, None))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Per-axis polynomial degree integrated exactly, when known.
    pub fn degree(&self) -> Option<usize> {
        self.degree
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i * self.dim..(i + 1) * self.dim]
    }

    pub fn nodes(&self) -> impl Iterator<Item = &[f64]> {
        self.nodes.chunks_exact(self.dim)
    }

    /// Flat node storage, `dim` coordinates per node.
    pub fn flat_nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<F: Fn(&[f64]) -> f64>(&self, f: F) -> f64 {
        self.nodes().zip(&self.weights).map(|(x, w)| w * f(x)).sum()
    }
}

fn gauss_hermite_1d(n: usize) -> (Vec<f64>, Vec<f64>) {
    if n == 1 {
        return (vec![0.0], vec![1.0]);
    }
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let off = (k as f64 / 2.0).sqrt();
        jacobi[(k - 1, k)] = off;
        jacobi[(k, k - 1)] = off;
    }
    let eig = SymmetricEigen::new(jacobi);
    let mut x: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    x.sort_by(f64::total_cmp);
    // Newton polish on h_n, with h_n' = √(2n) h_{n−1}.
    let scale = (2.0 * n as f64).sqrt();
    for xi in x.iter_mut() {
        for _ in 0..6 {
            let h = hermite_1d_all(n, *xi);
            let step = h[n] / (scale * h[n - 1]);
            *xi -= step;
            if step.abs() <= 1e-16 * xi.abs().max(1.0) {
                break;
            }
        }
    }
    // Enforce exact symmetry.
    for i in 0..n / 2 {
        let m = 0.5 * (x[n - 1 - i] - x[i]);
        x[i] = -m;
        x[n - 1 - i] = m;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    // Christoffel numbers of the orthonormal family.
    let w: Vec<f64> = x
        .iter()
        .map(|&xi| {
            let h = hermite_1d_all(n - 1, xi);
            1.0 / h.iter().map(|v| v * v).sum::<f64>()
        })
        .collect();
    (x, w)
}

/// Tensor-product Gauss-Hermite rule for `γ_d` with `n` nodes per axis,
/// exact for per-axis polynomial degree `≤ 2n − 1`.
pub fn gauss_rule(dim: usize, n: usize) -> Result<QuadratureRule> {
    if dim == 0 || n == 0 {
        return Err(Error::precondition(
            "gauss rule needs positive dimension and node count",
        ));
    }
    if n > MAX_RULE_POINTS {
        return Err(Error::RuleTooLarge {
            points: n,
            cap: MAX_RULE_POINTS,
        });
    }
    let (x, w) = gauss_hermite_1d(n);
    Ok(QuadratureRule::tensor(dim, &x, &w, Some(2 * n - 1)))
}

/// `⟨g, h_ν⟩_{γ_d}` by quadrature.
pub fn fourier_coefficient<F: Fn(&[f64]) -> f64>(
    g: F,
    nu: &MultiIndex,
    rule: &QuadratureRule,
) -> Result<f64> {
    if nu.dim() != rule.dim() {
        return Err(Error::DimensionMismatch {
            expected: rule.dim(),
            found: nu.dim(),
        });
    }
    Ok(rule.integrate(|x| {
        let h: f64 = nu
            .entries()
            .iter()
            .zip(x)
            .map(|(&n, &xi)| hermite_1d(n, xi))
            .product();
        g(x) * h
    }))
}

/// A finite Hermite series `Σ f̂(ν) h_ν` on ℝ^d.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HermiteExpansion {
    dim: usize,
    #[serde(with = "coeff_list")]
    coeffs: BTreeMap<MultiIndex, f64>,
}

mod coeff_list {
    use super::MultiIndex;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::collections::BTreeMap;

    #[derive(Serialize, Deserialize)]
    struct Term {
        index: MultiIndex,
        value: f64,
    }

    pub fn serialize<S: Serializer>(
        map: &BTreeMap<MultiIndex, f64>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        let terms: Vec<Term> = map
            .iter()
            .map(|(k, v)| Term {
                index: k.clone(),
                value: *v,
            })
            .collect();
        terms.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<MultiIndex, f64>, D::Error> {
        let terms = Vec::<Term>::deserialize(d)?;
        let mut map = BTreeMap::new();
        for t in terms {
            *map.entry(t.index).or_insert(0.0) += t.value;
        }
        Ok(map)
    }
}

impl HermiteExpansion {
    pub fn zero(dim: usize) -> Self {
        HermiteExpansion {
            dim,
            coeffs: BTreeMap::new(),
        }
    }

    /// The single basis function `h_ν`.
    pub fn basis(nu: MultiIndex) -> Self {
        let dim = nu.dim();
        let mut coeffs = BTreeMap::new();
        coeffs.insert(nu, 1.0);
        HermiteExpansion { dim, coeffs }
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        let mut e = Self::zero(dim);
        e.set(MultiIndex::zero(dim), c);
        e
    }

    /// Builds an expansion from `(ν, coefficient)` pairs; repeated indices are
    /// summed.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, f64)>,
    {
        let mut e = Self::zero(dim);
        for (nu, c) in terms {
            if nu.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: nu.dim(),
                });
            }
            *e.coeffs.entry(nu).or_insert(0.0) += c;
        }
        Ok(e)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Sets a coefficient. Panics if `nu` has the wrong dimension.
    pub fn set(&mut self, nu: MultiIndex, c: f64) {
        assert_eq!(nu.dim(), self.dim, "multi-index dimension");
        self.coeffs.insert(nu, c);
    }

    pub fn coefficient(&self, nu: &MultiIndex) -> f64 {
        self.coeffs.get(nu).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, f64)> {
        self.coeffs.iter().map(|(k, v)| (k, *v))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest `|ν|` with a nonzero coefficient (0 for the zero expansion).
    pub fn max_order(&self) -> u32 {
        self.coeffs
            .iter()
            .filter(|(_, c)| **c != 0.0)
            .map(|(k, _)| k.order())
            .max()
            .unwrap_or(0)
    }

    /// True when every coefficient is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|&c| c == 0.0)
    }

    /// `L²(γ_d)` norm, i.e. the Euclidean norm of the coefficients.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map_coefficients(|_, v| c * v)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut out = self.clone();
        for (k, v) in &other.coeffs {
            *out.coeffs.entry(k.clone()).or_insert(0.0) += v;
        }
        Ok(out)
    }

    pub fn map_coefficients<F: Fn(&MultiIndex, f64) -> f64>(&self, f: F) -> Self {
        HermiteExpansion {
            dim: self.dim,
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, v)| (k.clone(), f(k, *v)))
                .collect(),
        }
    }

    /// Multiplies each coefficient by `multiplier(|ν|)`; the form taken by
    /// every operator that is a function of the number operator.
    pub fn apply_multiplier<F: Fn(u32) -> f64>(&self, multiplier: F) -> Self {
        self.map_coefficients(|k, v| v * multiplier(k.order()))
    }

    /// Largest absolute coefficient difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut keys: Vec<&MultiIndex> = self.coeffs.keys().chain(other.coeffs.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .map(|k| (self.coefficient(k) - other.coefficient(k)).abs())
            .fold(0.0, f64::max)
    }

    /// Evaluates the series at `x`.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        if self.coeffs.is_empty() {
            return Ok(0.0);
        }
        let tables = self.axis_tables(x);
        Ok(self
            .coeffs
            .iter()
            .map(|(nu, c)| {
                c * nu
                    .entries()
                    .iter()
                    .enumerate()
                    .map(|(axis, &n)| tables[axis][n as usize])
                    .product::<f64>()
            })
            .sum())
    }

    fn axis_tables(&self, x: &[f64]) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|axis| {
                let top = self
                    .coeffs
                    .keys()
                    .map(|k| k.entries()[axis])
                    .max()
                    .unwrap_or(0);
                hermite_1d_all(top as usize, x[axis])
            })
            .collect()
    }

    /// Values at every node of `rule`.
    pub fn sample(&self, rule: &QuadratureRule) -> Result<Vec<f64>> {
        SampledBasis::new(self.coeffs.keys().cloned().collect(), rule)?.combine(self)
    }
}

/// `J_n f = Σ_{|ν| = n} f̂(ν) h_ν`.
pub fn chaos_projection(f: &HermiteExpansion, n: u32) -> HermiteExpansion {
    HermiteExpansion {
        dim: f.dim,
        coeffs: f
            .coeffs
            .iter()
            .filter(|(k, _)| k.order() == n)
            .map(|(k, v)| (k.clone(), *v))
            .collect(),
    }
}

/// Pointwise value of an expansion; see [`HermiteExpansion::eval`].
pub fn expansion_eval(f: &HermiteExpansion, x: &[f64]) -> Result<f64> {
    f.eval(x)
}

/// Basis functions `h_ν` tabulated at the nodes of a rule, for repeated
/// evaluation of expansions sharing the same index set.
#[derive(Debug, Clone)]
pub struct SampledBasis {
    indices: Vec<MultiIndex>,
    // values[j][i] = h_{indices[j]}(node i)
    values: Vec<Vec<f64>>,
    nodes: usize,
}

impl SampledBasis {
    pub fn new(indices: Vec<MultiIndex>, rule: &QuadratureRule) -> Result<Self> {
        let dim = rule.dim();
        if let Some(bad) = indices.iter().find(|k| k.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        let top = indices
            .iter()
            .flat_map(|k| k.entries().iter().copied())
            .max()
            .unwrap_or(0) as usize;
        let tables: Vec<Vec<Vec<f64>>> = rule
            .nodes()
            .map(|x| x.iter().map(|&xi| hermite_1d_all(top, xi)).collect())
            .collect();
        let values = indices
            .iter()
            .map(|nu| {
                tables
                    .iter()
                    .map(|t| {
                        nu.entries()
                            .iter()
                            .enumerate()
                            .map(|(axis, &n)| t[axis][n as usize])
                            .product()
                    })
                    .collect()
            })
            .collect();
        Ok(SampledBasis {
            indices,
            values,
            nodes: rule.len(),
        })
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    /// `Σ_j c_j h_{ν_j}` at every node, with coefficients in index order.
    pub fn combine_coefficients(&self, coeffs: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.nodes];
        for (row, &c) in self.values.iter().zip(coeffs) {
            if c == 0.0 {
                continue;
            }
            for (o, v) in out.iter_mut().zip(row) {
                *o += c * v;
            }
        }
        out
    }

    pub fn combine(&self, f: &HermiteExpansion) -> Result<Vec<f64>> {
        let coeffs: Vec<f64> = self.indices.iter().map(|k| f.coefficient(k)).collect();
        Ok(self.combine_coefficients(&coeffs))
    }
}
