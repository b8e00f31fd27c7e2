//! Finite probability distributions over reward grids and choice sets.
//!
//! Everything the two agents exchange is built from these pieces: a
//! [`RewardGrid`] fixes the discretized reward levels, a [`ProbVector`] is a
//! point on the probability simplex, and a [`BeliefSet`] holds one marginal
//! reward distribution per choice (grid mode) or a single categorical vector
//! over the choices (categorical mode). The receiver's posterior is the
//! convex blend of two belief sets, weighted by trust.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Default floor applied before normalizing raw perceived-reward vectors.
/// Keeps every weight strictly positive, which KL-based objectives rely on.
pub const DEFAULT_NORMALIZE_FLOOR: f64 = 1e-6;

/// Ordered reward levels shared by all grid-mode marginals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RewardGrid<F> {
    values: Vec<F>,
    min: F,
    max: F,
}

impl<F: Real> RewardGrid<F> {
    /// Builds a grid from explicit levels, validating that they are strictly
    /// increasing and stay within `[min, max]`.
    pub fn new(values: Vec<F>, min: F, max: F) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::Domain(format!(
                "reward grid needs at least 2 levels, got {}",
                values.len()
            )));
        }
        if !(min < max) {
            return Err(Error::Domain(format!(
                "reward bounds must satisfy min < max, got [{min}, {max}]"
            )));
        }
        for pair in values.windows(2) {
            if !(pair[0] < pair[1]) {
                return Err(Error::Domain(
                    "reward grid values must be strictly increasing".into(),
                ));
            }
        }
        let lo = values[0];
        let hi = values[values.len() - 1];
        if lo < min || hi > max {
            return Err(Error::OutOfRange {
                name: "reward grid value",
                value: if lo < min {
                    lo.to_f64_lossy()
                } else {
                    hi.to_f64_lossy()
                },
                min: min.to_f64_lossy(),
                max: max.to_f64_lossy(),
            });
        }
        Ok(Self { values, min, max })
    }

    /// Uniformly spaced grid of `bins` levels spanning `[min, max]`.
    pub fn uniform(bins: usize, min: F, max: F) -> Result<Self> {
        if bins < 2 {
            return Err(Error::Domain(format!(
                "reward grid needs at least 2 bins, got {bins}"
            )));
        }
        let denom = F::from_usize(bins - 1).expect("bin count fits in scalar");
        // Multiply before dividing so that e.g. level 70 of 101 bins over
        // [0, 10] comes out as exactly 7.0.
        let values = (0..bins)
            .map(|k| {
                let k = F::from_usize(k).expect("bin index fits in scalar");
                min + k * (max - min) / denom
            })
            .collect();
        Self::new(values, min, max)
    }

    /// Default grid: 101 levels over `[0, 10]`.
    pub fn default_grid() -> Self {
        Self::uniform(101, F::zero(), F::of(10.0)).expect("default grid is valid")
    }

    pub fn values(&self) -> &[F] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn min(&self) -> F {
        self.min
    }

    pub fn max(&self) -> F {
        self.max
    }

    /// Index of the grid level closest to `x`.
    pub fn nearest_index(&self, x: F) -> usize {
        let mut best = 0;
        let mut best_dist = (self.values[0] - x).abs();
        for (k, &v) in self.values.iter().enumerate().skip(1) {
            let d = (v - x).abs();
            if d < best_dist {
                best = k;
                best_dist = d;
            }
        }
        best
    }
}

/// Nonnegative weights summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbVector<F> {
    weights: Vec<F>,
}

impl<F: Real> ProbVector<F> {
    /// Validates and wraps a weight vector.
    pub fn new(weights: Vec<F>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Empty("probability vector"));
        }
        for (k, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w < F::zero() {
                return Err(Error::InvalidProbability(format!(
                    "weight[{k}] = {w} is negative or non-finite"
                )));
            }
        }
        let sum: F = weights.iter().copied().sum();
        if (sum - F::one()).abs() > F::SUM_TOL {
            return Err(Error::InvalidProbability(format!(
                "weights sum to {sum}, expected 1"
            )));
        }
        Ok(Self { weights })
    }

    /// Uniform distribution over `k` outcomes.
    pub fn uniform(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Empty("probability vector"));
        }
        let w = F::one() / F::from_usize(k).expect("outcome count fits in scalar");
        Ok(Self {
            weights: vec![w; k],
        })
    }

    /// All mass on outcome `index`.
    pub fn point_mass(k: usize, index: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Empty("probability vector"));
        }
        if index >= k {
            return Err(Error::ChoiceOutOfRange {
                index,
                n_choices: k,
            });
        }
        let mut weights = vec![F::zero(); k];
        weights[index] = F::one();
        Ok(Self { weights })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[F] {
        &self.weights
    }

    pub fn get(&self, k: usize) -> F {
        self.weights[k]
    }

    /// Expectation of `values` under this distribution.
    pub fn dot(&self, values: &[F]) -> Result<F> {
        if values.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: values.len(),
            });
        }
        Ok(self
            .weights
            .iter()
            .zip(values)
            .map(|(&w, &v)| w * v)
            .sum())
    }

    /// Componentwise convex combination `alpha·self + (1−alpha)·other`.
    pub fn blend(&self, other: &Self, alpha: F) -> Result<Self> {
        if other.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        check_unit_interval("alpha", alpha)?;
        let weights = self
            .weights
            .iter()
            .zip(&other.weights)
            .map(|(&a, &b)| alpha * a + (F::one() - alpha) * b)
            .collect();
        Ok(Self { weights })
    }

    /// Relative entropy `Σ_k self_k · ln(self_k / other_k)`.
    ///
    /// Follows the usual conventions: terms with `self_k = 0` contribute
    /// nothing, and any `self_k > 0` facing `other_k = 0` makes the
    /// divergence infinite.
    pub fn kl_divergence(&self, other: &Self) -> Result<F> {
        if other.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        let mut total = F::zero();
        for (&a, &b) in self.weights.iter().zip(&other.weights) {
            if a > F::zero() {
                if b > F::zero() {
                    total = total + a * (a / b).ln();
                } else {
                    return Ok(F::infinity());
                }
            }
        }
        Ok(total)
    }

    /// Lowest index attaining the maximum weight.
    pub fn argmax(&self) -> usize {
        argmax(&self.weights)
    }
}

/// Lowest index of the maximum entry. `values` must be nonempty.
pub(crate) fn argmax<F: Real>(values: &[F]) -> usize {
    let mut best = 0;
    for (k, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = k;
        }
    }
    best
}

pub(crate) fn check_unit_interval<F: Real>(name: &'static str, value: F) -> Result<()> {
    if value < F::zero() || value > F::one() || !value.is_finite() {
        return Err(Error::OutOfRange {
            name,
            value: value.to_f64_lossy(),
            min: 0.0,
            max: 1.0,
        });
    }
    Ok(())
}

/// Clamps entries below at `floor`, then rescales to unit mass.
///
/// With the default floor this is the construction that turns a raw
/// perceived-reward vector into a categorical belief; a floor of zero is
/// allowed as long as some entry stays positive.
pub fn normalize<F: Real>(raw: &[F], floor: F) -> Result<ProbVector<F>> {
    if raw.is_empty() {
        return Err(Error::Empty("vector to normalize"));
    }
    if floor < F::zero() || !floor.is_finite() {
        return Err(Error::Domain(format!("floor must be >= 0, got {floor}")));
    }
    let clamped: Vec<F> = raw
        .iter()
        .map(|&x| if x.is_finite() { x.max(floor) } else { floor })
        .collect();
    let sum: F = clamped.iter().copied().sum();
    if !(sum > F::zero()) {
        return Err(Error::ZeroMass);
    }
    let weights = clamped.into_iter().map(|x| x / sum).collect();
    ProbVector::new(weights)
}

/// Which representation a belief set uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BeliefMode {
    /// One marginal reward distribution per choice over a shared grid.
    GridMarginal,
    /// A single distribution over the choices themselves.
    Categorical,
}

impl std::fmt::Display for BeliefMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BeliefMode::GridMarginal => write!(f, "grid"),
            BeliefMode::Categorical => write!(f, "categorical"),
        }
    }
}

/// Per-choice reward beliefs.
///
/// Grid mode carries one marginal distribution over the reward grid per
/// choice. Categorical mode carries a single distribution over the choices;
/// its per-choice "expectation" is defined as `weight · scale` so the values
/// live on the same reward range as grid-mode expectations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum BeliefSet<F> {
    GridMarginal {
        grid: RewardGrid<F>,
        marginals: Vec<ProbVector<F>>,
    },
    Categorical {
        weights: ProbVector<F>,
        scale: F,
    },
}

impl<F: Real> BeliefSet<F> {
    /// Grid-mode belief from per-choice marginals over `grid`.
    pub fn grid_marginal(grid: RewardGrid<F>, marginals: Vec<ProbVector<F>>) -> Result<Self> {
        if marginals.len() < 2 {
            return Err(Error::Domain(format!(
                "belief set needs at least 2 choices, got {}",
                marginals.len()
            )));
        }
        for (n, m) in marginals.iter().enumerate() {
            if m.len() != grid.len() {
                return Err(Error::ShapeMismatch(format!(
                    "marginal {n} has {} weights but the grid has {} levels",
                    m.len(),
                    grid.len()
                )));
            }
        }
        Ok(Self::GridMarginal { grid, marginals })
    }

    /// Categorical belief over `weights.len()` choices.
    pub fn categorical(weights: ProbVector<F>, scale: F) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::Domain(format!(
                "belief set needs at least 2 choices, got {}",
                weights.len()
            )));
        }
        if !(scale > F::zero()) || !scale.is_finite() {
            return Err(Error::Domain(format!("scale must be > 0, got {scale}")));
        }
        Ok(Self::Categorical { weights, scale })
    }

    pub fn mode(&self) -> BeliefMode {
        match self {
            Self::GridMarginal { .. } => BeliefMode::GridMarginal,
            Self::Categorical { .. } => BeliefMode::Categorical,
        }
    }

    /// Number of choices covered by this belief.
    pub fn n_choices(&self) -> usize {
        match self {
            Self::GridMarginal { marginals, .. } => marginals.len(),
            Self::Categorical { weights, .. } => weights.len(),
        }
    }

    /// Expected reward of choice `n` (0-based).
    pub fn expectation(&self, n: usize) -> Result<F> {
        let count = self.n_choices();
        if n >= count {
            return Err(Error::ChoiceOutOfRange {
                index: n,
                n_choices: count,
            });
        }
        match self {
            Self::GridMarginal { grid, marginals } => marginals[n].dot(grid.values()),
            Self::Categorical { weights, scale } => Ok(weights.get(n) * *scale),
        }
    }

    /// Expected reward of every choice.
    pub fn expectations(&self) -> Vec<F> {
        (0..self.n_choices())
            .map(|n| self.expectation(n).expect("index in range"))
            .collect()
    }

    /// Convex blend `alpha·self + (1−alpha)·other`, per marginal.
    ///
    /// Both beliefs must share mode, grid (or scale), and choice count.
    pub fn blend(&self, other: &Self, alpha: F) -> Result<Self> {
        check_unit_interval("alpha", alpha)?;
        match (self, other) {
            (
                Self::GridMarginal { grid, marginals },
                Self::GridMarginal {
                    grid: other_grid,
                    marginals: other_marginals,
                },
            ) => {
                if grid != other_grid {
                    return Err(Error::ShapeMismatch(
                        "belief sets use different reward grids".into(),
                    ));
                }
                if marginals.len() != other_marginals.len() {
                    return Err(Error::ShapeMismatch(format!(
                        "belief sets cover {} vs {} choices",
                        marginals.len(),
                        other_marginals.len()
                    )));
                }
                let blended = marginals
                    .iter()
                    .zip(other_marginals)
                    .map(|(a, b)| a.blend(b, alpha))
                    .collect::<Result<Vec<_>>>()?;
                Self::grid_marginal(grid.clone(), blended)
            }
            (
                Self::Categorical { weights, scale },
                Self::Categorical {
                    weights: other_weights,
                    scale: other_scale,
                },
            ) => {
                if (*scale - *other_scale).abs() > F::SUM_TOL {
                    return Err(Error::ShapeMismatch(format!(
                        "categorical beliefs use different scales: {scale} vs {other_scale}"
                    )));
                }
                Self::categorical(weights.blend(other_weights, alpha)?, *scale)
            }
            _ => Err(Error::ShapeMismatch(
                "belief sets use different modes".into(),
            )),
        }
    }

    /// Grid-mode marginal for choice `n`.
    pub fn marginal(&self, n: usize) -> Result<&ProbVector<F>> {
        match self {
            Self::GridMarginal { marginals, .. } => {
                marginals.get(n).ok_or(Error::ChoiceOutOfRange {
                    index: n,
                    n_choices: marginals.len(),
                })
            }
            Self::Categorical { .. } => Err(Error::Domain(
                "categorical beliefs have no per-choice marginals".into(),
            )),
        }
    }

    /// Sum of per-marginal divergences `KL(self_n ‖ other_n)` in grid mode,
    /// or the single categorical divergence. Beliefs factor per choice, so
    /// this equals the divergence between the joint product distributions.
    pub fn kl_divergence(&self, other: &Self) -> Result<F> {
        match (self, other) {
            (
                Self::GridMarginal { marginals, .. },
                Self::GridMarginal {
                    marginals: other_marginals,
                    ..
                },
            ) => {
                if marginals.len() != other_marginals.len() {
                    return Err(Error::ShapeMismatch(format!(
                        "belief sets cover {} vs {} choices",
                        marginals.len(),
                        other_marginals.len()
                    )));
                }
                let mut total = F::zero();
                for (a, b) in marginals.iter().zip(other_marginals) {
                    total = total + a.kl_divergence(b)?;
                }
                Ok(total)
            }
            (
                Self::Categorical { weights, .. },
                Self::Categorical {
                    weights: other_weights,
                    ..
                },
            ) => weights.kl_divergence(other_weights),
            _ => Err(Error::ShapeMismatch(
                "belief sets use different modes".into(),
            )),
        }
    }
}
