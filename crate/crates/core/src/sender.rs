//! The sender's side of the game: target selection, persuasion and
//! manipulation checks, and signal construction under both information
//! frames.
//!
//! Under the partial frame the sender transmits only per-choice means, chosen
//! to minimize the squared gap between the receiver's blended means and the
//! sender's own means. Under the complete frame she transmits a full
//! distribution, chosen to minimize the divergence from her belief to the
//! receiver's blended posterior. Both designs are exact where a closed form
//! exists and fall back to the simplex solver otherwise.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optim::{minimize_on_simplex, project_to_simplex, BlendedKl};
use crate::receiver::{blended_means, DecisionRule, ReceiverState};
use crate::scalar::Real;
use crate::simplex::{argmax, BeliefSet, ProbVector};

/// Coordinatewise tolerance for calling a transmitted mean truthful.
const MANIPULATION_TOL: f64 = 1e-9;
/// Iteration cap for the complete-frame solver.
const DESIGN_MAX_ITER: usize = 10_000;

/// Which payload the sender transmits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    /// Only per-choice expected rewards.
    Partial,
    /// The full belief distribution.
    Complete,
}

impl std::fmt::Display for Frame {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Frame::Partial => write!(f, "partial"),
            Frame::Complete => write!(f, "complete"),
        }
    }
}

/// What the sender puts on the wire.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Signal<F> {
    /// Partial frame: one mean per choice.
    Means(Vec<F>),
    /// Complete frame: a full belief distribution.
    Distribution(BeliefSet<F>),
}

impl<F: Real> Signal<F> {
    pub fn from_means(means: Vec<F>) -> Self {
        Self::Means(means)
    }

    pub fn from_distribution(belief: BeliefSet<F>) -> Self {
        Self::Distribution(belief)
    }

    pub fn frame(&self) -> Frame {
        match self {
            Self::Means(_) => Frame::Partial,
            Self::Distribution(_) => Frame::Complete,
        }
    }

    pub fn n_choices(&self) -> usize {
        match self {
            Self::Means(m) => m.len(),
            Self::Distribution(b) => b.n_choices(),
        }
    }

    /// Per-choice means: transmitted directly in the partial frame, computed
    /// from the transmitted distribution in the complete frame.
    pub fn means(&self) -> Vec<F> {
        match self {
            Self::Means(m) => m.clone(),
            Self::Distribution(b) => b.expectations(),
        }
    }

    /// The transmitted distribution, when the frame carries one.
    pub fn distribution(&self) -> Option<&BeliefSet<F>> {
        match self {
            Self::Means(_) => None,
            Self::Distribution(b) => Some(b),
        }
    }
}

/// Result of a signal-design run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SenderResult<F> {
    pub signal: Signal<F>,
    /// The choice the sender wants adopted (lowest-index argmax of her means).
    pub target_choice: usize,
    /// True when the transmitted means differ from the sender's true means.
    pub manipulated: bool,
    /// Achieved squared loss (partial frame) or divergence (complete frame).
    pub objective_value: F,
    pub solver_iterations: usize,
    /// Set when trust is zero and the objective does not depend on the
    /// signal; the truthful signal is returned in that case.
    pub degenerate: bool,
}

/// Lowest-index argmax of the sender's expected rewards.
pub fn target_choice<F: Real>(p: &BeliefSet<F>) -> usize {
    argmax(&p.expectations())
}

/// Whether the signal makes the receiver's blended means peak at `n_star`.
pub fn persuasion_condition_holds<F: Real>(
    signal: &Signal<F>,
    state: &ReceiverState<F>,
    n_star: usize,
) -> Result<bool> {
    let y = blended_means(signal, state)?;
    if n_star >= y.len() {
        return Err(Error::ChoiceOutOfRange {
            index: n_star,
            n_choices: y.len(),
        });
    }
    Ok(y.iter().all(|&yn| y[n_star] >= yn))
}

/// Whether a truthful signal would fail to steer the receiver to the
/// sender's target, so that any persuasive signal must distort the means.
///
/// Always false at the trust extremes: at full trust the truthful means
/// already win, and at zero trust no signal has any influence.
pub fn needs_manipulation<F: Real>(p: &BeliefSet<F>, state: &ReceiverState<F>) -> Result<bool> {
    ensure_compatible(p, state.prior())?;
    let alpha = state.alpha();
    if alpha == F::zero() {
        return Ok(false);
    }
    let p_means = p.expectations();
    let q_means = state.prior().expectations();
    let n_star = argmax(&p_means);
    let truthful: Vec<F> = p_means
        .iter()
        .zip(&q_means)
        .map(|(&pm, &qm)| alpha * pm + (F::one() - alpha) * qm)
        .collect();
    Ok(truthful.iter().any(|&yn| truthful[n_star] < yn))
}

/// Sender's expected utility under her own belief: `Σ_n ψ_n · 𝔼_p(x_n)`.
pub fn expected_utility_alice<F: Real>(psi: &DecisionRule<F>, p: &BeliefSet<F>) -> Result<F> {
    psi.expected_value(&p.expectations())
}

/// Partial-frame design: transmitted means minimizing the squared gap
/// between the receiver's blended means and the sender's means.
///
/// The unconstrained optimum is `(𝔼_p − (1−α)𝔼_q)/α` per choice; grid mode
/// clamps it into the reward bounds, categorical mode projects the implied
/// weight vector back onto the simplex.
pub fn design_partial<F: Real>(p: &BeliefSet<F>, state: &ReceiverState<F>) -> Result<SenderResult<F>> {
    ensure_compatible(p, state.prior())?;
    let alpha = state.alpha();
    let p_means = p.expectations();
    let q_means = state.prior().expectations();
    let n_star = argmax(&p_means);

    if alpha == F::zero() {
        // The loss does not depend on the transmitted means; send the truth.
        let loss = squared_loss(&p_means, &p_means, &q_means, alpha);
        return Ok(SenderResult {
            signal: Signal::from_means(p_means),
            target_choice: n_star,
            manipulated: false,
            objective_value: loss,
            solver_iterations: 0,
            degenerate: true,
        });
    }

    let raw: Vec<F> = p_means
        .iter()
        .zip(&q_means)
        .map(|(&pm, &qm)| (pm - (F::one() - alpha) * qm) / alpha)
        .collect();

    let means = match p {
        BeliefSet::GridMarginal { grid, .. } => raw
            .iter()
            .map(|&m| m.max(grid.min()).min(grid.max()))
            .collect::<Vec<F>>(),
        BeliefSet::Categorical { scale, .. } => {
            let implied: Vec<F> = raw.iter().map(|&m| m / *scale).collect();
            let projected = project_to_simplex(&implied)?;
            projected.weights().iter().map(|&w| w * *scale).collect()
        }
    };

    let loss = squared_loss(&means, &p_means, &q_means, alpha);
    let manipulated = is_manipulated(&means, &p_means);
    Ok(SenderResult {
        signal: Signal::from_means(means),
        target_choice: n_star,
        manipulated,
        objective_value: loss,
        solver_iterations: 0,
        degenerate: false,
    })
}

/// Complete-frame design: a transmitted distribution minimizing the
/// divergence from the sender's belief to the receiver's blended posterior,
/// solved independently per marginal.
///
/// When `(p − (1−α)q)/α` is componentwise nonnegative the optimum is exact
/// and no iteration runs; otherwise the simplex solver is used at tolerance
/// `tol` with the sender's belief as the starting point.
pub fn design_complete<F: Real>(
    p: &BeliefSet<F>,
    state: &ReceiverState<F>,
    tol: F,
) -> Result<SenderResult<F>> {
    ensure_compatible(p, state.prior())?;
    let alpha = state.alpha();
    let n_star = target_choice(p);

    if alpha == F::zero() {
        // The posterior equals the prior no matter what is sent.
        let objective = p.kl_divergence(state.prior())?;
        return Ok(SenderResult {
            signal: Signal::from_distribution(p.clone()),
            target_choice: n_star,
            manipulated: false,
            objective_value: objective,
            solver_iterations: 0,
            degenerate: true,
        });
    }

    let (signal_belief, objective, iterations) = match (p, state.prior()) {
        (
            BeliefSet::GridMarginal { grid, marginals },
            BeliefSet::GridMarginal {
                marginals: prior_marginals,
                ..
            },
        ) => {
            let mut designed = Vec::with_capacity(marginals.len());
            let mut total = F::zero();
            let mut iterations = 0;
            for (pn, qn) in marginals.iter().zip(prior_marginals) {
                let (pi, kl, it) = design_marginal(pn, qn, alpha, tol)?;
                designed.push(pi);
                total = total + kl;
                iterations += it;
            }
            (
                BeliefSet::grid_marginal(grid.clone(), designed)?,
                total,
                iterations,
            )
        }
        (
            BeliefSet::Categorical { weights, scale },
            BeliefSet::Categorical {
                weights: prior_weights,
                ..
            },
        ) => {
            let (pi, kl, iterations) = design_marginal(weights, prior_weights, alpha, tol)?;
            (BeliefSet::categorical(pi, *scale)?, kl, iterations)
        }
        _ => unreachable!("ensure_compatible enforces matching modes"),
    };

    let manipulated = is_manipulated(&signal_belief.expectations(), &p.expectations());
    Ok(SenderResult {
        signal: Signal::from_distribution(signal_belief),
        target_choice: n_star,
        manipulated,
        objective_value: objective,
        solver_iterations: iterations,
        degenerate: false,
    })
}

/// Designs one marginal: exact inversion when feasible, solver otherwise.
/// Returns the signal marginal, its achieved divergence, and iterations.
fn design_marginal<F: Real>(
    p: &ProbVector<F>,
    q: &ProbVector<F>,
    alpha: F,
    tol: F,
) -> Result<(ProbVector<F>, F, usize)> {
    let inverted: Vec<F> = p
        .weights()
        .iter()
        .zip(q.weights())
        .map(|(&pk, &qk)| (pk - (F::one() - alpha) * qk) / alpha)
        .collect();
    if inverted.iter().all(|&v| v >= F::zero()) {
        let pi = ProbVector::new(inverted)?;
        let posterior = pi.blend(q, alpha)?;
        let kl = p.kl_divergence(&posterior)?;
        return Ok((pi, kl, 0));
    }
    let objective = BlendedKl {
        target: p.weights(),
        prior: q.weights(),
        alpha,
    };
    // Warm start: the clipped inversion is the exact optimum whenever it is
    // feasible and sits on a nearly correct face otherwise; mixing in a
    // sliver of the target keeps every coordinate of p's support positive so
    // the multiplicative updates can still adjust the support.
    let clipped: Vec<F> = inverted.iter().map(|&v| v.max(F::zero())).collect();
    let mass: F = clipped.iter().copied().sum();
    let sliver = F::of(1e-3);
    let init = if mass > F::zero() {
        let mixed: Vec<F> = clipped
            .iter()
            .zip(p.weights())
            .map(|(&c, &pk)| (F::one() - sliver) * c / mass + sliver * pk)
            .collect();
        ProbVector::new(mixed)?
    } else {
        p.clone()
    };
    let report = minimize_on_simplex(&objective, &init, tol, DESIGN_MAX_ITER)?;
    Ok((report.minimizer, report.objective, report.iterations))
}

fn squared_loss<F: Real>(means: &[F], p_means: &[F], q_means: &[F], alpha: F) -> F {
    means
        .iter()
        .zip(p_means.iter().zip(q_means))
        .map(|(&m, (&pm, &qm))| {
            let gap = alpha * m + (F::one() - alpha) * qm - pm;
            gap * gap
        })
        .sum()
}

fn is_manipulated<F: Real>(transmitted: &[F], truthful: &[F]) -> bool {
    let tol = F::of(MANIPULATION_TOL);
    transmitted
        .iter()
        .zip(truthful)
        .any(|(&m, &t)| (m - t).abs() > tol)
}

fn ensure_compatible<F: Real>(p: &BeliefSet<F>, q: &BeliefSet<F>) -> Result<()> {
    if p.mode() != q.mode() {
        return Err(Error::ShapeMismatch(
            "sender and receiver beliefs use different modes".into(),
        ));
    }
    if p.n_choices() != q.n_choices() {
        return Err(Error::ShapeMismatch(format!(
            "sender belief covers {} choices but the prior covers {}",
            p.n_choices(),
            q.n_choices()
        )));
    }
    if let (
        BeliefSet::GridMarginal { grid, .. },
        BeliefSet::GridMarginal {
            grid: prior_grid, ..
        },
    ) = (p, q)
    {
        if grid != prior_grid {
            return Err(Error::ShapeMismatch(
                "sender and receiver beliefs use different reward grids".into(),
            ));
        }
    }
    Ok(())
}
