//! The receiver's side of the game: posterior means, best response, realized
//! utility, regret, and the trust update.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sender::Signal;
use crate::simplex::{argmax, check_unit_interval, BeliefSet, ProbVector};

/// How the receiver resolves ties among equally good choices.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieBreak {
    /// Deterministic: pick the lowest index. Keeps sweep output reproducible.
    #[default]
    LowestIndex,
    /// Randomize uniformly among the tied choices.
    UniformRandom,
}

/// The receiver's state: trust in the sender plus his own prior belief.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReceiverState<F> {
    alpha: F,
    prior: BeliefSet<F>,
    tie_break: TieBreak,
}

impl<F: Real> ReceiverState<F> {
    pub fn new(alpha: F, prior: BeliefSet<F>, tie_break: TieBreak) -> Result<Self> {
        check_unit_interval("alpha", alpha)?;
        Ok(Self {
            alpha,
            prior,
            tie_break,
        })
    }

    pub fn alpha(&self) -> F {
        self.alpha
    }

    pub fn prior(&self) -> &BeliefSet<F> {
        &self.prior
    }

    pub fn tie_break(&self) -> TieBreak {
        self.tie_break
    }
}

/// Probabilistic decision rule over the choices.
///
/// Best responses are always one-hot; general weight vectors are allowed so
/// mixed rules can be evaluated too.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionRule<F> {
    psi: ProbVector<F>,
}

impl<F: Real> DecisionRule<F> {
    pub fn from_weights(psi: ProbVector<F>) -> Self {
        Self { psi }
    }

    pub fn one_hot(n_choices: usize, choice: usize) -> Result<Self> {
        Ok(Self {
            psi: ProbVector::point_mass(n_choices, choice)?,
        })
    }

    pub fn weights(&self) -> &ProbVector<F> {
        &self.psi
    }

    pub fn n_choices(&self) -> usize {
        self.psi.len()
    }

    /// The selected choice, when the rule is one-hot.
    pub fn choice(&self) -> Option<usize> {
        let mut hot = None;
        for (n, &w) in self.psi.weights().iter().enumerate() {
            if w == F::one() {
                if hot.is_some() {
                    return None;
                }
                hot = Some(n);
            } else if w != F::zero() {
                return None;
            }
        }
        hot
    }

    /// Expected value of `values` under the rule: `Σ_n ψ_n · values_n`.
    pub fn expected_value(&self, values: &[F]) -> Result<F> {
        self.psi.dot(values)
    }
}

/// Record of the receiver's hindsight regret for one interaction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegretRecord<F> {
    /// `true_reward[prior_choice] − true_reward[signal_choice]`.
    pub r_b: F,
    /// What the receiver would have picked from his prior alone.
    pub prior_choice: usize,
    /// What he picked under the signal.
    pub signal_choice: usize,
}

/// Posterior expected reward per choice:
/// `y_n = α·(signal mean)_n + (1−α)·𝔼_prior(x_n)`.
///
/// A full-distribution signal contributes the means of the transmitted
/// distribution; a mean-vector signal contributes the transmitted means
/// directly.
pub fn blended_means<F: Real>(signal: &Signal<F>, state: &ReceiverState<F>) -> Result<Vec<F>> {
    let prior_means = state.prior().expectations();
    let signal_means = signal.means();
    if signal_means.len() != prior_means.len() {
        return Err(Error::ShapeMismatch(format!(
            "signal covers {} choices but the prior covers {}",
            signal_means.len(),
            prior_means.len()
        )));
    }
    let alpha = state.alpha();
    Ok(signal_means
        .iter()
        .zip(&prior_means)
        .map(|(&s, &q)| alpha * s + (F::one() - alpha) * q)
        .collect())
}

/// One-hot rule on the argmax of `y`, lowest index on ties.
pub fn best_response<F: Real>(y: &[F]) -> Result<DecisionRule<F>> {
    if y.is_empty() {
        return Err(Error::Empty("posterior means"));
    }
    DecisionRule::one_hot(y.len(), argmax(y))
}

/// Like [`best_response`], but ties are resolved per `tie_break`; the RNG is
/// only consulted for [`TieBreak::UniformRandom`].
pub fn best_response_with<F: Real, R: Rng + ?Sized>(
    y: &[F],
    tie_break: TieBreak,
    rng: &mut R,
) -> Result<DecisionRule<F>> {
    if y.is_empty() {
        return Err(Error::Empty("posterior means"));
    }
    match tie_break {
        TieBreak::LowestIndex => best_response(y),
        TieBreak::UniformRandom => {
            let best = y[argmax(y)];
            let tied: Vec<usize> = (0..y.len()).filter(|&n| y[n] == best).collect();
            let pick = tied[rng.random_range(0..tied.len())];
            DecisionRule::one_hot(y.len(), pick)
        }
    }
}

/// Receiver's expected utility under his posterior: `Σ_n ψ_n · 𝔼_post(x_n)`.
pub fn expected_utility_bob<F: Real>(
    psi: &DecisionRule<F>,
    posterior: &BeliefSet<F>,
) -> Result<F> {
    psi.expected_value(&posterior.expectations())
}

/// Hindsight regret once true rewards are revealed: the reward of the
/// prior-only choice minus the reward of the signal-influenced choice.
pub fn regret<F: Real>(
    true_rewards: &[F],
    state: &ReceiverState<F>,
    signal_choice: usize,
) -> Result<RegretRecord<F>> {
    let n = state.prior().n_choices();
    if true_rewards.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: true_rewards.len(),
        });
    }
    if signal_choice >= n {
        return Err(Error::ChoiceOutOfRange {
            index: signal_choice,
            n_choices: n,
        });
    }
    let prior_choice = argmax(&state.prior().expectations());
    Ok(RegretRecord {
        r_b: true_rewards[prior_choice] - true_rewards[signal_choice],
        prior_choice,
        signal_choice,
    })
}

/// Bounded trust adjustment opposing the sign of regret:
/// positive regret lowers trust by `epsilon`, negative regret raises it,
/// zero regret leaves it unchanged; the result is clamped to `[0, 1]`.
pub fn trust_update<F: Real>(alpha: F, r_b: F, epsilon: F) -> Result<F> {
    check_unit_interval("alpha", alpha)?;
    check_unit_interval("epsilon", epsilon)?;
    let sign = if r_b > F::zero() {
        F::one()
    } else if r_b < F::zero() {
        -F::one()
    } else {
        F::zero()
    };
    if r_b <= F::zero() {
        Ok(F::one().min(alpha - epsilon * sign))
    } else {
        Ok(F::zero().max(alpha - epsilon * sign))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::normalize;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn categorical_state(alpha: f64, q_means: &[f64]) -> ReceiverState<f64> {
        // Means in [0, 10] map onto categorical weights at scale 10.
        let total: f64 = q_means.iter().sum();
        let weights: Vec<f64> = q_means.iter().map(|m| m / total).collect();
        let belief = BeliefSet::categorical(
            ProbVector::new(weights).unwrap(),
            total, // scale chosen so expectations reproduce q_means
        )
        .unwrap();
        ReceiverState::new(alpha, belief, TieBreak::LowestIndex).unwrap()
    }

    #[test]
    fn blended_means_combines_signal_and_prior() {
        let state = categorical_state(0.5, &[2.0, 4.0]);
        let signal = Signal::from_means(vec![6.0, 2.0]);
        let y = blended_means(&signal, &state).unwrap();
        assert_abs_diff_eq!(y[0], 4.0);
        assert_abs_diff_eq!(y[1], 3.0);
    }

    #[test]
    fn blended_means_extremes_select_one_source() {
        let q = [2.0, 4.0];
        let signal = Signal::from_means(vec![6.0, 2.0]);
        let y0 = blended_means(&signal, &categorical_state(0.0, &q)).unwrap();
        assert_abs_diff_eq!(y0[0], 2.0);
        assert_abs_diff_eq!(y0[1], 4.0);
        let y1 = blended_means(&signal, &categorical_state(1.0, &q)).unwrap();
        assert_abs_diff_eq!(y1[0], 6.0);
        assert_abs_diff_eq!(y1[1], 2.0);
    }

    #[test]
    fn blended_means_rejects_shape_mismatch() {
        let state = categorical_state(0.5, &[2.0, 4.0]);
        let signal = Signal::from_means(vec![6.0, 2.0, 1.0]);
        assert!(blended_means(&signal, &state).is_err());
    }

    #[test]
    fn best_response_picks_unique_maximum() {
        let rule = best_response(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(rule.weights().weights(), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn best_response_breaks_ties_low() {
        let rule = best_response(&[2.0, 2.0, 1.0]).unwrap();
        assert_eq!(rule.weights().weights(), &[1.0, 0.0, 0.0]);
        assert_eq!(rule.choice(), Some(0));
    }

    #[test]
    fn best_response_on_running_example() {
        let rule = best_response(&[4.0, 3.0]).unwrap();
        assert_eq!(rule.choice(), Some(0));
    }

    #[test]
    fn best_response_rejects_empty() {
        assert!(best_response::<f64>(&[]).is_err());
    }

    #[test]
    fn uniform_random_tie_break_hits_every_tied_choice() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let y = [5.0, 5.0, 1.0, 5.0];
        let mut seen = [false; 4];
        for _ in 0..200 {
            let rule = best_response_with(&y, TieBreak::UniformRandom, &mut rng).unwrap();
            seen[rule.choice().unwrap()] = true;
        }
        assert_eq!(seen, [true, true, false, true]);
    }

    #[test]
    fn expected_utility_examples() {
        let posterior = BeliefSet::categorical(
            ProbVector::new(vec![0.25, 0.75]).unwrap(),
            8.0, // expectations [2, 6]
        )
        .unwrap();
        let mixed = DecisionRule::from_weights(ProbVector::new(vec![0.5, 0.5]).unwrap());
        assert_abs_diff_eq!(expected_utility_bob(&mixed, &posterior).unwrap(), 4.0);

        let one_hot = DecisionRule::one_hot(2, 0).unwrap();
        assert_abs_diff_eq!(
            one_hot.expected_value(&[4.0, 3.0]).unwrap(),
            4.0
        );
    }

    #[test]
    fn regret_examples() {
        let rewards = [3.0, 7.0];

        // Prior favors the first choice: following the signal to the second
        // choice turns out well, so regret is negative.
        let prior_first = categorical_state(0.3, &[7.0, 3.0]);
        let helped = regret(&rewards, &prior_first, 1).unwrap();
        assert_eq!(helped.prior_choice, 0);
        assert_abs_diff_eq!(helped.r_b, -4.0);

        // Prior favors the second choice: being steered to the first is a
        // loss of the same size.
        let prior_second = categorical_state(0.3, &[3.0, 7.0]);
        let hurt = regret(&rewards, &prior_second, 0).unwrap();
        assert_eq!(hurt.prior_choice, 1);
        assert_abs_diff_eq!(hurt.r_b, 4.0);
        assert_eq!(hurt.r_b, -helped.r_b);

        // Signal choice equals the prior choice: no regret either way.
        let stay = regret(&rewards, &prior_second, 1).unwrap();
        assert_eq!(stay.r_b, 0.0);
    }

    #[test]
    fn regret_rejects_bad_shapes() {
        let state = categorical_state(0.3, &[3.0, 7.0]);
        assert!(regret(&[1.0, 2.0, 3.0], &state, 0).is_err());
        assert!(regret(&[1.0, 2.0], &state, 5).is_err());
    }

    #[test]
    fn trust_update_table() {
        assert_abs_diff_eq!(trust_update(0.5, -4.0, 0.1).unwrap(), 0.6);
        assert_abs_diff_eq!(trust_update(0.5, 4.0, 0.1).unwrap(), 0.4);
        assert_abs_diff_eq!(trust_update(0.95, -1.0, 0.1).unwrap(), 1.0);
        assert_abs_diff_eq!(trust_update(0.5, 0.0, 0.1).unwrap(), 0.5);
        assert_abs_diff_eq!(trust_update(0.05, 2.0, 0.1).unwrap(), 0.0);
    }

    #[test]
    fn trust_update_rejects_out_of_range_parameters() {
        assert!(trust_update(1.5, 0.0, 0.1).is_err());
        assert!(trust_update(0.5, 0.0, -0.1).is_err());
        assert!(trust_update(0.5, 0.0, 1.1).is_err());
    }

    proptest! {
        #[test]
        fn best_response_matches_exhaustive_one_hot_scan(
            y in prop::collection::vec(-100.0f64..100.0, 1..20),
        ) {
            let rule = best_response(&y).unwrap();
            let mut best_value = f64::NEG_INFINITY;
            let mut best_idx = 0;
            for n in 0..y.len() {
                let one_hot = DecisionRule::one_hot(y.len(), n).unwrap();
                let v = one_hot.expected_value(&y).unwrap();
                if v > best_value {
                    best_value = v;
                    best_idx = n;
                }
            }
            prop_assert_eq!(rule.choice(), Some(best_idx));
            // Optimality over every one-hot rule.
            let achieved = rule.expected_value(&y).unwrap();
            prop_assert!(achieved >= best_value);
        }

        #[test]
        fn argmax_invariant_under_positive_affine_maps(
            y in prop::collection::vec(-50.0f64..50.0, 2..12),
            a in 0.1f64..10.0,
            b in -100.0f64..100.0,
        ) {
            let transformed: Vec<f64> = y.iter().map(|&v| a * v + b).collect();
            prop_assert_eq!(
                best_response(&y).unwrap().choice(),
                best_response(&transformed).unwrap().choice()
            );
        }

        #[test]
        fn trust_update_bounds_and_direction(
            alpha in 0.0f64..=1.0,
            epsilon in 0.0f64..=1.0,
            r_b in -10.0f64..10.0,
        ) {
            let next = trust_update(alpha, r_b, epsilon).unwrap();
            prop_assert!((0.0..=1.0).contains(&next));
            prop_assert!((next - alpha).abs() <= epsilon + 1e-15);
            if r_b > 0.0 {
                prop_assert!(next <= alpha);
            } else if r_b < 0.0 {
                prop_assert!(next >= alpha);
            } else {
                prop_assert_eq!(next, alpha);
            }
        }

        #[test]
        fn regret_antisymmetric_in_choices(
            raw in prop::collection::vec(0.5f64..10.0, 3..8),
            i in 0usize..3,
            j in 0usize..3,
        ) {
            let n = raw.len();
            let i = i % n;
            let j = j % n;
            let q = normalize(&raw, 0.0).unwrap();
            let belief = BeliefSet::categorical(q, 10.0).unwrap();
            let state = ReceiverState::new(0.5, belief, TieBreak::LowestIndex).unwrap();
            let forward = regret(&raw, &state, i).unwrap();
            let backward = regret(&raw, &state, j).unwrap();
            // Same prior choice in both records; swapping the signal choice
            // between i and j negates the difference of the two regrets.
            prop_assert_eq!(forward.prior_choice, backward.prior_choice);
            let diff = forward.r_b - backward.r_b;
            prop_assert!((diff - (raw[j] - raw[i])).abs() < 1e-12);
        }
    }
}
