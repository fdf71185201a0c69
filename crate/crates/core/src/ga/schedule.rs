use alloc::vec::Vec;

use crate::fingerprint::{mean_pairwise_similarity, Fingerprint};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BetaSchedule {
    Constant(f64),
    /// `beta` while the best J has been exactly constant for `patience`
    /// generations, from `start_generation` on.
    TimeAdaptive { patience: usize, beta: f64, start_generation: usize, hold_until_change: bool },
    /// `beta` while the best molecules of the last `window` generations
    /// are on average more similar than `threshold`.
    SimilarityTriggered { threshold: f64, window: usize, start_generation: usize, beta: f64 },
}

impl BetaSchedule {
    pub fn time_adaptive() -> Self {
        BetaSchedule::TimeAdaptive { patience: 5, beta: 1000.0, start_generation: 100, hold_until_change: false }
    }

    pub fn similarity(threshold: f64) -> Self {
        BetaSchedule::SimilarityTriggered { threshold, window: 5, start_generation: 20, beta: 1000.0 }
    }

    pub fn is_adaptive(&self) -> bool {
        !matches!(self, BetaSchedule::Constant(_))
    }

    /// Largest |beta| the schedule can apply.
    pub fn peak(&self) -> f64 {
        match *self {
            BetaSchedule::Constant(b) => b,
            BetaSchedule::TimeAdaptive { beta, .. } | BetaSchedule::SimilarityTriggered { beta, .. } => beta,
        }
    }
}

/// True iff the last `patience` entries exist and are bitwise equal.
pub fn stagnation_triggered(history: &[f64], patience: usize) -> bool {
    if patience == 0 || history.len() < patience {
        return false;
    }
    let tail = &history[history.len() - patience..];
    tail.iter().all(|x| x.to_bits() == tail[0].to_bits())
}

/// True iff `generation >= start`, there are at least `window` best
/// molecules and the mean pairwise similarity of the last `window` is
/// above `threshold`.
pub fn similarity_triggered(
    best_history: &[Fingerprint],
    threshold: f64,
    window: usize,
    generation: usize,
    start: usize,
) -> bool {
    if generation < start || window == 0 || best_history.len() < window {
        return false;
    }
    let tail = &best_history[best_history.len() - window..];
    matches!(mean_pairwise_similarity(tail), Ok(s) if s > threshold)
}

/// Tracks when an adaptive schedule fires.
#[derive(Clone, Debug, Default)]
pub(crate) struct ScheduleState {
    /// Index into the max-J history where the current patience window
    /// starts; a trigger restarts it.
    window_start: usize,
    holding: Option<u64>,
}

impl ScheduleState {
    /// Beta for `generation`, given the histories of the generations
    /// before it, and whether the trigger fired.
    pub(crate) fn beta_for(
        &mut self,
        schedule: &BetaSchedule,
        generation: usize,
        max_j: &[f64],
        best_fps: &[Fingerprint],
    ) -> (f64, bool) {
        match *schedule {
            BetaSchedule::Constant(b) => (b, false),
            BetaSchedule::TimeAdaptive { patience, beta, start_generation, hold_until_change } => {
                if let Some(bits) = self.holding {
                    if max_j.last().map(|x| x.to_bits()) == Some(bits) {
                        return (beta, true);
                    }
                    self.holding = None;
                    self.window_start = max_j.len() - 1;
                }
                if generation < start_generation {
                    return (0.0, false);
                }
                let window: &[f64] = &max_j[self.window_start.min(max_j.len())..];
                if stagnation_triggered(window, patience) {
                    // The penalized generation opens the next window.
                    self.window_start = max_j.len();
                    if hold_until_change {
                        self.holding = max_j.last().map(|x| x.to_bits());
                    }
                    (beta, true)
                } else {
                    (0.0, false)
                }
            }
            BetaSchedule::SimilarityTriggered { threshold, window, start_generation, beta } => {
                if similarity_triggered(best_fps, threshold, window, generation, start_generation) {
                    (beta, true)
                } else {
                    (0.0, false)
                }
            }
        }
    }
}

pub(crate) fn keep_last<T>(v: &mut Vec<T>, n: usize) {
    if v.len() > n {
        v.drain(..v.len() - n);
    }
}
