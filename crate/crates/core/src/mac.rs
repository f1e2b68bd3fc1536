//! Per-slot channel-access strategies for a contending source: the two
//! game-theoretic schemes and the BO-MAC backoff baseline.

use rand::Rng;
use serde::{Deserialize, Serialize};

pub const BOMAC_CW_MIN: u32 = 32;
pub const BOMAC_CW_MAX_DEFAULT: u32 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StrategyKind {
    /// Bernoulli(s*) transmissions at the simple-game equilibrium.
    SimpleDag,
    /// Bernoulli(s*) at the delay-bounded equilibrium, with a controller
    /// poll after two consecutive unsuccessful slots.
    DelayBoundedDag,
    /// 802.11-like doubling congestion window, no inter-frame spaces.
    BoMac,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Action {
    Transmit,
    Wait,
    /// Hand the slot to the central controller.
    AwaitPoll,
}

pub fn decide_simple<R: Rng>(s_star: f64, rng: &mut R) -> Action {
    debug_assert!((0.0..=1.0).contains(&s_star));
    if rng.gen_bool(s_star) {
        Action::Transmit
    } else {
        Action::Wait
    }
}

/// Consecutive-failure tracker of the delay-bounded scheme.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DelayBoundState {
    pub consecutive_failures: u8,
}

pub fn decide_delay_bounded<R: Rng>(
    state: DelayBoundState,
    s_star: f64,
    rng: &mut R,
) -> Action {
    if state.consecutive_failures >= 2 {
        Action::AwaitPoll
    } else {
        decide_simple(s_star, rng)
    }
}

/// Success or poll resets the counter; failure saturates at 2.
pub fn update_failures(state: DelayBoundState, slot_was_successful: bool) -> DelayBoundState {
    let consecutive_failures = if slot_was_successful {
        0
    } else {
        (state.consecutive_failures + 1).min(2)
    };
    DelayBoundState {
        consecutive_failures,
    }
}

/// What a BO-MAC node observed in the slot it just lived through.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoMacOutcome {
    Success,
    Collision,
    /// The peer transmitted; the whole transmission counts as one
    /// decrement opportunity at its boundary.
    OtherBusy,
    Idle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoMacState {
    pub cw: u32,
    pub backoff_counter: u32,
}

impl BoMacState {
    pub fn new<R: Rng>(rng: &mut R) -> Self {
        BoMacState {
            cw: BOMAC_CW_MIN,
            backoff_counter: rng.gen_range(0..BOMAC_CW_MIN),
        }
    }
}

pub fn bomac_decide(state: &BoMacState) -> Action {
    if state.backoff_counter == 0 {
        Action::Transmit
    } else {
        Action::Wait
    }
}

pub fn bomac_update<R: Rng>(
    state: BoMacState,
    outcome: BoMacOutcome,
    cw_max: u32,
    rng: &mut R,
) -> BoMacState {
    match outcome {
        BoMacOutcome::Success => {
            let cw = BOMAC_CW_MIN;
            BoMacState {
                cw,
                backoff_counter: rng.gen_range(0..cw),
            }
        }
        BoMacOutcome::Collision => {
            let cw = (state.cw * 2).min(cw_max);
            BoMacState {
                cw,
                backoff_counter: rng.gen_range(0..cw),
            }
        }
        BoMacOutcome::OtherBusy | BoMacOutcome::Idle => BoMacState {
            cw: state.cw,
            backoff_counter: state.backoff_counter.saturating_sub(1),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn simple_boundaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..100 {
            assert_eq!(decide_simple(1.0, &mut rng), Action::Transmit);
            assert_eq!(decide_simple(0.0, &mut rng), Action::Wait);
        }
    }

    #[test]
    fn simple_empirical_frequency() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = 0.41176;
        let n = 100_000;
        let hits = (0..n)
            .filter(|_| decide_simple(s, &mut rng) == Action::Transmit)
            .count();
        let freq = hits as f64 / n as f64;
        assert!((freq - 0.412).abs() < 0.005, "freq = {freq}");
    }

    #[test]
    fn delay_bounded_decisions() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let calm = DelayBoundState::default();
        for _ in 0..50 {
            let act = decide_delay_bounded(calm, 0.25, &mut rng);
            assert!(act == Action::Transmit || act == Action::Wait);
        }
        let stuck = DelayBoundState {
            consecutive_failures: 2,
        };
        assert_eq!(decide_delay_bounded(stuck, 0.25, &mut rng), Action::AwaitPoll);
    }

    #[test]
    fn failure_counter_transitions() {
        let s0 = DelayBoundState::default();
        let s1 = update_failures(s0, false);
        assert_eq!(s1.consecutive_failures, 1);
        let s2 = update_failures(s1, false);
        assert_eq!(s2.consecutive_failures, 2);
        // counter saturates rather than exceeding 2
        assert_eq!(update_failures(s2, false).consecutive_failures, 2);
        // a poll or success resets the contingency sequence
        assert_eq!(update_failures(s2, true).consecutive_failures, 0);
    }

    #[test]
    fn bomac_fresh_state_draw() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let s = BoMacState::new(&mut rng);
            assert_eq!(s.cw, 32);
            assert!(s.backoff_counter < 32);
        }
    }

    #[test]
    fn bomac_collision_doubles_and_caps() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut s = BoMacState::new(&mut rng);
        let mut expected = 32u32;
        for _ in 0..8 {
            s = bomac_update(s, BoMacOutcome::Collision, BOMAC_CW_MAX_DEFAULT, &mut rng);
            expected = (expected * 2).min(BOMAC_CW_MAX_DEFAULT);
            assert_eq!(s.cw, expected);
            assert!(s.backoff_counter < s.cw);
        }
        assert_eq!(s.cw, BOMAC_CW_MAX_DEFAULT);
        s = bomac_update(s, BoMacOutcome::Success, BOMAC_CW_MAX_DEFAULT, &mut rng);
        assert_eq!(s.cw, 32);
    }

    #[test]
    fn bomac_decrement_floors_at_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut s = BoMacState {
            cw: 32,
            backoff_counter: 2,
        };
        s = bomac_update(s, BoMacOutcome::Idle, BOMAC_CW_MAX_DEFAULT, &mut rng);
        assert_eq!(s.backoff_counter, 1);
        s = bomac_update(s, BoMacOutcome::OtherBusy, BOMAC_CW_MAX_DEFAULT, &mut rng);
        assert_eq!(s.backoff_counter, 0);
        assert_eq!(bomac_decide(&s), Action::Transmit);
        s = bomac_update(s, BoMacOutcome::Idle, BOMAC_CW_MAX_DEFAULT, &mut rng);
        assert_eq!(s.backoff_counter, 0);
    }
}
