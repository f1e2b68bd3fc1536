//! Expected-energy cost functions for both access games and their
//! mixed-strategy Nash equilibria.
//!
//! The simple game has the closed-form equilibrium s* = a / (a + b). The
//! delay-bounded game's equilibrium is the symmetric root of a printed
//! ten-term best-response polynomial, found by bisection. A numeric
//! minimizer of the three-slot cost function is provided alongside for
//! cross-checking; the two routes are deliberately not asserted equal.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GameError {
    #[error("ratio must be positive, got {0}")]
    NonPositiveRatio(f64),
    #[error("expected energy must be positive, got {0}")]
    NonPositiveEnergy(f64),
    #[error("tolerance {0} outside (0, 0.01)")]
    BadTolerance(f64),
    #[error("no symmetric fixed point: residual does not change sign on (0, 1)")]
    NoFixedPoint,
}

/// Energy constants and ratios of the access game.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameParams {
    /// Energy of one packet transmission, joules.
    pub e_s: f64,
    /// Mutual-wait cost, joules; equals `a * e_s`.
    pub e_w: f64,
    /// Collision penalty, joules; equals `b * e_s`.
    pub e_cost: f64,
    /// Battery budget per node, joules.
    pub e_total: f64,
    pub a: f64,
    pub b: f64,
    /// Probability the controller polls a given node.
    pub p_poll: f64,
}

impl GameParams {
    pub fn from_ratios(e_s: f64, a: f64, b: f64, e_total: f64, p_poll: f64) -> Self {
        assert!(e_s > 0.0 && a > 0.0 && b > 0.0);
        assert!((0.0..=1.0).contains(&p_poll));
        GameParams {
            e_s,
            e_w: a * e_s,
            e_cost: b * e_s,
            e_total,
            a,
            b,
            p_poll,
        }
    }

    /// The constants used for Fig. 2 style utility tables: a = 0.7, b = 1,
    /// E_S = 9.5e-4 J, E_TOTAL = 100 J.
    pub fn reference() -> Self {
        GameParams::from_ratios(9.5e-4, 0.7, 1.0, 100.0, 0.5)
    }
}

/// Transmit probabilities of the two contending sources.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrategyProfile {
    pub s1: f64,
    pub s2: f64,
}

impl StrategyProfile {
    pub fn new(s1: f64, s2: f64) -> Self {
        assert!((0.0..=1.0).contains(&s1) && (0.0..=1.0).contains(&s2));
        StrategyProfile { s1, s2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Player {
    One,
    Two,
}

fn oriented(p: StrategyProfile, player: Player) -> (f64, f64) {
    match player {
        Player::One => (p.s1, p.s2),
        Player::Two => (p.s2, p.s1),
    }
}

/// Per-slot expected energy of the simple access game:
/// s1*(1-s2)*E_S + s1*s2*(E_S + E_COST) + (1-s1)*(1-s2)*E_W.
pub fn expected_energy_simple(p: StrategyProfile, g: &GameParams, player: Player) -> f64 {
    let (s, t) = oriented(p, player);
    s * (1.0 - t) * g.e_s + s * t * (g.e_s + g.e_cost) + (1.0 - s) * (1.0 - t) * g.e_w
}

/// Lifetime utility: battery budget over per-slot expected energy.
pub fn utility(g: &GameParams, expected_energy: f64) -> Result<f64, GameError> {
    if expected_energy <= 0.0 {
        return Err(GameError::NonPositiveEnergy(expected_energy));
    }
    Ok(g.e_total / expected_energy)
}

/// Symmetric mixed equilibrium of the simple game, s* = a / (a + b).
pub fn nep_simple(a: f64, b: f64) -> Result<f64, GameError> {
    if a <= 0.0 {
        return Err(GameError::NonPositiveRatio(a));
    }
    if b <= 0.0 {
        return Err(GameError::NonPositiveRatio(b));
    }
    Ok(a / (a + b))
}

/// Three-slot expected energy of the delay-bounded game: first-slot costs,
/// second-slot costs conditioned on a failed first slot, and third-slot
/// polling costs.
pub fn expected_energy_delay_bounded(p: StrategyProfile, g: &GameParams, player: Player) -> f64 {
    let (s1, s2) = oriented(p, player);
    let (c1, c2) = (1.0 - s1, 1.0 - s2);
    let tx_and_coll = g.e_s + g.e_cost;

    let first = s1 * c2 * g.e_s + s1 * s2 * tx_and_coll + c1 * c2 * g.e_w;
    let second = c1 * c2 * c2 * s1 * g.e_s
        + c1 * c2 * s1 * s2 * tx_and_coll
        + c1 * c1 * c2 * c2 * g.e_w
        + s1 * s1 * s2 * c2 * g.e_s
        + s1 * s1 * s2 * s2 * tx_and_coll
        + s1 * s2 * c1 * c2 * g.e_w;
    let third = c1 * c1 * c2 * c2 * g.p_poll * g.e_s
        + s1 * s1 * s2 * s2 * g.p_poll * g.e_s
        + 2.0 * s1 * s2 * c1 * c2 * g.p_poll * g.e_s;

    first + second + third
}

/// The printed ten-term best-response polynomial of the delay-bounded game;
/// zero means s1 is a best response to s2.
pub fn best_response_residual(p: StrategyProfile, a: f64, b: f64) -> f64 {
    let (s1, s2) = (p.s1, p.s2);
    let (c1, c2) = (1.0 - s1, 1.0 - s2);
    c2 * b + 2.0 * s2 * b - c2 * a * b - c2 * c2 * s1 * b - c1 * c2 * c2 * b
        + 2.0 * c1 * c2 * s2 * b
        - 2.0 * c1 * c2 * c2 * a * b
        + 6.0 * s1 * s2 * s2 * b
        + s2 * c1 * c2 * a * b
        - s1 * s2 * c2 * a * b
}

/// Symmetric fixed point of the best-response polynomial, by bisection on
/// the diagonal s1 = s2 inside (0, 1).
pub fn nep_delay_bounded(a: f64, b: f64, tol: f64) -> Result<f64, GameError> {
    if a <= 0.0 {
        return Err(GameError::NonPositiveRatio(a));
    }
    if b <= 0.0 {
        return Err(GameError::NonPositiveRatio(b));
    }
    if !(tol > 0.0 && tol < 0.01) {
        return Err(GameError::BadTolerance(tol));
    }
    let diag = |s: f64| best_response_residual(StrategyProfile::new(s, s), a, b);
    const EPS: f64 = 1e-9;
    let (mut lo, mut hi) = (EPS, 1.0 - EPS);
    let (f_lo, f_hi) = (diag(lo), diag(hi));
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(GameError::NoFixedPoint);
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let f_mid = diag(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Best response by direct minimization of the delay-bounded cost over
/// s1 in [0, 1]: dense scan followed by local grid refinement.
pub fn numeric_best_response(s2: f64, g: &GameParams) -> f64 {
    assert!((0.0..=1.0).contains(&s2));
    let cost = |s1: f64| {
        expected_energy_delay_bounded(StrategyProfile { s1, s2 }, g, Player::One)
    };
    let mut best = 0.0;
    let mut best_cost = cost(0.0);
    let coarse = 1000;
    for i in 1..=coarse {
        let s1 = i as f64 / coarse as f64;
        let c = cost(s1);
        if c < best_cost {
            best_cost = c;
            best = s1;
        }
    }
    // refine around the coarse minimum
    let mut step = 1.0 / coarse as f64;
    while step > 1e-9 {
        step /= 10.0;
        for i in -10i32..=10 {
            let s1 = (best + i as f64 * step).clamp(0.0, 1.0);
            let c = cost(s1);
            if c < best_cost {
                best_cost = c;
                best = s1;
            }
        }
    }
    best
}
