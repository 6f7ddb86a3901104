//! Softness schedules: map a round index to `(beta, mu)` through the
//! auxiliary variable `xi`.
//!
//! A schedule walks `xi` from `xi_start` to `xi_end` over `rounds` rounds
//! (constant, linear, or geometric in `xi`), and each round's parameters are
//! `beta = (1 - xi) / (1 + xi)` and `mu = 1 / xi`. Increasing `xi` lowers
//! the generator gain `beta` while raising the reinforcement weight
//! `1 / mu = xi`: the anneal runs soft to hard.

use core::fmt;

use crate::math;

/// Errors from schedule construction or evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum ScheduleError {
    InvalidParam(&'static str),
    RoundOutOfRange { round: usize, rounds: usize },
    XiOutOfRange(f64),
}

impl fmt::Display for ScheduleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScheduleError::InvalidParam(what) => write!(f, "invalid schedule: {what}"),
            ScheduleError::RoundOutOfRange { round, rounds } => {
                write!(f, "round {round} out of range (schedule has {rounds})")
            }
            ScheduleError::XiOutOfRange(xi) => write!(f, "xi must lie in (0, 1), got {xi}"),
        }
    }
}

impl core::error::Error for ScheduleError {}

/// How `xi` progresses over rounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleKind {
    Constant,
    Linear,
    Exponential,
}

impl fmt::Display for ScheduleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScheduleKind::Constant => "constant",
            ScheduleKind::Linear => "linear",
            ScheduleKind::Exponential => "exponential",
        })
    }
}

/// A fully specified schedule: kind, endpoints, and round count.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    kind: ScheduleKind,
    xi_start: f64,
    xi_end: f64,
    rounds: usize,
}

impl Schedule {
    /// Builds a schedule. Constant schedules need `xi_start == xi_end`;
    /// linear and exponential ones need `0 < xi_start < xi_end < 1`.
    pub fn new(
        kind: ScheduleKind,
        xi_start: f64,
        xi_end: f64,
        rounds: usize,
    ) -> Result<Self, ScheduleError> {
        if rounds == 0 {
            return Err(ScheduleError::InvalidParam("rounds must be >= 1"));
        }
        if !(xi_start > 0.0 && xi_start < 1.0 && xi_end > 0.0 && xi_end < 1.0) {
            return Err(ScheduleError::InvalidParam("endpoints must lie in (0, 1)"));
        }
        match kind {
            ScheduleKind::Constant => {
                if xi_start != xi_end {
                    return Err(ScheduleError::InvalidParam(
                        "constant schedule needs equal endpoints",
                    ));
                }
            }
            ScheduleKind::Linear | ScheduleKind::Exponential => {
                if !(xi_start < xi_end) {
                    return Err(ScheduleError::InvalidParam(
                        "schedule endpoints must satisfy xi_start < xi_end",
                    ));
                }
            }
        }
        Ok(Schedule {
            kind,
            xi_start,
            xi_end,
            rounds,
        })
    }

    /// Constant schedule at a single `xi`.
    pub fn constant(xi: f64, rounds: usize) -> Result<Self, ScheduleError> {
        Schedule::new(ScheduleKind::Constant, xi, xi, rounds)
    }

    pub fn kind(&self) -> ScheduleKind {
        self.kind
    }

    pub fn xi_start(&self) -> f64 {
        self.xi_start
    }

    pub fn xi_end(&self) -> f64 {
        self.xi_end
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// Same endpoints and kind, different round count.
    pub fn with_rounds(&self, rounds: usize) -> Result<Self, ScheduleError> {
        Schedule::new(self.kind, self.xi_start, self.xi_end, rounds)
    }

    /// `xi` at round `r`, for `0 <= r < rounds`.
    ///
    /// The progression fraction is `t_r = r / (rounds - 1)` (0 when
    /// `rounds == 1`); linear interpolates, exponential takes equal steps in
    /// `log xi`. Both endpoints are returned exactly.
    pub fn xi_at(&self, r: usize) -> Result<f64, ScheduleError> {
        if r >= self.rounds {
            return Err(ScheduleError::RoundOutOfRange {
                round: r,
                rounds: self.rounds,
            });
        }
        if r == 0 || self.kind == ScheduleKind::Constant {
            return Ok(self.xi_start);
        }
        if r == self.rounds - 1 {
            return Ok(self.xi_end);
        }
        let t = r as f64 / (self.rounds - 1) as f64;
        Ok(match self.kind {
            ScheduleKind::Constant => self.xi_start,
            ScheduleKind::Linear => self.xi_start + t * (self.xi_end - self.xi_start),
            ScheduleKind::Exponential => {
                self.xi_start * math::pow(self.xi_end / self.xi_start, t)
            }
        })
    }

    /// `(beta, mu)` at round `r`.
    pub fn params_at(&self, r: usize) -> Result<(f64, f64), ScheduleError> {
        params_from_xi(self.xi_at(r)?)
    }
}

/// `beta = (1 - xi) / (1 + xi)` and `mu = 1 / xi`, for `xi` in (0, 1).
///
/// The reinforcement weight is `1 / mu = xi`.
pub fn params_from_xi(xi: f64) -> Result<(f64, f64), ScheduleError> {
    if !(xi > 0.0 && xi < 1.0) {
        return Err(ScheduleError::XiOutOfRange(xi));
    }
    Ok(((1.0 - xi) / (1.0 + xi), 1.0 / xi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn endpoints_are_exact_for_all_kinds() {
        for kind in [
            ScheduleKind::Constant,
            ScheduleKind::Linear,
            ScheduleKind::Exponential,
        ] {
            let (xs, xe) = match kind {
                ScheduleKind::Constant => (0.04, 0.04),
                _ => (0.025, 0.052),
            };
            for rounds in [1usize, 2, 3, 7, 100] {
                let s = Schedule::new(kind, xs, xe, rounds).unwrap();
                assert_eq!(s.xi_at(0).unwrap(), xs);
                assert_eq!(s.xi_at(rounds - 1).unwrap(), if rounds == 1 { xs } else { xe });
            }
        }
    }

    #[test]
    fn single_round_returns_start() {
        let s = Schedule::new(ScheduleKind::Exponential, 0.025, 0.052, 1).unwrap();
        assert_eq!(s.xi_at(0).unwrap(), 0.025);
    }

    #[test]
    fn linear_midpoint() {
        // xi_start + 0.5 (xi_end - xi_start) with the example endpoints.
        let s = Schedule::new(ScheduleKind::Linear, 0.025, 0.052, 3).unwrap();
        assert_relative_eq!(s.xi_at(1).unwrap(), 0.0385, max_relative = 1e-12);
    }

    #[test]
    fn exponential_midpoint_is_geometric_mean() {
        let s = Schedule::new(ScheduleKind::Exponential, 0.025, 0.052, 3).unwrap();
        assert_relative_eq!(
            s.xi_at(1).unwrap(),
            0.036055512754639893, // sqrt(0.025 * 0.052)
            max_relative = 1e-12
        );
    }

    #[test]
    fn params_examples() {
        let (beta, mu) = params_from_xi(0.05).unwrap();
        assert_relative_eq!(beta, 0.9047619047619048, max_relative = 1e-12);
        assert_relative_eq!(mu, 20.0, max_relative = 1e-12);

        let (beta, mu) = params_from_xi(0.5).unwrap();
        assert_relative_eq!(beta, 1.0 / 3.0, max_relative = 1e-12);
        assert_relative_eq!(mu, 2.0, max_relative = 1e-12);
    }

    #[test]
    fn soft_limit() {
        let (beta, mu) = params_from_xi(1e-12).unwrap();
        assert!(beta > 1.0 - 1e-11);
        assert!(mu > 1e11);
    }

    #[test]
    fn params_domain() {
        assert!(params_from_xi(0.0).is_err());
        assert!(params_from_xi(1.0).is_err());
        assert!(params_from_xi(-0.1).is_err());
    }

    #[test]
    fn xi_out_of_range() {
        let s = Schedule::constant(0.05, 4).unwrap();
        assert!(s.xi_at(4).is_err());
    }

    #[test]
    fn rejects_bad_endpoints() {
        assert!(Schedule::new(ScheduleKind::Linear, 0.05, 0.05, 10).is_err());
        assert!(Schedule::new(ScheduleKind::Linear, 0.06, 0.05, 10).is_err());
        assert!(Schedule::new(ScheduleKind::Exponential, 0.0, 0.05, 10).is_err());
        assert!(Schedule::new(ScheduleKind::Constant, 0.04, 0.05, 10).is_err());
        assert!(Schedule::constant(0.04, 0).is_err());
    }

    #[test]
    fn monotone_and_scale_invariant() {
        for rounds in 2..=64usize {
            let lin = Schedule::new(ScheduleKind::Linear, 0.022, 0.048, rounds).unwrap();
            let exp = Schedule::new(ScheduleKind::Exponential, 0.022, 0.048, rounds).unwrap();
            let ratio0 = exp.xi_at(1).unwrap() / exp.xi_at(0).unwrap();
            for r in 1..rounds {
                for s in [&lin, &exp] {
                    let prev = s.xi_at(r - 1).unwrap();
                    let cur = s.xi_at(r).unwrap();
                    assert!(cur > prev, "xi must strictly increase");
                    let (b_prev, m_prev) = s.params_at(r - 1).unwrap();
                    let (b_cur, m_cur) = s.params_at(r).unwrap();
                    assert!(b_cur < b_prev, "beta must strictly decrease");
                    assert!(m_cur < m_prev, "mu must strictly decrease");
                    assert!(1.0 / m_cur > 1.0 / m_prev, "1/mu must strictly increase");
                }
                let ratio = exp.xi_at(r).unwrap() / exp.xi_at(r - 1).unwrap();
                assert_relative_eq!(ratio, ratio0, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn round_trip_through_mu() {
        for k in 1..100 {
            let xi = k as f64 / 100.0;
            let (beta, mu) = params_from_xi(xi).unwrap();
            assert_relative_eq!(1.0 / mu, xi, max_relative = 1e-12);
            assert_relative_eq!((1.0 - beta) / (1.0 + beta), xi, max_relative = 1e-12);
        }
    }
}
