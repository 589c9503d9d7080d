//! Singularity-aware primitives for planners and controllers: a repulsive
//! potential, a roadmap admission predicate and a target gate.

use alloc::vec::Vec;

use crate::distance::{distance_to_singularity, SingularitySpec};
use crate::error::{Error, Result};
use crate::kinematics::RobotModel;

/// Distances below this are treated as lying on the singularity.
pub const POLE_DISTANCE: f64 = 1e-12;

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct HandlingParams {
    /// Influence threshold `D₀`.
    pub d0: f64,
    /// Gain `κ`.
    pub kappa: f64,
    pub max_gate_iters: usize,
}

impl HandlingParams {
    pub fn new(d0: f64, kappa: f64, max_gate_iters: usize) -> Result<Self> {
        if !(d0 > 0.0 && d0.is_finite()) {
            return Err(Error::InvalidParams("d0 must be positive and finite"));
        }
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::InvalidParams("kappa must be positive and finite"));
        }
        if max_gate_iters == 0 {
            return Err(Error::InvalidParams("max_gate_iters must be at least 1"));
        }
        Ok(HandlingParams {
            d0,
            kappa,
            max_gate_iters,
        })
    }
}

/// `κ/2 (1/D − 1/D₀)²` inside the threshold, `0` outside, `+∞` at the pole.
pub fn potential_from_distance(d: f64, params: &HandlingParams) -> f64 {
    if d > params.d0 {
        0.0
    } else if d < POLE_DISTANCE {
        f64::INFINITY
    } else {
        let gap = 1.0 / d - 1.0 / params.d0;
        0.5 * params.kappa * gap * gap
    }
}

pub fn repulsive_potential(
    model: &RobotModel,
    q: &[f64],
    spec: &SingularitySpec,
    params: &HandlingParams,
) -> Result<f64> {
    let d = distance_to_singularity(model, q, spec)?.total;
    Ok(potential_from_distance(d, params))
}

/// Smallest distance to any of `specs`; `+∞` when there are none.
pub fn min_singularity_distance(model: &RobotModel, q: &[f64], specs: &[SingularitySpec]) -> Result<f64> {
    specs.iter().try_fold(f64::INFINITY, |m, s| {
        Ok(f64::min(m, distance_to_singularity(model, q, s)?.total))
    })
}

/// Accepts `q` as a roadmap node iff it lies farther than `D₀` from every singularity.
pub fn admit_node(
    model: &RobotModel,
    q: &[f64],
    specs: &[SingularitySpec],
    params: &HandlingParams,
) -> Result<bool> {
    model.check_configuration(q)?;
    Ok(min_singularity_distance(model, q, specs)? > params.d0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GateOutcome {
    pub config: Vec<f64>,
    pub iterations: usize,
    pub accepted: bool,
}

/// Replaces a rejected target by `q + D₀ q` until it is admitted or the
/// iteration budget runs out. Joint limits are not enforced.
pub fn gate_target(
    model: &RobotModel,
    q_d: &[f64],
    specs: &[SingularitySpec],
    params: &HandlingParams,
) -> Result<GateOutcome> {
    let mut q = q_d.to_vec();
    let mut iterations = 0;
    loop {
        if admit_node(model, &q, specs, params)? {
            return Ok(GateOutcome {
                config: q,
                iterations,
                accepted: true,
            });
        }
        if iterations == params.max_gate_iters {
            return Ok(GateOutcome {
                config: q,
                iterations,
                accepted: false,
            });
        }
        for x in &mut q {
            *x += params.d0 * *x;
        }
        iterations += 1;
    }
}
