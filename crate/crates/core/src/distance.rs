//! Rotor distances between configurations.
//!
//! Joint `i` contributes `D_i = ‖R_i(q₁) − R_i(q₂)‖`, where `R_i` is the
//! canonical orientation rotor of the frame carried by that joint. A
//! configuration distance sums these terms; the distance to a singularity
//! sums them over the joints the singularity involves.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::ga::Rotor3;
use crate::kinematics::{frame_rotor, RobotModel};

/// A singular set fixing some joints (zero-based) at given values.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularitySpec {
    pub name: String,
    /// `(joint, value)` pairs with strictly increasing joints.
    pub values: Vec<(usize, f64)>,
}

impl SingularitySpec {
    pub fn new(name: impl Into<String>, values: Vec<(usize, f64)>) -> Self {
        SingularitySpec {
            name: name.into(),
            values,
        }
    }

    pub fn joints(&self) -> impl Iterator<Item = usize> + '_ {
        self.values.iter().map(|(j, _)| *j)
    }

    pub fn validate(&self, model: &RobotModel) -> Result<()> {
        let fail = |reason: String| Error::InvalidSingularitySpec {
            name: self.name.clone(),
            reason,
        };
        if self.values.is_empty() {
            return Err(fail("no joints involved".into()));
        }
        for (k, &(j, v)) in self.values.iter().enumerate() {
            if j >= model.dof() {
                return Err(fail(format!(
                    "joint {} does not exist in a {}-joint chain",
                    j + 1,
                    model.dof()
                )));
            }
            if k > 0 && self.values[k - 1].0 >= j {
                return Err(fail("joints must be strictly increasing".into()));
            }
            if !v.is_finite() {
                return Err(fail(format!("joint {} has a non-finite value", j + 1)));
            }
        }
        Ok(())
    }

    /// `q` with the involved joints overwritten by their singular values.
    pub fn instantiate(&self, q: &[f64]) -> Vec<f64> {
        let mut qs = q.to_vec();
        for &(j, v) in &self.values {
            qs[j] = v;
        }
        qs
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistanceReport {
    pub total: f64,
    /// `(joint, D_i)` in joint order.
    pub per_joint: Vec<(usize, f64)>,
}

impl DistanceReport {
    fn from_terms(per_joint: Vec<(usize, f64)>) -> Self {
        DistanceReport {
            total: per_joint.iter().map(|(_, d)| d).sum(),
            per_joint,
        }
    }
}

/// `‖R₁ − R₂‖`; both rotors are canonical by construction, so this lies in `[0, 2)`.
pub fn rotor_distance(r1: &Rotor3, r2: &Rotor3) -> f64 {
    (*r1.as_multivector() - *r2.as_multivector()).norm()
}

/// `D_i` for joint `i`, reading only `q1[..=i]` and `q2[..=i]`.
pub fn joint_distance(model: &RobotModel, q1: &[f64], q2: &[f64], i: usize) -> Result<f64> {
    let r1 = frame_rotor(model, q1, i)?;
    let r2 = frame_rotor(model, q2, i)?;
    Ok(rotor_distance(&r1, &r2))
}

/// Sum of `D_i` over every joint.
pub fn config_distance(model: &RobotModel, q1: &[f64], q2: &[f64]) -> Result<DistanceReport> {
    model.check_configuration(q1)?;
    model.check_configuration(q2)?;
    let terms = (0..model.dof())
        .map(|i| joint_distance(model, q1, q2, i).map(|d| (i, d)))
        .collect::<Result<Vec<_>>>()?;
    Ok(DistanceReport::from_terms(terms))
}

/// Sum of `D_i(q, q_s)` over the joints involved in `spec`, where `q_s` is `q`
/// with those joints moved to their singular values.
pub fn distance_to_singularity(
    model: &RobotModel,
    q: &[f64],
    spec: &SingularitySpec,
) -> Result<DistanceReport> {
    model.check_configuration(q)?;
    spec.validate(model)?;
    let qs = spec.instantiate(q);
    let terms = spec
        .joints()
        .map(|i| joint_distance(model, q, &qs, i).map(|d| (i, d)))
        .collect::<Result<Vec<_>>>()?;
    Ok(DistanceReport::from_terms(terms))
}
