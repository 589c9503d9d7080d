//! Denavit–Hartenberg forward kinematics, joint twists and the geometric
//! Jacobian of a serial chain.
//!
//! Joint indices in this API are zero-based. Joint `i` moves about the z-axis
//! of the frame produced by joints `0..i` (the world frame for joint 0), and
//! frame `i + 1` is the one reached after applying joint `i`.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::format;
use core::ops::Deref;

use nalgebra::{Dyn, Matrix3, OMatrix, Vector3, U6};

use crate::error::{Error, Result};
use crate::ga::Rotor3;

/// Upper bound on chain length.
pub const MAX_JOINTS: usize = 16;
const ORTHO_TOL: f64 = 1e-10;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum JointKind {
    Revolute,
    Prismatic,
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct JointLimits {
    pub min: f64,
    pub max: f64,
}

impl JointLimits {
    pub fn contains(&self, value: f64) -> bool {
        self.min <= value && value <= self.max
    }
}

/// Classic (distal) DH parameters of one joint.
///
/// The joint variable adds to `theta_offset` for a revolute joint and to `d`
/// for a prismatic one.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct JointSpec {
    pub kind: JointKind,
    pub a: f64,
    pub alpha: f64,
    pub d: f64,
    pub theta_offset: f64,
    pub limits: JointLimits,
}

impl JointSpec {
    /// Revolute joint with limits `[-π, π]`.
    pub fn revolute(a: f64, alpha: f64, d: f64, theta_offset: f64) -> Self {
        JointSpec {
            kind: JointKind::Revolute,
            a,
            alpha,
            d,
            theta_offset,
            limits: JointLimits {
                min: -core::f64::consts::PI,
                max: core::f64::consts::PI,
            },
        }
    }

    /// Prismatic joint with limits `[-1, 1]` in the model's length unit.
    pub fn prismatic(a: f64, alpha: f64, d: f64, theta_offset: f64) -> Self {
        JointSpec {
            kind: JointKind::Prismatic,
            limits: JointLimits { min: -1.0, max: 1.0 },
            ..Self::revolute(a, alpha, d, theta_offset)
        }
    }

    pub fn with_limits(mut self, min: f64, max: f64) -> Self {
        self.limits = JointLimits { min, max };
        self
    }

    fn validate(&self, index: usize) -> Result<()> {
        let values = [
            self.a,
            self.alpha,
            self.d,
            self.theta_offset,
            self.limits.min,
            self.limits.max,
        ];
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidModel(format!(
                "joint {} has a non-finite parameter",
                index + 1
            )));
        }
        if self.limits.min > self.limits.max {
            return Err(Error::InvalidModel(format!(
                "joint {} has limits.min > limits.max",
                index + 1
            )));
        }
        Ok(())
    }
}

/// An ordered serial chain.
#[derive(Clone, Debug, PartialEq)]
pub struct RobotModel {
    name: String,
    joints: Vec<JointSpec>,
    spherical_wrist: bool,
    length_unit: String,
}

impl RobotModel {
    /// Validates the chain.
    ///
    /// A spherical wrist needs at least four joints, the last three revolute,
    /// and wrist geometry whose three axes meet at the origin of frame `n - 2`:
    /// `a = 0` on the last three joints and `d = 0` on the middle wrist joint.
    pub fn new(
        name: impl Into<String>,
        joints: Vec<JointSpec>,
        spherical_wrist: bool,
        length_unit: impl Into<String>,
    ) -> Result<Self> {
        let n = joints.len();
        if n == 0 || n > MAX_JOINTS {
            return Err(Error::InvalidModel(format!(
                "joint count {n} is outside 1..={MAX_JOINTS}"
            )));
        }
        for (i, j) in joints.iter().enumerate() {
            j.validate(i)?;
        }
        if spherical_wrist {
            if n < 4 {
                return Err(Error::InvalidModel(
                    "a spherical wrist needs at least 4 joints".into(),
                ));
            }
            let wrist = &joints[n - 3..];
            if let Some(k) = wrist.iter().position(|j| j.kind != JointKind::Revolute) {
                return Err(Error::InvalidModel(format!(
                    "spherical wrist joint {} must be revolute",
                    n - 2 + k
                )));
            }
            if let Some(k) = wrist.iter().position(|j| j.a != 0.0) {
                return Err(Error::InvalidModel(format!(
                    "spherical wrist joint {} must have a = 0",
                    n - 2 + k
                )));
            }
            if wrist[1].d != 0.0 {
                return Err(Error::InvalidModel(format!(
                    "spherical wrist joint {} must have d = 0",
                    n - 1
                )));
            }
        }
        Ok(RobotModel {
            name: name.into(),
            joints,
            spherical_wrist,
            length_unit: length_unit.into(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn joints(&self) -> &[JointSpec] {
        &self.joints
    }

    pub fn dof(&self) -> usize {
        self.joints.len()
    }

    pub fn spherical_wrist(&self) -> bool {
        self.spherical_wrist
    }

    pub fn length_unit(&self) -> &str {
        &self.length_unit
    }

    pub fn check_configuration(&self, q: &[f64]) -> Result<()> {
        if q.len() != self.dof() {
            return Err(Error::ConfigurationLength {
                expected: self.dof(),
                got: q.len(),
            });
        }
        if q.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(())
    }

    /// Indices of joints whose value lies outside its limits.
    pub fn limit_violations(&self, q: &[f64]) -> Vec<usize> {
        self.joints
            .iter()
            .zip(q)
            .enumerate()
            .filter(|(_, (j, v))| !j.limits.contains(**v))
            .map(|(i, _)| i)
            .collect()
    }
}

/// Joint values `q_1 … q_n` (radians for revolute joints, model length unit
/// for prismatic ones).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Configuration(pub Vec<f64>);

impl Deref for Configuration {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for Configuration {
    fn from(q: Vec<f64>) -> Self {
        Configuration(q)
    }
}

/// Homogeneous rigid transform split into rotation and translation.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct RigidPose {
    pub rotation: Matrix3<f64>,
    pub translation: Vector3<f64>,
}

impl RigidPose {
    pub fn identity() -> Self {
        RigidPose {
            rotation: Matrix3::identity(),
            translation: Vector3::zeros(),
        }
    }

    /// `self · other`.
    pub fn compose(&self, other: &RigidPose) -> RigidPose {
        RigidPose {
            rotation: self.rotation * other.rotation,
            translation: self.rotation * other.translation + self.translation,
        }
    }

    pub fn z_axis(&self) -> Vector3<f64> {
        self.rotation.column(2).into_owned()
    }

    pub fn is_valid(&self) -> bool {
        is_rotation(&self.rotation)
    }
}

pub(crate) fn is_rotation(r: &Matrix3<f64>) -> bool {
    r.iter().all(|c| c.is_finite())
        && (r.transpose() * r - Matrix3::identity()).amax() <= ORTHO_TOL
        && (r.determinant() - 1.0).abs() <= ORTHO_TOL
}

/// Unit twist of one joint: angular part first, then linear part.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Twist6 {
    pub angular: Vector3<f64>,
    pub linear: Vector3<f64>,
}

impl Twist6 {
    pub fn new(angular: Vector3<f64>, linear: Vector3<f64>) -> Self {
        Twist6 { angular, linear }
    }

    /// `[ω; v]`.
    pub fn to_array(&self) -> [f64; 6] {
        [
            self.angular.x,
            self.angular.y,
            self.angular.z,
            self.linear.x,
            self.linear.y,
            self.linear.z,
        ]
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.angular.norm_squared() + self.linear.norm_squared())
    }
}

/// `6 × n` geometric Jacobian: rows 0–2 linear velocity, rows 3–5 angular.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobianMatrix(pub OMatrix<f64, U6, Dyn>);

impl JacobianMatrix {
    pub fn matrix(&self) -> &OMatrix<f64, U6, Dyn> {
        &self.0
    }

    pub fn ncols(&self) -> usize {
        self.0.ncols()
    }

    /// Column `i` read back as a twist (blocks swapped back).
    pub fn column_twist(&self, i: usize) -> Twist6 {
        let c = self.0.column(i);
        Twist6::new(
            Vector3::new(c[3], c[4], c[5]),
            Vector3::new(c[0], c[1], c[2]),
        )
    }
}

fn rot_z(theta: f64) -> Matrix3<f64> {
    let (s, c) = (libm::sin(theta), libm::cos(theta));
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

fn rot_x(alpha: f64) -> Matrix3<f64> {
    let (s, c) = (libm::sin(alpha), libm::cos(alpha));
    Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c)
}

/// `RotZ(θ) · TransZ(d) · TransX(a) · RotX(α)` for joint value `q`.
pub fn joint_transform(joint: &JointSpec, q: f64) -> RigidPose {
    let (theta, d) = match joint.kind {
        JointKind::Revolute => (joint.theta_offset + q, joint.d),
        JointKind::Prismatic => (joint.theta_offset, joint.d + q),
    };
    let (s, c) = (libm::sin(theta), libm::cos(theta));
    RigidPose {
        rotation: rot_z(theta) * rot_x(joint.alpha),
        translation: Vector3::new(joint.a * c, joint.a * s, d),
    }
}

/// Cumulative frames `1..=k` for the first `k = q.len()` joints.
pub fn forward_kinematics_prefix(model: &RobotModel, q: &[f64]) -> Result<Vec<RigidPose>> {
    if q.len() > model.dof() {
        return Err(Error::ConfigurationLength {
            expected: model.dof(),
            got: q.len(),
        });
    }
    let mut acc = RigidPose::identity();
    Ok(model
        .joints()
        .iter()
        .zip(q)
        .map(|(j, &qi)| {
            acc = acc.compose(&joint_transform(j, qi));
            acc
        })
        .collect())
}

/// Cumulative frames `1..=n`; the last one is the end-effector pose.
pub fn forward_kinematics(model: &RobotModel, q: &[f64]) -> Result<Vec<RigidPose>> {
    model.check_configuration(q)?;
    forward_kinematics_prefix(model, q)
}

/// Axis direction and a point on the axis of joint `i`, given the chain frames.
fn joint_axis(frames: &[RigidPose], i: usize) -> (Vector3<f64>, Vector3<f64>) {
    match i {
        0 => (Vector3::z(), Vector3::zeros()),
        _ => (frames[i - 1].z_axis(), frames[i - 1].translation),
    }
}

fn twist_about(kind: JointKind, z: Vector3<f64>, o: Vector3<f64>, reference: &Vector3<f64>) -> Twist6 {
    match kind {
        JointKind::Revolute => Twist6::new(z, z.cross(&(reference - o))),
        JointKind::Prismatic => Twist6::new(Vector3::zeros(), z),
    }
}

/// Twists of every joint about a common reference point.
pub(crate) fn twists_about(model: &RobotModel, frames: &[RigidPose], reference: &Vector3<f64>) -> Vec<Twist6> {
    model
        .joints()
        .iter()
        .enumerate()
        .map(|(i, j)| {
            let (z, o) = joint_axis(frames, i);
            twist_about(j.kind, z, o, reference)
        })
        .collect()
}

/// Unit twists of all joints, referenced to the end-effector origin.
pub fn twists(model: &RobotModel, q: &[f64]) -> Result<Vec<Twist6>> {
    let frames = forward_kinematics(model, q)?;
    let ee = frames[frames.len() - 1].translation;
    Ok(twists_about(model, &frames, &ee))
}

/// `(z_i, z_i × (o_n − o_i))` for a revolute joint, `(0, z_i)` for a
/// prismatic one, in world coordinates.
pub fn unit_twist(model: &RobotModel, q: &[f64], i: usize) -> Result<Twist6> {
    if i >= model.dof() {
        return Err(Error::JointIndex {
            index: i,
            joints: model.dof(),
        });
    }
    let frames = forward_kinematics(model, q)?;
    let ee = frames[frames.len() - 1].translation;
    let (z, o) = joint_axis(&frames, i);
    Ok(twist_about(model.joints()[i].kind, z, o, &ee))
}

/// Geometric Jacobian. Column `i` is [`unit_twist`] with its blocks swapped.
pub fn jacobian(model: &RobotModel, q: &[f64]) -> Result<JacobianMatrix> {
    let ts = twists(model, q)?;
    Ok(jacobian_from_twists(&ts))
}

pub fn jacobian_from_twists(ts: &[Twist6]) -> JacobianMatrix {
    let mut m = OMatrix::<f64, U6, Dyn>::zeros(ts.len());
    for (i, t) in ts.iter().enumerate() {
        let mut col = m.column_mut(i);
        col.fixed_rows_mut::<3>(0).copy_from(&t.linear);
        col.fixed_rows_mut::<3>(3).copy_from(&t.angular);
    }
    JacobianMatrix(m)
}

/// `Ad_f ξ`: `ω' = Rω`, `v' = Rv + p × (Rω)`.
pub fn adjoint_map(pose: &RigidPose, twist: &Twist6) -> Twist6 {
    let w = pose.rotation * twist.angular;
    Twist6::new(w, pose.rotation * twist.linear + pose.translation.cross(&w))
}

/// Expresses `J` in a rotated frame: both 3-row blocks are premultiplied by
/// `rotation`.
pub fn reframe_jacobian(j: &JacobianMatrix, rotation: &Matrix3<f64>) -> Result<JacobianMatrix> {
    if !is_rotation(rotation) {
        return Err(Error::NotOrthonormal);
    }
    let mut out = j.0.clone();
    for mut col in out.column_iter_mut() {
        let lin = rotation * col.fixed_rows::<3>(0);
        let ang = rotation * col.fixed_rows::<3>(3);
        col.fixed_rows_mut::<3>(0).copy_from(&lin);
        col.fixed_rows_mut::<3>(3).copy_from(&ang);
    }
    Ok(JacobianMatrix(out))
}

/// Orientation rotor of frame `i + 1`, the frame carried by joint `i`.
///
/// Only joints `0..=i` are read, so `q` may be a prefix of length `> i`.
pub fn frame_rotor(model: &RobotModel, q: &[f64], i: usize) -> Result<Rotor3> {
    if i >= model.dof() {
        return Err(Error::JointIndex {
            index: i,
            joints: model.dof(),
        });
    }
    if q.len() <= i {
        return Err(Error::ConfigurationLength {
            expected: i + 1,
            got: q.len(),
        });
    }
    let frames = forward_kinematics_prefix(model, &q[..=i])?;
    Rotor3::from_rotation_matrix(&frames[i].rotation)
}

/// Intersection point of the three wrist axes: the origin of frame `n − 2`.
pub fn wrist_center(model: &RobotModel, frames: &[RigidPose]) -> Result<Vector3<f64>> {
    if !model.spherical_wrist() {
        return Err(Error::UnsupportedModel("a spherical-wrist model"));
    }
    Ok(frames[model.dof() - 3].translation)
}
