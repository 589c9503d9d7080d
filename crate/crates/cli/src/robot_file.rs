//! TOML robot descriptions.
//!
//! ```toml
//! [robot]
//! name = "planar_3r"
//! length_unit = "m"
//! spherical_wrist = false
//!
//! [[joint]]
//! kind = "revolute"
//! a = 1.0
//! alpha = 0.0
//! d = 0.0
//! theta_offset = 0.0
//! limits = [-3.14159, 3.14159]
//!
//! [[singularity]]
//! name = "elbow"
//! joints = [2]
//! values = [0.0]
//! ```
//!
//! Joint numbers in the file are one-based. Angles are radians.

use std::ops::Range;

use ga_singular_core::distance::SingularitySpec;
use ga_singular_core::kinematics::{JointKind, JointSpec, RobotModel};
use serde::{Deserialize, Serialize};
use toml::Spanned;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RobotFileError {
    #[error("{line}:{column}: syntax error: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: invalid robot: {message}")]
    Semantic {
        line: usize,
        column: usize,
        message: String,
    },
}

impl RobotFileError {
    pub fn location(&self) -> (usize, usize) {
        match self {
            RobotFileError::Syntax { line, column, .. } | RobotFileError::Semantic { line, column, .. } => {
                (*line, *column)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
enum RawKind {
    Revolute,
    Prismatic,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    robot: Spanned<RawRobot>,
    #[serde(default)]
    joint: Vec<Spanned<RawJoint>>,
    #[serde(default)]
    singularity: Vec<Spanned<RawSingularity>>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawRobot {
    name: String,
    #[serde(default = "default_unit")]
    length_unit: String,
    #[serde(default)]
    spherical_wrist: bool,
}

fn default_unit() -> String {
    "m".into()
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawJoint {
    kind: RawKind,
    a: f64,
    alpha: f64,
    d: f64,
    #[serde(default)]
    theta_offset: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    limits: Option<[f64; 2]>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawSingularity {
    name: String,
    joints: Vec<usize>,
    values: Vec<f64>,
}

#[derive(Serialize)]
struct OutFile<'a> {
    robot: RawRobot,
    joint: Vec<RawJoint>,
    #[serde(skip_serializing_if = "<[_]>::is_empty")]
    singularity: &'a [RawSingularity],
}

/// A parsed robot file.
#[derive(Debug, Clone, PartialEq)]
pub struct RobotFile {
    pub model: RobotModel,
    pub singularities: Vec<SingularitySpec>,
}

impl RobotFile {
    pub fn spec(&self, name: &str) -> Option<&SingularitySpec> {
        self.singularities.iter().find(|s| s.name == name)
    }
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn semantic(text: &str, span: Range<usize>, message: String) -> RobotFileError {
    let (line, column) = line_column(text, span.start);
    RobotFileError::Semantic {
        line,
        column,
        message,
    }
}

pub fn parse_robot_file(text: &str) -> Result<RobotFile, RobotFileError> {
    let raw: RawFile = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((1, 1), |s| line_column(text, s.start));
        let message = e.message().trim().to_string();
        let message = if message.contains("missing field `robot`") {
            "missing [robot] metadata section".to_string()
        } else {
            message
        };
        RobotFileError::Syntax {
            line,
            column,
            message,
        }
    })?;

    let robot_span = raw.robot.span();
    let robot = raw.robot.into_inner();
    if raw.joint.is_empty() {
        return Err(semantic(text, robot_span, "no [[joint]] entries".into()));
    }

    let mut joints = Vec::with_capacity(raw.joint.len());
    for (i, spanned) in raw.joint.iter().enumerate() {
        let j = spanned.get_ref();
        let base = match j.kind {
            RawKind::Revolute => JointSpec::revolute(j.a, j.alpha, j.d, j.theta_offset),
            RawKind::Prismatic => JointSpec::prismatic(j.a, j.alpha, j.d, j.theta_offset),
        };
        let joint = match j.limits {
            Some([min, max]) => {
                if min > max {
                    return Err(semantic(
                        text,
                        spanned.span(),
                        format!("joint {}: limits min {min} exceeds max {max}", i + 1),
                    ));
                }
                base.with_limits(min, max)
            }
            None => base,
        };
        joints.push(joint);
    }

    let model = RobotModel::new(robot.name, joints, robot.spherical_wrist, robot.length_unit)
        .map_err(|e| semantic(text, robot_span.clone(), e.to_string()))?;

    let mut singularities: Vec<SingularitySpec> = Vec::new();
    for spanned in &raw.singularity {
        let s = spanned.get_ref();
        let fail = |m: String| semantic(text, spanned.span(), format!("singularity `{}`: {m}", s.name));
        if singularities.iter().any(|o| o.name == s.name) {
            return Err(fail("duplicate name".into()));
        }
        if s.joints.len() != s.values.len() {
            return Err(fail(format!(
                "{} joints but {} values",
                s.joints.len(),
                s.values.len()
            )));
        }
        if let Some(&bad) = s.joints.iter().find(|&&j| j == 0 || j > model.dof()) {
            return Err(fail(format!("joint {bad} is outside 1..={}", model.dof())));
        }
        let spec = SingularitySpec::new(
            s.name.clone(),
            s.joints.iter().map(|j| j - 1).zip(s.values.iter().copied()).collect(),
        );
        spec.validate(&model).map_err(|e| fail(e.to_string()))?;
        singularities.push(spec);
    }

    Ok(RobotFile {
        model,
        singularities,
    })
}

/// Renders a model and its singularities in the file format.
pub fn to_robot_file(model: &RobotModel, singularities: &[SingularitySpec]) -> String {
    let joint = model
        .joints()
        .iter()
        .map(|j| RawJoint {
            kind: match j.kind {
                JointKind::Revolute => RawKind::Revolute,
                JointKind::Prismatic => RawKind::Prismatic,
            },
            a: j.a,
            alpha: j.alpha,
            d: j.d,
            theta_offset: j.theta_offset,
            limits: Some([j.limits.min, j.limits.max]),
        })
        .collect();
    let singularity: Vec<RawSingularity> = singularities
        .iter()
        .map(|s| RawSingularity {
            name: s.name.clone(),
            joints: s.values.iter().map(|(j, _)| j + 1).collect(),
            values: s.values.iter().map(|(_, v)| *v).collect(),
        })
        .collect();
    let out = OutFile {
        robot: RawRobot {
            name: model.name().to_string(),
            length_unit: model.length_unit().to_string(),
            spherical_wrist: model.spherical_wrist(),
        },
        joint,
        singularity: &singularity,
    };
    toml::to_string(&out).expect("robot files always serialize")
}
