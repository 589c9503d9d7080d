//! Singularity tests built on exterior products of joint twists.
//!
//! A set of vectors is linearly dependent exactly when their wedge vanishes,
//! so the chain is singular when the wedge of its twists (or of every 6-subset
//! for a redundant chain) is zero. Magnitudes are reported normalized by the
//! product of the factor norms, which makes them independent of the length
//! unit and bounded by 1.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::ga::{AlgebraDim, Multivector};
use crate::kinematics::{
    forward_kinematics, twists_about, wrist_center, JacobianMatrix, RobotModel, Twist6,
};

/// Default threshold on normalized wedge magnitudes.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Largest grid a sweep may enumerate.
pub const MAX_GRID_POINTS: u128 = 10_000_000;
/// A factor shorter than this fraction of the longest vector in its family
/// counts as zero, and any wedge containing it vanishes.
const ZERO_VECTOR_REL: f64 = 1e-12;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum SingularityKind {
    None,
    Position,
    Orientation,
    General,
}

impl SingularityKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SingularityKind::None => "none",
            SingularityKind::Position => "position",
            SingularityKind::Orientation => "orientation",
            SingularityKind::General => "general",
        }
    }
}

/// Outcome of one singularity test.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularityVerdict {
    pub singular: bool,
    pub kind: SingularityKind,
    /// Joint index sets (zero-based) whose wedge vanished; empty unless singular.
    pub witness: Vec<Vec<usize>>,
    /// Normalized magnitude deciding the verdict: `singular ⇔ measure < tol`.
    pub measure: f64,
}

impl SingularityVerdict {
    fn from_measures(kind: SingularityKind, measures: Vec<(Vec<usize>, f64)>, tol: f64) -> Self {
        // Every combination must vanish, so the largest one decides.
        let measure = measures.iter().map(|(_, m)| *m).fold(0.0, f64::max);
        let singular = measure < tol;
        let witness = if singular {
            measures.into_iter().map(|(c, _)| c).collect()
        } else {
            Vec::new()
        };
        SingularityVerdict {
            singular,
            kind: if singular { kind } else { SingularityKind::None },
            witness,
            measure,
        }
    }
}

/// `G_6` image of a twist: angular part on `e1..e3`, linear part on `e4..e6`.
pub fn twist_to_g6(t: &Twist6) -> Multivector {
    Multivector::vector(AlgebraDim::G6, &t.to_array()).expect("six finite components")
}

/// Coefficient of `e1∧…∧e6` in `ξ_1 ∧ … ∧ ξ_6`, i.e. `det[ξ_1 … ξ_6]`.
pub fn blade_coefficient(twists: &[Twist6]) -> Result<f64> {
    if twists.len() != 6 {
        return Err(Error::TwistCount {
            expected: 6,
            got: twists.len(),
        });
    }
    let vs: Vec<Multivector> = twists.iter().map(twist_to_g6).collect();
    let blade = Multivector::wedge_many(AlgebraDim::G6, &vs)?;
    Ok(blade.coeff(AlgebraDim::G6.pseudoscalar_mask()))
}

/// `‖v_1 ∧ … ∧ v_k‖ / Π‖v_i‖`, with factors below `floor` treated as zero.
fn normalized_wedge(dim: AlgebraDim, vectors: &[&Multivector], floor: f64) -> f64 {
    let mut denom = 1.0;
    for v in vectors {
        let n = v.norm();
        if n <= floor || n == 0.0 {
            return 0.0;
        }
        denom *= n;
    }
    let factors: Vec<Multivector> = vectors.iter().map(|v| **v).collect();
    let blade = Multivector::wedge_many(dim, &factors).expect("factors share one algebra");
    blade.norm() / denom
}

/// Normalized magnitude of every `k`-subset of `vectors`, in lexicographic order.
fn subset_measures(dim: AlgebraDim, vectors: &[Multivector], k: usize) -> Vec<(Vec<usize>, f64)> {
    let scale = vectors.iter().map(Multivector::norm).fold(0.0, f64::max);
    let floor = ZERO_VECTOR_REL * scale;
    combinations(vectors.len(), k)
        .into_iter()
        .map(|c| {
            let picked: Vec<&Multivector> = c.iter().map(|&i| &vectors[i]).collect();
            let m = normalized_wedge(dim, &picked, floor);
            (c, m)
        })
        .collect()
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(pos) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[pos] += 1;
        for j in pos + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn chain_twists(model: &RobotModel, q: &[f64]) -> Result<Vec<Twist6>> {
    let frames = forward_kinematics(model, q)?;
    let ee = frames[frames.len() - 1].translation;
    Ok(twists_about(model, &frames, &ee))
}

/// Rank test on arbitrary twists: the wedge of every `min(n, 6)`-subset must
/// vanish. `measure` is the largest normalized magnitude over the subsets.
pub fn rank_verdict(twists: &[Twist6], tol: f64) -> SingularityVerdict {
    let vs: Vec<Multivector> = twists.iter().map(twist_to_g6).collect();
    let measures = subset_measures(AlgebraDim::G6, &vs, twists.len().min(6));
    SingularityVerdict::from_measures(SingularityKind::General, measures, tol)
}

/// Six-joint test: singular iff `ξ_1 ∧ … ∧ ξ_6 = 0`.
pub fn is_singular_nonredundant(model: &RobotModel, q: &[f64], tol: f64) -> Result<SingularityVerdict> {
    if model.dof() != 6 {
        return Err(Error::UnsupportedModel("exactly six joints"));
    }
    Ok(rank_verdict(&chain_twists(model, q)?, tol))
}

/// Redundant chains: singular iff the wedge of every 6-subset of twists
/// vanishes. `measure` is the largest normalized magnitude over the subsets.
pub fn is_singular_redundant(model: &RobotModel, q: &[f64], tol: f64) -> Result<SingularityVerdict> {
    if model.dof() <= 6 {
        return Err(Error::UnsupportedModel("more than six joints"));
    }
    Ok(rank_verdict(&chain_twists(model, q)?, tol))
}

/// Chains with fewer than six joints: singular iff the `n` twists are
/// dependent, i.e. `ξ_1 ∧ … ∧ ξ_n = 0`.
pub fn is_singular_deficient(model: &RobotModel, q: &[f64], tol: f64) -> Result<SingularityVerdict> {
    if model.dof() >= 6 {
        return Err(Error::UnsupportedModel("fewer than six joints"));
    }
    Ok(rank_verdict(&chain_twists(model, q)?, tol))
}

/// Rank test over all twists, dispatched on the number of joints.
pub fn is_singular(model: &RobotModel, q: &[f64], tol: f64) -> Result<SingularityVerdict> {
    match model.dof() {
        6 => is_singular_nonredundant(model, q, tol),
        n if n > 6 => is_singular_redundant(model, q, tol),
        _ => is_singular_deficient(model, q, tol),
    }
}

fn require_wrist(model: &RobotModel) -> Result<()> {
    if !model.spherical_wrist() || model.dof() < 6 {
        return Err(Error::UnsupportedModel(
            "a spherical-wrist model with at least six joints",
        ));
    }
    Ok(())
}

/// Linear parts `s_i = z_i × (w − o_i)` of the arm joints about the wrist
/// center `w` (`z_i` itself for a prismatic joint).
pub fn position_vectors(model: &RobotModel, q: &[f64]) -> Result<Vec<Vector3<f64>>> {
    require_wrist(model)?;
    let frames = forward_kinematics(model, q)?;
    let w = wrist_center(model, &frames)?;
    let arm = model.dof() - 3;
    Ok(twists_about(model, &frames, &w)
        .into_iter()
        .take(arm)
        .map(|t| t.linear)
        .collect())
}

/// Position singularity of a spherical-wrist chain: every triple
/// `s_i ∧ s_j ∧ s_k` of arm vectors vanishes in `G_3`.
pub fn position_singular(model: &RobotModel, q: &[f64], tol: f64) -> Result<SingularityVerdict> {
    let s: Vec<Multivector> = position_vectors(model, q)?
        .iter()
        .map(Multivector::from_vector3)
        .collect();
    let measures = subset_measures(AlgebraDim::G3, &s, 3);
    Ok(SingularityVerdict::from_measures(SingularityKind::Position, measures, tol))
}

/// Orientation singularity: the last three joint axes are coplanar,
/// `z_{n−2} ∧ z_{n−1} ∧ z_n = 0`.
pub fn orientation_singular(model: &RobotModel, q: &[f64], tol: f64) -> Result<SingularityVerdict> {
    require_wrist(model)?;
    let frames = forward_kinematics(model, q)?;
    let n = model.dof();
    let axes: Vec<Multivector> = (n - 3..n)
        .map(|i| Multivector::from_vector3(&frames[i - 1].z_axis()))
        .collect();
    let refs: Vec<&Multivector> = axes.iter().collect();
    let m = normalized_wedge(AlgebraDim::G3, &refs, ZERO_VECTOR_REL);
    Ok(SingularityVerdict::from_measures(
        SingularityKind::Orientation,
        vec![((n - 3..n).collect(), m)],
        tol,
    ))
}

/// Classical indices from the singular values of `J`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ManipulabilityIndices {
    /// Product of the singular values, `sqrt(det(J Jᵀ))` or `sqrt(det(JᵀJ))`.
    pub w_m: f64,
    /// `σ_max / σ_min`; infinite once `σ_min < 1e-300`.
    pub w_c: f64,
    pub sigma_min: f64,
    pub sigma_max: f64,
}

pub fn manipulability_indices(j: &JacobianMatrix) -> ManipulabilityIndices {
    let sv = j.matrix().clone().svd(false, false).singular_values;
    let sigma_max = sv.iter().copied().fold(0.0, f64::max);
    let sigma_min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let w_m = sv.iter().product();
    let w_c = if sigma_min < 1e-300 {
        f64::INFINITY
    } else {
        sigma_max / sigma_min
    };
    ManipulabilityIndices {
        w_m,
        w_c,
        sigma_min,
        sigma_max,
    }
}

/// Every applicable test at one configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct Analysis {
    /// Decision for the model: the decoupled wrist tests for spherical-wrist
    /// chains, the rank test over all twists otherwise.
    pub verdict: SingularityVerdict,
    pub position: Option<SingularityVerdict>,
    pub orientation: Option<SingularityVerdict>,
    pub full: SingularityVerdict,
    pub indices: ManipulabilityIndices,
}

/// Runs the model-appropriate tests plus the SVD indices.
///
/// With a spherical wrist the decision is `position ∨ orientation`; when both
/// hold the reported kind is `position`. The rank test over all twists is
/// always reported in `full`.
pub fn analyze(model: &RobotModel, q: &[f64], tol: f64) -> Result<Analysis> {
    model.check_configuration(q)?;
    let full = is_singular(model, q, tol)?;
    let j = crate::kinematics::jacobian(model, q)?;
    let indices = manipulability_indices(&j);
    if model.spherical_wrist() && model.dof() >= 6 {
        let pos = position_singular(model, q, tol)?;
        let ori = orientation_singular(model, q, tol)?;
        let measure = f64::min(pos.measure, ori.measure);
        let (kind, witness) = match (pos.singular, ori.singular) {
            (true, _) => (
                SingularityKind::Position,
                pos.witness.iter().chain(&ori.witness).cloned().collect(),
            ),
            (false, true) => (SingularityKind::Orientation, ori.witness.clone()),
            (false, false) => (SingularityKind::None, Vec::new()),
        };
        let verdict = SingularityVerdict {
            singular: pos.singular || ori.singular,
            kind,
            witness,
            measure,
        };
        Ok(Analysis {
            verdict,
            position: Some(pos),
            orientation: Some(ori),
            full,
            indices,
        })
    } else {
        Ok(Analysis {
            verdict: full.clone(),
            position: None,
            orientation: None,
            full,
            indices,
        })
    }
}

/// One free joint of a sweep, sampled at `min + k·step` while `<= max`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct SweepAxis {
    pub joint: usize,
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl SweepAxis {
    pub fn len(&self) -> u128 {
        if self.min > self.max {
            return 0;
        }
        // Absorb rounding so that an endpoint hit exactly by the step is kept.
        libm::floor((self.max - self.min) / self.step + 1e-9) as u128 + 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn value(&self, k: usize) -> f64 {
        self.min + k as f64 * self.step
    }
}

/// Grid over up to three free joints; the remaining joints take `base` values.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub axes: Vec<SweepAxis>,
    pub base: Vec<f64>,
    pub tol: f64,
}

/// One classified grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepSample {
    /// Position along each free axis.
    pub indices: Vec<usize>,
    pub q: Vec<f64>,
    pub analysis: Analysis,
}

impl SweepSpec {
    pub fn validate(&self, model: &RobotModel) -> Result<()> {
        model.check_configuration(&self.base)?;
        if self.axes.len() > 3 {
            return Err(Error::InvalidSweep(format!(
                "{} free joints, at most 3 allowed",
                self.axes.len()
            )));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidSweep("tolerance must be positive".into()));
        }
        for (k, a) in self.axes.iter().enumerate() {
            if a.joint >= model.dof() {
                return Err(Error::JointIndex {
                    index: a.joint,
                    joints: model.dof(),
                });
            }
            if self.axes[..k].iter().any(|b| b.joint == a.joint) {
                return Err(Error::InvalidSweep(format!(
                    "joint {} is swept twice",
                    a.joint + 1
                )));
            }
            if !(a.step > 0.0 && a.step.is_finite()) || !a.min.is_finite() || !a.max.is_finite() {
                return Err(Error::InvalidSweep(format!(
                    "joint {} needs finite bounds and a positive step",
                    a.joint + 1
                )));
            }
        }
        Ok(())
    }

    /// Number of grid points, rejecting grids above [`MAX_GRID_POINTS`].
    pub fn grid_len(&self) -> Result<usize> {
        let mut points: u128 = 1;
        for a in &self.axes {
            points = points.saturating_mul(a.len());
        }
        if points > MAX_GRID_POINTS {
            return Err(Error::GridTooLarge {
                points,
                limit: MAX_GRID_POINTS,
            });
        }
        Ok(points as usize)
    }

    /// Grid point `flat` in row-major order (first axis outermost).
    pub fn point(&self, flat: usize) -> (Vec<usize>, Vec<f64>) {
        let mut indices = vec![0usize; self.axes.len()];
        let mut rest = flat;
        for (slot, a) in indices.iter_mut().zip(&self.axes).rev() {
            let len = a.len() as usize;
            *slot = rest % len;
            rest /= len;
        }
        let mut q = self.base.clone();
        for (a, &k) in self.axes.iter().zip(&indices) {
            q[a.joint] = a.value(k);
        }
        (indices, q)
    }

    /// Classifies grid point `flat`.
    pub fn sample(&self, model: &RobotModel, flat: usize) -> Result<SweepSample> {
        let (indices, q) = self.point(flat);
        let analysis = analyze(model, &q, self.tol)?;
        Ok(SweepSample {
            indices,
            q,
            analysis,
        })
    }
}

/// Lazily classifies every grid point in row-major order.
pub fn sweep_classify<'a>(
    model: &'a RobotModel,
    spec: &'a SweepSpec,
) -> Result<impl Iterator<Item = Result<SweepSample>> + 'a> {
    spec.validate(model)?;
    let len = spec.grid_len()?;
    Ok((0..len).map(move |k| spec.sample(model, k)))
}
