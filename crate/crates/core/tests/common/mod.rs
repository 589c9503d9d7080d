#![allow(dead_code)]

use core::f64::consts::{FRAC_PI_2, PI};

use ga_singular_core::distance::SingularitySpec;
use ga_singular_core::kinematics::{JointSpec, RobotModel};
use rand::Rng;

/// Kuka LWR 4+ in millimetres, classic DH.
pub fn kuka() -> RobotModel {
    let alpha = [FRAC_PI_2, FRAC_PI_2, FRAC_PI_2, FRAC_PI_2, -FRAC_PI_2, FRAC_PI_2, 0.0];
    let offset = [0.0, FRAC_PI_2, 0.0, 0.0, 0.0, 0.0, 0.0];
    let d = [310.0, 0.0, 400.0, 0.0, -390.0, 0.0, 0.0];
    let joints = (0..7)
        .map(|i| JointSpec::revolute(0.0, alpha[i], d[i], offset[i]))
        .collect();
    RobotModel::new("kuka_lwr4", joints, true, "mm").unwrap()
}

pub fn kuka_specs() -> Vec<SingularitySpec> {
    vec![
        SingularitySpec::new("q4-zero", vec![(3, 0.0)]),
        SingularitySpec::new("q2-q3-half-pi", vec![(1, FRAC_PI_2), (2, FRAC_PI_2)]),
        SingularitySpec::new("q6-zero", vec![(5, 0.0)]),
    ]
}

/// 6R arm with nonzero offsets on every link.
pub fn generic_6r() -> RobotModel {
    let joints = vec![
        JointSpec::revolute(0.1, FRAC_PI_2, 0.4, 0.0),
        JointSpec::revolute(0.5, 0.2, 0.05, 0.3),
        JointSpec::revolute(0.1, FRAC_PI_2, 0.1, 0.0),
        JointSpec::revolute(0.05, -FRAC_PI_2, 0.45, 0.0),
        JointSpec::revolute(0.02, FRAC_PI_2, 0.03, 0.0),
        JointSpec::revolute(0.0, 0.0, 0.1, 0.0),
    ];
    RobotModel::new("generic_6r", joints, false, "m").unwrap()
}

pub fn random_q<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-PI..PI)).collect()
}

pub fn sigma_ratio(model: &RobotModel, q: &[f64]) -> (f64, f64) {
    let j = ga_singular_core::kinematics::jacobian(model, q).unwrap();
    let sv = j.matrix().clone().svd(false, false).singular_values;
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    (min, max)
}
