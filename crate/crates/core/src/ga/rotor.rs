use nalgebra::{Matrix3, Vector3};

use super::{AlgebraDim, Multivector};
use crate::error::{Error, Result};

/// Tolerance for unit-norm and orthonormality checks.
pub const UNIT_TOL: f64 = 1e-10;
/// Below this scalar magnitude the bivector part decides the canonical sign.
const SIGN_TIE_TOL: f64 = 1e-12;
/// `‖1 + Σ f_i e_i‖` below this switches to the half-turn construction.
const FRAME_DEGENERACY_TOL: f64 = 1e-8;
/// Triads are accepted as orthonormal within this tolerance.
const FRAME_TOL: f64 = 1e-8;

const BIVECTOR_MASKS: [usize; 3] = [0b011, 0b101, 0b110];

/// Unit even element of `G_3` acting on vectors by `x ↦ R x R̃`.
///
/// Always held in canonical sign: scalar part `>= 0`, and when the scalar part
/// is within `1e-12` of zero, the first nonzero bivector coefficient (in the
/// order `e12, e13, e23`) is positive. `R` and `-R` encode the same rotation,
/// so fixing the sign makes coefficient differences between rotors meaningful.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Rotor3 {
    inner: Multivector,
}

fn canonicalize(mv: Multivector) -> Multivector {
    let s = mv.scalar_part();
    let flip = if s.abs() > SIGN_TIE_TOL {
        s < 0.0
    } else {
        BIVECTOR_MASKS
            .iter()
            .map(|&m| mv.coeff(m))
            .find(|c| c.abs() > SIGN_TIE_TOL)
            .is_some_and(|c| c < 0.0)
    };
    if flip {
        -mv
    } else {
        mv
    }
}

impl Rotor3 {
    pub fn identity() -> Self {
        Rotor3 {
            inner: Multivector::scalar(AlgebraDim::G3, 1.0),
        }
    }

    /// Validates `R R̃ = 1` and the even-grade restriction, then canonicalizes.
    pub fn from_multivector(mv: Multivector) -> Result<Self> {
        if mv.dim() != AlgebraDim::G3 {
            return Err(Error::DimensionMismatch {
                left: mv.dim().get(),
                right: 3,
            });
        }
        if !mv.is_finite() {
            return Err(Error::NonFinite);
        }
        if mv.max_outside_grades(&[0, 2]) > SIGN_TIE_TOL {
            return Err(Error::NotARotor("odd-grade component"));
        }
        let unit = mv * mv.reverse() - Multivector::scalar(AlgebraDim::G3, 1.0);
        if unit.norm() > UNIT_TOL {
            return Err(Error::NotARotor("R R~ differs from 1"));
        }
        Ok(Rotor3 {
            inner: canonicalize(mv),
        })
    }

    /// Normalizes a nonzero even element and canonicalizes its sign.
    fn from_even_unnormalized(mv: Multivector) -> Result<Self> {
        let n = mv.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotARotor("zero even element"));
        }
        Self::from_multivector(mv.scale(1.0 / n))
    }

    /// `cos(θ/2) − B sin(θ/2)`: rotation by `theta` in the oriented plane `B`.
    ///
    /// With `B = e12` and `theta = π/2`, `e1` is carried to `e2`.
    pub fn from_plane_angle(plane: &Multivector, theta: f64) -> Result<Self> {
        if plane.dim() != AlgebraDim::G3 || plane.max_outside_grades(&[2]) > SIGN_TIE_TOL {
            return Err(Error::NotUnitBivector);
        }
        if (plane.norm() - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnitBivector);
        }
        let half = 0.5 * theta;
        let mv = Multivector::scalar(AlgebraDim::G3, libm::cos(half))
            - plane.scale(libm::sin(half));
        Self::from_multivector(mv)
    }

    /// Rotor taking the orthonormal triad `from` onto `to`, i.e.
    /// `R from[i] R̃ = to[i]`.
    ///
    /// Built as the normalization of `1 + Σ to_i from^i`, where `from^i` is the
    /// reciprocal frame (equal to `from_i` for an orthonormal triad). For a
    /// half-turn that sum vanishes; the rotor is then `-B` for the unit plane
    /// `B` orthogonal to the rotation axis.
    pub fn between_frames(from: &[Vector3<f64>; 3], to: &[Vector3<f64>; 3]) -> Result<Self> {
        check_triad(from)?;
        check_triad(to)?;
        let mut sum = Multivector::scalar(AlgebraDim::G3, 1.0);
        for (e, f) in from.iter().zip(to) {
            sum = sum + Multivector::from_vector3(f) * Multivector::from_vector3(e);
        }
        let rotor = if sum.norm() < FRAME_DEGENERACY_TOL {
            half_turn(from, to)?
        } else {
            Self::from_even_unnormalized(sum)?
        };
        let worst = from
            .iter()
            .zip(to)
            .map(|(e, f)| (rotor.rotate_vector(e) - f).norm())
            .fold(0.0, f64::max);
        if worst > 1e-6 {
            return Err(Error::DegenerateFrames);
        }
        Ok(rotor)
    }

    /// Rotor whose sandwich maps the world basis onto the columns of `rotation`.
    pub fn from_rotation_matrix(rotation: &Matrix3<f64>) -> Result<Self> {
        let world = [Vector3::x(), Vector3::y(), Vector3::z()];
        let cols = [
            rotation.column(0).into_owned(),
            rotation.column(1).into_owned(),
            rotation.column(2).into_owned(),
        ];
        Self::between_frames(&world, &cols)
    }

    #[inline]
    pub fn as_multivector(&self) -> &Multivector {
        &self.inner
    }

    #[inline]
    pub fn scalar(&self) -> f64 {
        self.inner.scalar_part()
    }

    /// Bivector coefficients in the order `e12, e13, e23`.
    pub fn bivector(&self) -> [f64; 3] {
        BIVECTOR_MASKS.map(|m| self.inner.coeff(m))
    }

    /// `R x R̃`.
    pub fn sandwich(&self, x: &Multivector) -> Result<Multivector> {
        let left = self.inner.geometric_product(x)?;
        left.geometric_product(&self.inner.reverse())
    }

    pub fn rotate_vector(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.sandwich(&Multivector::from_vector3(v))
            .and_then(|m| m.to_vector3())
            .expect("G_3 rotor acting on a G_3 vector")
    }

    /// Rotation matrix whose columns are the images of the world basis.
    pub fn to_matrix(&self) -> Matrix3<f64> {
        Matrix3::from_columns(&[
            self.rotate_vector(&Vector3::x()),
            self.rotate_vector(&Vector3::y()),
            self.rotate_vector(&Vector3::z()),
        ])
    }

    /// `self * other` (apply `other` first), renormalized and canonicalized.
    pub fn compose(&self, other: &Rotor3) -> Rotor3 {
        Self::from_even_unnormalized(self.inner * other.inner)
            .expect("product of rotors is a rotor")
    }

    /// Canonical representative of `R̃`.
    pub fn inverse(&self) -> Rotor3 {
        Rotor3 {
            inner: canonicalize(self.inner.reverse()),
        }
    }
}

fn check_triad(t: &[Vector3<f64>; 3]) -> Result<()> {
    for i in 0..3 {
        if !t[i].iter().all(|c| c.is_finite()) {
            return Err(Error::NonFinite);
        }
        for j in 0..3 {
            let expect = if i == j { 1.0 } else { 0.0 };
            if (t[i].dot(&t[j]) - expect).abs() > FRAME_TOL {
                return Err(Error::NotOrthonormal);
            }
        }
    }
    if (t[0].cross(&t[1]).dot(&t[2]) - 1.0).abs() > FRAME_TOL {
        return Err(Error::NotOrthonormal);
    }
    Ok(())
}

/// Rotor for a rotation by π mapping `from` to `to`.
fn half_turn(from: &[Vector3<f64>; 3], to: &[Vector3<f64>; 3]) -> Result<Rotor3> {
    // Q = Σ to_i from_iᵀ; for a half-turn about n, (Q + I)/2 = n nᵀ.
    let q = (0..3).fold(Matrix3::zeros(), |acc, i| acc + to[i] * from[i].transpose());
    let outer = (q + Matrix3::identity()) * 0.5;
    let k = (0..3)
        .max_by(|&a, &b| outer[(a, a)].total_cmp(&outer[(b, b)]))
        .unwrap_or(0);
    let axis = outer.column(k).into_owned();
    let len = axis.norm();
    if len < 1e-6 {
        return Err(Error::DegenerateFrames);
    }
    let plane = Multivector::from_vector3(&(axis / len)).dual();
    Rotor3::from_plane_angle(&plane, core::f64::consts::PI)
}
