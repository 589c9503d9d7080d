//! Dense geometric algebra over Euclidean `G_n`, `1 <= n <= 6`.
//!
//! A [`Multivector`] stores one coefficient per basis blade. Blade `k` is the
//! bitmask blade: bit `i` set means `e_{i+1}` is a factor, factors in ascending
//! order. The grade of blade `k` is `k.count_ones()`.

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use nalgebra::Vector3;

use crate::error::{Error, Result};

mod rotor;

pub use rotor::Rotor3;

/// Largest supported algebra dimension.
pub const MAX_DIM: usize = 6;
/// Number of blades in `G_6`.
pub const MAX_BLADES: usize = 1 << MAX_DIM;

/// Sign of `e_a e_b` relative to `e_{a ^ b}` under the Euclidean metric.
///
/// Counts the transpositions needed to bring the concatenated factor lists
/// into ascending order. Repeated factors square to `+1`.
const fn reorder_sign(a: usize, b: usize) -> i8 {
    let mut a = a >> 1;
    let mut swaps = 0u32;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    if swaps & 1 == 0 {
        1
    } else {
        -1
    }
}

const fn sign_table() -> [[i8; MAX_BLADES]; MAX_BLADES] {
    let mut table = [[0i8; MAX_BLADES]; MAX_BLADES];
    let mut a = 0;
    while a < MAX_BLADES {
        let mut b = 0;
        while b < MAX_BLADES {
            table[a][b] = reorder_sign(a, b);
            b += 1;
        }
        a += 1;
    }
    table
}

static SIGNS: [[i8; MAX_BLADES]; MAX_BLADES] = sign_table();

/// Sign of the geometric product of basis blades `a` and `b`.
#[inline]
pub fn blade_sign(a: usize, b: usize) -> f64 {
    SIGNS[a][b] as f64
}

/// Grade of the basis blade with bitmask `mask`.
#[inline]
pub const fn blade_grade(mask: usize) -> usize {
    mask.count_ones() as usize
}

/// Dimension `n` of the underlying vector space.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgebraDim(u8);

impl AlgebraDim {
    pub const G3: AlgebraDim = AlgebraDim(3);
    pub const G6: AlgebraDim = AlgebraDim(6);

    pub fn new(n: usize) -> Result<Self> {
        if (1..=MAX_DIM).contains(&n) {
            Ok(AlgebraDim(n as u8))
        } else {
            Err(Error::InvalidDimension(n))
        }
    }

    #[inline]
    pub const fn get(self) -> usize {
        self.0 as usize
    }

    /// `2^n`.
    #[inline]
    pub const fn blade_count(self) -> usize {
        1 << self.0
    }

    /// Bitmask of `e_1 ∧ … ∧ e_n`.
    #[inline]
    pub const fn pseudoscalar_mask(self) -> usize {
        self.blade_count() - 1
    }
}

/// Element of `G_n`, stored densely.
///
/// Coefficients past `2^n` are always zero, so equality and norms never see
/// stale data.
#[derive(Copy, Clone, PartialEq)]
pub struct Multivector {
    dim: AlgebraDim,
    coeffs: [f64; MAX_BLADES],
}

impl Multivector {
    pub fn zero(dim: AlgebraDim) -> Self {
        Multivector {
            dim,
            coeffs: [0.0; MAX_BLADES],
        }
    }

    pub fn scalar(dim: AlgebraDim, value: f64) -> Self {
        let mut mv = Self::zero(dim);
        mv.coeffs[0] = value;
        mv
    }

    /// `value * e_mask`.
    pub fn blade(dim: AlgebraDim, mask: usize, value: f64) -> Result<Self> {
        if mask >= dim.blade_count() {
            return Err(Error::GradeOutOfRange {
                grade: blade_grade(mask),
                dim: dim.get(),
            });
        }
        let mut mv = Self::zero(dim);
        mv.coeffs[mask] = value;
        Ok(mv)
    }

    /// Basis vector `e_{i+1}` (zero-based `i`).
    pub fn basis_vector(dim: AlgebraDim, i: usize) -> Result<Self> {
        if i >= dim.get() {
            return Err(Error::GradeOutOfRange {
                grade: i + 1,
                dim: dim.get(),
            });
        }
        Self::blade(dim, 1 << i, 1.0)
    }

    /// Pseudoscalar `I = e_1 e_2 … e_n`.
    pub fn pseudoscalar(dim: AlgebraDim) -> Self {
        let mut mv = Self::zero(dim);
        mv.coeffs[dim.pseudoscalar_mask()] = 1.0;
        mv
    }

    /// Grade-1 element `Σ components[i] e_{i+1}`.
    pub fn vector(dim: AlgebraDim, components: &[f64]) -> Result<Self> {
        if components.len() != dim.get() {
            return Err(Error::CoefficientCount {
                expected: dim.get(),
                got: components.len(),
            });
        }
        let mut mv = Self::zero(dim);
        for (i, &c) in components.iter().enumerate() {
            if !c.is_finite() {
                return Err(Error::NonFinite);
            }
            mv.coeffs[1 << i] = c;
        }
        Ok(mv)
    }

    pub fn from_vector3(v: &Vector3<f64>) -> Self {
        let mut mv = Self::zero(AlgebraDim::G3);
        mv.coeffs[0b001] = v.x;
        mv.coeffs[0b010] = v.y;
        mv.coeffs[0b100] = v.z;
        mv
    }

    /// Grade-1 part of a `G_3` element as a 3-vector.
    pub fn to_vector3(&self) -> Result<Vector3<f64>> {
        self.expect_dim(AlgebraDim::G3)?;
        Ok(Vector3::new(
            self.coeffs[0b001],
            self.coeffs[0b010],
            self.coeffs[0b100],
        ))
    }

    /// Builds from all `2^n` coefficients in bitmask order.
    pub fn from_coeffs(dim: AlgebraDim, coeffs: &[f64]) -> Result<Self> {
        if coeffs.len() != dim.blade_count() {
            return Err(Error::CoefficientCount {
                expected: dim.blade_count(),
                got: coeffs.len(),
            });
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        let mut mv = Self::zero(dim);
        mv.coeffs[..coeffs.len()].copy_from_slice(coeffs);
        Ok(mv)
    }

    #[inline]
    pub fn dim(&self) -> AlgebraDim {
        self.dim
    }

    /// The `2^n` live coefficients.
    #[inline]
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs[..self.dim.blade_count()]
    }

    #[inline]
    pub fn coeff(&self, mask: usize) -> f64 {
        self.coeffs.get(mask).copied().unwrap_or(0.0)
    }

    #[inline]
    pub fn scalar_part(&self) -> f64 {
        self.coeffs[0]
    }

    fn expect_dim(&self, dim: AlgebraDim) -> Result<()> {
        if self.dim == dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                left: self.dim.get(),
                right: dim.get(),
            })
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        other.expect_dim(self.dim).map_err(|_| Error::DimensionMismatch {
            left: self.dim.get(),
            right: other.dim.get(),
        })
    }

    fn product_by<F>(&self, other: &Self, keep: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> bool,
    {
        self.check_same(other)?;
        let n = self.dim.blade_count();
        let mut out = Self::zero(self.dim);
        for a in 0..n {
            let ca = self.coeffs[a];
            if ca == 0.0 {
                continue;
            }
            for b in 0..n {
                let cb = other.coeffs[b];
                if cb == 0.0 || !keep(a, b) {
                    continue;
                }
                out.coeffs[a ^ b] += blade_sign(a, b) * ca * cb;
            }
        }
        Ok(out)
    }

    /// Clifford product `ab`.
    pub fn geometric_product(&self, other: &Self) -> Result<Self> {
        self.product_by(other, |_, _| true)
    }

    /// Exterior product `a ∧ b`: blade pairs sharing a factor vanish.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.product_by(other, |a, b| a & b == 0)
    }

    /// Left-to-right fold `x_1 ∧ x_2 ∧ … ∧ x_k`; the empty product is `1`.
    pub fn wedge_many(dim: AlgebraDim, factors: &[Multivector]) -> Result<Self> {
        let product = factors
            .iter()
            .try_fold(Self::scalar(dim, 1.0), |acc, x| acc.wedge(x))?;
        // v ∧ v = 0 holds exactly, while the rounded fold only cancels to ~ε.
        let repeated_vector = factors.iter().enumerate().any(|(i, a)| {
            a.max_outside_grades(&[1]) == 0.0 && factors[..i].iter().any(|b| b == a)
        });
        Ok(if repeated_vector {
            Self::zero(dim)
        } else {
            product
        })
    }

    /// `⟨A⟩_k`.
    pub fn grade_project(&self, k: usize) -> Result<Self> {
        if k > self.dim.get() {
            return Err(Error::GradeOutOfRange {
                grade: k,
                dim: self.dim.get(),
            });
        }
        let mut out = Self::zero(self.dim);
        for (mask, c) in self.coeffs().iter().enumerate() {
            if blade_grade(mask) == k {
                out.coeffs[mask] = *c;
            }
        }
        Ok(out)
    }

    /// Reversion: grade `k` scaled by `(-1)^{k(k-1)/2}`.
    pub fn reverse(&self) -> Self {
        let mut out = *self;
        for (mask, c) in out.coeffs.iter_mut().enumerate() {
            let k = blade_grade(mask);
            if (k * k.saturating_sub(1) / 2) % 2 == 1 {
                *c = -*c;
            }
        }
        out
    }

    /// Left multiplication by the pseudoscalar, `I A`.
    pub fn dual(&self) -> Self {
        Self::pseudoscalar(self.dim)
            .geometric_product(self)
            .expect("pseudoscalar shares the algebra of its operand")
    }

    /// `‖X‖ = sqrt(Σ α_j²)`, the coefficient-space Euclidean norm.
    pub fn norm(&self) -> f64 {
        libm::sqrt(self.norm_squared())
    }

    pub fn norm_squared(&self) -> f64 {
        self.coeffs().iter().map(|c| c * c).sum()
    }

    /// `⟨X X̃⟩_0`, evaluated through the product itself.
    pub fn reversion_norm_squared(&self) -> f64 {
        self.geometric_product(&self.reverse())
            .expect("same algebra")
            .scalar_part()
    }

    /// Largest coefficient magnitude outside the listed grades.
    pub fn max_outside_grades(&self, grades: &[usize]) -> f64 {
        self.coeffs()
            .iter()
            .enumerate()
            .filter(|(mask, _)| !grades.contains(&blade_grade(*mask)))
            .fold(0.0, |m, (_, c)| f64::max(m, c.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs().iter().all(|c| c.is_finite())
    }

    pub fn scale(&self, factor: f64) -> Self {
        let mut out = *self;
        out.coeffs.iter_mut().for_each(|c| *c *= factor);
        out
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = *self;
        for (o, c) in out.coeffs.iter_mut().zip(other.coeffs.iter()) {
            *o += c;
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-*other)
    }
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multivector(G{}; ", self.dim.get())?;
        fmt::Display::fmt(self, f)?;
        f.write_str(")")
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (mask, &c) in self.coeffs().iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            if mask != 0 {
                f.write_str("*e")?;
                for i in 0..MAX_DIM {
                    if mask & (1 << i) != 0 {
                        write!(f, "{}", i + 1)?;
                    }
                }
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl Neg for Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale(-1.0)
    }
}

// Operator forms panic on mismatched dimensions; use the `checked_*` and
// named product methods where dimensions are not known to agree.

impl Add for Multivector {
    type Output = Multivector;
    fn add(self, rhs: Multivector) -> Multivector {
        self.checked_add(&rhs).expect("mismatched algebra dimensions")
    }
}

impl Sub for Multivector {
    type Output = Multivector;
    fn sub(self, rhs: Multivector) -> Multivector {
        self.checked_sub(&rhs).expect("mismatched algebra dimensions")
    }
}

impl Mul for Multivector {
    type Output = Multivector;
    fn mul(self, rhs: Multivector) -> Multivector {
        self.geometric_product(&rhs)
            .expect("mismatched algebra dimensions")
    }
}

impl Mul<f64> for Multivector {
    type Output = Multivector;
    fn mul(self, rhs: f64) -> Multivector {
        self.scale(rhs)
    }
}

impl Mul<Multivector> for f64 {
    type Output = Multivector;
    fn mul(self, rhs: Multivector) -> Multivector {
        rhs.scale(self)
    }
}
