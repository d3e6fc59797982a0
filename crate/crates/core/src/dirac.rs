//! Dirac matrices in the standard representation and four-spinor algebra.

use std::ops::{Add, Mul};

use nalgebra::{Matrix2, Matrix4, Vector4};
use num_complex::Complex64;
use serde::Serialize;

pub type Matrix = Matrix4<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn pauli_x() -> Matrix2<Complex64> {
    Matrix2::new(ZERO, ONE, ONE, ZERO)
}

pub fn pauli_y() -> Matrix2<Complex64> {
    Matrix2::new(ZERO, -I, I, ZERO)
}

pub fn pauli_z() -> Matrix2<Complex64> {
    Matrix2::new(ONE, ZERO, ZERO, -ONE)
}

fn blocks(
    upper_left: Matrix2<Complex64>,
    upper_right: Matrix2<Complex64>,
    lower_left: Matrix2<Complex64>,
    lower_right: Matrix2<Complex64>,
) -> Matrix {
    let mut out = Matrix::zeros();
    out.fixed_view_mut::<2, 2>(0, 0).copy_from(&upper_left);
    out.fixed_view_mut::<2, 2>(0, 2).copy_from(&upper_right);
    out.fixed_view_mut::<2, 2>(2, 0).copy_from(&lower_left);
    out.fixed_view_mut::<2, 2>(2, 2).copy_from(&lower_right);
    out
}

fn off_diagonal(sigma: Matrix2<Complex64>) -> Matrix {
    blocks(Matrix2::zeros(), sigma, sigma, Matrix2::zeros())
}

pub fn alpha_x() -> Matrix {
    off_diagonal(pauli_x())
}

pub fn alpha_y() -> Matrix {
    off_diagonal(pauli_y())
}

pub fn alpha_z() -> Matrix {
    off_diagonal(pauli_z())
}

pub fn beta() -> Matrix {
    blocks(
        Matrix2::identity(),
        Matrix2::zeros(),
        Matrix2::zeros(),
        -Matrix2::identity(),
    )
}

/// Spin operator `Σ_z = ½ diag(σ_z, σ_z)`.
pub fn sigma_z() -> Matrix {
    let half = pauli_z() * Complex64::new(0.5, 0.0);
    blocks(half, Matrix2::zeros(), Matrix2::zeros(), half)
}

/// Free Dirac Hamiltonian `α·p + β m` for momentum `(0, p_y, p_z)`.
pub fn hamiltonian(p_y: f64, p_z: f64, mass: f64) -> Matrix {
    alpha_y() * Complex64::from(p_y) + alpha_z() * Complex64::from(p_z) + beta() * Complex64::from(mass)
}

/// A four-component Dirac spinor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Spinor(pub [Complex64; 4]);

impl Spinor {
    pub const ZERO: Spinor = Spinor([ZERO; 4]);

    pub fn to_vector(self) -> Vector4<Complex64> {
        Vector4::from(self.0)
    }

    pub fn from_vector(v: &Vector4<Complex64>) -> Self {
        Spinor([v[0], v[1], v[2], v[3]])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `⟨self| op |other⟩`.
    pub fn bracket(&self, op: &Matrix, other: &Spinor) -> Complex64 {
        self.to_vector().dotc(&(op * other.to_vector()))
    }

    pub fn expectation(&self, op: &Matrix) -> f64 {
        self.bracket(op, self).re
    }

    /// Dirac current `ψ†α ψ`.
    pub fn current(&self) -> CurrentVector {
        CurrentVector {
            x: self.expectation(&alpha_x()),
            y: self.expectation(&alpha_y()),
            z: self.expectation(&alpha_z()),
        }
    }

    /// Interference current `Re[a†α b + b†α a]` between two spinors.
    pub fn cross_current(&self, other: &Spinor) -> CurrentVector {
        let term = |op: &Matrix| 2.0 * self.bracket(op, other).re;
        CurrentVector {
            x: term(&alpha_x()),
            y: term(&alpha_y()),
            z: term(&alpha_z()),
        }
    }

    pub fn max_abs_diff(&self, other: &Spinor) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Add for Spinor {
    type Output = Spinor;

    fn add(self, rhs: Spinor) -> Spinor {
        Spinor(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl Mul<Spinor> for Complex64 {
    type Output = Spinor;

    fn mul(self, rhs: Spinor) -> Spinor {
        Spinor(rhs.0.map(|c| self * c))
    }
}

/// Real current components at one position.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct CurrentVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Add for CurrentVector {
    type Output = CurrentVector;

    fn add(self, rhs: CurrentVector) -> CurrentVector {
        CurrentVector {
            x: self.x + rhs.x,
            y: self.y + rhs.y,
            z: self.z + rhs.z,
        }
    }
}
