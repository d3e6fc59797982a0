#![allow(dead_code)]

use dirac_step::scattering::IncidentState;
use dirac_step::StepParams;
use num_complex::Complex64;

pub fn reference(theta: f64) -> StepParams {
    StepParams::new(8.5, 1.0, 5.0, theta).unwrap()
}

const ORDER: usize = 16;

/// Gauss-Legendre nodes and weights on `[−1, 1]` by Newton iteration on
/// `P_n`.
fn gauss_legendre() -> ([f64; ORDER], [f64; ORDER]) {
    let n = ORDER;
    let mut nodes = [0.0; ORDER];
    let mut weights = [0.0; ORDER];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut derivative = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            derivative = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / derivative;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * derivative * derivative);
    }
    (nodes, weights)
}

/// Composite Gauss-Legendre quadrature over `panels` equal pieces of
/// `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
    let (nodes, weights) = gauss_legendre();
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|j| {
            let mid = a + (j as f64 + 0.5) * h;
            nodes
                .iter()
                .zip(&weights)
                .map(|(x, w)| w * f(mid + 0.5 * h * x))
                .sum::<f64>()
                * 0.5
                * h
        })
        .sum()
}

/// Integral over `[0, ∞)` of a function decaying like `e^{−2κz}`, cut where
/// the tail is below `e^{−60}`.
pub fn integrate_evanescent<F: Fn(f64) -> f64>(f: &F, kappa: f64) -> f64 {
    integrate(f, 0.0, 30.0 / kappa, 24)
}

/// `cos(θ/2)|↑⟩ + i s sin(θ/2)|↓⟩` with `s = ±1`.
pub fn helicity_superposition(theta: f64, sign: f64) -> IncidentState {
    IncidentState {
        up: Complex64::from((0.5 * theta).cos()),
        down: Complex64::new(0.0, sign * (0.5 * theta).sin()),
    }
}
