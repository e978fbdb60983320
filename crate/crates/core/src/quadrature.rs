//! Quadrature on `S^n` for the probability measure (total mass 1).
//!
//! `S^n` is sliced along the pole coordinate `u = b_n`:
//! `b = (sqrt(1 - u^2) ξ, u)` with `ξ ∈ S^{n-1}` and measure
//! `(1 - u^2)^{(n-2)/2} du dξ`. The circle uses the trapezoid rule,
//! `S^2` Gauss–Legendre in `u`, `S^3` Gauss–Chebyshev of the second kind.

use std::f64::consts::PI;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::boundary::BoundaryPoint;
use crate::error::{Error, Result};
use crate::numeric::{gauss_legendre, ComplexSum, CompensatedSum};
use crate::sampling;

#[derive(Debug, Clone)]
pub struct SphereQuadrature {
    n: usize,
    degree: usize,
    nodes: Vec<BoundaryPoint>,
    weights: Vec<f64>,
}

impl SphereQuadrature {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Declared polynomial exactness degree (0 for Monte Carlo rules).
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn nodes(&self) -> &[BoundaryPoint] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BoundaryPoint, f64)> {
        self.nodes.iter().zip(self.weights.iter().copied())
    }

    pub fn integrate<F: FnMut(&BoundaryPoint) -> f64>(&self, mut f: F) -> f64 {
        let mut acc = CompensatedSum::new();
        for (b, w) in self.iter() {
            acc.add(w * f(b));
        }
        acc.value()
    }

    pub fn integrate_complex<F: FnMut(&BoundaryPoint) -> Complex64>(&self, mut f: F) -> Complex64 {
        let mut acc = ComplexSum::new();
        for (b, w) in self.iter() {
            acc.add(f(b) * w);
        }
        acc.value()
    }

    /// Same family at twice the degree.
    pub fn refined(&self) -> Result<SphereQuadrature> {
        sphere_quadrature(self.n, (2 * self.degree).max(2))
    }
}

/// Product rule on `S^n`, `n ∈ {1, 2, 3}`, exact for polynomials of degree `<= degree`.
pub fn sphere_quadrature(n: usize, degree: usize) -> Result<SphereQuadrature> {
    if degree == 0 {
        return Err(Error::InvalidArgument("quadrature degree must be at least 1".into()));
    }
    let raw: Vec<(Vec<f64>, f64)> = match n {
        1 => circle(degree),
        2 => sphere2(degree),
        3 => sphere3(degree),
        other => return Err(Error::UnsupportedDimension(other)),
    };
    let total: f64 = raw.iter().map(|(_, w)| w).sum();
    let (nodes, weights) = raw
        .into_iter()
        .map(|(x, w)| (BoundaryPoint::new_unchecked(DVector::from_vec(x)), w / total))
        .unzip();
    Ok(SphereQuadrature { n, degree, nodes, weights })
}

/// Seeded equal-weight Monte Carlo rule for smoke tests.
pub fn monte_carlo(n: usize, count: usize, seed: u64) -> SphereQuadrature {
    let mut rng = sampling::stream(seed, "monte-carlo-quadrature");
    let nodes: Vec<_> = (0..count).map(|_| sampling::boundary_point(&mut rng, n)).collect();
    let weights = vec![1.0 / count as f64; count];
    SphereQuadrature { n, degree: 0, nodes, weights }
}

fn circle(degree: usize) -> Vec<(Vec<f64>, f64)> {
    let m = 2 * degree + 2;
    (0..m)
        .map(|i| {
            let phi = 2.0 * PI * (i as f64 + 0.5) / m as f64;
            (vec![phi.cos(), phi.sin()], 1.0)
        })
        .collect()
}

fn lift_slice(ring: &[(Vec<f64>, f64)], u: f64, wu: f64) -> impl Iterator<Item = (Vec<f64>, f64)> + '_ {
    let r = (1.0 - u * u).max(0.0).sqrt();
    ring.iter().map(move |(xi, w)| {
        let mut x: Vec<f64> = xi.iter().map(|c| c * r).collect();
        x.push(u);
        (x, w * wu)
    })
}

fn sphere2(degree: usize) -> Vec<(Vec<f64>, f64)> {
    let ring = circle(degree);
    let (us, wus) = gauss_legendre(degree / 2 + 1);
    us.iter().zip(&wus).flat_map(|(&u, &wu)| lift_slice(&ring, u, wu).collect::<Vec<_>>()).collect()
}

fn sphere3(degree: usize) -> Vec<(Vec<f64>, f64)> {
    let shell = sphere2(degree);
    let m = degree / 2 + 1;
    (1..=m)
        .flat_map(|i| {
            let theta = i as f64 * PI / (m as f64 + 1.0);
            let (u, wu) = (theta.cos(), theta.sin().powi(2));
            lift_slice(&shell, u, wu).collect::<Vec<_>>()
        })
        .collect()
}
