//! Geometric probabilities: spherical-cap fractions on the Bloch sphere and
//! interval, rectangle and box ratios for maximally random product states.
//!
//! The cap is measured from the `|0>` pole, so its area fraction is the
//! probability of measuring `1`. All intervals are half-open, `[k, l)`.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Pow;
use serde::{Deserialize, Serialize};

use crate::{Error, ExactRational, Result};

/// A point on the Bloch sphere, `theta` in `[0, pi]`, `phi` in `[0, 2 pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochPoint {
    theta: f64,
    phi: f64,
}

impl BlochPoint {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        check_theta(theta)?;
        if !(0.0..2.0 * PI).contains(&phi) {
            return Err(Error::domain(format!("phi = {phi} outside [0, 2pi)")));
        }
        Ok(BlochPoint { theta, phi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Probability of measuring `0`, `cos^2(theta/2)`.
    pub fn p_zero(&self) -> f64 {
        let c = (self.theta / 2.0).cos();
        c * c
    }

    /// Probability of measuring `1`, the cap fraction.
    pub fn p_one(&self) -> f64 {
        cap_fraction(self.theta)
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::domain(format!("theta = {theta} outside [0, pi]")));
    }
    Ok(())
}

fn cap_fraction(theta: f64) -> f64 {
    let s = (theta / 2.0).sin();
    s * s
}

/// Area of the cap of angular radius `theta` over the sphere's area:
/// `sin^2(theta / 2)`.
pub fn cap_area_fraction(theta: f64) -> Result<f64> {
    check_theta(theta)?;
    Ok(cap_fraction(theta))
}

/// One axis of a [`BoxRegion`]: the half-open interval `[k, l)` inside an
/// axis of `2^qubits` basis states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Axis {
    pub k: u64,
    pub l: u64,
    pub qubits: u32,
}

impl Axis {
    pub fn new(k: u64, l: u64, qubits: u32) -> Result<Self> {
        if qubits > 62 {
            return Err(Error::domain(format!("axis of {qubits} qubits is too large")));
        }
        if k > l || l > 1u64 << qubits {
            return Err(Error::domain(format!(
                "interval [{k}, {l}) not inside [0, 2^{qubits}]"
            )));
        }
        Ok(Axis { k, l, qubits })
    }

    pub fn size(&self) -> u64 {
        1u64 << self.qubits
    }

    pub fn width(&self) -> u64 {
        self.l - self.k
    }
}

/// A product of axis intervals, one per tensor factor, first axis in the
/// high-order bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxRegion {
    axes: Vec<Axis>,
}

impl BoxRegion {
    /// Builds a region from `(k, l, n)` triples.
    pub fn new(dims: &[(u64, u64, u32)]) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::domain("a box needs at least one axis"));
        }
        let axes = dims.iter().map(|&(k, l, n)| Axis::new(k, l, n)).collect::<Result<_>>()?;
        Ok(BoxRegion { axes })
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn total_qubits(&self) -> u32 {
        self.axes.iter().map(|a| a.qubits).sum()
    }

    /// The computational-basis indices inside the box, ascending.
    pub fn basis_indices(&self) -> Vec<usize> {
        let mut out = vec![0usize];
        for axis in &self.axes {
            let shift = axis.qubits;
            out = out
                .iter()
                .flat_map(|&hi| (axis.k..axis.l).map(move |j| (hi << shift) | j as usize))
                .collect();
        }
        out
    }

    pub fn to_triples(&self) -> Vec<(u64, u64, u32)> {
        self.axes.iter().map(|a| (a.k, a.l, a.qubits)).collect()
    }
}

/// `(l - k) / 2^n`.
pub fn interval_probability(n: u32, k: u64, l: u64) -> Result<ExactRational> {
    let axis = Axis::new(k, l, n)?;
    Ok(BigRational::new(BigInt::from(axis.width()), BigInt::from(axis.size())))
}

/// `prod (l_s - k_s) / 2^{sum n_s}`.
pub fn box_probability(region: &BoxRegion) -> Result<ExactRational> {
    let volume: BigInt = region.axes.iter().map(|a| BigInt::from(a.width())).product();
    let total: BigInt = Pow::pow(BigInt::from(2u8), region.total_qubits());
    Ok(BigRational::new(volume, total))
}
