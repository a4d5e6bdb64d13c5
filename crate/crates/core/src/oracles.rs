//! Closed-form reference solutions.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::elasticity::FieldSample;
use crate::error::{Error, Result};

/// Thick tube under inner and outer pressure (positive in compression).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TubeParams {
    pub ri: f64,
    pub ro: f64,
    pub pi: f64,
    pub po: f64,
    pub e: f64,
    pub nu: f64,
}

/// Plane-strain Lame solution at `(x, y)`.
pub fn tube_exact(x: f64, y: f64, p: &TubeParams) -> Result<FieldSample> {
    let r2 = x * x + y * y;
    let r = r2.sqrt();
    if r < p.ri * (1.0 - 1e-12) || r > p.ro * (1.0 + 1e-12) {
        return Err(Error::OutOfDomain(crate::jet::Cplx::new(x, y)));
    }
    let d = p.ro * p.ro - p.ri * p.ri;
    let a = (p.ri * p.ri * p.pi - p.ro * p.ro * p.po) / d;
    let b = p.ri * p.ri * p.ro * p.ro * (p.pi - p.po) / d;
    let r4 = r2 * r2;
    let c = (1.0 + p.nu) / p.e;
    let k1 = (1.0 - 2.0 * p.nu) * a;
    let g = k1 + b / r2;
    Ok(FieldSample {
        sxx: a - b * (x * x - y * y) / r4,
        syy: a + b * (x * x - y * y) / r4,
        sxy: -2.0 * b * x * y / r4,
        ux: c * x * g,
        uy: c * y * g,
        dux_dx: c * (g - 2.0 * b * x * x / r4),
        dux_dy: -2.0 * c * b * x * y / r4,
        duy_dx: -2.0 * c * b * x * y / r4,
        duy_dy: c * (g - 2.0 * b * y * y / r4),
    })
}

/// Crack-mouth opening of an edge-cracked strip of width `l`.
pub fn sent_cod(sigma0: f64, a0: f64, l: f64, e_prime: f64) -> Result<f64> {
    let ratio = a0 / l;
    if !(0.2..=0.7).contains(&ratio) {
        return Err(Error::Range { what: "a0/L", value: ratio, lo: 0.2, hi: 0.7 });
    }
    let beta = PI * ratio / 2.0;
    Ok(4.0 * sigma0 * a0 / e_prime * (1.46 + 3.42 * (1.0 - beta.cos())) / beta.cos().powi(2))
}

/// Geometric factor of the edge-cracked strip.
pub fn sent_factor(ratio: f64) -> f64 {
    let beta = PI * ratio / 2.0;
    let secant = if ratio == 0.0 { 1.0 } else { (beta.tan() / beta).sqrt() };
    secant * (0.752 + 2.02 * ratio + 0.37 * (1.0 - beta.sin()).powi(3)) / beta.cos()
}

/// Mode I stress intensity factor of an edge-cracked strip of width `l`.
pub fn sent_k1(sigma0: f64, a0: f64, l: f64) -> Result<f64> {
    let ratio = a0 / l;
    if !(0.0..1.0).contains(&ratio) {
        return Err(Error::Range { what: "a0/L", value: ratio, lo: 0.0, hi: 1.0 });
    }
    Ok((PI * a0).sqrt() * sigma0 * sent_factor(ratio))
}
