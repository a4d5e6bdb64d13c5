//! Error metrics between predicted and reference fields.

use serde::{Deserialize, Serialize};

use crate::elasticity::FieldSample;
use crate::error::{Error, Result};

pub const COMPONENTS: [&str; 5] = ["sxx", "syy", "sxy", "ux", "uy"];

/// `||pred - ref|| / ||ref||`; zero when both vanish.
pub fn rel_l2(pred: &[f64], reference: &[f64]) -> Result<f64> {
    same_len(pred, reference)?;
    let num: f64 = pred.iter().zip(reference).map(|(p, r)| (p - r).powi(2)).sum();
    let den: f64 = reference.iter().map(|r| r * r).sum();
    Ok(if num == 0.0 { 0.0 } else { (num / den).sqrt() })
}

/// Coefficient of determination.
pub fn r2(pred: &[f64], reference: &[f64]) -> Result<f64> {
    same_len(pred, reference)?;
    if reference.is_empty() {
        return Err(Error::ShapeMismatch { expected: 1, got: 0 });
    }
    let mean = reference.iter().sum::<f64>() / reference.len() as f64;
    let ss_res: f64 = pred.iter().zip(reference).map(|(p, r)| (p - r).powi(2)).sum();
    let ss_tot: f64 = reference.iter().map(|r| (r - mean).powi(2)).sum();
    Ok(if ss_res == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot })
}

pub fn mse(pred: &[f64], reference: &[f64]) -> Result<f64> {
    same_len(pred, reference)?;
    if reference.is_empty() {
        return Err(Error::ShapeMismatch { expected: 1, got: 0 });
    }
    Ok(pred.iter().zip(reference).map(|(p, r)| (p - r).powi(2)).sum::<f64>() / pred.len() as f64)
}

fn same_len(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::ShapeMismatch { expected: b.len(), got: a.len() });
    }
    Ok(())
}

/// Per-component metrics in the order of [`COMPONENTS`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub rel_l2: [f64; 5],
    pub r2: [f64; 5],
    /// Pooled over all five components.
    pub mse_pooled: f64,
}

impl Metrics {
    pub fn compute(pred: &[FieldSample], reference: &[FieldSample]) -> Result<Self> {
        if pred.len() != reference.len() || pred.is_empty() {
            return Err(Error::ShapeMismatch { expected: reference.len().max(1), got: pred.len() });
        }
        let mut out = Metrics { rel_l2: [0.0; 5], r2: [0.0; 5], mse_pooled: 0.0 };
        let (mut pooled_p, mut pooled_r) = (Vec::new(), Vec::new());
        for k in 0..5 {
            let p: Vec<f64> = pred.iter().map(|s| s.primary()[k]).collect();
            let r: Vec<f64> = reference.iter().map(|s| s.primary()[k]).collect();
            out.rel_l2[k] = rel_l2(&p, &r)?;
            out.r2[k] = r2(&p, &r)?;
            pooled_p.extend(p);
            pooled_r.extend(r);
        }
        out.mse_pooled = mse(&pooled_p, &pooled_r)?;
        Ok(out)
    }
}

/// Pointwise absolute errors of the five primary components.
pub fn abs_errors(pred: &[FieldSample], reference: &[FieldSample]) -> Result<Vec<[f64; 5]>> {
    if pred.len() != reference.len() {
        return Err(Error::ShapeMismatch { expected: reference.len(), got: pred.len() });
    }
    Ok(pred
        .iter()
        .zip(reference)
        .map(|(p, r)| {
            let (p, r) = (p.primary(), r.primary());
            std::array::from_fn(|k| (p[k] - r[k]).abs())
        })
        .collect())
}
