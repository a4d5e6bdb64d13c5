//! Parameter vectors, gradients and the optimizer.
//!
//! Complex weights are stored as consecutive `(re, im)` pairs. Gradients use
//! the same layout with entries `dL/d(re)` and `dL/d(im)`, i.e. the loss is
//! differentiated over the real decomposition of every complex parameter.

mod adam;
mod tape;

pub use adam::{adam_step, AdamConfig, AdamState};
pub use tape::{loss_gradient, CVar, Tape, Var};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One complex weight matrix plus bias vector inside the flat layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerBlock {
    pub subnet: usize,
    pub layer: usize,
    pub n_out: usize,
    pub n_in: usize,
    /// Index of the first real entry of this block.
    pub offset: usize,
}

impl LayerBlock {
    pub fn complex_len(&self) -> usize {
        self.n_out * (self.n_in + 1)
    }
}

/// Maps `(subnet, layer, row, col)` to flat real indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamLayout {
    blocks: Vec<LayerBlock>,
    len: usize,
}

impl ParamLayout {
    /// Builds a layout from per-subnet layer shapes `(n_out, n_in)`.
    pub fn new(subnets: &[Vec<(usize, usize)>]) -> Self {
        let mut blocks = Vec::new();
        let mut offset = 0;
        for (s, layers) in subnets.iter().enumerate() {
            for (l, &(n_out, n_in)) in layers.iter().enumerate() {
                let b = LayerBlock { subnet: s, layer: l, n_out, n_in, offset };
                offset += 2 * b.complex_len();
                blocks.push(b);
            }
        }
        Self { blocks, len: offset }
    }

    /// Number of real entries, twice the number of complex parameters.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn blocks(&self) -> &[LayerBlock] {
        &self.blocks
    }

    fn block(&self, subnet: usize, layer: usize) -> Option<&LayerBlock> {
        self.blocks.iter().find(|b| b.subnet == subnet && b.layer == layer)
    }

    /// Real index of `Re W[row][col]`; `Im` follows at `+1`.
    pub fn weight_index(&self, subnet: usize, layer: usize, row: usize, col: usize) -> Option<usize> {
        let b = self.block(subnet, layer)?;
        (row < b.n_out && col < b.n_in).then(|| b.offset + 2 * (row * b.n_in + col))
    }

    /// Real index of `Re b[row]`.
    pub fn bias_index(&self, subnet: usize, layer: usize, row: usize) -> Option<usize> {
        let b = self.block(subnet, layer)?;
        (row < b.n_out).then(|| b.offset + 2 * (b.n_out * b.n_in + row))
    }

    /// Inverse of the index maps: `(subnet, layer, row, col, is_imag)`;
    /// `col == None` marks a bias entry.
    pub fn locate(&self, index: usize) -> Option<(usize, usize, usize, Option<usize>, bool)> {
        let b = self
            .blocks
            .iter()
            .find(|b| index >= b.offset && index < b.offset + 2 * b.complex_len())?;
        let local = (index - b.offset) / 2;
        let imag = (index - b.offset) % 2 == 1;
        if local < b.n_out * b.n_in {
            Some((b.subnet, b.layer, local / b.n_in, Some(local % b.n_in), imag))
        } else {
            Some((b.subnet, b.layer, local - b.n_out * b.n_in, None, imag))
        }
    }
}

/// Flat real parameter vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamVector(pub Vec<f64>);

/// Flat real gradient, same layout as [`ParamVector`].
#[derive(Debug, Clone, PartialEq)]
pub struct GradVector(pub Vec<f64>);

impl ParamVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl GradVector {
    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|g| g * g).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|g| g.is_finite())
    }
}

/// Rescales `grad` to norm `max_norm` when it is longer.
pub fn clip_gradient(grad: GradVector, max_norm: f64) -> GradVector {
    debug_assert!(max_norm > 0.0);
    let n = grad.norm();
    if n > max_norm {
        let s = max_norm / n;
        GradVector(grad.0.into_iter().map(|g| g * s).collect())
    } else {
        grad
    }
}

/// A scalar loss over a parameter vector with its gradient.
pub trait Objective {
    fn value(&self, params: &ParamVector) -> Result<f64>;
    fn value_and_gradient(&self, params: &ParamVector) -> Result<(f64, GradVector)>;
}

/// Central differences of `f` at the requested entries.
pub fn central_difference<F>(f: F, params: &ParamVector, indices: &[usize], step: f64) -> Result<Vec<f64>>
where
    F: Fn(&ParamVector) -> Result<f64>,
{
    let mut p = params.clone();
    indices
        .iter()
        .map(|&i| {
            let orig = p.0[i];
            p.0[i] = orig + step;
            let fp = f(&p)?;
            p.0[i] = orig - step;
            let fm = f(&p)?;
            p.0[i] = orig;
            Ok((fp - fm) / (2.0 * step))
        })
        .collect()
}

pub(crate) fn check_finite(v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteLoss(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn clip_examples() {
        let g = GradVector(vec![0.3, 0.4]);
        assert_eq!(clip_gradient(g.clone(), 1.0), g);
        let c = clip_gradient(GradVector(vec![3.0, 4.0]), 1.0);
        assert!((c.0[0] - 0.6).abs() < 1e-15 && (c.0[1] - 0.8).abs() < 1e-15);
        assert_eq!(clip_gradient(GradVector::zeros(3), 1.0), GradVector::zeros(3));
    }

    #[test]
    fn layout_indices() {
        let l = ParamLayout::new(&[vec![(4, 1), (1, 4)], vec![(2, 1)]]);
        // (4*2 + 1*5 + 2*2) complex entries
        assert_eq!(l.len(), 2 * (8 + 5 + 4));
        assert_eq!(l.weight_index(0, 0, 0, 0), Some(0));
        assert_eq!(l.bias_index(0, 0, 0), Some(8));
        assert_eq!(l.weight_index(0, 1, 0, 3), Some(16 + 6));
        assert_eq!(l.weight_index(0, 1, 1, 0), None);
        assert_eq!(l.bias_index(1, 0, 1), Some(26 + 4 + 2));
    }

    proptest! {
        #[test]
        fn layout_round_trips(widths in proptest::collection::vec(1usize..6, 1..4)) {
            let mut layers = Vec::new();
            let mut n_in = 1;
            for &w in &widths {
                layers.push((w, n_in));
                n_in = w;
            }
            layers.push((1, n_in));
            let l = ParamLayout::new(&[layers.clone(), layers]);
            let total: usize = l.blocks().iter().map(|b| b.complex_len()).sum();
            prop_assert_eq!(l.len(), 2 * total);
            for i in 0..l.len() {
                let (s, layer, row, col, imag) = l.locate(i).unwrap();
                let base = match col {
                    Some(c) => l.weight_index(s, layer, row, c).unwrap(),
                    None => l.bias_index(s, layer, row).unwrap(),
                };
                prop_assert_eq!(base + imag as usize, i);
            }
        }
    }
}
