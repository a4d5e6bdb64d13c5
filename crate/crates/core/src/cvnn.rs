//! Complex-valued feed-forward networks with exponential activation.
//!
//! Every layer is a complex affine map followed by `exp`, except the output
//! layer which stays affine. Both pieces are entire, so each network is an
//! entire function of its input and satisfies the Cauchy-Riemann equations
//! by construction. Forward passes propagate [`HoloJet2`] values so the
//! first and second z-derivatives come for free.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::crack::CrackSpec;
use crate::error::{Error, Result};
use crate::grad::{GradVector, ParamLayout, ParamVector};
use crate::jet::{Cplx, HoloJet2, EXP_GUARD, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerSpec {
    pub n_in: usize,
    pub n_out: usize,
}

/// Architecture and initialization settings shared by both subnetworks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSpec {
    /// Hidden layer widths, e.g. `[20, 20, 20]`.
    pub hidden: Vec<usize>,
    /// Number of leading layers scaled by the measured second moment.
    #[serde(default)]
    pub prestabilize_layers: Option<usize>,
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_beta() -> f64 {
    0.5
}

impl NetworkSpec {
    pub fn new(hidden: Vec<usize>, seed: u64) -> Self {
        Self { hidden, prestabilize_layers: None, beta: default_beta(), seed }
    }

    /// Affine layers including the width-1 output layer.
    pub fn layers(&self) -> Vec<LayerSpec> {
        let mut out = Vec::with_capacity(self.hidden.len() + 1);
        let mut n_in = 1;
        for &w in &self.hidden {
            out.push(LayerSpec { n_in, n_out: w });
            n_in = w;
        }
        out.push(LayerSpec { n_in, n_out: 1 });
        out
    }

    /// `M_e`, defaulting to the number of hidden layers.
    pub fn m_e(&self) -> usize {
        self.prestabilize_layers.unwrap_or(self.hidden.len())
    }

    pub fn validate(&self) -> Result<()> {
        if self.hidden.contains(&0) {
            return Err(Error::InvalidSpec("hidden widths must be >= 1".into()));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidSpec(format!("beta must be positive, got {}", self.beta)));
        }
        if self.m_e() > self.hidden.len() + 1 {
            return Err(Error::InvalidSpec(format!(
                "prestabilize_layers = {} exceeds the {} affine layers",
                self.m_e(),
                self.hidden.len() + 1
            )));
        }
        Ok(())
    }
}

/// One complex affine layer, weights stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexLayer {
    pub n_in: usize,
    pub n_out: usize,
    pub w: Vec<Cplx>,
    pub b: Vec<Cplx>,
}

impl ComplexLayer {
    fn zeros(spec: LayerSpec) -> Self {
        Self {
            n_in: spec.n_in,
            n_out: spec.n_out,
            w: vec![ZERO; spec.n_in * spec.n_out],
            b: vec![ZERO; spec.n_out],
        }
    }

    fn param_len(&self) -> usize {
        self.w.len() + self.b.len()
    }
}

/// A single complex MLP `C -> C`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMlp {
    pub layers: Vec<ComplexLayer>,
}

/// Intermediate jets kept from a forward pass for the backward pass.
#[derive(Debug, Clone, Default)]
pub struct MlpTrace {
    /// `x^(0) .. x^(L)`; `x^(0)` is the seeded input.
    acts: Vec<Vec<HoloJet2>>,
    /// Pre-activation jets of the hidden layers.
    pre: Vec<Vec<HoloJet2>>,
    pub out: HoloJet2,
}

impl ComplexMlp {
    pub fn zeros(spec: &NetworkSpec) -> Self {
        Self { layers: spec.layers().into_iter().map(ComplexLayer::zeros).collect() }
    }

    pub fn param_len(&self) -> usize {
        self.layers.iter().map(ComplexLayer::param_len).sum()
    }

    fn hidden(&self) -> &[ComplexLayer] {
        &self.layers[..self.layers.len() - 1]
    }

    fn output(&self) -> &ComplexLayer {
        self.layers.last().expect("network has an output layer")
    }

    /// Output jet at `z`.
    pub fn eval(&self, z: Cplx) -> Result<HoloJet2> {
        let mut trace = MlpTrace::default();
        self.forward(z, &mut trace)?;
        Ok(trace.out)
    }

    /// Forward pass recording everything [`Self::backward`] needs.
    pub fn forward(&self, z: Cplx, trace: &mut MlpTrace) -> Result<()> {
        let n_hidden = self.layers.len() - 1;
        trace.acts.resize(n_hidden + 1, Vec::new());
        trace.pre.resize(n_hidden, Vec::new());
        trace.acts[0].clear();
        trace.acts[0].push(HoloJet2::seed(z));
        for (l, layer) in self.hidden().iter().enumerate() {
            let (before, after) = trace.acts.split_at_mut(l + 1);
            let x = &before[l];
            let y = &mut trace.pre[l];
            affine(layer, x, y);
            let out = &mut after[0];
            out.clear();
            for yj in y.iter() {
                if !(yj.f.re <= EXP_GUARD) {
                    return Err(Error::OverflowGuard(yj.f.re));
                }
                let e = yj.f.exp();
                out.push(HoloJet2::new(e, e * yj.d1, e * (yj.d2 + yj.d1 * yj.d1)));
            }
        }
        let mut y = Vec::with_capacity(1);
        affine(self.output(), &trace.acts[n_hidden], &mut y);
        trace.out = y[0];
        Ok(())
    }

    /// Accumulates `g = dL/dRe + i dL/dIm` of every parameter into `grad`
    /// given the adjoint of the output jet.
    ///
    /// `grad` follows the per-layer order `W` (row-major) then `b`.
    pub fn backward(&self, trace: &MlpTrace, g_out: &HoloJet2, grad: &mut [Cplx], scratch: &mut Vec<HoloJet2>) {
        let n_hidden = self.layers.len() - 1;
        let mut offsets = Vec::with_capacity(self.layers.len());
        let mut off = 0;
        for layer in &self.layers {
            offsets.push(off);
            off += layer.param_len();
        }

        // adjoint of the current layer's affine output
        let mut g_y: Vec<HoloJet2> = vec![*g_out];
        let g_x = scratch;
        for l in (0..=n_hidden).rev() {
            let layer = &self.layers[l];
            let x = &trace.acts[l];
            let gw = &mut grad[offsets[l]..offsets[l] + layer.param_len()];
            for i in 0..layer.n_out {
                let gy = g_y[i];
                let row = &mut gw[i * layer.n_in..(i + 1) * layer.n_in];
                for (gwij, xj) in row.iter_mut().zip(x) {
                    *gwij += gy.f * xj.f.conj() + gy.d1 * xj.d1.conj() + gy.d2 * xj.d2.conj();
                }
                gw[layer.n_out * layer.n_in + i] += gy.f;
            }
            if l == 0 {
                break;
            }
            // adjoint of x^(l) = exp(y^(l)) pulled back through W
            g_x.clear();
            g_x.resize(layer.n_in, HoloJet2::zero());
            for i in 0..layer.n_out {
                let gy = g_y[i];
                let row = &layer.w[i * layer.n_in..(i + 1) * layer.n_in];
                for (gxj, w) in g_x.iter_mut().zip(row) {
                    let wc = w.conj();
                    gxj.f += wc * gy.f;
                    gxj.d1 += wc * gy.d1;
                    gxj.d2 += wc * gy.d2;
                }
            }
            let y = &trace.pre[l - 1];
            g_y.clear();
            for (gx, (xj, yj)) in g_x.iter().zip(x.iter().zip(y)) {
                let e = xj.f;
                let g_e = gx.f + yj.d1.conj() * gx.d1 + (yj.d2 + yj.d1 * yj.d1).conj() * gx.d2;
                let ec = e.conj();
                g_y.push(HoloJet2::new(
                    ec * g_e,
                    ec * gx.d1 + (2.0 * e * yj.d1).conj() * gx.d2,
                    ec * gx.d2,
                ));
            }
        }
    }

    /// Mean of `|x^(l)|^2` over neurons and probe points for `l = 1..=L`.
    pub fn second_moments(&self, probe: &[Cplx]) -> Result<Vec<f64>> {
        let mut trace = MlpTrace::default();
        let n_hidden = self.layers.len() - 1;
        let mut sums = vec![0.0; n_hidden];
        for &z in probe {
            self.forward(z, &mut trace)?;
            for l in 0..n_hidden {
                let a = &trace.acts[l + 1];
                sums[l] += a.iter().map(|x| x.f.norm_sqr()).sum::<f64>() / a.len() as f64;
            }
        }
        Ok(sums.into_iter().map(|s| s / probe.len() as f64).collect())
    }

    fn write_params(&self, out: &mut Vec<f64>) {
        for layer in &self.layers {
            for c in layer.w.iter().chain(&layer.b) {
                out.push(c.re);
                out.push(c.im);
            }
        }
    }

    fn read_params(&mut self, src: &[f64]) -> usize {
        let mut k = 0;
        for layer in &mut self.layers {
            for c in layer.w.iter_mut().chain(layer.b.iter_mut()) {
                *c = Cplx::new(src[k], src[k + 1]);
                k += 2;
            }
        }
        k
    }
}

fn affine(layer: &ComplexLayer, x: &[HoloJet2], y: &mut Vec<HoloJet2>) {
    y.clear();
    for i in 0..layer.n_out {
        let row = &layer.w[i * layer.n_in..(i + 1) * layer.n_in];
        let mut acc = HoloJet2::constant(layer.b[i]);
        for (w, xj) in row.iter().zip(x) {
            acc.mul_add_assign(*w, xj);
        }
        y.push(acc);
    }
}

/// Whether the pair of networks emits `(phi, psi)` directly or the regular
/// parts `(F1, F2)` of the crack representation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelMode {
    Plain,
    Crack(CrackSpec),
}

/// The trainable object: two parallel complex networks.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialModel {
    pub mode: ModelMode,
    pub spec: NetworkSpec,
    /// `nets[0]` yields `phi` (or `F1`), `nets[1]` yields `psi` (or `F2`).
    pub nets: [ComplexMlp; 2],
}

impl PotentialModel {
    pub fn zeros(spec: &NetworkSpec, mode: ModelMode) -> Self {
        let net = ComplexMlp::zeros(spec);
        Self { mode, spec: spec.clone(), nets: [net.clone(), net] }
    }

    pub fn layout(&self) -> ParamLayout {
        let shapes: Vec<(usize, usize)> = self.spec.layers().iter().map(|l| (l.n_out, l.n_in)).collect();
        ParamLayout::new(&[shapes.clone(), shapes])
    }

    pub fn n_params(&self) -> usize {
        2 * (self.nets[0].param_len() + self.nets[1].param_len())
    }

    pub fn params(&self) -> ParamVector {
        let mut v = Vec::with_capacity(self.n_params());
        for net in &self.nets {
            net.write_params(&mut v);
        }
        ParamVector(v)
    }

    pub fn set_params(&mut self, p: &ParamVector) -> Result<()> {
        if p.len() != self.n_params() {
            return Err(Error::ShapeMismatch { expected: self.n_params(), got: p.len() });
        }
        let k = self.nets[0].read_params(&p.0);
        self.nets[1].read_params(&p.0[k..]);
        Ok(())
    }

    pub fn with_params(&self, p: &ParamVector) -> Result<Self> {
        let mut m = self.clone();
        m.set_params(p)?;
        Ok(m)
    }

    /// Raw outputs of both subnetworks at `z`, before any crack ansatz.
    pub fn forward_jets(&self, z: Cplx) -> Result<(HoloJet2, HoloJet2)> {
        Ok((self.nets[0].eval(z)?, self.nets[1].eval(z)?))
    }

    /// Scales the output layers so the potentials become `c * (phi, psi)`.
    pub fn scale_outputs(&mut self, c: f64) {
        for net in &mut self.nets {
            let out = net.layers.last_mut().expect("output layer");
            out.w.iter_mut().chain(out.b.iter_mut()).for_each(|x| *x *= c);
        }
    }

    /// Complex per-entry gradient flattened to the real layout.
    pub(crate) fn flatten_grad(grad: &[Cplx]) -> GradVector {
        let mut v = Vec::with_capacity(2 * grad.len());
        for g in grad {
            v.push(g.re);
            v.push(g.im);
        }
        GradVector(v)
    }

    pub(crate) fn complex_param_len(&self) -> usize {
        self.nets[0].param_len() + self.nets[1].param_len()
    }

    pub fn to_json(&self) -> String {
        let doc = ModelDocument {
            format: MODEL_FORMAT.to_string(),
            spec: self.spec.clone(),
            mode: self.mode.clone(),
            params: self.params().0,
        };
        serde_json::to_string_pretty(&doc).expect("model serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: ModelDocument = serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
        if doc.format != MODEL_FORMAT {
            return Err(Error::Format(format!("unknown format tag {:?}", doc.format)));
        }
        doc.spec.validate()?;
        let mut m = Self::zeros(&doc.spec, doc.mode);
        m.set_params(&ParamVector(doc.params))?;
        Ok(m)
    }
}

const MODEL_FORMAT: &str = "kmnet-model-v1";

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDocument {
    format: String,
    spec: NetworkSpec,
    mode: ModelMode,
    params: Vec<f64>,
}

/// Variance factor of layer `l` (1-based) given the measured second moment
/// of its input.
pub fn rho(l: usize, m_e: usize, beta: f64, input_moment: f64) -> f64 {
    if l <= m_e {
        beta / input_moment
    } else {
        beta * (-beta).exp()
    }
}

/// Exponential-aware initialization of both subnetworks.
///
/// Layers are initialized in order; after each one a forward pass over the
/// probe batch measures the second moment feeding the next layer. Weights
/// draw real and imaginary parts from `N(0, rho_l / (2 n_in))`, biases are
/// zero. Each `(seed, subnet, layer)` owns an independent ChaCha stream.
pub fn init_exp_aware(spec: &NetworkSpec, mode: ModelMode, probe: &[Cplx]) -> Result<PotentialModel> {
    spec.validate()?;
    if probe.is_empty() {
        return Err(Error::EmptyProbe);
    }
    let mut model = PotentialModel::zeros(spec, mode);
    let m_e = spec.m_e();
    for (s, net) in model.nets.iter_mut().enumerate() {
        // current activations of every probe point, values only
        let mut acts: Vec<Vec<Cplx>> = probe.iter().map(|&z| vec![z]).collect();
        let n_layers = net.layers.len();
        for l in 0..n_layers {
            let moment = acts.iter().map(|a| a.iter().map(|x| x.norm_sqr()).sum::<f64>() / a.len() as f64).sum::<f64>()
                / acts.len() as f64;
            if !(moment > 0.0) || !moment.is_finite() {
                return Err(Error::DegenerateProbe(l + 1));
            }
            let r = rho(l + 1, m_e, spec.beta, moment);
            let layer = &mut net.layers[l];
            let std = (r / (2.0 * layer.n_in as f64)).sqrt();
            let normal = Normal::new(0.0, std).expect("finite std");
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            rng.set_stream((s as u64) << 32 | l as u64);
            for w in layer.w.iter_mut() {
                let re = normal.sample(&mut rng);
                let im = normal.sample(&mut rng);
                *w = Cplx::new(re, im);
            }
            layer.b.iter_mut().for_each(|b| *b = ZERO);
            let is_output = l + 1 == n_layers;
            if is_output {
                break;
            }
            for a in acts.iter_mut() {
                let next: Vec<Cplx> = (0..layer.n_out)
                    .map(|i| {
                        let row = &layer.w[i * layer.n_in..(i + 1) * layer.n_in];
                        let y: Cplx = row.iter().zip(a.iter()).map(|(w, x)| w * x).sum();
                        y.exp()
                    })
                    .collect();
                *a = next;
            }
        }
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::{wirtinger_residual, I, ONE};
    use rand::Rng;

    fn c(re: f64, im: f64) -> Cplx {
        Cplx::new(re, im)
    }

    fn probe(n: usize, seed: u64) -> Vec<Cplx> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect()
    }

    /// Points of the quarter annulus `0.5 <= |z| <= 1` in the first quadrant.
    fn annulus_probe(n: usize, seed: u64) -> Vec<Cplx> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let z = c(rng.random_range(0.0..1.0), rng.random_range(0.0..1.0));
            if (0.5..=1.0).contains(&z.norm()) {
                out.push(z);
            }
        }
        out
    }

    #[test]
    fn constant_network() {
        let spec = NetworkSpec::new(vec![], 0);
        let mut m = PotentialModel::zeros(&spec, ModelMode::Plain);
        m.nets[0].layers[0].b[0] = c(2.0, -1.0);
        let (a, b) = m.forward_jets(c(0.3, 0.2)).unwrap();
        assert_eq!(a, HoloJet2::constant(c(2.0, -1.0)));
        assert_eq!(b, HoloJet2::zero());
    }

    #[test]
    fn one_hidden_neuron_is_exp() {
        let spec = NetworkSpec::new(vec![1], 0);
        let mut m = PotentialModel::zeros(&spec, ModelMode::Plain);
        m.nets[0].layers[0].w[0] = ONE;
        m.nets[0].layers[1].w[0] = ONE;
        let (a, _) = m.forward_jets(ZERO).unwrap();
        assert_eq!(a, HoloJet2::new(ONE, ONE, ONE));
    }

    #[test]
    fn outputs_are_holomorphic() {
        let spec = NetworkSpec::new(vec![8, 8], 7);
        let pts = probe(100, 3);
        let m = init_exp_aware(&spec, ModelMode::Plain, &pts).unwrap();
        for &z in &pts {
            for net in &m.nets {
                let f = |w: Cplx| net.eval(w).unwrap().f;
                let scale = net.eval(z).unwrap().d1.norm().max(1e-3);
                let r = wirtinger_residual(f, z, 1e-5).norm();
                assert!(r < 1e-6 * scale.max(1.0), "residual {r} at {z}");
            }
        }
    }

    #[test]
    fn output_is_affine_in_last_activations() {
        let spec = NetworkSpec::new(vec![4, 3], 11);
        let m = init_exp_aware(&spec, ModelMode::Plain, &probe(32, 1)).unwrap();
        let net = &m.nets[0];
        let mut trace = MlpTrace::default();
        let z = c(0.4, -0.3);
        net.forward(z, &mut trace).unwrap();
        let out = net.output();
        let last = &trace.acts[trace.acts.len() - 1];
        let manual: Cplx = out.w.iter().zip(last).map(|(w, x)| w * x.f).sum::<Cplx>() + out.b[0];
        assert!((manual - trace.out.f).norm() < 1e-14);
    }

    #[test]
    fn rho_rule_examples() {
        assert!((rho(1, 3, 0.5, 2.0) - 0.25).abs() < 1e-15);
        assert!((rho(4, 3, 0.5, 123.0) - 0.5 * (-0.5f64).exp()).abs() < 1e-15);
        assert!((rho(4, 3, 0.5, 1.0) - 0.303_265_329_856_316_7).abs() < 1e-12);
    }

    #[test]
    fn first_layer_variance_follows_rho() {
        // z = 1 + i everywhere gives E|x0|^2 = 2 exactly
        let spec = NetworkSpec { hidden: vec![400], prestabilize_layers: Some(1), beta: 0.5, seed: 5 };
        let m = init_exp_aware(&spec, ModelMode::Plain, &[c(1.0, 1.0)]).unwrap();
        let w = &m.nets[0].layers[0].w;
        let var = w.iter().map(|x| x.re * x.re + x.im * x.im).sum::<f64>() / (2.0 * w.len() as f64);
        // target per-component variance 0.25 / (2 * 1)
        assert!((var - 0.125).abs() < 0.02, "{var}");
        assert!(m.nets[0].layers.iter().all(|l| l.b.iter().all(|b| *b == ZERO)));
    }

    #[test]
    fn second_moment_stays_level_across_depth() {
        // seed-averaged moments within a factor of 2, every single seed within 4
        let mut mean = vec![0.0; 5];
        for seed in 0..5 {
            let spec = NetworkSpec { hidden: vec![20; 5], prestabilize_layers: Some(6), beta: 0.5, seed };
            let pts = annulus_probe(512, 100 + seed);
            let m = init_exp_aware(&spec, ModelMode::Plain, &pts).unwrap();
            for net in &m.nets {
                let mo = net.second_moments(&pts).unwrap();
                let (lo, hi) = mo.iter().fold((f64::MAX, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
                assert!(hi / lo < 4.0, "seed {seed}: {mo:?}");
                mean.iter_mut().zip(&mo).for_each(|(a, b)| *a += b / 10.0);
            }
        }
        let (lo, hi) = mean.iter().fold((f64::MAX, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
        assert!(hi / lo < 2.0, "{mean:?}");
    }

    #[test]
    fn init_is_reproducible_and_seed_sensitive() {
        let pts = probe(64, 2);
        let a = init_exp_aware(&NetworkSpec::new(vec![6, 6], 9), ModelMode::Plain, &pts).unwrap();
        let b = init_exp_aware(&NetworkSpec::new(vec![6, 6], 9), ModelMode::Plain, &pts).unwrap();
        let d = init_exp_aware(&NetworkSpec::new(vec![6, 6], 10), ModelMode::Plain, &pts).unwrap();
        assert_eq!(a.params(), b.params());
        assert_ne!(a.params(), d.params());
        assert_ne!(a.nets[0], a.nets[1]);
    }

    #[test]
    fn degenerate_probe() {
        let err = init_exp_aware(&NetworkSpec::new(vec![3], 0), ModelMode::Plain, &[ZERO]).unwrap_err();
        assert_eq!(err, Error::DegenerateProbe(1));
        assert_eq!(init_exp_aware(&NetworkSpec::new(vec![3], 0), ModelMode::Plain, &[]).unwrap_err(), Error::EmptyProbe);
    }

    #[test]
    fn backward_matches_tape_free_differences() {
        // L = Re(a f) + Im(b f') + |f''|^2 with f the network output
        let spec = NetworkSpec::new(vec![4, 3], 21);
        let pts = probe(16, 4);
        let m = init_exp_aware(&spec, ModelMode::Plain, &pts).unwrap();
        let z = c(0.2, 0.7);
        let (a, b) = (c(0.3, -1.1), c(0.8, 0.4));
        let loss = |net: &ComplexMlp| {
            let j = net.eval(z).unwrap();
            (a * j.f).re + (b * j.d1).im + j.d2.norm_sqr()
        };
        let net = &m.nets[0];
        let mut trace = MlpTrace::default();
        net.forward(z, &mut trace).unwrap();
        let j = trace.out;
        // g = dL/dRe + i dL/dIm for each output component
        let g = HoloJet2::new(a.conj(), (b * -I).conj() * -1.0 * -1.0, 2.0 * j.d2);
        let g = HoloJet2::new(g.f, (I * b.conj()).conj().conj() * -1.0 * -1.0, g.d2);
        // Im(b v) = Re(-i b v): adjoint conj(-i b) = i conj(b)
        let g = HoloJet2::new(g.f, I * b.conj(), g.d2);
        let mut grad = vec![ZERO; net.param_len()];
        net.backward(&trace, &g, &mut grad, &mut Vec::new());

        let mut flat = Vec::new();
        net.write_params(&mut flat);
        for k in 0..flat.len() {
            let h = 1e-6;
            let mut p = flat.clone();
            p[k] += h;
            let mut np = net.clone();
            np.read_params(&p);
            let fp = loss(&np);
            p[k] -= 2.0 * h;
            np.read_params(&p);
            let fm = loss(&np);
            let fd = (fp - fm) / (2.0 * h);
            let an = if k % 2 == 0 { grad[k / 2].re } else { grad[k / 2].im };
            assert!((fd - an).abs() <= 1e-6 * (1.0 + fd.abs()), "entry {k}: {an} vs {fd}");
        }
        let _ = I;
    }

    #[test]
    fn json_round_trip_is_bitwise() {
        let pts = probe(16, 8);
        let m = init_exp_aware(&NetworkSpec::new(vec![5, 5], 3), ModelMode::Plain, &pts).unwrap();
        let back = PotentialModel::from_json(&m.to_json()).unwrap();
        assert_eq!(back, m);
        for &z in &pts {
            assert_eq!(back.forward_jets(z).unwrap(), m.forward_jets(z).unwrap());
        }
        assert!(PotentialModel::from_json("{\"format\":\"x\"}").is_err());
        let crack = ModelMode::Crack(crate::crack::CrackSpec::edge(c(2.0, 4.0), 0.0, 2.0, 1e-3));
        let m = init_exp_aware(&NetworkSpec::new(vec![3], 1), crack, &pts).unwrap();
        assert_eq!(PotentialModel::from_json(&m.to_json()).unwrap(), m);
    }
}
