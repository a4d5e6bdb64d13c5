//! Discrete total potential energy, the boundary-residual alternative and
//! the training loop.
//!
//! Gradients are exact reverse-mode adjoints: each quadrature point pulls
//! its loss sensitivity back through the field reconstruction, the crack
//! ansatz and both networks.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cases::CaseSpec;
use crate::crack::{assemble_crack_adjoint, assemble_crack_potentials, zeta, CrackSpec, Frame};
use crate::cvnn::{init_exp_aware, MlpTrace, ModelMode, NetworkSpec, PotentialModel};
use crate::elasticity::{km_fields, km_fields_adjoint, strain_energy_density, strain_energy_gradient, FieldAdjoint, Material};
use crate::error::{Error, Result};
use crate::geometry::{build_samples, Axis, Bc, SampleSet};
use crate::grad::{clip_gradient, AdamConfig, AdamState, GradVector, Objective, ParamVector};
use crate::jet::{Cplx, HoloJet2, ZERO};

/// Points per work chunk; chunk results are reduced in chunk order.
const CHUNK: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossMode {
    Variational,
    BoundaryResidual,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainConfig {
    #[serde(default = "default_lr")]
    pub learning_rate: f64,
    #[serde(default = "default_iterations")]
    pub iterations: usize,
    #[serde(default = "default_alpha")]
    pub alpha_u: f64,
    #[serde(default = "default_clip")]
    pub clip_norm: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_mode")]
    pub loss_mode: LossMode,
    /// Interior points used to calibrate the initialization.
    #[serde(default = "default_probe")]
    pub probe_size: usize,
    /// Writes measured wall time into the history; off keeps histories
    /// byte-identical between runs.
    #[serde(default)]
    pub record_wall_time: bool,
    /// Return the iterate with the lowest loss instead of the last one.
    #[serde(default)]
    pub keep_best: bool,
}

fn default_lr() -> f64 {
    1e-2
}
fn default_iterations() -> usize {
    2000
}
fn default_alpha() -> f64 {
    1000.0
}
fn default_clip() -> f64 {
    1.0
}
fn default_mode() -> LossMode {
    LossMode::Variational
}
fn default_probe() -> usize {
    512
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: default_lr(),
            iterations: default_iterations(),
            alpha_u: default_alpha(),
            clip_norm: default_clip(),
            seed: 0,
            loss_mode: default_mode(),
            probe_size: default_probe(),
            record_wall_time: false,
            keep_best: false,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let pos = [("learning_rate", self.learning_rate), ("alpha_u", self.alpha_u), ("clip_norm", self.clip_norm)];
        for (name, v) in pos {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidSpec(format!("{name} must be positive, got {v}")));
            }
        }
        if self.probe_size == 0 {
            return Err(Error::InvalidSpec("probe_size must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub internal: f64,
    pub external: f64,
    pub dirichlet_penalty: f64,
    pub total: f64,
}

impl EnergyBreakdown {
    fn add(&mut self, o: &EnergyBreakdown) {
        self.internal += o.internal;
        self.external += o.external;
        self.dirichlet_penalty += o.dirichlet_penalty;
    }

    fn finish(mut self, alpha_u: f64) -> Self {
        self.total = self.internal - self.external + alpha_u * self.dirichlet_penalty;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct BoundaryTerm {
    /// Local coordinate.
    w: Cplx,
    weight: f64,
    /// Global traction vector; zero on components without traction data.
    traction: Cplx,
    dirichlet: [bool; 2],
    /// Global prescribed displacement on the Dirichlet components.
    target: Cplx,
}

/// Quadrature expressed in the model frame.
#[derive(Debug, Clone)]
struct Quadrature {
    frame: Frame,
    interior: Vec<(Cplx, f64)>,
    boundary: Vec<BoundaryTerm>,
}

impl Quadrature {
    fn new(case: &CaseSpec, samples: &SampleSet, frame: Frame, keep_all: bool) -> Self {
        let interior = samples.interior.iter().map(|p| (frame.to_local(p.z), p.weight)).collect();
        let mut boundary = Vec::new();
        for p in &samples.boundary {
            let seg = &case.domain.segments[p.segment];
            let mut t = [0.0; 2];
            let mut dir = [false; 2];
            let mut target = [0.0; 2];
            for (k, axis) in [Axis::X, Axis::Y].into_iter().enumerate() {
                match seg.bc(axis) {
                    Bc::Traction(load) => t[k] = load.eval(p.z, axis),
                    Bc::Dirichlet(load) => {
                        dir[k] = true;
                        target[k] = load.eval(p.z, axis);
                    }
                }
            }
            if !keep_all && !dir[0] && !dir[1] && t == [0.0, 0.0] {
                continue;
            }
            boundary.push(BoundaryTerm {
                w: frame.to_local(p.z),
                weight: p.weight,
                traction: Cplx::new(t[0], t[1]),
                dirichlet: dir,
                target: Cplx::new(target[0], target[1]),
            });
        }
        Self { frame, interior, boundary }
    }
}

/// Per-thread buffers for one point evaluation.
#[derive(Default)]
struct Work {
    traces: [MlpTrace; 4],
    scratch: Vec<HoloJet2>,
    zeta: HoloJet2,
}

/// Potentials at local `w`, keeping traces for a later backward pass.
fn forward_point(model: &PotentialModel, crack: Option<&CrackSpec>, w: Cplx, work: &mut Work) -> Result<(HoloJet2, HoloJet2)> {
    let [t0, t1, t2, t3] = &mut work.traces;
    model.nets[0].forward(w, t0)?;
    model.nets[1].forward(w, t1)?;
    match crack {
        None => Ok((t0.out, t1.out)),
        Some(spec) => {
            work.zeta = zeta(w, spec)?;
            model.nets[0].forward(w.conj(), t2)?;
            model.nets[1].forward(w.conj(), t3)?;
            Ok(assemble_crack_potentials(w, &work.zeta, &t0.out, &t1.out, &t2.out, &t3.out))
        }
    }
}

fn backward_point(
    model: &PotentialModel,
    crack: Option<&CrackSpec>,
    w: Cplx,
    g_phi: &HoloJet2,
    g_psi: &HoloJet2,
    work: &mut Work,
    grad: &mut [Cplx],
) {
    let split = model.nets[0].param_len();
    let (g0, g1) = grad.split_at_mut(split);
    match crack {
        None => {
            model.nets[0].backward(&work.traces[0], g_phi, g0, &mut work.scratch);
            model.nets[1].backward(&work.traces[1], g_psi, g1, &mut work.scratch);
        }
        Some(_) => {
            let g = assemble_crack_adjoint(w, &work.zeta, g_phi, g_psi);
            model.nets[0].backward(&work.traces[0], &g[0], g0, &mut work.scratch);
            model.nets[1].backward(&work.traces[1], &g[1], g1, &mut work.scratch);
            model.nets[0].backward(&work.traces[2], &g[2], g0, &mut work.scratch);
            model.nets[1].backward(&work.traces[3], &g[3], g1, &mut work.scratch);
        }
    }
}

/// Discrete loss of a case as a function of the flat parameter vector.
pub struct EnergyObjective {
    template: PotentialModel,
    material: Material,
    alpha_u: f64,
    mode: LossMode,
    quad: Quadrature,
}

impl EnergyObjective {
    pub fn new(template: &PotentialModel, case: &CaseSpec, samples: &SampleSet, alpha_u: f64, mode: LossMode) -> Result<Self> {
        let quad = Quadrature::new(case, samples, template.frame(), false);
        if mode == LossMode::BoundaryResidual {
            check_displacement_only(case)?;
        }
        Ok(Self { template: template.clone(), material: case.material, alpha_u, mode, quad })
    }

    pub fn n_params(&self) -> usize {
        self.template.n_params()
    }

    /// Loss breakdown and optionally its gradient.
    pub fn evaluate(&self, params: &ParamVector, want_grad: bool) -> Result<(EnergyBreakdown, Option<GradVector>)> {
        let model = self.template.with_params(params)?;
        let (e, g) = match self.mode {
            LossMode::Variational => self.energy(&model, want_grad)?,
            LossMode::BoundaryResidual => self.residual(&model, want_grad)?,
        };
        if !e.total.is_finite() {
            return Err(Error::NonFiniteEnergy);
        }
        Ok((e, g.map(|g| PotentialModel::flatten_grad(&g))))
    }

    fn energy(&self, model: &PotentialModel, want_grad: bool) -> Result<(EnergyBreakdown, Option<Vec<Cplx>>)> {
        let mat = self.material;
        let crack = model.crack();
        let n = model.complex_param_len();
        let rot = self.quad.frame.rot;
        let alpha = self.alpha_u;

        let interior: Vec<Result<(EnergyBreakdown, Vec<Cplx>)>> = self
            .quad
            .interior
            .par_chunks(CHUNK)
            .map(|chunk| {
                let mut work = Work::default();
                let mut grad = if want_grad { vec![ZERO; n] } else { Vec::new() };
                let mut e = EnergyBreakdown::default();
                for &(w, wt) in chunk {
                    let (phi, psi) = forward_point(model, crack, w, &mut work)?;
                    let s = km_fields(&phi, &psi, w, &mat);
                    e.internal += wt * strain_energy_density(&s, &mat);
                    if want_grad {
                        let (gx, gy, gs) = strain_energy_gradient(&s, &mat);
                        let adj = FieldAdjoint { sxx: wt * gx, syy: wt * gy, sxy: wt * gs, u: ZERO };
                        let (gp, gq) = km_fields_adjoint(w, &mat, &adj);
                        backward_point(model, crack, w, &gp, &gq, &mut work, &mut grad);
                    }
                }
                Ok((e, grad))
            })
            .collect();

        let boundary: Vec<Result<(EnergyBreakdown, Vec<Cplx>)>> = self
            .quad
            .boundary
            .par_chunks(CHUNK)
            .map(|chunk| {
                let mut work = Work::default();
                let mut grad = if want_grad { vec![ZERO; n] } else { Vec::new() };
                let mut e = EnergyBreakdown::default();
                for b in chunk {
                    let (phi, psi) = forward_point(model, crack, b.w, &mut work)?;
                    let s = km_fields(&phi, &psi, b.w, &mat);
                    let u = rot * s.u();
                    e.external += b.weight * (b.traction.re * u.re + b.traction.im * u.im);
                    let d = u - b.target;
                    let dx = if b.dirichlet[0] { d.re } else { 0.0 };
                    let dy = if b.dirichlet[1] { d.im } else { 0.0 };
                    e.dirichlet_penalty += b.weight * (dx * dx + dy * dy);
                    if want_grad {
                        let g_u = b.weight * (-b.traction + 2.0 * alpha * Cplx::new(dx, dy));
                        let adj = FieldAdjoint { u: rot.conj() * g_u, ..Default::default() };
                        let (gp, gq) = km_fields_adjoint(b.w, &mat, &adj);
                        backward_point(model, crack, b.w, &gp, &gq, &mut work, &mut grad);
                    }
                }
                Ok((e, grad))
            })
            .collect();

        let mut total = EnergyBreakdown::default();
        let mut grad = if want_grad { Some(vec![ZERO; n]) } else { None };
        for part in interior.into_iter().chain(boundary) {
            let (e, g) = part?;
            total.add(&e);
            if let Some(acc) = grad.as_mut() {
                acc.iter_mut().zip(&g).for_each(|(a, b)| *a += b);
            }
        }
        Ok((total.finish(alpha), grad))
    }

    fn residual(&self, model: &PotentialModel, want_grad: bool) -> Result<(EnergyBreakdown, Option<Vec<Cplx>>)> {
        let mat = self.material;
        let crack = model.crack();
        let n = model.complex_param_len();
        let rot = self.quad.frame.rot;
        let pts: Vec<&BoundaryTerm> = self.quad.boundary.iter().filter(|b| b.dirichlet[0] || b.dirichlet[1]).collect();
        if pts.is_empty() {
            return Err(Error::UnsupportedBc("no displacement data".into()));
        }
        let inv_n = 1.0 / pts.len() as f64;
        let parts: Vec<Result<(f64, Vec<Cplx>)>> = pts
            .par_chunks(CHUNK)
            .map(|chunk| {
                let mut work = Work::default();
                let mut grad = if want_grad { vec![ZERO; n] } else { Vec::new() };
                let mut acc = 0.0;
                for b in chunk {
                    let (phi, psi) = forward_point(model, crack, b.w, &mut work)?;
                    let u = rot * km_fields(&phi, &psi, b.w, &mat).u();
                    let d = u - b.target;
                    let dx = if b.dirichlet[0] { d.re } else { 0.0 };
                    let dy = if b.dirichlet[1] { d.im } else { 0.0 };
                    acc += inv_n * (dx * dx + dy * dy);
                    if want_grad {
                        let g_u = 2.0 * inv_n * Cplx::new(dx, dy);
                        let adj = FieldAdjoint { u: rot.conj() * g_u, ..Default::default() };
                        let (gp, gq) = km_fields_adjoint(b.w, &mat, &adj);
                        backward_point(model, crack, b.w, &gp, &gq, &mut work, &mut grad);
                    }
                }
                Ok((acc, grad))
            })
            .collect();
        let mut value = 0.0;
        let mut grad = if want_grad { Some(vec![ZERO; n]) } else { None };
        for part in parts {
            let (v, g) = part?;
            value += v;
            if let Some(acc) = grad.as_mut() {
                acc.iter_mut().zip(&g).for_each(|(a, b)| *a += b);
            }
        }
        let e = EnergyBreakdown { internal: 0.0, external: 0.0, dirichlet_penalty: value, total: value };
        Ok((e, grad))
    }
}

impl Objective for EnergyObjective {
    fn value(&self, params: &ParamVector) -> Result<f64> {
        Ok(self.evaluate(params, false)?.0.total)
    }

    fn value_and_gradient(&self, params: &ParamVector) -> Result<(f64, GradVector)> {
        let (e, g) = self.evaluate(params, true)?;
        Ok((e.total, g.expect("gradient requested")))
    }
}

fn check_displacement_only(case: &CaseSpec) -> Result<()> {
    for seg in &case.domain.segments {
        for bc in [&seg.bc_x, &seg.bc_y] {
            if let Bc::Traction(load) = bc {
                if !load.is_zero() {
                    return Err(Error::UnsupportedBc(seg.name.clone()));
                }
            }
        }
    }
    Ok(())
}

/// Energy of `model` on the frozen samples of `case`.
pub fn assemble_energy(model: &PotentialModel, case: &CaseSpec, samples: &SampleSet) -> Result<EnergyBreakdown> {
    let obj = EnergyObjective::new(model, case, samples, case.train.alpha_u, LossMode::Variational)?;
    Ok(obj.evaluate(&model.params(), false)?.0)
}

/// Mean squared displacement misfit over boundary points carrying
/// displacement data; homogeneous traction components are natural and
/// ignored, loaded ones are rejected.
pub fn boundary_residual_loss(model: &PotentialModel, case: &CaseSpec, samples: &SampleSet) -> Result<f64> {
    let obj = EnergyObjective::new(model, case, samples, case.train.alpha_u, LossMode::BoundaryResidual)?;
    Ok(obj.evaluate(&model.params(), false)?.0.total)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistoryRow {
    pub iteration: usize,
    pub energy: EnergyBreakdown,
    pub grad_norm: f64,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct History {
    pub rows: Vec<HistoryRow>,
}

impl History {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("iteration,internal,external,penalty,total,grad_norm,wall_ms\n");
        for r in &self.rows {
            let e = &r.energy;
            let _ = writeln!(
                s,
                "{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.3}",
                r.iteration, e.internal, e.external, e.dirichlet_penalty, e.total, r.grad_norm, r.wall_ms
            );
        }
        s
    }

    pub fn last(&self) -> Option<&HistoryRow> {
        self.rows.last()
    }
}

/// Points in the model frame used to calibrate the initialization.
pub fn probe_batch(samples: &SampleSet, frame: &Frame, n: usize) -> Vec<Cplx> {
    samples.interior.iter().take(n).map(|p| frame.to_local(p.z)).collect()
}

/// Initialized model for a case, calibrated on its interior samples.
pub fn initial_model(case: &CaseSpec, net: &NetworkSpec, samples: &SampleSet, probe_size: usize) -> Result<PotentialModel> {
    let mode = match &case.domain.crack {
        Some(c) => ModelMode::Crack(*c),
        None => ModelMode::Plain,
    };
    let frame = match &mode {
        ModelMode::Plain => Frame::identity(),
        ModelMode::Crack(c) => c.frame(),
    };
    init_exp_aware(net, mode, &probe_batch(samples, &frame, probe_size))
}

/// Full-batch Adam on a fixed objective starting from `model`.
pub fn optimize(
    model: &PotentialModel,
    obj: &EnergyObjective,
    cfg: &TrainConfig,
    mut observer: impl FnMut(&HistoryRow),
) -> Result<(PotentialModel, History)> {
    cfg.validate()?;
    let mut params = model.params();
    let adam_cfg = AdamConfig { learning_rate: cfg.learning_rate, ..AdamConfig::default() };
    let mut adam = AdamState::new(params.len(), adam_cfg);
    let mut history = History::default();
    let mut best: Option<(f64, ParamVector)> = None;
    let start = Instant::now();
    for iteration in 0..cfg.iterations {
        let (e, g) = match obj.evaluate(&params, true) {
            Ok((e, Some(g))) => (e, g),
            Ok((_, None)) => unreachable!("gradient requested"),
            Err(Error::NonFiniteEnergy) => return Err(Error::Diverged { iteration, value: f64::NAN }),
            Err(e) => return Err(e),
        };
        if cfg.keep_best && best.as_ref().is_none_or(|b| e.total < b.0) {
            best = Some((e.total, params.clone()));
        }
        let grad_norm = g.norm();
        if !grad_norm.is_finite() {
            return Err(Error::Diverged { iteration, value: grad_norm });
        }
        let g = clip_gradient(g, cfg.clip_norm);
        adam.update(&mut params, &g)?;
        let wall_ms = if cfg.record_wall_time { start.elapsed().as_secs_f64() * 1e3 } else { 0.0 };
        let row = HistoryRow { iteration, energy: e, grad_norm, wall_ms };
        observer(&row);
        history.rows.push(row);
    }
    let params = best.map_or(params, |b| b.1);
    Ok((model.with_params(&params)?, history))
}

/// Samples the case, initializes both networks and trains them.
pub fn train(case: &CaseSpec, net: &NetworkSpec, cfg: &TrainConfig) -> Result<(PotentialModel, History)> {
    train_with_observer(case, net, cfg, |_| {})
}

pub fn train_with_observer(
    case: &CaseSpec,
    net: &NetworkSpec,
    cfg: &TrainConfig,
    observer: impl FnMut(&HistoryRow),
) -> Result<(PotentialModel, History)> {
    cfg.validate()?;
    let samples = build_samples(&case.domain, &case.sampling)?;
    let model = initial_model(case, net, &samples, cfg.probe_size)?;
    let obj = EnergyObjective::new(&model, case, &samples, cfg.alpha_u, cfg.loss_mode)?;
    optimize(&model, &obj, cfg, observer)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cases::{builtin_case, CaseName};
    use crate::grad::central_difference;
    use crate::jet::{I, ONE};

    fn tube_setup(hidden: Vec<usize>, n: usize) -> (CaseSpec, SampleSet, PotentialModel) {
        let mut case = builtin_case(CaseName::Tube);
        case.sampling.interior = crate::geometry::InteriorPlan::Uniform { n };
        case.sampling.boundary_per_segment = 20;
        let samples = build_samples(&case.domain, &case.sampling).unwrap();
        let model = initial_model(&case, &NetworkSpec::new(hidden, 3), &samples, 512).unwrap();
        (case, samples, model)
    }

    #[test]
    fn zero_model_energy_is_the_data_penalty() {
        let (case, samples, model) = tube_setup(vec![4], 50);
        let mut zero = model.clone();
        zero.set_params(&ParamVector(vec![0.0; model.n_params()])).unwrap();
        let e = assemble_energy(&zero, &case, &samples).unwrap();
        assert_eq!((e.internal, e.external), (0.0, 0.0));
        // tube data are homogeneous: ubar = 0 on symmetry lines
        assert_eq!(e.dirichlet_penalty, 0.0);
    }

    #[test]
    fn scaling_law() {
        let (case, samples, model) = tube_setup(vec![4, 4], 60);
        let e1 = assemble_energy(&model, &case, &samples).unwrap();
        let mut scaled = model.clone();
        scaled.scale_outputs(3.0);
        let e3 = assemble_energy(&scaled, &case, &samples).unwrap();
        assert!((e3.internal / e1.internal - 9.0).abs() < 1e-10);
        assert!((e3.external / e1.external - 3.0).abs() < 1e-10);
        assert!((e3.dirichlet_penalty / e1.dirichlet_penalty - 9.0).abs() < 1e-10);
    }

    #[test]
    fn gradient_matches_differences_plain() {
        let (case, samples, model) = tube_setup(vec![4, 4], 40);
        let obj = EnergyObjective::new(&model, &case, &samples, 1000.0, LossMode::Variational).unwrap();
        let p = model.params();
        let (_, g) = obj.value_and_gradient(&p).unwrap();
        let idx: Vec<usize> = (0..p.len()).step_by(3).collect();
        let fd = central_difference(|q| obj.value(q), &p, &idx, 1e-6).unwrap();
        for (k, &i) in idx.iter().enumerate() {
            let (a, b) = (g.0[i], fd[k]);
            assert!((a - b).abs() <= 1e-5 * b.abs().max(1e-3 * g.norm()), "{i}: {a} vs {b}");
        }
    }

    #[test]
    fn gradient_matches_differences_crack() {
        let mut case = builtin_case(CaseName::Occt);
        case.sampling.interior = crate::geometry::InteriorPlan::Grid { nx: 6, ny: 6 };
        case.sampling.boundary_per_segment = 5;
        let samples = build_samples(&case.domain, &case.sampling).unwrap();
        let model = initial_model(&case, &NetworkSpec::new(vec![3, 3], 1), &samples, 512).unwrap();
        let obj = EnergyObjective::new(&model, &case, &samples, 1000.0, LossMode::Variational).unwrap();
        let p = model.params();
        let (_, g) = obj.value_and_gradient(&p).unwrap();
        let idx: Vec<usize> = (0..p.len()).collect();
        let fd = central_difference(|q| obj.value(q), &p, &idx, 1e-6).unwrap();
        for &i in &idx {
            let (a, b) = (g.0[i], fd[i]);
            assert!((a - b).abs() <= 1e-5 * b.abs().max(1e-3 * g.norm()), "{i}: {a} vs {b}");
        }
    }

    #[test]
    fn residual_mode() {
        let mut case = builtin_case(CaseName::NonUniformTension);
        case.sampling.boundary_per_segment = 10;
        let samples = build_samples(&case.domain, &case.sampling).unwrap();
        let model = initial_model(&case, &NetworkSpec::new(vec![3], 2), &samples, 64).unwrap();
        let obj = EnergyObjective::new(&model, &case, &samples, 1.0, LossMode::BoundaryResidual).unwrap();
        let p = model.params();
        let (_, g) = obj.value_and_gradient(&p).unwrap();
        let idx: Vec<usize> = (0..p.len()).collect();
        let fd = central_difference(|q| obj.value(q), &p, &idx, 1e-6).unwrap();
        for &i in &idx {
            assert!((g.0[i] - fd[i]).abs() <= 1e-5 * fd[i].abs().max(1e-3 * g.norm()));
        }
        let tube = builtin_case(CaseName::Tube);
        let ts = build_samples(&tube.domain, &SamplingPlan::uniform(10, 0)).unwrap();
        let m = initial_model(&tube, &NetworkSpec::new(vec![3], 2), &ts, 8).unwrap();
        assert!(matches!(boundary_residual_loss(&m, &tube, &ts), Err(Error::UnsupportedBc(_))));
    }

    #[test]
    fn residual_of_a_constant_offset() {
        // phi = kappa^-1 2 mu delta gives u = delta everywhere in x
        let case = builtin_case(CaseName::NonUniformTension);
        let mut zero_data = case.clone();
        for seg in &mut zero_data.domain.segments {
            seg.bc_x = Bc::FIXED;
            seg.bc_y = Bc::FIXED;
        }
        let samples = build_samples(&zero_data.domain, &zero_data.sampling).unwrap();
        let mut model = PotentialModel::zeros(&NetworkSpec::new(vec![], 0), ModelMode::Plain);
        let delta = 0.01;
        let mat = case.material;
        model.nets[0].layers[0].b[0] = ONE * (2.0 * mat.mu() * delta / mat.kappa());
        let r = boundary_residual_loss(&model, &zero_data, &samples).unwrap();
        assert!((r - delta * delta).abs() < 1e-15, "{r}");
        let _ = I;
    }

    #[test]
    fn zero_iterations_return_the_initial_model() {
        let (case, samples, model) = tube_setup(vec![3], 30);
        let obj = EnergyObjective::new(&model, &case, &samples, 1000.0, LossMode::Variational).unwrap();
        let cfg = TrainConfig { iterations: 0, ..Default::default() };
        let (out, h) = optimize(&model, &obj, &cfg, |_| {}).unwrap();
        assert_eq!(out, model);
        assert!(h.rows.is_empty());
    }

    #[test]
    fn short_training_is_deterministic_and_descends() {
        let (case, samples, model) = tube_setup(vec![6, 6], 200);
        let obj = EnergyObjective::new(&model, &case, &samples, 1000.0, LossMode::Variational).unwrap();
        let cfg = TrainConfig { iterations: 200, ..Default::default() };
        let (m1, h1) = optimize(&model, &obj, &cfg, |_| {}).unwrap();
        let (m2, h2) = optimize(&model, &obj, &cfg, |_| {}).unwrap();
        assert_eq!(h1.to_csv(), h2.to_csv());
        assert_eq!(m1, m2);
        let mean = |r: &[HistoryRow]| r.iter().map(|x| x.energy.total).sum::<f64>() / r.len() as f64;
        assert!(mean(&h1.rows[150..]) < mean(&h1.rows[..50]));
    }

    #[test]
    fn keep_best_returns_the_lowest_recorded_iterate() {
        let (case, samples, model) = tube_setup(vec![4], 80);
        let obj = EnergyObjective::new(&model, &case, &samples, 1000.0, LossMode::Variational).unwrap();
        let cfg = TrainConfig { iterations: 60, learning_rate: 5e-2, keep_best: true, ..Default::default() };
        let (m, h) = optimize(&model, &obj, &cfg, |_| {}).unwrap();
        let lowest = h.rows.iter().map(|r| r.energy.total).fold(f64::INFINITY, f64::min);
        assert_eq!(obj.evaluate(&m.params(), false).unwrap().0.total, lowest);
        let (last, h2) = optimize(&model, &obj, &TrainConfig { keep_best: false, ..cfg }, |_| {}).unwrap();
        assert_eq!(h.to_csv(), h2.to_csv());
        assert_ne!(last, m);
    }

    use crate::geometry::SamplingPlan;
}
