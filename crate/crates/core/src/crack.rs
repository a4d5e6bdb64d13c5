//! Crack representation: the characteristic function `zeta`, the
//! traction-free ansatz for the potentials and crack-aligned frames.
//!
//! With regular networks `F1`, `F2` the potentials are
//!
//! ```text
//! phi   = zeta F1 + F2
//! omega = zeta F1* - F2*
//! psi   = omega - w phi'
//! ```
//!
//! evaluated in the local crack frame `w`, in which the crack lies on the
//! real axis.

use serde::{Deserialize, Serialize};

use crate::cvnn::{ModelMode, PotentialModel};
use crate::elasticity::{km_fields, FieldSample, Material};
use crate::error::{Error, Result};
use crate::jet::{BranchRule, Cplx, HoloJet2, ONE};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum CrackKind {
    /// Straight crack of length `2 half_length` centred at `center`.
    Internal { center: Cplx, half_length: f64, angle: f64 },
    /// Crack of the given length ending at `tip` and running from it in
    /// direction `angle + pi`.
    Edge { tip: Cplx, angle: f64, length: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrackSpec {
    pub kind: CrackKind,
    /// Radius of the excluded disk around each tip.
    pub core_radius: f64,
}

/// Rigid frame `w = conj(rot) (z - origin)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub origin: Cplx,
    pub rot: Cplx,
}

impl Frame {
    pub fn identity() -> Self {
        Self { origin: Cplx::new(0.0, 0.0), rot: ONE }
    }

    pub fn new(origin: Cplx, angle: f64) -> Self {
        Self { origin, rot: Cplx::from_polar(1.0, angle) }
    }

    pub fn angle(&self) -> f64 {
        self.rot.arg()
    }

    pub fn to_local(&self, z: Cplx) -> Cplx {
        self.rot.conj() * (z - self.origin)
    }

    pub fn to_global(&self, w: Cplx) -> Cplx {
        self.origin + self.rot * w
    }
}

/// A crack tip with its local frame (`x` ahead of the crack).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tip {
    pub id: usize,
    pub position: Cplx,
    pub angle: f64,
}

impl Tip {
    pub fn frame(&self) -> Frame {
        Frame::new(self.position, self.angle)
    }
}

impl CrackSpec {
    pub fn internal(center: Cplx, half_length: f64, angle: f64, core_radius: f64) -> Self {
        Self { kind: CrackKind::Internal { center, half_length, angle }, core_radius }
    }

    pub fn edge(tip: Cplx, angle: f64, length: f64, core_radius: f64) -> Self {
        Self { kind: CrackKind::Edge { tip, angle, length }, core_radius }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.length_scale() > 0.0) {
            return Err(Error::InvalidSpec(format!("crack length must be positive, got {}", self.length_scale())));
        }
        if !(self.core_radius > 0.0) {
            return Err(Error::InvalidSpec("crack core radius must be positive".into()));
        }
        Ok(())
    }

    /// Frame with the crack on the real axis: centred for internal cracks,
    /// tip at the origin for edge cracks.
    pub fn frame(&self) -> Frame {
        match self.kind {
            CrackKind::Internal { center, angle, .. } => Frame::new(center, angle),
            CrackKind::Edge { tip, angle, .. } => Frame::new(tip, angle),
        }
    }

    /// Half-length of an internal crack, full length of an edge crack.
    pub fn length_scale(&self) -> f64 {
        match self.kind {
            CrackKind::Internal { half_length, .. } => half_length,
            CrackKind::Edge { length, .. } => length,
        }
    }

    pub fn tips(&self) -> Vec<Tip> {
        match self.kind {
            CrackKind::Internal { center, half_length, angle } => {
                let d = Cplx::from_polar(half_length, angle);
                vec![
                    Tip { id: 0, position: center - d, angle: angle + std::f64::consts::PI },
                    Tip { id: 1, position: center + d, angle },
                ]
            }
            CrackKind::Edge { tip, angle, .. } => vec![Tip { id: 0, position: tip, angle }],
        }
    }

    /// Whether local point `w` sits on the crack line (within `tol`).
    pub fn on_cut(&self, w: Cplx, tol: f64) -> bool {
        if w.im.abs() > tol {
            return false;
        }
        match self.kind {
            CrackKind::Internal { half_length, .. } => w.re.abs() <= half_length,
            CrackKind::Edge { length, .. } => w.re <= 0.0 && w.re >= -length,
        }
    }
}

/// `zeta(w)` and its derivatives for a local point `w`.
pub fn zeta(w: Cplx, spec: &CrackSpec) -> Result<HoloJet2> {
    match spec.kind {
        CrackKind::Internal { half_length: a, .. } => {
            if w.im == 0.0 && w.re < -a {
                // zeta is odd; keeps the factor cuts off the left extension
                let j = zeta_internal(-w, a)?;
                return Ok(HoloJet2::new(-j.f, j.d1, -j.d2));
            }
            zeta_internal(w, a)
        }
        CrackKind::Edge { .. } => HoloJet2::seed(w).sqrt(BranchRule::Principal),
    }
}

fn zeta_internal(w: Cplx, a: f64) -> Result<HoloJet2> {
    let t = HoloJet2::seed(w).scale(Cplx::new(1.0 / a, 0.0));
    let lo = (t + Cplx::new(-1.0, 0.0)).sqrt(BranchRule::Principal)?;
    let hi = (t + ONE).sqrt(BranchRule::Principal)?;
    Ok((lo * hi).scale(Cplx::new(a, 0.0)))
}

/// Combines `zeta`, `F1(w)`, `F2(w)`, `F1(conj w)`, `F2(conj w)` into
/// `(phi, psi)`. `psi.d2` is not formed and left at zero.
pub fn assemble_crack_potentials(
    w: Cplx,
    z: &HoloJet2,
    f1: &HoloJet2,
    f2: &HoloJet2,
    f1_bar: &HoloJet2,
    f2_bar: &HoloJet2,
) -> (HoloJet2, HoloJet2) {
    let phi = *z * *f1 + *f2;
    let g1 = f1_bar.star();
    let g2 = f2_bar.star();
    let omega_f = z.f * g1.f - g2.f;
    let omega_d1 = z.d1 * g1.f + z.f * g1.d1 - g2.d1;
    let psi = HoloJet2::new(omega_f - w * phi.d1, omega_d1 - phi.d1 - w * phi.d2, Cplx::new(0.0, 0.0));
    (phi, psi)
}

/// Adjoint of [`assemble_crack_potentials`]: given `dL` for `phi` and `psi`,
/// returns the adjoints of `F1(w)`, `F2(w)`, `F1(conj w)`, `F2(conj w)`.
pub fn assemble_crack_adjoint(w: Cplx, z: &HoloJet2, g_phi: &HoloJet2, g_psi: &HoloJet2) -> [HoloJet2; 4] {
    let wc = w.conj();
    let mut gp = *g_phi;
    // psi = omega - w phi'; psi' = omega' - phi' - w phi''
    let g_om_f = g_psi.f;
    let g_om_1 = g_psi.d1;
    gp.d1 += -wc * g_psi.f - g_psi.d1;
    gp.d2 += -wc * g_psi.d1;

    let (zc, z1c, z2c) = (z.f.conj(), z.d1.conj(), z.d2.conj());
    let g_f1 = HoloJet2::new(
        zc * gp.f + z1c * gp.d1 + z2c * gp.d2,
        zc * gp.d1 + 2.0 * z1c * gp.d2,
        zc * gp.d2,
    );
    let g_f2 = gp;
    let g_g1 = HoloJet2::new(zc * g_om_f + z1c * g_om_1, zc * g_om_1, Cplx::new(0.0, 0.0));
    let g_g2 = HoloJet2::new(-g_om_f, -g_om_1, Cplx::new(0.0, 0.0));
    // G(w) = conj(F(conj w)) entrywise
    [g_f1, g_f2, g_g1.star(), g_g2.star()]
}

/// `(phi, psi)` of a crack-mode model in its local frame at global `z`.
pub fn crack_potentials(model: &PotentialModel, z: Cplx) -> Result<(HoloJet2, HoloJet2)> {
    let ModelMode::Crack(spec) = &model.mode else {
        return Err(Error::ModeMismatch("crack potentials need a crack-mode model"));
    };
    let w = spec.frame().to_local(z);
    crack_potentials_local(model, spec, w)
}

fn crack_potentials_local(model: &PotentialModel, spec: &CrackSpec, w: Cplx) -> Result<(HoloJet2, HoloJet2)> {
    let zj = zeta(w, spec)?;
    let f1 = model.nets[0].eval(w)?;
    let f2 = model.nets[1].eval(w)?;
    let f1b = model.nets[0].eval(w.conj())?;
    let f2b = model.nets[1].eval(w.conj())?;
    Ok(assemble_crack_potentials(w, &zj, &f1, &f2, &f1b, &f2b))
}

impl PotentialModel {
    /// Frame in which the potentials are expressed.
    pub fn frame(&self) -> Frame {
        match &self.mode {
            ModelMode::Plain => Frame::identity(),
            ModelMode::Crack(spec) => spec.frame(),
        }
    }

    pub fn crack(&self) -> Option<&CrackSpec> {
        match &self.mode {
            ModelMode::Plain => None,
            ModelMode::Crack(spec) => Some(spec),
        }
    }

    /// `(phi, psi)` at local point `w`.
    pub fn local_potentials(&self, w: Cplx) -> Result<(HoloJet2, HoloJet2)> {
        match &self.mode {
            ModelMode::Plain => self.forward_jets(w),
            ModelMode::Crack(spec) => crack_potentials_local(self, spec, w),
        }
    }

    /// Fields at local point `w`, expressed in the local frame.
    pub fn local_fields(&self, w: Cplx, mat: &Material) -> Result<FieldSample> {
        let (phi, psi) = self.local_potentials(w)?;
        Ok(km_fields(&phi, &psi, w, mat))
    }

    /// Fields at global point `z` in global components.
    pub fn fields(&self, z: Cplx, mat: &Material) -> Result<FieldSample> {
        let frame = self.frame();
        Ok(self.local_fields(frame.to_local(z), mat)?.rotated(frame.angle()))
    }
}

/// Largest traction `|sigma n|` on both crack faces relative to the largest
/// stress magnitude seen at the same points.
///
/// Faces are probed at `+-1e-6 a` off the cut, skipping 2% of the crack
/// length next to each tip.
pub fn traction_free_residual(model: &PotentialModel, mat: &Material, n_face_points: usize) -> Result<f64> {
    let Some(spec) = model.crack() else {
        return Err(Error::ModeMismatch("traction residual needs a crack-mode model"));
    };
    let (lo, hi, len) = match spec.kind {
        CrackKind::Internal { half_length: a, .. } => (-a, a, 2.0 * a),
        CrackKind::Edge { length, .. } => (-length, 0.0, length),
    };
    let eps = 1e-6 * spec.length_scale();
    let (a, b) = (lo + 0.02 * len, hi - 0.02 * len);
    let mut worst: f64 = 0.0;
    let mut peak: f64 = 0.0;
    for k in 0..n_face_points {
        let x = a + (b - a) * (k as f64 + 0.5) / n_face_points as f64;
        for side in [1.0, -1.0] {
            let s = model.local_fields(Cplx::new(x, side * eps), mat)?;
            worst = worst.max(s.sxy.hypot(s.syy));
            peak = peak.max(s.sxx.abs().max(s.syy.abs()).max(s.sxy.abs()));
        }
    }
    if peak == 0.0 {
        return Ok(0.0);
    }
    Ok(worst / peak)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cvnn::{init_exp_aware, NetworkSpec};
    use crate::elasticity::PlaneMode;
    use crate::jet::{wirtinger_residual, I, ZERO};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Cplx {
        Cplx::new(re, im)
    }

    fn unit_internal() -> CrackSpec {
        CrackSpec::internal(ZERO, 1.0, 0.0, 1e-3)
    }

    fn mat() -> Material {
        Material::new(1.0, 0.3, PlaneMode::PlaneStrain).unwrap()
    }

    fn random_crack_model(seed: u64, spec: CrackSpec) -> PotentialModel {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let probe: Vec<Cplx> = (0..64).map(|_| c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))).collect();
        init_exp_aware(&NetworkSpec::new(vec![6, 6], seed), ModelMode::Crack(spec), &probe).unwrap()
    }

    #[test]
    fn zeta_examples() {
        let s = unit_internal();
        let z = zeta(c(2.0, 0.0), &s).unwrap();
        assert!((z.f - c(3f64.sqrt(), 0.0)).norm() < 1e-15);
        assert!((zeta(c(0.0, 1e-12), &s).unwrap().f - I).norm() < 1e-9);
        assert!((zeta(c(0.0, -1e-12), &s).unwrap().f + I).norm() < 1e-9);
        let far = zeta(c(10.0, 0.0), &s).unwrap().f / 10.0;
        assert!((far.re - 0.99_f64.sqrt()).abs() < 1e-12 && far.re > 0.9949 && far.re < 0.9951);
    }

    #[test]
    fn zeta_is_continuous_left_of_the_crack() {
        let s = unit_internal();
        let on = zeta(c(-3.0, 0.0), &s).unwrap();
        let above = zeta(c(-3.0, 1e-10), &s).unwrap();
        let below = zeta(c(-3.0, -1e-10), &s).unwrap();
        assert!((on.f - above.f).norm() < 1e-9 && (on.f - below.f).norm() < 1e-9);
        assert!((on.d1 - above.d1).norm() < 1e-9 && (on.d2 - above.d2).norm() < 1e-9);
        assert!(on.f.re < 0.0);
    }

    #[test]
    fn zeta_rejects_the_cut() {
        assert!(matches!(zeta(c(0.3, 0.0), &unit_internal()), Err(Error::BranchCutHit(_))));
        assert!(matches!(zeta(c(-0.3, 0.0), &CrackSpec::edge(ZERO, 0.0, 2.0, 1e-3)), Err(Error::BranchCutHit(_))));
    }

    #[test]
    fn zeta_jump_is_antisymmetric() {
        for s in [-0.9, -0.5, 0.0, 0.4, 0.95] {
            let up = zeta(c(s, 1e-13), &unit_internal()).unwrap().f;
            let dn = zeta(c(s, -1e-13), &unit_internal()).unwrap().f;
            assert!((up + dn).norm() < 1e-6, "{s}: {up} {dn}");
        }
    }

    #[test]
    fn zeta_jets_match_differences() {
        for spec in [unit_internal(), CrackSpec::edge(ZERO, 0.0, 2.0, 1e-3)] {
            for w in [c(1.5, 0.3), c(-2.0, 0.7), c(0.2, -0.9), c(-3.0, 0.0)] {
                let edge_cut = matches!(spec.kind, CrackKind::Edge { .. }) && w.im == 0.0 && w.re < 0.0;
                if spec.on_cut(w, 0.0) || edge_cut {
                    continue;
                }
                let j = zeta(w, &spec).unwrap();
                let (d1, _) = crate::jet::fd_derivatives(|x| zeta(x, &spec).unwrap().f, w + c(0.0, 1e-3 * w.im.signum()), 1e-5);
                let j2 = zeta(w + c(0.0, 1e-3 * w.im.signum()), &spec).unwrap();
                assert!((d1 - j2.d1).norm() < 1e-6 * (1.0 + d1.norm()), "{w}");
                assert!(j.is_finite());
            }
        }
    }

    #[test]
    fn tips_and_frames() {
        let s = CrackSpec::internal(ZERO, 2.0, std::f64::consts::FRAC_PI_4, 1e-3);
        let t = s.tips();
        let d = Cplx::from_polar(2.0, std::f64::consts::FRAC_PI_4);
        assert!((t[0].position + d).norm() < 1e-15 && (t[1].position - d).norm() < 1e-15);
        let f = s.frame();
        assert!((f.to_local(d) - c(2.0, 0.0)).norm() < 1e-15);
        assert!((f.to_global(f.to_local(c(0.3, -1.2))) - c(0.3, -1.2)).norm() < 1e-15);
        // ahead of the left tip is away from the centre
        assert!((t[0].frame().to_local(-2.0 * d) - c(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn f1_zero_gives_continuous_potentials() {
        // F1 = 0, F2 = w: phi = w, omega = -w; the faces carry no jump
        let spec = unit_internal();
        let z = zeta(c(0.3, 1e-9), &spec).unwrap();
        let f2 = HoloJet2::seed(c(0.3, 1e-9));
        let f2b = HoloJet2::seed(c(0.3, -1e-9));
        let (phi_u, psi_u) = assemble_crack_potentials(c(0.3, 1e-9), &z, &HoloJet2::zero(), &f2, &HoloJet2::zero(), &f2b);
        let zl = zeta(c(0.3, -1e-9), &spec).unwrap();
        let (phi_l, psi_l) = assemble_crack_potentials(c(0.3, -1e-9), &zl, &HoloJet2::zero(), &f2b, &HoloJet2::zero(), &f2);
        assert!((phi_u.f - phi_l.f).norm() < 1e-8 && (psi_u.f - psi_l.f).norm() < 1e-8);
        // Riemann-Hilbert sum (phi + omega)+ + (phi + omega)- with omega = -w
        let rh = (phi_u.f - c(0.3, 1e-9)) + (phi_l.f - c(0.3, -1e-9));
        assert!(rh.norm() < 1e-12);
    }

    #[test]
    fn constant_f1_opens_the_crack() {
        let spec = unit_internal();
        let m = mat();
        let mut model = PotentialModel::zeros(&NetworkSpec::new(vec![], 0), ModelMode::Crack(spec));
        model.nets[0].layers[0].b[0] = ONE;
        let up = model.local_fields(c(0.0, 1e-10), &m).unwrap();
        let dn = model.local_fields(c(0.0, -1e-10), &m).unwrap();
        let jump = up.uy - dn.uy;
        // phi = zeta, omega = zeta: 2 mu u = kappa phi - w conj(phi') - conj(psi)
        // at w = 0+: phi = i, psi = omega = i, so 2 mu uy = kappa + 1
        let expect = 2.0 * (m.kappa() + 1.0) / (2.0 * m.mu());
        assert!((jump - expect).abs() < 1e-6, "{jump} vs {expect}");
    }

    #[test]
    fn near_tip_slope_is_minus_half() {
        let spec = unit_internal();
        let model = random_crack_model(3, spec);
        let f1 = model.nets[0].eval(c(1.0, 0.0)).unwrap().f;
        assert!(f1.norm() > 1e-3);
        let rs = [1e-4, 1e-3, 1e-2];
        let s: Vec<f64> = rs.iter().map(|&r| model.local_fields(c(1.0 + r, 0.0), &mat()).unwrap().syy.abs()).collect();
        let slope = (s[2].ln() - s[0].ln()) / (rs[2].ln() - rs[0].ln());
        assert!((slope + 0.5).abs() < 0.02, "{slope}");
    }

    #[test]
    fn potentials_are_holomorphic_off_the_cut() {
        let spec = unit_internal();
        let model = random_crack_model(5, spec);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let w = c(rng.random_range(-2.0..2.0), rng.random_range(0.01..2.0) * if rng.random::<bool>() { 1.0 } else { -1.0 });
            for pick in 0..2 {
                let f = |x: Cplx| {
                    let (p, q) = model.local_potentials(x).unwrap();
                    if pick == 0 { p.f } else { q.f }
                };
                let scale = 1.0 + f(w).norm();
                assert!(wirtinger_residual(f, w, 1e-5).norm() < 1e-6 * scale);
            }
        }
    }

    #[test]
    fn psi_derivative_is_consistent() {
        let spec = unit_internal();
        let model = random_crack_model(6, spec);
        for w in [c(0.4, 0.5), c(-1.4, -0.2), c(2.0, 0.1)] {
            let (d1, _) = crate::jet::fd_derivatives(|x| model.local_potentials(x).unwrap().1.f, w, 1e-5);
            let (phi, psi) = model.local_potentials(w).unwrap();
            assert!((d1 - psi.d1).norm() < 1e-6 * (1.0 + d1.norm()));
            let (p1, p2) = crate::jet::fd_derivatives(|x| model.local_potentials(x).unwrap().0.f, w, 1e-5);
            assert!((p1 - phi.d1).norm() < 1e-6 * (1.0 + p1.norm()));
            assert!((p2 - phi.d2).norm() < 1e-4 * (1.0 + p2.norm()));
        }
    }

    #[test]
    fn faces_are_traction_free() {
        for seed in 0..4 {
            let model = random_crack_model(seed, unit_internal());
            let r = traction_free_residual(&model, &mat(), 64).unwrap();
            assert!(r < 1e-4, "seed {seed}: {r}");
        }
        let zero = PotentialModel::zeros(&NetworkSpec::new(vec![3], 0), ModelMode::Crack(unit_internal()));
        assert_eq!(traction_free_residual(&zero, &mat(), 8).unwrap(), 0.0);
        let plain = PotentialModel::zeros(&NetworkSpec::new(vec![3], 0), ModelMode::Plain);
        assert!(matches!(traction_free_residual(&plain, &mat(), 8), Err(Error::ModeMismatch(_))));
    }

    #[test]
    fn edge_faces_are_traction_free() {
        let spec = CrackSpec::edge(c(2.0, 4.0), 0.0, 2.0, 1e-3);
        let model = random_crack_model(8, spec);
        assert!(traction_free_residual(&model, &mat(), 64).unwrap() < 1e-4);
    }

    #[test]
    fn crack_adjoint_matches_differences() {
        let spec = unit_internal();
        let w = c(0.6, 0.8);
        let zj = zeta(w, &spec).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut rj = || HoloJet2::new(
            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
        );
        let ins = [rj(), rj(), rj(), rj()];
        let gphi = rj();
        let gpsi = HoloJet2::new(rj().f, rj().f, ZERO);
        let loss = |x: &[HoloJet2; 4]| {
            let (p, q) = assemble_crack_potentials(w, &zj, &x[0], &x[1], &x[2], &x[3]);
            let dot = |g: &HoloJet2, v: &HoloJet2| (g.f.conj() * v.f + g.d1.conj() * v.d1 + g.d2.conj() * v.d2).re;
            dot(&gphi, &p) + dot(&gpsi, &q)
        };
        let adj = assemble_crack_adjoint(w, &zj, &gphi, &gpsi);
        let base = loss(&ins);
        for k in 0..4 {
            for slot in 0..3 {
                for dir in [ONE, I] {
                    let mut x = ins;
                    match slot { 0 => x[k].f += dir, 1 => x[k].d1 += dir, _ => x[k].d2 += dir }
                    let fd = loss(&x) - base;
                    let a = [adj[k].f, adj[k].d1, adj[k].d2][slot];
                    let an = if dir == ONE { a.re } else { a.im };
                    assert!((fd - an).abs() < 1e-12 * (1.0 + fd.abs()), "k {k} slot {slot}: {an} vs {fd}");
                }
            }
        }
    }
}
