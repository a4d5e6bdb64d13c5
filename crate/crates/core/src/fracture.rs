//! Contour integrals and stress intensity factors.
//!
//! All contour quantities are evaluated in the crack-tip frame: `x` along
//! the crack extension direction, `y` normal to the crack.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::cases::CaseSpec;
use crate::crack::{CrackKind, Tip};
use crate::cvnn::PotentialModel;
use crate::elasticity::{kolosov_kappa, FieldSample, Material};
use crate::error::{Error, Result};
use crate::geometry::DomainSpec;
use crate::jet::Cplx;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    I,
    II,
}

/// Unit-K first-term Williams fields in crack-tip coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AuxFields {
    pub sxx: f64,
    pub syy: f64,
    pub sxy: f64,
    pub ux: f64,
    pub uy: f64,
    pub dux_dx: f64,
    pub duy_dx: f64,
    pub dux_dy: f64,
    pub duy_dy: f64,
}

impl AuxFields {
    pub fn to_sample(&self) -> FieldSample {
        FieldSample {
            sxx: self.sxx,
            syy: self.syy,
            sxy: self.sxy,
            ux: self.ux,
            uy: self.uy,
            dux_dx: self.dux_dx,
            duy_dx: self.duy_dx,
            dux_dy: self.dux_dy,
            duy_dy: self.duy_dy,
        }
    }
}

pub fn williams_aux(r: f64, theta: f64, mode: Mode, mat: &Material) -> AuxFields {
    let kappa = kolosov_kappa(mat);
    let mu = mat.mu();
    let (s, c) = (theta / 2.0).sin_cos();
    let (s3, c3) = (1.5 * theta).sin_cos();
    let f = 1.0 / (TAU * r).sqrt();
    let amp = (r / TAU).sqrt() / (2.0 * mu);
    // displacement angular functions g and their theta derivatives
    let (sxx, syy, sxy, gx, gy, dgx, dgy) = match mode {
        Mode::I => (
            f * c * (1.0 - s * s3),
            f * c * (1.0 + s * s3),
            f * c * s * c3,
            c * (kappa - 1.0 + 2.0 * s * s),
            s * (kappa + 1.0 - 2.0 * c * c),
            -0.5 * s * (kappa - 1.0 + 2.0 * s * s) + 2.0 * s * c * c,
            0.5 * c * (kappa + 1.0 - 2.0 * c * c) + 2.0 * s * s * c,
        ),
        Mode::II => (
            -f * s * (2.0 + c * c3),
            f * s * c * c3,
            f * c * (1.0 - s * s3),
            s * (kappa + 1.0 + 2.0 * c * c),
            -c * (kappa - 1.0 - 2.0 * s * s),
            0.5 * c * (kappa + 1.0 + 2.0 * c * c) - 2.0 * s * s * c,
            0.5 * s * (kappa - 1.0 - 2.0 * s * s) + 2.0 * s * c * c,
        ),
    };
    let (st, ct) = theta.sin_cos();
    // d/dr (sqrt(r) g) = g / (2 sqrt r); d/dtheta / r = g' / sqrt(r)
    let k = (TAU * r).sqrt() * 2.0 * mu;
    let d_dx = |g: f64, dg: f64| (ct * 0.5 * g - st * dg) / k;
    let d_dy = |g: f64, dg: f64| (st * 0.5 * g + ct * dg) / k;
    AuxFields {
        sxx,
        syy,
        sxy,
        ux: amp * gx,
        uy: amp * gy,
        dux_dx: d_dx(gx, dgx),
        duy_dx: d_dx(gy, dgy),
        dux_dy: d_dy(gx, dgx),
        duy_dy: d_dy(gy, dgy),
    }
}

/// Superposed first-term Williams fields of a tip, in global components.
pub fn williams_field(tip: Tip, k1: f64, k2: f64, mat: Material) -> impl Fn(Cplx) -> Result<FieldSample> {
    move |z: Cplx| {
        let w = Cplx::from_polar(1.0, -tip.angle) * (z - tip.position);
        let (r, th) = (w.norm(), w.arg());
        let a = williams_aux(r, th, Mode::I, &mat);
        let b = williams_aux(r, th, Mode::II, &mat);
        let mix = |x: f64, y: f64| k1 * x + k2 * y;
        let s = FieldSample {
            sxx: mix(a.sxx, b.sxx),
            syy: mix(a.syy, b.syy),
            sxy: mix(a.sxy, b.sxy),
            ux: mix(a.ux, b.ux),
            uy: mix(a.uy, b.uy),
            dux_dx: mix(a.dux_dx, b.dux_dx),
            duy_dx: mix(a.duy_dx, b.duy_dx),
            dux_dy: mix(a.dux_dy, b.dux_dy),
            duy_dy: mix(a.duy_dy, b.duy_dy),
        };
        Ok(s.rotated(tip.angle))
    }
}

/// Stress intensity factors at one tip.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SifResult {
    pub k1: f64,
    pub k2: f64,
    pub tip: usize,
    pub radius: f64,
    pub n_quadrature: usize,
}

/// Contour point in tip coordinates: local position, outward normal, arc weight.
fn contour(radius: f64, n: usize) -> impl Iterator<Item = (Cplx, f64, f64)> {
    let ds = radius * TAU / n as f64;
    (0..n).map(move |k| {
        let th = -PI + (k as f64 + 0.5) * TAU / n as f64;
        (Cplx::from_polar(radius, th), th, ds)
    })
}

/// Global sample re-expressed in the tip frame.
fn local_sample<F>(provider: &F, tip: &Tip, w: Cplx) -> Result<FieldSample>
where
    F: Fn(Cplx) -> Result<FieldSample>,
{
    let z = tip.position + Cplx::from_polar(1.0, tip.angle) * w;
    Ok(provider(z)?.rotated(-tip.angle))
}

/// Rice J-integral on a circle around `tip`.
pub fn j_integral<F>(provider: F, tip: &Tip, radius: f64, n: usize, mat: &Material) -> Result<f64>
where
    F: Fn(Cplx) -> Result<FieldSample>,
{
    let mut j = 0.0;
    for (w, th, ds) in contour(radius, n) {
        let s = local_sample(&provider, tip, w)?;
        let (nx, ny) = (th.cos(), th.sin());
        let (exx, eyy, exy) = mat.strain(s.sxx, s.syy, s.sxy);
        let energy = 0.5 * (s.sxx * exx + s.syy * eyy + 2.0 * s.sxy * exy);
        let (tx, ty) = (s.sxx * nx + s.sxy * ny, s.sxy * nx + s.syy * ny);
        j += (energy * nx - (tx * s.dux_dx + ty * s.duy_dx)) * ds;
    }
    Ok(j)
}

/// Interaction integral against the unit auxiliary field of `mode`.
pub fn interaction_integral<F>(provider: F, tip: &Tip, radius: f64, n: usize, mode: Mode, mat: &Material) -> Result<f64>
where
    F: Fn(Cplx) -> Result<FieldSample>,
{
    let mut total = 0.0;
    for (w, th, ds) in contour(radius, n) {
        let s = local_sample(&provider, tip, w)?;
        let a = williams_aux(radius, th, mode, mat);
        total += interaction_density(&s, &a, th, mat) * ds;
    }
    Ok(total)
}

fn interaction_density(s: &FieldSample, a: &AuxFields, th: f64, mat: &Material) -> f64 {
    let (nx, ny) = (th.cos(), th.sin());
    let (axx, ayy, axy) = mat.strain(a.sxx, a.syy, a.sxy);
    let cross = s.sxx * axx + s.syy * ayy + 2.0 * s.sxy * axy;
    let (tx, ty) = (s.sxx * nx + s.sxy * ny, s.sxy * nx + s.syy * ny);
    let (atx, aty) = (a.sxx * nx + a.sxy * ny, a.sxy * nx + a.syy * ny);
    cross * nx - (tx * a.dux_dx + ty * a.duy_dx) - (atx * s.dux_dx + aty * s.duy_dx)
}

/// `K_I`, `K_II` from two interaction integrals.
pub fn sif_from_provider<F>(provider: F, tip: &Tip, radius: f64, n: usize, mat: &Material) -> Result<SifResult>
where
    F: Fn(Cplx) -> Result<FieldSample>,
{
    let mut i1 = 0.0;
    let mut i2 = 0.0;
    for (w, th, ds) in contour(radius, n) {
        let s = local_sample(&provider, tip, w)?;
        i1 += interaction_density(&s, &williams_aux(radius, th, Mode::I, mat), th, mat) * ds;
        i2 += interaction_density(&s, &williams_aux(radius, th, Mode::II, mat), th, mat) * ds;
    }
    let half = 0.5 * mat.e_prime();
    Ok(SifResult { k1: half * i1, k2: half * i2, tip: tip.id, radius, n_quadrature: n })
}

/// Fails when any contour point leaves the domain.
pub fn check_contour(domain: &DomainSpec, tip: &Tip, radius: f64, n: usize) -> Result<()> {
    for (w, _, _) in contour(radius, n) {
        let z = tip.position + Cplx::from_polar(1.0, tip.angle) * w;
        if !domain.indicator(z) {
            return Err(Error::ContourOutsideDomain { tip: tip.position, radius });
        }
    }
    Ok(())
}

fn model_tip(model: &PotentialModel, tip_id: usize) -> Result<Tip> {
    let crack = model.crack().ok_or(Error::ModeMismatch("case has no crack"))?;
    crack
        .tips()
        .into_iter()
        .find(|t| t.id == tip_id)
        .ok_or_else(|| Error::InvalidSpec(format!("crack has no tip {tip_id}")))
}

/// Interaction-integral SIFs of a trained crack-mode model.
pub fn sif_from_interaction(model: &PotentialModel, case: &CaseSpec, tip_id: usize, radius: f64, n: usize) -> Result<SifResult> {
    let tip = model_tip(model, tip_id)?;
    check_contour(&case.domain, &tip, radius, n)?;
    let mat = case.material;
    sif_from_provider(|z| model.fields(z, &mat), &tip, radius, n, &mat)
}

/// J-integral of a trained crack-mode model.
pub fn model_j_integral(model: &PotentialModel, case: &CaseSpec, tip_id: usize, radius: f64, n: usize) -> Result<f64> {
    let tip = model_tip(model, tip_id)?;
    check_contour(&case.domain, &tip, radius, n)?;
    let mat = case.material;
    j_integral(|z| model.fields(z, &mat), &tip, radius, n, &mat)
}

/// `m` equally spaced radii in `[0.01, 0.1] * length`.
pub fn near_field_radii(length: f64, m: usize) -> Vec<f64> {
    (0..m).map(|k| length * (0.01 + 0.09 * k as f64 / (m.max(2) - 1) as f64)).collect()
}

/// Straight-line fit of `sqrt(2 pi r) sigma` ahead of the tip, extrapolated to `r = 0`.
pub fn sif_near_field<F>(provider: F, tip: &Tip, radii: &[f64]) -> Result<SifResult>
where
    F: Fn(Cplx) -> Result<FieldSample>,
{
    if radii.is_empty() {
        return Err(Error::InvalidSpec("near-field fit needs at least one radius".into()));
    }
    let mut k1 = Vec::with_capacity(radii.len());
    let mut k2 = Vec::with_capacity(radii.len());
    for &r in radii {
        let s = local_sample(&provider, tip, Cplx::new(r, 0.0))?;
        let scale = (TAU * r).sqrt();
        k1.push(scale * s.syy);
        k2.push(scale * s.sxy);
    }
    let radius = radii.iter().cloned().fold(0.0, f64::max);
    Ok(SifResult { k1: intercept(radii, &k1), k2: intercept(radii, &k2), tip: tip.id, radius, n_quadrature: radii.len() })
}

/// Least-squares intercept of `y` against `x`; the mean for one point.
fn intercept(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if sxx == 0.0 {
        return my;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    my - sxy / sxx * mx
}

/// Near-field SIFs of a trained model on the default radii.
pub fn model_sif_near_field(model: &PotentialModel, case: &CaseSpec, tip_id: usize) -> Result<SifResult> {
    let tip = model_tip(model, tip_id)?;
    let length = model.crack().map(|c| c.length_scale()).unwrap_or(1.0);
    let mat = case.material;
    sif_near_field(|z| model.fields(z, &mat), &tip, &near_field_radii(length, 10))
}

/// Crack opening `u_y(+) - u_y(-)` in the crack frame at the mouth of an edge
/// crack or the centre of an internal one.
pub fn crack_opening(model: &PotentialModel, mat: &Material) -> Result<f64> {
    let crack = model.crack().ok_or(Error::ModeMismatch("case has no crack"))?;
    let x = match crack.kind {
        CrackKind::Edge { length, .. } => -length,
        CrackKind::Internal { .. } => 0.0,
    };
    let eps = 1e-9 * crack.length_scale();
    let up = model.local_fields(Cplx::new(x, eps), mat)?;
    let dn = model.local_fields(Cplx::new(x, -eps), mat)?;
    Ok(up.uy - dn.uy)
}

/// Mean and sample standard deviation.
pub fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (m, 0.0);
    }
    let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elasticity::PlaneMode;

    fn steel() -> Material {
        Material::new(210_000.0, 0.3, PlaneMode::PlaneStrain).unwrap()
    }

    fn tip_at(p: Cplx, angle: f64) -> Tip {
        Tip { id: 0, position: p, angle }
    }

    #[test]
    fn aux_examples() {
        let m = steel();
        for r in [0.01, 0.5, 3.0] {
            let a = williams_aux(r, 0.0, Mode::I, &m);
            assert!((a.syy - 1.0 / (TAU * r).sqrt()).abs() < 1e-14 && a.sxy.abs() < 1e-14);
            let b = williams_aux(r, 0.0, Mode::II, &m);
            assert!((b.sxy - 1.0 / (TAU * r).sqrt()).abs() < 1e-14);
        }
    }

    #[test]
    fn aux_equilibrium_and_kinematics() {
        let m = steel();
        let h = 1e-6;
        for mode in [Mode::I, Mode::II] {
            for th in [-2.5, -1.0, 0.3, 1.7, 2.9] {
                let w = Cplx::from_polar(0.5, th);
                let at = |p: Cplx| williams_aux(p.norm(), p.arg(), mode, &m);
                let (px, mx) = (at(w + h), at(w - h));
                let (py, my) = (at(w + Cplx::new(0.0, h)), at(w - Cplx::new(0.0, h)));
                let rx = (px.sxx - mx.sxx + py.sxy - my.sxy) / (2.0 * h);
                let ry = (px.sxy - mx.sxy + py.syy - my.syy) / (2.0 * h);
                assert!(rx.abs() < 1e-6 && ry.abs() < 1e-6, "{mode:?} {th}: {rx} {ry}");
                let a = at(w);
                assert!((a.dux_dx - (px.ux - mx.ux) / (2.0 * h)).abs() < 1e-9);
                assert!((a.duy_dx - (px.uy - mx.uy) / (2.0 * h)).abs() < 1e-9);
                assert!((a.dux_dy - (py.ux - my.ux) / (2.0 * h)).abs() < 1e-9);
                assert!((a.duy_dy - (py.uy - my.uy) / (2.0 * h)).abs() < 1e-9);
                let (exx, eyy, exy) = m.strain(a.sxx, a.syy, a.sxy);
                assert!((exx - a.dux_dx).abs() < 1e-12 * (1.0 + exx.abs()) * 1e3);
                assert!((eyy - a.duy_dy).abs() < 1e-9);
                assert!((2.0 * exy - (a.dux_dy + a.duy_dx)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn j_of_williams_fields() {
        let m = steel();
        let tip = tip_at(Cplx::new(0.3, -0.2), 0.7);
        let ep = m.e_prime();
        let j = j_integral(williams_field(tip, 1.0, 0.0, m), &tip, 0.4, 256, &m).unwrap();
        assert!((j * ep - 1.0).abs() < 5e-3, "{}", j * ep);
        let j = j_integral(williams_field(tip, 2.0, 1.0, m), &tip, 0.4, 256, &m).unwrap();
        assert!((j * ep - 5.0).abs() < 5.0 * 5e-3);
        let zero = j_integral(|_| Ok(FieldSample::default()), &tip, 0.4, 256, &m).unwrap();
        assert_eq!(zero, 0.0);
    }

    #[test]
    fn interaction_of_williams_fields() {
        let m = steel();
        let ep = m.e_prime();
        let tip = tip_at(Cplx::new(-1.0, 2.0), -2.2);
        let p = williams_field(tip, 1.0, 0.0, m);
        let i1 = interaction_integral(&p, &tip, 0.3, 256, Mode::I, &m).unwrap();
        let i2 = interaction_integral(&p, &tip, 0.3, 256, Mode::II, &m).unwrap();
        assert!((i1 * ep / 2.0 - 1.0).abs() < 5e-3);
        assert!(i2.abs() * ep / 2.0 < 5e-3);
        let q = williams_field(tip, 2.0, 3.0, m);
        let i2 = interaction_integral(&q, &tip, 0.3, 256, Mode::II, &m).unwrap();
        assert!((i2 * ep - 6.0).abs() < 6.0 * 5e-3);
    }

    #[test]
    fn path_independence() {
        let m = Material::new(100_000.0, 0.3, PlaneMode::PlaneStress).unwrap();
        let tip = tip_at(Cplx::new(0.0, 0.0), 0.4);
        let p = williams_field(tip, 3.0, -1.5, m);
        for r in [0.2, 0.45, 1.0] {
            let s = sif_from_provider(&p, &tip, r, 256, &m).unwrap();
            assert!((s.k1 - 3.0).abs() < 3.0 * 5e-3 && (s.k2 + 1.5).abs() < 1.5 * 5e-3, "{r}: {s:?}");
        }
    }

    #[test]
    fn near_field_examples() {
        let m = steel();
        let tip = tip_at(Cplx::new(1.0, 1.0), 1.1);
        let radii = near_field_radii(2.0, 10);
        assert!((radii[0] - 0.02).abs() < 1e-15 && (radii[9] - 0.2).abs() < 1e-15);
        let s = sif_near_field(williams_field(tip, 1.0, 0.0, m), &tip, &radii).unwrap();
        assert!((s.k1 - 1.0).abs() < 1e-12 && s.k2.abs() < 1e-12);
        let z = sif_near_field(|_| Ok(FieldSample::default()), &tip, &radii).unwrap();
        assert_eq!((z.k1, z.k2), (0.0, 0.0));
    }

    #[test]
    fn intercept_of_a_line() {
        assert!((intercept(&[1.0, 2.0, 3.0], &[5.0, 7.0, 9.0]) - 3.0).abs() < 1e-14);
        assert_eq!(intercept(&[1.0], &[4.0]), 4.0);
    }

    #[test]
    fn contour_leaving_the_domain() {
        let case = crate::cases::sent_case(2.0);
        let tip = case.domain.crack.unwrap().tips()[0];
        assert!(check_contour(&case.domain, &tip, 1.0, 64).is_ok());
        assert!(matches!(check_contour(&case.domain, &tip, 2.5, 64), Err(Error::ContourOutsideDomain { .. })));
    }

    #[test]
    fn mean_std_examples() {
        assert_eq!(mean_std(&[2.0, 4.0]), (3.0, 2f64.sqrt()));
        assert_eq!(mean_std(&[1.0]), (1.0, 0.0));
    }
}
