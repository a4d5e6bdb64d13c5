//! Material model and field reconstruction from potential jets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::{Cplx, HoloJet2, I};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlaneMode {
    PlaneStress,
    PlaneStrain,
}

/// Isotropic linear-elastic material.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Material {
    pub e: f64,
    pub nu: f64,
    pub mode: PlaneMode,
}

impl Material {
    pub fn new(e: f64, nu: f64, mode: PlaneMode) -> Result<Self> {
        let m = Self { e, nu, mode };
        m.validate()?;
        Ok(m)
    }

    /// From Lamé constants.
    pub fn from_lame(lambda: f64, mu: f64, mode: PlaneMode) -> Result<Self> {
        let e = mu * (3.0 * lambda + 2.0 * mu) / (lambda + mu);
        let nu = lambda / (2.0 * (lambda + mu));
        Self::new(e, nu, mode)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.e > 0.0 && self.e.is_finite()) {
            return Err(Error::InvalidSpec(format!("E must be positive, got {}", self.e)));
        }
        if !(0.0..0.5).contains(&self.nu) {
            return Err(Error::InvalidSpec(format!("nu must lie in [0, 0.5), got {}", self.nu)));
        }
        Ok(())
    }

    pub fn mu(&self) -> f64 {
        self.e / (2.0 * (1.0 + self.nu))
    }

    pub fn lambda(&self) -> f64 {
        self.e * self.nu / ((1.0 + self.nu) * (1.0 - 2.0 * self.nu))
    }

    pub fn kappa(&self) -> f64 {
        kolosov_kappa(self)
    }

    /// Effective modulus relating J to the SIFs.
    pub fn e_prime(&self) -> f64 {
        match self.mode {
            PlaneMode::PlaneStress => self.e,
            PlaneMode::PlaneStrain => self.e / (1.0 - self.nu * self.nu),
        }
    }

    /// Out-of-plane stress and its derivative w.r.t. `sxx` (equal to that w.r.t. `syy`).
    fn szz(&self, sxx: f64, syy: f64) -> (f64, f64) {
        match self.mode {
            PlaneMode::PlaneStress => (0.0, 0.0),
            PlaneMode::PlaneStrain => (self.nu * (sxx + syy), self.nu),
        }
    }

    /// In-plane strains `(exx, eyy, exy)` from stresses; `exy` is the tensor shear.
    pub fn strain(&self, sxx: f64, syy: f64, sxy: f64) -> (f64, f64, f64) {
        let (szz, _) = self.szz(sxx, syy);
        let exx = (sxx - self.nu * (syy + szz)) / self.e;
        let eyy = (syy - self.nu * (sxx + szz)) / self.e;
        (exx, eyy, sxy / (2.0 * self.mu()))
    }
}

pub fn kolosov_kappa(mat: &Material) -> f64 {
    match mat.mode {
        PlaneMode::PlaneStress => (3.0 - mat.nu) / (1.0 + mat.nu),
        PlaneMode::PlaneStrain => 3.0 - 4.0 * mat.nu,
    }
}

/// Stresses, displacements and displacement gradients at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FieldSample {
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

impl FieldSample {
    pub fn u(&self) -> Cplx {
        Cplx::new(self.ux, self.uy)
    }

    /// Components in the order `sxx, syy, sxy, ux, uy`.
    pub fn primary(&self) -> [f64; 5] {
        [self.sxx, self.syy, self.sxy, self.ux, self.uy]
    }

    pub fn is_finite(&self) -> bool {
        [self.sxx, self.syy, self.sxy, self.ux, self.uy, self.dux_dx, self.duy_dx, self.dux_dy, self.duy_dy]
            .iter()
            .all(|v| v.is_finite())
    }

    /// Re-expresses a sample given in a frame rotated by `theta` in the
    /// unrotated frame.
    pub fn rotated(&self, theta: f64) -> Self {
        if theta == 0.0 {
            return *self;
        }
        let (s, c) = theta.sin_cos();
        let rot = |a: [[f64; 2]; 2]| {
            // R a R^T
            let r = [[c, -s], [s, c]];
            let mut out = [[0.0; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    let mut acc = 0.0;
                    for k in 0..2 {
                        for l in 0..2 {
                            acc += r[i][k] * a[k][l] * r[j][l];
                        }
                    }
                    out[i][j] = acc;
                }
            }
            out
        };
        let st = rot([[self.sxx, self.sxy], [self.sxy, self.syy]]);
        let g = rot([[self.dux_dx, self.dux_dy], [self.duy_dx, self.duy_dy]]);
        Self {
            sxx: st[0][0],
            syy: st[1][1],
            sxy: 0.5 * (st[0][1] + st[1][0]),
            ux: c * self.ux - s * self.uy,
            uy: s * self.ux + c * self.uy,
            dux_dx: g[0][0],
            dux_dy: g[0][1],
            duy_dx: g[1][0],
            duy_dy: g[1][1],
        }
    }
}

/// Stresses, displacements and displacement gradients from `phi`, `psi` at `z`.
///
/// `2 mu (ux + i uy) = kappa phi - z conj(phi') - conj(psi)`.
pub fn km_fields(phi: &HoloJet2, psi: &HoloJet2, z: Cplx, mat: &Material) -> FieldSample {
    let kappa = mat.kappa();
    let two_mu = 2.0 * mat.mu();
    let b = z.conj() * phi.d2 + psi.d1;
    let p = 2.0 * phi.d1;
    let d = kappa * phi.f - z * phi.d1.conj() - psi.f.conj();
    let dx = kappa * phi.d1 - phi.d1.conj() - z * phi.d2.conj() - psi.d1.conj();
    let dy = I * (kappa * phi.d1 - phi.d1.conj() + z * phi.d2.conj() + psi.d1.conj());
    FieldSample {
        sxx: (p - b).re,
        syy: (p + b).re,
        sxy: b.im,
        ux: d.re / two_mu,
        uy: d.im / two_mu,
        dux_dx: dx.re / two_mu,
        duy_dx: dx.im / two_mu,
        dux_dy: dy.re / two_mu,
        duy_dy: dy.im / two_mu,
    }
}

/// Sensitivities of a real loss with respect to the primary fields.
///
/// `u` packs `dL/dux + i dL/duy`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FieldAdjoint {
    pub sxx: f64,
    pub syy: f64,
    pub sxy: f64,
    pub u: Cplx,
}

/// Pulls a [`FieldAdjoint`] back onto the potential jets.
///
/// Returns `dL/dRe + i dL/dIm` for every jet entry of `phi` and `psi`
/// (`psi.d2` never enters the fields, so its slot stays zero).
pub fn km_fields_adjoint(z: Cplx, mat: &Material, g: &FieldAdjoint) -> (HoloJet2, HoloJet2) {
    let mut g_phi = HoloJet2::zero();
    let mut g_psi = HoloJet2::zero();
    g_phi.d1 += 2.0 * (g.sxx + g.syy);
    let g_b = Cplx::new(g.syy - g.sxx, g.sxy);
    g_phi.d2 += z * g_b;
    g_psi.d1 += g_b;
    if g.u != Cplx::new(0.0, 0.0) {
        let g_d = g.u / (2.0 * mat.mu());
        g_phi.f += mat.kappa() * g_d;
        g_phi.d1 -= z * g_d.conj();
        g_psi.f -= g_d.conj();
    }
    (g_phi, g_psi)
}

/// Complementary strain-energy density.
pub fn strain_energy_density(s: &FieldSample, mat: &Material) -> f64 {
    let (szz, _) = mat.szz(s.sxx, s.syy);
    let tr = s.sxx + s.syy + szz;
    (s.sxx * s.sxx + s.syy * s.syy + szz * szz + 2.0 * s.sxy * s.sxy) / (4.0 * mat.mu())
        - mat.nu / (2.0 * mat.e) * tr * tr
}

/// `(dw/dsxx, dw/dsyy, dw/dsxy)`.
pub fn strain_energy_gradient(s: &FieldSample, mat: &Material) -> (f64, f64, f64) {
    let (szz, dzz) = mat.szz(s.sxx, s.syy);
    let tr = s.sxx + s.syy + szz;
    let inv4mu = 1.0 / (4.0 * mat.mu());
    let c = mat.nu / mat.e * tr * (1.0 + dzz);
    (
        inv4mu * (2.0 * s.sxx + 2.0 * szz * dzz) - c,
        inv4mu * (2.0 * s.syy + 2.0 * szz * dzz) - c,
        s.sxy / mat.mu(),
    )
}

pub fn von_mises(s: &FieldSample) -> f64 {
    (s.sxx * s.sxx + s.syy * s.syy - s.sxx * s.syy + 3.0 * s.sxy * s.sxy).sqrt()
}
