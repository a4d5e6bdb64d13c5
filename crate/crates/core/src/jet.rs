//! Order-2 holomorphic jets.
//!
//! A [`HoloJet2`] carries `f(z)`, `f'(z)` and `f''(z)` of a holomorphic
//! function through every arithmetic operation, so one evaluation of a
//! potential yields everything the field reconstruction needs. Only
//! z-derivatives are tracked; nothing here ever depends on `conj(z)`.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type Cplx = Complex64;

/// Largest admissible real part of an exponential argument.
pub const EXP_GUARD: f64 = 60.0;

pub const I: Cplx = Cplx::new(0.0, 1.0);
pub const ONE: Cplx = Cplx::new(1.0, 0.0);
pub const ZERO: Cplx = Cplx::new(0.0, 0.0);

/// `f`, `df/dz`, `d²f/dz²` at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HoloJet2 {
    pub f: Cplx,
    pub d1: Cplx,
    pub d2: Cplx,
}

/// Placement of the branch cut for [`HoloJet2::sqrt`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BranchRule {
    /// Cut along the negative real axis, `arg` in `(-pi, pi]`.
    Principal,
    /// Cut along the ray `{ r e^{i angle} : r >= 0 }`.
    CutAlong(f64),
}

impl HoloJet2 {
    pub const fn new(f: Cplx, d1: Cplx, d2: Cplx) -> Self {
        Self { f, d1, d2 }
    }

    /// Identity jet at `z`: `(z, 1, 0)`.
    pub fn seed(z: Cplx) -> Self {
        Self::new(z, ONE, ZERO)
    }

    pub fn constant(c: Cplx) -> Self {
        Self::new(c, ZERO, ZERO)
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scale(self, c: Cplx) -> Self {
        Self::new(self.f * c, self.d1 * c, self.d2 * c)
    }

    /// `a*x + self` accumulated in place; the network inner loop.
    #[inline]
    pub fn mul_add_assign(&mut self, a: Cplx, x: &HoloJet2) {
        self.f += a * x.f;
        self.d1 += a * x.d1;
        self.d2 += a * x.d2;
    }

    /// `exp` with the overflow guard on `Re f`.
    pub fn exp(self) -> Result<Self> {
        if !(self.f.re <= EXP_GUARD) {
            return Err(Error::OverflowGuard(self.f.re));
        }
        let e = self.f.exp();
        Ok(Self::new(e, e * self.d1, e * (self.d2 + self.d1 * self.d1)))
    }

    /// Square root under the given branch rule.
    pub fn sqrt(self, branch: BranchRule) -> Result<Self> {
        let s = branch_sqrt(self.f, branch)?;
        let inv2s = 0.5 / s;
        let d1 = self.d1 * inv2s;
        // d2 = a''/(2s) - a'^2/(4 s^3)
        let d2 = self.d2 * inv2s - self.d1 * self.d1 * inv2s / (2.0 * s * s);
        Ok(Self::new(s, d1, d2))
    }

    /// Jet of `F*(z) = conj(F(conj z))` given the jet of `F` at `conj z`.
    pub fn star(self) -> Self {
        Self::new(self.f.conj(), self.d1.conj(), self.d2.conj())
    }

    pub fn is_finite(&self) -> bool {
        self.f.is_finite() && self.d1.is_finite() && self.d2.is_finite()
    }
}

/// `sqrt(z)` on the requested branch; errors on the cut itself.
pub fn branch_sqrt(z: Cplx, branch: BranchRule) -> Result<Cplx> {
    match branch {
        BranchRule::Principal => {
            if z.im == 0.0 && z.re <= 0.0 {
                return Err(Error::BranchCutHit(z));
            }
            Ok(z.sqrt())
        }
        BranchRule::CutAlong(angle) => {
            let dir = Cplx::from_polar(1.0, angle);
            let along = z.re * dir.re + z.im * dir.im;
            let across = z.im * dir.re - z.re * dir.im;
            if z == ZERO || (along > 0.0 && across.abs() <= 4.0 * f64::EPSILON * z.norm()) {
                return Err(Error::BranchCutHit(z));
            }
            // rotate the cut onto the negative real axis
            let turn = Cplx::from_polar(1.0, std::f64::consts::PI - angle);
            Ok((z * turn).sqrt() * Cplx::from_polar(1.0, -(std::f64::consts::PI - angle) / 2.0))
        }
    }
}

impl Add for HoloJet2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.f + o.f, self.d1 + o.d1, self.d2 + o.d2)
    }
}

impl AddAssign for HoloJet2 {
    fn add_assign(&mut self, o: Self) {
        self.f += o.f;
        self.d1 += o.d1;
        self.d2 += o.d2;
    }
}

impl Add<Cplx> for HoloJet2 {
    type Output = Self;
    fn add(self, c: Cplx) -> Self {
        Self::new(self.f + c, self.d1, self.d2)
    }
}

impl Sub for HoloJet2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.f - o.f, self.d1 - o.d1, self.d2 - o.d2)
    }
}

impl Neg for HoloJet2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.f, -self.d1, -self.d2)
    }
}

impl Mul for HoloJet2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.f * o.f,
            self.d1 * o.f + self.f * o.d1,
            self.d2 * o.f + 2.0 * self.d1 * o.d1 + self.f * o.d2,
        )
    }
}

impl Mul<Cplx> for HoloJet2 {
    type Output = Self;
    fn mul(self, c: Cplx) -> Self {
        self.scale(c)
    }
}

/// Jet of `F*` at `z` where `F` is evaluated by `net_eval`.
pub fn reflect_star<F>(net_eval: F, z: Cplx) -> Result<HoloJet2>
where
    F: Fn(Cplx) -> Result<HoloJet2>,
{
    Ok(net_eval(z.conj())?.star())
}

/// Central-difference estimate of `(df/dz, d²f/dz²)` along the real axis.
///
/// For holomorphic `f` the z-derivative equals the x-derivative.
pub fn fd_derivatives<F>(f: F, z: Cplx, h: f64) -> (Cplx, Cplx)
where
    F: Fn(Cplx) -> Cplx,
{
    let fp = f(z + h);
    let fm = f(z - h);
    let f0 = f(z);
    ((fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h))
}

/// Four-point estimate of the Wirtinger derivative `df/dconj(z)`.
pub fn wirtinger_residual<F>(f: F, z: Cplx, h: f64) -> Cplx
where
    F: Fn(Cplx) -> Cplx,
{
    let dx = (f(z + h) - f(z - h)) / (2.0 * h);
    let dy = (f(z + I * h) - f(z - I * h)) / (2.0 * h);
    0.5 * (dx + I * dy)
}
