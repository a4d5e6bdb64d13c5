//! Builtin benchmark cases.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::crack::CrackSpec;
use crate::cvnn::NetworkSpec;
use crate::elasticity::{Material, PlaneMode};
use crate::energy::TrainConfig;
use crate::error::{Error, Result};
use crate::geometry::{Bc, BoundarySegment, Curve, DomainSpec, InteriorPlan, Load, Region, SamplingPlan};
use crate::jet::{Cplx, ZERO};

/// Closed-form or tabulated reference attached to a case.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Reference {
    #[default]
    None,
    /// Pressurized thick tube centred at the origin.
    LameTube { ri: f64, ro: f64, pi: f64, po: f64 },
    /// Edge-cracked strip under remote tension.
    EdgeCrackStrip { sigma0: f64, a0: f64, width: f64 },
    /// Tabulated `(K_I, K_II)` per crack tip id.
    TipSifs { values: Vec<[f64; 2]> },
}

/// Contour settings for SIF extraction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SifSettings {
    pub radius: f64,
    #[serde(default = "default_contour_points")]
    pub n: usize,
}

fn default_contour_points() -> usize {
    256
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseSpec {
    pub name: String,
    pub domain: DomainSpec,
    pub material: Material,
    pub sampling: SamplingPlan,
    pub network: NetworkSpec,
    #[serde(default)]
    pub train: TrainConfig,
    #[serde(default)]
    pub sif: Option<SifSettings>,
    #[serde(default)]
    pub reference: Reference,
}

impl CaseSpec {
    pub fn validate(&self) -> Result<()> {
        self.domain.validate()?;
        self.material.validate()?;
        self.sampling.validate()?;
        self.network.validate()?;
        self.train.validate()?;
        if let Some(s) = &self.sif {
            if !(s.radius > 0.0) || s.n < 4 {
                return Err(Error::InvalidSpec("sif radius must be positive and n >= 4".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseName {
    Tube,
    HolePlate,
    NonUniformTension,
    Sent,
    Occt,
}

impl CaseName {
    pub const ALL: [CaseName; 5] = [CaseName::Tube, CaseName::HolePlate, CaseName::NonUniformTension, CaseName::Sent, CaseName::Occt];

    pub fn as_str(&self) -> &'static str {
        match self {
            CaseName::Tube => "tube",
            CaseName::HolePlate => "hole_plate",
            CaseName::NonUniformTension => "non_uniform_tension",
            CaseName::Sent => "sent",
            CaseName::Occt => "occt",
        }
    }
}

impl fmt::Display for CaseName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CaseName::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown case `{s}`")))
    }
}

fn c(re: f64, im: f64) -> Cplx {
    Cplx::new(re, im)
}

fn line(name: &str, from: Cplx, to: Cplx, bc_x: Bc, bc_y: Bc) -> BoundarySegment {
    BoundarySegment::new(name, Curve::Line { from, to }, bc_x, bc_y)
}

fn unit_lame() -> Material {
    Material::from_lame(1.0, 1.0, PlaneMode::PlaneStrain).expect("valid material")
}

fn crack_free_case(name: &str, domain: DomainSpec, reference: Reference) -> CaseSpec {
    CaseSpec {
        name: name.into(),
        domain,
        material: unit_lame(),
        sampling: SamplingPlan::uniform(1000, 0),
        network: NetworkSpec::new(vec![20, 20, 20], 0),
        train: TrainConfig::default(),
        sif: None,
        reference,
    }
}

/// Quarter tube with symmetry lines on both axes.
pub fn tube_case() -> CaseSpec {
    let (ri, ro, pi, po) = (0.5, 1.0, 5.0, 10.0);
    let domain = DomainSpec {
        region: Region::Intersection {
            parts: vec![Region::Annulus { center: ZERO, inner: ri, outer: ro }, Region::Rect { min: ZERO, max: c(ro, ro) }],
        },
        segments: vec![
            line("symmetry_y0", c(ri, 0.0), c(ro, 0.0), Bc::FREE, Bc::FIXED),
            BoundarySegment::new(
                "outer",
                Curve::Arc { center: ZERO, radius: ro, start: 0.0, end: FRAC_PI_2 },
                Bc::Traction(Load::Radial { scale: -po, center: ZERO }),
                Bc::Traction(Load::Radial { scale: -po, center: ZERO }),
            ),
            line("symmetry_x0", c(0.0, ro), c(0.0, ri), Bc::FIXED, Bc::FREE),
            BoundarySegment::new(
                "inner",
                Curve::Arc { center: ZERO, radius: ri, start: FRAC_PI_2, end: 0.0 },
                Bc::Traction(Load::Radial { scale: pi, center: ZERO }),
                Bc::Traction(Load::Radial { scale: pi, center: ZERO }),
            ),
        ],
        crack: None,
        analytic_area: Some(FRAC_PI_4 * (ro * ro - ri * ri)),
    };
    let mut case = crack_free_case("tube", domain, Reference::LameTube { ri, ro, pi, po });
    case.sampling.interior = InteriorPlan::HaltonPolar { n: 1000, center: ZERO, radii: [ri, ro], angles: [0.0, FRAC_PI_2] };
    case.train = TrainConfig { alpha_u: 200.0, clip_norm: 1e6, keep_best: true, ..TrainConfig::default() };
    case
}

/// Quarter of a square plate with a central hole, pulled in x.
pub fn hole_plate_case() -> CaseSpec {
    let (l, r, t) = (2.5, 1.0, 1.0);
    let domain = DomainSpec {
        region: Region::Difference {
            base: Box::new(Region::Rect { min: ZERO, max: c(l, l) }),
            minus: Box::new(Region::Disk { center: ZERO, radius: r }),
        },
        segments: vec![
            line("symmetry_y0", c(r, 0.0), c(l, 0.0), Bc::FREE, Bc::FIXED),
            line("right", c(l, 0.0), c(l, l), Bc::Traction(Load::Constant { value: t }), Bc::FREE),
            line("top", c(l, l), c(0.0, l), Bc::FREE, Bc::FREE),
            line("symmetry_x0", c(0.0, l), c(0.0, r), Bc::FIXED, Bc::FREE),
            BoundarySegment::new("hole", Curve::Arc { center: ZERO, radius: r, start: FRAC_PI_2, end: 0.0 }, Bc::FREE, Bc::FREE),
        ],
        crack: None,
        analytic_area: Some(l * l - FRAC_PI_4 * r * r),
    };
    crack_free_case("hole_plate", domain, Reference::None)
}

/// Unit square with a sinusoidal vertical displacement on top.
pub fn non_uniform_tension_case() -> CaseSpec {
    let mat = unit_lame();
    let amp = 0.1 * (mat.lambda() + 2.0 * mat.mu());
    let top = Load::SineX { amplitude: amp, wavenumber: PI, phase: 0.0 };
    let domain = DomainSpec {
        region: Region::Rect { min: ZERO, max: c(1.0, 1.0) },
        segments: vec![
            line("bottom", ZERO, c(1.0, 0.0), Bc::FIXED, Bc::FIXED),
            line("right", c(1.0, 0.0), c(1.0, 1.0), Bc::FIXED, Bc::FREE),
            line("top", c(1.0, 1.0), c(0.0, 1.0), Bc::FREE, Bc::Dirichlet(top)),
            line("left", c(0.0, 1.0), ZERO, Bc::FIXED, Bc::FREE),
        ],
        crack: None,
        analytic_area: Some(1.0),
    };
    crack_free_case("non_uniform_tension", domain, Reference::None)
}

/// Single edge notch tension strip of width 4 and height 8 with a crack of
/// length `a0` entering from the left edge at mid-height.
pub fn sent_case(a0: f64) -> CaseSpec {
    let (w, h, sigma0) = (4.0, 8.0, 1.0);
    let tip = c(a0, h / 2.0);
    let domain = DomainSpec {
        region: Region::Rect { min: ZERO, max: c(w, h) },
        segments: vec![
            line("bottom", ZERO, c(w, 0.0), Bc::FIXED, Bc::FIXED),
            line("right", c(w, 0.0), c(w, h), Bc::FREE, Bc::FREE),
            line("top", c(w, h), c(0.0, h), Bc::FREE, Bc::Traction(Load::Constant { value: sigma0 })),
            line("left_upper", c(0.0, h), c(0.0, h / 2.0), Bc::FREE, Bc::FREE),
            line("left_lower", c(0.0, h / 2.0), ZERO, Bc::FREE, Bc::FREE),
        ],
        crack: Some(CrackSpec::edge(tip, 0.0, a0, 0.004 * a0)),
        analytic_area: Some(w * h),
    };
    CaseSpec {
        name: "sent".into(),
        domain,
        material: Material::new(210_000.0, 0.3, PlaneMode::PlaneStrain).expect("valid material"),
        sampling: SamplingPlan::grid(120, 120, 0),
        network: NetworkSpec::new(vec![10, 10, 10], 0),
        train: TrainConfig::default(),
        sif: Some(SifSettings { radius: 0.5 * a0, n: 256 }),
        reference: Reference::EdgeCrackStrip { sigma0, a0, width: w },
    }
}

/// Square plate with an inclined central crack under a sinusoidal top load.
pub fn occt_case() -> CaseSpec {
    let (l, a, sigma0) = (4.0, 2.0, 10.0);
    let top = Load::SineX { amplitude: sigma0, wavenumber: PI / (2.0 * l), phase: PI / 2.0 };
    let domain = DomainSpec {
        region: Region::Rect { min: c(-l, -l), max: c(l, l) },
        segments: vec![
            line("bottom", c(-l, -l), c(l, -l), Bc::FIXED, Bc::FIXED),
            line("right", c(l, -l), c(l, l), Bc::FREE, Bc::FREE),
            line("top", c(l, l), c(-l, l), Bc::FREE, Bc::Traction(top)),
            line("left", c(-l, l), c(-l, -l), Bc::FREE, Bc::FREE),
        ],
        crack: Some(CrackSpec::internal(ZERO, a, FRAC_PI_4, 0.004 * a)),
        analytic_area: Some(4.0 * l * l),
    };
    CaseSpec {
        name: "occt".into(),
        domain,
        material: Material::new(100_000.0, 0.3, PlaneMode::PlaneStrain).expect("valid material"),
        sampling: SamplingPlan::grid(120, 120, 0),
        network: NetworkSpec::new(vec![10, 10, 10], 0),
        train: TrainConfig { alpha_u: 1e6, clip_norm: 1e9, keep_best: true, ..TrainConfig::default() },
        sif: Some(SifSettings { radius: 0.5, n: 256 }),
        reference: Reference::TipSifs { values: vec![[12.49, 13.50], [20.26, 14.64]] },
    }
}

pub fn builtin_case(name: CaseName) -> CaseSpec {
    match name {
        CaseName::Tube => tube_case(),
        CaseName::HolePlate => hole_plate_case(),
        CaseName::NonUniformTension => non_uniform_tension_case(),
        CaseName::Sent => sent_case(2.0),
        CaseName::Occt => occt_case(),
    }
}

pub fn builtin_cases() -> Vec<CaseSpec> {
    CaseName::ALL.into_iter().map(builtin_case).collect()
}
