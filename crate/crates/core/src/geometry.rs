//! Domains, boundary curves, boundary conditions and sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::crack::CrackSpec;
use crate::error::{Error, Result};
use crate::jet::{Cplx, I};

/// Analytic boundary curve parameterized by `t` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Curve {
    Line { from: Cplx, to: Cplx },
    /// Arc from polar angle `start` to `end` (either orientation).
    Arc { center: Cplx, radius: f64, start: f64, end: f64 },
}

impl Curve {
    pub fn point(&self, t: f64) -> Cplx {
        match *self {
            Curve::Line { from, to } => from + (to - from) * t,
            Curve::Arc { center, radius, start, end } => center + Cplx::from_polar(radius, start + (end - start) * t),
        }
    }

    /// Unit tangent in the direction of increasing `t`.
    pub fn tangent(&self, t: f64) -> Cplx {
        match *self {
            Curve::Line { from, to } => (to - from) / (to - from).norm(),
            Curve::Arc { start, end, .. } => {
                let th = start + (end - start) * t;
                I * Cplx::from_polar(1.0, th) * (end - start).signum()
            }
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            Curve::Line { from, to } => (to - from).norm(),
            Curve::Arc { radius, start, end, .. } => radius * (end - start).abs(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// Prescribed boundary data as a function of position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Load {
    Constant { value: f64 },
    /// `amplitude * sin(wavenumber * x + phase)`.
    SineX { amplitude: f64, wavenumber: f64, phase: f64 },
    /// `scale` times the component of the unit vector from `center` to `z`.
    Radial { scale: f64, center: Cplx },
}

impl Load {
    pub const ZERO: Load = Load::Constant { value: 0.0 };

    pub fn eval(&self, z: Cplx, axis: Axis) -> f64 {
        match *self {
            Load::Constant { value } => value,
            Load::SineX { amplitude, wavenumber, phase } => amplitude * (wavenumber * z.re + phase).sin(),
            Load::Radial { scale, center } => {
                let d = z - center;
                let r = d.norm();
                match axis {
                    Axis::X => scale * d.re / r,
                    Axis::Y => scale * d.im / r,
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Load::Constant { value } if *value == 0.0)
    }
}

/// Condition on one displacement component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bc {
    Dirichlet(Load),
    Traction(Load),
}

impl Bc {
    pub const FREE: Bc = Bc::Traction(Load::ZERO);
    pub const FIXED: Bc = Bc::Dirichlet(Load::ZERO);
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundarySegment {
    pub name: String,
    /// Oriented with the material on its left.
    pub curve: Curve,
    pub bc_x: Bc,
    pub bc_y: Bc,
}

impl BoundarySegment {
    pub fn new(name: &str, curve: Curve, bc_x: Bc, bc_y: Bc) -> Self {
        Self { name: name.to_string(), curve, bc_x, bc_y }
    }

    pub fn length(&self) -> f64 {
        self.curve.length()
    }

    /// Outward unit normal of the material.
    pub fn normal(&self, t: f64) -> Cplx {
        -I * self.curve.tangent(t)
    }

    pub fn bc(&self, axis: Axis) -> &Bc {
        match axis {
            Axis::X => &self.bc_x,
            Axis::Y => &self.bc_y,
        }
    }
}

/// Closed planar region built from primitives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Region {
    Rect { min: Cplx, max: Cplx },
    Disk { center: Cplx, radius: f64 },
    Annulus { center: Cplx, inner: f64, outer: f64 },
    Intersection { parts: Vec<Region> },
    /// `base` minus the open interior of `minus`.
    Difference { base: Box<Region>, minus: Box<Region> },
}

impl Region {
    pub fn contains(&self, z: Cplx) -> bool {
        match self {
            Region::Rect { min, max } => z.re >= min.re && z.re <= max.re && z.im >= min.im && z.im <= max.im,
            Region::Disk { center, radius } => (z - center).norm() <= *radius,
            Region::Annulus { center, inner, outer } => {
                let r = (z - center).norm();
                r >= *inner && r <= *outer
            }
            Region::Intersection { parts } => parts.iter().all(|p| p.contains(z)),
            Region::Difference { base, minus } => base.contains(z) && !minus.contains_open(z),
        }
    }

    fn contains_open(&self, z: Cplx) -> bool {
        match self {
            Region::Rect { min, max } => z.re > min.re && z.re < max.re && z.im > min.im && z.im < max.im,
            Region::Disk { center, radius } => (z - center).norm() < *radius,
            Region::Annulus { center, inner, outer } => {
                let r = (z - center).norm();
                r > *inner && r < *outer
            }
            Region::Intersection { parts } => parts.iter().all(|p| p.contains_open(z)),
            Region::Difference { base, minus } => base.contains_open(z) && !minus.contains(z),
        }
    }

    /// Axis-aligned bounding box `(min, max)`.
    pub fn bbox(&self) -> (Cplx, Cplx) {
        match self {
            Region::Rect { min, max } => (*min, *max),
            Region::Disk { center, radius } | Region::Annulus { center, outer: radius, .. } => {
                (center - Cplx::new(*radius, *radius), center + Cplx::new(*radius, *radius))
            }
            Region::Intersection { parts } => parts.iter().map(Region::bbox).fold(
                (Cplx::new(f64::MIN, f64::MIN), Cplx::new(f64::MAX, f64::MAX)),
                |(lo, hi), (a, b)| (Cplx::new(lo.re.max(a.re), lo.im.max(a.im)), Cplx::new(hi.re.min(b.re), hi.im.min(b.im))),
            ),
            Region::Difference { base, .. } => base.bbox(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub region: Region,
    pub segments: Vec<BoundarySegment>,
    #[serde(default)]
    pub crack: Option<CrackSpec>,
    #[serde(default)]
    pub analytic_area: Option<f64>,
}

impl DomainSpec {
    pub fn indicator(&self, z: Cplx) -> bool {
        self.region.contains(z)
    }

    pub fn bbox(&self) -> (Cplx, Cplx) {
        self.region.bbox()
    }

    pub fn bbox_area(&self) -> f64 {
        let (lo, hi) = self.bbox();
        (hi.re - lo.re) * (hi.im - lo.im)
    }

    /// Size used to scale tolerances.
    pub fn diameter(&self) -> f64 {
        let (lo, hi) = self.bbox();
        (hi - lo).norm()
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.bbox();
        if !(hi.re > lo.re && hi.im > lo.im) {
            return Err(Error::InvalidSpec("domain has an empty bounding box".into()));
        }
        if self.segments.is_empty() {
            return Err(Error::InvalidSpec("domain needs at least one boundary segment".into()));
        }
        for s in &self.segments {
            if !(s.length() > 0.0) {
                return Err(Error::InvalidSpec(format!("segment {} has zero length", s.name)));
            }
        }
        if let Some(c) = &self.crack {
            c.validate()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum InteriorPlan {
    /// Uniform pseudo-random points accepted by the indicator.
    Uniform { n: usize },
    /// Cell-centred `nx x ny` grid over the bounding box.
    Grid { nx: usize, ny: usize },
    /// Halton points (bases 2 and 3) over the bounding box, accepted by the
    /// indicator; the seed selects the starting block of the sequence.
    Halton { n: usize },
    /// Halton points mapped area-uniformly onto the annular sector
    /// `radii[0] <= |z - center| <= radii[1]`, `angles[0] <= arg <= angles[1]`,
    /// accepted by the indicator.
    HaltonPolar { n: usize, center: Cplx, radii: [f64; 2], angles: [f64; 2] },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingPlan {
    pub interior: InteriorPlan,
    /// Points per boundary segment.
    #[serde(default = "default_boundary")]
    pub boundary_per_segment: usize,
    /// Points per refinement ring around each crack tip.
    #[serde(default = "default_ring_points")]
    pub ring_points: usize,
    /// Rings are placed at `core * 2^k` up to this fraction of the crack length.
    #[serde(default = "default_ring_extent")]
    pub ring_extent: f64,
    /// Sample count for Monte-Carlo area estimation.
    #[serde(default = "default_area_samples")]
    pub area_samples: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_boundary() -> usize {
    100
}
fn default_ring_points() -> usize {
    16
}
fn default_ring_extent() -> f64 {
    0.2
}
fn default_area_samples() -> usize {
    1_000_000
}

impl SamplingPlan {
    pub fn uniform(n: usize, seed: u64) -> Self {
        Self {
            interior: InteriorPlan::Uniform { n },
            boundary_per_segment: default_boundary(),
            ring_points: default_ring_points(),
            ring_extent: default_ring_extent(),
            area_samples: default_area_samples(),
            seed,
        }
    }

    pub fn grid(nx: usize, ny: usize, seed: u64) -> Self {
        Self { interior: InteriorPlan::Grid { nx, ny }, ..Self::uniform(0, seed) }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self.interior {
            InteriorPlan::Uniform { n } => n >= 1,
            InteriorPlan::Grid { nx, ny } => nx >= 1 && ny >= 1,
            InteriorPlan::Halton { n } => n >= 1,
            InteriorPlan::HaltonPolar { n, radii, angles, .. } => {
                if !(0.0 <= radii[0] && radii[0] < radii[1] && angles[0] < angles[1]) {
                    return Err(Error::InvalidSpec("polar sector needs 0 <= r0 < r1 and a0 < a1".into()));
                }
                n >= 1
            }
        };
        if !ok || self.boundary_per_segment == 0 || self.ring_points == 0 || self.area_samples == 0 {
            return Err(Error::InvalidSpec("sampling counts must be >= 1".into()));
        }
        if !(self.ring_extent > 0.0) {
            return Err(Error::InvalidSpec("ring_extent must be positive".into()));
        }
        Ok(())
    }
}

/// Interior quadrature point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteriorPoint {
    pub z: Cplx,
    pub weight: f64,
}

/// Boundary quadrature point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub z: Cplx,
    pub normal: Cplx,
    pub weight: f64,
    pub segment: usize,
}

/// Frozen quadrature used for one training run.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    pub area: f64,
    pub interior: Vec<InteriorPoint>,
    pub boundary: Vec<BoundaryPoint>,
}

/// Bounding-box area times the fraction of uniform points inside.
pub fn mc_area(dom: &DomainSpec, n: usize, seed: u64) -> f64 {
    let (lo, hi) = dom.bbox();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inside = (0..n)
        .filter(|_| dom.indicator(Cplx::new(rng.random_range(lo.re..hi.re), rng.random_range(lo.im..hi.im))))
        .count();
    dom.bbox_area() * inside as f64 / n as f64
}

/// Interior sample points of the plan.
pub fn sample_interior(dom: &DomainSpec, plan: &SamplingPlan) -> Result<Vec<Cplx>> {
    Ok(interior_points(dom, plan)?.into_iter().map(|(z, _)| z).collect())
}

/// Points with unnormalized weights.
fn interior_points(dom: &DomainSpec, plan: &SamplingPlan) -> Result<Vec<(Cplx, f64)>> {
    plan.validate()?;
    let (lo, hi) = dom.bbox();
    let mut out = Vec::new();
    match plan.interior {
        InteriorPlan::Uniform { n } => {
            let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
            accept(dom, n, &mut out, || Cplx::new(rng.random_range(lo.re..hi.re), rng.random_range(lo.im..hi.im)));
        }
        InteriorPlan::Halton { n } => {
            let mut seq = halton_pairs(plan.seed, n);
            accept(dom, n, &mut out, || {
                let (u, v) = seq.next().expect("endless sequence");
                Cplx::new(lo.re + u * (hi.re - lo.re), lo.im + v * (hi.im - lo.im))
            });
        }
        InteriorPlan::HaltonPolar { n, center, radii, angles } => {
            let mut seq = halton_pairs(plan.seed, n);
            let (r0, r1) = (radii[0] * radii[0], radii[1] * radii[1]);
            accept(dom, n, &mut out, || {
                let (u, v) = seq.next().expect("endless sequence");
                center + Cplx::from_polar((r0 + u * (r1 - r0)).sqrt(), angles[0] + v * (angles[1] - angles[0]))
            });
        }
        InteriorPlan::Grid { nx, ny } => {
            let (dx, dy) = ((hi.re - lo.re) / nx as f64, (hi.im - lo.im) / ny as f64);
            let cell = dx * dy;
            let disks = refinement_disks(dom, plan);
            for j in 0..ny {
                for i in 0..nx {
                    let z = Cplx::new(lo.re + (i as f64 + 0.5) * dx, lo.im + (j as f64 + 0.5) * dy);
                    if !dom.indicator(z) || disks.iter().any(|(c, r)| (z - c).norm() < *r) {
                        continue;
                    }
                    push_off_cut(dom, z, cell, 0.25 * dx.min(dy), &mut out);
                }
            }
            if let Some(crack) = &dom.crack {
                for tip in crack.tips() {
                    for (w, wt) in ring_points(crack, plan) {
                        let z = tip.position + Cplx::from_polar(1.0, tip.angle) * w;
                        if dom.indicator(z) {
                            out.push((z, wt));
                        }
                    }
                }
            }
        }
    }
    if out.is_empty() {
        return Err(Error::EmptyDomain);
    }
    Ok(out)
}

/// Draws from `next` until `n` points pass the indicator and avoid the crack,
/// or the attempt budget runs out.
fn accept(dom: &DomainSpec, n: usize, out: &mut Vec<(Cplx, f64)>, mut next: impl FnMut() -> Cplx) {
    let max_tries = n.saturating_mul(10_000).max(1_000_000);
    let mut tries = 0usize;
    while out.len() < n && tries < max_tries {
        tries += 1;
        let z = next();
        if dom.indicator(z) && !near_crack(dom, z) {
            out.push((z, 1.0));
        }
    }
}

/// Two-dimensional Halton sequence starting after `seed * n` points.
fn halton_pairs(seed: u64, n: usize) -> impl Iterator<Item = (f64, f64)> {
    let skip = (seed as usize).saturating_mul(n);
    halton::Sequence::new(2).zip(halton::Sequence::new(3)).skip(skip)
}

/// Whether `z` falls inside a tip core or exactly onto the crack line.
fn near_crack(dom: &DomainSpec, z: Cplx) -> bool {
    let Some(crack) = &dom.crack else {
        return false;
    };
    crack.tips().iter().any(|t| (z - t.position).norm() < crack.core_radius)
        || crack.on_cut(crack.frame().to_local(z), 1e-9 * crack.length_scale())
}

/// Grid points lying on the cut are replaced by two half-weight points
/// displaced to either face.
fn push_off_cut(dom: &DomainSpec, z: Cplx, weight: f64, shift: f64, out: &mut Vec<(Cplx, f64)>) {
    match &dom.crack {
        Some(crack) if near_crack(dom, z) => {
            if crack.tips().iter().any(|t| (z - t.position).norm() < crack.core_radius) {
                return;
            }
            let n = crack.frame().rot * I * shift;
            for p in [z + n, z - n] {
                if dom.indicator(p) {
                    out.push((p, 0.5 * weight));
                }
            }
        }
        _ => out.push((z, weight)),
    }
}

/// Ring radii `core * 2^k`, `k >= 1`, not exceeding `extent * length`.
pub fn ring_radii(crack: &CrackSpec, plan: &SamplingPlan) -> Vec<f64> {
    let limit = plan.ring_extent * crack.length_scale();
    let mut out = Vec::new();
    let mut r = 2.0 * crack.core_radius;
    while r <= limit {
        out.push(r);
        r *= 2.0;
    }
    out
}

/// Local ring offsets with their annular-sector weights.
fn ring_points(crack: &CrackSpec, plan: &SamplingPlan) -> Vec<(Cplx, f64)> {
    let radii = ring_radii(crack, plan);
    let m = plan.ring_points;
    let mut out = Vec::with_capacity(radii.len() * m);
    for (k, &r) in radii.iter().enumerate() {
        let inner = if k == 0 { crack.core_radius } else { r / 2f64.sqrt() };
        let outer = r * 2f64.sqrt();
        let wt = std::f64::consts::PI * (outer * outer - inner * inner) / m as f64;
        for q in 0..m {
            let th = (q as f64 + 0.5) * std::f64::consts::TAU / m as f64;
            out.push((Cplx::from_polar(r, th), wt));
        }
    }
    out
}

/// Disks around each tip whose grid points the rings replace.
fn refinement_disks(dom: &DomainSpec, plan: &SamplingPlan) -> Vec<(Cplx, f64)> {
    let Some(crack) = &dom.crack else {
        return Vec::new();
    };
    let radii = ring_radii(crack, plan);
    let outer = radii.last().map_or(crack.core_radius, |r| r * 2f64.sqrt());
    crack.tips().iter().map(|t| (t.position, outer)).collect()
}

/// Midpoint-parameter samples `(z, normal, |seg| / n)`.
pub fn sample_boundary(seg: &BoundarySegment, n: usize) -> Vec<(Cplx, Cplx, f64)> {
    let w = seg.length() / n as f64;
    (0..n)
        .map(|k| {
            let t = (k as f64 + 0.5) / n as f64;
            (seg.curve.point(t), seg.normal(t), w)
        })
        .collect()
}

/// Domain area from the analytic value or a Monte-Carlo estimate.
pub fn domain_area(dom: &DomainSpec, plan: &SamplingPlan) -> f64 {
    dom.analytic_area.unwrap_or_else(|| mc_area(dom, plan.area_samples, plan.seed ^ 0x5eed_a4ea))
}

/// Interior and boundary quadrature for a domain; interior weights sum to `|Omega|`.
pub fn build_samples(dom: &DomainSpec, plan: &SamplingPlan) -> Result<SampleSet> {
    dom.validate()?;
    let area = domain_area(dom, plan);
    let pts = interior_points(dom, plan)?;
    let total: f64 = pts.iter().map(|p| p.1).sum();
    let scale = area / total;
    let interior = pts.into_iter().map(|(z, w)| InteriorPoint { z, weight: w * scale }).collect();
    let mut boundary = Vec::new();
    for (k, seg) in dom.segments.iter().enumerate() {
        for (z, normal, weight) in sample_boundary(seg, plan.boundary_per_segment) {
            boundary.push(BoundaryPoint { z, normal, weight, segment: k });
        }
    }
    Ok(SampleSet { area, interior, boundary })
}
