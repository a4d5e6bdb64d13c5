use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use kmnet::bench::{render_table, run_suite, sweep_radii, tube_comparison, CriterionResult, Suite};
use kmnet::cases::{builtin_cases, CaseSpec, Reference};
use kmnet::cvnn::PotentialModel;
use kmnet::elasticity::{von_mises, FieldSample};
use kmnet::energy::{assemble_energy, train_with_observer, EnergyBreakdown};
use kmnet::fracture::{check_contour, model_sif_near_field, sif_from_interaction, SifResult};
use kmnet::geometry::build_samples;
use kmnet::metrics::{Metrics, COMPONENTS};
use kmnet::oracles::{sent_k1, tube_exact};
use kmnet::{Cplx, Error};
use serde::Serialize;

use crate::config::{load_case, output_dir_or, ExportGrid, RunConfig};
use crate::error::CliError;

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(dir.to_path_buf(), e))?;
    }
    fs::write(path, contents).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serializes")
}

#[derive(Serialize)]
struct TrainReport<'a> {
    config: &'a RunConfig,
    resolved_case: &'a CaseSpec,
    seed: u64,
    iterations: usize,
    wall_time_s: f64,
    final_energy: EnergyBreakdown,
    #[serde(skip_serializing_if = "Option::is_none")]
    rel_l2: Option<Vec<(String, f64)>>,
}

pub fn cmd_train(config_path: &Path) -> Result<(), CliError> {
    let config = RunConfig::load(config_path)?;
    let case = config.resolve()?;
    let out = config.output_dir();
    let start = Instant::now();
    let (model, history) = train_with_observer(&case, &case.network, &case.train, |_| {})?;
    let wall_time_s = start.elapsed().as_secs_f64();
    let samples = build_samples(&case.domain, &case.sampling)?;
    let final_energy = assemble_energy(&model, &case, &samples)?;
    let rel_l2 = match case.reference {
        Reference::LameTube { .. } => {
            let m = tube_comparison(&model, &case, 100)?;
            Some(COMPONENTS.iter().map(|c| c.to_string()).zip(m.rel_l2).collect::<Vec<_>>())
        }
        _ => None,
    };
    write_file(&out.join("model.json"), &model.to_json())?;
    write_file(&out.join("history.csv"), &history.to_csv())?;
    let report = TrainReport {
        config: &config,
        resolved_case: &case,
        seed: case.train.seed,
        iterations: case.train.iterations,
        wall_time_s,
        final_energy,
        rel_l2: rel_l2.clone(),
    };
    write_file(&out.join("report.json"), &to_json(&report))?;
    if let Some(grid) = config.export {
        let (csv, _) = field_csv(&model, &case, grid, None)?;
        write_file(&out.join("fields.csv"), &csv)?;
    }
    println!("trained `{}` for {} iterations in {:.1} s", case.name, case.train.iterations, wall_time_s);
    println!("final energy {:.10e} (internal {:.6e}, external {:.6e}, penalty {:.6e})", final_energy.total, final_energy.internal, final_energy.external, final_energy.dirichlet_penalty);
    if let Some(rows) = rel_l2 {
        for (name, v) in rows {
            println!("rel-L2 {name:<4} {v:.4e}");
        }
    }
    println!("wrote {}", out.display());
    Ok(())
}

/// Axis-aligned evaluation window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub lo: Cplx,
    pub hi: Cplx,
}

impl std::str::FromStr for Window {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        let v: Vec<f64> = s
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::Usage(format!("window `{s}`: {e}")))?;
        match v[..] {
            [x0, x1, y0, y1] if x1 > x0 && y1 > y0 => Ok(Window { lo: Cplx::new(x0, y0), hi: Cplx::new(x1, y1) }),
            _ => Err(CliError::Usage(format!("window `{s}` must be xmin,xmax,ymin,ymax with max > min"))),
        }
    }
}

/// CSV of the fields on cell centres of an `nx x ny` grid; points outside the
/// domain or on a crack cut are left out. Returns the CSV and the kept samples.
pub fn field_csv(
    model: &PotentialModel,
    case: &CaseSpec,
    grid: ExportGrid,
    window: Option<Window>,
) -> Result<(String, Vec<(Cplx, FieldSample)>), CliError> {
    let (lo, hi) = window.map(|w| (w.lo, w.hi)).unwrap_or_else(|| case.domain.bbox());
    let mut csv = String::from("x,y,sxx,syy,sxy,svm,ux,uy\n");
    let mut kept = Vec::new();
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let z = Cplx::new(
                lo.re + (hi.re - lo.re) * (i as f64 + 0.5) / grid.nx as f64,
                lo.im + (hi.im - lo.im) * (j as f64 + 0.5) / grid.ny as f64,
            );
            if !case.domain.indicator(z) {
                continue;
            }
            let s = match model.fields(z, &case.material) {
                Ok(s) => s,
                Err(Error::BranchCutHit(_)) => continue,
                Err(e) => return Err(e.into()),
            };
            let _ = writeln!(
                csv,
                "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
                z.re,
                z.im,
                s.sxx,
                s.syy,
                s.sxy,
                von_mises(&s),
                s.ux,
                s.uy
            );
            kept.push((z, s));
        }
    }
    Ok((csv, kept))
}

pub fn load_model(path: &Path) -> Result<PotentialModel, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
    Ok(PotentialModel::from_json(&text)?)
}

pub fn cmd_eval(model_path: &Path, case_arg: &str, grid: ExportGrid, window: Option<Window>, out: Option<PathBuf>) -> Result<(), CliError> {
    if grid.nx == 0 || grid.ny == 0 {
        return Err(CliError::Usage("grid needs nx, ny >= 1".into()));
    }
    let model = load_model(model_path)?;
    let case = load_case(case_arg)?;
    let (csv, kept) = field_csv(&model, &case, grid, window)?;
    let path = out.unwrap_or_else(|| output_dir_or(Path::new(".")).join("fields.csv"));
    write_file(&path, &csv)?;
    if kept.is_empty() {
        eprintln!("warning: no grid point lies inside the domain; wrote header only");
    }
    println!("wrote {} points to {}", kept.len(), path.display());
    if let Reference::LameTube { ri, ro, pi, po } = case.reference {
        if !kept.is_empty() {
            let p = kmnet::oracles::TubeParams { ri, ro, pi, po, e: case.material.e, nu: case.material.nu };
            let refs = kept.iter().map(|(z, _)| tube_exact(z.re, z.im, &p)).collect::<kmnet::Result<Vec<_>>>()?;
            let pred: Vec<FieldSample> = kept.iter().map(|(_, s)| *s).collect();
            let m = Metrics::compute(&pred, &refs)?;
            for (name, v) in COMPONENTS.iter().zip(m.rel_l2) {
                println!("rel-L2 {name:<4} {v:.4e}");
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct TipReport {
    tip: usize,
    position: [f64; 2],
    interaction: SifResult,
    near_field: SifResult,
    /// `(radius, K_I, K_II)` for every contour inside the domain.
    radius_sweep: Vec<(f64, f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reference: Option<[f64; 2]>,
}

pub fn cmd_sif(model_path: &Path, case_arg: &str, radius: Option<f64>, n: Option<usize>, out: Option<PathBuf>) -> Result<(), CliError> {
    let model = load_model(model_path)?;
    let case = load_case(case_arg)?;
    let crack = case.domain.crack.ok_or(Error::ModeMismatch("case has no crack"))?;
    let radius = radius.or(case.sif.map(|s| s.radius)).unwrap_or(0.25 * crack.length_scale());
    let n = n.or(case.sif.map(|s| s.n)).unwrap_or(256);
    let mut tips = Vec::new();
    for tip in crack.tips() {
        let interaction = sif_from_interaction(&model, &case, tip.id, radius, n)?;
        let near_field = model_sif_near_field(&model, &case, tip.id)?;
        let radius_sweep = sweep_radii(crack.length_scale())
            .into_iter()
            .filter(|&r| check_contour(&case.domain, &tip, r, n).is_ok())
            .map(|r| sif_from_interaction(&model, &case, tip.id, r, n).map(|s| (r, s.k1, s.k2)))
            .collect::<kmnet::Result<Vec<_>>>()?;
        let reference = match &case.reference {
            Reference::TipSifs { values } => values.get(tip.id).copied(),
            Reference::EdgeCrackStrip { sigma0, a0, width } => Some([sent_k1(*sigma0, *a0, *width)?, 0.0]),
            _ => None,
        };
        tips.push(TipReport { tip: tip.id, position: [tip.position.re, tip.position.im], interaction, near_field, radius_sweep, reference });
    }
    for t in &tips {
        println!("tip {} at ({:.4}, {:.4})", t.tip, t.position[0], t.position[1]);
        println!("  interaction  K_I {:.6e}  K_II {:.6e}  (r = {}, n = {})", t.interaction.k1, t.interaction.k2, radius, n);
        println!("  near field   K_I {:.6e}  K_II {:.6e}", t.near_field.k1, t.near_field.k2);
        if let Some([k1, k2]) = t.reference {
            println!("  reference    K_I {k1:.6e}  K_II {k2:.6e}");
        }
        println!("  {:>10} {:>14} {:>14}", "radius", "K_I", "K_II");
        for (r, k1, k2) in &t.radius_sweep {
            println!("  {r:>10.4} {k1:>14.6e} {k2:>14.6e}");
        }
    }
    let path = out.unwrap_or_else(|| output_dir_or(Path::new(".")).join("sif.json"));
    write_file(&path, &to_json(&tips))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn suite_list() -> String {
    Suite::ALL.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", ")
}

pub fn cmd_benchmark(suite: &str, out: Option<PathBuf>) -> Result<(), CliError> {
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![suite.parse().map_err(|_| CliError::Usage(format!("unknown suite `{suite}`; valid suites: all, {}", suite_list())))?]
    };
    let mut results: Vec<CriterionResult> = Vec::new();
    for s in suites {
        results.extend(run_suite(s)?);
    }
    print!("{}", render_table(&results));
    for r in &results {
        println!("{}", r.line());
    }
    if let Some(path) = out {
        write_file(&path, &to_json(&results))?;
    }
    let failed: Vec<String> = results.iter().filter(|r| !r.pass).map(|r| r.id.to_string()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(format!("criteria failed: {}", failed.join(", "))))
    }
}

pub fn cmd_cases() -> Result<(), CliError> {
    for case in builtin_cases() {
        let crack = match case.domain.crack {
            Some(c) => format!(", crack with {} tip(s)", c.tips().len()),
            None => String::new(),
        };
        println!(
            "{:<20} {} boundary segments, E = {}, nu = {}{}",
            case.name,
            case.domain.segments.len(),
            case.material.e,
            case.material.nu,
            crack
        );
    }
    Ok(())
}
