use std::path::{Path, PathBuf};

use kmnet::cases::{builtin_case, CaseName, CaseSpec};
use kmnet::cvnn::NetworkSpec;
use kmnet::energy::TrainConfig;
use kmnet::geometry::SamplingPlan;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Overrides the output directory of every command.
pub const OUTPUT_ENV: &str = "KMNET_OUTPUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExportGrid {
    pub nx: usize,
    pub ny: usize,
}

/// Contents of a `train` configuration file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Builtin case name.
    #[serde(default)]
    pub case: Option<String>,
    /// Full inline case, used instead of `case`.
    #[serde(default)]
    pub case_spec: Option<CaseSpec>,
    #[serde(default)]
    pub network: Option<NetworkSpec>,
    #[serde(default)]
    pub train: Option<TrainConfig>,
    #[serde(default)]
    pub sampling: Option<SamplingPlan>,
    /// Applied to network, sampling and training seeds.
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub export: Option<ExportGrid>,
}

fn default_output() -> PathBuf {
    PathBuf::from("runs")
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
        Self::from_toml(&text)
    }

    /// Case with every override applied, validated.
    pub fn resolve(&self) -> Result<CaseSpec, CliError> {
        let mut case = match (&self.case, &self.case_spec) {
            (Some(name), None) => builtin_case(name.parse::<CaseName>()?),
            (None, Some(spec)) => spec.clone(),
            (Some(_), Some(_)) => return Err(CliError::Config("set either `case` or `case_spec`, not both".into())),
            (None, None) => return Err(CliError::Config("missing `case` (or an inline `case_spec`)".into())),
        };
        if let Some(n) = &self.network {
            case.network = n.clone();
        }
        if let Some(t) = &self.train {
            case.train = t.clone();
        }
        if let Some(s) = &self.sampling {
            case.sampling = s.clone();
        }
        if let Some(seed) = self.seed {
            case.network.seed = seed;
            case.sampling.seed = seed;
            case.train.seed = seed;
        }
        if let Some(g) = self.export {
            if g.nx == 0 || g.ny == 0 {
                return Err(CliError::Config("export grid needs nx, ny >= 1".into()));
            }
        }
        case.validate()?;
        Ok(case)
    }

    pub fn output_dir(&self) -> PathBuf {
        output_dir_or(&self.output_dir)
    }
}

/// The environment override if set, `fallback` otherwise.
pub fn output_dir_or(fallback: &Path) -> PathBuf {
    match std::env::var_os(OUTPUT_ENV) {
        Some(v) if !v.is_empty() => PathBuf::from(v),
        _ => fallback.to_path_buf(),
    }
}

/// Builtin name or path to a TOML/JSON case file.
pub fn load_case(arg: &str) -> Result<CaseSpec, CliError> {
    if let Ok(name) = arg.parse::<CaseName>() {
        return Ok(builtin_case(name));
    }
    let path = Path::new(arg);
    if !path.exists() {
        let names: Vec<&str> = CaseName::ALL.iter().map(|c| c.as_str()).collect();
        return Err(CliError::Usage(format!("`{arg}` is neither a builtin case ({}) nor a file", names.join(", "))));
    }
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
    let case: CaseSpec = if path.extension().is_some_and(|e| e == "json") {
        serde_json::from_str(&text).map_err(|e| CliError::Config(e.to_string()))?
    } else {
        toml::from_str(&text).map_err(|e| CliError::Config(e.to_string()))?
    };
    case.validate()?;
    Ok(case)
}
