use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Canonical scenarios, in catalogue order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioName {
    Sod,
    SimpleWave,
    IsentropicAdvection,
    Uniform,
    Impulsive,
    ShearLayer,
    Carnot,
    EntropyContact,
}

impl ScenarioName {
    pub const ALL: [ScenarioName; 8] = [
        Self::Sod,
        Self::SimpleWave,
        Self::IsentropicAdvection,
        Self::Uniform,
        Self::Impulsive,
        Self::ShearLayer,
        Self::Carnot,
        Self::EntropyContact,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Sod => "sod",
            Self::SimpleWave => "simple_wave",
            Self::IsentropicAdvection => "isentropic_advection",
            Self::Uniform => "uniform",
            Self::Impulsive => "impulsive",
            Self::ShearLayer => "shear_layer",
            Self::Carnot => "carnot",
            Self::EntropyContact => "entropy_contact",
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            Self::Sod => "Sod shock tube checked against the exact Riemann solution",
            Self::SimpleWave => "sinusoidal simple wave steepening into a shock; breaking time versus detector events",
            Self::IsentropicAdvection => "density wave advected at constant pressure; entropy drift along trajectories",
            Self::Uniform => "uniform gas at rest or in steady motion; the stable reference flow",
            Self::Impulsive => "gas impulsively set in motion over half the tube",
            Self::ShearLayer => "smooth velocity step with Newtonian stress supplied to the diagnostics",
            Self::Carnot => "Carnot cycle of an ideal gas, optionally with friction on the hot isotherm",
            Self::EntropyContact => "gas at rest with a kink in entropy; break of sound speed across the trajectory",
        }
    }

    /// Scenarios that run the gas-dynamics solver.
    pub fn is_flow(&self) -> bool {
        !matches!(self, Self::Carnot)
    }

    fn extra_keys(&self) -> &'static [&'static str] {
        match self {
            Self::Sod => &["rho_l", "u_l", "p_l", "rho_r", "u_r", "p_r", "x0"],
            Self::SimpleWave => &["eps"],
            Self::IsentropicAdvection => &["amplitude"],
            Self::Uniform => &["rho", "u", "p"],
            Self::Impulsive => &["U"],
            Self::ShearLayer => &["mu", "du", "width"],
            Self::Carnot => &["T_h", "T_c", "steps", "V1", "V2", "friction"],
            Self::EntropyContact => &["slope"],
        }
    }
}

impl fmt::Display for ScenarioName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| format!("unknown scenario `{s}`"))
    }
}

/// The catalogue with one-line descriptions, in stable order.
pub fn list_scenarios() -> Vec<(ScenarioName, &'static str)> {
    ScenarioName::ALL.into_iter().map(|n| (n, n.description())).collect()
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, found `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` is given twice (first on line {first})")]
    Duplicate { line: usize, key: String, first: usize },
    #[error("line {line}: `{key}`: {message}")]
    Invalid { line: usize, key: String, message: String },
    #[error("missing required key `{key}`")]
    Missing { key: String },
}

/// Validated scenario configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub name: ScenarioName,
    pub n: usize,
    pub cfl: f64,
    pub gamma: f64,
    pub r: f64,
    pub t_end: f64,
    /// Times written to `slices.csv` and `diagnostics.csv`.
    pub outputs: Vec<f64>,
    /// Scenario-specific values, sorted by key.
    pub extras: Vec<(String, f64)>,
}

impl ScenarioConfig {
    /// Scenario-specific value or its default.
    pub fn extra(&self, key: &str, default: f64) -> f64 {
        self.extras
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| *v)
            .unwrap_or(default)
    }
}

const COMMON_KEYS: [&str; 7] = ["name", "N", "cfl", "gamma", "R", "t_end", "outputs"];

fn parse_f64(line: usize, key: &str, value: &str) -> Result<f64, ConfigError> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| ConfigError::Invalid {
            line,
            key: key.into(),
            message: format!("`{value}` is not a finite number"),
        })
}

fn invalid(line: usize, key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        line,
        key: key.into(),
        message: message.into(),
    }
}

/// Parses line-oriented `key = value` text; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let mut entries: Vec<(usize, String, String)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line,
            text: content.into(),
        })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(ConfigError::Syntax {
                line,
                text: content.into(),
            });
        }
        if let Some((first, _, _)) = entries.iter().find(|(_, k, _)| k == key) {
            return Err(ConfigError::Duplicate {
                line,
                key: key.into(),
                first: *first,
            });
        }
        entries.push((line, key.into(), value.into()));
    }

    let find = |key: &str| entries.iter().find(|(_, k, _)| k == key);
    let (name_line, _, name_value) = find("name").ok_or(ConfigError::Missing { key: "name".into() })?;
    let name: ScenarioName = name_value.parse().map_err(|m| invalid(*name_line, "name", m))?;

    for (line, key, _) in &entries {
        if !COMMON_KEYS.contains(&key.as_str()) && !name.extra_keys().contains(&key.as_str()) {
            return Err(ConfigError::UnknownKey {
                line: *line,
                key: key.clone(),
            });
        }
    }

    let number = |key: &str| -> Result<Option<(usize, f64)>, ConfigError> {
        find(key)
            .map(|(line, k, v)| parse_f64(*line, k, v).map(|x| (*line, x)))
            .transpose()
    };

    let gamma = match number("gamma")? {
        Some((line, g)) if g <= 1.0 => return Err(invalid(line, "gamma", "must exceed 1")),
        Some((_, g)) => g,
        None => 1.4,
    };
    let r = match number("R")? {
        Some((line, r)) if r <= 0.0 => return Err(invalid(line, "R", "must be positive")),
        Some((_, r)) => r,
        None => 1.0,
    };
    let cfl = match number("cfl")? {
        Some((line, c)) if !(c > 0.0 && c <= 0.9) => {
            return Err(invalid(line, "cfl", format!("{c} is outside 0 < cfl <= 0.9")))
        }
        Some((_, c)) => c,
        None => 0.8,
    };
    let n = match find("N") {
        Some((line, k, v)) => {
            let n: usize = v.parse().map_err(|_| invalid(*line, k, format!("`{v}` is not a cell count")))?;
            if n < 16 {
                return Err(invalid(*line, k, format!("{n} is below the minimum of 16")));
            }
            n
        }
        None if name.is_flow() => return Err(ConfigError::Missing { key: "N".into() }),
        None => 16,
    };
    let t_end = match number("t_end")? {
        Some((line, t)) if t <= 0.0 => return Err(invalid(line, "t_end", "must be positive")),
        Some((_, t)) => t,
        None if name.is_flow() => return Err(ConfigError::Missing { key: "t_end".into() }),
        None => 1.0,
    };
    let outputs = match find("outputs") {
        Some((line, k, v)) => {
            let mut times = Vec::new();
            for item in v.split(',') {
                let t = parse_f64(*line, k, item.trim())?;
                if !(0.0..=t_end).contains(&t) {
                    return Err(invalid(*line, k, format!("{t} is outside [0, t_end]")));
                }
                times.push(t);
            }
            times.sort_by(f64::total_cmp);
            times.dedup();
            times
        }
        None => vec![t_end],
    };

    let mut extras = Vec::new();
    for key in name.extra_keys() {
        if let Some((line, v)) = number(key)? {
            extras.push((line, key.to_string(), v));
        }
    }
    for (line, key, v) in &extras {
        let ok = match key.as_str() {
            "u_l" | "u_r" | "u" | "U" | "eps" | "du" | "friction" => true,
            "steps" => *v >= 4.0 && v.fract() == 0.0,
            "x0" => *v > 0.0 && *v < 1.0,
            "amplitude" => *v >= 0.0 && *v < 1.0,
            "mu" => *v >= 0.0,
            _ => *v > 0.0,
        };
        if !ok {
            return Err(invalid(*line, key, format!("{v} is out of range")));
        }
    }
    let extras: Vec<(String, f64)> = extras.into_iter().map(|(_, k, v)| (k, v)).collect();
    if name == ScenarioName::Carnot {
        let get = |k: &str, d: f64| extras.iter().find(|(x, _)| x == k).map(|(_, v)| *v).unwrap_or(d);
        if get("T_c", 1.0) >= get("T_h", 2.0) {
            let line = find("T_c").or(find("T_h")).map(|(l, _, _)| *l).unwrap_or(*name_line);
            return Err(invalid(line, "T_c", "must be below T_h"));
        }
        if get("V1", 1.0) >= get("V2", 2.0) {
            let line = find("V1").or(find("V2")).map(|(l, _, _)| *l).unwrap_or(*name_line);
            return Err(invalid(line, "V1", "must be below V2"));
        }
    }
    let mut extras = extras;
    extras.sort_by(|a, b| a.0.cmp(&b.0));

    Ok(ScenarioConfig {
        name,
        n,
        cfl,
        gamma,
        r,
        t_end,
        outputs,
        extras,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_flow_config_gets_defaults() {
        let c = parse_config("name = sod\nN = 400\nt_end = 0.25").unwrap();
        assert_eq!(c.name, ScenarioName::Sod);
        assert_eq!((c.n, c.cfl, c.gamma, c.r, c.t_end), (400, 0.8, 1.4, 1.0, 0.25));
        assert_eq!(c.outputs, vec![0.25]);
        assert!(c.extras.is_empty());
    }

    #[test]
    fn comments_and_blank_lines() {
        let c = parse_config("# tube\n\nname = uniform # trailing\nN = 32\nt_end = 1\noutputs = 0.5, 0, 1\n").unwrap();
        assert_eq!(c.outputs, vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn cfl_bound_names_the_line() {
        let e = parse_config("name = sod\nN = 400\nt_end = 0.25\ncfl = 1.5").unwrap_err();
        assert!(matches!(&e, ConfigError::Invalid { line: 4, key, .. } if key == "cfl"));
        assert!(e.to_string().contains("line 4") && e.to_string().contains("cfl"));
    }

    #[test]
    fn carnot_needs_no_grid() {
        let c = parse_config("name = carnot\nT_h = 2\nT_c = 1\nsteps = 4000").unwrap();
        assert_eq!(c.extra("steps", 0.0), 4000.0);
        assert_eq!(c.extra("friction", 0.0), 0.0);
        let e = parse_config("name = carnot\nT_h = 1\nT_c = 2").unwrap_err();
        assert!(matches!(e, ConfigError::Invalid { line: 3, .. }));
    }

    #[test]
    fn rejections() {
        let unknown = parse_config("name = sod\nN = 400\nt_end = 1\nbogus = 3").unwrap_err();
        assert_eq!(
            unknown,
            ConfigError::UnknownKey {
                line: 4,
                key: "bogus".into()
            }
        );
        // A key of another scenario is unknown here.
        assert!(matches!(
            parse_config("name = sod\nN = 400\nt_end = 1\neps = 0.1"),
            Err(ConfigError::UnknownKey { line: 4, .. })
        ));
        assert_eq!(
            parse_config("name = sod\nt_end = 1").unwrap_err(),
            ConfigError::Missing { key: "N".into() }
        );
        assert!(matches!(parse_config("name = sod\nN = 8\nt_end = 1"), Err(ConfigError::Invalid { line: 2, .. })));
        assert!(matches!(parse_config("name = sod\nN 400"), Err(ConfigError::Syntax { line: 2, .. })));
        assert!(matches!(
            parse_config("name = sod\nN = 400\nN = 200"),
            Err(ConfigError::Duplicate { line: 3, first: 2, .. })
        ));
        assert!(matches!(parse_config("name = vortex"), Err(ConfigError::Invalid { line: 1, .. })));
        assert!(matches!(
            parse_config("name = sod\nN = 400\nt_end = -1"),
            Err(ConfigError::Invalid { line: 3, .. })
        ));
        assert!(matches!(
            parse_config("name = sod\nN = 400\nt_end = 1\noutputs = 2"),
            Err(ConfigError::Invalid { line: 4, .. })
        ));
        assert!(matches!(parse_config("N = 400"), Err(ConfigError::Missing { .. })));
    }

    #[test]
    fn catalogue_is_stable() {
        let names: Vec<&str> = list_scenarios().iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(
            names,
            [
                "sod",
                "simple_wave",
                "isentropic_advection",
                "uniform",
                "impulsive",
                "shear_layer",
                "carnot",
                "entropy_contact"
            ]
        );
        assert!(list_scenarios().iter().all(|(_, d)| !d.is_empty()));
        for n in ScenarioName::ALL {
            assert_eq!(n.as_str().parse::<ScenarioName>().unwrap(), n);
        }
    }
}
