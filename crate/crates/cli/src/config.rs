//! Run configuration: a `key = value` file overlaid by command-line flags.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use dirac_degen::em::{Axis, Grid, WaveParams};
use dirac_degen::potentials::KappaSign;
use dirac_degen::spinors::NearDegenerateForm;
use dirac_degen::symexpr::parse;
use dirac_degen::tunneling::{ELECTRON_MASS, PROTON_MASS};
use dirac_degen::{Complex, ScalarExpr};

use crate::ConfigError;

/// Environment variable naming a default config file.
pub const CONFIG_ENV: &str = "DIRAC_DEGEN_CONFIG";

pub const KEYS: &[&str] = &[
    "xi",
    "mass",
    "spinor-mass",
    "charge",
    "c1",
    "f-expr",
    "g-expr",
    "s-expr",
    "grid.t",
    "grid.x",
    "grid.y",
    "grid.z",
    "tol",
    "fd-tol",
    "seed",
    "points",
    "out",
    "units",
    "maxwell",
    "maxwell-step",
    "kappa2-sign",
    "ew1",
    "delta1",
    "ew2",
    "delta2",
    "kw",
    "width",
    "p-min",
    "p-max",
    "p-count",
    "particle",
    "mass-kg",
    "e1",
    "e2",
    "s-amp",
    "form",
];

/// Raw string settings; later layers override earlier ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    pub fn parse_file_contents(text: &str, origin: &str) -> Result<Self, ConfigError> {
        let mut values = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| ConfigError(format!("{origin}:{}: expected `key = value`, got `{line}`", n + 1)))?;
            let key = normalize(k);
            check_key(&key)?;
            values.insert(key, v.trim().to_string());
        }
        Ok(Settings { values })
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read config `{}`: {e}", path.display())))?;
        Settings::parse_file_contents(&text, &path.display().to_string())
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<(), ConfigError> {
        let key = normalize(key);
        check_key(&key)?;
        self.values.insert(key, value.into());
        Ok(())
    }

    pub fn overlay(&mut self, other: Settings) {
        self.values.extend(other.values);
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| ConfigError(format!("bad value for `{key}`: `{v}` ({e})")))
            })
            .transpose()
    }

    fn number(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        let v = self.parsed::<f64>(key)?.unwrap_or(default);
        if !v.is_finite() {
            return Err(ConfigError(format!("`{key}` must be finite")));
        }
        Ok(v)
    }

    fn list(&self, key: &str) -> Result<Option<Vec<f64>>, ConfigError> {
        self.get(key)
            .map(|v| {
                v.split(',')
                    .map(|x| {
                        x.trim()
                            .parse::<f64>()
                            .map_err(|e| ConfigError(format!("bad number in `{key}`: `{x}` ({e})")))
                    })
                    .collect()
            })
            .transpose()
    }

    fn expr(&self, key: &str) -> Result<Option<(String, ScalarExpr)>, ConfigError> {
        self.get(key)
            .map(|src| {
                parse(src)
                    .map(|e| (src.to_string(), e))
                    .map_err(|e| ConfigError(format!("bad expression for `{key}`: {e}")))
            })
            .transpose()
    }
}

fn normalize(key: &str) -> String {
    key.trim().replace('_', "-")
}

fn check_key(key: &str) -> Result<(), ConfigError> {
    if KEYS.contains(&key) {
        Ok(())
    } else {
        Err(ConfigError(format!("unknown setting `{key}`")))
    }
}

/// `origin:step:count`.
pub fn parse_axis(spec: &str) -> Result<Axis, ConfigError> {
    let bad = || ConfigError(format!("grid axis must be `origin:step:count`, got `{spec}`"));
    let parts: Vec<&str> = spec.split(':').map(str::trim).collect();
    let [o, h, n] = parts.as_slice() else {
        return Err(bad());
    };
    let origin: f64 = o.parse().map_err(|_| bad())?;
    let step: f64 = h.parse().map_err(|_| bad())?;
    let count: usize = n.parse().map_err(|_| bad())?;
    if !origin.is_finite() || !(step > 0.0) || !step.is_finite() || count == 0 {
        return Err(bad());
    }
    Ok(Axis::new(origin, step, count))
}

fn parse_complex(key: &str, v: &str) -> Result<Complex, ConfigError> {
    let bad = || ConfigError(format!("`{key}` must be `re,im`, got `{v}`"));
    let (re, im) = v.split_once(',').unwrap_or((v, "0"));
    let re: f64 = re.trim().parse().map_err(|_| bad())?;
    let im: f64 = im.trim().parse().map_err(|_| bad())?;
    Ok(Complex::new(re, im))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitChoice {
    Natural,
    Si,
}

/// Typed view of the merged settings with defaults applied.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub xi: Option<f64>,
    pub mass: f64,
    /// Mass of the spinors under test; `mass` goes into the operator.
    pub spinor_mass: f64,
    pub charge: f64,
    pub c1: Complex,
    pub f_expr: Option<(String, ScalarExpr)>,
    pub g_expr: Option<(String, ScalarExpr)>,
    pub s_expr: Option<(String, ScalarExpr)>,
    pub grid: Grid,
    pub tol: f64,
    pub fd_tol: f64,
    pub seed: u64,
    pub points: usize,
    pub out: Option<PathBuf>,
    pub units: UnitChoice,
    pub maxwell: bool,
    pub maxwell_step: Option<f64>,
    pub kappa2_sign: Option<KappaSign>,
    pub wave: WaveParams,
    pub width: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub p_count: usize,
    pub mass_kg: f64,
    pub particle: String,
    pub e1: Vec<f64>,
    pub e2: Vec<f64>,
    pub s_amp: Vec<f64>,
    pub form: NearDegenerateForm,
}

impl RunConfig {
    pub fn from_settings(s: &Settings) -> Result<Self, ConfigError> {
        let mass = s.number("mass", 1.0)?;
        if !(mass > 0.0) {
            return Err(ConfigError("`mass` must be positive".into()));
        }
        let spinor_mass = s.number("spinor-mass", mass)?;
        if !(spinor_mass > 0.0) {
            return Err(ConfigError("`spinor-mass` must be positive".into()));
        }
        let xi = s.parsed::<f64>("xi")?;
        if let Some(x) = xi {
            if !x.is_finite() || x.sin().abs() < 1e-12 {
                return Err(ConfigError(format!("`xi` = {x} must not be a multiple of π")));
            }
        }
        let charge = s.number("charge", 1.0)?;
        if charge == 0.0 {
            return Err(ConfigError("`charge` must be non-zero".into()));
        }
        let c1 = s
            .get("c1")
            .map(|v| parse_complex("c1", v))
            .transpose()?
            .unwrap_or(Complex::new(1.0, 0.0));

        let default_axes = [
            Axis::new(0.0, 0.5, 1),
            Axis::new(-1.0, 0.5, 5),
            Axis::new(-1.0, 0.5, 5),
            Axis::new(-1.0, 0.5, 5),
        ];
        let mut axes = default_axes;
        for (i, name) in ["grid.t", "grid.x", "grid.y", "grid.z"].iter().enumerate() {
            if let Some(v) = s.get(name) {
                axes[i] = parse_axis(v)?;
            }
        }

        let tol = s.number("tol", dirac_degen::residual::ANALYTIC_TOL)?;
        let fd_tol = s.number("fd-tol", dirac_degen::residual::FD_TOL)?;
        if !(tol > 0.0) || !(fd_tol > 0.0) {
            return Err(ConfigError("tolerances must be positive".into()));
        }
        let points = s.parsed::<usize>("points")?.unwrap_or(5);
        if points == 0 {
            return Err(ConfigError("`points` must be at least 1".into()));
        }

        let units = match s.get("units").unwrap_or("natural") {
            "natural" => UnitChoice::Natural,
            "si" | "SI" => UnitChoice::Si,
            other => return Err(ConfigError(format!("`units` must be natural or si, got `{other}`"))),
        };
        let kappa2_sign = s
            .get("kappa2-sign")
            .map(|v| v.parse::<KappaSign>().map_err(|e| ConfigError(e.to_string())))
            .transpose()?;
        let maxwell = match s.get("maxwell") {
            None | Some("false") | Some("0") => false,
            Some("true") | Some("1") => true,
            Some(other) => return Err(ConfigError(format!("`maxwell` must be true or false, got `{other}`"))),
        };
        let maxwell_step = s.parsed::<f64>("maxwell-step")?;
        if let Some(h) = maxwell_step {
            if !(h > 0.0) {
                return Err(ConfigError("`maxwell-step` must be positive".into()));
            }
        }

        let wave = WaveParams {
            e1: s.number("ew1", 1.0)?,
            delta1: s.number("delta1", 0.0)?,
            e2: s.number("ew2", 0.5)?,
            delta2: s.number("delta2", 0.5)?,
            k: s.number("kw", 2.0)?,
        };
        wave.validate().map_err(|e| ConfigError(e.to_string()))?;

        let particle = s.get("particle").unwrap_or("electron").to_string();
        let preset_mass = match particle.as_str() {
            "electron" => ELECTRON_MASS,
            "proton" => PROTON_MASS,
            other => return Err(ConfigError(format!("unknown particle `{other}`"))),
        };
        let mass_kg = s.number("mass-kg", preset_mass)?;
        if !(mass_kg > 0.0) {
            return Err(ConfigError("`mass-kg` must be positive".into()));
        }
        let width = s.number("width", 1.0)?;
        if !(width >= 0.0) {
            return Err(ConfigError("`width` must be non-negative".into()));
        }
        let p_min = s.number("p-min", 0.01)?;
        let p_max = s.number("p-max", 1000.0)?;
        let p_count = s.parsed::<usize>("p-count")?.unwrap_or(1000);
        if !(p_min > 0.0 && p_max > p_min) || p_count < 2 {
            return Err(ConfigError(
                "momentum grid needs 0 < p-min < p-max and p-count ≥ 2".into(),
            ));
        }

        let e1 = s.list("e1")?.unwrap_or_else(|| vec![0.0, 0.001, 0.01]);
        let e2 = s.list("e2")?.unwrap_or_else(|| vec![0.0, 0.001, 0.01]);
        let s_amp = s.list("s-amp")?.unwrap_or_else(|| vec![0.001, 0.01]);
        if e1.iter().any(|v| !(v.abs() < 0.1)) || e2.iter().any(|v| !(*v >= 0.0 && *v < 0.1)) {
            return Err(ConfigError("need |e1| < 0.1 and 0 ≤ e2 < 0.1".into()));
        }
        let form = match s.get("form").unwrap_or("exact") {
            "first-order" => NearDegenerateForm::FirstOrder,
            "exact" => NearDegenerateForm::Exact,
            other => {
                return Err(ConfigError(format!(
                    "`form` must be first-order or exact, got `{other}`"
                )))
            }
        };

        Ok(RunConfig {
            xi,
            mass,
            spinor_mass,
            charge,
            c1,
            f_expr: s.expr("f-expr")?,
            g_expr: s.expr("g-expr")?,
            s_expr: s.expr("s-expr")?,
            grid: Grid::new(axes),
            tol,
            fd_tol,
            seed: s.parsed::<u64>("seed")?.unwrap_or(0),
            points,
            out: s.get("out").map(PathBuf::from),
            units,
            maxwell,
            maxwell_step,
            kappa2_sign,
            wave,
            width,
            p_min,
            p_max,
            p_count,
            mass_kg,
            particle,
            e1,
            e2,
            s_amp,
            form,
        })
    }

    /// Degenerate-family angles to verify.
    pub fn xi_list(&self) -> Vec<f64> {
        match self.xi {
            Some(x) => vec![x],
            None => vec![0.4, FRAC_PI_2, 2.2],
        }
    }
}
