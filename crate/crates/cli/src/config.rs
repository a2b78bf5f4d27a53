//! JSON run configuration.
//!
//! ```json
//! {
//!   "model_i": {"ssh": {"t1": 1, "t2": 0.5}},
//!   "model_f": {"ssh": {"t1": 1, "t2": 2.0}},
//!   "grid": {"n": 1000},
//!   "time": {"t_min": 0, "t_max": 5, "samples": 501},
//!   "output": {"path": "rate.csv", "format": "csv"}
//! }
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use dqpt_core::{
    parse_expr, validate_model_def, AngleConvention, DzConvention, HaldaneParams, ModelClass, ModelSpec,
    ParamEnv, QuenchSpec, SshParams, XyParams,
};
use serde::Deserialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::CliError;
use crate::table::Format;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    model_i: RawModel,
    model_f: RawModel,
    #[serde(default)]
    grid: RawGrid,
    #[serde(default)]
    time: RawTime,
    #[serde(default)]
    tolerances: RawTolerances,
    #[serde(default)]
    output: RawOutput,
    k: Option<KSpec>,
    n_max: Option<u32>,
    dz_convention: Option<RawDz>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum RawModel {
    Ssh {
        t1: f64,
        t2: f64,
    },
    Xy {
        h: f64,
        gamma: f64,
    },
    Haldane {
        m: f64,
        gamma1: f64,
        gamma2: f64,
        phi: f64,
        dz_convention: Option<RawDz>,
    },
    Custom {
        dx: String,
        dy: String,
        dz: String,
        #[serde(default = "one")]
        dimension: usize,
        #[serde(default)]
        params: BTreeMap<String, f64>,
        class: Option<RawClass>,
        angles: Option<RawAngles>,
    },
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
enum RawDz {
    PaperCos,
    StandardSin,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
enum RawClass {
    Insulator,
    Superconductor,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
enum RawAngles {
    Planar,
    Spherical,
    Bogoliubov,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    n: Option<usize>,
    n1: Option<usize>,
    n2: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTime {
    t_min: Option<f64>,
    t_max: Option<f64>,
    samples: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTolerances {
    root: Option<f64>,
    boundary: Option<f64>,
    contour: Option<f64>,
    scan_n: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    path: Option<PathBuf>,
    format: Option<Format>,
}

/// Momentum for single-mode commands: `k` on a chain, fractional `[u, v]` on
/// a planar cell.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum KSpec {
    Chain(f64),
    Fractional([f64; 2]),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeWindow {
    pub t_min: f64,
    pub t_max: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub root: f64,
    pub boundary: f64,
    pub contour: f64,
    pub scan_n: usize,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub quench: QuenchSpec,
    /// Grid sizes; chains use `n1` only.
    pub n1: usize,
    pub n2: usize,
    pub time: TimeWindow,
    pub tolerances: Tolerances,
    pub out_path: Option<PathBuf>,
    pub format: Option<Format>,
    pub k: Option<KSpec>,
    pub n_max: u32,
    /// SHA-256 of the effective configuration, hex encoded.
    pub hash: String,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub grid: Option<usize>,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub t_samples: Option<usize>,
    pub k: Option<f64>,
}

pub fn load_config(path: &Path, overrides: &Overrides) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config("<file>", format!("{}: {e}", path.display())))?;
    load_config_str(&text, overrides)
}

pub fn load_config_str(text: &str, overrides: &Overrides) -> Result<RunConfig, CliError> {
    let mut value: Value = serde_json::from_str(text).map_err(|e| CliError::config("<root>", e))?;
    apply_overrides(&mut value, overrides)?;
    let hash = hex(&Sha256::digest(value.to_string().as_bytes()));
    let raw: RawConfig = serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        CliError::config(path, e.into_inner())
    })?;
    build(raw, hash)
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn apply_overrides(value: &mut Value, o: &Overrides) -> Result<(), CliError> {
    let root = value
        .as_object_mut()
        .ok_or_else(|| CliError::config("<root>", "expected a JSON object"))?;
    let mut set = |section: &str, key: &str, v: Value| -> Result<(), CliError> {
        let entry = root
            .entry(section)
            .or_insert_with(|| Value::Object(Default::default()));
        let obj = entry
            .as_object_mut()
            .ok_or_else(|| CliError::config(section, "expected an object"))?;
        obj.insert(key.to_string(), v);
        Ok(())
    };
    if let Some(n) = o.grid {
        set("grid", "n", n.into())?;
    }
    if let Some(t) = o.t_min {
        set("time", "t_min", t.into())?;
    }
    if let Some(t) = o.t_max {
        set("time", "t_max", t.into())?;
    }
    if let Some(n) = o.t_samples {
        set("time", "samples", n.into())?;
    }
    if let Some(p) = &o.out {
        set("output", "path", p.display().to_string().into())?;
    }
    if let Some(f) = o.format {
        set("output", "format", f.name().into())?;
    }
    if let Some(k) = o.k {
        root.insert("k".into(), k.into());
    }
    Ok(())
}

fn build(raw: RawConfig, hash: String) -> Result<RunConfig, CliError> {
    let default_dz = raw.dz_convention;
    let model_i = build_model("model_i", raw.model_i, default_dz)?;
    let model_f = build_model("model_f", raw.model_f, default_dz)?;
    let quench = QuenchSpec::new(model_i, model_f).map_err(|e| CliError::config("model_f", e))?;

    let default_n = if quench.dimension() == 1 { 1000 } else { 512 };
    let n1 = raw.grid.n1.or(raw.grid.n).unwrap_or(default_n);
    let n2 = raw.grid.n2.or(raw.grid.n).unwrap_or(default_n);
    if n1 < 2 || (quench.dimension() == 2 && n2 < 2) {
        return Err(CliError::config("grid", "grid needs at least 2 points per axis"));
    }

    let time = TimeWindow {
        t_min: raw.time.t_min.unwrap_or(0.0),
        t_max: raw.time.t_max.unwrap_or(5.0),
        samples: raw.time.samples.unwrap_or(501),
    };
    if !(time.t_min.is_finite() && time.t_max.is_finite() && time.t_min < time.t_max) {
        return Err(CliError::config(
            "time",
            "t_min must be finite and smaller than t_max",
        ));
    }
    if time.samples < 2 {
        return Err(CliError::config("time.samples", "need at least 2 samples"));
    }

    let tolerances = Tolerances {
        root: raw.tolerances.root.unwrap_or(1e-12),
        boundary: raw.tolerances.boundary.unwrap_or(1e-6),
        contour: raw.tolerances.contour.unwrap_or(1e-10),
        scan_n: raw.tolerances.scan_n.unwrap_or(4096),
    };
    for (name, v) in [
        ("tolerances.root", tolerances.root),
        ("tolerances.boundary", tolerances.boundary),
        ("tolerances.contour", tolerances.contour),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(CliError::config(name, "must be positive"));
        }
    }
    if tolerances.scan_n < 64 {
        return Err(CliError::config("tolerances.scan_n", "must be at least 64"));
    }

    match (raw.k, quench.dimension()) {
        (Some(KSpec::Chain(_)), 2) => {
            return Err(CliError::config("k", "planar models take fractional [u, v]"))
        }
        (Some(KSpec::Fractional(_)), 1) => return Err(CliError::config("k", "chain models take a scalar k")),
        _ => {}
    }

    Ok(RunConfig {
        quench,
        n1,
        n2,
        time,
        tolerances,
        out_path: raw.output.path,
        format: raw.output.format,
        k: raw.k,
        n_max: raw.n_max.unwrap_or(4),
        hash,
    })
}

fn build_model(side: &str, raw: RawModel, default_dz: Option<RawDz>) -> Result<ModelSpec, CliError> {
    let bad = |sub: &str, e: dqpt_core::Error| CliError::config(format!("{side}.{sub}"), e);
    Ok(match raw {
        RawModel::Ssh { t1, t2 } => ModelSpec::Ssh(SshParams::new(t1, t2).map_err(|e| bad("ssh", e))?),
        RawModel::Xy { h, gamma } => ModelSpec::Xy(XyParams { h, gamma }),
        RawModel::Haldane {
            m,
            gamma1,
            gamma2,
            phi,
            dz_convention,
        } => {
            let dz = match dz_convention.or(default_dz) {
                Some(RawDz::PaperCos) => DzConvention::PaperCos,
                Some(RawDz::StandardSin) | None => DzConvention::StandardSin,
            };
            ModelSpec::Haldane(
                HaldaneParams::new(m, gamma1, gamma2, phi)
                    .map_err(|e| bad("haldane", e))?
                    .with_convention(dz),
            )
        }
        RawModel::Custom {
            dx,
            dy,
            dz,
            dimension,
            params,
            class,
            angles,
        } => {
            let mut env = ParamEnv::new();
            for (name, value) in params {
                env.insert(name.clone(), value)
                    .map_err(|e| CliError::config(format!("{side}.custom.params.{name}"), e))?;
            }
            let mut parsed = Vec::with_capacity(3);
            for (axis, src) in [("dx", &dx), ("dy", &dy), ("dz", &dz)] {
                parsed
                    .push(parse_expr(src).map_err(|e| CliError::config(format!("{side}.custom.{axis}"), e))?);
            }
            let [ex, ey, ez]: [_; 3] = parsed.try_into().expect("three components");
            let model = validate_model_def(ex, ey, ez, dimension, env).map_err(|e| bad("custom", e))?;
            let ModelSpec::Custom(mut custom) = model else {
                unreachable!("validate_model_def builds custom models")
            };
            if let Some(c) = class {
                custom = custom.with_class(match c {
                    RawClass::Insulator => ModelClass::Insulator,
                    RawClass::Superconductor => ModelClass::Superconductor,
                });
            }
            if let Some(a) = angles {
                custom = custom.with_angle_convention(match a {
                    RawAngles::Planar => AngleConvention::Planar,
                    RawAngles::Spherical => AngleConvention::Spherical,
                    RawAngles::Bogoliubov => AngleConvention::Bogoliubov,
                });
            }
            ModelSpec::Custom(custom)
        }
    })
}
