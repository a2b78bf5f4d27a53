//! Quench data per momentum mode, Loschmidt amplitudes and Fisher zeros.
//!
//! After a sudden switch `d_i → d_f` each mode contributes the factor
//! `cos(ε t) + i g sin(ε t)` to the Loschmidt amplitude, with `ε = |d_f|`
//! and `g = d̂ᵢ · d̂f`. The rate function is the intensive log-echo
//! `λ(t) = -(1/N) Σ_k ln |G_k(t)|²`.

use std::f64::consts::PI;
use std::ops::RangeInclusive;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{unit_overlap, BrillouinGrid, DVector, Momentum};
use crate::models::{basis_angles, AngleConvention, ModelClass, ModelSpec};

/// Overlaps below this are treated as exactly critical when placing Fisher zeros.
pub const ZERO_OVERLAP: f64 = 1e-12;

/// Default `|g|` threshold for accepting a momentum as critical.
pub const CRITICAL_TOLERANCE: f64 = 1e-8;

/// Default Fisher-zero / DQPT branch window.
pub const DEFAULT_BRANCHES: RangeInclusive<i64> = 0..=4;

/// A sudden switch between two models on the same momentum domain.
#[derive(Debug, Clone, PartialEq)]
pub struct QuenchSpec {
    initial: ModelSpec,
    fin: ModelSpec,
}

impl QuenchSpec {
    pub fn new(initial: ModelSpec, fin: ModelSpec) -> Result<Self> {
        if initial.dimension() != fin.dimension() {
            return Err(Error::DimensionMismatch(format!(
                "initial model is {}D but final model is {}D",
                initial.dimension(),
                fin.dimension()
            )));
        }
        if initial.class() != fin.class() {
            return Err(Error::InvalidModel(
                "initial and final models must both be insulators or both superconductors".into(),
            ));
        }
        Ok(Self { initial, fin })
    }

    pub fn initial(&self) -> &ModelSpec {
        &self.initial
    }

    pub fn final_model(&self) -> &ModelSpec {
        &self.fin
    }

    pub fn dimension(&self) -> usize {
        self.initial.dimension()
    }

    pub fn class(&self) -> ModelClass {
        self.initial.class()
    }

    /// Superconductors keep one representative of each `(k, -k)` pair.
    pub fn half_zone(&self) -> bool {
        self.class() == ModelClass::Superconductor
    }

    pub fn angle_convention(&self) -> AngleConvention {
        self.fin.angle_convention()
    }

    pub fn d_vectors(&self, k: &Momentum) -> Result<(DVector, DVector)> {
        Ok((self.initial.d_vector(k)?, self.fin.d_vector(k)?))
    }

    /// `g(k) = d̂ᵢ · d̂f`.
    pub fn overlap(&self, k: &Momentum) -> Result<f64> {
        let (di, df) = self.d_vectors(k)?;
        unit_overlap(&di, &df).map_err(|e| with_momentum(e, k))
    }
}

pub(crate) fn with_momentum(e: Error, k: &Momentum) -> Error {
    match e {
        Error::GapClosure { norm, momentum: None } => Error::GapClosure {
            norm,
            momentum: Some(*k),
        },
        other => other,
    }
}

/// Scalars that fix the post-quench dynamics of one mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeData {
    pub momentum: Momentum,
    /// `d̂ᵢ · d̂f`, in `[-1, 1]`.
    pub g: f64,
    /// Post-quench single-particle energy `|d_f|`.
    pub eps_f: f64,
    pub theta_i: f64,
    pub theta_f: f64,
    pub azimuth_i: f64,
    pub azimuth_f: f64,
    pub class: ModelClass,
    pub convention: AngleConvention,
}

impl ModeData {
    pub fn from_vectors(
        momentum: Momentum,
        d_i: &DVector,
        d_f: &DVector,
        class: ModelClass,
        convention: AngleConvention,
    ) -> Result<Self> {
        let tag = |e| with_momentum(e, &momentum);
        let g = unit_overlap(d_i, d_f).map_err(tag)?;
        let ai = basis_angles(d_i, convention).map_err(tag)?;
        let af = basis_angles(d_f, convention).map_err(tag)?;
        Ok(Self {
            momentum,
            g,
            eps_f: d_f.norm(),
            theta_i: ai.theta,
            theta_f: af.theta,
            azimuth_i: ai.azimuth,
            azimuth_f: af.azimuth,
            class,
            convention,
        })
    }

    /// `Δθ = θ_f - θ_i`.
    pub fn delta_theta(&self) -> f64 {
        self.theta_f - self.theta_i
    }
}

pub fn mode_data(q: &QuenchSpec, k: &Momentum) -> Result<ModeData> {
    let (di, df) = q.d_vectors(k)?;
    ModeData::from_vectors(*k, &di, &df, q.class(), q.angle_convention())
}

/// Mode data for every grid point, in grid order.
pub fn mode_table(q: &QuenchSpec, grid: &BrillouinGrid) -> Result<Vec<ModeData>> {
    check_grid(q, grid)?;
    grid.points().par_iter().map(|k| mode_data(q, k)).collect()
}

fn check_grid(q: &QuenchSpec, grid: &BrillouinGrid) -> Result<()> {
    if grid.dimension() != q.dimension() {
        return Err(Error::DimensionMismatch(format!(
            "{}D grid for a {}D quench",
            grid.dimension(),
            q.dimension()
        )));
    }
    Ok(())
}

fn complex_cos(z: Complex64) -> Complex64 {
    Complex64::new(z.re.cos() * z.im.cosh(), -z.re.sin() * z.im.sinh())
}

fn complex_sin(z: Complex64) -> Complex64 {
    Complex64::new(z.re.sin() * z.im.cosh(), z.re.cos() * z.im.sinh())
}

/// Loschmidt factor `cos(ε t) + i g sin(ε t)` at a (possibly complex) time.
pub fn loschmidt_mode(md: &ModeData, time: Complex64) -> Complex64 {
    let w = time * md.eps_f;
    complex_cos(w) + Complex64::i() * md.g * complex_sin(w)
}

/// Squared modulus of the real-time Loschmidt factor, `cos²(εt) + g² sin²(εt)`.
pub fn echo_mode(md: &ModeData, t: f64) -> f64 {
    loschmidt_mode(md, Complex64::new(t, 0.0)).norm_sqr()
}

/// A zero of one mode's Loschmidt factor in the plane `z = τ + i t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FisherZero {
    pub n: i64,
    pub z: Complex64,
}

impl FisherZero {
    /// The time argument `-i z` at which [`loschmidt_mode`] vanishes; real
    /// time `t` corresponds to `z = i t`.
    pub fn time_argument(&self) -> Complex64 {
        Complex64::new(self.z.im, -self.z.re)
    }
}

/// Fisher zeros `z_n = iπ(n + ½)/ε - artanh(g)/ε`.
///
/// They touch the imaginary axis exactly when `g = 0`. A mode with `|g| = 1`
/// never decays and has no zeros.
pub fn fisher_zeros(md: &ModeData, n_range: RangeInclusive<i64>) -> Vec<FisherZero> {
    if !(md.g.abs() < 1.0) || !(md.eps_f > 0.0) {
        return Vec::new();
    }
    let re = if md.g.abs() < ZERO_OVERLAP {
        0.0
    } else {
        -md.g.atanh() / md.eps_f
    };
    n_range
        .map(|n| FisherZero {
            n,
            z: Complex64::new(re, PI * (n as f64 + 0.5) / md.eps_f),
        })
        .collect()
}

/// DQPT times `t_n = π(n + ½)/ε` of a critical momentum.
pub fn dqpt_times(q: &QuenchSpec, k_star: &Momentum, n_range: RangeInclusive<i64>) -> Result<Vec<f64>> {
    dqpt_times_with_tolerance(q, k_star, n_range, CRITICAL_TOLERANCE)
}

pub fn dqpt_times_with_tolerance(
    q: &QuenchSpec,
    k_star: &Momentum,
    n_range: RangeInclusive<i64>,
    tolerance: f64,
) -> Result<Vec<f64>> {
    let md = mode_data(q, k_star)?;
    if !(md.g.abs() < tolerance) {
        return Err(Error::NotCritical {
            momentum: *k_star,
            overlap: md.g,
            tolerance,
        });
    }
    Ok(n_range.map(|n| PI * (n as f64 + 0.5) / md.eps_f).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint {
    pub t: f64,
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateSeries {
    pub points: Vec<RatePoint>,
    pub n_modes: usize,
    pub half_zone: bool,
}

/// Pairwise (cascade) summation; the tree shape depends only on `xs.len()`.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const LEAF: usize = 32;
    if xs.len() <= LEAF {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

fn log_echo(echo: f64, t: f64, md: &ModeData) -> Result<f64> {
    let l = echo.ln();
    if echo == 0.0 || !l.is_finite() {
        return Err(Error::NonFiniteRate {
            time: t,
            momentum: md.momentum,
        });
    }
    Ok(l)
}

/// `λ(t) = -(1/N) Σ_k ln |G_k(t)|²` over the grid modes.
///
/// Times are evaluated in parallel; each time sums its modes with a fixed
/// pairwise tree in grid order, so results are bit-reproducible.
pub fn rate_function(q: &QuenchSpec, grid: &BrillouinGrid, times: &[f64]) -> Result<RateSeries> {
    let modes = mode_table(q, grid)?;
    let n = modes.len() as f64;
    let per_time: Vec<Result<RatePoint>> = times
        .par_iter()
        .map(|&t| {
            let mut logs = Vec::with_capacity(modes.len());
            for md in &modes {
                logs.push(log_echo(echo_mode(md, t), t, md)?);
            }
            Ok(RatePoint {
                t,
                lambda: 0.0 - pairwise_sum(&logs) / n,
            })
        })
        .collect();
    let points = per_time.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(RateSeries {
        points,
        n_modes: modes.len(),
        half_zone: grid.half_zone(),
    })
}

/// `n` equally spaced times from `t_min` to `t_max` inclusive.
pub fn time_grid(t_min: f64, t_max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![t_min],
        _ => {
            let step = (t_max - t_min) / (n - 1) as f64;
            (0..n).map(|i| t_min + step * i as f64).collect()
        }
    }
}
