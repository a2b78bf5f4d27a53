//! Built-in two-band models and their equilibrium phase labels.

use std::f64::consts::PI;
use std::fmt;

use crate::dsl::CustomModel;
use crate::error::{Error, Result};
use crate::geometry::{DVector, Momentum, Momentum2D, Vec2, GAP_EPS};

/// Staggered-hopping chain, `d_k = (t1 + t2 cos k, t2 sin k, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SshParams {
    pub t1: f64,
    pub t2: f64,
}

impl SshParams {
    pub fn new(t1: f64, t2: f64) -> Result<Self> {
        if t1 == 0.0 && t2 == 0.0 {
            return Err(Error::InvalidModel("SSH hoppings cannot both vanish".into()));
        }
        Ok(Self { t1, t2 })
    }
}

/// Quantum XY chain after Jordan-Wigner, `d_k = (0, -γ sin k, h - cos k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XyParams {
    pub h: f64,
    pub gamma: f64,
}

/// Form of the next-nearest-neighbour sum in the Haldane mass term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DzConvention {
    /// `Σ cos(k·b_j)`: even in `k`, gives the same mass at both valleys.
    PaperCos,
    /// `Σ sin(k·b_j)`: opposite masses at the valleys, gap closes at `|m| = 3√3 γ₂ |sin φ|`.
    #[default]
    StandardSin,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HaldaneParams {
    pub m: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub phi: f64,
    pub dz_convention: DzConvention,
}

impl HaldaneParams {
    pub fn new(m: f64, gamma1: f64, gamma2: f64, phi: f64) -> Result<Self> {
        if gamma1 == 0.0 {
            return Err(Error::InvalidModel("Haldane gamma1 must be nonzero".into()));
        }
        Ok(Self {
            m,
            gamma1,
            gamma2,
            phi,
            dz_convention: DzConvention::default(),
        })
    }

    pub fn with_convention(mut self, c: DzConvention) -> Self {
        self.dz_convention = c;
        self
    }
}

/// Whether a model describes sublattice orbitals or Nambu pairs `(k, -k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelClass {
    Insulator,
    Superconductor,
}

/// How basis angles are read off a d-vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngleConvention {
    /// In-plane angle `atan2(d_y, d_x)` of a chain with `d_z = 0`. The sublattice
    /// frame treats it as a polar angle, `d̂ → (sin θ, 0, cos θ)`.
    Planar,
    /// Polar and azimuthal angles of `d̂` on the Bloch sphere.
    Spherical,
    /// Bogoliubov angle with `tan 2θ = -d_y / d_z`.
    Bogoliubov,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    Ssh(SshParams),
    Xy(XyParams),
    Haldane(HaldaneParams),
    Custom(CustomModel),
}

impl ModelSpec {
    pub fn dimension(&self) -> usize {
        match self {
            ModelSpec::Ssh(_) | ModelSpec::Xy(_) => 1,
            ModelSpec::Haldane(_) => 2,
            ModelSpec::Custom(c) => c.dimension(),
        }
    }

    pub fn class(&self) -> ModelClass {
        match self {
            ModelSpec::Ssh(_) | ModelSpec::Haldane(_) => ModelClass::Insulator,
            ModelSpec::Xy(_) => ModelClass::Superconductor,
            ModelSpec::Custom(c) => c.class(),
        }
    }

    pub fn angle_convention(&self) -> AngleConvention {
        match self {
            ModelSpec::Ssh(_) => AngleConvention::Planar,
            ModelSpec::Xy(_) => AngleConvention::Bogoliubov,
            ModelSpec::Haldane(_) => AngleConvention::Spherical,
            ModelSpec::Custom(c) => c.angle_convention(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::Ssh(_) => "ssh",
            ModelSpec::Xy(_) => "xy",
            ModelSpec::Haldane(_) => "haldane",
            ModelSpec::Custom(_) => "custom",
        }
    }

    pub fn d_vector(&self, k: &Momentum) -> Result<DVector> {
        let mismatch = || {
            Error::DimensionMismatch(format!(
                "{}D momentum passed to the {}D {} model",
                k.dimension(),
                self.dimension(),
                self.name()
            ))
        };
        match self {
            ModelSpec::Ssh(p) => Ok(d_ssh(k.as_1d().ok_or_else(mismatch)?, p)),
            ModelSpec::Xy(p) => Ok(d_xy(k.as_1d().ok_or_else(mismatch)?, p)),
            ModelSpec::Haldane(p) => Ok(d_haldane(k.as_2d().ok_or_else(mismatch)?, p)),
            ModelSpec::Custom(c) => c.eval(k),
        }
    }

    /// Equilibrium phase from parameter inequalities; `None` for custom models.
    pub fn phase(&self) -> Option<Phase> {
        match self {
            ModelSpec::Ssh(p) => Some(ssh_phase(p)),
            ModelSpec::Xy(p) => Some(xy_phase(p)),
            ModelSpec::Haldane(p) => Some(haldane_phase(p)),
            ModelSpec::Custom(_) => None,
        }
    }
}

pub fn d_ssh(k: f64, p: &SshParams) -> DVector {
    let (s, c) = k.sin_cos();
    DVector::new(p.t1 + p.t2 * c, p.t2 * s, 0.0)
}

pub fn d_xy(k: f64, p: &XyParams) -> DVector {
    let (s, c) = k.sin_cos();
    DVector::new(0.0, -p.gamma * s, p.h - c)
}

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Nearest-neighbour bond vectors `a_j`.
pub fn honeycomb_nn() -> [Vec2; 3] {
    [
        Vec2::new(0.0, 1.0),
        Vec2::new(-SQRT3 / 2.0, -0.5),
        Vec2::new(SQRT3 / 2.0, -0.5),
    ]
}

/// Next-nearest-neighbour vectors `b_1 = a_2 - a_3`, `b_2 = a_3 - a_1`, `b_3 = a_1 - a_2`.
pub fn honeycomb_nnn() -> [Vec2; 3] {
    let [a1, a2, a3] = honeycomb_nn();
    [a2 - a3, a3 - a1, a1 - a2]
}

/// Reciprocal vectors `G_i` with `G_i · b_j = 2π δ_ij` for the translations `b_1`, `b_2`.
pub fn honeycomb_reciprocal() -> (Vec2, Vec2) {
    let [b1, b2, _] = honeycomb_nnn();
    let det = b1.cross(&b2);
    let s = 2.0 * PI / det;
    // rows of 2π (B^T)^{-1} with B = [b1 b2]
    let g1 = Vec2::new(b2.y * s, -b2.x * s);
    let g2 = Vec2::new(-b1.y * s, b1.x * s);
    (g1, g2)
}

/// Dirac points `K` and `K'` in fractional coordinates of [`honeycomb_reciprocal`].
pub const DIRAC_POINTS_FRACTIONAL: [(f64, f64); 2] = [(1.0 / 3.0, 1.0 / 3.0), (2.0 / 3.0, 2.0 / 3.0)];

pub fn d_haldane(k: &Momentum2D, p: &HaldaneParams) -> DVector {
    let kv = k.cartesian();
    let (mut dx, mut dy) = (0.0, 0.0);
    for a in honeycomb_nn() {
        let (s, c) = kv.dot(&a).sin_cos();
        dx += c;
        dy += s;
    }
    let nnn: f64 = honeycomb_nnn()
        .iter()
        .map(|b| {
            let x = kv.dot(b);
            match p.dz_convention {
                DzConvention::PaperCos => x.cos(),
                DzConvention::StandardSin => x.sin(),
            }
        })
        .sum();
    DVector::new(
        p.gamma1 * dx,
        p.gamma1 * dy,
        p.m - 2.0 * p.gamma2 * p.phi.sin() * nnn,
    )
}

/// `3√3 |γ₂ sin φ|`, the mass at which the Haldane gap closes.
pub fn haldane_critical_mass(p: &HaldaneParams) -> f64 {
    3.0 * SQRT3 * (p.gamma2 * p.phi.sin()).abs()
}

/// Basis angles of a d-vector, in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarAngles {
    pub theta: f64,
    pub azimuth: f64,
}

impl PolarAngles {
    /// Unit vector with these spherical angles.
    pub fn unit_vector(&self) -> DVector {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.azimuth.sin_cos();
        DVector::new(st * cp, st * sp, ct)
    }
}

fn gapped(d: &DVector) -> Result<f64> {
    let n = d.norm();
    if !(n > GAP_EPS) {
        return Err(Error::GapClosure {
            norm: n,
            momentum: None,
        });
    }
    Ok(n)
}

/// Spherical angles: `θ = arccos(d_z/|d|) ∈ [0, π]`, `φ = atan2(d_y, d_x) ∈ (-π, π]`.
pub fn polar_angles(d: &DVector) -> Result<PolarAngles> {
    let n = gapped(d)?;
    Ok(PolarAngles {
        theta: (d.dz / n).clamp(-1.0, 1.0).acos(),
        azimuth: d.dy.atan2(d.dx),
    })
}

/// In-plane angle of a chain d-vector, `tan θ = d_y / d_x`.
pub fn in_plane_angle(d: &DVector) -> Result<f64> {
    gapped(d)?;
    Ok(d.dy.atan2(d.dx))
}

/// Bogoliubov angle `θ = ½ atan2(γ sin k, h - cos k)`, written in d-vector components.
pub fn bogoliubov_angle(d: &DVector) -> Result<f64> {
    gapped(d)?;
    Ok(0.5 * (-d.dy).atan2(d.dz))
}

pub fn basis_angles(d: &DVector, convention: AngleConvention) -> Result<PolarAngles> {
    match convention {
        AngleConvention::Spherical => polar_angles(d),
        AngleConvention::Planar => Ok(PolarAngles {
            theta: in_plane_angle(d)?,
            azimuth: 0.0,
        }),
        AngleConvention::Bogoliubov => Ok(PolarAngles {
            theta: bogoliubov_angle(d)?,
            azimuth: 0.0,
        }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Trivial,
    Topological,
    /// Ferromagnetic along x (`|h| < 1`, `γ > 0`).
    FerromagneticX,
    /// Ferromagnetic along y (`|h| < 1`, `γ < 0`).
    FerromagneticY,
    Paramagnetic,
    Critical,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Trivial => "trivial",
            Phase::Topological => "topological",
            Phase::FerromagneticX => "FM_x",
            Phase::FerromagneticY => "FM_y",
            Phase::Paramagnetic => "PM",
            Phase::Critical => "critical",
        })
    }
}

pub fn ssh_phase(p: &SshParams) -> Phase {
    let (a, b) = (p.t1.abs(), p.t2.abs());
    if a > b {
        Phase::Trivial
    } else if a < b {
        Phase::Topological
    } else {
        Phase::Critical
    }
}

pub fn xy_phase(p: &XyParams) -> Phase {
    let h = p.h.abs();
    if h > 1.0 {
        Phase::Paramagnetic
    } else if h == 1.0 || p.gamma == 0.0 {
        Phase::Critical
    } else if p.gamma > 0.0 {
        Phase::FerromagneticX
    } else {
        Phase::FerromagneticY
    }
}

pub fn haldane_phase(p: &HaldaneParams) -> Phase {
    let mc = haldane_critical_mass(p);
    let m = p.m.abs();
    if m > mc {
        Phase::Trivial
    } else if m < mc {
        Phase::Topological
    } else {
        Phase::Critical
    }
}
