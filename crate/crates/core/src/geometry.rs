//! Momentum domains and d-vector algebra.
//!
//! One-dimensional chains are sampled on `[-π, π)` (or the open half zone
//! `(0, π)` for Bogoliubov pairs), two-dimensional cells on a uniform
//! fractional grid spanned by a pair of reciprocal vectors.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};

/// Below this norm a d-vector is treated as a band touching.
pub const GAP_EPS: f64 = 1e-14;

/// Overlaps that exceed unit modulus by less than this are rounding noise.
pub const OVERLAP_CLAMP: f64 = 1e-12;

/// Real 3-vector parametrizing `H_k = d_k · σ`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DVector {
    pub dx: f64,
    pub dy: f64,
    pub dz: f64,
}

impl DVector {
    pub const fn new(dx: f64, dy: f64, dz: f64) -> Self {
        Self { dx, dy, dz }
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.dx * other.dx + self.dy * other.dy + self.dz * other.dz
    }

    pub fn cross(&self, other: &Self) -> Self {
        Self::new(
            self.dy * other.dz - self.dz * other.dy,
            self.dz * other.dx - self.dx * other.dz,
            self.dx * other.dy - self.dy * other.dx,
        )
    }

    pub fn norm(&self) -> f64 {
        self.dx.hypot(self.dy).hypot(self.dz)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(s * self.dx, s * self.dy, s * self.dz)
    }

    /// Unit vector along `self`, or `GapClosure` when `|d| <= GAP_EPS`.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if !(n > GAP_EPS) {
            return Err(Error::GapClosure {
                norm: n,
                momentum: None,
            });
        }
        Ok(self.scale(1.0 / n))
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.dx, self.dy, self.dz]
    }
}

/// Cosine of the angle between two d-vectors, `g = d̂ᵢ · d̂f`.
pub fn unit_overlap(d_i: &DVector, d_f: &DVector) -> Result<f64> {
    let ni = d_i.norm();
    let nf = d_f.norm();
    for n in [ni, nf] {
        if !(n > GAP_EPS) {
            return Err(Error::GapClosure {
                norm: n,
                momentum: None,
            });
        }
    }
    let g = d_i.dot(d_f) / (ni * nf);
    if g.abs() > 1.0 && g.abs() - 1.0 <= OVERLAP_CLAMP {
        Ok(g.clamp(-1.0, 1.0))
    } else {
        Ok(g)
    }
}

/// Reduces an angle into `[-π, π)`.
pub fn wrap_angle(k: f64) -> f64 {
    let r = (k + PI).rem_euclid(2.0 * PI) - PI;
    // rem_euclid can round up to exactly 2π for tiny negative inputs
    if r >= PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// Chain momentum, always stored reduced into `[-π, π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Momentum1D(f64);

impl Momentum1D {
    pub fn new(k: f64) -> Self {
        Self(wrap_angle(k))
    }

    /// Keeps `k` as given. Used for samples already inside the zone, where
    /// wrapping `π` to `-π` would reorder the open half zone.
    pub(crate) fn raw(k: f64) -> Self {
        Self(k)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// A 2-vector in the reciprocal plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(&self, other: &Self) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }
}

impl std::ops::Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl std::ops::Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

/// Primitive cell of a 2D reciprocal lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReciprocalCell {
    pub g1: Vec2,
    pub g2: Vec2,
}

impl ReciprocalCell {
    pub fn new(g1: Vec2, g2: Vec2) -> Result<Self> {
        let area = g1.cross(&g2);
        let scale = g1.norm() * g2.norm();
        if !(scale > 0.0) || area.abs() <= 1e-12 * scale {
            return Err(Error::InvalidGrid(format!(
                "reciprocal vectors ({}, {}) and ({}, {}) are collinear",
                g1.x, g1.y, g2.x, g2.y
            )));
        }
        Ok(Self { g1, g2 })
    }

    pub fn to_cartesian(&self, u: f64, v: f64) -> Vec2 {
        // `+ 0.0` turns -0.0 into 0.0
        Vec2::new(
            u * self.g1.x + v * self.g2.x + 0.0,
            u * self.g1.y + v * self.g2.y + 0.0,
        )
    }

    pub fn to_fractional(&self, k: Vec2) -> (f64, f64) {
        let det = self.g1.cross(&self.g2);
        let u = k.cross(&self.g2) / det;
        let v = self.g1.cross(&k) / det;
        (u, v)
    }

    /// Point at fractional coordinates `(u, v)`, wrapped into `[0, 1)²`.
    pub fn point(&self, u: f64, v: f64) -> Momentum2D {
        let u = wrap_unit(u);
        let v = wrap_unit(v);
        let k = self.to_cartesian(u, v);
        Momentum2D {
            kx: k.x,
            ky: k.y,
            u,
            v,
        }
    }
}

fn wrap_unit(x: f64) -> f64 {
    let r = x.rem_euclid(1.0);
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Momentum in a 2D cell, carrying both Cartesian and fractional coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Momentum2D {
    pub kx: f64,
    pub ky: f64,
    pub u: f64,
    pub v: f64,
}

impl Momentum2D {
    pub fn cartesian(&self) -> Vec2 {
        Vec2::new(self.kx, self.ky)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Momentum {
    D1(Momentum1D),
    D2(Momentum2D),
}

impl Momentum {
    pub fn dimension(&self) -> usize {
        match self {
            Momentum::D1(_) => 1,
            Momentum::D2(_) => 2,
        }
    }

    pub fn chain(k: f64) -> Self {
        Momentum::D1(Momentum1D::new(k))
    }

    pub fn as_1d(&self) -> Option<f64> {
        match self {
            Momentum::D1(k) => Some(k.value()),
            Momentum::D2(_) => None,
        }
    }

    pub fn as_2d(&self) -> Option<&Momentum2D> {
        match self {
            Momentum::D1(_) => None,
            Momentum::D2(k) => Some(k),
        }
    }
}

impl From<Momentum1D> for Momentum {
    fn from(k: Momentum1D) -> Self {
        Momentum::D1(k)
    }
}

impl From<Momentum2D> for Momentum {
    fn from(k: Momentum2D) -> Self {
        Momentum::D2(k)
    }
}

impl fmt::Display for Momentum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Momentum::D1(k) => write!(f, "k = {}", k.value()),
            Momentum::D2(k) => write!(f, "k = ({}, {})", k.kx, k.ky),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GridShape {
    Line {
        n: usize,
        half_zone: bool,
    },
    Cell {
        n1: usize,
        n2: usize,
        cell: ReciprocalCell,
    },
}

/// Ordered sample of a Brillouin zone.
#[derive(Debug, Clone, PartialEq)]
pub struct BrillouinGrid {
    shape: GridShape,
    points: Vec<Momentum>,
}

impl BrillouinGrid {
    pub fn shape(&self) -> &GridShape {
        &self.shape
    }

    pub fn points(&self) -> &[Momentum] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dimension(&self) -> usize {
        match self.shape {
            GridShape::Line { .. } => 1,
            GridShape::Cell { .. } => 2,
        }
    }

    pub fn half_zone(&self) -> bool {
        matches!(self.shape, GridShape::Line { half_zone: true, .. })
    }
}

/// Uniform chain grid.
///
/// The full zone takes `n` points `-π + 2πj/n`. The half zone takes the `n`
/// interior points `πj/(n + 1)`, `j = 1..=n`, leaving out `k = 0, π` which are
/// their own Bogoliubov partners.
pub fn build_grid_1d(n: usize, half_zone: bool) -> Result<BrillouinGrid> {
    if n < 2 {
        return Err(Error::InvalidGrid(format!("need at least 2 samples, got {n}")));
    }
    let nf = n as f64;
    let points = (0..n)
        .map(|j| {
            let k = if half_zone {
                PI * (j + 1) as f64 / (nf + 1.0)
            } else {
                -PI + 2.0 * PI * j as f64 / nf
            };
            Momentum::D1(Momentum1D::raw(k))
        })
        .collect();
    Ok(BrillouinGrid {
        shape: GridShape::Line { n, half_zone },
        points,
    })
}

/// Uniform `n1 × n2` grid over the cell spanned by `g1`, `g2`, row-major in
/// the first index: point `(i, j)` sits at index `i * n2 + j`.
pub fn build_grid_2d(g1: Vec2, g2: Vec2, n1: usize, n2: usize) -> Result<BrillouinGrid> {
    if n1 < 2 || n2 < 2 {
        return Err(Error::InvalidGrid(format!(
            "need at least 2 samples per direction, got {n1} x {n2}"
        )));
    }
    let cell = ReciprocalCell::new(g1, g2)?;
    let mut points = Vec::with_capacity(n1 * n2);
    for i in 0..n1 {
        for j in 0..n2 {
            points.push(Momentum::D2(
                cell.point(i as f64 / n1 as f64, j as f64 / n2 as f64),
            ));
        }
    }
    Ok(BrillouinGrid {
        shape: GridShape::Cell { n1, n2, cell },
        points,
    })
}
