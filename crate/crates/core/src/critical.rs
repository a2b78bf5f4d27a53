//! Critical momenta: isolated zeros of `g(k)` on chains, zero contours of
//! `g(k)` on planar cells.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{BrillouinGrid, GridShape, Momentum, Momentum2D, ReciprocalCell};
use crate::quench::QuenchSpec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    /// Number of uniform scan intervals on `(0, π)`; at least 64.
    pub scan_n: usize,
    /// Target `|g|` at a refined root.
    pub tol: f64,
    /// `|g|` below which a zone-boundary limit counts as critical.
    pub boundary_tol: f64,
    /// Distance from `0` and `π` at which boundary limits are probed.
    pub boundary_offset: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            scan_n: 4096,
            tol: 1e-12,
            boundary_tol: 1e-6,
            boundary_offset: 1e-7,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalRoot {
    pub k: f64,
    /// `|g(k)|` at the reported root.
    pub residual: f64,
    /// Scan bracket `[lo, hi]` across which `g` changes sign.
    pub bracket: (f64, f64),
}

/// Limits `k → 0⁺` and `k → π⁻`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BoundaryFlags {
    pub at_zero: bool,
    pub at_pi: bool,
    pub g_zero: Option<f64>,
    pub g_pi: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CriticalSet1D {
    /// Strictly increasing roots in `(0, π)`.
    pub roots: Vec<CriticalRoot>,
    pub boundary: BoundaryFlags,
}

impl CriticalSet1D {
    pub fn is_empty(&self) -> bool {
        self.roots.is_empty() && !self.boundary.at_zero && !self.boundary.at_pi
    }
}

/// Scans `g` on `(0, π)` and bisects every sign change to `|g| < tol`.
pub fn find_critical_momenta_1d(q: &QuenchSpec, opts: &ScanOptions) -> Result<CriticalSet1D> {
    if q.dimension() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "1D root scan on a {}D quench",
            q.dimension()
        )));
    }
    if opts.scan_n < 64 {
        return Err(Error::InvalidGrid(format!(
            "scan needs at least 64 intervals, got {}",
            opts.scan_n
        )));
    }
    let g = |k: f64| q.overlap(&Momentum::chain(k));
    let n = opts.scan_n;
    let ks: Vec<f64> = (1..n).map(|j| PI * j as f64 / n as f64).collect();
    let gs = ks.iter().map(|&k| g(k)).collect::<Result<Vec<_>>>()?;

    let mut roots = Vec::new();
    for j in 0..ks.len() {
        if gs[j] == 0.0 {
            roots.push(CriticalRoot {
                k: ks[j],
                residual: 0.0,
                bracket: (ks[j], ks[j]),
            });
            continue;
        }
        if j + 1 < ks.len() && gs[j + 1] != 0.0 && (gs[j] < 0.0) != (gs[j + 1] < 0.0) {
            roots.push(bisect(&g, ks[j], ks[j + 1], gs[j], opts.tol)?);
        }
    }

    let probe = |k: f64| g(k).ok();
    let g_zero = probe(opts.boundary_offset);
    let g_pi = probe(PI - opts.boundary_offset);
    let flag = |v: Option<f64>| v.is_some_and(|x| x.abs() < opts.boundary_tol);
    Ok(CriticalSet1D {
        roots,
        boundary: BoundaryFlags {
            at_zero: flag(g_zero),
            at_pi: flag(g_pi),
            g_zero,
            g_pi,
        },
    })
}

fn bisect(
    g: &impl Fn(f64) -> Result<f64>,
    mut lo: f64,
    mut hi: f64,
    g_lo: f64,
    tol: f64,
) -> Result<CriticalRoot> {
    let bracket = (lo, hi);
    let lo_negative = g_lo < 0.0;
    let mut best = (0.5 * (lo + hi), f64::INFINITY);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid)?;
        if gm.abs() < best.1 {
            best = (mid, gm.abs());
        }
        if gm.abs() < tol || mid <= lo || mid >= hi {
            break;
        }
        if (gm < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(CriticalRoot {
        k: best.0,
        residual: best.1,
        bracket,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourOptions {
    /// Target `|g|` for refined contour vertices.
    pub tol: f64,
}

impl Default for ContourOptions {
    fn default() -> Self {
        Self { tol: 1e-10 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourVertex {
    pub momentum: Momentum2D,
    pub g: f64,
}

/// Ordered chain of contour vertices; fractional coordinates are wrapped into
/// the cell, so a closed loop may cross the cell boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub vertices: Vec<ContourVertex>,
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalContour2D {
    pub polylines: Vec<Polyline>,
    /// Largest `|g|` over all vertices.
    pub max_residual: f64,
    pub cell: ReciprocalCell,
    pub n1: usize,
    pub n2: usize,
}

impl CriticalContour2D {
    pub fn is_empty(&self) -> bool {
        self.polylines.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.polylines.iter().map(|p| p.vertices.len()).sum()
    }

    pub fn vertices(&self) -> impl Iterator<Item = &ContourVertex> {
        self.polylines.iter().flat_map(|p| p.vertices.iter())
    }
}

/// Marching squares on the periodic grid of `g`, followed by refinement of
/// every edge crossing until `|g| < tol`.
///
/// Ambiguous saddle cells are resolved by the sign of `g` at the cell centre.
pub fn find_critical_contours_2d(
    q: &QuenchSpec,
    grid: &BrillouinGrid,
    opts: &ContourOptions,
) -> Result<CriticalContour2D> {
    let GridShape::Cell { n1, n2, cell } = grid.shape().clone() else {
        return Err(Error::DimensionMismatch(
            "contour extraction needs a 2D grid".into(),
        ));
    };
    if q.dimension() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "2D contour extraction on a {}D quench",
            q.dimension()
        )));
    }
    let overlap_at = |u: f64, v: f64| -> Result<(Momentum2D, f64)> {
        let m = cell.point(u, v);
        Ok((m, q.overlap(&Momentum::D2(m))?))
    };

    let values: Vec<f64> = grid
        .points()
        .par_iter()
        .map(|k| q.overlap(k))
        .collect::<Result<_>>()?;
    let node = |i: usize, j: usize| (i % n1) * n2 + (j % n2);
    let positive = |i: usize, j: usize| values[node(i, j)] >= 0.0;

    // edge ids: 2·node for the edge towards (i+1, j), 2·node + 1 towards (i, j+1)
    let h_edge = |i: usize, j: usize| 2 * node(i, j);
    let v_edge = |i: usize, j: usize| 2 * node(i, j) + 1;

    let segments: Vec<(usize, usize)> = (0..n1)
        .into_par_iter()
        .map(|i| -> Result<Vec<(usize, usize)>> {
            let mut out = Vec::new();
            for j in 0..n2 {
                let s = [
                    positive(i, j),
                    positive(i + 1, j),
                    positive(i + 1, j + 1),
                    positive(i, j + 1),
                ];
                // e0: c0-c1, e1: c1-c2, e2: c3-c2, e3: c0-c3
                let edges = [h_edge(i, j), v_edge(i + 1, j), h_edge(i, j + 1), v_edge(i, j)];
                let crossing = [s[0] != s[1], s[1] != s[2], s[3] != s[2], s[0] != s[3]];
                let hits: Vec<usize> = (0..4).filter(|&e| crossing[e]).collect();
                match hits.len() {
                    0 => {}
                    2 => out.push((edges[hits[0]], edges[hits[1]])),
                    4 => {
                        let (_, centre) =
                            overlap_at((i as f64 + 0.5) / n1 as f64, (j as f64 + 0.5) / n2 as f64)?;
                        if (centre >= 0.0) == s[0] {
                            out.push((edges[0], edges[1]));
                            out.push((edges[2], edges[3]));
                        } else {
                            out.push((edges[3], edges[0]));
                            out.push((edges[1], edges[2]));
                        }
                    }
                    _ => unreachable!("a square has an even number of sign changes"),
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let mut adjacency: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(a, b) in &segments {
        adjacency.entry(a).or_default().push(b);
        adjacency.entry(b).or_default().push(a);
    }

    let edge_ids: Vec<usize> = adjacency.keys().copied().collect();
    let refined: Vec<ContourVertex> = edge_ids
        .par_iter()
        .map(|&id| {
            let base = id / 2;
            let (i, j) = (base / n2, base % n2);
            let (u0, v0) = (i as f64 / n1 as f64, j as f64 / n2 as f64);
            let (du, dv) = if id % 2 == 0 {
                (1.0 / n1 as f64, 0.0)
            } else {
                (0.0, 1.0 / n2 as f64)
            };
            let (ga, gb) = if id % 2 == 0 {
                (values[node(i, j)], values[node(i + 1, j)])
            } else {
                (values[node(i, j)], values[node(i, j + 1)])
            };
            refine_edge(|s| overlap_at(u0 + s * du, v0 + s * dv), ga, gb, opts.tol)
        })
        .collect::<Result<_>>()?;
    let vertex_of: BTreeMap<usize, ContourVertex> = edge_ids.into_iter().zip(refined).collect();

    let polylines = stitch(&adjacency)
        .into_iter()
        .map(|(ids, closed)| Polyline {
            vertices: ids.iter().map(|id| vertex_of[id]).collect(),
            closed,
        })
        .collect::<Vec<_>>();
    let max_residual = vertex_of.values().map(|v| v.g.abs()).fold(0.0, f64::max);
    Ok(CriticalContour2D {
        polylines,
        max_residual,
        cell,
        n1,
        n2,
    })
}

/// Illinois regula falsi on `s ∈ [0, 1]` for a sign change between the edge
/// endpoints (`g(0) = ga`, `g(1) = gb`).
fn refine_edge(
    eval: impl Fn(f64) -> Result<(Momentum2D, f64)>,
    ga: f64,
    gb: f64,
    tol: f64,
) -> Result<ContourVertex> {
    let (mut a, mut b, mut fa, mut fb) = (0.0f64, 1.0f64, ga, gb);
    if fa == 0.0 || fb == 0.0 {
        let s = if fa == 0.0 { 0.0 } else { 1.0 };
        let (momentum, g) = eval(s)?;
        return Ok(ContourVertex { momentum, g });
    }
    let mut best: Option<ContourVertex> = None;
    let mut side = 0i8;
    for iter in 0..200 {
        let mut s = (a * fb - b * fa) / (fb - fa);
        if !(s > a && s < b) || iter % 8 == 7 {
            s = 0.5 * (a + b);
        }
        let (momentum, g) = eval(s)?;
        if best.is_none_or(|v| g.abs() < v.g.abs()) {
            best = Some(ContourVertex { momentum, g });
        }
        if g.abs() < tol || b - a < 1e-15 {
            break;
        }
        if (g < 0.0) == (fa < 0.0) {
            a = s;
            fa = g;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        } else {
            b = s;
            fb = g;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
    }
    Ok(best.expect("at least one iteration"))
}

/// Splits the crossing graph into chains. On a periodic grid every crossing
/// has exactly two neighbours and all chains close.
fn stitch(adjacency: &BTreeMap<usize, Vec<usize>>) -> Vec<(Vec<usize>, bool)> {
    let mut visited: BTreeMap<usize, bool> = adjacency.keys().map(|&k| (k, false)).collect();
    let mut out = Vec::new();
    let starts: Vec<usize> = adjacency
        .iter()
        .filter(|(_, n)| n.len() == 1)
        .map(|(&k, _)| k)
        .chain(adjacency.keys().copied())
        .collect();
    for start in starts {
        if visited[&start] {
            continue;
        }
        let mut chain = vec![start];
        visited.insert(start, true);
        let mut prev = usize::MAX;
        let mut cur = start;
        let closed = loop {
            let next = adjacency[&cur]
                .iter()
                .copied()
                .find(|&n| n != prev && !visited[&n]);
            match next {
                Some(n) => {
                    visited.insert(n, true);
                    chain.push(n);
                    prev = cur;
                    cur = n;
                }
                None => break chain.len() > 2 && adjacency[&cur].contains(&start),
            }
        };
        out.push((chain, closed));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::eigenbasis_record;
    use crate::geometry::{build_grid_2d, Vec2};
    use crate::models::{honeycomb_reciprocal, HaldaneParams, ModelSpec, SshParams, XyParams};
    use crate::quench::mode_data;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, LN_2};

    fn ssh(t2i: f64, t2f: f64) -> QuenchSpec {
        QuenchSpec::new(
            ModelSpec::Ssh(SshParams { t1: 1.0, t2: t2i }),
            ModelSpec::Ssh(SshParams { t1: 1.0, t2: t2f }),
        )
        .unwrap()
    }

    fn xy(a: (f64, f64), b: (f64, f64)) -> QuenchSpec {
        QuenchSpec::new(
            ModelSpec::Xy(XyParams { h: a.0, gamma: a.1 }),
            ModelSpec::Xy(XyParams { h: b.0, gamma: b.1 }),
        )
        .unwrap()
    }

    fn haldane(mi: f64, mf: f64) -> QuenchSpec {
        QuenchSpec::new(
            ModelSpec::Haldane(HaldaneParams::new(mi, 1.0, 0.3, FRAC_PI_2).unwrap()),
            ModelSpec::Haldane(HaldaneParams::new(mf, 1.0, 0.3, FRAC_PI_2).unwrap()),
        )
        .unwrap()
    }

    #[test]
    fn ssh_single_root() {
        let set = find_critical_momenta_1d(&ssh(0.5, 2.0), &ScanOptions::default()).unwrap();
        assert_eq!(set.roots.len(), 1);
        assert_abs_diff_eq!(set.roots[0].k, (-0.8f64).acos(), epsilon = 1e-12);
        assert!(set.roots[0].residual < 1e-12);
        assert!(!set.boundary.at_zero && !set.boundary.at_pi);
    }

    #[test]
    fn xy_two_roots() {
        let set = find_critical_momenta_1d(&xy((0.2, 0.1), (0.8, 0.1)), &ScanOptions::default()).unwrap();
        let ks: Vec<f64> = set.roots.iter().map(|r| r.k).collect();
        assert_eq!(ks.len(), 2);
        assert_abs_diff_eq!(ks[0], 0.654, epsilon = 2e-3);
        assert_abs_diff_eq!(ks[1], 1.353, epsilon = 1e-3);
    }

    #[test]
    fn identity_quench_has_no_roots() {
        assert!(find_critical_momenta_1d(&ssh(0.5, 0.5), &ScanOptions::default())
            .unwrap()
            .is_empty());
        let (g1, g2) = honeycomb_reciprocal();
        let grid = build_grid_2d(g1, g2, 64, 64).unwrap();
        let c = find_critical_contours_2d(&haldane(0.5, 0.5), &grid, &ContourOptions::default()).unwrap();
        assert!(c.is_empty());
    }

    #[test]
    fn boundary_root_is_flagged() {
        let set = find_critical_momenta_1d(&ssh(0.5, 1.0), &ScanOptions::default()).unwrap();
        assert!(set.boundary.at_pi);
        assert!(set.boundary.g_pi.unwrap().abs() < 1e-6);
        assert!(!set.boundary.at_zero);
    }

    #[test]
    fn scan_preconditions() {
        let opts = ScanOptions {
            scan_n: 32,
            ..Default::default()
        };
        assert!(matches!(
            find_critical_momenta_1d(&ssh(0.5, 2.0), &opts),
            Err(Error::InvalidGrid(_))
        ));
        assert!(matches!(
            find_critical_momenta_1d(&haldane(0.5, 2.0), &ScanOptions::default()),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn haldane_contour_is_closed_and_maximally_entangled() {
        let (g1, g2) = honeycomb_reciprocal();
        let grid = build_grid_2d(g1, g2, 128, 128).unwrap();
        let q = haldane(0.5, 2.0);
        let c = find_critical_contours_2d(&q, &grid, &ContourOptions { tol: 1e-10 }).unwrap();
        assert!(!c.is_empty());
        assert!(c.polylines.iter().all(|p| p.closed));
        assert!(c.max_residual < 1e-10);
        for v in c.vertices() {
            let md = mode_data(&q, &Momentum::D2(v.momentum)).unwrap();
            assert!(eigenbasis_record(&md).entropy >= LN_2 - 1e-6);
        }
        // consecutive vertices lie within one cell diagonal (minimum image)
        let diag = (c.cell.g1.norm() / 128.0)
            .hypot(c.cell.g2.norm() / 128.0)
            .max(c.cell.to_cartesian(1.0 / 128.0, 1.0 / 128.0).norm())
            .max(c.cell.to_cartesian(1.0 / 128.0, -1.0 / 128.0).norm());
        for p in &c.polylines {
            let n = p.vertices.len();
            for w in 0..n {
                let (a, b) = (p.vertices[w].momentum, p.vertices[(w + 1) % n].momentum);
                let du = wrap_half(b.u - a.u);
                let dv = wrap_half(b.v - a.v);
                assert!(c.cell.to_cartesian(du, dv).norm() <= diag + 1e-12);
            }
        }
    }

    fn wrap_half(x: f64) -> f64 {
        x - x.round()
    }

    #[test]
    fn contour_vertex_count_scales_linearly() {
        let (g1, g2) = honeycomb_reciprocal();
        let q = haldane(0.5, 2.0);
        let count = |n| {
            let grid = build_grid_2d(g1, g2, n, n).unwrap();
            find_critical_contours_2d(&q, &grid, &ContourOptions::default())
                .unwrap()
                .vertex_count() as f64
        };
        let (a, b) = (count(64), count(128));
        assert!((b / a - 2.0).abs() < 0.3, "{a} -> {b}");
    }

    #[test]
    fn square_cell_circle_contour() {
        // g changes sign on a circle of radius 1 around the origin of a
        // periodic cell; exercised through a custom 2D model
        let e = |s: &str| crate::dsl::parse_expr(s).unwrap();
        let di = crate::dsl::validate_model_def(e("1"), e("0"), e("0"), 2, Default::default()).unwrap();
        let df = crate::dsl::validate_model_def(
            e("2 - cos(kx) - cos(ky) - 0.5"),
            e("1"),
            e("0"),
            2,
            Default::default(),
        )
        .unwrap();
        let q = QuenchSpec::new(di, df).unwrap();
        let two_pi = 2.0 * PI;
        let grid = build_grid_2d(Vec2::new(two_pi, 0.0), Vec2::new(0.0, two_pi), 100, 100).unwrap();
        let c = find_critical_contours_2d(&q, &grid, &ContourOptions::default()).unwrap();
        // 2 - cos kx - cos ky = 0.5 is a single closed loop around Γ (wrapping the corners)
        assert_eq!(c.polylines.len(), 1);
        assert!(c.polylines[0].closed);
        for v in c.vertices() {
            let m = v.momentum;
            assert_abs_diff_eq!(2.0 - m.kx.cos() - m.ky.cos(), 0.5, epsilon = 1e-9);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn roots_bracket_sign_changes_and_parity(t2i in 0.1..3.0f64, t2f in 0.1..3.0f64) {
            prop_assume!((t2f - 1.0).abs() > 1e-3 && (t2i - 1.0).abs() > 1e-3);
            let q = ssh(t2i, t2f);
            let opts = ScanOptions { scan_n: 256, ..Default::default() };
            let set = find_critical_momenta_1d(&q, &opts).unwrap();
            for r in &set.roots {
                prop_assert!(r.residual < 1e-12);
                let g = |k: f64| q.overlap(&Momentum::chain(k)).unwrap();
                prop_assert!(g(r.bracket.0) * g(r.bracket.1) < 0.0);
            }
            prop_assert!(set.roots.windows(2).all(|w| w[0].k < w[1].k));
            let even = set.roots.len().is_multiple_of(2);
            let same = (set.boundary.g_zero.unwrap() > 0.0) == (set.boundary.g_pi.unwrap() > 0.0);
            prop_assert_eq!(even, same);
        }

        #[test]
        fn finer_scan_keeps_roots(h0 in -1.5..1.5f64, g0 in -1.5..1.5f64, h1 in -1.5..1.5f64, g1 in -1.5..1.5f64) {
            let q = xy((h0, g0), (h1, g1));
            let coarse = find_critical_momenta_1d(&q, &ScanOptions { scan_n: 512, ..Default::default() });
            let fine = find_critical_momenta_1d(&q, &ScanOptions { scan_n: 1024, ..Default::default() });
            let (Ok(coarse), Ok(fine)) = (coarse, fine) else { return Ok(()); };
            for r in &coarse.roots {
                prop_assert!(fine.roots.iter().any(|f| (f.k - r.k).abs() < 1e-8));
            }
        }
    }
}
