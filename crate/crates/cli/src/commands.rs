use std::f64::consts::{LN_2, PI};

use dqpt_core::{
    build_grid_1d, build_grid_2d, ed_oracle, eigenbasis_record, find_critical_contours_2d,
    find_critical_momenta_1d, fisher_zeros, honeycomb_reciprocal, loschmidt_mode, mode_data, mode_table,
    rate_function, sublattice_entropy_series, sublattice_occupation, time_grid, Basis, BrillouinGrid,
    ContourOptions, CriticalSet1D, ModeData, ModelClass, ModelSpec, Momentum, QuenchSpec, ReciprocalCell,
    ScanOptions, Vec2,
};
use num_complex::Complex64;

use crate::config::{KSpec, RunConfig};
use crate::error::CliError;
use crate::table::{Cell, OutputTable, Provenance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Modes,
    EntropySweep,
    Rate,
    FisherZeros,
    CriticalK,
    Sublattice,
    Check,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Modes => "modes",
            Command::EntropySweep => "entropy-sweep",
            Command::Rate => "rate",
            Command::FisherZeros => "fisher-zeros",
            Command::CriticalK => "critical-k",
            Command::Sublattice => "sublattice",
            Command::Check => "check",
        }
    }
}

pub fn run_command(cmd: Command, cfg: &RunConfig) -> Result<OutputTable, CliError> {
    let prov = Provenance::new(cmd.name(), &cfg.hash);
    match cmd {
        Command::Modes => modes(cfg, prov),
        Command::EntropySweep => entropy_sweep(cfg, prov),
        Command::Rate => rate(cfg, prov),
        Command::FisherZeros => fisher(cfg, prov),
        Command::CriticalK => critical(cfg, prov),
        Command::Sublattice => sublattice(cfg, prov),
        Command::Check => check(cfg, prov),
    }
}

/// Whether every row of a `check` table passed.
pub fn check_passed(tbl: &OutputTable) -> bool {
    let Some(col) = tbl.column_index("passed") else {
        return false;
    };
    tbl.rows().iter().all(|r| r[col] == Cell::Bool(true))
}

/// The reciprocal cell for planar quenches. Built-in Haldane models use the
/// honeycomb cell; custom planar models use the square cell `[0, 2π)²`.
fn planar_cell(q: &QuenchSpec) -> (Vec2, Vec2) {
    match q.final_model() {
        ModelSpec::Haldane(_) => honeycomb_reciprocal(),
        _ => (Vec2::new(2.0 * PI, 0.0), Vec2::new(0.0, 2.0 * PI)),
    }
}

fn grid(cfg: &RunConfig) -> Result<BrillouinGrid, CliError> {
    let q = &cfg.quench;
    Ok(if q.dimension() == 1 {
        build_grid_1d(cfg.n1, q.half_zone())?
    } else {
        let (g1, g2) = planar_cell(q);
        build_grid_2d(g1, g2, cfg.n1, cfg.n2)?
    })
}

fn momentum_columns(dim: usize) -> &'static [&'static str] {
    if dim == 1 {
        &["k"]
    } else {
        &["u", "v", "kx", "ky"]
    }
}

fn momentum_cells(k: &Momentum) -> Vec<Cell> {
    match k {
        Momentum::D1(k) => vec![k.value().into()],
        Momentum::D2(m) => vec![m.u.into(), m.v.into(), m.kx.into(), m.ky.into()],
    }
}

fn columns(dim: usize, rest: &[&'static str]) -> Vec<&'static str> {
    momentum_columns(dim).iter().chain(rest).copied().collect()
}

fn modes(cfg: &RunConfig, prov: Provenance) -> Result<OutputTable, CliError> {
    let dim = cfg.quench.dimension();
    let mut t = OutputTable::new(prov, &columns(dim, &["g", "eps_f"]));
    for md in mode_table(&cfg.quench, &grid(cfg)?)? {
        let mut row = momentum_cells(&md.momentum);
        row.extend([md.g.into(), md.eps_f.into()]);
        t.push(row);
    }
    Ok(t)
}

fn entropy_sweep(cfg: &RunConfig, prov: Provenance) -> Result<OutputTable, CliError> {
    let dim = cfg.quench.dimension();
    let mut t = OutputTable::new(prov, &columns(dim, &["p", "one_minus_p", "entropy"]));
    for md in mode_table(&cfg.quench, &grid(cfg)?)? {
        let r = eigenbasis_record(&md);
        let mut row = momentum_cells(&md.momentum);
        row.extend([r.p.into(), r.one_minus_p.into(), r.entropy.into()]);
        t.push(row);
    }
    Ok(t)
}

fn times(cfg: &RunConfig) -> Vec<f64> {
    time_grid(cfg.time.t_min, cfg.time.t_max, cfg.time.samples)
}

fn rate(cfg: &RunConfig, prov: Provenance) -> Result<OutputTable, CliError> {
    let series = rate_function(&cfg.quench, &grid(cfg)?, &times(cfg))?;
    let mut t = OutputTable::new(prov, &["t", "lambda"]);
    for p in series.points {
        t.push(vec![p.t.into(), p.lambda.into()]);
    }
    Ok(t)
}

fn fisher(cfg: &RunConfig, prov: Provenance) -> Result<OutputTable, CliError> {
    let dim = cfg.quench.dimension();
    let mut t = OutputTable::new(prov, &columns(dim, &["n", "re_z", "im_z"]));
    for md in mode_table(&cfg.quench, &grid(cfg)?)? {
        for z in fisher_zeros(&md, 0..=i64::from(cfg.n_max)) {
            let mut row = momentum_cells(&md.momentum);
            row.extend([z.n.into(), z.z.re.into(), z.z.im.into()]);
            t.push(row);
        }
    }
    Ok(t)
}

fn scan_options(cfg: &RunConfig) -> ScanOptions {
    ScanOptions {
        scan_n: cfg.tolerances.scan_n,
        tol: cfg.tolerances.root,
        boundary_tol: cfg.tolerances.boundary,
        ..Default::default()
    }
}

fn critical_set(cfg: &RunConfig) -> Result<CriticalSet1D, CliError> {
    Ok(find_critical_momenta_1d(&cfg.quench, &scan_options(cfg))?)
}

/// Critical momenta of a chain: interior roots followed by flagged zone
/// boundaries.
fn critical_points_1d(set: &CriticalSet1D) -> Vec<(f64, f64, &'static str)> {
    let mut out: Vec<_> = set.roots.iter().map(|r| (r.k, r.residual, "root")).collect();
    if set.boundary.at_zero {
        out.push((0.0, set.boundary.g_zero.unwrap_or(0.0).abs(), "boundary"));
    }
    if set.boundary.at_pi {
        out.push((PI, set.boundary.g_pi.unwrap_or(0.0).abs(), "boundary"));
    }
    out
}

fn critical(cfg: &RunConfig, prov: Provenance) -> Result<OutputTable, CliError> {
    if cfg.quench.dimension() == 1 {
        let set = critical_set(cfg)?;
        let mut t = OutputTable::new(prov, &["k", "residual", "kind"]);
        for (k, r, kind) in critical_points_1d(&set) {
            t.push(vec![k.into(), r.into(), kind.into()]);
        }
        return Ok(t);
    }
    let contour = find_critical_contours_2d(
        &cfg.quench,
        &grid(cfg)?,
        &ContourOptions {
            tol: cfg.tolerances.contour,
        },
    )?;
    let mut t = OutputTable::new(prov, &["contour", "vertex", "u", "v", "kx", "ky", "g", "closed"]);
    for (c, line) in contour.polylines.iter().enumerate() {
        for (i, v) in line.vertices.iter().enumerate() {
            let m = v.momentum;
            t.push(vec![
                (c as i64).into(),
                (i as i64).into(),
                m.u.into(),
                m.v.into(),
                m.kx.into(),
                m.ky.into(),
                v.g.into(),
                line.closed.into(),
            ]);
        }
    }
    Ok(t)
}

fn selected_momentum(cfg: &RunConfig) -> Result<Momentum, CliError> {
    match cfg.k {
        Some(KSpec::Chain(k)) => Ok(Momentum::chain(k)),
        Some(KSpec::Fractional([u, v])) => {
            let (g1, g2) = planar_cell(&cfg.quench);
            Ok(Momentum::D2(ReciprocalCell::new(g1, g2)?.point(u, v)))
        }
        None if cfg.quench.dimension() == 1 => critical_set(cfg)?
            .roots
            .first()
            .map(|r| Momentum::chain(r.k))
            .ok_or_else(|| CliError::config("k", "no critical momentum; give k explicitly")),
        None => Err(CliError::config("k", "planar models need an explicit [u, v]")),
    }
}

fn sublattice(cfg: &RunConfig, prov: Provenance) -> Result<OutputTable, CliError> {
    let k = selected_momentum(cfg)?;
    let md = mode_data(&cfg.quench, &k)?;
    let series = sublattice_entropy_series(&md, &times(cfg))?;
    let mut t = OutputTable::new(prov, &["t", "a2", "entropy"]);
    for p in series.points {
        t.push(vec![p.t.into(), p.a2.into(), p.entropy.into()]);
    }
    Ok(t)
}

struct CheckRow {
    name: &'static str,
    max_error: f64,
    tolerance: f64,
}

/// Invariant and oracle suite on the configured quench.
fn check(cfg: &RunConfig, prov: Provenance) -> Result<OutputTable, CliError> {
    let q = &cfg.quench;
    let grid = grid(cfg)?;
    let modes = mode_table(q, &grid)?;
    let stride = (modes.len() / 64).max(1);
    let sample: Vec<&ModeData> = modes.iter().step_by(stride).collect();
    let ts = time_grid(cfg.time.t_min, cfg.time.t_max, 16);
    let mut rows = Vec::new();

    let excess = modes
        .iter()
        .map(|m| (m.g.abs() - 1.0).max(0.0))
        .fold(0.0, f64::max);
    rows.push(CheckRow {
        name: "overlap_bounds",
        max_error: excess,
        tolerance: 0.0,
    });

    let mut echo_err = 0.0f64;
    let mut fisher_err = 0.0f64;
    for md in &sample {
        for &t in &ts {
            let e = loschmidt_mode(md, Complex64::new(t, 0.0)).norm_sqr();
            echo_err = echo_err.max((-e).max(e - 1.0 - 1e-12).max(0.0));
        }
        for z in fisher_zeros(md, 0..=i64::from(cfg.n_max)) {
            fisher_err = fisher_err.max(loschmidt_mode(md, z.time_argument()).norm());
        }
    }
    rows.push(CheckRow {
        name: "echo_bounds",
        max_error: echo_err,
        tolerance: 0.0,
    });
    rows.push(CheckRow {
        name: "fisher_zeros_vanish",
        max_error: fisher_err,
        tolerance: 1e-10,
    });

    let mut spec_err = 0.0f64;
    let mut sub_err = 0.0f64;
    for md in &sample {
        for &t in &[ts[3], ts[11]] {
            let o = ed_oracle(q, &md.momentum, t, Basis::FinalEigen)?;
            let want = [(1.0 + md.g.abs()) / 2.0, (1.0 - md.g.abs()) / 2.0];
            spec_err = spec_err.max(
                (o.spectrum[0] - want[0])
                    .abs()
                    .max((o.spectrum[1] - want[1]).abs()),
            );
            if q.class() == ModelClass::Insulator {
                let o = ed_oracle(q, &md.momentum, t, Basis::Sublattice)?;
                sub_err = sub_err.max((o.p - sublattice_occupation(md, t)?).abs());
            }
        }
    }
    rows.push(CheckRow {
        name: "oracle_eigen_spectrum",
        max_error: spec_err,
        tolerance: 1e-10,
    });
    if q.class() == ModelClass::Insulator {
        rows.push(CheckRow {
            name: "oracle_sublattice",
            max_error: sub_err,
            tolerance: 1e-10,
        });
    }

    let critical_entropy = if q.dimension() == 1 {
        critical_points_1d(&critical_set(cfg)?)
            .into_iter()
            .map(|(k, _, _)| mode_data(q, &Momentum::chain(boundary_probe(k))))
            .collect::<Result<Vec<_>, _>>()?
    } else {
        let contour = find_critical_contours_2d(
            q,
            &grid,
            &ContourOptions {
                tol: cfg.tolerances.contour,
            },
        )?;
        contour
            .vertices()
            .map(|v| mode_data(q, &Momentum::D2(v.momentum)))
            .collect::<Result<Vec<_>, _>>()?
    }
    .iter()
    .map(|md| (LN_2 - eigenbasis_record(md).entropy).max(0.0))
    .fold(0.0, f64::max);
    rows.push(CheckRow {
        name: "critical_entropy_ln2",
        max_error: critical_entropy,
        tolerance: 1e-6,
    });

    let identity = QuenchSpec::new(q.initial().clone(), q.initial().clone())?;
    let lambda = rate_function(&identity, &grid, &ts)?
        .points
        .iter()
        .map(|p| p.lambda.abs())
        .fold(0.0, f64::max);
    rows.push(CheckRow {
        name: "identity_rate_zero",
        max_error: lambda,
        tolerance: 1e-14,
    });

    let mut t = OutputTable::new(prov, &["check", "passed", "max_error", "tolerance"]);
    for r in rows {
        t.push(vec![
            r.name.into(),
            (r.max_error <= r.tolerance).into(),
            r.max_error.into(),
            r.tolerance.into(),
        ]);
    }
    Ok(t)
}

/// Boundary-critical momenta are reported at `0` or `π`, where the gap may
/// close; their entropy is taken just inside the zone.
fn boundary_probe(k: f64) -> f64 {
    const OFFSET: f64 = 1e-7;
    if k == 0.0 {
        OFFSET
    } else if k == PI {
        PI - OFFSET
    } else {
        k
    }
}
