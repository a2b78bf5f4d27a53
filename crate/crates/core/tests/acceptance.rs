//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::f64::consts::{FRAC_PI_2, LN_2, PI};
use std::time::{Duration, Instant};

use dqpt_core::dsl::ParseErrorKind;
use dqpt_core::{
    binary_entropy, build_grid_1d, build_grid_2d, ed_oracle, eigenbasis_record, find_critical_contours_2d,
    find_critical_momenta_1d, fisher_zeros, honeycomb_reciprocal, loschmidt_mode, mode_data, mode_table,
    parse_expr, rate_function, sublattice_entropy_series, time_grid, validate_model_def, AngleConvention,
    Basis, ContourOptions, DVector, DslError, Error, HaldaneParams, ModeData, ModelClass, ModelSpec,
    Momentum, ParamEnv, QuenchSpec, ScanOptions, SshParams, XyParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn ssh(t2i: f64, t2f: f64) -> QuenchSpec {
    QuenchSpec::new(
        ModelSpec::Ssh(SshParams::new(1.0, t2i).unwrap()),
        ModelSpec::Ssh(SshParams::new(1.0, t2f).unwrap()),
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

fn haldane_model(m: f64) -> ModelSpec {
    ModelSpec::Haldane(HaldaneParams::new(m, 1.0, 0.3, FRAC_PI_2).unwrap())
}

fn haldane(mi: f64, mf: f64) -> QuenchSpec {
    QuenchSpec::new(haldane_model(mi), haldane_model(mf)).unwrap()
}

fn honeycomb_grid(n: usize) -> dqpt_core::BrillouinGrid {
    let (g1, g2) = honeycomb_reciprocal();
    build_grid_2d(g1, g2, n, n).unwrap()
}

fn criterion_1() -> Outcome {
    let want = (-0.8f64).acos();
    let start = Instant::now();
    let set = find_critical_momenta_1d(&ssh(0.5, 2.0), &ScanOptions::default()).unwrap();
    let elapsed = start.elapsed();
    let [root] = set.roots.as_slice() else {
        return outcome(false, format!("expected one root, got {}", set.roots.len()));
    };
    let err = (root.k - want).abs();
    let rounded = (root.k * 100.0).round() / 100.0;
    outcome(
        err < 1e-9 && rounded == 2.50 && elapsed < Duration::from_secs(1),
        format!(
            "k* = {:.12}, |k* - arccos(-4/5)| = {err:.1e}, runtime {elapsed:.2?}",
            root.k
        ),
    )
}

/// Largest `ln 2 - S` and `|p - 1/2|` over a set of modes.
fn criticality_gap(modes: impl IntoIterator<Item = ModeData>) -> (f64, f64, usize) {
    let mut worst = (0.0f64, 0.0f64, 0);
    for md in modes {
        let r = eigenbasis_record(&md);
        worst.0 = worst.0.max(LN_2 - r.entropy);
        worst.1 = worst.1.max((r.p - 0.5).abs());
        worst.2 += 1;
    }
    worst
}

fn critical_modes_1d(q: &QuenchSpec) -> Vec<ModeData> {
    let set = find_critical_momenta_1d(q, &ScanOptions::default()).unwrap();
    let mut ks: Vec<f64> = set.roots.iter().map(|r| r.k).collect();
    if set.boundary.at_pi {
        ks.push(PI - ScanOptions::default().boundary_offset);
    }
    if set.boundary.at_zero {
        ks.push(ScanOptions::default().boundary_offset);
    }
    ks.into_iter()
        .map(|k| mode_data(q, &Momentum::chain(k)).unwrap())
        .collect()
}

fn criterion_2() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    let mut record = |name: &str, modes: Vec<ModeData>| {
        let (ds, dp, n) = criticality_gap(modes);
        pass &= n > 0 && ds < 1e-6 && dp < 1e-6;
        lines.push(format!(
            "{name}: {n} pts, max(ln2-S)={ds:.1e}, max|p-1/2|={dp:.1e}"
        ));
    };
    for t2f in [1.0, 1.5, 2.0, 3.0] {
        let q = ssh(0.5, t2f);
        record(&format!("ssh 0.5->{t2f}"), critical_modes_1d(&q));
    }
    for (a, b) in [
        ((0.5, 1.0), (1.5, 1.0)),
        ((0.5, 1.0), (0.5, -1.0)),
        ((0.2, 0.1), (0.8, 0.1)),
    ] {
        let q = xy(a, b);
        record(&format!("xy {a:?}->{b:?}"), critical_modes_1d(&q));
    }
    let q = haldane(0.5, 2.0);
    let contour = find_critical_contours_2d(&q, &honeycomb_grid(256), &ContourOptions::default()).unwrap();
    let modes = contour
        .vertices()
        .map(|v| mode_data(&q, &Momentum::D2(v.momentum)).unwrap())
        .collect();
    record("haldane 0.5->2", modes);
    outcome(pass, lines.join("; "))
}

fn criterion_3() -> Outcome {
    let set = find_critical_momenta_1d(&ssh(0.5, 1.0), &ScanOptions::default()).unwrap();
    let g_pi = set.boundary.g_pi.unwrap_or(f64::NAN);
    outcome(
        set.boundary.at_pi && !set.boundary.at_zero && g_pi.abs() < 1e-6,
        format!(
            "at_pi = {}, |g(pi-)| = {:.2e}, interior roots = {}",
            set.boundary.at_pi,
            g_pi.abs(),
            set.roots.len()
        ),
    )
}

/// Independent oracle: scan cos k on a fine grid and bisect the quadratic
/// `0.99 c² - c + 0.17` in `c = cos k`.
fn xy_oracle_roots() -> Vec<f64> {
    let f = |c: f64| 0.99 * c * c - c + 0.17;
    let n = 100_000;
    let mut out = Vec::new();
    for j in 0..n {
        let (mut a, mut b) = (
            -1.0 + 2.0 * j as f64 / n as f64,
            -1.0 + 2.0 * (j + 1) as f64 / n as f64,
        );
        if f(a) * f(b) > 0.0 {
            continue;
        }
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if f(a) * f(m) <= 0.0 {
                b = m;
            } else {
                a = m;
            }
        }
        out.push(0.5 * (a + b));
    }
    let mut ks: Vec<f64> = out.into_iter().map(f64::acos).collect();
    ks.sort_by(f64::total_cmp);
    ks
}

fn criterion_4() -> Outcome {
    let q = xy((0.2, 0.1), (0.8, 0.1));
    let set = find_critical_momenta_1d(&q, &ScanOptions::default()).unwrap();
    let oracle = xy_oracle_roots();
    let closed = [
        ((1.0 + 0.3268f64.sqrt()) / 1.98).acos(),
        ((1.0 - 0.3268f64.sqrt()) / 1.98).acos(),
    ];
    let ks: Vec<f64> = set.roots.iter().map(|r| r.k).collect();
    let max_res = set.roots.iter().map(|r| r.residual).fold(0.0, f64::max);
    let pass = ks.len() == 2
        && oracle.len() == 2
        && ks.iter().zip(&oracle).all(|(a, b)| (a - b).abs() < 1e-9)
        && (ks[0] - closed[0]).abs() < 1e-4
        && (ks[1] - closed[1]).abs() < 1e-4
        && max_res < 1e-10;
    outcome(
        pass,
        format!("roots {ks:.6?}, oracle {oracle:.6?}, max residual {max_res:.1e}"),
    )
}

fn criterion_5() -> Outcome {
    let count = |a, b| {
        find_critical_momenta_1d(&xy(a, b), &ScanOptions::default())
            .unwrap()
            .roots
            .len()
    };
    let ising = count((0.5, 1.0), (1.5, 1.0));
    let aniso = count((0.5, 1.0), (0.5, -1.0));
    let within = count((0.2, 0.1), (0.8, 0.1));
    outcome(
        ising >= 1 && aniso >= 1 && within == 2,
        format!("cross-Ising {ising}, cross-anisotropic {aniso}, within FM_x {within}"),
    )
}

fn criterion_6() -> Outcome {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let q = haldane(0.5, 2.0);
    let (contour, elapsed) = pool.install(|| {
        let start = Instant::now();
        let grid = honeycomb_grid(512);
        let c = find_critical_contours_2d(&q, &grid, &ContourOptions { tol: 1e-10 }).unwrap();
        (c, start.elapsed())
    });
    let all_closed = contour.polylines.iter().all(|p| p.closed);
    let min_entropy = contour
        .vertices()
        .map(|v| eigenbasis_record(&mode_data(&q, &Momentum::D2(v.momentum)).unwrap()).entropy)
        .fold(f64::INFINITY, f64::min);
    outcome(
        !contour.is_empty()
            && all_closed
            && contour.max_residual < 1e-8
            && min_entropy > LN_2 - 1e-6
            && elapsed < Duration::from_secs(30),
        format!(
            "{} closed contour(s), {} vertices, max|g| = {:.1e}, min S = {:.9}, runtime {elapsed:.2?} (1 thread)",
            contour.polylines.len(),
            contour.vertex_count(),
            contour.max_residual,
            min_entropy
        ),
    )
}

/// A mode with prescribed overlap and final energy.
fn synthetic_mode(g: f64, eps: f64) -> ModeData {
    let s = (1.0 - g * g).max(0.0).sqrt();
    ModeData::from_vectors(
        Momentum::chain(0.0),
        &DVector::new(s, 0.0, g),
        &DVector::new(0.0, 0.0, eps),
        ModelClass::Insulator,
        AngleConvention::Spherical,
    )
    .unwrap()
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    let mut re_iff = true;
    for _ in 0..1000 {
        let g = if rng.gen_bool(0.1) {
            rng.gen_range(-1e-12..1e-12)
        } else {
            rng.gen_range(-0.999..0.999)
        };
        let eps = rng.gen_range(0.05..5.0);
        let n = rng.gen_range(0..=20);
        let md = synthetic_mode(g, eps);
        for z in fisher_zeros(&md, n..=n) {
            worst = worst.max(loschmidt_mode(&md, z.time_argument()).norm());
            re_iff &= (z.z.re == 0.0) == (md.g.abs() < 1e-12);
        }
    }
    for g in [0.0, 5e-13, -5e-13, 2e-12, -2e-12, 1e-6] {
        let z = fisher_zeros(&synthetic_mode(g, 1.0), 0..=0)[0];
        re_iff &= (z.z.re == 0.0) == (g.abs() < 1e-12);
    }

    let q = haldane(0.5, 2.0);
    let modes = mode_table(&q, &honeycomb_grid(128)).unwrap();
    let g_max = modes.iter().map(|m| m.g).fold(f64::NEG_INFINITY, f64::max);
    let g_min = modes.iter().map(|m| m.g).fold(f64::INFINITY, f64::min);
    let eps_min = modes.iter().map(|m| m.eps_f).fold(f64::INFINITY, f64::min);
    let (lo, hi) = (-g_max.atanh() / eps_min, g_min.abs().atanh() / eps_min);
    let zs: Vec<_> = modes.iter().flat_map(|m| fisher_zeros(m, 0..=0)).collect();
    let in_region = zs
        .iter()
        .all(|z| z.z.re >= lo - 1e-12 && z.z.re <= hi + 1e-12 && z.z.im > 0.0);
    let crosses = zs.iter().any(|z| z.z.re < 0.0) && zs.iter().any(|z| z.z.re > 0.0);
    outcome(
        worst < 1e-10 && re_iff && in_region && crosses,
        format!(
            "max|G(z_n)| = {worst:.1e}, Re z=0 iff |g|<1e-12: {re_iff}; haldane z0 cloud: {} zeros, Re z in [{:.3}, {:.3}] within [{lo:.3}, {hi:.3}], straddles Re z = 0: {crosses}",
            zs.len(),
            zs.iter().map(|z| z.z.re).fold(f64::INFINITY, f64::min),
            zs.iter().map(|z| z.z.re).fold(f64::NEG_INFINITY, f64::max),
        ),
    )
}

fn local_extrema(xs: &[f64], maxima: bool) -> Vec<usize> {
    (1..xs.len() - 1)
        .filter(|&i| {
            if maxima {
                xs[i] >= xs[i - 1] && xs[i] >= xs[i + 1]
            } else {
                xs[i] <= xs[i - 1] && xs[i] <= xs[i + 1]
            }
        })
        .collect()
}

fn criterion_8() -> Outcome {
    let q = ssh(0.5, 2.0);
    let k = find_critical_momenta_1d(&q, &ScanOptions::default())
        .unwrap()
        .roots[0]
        .k;
    let md = mode_data(&q, &Momentum::chain(k)).unwrap();
    let eps = md.eps_f;
    let ts = time_grid(0.0, 4.0, 4001);
    let dt = ts[1] - ts[0];
    let series = sublattice_entropy_series(&md, &ts).unwrap();
    let s: Vec<f64> = series.points.iter().map(|p| p.entropy).collect();
    let maxima = local_extrema(&s, true);
    let minima = local_extrema(&s, false);

    let sin_tf = 1.2 / 1.8f64.sqrt();
    let s_min_oracle = binary_entropy(0.5 + 0.5 * sin_tf);
    let mut pass = true;
    let mut notes = Vec::new();
    for n in 0.. {
        let t = PI / (2.0 * eps) * (n as f64 + 0.5);
        if t > 4.0 {
            break;
        }
        let hit = maxima.iter().find(|&&i| (ts[i] - t).abs() <= dt);
        let exact = sublattice_entropy_series(&md, &[t]).unwrap().points[0].entropy;
        let ok = hit.is_some() && (exact - LN_2).abs() < 1e-6;
        let sampled = hit.map(|&i| LN_2 - s[i]);
        pass &= ok;
        notes.push(format!(
            "max t={t:.4} S(t)-ln2={:.1e} sampled ln2-S {}",
            exact - LN_2,
            sampled.map_or("none".to_string(), |x| format!("{x:.1e}"))
        ));
    }
    for n in 0.. {
        let t = PI / eps * (n as f64 + 0.5);
        if t > 4.0 {
            break;
        }
        let hit = minima.iter().find(|&&i| (ts[i] - t).abs() <= dt);
        let ok = hit.is_some_and(|&i| (s[i] - s_min_oracle).abs() < 1e-3 && (s[i] - 0.207).abs() < 1e-3);
        pass &= ok;
        notes.push(format!(
            "min t_{n}={t:.4} S={:.5}",
            hit.map_or(f64::NAN, |&i| s[i])
        ));
    }
    notes.push(format!("oracle S_min={s_min_oracle:.5}"));
    outcome(pass, notes.join("; "))
}

fn random_quench(rng: &mut ChaCha8Rng) -> (QuenchSpec, Momentum) {
    loop {
        let pick = rng.gen_range(0..3);
        let q = match pick {
            0 => QuenchSpec::new(
                ModelSpec::Ssh(SshParams::new(rng.gen_range(0.2..2.0), rng.gen_range(0.0..3.0)).unwrap()),
                ModelSpec::Ssh(SshParams::new(rng.gen_range(0.2..2.0), rng.gen_range(0.0..3.0)).unwrap()),
            ),
            1 => QuenchSpec::new(
                ModelSpec::Xy(XyParams {
                    h: rng.gen_range(-2.0..2.0),
                    gamma: rng.gen_range(-1.5..1.5),
                }),
                ModelSpec::Xy(XyParams {
                    h: rng.gen_range(-2.0..2.0),
                    gamma: rng.gen_range(-1.5..1.5),
                }),
            ),
            _ => QuenchSpec::new(
                ModelSpec::Haldane(
                    HaldaneParams::new(
                        rng.gen_range(-3.0..3.0),
                        1.0,
                        rng.gen_range(0.0..0.5),
                        rng.gen_range(0.0..PI),
                    )
                    .unwrap(),
                ),
                ModelSpec::Haldane(
                    HaldaneParams::new(
                        rng.gen_range(-3.0..3.0),
                        1.0,
                        rng.gen_range(0.0..0.5),
                        rng.gen_range(0.0..PI),
                    )
                    .unwrap(),
                ),
            ),
        }
        .unwrap();
        let k = if pick == 2 {
            let (g1, g2) = honeycomb_reciprocal();
            Momentum::D2(
                dqpt_core::ReciprocalCell::new(g1, g2)
                    .unwrap()
                    .point(rng.gen(), rng.gen()),
            )
        } else {
            Momentum::chain(rng.gen_range(-PI..PI))
        };
        if mode_data(&q, &k).is_ok() {
            return (q, k);
        }
    }
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut spec_err, mut time_err) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let (q, k) = random_quench(&mut rng);
        let md = mode_data(&q, &k).unwrap();
        let (t1, t2) = (rng.gen_range(0.0..20.0), rng.gen_range(0.0..20.0));
        let a = ed_oracle(&q, &k, t1, Basis::FinalEigen).unwrap();
        let b = ed_oracle(&q, &k, t2, Basis::FinalEigen).unwrap();
        let want = [(1.0 + md.g.abs()) / 2.0, (1.0 - md.g.abs()) / 2.0];
        spec_err = spec_err
            .max((a.spectrum[0] - want[0]).abs())
            .max((a.spectrum[1] - want[1]).abs());
        time_err = time_err
            .max((a.spectrum[0] - b.spectrum[0]).abs())
            .max((a.p - b.p).abs());
    }
    outcome(
        spec_err < 1e-10 && time_err < 1e-10,
        format!("1000 modes: max spectrum error {spec_err:.1e}, max time dependence {time_err:.1e}"),
    )
}

fn local_maxima_near(series: &[f64], ts: &[f64], target: f64, steps: f64) -> bool {
    let dt = ts[1] - ts[0];
    local_extrema(series, true)
        .iter()
        .any(|&i| (ts[i] - target).abs() <= steps * dt)
}

fn criterion_10() -> Outcome {
    let ts = time_grid(0.0, 5.0, 5001);
    let mut worst_identity = 0.0f64;
    let identities = [
        (ssh(0.5, 0.5), build_grid_1d(4000, false).unwrap()),
        (xy((0.5, 1.0), (0.5, 1.0)), build_grid_1d(4000, true).unwrap()),
        (haldane(0.5, 0.5), honeycomb_grid(64)),
    ];
    for (q, grid) in &identities {
        let r = rate_function(q, grid, &ts[..501]).unwrap();
        worst_identity = r
            .points
            .iter()
            .map(|p| p.lambda.abs())
            .fold(worst_identity, f64::max);
    }

    let r = rate_function(&ssh(0.5, 2.0), &build_grid_1d(4000, false).unwrap(), &ts).unwrap();
    let lambda: Vec<f64> = r.points.iter().map(|p| p.lambda).collect();
    let t_n: Vec<f64> = (0..2).map(|n| PI * (n as f64 + 0.5) / 1.8f64.sqrt()).collect();
    let peaks: Vec<bool> = t_n
        .iter()
        .map(|&t| local_maxima_near(&lambda, &ts, t, 2.0))
        .collect();
    outcome(
        worst_identity < 1e-14 && peaks.iter().all(|&p| p),
        format!("identity max|λ| = {worst_identity:.1e}; peaks near t_n {t_n:.4?}: {peaks:?}"),
    )
}

fn custom(dx: &str, dy: &str, dz: &str, dim: usize, env: &[(&str, f64)]) -> ModelSpec {
    let env: ParamEnv = env.iter().copied().collect();
    validate_model_def(
        parse_expr(dx).unwrap(),
        parse_expr(dy).unwrap(),
        parse_expr(dz).unwrap(),
        dim,
        env,
    )
    .unwrap()
}

fn max_deviation(a: &ModelSpec, b: &ModelSpec, ks: &[Momentum]) -> f64 {
    ks.iter()
        .map(|k| {
            let (x, y) = (a.d_vector(k).unwrap(), b.d_vector(k).unwrap());
            (x.dx - y.dx)
                .abs()
                .max((x.dy - y.dy).abs())
                .max((x.dz - y.dz).abs())
        })
        .fold(0.0, f64::max)
}

fn criterion_11() -> Outcome {
    let chain: Vec<Momentum> = build_grid_1d(10_000, false).unwrap().points().to_vec();
    let plane: Vec<Momentum> = honeycomb_grid(200).points().to_vec();

    let ssh_dev = max_deviation(
        &custom("t1 + t2*cos(k)", "t2*sin(k)", "0", 1, &[("t1", 1.0), ("t2", 0.5)]),
        &ModelSpec::Ssh(SshParams::new(1.0, 0.5).unwrap()),
        &chain,
    );
    let xy_dev = max_deviation(
        &custom(
            "0",
            "-gamma*sin(k)",
            "h - cos(k)",
            1,
            &[("h", 0.5), ("gamma", 1.0)],
        ),
        &ModelSpec::Xy(XyParams { h: 0.5, gamma: 1.0 }),
        &chain,
    );
    let haldane_dev = max_deviation(
        &custom(
            "g1*(cos(ky) + cos(-sqrt(3)/2*kx - ky/2) + cos(sqrt(3)/2*kx - ky/2))",
            "g1*(sin(ky) + sin(-sqrt(3)/2*kx - ky/2) + sin(sqrt(3)/2*kx - ky/2))",
            "m - 2*g2*sin(phi)*(sin(-sqrt(3)*kx) + sin(sqrt(3)/2*kx - 3/2*ky) + sin(sqrt(3)/2*kx + 3/2*ky))",
            2,
            &[("m", 0.5), ("g1", 1.0), ("g2", 0.3), ("phi", FRAC_PI_2)],
        ),
        &haldane_model(0.5),
        &plane,
    );

    let env: ParamEnv = [("m", 0.5)].into_iter().collect();
    let parse_cases = [
        matches!(
            parse_expr("sin(k"),
            Err(DslError::Parse {
                kind: ParseErrorKind::UnbalancedParen,
                offset: 5,
                ..
            })
        ),
        matches!(
            parse_expr(""),
            Err(DslError::Parse {
                kind: ParseErrorKind::EmptyInput,
                ..
            })
        ),
        matches!(
            parse_expr("k $ 2"),
            Err(DslError::Parse {
                kind: ParseErrorKind::UnknownToken,
                offset: 2,
                ..
            })
        ),
        matches!(
            parse_expr("k 2"),
            Err(DslError::Parse {
                kind: ParseErrorKind::TrailingInput,
                ..
            })
        ),
        parse_expr("-gamma*sin(k)").is_ok(),
        matches!(
            validate_model_def(parse_expr("0").unwrap(), parse_expr("0").unwrap(), parse_expr("m - cos(k)").unwrap(), 1, ParamEnv::new()),
            Err(Error::Dsl(DslError::UnboundVariable { ref name, span })) if name == "m" && span.start == 0 && span.end == 1
        ),
        matches!(
            validate_model_def(
                parse_expr("0").unwrap(),
                parse_expr("0").unwrap(),
                parse_expr("m - cos(kx)").unwrap(),
                1,
                env.clone()
            ),
            Err(Error::DimensionMismatch(_))
        ),
    ];
    let cases_ok = parse_cases.iter().all(|&c| c);
    outcome(
        ssh_dev < 1e-12 && xy_dev < 1e-12 && haldane_dev < 1e-12 && cases_ok,
        format!(
            "max |Δd|: ssh {ssh_dev:.1e}, xy {xy_dev:.1e}, haldane {haldane_dev:.1e}; error cases {}/{}",
            parse_cases.iter().filter(|&&c| c).count(),
            parse_cases.len()
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("SSH critical momentum", criterion_1),
        ("maximal entropy at criticality", criterion_2),
        ("SSH boundary-critical flag", criterion_3),
        ("XY two-root quench", criterion_4),
        ("XY root counts", criterion_5),
        ("Haldane critical contour", criterion_6),
        ("Fisher zeros", criterion_7),
        ("sublattice entropy extrema vs DQPT times", criterion_8),
        ("oracle equivalence", criterion_9),
        ("rate function", criterion_10),
        ("DSL equivalence and errors", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} criterion {:>2} ({name}): {}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
