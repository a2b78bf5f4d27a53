//! Benchmark fixtures. The benchmarks themselves live in `benches/`.

use std::f64::consts::FRAC_PI_2;

use dqpt_core::{HaldaneParams, ModelSpec, QuenchSpec, SshParams};

pub fn ssh_quench() -> QuenchSpec {
    QuenchSpec::new(
        ModelSpec::Ssh(SshParams::new(1.0, 0.5).unwrap()),
        ModelSpec::Ssh(SshParams::new(1.0, 2.0).unwrap()),
    )
    .unwrap()
}

pub fn haldane_quench() -> QuenchSpec {
    let model = |m| ModelSpec::Haldane(HaldaneParams::new(m, 1.0, 0.3, FRAC_PI_2).unwrap());
    QuenchSpec::new(model(0.5), model(2.0)).unwrap()
}
