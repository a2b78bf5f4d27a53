//! Quench dynamics of translationally invariant two-band models.
//!
//! Each momentum mode of a Bloch Hamiltonian `H_k = d_k · σ` evolves
//! independently after a sudden quench `d_i → d_f`. This crate computes the
//! per-mode overlap `g = d̂ᵢ · d̂f`, the Loschmidt amplitude and its rate
//! function, Fisher zeros in complex time, critical momenta where `g`
//! vanishes, and the momentum-space entanglement spectrum in both the
//! post-quench eigenbasis and the sublattice basis.
//!
//! Built-in models are the SSH chain, the quantum XY chain (a Kitaev-type
//! superconductor) and the Haldane honeycomb model; arbitrary d-vectors can be
//! supplied as expressions through [`dsl`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod critical;
pub mod dsl;
pub mod entanglement;
pub mod error;
pub mod geometry;
pub mod models;
pub mod quench;

pub use critical::{
    find_critical_contours_2d, find_critical_momenta_1d, BoundaryFlags, ContourOptions, ContourVertex,
    CriticalContour2D, CriticalRoot, CriticalSet1D, Polyline, ScanOptions,
};
pub use dsl::{eval_expr, parse_expr, validate_model_def, CustomModel, DslError, Expression, ParamEnv};
pub use entanglement::{
    binary_entropy, ed_oracle, eigenbasis_record, sublattice_entropy_series, sublattice_occupation, Basis,
    EntanglementRecord, OracleResult, SublatticePoint, SublatticeSeries,
};
pub use error::{Error, Result};
pub use geometry::{
    build_grid_1d, build_grid_2d, unit_overlap, BrillouinGrid, DVector, GridShape, Momentum, Momentum1D,
    Momentum2D, ReciprocalCell, Vec2,
};
pub use models::{
    haldane_critical_mass, honeycomb_reciprocal, polar_angles, AngleConvention, DzConvention, HaldaneParams,
    ModelClass, ModelSpec, Phase, SshParams, XyParams,
};
pub use quench::{
    dqpt_times, dqpt_times_with_tolerance, echo_mode, fisher_zeros, loschmidt_mode, mode_data, mode_table,
    rate_function, time_grid, FisherZero, ModeData, QuenchSpec, RatePoint, RateSeries,
};
