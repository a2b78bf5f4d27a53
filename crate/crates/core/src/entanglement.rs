//! Momentum-space entanglement of a single quenched mode.
//!
//! Each mode carries two internal degrees of freedom. Splitting them along
//! the post-quench bands gives the time-independent spectrum
//! `{(1 + g)/2, (1 - g)/2}`; splitting along the sublattice orbitals gives a
//! spectrum that oscillates at frequency `2ε`.

use nalgebra::{Matrix2, Matrix4, SymmetricEigen, Vector2, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{DVector, Momentum, GAP_EPS};
use crate::models::{AngleConvention, ModelClass, PolarAngles};
use crate::quench::{with_momentum, ModeData, QuenchSpec};

/// `-p ln p - (1-p) ln(1-p)` in nats, with `0 ln 0 = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    xlnx(p) + xlnx(1.0 - p)
}

fn xlnx(x: f64) -> f64 {
    if x < 1e-300 {
        0.0
    } else {
        -x * x.ln()
    }
}

/// Entanglement spectrum `{p, 1 - p}` and entropy of one mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementRecord {
    pub momentum: Momentum,
    pub p: f64,
    pub one_minus_p: f64,
    pub entropy: f64,
}

/// Eigenbasis bipartition: `p = (1 + g)/2`, independent of time.
pub fn eigenbasis_record(md: &ModeData) -> EntanglementRecord {
    let p = 0.5 * (1.0 + md.g);
    let q = 0.5 * (1.0 - md.g);
    EntanglementRecord {
        momentum: md.momentum,
        p,
        one_minus_p: q,
        entropy: xlnx(p.clamp(0.0, 1.0)) + xlnx(q.clamp(0.0, 1.0)),
    }
}

fn sublattice_available(md: &ModeData) -> Result<()> {
    if md.class == ModelClass::Superconductor || md.convention == AngleConvention::Bogoliubov {
        return Err(Error::BasisUnavailable);
    }
    Ok(())
}

/// Occupation `|a_k(t)|²` of sublattice A.
///
/// The initial lower-band Bloch vector `-d̂ᵢ` precesses about `d̂f` at angular
/// frequency `2ε`; `|a|² = (1 + n_z)/2`. For chains the in-plane angle plays
/// the role of the polar angle, which gives
/// `½ - ½[cos Δθ cos θf + sin Δθ sin θf cos 2εt]`.
pub fn sublattice_occupation(md: &ModeData, t: f64) -> Result<f64> {
    sublattice_available(md)?;
    let i = PolarAngles {
        theta: md.theta_i,
        azimuth: md.azimuth_i,
    }
    .unit_vector();
    let f = PolarAngles {
        theta: md.theta_f,
        azimuth: md.azimuth_f,
    }
    .unit_vector();
    let g = i.dot(&f);
    let (s, c) = (2.0 * md.eps_f * t).sin_cos();
    let nz = -g * f.dz - c * (i.dz - g * f.dz) - s * f.cross(&i).dz;
    Ok((0.5 * (1.0 + nz)).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SublatticePoint {
    pub t: f64,
    pub a2: f64,
    pub entropy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SublatticeSeries {
    pub momentum: Momentum,
    pub points: Vec<SublatticePoint>,
    /// Set for Bloch-sphere (two-dimensional) models, where the sublattice
    /// analysis is a generalization of the chain result rather than a
    /// reproduction of it.
    pub extrapolated: bool,
}

pub fn sublattice_entropy_series(md: &ModeData, times: &[f64]) -> Result<SublatticeSeries> {
    sublattice_available(md)?;
    let points = times
        .iter()
        .map(|&t| {
            let a2 = sublattice_occupation(md, t)?;
            Ok(SublatticePoint {
                t,
                a2,
                entropy: binary_entropy(a2),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SublatticeSeries {
        momentum: md.momentum,
        points,
        extrapolated: md.convention == AngleConvention::Spherical,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    FinalEigen,
    Sublattice,
}

/// Output of the brute-force reduced-density-matrix construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    /// Eigenvalues of the reduced density matrix, largest first.
    pub spectrum: [f64; 2],
    /// Weight of the lower final band (eigenbasis) or sublattice A (sublattice basis).
    pub p: f64,
    pub entropy: f64,
    /// `Tr ρ²` of the full two-factor density matrix.
    pub purity: f64,
}

type C = Complex64;

fn c(re: f64) -> C {
    C::new(re, 0.0)
}

fn bloch_hamiltonian(d: &DVector) -> Matrix2<C> {
    Matrix2::new(c(d.dz), C::new(d.dx, -d.dy), C::new(d.dx, d.dy), c(-d.dz))
}

macro_rules! sorted_eigen {
    ($name:ident, $mat:ty, $vec:ty, $n:expr) => {
        /// Eigenpairs of a Hermitian matrix, ascending in eigenvalue.
        fn $name(m: $mat) -> Vec<(f64, $vec)> {
            let eig = SymmetricEigen::new(m);
            let mut out: Vec<(f64, $vec)> = (0..$n)
                .map(|j| (eig.eigenvalues[j], eig.eigenvectors.column(j).into_owned()))
                .collect();
            out.sort_by(|a, b| a.0.total_cmp(&b.0));
            out
        }
    };
}

sorted_eigen!(eigen2, Matrix2<C>, Vector2<C>, 2);
sorted_eigen!(eigen4, Matrix4<C>, Vector4<C>, 4);

/// `e^{-iHt} = cos(εt) 1 - i sin(εt) d̂·σ`.
fn evolve2(psi: &Vector2<C>, d: &DVector, t: f64) -> Vector2<C> {
    let eps = d.norm();
    let (s, co) = (eps * t).sin_cos();
    let u = Matrix2::identity() * c(co) - bloch_hamiltonian(&d.scale(1.0 / eps)) * C::new(0.0, s);
    u * psi
}

/// Reduced density matrix of one factor of a two-mode Fock state; the basis
/// index of `|n₁ n₂⟩` is `2 n₁ + n₂`.
fn partial_trace(rho: &Matrix4<C>, keep_first: bool) -> Matrix2<C> {
    let mut out = Matrix2::zeros();
    for a in 0..2 {
        for b in 0..2 {
            for n in 0..2 {
                let (i, j) = if keep_first {
                    (2 * a + n, 2 * b + n)
                } else {
                    (2 * n + a, 2 * n + b)
                };
                out[(a, b)] += rho[(i, j)];
            }
        }
    }
    out
}

fn reduced_result(state: Vector4<C>, keep_first: bool, p_index: usize) -> OracleResult {
    let rho = state * state.adjoint();
    let purity = (rho * rho).trace().re;
    let red = partial_trace(&rho, keep_first);
    let eig = SymmetricEigen::new(red);
    let mut spectrum = [eig.eigenvalues[0], eig.eigenvalues[1]];
    spectrum.sort_by(|a, b| b.total_cmp(a));
    let entropy = spectrum.iter().map(|&x| xlnx(x.max(0.0))).sum();
    OracleResult {
        spectrum,
        p: red[(p_index, p_index)].re,
        entropy,
        purity,
    }
}

/// Exact-diagonalization reference for one mode at time `t`.
///
/// Builds the pre- and post-quench matrices numerically, takes the ground
/// state of the initial one, evolves it exactly, forms the full density matrix
/// on the two-factor Fock space and traces out one factor. Superconductors are
/// handled on the explicit four-state Fock space of the pair `(k, -k)`.
pub fn ed_oracle(q: &QuenchSpec, k: &Momentum, t: f64, basis: Basis) -> Result<OracleResult> {
    let (di, df) = q.d_vectors(k)?;
    for d in [&di, &df] {
        let n = d.norm();
        if !(n > GAP_EPS) {
            return Err(with_momentum(
                Error::GapClosure {
                    norm: n,
                    momentum: None,
                },
                k,
            ));
        }
    }
    match (q.class(), basis) {
        (ModelClass::Insulator, Basis::FinalEigen) => Ok(insulator_eigenbasis(&di, &df, t)),
        (ModelClass::Insulator, Basis::Sublattice) => {
            let frame = |d: &DVector| match q.angle_convention() {
                AngleConvention::Planar => Ok(DVector::new(d.dy, 0.0, d.dx)),
                AngleConvention::Spherical => Ok(*d),
                AngleConvention::Bogoliubov => Err(Error::BasisUnavailable),
            };
            Ok(insulator_sublattice(&frame(&di)?, &frame(&df)?, t))
        }
        (ModelClass::Superconductor, Basis::FinalEigen) => Ok(pair_eigenbasis(&di, &df, t)),
        (ModelClass::Superconductor, Basis::Sublattice) => Err(Error::BasisUnavailable),
    }
}

fn insulator_eigenbasis(di: &DVector, df: &DVector, t: f64) -> OracleResult {
    let psi0 = eigen2(bloch_hamiltonian(di))[0].1;
    let psi = evolve2(&psi0, df, t);
    let fin = eigen2(bloch_hamiltonian(df));
    let lower = fin[0].1.dotc(&psi);
    let upper = fin[1].1.dotc(&psi);
    // factors: (lower band, upper band); one particle in total
    let mut state = Vector4::zeros();
    state[2] = lower; // |1 0>
    state[1] = upper; // |0 1>
                      // keep the upper band; its empty state carries the lower-band weight
    reduced_result(state, false, 0)
}

fn insulator_sublattice(di: &DVector, df: &DVector, t: f64) -> OracleResult {
    let psi0 = eigen2(bloch_hamiltonian(di))[0].1;
    let psi = evolve2(&psi0, df, t);
    // factors: (A, B); |A> = |1 0>, |B> = |0 1>
    let mut state = Vector4::zeros();
    state[2] = psi[0];
    state[1] = psi[1];
    reduced_result(state, true, 1)
}

fn kron(a: &Matrix2<C>, b: &Matrix2<C>) -> Matrix4<C> {
    Matrix4::from_fn(|i, j| a[(i / 2, j / 2)] * b[(i % 2, j % 2)])
}

/// Bogoliubov-de Gennes pair Hamiltonian on the Fock space of `(k, -k)`:
/// `d_z (n_k + n_{-k} - 1) + (d_x - i d_y) c†_k c†_{-k} + h.c.`
fn pair_hamiltonian(d: &DVector) -> Matrix4<C> {
    let annihilate = Matrix2::new(c(0.0), c(1.0), c(0.0), c(0.0));
    let parity = Matrix2::new(c(1.0), c(0.0), c(0.0), c(-1.0));
    let id = Matrix2::identity();
    let c1 = kron(&annihilate, &id);
    let c2 = kron(&parity, &annihilate);
    let n1 = c1.adjoint() * c1;
    let n2 = c2.adjoint() * c2;
    let pair = c1.adjoint() * c2.adjoint();
    (n1 + n2 - Matrix4::identity()) * c(d.dz)
        + pair * C::new(d.dx, -d.dy)
        + pair.adjoint() * C::new(d.dx, d.dy)
}

fn pair_eigenbasis(di: &DVector, df: &DVector, t: f64) -> OracleResult {
    let psi0 = eigen4(pair_hamiltonian(di))[0].1;
    let fin = eigen4(pair_hamiltonian(df));
    // e^{-iHt} through the eigen-decomposition of the final Hamiltonian
    let psi = fin
        .iter()
        .map(|(e, v)| v * (v.dotc(&psi0) * C::new(0.0, -e * t).exp()))
        .fold(Vector4::zeros(), |acc, x| acc + x);
    let vacuum = fin[0].1.dotc(&psi); // |0f 0f>, energy -ε
    let paired = fin[3].1.dotc(&psi); // |1f 1f>, energy +ε
                                      // quasiparticle occupations of (k, -k)
    let mut state = Vector4::zeros();
    state[0] = vacuum;
    state[3] = paired;
    reduced_result(state, true, 0)
}
