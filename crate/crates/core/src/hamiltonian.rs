//! Bose-Hubbard Hamiltonian of the three-mode system with Raman coupling to a
//! condensate reservoir, exact evolution, and the two limit scans.
//!
//! Units: hbar = 1, energies in units of the named coupling.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_4, PI, TAU};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::fock::{
    embed_and_apply, hermitian_eigen, max_abs, partial_trace, trace_distance, LinearOperator,
    ModeRegister, OperatorKind, QuantumState, StateData, C64,
};
use crate::gates::{fermionic_swap_gate, number_rotation_matrix};
use crate::reservoir::{coherent_state, ReservoirSpec};

pub const MODE_SOURCE: &str = "a";
pub const MODE_ALICE: &str = "A";
pub const MODE_BOB: &str = "B";

/// Couplings of the Bose-Hubbard model. Tunneling only ever connects A-B and
/// a-A; modes a and B never share a term.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct HamiltonianParams {
    pub j_ab: f64,
    pub j_aa: f64,
    /// On-site interaction `U_i n_i (n_i - 1)`.
    pub onsite: BTreeMap<String, f64>,
    /// Bias `E_i n_i`.
    pub bias: BTreeMap<String, f64>,
    /// Raman coupling `-Omega_i / 2 (a_i^dag a_res + h.c.)`.
    pub rabi: BTreeMap<String, f64>,
    /// Resolved reservoir; its label must be a mode of the register.
    pub reservoir: Option<ReservoirSpec>,
}

impl HamiltonianParams {
    fn validate(&self, register: &ModeRegister) -> Result<()> {
        let mut all = vec![self.j_ab, self.j_aa];
        for map in [&self.onsite, &self.bias, &self.rabi] {
            for (mode, v) in map {
                register.position(mode)?;
                all.push(*v);
            }
        }
        if let Some(x) = all.iter().find(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite coupling {x}")));
        }
        if self.j_ab != 0.0 {
            register.position(MODE_ALICE)?;
            register.position(MODE_BOB)?;
        }
        if self.j_aa != 0.0 {
            register.position(MODE_SOURCE)?;
            register.position(MODE_ALICE)?;
        }
        if self.rabi.values().any(|&w| w != 0.0) {
            let res = self.reservoir.as_ref().ok_or_else(|| {
                Error::InvalidParameter("Raman coupling without a reservoir".into())
            })?;
            let cutoff = res.cutoff()?;
            let found = register.dim_of(&res.label)?;
            if found != cutoff {
                return Err(Error::ModeDimensionMismatch {
                    label: res.label.clone(),
                    expected: cutoff,
                    found,
                });
            }
        }
        Ok(())
    }
}

/// `H[out, in] += amp * <out| a_i^dag a_j |in>` for every basis state.
fn add_hopping(h: &mut DMatrix<C64>, register: &ModeRegister, i: usize, j: usize, amp: f64) {
    let dims: Vec<usize> = register.modes().iter().map(|m| m.dim).collect();
    for input in 0..register.dimension() {
        let mut occ = register.occupations(input);
        if occ[j] == 0 || occ[i] + 1 >= dims[i] && i != j {
            continue;
        }
        let nj = occ[j] as f64;
        occ[j] -= 1;
        let ni = occ[i] as f64;
        occ[i] += 1;
        let out = register.index_of(&occ).expect("occupations within cutoff");
        h[(out, input)] += C64::new(amp * nj.sqrt() * (ni + 1.0).sqrt(), 0.0);
    }
}

fn add_pair(
    h: &mut DMatrix<C64>,
    register: &ModeRegister,
    x: &str,
    y: &str,
    amp: f64,
) -> Result<()> {
    if amp == 0.0 {
        return Ok(());
    }
    let (i, j) = (register.position(x)?, register.position(y)?);
    add_hopping(h, register, i, j, amp);
    add_hopping(h, register, j, i, amp);
    Ok(())
}

/// Assemble the Hamiltonian on `register`.
pub fn build_hamiltonian(
    register: &ModeRegister,
    params: &HamiltonianParams,
) -> Result<LinearOperator> {
    params.validate(register)?;
    let dim = register.dimension();
    let mut h = DMatrix::<C64>::zeros(dim, dim);
    add_pair(&mut h, register, MODE_ALICE, MODE_BOB, -params.j_ab / 2.0)?;
    add_pair(
        &mut h,
        register,
        MODE_SOURCE,
        MODE_ALICE,
        -params.j_aa / 2.0,
    )?;
    if let Some(res) = &params.reservoir {
        for (mode, &w) in &params.rabi {
            add_pair(&mut h, register, mode, &res.label, -w / 2.0)?;
        }
    }
    for idx in 0..dim {
        let occ = register.occupations(idx);
        let mut e = 0.0;
        for (mode, &u) in &params.onsite {
            let n = occ[register.position(mode)?] as f64;
            e += u * n * (n - 1.0);
        }
        for (mode, &b) in &params.bias {
            e += b * occ[register.position(mode)?] as f64;
        }
        h[(idx, idx)] += C64::new(e, 0.0);
    }
    Ok(LinearOperator::new_unchecked(
        register.clone(),
        h,
        OperatorKind::Hermitian,
    ))
}

/// Group basis indices by total particle number when `h` has no matrix
/// elements between different sectors.
fn number_sectors(h: &DMatrix<C64>, register: &ModeRegister) -> Option<Vec<Vec<usize>>> {
    let numbers: Vec<usize> = (0..register.dimension())
        .map(|i| register.total_number(i))
        .collect();
    for (i, ni) in numbers.iter().enumerate() {
        for (j, nj) in numbers.iter().enumerate() {
            if ni != nj && h[(i, j)] != C64::new(0.0, 0.0) {
                return None;
            }
        }
    }
    let mut sectors: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, n) in numbers.into_iter().enumerate() {
        sectors.entry(n).or_default().push(i);
    }
    Some(sectors.into_values().collect())
}

fn exp_hermitian(h: &DMatrix<C64>, t: f64) -> DMatrix<C64> {
    let (vals, vecs) = hermitian_eigen(h);
    let phases = DMatrix::from_diagonal(&vals.map(|e| C64::from_polar(1.0, -e * t)));
    &vecs * phases * vecs.adjoint()
}

/// `exp(-iHt)` via Hermitian eigendecomposition, block by block over
/// particle-number sectors when `H` conserves the total number.
pub fn propagator(h: &LinearOperator, t: f64) -> Result<LinearOperator> {
    let dev = max_abs(&(h.matrix() - h.matrix().adjoint()));
    if dev > crate::fock::OPERATOR_TOL {
        return Err(Error::NotHermitian(dev));
    }
    if !t.is_finite() {
        return Err(Error::InvalidParameter(format!("time {t}")));
    }
    let dim = h.register().dimension();
    let u = match number_sectors(h.matrix(), h.register()) {
        Some(sectors) => {
            let mut u = DMatrix::<C64>::zeros(dim, dim);
            for idx in sectors {
                let block =
                    DMatrix::from_fn(idx.len(), idx.len(), |r, c| h.matrix()[(idx[r], idx[c])]);
                let ub = exp_hermitian(&block, t);
                for (r, &gr) in idx.iter().enumerate() {
                    for (c, &gc) in idx.iter().enumerate() {
                        u[(gr, gc)] = ub[(r, c)];
                    }
                }
            }
            u
        }
        None => exp_hermitian(h.matrix(), t),
    };
    Ok(LinearOperator::new_unchecked(
        h.register().clone(),
        u,
        OperatorKind::Unitary,
    ))
}

/// Evolve `state` under `h` for time `t`.
pub fn evolve(state: &QuantumState, h: &LinearOperator, t: f64) -> Result<QuantumState> {
    if t == 0.0 {
        return Ok(state.clone());
    }
    embed_and_apply(state, &propagator(h, t)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanPoint {
    pub parameter: f64,
    pub value: f64,
}

fn check_scan(values: &[f64], what: &str) -> Result<()> {
    if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "{what} must be positive, got {v}"
        )));
    }
    if values.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter(format!(
            "{what} list must be ascending"
        )));
    }
    Ok(())
}

/// Which inputs enter the process fidelity of the hopping swap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwapSubspace {
    /// `|00>, |01>, |10>, |11>`.
    Qubits,
    /// `|01>, |10>` only.
    SingleParticle,
}

/// Process infidelity of two-mode Bose-Hubbard hopping at interaction ratio
/// `U/J` (cutoff 3 per mode), run for one full exchange time `t = pi/J`,
/// against the fermionic swap after aligning the free local output phases.
pub fn swap_process_infidelity(u_over_j: f64, subspace: SwapSubspace) -> Result<f64> {
    if !(u_over_j.is_finite() && u_over_j >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "U/J must be non-negative, got {u_over_j}"
        )));
    }
    let register = ModeRegister::new([(MODE_ALICE, 3), (MODE_BOB, 3)])?;
    let params = HamiltonianParams {
        j_ab: 1.0,
        onsite: [
            (MODE_ALICE.to_string(), u_over_j),
            (MODE_BOB.to_string(), u_over_j),
        ]
        .into(),
        ..Default::default()
    };
    let u = propagator(&build_hamiltonian(&register, &params)?, PI)?;
    let qubits = ModeRegister::new([(MODE_ALICE, 2), (MODE_BOB, 2)])?;
    let ideal = fermionic_swap_gate(&qubits, MODE_ALICE, MODE_BOB)?;
    let embed: Vec<usize> = (0..4)
        .map(|q| register.index_of(&qubits.occupations(q)))
        .collect::<Result<_>>()?;
    let block = DMatrix::from_fn(4, 4, |r, c| u.matrix()[(embed[r], embed[c])]);
    let inputs: &[usize] = match subspace {
        SwapSubspace::Qubits => &[0, 1, 2, 3],
        SwapSubspace::SingleParticle => &[1, 2],
    };
    // overlap of each output row with the ideal action, restricted to `inputs`
    let c: Vec<C64> = (0..4)
        .map(|j| {
            inputs
                .iter()
                .map(|&i| ideal.matrix()[(j, i)].conj() * block[(j, i)])
                .sum()
        })
        .collect();
    let f = match subspace {
        SwapSubspace::Qubits => aligned_overlap(&c).powi(2) / 16.0,
        SwapSubspace::SingleParticle => (c[1].norm() + c[2].norm()).powi(2) / 4.0,
    };
    Ok((1.0 - f).max(0.0))
}

/// `max_{a,b} |c0 + c1 e^{ia} + c2 e^{ib} + c3 e^{i(a+b)}|`, the overlap left
/// after choosing the free local output phases. For fixed `a` the best `b`
/// gives `|c0 + c1 e^{ia}| + |c2 + c3 e^{ia}|`; the remaining one-dimensional
/// maximum is bracketed on a grid and refined by golden-section search.
fn aligned_overlap(c: &[C64]) -> f64 {
    let f = |a: f64| {
        let e = C64::from_polar(1.0, a);
        (c[0] + c[1] * e).norm() + (c[2] + c[3] * e).norm()
    };
    const SAMPLES: usize = 720;
    let step = TAU / SAMPLES as f64;
    let mut best = (0.0, f(0.0));
    for k in 1..SAMPLES {
        let a = k as f64 * step;
        let v = f(a);
        if v > best.1 {
            best = (a, v);
        }
    }
    let (mut lo, mut hi) = (best.0 - step, best.0 + step);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..100 {
        let (x1, x2) = (hi - g * (hi - lo), lo + g * (hi - lo));
        if f(x1) < f(x2) {
            lo = x1;
        } else {
            hi = x2;
        }
    }
    best.1.max(f(0.5 * (lo + hi)))
}

/// Hard-core limit scan: process infidelity of the hopping swap for each `U/J`.
pub fn hardcore_limit_scan(u_over_j: &[f64]) -> Result<Vec<ScanPoint>> {
    check_scan(u_over_j, "U/J ratio")?;
    u_over_j
        .iter()
        .map(|&r| {
            Ok(ScanPoint {
                parameter: r,
                value: swap_process_infidelity(r, SwapSubspace::Qubits)?,
            })
        })
        .collect()
}

/// Reservoir phase used by [`reservoir_resolved_rotation`].
pub const RESOLVED_THETA: f64 = 0.0;

/// Couple qubit mode `a` to a resolved coherent reservoir of mean occupation
/// `nbar` for a quarter rotation, trace the reservoir out, and return the
/// larger trace distance (over inputs `|0>`, `|1>`) from the ideal rotation.
///
/// The ideal rotation carries `-i e^{i theta}` on the transferred amplitude,
/// which corresponds to `+Omega/2 (a^dag b + h.c.)`; the Raman term of the
/// model enters with a minus sign, so the coupling is set to `Omega_a = -1`.
pub fn resolved_rotation_deviation(nbar: f64, theta: f64) -> Result<f64> {
    let res = ReservoirSpec::resolved_minimal("bec", nbar)?;
    let cutoff = res.cutoff()?;
    let register = ModeRegister::new([(MODE_SOURCE, 2), (res.label.as_str(), cutoff)])?;
    let rabi = -1.0;
    let params = HamiltonianParams {
        rabi: [(MODE_SOURCE.to_string(), rabi)].into(),
        reservoir: Some(res.clone()),
        ..Default::default()
    };
    let h = build_hamiltonian(&register, &params)?;
    let t = PI / (2.0 * rabi.abs() * nbar.sqrt());
    let u = propagator(&h, t)?;
    let bec = coherent_state(&res, theta)?.state;
    let ideal = number_rotation_matrix(FRAC_PI_4, theta);
    let qubit = ModeRegister::new([(MODE_SOURCE, 2)])?;
    let mut worst = 0.0f64;
    for n in 0..2 {
        let amps = bec.amplitudes().expect("coherent state is pure");
        let mut v = DVector::<C64>::zeros(register.dimension());
        for (k, a) in amps.iter().enumerate() {
            v[register.index_of(&[n, k])?] = *a;
        }
        let joint = QuantumState::pure(register.clone(), v)?;
        let out = embed_and_apply(&joint, &u)?;
        let reduced = partial_trace(&out, &[MODE_SOURCE])?;
        let target = QuantumState::pure(qubit.clone(), ideal.column(n).into_owned())?;
        worst = worst.max(trace_distance(&reduced, &target)?);
    }
    Ok(worst)
}

/// Large-reservoir scan: deviation from the ideal rotation for each `nbar`.
pub fn reservoir_resolved_rotation(nbars: &[f64]) -> Result<Vec<ScanPoint>> {
    check_scan(nbars, "mean occupation")?;
    nbars
        .iter()
        .map(|&n| {
            Ok(ScanPoint {
                parameter: n,
                value: resolved_rotation_deviation(n, RESOLVED_THETA)?,
            })
        })
        .collect()
}

/// Reduced density matrix helper for callers comparing single modes.
pub fn reduced_density(state: &QuantumState, mode: &str) -> Result<DMatrix<C64>> {
    let r = partial_trace(state, &[mode])?;
    match r.data(0) {
        StateData::Mixed(m) => Ok(m.clone()),
        StateData::Pure(v) => Ok(v * v.adjoint()),
    }
}
