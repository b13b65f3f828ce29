//! Idealized gates on qubit modes (occupation cutoff 2).
//!
//! Truth tables follow the protocol's displayed conventions. The hopping gate
//! additionally has a `Raw` form equal to exact evolution under the hopping
//! Hamiltonian, used to cross-check against [`crate::hamiltonian`].

use nalgebra::{dmatrix, DMatrix};

use crate::error::{Error, Result};
use crate::fock::{
    apply_phased, embed_and_apply, LinearOperator, ModeRegister, OperatorKind, PhasedOperator,
    QuantumState, C64,
};
use crate::reservoir::PhaseFrame;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

fn qubit(register: &ModeRegister, mode: &str) -> Result<ModeRegister> {
    if register.dim_of(mode)? != 2 {
        return Err(Error::NotQubit(mode.to_string()));
    }
    ModeRegister::new([(mode, 2)])
}

fn qubit_pair(register: &ModeRegister, j: &str, k: &str) -> Result<ModeRegister> {
    if j == k {
        return Err(Error::IdenticalModes(j.to_string()));
    }
    qubit(register, j)?;
    qubit(register, k)?;
    ModeRegister::new([(j, 2), (k, 2)])
}

fn finite(x: f64, what: &str) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::InvalidParameter(format!(
            "{what} must be finite, got {x}"
        )))
    }
}

/// `diag(1, e^{i lambda})`: the phase acquired under a bias `E` for time `t`
/// with `lambda = E t`. `lambda = pi` is the Pauli Z.
pub fn phase_gate(register: &ModeRegister, mode: &str, lambda: f64) -> Result<LinearOperator> {
    let reg = qubit(register, mode)?;
    let lambda = finite(lambda, "phase angle")?;
    Ok(LinearOperator::new_unchecked(
        reg,
        dmatrix![ONE, ZERO; ZERO, C64::from_polar(1.0, lambda)],
        OperatorKind::Unitary,
    ))
}

/// Matrix of the reservoir-mediated rotation at reservoir phase `theta`:
/// `|0> -> cos|0> - i e^{i theta} sin|1>`, `|1> -> cos|1> - i e^{-i theta} sin|0>`.
pub fn number_rotation_matrix(theta_prime: f64, theta: f64) -> DMatrix<C64> {
    let (s, c) = theta_prime.sin_cos();
    let mi = C64::new(0.0, -1.0);
    dmatrix![
        C64::new(c, 0.0), mi * C64::from_polar(s, -theta);
        mi * C64::from_polar(s, theta), C64::new(c, 0.0)
    ]
}

/// Number rotation at a fixed reservoir phase.
pub fn number_rotation_at(
    register: &ModeRegister,
    mode: &str,
    theta_prime: f64,
    theta: f64,
) -> Result<LinearOperator> {
    let reg = qubit(register, mode)?;
    let theta_prime = finite(theta_prime, "rotation angle")?;
    Ok(LinearOperator::new_unchecked(
        reg,
        number_rotation_matrix(theta_prime, theta),
        OperatorKind::Unitary,
    ))
}

/// Number rotation by `theta_prime = Omega sqrt(nbar) t / 2`, sampled on the
/// phase grid of `reservoir`. Raises the state's Fourier order by one.
pub fn number_rotation_gate(
    register: &ModeRegister,
    mode: &str,
    theta_prime: f64,
    reservoir: &str,
    frame: &PhaseFrame,
) -> Result<PhasedOperator> {
    let grid = frame.resolve(reservoir)?;
    let ops = grid
        .phases()
        .map(|theta| number_rotation_at(register, mode, theta_prime, theta))
        .collect::<Result<Vec<_>>>()?;
    Ok(PhasedOperator {
        symbol: grid.symbol.clone(),
        order: 1,
        ops,
    })
}

/// Exchange of two hard-core modes with the fermionic sign on `|11>`.
pub fn fermionic_swap_gate(register: &ModeRegister, j: &str, k: &str) -> Result<LinearOperator> {
    let reg = qubit_pair(register, j, k)?;
    Ok(LinearOperator::new_unchecked(
        reg,
        dmatrix![
            ONE, ZERO, ZERO, ZERO;
            ZERO, ZERO, ONE, ZERO;
            ZERO, ONE, ZERO, ZERO;
            ZERO, ZERO, ZERO, -ONE
        ],
        OperatorKind::Unitary,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HoppingConvention {
    /// `exp(-iHt)` for `H = -J/2 (a_j^dag a_k + h.c.)` on the hard-core space.
    Evolution,
    /// [`HoppingConvention::Evolution`] conjugated by `diag(1, i)` on mode k, which turns the `i` on the
    /// transferred amplitude into `+1`. Identity at angle 0; angle pi/4 maps
    /// `|10>` to `(|10> + |01>)/sqrt 2`.
    RealRotation,
}

/// Single-particle hopping between two qubit modes with `angle = J t / 2`.
pub fn hopping_gate(
    register: &ModeRegister,
    j: &str,
    k: &str,
    angle: f64,
    convention: HoppingConvention,
) -> Result<LinearOperator> {
    let reg = qubit_pair(register, j, k)?;
    let (s, c) = finite(angle, "hopping angle")?.sin_cos();
    let c = C64::new(c, 0.0);
    let (t01, t10) = match convention {
        HoppingConvention::Evolution => (C64::new(0.0, s), C64::new(0.0, s)),
        HoppingConvention::RealRotation => (C64::new(-s, 0.0), C64::new(s, 0.0)),
    };
    // basis |00>, |01>, |10>, |11> over (j, k); column = input
    Ok(LinearOperator::new_unchecked(
        reg,
        dmatrix![
            ONE, ZERO, ZERO, ZERO;
            ZERO, c, t10, ZERO;
            ZERO, t01, c, ZERO;
            ZERO, ZERO, ZERO, ONE
        ],
        OperatorKind::Unitary,
    ))
}

/// How an angle is specified: directly in radians, or through the physical
/// coupling and pulse duration (hbar = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Angle {
    Direct(f64),
    /// Phase gate: `lambda = energy * time`.
    Bias {
        energy: f64,
        time: f64,
    },
    /// Number rotation: `theta' = rabi * sqrt(nbar) * time / 2`.
    Raman {
        rabi: f64,
        nbar: f64,
        time: f64,
    },
    /// Hopping: `angle = tunneling * time / 2`.
    Tunneling {
        tunneling: f64,
        time: f64,
    },
}

impl Angle {
    pub fn radians(self) -> Result<f64> {
        let v = match self {
            Angle::Direct(a) => a,
            Angle::Bias { energy, time } => energy * time,
            Angle::Raman { rabi, nbar, time } => {
                if nbar.is_nan() || nbar < 0.0 {
                    return Err(Error::InvalidParameter(format!("mean occupation {nbar}")));
                }
                rabi * nbar.sqrt() * time / 2.0
            }
            Angle::Tunneling { tunneling, time } => tunneling * time / 2.0,
        };
        finite(v, "angle")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GateSpec {
    Phase {
        mode: String,
        angle: Angle,
    },
    NumberRotation {
        mode: String,
        angle: Angle,
        reservoir: String,
    },
    FermionicSwap {
        j: String,
        k: String,
    },
    Hopping {
        j: String,
        k: String,
        angle: Angle,
        convention: HoppingConvention,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    Fixed(LinearOperator),
    Phased(PhasedOperator),
}

impl GateSpec {
    pub fn build(&self, register: &ModeRegister, frame: &PhaseFrame) -> Result<Gate> {
        Ok(match self {
            GateSpec::Phase { mode, angle } => {
                Gate::Fixed(phase_gate(register, mode, angle.radians()?)?)
            }
            GateSpec::NumberRotation {
                mode,
                angle,
                reservoir,
            } => Gate::Phased(number_rotation_gate(
                register,
                mode,
                angle.radians()?,
                reservoir,
                frame,
            )?),
            GateSpec::FermionicSwap { j, k } => Gate::Fixed(fermionic_swap_gate(register, j, k)?),
            GateSpec::Hopping {
                j,
                k,
                angle,
                convention,
            } => Gate::Fixed(hopping_gate(register, j, k, angle.radians()?, *convention)?),
        })
    }
}

impl Gate {
    pub fn apply(&self, state: &QuantumState) -> Result<QuantumState> {
        match self {
            Gate::Fixed(op) => embed_and_apply(state, op),
            Gate::Phased(op) => apply_phased(state, op),
        }
    }

    /// Max unitarity deviation over every grid instance.
    pub fn unitarity_deviation(&self) -> f64 {
        match self {
            Gate::Fixed(op) => crate::fock::unitarity_deviation(op.matrix()),
            Gate::Phased(p) => p
                .ops
                .iter()
                .map(|o| crate::fock::unitarity_deviation(o.matrix()))
                .fold(0.0, f64::max),
        }
    }
}

/// Build and apply a sequence of gates in order.
pub fn run_circuit(
    state: &QuantumState,
    gates: &[GateSpec],
    frame: &PhaseFrame,
) -> Result<QuantumState> {
    gates.iter().try_fold(state.clone(), |s, g| {
        g.build(s.register(), frame)?.apply(&s)
    })
}
