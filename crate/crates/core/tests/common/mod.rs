//! Brute-force reference implementations that share no code with the library:
//! explicit Kronecker products of 2x2 gates, a Taylor-series exponential, and
//! closed-form two-level blocks for the reservoir coupling.

#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_4, PI, TAU};

use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64 as C;

pub fn c(re: f64) -> C {
    C::new(re, 0.0)
}

pub fn rot(tp: f64, th: f64) -> Matrix2<C> {
    let (s, co) = tp.sin_cos();
    let i = C::i();
    Matrix2::new(
        c(co),
        -i * C::from_polar(s, -th),
        -i * C::from_polar(s, th),
        c(co),
    )
}

pub fn phase(l: f64) -> Matrix2<C> {
    Matrix2::new(c(1.0), c(0.0), c(0.0), C::from_polar(1.0, l))
}

fn dyn2(m: &Matrix2<C>) -> DMatrix<C> {
    DMatrix::from_fn(2, 2, |r, k| m[(r, k)])
}

/// Operator `m` acting on qubit `pos` of `n` qubits, first qubit most significant.
pub fn on(m: &Matrix2<C>, pos: usize, n: usize) -> DMatrix<C> {
    let mut out = DMatrix::from_element(1, 1, c(1.0));
    for q in 0..n {
        let f = if q == pos {
            dyn2(m)
        } else {
            DMatrix::identity(2, 2)
        };
        out = out.kronecker(&f);
    }
    out
}

/// Fermionic swap of adjacent qubits `(pos, pos + 1)` of `n`.
pub fn fswap(pos: usize, n: usize) -> DMatrix<C> {
    let mut s = DMatrix::<C>::zeros(4, 4);
    s[(0, 0)] = c(1.0);
    s[(1, 2)] = c(1.0);
    s[(2, 1)] = c(1.0);
    s[(3, 3)] = c(-1.0);
    let left = DMatrix::<C>::identity(1 << pos, 1 << pos);
    let right = DMatrix::<C>::identity(1 << (n - pos - 2), 1 << (n - pos - 2));
    left.kronecker(&s).kronecker(&right)
}

pub fn grid(m: usize) -> Vec<f64> {
    (0..m).map(|j| TAU * j as f64 / m as f64).collect()
}

/// Three-qubit state (a, A, B) just before Alice's read-out.
pub fn teleport_state(tp: f64, phi: f64, th_c: f64, th_a: f64) -> DVector<C> {
    let mut v = DVector::<C>::zeros(8);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    v[0b010] = c(r);
    v[0b001] = c(r);
    let ops = [
        on(&rot(tp, th_c), 0, 3),
        on(&phase(phi), 0, 3),
        on(&rot(FRAC_PI_4, th_a), 1, 3),
        fswap(0, 3),
        on(&rot(FRAC_PI_4, th_a), 0, 3),
        on(&rot(FRAC_PI_4, th_a), 1, 3),
    ];
    for op in ops {
        v = op * v;
    }
    v
}

/// Bob's unnormalized amplitudes `[<n_a n_A 0|v>, <n_a n_A 1|v>]`.
pub fn bob_part(v: &DVector<C>, n_a: usize, n_alice: usize) -> [C; 2] {
    let base = (n_a << 2) | (n_alice << 1);
    [v[base], v[base | 1]]
}

pub fn target(tp: f64, phi: f64, th_c: f64) -> [C; 2] {
    [c(tp.cos()), -C::i() * C::from_polar(tp.sin(), th_c + phi)]
}

pub fn overlap_sq(x: [C; 2], y: [C; 2]) -> f64 {
    (x[0].conj() * y[0] + x[1].conj() * y[1]).norm_sqr()
}

pub struct TeleportOracle {
    /// Mean of `P(n_a = 0)` over both grids.
    pub success: f64,
    /// Worst per-point `|1 - F|` on the success branches after correction.
    pub fidelity_gap: f64,
    /// Mode-A state on the failure branch, twirled over both phases.
    pub failure_alice: Matrix2<C>,
    /// Best per-`theta_C` fidelity of Bob's failure state, twirled over `theta_A`.
    pub failure_bob_best: f64,
    /// Bob's unconditional state, twirled.
    pub bob: Matrix2<C>,
}

pub fn teleport_oracle(tp: f64, phi: f64, m: usize) -> TeleportOracle {
    let g = grid(m);
    let mut success = 0.0;
    let mut gap = 0.0f64;
    let mut fail_a = Matrix2::<C>::zeros();
    let mut fail_p = 0.0;
    let mut bob = Matrix2::<C>::zeros();
    let mut best = 0.0f64;
    for &tc in &g {
        let mut bob_fail = Matrix2::<C>::zeros();
        let mut bob_fail_p = 0.0;
        for &ta in &g {
            let v = teleport_state(tp, phi, tc, ta);
            for n_a in 0..2 {
                for n_alice in 0..2 {
                    let b = bob_part(&v, n_a, n_alice);
                    let p = b[0].norm_sqr() + b[1].norm_sqr();
                    bob += Matrix2::new(
                        b[0] * b[0].conj(),
                        b[0] * b[1].conj(),
                        b[1] * b[0].conj(),
                        b[1] * b[1].conj(),
                    );
                    if n_a == 0 {
                        success += p;
                        let sign = if n_alice == 1 { -1.0 } else { 1.0 };
                        let corrected = [b[0] / p.sqrt(), b[1] * sign / p.sqrt()];
                        gap = gap.max((1.0 - overlap_sq(target(tp, phi, tc), corrected)).abs());
                    } else {
                        fail_p += p;
                        bob_fail_p += p;
                        bob_fail += Matrix2::new(
                            b[0] * b[0].conj(),
                            b[0] * b[1].conj(),
                            b[1] * b[0].conj(),
                            b[1] * b[1].conj(),
                        );
                        fail_a[(n_alice, n_alice)] += c(p);
                    }
                }
            }
        }
        let t = target(tp, phi, tc);
        let rho = bob_fail / c(bob_fail_p);
        let f = (t[0].conj() * rho[(0, 0)] * t[0]
            + t[0].conj() * rho[(0, 1)] * t[1]
            + t[1].conj() * rho[(1, 0)] * t[0]
            + t[1].conj() * rho[(1, 1)] * t[1])
            .re;
        best = best.max(f);
    }
    let n = (m * m) as f64;
    TeleportOracle {
        success: success / n,
        fidelity_gap: gap,
        failure_alice: fail_a / c(fail_p),
        failure_bob_best: best,
        bob: bob / c(n),
    }
}

/// Bell-analysis outcome probabilities `[p00, p01, p10, p11]` on modes (a, A)
/// for an input given by its four amplitudes.
pub fn bell_oracle(input: [f64; 4], th: f64) -> [f64; 4] {
    let mut v = DVector::from_iterator(4, input.iter().map(|x| c(*x)));
    v /= c(v.norm());
    for op in [
        on(&rot(FRAC_PI_4, th), 1, 2),
        fswap(0, 2),
        on(&rot(FRAC_PI_4, th), 0, 2),
        on(&rot(FRAC_PI_4, th), 1, 2),
    ] {
        v = op * v;
    }
    [
        v[0].norm_sqr(),
        v[1].norm_sqr(),
        v[2].norm_sqr(),
        v[3].norm_sqr(),
    ]
}

/// Dense-coding outcome probabilities `[p00, p01, p10, p11]` on (A, B) at
/// encoding phase `te` and decoding phase `td`.
pub fn dense_oracle(message: u8, te: f64, td: f64) -> [f64; 4] {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = DVector::from_vec(vec![c(0.0), c(r), c(r), c(0.0)]);
    let z = on(&phase(PI), 0, 2);
    let x = on(&rot(std::f64::consts::FRAC_PI_2, te), 0, 2);
    v = match message {
        0 => v,
        1 => &z * v,
        2 => &x * v,
        _ => &x * (&z * v),
    };
    for op in [
        on(&rot(FRAC_PI_4, td), 1, 2),
        fswap(0, 2),
        on(&rot(FRAC_PI_4, td), 0, 2),
        on(&rot(FRAC_PI_4, td), 1, 2),
    ] {
        v = op * v;
    }
    [
        v[0].norm_sqr(),
        v[1].norm_sqr(),
        v[2].norm_sqr(),
        v[3].norm_sqr(),
    ]
}

/// `exp(-i H t)` by scaling and squaring a truncated Taylor series.
pub fn expm_taylor(h: &DMatrix<C>, t: f64) -> DMatrix<C> {
    let a = h * C::new(0.0, -t);
    let norm = a.iter().map(|z| z.norm()).sum::<f64>();
    let s = (norm.max(1.0).log2().ceil() as i32 + 4).max(0);
    let a = a / c(2f64.powi(s));
    let n = h.nrows();
    let mut term = DMatrix::<C>::identity(n, n);
    let mut sum = term.clone();
    for k in 1..30 {
        term = &term * &a / c(k as f64);
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

fn ladder_up(d: usize) -> DMatrix<C> {
    DMatrix::from_fn(d, d, |r, k| {
        if r == k + 1 {
            c((r as f64).sqrt())
        } else {
            c(0.0)
        }
    })
}

/// Swap infidelity of two-mode Bose-Hubbard hopping (cutoff 3), with the
/// output phases aligned on |00>, |01>, |10> and the |11> phase implied, and
/// after a direct two-dimensional search over both free relative phases,
/// which can only be lower.
pub fn hopping_swap_oracle(u: f64) -> (f64, f64) {
    let d = 3;
    let up = ladder_up(d);
    let id = DMatrix::<C>::identity(d, d);
    let ca = up.kronecker(&id);
    let cb = id.kronecker(&up);
    let hop = &ca * cb.adjoint() + &cb * ca.adjoint();
    let na = &ca * ca.adjoint();
    let nb = &cb * cb.adjoint();
    let onsite = |n: &DMatrix<C>| n * (n - DMatrix::<C>::identity(9, 9));
    let h = hop * c(-0.5) + (onsite(&na) + onsite(&nb)) * c(u);
    let prop = expm_taylor(&h, PI);
    // qubit basis |00>,|01>,|10>,|11> -> indices in the 3x3 space, targets of the fermionic swap
    let idx = [0, 1, 3, 4];
    let swap_to = [(0, 1.0), (2, 1.0), (1, 1.0), (3, -1.0)];
    let coef: Vec<C> = (0..4)
        .map(|i| {
            let (j, sign) = swap_to[i];
            prop[(idx[j], idx[i])] * sign
        })
        .collect();
    // reorder so coef_out[j] is the overlap landing on output row j
    let mut row = [c(0.0); 4];
    for i in 0..4 {
        row[swap_to[i].0] = coef[i];
    }
    let closed = {
        let a = row[0].arg() - row[1].arg();
        let b = row[0].arg() - row[2].arg();
        let tot = row[0]
            + row[1] * C::from_polar(1.0, a)
            + row[2] * C::from_polar(1.0, b)
            + row[3] * C::from_polar(1.0, a + b);
        1.0 - tot.norm_sqr() / 16.0
    };
    let fid = |a: f64, b: f64| {
        (row[0]
            + row[1] * C::from_polar(1.0, a)
            + row[2] * C::from_polar(1.0, b)
            + row[3] * C::from_polar(1.0, a + b))
        .norm_sqr()
            / 16.0
    };
    // coarse grid, then compass search with a shrinking step
    let steps = 360;
    let mut at = (0.0, 0.0);
    let mut best = fid(0.0, 0.0);
    for i in 0..steps {
        for j in 0..steps {
            let (a, b) = (TAU * i as f64 / steps as f64, TAU * j as f64 / steps as f64);
            let v = fid(a, b);
            if v > best {
                best = v;
                at = (a, b);
            }
        }
    }
    let mut h = TAU / steps as f64;
    while h > 1e-12 {
        let mut moved = false;
        for (da, db) in [
            (h, 0.0),
            (-h, 0.0),
            (0.0, h),
            (0.0, -h),
            (h, h),
            (-h, -h),
            (h, -h),
            (-h, h),
        ] {
            let v = fid(at.0 + da, at.1 + db);
            if v > best {
                best = v;
                at = (at.0 + da, at.1 + db);
                moved = true;
            }
        }
        if !moved {
            h /= 2.0;
        }
    }
    (closed.max(0.0), (1.0 - best).max(0.0))
}

fn poisson_amplitudes(nbar: f64, cutoff: usize, theta: f64) -> Vec<C> {
    let mut w = Vec::with_capacity(cutoff);
    let mut log_fact = 0.0f64;
    for n in 0..cutoff {
        if n > 0 {
            log_fact += (n as f64).ln();
        }
        w.push(0.5 * (-nbar + n as f64 * nbar.ln() - log_fact));
    }
    let amps: Vec<C> = w
        .iter()
        .enumerate()
        .map(|(n, lw)| C::from_polar(lw.exp(), n as f64 * theta))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    amps.into_iter().map(|a| a / norm).collect()
}

/// Deviation of a qubit coupled to a truncated coherent reservoir from the
/// ideal quarter rotation, using the exact two-level blocks of the exchange
/// coupling `(a^dag b + a b^dag)/2` at time `pi / (2 sqrt nbar)`.
pub fn reservoir_oracle(nbar: f64, cutoff: usize, theta: f64) -> f64 {
    let amps = poisson_amplitudes(nbar, cutoff, theta);
    let t = PI / (2.0 * nbar.sqrt());
    let ideal = rot(FRAC_PI_4, theta);
    let mut worst = 0.0f64;
    for input in 0..2 {
        // psi[q][k]: qubit occupation q, reservoir occupation k
        let mut psi = vec![vec![c(0.0); cutoff]; 2];
        for (k, a) in amps.iter().enumerate() {
            if input == 0 {
                let w = (k as f64).sqrt() * t / 2.0;
                psi[0][k] += a * w.cos();
                if k > 0 {
                    psi[1][k - 1] += -C::i() * a * w.sin();
                }
            } else if k + 1 < cutoff {
                let w = ((k + 1) as f64).sqrt() * t / 2.0;
                psi[1][k] += a * w.cos();
                psi[0][k + 1] += -C::i() * a * w.sin();
            } else {
                psi[1][k] += *a;
            }
        }
        let rho =
            |i: usize, j: usize| -> C { (0..cutoff).map(|k| psi[i][k] * psi[j][k].conj()).sum() };
        let tv = [ideal[(0, input)], ideal[(1, input)]];
        let d00 = rho(0, 0) - tv[0] * tv[0].conj();
        let d01 = rho(0, 1) - tv[0] * tv[1].conj();
        worst = worst.max((d00.re * d00.re + d01.norm_sqr()).sqrt());
    }
    worst
}

/// Entropy in bits of the reduced state of a two-mode pure state given as a
/// coefficient matrix, via its singular values.
pub fn schmidt_entropy(coeffs: &DMatrix<C>) -> f64 {
    coeffs
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .map(|s| s * s)
        .filter(|p| *p > 1e-15)
        .map(|p| -p * p.log2())
        .sum()
}
