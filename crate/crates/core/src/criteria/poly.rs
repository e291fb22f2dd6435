//! Small dense polynomials with real coefficients, and their real roots via
//! companion-matrix eigenvalues.
//!
//! Coefficients are stored in ascending order: `c[0] + c[1] t + c[2] t^2 ...`.

use nalgebra::{DMatrix, Schur};

/// Product of two coefficient vectors.
pub(crate) fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Sum of two coefficient vectors.
pub(crate) fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len().max(b.len())];
    for (i, &ai) in a.iter().enumerate() {
        out[i] += ai;
    }
    for (i, &bi) in b.iter().enumerate() {
        out[i] += bi;
    }
    out
}

pub(crate) fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|&c| c * s).collect()
}

/// Horner evaluation.
pub(crate) fn eval(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ck| acc * t + ck)
}

pub(crate) fn derivative(c: &[f64]) -> Vec<f64> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(k, &ck)| k as f64 * ck)
        .collect()
}

/// A candidate counts as a root when its residual is this small relative to
/// the polynomial's magnitude scale at that point (i.e. it is an exact root
/// of some tiny relative perturbation of the coefficients).
const BACKWARD_TOL: f64 = 1e-8;

/// Real roots of the polynomial, each polished by a few Newton steps.
///
/// Exactly-zero leading coefficients are trimmed, so the effective degree
/// may be lower than `c.len() - 1`. Tiny nonzero leading coefficients are
/// kept: the balanced companion eigenproblem stays conditioned, and the
/// huge roots they carry are simply returned for the caller to score.
/// Eigenvalues with imaginary dust are projected onto the real axis and
/// polished rather than discarded, so a real root can never be lost to
/// rounding; whatever fails the backward-error test afterwards was genuinely
/// complex. Returns an empty vector for constant (or identically zero)
/// polynomials and for any polynomial with a non-finite coefficient.
pub(crate) fn real_roots(c: &[f64]) -> Vec<f64> {
    if c.iter().any(|v| !v.is_finite()) {
        return Vec::new();
    }
    let mut deg = c.len().saturating_sub(1);
    while deg > 0 && c[deg] == 0.0 {
        deg -= 1;
    }
    let c = &c[..=deg];
    let mut roots = roots_by_degree(c);
    polish(&mut roots, c);
    roots.retain(|&t| is_numerical_root(t, c));
    dedupe(&mut roots);
    roots
}

/// Backward-error acceptance: |p(t)| measured against the scale
/// `sum_k |c_k| |t|^k` that mere coefficient rounding could produce.
fn is_numerical_root(t: f64, c: &[f64]) -> bool {
    if !t.is_finite() {
        return false;
    }
    let mut val = 0.0f64;
    let mut magnitude = 0.0f64;
    for &ck in c.iter().rev() {
        val = val * t + ck;
        magnitude = magnitude * t.abs() + ck.abs();
    }
    val.abs() <= BACKWARD_TOL * magnitude
}

/// Dispatch on the (already trimmed) degree.
fn roots_by_degree(c: &[f64]) -> Vec<f64> {
    match c.len() - 1 {
        0 => Vec::new(),
        1 => vec![-c[0] / c[1]],
        2 => quadratic_roots(c[0], c[1], c[2]),
        _ => companion_roots(c),
    }
}

fn quadratic_roots(c0: f64, c1: f64, c2: f64) -> Vec<f64> {
    let disc = c1 * c1 - 4.0 * c2 * c0;
    if disc < 0.0 {
        return Vec::new();
    }
    // The numerically stable pairing: avoid cancellation in the larger root.
    let q = -0.5 * (c1 + c1.signum() * disc.sqrt());
    if q == 0.0 {
        return vec![0.0];
    }
    vec![q / c2, c0 / q]
}

/// Eigenvalues of the balanced companion matrix of the monic polynomial.
fn companion_roots(c: &[f64]) -> Vec<f64> {
    let n = c.len() - 1;
    let monic: Vec<f64> = c[..n].iter().map(|ck| ck / c[n]).collect();
    if monic.iter().any(|m| !m.is_finite()) {
        // The leading coefficient is so small that its roots overflow f64;
        // only the lower-degree part contributes representable roots.
        return drop_leading_coefficient(c);
    }
    let mut companion = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        companion[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        companion[(i, n - 1)] = -monic[i];
    }
    balance(&mut companion);
    // Bound the QR iterations: the unbounded default can cycle forever on
    // pathological inputs. Non-convergence falls back to the next lower
    // degree, whose roots the caller still scores on the exact objective.
    let Some(schur) = Schur::try_new(companion, f64::EPSILON, 500) else {
        return drop_leading_coefficient(c);
    };
    // Real parts only: genuinely complex pairs are weeded out afterwards by
    // the backward-error test, while nearly-real ones get rescued by the
    // Newton polish.
    schur.complex_eigenvalues().iter().map(|z| z.re).collect()
}

/// Diagonal similarity scaling with power-of-two factors (exact in floating
/// point) equalizing row and column norms. Companion matrices of
/// polynomials whose roots span many magnitudes are heavily graded, and the
/// QR iteration loses the small eigenvalues without this step.
fn balance(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for _ in 0..100 {
        let mut converged = true;
        for i in 0..n {
            let row: f64 = (0..n).filter(|&j| j != i).map(|j| m[(i, j)].abs()).sum();
            let col: f64 = (0..n).filter(|&j| j != i).map(|j| m[(j, i)].abs()).sum();
            if row == 0.0 || col == 0.0 || !row.is_finite() || !col.is_finite() {
                continue;
            }
            // Find the power of two bringing the scaled column norm
            // col * factor^2 within a factor of two of the row norm.
            let mut factor = 1.0f64;
            let mut scaled_col = col;
            while scaled_col < row / 2.0 {
                factor *= 2.0;
                scaled_col *= 4.0;
            }
            while scaled_col > row * 2.0 {
                factor /= 2.0;
                scaled_col /= 4.0;
            }
            if !factor.is_finite() || factor == 0.0 {
                continue;
            }
            // Apply only when it shrinks the combined norm noticeably.
            if col * factor + row / factor < 0.95 * (col + row) {
                converged = false;
                for j in 0..n {
                    m[(i, j)] /= factor;
                }
                for j in 0..n {
                    m[(j, i)] *= factor;
                }
            }
        }
        if converged {
            break;
        }
    }
}

/// Roots of the polynomial with its leading coefficient removed (and any
/// newly exposed zero coefficients trimmed).
fn drop_leading_coefficient(c: &[f64]) -> Vec<f64> {
    let mut m = c.len() - 2;
    while m > 0 && c[m] == 0.0 {
        m -= 1;
    }
    roots_by_degree(&c[..=m])
}

/// A few guarded Newton iterations on the original polynomial.
fn polish(roots: &mut [f64], c: &[f64]) {
    let dc = derivative(c);
    for t in roots.iter_mut() {
        let mut best = *t;
        let mut best_val = eval(c, best).abs();
        let mut cur = best;
        for _ in 0..8 {
            let d = eval(&dc, cur);
            if d == 0.0 {
                break;
            }
            cur -= eval(c, cur) / d;
            if !cur.is_finite() {
                break;
            }
            let val = eval(c, cur).abs();
            if val < best_val {
                best_val = val;
                best = cur;
            } else {
                break;
            }
        }
        *t = best;
    }
}

/// Drops near-duplicate roots so each critical point is examined once.
fn dedupe(roots: &mut Vec<f64>) {
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-10 * (1.0 + a.abs().max(b.abs())));
}
