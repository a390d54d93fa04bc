//! Invariant degrees of a finite reflection group from its Molien series.

use std::collections::HashMap;

use crate::exact_linear::{Matrix, Scalar};
use crate::group_engine::MatrixGroup;

/// Power series `1/f` truncated to `len` terms; requires `f[0] = 1`.
fn inverse_series(f: &[Scalar], len: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); len];
    if len == 0 {
        return out;
    }
    out[0] = Scalar::one();
    for k in 1..len {
        let mut acc = Scalar::zero();
        for j in 1..=k.min(f.len() - 1) {
            acc = &acc + &(&f[j] * &out[k - j]);
        }
        out[k] = -acc;
    }
    out
}

/// Coefficients of `det(1 − t·w)`, lowest degree first.
fn det_one_minus_tw(w: &Matrix) -> Vec<Scalar> {
    let c = w.char_poly();
    let n = w.rows();
    (0..=n).map(|j| c[n - j].clone()).collect()
}

/// Molien series `(1/|W|)·Σ 1/det(1 − t·w)` up to `t^(len−1)`, summed once per
/// characteristic polynomial.
pub fn molien_series(w: &MatrixGroup, len: usize) -> Vec<Scalar> {
    let mut counts: HashMap<Vec<Scalar>, usize> = HashMap::new();
    for e in w.elements() {
        *counts.entry(det_one_minus_tw(e)).or_default() += 1;
    }
    let mut total = vec![Scalar::zero(); len];
    for (f, count) in &counts {
        let s = inverse_series(f, len);
        let c = Scalar::from_int(*count as i64);
        for (t, x) in total.iter_mut().zip(&s) {
            *t = &*t + &(&c * x);
        }
    }
    let inv = Scalar::from_ratio(1, w.order() as i64);
    total.iter().map(|x| x * &inv).collect()
}

/// Degrees `d₁ ≤ … ≤ d_n` with `Molien = ∏ 1/(1 − t^{dᵢ})`, found by peeling
/// off the lowest nonconstant term `n` times.
pub fn invariant_degrees(w: &MatrixGroup) -> Vec<usize> {
    let n = w.degree();
    let len = w.reflections().len() + 3;
    let mut series = molien_series(w, len);
    let mut degrees = Vec::with_capacity(n);
    for _ in 0..n {
        let Some(k) = (1..len).find(|&k| !series[k].is_zero()) else {
            break;
        };
        // multiply by (1 − t^k)
        for i in (k..len).rev() {
            let prev = series[i - k].clone();
            series[i] = &series[i] - &prev;
        }
        degrees.push(k);
    }
    degrees
}
