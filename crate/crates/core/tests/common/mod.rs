#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rootdatum::classify::F2Matrix;
use rootdatum::exact_linear::Matrix;

/// Nonzero, non-unit diagonal entries of the Smith form of an integer matrix.
pub fn smith_invariants(m: &[Vec<i64>]) -> Vec<i64> {
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry in the remaining block as pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for r in a.iter_mut() {
            r.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            let q = a[i][t] / a[t][t];
            for j in t..cols {
                a[i][j] -= q * a[t][j];
            }
            clean &= a[i][t] == 0;
        }
        for j in t + 1..cols {
            let q = a[t][j] / a[t][t];
            for i in t..rows {
                a[i][j] -= q * a[i][t];
            }
            clean &= a[t][j] == 0;
        }
        if !clean {
            continue;
        }
        // the pivot must divide the rest of the block
        let mut bad = None;
        for i in t + 1..rows {
            for j in t + 1..cols {
                if a[i][j] % a[t][t] != 0 {
                    bad = Some(i);
                }
            }
        }
        if let Some(i) = bad {
            for j in t..cols {
                a[t][j] += a[i][j];
            }
            continue;
        }
        diag.push(a[t][t].abs() as i64);
        t += 1;
    }
    diag.into_iter().filter(|&d| d != 1).collect()
}

/// p-primary parts `> 1` of a list of invariant factors, ascending.
pub fn p_parts(factors: &[i64], p: i64) -> Vec<i64> {
    let mut out: Vec<i64> = factors
        .iter()
        .map(|&d| {
            let mut q = 1;
            let mut d = d;
            while d % p == 0 {
                d /= p;
                q *= p;
            }
            q
        })
        .filter(|&q| q > 1)
        .collect();
    out.sort_unstable();
    out
}

/// A product of random elementary integer matrices.
pub fn random_unimodular(rng: &mut ChaCha8Rng, n: usize, steps: usize) -> Matrix {
    let mut m = vec![vec![0i64; n]; n];
    for (i, r) in m.iter_mut().enumerate() {
        r[i] = 1;
    }
    if n < 2 {
        if rng.gen_bool(0.5) {
            m[0][0] = -1;
        }
        return Matrix::from_i64(&m);
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c: i64 = rng.gen_range(-2..=2);
        for k in 0..n {
            m[i][k] += c * m[j][k];
        }
        if rng.gen_bool(0.2) {
            m.swap(i, j);
        }
    }
    Matrix::from_i64(&m)
}

pub fn random_invertible_f2(rng: &mut ChaCha8Rng, n: usize) -> F2Matrix {
    loop {
        let bits: Vec<bool> = (0..n * n).map(|_| rng.gen_bool(0.5)).collect();
        let m = F2Matrix::from_fn(n, n, |i, j| bits[i * n + j]);
        if m.inverse().is_some() {
            return m;
        }
    }
}
