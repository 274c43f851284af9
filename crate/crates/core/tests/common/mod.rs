//! Test-only oracles and fixtures shared by the integration tests.

#![allow(dead_code)]

use std::cmp::Ordering;

/// `(class, hwy)` rows of the vendored mpg table.
pub fn mpg_rows() -> Vec<(String, f64)> {
    let text = include_str!("../fixtures/mpg.csv");
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').map(|h| h.trim_matches('"')).collect();
    let class = header.iter().position(|&h| h == "class").unwrap();
    let hwy = header.iter().position(|&h| h == "hwy").unwrap();
    lines
        .filter(|l| !l.is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[class].trim_matches('"').to_string(), f[hwy].parse().unwrap())
        })
        .collect()
}

/// Medcouple by brute force over ordered index pairs of the original data.
///
/// Pairs `(a, b)` with `z_a <= 0 <= z_b` around the median contribute the
/// kernel `(z_b + z_a) / (z_b - z_a)`; pairs of two median-tied points score
/// `sign(i + j - 1 - k)` from their ranks `i`, `j` among the `k` tied points.
pub fn medcouple_oracle(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len();
    let med = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    };
    let z: Vec<f64> = values.iter().map(|&x| x - med).collect();
    let tied: Vec<usize> = (0..n).filter(|&i| z[i] == 0.0).collect();
    let k = tied.len() as i64;
    let rank = |i: usize| tied.iter().position(|&t| t == i).unwrap() as i64 + 1;

    let mut h = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let (za, zb) = (z[a], z[b]);
            if !(za <= 0.0 && zb >= 0.0) {
                continue;
            }
            if za == 0.0 && zb == 0.0 {
                h.push(match (rank(a) + rank(b) - 1).cmp(&k) {
                    Ordering::Less => -1.0,
                    Ordering::Equal => 0.0,
                    Ordering::Greater => 1.0,
                });
            } else {
                h.push((zb + za) / (zb - za));
            }
        }
    }
    h.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let m = h.len();
    if m % 2 == 1 {
        h[m / 2]
    } else {
        (h[m / 2 - 1] + h[m / 2]) / 2.0
    }
}

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson on `[a, b]`.
pub fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fb) = (f(a), f(b));
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson(&f, a, b, fa, fm, fb, whole, tol, 48)
}

/// Integral of a density over the real line, split at zero, each half
/// mapped onto `[0, 1)` by `x = t / (1 - t)^2`.
pub fn simpson_total_mass(pdf: impl Fn(f64) -> f64) -> f64 {
    let half = |sign: f64| {
        adaptive_simpson(
            |t: f64| {
                if t >= 1.0 {
                    return 0.0;
                }
                let w = 1.0 - t;
                let x = t / (w * w);
                let jac = (1.0 + t) / (w * w * w);
                let y = pdf(sign * x) * jac;
                if y.is_finite() {
                    y
                } else {
                    0.0
                }
            },
            0.0,
            1.0,
            1e-11,
        )
    };
    half(-1.0) + half(1.0)
}
