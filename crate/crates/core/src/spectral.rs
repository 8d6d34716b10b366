//! Periodic spectral tools on `N` equispaced nodes `t_j = 2πj/N` (`N` even).

use std::f64::consts::PI;

use nalgebra::DMatrix;

/// Product-quadrature weights for the logarithmic part of the single layer:
/// `∫_0^{2π} log(4 sin²((t_i − τ)/2)) f(τ) dτ ≈ Σ_j w[(i − j) mod N] f(t_j)`.
///
/// Exact for trigonometric polynomials of degree `N/2`.
pub fn log_weights(n: usize) -> Vec<f64> {
    let half = n / 2;
    let nf = n as f64;
    (0..n)
        .map(|d| {
            let x = 2.0 * PI * d as f64 / nf;
            let mut acc = 0.0;
            for m in 1..half {
                acc += (m as f64 * x).cos() / m as f64;
            }
            let nyquist = if d % 2 == 0 { 1.0 } else { -1.0 };
            -4.0 * PI / nf * acc - 4.0 * PI / (nf * nf) * nyquist
        })
        .collect()
}

/// Fourier differentiation matrix `d/dt` for even `n`; the Nyquist mode is
/// mapped to zero.
pub fn diff_matrix(n: usize) -> DMatrix<f64> {
    let h = 2.0 * PI / n as f64;
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            0.0
        } else {
            let k = i as isize - j as isize;
            let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            0.5 * sign / (0.5 * k as f64 * h).tan()
        }
    })
}

/// Periodic sinc kernel of the band-limited interpolant on `n` nodes.
fn periodic_sinc(n: usize, x: f64) -> f64 {
    let s = (0.5 * x).sin();
    if s.abs() < 1e-14 {
        // x is a multiple of 2π
        return 1.0;
    }
    (0.5 * n as f64 * x).sin() * (0.5 * x).cos() / (s * n as f64)
}

/// Matrix evaluating the trigonometric interpolant of `n` samples at `m`
/// equispaced nodes.
pub fn resample_matrix(n: usize, m: usize) -> DMatrix<f64> {
    DMatrix::from_fn(m, n, |i, j| {
        let ti = 2.0 * PI * i as f64 / m as f64;
        let tj = 2.0 * PI * j as f64 / n as f64;
        periodic_sinc(n, ti - tj)
    })
}

/// Real trigonometric interpolant through equispaced samples (even count),
/// with the Nyquist term split symmetrically.
#[derive(Debug, Clone)]
pub struct TrigInterpolant {
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl TrigInterpolant {
    pub fn from_samples(values: &[f64]) -> Self {
        let n = values.len();
        let half = n / 2;
        let nf = n as f64;
        let mut cos = vec![0.0; half + 1];
        let mut sin = vec![0.0; half + 1];
        for k in 0..=half {
            let (mut a, mut b) = (0.0, 0.0);
            for (j, &v) in values.iter().enumerate() {
                let x = 2.0 * PI * (k * j) as f64 / nf;
                a += v * x.cos();
                b += v * x.sin();
            }
            let scale = if k == 0 || 2 * k == n {
                1.0 / nf
            } else {
                2.0 / nf
            };
            cos[k] = a * scale;
            sin[k] = if 2 * k == n { 0.0 } else { b * scale };
        }
        TrigInterpolant { cos, sin }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.cos
            .iter()
            .zip(&self.sin)
            .enumerate()
            .map(|(k, (a, b))| {
                let x = k as f64 * t;
                a * x.cos() + b * x.sin()
            })
            .sum()
    }

    /// Values at `m` equispaced nodes.
    pub fn sample(&self, m: usize) -> Vec<f64> {
        (0..m)
            .map(|i| self.eval(2.0 * PI * i as f64 / m as f64))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nodes(n: usize) -> Vec<f64> {
        (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect()
    }

    #[test]
    fn log_weights_reproduce_fourier_integrals() {
        // ∫ log(4 sin²(τ/2)) cos(kτ) dτ = −2π/k (k ≥ 1), 0 for k = 0
        let n = 32;
        let w = log_weights(n);
        for k in 0..=n / 2 {
            let q: f64 = nodes(n)
                .iter()
                .enumerate()
                .map(|(j, &t)| w[(n - j) % n] * (k as f64 * t).cos())
                .sum();
            let exact = if k == 0 { 0.0 } else { -2.0 * PI / k as f64 };
            assert!((q - exact).abs() < 1e-13, "k={k}: {q} vs {exact}");
        }
    }

    #[test]
    fn differentiation_is_exact_below_nyquist() {
        let n = 16;
        let d = diff_matrix(n);
        let t = nodes(n);
        for k in 1..n / 2 {
            let f = DMatrix::from_fn(n, 1, |i, _| (k as f64 * t[i]).sin());
            let df = &d * f;
            for i in 0..n {
                assert!((df[(i, 0)] - k as f64 * (k as f64 * t[i]).cos()).abs() < 1e-12);
            }
        }
        let ones = DMatrix::from_element(n, 1, 1.0);
        assert!((&d * ones).amax() < 1e-13);
    }

    #[test]
    fn resampling_matches_interpolant() {
        let n = 12;
        let vals: Vec<f64> = nodes(n)
            .iter()
            .map(|&t| 1.0 + (2.0 * t).cos() - 0.5 * (5.0 * t).sin() + 0.25 * (6.0 * t).cos())
            .collect();
        let interp = TrigInterpolant::from_samples(&vals);
        let up = resample_matrix(n, 36);
        let v = DMatrix::from_column_slice(n, 1, &vals);
        let fine = &up * v;
        let direct = interp.sample(36);
        for i in 0..36 {
            assert!((fine[(i, 0)] - direct[i]).abs() < 1e-12);
        }
        // nodes of the coarse grid are reproduced
        for j in 0..n {
            assert!((direct[3 * j] - vals[j]).abs() < 1e-12);
        }
    }
}
