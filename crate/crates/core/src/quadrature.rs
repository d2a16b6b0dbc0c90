//! Gauss-Legendre quadrature, used as an independent oracle for kernel
//! masses and sphere integrals.

use crate::sum::NeumaierSum;

/// Legendre polynomial value and derivative at `x` by the three-term
/// recurrence.
fn legendre_pd(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_pd(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, d) = legendre_pd(n, x);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * d * d);
    }
    nodes.reverse();
    weights.reverse();
    (nodes, weights)
}

/// Gauss-Legendre integral of `f` over `[a, b]` with `n` nodes.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = NeumaierSum::new();
    for (x, w) in nodes.iter().zip(&weights) {
        acc.add(w * f(mid + half * x));
    }
    half * acc.value()
}

/// Trapezoid rule for a periodic integrand over one period `[0, period)`;
/// spectrally accurate for smooth periodic functions.
pub fn integrate_periodic<F: Fn(f64) -> f64>(f: F, period: f64, n: usize) -> f64 {
    let h = period / n as f64;
    let mut acc = NeumaierSum::new();
    for i in 0..n {
        acc.add(f(i as f64 * h));
    }
    h * acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_on_polynomials() {
        // n-point rule is exact through degree 2n-1.
        let v = integrate(|x| x * x * x * x, -1.0, 1.0, 3);
        assert!((v - 0.4).abs() < 1e-14, "{v}");
        let v = integrate(|x| 3.0 * x * x, 0.0, 2.0, 5);
        assert!((v - 8.0).abs() < 1e-13, "{v}");
    }

    #[test]
    fn gaussian_integral() {
        let v = integrate(|x| (-x * x).exp(), -8.0, 8.0, 120);
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-12, "{v}");
    }

    #[test]
    fn weights_sum_to_interval_length() {
        for n in [1, 2, 5, 40, 121] {
            let (_, w) = gauss_legendre(n);
            let s: f64 = w.iter().sum();
            assert!((s - 2.0).abs() < 1e-12, "n={n}: {s}");
        }
    }

    #[test]
    fn periodic_rule_integrates_trig_exactly() {
        let v = integrate_periodic(|x| 1.0 + (3.0 * x).cos(), std::f64::consts::TAU, 16);
        assert!((v - std::f64::consts::TAU).abs() < 1e-12, "{v}");
    }
}
