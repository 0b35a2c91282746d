//! Gauss-Legendre quadrature and tabulated distribution functions, used as
//! independent oracles for the samplers.

use std::f64::consts::PI;

/// Nodes and weights of the `order`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1);
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let n = order as f64;
    for i in 0..(order + 1) / 2 {
        let mut x = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // three-term recurrence for P_n(x) and P_{n-1}(x)
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=order {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            let pn = if order == 1 { x } else { p1 };
            let pm = if order == 1 { 1.0 } else { p0 };
            dp = n * (x * pn - pm) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    (nodes, weights)
}

/// Composite Gauss-Legendre integral of `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize, order: usize) -> f64 {
    let (x, w) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + h / 2.0;
        for (xi, wi) in x.iter().zip(&w) {
            total += wi * f(mid + xi * h / 2.0);
        }
    }
    total * h / 2.0
}

/// Distribution function of an unnormalized density on `[lo, hi]`,
/// tabulated cell by cell and interpolated linearly.
#[derive(Debug, Clone)]
pub struct TabulatedCdf {
    lo: f64,
    hi: f64,
    values: Vec<f64>,
}

impl TabulatedCdf {
    pub fn from_density<F: Fn(f64) -> f64>(density: F, lo: f64, hi: f64, cells: usize) -> Self {
        assert!(hi > lo && cells >= 1);
        let (x, w) = gauss_legendre(8);
        let h = (hi - lo) / cells as f64;
        let mut values = Vec::with_capacity(cells + 1);
        values.push(0.0);
        let mut acc = 0.0;
        for c in 0..cells {
            let mid = lo + (c as f64 + 0.5) * h;
            let cell: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * density(mid + xi * h / 2.0)).sum();
            acc += cell * h / 2.0;
            values.push(acc);
        }
        let total = acc;
        for v in &mut values {
            *v /= total;
        }
        Self { lo, hi, values }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= self.lo {
            return 0.0;
        }
        if x >= self.hi {
            return 1.0;
        }
        let cells = self.values.len() - 1;
        let pos = (x - self.lo) / (self.hi - self.lo) * cells as f64;
        let i = (pos.floor() as usize).min(cells - 1);
        let frac = pos - i as f64;
        self.values[i] + frac * (self.values[i + 1] - self.values[i])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        for order in 1..12 {
            let (x, w) = gauss_legendre(order);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            let deg = 2 * order - 1;
            let integral: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32 - 1)).sum();
            let exact = if (deg - 1) % 2 == 0 { 2.0 / deg as f64 } else { 0.0 };
            assert!((integral - exact).abs() < 1e-13, "order {order}");
        }
    }

    #[test]
    fn composite_integral() {
        let v = integrate(|x| x.sin(), 0.0, PI, 8, 8);
        assert!((v - 2.0).abs() < 1e-13);
    }

    #[test]
    fn tabulated_uniform() {
        let t = TabulatedCdf::from_density(|_| 3.0, -1.0, 1.0, 16);
        assert!((t.cdf(0.0) - 0.5).abs() < 1e-14);
        assert!((t.cdf(0.37) - 0.685).abs() < 1e-12);
        assert_eq!(t.cdf(-5.0), 0.0);
        assert_eq!(t.cdf(5.0), 1.0);
    }
}
