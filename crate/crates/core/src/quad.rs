//! Gauss-Legendre quadrature, used for density normalization checks and the
//! pushforward oracle.

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
/// Computed by Newton iteration on the Legendre recurrence; accurate to
/// machine precision for the orders used here.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        // Tricomi-style initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre P_n(x) and P_n'(x) via the three-term recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let pk = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = pk;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Integral of f over [a, b] with a composite rule: `panels` panels of the
/// `order`-point Gauss-Legendre rule.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize, order: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for i in 0..panels {
        let lo = a + i as f64 * h;
        let mid = lo + 0.5 * h;
        for (t, w) in nodes.iter().zip(weights.iter()) {
            total += 0.5 * h * w * f(mid + 0.5 * h * t);
        }
    }
    total
}

/// Integral over [a, b] split at the given interior points (kinks of the
/// integrand), each piece integrated with the composite rule.
pub fn integrate_split<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    splits: &[f64],
    panels: usize,
    order: usize,
) -> f64 {
    let mut cuts: Vec<f64> = std::iter::once(a)
        .chain(splits.iter().copied().filter(|&s| s > a && s < b))
        .chain(std::iter::once(b))
        .collect();
    cuts.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let mut total = 0.0;
    for pair in cuts.windows(2) {
        if pair[1] > pair[0] {
            total += integrate(&f, pair[0], pair[1], panels, order);
        }
    }
    total
}
