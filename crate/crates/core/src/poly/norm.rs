/// Sup of `f` on `[a, b]`: dense Chebyshev-node sampling, then golden-section
/// refinement around the largest local maxima.
pub fn sup_norm_by(f: impl Fn(f64) -> f64, a: f64, b: f64, degree: usize) -> f64 {
    let n = (20 * (degree + 1)).max(1000);
    sup_norm_grid(f, a, b, n)
}

pub fn sup_norm_grid(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    if a == b {
        return f(a);
    }
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    // Ascending nodes with the endpoints included.
    let mut xs = Vec::with_capacity(n + 2);
    xs.push(a);
    for i in (0..n).rev() {
        let t = (std::f64::consts::PI * (i as f64 + 0.5) / n as f64).cos();
        xs.push(mid + half * t);
    }
    xs.push(b);
    let vals: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut best = vals.iter().cloned().fold(0.0, f64::max);

    let mut peaks: Vec<usize> = (1..xs.len() - 1)
        .filter(|&i| vals[i] >= vals[i - 1] && vals[i] >= vals[i + 1])
        .collect();
    peaks.sort_by(|&i, &j| vals[j].total_cmp(&vals[i]));
    peaks.truncate(24);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for i in peaks {
        let (mut lo, mut hi) = (xs[i - 1], xs[i + 1]);
        let mut x1 = hi - g * (hi - lo);
        let mut x2 = lo + g * (hi - lo);
        let (mut f1, mut f2) = (f(x1), f(x2));
        for _ in 0..60 {
            if f1 > f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - g * (hi - lo);
                f1 = f(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + g * (hi - lo);
                f2 = f(x2);
            }
            if hi - lo < 1e-15 {
                break;
            }
        }
        best = best.max(f1).max(f2);
    }
    best
}
