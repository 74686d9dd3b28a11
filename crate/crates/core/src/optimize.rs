//! Bounded one-dimensional minimisation: a coarse grid scan over the whole
//! interval followed by golden-section refinement around the best grid point.

/// `(sqrt(5) - 1) / 2`
const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchSettings {
    pub lo: f64,
    pub hi: f64,
    pub grid_step: f64,
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    pub n_evals: usize,
}

/// Grid points `lo, lo + step, ...`, always ending at `hi`.
pub fn grid_points(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let count = ((hi - lo) / step).floor() as usize;
    let mut pts: Vec<f64> = (0..=count).map(|k| lo + k as f64 * step).collect();
    pts.retain(|&p| p < hi);
    pts.push(hi);
    pts
}

/// Minimise `f` over `[lo, hi]`. `f` returns `None` where it cannot be
/// evaluated; such points are skipped. Returns `None` if no grid point is
/// evaluable.
pub fn grid_golden_minimize<F>(mut f: F, s: SearchSettings) -> Option<Minimum>
where
    F: FnMut(f64) -> Option<f64>,
{
    let mut n_evals = 0usize;
    let mut eval = |x: f64| {
        n_evals += 1;
        f(x).filter(|v| !v.is_nan())
    };

    let grid = grid_points(s.lo, s.hi, s.grid_step);
    let values: Vec<Option<f64>> = grid.iter().map(|&x| eval(x)).collect();
    let (best_idx, best_val) = values
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|v| (i, v)))
        .min_by(|a, b| a.1.total_cmp(&b.1))?;

    let mut a = grid[best_idx.saturating_sub(1)];
    let mut b = grid[(best_idx + 1).min(grid.len() - 1)];
    let score = |v: Option<f64>| v.unwrap_or(f64::INFINITY);

    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = score(eval(c));
    let mut fd = score(eval(d));
    while b - a > s.tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = score(eval(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = score(eval(d));
        }
    }
    let mid = 0.5 * (a + b);
    let f_mid = score(eval(mid));

    let (x, value) = [(grid[best_idx], best_val), (c, fc), (d, fd), (mid, f_mid)]
        .into_iter()
        .min_by(|p, q| p.1.total_cmp(&q.1))
        .expect("non-empty candidate list");
    Some(Minimum { x, value, n_evals })
}
