//! Bracketing root search on uniform grids.

/// `n` equally spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n).map(|i| if i == n - 1 { hi } else { lo + step * i as f64 }).collect()
        }
    }
}

/// Bisection on a bracket with `f(lo)` and `f(hi)` of opposite sign. Stops
/// when the bracket is narrower than `tol` or can no longer be split in
/// floating point. Returns whichever end has the smaller |f|.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut flo = f(lo);
    let mut fhi = f(hi);
    if flo == 0.0 {
        return lo;
    }
    if fhi == 0.0 {
        return hi;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    if flo.abs() <= fhi.abs() {
        lo
    } else {
        hi
    }
}

/// Every sign change of `f` over the grid, refined by bisection.
pub fn bracket_roots<F: Fn(f64) -> f64>(f: &F, grid: &[f64], tol: f64) -> Vec<f64> {
    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let mut roots = Vec::new();
    for i in 0..grid.len().saturating_sub(1) {
        let (a, b) = (values[i], values[i + 1]);
        if !a.is_finite() || !b.is_finite() {
            continue;
        }
        if a == 0.0 {
            roots.push(grid[i]);
        } else if b != 0.0 && (a < 0.0) != (b < 0.0) {
            roots.push(bisect(f, grid[i], grid[i + 1], tol));
        }
    }
    if let (Some(&last), Some(&x)) = (values.last(), grid.last()) {
        if last == 0.0 {
            roots.push(x);
        }
    }
    roots
}

/// Golden-section minimization of a unimodal `f` on [lo, hi].
pub fn golden_min<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 < f2 {
        x1
    } else {
        x2
    }
}

/// Merge sorted values closer than `tol`.
pub fn dedup_sorted(values: &mut Vec<f64>, tol: f64) {
    values.sort_by(|a, b| a.total_cmp(b));
    values.dedup_by(|b, a| (*b - *a).abs() <= tol);
}
