//! Locating the maximum of a smooth function on an interval: a dense scan
//! followed by golden-section refinement around every local maximum.

/// Golden-section iterations per local maximum. Shrinks each bracket by a
/// factor of about 1e-13.
pub const GOLDEN_ITERATIONS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalMax {
    pub location: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scan {
    pub maxima: Vec<LocalMax>,
    pub grid_size: usize,
    pub refinement_depth: usize,
}

impl Scan {
    pub fn worst(&self) -> LocalMax {
        self.maxima
            .iter()
            .copied()
            .max_by(|a, b| a.value.total_cmp(&b.value))
            .expect("a scan always has at least one maximum")
    }

    pub fn max_value(&self) -> f64 {
        self.worst().value
    }
}

/// `count` Chebyshev-spaced points covering `[lo, hi]`, endpoints included,
/// in increasing order.
pub fn chebyshev_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let count = count.max(2);
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let last = (count - 1) as f64;
    let mut grid: Vec<f64> =
        (0..count).map(|i| mid - half * (std::f64::consts::PI * i as f64 / last).cos()).collect();
    grid[0] = lo;
    grid[count - 1] = hi;
    grid
}

/// Scans `f` on `count` Chebyshev points of `[lo, hi]` and refines each
/// discrete local maximum (endpoints included) by golden-section search
/// inside its neighbouring grid cells.
pub fn scan_maxima(f: impl Fn(f64) -> f64, lo: f64, hi: f64, count: usize) -> Scan {
    if hi <= lo {
        let value = f(lo);
        return Scan { maxima: vec![LocalMax { location: lo, value }], grid_size: 1, refinement_depth: 0 };
    }
    let grid = chebyshev_grid(lo, hi, count);
    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let n = grid.len();
    let mut maxima = Vec::new();
    for i in 0..n {
        let left_ok = i == 0 || values[i] >= values[i - 1];
        let right_ok = i == n - 1 || values[i] >= values[i + 1];
        if !(left_ok && right_ok) {
            continue;
        }
        let a = grid[i.saturating_sub(1)];
        let b = grid[(i + 1).min(n - 1)];
        let refined = golden_max(&f, a, b);
        let best = if refined.value > values[i] { refined } else { LocalMax { location: grid[i], value: values[i] } };
        maxima.push(best);
    }
    Scan { maxima, grid_size: n, refinement_depth: GOLDEN_ITERATIONS }
}

/// Golden-section maximization of `f` on `[a, b]`; also compares the
/// endpoints so a maximum at the boundary is not lost.
pub fn golden_max(f: impl Fn(f64) -> f64, a: f64, b: f64) -> LocalMax {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..GOLDEN_ITERATIONS {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    let candidates = [(x1, f1), (x2, f2), (a, f(a)), (b, f(b))];
    let (location, value) = candidates.into_iter().fold((a, f64::NEG_INFINITY), |acc, c| if c.1 > acc.1 { c } else { acc });
    LocalMax { location, value }
}
