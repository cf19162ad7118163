//! Discrete Legendre–Fenchel transform on a log grid.
//!
//! `φ` is sampled on a uniform grid in `y`, the lower convex hull of the
//! samples is built once, and each query `sup_y (s·y − φ(y))` locates its
//! hull vertex by binary search before a golden-section refinement against
//! the true `φ`. The grid is stretched to the right until the end slope of
//! `φ` exceeds the largest requested `s`, or a hard cap is reached.

/// Largest `y` ever sampled.
pub const Y_CAP: f64 = 700.0;

/// Margin of the end-slope test for `+inf`.
pub const SLOPE_MARGIN: f64 = 1e-6;

pub struct LegendreGrid<'a> {
    phi: &'a (dyn Fn(f64) -> f64 + Sync),
    ys: Vec<f64>,
    vals: Vec<f64>,
    hull: Vec<usize>,
    edge_slopes: Vec<f64>,
    end_slope: f64,
    capped: bool,
}

impl<'a> LegendreGrid<'a> {
    /// Sample `φ` on `[y_lo, y_hi]` with `per_unit` points per unit of `y`,
    /// extending `y_hi` while the end slope stays below `s_max`.
    pub fn new(phi: &'a (dyn Fn(f64) -> f64 + Sync), y_lo: f64, y_hi: f64, per_unit: f64, s_max: f64) -> Self {
        let decade = std::f64::consts::LN_10;
        let mut hi = y_hi.max(y_lo + decade);
        let slope_at = |h: f64| (phi(h) - phi(h - decade)) / decade;
        while hi < Y_CAP && slope_at(hi) < s_max {
            hi = (hi * 2.0).min(Y_CAP);
        }
        let end_slope = slope_at(hi);
        let capped = hi >= Y_CAP;
        let n = ((hi - y_lo) * per_unit).ceil() as usize;
        let ys: Vec<f64> = (0..=n)
            .map(|i| if i == n { hi } else { y_lo + (hi - y_lo) * i as f64 / n as f64 })
            .collect();
        let vals: Vec<f64> = ys.iter().map(|&y| phi(y)).collect();
        let hull = lower_hull(&ys, &vals);
        let edge_slopes = hull
            .windows(2)
            .map(|w| (vals[w[1]] - vals[w[0]]) / (ys[w[1]] - ys[w[0]]))
            .collect();
        LegendreGrid { phi, ys, vals, hull, edge_slopes, end_slope, capped }
    }

    pub fn end_slope(&self) -> f64 {
        self.end_slope
    }

    /// True when the grid reached the cap without the slope exceeding `s_max`.
    pub fn capped(&self) -> bool {
        self.capped
    }

    /// `sup_y (s·y − φ(y))` over the grid range, `+inf` when the objective is
    /// still increasing at the right end. Returns the value and the maximiser.
    pub fn conjugate(&self, s: f64) -> (f64, f64) {
        if s - self.end_slope > SLOPE_MARGIN {
            return (f64::INFINITY, f64::INFINITY);
        }
        if self.hull.is_empty() {
            return (f64::NEG_INFINITY, f64::NAN);
        }
        let k = self.edge_slopes.partition_point(|&m| m < s);
        let i = self.hull[k];
        let mut best_y = self.ys[i];
        let mut best = s * best_y - self.vals[i];
        let lo = self.ys[i.saturating_sub(1)];
        let hi = self.ys[(i + 1).min(self.ys.len() - 1)];
        let (y, v) = golden_max(|y| s * y - (self.phi)(y), lo, hi);
        if v > best {
            best = v;
            best_y = y;
        }
        (best, best_y)
    }
}

fn lower_hull(xs: &[f64], ys: &[f64]) -> Vec<usize> {
    let mut hull: Vec<usize> = Vec::new();
    for i in 0..xs.len() {
        if !ys[i].is_finite() {
            continue;
        }
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (xs[b] - xs[a]) * (ys[i] - ys[a]) - (ys[b] - ys[a]) * (xs[i] - xs[a]);
            if cross <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    hull
}

/// Golden-section search for the maximum of `f` on `[a, b]`.
pub fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if (b - a).abs() <= 1e-14 * 1f64.max(a.abs()) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_conjugate_is_entropy() {
        let phi = |y: f64| y.exp();
        let grid = LegendreGrid::new(&phi, 0.0, 13.8, 222.0, 50.0);
        for s in [1.0, 2.0, 10.0, 50.0] {
            let (v, _) = grid.conjugate(s);
            let exact = s * s.ln() - s;
            assert!((v - exact).abs() < 1e-10 * exact.abs().max(1.0), "s = {s}: {v} vs {exact}");
        }
    }

    #[test]
    fn linear_phi_is_finite_only_up_to_its_slope() {
        let phi = |y: f64| y;
        let grid = LegendreGrid::new(&phi, 0.0, 13.8, 222.0, 10.0);
        assert!(grid.capped());
        assert_eq!(grid.conjugate(0.5).0, 0.0);
        assert_eq!(grid.conjugate(1.0).0, 0.0);
        assert_eq!(grid.conjugate(1.01).0, f64::INFINITY);
    }
}
