//! Nelder-Mead minimization in two dimensions.

#[derive(Debug, Clone)]
pub struct SimplexOptions {
    pub max_iter: usize,
    /// Converged when the spread of objective values across the simplex is
    /// at most `ftol * (1 + |f_best|)`.
    pub ftol: f64,
    /// Initial step along each coordinate.
    pub step: [f64; 2],
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            max_iter: 500,
            ftol: 1e-10,
            step: [0.1, 0.005],
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimplexResult {
    pub x: [f64; 2],
    pub f: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Best objective value after each iteration.
    pub trace: Vec<f64>,
}

/// Minimizes `f` from `start`. Non-finite objective values are treated as
/// `+inf`, so the search retreats from them.
pub fn nelder_mead<F>(mut f: F, start: [f64; 2], opts: &SimplexOptions) -> SimplexResult
where
    F: FnMut([f64; 2]) -> f64,
{
    let mut eval = |x: [f64; 2]| {
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };
    let mut pts = [
        start,
        [start[0] + opts.step[0], start[1]],
        [start[0], start[1] + opts.step[1]],
    ];
    let mut vals = [eval(pts[0]), eval(pts[1]), eval(pts[2])];
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    let comb = |a: [f64; 2], b: [f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];

    while iterations < opts.max_iter {
        let mut order = [0usize, 1, 2];
        order.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
        pts = [pts[order[0]], pts[order[1]], pts[order[2]]];
        vals = [vals[order[0]], vals[order[1]], vals[order[2]]];

        let spread = vals[2] - vals[0];
        if spread <= opts.ftol * (1.0 + vals[0].abs()) {
            converged = true;
            break;
        }
        iterations += 1;

        let centroid = [(pts[0][0] + pts[1][0]) / 2.0, (pts[0][1] + pts[1][1]) / 2.0];
        let xr = comb(centroid, pts[2], -1.0);
        let fr = eval(xr);
        if fr < vals[0] {
            let xe = comb(centroid, pts[2], -2.0);
            let fe = eval(xe);
            if fe < fr {
                pts[2] = xe;
                vals[2] = fe;
            } else {
                pts[2] = xr;
                vals[2] = fr;
            }
        } else if fr < vals[1] {
            pts[2] = xr;
            vals[2] = fr;
        } else {
            let (xc, fc) = if fr < vals[2] {
                let xc = comb(centroid, xr, 0.5);
                (xc, eval(xc))
            } else {
                let xc = comb(centroid, pts[2], 0.5);
                (xc, eval(xc))
            };
            if fc < vals[2].min(fr) {
                pts[2] = xc;
                vals[2] = fc;
            } else {
                for i in 1..3 {
                    pts[i] = comb(pts[0], pts[i], 0.5);
                    vals[i] = eval(pts[i]);
                }
            }
        }
        trace.push(vals.iter().copied().fold(f64::INFINITY, f64::min));
    }

    let best = (0..3).min_by(|&i, &j| vals[i].total_cmp(&vals[j])).unwrap_or(0);
    SimplexResult {
        x: pts[best],
        f: vals[best],
        iterations,
        converged,
        trace,
    }
}
