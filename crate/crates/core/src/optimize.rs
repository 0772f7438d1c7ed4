//! Derivative-free minimizers: golden-section search on an interval and the
//! Nelder-Mead downhill simplex.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Minimizes `f` on `[a, b]` by golden-section search until the bracket is
/// shorter than `tol`. Returns `(argmin, min)`.
pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    // each step shrinks by 1/phi; 200 steps reach below 1e-40 of the span
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let (mut xm, mut fm) = if fc < fd { (c, fc) } else { (d, fd) };
    // endpoints matter when the minimum sits on the bracket edge
    for x in [a, b] {
        let fx = f(x);
        if fx < fm {
            xm = x;
            fm = fx;
        }
    }
    (xm, fm)
}

/// Multi-start golden section: splits `[a, b]` into `starts` equal
/// sub-intervals and keeps the best local minimum.
pub fn golden_section_multistart<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    starts: usize,
    tol: f64,
) -> (f64, f64) {
    let starts = starts.max(1);
    let h = (b - a) / starts as f64;
    let mut best = (a, f64::INFINITY);
    for i in 0..starts {
        let lo = a + h * i as f64;
        let r = golden_section(&mut f, lo, lo + h, tol);
        if r.1 < best.1 {
            best = r;
        }
    }
    best
}

/// Evaluates `f` on the sorted `nodes` and runs golden section on the
/// bracket around every grid-local minimum.
pub fn golden_section_on_grid<F: FnMut(f64) -> f64>(mut f: F, nodes: &[f64], tol: f64) -> (f64, f64) {
    let vals: Vec<f64> = nodes.iter().map(|&t| f(t)).collect();
    let mut best = (f64::NAN, f64::INFINITY);
    for i in 0..nodes.len() {
        let lo = i.saturating_sub(1);
        let hi = (i + 1).min(nodes.len() - 1);
        if vals[i] > vals[lo] || vals[i] > vals[hi] {
            continue;
        }
        let r = if lo == hi {
            (nodes[i], vals[i])
        } else {
            golden_section(&mut f, nodes[lo], nodes[hi], tol)
        };
        if r.1 < best.1 {
            best = r;
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexOptions {
    pub max_evals: usize,
    /// Stop when every vertex is within this distance of the best one.
    pub xtol: f64,
    /// ... and the spread of values is below `ftol * (1 + |f_best|)`.
    pub ftol: f64,
    /// Edge length of the initial simplex, relative to `max(1, |x0_i|)`.
    pub initial_step: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            max_evals: 2000,
            xtol: 1e-12,
            ftol: 1e-15,
            initial_step: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    pub converged: bool,
}

/// Nelder-Mead minimization. Non-finite objective values count as `+inf`.
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], opts: &SimplexOptions) -> SimplexResult {
    let n = x0.len();
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += opts.initial_step * x0[i].abs().max(1.0);
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| eval(v, &mut evals)).collect();

    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    let mut converged = false;

    while evals < opts.max_evals {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let best = values[0];
        let worst = values[n];
        let size = simplex[1..]
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&simplex[0])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        let spread = if worst.is_finite() { worst - best } else { f64::INFINITY };
        if size <= opts.xtol
            || (best.is_finite() && spread <= opts.ftol * (1.0 + best.abs()) && size <= opts.xtol.sqrt())
        {
            converged = true;
            break;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|v| v[j]).sum::<f64>() / n as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> { centroid.iter().zip(&simplex[n]).map(|(c, w)| c + t * (c - w)).collect() };

        let xr = along(alpha);
        let fr = eval(&xr, &mut evals);
        if fr < values[0] {
            let xe = along(gamma);
            let fe = eval(&xe, &mut evals);
            if fe < fr {
                simplex[n] = xe;
                values[n] = fe;
            } else {
                simplex[n] = xr;
                values[n] = fr;
            }
            continue;
        }
        if fr < values[n - 1] {
            simplex[n] = xr;
            values[n] = fr;
            continue;
        }
        let (xc, fc) = if fr < values[n] {
            let xc = along(rho);
            let fc = eval(&xc, &mut evals);
            (xc, fc)
        } else {
            let xc = along(-rho);
            let fc = eval(&xc, &mut evals);
            (xc, fc)
        };
        if fc < values[n].min(fr) {
            simplex[n] = xc;
            values[n] = fc;
            continue;
        }
        for i in 1..=n {
            let v: Vec<f64> = simplex[0]
                .iter()
                .zip(&simplex[i])
                .map(|(b, x)| b + sigma * (x - b))
                .collect();
            values[i] = eval(&v, &mut evals);
            simplex[i] = v;
        }
    }

    let (ib, _) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty simplex");
    SimplexResult {
        x: simplex[ib].clone(),
        value: values[ib],
        evals,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_minimum() {
        let (x, fx) = golden_section(|x| (x - 0.3).powi(2) + 1.0, -2.0, 2.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-6);
        assert!((fx - 1.0).abs() < 1e-12);
    }

    #[test]
    fn golden_handles_edge_minimum() {
        let (x, _) = golden_section(|x| x, 1.0, 2.0, 1e-12);
        assert_eq!(x, 1.0);
    }

    #[test]
    fn multistart_escapes_local_minimum() {
        let f = |x: f64| (3.0 * x).cos() + 0.1 * x;
        let (x, _) = golden_section_multistart(f, 0.0, 6.0, 8, 1e-12);
        // local minima near pi/3, pi, 5pi/3; the linear term favours the first
        let want = (std::f64::consts::PI - (0.1f64 / 3.0).asin()) / 3.0;
        assert!((x - want).abs() < 1e-5, "{x}");
    }

    #[test]
    fn grid_brackets_narrow_valley() {
        // a deep well of width 3e-3 beside a broad shallow one
        let f = |x: f64| -(-((x - 0.7) / 3e-3).powi(2)).exp() - 0.5 * (-((x - 0.2) / 0.2).powi(2)).exp();
        let (x, _) = golden_section(f, 0.0, 1.0, 1e-12);
        assert!((x - 0.7).abs() > 0.1);
        let nodes: Vec<f64> = (0..=64).map(|i| i as f64 / 64.0).collect();
        let (x, fx) = golden_section_on_grid(f, &nodes, 1e-12);
        assert!((x - 0.7).abs() < 1e-6 && fx < -0.99, "{x} {fx}");
    }

    #[test]
    fn nelder_mead_rosenbrock() {
        let rosen = |v: &[f64]| (1.0 - v[0]).powi(2) + 100.0 * (v[1] - v[0] * v[0]).powi(2);
        let opts = SimplexOptions {
            max_evals: 20_000,
            ..Default::default()
        };
        let r = nelder_mead(rosen, &[-1.2, 1.0], &opts);
        assert!(r.converged);
        assert!((r.x[0] - 1.0).abs() < 1e-5 && (r.x[1] - 1.0).abs() < 1e-5, "{:?}", r.x);
    }

    #[test]
    fn nelder_mead_treats_nan_as_infinite() {
        let f = |v: &[f64]| if v[0] < 0.0 { f64::NAN } else { (v[0] - 1.0).powi(2) };
        let r = nelder_mead(f, &[0.5], &SimplexOptions::default());
        assert!((r.x[0] - 1.0).abs() < 1e-6);
    }
}
