//! Adaptive Dormand-Prince 5(4) integration onto a uniform output grid.

/// Why an integration run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OdeStatus {
    /// All requested grid points were produced.
    Completed,
    /// The monitor callback asked to stop; samples up to and including the
    /// stopping grid point are returned.
    StoppedByMonitor,
    /// The controller could not make progress above the minimum step size.
    StepUnderflow,
    /// The step budget was exhausted.
    MaxSteps,
}

pub struct OdeOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rel_tol: 1e-10,
            abs_tol: 1e-10,
            max_steps: 1_000_000,
        }
    }
}

// Dormand-Prince 5(4) tableau.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
// difference between the 5th- and embedded 4th-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrates `y' = f(t, y)` from `t0`, emitting states at
/// `t0 + k * grid_step` for `k = 1..=n_grid`. `grid_step` may be negative.
///
/// The adaptive step never crosses a grid point, so grid samples are exact
/// integration states rather than interpolants. `monitor` sees every grid
/// sample and returns `false` to stop the run early (the offending sample is
/// still emitted). Non-finite right-hand sides reject the trial step and
/// shrink, which confines the solver to the domain of `f`.
pub fn integrate_to_grid<const N: usize, F, M>(
    f: F,
    t0: f64,
    y0: [f64; N],
    grid_step: f64,
    n_grid: usize,
    opts: &OdeOptions,
    mut monitor: M,
) -> (Vec<[f64; N]>, OdeStatus)
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    M: FnMut(f64, &[f64; N]) -> bool,
{
    assert!(grid_step != 0.0);
    let dir = grid_step.signum();
    let mut out = Vec::with_capacity(n_grid + 1);
    out.push(y0);

    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    let mut h = (grid_step.abs() / 4.0).min(0.1) * dir;
    let h_min = grid_step.abs() * 1e-12 + f64::EPSILON;
    let mut steps = 0usize;
    let mut next_grid = 1usize;

    while next_grid <= n_grid {
        if steps >= opts.max_steps {
            return (out, OdeStatus::MaxSteps);
        }
        steps += 1;

        let t_target = t0 + grid_step * next_grid as f64;
        let mut hitting_grid = false;
        if (t_target - t) * dir <= h.abs() * 1.0001 {
            h = t_target - t;
            hitting_grid = true;
        }
        if h.abs() < h_min {
            return (out, OdeStatus::StepUnderflow);
        }

        // six stages plus the FSAL stage
        let mut k = [[0.0; N]; 7];
        k[0] = k1;
        let mut finite = true;
        for stage in 0..6 {
            let mut yi = y;
            for j in 0..=stage {
                let a = A[stage][j];
                if a != 0.0 {
                    for d in 0..N {
                        yi[d] += h * a * k[j][d];
                    }
                }
            }
            k[stage + 1] = f(t + C[stage] * h, &yi);
            if k[stage + 1].iter().any(|v| !v.is_finite()) {
                finite = false;
                break;
            }
        }

        let (y_new, err_norm) = if finite {
            let mut y_new = y;
            for j in 0..6 {
                let b = A[5][j]; // 5th-order weights coincide with the last stage row
                if b != 0.0 {
                    for d in 0..N {
                        y_new[d] += h * b * k[j][d];
                    }
                }
            }
            let mut err_sq = 0.0;
            for d in 0..N {
                let mut e = 0.0;
                for j in 0..7 {
                    e += E[j] * k[j][d];
                }
                e *= h;
                let scale = opts.abs_tol + opts.rel_tol * y[d].abs().max(y_new[d].abs());
                err_sq += (e / scale) * (e / scale);
            }
            (y_new, (err_sq / N as f64).sqrt())
        } else {
            (y, f64::INFINITY)
        };

        if err_norm <= 1.0 && y_new.iter().all(|v| v.is_finite()) {
            t += h;
            y = y_new;
            k1 = k[6]; // FSAL
            if hitting_grid {
                out.push(y);
                if !monitor(t, &y) {
                    return (out, OdeStatus::StoppedByMonitor);
                }
                next_grid += 1;
            }
        }

        let factor = if err_norm.is_finite() && err_norm > 0.0 {
            (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0)
        } else if err_norm == 0.0 {
            5.0
        } else {
            0.2
        };
        h = (h.abs() * factor).max(0.0) * dir;
        if h.abs() < h_min {
            return (out, OdeStatus::StepUnderflow);
        }
    }
    (out, OdeStatus::Completed)
}
