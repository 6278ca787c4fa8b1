//! Quadrature kernels: composite/cumulative Simpson rules on uniform grids
//! and an adaptive 15-point Gauss-Kronrod integrator.

/// Cumulative integral of uniformly spaced samples, anchored at index 0.
///
/// Even indices use composite Simpson increments; odd indices use the
/// asymmetric three-point Newton-Cotes rule, so every prefix is fourth-order
/// accurate. Needs at least three samples.
pub fn cumulative_simpson(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    assert!(n >= 2, "cumulative_simpson needs at least two samples");
    let mut out = vec![0.0; n];
    if n == 2 {
        out[1] = 0.5 * h * (values[0] + values[1]);
        return out;
    }
    for i in 1..n {
        if i % 2 == 1 {
            // integral over [i-1, i] from the parabola through i-1, i, i+1
            // (through i-2, i-1, i at the right edge of the grid)
            if i + 1 < n {
                out[i] =
                    out[i - 1] + h / 12.0 * (5.0 * values[i - 1] + 8.0 * values[i] - values[i + 1]);
            } else {
                out[i] = out[i - 1]
                    + h / 12.0 * (-values[i - 2] + 8.0 * values[i - 1] + 5.0 * values[i]);
            }
        } else {
            out[i] = out[i - 2] + h / 3.0 * (values[i - 2] + 4.0 * values[i - 1] + values[i]);
        }
    }
    out
}

/// Composite Simpson integral of uniformly spaced samples over the whole grid.
pub fn simpson(values: &[f64], h: f64) -> f64 {
    *cumulative_simpson(values, h)
        .last()
        .expect("non-empty sample array")
}

/// Integral of uniformly spaced samples of a periodic function over one
/// period; `values` holds one sample per subinterval (no repeated endpoint).
///
/// The trapezoid rule is spectrally accurate on periodic grids and for them
/// coincides with the periodic composite Simpson rule up to reordering.
pub fn periodic_integral(values: &[f64], h: f64) -> f64 {
    values.iter().sum::<f64>() * h
}

/// Adaptive Gauss-Kronrod integration result.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub error_bound: f64,
    pub evaluations: usize,
}

// 15-point Kronrod abscissae (positive half) with the embedded 7-point
// Gauss rule at the odd entries; tabulated at full published precision.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn qk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut kronrod = WGK[7] * f_center;
    let mut gauss = WG[3] * f_center;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    kronrod *= half;
    gauss *= half;
    (kronrod, (kronrod - gauss).abs())
}

/// Adaptive Gauss-Kronrod quadrature over `[a, b]` by interval bisection.
///
/// Splits the subinterval with the largest error estimate until the summed
/// estimate drops below `abs_tol + rel_tol * |integral|` or `max_splits`
/// bisections have been spent. Integrable endpoint singularities converge
/// through progressive bisection toward the endpoint.
pub fn adaptive_gk<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_splits: usize,
) -> QuadResult {
    struct Seg {
        a: f64,
        b: f64,
        value: f64,
        err: f64,
    }
    let (value, err) = qk15(f, a, b);
    let mut segs = vec![Seg { a, b, value, err }];
    let mut evals = 15;
    for _ in 0..max_splits {
        let total: f64 = segs.iter().map(|s| s.value).sum();
        let total_err: f64 = segs.iter().map(|s| s.err).sum();
        if total_err <= abs_tol + rel_tol * total.abs() {
            break;
        }
        let worst = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .map(|(i, _)| i)
            .unwrap();
        let seg = segs.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            // interval at floating-point resolution; keep it as-is
            segs.push(seg);
            break;
        }
        let (lv, le) = qk15(f, seg.a, mid);
        let (rv, re) = qk15(f, mid, seg.b);
        evals += 30;
        segs.push(Seg {
            a: seg.a,
            b: mid,
            value: lv,
            err: le,
        });
        segs.push(Seg {
            a: mid,
            b: seg.b,
            value: rv,
            err: re,
        });
    }
    QuadResult {
        value: segs.iter().map(|s| s.value).sum(),
        error_bound: segs.iter().map(|s| s.err).sum(),
        evaluations: evals,
    }
}
