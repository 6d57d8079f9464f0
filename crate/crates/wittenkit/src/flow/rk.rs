//! Embedded Dormand–Prince 5(4) integrator with PI step control.

use super::error::FlowError;

#[derive(Debug, Clone)]
pub struct RkOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for RkOptions {
    fn default() -> Self {
        RkOptions {
            rtol: 1e-10,
            atol: 1e-12,
            max_steps: 1_000_000,
        }
    }
}

impl RkOptions {
    pub fn with_tol(tol: f64) -> Self {
        RkOptions {
            rtol: tol,
            atol: tol * 1e-2,
            max_steps: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RkStats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evaluations: usize,
}

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
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrates `dy/dt = rhs(t, y)` from `t0` to `t1` (either direction).
/// The observer sees every accepted step `(t, y)` including the initial
/// state; local error is controlled against `atol + rtol·|y|` with a PI
/// controller.
pub fn integrate_rk45<R>(
    mut rhs: R,
    t0: f64,
    t1: f64,
    y0: &[f64],
    options: &RkOptions,
    mut observer: impl FnMut(f64, &[f64]),
) -> Result<(Vec<f64>, RkStats), FlowError>
where
    R: FnMut(f64, &[f64], &mut [f64]) -> Result<(), FlowError>,
{
    let n = y0.len();
    let mut y = y0.to_vec();
    let mut t = t0;
    let span = t1 - t0;
    if span == 0.0 {
        observer(t, &y);
        return Ok((y, RkStats::default()));
    }
    let direction = span.signum();
    let mut h = span.abs().min(0.05 * span.abs().max(1e-3)) * direction;
    let mut stats = RkStats::default();
    let mut k = vec![vec![0.0f64; n]; 7];
    let mut err_prev: f64 = 1.0;
    let mut consecutive_failures = 0usize;

    observer(t, &y);
    rhs(t, &y, &mut k[0])?;
    stats.rhs_evaluations += 1;

    while (t1 - t) * direction > 0.0 {
        if stats.accepted + stats.rejected > options.max_steps {
            return Err(FlowError::MaxStepsExceeded(options.max_steps));
        }
        if h.abs() < 1e-14 * (1.0 + t.abs()) {
            return Err(FlowError::StepSizeUnderflow { tau: t, step: h });
        }
        if (t + h - t1) * direction > 0.0 {
            h = t1 - t;
        }
        // stages
        let mut stage_error = None;
        for stage in 0..6 {
            let mut ys = y.clone();
            for (j, kj) in k.iter().enumerate().take(stage + 1) {
                let a = A[stage][j];
                if a != 0.0 {
                    for i in 0..n {
                        ys[i] += h * a * kj[i];
                    }
                }
            }
            let ts = t + C[stage] * h;
            let (_, tail) = k.split_at_mut(stage + 1);
            if let Err(e) = rhs(ts, &ys, &mut tail[0]) {
                stage_error = Some(e);
                break;
            }
            stats.rhs_evaluations += 1;
        }
        if let Some(e) = stage_error {
            // A guard tripped at a trial stage point. Retry with a smaller
            // step in case the stage overshot; a genuine violation near the
            // trajectory keeps failing and is surfaced.
            consecutive_failures += 1;
            if consecutive_failures > 40 {
                return Err(e);
            }
            h *= 0.25;
            stats.rejected += 1;
            continue;
        }
        consecutive_failures = 0;

        let mut y5 = y.clone();
        let mut err_vec = vec![0.0f64; n];
        for i in 0..n {
            let mut acc5 = 0.0;
            let mut acc_err = 0.0;
            for (j, kj) in k.iter().enumerate() {
                acc5 += B5[j] * kj[i];
                acc_err += (B5[j] - B4[j]) * kj[i];
            }
            y5[i] += h * acc5;
            err_vec[i] = h * acc_err;
        }
        let mut err: f64 = 0.0;
        for i in 0..n {
            let scale = options.atol + options.rtol * y[i].abs().max(y5[i].abs());
            err += (err_vec[i] / scale) * (err_vec[i] / scale);
        }
        err = (err / n as f64).sqrt().max(1e-18);

        if err <= 1.0 {
            t += h;
            y = y5;
            stats.accepted += 1;
            observer(t, &y);
            // FSAL: stage 7 of the accepted step is the first of the next
            k[0] = k[6].clone();
            // PI controller (orders: error ~ h^5)
            let factor = 0.9 * err.powf(-0.7 / 5.0) * err_prev.powf(0.4 / 5.0);
            err_prev = err;
            h *= factor.clamp(0.2, 5.0);
        } else {
            stats.rejected += 1;
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
        }
    }
    Ok((y, stats))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let (y, _) = integrate_rk45(
            |_, y, dy| {
                dy[0] = -y[0];
                Ok(())
            },
            0.0,
            1.0,
            &[1.0],
            &RkOptions::with_tol(1e-12),
            |_, _| {},
        )
        .unwrap();
        assert!((y[0] - (-1.0f64).exp()).abs() < 1e-11);
    }

    #[test]
    fn backward_integration_round_trip() {
        let opts = RkOptions::with_tol(1e-12);
        let rhs = |t: f64, y: &[f64], dy: &mut [f64]| {
            dy[0] = y[1] + t;
            dy[1] = -y[0];
            Ok(())
        };
        let (fwd, _) = integrate_rk45(rhs, 0.0, 2.0, &[1.0, 0.5], &opts, |_, _| {}).unwrap();
        let (back, _) = integrate_rk45(rhs, 2.0, 0.0, &fwd, &opts, |_, _| {}).unwrap();
        assert!((back[0] - 1.0).abs() < 1e-9);
        assert!((back[1] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn error_scales_with_tolerance() {
        let exact = (1.0f64).exp();
        let run = |tol: f64| {
            let (y, _) = integrate_rk45(
                |_, y, dy| {
                    dy[0] = y[0];
                    Ok(())
                },
                0.0,
                1.0,
                &[1.0],
                &RkOptions::with_tol(tol),
                |_, _| {},
            )
            .unwrap();
            (y[0] - exact).abs()
        };
        let coarse = run(1e-6);
        let fine = run(1e-9);
        assert!(fine < coarse, "fine {fine} coarse {coarse}");
    }
}
