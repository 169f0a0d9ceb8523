//! Embedded Dormand–Prince 5(4) step with PI-free standard step-size control.

use crate::error::{Error, Result};

/// Butcher tableau of the Dormand–Prince 5(4) pair.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
/// 5th-order weights (identical to the last A row: FSAL).
const B5: [f64; 7] =
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
/// Embedded 4th-order weights.
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One accepted adaptive step: new time, state and the step size to try next.
pub struct StepResult<const N: usize> {
    pub t: f64,
    pub y: [f64; N],
    pub h_next: f64,
}

/// Advance one accepted Dormand–Prince step from `(t, y)` with initial trial
/// step `h` (sign gives the direction), not stepping past `t_end`.
///
/// The local error of component `i` is held below `atol + rtol * |y_i|`.
pub fn adaptive_step<const N: usize>(
    f: &mut impl FnMut(f64, &[f64; N]) -> [f64; N],
    t: f64,
    y: &[f64; N],
    mut h: f64,
    t_end: f64,
    atol: f64,
    rtol: f64,
) -> Result<StepResult<N>> {
    let h_floor = 1e-14 * t.abs().max(t_end.abs()).max(1.0);
    loop {
        if (t + h - t_end) * h.signum() > 0.0 {
            h = t_end - t;
        }
        let mut k = [[0.0; N]; 7];
        k[0] = f(t, y);
        for stage in 0..6 {
            let mut ys = *y;
            for (j, kj) in k.iter().enumerate().take(stage + 1) {
                let a = A[stage][j];
                if a != 0.0 {
                    for i in 0..N {
                        ys[i] += h * a * kj[i];
                    }
                }
            }
            k[stage + 1] = f(t + C[stage] * h, &ys);
        }
        let mut y5 = *y;
        let mut err = [0.0; N];
        for (j, kj) in k.iter().enumerate() {
            for i in 0..N {
                y5[i] += h * B5[j] * kj[i];
                err[i] += h * (B5[j] - B4[j]) * kj[i];
            }
        }
        let mut err_norm = 0.0f64;
        for i in 0..N {
            let scale = atol + rtol * y[i].abs().max(y5[i].abs());
            err_norm += (err[i] / scale).powi(2);
        }
        err_norm = (err_norm / N as f64).sqrt();

        let factor = if err_norm == 0.0 {
            5.0
        } else {
            (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0)
        };
        if err_norm <= 1.0 {
            return Ok(StepResult { t: t + h, y: y5, h_next: h * factor });
        }
        h *= factor;
        if h.abs() < h_floor {
            return Err(Error::StepFailure { t, h });
        }
    }
}
