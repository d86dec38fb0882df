//! Grid scans of the two trigonometric inequalities behind the soundness
//! bound.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::COS_SQ_PI_8;

/// Slack of cos^2(a) + cos^2(b) <= |2 cos^2(a-b) - 1| + 2 cos^2(pi/8);
/// nonnegative everywhere, zero exactly at the optimal angle pairs.
pub fn main_inequality_slack(alpha: f64, beta: f64) -> f64 {
    (2.0 * (alpha - beta).cos().powi(2) - 1.0).abs() + 2.0 * COS_SQ_PI_8
        - alpha.cos().powi(2)
        - beta.cos().powi(2)
}

/// Slack of cos^2(a-b) - 1/2 >= 100 ((cos^2 a + cos^2 b)/2 - 0.851), valid
/// for |alpha| in [3pi/16, pi/2].
pub fn ine2_slack(alpha: f64, beta: f64) -> f64 {
    ((alpha - beta).cos().powi(2) - 0.5)
        - 100.0 * ((alpha.cos().powi(2) + beta.cos().powi(2)) / 2.0 - 0.851)
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TrigScan {
    pub min_slack_main: f64,
    pub min_slack_ine2: f64,
    pub grid_points: usize,
}

/// Scans both inequalities over uniform grids: the main one on
/// [0, 2pi]^2 with ~grid_points total samples, the second over its stated
/// alpha range crossed with beta in [0, 2pi].
pub fn trig_scan(grid_points: usize) -> Result<TrigScan> {
    if grid_points < 1_000 {
        return Err(Error::Validation(format!(
            "grid_points {grid_points} below the minimum of 1000"
        )));
    }
    use std::f64::consts::PI;
    let per_axis = (grid_points as f64).sqrt().floor() as usize;
    let step = 2.0 * PI / per_axis as f64;

    let mut min_main = f64::INFINITY;
    for i in 0..=per_axis {
        let alpha = i as f64 * step;
        for j in 0..=per_axis {
            let beta = j as f64 * step;
            min_main = min_main.min(main_inequality_slack(alpha, beta));
        }
    }

    // alpha in [-pi/2, -3pi/16] u [3pi/16, pi/2], beta free.
    let lo = 3.0 * PI / 16.0;
    let hi = PI / 2.0;
    let alpha_steps = per_axis / 2;
    let alpha_step = (hi - lo) / alpha_steps as f64;
    let mut min_ine2 = f64::INFINITY;
    for i in 0..=alpha_steps {
        let mag = lo + i as f64 * alpha_step;
        for alpha in [mag, -mag] {
            for j in 0..=per_axis {
                let beta = j as f64 * step;
                min_ine2 = min_ine2.min(ine2_slack(alpha, beta));
            }
        }
    }

    Ok(TrigScan {
        min_slack_main: min_main,
        min_slack_ine2: min_ine2,
        grid_points: (per_axis + 1) * (per_axis + 1),
    })
}
