use serde::{Deserialize, Serialize};

use super::{mean, variance, StatsError};
use crate::special::student_t_two_sided;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TTestKind {
    /// Unequal variances, Welch-Satterthwaite degrees of freedom.
    #[default]
    Welch,
    /// Equal variances, pooled estimate, `n_x + n_y - 2` degrees of freedom.
    Pooled,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TTest {
    pub t: f64,
    pub df: f64,
    /// Two-sided.
    pub p: f64,
    /// Both groups had zero variance, so `t` is 0 (equal means) or infinite.
    pub degenerate: bool,
}

pub fn welch_t_test(x: &[f64], y: &[f64]) -> Result<TTest, StatsError> {
    t_test(x, y, TTestKind::Welch)
}

/// Two-sample t-test of `mean(x) - mean(y)`.
pub fn t_test(x: &[f64], y: &[f64], kind: TTestKind) -> Result<TTest, StatsError> {
    let (nx, ny) = (x.len(), y.len());
    if nx < 2 || ny < 2 {
        return Err(StatsError::TooFewSamples { x: nx, y: ny });
    }
    let (nxf, nyf) = (nx as f64, ny as f64);
    let diff = mean(x) - mean(y);
    let (vx, vy) = (variance(x), variance(y));

    if vx == 0.0 && vy == 0.0 {
        let df = nxf + nyf - 2.0;
        return Ok(if diff == 0.0 {
            TTest {
                t: 0.0,
                df,
                p: 1.0,
                degenerate: true,
            }
        } else {
            TTest {
                t: f64::INFINITY.copysign(diff),
                df,
                p: 0.0,
                degenerate: true,
            }
        });
    }

    let (t, df) = match kind {
        TTestKind::Welch => {
            let (ax, ay) = (vx / nxf, vy / nyf);
            let se2 = ax + ay;
            let df = se2 * se2 / (ax * ax / (nxf - 1.0) + ay * ay / (nyf - 1.0));
            (diff / se2.sqrt(), df)
        }
        TTestKind::Pooled => {
            let df = nxf + nyf - 2.0;
            let sp2 = ((nxf - 1.0) * vx + (nyf - 1.0) * vy) / df;
            (diff / (sp2 * (1.0 / nxf + 1.0 / nyf)).sqrt(), df)
        }
    };
    Ok(TTest {
        t,
        df,
        p: student_t_two_sided(t, df),
        degenerate: false,
    })
}
