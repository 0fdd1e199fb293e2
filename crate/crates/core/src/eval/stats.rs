use serde::{Deserialize, Serialize};

use super::EvalError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Deviation {
    /// Divides by `n − 1`; a single value has deviation 0.
    #[default]
    Sample,
    Population,
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Midpoint of the two central values for an even count.
pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

pub fn std_dev(xs: &[f64], kind: Deviation) -> f64 {
    let n = xs.len();
    let denom = match kind {
        Deviation::Sample if n < 2 => return 0.0,
        Deviation::Sample => (n - 1) as f64,
        Deviation::Population => n as f64,
    };
    let m = mean(xs);
    (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / denom).sqrt()
}

/// Rounds halves upward at `decimals` places. The value is first snapped
/// to 1e-9 so that 3.305 stored as 3.30499999... still rounds up.
pub fn round_half_up(x: f64, decimals: u32) -> f64 {
    let snapped = (x * 1e9).round() / 1e9;
    let scale = 10f64.powi(decimals as i32);
    (snapped * scale + 0.5).floor() / scale
}

/// Two-tailed critical values of Student's t, df 1..=30.
const T_05: [f64; 30] = [
    12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228, 2.201, 2.179, 2.160, 2.145, 2.131, 2.120,
    2.110, 2.101, 2.093, 2.086, 2.080, 2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042,
];
const T_01: [f64; 30] = [
    63.657, 9.925, 5.841, 4.604, 4.032, 3.707, 3.499, 3.355, 3.250, 3.169, 3.106, 3.055, 3.012, 2.977, 2.947, 2.921,
    2.898, 2.878, 2.861, 2.845, 2.831, 2.819, 2.807, 2.797, 2.787, 2.779, 2.771, 2.763, 2.756, 2.750,
];

pub fn critical_t(df: usize, alpha: f64) -> Result<f64, EvalError> {
    let table = if alpha == 0.05 {
        &T_05
    } else if alpha == 0.01 {
        &T_01
    } else {
        return Err(EvalError::UnsupportedAlpha(alpha.to_string()));
    };
    if !(1..=30).contains(&df) {
        return Err(EvalError::UnsupportedDegrees(df));
    }
    Ok(table[df - 1])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TTest {
    /// `±∞` when every difference is the same non-zero value.
    pub t: f64,
    pub df: usize,
    pub critical: f64,
    pub significant: bool,
    /// All differences were equal.
    pub zero_variance: bool,
}

/// Paired two-tailed t-test on `a − b`.
pub fn paired_t_test(a: &[f64], b: &[f64], alpha: f64) -> Result<TTest, EvalError> {
    if a.len() != b.len() {
        return Err(EvalError::LengthMismatch(a.len(), b.len()));
    }
    let n = a.len();
    if n < 2 {
        return Err(EvalError::TooFewPairs);
    }
    let df = n - 1;
    let critical = critical_t(df, alpha)?;
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let m = mean(&d);
    let sd = std_dev(&d, Deviation::Sample);
    if sd == 0.0 {
        let t = if m == 0.0 { 0.0 } else { f64::INFINITY.copysign(m) };
        return Ok(TTest {
            t,
            df,
            critical,
            significant: m != 0.0,
            zero_variance: true,
        });
    }
    let t = m / (sd / (n as f64).sqrt());
    Ok(TTest {
        t,
        df,
        critical,
        significant: t.abs() > critical,
        zero_variance: false,
    })
}
