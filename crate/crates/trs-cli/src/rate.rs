//! Empirical convergence-rate classification from gap sequences: an
//! exponential (linear-rate) fit of log-gap against the iteration counter and
//! a power (sublinear-rate) fit against its logarithm, decided by fit quality.

/// Gaps at or below `GAP_FLOOR * (1 + |baseline|)` are double-precision
/// noise and excluded: differences of objectives stored in f64 quantize at
/// the ulp of the baseline magnitude.
pub const GAP_FLOOR: f64 = 1e-14;

/// Minimum coefficient of determination for a winning fit.
pub const R2_THRESHOLD: f64 = 0.99;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RateLabel {
    Linear,
    Sublinear,
    Inconclusive,
}

impl RateLabel {
    pub fn name(self) -> &'static str {
        match self {
            RateLabel::Linear => "linear",
            RateLabel::Sublinear => "sublinear",
            RateLabel::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct FitLine {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

#[derive(Clone, Debug)]
pub struct RateVerdict {
    pub label: RateLabel,
    /// log(gap) against k.
    pub linear_fit: FitLine,
    /// log(gap) against log(k).
    pub power_fit: FitLine,
    pub tail_fraction: f64,
    pub points_used: usize,
}

fn ols(xs: &[f64], ys: &[f64]) -> FitLine {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return FitLine {
            slope: 0.0,
            intercept: my,
            r2: 0.0,
        };
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = (sxy * sxy) / (sxx * syy);
    FitLine {
        slope,
        intercept,
        r2,
    }
}

/// Classifies the decay of `(iteration, gap)` pairs over the final
/// `tail_fraction` of the entries with gap above the noise floor. `scale`
/// is the magnitude of the objective the gaps were measured against.
pub fn classify_rate_scaled(
    gaps: &[(usize, f64)],
    tail_fraction: f64,
    scale: f64,
) -> RateVerdict {
    let floor = GAP_FLOOR * (1.0 + scale.abs());
    let usable: Vec<(usize, f64)> = gaps
        .iter()
        .copied()
        .filter(|&(k, g)| k >= 1 && g.is_finite() && g > floor)
        .collect();
    let take = ((usable.len() as f64) * tail_fraction).ceil() as usize;
    let tail = &usable[usable.len().saturating_sub(take.max(1))..];
    let inconclusive = RateVerdict {
        label: RateLabel::Inconclusive,
        linear_fit: FitLine {
            slope: 0.0,
            intercept: 0.0,
            r2: 0.0,
        },
        power_fit: FitLine {
            slope: 0.0,
            intercept: 0.0,
            r2: 0.0,
        },
        tail_fraction,
        points_used: tail.len(),
    };
    if tail.len() < 5 {
        return inconclusive;
    }
    let ks: Vec<f64> = tail.iter().map(|&(k, _)| k as f64).collect();
    let log_ks: Vec<f64> = tail.iter().map(|&(k, _)| (k as f64).ln()).collect();
    let log_gaps: Vec<f64> = tail.iter().map(|&(_, g)| g.ln()).collect();
    let linear_fit = ols(&ks, &log_gaps);
    let power_fit = ols(&log_ks, &log_gaps);

    let sublinear_ok = power_fit.r2 >= R2_THRESHOLD && power_fit.slope < 0.0;
    let linear_ok = linear_fit.r2 >= R2_THRESHOLD && linear_fit.slope < 0.0;
    let label = if sublinear_ok && power_fit.r2 > linear_fit.r2 {
        RateLabel::Sublinear
    } else if linear_ok {
        RateLabel::Linear
    } else {
        RateLabel::Inconclusive
    };
    RateVerdict {
        label,
        linear_fit,
        power_fit,
        tail_fraction,
        points_used: tail.len(),
    }
}

/// `classify_rate_scaled` with unit scale (absolute floor 2e-14).
pub fn classify_rate(gaps: &[(usize, f64)], tail_fraction: f64) -> RateVerdict {
    classify_rate_scaled(gaps, tail_fraction, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_geometric_decay_is_linear() {
        let gaps: Vec<(usize, f64)> = (0..400).map(|k| (k, 0.9f64.powi(k as i32))).collect();
        let v = classify_rate(&gaps, 0.5);
        assert_eq!(v.label, RateLabel::Linear);
        assert!(v.linear_fit.r2 >= 0.999, "r2 = {}", v.linear_fit.r2);
        assert!((v.linear_fit.slope - 0.9f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn exact_inverse_square_decay_is_sublinear() {
        let gaps: Vec<(usize, f64)> = (1..5000).map(|k| (k, 1.0 / (k * k) as f64)).collect();
        let v = classify_rate(&gaps, 0.5);
        assert_eq!(v.label, RateLabel::Sublinear);
        assert!(v.power_fit.r2 >= 0.999, "r2 = {}", v.power_fit.r2);
        assert!((v.power_fit.slope + 2.0).abs() < 1e-6);
    }

    #[test]
    fn floored_points_are_ignored() {
        let mut gaps: Vec<(usize, f64)> = (0..200).map(|k| (k, 0.5f64.powi(k as i32))).collect();
        gaps.extend((200..300).map(|k| (k, 0.0)));
        let v = classify_rate(&gaps, 0.5);
        assert_eq!(v.label, RateLabel::Linear);
    }

    #[test]
    fn too_few_points_is_inconclusive() {
        let gaps = vec![(1, 0.5), (2, 0.25)];
        assert_eq!(classify_rate(&gaps, 0.5).label, RateLabel::Inconclusive);
    }
}
