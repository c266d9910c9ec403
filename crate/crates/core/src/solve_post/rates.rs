use crate::error::{Error, Result};

/// Number of finest levels in the reported least-squares rate.
pub const FIT_LEVELS: usize = 3;

#[derive(Clone, Debug, PartialEq)]
pub struct Rates {
    /// `log(e_i / e_{i+1}) / log(h_i / h_{i+1})` per refinement step.
    pub stepwise: Vec<f64>,
    /// Least-squares slope of `log e` against `log h` over all levels.
    pub fit_all: f64,
    /// Least-squares slope over the last [`FIT_LEVELS`] levels; the reported rate.
    pub rate: f64,
}

/// Least-squares slope of `log e` against `log h`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Rates of `(h, error)` pairs ordered from coarse to fine.
pub fn convergence_rates(points: &[(f64, f64)]) -> Result<Rates> {
    if points.len() < 2 {
        return Err(Error::invalid("need at least two levels"));
    }
    if points.iter().any(|p| !(p.0 > 0.0) || !(p.1 > 0.0)) {
        return Err(Error::invalid("mesh sizes and errors must be positive"));
    }
    if points.windows(2).any(|w| !(w[1].0 < w[0].0)) {
        return Err(Error::invalid("mesh sizes must decrease strictly"));
    }
    let stepwise = points.windows(2).map(|w| (w[0].1 / w[1].1).ln() / (w[0].0 / w[1].0).ln()).collect();
    let tail = &points[points.len().saturating_sub(FIT_LEVELS)..];
    Ok(Rates { stepwise, fit_all: loglog_slope(points), rate: loglog_slope(tail) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_laws() {
        let r = convergence_rates(&[(0.1, 1e-2), (0.05, 2.5e-3)]).unwrap();
        assert!((r.stepwise[0] - 2.0).abs() < 1e-12 && (r.rate - 2.0).abs() < 1e-12);
        let r = convergence_rates(&[(0.1, 1e-3), (0.05, 1.25e-4)]).unwrap();
        assert!((r.rate - 3.0).abs() < 1e-12);
        let r = convergence_rates(&[(0.1, 0.3), (0.05, 0.3), (0.025, 0.3)]).unwrap();
        assert!(r.rate.abs() < 1e-12 && r.stepwise.iter().all(|s| s.abs() < 1e-12));
    }

    #[test]
    fn fit_uses_last_levels() {
        // first step is pre-asymptotic
        let pts = [(0.2, 1.0), (0.1, 0.9), (0.05, 0.225), (0.025, 0.05625)];
        let r = convergence_rates(&pts).unwrap();
        assert!((r.rate - 2.0).abs() < 1e-12);
        assert!(r.fit_all < 2.0);
        assert_eq!(r.stepwise.len(), 3);
    }

    #[test]
    fn invalid_input() {
        assert!(convergence_rates(&[(0.1, 1.0)]).is_err());
        assert!(convergence_rates(&[(0.1, 1.0), (0.05, 0.0)]).is_err());
        assert!(convergence_rates(&[(0.05, 1.0), (0.1, 0.5)]).is_err());
    }
}
