//! Tail bounds used as one-sided oracles against simulated tails.

use serde::Serialize;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    ChernoffUpper,
    ChungLuUpper,
    ChungLuLower,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum BoundParams {
    Chernoff {
        n: u64,
        p: f64,
        t: f64,
    },
    ChungLu {
        norm_sq: f64,
        range_bound: f64,
        lambda: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailBound {
    /// Upper bound on the tail probability, in `[0, 1]`.
    pub bound: f64,
    pub kind: BoundKind,
    pub params: BoundParams,
}

fn clamp_unit(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

/// `P[X >= np + t] <= exp(-t^2 / (2 (np + t/3)))` for `X ~ Binomial(n, p)`.
pub fn chernoff_upper(n: u64, p: f64, t: f64) -> Result<TailBound> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "t must be positive, got {t}"
        )));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!(
            "p must lie in [0, 1], got {p}"
        )));
    }
    let mean = n as f64 * p;
    let bound = clamp_unit((-t * t / (2.0 * (mean + t / 3.0))).exp());
    Ok(TailBound {
        bound,
        kind: BoundKind::ChernoffUpper,
        params: BoundParams::Chernoff { n, p, t },
    })
}

fn check_chung_lu(norm_sq: f64, lambda: f64) -> Result<()> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "lambda must be positive, got {lambda}"
        )));
    }
    if !(norm_sq >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "norm_sq must be non-negative, got {norm_sq}"
        )));
    }
    Ok(())
}

/// `P[Y >= EY + lambda] <= exp(-lambda^2 / (2 (||Y||^2 + M2 lambda / 3)))`
/// for a sum of independent terms bounded above by `M2`.
pub fn chung_lu_upper(norm_sq: f64, m2: f64, lambda: f64) -> Result<TailBound> {
    check_chung_lu(norm_sq, lambda)?;
    let denom = 2.0 * (norm_sq + m2 * lambda / 3.0);
    if denom < 0.0 {
        return Err(Error::Domain(format!(
            "upper-tail denominator {denom} is negative"
        )));
    }
    let bound = if denom == 0.0 {
        0.0
    } else {
        clamp_unit((-lambda * lambda / denom).exp())
    };
    Ok(TailBound {
        bound,
        kind: BoundKind::ChungLuUpper,
        params: BoundParams::ChungLu {
            norm_sq,
            range_bound: m2,
            lambda,
        },
    })
}

/// `P[Y <= EY - lambda] <= exp(-lambda^2 / (2 (||Y||^2 - M1 lambda / 3)))`
/// for a sum of independent terms bounded below by `M1`.
pub fn chung_lu_lower(norm_sq: f64, m1: f64, lambda: f64) -> Result<TailBound> {
    check_chung_lu(norm_sq, lambda)?;
    let denom = 2.0 * (norm_sq - m1 * lambda / 3.0);
    if !(denom > 0.0) {
        return Err(Error::Domain(format!(
            "lower-tail denominator {denom} is not positive"
        )));
    }
    Ok(TailBound {
        bound: clamp_unit((-lambda * lambda / denom).exp()),
        kind: BoundKind::ChungLuLower,
        params: BoundParams::ChungLu {
            norm_sq,
            range_bound: m1,
            lambda,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn chernoff_hand_value() {
        // exp(-100 / (2 (10 + 10/3))) = exp(-3.75)
        let b = chernoff_upper(100, 0.1, 10.0).unwrap();
        assert_relative_eq!(b.bound, 0.023_517_745_856_009_107, max_relative = 1e-12);
        assert_eq!(b.kind, BoundKind::ChernoffUpper);
    }

    #[test]
    fn chernoff_degenerate() {
        assert_relative_eq!(
            chernoff_upper(0, 0.0, 1.0).unwrap().bound,
            (-1.5f64).exp(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn chernoff_decays_in_t() {
        let mut prev = 1.0;
        for k in 1..200 {
            let b = chernoff_upper(1000, 0.3, k as f64).unwrap().bound;
            assert!(b <= prev);
            prev = b;
        }
        assert!(prev < 1e-10);
    }

    #[test]
    fn chernoff_rejects_bad_t() {
        assert!(chernoff_upper(10, 0.5, 0.0).is_err());
        assert!(chernoff_upper(10, 0.5, -1.0).is_err());
    }

    #[test]
    fn chung_lu_plug_in() {
        assert_relative_eq!(
            chung_lu_upper(1.0, 0.0, 2.0).unwrap().bound,
            (-2.0f64).exp(),
            max_relative = 1e-15
        );
        assert!(chung_lu_upper(1.0, 0.5, 1e-9).unwrap().bound > 0.999_999);
    }

    #[test]
    fn chung_lu_claim_pattern() {
        // ||Y||^2 = c p k / n with c = 2, p = 1e-3, k = 1e4, n = 1e6; lambda = (1 - 1/2) k / (2n)
        let (c, p, k, n) = (2.0, 1e-3, 1e4, 1e6);
        let b = chung_lu_upper(c * p * k / n, p, 0.5 * k / (2.0 * n)).unwrap();
        assert!(b.bound > 0.0 && b.bound < 1.0 && b.bound.is_finite());
    }

    #[test]
    fn chung_lu_lower_domain() {
        assert!(matches!(
            chung_lu_lower(1.0, 3.0, 1.0),
            Err(Error::Domain(_))
        ));
        assert!(chung_lu_lower(1.0, 0.0, 1.0).is_ok());
        assert!(chung_lu_lower(1.0, -1.0, 1.0).is_ok());
    }

    #[test]
    fn monotone_in_parameters() {
        let base = chung_lu_upper(0.5, 0.1, 1.0).unwrap().bound;
        assert!(chung_lu_upper(0.5, 0.1, 1.5).unwrap().bound <= base);
        assert!(chung_lu_upper(0.8, 0.1, 1.0).unwrap().bound >= base);
        assert!(chung_lu_upper(0.5, 0.3, 1.0).unwrap().bound >= base);
        let base = chung_lu_lower(0.5, 0.0, 1.0).unwrap().bound;
        assert!(chung_lu_lower(0.5, 0.0, 1.5).unwrap().bound <= base);
        assert!(chung_lu_lower(0.9, 0.0, 1.0).unwrap().bound >= base);
    }
}
