use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Growth of `m` relative to `n` for the uniform closed forms. Always chosen
/// by the caller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UniformRegime {
    /// `m = o(n)`: `rho = 1 - (1 - zeta) m p`.
    SmallM,
    /// `n = o(m)`: `rho = zeta`.
    LargeM,
    /// `m = Theta(n)`: `rho = zeta*`.
    Linear,
}

const BISECTION_STEPS: usize = 200;
const BRACKET: f64 = 1e-15;

/// Root in `(BRACKET, 1 - BRACKET)` of a function positive at the left end
/// and negative at the right end.
fn bisect(f: impl Fn(f64) -> f64) -> f64 {
    let (mut lo, mut hi) = (BRACKET, 1.0 - BRACKET);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Root in `(0, 1)` of `exp(c (x - 1)) = x`, for `c > 1`.
pub fn zeta(c: f64) -> f64 {
    assert!(c > 1.0, "zeta needs c > 1, got {c}");
    // exp(c(x-1)) - x written so it keeps its sign close to x = 1
    bisect(|x| (c * (x - 1.0)).exp_m1() + (1.0 - x))
}

/// Root in `(0, 1)` of `exp(mp (exp(np (x - 1)) - 1)) = x`, for `mp * np > 1`.
pub fn zeta_star(mp: f64, np: f64) -> f64 {
    assert!(mp * np > 1.0, "zeta* needs mp * np > 1, got {}", mp * np);
    bisect(|x| (mp * (np * (x - 1.0)).exp_m1()).exp_m1() + (1.0 - x))
}

/// Closed-form extinction probability for `m` equal weights `p = sqrt(c / (m n))`.
pub fn uniform_extinction(regime: UniformRegime, n: usize, m: usize, c: f64) -> Result<f64> {
    if !(c > 1.0) {
        return Err(Error::Domain(format!("closed forms need c > 1, got {c}")));
    }
    if n == 0 || m == 0 {
        return Err(Error::InvalidArgument("n and m must be positive".into()));
    }
    let p = (c / (m as f64 * n as f64)).sqrt();
    let mp = m as f64 * p;
    let np = n as f64 * p;
    match regime {
        UniformRegime::SmallM => {
            if mp >= 1.0 {
                return Err(Error::Domain(format!(
                    "small-m form needs m p < 1, got {mp}"
                )));
            }
            Ok(1.0 - (1.0 - zeta(c)) * mp)
        }
        UniformRegime::LargeM => Ok(zeta(c)),
        UniformRegime::Linear => Ok(zeta_star(mp, np)),
    }
}
