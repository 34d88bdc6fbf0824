//! Univariate step-magnitude distributions on the positive half-line.
//!
//! The Hit-&-Run family draws a step magnitude from a distribution `p`
//! truncated to the feasible chord `[0, smax]`, via the inverse transform.
//! Two families are provided: the chi distribution with `d` degrees of
//! freedom (whose HR limit is the isotropic Gaussian) and the half-normal,
//! moment-matched to chi, which is what the benchmark uses because the chi
//! inverse CDF is comparatively expensive.

use statrs::function::erf::{erf, erf_inv};
use statrs::function::gamma::{gamma_lr, ln_gamma};

use crate::error::{Error, Result};

/// Chords shorter than this are treated as degenerate; the proposal becomes
/// a self-transition instead of dividing by a vanishing normalization.
pub const DEGENERATE_SMAX: f64 = 1e-30;

/// Step-magnitude distribution supported on `[0, inf)`.
///
/// The density must be positive and continuous on the open half-line, and
/// `cdf`/`inverse_cdf` must round-trip to 1e-10.
pub trait StepDistribution: Send + Sync {
    fn pdf(&self, s: f64) -> f64;
    fn log_pdf(&self, s: f64) -> f64;
    fn cdf(&self, s: f64) -> f64;
    fn inverse_cdf(&self, u: f64) -> f64;
}

/// Chi distribution with `d` degrees of freedom: the magnitude of a
/// `d`-dimensional standard normal.
#[derive(Debug, Clone)]
pub struct Chi {
    d: usize,
    // -(d/2 - 1) ln 2 - ln Gamma(d/2)
    ln_norm: f64,
}

/// Chi distribution with `d >= 1` degrees of freedom.
pub fn make_chi(d: usize) -> Result<Chi> {
    if d == 0 {
        return Err(Error::InvalidArgument("chi needs d >= 1".into()));
    }
    let half = d as f64 / 2.0;
    Ok(Chi {
        d,
        ln_norm: -(half - 1.0) * std::f64::consts::LN_2 - ln_gamma(half),
    })
}

impl StepDistribution for Chi {
    fn pdf(&self, s: f64) -> f64 {
        self.log_pdf(s).exp()
    }

    fn log_pdf(&self, s: f64) -> f64 {
        if s < 0.0 {
            return f64::NEG_INFINITY;
        }
        if s == 0.0 {
            // Density at the origin: positive only for d = 1.
            return if self.d == 1 {
                self.ln_norm
            } else {
                f64::NEG_INFINITY
            };
        }
        (self.d as f64 - 1.0) * s.ln() - 0.5 * s * s + self.ln_norm
    }

    fn cdf(&self, s: f64) -> f64 {
        if s <= 0.0 {
            0.0
        } else if s.is_infinite() {
            1.0
        } else {
            gamma_lr(self.d as f64 / 2.0, 0.5 * s * s)
        }
    }

    /// Bracketed Newton iteration on the regularized incomplete gamma,
    /// bisection fallback, tolerance 1e-13 in `s`.
    fn inverse_cdf(&self, u: f64) -> f64 {
        assert!((0.0..=1.0).contains(&u), "u outside [0, 1]");
        if u <= 0.0 {
            return 0.0;
        }
        if u >= 1.0 {
            return f64::INFINITY;
        }
        let mut lo = 0.0_f64;
        let mut hi = (self.d as f64).sqrt().max(1.0);
        while self.cdf(hi) < u {
            lo = hi;
            hi *= 2.0;
        }
        let mut s = 0.5 * (lo + hi);
        for _ in 0..200 {
            let f = self.cdf(s) - u;
            if f > 0.0 {
                hi = s;
            } else {
                lo = s;
            }
            let dens = self.pdf(s);
            let newton = if dens > 0.0 { s - f / dens } else { f64::NAN };
            s = if newton.is_finite() && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if hi - lo <= 1e-13 * hi.max(1.0) {
                break;
            }
        }
        s
    }
}

/// Which chi moment the half-normal scale reproduces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentMatch {
    /// `E[S^2] = d`, i.e. scale `sqrt(d)`. The default.
    Second,
    /// `E[S] = E[chi_d]`, i.e. scale `sqrt(pi) Gamma((d+1)/2) / Gamma(d/2)`.
    First,
}

/// Half-normal distribution `|N(0, sigma^2)|`.
#[derive(Debug, Clone)]
pub struct HalfNormal {
    sigma: f64,
}

impl HalfNormal {
    /// Half-normal with an explicit scale (used e.g. by the ground-truth
    /// sampler, which sets the scale from the target's scale parameter).
    pub fn with_scale(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidArgument("half-normal scale must be positive".into()));
        }
        Ok(Self { sigma })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

/// Half-normal whose second moment matches the chi distribution with `d`
/// degrees of freedom (`sigma = sqrt(d)`), so the two agree exactly at
/// `d = 1` and asymptotically in the mean.
pub fn make_half_normal_matched(d: usize) -> Result<HalfNormal> {
    make_half_normal_matched_with(d, MomentMatch::Second)
}

/// Moment-matched half-normal with an explicit choice of matched moment.
pub fn make_half_normal_matched_with(d: usize, m: MomentMatch) -> Result<HalfNormal> {
    if d == 0 {
        return Err(Error::InvalidArgument("half-normal matching needs d >= 1".into()));
    }
    let df = d as f64;
    let sigma = match m {
        MomentMatch::Second => df.sqrt(),
        MomentMatch::First => {
            std::f64::consts::PI.sqrt() * (ln_gamma((df + 1.0) / 2.0) - ln_gamma(df / 2.0)).exp()
        }
    };
    HalfNormal::with_scale(sigma)
}

impl StepDistribution for HalfNormal {
    fn pdf(&self, s: f64) -> f64 {
        if s < 0.0 {
            return 0.0;
        }
        (2.0 / std::f64::consts::PI).sqrt() / self.sigma * (-0.5 * (s / self.sigma).powi(2)).exp()
    }

    fn log_pdf(&self, s: f64) -> f64 {
        if s < 0.0 {
            return f64::NEG_INFINITY;
        }
        0.5 * (2.0 / std::f64::consts::PI).ln() - self.sigma.ln() - 0.5 * (s / self.sigma).powi(2)
    }

    fn cdf(&self, s: f64) -> f64 {
        if s <= 0.0 {
            0.0
        } else if s.is_infinite() {
            1.0
        } else {
            erf(s / (self.sigma * std::f64::consts::SQRT_2))
        }
    }

    fn inverse_cdf(&self, u: f64) -> f64 {
        assert!((0.0..=1.0).contains(&u), "u outside [0, 1]");
        if u >= 1.0 {
            return f64::INFINITY;
        }
        self.sigma * std::f64::consts::SQRT_2 * erf_inv(u)
    }
}

/// Log-density of `p` truncated to `[0, smax]`:
/// `log p(s) - log F_p(smax)` inside the interval, `-inf` outside.
/// `F_p(inf) = 1`, so an unbounded chord reduces to the raw log-density.
pub fn truncated_log_pdf(p: &dyn StepDistribution, s: f64, smax: f64) -> f64 {
    if !(s >= 0.0 && s <= smax) {
        return f64::NEG_INFINITY;
    }
    if smax.is_infinite() {
        return p.log_pdf(s);
    }
    let mass = p.cdf(smax);
    if mass <= 0.0 {
        return f64::NEG_INFINITY;
    }
    p.log_pdf(s) - mass.ln()
}

/// Inverse-transform draw from `p` truncated to `[0, smax]`:
/// `F_p^{-1}(u F_p(smax))` for a uniform variate `u` in (0, 1).
pub fn sample_truncated(p: &dyn StepDistribution, smax: f64, u: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::InvalidArgument(format!("uniform variate {u} outside (0, 1)")));
    }
    if !(smax > 0.0) {
        return Err(Error::InvalidArgument(format!("smax {smax} not positive")));
    }
    let target = if smax.is_infinite() { u } else { u * p.cdf(smax) };
    let s = p.inverse_cdf(target);
    Ok(s.min(smax))
}
