//! Skewed exponential power distribution.
//!
//! The density is the two-branch kernel
//!
//! ```text
//! f(x) ∝ exp(-|x - mu|^p / (p * 2 alpha sigma^p))        x <= mu
//! f(x) ∝ exp(-|x - mu|^p / (p * 2 (1 - alpha) sigma^p))  x >  mu
//! ```
//!
//! with the constant `1 / K(p)`, `K(p) = p^(1/p) Γ(1 + 1/p) / 2`.
//! That constant does not make the kernel integrate to one (the total mass
//! is `2 sigma ((2 alpha)^(1/p) + (2 (1 - alpha))^(1/p))`, i.e. 4 in the
//! standard symmetric case), so [`Sepd::new`] integrates the raw
//! expression numerically and divides by the result.
//!
//! Each branch maps onto a regularized incomplete gamma function with shape
//! `1/p` through `t = |x - mu|^p / (p c)`, which gives the CDF in closed form
//! and an analytic inverse.

use rand::RngCore;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::quadrature::integrate_half_line;
use crate::rng::open_unit;
use crate::sample::Sample;
use crate::special::{gamma_inv, gamma_pq, Tail};

/// Quantile inversions must satisfy `|cdf(q) - u|` at most this.
pub const QUANTILE_TOLERANCE: f64 = 1e-10;

/// Relative agreement demanded between the quadrature normalizer and the
/// closed-form branch masses.
const NORMALIZER_AGREEMENT: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SepdParams {
    pub mu: f64,
    pub sigma: f64,
    /// Skewness in (0, 1); 0.5 is symmetric, smaller values shorten the
    /// left branch.
    pub alpha: f64,
    /// Tail weight; smaller is heavier.
    pub p: f64,
}

impl SepdParams {
    pub fn new(mu: f64, sigma: f64, alpha: f64, p: f64) -> Result<Self> {
        let params = SepdParams { mu, sigma, alpha, p };
        params.validate()?;
        Ok(params)
    }

    /// Location 0, scale 1.
    pub fn standard(alpha: f64, p: f64) -> Result<Self> {
        SepdParams::new(0.0, 1.0, alpha, p)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.mu.is_finite() {
            return Err(Error::InvalidParameter(format!("mu must be finite, got {}", self.mu)));
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "sigma must be positive, got {}",
                self.sigma
            )));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if !(self.p.is_finite() && self.p > 0.0) {
            return Err(Error::InvalidParameter(format!("p must be positive, got {}", self.p)));
        }
        Ok(())
    }
}

/// One side of the density around `mu`.
#[derive(Debug, Clone, Copy)]
struct Branch {
    /// `p * c` with `c = 2 alpha sigma^p` (left) or `2 (1 - alpha) sigma^p`.
    pc: f64,
    /// `(p c)^(1/p)`, the natural length scale of the branch.
    width: f64,
    /// Share of the total probability on this side.
    weight: f64,
}

impl Branch {
    fn new(p: f64, c: f64) -> Self {
        let pc = p * c;
        Branch {
            pc,
            width: pc.powf(1.0 / p),
            weight: f64::NAN,
        }
    }

    /// Incomplete-gamma argument for a distance `d >= 0` from `mu`.
    fn gamma_arg(&self, d: f64, p: f64) -> f64 {
        d.powf(p) / self.pc
    }
}

/// Validated, immutable evaluator for one parameter set.
#[derive(Debug, Clone)]
pub struct Sepd {
    params: SepdParams,
    k_p: f64,
    normalizer: f64,
    shape: f64,
    left: Branch,
    right: Branch,
}

impl Sepd {
    /// Validates `params`, integrates the raw density by adaptive
    /// quadrature and checks it against the closed-form branch masses.
    pub fn new(params: SepdParams) -> Result<Self> {
        params.validate()?;
        let SepdParams { sigma, alpha, p, .. } = params;
        let shape = 1.0 / p;
        let gamma_1p = gamma(1.0 + shape);
        let k_p = 0.5 * p.powf(shape) * gamma_1p;
        let sigma_p = sigma.powf(p);
        let mut left = Branch::new(p, 2.0 * alpha * sigma_p);
        let mut right = Branch::new(p, 2.0 * (1.0 - alpha) * sigma_p);

        // closed-form raw masses: width * Γ(1 + 1/p) / K(p)
        let left_mass = left.width * gamma_1p / k_p;
        let right_mass = right.width * gamma_1p / k_p;
        let closed_form = left_mass + right_mass;
        left.weight = left_mass / closed_form;
        right.weight = right_mass / closed_form;

        let raw = |pc: f64| move |t: f64| (-t.powf(p) / pc).exp() / k_p;
        let quad = |b: &Branch| integrate_half_line(raw(b.pc), b.width, 0.0, 1e-13, 4000);
        let normalizer = quad(&left)?.value + quad(&right)?.value;
        if ((normalizer - closed_form) / closed_form).abs() > NORMALIZER_AGREEMENT {
            return Err(Error::Quadrature(format!(
                "normalizer {normalizer} disagrees with closed form {closed_form}"
            )));
        }
        Ok(Sepd {
            params,
            k_p,
            normalizer,
            shape,
            left,
            right,
        })
    }

    pub fn params(&self) -> &SepdParams {
        &self.params
    }

    /// Integral of the raw (unnormalized) density.
    pub fn normalizer(&self) -> f64 {
        self.normalizer
    }

    pub fn k_p(&self) -> f64 {
        self.k_p
    }

    /// Probability mass below `mu`.
    pub fn left_weight(&self) -> f64 {
        self.left.weight
    }

    fn branch(&self, x: f64) -> (&Branch, f64) {
        let d = x - self.params.mu;
        if d <= 0.0 {
            (&self.left, -d)
        } else {
            (&self.right, d)
        }
    }

    /// The piecewise expression with constant `1 / K(p)`, before normalization.
    pub fn raw_pdf(&self, x: f64) -> f64 {
        let (b, d) = self.branch(x);
        (-d.powf(self.params.p) / b.pc).exp() / self.k_p
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.raw_pdf(x) / self.normalizer
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        let p = self.params.p;
        let (b, d) = self.branch(x);
        let (lower, upper) = gamma_pq(self.shape, b.gamma_arg(d, p));
        if x <= self.params.mu {
            self.left.weight * upper
        } else if lower < 0.5 {
            self.left.weight + self.right.weight * lower
        } else {
            1.0 - self.right.weight * upper
        }
    }

    /// Inverse CDF for `u` in (0, 1).
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::ProbabilityOutOfRange);
        }
        let x = self.quantile_analytic(u);
        if (self.cdf(x) - u).abs() <= QUANTILE_TOLERANCE {
            return Ok(x);
        }
        Ok(self.quantile_bracketed(u, x))
    }

    fn quantile_analytic(&self, u: f64) -> f64 {
        let mu = self.params.mu;
        let inv_p = self.shape;
        let wl = self.left.weight;
        if u <= wl {
            let s = gamma_inv(self.shape, u / wl, Tail::Upper);
            mu - self.left.width * s.powf(inv_p)
        } else {
            let below = u - wl;
            let above = 1.0 - u;
            let s = if below <= above {
                gamma_inv(self.shape, below / self.right.weight, Tail::Lower)
            } else {
                gamma_inv(self.shape, above / self.right.weight, Tail::Upper)
            };
            mu + self.right.width * s.powf(inv_p)
        }
    }

    /// Bisection on the CDF, used when the analytic inverse misses.
    fn quantile_bracketed(&self, u: f64, guess: f64) -> f64 {
        let scale = self.left.width.max(self.right.width).max(f64::MIN_POSITIVE);
        let mut step = scale;
        let (mut lo, mut hi) = (guess - step, guess + step);
        while self.cdf(lo) > u {
            step *= 2.0;
            lo = guess - step;
        }
        step = scale;
        while self.cdf(hi) < u {
            step *= 2.0;
            hi = guess + step;
        }
        for _ in 0..2000 {
            let mid = 0.5 * (lo + hi);
            let c = self.cdf(mid);
            if (c - u).abs() <= QUANTILE_TOLERANCE * 0.5 || mid == lo || mid == hi {
                return mid;
            }
            if c < u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// One draw by inversion of an open-interval uniform.
    pub fn draw(&self, rng: &mut impl RngCore) -> f64 {
        let u = open_unit(rng);
        self.quantile(u).expect("open_unit lies in (0, 1)")
    }

    pub fn sample(&self, rng: &mut impl RngCore, n: usize) -> Sample {
        let values = (0..n).map(|_| self.draw(rng)).collect();
        Sample::new(values).expect("inverse-CDF draws are finite")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded_stream;

    fn sepd(alpha: f64, p: f64) -> Sepd {
        Sepd::new(SepdParams::standard(alpha, p).unwrap()).unwrap()
    }

    #[test]
    fn rejects_bad_params() {
        for (a, p, s) in [(0.0, 2.0, 1.0), (1.0, 2.0, 1.0), (0.5, 0.0, 1.0), (0.5, 2.0, -1.0)] {
            assert!(SepdParams::new(0.0, s, a, p).is_err());
        }
    }

    #[test]
    fn raw_constant_leaves_mass_four_in_symmetric_case() {
        let d = sepd(0.5, 2.0);
        assert!((d.normalizer() - 4.0).abs() < 1e-10, "{}", d.normalizer());
    }

    #[test]
    fn symmetric_density_and_cdf() {
        let d = sepd(0.5, 2.0);
        for t in [0.1, 0.7, 1.3, 2.9, 5.0] {
            assert_eq!(d.pdf(-t), d.pdf(t));
        }
        assert_eq!(d.cdf(0.0), 0.5);
        assert_eq!(d.quantile(0.5).unwrap(), 0.0);
    }

    #[test]
    fn continuous_at_mu() {
        for (a, p) in [(0.2, 0.7), (0.8, 3.0)] {
            let d = sepd(a, p);
            let at = d.pdf(0.0);
            let right = d.pdf(1e-16);
            assert!(((at - right) / at).abs() < 1e-9);
        }
    }

    #[test]
    fn quantile_rejects_closed_endpoints() {
        let d = sepd(0.3, 2.0);
        assert!(d.quantile(0.0).is_err());
        assert!(d.quantile(1.0).is_err());
    }

    #[test]
    fn quantile_round_trip_extreme_u() {
        for (a, p) in [(0.05, 0.5), (0.95, 0.5), (0.05, 10.0), (0.5, 12.0), (0.3, 0.4)] {
            let d = sepd(a, p);
            for u in [1e-16, 1e-9, 0.001, 0.3, 0.5, 0.9, 0.999, 1.0 - 1e-12] {
                let x = d.quantile(u).unwrap();
                assert!((d.cdf(x) - u).abs() <= 1e-10, "({a},{p}) u={u} x={x}");
            }
        }
    }

    #[test]
    fn location_scale() {
        let base = sepd(0.3, 1.5);
        let moved = Sepd::new(SepdParams::new(2.0, 3.0, 0.3, 1.5).unwrap()).unwrap();
        for u in [0.01, 0.4, 0.97] {
            let want = 2.0 + 3.0 * base.quantile(u).unwrap();
            assert!((moved.quantile(u).unwrap() - want).abs() < 1e-9);
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let d = sepd(0.3, 1.5);
        let a = d.sample(&mut seeded_stream(11), 100);
        let b = d.sample(&mut seeded_stream(11), 100);
        assert_eq!(a, b);
        assert_eq!(a.len(), 100);
    }
}
