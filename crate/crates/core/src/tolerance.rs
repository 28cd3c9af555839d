use serde::{Deserialize, Serialize};

/// Comparison thresholds shared by every numeric predicate in the crate.
///
/// `eps_abs` is an absolute floor, `eps_rel` scales with the magnitude of the
/// compared quantities. Both must be positive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToleranceContext {
    pub eps_abs: f64,
    pub eps_rel: f64,
}

impl Default for ToleranceContext {
    fn default() -> Self {
        Self {
            eps_abs: 1e-9,
            eps_rel: 1e-9,
        }
    }
}

impl ToleranceContext {
    pub fn new(eps_abs: f64, eps_rel: f64) -> Option<Self> {
        (eps_abs > 0.0 && eps_rel > 0.0 && eps_abs.is_finite() && eps_rel.is_finite())
            .then_some(Self { eps_abs, eps_rel })
    }

    /// Threshold for a quantity expected to be zero when the inputs involved
    /// have magnitude `scale`.
    #[inline]
    pub fn threshold(&self, scale: f64) -> f64 {
        self.eps_abs + self.eps_rel * scale.abs()
    }

    #[inline]
    pub fn is_zero(&self, x: f64, scale: f64) -> bool {
        x.abs() <= self.threshold(scale)
    }

    #[inline]
    pub fn approx_eq(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.threshold(a.abs().max(b.abs()))
    }

    /// Vectors are equal when their difference is small relative to the
    /// larger of the two norms.
    pub fn vec_eq(&self, u: &[f64], v: &[f64]) -> bool {
        debug_assert_eq!(u.len(), v.len());
        let mut diff = 0.0;
        let mut nu = 0.0;
        let mut nv = 0.0;
        for (a, b) in u.iter().zip(v) {
            diff += (a - b) * (a - b);
            nu += a * a;
            nv += b * b;
        }
        diff.sqrt() <= self.threshold(nu.max(nv).sqrt())
    }

    /// Sign of `x` with respect to a zero band scaled by `scale`.
    pub fn sign(&self, x: f64, scale: f64) -> i8 {
        if self.is_zero(x, scale) {
            0
        } else if x > 0.0 {
            1
        } else {
            -1
        }
    }

    /// Minimum margin a linear-program witness must reach before a cone is
    /// accepted as having nonempty interior. LP solutions carry their own
    /// round-off, so this sits two orders of magnitude above `eps_abs`.
    #[inline]
    pub fn margin_floor(&self) -> f64 {
        100.0 * self.eps_abs
    }
}
