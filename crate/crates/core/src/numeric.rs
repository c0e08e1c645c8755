//! Small numeric helpers shared across the crate.

/// Compensated accumulator for long sums of small leak weights.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    pub fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum
    }
}

/// (cosⁿθ, 1 − cos²ⁿθ) without cancellation.
///
/// For small θ the power is taken through ln cosθ = ln(1 − 2 sin²(θ/2)) so
/// that 1 − cos²ⁿθ stays accurate when cosθ is within a few ulp of 1.
pub(crate) fn cos_power_factors(theta: f64, n: u32) -> (f64, f64) {
    let c = theta.cos();
    if c > 0.9 {
        let ln_c = (-2.0 * (0.5 * theta).sin().powi(2)).ln_1p();
        let nf = f64::from(n);
        ((nf * ln_c).exp(), -(2.0 * nf * ln_c).exp_m1())
    } else {
        let pow = c.powi(n as i32);
        (pow, 1.0 - pow * pow)
    }
}

/// cos^n θ alone, same accuracy considerations as [`cos_power_factors`].
pub(crate) fn cos_power(theta: f64, n: u32) -> f64 {
    cos_power_factors(theta, n).0
}
