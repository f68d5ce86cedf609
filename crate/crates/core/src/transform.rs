//! The power-sign transform `σ_γ(z) = sign(z)|z|^γ` and the Lyapunov
//! quantities built on it.
//!
//! All functions here are pure. The transform is applied element-wise to
//! gradients by every optimizer in [`crate::optim`] and by the continuous
//! flows in [`crate::ode`].

use std::fmt;

use crate::error::{Error, Result};

/// Exponent of the power-sign transform, validated to lie in `[0, 1]`.
///
/// `1` is the identity (plain gradient methods) and `0` is the pure sign
/// transform (one-bit descent). Finite-time results for the continuous flow
/// only hold on the open interval; see [`PowerCoefficient::is_interior`].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PowerCoefficient(f64);

impl PowerCoefficient {
    pub const SIGN: PowerCoefficient = PowerCoefficient(0.0);
    pub const IDENTITY: PowerCoefficient = PowerCoefficient(1.0);

    pub fn new(gamma: f64) -> Result<Self> {
        if gamma.is_finite() && (0.0..=1.0).contains(&gamma) {
            Ok(PowerCoefficient(gamma))
        } else {
            Err(Error::InvalidArgument(format!("power coefficient must lie in [0, 1], got {gamma}")))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// True when `0 < γ < 1`.
    pub fn is_interior(self) -> bool {
        self.0 > 0.0 && self.0 < 1.0
    }

    pub fn is_identity(self) -> bool {
        self.0 == 1.0
    }

    pub fn is_sign(self) -> bool {
        self.0 == 0.0
    }
}

impl fmt::Display for PowerCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl TryFrom<f64> for PowerCoefficient {
    type Error = Error;

    fn try_from(gamma: f64) -> Result<Self> {
        PowerCoefficient::new(gamma)
    }
}

#[inline]
fn power_sign_unchecked(z: f64, gamma: PowerCoefficient) -> f64 {
    if z == 0.0 {
        return 0.0;
    }
    let g = gamma.value();
    if g == 1.0 {
        z
    } else if g == 0.0 {
        if z > 0.0 {
            1.0
        } else {
            -1.0
        }
    } else {
        z.signum() * z.abs().powf(g)
    }
}

/// `sign(z)|z|^γ`, with `σ(0) = 0` for every `γ`.
pub fn power_sign(z: f64, gamma: PowerCoefficient) -> Result<f64> {
    if !z.is_finite() {
        return Err(Error::InvalidArgument(format!("power_sign of non-finite value {z}")));
    }
    Ok(power_sign_unchecked(z, gamma))
}

/// Element-wise [`power_sign`]. Reports the first non-finite entry by index.
pub fn power_sign_vec(v: &[f64], gamma: PowerCoefficient) -> Result<Vec<f64>> {
    v.iter()
        .enumerate()
        .map(
            |(index, &z)| {
                if z.is_finite() {
                    Ok(power_sign_unchecked(z, gamma))
                } else {
                    Err(Error::NonFinite { index, value: z })
                }
            },
        )
        .collect()
}

#[inline]
fn abs_pow_one_plus(z: f64, gamma: PowerCoefficient) -> f64 {
    let g = gamma.value();
    if g == 1.0 {
        z * z
    } else if g == 0.0 {
        z.abs()
    } else {
        z.abs().powf(1.0 + g)
    }
}

/// `g · σ_γ(g) = Σ |gᵢ|^{1+γ}`.
///
/// Strictly positive for any nonzero `g`, so `-σ_γ(g)` is always a descent
/// direction.
pub fn inner_power(g: &[f64], gamma: PowerCoefficient) -> Result<f64> {
    check_finite(g)?;
    Ok(g.iter().map(|&z| abs_pow_one_plus(z, gamma)).sum())
}

/// Lyapunov function of the gradient flow, `(1/(γ+1)) Σ |gᵢ|^{γ+1}`.
pub fn lyapunov_v(g: &[f64], gamma: PowerCoefficient) -> Result<f64> {
    Ok(inner_power(g, gamma)? / (1.0 + gamma.value()))
}

fn check_finite(v: &[f64]) -> Result<()> {
    match v.iter().position(|z| !z.is_finite()) {
        Some(index) => Err(Error::NonFinite { index, value: v[index] }),
        None => Ok(()),
    }
}
