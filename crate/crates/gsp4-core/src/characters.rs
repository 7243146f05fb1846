//! Character formulas for the holomorphic discrete series of the rank-two
//! real symplectic group, on regular elements of its four Cartan subgroups,
//! together with their singular limits, the extension to the similitude
//! group, and the dimension / formal-degree polynomials.
//!
//! Parameters: the Harish-Chandra parameter (l₁, l₂) with l₁ > l₂ > 0
//! corresponds to the scalar/vector weight (k₁, k₂) = (l₁ + 1, l₂ + 2) with
//! k₁ ≥ k₂ ≥ 3.
//!
//! The five regular-element formulas are quotients of exponential sums by
//! products of four Weyl-denominator factors; each evaluator refuses inputs
//! whose factor-modulus product falls below [`REGULARITY_MARGIN`], and the
//! split-Cartan formulas additionally require the chamber |a₁| > |a₂| > 0
//! they are stated on. Two facts the test-suite leans on, both forced by
//! the displayed formulas themselves:
//!
//! * central parity is Θ(-γ) = (-1)^{l₁+l₂+1} Θ(γ) = (-1)^{k₁+k₂} Θ(γ)
//!   (matching the central character of the associated algebraic
//!   representation);
//! * the compact-Cartan formula is *exactly* symmetric under swapping the
//!   two rotation angles.
//!
//! Singular limits at the two relevant non-regular classes come out of the
//! limit-formula machinery as closed forms; a mixed second difference of
//! (character × denominator) against a shrinking rectangle recovers them
//! numerically, which is how the closed forms are cross-validated here.

use num_complex::Complex64;

use crate::error::Error;
use crate::Result;

/// Minimum admissible product of Weyl-denominator factor moduli; inputs
/// closer to the singular set are rejected.
pub const REGULARITY_MARGIN: f64 = 1e-8;

/// Residual imaginary part tolerated when a formula is algebraically real.
const IMAG_TOL: f64 = 1e-9;

/// Harish-Chandra parameter (l₁, l₂), l₁ > l₂ > 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HcParam {
    /// First parameter.
    pub l1: i64,
    /// Second parameter, 0 < l₂ < l₁.
    pub l2: i64,
}

impl HcParam {
    /// Validating constructor: requires l₁ > l₂ > 0.
    pub fn new(l1: i64, l2: i64) -> Result<Self> {
        if !(l1 > l2 && l2 > 0) {
            return Err(Error::Domain(format!(
                "Harish-Chandra parameter needs l1 > l2 > 0, got ({l1}, {l2})"
            )));
        }
        Ok(Self { l1, l2 })
    }

    /// From the weight (k₁, k₂), k₁ ≥ k₂ ≥ 3: (l₁, l₂) = (k₁ - 1, k₂ - 2).
    pub fn from_weight(k1: i64, k2: i64) -> Result<Self> {
        if !(k1 >= k2 && k2 >= 3) {
            return Err(Error::Domain(format!(
                "weight needs k1 >= k2 >= 3, got ({k1}, {k2})"
            )));
        }
        Self::new(k1 - 1, k2 - 2)
    }

    /// The weight (k₁, k₂) = (l₁ + 1, l₂ + 2).
    pub fn weight(self) -> (i64, i64) {
        (self.l1 + 1, self.l2 + 2)
    }

    /// Exponent of the central character of the associated algebraic
    /// representation (standard similitude twist): k₁ + k₂ = l₁ + l₂ + 3.
    pub fn central_exponent(self) -> i64 {
        self.l1 + self.l2 + 3
    }

    /// Sign of Θ(-γ)/Θ(γ) forced by the regular-element formulas:
    /// (-1)^{l₁+l₂+1} = (-1)^{k₁+k₂}.
    pub fn parity_sign(self) -> f64 {
        if (self.l1 + self.l2 + 1).rem_euclid(2) == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// A regular point of one of the four Cartan subgroups (the split torus
/// appears twice: once plainly, once translated by the central-parity
/// involution δ₁ = diag(1, -1, 1, -1)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CartanPoint {
    /// Compact torus: two rotation angles (any reals).
    Compact {
        /// First rotation angle.
        theta1: f64,
        /// Second rotation angle.
        theta2: f64,
    },
    /// Split torus diag(e^{a₁}, e^{a₂}, e^{-a₁}, e^{-a₂}), |a₁| > |a₂| > 0.
    Split {
        /// First logarithm.
        a1: f64,
        /// Second logarithm.
        a2: f64,
    },
    /// δ₁ times a split-torus element, same chamber condition.
    SplitDelta1 {
        /// First logarithm.
        a1: f64,
        /// Second logarithm.
        a2: f64,
    },
    /// Cartan with a complex-plane rotation block scaled by e^{±a}.
    MixedRotation {
        /// Scaling logarithm (nonzero).
        a: f64,
        /// Rotation angle.
        theta: f64,
    },
    /// Cartan mixing one split direction with one compact rotation.
    MixedSplit {
        /// Scaling logarithm (nonzero).
        a: f64,
        /// Rotation angle.
        theta: f64,
    },
}

fn e(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, t)
}

/// Reject a denominator whose factor-modulus product is below the margin.
fn check_margin(factors: &[Complex64]) -> Result<f64> {
    let margin: f64 = factors.iter().map(|f| f.norm()).product();
    if margin < REGULARITY_MARGIN {
        return Err(Error::SingularElement {
            margin,
            min: REGULARITY_MARGIN,
        });
    }
    Ok(margin)
}

fn check_chamber(a1: f64, a2: f64) -> Result<()> {
    if !(a1.abs() > a2.abs() && a2.abs() > 0.0) {
        return Err(Error::OrderingViolation(format!(
            "split-torus formula needs |a1| > |a2| > 0, got ({a1}, {a2})"
        )));
    }
    Ok(())
}

/// Character on the compact Cartan:
/// (-e^{i(l₁θ₁+l₂θ₂)} + e^{i(l₂θ₁+l₁θ₂)}) /
/// ((e^{iθ₁}-e^{-iθ₁})(e^{iθ₂}-e^{-iθ₂})(1-e^{i(θ₁+θ₂)})(e^{-iθ₁}-e^{-iθ₂})).
pub fn char_compact(l: HcParam, theta1: f64, theta2: f64) -> Result<Complex64> {
    let (l1, l2) = (l.l1 as f64, l.l2 as f64);
    let den = [
        e(theta1) - e(-theta1),
        e(theta2) - e(-theta2),
        Complex64::new(1.0, 0.0) - e(theta1 + theta2),
        e(-theta1) - e(-theta2),
    ];
    check_margin(&den)?;
    let num = -e(l1 * theta1 + l2 * theta2) + e(l2 * theta1 + l1 * theta2);
    Ok(num / den.iter().product::<Complex64>())
}

/// Weyl-denominator product of the split-torus formula (real).
fn split_denominator(a1: f64, a2: f64) -> [Complex64; 4] {
    [
        Complex64::new(a1.exp() - (-a1).exp(), 0.0),
        Complex64::new(a2.exp() - (-a2).exp(), 0.0),
        Complex64::new(1.0 - (a1 + a2).exp(), 0.0),
        Complex64::new((-a1).exp() - (-a2).exp(), 0.0),
    ]
}

/// Character on the split Cartan (chamber |a₁| > |a₂| > 0):
/// (-e^{-l₁|a₁|-l₂|a₂|} + e^{-l₂|a₁|-l₁|a₂|}) sgn(a₁a₂) /
/// ((e^{a₁}-e^{-a₁})(e^{a₂}-e^{-a₂})(1-e^{a₁+a₂})(e^{-a₁}-e^{-a₂})).
pub fn char_split(l: HcParam, a1: f64, a2: f64) -> Result<f64> {
    check_chamber(a1, a2)?;
    let den = split_denominator(a1, a2);
    check_margin(&den)?;
    let (l1, l2) = (l.l1 as f64, l.l2 as f64);
    let (u, v) = (a1.abs(), a2.abs());
    let num = (-(-l1 * u - l2 * v).exp() + (-l2 * u - l1 * v).exp()) * (a1 * a2).signum();
    Ok(num / den.iter().map(|f| f.re).product::<f64>())
}

/// Weyl-denominator product of the δ₁-translated split formula (real,
/// nonvanishing off aᵢ = 0).
fn split_delta1_denominator(a1: f64, a2: f64) -> [Complex64; 4] {
    [
        Complex64::new(a1.exp() - (-a1).exp(), 0.0),
        Complex64::new(-(a2.exp()) + (-a2).exp(), 0.0),
        Complex64::new(1.0 + (a1 + a2).exp(), 0.0),
        Complex64::new((-a1).exp() + (-a2).exp(), 0.0),
    ]
}

/// Character at δ₁ times a split-torus element (chamber |a₁| > |a₂| > 0):
/// (-(-1)^{l₂} e^{-l₁|a₁|-l₂|a₂|} + (-1)^{l₁} e^{-l₂|a₁|-l₁|a₂|}) sgn(a₁a₂) /
/// ((e^{a₁}-e^{-a₁})(-e^{a₂}+e^{-a₂})(1+e^{a₁+a₂})(e^{-a₁}+e^{-a₂})).
pub fn char_split_delta1(l: HcParam, a1: f64, a2: f64) -> Result<f64> {
    check_chamber(a1, a2)?;
    let den = split_delta1_denominator(a1, a2);
    check_margin(&den)?;
    let (l1, l2) = (l.l1 as f64, l.l2 as f64);
    let s1 = if l.l1.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let s2 = if l.l2.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let (u, v) = (a1.abs(), a2.abs());
    let num = (-s2 * (-l1 * u - l2 * v).exp() + s1 * (-l2 * u - l1 * v).exp()) * (a1 * a2).signum();
    Ok(num / den.iter().map(|f| f.re).product::<f64>())
}

/// Character on the rotation-scaled Cartan:
/// (-e^{-l₁(|a|+iθ)-l₂(|a|-iθ)} + e^{-l₂(|a|+iθ)-l₁(|a|-iθ)}) sgn(a) /
/// ((e^{a+iθ}-e^{-a-iθ})(e^{a-iθ}-e^{-a+iθ})(1-e^{2a})(e^{-a-iθ}-e^{-a+iθ})).
/// Algebraically real.
pub fn char_mixed_rotation(l: HcParam, a: f64, theta: f64) -> Result<f64> {
    let exp = |z: Complex64| z.exp();
    let i = Complex64::new(0.0, 1.0);
    let den = [
        exp(Complex64::new(a, 0.0) + i * theta) - exp(Complex64::new(-a, 0.0) - i * theta),
        exp(Complex64::new(a, 0.0) - i * theta) - exp(Complex64::new(-a, 0.0) + i * theta),
        Complex64::new(1.0 - (2.0 * a).exp(), 0.0),
        exp(Complex64::new(-a, 0.0) - i * theta) - exp(Complex64::new(-a, 0.0) + i * theta),
    ];
    check_margin(&den)?;
    let (l1, l2) = (l.l1 as f64, l.l2 as f64);
    let w = Complex64::new(a.abs(), 0.0);
    let num = (-exp(-l1 * (w + i * theta) - l2 * (w - i * theta))
        + exp(-l2 * (w + i * theta) - l1 * (w - i * theta)))
        * a.signum();
    let val = num / den.iter().product::<Complex64>();
    debug_assert!(
        val.im.abs() < IMAG_TOL,
        "rotation-scaled character not real: {val}"
    );
    Ok(val.re)
}

/// Character on the split-plus-rotation Cartan:
/// (e^{-l₁|a|+il₂θ} - e^{-l₂|a|+il₁θ}) sgn(a) /
/// ((e^{iθ}-e^{-iθ})(e^{a}-e^{-a})(1-e^{iθ+a})(e^{-a}-e^{-iθ})).
/// Genuinely complex in general.
pub fn char_mixed_split(l: HcParam, a: f64, theta: f64) -> Result<Complex64> {
    let den = [
        e(theta) - e(-theta),
        Complex64::new(a.exp() - (-a).exp(), 0.0),
        Complex64::new(1.0, 0.0) - a.exp() * e(theta),
        Complex64::new((-a).exp(), 0.0) - e(-theta),
    ];
    check_margin(&den)?;
    let (l1, l2) = (l.l1 as f64, l.l2 as f64);
    let w = a.abs();
    let num = ((-l1 * w).exp() * e(l2 * theta) - (-l2 * w).exp() * e(l1 * theta)) * a.signum();
    Ok(num / den.iter().product::<Complex64>())
}

/// Dispatcher over the five regular-element formulas.
pub fn character(l: HcParam, pt: CartanPoint) -> Result<Complex64> {
    match pt {
        CartanPoint::Compact { theta1, theta2 } => char_compact(l, theta1, theta2),
        CartanPoint::Split { a1, a2 } => char_split(l, a1, a2).map(|v| Complex64::new(v, 0.0)),
        CartanPoint::SplitDelta1 { a1, a2 } => {
            char_split_delta1(l, a1, a2).map(|v| Complex64::new(v, 0.0))
        }
        CartanPoint::MixedRotation { a, theta } => {
            char_mixed_rotation(l, a, theta).map(|v| Complex64::new(v, 0.0))
        }
        CartanPoint::MixedSplit { a, theta } => char_mixed_split(l, a, theta),
    }
}

/// Value of the central character z ↦ z^{k₁+k₂} at a positive central
/// scalar.
pub fn central_character(l: HcParam, z: f64) -> Result<f64> {
    if z.is_nan() || z <= 0.0 {
        return Err(Error::Domain(format!(
            "central scalar must be positive, got {z}"
        )));
    }
    Ok(z.powi(l.central_exponent() as i32))
}

/// Character of the induced representation on the full similitude group at
/// z·g: equal to χ(z)⁻¹ (Θ(g) + conj Θ(g)) = χ(z)⁻¹ · 2 Re Θ(g) on the
/// symplectic component, and *exactly zero* on the similitude-negative
/// component (`twisted = true`), where the two constituents swap.
pub fn gsp_character(l: HcParam, z: f64, pt: CartanPoint, twisted: bool) -> Result<f64> {
    let chi = central_character(l, z)?;
    if twisted {
        return Ok(0.0);
    }
    let theta = character(l, pt)?;
    Ok(2.0 * theta.re / chi)
}

/// Closed-form singular limit of the invariant integral at the
/// δ₁-translated central class (unit Haar constant included):
/// 2⁻⁴ π⁻² (-1)^{l₂} l₁ l₂ (1 + (-1)^{l₁-l₂-1}).
///
/// Vanishes exactly when l₁ - l₂ is even.
pub fn singular_limit_delta1(l: HcParam) -> f64 {
    let s2 = if l.l2.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let alt = if (l.l1 - l.l2 - 1).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    };
    let pi = std::f64::consts::PI;
    s2 * (l.l1 * l.l2) as f64 * (1.0 + alt) / (16.0 * pi * pi)
}

/// Closed-form singular limit at the minimal unipotent class:
/// -2⁻³ π⁻³ (l₁ - l₂)(l₁ + l₂).
pub fn singular_limit_umin(l: HcParam) -> f64 {
    let pi = std::f64::consts::PI;
    -((l.l1 - l.l2) * (l.l1 + l.l2)) as f64 / (8.0 * pi * pi * pi)
}

/// Numerical recovery of [`singular_limit_delta1`]: the mixed second
/// difference of H(u, v) = Θ(δ₁ t₀(u, v)) · denominator(u, v) over the
/// rectangle [3h, 4h] × [h, 2h] (which stays inside the valid chamber
/// u > v > 0), scaled by -2⁻⁴ π⁻², with one Richardson step (steps h and
/// 2h) cancelling the O(h) term, so the result converges at rate O(h²).
///
/// H is evaluated through the regular-element character, so the stencil
/// points must clear [`REGULARITY_MARGIN`]: the smallest denominator
/// product is ≈ 48 h², which requires h ≳ 2e-5. A step near 1e-4 balances
/// that constraint against the O(h²) truncation.
pub fn singular_limit_delta1_numeric(l: HcParam, h: f64) -> Result<f64> {
    if !(h > 0.0 && h < 0.1) {
        return Err(Error::Domain(format!(
            "difference step must be in (0, 0.1), got {h}"
        )));
    }
    let hval = |u: f64, v: f64| -> Result<f64> {
        let den: f64 = split_delta1_denominator(u, v)
            .iter()
            .map(|f| f.re)
            .product();
        Ok(char_split_delta1(l, u, v)? * den)
    };
    let stencil = |h: f64| -> Result<f64> {
        Ok(
            (hval(4.0 * h, 2.0 * h)? - hval(4.0 * h, h)? - hval(3.0 * h, 2.0 * h)?
                + hval(3.0 * h, h)?)
                / (h * h),
        )
    };
    let n12 = 2.0 * stencil(h)? - stencil(2.0 * h)?;
    let pi = std::f64::consts::PI;
    Ok(-n12 / (16.0 * pi * pi))
}

/// Weyl dimension polynomial of the irreducible algebraic representation
/// with highest weight (a, b), a ≥ b ≥ 0:
/// (a-b+1)(a+b+3)(a+2)(b+1)/6 (always an integer).
pub fn dim_algebraic(a: u64, b: u64) -> Result<u64> {
    if a < b {
        return Err(Error::Domain(format!(
            "highest weight needs a >= b >= 0, got ({a}, {b})"
        )));
    }
    let prod = (a - b + 1) * (a + b + 3) * (a + 2) * (b + 1);
    debug_assert_eq!(prod % 6, 0, "Weyl dimension polynomial not integral");
    Ok(prod / 6)
}

/// Dimension of the coefficient representation attached to the weight
/// (k₁, k₂): highest weight (k₁ - 3, k₂ - 3), so
/// (k₁-k₂+1)(k₁+k₂-3)(k₁-1)(k₂-2)/6.
pub fn dim_weight(k1: u64, k2: u64) -> Result<u64> {
    if !(k1 >= k2 && k2 >= 3) {
        return Err(Error::Domain(format!(
            "weight needs k1 >= k2 >= 3, got ({k1}, {k2})"
        )));
    }
    dim_algebraic(k1 - 3, k2 - 3)
}

/// Formal degree of the holomorphic discrete series with Harish-Chandra
/// parameter (l₁, l₂): (l₁-l₂)(l₁+l₂) l₁ l₂ — six times [`dim_weight`] of
/// the matching weight.
pub fn formal_degree(l: HcParam) -> u64 {
    ((l.l1 - l.l2) * (l.l1 + l.l2) * l.l1 * l.l2) as u64
}
