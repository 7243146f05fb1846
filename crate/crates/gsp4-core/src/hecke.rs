//! Spherical Hecke eigenvalues as symmetric functions of the Satake
//! parameters, the identity chains connecting them to Dirichlet-series
//! coefficients, and the unipotent orbital-integral lookup tables.
//!
//! Conventions: eigenvalues are *analytically normalized* (denoted λ'), so
//! the tempered generating series in one prime is
//!
//! ```text
//!   Σ_n λ'(pⁿ) tⁿ = (1 - p⁻¹ t²) / Q(t),
//!   Q(t) = 1 - λ'(p) t + (λ'(p)² - λ'(p²) - p⁻¹) t² - λ'(p) t³ + t⁴,
//! ```
//!
//! with Q the degree-four spin polynomial ∏(1 - βᵢ t). In the eigenvalue
//! square Ω the degree-one coefficients are a(p) = x + y (spin) and
//! b(p) = 1 + xy (standard), and the degree-two standard coefficient is
//! reached through the chain b(p²) = b(p)² - 2·a₂ - 2·b(p) - 2 where a₂ is
//! the *degree-two spin power sum* x² + y² - 4. Beware the nearby shifted
//! eigenvalue λ'(p²) + p⁻¹ (exposed as [`h2_spin`]): it is the complete
//! homogeneous sum, differs from the power sum by 2 + xy, and does *not*
//! close the chain.
//!
//! The orbital lookups are exact rational values of p-adic integrals over
//! double cosets indexed by (a₁, a₂, a₃) with a₃ ≥ a₁ ≥ a₂ ≥ 0; both tables
//! vanish for odd a₃ and are supported on central elements with
//! |z|_p = p^{a₃/2}.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::Error;
use crate::harness::is_prime;
use crate::satake::{OmegaPoint, SatakeAngles, SpinParams};
use crate::Result;

/// Largest imaginary residue tolerated when collapsing symmetric functions
/// of unit-circle parameters to reals.
const IMAG_TOL: f64 = 1e-9;

fn validate_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("p = {p} is not prime")));
    }
    Ok(())
}

/// Elementary symmetric functions (e₁, e₂, e₃, e₄) of the tempered spin
/// parameters; all real, with e₄ = 1 and e₃ = e₁ by self-duality.
pub fn spin_elementary(a: SatakeAngles) -> [f64; 4] {
    let es = SpinParams::from_angles(a).elementary();
    let mut out = [0.0; 4];
    for (i, e) in es.iter().enumerate() {
        debug_assert!(e.im.abs() < IMAG_TOL, "elementary function not real: {e}");
        out[i] = e.re;
    }
    out
}

/// Degree-d spin power sum a(p^d) = Σ βᵢᵈ; for d = 1 this is x + y, for
/// d = 2 it is x² + y² - 4.
pub fn spin_power_sum(a: SatakeAngles, d: u32) -> f64 {
    let s = SpinParams::from_angles(a).power_sum(d);
    debug_assert!(s.im.abs() < IMAG_TOL, "spin power sum not real: {s}");
    s.re
}

/// Degree-d standard power sum b(p^d) = 1 + Σ αᵢᵈ + Σ αᵢ⁻ᵈ; for d = 1 this
/// is 1 + xy.
pub fn std_power_sum(a: SatakeAngles, d: u32) -> f64 {
    let s = SpinParams::from_angles(a).to_standard().power_sum(d);
    debug_assert!(s.im.abs() < IMAG_TOL, "standard power sum not real: {s}");
    s.re
}

/// Coefficients [1, -e₁, e₂, -e₁, 1] of the degree-four tempered spin
/// polynomial Q(t) = ∏(1 - βᵢ t).
pub fn hecke_polynomial(a: SatakeAngles) -> [f64; 5] {
    let [e1, e2, e3, e4] = spin_elementary(a);
    [1.0, -e1, e2, -e3, e4]
}

/// Normalized eigenvalues λ'(pⁿ) for n = 0..=n_max from the generating
/// series (1 - p⁻¹ t²)/Q(t), by power-series inversion of Q.
pub fn lambda_series(a: SatakeAngles, p: u64, n_max: usize) -> Result<Vec<f64>> {
    validate_prime(p)?;
    let q = hecke_polynomial(a);
    // h = 1/Q as a power series: h₀ = 1, hₙ = -Σ_{j=1..min(n,4)} qⱼ h_{n-j}.
    let mut h = vec![0.0; n_max + 1];
    h[0] = 1.0;
    for n in 1..=n_max {
        let mut s = 0.0;
        for j in 1..=n.min(4) {
            s += q[j] * h[n - j];
        }
        h[n] = -s;
    }
    let pinv = 1.0 / p as f64;
    Ok((0..=n_max)
        .map(|n| h[n] - if n >= 2 { pinv * h[n - 2] } else { 0.0 })
        .collect())
}

/// First normalized eigenvalue λ'(p) = x + y.
pub fn lambda_p(a: SatakeAngles, p: u64) -> Result<f64> {
    Ok(lambda_series(a, p, 1)?[1])
}

/// Second normalized eigenvalue λ'(p²) = (e₁² - e₂) - p⁻¹.
pub fn lambda_p2(a: SatakeAngles, p: u64) -> Result<f64> {
    Ok(lambda_series(a, p, 2)?[2])
}

/// The shifted second eigenvalue λ'(p²) + p⁻¹ = e₁² - e₂ (the complete
/// homogeneous degree-two sum of the spin parameters; p-independent for
/// tempered input). This is the quantity that appears as the degree-one
/// coefficient of the symmetric-square series — distinct from the
/// degree-two spin power sum [`spin_power_sum`].
pub fn h2_spin(a: SatakeAngles) -> f64 {
    let [e1, e2, _, _] = spin_elementary(a);
    e1 * e1 - e2
}

/// Degree-one spin Dirichlet coefficient a(p) = x + y.
pub fn a_coeff(pt: OmegaPoint) -> f64 {
    pt.x + pt.y
}

/// Degree-one standard Dirichlet coefficient b(p) = 1 + xy.
pub fn b_coeff(pt: OmegaPoint) -> f64 {
    1.0 + pt.x * pt.y
}

/// b(p) from the two eigenvalues: λ'(p)² - λ'(p²) - p⁻¹ - 1.
pub fn b1_from_eigs(lam1: f64, lam2: f64, p: u64) -> Result<f64> {
    validate_prime(p)?;
    Ok(lam1 * lam1 - lam2 - 1.0 / p as f64 - 1.0)
}

/// Eigenvalue of the Hecke operator at diag(1, p, p², p) recovered from the
/// degree-one standard coefficient: λ'_{t₂} = p (b(p) - p⁻²).
pub fn lambda_t2_from_b1(b1: f64, p: u64) -> Result<f64> {
    validate_prime(p)?;
    let pf = p as f64;
    Ok(pf * (b1 - 1.0 / (pf * pf)))
}

/// Degree-two standard coefficient through the quadratic chain:
/// b(p²) = b(p)² - 2 a₂ - 2 b(p) - 2, where a₂ must be the degree-two
/// *spin power sum* ([`spin_power_sum`] at d = 2), not the shifted
/// eigenvalue [`h2_spin`].
pub fn b2_chain(b1: f64, a2: f64) -> f64 {
    b1 * b1 - 2.0 * a2 - 2.0 * b1 - 2.0
}

/// Index (a₁, a₂, a₃) of a Hecke double coset
/// K diag(p^{-a₁}, p^{-a₂}, p^{a₁-a₃}, p^{a₂-a₃}) K, constrained to
/// a₃ ≥ a₁ ≥ a₂ ≥ 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DoubleCosetIndex {
    /// First exponent.
    pub a1: u32,
    /// Second exponent, ≤ a₁.
    pub a2: u32,
    /// Similitude exponent, ≥ a₁.
    pub a3: u32,
}

impl DoubleCosetIndex {
    /// Validating constructor enforcing a₃ ≥ a₁ ≥ a₂ ≥ 0.
    pub fn new(a1: u32, a2: u32, a3: u32) -> Result<Self> {
        if !(a3 >= a1 && a1 >= a2) {
            return Err(Error::Domain(format!(
                "double coset index must satisfy a3 >= a1 >= a2 >= 0, got ({a1}, {a2}, {a3})"
            )));
        }
        Ok(Self { a1, a2, a3 })
    }

    /// The Weyl-equivalent index with m ≥ a₁ when a₃ = 2m is even (signed
    /// permutations act on (m - a₁, m - a₂); the representative sorts the
    /// absolute values ascending). Odd a₃ is returned unchanged — both
    /// lookup tables vanish there.
    pub fn weyl_normalized(self) -> Self {
        if self.a3 % 2 == 1 {
            return self;
        }
        let m = (self.a3 / 2) as i64;
        let mut b = [(m - self.a1 as i64).abs(), (m - self.a2 as i64).abs()];
        b.sort_unstable();
        Self {
            a1: (m - b[0]) as u32,
            a2: (m - b[1]) as u32,
            a3: self.a3,
        }
    }
}

/// Rational p^k for a (possibly negative) integer exponent.
fn p_power(p: u64, k: i64) -> BigRational {
    let base = BigInt::from(p);
    if k >= 0 {
        BigRational::from_integer(base.pow(k as u32))
    } else {
        BigRational::new(BigInt::from(1), base.pow((-k) as u32))
    }
}

/// Orbital-integral lookup at the minimal unipotent element: the value of
/// J(z·u_min, h_{a₁,a₂,a₃}) as an exact rational.
///
/// Zero for odd a₃. For a₃ = 2m (after Weyl normalization m ≥ a₁ ≥ a₂) and
/// a central element with |z|_p = p^{z_val}:
/// (1 - p⁻²)⁻¹ when a₁ = a₂ = m, p^{a₃ - 2a₂} when m = a₁ > a₂, else 0.
pub fn orbital_umin(idx: DoubleCosetIndex, p: u64, z_val: i64) -> Result<BigRational> {
    validate_prime(p)?;
    if idx.a3 % 2 == 1 {
        return Ok(BigRational::from_integer(BigInt::from(0)));
    }
    let n = idx.weyl_normalized();
    let m = (n.a3 / 2) as i64;
    if z_val != m {
        return Ok(BigRational::from_integer(BigInt::from(0)));
    }
    let p2 = BigInt::from(p) * BigInt::from(p);
    if i64::from(n.a1) == m && n.a1 == n.a2 {
        // (1 - p⁻²)⁻¹ = p² / (p² - 1).
        Ok(BigRational::new(p2.clone(), p2 - BigInt::from(1)))
    } else if i64::from(n.a1) == m && n.a1 > n.a2 {
        Ok(p_power(p, i64::from(n.a3) - 2 * i64::from(n.a2)))
    } else {
        Ok(BigRational::from_integer(BigInt::from(0)))
    }
}

/// Orbital-integral lookup at the congruence kernel
/// {x ≡ 1 mod p^l}: p^{-2l} (1 - p⁻²)⁻¹ when z ≡ 1 mod p^l, else 0.
pub fn orbital_umin_congruence(p: u64, l: u32, z_congruent: bool) -> Result<BigRational> {
    validate_prime(p)?;
    if !z_congruent {
        return Ok(BigRational::from_integer(BigInt::from(0)));
    }
    let p2 = BigInt::from(p) * BigInt::from(p);
    Ok(p_power(p, -2 * i64::from(l)) * BigRational::new(p2.clone(), p2 - BigInt::from(1)))
}

/// Orbital-integral lookup at the split semisimple element δ₁: the value of
/// J(z·δ₁, h_{a₁,a₂,a₃}) as an exact rational.
///
/// Zero for odd a₃. For a₃ = 2m (after Weyl normalization) and
/// |z|_p = p^{z_val}: 1 when a₁ = a₂ = m, p^{a₃-a₁-a₂}(1 - p⁻²) when
/// m > a₁ = a₂, else 0.
pub fn orbital_delta1(idx: DoubleCosetIndex, p: u64, z_val: i64) -> Result<BigRational> {
    validate_prime(p)?;
    if idx.a3 % 2 == 1 {
        return Ok(BigRational::from_integer(BigInt::from(0)));
    }
    let n = idx.weyl_normalized();
    let m = (n.a3 / 2) as i64;
    if z_val != m {
        return Ok(BigRational::from_integer(BigInt::from(0)));
    }
    let p2 = BigInt::from(p) * BigInt::from(p);
    if i64::from(n.a1) == m && n.a1 == n.a2 {
        Ok(BigRational::from_integer(BigInt::from(1)))
    } else if m > i64::from(n.a1) && n.a1 == n.a2 {
        let power = p_power(p, i64::from(n.a3) - i64::from(n.a1) - i64::from(n.a2));
        Ok(power * BigRational::new(p2.clone() - BigInt::from(1), p2))
    } else {
        Ok(BigRational::from_integer(BigInt::from(0)))
    }
}
