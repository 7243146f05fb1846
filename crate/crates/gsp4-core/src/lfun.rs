//! Local Euler factors of the degree-4 (spin) and degree-5 (standard)
//! L-functions, their Dirichlet and logarithmic-derivative coefficients,
//! analytic conductors with rational-conductor bracketing, archimedean
//! log-contributions, and the prime-power tails of the standard
//! coefficients organized by spherical unitary class.
//!
//! Euler factors are the reversed characteristic polynomials
//! Q(t) = ∏ (1 - αᵢ t) of the Satake parameter multisets; for parameter
//! sets closed under conjugation all coefficients are real, and the
//! constructors reject sets that are not. Tempered spin factors are
//! palindromic and tempered standard factors anti-palindromic, which the
//! property tests pin down elsewhere.

use num_bigint::BigUint;

use crate::error::Error;
use crate::measures::validate_p;
use crate::satake::{SatakeAngles, SpinParams, StandardParams, UnitaryClass};
use crate::{hecke, Result};

/// Imaginary residue tolerated when collapsing conjugation-closed products
/// to real coefficients.
const IMAG_TOL: f64 = 1e-10;

/// Temperedness exponent bound for the standard parameters: every
/// |α| ≤ p^(1/2 - 1/26) (the degree-five instance of the general bound
/// with denominator m² + 1).
pub const LRS_EXPONENT: f64 = 0.5 - 1.0 / 26.0;

fn real_coeffs<const N: usize>(values: &[num_complex::Complex64]) -> Result<[f64; N]> {
    // Expand ∏ (1 - αᵢ t) by repeated convolution.
    let mut c = vec![num_complex::Complex64::new(0.0, 0.0); values.len() + 1];
    c[0] = num_complex::Complex64::new(1.0, 0.0);
    for (k, &a) in values.iter().enumerate() {
        for j in (1..=k + 1).rev() {
            let prev = c[j - 1];
            c[j] -= a * prev;
        }
    }
    let mut out = [0.0; N];
    for (i, z) in c.iter().enumerate() {
        if z.im.abs() > IMAG_TOL * z.norm().max(1.0) {
            return Err(Error::Domain(format!(
                "parameter multiset is not conjugation-closed: coefficient {i} = {z}"
            )));
        }
        out[i] = z.re;
    }
    Ok(out)
}

/// Degree-4 Euler polynomial ∏ (1 - vᵢ t) of a spin parameter set, as real
/// coefficients [1, c₁, c₂, c₃, c₄].
pub fn spin_euler(sp: &SpinParams) -> Result<[f64; 5]> {
    real_coeffs::<5>(&sp.values)
}

/// Degree-4 Euler polynomial of the tempered spin parameters of an angle
/// pair: [1, -(x+y), 2+xy, -(x+y), 1] (palindromic).
pub fn spin_euler_tempered(a: SatakeAngles) -> [f64; 5] {
    hecke::hecke_polynomial(a)
}

/// Degree-5 Euler polynomial ∏ (1 - vᵢ t) of a standard parameter set, as
/// real coefficients [1, c₁, ..., c₅]. Since the multiset contains 1, the
/// coefficients always sum to zero.
pub fn std_euler(st: &StandardParams) -> Result<[f64; 6]> {
    real_coeffs::<6>(&st.values)
}

/// Degree-5 Euler polynomial of the tempered standard parameters of an
/// angle pair (anti-palindromic).
pub fn std_euler_tempered(a: SatakeAngles) -> [f64; 6] {
    std_euler(&SpinParams::from_angles(a).to_standard())
        .expect("tempered standard parameters are conjugation-closed")
}

fn check_monic(poly: &[f64]) -> Result<()> {
    if poly.len() < 2 || poly[0] != 1.0 {
        return Err(Error::Domain(
            "Euler polynomial must start with constant coefficient 1".into(),
        ));
    }
    Ok(())
}

/// Power-series coefficients of 1/Q(t) through t^n_max: the local
/// Dirichlet coefficients λ(1), λ(p), λ(p²), ... of the L-function with
/// Euler factor Q.
pub fn dirichlet_coeffs(poly: &[f64], n_max: usize) -> Result<Vec<f64>> {
    check_monic(poly)?;
    let deg = poly.len() - 1;
    let mut h = vec![0.0; n_max + 1];
    h[0] = 1.0;
    for n in 1..=n_max {
        let mut s = 0.0;
        for j in 1..=deg.min(n) {
            s += poly[j] * h[n - j];
        }
        h[n] = -s;
    }
    Ok(h)
}

/// Power sums pₙ of the inverse roots of Q (the coefficients of
/// -t Q'(t)/Q(t), i.e. the prime-power coefficients of -L'/L up to the
/// log p factor), for n = 1..=n_max; index 0 is 0. Newton's identities for
/// n ≤ deg, the linear recurrence of Q beyond.
pub fn log_deriv_coeffs(poly: &[f64], n_max: usize) -> Result<Vec<f64>> {
    check_monic(poly)?;
    let deg = poly.len() - 1;
    let mut ps = vec![0.0; n_max + 1];
    for n in 1..=n_max {
        let mut s = 0.0;
        for j in 1..=deg.min(n - 1) {
            s += poly[j] * ps[n - j];
        }
        if n <= deg {
            s += n as f64 * poly[n];
        }
        ps[n] = -s;
    }
    Ok(ps)
}

fn weight_ok(k1: u64, k2: u64) -> Result<()> {
    if !(k1 >= k2 && k2 >= 3) {
        return Err(Error::Domain(format!(
            "weight needs k1 >= k2 >= 3, got ({k1}, {k2})"
        )));
    }
    Ok(())
}

/// Analytic conductor of the spin L-function at weight (k₁, k₂) and
/// finite conductor q: (k₁+k₂)² (k₁-k₂+1)² q.
pub fn analytic_conductor_spin(k1: u64, k2: u64, q: u64) -> Result<u64> {
    weight_ok(k1, k2)?;
    if q == 0 {
        return Err(Error::Domain("finite conductor must be positive".into()));
    }
    let a = (k1 + k2) * (k1 + k2);
    let b = (k1 - k2 + 1) * (k1 - k2 + 1);
    a.checked_mul(b)
        .and_then(|m| m.checked_mul(q))
        .ok_or_else(|| Error::Domain("analytic conductor overflows u64".into()))
}

/// Analytic conductor of the standard L-function at weight (k₁, k₂) and
/// finite conductor q: (k₁ k₂)² q.
pub fn analytic_conductor_std(k1: u64, k2: u64, q: u64) -> Result<u64> {
    weight_ok(k1, k2)?;
    if q == 0 {
        return Err(Error::Domain("finite conductor must be positive".into()));
    }
    (k1 * k2)
        .checked_mul(k1 * k2)
        .and_then(|m| m.checked_mul(q))
        .ok_or_else(|| Error::Domain("analytic conductor overflows u64".into()))
}

/// Bracketing interval [N, N⁴] for the spin analytic conductor in terms of
/// the underlying arithmetic conductor N.
pub fn conductor_bounds_spin(n: u64) -> (BigUint, BigUint) {
    let b = BigUint::from(n);
    (b.clone(), b.pow(4))
}

/// Bracketing interval [N, N²⁸] for the standard analytic conductor.
pub fn conductor_bounds_std(n: u64) -> (BigUint, BigUint) {
    let b = BigUint::from(n);
    (b.clone(), b.pow(28))
}

fn check_log_c(log_c: f64) -> Result<()> {
    if !(log_c.is_finite() && log_c > 0.0) {
        return Err(Error::Domain(format!(
            "conductor logarithm must be positive, got {log_c}"
        )));
    }
    Ok(())
}

/// Archimedean contribution of the spin gamma factor to the one-level
/// scaling, relative to log of the analytic conductor:
/// (2 log(k₁+k₂) + 2 log(k₁-k₂+1)) / log_c. Equals 1 when log_c is the log
/// of the spin analytic conductor at trivial finite conductor.
pub fn gamma_log_contrib_spin(k1: u64, k2: u64, log_c: f64) -> Result<f64> {
    weight_ok(k1, k2)?;
    check_log_c(log_c)?;
    Ok((2.0 * ((k1 + k2) as f64).ln() + 2.0 * ((k1 - k2 + 1) as f64).ln()) / log_c)
}

/// Archimedean contribution of the standard gamma factor:
/// (2 log k₁ + 2 log k₂) / log_c.
pub fn gamma_log_contrib_std(k1: u64, k2: u64, log_c: f64) -> Result<f64> {
    weight_ok(k1, k2)?;
    check_log_c(log_c)?;
    Ok((2.0 * (k1 as f64).ln() + 2.0 * (k2 as f64).ln()) / log_c)
}

/// Standard Dirichlet coefficient b(p^l) of a spherical unitary class (the
/// l-th power sum of its standard parameter multiset).
pub fn b_power(class: &UnitaryClass, p: f64, l: u32) -> Result<f64> {
    validate_p(p)?;
    let lf = l as f64;
    Ok(match *class {
        UnitaryClass::S1 { phi1, phi2 } => 1.0 + 2.0 * (lf * phi1).cos() + 2.0 * (lf * phi2).cos(),
        UnitaryClass::S2 { beta, phi, .. } => {
            1.0 + (p.powf(lf * beta) + p.powf(-lf * beta)) * 2.0 * (lf * phi).cos()
        }
        UnitaryClass::S3 { beta, phi, .. } => {
            1.0 + p.powf(lf * beta) + p.powf(-lf * beta) + 2.0 * (lf * phi).cos()
        }
        UnitaryClass::S4 {
            beta1, beta2, sign, ..
        } => {
            1.0 + sign.powi(l as i32)
                * (p.powf(lf * beta1)
                    + p.powf(lf * beta2)
                    + p.powf(-lf * beta1)
                    + p.powf(-lf * beta2))
        }
    })
}

/// Class-wise majorant of |b(p^l)|: 5 for tempered, 2p^{lβ}+3 for the
/// complementary classes (largest exponent), p^{lβ}+p^{-lβ}+3 for the
/// mixed class.
pub fn b_majorant(class: &UnitaryClass, p: f64, l: u32) -> Result<f64> {
    validate_p(p)?;
    let lf = l as f64;
    Ok(match *class {
        UnitaryClass::S1 { .. } => 5.0,
        UnitaryClass::S2 { beta, .. } => 2.0 * p.powf(lf * beta) + 3.0,
        UnitaryClass::S3 { beta, .. } => p.powf(lf * beta) + p.powf(-lf * beta) + 3.0,
        UnitaryClass::S4 { beta1, .. } => 2.0 * p.powf(lf * beta1) + 3.0,
    })
}

/// Partial tail Σ_{l=l_min}^{l_max} |b(p^l)| log p / p^{l/2} of the
/// standard -L'/L prime-power sum at a fixed prime.
pub fn tail_sum(class: &UnitaryClass, p: f64, l_min: u32, l_max: u32) -> Result<f64> {
    validate_p(p)?;
    if l_min == 0 || l_max < l_min {
        return Err(Error::Domain(format!(
            "tail range needs 1 <= l_min <= l_max, got [{l_min}, {l_max}]"
        )));
    }
    let logp = p.ln();
    let mut s = 0.0;
    for l in l_min..=l_max {
        s += b_power(class, p, l)?.abs() * logp / p.powf(l as f64 / 2.0);
    }
    Ok(s)
}

/// Geometric series Σ_{l ≥ l_min} r^l = r^{l_min}/(1-r) for 0 < r < 1.
fn geometric_tail(r: f64, l_min: u32) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Domain(format!(
            "tail ratio {r} outside (0, 1): the majorant series diverges"
        )));
    }
    Ok(r.powi(l_min as i32) / (1.0 - r))
}

/// Closed-form bound on the full tail Σ_{l ≥ l_min} majorant(l) log p /
/// p^{l/2}. Finite exactly when the class's largest exponent is < 1/2
/// (always true under the temperedness exponent bound); otherwise errors.
pub fn tail_majorant_sum(class: &UnitaryClass, p: f64, l_min: u32) -> Result<f64> {
    validate_p(p)?;
    if l_min == 0 {
        return Err(Error::Domain("tail start must be at least 1".into()));
    }
    let logp = p.ln();
    let r0 = p.powf(-0.5);
    let value = match *class {
        UnitaryClass::S1 { .. } => 5.0 * geometric_tail(r0, l_min)?,
        UnitaryClass::S2 { beta, .. } => {
            2.0 * geometric_tail(p.powf(beta - 0.5), l_min)? + 3.0 * geometric_tail(r0, l_min)?
        }
        UnitaryClass::S3 { beta, .. } => {
            geometric_tail(p.powf(beta - 0.5), l_min)?
                + geometric_tail(p.powf(-beta - 0.5), l_min)?
                + 3.0 * geometric_tail(r0, l_min)?
        }
        UnitaryClass::S4 { beta1, .. } => {
            2.0 * geometric_tail(p.powf(beta1 - 0.5), l_min)? + 3.0 * geometric_tail(r0, l_min)?
        }
    };
    Ok(value * logp)
}

/// Whether every exponent of the class respects the temperedness bound
/// β ≤ 1/2 - 1/26 (up to a 1e-9 slack).
pub fn lrs_bound_check(class: &UnitaryClass) -> bool {
    const SLACK: f64 = 1e-9;
    match *class {
        UnitaryClass::S1 { .. } => true,
        UnitaryClass::S2 { beta, .. } | UnitaryClass::S3 { beta, .. } => {
            beta <= LRS_EXPONENT + SLACK
        }
        UnitaryClass::S4 { beta1, .. } => beta1 <= LRS_EXPONENT + SLACK,
    }
}

/// Uniform bound 5 p^{l (1/2 - 1/26)} on |b(p^l)| under the temperedness
/// exponent bound.
pub fn lrs_power_bound(p: f64, l: u32) -> Result<f64> {
    validate_p(p)?;
    Ok(5.0 * p.powf(l as f64 * LRS_EXPONENT))
}
