//! Satake-parameter coordinate systems and the unitary shape classification.
//!
//! An unramified local representation of the similitude symplectic group of
//! genus two carries four *spin* Satake parameters whose pairwise products
//! satisfy one multiplicative relation, and five *standard* parameters
//! obtained from ratios of the spin ones. In the tempered (Ramanujan) case
//! everything is determined by a pair of angles (θ₁, θ₂) ∈ [0, π]², or
//! equivalently by the point (x, y) = (2 cos θ₁, 2 cos θ₂) in the square
//! [-2, 2]². This module converts between the three pictures and classifies
//! an arbitrary standard parameter multiset into the four unitary shapes
//! (one tempered, three non-tempered with bounded exponents).

use num_complex::Complex64;

use crate::error::Error;
use crate::Result;

/// Matching tolerance for classifying parameter multisets into unitary
/// shapes, and for flagging exponents that sit on an interval wall.
pub const CLASSIFY_TOL: f64 = 1e-9;

/// A point of the fundamental angle domain [0, π]².
///
/// All densities in this crate are symmetric under swapping the two angles;
/// no ordering is imposed here, but [`SatakeAngles::ordered`] produces the
/// representative with θ₁ ≤ θ₂ used for ingestion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SatakeAngles {
    /// First angle, in [0, π].
    pub theta1: f64,
    /// Second angle, in [0, π].
    pub theta2: f64,
}

impl SatakeAngles {
    /// Validating constructor: both angles must be finite and in [0, π].
    pub fn new(theta1: f64, theta2: f64) -> Result<Self> {
        for (name, t) in [("theta1", theta1), ("theta2", theta2)] {
            if !t.is_finite() || !(0.0..=std::f64::consts::PI).contains(&t) {
                return Err(Error::Domain(format!("{name} = {t} is outside [0, pi]")));
            }
        }
        Ok(Self { theta1, theta2 })
    }

    /// The representative with θ₁ ≤ θ₂ (swap-symmetric classes).
    pub fn ordered(self) -> Self {
        if self.theta1 <= self.theta2 {
            self
        } else {
            Self {
                theta1: self.theta2,
                theta2: self.theta1,
            }
        }
    }

    /// Inverse of [`OmegaPoint::from_angles`]: θᵢ = arccos(coordinate / 2).
    ///
    /// Note the cosine map reverses orientation, so x ≤ x' corresponds to
    /// θ ≥ θ'.
    pub fn from_omega(pt: OmegaPoint) -> Self {
        Self {
            theta1: (pt.x / 2.0).clamp(-1.0, 1.0).acos(),
            theta2: (pt.y / 2.0).clamp(-1.0, 1.0).acos(),
        }
    }
}

/// A point of the eigenvalue square Ω = [-2, 2]², the image of the angle
/// domain under (x, y) = (2 cos θ₁, 2 cos θ₂).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaPoint {
    /// First coordinate, 2 cos θ₁ ∈ [-2, 2].
    pub x: f64,
    /// Second coordinate, 2 cos θ₂ ∈ [-2, 2].
    pub y: f64,
}

impl OmegaPoint {
    /// Validating constructor: both coordinates must be finite and in
    /// [-2, 2].
    pub fn new(x: f64, y: f64) -> Result<Self> {
        for (name, v) in [("x", x), ("y", y)] {
            if !v.is_finite() || !(-2.0..=2.0).contains(&v) {
                return Err(Error::Domain(format!("{name} = {v} is outside [-2, 2]")));
            }
        }
        Ok(Self { x, y })
    }

    /// Push a pair of angles to the eigenvalue square.
    pub fn from_angles(a: SatakeAngles) -> Self {
        Self {
            x: 2.0 * a.theta1.cos(),
            y: 2.0 * a.theta2.cos(),
        }
    }
}

/// The four spin Satake parameters, stored so that the outer pair and the
/// inner pair have the same product (the similitude value):
/// `values[0] * values[3] == values[1] * values[2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinParams {
    /// Parameter multiset in pairing order.
    pub values: [Complex64; 4],
}

impl SpinParams {
    /// Validating constructor: all entries nonzero and the pairing relation
    /// satisfied to relative tolerance [`CLASSIFY_TOL`].
    pub fn new(values: [Complex64; 4]) -> Result<Self> {
        for v in &values {
            if v.norm() == 0.0 || !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::Domain(format!(
                    "spin parameter {v} is zero or non-finite"
                )));
            }
        }
        let outer = values[0] * values[3];
        let inner = values[1] * values[2];
        let scale = outer.norm().max(inner.norm()).max(1.0);
        if (outer - inner).norm() > CLASSIFY_TOL * scale {
            return Err(Error::Unitarity(format!(
                "pairing products differ: {outer} vs {inner}"
            )));
        }
        Ok(Self { values })
    }

    /// Tempered spin parameters for a pair of angles:
    /// {e^{iθ₁}, e^{iθ₂}, e^{-iθ₂}, e^{-iθ₁}} (similitude value 1).
    pub fn from_angles(a: SatakeAngles) -> Self {
        let e = |t: f64| Complex64::from_polar(1.0, t);
        Self {
            values: [e(a.theta1), e(a.theta2), e(-a.theta2), e(-a.theta1)],
        }
    }

    /// Common value of the two pairing products (the similitude character at
    /// p; 1 for the normalized tempered parameters).
    pub fn similitude(&self) -> Complex64 {
        self.values[0] * self.values[3]
    }

    /// Power sum Σ vᵢᵈ of the spin parameters. For parameters coming from a
    /// self-dual multiset this is real; callers needing a real value should
    /// check the imaginary residue.
    pub fn power_sum(&self, d: u32) -> Complex64 {
        self.values.iter().map(|v| v.powu(d)).sum()
    }

    /// Elementary symmetric functions (e₁, e₂, e₃, e₄) of the spin
    /// parameters, i.e. the coefficients of ∏(T + vᵢ).
    pub fn elementary(&self) -> [Complex64; 4] {
        let [a, b, c, d] = self.values;
        let e1 = a + b + c + d;
        let e2 = a * b + a * c + a * d + b * c + b * d + c * d;
        let e3 = a * b * c + a * b * d + a * c * d + b * c * d;
        let e4 = a * b * c * d;
        [e1, e2, e3, e4]
    }

    /// The five standard parameters {1, v₁/v₀, v₀/v₁, v₂/v₀, v₀/v₂}.
    ///
    /// For tempered parameters from angles this is
    /// {1, e^{±i(θ₁-θ₂)}, e^{±i(θ₁+θ₂)}}.
    pub fn to_standard(&self) -> StandardParams {
        let [v0, v1, v2, _] = self.values;
        StandardParams {
            values: [Complex64::new(1.0, 0.0), v1 / v0, v0 / v1, v2 / v0, v0 / v2],
        }
    }
}

/// The five standard (degree-five) Satake parameters. The physically
/// meaningful multisets are closed under v ↦ 1/v and contain 1; the
/// classification below checks those shapes, the constructor only rejects
/// zero or non-finite entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandardParams {
    /// Parameter multiset (order not significant).
    pub values: [Complex64; 5],
}

impl StandardParams {
    /// Validating constructor: all entries nonzero and finite.
    pub fn new(values: [Complex64; 5]) -> Result<Self> {
        for v in &values {
            if v.norm() == 0.0 || !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::Domain(format!(
                    "standard parameter {v} is zero or non-finite"
                )));
            }
        }
        Ok(Self { values })
    }

    /// Power sum Σ vᵢᵈ of the standard parameters.
    pub fn power_sum(&self, d: u32) -> Complex64 {
        self.values.iter().map(|v| v.powu(d)).sum()
    }
}

/// The four shapes of spherical unitary parameter multisets: one tempered
/// class and three non-tempered classes with explicitly bounded exponents.
///
/// Exponents are measured in units of log p; `boundary` is set when an
/// exponent sits within [`CLASSIFY_TOL`] of a wall of its open interval
/// (the point is then classified into the nearest class).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UnitaryClass {
    /// Tempered: {1, e^{±iφ₁}, e^{±iφ₂}}.
    S1 {
        /// First phase, in [0, π].
        phi1: f64,
        /// Second phase, in [0, π].
        phi2: f64,
    },
    /// Complementary series off a unitary character pair:
    /// {1, p^β e^{±iφ}, p^{-β} e^{±iφ}} with 0 < β < 1/2 and e^{2iφ} ≠ 1.
    S2 {
        /// Exponent, in (0, 1/2).
        beta: f64,
        /// Phase, in (0, π).
        phi: f64,
        /// Exponent within tolerance of an interval wall.
        boundary: bool,
    },
    /// Mixed class {1, p^β, p^{-β}, e^{±iφ}} with 0 < β < 1.
    S3 {
        /// Exponent, in (0, 1).
        beta: f64,
        /// Phase, in [0, π].
        phi: f64,
        /// Exponent within tolerance of an interval wall.
        boundary: bool,
    },
    /// Doubly non-tempered class {1, p^{β₁} s, p^{β₂} s, p^{-β₁} s, p^{-β₂} s}
    /// with a sign s = ±1 (the phase is forced real by unitarity),
    /// 0 < β₂ ≤ β₁ and β₁ + β₂ < 1.
    S4 {
        /// Larger exponent.
        beta1: f64,
        /// Smaller exponent, 0 < β₂ ≤ β₁.
        beta2: f64,
        /// Common sign of all non-unit entries.
        sign: f64,
        /// Exponent within tolerance of an interval wall.
        boundary: bool,
    },
}

/// Normalize a complex argument into (-π, π], mapping the -π edge to +π so
/// that e^{iπ} and e^{-iπ} compare equal.
fn norm_phase(v: Complex64) -> f64 {
    let a = v.arg();
    if a <= -std::f64::consts::PI + 1e-12 {
        a + 2.0 * std::f64::consts::PI
    } else {
        a
    }
}

/// Do two phases form a conjugate pair (a ≈ -b modulo 2π)?
fn conj_pair(a: f64, b: f64, tol: f64) -> bool {
    let s = a + b;
    s.abs() <= tol || (s.abs() - 2.0 * std::f64::consts::PI).abs() <= tol
}

/// Classify a standard parameter multiset into one of the four unitary
/// shapes at the prime `p`.
///
/// The multiset must contain an entry equal to 1 (within [`CLASSIFY_TOL`])
/// and the remaining four entries must match one of the modulus/phase
/// patterns; otherwise [`Error::Unclassifiable`] is returned. Exponents
/// beyond their open intervals by more than the tolerance are also
/// unclassifiable; exponents within tolerance of a wall set the `boundary`
/// flag.
pub fn classify_unitary(params: &StandardParams, p: f64) -> Result<UnitaryClass> {
    if p.is_nan() || p <= 1.0 {
        return Err(Error::Domain(format!("prime value p = {p} must exceed 1")));
    }
    let tol = CLASSIFY_TOL;
    let logp = p.ln();

    // Remove the entry closest to 1; its residual must be within tolerance.
    let (unit_idx, unit_res) = params
        .values
        .iter()
        .enumerate()
        .map(|(i, v)| (i, (v - Complex64::new(1.0, 0.0)).norm()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("five entries");
    if unit_res > tol {
        return Err(Error::Unclassifiable(format!(
            "no entry equal to 1 (closest residual {unit_res:.3e})"
        )));
    }
    let mut rest: Vec<Complex64> = params
        .values
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != unit_idx)
        .map(|(_, v)| *v)
        .collect();
    // Sort by modulus exponent descending, phase as tiebreak, so the four
    // patterns below can be read off positionally.
    rest.sort_by(|a, b| {
        b.norm()
            .total_cmp(&a.norm())
            .then(norm_phase(*a).total_cmp(&norm_phase(*b)))
    });
    let exps: Vec<f64> = rest.iter().map(|v| v.norm().ln() / logp).collect();
    let phases: Vec<f64> = rest.iter().map(|v| norm_phase(*v)).collect();
    let (e1, e2, e3, e4) = (exps[0], exps[1], exps[2], exps[3]);

    // Tempered: all four on the unit circle, two conjugate pairs.
    if exps.iter().all(|e| e.abs() <= tol) {
        let mut ph = phases.clone();
        ph.sort_by(f64::total_cmp);
        if conj_pair(ph[0], ph[3], tol) && conj_pair(ph[1], ph[2], tol) {
            return Ok(UnitaryClass::S1 {
                phi1: ph[3].abs(),
                phi2: ph[2].abs(),
            });
        }
        return Err(Error::Unclassifiable(
            "unit-modulus entries are not closed under conjugation".into(),
        ));
    }

    let near = |a: f64, b: f64| (a - b).abs() <= tol;
    let wall = |v: f64, w: f64| (v - w).abs() <= tol;

    // Pattern {p^β ·, p^β ·, p^{-β} ·, p^{-β} ·}: the S2 shape or the
    // equal-exponent S4 shape, split by whether the phase is real.
    if e1 > tol && near(e1, e2) && near(e3, -e1) && near(e4, -e1) {
        let beta = (e1 + e2 - e3 - e4) / 4.0;
        let top_conj = conj_pair(phases[0], phases[1], tol);
        let bot_conj = conj_pair(phases[2], phases[3], tol);
        let phi = phases[0].abs();
        if top_conj && bot_conj && near(phi, phases[2].abs()) {
            let real_phase = phi.sin().abs() <= tol;
            if real_phase {
                // Phase ±1: this is the equal-exponent point of the fourth
                // class (the second class requires a non-real phase).
                let sign = if phi <= std::f64::consts::FRAC_PI_2 {
                    1.0
                } else {
                    -1.0
                };
                if 2.0 * beta > 1.0 + tol {
                    return Err(Error::Unclassifiable(format!(
                        "equal exponents {beta:.6} exceed the β₁+β₂ < 1 wall"
                    )));
                }
                return Ok(UnitaryClass::S4 {
                    beta1: beta,
                    beta2: beta,
                    sign,
                    boundary: wall(2.0 * beta, 1.0) || wall(beta, 0.0),
                });
            }
            if beta > 0.5 + tol {
                return Err(Error::Unclassifiable(format!(
                    "exponent {beta:.6} exceeds the β < 1/2 wall"
                )));
            }
            return Ok(UnitaryClass::S2 {
                beta,
                phi,
                boundary: wall(beta, 0.0) || wall(beta, 0.5),
            });
        }
        return Err(Error::Unclassifiable(
            "doubled-exponent pattern without conjugate phase pairs".into(),
        ));
    }

    // Pattern {p^β, ·, ·, p^{-β}} with two unit-modulus entries: S3.
    if e1 > tol && e2.abs() <= tol && e3.abs() <= tol && near(e4, -e1) {
        let beta = (e1 - e4) / 2.0;
        // The off-circle entries must be positive reals p^{±β}.
        if phases[0].abs() > tol || phases[3].abs() > tol {
            return Err(Error::Unclassifiable(
                "real-exponent entries of the mixed pattern are not positive reals".into(),
            ));
        }
        if !conj_pair(phases[1], phases[2], tol) {
            return Err(Error::Unclassifiable(
                "unit-modulus entries of the mixed pattern are not conjugate".into(),
            ));
        }
        if beta > 1.0 + tol {
            return Err(Error::Unclassifiable(format!(
                "exponent {beta:.6} exceeds the β < 1 wall"
            )));
        }
        return Ok(UnitaryClass::S3 {
            beta,
            phi: phases[1].abs(),
            boundary: wall(beta, 0.0) || wall(beta, 1.0),
        });
    }

    // Pattern {p^{β₁} s, p^{β₂} s, p^{-β₂} s, p^{-β₁} s} with distinct
    // exponents and a common real sign: S4.
    if e1 > e2 + tol && e2 > tol && near(e3, -e2) && near(e4, -e1) {
        let beta1 = (e1 - e4) / 2.0;
        let beta2 = (e2 - e3) / 2.0;
        if phases.iter().any(|ph| ph.sin().abs() > tol) {
            return Err(Error::Unclassifiable(
                "distinct-exponent pattern with a non-real phase".into(),
            ));
        }
        let signs: Vec<f64> = phases.iter().map(|ph| ph.cos().signum()).collect();
        if signs.windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::Unclassifiable(
                "distinct-exponent pattern with mismatched signs".into(),
            ));
        }
        if beta1 + beta2 > 1.0 + tol {
            return Err(Error::Unclassifiable(format!(
                "exponents ({beta1:.6}, {beta2:.6}) exceed the β₁+β₂ < 1 wall"
            )));
        }
        return Ok(UnitaryClass::S4 {
            beta1,
            beta2,
            sign: signs[0],
            boundary: wall(beta1 + beta2, 1.0) || wall(beta2, 0.0),
        });
    }

    Err(Error::Unclassifiable(format!(
        "modulus exponents ({e1:.6}, {e2:.6}, {e3:.6}, {e4:.6}) match no unitary pattern"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn angle_domain_is_validated() {
        assert!(SatakeAngles::new(0.0, PI).is_ok());
        assert!(SatakeAngles::new(-0.1, 1.0).is_err());
        assert!(SatakeAngles::new(1.0, PI + 0.1).is_err());
        assert!(SatakeAngles::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn omega_round_trip() {
        let a = SatakeAngles::new(0.3, 2.1).unwrap();
        let pt = OmegaPoint::from_angles(a);
        let back = SatakeAngles::from_omega(pt);
        assert_abs_diff_eq!(back.theta1, a.theta1, epsilon = 1e-12);
        assert_abs_diff_eq!(back.theta2, a.theta2, epsilon = 1e-12);
        // Center of the angle square maps to the center of Ω.
        let c = OmegaPoint::from_angles(SatakeAngles::new(PI / 2.0, PI / 2.0).unwrap());
        assert_abs_diff_eq!(c.x, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.y, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn spin_pairing_and_power_sums() {
        let a = SatakeAngles::new(1.1, 2.4).unwrap();
        let spin = SpinParams::from_angles(a);
        assert_abs_diff_eq!(spin.similitude().re, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(spin.similitude().im, 0.0, epsilon = 1e-14);
        // First spin power sum is x + y, second is x² + y² - 4.
        let pt = OmegaPoint::from_angles(a);
        let p1 = spin.power_sum(1);
        assert_abs_diff_eq!(p1.re, pt.x + pt.y, epsilon = 1e-12);
        assert_abs_diff_eq!(p1.im, 0.0, epsilon = 1e-12);
        let p2 = spin.power_sum(2);
        assert_abs_diff_eq!(p2.re, pt.x * pt.x + pt.y * pt.y - 4.0, epsilon = 1e-12);
    }

    #[test]
    fn spin_constructor_rejects_broken_pairing() {
        let vals = [
            Complex64::new(2.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
        ];
        assert!(matches!(SpinParams::new(vals), Err(Error::Unitarity(_))));
    }

    #[test]
    fn standard_parameters_from_tempered_spin() {
        let a = SatakeAngles::new(0.7, 1.9).unwrap();
        let std = SpinParams::from_angles(a).to_standard();
        // Expected multiset: {1, e^{±i(θ₁-θ₂)}, e^{±i(θ₁+θ₂)}}.
        let mut expected = [
            Complex64::new(1.0, 0.0),
            Complex64::from_polar(1.0, a.theta2 - a.theta1),
            Complex64::from_polar(1.0, a.theta1 - a.theta2),
            Complex64::from_polar(1.0, -(a.theta1 + a.theta2)),
            Complex64::from_polar(1.0, a.theta1 + a.theta2),
        ];
        let mut got = std.values.to_vec();
        let key = |v: &Complex64| (v.re, v.im);
        expected.sort_by(|u, v| key(u).partial_cmp(&key(v)).unwrap());
        got.sort_by(|u, v| key(u).partial_cmp(&key(v)).unwrap());
        for (g, e) in got.iter().zip(expected.iter()) {
            assert_abs_diff_eq!(g.re, e.re, epsilon = 1e-12);
            assert_abs_diff_eq!(g.im, e.im, epsilon = 1e-12);
        }
        // Degree-one standard power sum is 1 + xy.
        let pt = OmegaPoint::from_angles(a);
        assert_abs_diff_eq!(std.power_sum(1).re, 1.0 + pt.x * pt.y, epsilon = 1e-12);
    }

    #[test]
    fn classify_tempered() {
        let a = SatakeAngles::new(0.9, 2.2).unwrap();
        let std = SpinParams::from_angles(a).to_standard();
        match classify_unitary(&std, 3.0).unwrap() {
            UnitaryClass::S1 { phi1, phi2 } => {
                let mut expected = [a.theta2 - a.theta1, a.theta1 + a.theta2];
                expected.sort_by(f64::total_cmp);
                let mut got = [phi2, phi1];
                got.sort_by(f64::total_cmp);
                assert_abs_diff_eq!(got[0], expected[0], epsilon = 1e-12);
                assert_abs_diff_eq!(got[1], expected[1], epsilon = 1e-12);
            }
            other => panic!("expected tempered class, got {other:?}"),
        }
    }

    #[test]
    fn classify_mixed_shape() {
        // {1, p^{1/2}, p^{-1/2}, e^{±iφ}}: the mixed class with β = 1/2.
        let p = 5.0_f64;
        let phi = 1.3_f64;
        let std = StandardParams::new([
            Complex64::new(1.0, 0.0),
            Complex64::new(p.sqrt(), 0.0),
            Complex64::new(1.0 / p.sqrt(), 0.0),
            Complex64::from_polar(1.0, phi),
            Complex64::from_polar(1.0, -phi),
        ])
        .unwrap();
        match classify_unitary(&std, p).unwrap() {
            UnitaryClass::S3 {
                beta,
                phi: got,
                boundary,
            } => {
                assert_abs_diff_eq!(beta, 0.5, epsilon = 1e-12);
                assert_abs_diff_eq!(got, phi, epsilon = 1e-12);
                assert!(!boundary);
            }
            other => panic!("expected mixed class, got {other:?}"),
        }
    }

    #[test]
    fn classify_complementary_shape_and_boundary() {
        let p = 2.0_f64;
        let make = |beta: f64, phi: f64| {
            StandardParams::new([
                Complex64::new(1.0, 0.0),
                Complex64::from_polar(p.powf(beta), phi),
                Complex64::from_polar(p.powf(beta), -phi),
                Complex64::from_polar(p.powf(-beta), phi),
                Complex64::from_polar(p.powf(-beta), -phi),
            ])
            .unwrap()
        };
        match classify_unitary(&make(0.49, 1.0), p).unwrap() {
            UnitaryClass::S2 {
                beta,
                phi,
                boundary,
            } => {
                assert_abs_diff_eq!(beta, 0.49, epsilon = 1e-12);
                assert_abs_diff_eq!(phi, 1.0, epsilon = 1e-12);
                assert!(!boundary);
            }
            other => panic!("expected complementary class, got {other:?}"),
        }
        // β exactly on the 1/2 wall: still classified, flagged as boundary.
        match classify_unitary(&make(0.5, 1.0), p).unwrap() {
            UnitaryClass::S2 { boundary, .. } => assert!(boundary),
            other => panic!("expected complementary class, got {other:?}"),
        }
        // β beyond the wall: no unitary shape.
        assert!(matches!(
            classify_unitary(&make(0.6, 1.0), p),
            Err(Error::Unclassifiable(_))
        ));
    }

    #[test]
    fn classify_doubly_nontempered_shape() {
        let p = 7.0_f64;
        let (b1, b2) = (0.4, 0.3);
        let s = -1.0;
        let std = StandardParams::new([
            Complex64::new(1.0, 0.0),
            Complex64::new(s * p.powf(b1), 0.0),
            Complex64::new(s * p.powf(b2), 0.0),
            Complex64::new(s * p.powf(-b1), 0.0),
            Complex64::new(s * p.powf(-b2), 0.0),
        ])
        .unwrap();
        match classify_unitary(&std, p).unwrap() {
            UnitaryClass::S4 {
                beta1,
                beta2,
                sign,
                boundary,
            } => {
                assert_abs_diff_eq!(beta1, b1, epsilon = 1e-12);
                assert_abs_diff_eq!(beta2, b2, epsilon = 1e-12);
                assert_eq!(sign, s);
                assert!(!boundary);
            }
            other => panic!("expected doubly non-tempered class, got {other:?}"),
        }
    }

    #[test]
    fn equal_exponent_real_phase_goes_to_fourth_class() {
        // The second class excludes real phases; {1, ±p^β, ±p^β, ±p^{-β},
        // ±p^{-β}} lands in the fourth class with β₁ = β₂.
        let p = 3.0_f64;
        let beta = 0.3;
        let std = StandardParams::new([
            Complex64::new(1.0, 0.0),
            Complex64::new(-p.powf(beta), 0.0),
            Complex64::new(-p.powf(beta), 0.0),
            Complex64::new(-p.powf(-beta), 0.0),
            Complex64::new(-p.powf(-beta), 0.0),
        ])
        .unwrap();
        match classify_unitary(&std, p).unwrap() {
            UnitaryClass::S4 {
                beta1, beta2, sign, ..
            } => {
                assert_abs_diff_eq!(beta1, beta, epsilon = 1e-12);
                assert_abs_diff_eq!(beta2, beta, epsilon = 1e-12);
                assert_eq!(sign, -1.0);
            }
            other => panic!("expected doubly non-tempered class, got {other:?}"),
        }
    }

    #[test]
    fn unclassifiable_patterns_error() {
        let p = 3.0_f64;
        // Doubled exponents with equal (non-conjugate) complex phases.
        let bad = StandardParams::new([
            Complex64::new(1.0, 0.0),
            Complex64::from_polar(p.powf(0.3), 0.7),
            Complex64::from_polar(p.powf(0.3), 0.7),
            Complex64::from_polar(p.powf(-0.3), -0.7),
            Complex64::from_polar(p.powf(-0.3), -0.7),
        ])
        .unwrap();
        assert!(matches!(
            classify_unitary(&bad, p),
            Err(Error::Unclassifiable(_))
        ));
        // Exponents with no pairing at all.
        let worse = StandardParams::new([
            Complex64::new(1.0, 0.0),
            Complex64::new(p.powf(0.3), 0.0),
            Complex64::new(p.powf(0.2), 0.0),
            Complex64::new(p.powf(-0.1), 0.0),
            Complex64::new(p.powf(-0.4), 0.0),
        ])
        .unwrap();
        assert!(matches!(
            classify_unitary(&worse, p),
            Err(Error::Unclassifiable(_))
        ));
        // No entry equal to 1.
        let shifted = StandardParams::new([
            Complex64::new(1.1, 0.0),
            Complex64::from_polar(1.0, 0.4),
            Complex64::from_polar(1.0, -0.4),
            Complex64::from_polar(1.0, 2.0),
            Complex64::from_polar(1.0, -2.0),
        ])
        .unwrap();
        assert!(matches!(
            classify_unitary(&shifted, p),
            Err(Error::Unclassifiable(_))
        ));
    }
}
