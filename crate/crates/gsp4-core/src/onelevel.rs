//! One-level-density machinery: the five symmetry-type density kernels and
//! their Fourier transforms, Fejér test functions, the pairing
//! ∫ φ W(G) dx evaluated independently on both sides of Plancherel, the
//! family predictions for the degree-4 and degree-5 L-functions, and the
//! averaged explicit-formula prime sums over a family dataset.
//!
//! Kernel conventions: each density W(G) splits into a continuous part and
//! a point mass at 0; each Fourier transform Ŵ(G) splits into a unit point
//! mass at 0 and a continuous part. The continuous Fourier part of the
//! odd orthogonal type is -½ χ_{[-1,1]}(y) + 1: the displayed source for
//! this table drops the ½ from the indicator term, but that normalization
//! fails Plancherel against W(SO(odd)) = 1 - sinc + δ₀ (and breaks the
//! coincidence of the three orthogonal flavors below support 1), so the
//! self-checking pairing here forces the corrected value.

use serde::Serialize;

use crate::error::Error;
use crate::harness::{self, FamilyDataset};
use crate::quad;
use crate::Result;

/// Allowed |direct − Fourier| discrepancy in [`pair`] before the
/// computation is reported as inconsistent.
pub const PLANCHEREL_TOL: f64 = 1e-5;

/// The five Katz–Sarnak symmetry types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SymmetryType {
    /// Unitary: W = 1.
    Unitary,
    /// Even orthogonal: W = 1 + sinc.
    SOEven,
    /// Odd orthogonal: W = 1 - sinc + δ₀.
    SOOdd,
    /// Full orthogonal: W = 1 + ½ δ₀.
    Orthogonal,
    /// Symplectic: W = 1 - sinc.
    Symplectic,
}

impl std::str::FromStr for SymmetryType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "u" | "unitary" => Ok(Self::Unitary),
            "so-even" | "soeven" => Ok(Self::SOEven),
            "so-odd" | "soodd" => Ok(Self::SOOdd),
            "o" | "orthogonal" => Ok(Self::Orthogonal),
            "sp" | "symplectic" => Ok(Self::Symplectic),
            other => Err(Error::Domain(format!("unknown symmetry type '{other}'"))),
        }
    }
}

/// sin(2πx)/(2πx), continued by 1 at x = 0.
fn sinc_2pi(x: f64) -> f64 {
    let t = 2.0 * std::f64::consts::PI * x;
    if t.abs() < 1e-8 {
        1.0 - t * t / 6.0
    } else {
        t.sin() / t
    }
}

/// Continuous part of the density kernel W(G)(x).
pub fn density_kernel(g: SymmetryType, x: f64) -> f64 {
    match g {
        SymmetryType::Unitary | SymmetryType::Orthogonal => 1.0,
        SymmetryType::SOEven => 1.0 + sinc_2pi(x),
        SymmetryType::SOOdd | SymmetryType::Symplectic => 1.0 - sinc_2pi(x),
    }
}

/// Coefficient of δ₀ in W(G).
pub fn density_atom(g: SymmetryType) -> f64 {
    match g {
        SymmetryType::SOOdd => 1.0,
        SymmetryType::Orthogonal => 0.5,
        _ => 0.0,
    }
}

/// Continuous part of the Fourier transform Ŵ(G)(y) (the unit δ₀ atom is
/// in [`fourier_atom`]). The indicator is taken closed: χ_{[-1,1]}(±1) = 1.
pub fn fourier_kernel(g: SymmetryType, y: f64) -> f64 {
    let chi = if y.abs() <= 1.0 { 1.0 } else { 0.0 };
    match g {
        SymmetryType::Unitary => 0.0,
        SymmetryType::SOEven => 0.5 * chi,
        SymmetryType::Orthogonal => 0.5,
        SymmetryType::SOOdd => -0.5 * chi + 1.0,
        SymmetryType::Symplectic => -0.5 * chi,
    }
}

/// Coefficient of δ₀ in Ŵ(G) (1 for every type).
pub fn fourier_atom(_g: SymmetryType) -> f64 {
    1.0
}

/// Fejér test function of support parameter u: φ̂(y) = max(0, 1 - |y|/u)
/// and φ(x) = u (sin(πux)/(πux))², so φ̂(0) = 1 and φ(0) = u.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TestFunction {
    u: f64,
}

/// Construct the Fejér test function with Fourier support [-u, u].
pub fn fejer(u: f64) -> Result<TestFunction> {
    if !(u.is_finite() && u > 0.0) {
        return Err(Error::Domain(format!(
            "Fejér support parameter must be positive, got {u}"
        )));
    }
    Ok(TestFunction { u })
}

impl TestFunction {
    /// Support radius of φ̂.
    pub fn support(&self) -> f64 {
        self.u
    }

    /// φ(x) = u (sin(πux)/(πux))².
    pub fn phi(&self, x: f64) -> f64 {
        let t = std::f64::consts::PI * self.u * x;
        if t.abs() < 1e-8 {
            self.u * (1.0 - t * t / 3.0)
        } else {
            let s = t.sin() / t;
            self.u * s * s
        }
    }

    /// φ̂(y) = max(0, 1 - |y|/u).
    pub fn phi_hat(&self, y: f64) -> f64 {
        (1.0 - y.abs() / self.u).max(0.0)
    }
}

/// π/2 - Si(z) by the large-argument asymptotic series (two terms each in
/// the cos and sin envelopes; adequate for z ≳ 100).
fn si_complement(z: f64) -> f64 {
    let z2 = z * z;
    (z.cos() / z) * (1.0 - 2.0 / z2) + (z.sin() / z2) * (1.0 - 6.0 / z2)
}

/// Direct side of the pairing: ∫ φ(x) W(G)(x) dx with the continuous part
/// integrated by composite quadrature over a window [-X, X] plus an
/// analytic estimate of the truncated 1/x² tail of φ; the atom contributes
/// atom · φ(0).
fn pair_direct(phi: &TestFunction, g: SymmetryType) -> f64 {
    let u = phi.u;
    let x_max = 400.0 / u;
    let sinc_coeff = match g {
        SymmetryType::SOEven => 1.0,
        SymmetryType::SOOdd | SymmetryType::Symplectic => -1.0,
        _ => 0.0,
    };
    // Panels short enough that both the period-1/u oscillation of φ and
    // the period-1 oscillation of sinc are resolved by an order-16 rule.
    let h_target = (0.2 / u).min(0.5);
    let segments = (x_max / h_target).ceil() as usize;
    let h = x_max / segments as f64;
    let mut s = 0.0;
    for i in 0..segments {
        let a = i as f64 * h;
        s += quad::integrate_1d(
            |x| phi.phi(x) * (1.0 + sinc_coeff * sinc_2pi(x)),
            a,
            a + h,
            16,
        );
    }
    // 2 ∫_X^∞ φ = (1/(π²u)) [(1 - cos(aX))/X + a (π/2 - Si(aX))], a = 2πu.
    // The corresponding sinc-product tail is O(1e-6) and is left inside
    // the PLANCHEREL_TOL budget.
    let a = 2.0 * std::f64::consts::PI * u;
    let pi2u = std::f64::consts::PI * std::f64::consts::PI * u;
    let tail = ((1.0 - (a * x_max).cos()) / x_max + a * si_complement(a * x_max)) / pi2u;
    2.0 * s + tail + density_atom(g) * phi.phi(0.0)
}

/// Fourier side of the pairing: φ̂(0) + ∫ φ̂(y) Ŵ_cont(G)(y) dy, split at
/// the kernel and test-function breakpoints so each panel is smooth.
fn pair_fourier(phi: &TestFunction, g: SymmetryType) -> f64 {
    let u = phi.u;
    let mut cuts = vec![-u, 0.0, u];
    if u > 1.0 {
        cuts.extend_from_slice(&[-1.0, 1.0]);
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut s = fourier_atom(g) * phi.phi_hat(0.0);
    for w in cuts.windows(2) {
        s += quad::integrate_1d(|y| phi.phi_hat(y) * fourier_kernel(g, y), w[0], w[1], 32);
    }
    s
}

/// Both evaluations of the pairing ∫ φ(x) W(G)(x) dx as
/// (direct side, Fourier side), without the cross-check. Useful when the
/// caller wants to compare the two sides against an external value.
pub fn pair_sides(phi: &TestFunction, g: SymmetryType) -> (f64, f64) {
    (pair_direct(phi, g), pair_fourier(phi, g))
}

/// Pairing ∫ φ(x) W(G)(x) dx, evaluated independently on the density side
/// and the Fourier side. Returns the Fourier-side value; errors with
/// [`Error::PlancherelMismatch`] if the two sides disagree beyond
/// [`PLANCHEREL_TOL`].
pub fn pair(phi: &TestFunction, g: SymmetryType) -> Result<f64> {
    let (direct, fourier) = pair_sides(phi, g);
    let delta = (direct - fourier).abs();
    if delta > PLANCHEREL_TOL {
        return Err(Error::PlancherelMismatch {
            direct,
            fourier,
            delta,
        });
    }
    Ok(fourier)
}

/// Which averaged L-function family a prediction or prime sum refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FamilyKind {
    /// Degree-4 family: prediction φ̂(0) + ½ φ(0).
    Spin,
    /// Degree-5 family: prediction φ̂(0) - ½ φ(0).
    Std,
}

impl std::str::FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "spin" => Ok(Self::Spin),
            "std" | "standard" => Ok(Self::Std),
            other => Err(Error::Domain(format!("unknown family kind '{other}'"))),
        }
    }
}

/// Main-term prediction of the averaged one-level density for the family.
pub fn prediction(kind: FamilyKind, phi: &TestFunction) -> f64 {
    match kind {
        FamilyKind::Spin => phi.phi_hat(0.0) + 0.5 * phi.phi(0.0),
        FamilyKind::Std => phi.phi_hat(0.0) - 0.5 * phi.phi(0.0),
    }
}

/// Closed form of prediction(Spin) - prediction(Std) = φ(0).
pub fn prediction_difference(phi: &TestFunction) -> f64 {
    phi.phi(0.0)
}

/// Weight of one prime in the order-1 or order-2 explicit-formula sum:
/// log p / p^{order/2} · φ̂(order · log p / log_c).
pub fn prime_weight(p: u64, order: u8, phi: &TestFunction, log_c: f64) -> Result<f64> {
    if !(order == 1 || order == 2) {
        return Err(Error::Domain(format!(
            "prime-sum order must be 1 or 2, got {order}"
        )));
    }
    if !(log_c.is_finite() && log_c > 0.0) {
        return Err(Error::Domain(format!(
            "conductor logarithm must be positive, got {log_c}"
        )));
    }
    let lp = (p as f64).ln();
    Ok(lp / (p as f64).powf(order as f64 / 2.0) * phi.phi_hat(order as f64 * lp / log_c))
}

fn order1_coeff(kind: FamilyKind, x: f64, y: f64) -> f64 {
    match kind {
        // Power sum of the four spin parameters.
        FamilyKind::Spin => x + y,
        // Power sum of the five standard parameters.
        FamilyKind::Std => 1.0 + x * y,
    }
}

fn order2_coeff(kind: FamilyKind, x: f64, y: f64) -> f64 {
    match kind {
        // a(p²) + 1 with a(p²) = x² + y² - 4.
        FamilyKind::Spin => x * x + y * y - 3.0,
        // b(p²) - 1 with b(p²) = x²y² - 2x² - 2y² + 5.
        FamilyKind::Std => x * x * y * y - 2.0 * x * x - 2.0 * y * y + 4.0,
    }
}

/// Averaged explicit-formula prime sum over a family dataset:
/// -2/(log_c · #forms) Σ_F Σ_p coeff_F(p) · log p / p^{order/2} ·
/// φ̂(order log p / log_c), over the primes inside the test-function
/// support. Every form must carry data at every contributing prime
/// ([`Error::MissingPrime`] otherwise).
pub fn explicit_prime_sum(
    ds: &FamilyDataset,
    kind: FamilyKind,
    order: u8,
    phi: &TestFunction,
    log_c: f64,
) -> Result<f64> {
    // Validates order and log_c as a side effect.
    prime_weight(2, order, phi, log_c)?;
    let p_cap = (phi.support() * log_c / order as f64).exp();
    if p_cap.is_nan() || p_cap > 1e7 {
        return Err(Error::Domain(format!(
            "support requires primes up to {p_cap:.3e}; refusing to enumerate beyond 1e7"
        )));
    }
    let forms = ds.form_ids();
    if forms.is_empty() {
        return Err(Error::DatasetInvariant("dataset has no forms".into()));
    }
    let mut total = 0.0;
    for p in harness::primes_up_to(p_cap as u64) {
        let w = prime_weight(p, order, phi, log_c)?;
        if w == 0.0 {
            continue;
        }
        let coeff: fn(FamilyKind, f64, f64) -> f64 = match order {
            1 => order1_coeff,
            _ => order2_coeff,
        };
        for form in &forms {
            let (x, y) = ds.require(form, p)?;
            total += coeff(kind, x, y) * w;
        }
    }
    Ok(-2.0 * total / (log_c * forms.len() as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn fejer_values() {
        let f = fejer(1.0).unwrap();
        assert_eq!(f.phi_hat(0.0), 1.0);
        assert_abs_diff_eq!(f.phi(0.0), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f.phi_hat(0.5), 0.5, epsilon = 1e-15);
        assert_eq!(f.phi_hat(1.0), 0.0);
        assert_eq!(f.phi_hat(2.0), 0.0);
        // φ integrates to φ̂(0) = 1 (sanity on a wide window).
        let f2 = fejer(0.5).unwrap();
        assert_abs_diff_eq!(f2.phi(0.0), 0.5, epsilon = 1e-15);
        assert!(fejer(0.0).is_err());
    }

    #[test]
    fn pairing_frozen_values() {
        let f = fejer(1.0).unwrap();
        assert_relative_eq!(
            pair(&f, SymmetryType::Unitary).unwrap(),
            1.0,
            max_relative = 1e-9
        );
        assert_relative_eq!(
            pair(&f, SymmetryType::Symplectic).unwrap(),
            0.5,
            max_relative = 1e-9
        );
        assert_relative_eq!(
            pair(&f, SymmetryType::Orthogonal).unwrap(),
            1.5,
            max_relative = 1e-9
        );
    }

    #[test]
    fn orthogonal_flavors_coincide_below_support_one() {
        // For supp φ̂ ⊆ [-1, 1] the three orthogonal types all pair to
        // 1 + u/2; this is what pins the ½ in the odd kernel.
        for u in [0.3, 0.7, 1.0] {
            let f = fejer(u).unwrap();
            let even = pair(&f, SymmetryType::SOEven).unwrap();
            let odd = pair(&f, SymmetryType::SOOdd).unwrap();
            let orth = pair(&f, SymmetryType::Orthogonal).unwrap();
            assert_abs_diff_eq!(even, 1.0 + u / 2.0, epsilon = 1e-9);
            assert_abs_diff_eq!(odd, even, epsilon = 1e-9);
            assert_abs_diff_eq!(orth, even, epsilon = 1e-9);
        }
        // Above support 1 they split.
        let f = fejer(1.5).unwrap();
        let even = pair(&f, SymmetryType::SOEven).unwrap();
        let odd = pair(&f, SymmetryType::SOOdd).unwrap();
        assert!((even - odd).abs() > 0.1);
    }

    #[test]
    fn mistyped_odd_kernel_fails_plancherel() {
        // With the uncorrected -χ + 1 continuous part, the Fourier side at
        // u = 1 would be 1 - 1 + 1 = 1, while the density side gives 1.5:
        // far outside PLANCHEREL_TOL. The corrected kernel agrees.
        let f = fejer(1.0).unwrap();
        let direct = pair_direct(&f, SymmetryType::SOOdd);
        let wrong_fourier = 1.0; // φ̂(0) + ∫ tri·(-χ+1) = 1 - u + u at u = 1
        assert!((direct - wrong_fourier).abs() > 0.4);
        assert!((direct - pair_fourier(&f, SymmetryType::SOOdd)).abs() < 1e-7);
    }

    #[test]
    fn predictions_and_difference() {
        let f = fejer(1.0).unwrap();
        let spin = prediction(FamilyKind::Spin, &f);
        let std_p = prediction(FamilyKind::Std, &f);
        assert_eq!(spin, 1.5);
        assert_eq!(std_p, 0.5);
        // Difference is φ(0) exactly.
        assert_eq!(spin - std_p, prediction_difference(&f));
        let g = fejer(0.37).unwrap();
        assert_abs_diff_eq!(
            prediction(FamilyKind::Spin, &g) - prediction(FamilyKind::Std, &g),
            prediction_difference(&g),
            epsilon = 1e-15
        );
        // The spin prediction matches the orthogonal pairings, the
        // standard one the symplectic pairing.
        assert_abs_diff_eq!(spin, pair(&f, SymmetryType::SOOdd).unwrap(), epsilon = 1e-9);
        assert_abs_diff_eq!(
            std_p,
            pair(&f, SymmetryType::Symplectic).unwrap(),
            epsilon = 1e-9
        );
    }

    #[test]
    fn symmetry_type_parsing() {
        assert_eq!(
            "so-odd".parse::<SymmetryType>().unwrap(),
            SymmetryType::SOOdd
        );
        assert_eq!("U".parse::<SymmetryType>().unwrap(), SymmetryType::Unitary);
        assert!("so-weird".parse::<SymmetryType>().is_err());
        assert_eq!("spin".parse::<FamilyKind>().unwrap(), FamilyKind::Spin);
        assert_eq!("standard".parse::<FamilyKind>().unwrap(), FamilyKind::Std);
    }

    #[test]
    fn prime_sum_contracts() {
        let ds = FamilyDataset::synthesize(10, 10, 1, 200, &[2, 3, 5, 7], 11).unwrap();
        let phi = fejer(1.0).unwrap();
        // log_c = ln 8: contributing primes are 2, 3, 5, 7 at order 1.
        let log_c = 8.0_f64.ln();
        let s = explicit_prime_sum(&ds, FamilyKind::Spin, 1, &phi, log_c).unwrap();
        assert!(s.is_finite());
        // Hand-rolled reference over the same records.
        let mut total = 0.0;
        for p in [2u64, 3, 5, 7] {
            let w = prime_weight(p, 1, &phi, log_c).unwrap();
            for r in ds.records().iter().filter(|r| r.p == p) {
                total += (r.x + r.y) * w;
            }
        }
        let reference = -2.0 * total / (log_c * 200.0);
        assert_relative_eq!(s, reference, max_relative = 1e-12);
        // Order 2 touches the square coefficients.
        let s2 = explicit_prime_sum(&ds, FamilyKind::Std, 2, &phi, log_c).unwrap();
        assert!(s2.is_finite());
        // A prime inside the support that the dataset lacks is an error:
        // with log_c = ln 12, p = 11 contributes but has no records.
        let e = explicit_prime_sum(&ds, FamilyKind::Spin, 1, &phi, 12.0_f64.ln());
        assert!(matches!(e, Err(Error::MissingPrime { p: 11, .. })));
        // Order-2 support shrinks: with log_c = ln 12 the order-2 cap is
        // √12 < 4, so only p ∈ {2, 3} contribute and the sum succeeds.
        assert!(explicit_prime_sum(&ds, FamilyKind::Spin, 2, &phi, 12.0_f64.ln()).is_ok());
        assert!(matches!(
            explicit_prime_sum(&ds, FamilyKind::Spin, 3, &phi, log_c),
            Err(Error::Domain(_))
        ));
    }
}
