//! The limiting Sato–Tate density, the p-adic Plancherel density, and a
//! deterministic rejection sampler for the latter.
//!
//! Two coordinate pictures are used throughout:
//!
//! * **angles** (θ₁, θ₂) ∈ [0, π]², where the tempered unramified dual lives
//!   and where every density is smooth — all quadrature happens here;
//! * **the eigenvalue square** Ω = [-2, 2]², the image under
//!   (x, y) = (2 cos θ₁, 2 cos θ₂), where eigenvalue statistics live.
//!
//! The local density is a product `f · g⁺ · g⁻ · μ_ST` of explicit rational
//! factors against the Sato–Tate factor. Its literal total mass over Ω is
//! *not* 1 (it is 2 / ((p²+1)(p+1)²), and the Sato–Tate factor itself has
//! mass 2 from the Weyl double count), so this module distinguishes literal
//! densities, measured normalizers, and probability densities, and verifies
//! the normalizing constants by quadrature instead of assuming them.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::quad;
use crate::satake::{OmegaPoint, SatakeAngles};
use crate::Result;

/// Total mass of the literal Sato–Tate product density over Ω: the Weyl
/// double count of the fundamental wedge (both Wallis integrals involved
/// equal π, making the mass exactly 2).
pub const ST_LITERAL_MASS: f64 = 2.0;

/// Default relative tolerance for the mass quadratures.
pub const DEFAULT_QUAD_TOL: f64 = 1e-10;

/// Validate the local parameter: any finite real > 1 is accepted (the
/// densities extend off the primes; the large-p limit is probed at powers
/// of ten).
pub fn validate_p(p: f64) -> Result<()> {
    if !p.is_finite() || p <= 1.0 {
        return Err(Error::Domain(format!(
            "local parameter p = {p} must be a finite real > 1"
        )));
    }
    Ok(())
}

/// Literal Sato–Tate density on Ω:
/// (x-y)²/π² · √(1-x²/4) · √(1-y²/4).  Mass 2, not 1.
pub fn st_density(pt: OmegaPoint) -> f64 {
    let sx = (1.0 - pt.x * pt.x / 4.0).max(0.0).sqrt();
    let sy = (1.0 - pt.y * pt.y / 4.0).max(0.0).sqrt();
    (pt.x - pt.y).powi(2) / (std::f64::consts::PI * std::f64::consts::PI) * sx * sy
}

/// Jacobian |∂(x, y)/∂(θ₁, θ₂)| = 4 sin θ₁ sin θ₂ of the angle → Ω map.
pub fn angle_jacobian(a: SatakeAngles) -> f64 {
    4.0 * a.theta1.sin() * a.theta2.sin()
}

/// Literal Sato–Tate density pulled back to angles (Jacobian included):
/// (4/π²) (2cos θ₁ - 2cos θ₂)² sin²θ₁ sin²θ₂.
pub fn st_density_angles(a: SatakeAngles) -> f64 {
    st_density(OmegaPoint::from_angles(a)) * angle_jacobian(a)
}

/// Quadrature measurement of the literal Sato–Tate mass (exactly 2).
pub fn st_mass(tol: f64) -> Result<f64> {
    let pi = std::f64::consts::PI;
    quad::integrate_2d_adaptive_rel(
        |t1, t2| {
            st_density_angles(SatakeAngles {
                theta1: t1,
                theta2: t2,
            })
        },
        (0.0, pi),
        (0.0, pi),
        tol,
    )
}

/// First product factor: 1 / [((√p + 1/√p)² - x²)((√p + 1/√p)² - y²)].
pub fn f_factor(p: f64, pt: OmegaPoint) -> f64 {
    let s = (p.sqrt() + 1.0 / p.sqrt()).powi(2);
    1.0 / ((s - pt.x * pt.x) * (s - pt.y * pt.y))
}

/// Denominator of g^± : (√p + 1/√p)² - 2(1 + xy/4 ± √(1-x²/4)√(1-y²/4)).
pub fn g_denominator(p: f64, pt: OmegaPoint, sign: f64) -> f64 {
    let s = (p.sqrt() + 1.0 / p.sqrt()).powi(2);
    let sx = (1.0 - pt.x * pt.x / 4.0).max(0.0).sqrt();
    let sy = (1.0 - pt.y * pt.y / 4.0).max(0.0).sqrt();
    s - 2.0 * (1.0 + pt.x * pt.y / 4.0 + sign * sx * sy)
}

/// Second and third product factors g^± = 1 / [`g_denominator`].
pub fn g_factor(p: f64, pt: OmegaPoint, sign: f64) -> f64 {
    1.0 / g_denominator(p, pt, sign)
}

/// Closed form of the product of the two g denominators:
/// x² + y² - xy(p + p⁻¹) - 4 + (p + p⁻¹)².
///
/// The identity `g_denominator(+) · g_denominator(-) == this` holds
/// pointwise on Ω and is verified on a grid by the acceptance suite.
pub fn g_denominator_product_expanded(p: f64, pt: OmegaPoint) -> f64 {
    let q = p + 1.0 / p;
    pt.x * pt.x + pt.y * pt.y - pt.x * pt.y * q - 4.0 + q * q
}

/// Literal local density on Ω: f · g⁺ · g⁻ · μ_ST (mass ≠ 1).
pub fn mu_literal(p: f64, pt: OmegaPoint) -> f64 {
    f_factor(p, pt) * g_factor(p, pt, 1.0) * g_factor(p, pt, -1.0) * st_density(pt)
}

/// Quadrature measurement of the literal local mass over Ω.
///
/// Exact value: 2 / ((p²+1)(p+1)²); the crate measures it rather than
/// assuming it, and freezes the closed form into tests.
pub fn mu_literal_mass(p: f64, tol: f64) -> Result<f64> {
    validate_p(p)?;
    let pi = std::f64::consts::PI;
    quad::integrate_2d_adaptive_rel(
        |t1, t2| {
            let a = SatakeAngles {
                theta1: t1,
                theta2: t2,
            };
            mu_literal(p, OmegaPoint::from_angles(a)) * angle_jacobian(a)
        },
        (0.0, pi),
        (0.0, pi),
        tol,
    )
}

/// Per-p cache for the measured normalizers (keyed by the bit pattern of p;
/// quadrature is deterministic, so a cached value is exactly reproducible).
fn normalizer_cache() -> &'static Mutex<HashMap<u64, f64>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, f64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Measured normalizer 1 / ∫_Ω μ_literal, cached per p.
///
/// Equals (p²+1)(p+1)²/2 (verified in tests); also the constant value of
/// [`pushforward_ratio`].
pub fn normalizer(p: f64) -> Result<f64> {
    validate_p(p)?;
    if let Some(v) = normalizer_cache()
        .lock()
        .expect("normalizer cache lock poisoned")
        .get(&p.to_bits())
    {
        return Ok(*v);
    }
    let mass = mu_literal_mass(p, DEFAULT_QUAD_TOL)?;
    let v = 1.0 / mass;
    normalizer_cache()
        .lock()
        .expect("normalizer cache lock poisoned")
        .insert(p.to_bits(), v);
    Ok(v)
}

/// Probability density of the local measure on Ω (literal density times the
/// measured normalizer).
pub fn mu_normalized(p: f64, pt: OmegaPoint) -> Result<f64> {
    Ok(normalizer(p)? * mu_literal(p, pt))
}

/// The squared-modulus shape of the tempered Plancherel density in angles
/// (no constant):
/// |(1-e^{2iθ₁})(1-e^{2iθ₂})(1-e^{i(θ₁+θ₂)})(1-e^{i(θ₁-θ₂)})|² /
/// |(1-p⁻¹e^{2iθ₁})(1-p⁻¹e^{2iθ₂})(1-p⁻¹e^{i(θ₁+θ₂)})(1-p⁻¹e^{i(θ₁-θ₂)})|².
pub fn plancherel_shape(p: f64, a: SatakeAngles) -> f64 {
    let one = Complex64::new(1.0, 0.0);
    let e = |t: f64| Complex64::from_polar(1.0, t);
    let pinv = 1.0 / p;
    let args = [
        2.0 * a.theta1,
        2.0 * a.theta2,
        a.theta1 + a.theta2,
        a.theta1 - a.theta2,
    ];
    let mut num = one;
    let mut den = one;
    for t in args {
        num *= one - e(t);
        den *= one - pinv * e(t);
    }
    (num / den).norm_sqr()
}

/// The constant printed in front of the Plancherel density shape,
/// (p+1)⁴ / (p⁴ π²). With this constant the total mass is
/// 8(p+1)²/(p²+1), *not* 1 — see [`plancherel_constant`].
pub fn plancherel_displayed_constant(p: f64) -> f64 {
    (p + 1.0).powi(4) / (p.powi(4) * std::f64::consts::PI.powi(2))
}

/// Plancherel density with the displayed constant (mass 8(p+1)²/(p²+1)).
pub fn plancherel_displayed_density(p: f64, a: SatakeAngles) -> f64 {
    plancherel_displayed_constant(p) * plancherel_shape(p, a)
}

/// The probability-normalizing Plancherel constant
/// (p+1)²(p²+1) / (8 p⁴ π²).
///
/// This is the displayed constant divided by the measured mass
/// 8(p+1)²/(p²+1); [`measured_plancherel_constant`] recovers it from
/// quadrature and the acceptance suite checks the total mass is 1.
pub fn plancherel_constant(p: f64) -> f64 {
    (p + 1.0).powi(2) * (p * p + 1.0) / (8.0 * p.powi(4) * std::f64::consts::PI.powi(2))
}

/// Probability Plancherel density in angles: [`plancherel_constant`] times
/// the shape. Pushes forward to [`mu_normalized`] under
/// (x, y) = (2cos θ₁, 2cos θ₂).
pub fn plancherel_density(p: f64, a: SatakeAngles) -> Result<f64> {
    validate_p(p)?;
    Ok(plancherel_constant(p) * plancherel_shape(p, a))
}

/// Quadrature measurement of the probability Plancherel mass (should be 1;
/// the acceptance suite demands 1e-6 at p ∈ {2, 3, 5, 101}).
pub fn plancherel_total_mass(p: f64, tol: f64) -> Result<f64> {
    validate_p(p)?;
    let pi = std::f64::consts::PI;
    quad::integrate_2d_adaptive_rel(
        |t1, t2| {
            plancherel_constant(p)
                * plancherel_shape(
                    p,
                    SatakeAngles {
                        theta1: t1,
                        theta2: t2,
                    },
                )
        },
        (0.0, pi),
        (0.0, pi),
        tol,
    )
}

/// Normalizing constant measured from the shape alone:
/// 1 / ∫_{[0,π]²} shape. Agrees with [`plancherel_constant`].
pub fn measured_plancherel_constant(p: f64) -> Result<f64> {
    validate_p(p)?;
    let pi = std::f64::consts::PI;
    let mass = quad::integrate_2d_adaptive_rel(
        |t1, t2| {
            plancherel_shape(
                p,
                SatakeAngles {
                    theta1: t1,
                    theta2: t2,
                },
            )
        },
        (0.0, pi),
        (0.0, pi),
        DEFAULT_QUAD_TOL,
    )?;
    Ok(1.0 / mass)
}

/// Pointwise ratio of the probability Plancherel density to the literal Ω
/// density pushed to angles:
/// plancherel_density(θ) / (μ_literal(x(θ)) · |Jacobian|).
///
/// This is constant in (θ₁, θ₂) and equals the measured [`normalizer`] —
/// i.e. (p²+1)(p+1)²/2 — exhibiting the two pictures as the same
/// probability measure. Interior points only (the Jacobian vanishes on the
/// boundary).
pub fn pushforward_ratio(p: f64, a: SatakeAngles) -> Result<f64> {
    let jac = angle_jacobian(a);
    if jac.abs() < 1e-12 {
        return Err(Error::Domain(
            "pushforward ratio needs an interior angle pair (nonzero Jacobian)".into(),
        ));
    }
    let lit = mu_literal(p, OmegaPoint::from_angles(a)) * jac;
    Ok(plancherel_density(p, a)? / lit)
}

/// ∫ f dμ_p (probability measure), computed in angle coordinates where the
/// integrand is smooth.
pub fn integrate_mu_normalized<F: FnMut(OmegaPoint) -> f64>(
    p: f64,
    mut f: F,
    tol: f64,
) -> Result<f64> {
    validate_p(p)?;
    let pi = std::f64::consts::PI;
    let c = plancherel_constant(p);
    quad::integrate_2d_adaptive(
        |t1, t2| {
            let a = SatakeAngles {
                theta1: t1,
                theta2: t2,
            };
            f(OmegaPoint::from_angles(a)) * c * plancherel_shape(p, a)
        },
        (0.0, pi),
        (0.0, pi),
        tol,
    )
}

/// ∫ f dμ_ST/2 (the probability-scale Sato–Tate integral), in angle
/// coordinates.
pub fn integrate_st_probability<F: FnMut(OmegaPoint) -> f64>(mut f: F, tol: f64) -> Result<f64> {
    let pi = std::f64::consts::PI;
    quad::integrate_2d_adaptive(
        |t1, t2| {
            let a = SatakeAngles {
                theta1: t1,
                theta2: t2,
            };
            f(OmegaPoint::from_angles(a)) * 0.5 * st_density_angles(a)
        },
        (0.0, pi),
        (0.0, pi),
        tol,
    )
}

/// Envelope bound for rejection sampling: a grid maximum of the probability
/// density over Ω with multiplicative headroom. `level` 0 uses a 512² grid
/// and 5% headroom; level 1 (the re-estimation level) uses 1024² and 10%.
fn envelope_bound(p: f64, level: u8) -> Result<f64> {
    let (n, headroom) = match level {
        0 => (512usize, 1.05),
        _ => (1024usize, 1.10),
    };
    let norm = normalizer(p)?;
    let mut max = 0.0_f64;
    for i in 0..n {
        let x = -2.0 + 4.0 * (i as f64 + 0.5) / n as f64;
        for j in 0..n {
            let y = -2.0 + 4.0 * (j as f64 + 0.5) / n as f64;
            let d = norm * mu_literal(p, OmegaPoint { x, y });
            if d > max {
                max = d;
            }
        }
    }
    Ok(max * headroom)
}

/// Deterministic rejection sampler for the probability measure μ_p on Ω.
///
/// Proposals are uniform on the square; the acceptance test uses an
/// envelope from [`envelope_bound`]. One ChaCha8 stream seeded with
/// `seed_from_u64` drives everything; each attempt consumes exactly three
/// uniforms in the order (x, y, accept), where a uniform is
/// `(next_u64() >> 11) · 2⁻⁵³`. The stream, and hence every sample, is
/// bit-reproducible for a given seed.
pub struct Sampler {
    p: f64,
    envelope: f64,
    norm: f64,
    rng: ChaCha8Rng,
    proposals: u64,
    accepted: u64,
}

impl Sampler {
    /// Sampler with the level-0 envelope.
    pub fn new(p: f64, seed: u64) -> Result<Self> {
        Self::with_level(p, seed, 0)
    }

    /// Sampler with an explicit envelope refinement level (level ≥ 1 is the
    /// re-estimation used after an envelope failure).
    pub fn with_level(p: f64, seed: u64, level: u8) -> Result<Self> {
        validate_p(p)?;
        Ok(Self {
            p,
            envelope: envelope_bound(p, level)?,
            norm: normalizer(p)?,
            rng: ChaCha8Rng::seed_from_u64(seed),
            proposals: 0,
            accepted: 0,
        })
    }

    /// Uniform in [0, 1) from the top 53 bits of the stream.
    fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Draw one point. Errors with [`Error::EnvelopeTooSmall`] if a proposal
    /// sees a density above the envelope (callers re-estimate via
    /// [`Sampler::with_level`]).
    pub fn draw(&mut self) -> Result<OmegaPoint> {
        loop {
            let x = -2.0 + 4.0 * self.uniform();
            let y = -2.0 + 4.0 * self.uniform();
            let u = self.uniform();
            self.proposals += 1;
            let pt = OmegaPoint { x, y };
            let d = self.norm * mu_literal(self.p, pt);
            if d > self.envelope {
                return Err(Error::EnvelopeTooSmall {
                    density: d,
                    bound: self.envelope,
                    x,
                    y,
                });
            }
            if u * self.envelope <= d {
                self.accepted += 1;
                return Ok(pt);
            }
        }
    }

    /// Fraction of proposals accepted so far (in (0, 1] once a draw
    /// succeeded).
    pub fn acceptance_rate(&self) -> f64 {
        if self.proposals == 0 {
            0.0
        } else {
            self.accepted as f64 / self.proposals as f64
        }
    }

    /// Envelope bound currently in force.
    pub fn envelope(&self) -> f64 {
        self.envelope
    }
}

/// Draw `n` points of μ_p deterministically. On an envelope failure the
/// whole batch restarts once at the refinement level, keeping the output a
/// pure function of (p, n, seed).
pub fn sample(p: f64, n: usize, seed: u64) -> Result<Vec<OmegaPoint>> {
    fn run(p: f64, n: usize, seed: u64, level: u8) -> Result<Vec<OmegaPoint>> {
        let mut s = Sampler::with_level(p, seed, level)?;
        (0..n).map(|_| s.draw()).collect()
    }
    match run(p, n, seed, 0) {
        Err(Error::EnvelopeTooSmall { .. }) => run(p, n, seed, 1),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn st_literal_mass_is_two() {
        let m = st_mass(1e-12).unwrap();
        assert_abs_diff_eq!(m, ST_LITERAL_MASS, epsilon = 1e-11);
    }

    #[test]
    fn literal_mass_matches_closed_form() {
        for p in [2.0, 3.0, 5.0, 101.0] {
            let measured = mu_literal_mass(p, 1e-12).unwrap();
            let closed = 2.0 / ((p * p + 1.0) * (p + 1.0).powi(2));
            assert_relative_eq!(measured, closed, max_relative = 1e-10);
        }
    }

    #[test]
    fn normalizer_matches_closed_form_and_is_cached() {
        let p = 3.0;
        let n1 = normalizer(p).unwrap();
        let n2 = normalizer(p).unwrap();
        assert_eq!(n1.to_bits(), n2.to_bits());
        assert_relative_eq!(
            n1,
            (p * p + 1.0) * (p + 1.0).powi(2) / 2.0,
            max_relative = 1e-10
        );
    }

    #[test]
    fn displayed_constant_has_the_wrong_mass() {
        // The shape with the displayed constant integrates to 8(p+1)²/(p²+1);
        // the probability constant divides that out.
        for p in [2.0, 5.0] {
            let pi = std::f64::consts::PI;
            let mass = quad::integrate_2d_adaptive_rel(
                |t1, t2| {
                    plancherel_displayed_density(
                        p,
                        SatakeAngles {
                            theta1: t1,
                            theta2: t2,
                        },
                    )
                },
                (0.0, pi),
                (0.0, pi),
                1e-11,
            )
            .unwrap();
            assert_relative_eq!(
                mass,
                8.0 * (p + 1.0).powi(2) / (p * p + 1.0),
                max_relative = 1e-9
            );
        }
    }

    #[test]
    fn probability_plancherel_mass_is_one() {
        for p in [2.0, 3.0] {
            assert_abs_diff_eq!(
                plancherel_total_mass(p, 1e-11).unwrap(),
                1.0,
                epsilon = 1e-9
            );
        }
    }

    #[test]
    fn measured_constant_matches_closed_form() {
        for p in [2.0, 101.0] {
            assert_relative_eq!(
                measured_plancherel_constant(p).unwrap(),
                plancherel_constant(p),
                max_relative = 1e-9
            );
        }
    }

    #[test]
    fn displayed_density_vs_literal_pointwise() {
        // displayed_density(θ) = 4 (p+1)⁴ · μ_literal(x(θ)) · |J(θ)|.
        let p = 3.0;
        for (t1, t2) in [(0.7, 1.9), (1.2, 2.8), (0.3, 0.9)] {
            let a = SatakeAngles {
                theta1: t1,
                theta2: t2,
            };
            let lhs = plancherel_displayed_density(p, a);
            let rhs = 4.0
                * (p + 1.0).powi(4)
                * mu_literal(p, OmegaPoint::from_angles(a))
                * angle_jacobian(a);
            assert_relative_eq!(lhs, rhs, max_relative = 1e-11);
        }
    }

    #[test]
    fn pushforward_ratio_is_the_normalizer() {
        let p = 2.0_f64;
        let expected = (p * p + 1.0) * (p + 1.0).powi(2) / 2.0; // 22.5
        for (t1, t2) in [(0.6, 1.1), (1.5, 2.3), (2.0, 2.9)] {
            let r = pushforward_ratio(
                p,
                SatakeAngles {
                    theta1: t1,
                    theta2: t2,
                },
            )
            .unwrap();
            assert_relative_eq!(r, expected, max_relative = 1e-9);
            assert_relative_eq!(r, normalizer(p).unwrap(), max_relative = 1e-9);
        }
    }

    #[test]
    fn denominator_product_identity_spot_checks() {
        for p in [2.0, 3.0, 101.0] {
            for (x, y) in [(0.3, -1.2), (1.9, 1.8), (-2.0, 2.0)] {
                let pt = OmegaPoint { x, y };
                let lhs = g_denominator(p, pt, 1.0) * g_denominator(p, pt, -1.0);
                let rhs = g_denominator_product_expanded(p, pt);
                assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn sampler_is_deterministic_and_accepts() {
        let a = sample(3.0, 64, 42).unwrap();
        let b = sample(3.0, 64, 42).unwrap();
        for (u, v) in a.iter().zip(b.iter()) {
            assert_eq!(u.x.to_bits(), v.x.to_bits());
            assert_eq!(u.y.to_bits(), v.y.to_bits());
        }
        let c = sample(3.0, 64, 43).unwrap();
        assert!(a.iter().zip(c.iter()).any(|(u, v)| u.x != v.x));
        let mut s = Sampler::new(3.0, 7).unwrap();
        for _ in 0..100 {
            let pt = s.draw().unwrap();
            assert!((-2.0..=2.0).contains(&pt.x) && (-2.0..=2.0).contains(&pt.y));
        }
        let rate = s.acceptance_rate();
        assert!(rate > 0.0 && rate <= 1.0, "acceptance rate {rate}");
    }

    #[test]
    fn sample_mean_agrees_with_quadrature() {
        // Monte Carlo mean of x·y against the quadrature value, within four
        // standard errors (seed-pinned, hence deterministic).
        let p = 3.0;
        let n = 4000;
        let pts = sample(p, n, 2024).unwrap();
        let vals: Vec<f64> = pts.iter().map(|pt| pt.x * pt.y).collect();
        let mean = vals.iter().sum::<f64>() / n as f64;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
        let se = (var / n as f64).sqrt();
        let reference = integrate_mu_normalized(p, |pt| pt.x * pt.y, 1e-10).unwrap();
        assert!(
            (mean - reference).abs() <= 4.0 * se,
            "mean {mean} vs reference {reference} (se {se})"
        );
    }

    #[test]
    fn large_p_density_approaches_sato_tate() {
        // Spot check of the p → ∞ limit at probability scale.
        let p = 1e6;
        let pt = OmegaPoint { x: 0.5, y: -1.1 };
        let d = mu_normalized(p, pt).unwrap();
        assert_abs_diff_eq!(d, 0.5 * st_density(pt), epsilon = 1e-6);
    }
}
