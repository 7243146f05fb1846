//! Named verification suites, one per headline invariant of the crate:
//! Plancherel normalization, the Weyl-denominator identity, the large-p
//! limit of the local measures, the eigenvalue identity chains, the exact
//! orbital lookups, the character suite with its singular limits, the
//! dimension/formal-degree identities, the one-level density pairings, and
//! two statistical suites over synthetic families. The CLI `verify`
//! subcommand and the acceptance test target both run these and report one
//! verdict per suite.
//!
//! Every suite is deterministic: the sampling-based ones take an explicit
//! seed, and their pass bands (4 standard errors for the equidistribution
//! rows, 3 for the null prime sum) are calibrated so the shipped seeds pass
//! with large margin while genuine defects still trip them.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::characters::{self, CartanPoint, HcParam};
use crate::harness::{self, FamilyDataset};
use crate::hecke::{self, DoubleCosetIndex};
use crate::lfun;
use crate::measures;
use crate::onelevel::{self, FamilyKind, SymmetryType};
use crate::satake::{OmegaPoint, SatakeAngles, UnitaryClass};
use crate::Result;

/// Outcome of one verification suite.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    /// Stable identifier of the suite.
    pub name: String,
    /// Whether every check in the suite held.
    pub passed: bool,
    /// Headline measured value (meaning given in `detail`).
    pub value: f64,
    /// Target for the headline value.
    pub reference: f64,
    /// |value − reference|.
    pub abs_err: f64,
    /// Monte-Carlo standard error when the suite is sampling-based.
    pub std_err: Option<f64>,
    /// Summary of the checks performed and their margins.
    pub detail: String,
}

impl SuiteResult {
    fn new(
        name: &str,
        passed: bool,
        value: f64,
        reference: f64,
        std_err: Option<f64>,
        detail: String,
    ) -> Self {
        Self {
            name: name.to_owned(),
            passed,
            value,
            reference,
            abs_err: (value - reference).abs(),
            std_err,
            detail,
        }
    }
}

/// Cell-center grid coordinate i of n over [-2, 2].
fn grid_center(i: usize, n: usize) -> f64 {
    -2.0 + 4.0 * (i as f64 + 0.5) / n as f64
}

/// Total Plancherel mass is 1 at p ∈ {2, 3, 5, 101}: the normalizing
/// constant is *measured* by quadrature, so this verifies the closed-form
/// constant rather than assuming it.
pub fn suite_plancherel_mass() -> Result<SuiteResult> {
    let mut worst_mass = 1.0;
    let mut worst_dev = 0.0;
    let mut parts = Vec::new();
    for &p in &[2.0, 3.0, 5.0, 101.0] {
        let mass = measures::plancherel_total_mass(p, 1e-9)?;
        let dev = (mass - 1.0).abs();
        parts.push(format!("p={p}: {mass:.12}"));
        if dev > worst_dev {
            worst_dev = dev;
            worst_mass = mass;
        }
    }
    Ok(SuiteResult::new(
        "plancherel-mass",
        worst_dev < 1e-6,
        worst_mass,
        1.0,
        None,
        format!(
            "quadrature mass of the normalized Plancherel density ({})",
            parts.join(", ")
        ),
    ))
}

/// The factored two-sign denominator product equals its expanded polynomial
/// form to 1e-12 relative on a 200×200 grid, p ∈ {2, 3, 101}.
pub fn suite_denominator_identity() -> Result<SuiteResult> {
    let n = 200;
    let mut worst = 0.0f64;
    for &p in &[2.0, 3.0, 101.0] {
        for i in 0..n {
            let x = grid_center(i, n);
            for j in 0..n {
                let pt = OmegaPoint {
                    x,
                    y: grid_center(j, n),
                };
                let lhs =
                    measures::g_denominator(p, pt, 1.0) * measures::g_denominator(p, pt, -1.0);
                let rhs = measures::g_denominator_product_expanded(p, pt);
                let scale = lhs.abs().max(rhs.abs());
                if scale > 0.0 {
                    worst = worst.max((lhs - rhs).abs() / scale);
                }
            }
        }
    }
    Ok(SuiteResult::new(
        "denominator-identity",
        worst <= 1e-12,
        worst,
        0.0,
        None,
        "max relative gap between factored and expanded denominator products \
         over a 200×200 grid at p = 2, 3, 101"
            .into(),
    ))
}

/// The normalized local measure converges to the (probability-normalized)
/// equilibrium density: sup-grid distances decrease along p = 10², 10³,
/// 10⁴, 10⁶ and the last is below 1e-4.
pub fn suite_sato_tate_limit() -> Result<SuiteResult> {
    let ps = [1e2, 1e3, 1e4, 1e6];
    let n = 200;
    let mut sups = Vec::with_capacity(ps.len());
    for &p in &ps {
        let mut sup = 0.0f64;
        for i in 0..n {
            let x = grid_center(i, n);
            for j in 0..n {
                let pt = OmegaPoint {
                    x,
                    y: grid_center(j, n),
                };
                let d = (measures::mu_normalized(p, pt)? - 0.5 * measures::st_density(pt)).abs();
                sup = sup.max(d);
            }
        }
        sups.push(sup);
    }
    let monotone = sups.windows(2).all(|w| w[1] < w[0]);
    Ok(SuiteResult::new(
        "sato-tate-limit",
        monotone && sups[3] < 1e-4,
        sups[3],
        0.0,
        None,
        format!(
            "sup-grid distance to the limit density at p = 1e2/1e3/1e4/1e6: \
             {:.3e} / {:.3e} / {:.3e} / {:.3e}{}",
            sups[0],
            sups[1],
            sups[2],
            sups[3],
            if monotone {
                " (monotone)"
            } else {
                " (NOT monotone)"
            }
        ),
    ))
}

/// Eigenvalue identity chains at 100 seeded random tempered points: the
/// degree-four polynomial rebuilt from (λ'(p), λ'(p²)) matches the
/// symmetric-function coefficients, the degree-one coefficients match
/// x + y and 1 + xy, and the quadratic chain closes on the degree-two
/// standard power sum — all to 1e-9.
pub fn suite_hecke_identities(seed: u64) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ps = [2u64, 3, 5, 7, 11];
    let mut worst = 0.0f64;
    for i in 0..100 {
        let a = SatakeAngles::new(
            rng.gen_range(1e-3..PI - 1e-3),
            rng.gen_range(1e-3..PI - 1e-3),
        )?;
        let pt = OmegaPoint::from_angles(a);
        let p = ps[i % ps.len()];
        let pinv = 1.0 / p as f64;
        let lam1 = hecke::lambda_p(a, p)?;
        let lam2 = hecke::lambda_p2(a, p)?;
        let rebuilt = [1.0, -lam1, lam1 * lam1 - lam2 - pinv, -lam1, 1.0];
        let q = hecke::hecke_polynomial(a);
        for k in 0..5 {
            worst = worst.max((rebuilt[k] - q[k]).abs());
        }
        worst = worst.max((hecke::b1_from_eigs(lam1, lam2, p)? - hecke::b_coeff(pt)).abs());
        worst = worst.max((hecke::a_coeff(pt) - lam1).abs());
        let b2 = hecke::b2_chain(hecke::b_coeff(pt), hecke::spin_power_sum(a, 2));
        worst = worst.max((b2 - hecke::std_power_sum(a, 2)).abs());
    }
    Ok(SuiteResult::new(
        "hecke-identities",
        worst <= 1e-9,
        worst,
        0.0,
        None,
        "worst deviation across polynomial reconstruction, degree-one \
         coefficients, and the quadratic chain at 100 random tempered points"
            .into(),
    ))
}

/// Exact rational golden values of both orbital lookup tables, and their
/// vanishing at every odd similitude exponent up to 9.
pub fn suite_orbital_values() -> Result<SuiteResult> {
    let rat = |num: i64, den: i64| BigRational::new(BigInt::from(num), BigInt::from(den));
    let mut failures: Vec<String> = Vec::new();
    let goldens: [(&str, BigRational, BigRational); 4] = [
        (
            "umin(1,1,2; p=3, z=1)",
            hecke::orbital_umin(DoubleCosetIndex::new(1, 1, 2)?, 3, 1)?,
            rat(9, 8),
        ),
        (
            "umin(1,0,2; p=5, z=1)",
            hecke::orbital_umin(DoubleCosetIndex::new(1, 0, 2)?, 5, 1)?,
            rat(25, 1),
        ),
        (
            "delta1(1,1,2; p=3, z=1)",
            hecke::orbital_delta1(DoubleCosetIndex::new(1, 1, 2)?, 3, 1)?,
            rat(1, 1),
        ),
        (
            "delta1(0,0,2; p=3, z=1)",
            hecke::orbital_delta1(DoubleCosetIndex::new(0, 0, 2)?, 3, 1)?,
            rat(8, 1),
        ),
    ];
    for (label, got, want) in &goldens {
        if got != want {
            failures.push(format!("{label}: got {got}, want {want}"));
        }
    }
    let mut odd_checked = 0usize;
    for a3 in [1u32, 3, 5, 7, 9] {
        for a1 in 0..=a3 {
            for a2 in 0..=a1 {
                let idx = DoubleCosetIndex::new(a1, a2, a3)?;
                for z in -2..=(a3 as i64 + 1) {
                    odd_checked += 1;
                    if !hecke::orbital_umin(idx, 3, z)?.is_zero()
                        || !hecke::orbital_delta1(idx, 3, z)?.is_zero()
                    {
                        failures.push(format!(
                            "odd exponent not annihilated at ({a1},{a2},{a3}), z={z}"
                        ));
                    }
                }
            }
        }
    }
    let passed = failures.is_empty();
    Ok(SuiteResult::new(
        "orbital-values",
        passed,
        failures.len() as f64,
        0.0,
        None,
        if passed {
            format!(
                "4 exact rational golden values; both tables vanish at all \
                 {odd_checked} odd-exponent index/valuation combinations"
            )
        } else {
            failures.join("; ")
        },
    ))
}

/// Character suite: swap symmetry and central parity at 100 seeded random
/// regular compact points (relative 1e-10), identically-zero twisted
/// component, closed-form singular limits to 1e-15 relative, and the
/// numeric mixed second difference recovering the closed form to 1e-4.
pub fn suite_character_suite(seed: u64) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ls = [
        HcParam::new(2, 1)?,
        HcParam::new(4, 1)?,
        HcParam::new(5, 2)?,
        HcParam::new(7, 3)?,
    ];
    let mut worst = 0.0f64;
    let mut done = 0usize;
    let mut attempts = 0usize;
    while done < 100 {
        attempts += 1;
        if attempts > 10_000 {
            return Err(crate::Error::Domain(
                "could not find 100 regular compact points".into(),
            ));
        }
        let l = ls[done % ls.len()];
        let t1 = rng.gen_range(0.0..PI);
        let t2 = rng.gen_range(0.0..PI);
        let (Ok(base), Ok(swapped), Ok(shifted)) = (
            characters::char_compact(l, t1, t2),
            characters::char_compact(l, t2, t1),
            characters::char_compact(l, t1 + PI, t2 + PI),
        ) else {
            continue; // too close to a singular locus; resample
        };
        done += 1;
        let scale = base.norm().max(1.0);
        worst = worst.max((swapped - base).norm() / scale);
        worst = worst.max((shifted - base * l.parity_sign()).norm() / scale);
    }
    let mut twisted_zero = true;
    for &(z, t1, t2) in &[(1.0, 0.7, 1.9), (2.5, 2.2, 0.4), (0.3, 1.1, 2.8)] {
        let v = characters::gsp_character(
            ls[1],
            z,
            CartanPoint::Compact {
                theta1: t1,
                theta2: t2,
            },
            true,
        )?;
        if v.to_bits() != 0.0f64.to_bits() {
            twisted_zero = false;
        }
    }
    let l21 = HcParam::new(2, 1)?;
    let want_delta1 = -1.0 / (4.0 * PI * PI);
    let dev_delta1 = ((characters::singular_limit_delta1(l21) - want_delta1) / want_delta1).abs();
    let vanishes_31 = characters::singular_limit_delta1(HcParam::new(3, 1)?) == 0.0;
    let want_umin = -3.0 / (8.0 * PI * PI * PI);
    let dev_umin = ((characters::singular_limit_umin(l21) - want_umin) / want_umin).abs();
    let numeric = characters::singular_limit_delta1_numeric(l21, 1e-4)?;
    let dev_numeric = (numeric - want_delta1).abs();
    let passed = worst <= 1e-10
        && twisted_zero
        && dev_delta1 <= 1e-15
        && vanishes_31
        && dev_umin <= 1e-15
        && dev_numeric <= 1e-4;
    Ok(SuiteResult::new(
        "character-suite",
        passed,
        worst,
        0.0,
        None,
        format!(
            "swap/parity deviation {worst:.2e} over 100 regular points; twisted \
             component bitwise zero: {twisted_zero}; singular limits relative \
             deviation {dev_delta1:.1e} (split) / {dev_umin:.1e} (unipotent), \
             even-difference case exactly 0: {vanishes_31}; numeric stencil \
             gap {dev_numeric:.2e}"
        ),
    ))
}

/// Dimension goldens and the exhaustive formal-degree identity (degree =
/// 6 × dimension) over all weights 3 ≤ k₂ ≤ k₁ ≤ 40, in exact integers.
pub fn suite_dimension_identities() -> Result<SuiteResult> {
    let mut ok = characters::dim_algebraic(0, 0)? == 1
        && characters::dim_algebraic(1, 0)? == 4
        && characters::dim_algebraic(1, 1)? == 5;
    let mut checked = 0u64;
    for k1 in 3..=40u64 {
        for k2 in 3..=k1 {
            let l = HcParam::from_weight(k1 as i64, k2 as i64)?;
            if characters::formal_degree(l) != 6 * characters::dim_weight(k1, k2)? {
                ok = false;
            }
            checked += 1;
        }
    }
    Ok(SuiteResult::new(
        "dimension-identities",
        ok,
        if ok { 0.0 } else { 1.0 },
        0.0,
        None,
        format!(
            "three dimension golden values and the exact formal-degree \
             identity at {checked} weights"
        ),
    ))
}

/// One-level density pairings: ⟨Fejér(1), W⟩ equals 1/2 (symplectic) and
/// 3/2 (orthogonal) to 1e-6 on BOTH the direct and the Fourier side; the
/// two family predictions differ by exactly φ(0); and the three orthogonal
/// flavors coincide to 1e-9 below the support wall.
pub fn suite_density_pairings() -> Result<SuiteResult> {
    let f1 = onelevel::fejer(1.0)?;
    let (d_sp, f_sp) = onelevel::pair_sides(&f1, SymmetryType::Symplectic);
    let (d_o, f_o) = onelevel::pair_sides(&f1, SymmetryType::Orthogonal);
    let dev_sp = (d_sp - 0.5).abs().max((f_sp - 0.5).abs());
    let dev_o = (d_o - 1.5).abs().max((f_o - 1.5).abs());
    let pred_gap =
        onelevel::prediction(FamilyKind::Spin, &f1) - onelevel::prediction(FamilyKind::Std, &f1);
    let pred_exact = pred_gap == onelevel::prediction_difference(&f1) && pred_gap == f1.phi(0.0);
    let mut coin_worst = 0.0f64;
    for &u in &[0.3, 0.6, 0.9] {
        let f = onelevel::fejer(u)?;
        let even = onelevel::pair(&f, SymmetryType::SOEven)?;
        let odd = onelevel::pair(&f, SymmetryType::SOOdd)?;
        let orth = onelevel::pair(&f, SymmetryType::Orthogonal)?;
        coin_worst = coin_worst.max((even - odd).abs()).max((even - orth).abs());
    }
    let passed = dev_sp <= 1e-6 && dev_o <= 1e-6 && pred_exact && coin_worst <= 1e-9;
    Ok(SuiteResult::new(
        "density-pairings",
        passed,
        dev_sp.max(dev_o),
        0.0,
        None,
        format!(
            "two-sided pairing deviations {dev_sp:.2e} (symplectic vs 1/2) and \
             {dev_o:.2e} (orthogonal vs 3/2); prediction difference exactly \
             φ(0): {pred_exact}; orthogonal-flavor spread {coin_worst:.2e} \
             below the support wall"
        ),
    ))
}

/// A synthetic family of 10⁵ forms at p = 3 matches its own target measure:
/// every standard test function within 4 standard errors and the
/// two-dimensional distribution distance below 0.01.
pub fn suite_synthetic_equidistribution(seed: u64) -> Result<SuiteResult> {
    let ds = FamilyDataset::synthesize(10, 10, 1, 100_000, &[3], seed)?;
    let fns = harness::standard_test_functions();
    let report = harness::equidist_report(&ds, 3, &fns, 1e-10)?;
    let mut in_band = true;
    let mut parts = Vec::new();
    for row in &report.rows {
        // 4·SE band with an absolute floor for the exact constant row;
        // seed-pinned, so deterministic (≈99.99% coverage per row).
        if row.difference.abs() > 4.0 * row.std_err + 1e-9 {
            in_band = false;
        }
        parts.push(format!(
            "{}: {:+.2e} (SE {:.1e})",
            row.name, row.difference, row.std_err
        ));
    }
    let pts = ds.points_at_prime(3);
    let ks = harness::ks_statistic(&pts, 3.0, 41, 48)?;
    Ok(SuiteResult::new(
        "synthetic-equidistribution",
        in_band && ks < 0.01,
        ks,
        0.0,
        None,
        format!(
            "distribution distance {ks:.4} over a 41×41 grid; mean gaps {}",
            parts.join(", ")
        ),
    ))
}

/// Null test of the order-1 explicit-formula prime sum on a 10⁴-form
/// synthetic family (primes ≤ 97): the sum has mean zero under the
/// synthesis measure, so its magnitude must stay within 3 predicted
/// standard errors; and the prime-power tails of all four spherical
/// unitary classes are Cauchy at p = 2, every increment below the class's
/// geometric majorant and every partial sum below the closed-form bound.
pub fn suite_null_prime_sum(seed: u64) -> Result<SuiteResult> {
    let primes = harness::primes_up_to(97);
    let n_forms = 10_000usize;
    let ds = FamilyDataset::synthesize(10, 10, 1, n_forms, &primes, seed)?;
    let phi = onelevel::fejer(1.0)?;
    let log_c = 98.0f64.ln();
    let s = onelevel::explicit_prime_sum(&ds, FamilyKind::Spin, 1, &phi, log_c)?;
    // Var(S) = 4/(log_c² n) Σ_p w_p² Var_{μ_p}(x + y); the mean vanishes by
    // the (x, y) ↦ (-x, -y) symmetry of every μ_p.
    let mut var_sum = 0.0;
    for &p in &primes {
        let w = onelevel::prime_weight(p, 1, &phi, log_c)?;
        if w == 0.0 {
            continue;
        }
        let mass = measures::integrate_mu_normalized(p as f64, |_| 1.0, 1e-9)?;
        let second = measures::integrate_mu_normalized(
            p as f64,
            |pt| {
                let t = pt.x + pt.y;
                t * t
            },
            1e-9,
        )? / mass;
        var_sum += w * w * second;
    }
    let se = 2.0 * (var_sum / n_forms as f64).sqrt() / log_c;
    // Seed-pinned 3·SE band (≈99.7% coverage).
    let s_ok = s.abs() <= 3.0 * se;
    let classes: [(&str, UnitaryClass); 4] = [
        (
            "tempered",
            UnitaryClass::S1 {
                phi1: 1.1,
                phi2: 2.3,
            },
        ),
        (
            "complementary",
            UnitaryClass::S2 {
                beta: 0.3,
                phi: 1.7,
                boundary: false,
            },
        ),
        (
            "mixed",
            UnitaryClass::S3 {
                beta: 0.45,
                phi: 0.9,
                boundary: false,
            },
        ),
        (
            "doubly-non-tempered",
            UnitaryClass::S4 {
                beta1: 0.4,
                beta2: 0.2,
                sign: 1.0,
                boundary: false,
            },
        ),
    ];
    let ln2 = 2.0f64.ln();
    let mut tail_failures = Vec::new();
    for (label, class) in &classes {
        let bound = lfun::tail_majorant_sum(class, 2.0, 3)?;
        let mut partial = 0.0;
        for l in 3..=60u32 {
            let term = lfun::tail_sum(class, 2.0, l, l)?;
            let cap = lfun::b_majorant(class, 2.0, l)? * ln2 / 2.0f64.powf(l as f64 / 2.0);
            if term > cap * (1.0 + 1e-12) {
                tail_failures.push(format!("{label}: increment at l={l} above its majorant"));
            }
            partial += term;
            if partial > bound * (1.0 + 1e-12) {
                tail_failures.push(format!(
                    "{label}: partial sum at l={l} above the closed form"
                ));
            }
        }
    }
    let tails_ok = tail_failures.is_empty();
    Ok(SuiteResult::new(
        "null-prime-sum",
        s_ok && tails_ok,
        s,
        0.0,
        Some(se),
        format!(
            "order-1 prime sum {s:+.3e} vs 3·SE band ±{:.3e}; tail increments \
             below their geometric majorants for all four classes at p = 2: \
             {}",
            3.0 * se,
            if tails_ok {
                "yes".to_owned()
            } else {
                tail_failures.join("; ")
            }
        ),
    ))
}

fn run_guarded(name: &'static str, f: impl FnOnce() -> Result<SuiteResult>) -> SuiteResult {
    match f() {
        Ok(r) => r,
        Err(e) => SuiteResult {
            name: name.to_owned(),
            passed: false,
            value: f64::NAN,
            reference: 0.0,
            abs_err: f64::NAN,
            std_err: None,
            detail: format!("suite aborted: {e}"),
        },
    }
}

/// Run every verification suite with one master seed, in a fixed order.
/// A suite that errors internally is reported as failed, never panicked.
pub fn run_all(seed: u64) -> Vec<SuiteResult> {
    vec![
        run_guarded("plancherel-mass", suite_plancherel_mass),
        run_guarded("denominator-identity", suite_denominator_identity),
        run_guarded("sato-tate-limit", suite_sato_tate_limit),
        run_guarded("hecke-identities", || suite_hecke_identities(seed)),
        run_guarded("orbital-values", suite_orbital_values),
        run_guarded("character-suite", || suite_character_suite(seed)),
        run_guarded("dimension-identities", suite_dimension_identities),
        run_guarded("density-pairings", suite_density_pairings),
        run_guarded("synthetic-equidistribution", || {
            suite_synthetic_equidistribution(seed)
        }),
        run_guarded("null-prime-sum", || suite_null_prime_sum(seed)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    // The statistical suites are exercised end to end by the acceptance
    // test target; here the cheap suites run plus structural checks on the
    // runner itself.

    #[test]
    fn cheap_suites_pass() {
        for suite in [
            suite_plancherel_mass,
            suite_denominator_identity,
            suite_orbital_values,
            suite_dimension_identities,
        ] {
            let r = suite().unwrap();
            assert!(r.passed, "{}: {}", r.name, r.detail);
            assert_eq!(r.abs_err, (r.value - r.reference).abs());
        }
    }

    #[test]
    fn seeded_suites_pass_and_are_deterministic() {
        let a = suite_hecke_identities(7).unwrap();
        let b = suite_hecke_identities(7).unwrap();
        assert!(a.passed, "{}", a.detail);
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        let c = suite_character_suite(7).unwrap();
        assert!(c.passed, "{}", c.detail);
    }

    #[test]
    fn guard_converts_errors_to_failures() {
        let r = run_guarded("boom", || {
            Err(crate::Error::Domain("synthetic failure".into()))
        });
        assert!(!r.passed);
        assert!(r.detail.contains("synthetic failure"));
        assert!(r.value.is_nan());
    }
}
