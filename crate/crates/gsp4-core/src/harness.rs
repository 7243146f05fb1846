//! Family-level experiment harness: datasets of local eigenvalue data for a
//! family of forms, CSV/JSON ingestion, deterministic synthetic families
//! drawn from the local equilibrium measures, equidistribution reports,
//! two-sample distance statistics, and the coarse error budgets used to
//! size experiments.
//!
//! A dataset is a bag of records (form id, prime, x, y) with family
//! metadata (weight (k₁, k₂), level N, optional conductor). Invariants
//! enforced at construction:
//!
//! * every (x, y) lies in the closed square Ω = [-2, 2]²;
//! * (form id, prime) pairs are unique;
//! * every p is prime and coprime to the level.
//!
//! Synthetic families are pure functions of their parameters and a seed:
//! each prime gets a child ChaCha stream derived from the master seed by a
//! SplitMix64 mix, and the records are laid out form-major with primes
//! ascending inside each form.

use std::collections::{BTreeSet, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::measures;
use crate::quad;
use crate::satake::{OmegaPoint, SatakeAngles};
use crate::Result;

/// Trial-division primality test (adequate for the prime sizes that occur
/// in eigenvalue datasets).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    if n.is_multiple_of(3) {
        return n == 3;
    }
    let mut d = 5u64;
    while d.checked_mul(d).is_some_and(|sq| sq <= n) {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// All primes up to and including `n`, ascending.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&m| is_prime(m)).collect()
}

/// Euler's totient, exactly, by trial-division factorization.
pub fn euler_phi(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut m = n;
    let mut phi = n;
    let mut d = 2u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            phi -= phi / d;
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        phi -= phi / m;
    }
    phi
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// SplitMix64-style mix of the master seed with a prime, giving each prime
/// an independent child stream while keeping the dataset a pure function of
/// (parameters, seed).
fn child_seed(seed: u64, p: u64) -> u64 {
    let mut z = seed ^ p.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Coordinate system of an ingested CSV file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoordSystem {
    /// Columns x, y in the square Ω.
    Omega,
    /// Columns theta1, theta2 in [0, π]; normalized to θ₁ ≤ θ₂ on ingest.
    Angles,
}

/// JSON sidecar accompanying an eigenvalue CSV file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sidecar {
    /// Larger weight component.
    pub k1: u64,
    /// Smaller weight component.
    pub k2: u64,
    /// Level.
    #[serde(rename = "N")]
    pub level: u64,
    /// Which column convention the CSV uses.
    pub coords: CoordSystem,
    /// Optional analytic conductor override.
    #[serde(default)]
    pub conductor: Option<u64>,
}

/// One local datum: the eigenvalue coordinates of one form at one prime.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormRecord {
    /// Identifier of the form within the family.
    pub form_id: String,
    /// Prime (coprime to the level).
    pub p: u64,
    /// First coordinate in Ω.
    pub x: f64,
    /// Second coordinate in Ω.
    pub y: f64,
}

/// Where a dataset came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DatasetSource {
    /// Read from files.
    Ingested,
    /// Drawn from the local equilibrium measures with this seed.
    Synthetic {
        /// Master seed of the draw.
        seed: u64,
    },
}

/// A family of forms with local eigenvalue data at finitely many primes.
#[derive(Debug, Clone)]
pub struct FamilyDataset {
    /// Larger weight component (k₁ ≥ k₂ ≥ 3).
    pub k1: u64,
    /// Smaller weight component.
    pub k2: u64,
    /// Level (coprime to every record prime).
    pub level: u64,
    /// Optional analytic conductor override.
    pub conductor: Option<u64>,
    /// Provenance.
    pub source: DatasetSource,
    records: Vec<FormRecord>,
    index: HashMap<(String, u64), usize>,
}

impl FamilyDataset {
    /// Validating constructor; checks the weight, the Ω membership of every
    /// record, uniqueness of (form, prime), and primality/coprimality of
    /// the primes.
    pub fn new(
        k1: u64,
        k2: u64,
        level: u64,
        conductor: Option<u64>,
        source: DatasetSource,
        records: Vec<FormRecord>,
    ) -> Result<Self> {
        if !(k1 >= k2 && k2 >= 3) {
            return Err(Error::DatasetInvariant(format!(
                "weight needs k1 >= k2 >= 3, got ({k1}, {k2})"
            )));
        }
        if level == 0 {
            return Err(Error::DatasetInvariant("level must be positive".into()));
        }
        let mut index = HashMap::with_capacity(records.len());
        for (i, r) in records.iter().enumerate() {
            if !is_prime(r.p) {
                return Err(Error::DatasetInvariant(format!(
                    "record {i}: p = {} is not prime",
                    r.p
                )));
            }
            if gcd(r.p, level) != 1 {
                return Err(Error::DatasetInvariant(format!(
                    "record {i}: p = {} divides the level {level}",
                    r.p
                )));
            }
            if !(r.x.is_finite() && r.y.is_finite() && r.x.abs() <= 2.0 && r.y.abs() <= 2.0) {
                return Err(Error::DatasetInvariant(format!(
                    "record {i}: ({}, {}) outside the closed square [-2, 2]^2",
                    r.x, r.y
                )));
            }
            if index.insert((r.form_id.clone(), r.p), i).is_some() {
                return Err(Error::DatasetInvariant(format!(
                    "duplicate record for form {} at p = {}",
                    r.form_id, r.p
                )));
            }
        }
        Ok(Self {
            k1,
            k2,
            level,
            conductor,
            source,
            records,
            index,
        })
    }

    /// All records, in storage order.
    pub fn records(&self) -> &[FormRecord] {
        &self.records
    }

    /// Distinct form ids in first-appearance order.
    pub fn form_ids(&self) -> Vec<&str> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for r in &self.records {
            if seen.insert(r.form_id.as_str()) {
                out.push(r.form_id.as_str());
            }
        }
        out
    }

    /// Distinct primes, ascending.
    pub fn primes(&self) -> Vec<u64> {
        self.records
            .iter()
            .map(|r| r.p)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    /// Coordinates of one form at one prime, if present.
    pub fn lookup(&self, form_id: &str, p: u64) -> Option<(f64, f64)> {
        self.index
            .get(&(form_id.to_owned(), p))
            .map(|&i| (self.records[i].x, self.records[i].y))
    }

    /// Like [`FamilyDataset::lookup`] but a missing pair is an error.
    pub fn require(&self, form_id: &str, p: u64) -> Result<(f64, f64)> {
        self.lookup(form_id, p).ok_or_else(|| Error::MissingPrime {
            form_id: form_id.to_owned(),
            p,
        })
    }

    /// All (x, y) pairs recorded at a prime.
    pub fn points_at_prime(&self, p: u64) -> Vec<(f64, f64)> {
        self.records
            .iter()
            .filter(|r| r.p == p)
            .map(|r| (r.x, r.y))
            .collect()
    }

    /// Read a dataset from a strict 4-column CSV plus its JSON sidecar.
    ///
    /// The header must be exactly `form_id,p,x,y` (for `coords: "omega"`)
    /// or `form_id,p,theta1,theta2` (for `coords: "angles"`); angle rows
    /// are normalized to θ₁ ≤ θ₂ before conversion to Ω.
    pub fn ingest<P: AsRef<Path>, Q: AsRef<Path>>(csv_path: P, sidecar_path: Q) -> Result<Self> {
        let sidecar: Sidecar = serde_json::from_reader(std::fs::File::open(sidecar_path)?)?;
        let expected: [&str; 4] = match sidecar.coords {
            CoordSystem::Omega => ["form_id", "p", "x", "y"],
            CoordSystem::Angles => ["form_id", "p", "theta1", "theta2"],
        };
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_path(csv_path)?;
        let headers = reader.headers()?.clone();
        let got: Vec<&str> = headers.iter().collect();
        if got != expected {
            return Err(Error::SchemaViolation(format!(
                "CSV header {:?} does not match required {:?}",
                got, expected
            )));
        }
        let mut records = Vec::new();
        for (i, row) in reader.records().enumerate() {
            let line = i + 2; // 1-based, after the header
            let row = row?;
            if row.len() != 4 {
                return Err(Error::SchemaViolation(format!(
                    "line {line}: expected 4 fields, got {}",
                    row.len()
                )));
            }
            let form_id = row[0].to_owned();
            if form_id.is_empty() {
                return Err(Error::SchemaViolation(format!(
                    "line {line}: empty form id"
                )));
            }
            let p: u64 = row[1]
                .parse()
                .map_err(|e| Error::SchemaViolation(format!("line {line}: bad prime: {e}")))?;
            let c1: f64 = row[2]
                .parse()
                .map_err(|e| Error::SchemaViolation(format!("line {line}: bad number: {e}")))?;
            let c2: f64 = row[3]
                .parse()
                .map_err(|e| Error::SchemaViolation(format!("line {line}: bad number: {e}")))?;
            let (x, y) = match sidecar.coords {
                CoordSystem::Omega => (c1, c2),
                CoordSystem::Angles => {
                    let a = SatakeAngles::new(c1, c2)
                        .map_err(|e| Error::SchemaViolation(format!("line {line}: {e}")))?
                        .ordered();
                    let pt = OmegaPoint::from_angles(a);
                    (pt.x, pt.y)
                }
            };
            records.push(FormRecord { form_id, p, x, y });
        }
        // During ingestion every defect of the file contents — including
        // invariant breaches like duplicate keys or p | N — is a schema
        // problem of the input, not of a constructed dataset.
        Self::new(
            sidecar.k1,
            sidecar.k2,
            sidecar.level,
            sidecar.conductor,
            DatasetSource::Ingested,
            records,
        )
        .map_err(|e| match e {
            Error::DatasetInvariant(msg) => Error::SchemaViolation(msg),
            other => other,
        })
    }

    /// Write the dataset as an Ω-coordinate CSV plus JSON sidecar, the
    /// inverse of [`FamilyDataset::ingest`]: re-ingesting the two files
    /// reproduces every field bit-exactly (coordinates are printed with
    /// shortest round-trip precision; provenance becomes `Ingested`).
    pub fn write_files<P: AsRef<Path>, Q: AsRef<Path>>(
        &self,
        csv_path: P,
        sidecar_path: Q,
    ) -> Result<()> {
        let sidecar = Sidecar {
            k1: self.k1,
            k2: self.k2,
            level: self.level,
            coords: CoordSystem::Omega,
            conductor: self.conductor,
        };
        let mut json = serde_json::to_string_pretty(&sidecar)?;
        json.push('\n');
        std::fs::write(sidecar_path, json)?;
        let mut writer = csv::Writer::from_path(csv_path)?;
        writer.write_record(["form_id", "p", "x", "y"])?;
        for r in &self.records {
            // `{}` on f64 prints the shortest decimal that parses back to
            // the same bits, so the CSV round trip is exact.
            writer.write_record([
                r.form_id.as_str(),
                &r.p.to_string(),
                &format!("{}", r.x),
                &format!("{}", r.y),
            ])?;
        }
        writer.flush()?;
        Ok(())
    }

    /// Draw a synthetic family: one point of the local equilibrium measure
    /// μ_p per form per prime. Deterministic in (arguments, seed); records
    /// are form-major with primes ascending. Zero forms (or no primes)
    /// yields a valid empty dataset.
    pub fn synthesize(
        k1: u64,
        k2: u64,
        level: u64,
        n_forms: usize,
        primes: &[u64],
        seed: u64,
    ) -> Result<Self> {
        let plist: Vec<u64> = primes
            .iter()
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut columns: Vec<(u64, Vec<OmegaPoint>)> = Vec::with_capacity(plist.len());
        if n_forms > 0 {
            for &p in &plist {
                let pts = measures::sample(p as f64, n_forms, child_seed(seed, p))?;
                columns.push((p, pts));
            }
        }
        let mut records = Vec::with_capacity(n_forms * plist.len());
        for form in 0..n_forms {
            let form_id = format!("F{form:06}");
            for (p, pts) in &columns {
                records.push(FormRecord {
                    form_id: form_id.clone(),
                    p: *p,
                    x: pts[form].x,
                    y: pts[form].y,
                });
            }
        }
        Self::new(
            k1,
            k2,
            level,
            None,
            DatasetSource::Synthetic { seed },
            records,
        )
    }
}

/// One test function's row in an equidistribution report.
#[derive(Debug, Clone, Serialize)]
pub struct EquidistRow {
    /// Label of the test function.
    pub name: String,
    /// Sample mean over the family at the chosen prime.
    pub empirical: f64,
    /// Quadrature value of ∫ f dμ_p, normalized by the quadrature mass of
    /// μ_p itself (a ratio estimator), so a constant test function gets the
    /// exact constant as reference.
    pub reference: f64,
    /// empirical − reference.
    pub difference: f64,
    /// Sample standard deviation divided by √n.
    pub std_err: f64,
}

/// Equidistribution report of a dataset at one prime.
#[derive(Debug, Clone, Serialize)]
pub struct EquidistReport {
    /// Prime the report is taken at.
    pub p: u64,
    /// Number of forms contributing.
    pub n: usize,
    /// One row per test function.
    pub rows: Vec<EquidistRow>,
}

/// A test function on Ω, as a plain pointer so lists of them stay `Copy`.
pub type TestFn = fn(f64, f64) -> f64;

/// The default test functions {1, x, y, xy, x²} on Ω.
pub fn standard_test_functions() -> Vec<(&'static str, TestFn)> {
    vec![
        ("1", (|_, _| 1.0) as TestFn),
        ("x", |x, _| x),
        ("y", |_, y| y),
        ("xy", |x, y| x * y),
        ("x^2", |x, _| x * x),
    ]
}

/// Compare sample means of test functions at prime `p` against their
/// μ_p-integrals. `tol` is the quadrature tolerance for the references.
/// Every form in the dataset must have a record at `p`.
pub fn equidist_report(
    ds: &FamilyDataset,
    p: u64,
    fns: &[(&str, TestFn)],
    tol: f64,
) -> Result<EquidistReport> {
    for form in ds.form_ids() {
        ds.require(form, p)?;
    }
    let pts = ds.points_at_prime(p);
    let n = pts.len();
    if n < 2 {
        return Err(Error::DatasetInvariant(format!(
            "need at least two records at p = {p} for a report, got {n}"
        )));
    }
    // Normalizing by the quadrature's own mass makes the reference of a
    // constant exact (the two integrals are the identical computation), and
    // cancels the shared quadrature error for everything else.
    let mass = measures::integrate_mu_normalized(p as f64, |_| 1.0, tol)?;
    let mut rows = Vec::with_capacity(fns.len());
    for &(name, f) in fns {
        let mean = pts.iter().map(|&(x, y)| f(x, y)).sum::<f64>() / n as f64;
        let var = pts
            .iter()
            .map(|&(x, y)| {
                let d = f(x, y) - mean;
                d * d
            })
            .sum::<f64>()
            / (n - 1) as f64;
        let reference =
            measures::integrate_mu_normalized(p as f64, |pt| f(pt.x, pt.y), tol)? / mass;
        rows.push(EquidistRow {
            name: name.to_owned(),
            empirical: mean,
            reference,
            difference: mean - reference,
            std_err: (var / n as f64).sqrt(),
        });
    }
    Ok(EquidistReport { p, n, rows })
}

/// Two-dimensional Kolmogorov–Smirnov statistic of a point cloud against
/// μ_p, over a `grid` × `grid` lattice of corner points of Ω: the maximum
/// over lattice points of |empirical CDF − μ_p CDF|. The reference CDF is
/// evaluated by fixed-order Gauss–Legendre quadrature in angle coordinates.
pub fn ks_statistic(points: &[(f64, f64)], p: f64, grid: usize, quad_order: usize) -> Result<f64> {
    measures::validate_p(p)?;
    if grid < 2 || points.is_empty() {
        return Err(Error::Domain(
            "KS statistic needs a grid of at least 2 and a nonempty sample".into(),
        ));
    }
    let n = points.len() as f64;
    let h = 4.0 / (grid as f64 - 1.0);
    // Cell counts: cell c holds x ∈ [g_c, g_{c+1}), top cell closed.
    let cells = grid - 1;
    let mut counts = vec![0u64; cells * cells];
    for &(x, y) in points {
        if !(x.abs() <= 2.0 && y.abs() <= 2.0) {
            return Err(Error::Domain(format!(
                "sample point ({x}, {y}) outside the closed square"
            )));
        }
        let cx = (((x + 2.0) / h) as usize).min(cells - 1);
        let cy = (((y + 2.0) / h) as usize).min(cells - 1);
        counts[cx * cells + cy] += 1;
    }
    // Prefix sums: pre[i][j] = #points with cell_x < i and cell_y < j.
    let mut pre = vec![0u64; grid * grid];
    for i in 1..grid {
        for j in 1..grid {
            pre[i * grid + j] = counts[(i - 1) * cells + (j - 1)]
                + pre[(i - 1) * grid + j]
                + pre[i * grid + (j - 1)]
                - pre[(i - 1) * grid + (j - 1)];
        }
    }
    let c = measures::plancherel_constant(p);
    let pi = std::f64::consts::PI;
    let mut ks = 0.0_f64;
    for i in 0..grid {
        let gx = -2.0 + h * i as f64;
        let t1_lo = (gx / 2.0).clamp(-1.0, 1.0).acos();
        for j in 0..grid {
            let gy = -2.0 + h * j as f64;
            let t2_lo = (gy / 2.0).clamp(-1.0, 1.0).acos();
            let emp = pre[i * grid + j] as f64 / n;
            let reference = quad::integrate_2d(
                |t1, t2| {
                    c * measures::plancherel_shape(
                        p,
                        SatakeAngles {
                            theta1: t1,
                            theta2: t2,
                        },
                    )
                },
                (t1_lo, pi),
                (t2_lo, pi),
                quad_order,
            );
            ks = ks.max((emp - reference).abs());
        }
    }
    Ok(ks)
}

/// Tunable exponents of the remainder terms in the error budgets.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BudgetParams {
    /// Remainder exponent slope in the level aspect.
    pub a: f64,
    /// Remainder exponent offset in the level aspect.
    pub b: f64,
    /// Remainder exponent slope in the weight aspect.
    pub a_prime: f64,
    /// Remainder exponent offset in the weight aspect.
    pub b_prime: f64,
}

impl Default for BudgetParams {
    fn default() -> Self {
        Self {
            a: 1.0,
            b: 1.0,
            a_prime: 1.0,
            b_prime: 1.0,
        }
    }
}

/// Error budget in the level aspect at Hecke depth κ.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LevelBudget {
    /// Main term p^κ φ(N) / N².
    pub main: f64,
    /// Remainder bound p^{aκ+b} φ(N) / N³.
    pub remainder: f64,
}

/// Main and remainder budgets for averaging at level N, prime p, depth κ.
pub fn level_error_budget(
    p: u64,
    kappa: u32,
    level: u64,
    params: &BudgetParams,
) -> Result<LevelBudget> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("budget prime {p} is not prime")));
    }
    if level == 0 {
        return Err(Error::Domain("level must be positive".into()));
    }
    let pf = p as f64;
    let phi = euler_phi(level) as f64;
    let nf = level as f64;
    Ok(LevelBudget {
        main: pf.powi(kappa as i32) * phi / (nf * nf),
        remainder: pf.powf(params.a * kappa as f64 + params.b) * phi / (nf * nf * nf),
    })
}

/// Error budget in the weight aspect at Hecke depth κ.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct WeightBudget {
    /// First main term p^κ / ((k₁-1)(k₂-2)).
    pub b1: f64,
    /// Second main term p^κ / ((k₁-k₂+1)(k₁+k₂-3)).
    pub b2: f64,
    /// Remainder bound p^{a'κ+b'} / ((k₁-k₂+1)(k₁-1)(k₂-2)).
    pub remainder: f64,
}

/// Main and remainder budgets for averaging at weight (k₁, k₂), prime p,
/// depth κ.
pub fn weight_error_budget(
    p: u64,
    kappa: u32,
    k1: u64,
    k2: u64,
    params: &BudgetParams,
) -> Result<WeightBudget> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("budget prime {p} is not prime")));
    }
    if !(k1 >= k2 && k2 >= 3) {
        return Err(Error::Domain(format!(
            "weight needs k1 >= k2 >= 3, got ({k1}, {k2})"
        )));
    }
    let pf = p as f64;
    let d1 = ((k1 - 1) * (k2 - 2)) as f64;
    let d2 = ((k1 - k2 + 1) * (k1 + k2 - 3)) as f64;
    let d3 = ((k1 - k2 + 1) * (k1 - 1) * (k2 - 2)) as f64;
    Ok(WeightBudget {
        b1: pf.powi(kappa as i32) / d1,
        b2: pf.powi(kappa as i32) / d2,
        remainder: pf.powf(params.a_prime * kappa as f64 + params.b_prime) / d3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unique_temp(name: &str) -> std::path::PathBuf {
        std::env::temp_dir().join(format!("gsp4-harness-{}-{}", std::process::id(), name))
    }

    #[test]
    fn primality_and_totient() {
        let primes: Vec<u64> = primes_up_to(30);
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(!is_prime(1));
        assert!(is_prime(2));
        assert!(!is_prime(91)); // 7 × 13
        assert!(is_prime(97));
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(3), 2);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(97), 96);
        assert_eq!(euler_phi(360), 96);
    }

    #[test]
    fn synthesis_is_deterministic_and_form_major() {
        let a = FamilyDataset::synthesize(10, 10, 1, 5, &[5, 2, 3], 42).unwrap();
        let b = FamilyDataset::synthesize(10, 10, 1, 5, &[2, 3, 5], 42).unwrap();
        let c = FamilyDataset::synthesize(10, 10, 1, 5, &[2, 3, 5], 43).unwrap();
        assert_eq!(a.records(), b.records());
        assert_ne!(a.records(), c.records());
        assert_eq!(a.records().len(), 15);
        // Form-major layout with primes ascending inside each form.
        let ps: Vec<u64> = a.records().iter().take(3).map(|r| r.p).collect();
        assert_eq!(ps, vec![2, 3, 5]);
        assert_eq!(a.records()[0].form_id, "F000000");
        assert_eq!(a.records()[3].form_id, "F000001");
        assert_eq!(a.primes(), vec![2, 3, 5]);
        assert_eq!(a.form_ids().len(), 5);
        assert!(a.lookup("F000004", 5).is_some());
        assert!(matches!(
            a.require("F000005", 5),
            Err(Error::MissingPrime { .. })
        ));
    }

    #[test]
    fn synthesis_of_zero_forms_is_empty() {
        let ds = FamilyDataset::synthesize(10, 10, 1, 0, &[2, 3], 1).unwrap();
        assert!(ds.records().is_empty());
        assert!(ds.form_ids().is_empty());
        assert!(ds.primes().is_empty());
        let no_primes = FamilyDataset::synthesize(10, 10, 1, 5, &[], 1).unwrap();
        assert!(no_primes.records().is_empty());
    }

    #[test]
    fn dataset_invariants_are_enforced() {
        let rec = |id: &str, p: u64, x: f64, y: f64| FormRecord {
            form_id: id.into(),
            p,
            x,
            y,
        };
        // Prime dividing the level.
        let e = FamilyDataset::new(
            4,
            3,
            6,
            None,
            DatasetSource::Ingested,
            vec![rec("a", 3, 0.0, 0.0)],
        );
        assert!(matches!(e, Err(Error::DatasetInvariant(_))));
        // Composite p.
        let e = FamilyDataset::new(
            4,
            3,
            1,
            None,
            DatasetSource::Ingested,
            vec![rec("a", 9, 0.0, 0.0)],
        );
        assert!(matches!(e, Err(Error::DatasetInvariant(_))));
        // Point outside the closed square.
        let e = FamilyDataset::new(
            4,
            3,
            1,
            None,
            DatasetSource::Ingested,
            vec![rec("a", 5, 2.1, 0.0)],
        );
        assert!(matches!(e, Err(Error::DatasetInvariant(_))));
        // Duplicate (form, prime).
        let e = FamilyDataset::new(
            4,
            3,
            1,
            None,
            DatasetSource::Ingested,
            vec![rec("a", 5, 0.0, 0.0), rec("a", 5, 1.0, 1.0)],
        );
        assert!(matches!(e, Err(Error::DatasetInvariant(_))));
        // Boundary points are allowed (closed square).
        assert!(FamilyDataset::new(
            4,
            3,
            1,
            None,
            DatasetSource::Ingested,
            vec![rec("a", 5, 2.0, -2.0)]
        )
        .is_ok());
    }

    #[test]
    fn ingest_omega_round_trip() {
        let csv_path = unique_temp("omega.csv");
        let json_path = unique_temp("omega.json");
        std::fs::write(
            &csv_path,
            "form_id,p,x,y\nf1,2,0.25,-1.5\nf1,3,1.0,0.5\nf2,2,-0.75,0.0\n",
        )
        .unwrap();
        std::fs::write(
            &json_path,
            r#"{"k1": 10, "k2": 4, "N": 7, "coords": "omega"}"#,
        )
        .unwrap();
        let ds = FamilyDataset::ingest(&csv_path, &json_path).unwrap();
        assert_eq!((ds.k1, ds.k2, ds.level, ds.conductor), (10, 4, 7, None));
        assert_eq!(ds.source, DatasetSource::Ingested);
        assert_eq!(ds.records().len(), 3);
        assert_eq!(ds.lookup("f1", 3), Some((1.0, 0.5)));
        std::fs::remove_file(csv_path).ok();
        std::fs::remove_file(json_path).ok();
    }

    #[test]
    fn ingest_angles_normalizes_order() {
        let csv_path = unique_temp("angles.csv");
        let json_path = unique_temp("angles.json");
        // θ₁ > θ₂ on purpose; ingestion must swap before converting, so
        // x = 2cos(min) ≥ y = 2cos(max).
        std::fs::write(&csv_path, "form_id,p,theta1,theta2\nf1,2,2.0,1.0\n").unwrap();
        std::fs::write(
            &json_path,
            r#"{"k1": 4, "k2": 3, "N": 1, "coords": "angles", "conductor": 196}"#,
        )
        .unwrap();
        let ds = FamilyDataset::ingest(&csv_path, &json_path).unwrap();
        let (x, y) = ds.lookup("f1", 2).unwrap();
        assert_relative_eq!(x, 2.0 * 1.0_f64.cos(), max_relative = 1e-15);
        assert_relative_eq!(y, 2.0 * 2.0_f64.cos(), max_relative = 1e-15);
        assert_eq!(ds.conductor, Some(196));
        std::fs::remove_file(csv_path).ok();
        std::fs::remove_file(json_path).ok();
    }

    #[test]
    fn ingest_rejects_schema_violations() {
        let json_path = unique_temp("schema.json");
        std::fs::write(
            &json_path,
            r#"{"k1": 4, "k2": 3, "N": 1, "coords": "omega"}"#,
        )
        .unwrap();
        // Wrong header for the declared coordinate system.
        let bad_header = unique_temp("bad-header.csv");
        std::fs::write(&bad_header, "form_id,p,theta1,theta2\nf1,2,1.0,2.0\n").unwrap();
        assert!(matches!(
            FamilyDataset::ingest(&bad_header, &json_path),
            Err(Error::SchemaViolation(_))
        ));
        // Unparseable number.
        let bad_value = unique_temp("bad-value.csv");
        std::fs::write(&bad_value, "form_id,p,x,y\nf1,2,zero,0.5\n").unwrap();
        assert!(matches!(
            FamilyDataset::ingest(&bad_value, &json_path),
            Err(Error::SchemaViolation(_))
        ));
        // Angle outside [0, π] surfaces as a schema problem with line info.
        let json_angles = unique_temp("schema-angles.json");
        std::fs::write(
            &json_angles,
            r#"{"k1": 4, "k2": 3, "N": 1, "coords": "angles"}"#,
        )
        .unwrap();
        let bad_angle = unique_temp("bad-angle.csv");
        std::fs::write(&bad_angle, "form_id,p,theta1,theta2\nf1,2,1.0,4.0\n").unwrap();
        assert!(matches!(
            FamilyDataset::ingest(&bad_angle, &json_angles),
            Err(Error::SchemaViolation(_))
        ));
        // Invariant breaches of ingested contents surface as schema
        // violations too: out-of-range coordinate, duplicate key, p | N.
        let out_of_range = unique_temp("out-of-range.csv");
        std::fs::write(&out_of_range, "form_id,p,x,y\nf1,2,2.5,0.0\n").unwrap();
        assert!(matches!(
            FamilyDataset::ingest(&out_of_range, &json_path),
            Err(Error::SchemaViolation(_))
        ));
        let duplicate = unique_temp("duplicate.csv");
        std::fs::write(&duplicate, "form_id,p,x,y\nf1,2,0.0,0.0\nf1,2,1.0,1.0\n").unwrap();
        assert!(matches!(
            FamilyDataset::ingest(&duplicate, &json_path),
            Err(Error::SchemaViolation(_))
        ));
        let json_level_six = unique_temp("schema-n6.json");
        std::fs::write(
            &json_level_six,
            r#"{"k1": 4, "k2": 3, "N": 6, "coords": "omega"}"#,
        )
        .unwrap();
        let divides_level = unique_temp("divides-level.csv");
        std::fs::write(&divides_level, "form_id,p,x,y\nf1,3,0.0,0.0\n").unwrap();
        assert!(matches!(
            FamilyDataset::ingest(&divides_level, &json_level_six),
            Err(Error::SchemaViolation(_))
        ));
        for p in [
            json_path,
            bad_header,
            bad_value,
            json_angles,
            bad_angle,
            out_of_range,
            duplicate,
            json_level_six,
            divides_level,
        ] {
            std::fs::remove_file(p).ok();
        }
    }

    #[test]
    fn write_then_ingest_round_trips_bit_exactly() {
        let ds = FamilyDataset::synthesize(12, 5, 7, 8, &[2, 3, 5], 99).unwrap();
        let csv_path = unique_temp("round-trip.csv");
        let json_path = unique_temp("round-trip.json");
        ds.write_files(&csv_path, &json_path).unwrap();
        let back = FamilyDataset::ingest(&csv_path, &json_path).unwrap();
        assert_eq!(
            (back.k1, back.k2, back.level, back.conductor),
            (ds.k1, ds.k2, ds.level, ds.conductor)
        );
        assert_eq!(back.records().len(), ds.records().len());
        for (a, b) in ds.records().iter().zip(back.records()) {
            assert_eq!(a.form_id, b.form_id);
            assert_eq!(a.p, b.p);
            // Bit-exact coordinates, not just approximately equal.
            assert_eq!(a.x.to_bits(), b.x.to_bits());
            assert_eq!(a.y.to_bits(), b.y.to_bits());
        }
        std::fs::remove_file(csv_path).ok();
        std::fs::remove_file(json_path).ok();
    }

    #[test]
    fn equidistribution_report_on_synthetic_data() {
        let ds = FamilyDataset::synthesize(10, 10, 1, 4000, &[3], 2024).unwrap();
        let fns = standard_test_functions();
        let report = equidist_report(&ds, 3, &fns, 1e-9).unwrap();
        assert_eq!(report.n, 4000);
        for row in &report.rows {
            assert!(
                row.difference.abs() <= 4.0 * row.std_err + 1e-9,
                "{}: diff {} vs 4·SE {}",
                row.name,
                row.difference,
                row.std_err * 4.0
            );
        }
        // The constant row is exact on both sides: the reference is the
        // quadrature mass divided by itself.
        assert_eq!(report.rows[0].empirical, 1.0);
        assert_eq!(report.rows[0].reference, 1.0);
        assert_eq!(report.rows[0].difference, 0.0);
        // A form without a record at the requested prime is an error.
        let short = FamilyDataset::new(
            10,
            10,
            1,
            None,
            DatasetSource::Ingested,
            vec![
                FormRecord {
                    form_id: "a".into(),
                    p: 3,
                    x: 0.1,
                    y: 0.2,
                },
                FormRecord {
                    form_id: "b".into(),
                    p: 3,
                    x: 0.3,
                    y: 0.4,
                },
                FormRecord {
                    form_id: "c".into(),
                    p: 5,
                    x: 0.5,
                    y: 0.6,
                },
            ],
        )
        .unwrap();
        assert!(matches!(
            equidist_report(&short, 3, &standard_test_functions(), 1e-9),
            Err(Error::MissingPrime { ref form_id, p: 3 }) if form_id == "c"
        ));
    }

    #[test]
    fn ks_statistic_small_for_matching_sample() {
        let ds = FamilyDataset::synthesize(10, 10, 1, 3000, &[3], 7).unwrap();
        let pts = ds.points_at_prime(3);
        let ks = ks_statistic(&pts, 3.0, 21, 32).unwrap();
        assert!(ks < 0.05, "KS statistic unexpectedly large: {ks}");
        // A sample concentrated in one corner is far from equilibrium.
        let clump: Vec<(f64, f64)> = (0..500).map(|i| (1.9, -1.9 + 1e-4 * i as f64)).collect();
        let ks_bad = ks_statistic(&clump, 3.0, 21, 32).unwrap();
        assert!(
            ks_bad > 0.5,
            "clumped sample should have large KS: {ks_bad}"
        );
        assert!(ks_statistic(&pts, 3.0, 1, 32).is_err());
    }

    #[test]
    fn error_budget_frozen_values() {
        let params = BudgetParams::default();
        let lvl = level_error_budget(2, 1, 3, &params).unwrap();
        assert_relative_eq!(lvl.main, 4.0 / 9.0, max_relative = 1e-15);
        assert_relative_eq!(lvl.remainder, 8.0 / 27.0, max_relative = 1e-15);
        let wt = weight_error_budget(2, 1, 10, 10, &params).unwrap();
        assert_relative_eq!(wt.b1, 2.0 / 72.0, max_relative = 1e-15);
        assert_relative_eq!(wt.b2, 2.0 / 17.0, max_relative = 1e-15);
        assert_relative_eq!(wt.remainder, 4.0 / 72.0, max_relative = 1e-15);
        assert!(level_error_budget(4, 1, 3, &params).is_err());
        assert!(weight_error_budget(2, 1, 3, 4, &params).is_err());
    }
}
