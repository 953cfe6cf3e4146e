//! Seeded Monte-Carlo suites and the worked-example checks.
//!
//! Trial `i` of a campaign with seed `s` draws from its own stream
//! `trial_rng(s, i)`, so serial and parallel runs give identical rows.
//! Property failures are recorded in the report, never raised.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ambiguity::{attack, rotational_family, shift_ambiguity, COLLINEARITY_MARGIN};
use crate::lifted::{antidiagonal_sums, convolve, LiftedConvOp};
use crate::matrix::DenseMatrix;
use crate::nullspace::{
    classify, kernel_basis, m2_element, n0_element, n2_sample, FamilyKind, NullspaceCertificate,
};
use crate::quotient::{quotient_decompose, reconstruct};
use crate::rank::rank_estimate;
use crate::sampling::{endpoint_safe_signal, nonzero_signal, trial_rng, uniform_signal, MAX_RETRIES};
use crate::signal::Signal;
use crate::tolerance::ToleranceProfile;

/// Relative residual bound used by the attack, quotient and classifier suites.
pub const RESIDUAL_BOUND: f64 = 1e-8;
/// Relative lift bound for constructor outputs.
pub const LIFT_BOUND: f64 = 1e-10;
/// Largest collinearity accepted from the attack.
pub const ATTACK_COLLINEARITY_BOUND: f64 = 1.0 - 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// Even-order attack on endpoint-safe random pairs.
    Attack,
    /// Cardinality and round-trip of decompositions of random even-length `w`.
    Quotient,
    /// Decompositions of `w = reconstruct(w*, gamma)` recover a valid element.
    QuotientForward,
    /// N0, N2 and M2 draws over the size grid lie in the rank-two kernel.
    Nullspace,
    /// Kernel basis sizes and independence over the size grid.
    Kernel,
    /// Every two-row kernel basis element has the bordered N0 pattern.
    Structure,
    /// Classifier round-trips on generated N0 and N2 elements.
    Classify,
    /// M2 elements classify as raw.
    Exception,
    /// Zero-padding shifts are exact and non-collinear.
    Shift,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Attack,
        Suite::Quotient,
        Suite::QuotientForward,
        Suite::Nullspace,
        Suite::Kernel,
        Suite::Structure,
        Suite::Classify,
        Suite::Exception,
        Suite::Shift,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Attack => "attack",
            Suite::Quotient => "quotient",
            Suite::QuotientForward => "quotient-forward",
            Suite::Nullspace => "nullspace",
            Suite::Kernel => "kernel",
            Suite::Structure => "structure",
            Suite::Classify => "classify",
            Suite::Exception => "exception",
            Suite::Shift => "shift",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
                format!("unknown suite `{s}`, expected one of: {}", names.join(", "))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub suite: Suite,
    /// Trials for sampled suites; draws per family and size for `nullspace`.
    pub trials: usize,
    pub seed: u64,
    pub mmax: usize,
    pub nmax: usize,
    pub tol: ToleranceProfile,
    /// Record per-trial wall time. Off by default so that reports are
    /// byte-reproducible.
    pub timing: bool,
}

impl CampaignConfig {
    pub fn new(suite: Suite, trials: usize, seed: u64) -> Self {
        Self {
            suite,
            trials,
            seed,
            mmax: 10,
            nmax: 10,
            tol: ToleranceProfile::default(),
            timing: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub index: u64,
    pub m: usize,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub family: Option<FamilyKind>,
    pub success: bool,
    /// Residual normalized by the trial's natural scale; `None` when the
    /// trial raised an error.
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub collinearity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cardinality: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time_us: Option<f64>,
    /// Reproducer and reason, only for failed trials.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub failure: Option<String>,
}

impl TrialRecord {
    fn new(index: u64, m: usize, n: usize) -> Self {
        Self {
            index,
            m,
            n,
            family: None,
            success: false,
            residual: None,
            collinearity: None,
            cardinality: None,
            wall_time_us: None,
            failure: None,
        }
    }

    fn fail(mut self, reason: impl Into<String>) -> Self {
        self.success = false;
        self.failure = Some(reason.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub max_residual: Option<f64>,
}

impl Aggregate {
    pub fn from_records(records: &[TrialRecord]) -> Self {
        let successes = records.iter().filter(|r| r.success).count();
        let max_residual = records
            .iter()
            .filter_map(|r| r.residual)
            .reduce(f64::max);
        Self {
            trials: records.len(),
            successes,
            success_rate: if records.is_empty() {
                0.0
            } else {
                successes as f64 / records.len() as f64
            },
            max_residual,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub suite: Suite,
    pub seed: u64,
    pub aggregate: Aggregate,
    pub trials: Vec<TrialRecord>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl TrialReport {
    pub fn all_passed(&self) -> bool {
        self.aggregate.successes == self.aggregate.trials
    }

    pub fn failures(&self) -> impl Iterator<Item = &TrialRecord> {
        self.trials.iter().filter(|r| !r.success)
    }
}

/// Runs one suite. Zero trials give an empty report.
pub fn run_campaign(config: &CampaignConfig) -> TrialReport {
    let jobs = plan(config);
    let records: Vec<TrialRecord> = jobs
        .into_par_iter()
        .enumerate()
        .map(|(i, job)| {
            let start = config.timing.then(Instant::now);
            let mut record = run_job(config, i as u64, job);
            record.wall_time_us = start.map(|s| s.elapsed().as_secs_f64() * 1e6);
            record
        })
        .collect();
    let note = match config.suite {
        Suite::Attack | Suite::Quotient => Some(
            "empirical success rate over seeded draws; evidence for, not a proof of, a \
             measure-theoretic statement"
                .to_string(),
        ),
        _ => None,
    };
    TrialReport {
        suite: config.suite,
        seed: config.seed,
        aggregate: Aggregate::from_records(&records),
        trials: records,
        note,
    }
}

/// One unit of work; grid suites fix the size up front.
#[derive(Debug, Clone, Copy)]
enum Job {
    Sampled,
    Cell { m: usize, n: usize, family: Option<FamilyKind> },
}

fn plan(config: &CampaignConfig) -> Vec<Job> {
    let grid = |lo: usize| {
        (lo..=config.mmax).flat_map(move |m| (lo..=config.nmax).map(move |n| (m, n)))
    };
    match config.suite {
        Suite::Nullspace => grid(2)
            .flat_map(|(m, n)| {
                let mut families = vec![FamilyKind::N0, FamilyKind::N2];
                if m == n && m >= 3 {
                    families.push(FamilyKind::M2);
                }
                families.into_iter().flat_map(move |f| {
                    (0..config.trials).map(move |_| Job::Cell {
                        m,
                        n,
                        family: Some(f),
                    })
                })
            })
            .collect(),
        Suite::Kernel => grid(1)
            .map(|(m, n)| Job::Cell { m, n, family: None })
            .collect(),
        Suite::Structure => (1..=config.nmax)
            .flat_map(|n| [(1, n), (n, 1), (2, n)])
            .map(|(m, n)| Job::Cell { m, n, family: None })
            .collect(),
        _ => vec![Job::Sampled; config.trials],
    }
}

fn run_job(config: &CampaignConfig, index: u64, job: Job) -> TrialRecord {
    let mut rng = trial_rng(config.seed, index);
    let tol = &config.tol;
    match (config.suite, job) {
        (Suite::Nullspace, Job::Cell { m, n, family }) => {
            nullspace_trial(&mut rng, index, m, n, family.expect("planned with a family"))
        }
        (Suite::Kernel, Job::Cell { m, n, .. }) => kernel_trial(index, m, n, tol),
        (Suite::Structure, Job::Cell { m, n, .. }) => structure_trial(index, m, n),
        (Suite::Attack, _) => attack_trial(&mut rng, index, tol),
        (Suite::Quotient, _) => quotient_trial(&mut rng, index, tol),
        (Suite::QuotientForward, _) => quotient_forward_trial(&mut rng, index, tol),
        (Suite::Classify, _) => classify_trial(&mut rng, index, config, tol),
        (Suite::Exception, _) => exception_trial(&mut rng, index, config, tol),
        (Suite::Shift, _) => shift_trial(&mut rng, index),
        (suite, job) => unreachable!("suite {suite} planned job {job:?}"),
    }
}

fn even_order<R: Rng>(rng: &mut R, lo: usize, hi: usize) -> usize {
    2 * rng.gen_range(lo / 2..=hi / 2)
}

fn attack_trial<R: Rng>(rng: &mut R, index: u64, tol: &ToleranceProfile) -> TrialRecord {
    let m = even_order(rng, 4, 16);
    let n = even_order(rng, 4, 16);
    let x = endpoint_safe_signal(rng, m);
    let y = endpoint_safe_signal(rng, n);
    let mut rec = TrialRecord::new(index, m, n);
    let reproducer = || format!("x = {:?}, y = {:?}", x.as_slice(), y.as_slice());
    match attack(&x, &y, tol) {
        Ok(pair) => {
            let scale = convolve(&x, &y).max_abs();
            let rel = pair.residual / scale;
            rec.residual = Some(rel);
            rec.collinearity = Some(pair.collinearity);
            rec.success = rel <= RESIDUAL_BOUND && pair.collinearity <= ATTACK_COLLINEARITY_BOUND;
            if !rec.success {
                return rec.fail(reproducer());
            }
            rec
        }
        Err(e) => rec.fail(format!("{e}; {}", reproducer())),
    }
}

fn quotient_trial<R: Rng>(rng: &mut R, index: u64, tol: &ToleranceProfile) -> TrialRecord {
    let d = even_order(rng, 4, 10);
    let w = endpoint_safe_signal(rng, d);
    check_decomposition(index, &w, tol, false)
}

fn quotient_forward_trial<R: Rng>(rng: &mut R, index: u64, tol: &ToleranceProfile) -> TrialRecord {
    let d = rng.gen_range(2..=10);
    let w_star = endpoint_safe_signal(rng, d - 1);
    // keep both endpoints of w away from zero
    let mut gamma = rng.gen_range(0.0..TAU);
    for _ in 0..MAX_RETRIES {
        if gamma.sin().abs() > 0.1 && gamma.cos().abs() > 0.1 {
            break;
        }
        gamma = rng.gen_range(0.0..TAU);
    }
    let w = reconstruct(&w_star, gamma, d).expect("length d - 1");
    check_decomposition(index, &w, tol, true)
}

fn check_decomposition(index: u64, w: &Signal, tol: &ToleranceProfile, planted: bool) -> TrialRecord {
    let d = w.len();
    let mut rec = TrialRecord::new(index, d, 1);
    let elements = match quotient_decompose(w, tol) {
        Ok(e) => e,
        Err(e) => return rec.fail(format!("{e}; w = {:?}", w.as_slice())),
    };
    let scale = w.max_abs();
    let worst = elements
        .iter()
        .map(|e| e.reconstruct().max_abs_diff(w).expect("same length") / scale)
        .fold(0.0, f64::max);
    rec.cardinality = Some(elements.len());
    rec.residual = Some(worst);
    let bounded = elements.len() <= 2 * d - 2;
    let nonempty = !elements.is_empty();
    rec.success = bounded && worst <= RESIDUAL_BOUND && (nonempty || (!planted && d % 2 == 1));
    if !rec.success {
        return rec.fail(format!(
            "{} elements (bound {}), worst residual {worst:e}; w = {:?}",
            elements.len(),
            2 * d - 2,
            w.as_slice()
        ));
    }
    rec
}

fn nullspace_trial<R: Rng>(rng: &mut R, index: u64, m: usize, n: usize, family: FamilyKind) -> TrialRecord {
    let mut rec = TrialRecord::new(index, m, n);
    rec.family = Some(family);
    let q = match draw_member(rng, m, n, family) {
        Ok(q) => q,
        Err(e) => return rec.fail(e.to_string()),
    };
    let scale = q.max_abs();
    let lift = antidiagonal_sums(&q).max_abs();
    let rel = if scale > 0.0 { lift / scale } else { lift };
    let rank = rank_estimate(&q, &ToleranceProfile::default());
    rec.residual = Some(rel);
    rec.success = rel <= LIFT_BOUND && rank <= 2;
    if !rec.success {
        return rec.fail(format!("lift {rel:e}, rank {rank}; Q = {:?}", q.to_rows()));
    }
    rec
}

fn draw_member<R: Rng>(rng: &mut R, m: usize, n: usize, family: FamilyKind) -> crate::Result<DenseMatrix> {
    match family {
        FamilyKind::N0 => {
            let u = nonzero_signal(rng, m - 1, 0.1, "drawing N0 parameters")?;
            let v = nonzero_signal(rng, n - 1, 0.1, "drawing N0 parameters")?;
            Ok(n0_element(&u, &v))
        }
        FamilyKind::N2 => n2_sample(m, n, rng).map(|(q, _)| q),
        FamilyKind::M2 => {
            let u = nonzero_signal(rng, n - 2, 0.1, "drawing M2 parameters")?;
            let mut lambda: f64 = rng.gen_range(-2.0..=2.0);
            while lambda.abs() < 0.1 {
                lambda = rng.gen_range(-2.0..=2.0);
            }
            m2_element(&u, lambda)
        }
        FamilyKind::Raw => unreachable!("raw elements are not drawn"),
    }
}

fn kernel_trial(index: u64, m: usize, n: usize, tol: &ToleranceProfile) -> TrialRecord {
    let mut rec = TrialRecord::new(index, m, n);
    let expected = m * n - (m + n - 1);
    let basis = match kernel_basis(m, n) {
        Ok(b) => b,
        Err(e) => return rec.fail(e.to_string()),
    };
    rec.cardinality = Some(basis.len());
    let worst = basis
        .iter()
        .map(|q| antidiagonal_sums(q).max_abs())
        .fold(0.0, f64::max);
    rec.residual = Some(worst);
    // stack vectorized basis elements as rows; independence means full row rank
    let independent = basis.is_empty()
        || DenseMatrix::new(
            basis.len(),
            m * n,
            basis.iter().flat_map(|q| q.as_slice().iter().copied()).collect(),
        )
        .map(|stack| rank_estimate(&stack, tol) == basis.len())
        .unwrap_or(false);
    let op_dim = LiftedConvOp::new(m, n).map(|op| op.kernel_dim()).unwrap_or(usize::MAX);
    rec.success = basis.len() == expected && op_dim == expected && worst <= tol.abs_tol && independent;
    if !rec.success {
        return rec.fail(format!(
            "{} basis elements, expected {expected}; independent: {independent}",
            basis.len()
        ));
    }
    rec
}

fn structure_trial(index: u64, m: usize, n: usize) -> TrialRecord {
    let mut rec = TrialRecord::new(index, m, n);
    let basis = match kernel_basis(m, n) {
        Ok(b) => b,
        Err(e) => return rec.fail(e.to_string()),
    };
    rec.cardinality = Some(basis.len());
    if m == 1 || n == 1 {
        rec.residual = Some(0.0);
        rec.success = basis.is_empty();
        if !rec.success {
            return rec.fail(format!("{} basis elements for a single row or column", basis.len()));
        }
        return rec;
    }
    // Q(1,1) = 0, Q(2,n) = 0, Q(1, 2:n) = -Q(2, 1:n-1)
    let worst = basis
        .iter()
        .map(|q| {
            (0..n - 1)
                .map(|c| (q.get(0, c + 1) + q.get(1, c)).abs())
                .fold(q.get(0, 0).abs().max(q.get(1, n - 1).abs()), f64::max)
        })
        .fold(0.0, f64::max);
    rec.residual = Some(worst);
    rec.success = basis.len() == n - 1 && worst <= 1e-10;
    if !rec.success {
        return rec.fail(format!("{} elements, pattern deviation {worst:e}", basis.len()));
    }
    rec
}

fn classify_trial<R: Rng>(rng: &mut R, index: u64, config: &CampaignConfig, tol: &ToleranceProfile) -> TrialRecord {
    let m = rng.gen_range(3..=config.mmax.max(3));
    let n = rng.gen_range(3..=config.nmax.max(3));
    let family = if rng.gen_bool(0.5) { FamilyKind::N0 } else { FamilyKind::N2 };
    let mut rec = TrialRecord::new(index, m, n);
    rec.family = Some(family);
    let mut drawn = None;
    for _ in 0..MAX_RETRIES {
        match draw_member(rng, m, n, family) {
            Ok(q) => {
                let corner = q.get(m - 1, 0).abs().max(q.get(0, n - 1).abs());
                if corner > 1e-3 * q.max_abs() {
                    drawn = Some(q);
                    break;
                }
            }
            Err(e) => return rec.fail(e.to_string()),
        }
    }
    let Some(q) = drawn else {
        return rec.fail("no draw with a nonzero corner");
    };
    match classify(&q, tol) {
        Ok(c) => {
            let rel = c.refactorization_residual / q.max_abs();
            rec.residual = Some(rel);
            let kind = c.certificate.kind();
            rec.success = kind == family && rel <= RESIDUAL_BOUND;
            if !rec.success {
                return rec.fail(format!("classified as {kind:?}, residual {rel:e}; W = {:?}", q.to_rows()));
            }
            rec
        }
        Err(e) => rec.fail(format!("{e}; W = {:?}", q.to_rows())),
    }
}

fn exception_trial<R: Rng>(rng: &mut R, index: u64, config: &CampaignConfig, tol: &ToleranceProfile) -> TrialRecord {
    let n = rng.gen_range(3..=config.nmax.max(3));
    let mut rec = TrialRecord::new(index, n, n);
    rec.family = Some(FamilyKind::M2);
    let q = match draw_member(rng, n, n, FamilyKind::M2) {
        Ok(q) => q,
        Err(e) => return rec.fail(e.to_string()),
    };
    match classify(&q, tol) {
        Ok(c) => {
            rec.residual = Some(c.refactorization_residual);
            rec.success = c.certificate == NullspaceCertificate::Raw;
            if !rec.success {
                return rec.fail(format!("classified as {:?}", c.certificate.kind()));
            }
            rec
        }
        Err(e) => rec.fail(e.to_string()),
    }
}

fn shift_trial<R: Rng>(rng: &mut R, index: u64) -> TrialRecord {
    let m = rng.gen_range(2..=12);
    let n = rng.gen_range(2..=12);
    let mut x = uniform_signal(rng, m).into_vec();
    let mut y = uniform_signal(rng, n).into_vec();
    if rng.gen_bool(0.5) {
        x[m - 1] = 0.0;
        y[0] = 0.0;
    } else {
        x[0] = 0.0;
        y[n - 1] = 0.0;
    }
    let mut rec = TrialRecord::new(index, m, n);
    let (x, y) = (Signal::from_vec_unchecked(x), Signal::from_vec_unchecked(y));
    match shift_ambiguity(&x, &y) {
        Ok(p) => {
            rec.residual = Some(p.residual);
            rec.collinearity = Some(p.collinearity);
            rec.success = p.residual == 0.0 && p.collinearity < 1.0 - COLLINEARITY_MARGIN;
            if !rec.success {
                return rec.fail(format!("x = {:?}, y = {:?}", x.as_slice(), y.as_slice()));
            }
            rec
        }
        Err(e) => rec.fail(e.to_string()),
    }
}

/// The four sparse seed vectors of the worked example.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaperSeeds {
    pub x1: Signal,
    pub x2: Signal,
    pub y1: Signal,
    pub y2: Signal,
}

impl Default for PaperSeeds {
    fn default() -> Self {
        let s = |v: &[f64]| Signal::from_slice(v).expect("finite literals");
        Self {
            x1: s(&[1., 0., 1., 0., 0., 0., 0., 0., 1., 0., 1.]),
            x2: s(&[1., 0., 0., 0., 0., 0., 0., 0., 1., 0., 0.]),
            y1: s(&[1., 0., 0., 0., 1., 0., 0.]),
            y2: s(&[1., 0., 1., 0., 1., 0., 1.]),
        }
    }
}

pub const PRINTED_Z0: [f64; 17] = [1., 0., 1., 0., 1., 0., 1., 0., 1., 0., 1., 0., 1., 0., 1., 0., 0.];
pub const PRINTED_X3: [f64; 11] = [-0.366, 0., 0.5, 0., 0., 0., 0., 0., -0.366, 0., 0.5];
pub const PRINTED_Y3: [f64; 7] = [-0.366, 0., -0.866, 0., -0.366, 0., -0.866];
pub const PRINTED_X4: [f64; 11] = [0.366, 0., 0.866, 0., 0., 0., 0., 0., 0.366, 0., 0.866];
pub const PRINTED_Y4: [f64; 7] = [0.366, 0., -0.5, 0., 0.366, 0., -0.5];
pub const PRINTED_Z3: [f64; 17] = [
    0.134, 0., 0.134, 0., -0.299, 0., 0.134, 0., -0.299, 0., 0.134, 0., -0.299, 0., 0.134, 0., -0.433,
];
/// Tolerance for three-decimal printed values.
pub const PRINTED_TOL: f64 = 5e-4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaperCheck {
    pub name: String,
    pub passed: bool,
    pub max_error: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub first_failing_index: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaperArtifacts {
    pub z0: Signal,
    pub x3: Signal,
    pub y3: Signal,
    pub x4: Signal,
    pub y4: Signal,
    pub z3: Signal,
    pub s3: DenseMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproductionReport {
    pub passed: bool,
    pub checks: Vec<PaperCheck>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub artifacts: Option<PaperArtifacts>,
}

impl ReproductionReport {
    pub fn first_failure(&self) -> Option<&PaperCheck> {
        self.checks.iter().find(|c| !c.passed)
    }
}

fn compare(name: &str, got: &[f64], want: &[f64], tolerance: f64) -> PaperCheck {
    let mut max_error: f64 = if got.len() == want.len() { 0.0 } else { f64::INFINITY };
    let mut first_failing_index = (got.len() != want.len()).then(|| got.len().min(want.len()));
    for (i, (a, b)) in got.iter().zip(want).enumerate() {
        let e = (a - b).abs();
        max_error = max_error.max(e);
        if e > tolerance && first_failing_index.is_none() {
            first_failing_index = Some(i);
        }
    }
    PaperCheck {
        name: name.to_string(),
        passed: first_failing_index.is_none(),
        max_error,
        tolerance,
        first_failing_index,
    }
}

/// Checks the worked example with the printed seeds.
pub fn reproduce_paper() -> ReproductionReport {
    reproduce_paper_with(&PaperSeeds::default())
}

/// Checks the worked example starting from arbitrary seeds, so corrupted
/// fixtures can be shown to fail at the right entry.
pub fn reproduce_paper_with(seeds: &PaperSeeds) -> ReproductionReport {
    let z1 = convolve(&seeds.x1, &seeds.y1);
    let z2 = convolve(&seeds.x2, &seeds.y2);
    let mut checks = vec![
        compare("x1 * y1 = z0 (exact)", z1.as_slice(), &PRINTED_Z0, 0.0),
        compare("x2 * y2 = z0 (exact)", z2.as_slice(), &PRINTED_Z0, 0.0),
    ];

    let op = LiftedConvOp::new(3, 4).expect("positive sizes");
    let s3 = op.selector(2).expect("index in range");
    let printed_s3 = [0., 0., 1., 0., 0., 1., 0., 0., 1., 0., 0., 0.];
    checks.push(compare("S3 for (3, 4)", s3.as_slice(), &printed_s3, 0.0));

    let family = rotational_family(
        &seeds.x1,
        &seeds.x2,
        &seeds.y1,
        &seeds.y2,
        PI / 3.0,
        PI / 6.0,
        &ToleranceProfile::default(),
    );
    let artifacts = match family {
        Ok(f) => {
            checks.push(compare("x3", f.x1p.as_slice(), &PRINTED_X3, PRINTED_TOL));
            checks.push(compare("y3", f.y1p.as_slice(), &PRINTED_Y3, PRINTED_TOL));
            checks.push(compare("x4", f.x2p.as_slice(), &PRINTED_X4, PRINTED_TOL));
            checks.push(compare("y4", f.y2p.as_slice(), &PRINTED_Y4, PRINTED_TOL));
            let z3 = convolve(&f.x1p, &f.y1p);
            let z4 = convolve(&f.x2p, &f.y2p);
            checks.push(compare("x3 * y3 = x4 * y4", z3.as_slice(), z4.as_slice(), 1e-12));
            checks.push(compare("x3 * y3 printed", z3.as_slice(), &PRINTED_Z3, PRINTED_TOL));
            Some(PaperArtifacts {
                z0: z1,
                x3: f.x1p,
                y3: f.y1p,
                x4: f.x2p,
                y4: f.y2p,
                z3,
                s3,
            })
        }
        Err(e) => {
            checks.push(PaperCheck {
                name: format!("rotational family: {e}"),
                passed: false,
                max_error: f64::INFINITY,
                tolerance: 1e-12,
                first_failing_index: None,
            });
            None
        }
    };
    ReproductionReport {
        passed: checks.iter().all(|c| c.passed),
        checks,
        artifacts,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn worked_example_defaults_pass() {
        let r = reproduce_paper();
        assert!(r.passed, "{:?}", r.first_failure());
        assert_eq!(r.checks.len(), 9);
    }

    #[test]
    fn corrupted_seed_reports_first_index() {
        let mut seeds = PaperSeeds::default();
        let mut x1 = seeds.x1.clone().into_vec();
        x1[2] = 0.0;
        seeds.x1 = Signal::new(x1).unwrap();
        let r = reproduce_paper_with(&seeds);
        assert!(!r.passed);
        let first = r.first_failure().unwrap();
        assert_eq!(first.name, "x1 * y1 = z0 (exact)");
        assert_eq!(first.first_failing_index, Some(2));
    }

    #[test]
    fn parallel_runs_are_deterministic() {
        let cfg = CampaignConfig::new(Suite::Attack, 16, 42);
        let a = run_campaign(&cfg);
        let b = run_campaign(&cfg);
        assert_eq!(a, b);
        assert!(a.all_passed());
        // serial recomputation of a single row
        let row = run_job(&cfg, 5, Job::Sampled);
        assert_eq!(row, a.trials[5]);
    }

    #[test]
    fn aggregate_is_recomputable() {
        let r = run_campaign(&CampaignConfig::new(Suite::Shift, 20, 3));
        assert_eq!(Aggregate::from_records(&r.trials), r.aggregate);
        assert_eq!(r.aggregate.success_rate, 1.0);
    }

    #[test]
    fn small_grids() {
        let mut cfg = CampaignConfig::new(Suite::Nullspace, 2, 1);
        cfg.mmax = 4;
        cfg.nmax = 4;
        let r = run_campaign(&cfg);
        // 9 cells x 2 families x 2 draws + 2 square cells x 2 M2 draws
        assert_eq!(r.trials.len(), 9 * 4 + 4);
        assert!(r.all_passed());
        for suite in [Suite::Kernel, Suite::Structure] {
            cfg.suite = suite;
            assert!(run_campaign(&cfg).all_passed());
        }
    }

    #[test]
    fn timing_is_opt_in() {
        let mut cfg = CampaignConfig::new(Suite::Quotient, 3, 9);
        assert!(run_campaign(&cfg).trials.iter().all(|r| r.wall_time_us.is_none()));
        cfg.timing = true;
        assert!(run_campaign(&cfg).trials.iter().all(|r| r.wall_time_us.is_some()));
    }
}
