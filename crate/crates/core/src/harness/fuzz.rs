//! Random-state campaigns checking theorem satisfaction and bound orderings.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::profile::ConcurrenceProfile;
use crate::bounds::{self, BoundFamily, BoundReport, BoundSpec, KInterval, PairProfile, Relation};
use crate::entanglement::{
    self, ConvexRoofConfig, Family, MeasureParams, StateRef, Variant, RENYI_ASSIST_MAX, RENYI_MIN, TSALLIS_MAX,
    TSALLIS_MIN,
};
use crate::states::{self, build_gwv, GwvSpec, Partition};
use crate::{Error, Result, C64};

/// Largest slack below zero still counted as satisfied.
pub const VIOLATION_TOL: f64 = 1e-9;
/// Tolerance of the bound-ordering checks.
pub const ORDERING_TOL: f64 = 1e-12;
/// Allowed gap between the analytic measure and the numerical roof.
pub const ORACLE_TOL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub n_states: usize,
    pub seed: u64,
    pub n_choices: Vec<usize>,
    pub d_choices: Vec<usize>,
    /// Measure parameters drawn per (family, variant) and state.
    pub params_per_state: usize,
    /// Also compare the analytic standard measure with the numerical roof on
    /// one pair reduction per state.
    pub oracle: bool,
    pub roof: ConvexRoofConfig,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            n_states: 1000,
            seed: 0,
            n_choices: vec![3, 4, 5],
            d_choices: vec![2, 3],
            params_per_state: 2,
            oracle: false,
            roof: ConvexRoofConfig {
                restarts: 4,
                ..ConvexRoofConfig::default()
            },
        }
    }
}

impl FuzzConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_choices.is_empty() || self.d_choices.is_empty() {
            return Err(Error::Argument("n and d choice lists must be nonempty".into()));
        }
        if self.n_choices.iter().any(|&n| !(3..=8).contains(&n)) {
            return Err(Error::Argument(format!(
                "n choices {:?} must lie in 3..=8",
                self.n_choices
            )));
        }
        if self.d_choices.iter().any(|&d| !(2..=4).contains(&d)) {
            return Err(Error::Argument(format!(
                "d choices {:?} must lie in 2..=4",
                self.d_choices
            )));
        }
        self.roof.validate()
    }
}

/// One random draw: state and partition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzCase {
    pub index: usize,
    pub spec: GwvSpec,
    pub partition: Partition,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    /// Rerun with the same seed and `sample_case(seed, index)` to reproduce.
    pub seed: u64,
    pub index: usize,
    pub n: usize,
    pub d: usize,
    pub groups: Vec<Vec<usize>>,
    pub measure: MeasureParams,
    pub check: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FuzzSummary {
    pub seed: u64,
    pub states: usize,
    pub profiles: usize,
    /// Bound evaluations whose preconditions held (each checked for satisfaction).
    pub checked: usize,
    /// Bound evaluations skipped because preconditions failed.
    pub skipped: usize,
    pub ordering_checks: usize,
    /// Smallest oriented margin among checked bounds.
    pub worst_margin: f64,
    pub oracle_checks: usize,
    pub oracle_max_error: f64,
    pub violations: Vec<Violation>,
}

impl FuzzSummary {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

impl fmt::Display for FuzzSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed            {}", self.seed)?;
        writeln!(f, "states          {}", self.states)?;
        writeln!(f, "profiles        {}", self.profiles)?;
        writeln!(f, "bounds checked  {}", self.checked)?;
        writeln!(f, "bounds skipped  {} (preconditions failed)", self.skipped)?;
        writeln!(f, "ordering checks {}", self.ordering_checks)?;
        writeln!(f, "worst margin    {:.3e}", self.worst_margin)?;
        if self.oracle_checks > 0 {
            writeln!(
                f,
                "oracle checks   {} (max error {:.3e})",
                self.oracle_checks, self.oracle_max_error
            )?;
        }
        writeln!(f, "violations      {}", self.violations.len())?;
        for v in self.violations.iter().take(20) {
            writeln!(
                f,
                "  state {} (seed {}, n={}, d={}, groups {:?}, {:?} {:?} {}): {} {}",
                v.index,
                v.seed,
                v.n,
                v.d,
                v.groups,
                v.measure.family,
                v.measure.variant,
                v.measure.parameter,
                v.check,
                v.detail
            )?;
        }
        Ok(())
    }
}

fn case_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

fn random_partition(rng: &mut ChaCha8Rng, n: usize) -> Result<Partition> {
    let m = rng.random_range(3..=n);
    let mut subsystems: Vec<usize> = (0..n).collect();
    subsystems.shuffle(rng);
    subsystems.truncate(m);
    let groups_count = rng.random_range(3..=m);
    let mut groups: Vec<Vec<usize>> = subsystems[..groups_count].iter().map(|&s| vec![s]).collect();
    for &s in &subsystems[groups_count..] {
        let g = rng.random_range(0..groups_count);
        groups[g].push(s);
    }
    for g in &mut groups {
        g.sort_unstable();
    }
    Partition::new(groups, None)
}

/// Deterministic draw number `index` of a campaign with `seed`.
pub fn sample_case(cfg: &FuzzConfig, index: usize) -> Result<FuzzCase> {
    let mut rng = case_rng(cfg.seed, index);
    let n = cfg.n_choices[rng.random_range(0..cfg.n_choices.len())];
    let d = cfg.d_choices[rng.random_range(0..cfg.d_choices.len())];
    let mut coeffs: Vec<Vec<C64>> = (0..n)
        .map(|_| (0..d - 1).map(|_| gaussian(&mut rng)).collect())
        .collect();
    let norm = coeffs.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    coeffs.iter_mut().flatten().for_each(|z| *z /= norm);
    let p = rng.random::<f64>();
    let spec = GwvSpec::new(n, d, coeffs, p)?;
    let partition = random_partition(&mut rng, n)?;
    Ok(FuzzCase { index, spec, partition })
}

fn draw_parameter(rng: &mut ChaCha8Rng, family: Family, variant: Variant) -> f64 {
    loop {
        let x = match (family, variant) {
            (Family::Tsallis, Variant::Standard) => rng.random_range(TSALLIS_MIN..=TSALLIS_MAX),
            (Family::Tsallis, Variant::Assistance) => {
                let left = 2.0 - TSALLIS_MIN;
                let right = TSALLIS_MAX - 3.0;
                let u = rng.random_range(0.0..left + right);
                if u < left {
                    TSALLIS_MIN + u
                } else {
                    3.0 + (u - left)
                }
            }
            (Family::Renyi, Variant::Standard) => rng.random_range(RENYI_MIN..=10.0),
            (Family::Renyi, Variant::Assistance) => rng.random_range(RENYI_MIN..=RENYI_ASSIST_MAX),
        };
        if x != 1.0 {
            return x;
        }
    }
}

/// Draws `k` uniformly from the feasible part of `[floor, ceil]`.
fn draw_k(rng: &mut ChaCha8Rng, iv: &KInterval, floor: f64, ceil: f64) -> Option<f64> {
    let lo = iv.lo.max(floor);
    let hi = iv.hi.min(ceil);
    if lo > hi {
        return None;
    }
    if lo == hi {
        return Some(lo);
    }
    Some(rng.random_range(lo..=hi))
}

#[derive(Default)]
struct Outcome {
    profiles: usize,
    checked: usize,
    skipped: usize,
    ordering_checks: usize,
    worst_margin: f64,
    oracle_checks: usize,
    oracle_max_error: f64,
    violations: Vec<Violation>,
}

struct CaseContext<'a> {
    cfg: &'a FuzzConfig,
    case: &'a FuzzCase,
}

impl CaseContext<'_> {
    fn violation(&self, measure: MeasureParams, check: String, detail: String) -> Violation {
        Violation {
            seed: self.cfg.seed,
            index: self.case.index,
            n: self.case.spec.n,
            d: self.case.spec.d,
            groups: self.case.partition.groups().to_vec(),
            measure,
            check,
            detail,
        }
    }

    fn record(&self, out: &mut Outcome, measure: MeasureParams, report: &BoundReport) {
        if !report.preconditions_ok {
            out.skipped += 1;
            return;
        }
        out.checked += 1;
        let margin = report.margin();
        out.worst_margin = out.worst_margin.min(margin);
        if margin < -VIOLATION_TOL {
            out.violations.push(self.violation(
                measure,
                format!("{} satisfaction", report.family),
                format!(
                    "k={} exponent={} t={:?} lhs={} bound={}",
                    report.k, report.exponent, report.t, report.lhs, report.bound
                ),
            ));
        }
    }

    fn ordering(&self, out: &mut Outcome, measure: MeasureParams, chain: &[&BoundReport]) {
        out.ordering_checks += 1;
        for w in chain.windows(2) {
            let (tighter, looser) = (w[0], w[1]);
            let bad = match tighter.relation {
                Relation::Monogamy => tighter.bound < looser.bound - ORDERING_TOL,
                Relation::Polygamy => tighter.bound > looser.bound + ORDERING_TOL,
            };
            if bad {
                out.violations.push(self.violation(
                    measure,
                    format!("ordering {} vs {}", tighter.family, looser.family),
                    format!(
                        "k={} exponent={}: {} vs {}",
                        tighter.k, tighter.exponent, tighter.bound, looser.bound
                    ),
                ));
            }
        }
    }
}

fn check_profile(
    ctx: &CaseContext<'_>,
    rng: &mut ChaCha8Rng,
    profile: &PairProfile,
    measure: MeasureParams,
    out: &mut Outcome,
) -> Result<()> {
    let relation = profile.relation();
    let r = profile.len();
    let exponent = match relation {
        Relation::Monogamy => rng.random_range(2.0..=6.0),
        Relation::Polygamy => rng.random_range(0.01..=1.0),
    };
    let baseline = bounds::eval_baseline(profile, exponent, relation)?;
    ctx.record(out, measure, &baseline);

    let hamming_iv = bounds::feasible_k(profile, BoundFamily::Hamming, None, None)?;
    let jpower_iv = bounds::feasible_k(profile, BoundFamily::JPower, None, None)?;
    for (family, iv) in [(BoundFamily::Hamming, hamming_iv), (BoundFamily::JPower, jpower_iv)] {
        if let Some(k) = draw_k(rng, &iv, 1e-6, 1.0) {
            let rep = bounds::evaluate(profile, &BoundSpec::new(family, k, exponent))?;
            ctx.record(out, measure, &rep);
        }
    }

    // the three families at a common k: jpower tighter than hamming tighter than baseline
    let common = hamming_iv.lo.max(jpower_iv.lo).max(1e-6);
    if common <= 1.0 {
        let k = rng.random_range(common..=1.0);
        let h = bounds::eval_hamming(profile, &BoundSpec::new(BoundFamily::Hamming, k, exponent))?;
        let j = bounds::eval_jpower(profile, &BoundSpec::new(BoundFamily::JPower, k, exponent))?;
        if h.preconditions_ok && j.preconditions_ok {
            ctx.ordering(out, measure, &[&j, &h, &baseline]);
        }
    }

    let t = rng.random_range(0..=r - 2);
    let iv = bounds::feasible_k(profile, BoundFamily::TSplit, None, Some(t))?;
    if let Some(k) = draw_k(rng, &iv, 1e-6, 1.0) {
        let rep = bounds::eval_tsplit(profile, &BoundSpec::new(BoundFamily::TSplit, k, exponent).with_t(t))?;
        ctx.record(out, measure, &rep);
    }

    if profile.family == Family::Tsallis && relation == Relation::Monogamy {
        let mu = rng.random_range(2.0..=5.0);
        let gamma = rng.random_range(0.0..=mu);
        let t4 = bounds::eval_baseline_general_t4(profile, gamma, mu, t)?;
        ctx.record(out, measure, &t4);
        let iv = bounds::feasible_k(profile, BoundFamily::Lemma2Gamma, Some(mu), Some(t))?;
        if let Some(k) = draw_k(rng, &iv, 1.0, 1e6) {
            let spec = BoundSpec::new(BoundFamily::Lemma2Gamma, k, gamma)
                .with_mu_ref(mu)
                .with_t(t);
            let rep = bounds::eval_lemma2_gamma(profile, &spec)?;
            ctx.record(out, measure, &rep);
            if rep.preconditions_ok && t4.preconditions_ok {
                ctx.ordering(out, measure, &[&rep, &t4]);
            }
        }
    }
    Ok(())
}

fn oracle_check(
    ctx: &CaseContext<'_>,
    state: &states::StateVector,
    params: MeasureParams,
    out: &mut Outcome,
) -> Result<()> {
    let part = &ctx.case.partition;
    let pair = Partition::new(vec![part.anchor().to_vec(), part.parts()[0].clone()], None)?;
    let rho = states::reduce_to_partition(state, &pair)?;
    let analytic = entanglement::measure(StateRef::Mixed(&rho), &[0], &params, &ctx.cfg.roof)?;
    let roof = entanglement::convex_roof_measure(&rho, &[0], &params, &ctx.cfg.roof)?;
    let err = (roof.value - analytic).abs();
    out.oracle_checks += 1;
    out.oracle_max_error = out.oracle_max_error.max(err);
    if err > ORACLE_TOL {
        out.violations.push(ctx.violation(
            params,
            "oracle".into(),
            format!("roof {} vs analytic {analytic}", roof.value),
        ));
    }
    Ok(())
}

fn run_case(cfg: &FuzzConfig, index: usize) -> Result<Outcome> {
    let case = sample_case(cfg, index)?;
    let state = build_gwv(&case.spec)?;
    let ctx = CaseContext { cfg, case: &case };
    let concurrences = ConcurrenceProfile::build(&state, &case.partition, &cfg.roof)?;
    // a second stream keeps case sampling independent of the checks drawn
    let mut rng = case_rng(cfg.seed ^ 0x9e37_79b9_7f4a_7c15, index);
    let mut out = Outcome::default();
    for family in [Family::Tsallis, Family::Renyi] {
        for variant in [Variant::Standard, Variant::Assistance] {
            for _ in 0..cfg.params_per_state {
                let x = draw_parameter(&mut rng, family, variant);
                let measure = MeasureParams {
                    family,
                    parameter: x,
                    variant,
                };
                let profile = concurrences.to_pair_profile(&measure)?;
                out.profiles += 1;
                check_profile(&ctx, &mut rng, &profile, measure, &mut out)?;
            }
        }
    }
    if cfg.oracle {
        let q = draw_parameter(&mut rng, Family::Tsallis, Variant::Standard);
        oracle_check(&ctx, &state, MeasureParams::tsallis(q, Variant::Standard), &mut out)?;
        let a = draw_parameter(&mut rng, Family::Renyi, Variant::Standard);
        oracle_check(&ctx, &state, MeasureParams::renyi(a, Variant::Standard), &mut out)?;
    }
    Ok(out)
}

/// Runs a campaign. States are processed in parallel; the summary depends
/// only on the configuration.
pub fn run_fuzz(cfg: &FuzzConfig) -> Result<FuzzSummary> {
    cfg.validate()?;
    let outcomes: Vec<Outcome> = (0..cfg.n_states)
        .into_par_iter()
        .map(|i| run_case(cfg, i).map_err(|e| e.context(format!("fuzz state {i} (seed {})", cfg.seed))))
        .collect::<Result<_>>()?;
    let mut summary = FuzzSummary {
        seed: cfg.seed,
        states: cfg.n_states,
        worst_margin: f64::INFINITY,
        ..FuzzSummary::default()
    };
    for o in outcomes {
        summary.profiles += o.profiles;
        summary.checked += o.checked;
        summary.skipped += o.skipped;
        summary.ordering_checks += o.ordering_checks;
        summary.worst_margin = summary.worst_margin.min(o.worst_margin);
        summary.oracle_checks += o.oracle_checks;
        summary.oracle_max_error = summary.oracle_max_error.max(o.oracle_max_error);
        summary.violations.extend(o.violations);
    }
    Ok(summary)
}
