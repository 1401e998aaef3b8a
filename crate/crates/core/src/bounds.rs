//! Monogamy and polygamy bound families over a profile of pairwise
//! entanglement values.
//!
//! A [`PairProfile`] holds `x_j = E(ρ_{PP_j})` for `j = 0..R-1` and the
//! entanglement of the full cut `P | P_0 … P_{R-1}`. Standard (roof) measures
//! give monogamy relations `total^e ≥ bound`; assistance measures give
//! polygamy relations `total^e ≤ bound`.
//!
//! Bounds are evaluated even when their preconditions fail; the report
//! carries per-condition verdicts so figure sweeps can plot whole curves.

use serde::{Deserialize, Serialize};

use crate::entanglement::{Family, Variant};
use crate::{Error, Result};

/// Tolerance for conditions of the form `k·a ≥ b`.
pub const CONDITION_TOL: f64 = 1e-12;
/// Tolerance for deciding whether a relation holds.
pub const SATISFACTION_TOL: f64 = 1e-9;
/// Tolerance for [`lemma1_holds`].
pub const LEMMA1_TOL: f64 = 1e-12;

pub fn hamming_weight(j: u64) -> u32 {
    j.count_ones()
}

/// `((1+k)^t - 1) / k^t`.
pub fn coeff_k(k: f64, t: f64) -> f64 {
    if k == 1.0 {
        return 2f64.powf(t) - 1.0;
    }
    ((1.0 + k).powf(t) - 1.0) / k.powf(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Lemma1Branch {
    /// `(1+x)^t ≥ 1 + K x^t` for `0 ≤ x ≤ k ≤ 1`, `t ≥ 1`.
    A,
    /// `(1+x)^t ≥ 1 + K x^t` for `x ≥ k ≥ 1`, `0 ≤ t ≤ 1`.
    B,
    /// `(1+x)^t ≤ 1 + K x^t` for `0 ≤ x ≤ k ≤ 1`, `0 ≤ t ≤ 1`.
    C,
}

/// Checks one branch of the scalar inequality behind every `K` coefficient.
pub fn lemma1_holds(branch: Lemma1Branch, x: f64, k: f64, t: f64) -> Result<bool> {
    let in_domain = match branch {
        Lemma1Branch::A => 0.0 <= x && x <= k && k <= 1.0 && k > 0.0 && t >= 1.0,
        Lemma1Branch::B => x >= k && k >= 1.0 && (0.0..=1.0).contains(&t),
        Lemma1Branch::C => 0.0 <= x && x <= k && k <= 1.0 && k > 0.0 && (0.0..=1.0).contains(&t),
    };
    if !in_domain {
        return Err(Error::Domain {
            value: x,
            domain: format!("lemma 1 branch {branch:?} with k = {k}, t = {t}"),
        });
    }
    let lhs = (1.0 + x).powf(t);
    let rhs = 1.0 + coeff_k(k, t) * x.powf(t);
    let scale = lhs.abs().max(1.0);
    Ok(match branch {
        Lemma1Branch::A | Lemma1Branch::B => lhs >= rhs - LEMMA1_TOL * scale,
        Lemma1Branch::C => lhs <= rhs + LEMMA1_TOL * scale,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// `total^e ≥ bound`
    Monogamy,
    /// `total^e ≤ bound`
    Polygamy,
}

impl Relation {
    /// Exponent applied to the profile values inside preconditions.
    fn condition_exponent(self) -> f64 {
        match self {
            Relation::Monogamy => 2.0,
            Relation::Polygamy => 1.0,
        }
    }
}

/// Pairwise entanglement values of one partition `{P, P_0, …, P_{R-1}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairProfile {
    pub values: Vec<f64>,
    pub total: f64,
    pub family: Family,
    pub variant: Variant,
    pub q_or_alpha: f64,
    /// `residuals[i] = E(ρ_{P|P_{i+1} … P_{R-1}})` for `i = 0..R-2`; needed
    /// by the split-index families.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residuals: Option<Vec<f64>>,
}

impl PairProfile {
    pub fn new(values: Vec<f64>, total: f64, family: Family, variant: Variant, q_or_alpha: f64) -> Result<Self> {
        let p = PairProfile {
            values,
            total,
            family,
            variant,
            q_or_alpha,
            residuals: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_residuals(mut self, residuals: Vec<f64>) -> Result<Self> {
        self.residuals = Some(residuals);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::Validation("profile has no pair values".into()));
        }
        let bad = |v: &f64| !(v.is_finite() && *v >= 0.0);
        if self.values.iter().any(bad) || bad(&self.total) {
            return Err(Error::Validation(format!(
                "profile entries must be finite and >= 0: {:?}, total {}",
                self.values, self.total
            )));
        }
        if let Some(res) = &self.residuals {
            if res.len() + 1 != self.values.len() {
                return Err(Error::Validation(format!(
                    "expected {} residual totals, got {}",
                    self.values.len() - 1,
                    res.len()
                )));
            }
            if res.iter().any(bad) {
                return Err(Error::Validation(format!("residual totals must be >= 0: {res:?}")));
            }
        }
        Ok(())
    }

    /// Number of pairs `R`.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn relation(&self) -> Relation {
        match self.variant {
            Variant::Standard => Relation::Monogamy,
            Variant::Assistance => Relation::Polygamy,
        }
    }

    /// `E(ρ_{P|P_{i+1} … P_{R-1}})`; the last one is just `x_{R-1}`.
    pub fn residual(&self, i: usize) -> Result<f64> {
        let r = self.len();
        if i + 2 > r {
            return Err(Error::Argument(format!("residual index {i} out of range for R = {r}")));
        }
        match &self.residuals {
            Some(res) => Ok(res[i]),
            None if i + 2 == r => Ok(self.values[r - 1]),
            None => Err(Error::Argument(format!(
                "profile lacks residual totals needed for split index i = {i}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundFamily {
    #[serde(rename = "baseline-T3")]
    BaselineT3,
    #[serde(rename = "baseline-T4")]
    BaselineT4,
    #[serde(rename = "baseline-T5")]
    BaselineT5,
    #[serde(rename = "baseline-E3")]
    BaselineE3,
    #[serde(rename = "baseline-E5")]
    BaselineE5,
    #[serde(rename = "hamming")]
    Hamming,
    #[serde(rename = "jpower")]
    JPower,
    #[serde(rename = "tsplit")]
    TSplit,
    #[serde(rename = "lemma2-gamma")]
    Lemma2Gamma,
}

impl BoundFamily {
    pub const ALL: [BoundFamily; 9] = [
        BoundFamily::BaselineT3,
        BoundFamily::BaselineT4,
        BoundFamily::BaselineT5,
        BoundFamily::BaselineE3,
        BoundFamily::BaselineE5,
        BoundFamily::Hamming,
        BoundFamily::JPower,
        BoundFamily::TSplit,
        BoundFamily::Lemma2Gamma,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            BoundFamily::BaselineT3 => "baseline-T3",
            BoundFamily::BaselineT4 => "baseline-T4",
            BoundFamily::BaselineT5 => "baseline-T5",
            BoundFamily::BaselineE3 => "baseline-E3",
            BoundFamily::BaselineE5 => "baseline-E5",
            BoundFamily::Hamming => "hamming",
            BoundFamily::JPower => "jpower",
            BoundFamily::TSplit => "tsplit",
            BoundFamily::Lemma2Gamma => "lemma2-gamma",
        }
    }

    pub fn from_tag(tag: &str) -> Result<Self> {
        BoundFamily::ALL
            .into_iter()
            .find(|f| f.tag() == tag)
            .ok_or_else(|| Error::Argument(format!("unknown bound family '{tag}'")))
    }

    /// Measure family and variant a baseline is stated for.
    fn baseline_target(self) -> Option<(Family, Variant)> {
        match self {
            BoundFamily::BaselineT3 | BoundFamily::BaselineT4 => Some((Family::Tsallis, Variant::Standard)),
            BoundFamily::BaselineT5 => Some((Family::Tsallis, Variant::Assistance)),
            BoundFamily::BaselineE3 => Some((Family::Renyi, Variant::Standard)),
            BoundFamily::BaselineE5 => Some((Family::Renyi, Variant::Assistance)),
            _ => None,
        }
    }
}

impl std::fmt::Display for BoundFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

/// One bound to evaluate: the family, its `k`, the outer exponent (`β`, `γ`
/// or `μ`), the reference `μ` of the `γ`-families and an optional split index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundSpec {
    #[serde(rename = "family_tag")]
    pub family: BoundFamily,
    #[serde(default = "one")]
    pub k: f64,
    pub exponent: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_ref: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
}

fn one() -> f64 {
    1.0
}

impl BoundSpec {
    pub fn new(family: BoundFamily, k: f64, exponent: f64) -> Self {
        BoundSpec {
            family,
            k,
            exponent,
            mu_ref: None,
            t: None,
        }
    }

    pub fn with_mu_ref(mut self, mu_ref: f64) -> Self {
        self.mu_ref = Some(mu_ref);
        self
    }

    pub fn with_t(mut self, t: usize) -> Self {
        self.t = Some(t);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Precondition {
    pub name: String,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub family: BoundFamily,
    pub relation: Relation,
    pub q_or_alpha: f64,
    pub exponent: f64,
    pub k: f64,
    pub t: Option<usize>,
    pub lhs: f64,
    pub bound: f64,
    /// `lhs - bound`.
    pub slack: f64,
    pub preconditions: Vec<Precondition>,
    pub preconditions_ok: bool,
    pub satisfied: bool,
}

impl BoundReport {
    /// Slack oriented so that positive means "relation holds with room".
    pub fn margin(&self) -> f64 {
        match self.relation {
            Relation::Monogamy => self.slack,
            Relation::Polygamy => -self.slack,
        }
    }
}

fn report(
    profile: &PairProfile,
    spec: &BoundSpec,
    relation: Relation,
    bound: f64,
    preconditions: Vec<Precondition>,
) -> BoundReport {
    let lhs = profile.total.powf(spec.exponent);
    let slack = lhs - bound;
    let satisfied = match relation {
        Relation::Monogamy => slack >= -SATISFACTION_TOL,
        Relation::Polygamy => slack <= SATISFACTION_TOL,
    };
    BoundReport {
        family: spec.family,
        relation,
        q_or_alpha: profile.q_or_alpha,
        exponent: spec.exponent,
        k: spec.k,
        t: spec.t,
        lhs,
        bound,
        slack,
        preconditions_ok: preconditions.iter().all(|p| p.ok),
        preconditions,
        satisfied,
    }
}

/// `k·a ≥ b` up to [`CONDITION_TOL`].
fn at_least(ka: f64, b: f64) -> bool {
    ka >= b - CONDITION_TOL
}

fn check_exponent(relation: Relation, e: f64) -> Result<()> {
    match relation {
        Relation::Monogamy if !(e >= 2.0 && e.is_finite()) => Err(Error::range("beta", e, "[2, ∞)")),
        Relation::Polygamy if !(e > 0.0 && e <= 1.0) => Err(Error::range("mu", e, "(0, 1]")),
        _ => Ok(()),
    }
}

fn check_small_k(k: f64) -> Result<()> {
    if !(k > 0.0 && k <= 1.0) {
        return Err(Error::range("k", k, "(0, 1]"));
    }
    Ok(())
}

fn check_gamma(gamma: f64, mu: f64) -> Result<()> {
    if !(mu >= 2.0 && mu.is_finite()) {
        return Err(Error::range("mu", mu, "[2, ∞)"));
    }
    if !(0.0..=mu).contains(&gamma) {
        return Err(Error::range("gamma", gamma, format!("[0, {mu}]")));
    }
    Ok(())
}

fn check_target(profile: &PairProfile, family: BoundFamily) -> Result<()> {
    if let Some((fam, var)) = family.baseline_target() {
        if profile.family != fam || profile.variant != var {
            return Err(Error::Argument(format!(
                "{family} applies to {fam:?}/{var:?} profiles, got {:?}/{:?}",
                profile.family, profile.variant
            )));
        }
    }
    Ok(())
}

fn pow_sum(xs: &[f64], e: f64) -> f64 {
    xs.iter().map(|x| x.powf(e)).sum()
}

/// `Σ_j x_j^e`, the plain monogamy/polygamy relation.
pub fn eval_baseline(profile: &PairProfile, exponent: f64, relation: Relation) -> Result<BoundReport> {
    profile.validate()?;
    check_exponent(relation, exponent)?;
    let family = match (profile.family, relation) {
        (Family::Tsallis, Relation::Monogamy) => BoundFamily::BaselineT3,
        (Family::Tsallis, Relation::Polygamy) => BoundFamily::BaselineT5,
        (Family::Renyi, Relation::Monogamy) => BoundFamily::BaselineE3,
        (Family::Renyi, Relation::Polygamy) => BoundFamily::BaselineE5,
    };
    let spec = BoundSpec::new(family, 1.0, exponent);
    let bound = pow_sum(&profile.values, exponent);
    Ok(report(profile, &spec, relation, bound, Vec::new()))
}

/// The split-index sum `Σ_{j≤t} K^j x_j^e + K^{t+2} Σ_{t<j≤R-2} x_j^e + K^{t+1} x_{R-1}^e`.
fn split_sum(xs: &[f64], kc: f64, t: usize, e: f64) -> f64 {
    let r = xs.len();
    let mut bound = 0.0;
    for (j, x) in xs.iter().enumerate() {
        let power = if j <= t {
            j
        } else if j + 1 < r {
            t + 2
        } else {
            t + 1
        };
        bound += kc.powi(power as i32) * x.powf(e);
    }
    bound
}

fn split_index(profile: &PairProfile, t: Option<usize>) -> Result<usize> {
    let r = profile.len();
    if r < 2 {
        return Err(Error::Argument(format!(
            "split-index bounds need R >= 2 pairs, got {r}"
        )));
    }
    let t = t.unwrap_or(0);
    if t + 2 > r {
        return Err(Error::Argument(format!(
            "split index t = {t} must satisfy t <= R-2 = {}",
            r - 2
        )));
    }
    Ok(t)
}

/// The two-sided ordering conditions shared by the split-index families:
/// `lower(x_i, res_i)` for `i ≤ t` and `upper(x_j, res_j)` for `t < j ≤ R-2`.
fn split_conditions(
    profile: &PairProfile,
    t: usize,
    head: impl Fn(f64, f64) -> bool,
    tail: impl Fn(f64, f64) -> bool,
) -> Result<Vec<Precondition>> {
    let r = profile.len();
    let mut out = Vec::new();
    for i in 0..r - 1 {
        let x = profile.values[i];
        let res = profile.residual(i)?;
        let (ok, side) = if i <= t {
            (head(x, res), "head")
        } else {
            (tail(x, res), "tail")
        };
        out.push(Precondition {
            name: format!("{side} i={i}"),
            ok,
        });
    }
    Ok(out)
}

/// General monogamy relation with coefficients `2^{γ/μ} - 1` (the `k = 1`
/// case of the `γ` family).
pub fn eval_baseline_general_t4(profile: &PairProfile, gamma: f64, mu: f64, t: usize) -> Result<BoundReport> {
    profile.validate()?;
    check_gamma(gamma, mu)?;
    let t = split_index(profile, Some(t))?;
    let spec = BoundSpec::new(BoundFamily::BaselineT4, 1.0, gamma)
        .with_mu_ref(mu)
        .with_t(t);
    let kc = 2f64.powf(gamma / mu) - 1.0;
    let bound = split_sum(&profile.values, kc, t, gamma);
    let pre = split_conditions(
        profile,
        t,
        |x, res| x <= res + CONDITION_TOL,
        |x, res| x >= res - CONDITION_TOL,
    )?;
    Ok(report(profile, &spec, Relation::Monogamy, bound, pre))
}

fn k_coefficient(relation: Relation, spec: &BoundSpec) -> f64 {
    match relation {
        Relation::Monogamy => coeff_k(spec.k, spec.exponent / 2.0),
        Relation::Polygamy => coeff_k(spec.k, spec.exponent),
    }
}

/// `Σ_j K^{ω_H(j)} x_j^e` under `k x_j^{e₀} ≥ x_{j+1}^{e₀}`.
pub fn eval_hamming(profile: &PairProfile, spec: &BoundSpec) -> Result<BoundReport> {
    profile.validate()?;
    let relation = profile.relation();
    check_exponent(relation, spec.exponent)?;
    check_small_k(spec.k)?;
    let kc = k_coefficient(relation, spec);
    let bound = profile
        .values
        .iter()
        .enumerate()
        .map(|(j, x)| kc.powi(hamming_weight(j as u64) as i32) * x.powf(spec.exponent))
        .sum();
    let e0 = relation.condition_exponent();
    let pre = profile
        .values
        .windows(2)
        .enumerate()
        .map(|(j, w)| Precondition {
            name: format!("ordered j={j}"),
            ok: at_least(spec.k * w[0].powf(e0), w[1].powf(e0)),
        })
        .collect();
    Ok(report(profile, spec, relation, bound, pre))
}

/// `Σ_j K^j x_j^e` under `k x_l^{e₀} ≥ Σ_{j>l} x_j^{e₀}`.
pub fn eval_jpower(profile: &PairProfile, spec: &BoundSpec) -> Result<BoundReport> {
    profile.validate()?;
    let relation = profile.relation();
    check_exponent(relation, spec.exponent)?;
    check_small_k(spec.k)?;
    let kc = k_coefficient(relation, spec);
    let bound = profile
        .values
        .iter()
        .enumerate()
        .map(|(j, x)| kc.powi(j as i32) * x.powf(spec.exponent))
        .sum();
    let e0 = relation.condition_exponent();
    let r = profile.len();
    let pre = (0..r.saturating_sub(1))
        .map(|l| Precondition {
            name: format!("tail l={l}"),
            ok: at_least(
                spec.k * profile.values[l].powf(e0),
                pow_sum(&profile.values[l + 1..], e0),
            ),
        })
        .collect();
    Ok(report(profile, spec, relation, bound, pre))
}

/// Split-index bound: `k x_i^{e₀} ≥ res_i^{e₀}` for `i ≤ t` and
/// `x_j^{e₀} ≤ k res_j^{e₀}` for `t < j ≤ R-2`.
pub fn eval_tsplit(profile: &PairProfile, spec: &BoundSpec) -> Result<BoundReport> {
    profile.validate()?;
    let relation = profile.relation();
    check_exponent(relation, spec.exponent)?;
    check_small_k(spec.k)?;
    let t = split_index(profile, spec.t)?;
    let kc = k_coefficient(relation, spec);
    let bound = split_sum(&profile.values, kc, t, spec.exponent);
    let e0 = relation.condition_exponent();
    let k = spec.k;
    let pre = split_conditions(
        profile,
        t,
        |x, res| at_least(k * x.powf(e0), res.powf(e0)),
        |x, res| at_least(k * res.powf(e0), x.powf(e0)),
    )?;
    let spec = BoundSpec {
        t: Some(t),
        ..spec.clone()
    };
    Ok(report(profile, &spec, relation, bound, pre))
}

/// `γ`-family with `k ≥ 1`: `x₀^γ + K_γ x₁^γ` for two pairs under
/// `x₁^μ ≥ k x₀^μ`, and the split-index form for more pairs.
pub fn eval_lemma2_gamma(profile: &PairProfile, spec: &BoundSpec) -> Result<BoundReport> {
    profile.validate()?;
    let mu = spec
        .mu_ref
        .ok_or_else(|| Error::Argument("lemma2-gamma needs mu_ref".into()))?;
    check_gamma(spec.exponent, mu)?;
    if !(spec.k >= 1.0 && spec.k.is_finite()) {
        return Err(Error::range("k", spec.k, "[1, ∞)"));
    }
    let t = split_index(profile, spec.t)?;
    let kc = coeff_k(spec.k, spec.exponent / mu);
    let bound = split_sum(&profile.values, kc, t, spec.exponent);
    let k = spec.k;
    let pre = split_conditions(
        profile,
        t,
        |x, res| at_least(res.powf(mu), k * x.powf(mu)),
        |x, res| at_least(x.powf(mu), k * res.powf(mu)),
    )?;
    let spec = BoundSpec {
        t: Some(t),
        ..spec.clone()
    };
    Ok(report(profile, &spec, Relation::Monogamy, bound, pre))
}

/// Evaluates any bound family.
pub fn evaluate(profile: &PairProfile, spec: &BoundSpec) -> Result<BoundReport> {
    check_target(profile, spec.family)?;
    match spec.family {
        BoundFamily::BaselineT3 | BoundFamily::BaselineE3 => eval_baseline(profile, spec.exponent, Relation::Monogamy),
        BoundFamily::BaselineT5 | BoundFamily::BaselineE5 => eval_baseline(profile, spec.exponent, Relation::Polygamy),
        BoundFamily::BaselineT4 => {
            let mu = spec
                .mu_ref
                .ok_or_else(|| Error::Argument("baseline-T4 needs mu_ref".into()))?;
            eval_baseline_general_t4(profile, spec.exponent, mu, spec.t.unwrap_or(0))
        }
        BoundFamily::Hamming => eval_hamming(profile, spec),
        BoundFamily::JPower => eval_jpower(profile, spec),
        BoundFamily::TSplit => eval_tsplit(profile, spec),
        BoundFamily::Lemma2Gamma => eval_lemma2_gamma(profile, spec),
    }
}

/// Sorts reports by oriented margin, tightest first.
pub fn rank_by_tightness(reports: &mut [BoundReport]) {
    reports.sort_by(|a, b| a.margin().total_cmp(&b.margin()));
}

/// Range of `k` for which a family's preconditions hold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KInterval {
    pub lo: f64,
    pub hi: f64,
    /// A ratio had a zero denominator with a nonzero numerator.
    pub degenerate: bool,
}

impl KInterval {
    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn contains(&self, k: f64) -> bool {
        self.lo <= k && k <= self.hi
    }
}

/// Accumulates `k ≥ (num/den)^e` and `k ≤ (num/den)^e` constraints.
struct Constraints {
    lo: f64,
    hi: f64,
    degenerate: bool,
}

impl Constraints {
    fn new(lo: f64, hi: f64) -> Self {
        Constraints {
            lo,
            hi,
            degenerate: false,
        }
    }

    fn ratio(&mut self, num: f64, den: f64, e: f64) -> Option<f64> {
        if den == 0.0 {
            if num != 0.0 {
                self.degenerate = true;
                return Some(f64::INFINITY);
            }
            return None;
        }
        Some((num / den).powf(e))
    }

    fn at_least(&mut self, num: f64, den: f64, e: f64) {
        if let Some(v) = self.ratio(num, den, e) {
            self.lo = self.lo.max(v);
        }
    }

    fn at_most(&mut self, num: f64, den: f64, e: f64) {
        if let Some(v) = self.ratio(num, den, e) {
            self.hi = self.hi.min(v);
        }
    }

    fn finish(self) -> KInterval {
        KInterval {
            lo: self.lo,
            hi: self.hi,
            degenerate: self.degenerate,
        }
    }
}

/// The maximal `k` interval on which `family`'s preconditions hold for this
/// profile. `mu_ref` is required by `lemma2-gamma`; `t` selects the split
/// index of `tsplit` and `lemma2-gamma`.
pub fn feasible_k(
    profile: &PairProfile,
    family: BoundFamily,
    mu_ref: Option<f64>,
    t: Option<usize>,
) -> Result<KInterval> {
    profile.validate()?;
    let xs = &profile.values;
    let r = xs.len();
    let e0 = profile.relation().condition_exponent();
    match family {
        BoundFamily::Hamming => {
            let mut c = Constraints::new(0.0, 1.0);
            for w in xs.windows(2) {
                c.at_least(w[1], w[0], e0);
            }
            Ok(c.finish())
        }
        BoundFamily::JPower => {
            let mut c = Constraints::new(0.0, 1.0);
            for l in 0..r.saturating_sub(1) {
                let tail = pow_sum(&xs[l + 1..], e0);
                c.at_least(tail, xs[l].powf(e0), 1.0);
            }
            Ok(c.finish())
        }
        BoundFamily::TSplit => {
            let t = split_index(profile, t)?;
            let mut c = Constraints::new(0.0, 1.0);
            for (i, &x) in xs.iter().enumerate().take(r - 1) {
                let res = profile.residual(i)?;
                if i <= t {
                    c.at_least(res, x, e0);
                } else {
                    c.at_least(x, res, e0);
                }
            }
            Ok(c.finish())
        }
        BoundFamily::Lemma2Gamma => {
            let mu = mu_ref.ok_or_else(|| Error::Argument("lemma2-gamma needs mu_ref".into()))?;
            let t = split_index(profile, t)?;
            let mut c = Constraints::new(1.0, f64::INFINITY);
            for (i, &x) in xs.iter().enumerate().take(r - 1) {
                let res = profile.residual(i)?;
                if i <= t {
                    c.at_most(res, x, mu);
                } else {
                    c.at_most(x, res, mu);
                }
            }
            Ok(c.finish())
        }
        other => Err(Error::Argument(format!("{other} has no k parameter"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tsallis(values: Vec<f64>, total: f64, variant: Variant) -> PairProfile {
        PairProfile::new(values, total, Family::Tsallis, variant, 2.0).unwrap()
    }

    #[test]
    fn hamming_weights() {
        assert_eq!(hamming_weight(0), 0);
        assert_eq!(hamming_weight(5), 2);
        assert_eq!(hamming_weight(7), 3);
        // the log₂ form fails at j = 1 and j = 7; ω_H(j) ≤ j always holds
        assert!(hamming_weight(7) as f64 > 7f64.log2());
        assert!(hamming_weight(1) as f64 > 1f64.log2());
        for j in 0..4096u64 {
            assert!(u64::from(hamming_weight(j)) <= j);
        }
    }

    #[test]
    fn coefficients() {
        assert_eq!(coeff_k(1.0, 1.0), 1.0);
        assert!((coeff_k(64.0, 1.0) - 1.0).abs() < 1e-15);
        for t in [0.0, 0.3, 1.0, 1.7, 4.0] {
            assert_eq!(coeff_k(1.0, t), 2f64.powf(t) - 1.0);
        }
        assert_eq!(coeff_k(0.5, 0.0), 0.0);
    }

    #[test]
    fn lemma1_examples() {
        let x = 0.7;
        assert!(lemma1_holds(Lemma1Branch::A, x, x, 2.3).unwrap());
        assert!(lemma1_holds(Lemma1Branch::A, 0.3, 0.7, 2.5).unwrap());
        assert!(lemma1_holds(Lemma1Branch::C, 0.3, 0.7, 0.5).unwrap());
        assert!(lemma1_holds(Lemma1Branch::B, 3.0, 2.0, 0.4).unwrap());
        assert!(lemma1_holds(Lemma1Branch::A, 0.8, 0.7, 2.0).is_err());
    }

    #[test]
    fn baseline_examples() {
        let p = tsallis(vec![1.0 / 18.0, 2.0 / 9.0], 5.0 / 18.0, Variant::Standard);
        let r = eval_baseline(&p, 2.0, Relation::Monogamy).unwrap();
        assert!((r.bound - 0.052_469_135_802_469_1).abs() < 1e-12);
        assert!((r.lhs - 25.0 / 324.0).abs() < 1e-15);
        assert!(r.satisfied);

        let p = tsallis(vec![0.25, 4.0 / 25.0], 0.41, Variant::Assistance);
        let r = eval_baseline(&p, 0.5, Relation::Polygamy).unwrap();
        assert!((r.bound - 0.9).abs() < 1e-15);
        assert!(r.satisfied);

        let single = tsallis(vec![0.3], 0.3, Variant::Standard);
        let r = eval_baseline(&single, 3.0, Relation::Monogamy).unwrap();
        assert!(r.slack.abs() < 1e-15);
        assert!(eval_baseline(&single, 1.5, Relation::Monogamy).is_err());
        assert!(eval_baseline(&single, 1.5, Relation::Polygamy).is_err());
    }

    #[test]
    fn t4_collapses_at_gamma_equal_mu() {
        let p = tsallis(vec![0.1, 0.2, 0.05, 0.3], 0.9, Variant::Standard)
            .with_residuals(vec![0.5, 0.35, 0.3])
            .unwrap();
        let t4 = eval_baseline_general_t4(&p, 3.0, 3.0, 1).unwrap();
        let base = eval_baseline(&p, 3.0, Relation::Monogamy).unwrap();
        assert!((t4.bound - base.bound).abs() < 1e-15);
    }

    #[test]
    fn t4_two_pair_form() {
        let p = tsallis(vec![1.0 / 18.0, 2.0 / 9.0], 5.0 / 18.0, Variant::Standard);
        for g in [0.0, 0.5, 2.0, 3.0] {
            let r = eval_baseline_general_t4(&p, g, 3.0, 0).unwrap();
            let expect = (1.0f64 / 18.0).powf(g) + (2f64.powf(g / 3.0) - 1.0) * (2.0f64 / 9.0).powf(g);
            assert!((r.bound - expect).abs() < 1e-15);
            assert!(r.preconditions_ok);
        }
    }

    #[test]
    fn lemma2_example1() {
        let p = tsallis(vec![1.0 / 18.0, 2.0 / 9.0], 5.0 / 18.0, Variant::Standard);
        let iv = feasible_k(&p, BoundFamily::Lemma2Gamma, Some(3.0), None).unwrap();
        assert!((iv.lo - 1.0).abs() < 1e-12 && (iv.hi - 64.0).abs() < 1e-10, "{iv:?}");
        for g in [0.5, 1.0, 2.5, 3.0] {
            let spec = BoundSpec::new(BoundFamily::Lemma2Gamma, 64.0, g).with_mu_ref(3.0);
            let r = eval_lemma2_gamma(&p, &spec).unwrap();
            let expect =
                (1.0f64 / 18.0).powf(g) + (65f64.powf(g / 3.0) - 1.0) / 64f64.powf(g / 3.0) * (2.0f64 / 9.0).powf(g);
            assert!((r.bound - expect).abs() < 1e-14);
            assert!(r.preconditions_ok && r.satisfied);
        }
        let spec = BoundSpec::new(BoundFamily::Lemma2Gamma, 1.0, 2.0).with_mu_ref(3.0);
        let r = eval_lemma2_gamma(&p, &spec).unwrap();
        let t4 = eval_baseline_general_t4(&p, 2.0, 3.0, 0).unwrap();
        assert!((r.bound - t4.bound).abs() < 1e-15);
        let spec = BoundSpec::new(BoundFamily::Lemma2Gamma, 10.0, 0.0).with_mu_ref(3.0);
        let r = eval_lemma2_gamma(&p, &spec).unwrap();
        assert_eq!(r.bound, 1.0);
        assert_eq!(r.lhs, 1.0);
        let spec = BoundSpec::new(BoundFamily::Lemma2Gamma, 0.5, 1.0).with_mu_ref(3.0);
        assert!(matches!(eval_lemma2_gamma(&p, &spec), Err(Error::Range { .. })));
        let spec = BoundSpec::new(BoundFamily::Lemma2Gamma, 65.0, 1.0).with_mu_ref(3.0);
        assert!(!eval_lemma2_gamma(&p, &spec).unwrap().preconditions_ok);
    }

    #[test]
    fn feasible_examples() {
        let p = tsallis(vec![0.25, 4.0 / 25.0], 0.41, Variant::Assistance);
        let iv = feasible_k(&p, BoundFamily::Hamming, None, None).unwrap();
        assert!((iv.lo - 0.64).abs() < 1e-10 && iv.hi == 1.0);

        let p = PairProfile::new(
            vec![(9.0f64 / 7.0).log2(), (18.0f64 / 17.0).log2()],
            (18.0f64 / 13.0).log2(),
            Family::Renyi,
            Variant::Standard,
            2.0,
        )
        .unwrap();
        let iv = feasible_k(&p, BoundFamily::Hamming, None, None).unwrap();
        assert!((iv.lo - 0.0517).abs() < 1e-4, "{iv:?}");

        let zero = tsallis(vec![0.0, 0.0, 0.1], 0.1, Variant::Assistance);
        let iv = feasible_k(&zero, BoundFamily::Hamming, None, None).unwrap();
        assert!(iv.degenerate && iv.is_empty());
        let zeros = tsallis(vec![0.2, 0.0, 0.0], 0.2, Variant::Assistance);
        let iv = feasible_k(&zeros, BoundFamily::Hamming, None, None).unwrap();
        assert!(!iv.degenerate && iv.lo == 0.0);
        assert!(feasible_k(&zeros, BoundFamily::BaselineT5, None, None).is_err());
    }

    #[test]
    fn two_pairs_jpower_equals_hamming() {
        let p = tsallis(vec![0.3, 0.2], 0.6, Variant::Standard);
        let spec = BoundSpec::new(BoundFamily::Hamming, 0.6, 2.5);
        let h = eval_hamming(&p, &spec).unwrap();
        let j = eval_jpower(
            &p,
            &BoundSpec {
                family: BoundFamily::JPower,
                ..spec
            },
        )
        .unwrap();
        assert_eq!(h.bound, j.bound);
    }

    #[test]
    fn tsplit_all_head_is_jpower() {
        let p = tsallis(vec![0.4, 0.25, 0.15, 0.1], 0.8, Variant::Standard)
            .with_residuals(vec![0.35, 0.2, 0.1])
            .unwrap();
        let spec = BoundSpec::new(BoundFamily::TSplit, 0.7, 2.0).with_t(2);
        let ts = eval_tsplit(&p, &spec).unwrap();
        let jp = eval_jpower(&p, &BoundSpec::new(BoundFamily::JPower, 0.7, 2.0)).unwrap();
        assert!((ts.bound - jp.bound).abs() < 1e-15);
        let no_res = tsallis(vec![0.4, 0.25, 0.15], 0.8, Variant::Standard);
        assert!(matches!(
            eval_tsplit(&no_res, &BoundSpec::new(BoundFamily::TSplit, 0.7, 2.0)),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn family_tags_roundtrip() {
        for f in BoundFamily::ALL {
            assert_eq!(BoundFamily::from_tag(f.tag()).unwrap(), f);
            let json = serde_json::to_string(&f).unwrap();
            assert_eq!(json, format!("\"{}\"", f.tag()));
        }
    }

    #[test]
    fn baseline_target_mismatch() {
        let p = tsallis(vec![0.3, 0.2], 0.6, Variant::Standard);
        let spec = BoundSpec::new(BoundFamily::BaselineE3, 1.0, 2.0);
        assert!(evaluate(&p, &spec).is_err());
    }

    fn sorted_profile(rel: Relation) -> impl Strategy<Value = (Vec<f64>, f64)> {
        (proptest::collection::vec(0.01f64..1.0, 1..7), 0.05f64..1.0).prop_map(move |(mut v, k)| {
            // geometric decay with ratio ≤ √k (or k) meets the ordering condition
            v.sort_by(|a, b| b.total_cmp(a));
            let ratio = match rel {
                Relation::Monogamy => k.sqrt(),
                Relation::Polygamy => k,
            };
            for j in 1..v.len() {
                v[j] = v[j].min(v[j - 1] * ratio);
            }
            (v, k)
        })
    }

    proptest! {
        #[test]
        fn k_monotone_in_k(t in 0.0f64..5.0, a in 0.01f64..3.0, b in 0.01f64..3.0) {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let (klo, khi) = (coeff_k(lo, t), coeff_k(hi, t));
            if t >= 1.0 {
                prop_assert!(klo >= khi - 1e-12);
            } else {
                prop_assert!(klo <= khi + 1e-12);
            }
        }

        #[test]
        fn monogamy_ordering((v, k) in sorted_profile(Relation::Monogamy), beta in 2.0f64..6.0) {
            let p = tsallis(v, 1.0, Variant::Standard);
            let h = eval_hamming(&p, &BoundSpec::new(BoundFamily::Hamming, k, beta)).unwrap();
            prop_assert!(h.preconditions_ok);
            let b = eval_baseline(&p, beta, Relation::Monogamy).unwrap();
            prop_assert!(h.bound >= b.bound - 1e-12);
            let j = eval_jpower(&p, &BoundSpec::new(BoundFamily::JPower, k, beta)).unwrap();
            if j.preconditions_ok {
                prop_assert!(j.bound >= h.bound - 1e-12);
            }
        }

        #[test]
        fn polygamy_ordering((v, k) in sorted_profile(Relation::Polygamy), mu in 0.01f64..1.0) {
            let p = tsallis(v, 1.0, Variant::Assistance);
            let h = eval_hamming(&p, &BoundSpec::new(BoundFamily::Hamming, k, mu)).unwrap();
            prop_assert!(h.preconditions_ok);
            let b = eval_baseline(&p, mu, Relation::Polygamy).unwrap();
            prop_assert!(h.bound <= b.bound + 1e-12);
            let j = eval_jpower(&p, &BoundSpec::new(BoundFamily::JPower, k, mu)).unwrap();
            if j.preconditions_ok {
                prop_assert!(j.bound <= h.bound + 1e-12);
            }
        }

        #[test]
        fn feasible_interval_matches_preconditions(
            v in proptest::collection::vec(0.0f64..1.0, 2..6),
            k in 0.01f64..1.0,
        ) {
            let p = tsallis(v, 1.0, Variant::Assistance);
            let iv = feasible_k(&p, BoundFamily::Hamming, None, None).unwrap();
            let rep = eval_hamming(&p, &BoundSpec::new(BoundFamily::Hamming, k, 0.5)).unwrap();
            if iv.lo + 1e-9 < k && k < iv.hi - 1e-9 {
                prop_assert!(rep.preconditions_ok);
            }
            if k < iv.lo - 1e-9 {
                prop_assert!(!rep.preconditions_ok);
            }
        }

        #[test]
        fn satisfied_agrees_with_slack(v in proptest::collection::vec(0.0f64..1.0, 1..5), total in 0.0f64..2.0) {
            let p = tsallis(v, total, Variant::Standard);
            let r = eval_baseline(&p, 2.0, Relation::Monogamy).unwrap();
            prop_assert_eq!(r.satisfied, r.slack >= -SATISFACTION_TOL);
            prop_assert_eq!(r.margin(), r.slack);
        }
    }
}
