//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so every line is printed; the
//! process exits nonzero when any criterion fails.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use gwv_core::bounds::{self, lemma1_holds, Lemma1Branch};
use gwv_core::entanglement::{
    convex_roof_concurrence, convex_roof_measure, f_alpha, g_q, wootters_concurrence, RENYI_ASSIST_MAX, RENYI_MIN,
    TSALLIS_MAX, TSALLIS_MIN,
};
use gwv_core::harness::{self, check_orderings, generate_figure, run_fuzz, FuzzConfig, Preset};
use gwv_core::states::{self, build_gwv};
use gwv_core::{
    BoundFamily, BoundSpec, ComplexMatrix, ConvexRoofConfig, DensityMatrix, DimList, Family, MeasureParams,
    PairProfile, Relation, Variant, C64,
};

type Criterion = (&'static str, &'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn close(got: f64, want: f64, tol: f64, what: &str, errs: &mut Vec<String>) {
    if (got - want).abs().is_nan() || (got - want).abs() > tol {
        errs.push(format!("{what}: got {got:.15}, want {want:.15}"));
    }
}

fn summarize(errs: Vec<String>, ok_detail: String) -> Outcome {
    if errs.is_empty() {
        outcome(true, ok_detail)
    } else {
        outcome(false, errs.join("; "))
    }
}

fn within(elapsed: Duration, limit: Duration, errs: &mut Vec<String>) {
    if elapsed > limit {
        errs.push(format!("runtime {:.2?} exceeds {:.0?}", elapsed, limit));
    }
}

fn example1() -> Outcome {
    let start = Instant::now();
    let mut errs = Vec::new();
    let ex = harness::examples::run_example(Preset::Example1);
    let ex = match ex {
        Ok(e) => e,
        Err(e) => return outcome(false, e.to_string()),
    };
    let c = &ex.concurrences;
    close(c.total, 5f64.sqrt() / 3.0, 1e-10, "C(A1|A2A3)", &mut errs);
    close(c.pairs[0], 1.0 / 3.0, 1e-10, "C(A1A2)", &mut errs);
    close(c.pairs[1], 2.0 / 3.0, 1e-10, "C(A1A3)", &mut errs);
    close(ex.profile.total, 5.0 / 18.0, 1e-10, "T2(A1|A2A3)", &mut errs);
    close(ex.profile.values[0], 1.0 / 18.0, 1e-10, "T2(A1A2)", &mut errs);
    close(ex.profile.values[1], 2.0 / 9.0, 1e-10, "T2(A1A3)", &mut errs);
    within(start.elapsed(), Duration::from_secs(1), &mut errs);
    summarize(errs, "concurrences and T2 values within 1e-10".into())
}

fn example2() -> Outcome {
    let start = Instant::now();
    let mut errs = Vec::new();
    let psi = Preset::Example2.state();
    for (j, want) in [(1, 0.5f64.sqrt()), (2, 2.0 * 2f64.sqrt() / 5.0)] {
        match states::reduce(&psi, &[0, j]).and_then(|rho| wootters_concurrence(&rho)) {
            Ok(c) => close(c, want, 1e-10, &format!("Wootters C(A1A{})", j + 1), &mut errs),
            Err(e) => errs.push(e.to_string()),
        }
    }
    match harness::examples::run_example(Preset::Example2) {
        Ok(ex) => {
            close(ex.profile.values[0], 0.25, 1e-10, "T2a(A1A2)", &mut errs);
            close(ex.profile.values[1], 4.0 / 25.0, 1e-10, "T2a(A1A3)", &mut errs);
            close(ex.feasible.lo, 0.64, 1e-10, "feasible k lo", &mut errs);
            close(ex.feasible.hi, 1.0, 1e-10, "feasible k hi", &mut errs);
        }
        Err(e) => errs.push(e.to_string()),
    }
    within(start.elapsed(), Duration::from_secs(1), &mut errs);
    summarize(
        errs,
        "Wootters concurrences, T2a values and k in [0.64, 1] within 1e-10".into(),
    )
}

fn example3() -> Outcome {
    let mut errs = Vec::new();
    let ex = match harness::examples::run_example(Preset::Example3) {
        Ok(e) => e,
        Err(e) => return outcome(false, e.to_string()),
    };
    close(ex.profile.total, (18f64 / 13.0).log2(), 1e-10, "E2(A1|A2A3)", &mut errs);
    close(ex.profile.values[0], (9f64 / 7.0).log2(), 1e-10, "E2(A1A2)", &mut errs);
    close(
        ex.profile.values[1],
        (18f64 / 17.0).log2(),
        1e-10,
        "E2(A1A3)",
        &mut errs,
    );
    summarize(
        errs,
        format!(
            "E2 values within 1e-10; computed feasible k = [{:.6}, {:.6}], figure drawn with k = 0.52",
            ex.feasible.lo, ex.feasible.hi
        ),
    )
}

fn example4() -> Outcome {
    let mut errs = Vec::new();
    let ex = match harness::examples::run_example(Preset::Example4) {
        Ok(e) => e,
        Err(e) => return outcome(false, e.to_string()),
    };
    close(ex.profile.values[0], 0.549339, 5e-6, "E1.2a(A1A2)", &mut errs);
    close(ex.profile.values[1], 0.372954, 5e-6, "E1.2a(A1A3)", &mut errs);
    let lo = ex.feasible.lo;
    if (lo - 0.68).abs() > 1e-3 {
        errs.push(format!(
            "feasible k lo {lo:.6} (= E(A1A3)/E(A1A2), {:.2} to two decimals) is {:.3e} from 0.68, outside 1e-3",
            lo,
            (lo - 0.68).abs()
        ));
    }
    summarize(
        errs,
        format!(
            "E1.2a = {:.6}, {:.6}; feasible k lo = {:.6}",
            ex.profile.values[0], ex.profile.values[1], ex.feasible.lo
        ),
    )
}

fn figures() -> Outcome {
    let mut errs = Vec::new();
    let mut checked = 0;
    for n in 1..=4u8 {
        let start = Instant::now();
        match generate_figure(n, None) {
            Ok(fig) => {
                for p in check_orderings(&fig.reports) {
                    errs.push(format!("fig {n}: {p}"));
                }
                let active = fig
                    .reports
                    .iter()
                    .filter(|r| {
                        r.preconditions_ok && matches!(r.family, BoundFamily::Hamming | BoundFamily::Lemma2Gamma)
                    })
                    .count();
                if active == 0 {
                    errs.push(format!("fig {n}: no sweep point passes its preconditions"));
                }
                checked += active;
                let header = fig.csv.lines().next().unwrap_or_default();
                if !header.starts_with("family_tag,") {
                    errs.push(format!("fig {n}: unexpected CSV header {header:?}"));
                }
            }
            Err(e) => errs.push(format!("fig {n}: {e}")),
        }
        within(start.elapsed(), Duration::from_secs(10), &mut errs);
    }
    summarize(errs, format!("orderings hold at {checked} precondition-passing points"))
}

fn lemma1() -> Outcome {
    let start = Instant::now();
    let n = 100_000;
    let mut errs = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for branch in [Lemma1Branch::A, Lemma1Branch::B, Lemma1Branch::C] {
        let mut bad = 0;
        for _ in 0..n {
            let (x, k, t) = match branch {
                Lemma1Branch::A => {
                    let k = rng.random_range(1e-6..=1.0);
                    (rng.random_range(0.0..=k), k, rng.random_range(1.0..=10.0))
                }
                Lemma1Branch::B => {
                    let k = rng.random_range(1.0..=10.0);
                    (k * rng.random_range(1.0..=100.0f64), k, rng.random_range(0.0..=1.0))
                }
                Lemma1Branch::C => {
                    let k = rng.random_range(1e-6..=1.0);
                    (rng.random_range(0.0..=k), k, rng.random_range(0.0..=1.0))
                }
            };
            match lemma1_holds(branch, x, k, t) {
                Ok(true) => {}
                Ok(false) => bad += 1,
                Err(e) => {
                    errs.push(e.to_string());
                    break;
                }
            }
        }
        if bad > 0 {
            errs.push(format!("branch {branch:?}: {bad} violations"));
        }
    }
    within(start.elapsed(), Duration::from_secs(5), &mut errs);
    summarize(errs, format!("{n} samples per branch, no violations"))
}

/// A decreasing profile whose consecutive ratios `x_{j+1}^e / x_j^e` stay
/// below `k/2`, which meets the jpower and hamming conditions together.
fn admissible_values(rng: &mut ChaCha8Rng, k: f64, e: f64) -> Vec<f64> {
    let r = rng.random_range(1..=8);
    let mut v = vec![rng.random_range(0.05..=1.0f64)];
    for _ in 1..r {
        let last: f64 = *v.last().unwrap();
        let ratio = (k / 2.0).powf(1.0 / e) * rng.random_range(0.0..=1.0f64);
        v.push(last * ratio);
    }
    v
}

fn orderings() -> Outcome {
    let n = 10_000;
    let tol = 1e-12;
    let mut errs = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut counts = [0usize; 2];
    for i in 0..n {
        let k = rng.random_range(1e-3..=1.0);
        let monogamy = i % 2 == 0;
        let (variant, e0, exponent) = if monogamy {
            (Variant::Standard, 2.0, rng.random_range(2.0..=6.0))
        } else {
            (Variant::Assistance, 1.0, rng.random_range(1e-3..=1.0))
        };
        let values = admissible_values(&mut rng, k, e0);
        let total = rng.random_range(0.0..=2.0);
        let profile = match PairProfile::new(values, total, Family::Tsallis, variant, 2.0) {
            Ok(p) => p,
            Err(e) => return outcome(false, e.to_string()),
        };
        let relation = profile.relation();
        let eval = || -> gwv_core::Result<_> {
            let j = bounds::eval_jpower(&profile, &BoundSpec::new(BoundFamily::JPower, k, exponent))?;
            let h = bounds::eval_hamming(&profile, &BoundSpec::new(BoundFamily::Hamming, k, exponent))?;
            let b = bounds::eval_baseline(&profile, exponent, relation)?;
            Ok((j, h, b))
        };
        let (j, h, b) = match eval() {
            Ok(x) => x,
            Err(e) => return outcome(false, e.to_string()),
        };
        if !(j.preconditions_ok && h.preconditions_ok) {
            errs.push(format!("profile {i}: generated profile not admissible"));
            continue;
        }
        let ordered = match relation {
            Relation::Monogamy => j.bound >= h.bound - tol && h.bound >= b.bound - tol,
            Relation::Polygamy => j.bound <= h.bound + tol && h.bound <= b.bound + tol,
        };
        counts[usize::from(!monogamy)] += 1;
        if !ordered {
            errs.push(format!(
                "profile {i} ({relation:?}, k={k}, e={exponent}): jpower {} hamming {} baseline {}",
                j.bound, h.bound, b.bound
            ));
        }
    }
    errs.truncate(5);
    summarize(
        errs,
        format!(
            "{} monogamy and {} polygamy profiles ordered at 1e-12",
            counts[0], counts[1]
        ),
    )
}

fn fuzz() -> Outcome {
    let start = Instant::now();
    let summary = match run_fuzz(&FuzzConfig::default()) {
        Ok(s) => s,
        Err(e) => return outcome(false, e.to_string()),
    };
    let mut errs: Vec<String> = summary
        .violations
        .iter()
        .take(5)
        .map(|v| format!("state {} {}: {}", v.index, v.check, v.detail))
        .collect();
    if summary.checked == 0 {
        errs.push("no bound passed its preconditions".into());
    }
    within(start.elapsed(), Duration::from_secs(300), &mut errs);
    summarize(
        errs,
        format!(
            "{} states, {} bounds checked, {} skipped, {} ordering checks, worst margin {:.3e}",
            summary.states, summary.checked, summary.skipped, summary.ordering_checks, summary.worst_margin
        ),
    )
}

fn gaussian_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    (0..n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            C64::new(re, im)
        })
        .collect()
}

fn random_rank2_two_qubit(seed: u64) -> gwv_core::Result<DensityMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w: f64 = rng.random_range(0.05..0.95);
    let mut rho = ComplexMatrix::zeros(4, 4);
    for weight in [w, 1.0 - w] {
        let v = gaussian_vector(&mut rng, 4);
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>();
        rho = rho.add(&ComplexMatrix::outer(&v).scale(C64::new(weight / norm, 0.0)))?;
    }
    DensityMatrix::new(DimList::new(vec![2, 2])?, rho.hermitian_part())
}

fn oracle_config() -> ConvexRoofConfig {
    ConvexRoofConfig {
        restarts: 4,
        ..ConvexRoofConfig::default()
    }
}

fn wootters_oracle() -> Outcome {
    let start = Instant::now();
    let cfg = oracle_config();
    let results: Vec<gwv_core::Result<(f64, f64)>> = (0..200u64)
        .into_par_iter()
        .map(|i| {
            let rho = random_rank2_two_qubit(i)?;
            let exact = wootters_concurrence(&rho)?;
            let roof = convex_roof_concurrence(&rho, &[0], &cfg)?.value;
            Ok((exact, roof))
        })
        .collect();
    let mut errs = Vec::new();
    let mut worst: f64 = 0.0;
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok((exact, roof)) => {
                let err = (exact - roof).abs();
                worst = worst.max(err);
                if err > 1e-3 {
                    errs.push(format!("state {i}: Wootters {exact:.6} roof {roof:.6}"));
                }
            }
            Err(e) => errs.push(format!("state {i}: {e}")),
        }
    }
    errs.truncate(5);
    within(start.elapsed(), Duration::from_secs(300), &mut errs);
    summarize(errs, format!("200 rank-2 states, max |roof - Wootters| = {worst:.2e}"))
}

struct GwvPair {
    rho: DensityMatrix,
    /// `2p √(w_i w_j)`: every pure state in the support has this average.
    concurrence: f64,
}

fn random_gwv_pair(index: usize) -> gwv_core::Result<GwvPair> {
    let cfg = FuzzConfig {
        seed: 9,
        n_choices: vec![3, 4],
        d_choices: vec![2, 3],
        ..FuzzConfig::default()
    };
    let case = harness::fuzz::sample_case(&cfg, index)?;
    let n = case.spec.n;
    let j = 1 + index % (n - 1);
    let rho = states::reduce(&build_gwv(&case.spec)?, &[0, j])?;
    let concurrence = 2.0 * case.spec.p * (case.spec.slot_weight(0) * case.spec.slot_weight(j)).sqrt();
    Ok(GwvPair { rho, concurrence })
}

fn draw_measure(rng: &mut ChaCha8Rng, i: usize, variant: Variant) -> MeasureParams {
    let tsallis = i.is_multiple_of(2);
    match (tsallis, variant) {
        (true, Variant::Standard) => MeasureParams::tsallis(rng.random_range(TSALLIS_MIN..=TSALLIS_MAX), variant),
        (true, Variant::Assistance) => {
            let q = if rng.random_bool(0.5) {
                rng.random_range(TSALLIS_MIN..=2.0)
            } else {
                rng.random_range(3.0..=TSALLIS_MAX)
            };
            MeasureParams::tsallis(q, variant)
        }
        (false, Variant::Standard) => MeasureParams::renyi(rng.random_range(RENYI_MIN..=5.0), variant),
        (false, Variant::Assistance) => MeasureParams::renyi(rng.random_range(RENYI_MIN..=RENYI_ASSIST_MAX), variant),
    }
}

fn measure_oracle(variant: Variant) -> Outcome {
    let start = Instant::now();
    let cfg = oracle_config();
    let results: Vec<gwv_core::Result<(MeasureParams, f64, f64)>> = (0..100usize)
        .into_par_iter()
        .map(|i| {
            let pair = random_gwv_pair(i)?;
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + i as u64);
            let params = loop {
                let p = draw_measure(&mut rng, i, variant);
                if p.validate().is_ok() {
                    break p;
                }
            };
            let analytic = params.from_squared_concurrence(pair.concurrence.powi(2))?;
            let roof = convex_roof_measure(&pair.rho, &[0], &params, &cfg)?.value;
            Ok((params, analytic, roof))
        })
        .collect();
    let mut errs = Vec::new();
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok((params, analytic, roof)) => {
                let err = (analytic - roof).abs();
                worst = worst.max(err);
                if err > 1e-3 {
                    failures += 1;
                    if errs.len() < 3 {
                        errs.push(format!(
                            "case {i} ({:?} {}): closed form {analytic:.6} roof {roof:.6}",
                            params.family, params.parameter
                        ));
                    }
                }
            }
            Err(e) => errs.push(format!("case {i}: {e}")),
        }
    }
    if failures > 0 {
        errs.insert(
            0,
            format!("{failures}/100 cases off by more than 1e-3 (max {worst:.3e})"),
        );
    }
    within(start.elapsed(), Duration::from_secs(300), &mut errs);
    summarize(
        errs,
        format!("100 GWV reductions, max |roof - closed form| = {worst:.2e}"),
    )
}

fn identities() -> Outcome {
    let mut errs = Vec::new();
    for i in 0..1000 {
        let x = i as f64 / 999.0;
        match (g_q(x, 2.0), f_alpha(x, 2.0)) {
            (Ok(g), Ok(f)) => {
                close(g, x / 2.0, 1e-12, &format!("g_2({x})"), &mut errs);
                close(f, (2.0 / (2.0 - x)).log2(), 1e-12, &format!("f_2({x})"), &mut errs);
            }
            (Err(e), _) | (_, Err(e)) => errs.push(e.to_string()),
        }
    }
    let grid = 400;
    let h = 1.0 / grid as f64;
    let check = |name: &str, param: f64, f: &dyn Fn(f64) -> f64, errs: &mut Vec<String>| {
        let xs: Vec<f64> = (0..=grid).map(|i| f(i as f64 * h)).collect();
        if let Some(i) = xs.windows(2).position(|w| w[1] < w[0] - 1e-12) {
            errs.push(format!("{name}({param}) decreases in x near {}", i as f64 * h));
        }
        let ys: Vec<f64> = (0..=grid).map(|i| f((i as f64 * h).powi(2))).collect();
        if let Some(i) = ys.windows(3).position(|w| w[2] - 2.0 * w[1] + w[0] < -1e-10) {
            errs.push(format!("{name}({param}) not convex in y near {}", (i + 1) as f64 * h));
        }
    };
    let steps = 60;
    for s in 0..=steps {
        let q = TSALLIS_MIN + (TSALLIS_MAX - TSALLIS_MIN) * s as f64 / steps as f64;
        if (q - 1.0).abs() < 1e-9 {
            continue;
        }
        check("g", q, &|x| g_q(x, q).unwrap(), &mut errs);
        let alpha = RENYI_MIN + (10.0 - RENYI_MIN) * s as f64 / steps as f64;
        if (alpha - 1.0).abs() > 1e-9 {
            check("f", alpha, &|x| f_alpha(x, alpha).unwrap(), &mut errs);
        }
    }
    check("f", 1.0 + 1e-3, &|x| f_alpha(x, 1.0 + 1e-3).unwrap(), &mut errs);
    errs.truncate(5);
    summarize(
        errs,
        "g_2 and f_2 identities to 1e-12; monotone in x and convex in y = sqrt(x) across the parameter intervals"
            .into(),
    )
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("1", "example 1 regression", example1),
        ("2", "example 2 regression", example2),
        ("3", "example 3 regression", example3),
        ("4", "example 4 regression", example4),
        ("5", "figure dataset orderings", figures),
        ("6", "lemma 1 property suite", lemma1),
        ("7", "bound ordering suite", orderings),
        ("8", "theorem fuzz suite", fuzz),
        ("9a", "roof concurrence vs Wootters", wootters_oracle),
        ("9b", "standard roof vs closed form", || {
            measure_oracle(Variant::Standard)
        }),
        ("9c", "assistance roof vs closed form", || {
            measure_oracle(Variant::Assistance)
        }),
        ("10", "analytic identities", identities),
    ];
    let mut failed = 0;
    for (id, name, run) in criteria {
        let start = Instant::now();
        let out = run();
        let status = if out.pass { "PASS" } else { "FAIL" };
        if !out.pass {
            failed += 1;
        }
        println!("{status} {id:>3} {name} ({:.2?}): {}", start.elapsed(), out.detail);
    }
    println!("{failed} criteria failed");
    if failed > 0 {
        std::process::exit(1);
    }
}
