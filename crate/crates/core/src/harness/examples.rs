//! Worked examples: the concurrences, measure values and feasible `k`
//! interval of each preset.

use std::fmt;

use serde::Serialize;

use super::presets::Preset;
use super::profile::ConcurrenceProfile;
use super::report::format_sig;
use crate::bounds::{feasible_k, BoundFamily, KInterval, PairProfile};
use crate::entanglement::{ConvexRoofConfig, MeasureParams, Variant};
use crate::states::Partition;
use crate::Result;

#[derive(Debug, Clone, Serialize)]
pub struct ExampleReport {
    pub preset: Preset,
    pub measure: MeasureParams,
    pub concurrences: ConcurrenceProfile,
    pub profile: PairProfile,
    pub family: BoundFamily,
    pub mu_ref: Option<f64>,
    pub feasible: KInterval,
    /// The `k` the corresponding figure is drawn with, when it differs from
    /// an endpoint of the computed interval.
    pub figure_k: Option<f64>,
}

/// Measure, bound family and `μ` reference of each example.
pub fn example_setup(preset: Preset) -> (MeasureParams, BoundFamily, Option<f64>) {
    match preset {
        Preset::Example1 => (
            MeasureParams::tsallis(2.0, Variant::Standard),
            BoundFamily::Lemma2Gamma,
            Some(3.0),
        ),
        Preset::Example2 => (
            MeasureParams::tsallis(2.0, Variant::Assistance),
            BoundFamily::Hamming,
            None,
        ),
        Preset::Example3 => (MeasureParams::renyi(2.0, Variant::Standard), BoundFamily::Hamming, None),
        Preset::Example4 => (
            MeasureParams::renyi(1.2, Variant::Assistance),
            BoundFamily::Hamming,
            None,
        ),
    }
}

pub fn run_example(preset: Preset) -> Result<ExampleReport> {
    let (measure, family, mu_ref) = example_setup(preset);
    let state = preset.state();
    let partition = Partition::singletons(3)?;
    let concurrences = ConcurrenceProfile::build(&state, &partition, &ConvexRoofConfig::default())?;
    let profile = concurrences.to_pair_profile(&measure)?;
    let feasible = feasible_k(&profile, family, mu_ref, None)?;
    let figure_k = match preset {
        Preset::Example3 => Some(0.52),
        _ => None,
    };
    Ok(ExampleReport {
        preset,
        measure,
        concurrences,
        profile,
        family,
        mu_ref,
        feasible,
        figure_k,
    })
}

impl fmt::Display for ExampleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let amps: Vec<String> = self.preset.amplitudes().iter().map(|&a| format_sig(a)).collect();
        writeln!(f, "{} (amplitudes {})", self.preset.name(), amps.join(", "))?;
        let sym = match (self.measure.family, self.measure.variant) {
            (crate::Family::Tsallis, Variant::Standard) => "T",
            (crate::Family::Tsallis, Variant::Assistance) => "Ta",
            (crate::Family::Renyi, Variant::Standard) => "E",
            (crate::Family::Renyi, Variant::Assistance) => "Ea",
        };
        let p = format_sig(self.measure.parameter);
        let c = &self.concurrences;
        let mut rows = vec![("C(A1|A2A3)".to_string(), c.total)];
        rows.extend(
            c.pairs
                .iter()
                .enumerate()
                .map(|(j, x)| (format!("C(A1A{})", j + 2), *x)),
        );
        rows.push((format!("{sym}_{p}(A1|A2A3)"), self.profile.total));
        rows.extend(
            self.profile
                .values
                .iter()
                .enumerate()
                .map(|(j, x)| (format!("{sym}_{p}(A1A{})", j + 2), *x)),
        );
        let width = rows.iter().map(|(l, _)| l.chars().count()).max().unwrap_or(0);
        for (label, value) in rows {
            writeln!(f, "  {label:<width$} = {}", format_sig(value))?;
        }
        let mu = self
            .mu_ref
            .map(|m| format!(", mu = {}", format_sig(m)))
            .unwrap_or_default();
        writeln!(
            f,
            "  feasible k ({}{mu}) = [{}, {}]{}",
            self.family,
            format_sig(self.feasible.lo),
            format_sig(self.feasible.hi),
            if self.feasible.degenerate { " (degenerate)" } else { "" }
        )?;
        if let Some(k) = self.figure_k {
            writeln!(f, "  figure drawn with k = {}", format_sig(k))?;
        }
        Ok(())
    }
}
