//! Versioned JSON scenarios and their evaluation.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::presets::Preset;
use super::profile::ConcurrenceProfile;
use super::report::Format;
use crate::bounds::{self, BoundFamily, BoundReport, BoundSpec, PairProfile};
use crate::entanglement::{ConvexRoofConfig, MeasureParams};
use crate::states::{build_gwv, GwvSpec, Partition, StateVector};
use crate::{Error, Result};

pub const SCHEMA: &str = "gwv-scenario/1";

/// Either a preset name or an explicit GWV specification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateSource {
    Preset(Preset),
    Spec(GwvSpec),
}

impl StateSource {
    pub fn build(&self) -> Result<StateVector> {
        match self {
            StateSource::Preset(p) => Ok(p.state()),
            StateSource::Spec(s) => build_gwv(s),
        }
    }
}

/// Inclusive arithmetic grid `start, start+step, …, ≤ stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        let g = Grid { start, stop, step };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.step.is_nan() || self.step <= 0.0 || !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::Validation(format!("grid step must be > 0: {self:?}")));
        }
        if self.start > self.stop {
            return Err(Error::Validation(format!("empty grid: {self:?}")));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.start + i as f64 * self.step).collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    /// Replaces each bound's exponent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<Grid>,
    /// Replaces `k` for the families that have one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub schema: String,
    pub state: StateSource,
    pub partition: Partition,
    pub measure: MeasureParams,
    pub bound_specs: Vec<BoundSpec>,
    #[serde(default)]
    pub sweep: Sweep,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default)]
    pub roof: ConvexRoofConfig,
}

fn has_k(family: BoundFamily) -> bool {
    matches!(
        family,
        BoundFamily::Hamming | BoundFamily::JPower | BoundFamily::TSplit | BoundFamily::Lemma2Gamma
    )
}

impl Scenario {
    pub fn new(state: StateSource, partition: Partition, measure: MeasureParams, bound_specs: Vec<BoundSpec>) -> Self {
        Scenario {
            schema: SCHEMA.to_string(),
            state,
            partition,
            measure,
            bound_specs,
            sweep: Sweep::default(),
            output: OutputSpec::default(),
            roof: ConvexRoofConfig::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: Scenario = serde_json::from_str(text)?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::from(e).context(format!("reading {}", path.display())))?;
        Scenario::from_json(&text).map_err(|e| e.context(format!("scenario {}", path.display())))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA {
            return Err(Error::Parse(format!(
                "unsupported schema '{}', expected '{SCHEMA}'",
                self.schema
            )));
        }
        if let StateSource::Spec(s) = &self.state {
            s.validate()?;
        }
        self.partition.validate()?;
        self.measure.validate()?;
        self.roof.validate()?;
        if self.bound_specs.is_empty() {
            return Err(Error::Validation("scenario lists no bound_specs".into()));
        }
        if let Some(g) = &self.sweep.exponent {
            g.validate()?;
        }
        if let Some(ks) = &self.sweep.k {
            if ks.is_empty() {
                return Err(Error::Validation("sweep.k is empty".into()));
            }
        }
        Ok(())
    }

    /// Every `(spec index, concrete spec)` pair of the sweep, in emission order:
    /// by spec, then `k`, then exponent.
    pub fn points(&self) -> Vec<(usize, BoundSpec)> {
        let mut out = Vec::new();
        for (i, spec) in self.bound_specs.iter().enumerate() {
            let mut ks = match (&self.sweep.k, has_k(spec.family)) {
                (Some(ks), true) => ks.clone(),
                _ => vec![spec.k],
            };
            ks.sort_by(f64::total_cmp);
            ks.dedup();
            let exps = match &self.sweep.exponent {
                Some(g) => g.points(),
                None => vec![spec.exponent],
            };
            for &k in &ks {
                for &e in &exps {
                    let t = spec.t.or(self.partition.t());
                    out.push((
                        i,
                        BoundSpec {
                            k,
                            exponent: e,
                            t,
                            ..spec.clone()
                        },
                    ));
                }
            }
        }
        out
    }

    pub fn profile(&self) -> Result<PairProfile> {
        let state = self.state.build()?;
        let c = ConcurrenceProfile::build(&state, &self.partition, &self.roof)?;
        c.to_pair_profile(&self.measure)
    }
}

/// Evaluates every bound at every sweep point. Points are computed in
/// parallel and returned in [`Scenario::points`] order.
pub fn run_verify(scenario: &Scenario) -> Result<Vec<BoundReport>> {
    scenario.validate()?;
    let profile = scenario.profile()?;
    scenario
        .points()
        .into_par_iter()
        .map(|(i, spec)| {
            bounds::evaluate(&profile, &spec).map_err(|e| {
                e.context(format!(
                    "bound_specs[{i}] ({}) at exponent {}, k {}",
                    spec.family, spec.exponent, spec.k
                ))
            })
        })
        .collect()
}
