//! Concurrence profiles of a partition, mapped to pair profiles per measure.

use serde::{Deserialize, Serialize};

use crate::bounds::PairProfile;
use crate::entanglement::{self, ConvexRoofConfig, MeasureParams, StateRef};
use crate::states::{self, Partition, StateVector};
use crate::{Error, Result};

/// Concurrences needed by every bound family for one partition
/// `{P, P_0, …, P_{R-1}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcurrenceProfile {
    /// `C(ρ_{PP_j})`
    pub pairs: Vec<f64>,
    /// `C(ρ_{P|P_0 … P_{R-1}})`
    pub total: f64,
    /// `C(ρ_{P|P_{i+1} … P_{R-1}})` for `i = 0..R-2`.
    pub residuals: Vec<f64>,
}

/// Concurrence of `P` against the union of `others` (`P` is group 0).
fn group_concurrence(state: &StateVector, groups: Vec<Vec<usize>>, cfg: &ConvexRoofConfig) -> Result<f64> {
    let part = Partition::new(groups, None)?;
    if part.subsystems().len() == state.dims().len() {
        let pure = states::coarse_grain(state, &part)?;
        return entanglement::pure_concurrence(&pure, &[0]);
    }
    let rho = states::reduce_to_partition(state, &part)?;
    entanglement::concurrence(StateRef::Mixed(&rho), &[0], cfg)
}

impl ConcurrenceProfile {
    pub fn build(state: &StateVector, partition: &Partition, cfg: &ConvexRoofConfig) -> Result<Self> {
        partition.validate_for(state.dims().len())?;
        let anchor = partition.anchor().to_vec();
        let parts = partition.parts();
        let r = parts.len();
        let with_anchor = |range: &[Vec<usize>]| {
            let mut g = vec![anchor.clone()];
            g.extend(range.iter().cloned());
            g
        };
        let pairs = parts
            .iter()
            .map(|pj| group_concurrence(state, with_anchor(std::slice::from_ref(pj)), cfg))
            .collect::<Result<Vec<_>>>()?;
        let total = group_concurrence(state, partition.groups().to_vec(), cfg)?;
        let mut residuals = Vec::with_capacity(r.saturating_sub(1));
        for i in 0..r.saturating_sub(1) {
            if i + 2 == r {
                residuals.push(pairs[r - 1]);
            } else {
                residuals.push(group_concurrence(state, with_anchor(&parts[i + 1..]), cfg)?);
            }
        }
        Ok(ConcurrenceProfile {
            pairs,
            total,
            residuals,
        })
    }

    /// Applies `g_q(C²)` or `f_α(C²)` to every entry.
    pub fn to_pair_profile(&self, params: &MeasureParams) -> Result<PairProfile> {
        params.validate()?;
        let map = |c: &f64| params.from_squared_concurrence(c * c);
        let values = self.pairs.iter().map(map).collect::<Result<Vec<_>>>()?;
        let total = map(&self.total)?;
        let residuals = self.residuals.iter().map(map).collect::<Result<Vec<_>>>()?;
        let profile = PairProfile::new(values, total, params.family, params.variant, params.parameter)?;
        if residuals.is_empty() {
            Ok(profile)
        } else {
            profile.with_residuals(residuals)
        }
    }
}

/// Builds the pair profile of `state` on `partition` for one measure.
pub fn pair_profile(
    state: &StateVector,
    partition: &Partition,
    params: &MeasureParams,
    cfg: &ConvexRoofConfig,
) -> Result<PairProfile> {
    ConcurrenceProfile::build(state, partition, cfg)
        .and_then(|c| c.to_pair_profile(params))
        .map_err(|e| match e {
            Error::Context { .. } => e,
            e => e.context(format!("profile on partition {:?}", partition.groups())),
        })
}
