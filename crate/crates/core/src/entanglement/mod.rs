//! Concurrence and the Tsallis-q / Rényi-α entanglement measures.
//!
//! On GWV states and their reductions both measures are functions of the
//! squared concurrence: `T_q = g_q(C²)` and `E_α = f_α(C²)` inside the
//! parameter intervals below. [`measure`] uses that analytic route;
//! [`convex_roof_measure`] evaluates the roof directly and serves as an
//! independent check.

mod roof;

use serde::{Deserialize, Serialize};

use crate::qcore::{self, ComplexMatrix, C64};
use crate::states::{self, DensityMatrix, StateVector};
use crate::{Error, Result};

pub use roof::{convex_roof_concurrence, convex_roof_measure, PureMeasure, RoofEstimate};

/// `(5 - √13) / 2`.
pub const TSALLIS_MIN: f64 = 0.697_224_362_268_005_4;
/// `(5 + √13) / 2`.
pub const TSALLIS_MAX: f64 = 4.302_775_637_731_995;
/// `(√7 - 1) / 2`.
pub const RENYI_MIN: f64 = 0.822_875_655_532_295_2;
/// `(√13 - 1) / 2`, upper end of the Rényi assistance interval.
pub const RENYI_ASSIST_MAX: f64 = 1.302_775_637_731_994_6;

/// Relative floor applied to the spectrum of `√ρ ρ̃ √ρ`.
const WOOTTERS_NOISE: f64 = 1e-14;

/// Slack allowed when `x = C²` leaves `[0, 1]` through rounding.
pub const UNIT_INTERVAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Tsallis,
    Renyi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Convex roof (minimum over decompositions).
    Standard,
    /// Entanglement of assistance (maximum over decompositions).
    Assistance,
}

/// Which measure to evaluate: family, its parameter `q` or `α`, and variant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureParams {
    pub family: Family,
    pub parameter: f64,
    pub variant: Variant,
}

impl MeasureParams {
    pub fn tsallis(q: f64, variant: Variant) -> Self {
        MeasureParams {
            family: Family::Tsallis,
            parameter: q,
            variant,
        }
    }

    pub fn renyi(alpha: f64, variant: Variant) -> Self {
        MeasureParams {
            family: Family::Renyi,
            parameter: alpha,
            variant,
        }
    }

    /// Checks the parameter against the interval on which the analytic
    /// relation with concurrence holds for this family and variant.
    pub fn validate(&self) -> Result<()> {
        let x = self.parameter;
        let name = match self.family {
            Family::Tsallis => "q",
            Family::Renyi => "alpha",
        };
        if !x.is_finite() || x == 1.0 {
            return Err(Error::range(name, x, "finite and != 1"));
        }
        let (ok, range) = match (self.family, self.variant) {
            (Family::Tsallis, Variant::Standard) => (
                (TSALLIS_MIN..=TSALLIS_MAX).contains(&x),
                "[(5-√13)/2, (5+√13)/2] ≈ [0.6972, 4.3028]",
            ),
            (Family::Tsallis, Variant::Assistance) => (
                (TSALLIS_MIN..=2.0).contains(&x) || (3.0..=TSALLIS_MAX).contains(&x),
                "[(5-√13)/2, 2] ∪ [3, (5+√13)/2] ≈ [0.6972, 2] ∪ [3, 4.3028]",
            ),
            (Family::Renyi, Variant::Standard) => (x >= RENYI_MIN, "[(√7-1)/2, ∞) ≈ [0.8229, ∞)"),
            (Family::Renyi, Variant::Assistance) => (
                (RENYI_MIN..=RENYI_ASSIST_MAX).contains(&x),
                "[(√7-1)/2, (√13-1)/2] ≈ [0.8229, 1.3028]",
            ),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::range(name, x, range))
        }
    }

    /// The analytic map from squared concurrence to this measure.
    pub fn from_squared_concurrence(&self, x: f64) -> Result<f64> {
        match self.family {
            Family::Tsallis => g_q(x, self.parameter),
            Family::Renyi => f_alpha(x, self.parameter),
        }
    }
}

/// Direction of a roof optimization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoofDirection {
    Minimize,
    Maximize,
}

/// Settings for the numerical convex-roof search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ConvexRoofConfig {
    /// Decomposition cardinality; `None` means `rank(ρ)²`.
    pub ancilla_size: Option<usize>,
    pub restarts: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: u64,
    pub direction: RoofDirection,
}

impl Default for ConvexRoofConfig {
    fn default() -> Self {
        ConvexRoofConfig {
            ancilla_size: None,
            restarts: 16,
            max_iters: 2000,
            tol: 1e-8,
            seed: 0,
            direction: RoofDirection::Minimize,
        }
    }
}

impl ConvexRoofConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::Argument("restarts must be >= 1".into()));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::Argument(format!("tol = {} must be > 0", self.tol)));
        }
        if self.ancilla_size == Some(0) {
            return Err(Error::Argument("ancilla_size must be >= 1".into()));
        }
        Ok(())
    }
}

/// A pure or mixed input to [`measure`] and [`concurrence`].
#[derive(Debug, Clone, Copy)]
pub enum StateRef<'a> {
    Pure(&'a StateVector),
    Mixed(&'a DensityMatrix),
}

impl StateRef<'_> {
    pub fn subsystem_count(&self) -> usize {
        match self {
            StateRef::Pure(s) => s.dims().len(),
            StateRef::Mixed(r) => r.dims().len(),
        }
    }
}

fn clamp_unit(x: f64) -> Result<f64> {
    if !(-UNIT_INTERVAL_TOL..=1.0 + UNIT_INTERVAL_TOL).contains(&x) {
        return Err(Error::Domain {
            value: x,
            domain: "[0, 1]".into(),
        });
    }
    Ok(x.clamp(0.0, 1.0))
}

fn check_order(name: &str, v: f64) -> Result<()> {
    if v.is_nan() || v <= 0.0 || v == 1.0 || !v.is_finite() {
        return Err(Error::Domain {
            value: v,
            domain: format!("{name} > 0, {name} != 1"),
        });
    }
    Ok(())
}

/// `g_q(x) = [1 - ((1+√(1-x))/2)^q - ((1-√(1-x))/2)^q] / (q-1)`.
pub fn g_q(x: f64, q: f64) -> Result<f64> {
    check_order("q", q)?;
    let x = clamp_unit(x)?;
    let s = (1.0 - x).sqrt();
    let hi = (1.0 + s) / 2.0;
    let lo = (1.0 - s) / 2.0;
    Ok((1.0 - hi.powf(q) - lo.powf(q)) / (q - 1.0))
}

/// `f_α(x) = log₂[((1-√(1-x))/2)^α + ((1+√(1-x))/2)^α] / (1-α)`.
pub fn f_alpha(x: f64, alpha: f64) -> Result<f64> {
    check_order("alpha", alpha)?;
    let x = clamp_unit(x)?;
    let s = (1.0 - x).sqrt();
    let hi = (1.0 + s) / 2.0;
    let lo = (1.0 - s) / 2.0;
    Ok((lo.powf(alpha) + hi.powf(alpha)).log2() / (1.0 - alpha))
}

fn check_cut(cut: &[usize], n: usize) -> Result<Vec<usize>> {
    let cut = qcore::normalize_index_set(cut, n)?;
    if cut.is_empty() || cut.len() == n {
        return Err(Error::Argument(format!(
            "cut {cut:?} must be a proper nonempty subset of {n} subsystems"
        )));
    }
    Ok(cut)
}

/// `C(|ψ⟩) = √(2(1 - tr ρ_A²))` across the bipartition `cut | rest`.
pub fn pure_concurrence(state: &StateVector, cut: &[usize]) -> Result<f64> {
    let cut = check_cut(cut, state.dims().len())?;
    let rho = states::reduce(state, &cut)?;
    let purity = qcore::spectral_power_trace(rho.matrix(), 2.0)?;
    Ok((2.0 * (1.0 - purity)).max(0.0).sqrt())
}

/// `σ_y ⊗ σ_y` in the computational basis.
fn spin_flip() -> ComplexMatrix {
    let mut y = ComplexMatrix::zeros(4, 4);
    y[(0, 3)] = C64::new(-1.0, 0.0);
    y[(1, 2)] = C64::new(1.0, 0.0);
    y[(2, 1)] = C64::new(1.0, 0.0);
    y[(3, 0)] = C64::new(-1.0, 0.0);
    y
}

/// Closed-form concurrence of a two-qubit state: `max(0, λ₁ - λ₂ - λ₃ - λ₄)`
/// with `λᵢ` the decreasing square roots of the eigenvalues of `ρ ρ̃`,
/// `ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`.
pub fn wootters_concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.dims().as_slice() != [2, 2] {
        return Err(Error::Size(format!(
            "Wootters concurrence needs a two-qubit state, got dims {:?}",
            rho.dims().as_slice()
        )));
    }
    let m = rho.matrix();
    qcore::psd_eigenvalues(m)?;
    let y = spin_flip();
    let flipped = y.matmul(&m.conj())?.matmul(&y)?;
    // ρρ̃ shares its spectrum with the Hermitian √ρ ρ̃ √ρ.
    let sqrt_rho = qcore::hermitian_function(m, |l| l.max(0.0).sqrt())?;
    let r = sqrt_rho.matmul(&flipped)?.matmul(&sqrt_rho)?;
    let (values, _) = qcore::hermitian_eigen(&r)?;
    // Round-off eigenvalues (~1e-17) would survive the square root as ~1e-9.
    let floor = WOOTTERS_NOISE * values[0].max(0.0);
    let l: Vec<f64> = values.iter().map(|&v| if v > floor { v.sqrt() } else { 0.0 }).collect();
    Ok((l[0] - l[1] - l[2] - l[3]).max(0.0))
}

/// Concurrence across `cut | rest`: exact for pure input, Wootters for
/// two-qubit mixed input, otherwise the minimizing convex roof.
pub fn concurrence(input: StateRef<'_>, cut: &[usize], cfg: &ConvexRoofConfig) -> Result<f64> {
    match input {
        StateRef::Pure(state) => pure_concurrence(state, cut),
        StateRef::Mixed(rho) => {
            check_cut(cut, rho.dims().len())?;
            if rho.dims().as_slice() == [2, 2] {
                wootters_concurrence(rho)
            } else {
                let cfg = ConvexRoofConfig {
                    direction: RoofDirection::Minimize,
                    ..cfg.clone()
                };
                Ok(convex_roof_concurrence(rho, cut, &cfg)?.value)
            }
        }
    }
}

/// Tsallis-q or Rényi-α entanglement (or its assistance dual) of a GWV state
/// or a reduction of one, through `g_q(C²)` / `f_α(C²)`.
pub fn measure(input: StateRef<'_>, cut: &[usize], params: &MeasureParams, cfg: &ConvexRoofConfig) -> Result<f64> {
    params.validate()?;
    let c = concurrence(input, cut, cfg)?;
    params.from_squared_concurrence(c * c)
}

/// `S_q(ρ) = (1 - tr ρ^q)/(q - 1)`.
pub fn tsallis_entropy(rho: &ComplexMatrix, q: f64) -> Result<f64> {
    check_order("q", q)?;
    Ok((1.0 - qcore::spectral_power_trace(rho, q)?) / (q - 1.0))
}

/// `S_α(ρ) = log₂(tr ρ^α)/(1 - α)`.
pub fn renyi_entropy(rho: &ComplexMatrix, alpha: f64) -> Result<f64> {
    check_order("alpha", alpha)?;
    Ok(qcore::spectral_power_trace(rho, alpha)?.log2() / (1.0 - alpha))
}
