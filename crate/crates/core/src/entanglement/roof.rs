//! Direct convex-roof search over pure-state decompositions.
//!
//! Every decomposition `ρ = Σ_k |ψ̃_k⟩⟨ψ̃_k|` with `m` terms has the form
//! `ψ̃_k = Σ_j U_kj √λ_j |e_j⟩` for an `m × r` isometry `U` (`U†U = 1`),
//! where `λ_j, |e_j⟩` is the eigendecomposition of `ρ`. The roof is therefore
//! an optimization over the complex Stiefel manifold, done here with
//! projected gradient steps, a QR retraction and Armijo backtracking.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{check_cut, ConvexRoofConfig, Family, MeasureParams, RoofDirection, Variant};
use crate::qcore::{self, ComplexMatrix, C64};
use crate::states::DensityMatrix;
use crate::{Error, Result};

/// Eigenvalues below this (relative to the largest) are treated as zero when
/// forming the decomposition basis.
const RANK_TOL: f64 = 1e-12;
const SPECTRUM_FLOOR: f64 = 1e-12;
const ARMIJO_C: f64 = 1e-4;
const MIN_STEP: f64 = 1e-14;

/// Homogeneous (degree one) extension of a pure-state measure to
/// unnormalized states, written as a function of the reduced spectrum `μ`
/// with `P = Σμ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PureMeasure {
    /// `√(2(P² - Σμ²))`
    Concurrence,
    /// `(P - P^{1-q} Σμ^q)/(q-1)`
    Tsallis(f64),
    /// `P (log₂Σμ^α - α log₂P)/(1-α)`
    Renyi(f64),
}

impl PureMeasure {
    /// Value and `∂φ/∂μ_i`.
    fn eval(&self, mu: &[f64]) -> (f64, Vec<f64>) {
        let p: f64 = mu.iter().sum();
        if p <= 0.0 {
            return (0.0, vec![0.0; mu.len()]);
        }
        match *self {
            PureMeasure::Concurrence => {
                let sq: f64 = mu.iter().map(|m| m * m).sum();
                let phi = (2.0 * (p * p - sq)).max(0.0).sqrt();
                let grad = if phi > 1e-12 {
                    mu.iter().map(|m| 2.0 * (p - m) / phi).collect()
                } else {
                    vec![0.0; mu.len()]
                };
                (phi, grad)
            }
            PureMeasure::Tsallis(q) => {
                let s: f64 = mu.iter().filter(|&&m| m > 0.0).map(|m| m.powf(q)).sum();
                let phi = (p - p.powf(1.0 - q) * s) / (q - 1.0);
                let base = 1.0 - (1.0 - q) * p.powf(-q) * s;
                let grad = mu
                    .iter()
                    .map(|&m| {
                        let m = m.max(SPECTRUM_FLOOR * p);
                        (base - q * p.powf(1.0 - q) * m.powf(q - 1.0)) / (q - 1.0)
                    })
                    .collect();
                (phi, grad)
            }
            PureMeasure::Renyi(a) => {
                let ln2 = std::f64::consts::LN_2;
                let s: f64 = mu.iter().filter(|&&m| m > 0.0).map(|m| m.powf(a)).sum();
                let inner = s.log2() - a * p.log2();
                let phi = p * inner / (1.0 - a);
                let grad = mu
                    .iter()
                    .map(|&m| {
                        let m = m.max(SPECTRUM_FLOOR * p);
                        let d_inner = a * m.powf(a - 1.0) / (s * ln2) - a / (p * ln2);
                        (inner + p * d_inner) / (1.0 - a)
                    })
                    .collect();
                (phi, grad)
            }
        }
    }
}

/// Outcome of a roof search: the best value over all restarts.
#[derive(Debug, Clone, PartialEq)]
pub struct RoofEstimate {
    pub value: f64,
    /// Whether the restart that produced `value` met the stopping criterion.
    pub converged: bool,
    /// Iterations used by that restart.
    pub iterations: usize,
    pub restarts: usize,
}

struct Problem {
    /// `√λ_j e_j` reshaped to `d_a × d_b`.
    weights: Vec<ComplexMatrix>,
    measure: PureMeasure,
}

impl Problem {
    fn new(rho: &DensityMatrix, cut: &[usize], measure: PureMeasure) -> Result<Self> {
        let n = rho.dims().len();
        let cut = check_cut(cut, n)?;
        let mut order = cut.clone();
        order.extend((0..n).filter(|i| !cut.contains(i)));
        let (m, dims) = qcore::permute_matrix(rho.matrix(), rho.dims(), &order)?;
        let da: usize = dims.as_slice()[..cut.len()].iter().product();
        let db = dims.total() / da;
        let (values, vectors) = qcore::hermitian_eigen(&m)?;
        let values = qcore::clamp_psd(values)?;
        let top = values.first().copied().unwrap_or(0.0);
        let mut weights = Vec::new();
        for (j, &l) in values.iter().enumerate() {
            if l <= RANK_TOL * top.max(1.0) {
                continue;
            }
            let s = l.sqrt();
            let data = vectors.column(j).into_iter().map(|z| z * s).collect();
            weights.push(ComplexMatrix::from_vec(da, db, data)?);
        }
        if weights.is_empty() {
            return Err(Error::Validation("density matrix has zero trace".into()));
        }
        Ok(Problem { weights, measure })
    }

    fn rank(&self) -> usize {
        self.weights.len()
    }

    fn combine(&self, u: &ComplexMatrix, k: usize) -> ComplexMatrix {
        let w0 = &self.weights[0];
        let mut m = ComplexMatrix::zeros(w0.rows(), w0.cols());
        for (j, w) in self.weights.iter().enumerate() {
            let c = u[(k, j)];
            if c == C64::new(0.0, 0.0) {
                continue;
            }
            for a in 0..w.rows() {
                for b in 0..w.cols() {
                    m[(a, b)] += c * w[(a, b)];
                }
            }
        }
        m
    }

    fn value(&self, u: &ComplexMatrix) -> Result<f64> {
        let mut total = 0.0;
        for k in 0..u.rows() {
            let m = self.combine(u, k);
            let (mu, _) = reduced_spectrum(&m)?;
            total += self.measure.eval(&mu).0;
        }
        Ok(total)
    }

    /// Objective and its gradient with respect to `conj(U)`.
    fn value_and_grad(&self, u: &ComplexMatrix) -> Result<(f64, ComplexMatrix)> {
        let mut total = 0.0;
        let mut z = ComplexMatrix::zeros(u.rows(), u.cols());
        for k in 0..u.rows() {
            let m = self.combine(u, k);
            let (mu, basis) = reduced_spectrum(&m)?;
            let (phi, dphi) = self.measure.eval(&mu);
            total += phi;
            if dphi.iter().all(|&g| g == 0.0) {
                continue;
            }
            // ∂φ/∂M* = G M with G = V diag(φ') V† on the smaller side.
            let g = spectral_matrix(&basis, &dphi);
            let d = if m.rows() <= m.cols() {
                g.matmul(&m)?
            } else {
                m.matmul(&g)?
            };
            for (j, w) in self.weights.iter().enumerate() {
                let zkj: C64 = w.data().iter().zip(d.data()).map(|(wv, dv)| wv.conj() * dv).sum();
                z[(k, j)] = zkj;
            }
        }
        Ok((total, z))
    }
}

/// Spectrum of `M M†` (or `M† M`, whichever is smaller) with its eigenbasis.
fn reduced_spectrum(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let gram = if m.rows() <= m.cols() {
        m.matmul(&m.adjoint())?
    } else {
        m.adjoint().matmul(m)?
    };
    let (values, vectors) = qcore::hermitian_eigen(&gram)?;
    Ok((values.into_iter().map(|v| v.max(0.0)).collect(), vectors))
}

fn spectral_matrix(basis: &ComplexMatrix, diag: &[f64]) -> ComplexMatrix {
    let n = basis.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for (k, &d) in diag.iter().enumerate() {
        for i in 0..n {
            let vi = basis[(i, k)] * d;
            for j in 0..n {
                out[(i, j)] += vi * basis[(j, k)].conj();
            }
        }
    }
    out
}

fn frobenius_sq(m: &ComplexMatrix) -> f64 {
    m.data().iter().map(|z| z.norm_sqr()).sum()
}

/// Orthonormalizes the columns of `a` (modified Gram–Schmidt).
fn qr_retract(a: &ComplexMatrix) -> ComplexMatrix {
    let (rows, cols) = (a.rows(), a.cols());
    let mut q = a.clone();
    for j in 0..cols {
        for i in 0..j {
            let proj: C64 = (0..rows).map(|r| q[(r, i)].conj() * q[(r, j)]).sum();
            for r in 0..rows {
                let qi = q[(r, i)];
                q[(r, j)] -= proj * qi;
            }
        }
        let norm = (0..rows).map(|r| q[(r, j)].norm_sqr()).sum::<f64>().sqrt();
        for r in 0..rows {
            q[(r, j)] /= norm;
        }
    }
    q
}

/// Projection of `z` onto the tangent space of the Stiefel manifold at `u`.
fn tangent(u: &ComplexMatrix, z: &ComplexMatrix) -> Result<ComplexMatrix> {
    let a = u.adjoint().matmul(z)?;
    let sym = a.add(&a.adjoint())?.scale(C64::new(0.5, 0.0));
    z.add(&u.matmul(&sym)?.scale(C64::new(-1.0, 0.0)))
}

fn initial_isometry(m: usize, r: usize, seed: u64, restart: usize) -> ComplexMatrix {
    if restart == 0 {
        let mut u = ComplexMatrix::zeros(m, r);
        for j in 0..r {
            u[(j, j)] = C64::new(1.0, 0.0);
        }
        return u;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    let data = (0..m * r)
        .map(|_| C64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
        .collect();
    let a = ComplexMatrix::from_vec(m, r, data).expect("sized buffer");
    qr_retract(&a)
}

struct RestartResult {
    value: f64,
    converged: bool,
    iterations: usize,
}

fn run_restart(problem: &Problem, mut u: ComplexMatrix, cfg: &ConvexRoofConfig) -> Result<RestartResult> {
    let sign = match cfg.direction {
        RoofDirection::Minimize => -1.0,
        RoofDirection::Maximize => 1.0,
    };
    let (mut f, mut z) = problem.value_and_grad(&u)?;
    let mut step = 1.0;
    for it in 0..cfg.max_iters {
        let g = tangent(&u, &z)?;
        let gnorm_sq = frobenius_sq(&g);
        if gnorm_sq.sqrt() < cfg.tol {
            return Ok(RestartResult {
                value: f,
                converged: true,
                iterations: it,
            });
        }
        let dir = g.scale(C64::new(sign, 0.0));
        let mut accepted = None;
        while step >= MIN_STEP {
            let candidate = qr_retract(&u.add(&dir.scale(C64::new(step, 0.0)))?);
            let fc = problem.value(&candidate)?;
            if sign * (fc - f) >= ARMIJO_C * step * 2.0 * gnorm_sq {
                accepted = Some((candidate, fc));
                break;
            }
            step *= 0.5;
        }
        let Some((next, fc)) = accepted else {
            // no ascent direction left at this resolution
            return Ok(RestartResult {
                value: f,
                converged: true,
                iterations: it + 1,
            });
        };
        let gain = (fc - f).abs();
        u = next;
        let (fv, zv) = problem.value_and_grad(&u)?;
        f = fv;
        z = zv;
        if gain < cfg.tol * f.abs().max(1.0) {
            return Ok(RestartResult {
                value: f,
                converged: true,
                iterations: it + 1,
            });
        }
        step = (step * 2.0).min(1e3);
    }
    Ok(RestartResult {
        value: f,
        converged: false,
        iterations: cfg.max_iters,
    })
}

fn optimize(problem: &Problem, cfg: &ConvexRoofConfig) -> Result<RoofEstimate> {
    cfg.validate()?;
    let r = problem.rank();
    let m = cfg.ancilla_size.unwrap_or(r * r).max(1);
    if m < r {
        return Err(Error::Argument(format!("ancilla_size {m} is smaller than rank {r}")));
    }
    let mut best: Option<RestartResult> = None;
    for restart in 0..cfg.restarts {
        let u = initial_isometry(m, r, cfg.seed, restart);
        let res = run_restart(problem, u, cfg)?;
        let better = match &best {
            None => true,
            Some(b) => match cfg.direction {
                RoofDirection::Minimize => res.value < b.value,
                RoofDirection::Maximize => res.value > b.value,
            },
        };
        if better {
            best = Some(res);
        }
    }
    let best = best.expect("at least one restart");
    Ok(RoofEstimate {
        value: best.value,
        converged: best.converged,
        iterations: best.iterations,
        restarts: cfg.restarts,
    })
}

/// Optimizes `Σ_k p_k C(ψ_k)` over decompositions of `rho` across `cut | rest`,
/// in the direction given by `cfg.direction`.
pub fn convex_roof_concurrence(rho: &DensityMatrix, cut: &[usize], cfg: &ConvexRoofConfig) -> Result<RoofEstimate> {
    let problem = Problem::new(rho, cut, PureMeasure::Concurrence)?;
    optimize(&problem, cfg)
}

/// Evaluates the Tsallis or Rényi roof directly from the pure-state entropies
/// of each decomposition term: minimized for [`Variant::Standard`], maximized
/// for [`Variant::Assistance`]. `cfg.direction` is ignored.
pub fn convex_roof_measure(
    rho: &DensityMatrix,
    cut: &[usize],
    params: &MeasureParams,
    cfg: &ConvexRoofConfig,
) -> Result<RoofEstimate> {
    super::check_order(
        match params.family {
            Family::Tsallis => "q",
            Family::Renyi => "alpha",
        },
        params.parameter,
    )?;
    let measure = match params.family {
        Family::Tsallis => PureMeasure::Tsallis(params.parameter),
        Family::Renyi => PureMeasure::Renyi(params.parameter),
    };
    let direction = match params.variant {
        Variant::Standard => RoofDirection::Minimize,
        Variant::Assistance => RoofDirection::Maximize,
    };
    let cfg = ConvexRoofConfig {
        direction,
        ..cfg.clone()
    };
    let problem = Problem::new(rho, cut, measure)?;
    optimize(&problem, &cfg)
}
