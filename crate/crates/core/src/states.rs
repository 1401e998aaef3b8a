//! W-class, generalized W-class (GW) and GWV state constructors, partitions of
//! subsystems, coarse-graining and reduced density matrices.
//!
//! Subsystem `A_s` of the usual ket notation is index `s - 1` here, and
//! subsystem 0 is the most significant digit of a composite basis index, so
//! `|100⟩` is basis index 4.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::qcore::{self, ComplexMatrix, DimList, C64, HERMITIAN_TOL, PSD_TOL};
use crate::{Error, Result};

/// Tolerance on `⟨ψ|ψ⟩ = 1` for state vectors.
pub const NORM_TOL: f64 = 1e-10;

/// Tolerance on the normalization of GWV coefficients.
pub const COEFF_NORM_TOL: f64 = 1e-12;

/// Normalized pure state over a list of subsystem dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    dims: DimList,
    amps: Vec<C64>,
}

impl StateVector {
    pub fn new(dims: DimList, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != dims.total() {
            return Err(Error::Size(format!(
                "{} amplitudes for dims {:?}",
                amps.len(),
                dims.as_slice()
            )));
        }
        let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Validation(format!("state norm² is {norm}, not 1")));
        }
        Ok(StateVector { dims, amps })
    }

    /// Rescales `amps` to unit norm.
    pub fn normalized(dims: DimList, amps: Vec<C64>) -> Result<Self> {
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::Validation("zero vector cannot be normalized".into()));
        }
        Self::new(dims, amps.into_iter().map(|z| z / norm).collect())
    }

    pub fn dims(&self) -> &DimList {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    /// Amplitude of the basis state with the given per-subsystem digits.
    pub fn amplitude(&self, digits: &[usize]) -> C64 {
        self.amps[self.dims.compose(digits)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix {
            dims: self.dims.clone(),
            matrix: ComplexMatrix::outer(&self.amps),
        }
    }

    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut dims = self.dims.as_slice().to_vec();
        dims.extend_from_slice(other.dims.as_slice());
        StateVector {
            dims: DimList::new(dims).expect("factor dims are valid"),
            amps: qcore::tensor_vectors(&self.amps, &other.amps),
        }
    }
}

/// Hermitian, unit-trace, positive-semidefinite operator with its subsystem dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: DimList,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(dims: DimList, matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() != dims.total() {
            return Err(Error::Size(format!(
                "operator is {}x{} but dims {:?} need {}",
                matrix.rows(),
                matrix.cols(),
                dims.as_slice(),
                dims.total()
            )));
        }
        let defect = matrix.hermiticity_defect();
        if defect > PSD_TOL {
            return Err(Error::Validation(format!(
                "density matrix is not Hermitian (defect {defect:e})"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > PSD_TOL || tr.im.abs() > PSD_TOL {
            return Err(Error::Validation(format!("density matrix trace is {tr}")));
        }
        qcore::psd_eigenvalues(&matrix)?;
        let matrix = if defect > HERMITIAN_TOL {
            matrix.hermitian_part()
        } else {
            matrix
        };
        Ok(DensityMatrix { dims, matrix })
    }

    /// Trusted constructor for operators built from a valid state.
    pub(crate) fn from_parts(dims: DimList, matrix: ComplexMatrix) -> Self {
        debug_assert_eq!(matrix.rows(), dims.total());
        DensityMatrix { dims, matrix }
    }

    pub fn dims(&self) -> &DimList {
        &self.dims
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Number of eigenvalues above `tol`.
    pub fn rank(&self, tol: f64) -> Result<usize> {
        Ok(qcore::psd_eigenvalues(&self.matrix)?
            .into_iter()
            .filter(|&l| l > tol)
            .count())
    }

    /// Reduced state on the `keep` subsystems.
    pub fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let keep = qcore::normalize_index_set(keep, self.dims.len())?;
        let m = qcore::partial_trace(&self.matrix, &self.dims, &keep)?;
        Ok(DensityMatrix::from_parts(DimList::new(self.dims.select(&keep))?, m))
    }
}

/// Parameters of a GWV state `√p |W_n^d⟩ + √(1-p) |0…0⟩`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GwvSpec {
    pub n: usize,
    pub d: usize,
    /// `coeffs[s][i - 1]` multiplies the ket with level `i` on subsystem `s`.
    pub coeffs: Vec<Vec<Complex64>>,
    pub p: f64,
}

impl GwvSpec {
    pub fn new(n: usize, d: usize, coeffs: Vec<Vec<C64>>, p: f64) -> Result<Self> {
        let spec = GwvSpec { n, d, coeffs, p };
        spec.validate()?;
        Ok(spec)
    }

    /// n-qubit W-class state with real amplitudes `a_s` (slot order).
    pub fn w_class(amps: &[f64]) -> Result<Self> {
        Self::new(
            amps.len(),
            2,
            amps.iter().map(|&a| vec![C64::new(a, 0.0)]).collect(),
            1.0,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Validation(format!("n = {} < 2", self.n)));
        }
        if self.d < 2 {
            return Err(Error::Validation(format!("d = {} < 2", self.d)));
        }
        if self.coeffs.len() != self.n || self.coeffs.iter().any(|row| row.len() != self.d - 1) {
            return Err(Error::Validation(format!(
                "coefficients must be an {} x {} table",
                self.n,
                self.d - 1
            )));
        }
        let norm: f64 = self.coeffs.iter().flatten().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > COEFF_NORM_TOL {
            return Err(Error::Validation(format!("Σ|a_si|² = {norm}, expected 1")));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::Validation(format!("p = {} outside [0, 1]", self.p)));
        }
        Ok(())
    }

    /// `Σ_i |a_si|²`, the excitation weight carried by subsystem `s`.
    pub fn slot_weight(&self, s: usize) -> f64 {
        self.coeffs[s].iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Builds `√p |W_n^d⟩ + √(1-p) |0…0⟩` in the computational basis.
pub fn build_gwv(spec: &GwvSpec) -> Result<StateVector> {
    spec.validate()?;
    let dims = DimList::uniform(spec.n, spec.d)?;
    let mut amps = vec![C64::new(0.0, 0.0); dims.total()];
    let sp = spec.p.sqrt();
    amps[0] = C64::new((1.0 - spec.p).sqrt(), 0.0);
    let mut digits = vec![0usize; spec.n];
    for (s, row) in spec.coeffs.iter().enumerate() {
        for (i, &a) in row.iter().enumerate() {
            digits[s] = i + 1;
            amps[dims.compose(&digits)] += a * sp;
            digits[s] = 0;
        }
    }
    StateVector::new(dims, amps)
}

/// Ordered grouping `[P, P_0, …, P_{r-1}]` of a chosen set of subsystems.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    groups: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t: Option<usize>,
}

impl Partition {
    pub fn new(groups: Vec<Vec<usize>>, t: Option<usize>) -> Result<Self> {
        let p = Partition { groups, t };
        p.validate()?;
        Ok(p)
    }

    /// One subsystem per group: `[{0}, {1}, …, {n-1}]`.
    pub fn singletons(n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| vec![i]).collect(), None)
    }

    pub fn validate(&self) -> Result<()> {
        if self.groups.len() < 2 {
            return Err(Error::Validation(
                "a partition needs the anchor P and at least one P_j".into(),
            ));
        }
        if self.groups.iter().any(|g| g.is_empty()) {
            return Err(Error::Validation("partition groups must be nonempty".into()));
        }
        let all = self.subsystems();
        let count: usize = self.groups.iter().map(Vec::len).sum();
        if all.len() != count {
            return Err(Error::Validation(format!(
                "partition groups {:?} are not disjoint",
                self.groups
            )));
        }
        if let Some(t) = self.t {
            let r = self.r();
            if r < 3 || t > r - 3 {
                return Err(Error::Validation(format!(
                    "split index t = {t} needs r >= 3 and t <= r - 3 (r = {r})"
                )));
            }
        }
        Ok(())
    }

    /// Checks that every index refers to one of `n` subsystems.
    pub fn validate_for(&self, n: usize) -> Result<()> {
        match self.subsystems().last() {
            Some(&max) if max >= n => Err(Error::Validation(format!(
                "partition mentions subsystem {max} but the state has {n}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn anchor(&self) -> &[usize] {
        &self.groups[0]
    }

    /// `P_0, …, P_{r-1}`.
    pub fn parts(&self) -> &[Vec<usize>] {
        &self.groups[1..]
    }

    pub fn r(&self) -> usize {
        self.groups.len() - 1
    }

    pub fn t(&self) -> Option<usize> {
        self.t
    }

    /// Sorted union of all groups.
    pub fn subsystems(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.groups.iter().flatten().copied().collect();
        all.sort_unstable();
        all.dedup();
        all
    }

    /// Subsystem order that lists groups consecutively, ascending inside each group.
    fn grouped_order(&self) -> Vec<usize> {
        self.groups
            .iter()
            .flat_map(|g| {
                let mut g = g.clone();
                g.sort_unstable();
                g
            })
            .collect()
    }

    /// Re-expresses the groups in the positions of `support` (sorted).
    fn relabel(&self, support: &[usize]) -> Vec<Vec<usize>> {
        self.groups
            .iter()
            .map(|g| {
                g.iter()
                    .map(|s| support.binary_search(s).expect("group inside support"))
                    .collect()
            })
            .collect()
    }
}

fn composite_dims(dims: &DimList, groups: &[Vec<usize>]) -> Result<DimList> {
    DimList::new(
        groups
            .iter()
            .map(|g| g.iter().map(|&s| dims.as_slice()[s]).product())
            .collect(),
    )
}

fn check_cover(partition: &Partition, n: usize) -> Result<()> {
    if partition.subsystems() != (0..n).collect::<Vec<_>>() {
        return Err(Error::Validation(format!(
            "partition {:?} does not cover all {n} subsystems",
            partition.groups()
        )));
    }
    Ok(())
}

/// Re-indexes a pure state so each group becomes one composite subsystem.
pub fn coarse_grain(state: &StateVector, partition: &Partition) -> Result<StateVector> {
    partition.validate()?;
    check_cover(partition, state.dims().len())?;
    let order = partition.grouped_order();
    let (amps, permuted) = qcore::permute_vector(state.amplitudes(), state.dims(), &order)?;
    debug_assert_eq!(permuted.total(), state.dims().total());
    let dims = composite_dims(state.dims(), partition.groups())?;
    Ok(StateVector { dims, amps })
}

/// Mixed-state analogue of [`coarse_grain`].
pub fn coarse_grain_density(rho: &DensityMatrix, partition: &Partition) -> Result<DensityMatrix> {
    partition.validate()?;
    check_cover(partition, rho.dims().len())?;
    let order = partition.grouped_order();
    let (m, _) = qcore::permute_matrix(rho.matrix(), rho.dims(), &order)?;
    let dims = composite_dims(rho.dims(), partition.groups())?;
    Ok(DensityMatrix::from_parts(dims, m))
}

/// `Tr_{complement(keep)} |ψ⟩⟨ψ|`, kept subsystems in ascending order.
pub fn reduce(state: &StateVector, keep: &[usize]) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return Err(Error::Argument("keep set is empty".into()));
    }
    let keep = qcore::normalize_index_set(keep, state.dims().len())?;
    let dims = DimList::new(state.dims().select(&keep))?;
    if keep.len() == state.dims().len() {
        return Ok(state.projector());
    }
    // Contract the traced digits directly from the amplitudes: cheaper than
    // forming the full projector.
    let traced: Vec<usize> = (0..state.dims().len()).filter(|i| !keep.contains(i)).collect();
    let traced_dims = DimList::new(state.dims().select(&traced))?;
    let dk = dims.total();
    let dt = traced_dims.total();
    let mut block = vec![C64::new(0.0, 0.0); dk * dt];
    let mut digits = vec![0usize; state.dims().len()];
    for a in 0..dk {
        for (&slot, v) in keep.iter().zip(dims.digits(a)) {
            digits[slot] = v;
        }
        for t in 0..dt {
            for (&slot, v) in traced.iter().zip(traced_dims.digits(t)) {
                digits[slot] = v;
            }
            block[a * dt + t] = state.amplitude(&digits);
        }
    }
    let mut m = ComplexMatrix::zeros(dk, dk);
    for a in 0..dk {
        for b in a..dk {
            let v: C64 = (0..dt).map(|t| block[a * dt + t] * block[b * dt + t].conj()).sum();
            m[(a, b)] = v;
            m[(b, a)] = v.conj();
        }
    }
    Ok(DensityMatrix::from_parts(dims, m))
}

/// Reduces onto the union of the partition's groups and coarse-grains, giving
/// a state on `r + 1` composite subsystems `[P, P_0, …, P_{r-1}]`.
pub fn reduce_to_partition(state: &StateVector, partition: &Partition) -> Result<DensityMatrix> {
    partition.validate()?;
    partition.validate_for(state.dims().len())?;
    let support = partition.subsystems();
    let rho = reduce(state, &support)?;
    let local = Partition::new(partition.relabel(&support), None)?;
    coarse_grain_density(&rho, &local)
}
