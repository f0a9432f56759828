use nalgebra::{DMatrix, DVector};

use super::{PSD_TOL, STATE_TOL};
use crate::quantum::C64;
use crate::{Error, Result};

/// A normalised pure state.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: DVector<C64>,
}

impl StateVector {
    pub fn new(amplitudes: DVector<C64>) -> Result<Self> {
        let dim = amplitudes.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::InvalidState(format!("dimension {dim} is not a power of two")));
        }
        let norm = amplitudes.norm_squared();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("squared norm {norm} is not 1")));
        }
        Ok(Self { amplitudes })
    }

    /// Normalises `amplitudes` before validating.
    pub fn normalized(amplitudes: DVector<C64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        Self::new(amplitudes / C64::from(norm))
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix { entries: &self.amplitudes * self.amplitudes.adjoint() }
    }
}

/// A dense density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<C64>,
}

impl DensityMatrix {
    pub fn new(entries: DMatrix<C64>) -> Result<Self> {
        let rho = Self { entries };
        rho.validate()?;
        Ok(rho)
    }

    /// Skip validation; for matrices built by construction (sums of projectors).
    pub(crate) fn from_trusted(entries: DMatrix<C64>) -> Self {
        Self { entries }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self { entries: DMatrix::identity(dim, dim) / C64::from(dim as f64) }
    }

    pub fn validate(&self) -> Result<()> {
        let m = &self.entries;
        if !m.is_square() {
            return Err(Error::InvalidState(format!("{}x{} matrix is not square", m.nrows(), m.ncols())));
        }
        let herm_dev = (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm_dev > STATE_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {herm_dev:e})")));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        if let Some(&min) = self.eigenvalues().iter().min_by(|a, b| a.total_cmp(b)) {
            if min < -PSD_TOL {
                return Err(Error::NegativeEigenvalue(min));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<C64> {
        self.entries
    }

    pub fn trace(&self) -> C64 {
        self.entries.trace()
    }

    /// `tr(rho * op)`.
    pub fn expectation(&self, op: &DMatrix<C64>) -> C64 {
        // tr(AB) = sum_ij A_ij B_ji
        let n = self.dim();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += self.entries[(i, j)] * op[(j, i)];
            }
        }
        acc
    }

    /// `<v| rho |v>` (real part; rho is Hermitian).
    pub fn sandwich(&self, v: &DVector<C64>) -> f64 {
        (v.adjoint() * &self.entries * v)[(0, 0)].re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.entries)
    }
}

pub(crate) fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    m.clone().symmetric_eigenvalues().iter().copied().collect()
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(state: &DensityMatrix) -> Result<f64> {
    entropy_of_spectrum(&state.eigenvalues(), 1.0)
}

/// `-sum mu log2 mu` over `eigs / total`, clipping tiny negative values.
pub(crate) fn entropy_of_spectrum(eigs: &[f64], total: f64) -> Result<f64> {
    let mut s = 0.0;
    for &e in eigs {
        let mu = e / total;
        if mu < -PSD_TOL {
            return Err(Error::NegativeEigenvalue(mu));
        }
        if mu > 0.0 {
            s -= mu * mu.log2();
        }
    }
    Ok(s.max(0.0))
}

/// Trace out every subsystem not listed in `keep`.
///
/// `layout` gives the dimension of each tensor factor, most significant
/// first; `keep` lists the retained factors (any order, output ordered as
/// in the layout).
pub fn partial_trace(state: &DensityMatrix, layout: &[usize], keep: &[usize]) -> Result<DensityMatrix> {
    let entries = partial_trace_matrix(state.entries(), layout, keep)?;
    Ok(DensityMatrix { entries })
}

pub(crate) fn partial_trace_matrix(m: &DMatrix<C64>, layout: &[usize], keep: &[usize]) -> Result<DMatrix<C64>> {
    if layout.iter().any(|&d| d == 0) {
        return Err(Error::Layout("zero-dimensional factor".into()));
    }
    let total: usize = layout.iter().product();
    if total != m.nrows() {
        return Err(Error::Layout(format!("layout {layout:?} has dimension {total}, state has {}", m.nrows())));
    }
    let mut kept = vec![false; layout.len()];
    for &k in keep {
        if k >= layout.len() {
            return Err(Error::Layout(format!("subsystem {k} not in layout of {}", layout.len())));
        }
        if kept[k] {
            return Err(Error::Layout(format!("subsystem {k} listed twice")));
        }
        kept[k] = true;
    }

    // strides for the full index, most significant factor first
    let mut strides = vec![1usize; layout.len()];
    for i in (0..layout.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * layout[i + 1];
    }
    let keep_dims: Vec<usize> = (0..layout.len()).filter(|&i| kept[i]).map(|i| layout[i]).collect();
    let traced_dims: Vec<usize> = (0..layout.len()).filter(|&i| !kept[i]).map(|i| layout[i]).collect();
    let keep_strides: Vec<usize> = (0..layout.len()).filter(|&i| kept[i]).map(|i| strides[i]).collect();
    let traced_strides: Vec<usize> = (0..layout.len()).filter(|&i| !kept[i]).map(|i| strides[i]).collect();

    let offsets = |dims: &[usize], strides: &[usize]| -> Vec<usize> {
        let count: usize = dims.iter().product();
        (0..count)
            .map(|mut idx| {
                let mut off = 0;
                for i in (0..dims.len()).rev() {
                    off += (idx % dims[i]) * strides[i];
                    idx /= dims[i];
                }
                off
            })
            .collect()
    };
    let keep_off = offsets(&keep_dims, &keep_strides);
    let traced_off = offsets(&traced_dims, &traced_strides);

    let d = keep_off.len();
    let mut out = DMatrix::<C64>::zeros(d, d);
    for (i, &oi) in keep_off.iter().enumerate() {
        for (j, &oj) in keep_off.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for &t in &traced_off {
                acc += m[(oi + t, oj + t)];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}
