use faer::{c64, Mat, MatRef};

/// Dense complex Hermitian matrix in the computational basis.
///
/// Builders only ever add Hermitian operator terms, so the stored matrix is
/// Hermitian up to rounding; [`HermitianMatrix::hermiticity_defect`] measures it.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    data: Mat<c64>,
}

impl HermitianMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            data: Mat::zeros(dim, dim),
        }
    }

    /// Wraps an existing square matrix without checking Hermiticity.
    pub fn from_mat(data: Mat<c64>) -> Self {
        assert_eq!(data.nrows(), data.ncols(), "matrix must be square");
        Self { data }
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> c64) -> Self {
        Self {
            data: Mat::from_fn(dim, dim, f),
        }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> c64 {
        self.data[(row, col)]
    }

    #[inline]
    pub(crate) fn add(&mut self, row: usize, col: usize, value: c64) {
        self.data[(row, col)] += value;
    }

    pub fn as_mat(&self) -> MatRef<'_, c64> {
        self.data.as_ref()
    }

    pub fn into_mat(self) -> Mat<c64> {
        self.data
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        let n = self.dim();
        let mut m = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                m = m.max(self.data[(i, j)].norm());
            }
        }
        m
    }

    /// `max |H − H†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut m = 0.0f64;
        for j in 0..n {
            for i in 0..=j {
                m = m.max((self.data[(i, j)] - self.data[(j, i)].conj()).norm());
            }
        }
        m
    }

    /// Largest imaginary part of any entry.
    pub fn max_imag(&self) -> f64 {
        let n = self.dim();
        let mut m = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                m = m.max(self.data[(i, j)].im.abs());
            }
        }
        m
    }

    pub fn trace(&self) -> c64 {
        (0..self.dim()).map(|i| self.data[(i, i)]).sum()
    }

    /// Real part as a dense real matrix.
    pub fn real_part(&self) -> Mat<f64> {
        Mat::from_fn(self.dim(), self.dim(), |i, j| self.data[(i, j)].re)
    }

    /// `D† H D` for a diagonal unitary `D = diag(phases)`.
    pub fn conjugate_by_phases(&self, phases: &[c64]) -> HermitianMatrix {
        assert_eq!(phases.len(), self.dim());
        HermitianMatrix::from_fn(self.dim(), |i, j| {
            phases[i].conj() * self.data[(i, j)] * phases[j]
        })
    }
}

impl std::ops::Add<&HermitianMatrix> for &HermitianMatrix {
    type Output = HermitianMatrix;

    fn add(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix {
            data: &self.data + &rhs.data,
        }
    }
}

impl std::ops::Sub<&HermitianMatrix> for &HermitianMatrix {
    type Output = HermitianMatrix;

    fn sub(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix {
            data: &self.data - &rhs.data,
        }
    }
}
