use nalgebra::DMatrix;

use crate::C64;

/// Dense operator on the truncated charge basis `n ∈ {−N, …, +N}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    n_cut: usize,
    matrix: DMatrix<C64>,
}

impl HermitianOperator {
    /// Wraps a matrix of dimension `2 n_cut + 1`. Hermiticity is the
    /// caller's responsibility; see [`HermitianOperator::hermiticity_error`].
    pub fn from_matrix(n_cut: usize, matrix: DMatrix<C64>) -> Self {
        assert_eq!(matrix.nrows(), 2 * n_cut + 1, "dimension must be 2N+1");
        assert!(matrix.is_square());
        Self { n_cut, matrix }
    }

    pub(crate) fn zeros(n_cut: usize) -> Self {
        let dim = 2 * n_cut + 1;
        Self {
            n_cut,
            matrix: DMatrix::zeros(dim, dim),
        }
    }

    pub fn n_cut(&self) -> usize {
        self.n_cut
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    /// Row index of charge state `n`.
    pub fn index_of(&self, n: i64) -> usize {
        (n + self.n_cut as i64) as usize
    }

    /// Charge value of row `i`.
    pub fn charge_of(&self, i: usize) -> i64 {
        i as i64 - self.n_cut as i64
    }

    /// `⟨m|A|n⟩` by charge labels.
    pub fn entry(&self, m: i64, n: i64) -> C64 {
        self.matrix[(self.index_of(m), self.index_of(n))]
    }

    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    /// `max |A − A†|` over all entries.
    pub fn hermiticity_error(&self) -> f64 {
        let m = &self.matrix;
        let mut worst = 0.0_f64;
        for j in 0..m.ncols() {
            for i in 0..=j {
                worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_error() <= 1e-12 * self.max_abs()
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// Sets `⟨m|A|n⟩ = value` and its Hermitian partner.
    pub(crate) fn set_pair(&mut self, row: usize, col: usize, value: C64) {
        self.matrix[(row, col)] = value;
        self.matrix[(col, row)] = value.conj();
    }

    pub(crate) fn set_diag(&mut self, i: usize, value: f64) {
        self.matrix[(i, i)] = C64::new(value, 0.0);
    }

    /// Expectation value `⟨ψ|A|ψ⟩` (real part).
    pub fn expectation(&self, psi: &nalgebra::DVector<C64>) -> f64 {
        psi.dotc(&(&self.matrix * psi)).re
    }
}
