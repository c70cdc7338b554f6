//! Dense complex matrices on the truncated Fock space.

use std::ops::{Add, Mul, Sub};

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

/// A dim × dim complex matrix acting on truncated Fock vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    entries: Array2<C64>,
}

impl OperatorMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            entries: Array2::zeros((dim, dim)),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            entries: Array2::eye(dim),
        }
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.entries[[i, i]] = d;
        }
        m
    }

    pub fn from_array(entries: Array2<C64>) -> Self {
        assert_eq!(entries.nrows(), entries.ncols(), "matrix must be square");
        Self { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<C64> {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[[row, col]]
    }

    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        self.entries[[row, col]] = value;
    }

    pub fn adjoint(&self) -> Self {
        Self {
            entries: self.entries.t().mapv(|v| v.conj()),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            entries: &self.entries * s,
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        Self {
            entries: self.entries.dot(&other.entries),
        }
    }

    /// [self, other] = self·other − other·self.
    pub fn commutator(&self, other: &Self) -> Self {
        &self.matmul(other) - &other.matmul(self)
    }

    /// {self, other} = self·other + other·self.
    pub fn anticommutator(&self, other: &Self) -> Self {
        &self.matmul(other) + &other.matmul(self)
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let x = Array1::from(v.to_vec());
        self.entries.dot(&x).to_vec()
    }

    /// ⟨v|M|v⟩ (no normalization).
    pub fn expectation(&self, v: &[C64]) -> C64 {
        let mv = self.apply(v);
        v.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum()
    }

    /// Largest |self − other| over entries with row and column below `edge`.
    pub fn max_abs_diff_below(&self, other: &Self, edge: usize) -> f64 {
        let n = edge.min(self.dim()).min(other.dim());
        let mut m = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                m = m.max((self.entries[[i, j]] - other.entries[[i, j]]).norm());
            }
        }
        m
    }

    /// Leading `size` × `size` block.
    pub fn leading_block(&self, size: usize) -> Self {
        let n = size.min(self.dim());
        Self {
            entries: self.entries.slice(ndarray::s![..n, ..n]).to_owned(),
        }
    }
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: Self) -> OperatorMatrix {
        OperatorMatrix {
            entries: &self.entries + &rhs.entries,
        }
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: Self) -> OperatorMatrix {
        OperatorMatrix {
            entries: &self.entries - &rhs.entries,
        }
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: Self) -> OperatorMatrix {
        self.matmul(rhs)
    }
}
