use serde::{Deserialize, Serialize};

use super::{PtError, Result};
use crate::{CMatrix, CVector, Complex64};

/// A real symmetric involution given as a signed permutation.
///
/// Row `k` has a single nonzero entry `signs[k]` in column `perm[k]`. The
/// serialized form is the 1-based signed list, e.g. `[2, 1]` for the 2×2
/// exchange matrix and `[1, -2]` for `diag(1, −1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct ParityMatrix {
    perm: Vec<usize>,
    negative: Vec<bool>,
}

impl ParityMatrix {
    pub fn from_signed_permutation(list: &[i64]) -> Result<Self> {
        let n = list.len();
        if n == 0 {
            return Err(PtError::InvalidParity("empty permutation".into()));
        }
        let mut perm = Vec::with_capacity(n);
        let mut negative = Vec::with_capacity(n);
        for &e in list {
            let j = e.unsigned_abs() as usize;
            if j == 0 || j > n {
                return Err(PtError::InvalidParity(format!("entry {e} out of range 1..={n}")));
            }
            perm.push(j - 1);
            negative.push(e < 0);
        }
        for k in 0..n {
            let j = perm[k];
            if perm[j] != k {
                return Err(PtError::InvalidParity(format!(
                    "not an involution: {} -> {} -> {}",
                    k + 1,
                    j + 1,
                    perm[j] + 1
                )));
            }
            if negative[j] != negative[k] {
                return Err(PtError::InvalidParity(format!(
                    "rows {} and {} carry opposite signs, so the matrix is not symmetric",
                    k + 1,
                    j + 1
                )));
            }
        }
        Ok(Self { perm, negative })
    }

    /// The anti-diagonal exchange matrix, `x ↦ −x` on a symmetric grid.
    pub fn exchange(dim: usize) -> Self {
        Self {
            perm: (0..dim).rev().collect(),
            negative: vec![false; dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            perm: (0..dim).collect(),
            negative: vec![false; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn signed_permutation(&self) -> Vec<i64> {
        self.perm
            .iter()
            .zip(&self.negative)
            .map(|(&j, &neg)| if neg { -(j as i64 + 1) } else { j as i64 + 1 })
            .collect()
    }

    pub fn matrix(&self) -> CMatrix {
        let n = self.dim();
        let mut m = CMatrix::zeros(n, n);
        for k in 0..n {
            m[(k, self.perm[k])] = Complex64::new(self.sign(k), 0.0);
        }
        m
    }

    fn sign(&self, k: usize) -> f64 {
        if self.negative[k] {
            -1.0
        } else {
            1.0
        }
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        CVector::from_fn(self.dim(), |k, _| v[self.perm[k]] * self.sign(k))
    }

    /// `P · M · P`, computed by permutation.
    pub fn conjugate(&self, m: &CMatrix) -> CMatrix {
        let n = self.dim();
        CMatrix::from_fn(n, n, |i, j| m[(self.perm[i], self.perm[j])] * (self.sign(i) * self.sign(j)))
    }
}

impl TryFrom<Vec<i64>> for ParityMatrix {
    type Error = PtError;
    fn try_from(list: Vec<i64>) -> Result<Self> {
        Self::from_signed_permutation(&list)
    }
}

impl From<ParityMatrix> for Vec<i64> {
    fn from(p: ParityMatrix) -> Self {
        p.signed_permutation()
    }
}
