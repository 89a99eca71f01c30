//! Dense rank-3 tensors of rational functions and sparse defect reports.

use alloc::format;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::algebra::RatFun;
use crate::error::{CoreError, Result};

/// Dense `n x n x n` tensor `T[i][j][k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor3 {
    n: usize,
    data: Vec<RatFun>,
}

impl Tensor3 {
    pub fn zeros(n: usize) -> Self {
        Tensor3 { n, data: (0..n * n * n).map(|_| RatFun::zero(n)).collect() }
    }

    pub fn from_fn<F: FnMut(usize, usize, usize) -> RatFun>(n: usize, mut f: F) -> Self {
        let mut data = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    data.push(f(i, j, k));
                }
            }
        }
        Tensor3 { n, data }
    }

    /// Builds from sparse `(i, j, k, value)` entries; with `symmetric`, each
    /// entry also fills `(i, k, j)`, and conflicting duplicates are rejected.
    pub fn from_entries<I: IntoIterator<Item = (usize, usize, usize, RatFun)>>(
        n: usize,
        entries: I,
        symmetric: bool,
    ) -> Result<Self> {
        let mut t = Self::zeros(n);
        let mut seen = Vec::new();
        for (i, j, k, v) in entries {
            if i >= n || j >= n || k >= n {
                return Err(CoreError::Input(format!("index ({},{},{}) out of range 1..{}", i + 1, j + 1, k + 1, n)));
            }
            let mut slots = Vec::from([(i, j, k)]);
            if symmetric && j != k {
                slots.push((i, k, j));
            }
            for s in slots {
                if seen.contains(&s) && t[s] != v {
                    return Err(CoreError::Input(format!(
                        "conflicting values for index ({},{},{})",
                        s.0 + 1,
                        s.1 + 1,
                        s.2 + 1
                    )));
                }
                seen.push(s);
                t[s] = v.clone();
            }
        }
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(RatFun::is_zero)
    }

    pub fn is_symmetric_lower(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| (0..n).all(|j| (0..j).all(|k| self[(i, j, k)] == self[(i, k, j)])))
    }

    /// Nonzero entries in index order.
    pub fn nonzero(&self) -> impl Iterator<Item = ((usize, usize, usize), &RatFun)> {
        let n = self.n;
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(p, v)| ((p / (n * n), (p / n) % n, p % n), v))
    }
}

impl Index<(usize, usize, usize)> for Tensor3 {
    type Output = RatFun;
    fn index(&self, (i, j, k): (usize, usize, usize)) -> &RatFun {
        &self.data[(i * self.n + j) * self.n + k]
    }
}

impl IndexMut<(usize, usize, usize)> for Tensor3 {
    fn index_mut(&mut self, (i, j, k): (usize, usize, usize)) -> &mut RatFun {
        &mut self.data[(i * self.n + j) * self.n + k]
    }
}

/// Nonzero components of a tensor that should vanish, with 0-based indices.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Defect {
    pub entries: Vec<(Vec<usize>, RatFun)>,
}

impl Defect {
    pub fn new() -> Self {
        Defect { entries: Vec::new() }
    }

    pub fn push(&mut self, index: &[usize], value: RatFun) {
        if !value.is_zero() {
            self.entries.push((index.to_vec(), value));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}
