//! Integer partitions / Young diagrams.

use crate::error::{Error, Result};
use num_rational::Ratio;

/// Exact rational number used for transposition eigenvalues and the
/// partition-indexed linear program.
pub type Rational = Ratio<i128>;

/// A partition λ ⊢ N: weakly decreasing positive integers summing to N.
///
/// Partitions label both the conjugacy classes of S_N (as cycle types) and
/// its irreducible representations (as Young diagrams).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

/// Cycle type of a permutation; structurally a partition of N recording the
/// cycle lengths in decreasing order.
pub type CycleType = Partition;

impl Partition {
    /// Validates weakly decreasing positive parts.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Validation(format!(
                "partition parts must be positive: {parts:?}"
            )));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Validation(format!(
                "partition parts must be weakly decreasing: {parts:?}"
            )));
        }
        Ok(Partition { parts })
    }

    /// The one-row partition (n).
    pub fn row(n: usize) -> Self {
        Partition { parts: vec![n] }
    }

    /// The one-column partition (1, ..., 1) of n.
    pub fn column(n: usize) -> Self {
        Partition { parts: vec![1; n] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of boxes N = Σ λ_i.
    pub fn n_boxes(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of rows (parts).
    pub fn rows(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Conjugate (transposed) diagram: λ'_j = #{i : λ_i > j}.
    pub fn conjugate(&self) -> Partition {
        if self.parts.is_empty() {
            return Partition { parts: vec![] };
        }
        let cols = self.parts[0];
        let parts = (0..cols)
            .map(|j| self.parts.iter().filter(|&&p| p > j).count())
            .collect();
        Partition { parts }
    }

    /// Hook length of the 0-based cell (i, j): arm + leg + 1.
    fn hook_len(&self, conj: &Partition, i: usize, j: usize) -> usize {
        (self.parts[i] - j) + (conj.parts[j] - i) - 1
    }

    /// Dimension d_λ of the S_N irrep labeled by λ, by the hook length
    /// formula d_λ = N! / ∏ hooks.
    pub fn hook_dimension(&self) -> usize {
        let n = self.n_boxes();
        let conj = self.conjugate();
        let mut num: u128 = 1;
        for k in 1..=n {
            num *= k as u128;
        }
        let mut den: u128 = 1;
        for (i, &row) in self.parts.iter().enumerate() {
            for j in 0..row {
                den *= self.hook_len(&conj, i, j) as u128;
            }
        }
        (num / den) as usize
    }

    /// Multiplicity of the λ-isotypic S_N component in (C^M)^⊗N: the number
    /// of semistandard tableaux of shape λ with entries in {1..M}, i.e. the
    /// dimension of the paired U(M) irrep, ∏_(i,j) (M + j - i) / hook(i, j).
    /// Zero when λ has more than M rows.
    pub fn tensor_multiplicity(&self, m: usize) -> usize {
        if self.rows() > m {
            return 0;
        }
        let conj = self.conjugate();
        let mut num: u128 = 1;
        let mut den: u128 = 1;
        for (i, &row) in self.parts.iter().enumerate() {
            for j in 0..row {
                num *= (m + j - i) as u128;
                den *= self.hook_len(&conj, i, j) as u128;
            }
        }
        (num / den) as usize
    }

    /// Eigenvalue of the transposition mean T on the λ-isotypic component:
    /// t_λ = (1/(N(N-1))) Σ_j [λ_j² - (2j-1) λ_j], exact in rationals.
    ///
    /// Requires N ≥ 2. Always lies in [-1, 1], with t_(N) = 1 and
    /// t_(1,...,1) = -1.
    pub fn transposition_eigenvalue(&self) -> Result<Rational> {
        let n = self.n_boxes() as i128;
        if n < 2 {
            return Err(Error::Domain(format!(
                "transposition eigenvalue needs N >= 2, got N = {n}"
            )));
        }
        let mut num: i128 = 0;
        for (idx, &l) in self.parts.iter().enumerate() {
            let j = (idx + 1) as i128;
            let l = l as i128;
            num += l * l - (2 * j - 1) * l;
        }
        Ok(Rational::new(num, n * (n - 1)))
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of `n` with at most `max_rows` rows, in reverse
/// lexicographic order starting at (n).
pub fn partitions(n: usize, max_rows: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    descend(n, n, max_rows, &mut current, &mut out);
    out
}

fn descend(
    remaining: usize,
    max_part: usize,
    rows_left: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Partition>,
) {
    if remaining == 0 {
        out.push(Partition {
            parts: current.clone(),
        });
        return;
    }
    if rows_left == 0 {
        return;
    }
    for part in (1..=remaining.min(max_part)).rev() {
        current.push(part);
        descend(remaining - part, part, rows_left - 1, current, out);
        current.pop();
    }
}
