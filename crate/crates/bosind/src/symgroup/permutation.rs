//! Elements of the symmetric group S_N in one-line notation.

use crate::error::{Error, Result};
use crate::symgroup::partition::Partition;

/// Full-group enumeration is guarded at this particle count; N! grows too
/// fast to be useful beyond it at desk scale.
pub const MAX_ENUM_N: usize = 8;

/// A permutation of `{1, ..., N}`, stored 0-based in one-line notation:
/// `map[i]` is the image of point `i`.
///
/// Composition follows the usual function convention
/// `(p ∘ q)(i) = p(q(i))`, i.e. `q` acts first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    /// Identity permutation on `n` points.
    pub fn identity(n: usize) -> Self {
        Permutation {
            map: (0..n).collect(),
        }
    }

    /// Builds a permutation from its one-line notation with 1-based images,
    /// e.g. `[2, 1, 3]` is the transposition (1 2) in S_3.
    pub fn from_one_line(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        let mut map = Vec::with_capacity(n);
        for &v in images {
            if v < 1 || v > n || seen[v - 1] {
                return Err(Error::Validation(format!(
                    "one-line notation {images:?} is not a bijection on 1..={n}"
                )));
            }
            seen[v - 1] = true;
            map.push(v - 1);
        }
        Ok(Permutation { map })
    }

    /// Builds a permutation from 0-based images. Internal constructor used
    /// by the enumeration routines; the input must be a bijection.
    pub(crate) fn from_map(map: Vec<usize>) -> Self {
        debug_assert!({
            let mut s = map.clone();
            s.sort_unstable();
            s.iter().enumerate().all(|(i, &v)| i == v)
        });
        Permutation { map }
    }

    /// The transposition exchanging the (1-based) points `a` and `b` in S_n.
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        if a < 1 || b < 1 || a > n || b > n || a == b {
            return Err(Error::Validation(format!(
                "transposition ({a} {b}) invalid in S_{n}"
            )));
        }
        let mut map: Vec<usize> = (0..n).collect();
        map.swap(a - 1, b - 1);
        Ok(Permutation { map })
    }

    /// Number of points the permutation acts on.
    pub fn n(&self) -> usize {
        self.map.len()
    }

    /// Image of the 0-based point `i`.
    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    /// One-line notation with 1-based images.
    pub fn one_line(&self) -> Vec<usize> {
        self.map.iter().map(|&v| v + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Function composition `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.n(), other.n(), "composition requires equal degree");
        Permutation {
            map: other.map.iter().map(|&j| self.map[j]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.n()];
        for (i, &v) in self.map.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { map: inv }
    }

    /// Sign of the permutation: `(-1)^t` with `t` the number of
    /// transpositions generating it.
    pub fn sign(&self) -> i64 {
        let mut sign = 1i64;
        let mut seen = vec![false; self.n()];
        for start in 0..self.n() {
            if seen[start] {
                continue;
            }
            let mut len = 0usize;
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                j = self.map[j];
                len += 1;
            }
            if len.is_multiple_of(2) {
                sign = -sign;
            }
        }
        sign
    }

    /// Cycle type as a decreasingly sorted partition of N. Conjugation
    /// invariant: it labels the conjugacy class of the permutation.
    pub fn cycle_type(&self) -> Partition {
        let mut lens = Vec::new();
        let mut seen = vec![false; self.n()];
        for start in 0..self.n() {
            if seen[start] {
                continue;
            }
            let mut len = 0usize;
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                j = self.map[j];
                len += 1;
            }
            lens.push(len);
        }
        lens.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(lens).expect("cycle lengths always form a partition")
    }

    /// Decomposes into adjacent transpositions `s_j = (j, j+1)` (1-based `j`)
    /// such that `self = s_{j_1} ∘ s_{j_2} ∘ ... ∘ s_{j_k}` under
    /// `(p ∘ q)(i) = p(q(i))`.
    pub fn adjacent_factors(&self) -> Vec<usize> {
        // Bubble-sorting the one-line word w by right-multiplications
        // w·s_j = id yields self = s_{j_k} ∘ ... ∘ s_{j_1}.
        let mut w = self.map.clone();
        let mut sorting = Vec::new();
        let n = w.len();
        loop {
            let mut swapped = false;
            for j in 0..n.saturating_sub(1) {
                if w[j] > w[j + 1] {
                    w.swap(j, j + 1);
                    sorting.push(j + 1);
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
        sorting.reverse();
        sorting
    }
}

impl std::fmt::Display for Permutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.one_line().iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// Enumerates all of S_n in lexicographic order of the one-line notation,
/// identity first. Guarded at [`MAX_ENUM_N`].
pub fn permutations(n: usize) -> Result<Vec<Permutation>> {
    if !(1..=MAX_ENUM_N).contains(&n) {
        return Err(Error::Size(format!(
            "group enumeration supports 1 <= n <= {MAX_ENUM_N}, got {n}"
        )));
    }
    let mut out = Vec::new();
    let mut w: Vec<usize> = (0..n).collect();
    loop {
        out.push(Permutation::from_map(w.clone()));
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| w[i] < w[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| w[j] > w[i]).unwrap();
        w.swap(i, j);
        w[i + 1..].reverse();
    }
    Ok(out)
}

/// All transpositions (i j), i < j, of S_n.
pub fn transpositions(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    for a in 1..=n {
        for b in (a + 1)..=n {
            out.push(Permutation::transposition(n, a, b).unwrap());
        }
    }
    out
}

/// Adjacent transpositions (1 2), (2 3), ..., (n-1 n): a generating set of
/// S_n, sufficient for invariance checks by group closure.
pub fn adjacent_transpositions(n: usize) -> Vec<Permutation> {
    (1..n)
        .map(|j| Permutation::transposition(n, j, j + 1).unwrap())
        .collect()
}
