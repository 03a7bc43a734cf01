//! Irreducible characters of S_N via the Murnaghan-Nakayama recursion.

use crate::error::{Error, Result};
use crate::symgroup::partition::{CycleType, Partition};
use std::cell::RefCell;
use std::collections::HashMap;

type MemoKey = (Vec<usize>, Vec<usize>);

thread_local! {
    // Memoization keyed on (λ, remaining cycle type). Thread-local keeps the
    // API reentrant without locking.
    static MEMO: RefCell<HashMap<MemoKey, i64>> = RefCell::new(HashMap::new());
}

/// χ_λ(μ): the character of the irrep labeled by λ ⊢ N at the conjugacy
/// class of cycle type μ ⊢ N.
///
/// Computed with the Murnaghan-Nakayama rule on beta-numbers: removing a
/// border strip of length r from λ corresponds to lowering one beta-number
/// by r, with the strip height read off from the number of beta-numbers
/// jumped over.
pub fn irrep_character(lam: &Partition, class: &CycleType) -> Result<i64> {
    if lam.n_boxes() != class.n_boxes() {
        return Err(Error::Shape(format!(
            "character requires |λ| = |μ|: {lam} vs {class}"
        )));
    }
    Ok(mn(lam.parts(), class.parts()))
}

fn mn(lam: &[usize], class: &[usize]) -> i64 {
    if lam.is_empty() {
        return 1;
    }
    let key = (lam.to_vec(), class.to_vec());
    if let Some(v) = MEMO.with(|m| m.borrow().get(&key).copied()) {
        return v;
    }

    let r = class[0];
    let rest = &class[1..];
    let k = lam.len();
    let beta: Vec<usize> = lam
        .iter()
        .enumerate()
        .map(|(i, &l)| l + (k - 1 - i))
        .collect();

    let mut total = 0i64;
    for (i, &b) in beta.iter().enumerate() {
        if b < r {
            continue;
        }
        let target = b - r;
        if beta.contains(&target) {
            continue;
        }
        // height = number of occupied beta-numbers strictly between
        // target and b
        let height = beta.iter().filter(|&&x| x > target && x < b).count();
        let sign = if height % 2 == 0 { 1 } else { -1 };

        let mut new_beta = beta.clone();
        new_beta[i] = target;
        new_beta.sort_unstable_by(|a, b| b.cmp(a));
        let mut new_lam: Vec<usize> = new_beta
            .iter()
            .enumerate()
            .map(|(j, &nb)| nb - (k - 1 - j))
            .collect();
        while new_lam.last() == Some(&0) {
            new_lam.pop();
        }
        total += sign * mn(&new_lam, rest);
    }

    MEMO.with(|m| m.borrow_mut().insert(key, total));
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symgroup::partition::partitions;
    use crate::symgroup::permutation::permutations;

    #[test]
    fn trivial_and_sign_representations() {
        for n in 1..=6 {
            for class in partitions(n, n) {
                assert_eq!(irrep_character(&Partition::row(n), &class).unwrap(), 1);
                // sign rep: (-1)^(N - number of cycles)
                let parity = (n - class.rows()) % 2;
                let expected = if parity == 0 { 1 } else { -1 };
                assert_eq!(
                    irrep_character(&Partition::column(n), &class).unwrap(),
                    expected
                );
            }
        }
    }

    #[test]
    fn two_one_character_of_s3() {
        let lam = Partition::new(vec![2, 1]).unwrap();
        let cases = [(vec![1, 1, 1], 2), (vec![2, 1], 0), (vec![3], -1)];
        for (class, expected) in cases {
            let mu = Partition::new(class).unwrap();
            assert_eq!(irrep_character(&lam, &mu).unwrap(), expected);
        }
    }

    #[test]
    fn identity_class_gives_dimension() {
        for n in 1..=7 {
            let id_class = Partition::column(n);
            for lam in partitions(n, n) {
                assert_eq!(
                    irrep_character(&lam, &id_class).unwrap(),
                    lam.hook_dimension() as i64
                );
            }
        }
    }

    #[test]
    fn characters_are_orthonormal() {
        // (1/N!) Σ_π χ_λ(π) χ_μ(π) = δ_λμ, by enumerating S_N
        for n in 2..=5usize {
            let group = permutations(n).unwrap();
            let fact = group.len() as i64;
            let lams = partitions(n, n);
            for a in &lams {
                for b in &lams {
                    let mut sum = 0i64;
                    for p in &group {
                        let class = p.cycle_type();
                        sum += irrep_character(a, &class).unwrap()
                            * irrep_character(b, &class).unwrap();
                    }
                    assert_eq!(sum % fact, 0);
                    assert_eq!(sum / fact, i64::from(a == b));
                }
            }
        }
    }

    #[test]
    fn sign_equals_column_character() {
        for p in permutations(5).unwrap() {
            assert_eq!(
                p.sign(),
                irrep_character(&Partition::column(5), &p.cycle_type()).unwrap()
            );
        }
    }

    #[test]
    fn mismatched_sizes_error() {
        let lam = Partition::row(3);
        let mu = Partition::row(4);
        assert!(irrep_character(&lam, &mu).is_err());
    }
}
