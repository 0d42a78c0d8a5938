//! Lyndon words over an ordered alphabet of `usize` symbols.
//!
//! A Lyndon word is strictly smaller (lexicographically) than all of its
//! proper rotations; equivalently, strictly smaller than all of its proper
//! suffixes. Lyndon words index a basis of the free Lie algebra through
//! their standard bracketing.

use crate::error::{Error, Result};

pub type LyndonWord = Vec<usize>;

/// Size guard for basis enumeration.
pub const MAX_WORD_LEN: usize = 12;

pub fn is_lyndon(w: &[usize]) -> bool {
    if w.is_empty() {
        return false;
    }
    for i in 1..w.len() {
        if w[i..] <= *w {
            return false;
        }
    }
    true
}

/// Standard (right) factorization `w = u v` of a Lyndon word of length >= 2:
/// `v` is the lexicographically least proper suffix, which is the longest
/// proper Lyndon suffix.
pub fn std_factorization(w: &[usize]) -> (LyndonWord, LyndonWord) {
    debug_assert!(w.len() >= 2 && is_lyndon(w));
    let mut best = 1;
    for i in 2..w.len() {
        if w[i..] < w[best..] {
            best = i;
        }
    }
    (w[..best].to_vec(), w[best..].to_vec())
}

/// All Lyndon words where letter `i+1` occurs exactly `multidegree[i]` times
/// (letters are 1-based here, matching generator indices).
pub fn lyndon_basis(n_letters: usize, multidegree: &[usize]) -> Result<Vec<LyndonWord>> {
    if multidegree.len() != n_letters {
        return Err(Error::SizeMismatch(format!(
            "multidegree length {} for {} letters",
            multidegree.len(),
            n_letters
        )));
    }
    let total: usize = multidegree.iter().sum();
    if total > MAX_WORD_LEN {
        return Err(Error::CapExceeded(format!(
            "total degree {total} exceeds {MAX_WORD_LEN}"
        )));
    }
    let mut pool: Vec<usize> = Vec::with_capacity(total);
    for (i, &m) in multidegree.iter().enumerate() {
        pool.extend(std::iter::repeat_n(i + 1, m));
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(total);
    enumerate_multiset(&mut pool.clone(), &mut current, &mut out);
    Ok(out)
}

fn enumerate_multiset(pool: &mut Vec<usize>, current: &mut Vec<usize>, out: &mut Vec<LyndonWord>) {
    if pool.is_empty() {
        if is_lyndon(current) {
            out.push(current.clone());
        }
        return;
    }
    let mut last = None;
    for i in 0..pool.len() {
        if Some(pool[i]) == last {
            continue;
        }
        last = Some(pool[i]);
        let letter = pool.remove(i);
        current.push(letter);
        enumerate_multiset(pool, current, out);
        current.pop();
        pool.insert(i, letter);
    }
}

/// All Lyndon words using each letter of `letters` exactly once.
/// There are `(k-1)!` of them for `k` distinct letters.
pub fn lyndon_multilinear(letters: &[usize]) -> Vec<LyndonWord> {
    let mut sorted = letters.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(sorted.len());
    enumerate_multiset(&mut sorted, &mut current, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lyndon_recognition() {
        assert!(is_lyndon(&[1]));
        assert!(is_lyndon(&[1, 2]));
        assert!(!is_lyndon(&[2, 1]));
        assert!(is_lyndon(&[1, 1, 2]));
        assert!(!is_lyndon(&[1, 2, 1]));
        assert!(is_lyndon(&[1, 2, 2]));
        assert!(!is_lyndon(&[1, 1]));
    }

    #[test]
    fn factorization_examples() {
        assert_eq!(std_factorization(&[1, 2]), (vec![1], vec![2]));
        assert_eq!(std_factorization(&[1, 1, 2]), (vec![1], vec![1, 2]));
        assert_eq!(std_factorization(&[1, 2, 2]), (vec![1, 2], vec![2]));
        assert_eq!(std_factorization(&[1, 3, 2]), (vec![1, 3], vec![2]));
        assert_eq!(std_factorization(&[1, 2, 3]), (vec![1], vec![2, 3]));
    }

    #[test]
    fn multilinear_counts() {
        // (N-1)! multilinear Lyndon words on N letters
        assert_eq!(lyndon_basis(1, &[1]).unwrap(), vec![vec![1]]);
        assert_eq!(lyndon_basis(2, &[1, 1]).unwrap(), vec![vec![1, 2]]);
        let n3 = lyndon_basis(3, &[1, 1, 1]).unwrap();
        assert_eq!(n3, vec![vec![1, 2, 3], vec![1, 3, 2]]);
        for n in 1..=7usize {
            let deg = vec![1; n];
            let count = lyndon_basis(n, &deg).unwrap().len();
            let fact: usize = (1..n).product();
            assert_eq!(count, fact);
        }
    }

    #[test]
    fn cap_guard() {
        assert!(lyndon_basis(1, &[13]).is_err());
    }
}
