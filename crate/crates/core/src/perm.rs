//! Permutations in one-line image notation.
//!
//! `(i_1...i_k)` denotes the permutation taking 1 to `i_1`, ..., k to `i_k`.
//! Internally images are stored zero-based.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<usize>, // images[i] = sigma(i), zero-based
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    /// From the one-line word in 1-based notation.
    pub fn from_one_line(word: &[usize]) -> Result<Self> {
        let n = word.len();
        let mut seen = vec![false; n];
        for &w in word {
            if w == 0 || w > n {
                return Err(Error::SizeMismatch(format!(
                    "image {w} out of range 1..={n}"
                )));
            }
            if seen[w - 1] {
                return Err(Error::SizeMismatch(format!("repeated image {w}")));
            }
            seen[w - 1] = true;
        }
        Ok(Self {
            images: word.iter().map(|&w| w - 1).collect(),
        })
    }

    pub(crate) fn from_images(images: Vec<usize>) -> Self {
        debug_assert!({
            let mut s = images.clone();
            s.sort_unstable();
            s.iter().enumerate().all(|(i, &x)| i == x)
        });
        Self { images }
    }

    pub fn size(&self) -> usize {
        self.images.len()
    }

    /// Zero-based application.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|&i| i + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Self { images: inv }
    }

    /// `sigma * sigma'`: block sum acting on the first `n` and last `n'`
    /// points separately.
    pub fn block_sum(&self, other: &Self) -> Self {
        let n = self.size();
        let mut images = self.images.clone();
        images.extend(other.images.iter().map(|&x| x + n));
        Self { images }
    }

    /// `sigma_{n,n'}`: moves the first block of size `n` past the block of
    /// size `n'`.
    pub fn block_swap(n: usize, np: usize) -> Self {
        let mut images = Vec::with_capacity(n + np);
        for i in 0..n {
            images.push(i + np);
        }
        for i in 0..np {
            images.push(i);
        }
        Self { images }
    }
}

/// Composite "apply `q` then `p`": `(p o q)(i) = p(q(i))`.
pub fn perm_compose(p: &Permutation, q: &Permutation) -> Result<Permutation> {
    if p.size() != q.size() {
        return Err(Error::SizeMismatch(format!(
            "compose sizes {} and {}",
            p.size(),
            q.size()
        )));
    }
    Ok(Permutation::from_images(
        (0..q.size()).map(|i| p.apply(q.apply(i))).collect(),
    ))
}

/// The block permutation realizing a labeled tensor product.
///
/// Given factor output arities `block_sizes` and an ordered partition
/// `(I_1, ..., I_p)` of `[1, n]` (1-based), returns the permutation `sigma`
/// such that `sigma o (x_1 (x) ... (x) x_p)` places the j-th output of `x_t`
/// at position `I_t[j]`.
pub fn block_perm(block_sizes: &[usize], assignment: &[Vec<usize>]) -> Result<Permutation> {
    if block_sizes.len() != assignment.len() {
        return Err(Error::MalformedPartition(format!(
            "{} blocks vs {} index sets",
            block_sizes.len(),
            assignment.len()
        )));
    }
    let n: usize = block_sizes.iter().sum();
    let mut word = Vec::with_capacity(n);
    for (size, set) in block_sizes.iter().zip(assignment) {
        if set.len() != *size {
            return Err(Error::MalformedPartition(format!(
                "index set {set:?} does not match block size {size}"
            )));
        }
        word.extend_from_slice(set);
    }
    let mut seen = vec![false; n];
    for &w in &word {
        if w == 0 || w > n {
            return Err(Error::MalformedPartition(format!(
                "index {w} out of range 1..={n}"
            )));
        }
        if seen[w - 1] {
            return Err(Error::MalformedPartition(format!("index {w} repeated")));
        }
        seen[w - 1] = true;
    }
    Permutation::from_one_line(&word)
}

/// All permutations of size `n` in lexicographic order of their one-line
/// words.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut cur = (0..n).collect::<Vec<_>>();
    loop {
        out.push(Permutation::from_images(cur.clone()));
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = self.one_line();
        if word.iter().all(|&w| w <= 9) {
            write!(f, "(")?;
            for w in word {
                write!(f, "{w}")?;
            }
            write!(f, ")")
        } else {
            let strs: Vec<String> = word.iter().map(|w| w.to_string()).collect();
            write!(f, "({})", strs.join(","))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(word: &[usize]) -> Permutation {
        Permutation::from_one_line(word).unwrap()
    }

    #[test]
    fn transposition_is_involution() {
        let t = p(&[2, 1]);
        assert_eq!(perm_compose(&t, &t).unwrap(), Permutation::identity(2));
    }

    #[test]
    fn compose_is_function_composition() {
        // (231) o (231): 1 -> 2 -> 3, 2 -> 3 -> 1, 3 -> 1 -> 2, which is (312).
        let c = p(&[2, 3, 1]);
        assert_eq!(perm_compose(&c, &c).unwrap(), p(&[3, 1, 2]));
    }

    #[test]
    fn identity_is_neutral() {
        let q = p(&[3, 1, 4, 2]);
        let id = Permutation::identity(4);
        assert_eq!(perm_compose(&q, &id).unwrap(), q);
        assert_eq!(perm_compose(&id, &q).unwrap(), q);
        assert_eq!(perm_compose(&q, &q.inverse()).unwrap(), id);
    }

    #[test]
    fn compose_associative() {
        let a = p(&[2, 3, 1, 4]);
        let b = p(&[4, 3, 2, 1]);
        let c = p(&[1, 3, 2, 4]);
        let ab_c = perm_compose(&perm_compose(&a, &b).unwrap(), &c).unwrap();
        let a_bc = perm_compose(&a, &perm_compose(&b, &c).unwrap()).unwrap();
        assert_eq!(ab_c, a_bc);
    }

    #[test]
    fn block_perm_labeled_pair() {
        // x^{1,4} y^{3,2} = (1432) o (x (x) y)
        let s = block_perm(&[2, 2], &[vec![1, 4], vec![3, 2]]).unwrap();
        assert_eq!(s, p(&[1, 4, 3, 2]));
    }

    #[test]
    fn block_perm_single_block_is_identity() {
        let s = block_perm(&[4], &[vec![1, 2, 3, 4]]).unwrap();
        assert!(s.is_identity());
    }

    #[test]
    fn block_perm_swap_matches_sigma() {
        let s = block_perm(&[1, 1], &[vec![2], vec![1]]).unwrap();
        assert_eq!(s, p(&[2, 1]));
        assert_eq!(s, Permutation::block_swap(1, 1));
    }

    #[test]
    fn block_perm_rejects_malformed() {
        assert!(block_perm(&[2, 2], &[vec![1, 4], vec![3, 4]]).is_err());
        assert!(block_perm(&[2], &[vec![1, 4]]).is_err());
        assert!(block_perm(&[2, 1], &[vec![1, 2]]).is_err());
    }

    #[test]
    fn block_sum_and_swap() {
        let a = p(&[2, 1]);
        let b = p(&[1, 3, 2]);
        assert_eq!(a.block_sum(&b), p(&[2, 1, 3, 5, 4]));
        assert_eq!(Permutation::block_swap(1, 2), p(&[3, 1, 2]));
    }

    #[test]
    fn display_roundtrip() {
        assert_eq!(p(&[1, 4, 3, 2]).to_string(), "(1432)");
        assert_eq!(all_permutations(3).len(), 6);
    }
}
