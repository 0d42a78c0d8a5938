//! Exact rank computation by fraction-free (Bareiss) elimination.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::scalar::Rational;

/// Rank of an integer matrix, single-step Bareiss elimination.
pub fn rank_bigint(mut m: Vec<Vec<BigInt>>) -> usize {
    m.retain(|row| row.iter().any(|x| !x.is_zero()));
    m.sort();
    m.dedup();
    if m.is_empty() {
        return 0;
    }
    let rows = m.len();
    let cols = m[0].len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    let mut col = 0;
    while rank < rows && col < cols {
        let Some(p) = (rank..rows).find(|&i| !m[i][col].is_zero()) else {
            col += 1;
            continue;
        };
        m.swap(rank, p);
        for i in rank + 1..rows {
            for j in col + 1..cols {
                let t = &m[rank][col] * &m[i][j] - &m[i][col] * &m[rank][j];
                m[i][j] = t / &prev;
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
        col += 1;
    }
    rank
}

/// Rank over the prime field `Z/p` (a lower bound for the rational rank,
/// used in complementary-rank certificates).
pub fn rank_mod_prime(rows: Vec<Vec<Rational>>, p: u64) -> usize {
    let reduce = |x: &Rational| -> u64 {
        let pb = BigInt::from(p);
        let num = ((x.numer() % &pb) + &pb) % &pb;
        let den = ((x.denom() % &pb) + &pb) % &pb;
        let num: u64 = num.try_into().unwrap();
        let den: u64 = den.try_into().unwrap();
        let inv = mod_inverse(den, p).expect("denominator invertible mod p");
        mul_mod(num, inv, p)
    };
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|row| row.iter().map(&reduce).collect())
        .collect();
    m.retain(|row| row.iter().any(|&x| x != 0));
    if m.is_empty() {
        return 0;
    }
    let cols = m[0].len();
    let rows_n = m.len();
    let mut rank = 0;
    let mut col = 0;
    while rank < rows_n && col < cols {
        let Some(pivot) = (rank..rows_n).find(|&i| m[i][col] != 0) else {
            col += 1;
            continue;
        };
        m.swap(rank, pivot);
        let inv = mod_inverse(m[rank][col], p).unwrap();
        for j in col..cols {
            m[rank][j] = mul_mod(m[rank][j], inv, p);
        }
        for i in 0..rows_n {
            if i != rank && m[i][col] != 0 {
                let f = m[i][col];
                for j in col..cols {
                    let t = mul_mod(f, m[rank][j], p);
                    m[i][j] = (m[i][j] + p - t) % p;
                }
            }
        }
        rank += 1;
        col += 1;
    }
    rank
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn mod_inverse(a: u64, p: u64) -> Option<u64> {
    if a.is_multiple_of(p) {
        return None;
    }
    // p prime: Fermat
    let mut result = 1u64;
    let mut base = a % p;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    Some(result)
}

/// Rank of a rational matrix: rows are scaled to integers first.
pub fn rank_rational(rows: Vec<Vec<Rational>>) -> usize {
    let int_rows: Vec<Vec<BigInt>> = rows
        .into_iter()
        .map(|row| {
            let mut lcm = BigInt::one();
            for x in &row {
                let d = x.denom();
                let g = num_integer::Integer::gcd(&lcm, d);
                lcm = &lcm / g * d;
            }
            row.iter()
                .map(|x| x.numer() * (&lcm / x.denom()))
                .collect()
        })
        .collect();
    // Normalize row signs and content so duplicates collapse before
    // elimination.
    let reduced: Vec<Vec<BigInt>> = int_rows
        .into_iter()
        .map(|row| {
            let mut g = BigInt::zero();
            for x in &row {
                g = num_integer::Integer::gcd(&g, x);
            }
            if g.is_zero() {
                return row;
            }
            let lead_neg = row
                .iter()
                .find(|x| !x.is_zero())
                .map(|x| x.is_negative())
                .unwrap_or(false);
            let s = if lead_neg { -g } else { g };
            row.iter().map(|x| x / &s).collect()
        })
        .collect();
    rank_bigint(reduced)
}
