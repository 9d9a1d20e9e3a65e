//! Arithmetic parameters of the minimax problem and subgroup/coset algebra of `Z_n`.
//!
//! Every subgroup of the cyclic group `Z_n` is determined by its size `t`: it is generated by
//! `n / t`, so its cosets are the residue classes modulo `n / t`. Coset `i` is `i + H` for
//! `0 <= i < n / t`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::residue::ResidueSet;

/// Smallest prime dividing `r`.
pub fn least_prime_divisor(r: usize) -> Result<usize> {
    if r < 2 {
        return Err(Error::InvalidArgument(format!(
            "least prime divisor needs r >= 2, got {r}"
        )));
    }
    let mut d = 2;
    while d * d <= r {
        if r.is_multiple_of(d) {
            return Ok(d);
        }
        d += 1;
    }
    Ok(r)
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && least_prime_divisor(n) == Ok(n)
}

/// Largest divisor of `n` that is at most `k`; 1 if there is none above 1.
pub fn largest_divisor_at_most(n: usize, k: usize) -> Result<usize> {
    if n < 2 || k < 2 {
        return Err(Error::InvalidArgument(format!(
            "largest divisor needs n, k >= 2, got n={n}, k={k}"
        )));
    }
    Ok((1..=k.min(n)).rev().find(|d| n.is_multiple_of(*d)).unwrap_or(1))
}

/// Size of the restricted self-sumset of a full coset of a size-`t` subgroup.
pub fn coset_sumset_size(t: usize) -> Result<usize> {
    match t {
        0 => Err(Error::InvalidArgument("coset size must be >= 1".into())),
        1 => Ok(0),
        2 => Ok(1),
        _ => Ok(t),
    }
}

/// All positive divisors of `n` in ascending order.
pub fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// `max{0, 2x - 3}` without leaving unsigned arithmetic.
pub(crate) fn two_x_minus_three(x: usize) -> usize {
    (2 * x).saturating_sub(3)
}

/// The parameters `(n, k, m, p(n), q(n, k))` of a minimax instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupParams {
    pub n: usize,
    pub k: usize,
    /// Guaranteed size of some color class, `ceil(n / k)`.
    pub m: usize,
    pub p_n: usize,
    pub q_nk: usize,
}

impl GroupParams {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n < 2 || k < 2 {
            return Err(Error::InvalidArgument(format!(
                "need n >= 2 and k >= 2, got n={n}, k={k}"
            )));
        }
        Ok(Self {
            n,
            k,
            m: n.div_ceil(k),
            p_n: least_prime_divisor(n)?,
            q_nk: largest_divisor_at_most(n, k)?,
        })
    }

    /// `2m - 3` as a signed quantity; negative when `m = 1`.
    pub fn interval_size(&self) -> i64 {
        2 * self.m as i64 - 3
    }

    /// `f(n / q(n, k))`, the value of the coset coloring.
    pub fn coset_value(&self) -> usize {
        coset_sumset_size(self.n / self.q_nk).expect("n / q >= 1")
    }
}

/// The unique subgroup of `Z_n` of a given size, with its cosets materialized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupContext {
    n: usize,
    t: usize,
    cosets: Vec<ResidueSet>,
}

/// Coset occupancy of a set relative to a subgroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientStats {
    /// Number of cosets the set meets.
    pub r_h: usize,
    /// Number of cosets holding at least two elements of the set.
    pub sigma_h: usize,
    /// Index of the heaviest coset (smallest index on ties); `None` for the empty set.
    pub heaviest: Option<usize>,
    /// Size of the intersection with the heaviest coset.
    pub x: usize,
    /// Number of cosets attaining `x`.
    pub tie_count: usize,
}

/// Subgroup of size `t` in `Z_n`.
pub fn subgroup_of_size(n: usize, t: usize) -> Result<SubgroupContext> {
    SubgroupContext::new(n, t)
}

impl SubgroupContext {
    pub fn new(n: usize, t: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        if t == 0 || !n.is_multiple_of(t) {
            return Err(Error::NotADivisor { n, t });
        }
        let index = n / t;
        let cosets = (0..index)
            .map(|i| ResidueSet::from_residues(n, (0..t).map(|j| i + j * index)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n, t, cosets })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Subgroup size `t`.
    pub fn size(&self) -> usize {
        self.t
    }

    /// Generator `n / t` of the subgroup.
    pub fn generator(&self) -> usize {
        self.n / self.t
    }

    /// Index `q_H = n / t`.
    pub fn index(&self) -> usize {
        self.n / self.t
    }

    pub fn subgroup(&self) -> &ResidueSet {
        &self.cosets[0]
    }

    pub fn cosets(&self) -> &[ResidueSet] {
        &self.cosets
    }

    /// Index of the coset containing `a` (the quotient map).
    pub fn coset_of(&self, a: usize) -> usize {
        a % self.index()
    }

    /// Index of the coset `C + D`.
    pub fn coset_sum(&self, c: usize, d: usize) -> usize {
        (c + d) % self.index()
    }

    /// Intersection sizes `|A ∩ C|` in coset order.
    pub fn occupancy(&self, a: &ResidueSet) -> Result<Vec<usize>> {
        self.check_modulus(a)?;
        let mut counts = vec![0; self.index()];
        for x in a.iter() {
            counts[self.coset_of(x)] += 1;
        }
        Ok(counts)
    }

    pub fn quotient_stats(&self, a: &ResidueSet) -> Result<QuotientStats> {
        let counts = self.occupancy(a)?;
        let x = counts.iter().copied().max().unwrap_or(0);
        let heaviest = if x == 0 {
            None
        } else {
            counts.iter().position(|&c| c == x)
        };
        Ok(QuotientStats {
            r_h: counts.iter().filter(|&&c| c >= 1).count(),
            sigma_h: counts.iter().filter(|&&c| c >= 2).count(),
            heaviest,
            x,
            tie_count: if x == 0 {
                0
            } else {
                counts.iter().filter(|&&c| c == x).count()
            },
        })
    }

    pub(crate) fn check_modulus(&self, a: &ResidueSet) -> Result<()> {
        if a.modulus() != self.n {
            return Err(Error::ModulusMismatch {
                left: a.modulus(),
                right: self.n,
            });
        }
        Ok(())
    }
}

/// Free-function form of [`SubgroupContext::quotient_stats`].
pub fn quotient_stats(a: &ResidueSet, h: &SubgroupContext) -> Result<QuotientStats> {
    h.quotient_stats(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn least_prime_divisor_examples() {
        assert_eq!(least_prime_divisor(12), Ok(2));
        assert_eq!(least_prime_divisor(35), Ok(5));
        assert_eq!(least_prime_divisor(7), Ok(7));
        assert!(least_prime_divisor(1).is_err());
        assert!(least_prime_divisor(0).is_err());
    }

    #[test]
    fn least_prime_divisor_up_to_200() {
        for n in 2..=200 {
            let p = least_prime_divisor(n).unwrap();
            assert_eq!(p * (n / p), n);
            assert!((2..p).all(|d| !p.is_multiple_of(d)), "{p} not prime");
            assert!((2..p).all(|d| n % d != 0));
        }
    }

    #[test]
    fn largest_divisor_examples() {
        assert_eq!(largest_divisor_at_most(12, 5), Ok(4));
        assert_eq!(largest_divisor_at_most(7, 3), Ok(1));
        assert_eq!(largest_divisor_at_most(12, 6), Ok(6));
        assert_eq!(largest_divisor_at_most(7, 9), Ok(7));
    }

    #[test]
    fn largest_divisor_up_to_200() {
        for n in 2..=200 {
            for k in 2..=n {
                let q = largest_divisor_at_most(n, k).unwrap();
                assert_eq!(n % q, 0);
                assert!(q <= k && q >= 1);
                assert!(divisors(n).into_iter().filter(|&d| d <= k).all(|d| d <= q));
            }
        }
    }

    #[test]
    fn coset_sumset_size_values() {
        assert_eq!(coset_sumset_size(1), Ok(0));
        assert_eq!(coset_sumset_size(2), Ok(1));
        assert_eq!(coset_sumset_size(5), Ok(5));
        assert!(coset_sumset_size(0).is_err());
    }

    #[test]
    fn group_params_invariants() {
        for n in 2..=120 {
            for k in 2..=n + 3 {
                let g = GroupParams::new(n, k).unwrap();
                assert!(g.k * g.m >= n && n > g.k * (g.m - 1));
            }
        }
        assert!(GroupParams::new(1, 2).is_err());
        assert!(GroupParams::new(5, 1).is_err());
    }

    #[test]
    fn subgroup_examples() {
        let h = subgroup_of_size(9, 3).unwrap();
        let lists: Vec<Vec<usize>> = h.cosets().iter().map(|c| c.to_vec()).collect();
        assert_eq!(lists, vec![vec![0, 3, 6], vec![1, 4, 7], vec![2, 5, 8]]);

        let h = subgroup_of_size(8, 2).unwrap();
        assert_eq!(h.subgroup().to_vec(), vec![0, 4]);
        assert_eq!(h.cosets().len(), 4);

        let h = subgroup_of_size(6, 6).unwrap();
        assert_eq!(h.cosets().len(), 1);
        assert_eq!(h.subgroup().len(), 6);

        assert_eq!(
            subgroup_of_size(9, 4).unwrap_err(),
            Error::NotADivisor { n: 9, t: 4 }
        );
    }

    #[test]
    fn subgroup_is_unique_and_cosets_partition() {
        for n in 1..=60 {
            for t in divisors(n) {
                let h = subgroup_of_size(n, t).unwrap();
                // every size-t subgroup is generated by an element of order t, and all of them
                // coincide with the canonical one
                for g in 0..n {
                    let generated = ResidueSet::from_residues(n, (0..n).map(|j| (j * g) % n))
                        .unwrap();
                    if generated.len() == t {
                        assert_eq!(&generated, h.subgroup());
                    }
                }
                let mut seen = vec![false; n];
                for c in h.cosets() {
                    assert_eq!(c.len(), t);
                    for x in c.iter() {
                        assert!(!seen[x]);
                        seen[x] = true;
                    }
                }
                assert!(seen.into_iter().all(|s| s));
            }
        }
    }

    #[test]
    fn quotient_stats_examples() {
        let h = subgroup_of_size(9, 3).unwrap();
        let a = ResidueSet::from_residues(9, [0, 3, 1]).unwrap();
        let s = h.quotient_stats(&a).unwrap();
        assert_eq!((s.r_h, s.sigma_h, s.heaviest, s.x), (2, 1, Some(0), 2));

        let s = h.quotient_stats(&ResidueSet::empty(9)).unwrap();
        assert_eq!((s.r_h, s.sigma_h, s.heaviest, s.x), (0, 0, None, 0));

        let h = subgroup_of_size(6, 2).unwrap();
        let s = h.quotient_stats(&ResidueSet::full(6)).unwrap();
        assert_eq!((s.r_h, s.sigma_h, s.x, s.tie_count), (3, 3, 2, 3));
        assert_eq!(s.heaviest, Some(0));

        let wrong = ResidueSet::empty(7);
        assert!(h.quotient_stats(&wrong).is_err());
    }
}
