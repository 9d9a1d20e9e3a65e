//! Restricted self-sumsets and structural classification of residue sets.

use std::collections::HashSet;

use serde::Serialize;

use crate::arith::{divisors, is_prime, least_prime_divisor};
use crate::error::{Error, Result};
use crate::residue::ResidueSet;

/// Restricted self-sumset of a single-word mask over `Z_n`, `n <= 64`.
///
/// `A +^ A` is the union over `a in A` of `(A \ {a})` rotated by `a`.
pub fn sumset_word(mask: u64, n: usize) -> u64 {
    debug_assert!((1..=64).contains(&n));
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut out = 0u64;
    let mut rest = mask;
    while rest != 0 {
        let a = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let others = mask & !(1u64 << a);
        out |= rotate_word(others, a, n, full);
    }
    out
}

/// Cyclic shift of an `n`-bit mask by `s < n`.
#[inline]
pub fn rotate_word(w: u64, s: usize, n: usize, full: u64) -> u64 {
    if s == 0 {
        w
    } else {
        ((w << s) | (w >> (n - s))) & full
    }
}

/// `{a + a' mod n : a, a' in A, a != a'}`.
pub fn restricted_sumset(a: &ResidueSet) -> ResidueSet {
    let n = a.modulus();
    if a.len() <= 1 {
        return ResidueSet::empty(n);
    }
    if let Some(w) = a.as_word() {
        return ResidueSet::from_word(n, sumset_word(w, n));
    }
    let words = a.words().len();
    if words < a.len() / 2 {
        // shifted-mask unions: |A| rotations of `words` words each
        let mut acc = ResidueSet::empty(n);
        for x in a.iter() {
            acc = acc.union(&a.without(x).rotate(x));
        }
        acc
    } else {
        let members = a.to_vec();
        let mut sums = ResidueSet::empty(n).words().to_vec();
        for (i, &x) in members.iter().enumerate() {
            for &y in &members[i + 1..] {
                let s = (x + y) % n;
                sums[s / 64] |= 1 << (s % 64);
            }
        }
        ResidueSet::from_words(n, sums)
    }
}

/// Structural classification of a residue set, with a witness that regenerates it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StructureTag {
    Empty,
    Singleton {
        element: usize,
    },
    /// Consecutive residues `start..start+length` that do not pass `n-1 -> 0`.
    Block {
        start: usize,
        length: usize,
    },
    /// Consecutive residues that wrap past `n-1`.
    Arc {
        start: usize,
        length: usize,
    },
    ArithmeticProgression {
        start: usize,
        difference: usize,
        length: usize,
    },
    /// Contained in `representative + H` for the subgroup `H` of the given size.
    CosetSubset {
        subgroup_size: usize,
        representative: usize,
    },
    Unstructured,
}

impl StructureTag {
    pub fn name(&self) -> &'static str {
        match self {
            StructureTag::Empty => "empty",
            StructureTag::Singleton { .. } => "singleton",
            StructureTag::Block { .. } => "block",
            StructureTag::Arc { .. } => "arc",
            StructureTag::ArithmeticProgression { .. } => "arithmetic-progression",
            StructureTag::CosetSubset { .. } => "coset-subset",
            StructureTag::Unstructured => "unstructured",
        }
    }

    /// Whether the tag certifies an arithmetic progression with nonzero difference
    /// (blocks and arcs are progressions of difference 1).
    pub fn is_progression(&self) -> bool {
        matches!(
            self,
            StructureTag::Block { .. }
                | StructureTag::Arc { .. }
                | StructureTag::ArithmeticProgression { .. }
        )
    }

    /// Rebuilds the set described by the witness. Coset-subset tags only bound the set,
    /// so they regenerate the full coset; unstructured sets have no witness.
    pub fn regenerate(&self, n: usize) -> Option<ResidueSet> {
        let set = match *self {
            StructureTag::Empty => ResidueSet::empty(n),
            StructureTag::Singleton { element } => ResidueSet::from_residues(n, [element]).ok()?,
            StructureTag::Block { start, length } | StructureTag::Arc { start, length } => {
                ResidueSet::arc(n, start, length).ok()?
            }
            StructureTag::ArithmeticProgression {
                start,
                difference,
                length,
            } => ResidueSet::from_residues(n, (0..length).map(|i| (start + i * difference) % n))
                .ok()?,
            StructureTag::CosetSubset {
                subgroup_size,
                representative,
            } => {
                let g = n / subgroup_size;
                ResidueSet::from_residues(n, (0..subgroup_size).map(|j| representative + j * g))
                    .ok()?
            }
            StructureTag::Unstructured => return None,
        };
        Some(set)
    }
}

/// Classifies `A` with precedence
/// empty > singleton > block > arc > arithmetic progression > coset subset > unstructured.
///
/// Progressions of difference other than 1 are only searched for when `prime_hint` is set
/// and `n` is prime.
pub fn classify(a: &ResidueSet, prime_hint: bool) -> StructureTag {
    let n = a.modulus();
    let len = a.len();
    match len {
        0 => return StructureTag::Empty,
        1 => {
            return StructureTag::Singleton {
                element: a.min().expect("nonempty"),
            }
        }
        _ => {}
    }
    let min = a.min().expect("nonempty");
    let max = a.iter().last().expect("nonempty");
    if max - min + 1 == len {
        return StructureTag::Block { start: min, length: len };
    }
    if let Some(start) = arc_start(a) {
        return StructureTag::Arc { start, length: len };
    }
    if prime_hint && is_prime(n) {
        if let Some((start, difference)) = progression(a) {
            return StructureTag::ArithmeticProgression {
                start,
                difference,
                length: len,
            };
        }
    }
    for t in divisors(n) {
        if t == 1 || t == n {
            continue;
        }
        let g = n / t;
        if a.iter().all(|x| x % g == min % g) {
            return StructureTag::CosetSubset {
                subgroup_size: t,
                representative: min % g,
            };
        }
    }
    StructureTag::Unstructured
}

/// Start of the unique maximal cyclic run, if `A` (a proper nonempty subset) is one run.
fn arc_start(a: &ResidueSet) -> Option<usize> {
    let n = a.modulus();
    if a.len() == n {
        return Some(0);
    }
    let mut starts = a.iter().filter(|&x| !a.contains((x + n - 1) % n));
    let start = starts.next()?;
    starts.next().is_none().then_some(start)
}

/// `(start, d)` with the smallest `d` such that `A = {start + i*d}`; requires `2 <= |A| < n`.
fn progression(a: &ResidueSet) -> Option<(usize, usize)> {
    let n = a.modulus();
    let len = a.len();
    if len < 2 || len >= n {
        return None;
    }
    (1..n).find_map(|d| {
        let links = a.iter().filter(|&x| a.contains((x + d) % n)).count();
        if links != len - 1 {
            return None;
        }
        a.iter()
            .find(|&x| !a.contains((x + n - d) % n))
            .map(|start| (start, d))
    })
}

/// Canonical representative of the affine class `{uA + v : u in Z_p^*, v in Z_p}`: the image
/// whose ascending member list is lexicographically smallest.
pub fn affine_canonical_form(a: &ResidueSet, p: usize) -> Result<ResidueSet> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if a.modulus() != p {
        return Err(Error::ModulusMismatch {
            left: a.modulus(),
            right: p,
        });
    }
    let Some(_) = a.min() else {
        return Ok(a.clone());
    };
    let mut best: Option<ResidueSet> = None;
    for u in 1..p {
        // the minimum member list starts with 0, so only translations sending a member to 0
        // can win
        for x in a.iter() {
            let v = (p - (u * x) % p) % p;
            let img = a.affine_image(u, v);
            if best.as_ref().is_none_or(|b| img.cmp_members(b).is_lt()) {
                best = Some(img);
            }
        }
    }
    Ok(best.expect("nonempty set has an image"))
}

/// Whether `diam(S) < p(n)`; when it is, reduction mod `n` is checked to be injective on `S`.
pub fn lift_and_check_window(values: &[i64], n: usize) -> Result<bool> {
    let p = least_prime_divisor(n)? as i64;
    let (Some(&lo), Some(&hi)) = (values.iter().min(), values.iter().max()) else {
        return Ok(true);
    };
    if hi - lo >= p {
        return Ok(false);
    }
    let distinct: HashSet<i64> = values.iter().copied().collect();
    let images: HashSet<i64> = distinct.iter().map(|v| v.rem_euclid(n as i64)).collect();
    assert_eq!(
        images.len(),
        distinct.len(),
        "reduction mod {n} collided on a window of diameter {} < {p}",
        hi - lo
    );
    Ok(true)
}
