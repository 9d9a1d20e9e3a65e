//! Bitset-backed subsets of `Z_n`.

use std::fmt;

use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{Error, Result};

const WORD: usize = 64;

/// A subset of `Z_n`, stored as a membership mask (bit `i` of the mask is residue `i`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ResidueSet {
    n: usize,
    words: Vec<u64>,
    len: usize,
}

fn word_count(n: usize) -> usize {
    n.div_ceil(WORD)
}

impl ResidueSet {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            words: vec![0; word_count(n)],
            len: 0,
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for w in s.words.iter_mut() {
            *w = u64::MAX;
        }
        s.trim();
        s.len = n;
        s
    }

    /// Builds a set from residues in `[0, n)`; repeated residues are merged.
    pub fn from_residues<I: IntoIterator<Item = usize>>(n: usize, residues: I) -> Result<Self> {
        let mut s = Self::empty(n);
        for r in residues {
            if r >= n {
                return Err(Error::ResidueOutOfRange { residue: r, n });
            }
            s.set(r);
        }
        Ok(s)
    }

    /// Builds a set from a single-word mask; requires `n <= 64`.
    pub fn from_word(n: usize, mask: u64) -> Self {
        assert!(n <= WORD, "single-word masks need n <= 64");
        let mut s = Self::empty(n);
        if n > 0 {
            s.words[0] = mask;
            s.trim();
            s.len = s.words[0].count_ones() as usize;
        }
        s
    }

    /// The contiguous run `start, start+1, ..., start+len-1` reduced mod `n` (an arc).
    pub fn arc(n: usize, start: usize, len: usize) -> Result<Self> {
        if len > n {
            return Err(Error::InvalidArgument(format!(
                "arc of length {len} does not fit in Z_{n}"
            )));
        }
        Self::from_residues(n, (0..len).map(|i| (start + i) % n))
    }

    /// Parses a comma-separated residue literal such as `"0,1,4"`.
    ///
    /// Whitespace around entries is ignored; out-of-range and duplicate residues are rejected.
    /// The empty string (or `{}`) denotes the empty set.
    pub fn parse(literal: &str, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        let body = literal.trim().trim_start_matches('{').trim_end_matches('}');
        let mut s = Self::empty(n);
        if body.trim().is_empty() {
            return Ok(s);
        }
        for token in body.split(',') {
            let token = token.trim();
            let r: usize = token.parse().map_err(|_| {
                Error::InvalidArgument(format!("cannot parse residue {token:?}"))
            })?;
            if r >= n {
                return Err(Error::ResidueOutOfRange { residue: r, n });
            }
            if s.contains(r) {
                return Err(Error::DuplicateResidue(r));
            }
            s.set(r);
        }
        Ok(s)
    }

    pub fn modulus(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, r: usize) -> bool {
        r < self.n && self.words[r / WORD] >> (r % WORD) & 1 == 1
    }

    /// The mask as a single word, when `n <= 64`.
    pub fn as_word(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let b = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * WORD + b)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn min(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.n == other.n
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn union(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        let words: Vec<u64> = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a | b)
            .collect();
        Self::from_words(self.n, words)
    }

    pub fn with(&self, r: usize) -> Self {
        let mut s = self.clone();
        if !s.contains(r) {
            s.set(r);
        }
        s
    }

    pub fn without(&self, r: usize) -> Self {
        let mut s = self.clone();
        if s.contains(r) {
            s.words[r / WORD] &= !(1u64 << (r % WORD));
            s.len -= 1;
        }
        s
    }

    /// `{a + v : a in A}`.
    pub fn translate(&self, v: usize) -> Self {
        self.rotate(v % self.n.max(1))
    }

    /// `{u * a : a in A}`; a bijection exactly when `gcd(u, n) = 1`.
    pub fn dilate(&self, u: usize) -> Self {
        let n = self.n;
        Self::from_residues(n, self.iter().map(|a| (a * (u % n)) % n)).expect("reduced mod n")
    }

    /// `{u * a + v : a in A}`.
    pub fn affine_image(&self, u: usize, v: usize) -> Self {
        let n = self.n;
        Self::from_residues(n, self.iter().map(|a| (a * (u % n) + v) % n)).expect("reduced mod n")
    }

    /// Cyclic shift by `s` with `0 <= s < n`, performed word-wise.
    pub(crate) fn rotate(&self, s: usize) -> Self {
        let n = self.n;
        if s == 0 || n == 0 {
            return self.clone();
        }
        debug_assert!(s < n);
        if let Some(w) = self.as_word() {
            let full = if n == WORD { u64::MAX } else { (1u64 << n) - 1 };
            let rotated = ((w << s) | (w >> (n - s))) & full;
            return Self {
                n,
                words: vec![rotated],
                len: self.len,
            };
        }
        let mut out = shl(&self.words, s);
        let back = shr(&self.words, n - s);
        for (o, b) in out.iter_mut().zip(back) {
            *o |= b;
        }
        let mut r = Self {
            n,
            words: out,
            len: self.len,
        };
        r.trim();
        r
    }

    /// Compares by the ascending member list: `{0,1,2} < {0,1,3} < {0,2} < {1}`.
    pub fn cmp_members(&self, other: &Self) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }

    pub(crate) fn from_words(n: usize, words: Vec<u64>) -> Self {
        let mut s = Self { n, words, len: 0 };
        s.trim();
        s.len = s.words.iter().map(|w| w.count_ones() as usize).sum();
        s
    }

    fn set(&mut self, r: usize) {
        let bit = 1u64 << (r % WORD);
        let w = &mut self.words[r / WORD];
        if *w & bit == 0 {
            *w |= bit;
            self.len += 1;
        }
    }

    fn trim(&mut self) {
        let extra = self.words.len() * WORD - self.n;
        if extra > 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= u64::MAX >> extra;
            }
        }
    }
}

fn shl(words: &[u64], s: usize) -> Vec<u64> {
    let (ws, bs) = (s / WORD, s % WORD);
    let mut out = vec![0u64; words.len()];
    for i in (ws..words.len()).rev() {
        let src = i - ws;
        let mut v = words[src] << bs;
        if bs > 0 && src > 0 {
            v |= words[src - 1] >> (WORD - bs);
        }
        out[i] = v;
    }
    out
}

fn shr(words: &[u64], s: usize) -> Vec<u64> {
    let (ws, bs) = (s / WORD, s % WORD);
    let mut out = vec![0u64; words.len()];
    for (i, slot) in out.iter_mut().take(words.len().saturating_sub(ws)).enumerate() {
        let src = i + ws;
        let mut v = words[src] >> bs;
        if bs > 0 && src + 1 < words.len() {
            v |= words[src + 1] << (WORD - bs);
        }
        *slot = v;
    }
    out
}

impl fmt::Debug for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (mod {})", self.n)
    }
}

impl fmt::Display for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, r) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{r}")?;
        }
        f.write_str("}")
    }
}

/// Serialized as the ascending list of members.
impl Serialize for ResidueSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len))?;
        for r in self.iter() {
            seq.serialize_element(&r)?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_literals() {
        let a = ResidueSet::parse("0,1,4", 7).unwrap();
        assert_eq!(a.to_vec(), vec![0, 1, 4]);
        assert_eq!(ResidueSet::parse(" 4, 0 ,1", 7).unwrap(), a);
        assert_eq!(ResidueSet::parse("{0,1,4}", 7).unwrap(), a);
        assert!(ResidueSet::parse("", 7).unwrap().is_empty());
        assert_eq!(
            ResidueSet::parse("0,7", 7),
            Err(Error::ResidueOutOfRange { residue: 7, n: 7 })
        );
        assert_eq!(
            ResidueSet::parse("1,2,1", 7),
            Err(Error::DuplicateResidue(1))
        );
        assert!(ResidueSet::parse("1,x", 7).is_err());
        assert!(ResidueSet::parse("-1", 7).is_err());
    }

    #[test]
    fn full_and_display() {
        let f = ResidueSet::full(70);
        assert_eq!(f.len(), 70);
        assert_eq!(f.iter().last(), Some(69));
        assert_eq!(ResidueSet::parse("3,1", 5).unwrap().to_string(), "{1,3}");
    }

    #[test]
    fn member_order() {
        let a = ResidueSet::parse("0,1,2", 7).unwrap();
        let b = ResidueSet::parse("4,5,6", 7).unwrap();
        let c = ResidueSet::parse("0,2", 7).unwrap();
        assert!(a.cmp_members(&b).is_lt());
        assert!(a.cmp_members(&c).is_lt());
    }

    proptest! {
        #[test]
        fn rotate_matches_pointwise(n in 1usize..200, raw in proptest::collection::vec(0usize..200, 0..40), s in 0usize..200) {
            let a = ResidueSet::from_residues(n, raw.into_iter().map(|r| r % n)).unwrap();
            let s = s % n;
            let expected = ResidueSet::from_residues(n, a.iter().map(|x| (x + s) % n)).unwrap();
            prop_assert_eq!(a.rotate(s), expected);
        }

        #[test]
        fn affine_image_matches_pointwise(n in 1usize..100, raw in proptest::collection::vec(0usize..100, 0..30), u in 0usize..100, v in 0usize..100) {
            let a = ResidueSet::from_residues(n, raw.into_iter().map(|r| r % n)).unwrap();
            let img = a.affine_image(u, v);
            for x in a.iter() {
                prop_assert!(img.contains((x * u + v) % n));
            }
            prop_assert_eq!(img.len(), a.iter().map(|x| (x * u + v) % n).collect::<std::collections::BTreeSet<_>>().len());
        }
    }
}
