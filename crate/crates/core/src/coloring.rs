//! `k`-colorings of `Z_n`: the block and coset constructions and their evaluation.

use serde::{Deserialize, Serialize};

use crate::arith::{largest_divisor_at_most, GroupParams, SubgroupContext};
use crate::error::{Error, Result};
use crate::residue::ResidueSet;
use crate::sumset::restricted_sumset;

/// A partition of `Z_n` into `k` (possibly empty) color classes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coloring {
    n: usize,
    k: usize,
    assignment: Vec<usize>,
}

/// Per-class restricted sumset sizes of a coloring and their maximum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evaluation {
    pub per_class_sumset_sizes: Vec<usize>,
    pub value: usize,
    /// First class attaining `value`.
    pub argmax_class: usize,
}

/// Wire form: `{"n": .., "k": .., "classes": [[..], ..]}` with residues ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringJson {
    pub n: usize,
    pub k: usize,
    pub classes: Vec<Vec<usize>>,
}

impl Coloring {
    /// Builds a coloring from a per-residue class index.
    pub fn from_assignment(k: usize, assignment: Vec<usize>) -> Result<Self> {
        let n = assignment.len();
        if n == 0 || k == 0 {
            return Err(Error::MalformedColoring("need n >= 1 and k >= 1".into()));
        }
        if let Some(r) = assignment.iter().position(|&c| c >= k) {
            return Err(Error::MalformedColoring(format!(
                "residue {r} has class {} but k = {k}",
                assignment[r]
            )));
        }
        Ok(Self { n, k, assignment })
    }

    /// Builds a coloring from explicit classes, which must partition `Z_n`.
    pub fn from_classes(n: usize, classes: &[Vec<usize>]) -> Result<Self> {
        let k = classes.len();
        let mut assignment = vec![usize::MAX; n];
        for (c, class) in classes.iter().enumerate() {
            for &r in class {
                if r >= n {
                    return Err(Error::ResidueOutOfRange { residue: r, n });
                }
                if assignment[r] != usize::MAX {
                    return Err(Error::MalformedColoring(format!(
                        "residue {r} appears in more than one class"
                    )));
                }
                assignment[r] = c;
            }
        }
        if let Some(r) = assignment.iter().position(|&c| c == usize::MAX) {
            return Err(Error::MalformedColoring(format!("residue {r} is uncolored")));
        }
        Self::from_assignment(k, assignment)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn class(&self, c: usize) -> ResidueSet {
        ResidueSet::from_residues(
            self.n,
            (0..self.n).filter(|&r| self.assignment[r] == c),
        )
        .expect("residues below n")
    }

    pub fn classes(&self) -> Vec<ResidueSet> {
        (0..self.k).map(|c| self.class(c)).collect()
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &c in &self.assignment {
            sizes[c] += 1;
        }
        sizes
    }

    pub fn to_json(&self) -> ColoringJson {
        ColoringJson {
            n: self.n,
            k: self.k,
            classes: self.classes().iter().map(ResidueSet::to_vec).collect(),
        }
    }

    pub fn from_json(json: &ColoringJson) -> Result<Self> {
        if json.classes.len() != json.k {
            return Err(Error::MalformedColoring(format!(
                "k = {} but {} classes given",
                json.k,
                json.classes.len()
            )));
        }
        Self::from_classes(json.n, &json.classes)
    }
}

impl Serialize for Coloring {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Coloring {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let json = ColoringJson::deserialize(d)?;
        Coloring::from_json(&json).map_err(serde::de::Error::custom)
    }
}

/// Consecutive non-wrapping blocks laid out from 0: with `n = ak + b`, `b` blocks of
/// length `a + 1` then `k - b` blocks of length `a` (empty when `k > n`).
pub fn block_partition(n: usize, k: usize) -> Result<Coloring> {
    GroupParams::new(n, k)?;
    let (a, b) = (n / k, n % k);
    let mut assignment = Vec::with_capacity(n);
    for c in 0..k {
        let len = if c < b { a + 1 } else { a };
        assignment.extend(std::iter::repeat_n(c, len));
    }
    Coloring::from_assignment(k, assignment)
}

/// One class per coset of the subgroup of index `q(n, k)`. Surplus colors are created by
/// repeatedly halving the largest class (lowest index on ties) into the lower and upper halves
/// of its ascending member list; the upper half becomes a new class. Once every class is a
/// singleton the remaining classes stay empty.
pub fn coset_partition(n: usize, k: usize) -> Result<Coloring> {
    GroupParams::new(n, k)?;
    let q = largest_divisor_at_most(n, k)?;
    let h = SubgroupContext::new(n, n / q)?;
    let mut classes: Vec<Vec<usize>> = h.cosets().iter().map(ResidueSet::to_vec).collect();
    while classes.len() < k {
        let (largest, size) = classes
            .iter()
            .enumerate()
            .map(|(i, c)| (i, c.len()))
            .fold((0, 0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if size <= 1 {
            classes.push(Vec::new());
            continue;
        }
        let upper = classes[largest].split_off(size.div_ceil(2));
        classes.push(upper);
    }
    Coloring::from_classes(n, &classes)
}

pub fn evaluate(c: &Coloring) -> Evaluation {
    let per_class_sumset_sizes: Vec<usize> = c
        .classes()
        .iter()
        .map(|a| restricted_sumset(a).len())
        .collect();
    let value = per_class_sumset_sizes.iter().copied().max().unwrap_or(0);
    let argmax_class = per_class_sumset_sizes
        .iter()
        .position(|&s| s == value)
        .unwrap_or(0);
    Evaluation {
        per_class_sumset_sizes,
        value,
        argmax_class,
    }
}

/// The better of the block and coset constructions (the block coloring on ties).
pub fn best_construction(n: usize, k: usize) -> Result<(Coloring, Evaluation)> {
    let block = block_partition(n, k)?;
    let coset = coset_partition(n, k)?;
    let (eb, ec) = (evaluate(&block), evaluate(&coset));
    Ok(if ec.value < eb.value {
        (coset, ec)
    } else {
        (block, eb)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::coset_sumset_size;

    fn lists(c: &Coloring) -> Vec<Vec<usize>> {
        c.classes().iter().map(ResidueSet::to_vec).collect()
    }

    #[test]
    fn block_examples() {
        assert_eq!(
            lists(&block_partition(12, 5).unwrap()),
            vec![vec![0, 1, 2], vec![3, 4, 5], vec![6, 7], vec![8, 9], vec![10, 11]]
        );
        assert_eq!(
            lists(&block_partition(7, 2).unwrap()),
            vec![vec![0, 1, 2, 3], vec![4, 5, 6]]
        );
        assert_eq!(
            lists(&block_partition(6, 6).unwrap()),
            (0..6).map(|r| vec![r]).collect::<Vec<_>>()
        );
        let c = block_partition(3, 5).unwrap();
        assert_eq!(c.class_sizes(), vec![1, 1, 1, 0, 0]);
        assert!(block_partition(1, 2).is_err());
    }

    #[test]
    fn block_partition_shape() {
        for n in 2..=100 {
            for k in 2..=n {
                let c = block_partition(n, k).unwrap();
                let sizes = c.class_sizes();
                let (lo, hi) = (*sizes.iter().min().unwrap(), *sizes.iter().max().unwrap());
                assert!(hi - lo <= 1);
                assert_eq!(hi, n.div_ceil(k));
                // non-wrapping: each class is an increasing run
                for class in c.classes() {
                    if let (Some(a), Some(b)) = (class.min(), class.iter().last()) {
                        assert_eq!(b - a + 1, class.len());
                    }
                }
            }
        }
    }

    #[test]
    fn coset_examples() {
        assert_eq!(
            lists(&coset_partition(12, 6).unwrap()),
            (0..6).map(|r| vec![r, r + 6]).collect::<Vec<_>>()
        );
        assert_eq!(
            lists(&coset_partition(9, 3).unwrap()),
            vec![vec![0, 3, 6], vec![1, 4, 7], vec![2, 5, 8]]
        );
        let c = coset_partition(8, 5).unwrap();
        assert_eq!(
            lists(&c),
            vec![vec![0], vec![1, 5], vec![2, 6], vec![3, 7], vec![4]]
        );
        assert!(evaluate(&c).value <= 1);
    }

    #[test]
    fn coset_partition_respects_cosets() {
        for n in 2..=60 {
            for k in 2..=n {
                let c = coset_partition(n, k).unwrap();
                let q = largest_divisor_at_most(n, k).unwrap();
                for class in c.classes() {
                    if let Some(a) = class.min() {
                        assert!(class.iter().all(|x| x % q == a % q));
                    }
                }
                assert!(evaluate(&c).value <= coset_sumset_size(n / q).unwrap());
            }
        }
    }

    #[test]
    fn evaluate_examples() {
        let e = evaluate(&block_partition(7, 2).unwrap());
        assert_eq!(e.per_class_sumset_sizes, vec![5, 3]);
        assert_eq!((e.value, e.argmax_class), (5, 0));
        let e = evaluate(&coset_partition(9, 3).unwrap());
        assert_eq!(e.per_class_sumset_sizes, vec![3, 3, 3]);
        assert_eq!(evaluate(&block_partition(5, 5).unwrap()).value, 0);
    }

    #[test]
    fn best_construction_examples() {
        let (c, e) = best_construction(9, 3).unwrap();
        assert_eq!((c, e.value), (block_partition(9, 3).unwrap(), 3));
        let (c, e) = best_construction(8, 4).unwrap();
        assert_eq!((c, e.value), (block_partition(8, 4).unwrap(), 1));
        let (c, e) = best_construction(10, 2).unwrap();
        assert_eq!((c, e.value), (coset_partition(10, 2).unwrap(), 5));
    }

    #[test]
    fn json_round_trip_and_validation() {
        let c = coset_partition(8, 5).unwrap();
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(text, r#"{"n":8,"k":5,"classes":[[0],[1,5],[2,6],[3,7],[4]]}"#);
        let back: Coloring = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);

        let overlapping = r#"{"n":3,"k":2,"classes":[[0,1],[1,2]]}"#;
        assert!(serde_json::from_str::<Coloring>(overlapping).is_err());
        let missing = r#"{"n":3,"k":2,"classes":[[0],[1]]}"#;
        assert!(serde_json::from_str::<Coloring>(missing).is_err());
        let bad_k = r#"{"n":2,"k":3,"classes":[[0],[1]]}"#;
        assert!(serde_json::from_str::<Coloring>(bad_k).is_err());
    }
}
