//! Exhaustive verification suites reporting case and violation counts.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{
    coset_sumset_size, divisors, is_prime, least_prime_divisor, two_x_minus_three, GroupParams,
    SubgroupContext,
};
use crate::coloring::best_construction;
use crate::error::{Error, Result};
use crate::oracle::{brute_force_phi, enumerate_optimal};
use crate::residue::ResidueSet;
use crate::stability::measure;
use crate::sumset::{classify, lift_and_check_window, restricted_sumset, sumset_word};
use crate::value::{phi_lower_bound, phi_upper_bound};

const MAX_REPORTED: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    /// Prime formula against the oracle.
    PrimeFormula,
    /// Every optimal prime coloring has a progression class of size `m`.
    PrimeStructure,
    /// Lower bound <= oracle <= upper bound, upper bound attained by a construction.
    Sandwich,
    /// Interval regime exactness.
    IntervalRegime,
    /// Coset regime exactness.
    CosetRegime,
    /// Cross-coset and internal-sums bounds.
    StabilityBounds,
    /// Concentration threshold, contrapositive form.
    Concentration,
    BlockLaw,
    CosetLaw,
    WindowLaw,
    CrossCosets,
    LowerBound,
    ThreeSet,
    InternalGap,
}

pub const ALL_SUITES: [Suite; 14] = [
    Suite::PrimeFormula,
    Suite::PrimeStructure,
    Suite::Sandwich,
    Suite::IntervalRegime,
    Suite::CosetRegime,
    Suite::StabilityBounds,
    Suite::Concentration,
    Suite::BlockLaw,
    Suite::CosetLaw,
    Suite::WindowLaw,
    Suite::CrossCosets,
    Suite::LowerBound,
    Suite::ThreeSet,
    Suite::InternalGap,
];

impl Suite {
    pub fn name(&self) -> &'static str {
        match self {
            Suite::PrimeFormula => "prime-formula",
            Suite::PrimeStructure => "prime-structure",
            Suite::Sandwich => "sandwich",
            Suite::IntervalRegime => "interval-regime",
            Suite::CosetRegime => "coset-regime",
            Suite::StabilityBounds => "stability-bounds",
            Suite::Concentration => "concentration",
            Suite::BlockLaw => "block-law",
            Suite::CosetLaw => "coset-law",
            Suite::WindowLaw => "window-law",
            Suite::CrossCosets => "cross-cosets",
            Suite::LowerBound => "lower-bound",
            Suite::ThreeSet => "three-set",
            Suite::InternalGap => "internal-gap",
        }
    }

    /// Default `nmax` (or `pmax` for the prime suites).
    pub fn default_bound(&self) -> usize {
        match self {
            Suite::PrimeFormula | Suite::PrimeStructure => 13,
            Suite::Sandwich | Suite::IntervalRegime | Suite::CosetRegime | Suite::StabilityBounds | Suite::Concentration => 14,
            Suite::BlockLaw | Suite::WindowLaw | Suite::CrossCosets => 30,
            Suite::CosetLaw => 60,
            Suite::LowerBound => 16,
            Suite::ThreeSet => 64,
            Suite::InternalGap => 5,
        }
    }

    /// Terse alternative spelling accepted on the command line.
    pub fn short_name(&self) -> &'static str {
        match self {
            Suite::PrimeFormula => "thm1",
            Suite::PrimeStructure => "thm2",
            Suite::Sandwich => "thm3",
            Suite::IntervalRegime => "thm4",
            Suite::CosetRegime => "thm5",
            Suite::StabilityBounds => "thm6",
            Suite::Concentration => "thm7",
            Suite::BlockLaw => "lemma-block",
            Suite::CosetLaw => "lemma-coset",
            Suite::WindowLaw => "lemma-window",
            Suite::CrossCosets => "lemma-cross",
            Suite::LowerBound => "lemma-lower",
            Suite::InternalGap => "remark-internal",
            Suite::ThreeSet => "three-set",
        }
    }

    pub fn uses_pmax(&self) -> bool {
        matches!(self, Suite::PrimeFormula | Suite::PrimeStructure)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ALL_SUITES
            .iter()
            .copied()
            .find(|suite| suite.name() == s || suite.short_name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub bound: usize,
    pub cases: u64,
    pub violations: u64,
    /// The first few violations, in sweep order.
    pub examples: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Debug, Default, Clone)]
struct Tally {
    cases: u64,
    violations: u64,
    examples: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.violations += 1;
            if self.examples.len() < MAX_REPORTED {
                self.examples.push(describe());
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.cases += other.cases;
        self.violations += other.violations;
        for e in other.examples {
            if self.examples.len() < MAX_REPORTED {
                self.examples.push(e);
            }
        }
        self
    }

    fn into_report(self, suite: Suite, bound: usize) -> SuiteReport {
        SuiteReport {
            suite: suite.name().to_string(),
            bound,
            cases: self.cases,
            violations: self.violations,
            examples: self.examples,
        }
    }
}

/// Runs in parallel over `items`, merging tallies in item order.
fn sweep<T, F>(items: Vec<T>, f: F) -> Result<Tally>
where
    T: Send,
    F: Fn(T) -> Result<Tally> + Sync + Send,
{
    let parts: Vec<Result<Tally>> = items.into_par_iter().map(&f).collect();
    parts
        .into_iter()
        .try_fold(Tally::default(), |acc, part| Ok(acc.merge(part?)))
}

fn nk_pairs(nmax: usize) -> Vec<(usize, usize)> {
    (2..=nmax)
        .flat_map(|n| (2..=n).map(move |k| (n, k)))
        .collect()
}

/// Runs one suite with `bound` as `nmax` (or `pmax`), defaulting per suite.
pub fn run_suite(suite: Suite, bound: Option<usize>) -> Result<SuiteReport> {
    let bound = bound.unwrap_or_else(|| suite.default_bound());
    let tally = match suite {
        Suite::PrimeFormula => prime_formula(bound)?,
        Suite::PrimeStructure => prime_structure(bound)?,
        Suite::Sandwich => sandwich(bound)?,
        Suite::IntervalRegime => interval_regime(bound)?,
        Suite::CosetRegime => coset_regime(bound)?,
        Suite::StabilityBounds => stability_bounds(bound)?,
        Suite::Concentration => concentration(bound)?,
        Suite::BlockLaw => block_law(bound)?,
        Suite::CosetLaw => coset_law(bound)?,
        Suite::WindowLaw => window_law(bound)?,
        Suite::CrossCosets => cross_cosets(bound)?,
        Suite::LowerBound => lower_bound_law(bound)?,
        Suite::ThreeSet => three_sets(bound)?,
        Suite::InternalGap => internal_gap(bound)?,
    };
    Ok(tally.into_report(suite, bound))
}

fn prime_formula(pmax: usize) -> Result<Tally> {
    let pairs: Vec<_> = (2..=pmax)
        .filter(|&p| is_prime(p))
        .flat_map(|p| (2..=p).map(move |k| (p, k)))
        .collect();
    sweep(pairs, |(p, k)| {
        let mut t = Tally::default();
        let formula = two_x_minus_three(p.div_ceil(k));
        let oracle = brute_force_phi(p, k)?.value;
        t.check(oracle == formula, || {
            format!("p={p} k={k}: oracle {oracle} != formula {formula}")
        });
        Ok(t)
    })
}

fn prime_structure(pmax: usize) -> Result<Tally> {
    let mut tally = Tally::default();
    for p in (2..=pmax).filter(|&p| is_prime(p)) {
        for k in 2..=p {
            let m = p.div_ceil(k);
            if m < 5 || 2 * m - 3 >= p {
                continue;
            }
            let target = 2 * m - 3;
            for c in enumerate_optimal(p, k, 1 << 22)? {
                let classes = c.classes();
                let sizes: Vec<usize> = classes.iter().map(|a| restricted_sumset(a).len()).collect();
                let max_value = sizes.iter().copied().max().unwrap_or(0);
                let oversized = classes.iter().any(|a| a.len() > m);
                let has_progression = classes.iter().zip(&sizes).any(|(a, &s)| {
                    a.len() == m && s == target && classify(a, true).is_progression()
                });
                tally.check(max_value == target && !oversized && has_progression, || {
                    format!("p={p} k={k}: optimal coloring {:?} lacks a progression class", c.assignment())
                });
            }
        }
    }
    Ok(tally)
}

fn sandwich(nmax: usize) -> Result<Tally> {
    sweep(nk_pairs(nmax), |(n, k)| {
        let mut t = Tally::default();
        let lower = phi_lower_bound(n, k)?;
        let upper = phi_upper_bound(n, k)?;
        let oracle = brute_force_phi(n, k)?.value;
        let built = best_construction(n, k)?.1.value;
        t.check(lower <= oracle && oracle <= upper && built == upper, || {
            format!("n={n} k={k}: lower {lower}, oracle {oracle}, upper {upper}, construction {built}")
        });
        Ok(t)
    })
}

fn interval_regime(nmax: usize) -> Result<Tally> {
    sweep(nk_pairs(nmax), |(n, k)| {
        let mut t = Tally::default();
        let g = GroupParams::new(n, k)?;
        if g.interval_size() <= g.p_n as i64 {
            let formula = g.interval_size().max(0) as usize;
            let oracle = brute_force_phi(n, k)?.value;
            t.check(oracle == formula, || {
                format!("n={n} k={k}: oracle {oracle} != {formula}")
            });
        }
        Ok(t)
    })
}

fn coset_regime(nmax: usize) -> Result<Tally> {
    sweep(nk_pairs(nmax), |(n, k)| {
        let mut t = Tally::default();
        let g = GroupParams::new(n, k)?;
        let f = g.coset_value();
        if (f as i64) <= g.interval_size().min(g.p_n as i64) {
            let oracle = brute_force_phi(n, k)?.value;
            t.check(oracle == f, || format!("n={n} k={k}: oracle {oracle} != {f}"));
        }
        Ok(t)
    })
}

/// `(n, t)` with `t | n`, `t >= 3`, for `n <= nmax`.
fn large_subgroups(nmax: usize) -> Vec<(usize, usize)> {
    (3..=nmax)
        .flat_map(|n| divisors(n).into_iter().filter(|&t| t >= 3).map(move |t| (n, t)))
        .collect()
}

fn all_subsets_of(n: usize) -> impl Iterator<Item = ResidueSet> {
    assert!(n < 64);
    (0u64..(1 << n)).map(move |mask| ResidueSet::from_word(n, mask))
}

fn stability_bounds(nmax: usize) -> Result<Tally> {
    sweep(large_subgroups(nmax), |(n, t)| {
        let mut tally = Tally::default();
        let h = SubgroupContext::new(n, t)?;
        for a in all_subsets_of(n) {
            let r = measure(&a, &h)?;
            tally.check(r.actual >= r.cross_bound, || {
                format!("n={n} t={t} A={a}: |A+A| {} < cross {}", r.actual, r.cross_bound)
            });
            tally.check(r.actual >= r.internal_bound, || {
                format!("n={n} t={t} A={a}: |A+A| {} < internal {}", r.actual, r.internal_bound)
            });
        }
        Ok(tally)
    })
}

fn concentration(nmax: usize) -> Result<Tally> {
    sweep(large_subgroups(nmax), |(n, t)| {
        let mut tally = Tally::default();
        let h = SubgroupContext::new(n, t)?;
        let p_t = least_prime_divisor(t)?;
        for a in all_subsets_of(n) {
            let r = measure(&a, &h)?;
            for s in 0..=3usize {
                let x = r.x;
                // r <= (t + s - α*) / x whenever |A+A| <= t + s
                if r.actual <= t + s && x > 0 {
                    tally.check(r.r * x + r.alpha_star <= t + s, || {
                        format!("n={n} t={t} s={s} A={a}: r={} exceeds cap", r.r)
                    });
                }
                if two_x_minus_three(x) <= p_t && 3 * x > t + s + 3 && r.r >= 1 {
                    tally.check(r.actual > t + s, || {
                        format!("n={n} t={t} s={s} A={a}: spans {} cosets with |A+A| = {}", r.r + 1, r.actual)
                    });
                }
            }
        }
        Ok(tally)
    })
}

fn block_law(nmax: usize) -> Result<Tally> {
    sweep((2..=nmax).collect(), |n| {
        let mut tally = Tally::default();
        for len in 0..=n {
            for start in 0..=n - len {
                let block = ResidueSet::arc(n, start, len)?;
                let size = restricted_sumset(&block).len();
                let integer = two_x_minus_three(len);
                let equality_expected = len < 2 || 2 * len - 3 <= n;
                let ok = if equality_expected {
                    size == integer
                } else {
                    size < integer
                };
                tally.check(ok, || {
                    format!("n={n} block [{start}, {}): size {size}, 2t-3 = {integer}", start + len)
                });
            }
        }
        Ok(tally)
    })
}

/// Deterministic spread of sample masks for subgroups too large to enumerate.
fn sample_masks(bits: usize, count: u64) -> Vec<u64> {
    let full = if bits >= 64 { u64::MAX } else { (1u64 << bits) - 1 };
    (0..count)
        .map(|i| (i.wrapping_add(1)).wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(17) & full)
        .collect()
}

fn coset_law(nmax: usize) -> Result<Tally> {
    let pairs: Vec<(usize, usize)> = (1..=nmax)
        .flat_map(|n| divisors(n).into_iter().map(move |t| (n, t)))
        .collect();
    sweep(pairs, |(n, t)| {
        let mut tally = Tally::default();
        let h = SubgroupContext::new(n, t)?;
        let f = coset_sumset_size(t)?;
        let q = h.index();
        let masks: Vec<u64> = if t <= 10 {
            (0u64..(1 << t)).collect()
        } else {
            sample_masks(t, 512)
        };
        for (i, coset) in h.cosets().iter().enumerate() {
            let size = restricted_sumset(coset).len();
            tally.check(size == f, || format!("n={n} t={t} coset {i}: size {size} != f(t) = {f}"));
            let members = coset.to_vec();
            let doubled = &h.cosets()[(2 * i) % q];
            for &mask in &masks {
                let b = ResidueSet::from_residues(
                    n,
                    members.iter().enumerate().filter(|(j, _)| mask >> j & 1 == 1).map(|(_, &x)| x),
                )?;
                let sums = restricted_sumset(&b);
                tally.check(sums.is_subset(doubled) && sums.len() <= f, || {
                    format!("n={n} t={t} B={b}: sums {sums} escape 2C")
                });
            }
        }
        Ok(tally)
    })
}

fn window_law(nmax: usize) -> Result<Tally> {
    sweep((2..=nmax).collect(), |n| {
        let mut tally = Tally::default();
        let p = least_prime_divisor(n)?;
        let ni = n as i64;
        for start in -2 * ni..2 * ni {
            for width in 0..=n + 1 {
                let window: Vec<i64> = (start..=start + width as i64).collect();
                let claimed = lift_and_check_window(&window, n)?;
                let images: std::collections::HashSet<i64> =
                    window.iter().map(|v| v.rem_euclid(ni)).collect();
                let injective = images.len() == window.len();
                let ok = if width < p {
                    claimed && injective
                } else {
                    !claimed
                };
                tally.check(ok, || {
                    format!("n={n} window [{start}, {}]: claimed {claimed}, injective {injective}", start + width as i64)
                });
            }
        }
        Ok(tally)
    })
}

fn cross_cosets(nmax: usize) -> Result<Tally> {
    let pairs: Vec<(usize, usize)> = (1..=nmax)
        .flat_map(|n| divisors(n).into_iter().map(move |t| (n, t)))
        .collect();
    sweep(pairs, |(n, t)| {
        let mut tally = Tally::default();
        let h = SubgroupContext::new(n, t)?;
        let cosets = h.cosets();
        for (ci, c) in cosets.iter().enumerate() {
            let mut images: Vec<usize> = Vec::with_capacity(cosets.len());
            for d in cosets {
                // full Minkowski sum D + C, located among the cosets by membership
                let sum = ResidueSet::from_residues(
                    n,
                    d.iter().flat_map(|x| c.iter().map(move |y| (x + y) % n)),
                )?;
                let hit = cosets.iter().position(|e| *e == sum);
                match hit {
                    Some(e) => images.push(e),
                    None => images.push(usize::MAX),
                }
            }
            let mut sorted = images.clone();
            sorted.sort_unstable();
            let is_permutation = sorted == (0..cosets.len()).collect::<Vec<_>>();
            tally.check(is_permutation, || {
                format!("n={n} t={t} C={ci}: D -> D + C gives {images:?}")
            });
        }
        Ok(tally)
    })
}

fn lower_bound_law(nmax: usize) -> Result<Tally> {
    sweep((2..=nmax).collect(), |n| {
        let mut tally = Tally::default();
        let p = least_prime_divisor(n)?;
        for mask in 0u64..(1 << n) {
            let size = mask.count_ones() as usize;
            if size < 2 {
                continue;
            }
            let sums = sumset_word(mask, n).count_ones() as usize;
            let bound = p.min(2 * size - 3);
            tally.check(sums >= bound, || format!("n={n} mask {mask:#b}: {sums} < {bound}"));
        }
        Ok(tally)
    })
}

fn three_sets(nmax: usize) -> Result<Tally> {
    sweep((3..=nmax).collect(), |n| {
        let mut tally = Tally::default();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let set = ResidueSet::from_residues(n, [a, b, c])?;
                    let size = restricted_sumset(&set).len();
                    tally.check(size == 3, || format!("n={n} A={set}: size {size}"));
                }
            }
        }
        Ok(tally)
    })
}

/// `s` cosets of `H` (index 3, `|H| = 7`) each holding `x` elements: the internal bound exceeds
/// the cross bound by exactly `(s - 1)(x - 3)`. Covers `x` in `3..=xmax`, `s` in `{2, 3}`.
fn internal_gap(xmax: usize) -> Result<Tally> {
    let (n, t) = (21usize, 7usize);
    let h = SubgroupContext::new(n, t)?;
    let mut tally = Tally::default();
    for x in 3..=xmax.min(5) {
        for s in 2..=3usize {
            let a = ResidueSet::from_residues(
                n,
                h.cosets()[..s].iter().flat_map(|c| c.iter().take(x).collect::<Vec<_>>()),
            )?;
            let r = measure(&a, &h)?;
            let gap = r.internal_bound as i64 - r.cross_bound as i64;
            let expected = ((s - 1) * (x - 3)) as i64;
            tally.check(
                gap == expected && r.actual >= r.combined_bound && r.tie_count == s,
                || format!("x={x} s={s}: internal - cross = {gap}, expected {expected}"),
            );
        }
    }
    Ok(tally)
}
