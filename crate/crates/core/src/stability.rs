//! Concentration bounds for a set relative to the cosets of a subgroup `H` with `|H| = t >= 3`.
//!
//! With `C` a heaviest coset, `x = |A ∩ C|` and `r` the number of other occupied cosets:
//!
//! * cross bound: `|A +^ A| >= α* + r·x` where `α* = max{0, min{p(t), 2x - 3}}`. The sums
//!   `y + (A ∩ C)` for one `y` per other coset `D` land in the distinct cosets `D + C`, none of
//!   which is `2C`.
//! * internal bound: `|A +^ A| >= Σ_E max_{2C = E} α(C)`, grouping cosets by their double.
//! * threshold: if `|A +^ A| <= t + s` then `r <= (t + s - α*) / x`, and when
//!   `2x - 3 <= p(t)` and `3x > t + s + 3` the set lies in a single coset.

use serde::Serialize;

use crate::arith::{least_prime_divisor, two_x_minus_three, SubgroupContext};
use crate::error::{Error, Result};
use crate::residue::ResidueSet;
use crate::sumset::restricted_sumset;

/// All bound quantities for one `(A, H)` pair, plus the true sumset size.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub n: usize,
    pub t: usize,
    pub p_t: usize,
    pub q_h: usize,
    pub x: usize,
    pub heaviest: Option<usize>,
    /// Cosets attaining `x`.
    pub tie_count: usize,
    pub r: usize,
    pub sigma_h: usize,
    pub alpha_star: usize,
    pub cross_bound: usize,
    pub internal_bound: usize,
    pub combined_bound: usize,
    pub actual: usize,
    pub cross_tight: bool,
    pub internal_tight: bool,
    pub threshold: Option<Threshold>,
}

/// Outcome of the concentration threshold for slack `s`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Threshold {
    pub s_slack: usize,
    /// Whether `|A +^ A| <= t + s`; the remaining fields are only filled in when it does.
    pub hypothesis_holds: bool,
    /// `(t + s - α*) / x`, absent for `x = 0`.
    pub r_cap: Option<f64>,
    /// Whether `2x - 3 <= p(t)` and `3x > t + s + 3`, which force `r = 0`.
    pub concentrated: Option<bool>,
}

/// `max{0, min{p(t), 2x - 3}}`.
pub fn alpha_star(t: usize, x: usize) -> Result<usize> {
    if t < 3 {
        return Err(Error::SubgroupTooSmall(t));
    }
    Ok(least_prime_divisor(t)?.min(two_x_minus_three(x)))
}

fn require_large(h: &SubgroupContext) -> Result<usize> {
    let t = h.size();
    if t < 3 {
        return Err(Error::SubgroupTooSmall(t));
    }
    least_prime_divisor(t)
}

/// `Σ_E max_{C : 2C = E} α(C)` with `α(C) = max{0, min{p(t), 2|A ∩ C| - 3}}`.
pub fn internal_sums_bound(a: &ResidueSet, h: &SubgroupContext) -> Result<usize> {
    let p_t = require_large(h)?;
    let counts = h.occupancy(a)?;
    let q = h.index();
    let mut fiber_max = vec![0usize; q];
    for (c, &count) in counts.iter().enumerate() {
        let e = (2 * c) % q;
        fiber_max[e] = fiber_max[e].max(p_t.min(two_x_minus_three(count)));
    }
    Ok(fiber_max.into_iter().sum())
}

/// Computes every bound and the true size without checking them against each other.
pub fn measure(a: &ResidueSet, h: &SubgroupContext) -> Result<StabilityReport> {
    let p_t = require_large(h)?;
    let stats = h.quotient_stats(a)?;
    let alpha = p_t.min(two_x_minus_three(stats.x));
    let r = stats.r_h.saturating_sub(1);
    let cross = alpha + r * stats.x;
    let internal = internal_sums_bound(a, h)?;
    let actual = restricted_sumset(a).len();
    Ok(StabilityReport {
        n: h.n(),
        t: h.size(),
        p_t,
        q_h: h.index(),
        x: stats.x,
        heaviest: stats.heaviest,
        tie_count: stats.tie_count,
        r,
        sigma_h: stats.sigma_h,
        alpha_star: alpha,
        cross_bound: cross,
        internal_bound: internal,
        combined_bound: cross.max(internal),
        actual,
        cross_tight: actual == cross,
        internal_tight: actual == internal,
        threshold: None,
    })
}

/// Fills in the threshold fields for slack `s`, without asserting the conclusion.
pub fn evaluate_threshold(report: &StabilityReport, s: usize) -> Threshold {
    let (t, x, alpha) = (report.t, report.x, report.alpha_star);
    let hypothesis_holds = report.actual <= t + s;
    let mut threshold = Threshold {
        s_slack: s,
        hypothesis_holds,
        r_cap: None,
        concentrated: None,
    };
    if hypothesis_holds && x > 0 {
        threshold.r_cap = Some((t + s - alpha) as f64 / x as f64);
        threshold.concentrated =
            Some(two_x_minus_three(x) <= report.p_t && 3 * x > t + s + 3);
    }
    threshold
}

/// Heaviest-coset quantities, `α*`, the cross bound and the true size; panics if the cross
/// bound fails.
pub fn cross_coset_bound(a: &ResidueSet, h: &SubgroupContext) -> Result<StabilityReport> {
    let report = measure(a, h)?;
    assert!(
        report.actual >= report.cross_bound,
        "cross-coset bound violated: {} < {} for {a:?}",
        report.actual,
        report.cross_bound
    );
    Ok(report)
}

/// Both bounds, their maximum and tightness flags; panics if either bound fails.
pub fn combined_bound(a: &ResidueSet, h: &SubgroupContext) -> Result<StabilityReport> {
    let report = cross_coset_bound(a, h)?;
    assert!(
        report.actual >= report.internal_bound,
        "internal-sums bound violated: {} < {} for {a:?}",
        report.actual,
        report.internal_bound
    );
    Ok(report)
}

/// The combined report with the concentration threshold for slack `s`. When the hypothesis
/// `|A +^ A| <= t + s` holds, checks `r <= r_cap` and, if the threshold is met, `r = 0`.
pub fn threshold_check(a: &ResidueSet, h: &SubgroupContext, s: i64) -> Result<StabilityReport> {
    if s < 0 {
        return Err(Error::InvalidArgument(format!("slack must be >= 0, got {s}")));
    }
    let mut report = combined_bound(a, h)?;
    let threshold = evaluate_threshold(&report, s as usize);
    if threshold.hypothesis_holds && report.x > 0 {
        let room = report.t + s as usize - report.alpha_star;
        assert!(report.r * report.x <= room, "r = {} above cap for {a:?}", report.r);
        if threshold.concentrated == Some(true) {
            assert_eq!(report.r, 0, "threshold met but {a:?} spans several cosets");
        }
    }
    report.threshold = Some(threshold);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::subgroup_of_size;

    fn set(n: usize, xs: &[usize]) -> ResidueSet {
        ResidueSet::from_residues(n, xs.iter().copied()).unwrap()
    }

    #[test]
    fn alpha_star_examples() {
        assert_eq!(alpha_star(3, 2), Ok(1));
        assert_eq!(alpha_star(9, 5), Ok(3));
        assert_eq!(alpha_star(7, 1), Ok(0));
        assert_eq!(alpha_star(7, 0), Ok(0));
        assert_eq!(alpha_star(2, 2), Err(Error::SubgroupTooSmall(2)));
    }

    #[test]
    fn cross_examples() {
        let h = subgroup_of_size(9, 3).unwrap();
        let r = cross_coset_bound(&set(9, &[0, 3, 1]), &h).unwrap();
        assert_eq!((r.x, r.r, r.alpha_star, r.cross_bound, r.actual), (2, 1, 1, 3, 3));
        assert!(r.cross_tight);

        let r = cross_coset_bound(&set(9, &[1, 7]), &h).unwrap();
        assert_eq!((r.r, r.cross_bound), (0, r.alpha_star));

        let r = cross_coset_bound(&set(9, &[0, 3, 6, 1]), &h).unwrap();
        assert_eq!((r.x, r.r, r.alpha_star, r.cross_bound, r.actual), (3, 1, 3, 6, 6));

        let small = subgroup_of_size(8, 2).unwrap();
        assert_eq!(
            cross_coset_bound(&set(8, &[0]), &small),
            Err(Error::SubgroupTooSmall(2))
        );
    }

    #[test]
    fn internal_examples() {
        // q_H = 3, t = 7
        let h = subgroup_of_size(21, 7).unwrap();
        let a = set(21, &[0, 3, 6, 1, 4, 7]);
        assert_eq!(internal_sums_bound(&a, &h), Ok(6));
        assert_eq!(internal_sums_bound(&set(21, &[0, 1, 2]), &h), Ok(0));

        let h = subgroup_of_size(12, 4).unwrap();
        let a = set(12, &[0, 3, 1, 4]);
        assert_eq!(internal_sums_bound(&a, &h), Ok(2));
        assert!(restricted_sumset(&a).len() >= 2);
    }

    #[test]
    fn internal_bound_groups_even_index_fibers() {
        // q_H = 4: cosets 0 and 2 both double to coset 0, so only the larger α counts
        let h = subgroup_of_size(12, 3).unwrap();
        let a = set(12, &[0, 4, 2, 6, 10]);
        let per_coset: Vec<usize> = h.occupancy(&a).unwrap();
        assert_eq!(per_coset, vec![2, 0, 3, 0]);
        assert_eq!(internal_sums_bound(&a, &h), Ok(3));
    }

    #[test]
    fn combined_examples() {
        // s = 2 tied cosets of size x = 4 in Z_21 with t = 7 (no capping, q_H = 3 odd)
        let h = subgroup_of_size(21, 7).unwrap();
        let a = set(21, &[0, 3, 6, 9, 1, 4, 7, 10]);
        let r = combined_bound(&a, &h).unwrap();
        assert_eq!((r.internal_bound, r.cross_bound, r.combined_bound), (10, 9, 10));
        assert_eq!(r.tie_count, 2);

        let a = set(21, &[0, 3, 6, 1, 4, 7]);
        let r = combined_bound(&a, &h).unwrap();
        assert_eq!((r.internal_bound, r.cross_bound), (6, 6));

        let a = set(21, &[0, 3, 6, 9]);
        let r = combined_bound(&a, &h).unwrap();
        assert_eq!((r.r, r.cross_bound, r.internal_bound), (0, 5, 5));
    }

    #[test]
    fn threshold_examples() {
        let h = subgroup_of_size(9, 3).unwrap();
        let r = threshold_check(&set(9, &[1, 4, 7]), &h, 0).unwrap();
        let th = r.threshold.unwrap();
        assert!(th.hypothesis_holds);
        assert_eq!(th.concentrated, Some(true));
        assert_eq!(r.r, 0);

        let r = threshold_check(&ResidueSet::empty(9), &h, 0).unwrap();
        let th = r.threshold.unwrap();
        assert!(th.hypothesis_holds);
        assert_eq!((th.r_cap, th.concentrated), (None, None));

        let r = threshold_check(&ResidueSet::full(9), &h, 0).unwrap();
        assert!(!r.threshold.unwrap().hypothesis_holds);

        assert!(threshold_check(&set(9, &[0]), &h, -1).is_err());
    }

    #[test]
    fn threshold_exhaustive_on_z9() {
        let h = subgroup_of_size(9, 3).unwrap();
        for mask in 0u64..(1 << 9) {
            let a = ResidueSet::from_word(9, mask);
            let r = threshold_check(&a, &h, 0).unwrap();
            let th = r.threshold.as_ref().unwrap();
            if th.hypothesis_holds && r.x == 3 {
                assert_eq!(th.concentrated, Some(true));
                assert_eq!(r.r, 0);
            }
        }
    }
}
