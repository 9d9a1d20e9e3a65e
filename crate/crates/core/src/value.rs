//! Closed-form bounds and exact values of the minimax `Φ̂_k(n)`.

use serde::Serialize;

use crate::arith::{is_prime, GroupParams};
use crate::coloring::{block_partition, coset_partition, evaluate, Coloring};
use crate::error::Result;

/// Which closed form determines the value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// `n` prime, `k <= n`: value `max{0, 2m - 3}`.
    Prime,
    /// `2m - 3 <= p(n)`: value `max{0, 2m - 3}`.
    Interval,
    /// `f(n/q) <= min{p(n), 2m - 3}`: value `f(n/q)`.
    Coset,
    /// Only the lower and upper bounds are known.
    Gap,
    /// `k > n`: every class has at most one element.
    Degenerate,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Prime => "prime",
            Regime::Interval => "interval",
            Regime::Coset => "coset",
            Regime::Gap => "gap",
            Regime::Degenerate => "degenerate",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhiResult {
    pub params: GroupParams,
    pub lower: usize,
    pub upper: usize,
    pub exact: Option<usize>,
    pub regime: Regime,
    /// Every exact regime whose hypothesis holds; `regime` is the first by precedence.
    pub applicable: Vec<Regime>,
    /// A coloring attaining `upper`.
    pub witness: Option<Coloring>,
    /// In the gap regime, the other construction, so both bound witnesses are available.
    pub alternatives: Vec<Coloring>,
}

/// `max{0, min{p(n), 2m - 3}}`.
pub fn phi_lower_bound(n: usize, k: usize) -> Result<usize> {
    let g = GroupParams::new(n, k)?;
    Ok(lower_from(&g))
}

/// `min{max{0, 2m - 3}, f(n / q(n, k))}`.
pub fn phi_upper_bound(n: usize, k: usize) -> Result<usize> {
    let g = GroupParams::new(n, k)?;
    Ok(upper_from(&g))
}

fn lower_from(g: &GroupParams) -> usize {
    g.interval_size().min(g.p_n as i64).max(0) as usize
}

fn interval_value(g: &GroupParams) -> usize {
    g.interval_size().max(0) as usize
}

fn upper_from(g: &GroupParams) -> usize {
    interval_value(g).min(g.coset_value())
}

/// Exact regimes whose hypotheses hold, in precedence order prime, interval, coset.
pub fn applicable_regimes(g: &GroupParams) -> Vec<Regime> {
    let mut out = Vec::new();
    if g.k > g.n {
        out.push(Regime::Degenerate);
        return out;
    }
    if is_prime(g.n) {
        out.push(Regime::Prime);
    }
    if g.interval_size() <= g.p_n as i64 {
        out.push(Regime::Interval);
    }
    if (g.coset_value() as i64) <= g.interval_size().min(g.p_n as i64) {
        out.push(Regime::Coset);
    }
    out
}

/// Bounds, regime and (when a closed form applies) the exact value, with a witness coloring.
pub fn phi_exact(n: usize, k: usize) -> Result<PhiResult> {
    let g = GroupParams::new(n, k)?;
    let (lower, upper) = (lower_from(&g), upper_from(&g));
    let applicable = applicable_regimes(&g);
    let regime = applicable.first().copied().unwrap_or(Regime::Gap);
    let block = block_partition(n, k)?;
    let coset = coset_partition(n, k)?;
    let (exact, witness, alternatives) = match regime {
        Regime::Prime | Regime::Interval => (Some(interval_value(&g)), block, vec![]),
        Regime::Degenerate => (Some(0), block, vec![]),
        Regime::Coset => (Some(g.coset_value()), coset, vec![]),
        Regime::Gap => {
            if evaluate(&coset).value < evaluate(&block).value {
                (None, coset, vec![block])
            } else {
                (None, block, vec![coset])
            }
        }
    };
    debug_assert!(evaluate(&witness).value <= upper);
    Ok(PhiResult {
        params: g,
        lower: exact.unwrap_or(lower),
        upper: exact.unwrap_or(upper),
        exact,
        regime,
        applicable,
        witness: Some(witness),
        alternatives,
    })
}
