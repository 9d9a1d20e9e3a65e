//! Exhaustive search for the minimax value.
//!
//! Residues `0, 1, ..., n-1` are colored in order by depth-first search. With `symmetry` on,
//! class labels are introduced in first-touch order (restricted growth strings), so each set
//! partition is visited once. Each class carries its member mask and its restricted sumset mask;
//! adding residue `e` to a class with mask `M` adds exactly the sums `e + M`, and a branch is cut
//! as soon as some class's sumset exceeds the threshold. Sumsets only grow under insertion, so the
//! cut never loses a solution.
//!
//! The tree is split at a fixed depth into independent prefixes. Prefixes are solved in order
//! (in parallel when enabled) and results are merged in prefix order, so answers and node counts
//! do not depend on scheduling.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::Serialize;

use crate::coloring::{evaluate, Coloring};
use crate::error::{Error, Result};
use crate::sumset::rotate_word;
use crate::value::phi_lower_bound;

pub const DEFAULT_CAP: usize = 18;
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;
pub const BUDGET_ENV: &str = "SUMSET_MINIMAX_BUDGET";
const SPLIT_DEPTH: usize = 7;
const FLUSH_EVERY: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub n: usize,
    pub k: usize,
    /// Decision target: every class sumset must have size at most this.
    pub threshold: usize,
    pub max_nodes: u64,
    /// Canonical (restricted growth) class labels.
    pub symmetry: bool,
    pub enumerate_limit: usize,
    pub parallel: bool,
    /// Largest modulus the oracle accepts.
    pub cap: usize,
}

impl SearchConfig {
    pub fn new(n: usize, k: usize, threshold: usize) -> Self {
        Self {
            n,
            k,
            threshold,
            max_nodes: default_budget(),
            symmetry: true,
            enumerate_limit: 1 << 20,
            parallel: true,
            cap: DEFAULT_CAP,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n < 2 || self.k < 2 {
            return Err(Error::InvalidArgument(format!(
                "need n >= 2 and k >= 2, got n={}, k={}",
                self.n, self.k
            )));
        }
        if self.max_nodes == 0 || self.enumerate_limit == 0 {
            return Err(Error::InvalidArgument("budgets must be positive".into()));
        }
        let cap = self.cap.min(64);
        if self.n > cap {
            return Err(Error::CapExceeded { n: self.n, cap });
        }
        Ok(())
    }
}

/// Node budget from `SUMSET_MINIMAX_BUDGET`, falling back to `10^9`.
pub fn default_budget() -> u64 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&b| b > 0)
        .unwrap_or(DEFAULT_BUDGET)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Feasibility {
    pub witness: Option<Coloring>,
    pub nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub colorings: Vec<Coloring>,
    pub nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleValue {
    pub value: usize,
    pub witness: Coloring,
    /// Nodes expanded over the whole ascending threshold scan.
    pub nodes: u64,
}

struct Shared {
    total: AtomicU64,
    budget: u64,
    aborted: AtomicBool,
    found: AtomicUsize,
    limit: usize,
    overflow: AtomicBool,
}

impl Shared {
    fn new(cfg: &SearchConfig) -> Self {
        Self {
            total: AtomicU64::new(0),
            budget: cfg.max_nodes,
            aborted: AtomicBool::new(false),
            found: AtomicUsize::new(0),
            limit: cfg.enumerate_limit,
            overflow: AtomicBool::new(false),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    First,
    All,
}

#[derive(Clone)]
struct Worker<'a> {
    n: usize,
    labels: usize,
    threshold: u32,
    full: u64,
    symmetry: bool,
    masks: Vec<u64>,
    sums: Vec<u64>,
    assignment: Vec<u8>,
    used: usize,
    nodes: u64,
    unflushed: u64,
    mode: Mode,
    found: Vec<Vec<u8>>,
    shared: &'a Shared,
}

impl<'a> Worker<'a> {
    fn new(cfg: &SearchConfig, mode: Mode, shared: &'a Shared) -> Self {
        let n = cfg.n;
        let labels = cfg.k.min(n);
        Self {
            n,
            labels,
            threshold: cfg.threshold.min(u32::MAX as usize) as u32,
            full: if n == 64 { u64::MAX } else { (1u64 << n) - 1 },
            symmetry: cfg.symmetry,
            masks: vec![0; labels],
            sums: vec![0; labels],
            assignment: Vec::with_capacity(n),
            used: 0,
            nodes: 0,
            unflushed: 0,
            mode,
            found: Vec::new(),
            shared,
        }
    }

    fn label_limit(&self) -> usize {
        if self.symmetry {
            (self.used + 1).min(self.labels)
        } else {
            self.labels
        }
    }

    /// Tries to place the next residue in class `c`; returns the undo record on success.
    fn push(&mut self, c: usize) -> Option<(u64, usize)> {
        let e = self.assignment.len();
        let added = rotate_word(self.masks[c], e, self.n, self.full);
        let new_sums = self.sums[c] | added;
        if new_sums.count_ones() > self.threshold {
            return None;
        }
        let old_sums = self.sums[c];
        let old_used = self.used;
        self.sums[c] = new_sums;
        self.masks[c] |= 1u64 << e;
        self.assignment.push(c as u8);
        self.used = self.used.max(c + 1);
        Some((old_sums, old_used))
    }

    fn pop(&mut self, c: usize, undo: (u64, usize)) {
        let e = self.assignment.len() - 1;
        self.assignment.pop();
        self.masks[c] &= !(1u64 << e);
        self.sums[c] = undo.0;
        self.used = undo.1;
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        self.unflushed += 1;
        if self.unflushed >= FLUSH_EVERY {
            self.flush();
        }
        !self.shared.aborted.load(Ordering::Relaxed)
    }

    fn flush(&mut self) {
        let total = self.shared.total.fetch_add(self.unflushed, Ordering::Relaxed) + self.unflushed;
        self.unflushed = 0;
        if total > self.shared.budget {
            self.shared.aborted.store(true, Ordering::Relaxed);
        }
    }

    /// Replays a prefix; `false` if it is no longer admissible.
    fn load(&mut self, prefix: &[u8]) -> bool {
        prefix.iter().all(|&c| self.push(c as usize).is_some())
    }

    /// Returns `true` when the search should stop.
    fn dfs(&mut self) -> bool {
        if self.assignment.len() == self.n {
            match self.mode {
                Mode::First => {
                    self.found.push(self.assignment.clone());
                    return true;
                }
                Mode::All => {
                    let count = self.shared.found.fetch_add(1, Ordering::Relaxed) + 1;
                    if count > self.shared.limit {
                        self.shared.overflow.store(true, Ordering::Relaxed);
                        self.shared.aborted.store(true, Ordering::Relaxed);
                        return true;
                    }
                    self.found.push(self.assignment.clone());
                    return false;
                }
            }
        }
        for c in 0..self.label_limit() {
            if !self.tick() {
                return true;
            }
            if let Some(undo) = self.push(c) {
                let stop = self.dfs();
                self.pop(c, undo);
                if stop {
                    return true;
                }
            }
        }
        false
    }

    /// All admissible prefixes of length `depth`, in lexicographic order.
    fn prefixes(&mut self, depth: usize, out: &mut Vec<Vec<u8>>) {
        if self.assignment.len() == depth {
            out.push(self.assignment.clone());
            return;
        }
        for c in 0..self.label_limit() {
            self.nodes += 1;
            if let Some(undo) = self.push(c) {
                self.prefixes(depth, out);
                self.pop(c, undo);
            }
        }
    }
}

struct PrefixRun {
    found: Vec<Vec<u8>>,
    nodes: u64,
}

fn run_prefixes(cfg: &SearchConfig, mode: Mode, shared: &Shared) -> (u64, Vec<PrefixRun>) {
    let mut root = Worker::new(cfg, mode, shared);
    let mut prefixes = Vec::new();
    root.prefixes(SPLIT_DEPTH.min(cfg.n), &mut prefixes);
    let root_nodes = root.nodes;
    shared.total.fetch_add(root_nodes, Ordering::Relaxed);

    let solve = |prefix: &Vec<u8>| -> PrefixRun {
        let mut w = Worker::new(cfg, mode, shared);
        let ok = w.load(prefix);
        debug_assert!(ok);
        w.dfs();
        w.flush();
        PrefixRun {
            found: w.found,
            nodes: w.nodes,
        }
    };

    let runs = match (mode, cfg.parallel) {
        (Mode::First, true) => first_success_parallel(&prefixes, &solve),
        (Mode::First, false) => {
            let mut runs = Vec::new();
            for p in &prefixes {
                let run = solve(p);
                let hit = !run.found.is_empty();
                runs.push(run);
                if hit || shared.aborted.load(Ordering::Relaxed) {
                    break;
                }
            }
            runs
        }
        (Mode::All, true) => prefixes.par_iter().map(solve).collect(),
        (Mode::All, false) => prefixes.iter().map(solve).collect(),
    };
    (root_nodes, runs)
}

/// Solves prefixes in parallel and keeps every run up to and including the first (in prefix
/// order) that found a witness. `find_first` completes all earlier items before answering.
fn first_success_parallel<F>(prefixes: &[Vec<u8>], solve: &F) -> Vec<PrefixRun>
where
    F: Fn(&Vec<u8>) -> PrefixRun + Sync,
{
    let slots: Vec<Mutex<Option<PrefixRun>>> = prefixes.iter().map(|_| Mutex::new(None)).collect();
    let winner = prefixes
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let run = solve(p);
            let hit = !run.found.is_empty();
            *slots[i].lock().expect("slot") = Some(run);
            (i, hit)
        })
        .find_first(|&(_, hit)| hit)
        .map(|(i, _)| i);
    let end = winner.map_or(prefixes.len(), |i| i + 1);
    slots
        .into_iter()
        .take(end)
        .map(|m| m.into_inner().expect("slot").expect("solved before the winner"))
        .collect()
}

fn to_coloring(cfg: &SearchConfig, assignment: &[u8]) -> Coloring {
    Coloring::from_assignment(cfg.k, assignment.iter().map(|&c| c as usize).collect())
        .expect("labels below k")
}

/// Decides whether some coloring has every class sumset of size at most `cfg.threshold`.
pub fn search_feasible(cfg: &SearchConfig) -> Result<Feasibility> {
    cfg.validate()?;
    let shared = Shared::new(cfg);
    let (root_nodes, runs) = run_prefixes(cfg, Mode::First, &shared);
    let nodes = root_nodes + runs.iter().map(|r| r.nodes).sum::<u64>();
    let witness = runs
        .iter()
        .find_map(|r| r.found.first())
        .map(|a| to_coloring(cfg, a));
    if shared.aborted.load(Ordering::Relaxed) {
        return Err(Error::BudgetExhausted {
            budget: cfg.max_nodes,
        });
    }
    if let Some(w) = &witness {
        let value = evaluate(w).value;
        assert!(value <= cfg.threshold, "witness value {value} above {}", cfg.threshold);
    }
    Ok(Feasibility { witness, nodes })
}

/// All colorings (canonical labels when `symmetry` is on) meeting the threshold, sorted.
pub fn search_all(cfg: &SearchConfig) -> Result<Enumeration> {
    cfg.validate()?;
    let shared = Shared::new(cfg);
    let (root_nodes, runs) = run_prefixes(cfg, Mode::All, &shared);
    if shared.overflow.load(Ordering::Relaxed) {
        return Err(Error::EnumerationOverflow {
            limit: cfg.enumerate_limit,
            collected: shared.found.load(Ordering::Relaxed).min(cfg.enumerate_limit),
        });
    }
    if shared.aborted.load(Ordering::Relaxed) {
        return Err(Error::BudgetExhausted {
            budget: cfg.max_nodes,
        });
    }
    let nodes = root_nodes + runs.iter().map(|r| r.nodes).sum::<u64>();
    let mut assignments: Vec<Vec<u8>> = runs.into_iter().flat_map(|r| r.found).collect();
    assignments.sort();
    Ok(Enumeration {
        colorings: assignments.iter().map(|a| to_coloring(cfg, a)).collect(),
        nodes,
    })
}

/// A coloring of `Z_n` with `k` classes whose largest restricted sumset has size at most
/// `threshold`, if one exists.
pub fn feasible(n: usize, k: usize, threshold: usize) -> Result<Option<Coloring>> {
    Ok(search_feasible(&SearchConfig::new(n, k, threshold))?.witness)
}

/// The exact minimax value by ascending threshold scan from the closed-form lower bound.
pub fn brute_force_phi(n: usize, k: usize) -> Result<OracleValue> {
    brute_force_phi_with(&SearchConfig::new(n, k, 0))
}

/// As [`brute_force_phi`], with the cap, budget and parallelism taken from `cfg`.
pub fn brute_force_phi_with(cfg: &SearchConfig) -> Result<OracleValue> {
    cfg.validate()?;
    let mut nodes = 0u64;
    let mut decide = |threshold: usize| -> Result<Option<Coloring>> {
        let step = SearchConfig {
            threshold,
            max_nodes: cfg.max_nodes.saturating_sub(nodes).max(1),
            ..cfg.clone()
        };
        let outcome = search_feasible(&step).map_err(|e| match e {
            Error::BudgetExhausted { .. } => Error::BudgetExhausted {
                budget: cfg.max_nodes,
            },
            other => other,
        })?;
        nodes += outcome.nodes;
        Ok(outcome.witness)
    };
    // ascend from the lower bound to the first feasible threshold, then descend until a
    // threshold is refuted, so the value is established by search alone
    let mut threshold = phi_lower_bound(cfg.n, cfg.k)?;
    let mut witness = loop {
        match decide(threshold)? {
            Some(w) => break w,
            None => threshold += 1,
        }
    };
    while threshold > 0 {
        match decide(threshold - 1)? {
            Some(w) => {
                witness = w;
                threshold -= 1;
            }
            None => break,
        }
    }
    Ok(OracleValue {
        value: threshold,
        witness,
        nodes,
    })
}

/// Every canonical coloring attaining the minimax value, sorted by assignment.
pub fn enumerate_optimal(n: usize, k: usize, limit: usize) -> Result<Vec<Coloring>> {
    let value = brute_force_phi(n, k)?.value;
    let cfg = SearchConfig {
        enumerate_limit: limit,
        ..SearchConfig::new(n, k, value)
    };
    Ok(search_all(&cfg)?.colorings)
}
