//! Exact clique partition numbers for tiny instances.
//!
//! [`solve_cp`] is an exact-cover branch and bound: it always branches on
//! the lexicographically smallest uncovered `r`-set and tries every proper
//! block through it whose `r`-subsets are all still uncovered, larger
//! blocks first. The incumbent starts as the partition into single
//! `r`-sets (or a supplied seed), so the certificate is valid even when the
//! time limit cuts the search short.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::bounds::{known_cp, phi_ceiling_u64, theorem2_bound};
use crate::combin::{binom, next_lex_subset, BinomTable};
use crate::design::{multiplicities, verify_coverage, CensusConfig, Design, Mode};
use crate::error::{Error, Result};

/// Largest `C(n, r)` accepted by [`solve_cp`].
pub const MAX_SEARCH_RSETS: u128 = 10_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LowerBoundOracle {
    #[default]
    Phi,
    Theorem2,
    None,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub n: usize,
    pub r: usize,
    /// Defaults to `n - 1`.
    pub max_block_size: Option<usize>,
    pub oracle: LowerBoundOracle,
    pub time_limit: Option<Duration>,
    /// A known partition used as the first incumbent.
    pub seed: Option<Design>,
}

impl SearchConfig {
    pub fn new(n: usize, r: usize) -> Self {
        SearchConfig { n, r, max_block_size: None, oracle: LowerBoundOracle::Phi, time_limit: None, seed: None }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PruneStats {
    /// Cut by `used + ceil(remaining / C(max_block, r)) >= best`.
    pub counting: u64,
    /// Times a new incumbent was found.
    pub improvements: u64,
    /// The incumbent reached the oracle bound and the search stopped.
    pub oracle_stop: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchResult {
    pub n: usize,
    pub r: usize,
    pub optimum: u64,
    pub lower_bound: u64,
    pub oracle: LowerBoundOracle,
    pub proven_optimal: bool,
    pub timed_out: bool,
    pub nodes_explored: u64,
    pub prune_stats: PruneStats,
    #[serde(skip)]
    pub certificate: Design,
}

/// Certified lower bound on `cp(n, r)` from the chosen oracle.
pub fn oracle_bound(n: usize, r: usize, oracle: LowerBoundOracle) -> Result<u64> {
    let (n64, r64) = (n as u64, r as u64);
    Ok(match oracle {
        LowerBoundOracle::None => 1,
        LowerBoundOracle::Phi => phi_ceiling_u64(n64, r64)?,
        LowerBoundOracle::Theorem2 if r >= 3 => {
            let l = match known_cp(n64 - 1, r64 - 1) {
                Some(v) => v,
                None if n > r => phi_ceiling_u64(n64 - 1, r64 - 1)?,
                None => 1,
            };
            theorem2_bound(n64, r64, l)?
        }
        LowerBoundOracle::Theorem2 => phi_ceiling_u64(n64, r64)?,
    })
}

struct Solver {
    n: usize,
    r: usize,
    max_block: usize,
    per_block: u64,
    table: BinomTable,
    lex: Vec<u32>,
    masks: Vec<u64>,
    covered: Vec<bool>,
    chosen: Vec<u64>,
    best: Vec<u64>,
    lower: u64,
    nodes: u64,
    stats: PruneStats,
    deadline: Option<Instant>,
    timed_out: bool,
}

impl Solver {
    fn rank_of(&self, mask: u64) -> usize {
        let mut buf = [0u32; 64];
        let mut k = 0;
        let mut m = mask;
        while m != 0 {
            buf[k] = m.trailing_zeros();
            k += 1;
            m &= m - 1;
        }
        self.table.rank(&buf[..k]) as usize
    }

    /// Every block through `base` (a full r-set mask) whose r-subsets are
    /// all uncovered, largest first.
    fn candidates(&self, base: u64) -> Vec<u64> {
        let mut out = vec![base];
        let mut frontier = vec![base];
        while let Some(b) = frontier.pop() {
            if b.count_ones() as usize >= self.max_block {
                continue;
            }
            // add points above every point added so far to avoid repeats
            let added = b & !base;
            let start = if added == 0 { 0 } else { 64 - added.leading_zeros() };
            for x in start..self.n as u32 {
                if b >> x & 1 == 1 {
                    continue;
                }
                if self.extends(b, x) {
                    let nb = b | 1 << x;
                    out.push(nb);
                    frontier.push(nb);
                }
            }
        }
        out.sort_by(|a, b| b.count_ones().cmp(&a.count_ones()).then(a.cmp(b)));
        out
    }

    /// All r-sets of `b ∪ {x}` through `x` are uncovered.
    fn extends(&self, b: u64, x: u32) -> bool {
        let members: Vec<u32> = (0..self.n as u32).filter(|&i| b >> i & 1 == 1).collect();
        let mut ok = true;
        crate::combin::for_each_combination(&members, self.r - 1, |t| {
            if ok {
                let mask = t.iter().fold(1u64 << x, |m, &i| m | 1 << i);
                ok = !self.covered[self.rank_of(mask)];
            }
        });
        ok
    }

    fn set_block(&mut self, b: u64, value: bool) {
        let members: Vec<u32> = (0..self.n as u32).filter(|&i| b >> i & 1 == 1).collect();
        let mut ranks = Vec::new();
        crate::combin::for_each_combination(&members, self.r, |t| {
            let mask = t.iter().fold(0u64, |m, &i| m | 1 << i);
            ranks.push(self.rank_of(mask));
        });
        for k in ranks {
            self.covered[k] = value;
        }
    }

    fn done(&self) -> bool {
        self.timed_out || self.best.len() as u64 <= self.lower
    }

    fn go(&mut self, mut pos: usize, remaining: u64) {
        self.nodes += 1;
        if self.nodes % 1024 == 0 && self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.timed_out = true;
        }
        if self.done() {
            return;
        }
        if remaining == 0 {
            if self.chosen.len() < self.best.len() {
                self.best = self.chosen.clone();
                self.stats.improvements += 1;
                if self.best.len() as u64 <= self.lower {
                    self.stats.oracle_stop = true;
                }
            }
            return;
        }
        let used = self.chosen.len() as u64;
        if used + remaining.div_ceil(self.per_block) >= self.best.len() as u64 {
            self.stats.counting += 1;
            return;
        }
        while self.covered[self.lex[pos] as usize] {
            pos += 1;
        }
        let base = self.masks[self.lex[pos] as usize];
        for b in self.candidates(base) {
            let k = binom(b.count_ones() as u64, self.r as u64) as u64;
            self.set_block(b, true);
            self.chosen.push(b);
            self.go(pos + 1, remaining - k);
            self.chosen.pop();
            self.set_block(b, false);
            if self.done() {
                return;
            }
        }
    }
}

fn to_blocks(masks: &[u64]) -> Vec<Vec<u32>> {
    let mut blocks: Vec<Vec<u32>> = masks
        .iter()
        .map(|&m| (0..64u32).filter(|&i| m >> i & 1 == 1).collect())
        .collect();
    blocks.sort();
    blocks
}

pub fn solve_cp(cfg: &SearchConfig) -> Result<SearchResult> {
    let (n, r) = (cfg.n, cfg.r);
    if r < 1 || n <= r || n > 64 {
        return Err(Error::BadParams(format!("need 1 <= r < n <= 64, got n = {n}, r = {r}")));
    }
    let max_block = cfg.max_block_size.unwrap_or(n - 1);
    if max_block < r || max_block >= n {
        return Err(Error::BadParams(format!("need r <= max_block_size < n, got {max_block}")));
    }
    let total = binom(n as u64, r as u64);
    if total > MAX_SEARCH_RSETS {
        return Err(Error::RsetSpaceTooLarge { n, r, count: total, budget: MAX_SEARCH_RSETS });
    }
    let lower = if r >= 2 { oracle_bound(n, r, cfg.oracle)? } else { 1 };

    let table = BinomTable::new(n, r);
    let mut masks = vec![0u64; total as usize];
    let mut lex = Vec::with_capacity(total as usize);
    let mut s: Vec<u32> = (0..r as u32).collect();
    loop {
        let k = table.rank(&s) as usize;
        masks[k] = s.iter().fold(0u64, |m, &i| m | 1 << i);
        lex.push(k as u32);
        if !next_lex_subset(&mut s, n as u32) {
            break;
        }
    }
    let mut best: Vec<u64> = masks.clone();
    if let Some(seed) = &cfg.seed {
        if seed.n() != n || seed.r() != r {
            return Err(Error::BadParams(format!(
                "seed design has n = {}, r = {}, expected n = {n}, r = {r}",
                seed.n(),
                seed.r()
            )));
        }
        if !verify_coverage(seed, Mode::Partition)?.is_partition {
            return Err(Error::BadParams("seed design is not a partition".into()));
        }
        if seed.len() < best.len() {
            best = seed
                .blocks()
                .iter()
                .map(|b| b.iter().fold(0u64, |m, &i| m | 1 << i))
                .collect();
        }
    }
    let mut solver = Solver {
        n,
        r,
        max_block,
        per_block: binom(max_block as u64, r as u64) as u64,
        table,
        lex,
        masks,
        covered: vec![false; total as usize],
        chosen: Vec::new(),
        stats: PruneStats { oracle_stop: best.len() as u64 <= lower, ..PruneStats::default() },
        best,
        lower,
        nodes: 0,
        deadline: cfg.time_limit.map(|d| Instant::now() + d),
        timed_out: false,
    };
    solver.go(0, total as u64);
    let optimum = solver.best.len() as u64;
    let certificate = Design::new(n, r, to_blocks(&solver.best), format!("cp search n={n} r={r}"))?;
    Ok(SearchResult {
        n,
        r,
        optimum,
        lower_bound: lower,
        oracle: cfg.oracle,
        proven_optimal: !solver.timed_out,
        timed_out: solver.timed_out,
        nodes_explored: solver.nodes,
        prune_stats: solver.stats,
        certificate,
    })
}

/// Optimality by a matching bound and witness rather than by search.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessCertificate {
    pub n: usize,
    pub r: usize,
    pub blocks: usize,
    pub lower_bound: u64,
    pub is_partition: bool,
    pub optimal: bool,
}

pub fn certify_with_witness(witness: &Design) -> Result<WitnessCertificate> {
    let (n, r) = (witness.n(), witness.r());
    let lower = oracle_bound(n, r, LowerBoundOracle::Phi)?;
    let is_partition = verify_coverage(witness, Mode::Partition)?.is_partition;
    Ok(WitnessCertificate {
        n,
        r,
        blocks: witness.len(),
        lower_bound: lower,
        is_partition,
        optimal: is_partition && witness.len() as u64 == lower,
    })
}

/// A packing completed to a partition by single `r`-sets. This is a
/// baseline heuristic for experiments, not a construction from theory.
#[derive(Clone, Debug, Serialize)]
pub struct GreedyCompletion {
    #[serde(skip)]
    pub design: Design,
    pub original_blocks: usize,
    pub added_blocks: usize,
    pub total_blocks: usize,
    /// `n^(r/2)`, the conjectured growth rate of `cp(n, r)`.
    pub n_pow_r_half: f64,
    pub heuristic: bool,
}

pub fn greedy_complete(partial: &Design) -> Result<GreedyCompletion> {
    greedy_complete_with(partial, &CensusConfig::default())
}

pub fn greedy_complete_with(partial: &Design, cfg: &CensusConfig) -> Result<GreedyCompletion> {
    let (n, r) = (partial.n(), partial.r());
    let mult = multiplicities(partial, cfg)?;
    let multicovered = mult.iter().filter(|&&c| c > 1).count() as u64;
    if multicovered > 0 {
        return Err(Error::NotAPacking { multicovered });
    }
    let table = BinomTable::new(n, r);
    let mut blocks = partial.blocks().to_vec();
    let before = blocks.len();
    // uncovered r-sets in colex order
    for (k, _) in mult.iter().enumerate().filter(|(_, &c)| c == 0) {
        blocks.push(table.unrank(k as u64, r));
    }
    let added = blocks.len() - before;
    let design = Design::new(n, r, blocks, format!("greedy completion of {}", partial.label()))?;
    Ok(GreedyCompletion {
        original_blocks: before,
        added_blocks: added,
        total_blocks: design.len(),
        n_pow_r_half: (n as f64).powf(r as f64 / 2.0),
        heuristic: true,
        design,
    })
}
