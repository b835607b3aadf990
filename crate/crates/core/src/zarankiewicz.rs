//! Incidence graphs of clique partitions and small Zarankiewicz numbers.
//!
//! `z(m, n, s, t)` is the largest number of edges in an `m × n` bipartite
//! graph with no `K_{s,t}` (s rows and t columns all adjacent). The
//! point-block incidence graph of an `r`-partition has no `K_{2,r}`, since
//! two blocks share fewer than `r` points, and when all blocks have the
//! same size `k` its `km` edges meet the convexity upper bound.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::big_binomial;
use crate::design::Design;
use crate::error::{Error, Result};

/// `m × n` 0/1 matrix; row `i` is the neighbourhood of A-vertex `i` as a
/// bitset over the `n` B-vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    m: usize,
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BipartiteGraph {
    pub fn empty(m: usize, n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BipartiteGraph { m, n, words, bits: vec![0; m * words] }
    }

    pub fn from_rows(n: usize, rows: &[Vec<u32>]) -> Self {
        let mut g = Self::empty(rows.len(), n);
        for (i, row) in rows.iter().enumerate() {
            for &j in row {
                g.set(i, j as usize);
            }
        }
        g
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn set(&mut self, i: usize, j: usize) {
        assert!(i < self.m && j < self.n, "edge ({i}, {j}) outside {}x{}", self.m, self.n);
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.row(i).iter().map(|w| w.count_ones()).sum()
    }

    pub fn edge_count(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn common(&self, i: usize, j: usize) -> u32 {
        self.row(i).iter().zip(self.row(j)).map(|(a, b)| (a & b).count_ones()).sum()
    }

    /// Rows as `0`/`1` strings, column 0 first.
    pub fn row_strings(&self) -> Vec<String> {
        (0..self.m)
            .map(|i| (0..self.n).map(|j| if self.has_edge(i, j) { '1' } else { '0' }).collect())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::empty(self.n, self.m);
        for i in 0..self.m {
            for j in 0..self.n {
                if self.has_edge(i, j) {
                    t.set(j, i);
                }
            }
        }
        t
    }
}

/// A-side = blocks, B-side = points.
pub fn incidence_graph(d: &Design) -> BipartiteGraph {
    BipartiteGraph::from_rows(d.n(), d.blocks())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KTwoFree {
    pub free: bool,
    /// First row pair (in lexicographic order) sharing at least `r` columns,
    /// with the number shared.
    pub violation: Option<(usize, usize, u32)>,
}

pub fn ktwo_r_free(g: &BipartiteGraph, r: u32) -> KTwoFree {
    let violation = (0..g.m)
        .into_par_iter()
        .filter_map(|i| {
            (i + 1..g.m).find_map(|j| {
                let c = g.common(i, j);
                (c >= r).then_some((i, j, c))
            })
        })
        .min();
    KTwoFree { free: violation.is_none(), violation }
}

/// `∏_{i<r} (e - i·m) <= r!·C(n, r)·m^(r-1)`, i.e. `m·C(e/m, r) <= C(n, r)`.
fn convexity_holds(m: u64, e: u64, r: u64, rhs: &BigInt) -> bool {
    let (m, e) = (BigInt::from(m), BigInt::from(e));
    let lhs = (0..r).fold(BigInt::one(), |acc, i| acc * (&e - BigInt::from(i) * &m));
    lhs <= rhs * num_traits::pow(m, (r - 1) as usize)
}

/// Largest `e <= mn` with `m·C(e/m, r) <= C(n, r)`, an upper bound on
/// `z(m, n, 2, r)`.
pub fn convexity_upper_bound(m: u64, n: u64, r: u64) -> Result<u64> {
    if m == 0 || n == 0 || r < 2 {
        return Err(Error::BadParams(format!("need m, n >= 1 and r >= 2, got m = {m}, n = {n}, r = {r}")));
    }
    let rhs = (1..=r).fold(BigInt::one(), |acc, i| acc * BigInt::from(i)) * big_binomial(n, r);
    // the left side is increasing once e >= m(r - 1), where it is still 0
    let (mut lo, mut hi) = ((m * (r - 1)).min(m * n), m * n);
    if convexity_holds(m, hi, r, &rhs) {
        return Ok(hi);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if convexity_holds(m, mid, r, &rhs) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma7Report {
    pub m: usize,
    pub n: usize,
    pub r: usize,
    pub k: usize,
    pub km: u64,
    pub edges: u64,
    pub ktwo_r_free: bool,
    pub convexity_upper_bound: u64,
    /// `z(m, n, 2, r) >= km` is certified.
    pub meets: bool,
    /// The lower and upper bounds coincide, so `z(m, n, 2, r) = km`.
    pub exact: bool,
}

pub fn verify_lemma7(d: &Design) -> Result<Lemma7Report> {
    let k = d.blocks().first().map_or(0, |b| b.len());
    if d.blocks().iter().any(|b| b.len() != k) {
        return Err(Error::UnequalBlockSizes);
    }
    let (m, n, r) = (d.len(), d.n(), d.r());
    let lhs = big_binomial(k as u64, r as u64) * BigInt::from(m);
    let rhs = big_binomial(n as u64, r as u64);
    if lhs != rhs {
        let to = |x: &BigInt| u128::try_from(x).unwrap_or(u128::MAX);
        return Err(Error::CardinalityMismatch { lhs: to(&lhs), rhs: to(&rhs) });
    }
    let g = incidence_graph(d);
    let free = ktwo_r_free(&g, r as u32).free;
    let km = (k * m) as u64;
    let edges = g.edge_count();
    let upper = convexity_upper_bound(m as u64, n as u64, r as u64)?;
    let meets = free && edges == km;
    Ok(Lemma7Report {
        m,
        n,
        r,
        k,
        km,
        edges,
        ktwo_r_free: free,
        convexity_upper_bound: upper,
        meets,
        exact: meets && upper == km,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ZInstance {
    pub m: usize,
    pub n: usize,
    pub s: usize,
    pub t: usize,
    pub z: u64,
    pub exact: bool,
    pub nodes: u64,
    #[serde(rename = "witness_rows", serialize_with = "ser_rows")]
    pub witness: BipartiteGraph,
}

fn ser_rows<S: serde::Serializer>(g: &BipartiteGraph, s: S) -> std::result::Result<S::Ok, S::Error> {
    g.row_strings().serialize(s)
}

/// Largest column count handled by [`brute_z`].
pub const BRUTE_MAX_COLS: usize = 20;

struct Search {
    s: usize,
    t: u32,
    candidates: Vec<u64>,
    /// `row_bound[k]`: an upper bound on the edges of any k admissible rows.
    row_bound: Vec<u64>,
    best: u64,
    best_rows: Vec<u64>,
    rows: Vec<u64>,
    nodes: u64,
    deadline: Option<Instant>,
    timed_out: bool,
}

impl Search {
    /// `levels[k]` holds the ANDs of k chosen rows with at least `t` columns.
    fn go(&mut self, m: usize, levels: &[Vec<u64>], prev: u64, edges: u64) {
        self.nodes += 1;
        if self.nodes % 4096 == 0 && self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.timed_out = true;
        }
        if self.timed_out {
            return;
        }
        let left = m - self.rows.len();
        if left == 0 {
            if edges > self.best {
                self.best = edges;
                self.best_rows = self.rows.clone();
            }
            return;
        }
        if self.row_bound.get(left).is_some_and(|&b| edges + b <= self.best) {
            return;
        }
        for ci in 0..self.candidates.len() {
            let x = self.candidates[ci];
            // rows are nonincreasing as integers
            if x > prev {
                continue;
            }
            let w = x.count_ones() as u64;
            if edges + w + self.row_bound[left - 1] <= self.best {
                // candidates are sorted by weight, so the rest are no better
                break;
            }
            if levels[self.s - 1].iter().any(|&a| (a & x).count_ones() >= self.t) {
                continue;
            }
            let mut next: Vec<Vec<u64>> = levels.to_vec();
            for k in 1..self.s {
                let extra: Vec<u64> = levels[k - 1]
                    .iter()
                    .map(|&a| a & x)
                    .filter(|a| a.count_ones() >= self.t)
                    .collect();
                next[k].extend(extra);
            }
            self.rows.push(x);
            self.go(m, &next, x, edges + w);
            self.rows.pop();
            if self.timed_out {
                return;
            }
        }
    }
}

fn solve_z(m: usize, n: usize, s: usize, t: usize, deadline: Option<Instant>) -> (u64, Vec<u64>, bool, u64) {
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut candidates: Vec<u64> = (0..=full).collect();
    candidates.sort_by(|a, b| b.count_ones().cmp(&a.count_ones()).then(b.cmp(a)));
    let mut row_bound = vec![0u64];
    let mut nodes = 0;
    let mut rows = Vec::new();
    let mut best = 0;
    let mut exact = true;
    for k in 1..=m {
        let mut levels = vec![Vec::new(); s];
        levels[0].push(full);
        let mut search = Search {
            s,
            t: t as u32,
            candidates: candidates.clone(),
            row_bound: row_bound.clone(),
            best: 0,
            best_rows: Vec::new(),
            rows: Vec::new(),
            nodes: 0,
            deadline,
            timed_out: false,
        };
        // a k-row optimum is at least the (k-1)-row one plus an empty row
        search.best = best;
        search.best_rows = rows.iter().copied().chain(std::iter::once(0)).collect();
        search.go(k, &levels, full, 0);
        nodes += search.nodes;
        best = search.best;
        rows = search.best_rows;
        if search.timed_out {
            exact = false;
            // remaining rows contribute nothing to the witness
            rows.resize(m, 0);
            return (best, rows, exact, nodes);
        }
        row_bound.push(best);
    }
    (best, rows, exact, nodes)
}

/// Exact `z(m, n, s, t)` by branch and bound over row-sorted matrices.
///
/// Rows are chosen in nonincreasing order as integers, which loses no
/// optimum since `K_{s,t}`-freeness is invariant under row permutations.
/// The edges still to come are bounded by `z(k, n, s, t)` for the `k`
/// remaining rows, solved first. On timeout the best matrix found so far
/// is returned with `exact = false`.
pub fn brute_z(m: usize, n: usize, s: usize, t: usize, time_limit: Option<Duration>) -> Result<ZInstance> {
    if m == 0 || n == 0 || s == 0 || t == 0 {
        return Err(Error::BadParams("all of m, n, s, t must be positive".into()));
    }
    if n > BRUTE_MAX_COLS {
        return Err(Error::BudgetExceeded {
            what: "brute-force Zarankiewicz columns",
            needed: n as u128,
            budget: BRUTE_MAX_COLS as u128,
        });
    }
    let deadline = time_limit.map(|d| Instant::now() + d);
    let (z, rows, exact, nodes) = if s > m || t > n {
        // no K_{s,t} fits at all
        (((m * n) as u64), vec![(1u64 << n) - 1; m], true, 0)
    } else {
        solve_z(m, n, s, t, deadline)
    };
    let mut witness = BipartiteGraph::empty(m, n);
    for (i, &row) in rows.iter().enumerate() {
        for j in 0..n {
            if row >> j & 1 == 1 {
                witness.set(i, j);
            }
        }
    }
    Ok(ZInstance { m, n, s, t, z, exact, nodes, witness })
}
