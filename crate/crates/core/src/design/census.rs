use rayon::prelude::*;
use serde::Serialize;

use super::Design;
use crate::combin::{binom, next_lex_subset, BinomTable};
use crate::error::{Error, Result};

/// Default cap on the number of r-sets a census may tabulate (one byte each).
pub const DEFAULT_CENSUS_BUDGET: u128 = 1 << 31;

const MAX_SAMPLES: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Every r-set exactly once.
    Partition,
    /// Every r-set at most once.
    Packing,
}

#[derive(Clone, Debug)]
pub struct CensusConfig {
    /// Largest `C(n, r)` the census accepts.
    pub budget: u128,
    /// Worker count; `None` uses the ambient rayon pool.
    pub threads: Option<usize>,
}

impl Default for CensusConfig {
    fn default() -> Self {
        CensusConfig {
            budget: DEFAULT_CENSUS_BUDGET,
            threads: None,
        }
    }
}

/// Exact multiplicity census of the r-sets of `[n]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverageReport {
    pub total_rsets: u64,
    pub covered_once: u64,
    pub uncovered: u64,
    pub multicovered: u64,
    /// Lexicographically smallest r-sets whose multiplicity violates the
    /// requested mode (at most 20).
    pub violation_samples: Vec<Vec<u32>>,
    pub is_partition: bool,
    pub is_packing: bool,
}

pub fn verify_coverage(d: &Design, mode: Mode) -> Result<CoverageReport> {
    verify_coverage_with(d, mode, &CensusConfig::default())
}

pub fn verify_coverage_with(d: &Design, mode: Mode, cfg: &CensusConfig) -> Result<CoverageReport> {
    let table = multiplicities(d, cfg)?;
    let counts = table
        .par_chunks(1 << 20)
        .map(|c| {
            let mut z = [0u64; 3];
            for &m in c {
                z[(m as usize).min(2)] += 1;
            }
            z
        })
        .reduce(|| [0u64; 3], |a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2]]);
    let [uncovered, once, multi] = counts;

    let bad = |m: u8| match mode {
        Mode::Partition => m != 1,
        Mode::Packing => m >= 2,
    };
    let any_bad = match mode {
        Mode::Partition => uncovered + multi > 0,
        Mode::Packing => multi > 0,
    };
    let mut samples = Vec::new();
    if any_bad && d.r() <= d.n() {
        let bt = BinomTable::new(d.n(), d.r());
        let mut s: Vec<u32> = (0..d.r() as u32).collect();
        loop {
            if bad(table[bt.rank(&s) as usize]) {
                samples.push(s.clone());
                if samples.len() == MAX_SAMPLES {
                    break;
                }
            }
            if !next_lex_subset(&mut s, d.n() as u32) {
                break;
            }
        }
    }
    Ok(CoverageReport {
        total_rsets: table.len() as u64,
        covered_once: once,
        uncovered,
        multicovered: multi,
        violation_samples: samples,
        is_partition: uncovered == 0 && multi == 0,
        is_packing: multi == 0,
    })
}

/// Multiplicity of every r-set, indexed by colex rank, saturating at 255.
///
/// The table is split into ranges of r-sets sharing the same largest
/// element; each worker owns one range and walks only the sub-r-sets whose
/// maximum falls inside it, so the result does not depend on scheduling.
pub fn multiplicities(d: &Design, cfg: &CensusConfig) -> Result<Vec<u8>> {
    let (n, r) = (d.n(), d.r());
    let total = binom(n as u64, r as u64);
    if total > cfg.budget || total > usize::MAX as u128 {
        return Err(Error::RsetSpaceTooLarge {
            n,
            r,
            count: total,
            budget: cfg.budget,
        });
    }
    let total = total as usize;
    let mut table = vec![0u8; total];
    if total == 0 {
        return Ok(table);
    }
    let bt = BinomTable::new(n, r);
    let workers = cfg.threads.unwrap_or_else(rayon::current_num_threads).max(1);
    let pieces = if workers == 1 || total < (1 << 16) {
        1
    } else {
        workers * 4
    };

    // boundaries on the largest element so that ranges hold ~total/pieces sets
    let mut bounds = vec![r - 1];
    for m in r..n {
        let start = bt.get(m, r) as usize;
        let target = total * bounds.len() / pieces;
        if start >= target && start > bt.get(*bounds.last().unwrap(), r) as usize {
            bounds.push(m);
        }
    }
    bounds.push(n);
    bounds.dedup();

    let mut jobs = Vec::with_capacity(bounds.len());
    let mut rest: &mut [u8] = &mut table;
    for w in bounds.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let len = (bt.get(hi, r) - bt.get(lo, r)) as usize;
        let (head, tail) = rest.split_at_mut(len);
        jobs.push((head, lo, hi));
        rest = tail;
    }
    debug_assert!(rest.is_empty());

    jobs.into_par_iter().for_each(|(slice, lo, hi)| {
        let offset = bt.get(lo, r);
        let mut sub = vec![0u32; r - 1];
        for b in d.blocks() {
            let start = b.partition_point(|&x| (x as usize) < lo).max(r - 1);
            for k in start..b.len() {
                let m = b[k] as usize;
                if m >= hi {
                    break;
                }
                let base = bt.get(m, r) - offset;
                fill_prefix(&bt, &b[..k], &mut sub, base, slice);
            }
        }
    });
    Ok(table)
}

/// Increments every `(r-1)`-subset of `prefix` (combined with a fixed larger
/// element already accounted for in `base`).
fn fill_prefix(bt: &BinomTable, prefix: &[u32], sub: &mut [u32], base: u64, slice: &mut [u8]) {
    let k = sub.len();
    let len = prefix.len();
    if k == 0 {
        let cell = &mut slice[base as usize];
        *cell = cell.saturating_add(1);
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        for (s, &i) in sub.iter_mut().zip(&idx) {
            *s = prefix[i];
        }
        let cell = &mut slice[(base + bt.rank(sub)) as usize];
        *cell = cell.saturating_add(1);
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + len - k {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k43() -> Design {
        Design::new(
            4,
            3,
            vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]],
            "cp(4,3)",
        )
        .unwrap()
    }

    #[test]
    fn four_triples_partition() {
        let rep = verify_coverage(&k43(), Mode::Partition).unwrap();
        assert!(rep.is_partition);
        assert_eq!(rep.total_rsets, 4);
        assert_eq!(rep.covered_once, 4);
        assert!(rep.violation_samples.is_empty());
    }

    #[test]
    fn missing_and_doubled_sets_are_sampled_in_lex_order() {
        let d = Design::new(5, 3, vec![vec![0, 1, 2, 3], vec![1, 2, 3, 4]], "x").unwrap();
        let rep = verify_coverage(&d, Mode::Partition).unwrap();
        assert_eq!(rep.total_rsets, 10);
        assert_eq!(rep.multicovered, 1); // {1,2,3}
        assert_eq!(rep.covered_once, 6);
        assert_eq!(rep.uncovered, 3);
        assert_eq!(
            rep.violation_samples,
            vec![vec![0, 1, 4], vec![0, 2, 4], vec![0, 3, 4], vec![1, 2, 3]]
        );
        let rep = verify_coverage(&d, Mode::Packing).unwrap();
        assert_eq!(rep.violation_samples, vec![vec![1, 2, 3]]);
        assert!(!rep.is_packing);
    }

    #[test]
    fn budget_is_enforced() {
        let cfg = CensusConfig {
            budget: 3,
            threads: None,
        };
        assert!(matches!(
            verify_coverage_with(&k43(), Mode::Partition, &cfg),
            Err(Error::RsetSpaceTooLarge { .. })
        ));
    }

    #[test]
    fn parallel_split_matches_single_worker() {
        // every 3-subset of a 5-set block over 40 points, plus overlaps
        let mut blocks = Vec::new();
        for s in 0..70u32 {
            blocks.push(vec![s, s + 3, s + 5, s + 7, s + 9]);
        }
        let d = Design::new(80, 3, blocks, "x").unwrap();
        let one = multiplicities(
            &d,
            &CensusConfig {
                threads: Some(1),
                ..Default::default()
            },
        )
        .unwrap();
        let many = multiplicities(
            &d,
            &CensusConfig {
                threads: Some(7),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(one, many);
        let sum: u64 = one.iter().map(|&m| m as u64).sum();
        assert_eq!(sum, 70 * 10);
    }
}
