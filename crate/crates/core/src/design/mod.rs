//! Set systems over `0..n`, their exact coverage census, derived links and
//! the `cliquepart-design v1` file format.

mod census;
mod io;

pub use census::{
    multiplicities, verify_coverage, verify_coverage_with, CensusConfig, CoverageReport, Mode,
    DEFAULT_CENSUS_BUDGET,
};
pub use io::{parse_design, read_design, render_design, write_design, FORMAT_HEADER};

use std::collections::HashSet;

use num_rational::Ratio;
use serde::Serialize;

use crate::combin::binom;
use crate::error::{Error, Result};

/// A family of blocks over the points `0..n`, meant to cover `r`-sets.
///
/// Every block is strictly increasing, has at least `r` and fewer than `n`
/// points, and no block occurs twice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Design {
    n: usize,
    r: usize,
    blocks: Vec<Vec<u32>>,
    label: String,
}

impl Design {
    pub fn new(n: usize, r: usize, blocks: Vec<Vec<u32>>, label: impl Into<String>) -> Result<Self> {
        if r == 0 {
            return Err(Error::BadParams("uniformity must be at least 1".into()));
        }
        if n > u32::MAX as usize {
            return Err(Error::BadParams(format!("point count {n} too large")));
        }
        let mut seen: HashSet<&[u32]> = HashSet::with_capacity(blocks.len());
        for (i, b) in blocks.iter().enumerate() {
            if b.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvariantViolation {
                    block: i,
                    msg: "entries are not strictly increasing".into(),
                });
            }
            if let Some(&last) = b.last() {
                if last as usize >= n {
                    return Err(Error::InvariantViolation {
                        block: i,
                        msg: format!("point {last} outside 0..{n}"),
                    });
                }
            }
            if b.len() < r {
                return Err(Error::InvariantViolation {
                    block: i,
                    msg: format!("size {} is below the uniformity {r}", b.len()),
                });
            }
            if b.len() >= n {
                return Err(Error::InvariantViolation {
                    block: i,
                    msg: "block contains every point (not a proper subset)".into(),
                });
            }
            if !seen.insert(b.as_slice()) {
                return Err(Error::InvariantViolation {
                    block: i,
                    msg: "duplicate block".into(),
                });
            }
        }
        Ok(Design {
            n,
            r,
            blocks,
            label: label.into(),
        })
    }

    /// Sorts every block before validating.
    pub fn from_unsorted(
        n: usize,
        r: usize,
        mut blocks: Vec<Vec<u32>>,
        label: impl Into<String>,
    ) -> Result<Self> {
        for b in &mut blocks {
            b.sort_unstable();
        }
        Self::new(n, r, blocks, label)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn into_blocks(self) -> Vec<Vec<u32>> {
        self.blocks
    }

    /// Same blocks with a new label.
    pub fn relabeled(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Copy with a different uniformity; fails if some block gets too small.
    pub fn with_uniformity(&self, r: usize) -> Result<Self> {
        Self::new(self.n, r, self.blocks.clone(), self.label.clone())
    }

    /// Blocks with a canonical order, for set-equality comparisons.
    pub fn sorted_blocks(&self) -> Vec<Vec<u32>> {
        let mut b = self.blocks.clone();
        b.sort();
        b
    }

    /// Number of blocks through each point.
    pub fn point_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n];
        for b in &self.blocks {
            for &x in b {
                deg[x as usize] += 1;
            }
        }
        deg
    }
}

/// Result of [`derive_link`].
#[derive(Clone, Debug)]
pub struct Link {
    pub design: Design,
    /// No block passed through the chosen point.
    pub degenerate: bool,
    /// The link has uniformity 1, which only carries counting information.
    pub statistics_only: bool,
}

/// The link at `v`: every block through `v` with `v` removed, on `n - 1`
/// points (indices above `v` shift down) at uniformity `r - 1`.
pub fn derive_link(d: &Design, v: u32) -> Result<Link> {
    if d.r < 2 {
        return Err(Error::UniformityUnderflow(d.r));
    }
    if v as usize >= d.n {
        return Err(Error::BadParams(format!("point {v} outside 0..{}", d.n)));
    }
    let blocks: Vec<Vec<u32>> = d
        .blocks
        .iter()
        .filter(|b| b.binary_search(&v).is_ok())
        .map(|b| {
            b.iter()
                .filter(|&&x| x != v)
                .map(|&x| if x > v { x - 1 } else { x })
                .collect()
        })
        .collect();
    let degenerate = blocks.is_empty();
    let design = Design::new(
        d.n - 1,
        d.r - 1,
        blocks,
        format!("link v={v} of {}", d.label),
    )?;
    Ok(Link {
        design,
        degenerate,
        statistics_only: d.r - 1 < 2,
    })
}

/// Size statistics of a block family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionStats {
    /// Block sizes, nondecreasing.
    pub sizes: Vec<usize>,
    /// Number of blocks.
    pub p: usize,
    /// Average block size, exact; zero for an empty family.
    #[serde(serialize_with = "ser_ratio")]
    pub average: Ratio<u64>,
    pub sum_sizes: u64,
    /// Sum of `C(|block|, r)`.
    pub sum_r_binomials: u128,
}

fn ser_ratio<S: serde::Serializer>(r: &Ratio<u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

pub fn partition_stats(d: &Design) -> PartitionStats {
    let mut sizes: Vec<usize> = d.blocks.iter().map(Vec::len).collect();
    sizes.sort_unstable();
    let sum_sizes: u64 = sizes.iter().map(|&s| s as u64).sum();
    let sum_r_binomials = sizes.iter().map(|&s| binom(s as u64, d.r as u64)).sum();
    let p = sizes.len();
    let average = if p == 0 {
        Ratio::from_integer(0)
    } else {
        Ratio::new(sum_sizes, p as u64)
    };
    PartitionStats {
        sizes,
        p,
        average,
        sum_sizes,
        sum_r_binomials,
    }
}

/// True iff the blocks are one `(n-1)`-set plus the `n - 1` pairs joining
/// the remaining point to it.
pub fn is_near_pencil(d: &Design) -> Result<bool> {
    if d.r != 2 {
        return Err(Error::WrongUniformity {
            expected: 2,
            got: d.r,
        });
    }
    let n = d.n;
    if n < 3 || d.blocks.len() != n {
        return Ok(false);
    }
    // candidates for the big block; for n = 3 every pair qualifies
    for big in d.blocks.iter().filter(|b| b.len() == n - 1) {
        let missing = (0..n as u32)
            .find(|x| big.binary_search(x).is_err())
            .expect("an (n-1)-set misses one point");
        let mut partners: Vec<u32> = d
            .blocks
            .iter()
            .filter(|b| !std::ptr::eq(*b, big))
            .filter(|b| b.len() == 2 && b.contains(&missing))
            .map(|b| if b[0] == missing { b[1] } else { b[0] })
            .collect();
        partners.sort_unstable();
        if partners == *big {
            return Ok(true);
        }
    }
    Ok(false)
}
