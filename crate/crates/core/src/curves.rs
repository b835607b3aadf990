//! Graphs of low-degree polynomials as an almost-partition.
//!
//! Over GF(q) the graphs `{(x, p(x))}` of all `q^r` polynomials of degree
//! below `r` are `q`-sets on the `q²` points of the affine plane. Two of
//! them share at most `r - 1` points, and an `r`-set whose first
//! coordinates are distinct lies on exactly one graph (interpolation), so
//! only the `r`-sets with a repeated first coordinate are missed.

use serde::Serialize;

use crate::combin::binom;
use crate::design::{verify_coverage_with, CensusConfig, Design, Mode};
use crate::error::{Error, Result};
use crate::field::{prime_power, FieldSpec};

/// Default cap on `q^r`.
pub const DEFAULT_CURVE_BUDGET: u128 = 1 << 22;

#[derive(Clone, Debug)]
pub struct CurveFamily {
    field: FieldSpec,
    r: usize,
    design: Design,
}

impl CurveFamily {
    pub fn q(&self) -> u32 {
        self.field.order()
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn design(&self) -> &Design {
        &self.design
    }

    pub fn into_design(self) -> Design {
        self.design
    }
}

pub fn build_curves(q: u64, r: usize) -> Result<CurveFamily> {
    build_curves_with_budget(q, r, DEFAULT_CURVE_BUDGET)
}

/// Blocks are emitted in lexicographic order of the coefficient tuple
/// `(c_0, ..., c_{r-1})`, constant term first; point `(x, y)` has index
/// `x·q + y`.
pub fn build_curves_with_budget(q: u64, r: usize, budget: u128) -> Result<CurveFamily> {
    if prime_power(q).is_none() {
        return Err(Error::NotPrimePower(q));
    }
    if r < 2 || (q as usize) < r {
        return Err(Error::BadParams(format!(
            "need 2 <= r <= q, got q = {q}, r = {r}"
        )));
    }
    let count = (q as u128).pow(r as u32);
    if count > budget {
        return Err(Error::BudgetExceeded {
            what: "curve family",
            needed: count,
            budget,
        });
    }
    let f = FieldSpec::of_order(q)?;
    let qq = q as u32;
    let mut blocks = Vec::with_capacity(count as usize);
    let mut coeffs = vec![0u32; r];
    loop {
        let block: Vec<u32> = f
            .elements()
            .map(|x| {
                // Horner from the top coefficient down
                let y = coeffs
                    .iter()
                    .rev()
                    .fold(f.zero(), |acc, &c| f.add(f.mul(acc, x), f.elem(c)));
                x.index() * qq + y.index()
            })
            .collect();
        blocks.push(block);
        // next tuple, c_{r-1} varying fastest
        let mut i = r;
        loop {
            if i == 0 {
                let design = Design::new(
                    (q * q) as usize,
                    r,
                    blocks,
                    format!("curves q={q} r={r}"),
                )?;
                return Ok(CurveFamily { field: f, r, design });
            }
            i -= 1;
            coeffs[i] += 1;
            if coeffs[i] < qq {
                break;
            }
            coeffs[i] = 0;
        }
    }
}

/// Exact census of a curve family with the interpolation closed forms.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurveCensus {
    pub q: u32,
    pub r: usize,
    pub total_rsets: u64,
    pub covered: u64,
    pub uncovered: u64,
    pub multicovered: u64,
    /// `C(q, r)·q^r`
    pub expected_covered: u64,
    /// `C(q², r) - C(q, r)·q^r`
    pub expected_uncovered: u64,
    pub matches_closed_form: bool,
    /// Leading-order estimate `q^(2r-1) / (2 (r-2)!)` of the missed r-sets.
    pub leading_order_uncovered: f64,
    pub uncovered_fraction: f64,
}

pub fn coverage_census(fam: &CurveFamily) -> Result<CurveCensus> {
    coverage_census_with(fam, &CensusConfig::default())
}

pub fn coverage_census_with(fam: &CurveFamily, cfg: &CensusConfig) -> Result<CurveCensus> {
    let rep = verify_coverage_with(&fam.design, Mode::Packing, cfg)?;
    let q = fam.q() as u64;
    let r = fam.r as u64;
    let expected_covered = (binom(q, r) * (q as u128).pow(r as u32)) as u64;
    let expected_uncovered = rep.total_rsets - expected_covered;
    let fact: f64 = (1..=r.saturating_sub(2)).map(|i| i as f64).product();
    Ok(CurveCensus {
        q: fam.q(),
        r: fam.r,
        total_rsets: rep.total_rsets,
        covered: rep.covered_once,
        uncovered: rep.uncovered,
        multicovered: rep.multicovered,
        expected_covered,
        expected_uncovered,
        matches_closed_form: rep.multicovered == 0
            && rep.covered_once == expected_covered
            && rep.uncovered == expected_uncovered,
        leading_order_uncovered: (q as f64).powi(2 * r as i32 - 1) / (2.0 * fact),
        uncovered_fraction: rep.uncovered as f64 / rep.total_rsets as f64,
    })
}

/// Largest intersection between two distinct blocks, by bucketing blocks
/// through each point.
pub fn pairwise_intersection_check(fam: &CurveFamily) -> usize {
    max_pairwise_intersection(&fam.design)
}

pub fn max_pairwise_intersection(d: &Design) -> usize {
    let mut through: Vec<Vec<u32>> = vec![Vec::new(); d.n()];
    for (i, b) in d.blocks().iter().enumerate() {
        for &x in b {
            through[x as usize].push(i as u32);
        }
    }
    let mut counts = vec![0u32; d.len()];
    let mut touched = Vec::new();
    let mut best = 0usize;
    for (i, b) in d.blocks().iter().enumerate() {
        for &x in b {
            for &j in &through[x as usize] {
                if (j as usize) > i {
                    if counts[j as usize] == 0 {
                        touched.push(j);
                    }
                    counts[j as usize] += 1;
                }
            }
        }
        for &j in &touched {
            best = best.max(counts[j as usize] as usize);
            counts[j as usize] = 0;
        }
        touched.clear();
    }
    best
}

/// Curve family for an arbitrary `n`: the smallest prime power `q >= r`
/// with `q² >= n`, restricted to the points `0..n`. Restricted blocks with
/// fewer than `r` points (or all `n` points) are dropped.
pub fn curves_for_n(n: usize, r: usize) -> Result<(u64, Design)> {
    let mut q = (r as u64).max(2);
    while q * q < n as u64 || prime_power(q).is_none() {
        q += 1;
    }
    let fam = build_curves(q, r)?;
    let blocks: Vec<Vec<u32>> = fam
        .design
        .blocks()
        .iter()
        .map(|b| b.iter().copied().filter(|&x| (x as usize) < n).collect::<Vec<_>>())
        .filter(|b| b.len() >= r && b.len() < n)
        .collect();
    let d = Design::new(n, r, blocks, format!("curves q={q} r={r} induced n={n}"))?;
    Ok((q, d))
}
