//! Steiner systems meeting the ratio bound with equality: S(8, 4, 3) from
//! the affine space over F_2, and S(24, 8, 5), S(23, 7, 4), S(22, 6, 3)
//! from the octads of the extended binary Golay code.

use rayon::prelude::*;
use serde::Serialize;

use crate::design::{derive_link, verify_coverage, Design, Mode};
use crate::error::{Error, Result};

const LEN: u32 = 24;
const DIM: usize = 12;

/// Quadratic residues mod 23.
const QR23: [u32; 11] = [1, 2, 3, 4, 6, 8, 9, 12, 13, 16, 18];

/// The 14 planes of AG(3, 2): all `{x, y, z, x^y^z}`.
pub fn build_s843() -> Result<Design> {
    let mut blocks = Vec::new();
    for x in 0u32..8 {
        for y in x + 1..8 {
            for z in y + 1..8 {
                let w = x ^ y ^ z;
                if w > z {
                    blocks.push(vec![x, y, z, w]);
                }
            }
        }
    }
    let d = Design::new(8, 3, blocks, "steiner s843")?;
    if !verify_coverage(&d, Mode::Partition)?.is_partition {
        return Err(Error::ConstructionFailed("AG(3,2) planes are not a 3-partition".into()));
    }
    Ok(d)
}

/// A binary linear code of length 24 with rows as bit words (bit i is
/// coordinate i).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearCode {
    pub rows: Vec<u32>,
    /// `weights[w]` is the number of codewords of weight `w`.
    pub weights: Vec<u64>,
}

impl LinearCode {
    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn codewords(&self) -> Vec<u32> {
        let k = self.rows.len();
        (0u32..1 << k)
            .map(|m| {
                (0..k)
                    .filter(|&i| m >> i & 1 == 1)
                    .fold(0u32, |acc, i| acc ^ self.rows[i])
            })
            .collect()
    }

    /// Membership by reduction against the echelon rows.
    pub fn contains(&self, word: u32) -> bool {
        let mut w = word;
        for &r in &self.rows {
            let lead = 31 - r.leading_zeros();
            if w >> lead & 1 == 1 {
                w ^= r;
            }
        }
        w == 0
    }

    pub fn is_self_orthogonal(&self) -> bool {
        self.rows
            .iter()
            .all(|&a| self.rows.iter().all(|&b| (a & b).count_ones() % 2 == 0))
    }

    pub fn min_weight(&self) -> u32 {
        self.weights
            .iter()
            .enumerate()
            .skip(1)
            .find(|(_, &c)| c > 0)
            .map_or(0, |(w, _)| w as u32)
    }
}

/// Reduced row echelon basis (distinct leading bits, descending).
fn echelon(words: &[u32]) -> Vec<u32> {
    let mut basis: Vec<u32> = Vec::new();
    for &w in words {
        let mut w = w;
        for &b in &basis {
            let lead = 31 - b.leading_zeros();
            if w >> lead & 1 == 1 {
                w ^= b;
            }
        }
        if w != 0 {
            let lead = 31 - w.leading_zeros();
            for b in basis.iter_mut() {
                if *b >> lead & 1 == 1 {
                    *b ^= w;
                }
            }
            basis.push(w);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis
}

fn weight_census(rows: &[u32], len: u32) -> Vec<u64> {
    let k = rows.len();
    let mut weights = vec![0u64; len as usize + 1];
    let partial: Vec<Vec<u64>> = (0u32..1 << k.min(6))
        .into_par_iter()
        .map(|hi| {
            let mut w = vec![0u64; len as usize + 1];
            let low = k.saturating_sub(6);
            let base = (0..k.min(6))
                .filter(|&i| hi >> i & 1 == 1)
                .fold(0u32, |acc, i| acc ^ rows[low + i]);
            for m in 0u32..1 << low {
                let c = (0..low).filter(|&i| m >> i & 1 == 1).fold(base, |acc, i| acc ^ rows[i]);
                w[c.count_ones() as usize] += 1;
            }
            w
        })
        .collect();
    for p in partial {
        for (a, b) in weights.iter_mut().zip(p) {
            *a += b;
        }
    }
    weights
}

fn cyclic_shift(word: u32, s: u32) -> u32 {
    let mask = (1u32 << 23) - 1;
    ((word << s) | (word >> (23 - s))) & mask
}

/// The extended Golay code: the cyclic [23, 12, 7] quadratic-residue code
/// plus an overall parity bit at coordinate 23.
pub fn build_golay() -> Result<LinearCode> {
    let qr = QR23.iter().fold(0u32, |acc, &i| acc | 1 << i);
    // the QR code is the span of the shifts of one of these idempotent-like
    // generators; take the first that gives a [23, 12, 7] code
    let candidates = [qr, qr | 1, !qr & ((1 << 23) - 1) & !1, !qr & ((1 << 23) - 1)];
    for g in candidates {
        let shifts: Vec<u32> = (0..23).map(|s| cyclic_shift(g, s)).collect();
        let basis = echelon(&shifts);
        if basis.len() != DIM {
            continue;
        }
        let w23 = weight_census(&basis, 23);
        if w23[1..7].iter().any(|&c| c > 0) {
            continue;
        }
        let extended: Vec<u32> = basis
            .iter()
            .map(|&w| w | ((w.count_ones() & 1) << 23))
            .collect();
        let rows = echelon(&extended);
        let weights = weight_census(&rows, LEN);
        let code = LinearCode { rows, weights };
        check_golay(&code)?;
        return Ok(code);
    }
    Err(Error::ConstructionFailed("no quadratic-residue generator gave a [23,12,7] code".into()))
}

fn check_golay(c: &LinearCode) -> Result<()> {
    let mut expected = vec![0u64; LEN as usize + 1];
    expected[0] = 1;
    expected[8] = 759;
    expected[12] = 2576;
    expected[16] = 759;
    expected[24] = 1;
    if c.dimension() != DIM || c.weights != expected {
        return Err(Error::ConstructionFailed(format!(
            "weight distribution {:?} is not the Golay distribution",
            c.weights
        )));
    }
    if !c.is_self_orthogonal() {
        return Err(Error::ConstructionFailed("code is not self-dual".into()));
    }
    Ok(())
}

fn support(w: u32) -> Vec<u32> {
    (0..LEN).filter(|&i| w >> i & 1 == 1).collect()
}

#[derive(Clone, Debug)]
pub struct OctadDesigns {
    pub s24: Design,
    pub s23: Design,
    pub s22: Design,
}

/// Blocks of `d` through `v`, with `v` deleted, as a design on `n - 1`
/// points of uniformity `r - 1`. Points above `v` keep their labels since
/// `v` is always the largest point here.
fn contract_top(d: &Design, label: &str) -> Result<Design> {
    let v = d.n() as u32 - 1;
    let link = derive_link(d, v)?;
    Ok(link.design.relabeled(label))
}

pub fn octad_designs(code: &LinearCode) -> Result<OctadDesigns> {
    let mut octads: Vec<Vec<u32>> = code
        .codewords()
        .into_iter()
        .filter(|w| w.count_ones() == 8)
        .map(support)
        .collect();
    octads.sort();
    let s24 = Design::new(24, 5, octads, "witt s24")?;
    let s23 = contract_top(&s24, "witt s23")?;
    let s22 = contract_top(&s23, "witt s22")?;
    for d in [&s24, &s23, &s22] {
        let rep = verify_coverage(d, Mode::Partition)?;
        if !rep.is_partition {
            return Err(Error::ConstructionFailed(format!(
                "`{}` is not a partition: {} uncovered, {} multicovered",
                d.label(),
                rep.uncovered,
                rep.multicovered
            )));
        }
    }
    Ok(OctadDesigns { s24, s23, s22 })
}

/// Sizes of pairwise block intersections that occur, ascending.
pub fn intersection_sizes(d: &Design) -> Vec<usize> {
    let words: Vec<u32> = d
        .blocks()
        .iter()
        .map(|b| b.iter().fold(0u32, |acc, &x| acc | 1 << x))
        .collect();
    let mask = (0..words.len())
        .into_par_iter()
        .map(|i| {
            words[i + 1..]
                .iter()
                .fold(0u64, |m, &w| m | 1 << (words[i] & w).count_ones())
        })
        .reduce(|| 0, |a, b| a | b);
    (0..64).filter(|&s| mask >> s & 1 == 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s843() {
        let d = build_s843().unwrap();
        assert_eq!(d.len(), 14);
        assert!(d.blocks().contains(&vec![0, 1, 2, 3]));
        assert!(d.blocks().iter().all(|b| b.iter().fold(0, |a, &x| a ^ x) == 0));
    }

    #[test]
    fn golay_weights_and_membership() {
        let c = build_golay().unwrap();
        assert_eq!(c.min_weight(), 8);
        assert!(c.contains(0));
        assert!(c.contains((1 << 24) - 1));
        let octad = c.codewords().into_iter().find(|w| w.count_ones() == 8).unwrap();
        assert!(c.contains(!octad & ((1 << 24) - 1)));
        assert!(!c.contains(1));
    }

    #[test]
    fn echelon_rank() {
        assert_eq!(echelon(&[0b11, 0b01, 0b10]).len(), 2);
        assert_eq!(echelon(&[0]).len(), 0);
    }
}
