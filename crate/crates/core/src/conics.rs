//! Nondegenerate conics of PG(2, q), q odd.
//!
//! A conic is the zero set of `Q(x, y, z) = a x² + b y² + c z² + 2d xy +
//! 2e xz + 2f yz` whose symmetric matrix `[[a, d, e], [d, b, f], [e, f, c]]`
//! is nonsingular. There are `q⁵ - q²` of them, each an arc of `q + 1`
//! points, and five points in general position lie on at most one. Hence
//!
//! * all conics form a 5-packing of the `q² + q + 1` points, and
//! * the conics through a fixed point, with that point removed, form a
//!   4-packing of the remaining `q² + q` points.
//!
//! Points are normalized so the first nonzero coordinate is 1 and indexed
//! as `(1, y, z) ↦ y·q + z`, `(0, 1, z) ↦ q² + z`, `(0, 0, 1) ↦ q² + q`.
//! The distinguished point `(1, 0, 0)` is index 0.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::combin::{binom, for_each_combination};
use crate::design::{verify_coverage_with, CensusConfig, CoverageReport, Design, Mode};
use crate::error::{Error, Result};
use crate::field::{prime_power, FieldElement, FieldSpec};

/// Largest order enumerated by default.
pub const DEFAULT_CONIC_MAX_Q: u64 = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectivePoint(pub [FieldElement; 3]);

/// The points of PG(2, q) in index order.
pub fn projective_points(f: &FieldSpec) -> Vec<ProjectivePoint> {
    let (z, o) = (f.zero(), f.one());
    let mut pts = Vec::with_capacity((f.order() * f.order() + f.order() + 1) as usize);
    for y in f.elements() {
        for w in f.elements() {
            pts.push(ProjectivePoint([o, y, w]));
        }
    }
    for w in f.elements() {
        pts.push(ProjectivePoint([z, o, w]));
    }
    pts.push(ProjectivePoint([z, z, o]));
    pts
}

/// Index of a point given in any homogeneous coordinates.
pub fn point_index(f: &FieldSpec, p: [FieldElement; 3]) -> Result<u32> {
    let q = f.order();
    let lead = p
        .iter()
        .position(|c| !c.is_zero())
        .ok_or_else(|| Error::BadParams("(0, 0, 0) is not a projective point".into()))?;
    let s = f.inv(p[lead])?;
    let n: Vec<FieldElement> = p.iter().map(|&c| f.mul(c, s)).collect();
    Ok(match lead {
        0 => n[1].index() * q + n[2].index(),
        1 => q * q + n[2].index(),
        _ => q * q + q,
    })
}

/// A nondegenerate conic: its canonically scaled matrix entries
/// `[m00, m01, m02, m11, m12, m22]` (first nonzero equal to 1) and its
/// sorted point indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conic {
    pub matrix: [FieldElement; 6],
    pub points: Vec<u32>,
}

impl Conic {
    pub fn contains(&self, p: u32) -> bool {
        self.points.binary_search(&p).is_ok()
    }
}

fn eval_form(f: &FieldSpec, m: &[FieldElement; 6], p: &[FieldElement; 3]) -> FieldElement {
    let [m00, m01, m02, m11, m12, m22] = *m;
    let [x, y, z] = *p;
    let two = f.from_int(2);
    let sq = f.add(
        f.add(f.mul(m00, f.square(x)), f.mul(m11, f.square(y))),
        f.mul(m22, f.square(z)),
    );
    let cross = f.add(
        f.add(f.mul(m01, f.mul(x, y)), f.mul(m02, f.mul(x, z))),
        f.mul(m12, f.mul(y, z)),
    );
    f.add(sq, f.mul(two, cross))
}

fn det3(f: &FieldSpec, r: [[FieldElement; 3]; 3]) -> FieldElement {
    let t1 = f.mul(r[0][0], f.sub(f.mul(r[1][1], r[2][2]), f.mul(r[1][2], r[2][1])));
    let t2 = f.mul(r[0][1], f.sub(f.mul(r[1][0], r[2][2]), f.mul(r[1][2], r[2][0])));
    let t3 = f.mul(r[0][2], f.sub(f.mul(r[1][0], r[2][1]), f.mul(r[1][1], r[2][0])));
    f.add(f.sub(t1, t2), t3)
}

/// All `q⁵ - q²` nondegenerate conics, sorted by point set.
pub fn enumerate_conics(q: u64) -> Result<Vec<Conic>> {
    enumerate_conics_with_cap(q, DEFAULT_CONIC_MAX_Q)
}

pub fn enumerate_conics_with_cap(q: u64, max_q: u64) -> Result<Vec<Conic>> {
    let (p, _) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    if p == 2 {
        return Err(Error::EvenCharacteristic);
    }
    if q > max_q {
        return Err(Error::BudgetExceeded {
            what: "conic enumeration order",
            needed: q as u128,
            budget: max_q as u128,
        });
    }
    let f = FieldSpec::of_order(q)?;
    let pts = projective_points(&f);
    let qq = q as u32;

    // projective classes of 6-tuples: first nonzero coordinate is 1
    let leads: Vec<(usize, u32)> = (0..6usize)
        .flat_map(|lead| {
            let tail = qq.pow((5 - lead) as u32);
            (0..tail).map(move |t| (lead, t))
        })
        .collect();
    let mut conics: Vec<Conic> = leads
        .par_iter()
        .filter_map(|&(lead, mut t)| {
            let mut m = [f.zero(); 6];
            m[lead] = f.one();
            for slot in m.iter_mut().skip(lead + 1) {
                *slot = f.elem(t % qq);
                t /= qq;
            }
            let [m00, m01, m02, m11, m12, m22] = m;
            if det3(&f, [[m00, m01, m02], [m01, m11, m12], [m02, m12, m22]]).is_zero() {
                return None;
            }
            let points: Vec<u32> = pts
                .iter()
                .enumerate()
                .filter(|(_, p)| eval_form(&f, &m, &p.0).is_zero())
                .map(|(i, _)| i as u32)
                .collect();
            Some(Conic { matrix: m, points })
        })
        .collect();
    conics.sort_by(|a, b| a.points.cmp(&b.points).then(a.matrix.cmp(&b.matrix)));
    let mut seen = HashSet::new();
    conics.retain(|c| seen.insert(c.points.clone()));
    let expected = q.pow(5) - q * q;
    if conics.len() as u64 != expected {
        return Err(Error::ConstructionFailed(format!(
            "found {} conics in PG(2,{q}), expected {expected}",
            conics.len()
        )));
    }
    Ok(conics)
}

pub fn conics_through_point(conics: &[Conic], point: u32) -> Vec<&Conic> {
    conics.iter().filter(|c| c.contains(point)).collect()
}

/// True iff no three of the points are collinear.
pub fn is_arc(f: &FieldSpec, points: &[u32]) -> bool {
    let all = projective_points(f);
    let mut ok = true;
    for_each_combination(points, 3, |t| {
        if ok {
            let rows = [all[t[0] as usize].0, all[t[1] as usize].0, all[t[2] as usize].0];
            if det3(f, rows).is_zero() {
                ok = false;
            }
        }
    });
    ok
}

#[derive(Clone, Debug, Serialize)]
pub struct ConicDesign {
    #[serde(skip)]
    pub design: Design,
    pub q: u64,
    pub r: usize,
    pub blocks: usize,
    pub block_size: usize,
    pub census: CoverageReport,
    /// `(q⁴ - q²)·C(q, 4)` for r = 4, `(q⁵ - q²)·C(q + 1, 5)` for r = 5.
    pub expected_covered: u64,
    pub matches_formula: bool,
}

pub fn build_conic_design(q: u64, r: usize) -> Result<ConicDesign> {
    build_conic_design_with(q, r, &CensusConfig::default())
}

pub fn build_conic_design_with(q: u64, r: usize, cfg: &CensusConfig) -> Result<ConicDesign> {
    if r != 4 && r != 5 {
        return Err(Error::BadParams(format!("conic designs exist for r = 4, 5, not {r}")));
    }
    let block_size = if r == 4 { q } else { q + 1 };
    if block_size < r as u64 {
        return Err(Error::BadParams(format!(
            "blocks of size {block_size} cover no {r}-sets (q = {q} too small)"
        )));
    }
    let conics = enumerate_conics(q)?;
    let (n, blocks, expected) = if r == 4 {
        let blocks: Vec<Vec<u32>> = conics_through_point(&conics, 0)
            .into_iter()
            .map(|c| c.points.iter().filter(|&&x| x != 0).map(|&x| x - 1).collect())
            .collect();
        let expected = (q.pow(4) - q * q) as u128 * binom(q, 4);
        ((q * q + q) as usize, blocks, expected)
    } else {
        let blocks: Vec<Vec<u32>> = conics.into_iter().map(|c| c.points).collect();
        let expected = (q.pow(5) - q * q) as u128 * binom(q + 1, 5);
        ((q * q + q + 1) as usize, blocks, expected)
    };
    let design = Design::new(n, r, blocks, format!("conics q={q} r={r}"))?;
    let census = verify_coverage_with(&design, Mode::Packing, cfg)?;
    Ok(ConicDesign {
        q,
        r,
        blocks: design.len(),
        block_size: block_size as usize,
        matches_formula: census.is_packing && census.covered_once as u128 == expected,
        expected_covered: expected as u64,
        census,
        design,
    })
}
