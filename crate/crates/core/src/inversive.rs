//! Inversive planes of order `q ≡ 3 (mod 4)` from circles in the affine
//! plane over GF(q).
//!
//! Points are the `q²` pairs `(x₁, x₂)` plus one point at infinity `v`. The
//! circles are
//!
//! * `C(a, λ) = {x : (x₁ - a₁)² + (x₂ - a₂)² = λ}` for every center `a` and
//!   nonzero radius `λ` (`q²(q - 1)` of them),
//! * every affine line with `v` added: `q²` lines of finite slope
//!   `x₂ = a₁x₁ + a₂` and `q` vertical lines `x₁ = μ`.
//!
//! Because `-1` is a non-square when `q ≡ 3 (mod 4)`, every finite circle
//! has exactly `q + 1` points and meets every line in at most two, and the
//! `q³ + q` circles form a 3-(q²+1, q+1, 1) design.
//!
//! Point `(x₁, x₂)` has index `x₁·q + x₂` (canonical field indices); `v` has
//! index `q²`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::combin::next_lex_subset;
use crate::design::{verify_coverage_with, CensusConfig, CoverageReport, Design, Mode};
use crate::error::{Error, Result};
use crate::field::{prime_power, FieldElement, FieldSpec};

/// Largest order for which finite circles are found by scanning the plane.
const SCAN_MAX_Q: u32 = 31;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CircleKind {
    Finite { a1: u32, a2: u32, lambda: u32 },
    SlopeLine { a1: u32, a2: u32 },
    VerticalLine { mu: u32 },
}

#[derive(Clone, Debug)]
pub struct InversivePlaneModel {
    field: FieldSpec,
    circles: Design,
    kinds: Vec<CircleKind>,
}

impl InversivePlaneModel {
    pub fn q(&self) -> u32 {
        self.field.order()
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// The circles as a design on `q² + 1` points with `r = 3`.
    pub fn circles(&self) -> &Design {
        &self.circles
    }

    pub fn into_design(self) -> Design {
        self.circles
    }

    /// Kind tag of each circle, aligned with `circles().blocks()`.
    pub fn kinds(&self) -> &[CircleKind] {
        &self.kinds
    }

    pub fn point_index(&self, x1: FieldElement, x2: FieldElement) -> u32 {
        x1.index() * self.q() + x2.index()
    }

    /// Coordinates of an affine point, `None` for the point at infinity.
    pub fn point_coords(&self, idx: u32) -> Option<(FieldElement, FieldElement)> {
        let q = self.q();
        (idx < q * q).then(|| (self.field.elem(idx / q), self.field.elem(idx % q)))
    }

    pub fn infinity(&self) -> u32 {
        self.q() * self.q()
    }

    /// Position of a circle in the block list.
    pub fn circle_id(&self, kind: CircleKind) -> usize {
        let q = self.q() as usize;
        match kind {
            CircleKind::Finite { a1, a2, lambda } => {
                (a1 as usize * q + a2 as usize) * (q - 1) + lambda as usize - 1
            }
            CircleKind::SlopeLine { a1, a2 } => q * q * (q - 1) + a1 as usize * q + a2 as usize,
            CircleKind::VerticalLine { mu } => q * q * q + mu as usize,
        }
    }
}

pub fn build_inversive(q: u64) -> Result<InversivePlaneModel> {
    build_with(q, q <= SCAN_MAX_Q as u64)
}

fn build_with(q: u64, scan: bool) -> Result<InversivePlaneModel> {
    if prime_power(q).is_none() {
        return Err(Error::NotPrimePower(q));
    }
    if q % 4 != 3 {
        return Err(Error::BadResidue(q));
    }
    let f = FieldSpec::of_order(q)?;
    let qq = q as u32;
    let idx = |x: FieldElement, y: FieldElement| x.index() * qq + y.index();
    let total = (q * q * q + q) as usize;
    let mut blocks: Vec<Vec<u32>> = Vec::with_capacity(total);
    let mut kinds = Vec::with_capacity(total);

    let squares: Vec<FieldElement> = f.elements().map(|x| f.square(x)).collect();
    // circles of radius λ about the origin, used by the translation path
    let reference: Vec<Vec<(FieldElement, FieldElement)>> = if scan {
        Vec::new()
    } else {
        let mut r = vec![Vec::new(); qq as usize];
        for x in f.elements() {
            for y in f.elements() {
                let l = f.add(squares[x.index() as usize], squares[y.index() as usize]);
                r[l.index() as usize].push((x, y));
            }
        }
        r
    };

    let mut buckets: Vec<Vec<u32>> = vec![Vec::with_capacity(qq as usize + 1); qq as usize];
    for a1 in f.elements() {
        let d1: Vec<FieldElement> = f.elements().map(|x| f.square(f.sub(x, a1))).collect();
        for a2 in f.elements() {
            if scan {
                let d2: Vec<FieldElement> =
                    f.elements().map(|y| f.square(f.sub(y, a2))).collect();
                for b in buckets.iter_mut() {
                    b.clear();
                }
                for x in f.elements() {
                    for y in f.elements() {
                        let l = f.add(d1[x.index() as usize], d2[y.index() as usize]);
                        buckets[l.index() as usize].push(idx(x, y));
                    }
                }
            }
            for lambda in f.nonzero_elements() {
                let mut pts = if scan {
                    buckets[lambda.index() as usize].clone()
                } else {
                    let mut p: Vec<u32> = reference[lambda.index() as usize]
                        .iter()
                        .map(|&(x, y)| idx(f.add(x, a1), f.add(y, a2)))
                        .collect();
                    p.sort_unstable();
                    p
                };
                pts.shrink_to_fit();
                if pts.len() != qq as usize + 1 {
                    return Err(Error::ConstructionFailed(format!(
                        "circle C(({},{}),{}) has {} points",
                        a1.index(),
                        a2.index(),
                        lambda.index(),
                        pts.len()
                    )));
                }
                blocks.push(pts);
                kinds.push(CircleKind::Finite {
                    a1: a1.index(),
                    a2: a2.index(),
                    lambda: lambda.index(),
                });
            }
        }
    }
    let v = qq * qq;
    for a1 in f.elements() {
        for a2 in f.elements() {
            let mut pts: Vec<u32> = f
                .elements()
                .map(|x| idx(x, f.add(f.mul(a1, x), a2)))
                .collect();
            pts.push(v);
            blocks.push(pts);
            kinds.push(CircleKind::SlopeLine {
                a1: a1.index(),
                a2: a2.index(),
            });
        }
    }
    for mu in f.elements() {
        let mut pts: Vec<u32> = f.elements().map(|y| idx(mu, y)).collect();
        pts.push(v);
        blocks.push(pts);
        kinds.push(CircleKind::VerticalLine { mu: mu.index() });
    }
    let circles = Design::new((q * q + 1) as usize, 3, blocks, format!("inversive q={q}"))?;
    Ok(InversivePlaneModel {
        field: f,
        circles,
        kinds,
    })
}

/// Brute-force count of `(x, y)` with `(x - a)² + (y - b)² = λ`.
pub fn circle_solution_count(
    f: &FieldSpec,
    a: FieldElement,
    b: FieldElement,
    lambda: FieldElement,
) -> u64 {
    let mut count = 0;
    for x in f.elements() {
        let dx = f.square(f.sub(x, a));
        for y in f.elements() {
            if f.add(dx, f.square(f.sub(y, b))) == lambda {
                count += 1;
            }
        }
    }
    count
}

/// The circle through three distinct affine points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CircleHit {
    pub id: usize,
    pub kind: CircleKind,
}

type Point = (FieldElement, FieldElement);

/// Solves for the unique circle through three distinct affine points: the
/// line through them when collinear, otherwise the finite circle whose
/// center solves the 2×2 system obtained by subtracting the circle
/// equations pairwise.
pub fn unique_circle_through(m: &InversivePlaneModel, p1: Point, p2: Point, p3: Point) -> Result<CircleHit> {
    let f = &m.field;
    if p1 == p2 || p2 == p3 || p1 == p3 {
        return Err(Error::BadParams("points must be distinct".into()));
    }
    let (x1, x2) = p1;
    let (y1, y2) = p2;
    let (z1, z2) = p3;
    // collinear iff (p2 - p1) x (p3 - p1) = 0
    let cross = f.sub(
        f.mul(f.sub(y1, x1), f.sub(z2, x2)),
        f.mul(f.sub(y2, x2), f.sub(z1, x1)),
    );
    let kind = if cross.is_zero() {
        if x1 == y1 {
            CircleKind::VerticalLine { mu: x1.index() }
        } else {
            let slope = f.div(f.sub(y2, x2), f.sub(y1, x1))?;
            let intercept = f.sub(x2, f.mul(slope, x1));
            CircleKind::SlopeLine {
                a1: slope.index(),
                a2: intercept.index(),
            }
        }
    } else {
        let two = f.from_int(2);
        let m11 = f.mul(two, f.sub(x1, y1));
        let m12 = f.mul(two, f.sub(x2, y2));
        let m21 = f.mul(two, f.sub(y1, z1));
        let m22 = f.mul(two, f.sub(y2, z2));
        let norm = |u: FieldElement, w: FieldElement| f.add(f.square(u), f.square(w));
        let c1 = f.sub(norm(x1, x2), norm(y1, y2));
        let c2 = f.sub(norm(y1, y2), norm(z1, z2));
        let det = f.sub(f.mul(m11, m22), f.mul(m12, m21));
        let a1 = f.div(f.sub(f.mul(c1, m22), f.mul(m12, c2)), det)?;
        let a2 = f.div(f.sub(f.mul(m11, c2), f.mul(c1, m21)), det)?;
        let lambda = norm(f.sub(x1, a1), f.sub(x2, a2));
        if lambda.is_zero() {
            return Err(Error::ConstructionFailed(
                "three non-collinear points gave radius zero".into(),
            ));
        }
        debug_assert_eq!(norm(f.sub(y1, a1), f.sub(y2, a2)), lambda);
        debug_assert_eq!(norm(f.sub(z1, a1), f.sub(z2, a2)), lambda);
        CircleKind::Finite {
            a1: a1.index(),
            a2: a2.index(),
            lambda: lambda.index(),
        }
    };
    Ok(CircleHit {
        id: m.circle_id(kind),
        kind,
    })
}

#[derive(Clone, Debug)]
pub struct AxiomConfig {
    /// Axiom 3 is checked over every (circle, point on it, point off it)
    /// up to this order, and sampled above it.
    pub exhaustive_max_q: u32,
    pub samples: u64,
    pub seed: u64,
    pub census: CensusConfig,
}

impl Default for AxiomConfig {
    fn default() -> Self {
        AxiomConfig {
            exhaustive_max_q: 7,
            samples: 100_000,
            seed: 0x1a2b_3c4d,
            census: CensusConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Axiom3Failure {
    pub circle: usize,
    pub on_circle: u32,
    pub off_circle: u32,
    /// Number of circles through both points touching `circle` only there.
    pub tangent_circles: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counterexamples {
    pub axiom1: Option<Vec<u32>>,
    pub axiom3: Option<Axiom3Failure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub axiom1: bool,
    pub axiom2: bool,
    pub axiom3: bool,
    pub counterexample: Counterexamples,
    /// Four points on no common circle, when one exists.
    pub axiom2_witness: Option<[u32; 4]>,
    pub sampled: bool,
    pub seed: u64,
    pub axiom3_checks: u64,
    #[serde(skip)]
    pub census: CoverageReport,
}

impl AxiomReport {
    pub fn all_hold(&self) -> bool {
        self.axiom1 && self.axiom2 && self.axiom3
    }
}

pub fn verify_axioms(m: &InversivePlaneModel, cfg: &AxiomConfig) -> Result<AxiomReport> {
    verify_circle_axioms(&m.circles, m.q(), cfg)
}

/// Checks the three inversive-plane axioms on an arbitrary block family
/// over `q² + 1` points.
pub fn verify_circle_axioms(d: &Design, q: u32, cfg: &AxiomConfig) -> Result<AxiomReport> {
    let d3;
    let d = if d.r() == 3 {
        d
    } else {
        d3 = d.with_uniformity(3)?;
        &d3
    };
    let census = verify_coverage_with(d, Mode::Partition, &cfg.census)?;
    let n = d.n();
    let words = n.div_ceil(64);
    let bits: Vec<Vec<u64>> = d
        .blocks()
        .iter()
        .map(|b| {
            let mut w = vec![0u64; words];
            for &x in b {
                w[x as usize / 64] |= 1 << (x % 64);
            }
            w
        })
        .collect();
    let has = |c: usize, x: u32| bits[c][x as usize / 64] >> (x % 64) & 1 == 1;
    let mut through: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (c, b) in d.blocks().iter().enumerate() {
        for &x in b {
            through[x as usize].push(c);
        }
    }

    // axiom 2: first 4-set in lex order on no common circle
    let mut axiom2_witness = None;
    if n >= 4 {
        let mut s = [0u32, 1, 2, 3];
        loop {
            let common = through[s[0] as usize]
                .iter()
                .any(|&c| has(c, s[1]) && has(c, s[2]) && has(c, s[3]));
            if !common {
                axiom2_witness = Some(s);
                break;
            }
            if !next_lex_subset(&mut s, n as u32) {
                break;
            }
        }
    }

    let tangents = |c: usize, u: u32, w: u32| -> usize {
        through[u as usize]
            .iter()
            .filter(|&&e| e != c && has(e, w))
            .filter(|&&e| {
                bits[c]
                    .iter()
                    .zip(&bits[e])
                    .map(|(a, b)| (a & b).count_ones())
                    .sum::<u32>()
                    == 1
            })
            .count()
    };

    let sampled = q > cfg.exhaustive_max_q;
    let mut checks = 0u64;
    let mut failure = None;
    if !sampled {
        'outer: for (c, b) in d.blocks().iter().enumerate() {
            for &u in b {
                for w in 0..n as u32 {
                    if has(c, w) {
                        continue;
                    }
                    checks += 1;
                    let t = tangents(c, u, w);
                    if t != 1 {
                        failure = Some(Axiom3Failure {
                            circle: c,
                            on_circle: u,
                            off_circle: w,
                            tangent_circles: t,
                        });
                        break 'outer;
                    }
                }
            }
        }
    } else if !d.is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        while checks < cfg.samples {
            let c = rng.gen_range(0..d.len());
            let b = &d.blocks()[c];
            if b.len() >= n {
                continue;
            }
            let u = b[rng.gen_range(0..b.len())];
            let w = loop {
                let w = rng.gen_range(0..n as u32);
                if !has(c, w) {
                    break w;
                }
            };
            checks += 1;
            let t = tangents(c, u, w);
            if t != 1 {
                failure = Some(Axiom3Failure {
                    circle: c,
                    on_circle: u,
                    off_circle: w,
                    tangent_circles: t,
                });
                break;
            }
        }
    }

    Ok(AxiomReport {
        axiom1: census.is_partition,
        axiom2: axiom2_witness.is_some(),
        axiom3: failure.is_none(),
        counterexample: Counterexamples {
            axiom1: census.violation_samples.first().cloned(),
            axiom3: failure,
        },
        axiom2_witness,
        sampled,
        seed: cfg.seed,
        axiom3_checks: checks,
        census,
    })
}
