//! Lower bounds for clique partition numbers, all in exact arithmetic.
//!
//! * [`phi`]: the ratio bound `C(n, r) / C(q + r - 1, r)` with
//!   `n = q² + q + r - 1`, where `q` is generally a quadratic irrational.
//! * [`theorem2_bound`]: the one-step recursion `x·C(nL/x, r) <= C(n, r)`
//!   for a certified lower bound `L` on `cp(n - 1, r - 1)`.
//! * [`qr_sieve`]: the divisibility conditions any equality case must meet.
//!
//! Generalized binomials `C(x, r)` at non-integer `x` are the falling
//! factorial `x(x - 1)...(x - r + 1) / r!`.

mod surd;

pub use surd::QuadraticSurd;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

pub fn big_binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn factorial(r: u64) -> BigInt {
    (1..=r).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `C(x, r)` as a surd.
pub fn generalized_binomial(x: &QuadraticSurd, r: u64) -> QuadraticSurd {
    let mut acc = QuadraticSurd::from_int(1, x.d());
    for i in 0..r {
        let shift = QuadraticSurd::from_int(i as i64, x.d());
        acc = &acc * &(x - &shift);
    }
    acc.scale(&BigRational::new(BigInt::one(), factorial(r)))
}

#[derive(Clone, Debug, Serialize)]
pub struct PhiResult {
    pub n: u64,
    pub r: u64,
    /// Positive root of `q² + q + r - 1 = n`, i.e. `(-1 + √d)/2` with
    /// `d = 4(n - r + 1) + 1`.
    pub q: QuadraticSurd,
    pub phi: QuadraticSurd,
    #[serde(serialize_with = "ser_display")]
    pub phi_ceiling: BigInt,
    pub q_is_integer: bool,
    pub certified: bool,
}

fn ser_display<T: std::fmt::Display, S: serde::Serializer>(
    v: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// `q` for the pair `(n, r)`.
pub fn q_of(n: u64, r: u64) -> QuadraticSurd {
    let d = BigInt::from(4 * (n - r + 1) + 1);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    QuadraticSurd::new(-half.clone(), half, d)
}

pub fn phi(n: u64, r: u64) -> Result<PhiResult> {
    if r < 2 || n <= r {
        return Err(Error::BadParams(format!("need n > r >= 2, got n = {n}, r = {r}")));
    }
    let q = q_of(n, r);
    let top = QuadraticSurd::rational(BigRational::from_integer(big_binomial(n, r)), q.d().clone());
    let shifted = &q + &QuadraticSurd::from_int(r as i64 - 1, q.d());
    let phi = top.div(&generalized_binomial(&shifted, r))?;
    Ok(PhiResult {
        n,
        r,
        q_is_integer: q.is_rational() && q.a().is_integer(),
        phi_ceiling: phi.ceil(),
        q,
        phi,
        certified: true,
    })
}

/// Checks `φ(n, r)·(q + r - 1) = n·φ(n - 1, r - 1)` exactly.
pub fn identity_check_phi(n: u64, r: u64) -> Result<bool> {
    if r < 3 || n <= r {
        return Err(Error::BadParams(format!("need n > r >= 3, got n = {n}, r = {r}")));
    }
    let lhs_phi = phi(n, r)?;
    let rhs_phi = phi(n - 1, r - 1)?;
    let lhs = &lhs_phi.phi * &(&lhs_phi.q + &QuadraticSurd::from_int(r as i64 - 1, lhs_phi.q.d()));
    let rhs = rhs_phi.phi.scale(&BigRational::from_integer(n.into()));
    Ok(lhs == rhs)
}

/// `x·C(nL/x, r) <= C(n, r)`, cleared of denominators:
/// `∏_{i<r} (nL - i·x) <= r!·C(n, r)·x^(r-1)`.
fn theorem2_holds(n: u64, r: u64, l: u64, x: u64, rhs_const: &BigInt) -> bool {
    let nl = BigInt::from(n) * BigInt::from(l);
    let x = BigInt::from(x);
    let lhs = (0..r).fold(BigInt::one(), |acc, i| acc * (&nl - BigInt::from(i) * &x));
    lhs <= rhs_const * num_traits::pow(x, (r - 1) as usize)
}

/// Least `x >= 1` with `x·C(nL/x, r) <= C(n, r)`: a certified lower bound on
/// `cp(n, r)` whenever `L <= cp(n - 1, r - 1)`.
///
/// The left side is nonincreasing in `x` while `nL/x >= r - 1`, which is
/// where the answer lies, so the search runs over `[1, ceil(nL/(r - 1))]`.
pub fn theorem2_bound(n: u64, r: u64, l: u64) -> Result<u64> {
    if r < 2 || n <= r {
        return Err(Error::BadParams(format!("need n > r >= 2, got n = {n}, r = {r}")));
    }
    if l == 0 {
        return Err(Error::BadParams("L must be at least 1".into()));
    }
    let rhs_const = factorial(r) * big_binomial(n, r);
    let mut hi = (n * l).div_ceil(r - 1);
    while !theorem2_holds(n, r, l, hi, &rhs_const) {
        hi += 1;
    }
    let mut lo = 1;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if theorem2_holds(n, r, l, mid, &rhs_const) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(lo)
}

/// The real root `x*` of `x·C(nL/x, 3) = C(n, 3)`; the integer bound for
/// `r = 3` is `ceil(x*)`.
pub fn theorem2_threshold_r3(n: u64, l: u64) -> Result<QuadraticSurd> {
    if n <= 3 || l == 0 {
        return Err(Error::BadParams(format!("need n > 3 and L >= 1, got n = {n}, L = {l}")));
    }
    // with y = nL/x: (y - 1)(y - 2) = c := 6·C(n, 3)/(nL), y = (3 + √(1 + 4c))/2
    let nl = BigInt::from(n) * BigInt::from(l);
    let c = BigRational::new(BigInt::from(6) * big_binomial(n, 3), nl.clone());
    let disc = BigRational::one() + BigRational::from_integer(4.into()) * c;
    // √(P/Q) = √(P·Q)/Q
    let (p, q) = (disc.numer().clone(), disc.denom().clone());
    let root = QuadraticSurd::root(&(&p * &q)).scale(&BigRational::new(BigInt::one(), q));
    let y = (&root + &QuadraticSurd::from_int(3, root.d()))
        .scale(&BigRational::new(BigInt::one(), BigInt::from(2)));
    QuadraticSurd::rational(BigRational::from_integer(nl), root.d().clone()).div(&y)
}

/// The `n = 21` argument: `cp(20, 2) >= 21` gives `x >= (441/676)(√32361 - 63)`,
/// which exceeds 76, so `cp(21, 3) >= 77`; the Steiner system S(22, 6, 3)
/// gives the matching upper bound.
#[derive(Clone, Debug, Serialize)]
pub struct Cp21Certificate {
    pub threshold: QuadraticSurd,
    pub matches_closed_form: bool,
    pub exceeds_76: bool,
    pub lower_bound: u64,
    pub upper_bound: u64,
}

pub const CP_20_2_LOWER: u64 = 21;

pub fn cp21_3_certificate() -> Result<Cp21Certificate> {
    let threshold = theorem2_threshold_r3(21, CP_20_2_LOWER)?;
    let closed = QuadraticSurd::new(
        BigRational::new(BigInt::from(-63 * 441), BigInt::from(676)),
        BigRational::new(BigInt::from(441), BigInt::from(676)),
        BigInt::from(32361),
    );
    let seventy_six = QuadraticSurd::from_int(76, threshold.d());
    Ok(Cp21Certificate {
        matches_closed_form: threshold == closed,
        exceeds_76: threshold > seventy_six,
        lower_bound: theorem2_bound(21, 3, CP_20_2_LOWER)?,
        upper_bound: 77,
        threshold,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisibilityProfile {
    pub r: u64,
    pub q_max: u64,
    pub admissible: Vec<u64>,
}

/// Whether `q` meets `∏_{j=1}^{r-i} (q + r - i - j) | ∏_{j=1}^{r-i} (q² + q + r - i - j)`
/// for every `i` in `0..r`.
pub fn divisibility_holds(r: u64, q: u64) -> bool {
    let q = BigInt::from(q);
    let qq = &q * &q + &q;
    (0..r).all(|i| {
        let (mut lhs, mut rhs) = (BigInt::one(), BigInt::one());
        for j in 1..=r - i {
            let k = BigInt::from(r - i - j);
            lhs *= &q + &k;
            rhs *= &qq + &k;
        }
        rhs.is_multiple_of(&lhs)
    })
}

pub fn qr_sieve(r: u64, q_max: u64) -> Result<DivisibilityProfile> {
    if r < 3 || q_max < 1 {
        return Err(Error::BadParams(format!("need r >= 3 and q_max >= 1, got r = {r}, q_max = {q_max}")));
    }
    Ok(DivisibilityProfile {
        r,
        q_max,
        admissible: (1..=q_max).filter(|&q| divisibility_holds(r, q)).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChebyshevCheck {
    pub lhs: u128,
    /// `(Σf)(Σg)/p` as `"num/den"`.
    #[serde(serialize_with = "ser_display")]
    pub rhs: num_rational::Ratio<u128>,
    pub holds: bool,
    pub equality: bool,
}

/// `Σ f(i)g(i) >= (1/p)(Σ f)(Σ g)` for nondecreasing positive sequences.
pub fn chebyshev_sum_check(f: &[u64], g: &[u64]) -> Result<ChebyshevCheck> {
    if f.len() != g.len() || f.len() < 2 {
        return Err(Error::BadParams(format!(
            "need two sequences of equal length >= 2, got {} and {}",
            f.len(),
            g.len()
        )));
    }
    if f.iter().chain(g).any(|&x| x == 0) {
        return Err(Error::BadParams("values must be positive".into()));
    }
    if f.windows(2).any(|w| w[0] > w[1]) || g.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::NotMonotone);
    }
    let p = f.len() as u128;
    let lhs: u128 = f.iter().zip(g).map(|(&a, &b)| a as u128 * b as u128).sum();
    let sf: u128 = f.iter().map(|&a| a as u128).sum();
    let sg: u128 = g.iter().map(|&a| a as u128).sum();
    let prod = sf * sg;
    Ok(ChebyshevCheck {
        lhs,
        rhs: num_rational::Ratio::new(prod, p),
        holds: lhs * p >= prod,
        equality: lhs * p == prod,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct KnownCp {
    pub n: u64,
    pub r: u64,
    pub cp: u64,
    pub source: &'static str,
}

const KNOWN: [KnownCp; 8] = [
    KnownCp { n: 4, r: 3, cp: 4, source: "complete: C([4],3)" },
    KnownCp { n: 8, r: 3, cp: 14, source: "Steiner S(8,4,3)" },
    KnownCp { n: 22, r: 3, cp: 77, source: "Steiner S(22,6,3)" },
    KnownCp { n: 5, r: 4, cp: 5, source: "complete: C([5],4)" },
    KnownCp { n: 23, r: 4, cp: 253, source: "Steiner S(23,7,4)" },
    KnownCp { n: 6, r: 5, cp: 6, source: "complete: C([6],5)" },
    KnownCp { n: 24, r: 5, cp: 759, source: "Steiner S(24,8,5)" },
    KnownCp { n: 21, r: 3, cp: 77, source: "one-step bound from cp(20,2) >= 21, S(22,6,3) restricted" },
];

pub fn known_cp_table() -> Vec<KnownCp> {
    KNOWN.to_vec()
}

/// Known exact value, including `cp(n, 2) = n` for `n >= 3`.
pub fn known_cp(n: u64, r: u64) -> Option<u64> {
    if r == 2 && n >= 3 {
        return Some(n);
    }
    KNOWN.iter().find(|k| k.n == n && k.r == r).map(|k| k.cp)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PlaneExistence {
    Exists,
    DoesNotExist,
    Unknown,
}

/// Tabled existence of a projective plane of the given order.
pub fn projective_plane_exists(order: u64) -> PlaneExistence {
    match order {
        2 | 3 | 4 | 5 | 7 | 8 | 9 => PlaneExistence::Exists,
        10 => PlaneExistence::DoesNotExist,
        _ => PlaneExistence::Unknown,
    }
}

/// `phi_ceiling` as a `u64`, for callers that compare it with block counts.
pub fn phi_ceiling_u64(n: u64, r: u64) -> Result<u64> {
    phi(n, r)?
        .phi_ceiling
        .to_u64()
        .ok_or_else(|| Error::BadParams(format!("φ({n},{r}) does not fit in u64")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_examples() {
        let p = phi(8, 3).unwrap();
        assert!(p.q_is_integer);
        assert_eq!(p.phi_ceiling, BigInt::from(14));
        for n in [7u64, 13, 21, 31] {
            assert_eq!(phi_ceiling_u64(n, 2).unwrap(), n);
            assert!(phi(n, 2).unwrap().phi.is_rational());
        }
        for r in 2..=8 {
            assert_eq!(phi_ceiling_u64(r + 1, r).unwrap(), r + 1);
        }
        assert_eq!(phi_ceiling_u64(24, 5).unwrap(), 759);
        assert!(!phi(21, 3).unwrap().q_is_integer);
    }

    #[test]
    fn theorem2_examples() {
        assert_eq!(theorem2_bound(21, 3, 21).unwrap(), 77);
        let b = theorem2_bound(10, 3, 9).unwrap();
        assert!(b <= 30, "{b}");
        assert!(theorem2_bound(10, 3, 1).unwrap() >= 1);
    }

    #[test]
    fn cp21() {
        let c = cp21_3_certificate().unwrap();
        assert!(c.matches_closed_form);
        assert!(c.exceeds_76);
        assert_eq!(c.lower_bound, 77);
    }

    #[test]
    fn sieve() {
        assert_eq!(qr_sieve(3, 1000).unwrap().admissible, vec![1, 2, 4, 10]);
        assert_eq!(qr_sieve(4, 1000).unwrap().admissible, vec![1, 4]);
        assert_eq!(qr_sieve(5, 1000).unwrap().admissible, vec![1, 4]);
        assert_eq!(qr_sieve(6, 200).unwrap().admissible, vec![1]);
    }

    #[test]
    fn chebyshev() {
        let c = chebyshev_sum_check(&[1, 2, 3], &[1, 2, 3]).unwrap();
        assert_eq!(c.lhs, 14);
        assert_eq!(c.rhs, num_rational::Ratio::from_integer(12));
        assert!(c.holds && !c.equality);
        assert!(chebyshev_sum_check(&[4, 4, 4], &[1, 5, 9]).unwrap().equality);
        assert!(matches!(chebyshev_sum_check(&[2, 1], &[1, 1]), Err(Error::NotMonotone)));
    }

    #[test]
    fn identity() {
        for (n, r) in [(8, 3), (22, 3), (21, 3), (24, 5), (30, 4)] {
            assert!(identity_check_phi(n, r).unwrap(), "({n},{r})");
        }
    }

    #[test]
    fn table() {
        assert_eq!(known_cp(24, 5), Some(759));
        assert_eq!(known_cp(21, 3), Some(77));
        assert_eq!(known_cp(17, 2), Some(17));
        assert_eq!(known_cp(9, 3), None);
        assert_eq!(projective_plane_exists(10), PlaneExistence::DoesNotExist);
        assert_eq!(projective_plane_exists(12), PlaneExistence::Unknown);
    }
}
