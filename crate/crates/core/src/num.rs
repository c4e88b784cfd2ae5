//! Scalar helpers. Lattice coordinates are `i64`; anything that goes through
//! elimination is done in `BigInt`/`BigRational` and converted back checked.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type IVec = Vec<i64>;
pub type Rat = BigRational;
pub type RVec = Vec<Rat>;

pub fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

pub fn rat(x: i64) -> Rat {
    Rat::from_integer(BigInt::from(x))
}

pub fn ratio(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64()
        .ok_or_else(|| Error::Overflow(format!("{x} does not fit in i64")))
}

pub fn vec_to_i64(v: &[BigInt]) -> Result<IVec> {
    v.iter().map(to_i64).collect()
}

pub fn to_rvec(v: &[i64]) -> RVec {
    v.iter().map(|&x| rat(x)).collect()
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    debug_assert_eq!(a.len(), b.len());
    let s: i128 = a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum();
    s as i64
}

pub fn dot128(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

pub fn dot_rat(a: &[i64], p: &[Rat]) -> Rat {
    let mut s = Rat::zero();
    for (&x, y) in a.iter().zip(p) {
        if x != 0 {
            s += y * rat(x);
        }
    }
    s
}

pub fn add(a: &[i64], b: &[i64]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[i64], b: &[i64]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[i64], k: i64) -> IVec {
    a.iter().map(|x| x * k).collect()
}

pub fn neg(a: &[i64]) -> IVec {
    a.iter().map(|x| -x).collect()
}

pub fn is_zero(a: &[i64]) -> bool {
    a.iter().all(|&x| x == 0)
}

pub fn gcd_slice(a: &[i64]) -> i64 {
    a.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Divides by the gcd of the entries; the zero vector is returned unchanged.
pub fn primitive(a: &[i64]) -> IVec {
    let g = gcd_slice(a);
    if g <= 1 {
        return a.to_vec();
    }
    a.iter().map(|x| x / g).collect()
}

pub fn primitive128(a: &[i128]) -> Vec<i128> {
    let g = a.iter().fold(0i128, |g, &x| g.gcd(&x));
    if g <= 1 {
        return a.to_vec();
    }
    a.iter().map(|x| x / g).collect()
}

/// Smallest positive integer multiple of a rational vector that is integral,
/// divided by its content.
pub fn primitive_of_rat(v: &[Rat]) -> Result<IVec> {
    let mut l = BigInt::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rat::from_integer(l.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return vec_to_i64(&ints);
    }
    let out: Vec<BigInt> = ints.iter().map(|x| x / &g).collect();
    vec_to_i64(&out)
}

/// Clears denominators: returns (integer vector, positive common denominator).
pub fn clear_denominators(v: &[Rat]) -> Result<(IVec, i64)> {
    let mut l = BigInt::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rat::from_integer(l.clone())).to_integer()).collect();
    Ok((vec_to_i64(&ints)?, to_i64(&l)?))
}

pub fn rat_is_integer(x: &Rat) -> bool {
    x.denom().is_one()
}

/// Formats a rational as `p` or `p/q`.
pub fn fmt_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        Some(Rat::new(p, q))
    } else {
        let p: BigInt = s.parse().ok()?;
        Some(Rat::from_integer(p))
    }
}

pub fn sign_rat(x: &Rat) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Matrix–vector product for row-major `m` (rows of length v.len()).
pub fn mat_vec(m: &[IVec], v: &[i64]) -> IVec {
    m.iter().map(|row| dot(row, v)).collect()
}

pub fn mat_rvec(m: &[IVec], v: &[Rat]) -> RVec {
    m.iter().map(|row| dot_rat(row, v)).collect()
}

pub fn transpose(m: &[IVec], ncols: usize) -> Vec<IVec> {
    (0..ncols).map(|j| m.iter().map(|r| r[j]).collect()).collect()
}

/// Row-major product a (p×q) · b (q×r).
pub fn mat_mul(a: &[IVec], b: &[IVec], r: usize) -> Vec<IVec> {
    a.iter()
        .map(|row| {
            (0..r)
                .map(|j| row.iter().zip(b).map(|(x, brow)| x * brow[j]).sum())
                .collect()
        })
        .collect()
}

pub fn identity(n: usize) -> Vec<IVec> {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn abs_big(x: &BigInt) -> BigInt {
    x.abs()
}
