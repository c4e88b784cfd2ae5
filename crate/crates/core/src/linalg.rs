//! Exact integer linear algebra on `BigInt` matrices: rank, echelon/Hermite
//! forms, integer kernels, Smith form with transforms, rational solves.

use crate::error::Result;
use crate::num::{to_rvec, vec_to_i64, IVec, RVec, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type BMat = Vec<Vec<BigInt>>;

pub fn to_bmat(m: &[IVec]) -> BMat {
    m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn from_bmat(m: &BMat) -> Result<Vec<IVec>> {
    m.iter().map(|r| vec_to_i64(r)).collect()
}

pub fn bidentity(n: usize) -> BMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn row_gcd_reduce(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in row.iter() {
        g = g.gcd(x);
    }
    if g > BigInt::one() {
        for x in row.iter_mut() {
            *x /= &g;
        }
    }
}

pub fn rank_big(m: &BMat) -> usize {
    let mut a = m.clone();
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        for i in r + 1..rows {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            let pv = a[r][c].clone();
            for j in c..cols {
                let v = &a[i][j] * &pv - &a[r][j] * &f;
                a[i][j] = v;
            }
            row_gcd_reduce(&mut a[i]);
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

pub fn rank(rows: &[IVec]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    rank_big(&to_bmat(rows))
}

/// Unimodular row reduction of `a` driven by its first `ncols` columns.
/// Afterwards those columns are in Hermite normal form (positive pivots,
/// entries above a pivot reduced into [0, pivot)). Returns the rank.
pub fn echelon(a: &mut BMat, ncols: usize) -> usize {
    let rows = a.len();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows {
            break;
        }
        loop {
            // row with smallest nonzero |entry| in column c among rows >= r
            let mut best: Option<usize> = None;
            for i in r..rows {
                if !a[i][c].is_zero()
                    && best.map_or(true, |b| a[i][c].abs() < a[b][c].abs())
                {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            a.swap(r, b);
            let mut done = true;
            for i in r + 1..rows {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[r][c]);
                let (head, tail) = a.split_at_mut(i);
                let pr = &head[r];
                for (x, y) in tail[0].iter_mut().zip(pr.iter()) {
                    *x -= &q * y;
                }
                if !a[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[r][c].is_zero() {
            continue;
        }
        if a[r][c].is_negative() {
            for x in a[r].iter_mut() {
                *x = -x.clone();
            }
        }
        for k in 0..r {
            if a[k][c].is_zero() {
                continue;
            }
            let q = a[k][c].div_floor(&a[r][c]);
            let pr = a[r].clone();
            for (x, y) in a[k].iter_mut().zip(pr.iter()) {
                *x -= &q * y;
            }
        }
        r += 1;
    }
    r
}

/// Canonical (Hermite) basis of the lattice spanned by `rows` in Z^n.
pub fn hnf_basis(rows: &[IVec], n: usize) -> Result<Vec<IVec>> {
    if rows.is_empty() {
        return Ok(vec![]);
    }
    let mut a = to_bmat(rows);
    let r = echelon(&mut a, n);
    a.truncate(r);
    from_bmat(&a)
}

/// Z-basis of {x in Z^n : rows · x = 0}, in Hermite form.
pub fn int_kernel(rows: &[IVec], n: usize) -> Result<Vec<IVec>> {
    let m = rows.len();
    // [A^T | I]
    let mut aug: BMat = (0..n)
        .map(|j| {
            let mut r: Vec<BigInt> = rows.iter().map(|row| BigInt::from(row[j])).collect();
            r.extend((0..n).map(|k| if k == j { BigInt::one() } else { BigInt::zero() }));
            r
        })
        .collect();
    let rk = echelon(&mut aug, m);
    let ker: Vec<IVec> = aug[rk..]
        .iter()
        .map(|r| vec_to_i64(&r[m..]))
        .collect::<Result<_>>()?;
    hnf_basis(&ker, n)
}

/// Smith form with transforms: returns (U, D, V), U·M·V = D, U and V
/// unimodular, D diagonal with nonnegative d_1 | d_2 | ... .
pub fn smith(m: &BMat, nrows: usize, ncols: usize) -> (BMat, BMat, BMat) {
    let mut d = m.clone();
    let mut u = bidentity(nrows);
    let mut v = bidentity(ncols);
    let lim = nrows.min(ncols);
    let mut t = 0;
    while t < lim {
        // pivot: smallest nonzero |entry| in the lower-right block
        let mut piv: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if !d[i][j].is_zero()
                    && piv.map_or(true, |(a, b)| d[i][j].abs() < d[a][b].abs())
                {
                    piv = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = piv else { break };
        d.swap(t, pi);
        u.swap(t, pi);
        for row in d.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..nrows {
            if d[i][t].is_zero() {
                continue;
            }
            let q = d[i][t].div_floor(&d[t][t]);
            let (dt, ut) = (d[t].clone(), u[t].clone());
            for (x, y) in d[i].iter_mut().zip(dt.iter()) {
                *x -= &q * y;
            }
            for (x, y) in u[i].iter_mut().zip(ut.iter()) {
                *x -= &q * y;
            }
            if !d[i][t].is_zero() {
                clean = false;
            }
        }
        for j in t + 1..ncols {
            if d[t][j].is_zero() {
                continue;
            }
            let q = d[t][j].div_floor(&d[t][t]);
            for row in d.iter_mut() {
                let y = row[t].clone();
                row[j] -= &q * y;
            }
            for row in v.iter_mut() {
                let y = row[t].clone();
                row[j] -= &q * y;
            }
            if !d[t][j].is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // divisibility: fold a non-divisible entry into row t and redo
        let mut bad: Option<usize> = None;
        'outer: for i in t + 1..nrows {
            for j in t + 1..ncols {
                if !(&d[i][j] % &d[t][t]).is_zero() {
                    bad = Some(i);
                    break 'outer;
                }
            }
        }
        if let Some(i) = bad {
            let (di, ui) = (d[i].clone(), u[i].clone());
            for (x, y) in d[t].iter_mut().zip(di.iter()) {
                *x += y;
            }
            for (x, y) in u[t].iter_mut().zip(ui.iter()) {
                *x += y;
            }
            continue;
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
        t += 1;
    }
    (u, d, v)
}

/// Nonzero elementary divisors.
pub fn elementary_divisors(m: &[IVec], ncols: usize) -> Vec<BigInt> {
    let nrows = m.len();
    if nrows == 0 || ncols == 0 {
        return vec![];
    }
    let (_, d, _) = smith(&to_bmat(m), nrows, ncols);
    (0..nrows.min(ncols))
        .map(|i| d[i][i].clone())
        .filter(|x| !x.is_zero())
        .collect()
}

/// Bareiss determinant.
pub fn det(m: &[IVec]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = to_bmat(m);
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// One rational solution of A x = b (free variables set to zero), if any.
pub fn solve_rat(a: &[RVec], b: &[Rat], ncols: usize) -> Option<RVec> {
    let rows = a.len();
    let mut m: Vec<RVec> = a
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut r = r.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let mut pivots = vec![];
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = Rat::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pr = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(pr.iter()) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if m[r..].iter().any(|row| !row[ncols].is_zero()) {
        return None;
    }
    let mut x = vec![Rat::zero(); ncols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][ncols].clone();
    }
    Some(x)
}

/// Solves A x = b for integer A given row-major.
pub fn solve_int_rat(a: &[IVec], b: &[Rat], ncols: usize) -> Option<RVec> {
    let ar: Vec<RVec> = a.iter().map(|r| to_rvec(r)).collect();
    solve_rat(&ar, b, ncols)
}

/// Expresses `v` in the basis given by the columns of `basis_cols`
/// (n × k, full column rank). Returns None if `v` is outside the span.
pub fn coords_in_basis(basis_cols: &[IVec], v: &[Rat], k: usize) -> Option<RVec> {
    solve_int_rat(basis_cols, v, k)
}

/// Inverse of a square integer matrix over Q.
pub fn inverse_rat(m: &[IVec]) -> Option<Vec<RVec>> {
    let n = m.len();
    let cols: Vec<RVec> = (0..n)
        .map(|j| {
            let e: RVec = (0..n).map(|i| if i == j { Rat::one() } else { Rat::zero() }).collect();
            solve_int_rat(m, &e, n)
        })
        .collect::<Option<_>>()?;
    // check it is a true inverse (full rank)
    if rank(m) < n {
        return None;
    }
    Some((0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect())
}

pub fn gcd_big(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}
