//! Brute-force oracles and random instance generators shared by the core
//! property tests and the acceptance target.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::Rng;
use std::collections::{BTreeSet, HashSet, VecDeque};
use std::sync::Arc;
use troplift_core::complex::{
    lift_through_subdivision, pullback_subdivision, pushforward_subdivision, validate_subdivision, ConeComplex, PLMap,
    Subdivision,
};
use troplift_core::lattice::{integrality_sublattice, smith_torsion};
use troplift_core::monoid::{mu_from_images, prestable_monoid, puncturing_monoid_ql, FineMonoid};
use troplift_core::num::{dot, gcd_slice, primitive, IVec, RVec, Rat};
use troplift_core::{LatticeCone, LatticeMap};

pub fn box_points(n: usize, lo: i64, hi: i64) -> Vec<IVec> {
    let mut pts = vec![vec![]];
    for _ in 0..n {
        pts = pts
            .into_iter()
            .flat_map(|p: IVec| {
                (lo..=hi).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    pts
}

pub fn random_vec<R: Rng>(rng: &mut R, n: usize, lo: i64, hi: i64) -> IVec {
    (0..n).map(|_| rng.gen_range(lo..=hi)).collect()
}

/// Random pointed cone: ambient ≤ 3, up to 4 generators, entries in [-5, 5].
pub fn random_pointed_cone<R: Rng>(rng: &mut R) -> LatticeCone {
    loop {
        let n = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=4);
        let gens: Vec<IVec> = (0..k).map(|_| random_vec(rng, n, -5, 5)).filter(|g| g.iter().any(|&x| x != 0)).collect();
        if gens.is_empty() {
            continue;
        }
        let c = LatticeCone::from_generators(n, &gens).unwrap();
        if c.is_pointed() {
            return c;
        }
    }
}

/// Irreducible lattice points of a pointed cone, by enumeration: every
/// Hilbert basis element lies in a fundamental parallelepiped, so its
/// weight is at most the sum of the ray weights.
pub fn hilbert_brute(c: &LatticeCone) -> Vec<IVec> {
    let n = c.ambient();
    let mut w = vec![0i64; n];
    for f in c.facets() {
        for (a, b) in w.iter_mut().zip(f) {
            *a += b;
        }
    }
    let rays = c.rays();
    let wmax: i64 = rays.iter().map(|r| dot(&w, r)).sum();
    let bound: Vec<i64> = (0..n).map(|j| rays.iter().map(|r| r[j].abs()).sum()).collect();
    let mut pts: Vec<(i64, IVec)> = vec![];
    let mut cur = vec![vec![]];
    for b in &bound {
        cur = cur
            .into_iter()
            .flat_map(|p: IVec| {
                (-*b..=*b).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    for p in cur {
        let wp = dot(&w, &p);
        if wp > 0 && wp <= wmax && c.contains_int(&p, false) {
            pts.push((wp, p));
        }
    }
    pts.sort();
    let mut hb: Vec<IVec> = vec![];
    for (_, p) in pts {
        let reducible = hb.iter().any(|h| {
            let d: IVec = p.iter().zip(h).map(|(a, b)| a - b).collect();
            c.contains_int(&d, false)
        });
        if !reducible {
            hb.push(p);
        }
    }
    hb.sort();
    hb
}

fn det_i128(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0];
    }
    let mut s = 0;
    for j in 0..n {
        if m[0][j] == 0 {
            continue;
        }
        let minor: Vec<Vec<i128>> = m[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| *x).collect()).collect();
        let t = m[0][j] * det_i128(&minor);
        s += if j % 2 == 0 { t } else { -t };
    }
    s
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Torsion of Z^m / (column span), as the gcd of the maximal nonvanishing
/// minors.
pub fn torsion_by_minors(rows: &[IVec], ncols: usize) -> BigInt {
    let m = rows.len();
    for r in (1..=m.min(ncols)).rev() {
        let mut g: i128 = 0;
        for rs in subsets(m, r) {
            for cs in subsets(ncols, r) {
                let sub: Vec<Vec<i128>> = rs.iter().map(|&i| cs.iter().map(|&j| rows[i][j] as i128).collect()).collect();
                g = g.gcd(&det_i128(&sub));
            }
        }
        if g != 0 {
            return BigInt::from(g);
        }
    }
    BigInt::from(1)
}

/// Order of Z^m / (column span) by walking the image subgroup of (Z/D)^m,
/// D a nonzero maximal minor. Only for full row rank and small D^m.
pub fn quotient_order_by_enumeration(rows: &[IVec], ncols: usize) -> Option<BigInt> {
    let m = rows.len();
    let mut d: i128 = 0;
    for cs in subsets(ncols, m) {
        let sub: Vec<Vec<i128>> = rows.iter().map(|r| cs.iter().map(|&j| r[j] as i128).collect()).collect();
        let x = det_i128(&sub).abs();
        if x != 0 {
            d = x;
            break;
        }
    }
    if d == 0 || (d as f64).powi(m as i32) > 2e5 {
        return None;
    }
    let d = d as i64;
    let cols: Vec<IVec> = (0..ncols).map(|j| rows.iter().map(|r| r[j].rem_euclid(d)).collect()).collect();
    let zero = vec![0i64; m];
    let mut seen: HashSet<IVec> = HashSet::from([zero.clone()]);
    let mut q = VecDeque::from([zero]);
    while let Some(x) = q.pop_front() {
        for c in &cols {
            let y: IVec = x.iter().zip(c).map(|(a, b)| (a + b).rem_euclid(d)).collect();
            if seen.insert(y.clone()) {
                q.push_back(y);
            }
        }
    }
    Some(BigInt::from(d).pow(m as u32) / BigInt::from(seen.len()))
}

pub fn random_matrix<R: Rng>(rng: &mut R) -> (Vec<IVec>, usize) {
    let m = rng.gen_range(1..=4);
    let k = rng.gen_range(1..=4);
    ((0..m).map(|_| random_vec(rng, k, -5, 5)).collect(), k)
}

/// smith_torsion against both brute-force routes; Err carries a message.
pub fn check_torsion(rows: &[IVec], ncols: usize) -> Result<(), String> {
    let got = smith_torsion(&LatticeMap::new(rows.to_vec(), ncols, rows.len()).unwrap()).torsion_order;
    let minors = torsion_by_minors(rows, ncols);
    if got != minors {
        return Err(format!("{rows:?}: smith {got} vs minors {minors}"));
    }
    if let Some(e) = quotient_order_by_enumeration(rows, ncols) {
        if e != got {
            return Err(format!("{rows:?}: smith {got} vs enumeration {e}"));
        }
    }
    Ok(())
}

/// Index of {x in Λ : f(x) integral} in Λ by counting residues of a box of
/// side lcm(denominators) in lattice-basis coordinates.
pub fn sublattice_index_brute(c: &LatticeCone, fs: &[RVec]) -> BigInt {
    let basis = c.lattice_basis().unwrap();
    let pulled: Vec<Vec<Rat>> =
        fs.iter().map(|f| basis.iter().map(|b| troplift_core::num::dot_rat(b, f)).collect()).collect();
    let l = pulled.iter().flatten().fold(BigInt::from(1), |a, x| a.lcm(x.denom()));
    let l: i64 = l.try_into().unwrap();
    let mut residues: BTreeSet<Vec<Rat>> = BTreeSet::new();
    for x in box_points(basis.len(), 0, l - 1) {
        let r: Vec<Rat> = pulled
            .iter()
            .map(|f| {
                let v: Rat = f.iter().zip(&x).map(|(a, b)| a * Rat::from_integer((*b).into())).sum();
                &v - v.floor()
            })
            .collect();
        residues.insert(r);
    }
    BigInt::from(residues.len())
}

pub fn check_sublattice(c: &LatticeCone, fs: &[RVec]) -> Result<(), String> {
    let sub = integrality_sublattice(c, fs).map_err(|e| e.to_string())?;
    for b in &sub.basis {
        for f in fs {
            let v = troplift_core::num::dot_rat(b, f);
            if !v.is_integer() {
                return Err(format!("basis vector {b:?} not integral on {f:?}"));
            }
        }
    }
    let brute = sublattice_index_brute(c, fs);
    if sub.index != brute {
        return Err(format!("index {} vs brute force {brute}", sub.index));
    }
    Ok(())
}

/// A leg configuration for the puncturing check: γ′ ⊂ Z^r, breakpoints of
/// the chain before the leg, and the leg end (None when unbounded).
#[derive(Debug, Clone)]
pub struct LegConfig {
    pub gamma: LatticeCone,
    pub lengths: Vec<IVec>,
    pub end: Option<IVec>,
}

pub fn random_leg_config<R: Rng>(rng: &mut R) -> LegConfig {
    loop {
        let r = rng.gen_range(1..=3);
        let k = rng.gen_range(r..=r + 1);
        let gens: Vec<IVec> = (0..k).map(|_| random_vec(rng, r, -2, 3)).collect();
        let Ok(g) = LatticeCone::from_generators(r, &gens) else { continue };
        if g.dim() != r || !g.is_pointed() {
            continue;
        }
        let dual = g.dual().unwrap().hilbert_basis().unwrap();
        let pick = |rng: &mut R| -> IVec {
            loop {
                let mut v = vec![0i64; r];
                for d in &dual {
                    let c = rng.gen_range(0..=1);
                    for (a, b) in v.iter_mut().zip(d) {
                        *a += c * b;
                    }
                }
                if v.iter().any(|&x| x != 0) {
                    return v;
                }
            }
        };
        let chain = rng.gen_range(1..=3);
        let lengths: Vec<IVec> = (0..chain).map(|_| pick(rng)).collect();
        let end = if rng.gen_bool(0.7) { Some(pick(rng)) } else { None };
        return LegConfig { gamma: g, lengths, end };
    }
}

fn lift(v: &[i64], t: i64) -> IVec {
    let mut w = v.to_vec();
    w.push(t);
    w
}

/// Q_l and its prestable enlargement computed by the library, and the
/// dual-cone description of the truncated leg cone computed by hand.
/// Returns the box points where the two disagree.
pub fn check_puncturing(cfg: &LegConfig, radius: i64) -> Result<Vec<IVec>, String> {
    let r = cfg.gamma.ambient();
    let gd = FineMonoid::new(r, &cfg.gamma.dual().unwrap().hilbert_basis().unwrap()).map_err(|e| e.to_string())?;
    let mut rho = vec![0i64; r];
    let mut breaks = vec![rho.clone()];
    for l in &cfg.lengths {
        rho = rho.iter().zip(l).map(|(a, b)| a + b).collect();
        breaks.push(rho.clone());
    }
    let end: Option<IVec> = cfg.end.as_ref().map(|e| rho.iter().zip(e).map(|(a, b)| a + b).collect());
    // family cones of the edges and the leg over γ′, in Z^r ⊕ Z
    let mut pieces = vec![];
    let gf: Vec<IVec> = cfg.gamma.facets().iter().map(|f| lift(f, 0)).collect();
    let mut bounds: Vec<(IVec, Option<IVec>)> = breaks.windows(2).map(|w| (w[0].clone(), Some(w[1].clone()))).collect();
    bounds.push((rho.clone(), end.clone()));
    for (lo, hi) in &bounds {
        let mut ineq = gf.clone();
        ineq.push(lift(&lo.iter().map(|x| -x).collect::<IVec>(), 1));
        if let Some(h) = hi {
            ineq.push(lift(h, -1));
        }
        pieces.push(LatticeCone::from_inequalities(r + 1, &ineq, &[]).map_err(|e| e.to_string())?);
    }
    let mu = mu_from_images(r + 1, &pieces).map_err(|e| e.to_string())?;
    let mu_dual = mu.dual().unwrap().hilbert_basis().map_err(|e| e.to_string())?;
    let ql = puncturing_monoid_ql(&gd, &mu_dual, &LatticeMap::identity(r + 1)).map_err(|e| e.to_string())?;
    let pre = prestable_monoid(&ql, &rho).map_err(|e| e.to_string())?;
    // generators of {g ∈ γ′, ρ(g) ≤ t ≤ T(g)} from the rays of γ′
    let mut corners = vec![];
    for g in cfg.gamma.rays() {
        corners.push(lift(g, dot(&rho, g)));
        match &end {
            Some(e) => corners.push(lift(g, dot(e, g))),
            None => corners.push(lift(&vec![0; r], 1)),
        }
    }
    let pts = box_points(r + 1, -radius, radius);
    let lib = pre.contains_all(&pts);
    let mut bad = vec![];
    for (p, inside) in pts.iter().zip(lib) {
        let oracle = corners.iter().all(|c| dot(p, c) >= 0);
        if oracle != inside {
            bad.push(p.clone());
        }
    }
    Ok(bad)
}

/// Simplicial stellar subdivision of a list of maximal cones at `v`.
pub fn stellar(maximal: &[Vec<IVec>], v: &IVec) -> Vec<Vec<IVec>> {
    let n = v.len();
    let mut out = vec![];
    for rays in maximal {
        let c = LatticeCone::from_generators(n, rays).unwrap();
        if !c.contains_int(v, false) || rays.contains(v) {
            out.push(rays.clone());
            continue;
        }
        let cols: Vec<IVec> = (0..n).map(|i| rays.iter().map(|r| r[i]).collect()).collect();
        let lam = troplift_core::linalg::coords_in_basis(&cols, &troplift_core::num::to_rvec(v), rays.len()).unwrap();
        for (i, l) in lam.iter().enumerate() {
            if l.is_positive() {
                let mut r2 = rays.clone();
                r2[i] = v.clone();
                out.push(r2);
            }
        }
    }
    out
}

pub fn fan_of(n: usize, maximal: &[Vec<IVec>]) -> Arc<ConeComplex> {
    let cones: Vec<LatticeCone> = maximal.iter().map(|r| LatticeCone::from_generators(n, r).unwrap()).collect();
    Arc::new(ConeComplex::fan(n, &cones).unwrap())
}

fn orthant(n: usize) -> Vec<Vec<IVec>> {
    vec![troplift_core::num::identity(n)]
}

#[derive(Debug)]
pub struct SubdivisionCase {
    pub n: usize,
    pub base: Arc<ConeComplex>,
    pub s: Subdivision,
    pub source: Arc<ConeComplex>,
    pub f: PLMap,
}

fn random_primitive<R: Rng>(rng: &mut R, n: usize, hi: i64) -> IVec {
    loop {
        let v = random_vec(rng, n, 0, hi);
        if gcd_slice(&v) == 1 {
            return primitive(&v);
        }
    }
}

/// Orthant fan, one or two stellar refinements, and a cone mapped in by
/// the identity.
pub fn random_subdivision_case<R: Rng>(rng: &mut R) -> SubdivisionCase {
    let n = rng.gen_range(2..=3);
    let base_max = orthant(n);
    let mut fine = base_max.clone();
    for _ in 0..rng.gen_range(1..=2) {
        let v = random_primitive(rng, n, 3);
        fine = stellar(&fine, &v);
    }
    let base = fan_of(n, &base_max);
    let refined = fan_of(n, &fine);
    let s = Subdivision::refinement(base.clone(), refined).unwrap();
    let k = rng.gen_range(1..=n);
    let gens: Vec<IVec> = (0..k).map(|_| random_primitive(rng, n, 4)).collect();
    let c = LatticeCone::from_generators(n, &gens).unwrap();
    let source = Arc::new(ConeComplex::single(&c).unwrap());
    let f = PLMap::linear(source.clone(), base.clone(), &LatticeMap::identity(n)).unwrap();
    SubdivisionCase { n, base, s, source, f }
}

/// Pullback, then pushforward along the projection forgetting the last
/// coordinate; both must be valid subdivisions.
pub fn check_pull_push(case: &SubdivisionCase) -> Result<(), String> {
    let (sub, _) = pullback_subdivision(&case.f, &case.s).map_err(|e| e.to_string())?;
    let rep = validate_subdivision(&sub);
    if !rep.is_valid() {
        return Err(format!("pullback: {rep:?}"));
    }
    let n = case.n;
    let proj = LatticeMap::new((0..n - 1).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect(), n, n - 1).unwrap();
    let c = case.source.cone(case.source.maximal_cones()[0]);
    let b = Arc::new(ConeComplex::single(&c.image(&proj).unwrap()).unwrap());
    let pi = PLMap::linear(case.source.clone(), b, &proj).unwrap().compose(&sub.map).map_err(|e| e.to_string())?;
    let push = pushforward_subdivision(&pi).map_err(|e| e.to_string())?;
    let rep = validate_subdivision(&push);
    if !rep.is_valid() {
        return Err(format!("pushforward: {rep:?}"));
    }
    Ok(())
}

/// Lift exists iff every source cone has all sampled points (its
/// generators and random interior points) in one common cone of s.source.
pub fn check_lift_through<R: Rng>(rng: &mut R, case: &SubdivisionCase) -> Result<(), String> {
    let got = lift_through_subdivision(&case.f, &case.s, None).map_err(|e| e.to_string())?;
    let fine = case.s.source();
    let mut exists = true;
    for (cid, c) in case.source.cones().iter().enumerate() {
        let gens = c.generators();
        let mut samples: Vec<IVec> = gens.clone();
        for _ in 0..4 {
            let mut p = vec![0i64; case.n];
            for g in &gens {
                let w = rng.gen_range(1..=5);
                for (a, b) in p.iter_mut().zip(g) {
                    *a += w * b;
                }
            }
            samples.push(p);
        }
        let mut common: BTreeSet<usize> = (0..fine.len()).collect();
        for p in &samples {
            let img = case.f.assign[cid].1.apply(p);
            let here: BTreeSet<usize> = (0..fine.len()).filter(|&k| fine.cone(k).contains_int(&img, false)).collect();
            common = common.intersection(&here).cloned().collect();
        }
        if common.is_empty() {
            exists = false;
        }
        if let Some(g) = &got {
            let (sig, m) = &g.assign[cid];
            for p in &samples {
                let x = m.apply(p);
                if !fine.cone(*sig).contains_int(&x, false) || x != case.f.assign[cid].1.apply(p) {
                    return Err(format!("lift sends {p:?} outside its cone"));
                }
            }
        }
    }
    if exists != got.is_some() {
        return Err(format!("lift exists: library {}, brute force {exists}", got.is_some()));
    }
    Ok(())
}

pub fn zero_rat() -> Rat {
    Rat::zero()
}
