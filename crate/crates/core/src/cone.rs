//! Rational polyhedral cones in Z^n kept in both representations, plus
//! duals, faces, membership, images and Hilbert bases.

use crate::error::{semantic, Error, Result};
use crate::lattice::LatticeMap;
use crate::linalg::{self, hnf_basis, int_kernel, inverse_rat, smith, to_bmat};
use crate::num::{
    dot, dot128, dot_rat, neg, primitive128, primitive_of_rat, sign_rat, to_rvec,
    IVec, RVec, Rat,
};
use crate::par;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use std::cmp::Ordering;

/// A cone with its V-description (extreme rays plus a lineality basis) and
/// H-description (facet normals plus equations of the linear span).
///
/// Canonical form: rays are primitive, orthogonal to the lineality space and
/// sorted; facet normals are primitive, lie in the span and are sorted; the
/// lineality and equation bases are in Hermite form. Two cones are equal as
/// sets iff the structs are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeCone {
    ambient: usize,
    rays: Vec<IVec>,
    lineality: Vec<IVec>,
    facets: Vec<IVec>,
    equations: Vec<IVec>,
}

impl PartialOrd for LatticeCone {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LatticeCone {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.ambient, self.dim(), &self.rays, &self.lineality, &self.facets)
            .cmp(&(other.ambient, other.dim(), &other.rays, &other.lineality, &other.facets))
    }
}

fn to128(v: &[i64]) -> Vec<i128> {
    v.iter().map(|&x| x as i128).collect()
}

fn to64(v: &[i128]) -> Result<IVec> {
    v.iter()
        .map(|&x| x.to_i64().ok_or_else(|| Error::Overflow("cone coordinate".into())))
        .collect()
}

fn rank128(rows: &[&Vec<i128>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let m: linalg::BMat = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    linalg::rank_big(&m)
}

/// Extreme rays of the pointed cone {y in Q^r : c·y >= 0 for c in cons};
/// `cons` must have rank r.
fn pointed_dd(cons: &[Vec<i128>], r: usize) -> Result<Vec<Vec<i128>>> {
    // pick r independent constraints
    let mut chosen: Vec<usize> = vec![];
    for i in 0..cons.len() {
        let mut rows: Vec<&Vec<i128>> = chosen.iter().map(|&j| &cons[j]).collect();
        rows.push(&cons[i]);
        if rank128(&rows) == rows.len() {
            chosen.push(i);
            if chosen.len() == r {
                break;
            }
        }
    }
    debug_assert_eq!(chosen.len(), r);
    let m: Vec<IVec> = chosen.iter().map(|&i| to64(&cons[i])).collect::<Result<_>>()?;
    let inv = inverse_rat(&m).ok_or_else(|| Error::Semantic("singular initial system".into()))?;
    let mut rays: Vec<Vec<i128>> = (0..r)
        .map(|j| {
            let col: RVec = (0..r).map(|i| inv[i][j].clone()).collect();
            primitive_of_rat(&col).map(|v| to128(&v))
        })
        .collect::<Result<_>>()?;
    let mut processed: Vec<usize> = chosen.clone();
    for (i, a) in cons.iter().enumerate() {
        if chosen.contains(&i) {
            continue;
        }
        let vals: Vec<i128> = rays.iter().map(|v| v.iter().zip(a).map(|(x, y)| x * y).sum()).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k] > 0).collect();
        let negs: Vec<usize> = (0..rays.len()).filter(|&k| vals[k] < 0).collect();
        if negs.is_empty() {
            processed.push(i);
            continue;
        }
        let mut next: Vec<Vec<i128>> =
            (0..rays.len()).filter(|&k| vals[k] >= 0).map(|k| rays[k].clone()).collect();
        for &p in &pos {
            for &q in &negs {
                let common: Vec<&Vec<i128>> = processed
                    .iter()
                    .map(|&j| &cons[j])
                    .filter(|c| {
                        let cp: i128 = c.iter().zip(&rays[p]).map(|(x, y)| x * y).sum();
                        let cq: i128 = c.iter().zip(&rays[q]).map(|(x, y)| x * y).sum();
                        cp == 0 && cq == 0
                    })
                    .collect();
                if r >= 2 && rank128(&common) == r - 2 {
                    let w: Vec<i128> = rays[q]
                        .iter()
                        .zip(&rays[p])
                        .map(|(yq, yp)| vals[p] * yq - vals[q] * yp)
                        .collect();
                    let w = primitive128(&w);
                    if !next.contains(&w) {
                        next.push(w);
                    }
                }
            }
        }
        rays = next;
        processed.push(i);
    }
    Ok(rays)
}

/// V-description of {x in Q^d : c·x >= 0 for c in cons}: (lineality basis,
/// extreme rays orthogonal to the lineality space).
fn dd(cons: &[IVec], d: usize) -> Result<(Vec<IVec>, Vec<IVec>)> {
    let cons: Vec<IVec> = cons.iter().filter(|c| c.iter().any(|&x| x != 0)).cloned().collect();
    let lineality = int_kernel(&cons, d)?;
    if cons.is_empty() {
        return Ok((lineality, vec![]));
    }
    let w = hnf_basis(&cons, d)?; // basis of the row space
    let r = w.len();
    let reduced: Vec<Vec<i128>> = cons
        .iter()
        .map(|c| w.iter().map(|wj| dot128(wj, c)).collect())
        .collect();
    let ys = pointed_dd(&reduced, r)?;
    let mut rays = vec![];
    for y in ys {
        let x: Vec<i128> = (0..d)
            .map(|i| w.iter().zip(&y).map(|(wj, yj)| wj[i] as i128 * yj).sum())
            .collect();
        let x = to64(&primitive128(&x))?;
        if !rays.contains(&x) {
            rays.push(x);
        }
    }
    rays.sort();
    Ok((lineality, rays))
}

impl LatticeCone {
    /// The cone spanned by the given vectors (zero vectors ignored).
    pub fn from_generators(ambient: usize, gens: &[IVec]) -> Result<Self> {
        if gens.iter().any(|g| g.len() != ambient) {
            return Err(Error::Invalid("generator length does not match the ambient rank".into()));
        }
        let gens: Vec<IVec> = gens.iter().filter(|g| g.iter().any(|&x| x != 0)).cloned().collect();
        if gens.is_empty() {
            return Ok(Self::zero(ambient));
        }
        let (equations, mut facets) = dd(&gens, ambient)?;
        facets.sort();
        let mut cons = facets.clone();
        for e in &equations {
            cons.push(e.clone());
            cons.push(neg(e));
        }
        let (lineality, rays) = dd(&cons, ambient)?;
        Ok(LatticeCone { ambient, rays, lineality, facets, equations })
    }

    /// {x : f·x >= 0 for f in ineqs, e·x = 0 for e in eqs}.
    pub fn from_inequalities(ambient: usize, ineqs: &[IVec], eqs: &[IVec]) -> Result<Self> {
        if ineqs.iter().chain(eqs).any(|g| g.len() != ambient) {
            return Err(Error::Invalid("inequality length does not match the ambient rank".into()));
        }
        let mut cons: Vec<IVec> = ineqs.to_vec();
        for e in eqs {
            cons.push(e.clone());
            cons.push(neg(e));
        }
        let (lin, rays) = dd(&cons, ambient)?;
        let mut gens = rays;
        for l in &lin {
            gens.push(l.clone());
            gens.push(neg(l));
        }
        Self::from_generators(ambient, &gens)
    }

    pub fn zero(ambient: usize) -> Self {
        LatticeCone {
            ambient,
            rays: vec![],
            lineality: vec![],
            facets: vec![],
            equations: crate::num::identity(ambient),
        }
    }

    /// The whole space Q^n.
    pub fn full_space(ambient: usize) -> Self {
        LatticeCone {
            ambient,
            rays: vec![],
            lineality: crate::num::identity(ambient),
            facets: vec![],
            equations: vec![],
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn rays(&self) -> &[IVec] {
        &self.rays
    }
    pub fn lineality(&self) -> &[IVec] {
        &self.lineality
    }
    pub fn facets(&self) -> &[IVec] {
        &self.facets
    }
    pub fn equations(&self) -> &[IVec] {
        &self.equations
    }
    pub fn dim(&self) -> usize {
        self.ambient - self.equations.len()
    }
    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }
    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }
    pub fn is_simplicial(&self) -> bool {
        self.is_pointed() && self.rays.len() == self.dim()
    }

    /// Rays together with ± the lineality basis, sorted.
    pub fn generators(&self) -> Vec<IVec> {
        let mut g = self.rays.clone();
        for l in &self.lineality {
            g.push(l.clone());
            g.push(neg(l));
        }
        g.sort();
        g
    }

    /// Basis of Z^n ∩ span(cone), Hermite form.
    pub fn lattice_basis(&self) -> Result<Vec<IVec>> {
        int_kernel(&self.equations, self.ambient)
    }

    /// A lattice point of the relative interior.
    pub fn relint_point(&self) -> IVec {
        let mut p = vec![0i64; self.ambient];
        for r in &self.rays {
            for (x, y) in p.iter_mut().zip(r) {
                *x += y;
            }
        }
        p
    }

    pub fn in_span_int(&self, p: &[i64]) -> bool {
        self.equations.iter().all(|e| dot(e, p) == 0)
    }

    pub fn contains_int(&self, p: &[i64], strict: bool) -> bool {
        if !self.in_span_int(p) {
            return false;
        }
        self.facets.iter().all(|f| {
            let v = dot128(f, p);
            if strict { v > 0 } else { v >= 0 }
        })
    }

    /// Membership of a rational point; with `strict` the relative interior.
    pub fn contains(&self, p: &[Rat], strict: bool) -> bool {
        if self.equations.iter().any(|e| !dot_rat(e, p).is_zero()) {
            return false;
        }
        self.facets.iter().all(|f| {
            let s = sign_rat(&dot_rat(f, p));
            if strict { s > 0 } else { s >= 0 }
        })
    }

    pub fn contains_cone(&self, other: &LatticeCone) -> bool {
        other.generators().iter().all(|g| self.contains_int(g, false))
    }

    pub fn dual(&self) -> Result<LatticeCone> {
        let mut g = self.facets.clone();
        for e in &self.equations {
            g.push(e.clone());
            g.push(neg(e));
        }
        LatticeCone::from_generators(self.ambient, &g)
    }

    pub fn intersect(&self, other: &LatticeCone) -> Result<LatticeCone> {
        let mut ineqs = self.facets.clone();
        ineqs.extend(other.facets.iter().cloned());
        let mut eqs = self.equations.clone();
        eqs.extend(other.equations.iter().cloned());
        LatticeCone::from_inequalities(self.ambient, &ineqs, &eqs)
    }

    pub fn image(&self, f: &LatticeMap) -> Result<LatticeCone> {
        let g: Vec<IVec> = self.generators().iter().map(|v| f.apply(v)).collect();
        LatticeCone::from_generators(f.target.rank, &g)
    }

    /// {x : f(x) in self}.
    pub fn preimage(&self, f: &LatticeMap) -> Result<LatticeCone> {
        let ineqs: Vec<IVec> = self.facets.iter().map(|h| f.pullback(h)).collect();
        let eqs: Vec<IVec> = self.equations.iter().map(|h| f.pullback(h)).collect();
        LatticeCone::from_inequalities(f.source.rank, &ineqs, &eqs)
    }

    /// The face cut out by the facets in `tight` (indices into `facets()`).
    pub fn face_of_facets(&self, tight: &[usize]) -> Result<LatticeCone> {
        let mut eqs = self.equations.clone();
        for &i in tight {
            eqs.push(self.facets[i].clone());
        }
        LatticeCone::from_inequalities(self.ambient, &self.facets, &eqs)
    }

    /// The smallest face containing `other` (assumed contained in self).
    pub fn carrier_face(&self, other: &LatticeCone) -> Result<LatticeCone> {
        let p = other.relint_point();
        let tight: Vec<usize> = (0..self.facets.len()).filter(|&i| dot(&self.facets[i], &p) == 0).collect();
        self.face_of_facets(&tight)
    }

    pub fn is_face_of(&self, big: &LatticeCone) -> bool {
        if !big.contains_cone(self) {
            return false;
        }
        match big.carrier_face(self) {
            Ok(f) => &f == self,
            Err(_) => false,
        }
    }

    /// All faces, sorted by dimension then generators. Includes self and the
    /// minimal face (the lineality space).
    pub fn faces(&self) -> Result<Vec<LatticeCone>> {
        let mut out = vec![self.clone()];
        let mut frontier = vec![(self.clone(), Vec::<usize>::new())];
        while let Some((f, tight)) = frontier.pop() {
            for j in 0..self.facets.len() {
                if tight.contains(&j) {
                    continue;
                }
                if f.rays.iter().all(|r| dot(&self.facets[j], r) == 0)
                    && f.lineality.iter().all(|r| dot(&self.facets[j], r) == 0)
                {
                    continue; // facet vanishes on f already
                }
                let mut t2 = tight.clone();
                t2.push(j);
                let g = self.face_of_facets(&t2)?;
                if g.dim() + 1 == f.dim() && !out.contains(&g) {
                    out.push(g.clone());
                    frontier.push((g, t2));
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// Unique minimal generating set of the monoid cone ∩ Z^n, sorted.
    pub fn hilbert_basis(&self) -> Result<Vec<IVec>> {
        if !self.is_pointed() {
            return semantic("cone not pointed");
        }
        if self.is_zero() {
            return Ok(vec![]);
        }
        let basis = self.lattice_basis()?; // k vectors
        let k = basis.len();
        let cols: Vec<IVec> = (0..self.ambient).map(|i| basis.iter().map(|b| b[i]).collect()).collect();
        let to_local = |v: &IVec| -> Result<IVec> {
            let c = linalg::solve_int_rat(&cols, &to_rvec(v), k)
                .ok_or_else(|| Error::Semantic("ray outside its own span".into()))?;
            primitive_of_rat(&c)
        };
        let local_rays: Vec<IVec> = self.rays.iter().map(to_local).collect::<Result<_>>()?;
        let local = LatticeCone::from_generators(k, &local_rays)?;
        let simplices = triangulate(&local)?;
        let pts: Vec<Vec<IVec>> = par::map(&simplices, |s| parallelepiped_points(s));
        let mut cands: Vec<IVec> = local.rays.clone();
        for p in pts.into_iter().flatten() {
            cands.push(p);
        }
        cands.sort();
        cands.dedup();
        let keep: Vec<bool> = par::map(&cands, |c| {
            !cands.iter().any(|h| {
                h != c && {
                    let d: IVec = c.iter().zip(h).map(|(a, b)| a - b).collect();
                    local.contains_int(&d, false)
                }
            })
        });
        let mut out: Vec<IVec> = cands
            .iter()
            .zip(keep)
            .filter(|(_, k)| *k)
            .map(|(c, _)| {
                (0..self.ambient)
                    .map(|i| c.iter().zip(&basis).map(|(a, b)| a * b[i]).sum())
                    .collect()
            })
            .collect();
        out.sort();
        Ok(out)
    }

    /// The primitive ray generator if this is a 1-dimensional pointed cone.
    pub fn as_ray(&self) -> Option<&IVec> {
        if self.is_pointed() && self.rays.len() == 1 {
            Some(&self.rays[0])
        } else {
            None
        }
    }

    /// Convenience: cone spanned by `gens`, panicking on malformed input.
    /// Meant for fixtures and tests.
    pub fn of(gens: &[&[i64]]) -> LatticeCone {
        let n = gens.first().map_or(0, |g| g.len());
        let v: Vec<IVec> = gens.iter().map(|g| g.to_vec()).collect();
        LatticeCone::from_generators(n, &v).expect("valid generators")
    }
}

/// Pulling triangulation of a full-dimensional pointed cone, as lists of rays.
fn triangulate(c: &LatticeCone) -> Result<Vec<Vec<IVec>>> {
    let d = c.dim();
    if c.rays.len() == d {
        return Ok(vec![c.rays.clone()]);
    }
    let r0 = c.rays[0].clone();
    let mut out = vec![];
    for f in c.facets() {
        if dot(f, &r0) == 0 {
            continue;
        }
        let on: Vec<IVec> = c.rays.iter().filter(|r| dot(f, r) == 0).cloned().collect();
        let face = LatticeCone::from_generators(c.ambient, &on)?;
        for s in triangulate(&face)? {
            let mut s = s;
            s.insert(0, r0.clone());
            out.push(s);
        }
    }
    Ok(out)
}

/// Nonzero lattice points of {Σ λ_i r_i : 0 <= λ_i < 1} for a simplicial
/// full-rank set of rays.
fn parallelepiped_points(rays: &[IVec]) -> Vec<IVec> {
    let k = rays.len();
    // R has the rays as columns
    let r: Vec<IVec> = (0..k).map(|i| rays.iter().map(|v| v[i]).collect()).collect();
    let (u, d, _) = smith(&to_bmat(&r), k, k);
    let u64s: Vec<IVec> = u.iter().map(|row| row.iter().map(|x| x.to_i64().unwrap()).collect()).collect();
    let uinv = inverse_rat(&u64s).expect("unimodular");
    let rinv = inverse_rat(&r).expect("simplicial");
    let divs: Vec<i64> = (0..k).map(|i| d[i][i].to_i64().unwrap()).collect();
    let mut out = vec![];
    let mut c = vec![0i64; k];
    loop {
        // x = U^{-1} c
        let x: RVec = (0..k)
            .map(|i| {
                let mut s = Rat::zero();
                for j in 0..k {
                    s += &uinv[i][j] * Rat::from_integer(BigInt::from(c[j]));
                }
                s
            })
            .collect();
        let lam: RVec = (0..k)
            .map(|i| {
                let mut s = Rat::zero();
                for j in 0..k {
                    s += &rinv[i][j] * &x[j];
                }
                let fl = s.floor();
                s - fl
            })
            .collect();
        let p: IVec = (0..k)
            .map(|i| {
                let mut s = Rat::zero();
                for j in 0..k {
                    s += Rat::from_integer(BigInt::from(r[i][j])) * &lam[j];
                }
                debug_assert!(s.denom().is_one());
                s.to_integer().to_i64().unwrap()
            })
            .collect();
        if p.iter().any(|&v| v != 0) {
            out.push(p);
        }
        // next c
        let mut i = 0;
        loop {
            if i == k {
                return out;
            }
            c[i] += 1;
            if c[i] < divs[i] {
                break;
            }
            c[i] = 0;
            i += 1;
        }
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrant_roundtrip() {
        let c = LatticeCone::of(&[&[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(c.rays(), &[vec![0, 1], vec![1, 0]]);
        assert_eq!(c.facets(), &[vec![0, 1], vec![1, 0]]);
        assert_eq!(c.dim(), 2);
        let h = LatticeCone::from_inequalities(2, c.facets(), &[]).unwrap();
        assert_eq!(h, c);
    }

    #[test]
    fn half_plane_and_line() {
        let c = LatticeCone::of(&[&[1, 0], &[-1, 0], &[0, 1]]);
        assert_eq!(c.lineality(), &[vec![1, 0]]);
        assert_eq!(c.rays(), &[vec![0, 1]]);
        assert_eq!(c.facets(), &[vec![0, 1]]);
        let l = LatticeCone::of(&[&[2, 2, 0], &[-1, -1, 0]]);
        assert_eq!(l.dim(), 1);
        assert_eq!(l.lineality(), &[vec![1, 1, 0]]);
        assert!(l.facets().is_empty());
    }

    #[test]
    fn ray_in_3d() {
        let c = LatticeCone::of(&[&[2, 4, 6]]);
        assert_eq!(c.rays(), &[vec![1, 2, 3]]);
        assert_eq!(c.dim(), 1);
        assert_eq!(c.equations().len(), 2);
        assert_eq!(c.facets().len(), 1);
        assert_eq!(c.faces().unwrap().len(), 2);
    }

    #[test]
    fn square_pyramid_faces() {
        let c = LatticeCone::of(&[&[1, 0, 1], &[0, 1, 1], &[-1, 0, 1], &[0, -1, 1]]);
        assert_eq!(c.rays().len(), 4);
        assert_eq!(c.facets().len(), 4);
        let f = c.faces().unwrap();
        // apex, 4 rays, 4 facets, self
        assert_eq!(f.len(), 10);
        for g in &f {
            assert!(g.is_face_of(&c));
        }
        assert!(!LatticeCone::of(&[&[1, 0, 1], &[-1, 0, 1]]).is_face_of(&c));
    }

    #[test]
    fn dual_of_dual() {
        let c = LatticeCone::of(&[&[1, 0, 0], &[1, 2, 0], &[1, 1, 3]]);
        assert_eq!(c.dual().unwrap().dual().unwrap(), c);
        let d = LatticeCone::of(&[&[1, 0, 0], &[0, 1, 0], &[0, -1, 0]]);
        assert_eq!(d.dual().unwrap().dual().unwrap(), d);
    }

    #[test]
    fn hilbert_basis_a_n() {
        let c = LatticeCone::of(&[&[0, 1], &[3, 1]]);
        let mut expect = vec![vec![0, 1], vec![1, 1], vec![2, 1], vec![3, 1]];
        expect.sort();
        assert_eq!(c.hilbert_basis().unwrap(), expect);
        let c = LatticeCone::of(&[&[1, 0], &[1, 2]]);
        assert_eq!(c.hilbert_basis().unwrap(), vec![vec![1, 0], vec![1, 1], vec![1, 2]]);
        let c = LatticeCone::of(&[&[2, -1], &[0, 1]]);
        assert_eq!(c.hilbert_basis().unwrap(), vec![vec![0, 1], vec![1, 0], vec![2, -1]]);
    }

    #[test]
    fn hilbert_basis_lower_dim() {
        // cone in the plane x+y+z=0 ... sublattice coordinates matter
        let c = LatticeCone::of(&[&[1, -1, 0], &[1, 1, -2]]);
        let hb = c.hilbert_basis().unwrap();
        assert_eq!(hb, vec![vec![1, -1, 0], vec![1, 0, -1], vec![1, 1, -2]]);
    }

    #[test]
    fn zero_cone() {
        let z = LatticeCone::from_generators(2, &[vec![0, 0]]).unwrap();
        assert!(z.is_zero());
        assert_eq!(z, LatticeCone::zero(2));
        assert!(z.contains_int(&[0, 0], true));
        assert!(z.hilbert_basis().unwrap().is_empty());
        assert_eq!(z.dual().unwrap(), LatticeCone::full_space(2));
    }
}
