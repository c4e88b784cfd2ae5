//! Fine submonoids of lattices, their ideals and homomorphisms.

use crate::complex::covers;
use crate::cone::LatticeCone;
use crate::error::{invalid, semantic, Error, Result};
use crate::lattice::LatticeMap;
use crate::linalg::{self, elementary_divisors, hnf_basis, int_kernel, inverse_rat, smith, to_bmat};
use crate::num::{dot, is_zero, neg, sub, to_rvec, IVec, Rat};
use num_traits::{One, Signed, ToPrimitive};
use std::collections::{BTreeSet, HashMap, VecDeque};

/// Finitely generated submonoid of Z^n. Generators are irredundant and
/// sorted; equality of structs is equality of presentations, use
/// `same_as` for equality of monoids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FineMonoid {
    ambient: usize,
    gens: Vec<IVec>,
    cone: LatticeCone,
}

/// Search structure for membership in the monoid generated by `gens`.
struct Member<'a> {
    cone: &'a LatticeCone,
    weight: IVec,
    pos: Vec<(&'a IVec, i64)>,
    zero_lattice: Vec<IVec>,
}

impl<'a> Member<'a> {
    fn new(gens: &'a [IVec], cone: &'a LatticeCone, n: usize) -> Result<Self> {
        let mut weight = vec![0i64; n];
        for f in cone.facets() {
            for (w, x) in weight.iter_mut().zip(f) {
                *w += x;
            }
        }
        let mut pos = vec![];
        let mut zero = vec![];
        for g in gens {
            let wg = dot(&weight, g);
            if wg > 0 {
                pos.push((g, wg));
            } else {
                zero.push(g.clone());
            }
        }
        // heavier generators first keeps the search shallow
        pos.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
        Ok(Member { cone, weight, pos, zero_lattice: hnf_basis(&zero, n)? })
    }

    fn in_zero_lattice(&self, v: &[i64]) -> bool {
        if is_zero(v) {
            return true;
        }
        if self.zero_lattice.is_empty() {
            return false;
        }
        let cols: Vec<IVec> = (0..v.len()).map(|i| self.zero_lattice.iter().map(|b| b[i]).collect()).collect();
        match linalg::solve_int_rat(&cols, &to_rvec(v), self.zero_lattice.len()) {
            Some(c) => c.iter().all(|x| x.is_integer()),
            None => false,
        }
    }

    fn contains(&self, v: &[i64]) -> bool {
        if !self.cone.contains_int(v, false) {
            return false;
        }
        let budget = dot(&self.weight, v);
        let mut memo = HashMap::new();
        self.dfs(0, v.to_vec(), budget, &mut memo)
    }

    fn dfs(&self, i: usize, rem: IVec, budget: i64, memo: &mut HashMap<(usize, IVec), bool>) -> bool {
        if i == self.pos.len() {
            return budget == 0 && self.in_zero_lattice(&rem);
        }
        if let Some(&r) = memo.get(&(i, rem.clone())) {
            return r;
        }
        let (g, wg) = self.pos[i];
        let mut found = false;
        let mut c = budget / wg;
        loop {
            let next: IVec = rem.iter().zip(g).map(|(a, b)| a - c * b).collect();
            if self.cone.contains_int(&next, false) && self.dfs(i + 1, next, budget - c * wg, memo) {
                found = true;
                break;
            }
            if c == 0 {
                break;
            }
            c -= 1;
        }
        memo.insert((i, rem), found);
        found
    }
}

fn member_of(gens: &[IVec], n: usize, v: &[i64]) -> Result<bool> {
    let cone = LatticeCone::from_generators(n, gens)?;
    Ok(Member::new(gens, &cone, n)?.contains(v))
}

impl FineMonoid {
    pub fn new(ambient: usize, gens: &[IVec]) -> Result<Self> {
        if gens.iter().any(|g| g.len() != ambient) {
            return invalid("generator length does not match the ambient rank");
        }
        let mut g: Vec<IVec> = gens.iter().filter(|g| !is_zero(g)).cloned().collect();
        g.sort();
        g.dedup();
        // drop generators that the others already produce
        let mut i = g.len();
        while i > 0 {
            i -= 1;
            let others: Vec<IVec> = g.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| x.clone()).collect();
            if member_of(&others, ambient, &g[i])? {
                g.remove(i);
            }
        }
        let cone = LatticeCone::from_generators(ambient, &g)?;
        Ok(FineMonoid { ambient, gens: g, cone })
    }

    /// N^n.
    pub fn free(n: usize) -> Self {
        FineMonoid::new(n, &crate::num::identity(n)).expect("standard basis")
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn generators(&self) -> &[IVec] {
        &self.gens
    }
    pub fn cone(&self) -> &LatticeCone {
        &self.cone
    }
    pub fn is_sharp(&self) -> bool {
        self.cone.is_pointed()
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        v.len() == self.ambient
            && Member::new(&self.gens, &self.cone, self.ambient).map(|m| m.contains(v)).unwrap_or(false)
    }

    /// Batch membership, sharing the search setup.
    pub fn contains_all(&self, vs: &[IVec]) -> Vec<bool> {
        match Member::new(&self.gens, &self.cone, self.ambient) {
            Ok(m) => crate::par::map(vs, |v| m.contains(v)),
            Err(_) => vec![false; vs.len()],
        }
    }

    /// Same monoid: each generator set lies in the other monoid.
    pub fn same_as(&self, other: &FineMonoid) -> bool {
        self.ambient == other.ambient
            && other.gens.iter().all(|g| self.contains(g))
            && self.gens.iter().all(|g| other.contains(g))
    }

    /// Whether the monoid generated by `gens` equals this one.
    pub fn same_as_gens(&self, gens: &[IVec]) -> Result<bool> {
        Ok(self.same_as(&FineMonoid::new(self.ambient, gens)?))
    }
}

/// All lattice points of the cone spanned by m.
pub fn saturation(m: &FineMonoid) -> Result<FineMonoid> {
    let n = m.ambient;
    let c = &m.cone;
    if c.is_pointed() {
        return FineMonoid::new(n, &c.hilbert_basis()?);
    }
    // split off the lineality space and saturate the pointed quotient
    let lin = c.lineality().to_vec();
    let e = int_kernel(&lin, n)?;
    let q = e.len();
    let p = LatticeMap::new(e.clone(), n, q)?;
    let quot = c.image(&p)?;
    let hb = quot.hilbert_basis()?;
    let (u, _, v) = smith(&to_bmat(&e), q, n);
    let mut gens = vec![];
    for h in hb {
        let uh: Vec<num_bigint::BigInt> =
            (0..q).map(|i| (0..q).map(|j| &u[i][j] * num_bigint::BigInt::from(h[j])).sum()).collect();
        let x: IVec = (0..n)
            .map(|i| {
                let s: num_bigint::BigInt = (0..q).map(|j| &v[i][j] * &uh[j]).sum();
                s.to_i64().ok_or_else(|| Error::Overflow("saturation lift".into()))
            })
            .collect::<Result<_>>()?;
        gens.push(x);
    }
    for l in lin {
        gens.push(neg(&l));
        gens.push(l);
    }
    FineMonoid::new(n, &gens)
}

pub fn is_saturated(m: &FineMonoid) -> Result<bool> {
    let s = saturation(m)?;
    Ok(s.gens.iter().all(|g| m.contains(g)))
}

/// μ as a single cone: the union of the given cones, which must be convex.
pub fn mu_from_images(n: usize, cones: &[LatticeCone]) -> Result<LatticeCone> {
    let gens: Vec<IVec> = cones.iter().flat_map(|c| c.generators()).collect();
    let hull = LatticeCone::from_generators(n, &gens)?;
    let full: Vec<&LatticeCone> = cones.iter().filter(|c| c.dim() == hull.dim()).collect();
    if cones.iter().any(|c| c == &hull) || covers(&hull, &full) {
        Ok(hull)
    } else {
        semantic("μ not a cone")
    }
}

/// Q_l = γ′^∨ ⊕ N + f*(μ^∨) inside Z^r ⊕ Z. `pullback` sends functionals
/// on σ(l) to Z^{r+1}.
pub fn puncturing_monoid_ql(gamma_dual: &FineMonoid, mu_dual: &[IVec], pullback: &LatticeMap) -> Result<FineMonoid> {
    let r = gamma_dual.ambient;
    if pullback.target.rank != r + 1 {
        return invalid("pullback must land in Z^r ⊕ Z");
    }
    let mut gens: Vec<IVec> = gamma_dual.gens.iter().map(|g| {
        let mut v = g.clone();
        v.push(0);
        v
    }).collect();
    let mut unit = vec![0; r + 1];
    unit[r] = 1;
    gens.push(unit);
    for m in mu_dual {
        if m.len() != pullback.source.rank {
            return invalid("μ-dual generator has the wrong length");
        }
        let p = pullback.apply(m);
        if !gamma_dual.cone.contains_int(&p[..r], false) {
            return semantic("Q_l not contained in γ′^∨ ⊕ Z");
        }
        gens.push(p);
    }
    FineMonoid::new(r + 1, &gens)
}

/// Q_l + ⟨(−ρ, 1)⟩.
pub fn prestable_monoid(ql: &FineMonoid, rho: &[i64]) -> Result<FineMonoid> {
    if rho.len() + 1 != ql.ambient {
        return invalid("ρ has the wrong length");
    }
    let mut gens = ql.gens.clone();
    let mut g = neg(rho);
    g.push(1);
    gens.push(g);
    FineMonoid::new(ql.ambient, &gens)
}

/// γ^∨ ⊕ N + ⟨(−ρ, 1)⟩, the stalk at a punctured point after pushforward.
pub fn pushforward_stalk_monoid(gamma_dual: &FineMonoid, rho: &[i64]) -> Result<FineMonoid> {
    let r = gamma_dual.ambient;
    let mut gens: Vec<IVec> = gamma_dual.gens.iter().map(|g| {
        let mut v = g.clone();
        v.push(0);
        v
    }).collect();
    let mut unit = vec![0; r + 1];
    unit[r] = 1;
    gens.push(unit);
    prestable_monoid(&FineMonoid::new(r + 1, &gens)?, rho)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidHom {
    pub source: FineMonoid,
    pub target: FineMonoid,
    pub map: LatticeMap,
}

impl MonoidHom {
    pub fn new(source: FineMonoid, target: FineMonoid, map: LatticeMap) -> Result<Self> {
        if map.source.rank != source.ambient || map.target.rank != target.ambient {
            return invalid("monoid map has the wrong shape");
        }
        for g in &source.gens {
            if !target.contains(&map.apply(g)) {
                return invalid(format!("generator {g:?} does not map into the target monoid"));
            }
        }
        Ok(MonoidHom { source, target, map })
    }

    pub fn identity(m: &FineMonoid) -> Self {
        MonoidHom { source: m.clone(), target: m.clone(), map: LatticeMap::identity(m.ambient) }
    }

    pub fn apply(&self, v: &[i64]) -> IVec {
        self.map.apply(v)
    }
}

/// Integral pushout of A ← C → B: the image of A ⊕ B in the torsion-free
/// group (A^gp ⊕ B^gp)/C^gp.
pub fn fine_pushout(a: &FineMonoid, b: &FineMonoid, c_to_a: &MonoidHom, c_to_b: &MonoidHom) -> Result<FineMonoid> {
    if c_to_a.source != c_to_b.source && !c_to_a.source.same_as(&c_to_b.source) {
        return invalid("pushout needs a shared source");
    }
    let (na, nb) = (a.ambient, b.ambient);
    let w = na + nb;
    let k: Vec<IVec> = c_to_a
        .source
        .gens
        .iter()
        .map(|c| {
            let mut v = c_to_a.apply(c);
            v.extend(neg(&c_to_b.apply(c)));
            v
        })
        .collect();
    if elementary_divisors(&k, w).iter().any(|d| !d.is_one()) {
        return Err(Error::Semantic("non-integral amalgamation".into()));
    }
    let p = int_kernel(&k, w)?; // rows: projection W → W/K
    let q = p.len();
    let images: Vec<IVec> = a
        .gens
        .iter()
        .map(|g| {
            let mut v = g.clone();
            v.extend(vec![0; nb]);
            v
        })
        .chain(b.gens.iter().map(|g| {
            let mut v = vec![0; na];
            v.extend(g.iter().cloned());
            v
        }))
        .map(|v| p.iter().map(|row| dot(row, &v)).collect())
        .collect();
    // prefer the coordinates of a factor that maps isomorphically
    for (off, len) in [(0, na), (na, nb)] {
        if len != q {
            continue;
        }
        let block: Vec<IVec> = p.iter().map(|row| row[off..off + len].to_vec()).collect();
        if linalg::det(&block).abs().is_one() {
            let inv = inverse_rat(&block).expect("unimodular");
            let conv: Vec<IVec> = images
                .iter()
                .map(|v| {
                    (0..q)
                        .map(|i| {
                            let s: Rat = (0..q).map(|j| &inv[i][j] * Rat::from_integer(v[j].into())).sum();
                            s.to_integer().to_i64().unwrap()
                        })
                        .collect()
                })
                .collect();
            return FineMonoid::new(q, &conv);
        }
    }
    FineMonoid::new(q, &images)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidIdeal {
    pub monoid: FineMonoid,
    pub gens: Vec<IVec>,
}

impl MonoidIdeal {
    pub fn new(monoid: FineMonoid, gens: &[IVec]) -> Result<Self> {
        for g in gens {
            if !monoid.contains(g) {
                return invalid(format!("ideal generator {g:?} is not in the monoid"));
            }
        }
        let mut g: Vec<IVec> = gens.to_vec();
        g.sort();
        g.dedup();
        let mut keep = vec![];
        for (i, x) in g.iter().enumerate() {
            let redundant = g.iter().enumerate().any(|(j, y)| {
                j != i && monoid.contains(&sub(x, y)) && !(monoid.contains(&sub(y, x)) && j > i)
            });
            if !redundant {
                keep.push(x.clone());
            }
        }
        Ok(MonoidIdeal { monoid, gens: keep })
    }

    /// The maximal ideal Q \ {0} of a sharp monoid.
    pub fn maximal(monoid: &FineMonoid) -> Self {
        MonoidIdeal { monoid: monoid.clone(), gens: monoid.gens.clone() }
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.gens.iter().any(|g| self.monoid.contains(&sub(v, g)))
    }

    /// Q \ I, when finite.
    pub fn complement(&self) -> Result<Vec<IVec>> {
        if !radical_is_maximal(self)? {
            return Err(Error::Ideal("ideal complement is infinite".into()));
        }
        let n = self.monoid.ambient;
        let zero = vec![0; n];
        let mut seen = BTreeSet::new();
        if self.contains(&zero) {
            return Ok(vec![]);
        }
        let mut queue = VecDeque::from([zero.clone()]);
        seen.insert(zero);
        while let Some(x) = queue.pop_front() {
            for g in &self.monoid.gens {
                let y: IVec = x.iter().zip(g).map(|(a, b)| a + b).collect();
                if !seen.contains(&y) && !self.contains(&y) {
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        Ok(seen.into_iter().collect())
    }
}

/// Ideal of elements that do not vanish identically on `cone`.
pub fn puncturing_ideal(m: &FineMonoid, cone: &LatticeCone) -> Result<MonoidIdeal> {
    if cone.ambient() != m.ambient {
        return invalid("cone and monoid live in different lattices");
    }
    let p = cone.relint_point();
    for g in &m.gens {
        if cone.generators().iter().any(|r| dot(g, r) < 0) {
            return semantic("monoid element negative on the cone");
        }
    }
    let gens: Vec<IVec> = m.gens.iter().filter(|g| dot(g, &p) > 0).cloned().collect();
    MonoidIdeal::new(m.clone(), &gens)
}

/// True iff every generator of the (sharp) monoid has a multiple in the
/// ideal, i.e. the complement is finite.
pub fn radical_is_maximal(i: &MonoidIdeal) -> Result<bool> {
    let m = &i.monoid;
    if !m.is_sharp() {
        return semantic("monoid not sharp");
    }
    for r in m.cone.rays() {
        // a generator in the ideal lying on this ray
        let on_ray = i.gens.iter().any(|g| {
            let rg = to_rvec(g);
            LatticeCone::from_generators(m.ambient, &[r.clone()]).map(|c| c.contains(&rg, false)).unwrap_or(false)
        });
        if !on_ray {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Elements of the source monoid whose image lies in the ideal.
pub fn ideal_preimage(h: &MonoidHom, i: &MonoidIdeal) -> Result<MonoidIdeal> {
    if !h.target.same_as(&i.monoid) {
        return invalid("ideal lives on a different monoid");
    }
    let src = &h.source;
    let movers: Vec<&IVec> = src.gens.iter().filter(|g| !is_zero(&h.apply(g))).collect();
    // Exact bound: a sum of more than |Q \ I| nonzero elements of a sharp
    // monoid already lies in I. Generators mapping to zero never occur in a
    // minimal generator.
    let exact = if i.monoid.is_sharp() && radical_is_maximal(i)? {
        Some(i.complement()?.len())
    } else {
        None
    };
    const MAX_DEGREE: usize = 24;
    const QUIET: usize = 6;
    let bound = exact.unwrap_or(MAX_DEGREE);
    let mut found: Vec<IVec> = vec![];
    let mut layer: BTreeSet<IVec> = BTreeSet::from([vec![0; src.ambient]]);
    let mut last_new = 0;
    for deg in 1..=bound {
        let mut next = BTreeSet::new();
        for x in &layer {
            for g in &movers {
                let y: IVec = x.iter().zip(g.iter()).map(|(a, b)| a + b).collect();
                next.insert(y);
            }
        }
        // elements already in the ideal generated so far do not propagate
        let mut keep = BTreeSet::new();
        for y in next {
            if found.iter().any(|f| src.contains(&sub(&y, f))) {
                continue;
            }
            if i.contains(&h.apply(&y)) {
                found.push(y);
                last_new = deg;
            } else {
                keep.insert(y);
            }
        }
        layer = keep;
        if layer.is_empty() {
            break;
        }
        if exact.is_none() && deg >= last_new + QUIET && !found.is_empty() {
            return MonoidIdeal::new(src.clone(), &found);
        }
    }
    if exact.is_none() && !layer.is_empty() {
        return Err(Error::Ideal("generation bound exceeded".into()));
    }
    MonoidIdeal::new(src.clone(), &found)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(gens: &[&[i64]]) -> FineMonoid {
        let v: Vec<IVec> = gens.iter().map(|g| g.to_vec()).collect();
        FineMonoid::new(v[0].len(), &v).unwrap()
    }

    #[test]
    fn membership_examples() {
        assert!(m(&[&[1, 0], &[0, 1]]).contains(&[3, 2]));
        assert!(!m(&[&[2, 0], &[0, 1]]).contains(&[1, 0]));
        assert!(m(&[&[1, 0], &[1, 1], &[1, 2]]).contains(&[2, 3]));
        let num = m(&[&[2], &[3]]);
        assert!(!num.contains(&[1]));
        assert!(num.contains(&[5]));
        assert!(num.contains(&[7]));
        // group part
        let g = m(&[&[1, 0], &[-1, 0], &[0, 2]]);
        assert!(g.contains(&[-5, 4]));
        assert!(!g.contains(&[0, 3]));
    }

    #[test]
    fn canonical_generators() {
        let a = m(&[&[1, 0], &[0, 1], &[1, 1], &[2, 0]]);
        assert_eq!(a.generators(), &[vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn saturation_examples() {
        let q = m(&[&[1, 0], &[0, 1]]);
        assert!(saturation(&q).unwrap().same_as(&q));
        assert!(is_saturated(&q).unwrap());
        let num = m(&[&[2, 0], &[3, 0]]);
        assert_eq!(saturation(&num).unwrap().generators(), &[vec![1, 0]]);
        assert!(!is_saturated(&num).unwrap());
        let c = m(&[&[1, 0], &[1, 2]]);
        assert_eq!(saturation(&c).unwrap().generators(), &[vec![1, 0], vec![1, 1], vec![1, 2]]);
        let half = m(&[&[1, 0], &[-1, 0], &[1, 2]]);
        let s = saturation(&half).unwrap();
        assert!(s.contains(&[0, 1]) && s.contains(&[-7, 3]) && !s.contains(&[0, -1]));
    }

    #[test]
    fn fig4_monoids() {
        let gd = FineMonoid::free(1);
        let mu = LatticeCone::of(&[&[1, 0], &[1, 2]]);
        let mu_dual = mu.dual().unwrap().hilbert_basis().unwrap();
        let ql = puncturing_monoid_ql(&gd, &mu_dual, &LatticeMap::identity(2)).unwrap();
        assert!(ql.same_as_gens(&[vec![1, 0], vec![0, 1], vec![2, -1]]).unwrap());
        let pre = prestable_monoid(&ql, &[1]).unwrap();
        assert!(pre.same_as_gens(&[vec![1, 0], vec![0, 1], vec![2, -1], vec![-1, 1]]).unwrap());
        assert!(is_saturated(&pre).unwrap());
        let steeper = puncturing_monoid_ql(&gd, &[vec![3, -1]], &LatticeMap::identity(2)).unwrap();
        assert!(steeper.same_as_gens(&[vec![1, 0], vec![0, 1], vec![3, -1]]).unwrap());
        let trivial = puncturing_monoid_ql(&gd, &[vec![0, 1]], &LatticeMap::identity(2)).unwrap();
        assert!(trivial.same_as(&FineMonoid::free(2)));
    }

    #[test]
    fn prestable_and_stalk_examples() {
        let n2 = FineMonoid::free(2);
        assert!(prestable_monoid(&n2, &[0]).unwrap().same_as(&n2));
        assert!(prestable_monoid(&n2, &[2]).unwrap().same_as_gens(&[vec![1, 0], vec![0, 1], vec![-2, 1]]).unwrap());
        let st = pushforward_stalk_monoid(&FineMonoid::free(1), &[1]).unwrap();
        assert!(st.same_as_gens(&[vec![1, 0], vec![0, 1], vec![-1, 1]]).unwrap());
        assert!(pushforward_stalk_monoid(&FineMonoid::free(1), &[0]).unwrap().same_as(&n2));
        let st = pushforward_stalk_monoid(&n2, &[1, 1]).unwrap();
        assert!(st
            .same_as_gens(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![-1, -1, 1]])
            .unwrap());
    }

    #[test]
    fn pushout_examples() {
        let n1 = FineMonoid::free(1);
        let id = MonoidHom::identity(&n1);
        assert!(fine_pushout(&n1, &n1, &id, &id).unwrap().same_as(&n1));

        let n2 = FineMonoid::free(2);
        let qe = m(&[&[1, 0], &[0, 1], &[-1, 1]]);
        let to_qe = MonoidHom::new(n2.clone(), qe.clone(), LatticeMap::identity(2)).unwrap();
        let to_ql = MonoidHom::identity(&n2);
        let p = fine_pushout(&qe, &n2, &to_qe, &to_ql).unwrap();
        assert!(p.same_as(&qe));

        // Q_l ⊕ Q_{e0} over γ′^∨ ⊕ N is Q_l + ⟨(−ρ,1)⟩
        let ql = m(&[&[1, 0], &[0, 1], &[2, -1]]);
        let qe0 = m(&[&[1, 0], &[0, 1], &[-1, 1]]);
        let a = MonoidHom::new(n2.clone(), ql.clone(), LatticeMap::identity(2)).unwrap();
        let b = MonoidHom::new(n2.clone(), qe0.clone(), LatticeMap::identity(2)).unwrap();
        let p = fine_pushout(&ql, &qe0, &a, &b).unwrap();
        assert!(p.same_as(&prestable_monoid(&ql, &[1]).unwrap()));

        // doubling map: (Z ⊕ Z)/⟨(1,-2)⟩ is torsion free, but (2,-2) is not
        let two = MonoidHom::new(n1.clone(), n1.clone(), LatticeMap::new(vec![vec![2]], 1, 1).unwrap()).unwrap();
        assert!(fine_pushout(&n1, &n1, &two, &id).is_ok());
        let err = fine_pushout(&n1, &n1, &two, &two).unwrap_err();
        assert_eq!(err, Error::Semantic("non-integral amalgamation".into()));
    }

    #[test]
    fn puncturing_ideal_examples() {
        let n2 = FineMonoid::free(2);
        let quad = LatticeCone::of(&[&[1, 0], &[0, 1]]);
        assert_eq!(puncturing_ideal(&n2, &quad).unwrap().gens, vec![vec![0, 1], vec![1, 0]]);
        let half = m(&[&[1, 0], &[0, 1], &[0, -1]]);
        let ray = LatticeCone::of(&[&[1, 0]]);
        assert_eq!(puncturing_ideal(&half, &ray).unwrap().gens, vec![vec![1, 0]]);
        assert!(puncturing_ideal(&n2, &LatticeCone::zero(2)).unwrap().gens.is_empty());
    }

    #[test]
    fn ideal_preimage_examples() {
        let n2 = FineMonoid::free(2);
        let n1 = FineMonoid::free(1);
        let id = MonoidHom::identity(&n2);
        let i = MonoidIdeal::new(n2.clone(), &[vec![2, 0], vec![0, 3]]).unwrap();
        assert_eq!(ideal_preimage(&id, &i).unwrap().gens, i.gens);
        let sum = MonoidHom::new(n2.clone(), n1.clone(), LatticeMap::new(vec![vec![1, 1]], 2, 1).unwrap()).unwrap();
        let i2 = MonoidIdeal::new(n1.clone(), &[vec![2]]).unwrap();
        assert_eq!(ideal_preimage(&sum, &i2).unwrap().gens, vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        let i1 = MonoidIdeal::maximal(&n1);
        assert_eq!(ideal_preimage(&sum, &i1).unwrap().gens, vec![vec![0, 1], vec![1, 0]]);
        // projection to the first factor: the second generator never enters
        let pr = MonoidHom::new(n2.clone(), n1.clone(), LatticeMap::new(vec![vec![1, 0]], 2, 1).unwrap()).unwrap();
        assert_eq!(ideal_preimage(&pr, &i2).unwrap().gens, vec![vec![2, 0]]);
    }

    #[test]
    fn radical_examples() {
        let n2 = FineMonoid::free(2);
        let i = MonoidIdeal::new(n2.clone(), &[vec![2, 0], vec![0, 3]]).unwrap();
        assert!(radical_is_maximal(&i).unwrap());
        assert_eq!(i.complement().unwrap().len(), 6);
        let j = MonoidIdeal::new(n2.clone(), &[vec![1, 1]]).unwrap();
        assert!(!radical_is_maximal(&j).unwrap());
        assert!(matches!(j.complement(), Err(Error::Ideal(_))));
        assert!(radical_is_maximal(&MonoidIdeal::maximal(&n2)).unwrap());
        let g = m(&[&[1], &[-1]]);
        assert!(radical_is_maximal(&MonoidIdeal::maximal(&g)).is_err());
    }
}
