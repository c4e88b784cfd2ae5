use super::series::{SeriesRing, TruncatedSeries};
use crate::complex::{ConeComplex, ConeId, Report, Subdivision};
use crate::cone::LatticeCone;
use crate::error::{invalid, semantic, Error, Result};
use crate::lattice::{smith_torsion, LatticeMap};
use crate::linalg::coords_in_basis;
use crate::monoid::{ideal_preimage, MonoidHom};
use crate::num::{is_zero, neg, to_rvec, IVec, Rat};
use crate::tropical::{is_balanced, moduli_cone, TropicalType};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wall {
    pub support: LatticeCone,
    pub direction: IVec,
    pub function: TruncatedSeries,
}

#[derive(Debug, Clone)]
pub struct ScatteringDiagram {
    pub target: Arc<ConeComplex>,
    pub skeleton: Vec<ConeId>,
    pub ring: Arc<SeriesRing>,
    pub walls: Vec<Wall>,
}

impl ScatteringDiagram {
    pub fn new(target: Arc<ConeComplex>, skeleton: Vec<ConeId>, ring: Arc<SeriesRing>, walls: Vec<Wall>) -> Result<Self> {
        let n = target.ambient().ok_or_else(|| Error::Invalid("scattering diagrams need an embedded target".into()))?;
        if ring.base_rank != n {
            return invalid("monomial lattice must be the ambient lattice");
        }
        if skeleton.iter().any(|&c| c >= target.len()) {
            return invalid("skeleton cone out of range");
        }
        for (i, w) in walls.iter().enumerate() {
            if w.support.ambient() != n || w.direction.len() != n {
                return invalid(format!("wall {i} has the wrong ambient rank"));
            }
            if w.support.dim() + 1 != n {
                return semantic(format!("wall {i} is not of codimension one"));
            }
            if !skeleton.iter().any(|&c| target.cone(c).contains_cone(&w.support)) {
                return semantic(format!("wall {i} leaves the skeleton"));
            }
            if is_zero(&w.direction) || !w.support.in_span_int(&w.direction) {
                return semantic(format!("wall {i}: direction must be nonzero and tangent to the wall"));
            }
            if *w.function.ring != *ring {
                return invalid(format!("wall {i}: function lives in a different ring"));
            }
        }
        let mut skeleton = skeleton;
        skeleton.sort();
        skeleton.dedup();
        Ok(ScatteringDiagram { target, skeleton, ring, walls })
    }

    /// Walls with equal support replaced by one wall carrying the product.
    pub fn merged(&self) -> Result<ScatteringDiagram> {
        let mut by: BTreeMap<LatticeCone, Wall> = BTreeMap::new();
        for w in &self.walls {
            match by.get_mut(&w.support) {
                Some(x) => x.function = x.function.mul(&w.function)?,
                None => {
                    by.insert(w.support.clone(), w.clone());
                }
            }
        }
        Ok(ScatteringDiagram { walls: by.into_values().collect(), ..self.clone() })
    }
}

/// Genus 0, one leg with nonzero contact order into the skeleton,
/// realizable, balanced, moduli of dimension n−2 and a leg sweeping n−1.
pub fn validate_wall_type(t: &TropicalType, skeleton: &[ConeId], n: usize) -> Report {
    let mut r = Report::default();
    if t.target.ambient() != Some(n) {
        r.push("wall types need an embedded target of the given rank");
        return r;
    }
    if let Err(e) = t.validate() {
        r.push(e.to_string());
        return r;
    }
    if t.vertices.iter().any(|v| v.genus != 0) {
        r.push("genus must be 0");
    }
    if t.legs.len() != 1 {
        r.push("exactly one leg required");
    } else {
        let l = &t.legs[0];
        if !skeleton.contains(&l.cone) {
            r.push("leg cone not in the skeleton");
        }
        if is_zero(&l.u) {
            r.push("u_τ ≠ 0 fails");
        }
    }
    match is_balanced(t) {
        Ok(false) => r.push("type is not balanced"),
        Err(e) => r.push(e.to_string()),
        Ok(true) => {}
    }
    match moduli_cone(t) {
        Ok(None) => r.push("type is not realizable"),
        Err(e) => r.push(e.to_string()),
        Ok(Some(m)) => {
            if m.dim() + 2 != n {
                r.push(format!("moduli dimension {} is not n−2", m.dim()));
            }
            if t.legs.len() == 1 {
                match leg_image(t, &m) {
                    Ok(c) if c.dim() + 1 == n => {}
                    Ok(c) => r.push(format!("leg sweeps dimension {}, not n−1", c.dim())),
                    Err(e) => r.push(e.to_string()),
                }
            }
        }
    }
    r
}

fn leg_columns(t: &TropicalType, m: &crate::tropical::ModuliCone) -> Vec<IVec> {
    let l = &t.legs[0];
    let mut cols = m.positions[l.vertex].columns();
    cols.push(l.u.clone());
    cols
}

fn leg_image(t: &TropicalType, m: &crate::tropical::ModuliCone) -> Result<LatticeCone> {
    let n = t.ambient()?;
    let h = &m.positions[t.legs[0].vertex];
    let mut gens: Vec<IVec> = m.cone.generators().iter().map(|g| h.apply(g)).collect();
    gens.push(t.legs[0].u.clone());
    LatticeCone::from_generators(n, &gens)
}

/// k_τ = |coker(Λ_{τ_out} → Λ_{σ(L_out)})_tors|.
pub fn kappa(t: &TropicalType) -> Result<BigInt> {
    if t.legs.len() != 1 {
        return semantic("kappa needs a type with one leg");
    }
    let m = moduli_cone(t)?.ok_or_else(|| Error::Semantic("type is not realizable".into()))?;
    let sigma = t.target.cone(t.legs[0].cone);
    let basis = sigma.lattice_basis()?;
    let k = basis.len();
    let n = t.ambient()?;
    let bcols: Vec<IVec> = (0..n).map(|i| basis.iter().map(|b| b[i]).collect()).collect();
    let mut cols = vec![];
    for c in leg_columns(t, &m) {
        let x = coords_in_basis(&bcols, &to_rvec(&c), k)
            .ok_or_else(|| Error::Semantic("leg leaves the span of its cone".into()))?;
        cols.push(
            x.iter()
                .map(|v| v.to_integer().to_i64().ok_or_else(|| Error::Overflow("kappa".into())))
                .collect::<Result<IVec>>()?,
        );
    }
    Ok(smith_torsion(&LatticeMap::from_columns(&cols, k)).torsion_order)
}

/// k_τ N_τ = k_γ Σ N_γ, exactly.
pub fn verify_wall_relation(k_tau: &BigInt, n_tau: &Rat, k_gamma: &BigInt, n_gammas: &[Rat]) -> bool {
    let sum: Rat = n_gammas.iter().sum();
    Rat::from_integer(k_tau.clone()) * n_tau == Rat::from_integer(k_gamma.clone()) * sum
}

/// Pushes supports through the subdivision and classes through `pf`, then
/// merges walls with equal support. The upstairs ideal must be pf^{-1} of
/// the downstairs one.
pub fn pushforward_diagram(
    d: &ScatteringDiagram,
    s: &Subdivision,
    pf: &MonoidHom,
    ring: &Arc<SeriesRing>,
    skeleton: &[ConeId],
) -> Result<ScatteringDiagram> {
    if *d.target != **s.source() {
        return invalid("diagram does not live on the subdivision's source");
    }
    let pulled = ideal_preimage(pf, &ring.ideal)?;
    let same = pulled.gens.iter().all(|g| d.ring.ideal.contains(g)) && d.ring.ideal.gens.iter().all(|g| pulled.contains(g));
    if !same {
        return Err(Error::Ideal("upstairs ideal is not the preimage of the downstairs ideal".into()));
    }
    let mut walls = vec![];
    for w in &d.walls {
        let c = d
            .target
            .carrier_of_cone(&w.support)
            .ok_or_else(|| Error::Semantic("wall support not in the complex".into()))?;
        let (_, map) = &s.map.assign[c];
        let support = w.support.image(map)?;
        if support.dim() + 1 != ring.base_rank {
            return semantic("support image not codimension-1");
        }
        walls.push(Wall { support, direction: map.apply(&w.direction), function: w.function.push(map, pf, ring)? });
    }
    ScatteringDiagram::new(s.target().clone(), skeleton.to_vec(), ring.clone(), walls)?.merged()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub support: LatticeCone,
    pub monomial: IVec,
    pub class: IVec,
    pub left: Rat,
    pub right: Rat,
}

/// Equal wall functions on a common refinement of the supports. On failure
/// the first differing cell and monomial is returned.
pub fn diagrams_equivalent(d1: &ScatteringDiagram, d2: &ScatteringDiagram) -> Result<Option<Witness>> {
    if *d1.ring != *d2.ring || *d1.target != *d2.target {
        return invalid("diagrams live on different targets or rings");
    }
    let a = d1.merged()?;
    let b = d2.merged()?;
    // group supports by their hyperplane
    let mut planes: BTreeMap<Vec<IVec>, Vec<&LatticeCone>> = BTreeMap::new();
    for w in a.walls.iter().chain(&b.walls) {
        planes.entry(w.support.equations().to_vec()).or_default().push(&w.support);
    }
    let n = d1.ring.base_rank;
    let mut cells: Vec<LatticeCone> = vec![];
    for (_, sup) in planes {
        let mut cuts: Vec<IVec> = sup.iter().flat_map(|c| c.facets().iter().cloned()).collect();
        cuts.sort();
        cuts.dedup();
        let mut pieces: Vec<LatticeCone> = sup.iter().map(|c| (*c).clone()).collect();
        for f in &cuts {
            let mut next = vec![];
            for p in pieces {
                for g in [f.clone(), neg(f)] {
                    let h = LatticeCone::from_inequalities(n, &[g], &[])?;
                    let q = p.intersect(&h)?;
                    if q.dim() == p.dim() {
                        next.push(q);
                    }
                }
            }
            next.sort();
            next.dedup();
            pieces = next;
        }
        cells.extend(pieces);
    }
    cells.sort();
    cells.dedup();
    let on = |d: &ScatteringDiagram, c: &LatticeCone| -> Result<TruncatedSeries> {
        let mut f = TruncatedSeries::one(&d.ring);
        for w in &d.walls {
            if w.support.contains_cone(c) {
                f = f.mul(&w.function)?;
            }
        }
        Ok(f)
    };
    for c in cells {
        let (f, g) = (on(&a, &c)?, on(&b, &c)?);
        if f == g {
            continue;
        }
        let mut keys: Vec<(IVec, IVec)> = f.terms().chain(g.terms()).map(|(m, a, _)| (m.clone(), a.clone())).collect();
        keys.sort();
        keys.dedup();
        for (m, k) in keys {
            let (x, y) = (f.coefficient(&m, &k), g.coefficient(&m, &k));
            if x != y {
                return Ok(Some(Witness { support: c, monomial: m, class: k, left: x, right: y }));
            }
        }
    }
    Ok(None)
}

fn ray_table(a: &[(IVec, Rat)]) -> Result<BTreeMap<IVec, Rat>> {
    let mut t = BTreeMap::new();
    for (r, x) in a {
        if x.is_negative() {
            return semantic("negative coefficient");
        }
        t.insert(crate::num::primitive(r), x.clone());
    }
    Ok(t)
}

/// Cones all of whose rays carry coefficient zero.
pub fn skeleton_from_coefficients(fan: &ConeComplex, a: &[(IVec, Rat)]) -> Result<Vec<ConeId>> {
    if !fan.is_embedded() {
        return invalid("skeleton needs an embedded fan");
    }
    let t = ray_table(a)?;
    let mut out = vec![];
    for (i, c) in fan.cones().iter().enumerate() {
        let mut good = true;
        for r in c.rays() {
            match t.get(r) {
                Some(x) => good &= x.is_zero(),
                None => return invalid(format!("no coefficient for ray {r:?}")),
            }
        }
        if good {
            out.push(i);
        }
    }
    Ok(out)
}

/// Coefficients of the pulled back divisor Σ a_i D_i on every ray of the
/// refined fan: a new ray gets Σ a_i ψ_i(r).
pub fn pullback_coefficients(s: &Subdivision, a: &[(IVec, Rat)]) -> Result<Vec<(IVec, Rat)>> {
    let t = ray_table(a)?;
    let src = s.source();
    let tgt = s.target();
    let n = tgt.ambient().ok_or_else(|| Error::Invalid("pullback needs embedded fans".into()))?;
    let mut out = vec![];
    for (i, c) in src.cones().iter().enumerate() {
        let Some(r) = c.as_ray() else { continue };
        let (t0, map) = &s.map.assign[i];
        let img = map.apply(r);
        let base = tgt.cone(*t0);
        if !base.is_simplicial() || !base.is_pointed() {
            return semantic("ψ not determined");
        }
        let rays = base.rays();
        let cols: Vec<IVec> = (0..n).map(|k| rays.iter().map(|v| v[k]).collect()).collect();
        let lam = coords_in_basis(&cols, &to_rvec(&img), rays.len())
            .ok_or_else(|| Error::Semantic("ray outside its carrier".into()))?;
        let mut x = Rat::zero();
        for (v, l) in rays.iter().zip(&lam) {
            let ai = t.get(v).ok_or_else(|| Error::Invalid(format!("no coefficient for ray {v:?}")))?;
            x += ai * l;
        }
        out.push((r.clone(), x));
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::ConeComplex;
    use crate::fixtures::{blowup_subdivision, cone_id, p1p1};
    use crate::monoid::MonoidIdeal;
    use crate::num::ratio;
    use crate::scattering::series::{wall_function, CurveClassMonoid};
    use crate::tropical::{Leg, Vertex};
    use num_traits::One;

    fn fan2() -> Arc<ConeComplex> {
        p1p1()
    }

    fn wall_at_origin(k: &Arc<ConeComplex>, u: IVec, legs: usize) -> TropicalType {
        let ray = k.carrier_of_cone(&LatticeCone::from_generators(2, &[u.clone()]).unwrap()).unwrap();
        TropicalType {
            target: k.clone(),
            vertices: vec![Vertex { genus: 0, cone: cone_id(k, &[]), degree: Some(if legs == 1 { u.clone() } else { vec![0, 0] }) }],
            edges: vec![],
            legs: (0..legs)
                .map(|i| Leg { vertex: 0, cone: ray, u: if i == 0 { u.clone() } else { neg(&u) }, punctured: true })
                .collect(),
        }
    }

    #[test]
    fn wall_type_examples() {
        let k = fan2();
        let all: Vec<ConeId> = (0..k.len()).collect();
        assert!(validate_wall_type(&wall_at_origin(&k, vec![1, 0], 1), &all, 2).is_valid());
        let mut t = wall_at_origin(&k, vec![1, 0], 1);
        t.legs[0].u = vec![0, 0];
        t.vertices[0].degree = Some(vec![0, 0]);
        assert!(validate_wall_type(&t, &all, 2).mentions("u_τ ≠ 0"));
        assert!(validate_wall_type(&wall_at_origin(&k, vec![1, 0], 2), &all, 2).mentions("one leg"));
    }

    #[test]
    fn kappa_examples() {
        let k = fan2();
        assert_eq!(kappa(&wall_at_origin(&k, vec![1, 0], 1)).unwrap(), BigInt::one());
        assert_eq!(kappa(&wall_at_origin(&k, vec![2, 0], 1)).unwrap(), BigInt::from(2));
    }

    #[test]
    fn wall_relation_examples() {
        let one = BigInt::one();
        assert!(verify_wall_relation(&one, &Rat::from_integer(2.into()), &BigInt::from(2), &[Rat::one()]));
        assert!(verify_wall_relation(&one, &Rat::one(), &BigInt::from(3), &[ratio(1, 6), ratio(1, 6)]));
        assert!(!verify_wall_relation(&one, &Rat::one(), &BigInt::from(2), &[Rat::one()]));
    }

    #[test]
    fn skeleton_and_pullback() {
        let k = fan2();
        let z = |x: i64| Rat::from_integer(x.into());
        let rays = [vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]];
        let a0: Vec<(IVec, Rat)> = rays.iter().map(|r| (r.clone(), z(0))).collect();
        assert_eq!(skeleton_from_coefficients(&k, &a0).unwrap().len(), k.len());
        let mut a1 = a0.clone();
        a1[3].1 = z(1);
        let sk = skeleton_from_coefficients(&k, &a1).unwrap();
        assert_eq!(sk.len(), k.len() - 3);
        let ap: Vec<(IVec, Rat)> = rays.iter().map(|r| (r.clone(), z(1))).collect();
        assert_eq!(skeleton_from_coefficients(&k, &ap).unwrap(), vec![cone_id(&k, &[])]);
        let mut neg_a = a0.clone();
        neg_a[0].1 = z(-1);
        assert!(skeleton_from_coefficients(&k, &neg_a).is_err());

        let s = blowup_subdivision();
        let e = |a: &[(IVec, Rat)]| {
            pullback_coefficients(&s, a).unwrap().into_iter().find(|(r, _)| r == &vec![1, 1]).unwrap().1
        };
        assert_eq!(e(&a0), z(0));
        let mut b = a0.clone();
        b[0].1 = z(1);
        assert_eq!(e(&b), z(1));
        let rays12 = vec![vec![1, 0], vec![1, 2], vec![0, 1], vec![-1, 0], vec![0, -1]];
        let fine = Arc::new(
            ConeComplex::from_rays(2, &rays12, &[vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 4], vec![4, 0]]).unwrap(),
        );
        let s12 = Subdivision::refinement(k.clone(), fine).unwrap();
        let mut c = a0.clone();
        c[0].1 = z(1);
        c[1].1 = z(1);
        let got = pullback_coefficients(&s12, &c).unwrap();
        assert_eq!(got.iter().find(|(r, _)| r == &vec![1, 2]).unwrap().1, z(3));
    }

    fn ring1(kill: i64) -> Arc<SeriesRing> {
        let cm = CurveClassMonoid::new("Q", 1, &[vec![1]]).unwrap();
        let i = MonoidIdeal::new(cm.effective.clone(), &[vec![kill]]).unwrap();
        SeriesRing::new(2, cm, i).unwrap()
    }

    #[test]
    fn equivalence_and_pushforward() {
        let s = blowup_subdivision();
        let up = s.source().clone();
        let down = s.target().clone();
        let r = ring1(2);
        let f = wall_function(1, &Rat::one(), &[1, 1], &[1], &r).unwrap();
        let diag = |k: &Arc<ConeComplex>, walls: Vec<Wall>| {
            ScatteringDiagram::new(k.clone(), (0..k.len()).collect(), r.clone(), walls).unwrap()
        };
        let w = |gens: &[&[i64]], f: &TruncatedSeries| Wall {
            support: LatticeCone::of(gens),
            direction: vec![1, 1],
            function: f.clone(),
        };
        // the wall on the exceptional ray lands inside the first quadrant
        let d = diag(&up, vec![w(&[&[1, 1]], &f)]);
        let id = MonoidHom::identity(&r.classes.effective);
        let p = pushforward_diagram(&d, &s, &id, &r, &(0..down.len()).collect::<Vec<_>>()).unwrap();
        assert_eq!(p.walls.len(), 1);
        assert_eq!(p.walls[0].support, LatticeCone::of(&[&[1, 1]]));
        assert!(diagrams_equivalent(&p, &diag(&down, vec![w(&[&[1, 1]], &f)])).unwrap().is_none());

        // merging two walls on the same support
        let d2 = diag(&up, vec![w(&[&[1, 1]], &f), w(&[&[1, 1]], &f)]);
        let two = TruncatedSeries::from_terms(
            &r,
            &[(vec![0, 0], vec![0], Rat::one()), (vec![-1, -1], vec![1], Rat::from_integer(2.into()))],
        )
        .unwrap();
        let p2 = pushforward_diagram(&d2, &s, &id, &r, &(0..down.len()).collect::<Vec<_>>()).unwrap();
        assert_eq!(p2.walls.len(), 1);
        assert_eq!(p2.walls[0].function, two);

        // a perturbed coefficient is caught
        let bad = diag(&down, vec![w(&[&[1, 1]], &two)]);
        let wit = diagrams_equivalent(&p, &bad).unwrap().unwrap();
        assert_eq!(wit.monomial, vec![-1, -1]);
        assert_eq!((wit.left, wit.right), (Rat::one(), Rat::from_integer(2.into())));
    }

    #[test]
    fn split_support_is_equivalent() {
        let k = Arc::new(ConeComplex::fan(3, &[LatticeCone::of(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])]).unwrap());
        let cm = CurveClassMonoid::new("Q", 1, &[vec![1]]).unwrap();
        let i = MonoidIdeal::new(cm.effective.clone(), &[vec![3]]).unwrap();
        let r = SeriesRing::new(3, cm, i).unwrap();
        let f = wall_function(1, &ratio(1, 2), &[-1, 0, 0], &[1], &r).unwrap();
        let g = wall_function(2, &ratio(1, 3), &[-1, 0, 0], &[1], &r).unwrap();
        let sk: Vec<ConeId> = (0..k.len()).collect();
        let w = |gens: &[&[i64]], f: &TruncatedSeries| Wall { support: LatticeCone::of(gens), direction: vec![1, 0, 0], function: f.clone() };
        let whole = ScatteringDiagram::new(k.clone(), sk.clone(), r.clone(), vec![w(&[&[1, 0, 0], &[0, 1, 0]], &f)]).unwrap();
        let split = ScatteringDiagram::new(
            k.clone(),
            sk.clone(),
            r.clone(),
            vec![w(&[&[1, 0, 0], &[1, 1, 0]], &f), w(&[&[1, 1, 0], &[0, 1, 0]], &f)],
        )
        .unwrap();
        assert!(diagrams_equivalent(&whole, &split).unwrap().is_none());
        assert!(diagrams_equivalent(&whole, &whole).unwrap().is_none());
        let uneven = ScatteringDiagram::new(
            k.clone(),
            sk,
            r.clone(),
            vec![w(&[&[1, 0, 0], &[1, 1, 0]], &f), w(&[&[1, 1, 0], &[0, 1, 0]], &g)],
        )
        .unwrap();
        let wit = diagrams_equivalent(&whole, &uneven).unwrap().unwrap();
        assert_eq!(wit.support, LatticeCone::of(&[&[1, 1, 0], &[0, 1, 0]]));
    }
}
