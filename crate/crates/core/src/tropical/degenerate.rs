use super::decorate::DecoratedType;
use super::{Edge, FlagKind, TropicalType};
use crate::complex::Subdivision;
use crate::error::{invalid, Error, Result};
use crate::monoid::MonoidHom;
use crate::num::{add, is_zero};
use crate::scattering::CurveClassMonoid;

/// Contracted 1-valent vertices and unconstrained balanced 2-valent
/// vertices of a type on `s.source()`, judged after mapping to `s.target()`.
pub fn detect_degenerate_vertices(t: &TropicalType, s: &Subdivision) -> (Vec<usize>, Vec<usize>) {
    let carrier = |c: usize| s.map.assign[c].0;
    let push = |c: usize, u: &[i64]| s.map.assign[c].1.apply(u);
    let mut one = vec![];
    let mut two = vec![];
    for (v, vert) in t.vertices.iter().enumerate() {
        let flags = t.flags(v);
        match flags.as_slice() {
            [f] if is_zero(&f.u_out) => one.push(v),
            [f, g] => {
                if f.kind == g.kind {
                    continue; // a loop
                }
                let c = carrier(vert.cone);
                if carrier(f.cone) != c || carrier(g.cone) != c {
                    continue;
                }
                let sum = add(&push(f.cone, &f.u_out), &push(g.cone, &g.u_out));
                if is_zero(&sum) && vert.degree.as_ref().map_or(true, |d| is_zero(d)) {
                    two.push(v);
                }
            }
            _ => {}
        }
    }
    (one, two)
}

/// Pushes σ and u through the subdivision and classes through `pf`, then
/// deletes contracted 1-valent vertices and merges away balanced 2-valent
/// ones. With `keep_balanced_2valent`, a 2-valent vertex with nonzero class
/// survives.
pub fn stabilize_type(
    gamma: &DecoratedType,
    s: &Subdivision,
    pf: &MonoidHom,
    keep_balanced_2valent: bool,
) -> Result<DecoratedType> {
    let t = &gamma.ty;
    if t.target.as_ref() != s.source().as_ref() {
        return invalid("type does not live on the subdivision's source");
    }
    if pf.source.ambient() != gamma.classes.ambient() {
        return invalid("class pushforward has the wrong source");
    }
    let carrier = |c: usize| s.map.assign[c].0;
    let push = |c: usize, u: &[i64]| s.map.assign[c].1.apply(u);
    let mut ty = TropicalType {
        target: s.target().clone(),
        vertices: t
            .vertices
            .iter()
            .map(|v| super::Vertex { genus: v.genus, cone: carrier(v.cone), degree: v.degree.clone() })
            .collect(),
        edges: t
            .edges
            .iter()
            .map(|e| Edge { tail: e.tail, head: e.head, cone: carrier(e.cone), u: push(e.cone, &e.u) })
            .collect(),
        legs: t
            .legs
            .iter()
            .map(|l| super::Leg { vertex: l.vertex, cone: carrier(l.cone), u: push(l.cone, &l.u), punctured: l.punctured })
            .collect(),
    };
    let mut classes: Vec<_> = gamma.a.iter().map(|a| pf.apply(a)).collect();
    let id = Subdivision::identity(s.target().clone());
    loop {
        let (one, two) = detect_degenerate_vertices(&ty, &id);
        if let Some(&v) = one.first() {
            if ty.vertices.len() == 1 {
                break;
            }
            if !is_zero(&classes[v]) {
                return Err(Error::Semantic("nonzero class on deleted vertex".into()));
            }
            let f = ty.flags(v).remove(0);
            match f.kind {
                FlagKind::Edge(e) => {
                    ty.edges.remove(e);
                }
                FlagKind::Leg(l) => {
                    ty.legs.remove(l);
                }
            }
            remove_vertex(&mut ty, &mut classes, v);
            continue;
        }
        let pick = two.into_iter().find(|&v| {
            !(keep_balanced_2valent && !is_zero(&classes[v]))
                && ty.flags(v).iter().any(|f| matches!(f.kind, FlagKind::Edge(_)))
        });
        let Some(v) = pick else { break };
        let mut flags = ty.flags(v);
        flags.sort_by_key(|f| matches!(f.kind, FlagKind::Leg(_)));
        let (f, g) = (flags[0].clone(), flags[1].clone());
        let FlagKind::Edge(e1) = f.kind else { unreachable!() };
        let e = &ty.edges[e1];
        let w1 = if e.tail == v { e.head } else { e.tail };
        // the absorbing vertex collects the class and the degree
        classes[w1] = add(&classes[w1], &classes[v]);
        match g.kind {
            FlagKind::Edge(e2) => {
                let e = &ty.edges[e2];
                let w2 = if e.tail == v { e.head } else { e.tail };
                let cone = e.cone;
                ty.edges[e1] = Edge { tail: w1, head: w2, cone, u: g.u_out.clone() };
                ty.edges.remove(e2);
            }
            FlagKind::Leg(l) => {
                ty.legs[l].vertex = w1;
                ty.edges.remove(e1);
            }
        }
        remove_vertex(&mut ty, &mut classes, v);
    }
    let cm = CurveClassMonoid::from_monoid(&gamma.classes.name, pf.target.clone())?;
    DecoratedType::new(ty, cm, classes)
}

fn remove_vertex(ty: &mut TropicalType, classes: &mut Vec<crate::num::IVec>, v: usize) {
    ty.vertices.remove(v);
    classes.remove(v);
    let fix = |w: &mut usize| {
        if *w > v {
            *w -= 1
        }
    };
    for e in &mut ty.edges {
        fix(&mut e.tail);
        fix(&mut e.head);
    }
    for l in &mut ty.legs {
        fix(&mut l.vertex);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{blowup_subdivision, cone_id, p1p1, tau};
    use crate::lattice::LatticeMap;
    use crate::monoid::FineMonoid;
    use crate::tropical::{enumerate_lifts, is_balanced, moduli_cone, type_isomorphism, Vertex};

    fn blowup_classes() -> (CurveClassMonoid, CurveClassMonoid, MonoidHom) {
        // (L1, L2, E) upstairs, (L1, L2) downstairs
        let up = CurveClassMonoid::new("X~", 3, &[vec![0, 0, 1], vec![1, 0, -1], vec![0, 1, -1]]).unwrap();
        let down = CurveClassMonoid::new("X", 2, &[vec![1, 0], vec![0, 1]]).unwrap();
        let pf = MonoidHom::new(
            up.effective.clone(),
            down.effective.clone(),
            LatticeMap::new(vec![vec![1, 0, 0], vec![0, 1, 0]], 3, 2).unwrap(),
        )
        .unwrap();
        (up, down, pf)
    }

    #[test]
    fn maximal_lift_degeneracy_and_stabilization() {
        let k = p1p1();
        let s = blowup_subdivision();
        let m = moduli_cone(&tau(&k)).unwrap().unwrap();
        let lifts = enumerate_lifts(&m, &s).unwrap();
        let maxi = lifts.iter().find(|l| l.maximal).unwrap();
        let g = &maxi.gamma;
        let (one, two) = detect_degenerate_vertices(g, &s);
        assert!(one.is_empty());
        assert_eq!(two.len(), 1);
        assert_eq!(g.valence(two[0]), 2);
        assert_eq!(detect_degenerate_vertices(&tau(&k), &Subdivision::identity(k.clone())), (vec![], vec![]));

        let (up, _, pf) = blowup_classes();
        let mut a = vec![vec![0, 0, 0]; g.vertices.len()];
        let base_v = (0..g.vertices.len()).find(|v| !two.contains(v)).unwrap();
        a[base_v] = vec![1, 0, 0];
        a[two[0]] = vec![0, 0, 1]; // exceptional class pushes to zero
        let d = DecoratedType::new(g.clone(), up.clone(), a.clone()).unwrap();
        let st = stabilize_type(&d, &s, &pf, true).unwrap();
        assert!(type_isomorphism(&st.ty, &tau(&k)).is_some());
        assert_eq!(st.a, vec![vec![1, 0]]);
        assert!(is_balanced(&st.ty).unwrap());
        assert_eq!(detect_degenerate_vertices(&st.ty, &Subdivision::identity(k.clone())), (vec![], vec![]));

        // idempotent
        let id = MonoidHom::identity(&pf.target);
        let again = stabilize_type(&st, &Subdivision::identity(k.clone()), &id, false).unwrap();
        assert_eq!(again, st);

        // a class with nonzero image keeps the vertex when asked to
        a[two[0]] = vec![0, 1, -1];
        let d = DecoratedType::new(g.clone(), up.clone(), a.clone()).unwrap();
        let kept = stabilize_type(&d, &s, &pf, true).unwrap();
        assert_eq!(kept.ty.vertices.len(), 2);
        let merged = stabilize_type(&d, &s, &pf, false).unwrap();
        assert_eq!(merged.ty.vertices.len(), 1);
        assert_eq!(merged.a, vec![vec![1, 1]]);
    }

    #[test]
    fn contracted_one_valent_vertex() {
        let k = p1p1();
        let d1 = cone_id(&k, &[&[1, 0]]);
        let mut t = tau(&k);
        t.vertices.push(Vertex { genus: 0, cone: d1, degree: None });
        t.edges.push(Edge { tail: 0, head: 1, cone: d1, u: vec![0, 0] });
        let id = Subdivision::identity(k.clone());
        assert_eq!(detect_degenerate_vertices(&t, &id), (vec![1], vec![]));
        let n2 = FineMonoid::free(2);
        let cm = CurveClassMonoid::from_monoid("X", n2.clone()).unwrap();
        let pf = MonoidHom::identity(&n2);
        let d = DecoratedType::new(t.clone(), cm.clone(), vec![vec![1, 0], vec![0, 0]]).unwrap();
        let st = stabilize_type(&d, &id, &pf, false).unwrap();
        assert!(type_isomorphism(&st.ty, &tau(&k)).is_some());
        let bad = DecoratedType::new(t, cm, vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(
            stabilize_type(&bad, &id, &pf, false).unwrap_err(),
            Error::Semantic("nonzero class on deleted vertex".into())
        );
    }
}
