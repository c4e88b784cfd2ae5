//! The universal moduli cone of a tropical type and its universal family.

use super::TropicalType;
use crate::complex::{ConeComplex, ConeId, FaceInclusion, PLMap};
use crate::cone::LatticeCone;
use crate::error::{semantic, Result};
use crate::lattice::LatticeMap;
use crate::linalg::int_kernel;
use crate::num::{dot, IVec};
use std::sync::Arc;

/// Which part of the curve a cone of the universal family sweeps out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyCell {
    Vertex(usize),
    Edge(usize),
    Leg(usize),
}

#[derive(Debug, Clone)]
pub struct ModuliCone {
    pub ty: TropicalType,
    /// The cone τ in Z^d, where Z^d is the lattice of integral vertex
    /// positions and edge lengths solving the type's linear conditions.
    pub cone: LatticeCone,
    /// h_v : Z^d → Z^n.
    pub positions: Vec<LatticeMap>,
    /// ℓ_e as a functional on Z^d.
    pub lengths: Vec<IVec>,
    /// Universal family Γ_τ → τ: one cone per vertex, edge and leg, each in
    /// its own coordinates (y, t).
    pub family: Arc<ConeComplex>,
    pub cells: Vec<FamilyCell>,
    pub family_map: PLMap,
    /// τ with its faces, embedded in Z^d.
    pub base: Arc<ConeComplex>,
    pub projection: PLMap,
}

impl ModuliCone {
    pub fn dim(&self) -> usize {
        self.cone.dim()
    }
    pub fn lattice_rank(&self) -> usize {
        self.cone.ambient()
    }
    pub fn base_id(&self) -> ConeId {
        self.base.id_of(&self.cone).expect("τ is a cone of its own base")
    }
}

fn extend(f: &[i64], last: i64) -> IVec {
    let mut v = f.to_vec();
    v.push(last);
    v
}

/// The solution cone of the type's position/length system, or None when
/// no point realizes the type exactly (strict conditions infeasible).
pub fn moduli_cone(t: &TropicalType) -> Result<Option<ModuliCone>> {
    t.validate()?;
    let n = t.ambient()?;
    let tgt = &t.target;
    if t.edges.iter().any(|e| e.tail == e.head) {
        return semantic("loops are not supported in universal families");
    }
    let nv = t.vertices.len();
    let ne = t.edges.len();
    let nvar = n * nv + ne;
    let mut rows: Vec<IVec> = vec![];
    for (v, vert) in t.vertices.iter().enumerate() {
        for eq in tgt.cone(vert.cone).equations() {
            let mut r = vec![0; nvar];
            r[v * n..(v + 1) * n].copy_from_slice(eq);
            rows.push(r);
        }
    }
    for (k, e) in t.edges.iter().enumerate() {
        for i in 0..n {
            let mut r = vec![0; nvar];
            r[e.head * n + i] += 1;
            r[e.tail * n + i] -= 1;
            r[n * nv + k] = -e.u[i];
            rows.push(r);
        }
    }
    let kernel = int_kernel(&rows, nvar)?;
    let d = kernel.len();
    let positions: Vec<LatticeMap> = (0..nv)
        .map(|v| {
            let m: Vec<IVec> = (0..n).map(|i| kernel.iter().map(|kj| kj[v * n + i]).collect()).collect();
            LatticeMap::new(m, d, n)
        })
        .collect::<Result<_>>()?;
    let lengths: Vec<IVec> = (0..ne).map(|k| kernel.iter().map(|kj| kj[n * nv + k]).collect()).collect();

    let mut ineqs: Vec<IVec> = vec![];
    for (v, vert) in t.vertices.iter().enumerate() {
        for f in tgt.cone(vert.cone).facets() {
            ineqs.push(positions[v].pullback(f));
        }
    }
    ineqs.extend(lengths.iter().cloned());
    let cone = LatticeCone::from_inequalities(d, &ineqs, &[])?;

    // strict conditions
    let mut strict = ineqs.clone();
    for e in &t.edges {
        for f in tgt.cone(e.cone).facets() {
            let a = positions[e.tail].pullback(f);
            let b = positions[e.head].pullback(f);
            strict.push(a.iter().zip(&b).map(|(x, y)| x + y).collect());
        }
    }
    for l in &t.legs {
        let lc = tgt.cone(l.cone);
        let vc = tgt.cone(t.vertices[l.vertex].cone);
        for f in lc.facets() {
            if vc.generators().iter().all(|g| dot(f, g) == 0) && dot(f, &l.u) <= 0 {
                return Ok(None);
            }
        }
        if !l.punctured && !lc.contains_int(&l.u, false) {
            return Ok(None);
        }
    }
    let gens = cone.generators();
    if !strict.iter().all(|g| gens.iter().any(|r| dot(g, r) > 0)) {
        return Ok(None);
    }

    // universal family
    let base = Arc::new(ConeComplex::single(&cone)?);
    let tau_id = base.id_of(&cone).expect("τ in its base");
    let id_d = LatticeMap::identity(d);
    let mut pad: Vec<IVec> = (0..d).map(|i| id_d.matrix[i].clone()).collect();
    pad.push(vec![0; d]);
    let drop_t = LatticeMap::new(
        (0..d).map(|i| extend(&id_d.matrix[i], 0)).collect(),
        d + 1,
        d,
    )?;
    let tau_ext: Vec<IVec> = cone.facets().iter().map(|f| extend(f, 0)).collect();
    let t_pos = extend(&vec![0; d], 1);
    let mut cones = vec![];
    let mut cells = vec![];
    let mut fmap = vec![];
    let mut proj = vec![];
    for (v, vert) in t.vertices.iter().enumerate() {
        cones.push(cone.clone());
        cells.push(FamilyCell::Vertex(v));
        fmap.push((vert.cone, positions[v].clone()));
        proj.push((tau_id, id_d.clone()));
    }
    let with_t = |h: &LatticeMap, u: &IVec| -> Result<LatticeMap> {
        LatticeMap::new((0..n).map(|i| extend(&h.matrix[i], u[i])).collect(), d + 1, n)
    };
    for (k, e) in t.edges.iter().enumerate() {
        let mut ie = tau_ext.clone();
        ie.push(t_pos.clone());
        ie.push(extend(&lengths[k], -1));
        cones.push(LatticeCone::from_inequalities(d + 1, &ie, &[])?);
        cells.push(FamilyCell::Edge(k));
        fmap.push((e.cone, with_t(&positions[e.tail], &e.u)?));
        proj.push((tau_id, drop_t.clone()));
    }
    for (k, l) in t.legs.iter().enumerate() {
        let mut il = tau_ext.clone();
        il.push(t_pos.clone());
        let h = &positions[l.vertex];
        for f in tgt.cone(l.cone).facets() {
            il.push(extend(&h.pullback(f), dot(f, &l.u)));
        }
        cones.push(LatticeCone::from_inequalities(d + 1, &il, &[])?);
        cells.push(FamilyCell::Leg(k));
        fmap.push((l.cone, with_t(h, &l.u)?));
        proj.push((tau_id, drop_t.clone()));
    }
    let mut faces = vec![];
    for i in 0..cones.len() {
        faces.push(FaceInclusion { small: i, big: i, map: LatticeMap::identity(cones[i].ambient()) });
    }
    let at_zero = LatticeMap::new(pad.clone(), d, d + 1)?;
    for (k, e) in t.edges.iter().enumerate() {
        let big = nv + k;
        faces.push(FaceInclusion { small: e.tail, big, map: at_zero.clone() });
        let mut m = pad.clone();
        m[d] = lengths[k].clone();
        faces.push(FaceInclusion { small: e.head, big, map: LatticeMap::new(m, d, d + 1)? });
    }
    for (k, l) in t.legs.iter().enumerate() {
        faces.push(FaceInclusion { small: l.vertex, big: nv + ne + k, map: at_zero.clone() });
    }
    let family = Arc::new(ConeComplex::new(cones, faces, None));
    let family_map = PLMap { source: family.clone(), target: tgt.clone(), assign: fmap };
    let projection = PLMap { source: family.clone(), target: base.clone(), assign: proj };
    Ok(Some(ModuliCone {
        ty: t.clone(),
        cone,
        positions,
        lengths,
        family,
        cells,
        family_map,
        base,
        projection,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{cone_id, p1p1, tau, tau_prime};
    use crate::tropical::{is_balanced, Leg, Vertex};

    #[test]
    fn p1p1_tau_is_a_ray() {
        let k = p1p1();
        let t = tau(&k);
        assert!(is_balanced(&t).unwrap());
        let m = moduli_cone(&t).unwrap().unwrap();
        assert_eq!(m.dim(), 1);
        assert_eq!(m.lattice_rank(), 1);
        assert!(m.family_map.validate().is_valid());
        assert!(m.projection.validate().is_valid());
    }

    #[test]
    fn p1p1_tau_prime_is_2d() {
        let k = p1p1();
        let m = moduli_cone(&tau_prime(&k)).unwrap().unwrap();
        assert_eq!(m.dim(), 2);
        assert!(m.cone.is_simplicial());
        assert!(m.family_map.validate().is_valid());
    }

    #[test]
    fn vertex_at_origin_is_a_point() {
        let k = p1p1();
        let z = cone_id(&k, &[]);
        let e1 = cone_id(&k, &[&[1, 0]]);
        let e2 = cone_id(&k, &[&[0, 1]]);
        let q3 = cone_id(&k, &[&[-1, 0], &[0, -1]]);
        let t = TropicalType {
            target: k.clone(),
            vertices: vec![Vertex { genus: 0, cone: z, degree: None }],
            edges: vec![],
            legs: vec![
                Leg { vertex: 0, cone: e1, u: vec![2, 0], punctured: false },
                Leg { vertex: 0, cone: e2, u: vec![0, 1], punctured: false },
                Leg { vertex: 0, cone: q3, u: vec![-2, -1], punctured: false },
            ],
        };
        let m = moduli_cone(&t).unwrap().unwrap();
        assert_eq!(m.dim(), 0);
    }

    #[test]
    fn forced_onto_ray_is_unrealizable() {
        // vertex claims the open quadrant but a vertical edge of direction
        // (0,-1) with head on D_2 = ⟨e2⟩ forces x = 0
        let k = p1p1();
        let q1 = cone_id(&k, &[&[1, 0], &[0, 1]]);
        let d2 = cone_id(&k, &[&[0, 1]]);
        let t = TropicalType {
            target: k.clone(),
            vertices: vec![
                Vertex { genus: 0, cone: q1, degree: None },
                Vertex { genus: 0, cone: d2, degree: None },
            ],
            edges: vec![crate::tropical::Edge { tail: 0, head: 1, cone: q1, u: vec![0, -1] }],
            legs: vec![],
        };
        assert!(moduli_cone(&t).unwrap().is_none());
    }
}
