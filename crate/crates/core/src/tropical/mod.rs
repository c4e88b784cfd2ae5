//! Tropical types (G, σ, u, g) over an embedded target fan, their moduli
//! cones and universal families, and lifts through target subdivisions.

mod decorate;
mod degenerate;
mod lift;
mod moduli;

pub use decorate::{enumerate_decorated_lifts, DecoratedType};
pub use degenerate::{detect_degenerate_vertices, stabilize_type};
pub use lift::{
    enumerate_lifts, induced_subdivision, is_tropical_lift, lattice_index, lifts_over_stratum,
    recompute_moduli, Origin, StratumLifts, TropicalLift,
};
pub use moduli::{moduli_cone, FamilyCell, ModuliCone};

use crate::complex::{ConeComplex, ConeId};
use crate::error::{invalid, semantic, Result};
use crate::num::{add, neg, IVec};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub genus: u32,
    pub cone: ConeId,
    /// Balancing defect: outgoing contact orders at this vertex must sum to
    /// it. Zero unless the vertex carries a class with nonzero degree.
    pub degree: Option<IVec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub cone: ConeId,
    /// Contact order, pointing from tail to head.
    pub u: IVec,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Leg {
    pub vertex: usize,
    pub cone: ConeId,
    pub u: IVec,
    pub punctured: bool,
}

#[derive(Debug, Clone)]
pub struct TropicalType {
    pub target: Arc<ConeComplex>,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub legs: Vec<Leg>,
}

impl PartialEq for TropicalType {
    fn eq(&self, o: &Self) -> bool {
        (Arc::ptr_eq(&self.target, &o.target) || self.target == o.target)
            && self.vertices == o.vertices
            && self.edges == o.edges
            && self.legs == o.legs
    }
}

/// One flag of the graph at a vertex: an edge end or a leg, with the
/// contact order pointing away from the vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct Flag {
    pub kind: FlagKind,
    pub cone: ConeId,
    pub u_out: IVec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum FlagKind {
    Edge(usize),
    Leg(usize),
}

impl TropicalType {
    pub fn ambient(&self) -> Result<usize> {
        match self.target.ambient() {
            Some(n) => Ok(n),
            None => semantic("tropical types need an embedded target"),
        }
    }

    pub(crate) fn flags(&self, v: usize) -> Vec<Flag> {
        let mut out = vec![];
        for (i, e) in self.edges.iter().enumerate() {
            if e.tail == v {
                out.push(Flag { kind: FlagKind::Edge(i), cone: e.cone, u_out: e.u.clone() });
            }
            if e.head == v {
                out.push(Flag { kind: FlagKind::Edge(i), cone: e.cone, u_out: neg(&e.u) });
            }
        }
        for (i, l) in self.legs.iter().enumerate() {
            if l.vertex == v {
                out.push(Flag { kind: FlagKind::Leg(i), cone: l.cone, u_out: l.u.clone() });
            }
        }
        out
    }

    pub fn valence(&self, v: usize) -> usize {
        self.flags(v).len()
    }

    /// Structural checks: indices, connectivity, incidence of cones,
    /// contact orders tangent to their cones.
    pub fn validate(&self) -> Result<()> {
        let n = self.ambient()?;
        let nv = self.vertices.len();
        if nv == 0 {
            return invalid("type has no vertices");
        }
        let k = self.target.len();
        for v in &self.vertices {
            if v.cone >= k {
                return invalid("vertex cone out of range");
            }
            if v.degree.as_ref().is_some_and(|d| d.len() != n) {
                return invalid("vertex degree has the wrong length");
            }
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.tail >= nv || e.head >= nv || e.cone >= k || e.u.len() != n {
                return invalid(format!("edge {i} is malformed"));
            }
            for w in [e.tail, e.head] {
                if !self.target.is_face(self.vertices[w].cone, e.cone) {
                    return invalid(format!("edge {i}: vertex cone is not a face of the edge cone"));
                }
            }
            if !self.target.cone(e.cone).in_span_int(&e.u) {
                return invalid(format!("edge {i}: contact order not tangent to its cone"));
            }
            if e.u.iter().all(|&x| x == 0)
                && (self.vertices[e.tail].cone != e.cone || self.vertices[e.head].cone != e.cone)
            {
                return invalid(format!("edge {i}: zero contact order on a non-contracted edge"));
            }
        }
        for (i, l) in self.legs.iter().enumerate() {
            if l.vertex >= nv || l.cone >= k || l.u.len() != n {
                return invalid(format!("leg {i} is malformed"));
            }
            if !self.target.is_face(self.vertices[l.vertex].cone, l.cone) {
                return invalid(format!("leg {i}: vertex cone is not a face of the leg cone"));
            }
            if !self.target.cone(l.cone).in_span_int(&l.u) {
                return invalid(format!("leg {i}: contact order not tangent to its cone"));
            }
        }
        // connectivity
        let mut seen = vec![false; nv];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for e in &self.edges {
                for (a, b) in [(e.tail, e.head), (e.head, e.tail)] {
                    if a == v && !seen[b] {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return invalid("graph is not connected");
        }
        Ok(())
    }
}

/// Outgoing contact orders sum to the vertex degree (zero by default) at
/// every vertex, in the ambient lattice.
pub fn is_balanced(t: &TropicalType) -> Result<bool> {
    let n = match t.target.ambient() {
        Some(n) => n,
        None => return semantic("balancing requires embedding"),
    };
    for (v, vert) in t.vertices.iter().enumerate() {
        let mut s = vec![0i64; n];
        for f in t.flags(v) {
            s = add(&s, &f.u_out);
        }
        let d = vert.degree.clone().unwrap_or_else(|| vec![0; n]);
        if s != d {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Isomorphism of types with labelled legs and unlabelled vertices/edges;
/// returns the vertex bijection a → b.
pub fn type_isomorphism(a: &TropicalType, b: &TropicalType) -> Option<Vec<usize>> {
    if a.vertices.len() != b.vertices.len() || a.edges.len() != b.edges.len() || a.legs.len() != b.legs.len() {
        return None;
    }
    if !(Arc::ptr_eq(&a.target, &b.target) || a.target == b.target) {
        return None;
    }
    let inv = |t: &TropicalType, v: usize| {
        let mut f: Vec<(bool, ConeId, IVec)> = t
            .flags(v)
            .into_iter()
            .map(|f| (matches!(f.kind, FlagKind::Leg(_)), f.cone, f.u_out))
            .collect();
        f.sort();
        (t.vertices[v].genus, t.vertices[v].cone, t.vertices[v].degree.clone(), f)
    };
    let ia: Vec<_> = (0..a.vertices.len()).map(|v| inv(a, v)).collect();
    let ib: Vec<_> = (0..b.vertices.len()).map(|v| inv(b, v)).collect();
    let mut map = vec![usize::MAX; ia.len()];
    let mut used = vec![false; ib.len()];
    fn rec<I: PartialEq>(
        i: usize,
        a: &TropicalType,
        b: &TropicalType,
        ia: &[I],
        ib: &[I],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if i == ia.len() {
            let mut ea: Vec<(usize, usize, ConeId, IVec)> =
                a.edges.iter().map(|e| (map[e.tail], map[e.head], e.cone, e.u.clone())).collect();
            let mut eb: Vec<(usize, usize, ConeId, IVec)> =
                b.edges.iter().map(|e| (e.tail, e.head, e.cone, e.u.clone())).collect();
            // an edge may be stored reversed
            let norm = |v: &mut Vec<(usize, usize, ConeId, IVec)>| {
                for e in v.iter_mut() {
                    let r = (e.1, e.0, e.2, neg(&e.3));
                    if r < *e {
                        *e = r;
                    }
                }
                v.sort();
            };
            norm(&mut ea);
            norm(&mut eb);
            return ea == eb
                && a.legs.iter().zip(&b.legs).all(|(x, y)| {
                    map[x.vertex] == y.vertex && x.cone == y.cone && x.u == y.u && x.punctured == y.punctured
                });
        }
        for j in 0..ib.len() {
            if !used[j] && ia[i] == ib[j] {
                map[i] = j;
                used[j] = true;
                if rec(i + 1, a, b, ia, ib, map, used) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
    if rec(0, a, b, &ia, &ib, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}
