//! Small worked configurations shared by tests, benches and the CLI.

use crate::complex::{ConeComplex, ConeId, Subdivision};
use crate::cone::LatticeCone;
use crate::tropical::{Edge, Leg, TropicalType, Vertex};
use std::sync::Arc;

/// Id of the cone spanned by `gens` in an embedded complex.
pub fn cone_id(k: &ConeComplex, gens: &[&[i64]]) -> ConeId {
    let c = if gens.is_empty() {
        LatticeCone::zero(k.ambient().expect("embedded"))
    } else {
        LatticeCone::of(gens)
    };
    k.id_of(&c).unwrap_or_else(|| panic!("cone {gens:?} not in complex"))
}

/// Complete fan of P^1 x P^1: rays ±e1, ±e2 and the four quadrants.
pub fn p1p1() -> Arc<ConeComplex> {
    let rays = vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]];
    Arc::new(ConeComplex::from_rays(2, &rays, &[vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]]).unwrap())
}

/// P^1 x P^1 blown up at the torus fixed point of the first quadrant.
pub fn p1p1_blowup() -> Arc<ConeComplex> {
    let rays = vec![vec![1, 0], vec![1, 1], vec![0, 1], vec![-1, 0], vec![0, -1]];
    Arc::new(
        ConeComplex::from_rays(2, &rays, &[vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 4], vec![4, 0]]).unwrap(),
    )
}

pub fn blowup_subdivision() -> Subdivision {
    Subdivision::refinement(p1p1(), p1p1_blowup()).unwrap()
}

/// One vertex on the ray of D_1 = ⟨e1⟩ with four punctured legs: up into
/// the first quadrant, left and right along D_1, down into the fourth.
pub fn tau(k: &Arc<ConeComplex>) -> TropicalType {
    let d1 = cone_id(k, &[&[1, 0]]);
    let q1 = cone_id(k, &[&[1, 0], &[0, 1]]);
    let q4 = cone_id(k, &[&[1, 0], &[0, -1]]);
    TropicalType {
        target: k.clone(),
        vertices: vec![Vertex { genus: 0, cone: d1, degree: None }],
        edges: vec![],
        legs: vec![
            Leg { vertex: 0, cone: q1, u: vec![0, 1], punctured: true },
            Leg { vertex: 0, cone: d1, u: vec![-1, 0], punctured: true },
            Leg { vertex: 0, cone: d1, u: vec![1, 0], punctured: true },
            Leg { vertex: 0, cone: q4, u: vec![0, -1], punctured: true },
        ],
    }
}

/// A type with τ as a face: the vertex moves into the first quadrant at
/// (a, b) and sends a vertical edge of length b down to D_1, where the
/// downward leg now sits. Legs are listed in the same order as in `tau`.
pub fn tau_prime(k: &Arc<ConeComplex>) -> TropicalType {
    let d1 = cone_id(k, &[&[1, 0]]);
    let q1 = cone_id(k, &[&[1, 0], &[0, 1]]);
    let q4 = cone_id(k, &[&[1, 0], &[0, -1]]);
    TropicalType {
        target: k.clone(),
        vertices: vec![
            Vertex { genus: 0, cone: q1, degree: None },
            Vertex { genus: 0, cone: d1, degree: None },
        ],
        edges: vec![Edge { tail: 0, head: 1, cone: q1, u: vec![0, -1] }],
        legs: vec![
            Leg { vertex: 0, cone: q1, u: vec![0, 1], punctured: true },
            Leg { vertex: 0, cone: q1, u: vec![-1, 0], punctured: true },
            Leg { vertex: 0, cone: q1, u: vec![1, 0], punctured: true },
            Leg { vertex: 1, cone: q4, u: vec![0, -1], punctured: true },
        ],
    }
}
