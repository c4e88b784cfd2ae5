//! Wall-type instances on the 3D orthant cut by one stellar ray in the
//! ⟨e1, e2⟩ face, shared by the core tests and the acceptance target.
#![allow(dead_code)]

use num_bigint::BigInt;
use std::sync::Arc;
use troplift_core::complex::{ConeComplex, Subdivision};
use troplift_core::fixtures::cone_id;
use troplift_core::scattering::{kappa, validate_wall_type};
use troplift_core::tropical::{enumerate_lifts, lattice_index, moduli_cone, Leg, TropicalType, Vertex};
use troplift_core::LatticeCone;

pub fn orthant3() -> Arc<ConeComplex> {
    Arc::new(ConeComplex::fan(3, &[LatticeCone::of(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])]).unwrap())
}

pub fn stellar3(p: i64, q: i64) -> Arc<ConeComplex> {
    Arc::new(
        ConeComplex::fan(
            3,
            &[
                LatticeCone::of(&[&[1, 0, 0], &[p, q, 0], &[0, 0, 1]]),
                LatticeCone::of(&[&[p, q, 0], &[0, 1, 0], &[0, 0, 1]]),
            ],
        )
        .unwrap(),
    )
}

/// Vertex moving along e1 carrying the balancing defect, one leg u in ⟨e1, e2⟩.
pub fn wall_type(k: &Arc<ConeComplex>, a: i64, b: i64) -> TropicalType {
    TropicalType {
        target: k.clone(),
        vertices: vec![Vertex { genus: 0, cone: cone_id(k, &[&[1, 0, 0]]), degree: Some(vec![a, b, 0]) }],
        edges: vec![],
        legs: vec![Leg { vertex: 0, cone: cone_id(k, &[&[1, 0, 0], &[0, 1, 0]]), u: vec![a, b, 0], punctured: true }],
    }
}

/// Instances (a, b, p, q): r = (p, q, 0) strictly between e1 and u.
pub fn instances() -> Vec<(i64, i64, i64, i64)> {
    let mut out = vec![];
    for (a, b) in [(0, 1), (1, 1), (0, 2), (1, 2), (1, 3), (2, 1), (3, 2)] {
        for (p, q) in [(2, 1), (3, 1), (3, 2), (5, 2), (4, 1)] {
            if p * b - q * a > 0 {
                out.push((a, b, p, q));
            }
        }
    }
    out
}

pub struct WallCheck {
    pub k_tau: BigInt,
    /// (k_γ, lattice index) per lift.
    pub lifts: Vec<(BigInt, BigInt)>,
}

/// Both lifts of the instance must be wall types with k_γ / k_τ equal to
/// their lattice index.
pub fn check_wall_instance(a: i64, b: i64, p: i64, q: i64) -> Result<WallCheck, String> {
    let base = orthant3();
    let fine = stellar3(p, q);
    let s = Subdivision::refinement(base.clone(), fine.clone()).map_err(|e| e.to_string())?;
    let tau = wall_type(&base, a, b);
    let all: Vec<usize> = (0..base.len()).collect();
    let r = validate_wall_type(&tau, &all, 3);
    if !r.is_valid() {
        return Err(format!("base not a wall type: {:?}", r.violations));
    }
    let kt = kappa(&tau).map_err(|e| e.to_string())?;
    let m = moduli_cone(&tau).map_err(|e| e.to_string())?.ok_or("base not realizable")?;
    let lifts = enumerate_lifts(&m, &s).map_err(|e| e.to_string())?;
    if lifts.len() != 2 {
        return Err(format!("{} lifts, expected 2", lifts.len()));
    }
    let all_fine: Vec<usize> = (0..fine.len()).collect();
    let mut out = vec![];
    for l in &lifts {
        let r = validate_wall_type(&l.gamma, &all_fine, 3);
        if !r.is_valid() {
            return Err(format!("lift not a wall type: {:?}", r.violations));
        }
        let kg = kappa(&l.gamma).map_err(|e| e.to_string())?;
        let idx = lattice_index(l);
        if &kg % &kt != BigInt::from(0) || &kg / &kt != idx {
            return Err(format!("k_gamma {kg}, k_tau {kt}, m {idx}"));
        }
        out.push((kg, idx));
    }
    Ok(WallCheck { k_tau: kt, lifts: out })
}
