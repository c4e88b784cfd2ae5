//! Lattices Z^n, lattice maps, cokernels and integrality sublattices.

use crate::cone::LatticeCone;
use crate::error::{invalid, Result};
use crate::linalg::{self, det, hnf_basis, int_kernel};
use crate::num::{clear_denominators, mat_vec, transpose, IVec, RVec};
use num_bigint::BigInt;
use num_traits::{One, Signed};

/// A lattice of rank n, identified with Z^n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lattice {
    pub rank: usize,
}

impl Lattice {
    pub fn new(rank: usize) -> Self {
        Lattice { rank }
    }
}

/// Integer vector in a lattice. Plain `Vec<i64>`; the lattice is implied by context.
pub type LatticeVector = IVec;

/// Reduced rational vector.
pub type RationalVector = RVec;

/// An m×n integer matrix acting on column vectors of the source.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeMap {
    pub matrix: Vec<IVec>,
    pub source: Lattice,
    pub target: Lattice,
}

impl LatticeMap {
    pub fn new(matrix: Vec<IVec>, source: usize, target: usize) -> Result<Self> {
        if matrix.len() != target || matrix.iter().any(|r| r.len() != source) {
            return invalid(format!(
                "matrix shape does not match {target}x{source}"
            ));
        }
        Ok(LatticeMap { matrix, source: Lattice::new(source), target: Lattice::new(target) })
    }

    pub fn identity(n: usize) -> Self {
        LatticeMap {
            matrix: crate::num::identity(n),
            source: Lattice::new(n),
            target: Lattice::new(n),
        }
    }

    /// Builds the map from the images of the source basis vectors.
    pub fn from_columns(cols: &[IVec], target: usize) -> Self {
        let matrix = (0..target).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
        LatticeMap { matrix, source: Lattice::new(cols.len()), target: Lattice::new(target) }
    }

    pub fn apply(&self, v: &[i64]) -> IVec {
        if self.target.rank == 0 {
            return vec![];
        }
        mat_vec(&self.matrix, v)
    }

    pub fn apply_rat(&self, v: &[crate::num::Rat]) -> RVec {
        crate::num::mat_rvec(&self.matrix, v)
    }

    pub fn columns(&self) -> Vec<IVec> {
        transpose(&self.matrix, self.source.rank)
    }

    /// self ∘ other
    pub fn compose(&self, other: &LatticeMap) -> LatticeMap {
        let cols: Vec<IVec> = other.columns().iter().map(|c| self.apply(c)).collect();
        LatticeMap::from_columns(&cols, self.target.rank)
    }

    /// Dual map on functionals: row vector f ↦ f ∘ self.
    pub fn pullback(&self, f: &[i64]) -> IVec {
        (0..self.source.rank)
            .map(|j| (0..self.target.rank).map(|i| f[i] * self.matrix[i][j]).sum())
            .collect()
    }

    pub fn transpose(&self) -> LatticeMap {
        LatticeMap {
            matrix: transpose(&self.matrix, self.source.rank),
            source: self.target,
            target: self.source,
        }
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.matrix)
    }
}

/// Torsion order and free rank of a cokernel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cokernel {
    pub torsion_order: BigInt,
    pub free_rank: usize,
}

/// |coker(map)_tors| and rank of coker(map)_free.
pub fn smith_torsion(map: &LatticeMap) -> Cokernel {
    let n = map.target.rank;
    let divs = linalg::elementary_divisors(&map.matrix, map.source.rank);
    let torsion = divs.iter().fold(BigInt::one(), |a, d| a * d.abs());
    Cokernel { torsion_order: torsion, free_rank: n - divs.len() }
}

/// Basis (ambient coordinates) of the maximal sublattice of the cone's
/// lattice on which every functional is integral, and its index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sublattice {
    /// Basis vectors in ambient coordinates.
    pub basis: Vec<IVec>,
    pub index: BigInt,
}

pub fn integrality_sublattice(base: &LatticeCone, functions: &[RVec]) -> Result<Sublattice> {
    let n = base.ambient();
    for f in functions {
        if f.len() != n {
            return invalid("functional length does not match the lattice rank");
        }
    }
    // lattice of the cone: Z^n ∩ span(cone), basis as columns of bl
    let bl = base.lattice_basis()?;
    let k = bl.len();
    // pulled back functionals in the k basis coordinates
    let mut g_rows = vec![];
    let mut dens = vec![];
    for f in functions {
        let pulled: RVec = bl.iter().map(|b| crate::num::dot_rat(b, f)).collect();
        let (g, d) = clear_denominators(&pulled)?;
        if d != 1 {
            g_rows.push(g);
            dens.push(d);
        }
    }
    let r = g_rows.len();
    let sub_coords: Vec<IVec> = if r == 0 {
        crate::num::identity(k)
    } else {
        // {x : G x = D y} projected to x
        let system: Vec<IVec> = g_rows
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let mut row = g.clone();
                row.extend((0..r).map(|j| if i == j { -dens[i] } else { 0 }));
                row
            })
            .collect();
        let ker = int_kernel(&system, k + r)?;
        let proj: Vec<IVec> = ker.iter().map(|v| v[..k].to_vec()).collect();
        hnf_basis(&proj, k)?
    };
    let index = det(&sub_coords).abs();
    let basis = sub_coords
        .iter()
        .map(|c| {
            (0..n)
                .map(|i| c.iter().zip(&bl).map(|(a, b)| a * b[i]).sum())
                .collect()
        })
        .collect();
    Ok(Sublattice { basis, index })
}
