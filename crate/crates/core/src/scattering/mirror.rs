use super::series::CurveClassMonoid;
use crate::error::{invalid, semantic, Error, Result};
use crate::lattice::{smith_torsion, LatticeMap};
use crate::monoid::{ideal_preimage, radical_is_maximal, MonoidHom, MonoidIdeal};
use crate::num::{IVec, Rat};
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::{BTreeMap, BTreeSet};

/// Structure constants N^A_{p,q,r}, symmetric in p and q, with A outside
/// the truncation ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MirrorTable {
    pub classes: CurveClassMonoid,
    pub ideal: MonoidIdeal,
    pub points: BTreeSet<IVec>,
    constants: BTreeMap<(IVec, IVec, IVec, IVec), Rat>,
}

pub type Entry = (IVec, IVec, IVec, IVec, Rat);

fn ordered(p: &IVec, q: &IVec) -> (IVec, IVec) {
    if p <= q {
        (p.clone(), q.clone())
    } else {
        (q.clone(), p.clone())
    }
}

impl MirrorTable {
    pub fn new(classes: CurveClassMonoid, ideal: MonoidIdeal, points: &[IVec], entries: &[Entry]) -> Result<Self> {
        if !ideal.monoid.same_as(&classes.effective) {
            return invalid("truncation ideal lives on a different monoid");
        }
        if !radical_is_maximal(&ideal)? {
            return Err(Error::Ideal("ideal complement is infinite".into()));
        }
        let points: BTreeSet<IVec> = points.iter().cloned().collect();
        let mut constants = BTreeMap::new();
        for (p, q, r, a, n) in entries {
            for x in [p, q, r] {
                if !points.contains(x) {
                    return invalid(format!("unknown contact point {x:?}"));
                }
            }
            classes.check(a)?;
            if ideal.contains(a) || n.is_zero() {
                continue;
            }
            let (p, q) = ordered(p, q);
            let key = (p, q, r.clone(), a.clone());
            if let Some(old) = constants.insert(key, n.clone()) {
                if old != *n {
                    return invalid("conflicting entries for one structure constant");
                }
            }
        }
        Ok(MirrorTable { classes, ideal, points, constants })
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(IVec, IVec, IVec, IVec), &Rat)> {
        self.constants.iter()
    }

    pub fn get(&self, p: &IVec, q: &IVec, r: &IVec, a: &IVec) -> Rat {
        let (p, q) = ordered(p, q);
        self.constants.get(&(p, q, r.clone(), a.clone())).cloned().unwrap_or_else(Rat::zero)
    }
}

/// |coker(ev*)| for ev* : Z → Z.
pub fn multiplicity_ev(ev: &LatticeMap) -> Result<BigInt> {
    if ev.source.rank != 1 || ev.target.rank != 1 {
        return invalid("evaluation map must be Z → Z");
    }
    if ev.matrix[0][0] == 0 {
        return semantic("evaluation not integral");
    }
    Ok(smith_torsion(ev).torsion_order)
}

/// θ_p θ_q = Σ N^A_{p,q,r} θ_r z^A, as a map (r, A) → N.
pub fn mirror_product(t: &MirrorTable, p: &IVec, q: &IVec) -> Result<BTreeMap<(IVec, IVec), Rat>> {
    if !t.points.contains(p) || !t.points.contains(q) {
        return invalid("contact point missing from the table");
    }
    let (p, q) = ordered(p, q);
    Ok(t
        .constants
        .iter()
        .filter(|((a, b, _, _), _)| *a == p && *b == q)
        .map(|((_, _, r, a), n)| ((r.clone(), a.clone()), n.clone()))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableViolation {
    pub p: IVec,
    pub q: IVec,
    pub r: IVec,
    pub class: IVec,
    pub downstairs: Rat,
    pub pushed: Rat,
}

/// Checks N^A_{p,q,r} = Σ_{pf(A′) = A} N^{A′}_{p,q,r}; returns every
/// violating quadruple. Contact points are identified by label.
pub fn mirror_pushforward_check(up: &MirrorTable, down: &MirrorTable, pf: &MonoidHom) -> Result<Vec<TableViolation>> {
    if !pf.source.same_as(&up.classes.effective) || !pf.target.same_as(&down.classes.effective) {
        return invalid("class map does not match the tables");
    }
    let pulled = ideal_preimage(pf, &down.ideal)?;
    let same = pulled.gens.iter().all(|g| up.ideal.contains(g)) && up.ideal.gens.iter().all(|g| pulled.contains(g));
    if !same {
        return Err(Error::Ideal("ideal mismatch: upstairs ideal is not the preimage".into()));
    }
    let mut pushed: BTreeMap<(IVec, IVec, IVec, IVec), Rat> = BTreeMap::new();
    for ((p, q, r, a), n) in &up.constants {
        let b = pf.apply(a);
        if down.ideal.contains(&b) {
            continue;
        }
        *pushed.entry((p.clone(), q.clone(), r.clone(), b)).or_insert_with(Rat::zero) += n;
    }
    let keys: BTreeSet<_> = pushed.keys().chain(down.constants.keys()).cloned().collect();
    let mut bad = vec![];
    for k in keys {
        let x = down.constants.get(&k).cloned().unwrap_or_else(Rat::zero);
        let y = pushed.get(&k).cloned().unwrap_or_else(Rat::zero);
        if x != y {
            let (p, q, r, class) = k;
            bad.push(TableViolation { p, q, r, class, downstairs: x, pushed: y });
        }
    }
    Ok(bad)
}
