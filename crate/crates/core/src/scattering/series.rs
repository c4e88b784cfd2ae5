use crate::error::{invalid, semantic, Error, Result};
use crate::lattice::LatticeMap;
use crate::monoid::{radical_is_maximal, FineMonoid, MonoidHom, MonoidIdeal};
use crate::num::{add, is_zero, IVec, Rat};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Curve classes: H_2 modelled as Z^k with an effective submonoid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveClassMonoid {
    pub name: String,
    pub effective: FineMonoid,
}

impl CurveClassMonoid {
    pub fn new(name: &str, ambient: usize, gens: &[IVec]) -> Result<Self> {
        Self::from_monoid(name, FineMonoid::new(ambient, gens)?)
    }

    pub fn from_monoid(name: &str, effective: FineMonoid) -> Result<Self> {
        if !effective.is_sharp() {
            return semantic("effective cone not pointed");
        }
        Ok(CurveClassMonoid { name: name.to_string(), effective })
    }

    pub fn ambient(&self) -> usize {
        self.effective.ambient()
    }

    pub fn check(&self, a: &[i64]) -> Result<()> {
        if a.len() != self.ambient() {
            return invalid("curve class has the wrong length");
        }
        if !self.effective.contains(a) {
            return semantic(format!("class {a:?} is not effective"));
        }
        Ok(())
    }
}

/// Coefficient ring k[Z^r × Q]/I with Q \ I finite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesRing {
    pub base_rank: usize,
    pub classes: CurveClassMonoid,
    pub ideal: MonoidIdeal,
}

impl SeriesRing {
    pub fn new(base_rank: usize, classes: CurveClassMonoid, ideal: MonoidIdeal) -> Result<Arc<Self>> {
        if !ideal.monoid.same_as(&classes.effective) {
            return invalid("truncation ideal lives on a different monoid");
        }
        if !radical_is_maximal(&ideal)? {
            return Err(Error::Ideal("ideal complement is infinite".into()));
        }
        Ok(Arc::new(SeriesRing { base_rank, classes, ideal }))
    }

    pub fn kills(&self, a: &[i64]) -> bool {
        self.ideal.contains(a)
    }
}

/// Finite sum of c · z^m q^A with A outside the ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    pub ring: Arc<SeriesRing>,
    terms: BTreeMap<(IVec, IVec), Rat>,
}

impl TruncatedSeries {
    pub fn zero(ring: &Arc<SeriesRing>) -> Self {
        TruncatedSeries { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ring: &Arc<SeriesRing>) -> Self {
        let mut s = Self::zero(ring);
        let k = ring.classes.ambient();
        s.terms.insert((vec![0; ring.base_rank], vec![0; k]), Rat::one());
        s
    }

    pub fn from_terms(ring: &Arc<SeriesRing>, terms: &[(IVec, IVec, Rat)]) -> Result<Self> {
        let mut s = Self::zero(ring);
        for (m, a, c) in terms {
            if m.len() != ring.base_rank {
                return invalid("monomial exponent has the wrong length");
            }
            ring.classes.check(a)?;
            s.add_term(m.clone(), a.clone(), c.clone());
        }
        Ok(s)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IVec, &IVec, &Rat)> {
        self.terms.iter().map(|((m, a), c)| (m, a, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &[i64], a: &[i64]) -> Rat {
        self.terms.get(&(m.to_vec(), a.to_vec())).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one(&self.ring)
    }

    /// Adds a term, dropping it if its class is in the ideal.
    pub fn add_term(&mut self, m: IVec, a: IVec, c: Rat) {
        if c.is_zero() || self.ring.kills(&a) {
            return;
        }
        let key = (m, a);
        let v = self.terms.remove(&key).unwrap_or_else(Rat::zero) + c;
        if !v.is_zero() {
            self.terms.insert(key, v);
        }
    }

    fn same_ring(&self, o: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &o.ring) || self.ring == o.ring {
            Ok(())
        } else {
            invalid("series live in different rings")
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.same_ring(o)?;
        let mut s = self.clone();
        for ((m, a), c) in &o.terms {
            s.add_term(m.clone(), a.clone(), c.clone());
        }
        Ok(s)
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.same_ring(o)?;
        let mut s = Self::zero(&self.ring);
        for ((m1, a1), c1) in &self.terms {
            for ((m2, a2), c2) in &o.terms {
                s.add_term(add(m1, m2), add(a1, a2), c1 * c2);
            }
        }
        Ok(s)
    }

    /// Pushes exponents through `base` and classes through `pf` into `ring`.
    pub fn push(&self, base: &LatticeMap, pf: &MonoidHom, ring: &Arc<SeriesRing>) -> Result<Self> {
        if base.source.rank != self.ring.base_rank || base.target.rank != ring.base_rank {
            return invalid("exponent map has the wrong shape");
        }
        let mut s = Self::zero(ring);
        for ((m, a), c) in &self.terms {
            s.add_term(base.apply(m), pf.apply(a), c.clone());
        }
        Ok(s)
    }
}

/// exp(k N z^{-u} q^A), truncated at the first multiple of A in the ideal.
pub fn wall_function(k: i64, n: &Rat, u: &[i64], a: &[i64], ring: &Arc<SeriesRing>) -> Result<TruncatedSeries> {
    if k <= 0 {
        return invalid("wall multiplicity must be positive");
    }
    if u.len() != ring.base_rank {
        return invalid("wall direction has the wrong length");
    }
    if n.is_zero() {
        return Ok(TruncatedSeries::one(ring));
    }
    if is_zero(a) {
        return semantic("non-nilpotent wall exponent");
    }
    ring.classes.check(a)?;
    let kn = Rat::from_integer(k.into()) * n;
    let mut s = TruncatedSeries::one(ring);
    let mut coeff = Rat::one();
    let mut j: i64 = 1;
    loop {
        let ja: IVec = a.iter().map(|x| x * j).collect();
        if ring.kills(&ja) {
            break;
        }
        coeff = coeff * &kn / Rat::from_integer(j.into());
        s.add_term(u.iter().map(|x| -x * j).collect(), ja, coeff.clone());
        j += 1;
    }
    Ok(s)
}
