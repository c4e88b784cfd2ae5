use super::TropicalType;
use crate::error::{invalid, Error, Result};
use crate::monoid::MonoidHom;
use crate::num::{add, is_zero, IVec};
use crate::scattering::CurveClassMonoid;

/// A type with an effective curve class on each vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoratedType {
    pub ty: TropicalType,
    pub classes: CurveClassMonoid,
    pub a: Vec<IVec>,
}

impl DecoratedType {
    pub fn new(ty: TropicalType, classes: CurveClassMonoid, a: Vec<IVec>) -> Result<Self> {
        if a.len() != ty.vertices.len() {
            return invalid("one class per vertex expected");
        }
        for x in &a {
            classes.check(x)?;
        }
        Ok(DecoratedType { ty, classes, a })
    }

    /// Zero class everywhere.
    pub fn undecorated(ty: TropicalType, classes: CurveClassMonoid) -> Self {
        let a = vec![vec![0; classes.ambient()]; ty.vertices.len()];
        DecoratedType { ty, classes, a }
    }

    pub fn total(&self) -> IVec {
        self.a.iter().fold(vec![0; self.classes.ambient()], |s, x| add(&s, x))
    }
}

/// Decorations of a lift γ of the decorated base type. `contraction[v]` is
/// the base vertex a vertex of γ collapses to, or None for a vertex created
/// by the subdivision, whose class must push forward to zero. Classes on
/// `forced_zero` vertices are zero. Total classes are searched in the box
/// `bound` (inclusive, per coordinate of the upstairs lattice).
pub fn enumerate_decorated_lifts(
    gamma: &TropicalType,
    contraction: &[Option<usize>],
    pf: &MonoidHom,
    base: &DecoratedType,
    classes: &CurveClassMonoid,
    bound: &[(i64, i64)],
    forced_zero: &[usize],
) -> Result<Vec<DecoratedType>> {
    let k = classes.ambient();
    if contraction.len() != gamma.vertices.len() || bound.len() != k {
        return invalid("contraction or bound has the wrong shape");
    }
    if pf.source.ambient() != k || pf.target.ambient() != base.classes.ambient() {
        return invalid("class pushforward has the wrong shape");
    }
    if contraction.iter().flatten().any(|&w| w >= base.a.len()) {
        return invalid("contraction points outside the base graph");
    }
    let found = search(contraction, pf, base, classes, bound, forced_zero);
    if found.is_empty() {
        let wider: Vec<(i64, i64)> =
            bound.iter().map(|&(lo, hi)| (lo - (hi - lo + 1), hi + (hi - lo + 1))).collect();
        if !search(contraction, pf, base, classes, &wider, forced_zero).is_empty() {
            return Err(Error::Semantic("fiber bound too small".into()));
        }
    }
    found.into_iter().map(|a| DecoratedType::new(gamma.clone(), classes.clone(), a)).collect()
}

fn search(
    contraction: &[Option<usize>],
    pf: &MonoidHom,
    base: &DecoratedType,
    classes: &CurveClassMonoid,
    bound: &[(i64, i64)],
    forced_zero: &[usize],
) -> Vec<Vec<IVec>> {
    let k = classes.ambient();
    let mut points: Vec<IVec> = vec![vec![]];
    for &(lo, hi) in bound {
        points = points
            .into_iter()
            .flat_map(|p| {
                (lo..=hi).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    let effective: Vec<IVec> = points.into_iter().filter(|p| classes.effective.contains(p)).collect();
    let zero = vec![0; base.classes.ambient()];
    let choices: Vec<Vec<IVec>> = contraction
        .iter()
        .enumerate()
        .map(|(v, w)| {
            if forced_zero.contains(&v) {
                return vec![vec![0; k]];
            }
            let want = w.map_or(&zero, |w| &base.a[w]);
            effective.iter().filter(|c| &pf.apply(c) == want).cloned().collect()
        })
        .collect();
    let inside = |t: &IVec| t.iter().zip(bound).all(|(x, (lo, hi))| lo <= x && x <= hi);
    let mut out = vec![];
    let mut cur: Vec<IVec> = vec![];
    fn rec(
        i: usize,
        choices: &[Vec<IVec>],
        total: IVec,
        cur: &mut Vec<IVec>,
        out: &mut Vec<Vec<IVec>>,
        inside: &dyn Fn(&IVec) -> bool,
    ) {
        if i == choices.len() {
            if inside(&total) {
                out.push(cur.clone());
            }
            return;
        }
        for c in &choices[i] {
            cur.push(c.clone());
            rec(i + 1, choices, add(&total, c), cur, out, inside);
            cur.pop();
        }
    }
    rec(0, &choices, vec![0; k], &mut cur, &mut out, &inside);
    // base vertices with no preimage can only carry zero
    let hit: Vec<bool> = (0..base.a.len()).map(|w| contraction.contains(&Some(w))).collect();
    if hit.iter().zip(&base.a).any(|(h, a)| !h && !is_zero(a)) {
        return vec![];
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{p1p1, tau, tau_prime};
    use crate::lattice::LatticeMap;
    use crate::monoid::FineMonoid;

    fn setup() -> (DecoratedType, CurveClassMonoid, MonoidHom) {
        let k = p1p1();
        let n1 = FineMonoid::free(1);
        let base_cm = CurveClassMonoid::from_monoid("X", n1.clone()).unwrap();
        let base = DecoratedType::new(tau(&k), base_cm, vec![vec![1]]).unwrap();
        let up = CurveClassMonoid::from_monoid("Y", FineMonoid::free(2)).unwrap();
        let pf = MonoidHom::new(up.effective.clone(), n1, LatticeMap::new(vec![vec![1, 0]], 2, 1).unwrap()).unwrap();
        (base, up, pf)
    }

    #[test]
    fn identity_pushforward_gives_base_decoration() {
        let (base, _, _) = setup();
        let id = MonoidHom::identity(&base.classes.effective);
        let out = enumerate_decorated_lifts(&base.ty, &[Some(0)], &id, &base, &base.classes, &[(0, 3)], &[]).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].a, base.a);
    }

    #[test]
    fn splittings_in_a_box() {
        let (base, up, pf) = setup();
        let g = tau_prime(&p1p1());
        let c = [Some(0), None];
        let out = enumerate_decorated_lifts(&g, &c, &pf, &base, &up, &[(0, 1), (0, 2)], &[]).unwrap();
        // brute force: (1, b1) + (0, b2) with b1 + b2 <= 2
        let mut expect = vec![];
        for b1 in 0..=2 {
            for b2 in 0..=2 {
                if b1 + b2 <= 2 {
                    expect.push(vec![vec![1, b1], vec![0, b2]]);
                }
            }
        }
        expect.sort();
        assert_eq!(out.iter().map(|d| d.a.clone()).collect::<Vec<_>>(), expect);
        assert_eq!(out.len(), 6);
        assert!(out.iter().all(|d| pf.apply(&d.total()) == vec![1]));

        let forced = enumerate_decorated_lifts(&g, &c, &pf, &base, &up, &[(0, 1), (0, 2)], &[1]).unwrap();
        assert_eq!(forced.len(), 3);
        assert!(forced.iter().all(|d| d.a[1] == vec![0, 0]));

        let err = enumerate_decorated_lifts(&g, &c, &pf, &base, &up, &[(0, 0), (0, 2)], &[]).unwrap_err();
        assert_eq!(err, Error::Semantic("fiber bound too small".into()));
    }
}
