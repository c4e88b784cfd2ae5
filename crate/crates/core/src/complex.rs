//! Cone complexes, piecewise-linear maps, subdivisions and their pullback
//! and pushforward.
//!
//! Embedded complexes keep every cone in one ambient Z^n and use identity
//! face maps. Abstract complexes store each cone in its own coordinates and
//! glue through explicit face inclusions; families of tropical curves live
//! there.

use crate::cone::LatticeCone;
use crate::error::{invalid, semantic, Error, Result};
use crate::lattice::LatticeMap;
use crate::linalg::{inverse_rat, rank};
use crate::num::{dot, neg, primitive, rat_is_integer, IVec, Rat};
use crate::par;
use num_traits::ToPrimitive;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

pub type ConeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceInclusion {
    pub small: ConeId,
    pub big: ConeId,
    pub map: LatticeMap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeComplex {
    cones: Vec<LatticeCone>,
    faces: Vec<FaceInclusion>,
    ambient: Option<usize>,
    index: BTreeMap<(ConeId, ConeId), usize>,
}

/// List of violated invariants; empty means valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub violations: Vec<String>,
}

impl Report {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
    pub fn push(&mut self, msg: impl Into<String>) {
        let m = msg.into();
        if !self.violations.contains(&m) {
            self.violations.push(m);
        }
    }
    pub fn mentions(&self, needle: &str) -> bool {
        self.violations.iter().any(|v| v.contains(needle))
    }
}

impl ConeComplex {
    /// Raw constructor; nothing is checked (see `validate_complex`).
    pub fn new(cones: Vec<LatticeCone>, faces: Vec<FaceInclusion>, ambient: Option<usize>) -> Self {
        let index = faces.iter().enumerate().map(|(i, f)| ((f.small, f.big), i)).collect();
        ConeComplex { cones, faces, ambient, index }
    }

    /// Embedded fan generated by `maximal` and all of their faces.
    pub fn fan(ambient: usize, maximal: &[LatticeCone]) -> Result<Self> {
        let mut all = BTreeSet::new();
        all.insert(LatticeCone::zero(ambient));
        for c in maximal {
            if c.ambient() != ambient {
                return invalid("cone ambient rank differs from the fan's");
            }
        }
        let face_lists: Vec<Result<Vec<LatticeCone>>> = par::map(maximal, |c| c.faces());
        for fl in face_lists {
            all.extend(fl?);
        }
        let cones: Vec<LatticeCone> = all.into_iter().collect();
        let lookup: BTreeMap<&LatticeCone, usize> = cones.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let mut pairs = BTreeSet::new();
        for (j, c) in cones.iter().enumerate() {
            for f in c.faces()? {
                pairs.insert((lookup[&f], j));
            }
        }
        let faces = pairs
            .into_iter()
            .map(|(small, big)| FaceInclusion { small, big, map: LatticeMap::identity(ambient) })
            .collect();
        Ok(Self::new(cones, faces, Some(ambient)))
    }

    /// Fan given by ray vectors and maximal cones as lists of ray indices.
    pub fn from_rays(ambient: usize, rays: &[IVec], cones: &[Vec<usize>]) -> Result<Self> {
        let mut maximal = vec![];
        for c in cones {
            let mut g = vec![];
            for &i in c {
                g.push(rays.get(i).ok_or_else(|| Error::Invalid(format!("ray index {i} out of range")))?.clone());
            }
            maximal.push(LatticeCone::from_generators(ambient, &g)?);
        }
        for r in rays {
            maximal.push(LatticeCone::from_generators(ambient, &[r.clone()])?);
        }
        Self::fan(ambient, &maximal)
    }

    /// A single cone with all of its faces, as an embedded complex.
    pub fn single(cone: &LatticeCone) -> Result<Self> {
        Self::fan(cone.ambient(), std::slice::from_ref(cone))
    }

    pub fn cones(&self) -> &[LatticeCone] {
        &self.cones
    }
    pub fn cone(&self, id: ConeId) -> &LatticeCone {
        &self.cones[id]
    }
    pub fn len(&self) -> usize {
        self.cones.len()
    }
    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }
    pub fn faces(&self) -> &[FaceInclusion] {
        &self.faces
    }
    pub fn ambient(&self) -> Option<usize> {
        self.ambient
    }
    pub fn is_embedded(&self) -> bool {
        self.ambient.is_some()
    }

    pub fn face_map(&self, small: ConeId, big: ConeId) -> Option<&LatticeMap> {
        self.index.get(&(small, big)).map(|&i| &self.faces[i].map)
    }

    pub fn is_face(&self, small: ConeId, big: ConeId) -> bool {
        self.index.contains_key(&(small, big))
    }

    /// Cones having `id` as a face (including itself when reflexive).
    pub fn cofaces(&self, id: ConeId) -> Vec<ConeId> {
        self.faces.iter().filter(|f| f.small == id).map(|f| f.big).collect()
    }

    pub fn faces_of(&self, id: ConeId) -> Vec<ConeId> {
        self.faces.iter().filter(|f| f.big == id).map(|f| f.small).collect()
    }

    pub fn maximal_cones(&self) -> Vec<ConeId> {
        (0..self.cones.len())
            .filter(|&i| self.faces.iter().all(|f| f.small != i || f.big == i))
            .collect()
    }

    pub fn id_of(&self, c: &LatticeCone) -> Option<ConeId> {
        self.cones.iter().position(|d| d == c)
    }

    /// Embedded only: the cone whose relative interior contains `p`.
    pub fn carrier(&self, p: &[Rat]) -> Option<ConeId> {
        self.cones
            .iter()
            .enumerate()
            .filter(|(_, c)| c.contains(p, false))
            .min_by_key(|(_, c)| c.dim())
            .map(|(i, _)| i)
    }

    /// Embedded only: the smallest cone containing `c`.
    pub fn carrier_of_cone(&self, c: &LatticeCone) -> Option<ConeId> {
        self.cones
            .iter()
            .enumerate()
            .filter(|(_, d)| d.contains_cone(c))
            .min_by_key(|(_, d)| d.dim())
            .map(|(i, _)| i)
    }

    /// Image of cone `small` inside the coordinates of cone `big`.
    pub fn face_image(&self, small: ConeId, big: ConeId) -> Result<LatticeCone> {
        let m = self
            .face_map(small, big)
            .ok_or_else(|| Error::Semantic(format!("cone {small} is not a face of cone {big}")))?;
        self.cones[small].image(m)
    }
}

pub fn validate_complex(k: &ConeComplex) -> Report {
    let mut rep = Report::default();
    let n = k.cones.len();
    for (i, c) in k.cones.iter().enumerate() {
        if let Some(a) = k.ambient {
            if c.ambient() != a {
                rep.push(format!("cone {i} has the wrong ambient rank"));
            }
        }
        match k.face_map(i, i) {
            None => rep.push(format!("face relation not reflexive: cone {i} lacks its identity")),
            Some(m) => {
                if m.source.rank != c.ambient() || m.target.rank != c.ambient() {
                    rep.push(format!("face map {i}->{i} has the wrong shape"));
                } else if c.generators().iter().any(|g| &m.apply(g) != g) {
                    rep.push(format!("face relation not reflexive: map {i}->{i} is not the identity on the cone"));
                }
            }
        }
    }
    for f in &k.faces {
        if f.small >= n || f.big >= n {
            rep.push(format!("face inclusion {}->{} references a missing cone", f.small, f.big));
            continue;
        }
        let (s, b) = (&k.cones[f.small], &k.cones[f.big]);
        if f.map.source.rank != s.ambient() || f.map.target.rank != b.ambient() {
            rep.push(format!("face map {}->{} has the wrong shape", f.small, f.big));
            continue;
        }
        let basis = s.lattice_basis().unwrap_or_default();
        let imgs: Vec<IVec> = basis.iter().map(|v| f.map.apply(v)).collect();
        if rank(&imgs) != s.dim() {
            rep.push(format!("face map {}->{} is not injective", f.small, f.big));
            continue;
        }
        match s.image(&f.map) {
            Ok(img) if img.is_face_of(b) => {}
            _ => rep.push(format!("face map {}->{} does not land on a face", f.small, f.big)),
        }
    }
    for f in &k.faces {
        for g in &k.faces {
            if f.big == g.small && f.small != f.big && g.small != g.big {
                match k.face_map(f.small, g.big) {
                    None => rep.push(format!("face relation not transitive: {}->{}->{}", f.small, f.big, g.big)),
                    Some(m) => {
                        if f.small < n && &g.map.compose(&f.map) != m {
                            let comp = g.map.compose(&f.map);
                            let gens = k.cones[f.small].generators();
                            if gens.iter().any(|v| comp.apply(v) != m.apply(v)) {
                                rep.push(format!(
                                    "face maps do not compose: {}->{}->{}",
                                    f.small, f.big, g.big
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    if k.ambient.is_some() {
        // every face of a member is a member, and members meet in faces
        for (i, c) in k.cones.iter().enumerate() {
            if let Ok(fs) = c.faces() {
                for f in fs {
                    match k.id_of(&f) {
                        None => rep.push(format!("cone {i} has a face outside the complex")),
                        Some(j) if !k.is_face(j, i) => rep.push(format!("face inclusion {j}->{i} missing")),
                        _ => {}
                    }
                }
            }
        }
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let bad: Vec<Option<String>> = par::map(&pairs, |&(i, j)| {
            let (a, b) = (&k.cones[i], &k.cones[j]);
            match a.intersect(b) {
                Ok(x) if x.is_face_of(a) && x.is_face_of(b) => None,
                _ => Some(format!("non-face intersection: cones {i} and {j}")),
            }
        });
        for m in bad.into_iter().flatten() {
            rep.push(m);
        }
    }
    rep
}

/// Per source cone: the target cone it maps into, and the lattice map from
/// the source cone's coordinates to the target cone's coordinates.
#[derive(Debug, Clone)]
pub struct PLMap {
    pub source: Arc<ConeComplex>,
    pub target: Arc<ConeComplex>,
    pub assign: Vec<(ConeId, LatticeMap)>,
}

impl PLMap {
    pub fn identity(k: Arc<ConeComplex>) -> Self {
        let assign = k.cones.iter().enumerate().map(|(i, c)| (i, LatticeMap::identity(c.ambient()))).collect();
        PLMap { source: k.clone(), target: k, assign }
    }

    /// Embedded source and target related by one global linear map; each
    /// source cone goes to the smallest target cone containing its image.
    pub fn linear(source: Arc<ConeComplex>, target: Arc<ConeComplex>, m: &LatticeMap) -> Result<Self> {
        if !source.is_embedded() || !target.is_embedded() {
            return invalid("linear PL maps need embedded complexes");
        }
        let mut assign = vec![];
        for (i, c) in source.cones.iter().enumerate() {
            let img = c.image(m)?;
            let t = target
                .carrier_of_cone(&img)
                .ok_or_else(|| Error::Semantic(format!("image of cone {i} leaves the target support")))?;
            assign.push((t, m.clone()));
        }
        Ok(PLMap { source, target, assign })
    }

    /// Image of source cone `c` in the coordinates of target cone `t`, which
    /// must have the assigned cone as a face.
    pub fn image_in(&self, c: ConeId, t: ConeId) -> Result<LatticeCone> {
        let (t0, a) = &self.assign[c];
        let m = self
            .target
            .face_map(*t0, t)
            .ok_or_else(|| Error::Semantic(format!("cone {t0} is not a face of cone {t}")))?;
        self.source.cones[c].image(&m.compose(a))
    }

    /// self ∘ other.
    pub fn compose(&self, other: &PLMap) -> Result<PLMap> {
        let mut assign = vec![];
        for (c, (t, a)) in other.assign.iter().enumerate() {
            let (u, b) = &self.assign[*t];
            assign.push((*u, b.compose(a)));
            let _ = c;
        }
        Ok(PLMap { source: other.source.clone(), target: self.target.clone(), assign })
    }

    /// Checks containment of images and compatibility with face maps.
    pub fn validate(&self) -> Report {
        let mut rep = Report::default();
        if self.assign.len() != self.source.len() {
            rep.push("assignment length differs from the number of source cones");
            return rep;
        }
        for (i, (t, a)) in self.assign.iter().enumerate() {
            let c = &self.source.cones[i];
            if *t >= self.target.len() || a.source.rank != c.ambient() || a.target.rank != self.target.cones[*t].ambient() {
                rep.push(format!("assignment of cone {i} has the wrong shape"));
                continue;
            }
            let tc = &self.target.cones[*t];
            if c.generators().iter().any(|g| !tc.contains_int(&a.apply(g), false)) {
                rep.push(format!("cone {i} does not map into cone {t}"));
            }
        }
        for f in &self.source.faces {
            let (ta, ma) = &self.assign[f.small];
            let (tb, mb) = &self.assign[f.big];
            let Some(ft) = self.target.face_map(*ta, *tb) else {
                rep.push(format!("face {}->{} maps to non-incident cones", f.small, f.big));
                continue;
            };
            let gens = self.source.cones[f.small].generators();
            if gens.iter().any(|g| mb.apply(&f.map.apply(g)) != ft.apply(&ma.apply(g))) {
                rep.push(format!("assignments do not commute with face {}->{}", f.small, f.big));
            }
        }
        rep
    }
}

#[derive(Debug, Clone)]
pub struct Subdivision {
    pub map: PLMap,
    /// For each target cone, the source cones mapping into it.
    pub fibers: Vec<Vec<ConeId>>,
}

impl Subdivision {
    pub fn new(map: PLMap) -> Self {
        let fibers = (0..map.target.len())
            .map(|t| {
                (0..map.source.len())
                    .filter(|&c| map.target.is_face(map.assign[c].0, t))
                    .collect()
            })
            .collect();
        Subdivision { map, fibers }
    }

    pub fn identity(k: Arc<ConeComplex>) -> Self {
        Self::new(PLMap::identity(k))
    }

    /// Refinement of one embedded fan by another in the same ambient lattice.
    pub fn refinement(target: Arc<ConeComplex>, source: Arc<ConeComplex>) -> Result<Self> {
        let n = target.ambient.ok_or_else(|| Error::Invalid("refinement needs embedded fans".into()))?;
        if source.ambient != Some(n) {
            return invalid("refinement needs fans in the same ambient lattice");
        }
        Ok(Self::new(PLMap::linear(source, target, &LatticeMap::identity(n))?))
    }

    pub fn source(&self) -> &Arc<ConeComplex> {
        &self.map.source
    }
    pub fn target(&self) -> &Arc<ConeComplex> {
        &self.map.target
    }

    /// Source cone `c` in the coordinates of target cone `t`.
    pub fn piece_in(&self, c: ConeId, t: ConeId) -> Result<LatticeCone> {
        self.map.image_in(c, t)
    }

    /// The map from source cone `c` into target cone `t`'s coordinates.
    pub fn map_into(&self, c: ConeId, t: ConeId) -> Result<LatticeMap> {
        let (t0, a) = &self.map.assign[c];
        let m = self
            .map
            .target
            .face_map(*t0, t)
            .ok_or_else(|| Error::Semantic(format!("cone {t0} is not a face of cone {t}")))?;
        Ok(m.compose(a))
    }
}

pub fn validate_subdivision(s: &Subdivision) -> Report {
    let mut rep = s.map.validate();
    if !rep.is_valid() {
        return rep;
    }
    for (c, (_, a)) in s.map.assign.iter().enumerate() {
        let cone = &s.map.source.cones[c];
        let basis = cone.lattice_basis().unwrap_or_default();
        let imgs: Vec<IVec> = basis.iter().map(|v| a.apply(v)).collect();
        if rank(&imgs) != cone.dim() {
            rep.push(format!("source cone {c} is not embedded linearly"));
        }
    }
    let per_target: Vec<Vec<String>> = par::map_range(s.map.target.len(), |t| check_cover(s, t));
    for msgs in per_target {
        for m in msgs {
            rep.push(m);
        }
    }
    rep
}

fn check_cover(s: &Subdivision, t: ConeId) -> Vec<String> {
    let mut out = vec![];
    let tc = s.map.target.cone(t);
    let mut pieces = vec![];
    for &c in &s.fibers[t] {
        match s.piece_in(c, t) {
            Ok(p) => pieces.push(p),
            Err(e) => {
                out.push(format!("{e}"));
                return out;
            }
        }
    }
    for i in 0..pieces.len() {
        for j in i + 1..pieces.len() {
            match pieces[i].intersect(&pieces[j]) {
                Ok(x) if x.is_face_of(&pieces[i]) && x.is_face_of(&pieces[j]) => {}
                _ => out.push(format!(
                    "non-face intersection: cones {} and {} over target cone {t}",
                    s.fibers[t][i], s.fibers[t][j]
                )),
            }
            if pieces[i] == pieces[j] {
                out.push(format!("cones {} and {} have the same image", s.fibers[t][i], s.fibers[t][j]));
            }
        }
    }
    let full: Vec<&LatticeCone> = pieces.iter().filter(|p| p.dim() == tc.dim()).collect();
    if !covers(tc, &full) {
        out.push(format!("support not covered: target cone {t}"));
    }
    out
}

/// Whether full-dimensional subcones of `whole`, meeting pairwise in faces,
/// cover it: every facet of a piece lies on the boundary of `whole` or is a
/// facet of another piece.
pub fn covers(whole: &LatticeCone, full: &[&LatticeCone]) -> bool {
    if whole.dim() == 0 {
        return !full.is_empty();
    }
    if full.is_empty() {
        return false;
    }
    for (i, p) in full.iter().enumerate() {
        for fnorm in p.facets() {
            let facet = match face_with_normal(p, fnorm) {
                Ok(f) => f,
                Err(_) => return false,
            };
            let q = facet.relint_point();
            let on_boundary = whole.facets().iter().any(|h| dot(h, &q) == 0);
            if on_boundary {
                continue;
            }
            let shared = full
                .iter()
                .enumerate()
                .any(|(j, o)| j != i && o.facets().iter().any(|g| face_with_normal(o, g).map_or(false, |f| f == facet)));
            if !shared {
                return false;
            }
        }
    }
    true
}

fn face_with_normal(c: &LatticeCone, normal: &IVec) -> Result<LatticeCone> {
    let i = c.facets().iter().position(|f| f == normal).expect("facet of the cone");
    c.face_of_facets(&[i])
}

/// Fiber product of `f` with `s`: each cone c of f.source is cut into the
/// closures of {x in c : f(x) in σ̃}. Returns the subdivision of f.source and
/// the induced map to s.source.
pub fn pullback_subdivision(f: &PLMap, s: &Subdivision) -> Result<(Subdivision, PLMap)> {
    if !Arc::ptr_eq(&f.target, &s.map.target) && *f.target != *s.map.target {
        return invalid("pullback needs f.target = s.target");
    }
    let src = &f.source;
    // per source cone: pieces whose relative interior lies in that of c
    let per_cone: Vec<Result<Vec<(LatticeCone, ConeId, LatticeMap)>>> = par::map_range(src.len(), |c| {
        let cone = src.cone(c);
        let (t, a) = &f.assign[c];
        let mut found: Vec<(LatticeCone, ConeId, LatticeMap)> = vec![];
        for &sig in &s.fibers[*t] {
            let b = s.map_into(sig, *t)?;
            let bsig = s.map.source.cone(sig).image(&b)?;
            let piece = cone.intersect(&bsig.preimage(a)?)?;
            if piece.dim() < cone.dim() && cone.carrier_face(&piece)?.dim() < cone.dim() {
                continue;
            }
            if piece.dim() == 0 && cone.dim() > 0 {
                continue;
            }
            let g = solve_through(&b, a)?;
            match found.iter_mut().find(|(p, _, _)| *p == piece) {
                Some(entry) => {
                    if s.map.source.cone(sig).dim() < s.map.source.cone(entry.1).dim() {
                        entry.1 = sig;
                        entry.2 = g;
                    }
                }
                None => found.push((piece, sig, g)),
            }
        }
        Ok(found)
    });
    let mut cones = vec![];
    let mut parent = vec![];
    let mut up = vec![];
    for (c, r) in per_cone.into_iter().enumerate() {
        for (p, sig, g) in r? {
            cones.push(p);
            parent.push(c);
            up.push((sig, g));
        }
    }
    let mut faces = vec![];
    for i in 0..cones.len() {
        for j in 0..cones.len() {
            let Some(m) = src.face_map(parent[i], parent[j]) else { continue };
            let img = cones[i].image(m)?;
            if img.is_face_of(&cones[j]) {
                faces.push(FaceInclusion { small: i, big: j, map: m.clone() });
            }
        }
    }
    let new_src = Arc::new(ConeComplex::new(cones, faces, src.ambient));
    let down = PLMap {
        source: new_src.clone(),
        target: src.clone(),
        assign: parent.iter().map(|&c| (c, LatticeMap::identity(src.cone(c).ambient()))).collect(),
    };
    let induced = PLMap { source: new_src, target: s.map.source.clone(), assign: up };
    Ok((Subdivision::new(down), induced))
}

/// g with b ∘ g = a, for b injective; errors when g is not integral.
fn solve_through(b: &LatticeMap, a: &LatticeMap) -> Result<LatticeMap> {
    if b.source.rank == b.target.rank {
        if b.matrix == crate::num::identity(b.source.rank) {
            return Ok(a.clone());
        }
        let inv = inverse_rat(&b.matrix).ok_or_else(|| Error::Semantic("subdivision map not invertible".into()))?;
        let mut cols = vec![];
        for col in a.columns() {
            let x: Vec<Rat> = inv
                .iter()
                .map(|row| row.iter().zip(&col).map(|(r, &v)| r * Rat::from_integer(v.into())).sum())
                .collect();
            if !x.iter().all(rat_is_integer) {
                return semantic("map does not factor integrally through the refinement");
            }
            cols.push(x.iter().map(|v| v.to_integer().to_i64().unwrap()).collect());
        }
        return Ok(LatticeMap::from_columns(&cols, b.source.rank));
    }
    semantic("pullback needs square subdivision maps")
}

/// Subdivision of the base cone ω (the unique maximal cone of pi.target)
/// induced by the images of the source cones.
pub fn pushforward_subdivision(pi: &PLMap) -> Result<Subdivision> {
    let target = pi.target.clone();
    let n = target.ambient().ok_or_else(|| Error::Invalid("pushforward needs an embedded base".into()))?;
    let maxi = target.maximal_cones();
    if maxi.len() != 1 {
        return invalid("pushforward needs a single base cone with its faces");
    }
    let omega = target.cone(maxi[0]).clone();
    let mut proj: BTreeSet<LatticeCone> = BTreeSet::new();
    for c in 0..pi.source.len() {
        proj.insert(pi.image_in(c, maxi[0])?);
    }
    let cells = match intersection_cells(&omega, &proj)? {
        Some(cells) => cells,
        None => arrangement_cells(&omega, &proj)?,
    };
    let fan = Arc::new(ConeComplex::fan(n, &cells)?);
    Subdivision::refinement(target, fan)
}

/// Maximal members of the intersection closure, if they tile ω face to face.
fn intersection_cells(omega: &LatticeCone, proj: &BTreeSet<LatticeCone>) -> Result<Option<Vec<LatticeCone>>> {
    let mut set: BTreeSet<LatticeCone> = proj.clone();
    loop {
        let v: Vec<LatticeCone> = set.iter().cloned().collect();
        let mut added = false;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                let x = v[i].intersect(&v[j])?;
                if set.insert(x) {
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
    }
    // candidate cells: full-dimensional members containing no smaller one
    let full: Vec<LatticeCone> = set.iter().filter(|c| c.dim() == omega.dim()).cloned().collect();
    let cells: Vec<LatticeCone> = full
        .iter()
        .filter(|c| !full.iter().any(|d| d != *c && c.contains_cone(d)))
        .cloned()
        .collect();
    for i in 0..cells.len() {
        for j in i + 1..cells.len() {
            let x = cells[i].intersect(&cells[j])?;
            if !x.is_face_of(&cells[i]) || !x.is_face_of(&cells[j]) {
                return Ok(None);
            }
        }
    }
    let refs: Vec<&LatticeCone> = cells.iter().collect();
    if !covers(omega, &refs) {
        return Ok(None);
    }
    // every projected cone must be a union of faces of cells
    for p in proj {
        for c in &cells {
            let x = c.intersect(p)?;
            if p.dim() == omega.dim() {
                if !(p.contains_cone(c) || x.dim() < omega.dim()) {
                    return Ok(None);
                }
            } else if !x.is_face_of(c) {
                return Ok(None);
            }
        }
    }
    Ok(Some(cells))
}

/// Full-dimensional cells of ω cut by every facet and span hyperplane of the
/// projected cones.
fn arrangement_cells(omega: &LatticeCone, proj: &BTreeSet<LatticeCone>) -> Result<Vec<LatticeCone>> {
    let mut hyper: BTreeSet<IVec> = BTreeSet::new();
    for p in proj {
        for h in p.facets().iter().chain(p.equations()) {
            let h = primitive(h);
            let gens = omega.generators();
            if gens.iter().all(|g| dot(&h, g) == 0) {
                continue;
            }
            let nh = neg(&h);
            if !hyper.contains(&nh) {
                hyper.insert(h);
            }
        }
    }
    let mut cells = vec![omega.clone()];
    for h in &hyper {
        let mut next = vec![];
        for c in cells {
            let gens = c.generators();
            let pos = gens.iter().any(|g| dot(h, g) > 0);
            let negv = gens.iter().any(|g| dot(h, g) < 0);
            if pos && negv {
                let mut fa = c.facets().to_vec();
                fa.push(h.clone());
                let mut fb = c.facets().to_vec();
                fb.push(neg(h));
                for f in [fa, fb] {
                    let piece = LatticeCone::from_inequalities(c.ambient(), &f, c.equations())?;
                    if piece.dim() == c.dim() {
                        next.push(piece);
                    }
                }
            } else {
                next.push(c);
            }
        }
        cells = next;
    }
    cells.sort();
    Ok(cells)
}

/// Per-cone hook for the fine case: given the source cone id and the lifted
/// map, decide whether the dual map factors through the designated submonoid.
pub type FactorHook<'a> = &'a (dyn Fn(ConeId, &LatticeMap) -> bool + Sync);

/// The unique g with s.map ∘ g = f, when each source cone's image lies in a
/// single cone of s.source.
pub fn lift_through_subdivision(f: &PLMap, s: &Subdivision, hook: Option<FactorHook>) -> Result<Option<PLMap>> {
    let mut assign = vec![];
    for c in 0..f.source.len() {
        let (t, a) = &f.assign[c];
        let img = f.source.cone(c).image(a)?;
        let mut best: Option<(usize, ConeId, LatticeMap)> = None;
        for &sig in &s.fibers[*t] {
            let b = s.map_into(sig, *t)?;
            let piece = s.map.source.cone(sig).image(&b)?;
            if !piece.contains_cone(&img) {
                continue;
            }
            let d = piece.dim();
            if best.as_ref().map_or(true, |(bd, _, _)| d < *bd) {
                match solve_through(&b, a) {
                    Ok(g) => best = Some((d, sig, g)),
                    Err(Error::Semantic(_)) => {}
                    Err(e) => return Err(e),
                }
            }
        }
        let Some((_, sig, g)) = best else { return Ok(None) };
        if let Some(h) = hook {
            if !h(c, &g) {
                return Ok(None);
            }
        }
        assign.push((sig, g));
    }
    Ok(Some(PLMap { source: f.source.clone(), target: s.map.source.clone(), assign }))
}

/// Quotient fan of the cones containing `c`, in Z^n / (span(c) ∩ Z^n).
pub fn star_fan(k: &ConeComplex, c: ConeId) -> Result<ConeComplex> {
    if !k.is_embedded() {
        return semantic("star requires embedding");
    }
    let base = k.cone(c);
    let quot = LatticeMap::new(base.equations().to_vec(), base.ambient(), base.equations().len())?;
    let mut cones = vec![];
    for (i, d) in k.cones().iter().enumerate() {
        if k.is_face(c, i) {
            cones.push(d.image(&quot)?);
        }
    }
    ConeComplex::fan(quot.target.rank, &cones)
}
