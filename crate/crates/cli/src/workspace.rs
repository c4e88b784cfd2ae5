use crate::format::*;
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::Arc;
use troplift_core::complex::{validate_complex, validate_subdivision, ConeComplex, ConeId, Subdivision, PLMap};
use troplift_core::monoid::{FineMonoid, MonoidHom, MonoidIdeal};
use troplift_core::num::IVec;
use troplift_core::scattering::{
    skeleton_from_coefficients, wall_function, CurveClassMonoid, MirrorTable, ScatteringDiagram, SeriesRing,
    TruncatedSeries, Wall,
};
use troplift_core::tropical::{Edge, Leg, TropicalType, Vertex};
use troplift_core::{Error, LatticeCone, LatticeMap, Result};

fn bad<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}

#[derive(Debug, Clone)]
pub struct FanEntry {
    pub complex: Arc<ConeComplex>,
    pub rays: Vec<IVec>,
    pub skeleton: Option<Vec<ConeId>>,
    pub coefficients: Option<Vec<(IVec, troplift_core::num::Rat)>>,
}

impl FanEntry {
    pub fn ambient(&self) -> usize {
        self.complex.ambient().unwrap_or(0)
    }

    /// Id of the cone spanned by the listed rays.
    pub fn resolve(&self, name: &str, r: &[usize]) -> Result<ConeId> {
        let n = self.ambient();
        let mut gens = vec![];
        for &i in r {
            match self.rays.get(i) {
                Some(v) => gens.push(v.clone()),
                None => return bad(format!("fan {name}: ray id {i} out of range")),
            }
        }
        let c = if gens.is_empty() { LatticeCone::zero(n) } else { LatticeCone::from_generators(n, &gens)? };
        match self.complex.id_of(&c) {
            Some(id) => Ok(id),
            None => bad(format!("fan {name}: rays {r:?} do not span a cone of the fan")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SubdivisionEntry {
    pub target: String,
    pub refined: String,
    pub sub: Subdivision,
}

#[derive(Debug, Clone)]
pub struct TypeEntry {
    pub fan: String,
    pub ty: TropicalType,
}

#[derive(Debug, Clone)]
pub struct IdealEntry {
    pub monoid: String,
    pub ideal: MonoidIdeal,
}

#[derive(Debug, Clone)]
pub struct HomEntry {
    pub source: String,
    pub target: String,
    pub hom: MonoidHom,
}

#[derive(Debug, Clone)]
pub struct MapEntry {
    pub source: String,
    pub target: String,
    pub map: PLMap,
    pub matrix: LatticeMap,
}

#[derive(Debug, Clone)]
pub struct TableEntryRef {
    pub classes: String,
    pub table: MirrorTable,
}

#[derive(Debug, Clone)]
pub struct DiagramEntry {
    pub fan: String,
    pub classes: String,
    pub diagram: ScatteringDiagram,
}

/// Named artifacts loaded from files, with every cross-reference resolved.
#[derive(Debug, Clone, Default)]
pub struct Workspace {
    pub fans: BTreeMap<String, FanEntry>,
    pub subdivisions: BTreeMap<String, SubdivisionEntry>,
    pub types: BTreeMap<String, TypeEntry>,
    pub cones: BTreeMap<String, LatticeCone>,
    pub monoids: BTreeMap<String, FineMonoid>,
    pub ideals: BTreeMap<String, IdealEntry>,
    pub homs: BTreeMap<String, HomEntry>,
    pub maps: BTreeMap<String, MapEntry>,
    pub puncturings: BTreeMap<String, PuncturingFile>,
    pub tables: BTreeMap<String, TableEntryRef>,
    pub diagrams: BTreeMap<String, DiagramEntry>,
}

pub fn parse_artifacts(text: &str, origin: &str) -> Result<Vec<Artifact>> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Invalid(format!("{origin}: {e}")))?;
    let items = match v {
        serde_json::Value::Array(xs) => xs,
        x => vec![x],
    };
    items
        .into_iter()
        .map(|x| serde_json::from_value::<Artifact>(x).map_err(|e| Error::Invalid(format!("{origin}: {e}"))))
        .collect()
}

fn matrix(rows: &[IVec], source: usize, target: usize, what: &str) -> Result<LatticeMap> {
    if rows.len() != target || rows.iter().any(|r| r.len() != source) {
        return bad(format!("{what}: matrix must be {target} x {source}"));
    }
    LatticeMap::new(rows.to_vec(), source, target)
}

impl Workspace {
    pub fn load_files<P: AsRef<Path>>(paths: &[P]) -> Result<Self> {
        let mut all = vec![];
        for p in paths {
            let p = p.as_ref();
            let text =
                std::fs::read_to_string(p).map_err(|e| Error::Invalid(format!("{}: {e}", p.display())))?;
            all.extend(parse_artifacts(&text, &p.display().to_string())?);
        }
        Self::build(all)
    }

    pub fn from_json(texts: &[&str]) -> Result<Self> {
        let mut all = vec![];
        for (i, t) in texts.iter().enumerate() {
            all.extend(parse_artifacts(t, &format!("input {i}"))?);
        }
        Self::build(all)
    }

    /// Builds artifacts in dependency order, so file order does not matter.
    pub fn build(arts: Vec<Artifact>) -> Result<Self> {
        let mut names = BTreeSet::new();
        for a in &arts {
            let mut own = vec![a.name().to_string()];
            if let Artifact::Subdivision(s) = a {
                own.push(s.refined.name.clone());
            }
            for n in own {
                if !names.insert(n.clone()) {
                    return bad(format!("duplicate artifact name {n:?}"));
                }
            }
        }
        let mut ws = Workspace::default();
        let pick = |k: &'static str| arts.iter().filter(move |a| a.kind() == k);
        for a in pick("fan") {
            if let Artifact::Fan(f) = a {
                let e = build_fan(f)?;
                ws.fans.insert(f.name.clone(), e);
            }
        }
        for a in pick("subdivision") {
            if let Artifact::Subdivision(s) = a {
                ws.add_subdivision(s)?;
            }
        }
        for a in pick("cone") {
            if let Artifact::Cone(c) = a {
                let cone = match (&c.generators, &c.inequalities) {
                    (Some(g), None) => LatticeCone::from_generators(c.ambient, g)?,
                    (None, Some(h)) => LatticeCone::from_inequalities(c.ambient, h, &c.equations)?,
                    _ => return bad(format!("cone {}: give exactly one of generators, inequalities", c.name)),
                };
                ws.cones.insert(c.name.clone(), cone);
            }
        }
        for a in pick("monoid") {
            if let Artifact::Monoid(m) = a {
                ws.monoids.insert(m.name.clone(), FineMonoid::new(m.ambient, &m.generators)?);
            }
        }
        for a in pick("type") {
            if let Artifact::Type(t) = a {
                let ty = ws.build_type(t)?;
                ws.types.insert(t.name.clone(), TypeEntry { fan: t.fan.clone(), ty });
            }
        }
        for a in pick("ideal") {
            if let Artifact::Ideal(i) = a {
                let m = ws.monoid(&i.monoid)?.clone();
                let ideal = MonoidIdeal::new(m, &i.generators)?;
                ws.ideals.insert(i.name.clone(), IdealEntry { monoid: i.monoid.clone(), ideal });
            }
        }
        for a in pick("hom") {
            if let Artifact::Hom(h) = a {
                let s = ws.monoid(&h.source)?.clone();
                let t = ws.monoid(&h.target)?.clone();
                let m = matrix(&h.matrix, s.ambient(), t.ambient(), &h.name)?;
                let hom = MonoidHom::new(s, t, m)?;
                ws.homs.insert(h.name.clone(), HomEntry { source: h.source.clone(), target: h.target.clone(), hom });
            }
        }
        for a in pick("map") {
            if let Artifact::Map(m) = a {
                let s = ws.fan(&m.source)?.complex.clone();
                let t = ws.fan(&m.target)?.complex.clone();
                let mat = matrix(&m.matrix, s.ambient().unwrap_or(0), t.ambient().unwrap_or(0), &m.name)?;
                let map = PLMap::linear(s, t, &mat)?;
                ws.maps.insert(
                    m.name.clone(),
                    MapEntry { source: m.source.clone(), target: m.target.clone(), map, matrix: mat },
                );
            }
        }
        for a in pick("puncturing") {
            if let Artifact::Puncturing(p) = a {
                if p.mu.is_some() == p.mu_dual.is_some() {
                    return bad(format!("puncturing {}: give exactly one of mu, mu_dual", p.name));
                }
                ws.puncturings.insert(p.name.clone(), p.clone());
            }
        }
        for a in pick("table") {
            if let Artifact::Table(t) = a {
                let cm = ws.classes(&t.classes)?;
                let ideal = ws.ideal_on(&t.ideal, &t.classes)?;
                let entries: Vec<_> =
                    t.entries.iter().map(|e| (e.p.clone(), e.q.clone(), e.r.clone(), e.class.clone(), e.n.0.clone())).collect();
                let table = MirrorTable::new(cm, ideal, &t.points, &entries)?;
                ws.tables.insert(t.name.clone(), TableEntryRef { classes: t.classes.clone(), table });
            }
        }
        for a in pick("diagram") {
            if let Artifact::Diagram(d) = a {
                let diagram = ws.build_diagram(d)?;
                ws.diagrams.insert(
                    d.name.clone(),
                    DiagramEntry { fan: d.fan.clone(), classes: d.classes.clone(), diagram },
                );
            }
        }
        Ok(ws)
    }

    pub fn fan(&self, name: &str) -> Result<&FanEntry> {
        self.fans.get(name).map_or_else(|| bad(format!("unknown fan {name:?}")), Ok)
    }

    pub fn monoid(&self, name: &str) -> Result<&FineMonoid> {
        self.monoids.get(name).map_or_else(|| bad(format!("unknown monoid {name:?}")), Ok)
    }

    pub fn classes(&self, name: &str) -> Result<CurveClassMonoid> {
        CurveClassMonoid::from_monoid(name, self.monoid(name)?.clone())
    }

    fn ideal_on(&self, ideal: &str, monoid: &str) -> Result<MonoidIdeal> {
        let e = self.ideals.get(ideal).map_or_else(|| bad(format!("unknown ideal {ideal:?}")), Ok)?;
        if e.monoid != monoid {
            return bad(format!("ideal {ideal} lives on {}, not {monoid}", e.monoid));
        }
        Ok(e.ideal.clone())
    }

    pub fn ring(&self, classes: &str, ideal: &str, base_rank: usize) -> Result<Arc<SeriesRing>> {
        SeriesRing::new(base_rank, self.classes(classes)?, self.ideal_on(ideal, classes)?)
    }

    /// The unique artifact of a map, or the named one.
    pub fn one<'a, T>(map: &'a BTreeMap<String, T>, name: Option<&str>, kind: &str) -> Result<(&'a String, &'a T)> {
        match name {
            Some(n) => map.get_key_value(n).map_or_else(|| bad(format!("unknown {kind} {n:?}")), Ok),
            None if map.len() == 1 => Ok(map.iter().next().unwrap()),
            None if map.is_empty() => bad(format!("no {kind} given")),
            None => bad(format!("several {kind}s given; choose one by name")),
        }
    }

    /// Skeleton of a fan: listed, from coefficients, or every cone.
    pub fn skeleton(&self, fan: &str) -> Result<Vec<ConeId>> {
        let f = self.fan(fan)?;
        if let Some(s) = &f.skeleton {
            return Ok(s.clone());
        }
        if let Some(a) = &f.coefficients {
            return skeleton_from_coefficients(&f.complex, a);
        }
        Ok((0..f.complex.len()).collect())
    }

    fn add_subdivision(&mut self, s: &SubdivisionFile) -> Result<()> {
        let target = self.fan(&s.target)?.clone();
        let refined = build_fan(&s.refined)?;
        let sub = Subdivision::refinement(target.complex.clone(), refined.complex.clone())
            .map_err(|e| Error::Invalid(format!("subdivision {}: {e}", s.name)))?;
        let rep = validate_subdivision(&sub);
        if !rep.is_valid() {
            return bad(format!("subdivision {}: {}", s.name, rep.violations.join("; ")));
        }
        for a in &s.assignment {
            let c = refined.resolve(&s.refined.name, &a.cone)?;
            let t = target.resolve(&s.target, &a.into)?;
            if sub.map.assign[c].0 != t {
                return bad(format!("subdivision {}: cone {:?} is not carried by {:?}", s.name, a.cone, a.into));
            }
        }
        self.fans.insert(s.refined.name.clone(), refined);
        self.subdivisions.insert(
            s.name.clone(),
            SubdivisionEntry { target: s.target.clone(), refined: s.refined.name.clone(), sub },
        );
        Ok(())
    }

    fn build_type(&self, t: &TypeFile) -> Result<TropicalType> {
        let f = self.fan(&t.fan)?;
        let cone = |r: &ConeRef| f.resolve(&t.fan, r);
        let mut vertices = vec![];
        for v in &t.vertices {
            vertices.push(Vertex { genus: v.genus, cone: cone(&v.cone)?, degree: v.degree.clone() });
        }
        let mut edges = vec![];
        for e in &t.edges {
            edges.push(Edge { tail: e.tail, head: e.head, cone: cone(&e.cone)?, u: e.u.clone() });
        }
        let mut legs = vec![];
        for l in &t.legs {
            legs.push(Leg { vertex: l.vertex, cone: cone(&l.cone)?, u: l.u.clone(), punctured: l.punctured });
        }
        let ty = TropicalType { target: f.complex.clone(), vertices, edges, legs };
        ty.validate().map_err(|e| Error::Invalid(format!("type {}: {e}", t.name)))?;
        Ok(ty)
    }

    fn build_diagram(&self, d: &DiagramFile) -> Result<ScatteringDiagram> {
        let f = self.fan(&d.fan)?;
        let n = f.ambient();
        let ring = self.ring(&d.classes, &d.ideal, n)?;
        let mut walls = vec![];
        for (i, w) in d.walls.iter().enumerate() {
            let support = LatticeCone::from_generators(n, &w.support)?;
            let function = match (&w.terms, &w.exp) {
                (Some(ts), None) => {
                    let terms: Vec<_> = ts.iter().map(|t| (t.m.clone(), t.class.clone(), t.c.0.clone())).collect();
                    TruncatedSeries::from_terms(&ring, &terms)?
                }
                (None, Some(e)) => wall_function(e.k, &e.n.0, &e.u, &e.class, &ring)?,
                _ => return bad(format!("diagram {} wall {i}: give exactly one of terms, exp", d.name)),
            };
            walls.push(Wall { support, direction: w.direction.clone(), function });
        }
        ScatteringDiagram::new(f.complex.clone(), self.skeleton(&d.fan)?, ring, walls)
    }
}

fn build_fan(f: &FanFile) -> Result<FanEntry> {
    if f.lattices.is_some() {
        return bad(format!("fan {}: lattice overrides are not supported", f.name));
    }
    if f.rays.iter().any(|r| r.len() != f.ambient) {
        return bad(format!("fan {}: ray of the wrong length", f.name));
    }
    if f.cones.iter().flatten().any(|&i| i >= f.rays.len()) {
        return bad(format!("fan {}: ray id out of range", f.name));
    }
    let complex = ConeComplex::from_rays(f.ambient, &f.rays, &f.cones)
        .map_err(|e| Error::Invalid(format!("fan {}: {e}", f.name)))?;
    let rep = validate_complex(&complex);
    if !rep.is_valid() {
        return bad(format!("fan {}: {}", f.name, rep.violations.join("; ")));
    }
    let mut e = FanEntry { complex: Arc::new(complex), rays: f.rays.clone(), skeleton: None, coefficients: None };
    if let Some(sk) = &f.skeleton {
        let ids: Result<Vec<ConeId>> = sk.iter().map(|r| e.resolve(&f.name, r)).collect();
        e.skeleton = Some(ids?);
    }
    if let Some(cs) = &f.coefficients {
        e.coefficients = Some(cs.iter().map(|c| (c.ray.clone(), c.a.0.clone())).collect());
    }
    Ok(e)
}
