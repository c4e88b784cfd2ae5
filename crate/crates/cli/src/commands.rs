use crate::report::*;
use crate::workspace::Workspace;
use num_bigint::BigInt;
use serde::Serialize;
use std::fmt::Write;
use troplift_core::complex::{
    lift_through_subdivision, pullback_subdivision, pushforward_subdivision, validate_subdivision, ConeComplex,
    ConeId,
};
use troplift_core::monoid::{
    fine_pushout, ideal_preimage, is_saturated, mu_from_images, prestable_monoid, puncturing_monoid_ql,
    pushforward_stalk_monoid, radical_is_maximal, saturation, FineMonoid,
};
use troplift_core::num::{fmt_rat, IVec};
use troplift_core::scattering::{
    diagrams_equivalent, kappa, mirror_pushforward_check, pushforward_diagram, validate_wall_type,
    ScatteringDiagram,
};
use troplift_core::tropical::{
    enumerate_lifts, induced_subdivision, is_balanced, lattice_index, moduli_cone, ModuliCone, Origin,
    TropicalLift,
};
use troplift_core::{Error, LatticeCone, LatticeMap, Result};

/// Names chosen on the command line; unset ones default to the unique
/// artifact of the right kind.
#[derive(Debug, Clone, Default)]
pub struct Selection {
    pub subdivision: Option<String>,
    pub ty: Option<String>,
    pub cone: Option<String>,
    pub map: Option<String>,
    pub hom: Option<String>,
    pub diagram: Option<String>,
    pub reference: Option<String>,
    pub up: Option<String>,
    pub down: Option<String>,
    /// Membership grid bounds for two-dimensional puncturing monoids.
    pub grid: Option<(i64, i64)>,
}

fn big(x: &BigInt) -> String {
    x.to_string()
}

fn vertex_origin(o: &Origin) -> String {
    match o {
        Origin::Base(v) => format!("base vertex {v}"),
        Origin::EdgeBreak(e, i) => format!("crossing {i} on edge {e}"),
        Origin::LegBreak(l, i) => format!("crossing {i} on leg {l}"),
    }
}

fn realize(ws: &Workspace, name: &str) -> Result<ModuliCone> {
    let t = &ws.types[name];
    t.ty.validate()?;
    moduli_cone(&t.ty)?.ok_or_else(|| Error::Semantic(format!("type {name} is not realizable")))
}

#[derive(Debug, Clone, Serialize)]
pub struct VertexInfo {
    pub genus: u32,
    pub cone: Vec<IVec>,
    pub origin: String,
    pub valence: usize,
    pub position: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EdgeInfo {
    pub tail: usize,
    pub head: usize,
    pub cone: Vec<IVec>,
    pub u: IVec,
    pub length: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LegInfo {
    pub vertex: usize,
    pub cone: Vec<IVec>,
    pub u: IVec,
    pub punctured: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LiftInfo {
    pub cell: Vec<IVec>,
    pub dim: usize,
    pub maximal: bool,
    pub lattice_index: String,
    pub truncation: Vec<usize>,
    pub two_valent: usize,
    pub vertices: Vec<VertexInfo>,
    pub edges: Vec<EdgeInfo>,
    pub legs: Vec<LegInfo>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LiftReport {
    pub r#type: String,
    pub subdivision: String,
    pub moduli_dim: usize,
    pub lattice_rank: usize,
    pub cells: Vec<Vec<IVec>>,
    pub lifts: Vec<LiftInfo>,
    /// Pairs (i, j) with lift i below lift j in the truncation order.
    pub order: Vec<(usize, usize)>,
}

fn lift_info(l: &TropicalLift) -> LiftInfo {
    let g = &l.gamma;
    let k = &g.target;
    LiftInfo {
        cell: l.cell.rays().to_vec(),
        dim: l.gamma_cone.dim(),
        maximal: l.maximal,
        lattice_index: big(&lattice_index(l)),
        truncation: l.truncation.clone(),
        two_valent: (0..g.vertices.len()).filter(|&v| g.valence(v) == 2).count(),
        vertices: g
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| VertexInfo {
                genus: v.genus,
                cone: k.cone(v.cone).rays().to_vec(),
                origin: vertex_origin(&l.origin[i]),
                valence: g.valence(i),
                position: l.positions[i].iter().map(|f| qs(f)).collect(),
            })
            .collect(),
        edges: g
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| EdgeInfo {
                tail: e.tail,
                head: e.head,
                cone: k.cone(e.cone).rays().to_vec(),
                u: e.u.clone(),
                length: qs(&l.lengths[i]),
            })
            .collect(),
        legs: g
            .legs
            .iter()
            .map(|x| LegInfo { vertex: x.vertex, cone: k.cone(x.cone).rays().to_vec(), u: x.u.clone(), punctured: x.punctured })
            .collect(),
    }
}

pub fn cmd_lift(ws: &Workspace, sel: &Selection) -> Result<LiftReport> {
    let (tname, te) = Workspace::one(&ws.types, sel.ty.as_deref(), "type")?;
    let (sname, se) = Workspace::one(&ws.subdivisions, sel.subdivision.as_deref(), "subdivision")?;
    if se.target != te.fan {
        return Err(Error::Invalid(format!("subdivision {sname} refines {}, type {tname} lives on {}", se.target, te.fan)));
    }
    let m = realize(ws, tname)?;
    let lifts = enumerate_lifts(&m, &se.sub)?;
    let induced = induced_subdivision(&m, &se.sub)?;
    let cells = induced.source().maximal_cones().iter().map(|&c| induced.source().cone(c).rays().to_vec()).collect();
    let mut order = vec![];
    for (i, a) in lifts.iter().enumerate() {
        for (j, b) in lifts.iter().enumerate() {
            if i != j && a.precedes(b) {
                order.push((i, j));
            }
        }
    }
    Ok(LiftReport {
        r#type: tname.clone(),
        subdivision: sname.clone(),
        moduli_dim: m.dim(),
        lattice_rank: m.lattice_rank(),
        cells,
        lifts: lifts.iter().map(lift_info).collect(),
        order,
    })
}

impl Render for LiftReport {
    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "type {} through subdivision {}", self.r#type, self.subdivision);
        let _ = writeln!(s, "moduli cone: dim {}, lattice rank {}", self.moduli_dim, self.lattice_rank);
        let _ = writeln!(s, "induced cells: {}", self.cells.len());
        for (i, c) in self.cells.iter().enumerate() {
            let _ = writeln!(s, "  cell {i}: {}", cone_text(c));
        }
        let _ = writeln!(s, "lifts: {}", self.lifts.len());
        for (i, l) in self.lifts.iter().enumerate() {
            let _ = writeln!(
                s,
                "lift {i}: cell {}, dim {}, maximal {}, m = {}, truncation {:?}",
                cone_text(&l.cell),
                l.dim,
                yes(l.maximal),
                l.lattice_index,
                l.truncation
            );
            for (j, v) in l.vertices.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "  v{j}: genus {}, sigma {}, valence {}, {}, position {}",
                    v.genus,
                    cone_text(&v.cone),
                    v.valence,
                    v.origin,
                    v.position.iter().map(|f| func_text(f)).collect::<Vec<_>>().join(" ")
                );
            }
            for (j, e) in l.edges.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "  e{j}: v{} -> v{}, sigma {}, u {}, length {}",
                    e.tail,
                    e.head,
                    cone_text(&e.cone),
                    vec_text(&e.u),
                    func_text(&e.length)
                );
            }
            for (j, x) in l.legs.iter().enumerate() {
                let p = if x.punctured { ", punctured" } else { "" };
                let _ = writeln!(s, "  l{j}: at v{}, sigma {}, u {}{p}", x.vertex, cone_text(&x.cone), vec_text(&x.u));
            }
        }
        for (i, j) in &self.order {
            let _ = writeln!(s, "order: lift {i} < lift {j}");
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IndexLine {
    pub cell: Vec<IVec>,
    pub dim: usize,
    pub maximal: bool,
    pub lattice_index: String,
    pub kappa: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct IndexReport {
    pub r#type: String,
    pub moduli_dim: usize,
    pub kappa: Option<String>,
    pub lifts: Vec<IndexLine>,
}

/// Lattice index m of every lift, with k_γ and k_τ for one-leg types.
pub fn cmd_index(ws: &Workspace, sel: &Selection) -> Result<IndexReport> {
    let (tname, te) = Workspace::one(&ws.types, sel.ty.as_deref(), "type")?;
    let (_, se) = Workspace::one(&ws.subdivisions, sel.subdivision.as_deref(), "subdivision")?;
    let m = realize(ws, tname)?;
    let lifts = enumerate_lifts(&m, &se.sub)?;
    let one_leg = te.ty.legs.len() == 1;
    let k = |t| if one_leg { kappa(t).ok().map(|x| big(&x)) } else { None };
    Ok(IndexReport {
        r#type: tname.clone(),
        moduli_dim: m.dim(),
        kappa: k(&te.ty),
        lifts: lifts
            .iter()
            .map(|l| IndexLine {
                cell: l.cell.rays().to_vec(),
                dim: l.gamma_cone.dim(),
                maximal: l.maximal,
                lattice_index: big(&lattice_index(l)),
                kappa: k(&l.gamma),
            })
            .collect(),
    })
}

impl Render for IndexReport {
    fn text(&self) -> String {
        let mut s = format!("type {}: moduli dim {}", self.r#type, self.moduli_dim);
        if let Some(k) = &self.kappa {
            let _ = write!(s, ", kappa {k}");
        }
        s.push('\n');
        for (i, l) in self.lifts.iter().enumerate() {
            let _ = write!(s, "lift {i}: cell {}, dim {}, maximal {}, m = {}", cone_text(&l.cell), l.dim, yes(l.maximal), l.lattice_index);
            if let Some(k) = &l.kappa {
                let _ = write!(s, ", kappa {k}");
            }
            s.push('\n');
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ArtifactLine {
    pub kind: String,
    pub name: String,
    pub summary: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidateReport {
    pub artifacts: Vec<ArtifactLine>,
}

/// Loading already enforces the structural invariants; this lists what
/// was loaded with the checks that need computation.
pub fn cmd_validate(ws: &Workspace) -> Result<ValidateReport> {
    let mut out = vec![];
    let mut line = |kind: &str, name: &str, summary: String| {
        out.push(ArtifactLine { kind: kind.into(), name: name.into(), summary })
    };
    for (n, f) in &ws.fans {
        let c = &f.complex;
        line("fan", n, format!("{} cones, {} maximal, ambient {}", c.len(), c.maximal_cones().len(), f.ambient()));
    }
    for (n, s) in &ws.subdivisions {
        let r = validate_subdivision(&s.sub);
        line("subdivision", n, format!("{} -> {}: {}", s.refined, s.target, if r.is_valid() { "valid".into() } else { r.violations.join("; ") }));
    }
    for (n, t) in &ws.types {
        let bal = is_balanced(&t.ty)?;
        let m = moduli_cone(&t.ty)?;
        let real = match &m {
            Some(m) => format!("realizable, moduli dim {}", m.dim()),
            None => "not realizable".into(),
        };
        line("type", n, format!("balanced {}, {real}", yes(bal)));
    }
    for (n, c) in &ws.cones {
        line("cone", n, format!("dim {}, pointed {}", c.dim(), yes(c.is_pointed())));
    }
    for (n, m) in &ws.monoids {
        line("monoid", n, format!("{} generators, sharp {}, saturated {}", m.generators().len(), yes(m.is_sharp()), yes(is_saturated(m)?)));
    }
    for (n, i) in &ws.ideals {
        let c = match i.ideal.complement() {
            Ok(v) => format!("finite complement of size {}", v.len()),
            Err(_) => "infinite complement".into(),
        };
        line("ideal", n, format!("on {}, {c}", i.monoid));
    }
    for (n, h) in &ws.homs {
        line("hom", n, format!("{} -> {}", h.source, h.target));
    }
    for (n, m) in &ws.maps {
        let r = m.map.validate();
        line("map", n, format!("{} -> {}: {}", m.source, m.target, if r.is_valid() { "valid".into() } else { r.violations.join("; ") }));
    }
    for (n, p) in &ws.puncturings {
        line("puncturing", n, format!("rank {}", p.rank));
    }
    for (n, t) in &ws.tables {
        line("table", n, format!("over {}, {} nonzero constants", t.classes, t.table.entries().count()));
    }
    for (n, d) in &ws.diagrams {
        line("diagram", n, format!("on {}, {} walls", d.fan, d.diagram.walls.len()));
    }
    Ok(ValidateReport { artifacts: out })
}

impl Render for ValidateReport {
    fn text(&self) -> String {
        let mut s = String::new();
        for a in &self.artifacts {
            let _ = writeln!(s, "{} {}: {}", a.kind, a.name, a.summary);
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HilbertReport {
    pub cone: String,
    pub ambient: usize,
    pub dim: usize,
    pub rays: Vec<IVec>,
    pub lineality: Vec<IVec>,
    pub facets: Vec<IVec>,
    pub equations: Vec<IVec>,
    pub hilbert_basis: Vec<IVec>,
}

pub fn cmd_hilbert(ws: &Workspace, sel: &Selection) -> Result<HilbertReport> {
    let (name, c) = Workspace::one(&ws.cones, sel.cone.as_deref(), "cone")?;
    let hb = if c.is_pointed() {
        c.hilbert_basis()?
    } else {
        saturation(&FineMonoid::new(c.ambient(), &c.generators())?)?.generators().to_vec()
    };
    Ok(HilbertReport {
        cone: name.clone(),
        ambient: c.ambient(),
        dim: c.dim(),
        rays: c.rays().to_vec(),
        lineality: c.lineality().to_vec(),
        facets: c.facets().to_vec(),
        equations: c.equations().to_vec(),
        hilbert_basis: hb,
    })
}

impl Render for HilbertReport {
    fn text(&self) -> String {
        let mut s = format!("cone {}: ambient {}, dim {}\n", self.cone, self.ambient, self.dim);
        for (label, v) in [
            ("rays", &self.rays),
            ("lineality", &self.lineality),
            ("facets", &self.facets),
            ("equations", &self.equations),
            ("hilbert basis", &self.hilbert_basis),
        ] {
            let _ = writeln!(s, "{label}: {}", list_text(v));
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MonoidLine {
    pub name: String,
    pub generators: Vec<IVec>,
    pub sharp: bool,
    pub saturated: bool,
    pub saturation: Vec<IVec>,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdealLine {
    pub name: String,
    pub generators: Vec<IVec>,
    pub radical_maximal: Option<bool>,
    pub complement: Option<Vec<IVec>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PreimageLine {
    pub hom: String,
    pub ideal: String,
    pub generators: Vec<IVec>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PushoutLine {
    pub left: String,
    pub right: String,
    pub generators: Option<Vec<IVec>>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PuncturingLine {
    pub name: String,
    pub ql: Vec<IVec>,
    pub prestable: Vec<IVec>,
    pub stalk: Vec<IVec>,
    /// Rows of the membership grid of the prestable monoid, top row first;
    /// '#' marks members.
    pub grid: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MonoidReport {
    pub monoids: Vec<MonoidLine>,
    pub ideals: Vec<IdealLine>,
    pub preimages: Vec<PreimageLine>,
    pub pushouts: Vec<PushoutLine>,
    pub puncturings: Vec<PuncturingLine>,
}

fn grid(m: &FineMonoid, lo: i64, hi: i64) -> Vec<String> {
    let pts: Vec<IVec> = (lo..=hi).rev().flat_map(|y| (lo..=hi).map(move |x| vec![x, y])).collect();
    let inside = m.contains_all(&pts);
    let w = (hi - lo + 1) as usize;
    inside.chunks(w).map(|row| row.iter().map(|&b| if b { '#' } else { '.' }).collect()).collect()
}

pub fn cmd_monoid(ws: &Workspace, sel: &Selection) -> Result<MonoidReport> {
    let mut r = MonoidReport { monoids: vec![], ideals: vec![], preimages: vec![], pushouts: vec![], puncturings: vec![] };
    for (n, m) in &ws.monoids {
        r.monoids.push(MonoidLine {
            name: n.clone(),
            generators: m.generators().to_vec(),
            sharp: m.is_sharp(),
            saturated: is_saturated(m)?,
            saturation: saturation(m)?.generators().to_vec(),
        });
    }
    for (n, i) in &ws.ideals {
        let radical = if i.ideal.monoid.is_sharp() { Some(radical_is_maximal(&i.ideal)?) } else { None };
        r.ideals.push(IdealLine {
            name: n.clone(),
            generators: i.ideal.gens.clone(),
            radical_maximal: radical,
            complement: i.ideal.complement().ok(),
        });
    }
    for (hn, h) in &ws.homs {
        for (iname, i) in &ws.ideals {
            if i.monoid == h.target {
                let p = ideal_preimage(&h.hom, &i.ideal)?;
                r.preimages.push(PreimageLine { hom: hn.clone(), ideal: iname.clone(), generators: p.gens });
            }
        }
    }
    let homs: Vec<_> = ws.homs.iter().collect();
    for (a, (an, ah)) in homs.iter().enumerate() {
        for (bn, bh) in &homs[a + 1..] {
            if ah.source != bh.source {
                continue;
            }
            let (g, e) = match fine_pushout(&ah.hom.target, &bh.hom.target, &ah.hom, &bh.hom) {
                Ok(m) => (Some(m.generators().to_vec()), None),
                Err(e) => (None, Some(e.to_string())),
            };
            r.pushouts.push(PushoutLine { left: (*an).clone(), right: (*bn).clone(), generators: g, error: e });
        }
    }
    for (n, p) in &ws.puncturings {
        let gd = FineMonoid::new(p.rank, &p.gamma_dual)?;
        let mu_dual = match (&p.mu, &p.mu_dual) {
            (Some(g), _) => {
                let mu = mu_from_images(p.rank + 1, &[LatticeCone::from_generators(p.rank + 1, g)?])?;
                mu.dual()?.hilbert_basis()?
            }
            (_, Some(d)) => d.clone(),
            _ => unreachable!("checked on load"),
        };
        let pb = match &p.pullback {
            Some(rows) => LatticeMap::new(rows.clone(), rows.first().map_or(0, |r| r.len()), rows.len())?,
            None => LatticeMap::identity(p.rank + 1),
        };
        let ql = puncturing_monoid_ql(&gd, &mu_dual, &pb)?;
        let pre = prestable_monoid(&ql, &p.rho)?;
        let stalk = pushforward_stalk_monoid(&gd, &p.rho)?;
        let g = match sel.grid {
            Some((lo, hi)) if pre.ambient() == 2 => Some(grid(&pre, lo, hi)),
            _ => None,
        };
        r.puncturings.push(PuncturingLine {
            name: n.clone(),
            ql: ql.generators().to_vec(),
            prestable: pre.generators().to_vec(),
            stalk: stalk.generators().to_vec(),
            grid: g,
        });
    }
    Ok(r)
}

impl Render for MonoidReport {
    fn text(&self) -> String {
        let mut s = String::new();
        for m in &self.monoids {
            let _ = writeln!(
                s,
                "monoid {}: generators {}, sharp {}, saturated {}, saturation {}",
                m.name,
                list_text(&m.generators),
                yes(m.sharp),
                yes(m.saturated),
                list_text(&m.saturation)
            );
        }
        for i in &self.ideals {
            let rad = match i.radical_maximal {
                Some(b) => yes(b).to_string(),
                None => "n/a".into(),
            };
            let comp = match &i.complement {
                Some(c) => list_text(c),
                None => "infinite".into(),
            };
            let _ = writeln!(s, "ideal {}: generators {}, radical maximal {rad}, complement {comp}", i.name, list_text(&i.generators));
        }
        for p in &self.preimages {
            let _ = writeln!(s, "preimage of {} under {}: {}", p.ideal, p.hom, list_text(&p.generators));
        }
        for p in &self.pushouts {
            match (&p.generators, &p.error) {
                (Some(g), _) => {
                    let _ = writeln!(s, "pushout of {} and {}: {}", p.left, p.right, list_text(g));
                }
                (_, e) => {
                    let _ = writeln!(s, "pushout of {} and {}: {}", p.left, p.right, e.clone().unwrap_or_default());
                }
            }
        }
        for p in &self.puncturings {
            let _ = writeln!(s, "puncturing {}:", p.name);
            let _ = writeln!(s, "  Q_l: {}", list_text(&p.ql));
            let _ = writeln!(s, "  prestable: {}", list_text(&p.prestable));
            let _ = writeln!(s, "  stalk: {}", list_text(&p.stalk));
            if let Some(g) = &p.grid {
                for row in g {
                    let _ = writeln!(s, "  {row}");
                }
            }
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CellLine {
    pub cone: Vec<IVec>,
    pub carrier: Vec<IVec>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SubdivisionReport {
    pub cells: Vec<CellLine>,
    pub valid: bool,
    pub violations: Vec<String>,
    /// For pull-sub: whether the map lifts through the subdivision, and the
    /// refined cone receiving each maximal source cone.
    pub lift: Option<LiftOut>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LiftOut {
    pub exists: bool,
    pub cells: Vec<CellLine>,
}

fn cells_of(k: &ConeComplex, carriers: &[(ConeId, LatticeMap)], target: &ConeComplex) -> Vec<CellLine> {
    k.maximal_cones()
        .into_iter()
        .map(|c| CellLine { cone: k.cone(c).rays().to_vec(), carrier: target.cone(carriers[c].0).rays().to_vec() })
        .collect()
}

pub fn cmd_push_sub(ws: &Workspace, sel: &Selection) -> Result<SubdivisionReport> {
    let (_, m) = Workspace::one(&ws.maps, sel.map.as_deref(), "map")?;
    let s = pushforward_subdivision(&m.map)?;
    let rep = validate_subdivision(&s);
    Ok(SubdivisionReport {
        cells: cells_of(s.source(), &s.map.assign, s.target()),
        valid: rep.is_valid(),
        violations: rep.violations,
        lift: None,
    })
}

pub fn cmd_pull_sub(ws: &Workspace, sel: &Selection) -> Result<SubdivisionReport> {
    let (mname, m) = Workspace::one(&ws.maps, sel.map.as_deref(), "map")?;
    let (sname, se) = Workspace::one(&ws.subdivisions, sel.subdivision.as_deref(), "subdivision")?;
    if m.target != se.target {
        return Err(Error::Invalid(format!("map {mname} lands in {}, subdivision {sname} refines {}", m.target, se.target)));
    }
    let (pulled, _) = pullback_subdivision(&m.map, &se.sub)?;
    let rep = validate_subdivision(&pulled);
    let lift = match lift_through_subdivision(&m.map, &se.sub, None)? {
        Some(g) => LiftOut { exists: true, cells: cells_of(&m.map.source, &g.assign, se.sub.source()) },
        None => LiftOut { exists: false, cells: vec![] },
    };
    Ok(SubdivisionReport {
        cells: cells_of(pulled.source(), &pulled.map.assign, pulled.target()),
        valid: rep.is_valid(),
        violations: rep.violations,
        lift: Some(lift),
    })
}

impl Render for SubdivisionReport {
    fn text(&self) -> String {
        let mut s = format!("cells: {}\n", self.cells.len());
        for c in &self.cells {
            let _ = writeln!(s, "  {} in {}", cone_text(&c.cone), cone_text(&c.carrier));
        }
        let _ = writeln!(s, "valid: {}", yes(self.valid));
        for v in &self.violations {
            let _ = writeln!(s, "  violation: {v}");
        }
        if let Some(l) = &self.lift {
            let _ = writeln!(s, "lift through subdivision: {}", yes(l.exists));
            for c in &l.cells {
                let _ = writeln!(s, "  {} -> {}", cone_text(&c.cone), cone_text(&c.carrier));
            }
        }
        s
    }

    fn code(&self) -> i32 {
        if self.valid {
            0
        } else {
            2
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WallReport {
    pub r#type: String,
    pub valid: bool,
    pub violations: Vec<String>,
    pub kappa: Option<String>,
}

pub fn cmd_wall(ws: &Workspace, sel: &Selection) -> Result<WallReport> {
    let (tname, te) = Workspace::one(&ws.types, sel.ty.as_deref(), "type")?;
    let n = ws.fan(&te.fan)?.ambient();
    let rep = validate_wall_type(&te.ty, &ws.skeleton(&te.fan)?, n);
    let k = if rep.is_valid() { Some(big(&kappa(&te.ty)?)) } else { None };
    Ok(WallReport { r#type: tname.clone(), valid: rep.is_valid(), violations: rep.violations, kappa: k })
}

impl Render for WallReport {
    fn text(&self) -> String {
        let mut s = format!("type {}: wall type {}\n", self.r#type, yes(self.valid));
        for v in &self.violations {
            let _ = writeln!(s, "  violation: {v}");
        }
        if let Some(k) = &self.kappa {
            let _ = writeln!(s, "kappa: {k}");
        }
        s
    }

    fn code(&self) -> i32 {
        if self.valid {
            0
        } else {
            2
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TermOut {
    pub m: IVec,
    pub class: IVec,
    pub c: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct WallOut {
    pub support: Vec<IVec>,
    pub direction: IVec,
    pub terms: Vec<TermOut>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessOut {
    pub support: Vec<IVec>,
    pub monomial: IVec,
    pub class: IVec,
    pub pushed: String,
    pub reference: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScatterReport {
    pub walls: Vec<WallOut>,
    pub reference: Option<String>,
    pub equivalent: Option<bool>,
    pub witness: Option<WitnessOut>,
}

fn diagram_out(d: &ScatteringDiagram) -> Vec<WallOut> {
    d.walls
        .iter()
        .map(|w| WallOut {
            support: w.support.generators(),
            direction: w.direction.clone(),
            terms: w.function.terms().map(|(m, a, c)| TermOut { m: m.clone(), class: a.clone(), c: fmt_rat(c) }).collect(),
        })
        .collect()
}

/// Carriers in the base of the images of the upstairs skeleton cones.
fn image_skeleton(d: &ScatteringDiagram, s: &troplift_core::complex::Subdivision) -> Result<Vec<ConeId>> {
    let mut out = vec![];
    for &c in &d.skeleton {
        let img = d.target.cone(c).image(&s.map.assign[c].1)?;
        if let Some(t) = s.target().carrier_of_cone(&img) {
            out.push(t);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

pub fn cmd_scatter_push(ws: &Workspace, sel: &Selection) -> Result<ScatterReport> {
    let (sname, se) = Workspace::one(&ws.subdivisions, sel.subdivision.as_deref(), "subdivision")?;
    let (hname, he) = Workspace::one(&ws.homs, sel.hom.as_deref(), "hom")?;
    let on = |fan: &str| ws.diagrams.iter().filter(|(_, d)| d.fan == fan).map(|(n, _)| n.clone()).collect::<Vec<_>>();
    let pick = |given: &Option<String>, fan: &str, what: &str| -> Result<Option<String>> {
        if let Some(g) = given {
            return Ok(Some(g.clone()));
        }
        let c = on(fan);
        match c.len() {
            0 => Ok(None),
            1 => Ok(Some(c[0].clone())),
            _ => Err(Error::Invalid(format!("several {what} diagrams on {fan}; choose one by name"))),
        }
    };
    let up = pick(&sel.diagram, &se.refined, "upstairs")?
        .ok_or_else(|| Error::Invalid(format!("no diagram on {}, the refined fan of {sname}", se.refined)))?;
    let up = ws.diagrams.get(&up).ok_or_else(|| Error::Invalid(format!("unknown diagram {up:?}")))?;
    if up.classes != he.source {
        return Err(Error::Invalid(format!("hom {hname} starts at {}, diagram classes are {}", he.source, up.classes)));
    }
    let reference = pick(&sel.reference, &se.target, "reference")?;
    let refd = match &reference {
        Some(r) => Some(ws.diagrams.get(r).ok_or_else(|| Error::Invalid(format!("unknown diagram {r:?}")))?),
        None => None,
    };
    let base_fan = ws.fan(&se.target)?;
    let (ring, skeleton) = match refd {
        Some(d) => (d.diagram.ring.clone(), d.diagram.skeleton.clone()),
        None => {
            let ideals: Vec<_> = ws.ideals.iter().filter(|(_, i)| i.monoid == he.target).collect();
            if ideals.len() != 1 {
                return Err(Error::Invalid(format!("need exactly one ideal on {} without a reference diagram", he.target)));
            }
            let ring = ws.ring(&he.target, ideals[0].0, base_fan.ambient())?;
            let sk = if base_fan.skeleton.is_some() || base_fan.coefficients.is_some() {
                ws.skeleton(&se.target)?
            } else {
                image_skeleton(&up.diagram, &se.sub)?
            };
            (ring, sk)
        }
    };
    if let Some(d) = refd {
        if d.classes != he.target {
            return Err(Error::Invalid(format!("reference diagram classes are {}, hom {hname} ends at {}", d.classes, he.target)));
        }
    }
    let pushed = pushforward_diagram(&up.diagram, &se.sub, &he.hom, &ring, &skeleton)?;
    let (equivalent, witness) = match refd {
        Some(d) => match diagrams_equivalent(&pushed, &d.diagram)? {
            None => (Some(true), None),
            Some(w) => (
                Some(false),
                Some(WitnessOut {
                    support: w.support.generators(),
                    monomial: w.monomial,
                    class: w.class,
                    pushed: fmt_rat(&w.left),
                    reference: fmt_rat(&w.right),
                }),
            ),
        },
        None => (None, None),
    };
    Ok(ScatterReport { walls: diagram_out(&pushed), reference, equivalent, witness })
}

impl Render for ScatterReport {
    fn text(&self) -> String {
        let mut s = format!("pushed walls: {}\n", self.walls.len());
        for w in &self.walls {
            let terms: Vec<String> = w
                .terms
                .iter()
                .map(|t| format!("{} z^{} q^{}", t.c, vec_text(&t.m), vec_text(&t.class)))
                .collect();
            let _ = writeln!(s, "  support {}, direction {}: {}", cone_text(&w.support), vec_text(&w.direction), terms.join(" + "));
        }
        match (&self.reference, self.equivalent) {
            (Some(r), Some(true)) => {
                let _ = writeln!(s, "equivalent to {r}");
            }
            (Some(r), Some(false)) => {
                let _ = writeln!(s, "inequivalent to {r}");
                if let Some(w) = &self.witness {
                    let _ = writeln!(
                        s,
                        "  witness: support {}, monomial z^{} q^{}, pushed {}, reference {}",
                        cone_text(&w.support),
                        vec_text(&w.monomial),
                        vec_text(&w.class),
                        w.pushed,
                        w.reference
                    );
                }
            }
            _ => {}
        }
        s
    }

    fn code(&self) -> i32 {
        if self.equivalent == Some(false) {
            2
        } else {
            0
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ViolationOut {
    pub p: IVec,
    pub q: IVec,
    pub r: IVec,
    pub class: IVec,
    pub downstairs: String,
    pub pushed: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct MirrorReport {
    pub upstairs: String,
    pub downstairs: String,
    pub pass: bool,
    pub violations: Vec<ViolationOut>,
}

pub fn cmd_mirror_check(ws: &Workspace, sel: &Selection) -> Result<MirrorReport> {
    let (hname, he) = Workspace::one(&ws.homs, sel.hom.as_deref(), "hom")?;
    let find = |given: &Option<String>, classes: &str| -> Result<String> {
        if let Some(g) = given {
            return Ok(g.clone());
        }
        let c: Vec<_> = ws.tables.iter().filter(|(_, t)| t.classes == classes).map(|(n, _)| n.clone()).collect();
        match c.len() {
            1 => Ok(c[0].clone()),
            _ => Err(Error::Invalid(format!("need exactly one table over {classes} for hom {hname}"))),
        }
    };
    let up = find(&sel.up, &he.source)?;
    let down = find(&sel.down, &he.target)?;
    let get = |n: &str| ws.tables.get(n).ok_or_else(|| Error::Invalid(format!("unknown table {n:?}")));
    let v = mirror_pushforward_check(&get(&up)?.table, &get(&down)?.table, &he.hom)?;
    Ok(MirrorReport {
        upstairs: up,
        downstairs: down,
        pass: v.is_empty(),
        violations: v
            .into_iter()
            .map(|x| ViolationOut {
                p: x.p,
                q: x.q,
                r: x.r,
                class: x.class,
                downstairs: fmt_rat(&x.downstairs),
                pushed: fmt_rat(&x.pushed),
            })
            .collect(),
    })
}

impl Render for MirrorReport {
    fn text(&self) -> String {
        let mut s = format!("{} pushed to {}: {}\n", self.upstairs, self.downstairs, if self.pass { "pass" } else { "fail" });
        for v in &self.violations {
            let _ = writeln!(
                s,
                "  N[p={} q={} r={} A={}]: downstairs {}, pushed sum {}",
                vec_text(&v.p),
                vec_text(&v.q),
                vec_text(&v.r),
                vec_text(&v.class),
                v.downstairs,
                v.pushed
            );
        }
        s
    }

    fn code(&self) -> i32 {
        if self.pass {
            0
        } else {
            2
        }
    }
}
