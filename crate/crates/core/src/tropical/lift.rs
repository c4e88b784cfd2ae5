//! Tropical lifts of a type through a subdivision of its target.
//!
//! Over each maximal cell ω of the induced subdivision τ̃ of τ, the curve
//! combinatorics is constant: every vertex stays in one cone of the refined
//! fan and every edge or leg crosses the refined walls at points that move
//! linearly with y ∈ ω. Those crossing points become new vertices; their
//! positions along the segment are the graph functions ρ.

use super::{moduli_cone, type_isomorphism, Edge, Leg, ModuliCone, TropicalType, Vertex};
use crate::complex::{
    covers, pullback_subdivision, pushforward_subdivision, ConeComplex, ConeId, Subdivision,
};
use crate::cone::LatticeCone;
use crate::error::{semantic, Error, Result};
use crate::lattice::{integrality_sublattice, smith_torsion, LatticeMap};
use crate::num::{dot, dot_rat, sign_rat, to_rvec, IVec, RVec, Rat};
use crate::par;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::sync::Arc;

/// Where a vertex of a lift comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Origin {
    Base(usize),
    /// i-th crossing (0-based) along a base edge.
    EdgeBreak(usize, usize),
    /// i-th crossing along a base leg.
    LegBreak(usize, usize),
}

#[derive(Debug, Clone)]
pub struct TropicalLift {
    pub gamma: TropicalType,
    /// The cell ω of τ̃, in the coordinates of τ.
    pub cell: LatticeCone,
    /// Λ_γ → Λ_τ; its columns span the sublattice on which all edge lengths
    /// and vertex positions are integral.
    pub inclusion: LatticeMap,
    /// ω in the coordinates of Λ_γ.
    pub gamma_cone: LatticeCone,
    pub origin: Vec<Origin>,
    /// Per vertex of γ, its position as n rational functionals on Λ_τ.
    pub positions: Vec<Vec<RVec>>,
    /// Per edge of γ, its length as a rational functional on Λ_τ.
    pub lengths: Vec<RVec>,
    /// Per base leg: chosen cutoff and the number of crossings available.
    pub truncation: Vec<usize>,
    pub chain: Vec<usize>,
    /// Per base leg: crossing parameters and the end of a bounded leg.
    pub leg_breaks: Vec<Vec<RVec>>,
    pub leg_end: Vec<Option<RVec>>,
    pub maximal: bool,
}

impl TropicalLift {
    /// The truncation order: same cell, componentwise smaller cutoffs.
    pub fn precedes(&self, other: &TropicalLift) -> bool {
        self.cell == other.cell && self.truncation.iter().zip(&other.truncation).all(|(a, b)| a <= b)
    }
}

pub fn lattice_index(l: &TropicalLift) -> BigInt {
    smith_torsion(&l.inclusion).torsion_order
}

fn eval(f: &RVec, y: &[i64]) -> Rat {
    f.iter().zip(y).map(|(a, &b)| a * Rat::from_integer(b.into())).sum()
}

fn point(h: &LatticeMap, t: &Rat, u: &[i64], y: &[i64]) -> RVec {
    h.apply(y)
        .iter()
        .zip(u)
        .map(|(&p, &ui)| Rat::from_integer(p.into()) + t * Rat::from_integer(ui.into()))
        .collect()
}

fn not_generic() -> Error {
    Error::Semantic("cell not generic".into())
}

/// A straight piece of the curve starting at h(y) in direction u and
/// ending at `end(y)` (or running forever), cut by the refined fan.
struct Walk {
    /// Crossing parameters as functionals on Λ_τ.
    breaks: Vec<RVec>,
    /// Refined cone of each crossing point.
    break_cones: Vec<ConeId>,
    /// Refined cone of each open interval (breaks.len() + 1 of them).
    pieces: Vec<ConeId>,
}

fn walk(
    s: &Subdivision,
    base_cone: ConeId,
    h: &LatticeMap,
    u: &IVec,
    end: Option<&RVec>,
    rays: &[IVec],
    y0: &[i64],
) -> Result<Walk> {
    let src = s.source();
    let p0 = h.apply(y0);
    let endv = end.map(|e| eval(e, y0));
    let mut ts: Vec<Rat> = vec![];
    if u.iter().any(|&x| x != 0) {
        for &c in &s.fibers[base_cone] {
            for f in src.cone(c).facets() {
                let fu = dot(f, u);
                if fu == 0 {
                    continue;
                }
                let t = Rat::new(BigInt::from(-dot(f, &p0)), BigInt::from(fu));
                if t.is_positive() && endv.as_ref().map_or(true, |e| &t < e) && !ts.contains(&t) {
                    ts.push(t);
                }
            }
        }
    }
    ts.sort();
    // carriers of the open intervals
    let mut bounds = vec![Rat::zero()];
    bounds.extend(ts.iter().cloned());
    let last = match &endv {
        Some(e) => e.clone(),
        None => ts.last().cloned().unwrap_or_else(Rat::zero) + Rat::from_integer(2.into()),
    };
    bounds.push(last);
    let two = Rat::from_integer(2.into());
    let mut interval_cones = vec![];
    for w in bounds.windows(2) {
        let mid = (&w[0] + &w[1]) / &two;
        let q = point(h, &mid, u, y0);
        interval_cones.push(src.carrier(&q).ok_or_else(|| Error::Semantic("curve leaves the refined support".into()))?);
    }
    // keep only genuine changes of cone
    let mut pieces = vec![interval_cones[0]];
    let mut kept_t = vec![];
    for (i, t) in ts.iter().enumerate() {
        if interval_cones[i + 1] != *pieces.last().unwrap() {
            kept_t.push(t.clone());
            pieces.push(interval_cones[i + 1]);
        }
    }
    let mut breaks = vec![];
    let mut break_cones = vec![];
    for (i, t) in kept_t.iter().enumerate() {
        let q = point(h, t, u, y0);
        break_cones.push(src.carrier(&q).ok_or_else(not_generic)?);
        let before = src.cone(pieces[i]);
        let after = src.cone(pieces[i + 1]);
        let f = before
            .facets()
            .iter()
            .find(|f| dot_rat(f, &q).is_zero() && dot(f, u) < 0)
            .or_else(|| after.facets().iter().find(|f| dot_rat(f, &q).is_zero() && dot(f, u) > 0))
            .ok_or_else(not_generic)?;
        let fu = Rat::from_integer(dot(f, u).into());
        let fh = h.pullback(f);
        breaks.push(fh.iter().map(|&x| -Rat::from_integer(x.into()) / &fu).collect::<RVec>());
    }
    // the same combinatorics must hold on every ray of the cell
    for r in rays {
        let mut ts_r: Vec<Rat> = vec![Rat::zero()];
        ts_r.extend(breaks.iter().map(|b| eval(b, r)));
        if let Some(e) = end {
            ts_r.push(eval(e, r));
        }
        if ts_r.windows(2).any(|w| w[0] > w[1]) {
            return Err(not_generic());
        }
        for (i, &c) in pieces.iter().enumerate() {
            let cone = src.cone(c);
            let a = point(h, &ts_r[i], u, r);
            if !cone.contains(&a, false) {
                return Err(not_generic());
            }
            match ts_r.get(i + 1) {
                Some(b) => {
                    if !cone.contains(&point(h, b, u, r), false) {
                        return Err(not_generic());
                    }
                }
                None => {
                    if !cone.contains_int(u, false) {
                        return Err(not_generic());
                    }
                }
            }
        }
        for (i, &c) in break_cones.iter().enumerate() {
            if !src.cone(c).contains(&point(h, &ts_r[i + 1], u, r), false) {
                return Err(not_generic());
            }
        }
    }
    Ok(Walk { breaks, break_cones, pieces })
}

/// End of a punctured leg: the first exit from its cone, if any.
fn leg_end(
    tau: &ModuliCone,
    l: usize,
    rays: &[IVec],
    y0: &[i64],
) -> Result<Option<RVec>> {
    let leg = &tau.ty.legs[l];
    let h = &tau.positions[leg.vertex];
    let cone = tau.ty.target.cone(leg.cone);
    let cands: Vec<RVec> = cone
        .facets()
        .iter()
        .filter(|f| dot(f, &leg.u) < 0)
        .map(|f| {
            let fu = Rat::from_integer(dot(f, &leg.u).into());
            h.pullback(f).iter().map(|&x| -Rat::from_integer(x.into()) / &fu).collect()
        })
        .collect();
    if cands.is_empty() {
        return Ok(None);
    }
    let best = cands.iter().min_by(|a, b| eval(a, y0).cmp(&eval(b, y0))).unwrap().clone();
    for r in rays {
        let v = eval(&best, r);
        if cands.iter().any(|c| eval(c, r) < v) {
            return Err(not_generic());
        }
    }
    Ok(Some(best))
}

struct CellData {
    cell: LatticeCone,
    vertex_cones: Vec<ConeId>,
    edge_walks: Vec<Walk>,
    leg_walks: Vec<Walk>,
    leg_ends: Vec<Option<RVec>>,
}

fn analyse_cell(tau: &ModuliCone, s: &Subdivision, cell: &LatticeCone) -> Result<CellData> {
    if !cell.is_pointed() {
        return semantic("moduli cells must be pointed");
    }
    let rays = cell.rays().to_vec();
    let y0 = cell.relint_point();
    let src = s.source();
    let t = &tau.ty;
    let mut vertex_cones = vec![];
    for (v, h) in tau.positions.iter().enumerate() {
        let p = h.apply(&y0);
        let c = src.carrier(&to_rvec(&p)).ok_or_else(|| Error::Semantic(format!("vertex {v} leaves the refined support")))?;
        if rays.iter().any(|r| !src.cone(c).contains_int(&h.apply(r), false)) {
            return Err(not_generic());
        }
        vertex_cones.push(c);
    }
    let mut edge_walks = vec![];
    for (k, e) in t.edges.iter().enumerate() {
        let len: RVec = to_rvec(&tau.lengths[k]);
        edge_walks.push(walk(s, e.cone, &tau.positions[e.tail], &e.u, Some(&len), &rays, &y0)?);
    }
    let mut leg_walks = vec![];
    let mut leg_ends = vec![];
    for (k, l) in t.legs.iter().enumerate() {
        let end = if l.punctured { leg_end(tau, k, &rays, &y0)? } else { None };
        leg_walks.push(walk(s, l.cone, &tau.positions[l.vertex], &l.u, end.as_ref(), &rays, &y0)?);
        leg_ends.push(end);
    }
    Ok(CellData { cell: cell.clone(), vertex_cones, edge_walks, leg_walks, leg_ends })
}

fn add_scaled(h: &LatticeMap, t: &RVec, u: &IVec) -> Vec<RVec> {
    (0..h.target.rank)
        .map(|i| {
            h.matrix[i]
                .iter()
                .zip(t)
                .map(|(&a, b)| Rat::from_integer(a.into()) + b * Rat::from_integer(u[i].into()))
                .collect()
        })
        .collect()
}

fn sub_rv(a: &RVec, b: &RVec) -> RVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn build_lift(tau: &ModuliCone, s: &Subdivision, cd: &CellData, choice: &[usize]) -> Result<TropicalLift> {
    let t = &tau.ty;
    let d = tau.lattice_rank();
    let zero: RVec = vec![Rat::zero(); d];
    let mut vertices: Vec<Vertex> = vec![];
    let mut origin = vec![];
    let mut positions: Vec<Vec<RVec>> = vec![];
    for (v, vert) in t.vertices.iter().enumerate() {
        vertices.push(Vertex { genus: vert.genus, cone: cd.vertex_cones[v], degree: vert.degree.clone() });
        origin.push(Origin::Base(v));
        positions.push(add_scaled(&tau.positions[v], &zero, &vec![0; t.target.ambient().unwrap()]));
    }
    let mut edges = vec![];
    let mut lengths = vec![];
    for (k, e) in t.edges.iter().enumerate() {
        let w = &cd.edge_walks[k];
        let mut chain = vec![e.tail];
        for (i, b) in w.breaks.iter().enumerate() {
            chain.push(vertices.len());
            vertices.push(Vertex { genus: 0, cone: w.break_cones[i], degree: None });
            origin.push(Origin::EdgeBreak(k, i));
            positions.push(add_scaled(&tau.positions[e.tail], b, &e.u));
        }
        chain.push(e.head);
        let mut ts = vec![zero.clone()];
        ts.extend(w.breaks.iter().cloned());
        ts.push(to_rvec(&tau.lengths[k]));
        for i in 0..chain.len() - 1 {
            edges.push(Edge { tail: chain[i], head: chain[i + 1], cone: w.pieces[i], u: e.u.clone() });
            lengths.push(sub_rv(&ts[i + 1], &ts[i]));
        }
    }
    let mut legs = vec![];
    for (k, l) in t.legs.iter().enumerate() {
        let w = &cd.leg_walks[k];
        let c = choice[k];
        let mut prev = l.vertex;
        let mut prev_t = zero.clone();
        for i in 0..c {
            let b = &w.breaks[i];
            let nv = vertices.len();
            vertices.push(Vertex { genus: 0, cone: w.break_cones[i], degree: None });
            origin.push(Origin::LegBreak(k, i));
            positions.push(add_scaled(&tau.positions[l.vertex], b, &l.u));
            edges.push(Edge { tail: prev, head: nv, cone: w.pieces[i], u: l.u.clone() });
            lengths.push(sub_rv(b, &prev_t));
            prev = nv;
            prev_t = b.clone();
        }
        legs.push(Leg { vertex: prev, cone: w.pieces[c], u: l.u.clone(), punctured: l.punctured });
    }
    let gamma = TropicalType { target: s.source().clone(), vertices, edges, legs };
    let mut functions: Vec<RVec> = lengths.clone();
    for p in &positions {
        functions.extend(p.iter().cloned());
    }
    let sub = integrality_sublattice(&cd.cell, &functions)?;
    let inclusion = LatticeMap::from_columns(&sub.basis, d);
    let gamma_cone = cd.cell.preimage(&inclusion)?;
    let chain: Vec<usize> = cd.leg_walks.iter().map(|w| w.breaks.len()).collect();
    let maximal = t.legs.iter().enumerate().all(|(k, l)| !l.punctured || choice[k] == chain[k]);
    Ok(TropicalLift {
        gamma,
        cell: cd.cell.clone(),
        inclusion,
        gamma_cone,
        origin,
        positions,
        lengths,
        truncation: choice.to_vec(),
        chain,
        leg_breaks: cd.leg_walks.iter().map(|w| w.breaks.clone()).collect(),
        leg_end: cd.leg_ends.clone(),
        maximal,
    })
}

fn choices(t: &TropicalType, chain: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for (k, l) in t.legs.iter().enumerate() {
        let opts: Vec<usize> = if l.punctured { (0..=chain[k]).collect() } else { vec![chain[k]] };
        let mut next = vec![];
        for pre in &out {
            for &o in &opts {
                let mut v = pre.clone();
                v.push(o);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// The subdivision τ̃ of τ induced by pulling `s` back to the universal
/// family and projecting.
pub fn induced_subdivision(tau: &ModuliCone, s: &Subdivision) -> Result<Subdivision> {
    let (pulled, _) = pullback_subdivision(&tau.family_map, s)?;
    let pi = tau.projection.compose(&pulled.map)?;
    pushforward_subdivision(&pi)
}

/// All lifts of τ through `s`, grouped over the maximal cells of τ̃ and
/// ordered by cell then truncation vector.
pub fn enumerate_lifts(tau: &ModuliCone, s: &Subdivision) -> Result<Vec<TropicalLift>> {
    let rep = crate::complex::validate_subdivision(s);
    if !rep.is_valid() {
        return Err(Error::Invalid(format!("subdivision: {}", rep.violations.join("; "))));
    }
    if !Arc::ptr_eq(&tau.ty.target, s.target()) && *tau.ty.target != **s.target() {
        return Err(Error::Invalid("subdivision target differs from the type's target".into()));
    }
    if s.source().ambient() != tau.ty.target.ambient() {
        return Err(Error::Invalid("refined fan must live in the target's lattice".into()));
    }
    let tt = induced_subdivision(tau, s)?;
    let cells: Vec<LatticeCone> = tt
        .source()
        .maximal_cones()
        .into_iter()
        .map(|i| tt.source().cone(i).clone())
        .filter(|c| c.dim() == tau.dim())
        .collect();
    let data: Vec<Result<CellData>> = par::map(&cells, |c| analyse_cell(tau, s, c));
    let data: Vec<CellData> = data.into_iter().collect::<Result<_>>()?;
    let data = merge_cells(tau, s, data)?;
    let mut out = vec![];
    for cd in &data {
        let chain: Vec<usize> = cd.leg_walks.iter().map(|w| w.breaks.len()).collect();
        let opts = choices(&tau.ty, &chain);
        let lifts: Vec<Result<TropicalLift>> = par::map(&opts, |ch| build_lift(tau, s, cd, ch));
        for l in lifts {
            out.push(l?);
        }
    }
    out.sort_by(|a, b| (&a.cell, &a.truncation).cmp(&(&b.cell, &b.truncation)));
    Ok(out)
}

/// Cells carrying the same combinatorics are glued when their union is a
/// cone; the maximal lift type then has one moduli cone.
fn merge_cells(tau: &ModuliCone, s: &Subdivision, data: Vec<CellData>) -> Result<Vec<CellData>> {
    let key = |cd: &CellData| -> Result<TropicalType> {
        let chain: Vec<usize> = cd.leg_walks.iter().map(|w| w.breaks.len()).collect();
        Ok(build_lift(tau, s, cd, &chain)?.gamma)
    };
    let mut groups: Vec<(TropicalType, Vec<CellData>)> = vec![];
    for cd in data {
        let k = key(&cd)?;
        match groups.iter_mut().find(|(g, _)| *g == k) {
            Some((_, v)) => v.push(cd),
            None => groups.push((k, vec![cd])),
        }
    }
    let mut out = vec![];
    for (_, mut cds) in groups {
        if cds.len() == 1 {
            out.push(cds.pop().unwrap());
            continue;
        }
        let gens: Vec<IVec> = cds.iter().flat_map(|c| c.cell.generators()).collect();
        let hull = LatticeCone::from_generators(cds[0].cell.ambient(), &gens)?;
        let parts: Vec<&LatticeCone> = cds.iter().map(|c| &c.cell).collect();
        if covers(&hull, &parts) {
            out.push(analyse_cell(tau, s, &hull)?);
        } else {
            out.extend(cds);
        }
    }
    Ok(out)
}

/// Matches γ (a type on s.source) against the lifts of τ.
pub fn is_tropical_lift(gamma: &TropicalType, tau: &ModuliCone, s: &Subdivision) -> Result<Option<TropicalLift>> {
    let lifts = enumerate_lifts(tau, s)?;
    Ok(lifts.into_iter().find(|l| type_isomorphism(gamma, &l.gamma).is_some()))
}

#[derive(Debug, Clone)]
pub struct StratumLifts {
    /// The cells of τ̃′ marked by γ, with their faces, in τ′ coordinates.
    pub complex: ConeComplex,
    pub lifts: Vec<TropicalLift>,
}

/// Lifts of τ′ marked by the lift γ of its face τ. `face` maps Λ_τ into
/// Λ_τ′ and identifies τ with a face of τ′; legs correspond by index.
pub fn lifts_over_stratum(
    tauprime: &ModuliCone,
    tau: &ModuliCone,
    face: &LatticeMap,
    gamma: &TropicalLift,
    s: &Subdivision,
) -> Result<StratumLifts> {
    let img = tau.cone.image(face)?;
    if !img.is_face_of(&tauprime.cone) || img.dim() != tau.dim() {
        return semantic("τ is not a face of τ′");
    }
    if tau.ty.legs.len() != tauprime.ty.legs.len() {
        return semantic("leg sets of τ and τ′ differ");
    }
    let lifts = enumerate_lifts(tauprime, s)?;
    let gimg = gamma.cell.image(face)?;
    let p = face.apply(&gamma.cell.relint_point());
    let mut cells: Vec<LatticeCone> = vec![];
    for l in &lifts {
        if gimg.is_face_of(&l.cell) && !cells.contains(&l.cell) {
            cells.push(l.cell.clone());
        }
    }
    let mut chosen = vec![];
    for cell in &cells {
        let over: Vec<&TropicalLift> = lifts.iter().filter(|l| &l.cell == cell).collect();
        let top = over.iter().find(|l| l.maximal).ok_or_else(|| Error::Semantic("no maximal lift".into()))?;
        let mut want = vec![];
        for (k, leg) in tauprime.ty.legs.iter().enumerate() {
            if !leg.punctured {
                want.push(top.chain[k]);
                continue;
            }
            let mut ts: Vec<Rat> = vec![Rat::zero()];
            ts.extend(top.leg_breaks[k].iter().map(|b| eval(b, &p)));
            let ends: Option<Rat> = top.leg_end[k].as_ref().map(|e| eval(e, &p));
            let surviving: Vec<usize> = (0..ts.len())
                .filter(|&i| match ts.get(i + 1).or(ends.as_ref()) {
                    Some(next) => sign_rat(&(next - &ts[i])) > 0,
                    None => true,
                })
                .collect();
            let c = *surviving
                .get(gamma.truncation[k])
                .ok_or_else(|| Error::Semantic("stratum lift mismatch".into()))?;
            want.push(c);
        }
        let l = over
            .iter()
            .find(|l| l.truncation == want)
            .ok_or_else(|| Error::Semantic("stratum lift mismatch".into()))?;
        let src = s.source();
        for (k, leg) in gamma.gamma.legs.iter().enumerate() {
            if !src.is_face(leg.cone, l.gamma.legs[k].cone) {
                return semantic("stratum lift mismatch");
            }
        }
        chosen.push((*l).clone());
    }
    let complex = ConeComplex::fan(tauprime.lattice_rank(), &cells)?;
    Ok(StratumLifts { complex, lifts: chosen })
}

/// Recomputes the moduli cone of a lift directly on the refined target.
pub fn recompute_moduli(l: &TropicalLift) -> Result<Option<ModuliCone>> {
    moduli_cone(&l.gamma)
}
