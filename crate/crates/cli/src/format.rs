//! Input schemas. Every artifact is a JSON object with a "kind" tag and a
//! unique "name"; a file holds one artifact or an array of them. Cones of a
//! fan are referenced by lists of ray ids ([] is the origin); rationals are
//! strings "p/q" (bare integers are accepted too).

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use troplift_core::num::{fmt_rat, parse_rat, IVec, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Q(pub Rat);

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(x) => Ok(Q(Rat::from_integer(BigInt::from(x)))),
            Raw::Str(s) => parse_rat(&s).map(Q).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}"))),
        }
    }
}

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rat(&self.0))
    }
}

pub type ConeRef = Vec<usize>;

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Artifact {
    Fan(FanFile),
    Subdivision(SubdivisionFile),
    Type(TypeFile),
    Cone(ConeFile),
    Monoid(MonoidFile),
    Ideal(IdealFile),
    Hom(HomFile),
    Map(MapFile),
    Puncturing(PuncturingFile),
    Table(TableFile),
    Diagram(DiagramFile),
}

impl Artifact {
    pub fn name(&self) -> &str {
        match self {
            Artifact::Fan(x) => &x.name,
            Artifact::Subdivision(x) => &x.name,
            Artifact::Type(x) => &x.name,
            Artifact::Cone(x) => &x.name,
            Artifact::Monoid(x) => &x.name,
            Artifact::Ideal(x) => &x.name,
            Artifact::Hom(x) => &x.name,
            Artifact::Map(x) => &x.name,
            Artifact::Puncturing(x) => &x.name,
            Artifact::Table(x) => &x.name,
            Artifact::Diagram(x) => &x.name,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Artifact::Fan(_) => "fan",
            Artifact::Subdivision(_) => "subdivision",
            Artifact::Type(_) => "type",
            Artifact::Cone(_) => "cone",
            Artifact::Monoid(_) => "monoid",
            Artifact::Ideal(_) => "ideal",
            Artifact::Hom(_) => "hom",
            Artifact::Map(_) => "map",
            Artifact::Puncturing(_) => "puncturing",
            Artifact::Table(_) => "table",
            Artifact::Diagram(_) => "diagram",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RayCoefficient {
    pub ray: IVec,
    pub a: Q,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanFile {
    pub name: String,
    pub ambient: usize,
    pub rays: Vec<IVec>,
    /// Maximal cones as ray-id lists; faces are added automatically.
    pub cones: Vec<ConeRef>,
    /// Per-cone lattice overrides. Only the ambient lattice is supported.
    #[serde(default)]
    pub lattices: Option<serde_json::Value>,
    /// Skeleton cones for scattering, either listed or as the zero locus of
    /// divisor coefficients on the rays.
    #[serde(default)]
    pub skeleton: Option<Vec<ConeRef>>,
    #[serde(default)]
    pub coefficients: Option<Vec<RayCoefficient>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Assignment {
    pub cone: ConeRef,
    pub into: ConeRef,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubdivisionFile {
    pub name: String,
    pub target: String,
    /// The refined fan; registered in the workspace under its own name.
    pub refined: FanFile,
    #[serde(default)]
    pub assignment: Vec<Assignment>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexSpec {
    #[serde(default)]
    pub genus: u32,
    pub cone: ConeRef,
    #[serde(default)]
    pub degree: Option<IVec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub tail: usize,
    pub head: usize,
    pub cone: ConeRef,
    pub u: IVec,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LegSpec {
    pub vertex: usize,
    pub cone: ConeRef,
    pub u: IVec,
    #[serde(default)]
    pub punctured: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypeFile {
    pub name: String,
    pub fan: String,
    pub vertices: Vec<VertexSpec>,
    #[serde(default)]
    pub edges: Vec<EdgeSpec>,
    #[serde(default)]
    pub legs: Vec<LegSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeFile {
    pub name: String,
    pub ambient: usize,
    #[serde(default)]
    pub generators: Option<Vec<IVec>>,
    #[serde(default)]
    pub inequalities: Option<Vec<IVec>>,
    #[serde(default)]
    pub equations: Vec<IVec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonoidFile {
    pub name: String,
    pub ambient: usize,
    pub generators: Vec<IVec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealFile {
    pub name: String,
    pub monoid: String,
    pub generators: Vec<IVec>,
}

/// Monoid homomorphism; `matrix` has one row per target coordinate.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomFile {
    pub name: String,
    pub source: String,
    pub target: String,
    pub matrix: Vec<IVec>,
}

/// Linear map of fans, applied on every cone.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub name: String,
    pub source: String,
    pub target: String,
    pub matrix: Vec<IVec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PuncturingFile {
    pub name: String,
    /// Generators of the base monoid γ′^∨ ⊂ Z^rank.
    pub rank: usize,
    pub gamma_dual: Vec<IVec>,
    /// Generators of the leg cone μ in Z^rank ⊕ Z (its dual is taken), or
    /// the dual generators directly.
    #[serde(default)]
    pub mu: Option<Vec<IVec>>,
    #[serde(default)]
    pub mu_dual: Option<Vec<IVec>>,
    #[serde(default)]
    pub pullback: Option<Vec<IVec>>,
    pub rho: IVec,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    pub p: IVec,
    pub q: IVec,
    pub r: IVec,
    pub class: IVec,
    pub n: Q,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableFile {
    pub name: String,
    pub classes: String,
    pub ideal: String,
    pub points: Vec<IVec>,
    #[serde(default)]
    pub entries: Vec<TableEntry>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub m: IVec,
    pub class: IVec,
    pub c: Q,
}

/// exp(k N z^{-u} q^class), truncated by the ideal.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpSpec {
    pub k: i64,
    pub n: Q,
    pub u: IVec,
    pub class: IVec,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WallSpec {
    pub support: Vec<IVec>,
    pub direction: IVec,
    #[serde(default)]
    pub terms: Option<Vec<TermSpec>>,
    #[serde(default)]
    pub exp: Option<ExpSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramFile {
    pub name: String,
    pub fan: String,
    pub classes: String,
    pub ideal: String,
    pub walls: Vec<WallSpec>,
}
