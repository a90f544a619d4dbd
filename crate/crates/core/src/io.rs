//! JSON encodings of the external interfaces: package files, quasimap
//! graphs, fiber trees, stability and wall reports, reduction traces, and
//! boundedness certificates.
//!
//! All rationals cross the boundary as `"p/q"` strings (bare `"p"` for
//! integers).  Maps are ordered, so emitting the same value twice yields
//! byte-identical documents.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::bounded::Certificate;
use crate::error::{Error, Result};
use crate::fiber::{
    ContractionAction, ContractionLogEntry, FiberComponent, FiberEdge, FiberTree,
};
use crate::package::{Character, OmegaTriple, TorusPackage};
use crate::quasimap::{
    ComponentData, DivisorData, PointDecl, PointKind, QuasimapGraph, StabilityReport, Verdict,
};
use crate::rat::{rat_from_str, rat_to_string};
use crate::reduction::ReductionTrace;
use crate::walls::WallReport;

pub fn to_json<T: Serialize>(value: &T, pretty: bool) -> String {
    let out = if pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    };
    out.expect("serializable document")
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::parse(e.to_string())
}

// ---------------------------------------------------------------------------
// Package files.

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PackageDoc {
    pub rank: usize,
    pub num_coords: usize,
    pub coord_names: Vec<String>,
    pub weights: Vec<Vec<i64>>,
    pub epsilon: Vec<i64>,
    pub vartheta: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient_restriction: Option<Vec<String>>,
    #[serde(rename = "S")]
    pub sections: Vec<SectionDoc>,
    #[serde(rename = "A")]
    pub a: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionDoc {
    pub monomial: BTreeMap<String, i64>,
}

pub fn package_to_doc(pkg: &TorusPackage, omega: &OmegaTriple) -> PackageDoc {
    let all: BTreeSet<usize> = (0..pkg.num_coords()).collect();
    let ambient_restriction = if *pkg.ambient() == all {
        None
    } else {
        Some(
            pkg.ambient()
                .iter()
                .map(|&j| pkg.coord_names()[j].clone())
                .collect(),
        )
    };
    let sections = omega
        .monomials
        .iter()
        .map(|m| SectionDoc {
            monomial: m
                .exponents
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(j, &e)| (pkg.coord_names()[j].clone(), e))
                .collect(),
        })
        .collect();
    PackageDoc {
        rank: pkg.rank(),
        num_coords: pkg.num_coords(),
        coord_names: pkg.coord_names().to_vec(),
        weights: pkg.weights().to_vec(),
        epsilon: pkg.epsilon().as_slice().to_vec(),
        vartheta: omega.vartheta.as_slice().to_vec(),
        ambient_restriction,
        sections,
        a: rat_to_string(&omega.a),
    }
}

pub fn package_from_doc(doc: &PackageDoc) -> Result<(TorusPackage, OmegaTriple)> {
    if doc.coord_names.len() != doc.num_coords {
        return Err(Error::parse(format!(
            "num_coords = {} but {} coordinate names given",
            doc.num_coords,
            doc.coord_names.len()
        )));
    }
    if doc.weights.len() != doc.rank {
        return Err(Error::parse(format!(
            "rank = {} but {} weight rows given",
            doc.rank,
            doc.weights.len()
        )));
    }
    let index_of = |name: &str| -> Result<usize> {
        doc.coord_names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::parse(format!("unknown coordinate `{name}`")))
    };
    let ambient = match &doc.ambient_restriction {
        None => None,
        Some(names) => Some(
            names
                .iter()
                .map(|n| index_of(n))
                .collect::<Result<BTreeSet<usize>>>()?,
        ),
    };
    let pkg = TorusPackage::new(
        doc.coord_names.clone(),
        doc.weights.clone(),
        Character(doc.epsilon.clone()),
        Character(doc.vartheta.clone()),
        ambient,
    )?;
    let mut exponent_sets = Vec::with_capacity(doc.sections.len());
    for s in &doc.sections {
        let mut exps = vec![0i64; doc.num_coords];
        for (name, &e) in &s.monomial {
            exps[index_of(name)?] = e;
        }
        exponent_sets.push(exps);
    }
    let omega = OmegaTriple::new(&pkg, exponent_sets, rat_from_str(&doc.a)?)?;
    Ok((pkg, omega))
}

pub fn package_to_json(pkg: &TorusPackage, omega: &OmegaTriple, pretty: bool) -> String {
    to_json(&package_to_doc(pkg, omega), pretty)
}

pub fn package_from_json(text: &str) -> Result<(TorusPackage, OmegaTriple)> {
    let doc: PackageDoc = serde_json::from_str(text).map_err(parse_err)?;
    package_from_doc(&doc)
}

// ---------------------------------------------------------------------------
// Quasimap graphs.

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuasimapDoc {
    pub components: Vec<QmComponentDoc>,
    pub edges: Vec<(String, String)>,
    pub divisors: BTreeMap<String, DivisorDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QmComponentDoc {
    pub genus: i64,
    #[serde(rename = "deg_L")]
    pub deg_l: String,
    pub points: Vec<PointDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointDoc {
    pub id: String,
    pub kind: String,
    #[serde(default = "default_aut")]
    pub aut: i64,
}

fn default_aut() -> i64 {
    1
}

/// Divisor of one section: optional identically-zero components plus sparse
/// orders keyed `"comp/point"`.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct DivisorDoc {
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub zero_on: BTreeSet<usize>,
    #[serde(flatten)]
    pub orders: BTreeMap<String, String>,
}

fn kind_name(kind: PointKind) -> &'static str {
    match kind {
        PointKind::Node => "node",
        PointKind::Marking => "marking",
        PointKind::Plain => "plain",
    }
}

fn kind_from_name(name: &str) -> Result<PointKind> {
    match name {
        "node" => Ok(PointKind::Node),
        "marking" => Ok(PointKind::Marking),
        "plain" => Ok(PointKind::Plain),
        other => Err(Error::parse(format!("unknown point kind `{other}`"))),
    }
}

fn point_ref_string(comp: usize, point: &str) -> String {
    format!("{comp}/{point}")
}

fn point_ref_parse(s: &str) -> Result<(usize, String)> {
    let (comp, point) = s
        .split_once('/')
        .ok_or_else(|| Error::parse(format!("expected `comp/point`, got `{s}`")))?;
    let comp = comp
        .parse::<usize>()
        .map_err(|_| Error::parse(format!("bad component index in `{s}`")))?;
    Ok((comp, point.to_string()))
}

pub fn quasimap_to_doc(graph: &QuasimapGraph) -> QuasimapDoc {
    QuasimapDoc {
        components: graph
            .components
            .iter()
            .map(|c| QmComponentDoc {
                genus: c.genus,
                deg_l: rat_to_string(&c.deg_l),
                points: c
                    .points
                    .iter()
                    .map(|p| PointDoc {
                        id: p.id.clone(),
                        kind: kind_name(p.kind).to_string(),
                        aut: p.aut,
                    })
                    .collect(),
            })
            .collect(),
        edges: graph
            .edges
            .iter()
            .map(|(a, b)| (point_ref_string(a.0, &a.1), point_ref_string(b.0, &b.1)))
            .collect(),
        divisors: graph
            .divisors
            .iter()
            .map(|(name, d)| {
                (
                    name.clone(),
                    DivisorDoc {
                        zero_on: d.zero_on.clone(),
                        orders: d
                            .orders
                            .iter()
                            .map(|((c, p), r)| (point_ref_string(*c, p), rat_to_string(r)))
                            .collect(),
                    },
                )
            })
            .collect(),
    }
}

pub fn quasimap_from_doc(doc: &QuasimapDoc) -> Result<QuasimapGraph> {
    let components = doc
        .components
        .iter()
        .map(|c| {
            Ok(ComponentData {
                genus: c.genus,
                deg_l: rat_from_str(&c.deg_l)?,
                points: c
                    .points
                    .iter()
                    .map(|p| {
                        Ok(PointDecl {
                            id: p.id.clone(),
                            kind: kind_from_name(&p.kind)?,
                            aut: p.aut,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let edges = doc
        .edges
        .iter()
        .map(|(a, b)| Ok((point_ref_parse(a)?, point_ref_parse(b)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut divisors = BTreeMap::new();
    for (name, d) in &doc.divisors {
        let mut data = DivisorData {
            zero_on: d.zero_on.clone(),
            ..DivisorData::default()
        };
        for (key, val) in &d.orders {
            data.orders.insert(point_ref_parse(key)?, rat_from_str(val)?);
        }
        divisors.insert(name.clone(), data);
    }
    Ok(QuasimapGraph {
        components,
        edges,
        divisors,
    })
}

pub fn quasimap_to_json(graph: &QuasimapGraph, pretty: bool) -> String {
    to_json(&quasimap_to_doc(graph), pretty)
}

pub fn quasimap_from_json(text: &str) -> Result<QuasimapGraph> {
    let doc: QuasimapDoc = serde_json::from_str(text).map_err(parse_err)?;
    quasimap_from_doc(&doc)
}

// ---------------------------------------------------------------------------
// Stability and wall reports.

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportDoc {
    pub verdict: String,
    pub failures: Vec<FailureDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FailureDoc {
    pub condition: String,
    pub location: String,
    pub witness: String,
}

pub fn report_to_doc(report: &StabilityReport) -> ReportDoc {
    ReportDoc {
        verdict: match report.verdict {
            Verdict::Stable => "stable".to_string(),
            Verdict::Unstable => "unstable".to_string(),
        },
        failures: report
            .failures
            .iter()
            .map(|f| FailureDoc {
                condition: f.condition.name().to_string(),
                location: f.location.clone(),
                witness: rat_to_string(&f.witness),
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WallsDoc {
    pub modulus: i64,
    pub candidates: Vec<String>,
}

pub fn walls_to_doc(report: &WallReport) -> WallsDoc {
    WallsDoc {
        modulus: report.modulus,
        candidates: report.candidates.iter().map(rat_to_string).collect(),
    }
}

// ---------------------------------------------------------------------------
// Reduction traces.

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TraceLineDoc {
    pub lambda: Vec<i64>,
    pub mu: Vec<i64>,
    pub delta: i64,
}

/// One JSON document per line, oldest state first.
pub fn trace_to_json_lines(trace: &ReductionTrace) -> String {
    trace
        .states
        .iter()
        .zip(&trace.deltas)
        .map(|(p, &delta)| {
            to_json(
                &TraceLineDoc {
                    lambda: p.lambda().to_vec(),
                    mu: p.mu().to_vec(),
                    delta,
                },
                false,
            )
        })
        .collect::<Vec<_>>()
        .join("\n")
}

// ---------------------------------------------------------------------------
// Fiber trees.

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberTreeDoc {
    pub charges: Vec<i64>,
    #[serde(rename = "A")]
    pub a: String,
    pub components: Vec<FiberComponentDoc>,
    pub edges: Vec<FiberEdgeDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberComponentDoc {
    pub id: i64,
    pub genus: i64,
    #[serde(rename = "deg_L")]
    pub deg_l: i64,
    #[serde(default)]
    pub markings: i64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub point_orders: BTreeMap<String, Vec<i64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberEdgeDoc {
    pub ends: (i64, i64),
    pub node_orders: (Vec<i64>, Vec<i64>),
}

pub fn fiber_tree_to_doc(tree: &FiberTree) -> FiberTreeDoc {
    FiberTreeDoc {
        charges: tree.charges.clone(),
        a: rat_to_string(&tree.a),
        components: tree
            .components
            .iter()
            .map(|c| FiberComponentDoc {
                id: c.id,
                genus: c.genus,
                deg_l: c.deg_l,
                markings: c.markings,
                point_orders: c.plain_orders.clone(),
            })
            .collect(),
        edges: tree
            .edges
            .iter()
            .map(|e| FiberEdgeDoc {
                ends: e.ends,
                node_orders: e.orders.clone(),
            })
            .collect(),
    }
}

pub fn fiber_tree_from_doc(doc: &FiberTreeDoc) -> Result<FiberTree> {
    let tree = FiberTree {
        charges: doc.charges.clone(),
        a: rat_from_str(&doc.a)?,
        components: doc
            .components
            .iter()
            .map(|c| FiberComponent {
                id: c.id,
                genus: c.genus,
                deg_l: c.deg_l,
                markings: c.markings,
                plain_orders: c.point_orders.clone(),
            })
            .collect(),
        edges: doc
            .edges
            .iter()
            .map(|e| FiberEdge {
                ends: e.ends,
                orders: e.node_orders.clone(),
            })
            .collect(),
    };
    tree.validate()?;
    Ok(tree)
}

pub fn fiber_tree_to_json(tree: &FiberTree, pretty: bool) -> String {
    to_json(&fiber_tree_to_doc(tree), pretty)
}

pub fn fiber_tree_from_json(text: &str) -> Result<FiberTree> {
    let doc: FiberTreeDoc = serde_json::from_str(text).map_err(parse_err)?;
    fiber_tree_from_doc(&doc)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContractionLogDoc {
    pub action: String,
    pub component: i64,
    pub joined: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub new_point: Option<String>,
}

pub fn contraction_log_to_doc(log: &[ContractionLogEntry]) -> Vec<ContractionLogDoc> {
    log.iter()
        .map(|e| ContractionLogDoc {
            action: match e.action {
                ContractionAction::Tail => "tail".to_string(),
                ContractionAction::Bridge => "bridge".to_string(),
            },
            component: e.component,
            joined: e.joined.clone(),
            new_point: e.new_point.clone(),
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Boundedness certificates.

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub n0: String,
    #[serde(rename = "D")]
    pub d_lcm: String,
    pub rays: Vec<Vec<i64>>,
    pub lifts: Vec<Vec<i64>>,
    #[serde(rename = "B")]
    pub b: String,
    pub polytope: PolytopeDoc,
    pub component_bounds: ComponentBoundsDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolytopeDoc {
    pub equalities: Vec<LinearDoc>,
    pub inequalities: Vec<LinearDoc>,
    pub vertices: Vec<Vec<String>>,
    pub bounded: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinearDoc {
    pub normal: Vec<String>,
    pub rhs: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComponentBoundsDoc {
    pub margin: String,
    pub max_negative_components: i64,
    pub max_positive_wlog_sum: i64,
    pub max_wlog: i64,
    pub deg_lower: String,
    pub deg_upper: String,
    pub max_zero_components: i64,
    pub max_components: i64,
    pub empty: bool,
}

pub fn certificate_to_doc(cert: &Certificate) -> CertificateDoc {
    let linear = |rows: &[(Vec<crate::rat::Rat>, crate::rat::Rat)]| {
        rows.iter()
            .map(|(normal, rhs)| LinearDoc {
                normal: normal.iter().map(rat_to_string).collect(),
                rhs: rat_to_string(rhs),
            })
            .collect()
    };
    CertificateDoc {
        n0: cert.n0.to_string(),
        d_lcm: cert.d_lcm.to_string(),
        rays: cert.rays.rays.clone(),
        lifts: cert.rays.lifts.clone(),
        b: rat_to_string(&cert.b),
        polytope: PolytopeDoc {
            equalities: linear(&cert.polytope.equalities),
            inequalities: linear(&cert.polytope.inequalities),
            vertices: cert
                .polytope
                .vertices
                .iter()
                .map(|v| v.iter().map(rat_to_string).collect())
                .collect(),
            bounded: cert.polytope.bounded,
        },
        component_bounds: ComponentBoundsDoc {
            margin: rat_to_string(&cert.component_bounds.margin),
            max_negative_components: cert.component_bounds.max_negative_components,
            max_positive_wlog_sum: cert.component_bounds.max_positive_wlog_sum,
            max_wlog: cert.component_bounds.max_wlog,
            deg_lower: rat_to_string(&cert.component_bounds.deg_lower),
            deg_upper: rat_to_string(&cert.component_bounds.deg_upper),
            max_zero_components: cert.component_bounds.max_zero_components,
            max_components: cert.component_bounds.max_components,
            empty: cert.component_bounds.empty,
        },
    }
}
