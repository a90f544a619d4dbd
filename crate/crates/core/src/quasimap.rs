//! Dual-graph encoding of LG-quasimaps and the three-clause stability check.
//!
//! A quasimap is recorded combinatorially: components with genus and the
//! degree of the polarization bundle, special points (markings and node
//! branches) with automorphism orders, and, per element `f` of the stability
//! datum, the divisor of the induced section: either identically zero on a
//! component or a finite list of vanishing orders.
//!
//! The R-charge bookkeeping identifies the `epsilon`-bundle with the log
//! dualizing sheaf once and for all, so a section attached to `f` of
//! bi-degree `(k, c)` has total order `k*deg_L + c*deg_wlog` on each
//! component where it is not identically zero.

use std::collections::{BTreeMap, BTreeSet};

use num::{BigInt, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::package::{MonomialElt, OmegaTriple, TorusPackage};
use crate::rat::{rat_to_string, rint, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PointKind {
    Marking,
    Node,
    Plain,
}

impl PointKind {
    pub fn is_special(self) -> bool {
        !matches!(self, PointKind::Plain)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointDecl {
    pub id: String,
    pub kind: PointKind,
    /// Automorphism order of the orbifold point; 1 means untwisted.
    pub aut: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentData {
    pub genus: i64,
    pub deg_l: Rat,
    pub points: Vec<PointDecl>,
}

impl ComponentData {
    pub fn special_count(&self) -> i64 {
        self.points.iter().filter(|p| p.kind.is_special()).count() as i64
    }

    /// Degree of the log dualizing sheaf: `2g - 2 + #special`.
    pub fn deg_wlog(&self) -> i64 {
        2 * self.genus - 2 + self.special_count()
    }

    pub fn point(&self, id: &str) -> Option<&PointDecl> {
        self.points.iter().find(|p| p.id == id)
    }
}

/// `(component index, point id)`.
pub type PointRef = (usize, String);

/// Divisor of the section attached to one element of `S`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DivisorData {
    /// Components on which the section vanishes identically.
    pub zero_on: BTreeSet<usize>,
    /// Recorded vanishing orders; omitted points carry order 0.
    pub orders: BTreeMap<PointRef, Rat>,
}

impl DivisorData {
    pub fn order_at(&self, comp: usize, point: &str) -> Rat {
        self.orders
            .get(&(comp, point.to_string()))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn is_zero_on(&self, comp: usize) -> bool {
        self.zero_on.contains(&comp)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasimapGraph {
    pub components: Vec<ComponentData>,
    pub edges: Vec<(PointRef, PointRef)>,
    /// Keyed by the canonical monomial names of the stability datum.
    pub divisors: BTreeMap<String, DivisorData>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Condition {
    Consistency,
    Omega1,
    Omega2,
    Omega3,
}

impl Condition {
    pub fn name(self) -> &'static str {
        match self {
            Condition::Consistency => "consistency",
            Condition::Omega1 => "omega-1",
            Condition::Omega2 => "omega-2",
            Condition::Omega3 => "omega-3",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub condition: Condition,
    pub location: String,
    pub witness: Rat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Stable,
    Unstable,
}

#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub verdict: Verdict,
    pub failures: Vec<Failure>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Omega3Mode {
    FiniteA,
    AInfinity,
}

/// Component classification by the sign of `deg_wlog`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentTag {
    /// `deg_wlog > 0`: the third clause holds automatically.
    AutoPositive,
    /// `deg_wlog = 0`: the third clause reduces to `deg_L > 0`.
    NeedsDegree,
    /// `deg_wlog < 0`: the clause genuinely depends on `A`.
    DeltaMinus,
}

/// Realizability report for the degree lower bounds.
#[derive(Debug, Clone)]
pub struct LowerBoundReport {
    /// Components whose degree falls below the bound, with the violated
    /// left-hand side.
    pub flagged: Vec<(usize, Rat)>,
}

fn validate_point_id(id: &str) -> Result<()> {
    if id.is_empty() || id.chars().any(|c| c.is_whitespace() || c == '/') {
        return Err(Error::invalid(format!(
            "point id `{id}` must be nonempty without whitespace or '/'"
        )));
    }
    Ok(())
}

impl QuasimapGraph {
    /// Structural validation against the stability datum the divisors refer to.
    pub fn validate(&self, omega: &OmegaTriple) -> Result<()> {
        if self.components.is_empty() {
            return Err(Error::invalid("graph needs at least one component"));
        }
        for (i, comp) in self.components.iter().enumerate() {
            if comp.genus < 0 {
                return Err(Error::invalid(format!("component {i} has negative genus")));
            }
            let mut ids = BTreeSet::new();
            for p in &comp.points {
                validate_point_id(&p.id)?;
                if !ids.insert(p.id.clone()) {
                    return Err(Error::invalid(format!(
                        "duplicate point `{}` on component {i}",
                        p.id
                    )));
                }
                if p.aut < 1 {
                    return Err(Error::invalid(format!(
                        "point {i}/{} has non-positive automorphism order",
                        p.id
                    )));
                }
                if p.kind == PointKind::Plain && p.aut != 1 {
                    return Err(Error::invalid(format!(
                        "plain point {i}/{} must be untwisted",
                        p.id
                    )));
                }
            }
        }
        let mut used: BTreeSet<PointRef> = BTreeSet::new();
        for (a, b) in &self.edges {
            for end in [a, b] {
                let comp = self
                    .components
                    .get(end.0)
                    .ok_or_else(|| Error::invalid("edge endpoint out of range"))?;
                let decl = comp.point(&end.1).ok_or_else(|| {
                    Error::invalid(format!("edge endpoint {}/{} not declared", end.0, end.1))
                })?;
                if decl.kind != PointKind::Node {
                    return Err(Error::invalid(format!(
                        "edge endpoint {}/{} is not a node",
                        end.0, end.1
                    )));
                }
                if !used.insert(end.clone()) {
                    return Err(Error::invalid(format!(
                        "node {}/{} used by more than one edge",
                        end.0, end.1
                    )));
                }
            }
            let aut_a = self.components[a.0].point(&a.1).unwrap().aut;
            let aut_b = self.components[b.0].point(&b.1).unwrap().aut;
            if aut_a != aut_b {
                return Err(Error::invalid(format!(
                    "node branches {}/{} and {}/{} have mismatched automorphism orders",
                    a.0, a.1, b.0, b.1
                )));
            }
        }
        for (i, comp) in self.components.iter().enumerate() {
            for p in &comp.points {
                if p.kind == PointKind::Node && !used.contains(&(i, p.id.clone())) {
                    return Err(Error::invalid(format!(
                        "node {i}/{} is not attached to any edge",
                        p.id
                    )));
                }
            }
        }
        self.check_connected()?;

        let names: BTreeSet<&str> = omega.monomials.iter().map(|m| m.name.as_str()).collect();
        for name in self.divisors.keys() {
            if !names.contains(name.as_str()) {
                return Err(Error::invalid(format!(
                    "divisor `{name}` does not name an element of S"
                )));
            }
        }
        for name in &names {
            if !self.divisors.contains_key(*name) {
                return Err(Error::invalid(format!("missing divisor for `{name}`")));
            }
        }
        for (name, div) in &self.divisors {
            for &comp in &div.zero_on {
                if comp >= self.components.len() {
                    return Err(Error::invalid(format!(
                        "divisor `{name}` marks out-of-range component {comp}"
                    )));
                }
            }
            for ((comp, point), order) in &div.orders {
                let decl = self
                    .components
                    .get(*comp)
                    .and_then(|c| c.point(point))
                    .ok_or_else(|| {
                        Error::invalid(format!(
                            "divisor `{name}` records order at unknown point {comp}/{point}"
                        ))
                    })?;
                if div.zero_on.contains(comp) {
                    return Err(Error::invalid(format!(
                        "divisor `{name}` records an order on component {comp} where it vanishes identically"
                    )));
                }
                if order.is_negative() {
                    return Err(Error::invalid(format!(
                        "divisor `{name}` has negative order at {comp}/{point}"
                    )));
                }
                if !crate::rat::has_denominator_dividing(order, &BigInt::from(decl.aut)) {
                    return Err(Error::invalid(format!(
                        "order of `{name}` at {comp}/{point} is not a multiple of 1/{}",
                        decl.aut
                    )));
                }
            }
        }
        Ok(())
    }

    fn check_connected(&self) -> Result<()> {
        let n = self.components.len();
        let mut adj = vec![Vec::new(); n];
        for (a, b) in &self.edges {
            adj[a.0].push(b.0);
            adj[b.0].push(a.0);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if seen.iter().all(|&s| s) {
            Ok(())
        } else {
            Err(Error::invalid("graph is not connected"))
        }
    }

    /// Arithmetic genus implied by the graph.
    pub fn genus(&self) -> i64 {
        let g_sum: i64 = self.components.iter().map(|c| c.genus).sum();
        g_sum + self.edges.len() as i64 - self.components.len() as i64 + 1
    }

    pub fn markings(&self) -> i64 {
        self.components
            .iter()
            .flat_map(|c| &c.points)
            .filter(|p| p.kind == PointKind::Marking)
            .count() as i64
    }

    /// Total degree of the polarization bundle.
    pub fn degree(&self) -> Rat {
        self.components.iter().map(|c| c.deg_l.clone()).sum()
    }

    fn component_order_sum(&self, f: &str, comp: usize) -> Rat {
        self.divisors[f]
            .orders
            .iter()
            .filter(|((c, _), _)| *c == comp)
            .map(|(_, o)| o.clone())
            .sum()
    }

    /// Degree consistency: on every component where `f` is not identically
    /// zero, the recorded orders must sum to `k_f*deg_L + c_f*deg_wlog`.
    pub fn consistency_failures(&self, omega: &OmegaTriple) -> Vec<Failure> {
        let mut out = Vec::new();
        for f in &omega.monomials {
            let div = &self.divisors[&f.name];
            for (i, comp) in self.components.iter().enumerate() {
                if div.is_zero_on(i) {
                    continue;
                }
                let expected = rint(f.bidegree.theta_weight) * &comp.deg_l
                    + rint(f.bidegree.r_charge) * rint(comp.deg_wlog());
                let got = self.component_order_sum(&f.name, i);
                if got != expected {
                    out.push(Failure {
                        condition: Condition::Consistency,
                        location: format!("{}@component {i}", f.name),
                        witness: got - expected,
                    });
                }
            }
        }
        out
    }

    /// First clause: the common base locus is discrete and avoids the
    /// special points.
    ///
    /// Passes iff every component carries some section not identically zero,
    /// and every special-point branch has a section of order 0.
    pub fn check_omega1(&self, omega: &OmegaTriple) -> Result<Vec<Failure>> {
        if !self.consistency_failures(omega).is_empty() {
            return Err(Error::InconsistentDivisor(
                "section orders do not match component degrees".into(),
            ));
        }
        Ok(self.omega1_failures(omega))
    }

    fn omega1_failures(&self, omega: &OmegaTriple) -> Vec<Failure> {
        let mut out = Vec::new();
        for (i, comp) in self.components.iter().enumerate() {
            let live: Vec<&MonomialElt> = omega
                .monomials
                .iter()
                .filter(|f| !self.divisors[&f.name].is_zero_on(i))
                .collect();
            if live.is_empty() {
                out.push(Failure {
                    condition: Condition::Omega1,
                    location: format!("component {i}"),
                    witness: Rat::zero(),
                });
                continue;
            }
            for p in comp.points.iter().filter(|p| p.kind.is_special()) {
                let min_order = live
                    .iter()
                    .map(|f| self.divisors[&f.name].order_at(i, &p.id))
                    .min()
                    .expect("live nonempty");
                if min_order > Rat::zero() {
                    out.push(Failure {
                        condition: Condition::Omega1,
                        location: format!("{i}/{}", p.id),
                        witness: min_order,
                    });
                }
            }
        }
        out
    }

    /// The normalized vanishing order `min_f (ord_x(f)/k_f + slope(f))` at a
    /// recorded point.
    pub fn normalized_min_order(
        &self,
        omega: &OmegaTriple,
        comp: usize,
        point: &str,
    ) -> Result<Rat> {
        let values: Vec<Rat> = omega
            .monomials
            .iter()
            .filter(|f| !self.divisors[&f.name].is_zero_on(comp))
            .map(|f| {
                (self.divisors[&f.name].order_at(comp, point) + rint(f.bidegree.r_charge))
                    / rint(f.bidegree.theta_weight)
            })
            .collect();
        values.into_iter().min().ok_or(Error::AllZeroNearX)
    }

    /// Second clause: at every recorded plain point the normalized order is
    /// at most `A`.  Unrecorded points pass automatically (some section has
    /// order 0 there, bounding the minimum by `s_max < A`).
    pub fn check_omega2(&self, omega: &OmegaTriple) -> Vec<Failure> {
        let mut out = Vec::new();
        for (i, comp) in self.components.iter().enumerate() {
            for p in comp.points.iter().filter(|p| p.kind == PointKind::Plain) {
                let Ok(value) = self.normalized_min_order(omega, i, &p.id) else {
                    continue; // the first clause already fails on this component
                };
                if value > omega.a {
                    out.push(Failure {
                        condition: Condition::Omega2,
                        location: format!("{i}/{}", p.id),
                        witness: value,
                    });
                }
            }
        }
        out
    }

    /// Third clause: positivity of `L_vartheta (x) (w^log)^A` on every
    /// component, or its `A -> infinity` form.
    pub fn check_omega3(&self, omega: &OmegaTriple, mode: Omega3Mode) -> Vec<Failure> {
        let mut out = Vec::new();
        for (i, comp) in self.components.iter().enumerate() {
            let wlog = comp.deg_wlog();
            let (pass, witness) = match mode {
                Omega3Mode::FiniteA => {
                    let v = &comp.deg_l + &omega.a * rint(wlog);
                    (v > Rat::zero(), v)
                }
                Omega3Mode::AInfinity => (
                    wlog > 0 || (wlog == 0 && comp.deg_l > Rat::zero()),
                    comp.deg_l.clone(),
                ),
            };
            if !pass {
                out.push(Failure {
                    condition: Condition::Omega3,
                    location: format!("component {i}"),
                    witness,
                });
            }
        }
        out
    }

    pub fn classify_components(&self) -> Vec<ComponentTag> {
        self.components
            .iter()
            .map(|c| match c.deg_wlog() {
                w if w > 0 => ComponentTag::AutoPositive,
                0 => ComponentTag::NeedsDegree,
                _ => ComponentTag::DeltaMinus,
            })
            .collect()
    }

    /// Degree lower bounds required of any quasimap satisfying the second
    /// clause: `deg_L + s_max*deg_wlog >= 0` off the negative components and
    /// `deg_L + (s_max + 1/(2D))*deg_wlog >= 0` on them.  A flagged
    /// component marks the data as unrealizable.
    pub fn consistency_lower_bound(&self, omega: &OmegaTriple, d_lcm: &BigInt) -> LowerBoundReport {
        let s_max = omega.s_max();
        let delta = Rat::new(BigInt::one(), 2 * d_lcm.clone());
        let mut flagged = Vec::new();
        for (i, comp) in self.components.iter().enumerate() {
            let wlog = rint(comp.deg_wlog());
            let bound = if comp.deg_wlog() < 0 {
                &comp.deg_l + (&s_max + &delta) * &wlog
            } else {
                &comp.deg_l + &s_max * &wlog
            };
            if bound < Rat::zero() {
                flagged.push((i, bound));
            }
        }
        LowerBoundReport { flagged }
    }

    pub fn check_stable(&self, omega: &OmegaTriple) -> StabilityReport {
        self.check_stable_mode(omega, Omega3Mode::FiniteA)
    }

    /// Aggregates consistency and the three clauses.  When the divisor data
    /// is inconsistent only those failures are reported; the clauses are not
    /// meaningful on inconsistent data.
    pub fn check_stable_mode(&self, omega: &OmegaTriple, mode: Omega3Mode) -> StabilityReport {
        let mut failures = self.consistency_failures(omega);
        if failures.is_empty() {
            failures.extend(self.omega1_failures(omega));
            if mode == Omega3Mode::FiniteA {
                failures.extend(self.check_omega2(omega));
            }
            failures.extend(self.check_omega3(omega, mode));
        }
        let verdict = if failures.is_empty() {
            Verdict::Stable
        } else {
            Verdict::Unstable
        };
        StabilityReport { verdict, failures }
    }

    /// Companion rewrite to `make_common_theta_weight`: degrees scale by `m`
    /// and the orders of `f` by `m/k_f`, renaming divisors to the powered
    /// monomials.  Verdicts are preserved.
    pub fn rescale_common_weight(&self, pkg: &TorusPackage, omega: &OmegaTriple) -> Result<(QuasimapGraph, OmegaTriple)> {
        let (scaled, m) = omega.make_common_theta_weight(pkg)?;
        let mut divisors = BTreeMap::new();
        for (old, new) in omega.monomials.iter().zip(&scaled.monomials) {
            let q = rint(m / old.bidegree.theta_weight);
            let div = &self.divisors[&old.name];
            divisors.insert(
                new.name.clone(),
                DivisorData {
                    zero_on: div.zero_on.clone(),
                    orders: div
                        .orders
                        .iter()
                        .map(|(k, o)| (k.clone(), o * &q))
                        .collect(),
                },
            );
        }
        let components = self
            .components
            .iter()
            .map(|c| ComponentData {
                genus: c.genus,
                deg_l: &c.deg_l * rint(m),
                points: c.points.clone(),
            })
            .collect();
        Ok((
            QuasimapGraph {
                components,
                edges: self.edges.clone(),
                divisors,
            },
            scaled,
        ))
    }
}

/// Image of a quasimap under the coarse projective comparison map: the same
/// graph read over the projective-space package whose coordinates are the
/// elements of `S` with their R-charges.
#[derive(Debug, Clone)]
pub struct PushedModel {
    pub package: TorusPackage,
    pub omega: OmegaTriple,
    pub graph: QuasimapGraph,
}

/// Transports a quasimap over a normalized datum (all theta-weights 1) to
/// the projective-space model: coordinate `phi<i>` carries the divisor of
/// the i-th element of `S` and the R-charge `c_i`; orbifold structure is
/// dropped.  Stability verdicts agree with the source.
pub fn push_to_projective(
    omega: &OmegaTriple,
    graph: &QuasimapGraph,
) -> Result<PushedModel> {
    if omega
        .monomials
        .iter()
        .any(|f| f.bidegree.theta_weight != 1)
    {
        return Err(Error::OmegaNotNormalized);
    }
    let charges: Vec<i64> = omega.monomials.iter().map(|f| f.bidegree.r_charge).collect();
    let (package, image_omega) =
        crate::catalog::pn_charges_with(&charges, omega.a.clone())?;
    let mut divisors = BTreeMap::new();
    for (f, coord) in omega.monomials.iter().zip(image_omega.monomials.iter()) {
        divisors.insert(coord.name.clone(), graph.divisors[&f.name].clone());
    }
    let components = graph
        .components
        .iter()
        .map(|c| ComponentData {
            genus: c.genus,
            deg_l: c.deg_l.clone(),
            points: c
                .points
                .iter()
                .map(|p| PointDecl {
                    id: p.id.clone(),
                    kind: p.kind,
                    aut: 1,
                })
                .collect(),
        })
        .collect();
    Ok(PushedModel {
        package,
        omega: image_omega,
        graph: QuasimapGraph {
            components,
            edges: graph.edges.clone(),
            divisors,
        },
    })
}

pub fn report_to_string(report: &StabilityReport) -> String {
    let mut s = match report.verdict {
        Verdict::Stable => "stable".to_string(),
        Verdict::Unstable => "unstable".to_string(),
    };
    for f in &report.failures {
        s.push_str(&format!(
            "\n  {} at {}: {}",
            f.condition.name(),
            f.location,
            rat_to_string(&f.witness)
        ));
    }
    s
}
