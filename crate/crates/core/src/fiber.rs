//! Special-fiber trees and the contraction calculus of stable reduction.
//!
//! A fiber tree is the schematic dual tree of one fiber appearing in the
//! properness argument for a projective-space target: components carry a
//! genus, an integral degree of the polarization, a marking count and
//! recorded per-coordinate vanishing orders; edges carry the branch orders
//! of the coordinate sections on both sides.  Every branch has a vanishing
//! coordinate order 0 (the sections do not have a common zero at a node).
//!
//! Stabilization contracts rational tails that fail positivity, then
//! rational bridges of degree zero; the result is independent of the order
//! in which contractions are applied whenever the tree has a component that
//! can never be contracted (the main component of a degeneration).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::package::{OmegaTriple, TorusPackage};
use crate::quasimap::{ComponentData, DivisorData, PointDecl, PointKind, QuasimapGraph};
use crate::rat::{rint, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberComponent {
    pub id: i64,
    pub genus: i64,
    pub deg_l: i64,
    pub markings: i64,
    /// Recorded interior points with their per-coordinate vanishing orders.
    pub plain_orders: BTreeMap<String, Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberEdge {
    pub ends: (i64, i64),
    /// Branch orders on the `ends.0` and `ends.1` sides respectively.
    pub orders: (Vec<i64>, Vec<i64>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberTree {
    /// R-charges of the coordinates; each coordinate has theta-weight 1.
    pub charges: Vec<i64>,
    pub a: Rat,
    pub components: Vec<FiberComponent>,
    pub edges: Vec<FiberEdge>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    MustContract,
    MustKeep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContractionAction {
    Tail,
    Bridge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionLogEntry {
    pub action: ContractionAction,
    pub component: i64,
    /// Neighbor absorbing a tail, or the two components a bridge joined.
    pub joined: Vec<i64>,
    pub new_point: Option<String>,
}

impl FiberComponent {
    pub fn special_count(&self, tree: &FiberTree) -> i64 {
        self.markings + tree.edge_degree(self.id)
    }

    pub fn deg_wlog(&self, tree: &FiberTree) -> i64 {
        2 * self.genus - 2 + self.special_count(tree)
    }
}

impl FiberTree {
    pub fn component(&self, id: i64) -> Result<&FiberComponent> {
        self.components
            .iter()
            .find(|c| c.id == id)
            .ok_or_else(|| Error::invalid(format!("no component with id {id}")))
    }

    fn edge_degree(&self, id: i64) -> i64 {
        self.edges
            .iter()
            .map(|e| (e.ends.0 == id) as i64 + (e.ends.1 == id) as i64)
            .sum()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.charges.len();
        if n == 0 {
            return Err(Error::invalid("at least one coordinate is required"));
        }
        if self.components.is_empty() {
            return Err(Error::invalid("tree needs at least one component"));
        }
        let mut ids = std::collections::BTreeSet::new();
        for c in &self.components {
            if !ids.insert(c.id) {
                return Err(Error::invalid(format!("duplicate component id {}", c.id)));
            }
            if c.genus < 0 || c.markings < 0 {
                return Err(Error::invalid(format!(
                    "component {} has negative genus or marking count",
                    c.id
                )));
            }
            for (p, orders) in &c.plain_orders {
                if p.is_empty()
                    || p.chars().any(|ch| ch.is_whitespace() || ch == '/')
                    || p.starts_with("node")
                    || p.starts_with("mark")
                {
                    return Err(Error::invalid(format!(
                        "point id `{p}` on component {} is reserved or malformed",
                        c.id
                    )));
                }
                if orders.len() != n || orders.iter().any(|&o| o < 0) {
                    return Err(Error::invalid(format!(
                        "orders at {}/{p} must be {n} non-negative integers",
                        c.id
                    )));
                }
            }
        }
        for e in &self.edges {
            for end in [e.ends.0, e.ends.1] {
                if !ids.contains(&end) {
                    return Err(Error::invalid(format!("edge references unknown id {end}")));
                }
            }
            if e.ends.0 == e.ends.1 {
                return Err(Error::invalid("trees have no self-loops"));
            }
            for side in [&e.orders.0, &e.orders.1] {
                if side.len() != n || side.iter().any(|&o| o < 0) {
                    return Err(Error::invalid(
                        "branch orders must be non-negative vectors of full length",
                    ));
                }
                if side.iter().min() != Some(&0) {
                    return Err(Error::invalid(
                        "some coordinate must be nonzero on every branch",
                    ));
                }
            }
        }
        if self.edges.len() + 1 != self.components.len() {
            return Err(Error::invalid("component and edge counts do not form a tree"));
        }
        // Connectivity (with the right edge count this also rules out cycles).
        let mut seen = std::collections::BTreeSet::new();
        let mut stack = vec![self.components[0].id];
        seen.insert(self.components[0].id);
        while let Some(v) = stack.pop() {
            for e in &self.edges {
                let w = if e.ends.0 == v {
                    e.ends.1
                } else if e.ends.1 == v {
                    e.ends.0
                } else {
                    continue;
                };
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        if seen.len() != self.components.len() {
            return Err(Error::invalid("tree is not connected"));
        }
        Ok(())
    }

    pub fn is_tail(&self, id: i64) -> bool {
        self.component(id).map_or(false, |c| {
            c.genus == 0 && c.markings == 0 && self.edge_degree(id) == 1
        })
    }

    pub fn is_bridge(&self, id: i64) -> bool {
        self.component(id).map_or(false, |c| {
            c.genus == 0 && c.markings == 0 && self.edge_degree(id) == 2
        })
    }

    /// Whether a tail or bridge has to be contracted: tails exactly when
    /// positivity fails, `deg_L - A <= 0`; bridges exactly when `deg_L = 0`.
    pub fn contraction_decision(&self, id: i64) -> Result<Decision> {
        let c = self.component(id)?;
        if self.is_tail(id) {
            Ok(if rint(c.deg_l) <= self.a {
                Decision::MustContract
            } else {
                Decision::MustKeep
            })
        } else if self.is_bridge(id) {
            Ok(if c.deg_l == 0 {
                Decision::MustContract
            } else {
                Decision::MustKeep
            })
        } else {
            Err(Error::NotTailOrBridge(format!(
                "component {id} is neither a rational tail nor a rational bridge"
            )))
        }
    }

    /// Contracts the rational tail `id` to a new plain point on its
    /// neighbor.  The neighbor's branch orders at the attaching node become
    /// the orders of the new point shifted by `deg_L(tail) - c_i`, so
    /// `min_i(ord_i + c_i) = deg_L(tail)`, and the neighbor absorbs the
    /// tail's degree.
    pub fn contract_tail(&self, id: i64) -> Result<(FiberTree, ContractionLogEntry)> {
        if !self.is_tail(id) {
            return Err(Error::NotATail(format!(
                "component {id} is not a rational tail"
            )));
        }
        let deg_e = self.component(id)?.deg_l;
        let edge_idx = self
            .edges
            .iter()
            .position(|e| e.ends.0 == id || e.ends.1 == id)
            .expect("a tail has exactly one edge");
        let edge = &self.edges[edge_idx];
        let (neighbor, neighbor_orders) = if edge.ends.0 == id {
            (edge.ends.1, &edge.orders.1)
        } else {
            (edge.ends.0, &edge.orders.0)
        };
        let new_point = format!("q({id})");
        let mut q_orders = Vec::with_capacity(self.charges.len());
        for (i, (&o, &c)) in neighbor_orders.iter().zip(&self.charges).enumerate() {
            let v = o + deg_e - c;
            if v < 0 {
                return Err(Error::NegativeOrder(format!(
                    "coordinate {i} at the image of tail {id} would have order {v}"
                )));
            }
            q_orders.push(v);
        }
        let mut tree = self.clone();
        tree.edges.remove(edge_idx);
        tree.components.retain(|c| c.id != id);
        let nb = tree
            .components
            .iter_mut()
            .find(|c| c.id == neighbor)
            .expect("neighbor exists");
        nb.deg_l += deg_e;
        if nb.plain_orders.insert(new_point.clone(), q_orders).is_some() {
            return Err(Error::invalid(format!(
                "point id {new_point} already exists on component {neighbor}"
            )));
        }
        Ok((
            tree,
            ContractionLogEntry {
                action: ContractionAction::Tail,
                component: id,
                joined: vec![neighbor],
                new_point: Some(new_point),
            },
        ))
    }

    /// Contracts a degree-zero rational bridge, merging its two nodes into
    /// one whose branch orders on the outer components are unchanged.
    pub fn contract_bridge(&self, id: i64) -> Result<(FiberTree, ContractionLogEntry)> {
        if !self.is_bridge(id) {
            return Err(Error::NotTailOrBridge(format!(
                "component {id} is not a rational bridge"
            )));
        }
        let deg = self.component(id)?.deg_l;
        if deg != 0 {
            return Err(Error::NonzeroDegree(deg));
        }
        let incident: Vec<usize> = self
            .edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.ends.0 == id || e.ends.1 == id)
            .map(|(i, _)| i)
            .collect();
        debug_assert_eq!(incident.len(), 2);
        let outer = |i: usize| {
            let e = &self.edges[i];
            if e.ends.0 == id {
                (e.ends.1, e.orders.1.clone())
            } else {
                (e.ends.0, e.orders.0.clone())
            }
        };
        let (x, x_orders) = outer(incident[0]);
        let (y, y_orders) = outer(incident[1]);
        let mut tree = self.clone();
        // Remove the higher index first so positions stay valid.
        tree.edges.remove(incident[1]);
        tree.edges.remove(incident[0]);
        tree.components.retain(|c| c.id != id);
        tree.edges.push(FiberEdge {
            ends: (x, y),
            orders: (x_orders, y_orders),
        });
        Ok((
            tree,
            ContractionLogEntry {
                action: ContractionAction::Bridge,
                component: id,
                joined: vec![x, y],
                new_point: None,
            },
        ))
    }

    /// Recorded points whose normalized order exceeds `A`, with the value.
    pub fn omega2_violations(&self) -> Vec<(i64, String, Rat)> {
        let mut out = Vec::new();
        for c in &self.components {
            for (p, orders) in &c.plain_orders {
                let value = orders
                    .iter()
                    .zip(&self.charges)
                    .map(|(&o, &ch)| o + ch)
                    .min()
                    .expect("charges nonempty");
                if rint(value) > self.a {
                    out.push((c.id, p.clone(), rint(value)));
                }
            }
        }
        out
    }

    /// Contracts every rational tail failing positivity, then every
    /// degree-zero rational bridge, picking the smallest id at each step.
    pub fn stabilize(&self) -> Result<(FiberTree, Vec<ContractionLogEntry>)> {
        self.stabilize_with(&mut |candidates| candidates[0])
    }

    /// As `stabilize`, but the chooser selects which eligible component to
    /// contract next (it receives the sorted candidate ids and returns one
    /// of them).  The normal form does not depend on the choice.
    pub fn stabilize_with(
        &self,
        choose: &mut dyn FnMut(&[i64]) -> i64,
    ) -> Result<(FiberTree, Vec<ContractionLogEntry>)> {
        let mut tree = self.clone();
        let mut log = Vec::new();
        loop {
            let mut candidates: Vec<i64> = tree
                .components
                .iter()
                .filter(|c| {
                    tree.is_tail(c.id)
                        && matches!(
                            tree.contraction_decision(c.id),
                            Ok(Decision::MustContract)
                        )
                })
                .map(|c| c.id)
                .collect();
            if candidates.is_empty() {
                break;
            }
            candidates.sort_unstable();
            let pick = choose(&candidates);
            let (next, entry) = tree.contract_tail(pick)?;
            tree = next;
            log.push(entry);
        }
        loop {
            let mut candidates: Vec<i64> = tree
                .components
                .iter()
                .filter(|c| tree.is_bridge(c.id) && c.deg_l == 0)
                .map(|c| c.id)
                .collect();
            if candidates.is_empty() {
                break;
            }
            candidates.sort_unstable();
            let pick = choose(&candidates);
            let (next, entry) = tree.contract_bridge(pick)?;
            tree = next;
            log.push(entry);
        }
        Ok((tree, log))
    }

    /// Normal form under relabel-free tree isomorphism: components sorted
    /// by id, edges oriented small-to-large and sorted.
    pub fn canonicalize(&self) -> FiberTree {
        let mut tree = self.clone();
        tree.components.sort_by_key(|c| c.id);
        for e in &mut tree.edges {
            if e.ends.0 > e.ends.1 {
                e.ends = (e.ends.1, e.ends.0);
                std::mem::swap(&mut e.orders.0, &mut e.orders.1);
            }
        }
        tree.edges.sort_by_key(|e| e.ends);
        tree
    }

    /// Reads the tree as a quasimap over the projective-space package with
    /// these charges, so the full stability checker applies.  Markings
    /// become `mark<j>`, the branches of edge `e` become nodes `node<e>`.
    pub fn to_quasimap(&self) -> Result<(TorusPackage, OmegaTriple, QuasimapGraph)> {
        let (pkg, omega) = crate::catalog::pn_charges_with(&self.charges, self.a.clone())?;
        let index_of: BTreeMap<i64, usize> = self
            .components
            .iter()
            .enumerate()
            .map(|(i, c)| (c.id, i))
            .collect();
        let mut components: Vec<ComponentData> = self
            .components
            .iter()
            .map(|c| ComponentData {
                genus: c.genus,
                deg_l: rint(c.deg_l),
                points: (1..=c.markings)
                    .map(|j| PointDecl {
                        id: format!("mark{j}"),
                        kind: PointKind::Marking,
                        aut: 1,
                    })
                    .chain(c.plain_orders.keys().map(|p| PointDecl {
                        id: p.clone(),
                        kind: PointKind::Plain,
                        aut: 1,
                    }))
                    .collect(),
            })
            .collect();
        let mut divisors: BTreeMap<String, DivisorData> = omega
            .monomials
            .iter()
            .map(|f| (f.name.clone(), DivisorData::default()))
            .collect();
        let coord_names: Vec<String> =
            omega.monomials.iter().map(|f| f.name.clone()).collect();
        let record = |divisors: &mut BTreeMap<String, DivisorData>,
                          comp: usize,
                          point: &str,
                          orders: &[i64]| {
            for (name, &o) in coord_names.iter().zip(orders) {
                if o > 0 {
                    divisors
                        .get_mut(name)
                        .expect("divisor exists")
                        .orders
                        .insert((comp, point.to_string()), rint(o));
                }
            }
        };
        for c in &self.components {
            let ci = index_of[&c.id];
            for (p, orders) in &c.plain_orders {
                record(&mut divisors, ci, p, orders);
            }
        }
        let mut edges = Vec::new();
        for (e_idx, e) in self.edges.iter().enumerate() {
            let point = format!("node{e_idx}");
            let a_idx = index_of[&e.ends.0];
            let b_idx = index_of[&e.ends.1];
            for (ci, orders) in [(a_idx, &e.orders.0), (b_idx, &e.orders.1)] {
                components[ci].points.push(PointDecl {
                    id: point.clone(),
                    kind: PointKind::Node,
                    aut: 1,
                });
                record(&mut divisors, ci, &point, orders);
            }
            edges.push(((a_idx, point.clone()), (b_idx, point.clone())));
        }
        Ok((
            pkg,
            omega,
            QuasimapGraph {
                components,
                edges,
                divisors,
            },
        ))
    }
}
