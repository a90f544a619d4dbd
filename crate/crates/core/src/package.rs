//! R-charged torus packages and their combinatorial GIT layer.
//!
//! A package is a torus `Gamma = (C^*)^r` acting on `C^N` through an integer
//! weight matrix, a primitive character `epsilon` cutting out the gauge
//! subtorus `G = ker(epsilon)`, and a polarization character `vartheta`.
//! Everything downstream works with the induced data: the quotient character
//! lattice of `G`, the `G`-weights of the coordinates, and the restricted
//! polarization `theta`.
//!
//! Invariant monomials carry a bi-degree `(k, c)` defined by
//! `weights . exponents = k*vartheta + c*epsilon`; `c/k` is the slope.
//! Supports (sets of coordinates allowed to be simultaneously nonzero) are
//! classified by the toric criterion: semistable when `theta` lies in the
//! rational cone of the support's `G`-weights, stable when it lies in the
//! interior, the weights span, and the stabilizer is finite.

use std::collections::BTreeSet;

use num::bigint::BigInt;
use num::{Integer, One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{self, Splitting};
use crate::lp;
use crate::par;
use crate::rat::{rint, Rat};

/// An integer character of the ambient torus, written in the standard basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Character(pub Vec<i64>);

impl Character {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn scaled(&self, m: i64) -> Character {
        Character(self.0.iter().map(|x| x * m).collect())
    }

    /// `self - a * other`.
    pub fn minus_multiple(&self, a: i64, other: &Character) -> Character {
        Character(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(x, y)| x - a * y)
                .collect(),
        )
    }
}

/// Bi-degree of an invariant element: theta-weight `k` and R-charge `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BiDegree {
    pub theta_weight: i64,
    pub r_charge: i64,
}

impl BiDegree {
    /// Slope `c/k`; defined only for positive theta-weight.
    pub fn slope(&self) -> Result<Rat> {
        if self.theta_weight == 0 {
            return Err(Error::ZeroThetaWeight);
        }
        Ok(Rat::new(
            BigInt::from(self.r_charge),
            BigInt::from(self.theta_weight),
        ))
    }
}

/// A monomial together with its cached bi-degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialElt {
    pub name: String,
    pub exponents: Vec<i64>,
    pub bidegree: BiDegree,
}

impl MonomialElt {
    pub fn slope(&self) -> Result<Rat> {
        self.bidegree.slope()
    }

    pub fn support(&self) -> Support {
        Support(
            self.exponents
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(j, _)| j)
                .collect(),
        )
    }
}

/// A set of coordinate indices allowed to be simultaneously nonzero.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Support(pub BTreeSet<usize>);

impl Support {
    pub fn contains(&self, j: usize) -> bool {
        self.0.contains(&j)
    }

    pub fn names(&self, pkg: &TorusPackage) -> Vec<String> {
        self.0.iter().map(|&j| pkg.coord_names[j].clone()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupportClass {
    Stable,
    StrictlySemistable,
    Unstable,
}

#[derive(Debug, Clone)]
pub struct SupportInfo {
    pub support: Support,
    pub class: SupportClass,
}

#[derive(Debug, Clone)]
pub struct SsEqS {
    /// Every semistable support is stable.
    pub holds: bool,
    /// At least one semistable support exists.
    pub nonempty: bool,
    /// A strictly semistable support, when `holds` fails.
    pub counterexample: Option<Support>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StabilizerOrder {
    Finite(BigInt),
    Infinite,
}

/// `n0`: the largest stabilizer order over stable supports.
/// `d_lcm`: their least common multiple (the denominator bound for degrees).
#[derive(Debug, Clone)]
pub struct IsotropyBounds {
    pub n0: BigInt,
    pub d_lcm: BigInt,
}

#[derive(Debug, Clone)]
pub struct Fullness {
    pub full: bool,
    /// A support misclassified by the vanishing of `S`, when not full.
    pub witness: Option<Support>,
}

#[derive(Debug, Clone)]
pub struct TorusPackage {
    coord_names: Vec<String>,
    weights: Vec<Vec<i64>>,
    epsilon: Character,
    vartheta: Character,
    ambient: BTreeSet<usize>,
    splitting: Splitting,
    g_weights: Vec<Vec<i64>>,
    theta: Vec<i64>,
}

fn validate_coord_name(name: &str) -> Result<()> {
    if name.is_empty() {
        return Err(Error::invalid("empty coordinate name"));
    }
    if name
        .chars()
        .any(|ch| ch.is_whitespace() || matches!(ch, '*' | '^' | '/'))
    {
        return Err(Error::invalid(format!(
            "coordinate name `{name}` may not contain whitespace, '*', '^' or '/'"
        )));
    }
    Ok(())
}

impl TorusPackage {
    pub fn new(
        coord_names: Vec<String>,
        weights: Vec<Vec<i64>>,
        epsilon: Character,
        vartheta: Character,
        ambient: Option<BTreeSet<usize>>,
    ) -> Result<Self> {
        let rank = weights.len();
        if rank == 0 {
            return Err(Error::invalid("weight matrix needs at least one row"));
        }
        let n = coord_names.len();
        if n == 0 {
            return Err(Error::invalid("package needs at least one coordinate"));
        }
        for row in &weights {
            if row.len() != n {
                return Err(Error::invalid(
                    "every weight row must have one entry per coordinate",
                ));
            }
        }
        if epsilon.len() != rank || vartheta.len() != rank {
            return Err(Error::invalid(
                "epsilon and vartheta must be characters of the full torus",
            ));
        }
        let mut seen = BTreeSet::new();
        for name in &coord_names {
            validate_coord_name(name)?;
            if !seen.insert(name.clone()) {
                return Err(Error::invalid(format!("duplicate coordinate `{name}`")));
            }
        }
        let ambient = match ambient {
            None => (0..n).collect(),
            Some(a) => {
                if a.iter().any(|&j| j >= n) {
                    return Err(Error::invalid("ambient restriction out of range"));
                }
                a
            }
        };
        let splitting = Splitting::for_primitive(epsilon.as_slice())?;
        let g_weights: Vec<Vec<i64>> = (0..n)
            .map(|j| {
                let col: Vec<i64> = weights.iter().map(|row| row[j]).collect();
                splitting.project(&col)
            })
            .collect();
        let theta = splitting.project(vartheta.as_slice());
        Ok(TorusPackage {
            coord_names,
            weights,
            epsilon,
            vartheta,
            ambient,
            splitting,
            g_weights,
            theta,
        })
    }

    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    pub fn num_coords(&self) -> usize {
        self.coord_names.len()
    }

    /// Rank of the gauge group `G = ker(epsilon)`.
    pub fn g_rank(&self) -> usize {
        self.rank() - 1
    }

    pub fn coord_names(&self) -> &[String] {
        &self.coord_names
    }

    pub fn coord_index(&self, name: &str) -> Option<usize> {
        self.coord_names.iter().position(|n| n == name)
    }

    pub fn weights(&self) -> &[Vec<i64>] {
        &self.weights
    }

    pub fn epsilon(&self) -> &Character {
        &self.epsilon
    }

    pub fn vartheta(&self) -> &Character {
        &self.vartheta
    }

    pub fn ambient(&self) -> &BTreeSet<usize> {
        &self.ambient
    }

    pub fn splitting(&self) -> &Splitting {
        &self.splitting
    }

    /// `G`-weight of coordinate `j` in the quotient lattice.
    pub fn g_weight(&self, j: usize) -> &[i64] {
        &self.g_weights[j]
    }

    /// Image of `vartheta` in the quotient lattice: the polarization of `G`.
    pub fn theta(&self) -> &[i64] {
        &self.theta
    }

    /// Full torus weight of a monomial: `weights . exponents`.
    pub fn gamma_weight(&self, exponents: &[i64]) -> Vec<i64> {
        self.weights
            .iter()
            .map(|row| row.iter().zip(exponents).map(|(w, e)| w * e).sum())
            .collect()
    }

    fn check_exponents(&self, exponents: &[i64]) -> Result<()> {
        if exponents.len() != self.num_coords() {
            return Err(Error::invalid("exponent vector has wrong length"));
        }
        if exponents.iter().any(|&e| e < 0) {
            return Err(Error::invalid("exponents must be nonnegative"));
        }
        for (j, &e) in exponents.iter().enumerate() {
            if e > 0 && !self.ambient.contains(&j) {
                return Err(Error::invalid(format!(
                    "monomial uses coordinate `{}` outside the ambient restriction",
                    self.coord_names[j]
                )));
            }
        }
        Ok(())
    }

    /// Bi-degree with respect to the package's own `vartheta`.
    pub fn bidegree(&self, exponents: &[i64]) -> Result<BiDegree> {
        self.bidegree_with(&self.vartheta, exponents)
    }

    /// Bi-degree with respect to an explicit polarization: the unique
    /// `(k, c)` with `weights . exponents = k*vartheta + c*epsilon` and
    /// `k >= 0`.
    pub fn bidegree_with(&self, vartheta: &Character, exponents: &[i64]) -> Result<BiDegree> {
        self.check_exponents(exponents)?;
        let w = self.gamma_weight(exponents);
        let gbar = self.splitting.project(&w);
        let theta_bar = self.splitting.project(vartheta.as_slice());
        let name = || self.monomial_name(exponents);
        let k = if theta_bar.iter().all(|&x| x == 0) {
            if gbar.iter().any(|&x| x != 0) {
                return Err(Error::NotInvariant(name()));
            }
            0
        } else {
            let j0 = theta_bar.iter().position(|&x| x != 0).unwrap();
            if gbar[j0] % theta_bar[j0] != 0 {
                return Err(Error::NotInvariant(name()));
            }
            let k = gbar[j0] / theta_bar[j0];
            if k < 0 || gbar.iter().zip(&theta_bar).any(|(&g, &t)| g != k * t) {
                return Err(Error::NotInvariant(name()));
            }
            k
        };
        let c = self.splitting.epsilon_coefficient(&w)
            - k * self.splitting.epsilon_coefficient(vartheta.as_slice());
        debug_assert_eq!(
            w,
            vartheta
                .as_slice()
                .iter()
                .zip(self.epsilon.as_slice())
                .map(|(t, e)| k * t + c * e)
                .collect::<Vec<_>>()
        );
        Ok(BiDegree {
            theta_weight: k,
            r_charge: c,
        })
    }

    pub fn monomial(&self, exponents: Vec<i64>) -> Result<MonomialElt> {
        self.monomial_with(&self.vartheta.clone(), exponents)
    }

    pub fn monomial_with(&self, vartheta: &Character, exponents: Vec<i64>) -> Result<MonomialElt> {
        let bidegree = self.bidegree_with(vartheta, &exponents)?;
        Ok(MonomialElt {
            name: self.monomial_name(&exponents),
            exponents,
            bidegree,
        })
    }

    /// Canonical name: factors in coordinate order, `*` separated, with
    /// `^` powers; the empty monomial is `1`.
    pub fn monomial_name(&self, exponents: &[i64]) -> String {
        let parts: Vec<String> = exponents
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(j, &e)| {
                if e == 1 {
                    self.coord_names[j].clone()
                } else {
                    format!("{}^{}", self.coord_names[j], e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    fn support_gens(&self, support: &Support) -> Vec<Vec<i64>> {
        support.0.iter().map(|&j| self.g_weights[j].clone()).collect()
    }
}

/// Toric classification of a single support.
pub fn classify_support(pkg: &TorusPackage, support: &Support) -> SupportClass {
    let gens = pkg.support_gens(support);
    let theta = pkg.theta();
    if !lp::cone_contains(&gens, theta) {
        return SupportClass::Unstable;
    }
    let n = pkg.g_rank();
    let spans = lattice::int_rank(&gens) == n;
    let finite = lattice::lattice_index(&gens, n).is_some();
    if spans && finite && lp::cone_relint_contains(&gens, theta) {
        SupportClass::Stable
    } else {
        SupportClass::StrictlySemistable
    }
}

/// Classifies every subset of the ambient coordinates, in mask order.
pub fn semistable_supports(pkg: &TorusPackage) -> Vec<SupportInfo> {
    let coords: Vec<usize> = pkg.ambient().iter().copied().collect();
    let masks: Vec<u64> = (0..(1u64 << coords.len())).collect();
    par::par_map(&masks, |&mask| {
        let support = Support(
            coords
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &j)| j)
                .collect(),
        );
        let class = classify_support(pkg, &support);
        SupportInfo { support, class }
    })
}

/// Checks that the semistable and stable loci coincide and are nonempty.
pub fn check_ss_eq_s(pkg: &TorusPackage) -> SsEqS {
    let mut nonempty = false;
    for info in semistable_supports(pkg) {
        match info.class {
            SupportClass::Stable => nonempty = true,
            SupportClass::StrictlySemistable => {
                return SsEqS {
                    holds: false,
                    nonempty: true,
                    counterexample: Some(info.support),
                }
            }
            SupportClass::Unstable => {}
        }
    }
    SsEqS {
        holds: nonempty,
        nonempty,
        counterexample: None,
    }
}

/// Order of the subgroup of `G` fixing a point with the given support.
pub fn stabilizer_order(pkg: &TorusPackage, support: &Support) -> StabilizerOrder {
    match lattice::lattice_index(&pkg.support_gens(support), pkg.g_rank()) {
        Some(idx) => StabilizerOrder::Finite(idx),
        None => StabilizerOrder::Infinite,
    }
}

/// Maximum and lcm of stabilizer orders over the stable supports.
pub fn isotropy_bounds(pkg: &TorusPackage) -> Result<IsotropyBounds> {
    let mut n0 = BigInt::zero();
    let mut d_lcm = BigInt::one();
    let mut found = false;
    for info in semistable_supports(pkg) {
        if info.class != SupportClass::Stable {
            continue;
        }
        let StabilizerOrder::Finite(order) = stabilizer_order(pkg, &info.support) else {
            continue;
        };
        found = true;
        if order > n0 {
            n0 = order.clone();
        }
        d_lcm = d_lcm.lcm(&order);
    }
    if !found {
        return Err(Error::NoStableSupport);
    }
    Ok(IsotropyBounds { n0, d_lcm })
}

/// Whether the common vanishing of `s` cuts out exactly the unstable locus.
pub fn is_full(pkg: &TorusPackage, s: &[MonomialElt]) -> Fullness {
    let supports: Vec<Support> = s.iter().map(MonomialElt::support).collect();
    for info in semistable_supports(pkg) {
        let s_vanishes = supports
            .iter()
            .all(|fs| !fs.0.is_subset(&info.support.0));
        let unstable = info.class == SupportClass::Unstable;
        if s_vanishes != unstable {
            return Fullness {
                full: false,
                witness: Some(info.support),
            };
        }
    }
    Fullness {
        full: true,
        witness: None,
    }
}

/// A stability datum: a finite monomial set `S`, the parameter `A`, and the
/// polarization the bi-degrees refer to.
#[derive(Debug, Clone)]
pub struct OmegaTriple {
    pub monomials: Vec<MonomialElt>,
    pub a: Rat,
    pub vartheta: Character,
}

impl OmegaTriple {
    pub fn new(pkg: &TorusPackage, exponent_sets: Vec<Vec<i64>>, a: Rat) -> Result<Self> {
        Self::with_vartheta(pkg, pkg.vartheta().clone(), exponent_sets, a)
    }

    pub fn with_vartheta(
        pkg: &TorusPackage,
        vartheta: Character,
        exponent_sets: Vec<Vec<i64>>,
        a: Rat,
    ) -> Result<Self> {
        if exponent_sets.is_empty() {
            return Err(Error::invalid("S must be nonempty"));
        }
        let mut monomials = Vec::with_capacity(exponent_sets.len());
        let mut names = BTreeSet::new();
        for exps in exponent_sets {
            let m = pkg.monomial_with(&vartheta, exps)?;
            if m.bidegree.theta_weight < 1 {
                return Err(Error::invalid(format!(
                    "element `{}` of S must have positive theta-weight",
                    m.name
                )));
            }
            if !names.insert(m.name.clone()) {
                return Err(Error::invalid(format!("duplicate element `{}` in S", m.name)));
            }
            monomials.push(m);
        }
        let triple = OmegaTriple {
            monomials,
            a,
            vartheta,
        };
        let s_max = triple.s_max();
        if triple.a <= s_max {
            return Err(Error::invalid(format!(
                "A = {} must exceed s_max = {}",
                crate::rat::rat_to_string(&triple.a),
                crate::rat::rat_to_string(&s_max)
            )));
        }
        Ok(triple)
    }

    /// Maximum slope over `S`.
    pub fn s_max(&self) -> Rat {
        self.monomials
            .iter()
            .map(|m| m.slope().expect("positive theta-weight"))
            .max()
            .expect("S nonempty")
    }

    /// Lower endpoint of the admissible window `(s_max, infinity)`.
    pub fn window_min(&self) -> Rat {
        self.s_max()
    }

    pub fn find(&self, name: &str) -> Option<usize> {
        self.monomials.iter().position(|m| m.name == name)
    }

    /// Shift of the polarization by `-a * epsilon` with the matching shifts
    /// of `A`, the bi-degrees, and the total degree.
    ///
    /// Returns the re-indexed datum and the new total degree
    /// `d - a*(2g - 2 + k)`.
    pub fn reindex(
        &self,
        pkg: &TorusPackage,
        genus: i64,
        markings: i64,
        degree: &Rat,
        a_shift: i64,
    ) -> Result<(OmegaTriple, Rat)> {
        let vartheta = self.vartheta.minus_multiple(a_shift, pkg.epsilon());
        let triple = OmegaTriple::with_vartheta(
            pkg,
            vartheta,
            self.monomials.iter().map(|m| m.exponents.clone()).collect(),
            &self.a + rint(a_shift),
        )?;
        for (old, new) in self.monomials.iter().zip(&triple.monomials) {
            debug_assert_eq!(new.bidegree.theta_weight, old.bidegree.theta_weight);
            debug_assert_eq!(
                new.bidegree.r_charge,
                old.bidegree.r_charge + old.bidegree.theta_weight * a_shift
            );
        }
        let chi = rint(2 * genus - 2 + markings);
        Ok((triple, degree - rint(a_shift) * chi))
    }

    /// Replaces each `f` by `f^(m/k_f)` with `m = lcm` of the theta-weights,
    /// `vartheta` by `m*vartheta`, and `A` by `m*A`, so every element gets
    /// theta-weight 1.  Returns the normalized datum and `m`.
    pub fn make_common_theta_weight(&self, pkg: &TorusPackage) -> Result<(OmegaTriple, i64)> {
        let mut m = 1i64;
        for mono in &self.monomials {
            m = lattice::lcm_i64(m, mono.bidegree.theta_weight);
        }
        let vartheta = self.vartheta.scaled(m);
        let exps: Vec<Vec<i64>> = self
            .monomials
            .iter()
            .map(|mono| {
                let q = m / mono.bidegree.theta_weight;
                mono.exponents.iter().map(|e| e * q).collect()
            })
            .collect();
        let triple = OmegaTriple::with_vartheta(pkg, vartheta, exps, &self.a * rint(m))?;
        for mono in &triple.monomials {
            debug_assert_eq!(mono.bidegree.theta_weight, 1);
        }
        Ok((triple, m))
    }
}

/// All invariant monomials with theta-weight in `1..=k_max` and total degree
/// at most `degree_max`, supported inside the ambient restriction.  Ordered
/// by exponent vector, descending lexicographically, so earlier coordinates
/// and higher powers come first.
pub fn enumerate_invariant_monomials(
    pkg: &TorusPackage,
    k_max: i64,
    degree_max: i64,
) -> Vec<MonomialElt> {
    enumerate_with_vartheta(pkg, pkg.vartheta(), k_max, degree_max)
}

pub fn enumerate_with_vartheta(
    pkg: &TorusPackage,
    vartheta: &Character,
    k_max: i64,
    degree_max: i64,
) -> Vec<MonomialElt> {
    let coords: Vec<usize> = pkg.ambient().iter().copied().collect();
    let mut out = Vec::new();
    let mut exps = vec![0i64; pkg.num_coords()];
    fn rec(
        pkg: &TorusPackage,
        vartheta: &Character,
        coords: &[usize],
        idx: usize,
        budget: i64,
        k_max: i64,
        exps: &mut Vec<i64>,
        out: &mut Vec<MonomialElt>,
    ) {
        if idx == coords.len() {
            if exps.iter().any(|&e| e > 0) {
                if let Ok(bd) = pkg.bidegree_with(vartheta, exps) {
                    if bd.theta_weight >= 1 && bd.theta_weight <= k_max {
                        out.push(MonomialElt {
                            name: pkg.monomial_name(exps),
                            exponents: exps.clone(),
                            bidegree: bd,
                        });
                    }
                }
            }
            return;
        }
        let j = coords[idx];
        for e in 0..=budget {
            exps[j] = e;
            rec(pkg, vartheta, coords, idx + 1, budget - e, k_max, exps, out);
        }
        exps[j] = 0;
    }
    rec(
        pkg,
        vartheta,
        &coords,
        0,
        degree_max,
        k_max,
        &mut exps,
        &mut out,
    );
    out.sort_by(|a, b| b.exponents.cmp(&a.exponents));
    out
}

/// Maximum slope over the bounded enumeration.  This is a lower bound for
/// the true supremum of slopes of the invariant ring; it is exact whenever
/// the bounds cover a generating set.
pub fn s_max_global(pkg: &TorusPackage, k_max: i64, degree_max: i64) -> Result<Rat> {
    enumerate_invariant_monomials(pkg, k_max, degree_max)
        .iter()
        .map(|m| m.slope().expect("positive theta-weight"))
        .max()
        .ok_or(Error::EmptyEnumeration)
}

/// Probes for a good lift: do the slope-0 invariants found within the bounds
/// already cut out exactly the unstable locus?
pub fn good_lift_probe(pkg: &TorusPackage, k_max: i64, degree_max: i64) -> bool {
    let slope_zero: Vec<Support> = enumerate_invariant_monomials(pkg, k_max, degree_max)
        .into_iter()
        .filter(|m| m.bidegree.r_charge == 0)
        .map(|m| m.support())
        .collect();
    for info in semistable_supports(pkg) {
        let cut = slope_zero.iter().all(|fs| !fs.0.is_subset(&info.support.0));
        let unstable = info.class == SupportClass::Unstable;
        if cut != unstable {
            return false;
        }
    }
    true
}
