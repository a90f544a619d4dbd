//! Boundedness certificates: ray systems near the polarization, the degree
//! polytope, and the per-component numerical bounds.
//!
//! The certificate shows that total degree vectors of stable quasimaps with
//! fixed `(g, k, d)` live in a bounded rational polytope.  Rays close to
//! the polarization character are chosen inside every stable-support cone;
//! a Farkas witness for each membership yields a monomial section whose
//! nonvanishing bounds the degree against each ray from below, giving the
//! polytope inequalities.  Component counts and degree ranges follow from
//! the degree lower bounds a stable object satisfies.

use num::{BigInt, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::gcd_i64;
use crate::lp::{cone_contains, cone_membership, cone_relint_contains, gauss_solve, maximize, rank_rat, Constraint, Outcome};
use crate::package::{
    check_ss_eq_s, isotropy_bounds, semistable_supports, OmegaTriple, Support, SupportClass,
    TorusPackage,
};
use crate::rat::{floor_big, rint, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RaySystem {
    /// Rays in the character lattice of the reduced group, primitive.
    pub rays: Vec<Vec<i64>>,
    /// Lifts with epsilon-coefficient 0, one per ray.
    pub lifts: Vec<Vec<i64>>,
}

fn primitive(v: &[i64]) -> Vec<i64> {
    let g = v.iter().fold(0i64, |acc, &x| gcd_i64(acc, x));
    if g <= 1 {
        v.to_vec()
    } else {
        v.iter().map(|&x| x / g).collect()
    }
}

fn stable_support_cones(pkg: &TorusPackage) -> Vec<(Support, Vec<Vec<i64>>)> {
    semistable_supports(pkg)
        .into_iter()
        .filter(|info| info.class == SupportClass::Stable)
        .map(|info| {
            let gens = info
                .support
                .0
                .iter()
                .map(|&j| pkg.g_weight(j).to_vec())
                .collect();
            (info.support, gens)
        })
        .collect()
}

fn rays_pass(pkg: &TorusPackage, cones: &[(Support, Vec<Vec<i64>>)], rays: &[Vec<i64>]) -> bool {
    let n = pkg.g_rank();
    for ray in rays {
        for (_, gens) in cones {
            if !cone_contains(gens, ray) {
                return false;
            }
        }
    }
    if !cone_relint_contains(rays, pkg.theta()) {
        return false;
    }
    let rows: Vec<Vec<Rat>> = rays
        .iter()
        .map(|r| r.iter().map(|&x| rint(x)).collect())
        .collect();
    rank_rat(&rows) == n
}

/// Chooses one ray per reduced-group dimension, each inside every
/// stable-support cone, with the polarization interior to their span.
///
/// The search perturbs the polarization along a lattice basis summing to it
/// and pulls the perturbation toward the polarization until every
/// membership holds; it starts with the bare basis, which already works
/// when the stable chamber is wide.
pub fn select_theta_rays(pkg: &TorusPackage) -> Result<RaySystem> {
    let ss_eq_s = check_ss_eq_s(pkg);
    if !ss_eq_s.holds || !ss_eq_s.nonempty {
        return Err(Error::invalid(
            "ray selection requires a nonempty stable locus with ss = s",
        ));
    }
    let theta = pkg.theta().to_vec();
    let n = theta.len();
    let j_star = theta
        .iter()
        .position(|&t| t != 0)
        .ok_or(Error::ZeroThetaWeight)?;
    let mut basis: Vec<Vec<i64>> = Vec::with_capacity(n);
    for i in 0..n {
        if i == j_star {
            let mut b = theta.clone();
            for (j, x) in b.iter_mut().enumerate() {
                if j != j_star {
                    *x -= 1;
                }
            }
            // b_{j*} = theta - sum of the other unit vectors.
            let mut v = vec![0i64; n];
            v[j_star] = b[j_star];
            for (j, x) in b.iter().enumerate() {
                if j != j_star {
                    v[j] = *x;
                }
            }
            basis.push(v);
        } else {
            let mut e = vec![0i64; n];
            e[i] = 1;
            basis.push(e);
        }
    }
    debug_assert_eq!(
        (0..n)
            .map(|j| basis.iter().map(|b| b[j]).sum::<i64>())
            .collect::<Vec<_>>(),
        theta
    );

    let cones = stable_support_cones(pkg);
    let mut m: i64 = 0;
    loop {
        let rays: Vec<Vec<i64>> = basis
            .iter()
            .map(|b| {
                let v: Vec<i64> = theta
                    .iter()
                    .zip(b)
                    .map(|(&t, &bi)| m * t + bi)
                    .collect();
                primitive(&v)
            })
            .collect();
        if rays_pass(pkg, &cones, &rays) {
            let lifts = rays.iter().map(|r| pkg.splitting().lift(r)).collect();
            return Ok(RaySystem { rays, lifts });
        }
        m = if m == 0 { 1 } else { m * 2 };
        if m > (1 << 40) {
            return Err(Error::NoValidRays);
        }
    }
}

/// Re-checks the three ray conditions independently of how the system was
/// produced: membership in every stable-support cone, the polarization in
/// the strictly positive span, and full rank.
pub fn verify_rays(pkg: &TorusPackage, rays: &RaySystem) -> Result<()> {
    let n = pkg.g_rank();
    if rays.rays.len() != n || rays.lifts.len() != n {
        return Err(Error::invalid("expected one ray and one lift per dimension"));
    }
    for (ray, lift) in rays.rays.iter().zip(&rays.lifts) {
        if pkg.splitting().project(lift) != *ray
            || pkg.splitting().epsilon_coefficient(lift) != 0
        {
            return Err(Error::invalid("lift does not project to its ray"));
        }
    }
    let cones = stable_support_cones(pkg);
    for (ray_idx, ray) in rays.rays.iter().enumerate() {
        for (support, gens) in &cones {
            if !cone_contains(gens, ray) {
                return Err(Error::invalid(format!(
                    "ray {ray_idx} leaves the cone of stable support {:?}",
                    support.0
                )));
            }
        }
    }
    if !cone_relint_contains(&rays.rays, pkg.theta()) {
        return Err(Error::invalid(
            "polarization is not interior to the span of the rays",
        ));
    }
    let rows: Vec<Vec<Rat>> = rays
        .rays
        .iter()
        .map(|r| r.iter().map(|&x| rint(x)).collect())
        .collect();
    if rank_rat(&rows) != n {
        return Err(Error::invalid("rays do not span"));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreePolytope {
    /// Pairs (normal, rhs) with meaning `normal . x = rhs`.
    pub equalities: Vec<(Vec<Rat>, Rat)>,
    /// Pairs (normal, rhs) with meaning `normal . x <= rhs`.
    pub inequalities: Vec<(Vec<Rat>, Rat)>,
    pub vertices: Vec<Vec<Rat>>,
    pub bounded: bool,
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn to_rat_vec(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| rint(x)).collect()
}

/// The affine slice `{x : x . vartheta = d1, x . epsilon = d2}` cut by
/// `-x . lift_i <= B`, with its recession-cone boundedness verdict and
/// vertex list.
pub fn degree_polytope(
    pkg: &TorusPackage,
    rays: &RaySystem,
    d1: &Rat,
    d2: &Rat,
    b: &Rat,
) -> Result<DegreePolytope> {
    let r = pkg.rank();
    if b <= &Rat::zero() {
        return Err(Error::invalid("the degree margin B must be positive"));
    }
    let vartheta = to_rat_vec(pkg.vartheta().as_slice());
    let epsilon = to_rat_vec(pkg.epsilon().as_slice());
    let equalities = vec![(vartheta, d1.clone()), (epsilon, d2.clone())];
    let inequalities: Vec<(Vec<Rat>, Rat)> = rays
        .lifts
        .iter()
        .map(|lift| (lift.iter().map(|&x| rint(-x)).collect(), b.clone()))
        .collect();

    let bounded = recession_cone_is_trivial(&equalities, &inequalities, r);
    debug_assert_eq!(bounded, hull_interior_route(pkg, rays));

    let vertices = enumerate_vertices(&equalities, &inequalities, r);
    Ok(DegreePolytope {
        equalities,
        inequalities,
        vertices,
        bounded,
    })
}

/// The recession cone `{v : v . vartheta = 0, v . epsilon = 0,
/// -v . lift_i <= 0}` is trivial iff no coordinate can move inside it; each
/// direction is probed by a box-capped LP.  The LP solver works over
/// nonnegative variables, so `v` is split as `v = y - z` with `y, z >= 0`.
fn recession_cone_is_trivial(
    equalities: &[(Vec<Rat>, Rat)],
    inequalities: &[(Vec<Rat>, Rat)],
    r: usize,
) -> bool {
    let split = |normal: &[Rat]| -> Vec<Rat> {
        normal
            .iter()
            .cloned()
            .chain(normal.iter().map(|x| -x))
            .collect()
    };
    let mut constraints = Vec::new();
    for (normal, _) in equalities {
        constraints.push(Constraint::eq(split(normal), Rat::zero()));
    }
    for (normal, _) in inequalities {
        constraints.push(Constraint::le(split(normal), Rat::zero()));
    }
    for j in 0..r {
        let mut unit = vec![Rat::zero(); r];
        unit[j] = Rat::one();
        constraints.push(Constraint::le(split(&unit), Rat::one()));
        unit[j] = -Rat::one();
        constraints.push(Constraint::le(split(&unit), Rat::one()));
    }
    for j in 0..r {
        for sign in [1i64, -1] {
            let mut unit = vec![Rat::zero(); r];
            unit[j] = rint(sign);
            let objective = split(&unit);
            match maximize(&objective, &constraints) {
                Outcome::Optimal { value, .. } => {
                    if value > Rat::zero() {
                        return false;
                    }
                }
                Outcome::Unbounded => return false,
                Outcome::Infeasible => unreachable!("0 satisfies the cone constraints"),
            }
        }
    }
    true
}

/// Independent route to the same verdict: the slice is bounded iff the
/// origin lies interior to the convex hull of `{epsilon, -epsilon,
/// vartheta, -vartheta, -lift_1, ..., -lift_n}` (the normals of the
/// polytope's homogenized constraints).
fn hull_interior_route(pkg: &TorusPackage, rays: &RaySystem) -> bool {
    let mut gens: Vec<Vec<i64>> = vec![
        pkg.epsilon().as_slice().to_vec(),
        pkg.epsilon().as_slice().iter().map(|&x| -x).collect(),
        pkg.vartheta().as_slice().to_vec(),
        pkg.vartheta().as_slice().iter().map(|&x| -x).collect(),
    ];
    for lift in &rays.lifts {
        gens.push(lift.iter().map(|&x| -x).collect());
    }
    let origin = vec![0i64; pkg.rank()];
    if !cone_relint_contains(&gens, &origin) {
        return false;
    }
    let rows: Vec<Vec<Rat>> = gens
        .iter()
        .map(|g| g.iter().map(|&x| rint(x)).collect())
        .collect();
    rank_rat(&rows) == pkg.rank()
}

fn enumerate_vertices(
    equalities: &[(Vec<Rat>, Rat)],
    inequalities: &[(Vec<Rat>, Rat)],
    r: usize,
) -> Vec<Vec<Rat>> {
    let need = r.saturating_sub(equalities.len());
    let idx: Vec<usize> = (0..inequalities.len()).collect();
    let mut vertices: Vec<Vec<Rat>> = Vec::new();
    for subset in subsets_of_size(&idx, need) {
        let mut a: Vec<Vec<Rat>> = equalities.iter().map(|(n, _)| n.clone()).collect();
        let mut rhs: Vec<Rat> = equalities.iter().map(|(_, v)| v.clone()).collect();
        for &i in &subset {
            a.push(inequalities[i].0.clone());
            rhs.push(inequalities[i].1.clone());
        }
        let Some(x) = gauss_solve(&a, &rhs) else {
            continue;
        };
        let feasible = inequalities
            .iter()
            .all(|(normal, b)| dot(normal, &x) <= *b);
        if feasible && !vertices.contains(&x) {
            vertices.push(x);
        }
    }
    vertices.sort();
    vertices
}

fn subsets_of_size(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if items.len() < k {
        return vec![];
    }
    let mut out = Vec::new();
    let first = items[0];
    for mut rest in subsets_of_size(&items[1..], k - 1) {
        rest.insert(0, first);
        out.push(rest);
    }
    out.extend(subsets_of_size(&items[1..], k));
    out
}

/// Numerical bounds on the shape of a stable quasimap with the given
/// `(g, k, d)`: counts of components by the sign of `deg_wlog` and a range
/// for every per-component degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentBounds {
    /// Margin `1/(2D)` by which negative components clear the window.
    pub margin: Rat,
    /// Upper bound for the number of components with `deg_wlog < 0`.
    pub max_negative_components: i64,
    /// Upper bound for the sum of `deg_wlog` over components with
    /// `deg_wlog > 0` (hence also for their count).
    pub max_positive_wlog_sum: i64,
    /// Upper bound for `deg_wlog` of a single component.
    pub max_wlog: i64,
    /// Range containing every per-component degree of the polarization.
    pub deg_lower: Rat,
    pub deg_upper: Rat,
    /// Upper bound for the number of components with `deg_wlog = 0`.
    pub max_zero_components: i64,
    pub max_components: i64,
    /// Set when the bounds admit no degree assignment at all.
    pub empty: bool,
}

pub fn component_degree_bounds(
    pkg: &TorusPackage,
    omega: &OmegaTriple,
    genus: i64,
    markings: i64,
    degree: &Rat,
) -> Result<ComponentBounds> {
    let bounds = isotropy_bounds(pkg)?;
    let margin = Rat::new(BigInt::one(), 2 * bounds.d_lcm.clone());
    let s_max = omega.s_max();
    let chi = rint(2 * genus - 2 + markings);

    // Sum of deg_wlog over negative components is at least
    // (s_max/margin)(2 - 2g - k) - d/margin.
    let neg_sum_min = (&s_max / &margin) * -&chi - degree / &margin;
    let max_negative_components = floor_big(&-&neg_sum_min)
        .max(BigInt::zero())
        .to_i64()
        .ok_or_else(|| Error::invalid("component bound overflows i64"))?;

    // Sum over positive components is at most
    // (2g - 2 + k)(1 + s_max/margin) + d/margin.
    let pos_sum_raw = &chi * (Rat::one() + &s_max / &margin) + degree / &margin;
    let pos_floor = floor_big(&pos_sum_raw);
    let infeasible_positive = pos_floor < BigInt::zero();
    let max_positive_wlog_sum = pos_floor
        .max(BigInt::zero())
        .to_i64()
        .ok_or_else(|| Error::invalid("component bound overflows i64"))?;

    // One component's deg_wlog is the total minus the others', and the
    // others are bounded below by the negative-sum bound.
    let neg_sum_int = {
        // Integer sums above a rational bound are above its ceiling.
        let f = floor_big(&neg_sum_min);
        if Rat::from(f.clone()) == neg_sum_min {
            f
        } else {
            f + BigInt::one()
        }
    };
    let max_wlog = (BigInt::from(2 * genus - 2 + markings) - neg_sum_int.min(BigInt::zero()))
        .max(BigInt::zero())
        .to_i64()
        .ok_or_else(|| Error::invalid("component bound overflows i64"))?;

    let deg_lower = -&s_max * rint(max_wlog);
    // Components with deg_wlog = 0 each carry degree at least 1/D.
    let zero_budget = degree + rint(max_positive_wlog_sum) * deg_lower.abs();
    let max_zero_components = (floor_big(&(&zero_budget * Rat::from(bounds.d_lcm.clone()))))
        .max(BigInt::zero())
        .to_i64()
        .ok_or_else(|| Error::invalid("component bound overflows i64"))?;
    let max_components = max_negative_components + max_positive_wlog_sum + max_zero_components;
    let deg_upper = degree + rint((max_components - 1).max(0)) * deg_lower.abs();

    let empty = degree < &deg_lower || infeasible_positive || max_components == 0;
    Ok(ComponentBounds {
        margin,
        max_negative_components,
        max_positive_wlog_sum,
        max_wlog,
        deg_lower,
        deg_upper,
        max_zero_components,
        max_components,
        empty,
    })
}

/// Derives the inequality margin `B` from Farkas witnesses: for every
/// stable support and every ray, the membership certificate scales to a
/// monomial of weight `m*lift_i + c*epsilon`; its nonvanishing on a stable
/// object bounds `deg` against the ray by `|c/m|` per unit of `|deg_wlog|`.
pub fn farkas_bound(
    pkg: &TorusPackage,
    rays: &RaySystem,
    bounds: &ComponentBounds,
) -> Result<Rat> {
    let cones = stable_support_cones(pkg);
    let mut worst_slope = Rat::zero();
    for (ray, lift) in rays.rays.iter().zip(&rays.lifts) {
        for (support, gens) in &cones {
            let coeffs = cone_membership(gens, ray).ok_or_else(|| {
                Error::invalid("verified ray lost cone membership")
            })?;
            let mut scale = BigInt::one();
            for c in &coeffs {
                scale = num::integer::lcm(scale, c.denom().clone());
            }
            let m = Rat::from(scale.clone());
            let mut exponents = vec![0i64; pkg.num_coords()];
            for (&j, c) in support.0.iter().zip(&coeffs) {
                let e = (c * &m).to_integer();
                exponents[j] = e.to_i64().ok_or_else(|| {
                    Error::invalid("Farkas witness exponent overflows i64")
                })?;
            }
            let full = pkg.gamma_weight(&exponents);
            let scaled_lift: Vec<i64> = lift
                .iter()
                .map(|&x| {
                    scale
                        .to_i64()
                        .map(|s| s * x)
                        .ok_or_else(|| Error::invalid("Farkas scale overflows i64"))
                })
                .collect::<Result<_>>()?;
            let c_eps = pkg.splitting().epsilon_coefficient(&full)
                - pkg.splitting().epsilon_coefficient(&scaled_lift);
            debug_assert_eq!(
                pkg.splitting().project(&full),
                pkg.splitting().project(&scaled_lift)
            );
            let slope = rint(c_eps).abs() / m;
            if slope > worst_slope {
                worst_slope = slope;
            }
        }
    }
    // Total |deg_wlog| over components: the positive side sums to at most
    // max_positive_wlog_sum, each negative component contributes at most 2.
    let wlog_mass = rint(bounds.max_positive_wlog_sum + 2 * bounds.max_negative_components);
    Ok(Rat::one() + worst_slope * wlog_mass)
}

#[derive(Debug, Clone)]
pub struct Certificate {
    pub n0: BigInt,
    pub d_lcm: BigInt,
    pub rays: RaySystem,
    pub b: Rat,
    pub polytope: DegreePolytope,
    pub component_bounds: ComponentBounds,
}

/// Assembles the full boundedness certificate for `(g, k, d)`.
pub fn certify_bounded(
    pkg: &TorusPackage,
    omega: &OmegaTriple,
    genus: i64,
    markings: i64,
    degree: &Rat,
    b_override: Option<Rat>,
) -> Result<Certificate> {
    let iso = isotropy_bounds(pkg)?;
    let rays = select_theta_rays(pkg)?;
    verify_rays(pkg, &rays)?;
    let component_bounds = component_degree_bounds(pkg, omega, genus, markings, degree)?;
    let b = match b_override {
        Some(b) => b,
        None => farkas_bound(pkg, &rays, &component_bounds)?,
    };
    let chi = rint(2 * genus - 2 + markings);
    let polytope = degree_polytope(pkg, &rays, degree, &chi, &b)?;
    Ok(Certificate {
        n0: iso.n0,
        d_lcm: iso.d_lcm,
        rays,
        b,
        polytope,
        component_bounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::rat::rat;

    #[test]
    fn msp_rays_and_lifts() {
        let (pkg, _) = catalog::msp_quintic();
        let rays = select_theta_rays(&pkg).unwrap();
        assert_eq!(rays.rays, vec![vec![1, 1], vec![0, 1]]);
        assert_eq!(rays.lifts, vec![vec![1, 1, 0], vec![0, 1, 0]]);
        verify_rays(&pkg, &rays).unwrap();
    }

    #[test]
    fn rank_one_packages_use_theta_itself() {
        let (pkg, _) = catalog::pn_charges(&[0, 0, 0]).unwrap();
        let rays = select_theta_rays(&pkg).unwrap();
        assert_eq!(rays.rays, vec![vec![1]]);
        verify_rays(&pkg, &rays).unwrap();

        let (pkg, _) = catalog::ci_lg(5, &[2, 3]).unwrap();
        let rays = select_theta_rays(&pkg).unwrap();
        assert_eq!(rays.rays.len(), 1);
        verify_rays(&pkg, &rays).unwrap();
    }

    #[test]
    fn msp_slice_is_a_bounded_segment() {
        let (pkg, omega) = catalog::msp_quintic();
        let cert = certify_bounded(&pkg, &omega, 1, 0, &rint(1), None).unwrap();
        assert!(cert.polytope.bounded);
        assert_eq!(cert.polytope.vertices.len(), 2);
        assert_eq!(cert.component_bounds.max_negative_components, 10);
        assert!(!cert.component_bounds.empty);
        // The slice direction is spanned by (2, -1, 0): the two lifts see
        // it with opposite signs, which is what caps the segment.
        let v = [rint(2), rint(-1), rint(0)];
        let seen: Vec<Rat> = cert
            .rays
            .lifts
            .iter()
            .map(|l| {
                l.iter()
                    .zip(&v)
                    .map(|(&a, b)| rint(a) * b)
                    .sum::<Rat>()
            })
            .collect();
        assert_eq!(seen, vec![rint(1), rint(-1)]);
    }

    #[test]
    fn dropping_a_ray_unbounds_the_slice() {
        let (pkg, _) = catalog::msp_quintic();
        let full = select_theta_rays(&pkg).unwrap();
        let crippled = RaySystem {
            rays: vec![full.rays[0].clone()],
            lifts: vec![full.lifts[0].clone()],
        };
        let poly = degree_polytope(&pkg, &crippled, &rint(1), &rint(0), &rint(1)).unwrap();
        assert!(!poly.bounded);
    }

    #[test]
    fn component_bound_oracles() {
        let (pkg, omega) = catalog::msp_quintic();
        let b = component_degree_bounds(&pkg, &omega, 1, 0, &rint(0)).unwrap();
        assert_eq!(b.max_negative_components, 0);
        assert_eq!(b.margin, rat(1, 10));

        let (pkg, omega) = catalog::pn_charges(&[0, 0]).unwrap();
        let b = component_degree_bounds(&pkg, &omega, 0, 3, &rint(0)).unwrap();
        assert_eq!(b.max_positive_wlog_sum, 1);

        // Negative total degree with charge-0 coordinates: empty moduli.
        let b = component_degree_bounds(&pkg, &omega, 1, 0, &rint(-1)).unwrap();
        assert!(b.empty);
    }

    #[test]
    fn projective_space_certificate() {
        let (pkg, omega) = catalog::pn_charges(&[0, 0, 0]).unwrap();
        let cert = certify_bounded(&pkg, &omega, 0, 3, &rint(2), None).unwrap();
        assert_eq!(cert.n0, BigInt::one());
        assert_eq!(cert.d_lcm, BigInt::one());
        assert!(cert.polytope.bounded);
        assert!(!cert.component_bounds.empty);
    }

    #[test]
    fn farkas_bound_is_positive_and_certifies() {
        let (pkg, omega) = catalog::msp_quintic();
        let rays = select_theta_rays(&pkg).unwrap();
        let bounds = component_degree_bounds(&pkg, &omega, 1, 0, &rint(1)).unwrap();
        let b = farkas_bound(&pkg, &rays, &bounds).unwrap();
        assert!(b >= Rat::one());
        let poly = degree_polytope(&pkg, &rays, &rint(1), &rint(0), &b).unwrap();
        assert!(poly.bounded);
        assert!(!poly.vertices.is_empty());
    }
}
