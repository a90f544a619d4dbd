//! Acceptance suite: one test per advertised guarantee of the library, each
//! ending in a single PASS line describing what was verified.  Oracles are
//! computed independently here (closed-form support formulas, gcd stabilizer
//! orders, 2x2 rational cone solves) rather than routed through the code
//! under test.

use std::collections::{BTreeMap, BTreeSet};

use num::{BigInt, Signed};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use glsm_stab::bounded::{certify_bounded, degree_polytope, RaySystem};
use glsm_stab::catalog;
use glsm_stab::fiber::{Decision, FiberComponent, FiberEdge, FiberTree};
use glsm_stab::msp::{enumerate_components, msp_aut_is_finite, omega3_positive_at};
use glsm_stab::package::{
    check_ss_eq_s, is_full, isotropy_bounds, s_max_global, semistable_supports, stabilizer_order,
    OmegaTriple, StabilizerOrder, SupportClass, TorusPackage,
};
use glsm_stab::quasimap::{
    push_to_projective, ComponentData, DivisorData, Omega3Mode, PointDecl, PointKind,
    QuasimapGraph, Verdict,
};
use glsm_stab::rat::{rat, rint, Rat};
use glsm_stab::reduction::{blowup_step, reduce, ReductionPair};
use glsm_stab::walls::candidate_walls;

#[test]
fn a01_msp_support_analysis_matches_closed_form() {
    let (pkg, omega) = catalog::msp_quintic();
    let idx = |n: &str| pkg.coord_index(n).unwrap();
    let x_or_u: Vec<usize> = ["x1", "x2", "x3", "x4", "x5", "u"]
        .iter()
        .map(|n| idx(n))
        .collect();
    let u_or_v = [idx("u"), idx("v")];
    let p_or_v = [idx("p"), idx("v")];

    // Brute force over all 2^8 supports against the closed-form semistable
    // locus {(x,u) != 0} cap {(u,v) != 0} cap {(p,v) != 0}.
    let infos = semistable_supports(&pkg);
    assert_eq!(infos.len(), 256);
    let mut semistable_count = 0usize;
    for info in &infos {
        let hit = |set: &[usize]| set.iter().any(|&j| info.support.contains(j));
        let expected = hit(&x_or_u) && hit(&u_or_v) && hit(&p_or_v);
        let got = info.class != SupportClass::Unstable;
        assert_eq!(got, expected, "support {:?}", info.support.names(&pkg));
        assert_ne!(info.class, SupportClass::StrictlySemistable);
        semistable_count += usize::from(expected);
    }
    assert_eq!(semistable_count, 158);

    let ss = check_ss_eq_s(&pkg);
    assert!(ss.holds && ss.nonempty);

    let bounds = isotropy_bounds(&pkg).unwrap();
    assert_eq!(bounds.n0, BigInt::from(5));
    assert_eq!(bounds.d_lcm, BigInt::from(5));

    let mut bidegrees: Vec<(i64, i64)> = omega
        .monomials
        .iter()
        .map(|m| (m.bidegree.theta_weight, m.bidegree.r_charge))
        .collect();
    bidegrees.sort_unstable();
    let expected: Vec<(i64, i64)> = std::iter::repeat((1, 0)).take(6).chain([(5, 1)]).collect();
    assert_eq!(bidegrees, expected);
    assert_eq!(omega.s_max(), rat(1, 5));
    assert_eq!(catalog::msp_classical_window(), (rat(1, 5), rat(2, 5)));

    // No candidate wall strictly inside (1/5, 2/5) for (g, k) != (0, 0):
    // the only candidate in the half-open window (1/5, 2/5] is 2/5 itself.
    for (g, k) in [(1i64, 1i64), (0, 1), (1, 0), (2, 0), (0, 3)] {
        for d in [rint(0), rat(1, 5), rat(7, 5), rint(2)] {
            let report = candidate_walls(&pkg, &omega, g, k, &d, &rat(1, 5), &rat(2, 5)).unwrap();
            assert_eq!(report.candidates, vec![rat(2, 5)], "(g, k) = ({g}, {k}), d = {d}");
        }
    }
    println!(
        "PASS: 2^8 support brute force matches the closed-form semistable locus, \
         ss = s, N0 = D = 5, bi-degrees (1,0)x6 + (5,1), s_max = 1/5, \
         window (1/5, 2/5) wall-free"
    );
}

#[test]
fn a02_slope_of_the_escape_family_is_linear() {
    let (pkg, _) = catalog::msp_quintic();
    // Coordinates (x1..x5, p, u, v): the invariant x1^(5a+1) p^a v^2 has
    // bi-degree (1, a), hence slope a.
    for a in 0..=4i64 {
        let mut exps = vec![0i64; 8];
        exps[0] = 5 * a + 1;
        exps[5] = a;
        exps[7] = 2;
        let bd = pkg.bidegree(&exps).unwrap();
        assert_eq!(bd.theta_weight, 1, "a = {a}");
        assert_eq!(bd.r_charge, a, "a = {a}");
        assert_eq!(bd.slope().unwrap(), rint(a), "a = {a}");
    }
    println!("PASS: slope(x1^(5a+1) p^a v^2) = a for a = 0..4");
}

#[test]
fn a03_ci_lg_phase_isotropy_against_gcd_oracle() {
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 { a.abs() } else { gcd(b, a % b) }
    }

    let (pkg, omega) = catalog::ci_lg(5, &[2, 3]).unwrap();
    assert_eq!(omega.s_max(), rat(1, 2));
    assert!(is_full(&pkg, &omega.monomials).full);
    assert_eq!(pkg.g_rank(), 1);

    let bounds = isotropy_bounds(&pkg).unwrap();
    assert_eq!(bounds.n0, BigInt::from(3));

    // Independent oracle: for a one-dimensional reduced torus the stabilizer
    // of an orbit with the given support has order gcd of its weights.
    let ells = [2i64, 3];
    let mut max_order = 0i64;
    let mut stable_n = 0usize;
    for info in semistable_supports(&pkg) {
        if info.class != SupportClass::Stable {
            continue;
        }
        stable_n += 1;
        let mut g = 0i64;
        for j in 0..pkg.num_coords() {
            if info.support.contains(j) {
                g = gcd(g, pkg.g_weight(j)[0]);
            }
        }
        match stabilizer_order(&pkg, &info.support) {
            StabilizerOrder::Finite(n) => assert_eq!(n, BigInt::from(g)),
            StabilizerOrder::Infinite => {
                panic!("stable support {:?} reported infinite stabilizer", info.support.names(&pkg))
            }
        }
        assert!(
            ells.iter().any(|&l| l % g == 0),
            "stabilizer order {g} divides no hypersurface degree"
        );
        max_order = max_order.max(g);
    }
    assert!(stable_n > 0);
    assert_eq!(max_order, 3);
    println!(
        "PASS: CI LG-phase (l = (2,3)) has s_max = 1/2, full S, gcd-verified \
         stabilizer orders dividing the l_i, N0 = 3"
    );
}

#[test]
fn a04_delta_engine_descends_and_matches_euclid() {
    let trace = reduce(ReductionPair::new(vec![0, 2], vec![5, 0]).unwrap());
    assert_eq!(trace.deltas, vec![7, 5, 3, 0]);
    assert_eq!(trace.steps(), 3);

    let mut rng = ChaCha8Rng::seed_from_u64(0xacce5);
    for _ in 0..10_000 {
        let n = rng.gen_range(1..=6);
        let draw = |rng: &mut ChaCha8Rng| {
            let mut v: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=30)).collect();
            let z = rng.gen_range(0..n);
            v[z] = 0;
            v
        };
        let pair = ReductionPair::new(draw(&mut rng), draw(&mut rng)).unwrap();
        let d0 = pair.delta();
        let mut cur = pair;
        let mut steps = 0i64;
        while cur.delta() > 0 {
            let next = blowup_step(&cur).unwrap();
            assert!(next.delta() < cur.delta(), "delta must strictly decrease");
            cur = next;
            steps += 1;
            assert!(steps <= d0, "termination within the initial delta");
        }
    }
    println!(
        "PASS: 10^4 fuzzed blowups strictly decrease delta and terminate \
         within delta_0; Euclidean trace lambda=(0,2), mu=(5,0) gives [7,5,3,0]"
    );
}

#[test]
fn a05_component_automorphism_finiteness_equals_positivity() {
    let all = enumerate_components(3);
    for s in 0..=2 {
        assert!(
            all.iter().any(|c| c.special_points == s),
            "every special-point count occurs"
        );
    }
    let five = BigInt::from(5);
    let mut finite_n = 0usize;
    let mut infinite_n = 0usize;
    for c in &all {
        assert!(c.deg_l.abs() <= rint(3) && c.deg_n.abs() <= rint(3));
        assert!(c.deg_l.denom() <= &five && c.deg_n.denom() <= &five);
        let finite = msp_aut_is_finite(c).unwrap();
        if finite {
            finite_n += 1;
        } else {
            infinite_n += 1;
        }
        for a in [rat(1, 4), rat(3, 10), rat(11, 30)] {
            assert_eq!(finite, omega3_positive_at(c, &a), "{c:?} at A = {a}");
        }
    }
    assert!(finite_n > 0 && infinite_n > 0);
    println!(
        "PASS: automorphism finiteness agrees with log-positivity at \
         A = 1/4, 3/10, 11/30 on all {} enumerated component data",
        all.len()
    );
}

/// Random fiber tree over two charge-0 coordinates with a never-contractible
/// genus-1 backbone (component 0), recorded points below the threshold
/// `A = 3/2`, and valid branch orders.
fn random_fiber_tree(rng: &mut ChaCha8Rng) -> FiberTree {
    let n = rng.gen_range(1..=8usize);
    let mut components = Vec::new();
    let mut edges = Vec::new();
    for i in 0..n {
        let genus = if i == 0 {
            1
        } else {
            i64::from(rng.gen_ratio(1, 5))
        };
        let mut plain_orders = BTreeMap::new();
        for s in 0..rng.gen_range(0..=2) {
            plain_orders.insert(
                format!("s{s}"),
                vec![rng.gen_range(0..=1i64), rng.gen_range(0..=1)],
            );
        }
        components.push(FiberComponent {
            id: i as i64,
            genus,
            deg_l: rng.gen_range(0..=3),
            markings: i64::from(i == 0),
            plain_orders,
        });
        if i > 0 {
            let side = |rng: &mut ChaCha8Rng| {
                let mut o = vec![rng.gen_range(0..=2i64), rng.gen_range(0..=2)];
                o[rng.gen_range(0..2usize)] = 0;
                o
            };
            edges.push(FiberEdge {
                ends: (i as i64, rng.gen_range(0..i) as i64),
                orders: (side(rng), side(rng)),
            });
        }
    }
    FiberTree {
        charges: vec![0, 0],
        a: rat(3, 2),
        components,
        edges,
    }
}

#[test]
fn a06_stabilization_confluence_and_persistence() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xf1be5);
    for _ in 0..100 {
        let tree = random_fiber_tree(&mut rng);
        tree.validate().unwrap();
        let (reference, _) = tree.stabilize().unwrap();
        let reference = reference.canonicalize();

        for _ in 0..10 {
            let mut pick_rng = ChaCha8Rng::seed_from_u64(rng.gen());
            let (alt, _) = tree
                .stabilize_with(&mut |cands| *cands.choose(&mut pick_rng).unwrap())
                .unwrap();
            assert_eq!(alt.canonicalize(), reference, "normal form depends on order");
        }

        // The normal form keeps every remaining tail and bridge and passes
        // the recorded-point and positivity clauses of the full checker.
        assert!(reference.omega2_violations().is_empty());
        for c in &reference.components {
            if reference.is_tail(c.id) || reference.is_bridge(c.id) {
                assert_eq!(
                    reference.contraction_decision(c.id).unwrap(),
                    Decision::MustKeep
                );
            }
        }
        let (_, qomega, graph) = reference.to_quasimap().unwrap();
        assert!(graph.check_omega2(&qomega).is_empty());
        assert!(graph.check_omega3(&qomega, Omega3Mode::FiniteA).is_empty());
    }

    // Persistence: a recorded violation on the backbone survives every
    // contraction.
    for _ in 0..100 {
        let mut tree = random_fiber_tree(&mut rng);
        let bad = rng.gen_range(2..=5i64);
        tree.components[0]
            .plain_orders
            .insert("w".into(), vec![bad, bad + rng.gen_range(0..=2)]);
        let has_witness = |violations: &[(i64, String, Rat)]| {
            violations
                .iter()
                .any(|(id, p, v)| *id == 0 && p == "w" && *v == rint(bad))
        };
        assert!(has_witness(&tree.omega2_violations()));
        let (normal, _) = tree.stabilize().unwrap();
        assert!(has_witness(&normal.omega2_violations()));
    }
    println!(
        "PASS: 100 trees x 10 contraction orders reach one normal form \
         passing the recorded-point and positivity clauses; violations \
         persist on 100 perturbed trees"
    );
}

/// Two-component quasimap over the wrapped P^1 package: a backbone of degree
/// 1 with two markings and a tail of degree 2, so the tail positivity reads
/// `2 - A` and the verdict flips exactly at `A = 2`.
fn tail_witness_graph() -> QuasimapGraph {
    let point = |id: &str, kind: PointKind| PointDecl {
        id: id.to_string(),
        kind,
        aut: 1,
    };
    let components = vec![
        ComponentData {
            genus: 0,
            deg_l: rint(1),
            points: vec![
                point("m1", PointKind::Marking),
                point("m2", PointKind::Marking),
                point("n", PointKind::Node),
                point("qa", PointKind::Plain),
                point("qb", PointKind::Plain),
            ],
        },
        ComponentData {
            genus: 0,
            deg_l: rint(2),
            points: vec![
                point("n", PointKind::Node),
                point("ta", PointKind::Plain),
                point("tb", PointKind::Plain),
            ],
        },
    ];
    let edges = vec![((0, "n".to_string()), (1, "n".to_string()))];
    let divisor = |entries: &[(usize, &str, i64)]| DivisorData {
        zero_on: BTreeSet::new(),
        orders: entries
            .iter()
            .map(|&(c, p, o)| ((c, p.to_string()), rint(o)))
            .collect(),
    };
    let mut divisors = BTreeMap::new();
    divisors.insert("x1".to_string(), divisor(&[(0, "qa", 1), (1, "ta", 2)]));
    divisors.insert("x2".to_string(), divisor(&[(0, "qb", 1), (1, "tb", 2)]));
    QuasimapGraph {
        components,
        edges,
        divisors,
    }
}

#[test]
fn a07_wall_enumeration_and_chamber_crossing() {
    let (base, _) = catalog::pn_charges(&[0, 0]).unwrap();
    let (pkg, omega) = catalog::quasimap_wrap(&base).unwrap();
    let report = candidate_walls(&pkg, &omega, 0, 2, &rint(3), &rint(0), &rint(5)).unwrap();
    assert_eq!(report.candidates, (1..=5).map(rint).collect::<Vec<_>>());

    let graph = tail_witness_graph();
    graph.validate(&omega).unwrap();
    let exps: Vec<Vec<i64>> = omega.monomials.iter().map(|m| m.exponents.clone()).collect();
    let verdict_at = |a: Rat| {
        let om = OmegaTriple::new(&pkg, exps.clone(), a).unwrap();
        graph.check_stable(&om).verdict
    };

    // Constant on three samples per chamber of (0, 5].
    for lo in 0..5i64 {
        let samples = [rat(4 * lo + 1, 4), rat(2 * lo + 1, 2), rat(4 * lo + 3, 4)];
        let expected = if rint(lo) < rint(2) {
            Verdict::Stable
        } else {
            Verdict::Unstable
        };
        for a in samples {
            assert_eq!(verdict_at(a.clone()), expected, "A = {a} in chamber ({lo}, {})", lo + 1);
        }
    }
    // The flip happens exactly at the candidate 2.
    assert_eq!(verdict_at(rat(15, 8)), Verdict::Stable);
    assert_eq!(verdict_at(rint(2)), Verdict::Unstable);
    assert_eq!(verdict_at(rat(17, 8)), Verdict::Unstable);
    println!(
        "PASS: charge-0 walls in (0, 5] are {{1..5}}; the degree-2 tail \
         witness flips exactly at A = 2 and is constant on 3 samples per chamber"
    );
}

/// Exact membership of `t` in the cone spanned by `gens` in the plane, by
/// direct search over single generators and independent pairs (conic
/// Caratheodory in dimension 2), using only integer arithmetic.
fn brute_in_cone_2d(gens: &[[i64; 2]], t: [i64; 2]) -> bool {
    if t == [0, 0] {
        return true;
    }
    let (t0, t1) = (i128::from(t[0]), i128::from(t[1]));
    for g in gens {
        let (g0, g1) = (i128::from(g[0]), i128::from(g[1]));
        if t0 * g1 == t1 * g0 && t0 * g0 + t1 * g1 > 0 {
            return true;
        }
    }
    for (i, gi) in gens.iter().enumerate() {
        let (a, c) = (i128::from(gi[0]), i128::from(gi[1]));
        for gj in &gens[i + 1..] {
            let (b, d) = (i128::from(gj[0]), i128::from(gj[1]));
            let det = a * d - c * b;
            if det == 0 {
                continue;
            }
            let xn = t0 * d - t1 * b;
            let yn = a * t1 - c * t0;
            let same_side = |num: i128| num == 0 || (num > 0) == (det > 0);
            if same_side(xn) && same_side(yn) {
                return true;
            }
        }
    }
    false
}

#[test]
fn a08_boundedness_certificate_with_independent_cone_checks() {
    let (pkg, omega) = catalog::msp_quintic();
    let cert = certify_bounded(&pkg, &omega, 1, 0, &rint(1), None).unwrap();
    assert_eq!(cert.rays.rays, vec![vec![1, 1], vec![0, 1]]);

    let mut stable_n = 0usize;
    for info in semistable_supports(&pkg) {
        if info.class != SupportClass::Stable {
            continue;
        }
        stable_n += 1;
        let gens: Vec<[i64; 2]> = (0..pkg.num_coords())
            .filter(|&j| info.support.contains(j))
            .map(|j| {
                let w = pkg.g_weight(j);
                [w[0], w[1]]
            })
            .collect();
        for ray in &cert.rays.rays {
            assert!(
                brute_in_cone_2d(&gens, [ray[0], ray[1]]),
                "ray {ray:?} leaves the cone of {:?}",
                info.support.names(&pkg)
            );
        }
    }
    assert_eq!(stable_n, 158);
    // The polarization sits strictly inside the ray span: (1,2) = (1,1) + (0,1).
    assert_eq!(pkg.theta().to_vec(), vec![1, 2]);

    assert!(cert.polytope.bounded);
    assert!(!cert.polytope.vertices.is_empty());

    // Dropping either ray loses boundedness of the slice.
    let chi = rint(0);
    for keep in 0..2 {
        let sub = RaySystem {
            rays: vec![cert.rays.rays[keep].clone()],
            lifts: vec![cert.rays.lifts[keep].clone()],
        };
        let poly = degree_polytope(&pkg, &sub, &rint(1), &chi, &cert.b).unwrap();
        assert!(!poly.bounded, "single ray {keep} cannot bound the slice");
    }
    println!(
        "PASS: certificate rays (1,1), (0,1) verified in all 158 stable-support \
         cones by exact pair search; slice bounded; dropping a ray unbounds it"
    );
}

fn restricted(pkg: &TorusPackage, coords: &[&str]) -> TorusPackage {
    let ambient = coords
        .iter()
        .map(|c| pkg.coord_index(c).unwrap())
        .collect();
    TorusPackage::new(
        pkg.coord_names().to_vec(),
        pkg.weights().to_vec(),
        pkg.epsilon().clone(),
        pkg.vartheta().clone(),
        Some(ambient),
    )
    .unwrap()
}

#[test]
fn a09_s_independence_of_the_slope_bound_and_min_order() {
    // The global slope bound at enumeration bounds (5, 12) matches s_max(S)
    // on the coordinate models covering the degeneracy locus.
    let (pkg, omega) = catalog::msp_quintic();
    let no_p = restricted(&pkg, &["x1", "x2", "x3", "x4", "x5", "u", "v"]);
    let no_x = restricted(&pkg, &["p", "u", "v"]);
    let best = s_max_global(&no_p, 5, 12)
        .unwrap()
        .max(s_max_global(&no_x, 5, 12).unwrap());
    assert_eq!(best, omega.s_max());
    // On the full space the supremum escapes any bound (the slope-a family),
    // so the restriction to the degeneracy models is essential.
    assert!(s_max_global(&pkg, 5, 12).unwrap() >= rint(1));

    let (ci, ci_omega) = catalog::ci_lg(5, &[2, 3]).unwrap();
    let ci_critical = restricted(&ci, &["p1", "p2"]);
    assert_eq!(s_max_global(&ci_critical, 5, 12).unwrap(), ci_omega.s_max());

    // normalized_min_order is unchanged when S grows by pairwise products.
    let base_exps: Vec<Vec<i64>> = omega.monomials.iter().map(|m| m.exponents.clone()).collect();
    let mut ext_exps = base_exps.clone();
    let mut pairs = Vec::new();
    for i in 0..base_exps.len() {
        for j in i..base_exps.len() {
            ext_exps.push(
                base_exps[i]
                    .iter()
                    .zip(&base_exps[j])
                    .map(|(a, b)| a + b)
                    .collect(),
            );
            pairs.push((i, j));
        }
    }
    let ext = OmegaTriple::new(&pkg, ext_exps, omega.a.clone()).unwrap();
    assert_eq!(ext.s_max(), omega.s_max());
    assert_eq!(ext.monomials.len(), omega.monomials.len() + pairs.len());

    let component = ComponentData {
        genus: 1,
        deg_l: rint(0),
        points: vec![PointDecl {
            id: "q".to_string(),
            kind: PointKind::Plain,
            aut: 1,
        }],
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x0dd5);
    for _ in 0..100 {
        let mut zero = vec![false; base_exps.len()];
        let mut orders = vec![0i64; base_exps.len()];
        for i in 0..base_exps.len() {
            zero[i] = rng.gen_ratio(1, 6);
            orders[i] = rng.gen_range(0..=8);
        }
        zero[rng.gen_range(0..base_exps.len())] = false;

        let divisor = |z: bool, o: i64| DivisorData {
            zero_on: if z { [0].into_iter().collect() } else { BTreeSet::new() },
            orders: if z {
                BTreeMap::new()
            } else {
                [((0, "q".to_string()), rint(o))].into_iter().collect()
            },
        };
        let mut base_div = BTreeMap::new();
        for (i, m) in omega.monomials.iter().enumerate() {
            base_div.insert(m.name.clone(), divisor(zero[i], orders[i]));
        }
        let mut ext_div = BTreeMap::new();
        for (e, m) in ext.monomials.iter().enumerate() {
            let (z, o) = if e < base_exps.len() {
                (zero[e], orders[e])
            } else {
                let (i, j) = pairs[e - base_exps.len()];
                (zero[i] || zero[j], orders[i] + orders[j])
            };
            ext_div.insert(m.name.clone(), divisor(z, o));
        }
        let graph_base = QuasimapGraph {
            components: vec![component.clone()],
            edges: vec![],
            divisors: base_div,
        };
        let graph_ext = QuasimapGraph {
            components: vec![component.clone()],
            edges: vec![],
            divisors: ext_div,
        };
        assert_eq!(
            graph_base.normalized_min_order(&omega, 0, "q").unwrap(),
            graph_ext.normalized_min_order(&ext, 0, "q").unwrap(),
        );
    }
    println!(
        "PASS: the (5, 12) slope bound equals s_max(S) on the degeneracy \
         models of both catalogs; min orders agree between S and S plus \
         pairwise products on 100 fuzzed points"
    );
}

/// Consistent random quasimap over the MSP package: one or two components
/// of genus >= 1, integral degrees, and divisor totals matching the
/// bi-degrees, distributed randomly over two recorded points per component.
fn fuzz_msp_instance(
    omega: &OmegaTriple,
    rng: &mut ChaCha8Rng,
) -> QuasimapGraph {
    let ncomp = rng.gen_range(1..=2usize);
    let mut degrees = Vec::new();
    let mut components = Vec::new();
    for _ in 0..ncomp {
        let mut points = vec![
            PointDecl {
                id: "q0".to_string(),
                kind: PointKind::Plain,
                aut: 1,
            },
            PointDecl {
                id: "q1".to_string(),
                kind: PointKind::Plain,
                aut: 1,
            },
        ];
        for m in 0..rng.gen_range(0..=2) {
            points.push(PointDecl {
                id: format!("m{m}"),
                kind: PointKind::Marking,
                aut: 1,
            });
        }
        if ncomp == 2 {
            points.push(PointDecl {
                id: "n".to_string(),
                kind: PointKind::Node,
                aut: 1,
            });
        }
        let deg = rng.gen_range(0..=2i64);
        degrees.push(deg);
        components.push(ComponentData {
            genus: rng.gen_range(1..=2),
            deg_l: rint(deg),
            points,
        });
    }
    let edges = if ncomp == 2 {
        vec![((0, "n".to_string()), (1, "n".to_string()))]
    } else {
        vec![]
    };

    let mut divisors = BTreeMap::new();
    for f in &omega.monomials {
        let mut data = DivisorData::default();
        for (c, comp) in components.iter().enumerate() {
            let total =
                f.bidegree.theta_weight * degrees[c] + f.bidegree.r_charge * comp.deg_wlog();
            let at_q0 = rng.gen_range(0..=total.max(0));
            for (point, order) in [("q0", at_q0), ("q1", total - at_q0)] {
                if order != 0 {
                    data.orders.insert((c, point.to_string()), rint(order));
                }
            }
        }
        divisors.insert(f.name.clone(), data);
    }
    QuasimapGraph {
        components,
        edges,
        divisors,
    }
}

#[test]
fn a10_normalization_and_projective_push_preserve_verdicts() {
    let (pkg, omega) = catalog::msp_quintic();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5ca1e);
    let mut stable_n = 0usize;
    let mut unstable_n = 0usize;
    for _ in 0..100 {
        let graph = fuzz_msp_instance(&omega, &mut rng);
        graph.validate(&omega).unwrap();
        let original = graph.check_stable(&omega).verdict;
        match original {
            Verdict::Stable => stable_n += 1,
            Verdict::Unstable => unstable_n += 1,
        }

        let (scaled_graph, scaled_omega) = graph.rescale_common_weight(&pkg, &omega).unwrap();
        assert_eq!(scaled_graph.check_stable(&scaled_omega).verdict, original);

        let pushed = push_to_projective(&scaled_omega, &scaled_graph).unwrap();
        assert_eq!(pushed.graph.check_stable(&pushed.omega).verdict, original);
    }
    assert!(stable_n > 0 && unstable_n > 0, "corpus must mix verdicts");
    println!(
        "PASS: common-weight normalization and the projective push preserve \
         the stability verdict on 100 fuzzed instances ({stable_n} stable, \
         {unstable_n} unstable)"
    );
}
