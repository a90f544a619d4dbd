//! Built-in example packages: the quintic master-space datum, projective
//! space with arbitrary R-charges, the LG phase of a complete intersection,
//! and the trivial-R-charge wrapper recovering plain quasimap theory.

use crate::error::{Error, Result};
use crate::package::{enumerate_invariant_monomials, Character, OmegaTriple, TorusPackage};
use crate::rat::{rat, rint, Rat};

/// Quintic master-space package: coordinates `x1..x5, p, u, v` acted on by
/// a rank-3 torus, with the standard section set and `A = 3/10`, the middle
/// of the classical window.
pub fn msp_quintic() -> (TorusPackage, OmegaTriple) {
    let names = ["x1", "x2", "x3", "x4", "x5", "p", "u", "v"]
        .map(str::to_string)
        .to_vec();
    let weights = vec![
        vec![1, 1, 1, 1, 1, -5, 1, 0],
        vec![0, 0, 0, 0, 0, 0, 1, 1],
        vec![0, 0, 0, 0, 0, 1, 0, 0],
    ];
    let pkg = TorusPackage::new(
        names,
        weights,
        Character(vec![0, 0, 1]),
        Character(vec![1, 2, 0]),
        None,
    )
    .expect("well-formed catalog data");
    let mut sections: Vec<Vec<i64>> = Vec::new();
    for i in 0..5 {
        // x_i * v^2
        let mut e = vec![0i64; 8];
        e[i] = 1;
        e[7] = 2;
        sections.push(e);
    }
    let mut uv = vec![0i64; 8];
    uv[6] = 1;
    uv[7] = 1;
    sections.push(uv);
    let mut pu10 = vec![0i64; 8];
    pu10[5] = 1;
    pu10[6] = 10;
    sections.push(pu10);
    let omega =
        OmegaTriple::new(&pkg, sections, rat(3, 10)).expect("well-formed catalog data");
    (pkg, omega)
}

/// The classical parameter window of the quintic master-space datum:
/// `(s_max, first candidate wall) = (1/5, 2/5)`.
pub fn msp_classical_window() -> (Rat, Rat) {
    (rat(1, 5), rat(2, 5))
}

fn coord_names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// Projective space `P^(N-1)` where coordinate `i` carries R-charge
/// `charges[i]`; `S` is the coordinate set, so `s_max = max(charges)`.
/// `A` defaults to just above the window minimum.
pub fn pn_charges(charges: &[i64]) -> Result<(TorusPackage, OmegaTriple)> {
    let max_c = *charges
        .iter()
        .max()
        .ok_or_else(|| Error::invalid("need at least one coordinate"))?;
    pn_charges_with(charges, rint(max_c + 1))
}

/// `pn_charges` with an explicit stability parameter.
pub fn pn_charges_with(charges: &[i64], a: Rat) -> Result<(TorusPackage, OmegaTriple)> {
    let n = charges.len();
    if n == 0 {
        return Err(Error::invalid("need at least one coordinate"));
    }
    let pkg = TorusPackage::new(
        coord_names("x", n),
        vec![vec![1; n], charges.to_vec()],
        Character(vec![0, 1]),
        Character(vec![1, 0]),
        None,
    )?;
    let sections = (0..n)
        .map(|i| {
            let mut e = vec![0i64; n];
            e[i] = 1;
            e
        })
        .collect();
    let omega = OmegaTriple::new(&pkg, sections, a)?;
    Ok((pkg, omega))
}

/// LG phase of a complete intersection of degrees `ell` in `P^(n-1)`:
/// coordinates `x1..xn` of weight (1, 0) and `p1..ps` of weight
/// `(-ell_j, 1)`, polarized by the inverse of the gauge character.  `S` is
/// the p-coordinate set, so each `p_j` has bi-degree `(ell_j, 1)` and
/// `s_max = 1/min(ell)`.
pub fn ci_lg(n: usize, ell: &[i64]) -> Result<(TorusPackage, OmegaTriple)> {
    if n == 0 || ell.is_empty() {
        return Err(Error::invalid(
            "need at least one x coordinate and one hypersurface degree",
        ));
    }
    if ell.iter().any(|&l| l < 1) {
        return Err(Error::invalid("hypersurface degrees must be positive"));
    }
    let s = ell.len();
    let mut names = coord_names("x", n);
    names.extend(coord_names("p", s));
    let mut gauge_row = vec![1i64; n];
    gauge_row.extend(ell.iter().map(|&l| -l));
    let mut r_row = vec![0i64; n];
    r_row.extend(std::iter::repeat(1).take(s));
    let pkg = TorusPackage::new(
        names,
        vec![gauge_row, r_row],
        Character(vec![0, 1]),
        Character(vec![-1, 0]),
        None,
    )?;
    let sections = (0..s)
        .map(|j| {
            let mut e = vec![0i64; n + s];
            e[n + j] = 1;
            e
        })
        .collect();
    let ell_min = *ell.iter().min().expect("nonempty");
    let a = rat(1, ell_min) + rint(1);
    let omega = OmegaTriple::new(&pkg, sections, a)?;
    Ok((pkg, omega))
}

/// Wraps the gauge-group data of a package with a trivial R-charge factor,
/// recovering plain quasimap stability: the new torus is `G x C^*` acting
/// through `G`, every invariant has slope 0, and `S` is the lowest-weight
/// slice of a bounded enumeration.
pub fn quasimap_wrap(pkg: &TorusPackage) -> Result<(TorusPackage, OmegaTriple)> {
    let n = pkg.num_coords();
    let g_rank = pkg.g_rank();
    let mut weights: Vec<Vec<i64>> = (0..g_rank)
        .map(|i| (0..n).map(|j| pkg.g_weight(j)[i]).collect())
        .collect();
    weights.push(vec![0; n]);
    let mut epsilon = vec![0i64; g_rank + 1];
    epsilon[g_rank] = 1;
    let mut vartheta = pkg.theta().to_vec();
    vartheta.push(0);
    let wrapped = TorusPackage::new(
        pkg.coord_names().to_vec(),
        weights,
        Character(epsilon),
        Character(vartheta),
        Some(pkg.ambient().clone()),
    )?;
    let enumerated = enumerate_invariant_monomials(&wrapped, 3, n as i64 + 2);
    let k_min = enumerated
        .iter()
        .map(|m| m.bidegree.theta_weight)
        .min()
        .ok_or(Error::EmptyEnumeration)?;
    let sections = enumerated
        .into_iter()
        .filter(|m| m.bidegree.theta_weight == k_min)
        .map(|m| m.exponents)
        .collect();
    let omega = OmegaTriple::new(&wrapped, sections, rint(1))?;
    Ok((wrapped, omega))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::package::{isotropy_bounds, is_full};
    use num::BigInt;

    #[test]
    fn msp_window_sits_between_smax_and_first_wall() {
        let (_, omega) = msp_quintic();
        let (lo, hi) = msp_classical_window();
        assert_eq!(omega.s_max(), lo);
        assert!(lo < omega.a && omega.a < hi);
    }

    #[test]
    fn pn_defaults_clear_the_window() {
        let (_, omega) = pn_charges(&[0, 0, 0]).unwrap();
        assert_eq!(omega.s_max(), rint(0));
        assert_eq!(omega.a, rint(1));
        let (_, omega) = pn_charges(&[2, -1, 0]).unwrap();
        assert_eq!(omega.s_max(), rint(2));
        assert!(omega.a > omega.s_max());
        assert!(pn_charges(&[]).is_err());
        // Explicit A at or below the window minimum is rejected.
        assert!(pn_charges_with(&[0, 1], rint(1)).is_err());
    }

    #[test]
    fn ci_lg_slopes_and_isotropy() {
        let (pkg, omega) = ci_lg(5, &[2, 3]).unwrap();
        assert_eq!(omega.s_max(), rat(1, 2));
        let bidegrees: Vec<(i64, i64)> = omega
            .monomials
            .iter()
            .map(|m| (m.bidegree.theta_weight, m.bidegree.r_charge))
            .collect();
        assert_eq!(bidegrees, vec![(2, 1), (3, 1)]);
        let bounds = isotropy_bounds(&pkg).unwrap();
        assert_eq!(bounds.n0, BigInt::from(3));
        assert_eq!(bounds.d_lcm, BigInt::from(6));
        let fullness = is_full(&pkg, &omega.monomials);
        assert!(fullness.full, "witness {:?}", fullness.witness);
        assert!(ci_lg(5, &[0]).is_err());
        assert!(ci_lg(0, &[2]).is_err());
    }

    #[test]
    fn wrapped_package_recovers_charge_zero_theory() {
        let (pn, _) = pn_charges(&[0, 0]).unwrap();
        let (wrapped, omega) = quasimap_wrap(&pn).unwrap();
        assert_eq!(wrapped.weights(), pn.weights());
        assert_eq!(wrapped.epsilon(), pn.epsilon());
        assert_eq!(wrapped.vartheta(), pn.vartheta());
        let names: Vec<&str> = omega.monomials.iter().map(|m| m.name.as_str()).collect();
        assert_eq!(names, vec!["x1", "x2"]);
        assert_eq!(omega.s_max(), rint(0));
    }
}
