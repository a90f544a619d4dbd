//! Candidate walls of the stability parameter.
//!
//! Stability of a fixed quasimap can only change where either the second
//! clause, `min_f (ord/k_f + slope f) <= A`, or the third,
//! `deg_L + A*deg_wlog > 0`, changes truth value.  Vanishing orders lie in
//! `(1/D)Z` and degrees of the polarization in `(1/D)Z` too, so the
//! thresholds form a discrete grid; this module enumerates the grid points
//! falling in a requested window.  Candidates are a superset of the walls
//! actually realized by quasimaps.

use num::{BigInt, One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::lcm_i64;
use crate::package::{isotropy_bounds, OmegaTriple, TorusPackage};
use crate::rat::{floor_big, rat_to_string, rint, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallReport {
    /// Stability is constant on each `[i/M, (i+1)/M)` beyond `s_max`.
    pub modulus: i64,
    /// Sorted, deduplicated candidate walls inside `(a0, a1]`.
    pub candidates: Vec<Rat>,
}

/// Enumerates candidate walls in the half-open window `(a0, a1]` for curves
/// of genus `g` with `k` markings and total degree `d`.
///
/// Three families contribute: thresholds `(m + c_f)/k_f` with `m >= 0`
/// where the normalized order at a base point crosses `A`; tail thresholds
/// `p/D` with `p >= 1` where a rational tail's positivity degenerates; and,
/// only for unmarked genus-0 targets, the single value `d/2` where the
/// irreducible total curve itself (the only shape with `deg_wlog = -2`)
/// loses positivity.
pub fn candidate_walls(
    pkg: &TorusPackage,
    omega: &OmegaTriple,
    genus: i64,
    markings: i64,
    degree: &Rat,
    a0: &Rat,
    a1: &Rat,
) -> Result<WallReport> {
    if a1 <= a0 {
        return Err(Error::EmptyInterval);
    }
    let s_max = omega.s_max();
    if a0 < &s_max {
        return Err(Error::invalid(format!(
            "window must start at or after s_max = {}",
            rat_to_string(&s_max)
        )));
    }
    let bounds = isotropy_bounds(pkg)?;
    let d_lcm = bounds.d_lcm.to_i64().ok_or_else(|| {
        Error::invalid("stabilizer order lcm exceeds i64 range")
    })?;
    if !crate::rat::has_denominator_dividing(degree, &bounds.d_lcm) {
        return Err(Error::invalid(format!(
            "degree {} is not a multiple of 1/{d_lcm}",
            rat_to_string(degree)
        )));
    }

    let mut modulus = 2 * d_lcm;
    for f in &omega.monomials {
        modulus = lcm_i64(modulus, f.bidegree.theta_weight);
    }

    let mut candidates: Vec<Rat> = Vec::new();
    let mut push = |w: Rat| {
        if &w > a0 && &w <= a1 {
            candidates.push(w);
        }
    };

    for f in &omega.monomials {
        let k = rint(f.bidegree.theta_weight);
        let c = rint(f.bidegree.r_charge);
        // (m + c)/k in (a0, a1] means m in (a0*k - c, a1*k - c].
        let hi = floor_big(&(a1 * &k - &c));
        let mut m = BigInt::zero();
        loop {
            if m > hi {
                break;
            }
            push((Rat::from(m.clone()) + &c) / &k);
            m += BigInt::one();
        }
    }

    let tail_hi = floor_big(&(a1 * rint(d_lcm)));
    let mut p = BigInt::one();
    while p <= tail_hi {
        push(Rat::from(p.clone()) / rint(d_lcm));
        p += BigInt::one();
    }

    if genus == 0 && markings == 0 {
        push(degree / rint(2));
    }

    candidates.sort();
    candidates.dedup();
    Ok(WallReport {
        modulus,
        candidates,
    })
}
