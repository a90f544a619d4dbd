//! Finiteness of automorphisms for irreducible components of quintic MSP
//! fields whose underlying curve already has infinite automorphisms.
//!
//! Such a component is rational with at most two special points.  The data
//! kept here is the pair of bundle degrees `(deg L, deg N)` together with
//! the identically-zero pattern of the field sections
//! `(phi, rho, mu, nu)`, where `phi` is a 5-tuple of sections of `L (x) N`,
//! `rho` a section of `L^(-5) (x) w^log`, `mu` of `L (x) N` and `nu` of `N`.
//! The nonvanishing hypotheses are that `(phi, mu)`, `(mu, nu)` and
//! `(rho, nu)` never vanish simultaneously.

use num::{BigInt, One, Zero};

use crate::error::{Error, Result};
use crate::rat::{rat_to_string, rint, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MspComponent {
    /// Number of special points on the rational component (0, 1 or 2).
    pub special_points: i64,
    pub deg_l: Rat,
    pub deg_n: Rat,
    pub phi_zero: bool,
    pub rho_zero: bool,
    pub mu_zero: bool,
    pub nu_zero: bool,
}

impl MspComponent {
    /// `deg w^log = s - 2` on a rational component with `s` special points.
    pub fn deg_wlog(&self) -> i64 {
        self.special_points - 2
    }

    fn flag_err(&self, msg: impl Into<String>) -> Error {
        Error::InconsistentFlags(msg.into())
    }

    /// Checks the degree and vanishing constraints a geometric component
    /// must satisfy.
    ///
    /// Degrees lie in `(1/5)Z`, integral when there are no special points,
    /// and `deg L + deg N` is integral (the section `mu` has untwisted
    /// monodromy at both orbifold points or none).  A section of negative
    /// degree vanishes identically; a nonvanishing section has degree 0,
    /// except for the 5-tuple `phi`, which is base-point free whenever `mu`
    /// vanishes and then only forces `deg L` to be a nonnegative integer.
    pub fn validate(&self) -> Result<()> {
        if !(0..=2).contains(&self.special_points) {
            return Err(Error::invalid(format!(
                "a rational component carries 0, 1 or 2 special points, got {}",
                self.special_points
            )));
        }
        let five = BigInt::from(5);
        let fifth_lattice = |x: &Rat| crate::rat::has_denominator_dividing(x, &five);
        if !fifth_lattice(&self.deg_l) || !fifth_lattice(&self.deg_n) {
            return Err(Error::invalid("degrees must lie in (1/5)Z"));
        }
        let is_int = |x: &Rat| x.denom() == &BigInt::one();
        if self.special_points == 0 && (!is_int(&self.deg_l) || !is_int(&self.deg_n)) {
            return Err(Error::invalid(
                "an untwisted component has integral degrees",
            ));
        }
        let l_plus_n = &self.deg_l + &self.deg_n;
        if !is_int(&l_plus_n) {
            return Err(self.flag_err(format!(
                "deg L + deg N = {} must be integral",
                rat_to_string(&l_plus_n)
            )));
        }

        let zero = Rat::zero();
        let rho_deg = rint(-5) * &self.deg_l + rint(self.deg_wlog());
        // Negative degree forces the section to vanish.
        if self.deg_l < zero && !self.phi_zero {
            return Err(self.flag_err("deg L < 0 but phi is not flagged zero"));
        }
        if l_plus_n < zero && !self.mu_zero {
            return Err(self.flag_err("deg(L (x) N) < 0 but mu is not flagged zero"));
        }
        if self.deg_n < zero && !self.nu_zero {
            return Err(self.flag_err("deg N < 0 but nu is not flagged zero"));
        }
        if rho_deg < zero && !self.rho_zero {
            return Err(self.flag_err("deg(L^(-5) (x) w^log) < 0 but rho is not flagged zero"));
        }
        // The nonvanishing hypotheses.
        if self.phi_zero && self.mu_zero {
            return Err(self.flag_err("phi and mu vanish simultaneously"));
        }
        if self.mu_zero && self.nu_zero {
            return Err(self.flag_err("mu and nu vanish simultaneously"));
        }
        if self.rho_zero && self.nu_zero {
            return Err(self.flag_err("rho and nu vanish simultaneously"));
        }
        // One member of a pair vanishing makes the other nonvanishing, which
        // pins its degree (a single nonvanishing section trivializes its
        // bundle; the 5-tuple phi only becomes base-point free).
        if self.phi_zero && l_plus_n != zero {
            return Err(self.flag_err("phi = 0 makes mu nonvanishing, so deg(L (x) N) = 0"));
        }
        if self.mu_zero {
            if self.deg_l < zero || !is_int(&self.deg_l) {
                return Err(self.flag_err(
                    "mu = 0 makes phi base-point free, so deg L is a nonnegative integer",
                ));
            }
            if self.deg_n != zero {
                return Err(self.flag_err("mu = 0 makes nu nonvanishing, so deg N = 0"));
            }
        }
        if self.nu_zero {
            if l_plus_n != zero {
                return Err(self.flag_err("nu = 0 makes mu nonvanishing, so deg(L (x) N) = 0"));
            }
            if rho_deg != zero {
                return Err(
                    self.flag_err("nu = 0 makes rho nonvanishing, so deg(L^(-5) (x) w^log) = 0")
                );
            }
        }
        if self.rho_zero && self.deg_n != zero {
            return Err(self.flag_err("rho = 0 makes nu nonvanishing, so deg N = 0"));
        }
        Ok(())
    }
}

/// Case analysis for automorphism finiteness of an MSP field restricted to
/// one rational component.
///
/// Infinite exactly when: two special points with both degrees zero (the
/// field is constant along the component); one special point with
/// `deg L = -1/5` (the twisted tail fixed by the torus); or `rho = 0` with
/// `deg L <= 0` on a component with at most one special point (the map has
/// degree zero).  Equivalent to failure of
/// `deg L + 2 deg N + A * deg w^log > 0` for any `A` strictly between 1/5
/// and 2/5.
pub fn msp_aut_is_finite(c: &MspComponent) -> Result<bool> {
    c.validate()?;
    let zero = Rat::zero();
    let case1 = c.special_points == 2 && c.deg_l == zero && c.deg_n == zero;
    let case2 = c.special_points == 1 && c.deg_l == -crate::rat::rat(1, 5);
    let case3 = c.special_points <= 1 && c.rho_zero && c.deg_l <= zero;
    Ok(!(case1 || case2 || case3))
}

/// The positivity predicate `deg L + 2 deg N + A * deg w^log > 0`.
pub fn omega3_positive_at(c: &MspComponent, a: &Rat) -> bool {
    &c.deg_l + rint(2) * &c.deg_n + a * rint(c.deg_wlog()) > Rat::zero()
}

/// Enumerates every valid component datum with degrees in
/// `(1/5)Z` intersected with `[-bound, bound]`.
pub fn enumerate_components(bound: i64) -> Vec<MspComponent> {
    let mut out = Vec::new();
    let steps = 5 * bound;
    for s in 0..=2 {
        for ln in -steps..=steps {
            for nn in -steps..=steps {
                for flags in 0..16u32 {
                    let c = MspComponent {
                        special_points: s,
                        deg_l: crate::rat::rat(ln, 5),
                        deg_n: crate::rat::rat(nn, 5),
                        phi_zero: flags & 1 != 0,
                        rho_zero: flags & 2 != 0,
                        mu_zero: flags & 4 != 0,
                        nu_zero: flags & 8 != 0,
                    };
                    if c.validate().is_ok() {
                        out.push(c);
                    }
                }
            }
        }
    }
    out
}
