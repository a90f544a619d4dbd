//! Integer lattice utilities: extended gcd, unimodular reduction of a
//! primitive vector, Smith-style normal form for sublattice indices.

use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};

use crate::error::{Error, Result};

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm_i64(a: i64, b: i64) -> i64 {
    if a == 0 && b == 0 {
        return 0;
    }
    (a / gcd_i64(a, b) * b).abs()
}

/// Extended gcd: returns `(g, x, y)` with `a*x + b*y = g` and `g >= 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        if a >= 0 {
            (a, 1, 0)
        } else {
            (-a, -1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// A splitting of the character lattice along a primitive `epsilon`.
///
/// `u` is unimodular with `u * epsilon = e_1`, and `v = u^{-1}`.  The class
/// of a character in the quotient by `Z*epsilon` is the tail of `u * chi`;
/// the head coordinate is the coefficient of `epsilon` in the adapted basis.
#[derive(Debug, Clone)]
pub struct Splitting {
    pub rank: usize,
    u: Vec<Vec<i64>>,
    v: Vec<Vec<i64>>,
}

fn identity(r: usize) -> Vec<Vec<i64>> {
    (0..r)
        .map(|i| (0..r).map(|j| i64::from(i == j)).collect())
        .collect()
}

impl Splitting {
    /// Builds the splitting.  Fails unless `epsilon` is primitive
    /// (gcd of entries 1).
    pub fn for_primitive(epsilon: &[i64]) -> Result<Self> {
        let r = epsilon.len();
        if r == 0 {
            return Err(Error::invalid("epsilon must have positive length"));
        }
        let mut u = identity(r);
        let mut v = identity(r);
        let mut w = epsilon.to_vec();
        for i in 1..r {
            if w[i] == 0 {
                continue;
            }
            let (g, x, y) = ext_gcd(w[0], w[i]);
            let (p, q) = (w[0] / g, w[i] / g);
            // Row op on u: (r0, ri) <- (x r0 + y ri, -q r0 + p ri); det 1.
            for col in 0..r {
                let (a, b) = (u[0][col], u[i][col]);
                u[0][col] = x * a + y * b;
                u[i][col] = -q * a + p * b;
            }
            // Column op on v with the inverse transform, keeping v = u^{-1}.
            for row in 0..r {
                let (a, b) = (v[row][0], v[row][i]);
                v[row][0] = p * a + q * b;
                v[row][i] = -y * a + x * b;
            }
            w[0] = g;
            w[i] = 0;
        }
        if w[0] == -1 {
            for col in 0..r {
                u[0][col] = -u[0][col];
            }
            for row in 0..r {
                v[row][0] = -v[row][0];
            }
            w[0] = 1;
        }
        if w[0] != 1 {
            return Err(Error::invalid(format!(
                "epsilon is not primitive (content {})",
                w[0]
            )));
        }
        Self::normalize_quotient_basis(&mut u, &mut v);
        Ok(Splitting { rank: r, u, v })
    }

    /// Brings rows `1..r` of `u` to row Hermite form by unimodular row
    /// operations, mirroring each as the inverse column operation on
    /// `v = u^{-1}`.  This pins down the quotient basis canonically; in
    /// particular a unit-vector epsilon yields the drop-that-coordinate
    /// projection with positive signs.
    fn normalize_quotient_basis(u: &mut [Vec<i64>], v: &mut [Vec<i64>]) {
        let r = u.len();
        let negate = |u: &mut [Vec<i64>], v: &mut [Vec<i64>], i: usize| {
            for x in &mut u[i] {
                *x = -*x;
            }
            for row in v.iter_mut() {
                row[i] = -row[i];
            }
        };
        // row_i -= q * row_t on u; col_t += q * col_i on v.
        let add = |u: &mut [Vec<i64>], v: &mut [Vec<i64>], i: usize, t: usize, q: i64| {
            for col in 0..u[0].len() {
                u[i][col] -= q * u[t][col];
            }
            for row in v.iter_mut() {
                row[t] += q * row[i];
            }
        };
        let swap = |u: &mut [Vec<i64>], v: &mut [Vec<i64>], i: usize, t: usize| {
            u.swap(i, t);
            for row in v.iter_mut() {
                row.swap(i, t);
            }
        };
        let mut t = 1;
        for j in 0..u[0].len() {
            if t >= r {
                break;
            }
            loop {
                let pivot = (t..r)
                    .filter(|&i| u[i][j] != 0)
                    .min_by_key(|&i| u[i][j].abs());
                let Some(pi) = pivot else { break };
                if pi != t {
                    swap(u, v, pi, t);
                }
                let mut dirty = false;
                for i in t + 1..r {
                    if u[i][j] != 0 {
                        let q = u[i][j].div_euclid(u[t][j]);
                        add(u, v, i, t, q);
                        dirty |= u[i][j] != 0;
                    }
                }
                if !dirty {
                    break;
                }
            }
            if u[t][j] == 0 {
                continue;
            }
            if u[t][j] < 0 {
                negate(u, v, t);
            }
            for i in 1..t {
                let q = u[i][j].div_euclid(u[t][j]);
                if q != 0 {
                    add(u, v, i, t, q);
                }
            }
            t += 1;
        }
    }

    fn apply_u(&self, chi: &[i64]) -> Vec<i64> {
        self.u
            .iter()
            .map(|row| row.iter().zip(chi).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Coefficient of `epsilon` when `chi` is written in the adapted basis.
    pub fn epsilon_coefficient(&self, chi: &[i64]) -> i64 {
        self.apply_u(chi)[0]
    }

    /// Image of `chi` in the quotient lattice (length `rank - 1`).
    pub fn project(&self, chi: &[i64]) -> Vec<i64> {
        self.apply_u(chi)[1..].to_vec()
    }

    /// The unique lift of a quotient class with epsilon-coefficient zero.
    pub fn lift(&self, class: &[i64]) -> Vec<i64> {
        debug_assert_eq!(class.len() + 1, self.rank);
        (0..self.rank)
            .map(|row| {
                class
                    .iter()
                    .enumerate()
                    .map(|(j, c)| self.v[row][j + 1] * c)
                    .sum()
            })
            .collect()
    }
}

/// Diagonal of a Smith-style reduction of the integer matrix `rows`
/// (generators of a sublattice, one per row).  Entries are nonnegative;
/// their count equals `min(m, n)` and the number of nonzero entries is the
/// rank.
pub fn snf_diagonal(rows: &[Vec<i64>]) -> Vec<BigInt> {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut diag = Vec::new();
    let mut top = 0usize;
    let mut left = 0usize;
    while top < m && left < n {
        // Find a pivot.
        let mut pivot = None;
        'scan: for i in top..m {
            for j in left..n {
                if !a[i][j].is_zero() {
                    pivot = Some((i, j));
                    break 'scan;
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(top, pi);
        for row in a.iter_mut() {
            row.swap(left, pj);
        }
        // Clear the pivot row and column with Euclidean steps.
        loop {
            let mut dirty = false;
            for i in top + 1..m {
                if a[i][left].is_zero() {
                    continue;
                }
                let q = a[i][left].div_floor(&a[top][left]);
                for j in left..n {
                    let t = &a[top][j] * &q;
                    a[i][j] -= t;
                }
                if !a[i][left].is_zero() {
                    a.swap(top, i);
                    dirty = true;
                }
            }
            for j in left + 1..n {
                if a[top][j].is_zero() {
                    continue;
                }
                let q = a[top][j].div_floor(&a[top][left]);
                for i in top..m {
                    let t = &a[i][left] * &q;
                    a[i][j] -= t;
                }
                if !a[top][j].is_zero() {
                    for row in a.iter_mut().take(m).skip(top) {
                        row.swap(left, j);
                    }
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }
        diag.push(a[top][left].abs());
        top += 1;
        left += 1;
    }
    while diag.len() < m.min(n) {
        diag.push(BigInt::zero());
    }
    diag
}

/// Index of the sublattice of `Z^n` generated by `rows`, or `None` when the
/// quotient is infinite (the rows fail to span over Q).
pub fn lattice_index(rows: &[Vec<i64>], n: usize) -> Option<BigInt> {
    if n == 0 {
        return Some(BigInt::one());
    }
    let diag = snf_diagonal(rows);
    let nz: Vec<&BigInt> = diag.iter().filter(|d| !d.is_zero()).collect();
    if nz.len() < n {
        return None;
    }
    Some(nz.into_iter().product())
}

/// Rank over Q of the integer matrix `rows`.
pub fn int_rank(rows: &[Vec<i64>]) -> usize {
    snf_diagonal(rows).iter().filter(|d| !d.is_zero()).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ext_gcd_identity() {
        for a in -12..=12 {
            for b in -12..=12 {
                let (g, x, y) = ext_gcd(a, b);
                assert_eq!(a * x + b * y, g);
                assert_eq!(g, gcd_i64(a, b));
            }
        }
    }

    #[test]
    fn splitting_maps_epsilon_to_e1() {
        for eps in [
            vec![0, 0, 1],
            vec![1, 0, 0],
            vec![2, 3],
            vec![-3, 5, 7],
            vec![1],
        ] {
            let s = Splitting::for_primitive(&eps).unwrap();
            assert_eq!(s.epsilon_coefficient(&eps), 1);
            assert!(s.project(&eps).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn splitting_rejects_imprimitive() {
        assert!(Splitting::for_primitive(&[2, 4]).is_err());
        assert!(Splitting::for_primitive(&[0, 0]).is_err());
    }

    #[test]
    fn lift_is_right_inverse_of_project() {
        for eps in [vec![0, 0, 1], vec![1, 0, 0], vec![-3, 5, 7]] {
            let s = Splitting::for_primitive(&eps).unwrap();
            for class in [vec![1, 2], vec![-4, 7], vec![0, 0]] {
                let lifted = s.lift(&class);
                assert_eq!(s.project(&lifted), class);
                assert_eq!(s.epsilon_coefficient(&lifted), 0);
            }
        }
        for eps in [vec![2, 3], vec![5, -7]] {
            let s = Splitting::for_primitive(&eps).unwrap();
            for class in [vec![1], vec![-6], vec![0]] {
                let lifted = s.lift(&class);
                assert_eq!(s.project(&lifted), class);
                assert_eq!(s.epsilon_coefficient(&lifted), 0);
            }
        }
    }

    #[test]
    fn unit_epsilon_projects_by_dropping_the_coordinate() {
        let s = Splitting::for_primitive(&[0, 0, 1]).unwrap();
        assert_eq!(s.project(&[4, -7, 9]), vec![4, -7]);
        assert_eq!(s.epsilon_coefficient(&[4, -7, 9]), 9);
        let s = Splitting::for_primitive(&[0, 1]).unwrap();
        assert_eq!(s.project(&[3, 5]), vec![3]);
        let s = Splitting::for_primitive(&[1, 0]).unwrap();
        assert_eq!(s.project(&[3, 5]), vec![5]);
    }

    #[test]
    fn lattice_index_matches_determinant() {
        // (-5,0),(1,1): |det| = 5.
        assert_eq!(
            lattice_index(&[vec![-5, 0], vec![1, 1]], 2),
            Some(BigInt::from(5))
        );
        assert_eq!(
            lattice_index(&[vec![1, 0], vec![0, 1], vec![1, 1]], 2),
            Some(BigInt::one())
        );
        assert_eq!(lattice_index(&[vec![1, 1]], 2), None);
        assert_eq!(lattice_index(&[vec![2]], 1), Some(BigInt::from(2)));
    }

    #[test]
    fn rank_counts_independent_rows() {
        assert_eq!(int_rank(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(int_rank(&[vec![1, 0], vec![0, 3]]), 2);
        assert_eq!(int_rank(&[vec![0, 0]]), 0);
    }
}
