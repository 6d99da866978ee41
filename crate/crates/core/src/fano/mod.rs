//! Non-injective elementary star configurations as linear subspaces.
//!
//! The star `(e_1, U)` fails to be injective exactly when the column space
//! of `U` lies in the hypersurface `{e_{m-1} = 0}`. This module enumerates
//! the isolated such subspaces coming from perfect matchings of the
//! branches, the lines on the Cayley cubic (`m = 4`), and polynomial systems
//! describing the subspaces in an affine Grassmannian chart.

mod chart;

pub use chart::{chart_equations, chart_point_to_matrix, solve_chart_newton, ChartSystem, SolutionCluster};

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyring::{elementary_symmetric, Coeff, Matrix, Polynomial, Rational, Scalar, Tag};
use crate::starcore::BranchMatrix;

/// Largest branch count accepted by [`perfect_matchings`].
pub const MAX_MATCHING_M: usize = 16;

/// Perfect matching of `{1..m}`; pairs are 1-based with `a < b`, ordered by
/// their smaller element.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Matching {
    pairs: Vec<(usize, usize)>,
}

impl Matching {
    pub fn new(mut pairs: Vec<(usize, usize)>) -> Result<Self> {
        for p in &mut pairs {
            if p.0 > p.1 {
                *p = (p.1, p.0);
            }
        }
        pairs.sort();
        let m = 2 * pairs.len();
        let mut seen = vec![false; m + 1];
        for &(a, b) in &pairs {
            for x in [a, b] {
                if x == 0 || x > m || seen[x] {
                    return Err(Error::domain(format!("pairs do not partition 1..{m}")));
                }
                seen[x] = true;
            }
        }
        Ok(Matching { pairs })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn m(&self) -> usize {
        2 * self.pairs.len()
    }
}

impl std::fmt::Display for Matching {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (a, b) in &self.pairs {
            write!(f, "({a},{b})")?;
        }
        Ok(())
    }
}

/// `(m-1)!!`.
pub fn double_factorial_odd(m: usize) -> usize {
    (1..m).step_by(2).product()
}

/// All perfect matchings of `{1..m}`, pairing the smallest unmatched
/// element first and trying partners in increasing order.
pub fn perfect_matchings(m: usize) -> Result<Vec<Matching>> {
    if m < 2 || m % 2 == 1 {
        return Err(Error::domain(format!("perfect matchings need an even m >= 2, got {m}")));
    }
    if m > MAX_MATCHING_M {
        return Err(Error::capacity(format!(
            "matching enumeration is limited to m <= {MAX_MATCHING_M}, got {m}"
        )));
    }
    fn rec(free: &mut Vec<usize>, current: &mut Vec<(usize, usize)>, out: &mut Vec<Matching>) {
        if free.is_empty() {
            out.push(Matching { pairs: current.clone() });
            return;
        }
        let a = free.remove(0);
        for k in 0..free.len() {
            let b = free.remove(k);
            current.push((a, b));
            rec(free, current, out);
            current.pop();
            free.insert(k, b);
        }
        free.insert(0, a);
    }
    let mut out = Vec::with_capacity(double_factorial_odd(m));
    rec(&mut (1..=m).collect(), &mut Vec::new(), &mut out);
    Ok(out)
}

/// Row `a` is `e_t` and row `b` is `-e_t` for the `t`-th pair `(a, b)`.
pub fn matching_to_branch_matrix(mt: &Matching) -> BranchMatrix<Rational> {
    let n = mt.pairs.len();
    let mut u = Matrix::zeros(2 * n, n);
    for (t, &(a, b)) in mt.pairs.iter().enumerate() {
        u.set(a - 1, t, Rational::from_i64(1));
        u.set(b - 1, t, Rational::from_i64(-1));
    }
    BranchMatrix::new(u).expect("matching rows are nonzero")
}

/// Whether the column space of `U` lies in `{p = 0}`, i.e. `p(U xi) = 0`.
/// `U` may have zero rows.
///
/// Float input is first rescaled so every column has max-abs entry 1,
/// which leaves the column space unchanged; coefficients are then compared
/// against `EPS_POLY` times the expansion of `|p|` at `|U|`, floored at 1.
pub fn subspace_in_hypersurface<C: Coeff>(u: &Matrix<C>, p: &Polynomial<C>) -> Result<bool> {
    if C::TAG == Tag::Exact {
        return Ok(p.substitute_linear_forms(u)?.is_zero());
    }
    let mut v = u.clone();
    for j in 0..u.cols() {
        let top = (0..u.rows()).fold(0.0f64, |acc, i| acc.max(u.get(i, j).to_f64().abs()));
        if top > 0.0 {
            let k = C::from_scalar(&Scalar::Float(1.0 / top))?;
            for i in 0..u.rows() {
                v.set(i, j, v.get(i, j).clone() * k.clone());
            }
        }
    }
    let s = p.substitute_linear_forms(&v)?;
    let scale = p
        .abs_coeffs()
        .substitute_linear_forms(&v.map(|c| c.abs()))?
        .max_abs_coeff();
    Ok(s.is_negligible(scale.max(1.0)))
}

/// Reduced column-echelon form of a full-column-rank `m x n` matrix: the
/// unique representative of `{U g : g in GL_n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceCanon<C>(Matrix<C>);

impl<C: Coeff> SubspaceCanon<C> {
    pub fn matrix(&self) -> &Matrix<C> {
        &self.0
    }

    /// Entry-wise comparison (exact, or within `1e-9` of the larger entry
    /// scale for floats).
    pub fn same_as(&self, other: &Self) -> bool {
        if self.0.rows() != other.0.rows() || self.0.cols() != other.0.cols() {
            return false;
        }
        let scale = self.0.max_abs().max(other.0.max_abs()).max(1.0);
        self.0
            .entries()
            .iter()
            .zip(other.0.entries())
            .all(|(a, b)| (a.clone() - b.clone()).is_negligible(scale))
    }
}

pub fn canonical_subspace<C: Coeff>(u: &Matrix<C>) -> Result<SubspaceCanon<C>> {
    let (r, pivots) = u.transpose().rref();
    if pivots.len() < u.cols() {
        return Err(Error::domain("branch matrix does not have full column rank"));
    }
    Ok(SubspaceCanon(r.transpose()))
}

/// Canonical subspaces of all perfect matchings of `{1..2n}`, checked to be
/// pairwise distinct and to lie in `{e_{2n-1} = 0}`.
pub fn enumerate_isolated_subspaces(n: usize) -> Result<Vec<SubspaceCanon<Rational>>> {
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    let m = 2 * n;
    let matchings = perfect_matchings(m)?;
    let e = elementary_symmetric::<Rational>(m - 1, m)?;
    let canons: Vec<SubspaceCanon<Rational>> = matchings
        .par_iter()
        .map(|mt| {
            let u = matching_to_branch_matrix(mt);
            if !subspace_in_hypersurface(u.matrix(), &e)? {
                return Err(Error::domain(format!("matching {mt} does not lie in the hypersurface")));
            }
            canonical_subspace(u.matrix())
        })
        .collect::<Result<_>>()?;
    let distinct: BTreeSet<&[Rational]> = canons.iter().map(|c| c.0.entries()).collect();
    if distinct.len() != canons.len() {
        return Err(Error::domain("matching subspaces are not pairwise distinct"));
    }
    Ok(canons)
}

/// Signed permutation matrices `g` (`n x n`) fixing the column space of the
/// paired matrix `U_0`, counted exhaustively.
pub fn sign_permutation_stabilizer_count(n: usize) -> Result<usize> {
    let u0 = paired_matrix(n);
    let target = canonical_subspace(&u0)?;
    let mut count = 0;
    for perm in permutations(n) {
        for signs in 0..(1u32 << n) {
            let mut g = Matrix::<Rational>::zeros(n, n);
            for (i, &p) in perm.iter().enumerate() {
                let s = if signs >> i & 1 == 1 { -1 } else { 1 };
                g.set(i, p, Rational::from_i64(s));
            }
            if canonical_subspace(&u0.mul(&g)?)?.same_as(&target) {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Permutations of the `2n` branches that map the column space of `U_0` to
/// itself, counted exhaustively. These are the branch relabelings
/// preserving the pairing.
pub fn row_permutation_stabilizer_count(n: usize) -> Result<usize> {
    let u0 = paired_matrix(n);
    let target = canonical_subspace(&u0)?;
    let mut count = 0;
    for perm in permutations(2 * n) {
        if canonical_subspace(&u0.select_rows(&perm))?.same_as(&target) {
            count += 1;
        }
    }
    Ok(count)
}

/// Rows `e_1, -e_1, ..., e_n, -e_n`.
pub fn paired_matrix(n: usize) -> Matrix<Rational> {
    let pairs = (0..n).map(|t| (2 * t + 1, 2 * t + 2)).collect();
    matching_to_branch_matrix(&Matching { pairs }).into_matrix()
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineKind {
    Singular,
    Smooth,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineLabel {
    /// `L_ij = {x_i = x_j = 0}`.
    Pair(usize, usize),
    /// `M = {x_a + x_b = x_c + x_d = 0}`.
    Matching(Matching),
}

/// A line on the Cayley cubic `{e_3 = 0}` in `P^3`, as a `4 x 2` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CayleyLine {
    pub kind: LineKind,
    pub label: LineLabel,
    pub basis: Matrix<Rational>,
}

/// The nine lines of the Cayley cubic: six through pairs of nodes, then
/// the three smooth lines from perfect matchings of `{1..4}`.
pub fn cayley_lines() -> Vec<CayleyLine> {
    let mut out = Vec::with_capacity(9);
    for i in 1..=4 {
        for j in i + 1..=4 {
            let mut basis = Matrix::zeros(4, 2);
            let others: Vec<usize> = (1..=4).filter(|&k| k != i && k != j).collect();
            for (t, &k) in others.iter().enumerate() {
                basis.set(k - 1, t, Rational::from_i64(1));
            }
            out.push(CayleyLine {
                kind: LineKind::Singular,
                label: LineLabel::Pair(i, j),
                basis,
            });
        }
    }
    for mt in perfect_matchings(4).expect("m = 4 is valid") {
        let basis = matching_to_branch_matrix(&mt).into_matrix();
        out.push(CayleyLine {
            kind: LineKind::Smooth,
            label: LineLabel::Matching(mt),
            basis,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_i64_rows(rows).unwrap()
    }

    #[test]
    fn matchings_of_four() {
        let ms = perfect_matchings(4).unwrap();
        let pairs: Vec<_> = ms.iter().map(|m| m.pairs().to_vec()).collect();
        assert_eq!(
            pairs,
            vec![vec![(1, 2), (3, 4)], vec![(1, 3), (2, 4)], vec![(1, 4), (2, 3)]]
        );
        assert_eq!(perfect_matchings(2).unwrap().len(), 1);
        assert_eq!(perfect_matchings(6).unwrap().len(), 15);
        assert!(matches!(perfect_matchings(5), Err(Error::Domain(_))));
        assert!(matches!(perfect_matchings(18), Err(Error::Capacity(_))));
    }

    #[test]
    fn matching_matrices() {
        let u2 = matching_to_branch_matrix(&Matching::new(vec![(1, 3), (2, 4)]).unwrap());
        assert_eq!(u2.matrix(), &m(&[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]]));
        let u1 = matching_to_branch_matrix(&Matching::new(vec![(1, 2), (3, 4)]).unwrap());
        assert_eq!(u1.matrix(), &m(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]));
        let two = matching_to_branch_matrix(&Matching::new(vec![(1, 2)]).unwrap());
        assert_eq!(two.matrix(), &m(&[&[1], &[-1]]));
        assert!(Matching::new(vec![(1, 2), (2, 3)]).is_err());
    }

    #[test]
    fn membership_examples() {
        let e3 = elementary_symmetric::<Rational>(3, 4).unwrap();
        assert!(subspace_in_hypersurface(&m(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]), &e3).unwrap());
        let s = 3f64.sqrt() / 2.0;
        let tri = Matrix::from_rows(vec![vec![1.0, 0.0], vec![-0.5, s], vec![-0.5, -s]]).unwrap();
        let e2 = elementary_symmetric::<f64>(2, 3).unwrap();
        assert!(!subspace_in_hypersurface(&tri, &e2).unwrap());
        let zero_rows = m(&[&[2, 1], &[0, 0], &[5, -3], &[0, 0]]);
        assert!(subspace_in_hypersurface(&zero_rows, &e3).unwrap());
        assert!(subspace_in_hypersurface(&tri, &elementary_symmetric::<f64>(2, 4).unwrap()).is_err());
    }

    #[test]
    fn canonical_forms() {
        let u2 = m(&[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]]);
        assert_eq!(canonical_subspace(&u2).unwrap().matrix(), &u2);
        let g = m(&[&[2, 1], &[0, 3]]);
        assert_eq!(canonical_subspace(&u2.mul(&g).unwrap()).unwrap().matrix(), &u2);
        let u1 = m(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]);
        assert_eq!(canonical_subspace(&u1).unwrap().matrix(), &u1);
        let scrambled = u1.mul(&m(&[&[0, 2], &[-1, 1]])).unwrap();
        assert_eq!(canonical_subspace(&scrambled).unwrap().matrix(), &u1);
        assert!(canonical_subspace(&m(&[&[1, 2], &[2, 4], &[3, 6]])).is_err());
    }

    #[test]
    fn isolated_subspaces() {
        assert_eq!(enumerate_isolated_subspaces(2).unwrap().len(), 3);
        assert_eq!(enumerate_isolated_subspaces(3).unwrap().len(), 15);
        let one = enumerate_isolated_subspaces(1).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(
            one[0].matrix(),
            &Matrix::from_rows(vec![vec![q(1)], vec![q(-1)]]).unwrap()
        );
    }

    #[test]
    fn stabilizers() {
        for (n, expect) in [(1, 2), (2, 8), (3, 48)] {
            assert_eq!(sign_permutation_stabilizer_count(n).unwrap(), expect);
            assert_eq!(row_permutation_stabilizer_count(n).unwrap(), expect);
        }
    }

    #[test]
    fn cayley_catalog() {
        let lines = cayley_lines();
        assert_eq!(lines.len(), 9);
        let e3 = elementary_symmetric::<Rational>(3, 4).unwrap();
        assert!(lines.iter().all(|l| subspace_in_hypersurface(&l.basis, &e3).unwrap()));
        let l34 = lines.iter().find(|l| l.label == LineLabel::Pair(3, 4)).unwrap();
        assert_eq!(l34.basis, m(&[&[1, 0], &[0, 1], &[0, 0], &[0, 0]]));
        let m13 = &lines[7];
        assert_eq!(m13.kind, LineKind::Smooth);
        assert_eq!(m13.basis, m(&[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]]));
        // Singular lines vanish on their two coordinates, smooth lines on pair sums.
        for l in &lines {
            match &l.label {
                LineLabel::Pair(i, j) => {
                    assert!(l.basis.row(i - 1).iter().chain(l.basis.row(j - 1)).all(|v| *v == q(0)));
                }
                LineLabel::Matching(mt) => {
                    for &(a, b) in mt.pairs() {
                        for c in 0..2 {
                            assert_eq!(l.basis.get(a - 1, c) + l.basis.get(b - 1, c), q(0));
                        }
                    }
                }
            }
        }
    }
}
