//! Star-transform symbols and their dual differential operators.
//!
//! A star transform is described by its total symbol `(p, U)`: a polynomial
//! `p` in `m` variables (one per branch) and an `m x n` branch matrix `U`
//! whose rows are the branch directions. The dual differential operator has
//! constant coefficients and total symbol `sigma(xi) = p*(U xi)`, where `p*`
//! is the reciprocal polynomial. The transform is injective exactly when
//! `sigma` is not identically zero.
//!
//! `sigma` can be computed two ways: reciprocal followed by substitution of
//! linear forms, or, when `p` is elementary symmetric, term by term from
//! permanents of column-repeated submatrices of `U`. The two routes are kept
//! independent so each can check the other.

mod classify;
pub mod json;

pub use classify::{classify_symbol, laplacian_power_form, SymbolClass};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyring::{
    elementary_degree, monomials_of_degree, rectangular_permanent, AnyMatrix, AnyPolynomial, Coeff, Matrix, Polynomial,
    Rational, Scalar,
};

/// `m x n` matrix whose rows are nonzero branch vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchMatrix<C>(Matrix<C>);

impl<C: Coeff> BranchMatrix<C> {
    pub fn new(u: Matrix<C>) -> Result<Self> {
        if u.rows() == 0 || u.cols() == 0 {
            return Err(Error::domain("branch matrix must be non-empty"));
        }
        for i in 0..u.rows() {
            if u.row(i).iter().all(|v| v.is_zero()) {
                return Err(Error::domain(format!("branch vector {} is zero", i + 1)));
            }
        }
        Ok(BranchMatrix(u))
    }

    pub fn from_rows(rows: Vec<Vec<C>>) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?)
    }

    /// Number of branches.
    pub fn m(&self) -> usize {
        self.0.rows()
    }

    /// Ambient dimension.
    pub fn n(&self) -> usize {
        self.0.cols()
    }

    pub fn matrix(&self) -> &Matrix<C> {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix<C> {
        self.0
    }

    pub fn scaled(&self, k: &C) -> Self {
        BranchMatrix(self.0.map(|v| v.clone() * k.clone()))
    }

    pub fn to_f64(&self) -> BranchMatrix<f64> {
        BranchMatrix(self.0.to_f64())
    }
}

/// Branch matrix with a runtime-chosen coefficient field.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyBranchMatrix {
    Exact(BranchMatrix<Rational>),
    Float(BranchMatrix<f64>),
}

impl AnyBranchMatrix {
    pub fn m(&self) -> usize {
        match self {
            AnyBranchMatrix::Exact(b) => b.m(),
            AnyBranchMatrix::Float(b) => b.m(),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            AnyBranchMatrix::Exact(b) => b.n(),
            AnyBranchMatrix::Float(b) => b.n(),
        }
    }

    pub fn to_f64(&self) -> BranchMatrix<f64> {
        match self {
            AnyBranchMatrix::Exact(b) => b.to_f64(),
            AnyBranchMatrix::Float(b) => b.clone(),
        }
    }

    pub fn to_any_matrix(&self) -> AnyMatrix {
        match self {
            AnyBranchMatrix::Exact(b) => AnyMatrix::Exact(b.0.clone()),
            AnyBranchMatrix::Float(b) => AnyMatrix::Float(b.0.clone()),
        }
    }

    /// Elementary star `(e_k, U)` in the matrix's field.
    pub fn elementary_star(&self, k: usize) -> Result<AnyStar> {
        match self {
            AnyBranchMatrix::Exact(b) => StarSymbol::elementary(k, b.clone()).map(AnyStar::Exact),
            AnyBranchMatrix::Float(b) => StarSymbol::elementary(k, b.clone()).map(AnyStar::Float),
        }
    }
}

/// Total symbol `(p, U)` of a star transform.
#[derive(Debug, Clone, PartialEq)]
pub struct StarSymbol<C> {
    p: Polynomial<C>,
    branches: BranchMatrix<C>,
    order: Option<u32>,
}

impl<C: Coeff> StarSymbol<C> {
    pub fn new(p: Polynomial<C>, branches: BranchMatrix<C>) -> Result<Self> {
        if p.var_count() != branches.m() {
            return Err(Error::domain(format!(
                "polynomial symbol has {} variables but there are {} branches",
                p.var_count(),
                branches.m()
            )));
        }
        if p.is_zero() {
            return Err(Error::domain("polynomial symbol is zero"));
        }
        let order = p.homogeneous_degree();
        Ok(StarSymbol { p, branches, order })
    }

    /// Elementary star `(e_k, U)`.
    pub fn elementary(k: usize, branches: BranchMatrix<C>) -> Result<Self> {
        let p = crate::polyring::elementary_symmetric(k, branches.m())?;
        Self::new(p, branches)
    }

    pub fn polynomial(&self) -> &Polynomial<C> {
        &self.p
    }

    pub fn branches(&self) -> &BranchMatrix<C> {
        &self.branches
    }

    /// Total degree of `p` when homogeneous.
    pub fn order(&self) -> Option<u32> {
        self.order
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DualPath {
    Substitution,
    Permanent,
}

/// Total symbol of the dual differential operator, in `xi_1..xi_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualSymbol<C> {
    sigma: Polynomial<C>,
    source: StarSymbol<C>,
    path: DualPath,
    scale: f64,
}

impl<C: Coeff> DualSymbol<C> {
    pub fn sigma(&self) -> &Polynomial<C> {
        &self.sigma
    }

    pub fn source(&self) -> &StarSymbol<C> {
        &self.source
    }

    pub fn path(&self) -> DualPath {
        self.path
    }

    /// Coefficient scale used for float zero tests: the largest coefficient
    /// of the same expansion with every input replaced by its magnitude, so
    /// it bounds the size of any round-off in `sigma`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn display(&self) -> String {
        self.sigma.display_with("ξ")
    }
}

/// `sigma = p*(U xi)` via reciprocal and substitution.
pub fn dual_symbol<C: Coeff>(s: &StarSymbol<C>) -> Result<DualSymbol<C>> {
    let recip = s.p.reciprocal()?;
    let raw = recip.substitute_linear_forms(s.branches.matrix())?;
    let scale = majorant_scale(&recip, s.branches.matrix())?;
    Ok(DualSymbol {
        sigma: raw.chop(scale),
        source: s.clone(),
        path: DualPath::Substitution,
        scale,
    })
}

fn majorant_scale<C: Coeff>(p: &Polynomial<C>, u: &Matrix<C>) -> Result<f64> {
    if C::TAG == crate::polyring::Tag::Exact {
        return Ok(1.0);
    }
    let maj = p.abs_coeffs().substitute_linear_forms(&u.map(|v| v.abs()))?;
    Ok(maj.max_abs_coeff().max(f64::MIN_POSITIVE))
}

/// `sigma = e_r(U xi)` for `p = e_{m-r}`, built coefficient by coefficient:
/// the coefficient of `xi^k` is `perm(U(k)) / (k_1! ... k_n!)`, where `U(k)`
/// repeats column `j` of `U` exactly `k_j` times.
pub fn dual_symbol_permanent_path<C: Coeff>(s: &StarSymbol<C>) -> Result<DualSymbol<C>> {
    let m = s.branches.m();
    let n = s.branches.n();
    let k = elementary_degree(&s.p)
        .ok_or_else(|| Error::domain("permanent path requires an elementary symmetric polynomial symbol"))?;
    let r = m - k;
    let u = s.branches.matrix();
    let abs_u = u.map(|v| v.abs());
    let mut sigma = Polynomial::zero(n);
    let mut scale = f64::MIN_POSITIVE;
    for mono in monomials_of_degree(n, r as u32) {
        let cols: Vec<usize> = mono
            .exponents()
            .iter()
            .enumerate()
            .flat_map(|(j, &e)| std::iter::repeat_n(j, e as usize))
            .collect();
        let norm = mono
            .exponents()
            .iter()
            .fold(C::one(), |acc, &e| acc * factorial::<C>(e));
        let coeff = rectangular_permanent(&u.select_cols(&cols))? / norm.clone();
        if C::TAG == crate::polyring::Tag::Float {
            let maj = rectangular_permanent(&abs_u.select_cols(&cols))? / norm;
            scale = scale.max(maj.to_f64());
        }
        sigma = &sigma + &Polynomial::from_terms(n, [(mono.exponents().to_vec(), coeff)])?;
    }
    if C::TAG == crate::polyring::Tag::Exact {
        scale = 1.0;
    }
    Ok(DualSymbol {
        sigma: sigma.chop(scale),
        source: s.clone(),
        path: DualPath::Permanent,
        scale,
    })
}

fn factorial<C: Coeff>(e: u32) -> C {
    (1..=e).fold(C::one(), |acc, i| acc * C::from_i64(i64::from(i)))
}

/// Injectivity by the dual-operator criterion: true iff `sigma` is not
/// identically zero.
///
/// The criterion presumes the transform is nonzero and realizable on the
/// whole space; checking realizability is the caller's responsibility.
pub fn is_injective<C: Coeff>(s: &StarSymbol<C>) -> Result<bool> {
    Ok(!dual_symbol(s)?.sigma.is_zero())
}

/// Star symbol with a runtime-chosen coefficient field.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyStar {
    Exact(StarSymbol<Rational>),
    Float(StarSymbol<f64>),
}

impl AnyStar {
    pub fn m(&self) -> usize {
        match self {
            AnyStar::Exact(s) => s.branches.m(),
            AnyStar::Float(s) => s.branches.m(),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            AnyStar::Exact(s) => s.branches.n(),
            AnyStar::Float(s) => s.branches.n(),
        }
    }

    /// Float copy of the star, used by the numerical back end.
    pub fn to_f64(&self) -> StarSymbol<f64> {
        match self {
            AnyStar::Exact(s) => StarSymbol {
                p: s.p.to_f64(),
                branches: s.branches.to_f64(),
                order: s.order,
            },
            AnyStar::Float(s) => s.clone(),
        }
    }

    pub fn branches(&self) -> AnyBranchMatrix {
        match self {
            AnyStar::Exact(s) => AnyBranchMatrix::Exact(s.branches.clone()),
            AnyStar::Float(s) => AnyBranchMatrix::Float(s.branches.clone()),
        }
    }

    pub fn order(&self) -> Option<u32> {
        match self {
            AnyStar::Exact(s) => s.order,
            AnyStar::Float(s) => s.order,
        }
    }

    pub fn dual_symbol(&self) -> Result<AnyDual> {
        match self {
            AnyStar::Exact(s) => dual_symbol(s).map(AnyDual::Exact),
            AnyStar::Float(s) => dual_symbol(s).map(AnyDual::Float),
        }
    }

    pub fn dual_symbol_permanent_path(&self) -> Result<AnyDual> {
        match self {
            AnyStar::Exact(s) => dual_symbol_permanent_path(s).map(AnyDual::Exact),
            AnyStar::Float(s) => dual_symbol_permanent_path(s).map(AnyDual::Float),
        }
    }
}

/// Dual symbol with a runtime-chosen coefficient field.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyDual {
    Exact(DualSymbol<Rational>),
    Float(DualSymbol<f64>),
}

impl AnyDual {
    pub fn sigma(&self) -> AnyPolynomial {
        match self {
            AnyDual::Exact(d) => AnyPolynomial::Exact(d.sigma.clone()),
            AnyDual::Float(d) => AnyPolynomial::Float(d.sigma.clone()),
        }
    }

    pub fn sigma_f64(&self) -> Polynomial<f64> {
        match self {
            AnyDual::Exact(d) => d.sigma.to_f64(),
            AnyDual::Float(d) => d.sigma.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            AnyDual::Exact(d) => d.sigma.is_zero(),
            AnyDual::Float(d) => d.sigma.is_zero(),
        }
    }

    pub fn path(&self) -> DualPath {
        match self {
            AnyDual::Exact(d) => d.path,
            AnyDual::Float(d) => d.path,
        }
    }

    pub fn display(&self) -> String {
        match self {
            AnyDual::Exact(d) => d.display(),
            AnyDual::Float(d) => d.display(),
        }
    }

    pub fn classify(&self) -> Result<SymbolClass> {
        match self {
            AnyDual::Exact(d) => classify_symbol(d),
            AnyDual::Float(d) => classify_symbol(d),
        }
    }

    /// `(C, j)` with `C` tagged like the symbol.
    pub fn laplacian_power_form(&self) -> Option<(Scalar, u32)> {
        match self {
            AnyDual::Exact(d) => laplacian_power_form(d).map(|(c, j)| (Scalar::Exact(c), j)),
            AnyDual::Float(d) => laplacian_power_form(d).map(|(c, j)| (Scalar::Float(c), j)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::elementary_symmetric;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn square() -> BranchMatrix<Rational> {
        BranchMatrix::new(Matrix::from_i64_rows(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]).unwrap()).unwrap()
    }

    fn triangle() -> BranchMatrix<f64> {
        let s = 3f64.sqrt() / 2.0;
        BranchMatrix::from_rows(vec![vec![1.0, 0.0], vec![-0.5, s], vec![-0.5, -s]]).unwrap()
    }

    fn tetrahedron() -> BranchMatrix<Rational> {
        BranchMatrix::new(Matrix::from_i64_rows(&[&[1, 1, 1], &[1, -1, -1], &[-1, 1, -1], &[-1, -1, 1]]).unwrap())
            .unwrap()
    }

    #[test]
    fn zero_rows_rejected() {
        let u = Matrix::<Rational>::from_i64_rows(&[&[1, 0], &[0, 0]]).unwrap();
        assert!(matches!(BranchMatrix::new(u), Err(Error::Domain(_))));
    }

    #[test]
    fn var_count_mismatch_rejected() {
        let p = elementary_symmetric::<Rational>(1, 3).unwrap();
        assert!(StarSymbol::new(p, square()).is_err());
    }

    #[test]
    fn triangle_dual_is_negative_three_quarters_laplacian() {
        let s = StarSymbol::elementary(1, triangle()).unwrap();
        let d = dual_symbol(&s).unwrap();
        assert_eq!(d.sigma().term_count(), 2);
        assert!((d.sigma().coefficient(&[2, 0]) + 0.75).abs() < 1e-12);
        assert!((d.sigma().coefficient(&[0, 2]) + 0.75).abs() < 1e-12);
        assert!(is_injective(&s).unwrap());
    }

    #[test]
    fn square_dual_vanishes() {
        let s = StarSymbol::elementary(1, square()).unwrap();
        assert!(dual_symbol(&s).unwrap().sigma().is_zero());
        assert!(dual_symbol_permanent_path(&s).unwrap().sigma().is_zero());
        assert!(!is_injective(&s).unwrap());
    }

    #[test]
    fn octahedral_pairs_not_injective() {
        let u = Matrix::<Rational>::from_i64_rows(&[
            &[1, 0, 0],
            &[-1, 0, 0],
            &[0, 1, 0],
            &[0, -1, 0],
            &[0, 0, 1],
            &[0, 0, -1],
        ])
        .unwrap();
        let s = StarSymbol::elementary(1, BranchMatrix::new(u).unwrap()).unwrap();
        assert!(!is_injective(&s).unwrap());
    }

    #[test]
    fn tetrahedron_e2_dual() {
        let s = StarSymbol::elementary(2, tetrahedron()).unwrap();
        let d = dual_symbol(&s).unwrap();
        let lap = Polynomial::<Rational>::from_terms(
            3,
            [
                (vec![2, 0, 0], q(-2, 1)),
                (vec![0, 2, 0], q(-2, 1)),
                (vec![0, 0, 2], q(-2, 1)),
            ],
        )
        .unwrap();
        assert_eq!(d.sigma(), &lap);
    }

    #[test]
    fn permanent_path_small_examples() {
        // p = e_1 in 2 vars, U = [[a],[b]]: dual e_1 = (a + b) xi.
        let u = BranchMatrix::new(Matrix::<Rational>::from_i64_rows(&[&[3], &[5]]).unwrap()).unwrap();
        let s = StarSymbol::elementary(1, u.clone()).unwrap();
        let d = dual_symbol_permanent_path(&s).unwrap();
        assert_eq!(d.sigma().coefficient(&[1]), q(8, 1));
        assert_eq!(d.path(), DualPath::Permanent);
        // p = e_0: dual e_2 = ab xi^2; perm(U(2)) = 2ab, normalized by 2!.
        let s0 = StarSymbol::elementary(0, u).unwrap();
        let d0 = dual_symbol_permanent_path(&s0).unwrap();
        assert_eq!(d0.sigma().coefficient(&[2]), q(15, 1));
        // With per-variable degrees the reciprocal of the constant e_0 is
        // itself, so only the permanent path produces e_m here.
        assert_eq!(dual_symbol(&s0).unwrap().sigma(), &Polynomial::one(1));
    }

    #[test]
    fn permanent_path_requires_elementary() {
        let p = Polynomial::<Rational>::from_terms(4, [(vec![2, 0, 0, 0], q(1, 1))]).unwrap();
        let s = StarSymbol::new(p, square()).unwrap();
        assert!(matches!(dual_symbol_permanent_path(&s), Err(Error::Domain(_))));
    }

    #[test]
    fn order_recorded_for_homogeneous_symbols() {
        let s = StarSymbol::elementary(2, tetrahedron()).unwrap();
        assert_eq!(s.order(), Some(2));
        let p =
            Polynomial::<Rational>::from_terms(4, [(vec![1, 0, 0, 0], q(1, 1)), (vec![1, 1, 0, 0], q(1, 1))]).unwrap();
        assert_eq!(StarSymbol::new(p, tetrahedron()).unwrap().order(), None);
    }
}
