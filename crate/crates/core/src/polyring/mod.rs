//! Sparse multivariate polynomials over exact rationals or binary64 floats,
//! dense matrices over the same fields, and the rectangular permanent.

mod matrix;
mod monomial;
mod permanent;
mod polynomial;
mod scalar;

pub mod json;

pub use matrix::{Matrix, PIVOT_TOL};
pub use monomial::{monomials_of_degree, Monomial};
pub use permanent::rectangular_permanent;
pub use polynomial::{binomial, elementary_degree, elementary_symmetric, Polynomial};
pub use scalar::{parse_scalar, Coeff, Rational, Scalar, Tag, EPS_POLY};

use crate::error::{Error, Result};

/// A polynomial whose coefficient field is chosen at run time.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyPolynomial {
    Exact(Polynomial<Rational>),
    Float(Polynomial<f64>),
}

impl AnyPolynomial {
    pub fn tag(&self) -> Tag {
        match self {
            AnyPolynomial::Exact(_) => Tag::Exact,
            AnyPolynomial::Float(_) => Tag::Float,
        }
    }

    pub fn var_count(&self) -> usize {
        match self {
            AnyPolynomial::Exact(p) => p.var_count(),
            AnyPolynomial::Float(p) => p.var_count(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            AnyPolynomial::Exact(p) => p.is_zero(),
            AnyPolynomial::Float(p) => p.is_zero(),
        }
    }

    /// Evaluates at a tagged point; every coordinate must carry the
    /// polynomial's tag.
    pub fn evaluate(&self, point: &[Scalar]) -> Result<Scalar> {
        match self {
            AnyPolynomial::Exact(p) => {
                let pt = point.iter().map(Rational::from_scalar).collect::<Result<Vec<_>>>()?;
                p.evaluate(&pt).map(Scalar::Exact)
            }
            AnyPolynomial::Float(p) => {
                let pt = point.iter().map(f64::from_scalar).collect::<Result<Vec<_>>>()?;
                p.evaluate(&pt).map(Scalar::Float)
            }
        }
    }

    pub fn display_with(&self, prefix: &str) -> String {
        match self {
            AnyPolynomial::Exact(p) => p.display_with(prefix),
            AnyPolynomial::Float(p) => p.display_with(prefix),
        }
    }

    pub fn to_f64(&self) -> Polynomial<f64> {
        match self {
            AnyPolynomial::Exact(p) => p.to_f64(),
            AnyPolynomial::Float(p) => p.clone(),
        }
    }
}

/// A matrix whose coefficient field is chosen at run time.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyMatrix {
    Exact(Matrix<Rational>),
    Float(Matrix<f64>),
}

impl AnyMatrix {
    pub fn tag(&self) -> Tag {
        match self {
            AnyMatrix::Exact(_) => Tag::Exact,
            AnyMatrix::Float(_) => Tag::Float,
        }
    }

    pub fn rows(&self) -> usize {
        match self {
            AnyMatrix::Exact(m) => m.rows(),
            AnyMatrix::Float(m) => m.rows(),
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            AnyMatrix::Exact(m) => m.cols(),
            AnyMatrix::Float(m) => m.cols(),
        }
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        match self {
            AnyMatrix::Exact(m) => m.to_f64(),
            AnyMatrix::Float(m) => m.clone(),
        }
    }
}

/// Substitution on tagged operands; tags must agree.
pub fn substitute_any(p: &AnyPolynomial, u: &AnyMatrix) -> Result<AnyPolynomial> {
    match (p, u) {
        (AnyPolynomial::Exact(p), AnyMatrix::Exact(u)) => p.substitute_linear_forms(u).map(AnyPolynomial::Exact),
        (AnyPolynomial::Float(p), AnyMatrix::Float(u)) => p.substitute_linear_forms(u).map(AnyPolynomial::Float),
        _ => Err(Error::TagMismatch),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn elementary_symmetric_examples() {
        let e12 = elementary_symmetric::<Rational>(1, 2).unwrap();
        assert_eq!(e12, &Polynomial::var(2, 0) + &Polynomial::var(2, 1));
        let e34 = elementary_symmetric::<Rational>(3, 4).unwrap();
        assert_eq!(e34.term_count(), 4);
        assert_eq!(e34.to_string(), "x1*x2*x3 + x1*x2*x4 + x1*x3*x4 + x2*x3*x4");
        assert_eq!(elementary_symmetric::<Rational>(0, 5).unwrap(), Polynomial::one(5));
        assert!(matches!(elementary_symmetric::<Rational>(3, 2), Err(Error::Domain(_))));
    }

    #[test]
    fn elementary_term_counts() {
        for m in 1..=7 {
            for r in 0..=m {
                let e = elementary_symmetric::<Rational>(r, m).unwrap();
                assert_eq!(e.term_count(), binomial(m, r));
                assert!(e.terms().all(|(_, c)| *c == q(1, 1)));
                assert_eq!(elementary_degree(&e), Some(r));
            }
        }
    }

    #[test]
    fn reciprocal_examples() {
        let e1 = elementary_symmetric::<Rational>(1, 4).unwrap();
        assert_eq!(e1.reciprocal().unwrap(), elementary_symmetric(3, 4).unwrap());
        let x1x2 = Polynomial::<Rational>::from_terms(2, [(vec![1, 1], q(1, 1))]).unwrap();
        assert_eq!(x1x2.reciprocal().unwrap(), Polynomial::one(2));
        // 2x1^2 + 3x1x2 has d = (2, 1): -> 2x2 + 3x1.
        let p = Polynomial::<Rational>::from_terms(2, [(vec![2, 0], q(2, 1)), (vec![1, 1], q(3, 1))]).unwrap();
        let expect = Polynomial::from_terms(2, [(vec![0, 1], q(2, 1)), (vec![1, 0], q(3, 1))]).unwrap();
        assert_eq!(p.reciprocal().unwrap(), expect);
        assert!(Polynomial::<Rational>::zero(3).reciprocal().is_err());
    }

    #[test]
    fn substitution_examples() {
        let p = elementary_symmetric::<Rational>(1, 2).unwrap();
        let id = Matrix::<Rational>::identity(2);
        assert_eq!(p.substitute_linear_forms(&id).unwrap(), p);

        // e_2 on the triangle: ((sum y)^2 - sum y^2)/2 with sum y = 0 and
        // sum u u^T = (3/2) I gives -(3/4)|xi|^2.
        let s = 3f64.sqrt() / 2.0;
        let tri = Matrix::from_rows(vec![vec![1.0, 0.0], vec![-0.5, s], vec![-0.5, -s]]).unwrap();
        let e2 = elementary_symmetric::<f64>(2, 3).unwrap();
        let sigma = e2.substitute_linear_forms(&tri).unwrap();
        assert!((sigma.coefficient(&[2, 0]) + 0.75).abs() < 1e-12);
        assert!((sigma.coefficient(&[0, 2]) + 0.75).abs() < 1e-12);
        assert!(sigma.coefficient(&[1, 1]).abs() < 1e-12);

        let u1 = Matrix::<Rational>::from_i64_rows(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]).unwrap();
        let e3 = elementary_symmetric::<Rational>(3, 4).unwrap();
        assert!(e3.substitute_linear_forms(&u1).unwrap().is_zero());

        let bad = Matrix::<Rational>::identity(3);
        assert!(matches!(e3.substitute_linear_forms(&bad), Err(Error::Domain(_))));
    }

    #[test]
    fn evaluation_examples() {
        let p = elementary_symmetric::<Rational>(1, 2).unwrap();
        assert_eq!(p.evaluate(&[q(1, 1), q(1, 1)]).unwrap(), q(2, 1));
        let e2 = elementary_symmetric::<Rational>(2, 3).unwrap();
        assert_eq!(e2.evaluate(&[q(1, 1), q(2, 1), q(3, 1)]).unwrap(), q(11, 1));
        let e3 = elementary_symmetric::<Rational>(3, 4).unwrap();
        assert_eq!(e3.evaluate(&vec![q(1, 1); 4]).unwrap(), q(4, 1));
        assert!(e3.evaluate(&vec![q(1, 1); 3]).is_err());
    }

    #[test]
    fn tagged_evaluation_rejects_mixed_points() {
        let p = AnyPolynomial::Exact(elementary_symmetric(1, 2).unwrap());
        let good = [Scalar::exact(1, 2).unwrap(), Scalar::exact(1, 3).unwrap()];
        assert_eq!(p.evaluate(&good).unwrap(), Scalar::exact(5, 6).unwrap());
        let mixed = [Scalar::exact(1, 2).unwrap(), Scalar::Float(0.5)];
        assert!(matches!(p.evaluate(&mixed), Err(Error::TagMismatch)));
    }

    #[test]
    fn float_and_exact_modes_agree_after_rounding() {
        let pe = Polynomial::<Rational>::from_terms(2, [(vec![1, 0], q(1, 3)), (vec![0, 1], q(-2, 7))]).unwrap();
        let ue = Matrix::<Rational>::from_rows(vec![vec![q(1, 2), q(3, 1)], vec![q(-1, 5), q(2, 3)]]).unwrap();
        let exact = pe.substitute_linear_forms(&ue).unwrap().pow(3);
        let float = pe.to_f64().substitute_linear_forms(&ue.to_f64()).unwrap().pow(3);
        assert!(exact.to_f64().approx_eq(&float));
    }
}
