use std::collections::HashMap;

use serde::Serialize;

use super::beam::{beam_transform, directional_derivative};
use super::field::Field2D;
use super::solver::{solve_laplacian_power, tikhonov_divide};
use crate::error::{Error, Result};
use crate::starcore::{dual_symbol, laplacian_power_form, StarSymbol};

/// Unit directions and lengths of the branch rows.
fn normalized_branches(s: &StarSymbol<f64>) -> Result<Vec<([f64; 2], f64)>> {
    let u = s.branches().matrix();
    if u.cols() != 2 {
        return Err(Error::domain(format!(
            "numerical transforms need planar branches, got dimension {}",
            u.cols()
        )));
    }
    Ok((0..u.rows())
        .map(|i| {
            let (a, b) = (*u.get(i, 0), *u.get(i, 1));
            let len = (a * a + b * b).sqrt();
            ([a / len, b / len], len)
        })
        .collect())
}

/// `S f = p(X_{u_1}, ..., X_{u_m}) f` with `X_{a u} = X_u / a`.
///
/// Each monomial applies its beam transforms in row order; partial
/// products shared between monomials are computed once.
pub fn apply_star(f: &Field2D, s: &StarSymbol<f64>) -> Result<Field2D> {
    let branches = normalized_branches(s)?;
    let mut cache: HashMap<Vec<usize>, Field2D> = HashMap::new();
    let mut out = Field2D::zeros(*f.domain());
    for (mono, &c) in s.polynomial().terms() {
        let seq: Vec<usize> = mono
            .exponents()
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
            .collect();
        let mut current = f.clone();
        for len in 1..=seq.len() {
            let key = seq[..len].to_vec();
            current = match cache.get(&key) {
                Some(v) => v.clone(),
                None => {
                    let (dir, norm) = branches[seq[len - 1]];
                    let v = beam_transform(&current, dir)?.scaled(1.0 / norm);
                    cache.insert(key, v.clone());
                    v
                }
            };
        }
        out = out.add(&current.scaled(c))?;
    }
    Ok(out)
}

/// Applies `D_{u_i}` exactly `deg_i(p)` times for each branch, in row
/// order, with `D_{a u} = a D_u`. On `g = S f` this approximates `L f`.
pub fn dual_derivative_cascade(g: &Field2D, s: &StarSymbol<f64>) -> Result<Field2D> {
    let branches = normalized_branches(s)?;
    let degrees = s.polynomial().var_degrees();
    let mut out = g.clone();
    for ((dir, norm), d) in branches.into_iter().zip(degrees) {
        for _ in 0..d {
            out = directional_derivative(&out, dir)?.scaled(norm);
        }
    }
    Ok(out)
}

/// How [`invert_star`] inverted the dual operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum InversionMethod {
    /// `L` is a nonzero constant: `f = h / c`.
    Constant { c: f64 },
    /// `L = C Delta^j`, solved exactly by sine transforms.
    LaplacianPower { c: f64, j: u32 },
    /// Regularized Fourier division; approximate.
    Tikhonov { eps_reg: f64 },
}

/// Recovers `f` from `g = S f`: applies the derivative cascade to get
/// `h = L f`, then inverts `L`.
pub fn invert_star(g: &Field2D, s: &StarSymbol<f64>, eps_reg: f64) -> Result<(Field2D, InversionMethod)> {
    let dual = dual_symbol(s)?;
    let sigma = dual.sigma();
    if sigma.is_zero() {
        return Err(Error::domain(
            "star transform is not injective: its dual operator symbol vanishes identically",
        ));
    }
    let h = dual_derivative_cascade(g, s)?;
    if sigma.homogeneous_degree() == Some(0) {
        let c = sigma.coefficient(&[0, 0]);
        return Ok((h.scaled(1.0 / c), InversionMethod::Constant { c }));
    }
    if let Some((c, j)) = laplacian_power_form(&dual) {
        return Ok((
            solve_laplacian_power(&h, c, j)?,
            InversionMethod::LaplacianPower { c, j },
        ));
    }
    Ok((
        tikhonov_divide(&h, sigma, eps_reg)?,
        InversionMethod::Tikhonov { eps_reg },
    ))
}

/// `||cascade(S f)|| / ||f||`, a numerical witness of `L = 0`.
pub fn null_residual(s: &StarSymbol<f64>, f: &Field2D) -> Result<f64> {
    let norm = f.norm_l2();
    if norm == 0.0 {
        return Err(Error::domain("null residual needs a nonzero field"));
    }
    Ok(dual_derivative_cascade(&apply_star(f, s)?, s)?.norm_l2() / norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric2d::field::Domain2D;
    use crate::numeric2d::phantom::{make_phantom, Phantom};
    use crate::polyring::{Matrix, Polynomial};
    use crate::starcore::BranchMatrix;

    fn star(p: Polynomial<f64>, rows: Vec<Vec<f64>>) -> StarSymbol<f64> {
        StarSymbol::new(p, BranchMatrix::new(Matrix::from_rows(rows).unwrap()).unwrap()).unwrap()
    }

    fn bump(n: usize) -> Field2D {
        make_phantom(&Phantom::gaussian([0.1, -0.05], 0.15), &Domain2D::new(n).unwrap()).unwrap()
    }

    #[test]
    fn single_branch_is_one_beam() {
        let f = bump(32);
        let s = star(Polynomial::var(1, 0), vec![vec![1.0, 0.0]]);
        assert_eq!(apply_star(&f, &s).unwrap(), beam_transform(&f, [1.0, 0.0]).unwrap());
        let scaled = star(Polynomial::var(1, 0), vec![vec![2.0, 0.0]]);
        let half = beam_transform(&f, [1.0, 0.0]).unwrap().scaled(0.5);
        assert!(apply_star(&f, &scaled).unwrap().sub(&half).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn single_branch_inversion_is_cascade() {
        let f = bump(32);
        let s = star(Polynomial::var(1, 0), vec![vec![0.6, 0.8]]);
        let g = apply_star(&f, &s).unwrap();
        let (rec, method) = invert_star(&g, &s, 1e-6).unwrap();
        assert_eq!(method, InversionMethod::Constant { c: 1.0 });
        assert_eq!(rec, dual_derivative_cascade(&g, &s).unwrap());
    }

    #[test]
    fn square_star_is_rejected() {
        let f = bump(32);
        let e1 = crate::polyring::elementary_symmetric::<f64>(1, 4).unwrap();
        let s = star(
            e1,
            vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]],
        );
        let g = apply_star(&f, &s).unwrap();
        let err = invert_star(&g, &s, 1e-6).unwrap_err();
        assert!(err.to_string().contains("not injective"));
    }

    #[test]
    fn order_two_composition_commutes() {
        let f = bump(48);
        let e2 = crate::polyring::elementary_symmetric::<f64>(2, 2).unwrap();
        let s = star(e2, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        let ab = beam_transform(&beam_transform(&f, [1.0, 0.0]).unwrap(), [0.0, 1.0]).unwrap();
        let ba = beam_transform(&beam_transform(&f, [0.0, 1.0]).unwrap(), [1.0, 0.0]).unwrap();
        let sf = apply_star(&f, &s).unwrap();
        assert_eq!(sf, ab);
        assert!(ab.rel_l2_error(&ba).unwrap() < 1e-6);
    }
}
