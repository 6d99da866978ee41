use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::DualSymbol;
use crate::error::{Error, Result};
use crate::polyring::{Coeff, Polynomial, EPS_POLY};

/// Number of unit directions sampled when classifying symbols of degree > 2.
pub const CLASSIFY_SAMPLES: usize = 10_000;

/// Relative margin above which a sampled minimum counts as bounded away
/// from zero. Minima between `EPS_POLY` and this margin are reported as
/// undetermined.
pub const CLASSIFY_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymbolClass {
    IdenticallyZero,
    Elliptic,
    NonEllipticNonzero,
    Undetermined,
}

impl std::fmt::Display for SymbolClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SymbolClass::IdenticallyZero => "identically_zero",
            SymbolClass::Elliptic => "elliptic",
            SymbolClass::NonEllipticNonzero => "non_elliptic_nonzero",
            SymbolClass::Undetermined => "undetermined",
        })
    }
}

/// Recognizes `sigma = C (xi_1^2 + ... + xi_n^2)^j`, returning `(C, j)`.
pub fn laplacian_power_form<C: Coeff>(d: &DualSymbol<C>) -> Option<(C, u32)> {
    laplacian_power_of(d.sigma())
}

pub(crate) fn laplacian_power_of<C: Coeff>(sigma: &Polynomial<C>) -> Option<(C, u32)> {
    let deg = sigma.homogeneous_degree()?;
    if deg == 0 || deg % 2 == 1 {
        return None;
    }
    let j = deg / 2;
    let n = sigma.var_count();
    let mut lead = vec![0; n];
    lead[0] = deg;
    let c = sigma.coefficient(&lead);
    if c.is_negligible(sigma.max_abs_coeff()) {
        return None;
    }
    let squares: Vec<(Vec<u32>, C)> = (0..n)
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = 2;
            (e, C::one())
        })
        .collect();
    let lap = Polynomial::from_terms(n, squares).ok()?;
    let model = lap.pow(j).scale(&c);
    sigma.approx_eq(&model).then_some((c, j))
}

/// Ellipticity class of a homogeneous dual symbol.
///
/// Degree 2 is decided from the leading principal minors of the coefficient
/// matrix (exactly in rational mode). Odd degrees are never elliptic. Other
/// degrees are sampled on [`CLASSIFY_SAMPLES`] quasi-uniform unit directions.
pub fn classify_symbol<C: Coeff>(d: &DualSymbol<C>) -> Result<SymbolClass> {
    classify_polynomial(d.sigma())
}

pub(crate) fn classify_polynomial<C: Coeff>(sigma: &Polynomial<C>) -> Result<SymbolClass> {
    if sigma.is_zero() {
        return Ok(SymbolClass::IdenticallyZero);
    }
    let deg = sigma
        .homogeneous_degree()
        .ok_or_else(|| Error::domain("symbol classification needs a homogeneous symbol"))?;
    match deg {
        0 => Ok(SymbolClass::Elliptic),
        2 => Ok(quadratic_class(sigma)),
        d if d % 2 == 1 => Ok(SymbolClass::NonEllipticNonzero),
        _ => Ok(sampled_class(&sigma.to_f64())),
    }
}

fn quadratic_class<C: Coeff>(sigma: &Polynomial<C>) -> SymbolClass {
    let n = sigma.var_count();
    let half = C::from_ratio(1, 2);
    let mut a = vec![vec![C::zero(); n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            let mut e = vec![0; n];
            e[i] += 1;
            e[j] += 1;
            let c = sigma.coefficient(&e);
            *v = if i == j { c } else { c * half.clone() };
        }
    }
    let scale = sigma.max_abs_coeff();
    let mut all_pos = true;
    let mut alternating = true;
    for k in 1..=n {
        let dk = determinant(&a, k);
        let tol = scale.powi(k as i32);
        if dk.is_negligible(tol) {
            return SymbolClass::NonEllipticNonzero;
        }
        let positive = dk.to_f64() > 0.0;
        all_pos &= positive;
        alternating &= positive == (k % 2 == 0);
    }
    if all_pos || alternating {
        SymbolClass::Elliptic
    } else {
        SymbolClass::NonEllipticNonzero
    }
}

/// Determinant of the leading `k x k` block by Gaussian elimination.
fn determinant<C: Coeff>(a: &[Vec<C>], k: usize) -> C {
    let mut m: Vec<Vec<C>> = a[..k].iter().map(|r| r[..k].to_vec()).collect();
    let mut det = C::one();
    for col in 0..k {
        let pivot = (col..k).max_by(|&x, &y| {
            m[x][col]
                .to_f64()
                .abs()
                .partial_cmp(&m[y][col].to_f64().abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let Some(p) = pivot.filter(|&p| !m[p][col].is_zero()) else {
            return C::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pv = m[col][col].clone();
        det = det * pv.clone();
        for r in col + 1..k {
            let f = m[r][col].clone() / pv.clone();
            if f.is_zero() {
                continue;
            }
            for c in col..k {
                let v = m[col][c].clone() * f.clone();
                m[r][c] = m[r][c].clone() - v;
            }
        }
    }
    det
}

fn sampled_class(sigma: &Polynomial<f64>) -> SymbolClass {
    let dirs = sample_directions(sigma.var_count(), CLASSIFY_SAMPLES);
    let scale = sigma.max_abs_coeff();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut min_abs = f64::INFINITY;
    for d in &dirs {
        let v = sigma.evaluate(d).unwrap_or(f64::NAN);
        lo = lo.min(v);
        hi = hi.max(v);
        min_abs = min_abs.min(v.abs());
    }
    let rel = min_abs / scale;
    if (lo < 0.0 && hi > 0.0) || rel <= EPS_POLY {
        SymbolClass::NonEllipticNonzero
    } else if rel < CLASSIFY_MARGIN {
        SymbolClass::Undetermined
    } else {
        SymbolClass::Elliptic
    }
}

/// Deterministic quasi-uniform unit directions: equally spaced angles in
/// the plane, a Fibonacci lattice on the 2-sphere, and seeded Gaussian
/// samples in higher dimensions.
pub fn sample_directions(n: usize, count: usize) -> Vec<Vec<f64>> {
    use std::f64::consts::PI;
    match n {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..count)
            .map(|i| {
                let t = 2.0 * PI * (i as f64 + 0.5) / count as f64;
                vec![t.cos(), t.sin()]
            })
            .collect(),
        3 => {
            let golden = PI * (3.0 - 5f64.sqrt());
            (0..count)
                .map(|i| {
                    let z = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
                    let r = (1.0 - z * z).sqrt();
                    let t = golden * i as f64;
                    vec![r * t.cos(), r * t.sin(), z]
                })
                .collect()
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            (0..count)
                .map(|_| {
                    let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
                    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                    v.into_iter().map(|x| x / norm).collect()
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::Rational;

    fn poly(n: usize, terms: &[(&[u32], i64, i64)]) -> Polynomial<Rational> {
        Polynomial::from_terms(
            n,
            terms.iter().map(|(e, a, b)| (e.to_vec(), Rational::from_ratio(*a, *b))),
        )
        .unwrap()
    }

    #[test]
    fn laplacian_forms() {
        let tri = poly(2, &[(&[2, 0], -3, 4), (&[0, 2], -3, 4)]);
        assert_eq!(laplacian_power_of(&tri), Some((Rational::from_ratio(-3, 4), 1)));
        let hyp = poly(2, &[(&[2, 0], 1, 1), (&[0, 2], -1, 1)]);
        assert_eq!(laplacian_power_of(&hyp), None);
        let sq = poly(3, &[(&[2, 0, 0], 1, 1), (&[0, 2, 0], 1, 1), (&[0, 0, 2], 1, 1)]).pow(2);
        assert_eq!(laplacian_power_of(&sq), Some((Rational::from_ratio(1, 1), 2)));
        assert_eq!(laplacian_power_of(&Polynomial::<Rational>::zero(2)), None);
    }

    #[test]
    fn quadratic_classes() {
        let tri = poly(2, &[(&[2, 0], -3, 4), (&[0, 2], -3, 4)]);
        assert_eq!(classify_polynomial(&tri).unwrap(), SymbolClass::Elliptic);
        let cross = poly(2, &[(&[1, 1], 1, 1)]);
        assert_eq!(classify_polynomial(&cross).unwrap(), SymbolClass::NonEllipticNonzero);
        let semi = poly(2, &[(&[2, 0], 1, 1)]);
        assert_eq!(classify_polynomial(&semi).unwrap(), SymbolClass::NonEllipticNonzero);
        assert_eq!(
            classify_polynomial(&Polynomial::<Rational>::zero(2)).unwrap(),
            SymbolClass::IdenticallyZero
        );
        // x^2 + xy + y^2 is positive definite; x^2 + 3xy + y^2 is not.
        let pd = poly(2, &[(&[2, 0], 1, 1), (&[1, 1], 1, 1), (&[0, 2], 1, 1)]);
        assert_eq!(classify_polynomial(&pd).unwrap(), SymbolClass::Elliptic);
        let ind = poly(2, &[(&[2, 0], 1, 1), (&[1, 1], 3, 1), (&[0, 2], 1, 1)]);
        assert_eq!(classify_polynomial(&ind).unwrap(), SymbolClass::NonEllipticNonzero);
    }

    #[test]
    fn higher_degree_classes() {
        let lap2 = poly(3, &[(&[2, 0, 0], 1, 1), (&[0, 2, 0], 1, 1), (&[0, 0, 2], 1, 1)]).pow(2);
        assert_eq!(classify_polynomial(&lap2).unwrap(), SymbolClass::Elliptic);
        let quartic = poly(2, &[(&[4, 0], 1, 1), (&[0, 4], -1, 1)]);
        assert_eq!(classify_polynomial(&quartic).unwrap(), SymbolClass::NonEllipticNonzero);
        let cubic = poly(2, &[(&[3, 0], 1, 1)]);
        assert_eq!(classify_polynomial(&cubic).unwrap(), SymbolClass::NonEllipticNonzero);
        // x^2 y^2 vanishes on the axes, which the samples straddle but miss.
        let xy2 = poly(2, &[(&[2, 2], 1, 1)]);
        assert_eq!(classify_polynomial(&xy2).unwrap(), SymbolClass::Undetermined);
        let lap4 = poly(
            4,
            &[
                (&[2, 0, 0, 0], 1, 1),
                (&[0, 2, 0, 0], 1, 1),
                (&[0, 0, 2, 0], 1, 1),
                (&[0, 0, 0, 2], 1, 1),
            ],
        )
        .pow(2);
        assert_eq!(classify_polynomial(&lap4).unwrap(), SymbolClass::Elliptic);
    }

    #[test]
    fn non_homogeneous_rejected() {
        let p = poly(2, &[(&[2, 0], 1, 1), (&[1, 0], 1, 1)]);
        assert!(matches!(classify_polynomial(&p), Err(Error::Domain(_))));
    }

    #[test]
    fn directions_are_unit() {
        for n in 1..=5 {
            for d in sample_directions(n, 500) {
                let norm: f64 = d.iter().map(|x| x * x).sum();
                assert!((norm - 1.0).abs() < 1e-12);
            }
        }
    }
}
