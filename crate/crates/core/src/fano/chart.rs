//! Polynomial systems for subspaces in the identity-block Grassmannian
//! chart, and a multi-start Newton solver for them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyring::{binomial, monomials_of_degree, Coeff, Matrix, Monomial, Polynomial, Rational};

/// Largest unknown count accepted by [`solve_chart_newton`].
pub const MAX_CHART_UNKNOWNS: usize = 12;
/// Residual threshold for accepting a Newton run.
pub const NEWTON_RESIDUAL: f64 = 1e-12;
/// Cluster radius for merging converged points.
pub const CLUSTER_RADIUS: f64 = 1e-6;

const MAX_ITERATIONS: usize = 500;
const START_BOX: f64 = 2.0;

/// Conditions on `W` for the column space of `U = [I_n; W]` to lie in
/// `{e_{m-1} = 0}`: one polynomial per degree-`(m-1)` monomial in `xi`.
/// Unknowns are the entries of the `(m-n) x n` block `W`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartSystem {
    pub m: usize,
    pub n: usize,
    /// `xi`-monomial of each equation, leading first.
    pub monomials: Vec<Monomial>,
    pub equations: Vec<Polynomial<Rational>>,
}

impl ChartSystem {
    pub fn unknown_count(&self) -> usize {
        (self.m - self.n) * self.n
    }

    /// Name of unknown `k`: `w{r}_{c}` with 1-based row and column of `W`.
    pub fn unknown_name(&self, k: usize) -> String {
        format!("w{}_{}", k / self.n + 1, k % self.n + 1)
    }

    pub fn residual(&self, w: &[f64]) -> Vec<f64> {
        self.equations
            .iter()
            .map(|e| e.to_f64().evaluate(w).unwrap_or(f64::NAN))
            .collect()
    }
}

pub fn chart_equations(m: usize, n: usize) -> Result<ChartSystem> {
    if n == 0 || m <= n {
        return Err(Error::domain(format!("chart needs m > n >= 1, got m = {m}, n = {n}")));
    }
    let k = (m - n) * n;
    let vars = n + k;
    // Combined ring: xi_1..xi_n, then the entries of W.
    let forms: Vec<Polynomial<Rational>> = (0..m)
        .map(|i| {
            if i < n {
                Polynomial::var(vars, i)
            } else {
                let r = i - n;
                (0..n).fold(Polynomial::zero(vars), |acc, c| {
                    &acc + &(&Polynomial::var(vars, n + r * n + c) * &Polynomial::var(vars, c))
                })
            }
        })
        .collect();
    // e_{m-1} = sum over the omitted factor, via prefix and suffix products.
    let mut prefix = vec![Polynomial::one(vars)];
    for f in &forms {
        let next = prefix.last().expect("nonempty") * f;
        prefix.push(next);
    }
    let mut suffix = vec![Polynomial::one(vars); m + 1];
    for i in (0..m).rev() {
        suffix[i] = &suffix[i + 1] * &forms[i];
    }
    let mut e = Polynomial::zero(vars);
    for i in 0..m {
        e = &e + &(&prefix[i] * &suffix[i + 1]);
    }

    let monomials = monomials_of_degree(n, (m - 1) as u32);
    debug_assert_eq!(monomials.len(), binomial(m - 2 + n, n - 1));
    let mut equations = vec![Polynomial::zero(k); monomials.len()];
    for (mono, c) in e.terms() {
        let (xi, w) = mono.exponents().split_at(n);
        let idx = monomials
            .iter()
            .position(|mm| mm.exponents() == xi)
            .expect("e_{m-1} is homogeneous in xi");
        let term = Polynomial::from_terms(k, [(w.to_vec(), c.clone())])?;
        equations[idx] = &equations[idx] + &term;
    }
    Ok(ChartSystem {
        m,
        n,
        monomials,
        equations,
    })
}

/// `[I_n; W]` for a row-major `W`.
pub fn chart_point_to_matrix<C: Coeff>(m: usize, n: usize, w: &[C]) -> Result<Matrix<C>> {
    if m <= n || w.len() != (m - n) * n {
        return Err(Error::domain("chart point has the wrong number of entries"));
    }
    let mut u = Matrix::zeros(m, n);
    for i in 0..n {
        u.set(i, i, C::one());
    }
    for (k, v) in w.iter().enumerate() {
        u.set(n + k / n, k % n, v.clone());
    }
    Ok(u)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolutionCluster {
    pub center: Vec<f64>,
    /// Number of starts whose run converged into this cluster.
    pub multiplicity: usize,
}

struct Compiled {
    f: Vec<Polynomial<f64>>,
    jac: Vec<Vec<Polynomial<f64>>>,
    k: usize,
}

impl Compiled {
    fn new(cs: &ChartSystem) -> Self {
        let k = cs.unknown_count();
        let f: Vec<Polynomial<f64>> = cs.equations.iter().map(Polynomial::to_f64).collect();
        let jac = f.iter().map(|e| (0..k).map(|v| e.derivative(v)).collect()).collect();
        Compiled { f, jac, k }
    }

    fn residual(&self, x: &[f64]) -> Vec<f64> {
        self.f.iter().map(|e| e.evaluate(x).expect("arity")).collect()
    }

    fn jacobian(&self, x: &[f64]) -> Vec<Vec<f64>> {
        self.jac
            .iter()
            .map(|row| row.iter().map(|d| d.evaluate(x).expect("arity")).collect())
            .collect()
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Solves the `k x k` system in place by Gaussian elimination with partial
/// pivoting. Returns `None` when singular.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let k = b.len();
    for c in 0..k {
        let p = (c..k).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[p][c].abs() < 1e-300 {
            return None;
        }
        a.swap(p, c);
        b.swap(p, c);
        for r in c + 1..k {
            let f = a[r][c] / a[c][c];
            for j in c..k {
                a[r][j] -= f * a[c][j];
            }
            b[r] -= f * b[c];
        }
    }
    let mut x = vec![0.0; k];
    for c in (0..k).rev() {
        let s: f64 = (c + 1..k).map(|j| a[c][j] * x[j]).sum();
        x[c] = (b[c] - s) / a[c][c];
    }
    Some(x)
}

/// Levenberg-Marquardt damped Newton from one start. Keeps iterating past
/// the residual threshold until the step stalls, so runs that approach a
/// singular root from different sides still land within the cluster radius.
fn newton_run(sys: &Compiled, mut x: Vec<f64>) -> Option<Vec<f64>> {
    let k = sys.k;
    let mut fx = sys.residual(&x);
    let mut r = norm(&fx);
    let mut lambda = 1e-3;
    for _ in 0..MAX_ITERATIONS {
        if !r.is_finite() || norm(&x) > 1e8 {
            return None;
        }
        let j = sys.jacobian(&x);
        let mut jtj = vec![vec![0.0; k]; k];
        let mut jtf = vec![0.0; k];
        for (row, &fv) in j.iter().zip(&fx) {
            for a in 0..k {
                jtf[a] += row[a] * fv;
                for b in 0..k {
                    jtj[a][b] += row[a] * row[b];
                }
            }
        }
        let mut accepted = false;
        for _ in 0..30 {
            let mut damped = jtj.clone();
            for (a, row) in damped.iter_mut().enumerate() {
                row[a] += lambda * (1.0 + jtj[a][a]);
            }
            let Some(step) = solve_dense(damped, jtf.iter().map(|v| -v).collect()) else {
                lambda *= 10.0;
                continue;
            };
            let trial: Vec<f64> = x.iter().zip(&step).map(|(a, b)| a + b).collect();
            let ft = sys.residual(&trial);
            let rt = norm(&ft);
            if rt < r || (rt == r && r < NEWTON_RESIDUAL) {
                let moved = norm(&step);
                x = trial;
                fx = ft;
                r = rt;
                lambda = (lambda / 3.0).max(1e-15);
                accepted = true;
                if r < NEWTON_RESIDUAL && moved <= 1e-15 * (1.0 + norm(&x)) {
                    return Some(x);
                }
                break;
            }
            lambda *= 4.0;
        }
        if !accepted {
            break;
        }
    }
    (r < NEWTON_RESIDUAL).then_some(x)
}

/// Scrambled Halton points in `[-2, 2]^k`: the radical-inverse sequence in
/// the first `k` prime bases with a seeded random shift modulo 1.
fn halton_starts(k: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    const PRIMES: [u64; MAX_CHART_UNKNOWNS] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift: Vec<f64> = (0..k).map(|_| rng.gen()).collect();
    (1..=count as u64)
        .map(|i| {
            (0..k)
                .map(|d| {
                    let base = PRIMES[d];
                    let (mut f, mut r, mut idx) = (1.0, 0.0, i);
                    while idx > 0 {
                        f /= base as f64;
                        r += f * (idx % base) as f64;
                        idx /= base;
                    }
                    let u = (r + shift[d]).fract();
                    START_BOX * (2.0 * u - 1.0)
                })
                .collect()
        })
        .collect()
}

/// Multi-start damped Newton on the chart system. Converged points are
/// merged within [`CLUSTER_RADIUS`] and returned sorted by center.
pub fn solve_chart_newton(cs: &ChartSystem, starts: usize, seed: u64) -> Result<Vec<SolutionCluster>> {
    let k = cs.unknown_count();
    if k > MAX_CHART_UNKNOWNS {
        return Err(Error::capacity(format!(
            "chart solver supports at most {MAX_CHART_UNKNOWNS} unknowns, got {k}"
        )));
    }
    let sys = Compiled::new(cs);
    let points: Vec<Option<Vec<f64>>> = halton_starts(k, starts, seed)
        .into_par_iter()
        .map(|x0| newton_run(&sys, x0))
        .collect();

    let mut clusters: Vec<(Vec<f64>, usize, Vec<f64>)> = Vec::new();
    for p in points.into_iter().flatten() {
        match clusters.iter_mut().find(|(c, _, _)| dist(c, &p) <= CLUSTER_RADIUS) {
            Some((center, mult, _)) => {
                for (c, v) in center.iter_mut().zip(&p) {
                    *c += (v - *c) / (*mult as f64 + 1.0);
                }
                *mult += 1;
            }
            None => clusters.push((p.clone(), 1, p)),
        }
    }
    let mut out: Vec<SolutionCluster> = clusters
        .into_iter()
        .map(|(mean, multiplicity, first)| {
            // Prefer the mean with tiny entries snapped to zero, then the raw
            // mean, then the first converged member.
            let snapped: Vec<f64> = mean.iter().map(|&v| if v.abs() < 1e-9 { 0.0 } else { v }).collect();
            let center = [snapped, mean]
                .into_iter()
                .find(|c| norm(&sys.residual(c)) < NEWTON_RESIDUAL)
                .unwrap_or(first);
            SolutionCluster { center, multiplicity }
        })
        .collect();
    out.sort_by(|a, b| {
        a.center
            .iter()
            .zip(&b.center)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(out)
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}
