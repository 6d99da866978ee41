use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::matrix::Matrix;
use super::monomial::{monomials_of_degree, Monomial};
use super::scalar::Coeff;
use crate::error::{Error, Result};

/// Sparse multivariate polynomial in `var_count` variables.
///
/// Terms are kept in a graded-lex ordered map and never hold an exactly zero
/// coefficient. Float polynomials may carry round-off sized coefficients;
/// use [`Polynomial::chop`] or the tolerance-aware comparisons.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<C> {
    vars: usize,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> Polynomial<C> {
    pub fn zero(vars: usize) -> Self {
        Polynomial {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: C, vars: usize) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(Monomial::one(vars), c);
        p
    }

    pub fn one(vars: usize) -> Self {
        Self::constant(C::one(), vars)
    }

    /// The variable `x_{index+1}`.
    pub fn var(vars: usize, index: usize) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(Monomial::var(vars, index), C::one());
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, merging
    /// repeated monomials.
    pub fn from_terms(vars: usize, terms: impl IntoIterator<Item = (Vec<u32>, C)>) -> Result<Self> {
        let mut p = Self::zero(vars);
        for (exp, c) in terms {
            if exp.len() != vars {
                return Err(Error::domain(format!(
                    "monomial has {} exponents, polynomial has {vars} variables",
                    exp.len()
                )));
            }
            p.add_term(Monomial::new(exp), c);
        }
        Ok(p)
    }

    /// Linear form `sum_j coeffs[j] * x_j`.
    pub fn linear(coeffs: &[C]) -> Self {
        let vars = coeffs.len();
        let mut p = Self::zero(vars);
        for (j, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(vars, j), c.clone());
        }
        p
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: C) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn var_count(&self) -> usize {
        self.vars
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending graded-lex order (leading term first).
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> C {
        self.terms
            .get(&Monomial::new(exponents.to_vec()))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::total_degree)
    }

    /// Common total degree of all terms, if the polynomial is nonzero and
    /// homogeneous.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let first = self.terms.keys().next()?.total_degree();
        let last = self.terms.keys().next_back()?.total_degree();
        (first == last).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    /// Per-variable degrees `deg_j(p)`.
    pub fn var_degrees(&self) -> Vec<u32> {
        let mut d = vec![0; self.vars];
        for m in self.terms.keys() {
            for (dj, &e) in d.iter_mut().zip(m.exponents()) {
                *dj = (*dj).max(e);
            }
        }
        d
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.to_f64().abs()).fold(0.0, f64::max)
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Polynomial<D> {
        let mut p = Polynomial::zero(self.vars);
        for (m, c) in &self.terms {
            p.add_term(m.clone(), f(c));
        }
        p
    }

    pub fn to_f64(&self) -> Polynomial<f64> {
        self.map_coeffs(|c| c.to_f64())
    }

    /// Polynomial with every coefficient replaced by its absolute value.
    pub fn abs_coeffs(&self) -> Self {
        self.map_coeffs(|c| c.abs())
    }

    /// Drops coefficients that are negligible at the given scale. A no-op
    /// for exact coefficients.
    pub fn chop(&self, scale: f64) -> Self {
        let mut p = Self::zero(self.vars);
        for (m, c) in &self.terms {
            if !c.is_negligible(scale) {
                p.terms.insert(m.clone(), c.clone());
            }
        }
        p
    }

    pub fn scale(&self, k: &C) -> Self {
        self.map_coeffs(|c| c.clone() * k.clone())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one(self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut p = Self::zero(self.vars);
        for (m, c) in &self.terms {
            let e = m.exponents()[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[var] -= 1;
            p.add_term(Monomial::new(exps), c.clone() * C::from_i64(i64::from(e)));
        }
        p
    }

    /// Evaluates by direct term summation.
    pub fn evaluate(&self, point: &[C]) -> Result<C> {
        if point.len() != self.vars {
            return Err(Error::domain(format!(
                "point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.vars
            )));
        }
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                for _ in 0..e {
                    t = t * x.clone();
                }
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    /// Reciprocal polynomial `x^d p(1/x)` with `d_j = deg_j(p)`: each
    /// exponent vector `e` becomes `d - e`.
    pub fn reciprocal(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::domain("reciprocal of the zero polynomial"));
        }
        let d = self.var_degrees();
        let mut p = Self::zero(self.vars);
        for (m, c) in &self.terms {
            let exps = d.iter().zip(m.exponents()).map(|(dj, ej)| dj - ej).collect();
            p.add_term(Monomial::new(exps), c.clone());
        }
        Ok(p)
    }

    /// Substitutes `x_i <- sum_j U_ij xi_j` and expands; the result lives in
    /// `U.cols()` variables.
    pub fn substitute_linear_forms(&self, u: &Matrix<C>) -> Result<Polynomial<C>> {
        if u.rows() != self.vars {
            return Err(Error::domain(format!(
                "polynomial has {} variables but substitution matrix has {} rows",
                self.vars,
                u.rows()
            )));
        }
        let n = u.cols();
        let forms: Vec<Polynomial<C>> = (0..u.rows()).map(|i| Polynomial::linear(u.row(i))).collect();
        let mut cache = PowerCache::new(forms, n);
        // Sorting by plain lex order makes every prefix group contiguous.
        let mut terms: Vec<(&[u32], &C)> = self.terms.iter().map(|(m, c)| (m.exponents(), c)).collect();
        terms.sort_by(|a, b| a.0.cmp(b.0));
        if terms.is_empty() {
            return Ok(Polynomial::zero(n));
        }
        Ok(substitute_rec(&terms, 0, &mut cache))
    }

    /// Equality up to tolerance: exact equality for rationals; for floats,
    /// max coefficient difference within `EPS_POLY` times the larger max
    /// coefficient magnitude (at least 1 when both are tiny).
    pub fn approx_eq(&self, other: &Self) -> bool {
        if self.vars != other.vars {
            return false;
        }
        let scale = self.max_abs_coeff().max(other.max_abs_coeff());
        let diff = self - other;
        diff.terms.values().all(|c| c.is_negligible(scale))
    }

    /// Zero test at a coefficient scale.
    pub fn is_negligible(&self, scale: f64) -> bool {
        self.terms.values().all(|c| c.is_negligible(scale))
    }

    /// Full homogeneous basis expansion: coefficient of every monomial of
    /// the given degree, leading first.
    pub fn dense_coefficients(&self, degree: u32) -> Vec<(Monomial, C)> {
        monomials_of_degree(self.vars, degree)
            .into_iter()
            .map(|m| {
                let c = self.terms.get(&m).cloned().unwrap_or_else(C::zero);
                (m, c)
            })
            .collect()
    }

    /// Human-readable rendering with the given variable prefix (`x`, `xi`).
    pub fn display_with(&self, prefix: &str) -> String {
        let names: Vec<String> = (1..=self.vars).map(|j| format!("{prefix}{j}")).collect();
        self.display_named(&names)
    }

    /// Human-readable rendering with one name per variable.
    pub fn display_named(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms().enumerate() {
            let neg = c.to_f64() < 0.0;
            let mag = if neg { -c.clone() } else { c.clone() };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = m
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(j, &e)| {
                    if e == 1 {
                        names[j].clone()
                    } else {
                        format!("{}^{e}", names[j])
                    }
                })
                .collect();
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    out.push_str(&mag.to_string());
                    out.push('*');
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

impl<C: Coeff> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x"))
    }
}

struct PowerCache<C> {
    forms: Vec<Polynomial<C>>,
    powers: Vec<Vec<Polynomial<C>>>,
    vars: usize,
}

impl<C: Coeff> PowerCache<C> {
    fn new(forms: Vec<Polynomial<C>>, vars: usize) -> Self {
        let powers = forms.iter().map(|_| vec![Polynomial::one(vars)]).collect();
        PowerCache { forms, powers, vars }
    }

    fn get(&mut self, i: usize, e: u32) -> &Polynomial<C> {
        let e = e as usize;
        while self.powers[i].len() <= e {
            let next = &self.powers[i][self.powers[i].len() - 1] * &self.forms[i];
            self.powers[i].push(next);
        }
        &self.powers[i][e]
    }
}

fn substitute_rec<C: Coeff>(terms: &[(&[u32], &C)], var: usize, cache: &mut PowerCache<C>) -> Polynomial<C> {
    let nvars = terms[0].0.len();
    if var == nvars {
        let c = terms.iter().fold(C::zero(), |acc, (_, c)| acc + (*c).clone());
        return Polynomial::constant(c, cache.vars);
    }
    let mut out = Polynomial::zero(cache.vars);
    let mut start = 0;
    while start < terms.len() {
        let e = terms[start].0[var];
        let mut end = start + 1;
        while end < terms.len() && terms[end].0[var] == e {
            end += 1;
        }
        let inner = substitute_rec(&terms[start..end], var + 1, cache);
        let part = if e == 0 { inner } else { &inner * cache.get(var, e) };
        out.accumulate(&part);
        start = end;
    }
    out
}

impl<C: Coeff> Polynomial<C> {
    fn accumulate(&mut self, other: &Polynomial<C>) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

/// Panics if the operands have different variable counts.
impl<C: Coeff> Add for &Polynomial<C> {
    type Output = Polynomial<C>;

    fn add(self, rhs: &Polynomial<C>) -> Polynomial<C> {
        assert_eq!(self.vars, rhs.vars, "variable count mismatch");
        let mut p = self.clone();
        p.accumulate(rhs);
        p
    }
}

impl<C: Coeff> Sub for &Polynomial<C> {
    type Output = Polynomial<C>;

    fn sub(self, rhs: &Polynomial<C>) -> Polynomial<C> {
        assert_eq!(self.vars, rhs.vars, "variable count mismatch");
        let mut p = self.clone();
        for (m, c) in &rhs.terms {
            p.add_term(m.clone(), -c.clone());
        }
        p
    }
}

impl<C: Coeff> Mul for &Polynomial<C> {
    type Output = Polynomial<C>;

    fn mul(self, rhs: &Polynomial<C>) -> Polynomial<C> {
        assert_eq!(self.vars, rhs.vars, "variable count mismatch");
        let mut p = Polynomial::zero(self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                p.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        p
    }
}

impl<C: Coeff> Neg for &Polynomial<C> {
    type Output = Polynomial<C>;

    fn neg(self) -> Polynomial<C> {
        self.map_coeffs(|c| -c.clone())
    }
}

/// Elementary symmetric polynomial `e_r` in `m` variables.
pub fn elementary_symmetric<C: Coeff>(degree: usize, vars: usize) -> Result<Polynomial<C>> {
    if degree > vars {
        return Err(Error::domain(format!("e_{degree} is undefined in {vars} variables")));
    }
    let mut p = Polynomial::zero(vars);
    let mut exps = vec![0u32; vars];
    fn rec<C: Coeff>(start: usize, left: usize, exps: &mut Vec<u32>, p: &mut Polynomial<C>) {
        if left == 0 {
            p.terms.insert(Monomial::new(exps.clone()), C::one());
            return;
        }
        for i in start..=exps.len() - left {
            exps[i] = 1;
            rec(i + 1, left - 1, exps, p);
            exps[i] = 0;
        }
    }
    rec(0, degree, &mut exps, &mut p);
    Ok(p)
}

/// If `p` equals some `e_k` in its variable count, returns `k`.
pub fn elementary_degree<C: Coeff>(p: &Polynomial<C>) -> Option<usize> {
    let k = p.homogeneous_degree()? as usize;
    let m = p.var_count();
    if k > m || p.term_count() != binomial(m, k) {
        return None;
    }
    let all_squarefree_unit = p
        .terms()
        .all(|(mono, c)| c.is_one() && mono.exponents().iter().all(|&e| e <= 1));
    all_squarefree_unit.then_some(k)
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}
