//! Symmetric branch configurations and their orthogonal symmetries.
//!
//! A branch set is `G`-symmetric when every `g` in `G` permutes its rows:
//! `u_i g = u_{alpha(i)}`. For a symmetric `p*` the dual symbol is then
//! `G`-invariant, which forces polygon and Platonic duals to be powers of
//! the Laplacian in low degree.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyring::{Coeff, Matrix, Polynomial, Rational};
use crate::starcore::{AnyBranchMatrix, BranchMatrix};

/// Orthogonality tolerance (max entry of `g^T g - I`).
pub const EPS_ORTH: f64 = 1e-10;

/// Row-matching tolerance, relative to the largest branch entry.
pub const EPS_ROW: f64 = 1e-8;

/// Search bounds for [`branch_symmetries`].
pub const MAX_SEARCH_BRANCHES: usize = 24;
pub const MAX_SEARCH_DIM: usize = 3;

/// Golden ratio.
pub const PHI: f64 = 1.618_033_988_749_895;

#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalMap(Matrix<f64>);

impl OrthogonalMap {
    pub fn new(g: Matrix<f64>) -> Result<Self> {
        if g.rows() != g.cols() {
            return Err(Error::domain("orthogonal map must be square"));
        }
        if orthogonality_defect(&g) > EPS_ORTH {
            return Err(Error::domain("matrix is not orthogonal"));
        }
        Ok(OrthogonalMap(g))
    }

    pub fn identity(n: usize) -> Self {
        OrthogonalMap(Matrix::identity(n))
    }

    pub fn matrix(&self) -> &Matrix<f64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn compose(&self, other: &OrthogonalMap) -> OrthogonalMap {
        OrthogonalMap(self.0.mul(&other.0).expect("same dimension"))
    }

    pub fn inverse(&self) -> OrthogonalMap {
        OrthogonalMap(self.0.transpose())
    }

    pub fn approx_eq(&self, other: &OrthogonalMap) -> bool {
        self.0.rows() == other.0.rows()
            && self
                .0
                .entries()
                .iter()
                .zip(other.0.entries())
                .all(|(a, b)| (a - b).abs() <= EPS_ORTH)
    }

    fn sort_key(&self) -> Vec<i64> {
        self.0.entries().iter().map(|x| (x * 1e12).round() as i64).collect()
    }
}

fn orthogonality_defect(g: &Matrix<f64>) -> f64 {
    let gtg = g.transpose().mul(g).expect("square");
    let n = g.rows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gtg.get(i, j) - target).abs());
        }
    }
    worst
}

/// Row permutation `i -> alpha(i)`, zero-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchPermutation(Vec<usize>);

impl BranchPermutation {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || seen[p] {
                return Err(Error::domain("not a permutation"));
            }
            seen[p] = true;
        }
        Ok(BranchPermutation(perm))
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolidKind {
    Tetrahedron,
    Cube,
    Octahedron,
    Icosahedron,
    Dodecahedron,
}

impl SolidKind {
    pub const ALL: [SolidKind; 5] = [
        SolidKind::Tetrahedron,
        SolidKind::Cube,
        SolidKind::Octahedron,
        SolidKind::Icosahedron,
        SolidKind::Dodecahedron,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SolidKind::Tetrahedron => "tetrahedron",
            SolidKind::Cube => "cube",
            SolidKind::Octahedron => "octahedron",
            SolidKind::Icosahedron => "icosahedron",
            SolidKind::Dodecahedron => "dodecahedron",
        }
    }
}

impl std::str::FromStr for SolidKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SolidKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::parse(format!("unknown solid {s:?}")))
    }
}

fn snap(x: f64) -> f64 {
    if x.abs() < 1e-15 {
        0.0
    } else {
        x
    }
}

/// Unit radius vectors of the regular `m`-gon, `u_j = (cos 2pi j/m, sin 2pi j/m)`.
pub fn regular_polygon_branches(m: usize) -> Result<BranchMatrix<f64>> {
    if m < 3 {
        return Err(Error::domain(format!(
            "a regular polygon needs at least 3 vertices, got {m}"
        )));
    }
    let rows = (0..m)
        .map(|j| {
            let t = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
            vec![snap(t.cos()), snap(t.sin())]
        })
        .collect();
    BranchMatrix::from_rows(rows)
}

/// Vertex vectors of a Platonic solid centered at the origin. The first
/// three are exact; the icosahedron and dodecahedron involve the golden
/// ratio and are returned as floats.
pub fn platonic_branches(kind: SolidKind) -> AnyBranchMatrix {
    let exact = |rows: Vec<[i64; 3]>| {
        let rows: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| Rational::from_i64(v)).collect())
            .collect();
        AnyBranchMatrix::Exact(BranchMatrix::from_rows(rows).expect("nonzero vertices"))
    };
    let float = |rows: Vec<[f64; 3]>| {
        AnyBranchMatrix::Float(
            BranchMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).expect("nonzero vertices"),
        )
    };
    match kind {
        SolidKind::Tetrahedron => exact(vec![[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]]),
        SolidKind::Cube => {
            let mut rows = Vec::new();
            for a in [1, -1] {
                for b in [1, -1] {
                    for c in [1, -1] {
                        rows.push([a, b, c]);
                    }
                }
            }
            exact(rows)
        }
        SolidKind::Octahedron => exact(vec![
            [1, 0, 0],
            [-1, 0, 0],
            [0, 1, 0],
            [0, -1, 0],
            [0, 0, 1],
            [0, 0, -1],
        ]),
        SolidKind::Icosahedron => float(cyclic_signed(1.0, PHI)),
        SolidKind::Dodecahedron => {
            let mut rows = Vec::new();
            for a in [1.0, -1.0] {
                for b in [1.0, -1.0] {
                    for c in [1.0, -1.0] {
                        rows.push([a, b, c]);
                    }
                }
            }
            rows.extend(cyclic_signed(1.0 / PHI, PHI));
            float(rows)
        }
    }
}

/// Cyclic permutations of `(0, +-a, +-b)`.
fn cyclic_signed(a: f64, b: f64) -> Vec<[f64; 3]> {
    let mut rows = Vec::new();
    for shift in 0..3 {
        for sa in [1.0, -1.0] {
            for sb in [1.0, -1.0] {
                let base = [0.0, sa * a, sb * b];
                rows.push([base[(3 - shift) % 3], base[(4 - shift) % 3], base[(5 - shift) % 3]]);
            }
        }
    }
    rows
}

/// The dihedral group of order `2m` acting on the plane: rotations by
/// `2pi j/m` followed by reflections across lines at angle `pi j/m`.
pub fn dihedral_group_elements(m: usize) -> Result<Vec<OrthogonalMap>> {
    if m < 3 {
        return Err(Error::domain(format!("dihedral group needs m >= 3, got {m}")));
    }
    let pi = std::f64::consts::PI;
    let mut out = Vec::with_capacity(2 * m);
    for j in 0..m {
        let t = 2.0 * pi * j as f64 / m as f64;
        let (s, c) = (snap(t.sin()), snap(t.cos()));
        out.push(OrthogonalMap(Matrix::from_rows(vec![vec![c, -s], vec![s, c]])?));
    }
    for j in 0..m {
        let t = 2.0 * pi * j as f64 / m as f64;
        let (s, c) = (snap(t.sin()), snap(t.cos()));
        out.push(OrthogonalMap(Matrix::from_rows(vec![vec![c, s], vec![s, -c]])?));
    }
    Ok(out)
}

/// Row permutation induced by `g`, if `g` maps every row onto some row.
pub fn induced_permutation(u: &Matrix<f64>, g: &OrthogonalMap) -> Option<BranchPermutation> {
    let tol = EPS_ROW * u.max_abs().max(1.0);
    let gm = g.matrix();
    let n = u.cols();
    let mut perm = Vec::with_capacity(u.rows());
    let mut used = vec![false; u.rows()];
    for i in 0..u.rows() {
        let image: Vec<f64> = (0..n)
            .map(|j| (0..n).map(|k| u.get(i, k) * gm.get(k, j)).sum())
            .collect();
        let hit =
            (0..u.rows()).find(|&r| !used[r] && u.row(r).iter().zip(&image).all(|(a, b)| (a - b).abs() <= tol))?;
        used[hit] = true;
        perm.push(hit);
    }
    Some(BranchPermutation(perm))
}

fn independent_rows(u: &Matrix<f64>) -> Option<Vec<usize>> {
    let n = u.cols();
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..u.rows() {
        let mut trial = chosen.clone();
        trial.push(i);
        if u.select_rows(&trial).rank() == trial.len() {
            chosen = trial;
            if chosen.len() == n {
                return Some(chosen);
            }
        }
    }
    None
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// All orthogonal `g` with `U g = alpha U` for a row permutation `alpha`,
/// sorted canonically. The result is checked to be a group.
pub fn branch_symmetries<C: Coeff>(u: &BranchMatrix<C>) -> Result<Vec<(OrthogonalMap, BranchPermutation)>> {
    let u = u.matrix().to_f64();
    let (m, n) = (u.rows(), u.cols());
    if m > MAX_SEARCH_BRANCHES || n > MAX_SEARCH_DIM {
        return Err(Error::capacity(format!(
            "symmetry search supports at most {MAX_SEARCH_BRANCHES} branches in dimension {MAX_SEARCH_DIM}, got {m}x{n}"
        )));
    }
    let base = independent_rows(&u).ok_or_else(|| Error::domain("branch matrix does not have full column rank"))?;
    let b = u.select_rows(&base);
    let b_inv = b.inverse()?;
    let tol = EPS_ROW * u.max_abs().max(1.0).powi(2);
    let gram = |i: usize, j: usize| dot(u.row(i), u.row(j));

    // Depth-first over image tuples, pruned by the Gram matrix of the base.
    fn extend(
        depth: usize,
        images: &mut Vec<usize>,
        base: &[usize],
        m: usize,
        gram: &dyn Fn(usize, usize) -> f64,
        tol: f64,
        out: &mut Vec<Vec<usize>>,
    ) {
        if depth == base.len() {
            out.push(images.clone());
            return;
        }
        for cand in 0..m {
            if images.contains(&cand) {
                continue;
            }
            let ok = (0..=depth).all(|k| {
                let img_k = if k == depth { cand } else { images[k] };
                (gram(base[k], base[depth]) - gram(img_k, cand)).abs() <= tol
            });
            if ok {
                images.push(cand);
                extend(depth + 1, images, base, m, gram, tol, out);
                images.pop();
            }
        }
    }

    let firsts: Vec<usize> = (0..m)
        .filter(|&c| (gram(base[0], base[0]) - gram(c, c)).abs() <= tol)
        .collect();
    let tuples: Vec<Vec<usize>> = firsts
        .par_iter()
        .flat_map_iter(|&first| {
            let mut out = Vec::new();
            let mut images = vec![first];
            extend(1, &mut images, &base, m, &gram, tol, &mut out);
            out
        })
        .collect();

    let mut found: Vec<(OrthogonalMap, BranchPermutation)> = tuples
        .par_iter()
        .filter_map(|images| {
            let g = b_inv.mul(&u.select_rows(images)).ok()?;
            if orthogonality_defect(&g) > EPS_ORTH {
                return None;
            }
            let g = OrthogonalMap(g);
            let perm = induced_permutation(&u, &g)?;
            Some((g, perm))
        })
        .collect();
    found.sort_by_key(|(g, _)| g.sort_key());
    let maps: Vec<OrthogonalMap> = found.iter().map(|(g, _)| g.clone()).collect();
    if !is_group(&maps) {
        return Err(Error::domain("detected symmetries are not closed under composition"));
    }
    Ok(found)
}

/// Closure under composition and inverses, with the identity present.
pub fn is_group(maps: &[OrthogonalMap]) -> bool {
    let Some(first) = maps.first() else {
        return false;
    };
    let contains = |h: &OrthogonalMap| maps.iter().any(|g| g.approx_eq(h));
    contains(&OrthogonalMap::identity(first.dim()))
        && maps.iter().all(|g| contains(&g.inverse()))
        && maps.par_iter().all(|g| maps.iter().all(|h| contains(&g.compose(h))))
}

/// Whether `sigma(g xi) = sigma(xi)` within the polynomial tolerance.
pub fn is_invariant_polynomial<C: Coeff>(sigma: &Polynomial<C>, g: &OrthogonalMap) -> Result<bool> {
    if sigma.var_count() != g.dim() {
        return Err(Error::domain(format!(
            "polynomial has {} variables but the map acts on R^{}",
            sigma.var_count(),
            g.dim()
        )));
    }
    let s = sigma.to_f64();
    Ok(s.substitute_linear_forms(g.matrix())?.approx_eq(&s))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polygon_rows() {
        let sq = regular_polygon_branches(4).unwrap();
        assert_eq!(
            sq.matrix().row_vecs(),
            vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, 0.0], vec![0.0, -1.0]]
        );
        let tri = regular_polygon_branches(3).unwrap();
        assert!((tri.matrix().get(1, 0) + 0.5).abs() < 1e-15);
        assert!((tri.matrix().get(1, 1) - 3f64.sqrt() / 2.0).abs() < 1e-15);
        let hex = regular_polygon_branches(6).unwrap();
        for j in 0..3 {
            for k in 0..2 {
                assert!((hex.matrix().get(j, k) + hex.matrix().get(j + 3, k)).abs() < 1e-15);
            }
        }
        assert!(regular_polygon_branches(2).is_err());
    }

    #[test]
    fn solids() {
        let sizes = [4, 8, 6, 12, 20];
        for (kind, m) in SolidKind::ALL.into_iter().zip(sizes) {
            let b = platonic_branches(kind);
            assert_eq!(b.m(), m);
            assert_eq!(b.n(), 3);
            let f = b.to_f64();
            for j in 0..3 {
                let s: f64 = (0..m).map(|i| f.matrix().get(i, j)).sum();
                assert!(s.abs() < 1e-12);
            }
            // All vertices on one sphere.
            let r0 = dot(f.matrix().row(0), f.matrix().row(0));
            for i in 0..m {
                assert!((dot(f.matrix().row(i), f.matrix().row(i)) - r0).abs() < 1e-12);
            }
        }
        assert!(matches!(
            platonic_branches(SolidKind::Tetrahedron),
            AnyBranchMatrix::Exact(_)
        ));
        assert!(matches!(
            platonic_branches(SolidKind::Dodecahedron),
            AnyBranchMatrix::Float(_)
        ));
        assert_eq!("cube".parse::<SolidKind>().unwrap(), SolidKind::Cube);
    }

    #[test]
    fn dihedral() {
        let d4 = dihedral_group_elements(4).unwrap();
        assert_eq!(d4.len(), 8);
        let quarter = Matrix::from_rows(vec![vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap();
        assert!(d4.iter().any(|g| g.matrix() == &quarter));
        assert_eq!(dihedral_group_elements(3).unwrap().len(), 6);
        for m in 3..=8 {
            let g = dihedral_group_elements(m).unwrap();
            assert!(g.iter().all(|g| orthogonality_defect(g.matrix()) < 1e-14));
            assert!(is_group(&g));
        }
    }

    #[test]
    fn invariance_examples() {
        let lap = Polynomial::<f64>::from_terms(2, [(vec![2, 0], 1.0), (vec![0, 2], 1.0)]).unwrap();
        let x1 = Polynomial::<f64>::var(2, 0);
        let rot = OrthogonalMap::new(Matrix::from_rows(vec![vec![0.6, -0.8], vec![0.8, 0.6]]).unwrap()).unwrap();
        assert!(is_invariant_polynomial(&lap, &rot).unwrap());
        let quarter = &dihedral_group_elements(4).unwrap()[1];
        assert!(!is_invariant_polynomial(&x1, quarter).unwrap());
        assert!(is_invariant_polynomial(&x1, &OrthogonalMap::identity(3)).is_err());
    }

    #[test]
    fn symmetry_counts() {
        let count = |b: &AnyBranchMatrix| branch_symmetries(&b.to_f64()).unwrap().len();
        assert_eq!(
            branch_symmetries(&regular_polygon_branches(3).unwrap()).unwrap().len(),
            6
        );
        assert_eq!(
            branch_symmetries(&regular_polygon_branches(4).unwrap()).unwrap().len(),
            8
        );
        assert_eq!(count(&platonic_branches(SolidKind::Tetrahedron)), 24);
        assert_eq!(count(&platonic_branches(SolidKind::Cube)), 48);
        assert_eq!(count(&platonic_branches(SolidKind::Octahedron)), 48);
    }

    #[test]
    fn rank_deficient_rejected() {
        let b = BranchMatrix::from_rows(vec![vec![1.0, 0.0], vec![2.0, 0.0], vec![-1.0, 0.0]]).unwrap();
        assert!(matches!(branch_symmetries(&b), Err(Error::Domain(_))));
        let big = regular_polygon_branches(25).unwrap();
        assert!(matches!(branch_symmetries(&big), Err(Error::Capacity(_))));
    }
}
