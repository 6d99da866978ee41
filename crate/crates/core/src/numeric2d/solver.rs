use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use super::field::Field2D;
use crate::error::{Error, Result};
use crate::polyring::Polynomial;

/// Five-point Laplacian with homogeneous Dirichlet conditions on the cell
/// faces (ghost value `-f` beyond each boundary cell).
pub fn laplacian_5pt(f: &Field2D) -> Field2D {
    let n = f.n();
    let h2 = f.domain().h().powi(2);
    let at = |i: isize, j: isize| -> f64 {
        let clamp = |k: isize| k.clamp(0, n as isize - 1) as usize;
        let v = f.get(clamp(i), clamp(j));
        let outside = i < 0 || j < 0 || i >= n as isize || j >= n as isize;
        if outside {
            -v
        } else {
            v
        }
    };
    let mut out = vec![0.0; n * n];
    for i in 0..n as isize {
        for j in 0..n as isize {
            out[i as usize * n + j as usize] =
                (at(i + 1, j) + at(i - 1, j) + at(i, j + 1) + at(i, j - 1) - 4.0 * at(i, j)) / h2;
        }
    }
    Field2D::from_raw(*f.domain(), out)
}

/// Type-II/III sine transforms of length `N` computed through complex FFTs
/// of length `2N`, with basis `sin(pi k (n + 1/2) / N)`, `k = 1..N`.
struct Dst {
    n: usize,
    fwd: std::sync::Arc<dyn rustfft::Fft<f64>>,
    inv: std::sync::Arc<dyn rustfft::Fft<f64>>,
    twiddle: Vec<Complex64>,
}

impl Dst {
    fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        let twiddle = (0..=n)
            .map(|k| Complex64::from_polar(1.0, -PI * k as f64 / (2.0 * n as f64)))
            .collect();
        Dst {
            n,
            fwd: planner.plan_fft_forward(2 * n),
            inv: planner.plan_fft_inverse(2 * n),
            twiddle,
        }
    }

    /// `X_k = sum_n x_n sin(pi k (n + 1/2) / N)`, stored at index `k - 1`.
    fn forward(&self, x: &mut [f64], buf: &mut [Complex64]) {
        let n = self.n;
        for (i, &v) in x.iter().enumerate() {
            buf[i] = Complex64::new(v, 0.0);
            buf[2 * n - 1 - i] = Complex64::new(-v, 0.0);
        }
        self.fwd.process(buf);
        for k in 1..=n {
            // X_k = (i/2) e^{-i pi k / 2N} Y_k
            let z = buf[k] * self.twiddle[k] * Complex64::new(0.0, 0.5);
            x[k - 1] = z.re;
        }
    }

    /// Inverse of [`Dst::forward`].
    fn inverse(&self, x: &mut [f64], buf: &mut [Complex64]) {
        let n = self.n;
        buf.iter_mut().for_each(|b| *b = Complex64::new(0.0, 0.0));
        for k in 1..=n {
            let w = if k == n { 0.5 } else { 1.0 };
            let c = 2.0 / n as f64 * w * x[k - 1];
            buf[k] = self.twiddle[k].conj() * c;
        }
        self.inv.process(buf);
        for (i, v) in x.iter_mut().enumerate() {
            *v = buf[i].im;
        }
    }
}

fn transform_2d(data: &mut [f64], n: usize, dst: &Dst, forward: bool) {
    let mut buf = vec![Complex64::new(0.0, 0.0); 2 * n];
    let mut col = vec![0.0; n];
    for row in data.chunks_mut(n) {
        if forward {
            dst.forward(row, &mut buf);
        } else {
            dst.inverse(row, &mut buf);
        }
    }
    for j in 0..n {
        for i in 0..n {
            col[i] = data[i * n + j];
        }
        if forward {
            dst.forward(&mut col, &mut buf);
        } else {
            dst.inverse(&mut col, &mut buf);
        }
        for i in 0..n {
            data[i * n + j] = col[i];
        }
    }
}

/// Solves `C Delta^j f = h` with homogeneous Dirichlet conditions, `Delta`
/// being the five-point Laplacian of [`laplacian_5pt`].
pub fn solve_laplacian_power(h: &Field2D, c: f64, j: u32) -> Result<Field2D> {
    if c == 0.0 || !c.is_finite() {
        return Err(Error::domain(
            "Laplacian-power coefficient is zero: the star transform is not injective",
        ));
    }
    if j == 0 {
        return Err(Error::domain("Laplacian power must be at least 1"));
    }
    let n = h.n();
    let hh = h.domain().h();
    let dst = Dst::new(n);
    let eig: Vec<f64> = (1..=n)
        .map(|k| -4.0 / (hh * hh) * (PI * k as f64 / (2.0 * n as f64)).sin().powi(2))
        .collect();
    let mut data: Vec<f64> = h.samples().iter().map(|v| v / c).collect();
    transform_2d(&mut data, n, &dst, true);
    for (a, row) in data.chunks_mut(n).enumerate() {
        for (b, v) in row.iter_mut().enumerate() {
            *v /= (eig[a] + eig[b]).powi(j as i32);
        }
    }
    transform_2d(&mut data, n, &dst, false);
    Field2D::new(*h.domain(), data)
}

/// Tikhonov-regularized division by `sigma(i xi)` on a zero-padded periodic
/// extension of size `2N x 2N`:
/// `f^ = h^ conj(s) / (|s|^2 + eps^2)` with `s = i^q sigma(xi)`, `q = deg sigma`.
///
/// The constant Fourier mode, where a homogeneous symbol vanishes, is
/// restored by requiring the padding region to average to zero.
pub fn tikhonov_divide(h: &Field2D, sigma: &Polynomial<f64>, eps_reg: f64) -> Result<Field2D> {
    if sigma.var_count() != 2 {
        return Err(Error::domain("numerical inversion needs a symbol in two variables"));
    }
    let q = sigma
        .homogeneous_degree()
        .ok_or_else(|| Error::domain("numerical inversion needs a homogeneous nonzero symbol"))?;
    let n = h.n();
    let p = 2 * n;
    let dx = h.domain().h();
    let mut grid = vec![Complex64::new(0.0, 0.0); p * p];
    for i in 0..n {
        for j in 0..n {
            grid[i * p + j] = Complex64::new(h.get(i, j), 0.0);
        }
    }
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(p);
    let inv = planner.plan_fft_inverse(p);
    fft_2d(&mut grid, p, fwd.as_ref());
    let i_pow = Complex64::new(0.0, 1.0).powu(q);
    let freq = |k: usize| {
        let s = if k <= p / 2 { k as f64 } else { k as f64 - p as f64 };
        2.0 * PI * s / (p as f64 * dx)
    };
    for a in 0..p {
        for b in 0..p {
            let s = i_pow * sigma.evaluate(&[freq(b), freq(a)]).expect("two variables");
            let denom = s.norm_sqr() + eps_reg * eps_reg;
            let v = &mut grid[a * p + b];
            *v = if denom == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                *v * s.conj() / denom
            };
        }
    }
    fft_2d(&mut grid, p, inv.as_ref());
    let scale = 1.0 / (p * p) as f64;
    let mut pad_sum = 0.0;
    for a in 0..p {
        for b in 0..p {
            if a >= n || b >= n {
                pad_sum += grid[a * p + b].re * scale;
            }
        }
    }
    let offset = pad_sum / (p * p - n * n) as f64;
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push(grid[i * p + j].re * scale - offset);
        }
    }
    Field2D::new(*h.domain(), out)
}

fn fft_2d(grid: &mut [Complex64], p: usize, fft: &dyn rustfft::Fft<f64>) {
    for row in grid.chunks_mut(p) {
        fft.process(row);
    }
    let mut col = vec![Complex64::new(0.0, 0.0); p];
    for j in 0..p {
        for i in 0..p {
            col[i] = grid[i * p + j];
        }
        fft.process(&mut col);
        for i in 0..p {
            grid[i * p + j] = col[i];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric2d::field::Domain2D;
    use crate::numeric2d::phantom::{make_phantom, Phantom};

    fn direct_dst(x: &[f64]) -> Vec<f64> {
        let n = x.len();
        (1..=n)
            .map(|k| {
                (0..n)
                    .map(|i| x[i] * (PI * k as f64 * (i as f64 + 0.5) / n as f64).sin())
                    .sum()
            })
            .collect()
    }

    #[test]
    fn dst_matches_direct_sum() {
        let n = 20;
        let x: Vec<f64> = (0..n).map(|i| ((i * 7 % 11) as f64 - 5.0) / 3.0).collect();
        let dst = Dst::new(n);
        let mut buf = vec![Complex64::new(0.0, 0.0); 2 * n];
        let mut y = x.clone();
        dst.forward(&mut y, &mut buf);
        let direct = direct_dst(&x);
        for (a, b) in y.iter().zip(&direct) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
        dst.inverse(&mut y, &mut buf);
        for (a, b) in y.iter().zip(&x) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn inverts_discrete_laplacian() {
        let d = Domain2D::new(64).unwrap();
        let f = make_phantom(&Phantom::gaussian([0.1, -0.2], 0.15), &d).unwrap();
        let lap = laplacian_5pt(&f);
        let back = solve_laplacian_power(&lap, 1.0, 1).unwrap();
        assert!(back.rel_l2_error(&f).unwrap() < 1e-10);
        let lap2 = laplacian_5pt(&lap).scaled(-2.0);
        let back2 = solve_laplacian_power(&lap2, -2.0, 2).unwrap();
        assert!(back2.rel_l2_error(&f).unwrap() < 1e-8);
    }

    #[test]
    fn zero_data_gives_zero() {
        let d = Domain2D::new(32).unwrap();
        let z = solve_laplacian_power(&Field2D::zeros(d), 3.0, 1).unwrap();
        assert_eq!(z.max_abs(), 0.0);
        assert!(solve_laplacian_power(&Field2D::zeros(d), 0.0, 1).is_err());
    }

    #[test]
    fn tikhonov_inverts_laplacian_symbol() {
        // Delta has symbol (i xi)^2 summed: sigma = xi1^2 + xi2^2, q = 2.
        let d = Domain2D::new(128).unwrap();
        let f = make_phantom(&Phantom::gaussian([0.0, 0.1], 0.15), &d).unwrap();
        let lap = laplacian_5pt(&f);
        let sigma = Polynomial::from_terms(2, [(vec![2, 0], 1.0), (vec![0, 2], 1.0)]).unwrap();
        let back = tikhonov_divide(&lap, &sigma, 1e-8).unwrap();
        assert!(back.rel_l2_error(&f).unwrap() < 0.02);
    }
}
