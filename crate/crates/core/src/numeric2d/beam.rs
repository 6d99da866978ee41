use rayon::prelude::*;

use super::field::{Domain2D, Field2D};
use crate::error::{Error, Result};

/// Allowed deviation of a direction from unit length.
pub const UNIT_TOL: f64 = 1e-12;

pub(crate) fn check_unit(u: [f64; 2]) -> Result<()> {
    let norm = (u[0] * u[0] + u[1] * u[1]).sqrt();
    if (norm - 1.0).abs() > UNIT_TOL {
        return Err(Error::domain(format!(
            "direction ({}, {}) is not a unit vector",
            u[0], u[1]
        )));
    }
    Ok(())
}

/// Bilinear interpolation in continuous index coordinates, clamping to the
/// outermost cell centers.
#[inline]
fn bilinear(f: &[f64], n: usize, fi: f64, fj: f64) -> f64 {
    let top = (n - 1) as f64;
    let fi = fi.clamp(0.0, top);
    let fj = fj.clamp(0.0, top);
    let i0 = (fi.floor() as usize).min(n - 2);
    let j0 = (fj.floor() as usize).min(n - 2);
    let (ti, tj) = (fi - i0 as f64, fj - j0 as f64);
    let a = f[i0 * n + j0];
    let b = f[i0 * n + j0 + 1];
    let c = f[(i0 + 1) * n + j0];
    let d = f[(i0 + 1) * n + j0 + 1];
    (1.0 - ti) * ((1.0 - tj) * a + tj * b) + ti * ((1.0 - tj) * c + tj * d)
}

/// Parameter `T > 0` at which `x - T u` leaves the square.
fn exit_parameter(dom: &Domain2D, x: [f64; 2], u: [f64; 2]) -> f64 {
    let l = dom.half_width();
    let mut t = f64::INFINITY;
    for k in 0..2 {
        if u[k] > 0.0 {
            t = t.min((x[k] + l) / u[k]);
        } else if u[k] < 0.0 {
            t = t.min((x[k] - l) / u[k]);
        }
    }
    t
}

/// Index box (rows, cols) outside of which the interpolant is exactly zero.
fn support_box(f: &Field2D) -> Option<[(f64, f64); 2]> {
    let n = f.n();
    let (mut imin, mut imax, mut jmin, mut jmax) = (usize::MAX, 0, usize::MAX, 0);
    for i in 0..n {
        for j in 0..n {
            if f.get(i, j) != 0.0 {
                imin = imin.min(i);
                imax = imax.max(i);
                jmin = jmin.min(j);
                jmax = jmax.max(j);
            }
        }
    }
    if imin == usize::MAX {
        return None;
    }
    // A stencil touches a nonzero cell only within one index of the box.
    Some([
        (imin as f64 - 1.0, imax as f64 + 1.0),
        (jmin as f64 - 1.0, jmax as f64 + 1.0),
    ])
}

/// Divergent beam transform `X_u f(x) = int_{-T}^0 f(x + t u) dt`, the
/// integral along the ray from `x` in direction `-u` up to the boundary.
///
/// Composite trapezoid rule with `K = ceil(2T/h)` equal steps and bilinear
/// interpolation of the samples.
pub fn beam_transform(f: &Field2D, u: [f64; 2]) -> Result<Field2D> {
    check_unit(u)?;
    let dom = *f.domain();
    let n = dom.n();
    let h = dom.h();
    let l = dom.half_width();
    let data = f.samples();
    let Some(sbox) = support_box(f) else {
        return Ok(Field2D::zeros(dom));
    };
    let mut out = vec![0.0; n * n];
    out.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        let x2 = dom.coord(i);
        for (j, cell) in row.iter_mut().enumerate() {
            let x1 = dom.coord(j);
            let t_exit = exit_parameter(&dom, [x1, x2], u);
            let k_steps = ((t_exit / (0.5 * h) - 1e-9).ceil() as usize).max(1);
            let dt = t_exit / k_steps as f64;
            // Index coordinates along the ray: (fi, fj) - k * dt * (u2, u1) / h.
            let fi0 = (x2 + l) / h - 0.5;
            let fj0 = (x1 + l) / h - 0.5;
            let (di, dj) = (-dt * u[1] / h, -dt * u[0] / h);
            let (mut klo, mut khi) = (0.0f64, k_steps as f64);
            for (start, step, (lo, hi)) in [(fi0, di, sbox[0]), (fj0, dj, sbox[1])] {
                if step == 0.0 {
                    if start < lo || start > hi {
                        khi = -1.0;
                    }
                } else {
                    let (a, b) = ((lo - start) / step, (hi - start) / step);
                    klo = klo.max(a.min(b));
                    khi = khi.min(a.max(b));
                }
            }
            if khi < klo {
                continue;
            }
            let k0 = (klo.floor().max(0.0)) as usize;
            let k1 = (khi.ceil() as usize).min(k_steps);
            let mut acc = 0.0;
            for k in k0..=k1 {
                let w = if k == 0 || k == k_steps { 0.5 } else { 1.0 };
                acc += w * bilinear(data, n, fi0 + k as f64 * di, fj0 + k as f64 * dj);
            }
            *cell = acc * dt;
        }
    });
    Ok(Field2D::from_raw(dom, out))
}

/// Reference implementation of [`beam_transform`] without the support
/// restriction.
#[doc(hidden)]
pub fn beam_transform_naive(f: &Field2D, u: [f64; 2]) -> Result<Field2D> {
    check_unit(u)?;
    let dom = *f.domain();
    let (n, h, l) = (dom.n(), dom.h(), dom.half_width());
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let (x1, x2) = (dom.coord(j), dom.coord(i));
            let t_exit = exit_parameter(&dom, [x1, x2], u);
            let k_steps = ((t_exit / (0.5 * h) - 1e-9).ceil() as usize).max(1);
            let dt = t_exit / k_steps as f64;
            let fi0 = (x2 + l) / h - 0.5;
            let fj0 = (x1 + l) / h - 0.5;
            let (di, dj) = (-dt * u[1] / h, -dt * u[0] / h);
            let mut acc = 0.0;
            for k in 0..=k_steps {
                let w = if k == 0 || k == k_steps { 0.5 } else { 1.0 };
                acc += w * bilinear(f.samples(), n, fi0 + k as f64 * di, fj0 + k as f64 * dj);
            }
            out[i * n + j] = acc * dt;
        }
    }
    Ok(Field2D::from_raw(dom, out))
}

/// Derivative along one grid axis: central differences inside, second-order
/// one-sided stencils on the first and last cells.
fn axis_derivative(f: &Field2D, along_x1: bool) -> Vec<f64> {
    let n = f.n();
    let h = f.domain().h();
    let at = |i: usize, k: usize| if along_x1 { f.get(i, k) } else { f.get(k, i) };
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let d = if k == 0 {
                (-3.0 * at(i, 0) + 4.0 * at(i, 1) - at(i, 2)) / (2.0 * h)
            } else if k == n - 1 {
                (3.0 * at(i, n - 1) - 4.0 * at(i, n - 2) + at(i, n - 3)) / (2.0 * h)
            } else {
                (at(i, k + 1) - at(i, k - 1)) / (2.0 * h)
            };
            if along_x1 {
                out[i * n + k] = d;
            } else {
                out[k * n + i] = d;
            }
        }
    }
    out
}

/// `D_u f = u . grad f`.
pub fn directional_derivative(f: &Field2D, u: [f64; 2]) -> Result<Field2D> {
    check_unit(u)?;
    let mut out = vec![0.0; f.n() * f.n()];
    if u[0] != 0.0 {
        for (o, d) in out.iter_mut().zip(axis_derivative(f, true)) {
            *o += u[0] * d;
        }
    }
    if u[1] != 0.0 {
        for (o, d) in out.iter_mut().zip(axis_derivative(f, false)) {
            *o += u[1] * d;
        }
    }
    Ok(Field2D::from_raw(*f.domain(), out))
}
