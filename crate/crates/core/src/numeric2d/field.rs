use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Smallest accepted grid resolution.
pub const MIN_N: usize = 16;

/// Open square `(-L, L)^2` sampled on an `N x N` cell-centered grid with
/// spacing `h = 2L/N`; cell `j` has center `-L + (j + 1/2) h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain2D {
    half_width: f64,
    n: usize,
}

impl Domain2D {
    pub fn new(n: usize) -> Result<Self> {
        Self::with_half_width(n, 1.0)
    }

    pub fn with_half_width(n: usize, half_width: f64) -> Result<Self> {
        if n < MIN_N {
            return Err(Error::domain(format!(
                "grid resolution must be at least {MIN_N}, got {n}"
            )));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::domain("domain half-width must be positive"));
        }
        Ok(Domain2D { half_width, n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn h(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    /// Center coordinate of cell `j` along either axis.
    pub fn coord(&self, j: usize) -> f64 {
        -self.half_width + (j as f64 + 0.5) * self.h()
    }
}

/// Samples on a [`Domain2D`], row-major: `samples[i * N + j]` is the value
/// at `(x1, x2) = (coord(j), coord(i))`.
#[derive(Debug, Clone, PartialEq)]
pub struct Field2D {
    domain: Domain2D,
    samples: Vec<f64>,
}

impl Field2D {
    pub fn new(domain: Domain2D, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != domain.n * domain.n {
            return Err(Error::domain(format!(
                "field needs {} samples, got {}",
                domain.n * domain.n,
                samples.len()
            )));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("field contains non-finite values"));
        }
        Ok(Field2D { domain, samples })
    }

    pub fn zeros(domain: Domain2D) -> Self {
        Field2D {
            domain,
            samples: vec![0.0; domain.n * domain.n],
        }
    }

    pub fn from_fn(domain: Domain2D, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let n = domain.n;
        let mut samples = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                samples.push(f(domain.coord(j), domain.coord(i)));
            }
        }
        Self::new(domain, samples)
    }

    pub(crate) fn from_raw(domain: Domain2D, samples: Vec<f64>) -> Self {
        debug_assert_eq!(samples.len(), domain.n * domain.n);
        Field2D { domain, samples }
    }

    pub fn domain(&self) -> &Domain2D {
        &self.domain
    }

    pub fn n(&self) -> usize {
        self.domain.n
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Value at row `i` (x2 index) and column `j` (x1 index).
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.samples[i * self.domain.n + j]
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Discrete `L^2` norm `sqrt(h^2 sum f^2)`, summed in storage order.
    pub fn norm_l2(&self) -> f64 {
        let h = self.domain.h();
        (h * h * self.samples.iter().map(|v| v * v).sum::<f64>()).sqrt()
    }

    /// `||self - other|| / ||other||`.
    pub fn rel_l2_error(&self, reference: &Field2D) -> Result<f64> {
        let diff = self.sub(reference)?;
        Ok(diff.norm_l2() / reference.norm_l2())
    }

    fn check_same(&self, other: &Field2D) -> Result<()> {
        if self.domain != other.domain {
            return Err(Error::domain("fields live on different grids"));
        }
        Ok(())
    }

    pub fn add(&self, other: &Field2D) -> Result<Field2D> {
        self.check_same(other)?;
        let s = self.samples.iter().zip(&other.samples).map(|(a, b)| a + b).collect();
        Ok(Field2D::from_raw(self.domain, s))
    }

    pub fn sub(&self, other: &Field2D) -> Result<Field2D> {
        self.check_same(other)?;
        let s = self.samples.iter().zip(&other.samples).map(|(a, b)| a - b).collect();
        Ok(Field2D::from_raw(self.domain, s))
    }

    pub fn scaled(&self, k: f64) -> Field2D {
        Field2D::from_raw(self.domain, self.samples.iter().map(|v| v * k).collect())
    }

    /// `x -> -x`.
    pub fn point_reflected(&self) -> Field2D {
        let mut s = self.samples.clone();
        s.reverse();
        Field2D::from_raw(self.domain, s)
    }

    /// Binary form: a 16-byte header (`b"SFLD"`, `u32` N, `u32` reserved,
    /// 4 zero bytes of padding) followed by `N*N` little-endian `f64`
    /// samples in row-major order.
    pub fn write_binary(&self, mut w: impl Write) -> Result<()> {
        w.write_all(b"SFLD")?;
        w.write_all(&(self.domain.n as u32).to_le_bytes())?;
        w.write_all(&0u32.to_le_bytes())?;
        w.write_all(&[0u8; 4])?;
        for v in &self.samples {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    /// Reads the binary form onto `(-L, L)^2`.
    pub fn read_binary(mut r: impl Read, half_width: f64) -> Result<Field2D> {
        let mut header = [0u8; 16];
        r.read_exact(&mut header)?;
        if &header[..4] != b"SFLD" {
            return Err(Error::parse("not a field file (bad magic)"));
        }
        let n = u32::from_le_bytes(header[4..8].try_into().expect("4 bytes")) as usize;
        let domain = Domain2D::with_half_width(n, half_width)?;
        let mut buf = vec![0u8; n * n * 8];
        r.read_exact(&mut buf)?;
        let samples = buf
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect();
        Field2D::new(domain, samples)
    }

    /// One grid row per line, comma separated, x2 index increasing.
    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        let n = self.domain.n;
        for i in 0..n {
            let line: Vec<String> = (0..n).map(|j| format!("{:e}", self.get(i, j))).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }

    /// Binary 8-bit PGM, min-max scaled, top row = largest x2.
    pub fn write_pgm(&self, mut w: impl Write) -> Result<()> {
        let n = self.domain.n;
        let lo = self.samples.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let span = if hi > lo { hi - lo } else { 1.0 };
        write!(w, "P5\n{n} {n}\n255\n")?;
        let mut bytes = Vec::with_capacity(n * n);
        for i in (0..n).rev() {
            for j in 0..n {
                bytes.push(((self.get(i, j) - lo) / span * 255.0).round() as u8);
            }
        }
        w.write_all(&bytes)?;
        Ok(())
    }

    /// Writes by extension: `.csv`, `.pgm`, anything else binary.
    pub fn save(&self, path: &Path) -> Result<()> {
        let file = std::io::BufWriter::new(std::fs::File::create(path)?);
        match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => self.write_csv(file),
            Some("pgm") => self.write_pgm(file),
            _ => self.write_binary(file),
        }
    }

    pub fn load(path: &Path, half_width: f64) -> Result<Field2D> {
        Self::read_binary(std::io::BufReader::new(std::fs::File::open(path)?), half_width)
    }
}
