//! Space-time fields: mode coefficients sampled on a uniform time grid.

use std::f64::consts::PI;
use std::io::{Read, Write};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::Error;
use crate::grid::TimeGrid;
use crate::Result;

/// Coefficient vectors on `|n| <= N` for each time of a uniform grid.
/// Every slice shares the truncation radius and the torus period.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeField {
    grid: TimeGrid,
    n_max: i64,
    period: f64,
    /// Slice-major dense storage: `data[j * w + (n + n_max)]` is mode `n`
    /// at time `grid.time(j)`, with `w = 2 * n_max + 1`.
    data: Vec<Complex64>,
}

impl SpaceTimeField {
    pub fn zeros(grid: TimeGrid, n_max: i64, period: f64) -> Self {
        let w = (2 * n_max + 1) as usize;
        let m = grid.len();
        SpaceTimeField {
            grid,
            n_max,
            period,
            data: vec![Complex64::new(0.0, 0.0); w * m],
        }
    }

    /// Builds a field by evaluating `slice_fn(t)` on every grid time in
    /// parallel. The closure must return a dense vector over `-N ..= N`.
    pub fn from_fn<F>(grid: TimeGrid, n_max: i64, period: f64, slice_fn: F) -> Self
    where
        F: Fn(f64) -> Vec<Complex64> + Sync,
    {
        let w = (2 * n_max + 1) as usize;
        let data: Vec<Complex64> = (0..grid.len())
            .into_par_iter()
            .flat_map_iter(|j| {
                let row = slice_fn(grid.time(j));
                debug_assert_eq!(row.len(), w);
                row
            })
            .collect();
        SpaceTimeField { grid, n_max, period, data }
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn n_max(&self) -> i64 {
        self.n_max
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn width(&self) -> usize {
        (2 * self.n_max + 1) as usize
    }

    pub fn slice(&self, j: usize) -> &[Complex64] {
        let w = self.width();
        &self.data[j * w..(j + 1) * w]
    }

    pub fn slice_mut(&mut self, j: usize) -> &mut [Complex64] {
        let w = self.width();
        &mut self.data[j * w..(j + 1) * w]
    }

    pub fn coeff(&self, j: usize, n: i64) -> Complex64 {
        if n.abs() > self.n_max {
            Complex64::new(0.0, 0.0)
        } else {
            self.slice(j)[(n + self.n_max) as usize]
        }
    }

    /// Time samples of a single mode, in grid order.
    pub fn mode_series(&self, n: i64) -> Vec<Complex64> {
        (0..self.grid.len()).map(|j| self.coeff(j, n)).collect()
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        for v in &mut out.data {
            *v *= c;
        }
        out
    }

    pub fn add(&self, other: &SpaceTimeField) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SpaceTimeField) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        Ok(out)
    }

    pub fn check_compatible(&self, other: &SpaceTimeField) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch("time grids differ".into()));
        }
        if self.n_max != other.n_max {
            return Err(Error::GridMismatch(format!(
                "truncation radii differ: {} vs {}",
                self.n_max, other.n_max
            )));
        }
        if (self.period - other.period).abs() > 1e-12 * self.period {
            return Err(Error::GridMismatch("torus periods differ".into()));
        }
        Ok(())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

// ---------------------------------------------------------------------------
// JSON form: metadata header plus per-slice triplet arrays.
// ---------------------------------------------------------------------------

#[derive(serde::Serialize, serde::Deserialize)]
struct FieldRepr {
    version: u32,
    #[serde(rename = "N")]
    n: i64,
    period: f64,
    times: Vec<f64>,
    /// One array of `[mode, re, im]` triplets per time sample, modes ascending.
    slices: Vec<Vec<(i64, f64, f64)>>,
}

impl serde::Serialize for SpaceTimeField {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = FieldRepr {
            version: 1,
            n: self.n_max,
            period: self.period,
            times: self.grid.times().collect(),
            slices: (0..self.grid.len())
                .map(|j| {
                    self.slice(j)
                        .iter()
                        .enumerate()
                        .map(|(i, c)| (i as i64 - self.n_max, c.re, c.im))
                        .collect()
                })
                .collect(),
        };
        repr.serialize(ser)
    }
}

impl<'de> serde::Deserialize<'de> for SpaceTimeField {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let repr = FieldRepr::deserialize(de)?;
        if repr.version != 1 {
            return Err(D::Error::custom(format!("unsupported field version {}", repr.version)));
        }
        if repr.n < 0 || repr.n > (1 << 24) {
            return Err(D::Error::custom("truncation radius out of range"));
        }
        if !(repr.period > 0.0) || !repr.period.is_finite() {
            return Err(D::Error::custom("period must be a finite positive real"));
        }
        let grid = TimeGrid::from_times(&repr.times).map_err(D::Error::custom)?;
        if repr.slices.len() != grid.len() {
            return Err(D::Error::custom("slice count does not match time grid"));
        }
        let mut field = SpaceTimeField::zeros(grid, repr.n, repr.period);
        for (j, sl) in repr.slices.iter().enumerate() {
            let mut last: Option<i64> = None;
            for &(n, re, im) in sl {
                if n.abs() > repr.n {
                    return Err(D::Error::custom(format!("mode {n} exceeds |n| <= {}", repr.n)));
                }
                if let Some(prev) = last {
                    if n <= prev {
                        return Err(D::Error::custom("slice modes must be strictly sorted"));
                    }
                }
                if !re.is_finite() || !im.is_finite() {
                    return Err(D::Error::custom("non-finite amplitude"));
                }
                last = Some(n);
                field.slice_mut(j)[(n + repr.n) as usize] = Complex64::new(re, im);
            }
        }
        Ok(field)
    }
}

// ---------------------------------------------------------------------------
// Binary sidecar for large runs. The first line is an ASCII descriptor that
// documents the layout; everything after the newline is little-endian.
// ---------------------------------------------------------------------------

const SIDECAR_HEADER: &str = "nlslab-field v1 le: [n_max i64][m u64][t_max f64][period f64] then m*(2*n_max+1) f64 triplets (mode,re,im), slice-major, modes ascending";

/// Writes the field in the binary sidecar layout.
pub fn write_sidecar<W: Write>(field: &SpaceTimeField, mut w: W) -> Result<()> {
    w.write_all(SIDECAR_HEADER.as_bytes())?;
    w.write_all(b"\n")?;
    w.write_i64::<LittleEndian>(field.n_max)?;
    w.write_u64::<LittleEndian>(field.grid.len() as u64)?;
    w.write_f64::<LittleEndian>(field.grid.t_max())?;
    w.write_f64::<LittleEndian>(field.period)?;
    for j in 0..field.grid.len() {
        for (i, c) in field.slice(j).iter().enumerate() {
            w.write_f64::<LittleEndian>((i as i64 - field.n_max) as f64)?;
            w.write_f64::<LittleEndian>(c.re)?;
            w.write_f64::<LittleEndian>(c.im)?;
        }
    }
    Ok(())
}

/// Decodes a binary sidecar, validating the descriptor line, the header
/// fields, the payload size, and every triplet.
pub fn read_sidecar(bytes: &[u8]) -> Result<SpaceTimeField> {
    let nl = bytes
        .iter()
        .take(512)
        .position(|&b| b == b'\n')
        .ok_or_else(|| Error::Malformed("missing descriptor line".into()))?;
    let line = std::str::from_utf8(&bytes[..nl])
        .map_err(|_| Error::Malformed("descriptor line is not UTF-8".into()))?;
    if !line.starts_with("nlslab-field v1 le:") {
        return Err(Error::Malformed("unrecognized sidecar descriptor".into()));
    }
    let mut r = &bytes[nl + 1..];
    let n_max = r.read_i64::<LittleEndian>()?;
    let m = r.read_u64::<LittleEndian>()?;
    let t_max = r.read_f64::<LittleEndian>()?;
    let period = r.read_f64::<LittleEndian>()?;
    if !(0..=(1 << 24)).contains(&n_max) {
        return Err(Error::Malformed(format!("truncation radius {n_max} out of range")));
    }
    if !(2..=(1 << 32)).contains(&m) {
        return Err(Error::Malformed(format!("slice count {m} out of range")));
    }
    if !(period > 0.0) || !period.is_finite() || !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::Malformed("non-finite or non-positive header reals".into()));
    }
    let w = 2 * n_max as u64 + 1;
    let need = m
        .checked_mul(w)
        .and_then(|v| v.checked_mul(24))
        .ok_or_else(|| Error::Malformed("payload size overflow".into()))?;
    if (r.len() as u64) < need {
        return Err(Error::Malformed(format!(
            "payload truncated: need {need} bytes, have {}",
            r.len()
        )));
    }
    let grid = TimeGrid::symmetric(t_max, m as usize)?;
    let mut field = SpaceTimeField::zeros(grid, n_max, period);
    for j in 0..m as usize {
        for i in 0..w as usize {
            let mode = r.read_f64::<LittleEndian>()?;
            let re = r.read_f64::<LittleEndian>()?;
            let im = r.read_f64::<LittleEndian>()?;
            if mode != (i as i64 - n_max) as f64 {
                return Err(Error::Malformed(format!(
                    "triplet mode {mode} out of order at slice {j}"
                )));
            }
            if !re.is_finite() || !im.is_finite() {
                return Err(Error::Malformed("non-finite amplitude in payload".into()));
            }
            field.slice_mut(j)[i] = Complex64::new(re, im);
        }
    }
    Ok(field)
}

/// Default torus period.
pub fn standard_period() -> f64 {
    2.0 * PI
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propagator::sample_free_field;
    use crate::spectral::random_data;

    fn sample_field() -> SpaceTimeField {
        let f = random_data(-0.3, 2.0, 6, 1).unwrap();
        sample_free_field(&f, TimeGrid::symmetric(1.0, 9).unwrap())
    }

    #[test]
    fn json_round_trip() {
        let field = sample_field();
        let text = serde_json::to_string(&field).unwrap();
        let back: SpaceTimeField = serde_json::from_str(&text).unwrap();
        assert_eq!(field, back);
    }

    #[test]
    fn sidecar_round_trip() {
        let field = sample_field();
        let mut buf = Vec::new();
        write_sidecar(&field, &mut buf).unwrap();
        let back = read_sidecar(&buf).unwrap();
        assert_eq!(field, back);
    }

    #[test]
    fn sidecar_rejects_truncated_and_garbage() {
        let field = sample_field();
        let mut buf = Vec::new();
        write_sidecar(&field, &mut buf).unwrap();
        assert!(read_sidecar(&buf[..buf.len() - 7]).is_err());
        assert!(read_sidecar(b"not a sidecar at all").is_err());
        let mut corrupt = buf.clone();
        corrupt[0] = b'X'; // descriptor no longer matches
        assert!(read_sidecar(&corrupt).is_err());
    }
}
