//! Uniform time grids on `[-t_max, t_max]`.

use crate::error::Error;
use crate::Result;

/// A uniform grid of `m >= 2` samples with both endpoints included.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    t_max: f64,
    m: usize,
}

impl TimeGrid {
    /// Symmetric grid of `m` samples on `[-t_max, t_max]`.
    pub fn symmetric(t_max: f64, m: usize) -> Result<Self> {
        if !(t_max > 0.0) || !t_max.is_finite() {
            return Err(Error::param("t_max", "must be a finite positive real"));
        }
        if m < 2 {
            return Err(Error::param("m", "need at least 2 samples"));
        }
        Ok(TimeGrid { t_max, m })
    }

    /// The canonical working grid: 1024 intervals on `[-2, 2]`, with 0 a
    /// grid point, resolving windowed phases up to the grid Nyquist rate
    /// `pi / dt ~ 804`.
    pub fn canonical() -> Self {
        TimeGrid { t_max: 2.0, m: 1025 }
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn dt(&self) -> f64 {
        2.0 * self.t_max / (self.m - 1) as f64
    }

    pub fn time(&self, i: usize) -> f64 {
        -self.t_max + self.dt() * i as f64
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.m).map(move |i| self.time(i))
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= -self.t_max - 1e-12 && t <= self.t_max + 1e-12
    }

    /// Reconstructs a grid from explicit sample times, requiring uniform
    /// symmetric spacing to 1e-12 relative.
    pub fn from_times(times: &[f64]) -> Result<Self> {
        if times.len() < 2 {
            return Err(Error::param("times", "need at least 2 samples"));
        }
        let t_max = *times.last().unwrap();
        if !(t_max > 0.0) || (times[0] + t_max).abs() > 1e-12 * t_max {
            return Err(Error::Malformed("time grid must be symmetric".into()));
        }
        let grid = TimeGrid { t_max, m: times.len() };
        let dt = grid.dt();
        for (i, &t) in times.iter().enumerate() {
            if (t - grid.time(i)).abs() > 1e-12 * t_max.max(1.0) {
                return Err(Error::Malformed(format!(
                    "time grid not uniform at sample {i}: {t} vs {}",
                    grid.time(i)
                )));
            }
        }
        let _ = dt;
        Ok(grid)
    }
}
