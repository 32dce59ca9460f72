//! Exact linear flow in coefficient space and slice-wise quadratic products.

use num_complex::Complex64;

use crate::field::SpaceTimeField;
use crate::grid::TimeGrid;
use crate::spectral::FourierState;

/// Whether a quadratic product keeps the state's mode set `|p| <= N` or
/// retains the full support `|p| <= 2N` of the convolution.
///
/// The fixed-point iteration needs a fixed space, so `Keep` is the default;
/// `Extend` serves single-application accuracy studies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Truncation {
    Keep,
    Extend,
}

/// Free flow `a(n) -> a(n) e^{-i n^2 t}`.
///
/// A mode-wise phase rotation: every `H^{s,p}` norm is preserved exactly,
/// and `evolve(., t1)` then `evolve(., t2)` equals `evolve(., t1 + t2)` up
/// to rounding in the phase accumulation.
pub fn evolve(f: &FourierState, t: f64) -> FourierState {
    let mut out = f.clone();
    for (n, c) in f.modes() {
        let phase = -((n * n) as f64) * t;
        out.set(n, c * Complex64::from_polar(1.0, phase));
    }
    out
}

/// Samples the free flow of `f` on a time grid.
pub fn sample_free_field(f: &FourierState, grid: TimeGrid) -> SpaceTimeField {
    let n_max = f.truncation();
    let coeffs: Vec<Complex64> = f.as_slice().to_vec();
    SpaceTimeField::from_fn(grid, n_max, f.period(), move |t| {
        coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let n = i as i64 - n_max;
                c * Complex64::from_polar(1.0, -((n * n) as f64) * t)
            })
            .collect()
    })
}

/// Convolution coefficients of `conj(u) * conj(v)` for one slice:
/// output mode `p` receives `sum_j conj(u_j) conj(v_{-j-p})`.
fn conj_product_slice(
    u: &[Complex64],
    v: &[Complex64],
    n_in: i64,
    out_max: i64,
) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); (2 * out_max + 1) as usize];
    for (ip, slot) in out.iter_mut().enumerate() {
        let p = ip as i64 - out_max;
        let mut acc = Complex64::new(0.0, 0.0);
        // need |j| <= n_in and |-j-p| <= n_in
        let lo = (-n_in).max(-p - n_in);
        let hi = n_in.min(-p + n_in);
        for j in lo..=hi {
            let a = u[(j + n_in) as usize];
            let b = v[(-j - p + n_in) as usize];
            acc += a.conj() * b.conj();
        }
        *slot = acc;
    }
    out
}

/// Slice-wise coefficients of `conj(u)^2`.
pub fn conjugate_square(u: &SpaceTimeField, trunc: Truncation) -> SpaceTimeField {
    let n_in = u.n_max();
    let out_max = match trunc {
        Truncation::Keep => n_in,
        Truncation::Extend => 2 * n_in,
    };
    let m = u.grid().len();
    let mut out = SpaceTimeField::zeros(u.grid().clone(), out_max, u.period());
    for j in 0..m {
        let row = conj_product_slice(u.slice(j), u.slice(j), n_in, out_max);
        out.slice_mut(j).copy_from_slice(&row);
    }
    out
}

/// Slice-wise coefficients of `conj(u) * conj(v)` for two fields on the
/// same grid and truncation.
pub fn conjugate_product(
    u: &SpaceTimeField,
    v: &SpaceTimeField,
    trunc: Truncation,
) -> crate::Result<SpaceTimeField> {
    u.check_compatible(v)?;
    let n_in = u.n_max();
    let out_max = match trunc {
        Truncation::Keep => n_in,
        Truncation::Extend => 2 * n_in,
    };
    let m = u.grid().len();
    let mut out = SpaceTimeField::zeros(u.grid().clone(), out_max, u.period());
    for j in 0..m {
        let row = conj_product_slice(u.slice(j), v.slice(j), n_in, out_max);
        out.slice_mut(j).copy_from_slice(&row);
    }
    Ok(out)
}
