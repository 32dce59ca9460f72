//! Phase-exact quadrature for integrals of sampled amplitudes against
//! `e^{i w t}`.
//!
//! The Duhamel integrands are slice-sampled amplitudes times a known
//! oscillation `e^{i p^2 t}`. Rules here integrate a low-order amplitude
//! interpolant against the exact exponential, so the step size is set by
//! the amplitude, not by `p^2`. A plain trapezoid rule on the full
//! integrand is kept as the contrast case; its error constant grows like
//! `w^2`.

use num_complex::Complex64;

use crate::error::Error;
use crate::grid::TimeGrid;
use crate::Result;

/// Quadrature rule for [`integrate_mode`] and the Duhamel operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureRule {
    /// Trapezoid on the full oscillatory integrand. Order 2, error
    /// constant proportional to `w^2`.
    Trapezoid,
    /// Composite Gauss-Legendre with `k` nodes per grid interval applied
    /// to a linearly interpolated amplitude times the exact phase. Order 2
    /// (interpolation-limited), phase handled well up to `w h ~ k`.
    GaussLegendre(u32),
    /// Linear amplitude interpolant integrated against exact oscillatory
    /// moments. Order 2, uniformly in `w`.
    FilonTrapezoid,
    /// Quadratic amplitude interpolant (averaged three-point stencils)
    /// against exact oscillatory moments. Order 4, uniformly in `w`.
    /// The default.
    FilonSimpson,
}

impl Default for QuadratureRule {
    fn default() -> Self {
        QuadratureRule::FilonSimpson
    }
}

impl QuadratureRule {
    /// Nominal convergence order in the number of grid intervals.
    pub fn nominal_order(&self) -> f64 {
        match self {
            QuadratureRule::Trapezoid
            | QuadratureRule::GaussLegendre(_)
            | QuadratureRule::FilonTrapezoid => 2.0,
            QuadratureRule::FilonSimpson => 4.0,
        }
    }
}

/// Moments of `{1, (t - tc), (t - tc)^2} e^{i w t}` over `[t0, t0 + h]`,
/// `tc` the midpoint. Stable for all `w`: the half-angle forms avoid the
/// `e^{iwb} - e^{iwa}` cancellation and a series takes over for small
/// `|w h / 2|`.
pub fn osc_moments(w: f64, t0: f64, h: f64) -> (Complex64, Complex64, Complex64) {
    let tc = t0 + 0.5 * h;
    let u = 0.5 * w * h;
    let (j0, j1, j2);
    if u.abs() < 1e-2 {
        let u2 = u * u;
        // J0 = h sinc(u); J1 = 2i (sin u - u cos u)/w^2; J2 from the
        // bracket u^2 sin u + 2u cos u - 2 sin u = u^3/3 - u^5/10 + u^7/168.
        j0 = Complex64::new(h * (1.0 - u2 / 6.0 + u2 * u2 / 120.0 - u2 * u2 * u2 / 5040.0), 0.0);
        if w == 0.0 {
            j1 = Complex64::new(0.0, 0.0);
            j2 = Complex64::new(h * h * h / 12.0, 0.0);
        } else {
            let u3 = u2 * u;
            let s1 = u3 / 3.0 - u3 * u2 / 30.0 + u3 * u2 * u2 / 840.0;
            j1 = Complex64::new(0.0, 2.0 * s1 / (w * w));
            let s2 = u3 / 3.0 - u3 * u2 / 10.0 + u3 * u2 * u2 / 168.0;
            j2 = Complex64::new(2.0 * s2 / (w * w * w), 0.0);
        }
    } else {
        let (s, c) = u.sin_cos();
        j0 = Complex64::new(2.0 * s / w, 0.0);
        j1 = Complex64::new(0.0, 2.0 * (s - u * c) / (w * w));
        j2 = Complex64::new(2.0 * (u * u * s + 2.0 * u * c - 2.0 * s) / (w * w * w), 0.0);
    }
    let ph = Complex64::from_polar(1.0, w * tc);
    (ph * j0, ph * j1, ph * j2)
}

/// Quadratic `q0 + q1 (t - tr) + q2 (t - tr)^2` integrated against
/// `e^{i w t}` over `[a, b]`.
fn quad_piece(w: f64, a: f64, b: f64, tr: f64, q0: Complex64, q1: Complex64, q2: Complex64) -> Complex64 {
    let tc = 0.5 * (a + b);
    let d = tc - tr;
    let c0 = q0 + q1 * d + q2 * (d * d);
    let c1 = q1 + q2 * (2.0 * d);
    let c2 = q2;
    let (m0, m1, m2) = osc_moments(w, a, b - a);
    c0 * m0 + c1 * m1 + c2 * m2
}

/// Three-point quadratic through `(t_j, g_j)`, `j = i, i+1, i+2`,
/// referenced at `t_{i+1}`.
fn stencil(g: &[Complex64], i: usize, h: f64) -> (Complex64, Complex64, Complex64) {
    let (g0, g1, g2) = (g[i], g[i + 1], g[i + 2]);
    let c0 = g1;
    let c1 = (g2 - g0) / (2.0 * h);
    let c2 = (g2 - 2.0 * g1 + g0) / (2.0 * h * h);
    (c0, c1, c2)
}

fn gl_nodes(k: u32) -> (Vec<f64>, Vec<f64>) {
    // Nodes and weights on [-1, 1] for small k; enough for a per-interval
    // composite rule.
    match k {
        1 => (vec![0.0], vec![2.0]),
        2 => {
            let a = 1.0 / 3f64.sqrt();
            (vec![-a, a], vec![1.0, 1.0])
        }
        3 => {
            let a = (3.0f64 / 5.0).sqrt();
            (vec![-a, 0.0, a], vec![5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0])
        }
        4 => {
            let a = (3.0 / 7.0 - 2.0 / 7.0 * (6.0f64 / 5.0).sqrt()).sqrt();
            let b = (3.0 / 7.0 + 2.0 / 7.0 * (6.0f64 / 5.0).sqrt()).sqrt();
            let wa = (18.0 + 30f64.sqrt()) / 36.0;
            let wb = (18.0 - 30f64.sqrt()) / 36.0;
            (vec![-b, -a, a, b], vec![wb, wa, wa, wb])
        }
        _ => {
            let a = 1.0 / 3.0 * (5.0 - 2.0 * (10.0f64 / 7.0).sqrt()).sqrt();
            let b = 1.0 / 3.0 * (5.0 + 2.0 * (10.0f64 / 7.0).sqrt()).sqrt();
            let wa = (322.0 + 13.0 * 70f64.sqrt()) / 900.0;
            let wb = (322.0 - 13.0 * 70f64.sqrt()) / 900.0;
            (vec![-b, -a, 0.0, a, b], vec![wb, wa, 128.0 / 225.0, wa, wb])
        }
    }
}

/// Integral of the sampled amplitude against `e^{i w t}` over one grid
/// interval `[t_i, t_{i+1}]`, by the selected rule.
fn interval_integral(
    g: &[Complex64],
    grid: &TimeGrid,
    i: usize,
    w: f64,
    rule: QuadratureRule,
) -> Complex64 {
    let h = grid.dt();
    let t_i = grid.time(i);
    match rule {
        QuadratureRule::Trapezoid => {
            let fa = g[i] * Complex64::from_polar(1.0, w * t_i);
            let fb = g[i + 1] * Complex64::from_polar(1.0, w * (t_i + h));
            (fa + fb) * (0.5 * h)
        }
        QuadratureRule::GaussLegendre(k) => {
            let (xs, ws) = gl_nodes(k.clamp(1, 5));
            let mut acc = Complex64::new(0.0, 0.0);
            for (&x, &wt) in xs.iter().zip(&ws) {
                let t = t_i + 0.5 * h * (x + 1.0);
                let frac = (t - t_i) / h;
                let amp = g[i] * (1.0 - frac) + g[i + 1] * frac;
                acc += amp * Complex64::from_polar(1.0, w * t) * wt;
            }
            acc * (0.5 * h)
        }
        QuadratureRule::FilonTrapezoid => {
            let c0 = (g[i] + g[i + 1]) * 0.5;
            let c1 = (g[i + 1] - g[i]) / h;
            let (m0, m1, _) = osc_moments(w, t_i, h);
            c0 * m0 + c1 * m1
        }
        QuadratureRule::FilonSimpson => {
            // Average the two three-point stencils covering this interval;
            // the leading interpolation errors cancel, leaving a composite
            // fourth-order rule that also yields per-interval values for
            // cumulative integration.
            let m = g.len();
            let left = if i >= 1 {
                let (c0, c1, c2) = stencil(g, i - 1, h);
                Some(quad_piece(w, t_i, t_i + h, grid.time(i), c0, c1, c2))
            } else {
                None
            };
            let right = if i + 2 < m {
                let (c0, c1, c2) = stencil(g, i, h);
                Some(quad_piece(w, t_i, t_i + h, grid.time(i + 1), c0, c1, c2))
            } else {
                None
            };
            match (left, right) {
                (Some(a), Some(b)) => (a + b) * 0.5,
                (Some(a), None) => a,
                (None, Some(b)) => b,
                (None, None) => {
                    // two-sample grid: fall back to the linear interpolant
                    let c0 = (g[i] + g[i + 1]) * 0.5;
                    let c1 = (g[i + 1] - g[i]) / h;
                    let (m0, m1, _) = osc_moments(w, t_i, h);
                    c0 * m0 + c1 * m1
                }
            }
        }
    }
}

/// Integral over a partial piece `[a, b]` inside grid interval `i`,
/// using the quadratic through the three nearest samples (linear for the
/// non-Filon rules).
fn partial_integral(
    g: &[Complex64],
    grid: &TimeGrid,
    i: usize,
    a: f64,
    b: f64,
    w: f64,
    rule: QuadratureRule,
) -> Complex64 {
    if b <= a {
        return Complex64::new(0.0, 0.0);
    }
    let h = grid.dt();
    match rule {
        QuadratureRule::FilonSimpson if g.len() >= 3 => {
            let m = g.len();
            let i0 = i.saturating_sub(1).min(m - 3);
            let (c0, c1, c2) = stencil(g, i0, h);
            quad_piece(w, a, b, grid.time(i0 + 1), c0, c1, c2)
        }
        _ => {
            let t_i = grid.time(i);
            let fa = g[i] + (g[i + 1] - g[i]) * ((a - t_i) / h);
            let fb = g[i] + (g[i + 1] - g[i]) * ((b - t_i) / h);
            match rule {
                QuadratureRule::Trapezoid => {
                    (fa * Complex64::from_polar(1.0, w * a) + fb * Complex64::from_polar(1.0, w * b))
                        * (0.5 * (b - a))
                }
                _ => {
                    let c0 = (fa + fb) * 0.5;
                    let c1 = (fb - fa) / (b - a);
                    let (m0, m1, _) = osc_moments(w, a, b - a);
                    c0 * m0 + c1 * m1
                }
            }
        }
    }
}

/// `int_0^t g(u) e^{i w u} du` for an amplitude sampled on `grid`.
///
/// `t` may be negative; it must lie inside the grid, and so must 0.
pub fn integrate_mode(
    g: &[Complex64],
    grid: &TimeGrid,
    w: f64,
    t: f64,
    rule: QuadratureRule,
) -> Result<Complex64> {
    if g.len() != grid.len() {
        return Err(Error::GridMismatch(format!(
            "amplitude has {} samples, grid has {}",
            g.len(),
            grid.len()
        )));
    }
    if !grid.contains(t) {
        return Err(Error::OutOfRange { t, lo: -grid.t_max(), hi: grid.t_max() });
    }
    let (a, b, sign) = if t >= 0.0 { (0.0, t, 1.0) } else { (t, 0.0, -1.0) };
    let h = grid.dt();
    let pos = |x: f64| (x + grid.t_max()) / h;
    let i_lo = pos(a).ceil() as usize;
    let i_lo = if (pos(a) - pos(a).round()).abs() < 1e-9 { pos(a).round() as usize } else { i_lo };
    let i_hi = pos(b).floor() as usize;
    let i_hi = if (pos(b) - pos(b).round()).abs() < 1e-9 { pos(b).round() as usize } else { i_hi };

    let mut acc = Complex64::new(0.0, 0.0);
    if i_lo > i_hi {
        // both endpoints inside one grid interval
        let i = i_lo - 1;
        acc += partial_integral(g, grid, i, a, b, w, rule);
    } else {
        if pos(a) < i_lo as f64 - 1e-9 {
            acc += partial_integral(g, grid, i_lo - 1, a, grid.time(i_lo), w, rule);
        }
        for i in i_lo..i_hi {
            acc += interval_integral(g, grid, i, w, rule);
        }
        if pos(b) > i_hi as f64 + 1e-9 {
            acc += partial_integral(g, grid, i_hi, grid.time(i_hi), b, w, rule);
        }
    }
    Ok(acc * sign)
}

/// Cumulative integrals `I_j = int_0^{t_j} g(u) e^{i w u} du` for every
/// grid point, in one sweep. Requires 0 to be a grid point.
pub fn cumulative_integrals(
    g: &[Complex64],
    grid: &TimeGrid,
    w: f64,
    rule: QuadratureRule,
) -> Result<Vec<Complex64>> {
    if g.len() != grid.len() {
        return Err(Error::GridMismatch(format!(
            "amplitude has {} samples, grid has {}",
            g.len(),
            grid.len()
        )));
    }
    let m = grid.len();
    let h = grid.dt();
    let j0f = grid.t_max() / h;
    if (j0f - j0f.round()).abs() > 1e-9 {
        return Err(Error::param("grid", "cumulative integration needs 0 on the grid"));
    }
    let j0 = j0f.round() as usize;
    let mut iv = vec![Complex64::new(0.0, 0.0); m - 1];
    for (i, slot) in iv.iter_mut().enumerate() {
        *slot = interval_integral(g, grid, i, w, rule);
    }
    let mut out = vec![Complex64::new(0.0, 0.0); m];
    let mut acc = Complex64::new(0.0, 0.0);
    for j in j0..m - 1 {
        acc += iv[j];
        out[j + 1] = acc;
    }
    acc = Complex64::new(0.0, 0.0);
    for j in (0..j0).rev() {
        acc -= iv[j];
        out[j] = acc;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Dense-sampled Simpson oracle for the moments.
    fn dense_moment(w: f64, t0: f64, h: f64, k: u32) -> Complex64 {
        let n = 20001;
        let dt = h / (n - 1) as f64;
        let tc = t0 + 0.5 * h;
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..n {
            let t = t0 + dt * j as f64;
            let wgt = if j == 0 || j == n - 1 {
                1.0
            } else if j % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += Complex64::from_polar(1.0, w * t) * (t - tc).powi(k as i32) * wgt;
        }
        acc * (dt / 3.0)
    }

    #[test]
    fn moments_match_dense_quadrature() {
        for &(w, t0, h) in &[
            (0.0, -0.3, 0.7),
            (1e-8, 0.2, 0.5),
            (0.004, -1.0, 2.0),
            (3.7, 0.0, 0.25),
            (250.0, -0.1, 0.21),
        ] {
            let (m0, m1, m2) = osc_moments(w, t0, h);
            for (k, m) in [(0u32, m0), (1, m1), (2, m2)] {
                let oracle = dense_moment(w, t0, h, k);
                let scale = oracle.norm().max(1e-6);
                assert!(
                    (m - oracle).norm() < 1e-8 * scale.max(1.0),
                    "w={w} t0={t0} h={h} k={k}: {m} vs {oracle}"
                );
            }
        }
    }

    #[test]
    fn smooth_nonoscillatory_integral() {
        // g(t) = e^{0.3 t}, w = 0: integral has the closed form.
        let grid = TimeGrid::symmetric(2.0, 257).unwrap();
        let g: Vec<Complex64> = grid.times().map(|t| Complex64::new((0.3 * t).exp(), 0.0)).collect();
        let t = 1.3;
        let exact = ((0.3f64 * t).exp() - 1.0) / 0.3;
        for rule in [
            QuadratureRule::Trapezoid,
            QuadratureRule::GaussLegendre(3),
            QuadratureRule::FilonTrapezoid,
            QuadratureRule::FilonSimpson,
        ] {
            let got = integrate_mode(&g, &grid, 0.0, t, rule).unwrap();
            let tol = match rule {
                QuadratureRule::FilonSimpson => 1e-9,
                _ => 1e-4,
            };
            assert!(
                (got.re - exact).abs() < tol && got.im.abs() < tol,
                "{rule:?}: {got} vs {exact}"
            );
        }
    }

    #[test]
    fn oscillatory_closed_form() {
        // g = 1: int_0^t e^{iwu} du = (e^{iwt} - 1)/(iw); the Filon rules
        // must reproduce it to rounding even when wh >> 1.
        let grid = TimeGrid::symmetric(2.0, 129).unwrap();
        let g = vec![Complex64::new(1.0, 0.0); grid.len()];
        for &w in &[0.0, 0.5, 40.0, 4000.0] {
            for &t in &[1.0, 0.73, -1.37] {
                let got = integrate_mode(&g, &grid, w, t, QuadratureRule::FilonSimpson).unwrap();
                let exact = if w == 0.0 {
                    Complex64::new(t, 0.0)
                } else {
                    (Complex64::from_polar(1.0, w * t) - 1.0) / Complex64::new(0.0, w)
                };
                assert!(
                    (got - exact).norm() < 1e-11 * (1.0 + exact.norm()),
                    "w={w} t={t}: {got} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn plain_trapezoid_degrades_with_frequency() {
        // Same amplitude, larger w: the plain rule error grows, the Filon
        // rule error does not.
        let grid = TimeGrid::symmetric(2.0, 257).unwrap();
        let g: Vec<Complex64> = grid.times().map(|t| Complex64::new((t * 0.5).cos(), 0.0)).collect();
        let errs: Vec<(f64, f64)> = [2.0, 60.0]
            .iter()
            .map(|&w| {
                let fine = integrate_mode(&g, &grid, w, 1.0, QuadratureRule::FilonSimpson).unwrap();
                let trap = integrate_mode(&g, &grid, w, 1.0, QuadratureRule::Trapezoid).unwrap();
                let filon = integrate_mode(&g, &grid, w, 1.0, QuadratureRule::FilonTrapezoid).unwrap();
                ((trap - fine).norm(), (filon - fine).norm())
            })
            .collect();
        assert!(errs[1].0 > 10.0 * errs[0].0, "trapezoid should degrade: {errs:?}");
        assert!(errs[1].1 < 10.0 * (errs[0].1 + 1e-12), "filon should not: {errs:?}");
    }

    #[test]
    fn cumulative_matches_pointwise() {
        let grid = TimeGrid::symmetric(1.0, 65).unwrap();
        let g: Vec<Complex64> = grid
            .times()
            .map(|t| Complex64::new((1.3 * t).sin() + 0.2, 0.4 * t))
            .collect();
        let w = 9.0;
        let cum = cumulative_integrals(&g, &grid, w, QuadratureRule::FilonSimpson).unwrap();
        for (j, t) in grid.times().enumerate() {
            let direct = integrate_mode(&g, &grid, w, t, QuadratureRule::FilonSimpson).unwrap();
            assert!(
                (cum[j] - direct).norm() < 1e-12,
                "j={j} t={t}: {:?} vs {:?}",
                cum[j],
                direct
            );
        }
    }

    #[test]
    fn rejects_out_of_range_and_mismatch() {
        let grid = TimeGrid::symmetric(1.0, 17).unwrap();
        let g = vec![Complex64::new(1.0, 0.0); grid.len()];
        assert!(integrate_mode(&g, &grid, 1.0, 1.5, QuadratureRule::FilonSimpson).is_err());
        assert!(integrate_mode(&g[..5], &grid, 1.0, 0.5, QuadratureRule::FilonSimpson).is_err());
    }
}
