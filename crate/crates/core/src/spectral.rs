//! Truncated Fourier data on the torus and the weighted sequence norms.
//!
//! A [`FourierState`] holds complex coefficients on integer modes
//! `|n| <= N`. The mode index is the physical frequency: on a torus of
//! period `2*pi/lambda` only multiples of `lambda` are admissible, and
//! that is exactly what [`FourierState::rescale`] produces.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::error::Error;
use crate::util::tree_sum;
use crate::Result;

/// Japanese bracket `<x> = (1 + x^2)^(1/2)`.
///
/// Even, monotone in |x|, and >= 1 everywhere, so products and quotients
/// of bracket weights never hit zero.
pub fn bracket(x: f64) -> f64 {
    (1.0 + x * x).sqrt()
}

/// Norm selector: regularity exponent `s` together with either an
/// integrability exponent `p >= 1` (sequence norms) or a modulation
/// exponent `b` (space-time norms).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct NormSpec {
    pub s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
}

impl NormSpec {
    pub fn sequence(s: f64, p: f64) -> Self {
        NormSpec { s, p: Some(p), b: None }
    }

    pub fn spacetime(s: f64, b: f64) -> Self {
        NormSpec { s, p: None, b: Some(b) }
    }
}

/// Truncated sequence of Fourier coefficients of a periodic distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierState {
    /// Dense storage over modes `-N ..= N`; index `i` holds mode `i - N`.
    coeffs: Vec<Complex64>,
    trunc: i64,
    period: f64,
}

impl FourierState {
    /// The zero state on modes `|n| <= n_max`, period `2*pi`.
    pub fn zeros(n_max: i64) -> Self {
        assert!(n_max >= 0, "truncation radius must be nonnegative");
        FourierState {
            coeffs: vec![Complex64::new(0.0, 0.0); (2 * n_max + 1) as usize],
            trunc: n_max,
            period: 2.0 * PI,
        }
    }

    /// A single mode `n` with the given amplitude; truncation radius `|n|`.
    pub fn single_mode(n: i64, amp: Complex64) -> Self {
        let mut st = FourierState::zeros(n.abs());
        st.set(n, amp);
        st
    }

    /// Builds a state from `(mode, amplitude)` pairs, validating the
    /// truncation radius, the period, and finiteness of every amplitude.
    pub fn from_coeffs(
        pairs: impl IntoIterator<Item = (i64, Complex64)>,
        n_max: i64,
        period: f64,
    ) -> Result<Self> {
        if n_max < 0 {
            return Err(Error::param("N", "truncation radius must be >= 0"));
        }
        if !(period > 0.0) || !period.is_finite() {
            return Err(Error::param("period", "must be a finite positive real"));
        }
        let mut st = FourierState::zeros(n_max);
        st.period = period;
        for (n, c) in pairs {
            if n.abs() > n_max {
                return Err(Error::param("coeffs", format!("mode {n} exceeds |n| <= {n_max}")));
            }
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::param("coeffs", format!("non-finite amplitude at mode {n}")));
            }
            st.set(n, c);
        }
        Ok(st)
    }

    pub fn truncation(&self) -> i64 {
        self.trunc
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// Frequency spacing of the underlying torus, `2*pi / period`.
    pub fn lattice_step(&self) -> f64 {
        2.0 * PI / self.period
    }

    pub fn coeff(&self, n: i64) -> Complex64 {
        if n.abs() > self.trunc {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(n + self.trunc) as usize]
        }
    }

    pub fn set(&mut self, n: i64, c: Complex64) {
        assert!(n.abs() <= self.trunc, "mode {n} outside truncation");
        self.coeffs[(n + self.trunc) as usize] = c;
    }

    /// Iterates `(mode, amplitude)` over the full stored range.
    pub fn modes(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, &c)| (i as i64 - self.trunc, c))
    }

    /// Raw dense slice, index `i` holds mode `i - N`.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    /// Multiplies every coefficient by `c`.
    pub fn scaled(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        for v in &mut out.coeffs {
            *v *= c;
        }
        out
    }

    /// The weighted sequence norm
    /// `(step * sum_n <n>^{p s} |a(n)|^p)^{1/p} / step`
    /// written with the lattice measure so that tori of period `2*pi/lambda`
    /// carry the lambda-uniform norm: the sum over stored modes picks up the
    /// factor `step^{1/p - 1}` relative to the bare coefficient sum. On the
    /// standard torus (period `2*pi`, step 1) this is exactly
    /// `(sum_n <n>^{p s} |a(n)|^p)^{1/p}`.
    pub fn hsp_norm(&self, s: f64, p: f64) -> Result<f64> {
        if !(p >= 1.0) {
            return Err(Error::param("p", format!("integrability exponent must be >= 1, got {p}")));
        }
        let terms: Vec<f64> = self
            .modes()
            .map(|(n, c)| bracket(n as f64).powf(p * s) * c.norm().powf(p))
            .collect();
        let step = self.lattice_step();
        Ok(step.powf(1.0 / p - 1.0) * tree_sum(&terms).powf(1.0 / p))
    }

    /// Rescales `u(x) -> lambda^2 u(lambda x)`: amplitude `lambda^2 a(n)`
    /// moves to mode `lambda * n`, the period divides by `lambda`, and the
    /// truncation radius becomes `lambda * N`. Integer `lambda >= 1` only,
    /// so the result stays on a representable frequency lattice.
    pub fn rescale(&self, lambda: i64) -> Result<Self> {
        if lambda < 1 {
            return Err(Error::param("lambda", format!("must be a positive integer, got {lambda}")));
        }
        let mut out = FourierState::zeros(self.trunc * lambda);
        out.period = self.period / lambda as f64;
        let l2 = Complex64::new((lambda * lambda) as f64, 0.0);
        for (n, c) in self.modes() {
            out.set(n * lambda, c * l2);
        }
        Ok(out)
    }
}

/// Power-profile data `a(n) = <n>^alpha` on `|n| <= n_max`.
pub fn power_data(alpha: f64, n_max: i64) -> FourierState {
    let mut st = FourierState::zeros(n_max);
    for n in -n_max..=n_max {
        st.set(n, Complex64::new(bracket(n as f64).powf(alpha), 0.0));
    }
    st
}

/// Deterministic random-phase data at the `H^{s0,p}` regularity edge.
///
/// The modulus profile is part of the contract:
/// `|a(n)| = <n>^{-s0 - 1/p} * (1 + ln<n>)^{-2/p}`,
/// whose `p`-th weighted powers are `<n>^{-1} (1 + ln<n>)^{-2}`, summable
/// with no room to spare. Phases are uniform, drawn from a ChaCha stream
/// keyed by `seed`, so equal seeds give identical states and different
/// seeds share the moduli.
pub fn random_data(s0: f64, p: f64, n_max: i64, seed: u64) -> Result<FourierState> {
    if !(p >= 1.0) {
        return Err(Error::param("p", format!("integrability exponent must be >= 1, got {p}")));
    }
    if n_max < 0 {
        return Err(Error::param("N", "truncation radius must be >= 0"));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut st = FourierState::zeros(n_max);
    for n in -n_max..=n_max {
        let b = bracket(n as f64);
        let modulus = b.powf(-s0 - 1.0 / p) * (1.0 + b.ln()).powf(-2.0 / p);
        let phase: f64 = rng.gen_range(0.0..2.0 * PI);
        st.set(n, Complex64::from_polar(modulus, phase));
    }
    Ok(st)
}

// ---------------------------------------------------------------------------
// Serialization: {"period": f, "N": n, "coeffs": [[n, re, im], ...]} with the
// triples sorted by mode. serde_json prints shortest round-trip decimals, so
// encode/decode is bit-exact at double precision.
// ---------------------------------------------------------------------------

#[derive(serde::Serialize, serde::Deserialize)]
struct StateRepr {
    period: f64,
    #[serde(rename = "N")]
    n: i64,
    coeffs: Vec<(i64, f64, f64)>,
}

impl serde::Serialize for FourierState {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = StateRepr {
            period: self.period,
            n: self.trunc,
            coeffs: self.modes().map(|(n, c)| (n, c.re, c.im)).collect(),
        };
        repr.serialize(ser)
    }
}

impl<'de> serde::Deserialize<'de> for FourierState {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let repr = StateRepr::deserialize(de)?;
        if repr.n < 0 {
            return Err(D::Error::custom("truncation radius must be >= 0"));
        }
        if !(repr.period > 0.0) || !repr.period.is_finite() {
            return Err(D::Error::custom("period must be a finite positive real"));
        }
        let mut st = FourierState::zeros(repr.n);
        st.period = repr.period;
        let mut last: Option<i64> = None;
        for (n, re, im) in repr.coeffs {
            if n.abs() > repr.n {
                return Err(D::Error::custom(format!("mode {n} exceeds |n| <= {}", repr.n)));
            }
            if let Some(prev) = last {
                if n <= prev {
                    return Err(D::Error::custom("coeffs must be strictly sorted by mode"));
                }
            }
            if !re.is_finite() || !im.is_finite() {
                return Err(D::Error::custom(format!("non-finite amplitude at mode {n}")));
            }
            last = Some(n);
            st.set(n, Complex64::new(re, im));
        }
        Ok(st)
    }
}
