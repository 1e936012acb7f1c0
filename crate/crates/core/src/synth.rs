//! Frequency-domain snapshot synthesis for wideband Gaussian planewaves in
//! white Gaussian noise.
//!
//! Every source has a flat spectrum across the band and every draw is
//! circular complex Gaussian. The time-delay model is realized only through
//! the manifold phase, never as a time series.

use num_complex::Complex;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::geometry::ArrayGeometry;
use crate::scalar::Scalar;

/// Geometry plus the physical constants needed to evaluate steering phases.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayManifold<T> {
    pub geometry: ArrayGeometry,
    /// Fundamental inter-element spacing `d` in meters.
    pub spacing: T,
    /// Propagation speed `c` in m/s.
    pub speed: T,
}

impl<T: Scalar> ArrayManifold<T> {
    /// Spacing of half a wavelength at `center_freq`.
    pub fn half_wavelength(geometry: ArrayGeometry, speed: T, center_freq: T) -> Result<Self> {
        if !(speed > T::zero()) || !(center_freq > T::zero()) {
            return Err(Error::Scenario(
                "speed and center frequency must be positive".into(),
            ));
        }
        Ok(Self {
            geometry,
            spacing: speed / (center_freq + center_freq),
            speed,
        })
    }

    /// Phase slope in units of `pi` per unit lag per unit `u`: `2 f d / c`.
    /// Exactly one at the design frequency of a half-wavelength array.
    pub fn normalized_frequency(&self, freq: T) -> T {
        (freq + freq) * self.spacing / self.speed
    }

    /// Steering vector `exp(-j 2 pi f d_n u / c)` over the sensors.
    pub fn steering(&self, freq: T, u: T) -> Result<Vec<Complex<T>>> {
        manifold(self, freq, u)
    }

    /// Steering vector without argument checks.
    pub(crate) fn steering_unchecked(&self, freq: T, u: T) -> Vec<Complex<T>> {
        let slope = T::PI() * self.normalized_frequency(freq) * u;
        self.geometry
            .positions()
            .iter()
            .map(|&p| {
                let phase = -slope * T::lit(p as f64);
                Complex::new(phase.cos(), phase.sin())
            })
            .collect()
    }
}

/// Array manifold column for a source at directional cosine `u`.
pub fn manifold<T: Scalar>(array: &ArrayManifold<T>, freq: T, u: T) -> Result<Vec<Complex<T>>> {
    if !(u.abs() <= T::one()) {
        return Err(Error::InvalidArgument(format!(
            "directional cosine {u} outside [-1, 1]"
        )));
    }
    if !(freq > T::zero()) {
        return Err(Error::InvalidArgument(format!("frequency {freq} must be positive")));
    }
    Ok(array.steering_unchecked(freq, u))
}

/// A single planewave source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Source<T> {
    /// Directional cosine `cos(theta)`.
    pub u: T,
    /// Per-bin variance.
    pub power: T,
}

/// Full synthesis scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario<T> {
    pub array: ArrayManifold<T>,
    pub sources: Vec<Source<T>>,
    pub noise_power: T,
    pub freqs: Vec<T>,
    pub center_freq: T,
    pub snapshots: usize,
}

impl<T: Scalar> Scenario<T> {
    /// Builds and validates a scenario on a half-wavelength array at `center_freq`.
    pub fn new(
        geometry: ArrayGeometry,
        sources: Vec<Source<T>>,
        noise_power: T,
        freqs: Vec<T>,
        center_freq: T,
        speed: T,
        snapshots: usize,
    ) -> Result<Self> {
        let scenario = Self {
            array: ArrayManifold::half_wavelength(geometry, speed, center_freq)?,
            sources,
            noise_power,
            freqs,
            center_freq,
            snapshots,
        };
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Scenario(msg));
        for (i, s) in self.sources.iter().enumerate() {
            if !(s.u.abs() <= T::one()) {
                return bad(format!("source {i}: u = {} outside [-1, 1]", s.u));
            }
            if !(s.power > T::zero()) || !s.power.is_finite() {
                return bad(format!("source {i}: power must be positive"));
            }
            if self.sources[..i].iter().any(|o| o.u == s.u) {
                return bad(format!("source {i}: duplicate u = {}", s.u));
            }
        }
        if !(self.noise_power > T::zero()) || !self.noise_power.is_finite() {
            return bad("noise power must be positive".into());
        }
        if self.freqs.is_empty() {
            return bad("at least one frequency bin required".into());
        }
        if self.freqs.iter().any(|&f| !(f > T::zero()) || !f.is_finite()) {
            return bad("frequencies must be positive".into());
        }
        if !(self.center_freq > T::zero()) {
            return bad("center frequency must be positive".into());
        }
        if !(self.array.spacing > T::zero()) || !(self.array.speed > T::zero()) {
            return bad("spacing and speed must be positive".into());
        }
        if self.snapshots == 0 {
            return bad("snapshot count must be at least 1".into());
        }
        Ok(())
    }

    pub fn source_count(&self) -> usize {
        self.sources.len()
    }

    /// Single bin at the center frequency with the full `M L` snapshot budget.
    pub fn narrowband_equivalent(&self) -> Self {
        Self {
            freqs: vec![self.center_freq],
            snapshots: self.snapshots * self.freqs.len(),
            ..self.clone()
        }
    }

    /// Replaces all source powers with `noise_power * 10^(snr_db / 10)`.
    pub fn with_common_snr_db(mut self, snr_db: T) -> Self {
        let power = self.noise_power * T::lit(10.0).powf(snr_db / T::lit(10.0));
        for s in &mut self.sources {
            s.power = power;
        }
        self
    }
}

/// `M` uniformly spaced bins from `f_lo` to `f_hi` inclusive.
pub fn uniform_band<T: Scalar>(f_lo: T, f_hi: T, bins: usize) -> Result<Vec<T>> {
    if bins == 0 || !(f_lo > T::zero()) || f_hi < f_lo {
        return Err(Error::Scenario(format!(
            "invalid band [{f_lo}, {f_hi}] with {bins} bins"
        )));
    }
    if bins == 1 {
        return Ok(vec![(f_lo + f_hi) / (T::one() + T::one())]);
    }
    let step = (f_hi - f_lo) / T::from_count(bins - 1);
    Ok((0..bins).map(|m| f_lo + step * T::from_count(m)).collect())
}

/// `count` points partitioning `(lo, hi]` uniformly, closing endpoint included.
pub fn right_closed_partition(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let step = (hi - lo) / count as f64;
    (1..=count).map(|i| lo + step * i as f64).collect()
}

/// Directional cosines of the nine-source underdetermined layout: broadside,
/// four sources uniform in `theta in (90 deg, 135 deg]`, four uniform in `u in (0, 0.7]`.
pub fn nine_source_directions() -> Vec<f64> {
    let mut u = vec![0.0];
    u.extend(
        right_closed_partition(90.0, 135.0, 4)
            .into_iter()
            .map(|deg: f64| deg.to_radians().cos()),
    );
    u.extend(right_closed_partition(0.0, 0.7, 4));
    u
}

/// Complex phasors indexed by (sensor, bin, snapshot).
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotTensor<T> {
    array: ArrayManifold<T>,
    freqs: Vec<T>,
    snapshots: usize,
    // layout: [bin][snapshot][sensor]
    data: Vec<Complex<T>>,
}

impl<T: Scalar> SnapshotTensor<T> {
    /// Wraps existing phasors laid out bin-major, then snapshot, then sensor.
    pub fn from_data(
        array: ArrayManifold<T>,
        freqs: Vec<T>,
        snapshots: usize,
        data: Vec<Complex<T>>,
    ) -> Result<Self> {
        let n = array.geometry.sensor_count();
        if freqs.is_empty() || snapshots == 0 {
            return Err(Error::InvalidArgument("empty snapshot tensor".into()));
        }
        if data.len() != n * freqs.len() * snapshots {
            return Err(Error::InvalidArgument(format!(
                "expected {} phasors, got {}",
                n * freqs.len() * snapshots,
                data.len()
            )));
        }
        Ok(Self {
            array,
            freqs,
            snapshots,
            data,
        })
    }

    pub fn array(&self) -> &ArrayManifold<T> {
        &self.array
    }

    pub fn freqs(&self) -> &[T] {
        &self.freqs
    }

    pub fn sensor_count(&self) -> usize {
        self.array.geometry.sensor_count()
    }

    pub fn bin_count(&self) -> usize {
        self.freqs.len()
    }

    pub fn snapshot_count(&self) -> usize {
        self.snapshots
    }

    /// Phasor vector `x_l(f_m)`.
    pub fn snapshot(&self, bin: usize, l: usize) -> &[Complex<T>] {
        let n = self.sensor_count();
        let start = (bin * self.snapshots + l) * n;
        &self.data[start..start + n]
    }

    /// All snapshots of one bin.
    pub fn bin(&self, bin: usize) -> impl Iterator<Item = &[Complex<T>]> {
        let n = self.sensor_count();
        let start = bin * self.snapshots * n;
        self.data[start..start + self.snapshots * n].chunks_exact(n)
    }

    pub fn get(&self, sensor: usize, bin: usize, l: usize) -> Complex<T> {
        self.snapshot(bin, l)[sensor]
    }
}

/// Draw from `CN(0, variance)`: independent real and imaginary parts with
/// variance `variance / 2` each.
pub fn complex_normal<T: Scalar, R: Rng + ?Sized>(rng: &mut R, variance: T) -> Complex<T> {
    let sd = (variance * T::lit(0.5)).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(T::lit(re) * sd, T::lit(im) * sd)
}

/// Deterministic per-bin generator: stream `bin` of the ChaCha generator keyed by `seed`.
pub fn bin_rng(seed: u64, bin: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(bin as u64);
    rng
}

/// Draws `x_l(f_m) = A(f_m) s_l(f_m) + n_l(f_m)` for every bin and snapshot.
///
/// Each bin uses its own random stream derived from `seed`, so bins can be
/// generated in any order with identical output.
pub fn synthesize<T: Scalar>(scenario: &Scenario<T>, seed: u64) -> Result<SnapshotTensor<T>> {
    scenario.validate()?;
    let n = scenario.array.geometry.sensor_count();
    let l_count = scenario.snapshots;
    let mut data = Vec::with_capacity(n * l_count * scenario.freqs.len());
    for (m, &f) in scenario.freqs.iter().enumerate() {
        let steering: Vec<Vec<Complex<T>>> = scenario
            .sources
            .iter()
            .map(|s| scenario.array.steering_unchecked(f, s.u))
            .collect();
        let mut rng = bin_rng(seed, m);
        let mut amplitudes = vec![Complex::zero(); scenario.sources.len()];
        for _ in 0..l_count {
            for (a, s) in amplitudes.iter_mut().zip(&scenario.sources) {
                *a = complex_normal(&mut rng, s.power);
            }
            for sensor in 0..n {
                let signal: Complex<T> = steering
                    .iter()
                    .zip(&amplitudes)
                    .map(|(v, a)| v[sensor] * a)
                    .sum();
                data.push(signal + complex_normal(&mut rng, scenario.noise_power));
            }
        }
    }
    SnapshotTensor::from_data(scenario.array.clone(), scenario.freqs.clone(), l_count, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CMatrix;

    fn mra6_manifold() -> ArrayManifold<f64> {
        ArrayManifold::half_wavelength(ArrayGeometry::mra6(), 343.0, 100.0).unwrap()
    }

    fn close(a: Complex<f64>, b: Complex<f64>, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn broadside_is_all_ones() {
        let v = manifold(&mra6_manifold(), 87.0, 0.0).unwrap();
        assert!(v.iter().all(|z| close(*z, Complex::new(1.0, 0.0), 1e-15)));
    }

    #[test]
    fn endfire_at_design_frequency_alternates_with_position_parity() {
        let v = manifold(&mra6_manifold(), 100.0, 1.0).unwrap();
        let expect = [-1.0, 1.0, -1.0, 1.0, 1.0, 1.0];
        for (z, e) in v.iter().zip(expect) {
            assert!(close(*z, Complex::new(e, 0.0), 1e-12), "{z} vs {e}");
        }
    }

    #[test]
    fn phase_depends_on_frequency_times_u() {
        let arr = mra6_manifold();
        let a = manifold(&arr, 200.0, 0.5).unwrap();
        let b = manifold(&arr, 100.0, 1.0).unwrap();
        assert!(a.iter().zip(&b).all(|(x, y)| close(*x, *y, 1e-12)));
        assert!(a.iter().all(|z| (z.norm() - 1.0).abs() < 1e-15));
    }

    #[test]
    fn manifold_rejects_invisible_region() {
        assert!(manifold(&mra6_manifold(), 100.0, 1.01).is_err());
        assert!(manifold(&mra6_manifold(), 0.0, 0.1).is_err());
    }

    #[test]
    fn nine_source_layout() {
        let u = nine_source_directions();
        let expected = [
            0.0,
            101.25f64.to_radians().cos(),
            112.5f64.to_radians().cos(),
            123.75f64.to_radians().cos(),
            135f64.to_radians().cos(),
            0.175,
            0.35,
            0.525,
            0.7,
        ];
        assert_eq!(u.len(), 9);
        for (a, b) in u.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn scenario_validation() {
        let g = ArrayGeometry::mra6();
        let src = |u| Source { u, power: 1.0 };
        let mk = |sources, noise, freqs, l| Scenario::new(g.clone(), sources, noise, freqs, 100.0, 343.0, l);
        assert!(mk(vec![src(0.0)], 1.0, vec![100.0], 1).is_ok());
        assert!(mk(vec![src(1.5)], 1.0, vec![100.0], 1).is_err());
        assert!(mk(vec![src(0.1), src(0.1)], 1.0, vec![100.0], 1).is_err());
        assert!(mk(vec![src(0.1)], 0.0, vec![100.0], 1).is_err());
        assert!(mk(vec![src(0.1)], 1.0, vec![], 1).is_err());
        assert!(mk(vec![src(0.1)], 1.0, vec![-3.0], 1).is_err());
        assert!(mk(vec![src(0.1)], 1.0, vec![100.0], 0).is_err());
        assert!(mk(vec![Source { u: 0.0, power: 0.0 }], 1.0, vec![100.0], 1).is_err());
    }

    #[test]
    fn band_construction() {
        let f = uniform_band(80.0, 120.0, 41).unwrap();
        assert_eq!(f.len(), 41);
        assert_eq!(f[0], 80.0);
        assert_eq!(f[20], 100.0);
        assert_eq!(f[40], 120.0);
        assert!(uniform_band(80.0, 70.0, 3).is_err());
    }

    #[test]
    fn seeded_synthesis_is_reproducible() {
        let s = Scenario::new(
            ArrayGeometry::mra6(),
            vec![Source { u: 0.2, power: 1.0 }],
            1.0,
            uniform_band(80.0, 120.0, 5).unwrap(),
            100.0,
            343.0,
            4,
        )
        .unwrap();
        let a = synthesize(&s, 11).unwrap();
        let b = synthesize(&s, 11).unwrap();
        let c = synthesize(&s, 12).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.bin_count(), 5);
        assert_eq!(a.snapshot_count(), 4);
        assert_eq!(a.sensor_count(), 6);
    }

    #[test]
    fn circular_normal_variance_split() {
        let mut rng = bin_rng(3, 0);
        let draws: Vec<Complex<f64>> = (0..100_000).map(|_| complex_normal(&mut rng, 2.0)).collect();
        let n = draws.len() as f64;
        let var_re = draws.iter().map(|z| z.re * z.re).sum::<f64>() / n;
        let var_im = draws.iter().map(|z| z.im * z.im).sum::<f64>() / n;
        assert!((var_re - 1.0).abs() < 0.03, "{var_re}");
        assert!((var_im - 1.0).abs() < 0.03, "{var_im}");
    }

    fn outer_average(x: &SnapshotTensor<f64>, bin: usize) -> CMatrix<f64> {
        let n = x.sensor_count();
        let mut r = CMatrix::zeros(n);
        for snap in x.bin(bin) {
            for i in 0..n {
                for j in 0..n {
                    r[(i, j)] = r[(i, j)] + snap[i] * snap[j].conj();
                }
            }
        }
        r.scale(1.0 / x.snapshot_count() as f64)
    }

    #[test]
    fn sample_covariance_matches_ensemble() {
        let sources = vec![Source { u: -0.3, power: 2.0 }, Source { u: 0.45, power: 1.0 }];
        let s = Scenario::new(ArrayGeometry::mra6(), sources.clone(), 0.5, vec![100.0], 100.0, 343.0, 10_000).unwrap();
        let x = synthesize(&s, 5).unwrap();
        let sample = outer_average(&x, 0);
        let mut ensemble = CMatrix::identity(6).scale(0.5);
        for src in &sources {
            let v = s.array.steering(100.0, src.u).unwrap();
            ensemble = CMatrix::from_fn(6, |i, j| ensemble[(i, j)] + v[i] * v[j].conj() * src.power);
        }
        let rel = sample.sub(&ensemble).frobenius_norm() / ensemble.frobenius_norm();
        assert!(rel < 0.05, "relative error {rel}");
    }

    #[test]
    fn bins_are_uncorrelated() {
        let s = Scenario::new(
            ArrayGeometry::mra6(),
            vec![Source { u: 0.1, power: 1.0 }],
            1.0,
            vec![90.0, 110.0],
            100.0,
            343.0,
            10_000,
        )
        .unwrap();
        let x = synthesize(&s, 9).unwrap();
        let l = x.snapshot_count() as f64;
        // sensor 0 across the two bins; each has variance 2
        let cross: Complex<f64> = (0..x.snapshot_count())
            .map(|i| x.get(0, 0, i) * x.get(0, 1, i).conj())
            .sum::<Complex<f64>>()
            / l;
        let sampling_sd = 2.0 / l.sqrt();
        assert!(cross.norm() < 5.0 * sampling_sd, "{cross}");
    }

    #[test]
    fn noise_only_limit_is_white() {
        let s = Scenario::new(
            ArrayGeometry::mra6(),
            vec![Source { u: 0.3, power: 1e-12 }],
            1.0,
            vec![100.0],
            100.0,
            343.0,
            10_000,
        )
        .unwrap();
        let r = outer_average(&synthesize(&s, 2).unwrap(), 0);
        let rel = r.sub(&CMatrix::identity(6)).frobenius_norm() / 6f64.sqrt();
        assert!(rel < 0.05, "{rel}");
    }

    #[test]
    fn rank_one_limit() {
        let s = Scenario::new(
            ArrayGeometry::mra6(),
            vec![Source { u: 0.3, power: 2.0 }],
            1e-9,
            vec![100.0],
            100.0,
            343.0,
            10_000,
        )
        .unwrap();
        let r = outer_average(&synthesize(&s, 4).unwrap(), 0);
        let top = crate::linalg::hermitian_eigen(&r, false).unwrap().values[5];
        assert!((top - 12.0).abs() / 12.0 < 0.05, "{top}");
    }
}
