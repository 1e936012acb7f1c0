//! Sample covariances, coarray correlation sequences, and spatial periodograms.
//!
//! Two routes lead from snapshots to a coarray correlation sequence:
//!
//! * direct: per-bin sample covariance, then averaging entries over the
//!   sensor pairs of each lag;
//! * periodogram: conventional beamforming on a uniform `u` grid, averaging
//!   over snapshots and bins, then an inverse spatial Fourier transform
//!   normalized by the coarray weights.
//!
//! With unnormalized steering weights the periodogram is
//! `t(u) = sum_k eta(k) r(k) exp(j pi k u)` at the design frequency, so on a
//! grid of at least `2P - 1` points the second route reproduces the first
//! exactly for a single bin at the design frequency.

use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::Coarray;
use crate::linalg::CMatrix;
use crate::scalar::Scalar;
use crate::synth::{ArrayManifold, SnapshotTensor};

/// Per-bin sample covariance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleCovariance<T> {
    pub matrix: CMatrix<T>,
    pub snapshot_count: usize,
    pub freq: T,
}

/// `R = (1/L) sum_l x_l x_l^H` for one bin.
pub fn scm<T: Scalar>(snapshots: &SnapshotTensor<T>, bin: usize) -> SampleCovariance<T> {
    let n = snapshots.sensor_count();
    let mut matrix = CMatrix::zeros(n);
    for x in snapshots.bin(bin) {
        for i in 0..n {
            for j in i..n {
                matrix[(i, j)] = matrix[(i, j)] + x[i] * x[j].conj();
            }
        }
    }
    let inv_l = T::one() / T::from_count(snapshots.snapshot_count());
    for i in 0..n {
        matrix[(i, i)] = Complex::new(matrix[(i, i)].re * inv_l, T::zero());
        for j in (i + 1)..n {
            let z = matrix[(i, j)] * inv_l;
            matrix[(i, j)] = z;
            matrix[(j, i)] = z.conj();
        }
    }
    SampleCovariance {
        matrix,
        snapshot_count: snapshots.snapshot_count(),
        freq: snapshots.freqs()[bin],
    }
}

/// Correlation estimates over the contiguous coarray lags `1-P ..= P-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationVector<T> {
    p: usize,
    values: Vec<Complex<T>>,
}

impl<T: Scalar> CorrelationVector<T> {
    /// Builds from values ordered by lag from `1-P` to `P-1`.
    pub fn from_lag_values(values: Vec<Complex<T>>) -> Result<Self> {
        if values.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "correlation vector needs odd length 2P-1, got {}",
                values.len()
            )));
        }
        Ok(Self {
            p: values.len().div_ceil(2),
            values,
        })
    }

    /// Builds a conjugate-symmetric vector from non-negative lags `r(0..P)`.
    /// The imaginary part of `r(0)` is discarded.
    pub fn from_nonnegative_lags(half: &[Complex<T>]) -> Result<Self> {
        if half.is_empty() {
            return Err(Error::InvalidArgument("empty correlation".into()));
        }
        let p = half.len();
        let mut values = Vec::with_capacity(2 * p - 1);
        values.extend(half[1..].iter().rev().map(|z| z.conj()));
        values.push(Complex::new(half[0].re, T::zero()));
        values.extend_from_slice(&half[1..]);
        Ok(Self { p, values })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// `r(k)` for `|k| <= P-1`.
    pub fn get(&self, lag: i64) -> Complex<T> {
        self.values[(lag + self.p as i64 - 1) as usize]
    }

    /// Values ordered by lag from `1-P` to `P-1`.
    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn lags(&self) -> std::ops::RangeInclusive<i64> {
        let h = self.p as i64 - 1;
        -h..=h
    }

    /// Largest violation of `r(-k) = conj(r(k))`.
    pub fn symmetry_defect(&self) -> T {
        self.lags()
            .map(|k| (self.get(-k) - self.get(k).conj()).norm())
            .fold(T::zero(), T::max)
    }
}

/// Averages covariance entries over the sensor pairs of each contiguous lag.
pub fn coarray_correlation<T: Scalar>(
    cov: &SampleCovariance<T>,
    coarray: &Coarray,
) -> Result<CorrelationVector<T>> {
    if cov.matrix.dim() != coarray.sensor_count() {
        return Err(Error::InvalidArgument(format!(
            "covariance is {0}x{0} but coarray has {1} sensors",
            cov.matrix.dim(),
            coarray.sensor_count()
        )));
    }
    let values = coarray
        .contiguous_lags()
        .map(|k| {
            let pairs = coarray.pairs(k);
            if pairs.is_empty() {
                return Err(Error::Numerical(format!("lag {k} missing inside the contiguous coarray")));
            }
            let sum: Complex<T> = pairs.iter().map(|&(a, b)| cov.matrix[(a, b)]).sum();
            Ok(sum / T::from_count(pairs.len()))
        })
        .collect::<Result<Vec<_>>>()?;
    CorrelationVector::from_lag_values(values)
}

/// Uniform grid `u_g = -1 + 2g/Ng`, `g = 0..Ng`, covering `[-1, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct UGrid<T> {
    points: Vec<T>,
}

pub const DEFAULT_GRID_SIZE: usize = 256;

impl<T: Scalar> UGrid<T> {
    pub fn new(size: usize) -> Result<Self> {
        if size < 2 {
            return Err(Error::InvalidArgument(format!("u grid needs at least 2 points, got {size}")));
        }
        let ng = T::from_count(size);
        let two = T::one() + T::one();
        Ok(Self {
            points: (0..size).map(|g| -T::one() + two * T::from_count(g) / ng).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[T] {
        &self.points
    }
}

/// Spatial power versus directional cosine.
#[derive(Debug, Clone, PartialEq)]
pub struct Periodogram<T> {
    pub grid: UGrid<T>,
    pub values: Vec<T>,
}

impl<T: Scalar> Periodogram<T> {
    /// Grid point and value of the largest entry.
    pub fn peak(&self) -> (T, T) {
        let (i, v) = self
            .values
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) });
        (self.grid.points()[i], v)
    }
}

fn check_grid<T: Scalar>(array: &ArrayManifold<T>, grid: &UGrid<T>) -> Result<()> {
    let need = 2 * array.geometry.aperture() as usize + 1;
    if grid.len() < need {
        return Err(Error::InvalidArgument(format!(
            "u grid of {} points cannot resolve lags up to {}; need at least {need}",
            grid.len(),
            array.geometry.aperture()
        )));
    }
    Ok(())
}

/// Clamps rounding-level negatives to zero and rejects anything worse.
fn clamp_nonnegative<T: Scalar>(values: &mut [T]) -> Result<()> {
    let max = values.iter().copied().fold(T::zero(), T::max);
    let floor = -T::lit(1e-12) * max;
    for v in values.iter_mut() {
        if !v.is_finite() {
            return Err(Error::Numerical("non-finite periodogram value".into()));
        }
        if *v < T::zero() {
            if *v < floor {
                return Err(Error::Numerical(format!("periodogram value {v} below zero")));
            }
            *v = T::zero();
        }
    }
    Ok(())
}

/// Steering vectors `w(u_g)` for one frequency, flattened grid-major.
fn steering_table<T: Scalar>(array: &ArrayManifold<T>, freq: T, grid: &UGrid<T>) -> Vec<Complex<T>> {
    grid.points()
        .iter()
        .flat_map(|&u| array.steering_unchecked(freq, u))
        .collect()
}

/// Snapshot-summed beam power `sum_l |w^H x_l|^2` at every grid point.
fn beam_power_sum<T: Scalar>(snapshots: &SnapshotTensor<T>, bin: usize, grid: &UGrid<T>) -> Vec<T> {
    let n = snapshots.sensor_count();
    let table = steering_table(snapshots.array(), snapshots.freqs()[bin], grid);
    let mut power = vec![T::zero(); grid.len()];
    for x in snapshots.bin(bin) {
        for (p, w) in power.iter_mut().zip(table.chunks_exact(n)) {
            let y: Complex<T> = w.iter().zip(x).map(|(wi, xi)| wi.conj() * xi).sum();
            *p = *p + y.norm_sqr();
        }
    }
    power
}

/// Conventional-beamformer periodogram `t_m(u) = (1/L) sum_l |w_m(u)^H x_l(f_m)|^2`
/// with unnormalized steering weights.
pub fn narrowband_periodogram<T: Scalar>(
    snapshots: &SnapshotTensor<T>,
    bin: usize,
    grid: &UGrid<T>,
) -> Result<Periodogram<T>> {
    check_grid(snapshots.array(), grid)?;
    let inv_l = T::one() / T::from_count(snapshots.snapshot_count());
    let mut values: Vec<T> = beam_power_sum(snapshots, bin, grid)
        .into_iter()
        .map(|p| p * inv_l)
        .collect();
    clamp_nonnegative(&mut values)?;
    Ok(Periodogram {
        grid: grid.clone(),
        values,
    })
}

/// Same periodogram via the bilinear form `w^H R w` of a sample covariance.
pub fn periodogram_from_scm<T: Scalar>(
    cov: &SampleCovariance<T>,
    array: &ArrayManifold<T>,
    grid: &UGrid<T>,
) -> Result<Periodogram<T>> {
    check_grid(array, grid)?;
    let mut values: Vec<T> = grid
        .points()
        .iter()
        .map(|&u| cov.matrix.quadratic_form(&array.steering_unchecked(cov.freq, u)).re)
        .collect();
    clamp_nonnegative(&mut values)?;
    Ok(Periodogram {
        grid: grid.clone(),
        values,
    })
}

/// Average of the narrowband periodograms over all bins and snapshots.
///
/// Bins are beamformed in parallel; the reduction runs in bin order so the
/// result does not depend on the thread count.
pub fn wideband_periodogram<T: Scalar>(snapshots: &SnapshotTensor<T>, grid: &UGrid<T>) -> Result<Periodogram<T>> {
    check_grid(snapshots.array(), grid)?;
    let per_bin: Vec<Vec<T>> = (0..snapshots.bin_count())
        .into_par_iter()
        .map(|m| beam_power_sum(snapshots, m, grid))
        .collect();
    let mut values = vec![T::zero(); grid.len()];
    for bin in &per_bin {
        for (v, p) in values.iter_mut().zip(bin) {
            *v = *v + *p;
        }
    }
    let scale = T::one() / T::from_count(snapshots.bin_count() * snapshots.snapshot_count());
    for v in &mut values {
        *v = *v * scale;
    }
    clamp_nonnegative(&mut values)?;
    Ok(Periodogram {
        grid: grid.clone(),
        values,
    })
}

/// Inverse spatial Fourier transform of a periodogram normalized by the
/// coarray weights: `r(k) = [(1/Ng) sum_g t(u_g) exp(-j pi k u_g)] / eta(k)`.
pub fn correlation_from_periodogram<T: Scalar>(
    periodogram: &Periodogram<T>,
    coarray: &Coarray,
) -> Result<CorrelationVector<T>> {
    let p = coarray.contiguous_p();
    let ng = periodogram.grid.len();
    if ng < 2 * p - 1 {
        return Err(Error::InvalidArgument(format!(
            "u grid of {ng} points is below the 2P-1 = {} needed for inversion",
            2 * p - 1
        )));
    }
    let inv_ng = T::one() / T::from_count(ng);
    let half = (0..p)
        .map(|k| {
            let kk = T::lit(k as f64);
            let acc: Complex<T> = periodogram
                .grid
                .points()
                .iter()
                .zip(&periodogram.values)
                .map(|(&u, &t)| {
                    let phase = -T::PI() * kk * u;
                    Complex::new(phase.cos(), phase.sin()) * t
                })
                .sum();
            let eta = coarray.weight(k as i64);
            if eta == 0 {
                return Err(Error::Numerical(format!("lag {k} missing inside the contiguous coarray")));
            }
            Ok(acc * inv_ng / T::from_count(eta))
        })
        .collect::<Result<Vec<_>>>()?;
    CorrelationVector::from_nonnegative_lags(&half)
}

/// Zero-phase correlation `r(k) = delta(k)` of length `2P - 1`.
pub fn white_correlation<T: Scalar>(p: usize, level: T) -> CorrelationVector<T> {
    let mut half = vec![Complex::zero(); p];
    half[0] = Complex::new(level, T::zero());
    CorrelationVector::from_nonnegative_lags(&half).expect("p >= 1")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ArrayGeometry;
    use crate::synth::{synthesize, Scenario, Source};

    fn scenario(sources: Vec<Source<f64>>, noise: f64, freqs: Vec<f64>, l: usize) -> Scenario<f64> {
        Scenario::new(ArrayGeometry::mra6(), sources, noise, freqs, 100.0, 343.0, l).unwrap()
    }

    fn rel_err(a: &CorrelationVector<f64>, b: &CorrelationVector<f64>) -> f64 {
        let num: f64 = a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| (x - y).norm_sqr()).sum();
        let den: f64 = b.as_slice().iter().map(|y| y.norm_sqr()).sum();
        (num / den).sqrt()
    }

    #[test]
    fn single_snapshot_scm_is_rank_one() {
        let s = scenario(vec![Source { u: 0.2, power: 1.0 }], 1.0, vec![100.0], 1);
        let x = synthesize(&s, 1).unwrap();
        let r = scm(&x, 0);
        let snap = x.snapshot(0, 0);
        for i in 0..6 {
            for j in 0..6 {
                assert!((r.matrix[(i, j)] - snap[i] * snap[j].conj()).norm() < 1e-14);
            }
        }
        let eig = crate::linalg::hermitian_eigen(&r.matrix, false).unwrap();
        let energy: f64 = snap.iter().map(|z| z.norm_sqr()).sum();
        assert!((eig.values[5] - energy).abs() < 1e-12 * energy);
        assert!(eig.values[..5].iter().all(|v| v.abs() < 1e-12 * energy));
    }

    #[test]
    fn scm_is_hermitian_psd_with_energy_trace() {
        let s = scenario(
            vec![Source { u: 0.2, power: 1.0 }, Source { u: -0.5, power: 3.0 }],
            0.1,
            vec![90.0],
            4,
        );
        let x = synthesize(&s, 8).unwrap();
        let r = scm(&x, 0);
        assert_eq!(r.matrix.hermitian_defect(), 0.0);
        let energy: f64 = x.bin(0).flat_map(|v| v.iter()).map(|z| z.norm_sqr()).sum::<f64>() / 4.0;
        assert!((r.matrix.trace().re - energy).abs() < 1e-12 * energy);
        let eig = crate::linalg::hermitian_eigen(&r.matrix, false).unwrap();
        assert!(eig.values[0] >= -1e-12 * r.matrix.trace().re);
    }

    #[test]
    fn noise_only_scm_diagonal() {
        let s = scenario(vec![Source { u: 0.0, power: 1e-12 }], 2.0, vec![100.0], 10_000);
        let r = scm(&synthesize(&s, 3).unwrap(), 0);
        for i in 0..6 {
            assert!((r.matrix[(i, i)].re - 2.0).abs() / 2.0 < 0.05);
        }
    }

    #[test]
    fn identity_covariance_gives_delta_correlation() {
        let coarray = ArrayGeometry::mra6().coarray();
        let cov = SampleCovariance {
            matrix: CMatrix::identity(6),
            snapshot_count: 1,
            freq: 100.0,
        };
        let r = coarray_correlation(&cov, &coarray).unwrap();
        assert_eq!(r.p(), 14);
        for k in r.lags() {
            let expect = if k == 0 { 1.0 } else { 0.0 };
            assert!((r.get(k) - Complex::new(expect, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn ensemble_single_source_correlation() {
        // R = s2 v v^H + n2 I with v_n = exp(-j pi p_n u): every pair at lag k
        // carries exp(-j pi k u).
        let array = ArrayManifold::half_wavelength(ArrayGeometry::mra6(), 343.0, 100.0).unwrap();
        let (s2, n2, u0) = (1.5, 0.7, 0.37);
        let v = array.steering(100.0, u0).unwrap();
        let matrix = CMatrix::from_fn(6, |i, j| {
            v[i] * v[j].conj() * s2 + if i == j { Complex::new(n2, 0.0) } else { Complex::zero() }
        });
        let cov = SampleCovariance { matrix, snapshot_count: 1, freq: 100.0 };
        let r = coarray_correlation(&cov, &ArrayGeometry::mra6().coarray()).unwrap();
        for k in r.lags() {
            let phase = -std::f64::consts::PI * k as f64 * u0;
            let mut expect = Complex::new(phase.cos(), phase.sin()) * s2;
            if k == 0 {
                expect += n2;
            }
            assert!((r.get(k) - expect).norm() < 1e-12, "lag {k}");
        }
    }

    #[test]
    fn largest_lag_uses_single_pair() {
        let coarray = ArrayGeometry::mra6().coarray();
        let mut matrix = CMatrix::<f64>::zeros(6);
        matrix[(5, 0)] = Complex::new(0.3, -0.2);
        matrix[(0, 5)] = Complex::new(0.3, 0.2);
        let cov = SampleCovariance { matrix, snapshot_count: 1, freq: 100.0 };
        let r = coarray_correlation(&cov, &coarray).unwrap();
        assert_eq!(r.get(13), Complex::new(0.3, -0.2));
        assert_eq!(r.get(-13), Complex::new(0.3, 0.2));
    }

    #[test]
    fn grid_points() {
        let g = UGrid::<f64>::new(4).unwrap();
        assert_eq!(g.points(), &[-1.0, -0.5, 0.0, 0.5]);
        assert!(UGrid::<f64>::new(1).is_err());
    }

    #[test]
    fn beamformer_bilinear_identity() {
        let s = scenario(
            vec![Source { u: 0.1, power: 1.0 }, Source { u: 0.6, power: 0.5 }],
            1.0,
            vec![83.0, 100.0, 117.0],
            5,
        );
        let x = synthesize(&s, 21).unwrap();
        let grid = UGrid::new(64).unwrap();
        for m in 0..3 {
            let a = narrowband_periodogram(&x, m, &grid).unwrap();
            let b = periodogram_from_scm(&scm(&x, m), x.array(), &grid).unwrap();
            for (p, q) in a.values.iter().zip(&b.values) {
                assert!((p - q).abs() <= 1e-10 * p.abs().max(1e-300));
            }
        }
    }

    #[test]
    fn noiseless_peak_height_is_n_squared() {
        let s = scenario(vec![Source { u: 0.25, power: 1.0 }], 1e-30, vec![100.0], 1);
        let x = synthesize(&s, 2).unwrap();
        // unit-power ensemble: normalize by the single draw's power
        let amp2 = x.snapshot(0, 0)[0].norm_sqr();
        let grid = UGrid::new(256).unwrap();
        let t = narrowband_periodogram(&x, 0, &grid).unwrap();
        let (u_peak, height) = t.peak();
        assert!((u_peak - 0.25).abs() < 1e-12);
        assert!((height / amp2 - 36.0).abs() < 1e-9);
    }

    #[test]
    fn broadside_wideband_peak() {
        let s = scenario(vec![Source { u: 0.0, power: 1.0 }], 1e-30, vec![80.0, 95.0, 120.0], 1);
        let x = synthesize(&s, 2).unwrap();
        let t = wideband_periodogram(&x, &UGrid::new(256).unwrap()).unwrap();
        assert_eq!(t.peak().0, 0.0);
        for m in 0..3 {
            let tm = narrowband_periodogram(&x, m, &UGrid::new(256).unwrap()).unwrap();
            assert_eq!(tm.peak().0, 0.0);
            let amp2 = x.snapshot(m, 0)[0].norm_sqr();
            assert!((tm.peak().1 / amp2 - 36.0).abs() < 1e-9);
        }
    }

    #[test]
    fn wideband_degenerate_cases() {
        let s = scenario(vec![Source { u: 0.3, power: 1.0 }], 1.0, vec![100.0], 3);
        let x = synthesize(&s, 4).unwrap();
        let grid = UGrid::new(64).unwrap();
        assert_eq!(
            wideband_periodogram(&x, &grid).unwrap().values,
            narrowband_periodogram(&x, 0, &grid).unwrap().values
        );

        // duplicate one bin's data into two bins
        let bin: Vec<Complex<f64>> = x.bin(0).flat_map(|v| v.iter().copied()).collect();
        let data = [bin.clone(), bin].concat();
        let twin = SnapshotTensor::from_data(x.array().clone(), vec![100.0, 100.0], 3, data).unwrap();
        let a = wideband_periodogram(&twin, &grid).unwrap();
        let b = narrowband_periodogram(&x, 0, &grid).unwrap();
        for (p, q) in a.values.iter().zip(&b.values) {
            assert!((p - q).abs() < 1e-12 * q.max(1.0));
        }
    }

    #[test]
    fn flat_periodogram_inverts_to_dc() {
        let coarray = ArrayGeometry::mra6().coarray();
        let t = Periodogram {
            grid: UGrid::new(64).unwrap(),
            values: vec![2.5f64; 64],
        };
        let r = correlation_from_periodogram(&t, &coarray).unwrap();
        assert!((r.get(0).re - 2.5 / 6.0).abs() < 1e-14);
        for k in 1..14 {
            assert!(r.get(k).norm() < 1e-14);
        }
    }

    #[test]
    fn grid_below_bound_rejected() {
        let coarray = ArrayGeometry::mra6().coarray();
        let t = Periodogram {
            grid: UGrid::new(26).unwrap(),
            values: vec![1.0; 26],
        };
        assert!(correlation_from_periodogram(&t, &coarray).is_err());
        let s = scenario(vec![Source { u: 0.3, power: 1.0 }], 1.0, vec![100.0], 3);
        let x = synthesize(&s, 4).unwrap();
        assert!(narrowband_periodogram(&x, 0, &UGrid::new(26).unwrap()).is_err());
    }

    #[test]
    fn narrowband_routes_agree_at_design_frequency() {
        let coarray = ArrayGeometry::mra6().coarray();
        for (seed, ng) in [(1, 27), (2, 64), (3, 256), (4, 101)] {
            let s = scenario(
                vec![Source { u: -0.41, power: 2.0 }, Source { u: 0.2, power: 1.0 }],
                1.0,
                vec![100.0],
                4,
            );
            let x = synthesize(&s, seed).unwrap();
            let grid = UGrid::new(ng).unwrap();
            let via_periodogram =
                correlation_from_periodogram(&wideband_periodogram(&x, &grid).unwrap(), &coarray).unwrap();
            let direct = coarray_correlation(&scm(&x, 0), &coarray).unwrap();
            assert!(rel_err(&via_periodogram, &direct) < 1e-10, "Ng = {ng}");
        }
    }

    #[test]
    fn parseval_dc_term() {
        let s = scenario(vec![Source { u: 0.5, power: 1.0 }], 0.3, vec![85.0, 115.0], 2);
        let x = synthesize(&s, 6).unwrap();
        let t = wideband_periodogram(&x, &UGrid::new(128).unwrap()).unwrap();
        let r = correlation_from_periodogram(&t, &ArrayGeometry::mra6().coarray()).unwrap();
        let mean = t.values.iter().sum::<f64>() / t.values.len() as f64;
        assert!((r.get(0).re - mean / 6.0).abs() < 1e-12 * mean);
        assert_eq!(r.get(0).im, 0.0);
        assert_eq!(r.symmetry_defect(), 0.0);
    }

    #[test]
    fn clamp_distinguishes_rounding_from_bugs() {
        let mut ok = vec![1.0, -1e-14, 0.5];
        clamp_nonnegative(&mut ok).unwrap();
        assert_eq!(ok, vec![1.0, 0.0, 0.5]);
        assert!(clamp_nonnegative(&mut [1.0, -1e-3]).is_err());
    }

    #[test]
    fn correlation_vector_construction() {
        let half = [Complex::new(2.0, 0.4), Complex::new(0.1, 0.2)];
        let r = CorrelationVector::from_nonnegative_lags(&half).unwrap();
        assert_eq!(r.p(), 2);
        assert_eq!(r.get(0), Complex::new(2.0, 0.0));
        assert_eq!(r.get(-1), Complex::new(0.1, -0.2));
        assert!(CorrelationVector::<f64>::from_lag_values(vec![Complex::zero(); 4]).is_err());
    }
}
