//! Pointwise Gauss curvature of holomorphic zero sets from 2-jets, the
//! jet-space law of the degree-d ensemble, and the limit constant phi.
//!
//! Conventions fixed here and used everywhere: complex lines have constant
//! curvature 2 pi, a degree-d curve has area 2d, and Gauss-Bonnet reads
//! `integral K dA = 2 pi (2 - (d-1)(d-2))` exactly. The single pointwise
//! formula is `K_fs = 2 pi - pi V` with V the scale-invariant jet statistic
//! below; in flat 2-space the curvature is `K_flat = -V`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::poly::Jet2;
use crate::rng::{complex_normal, RngStream};
use crate::scalar::Real;
use crate::stats::{mc_mean, reduce_indexed, Estimate, RatioAcc, SAMPLE_CHUNK};

/// A jet is treated as singular when the gradient norm is below this factor
/// times the second-order norm (near-nodal point of the zero set).
pub const EPS_GRAD: f64 = 1e-24;

/// Allowed float slack on the structural bound K <= 2 pi.
pub const K_UPPER_SLACK: f64 = 1e-9;

/// Which ambient metric a curvature band refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Flat,
    Fs,
}

/// Closed curvature interval [lo, hi]; lo may be -infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureBand {
    pub lo: f64,
    pub hi: f64,
}

impl CurvatureBand {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::MalformedInput(format!(
                "curvature band needs lo < hi, got [{lo}, {hi}]"
            )));
        }
        Ok(CurvatureBand { lo, hi })
    }

    pub fn contains(&self, k: f64) -> bool {
        self.lo <= k && k <= self.hi
    }
}

/// Interval of the jet statistic V corresponding to a curvature band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VBand {
    pub lo: f64,
    pub hi: f64,
}

impl VBand {
    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }
}

/// Translate a curvature band into V space for the given metric.
///
/// fs: K in [lo, hi] iff V in [(2 pi - hi)/pi, (2 pi - lo)/pi];
/// flat: K in [lo, hi] iff V in [-hi, -lo]. Lower ends clamp at 0 since
/// V >= 0 structurally.
pub fn band_to_v(band: &CurvatureBand, metric: Metric) -> VBand {
    let two_pi = 2.0 * std::f64::consts::PI;
    let (lo, hi) = match metric {
        Metric::Fs => ((two_pi - band.hi) / std::f64::consts::PI, (two_pi - band.lo) / std::f64::consts::PI),
        Metric::Flat => (-band.hi, -band.lo),
    };
    VBand { lo: lo.max(0.0), hi }
}

/// Gradient and second-order squared norms of a jet.
fn jet_norms<T: Real>(jet: &Jet2<T>) -> (T, T) {
    let gn2 = jet.fz.norm_sqr() + jet.fw.norm_sqr();
    let h2 = jet.fzz.norm_sqr() + jet.fww.norm_sqr() + jet.fzw.norm_sqr();
    (gn2, h2)
}

/// The scale-invariant curvature statistic
/// `V = |2 f_zw f_z f_w - f_zz f_w^2 - f_ww f_z^2|^2 / (|f_z|^2 + |f_w|^2)^3`.
///
/// Errors with `SingularPoint` when the gradient is negligible against the
/// second-order part (a near-nodal point); callers discard and count these.
pub fn vitter_v<T: Real>(jet: &Jet2<T>) -> Result<T> {
    let (gn2, h2) = jet_norms(jet);
    let eps = T::of(EPS_GRAD);
    if gn2 <= eps * eps * h2 {
        return Err(Error::SingularPoint);
    }
    let two = T::of(2.0);
    let num = jet.fzw * jet.fz * jet.fw * two - jet.fzz * jet.fw * jet.fw - jet.fww * jet.fz * jet.fz;
    Ok(num.norm_sqr() / (gn2 * gn2 * gn2))
}

/// Gauss curvature of the zero set in flat complex 2-space: `-V`.
pub fn curvature_flat<T: Real>(jet: &Jet2<T>) -> Result<T> {
    Ok(-vitter_v(jet)?)
}

/// Gauss curvature of the zero set in the projective plane: `2 pi - pi V`.
pub fn curvature_fs<T: Real>(jet: &Jet2<T>) -> Result<T> {
    let v = vitter_v(jet)?;
    let pi = T::PI();
    Ok(pi * (T::of(2.0) - v))
}

/// Transport a jet to chart directions rotated by a 2x2 unitary m:
/// u1' = m[0][0] u1 + m[1][0] u2, u2' = m[0][1] u1 + m[1][1] u2. First
/// derivatives transform linearly, second derivatives by the symmetric
/// square. Used by the frame-invariance checks.
pub fn rotate_jet<T: Real>(jet: &Jet2<T>, m: &[[Complex<T>; 2]; 2]) -> Jet2<T> {
    let (a, g) = (m[0][0], m[0][1]);
    let (b, d) = (m[1][0], m[1][1]);
    let two = T::of(2.0);
    Jet2 {
        f0: jet.f0,
        fz: jet.fz * a + jet.fw * b,
        fw: jet.fz * g + jet.fw * d,
        fzz: jet.fzz * a * a + jet.fzw * a * b * two + jet.fww * b * b,
        fww: jet.fzz * g * g + jet.fzw * g * d * two + jet.fww * d * d,
        fzw: jet.fzz * a * g + jet.fzw * (a * d + b * g) + jet.fww * b * d,
    }
}

/// Parameters (r, R) of the limit constant; R may be +infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiParams {
    pub r: f64,
    pub big_r: f64,
}

impl PhiParams {
    pub fn new(r: f64, big_r: f64) -> Result<Self> {
        if !(r > 0.0 && r < big_r) {
            return Err(Error::MalformedInput(format!(
                "phi parameters need 0 < r < R, got r = {r}, R = {big_r}"
            )));
        }
        Ok(PhiParams { r, big_r })
    }
}

/// Closed form of the limit constant:
/// `phi_{r,R} = (1 + r/(2 pi))^-3 - (1 + R/(2 pi))^-3`.
///
/// Derived by a unitary reduction of the jet law (rotate (a,b) to (|.|, 0));
/// validated against the brute-force Monte Carlo `phi_mc` before being used
/// as an oracle anywhere.
pub fn phi_closed(params: &PhiParams) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let lower = (1.0 + params.r / two_pi).powi(-3);
    let upper = if params.big_r.is_finite() {
        (1.0 + params.big_r / two_pi).powi(-3)
    } else {
        0.0
    };
    lower - upper
}

/// The shared jet statistic of one canonical 5-tuple (a, b, alpha, beta,
/// gamma): returns (s, W) with s = |a|^2 + |b|^2 and
/// W = |2 gamma a b - sqrt2 alpha b^2 - sqrt2 beta a^2|^2 / s^3.
#[inline]
fn w_statistic(
    a: Complex<f64>,
    b: Complex<f64>,
    alpha: Complex<f64>,
    beta: Complex<f64>,
    gamma: Complex<f64>,
) -> (f64, f64) {
    let s = a.norm_sqr() + b.norm_sqr();
    let sqrt2 = std::f64::consts::SQRT_2;
    let num = gamma * a * b * 2.0 - alpha * b * b * sqrt2 - beta * a * a * sqrt2;
    (s, num.norm_sqr() / (s * s * s))
}

#[inline]
fn draw_five(rng: &mut rand_chacha::ChaCha8Rng) -> [Complex<f64>; 5] {
    // Fixed draw order (a, b, alpha, beta, gamma) for reproducibility.
    [
        complex_normal(rng),
        complex_normal(rng),
        complex_normal(rng),
        complex_normal(rng),
        complex_normal(rng),
    ]
}

/// Monte Carlo estimate of phi_{r,R}: the mean of
/// `(|a|^2 + |b|^2)/2 * 1{pi W in [r, R]}` over i.i.d. canonical complex
/// Gaussian 5-tuples. The 1/2 converts the variance-2 convention of the
/// defining integral to the canonical E|a|^2 = 1 draws; the indicator needs
/// no conversion because W is scale-invariant of degree 0.
pub fn phi_mc(params: &PhiParams, n: u64, stream: &RngStream) -> Estimate {
    let (r, big_r) = (params.r, params.big_r);
    let pi = std::f64::consts::PI;
    mc_mean(stream, n, move |rng| {
        let [a, b, alpha, beta, gamma] = draw_five(rng);
        let (s, w) = w_statistic(a, b, alpha, beta, gamma);
        let pw = pi * w;
        if r <= pw && pw <= big_r {
            0.5 * s
        } else {
            0.0
        }
    })
}

/// Draw the exact 2-jet law of the degree-d ensemble at a point:
/// fz = sqrt(d) a, fw = sqrt(d) b, fzz = sqrt(2 d (d-1)) alpha,
/// fww = sqrt(2 d (d-1)) beta, fzw = sqrt(d (d-1)) gamma, f0 = 0
/// (the value component is independent of the derivatives and is fixed to 0
/// by the zero-set conditioning of every consumer).
pub fn sample_exact_jet(d: u32, stream: &RngStream) -> Jet2<f64> {
    assert!(d >= 2, "the exact jet law needs d >= 2");
    let mut rng = stream.rng();
    let five = draw_five(&mut rng);
    exact_jet_from_normals(d, &five)
}

/// Assemble the exact jet from an already-drawn canonical 5-tuple.
pub(crate) fn exact_jet_from_normals(d: u32, five: &[Complex<f64>; 5]) -> Jet2<f64> {
    let df = d as f64;
    let s1 = df.sqrt();
    let s2 = (2.0 * df * (df - 1.0)).sqrt();
    let s11 = (df * (df - 1.0)).sqrt();
    Jet2 {
        f0: Complex::new(0.0, 0.0),
        fz: five[0] * s1,
        fw: five[1] * s1,
        fzz: five[2] * s2,
        fww: five[3] * s2,
        fzw: five[4] * s11,
    }
}

/// Running extremes of observed curvature values, for the structural bound
/// K <= 2 pi (+ float slack).
#[derive(Debug, Clone, Copy)]
pub struct KStats {
    pub n: u64,
    pub max_k: f64,
    pub n_violations: u64,
}

impl Default for KStats {
    fn default() -> Self {
        KStats { n: 0, max_k: f64::NEG_INFINITY, n_violations: 0 }
    }
}

impl KStats {
    pub fn push(&mut self, k: f64) {
        self.n += 1;
        if k > self.max_k {
            self.max_k = k;
        }
        if k > 2.0 * std::f64::consts::PI + K_UPPER_SLACK {
            self.n_violations += 1;
        }
    }

    pub fn merge(&mut self, other: &KStats) {
        self.n += other.n;
        if other.max_k > self.max_k {
            self.max_k = other.max_k;
        }
        self.n_violations += other.n_violations;
    }
}

/// Result of a multi-degree jet-space scan sharing one stream of draws.
pub struct JetKappaScan {
    /// One (degree, estimate) per requested degree, in input order.
    pub estimates: Vec<(u32, Estimate)>,
    /// Curvature extremes across every evaluated (draw, degree) pair.
    pub k_stats: KStats,
}

/// Kac-Rice jet estimator of E[kappa(Z, band)] at several degrees from the
/// same underlying Gaussian draws (common random numbers, so cross-degree
/// comparisons are maximally correlated). `band_of` maps each degree to its
/// curvature band in the projective metric.
pub fn expected_kappa_jet_scan<F>(
    ds: &[u32],
    band_of: F,
    n: u64,
    stream: &RngStream,
) -> JetKappaScan
where
    F: Fn(u32) -> CurvatureBand + Sync,
{
    assert!(ds.iter().all(|&d| d >= 2), "jet law needs d >= 2");
    let vbands: Vec<VBand> = ds.iter().map(|&d| band_to_v(&band_of(d), Metric::Fs)).collect();
    let pi = std::f64::consts::PI;

    struct Partial {
        accs: Vec<RatioAcc>,
        k_stats: KStats,
    }

    let partials = reduce_indexed(n, SAMPLE_CHUNK, |range| {
        let chunk_index = range.start / SAMPLE_CHUNK;
        let mut rng = stream.derive_stream("chunk", chunk_index).rng();
        let mut accs = vec![RatioAcc::default(); ds.len()];
        let mut k_stats = KStats::default();
        for _ in range {
            let [a, b, alpha, beta, gamma] = draw_five(&mut rng);
            let (s, w) = w_statistic(a, b, alpha, beta, gamma);
            for (i, &d) in ds.iter().enumerate() {
                let df = d as f64;
                let v = (df - 1.0) * w;
                let weight = df * s;
                let k = pi * (2.0 - v);
                k_stats.push(k);
                let x = if vbands[i].contains(v) { weight } else { 0.0 };
                accs[i].push(x, weight);
            }
        }
        Partial { accs, k_stats }
    });

    let mut accs = vec![RatioAcc::default(); ds.len()];
    let mut k_stats = KStats::default();
    for p in &partials {
        for (acc, part) in accs.iter_mut().zip(&p.accs) {
            acc.merge(part);
        }
        k_stats.merge(&p.k_stats);
    }
    let estimates = ds
        .iter()
        .zip(&accs)
        .map(|(&d, acc)| (d, acc.estimate(stream.root_seed())))
        .collect();
    JetKappaScan { estimates, k_stats }
}

/// Kac-Rice jet estimator of E[kappa(Z, band)] for the exact degree-d
/// ensemble: the weighted frequency E[w 1{K in band}]/E[w] with weight
/// w = |f_z|^2 + |f_w|^2, stderr by the delta method.
pub fn expected_kappa_jet(d: u32, band: &CurvatureBand, n: u64, stream: &RngStream) -> Estimate {
    let band = *band;
    let scan = expected_kappa_jet_scan(&[d], move |_| band, n, stream);
    scan.estimates[0].1
}

/// Area-biased mean of V at degree d: E[w V]/E[w] with w = |f_z|^2 + |f_w|^2.
/// Equals d - 1 exactly (the jet-space form of Gauss-Bonnet).
pub fn area_biased_v_mean(d: u32, n: u64, stream: &RngStream) -> Estimate {
    area_biased_v_scan(d, n, stream).0
}

/// [`area_biased_v_mean`] plus the curvature extremes seen during the scan.
pub fn area_biased_v_scan(d: u32, n: u64, stream: &RngStream) -> (Estimate, KStats) {
    assert!(d >= 2);
    let df = d as f64;
    let pi = std::f64::consts::PI;
    let partials = reduce_indexed(n, SAMPLE_CHUNK, |range| {
        let chunk_index = range.start / SAMPLE_CHUNK;
        let mut rng = stream.derive_stream("chunk", chunk_index).rng();
        let mut acc = RatioAcc::default();
        let mut k_stats = KStats::default();
        for _ in range {
            let [a, b, alpha, beta, gamma] = draw_five(&mut rng);
            let (s, w) = w_statistic(a, b, alpha, beta, gamma);
            let v = (df - 1.0) * w;
            let weight = df * s;
            k_stats.push(pi * (2.0 - v));
            acc.push(weight * v, weight);
        }
        (acc, k_stats)
    });
    let mut acc = RatioAcc::default();
    let mut k_stats = KStats::default();
    for (a, s) in &partials {
        acc.merge(a);
        k_stats.merge(s);
    }
    (acc.estimate(stream.root_seed()), k_stats)
}

/// Common-random-numbers scan of the degree-scaled band family
/// [2 pi - R d, 2 pi - r d] across degrees, together with the limit-law
/// estimate of phi_{r,R} from the same draws. Every degree's estimate shares
/// the limit estimate's Monte Carlo offset, and the limit value is known
/// exactly ([`phi_closed`]), so `est_d - (limit - phi_closed)` removes the
/// common noise and resolves finite-d gaps far below the raw standard error
/// (a control variate with exactly known mean).
pub fn kappa_jet_limit_scan(
    ds: &[u32],
    params: &PhiParams,
    n: u64,
    stream: &RngStream,
) -> (JetKappaScan, Estimate) {
    assert!(ds.iter().all(|&d| d >= 2), "jet law needs d >= 2");
    let two_pi = 2.0 * std::f64::consts::PI;
    let (r, big_r) = (params.r, params.big_r);
    let vbands: Vec<VBand> = ds
        .iter()
        .map(|&d| {
            let df = d as f64;
            let band = CurvatureBand::new(two_pi - big_r * df, two_pi - r * df)
                .expect("r < R yields a valid band");
            band_to_v(&band, Metric::Fs)
        })
        .collect();
    let pi = std::f64::consts::PI;

    struct Partial {
        accs: Vec<RatioAcc>,
        limit: RatioAcc,
        k_stats: KStats,
    }

    let partials = reduce_indexed(n, SAMPLE_CHUNK, |range| {
        let chunk_index = range.start / SAMPLE_CHUNK;
        let mut rng = stream.derive_stream("chunk", chunk_index).rng();
        let mut accs = vec![RatioAcc::default(); ds.len()];
        let mut limit = RatioAcc::default();
        let mut k_stats = KStats::default();
        for _ in range {
            let [a, b, alpha, beta, gamma] = draw_five(&mut rng);
            let (s, w) = w_statistic(a, b, alpha, beta, gamma);
            for (i, &d) in ds.iter().enumerate() {
                let df = d as f64;
                let v = (df - 1.0) * w;
                let weight = df * s;
                let k = pi * (2.0 - v);
                k_stats.push(k);
                let x = if vbands[i].contains(v) { weight } else { 0.0 };
                accs[i].push(x, weight);
            }
            let pw = pi * w;
            limit.push(if r <= pw && pw <= big_r { s } else { 0.0 }, s);
        }
        Partial { accs, limit, k_stats }
    });

    let mut accs = vec![RatioAcc::default(); ds.len()];
    let mut limit = RatioAcc::default();
    let mut k_stats = KStats::default();
    for p in &partials {
        for (acc, part) in accs.iter_mut().zip(&p.accs) {
            acc.merge(part);
        }
        limit.merge(&p.limit);
        k_stats.merge(&p.k_stats);
    }
    let estimates = ds
        .iter()
        .zip(&accs)
        .map(|(&d, acc)| (d, acc.estimate(stream.root_seed())))
        .collect();
    (JetKappaScan { estimates, k_stats }, limit.estimate(stream.root_seed()))
}
