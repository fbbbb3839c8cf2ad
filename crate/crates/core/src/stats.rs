//! Estimates and deterministic parallel Monte Carlo reductions.
//!
//! All estimators in this crate reduce per-sample contributions in fixed-size
//! chunks: chunk `c` of a run derives its own random stream `("chunk", c)`,
//! accumulates sequentially, and the chunk partials are folded in chunk
//! order. Threads only decide who computes which chunk, never the result, so
//! means are reproducible bit-for-bit across thread counts.

use std::ops::Range;

use rayon::prelude::*;

use crate::rng::RngStream;

/// Point estimate with its standard error and provenance.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    /// Number of contributing samples (after discards).
    pub n: u64,
    /// Root seed of the stream that produced the estimate.
    pub seed: u64,
}

impl Estimate {
    /// Half-width of the central 95% interval under a normal approximation.
    pub fn ci95_half_width(&self) -> f64 {
        1.959963984540054 * self.stderr
    }

    /// Whether two estimates' 95% intervals overlap.
    pub fn ci95_overlaps(&self, other: &Estimate) -> bool {
        (self.mean - other.mean).abs() <= self.ci95_half_width() + other.ci95_half_width()
    }
}

/// Chunk size shared by every Monte Carlo reduction (draws per chunk),
/// independent of parallelism so summation order is fixed.
pub const SAMPLE_CHUNK: u64 = 1 << 16;

/// Split `0..n` into consecutive ranges of `chunk` items (last may be short).
pub fn chunk_ranges(n: u64, chunk: u64) -> Vec<Range<u64>> {
    assert!(chunk > 0, "chunk size must be positive");
    let mut out = Vec::with_capacity(n.div_ceil(chunk) as usize);
    let mut lo = 0;
    while lo < n {
        let hi = (lo + chunk).min(n);
        out.push(lo..hi);
        lo = hi;
    }
    out
}

/// Deterministic parallel map-reduce over item indices `0..n`.
///
/// `map_chunk` turns one index range into a partial aggregate; partials are
/// folded left-to-right in chunk order regardless of which thread produced
/// them.
pub fn reduce_indexed<A, F>(n: u64, chunk: u64, map_chunk: F) -> Vec<A>
where
    A: Send,
    F: Fn(Range<u64>) -> A + Sync + Send,
{
    chunk_ranges(n, chunk)
        .into_par_iter()
        .map(map_chunk)
        .collect()
}

/// Accumulator for a scalar mean with standard error.
#[derive(Debug, Clone, Copy, Default)]
pub struct MeanAcc {
    pub sum: f64,
    pub sum_sq: f64,
    pub n: u64,
}

impl MeanAcc {
    pub fn push(&mut self, x: f64) {
        self.sum += x;
        self.sum_sq += x * x;
        self.n += 1;
    }

    pub fn merge(&mut self, other: &MeanAcc) {
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
        self.n += other.n;
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        if self.n == 0 {
            f64::NAN
        } else {
            self.sum / self.n as f64
        }
    }

    pub fn estimate(&self, seed: u64) -> Estimate {
        let n = self.n as f64;
        if self.n == 0 {
            return Estimate {
                mean: f64::NAN,
                stderr: f64::NAN,
                n: 0,
                seed,
            };
        }
        let mean = self.sum / n;
        let var = (self.sum_sq / n - mean * mean).max(0.0);
        let stderr = if self.n > 1 { (var / n).sqrt() } else { f64::NAN };
        Estimate {
            mean,
            stderr,
            n: self.n,
            seed,
        }
    }
}

/// Accumulator for a ratio of means `E[x]/E[y]` with a delta-method error.
///
/// Used by the weighted (Kac-Rice) estimators where `x = weight * indicator`
/// and `y = weight`.
#[derive(Debug, Clone, Copy, Default)]
pub struct RatioAcc {
    pub sum_x: f64,
    pub sum_y: f64,
    pub sum_xx: f64,
    pub sum_yy: f64,
    pub sum_xy: f64,
    pub n: u64,
}

impl RatioAcc {
    pub fn push(&mut self, x: f64, y: f64) {
        self.sum_x += x;
        self.sum_y += y;
        self.sum_xx += x * x;
        self.sum_yy += y * y;
        self.sum_xy += x * y;
        self.n += 1;
    }

    pub fn merge(&mut self, other: &RatioAcc) {
        self.sum_x += other.sum_x;
        self.sum_y += other.sum_y;
        self.sum_xx += other.sum_xx;
        self.sum_yy += other.sum_yy;
        self.sum_xy += other.sum_xy;
        self.n += other.n;
    }

    pub fn estimate(&self, seed: u64) -> Estimate {
        let n = self.n as f64;
        if self.n == 0 || self.sum_y == 0.0 {
            return Estimate {
                mean: f64::NAN,
                stderr: f64::NAN,
                n: self.n,
                seed,
            };
        }
        let mx = self.sum_x / n;
        let my = self.sum_y / n;
        let ratio = mx / my;
        // Var(x/y-ratio) ~ (v_xx - 2 r v_xy + r^2 v_yy) / (n my^2).
        let v_xx = (self.sum_xx / n - mx * mx).max(0.0);
        let v_yy = (self.sum_yy / n - my * my).max(0.0);
        let v_xy = self.sum_xy / n - mx * my;
        let var = (v_xx - 2.0 * ratio * v_xy + ratio * ratio * v_yy).max(0.0) / (n * my * my);
        Estimate {
            mean: ratio,
            stderr: var.sqrt(),
            n: self.n,
            seed,
        }
    }
}

/// Chunked mean of a per-draw statistic generated from derived streams.
///
/// `f` receives the chunk's generator and must draw exactly per item.
pub fn mc_mean<F>(stream: &RngStream, n: u64, per_draw: F) -> Estimate
where
    F: Fn(&mut rand_chacha::ChaCha8Rng) -> f64 + Sync,
{
    let partials = reduce_indexed(n, SAMPLE_CHUNK, |range| {
        let chunk_index = range.start / SAMPLE_CHUNK;
        let mut rng = stream.derive_stream("chunk", chunk_index).rng();
        let mut acc = MeanAcc::default();
        for _ in range {
            acc.push(per_draw(&mut rng));
        }
        acc
    });
    let mut total = MeanAcc::default();
    for p in &partials {
        total.merge(p);
    }
    total.estimate(stream.root_seed())
}

/// Chunked ratio-of-means `E[x]/E[y]` of a per-draw pair.
pub fn mc_ratio<F>(stream: &RngStream, n: u64, per_draw: F) -> Estimate
where
    F: Fn(&mut rand_chacha::ChaCha8Rng) -> (f64, f64) + Sync,
{
    let partials = reduce_indexed(n, SAMPLE_CHUNK, |range| {
        let chunk_index = range.start / SAMPLE_CHUNK;
        let mut rng = stream.derive_stream("chunk", chunk_index).rng();
        let mut acc = RatioAcc::default();
        for _ in range {
            let (x, y) = per_draw(&mut rng);
            acc.push(x, y);
        }
        acc
    });
    let mut total = RatioAcc::default();
    for p in &partials {
        total.merge(p);
    }
    total.estimate(stream.root_seed())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunk_ranges_cover_without_overlap() {
        let ranges = chunk_ranges(10, 4);
        assert_eq!(ranges, vec![0..4, 4..8, 8..10]);
        assert!(chunk_ranges(0, 4).is_empty());
    }

    #[test]
    fn mean_acc_matches_direct_computation() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let mut acc = MeanAcc::default();
        for &x in &xs {
            acc.push(x);
        }
        let est = acc.estimate(0);
        assert!((est.mean - 2.5).abs() < 1e-15);
        // Population variance 1.25, stderr = sqrt(1.25/4).
        assert!((est.stderr - (1.25f64 / 4.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn ratio_acc_constant_weights_reduce_to_plain_mean() {
        let mut r = RatioAcc::default();
        let mut m = MeanAcc::default();
        let xs = [0.0, 1.0, 1.0, 0.0, 1.0];
        for &x in &xs {
            r.push(x, 1.0);
            m.push(x);
        }
        let er = r.estimate(0);
        let em = m.estimate(0);
        assert!((er.mean - em.mean).abs() < 1e-15);
        assert!((er.stderr - em.stderr).abs() < 1e-12);
    }

    #[test]
    fn mc_mean_is_thread_count_invariant() {
        let stream = RngStream::root(5).derive_stream("phi", 0);
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| {
                mc_mean(&stream, 200_000, |rng| {
                    let a: num_complex::Complex<f64> = crate::rng::complex_normal(rng);
                    a.norm_sqr()
                })
            })
        };
        let one = run(1);
        let eight = run(8);
        assert_eq!(
            one.mean.to_bits(),
            eight.mean.to_bits(),
            "chunked reduction must not depend on thread count"
        );
        assert!((one.mean - 1.0).abs() < 5e-3);
    }
}
