//! Area-uniform sampling of points on projective plane curves by random
//! lines: a unitary-invariant random line meets a degree-d curve in d points,
//! and weighting all intersection points equally makes the point law the
//! normalized area measure on the curve. Everything downstream (band
//! fractions, Gauss-Bonnet totals, curvature histograms, tail bounds) is a
//! plain or ratio mean over these samples.

use num_complex::Complex;

use crate::curvature::{curvature_fs, CurvatureBand, KStats, PhiParams};
use crate::error::{check_discards, Error, Result};
use crate::linalg;
use crate::poly::{directional_jet, restrict_to_line, sample_kostlan, unitary_frame, HomPoly3, ProjLine, ProjPoint};
use crate::rng::{complex_normal, RngStream};
use crate::stats::{reduce_indexed, Estimate, MeanAcc, SAMPLE_CHUNK};

/// How many fresh lines to try when a draw is degenerate for the given curve
/// (tangent at infinity of the restriction, failed root contract) before
/// declaring the curve ill conditioned.
pub const MAX_LINE_ATTEMPTS: u64 = 64;

/// Retained points must satisfy |P(x)| <= MEMBERSHIP_TOL * coeff_scale(P)
/// at their unit representative.
pub const MEMBERSHIP_TOL: f64 = 1e-8;

/// One intersection point of a random line with the curve.
#[derive(Debug, Clone, Copy)]
pub struct CurvatureSample {
    pub point: ProjPoint<f64>,
    /// Projective-metric Gauss curvature; NaN when `discarded`.
    pub k: f64,
    pub line_index: u64,
    pub root_index: u32,
    /// True when the jet was singular (near-nodal point); such samples carry
    /// no curvature and are excluded from means but counted.
    pub discarded: bool,
}

/// Band fraction estimate for one curve.
#[derive(Debug, Clone)]
pub struct KappaEstimate {
    pub band: CurvatureBand,
    pub est: Estimate,
    pub n_discarded: u64,
}

/// Draw a unitary-invariant random projective line: Gram-Schmidt of two
/// i.i.d. complex Gaussian 3-vectors.
pub fn sample_random_line<T: crate::scalar::Real>(stream: &RngStream) -> ProjLine<T> {
    let mut rng = stream.rng();
    loop {
        let a: [Complex<T>; 3] = [complex_normal(&mut rng), complex_normal(&mut rng), complex_normal(&mut rng)];
        let b: [Complex<T>; 3] = [complex_normal(&mut rng), complex_normal(&mut rng), complex_normal(&mut rng)];
        let Some(u) = linalg::normalize(&a) else { continue };
        let Some(v) = linalg::normalize(&linalg::project_out(&b, &u)) else { continue };
        return ProjLine { u, v };
    }
}

/// Intersect one concrete line with the curve and evaluate the curvature at
/// every intersection point. Fails with `DegenerateLine` or
/// `ConvergenceFailure` when this line cannot be used (callers redraw).
pub(crate) fn samples_on_line(
    p: &HomPoly3<f64>,
    line: &ProjLine<f64>,
    line_index: u64,
) -> Result<Vec<CurvatureSample>> {
    let g = restrict_to_line(p, line)?;
    let roots = g.roots()?;
    let scale = p.coeff_scale();
    let mut out = Vec::with_capacity(roots.len());
    for (root_index, &r) in roots.iter().enumerate() {
        let rep = linalg::add(&line.u, &linalg::scale(&line.v, r));
        let point = ProjPoint::from_rep(rep)
            .map_err(|_| Error::ConvergenceFailure("intersection point collapsed to zero".into()))?;
        let residual = p.evaluate(point.rep()).norm();
        if residual > MEMBERSHIP_TOL * scale {
            return Err(Error::ConvergenceFailure(format!(
                "intersection point off the curve: residual {residual:.3e} vs scale {scale:.3e}"
            )));
        }
        let frame = unitary_frame(&point);
        let jet = directional_jet(p, &frame);
        let sample = match curvature_fs(&jet) {
            Ok(k) => CurvatureSample { point, k, line_index, root_index: root_index as u32, discarded: false },
            Err(Error::SingularPoint) => {
                CurvatureSample { point, k: f64::NAN, line_index, root_index: root_index as u32, discarded: true }
            }
            Err(e) => return Err(e),
        };
        out.push(sample);
    }
    Ok(out)
}

/// Samples from the `line_index`-th random line of a parent stream,
/// redrawing the line (from its own attempt substreams, so neighbours are
/// unaffected) when a draw is degenerate for this curve.
fn samples_for_line(
    p: &HomPoly3<f64>,
    parent: &RngStream,
    line_index: u64,
) -> Result<Vec<CurvatureSample>> {
    let line_stream = parent.derive_stream("line", line_index);
    for attempt in 0..MAX_LINE_ATTEMPTS {
        let line = sample_random_line(&line_stream.derive_stream("attempt", attempt));
        match samples_on_line(p, &line, line_index) {
            Ok(samples) => return Ok(samples),
            Err(Error::DegenerateLine) | Err(Error::ConvergenceFailure(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::IllConditioned(format!(
        "no usable line after {MAX_LINE_ATTEMPTS} redraws; the curve is likely singular or extreme"
    )))
}

fn merge_results<A>(parts: Vec<Result<A>>) -> Result<Vec<A>> {
    parts.into_iter().collect()
}

/// Area-uniform curvature samples from `n_lines` random lines (d samples
/// per line). Singular points come back flagged, not dropped, so callers
/// can count discards.
pub fn sample_curve_points(
    p: &HomPoly3<f64>,
    n_lines: u64,
    stream: &RngStream,
) -> Result<Vec<CurvatureSample>> {
    let parts = reduce_indexed(n_lines, SAMPLE_CHUNK, |range| {
        let mut chunk = Vec::with_capacity((range.end - range.start) as usize * p.degree() as usize);
        for line_index in range {
            chunk.extend(samples_for_line(p, stream, line_index)?);
        }
        Ok(chunk)
    });
    Ok(merge_results(parts)?.into_iter().flatten().collect())
}

struct BandScanPart {
    acc: MeanAcc,
    k_stats: KStats,
    n_discarded: u64,
}

/// Streaming scan of one curve: per-sample closure output averaged over
/// retained samples, discards and curvature extremes tracked.
fn scan_curve<F>(p: &HomPoly3<f64>, n_lines: u64, stream: &RngStream, value: F) -> Result<BandScanPart>
where
    F: Fn(f64) -> f64 + Sync,
{
    let parts = reduce_indexed(n_lines, SAMPLE_CHUNK, |range| {
        let mut part = BandScanPart { acc: MeanAcc::default(), k_stats: KStats::default(), n_discarded: 0 };
        for line_index in range {
            for s in samples_for_line(p, stream, line_index)? {
                if s.discarded {
                    part.n_discarded += 1;
                } else {
                    part.k_stats.push(s.k);
                    part.acc.push(value(s.k));
                }
            }
        }
        Ok(part)
    });
    let mut total = BandScanPart { acc: MeanAcc::default(), k_stats: KStats::default(), n_discarded: 0 };
    for part in merge_results(parts)? {
        total.acc.merge(&part.acc);
        total.k_stats.merge(&part.k_stats);
        total.n_discarded += part.n_discarded;
    }
    Ok(total)
}

/// [`kappa_estimate`] plus the curvature extremes seen while scanning.
pub fn kappa_estimate_scan(
    p: &HomPoly3<f64>,
    band: &CurvatureBand,
    n_lines: u64,
    stream: &RngStream,
) -> Result<(KappaEstimate, KStats)> {
    let b = *band;
    let part = scan_curve(p, n_lines, stream, move |k| if b.contains(k) { 1.0 } else { 0.0 })?;
    let retained = part.acc.count();
    check_discards(part.n_discarded, retained + part.n_discarded)?;
    let mean = part.acc.mean();
    // Binomial standard error for the 0/1 indicator.
    let stderr = if retained > 0 { (mean * (1.0 - mean) / retained as f64).sqrt() } else { f64::NAN };
    let est = Estimate { mean, stderr, n: retained, seed: stream.root_seed() };
    Ok((KappaEstimate { band: b, est, n_discarded: part.n_discarded }, part.k_stats))
}

/// Fraction of the curve's area with curvature in `band`, from `n_lines`
/// random lines. Binomial stderr; errors with `TooManyDiscards` when the
/// singular-point rate exceeds the global policy.
pub fn kappa_estimate(
    p: &HomPoly3<f64>,
    band: &CurvatureBand,
    n_lines: u64,
    stream: &RngStream,
) -> Result<KappaEstimate> {
    Ok(kappa_estimate_scan(p, band, n_lines, stream)?.0)
}

/// [`expected_kappa_curves`] plus the curvature extremes and the total
/// number of discarded samples across all curves.
pub fn expected_kappa_curves_scan(
    d: u32,
    band: &CurvatureBand,
    n_curves: u64,
    n_lines: u64,
    stream: &RngStream,
) -> Result<(Estimate, KStats, u64)> {
    let parts = reduce_indexed(n_curves, SAMPLE_CHUNK, |range| {
        let mut acc = MeanAcc::default();
        let mut k_stats = KStats::default();
        let mut n_discarded = 0u64;
        for c in range {
            let curve_stream = stream.derive_stream("curve", c);
            let p: HomPoly3<f64> = sample_kostlan(d, &curve_stream.derive_stream("poly", 0));
            let (kappa, stats) = kappa_estimate_scan(&p, band, n_lines, &curve_stream.derive_stream("lines", 0))?;
            acc.push(kappa.est.mean);
            k_stats.merge(&stats);
            n_discarded += kappa.n_discarded;
        }
        Ok((acc, k_stats, n_discarded))
    });
    let mut acc = MeanAcc::default();
    let mut k_stats = KStats::default();
    let mut n_discarded = 0u64;
    for (a, s, disc) in merge_results(parts)? {
        acc.merge(&a);
        k_stats.merge(&s);
        n_discarded += disc;
    }
    // Between-curve spread; each curve contributes its own within-curve
    // Monte Carlo noise, which this stderr absorbs empirically.
    Ok((acc.estimate(stream.root_seed()), k_stats, n_discarded))
}

/// Ensemble mean of the band fraction over `n_curves` random degree-d
/// curves, `n_lines` lines each; stderr from the between-curve spread.
pub fn expected_kappa_curves(
    d: u32,
    band: &CurvatureBand,
    n_curves: u64,
    n_lines: u64,
    stream: &RngStream,
) -> Result<Estimate> {
    Ok(expected_kappa_curves_scan(d, band, n_curves, n_lines, stream)?.0)
}

/// [`gauss_bonnet_check`] plus the curvature extremes and the number of
/// discarded samples: (total estimate, target, extremes, discards).
pub fn gauss_bonnet_scan(
    p: &HomPoly3<f64>,
    n_lines: u64,
    stream: &RngStream,
) -> Result<(Estimate, f64, KStats, u64)> {
    let d = p.degree() as f64;
    let part = scan_curve(p, n_lines, stream, |k| k)?;
    check_discards(part.n_discarded, part.acc.count() + part.n_discarded)?;
    let mean = part.acc.estimate(stream.root_seed());
    // The curve has area 2d in these units, so the total curvature is the
    // area-uniform mean rescaled by 2d.
    let total = Estimate { mean: 2.0 * d * mean.mean, stderr: 2.0 * d * mean.stderr, n: mean.n, seed: mean.seed };
    let target = 2.0 * std::f64::consts::PI * (2.0 - (d - 1.0) * (d - 2.0));
    Ok((total, target, part.k_stats, part.n_discarded))
}

/// Monte Carlo total curvature of the curve and its Gauss-Bonnet target
/// `2 pi (2 - (d-1)(d-2))`.
pub fn gauss_bonnet_check(p: &HomPoly3<f64>, n_lines: u64, stream: &RngStream) -> Result<(Estimate, f64)> {
    let (total, target, _, _) = gauss_bonnet_scan(p, n_lines, stream)?;
    Ok((total, target))
}

/// One row of a curvature histogram over (-inf, 2 pi].
#[derive(Debug, Clone, Copy)]
pub struct HistRow {
    pub lo: f64,
    pub hi: f64,
    /// Fraction of retained samples in [lo, hi); the final row is closed.
    pub mass: f64,
    pub count: u64,
}

/// Ensemble curvature histogram. `edges` must be strictly increasing and
/// at most 2 pi; the first row is the underflow bin (-inf, edges[0]) and a
/// final bin up to 2 pi is appended when the last edge is below it.
pub fn curvature_histogram(
    d: u32,
    n_curves: u64,
    n_lines: u64,
    edges: &[f64],
    stream: &RngStream,
) -> Result<Vec<HistRow>> {
    let two_pi = 2.0 * std::f64::consts::PI;
    if edges.is_empty() {
        return Err(Error::MalformedInput("histogram needs at least one bin edge".into()));
    }
    if edges.windows(2).any(|w| !(w[0] < w[1])) || *edges.last().unwrap() > two_pi {
        return Err(Error::MalformedInput(
            "histogram bin edges must be strictly increasing and at most 2 pi".into(),
        ));
    }
    let mut bounds = vec![f64::NEG_INFINITY];
    bounds.extend_from_slice(edges);
    if *bounds.last().unwrap() < two_pi {
        bounds.push(two_pi);
    }
    let n_bins = bounds.len() - 1;

    let parts = reduce_indexed(n_curves, SAMPLE_CHUNK, |range| {
        let mut counts = vec![0u64; n_bins];
        let mut discarded = 0u64;
        for c in range {
            let curve_stream = stream.derive_stream("curve", c);
            let p: HomPoly3<f64> = sample_kostlan(d, &curve_stream.derive_stream("poly", 0));
            let line_stream = curve_stream.derive_stream("lines", 0);
            for line_index in 0..n_lines {
                for s in samples_for_line(&p, &line_stream, line_index)? {
                    if s.discarded {
                        discarded += 1;
                        continue;
                    }
                    // partition_point gives the first bound above k, so the
                    // bin index is that minus one; the top bin is closed.
                    let idx = bounds.partition_point(|&b| b <= s.k).min(n_bins);
                    counts[idx - 1] += 1;
                }
            }
        }
        Ok((counts, discarded))
    });
    let mut counts = vec![0u64; n_bins];
    let mut discarded = 0u64;
    for (c, dsc) in merge_results(parts)? {
        for (total, part) in counts.iter_mut().zip(&c) {
            *total += part;
        }
        discarded += dsc;
    }
    let retained: u64 = counts.iter().sum();
    check_discards(discarded, retained + discarded)?;
    let total = retained.max(1) as f64;
    Ok(counts
        .iter()
        .enumerate()
        .map(|(i, &count)| HistRow { lo: bounds[i], hi: bounds[i + 1], mass: count as f64 / total, count })
        .collect())
}

/// Empirical tail probability P[kappa(Z, band) > eta] over random degree-d
/// curves, with the Markov bound phi_{r,R}/eta it must respect. The band is
/// the degree-scaled projective window [2 pi - R d, 2 pi - r d].
pub fn tail_bound_check(
    d: u32,
    params: &PhiParams,
    n_curves: u64,
    n_lines: u64,
    eta: f64,
    stream: &RngStream,
) -> Result<(Estimate, f64)> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::MalformedInput(format!("eta must lie in (0, 1), got {eta}")));
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let df = d as f64;
    let lo = if params.big_r.is_finite() { two_pi - params.big_r * df } else { f64::NEG_INFINITY };
    let band = CurvatureBand::new(lo, two_pi - params.r * df)?;

    let parts = reduce_indexed(n_curves, SAMPLE_CHUNK, |range| {
        let mut acc = MeanAcc::default();
        for c in range {
            let curve_stream = stream.derive_stream("curve", c);
            let p: HomPoly3<f64> = sample_kostlan(d, &curve_stream.derive_stream("poly", 0));
            let kappa = kappa_estimate(&p, &band, n_lines, &curve_stream.derive_stream("lines", 0))?;
            acc.push(if kappa.est.mean > eta { 1.0 } else { 0.0 });
        }
        Ok(acc)
    });
    let mut acc = MeanAcc::default();
    for a in merge_results(parts)? {
        acc.merge(&a);
    }
    let n = acc.count();
    let mean = acc.mean();
    let stderr = if n > 0 { (mean * (1.0 - mean) / n as f64).sqrt() } else { f64::NAN };
    let est = Estimate { mean, stderr, n, seed: stream.root_seed() };
    Ok((est, phi_closed_over(params, eta)))
}

fn phi_closed_over(params: &PhiParams, eta: f64) -> f64 {
    crate::curvature::phi_closed(params) / eta
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::K_UPPER_SLACK;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn fermat(d: u32) -> HomPoly3<f64> {
        let one = c(1.0, 0.0);
        HomPoly3::new(d, vec![([d as u16, 0, 0], one), ([0, d as u16, 0], one), ([0, 0, d as u16], one)]).unwrap()
    }

    #[test]
    fn random_lines_are_orthonormal() {
        let stream = RngStream::root(7).derive_stream("lines", 0);
        for i in 0..200 {
            let line: ProjLine<f64> = sample_random_line(&stream.derive_stream("line", i));
            assert!((linalg::norm_sq(&line.u) - 1.0).abs() < 1e-12);
            assert!((linalg::norm_sq(&line.v) - 1.0).abs() < 1e-12);
            assert!(linalg::hdot(&line.u, &line.v).norm() < 1e-12);
        }
    }

    #[test]
    fn random_line_direction_moments_are_uniform() {
        // For u uniform on the unit sphere of C^3, E|<u, e0>|^2 = 1/3.
        let stream = RngStream::root(8).derive_stream("moments", 0);
        let n = 20_000u64;
        let mut acc = 0.0;
        for i in 0..n {
            let line: ProjLine<f64> = sample_random_line(&stream.derive_stream("line", i));
            acc += line.u[0].norm_sqr();
        }
        let mean = acc / n as f64;
        // Var |u0|^2 = 1/18 for the Beta(1,2) law of |u0|^2.
        let sigma = (1.0 / 18.0 / n as f64).sqrt();
        assert!((mean - 1.0 / 3.0).abs() < 3.0 * sigma, "mean {mean} vs 1/3");
    }

    #[test]
    fn lines_have_constant_curvature() {
        let p = HomPoly3::new(1, vec![([1, 0, 0], c(1.0, 0.0)), ([0, 1, 0], c(2.0, -1.0)), ([0, 0, 1], c(0.5, 0.3))])
            .unwrap();
        let stream = RngStream::root(9).derive_stream("d1", 0);
        let samples = sample_curve_points(&p, 100, &stream).unwrap();
        assert_eq!(samples.len(), 100);
        let two_pi = 2.0 * std::f64::consts::PI;
        for s in &samples {
            assert!(!s.discarded);
            assert!((s.k - two_pi).abs() <= 1e-9, "line curvature {} is not 2 pi", s.k);
        }
    }

    #[test]
    fn smooth_conic_yields_two_clean_roots_per_line() {
        let p = fermat(2);
        let stream = RngStream::root(10).derive_stream("conic", 0);
        let samples = sample_curve_points(&p, 1000, &stream).unwrap();
        assert_eq!(samples.len(), 2000);
        let two_pi = 2.0 * std::f64::consts::PI;
        for s in &samples {
            assert!(!s.discarded, "smooth conic should have no singular samples");
            assert!(s.k <= two_pi + K_UPPER_SLACK);
        }
    }

    #[test]
    fn membership_residuals_hold_on_a_high_degree_curve() {
        let stream = RngStream::root(11);
        let p: HomPoly3<f64> = sample_kostlan(16, &stream.derive_stream("poly", 0));
        let samples = sample_curve_points(&p, 50, &stream.derive_stream("lines", 0)).unwrap();
        assert_eq!(samples.len(), 16 * 50);
        let scale = p.coeff_scale();
        for s in &samples {
            let residual = p.evaluate(s.point.rep()).norm();
            assert!(residual <= MEMBERSHIP_TOL * scale, "residual {residual} too large");
        }
    }

    #[test]
    fn nodal_curve_lines_through_the_node_are_discarded() {
        // X1 X2 has a node at e0; a line through it meets the curve there
        // with multiplicity two, and the jet at the node is singular.
        let p = HomPoly3::new(2, vec![([0, 1, 1], c(1.0, 0.0))]).unwrap();
        let zero = c(0.0, 0.0);
        let s = 0.5f64.sqrt();
        let line = ProjLine::new(
            [c(1.0, 0.0), zero, zero],
            [zero, c(s, 0.0), c(0.0, s)],
        )
        .unwrap();
        let samples = samples_on_line(&p, &line, 0).unwrap();
        assert_eq!(samples.len(), 2);
        assert!(samples.iter().all(|s| s.discarded), "both node hits should be discarded");
    }

    #[test]
    fn full_band_fraction_is_exactly_one() {
        let band = CurvatureBand::new(f64::NEG_INFINITY, 2.0 * std::f64::consts::PI).unwrap();
        let stream = RngStream::root(12).derive_stream("full", 0);
        let kappa = kappa_estimate(&fermat(3), &band, 500, &stream).unwrap();
        assert_eq!(kappa.est.mean, 1.0);
        assert_eq!(kappa.est.n, 1500);
        assert_eq!(kappa.n_discarded, 0);
    }

    #[test]
    fn gauss_bonnet_on_a_line_is_exact() {
        let p = HomPoly3::new(1, vec![([1, 0, 0], c(1.0, 0.0)), ([0, 1, 0], c(0.0, 1.0))]).unwrap();
        let stream = RngStream::root(13).derive_stream("gb1", 0);
        let (total, target) = gauss_bonnet_check(&p, 200, &stream).unwrap();
        assert!((target - 4.0 * std::f64::consts::PI).abs() < 1e-15);
        assert!((total.mean - target).abs() <= 1e-9, "line total {} vs {}", total.mean, target);
    }

    #[test]
    fn gauss_bonnet_on_a_random_cubic_is_statistically_zero() {
        let stream = RngStream::root(14);
        let p: HomPoly3<f64> = sample_kostlan(3, &stream.derive_stream("poly", 0));
        let (total, target) = gauss_bonnet_check(&p, 20_000, &stream.derive_stream("lines", 0)).unwrap();
        assert_eq!(target, 0.0);
        assert!(
            (total.mean - target).abs() <= 3.0 * total.stderr,
            "cubic total {} +- {} vs 0",
            total.mean,
            total.stderr
        );
    }

    #[test]
    fn band_fraction_is_unitary_invariant() {
        let stream = RngStream::root(15);
        let p: HomPoly3<f64> = sample_kostlan(3, &stream.derive_stream("poly", 0));
        let u = crate::linalg::random_unitary(&mut stream.derive_stream("u", 0).rng());
        let q = p.compose_unitary(&u);
        let two_pi = 2.0 * std::f64::consts::PI;
        let band = CurvatureBand::new(two_pi - 12.0, two_pi - 3.0).unwrap();
        let a = kappa_estimate(&p, &band, 2000, &stream.derive_stream("lines-p", 0)).unwrap();
        let b = kappa_estimate(&q, &band, 2000, &stream.derive_stream("lines-q", 0)).unwrap();
        let sigma = (a.est.stderr.powi(2) + b.est.stderr.powi(2)).sqrt();
        assert!(
            (a.est.mean - b.est.mean).abs() <= 3.0 * sigma,
            "band fraction changed under a unitary: {} vs {}",
            a.est.mean,
            b.est.mean
        );
    }

    #[test]
    fn histogram_masses_sum_to_one() {
        let stream = RngStream::root(16).derive_stream("hist", 0);
        let two_pi = 2.0 * std::f64::consts::PI;
        let edges: Vec<f64> = (0..8).map(|i| two_pi - 40.0 + 5.0 * i as f64).collect();
        let rows = curvature_histogram(3, 4, 200, &edges, &stream).unwrap();
        assert_eq!(rows.len(), edges.len() + 1);
        let mass: f64 = rows.iter().map(|r| r.mass).sum();
        let count: u64 = rows.iter().map(|r| r.count).sum();
        assert_eq!(count, 4 * 200 * 3);
        assert!((mass - 1.0).abs() < 1e-12);
        assert!(rows[0].lo == f64::NEG_INFINITY && (rows.last().unwrap().hi - two_pi).abs() < 1e-15);
    }

    #[test]
    fn tail_bound_holds_on_a_small_ensemble() {
        let stream = RngStream::root(17).derive_stream("tail", 0);
        let params = PhiParams::new(1.0, 4.0).unwrap();
        let (est, bound) = tail_bound_check(4, &params, 20, 200, 0.8, &stream).unwrap();
        assert!(est.mean <= 1.0 && est.mean >= 0.0);
        assert!(bound > 0.0);
        // The empirical tail may not exceed its Markov bound by luck alone
        // at these sizes; allow the binomial 3 sigma.
        assert!(est.mean <= bound + 3.0 * est.stderr, "tail {} above Markov bound {}", est.mean, bound);
    }
}
