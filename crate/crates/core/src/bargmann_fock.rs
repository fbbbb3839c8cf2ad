//! The local limit field on complex 2-space: a random entire series with
//! covariance exp(pi <z, w>), truncated to a polynomial with a certified
//! covariance error, plus quadrature over the zero set of any bivariate
//! polynomial (curvature band areas on a ball, the local event probability,
//! and a lattice C^2 distance used to compare fields to a reference curve).

use num_complex::Complex;

use crate::bipoly::{BiPoly, JetEvaluator};
use crate::curvature::{curvature_flat, CurvatureBand};
use crate::error::{check_discards, Error, Result};
use crate::poly::ln_factorials;
use crate::rng::{complex_normal, RngStream};
use crate::stats::{reduce_indexed, Estimate, MeanAcc, SAMPLE_CHUNK};

type C64 = Complex<f64>;

/// Ball radius the stored covariance error bound is certified on.
pub const WORKING_RADIUS: f64 = 2.0;

/// Retained zero-set samples must satisfy
/// |p(z, w)| <= ZERO_RESIDUAL_TOL * local evaluation scale.
pub const ZERO_RESIDUAL_TOL: f64 = 1e-9;

/// A branch is unusable when |p_w|^2 falls below this fraction of the
/// squared gradient norm (the graph slope diverges).
pub const BRANCH_TOL: f64 = 1e-8;

/// Internal grid resolution of the event-probability scans. Much coarser
/// than the deterministic-oracle scans: the event indicator compares the
/// in-band area against a threshold it typically clears by an order of
/// magnitude, so the decision is insensitive to quadrature resolution long
/// before the area estimate itself is converged.
const EVENT_GRID: usize = 10;

/// Boundary cells are re-integrated on this many radial x angular subcells.
const REFINE_RADIAL: usize = 16;
const REFINE_ANGULAR: usize = 4;

/// Slope allowance of the cheap position pre-filter that decides which
/// roots are worth a gradient evaluation; branches steeper than this a cell
/// width outside the ball can slip past boundary refinement (never the
/// membership test), costing an area sliver far below the quadrature error.
const PREFILTER_SLOPE: f64 = 8.0;

/// Truncated sample of the limit field.
#[derive(Debug, Clone)]
pub struct BfPoly {
    /// Total-degree truncation order.
    pub trunc: usize,
    coeffs: BiPoly<f64>,
    /// Certified sup bound, on the working ball, of the covariance error
    /// committed by the truncation.
    pub cov_error_bound: f64,
}

impl BfPoly {
    pub fn coeffs(&self) -> &BiPoly<f64> {
        &self.coeffs
    }
}

/// Ball centred at the origin of C^2.
#[derive(Debug, Clone, Copy)]
pub struct BallRegion {
    pub radius: f64,
}

impl BallRegion {
    pub fn new(radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::MalformedInput(format!("region radius must be positive, got {radius}")));
        }
        Ok(BallRegion { radius })
    }
}

/// One quadrature sample on the zero set.
#[derive(Debug, Clone, Copy)]
pub struct BfSample {
    pub z: C64,
    pub w: C64,
    /// Flat-metric Gauss curvature; NaN when `discarded`.
    pub k: f64,
    /// Surface-area weight (graph Jacobian times cell area); 0 when
    /// `discarded`.
    pub weight: f64,
    pub discarded: bool,
}

/// Sup bound over the radius-rho ball of the covariance error of truncation
/// at total degree n: sum_{k > n} (pi rho^2)^k / k!. Terms are accumulated
/// explicitly until their successor ratio x / (k + 1) falls below 1/2, after
/// which the remainder is dominated by a geometric series, so the bound is
/// finite (and strictly decreasing) for every truncation order.
pub fn bf_covariance_tail(n_trunc: usize, rho: f64) -> f64 {
    let x = std::f64::consts::PI * rho * rho;
    if x == 0.0 {
        return 0.0;
    }
    let start = n_trunc + 1;
    // Smallest index whose successor ratio is at most 1/2.
    let k_star = (2.0 * x).ceil() as usize;
    let lnf = ln_factorials(start);
    let mut term = ((start as f64) * x.ln() - lnf[start]).exp();
    let mut sum = 0.0;
    let mut k = start;
    while k < k_star {
        sum += term;
        term *= x / (k as f64 + 1.0);
        k += 1;
    }
    let q = x / (k as f64 + 1.0);
    sum + term / (1.0 - q)
}

/// Smallest truncation order whose covariance error bound on the radius-rho
/// ball is at most `tol`.
pub fn bf_truncation_degree(rho: f64, tol: f64) -> Result<usize> {
    if !(tol > 0.0 && tol.is_finite() && rho > 0.0 && rho.is_finite()) {
        return Err(Error::MalformedInput(format!(
            "truncation needs positive finite rho and tol, got rho = {rho}, tol = {tol}"
        )));
    }
    (0..10_000)
        .find(|&n| bf_covariance_tail(n, rho) <= tol)
        .ok_or_else(|| Error::MalformedInput(format!("no truncation reaches tol {tol} at rho {rho}")))
}

/// Draw a truncated field: coefficients a_ij sqrt(pi^{i+j} / (i! j!)) with
/// a_ij i.i.d. canonical complex Gaussians, drawn in row-major (i, then j)
/// order.
pub fn sample_bf(n_trunc: usize, stream: &RngStream) -> BfPoly {
    let lnf = ln_factorials(n_trunc);
    let ln_pi = std::f64::consts::PI.ln();
    let mut rng = stream.rng();
    let mut coeffs = BiPoly::zero(n_trunc);
    for i in 0..=n_trunc {
        for j in 0..=(n_trunc - i) {
            let a: C64 = complex_normal(&mut rng);
            let weight = (0.5 * ((i + j) as f64 * ln_pi - lnf[i] - lnf[j])).exp();
            *coeffs.coeff_mut(i, j) = a * weight;
        }
    }
    BfPoly { trunc: n_trunc, coeffs, cov_error_bound: bf_covariance_tail(n_trunc, WORKING_RADIUS) }
}

/// The reference curve z w - 1/4, wrapped as an exactly-represented field
/// (no truncation error).
pub fn f0_reference() -> BfPoly {
    let mut coeffs = BiPoly::zero(1);
    *coeffs.coeff_mut(1, 1) = C64::new(1.0, 0.0);
    *coeffs.coeff_mut(0, 0) = C64::new(-0.25, 0.0);
    BfPoly { trunc: 2, coeffs, cov_error_bound: 0.0 }
}

struct Refine {
    radial: usize,
    angular: usize,
}

impl Refine {
    fn off() -> Self {
        Refine { radial: 1, angular: 1 }
    }

    fn full() -> Self {
        Refine { radial: REFINE_RADIAL, angular: REFINE_ANGULAR }
    }
}

struct RingNode {
    z: C64,
    r_in: f64,
    r_out: f64,
    theta_lo: f64,
    theta_hi: f64,
    cell_area: f64,
}

/// Midpoint nodes of a polar grid over the z-disc of the given radius: ring
/// k gets max(8, ceil(2 pi (k + 0.5))) angular cells, so cells stay nearly
/// square. Cell areas are exact, so they tile the disc area exactly.
fn polar_rings(center_z: C64, radius: f64, grid_n: usize) -> Vec<Vec<RingNode>> {
    let mut rings = Vec::with_capacity(grid_n);
    let dr = radius / grid_n as f64;
    for k in 0..grid_n {
        let r_in = k as f64 * dr;
        let r_out = (k as f64 + 1.0) * dr;
        let r_mid = 0.5 * (r_in + r_out);
        let m = (2.0 * std::f64::consts::PI * (k as f64 + 0.5)).ceil().max(8.0) as usize;
        let band_area = std::f64::consts::PI * (r_out * r_out - r_in * r_in);
        let mut ring = Vec::with_capacity(m);
        for t in 0..m {
            let theta_lo = 2.0 * std::f64::consts::PI * t as f64 / m as f64;
            let theta_hi = 2.0 * std::f64::consts::PI * (t as f64 + 1.0) / m as f64;
            let theta = 0.5 * (theta_lo + theta_hi);
            ring.push(RingNode {
                z: center_z + C64::from_polar(r_mid, theta),
                r_in,
                r_out,
                theta_lo,
                theta_hi,
                cell_area: band_area / m as f64,
            });
        }
        rings.push(ring);
    }
    rings
}

struct ScanTally {
    n_retained: u64,
    n_discarded: u64,
}

/// Roots of the w-slice at one z, warm-started from a neighbouring node's
/// roots when available.
fn slice_roots(p: &BiPoly<f64>, z: C64, warm: Option<&[C64]>) -> Result<Vec<C64>> {
    let mut slice = p.univariate_in_w(z);
    // Drop exact structural zeros only; trimming small coefficients of an
    // ill-scaled slice would perturb in-ball roots.
    slice.trim_leading(0.0);
    if slice.max_coeff() == 0.0 {
        return Ok(Vec::new());
    }
    if slice.degree() == 0 {
        return Ok(Vec::new());
    }
    slice.roots_with_warm_start(warm)
}

/// Emit one root's sample (or count its discard) through the sink. One jet
/// evaluation serves the residual check (f0), the branch screen (the
/// gradient), and the curvature.
fn emit_root<F: FnMut(BfSample)>(
    jets: &JetEvaluator<f64>,
    z: C64,
    w: C64,
    weight_area: f64,
    tally: &mut ScanTally,
    sink: &mut F,
) -> Result<()> {
    let jet = jets.jet_at(z, w);
    let residual = jet.f0.norm();
    if residual > ZERO_RESIDUAL_TOL * jets.local_scale(z, w) {
        return Err(Error::ConvergenceFailure(format!(
            "zero-set sample off the curve: residual {residual:.3e} at ({z}, {w})"
        )));
    }
    let gn2 = jet.fz.norm_sqr() + jet.fw.norm_sqr();
    if jet.fw.norm_sqr() <= BRANCH_TOL * gn2 {
        tally.n_discarded += 1;
        sink(BfSample { z, w, k: f64::NAN, weight: 0.0, discarded: true });
        return Ok(());
    }
    let slope2 = (jet.fz / jet.fw).norm_sqr();
    match curvature_flat(&jet) {
        Ok(k) => {
            tally.n_retained += 1;
            sink(BfSample { z, w, k, weight: (1.0 + slope2) * weight_area, discarded: false });
        }
        Err(Error::SingularPoint) => {
            tally.n_discarded += 1;
            sink(BfSample { z, w, k: f64::NAN, weight: 0.0, discarded: true });
        }
        Err(e) => return Err(e),
    }
    Ok(())
}

/// Graph-branch quadrature of the zero set of `p` over the ball of the
/// given radius and centre: for every polar-grid node z, every root w of
/// p(z, .) inside the ball contributes its cell area times the area
/// Jacobian 1 + |dw/dz|^2. Cells whose branch crosses the ball boundary are
/// re-integrated on a finer subgrid so the boundary is resolved well below
/// the cell width.
fn zero_scan<F: FnMut(BfSample)>(
    p: &BiPoly<f64>,
    center: [C64; 2],
    radius: f64,
    grid_n: usize,
    refine: Refine,
    mut sink: F,
) -> Result<ScanTally> {
    if grid_n < 2 {
        return Err(Error::MalformedInput(format!("grid_n must be at least 2, got {grid_n}")));
    }
    let jets = JetEvaluator::new(p.clone());
    let rho2 = radius * radius;
    let dr = radius / grid_n as f64;
    let mut tally = ScanTally { n_retained: 0, n_discarded: 0 };

    let mut ring_start: Option<Vec<C64>> = None;
    for ring in polar_rings(center[0], radius, grid_n) {
        let mut warm = ring_start.clone();
        for (t, node) in ring.iter().enumerate() {
            let roots = slice_roots(p, node.z, warm.as_deref())?;
            if t == 0 {
                ring_start = Some(roots.clone());
            }

            // Cheap position screen: roots whose distance to the boundary
            // exceeds what any plausible branch slope could bridge within
            // the cell need no derivative work.
            let mut needs_refine = false;
            let mut candidates: Vec<(C64, bool)> = Vec::new();
            for &w in &roots {
                let dist2 = (node.z - center[0]).norm_sqr() + (w - center[1]).norm_sqr();
                let inside = dist2 <= rho2;
                let prewindow =
                    dr * (2.0 * (node.z - center[0]).norm() + 2.0 * (w - center[1]).norm() * PREFILTER_SLOPE);
                if (dist2 - rho2).abs() <= prewindow {
                    let (pz, pw) = jets.grad_at(node.z, w);
                    let gn2 = pz.norm_sqr() + pw.norm_sqr();
                    let slope = if pw.norm_sqr() <= BRANCH_TOL * gn2 {
                        PREFILTER_SLOPE
                    } else {
                        (pz / pw).norm()
                    };
                    let window = dr
                        * 0.75
                        * (2.0 * (node.z - center[0]).norm() + 2.0 * (w - center[1]).norm() * slope);
                    if (dist2 - rho2).abs() <= window && refine.radial > 1 {
                        needs_refine = true;
                    }
                }
                candidates.push((w, inside));
            }

            if !needs_refine {
                for &(w, inside) in &candidates {
                    if inside {
                        emit_root(&jets, node.z, w, node.cell_area, &mut tally, &mut sink)?;
                    }
                }
            } else {
                // Replace this cell's whole contribution by the subgrid's:
                // re-solve at each subnode and keep in-ball roots there.
                let sub_r = refine.radial;
                let sub_a = refine.angular;
                let mut sub_warm = roots.clone();
                for b in 0..sub_r {
                    let s_in = node.r_in + (node.r_out - node.r_in) * b as f64 / sub_r as f64;
                    let s_out = node.r_in + (node.r_out - node.r_in) * (b as f64 + 1.0) / sub_r as f64;
                    let s_mid = 0.5 * (s_in + s_out);
                    let band = std::f64::consts::PI * (s_out * s_out - s_in * s_in);
                    for a in 0..sub_a {
                        let frac = (a as f64 + 0.5) / sub_a as f64;
                        let theta = node.theta_lo + (node.theta_hi - node.theta_lo) * frac;
                        let z_sub = center[0] + C64::from_polar(s_mid, theta);
                        let sub_roots = slice_roots(p, z_sub, Some(&sub_warm))?;
                        // Sub-band area times this node's sector fraction,
                        // split over the angular subcells.
                        let sector = (node.theta_hi - node.theta_lo) / (2.0 * std::f64::consts::PI);
                        let sub_area = band * sector / sub_a as f64;
                        for &w in &sub_roots {
                            let dist2 = (z_sub - center[0]).norm_sqr() + (w - center[1]).norm_sqr();
                            if dist2 <= rho2 {
                                emit_root(&jets, z_sub, w, sub_area, &mut tally, &mut sink)?;
                            }
                        }
                        sub_warm = sub_roots;
                    }
                }
            }
            warm = Some(roots);
        }
    }
    Ok(tally)
}

/// Quadrature samples of the zero set of `f` over a centred ball. Discarded
/// samples (unusable branches, singular jets) are flagged and weightless.
pub fn bf_zero_samples(f: &BfPoly, region: &BallRegion, grid_n: usize) -> Result<Vec<BfSample>> {
    let mut samples = Vec::new();
    let zero = C64::new(0.0, 0.0);
    let tally = zero_scan(&f.coeffs, [zero, zero], region.radius, grid_n, Refine::full(), |s| {
        samples.push(s)
    })?;
    check_discards(tally.n_discarded, tally.n_retained + tally.n_discarded)?;
    Ok(samples)
}

/// Curvature band area report over a centred ball.
#[derive(Debug, Clone, Copy)]
pub struct BandArea {
    pub area_in_band: f64,
    pub total_area: f64,
    pub min_k: f64,
    pub max_k: f64,
    pub n_retained: u64,
    pub n_discarded: u64,
}

/// Zero-set area inside the flat-metric curvature band, and the total
/// zero-set area, over a centred ball.
pub fn bf_area_band(f: &BfPoly, region: &BallRegion, band: &CurvatureBand, grid_n: usize) -> Result<BandArea> {
    let zero = C64::new(0.0, 0.0);
    area_band_at(&f.coeffs, [zero, zero], region.radius, band, grid_n, Refine::full())
}

fn area_band_at(
    p: &BiPoly<f64>,
    center: [C64; 2],
    radius: f64,
    band: &CurvatureBand,
    grid_n: usize,
    refine: Refine,
) -> Result<BandArea> {
    let mut report = BandArea {
        area_in_band: 0.0,
        total_area: 0.0,
        min_k: f64::INFINITY,
        max_k: f64::NEG_INFINITY,
        n_retained: 0,
        n_discarded: 0,
    };
    let tally = zero_scan(p, center, radius, grid_n, refine, |s| {
        if s.discarded {
            return;
        }
        report.total_area += s.weight;
        if band.contains(s.k) {
            report.area_in_band += s.weight;
        }
        report.min_k = report.min_k.min(s.k);
        report.max_k = report.max_k.max(s.k);
    })?;
    report.n_retained = tally.n_retained;
    report.n_discarded = tally.n_discarded;
    check_discards(report.n_discarded, report.n_retained + report.n_discarded)?;
    Ok(report)
}

/// Probability that the zero set of a fresh field draw carries more than
/// `threshold` of band-curvature area within the unit ball. The truncation
/// order is certified on the working (radius-2) ball at covariance
/// tolerance `tol`.
pub fn prop1_event_probability(
    n: u64,
    band: &CurvatureBand,
    threshold: f64,
    tol: f64,
    stream: &RngStream,
) -> Result<Estimate> {
    let trunc = bf_truncation_degree(WORKING_RADIUS, tol)?;
    let band = *band;
    let zero = C64::new(0.0, 0.0);
    let parts = reduce_indexed(n, SAMPLE_CHUNK, |range| -> Result<MeanAcc> {
        let mut acc = MeanAcc::default();
        for t in range {
            let f = sample_bf(trunc, &stream.derive_stream("draw", t));
            let report = area_band_at(&f.coeffs, [zero, zero], 1.0, &band, EVENT_GRID, Refine::off())?;
            acc.push(if report.area_in_band > threshold { 1.0 } else { 0.0 });
        }
        Ok(acc)
    });
    let mut acc = MeanAcc::default();
    for part in parts {
        acc.merge(&part?);
    }
    let n_done = acc.count();
    let mean = acc.mean();
    let stderr = if n_done > 0 { (mean * (1.0 - mean) / n_done as f64).sqrt() } else { f64::NAN };
    Ok(Estimate { mean, stderr, n: n_done, seed: stream.root_seed() })
}

/// Max-over-lattice distance between two fields in all 2-jet components,
/// on a 4-dimensional lattice (grid_n points per real axis) intersected
/// with the working radius-2 ball.
pub fn c2_distance_to(f: &BfPoly, g: &BfPoly, grid_n: usize) -> Result<f64> {
    if grid_n < 2 {
        return Err(Error::MalformedInput(format!("grid_n must be at least 2, got {grid_n}")));
    }
    let diff = f.coeffs.add_scaled(&g.coeffs, C64::new(-1.0, 0.0));
    let jets = JetEvaluator::new(diff);
    let axis: Vec<f64> = (0..grid_n)
        .map(|i| -WORKING_RADIUS + 2.0 * WORKING_RADIUS * i as f64 / (grid_n - 1) as f64)
        .collect();
    let mut best = 0.0f64;
    for &zr in &axis {
        for &zi in &axis {
            for &wr in &axis {
                for &wi in &axis {
                    if zr * zr + zi * zi + wr * wr + wi * wi > WORKING_RADIUS * WORKING_RADIUS {
                        continue;
                    }
                    let jet = jets.jet_at(C64::new(zr, zi), C64::new(wr, wi));
                    let m = jet
                        .f0
                        .norm()
                        .max(jet.fz.norm())
                        .max(jet.fw.norm())
                        .max(jet.fzz.norm())
                        .max(jet.fww.norm())
                        .max(jet.fzw.norm());
                    best = best.max(m);
                }
            }
        }
    }
    Ok(best)
}
