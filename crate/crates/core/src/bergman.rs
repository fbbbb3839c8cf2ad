//! Rescaled comparison of the two ensembles' normalized covariance kernels.
//! The degree-d projective ensemble has a closed-form normalized kernel
//! modulus in the affine chart; blown up by sqrt(pi/d) around the origin it
//! converges to the Bargmann-Fock kernel modulus exp(-pi/2 |z - w|^2), with
//! sup error O(1/d) on balls and O(d^{k/2 - 1}) after k chart derivatives.
//! This module evaluates both kernels on a random grid of point pairs,
//! measures the sup discrepancy at derivative orders k = 0, 1, 2, and fits
//! the decay rate in log-log coordinates.

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::C64;

/// Step for the chart-coordinate central differences at k = 1, 2.
pub const FD_STEP: f64 = 1e-3;

/// Sup discrepancy between the rescaled degree-d kernel and its flat limit
/// over one grid of point pairs, at one derivative order.
#[derive(Debug, Clone)]
pub struct KernelComparison {
    pub d: u32,
    /// Point pairs in the unit ball of complex 2-space (limit coordinates).
    pub grid: Vec<([C64; 2], [C64; 2])>,
    pub sup_err: f64,
    /// Derivative order of the comparison (0, 1, or 2).
    pub k: u32,
    /// Coordinate rescale factor: grid points are scaled by
    /// `scale_constant / sqrt(d)` before entering the degree-d kernel.
    pub scale_constant: f64,
}

/// Least-squares power law fitted to sup_err versus degree.
#[derive(Debug, Clone, Copy)]
pub struct RateFit {
    pub slope: f64,
    /// Root-mean-square residual of the log-log fit.
    pub residual: f64,
}

/// Modulus of the normalized degree-d covariance kernel in the affine chart:
/// |1 + <z,w>|^d / ((1 + |z|^2)(1 + |w|^2))^{d/2}, with <z,w> the Hermitian
/// pairing of the two chart coordinates. Symmetric, in [0, 1], and equal to 1
/// exactly when z = w.
pub fn fs_normalized_kernel(d: u32, z: &[C64; 2], w: &[C64; 2]) -> f64 {
    let pairing = C64::new(1.0, 0.0) + z[0] * w[0].conj() + z[1] * w[1].conj();
    let nz = 1.0 + z[0].norm_sqr() + z[1].norm_sqr();
    let nw = 1.0 + w[0].norm_sqr() + w[1].norm_sqr();
    let base = pairing.norm_sqr() / (nz * nw);
    base.powf(0.5 * d as f64)
}

/// Modulus of the normalized Bargmann-Fock covariance kernel:
/// exp(-pi/2 |z - w|^2).
pub fn bf_kernel_modulus(z: &[C64; 2], w: &[C64; 2]) -> f64 {
    let d2 = (z[0] - w[0]).norm_sqr() + (z[1] - w[1]).norm_sqr();
    (-0.5 * std::f64::consts::PI * d2).exp()
}

/// Uniform point in the unit ball of C^2 by rejection from the 4-cube.
fn ball_point<R: Rng + ?Sized>(rng: &mut R) -> [C64; 2] {
    loop {
        let x: [f64; 4] = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        if x.iter().map(|v| v * v).sum::<f64>() <= 1.0 {
            return [C64::new(x[0], x[1]), C64::new(x[2], x[3])];
        }
    }
}

/// Shift one of the 8 real chart coordinates of the pair by `delta`
/// (axes 0..4 act on z, 4..8 on w; even axes real parts, odd imaginary).
fn perturbed(z: &[C64; 2], w: &[C64; 2], axis: usize, delta: f64) -> ([C64; 2], [C64; 2]) {
    let mut zp = *z;
    let mut wp = *w;
    let target = if axis < 4 { &mut zp } else { &mut wp };
    let comp = (axis % 4) / 2;
    if axis % 2 == 0 {
        target[comp].re += delta;
    } else {
        target[comp].im += delta;
    }
    (zp, wp)
}

/// Discrepancy of the pair at derivative order k. For k >= 1 both kernels
/// are differenced in the chart coordinates of the degree-d kernel, where
/// the flat kernel reads exp(-d/2 |Z - W|^2); one chart derivative scales
/// the k = 0 discrepancy by sqrt(d), which is what produces the
/// d^{k/2 - 1} rates.
fn pair_err(d: u32, scale_constant: f64, z: &[C64; 2], w: &[C64; 2], k: u32) -> f64 {
    let s = scale_constant / (d as f64).sqrt();
    let zf = [z[0] * s, z[1] * s];
    let wf = [w[0] * s, w[1] * s];
    if k == 0 {
        return (fs_normalized_kernel(d, &zf, &wf) - bf_kernel_modulus(z, w)).abs();
    }
    let dd = d as f64;
    let bf_chart = |a: &[C64; 2], b: &[C64; 2]| {
        let d2 = (a[0] - b[0]).norm_sqr() + (a[1] - b[1]).norm_sqr();
        (-0.5 * dd * d2).exp()
    };
    let mut worst = 0.0f64;
    for axis in 0..8 {
        let (zp, wp) = perturbed(&zf, &wf, axis, FD_STEP);
        let (zm, wm) = perturbed(&zf, &wf, axis, -FD_STEP);
        let fp = fs_normalized_kernel(d, &zp, &wp);
        let fm = fs_normalized_kernel(d, &zm, &wm);
        let bp = bf_chart(&zp, &wp);
        let bm = bf_chart(&zm, &wm);
        let err = if k == 1 {
            ((fp - fm) - (bp - bm)).abs() / (2.0 * FD_STEP)
        } else {
            let f0 = fs_normalized_kernel(d, &zf, &wf);
            let b0 = bf_chart(&zf, &wf);
            (((fp - 2.0 * f0 + fm) - (bp - 2.0 * b0 + bm)) / (FD_STEP * FD_STEP)).abs()
        };
        worst = worst.max(err);
    }
    worst
}

/// For each degree in `d_list`, the sup over a shared random grid of
/// `n_pairs` point pairs of the order-k discrepancy between the rescaled
/// degree-d kernel and the flat kernel. The grid is drawn once from
/// `stream`, so comparisons across degrees share points.
pub fn kernel_convergence(
    d_list: &[u32],
    n_pairs: usize,
    k: u32,
    stream: &RngStream,
) -> Result<Vec<KernelComparison>> {
    if d_list.is_empty() {
        return Err(Error::MalformedInput("kernel comparison needs at least one degree".into()));
    }
    if !d_list.windows(2).all(|p| p[0] < p[1]) {
        return Err(Error::MalformedInput(format!(
            "degree list must be strictly increasing, got {d_list:?}"
        )));
    }
    if d_list[0] == 0 {
        return Err(Error::MalformedInput("degrees must be at least 1".into()));
    }
    if n_pairs == 0 {
        return Err(Error::MalformedInput("kernel comparison needs at least one pair".into()));
    }
    if k > 2 {
        return Err(Error::MalformedInput(format!(
            "derivative order must be 0, 1, or 2, got {k}"
        )));
    }
    let scale_constant = std::f64::consts::PI.sqrt();
    let mut rng = stream.derive_stream("pairs", 0).rng();
    let grid: Vec<([C64; 2], [C64; 2])> =
        (0..n_pairs).map(|_| (ball_point(&mut rng), ball_point(&mut rng))).collect();
    Ok(d_list
        .iter()
        .map(|&d| {
            let sup_err = grid
                .iter()
                .map(|(z, w)| pair_err(d, scale_constant, z, w, k))
                .fold(0.0, f64::max);
            KernelComparison { d, grid: grid.clone(), sup_err, k, scale_constant }
        })
        .collect())
}

/// Ordinary least squares of ln(sup_err) on ln(d).
pub fn rate_fit(comparisons: &[KernelComparison]) -> Result<RateFit> {
    if comparisons.len() < 3 {
        return Err(Error::MalformedInput(format!(
            "rate fit needs at least 3 degrees, got {}",
            comparisons.len()
        )));
    }
    let mut xs = Vec::with_capacity(comparisons.len());
    let mut ys = Vec::with_capacity(comparisons.len());
    for c in comparisons {
        if !(c.sup_err > 0.0 && c.sup_err.is_finite()) {
            return Err(Error::MalformedInput(format!(
                "log-log fit needs positive finite errors, got {} at d = {}",
                c.sup_err, c.d
            )));
        }
        xs.push((c.d as f64).ln());
        ys.push(c.sup_err.ln());
    }
    let n = xs.len() as f64;
    let xbar = xs.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - xbar) * (x - xbar)).sum();
    if sxx == 0.0 {
        return Err(Error::MalformedInput("rate fit needs distinct degrees".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let ss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    Ok(RateFit { slope, residual: (ss / n).sqrt() })
}
