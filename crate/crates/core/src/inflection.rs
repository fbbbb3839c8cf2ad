//! Counting inflection points of a plane curve: the distinct common zeros of
//! P and its Hessian determinant, located through a univariate resultant.
//!
//! Pipeline per affine chart: dehomogenize both curves, evaluate the
//! Sylvester resultant (eliminating the second coordinate) on enough unit
//! circle nodes to interpolate it exactly, root-find the interpolated
//! resultant, recover the second coordinate from the matching univariate
//! slices, and polish every candidate with a 2x2 Newton iteration on the
//! pair. Every projective point is finite in at least one of the three
//! charts, so the accepted points of all charts are pooled before counting
//! distinct ones; the fixed chart order keeps the count deterministic.

use num_complex::Complex;

use crate::bipoly::BiPoly;
use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::HomPoly3;
use crate::unipoly::{from_unit_circle_samples, unit_circle_nodes, UniPoly};

type C64 = Complex<f64>;

/// Accepted common zeros must reach this residual relative to the local
/// evaluation scale of each polynomial.
const RESIDUAL_TOL: f64 = 1e-9;

const NEWTON_ITERATIONS: usize = 12;

/// Number of distinct inflection points of the zero set of `p` (2 <= d <= 6),
/// merging candidates closer than `tol` in chordal distance. Expected count
/// for a smooth degree-d curve: 0 at d = 2 and 3d(d-2) for d >= 3.
///
/// Errors with `IllConditioned` when no chart produces a stable count (for
/// example a singular curve, or clusters that straddle `tol`).
pub fn inflection_count(p: &HomPoly3<f64>, tol: f64) -> Result<usize> {
    let d = p.degree();
    if !(2..=6).contains(&d) {
        return Err(Error::MalformedInput(format!(
            "inflection counting supports degrees 2 through 6, got {d}"
        )));
    }
    if !(tol > 0.0 && tol < 0.1) {
        return Err(Error::MalformedInput(format!(
            "merge tolerance must lie in (0, 0.1), got {tol}"
        )));
    }
    if d == 2 {
        return conic_count(p);
    }

    let h = p.hessian_det();
    let mut pooled: Vec<[C64; 3]> = Vec::new();
    let mut usable_charts = 0usize;
    for chart in 0..3 {
        if let Some(points) = chart_points(p, &h, chart) {
            usable_charts += 1;
            pooled.extend(points);
        }
    }
    if usable_charts == 0 || pooled.is_empty() {
        return Err(Error::IllConditioned(
            "no affine chart produced inflection candidates; the curve is likely singular".into(),
        ));
    }
    let count = cluster_count(&pooled, tol);
    // A count that moves when the merge radius is tripled sits on a cluster
    // boundary; refuse it rather than guess.
    if count != cluster_count(&pooled, 3.0 * tol) {
        return Err(Error::IllConditioned(
            "inflection candidates cluster at the merge tolerance boundary".into(),
        ));
    }
    Ok(count)
}

/// A smooth conic has a constant nonsingular Hessian and no inflections;
/// a degenerate one (product of lines) has no meaningful count.
fn conic_count(p: &HomPoly3<f64>) -> Result<usize> {
    let mut hess = [[C64::new(0.0, 0.0); 3]; 3];
    let anywhere = [C64::new(1.0, 0.0); 3];
    for i in 0..3 {
        let pi = p.partial(i);
        for j in 0..3 {
            hess[i][j] = pi.partial(j).evaluate(&anywhere);
        }
    }
    let det = hess[0][0] * (hess[1][1] * hess[2][2] - hess[1][2] * hess[2][1])
        - hess[0][1] * (hess[1][0] * hess[2][2] - hess[1][2] * hess[2][0])
        + hess[0][2] * (hess[1][0] * hess[2][1] - hess[1][1] * hess[2][0]);
    let scale = p.coeff_scale();
    if det.norm() <= 1e-10 * scale * scale * scale {
        return Err(Error::IllConditioned(
            "conic with singular Hessian (a product of lines) has no inflection count".into(),
        ));
    }
    Ok(0)
}

/// Lift a chart point to a unit projective representative.
fn lift(chart: usize, x: C64, y: C64) -> Option<[C64; 3]> {
    let one = C64::new(1.0, 0.0);
    let rep = match chart {
        0 => [one, x, y],
        1 => [x, one, y],
        _ => [x, y, one],
    };
    linalg::normalize(&rep)
}

/// Chordal distance between unit representatives: sqrt(1 - |<a, b>|^2).
fn chordal(a: &[C64; 3], b: &[C64; 3]) -> f64 {
    (1.0 - linalg::hdot(a, b).norm_sqr()).max(0.0).sqrt()
}

/// Greedy clustering count at radius `tol`.
fn cluster_count(points: &[[C64; 3]], tol: f64) -> usize {
    let mut reps: Vec<[C64; 3]> = Vec::new();
    for x in points {
        if !reps.iter().any(|r| chordal(r, x) <= tol) {
            reps.push(*x);
        }
    }
    reps.len()
}

/// Largest second-coordinate exponent actually present.
fn y_degree(b: &BiPoly<f64>) -> usize {
    let floor = 1e-300;
    (0..=b.bound())
        .rev()
        .find(|&j| (0..=b.bound()).any(|i| b.coeff(i, j).norm() > floor))
        .unwrap_or(0)
}

/// Univariate slice in the second coordinate truncated to the structural
/// degree `deg` (entries above it are exact zeros of the chart).
fn y_slice(b: &BiPoly<f64>, deg: usize, x: C64) -> UniPoly<f64> {
    let mut slice = b.univariate_in_w(x);
    slice.coeffs.truncate(deg + 1);
    slice
}

/// Accepted common zeros of (p, h) that are finite in one chart; None means
/// the chart is structurally unusable. An empty list is a valid outcome
/// (all of this chart's zeros sit on its line at infinity).
fn chart_points(p: &HomPoly3<f64>, h: &HomPoly3<f64>, chart: usize) -> Option<Vec<[C64; 3]>> {
    let bp = BiPoly::from_hom_chart(p, chart);
    let bh = BiPoly::from_hom_chart(h, chart);
    let (dp, dh) = (bp.bound(), bh.bound());
    let m = y_degree(&bp);
    let n = y_degree(&bh);
    if m == 0 {
        // The curve is a union of lines through this chart's vertex.
        return None;
    }

    // Interpolate the resultant in the first coordinate from exact values
    // on the unit circle. Its degree is at most n dp + m dh - m n <= dp dh.
    let nodes = unit_circle_nodes::<f64>(dp * dh + 1);
    let values: Vec<C64> = nodes
        .iter()
        .map(|&x| sylvester_det(&y_slice(&bp, m, x), &y_slice(&bh, n, x)))
        .collect();
    let mut resultant = from_unit_circle_samples(&values);
    resultant.trim_leading(1e-10);
    if resultant.degree() == 0 {
        return None;
    }
    let x_candidates = resultant.roots().ok()?;

    let (bpx, bpy) = (bp.partial_z(), bp.partial_w());
    let (bhx, bhy) = (bh.partial_z(), bh.partial_w());
    let mut accepted: Vec<[C64; 3]> = Vec::new();
    for &x in &x_candidates {
        let mut slice = y_slice(&bp, m, x);
        // The structural leading coefficient may vanish at this x; the
        // trimmed-away roots escape to this chart's infinity.
        slice.trim_leading(1e-12);
        if slice.degree() == 0 {
            continue;
        }
        let Ok(w_candidates) = slice.roots() else { continue };
        for &w in &w_candidates {
            let polished = newton_polish(&bp, &bh, &bpx, &bpy, &bhx, &bhy, x, w);
            let Some((px, pw)) = polished else { continue };
            let ok = bp.eval(px, pw).norm() <= RESIDUAL_TOL * bp.local_scale(px, pw)
                && bh.eval(px, pw).norm() <= RESIDUAL_TOL * bh.local_scale(px, pw);
            if !ok {
                continue;
            }
            if let Some(rep) = lift(chart, px, pw) {
                accepted.push(rep);
            }
        }
    }
    Some(accepted)
}

/// Determinant of the Sylvester matrix of two univariate polynomials
/// (resultant eliminating their shared variable), by LU with partial
/// pivoting.
fn sylvester_det(p: &UniPoly<f64>, q: &UniPoly<f64>) -> C64 {
    let (m, n) = (p.degree(), q.degree());
    let size = m + n;
    let mut a = vec![C64::new(0.0, 0.0); size * size];
    // Row r < n holds the coefficients of p, highest first, shifted by r;
    // rows n..n+m do the same for q.
    for r in 0..n {
        for (k, &c) in p.coeffs.iter().rev().enumerate() {
            a[r * size + r + k] = c;
        }
    }
    for r in 0..m {
        for (k, &c) in q.coeffs.iter().rev().enumerate() {
            a[(n + r) * size + r + k] = c;
        }
    }

    let mut det = C64::new(1.0, 0.0);
    for col in 0..size {
        let pivot_row = (col..size)
            .max_by(|&r1, &r2| {
                a[r1 * size + col].norm().total_cmp(&a[r2 * size + col].norm())
            })
            .unwrap();
        let pivot = a[pivot_row * size + col];
        if pivot.norm() == 0.0 {
            return C64::new(0.0, 0.0);
        }
        if pivot_row != col {
            for k in col..size {
                a.swap(col * size + k, pivot_row * size + k);
            }
            det = -det;
        }
        det *= pivot;
        for r in (col + 1)..size {
            let factor = a[r * size + col] / pivot;
            if factor.norm() == 0.0 {
                continue;
            }
            for k in (col + 1)..size {
                let sub = factor * a[col * size + k];
                a[r * size + k] -= sub;
            }
        }
    }
    det
}

/// 2x2 Newton iteration on the pair (bp, bh) from a candidate common zero.
#[allow(clippy::too_many_arguments)]
fn newton_polish(
    bp: &BiPoly<f64>,
    bh: &BiPoly<f64>,
    bpx: &BiPoly<f64>,
    bpy: &BiPoly<f64>,
    bhx: &BiPoly<f64>,
    bhy: &BiPoly<f64>,
    mut x: C64,
    mut y: C64,
) -> Option<(C64, C64)> {
    for _ in 0..NEWTON_ITERATIONS {
        let (f, g) = (bp.eval(x, y), bh.eval(x, y));
        if f.norm() <= 1e-14 * bp.local_scale(x, y) && g.norm() <= 1e-14 * bh.local_scale(x, y) {
            return Some((x, y));
        }
        let (j00, j01) = (bpx.eval(x, y), bpy.eval(x, y));
        let (j10, j11) = (bhx.eval(x, y), bhy.eval(x, y));
        let det = j00 * j11 - j01 * j10;
        if det.norm() < 1e-280 {
            return None;
        }
        let dx = (f * j11 - g * j01) / det;
        let dy = (g * j00 - f * j10) / det;
        x -= dx;
        y -= dy;
        if !(x.re.is_finite() && x.im.is_finite() && y.re.is_finite() && y.im.is_finite()) {
            return None;
        }
    }
    Some((x, y))
}
