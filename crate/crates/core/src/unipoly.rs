//! Univariate complex polynomials: evaluation, interpolation, root finding.
//!
//! Root finding is Aberth-Ehrlich iteration with Newton polishing, for every
//! degree (degrees one and two short-circuit to closed forms). Every returned
//! root satisfies the residual contract
//! `|p(r)| <= RESIDUAL_FACTOR * max|coeff| * max(1, |r|)^deg`,
//! otherwise the solve reports `ConvergenceFailure`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Residual contract factor for accepted roots.
pub const RESIDUAL_FACTOR: f64 = 1e-10;

/// Relative size below which constant-side coefficients count as zero, so
/// exact roots at the origin are factored out instead of ground through the
/// iteration.
const ZERO_COEFF_REL: f64 = 1e-14;

/// Aberth-Ehrlich iteration cap.
const MAX_ITERATIONS: usize = 120;

/// Dense univariate polynomial, coefficients in ascending power order.
#[derive(Debug, Clone, PartialEq)]
pub struct UniPoly<T: Real = f64> {
    pub coeffs: Vec<Complex<T>>,
}

impl<T: Real> UniPoly<T> {
    pub fn new(coeffs: Vec<Complex<T>>) -> Self {
        assert!(!coeffs.is_empty(), "polynomial needs at least one coefficient");
        UniPoly { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn max_coeff(&self) -> T {
        self.coeffs
            .iter()
            .map(|c| c.norm())
            .fold(T::zero(), |a, b| if b > a { b } else { a })
    }

    /// Drop leading coefficients at or below `rel_tol * max|coeff|`. The
    /// caller decides when that is meaningful (lost roots move to infinity).
    pub fn trim_leading(&mut self, rel_tol: f64) {
        let floor = self.max_coeff() * T::of(rel_tol);
        while self.coeffs.len() > 1 && self.coeffs.last().unwrap().norm() <= floor {
            self.coeffs.pop();
        }
    }

    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        let mut p = Complex::new(T::zero(), T::zero());
        for &c in self.coeffs.iter().rev() {
            p = p * z + c;
        }
        p
    }

    /// Value and first derivative in one Horner pass.
    pub fn eval_with_derivative(&self, z: Complex<T>) -> (Complex<T>, Complex<T>) {
        let n = self.coeffs.len() - 1;
        let mut p = self.coeffs[n];
        let mut dp = Complex::new(T::zero(), T::zero());
        for k in (0..n).rev() {
            dp = dp * z + p;
            p = p * z + self.coeffs[k];
        }
        (p, dp)
    }

    /// Residual bound a root at `r` must meet.
    pub fn residual_bound(&self, r: Complex<T>) -> T {
        let base = if r.norm() > T::one() { r.norm() } else { T::one() };
        T::of(RESIDUAL_FACTOR) * self.max_coeff() * base.powi(self.degree() as i32)
    }

    /// All complex roots (with multiplicity as repeats), in no particular
    /// order beyond being deterministic for identical input.
    pub fn roots(&self) -> Result<Vec<Complex<T>>> {
        self.roots_with_warm_start(None)
    }

    /// Roots, optionally starting the iteration from a previous solution of a
    /// nearby polynomial (e.g. marching a parameter along a grid). The warm
    /// start is used only when its length matches the working degree.
    pub fn roots_with_warm_start(&self, warm: Option<&[Complex<T>]>) -> Result<Vec<Complex<T>>> {
        let scale = self.max_coeff();
        if scale == T::zero() {
            return Err(Error::MalformedInput(
                "cannot take roots of the zero polynomial".into(),
            ));
        }

        // Factor exact roots at the origin: leading low-order coefficients
        // that are zero at working precision.
        let zero_floor = scale * T::of(ZERO_COEFF_REL);
        let mut low = 0usize;
        while low < self.coeffs.len() - 1 && self.coeffs[low].norm() <= zero_floor {
            low += 1;
        }
        let work = UniPoly::new(self.coeffs[low..].to_vec());

        let mut roots: Vec<Complex<T>> =
            vec![Complex::new(T::zero(), T::zero()); low];
        let deg = work.degree();
        if deg == 0 {
            return Ok(roots);
        }

        let mut found = match deg {
            1 => vec![-work.coeffs[0] / work.coeffs[1]],
            2 => solve_quadratic(&work.coeffs),
            _ => {
                let warm_ok = warm.filter(|w| w.len() == deg);
                aberth(&work, warm_ok)
            }
        };

        // Newton polish and residual contract against the working factor.
        // The bound scale is hoisted out of the loop; the polish stops once
        // a step falls below roundoff resolution.
        let bound_scale = T::of(RESIDUAL_FACTOR) * work.max_coeff();
        for r in found.iter_mut() {
            for _ in 0..4 {
                let (p, dp) = work.eval_with_derivative(*r);
                if dp.norm() == T::zero() {
                    break;
                }
                let step = p / dp;
                if !step.re.is_finite() || !step.im.is_finite() {
                    break;
                }
                *r -= step;
                if step.norm_sqr() <= T::of(1e-30) * (T::one() + r.norm_sqr()) {
                    break;
                }
            }
            let resid = work.eval(*r).norm();
            let base = if r.norm() > T::one() { r.norm() } else { T::one() };
            if !(resid <= bound_scale * base.powi(deg as i32)) {
                return Err(Error::ConvergenceFailure(format!(
                    "residual {:e} exceeds contract {:e} at degree {}",
                    resid.to_f64().unwrap_or(f64::NAN),
                    work.residual_bound(*r).to_f64().unwrap_or(f64::NAN),
                    deg
                )));
            }
        }

        roots.append(&mut found);
        Ok(roots)
    }
}

/// Stable complex quadratic formula.
fn solve_quadratic<T: Real>(c: &[Complex<T>]) -> Vec<Complex<T>> {
    let (a, b, c0) = (c[2], c[1], c[0]);
    let disc = b * b - a * c0 * T::of(4.0);
    let mut s = disc.sqrt();
    // Pick the sqrt branch aligned with b to avoid cancellation in b + s.
    if (b.conj() * s).re < T::zero() {
        s = -s;
    }
    let q = -(b + s) * T::of(0.5);
    if q.norm() == T::zero() {
        // b = 0 and disc = 0: double root at origin of a z^2.
        let r = -b / (a * T::of(2.0));
        return vec![r, r];
    }
    vec![q / a, c0 / q]
}

/// Aberth-Ehrlich simultaneous iteration. Expects degree >= 3 and a nonzero
/// leading coefficient; returns approximations to be polished by the caller.
fn aberth<T: Real>(p: &UniPoly<T>, warm: Option<&[Complex<T>]>) -> Vec<Complex<T>> {
    let n = p.degree();
    let lead = p.coeffs[n];

    let mut z: Vec<Complex<T>> = match warm {
        Some(w) => w.to_vec(),
        None => {
            // Fujiwara-style inclusion radius, then spread guesses on a
            // circle with an angular offset to break symmetric stalls.
            let mut radius = T::zero();
            for k in 1..=n {
                let ratio = (p.coeffs[n - k] / lead).norm();
                let r = ratio.powf(T::one() / T::of(k as f64));
                if r > radius {
                    radius = r;
                }
            }
            let radius = (radius * T::of(2.0)).max(T::of(1e-6));
            let r0 = radius * T::of(0.5);
            (0..n)
                .map(|j| {
                    let theta =
                        T::of(2.0) * T::PI() * T::of(j as f64) / T::of(n as f64) + T::of(0.4);
                    Complex::new(r0 * theta.cos(), r0 * theta.sin())
                })
                .collect()
        }
    };

    let tol = T::of(5e-14);
    let mut converged = vec![false; n];
    for _ in 0..MAX_ITERATIONS {
        let mut all_done = true;
        for i in 0..n {
            if converged[i] {
                continue;
            }
            let (pv, dpv) = p.eval_with_derivative(z[i]);
            if pv.norm_sqr() == T::zero() {
                converged[i] = true;
                continue;
            }
            let newton = if dpv.norm_sqr() == T::zero() {
                // Derivative vanished (or underflowed); nudge off the
                // critical point instead of dividing.
                Complex::new(T::of(1e-8), T::of(1e-8))
            } else {
                pv / dpv
            };
            let mut repulsion = Complex::new(T::zero(), T::zero());
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    let n2 = d.norm_sqr();
                    // 1/d as conj(d)/|d|^2 with a single division.
                    if n2 > T::zero() {
                        let inv = T::one() / n2;
                        repulsion += Complex::new(d.re * inv, -(d.im * inv));
                    }
                }
            }
            let denom = Complex::new(T::one(), T::zero()) - newton * repulsion;
            let w = if denom.norm() <= T::of(1e-290) {
                newton
            } else {
                newton / denom
            };
            z[i] -= w;
            // Squared-modulus form of |w| <= tol (1 + |z|), loosened by at
            // most sqrt(2) via (1+a)^2 <= 2(1+a^2); the Newton polish
            // closes the remaining gap.
            if w.norm_sqr() <= tol * tol * T::of(2.0) * (T::one() + z[i].norm_sqr()) {
                converged[i] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            break;
        }
    }
    z
}

/// Recover coefficients of a degree `n-1` polynomial from its values at the
/// `n`-th roots of unity (inverse discrete Fourier transform, direct O(n^2)
/// since n stays small here). The nodes are `exp(2 pi i t / n)`, t = 0..n-1.
pub fn from_unit_circle_samples<T: Real>(values: &[Complex<T>]) -> UniPoly<T> {
    let n = values.len();
    assert!(n >= 1);
    let two_pi = T::of(2.0) * T::PI();
    let inv_n = T::one() / T::of(n as f64);
    let mut coeffs = Vec::with_capacity(n);
    for m in 0..n {
        let mut acc = Complex::new(T::zero(), T::zero());
        for (t, &v) in values.iter().enumerate() {
            // omega^{-t m}
            let ang = -two_pi * T::of((t * m % n) as f64) / T::of(n as f64);
            acc += v * Complex::new(ang.cos(), ang.sin());
        }
        coeffs.push(acc * inv_n);
    }
    UniPoly::new(coeffs)
}

/// The `n`-th roots of unity in index order (interpolation nodes).
pub fn unit_circle_nodes<T: Real>(n: usize) -> Vec<Complex<T>> {
    let two_pi = T::of(2.0) * T::PI();
    (0..n)
        .map(|t| {
            let ang = two_pi * T::of(t as f64) / T::of(n as f64);
            Complex::new(ang.cos(), ang.sin())
        })
        .collect()
}
