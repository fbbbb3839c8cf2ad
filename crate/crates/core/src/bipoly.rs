//! Dense bivariate polynomials on complex 2-space: affine charts of the
//! projective ensemble and the truncated local field both live here.

use num_complex::Complex;

use crate::poly::{HomPoly3, Jet2};
use crate::scalar::Real;
use crate::unipoly::UniPoly;

/// Dense polynomial in (z, w), coefficient of z^i w^j at `coeffs[i*(n+1)+j]`
/// where `n` is the per-variable degree bound.
#[derive(Debug, Clone, PartialEq)]
pub struct BiPoly<T: Real = f64> {
    bound: usize,
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> BiPoly<T> {
    pub fn zero(bound: usize) -> Self {
        let zero = Complex::new(T::zero(), T::zero());
        BiPoly { bound, coeffs: vec![zero; (bound + 1) * (bound + 1)] }
    }

    /// Per-variable degree bound of the storage (not the exact degree).
    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn coeff(&self, i: usize, j: usize) -> Complex<T> {
        self.coeffs[i * (self.bound + 1) + j]
    }

    pub fn coeff_mut(&mut self, i: usize, j: usize) -> &mut Complex<T> {
        &mut self.coeffs[i * (self.bound + 1) + j]
    }

    /// Affine chart of a homogeneous polynomial: set coordinate `chart` to 1;
    /// the remaining coordinates become (z, w) in index order.
    pub fn from_hom_chart(p: &HomPoly3<T>, chart: usize) -> Self {
        assert!(chart < 3);
        let (zi, wi) = match chart {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let mut out = BiPoly::zero(p.degree() as usize);
        for (e, c) in p.terms() {
            *out.coeff_mut(e[zi] as usize, e[wi] as usize) += c;
        }
        out
    }

    /// Two-stage Horner evaluation.
    pub fn eval(&self, z: Complex<T>, w: Complex<T>) -> Complex<T> {
        let n = self.bound;
        let zero = Complex::new(T::zero(), T::zero());
        let mut acc = zero;
        for i in (0..=n).rev() {
            let mut row = zero;
            for j in (0..=n).rev() {
                row = row * w + self.coeff(i, j);
            }
            acc = acc * z + row;
        }
        acc
    }

    pub fn partial_z(&self) -> BiPoly<T> {
        let mut out = BiPoly::zero(self.bound);
        for i in 1..=self.bound {
            for j in 0..=self.bound {
                *out.coeff_mut(i - 1, j) = self.coeff(i, j) * T::of(i as f64);
            }
        }
        out
    }

    pub fn partial_w(&self) -> BiPoly<T> {
        let mut out = BiPoly::zero(self.bound);
        for i in 0..=self.bound {
            for j in 1..=self.bound {
                *out.coeff_mut(i, j - 1) = self.coeff(i, j) * T::of(j as f64);
            }
        }
        out
    }

    /// The univariate polynomial w -> p(z, w) at fixed z.
    pub fn univariate_in_w(&self, z: Complex<T>) -> UniPoly<T> {
        let n = self.bound;
        let zero = Complex::new(T::zero(), T::zero());
        let mut cs = vec![zero; n + 1];
        for (j, c) in cs.iter_mut().enumerate() {
            // Horner over i for the coefficient of w^j.
            let mut acc = zero;
            for i in (0..=n).rev() {
                acc = acc * z + self.coeff(i, j);
            }
            *c = acc;
        }
        UniPoly::new(cs)
    }

    pub fn add_scaled(&self, other: &BiPoly<T>, factor: Complex<T>) -> BiPoly<T> {
        let bound = self.bound.max(other.bound);
        let mut out = BiPoly::zero(bound);
        for i in 0..=self.bound {
            for j in 0..=self.bound {
                *out.coeff_mut(i, j) += self.coeff(i, j);
            }
        }
        for i in 0..=other.bound {
            for j in 0..=other.bound {
                *out.coeff_mut(i, j) += other.coeff(i, j) * factor;
            }
        }
        out
    }

    /// Largest coefficient magnitude.
    pub fn max_coeff(&self) -> T {
        self.coeffs.iter().map(|c| c.norm()).fold(T::zero(), T::max)
    }

    /// Conditioning scale of `eval` at one point: sum |c_ij| |z|^i |w|^j.
    pub fn local_scale(&self, z: Complex<T>, w: Complex<T>) -> T {
        let (za, wa) = (z.norm(), w.norm());
        let mut pow_i = T::one();
        let mut acc = T::zero();
        for i in 0..=self.bound {
            let mut pow_ij = pow_i;
            for j in 0..=self.bound {
                acc += self.coeff(i, j).norm() * pow_ij;
                pow_ij *= wa;
            }
            pow_i *= za;
        }
        acc
    }

    /// Scale bound on the working ball of radius rho: sum |c_ij| rho^{i+j}.
    /// Dominates |p| there; used for relative residual screens.
    pub fn sup_scale(&self, rho: T) -> T {
        let mut pow_i = T::one();
        let mut acc = T::zero();
        for i in 0..=self.bound {
            let mut pow_ij = pow_i;
            for j in 0..=self.bound {
                acc += self.coeff(i, j).norm() * pow_ij;
                pow_ij *= rho;
            }
            pow_i *= rho;
        }
        acc
    }
}

/// Highest structurally nonzero w-power per z-power row. Horner evaluation
/// truncated to these bounds returns bitwise the same value as the dense
/// scan, since leading zero coefficients contribute exactly zero.
fn row_bounds<T: Real>(p: &BiPoly<T>) -> Vec<usize> {
    let zero = Complex::new(T::zero(), T::zero());
    (0..=p.bound)
        .map(|i| (0..=p.bound).rev().find(|&j| p.coeff(i, j) != zero).unwrap_or(0))
        .collect()
}

fn eval_rows<T: Real>(p: &BiPoly<T>, rows: &[usize], z: Complex<T>, w: Complex<T>) -> Complex<T> {
    let zero = Complex::new(T::zero(), T::zero());
    let mut acc = zero;
    for i in (0..=p.bound).rev() {
        let mut row = zero;
        for j in (0..=rows[i]).rev() {
            row = row * w + p.coeff(i, j);
        }
        acc = acc * z + row;
    }
    acc
}

/// Precomputed first and second partial derivatives of a fixed polynomial,
/// for repeated exact 2-jet evaluation at many points. Rows are trimmed to
/// their structural degree, which matters for the (triangular) coefficient
/// squares of total-degree polynomials.
pub struct JetEvaluator<T: Real = f64> {
    pub p: BiPoly<T>,
    pz: BiPoly<T>,
    pw: BiPoly<T>,
    pzz: BiPoly<T>,
    pww: BiPoly<T>,
    pzw: BiPoly<T>,
    rows: [Vec<usize>; 6],
    abs: Vec<T>,
}

impl<T: Real> JetEvaluator<T> {
    pub fn new(p: BiPoly<T>) -> Self {
        let pz = p.partial_z();
        let pw = p.partial_w();
        let pzz = pz.partial_z();
        let pww = pw.partial_w();
        let pzw = pz.partial_w();
        let rows = [
            row_bounds(&p),
            row_bounds(&pz),
            row_bounds(&pw),
            row_bounds(&pzz),
            row_bounds(&pww),
            row_bounds(&pzw),
        ];
        let mut abs = Vec::with_capacity((p.bound + 1) * (p.bound + 1));
        for i in 0..=p.bound {
            for j in 0..=p.bound {
                abs.push(p.coeff(i, j).norm());
            }
        }
        JetEvaluator { p, pz, pw, pzz, pww, pzw, rows, abs }
    }

    /// [`BiPoly::local_scale`] of the base polynomial, served from cached
    /// coefficient moduli (same summation order, so identical values).
    pub fn local_scale(&self, z: Complex<T>, w: Complex<T>) -> T {
        let (za, wa) = (z.norm(), w.norm());
        let n = self.p.bound;
        let mut pow_i = T::one();
        let mut acc = T::zero();
        for i in 0..=n {
            let mut pow_ij = pow_i;
            for j in 0..=n {
                acc += self.abs[i * (n + 1) + j] * pow_ij;
                pow_ij *= wa;
            }
            pow_i *= za;
        }
        acc
    }

    /// First partials only (cheaper than the full jet).
    pub fn grad_at(&self, z: Complex<T>, w: Complex<T>) -> (Complex<T>, Complex<T>) {
        (eval_rows(&self.pz, &self.rows[1], z, w), eval_rows(&self.pw, &self.rows[2], z, w))
    }

    pub fn jet_at(&self, z: Complex<T>, w: Complex<T>) -> Jet2<T> {
        Jet2 {
            f0: eval_rows(&self.p, &self.rows[0], z, w),
            fz: eval_rows(&self.pz, &self.rows[1], z, w),
            fw: eval_rows(&self.pw, &self.rows[2], z, w),
            fzz: eval_rows(&self.pzz, &self.rows[3], z, w),
            fww: eval_rows(&self.pww, &self.rows[4], z, w),
            fzw: eval_rows(&self.pzw, &self.rows[5], z, w),
        }
    }
}
