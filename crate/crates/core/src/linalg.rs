//! Minimal fixed-size complex linear algebra.
//!
//! Three-component Hermitian arithmetic is all the projective geometry here
//! needs, so these are plain functions over `[Complex<T>; 3]` rather than a
//! matrix library dependency.

use num_complex::Complex;

use crate::scalar::Real;

/// Hermitian inner product `<a, b> = sum a_i conj(b_i)`.
pub fn hdot<T: Real>(a: &[Complex<T>; 3], b: &[Complex<T>; 3]) -> Complex<T> {
    a[0] * b[0].conj() + a[1] * b[1].conj() + a[2] * b[2].conj()
}

/// Squared Hermitian norm.
pub fn norm_sq<T: Real>(a: &[Complex<T>; 3]) -> T {
    a[0].norm_sqr() + a[1].norm_sqr() + a[2].norm_sqr()
}

pub fn scale<T: Real>(a: &[Complex<T>; 3], s: Complex<T>) -> [Complex<T>; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn add<T: Real>(a: &[Complex<T>; 3], b: &[Complex<T>; 3]) -> [Complex<T>; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub<T: Real>(a: &[Complex<T>; 3], b: &[Complex<T>; 3]) -> [Complex<T>; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// Normalize to unit Hermitian norm. Returns `None` for (near-)zero input.
pub fn normalize<T: Real>(a: &[Complex<T>; 3]) -> Option<[Complex<T>; 3]> {
    let n = norm_sq(a).sqrt();
    if n <= T::of(1e-300) {
        return None;
    }
    let inv = Complex::new(T::one() / n, T::zero());
    Some(scale(a, inv))
}

/// Remove the component of `a` along unit vector `u`.
pub fn project_out<T: Real>(a: &[Complex<T>; 3], u: &[Complex<T>; 3]) -> [Complex<T>; 3] {
    let c = hdot(a, u);
    sub(a, &scale(u, c))
}

/// Column-major 3x3 complex matrix; `cols[j]` is the image of basis vector j.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat3<T: Real = f64> {
    pub cols: [[Complex<T>; 3]; 3],
}

impl<T: Real> CMat3<T> {
    pub fn identity() -> Self {
        let o = Complex::new(T::one(), T::zero());
        let z = Complex::new(T::zero(), T::zero());
        CMat3 {
            cols: [[o, z, z], [z, o, z], [z, z, o]],
        }
    }

    /// Matrix-vector product.
    pub fn apply(&self, x: &[Complex<T>; 3]) -> [Complex<T>; 3] {
        let mut y = [Complex::new(T::zero(), T::zero()); 3];
        for j in 0..3 {
            for i in 0..3 {
                y[i] = y[i] + self.cols[j][i] * x[j];
            }
        }
        y
    }

    /// Row `i` as a vector (the linear form a substitution puts in slot i).
    pub fn row(&self, i: usize) -> [Complex<T>; 3] {
        [self.cols[0][i], self.cols[1][i], self.cols[2][i]]
    }

    /// Max deviation of `U^* U` from the identity; zero for exact unitaries.
    pub fn unitarity_defect(&self) -> T {
        let mut worst = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                let g = hdot(&self.cols[i], &self.cols[j]);
                let target = if i == j { T::one() } else { T::zero() };
                let dev = (g - Complex::new(target, T::zero())).norm();
                if dev > worst {
                    worst = dev;
                }
            }
        }
        worst
    }
}

/// Gram-Schmidt a triple of vectors into a unitary matrix (columns). Returns
/// `None` when the inputs are numerically dependent.
pub fn gram_schmidt3<T: Real>(v: [[Complex<T>; 3]; 3]) -> Option<CMat3<T>> {
    let u0 = normalize(&v[0])?;
    let mut u1 = project_out(&v[1], &u0);
    u1 = normalize(&u1)?;
    let mut u2 = project_out(&v[2], &u0);
    u2 = project_out(&u2, &u1);
    let u2 = normalize(&u2)?;
    Some(CMat3 { cols: [u0, u1, u2] })
}

/// Haar-distributed random unitary: Gram-Schmidt of three i.i.d. Gaussian
/// vectors. The normalizations divide by positive real norms, so this is the
/// QR factorization with positive diagonal and the law is exactly Haar.
pub fn random_unitary<T: Real, R: rand::Rng + ?Sized>(rng: &mut R) -> CMat3<T> {
    loop {
        let mut v = [[Complex::new(T::zero(), T::zero()); 3]; 3];
        for col in v.iter_mut() {
            for entry in col.iter_mut() {
                *entry = crate::rng::complex_normal(rng);
            }
        }
        if let Some(u) = gram_schmidt3(v) {
            return u;
        }
    }
}
