//! Homogeneous polynomials in three complex variables: the random ensemble,
//! evaluation, exact differentiation into chart 2-jets, unitary frames and
//! line restrictions.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat3};
use crate::rng::{complex_normal, RngStream};
use crate::scalar::Real;
use crate::unipoly::{unit_circle_nodes, UniPoly};

/// Lines whose point at infinity lies this close (relative to the invariant
/// coefficient scale) to the curve are rejected as degenerate.
pub const DEGENERATE_LINE_TOL: f64 = 1e-12;

/// Natural-log factorial table `ln(k!)` for `k = 0..=n`.
pub(crate) fn ln_factorials(n: usize) -> Vec<f64> {
    let mut t = Vec::with_capacity(n + 1);
    let mut acc = 0.0f64;
    t.push(0.0);
    for k in 1..=n {
        acc += (k as f64).ln();
        t.push(acc);
    }
    t
}

/// 2-jet of a chart function at the chart origin: value, the two first
/// partials, and the three second partials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2<T: Real = f64> {
    pub f0: Complex<T>,
    pub fz: Complex<T>,
    pub fw: Complex<T>,
    pub fzz: Complex<T>,
    pub fww: Complex<T>,
    pub fzw: Complex<T>,
}

impl<T: Real> Jet2<T> {
    pub fn scaled(&self, lambda: Complex<T>) -> Self {
        Jet2 {
            f0: self.f0 * lambda,
            fz: self.fz * lambda,
            fw: self.fw * lambda,
            fzz: self.fzz * lambda,
            fww: self.fww * lambda,
            fzw: self.fzw * lambda,
        }
    }
}

/// A point of the projective plane held as a unit-norm representative.
#[derive(Debug, Clone, Copy)]
pub struct ProjPoint<T: Real = f64> {
    rep: [Complex<T>; 3],
}

impl<T: Real> ProjPoint<T> {
    /// Normalize an arbitrary nonzero representative.
    pub fn from_rep(rep: [Complex<T>; 3]) -> Result<Self> {
        let unit = linalg::normalize(&rep)
            .ok_or(Error::MalformedInput("zero vector is not a projective point".into()))?;
        Ok(ProjPoint { rep: unit })
    }

    pub fn rep(&self) -> &[Complex<T>; 3] {
        &self.rep
    }
}

/// A projective line spanned by an orthonormal pair.
#[derive(Debug, Clone, Copy)]
pub struct ProjLine<T: Real = f64> {
    pub u: [Complex<T>; 3],
    pub v: [Complex<T>; 3],
}

impl<T: Real> ProjLine<T> {
    /// Validates orthonormality to the type's 1e-12 contract.
    pub fn new(u: [Complex<T>; 3], v: [Complex<T>; 3]) -> Result<Self> {
        let tol = T::of(1e-12);
        let unit = (linalg::norm_sq(&u) - T::one()).abs() <= tol
            && (linalg::norm_sq(&v) - T::one()).abs() <= tol;
        if !unit || linalg::hdot(&u, &v).norm() > tol {
            return Err(Error::MalformedInput("line spans must be orthonormal".into()));
        }
        Ok(ProjLine { u, v })
    }
}

/// Orthonormal frame anchored at a projective point; `u0` is the point.
#[derive(Debug, Clone, Copy)]
pub struct UnitaryFrame<T: Real = f64> {
    pub u0: [Complex<T>; 3],
    pub u1: [Complex<T>; 3],
    pub u2: [Complex<T>; 3],
}

/// Degree-d homogeneous polynomial with sparse monomial coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct HomPoly3<T: Real = f64> {
    degree: u32,
    exps: Vec<[u16; 3]>,
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> HomPoly3<T> {
    /// Construct with full validation: exponent sums, duplicates, finiteness.
    pub fn new(degree: u32, terms: Vec<([u16; 3], Complex<T>)>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::MalformedInput("degree must be at least 1".into()));
        }
        if terms.is_empty() {
            return Err(Error::MalformedInput("empty coefficient list".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for (e, c) in &terms {
            if u32::from(e[0]) + u32::from(e[1]) + u32::from(e[2]) != degree {
                return Err(Error::MalformedInput(format!(
                    "exponent triple {:?} does not sum to degree {}",
                    e, degree
                )));
            }
            if !seen.insert(*e) {
                return Err(Error::MalformedInput(format!("duplicate exponent triple {:?}", e)));
            }
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::MalformedInput("non-finite coefficient".into()));
            }
        }
        let (exps, coeffs) = terms.into_iter().unzip();
        Ok(HomPoly3 { degree, exps, coeffs })
    }

    /// Internal constructor for terms produced by our own arithmetic.
    pub(crate) fn from_parts(degree: u32, exps: Vec<[u16; 3]>, coeffs: Vec<Complex<T>>) -> Self {
        debug_assert_eq!(exps.len(), coeffs.len());
        HomPoly3 { degree, exps, coeffs }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = ([u16; 3], Complex<T>)> + '_ {
        self.exps.iter().copied().zip(self.coeffs.iter().copied())
    }

    /// Unitarily invariant coefficient scale: sqrt of the sum of
    /// |c_e|^2 / multinomial(d; e). It dominates |P| on the unit sphere
    /// (Cauchy-Schwarz) and equals the Gaussian-coefficient norm for
    /// ensemble draws, so relative tolerances stay calibrated at every
    /// degree.
    pub fn coeff_scale(&self) -> T {
        let lnf = ln_factorials(self.degree as usize);
        let mut acc = T::zero();
        for (e, c) in self.terms() {
            let ln_mult = lnf[self.degree as usize]
                - lnf[e[0] as usize]
                - lnf[e[1] as usize]
                - lnf[e[2] as usize];
            acc += c.norm_sqr() * T::of((-ln_mult).exp());
        }
        acc.sqrt()
    }

    /// Plain monomial evaluation with per-coordinate power tables.
    pub fn evaluate(&self, x: &[Complex<T>; 3]) -> Complex<T> {
        let pows = power_tables(x, self.degree as usize);
        let mut acc = Complex::new(T::zero(), T::zero());
        for (e, c) in self.terms() {
            acc += c * pows[0][e[0] as usize] * pows[1][e[1] as usize] * pows[2][e[2] as usize];
        }
        acc
    }

    /// Value, ambient gradient and ambient (symmetric) Hessian at `x`,
    /// by exact monomial differentiation.
    fn ambient_jet(&self, x: &[Complex<T>; 3]) -> AmbientJet<T> {
        let d = self.degree as usize;
        let pows = power_tables(x, d);
        let zero = Complex::new(T::zero(), T::zero());
        let mut value = zero;
        let mut grad = [zero; 3];
        // Symmetric Hessian packed as [h00, h11, h22, h01, h02, h12].
        let mut hess = [zero; 6];
        for (e, c) in self.terms() {
            let (i, j, k) = (e[0] as usize, e[1] as usize, e[2] as usize);
            let (fi, fj, fk) = (T::of(i as f64), T::of(j as f64), T::of(k as f64));
            value += c * pows[0][i] * pows[1][j] * pows[2][k];
            if i > 0 {
                grad[0] += c * fi * pows[0][i - 1] * pows[1][j] * pows[2][k];
                if i > 1 {
                    hess[0] += c * fi * T::of((i - 1) as f64) * pows[0][i - 2] * pows[1][j] * pows[2][k];
                }
                if j > 0 {
                    hess[3] += c * fi * fj * pows[0][i - 1] * pows[1][j - 1] * pows[2][k];
                }
                if k > 0 {
                    hess[4] += c * fi * fk * pows[0][i - 1] * pows[1][j] * pows[2][k - 1];
                }
            }
            if j > 0 {
                grad[1] += c * fj * pows[0][i] * pows[1][j - 1] * pows[2][k];
                if j > 1 {
                    hess[1] += c * fj * T::of((j - 1) as f64) * pows[0][i] * pows[1][j - 2] * pows[2][k];
                }
                if k > 0 {
                    hess[5] += c * fj * fk * pows[0][i] * pows[1][j - 1] * pows[2][k - 1];
                }
            }
            if k > 0 {
                grad[2] += c * fk * pows[0][i] * pows[1][j] * pows[2][k - 1];
                if k > 1 {
                    hess[2] += c * fk * T::of((k - 1) as f64) * pows[0][i] * pows[1][j] * pows[2][k - 2];
                }
            }
        }
        AmbientJet { value, grad, hess }
    }

    /// Partial derivative along one ambient coordinate.
    pub fn partial(&self, axis: usize) -> HomPoly3<T> {
        assert!(axis < 3);
        assert!(self.degree >= 1);
        let mut exps = Vec::new();
        let mut coeffs = Vec::new();
        for (e, c) in self.terms() {
            if e[axis] == 0 {
                continue;
            }
            let mut lowered = e;
            lowered[axis] -= 1;
            exps.push(lowered);
            coeffs.push(c * T::of(e[axis] as f64));
        }
        HomPoly3::from_parts(self.degree - 1, exps, coeffs)
    }

    /// Product of two homogeneous polynomials.
    pub fn mul(&self, other: &HomPoly3<T>) -> HomPoly3<T> {
        let mut acc: BTreeMap<[u16; 3], Complex<T>> = BTreeMap::new();
        for (ea, ca) in self.terms() {
            for (eb, cb) in other.terms() {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                let cell = acc
                    .entry(e)
                    .or_insert_with(|| Complex::new(T::zero(), T::zero()));
                *cell += ca * cb;
            }
        }
        let (exps, coeffs) = acc.into_iter().unzip();
        HomPoly3::from_parts(self.degree + other.degree, exps, coeffs)
    }

    pub fn add_scaled(&self, other: &HomPoly3<T>, factor: Complex<T>) -> HomPoly3<T> {
        assert_eq!(self.degree, other.degree);
        let mut acc: BTreeMap<[u16; 3], Complex<T>> = BTreeMap::new();
        for (e, c) in self.terms() {
            *acc.entry(e).or_insert_with(|| Complex::new(T::zero(), T::zero())) += c;
        }
        for (e, c) in other.terms() {
            *acc.entry(e).or_insert_with(|| Complex::new(T::zero(), T::zero())) += c * factor;
        }
        let (exps, coeffs) = acc.into_iter().unzip();
        HomPoly3::from_parts(self.degree, exps, coeffs)
    }

    /// Determinant of the 3x3 matrix of second partials, a homogeneous
    /// polynomial of degree 3(d-2). Requires d >= 3 (at d = 2 the Hessian is
    /// a constant and the determinant is handled by the caller).
    pub fn hessian_det(&self) -> HomPoly3<T> {
        assert!(self.degree >= 3, "hessian_det needs degree >= 3");
        let p0 = self.partial(0);
        let p1 = self.partial(1);
        let p2 = self.partial(2);
        let h00 = p0.partial(0);
        let h01 = p0.partial(1);
        let h02 = p0.partial(2);
        let h11 = p1.partial(1);
        let h12 = p1.partial(2);
        let h22 = p2.partial(2);
        let one = Complex::new(T::one(), T::zero());
        let m00 = h11.mul(&h22).add_scaled(&h12.mul(&h12), -one);
        let m01 = h01.mul(&h22).add_scaled(&h12.mul(&h02), -one);
        let m02 = h01.mul(&h12).add_scaled(&h11.mul(&h02), -one);
        h00.mul(&m00)
            .add_scaled(&h01.mul(&m01), -one)
            .add_scaled(&h02.mul(&m02), one)
    }

    /// P composed with a unitary change of variables: evaluate(result, Y)
    /// equals evaluate(self, U Y). Dense trinomial expansion, intended for
    /// moderate degrees (tests and invariance checks).
    pub fn compose_unitary(&self, u: &CMat3<T>) -> HomPoly3<T> {
        let d = self.degree as usize;
        let lnf = ln_factorials(d);
        // Row m of U is the linear form that replaces X_m.
        let rows: [[Complex<T>; 3]; 3] = [u.row(0), u.row(1), u.row(2)];
        // Dense accumulator indexed by (exponent of Y1, exponent of Y2).
        let side = d + 1;
        let zero = Complex::new(T::zero(), T::zero());
        let mut acc = vec![zero; side * side];
        for (e, c) in self.terms() {
            let a = expand_linear_power(&rows[0], e[0] as usize, &lnf);
            let b = expand_linear_power(&rows[1], e[1] as usize, &lnf);
            let g = expand_linear_power(&rows[2], e[2] as usize, &lnf);
            let ab = convolve_triangular(&a, e[0] as usize, &b, e[1] as usize);
            // Total degree of the product is d, so its square side is `side`.
            let full = convolve_triangular(&ab, (e[0] + e[1]) as usize, &g, e[2] as usize);
            for q in 0..side {
                for r in 0..(side - q) {
                    acc[q * side + r] += c * full[q * side + r];
                }
            }
        }
        let mut exps = Vec::new();
        let mut coeffs = Vec::new();
        for q in 0..side {
            for r in 0..(side - q) {
                let c = acc[q * side + r];
                exps.push([(d - q - r) as u16, q as u16, r as u16]);
                coeffs.push(c);
            }
        }
        HomPoly3::from_parts(self.degree, exps, coeffs)
    }
}

struct AmbientJet<T: Real> {
    value: Complex<T>,
    grad: [Complex<T>; 3],
    /// Packed symmetric: [h00, h11, h22, h01, h02, h12].
    hess: [Complex<T>; 6],
}

fn power_tables<T: Real>(x: &[Complex<T>; 3], d: usize) -> [Vec<Complex<T>>; 3] {
    let mut out: [Vec<Complex<T>>; 3] = [
        Vec::with_capacity(d + 1),
        Vec::with_capacity(d + 1),
        Vec::with_capacity(d + 1),
    ];
    for c in 0..3 {
        let one = Complex::new(T::one(), T::zero());
        out[c].push(one);
        for e in 1..=d {
            let prev = out[c][e - 1];
            out[c].push(prev * x[c]);
        }
    }
    out
}

/// Coefficients of (v0 Y0 + v1 Y1 + v2 Y2)^e on the dense (q,r) grid
/// (exponents of Y1 and Y2; Y0 takes the rest). Row stride is e+1... the
/// caller treats the result as a (deg+1) x (deg+1) row-major square.
fn expand_linear_power<T: Real>(
    v: &[Complex<T>; 3],
    e: usize,
    lnf: &[f64],
) -> Vec<Complex<T>> {
    let side = e + 1;
    let zero = Complex::new(T::zero(), T::zero());
    let mut out = vec![zero; side * side];
    let pows = power_tables(&[v[0], v[1], v[2]], e);
    for q in 0..=e {
        for r in 0..=(e - q) {
            let p = e - q - r;
            let ln_mult = lnf[e] - lnf[p] - lnf[q] - lnf[r];
            let m = T::of(ln_mult.exp());
            out[q * side + r] = pows[0][p] * pows[1][q] * pows[2][r] * m;
        }
    }
    out
}

/// Convolve two dense triangular arrays of total degrees da, db into one of
/// degree da + db. All arrays are row-major squares of side (deg + 1).
fn convolve_triangular<T: Real>(
    a: &[Complex<T>],
    da: usize,
    b: &[Complex<T>],
    db: usize,
) -> Vec<Complex<T>> {
    let (sa, sb) = (da + 1, db + 1);
    let side = da + db + 1;
    let zero = Complex::new(T::zero(), T::zero());
    let mut out = vec![zero; side * side];
    for qa in 0..=da {
        for ra in 0..=(da - qa) {
            let ca = a[qa * sa + ra];
            if ca == zero {
                continue;
            }
            for qb in 0..=db {
                for rb in 0..=(db - qb) {
                    let cb = b[qb * sb + rb];
                    if cb == zero {
                        continue;
                    }
                    out[(qa + qb) * side + (ra + rb)] += ca * cb;
                }
            }
        }
    }
    out
}

/// Monomial weight sqrt(d!/(i! j! k!)) of the random ensemble.
pub fn kostlan_weight<T: Real>(d: u32, e: [u16; 3]) -> T {
    let lnf = ln_factorials(d as usize);
    let ln_w = lnf[d as usize] - lnf[e[0] as usize] - lnf[e[1] as usize] - lnf[e[2] as usize];
    T::of((0.5 * ln_w).exp())
}

/// Draw a random degree-d polynomial: c_e = a_e sqrt(d!/(i!j!k!)) with a_e
/// i.i.d. canonical complex Gaussians. Exponents are enumerated in a fixed
/// lexicographic order so the draw is reproducible.
pub fn sample_kostlan<T: Real>(d: u32, stream: &RngStream) -> HomPoly3<T> {
    assert!(d >= 1, "ensemble degree must be at least 1");
    let lnf = ln_factorials(d as usize);
    let mut rng = stream.rng();
    let n_terms = ((d + 1) * (d + 2) / 2) as usize;
    let mut exps = Vec::with_capacity(n_terms);
    let mut coeffs = Vec::with_capacity(n_terms);
    for i in (0..=d).rev() {
        for j in (0..=(d - i)).rev() {
            let k = d - i - j;
            let ln_w = lnf[d as usize] - lnf[i as usize] - lnf[j as usize] - lnf[k as usize];
            let w = T::of((0.5 * ln_w).exp());
            let a: Complex<T> = complex_normal(&mut rng);
            exps.push([i as u16, j as u16, k as u16]);
            coeffs.push(a * w);
        }
    }
    HomPoly3::from_parts(d, exps, coeffs)
}

/// Complete a projective point to a unitary frame. Candidates are the
/// standard basis vectors ordered by decreasing residual norm after removing
/// the u0 component, ties broken by index; Gram-Schmidt on the first two.
pub fn unitary_frame<T: Real>(x: &ProjPoint<T>) -> UnitaryFrame<T> {
    let u0 = *x.rep();
    let mut order: Vec<usize> = (0..3).collect();
    let resid = |i: usize| T::one() - u0[i].norm_sqr().min(T::one());
    order.sort_by(|&a, &b| {
        resid(b)
            .partial_cmp(&resid(a))
            .unwrap()
            .then(a.cmp(&b))
    });
    let zero = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    let basis = |i: usize| {
        let mut v = [zero; 3];
        v[i] = one;
        v
    };
    let c1 = basis(order[0]);
    let u1 = linalg::normalize(&linalg::project_out(&c1, &u0))
        .expect("largest-residual basis vector cannot be parallel to u0");
    let c2 = basis(order[1]);
    let mut w = linalg::project_out(&c2, &u0);
    w = linalg::project_out(&w, &u1);
    let u2 = match linalg::normalize(&w) {
        Some(u2) => u2,
        // Fall back to the last candidate if the second collapsed.
        None => {
            let c3 = basis(order[2]);
            let mut w = linalg::project_out(&c3, &u0);
            w = linalg::project_out(&w, &u1);
            linalg::normalize(&w).expect("three basis vectors cannot all project to zero")
        }
    };
    UnitaryFrame { u0, u1, u2 }
}

/// Exact 2-jet of the chart function f(z,w) = P(u0 + z u1 + w u2) at the
/// origin, via ambient differentiation and contraction with the frame.
pub fn directional_jet<T: Real>(p: &HomPoly3<T>, frame: &UnitaryFrame<T>) -> Jet2<T> {
    let aj = p.ambient_jet(&frame.u0);
    let dot = |g: &[Complex<T>; 3], v: &[Complex<T>; 3]| g[0] * v[0] + g[1] * v[1] + g[2] * v[2];
    let quad = |h: &[Complex<T>; 6], a: &[Complex<T>; 3], b: &[Complex<T>; 3]| {
        h[0] * a[0] * b[0]
            + h[1] * a[1] * b[1]
            + h[2] * a[2] * b[2]
            + h[3] * (a[0] * b[1] + a[1] * b[0])
            + h[4] * (a[0] * b[2] + a[2] * b[0])
            + h[5] * (a[1] * b[2] + a[2] * b[1])
    };
    Jet2 {
        f0: aj.value,
        fz: dot(&aj.grad, &frame.u1),
        fw: dot(&aj.grad, &frame.u2),
        fzz: quad(&aj.hess, &frame.u1, &frame.u1),
        fww: quad(&aj.hess, &frame.u2, &frame.u2),
        fzw: quad(&aj.hess, &frame.u1, &frame.u2),
    }
}

/// Restriction g(s) = P(L.u + s L.v), a univariate polynomial of degree d,
/// recovered by interpolation at the (d+1)-st roots of unity. Errors with
/// DegenerateLine when the curve passes through the line's point at infinity
/// in this parametrization (leading coefficient P(v) below tolerance).
pub fn restrict_to_line<T: Real>(p: &HomPoly3<T>, line: &ProjLine<T>) -> Result<UniPoly<T>> {
    let lead = p.evaluate(&line.v);
    if lead.norm() < T::of(DEGENERATE_LINE_TOL) * p.coeff_scale() {
        return Err(Error::DegenerateLine);
    }
    let n = p.degree() as usize + 1;
    let nodes = unit_circle_nodes::<T>(n);
    let values: Vec<Complex<T>> = nodes
        .iter()
        .map(|&s| {
            let x = [
                line.u[0] + s * line.v[0],
                line.u[1] + s * line.v[1],
                line.u[2] + s * line.v[2],
            ];
            p.evaluate(&x)
        })
        .collect();
    Ok(crate::unipoly::from_unit_circle_samples(&values))
}

#[derive(Serialize, Deserialize)]
struct PolyEntry {
    i: u16,
    j: u16,
    k: u16,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct PolySchema {
    degree: u32,
    coeffs: Vec<PolyEntry>,
}

/// Read a polynomial from the JSON schema
/// {"degree": d, "coeffs": [{"i","j","k","re","im"}, ...]}.
pub fn read_poly(path: &Path) -> Result<HomPoly3<f64>> {
    let text = std::fs::read_to_string(path)?;
    let schema: PolySchema =
        serde_json::from_str(&text).map_err(|e| Error::MalformedInput(e.to_string()))?;
    let terms = schema
        .coeffs
        .into_iter()
        .map(|t| ([t.i, t.j, t.k], Complex::new(t.re, t.im)))
        .collect();
    HomPoly3::new(schema.degree, terms)
}

/// Write a polynomial in the same JSON schema (lossless round-trip).
pub fn write_poly(p: &HomPoly3<f64>, path: &Path) -> Result<()> {
    let schema = PolySchema {
        degree: p.degree(),
        coeffs: p
            .terms()
            .map(|(e, c)| PolyEntry { i: e[0], j: e[1], k: e[2], re: c.re, im: c.im })
            .collect(),
    };
    let text = serde_json::to_string_pretty(&schema)?;
    std::fs::write(path, text)?;
    Ok(())
}
