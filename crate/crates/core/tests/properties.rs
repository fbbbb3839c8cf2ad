//! Property tests of the structural invariants: root completeness with the
//! residual certificate, exact jets against finite differences, the
//! curvature upper bound, and monotonicity of the closed-form constant.

use curvestat::bipoly::{BiPoly, JetEvaluator};
use curvestat::curvature::{curvature_fs, phi_closed, sample_exact_jet, PhiParams};
use curvestat::poly::{restrict_to_line, sample_kostlan, HomPoly3, ProjLine};
use curvestat::rng::RngStream;
use curvestat::unipoly::UniPoly;
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

proptest! {
    /// Every polynomial with a solid leading coefficient yields exactly
    /// `degree` roots, each meeting the residual certificate.
    #[test]
    fn root_sets_are_complete_and_certified(
        parts in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 3..11),
    ) {
        let mut coeffs: Vec<Complex64> = parts.iter().map(|&(re, im)| c(re, im)).collect();
        coeffs.push(c(1.0, 0.25));
        let p = UniPoly::new(coeffs);
        let degree = p.degree();
        let roots = p.roots().expect("solvable polynomial");
        prop_assert_eq!(roots.len(), degree);
        for r in &roots {
            let resid = p.eval(*r).norm();
            prop_assert!(
                resid <= p.residual_bound(*r),
                "residual {} above bound {} at root {}",
                resid, p.residual_bound(*r), r
            );
        }
    }

    /// Intersection points of a random curve with a random line lie on the
    /// curve, relative to the polynomial's scale at that point.
    #[test]
    fn line_intersections_lie_on_the_curve(
        seed in 0u64..512,
        d in 2u32..=5,
        u_parts in [(-1.0f64..1.0, -1.0f64..1.0), (-1.0f64..1.0, -1.0f64..1.0), (-1.0f64..1.0, -1.0f64..1.0)],
        v_parts in [(-1.0f64..1.0, -1.0f64..1.0), (-1.0f64..1.0, -1.0f64..1.0), (-1.0f64..1.0, -1.0f64..1.0)],
    ) {
        let p: HomPoly3<f64> = sample_kostlan(d, &RngStream::root(seed).derive_stream("poly", 0));
        let u = [c(u_parts[0].0, u_parts[0].1), c(u_parts[1].0, u_parts[1].1), c(u_parts[2].0, u_parts[2].1)];
        let v = [c(v_parts[0].0, v_parts[0].1), c(v_parts[1].0, v_parts[1].1), c(v_parts[2].0, v_parts[2].1)];
        let line = match ProjLine::new(u, v) {
            Ok(line) => line,
            Err(_) => return Ok(()), // degenerate random frame, nothing to test
        };
        let g = match restrict_to_line(&p, &line) {
            Ok(g) => g,
            Err(_) => return Ok(()), // line through the parametrization's infinity
        };
        let roots = g.roots().expect("restricted polynomial is solvable");
        prop_assert_eq!(roots.len(), d as usize);
        for &s in &roots {
            let x = [u[0] + s * v[0], u[1] + s * v[1], u[2] + s * v[2]];
            let norm2: f64 = x.iter().map(|xi| xi.norm_sqr()).sum();
            let scale = p.coeff_scale() * (1.0 + norm2).powf(0.5 * d as f64) * 10.0;
            let value = p.evaluate(&x).norm();
            prop_assert!(
                value <= 1e-7 * scale,
                "off-curve intersection: |P(x)| = {} vs scale {}",
                value, scale
            );
        }
    }

    /// The precomputed 2-jet agrees with central finite differences of the
    /// chart polynomial.
    #[test]
    fn chart_jets_match_finite_differences(
        seed in 0u64..512,
        d in 2u32..=6,
        zr in -0.8f64..0.8, zi in -0.8f64..0.8,
        wr in -0.8f64..0.8, wi in -0.8f64..0.8,
    ) {
        let p: HomPoly3<f64> = sample_kostlan(d, &RngStream::root(seed).derive_stream("poly", 0));
        let chart = BiPoly::from_hom_chart(&p, 0);
        let jets = JetEvaluator::new(chart.clone());
        let (z, w) = (c(zr, zi), c(wr, wi));
        let jet = jets.jet_at(z, w);
        let scale = jets.local_scale(z, w).max(1.0);

        let h = 1e-4;
        let fd_z = (chart.eval(z + h, w) - chart.eval(z - h, w)) / (2.0 * h);
        let fd_w = (chart.eval(z, w + h) - chart.eval(z, w - h)) / (2.0 * h);
        let fd_zz = (chart.eval(z + h, w) - jet.f0 * 2.0 + chart.eval(z - h, w)) / (h * h);
        let fd_ww = (chart.eval(z, w + h) - jet.f0 * 2.0 + chart.eval(z, w - h)) / (h * h);
        let fd_zw = (chart.eval(z + h, w + h) - chart.eval(z + h, w - h)
            - chart.eval(z - h, w + h)
            + chart.eval(z - h, w - h))
            / (4.0 * h * h);

        let df = d as f64;
        prop_assert!((fd_z - jet.fz).norm() <= 1e-6 * scale * df);
        prop_assert!((fd_w - jet.fw).norm() <= 1e-6 * scale * df);
        prop_assert!((fd_zz - jet.fzz).norm() <= 1e-6 * scale * df * df);
        prop_assert!((fd_ww - jet.fww).norm() <= 1e-6 * scale * df * df);
        prop_assert!((fd_zw - jet.fzw).norm() <= 1e-6 * scale * df * df);
    }

    /// The Fubini-Study curvature of any sampled jet respects the
    /// structural upper bound 2 pi.
    #[test]
    fn curvature_never_exceeds_the_structural_bound(seed in 0u64..4096, d in 2u32..=50) {
        let jet = sample_exact_jet(d, &RngStream::root(seed).derive_stream("jet", 0));
        match curvature_fs(&jet) {
            Ok(k) => prop_assert!(k <= 2.0 * std::f64::consts::PI + 1e-9, "K = {}", k),
            Err(_) => {} // singular draw, measure zero
        }
    }

    /// The closed-form constant is a probability, increasing in the upper
    /// band edge and decreasing in the lower one.
    #[test]
    fn closed_form_is_a_monotone_probability(
        r in 0.01f64..20.0,
        ratio1 in 1.2f64..50.0,
        ratio2 in 1.2f64..50.0,
    ) {
        let (lo, hi) = if ratio1 < ratio2 { (ratio1, ratio2) } else { (ratio2, ratio1) };
        prop_assume!(lo < hi);
        let phi_narrow = phi_closed(&PhiParams::new(r, r * lo).unwrap());
        let phi_wide = phi_closed(&PhiParams::new(r, r * hi).unwrap());
        prop_assert!(phi_narrow > 0.0 && phi_wide < 1.0);
        prop_assert!(phi_narrow < phi_wide, "{} !< {}", phi_narrow, phi_wide);

        let smaller_r = phi_closed(&PhiParams::new(0.5 * r, r * lo).unwrap());
        prop_assert!(smaller_r > phi_narrow);
    }
}

/// The measure's support argument is existential: fields within C2 distance
/// 0.5 of the hyperbola reference on the working ball exist, but their
/// probability at truncation degree ~44 is far below what a desk-scale draw
/// count can witness (no hit in 2000 draws here, and a certifying estimate
/// would need orders of magnitude more). Kept ignored as a statement of the
/// gap rather than a regression.
#[test]
#[ignore]
fn bf_fields_near_the_reference_appear_at_desk_scale() {
    use curvestat::bargmann_fock::{bf_truncation_degree, c2_distance_to, f0_reference, sample_bf};
    let stream = RngStream::root(17).derive_stream("support", 0);
    let trunc = bf_truncation_degree(2.0, 1e-6).unwrap();
    let f0 = f0_reference();
    let mut hits = 0u64;
    for t in 0..2000 {
        let f = sample_bf(trunc, &stream.derive_stream("draw", t));
        if c2_distance_to(&f, &f0, 9).unwrap() < 0.5 {
            hits += 1;
        }
    }
    assert!(hits > 0, "no draw within C2 distance 0.5 of the reference in 2000 draws");
}
