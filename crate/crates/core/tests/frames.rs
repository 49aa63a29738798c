mod common;

use common::*;
use proptest::prelude::*;
use qrframe::channels::{Channel, GTwirl};
use qrframe::frames::{
    cs_pe_overlap, fiducial_dimension, fiducial_overlap, pe_overlap_squared, su2_coherent_overlap_squared,
};
use qrframe::linalg::{max_abs_diff, CMatrix};
use qrframe::{compose, FrameFamily, Group, GroupElement, Representation, C64};
use std::f64::consts::PI;

fn twirl_is_uniform(frame: FrameFamily, tol: f64) {
    let rho = frame.ket(&GroupElement::identity(frame.group())).unwrap().density();
    let out = GTwirl::auto(rho.space()).apply(&rho).unwrap();
    let d = frame.dimension();
    let expect = CMatrix::identity(d, d) / C64::from(d as f64);
    let err = max_abs_diff(out.matrix(), &expect);
    assert!(err < tol, "{frame:?}: {err:e}");
}

#[test]
fn phase_eigenstate_examples() {
    let f = FrameFamily::phase_eigenstate(1);
    let r = 0.5f64.sqrt();
    let k0 = f.ket(&GroupElement::u1(0.0)).unwrap();
    let kpi = f.ket(&GroupElement::u1(PI)).unwrap();
    assert!((k0.vector()[0] - r).norm() < 1e-15 && (k0.vector()[1] - r).norm() < 1e-15);
    assert!((kpi.vector()[0] - r).norm() < 1e-15 && (kpi.vector()[1] + r).norm() < 1e-15);
    assert!(k0.inner(&kpi).norm() < 1e-15);
    for s in [1, 3, 8] {
        let k = FrameFamily::phase_eigenstate(s).ket(&GroupElement::u1(1.234)).unwrap();
        let m = 1.0 / ((s + 1) as f64).sqrt();
        assert!(k.vector().iter().all(|z| (z.norm() - m).abs() < 1e-15));
        twirl_is_uniform(FrameFamily::phase_eigenstate(s), 1e-12);
    }
}

#[test]
fn coherent_examples() {
    let vac = FrameFamily::u1_coherent(0.0, None).unwrap().fiducial_ket();
    assert!((vac.vector()[0] - c(1.0)).norm() < 1e-15);
    let w: f64 = qrframe::frames::poisson_weights(2.0, 21).iter().sum();
    assert!(w >= 0.9999);
    assert!(FrameFamily::u1_coherent(2.0, Some(21)).is_ok());
    assert!(FrameFamily::u1_coherent(2.0, Some(8)).is_err());
    let k = FrameFamily::u1_coherent(2.0, Some(30)).unwrap().fiducial_ket();
    let mean: f64 = k.vector().iter().enumerate().map(|(n, z)| n as f64 * z.norm_sqr()).sum();
    assert!((mean - 4.0).abs() < 1e-3);
}

#[test]
fn fiducial_examples() {
    assert_eq!(fiducial_dimension(1), 10);
    for s in 0..6u32 {
        let n = 2 * s as u64 + 3;
        assert_eq!(fiducial_dimension(s) as u64, n * (n - 1) * (n - 2) / 6);
    }
    let k = FrameFamily::su2_fiducial(1).fiducial_ket();
    let v = k.vector();
    assert!((v[0].re - 0.1f64.sqrt()).abs() < 1e-15);
    // Spin-1 block starts at 1; the pairs sit on the block diagonal.
    for i in 0..3 {
        assert!((v[1 + 4 * i].re - 0.3f64.sqrt()).abs() < 1e-15);
    }
    assert!((v.norm() - 1.0).abs() < 1e-15);
    let trivial = FrameFamily::su2_fiducial(0);
    let g = GroupElement::su2_polar(1.1, 0.4, 2.0);
    assert!((trivial.fiducial_ket().inner(&trivial.ket(&g).unwrap()) - c(1.0)).norm() < 1e-15);
    for s in [1, 2] {
        twirl_is_uniform(FrameFamily::su2_fiducial(s), 1e-11);
    }
}

#[test]
fn coherent_spin_examples() {
    let f = FrameFamily::su2_coherent(2);
    let k = f.ket(&GroupElement::su2_euler(0.0, 0.0, 0.0)).unwrap();
    assert!((k.vector()[0] - c(1.0)).norm() < 1e-15);
    let flipped = f.ket(&GroupElement::su2_euler(0.0, PI, 0.0)).unwrap();
    assert!((flipped.vector()[2].norm() - 1.0).abs() < 1e-14);
    assert!(f.fiducial_ket().inner(&flipped).norm() < 1e-14);
    for twice_j in [1, 2, 4] {
        twirl_is_uniform(FrameFamily::su2_coherent(twice_j), 1e-11);
    }
}

#[test]
fn overlap_examples() {
    let pe = FrameFamily::phase_eigenstate(1);
    let o = pe.overlap_closed_form(&GroupElement::u1(0.3), &GroupElement::u1(0.3 + PI)).unwrap();
    assert!(o.norm_sqr() < 1e-15);
    assert!(pe_overlap_squared(1, PI).abs() < 1e-15);
    let fid = FrameFamily::su2_fiducial(1);
    for (theta, phi) in [(0.0, 0.0), (1.0, 2.0), (2.5, 5.0)] {
        let o = fid.overlap_from_identity(&GroupElement::su2_polar(PI, theta, phi)).unwrap();
        assert!((o - c(-0.2)).norm() < 1e-14);
    }
    assert!((fiducial_overlap(1, PI) + 0.2).abs() < 1e-15);
    let cs = FrameFamily::su2_coherent(2);
    let o = cs.overlap_from_identity(&GroupElement::su2_euler(0.0, PI / 2.0, 0.0)).unwrap();
    assert!((o - c(0.5)).norm() < 1e-14);
}

#[test]
fn fiducial_overlap_depends_only_on_angle() {
    for s in [1u32, 2, 4] {
        let fid = FrameFamily::su2_fiducial(s);
        for omega in [0.3, 1.0, 2.0, 3.0] {
            let vals: Vec<f64> = (0..12)
                .map(|i| {
                    let th = (i as f64 * 0.77) % PI;
                    let ph = (i as f64 * 1.9) % (2.0 * PI);
                    fid.fiducial_ket().inner(&fid.ket(&GroupElement::su2_polar(omega, th, ph)).unwrap()).re
                })
                .collect();
            let mean = vals.iter().sum::<f64>() / vals.len() as f64;
            let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / vals.len() as f64;
            assert!(var <= 1e-22, "s={s} ω={omega}: {var:e}");
        }
    }
}

#[test]
fn pe_concentrates_with_cutoff() {
    let mass = |s: usize| {
        let n = 20001;
        let h = 0.2 / (n - 1) as f64;
        // Simpson over |g| < 0.1 of D|⟨s;g|s;0⟩|² dg/2π.
        let mut acc = 0.0;
        for i in 0..n {
            let x = -0.1 + i as f64 * h;
            let w = if i == 0 || i == n - 1 { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * (s + 1) as f64 * pe_overlap_squared(s, x);
        }
        acc * h / 3.0 / (2.0 * PI)
    };
    let masses: Vec<f64> = [8, 16, 32, 64].iter().map(|&s| mass(s)).collect();
    assert!(masses.windows(2).all(|w| w[1] > w[0]), "{masses:?}");
}

#[test]
fn coherent_spin_gaussian_limit() {
    let j = 50.0;
    let mut worst: f64 = 0.0;
    for i in 0..=500 {
        let beta = 0.5 * i as f64 / 500.0;
        worst = worst.max((su2_coherent_overlap_squared(100, beta) - (-j * beta * beta / 2.0).exp()).abs());
    }
    assert!(worst <= 0.01, "{worst}");
}

fn assert_covariant(frame: FrameFamily, g: &GroupElement, h: &GroupElement) -> Result<(), TestCaseError> {
    let rep = Representation::new(&frame.space());
    let lhs = frame.ket(&compose(h, g).unwrap()).unwrap();
    let rhs = frame.ket(g).unwrap().rotated(&rep, h).unwrap();
    prop_assert!(phase_distance(lhs.vector(), rhs.vector()) < 1e-11);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn pe_overlap_matches_inner_product(s in 0usize..12, g in u1_element(), h in u1_element()) {
        let f = FrameFamily::phase_eigenstate(s);
        let direct = f.ket(&g).unwrap().inner(&f.ket(&h).unwrap());
        prop_assert!((f.overlap_closed_form(&g, &h).unwrap() - direct).norm() < 1e-11);
        let x = h.theta().unwrap() - g.theta().unwrap();
        prop_assert!((pe_overlap_squared(s, x) - direct.norm_sqr()).abs() < 1e-11);
    }

    #[test]
    fn cs_overlap_matches_inner_product(amp in 0.0f64..3.0, g in u1_element(), h in u1_element()) {
        let f = FrameFamily::u1_coherent(amp, None).unwrap();
        let direct = f.ket(&g).unwrap().inner(&f.ket(&h).unwrap());
        prop_assert!((f.overlap_closed_form(&g, &h).unwrap() - direct).norm() < 1e-11);
    }

    #[test]
    fn cs_pe_overlap_matches_inner_product(amp in 0.0f64..3.0, s in 1usize..10, g in u1_element(), h in u1_element()) {
        let cs = FrameFamily::u1_coherent(amp, None).unwrap();
        let FrameFamily::U1Coherent { cutoff, .. } = cs else { unreachable!() };
        let pe = FrameFamily::phase_eigenstate(s).ket(&g).unwrap();
        let cv = cs.ket(&h).unwrap();
        let direct: C64 = (0..=s.min(cutoff)).map(|k| pe.vector()[k].conj() * cv.vector()[k]).sum();
        let closed = cs_pe_overlap(s, amp, cutoff, g.theta().unwrap(), h.theta().unwrap());
        prop_assert!((closed - direct).norm() < 1e-11);
    }

    #[test]
    fn fiducial_overlap_matches_inner_product(s in 0u32..4, g in su2_element(), h in su2_element()) {
        let f = FrameFamily::su2_fiducial(s);
        let direct = f.ket(&g).unwrap().inner(&f.ket(&h).unwrap());
        prop_assert!((f.overlap_closed_form(&g, &h).unwrap() - direct).norm() < 1e-11);
    }

    #[test]
    fn coherent_spin_overlap_matches_inner_product(twice_j in 0u32..9, g in su2_element(), h in su2_element()) {
        let f = FrameFamily::su2_coherent(twice_j);
        let direct = f.ket(&g).unwrap().inner(&f.ket(&h).unwrap());
        prop_assert!((f.overlap_closed_form(&g, &h).unwrap() - direct).norm() < 1e-11);
        let beta = compose(&qrframe::inverse(&g), &h).unwrap().euler().unwrap().beta;
        prop_assert!((su2_coherent_overlap_squared(twice_j, beta) - direct.norm_sqr()).abs() < 1e-11);
    }

    #[test]
    fn families_are_covariant(g1 in u1_element(), h1 in u1_element(), g2 in su2_element(), h2 in su2_element()) {
        assert_covariant(FrameFamily::phase_eigenstate(5), &g1, &h1)?;
        assert_covariant(FrameFamily::u1_coherent(1.5, None).unwrap(), &g1, &h1)?;
        assert_covariant(FrameFamily::su2_fiducial(2), &g2, &h2)?;
        assert_covariant(FrameFamily::su2_coherent(3), &g2, &h2)?;
    }
}

#[test]
fn groups_of_families() {
    assert_eq!(FrameFamily::phase_eigenstate(2).group(), Group::U1);
    assert_eq!(FrameFamily::su2_coherent(2).group(), Group::SU2);
}
