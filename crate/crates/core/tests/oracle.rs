use kdist::oracle::*;
use kdist::quadrature::QuadratureConfig;
use kdist::sampling::{sample_bessel, Representation};
use kdist::specfun;
use kdist::{Dist64, Distribution};

fn spec(s: &str) -> Dist64 {
    s.parse().unwrap()
}

#[test]
fn cdf_by_quadrature_examples() {
    let b = spec("bessel:sigma=1");
    let v = cdf_by_quadrature(pdf_fn(&b), 0.0, &config_for(&b)).unwrap();
    assert!((v - 0.5).abs() < 1e-8);
    let v = cdf_by_quadrature(pdf_fn(&b), 1.60, &config_for(&b)).unwrap();
    assert!((v - 0.95).abs() < 0.004);
    let l = spec("laplace:s=1");
    let v = cdf_by_quadrature(pdf_fn(&l), 2.0, &config_for(&l)).unwrap();
    assert!((v - (1.0 - (-2.0f64).exp() / 2.0)).abs() < 1e-10);
}

#[test]
fn moment_by_quadrature_examples() {
    for d in ["bessel:sigma=1", "martinmaas:s=1", "laplacemean:n=2,s=1", "normal:sigma=1"] {
        let d = spec(d);
        let m0 = moment_by_quadrature(pdf_fn(&d), 0, &config_for(&d)).unwrap();
        assert!((m0 - 1.0).abs() < 1e-8, "{d}");
    }
    let b = spec("bessel:sigma=3");
    let m2 = moment_by_quadrature(pdf_fn(&b), 2, &config_for(&b)).unwrap();
    assert!((m2 - 9.0).abs() < 1e-5);
    // the Martin–Maas density has second moment 3s²/4
    let mm = spec("martinmaas:s=2");
    let m2 = moment_by_quadrature(pdf_fn(&mm), 2, &config_for(&mm)).unwrap();
    assert!((m2 - 3.0).abs() < 1e-5, "{m2}");
}

#[test]
fn gal_mixture_matches_closed_forms() {
    let cfg = QuadratureConfig::default();
    for (sigma, tau) in [(1.0, 0.5), (1.3, 1.0), (0.8, 2.5), (2.0, 4.0)] {
        let d = Dist64::gal(sigma, tau).unwrap();
        for &y in &[0.05, 0.7, 3.0] {
            let o = gal_mixture_density(sigma, tau, y, &cfg).unwrap();
            assert!((o - d.pdf(y).unwrap()).abs() < 1e-9, "sigma={sigma} tau={tau} y={y}");
        }
    }
    // non-half-integer shapes are only available here
    let v = gal_mixture_density(1.0, 0.3, 1.0, &cfg).unwrap();
    assert!(v > 0.0 && v.is_finite());
    assert!(gal_mixture_density(1.0, 0.3, 0.0, &cfg).is_err());
}

#[test]
fn kernel_oracles() {
    let cfg = QuadratureConfig::default();
    for &x in &[1.0, 10.0] {
        let o = bessel_k_by_quadrature(0.0, x, &cfg).unwrap();
        assert!((specfun::bessel_k0(x).unwrap() / o - 1.0).abs() < 1e-10);
    }
    let o = bessel_k_by_quadrature(1.0, 1.0, &cfg).unwrap();
    assert!((specfun::bessel_k1(1.0).unwrap() / o - 1.0).abs() < 1e-10);
    let o = bessel_k_by_quadrature(3.5, 1.7, &cfg).unwrap();
    assert!((specfun::bessel_k_half(3, 1.7).unwrap() / o - 1.0).abs() < 1e-10);
    for &x in &[1.0, 10.0] {
        let a = struve_l0_by_quadrature(x, &cfg).unwrap();
        assert!((specfun::struve_l0(x).unwrap() / a - 1.0).abs() < 1e-10);
    }
    let a = struve_l_minus1_by_quadrature(1.0, &cfg).unwrap();
    assert!((specfun::struve_l_minus1(1.0).unwrap() / a - 1.0).abs() < 1e-10);
    let t = k0_tail_by_quadrature(1.0, &cfg).unwrap();
    assert!((specfun::k0_tail(1.0).unwrap() / t - 1.0).abs() < 1e-10);
    let t30 = specfun::k0_tail(30.0).unwrap();
    assert!(t30 > 0.0 && t30 < 1e-12);
    let lead = (std::f64::consts::PI / 60.0).sqrt() * (-30.0f64).exp();
    assert!((t30 / lead - 1.0).abs() < 0.03);
}

#[test]
fn monte_carlo_chf() {
    let b = sample_bessel(1.0, 1_000_000, 2024, Representation::Product).unwrap();
    let e = chf_by_monte_carlo(&b, 1.0).unwrap();
    // 1/√(1 + σ²t²) at σ = t = 1
    assert!((e.estimate - std::f64::consts::FRAC_1_SQRT_2).abs() < 3.0 * e.std_error, "{e:?}");
    assert!(e.sin_estimate.abs() < 3.0 * e.sin_std_error);
    let e2 = chf_by_monte_carlo(&b, 2.0).unwrap();
    let want = spec("bessel:sigma=1").chf(2.0).unwrap();
    assert!((e2.estimate - want).abs() < 3.0 * e2.std_error);
}

#[test]
fn refinement_changes_less_than_reported_error() {
    let d = spec("martinmaas:s=1");
    let coarse = config_for(&d);
    let fine = QuadratureConfig { rel_tol: coarse.rel_tol / 2.0, ..coarse.clone() };
    let a = cdf_by_quadrature(pdf_fn(&d), 0.8, &coarse).unwrap();
    let b = cdf_by_quadrature(pdf_fn(&d), 0.8, &fine).unwrap();
    assert!((a - b).abs() < 1e-11);
}
