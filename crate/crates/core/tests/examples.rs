use std::f64::consts::SQRT_2;

use superopt::approx::scalar_aak_best;
use superopt::certify::{certify, check_c2, CertifyConfig, Verdict};
use superopt::factory::{paper_example, EXAMPLE_NAMES};
use superopt::hankel::{hankel_norm, PolySubspaceBasis};
use superopt::laurent::{eval_on_grid, sup_norm, winding_number, MatrixLaurentPoly};
use superopt::linalg::{root_of_unity, C64};

const EX3_HANKEL: f64 = 0.790569415042095;

fn r(x: f64) -> C64 {
    C64::new(x, 0.0)
}

#[test]
fn corpus_matches_expected_verdicts() {
    let cfg = CertifyConfig::default();
    for name in EXAMPLE_NAMES {
        let (phi, exp) = paper_example(name).unwrap();
        let cert = certify(&phi, &cfg).unwrap();
        let got = [
            cert.c1.verdict,
            cert.c2.verdict,
            cert.c3.verdict,
            cert.c4.verdict,
            cert.badly_approximable.verdict,
            cert.very_badly_approximable.verdict,
            cert.unique_best.verdict,
        ];
        let want = [exp.c1, exp.c2, exp.c3, exp.c4, exp.badly_approximable, exp.very_badly_approximable, exp.unique_best];
        for (i, (g, w)) in got.iter().zip(want).enumerate() {
            if let Some(w) = w {
                assert_eq!(*g, w, "{name}: check {i}");
            }
        }
        if let Some(levels) = exp.levels {
            assert_eq!(cert.profile.levels.len(), levels.len(), "{name}");
            for (a, b) in cert.profile.levels.iter().zip(&levels) {
                assert!((a - b).abs() < 1e-9, "{name}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn ex3_hankel_norm_golden() {
    let (phi, _) = paper_example("ex3").unwrap();
    let h = hankel_norm(&phi).unwrap();
    assert!((h.norm - EX3_HANKEL).abs() < 1e-12, "{}", h.norm);
    assert!((sup_norm(&phi) - 1.0).abs() < 1e-10);
    // the shifted symbol attains its sup norm
    let (shifted, _) = paper_example("ex3_shifted").unwrap();
    assert!((hankel_norm(&shifted).unwrap().norm - 1.0).abs() < 1e-10);
}

/// Rescales the conjugate-half witness so that `v₁g₁ + v₂g₂ = 1`.
fn ex2_witness() -> PolySubspaceBasis {
    let (phi, _) = paper_example("ex2").unwrap();
    let rep = check_c2(&phi, &CertifyConfig::default()).unwrap();
    assert_eq!(rep.verdict, Verdict::Fail);
    assert_eq!(rep.halves[0].verdict, Verdict::Pass);
    assert_eq!(rep.halves[1].verdict, Verdict::Fail);
    rep.halves[1].witness_basis.clone().expect("fail carries a witness")
}

#[test]
fn ex2_conjugate_half_witness() {
    let w = ex2_witness();
    let v1 = MatrixLaurentPoly::monomial(1, r(1.0 / SQRT_2));
    let v2 = MatrixLaurentPoly::monomial(0, r(1.0 / SQRT_2));
    let at0 = w.eval(0, root_of_unity(0, 64));
    let c = v1.eval(root_of_unity(0, 64))[(0, 0)] * at0[0] + v2.eval(root_of_unity(0, 64))[(0, 0)] * at0[1];
    let mut worst = 0.0f64;
    for j in 0..256 {
        let z = root_of_unity(j, 256);
        let g = w.eval(0, z) / c;
        let s = v1.eval(z)[(0, 0)] * g[0] + v2.eval(z)[(0, 0)] * g[1];
        worst = worst.max((s - 1.0).norm());
        worst = worst.max(g[0].norm()).max((g[1] - SQRT_2).norm());
    }
    assert!(worst < 1e-10, "{worst}");
}

#[test]
fn scalar_powers_of_conj_z() {
    let cfg = CertifyConfig::default();
    for k in 1..=4 {
        let phi = MatrixLaurentPoly::z_pow(-k);
        let grid = eval_on_grid(&phi, 256).unwrap();
        assert_eq!(winding_number(&phi, &grid).unwrap(), -(k as i64));
        let cert = certify(&phi, &cfg).unwrap();
        assert_eq!(cert.badly_approximable.verdict, Verdict::Pass, "k = {k}");
        assert_eq!(cert.very_badly_approximable.verdict, Verdict::Pass, "k = {k}");
    }
    for phi in [MatrixLaurentPoly::z_pow(1), MatrixLaurentPoly::monomial(0, r(0.7))] {
        let cert = certify(&phi, &cfg).unwrap();
        assert_eq!(cert.badly_approximable.verdict, Verdict::Fail);
        assert_eq!(cert.very_badly_approximable.verdict, Verdict::Fail);
    }
}

#[test]
fn golden_ratio_hankel_norm() {
    let phi = MatrixLaurentPoly::scalar(&[(-1, r(1.0)), (-2, r(1.0))]);
    let h = hankel_norm(&phi).unwrap();
    assert!((h.norm - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-10);
    let aak = scalar_aak_best(&phi).unwrap();
    assert!(aak.modulus_deviation < 1e-6);
    assert!((aak.norm - h.norm).abs() < 1e-10);
}

#[test]
fn certificate_json_is_deterministic() {
    let (phi, _) = paper_example("ex3_shifted").unwrap();
    let a = certify(&phi, &CertifyConfig::default()).unwrap().to_json(false);
    let b = certify(&phi, &CertifyConfig::default()).unwrap().to_json(false);
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["very_badly_approximable"]["verdict"], "pass");
}
