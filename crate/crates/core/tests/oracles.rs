use std::f64::consts::PI;

use nalgebra::DMatrix;
use psquid::model::build_hamiltonian;
use psquid::spectral::eigensystem;
use psquid::{CircuitParams, C64};

/// Coefficients `c` of `det(λI − A) = Σ c_i λ^i` by Faddeev–LeVerrier.
fn characteristic_polynomial(a: &DMatrix<C64>) -> Vec<f64> {
    let n = a.nrows();
    let mut coeffs = vec![0.0; n + 1];
    coeffs[n] = 1.0;
    let mut m = DMatrix::<C64>::zeros(n, n);
    for k in 1..=n {
        m = a * &m + DMatrix::identity(n, n) * C64::new(coeffs[n - k + 1], 0.0);
        coeffs[n - k] = -(a * &m).trace().re / k as f64;
    }
    coeffs
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn real_roots(coeffs: &[f64], lo: f64, hi: f64, scan: usize) -> Vec<f64> {
    let mut roots = Vec::new();
    let step = (hi - lo) / scan as f64;
    for i in 0..scan {
        let (mut a, mut b) = (lo + i as f64 * step, lo + (i + 1) as f64 * step);
        let (fa, fb) = (horner(coeffs, a), horner(coeffs, b));
        if fa == 0.0 {
            roots.push(a);
            continue;
        }
        if fa.signum() == fb.signum() {
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if horner(coeffs, mid).signum() == horner(coeffs, a).signum() {
                a = mid;
            } else {
                b = mid;
            }
        }
        roots.push(0.5 * (a + b));
    }
    roots
}

#[test]
fn eigenvalues_match_characteristic_polynomial_roots() {
    for (ej1, ej2, ec, ng, flux) in [
        (40.0, 120.0, 50.0, 0.2, 0.7 * PI),
        (10.0, 300.0, 80.0, 0.35, 1.2 * PI),
        (150.0, 60.0, 40.0, 0.1, 0.3 * PI),
    ] {
        let p = CircuitParams::new(ej1, ej2, 0.05, 0.05, ec, ng, 4).unwrap();
        let h = build_hamiltonian(&p, flux);
        let scale = h.matrix().iter().map(|z| z.norm()).sum::<f64>();
        let scaled = h.matrix().unscale(scale);
        let coeffs = characteristic_polynomial(&scaled);
        let roots: Vec<f64> = real_roots(&coeffs, -1.0, 1.0, 200_000)
            .into_iter()
            .map(|r| r * scale)
            .collect();
        let eig = eigensystem(&h, p.dim()).unwrap().energies;
        assert_eq!(roots.len(), eig.len(), "{roots:?} vs {eig:?}");
        for (r, e) in roots.iter().zip(&eig) {
            assert!((r - e).abs() < 1e-8 * scale, "{r} vs {e}");
        }
    }
}

#[test]
fn free_charging_spectrum_is_exact() {
    let p = CircuitParams::new(0.0, 0.0, 0.0, 0.0, 200.0, 0.3, 6).unwrap();
    let e = eigensystem(&build_hamiltonian(&p, 0.4), p.dim())
        .unwrap()
        .energies;
    let mut expected: Vec<f64> = (-6..=6)
        .map(|n| 4.0 * 200.0 * (n as f64 - 0.3).powi(2))
        .collect();
    expected.sort_by(f64::total_cmp);
    for (a, b) in e.iter().zip(&expected) {
        assert!((a - b).abs() < 1e-9 * b.max(1.0), "{a} vs {b}");
    }
}
