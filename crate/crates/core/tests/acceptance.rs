//! Acceptance gate: one test per criterion, each printing a single
//! pass/fail line (visible with `cargo test --test acceptance -- --nocapture`).

mod common;

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pointscat::geom::Dim;
use pointscat::interior::{
    box_eigenspace, multiplicity_lower_bound, vanishing_herglotz_for, verify_ite_pair, BallDomain,
};
use pointscat::multipoint::{boundary_residual, solve_charges, MultipointPotential, PointScatterer};
use pointscat::scattering::{amplitude_fplus, farfield_extract};
use pointscat::soliton1d::{
    delta_limit_error, scatter1d_numeric, transmission, transparency_energies, SampledPotential1D,
    SolitonSpectrum,
};
use pointscat::soperator::{build_quadrature, build_soperator, kernel_basis, singular_spectrum, unitarity_defect};
use pointscat::specfun::bessel_j0_y0;

fn verdict(id: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "criterion {id:02} ({name}): {} - {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {id:02} ({name}) failed: {detail}");
}

fn random_pot(d: Dim, n: usize, seed: u64) -> MultipointPotential {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let scatterers: Vec<PointScatterer> = (0..n)
            .map(|_| {
                let p: Vec<f64> = (0..d.ambient())
                    .map(|_| rng.random_range(-0.6..0.6))
                    .collect();
                PointScatterer::new(p, rng.random_range(0.5..2.0)).unwrap()
            })
            .collect();
        // keep configurations comfortably separated
        let mut ok = true;
        for i in 0..n {
            for j in i + 1..n {
                let a = scatterers[i].position();
                let b = scatterers[j].position();
                let dist2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
                ok &= dist2.sqrt() > 0.05;
            }
        }
        if ok {
            return MultipointPotential::new(d, scatterers).unwrap();
        }
    }
}

#[test]
fn criterion_01_rank_law() {
    let t0 = Instant::now();
    let mut worst = 0.0_f64;
    for d in [Dim::Two, Dim::Three] {
        let m = if d == Dim::Two { 64 } else { 288 };
        let quad = build_quadrature(d, m).unwrap();
        for n in [1usize, 2, 5] {
            let pot = random_pot(d, n, 0xacce_0100 + n as u64);
            for e in [0.5, 1.0, 4.0] {
                let s = build_soperator(&pot, e, &quad).unwrap();
                let rep = singular_spectrum(&s, n).unwrap();
                let ratio = rep.sigma[n] / rep.sigma[0];
                worst = worst.max(ratio);
                assert!(
                    ratio < 1e-8,
                    "d={d:?}, n={n}, E={e}: sigma_{}/sigma_1 = {ratio:.3e}",
                    n + 1
                );
            }
        }
    }
    let dt = t0.elapsed().as_secs_f64();
    verdict(
        1,
        "rank law",
        worst < 1e-8 && dt < 30.0,
        &format!("max sigma_(n+1)/sigma_1 = {worst:.3e}, elapsed {dt:.1} s"),
    );
}

#[test]
fn criterion_02_kernel_codimension() {
    let pot = random_pot(Dim::Two, 2, 0xacce_0200);
    let mut dims = Vec::new();
    let mut worst_res = 0.0_f64;
    for m in [64usize, 128] {
        let quad = build_quadrature(Dim::Two, m).unwrap();
        let kb = kernel_basis(&pot, 1.0, &quad).unwrap();
        dims.push(kb.basis.ncols());
        worst_res = worst_res.max(kb.residual);
        assert_eq!(kb.basis.ncols(), m - 2, "M = {m}");
        assert!(kb.residual < 1e-10, "M = {m}: residual {:.3e}", kb.residual);
    }
    verdict(
        2,
        "infinite-multiplicity kernel",
        dims == vec![62, 126] && worst_res < 1e-10,
        &format!("dimensions {dims:?} = M - n, max residual {worst_res:.3e}"),
    );
}

#[test]
fn criterion_03_farfield_consistency() {
    let mut detail = String::new();
    let mut pass = true;
    for d in [Dim::One, Dim::Two, Dim::Three] {
        // exact unit directions so the precondition is met to round-off
        let theta: Vec<f64> = match d {
            Dim::One => vec![1.0],
            Dim::Two => vec![0.6, 0.8],
            Dim::Three => vec![2.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0],
        };
        for n in [1usize, 4] {
            let pot = random_pot(d, n, 0xacce_0300 + n as u64);
            let kappa = 1.0;
            let mut k = vec![0.0; d.ambient()];
            k[0] = kappa;
            let l: Vec<f64> = theta.iter().map(|c| c * kappa).collect();
            let fplus = amplitude_fplus(&pot, &k, &l).unwrap().fplus;
            let e3 = (farfield_extract(&pot, &k, &theta, 1e3).unwrap() - fplus).norm();
            let e4 = (farfield_extract(&pot, &k, &theta, 1e4).unwrap() - fplus).norm();
            // d = 1: the far field is exact (plane-wave Green function), both
            // errors sit at round-off; otherwise first-order decay, ratio 10
            let ok = if e3 < 1e-12 && e4 < 1e-12 {
                true
            } else {
                let ratio = e3 / e4;
                (7.0..=13.0).contains(&ratio)
            };
            pass &= ok;
            detail.push_str(&format!(
                "d={} n={n}: e(1e3)={e3:.1e}, e(1e4)={e4:.1e}; ",
                d.ambient()
            ));
        }
    }
    verdict(3, "far-field consistency", pass, detail.trim_end_matches("; "));
}

#[test]
fn criterion_04_boundary_conditions() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0400);
    let mut worst = 0.0_f64;
    for i in 0..200 {
        let d = [Dim::One, Dim::Two, Dim::Three][i % 3];
        let n = 1 + i % 4;
        let pot = random_pot(d, n, 0xacce_0401 + i as u64);
        let kappa: f64 = rng.random_range(0.7..2.5);
        let mut k = vec![0.0; d.ambient()];
        let angle: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        k[0] = kappa * angle.cos();
        if d.ambient() > 1 {
            k[1] = kappa * angle.sin();
            k[0] = kappa * angle.cos();
        } else {
            k[0] = kappa;
        }
        let sol = solve_charges(&pot, &k).unwrap();
        let res = boundary_residual(&pot, &sol).unwrap();
        worst = worst.max(res);
        assert!(res < 1e-10, "config {i}: residual {res:.3e}");
    }
    verdict(
        4,
        "boundary-condition identity",
        worst < 1e-10,
        &format!("200/200 configurations, max residual {worst:.3e}"),
    );
}

#[test]
fn criterion_05_unitarity() {
    let pot2 = random_pot(Dim::Two, 2, 0xacce_0500);
    let quad2 = build_quadrature(Dim::Two, 128).unwrap();
    let s2 = build_soperator(&pot2, 1.0, &quad2).unwrap();
    let d2 = unitarity_defect(&s2).unwrap();

    let pot3 = random_pot(Dim::Three, 2, 0xacce_0501);
    let quad3 = build_quadrature(Dim::Three, 288).unwrap();
    let s3 = build_soperator(&pot3, 1.0, &quad3).unwrap();
    let d3 = unitarity_defect(&s3).unwrap();

    verdict(
        5,
        "unitarity for real alpha",
        d2 < 1e-8 && d3 < 1e-6,
        &format!("defect d=2 (M=128): {d2:.3e}; d=3 (M=288): {d3:.3e}"),
    );
}

#[test]
fn criterion_06_transparency_count() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0600);
    let mut runs = 0usize;
    let mut worst_t = 0.0_f64;
    for n in 1..=12usize {
        for _ in 0..50 {
            let kappas: Vec<f64> = (0..n)
                .map(|j| rng.random_range(0.2..2.0) + 2.5 * j as f64)
                .collect();
            let spectrum = SolitonSpectrum::centered(kappas).unwrap();
            let energies = transparency_energies(&spectrum).unwrap();
            assert_eq!(energies.len(), (n - 1) / 2, "N = {n}");
            for &e in &energies {
                let dev = (transmission(&spectrum, e.sqrt()).unwrap() - 1.0).norm();
                worst_t = worst_t.max(dev);
                assert!(dev < 1e-12, "N = {n}: |T - 1| = {dev:.3e}");
            }
            runs += 1;
        }
    }
    // near-degenerate triple
    let spectrum = SolitonSpectrum::centered(vec![1.0, 1.0 + 1e-6, 1.0 - 1e-6]).unwrap();
    let e = transparency_energies(&spectrum).unwrap();
    let triple_ok = e.len() == 1 && (e[0] - 1.0 / 3.0).abs() < 1e-5;
    verdict(
        6,
        "transparency count law",
        runs == 600 && triple_ok && worst_t < 1e-12,
        &format!(
            "600/600 spectra, max |T(k_m) - 1| = {worst_t:.3e}, triple E = {:.9}",
            e[0]
        ),
    );
}

#[test]
fn criterion_07_reflectionless_oracle() {
    // N = 2 determinant potential: |R| < 1e-4 across k in [0.1, 10]
    let spec2 = SolitonSpectrum::centered(vec![1.0, 2.0]).unwrap();
    let pot2 = SampledPotential1D::from_soliton(&spec2, 0.01).unwrap();
    let mut worst_r = 0.0_f64;
    for i in 0..25 {
        let k = 0.1 + (10.0 - 0.1) * i as f64 / 24.0;
        let (_, r) = scatter1d_numeric(&pot2, k).unwrap();
        worst_r = worst_r.max(r.norm());
        assert!(r.norm() < 1e-4, "k = {k}: |R| = {:.3e}", r.norm());
    }
    // N = 2 has no product-formula roots (count 0); the root check runs on
    // N = 3 and N = 5 spectra, which do have them
    let mut worst_t = 0.0_f64;
    for kappas in [vec![0.9, 1.7, 2.6], vec![1.0, 2.0, 3.0, 4.0, 5.0]] {
        let spectrum = SolitonSpectrum::centered(kappas).unwrap();
        let pot = SampledPotential1D::from_soliton(&spectrum, 0.004).unwrap();
        for e in transparency_energies(&spectrum).unwrap() {
            let (t, _) = scatter1d_numeric(&pot, e.sqrt()).unwrap();
            let dev = (t - 1.0).norm();
            worst_t = worst_t.max(dev);
            assert!(dev < 1e-3, "root k = {}: |T - 1| = {dev:.3e}", e.sqrt());
        }
    }
    verdict(
        7,
        "reflectionless oracle",
        worst_r < 1e-4 && worst_t < 1e-3,
        &format!("max |R| = {worst_r:.3e} (N=2), max |T(k_m) - 1| = {worst_t:.3e} (N=3,5)"),
    );
}

#[test]
fn criterion_08_ite_witnesses() {
    let pot = random_pot(Dim::Two, 3, 0xacce_0800);
    let mut pass = true;
    let mut detail = String::new();
    for e in [Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.5)] {
        for m in [8usize, 16, 32, 64] {
            let fam = vanishing_herglotz_for(&pot, e, m).unwrap();
            pass &= fam.witness_dimension() == m - 3;
            let ball = BallDomain::enclosing(Dim::Two, fam.points());
            let interior = ball.interior_samples(16).unwrap();
            let boundary = ball.boundary_samples(12).unwrap();
            let res = verify_ite_pair(&pot, &fam, &interior, &boundary).unwrap();
            pass &= res.cauchy == 0.0 && res.point < 1e-12 && res.helmholtz < 1e-4;
            if m == 64 {
                detail.push_str(&format!(
                    "E={e}: dim={}, res=(h {:.1e}, p {:.1e}, c {:.1e}); ",
                    fam.witness_dimension(),
                    res.helmholtz,
                    res.point,
                    res.cauchy
                ));
            }
        }
    }
    verdict(8, "interior transmission witnesses", pass, detail.trim_end_matches("; "));
}

#[test]
fn criterion_09_multiplicity_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0900);
    let mut trials = 0usize;
    for energy in [50u64, 325] {
        let entry = box_eigenspace(energy).unwrap();
        let m = entry.multiplicity();
        for n in [1usize, 2] {
            for _ in 0..100 {
                let pts: Vec<[f64; 2]> = (0..n)
                    .map(|_| {
                        [
                            rng.random_range(0.05..std::f64::consts::PI - 0.05),
                            rng.random_range(0.05..std::f64::consts::PI - 0.05),
                        ]
                    })
                    .collect();
                let bound = multiplicity_lower_bound(&entry, &pts).unwrap();
                assert!(bound >= m - n, "E={energy}, n={n}: bound {bound}");
                trials += 1;
            }
        }
    }
    verdict(
        9,
        "multiplicity bound",
        trials == 400,
        &format!("{trials}/400 placements satisfied bound >= m - n (E = 50, 325)"),
    );
}

#[test]
fn criterion_10_delta_limit() {
    let mut pass = true;
    let mut detail = String::new();
    for alpha in [0.5, 1.0, 2.0] {
        let e100 = delta_limit_error(alpha, 100).unwrap();
        let e200 = delta_limit_error(alpha, 200).unwrap();
        let ratio = e200 / e100;
        pass &= (0.4..=0.62).contains(&ratio);
        detail.push_str(&format!("alpha={alpha}: ratio {ratio:.3}; "));
    }
    verdict(10, "delta limit convergence", pass, detail.trim_end_matches("; "));
}

#[test]
fn criterion_11_special_functions() {
    let lo = 1e-3_f64;
    let hi = 50.0_f64;
    let mut worst = 0.0_f64;
    for i in 0..500 {
        let x = lo * (hi / lo).powf((i + 1) as f64 / 500.0);
        let (j0, y0) = bessel_j0_y0(x).unwrap();
        let (j0_ref, y0_ref) = common::oracle_j0_y0(x);
        worst = worst.max((j0 - j0_ref).abs()).max((y0 - y0_ref).abs());
        assert!(worst < 1e-10, "deviation at x = {x}");
    }
    // Wronskian J0 Y0' - J0' Y0 = 2/(pi x), derivatives by central differences
    let mut worst_w = 0.0_f64;
    for i in 0..20 {
        let x = 0.1 + (49.0 - 0.1) * i as f64 / 19.0;
        let h = 1e-6;
        let (jm, ym) = bessel_j0_y0(x - h).unwrap();
        let (jp, yp) = bessel_j0_y0(x + h).unwrap();
        let (j0, y0) = bessel_j0_y0(x).unwrap();
        let (jd, yd) = ((jp - jm) / (2.0 * h), (yp - ym) / (2.0 * h));
        let w = j0 * yd - jd * y0;
        worst_w = worst_w.max((w - 2.0 / (std::f64::consts::PI * x)).abs());
    }
    verdict(
        11,
        "special functions vs oracle",
        worst < 1e-10 && worst_w < 1e-6,
        &format!("max |J0,Y0 - oracle| = {worst:.3e} on 500-point grid, Wronskian dev {worst_w:.3e}"),
    );
}
