//! One function per subcommand: runs the experiment, collects CSV rows in
//! deterministic order, and records a verdict for every invariant exercised.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use pointscat::interior::{
    box_eigenspace, multiplicity_lower_bound, vanishing_herglotz_for, verify_ite_pair, BallDomain,
};
use pointscat::multipoint::{boundary_residual, solve_charges};
use pointscat::scattering::{amplitude_f_with, normalization_c};
use pointscat::soliton1d::{
    delta_limit_error, transmission, transparency_energies, SolitonSpectrum,
};
use pointscat::soperator::{build_quadrature, build_soperator, kernel_basis, singular_spectrum, unitarity_defect};

use crate::config::{ConfigError, ConfigFile};
use crate::report::{fmt_f64, RunReport, Verdict};

fn cfg_err(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

pub fn run_amplitude(cfg: &ConfigFile) -> Result<RunReport, ConfigError> {
    let pot = cfg.require_potential()?;
    let d = pot.dim();
    let energies = cfg.require_energies()?;
    let m = cfg.quadrature_size(d);
    let quad = build_quadrature(d, m).map_err(|e| cfg_err(format!("[scattering].quadrature: {e}")))?;
    let incident = cfg.incident_direction(d)?;
    let tol = &cfg.tolerances;

    let per_energy: Vec<(Vec<String>, Vec<Verdict>)> = energies
        .par_iter()
        .map(|&e| {
            let kappa = e.sqrt();
            let k: Vec<f64> = incident.iter().map(|c| c * kappa).collect();
            let mut rows = Vec::new();
            let mut verdicts = Vec::new();
            match solve_charges(&pot, &k) {
                Ok(sol) => {
                    let c = normalization_c(d, kappa).expect("kappa > 0");
                    for i in 0..quad.len() {
                        let l: Vec<f64> = quad.node_dir(i).iter().map(|t| t * kappa).collect();
                        let f = amplitude_f_with(&pot, &sol, &l).expect("on-shell by construction");
                        let fplus = c * f;
                        let mut row = fmt_f64(e);
                        for t in quad.node_dir(i) {
                            row.push(',');
                            row.push_str(&fmt_f64(*t));
                        }
                        for value in [f.re, f.im, fplus.re, fplus.im] {
                            row.push(',');
                            row.push_str(&fmt_f64(value));
                        }
                        rows.push(row);
                    }
                    let res = boundary_residual(&pot, &sol).expect("solution just computed");
                    verdicts.push(Verdict::bound(format!("boundary[E={e}]"), res, tol.boundary));
                }
                Err(err) => {
                    verdicts.push(Verdict::failure(
                        format!("charges_solvable[E={e}]"),
                        err.to_string(),
                    ));
                }
            }
            (rows, verdicts)
        })
        .collect();

    let mut header = String::from("energy");
    for i in 1..=d.ambient() {
        header.push_str(&format!(",theta_{i}"));
    }
    header.push_str(",Re(f),Im(f),Re(f_plus),Im(f_plus)");
    let mut report = RunReport { header, rows: Vec::new(), verdicts: Vec::new() };
    for (rows, verdicts) in per_energy {
        report.rows.extend(rows);
        report.verdicts.extend(verdicts);
    }
    Ok(report)
}

pub fn run_soperator(cfg: &ConfigFile) -> Result<RunReport, ConfigError> {
    let pot = cfg.require_potential()?;
    let d = pot.dim();
    let n = pot.len();
    let energies = cfg.require_energies()?;
    let m = cfg.quadrature_size(d);
    let quad = build_quadrature(d, m).map_err(|e| cfg_err(format!("[scattering].quadrature: {e}")))?;
    if quad.len() <= n {
        return Err(cfg_err(format!(
            "[scattering].quadrature: need more nodes than scatterers ({} <= {n})",
            quad.len()
        )));
    }
    let tol = &cfg.tolerances;

    let per_energy: Vec<(Vec<String>, Vec<Verdict>)> = energies
        .par_iter()
        .map(|&e| {
            let mut rows = Vec::new();
            let mut verdicts = Vec::new();
            match build_soperator(&pot, e, &quad) {
                Ok(s) => {
                    let rep = singular_spectrum(&s, n).expect("square matrix");
                    for (i, sigma) in rep.sigma.iter().enumerate() {
                        rows.push(format!("{},{},{}", fmt_f64(e), i + 1, fmt_f64(*sigma)));
                    }
                    let ratio = if rep.sigma[0] > 0.0 { rep.sigma[n] / rep.sigma[0] } else { 0.0 };
                    verdicts.push(Verdict::bound(format!("rank_law[E={e}]"), ratio, tol.rank_rel));
                    if !pot.has_experimental() {
                        let defect = unitarity_defect(&s).expect("square matrix");
                        verdicts.push(Verdict::bound(
                            format!("unitarity[E={e}]"),
                            defect,
                            tol.unitarity,
                        ));
                    }
                }
                Err(err) => {
                    verdicts.push(Verdict::failure(
                        format!("charges_solvable[E={e}]"),
                        err.to_string(),
                    ));
                }
            }
            (rows, verdicts)
        })
        .collect();

    let mut report = RunReport {
        header: "energy,index,sigma".into(),
        rows: Vec::new(),
        verdicts: Vec::new(),
    };
    for (rows, verdicts) in per_energy {
        report.rows.extend(rows);
        report.verdicts.extend(verdicts);
    }
    Ok(report)
}

pub fn run_kernel(cfg: &ConfigFile) -> Result<RunReport, ConfigError> {
    let pot = cfg.require_potential()?;
    let d = pot.dim();
    let energies = cfg.require_energies()?;
    let m = cfg.quadrature_size(d);
    let quad = build_quadrature(d, m).map_err(|e| cfg_err(format!("[scattering].quadrature: {e}")))?;
    if quad.len() <= pot.len() {
        return Err(cfg_err(format!(
            "[scattering].quadrature: need more nodes than scatterers ({} <= {})",
            quad.len(),
            pot.len()
        )));
    }
    let tol = &cfg.tolerances;

    let per_energy: Vec<(Vec<String>, Vec<Verdict>)> = energies
        .par_iter()
        .map(|&e| {
            let mut rows = Vec::new();
            let mut verdicts = Vec::new();
            match kernel_basis(&pot, e, &quad) {
                Ok(kb) => {
                    let dim = kb.basis.ncols();
                    rows.push(format!(
                        "{},{},{},{},{}",
                        fmt_f64(e),
                        quad.len(),
                        kb.rank_q,
                        dim,
                        fmt_f64(kb.residual)
                    ));
                    verdicts.push(Verdict::exact_count(
                        format!("kernel_dimension[E={e}]"),
                        dim,
                        quad.len() - kb.rank_q,
                    ));
                    verdicts.push(Verdict::bound(
                        format!("kernel_residual[E={e}]"),
                        kb.residual,
                        tol.kernel_residual,
                    ));
                }
                Err(err) => {
                    verdicts.push(Verdict::failure(
                        format!("charges_solvable[E={e}]"),
                        err.to_string(),
                    ));
                }
            }
            (rows, verdicts)
        })
        .collect();

    let mut report = RunReport {
        header: "energy,M,rank_q,kernel_dimension,residual".into(),
        rows: Vec::new(),
        verdicts: Vec::new(),
    };
    for (rows, verdicts) in per_energy {
        report.rows.extend(rows);
        report.verdicts.extend(verdicts);
    }
    Ok(report)
}

pub fn run_soliton(cfg: &ConfigFile) -> Result<RunReport, ConfigError> {
    let section = cfg
        .soliton
        .as_ref()
        .ok_or_else(|| cfg_err("command `soliton` requires a [soliton] section"))?;
    let spectrum = match &section.normings {
        Some(normings) => SolitonSpectrum::new(section.kappas.clone(), normings.clone()),
        None => SolitonSpectrum::centered(section.kappas.clone()),
    }
    .map_err(|e| cfg_err(format!("[soliton]: {e}")))?;
    let n = spectrum.len();
    let expected = (n - 1) / 2;
    let tol = &cfg.tolerances;

    let mut report = RunReport {
        header: "index,k,energy".into(),
        rows: Vec::new(),
        verdicts: Vec::new(),
    };
    match transparency_energies(&spectrum) {
        Ok(energies) => {
            let mut worst = 0.0_f64;
            for (i, &e) in energies.iter().enumerate() {
                let k = e.sqrt();
                report
                    .rows
                    .push(format!("{},{},{}", i + 1, fmt_f64(k), fmt_f64(e)));
                let dev = (transmission(&spectrum, k).expect("k > 0") - 1.0).norm();
                worst = worst.max(dev);
            }
            report.verdicts.push(Verdict::exact_count(
                "transparency_count",
                energies.len(),
                expected,
            ));
            report
                .verdicts
                .push(Verdict::bound("transparency_product", worst, tol.transparency));
        }
        Err(err) => {
            report
                .verdicts
                .push(Verdict::failure("transparency_roots", err.to_string()));
        }
    }
    Ok(report)
}

pub fn run_delta_limit(cfg: &ConfigFile) -> Result<RunReport, ConfigError> {
    let section = cfg
        .delta_limit
        .as_ref()
        .ok_or_else(|| cfg_err("command `delta-limit` requires a [delta_limit] section"))?;
    if section.alpha == 0.0 || !section.alpha.is_finite() {
        return Err(cfg_err("[delta_limit].alpha must be finite and nonzero"));
    }
    if section.widths.iter().any(|&w| w < 10) {
        return Err(cfg_err("[delta_limit].widths: entries must be >= 10"));
    }
    let pairs: Vec<(usize, usize)> = section
        .widths
        .windows(2)
        .filter(|w| w[1] == 2 * w[0])
        .map(|w| (w[0], w[1]))
        .collect();
    if pairs.is_empty() {
        return Err(cfg_err(
            "[delta_limit].widths must contain a consecutive doubling pair (N, 2N)",
        ));
    }
    let tol = &cfg.tolerances;

    let errors: Vec<Result<f64, String>> = section
        .widths
        .par_iter()
        .map(|&w| delta_limit_error(section.alpha, w).map_err(|e| e.to_string()))
        .collect();

    let mut report = RunReport {
        header: "N,error".into(),
        rows: Vec::new(),
        verdicts: Vec::new(),
    };
    let mut by_width = std::collections::BTreeMap::new();
    for (&w, res) in section.widths.iter().zip(&errors) {
        match res {
            Ok(err) => {
                report.rows.push(format!("{w},{}", fmt_f64(*err)));
                by_width.insert(w, *err);
            }
            Err(msg) => {
                report
                    .verdicts
                    .push(Verdict::failure(format!("delta_error[N={w}]"), msg.clone()));
            }
        }
    }
    for (a, b) in pairs {
        if let (Some(&ea), Some(&eb)) = (by_width.get(&a), by_width.get(&b)) {
            let ratio = eb / ea;
            report.verdicts.push(Verdict {
                name: format!("delta_ratio[{a}->{b}]"),
                threshold: tol.delta_ratio_high,
                observed: ratio,
                pass: ratio >= tol.delta_ratio_low && ratio <= tol.delta_ratio_high,
                detail: format!("first-order band [{}, {}]", tol.delta_ratio_low, tol.delta_ratio_high),
            });
        }
    }
    Ok(report)
}

pub fn run_ite(cfg: &ConfigFile) -> Result<RunReport, ConfigError> {
    let pot = cfg.require_potential()?;
    let section = cfg
        .ite
        .as_ref()
        .ok_or_else(|| cfg_err("command `ite` requires an [ite] section"))?;
    let energy = Complex64::new(section.energy_re, section.energy_im);
    if energy == Complex64::new(0.0, 0.0) {
        return Err(cfg_err("[ite]: energy_re, energy_im must not both be zero"));
    }
    if section.directions.is_empty() {
        return Err(cfg_err("[ite].directions must be non-empty"));
    }
    for &m in &section.directions {
        if m <= pot.len() {
            return Err(cfg_err(format!(
                "[ite].directions: each count must exceed the scatterer count, got {m} <= {}",
                pot.len()
            )));
        }
    }
    let tol = &cfg.tolerances;

    let mut report = RunReport {
        header: "M,n,witness_dimension,helmholtz_res,point_res,cauchy_res".into(),
        rows: Vec::new(),
        verdicts: Vec::new(),
    };
    let mut max_point = 0.0_f64;
    let mut max_helmholtz = 0.0_f64;
    let mut max_cauchy = 0.0_f64;
    for &m in &section.directions {
        match vanishing_herglotz_for(&pot, energy, m) {
            Ok(fam) => {
                let ball = BallDomain::enclosing(pot.dim(), fam.points());
                let interior = ball.interior_samples(16).expect("d validated");
                let boundary = ball.boundary_samples(12).expect("d validated");
                let res = verify_ite_pair(&pot, &fam, &interior, &boundary)
                    .expect("family built for this potential");
                report.rows.push(format!(
                    "{m},{},{},{},{},{}",
                    pot.len(),
                    fam.witness_dimension(),
                    fmt_f64(res.helmholtz),
                    fmt_f64(res.point),
                    fmt_f64(res.cauchy)
                ));
                report.verdicts.push(Verdict::exact_count(
                    format!("witness_dimension[M={m}]"),
                    fam.witness_dimension(),
                    m - pot.len(),
                ));
                max_point = max_point.max(res.point);
                max_helmholtz = max_helmholtz.max(res.helmholtz);
                max_cauchy = max_cauchy.max(res.cauchy);
            }
            Err(err) => {
                report
                    .verdicts
                    .push(Verdict::failure(format!("witness_basis[M={m}]"), err.to_string()));
            }
        }
    }
    report
        .verdicts
        .push(Verdict::bound("ite_point", max_point, tol.ite_point));
    report
        .verdicts
        .push(Verdict::bound("ite_helmholtz", max_helmholtz, tol.ite_helmholtz));
    report.verdicts.push(Verdict {
        name: "ite_cauchy".into(),
        threshold: 0.0,
        observed: max_cauchy,
        pass: max_cauchy == 0.0,
        detail: "identically zero by construction".into(),
    });
    Ok(report)
}

pub fn run_box_bound(cfg: &ConfigFile) -> Result<RunReport, ConfigError> {
    let section = cfg
        .box_bound
        .as_ref()
        .ok_or_else(|| cfg_err("command `box-bound` requires a [box_bound] section"))?;
    let entry = box_eigenspace(section.energy).map_err(|e| cfg_err(format!("[box_bound].energy: {e}")))?;
    let m = entry.multiplicity();

    let mut placements: Vec<Vec<[f64; 2]>> = Vec::new();
    if let Some(points) = &section.points {
        let mut set = Vec::new();
        for (j, p) in points.iter().enumerate() {
            if p.len() != 2 {
                return Err(cfg_err(format!(
                    "[box_bound].points[{j}] must have exactly 2 components"
                )));
            }
            set.push([p[0], p[1]]);
        }
        placements.push(set);
    }
    if let Some(trials) = section.random_trials {
        let per = section.points_per_trial.unwrap_or(1);
        if per >= m {
            return Err(cfg_err(format!(
                "[box_bound].points_per_trial: need n < m, got {per} >= {m}"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(section.seed);
        for _ in 0..trials {
            placements.push(
                (0..per)
                    .map(|_| {
                        [
                            rng.random_range(0.05..std::f64::consts::PI - 0.05),
                            rng.random_range(0.05..std::f64::consts::PI - 0.05),
                        ]
                    })
                    .collect(),
            );
        }
    }
    if placements.is_empty() {
        placements.push(Vec::new()); // n = 0: the unperturbed eigenspace
    }

    let mut report = RunReport {
        header: "energy,m,n,bound".into(),
        rows: Vec::new(),
        verdicts: Vec::new(),
    };
    let mut min_margin = i64::MAX;
    for pts in &placements {
        let n = pts.len();
        let bound = if n == 0 {
            m
        } else {
            multiplicity_lower_bound(&entry, pts).map_err(|e| cfg_err(format!("[box_bound].points: {e}")))?
        };
        report
            .rows
            .push(format!("{},{m},{n},{bound}", section.energy));
        min_margin = min_margin.min(bound as i64 - (m as i64 - n as i64));
    }
    report.verdicts.push(Verdict {
        name: "multiplicity_bound".into(),
        threshold: 0.0,
        observed: min_margin as f64,
        pass: min_margin >= 0,
        detail: format!("min over {} placements of bound - (m - n)", placements.len()),
    });
    Ok(report)
}
