//! Renormalization-constant scaling sweep.
//!
//! For each resolution `N` in the configured list this driver evaluates the
//! full constant table (tadpole `C0`, pair constants `C11` and the per-shift
//! aliasing family `C12`, their Galerkin counterparts, and the derived mass
//! shifts) and reports the scalings that identify the divergence structure:
//! `eps * C0` tends to a finite constant (linear divergence), `C11` grows
//! like `log(1/eps)` with bounded per-doubling increments, and the `C12`
//! family stays bounded. A log-log fit of `C0` against `1/eps` is attached
//! when at least three resolutions are requested.

use phi4_core::stoch::{renorm_table, QuadSpec, RenormConstants};
use phi4_core::Result;

use crate::config::StudyConfig;
use crate::output::{fmt_f, RunManifest, StudyOutput, Table};
use crate::ratefit::rate_fit;

/// Mesh of the `(2N+1)^3` lattice on the torus of side length 2.
fn eps_of(n: i64) -> f64 {
    2.0 / (2.0 * n as f64 + 1.0)
}

/// Run the sweep over `config.n_list` (deduplicated, ascending).
pub fn renorm_scaling_study(config: &StudyConfig) -> Result<StudyOutput> {
    config.validate()?;
    let mut bands = config.n_list.clone();
    bands.sort_unstable();
    bands.dedup();

    let quad = QuadSpec::default();
    let mut tables = Vec::new();
    let mut summary = Vec::new();

    let consts: Vec<RenormConstants> = bands
        .iter()
        .map(|&n| renorm_table(n, &quad))
        .collect::<Result<_>>()?;

    let mut scaling = Table::new(
        "renorm_scaling",
        "phi4.renorm.scaling.v1",
        &[
            "N",
            "eps",
            "C0",
            "eps_C0",
            "C11",
            "C11_over_log",
            "C12_max",
            "C12_min",
        ],
    );
    for c in &consts {
        let eps = eps_of(c.n);
        let log_inv = (1.0 / eps).ln();
        let c12_max = c.c12.iter().fold(f64::NEG_INFINITY, |a, &(_, v)| a.max(v));
        let c12_min = c.c12.iter().fold(f64::INFINITY, |a, &(_, v)| a.min(v));
        scaling.push(vec![
            c.n.to_string(),
            fmt_f(eps),
            fmt_f(c.c0),
            fmt_f(eps * c.c0),
            fmt_f(c.c11),
            fmt_f(c.c11 / log_inv),
            fmt_f(c12_max),
            fmt_f(c12_min),
        ]);
        summary.push(format!(
            "N={}: C0 = {:.6}, eps*C0 = {:.6}, C11 = {:.6}",
            c.n,
            c.c0,
            eps * c.c0,
            c.c11
        ));
    }
    tables.push(scaling);

    let mut columns: Vec<String> = ["N", "eps", "C0", "C0_bar", "C11", "C11_bar"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for &(s, _) in &consts[0].c12 {
        columns.push(format!("C12[{}.{}.{}]", s[0], s[1], s[2]));
    }
    columns.extend(["C1", "mass_shift", "mass_shift_galerkin"].map(String::from));
    let mut export = Table::new("constants", "phi4.constants.v1", &columns);
    for c in &consts {
        let mut row = vec![
            c.n.to_string(),
            fmt_f(eps_of(c.n)),
            fmt_f(c.c0),
            fmt_f(c.c0_bar),
            fmt_f(c.c11),
            fmt_f(c.c11_bar),
        ];
        row.extend(c.c12.iter().map(|&(_, v)| fmt_f(v)));
        row.push(fmt_f(c.c1));
        row.push(fmt_f(c.mass_shift));
        row.push(fmt_f(c.mass_shift_galerkin()));
        export.push(row);
    }
    tables.push(export);

    if consts.len() >= 2 {
        let ratios: Vec<String> = consts
            .windows(2)
            .map(|w| fmt_f((eps_of(w[1].n) * w[1].c0) / (eps_of(w[0].n) * w[0].c0)))
            .collect();
        summary.push(format!("eps*C0 consecutive ratios: {}", ratios.join(", ")));
        let incs: Vec<String> = consts
            .windows(2)
            .map(|w| fmt_f(w[1].c11 - w[0].c11))
            .collect();
        summary.push(format!("C11 increments: {}", incs.join(", ")));
    }

    if consts.len() >= 3 {
        let pts: Vec<(f64, f64)> = consts.iter().map(|c| (1.0 / eps_of(c.n), c.c0)).collect();
        let fit = rate_fit(&pts)?;
        let mut fits = Table::new(
            "renorm_fits",
            "phi4.renorm.fits.v1",
            &["quantity", "slope", "intercept", "r_squared", "slope_se"],
        );
        fits.push(vec![
            "C0_vs_inv_eps".into(),
            fmt_f(fit.slope),
            fmt_f(fit.intercept),
            fmt_f(fit.r_squared),
            fmt_f(fit.slope_se),
        ]);
        tables.push(fits);
        summary.push(format!(
            "C0 divergence rate in 1/eps: slope = {:.4} (se {:.4})",
            fit.slope, fit.slope_se
        ));
    }

    Ok(StudyOutput {
        manifest: RunManifest::new("renorm", config),
        tables,
        summary,
    })
}
