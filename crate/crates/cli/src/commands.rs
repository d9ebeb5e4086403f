use trendspectra::algebra::{circulant_nodes, tau_nodes};
use trendspectra::design::{CutoffMode, DEFAULT_THRESHOLD};
use trendspectra::{
    apply, build_smoother, designed_smoother, perturbation_report, select_cutoff, symmetric_filter,
    transfer_function_value, variance_diagnostics, Algebra, CirculantOperator, SymmetricFilter,
    TauOperator,
};

use crate::config::Shared;
use crate::io::{emit, fmt_delta, fmt_g, push_row, read_series, table};
use crate::CliError;

fn symmetric(cfg: &Shared) -> Result<SymmetricFilter, CliError> {
    Ok(symmetric_filter(&cfg.poly_spec()?)?)
}

/// One row per filter: the symmetric one, then the boundary filter for each `q`.
pub fn weights(cfg: &Shared) -> Result<(), CliError> {
    let sym = symmetric(cfg)?;
    let h = sym.h() as i64;
    let policy = cfg.policy()?;
    let mut header = vec!["filter".to_string()];
    header.extend((-h..=h).map(|j| j.to_string()));
    let mut rows = vec![("symmetric".to_string(), sym.weights().to_vec())];
    if h > 0 {
        for q in 0..=sym.h() {
            let f = policy.boundary_filter(&sym, q)?.ok_or_else(|| {
                CliError::Config(format!(
                    "boundary `{}` wraps around the series and has no one-sided filter for q={q}",
                    cfg.boundary_name()
                ))
            })?;
            rows.push((format!("q={q}"), (-h..=h).map(|j| f.weight(j)).collect()));
        }
    }
    emit(cfg.output.as_deref(), &table(&header, rows))
}

/// Analytic eigenvalues with their nodes and the gain there.
pub fn spectrum(cfg: &Shared) -> Result<(), CliError> {
    let sym = symmetric(cfg)?;
    let n = cfg.length()?;
    let (nodes, values) = match cfg.algebra() {
        Algebra::Tau11 => (tau_nodes(n), TauOperator::new(&sym, n)?.eigenvalues()),
        Algebra::Circulant => (
            circulant_nodes(n),
            CirculantOperator::new(&sym, n)?.eigenvalues(),
        ),
    };
    let header = ["index", "node", "eigenvalue", "gain"].map(String::from);
    let rows = nodes.iter().zip(&values).enumerate().map(|(i, (&nu, &v))| {
        let gain = transfer_function_value(&sym, nu).abs();
        ((i + 1).to_string(), vec![nu, v, gain])
    });
    emit(cfg.output.as_deref(), &table(&header, rows))
}

/// `δ = ‖S - A‖₂` and, optionally, the per-eigenvalue containment table.
pub fn bound(cfg: &Shared) -> Result<(), CliError> {
    let sym = symmetric(cfg)?;
    let n = cfg.length()?;
    let s = build_smoother(&sym, &cfg.policy()?, n)?;
    let rep = perturbation_report(&s, cfg.algebra())?;

    let mut summary = String::new();
    push_row(
        &mut summary,
        [
            "algebra",
            "boundary",
            "scope",
            "n",
            "h",
            "delta",
            "max_distance",
            "violations",
        ],
    );
    push_row(
        &mut summary,
        [
            rep.algebra.name().to_string(),
            cfg.boundary_name().to_string(),
            match cfg.replace_scope {
                crate::config::ScopeArg::All => "all".to_string(),
                crate::config::ScopeArg::Realtime => "realtime".to_string(),
            },
            n.to_string(),
            sym.h().to_string(),
            fmt_delta(rep.delta),
            fmt_g(rep.max_distance()),
            rep.violations().to_string(),
        ],
    );
    emit(cfg.output.as_deref(), &summary)?;

    if let Some(path) = cfg.report.as_deref() {
        let mut buf = String::new();
        push_row(
            &mut buf,
            [
                "index",
                "lambda_re",
                "lambda_im",
                "nearest",
                "reference",
                "distance",
                "contained",
            ],
        );
        for (i, z) in rep.smoother_values.iter().enumerate() {
            let near = rep.nearest[i];
            let d = rep.match_distances[i];
            push_row(
                &mut buf,
                [
                    (i + 1).to_string(),
                    fmt_g(z.re),
                    fmt_g(z.im),
                    (near + 1).to_string(),
                    fmt_g(rep.reference_values[near]),
                    fmt_g(d),
                    (d <= rep.delta + trendspectra::spectral::CONTAINMENT_SLACK).to_string(),
                ],
            );
        }
        emit(Some(path), &buf)?;
    }
    Ok(())
}

/// Trend of an input series, plus the designed trend when a cutoff is given.
pub fn smooth(cfg: &Shared) -> Result<(), CliError> {
    let path = cfg
        .input
        .as_deref()
        .ok_or_else(|| CliError::Config("--input is required for smooth".into()))?;
    let series = read_series(path)?;
    let n = series.len();
    if let Some(given) = cfg.n {
        if given != n {
            return Err(CliError::Config(format!(
                "--n {given} disagrees with the {n} observations in {}",
                path.display()
            )));
        }
    }
    cfg.check_length(n)?;
    let sym = symmetric(cfg)?;
    let policy = cfg.policy()?;
    let s = build_smoother(&sym, &policy, n)?;
    let trend = apply(&s, &series)?;
    let designed = match cfg.cutoff {
        Some(c) => {
            let tau = TauOperator::new(&sym, n)?;
            let d = c.0.resolve(&tau.eigenvalues())?;
            Some(designed_smoother(&tau, &d, &policy)?.apply(&series)?)
        }
        None => None,
    };

    let mut buf = String::new();
    let mut header = vec!["t", "value", "trend"];
    if designed.is_some() {
        header.push("trend_k");
    }
    push_row(&mut buf, header);
    for t in 0..n {
        let mut row = vec![
            series.labels()[t].clone(),
            fmt_g(series.values()[t]),
            fmt_g(trend.values()[t]),
        ];
        if let Some(d) = &designed {
            row.push(fmt_g(d.values()[t]));
        }
        push_row(&mut buf, row);
    }
    emit(cfg.output.as_deref(), &buf)
}

/// Cutoff design summary on stdout; matrix rows to `--output`, per-row diagnostics to `--report`.
pub fn design(cfg: &Shared) -> Result<(), CliError> {
    let sym = symmetric(cfg)?;
    let n = cfg.length()?;
    let tau = TauOperator::new(&sym, n)?;
    let xi = tau.eigenvalues();
    let auto = select_cutoff(&xi)?;
    let mode = cfg.cutoff.map(|c| c.0).unwrap_or(CutoffMode::Auto);
    let d = mode.resolve(&xi)?;
    let ds = designed_smoother(&tau, &d, &cfg.policy()?)?;
    let diag = variance_diagnostics(&ds.base, &ds)?;

    let mut summary = String::new();
    push_row(
        &mut summary,
        [
            "n",
            "h",
            "threshold_auto",
            "k_auto",
            "k",
            "xi_k",
            "bias_discrepancy",
            "noise_factor",
            "noise_factor_k",
        ],
    );
    push_row(
        &mut summary,
        [
            n.to_string(),
            sym.h().to_string(),
            fmt_g(DEFAULT_THRESHOLD),
            auto.k().to_string(),
            d.k().to_string(),
            fmt_g(d.threshold()),
            fmt_g(trendspectra::bias_discrepancy(&xi, &d)),
            fmt_g(diag.interior_mean_original()),
            fmt_g(diag.interior_mean_designed()),
        ],
    );
    emit(None, &summary)?;

    if let Some(path) = cfg.output.as_deref() {
        let mut header = vec!["t".to_string()];
        header.extend((1..=n).map(|j| format!("c{j}")));
        let rows = ds
            .smoother
            .row_iter()
            .enumerate()
            .map(|(t, r)| ((t + 1).to_string(), r.iter().copied().collect()));
        emit(Some(path), &table(&header, rows))?;
    }
    if let Some(path) = cfg.report.as_deref() {
        let header = [
            "t",
            "variance_factor",
            "variance_factor_k",
            "interior_reduction",
        ]
        .map(String::from);
        let rows = (0..n).map(|t| {
            (
                (t + 1).to_string(),
                vec![
                    diag.original[t],
                    diag.designed[t],
                    diag.interior_reduction[t],
                ],
            )
        });
        emit(Some(path), &table(&header, rows))?;
    }
    Ok(())
}
