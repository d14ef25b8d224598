use rayon::prelude::*;

use super::config::{
    ConfigError, ExperimentConfig, Kind, DEFAULT_BUDGET, DEFAULT_SAMPLES, DEFAULT_TRIALS,
};
use super::table::{Cell, ResultTable};
use super::CliError;
use crate::invariants::{run_all, InvariantSettings};
use crate::multiindex::basis_size;
use crate::polynomials::{
    basis_constant_estimate, estimate_p0, exp_functional_taylor, ordered_terms, tail_seminorms,
    EstimatorSettings,
};
use crate::rng::derive_seed;
use crate::sequence_spaces::{epsilon_net, sample_point};

/// Invariant suites default to fewer instances than the net sampler.
pub const DEFAULT_INVARIANT_SAMPLES: usize = 200;

fn check_kind(config: &ExperimentConfig, kind: Kind) -> Result<(), ConfigError> {
    match config.kind {
        Some(k) if k != kind => Err(ConfigError::new(
            "kind",
            format!("config is for `{}`, not `{}`", k.name(), kind.name()),
        )),
        _ => Ok(()),
    }
}

fn settings(config: &ExperimentConfig) -> Result<EstimatorSettings, ConfigError> {
    Ok(EstimatorSettings {
        trials: ExperimentConfig::positive(config.trials, "trials", Some(DEFAULT_TRIALS))?,
        budget: ExperimentConfig::positive(config.budget, "budget", Some(DEFAULT_BUDGET))?,
        seed: config.require_seed()?,
    })
}

/// Tail seminorms `p_λ(f - S_N f)` of a truncated `exp(Σ φ_i z_i)` for every
/// `N`, all measured on one cloud.
pub fn cmd_converge(config: &ExperimentConfig) -> Result<ResultTable, CliError> {
    check_kind(config, Kind::Converge)?;
    let spec = config.require_space()?;
    let seed = config.require_seed()?;
    let budget = ExperimentConfig::positive(config.budget, "budget", Some(DEFAULT_BUDGET))?;
    let degree = config
        .truncation_degree
        .ok_or_else(|| ConfigError::new("truncation_degree", "missing"))?;
    let phi = config
        .phi
        .as_ref()
        .ok_or_else(|| ConfigError::new("phi", "missing"))?;
    if phi.is_empty() {
        return Err(ConfigError::new("phi", "needs at least one coefficient").into());
    }
    let mut values = Vec::with_capacity(phi.len());
    for (i, c) in phi.iter().enumerate() {
        let v = c.value();
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(ConfigError::new(format!("phi[{i}]"), "must be finite").into());
        }
        values.push(v);
    }

    let f = exp_functional_taylor(&values, degree);
    let degrees: Vec<u32> = ordered_terms(&f).iter().map(|t| t.1).collect();
    let tails = tail_seminorms(&f, spec, budget, seed);

    let mut table = ResultTable::new(
        "converge",
        config,
        &["n_terms", "last_degree", "tail_seminorm"],
    );
    for (n, tail) in tails.iter().enumerate() {
        let last = if n == 0 {
            Cell::Empty
        } else {
            Cell::from(degrees[n - 1])
        };
        table.push(vec![Cell::from(n), last, Cell::from(*tail)]);
    }
    Ok(table)
}

/// `ĉ_n`, its `n`-th root and the envelope `1 + 2·p0` for each degree.
pub fn cmd_basis_constant(config: &ExperimentConfig) -> Result<ResultTable, CliError> {
    check_kind(config, Kind::BasisConstant)?;
    let spec = config.require_space()?;
    let settings = settings(config)?;
    let k = ExperimentConfig::positive(config.k, "k", None)?;
    let degrees = match (config.n_max, config.n) {
        (Some(0), _) => return Err(ConfigError::new("n_max", "must be at least 1").into()),
        (Some(top), _) => 1..=top,
        (None, Some(0)) => return Err(ConfigError::new("n", "must be at least 1").into()),
        (None, Some(n)) => n..=n,
        (None, None) => {
            return Err(ConfigError::new("n_max", "missing (or give a single `n`)").into())
        }
    };

    let mut table = ResultTable::new(
        "basis-constant",
        config,
        &[
            "n",
            "c_hat",
            "c_hat_root",
            "p0_estimate",
            "envelope",
            "skipped_trials",
            "trials",
            "basis_size",
        ],
    );
    let mut max_root = f64::NEG_INFINITY;
    for n in degrees {
        let run = EstimatorSettings {
            seed: derive_seed(settings.seed, n as u64),
            ..settings
        };
        let report =
            basis_constant_estimate(n, k, spec, run).map_err(|e| CliError::Run(e.to_string()))?;
        max_root = max_root.max(report.root);
        table.push(vec![
            Cell::from(n),
            Cell::from(report.estimate),
            Cell::from(report.root),
            Cell::from(report.p0_estimate),
            Cell::from(report.envelope),
            Cell::from(report.skipped_trials),
            Cell::from(report.trials),
            Cell::from(report.basis_size),
        ]);
    }
    let mut summary = vec![Cell::Empty; table.columns.len()];
    summary[0] = Cell::from("max");
    summary[2] = Cell::from(max_root);
    table.push(summary);
    Ok(table)
}

pub fn cmd_p0(config: &ExperimentConfig) -> Result<ResultTable, CliError> {
    check_kind(config, Kind::P0)?;
    let spec = config.require_space()?;
    let settings = settings(config)?;
    let n = config.n.ok_or_else(|| ConfigError::new("n", "missing"))?;
    if n == 0 {
        return Err(ConfigError::new("n", "must be at least 1").into());
    }
    let k = ExperimentConfig::positive(config.k, "k", None)?;
    let est = estimate_p0(spec, n, k, settings);
    let mut table = ResultTable::new(
        "p0",
        config,
        &["n", "k", "p0_estimate", "trials", "skipped_trials"],
    );
    table.push(vec![
        Cell::from(n),
        Cell::from(k),
        Cell::from(est.value),
        Cell::from(est.trials),
        Cell::from(est.skipped_trials),
    ]);
    Ok(table)
}

/// Builds an ε-net per `eps` and measures the distance from sampled members
/// of `A_λ` to it. The same samples are used for every row.
pub fn cmd_net(config: &ExperimentConfig) -> Result<ResultTable, CliError> {
    check_kind(config, Kind::Net)?;
    let spec = config.require_space()?;
    let seed = config.require_seed()?;
    let samples = ExperimentConfig::positive(config.samples, "samples", Some(DEFAULT_SAMPLES))?;
    let eps_list = config
        .eps
        .as_ref()
        .ok_or_else(|| ConfigError::new("eps", "missing"))?;
    if eps_list.is_empty() {
        return Err(ConfigError::new("eps", "needs at least one value").into());
    }
    for (i, eps) in eps_list.iter().enumerate() {
        if !(eps.is_finite() && *eps > 0.0) {
            return Err(ConfigError::new(
                format!("eps[{i}]"),
                format!("must be positive, got {eps}"),
            )
            .into());
        }
    }

    let points: Vec<_> = (0..samples as u64)
        .into_par_iter()
        .map(|i| sample_point(spec, derive_seed(seed, i)))
        .collect();
    let mut table = ResultTable::new(
        "net",
        config,
        &[
            "eps",
            "net_size",
            "truncation",
            "max_distance",
            "covered_fraction",
        ],
    );
    for &eps in eps_list {
        let net = epsilon_net(spec, eps).map_err(|e| CliError::Run(e.to_string()))?;
        let distances: Vec<f64> = points.par_iter().map(|z| net.nearest(spec, z).1).collect();
        let max_distance = distances.iter().copied().fold(0.0, f64::max);
        let covered = distances.iter().filter(|d| **d <= eps).count();
        table.push(vec![
            Cell::from(eps),
            Cell::from(net.len()),
            Cell::from(net.truncation()),
            Cell::from(max_distance),
            Cell::from(covered as f64 / samples as f64),
        ]);
    }
    Ok(table)
}

/// Returns the table and whether every suite passed.
pub fn cmd_invariants(config: &ExperimentConfig) -> Result<(ResultTable, bool), CliError> {
    check_kind(config, Kind::Invariants)?;
    let settings = InvariantSettings {
        seed: config.require_seed()?,
        samples: ExperimentConfig::positive(
            config.samples,
            "samples",
            Some(DEFAULT_INVARIANT_SAMPLES),
        )?,
        perturb: config.perturb.unwrap_or(false),
    };
    let rows = run_all(&settings);
    let all_passed = rows.iter().all(|r| r.passed);
    let mut table = ResultTable::new(
        "invariants",
        config,
        &["module", "invariant", "passed", "residual", "tolerance"],
    );
    for r in rows {
        table.push(vec![
            Cell::from(r.module),
            Cell::from(r.name),
            Cell::from(r.passed),
            Cell::from(r.residual),
            Cell::from(r.tolerance),
        ]);
    }
    Ok((table, all_passed))
}

/// Refuses enumerations that would not fit in memory-sized output.
pub const ENUMERATE_LIMIT: u128 = 50_000_000;

pub fn check_enumeration(degree: u32, max_length: usize) -> Result<u128, ConfigError> {
    if degree == 0 {
        return Err(ConfigError::new("n", "degree must be at least 1"));
    }
    if max_length == 0 {
        return Err(ConfigError::new("k", "max length must be at least 1"));
    }
    let size = basis_size(degree, max_length);
    if size > ENUMERATE_LIMIT {
        return Err(ConfigError::new(
            "k",
            format!("{size} monomials exceed the limit of {ENUMERATE_LIMIT}"),
        ));
    }
    Ok(size)
}
