use spin_transfer::{
    bound_report, build_coupling_matrix, eigensystem, eigensystem_numeric, equality_feasible,
    fixed_time_optimize, ideal_solutions, optimize_delta, sample_curve, table1_sweep,
    verify::run_verification, ChainSpec, TransferTriad,
};

use crate::output::{Cell, Table};
use crate::{Command, Failure};

/// A table to write plus a failure to report after writing it.
pub struct Outcome {
    pub table: Table,
    pub deferred: Option<Failure>,
}

impl From<Table> for Outcome {
    fn from(table: Table) -> Self {
        Outcome {
            table,
            deferred: None,
        }
    }
}

pub fn dispatch(command: &Command) -> Result<Outcome, Failure> {
    match command {
        Command::Eigs { chain } => eigs(&ChainSpec::new(chain.n_sites, chain.delta)?),
        Command::Curve {
            chain,
            node,
            tmax,
            samples,
        } => {
            let spec = ChainSpec::new(chain.n_sites, chain.delta)?;
            let eig = eigensystem(&spec)?;
            let curve = sample_curve(&eig, node.unwrap_or(spec.n_sites()), *tmax, *samples)?;
            let mut t = Table::new(&["d1_t", "probability"]);
            for (time, p) in curve.times.iter().zip(&curve.probabilities) {
                t.push(vec![(*time).into(), (*p).into()]);
            }
            Ok(t.into())
        }
        Command::Optimize { n_sites, range } => {
            let triad = optimize_delta(*n_sites, range.delta_lo, range.delta_hi)?;
            Ok(triad_table(*n_sites, &triad).into())
        }
        Command::FixedTime {
            n_sites,
            time,
            range,
        } => {
            let triad = fixed_time_optimize(*n_sites, *time, range.delta_lo, range.delta_hi)?;
            Ok(triad_table(*n_sites, &triad).into())
        }
        Command::Table1 { delta, n_list } => table1(*delta, n_list),
        Command::Ideal4 { max_product } => {
            let mut t = Table::new(&["a", "b", "delta_bar", "d1_t_bar", "probability"]);
            for s in ideal_solutions(*max_product)? {
                t.push(vec![
                    s.a.into(),
                    s.b.into(),
                    s.delta_bar.into(),
                    s.t_bar.into(),
                    s.probability.into(),
                ]);
            }
            Ok(t.into())
        }
        Command::Bound { chain } => {
            let spec = ChainSpec::new(chain.n_sites, chain.delta)?;
            let r = bound_report(&spec)?;
            let feasible = equality_feasible(&spec)?;
            let r_values = r
                .r_values
                .iter()
                .map(|v| crate::output::format_significant(*v, crate::output::SIGNIFICANT_DIGITS))
                .collect::<Vec<_>>()
                .join(";");
            let mut t = Table::new(&[
                "n",
                "delta",
                "delta_max",
                "f1_cap",
                "f2_value",
                "f2_cap",
                "p_bound",
                "equality_feasible",
                "r_values",
            ]);
            t.push(vec![
                r.n_sites.into(),
                r.delta.into(),
                r.delta_max.into(),
                r.f1_cap.into(),
                r.f2_value.into(),
                r.f2_cap.into(),
                r.p_bound.into(),
                feasible.into(),
                r_values.into(),
            ]);
            Ok(t.into())
        }
        Command::Verify => verify(),
    }
}

fn eigs(spec: &ChainSpec) -> Result<Outcome, Failure> {
    let matrix = build_coupling_matrix(spec);
    let eig = eigensystem(spec)?;
    let numeric = eigensystem_numeric(&matrix)?;
    let mut t = Table::new(&[
        "nu",
        "lambda",
        "provenance",
        "residual",
        "numeric_lambda",
        "analytic_numeric_diff",
    ]);
    for nu in 0..eig.size() {
        let lambda = eig.eigenvalues()[nu];
        let du = matrix.apply(eig.column(nu));
        let residual = du
            .iter()
            .zip(eig.column(nu))
            .map(|(a, u)| (a - lambda * u).abs())
            .fold(0.0, f64::max);
        let other = numeric.eigenvalues()[nu];
        t.push(vec![
            (nu + 1).into(),
            lambda.into(),
            eig.provenance().as_str().into(),
            residual.into(),
            other.into(),
            (lambda - other).abs().into(),
        ]);
    }
    Ok(t.into())
}

fn triad_table(n_sites: usize, triad: &TransferTriad) -> Table {
    let mut t = Table::new(&["n", "delta_h", "d1_t_h", "p_h", "pi_over_lambda_min"]);
    t.push(vec![
        n_sites.into(),
        triad.delta_h.into(),
        triad.t_h.into(),
        triad.p_h.into(),
        triad.lambda_min_estimate.into(),
    ]);
    t
}

fn table1(delta: f64, n_list: &[usize]) -> Result<Outcome, Failure> {
    let rows = table1_sweep(delta, n_list)?;
    let mut t = Table::new(&["n", "delta", "d1_t_h1", "p_h1", "pi_over_lambda_min"]);
    let mut deferred = None;
    for row in rows {
        match &row.peak {
            Ok(p) => t.push(vec![
                row.n_sites.into(),
                row.delta.into(),
                p.t_h.into(),
                p.p_h.into(),
                p.lambda_min_estimate.into(),
            ]),
            Err(e) => {
                log::warn!("N = {}: {e}", row.n_sites);
                t.push(vec![
                    row.n_sites.into(),
                    row.delta.into(),
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                ]);
                if deferred.is_none() {
                    deferred = Some(Failure::from(e.clone()));
                }
            }
        }
    }
    Ok(Outcome { table: t, deferred })
}

fn verify() -> Result<Outcome, Failure> {
    let outcomes = run_verification(|o| {
        let status = if o.passed { "PASS" } else { "FAIL" };
        eprintln!("{status} {} ({}) [{:.2}s]", o.name, o.detail, o.seconds);
    });
    let mut t = Table::new(&["check", "status", "detail"]);
    let mut deferred = None;
    for o in &outcomes {
        t.push(vec![
            o.name.into(),
            if o.passed { "pass" } else { "fail" }.into(),
            o.detail.clone().into(),
        ]);
        if !o.passed {
            deferred = Some(Failure::Verification(format!("{}: {}", o.name, o.detail)));
        }
    }
    Ok(Outcome { table: t, deferred })
}

