//! Subcommand execution: wire instances, schedules and rescaling specs into
//! engine runs, then write CSVs and summaries from the coordinating thread.

use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use fqa_core::engine::{self, RunConfig};
use fqa_core::{driver_hamiltonian, RescaleFamily, RescaleSpec};

use crate::args::{
    rescale_kind_name, resolve_rescale, Cli, Command, OracleArgs, RescaleKind, RunArgs, SweepArgs,
};
use crate::instance::{self, Instance};
use crate::output;

pub fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => run_command(args),
        Command::Sweep(args) => sweep_command(args),
        Command::Oracle(args) => oracle_command(args),
    }
}

fn rescale_echo(spec: &RescaleSpec) -> Vec<(String, String)> {
    let mut echo = vec![("rescale".to_string(), spec.family().to_string())];
    if spec.family() != RescaleFamily::Identity {
        echo.push(("a".to_string(), spec.contraction().to_string()));
        echo.push(("tf".to_string(), spec.final_time().to_string()));
        echo.push((
            "rescaled_horizon".to_string(),
            spec.rescaled_horizon().to_string(),
        ));
    }
    echo
}

fn build_config(instance: &Instance, dt: f64, layers: usize, rescale: RescaleSpec) -> RunConfig {
    let mut config = RunConfig::new(
        instance.problem.clone(),
        driver_hamiltonian(instance.num_qubits),
        dt,
        layers,
    )
    .with_rescale(rescale);
    if let Some(solutions) = &instance.solutions {
        config = config.with_solutions(solutions.clone());
    }
    if let Some(energy) = instance.ground_energy {
        config = config.with_ground_energy(energy);
    }
    config
}

fn report_line(csv: &std::path::Path, trajectory: &fqa_core::Trajectory) -> String {
    let mut line = format!(
        "wrote {} ({} layers, final J = {})",
        csv.display(),
        trajectory.records.len(),
        trajectory
            .final_cost()
            .map(|j| j.to_string())
            .unwrap_or_else(|| "n/a".to_string()),
    );
    if let Some(p) = trajectory.final_success_probability() {
        line.push_str(&format!(", success = {p}"));
    }
    if trajectory.failure.is_some() {
        line.push_str(" [truncated: vanishing rescaling derivative]");
    }
    line
}

fn run_command(args: RunArgs) -> Result<()> {
    args.schedule.validate()?;
    let rescale = resolve_rescale(args.rescale, args.a, args.tf)?;
    let instance = instance::build(&args.instance)?;
    let config = build_config(&instance, args.schedule.dt, args.schedule.layers, rescale);

    let started = Instant::now();
    let trajectory = engine::run(&config).context("running the feedback loop")?;
    let wall = started.elapsed().as_secs_f64();

    output::write_trajectory_csv(&args.out, &trajectory)?;
    let context = output::SummaryContext {
        command: "run",
        echo: &instance.echo,
        dt: args.schedule.dt,
        layers: args.schedule.layers,
        rescale: &rescale_echo(&config.rescale),
        ground_energy: instance.ground_energy,
        max_cut: instance.max_cut,
        wall_time_s: wall,
    };
    let entries = output::summary_entries(&context, &trajectory);
    output::write_summary(&output::summary_path(&args.out), &entries)?;
    println!("{}", report_line(&args.out, &trajectory));
    Ok(())
}

/// Cross product of the requested families and contraction parameters, each
/// with a filename label.
fn sweep_entries(args: &SweepArgs) -> Result<Vec<(String, RescaleSpec)>> {
    let mut entries = Vec::new();
    for &kind in &args.rescale {
        match kind {
            RescaleKind::Identity => {
                entries.push(("identity".to_string(), RescaleSpec::identity()));
            }
            RescaleKind::Sine | RescaleKind::Poly => {
                if args.a.is_empty() {
                    bail!(
                        "--rescale {} requires at least one --a value",
                        rescale_kind_name(kind)
                    );
                }
                for &a in &args.a {
                    let spec = resolve_rescale(kind, Some(a), args.tf)?;
                    entries.push((format!("{}_a{}", rescale_kind_name(kind), a), spec));
                }
            }
        }
    }
    Ok(entries)
}

fn sweep_command(args: SweepArgs) -> Result<()> {
    args.schedule.validate()?;
    let entries = sweep_entries(&args)?;
    let instance = instance::build(&args.instance)?;
    let configs: Vec<RunConfig> = entries
        .iter()
        .map(|(_, spec)| build_config(&instance, args.schedule.dt, args.schedule.layers, *spec))
        .collect();

    let started = Instant::now();
    let results = match args.jobs {
        None => engine::sweep(&configs),
        Some(jobs) => {
            anyhow::ensure!(jobs >= 1, "--jobs must be at least 1");
            rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .context("building the sweep thread pool")?
                .install(|| engine::sweep(&configs))
        }
    };
    let wall = started.elapsed().as_secs_f64();

    let mut failures = 0usize;
    for ((label, spec), result) in entries.iter().zip(results) {
        let csv: PathBuf = {
            let mut name = args.out.as_os_str().to_os_string();
            name.push(format!("_{label}.csv"));
            PathBuf::from(name)
        };
        match result {
            Ok(trajectory) => {
                output::write_trajectory_csv(&csv, &trajectory)?;
                let context = output::SummaryContext {
                    command: "sweep",
                    echo: &instance.echo,
                    dt: args.schedule.dt,
                    layers: args.schedule.layers,
                    rescale: &rescale_echo(spec),
                    ground_energy: instance.ground_energy,
                    max_cut: instance.max_cut,
                    wall_time_s: wall,
                };
                let entries = output::summary_entries(&context, &trajectory);
                output::write_summary(&output::summary_path(&csv), &entries)?;
                println!("{}", report_line(&csv, &trajectory));
            }
            Err(error) => {
                failures += 1;
                eprintln!("entry {label} failed: {error}");
            }
        }
    }
    if failures > 0 {
        bail!(
            "{failures} sweep entr{} failed",
            if failures == 1 { "y" } else { "ies" }
        );
    }
    Ok(())
}

fn oracle_command(args: OracleArgs) -> Result<()> {
    args.instance.validate()?;
    match args.instance.problem {
        crate::args::ProblemKind::Maxcut => {
            let instance = instance::build(&args.instance)?;
            let solutions = instance.solutions.expect("maxcut always enumerates");
            let max_cut = instance.max_cut.expect("maxcut always enumerates");
            println!("max_cut={max_cut}");
            println!("ground_energy={}", -max_cut);
            println!("solutions={}", solutions.len());
            if solutions.len() <= 64 {
                for s in &solutions {
                    let bits: String = (0..instance.num_qubits)
                        .map(|v| if (s >> v) & 1 == 1 { '1' } else { '0' })
                        .collect();
                    println!("solution={bits} index={s}");
                }
            }
        }
        crate::args::ProblemKind::Annni => {
            let instance = instance::build(&args.instance)?;
            match instance.ground_energy {
                Some(energy) => println!("ground_energy={energy}"),
                None => bail!(
                    "chain too long for dense diagonalization (max {} sites)",
                    fqa_core::oracle::MAX_EIGEN_QUBITS
                ),
            }
        }
    }
    Ok(())
}
