use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use ftfilter::circuit::{emit_naive_verification, emit_preparation, verification_network, Circuit};
use ftfilter::codes::{builtin, load_code, CodeSpec, LoadOptions};
use ftfilter::cosets::check_ft_condition;
use ftfilter::gf2::to_standard_form;
use ftfilter::paulisim::{
    exhaustive_scan, fit_scaling, monte_carlo, Channel, NoiseModel, ScalingPoint, ScanOptions,
};
use ftfilter::report::{self, Record, Report};
use ftfilter::schedule::schedule;
use ftfilter::Exec;

use crate::args::{
    ChannelArg, Cli, CodeArgs, Command, ExecArgs, Format, NetworkArgs, NoiseClass, OutputArgs, Rule,
};

/// Successful runs either pass or report a violation.
pub enum Outcome {
    Pass,
    Violation,
}

impl Outcome {
    pub fn code(&self) -> u8 {
        match self {
            Outcome::Pass => 0,
            Outcome::Violation => 2,
        }
    }
}

pub fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Analyze {
            code,
            naive,
            output,
        } => analyze(&code, naive, &output),
        Command::Emit {
            code,
            t_m,
            naive,
            dir,
            output,
        } => emit(&code, t_m as usize, naive, &dir, &output),
        Command::Scan {
            code,
            network,
            kmax,
            inject,
            faults,
            rule,
            max_events,
            exec,
            output,
        } => {
            let spec = load(&code)?;
            let circuit = build_network(&spec, &network)?;
            let opts = ScanOptions {
                inject_arbitrary: inject,
                scope: faults.into(),
                exec: exec_mode(&exec),
            };
            let results = exhaustive_scan(&circuit, &spec, kmax, opts)?;
            let mut rep = Report::new("scan");
            rep.push(code_record(&spec));
            rep.push(
                network_record(&circuit, &network)
                    .field("scope", format!("{faults:?}").to_lowercase()),
            );
            rep.extend(report::scan_records(&results, max_events));
            let count: u128 = results
                .iter()
                .map(|r| match rule {
                    Rule::Total => r.violation_count,
                    Rule::Strict => r.strict_violation_count,
                })
                .sum();
            rep.push(
                Record::new("verdict")
                    .field("rule", format!("{rule:?}").to_lowercase())
                    .field("violations", count),
            );
            write_report(&rep, &output)?;
            Ok(if count == 0 {
                Outcome::Pass
            } else {
                Outcome::Violation
            })
        }
        Command::Mc {
            code,
            network,
            eps,
            trials,
            seed,
            faults,
            input,
            channel,
            disable,
            exec,
            output,
        } => {
            let spec = load(&code)?;
            let circuit = build_network(&spec, &network)?;
            let channel = match channel {
                ChannelArg::Depolarizing => Channel::Depolarizing,
                ChannelArg::BitFlip => Channel::BitFlip,
                ChannelArg::PhaseFlip => Channel::PhaseFlip,
            };
            let enabled = |c: NoiseClass| (!disable.contains(&c)).then_some(channel);
            let model = NoiseModel {
                preparation: enabled(NoiseClass::Prep),
                gate: enabled(NoiseClass::Gate),
                idle: enabled(NoiseClass::Idle),
                measurement: !disable.contains(&NoiseClass::Meas),
                ..NoiseModel::uniform(0.0)
            }
            .with_scope(faults.into())
            .with_input(input);

            let mut results = Vec::new();
            for &e in &eps {
                let m = model.clone().with_epsilon(e);
                results.push(monte_carlo(
                    &circuit,
                    &spec,
                    &m,
                    trials,
                    seed,
                    exec_mode(&exec),
                )?);
            }
            let mut rep = Report::new("mc");
            rep.push(code_record(&spec));
            rep.push(
                network_record(&circuit, &network)
                    .field("scope", format!("{faults:?}").to_lowercase())
                    .field("seed", seed),
            );
            rep.extend(report::mc_records(&results));

            // Points for every weight up to t or the largest accepted one, so
            // even a run that saw nothing reports its (wide) intervals.
            let observed = results
                .iter()
                .filter_map(|r| r.max_accepted_weight())
                .max()
                .unwrap_or(0);
            let mut points = Vec::new();
            for r in &results {
                for w in 1..=observed.max(spec.t) {
                    let mut p = ScalingPoint::new(r.epsilon, r.probability(w), w);
                    p.ci = Some(r.interval(w));
                    points.push(p);
                }
            }
            let mut records = report::scaling_records(&fit_scaling(&points));
            let distinct: BTreeSet<u64> = eps.iter().map(|e| e.to_bits()).collect();
            if distinct.len() < 2 {
                eprintln!("notice: fit skipped, it needs at least two distinct ε values");
                records.retain(|r| r.kind != "fit");
                records.push(Record::new("fit_skipped").field("reason", "single_epsilon"));
            }
            rep.extend(records);
            write_report(&rep, &output)?;
            Ok(Outcome::Pass)
        }
    }
}

fn analyze(code: &CodeArgs, naive: bool, output: &OutputArgs) -> Result<Outcome> {
    let spec = load(code)?;
    let mut rep = Report::new("analyze");
    rep.push(code_record(&spec));
    let checks = if naive {
        rep.push(Record::new("checks").field("form", "as_given"));
        spec.h.clone()
    } else {
        let sf = to_standard_form(&spec.h);
        rep.push(Record::new("checks").field("form", "standard"));
        rep.extend(report::standard_form_records(&sf));
        sf.matrix()
    };
    let ft = check_ft_condition(&checks, spec.t, Exec::Parallel)?;
    rep.extend(report::ft_records(&ft));
    write_report(&rep, output)?;
    Ok(if ft.pass {
        Outcome::Pass
    } else {
        Outcome::Violation
    })
}

fn emit(
    code: &CodeArgs,
    t_m: usize,
    naive: bool,
    dir: &Path,
    output: &OutputArgs,
) -> Result<Outcome> {
    let spec = load(code)?;
    let sf = to_standard_form(&spec.h);
    let sched = schedule(&sf.a);
    let verify = verification_network(&spec, t_m)?;
    let prep = emit_preparation(&spec)?;
    if spec.r == 0 {
        eprintln!(
            "warning: {} has no checks, the verification circuit is empty",
            spec.name
        );
    }

    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let mut files = vec![
        (format!("{}.prep.circuit", spec.name), prep.to_text()),
        (format!("{}.verify.circuit", spec.name), verify.to_text()),
        (format!("{}.schedule.txt", spec.name), sched.render()),
    ];
    if naive {
        let c = emit_naive_verification(&spec.h, t_m)?;
        files.push((format!("{}.naive.circuit", spec.name), c.to_text()));
    }

    let mut rep = Report::new("emit");
    rep.push(code_record(&spec));
    rep.push(
        Record::new("depth")
            .field("n_symbols", sched.n_symbols)
            .field("verification", verify.duration)
            .field("t_m", t_m)
            .field("preparation", prep.duration),
    );
    for (name, text) in &files {
        let path = dir.join(name);
        fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?;
        rep.push(Record::new("file").field("path", path.display()));
    }
    rep.extend(report::schedule_records("verification", &sched));
    write_report(&rep, output)?;
    if output.format == Format::Human && output.out.is_none() {
        print!(
            "\nlatin rectangle (row = verifier, column = ancilla of A):\n{}",
            sched.render()
        );
    }
    Ok(Outcome::Pass)
}

fn load(args: &CodeArgs) -> Result<CodeSpec> {
    let opts = LoadOptions {
        allow_redundant_generators: args.allow_redundant,
    };
    let mut spec = match (&args.code, &args.code_file) {
        (Some(name), _) => builtin(name)?,
        (None, Some(path)) => load_code(path, opts)?,
        (None, None) => anyhow::bail!("one of --code or --code-file is required"),
    };
    if let Some(t) = args.t {
        spec.t = t;
    }
    for w in &spec.warnings {
        eprintln!("warning: {w}");
    }
    Ok(spec)
}

fn build_network(spec: &CodeSpec, args: &NetworkArgs) -> Result<Circuit> {
    let t_m = args.t_m as usize;
    Ok(if args.naive {
        emit_naive_verification(&spec.h, t_m)?
    } else {
        verification_network(spec, t_m)?
    })
}

fn exec_mode(args: &ExecArgs) -> Exec {
    if args.sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    }
}

fn code_record(spec: &CodeSpec) -> Record {
    Record::new("code")
        .field("name", &spec.name)
        .field("n", spec.n)
        .field("r", spec.r)
        .field("k_w", spec.k_w())
        .field("t", spec.t)
}

fn network_record(c: &Circuit, args: &NetworkArgs) -> Record {
    Record::new("network")
        .field("kind", if args.naive { "naive" } else { "standard" })
        .field("verifiers", c.n_verifier)
        .field("duration", c.duration)
        .field("locations", c.locations().len())
}

fn write_report(rep: &Report, output: &OutputArgs) -> Result<()> {
    let text = match output.format {
        Format::Human => rep.to_human(),
        Format::Records => rep.to_structured(),
    };
    match &output.out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
