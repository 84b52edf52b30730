use std::path::PathBuf;
use std::process::ExitCode;

use adjtele::commands::{
    cmd_analyze, cmd_simulate, cmd_trace, correct, parse_point, parse_zone, render_correction, CorrectionProfile,
    StaircaseSelector,
};
use anyhow::Result;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "adjtele", version, about = "Simulate and analyse adjusted-teleport detection experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a simulated experiment and write trials.csv, dataset.csv, summary.json and report.txt
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; defaults to `output_dir` from the config
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Descriptives, ART ANOVA and the trait correlation table for a dataset CSV
    Analyze {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Stimulus series of one staircase from a trial log
    Trace {
        #[arg(long)]
        log: PathBuf,
        #[arg(long)]
        participant: u32,
        #[arg(long)]
        block: u8,
        /// <fwd|back>:<upper|lower>
        #[arg(long)]
        staircase: StaircaseSelector,
        /// Config the log was produced with, if its staircase settings differ from the defaults
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Push a destination backward out of a partner's proxemic zone
    Correct {
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        origin: adjtele_core::Position2,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        selected: adjtele_core::Position2,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        partner: adjtele_core::Position2,
        /// intimate, personal or social
        #[arg(long, value_parser = parse_zone)]
        zone: adjtele_core::ProxemicZone,
        /// Backward budget for every teleport length
        #[arg(long)]
        threshold: Option<f64>,
        #[arg(long, default_value_t = CorrectionProfile::default().small_threshold)]
        small_threshold: f64,
        #[arg(long, default_value_t = CorrectionProfile::default().large_threshold)]
        large_threshold: f64,
        #[arg(long, default_value_t = CorrectionProfile::default().range_cutoff)]
        range_cutoff: f64,
    },
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate { config, out } => {
            let o = cmd_simulate(&config, out.as_deref())?;
            println!("{} participants simulated, {} included", o.n_participants, o.n_included);
            for p in [&o.trials, &o.dataset, &o.summary, &o.report] {
                println!("wrote {}", p.display());
            }
        }
        Command::Analyze { dataset, json } => print!("{}", cmd_analyze(&dataset, json)?),
        Command::Trace { log, participant, block, staircase, config } => {
            print!("{}", cmd_trace(&log, participant, block, staircase, config.as_deref())?)
        }
        Command::Correct {
            origin,
            selected,
            partner,
            zone,
            threshold,
            small_threshold,
            large_threshold,
            range_cutoff,
        } => {
            let profile = match threshold {
                Some(t) => CorrectionProfile { small_threshold: t, large_threshold: t, range_cutoff },
                None => CorrectionProfile { small_threshold, large_threshold, range_cutoff },
            };
            let (c, t) = correct(origin, selected, partner, zone, &profile)?;
            print!("{}", render_correction(&c, t));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
