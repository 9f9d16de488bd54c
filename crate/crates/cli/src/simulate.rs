//! `bootagg simulate`: Monte Carlo coverage checks.

use bootagg::{
    simulate_pipeline_coverage, simulate_range_coverage, simulate_region_inference,
    PipelineScenario, PlotFrame64, RenderSpec, Rgb, ScalarDistribution, SeededRng,
};

use crate::args::{Scenario, SimulateArgs, DEFAULT_SEED};
use crate::common::Echo;
use crate::error::CliError;

fn numbers(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Config(format!("bad number '{v}' in --dist")))
        })
        .collect()
}

/// Parses `normal:MU,SIGMA`, `uniform:A,B`, `exponential:RATE` and
/// `discrete:V@P,V@P,...`.
pub fn parse_distribution(spec: &str) -> Result<ScalarDistribution, CliError> {
    let bad = || CliError::Config(format!("cannot parse --dist '{spec}'"));
    let (family, rest) = spec.split_once(':').ok_or_else(bad)?;
    let law = match family.trim() {
        "normal" => match numbers(rest)?.as_slice() {
            [mu, sigma] => ScalarDistribution::normal(*mu, *sigma)?,
            _ => return Err(bad()),
        },
        "uniform" => match numbers(rest)?.as_slice() {
            [a, b] => ScalarDistribution::uniform(*a, *b)?,
            _ => return Err(bad()),
        },
        "exponential" => match numbers(rest)?.as_slice() {
            [rate] => ScalarDistribution::exponential(*rate)?,
            _ => return Err(bad()),
        },
        "discrete" => {
            let mut values = Vec::new();
            let mut probs = Vec::new();
            for pair in rest.split(',') {
                let (v, p) = pair.split_once('@').ok_or_else(bad)?;
                values.push(v.trim().parse().map_err(|_| bad())?);
                probs.push(p.trim().parse().map_err(|_| bad())?);
            }
            ScalarDistribution::discrete(values, probs)?
        }
        _ => return Err(bad()),
    };
    Ok(law)
}

/// Prints report lines, skipping keys the parameter echo already shows.
fn print_new(lines: Vec<String>) {
    for line in lines {
        let key = line.split('=').next().unwrap_or("");
        if !matches!(key, "n" | "trials" | "alpha") {
            println!("{line}");
        }
    }
}

pub fn run(args: &SimulateArgs) -> Result<(), CliError> {
    let seed = args.seed.unwrap_or(DEFAULT_SEED);
    let dist = parse_distribution(&args.dist)?;
    let rng = SeededRng::new(seed);

    let mut echo = Echo::new();
    echo.put("command", "simulate");
    echo.put("scenario", format!("{:?}", args.scenario).to_lowercase());
    echo.put("dist", &args.dist);
    echo.put("n", args.n);
    echo.put("trials", args.trials);
    echo.put("seed", seed);
    echo.put("rng", SeededRng::ALGORITHM);

    match args.scenario {
        Scenario::Range => {
            echo.print();
            let report = simulate_range_coverage(&dist, args.n, args.trials, &rng)?;
            print_new(report.key_values(""));
            println!();
            println!("{report}");
        }
        Scenario::Pipeline => {
            let xlim = match args.xlim {
                Some(l) => (l.0, l.1),
                None => {
                    let half = 6.0 * dist.std_dev() / (args.rows.max(1) as f64).sqrt();
                    (dist.mean() - half, dist.mean() + half)
                }
            };
            let frame = PlotFrame64::new(
                xlim,
                (-1.0, 1.0),
                args.size.width,
                args.size.height,
                Rgb::WHITE,
            )?;
            echo.put("rows", args.rows);
            echo.put("size", args.size);
            echo.put("xlim", format!("{},{}", xlim.0, xlim.1));
            echo.put("mark_size", args.mark_size);
            echo.print();
            let scenario = PipelineScenario {
                generator: dist,
                dataset_rows: args.rows,
                n: args.n,
                trials: args.trials,
                frame,
                spec: RenderSpec::point_estimate("value").with_mark_size(args.mark_size),
            };
            let report = simulate_pipeline_coverage(&scenario, &rng)?;
            for line in report.pixel.key_values("") {
                println!("{line}");
            }
            for line in report.statistic.key_values("statistic_") {
                println!("{line}");
            }
            println!();
            println!("pixel:\n{}", report.pixel);
            println!("statistic:\n{}", report.statistic);
        }
        Scenario::Region => {
            let threshold = match args.threshold {
                Some(t) => t,
                None => dist.quantile(args.threshold_quantile)?,
            };
            echo.put("alpha", args.alpha);
            echo.print();
            let report =
                simulate_region_inference(&dist, args.n, threshold, args.alpha, args.trials, &rng)?;
            print_new(report.key_values());
        }
    }
    Ok(())
}
