//! `bootagg coverage`: the image-count arithmetic.

use bootagg::{
    implied_coverage, implied_coverage_value, jeffreys_interval, jeffreys_mean, required_n,
    CoverageSpec64,
};

use crate::args::CoverageArgs;
use crate::common::Echo;
use crate::error::CliError;

const TABLE_COVERAGES: [f64; 5] = [0.8, 0.9, 0.95, 0.99, 0.999];

struct Row {
    n: u64,
    implied: f64,
    exact: String,
    mean: f64,
    lower: f64,
}

fn row(n: u64, alpha: f64) -> Result<Row, CliError> {
    let spec = CoverageSpec64::new(n, alpha)?;
    Ok(Row {
        n,
        implied: implied_coverage_value(n)?,
        exact: implied_coverage(n)?.to_string(),
        mean: jeffreys_mean(n)?,
        lower: jeffreys_interval(n, spec)?.jeffreys_lower,
    })
}

pub fn run(args: &CoverageArgs) -> Result<(), CliError> {
    let mut echo = Echo::new();
    echo.put("command", "coverage");
    echo.put("alpha", args.alpha);

    let rows = if args.table {
        TABLE_COVERAGES
            .iter()
            .map(|&c| row(required_n(c)?, args.alpha))
            .collect::<Result<Vec<_>, _>>()?
    } else {
        let n = match (args.n, args.coverage) {
            (Some(n), _) => n,
            (None, Some(c)) => {
                echo.put("coverage_target", c);
                required_n(c)?
            }
            (None, None) => unreachable!("clap requires --n, --coverage or --table"),
        };
        let r = row(n, args.alpha)?;
        echo.put("n", r.n);
        echo.put("implied_coverage", format!("{:.4}", r.implied));
        echo.put("implied_coverage_exact", &r.exact);
        echo.put("jeffreys_mean", format!("{:.4}", r.mean));
        echo.put("jeffreys_lower", format!("{:.4}", r.lower));
        vec![r]
    };
    echo.print();
    println!();
    println!(
        "{:>8} {:>12} {:>14} {:>16}",
        "n", "(n-1)/(n+1)", "(n+0.5)/(n+1)", "Q_Beta(n, alpha)"
    );
    for r in rows {
        println!(
            "{:>8} {:>12.4} {:>14.4} {:>16.4}",
            r.n, r.implied, r.mean, r.lower
        );
    }
    Ok(())
}
