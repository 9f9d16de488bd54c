//! `bootagg run`: resample, render, aggregate.

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::time::Duration;

use bootagg::aggregation::tile_rows_for_cap;
use bootagg::pipeline::render_builtin_stack;
use bootagg::{
    aggregate_png_files, implied_coverage, implied_coverage_value, jeffreys_mean, load_dataset,
    quantize, render_stack_from, required_n, resample_stream, transform_aggregate,
    BuiltinRenderer64, DataFormat, Dataset, ImageStack, PlotFrame64, PngFileStack, PointStatistic,
    RenderKind, RenderSpec, RendererCommand, SeededRng,
};

use crate::args::{BuiltinKind, Limits, RunArgs, Statistic};
use crate::common::{echo_transform, stack_file_name, transform_params, write_png, Echo};
use crate::error::CliError;

enum Backend {
    Builtin(BuiltinRenderer64),
    External(RendererCommand),
}

impl Backend {
    /// Renders `resamples`, which start at replicate `first`.
    fn render(
        &self,
        resamples: &[Dataset],
        full: &Dataset,
        first: usize,
        size: (u32, u32),
        parallelism: usize,
    ) -> Result<ImageStack, CliError> {
        match self {
            Backend::Builtin(r) => Ok(render_builtin_stack(r, resamples, full, parallelism)?),
            Backend::External(cmd) => Ok(render_stack_from(
                cmd,
                resamples,
                full,
                size,
                parallelism,
                first,
            )?),
        }
    }
}

pub fn load(path: &Path) -> Result<Dataset, CliError> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    load_dataset(BufReader::new(file), DataFormat::Csv).map_err(|e| match CliError::from(e) {
        CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
        CliError::Io(m) => CliError::Io(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// Data range padded by 5% on each side; a single value gets ±1.
fn padded(values: &[f64], what: &str) -> Result<Limits, CliError> {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(CliError::Config(format!("no finite values in {what}")));
    }
    if lo == hi {
        return Ok(Limits(lo - 1.0, hi + 1.0));
    }
    let pad = 0.05 * (hi - lo);
    Ok(Limits(lo - pad, hi + pad))
}

fn required<'a>(value: &'a Option<String>, flag: &str, kind: &str) -> Result<&'a str, CliError> {
    value
        .as_deref()
        .ok_or_else(|| CliError::Config(format!("--builtin {kind} needs {flag}")))
}

fn builtin(
    args: &RunArgs,
    kind: BuiltinKind,
    full: &Dataset,
    echo: &mut Echo,
) -> Result<BuiltinRenderer64, CliError> {
    let (spec, xlim, ylim) = match kind {
        BuiltinKind::PointEstimate => {
            let column = required(&args.column, "--column", "point-estimate")?;
            let statistic = match args.statistic {
                Statistic::Mean => PointStatistic::Mean,
                Statistic::Median => PointStatistic::Median,
            };
            let mut spec = RenderSpec::point_estimate(column);
            spec.kind = RenderKind::PointEstimate {
                column: column.to_string(),
                statistic,
            };
            echo.put("builtin", "point-estimate");
            echo.put("column", column);
            echo.put("statistic", format!("{statistic:?}").to_lowercase());
            let xlim = match args.xlim {
                Some(l) => l,
                None => padded(&full.numeric_column(column)?, column)?,
            };
            (spec, xlim, args.ylim.unwrap_or(Limits(-1.0, 1.0)))
        }
        BuiltinKind::RegressionLine => {
            let x = required(&args.x, "--x", "regression-line")?;
            let y = required(&args.y, "--y", "regression-line")?;
            echo.put("builtin", "regression-line");
            echo.put("x", x);
            echo.put("y", y);
            echo.put("degree", args.degree);
            let xlim = match args.xlim {
                Some(l) => l,
                None => padded(&full.numeric_column(x)?, x)?,
            };
            let ylim = match args.ylim {
                Some(l) => l,
                None => padded(&full.numeric_column(y)?, y)?,
            };
            (RenderSpec::regression_line(x, y, args.degree), xlim, ylim)
        }
        BuiltinKind::BarChart => {
            let column = required(&args.column, "--column", "bar-chart")?;
            let categories: Vec<String> = match &args.categories {
                Some(c) => c.clone(),
                None => {
                    let mut seen: Vec<String> = Vec::new();
                    for v in full.text_column(column)? {
                        if !seen.iter().any(|s| s == v) {
                            seen.push(v.to_string());
                        }
                    }
                    seen
                }
            };
            let refs: Vec<&str> = categories.iter().map(String::as_str).collect();
            echo.put("builtin", "bar-chart");
            echo.put("column", column);
            echo.put("categories", categories.join(","));
            let unit = Limits(0.0, 1.0);
            (
                RenderSpec::bar_chart(column, &refs),
                args.xlim.unwrap_or(unit),
                args.ylim.unwrap_or(unit),
            )
        }
    };
    let mut spec = spec;
    if let Some(size) = args.mark_size {
        spec = spec.with_mark_size(size);
    }
    if let Some(color) = args.color {
        spec = spec.with_color(color);
    }
    spec.validate(full)?;
    let frame = PlotFrame64::new(
        (xlim.0, xlim.1),
        (ylim.0, ylim.1),
        args.size.width,
        args.size.height,
        args.background,
    )?;
    echo.put("xlim", xlim);
    echo.put("ylim", ylim);
    echo.put("mark_size", spec.mark_size);
    echo.put("color", spec.color);
    echo.put("background", args.background);
    Ok(BuiltinRenderer64::new(frame, spec))
}

fn default_stack_dir(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "bootagg".into());
    out.with_file_name(format!("{stem}_stack"))
}

pub fn run(args: &RunArgs) -> Result<(), CliError> {
    let mut echo = Echo::new();
    echo.put("command", "run");
    echo.put("data", args.data.display());
    let full = load(&args.data)?;
    echo.put("rows", full.row_count());

    let backend = match (&args.renderer_cmd, args.builtin) {
        (Some(template), None) => {
            if !(args.timeout.is_finite() && args.timeout > 0.0) {
                return Err(CliError::Config(
                    "--timeout must be a positive number of seconds".into(),
                ));
            }
            let cmd = RendererCommand::new(
                template.clone(),
                None,
                Duration::from_secs_f64(args.timeout),
            )?;
            echo.put("renderer", "external");
            echo.put("renderer_cmd", template);
            echo.put("timeout", args.timeout);
            Backend::External(cmd)
        }
        (None, Some(kind)) => {
            echo.put("renderer", "builtin");
            Backend::Builtin(builtin(args, kind, &full, &mut echo)?)
        }
        _ => unreachable!("clap enforces exactly one renderer"),
    };

    let n = match (args.n, args.coverage) {
        (Some(0), _) => return Err(CliError::Config("--n must be at least 1".into())),
        (Some(n), _) => n,
        (None, Some(c)) => required_n(c)?,
        (None, None) => unreachable!("clap enforces exactly one of --n and --coverage"),
    };
    let n_images =
        usize::try_from(n).map_err(|_| CliError::Config(format!("--n {n} is too large")))?;
    echo.put("n", n);
    if let Some(c) = args.coverage {
        echo.put("coverage_target", c);
    }
    echo.put("seed", args.seed);
    echo.put("rng", SeededRng::ALGORITHM);
    echo.put("size", args.size);

    let params = transform_params(&args.transform, args.seed)?;
    echo_transform(&mut echo, &params, args.transform.memory_cap);
    let parallelism = args
        .parallelism
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |p| p.get()));
    if parallelism == 0 {
        return Err(CliError::Config("--parallelism must be at least 1".into()));
    }
    echo.put("parallelism", parallelism);
    let stack_dir = args.keep_stack.then(|| {
        args.stack_dir
            .clone()
            .unwrap_or_else(|| default_stack_dir(&args.out))
    });
    echo.put("keep_stack", args.keep_stack);
    if let Some(dir) = &stack_dir {
        echo.put("stack_dir", dir.display());
    }
    echo.put("out", args.out.display());
    echo.print();

    if let Some(dir) = &stack_dir {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let resamples = resample_stream(&full, n_images, &SeededRng::new(args.seed), true)?;
    let size = (args.size.width, args.size.height);

    let image = match args.transform.memory_cap {
        None => {
            let stack = backend.render(&resamples, &full, 0, size, parallelism)?;
            if let Some(dir) = &stack_dir {
                for (i, img) in stack.images().iter().enumerate() {
                    write_png(&dir.join(stack_file_name(i, n_images)), img)?;
                }
            }
            quantize(&transform_aggregate(&stack, &params)?)
        }
        Some(cap) => {
            // Stage images on disk in batches that fit the cap, then
            // aggregate a band of rows at a time.
            let scratch;
            let dir = match &stack_dir {
                Some(d) => d.as_path(),
                None => {
                    scratch = tempfile::Builder::new()
                        .prefix("bootagg-stack-")
                        .tempdir()
                        .map_err(|e| {
                            CliError::Io(format!("cannot create staging directory: {e}"))
                        })?;
                    scratch.path()
                }
            };
            let per_image = size.0 as u64 * size.1 as u64 * 3;
            let batch = (cap / per_image).max(1) as usize;
            let mut paths = Vec::with_capacity(n_images);
            for start in (0..n_images).step_by(batch) {
                let end = (start + batch).min(n_images);
                let stack =
                    backend.render(&resamples[start..end], &full, start, size, parallelism)?;
                for (j, img) in stack.images().iter().enumerate() {
                    let path = dir.join(stack_file_name(start + j, n_images));
                    write_png(&path, img)?;
                    paths.push(path);
                }
            }
            let files = PngFileStack::open(paths)?;
            let tile = tile_rows_for_cap(n_images, size.0, cap);
            quantize(&aggregate_png_files(&files, &params, tile)?)
        }
    };
    write_png(&args.out, &image)?;

    let mut result = Echo::new();
    result.put(
        "implied_coverage",
        format!("{:.4}", implied_coverage_value::<f64>(n)?),
    );
    result.put("implied_coverage_exact", implied_coverage(n)?);
    result.put("jeffreys_mean", format!("{:.4}", jeffreys_mean::<f64>(n)?));
    result.print();
    Ok(())
}
