//! `bootagg aggregate`: combine a directory of images.

use std::path::PathBuf;

use bootagg::aggregation::tile_rows_for_cap;
use bootagg::{aggregate_png_files, quantize, transform_aggregate, AggregationError, PngFileStack};

use crate::args::{AggregateArgs, DEFAULT_SEED};
use crate::common::{echo_transform, transform_params, write_png, Echo};
use crate::error::CliError;

fn png_files(dir: &std::path::Path) -> Result<Vec<PathBuf>, CliError> {
    let entries = std::fs::read_dir(dir).map_err(|e| CliError::io(dir, e))?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| CliError::io(dir, e))?.path();
        let is_png = path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("png"));
        if is_png && path.is_file() {
            paths.push(path);
        }
    }
    paths.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(paths)
}

pub fn run(args: &AggregateArgs) -> Result<(), CliError> {
    let params = transform_params(&args.transform, DEFAULT_SEED)?;
    let paths = png_files(&args.input)?;
    if paths.is_empty() {
        return Err(CliError::Config(format!(
            "no PNG files in {}",
            args.input.display()
        )));
    }
    let files = PngFileStack::open(paths.clone()).map_err(|e| match e {
        AggregationError::DimensionMismatch {
            index,
            expected_w,
            expected_h,
            actual_w,
            actual_h,
        } => CliError::Config(format!(
            "dimension mismatch: {} is {expected_w}x{expected_h} but {} is {actual_w}x{actual_h}",
            paths[0].display(),
            paths[index].display()
        )),
        other => other.into(),
    })?;
    let (w, h) = files.dimensions();

    let mut echo = Echo::new();
    echo.put("command", "aggregate");
    echo.put("input", args.input.display());
    echo.put("images", paths.len());
    echo.put("size", format!("{w}x{h}"));
    echo_transform(&mut echo, &params, args.transform.memory_cap);
    echo.put("out", args.out.display());
    echo.print();

    let agg = match args.transform.memory_cap {
        Some(cap) => aggregate_png_files(&files, &params, tile_rows_for_cap(paths.len(), w, cap))?,
        None => transform_aggregate(&files.load()?, &params)?,
    };
    write_png(&args.out, &quantize(&agg))
}
