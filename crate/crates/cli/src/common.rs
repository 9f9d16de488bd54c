//! Pieces shared by the subcommands.

use std::fmt::Display;
use std::path::Path;

use bootagg::{RasterImage, TieBreak, TransformParams64};

use crate::args::{TieBreakMode, TransformArgs};
use crate::error::CliError;

/// Ordered `key=value` lines.
#[derive(Debug, Default)]
pub struct Echo(Vec<(String, String)>);

impl Echo {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn put(&mut self, key: &str, value: impl Display) {
        self.0.push((key.to_string(), value.to_string()));
    }

    pub fn print(&self) {
        for (k, v) in &self.0 {
            println!("{k}={v}");
        }
    }
}

pub fn transform_params(t: &TransformArgs, seed: u64) -> Result<TransformParams64, CliError> {
    let tie = match t.tie_break {
        TieBreakMode::Smallest => TieBreak::SmallestValue,
        TieBreakMode::Seeded => TieBreak::Seeded(t.tie_seed.unwrap_or(seed)),
    };
    if t.memory_cap == Some(0) {
        return Err(CliError::Config("--memory-cap must be positive".into()));
    }
    Ok(TransformParams64::new(t.k, t.tau)?
        .with_enabled(!t.no_transform)
        .with_tie_break(tie))
}

pub fn echo_transform(echo: &mut Echo, params: &TransformParams64, memory_cap: Option<u64>) {
    echo.put("transform", if params.enabled() { "on" } else { "off" });
    echo.put("k", params.k());
    echo.put("tau", params.tau());
    match params.tie_break() {
        TieBreak::SmallestValue => echo.put("tie_break", "smallest"),
        TieBreak::Seeded(s) => echo.put("tie_break", format!("seeded:{s}")),
    }
    match memory_cap {
        Some(cap) => echo.put("memory_cap", cap),
        None => echo.put("memory_cap", "none"),
    }
}

pub fn write_png(path: &Path, img: &RasterImage) -> Result<(), CliError> {
    let bytes = img.encode_png()?;
    std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

/// File name of stack image `index` out of `n`, zero-padded so that
/// lexicographic order is numeric order.
pub fn stack_file_name(index: usize, n: usize) -> String {
    let width = n.saturating_sub(1).to_string().len().max(4);
    format!("{index:0width$}.png")
}
