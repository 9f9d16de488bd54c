//! Running an external program as the chart renderer.
//!
//! The program is a black box: it receives the resample and the full dataset
//! as CSV files, writes a PNG to the path it was given, and exits 0. The only
//! thing checked about the image is its size.
//!
//! Placeholders in the command template: `{resample}`, `{full}`, `{out}`,
//! `{width}`, `{height}`, `{index}`. Paths are single-quoted for `sh`. The
//! replicate index is also exported as `BOOTAGG_REPLICATE_INDEX`.

use std::fs::{self, File};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use crate::aggregation::ImageStack;
use crate::error::ProtocolError;
use crate::raster::RasterImage;
use crate::resampling::Dataset;

pub const REPLICATE_ENV: &str = "BOOTAGG_REPLICATE_INDEX";
const STDERR_LIMIT: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct RendererCommand {
    template: String,
    working_dir: Option<PathBuf>,
    timeout: Duration,
}

impl RendererCommand {
    pub fn new(
        template: impl Into<String>,
        working_dir: Option<PathBuf>,
        timeout: Duration,
    ) -> Result<Self, ProtocolError> {
        let template = template.into();
        for required in ["{resample}", "{out}"] {
            if !template.contains(required) {
                return Err(ProtocolError::Template(format!(
                    "template must contain {}",
                    required
                )));
            }
        }
        if timeout.is_zero() {
            return Err(ProtocolError::Template("timeout must be positive".into()));
        }
        Ok(Self {
            template,
            working_dir,
            timeout,
        })
    }

    pub fn template(&self) -> &str {
        &self.template
    }

    pub fn timeout(&self) -> Duration {
        self.timeout
    }

    fn expand(
        &self,
        resample: &Path,
        full: &Path,
        out: &Path,
        index: usize,
        size: (u32, u32),
    ) -> String {
        self.template
            .replace("{resample}", &shell_quote(resample))
            .replace("{full}", &shell_quote(full))
            .replace("{out}", &shell_quote(out))
            .replace("{width}", &size.0.to_string())
            .replace("{height}", &size.1.to_string())
            .replace("{index}", &index.to_string())
    }
}

fn shell_quote(path: &Path) -> String {
    format!("'{}'", path.to_string_lossy().replace('\'', r"'\''"))
}

fn io_err(index: usize) -> impl Fn(std::io::Error) -> ProtocolError {
    move |source| ProtocolError::Io { index, source }
}

fn write_dataset(data: &Dataset, path: &Path, index: usize) -> Result<(), ProtocolError> {
    let file = File::create(path).map_err(io_err(index))?;
    data.write_csv(std::io::BufWriter::new(file))
        .map_err(|e| ProtocolError::Io {
            index,
            source: std::io::Error::other(e),
        })
}

/// Renders one replicate inside `scratch`, which must exist. The replicate's
/// own files are removed again when it succeeds.
pub fn invoke_renderer(
    cmd: &RendererCommand,
    resample: &Dataset,
    full: &Dataset,
    index: usize,
    size: (u32, u32),
    scratch: &Path,
) -> Result<RasterImage, ProtocolError> {
    let dir = scratch.join(format!("replicate_{index:05}"));
    fs::create_dir_all(&dir).map_err(io_err(index))?;
    let resample_path = dir.join("resample.csv");
    let full_path = dir.join("full.csv");
    let out_path = dir.join("out.png");
    let stderr_path = dir.join("stderr.txt");
    write_dataset(resample, &resample_path, index)?;
    write_dataset(full, &full_path, index)?;

    let script = cmd.expand(&resample_path, &full_path, &out_path, index, size);
    let mut command = Command::new("sh");
    command
        .arg("-c")
        .arg(&script)
        .env(REPLICATE_ENV, index.to_string())
        .stdin(Stdio::null())
        .stdout(File::create(dir.join("stdout.txt")).map_err(io_err(index))?)
        .stderr(File::create(&stderr_path).map_err(io_err(index))?);
    if let Some(wd) = &cmd.working_dir {
        command.current_dir(wd);
    }
    let mut child = command.spawn().map_err(io_err(index))?;

    let start = Instant::now();
    let status = loop {
        if let Some(status) = child.try_wait().map_err(io_err(index))? {
            break status;
        }
        if start.elapsed() >= cmd.timeout {
            let _ = child.kill();
            let _ = child.wait();
            return Err(ProtocolError::Timeout {
                index,
                seconds: cmd.timeout.as_secs_f64(),
            });
        }
        std::thread::sleep(Duration::from_millis(2));
    };

    if !status.success() {
        let mut stderr = fs::read_to_string(&stderr_path).unwrap_or_default();
        if stderr.len() > STDERR_LIMIT {
            let mut cut = STDERR_LIMIT;
            while !stderr.is_char_boundary(cut) {
                cut -= 1;
            }
            stderr.truncate(cut);
        }
        return Err(ProtocolError::Failed {
            index,
            status: status.to_string(),
            stderr: stderr.trim_end().to_string(),
        });
    }

    let bytes = fs::read(&out_path).map_err(|e| ProtocolError::Output {
        index,
        message: format!("cannot read renderer output {}: {}", out_path.display(), e),
    })?;
    let image = RasterImage::decode_png(&bytes).map_err(|e| ProtocolError::Output {
        index,
        message: e.to_string(),
    })?;
    if image.dimensions() != size {
        return Err(ProtocolError::Dimensions {
            index,
            expected_w: size.0,
            expected_h: size.1,
            actual_w: image.width(),
            actual_h: image.height(),
        });
    }
    let _ = fs::remove_dir_all(&dir);
    Ok(image)
}

/// Error from [`render_stack`], with the scratch directory kept for
/// inspection.
#[derive(Debug, thiserror::Error)]
#[error("{source} (scratch files kept in {})", retained.display())]
pub struct StackError {
    #[source]
    pub source: ProtocolError,
    pub retained: PathBuf,
}

impl StackError {
    pub fn replicate(&self) -> Option<usize> {
        self.source.replicate()
    }
}

/// Renders every resample with up to `parallelism` concurrent processes.
/// Images come back in resample order. On the first failure no new
/// replicates are started and the lowest failing index is reported.
pub fn render_stack(
    cmd: &RendererCommand,
    resamples: &[Dataset],
    full: &Dataset,
    size: (u32, u32),
    parallelism: usize,
) -> Result<ImageStack, StackError> {
    render_stack_from(cmd, resamples, full, size, parallelism, 0)
}

/// [`render_stack`] for a slice of a longer sequence whose first element is
/// replicate `first`; replicate indices seen by the renderer and in errors
/// are `first + position`.
pub fn render_stack_from(
    cmd: &RendererCommand,
    resamples: &[Dataset],
    full: &Dataset,
    size: (u32, u32),
    parallelism: usize,
    first: usize,
) -> Result<ImageStack, StackError> {
    let scratch = tempfile::Builder::new()
        .prefix("bootagg-run-")
        .tempdir()
        .map_err(|source| StackError {
            source: ProtocolError::Io { index: 0, source },
            retained: std::env::temp_dir(),
        })?;
    let n = resamples.len();
    let next = AtomicUsize::new(0);
    let abort = AtomicBool::new(false);
    let slots: Vec<Mutex<Option<RasterImage>>> = (0..n).map(|_| Mutex::new(None)).collect();
    let failures: Mutex<Vec<ProtocolError>> = Mutex::new(Vec::new());

    std::thread::scope(|s| {
        for _ in 0..parallelism.clamp(1, n.max(1)) {
            s.spawn(|| loop {
                if abort.load(Ordering::SeqCst) {
                    break;
                }
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= n {
                    break;
                }
                match invoke_renderer(cmd, &resamples[i], full, first + i, size, scratch.path()) {
                    Ok(img) => *slots[i].lock().expect("slot lock") = Some(img),
                    Err(e) => {
                        abort.store(true, Ordering::SeqCst);
                        failures.lock().expect("failure lock").push(e);
                    }
                }
            });
        }
    });

    let mut failures = failures.into_inner().expect("failure lock");
    if !failures.is_empty() {
        failures.sort_by_key(|e| e.replicate().unwrap_or(usize::MAX));
        let source = failures.swap_remove(0);
        return Err(StackError {
            source,
            retained: scratch.keep(),
        });
    }
    let images = slots
        .into_iter()
        .map(|s| {
            s.into_inner()
                .expect("slot lock")
                .expect("every replicate rendered")
        })
        .collect();
    ImageStack::new(images).map_err(|e| StackError {
        source: ProtocolError::Output {
            index: 0,
            message: e.to_string(),
        },
        retained: PathBuf::new(),
    })
}
