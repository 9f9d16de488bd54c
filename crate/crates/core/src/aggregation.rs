//! Pixel-wise aggregation of an image stack.
//!
//! Each channel of each pixel is reduced independently. The plain reduction
//! is the mean intensity. The transformed reduction looks at the relative
//! frequencies of the distinct channel values at that pixel, pushes the
//! dominant frequency through `f(x) = (1 - 2τ) I_x(k, k) + τ`, hands the
//! remaining mass `f(1 - x_c)` to the other values in proportion to their
//! original frequencies, and outputs the reweighted mean of the values. Rare
//! marks therefore keep at least weight `τ`-ish instead of `1/n`.

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use rand::Rng;
use rayon::prelude::*;

use crate::error::AggregationError;
use crate::raster::{decode_row, RasterImage, Rgb};
use crate::resampling::SeededRng;
use crate::scalar::Scalar;
use crate::special::{reg_inc_beta, BetaParams};

/// `n >= 1` images of identical size.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageStack {
    images: Vec<RasterImage>,
}

impl ImageStack {
    pub fn new(images: Vec<RasterImage>) -> Result<Self, AggregationError> {
        let first = images.first().ok_or(AggregationError::EmptyStack)?;
        let (w, h) = first.dimensions();
        if let Some((index, img)) = images
            .iter()
            .enumerate()
            .find(|(_, img)| img.dimensions() != (w, h))
        {
            return Err(AggregationError::DimensionMismatch {
                index,
                expected_w: w,
                expected_h: h,
                actual_w: img.width(),
                actual_h: img.height(),
            });
        }
        Ok(Self { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn width(&self) -> u32 {
        self.images[0].width()
    }

    pub fn height(&self) -> u32 {
        self.images[0].height()
    }

    pub fn images(&self) -> &[RasterImage] {
        &self.images
    }

    pub fn into_images(self) -> Vec<RasterImage> {
        self.images
    }
}

/// How to pick the dominant value when several share the top frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// The smallest channel value wins.
    #[default]
    SmallestValue,
    /// Uniform choice, keyed by seed and pixel/channel position.
    Seeded(u64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformParams<T> {
    k: T,
    tau: T,
    enabled: bool,
    tie_break: TieBreak,
}

impl<T: Scalar> TransformParams<T> {
    pub const DEFAULT_K: f64 = 2.5;
    pub const DEFAULT_TAU: f64 = 0.3;

    pub fn new(k: T, tau: T) -> Result<Self, AggregationError> {
        if !(k > T::zero() && k.is_finite()) {
            return Err(AggregationError::Params(format!(
                "k must be positive, got {}",
                k
            )));
        }
        if !(tau > T::zero() && tau < T::lit(0.5)) {
            return Err(AggregationError::Params(format!(
                "tau must lie in (0, 0.5), got {}",
                tau
            )));
        }
        Ok(Self {
            k,
            tau,
            enabled: true,
            tie_break: TieBreak::SmallestValue,
        })
    }

    /// Plain averaging; `k` and `tau` keep their defaults but are unused.
    pub fn disabled() -> Self {
        Self {
            enabled: false,
            ..Self::default()
        }
    }

    pub fn with_enabled(mut self, enabled: bool) -> Self {
        self.enabled = enabled;
        self
    }

    pub fn with_tie_break(mut self, tie_break: TieBreak) -> Self {
        self.tie_break = tie_break;
        self
    }

    pub fn k(&self) -> T {
        self.k
    }

    pub fn tau(&self) -> T {
        self.tau
    }

    pub fn enabled(&self) -> bool {
        self.enabled
    }

    pub fn tie_break(&self) -> TieBreak {
        self.tie_break
    }
}

impl<T: Scalar> Default for TransformParams<T> {
    fn default() -> Self {
        Self {
            k: T::lit(Self::DEFAULT_K),
            tau: T::lit(Self::DEFAULT_TAU),
            enabled: true,
            tie_break: TieBreak::SmallestValue,
        }
    }
}

/// Distinct channel values at one pixel with their counts, ascending by value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelFrequencyTable {
    entries: Vec<(u8, u32)>,
    total: u32,
}

impl ChannelFrequencyTable {
    pub fn from_values(values: &[u8]) -> Result<Self, AggregationError> {
        if values.is_empty() {
            return Err(AggregationError::EmptyStack);
        }
        let mut counts = [0u32; 256];
        for &v in values {
            counts[v as usize] += 1;
        }
        let entries = (0..=255u8)
            .filter(|&v| counts[v as usize] > 0)
            .map(|v| (v, counts[v as usize]))
            .collect();
        Ok(Self {
            entries,
            total: values.len() as u32,
        })
    }

    /// From explicit `(value, count)` pairs; values must be distinct and
    /// counts positive.
    pub fn from_counts(mut entries: Vec<(u8, u32)>) -> Result<Self, AggregationError> {
        entries.sort_unstable();
        let distinct = entries.windows(2).all(|w| w[0].0 != w[1].0);
        if entries.is_empty() || !distinct || entries.iter().any(|e| e.1 == 0) {
            return Err(AggregationError::Params(
                "frequency table needs distinct values with positive counts".into(),
            ));
        }
        let total = entries.iter().map(|e| e.1).sum();
        Ok(Self { entries, total })
    }

    pub fn entries(&self) -> &[(u8, u32)] {
        &self.entries
    }

    pub fn total(&self) -> u32 {
        self.total
    }

    /// Indices of the entries with the largest count.
    pub fn modes(&self) -> Vec<usize> {
        let best = self.entries.iter().map(|e| e.1).max().unwrap_or(0);
        (0..self.entries.len())
            .filter(|&i| self.entries[i].1 == best)
            .collect()
    }
}

/// Region of interest, fixed before looking at the images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionMask {
    width: u32,
    height: u32,
    mask: Vec<bool>,
}

impl RegionMask {
    pub fn from_fn(width: u32, height: u32, f: impl Fn(u32, u32) -> bool) -> Self {
        let mask = (0..height)
            .flat_map(|y| (0..width).map(move |x| (x, y)))
            .map(|(x, y)| f(x, y))
            .collect();
        Self {
            width,
            height,
            mask,
        }
    }

    /// Columns `x0..=x1`, rows `y0..=y1`.
    pub fn rect(width: u32, height: u32, x0: u32, y0: u32, x1: u32, y1: u32) -> Self {
        Self::from_fn(width, height, |x, y| {
            x >= x0 && x <= x1 && y >= y0 && y <= y1
        })
    }

    pub fn contains(&self, x: u32, y: u32) -> bool {
        self.mask[y as usize * self.width as usize + x as usize]
    }

    pub fn dimensions(&self) -> (u32, u32) {
        (self.width, self.height)
    }
}

/// Per-pixel RGB in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateImage<T> {
    width: u32,
    height: u32,
    channels: Vec<[T; 3]>,
}

impl<T: Scalar> AggregateImage<T> {
    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn channels(&self) -> &[[T; 3]] {
        &self.channels
    }

    pub fn get(&self, x: u32, y: u32) -> [T; 3] {
        self.channels[y as usize * self.width as usize + x as usize]
    }
}

/// `f(x) = (1 - 2τ) I_x(k, k) + τ`.
pub fn transform_scalar<T: Scalar>(
    x: T,
    params: &TransformParams<T>,
) -> Result<T, AggregationError> {
    let beta = BetaParams::symmetric(params.k)?;
    let two = T::lit(2.0);
    Ok((T::one() - two * params.tau) * reg_inc_beta(x, beta)? + params.tau)
}

/// Transformed weights for each entry of `table`, in entry order.
///
/// Ties for the dominant value are resolved by `params.tie_break`; the seeded
/// variant uses stream 0 of its seed here.
pub fn transform_frequencies<T: Scalar>(
    table: &ChannelFrequencyTable,
    params: &TransformParams<T>,
) -> Result<Vec<T>, AggregationError> {
    let m = table.entries.len();
    if m == 1 {
        return Ok(vec![T::one()]);
    }
    let c = pick_mode(table, params.tie_break, 0);
    let total = table.total;
    let count_c = table.entries[c].1;
    let x_c = T::count(count_c as usize) / T::count(total as usize);
    let rest = T::count((total - count_c) as usize);
    let f_c = transform_scalar(x_c, params)?;
    let f_rest = transform_scalar(rest / T::count(total as usize), params)?;
    Ok(table
        .entries
        .iter()
        .enumerate()
        .map(|(i, &(_, count))| {
            if i == c {
                f_c
            } else {
                f_rest * T::count(count as usize) / rest
            }
        })
        .collect())
}

fn pick_mode(table: &ChannelFrequencyTable, tie: TieBreak, key: u64) -> usize {
    let modes = table.modes();
    match tie {
        _ if modes.len() == 1 => modes[0],
        TieBreak::SmallestValue => modes[0],
        TieBreak::Seeded(seed) => {
            let mut rng = SeededRng::new(seed).stream(key);
            modes[rng.random_range(0..modes.len())]
        }
    }
}

/// Per-channel reduction with everything that depends only on `n` hoisted.
struct Reducer<T> {
    n: u32,
    /// `f(j / n)` for `j = 0..=n`; empty for plain averaging.
    table: Vec<T>,
    tie: TieBreak,
}

impl<T: Scalar> Reducer<T> {
    fn new(n: usize, params: &TransformParams<T>) -> Result<Self, AggregationError> {
        let table = if params.enabled {
            (0..=n)
                .map(|j| transform_scalar(T::count(j) / T::count(n), params))
                .collect::<Result<_, _>>()?
        } else {
            Vec::new()
        };
        Ok(Self {
            n: n as u32,
            table,
            tie: params.tie_break,
        })
    }

    fn mean(&self, sum: u32) -> T {
        T::count(sum as usize) / T::count(self.n as usize * 255)
    }

    /// `counts` is a scratch histogram, zero on entry and on exit.
    fn reduce(&self, values: impl Iterator<Item = u8>, counts: &mut [u32; 256], key: u64) -> T {
        if self.table.is_empty() {
            return self.mean(values.map(u32::from).sum());
        }
        let mut seen: Vec<u8> = Vec::with_capacity(4);
        for v in values {
            if counts[v as usize] == 0 {
                seen.push(v);
            }
            counts[v as usize] += 1;
        }
        seen.sort_unstable();
        let table = ChannelFrequencyTable {
            entries: seen.iter().map(|&v| (v, counts[v as usize])).collect(),
            total: self.n,
        };
        for &v in &seen {
            counts[v as usize] = 0;
        }
        if table.entries.len() == 1 {
            return T::count(table.entries[0].0 as usize) / T::lit(255.0);
        }
        let c = pick_mode(&table, self.tie, key);
        let (v_c, count_c) = table.entries[c];
        let rest = self.n - count_c;
        let mut others = T::zero();
        for (i, &(v, count)) in table.entries.iter().enumerate() {
            if i != c {
                others = others + T::count(count as usize) * T::count(v as usize);
            }
        }
        let dominant = self.table[count_c as usize] * T::count(v_c as usize);
        let spread = self.table[rest as usize] * others / T::count(rest as usize);
        ((dominant + spread) / T::lit(255.0))
            .min(T::one())
            .max(T::zero())
    }
}

/// Reduces rows `y0..y0+rows` given, for each image, a slice covering just
/// those rows.
fn reduce_rows<T: Scalar>(
    slices: &[&[Rgb]],
    width: u32,
    y0: u32,
    reducer: &Reducer<T>,
) -> Vec<[T; 3]> {
    let w = width as usize;
    let pixels = slices[0].len();
    let mut out = vec![[T::zero(); 3]; pixels];
    out.par_chunks_mut(w).enumerate().for_each(|(row, dst)| {
        let mut counts = [0u32; 256];
        for (x, px) in dst.iter_mut().enumerate() {
            let p = row * w + x;
            let global = (y0 as u64 + row as u64) * width as u64 + x as u64;
            for (ch, slot) in px.iter_mut().enumerate() {
                let values = slices.iter().map(|s| s[p].0[ch]);
                *slot = reducer.reduce(values, &mut counts, global * 3 + ch as u64);
            }
        }
    });
    out
}

/// Mean intensity per pixel and channel.
pub fn mean_aggregate<T: Scalar>(stack: &ImageStack) -> AggregateImage<T> {
    let reducer = Reducer {
        n: stack.len() as u32,
        table: Vec::new(),
        tie: TieBreak::SmallestValue,
    };
    aggregate_with(stack, &reducer)
}

fn aggregate_with<T: Scalar>(stack: &ImageStack, reducer: &Reducer<T>) -> AggregateImage<T> {
    let slices: Vec<&[Rgb]> = stack.images.iter().map(|i| i.pixels()).collect();
    AggregateImage {
        width: stack.width(),
        height: stack.height(),
        channels: reduce_rows(&slices, stack.width(), 0, reducer),
    }
}

/// Frequency-transformed aggregate; identical to [`mean_aggregate`] when the
/// transform is disabled.
pub fn transform_aggregate<T: Scalar>(
    stack: &ImageStack,
    params: &TransformParams<T>,
) -> Result<AggregateImage<T>, AggregationError> {
    if !params.enabled {
        return Ok(mean_aggregate(stack));
    }
    let reducer = Reducer::new(stack.len(), params)?;
    Ok(aggregate_with(stack, &reducer))
}

/// Back to 8 bits: `round(v * 255)` with ties to even.
pub fn quantize<T: Scalar>(agg: &AggregateImage<T>) -> RasterImage {
    let pixels = agg
        .channels
        .iter()
        .map(|c| {
            Rgb([
                quantize_channel(c[0]),
                quantize_channel(c[1]),
                quantize_channel(c[2]),
            ])
        })
        .collect();
    RasterImage::from_pixels(agg.width, agg.height, pixels).expect("aggregate dimensions are valid")
}

pub fn quantize_channel<T: Scalar>(v: T) -> u8 {
    let x = (v * T::lit(255.0)).max(T::zero()).min(T::lit(255.0));
    let floor = x.floor();
    let frac = x - floor;
    let half = T::lit(0.5);
    let round_up = frac > half || (frac == half && !(floor.as_f64() as u32).is_multiple_of(2));
    let rounded = if round_up { floor + T::one() } else { floor };
    rounded.as_f64() as u8
}

/// Number of images whose masked pixels all stay within `tolerance` of the
/// background on every channel.
pub fn region_occupancy(
    stack: &ImageStack,
    region: &RegionMask,
    background: Rgb,
    tolerance: u8,
) -> Result<u64, AggregationError> {
    if region.dimensions() != (stack.width(), stack.height()) {
        return Err(AggregationError::DimensionMismatch {
            index: 0,
            expected_w: stack.width(),
            expected_h: stack.height(),
            actual_w: region.width,
            actual_h: region.height,
        });
    }
    let empty = stack
        .images
        .par_iter()
        .filter(|img| {
            img.pixels()
                .iter()
                .zip(&region.mask)
                .all(|(px, &inside)| !inside || px.within(background, tolerance))
        })
        .count();
    Ok(empty as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Pixel columns.
    Horizontal,
    /// Pixel rows.
    Vertical,
}

/// Smallest and largest coordinate along `axis` at which any image differs
/// from the background.
pub fn observed_interval(
    stack: &ImageStack,
    axis: Axis,
    background: Rgb,
    tolerance: u8,
) -> Result<(u32, u32), AggregationError> {
    let w = stack.width() as usize;
    let mut bounds: Option<(u32, u32)> = None;
    for img in &stack.images {
        for (i, px) in img.pixels().iter().enumerate() {
            if px.within(background, tolerance) {
                continue;
            }
            let coord = match axis {
                Axis::Horizontal => (i % w) as u32,
                Axis::Vertical => (i / w) as u32,
            };
            bounds = Some(match bounds {
                None => (coord, coord),
                Some((lo, hi)) => (lo.min(coord), hi.max(coord)),
            });
        }
    }
    bounds.ok_or(AggregationError::AllBackground)
}

/// Per column, the lowest and highest row at which any image differs from
/// the background (`None` for untouched columns).
pub fn column_envelope(
    stack: &ImageStack,
    background: Rgb,
    tolerance: u8,
) -> Vec<Option<(u32, u32)>> {
    let (w, h) = (stack.width(), stack.height());
    (0..w)
        .map(|x| {
            let inked = |&y: &u32| {
                stack
                    .images
                    .iter()
                    .any(|img| !img.get(x, y).within(background, tolerance))
            };
            let first = (0..h).find(inked)?;
            let last = (0..h).rev().find(inked).unwrap_or(first);
            Some((first, last))
        })
        .collect()
}

/// Row count per tile so that one tile of every image fits in `cap` bytes.
pub fn tile_rows_for_cap(images: usize, width: u32, cap: u64) -> u32 {
    let per_row = (images as u64) * (width as u64) * 3;
    (cap / per_row.max(1)).clamp(1, u32::MAX as u64) as u32
}

/// A stack of PNG files on disk, read a band of rows at a time.
#[derive(Debug, Clone)]
pub struct PngFileStack {
    paths: Vec<PathBuf>,
    width: u32,
    height: u32,
}

impl PngFileStack {
    /// Reads the headers and checks all images share the first one's size.
    pub fn open(paths: Vec<PathBuf>) -> Result<Self, AggregationError> {
        let first = paths.first().ok_or(AggregationError::EmptyStack)?;
        let (width, height) = png_dimensions(first)?;
        for (index, path) in paths.iter().enumerate().skip(1) {
            let (w, h) = png_dimensions(path)?;
            if (w, h) != (width, height) {
                return Err(AggregationError::DimensionMismatch {
                    index,
                    expected_w: width,
                    expected_h: height,
                    actual_w: w,
                    actual_h: h,
                });
            }
        }
        Ok(Self {
            paths,
            width,
            height,
        })
    }

    pub fn paths(&self) -> &[PathBuf] {
        &self.paths
    }

    pub fn dimensions(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    fn read_rows(&self, index: usize, y0: u32, y1: u32) -> Result<Vec<Rgb>, AggregationError> {
        let path = &self.paths[index];
        let mut reader = open_png(path)?;
        let info = reader.info();
        if info.interlaced {
            drop(reader);
            let img = read_png(path)?;
            return Ok((y0..y1).flat_map(|y| img.row(y).to_vec()).collect());
        }
        let (color, _) = reader.output_color_type();
        let w = self.width as usize;
        let mut out = Vec::with_capacity(w * (y1 - y0) as usize);
        for y in 0..y1 {
            let row = reader
                .next_row()
                .map_err(|e| decode_err(path, e))?
                .ok_or_else(|| decode_err(path, "image ended early"))?;
            if y >= y0 {
                decode_row(row.data(), color, w, &mut out)?;
            }
        }
        Ok(out)
    }

    pub fn load(&self) -> Result<ImageStack, AggregationError> {
        let images = self
            .paths
            .iter()
            .map(|p| read_png(p))
            .collect::<Result<Vec<_>, _>>()?;
        ImageStack::new(images)
    }
}

fn open_png(path: &Path) -> Result<png::Reader<BufReader<File>>, AggregationError> {
    let file = File::open(path).map_err(|source| AggregationError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut decoder = png::Decoder::new(BufReader::new(file));
    decoder.set_transformations(png::Transformations::normalize_to_color8());
    decoder.read_info().map_err(|e| decode_err(path, e))
}

fn png_dimensions(path: &Path) -> Result<(u32, u32), AggregationError> {
    let reader = open_png(path)?;
    let info = reader.info();
    Ok((info.width, info.height))
}

pub fn read_png(path: &Path) -> Result<RasterImage, AggregationError> {
    let bytes = std::fs::read(path).map_err(|source| AggregationError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    RasterImage::decode_png(&bytes).map_err(|e| decode_err(path, e))
}

fn decode_err(path: &Path, e: impl std::fmt::Display) -> AggregationError {
    AggregationError::Raster(crate::error::RasterError::Decode(format!(
        "{}: {}",
        path.display(),
        e
    )))
}

/// Aggregates a file-backed stack `tile_rows` rows at a time. The result is
/// bit-identical to loading everything and calling [`transform_aggregate`].
pub fn aggregate_png_files<T: Scalar>(
    stack: &PngFileStack,
    params: &TransformParams<T>,
    tile_rows: u32,
) -> Result<AggregateImage<T>, AggregationError> {
    let n = stack.paths.len();
    let reducer = if params.enabled {
        Reducer::new(n, params)?
    } else {
        Reducer {
            n: n as u32,
            table: Vec::new(),
            tie: TieBreak::SmallestValue,
        }
    };
    let (w, h) = (stack.width, stack.height);
    let tile = tile_rows.max(1);
    let mut channels = Vec::with_capacity(w as usize * h as usize);
    let mut y0 = 0;
    while y0 < h {
        let y1 = (y0 + tile).min(h);
        let bands = (0..n)
            .into_par_iter()
            .map(|i| stack.read_rows(i, y0, y1))
            .collect::<Result<Vec<_>, _>>()?;
        let slices: Vec<&[Rgb]> = bands.iter().map(Vec::as_slice).collect();
        channels.extend(reduce_rows(&slices, w, y0, &reducer));
        y0 = y1;
    }
    Ok(AggregateImage {
        width: w,
        height: h,
        channels,
    })
}
