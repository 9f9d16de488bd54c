//! RGB rasters, PNG I/O and the built-in renderers.
//!
//! Built-ins never anti-alias: every pixel they touch gets the full mark
//! color, everything else stays background. Plot geometry (axis bounds,
//! bar slots, category order) comes only from the [`PlotFrame`] and the
//! [`RenderSpec`], never from the resample being drawn.

use std::io::Cursor;

use crate::error::{DataError, RasterError};
use crate::resampling::Dataset;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rgb(pub [u8; 3]);

impl Rgb {
    pub const WHITE: Rgb = Rgb([255, 255, 255]);
    pub const BLACK: Rgb = Rgb([0, 0, 0]);

    pub const fn new(r: u8, g: u8, b: u8) -> Self {
        Rgb([r, g, b])
    }

    /// Every channel within `tolerance` of `other`.
    pub fn within(&self, other: Rgb, tolerance: u8) -> bool {
        self.0
            .iter()
            .zip(other.0.iter())
            .all(|(&a, &b)| a.abs_diff(b) <= tolerance)
    }
}

impl std::str::FromStr for Rgb {
    type Err = RasterError;

    /// `#rrggbb` or `r,g,b`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || RasterError::Spec(format!("cannot parse color '{}'", s));
        if let Some(hex) = s.strip_prefix('#') {
            if hex.len() != 6 {
                return Err(bad());
            }
            let channel = |i: usize| u8::from_str_radix(&hex[i..i + 2], 16).map_err(|_| bad());
            return Ok(Rgb([channel(0)?, channel(2)?, channel(4)?]));
        }
        let parts: Vec<_> = s.split(',').map(|p| p.trim().parse::<u8>()).collect();
        match parts.as_slice() {
            [Ok(r), Ok(g), Ok(b)] => Ok(Rgb([*r, *g, *b])),
            _ => Err(bad()),
        }
    }
}

impl std::fmt::Display for Rgb {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "#{:02x}{:02x}{:02x}", self.0[0], self.0[1], self.0[2])
    }
}

/// Row-major RGB image with 8-bit channels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterImage {
    width: u32,
    height: u32,
    pixels: Vec<Rgb>,
}

impl RasterImage {
    pub fn filled(width: u32, height: u32, color: Rgb) -> Result<Self, RasterError> {
        check_size(width, height)?;
        Ok(Self {
            width,
            height,
            pixels: vec![color; width as usize * height as usize],
        })
    }

    pub fn from_pixels(width: u32, height: u32, pixels: Vec<Rgb>) -> Result<Self, RasterError> {
        check_size(width, height)?;
        let expected = width as usize * height as usize;
        if pixels.len() != expected {
            return Err(RasterError::BufferLength {
                expected,
                actual: pixels.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn dimensions(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    pub fn pixels(&self) -> &[Rgb] {
        &self.pixels
    }

    pub fn row(&self, y: u32) -> &[Rgb] {
        let w = self.width as usize;
        &self.pixels[y as usize * w..(y as usize + 1) * w]
    }

    pub fn get(&self, x: u32, y: u32) -> Rgb {
        self.pixels[y as usize * self.width as usize + x as usize]
    }

    /// Sets a pixel given signed coordinates; anything outside the raster is
    /// silently clipped.
    pub fn put(&mut self, x: i64, y: i64, color: Rgb) {
        if x >= 0 && y >= 0 && x < self.width as i64 && y < self.height as i64 {
            self.pixels[y as usize * self.width as usize + x as usize] = color;
        }
    }

    pub fn encode_png(&self) -> Result<Vec<u8>, RasterError> {
        let mut out = Vec::new();
        {
            let mut enc = png::Encoder::new(&mut out, self.width, self.height);
            enc.set_color(png::ColorType::Rgb);
            enc.set_depth(png::BitDepth::Eight);
            let mut writer = enc
                .write_header()
                .map_err(|e| RasterError::Encode(e.to_string()))?;
            let data: Vec<u8> = self.pixels.iter().flat_map(|p| p.0).collect();
            writer
                .write_image_data(&data)
                .map_err(|e| RasterError::Encode(e.to_string()))?;
        }
        Ok(out)
    }

    /// Any 8/16-bit gray, palette, RGB or RGBA PNG. Alpha is composited over
    /// opaque white.
    pub fn decode_png(bytes: &[u8]) -> Result<Self, RasterError> {
        let mut decoder = png::Decoder::new(Cursor::new(bytes));
        decoder.set_transformations(png::Transformations::normalize_to_color8());
        let mut reader = decoder
            .read_info()
            .map_err(|e| RasterError::Decode(e.to_string()))?;
        let mut buf = vec![0; reader.output_buffer_size()];
        let info = reader
            .next_frame(&mut buf)
            .map_err(|e| RasterError::Decode(e.to_string()))?;
        let data = &buf[..info.buffer_size()];
        let (width, height) = (info.width, info.height);
        let stride = info.line_size;
        let mut pixels = Vec::with_capacity(width as usize * height as usize);
        for line in data.chunks(stride).take(height as usize) {
            decode_row(line, info.color_type, width as usize, &mut pixels)?;
        }
        Self::from_pixels(width, height, pixels)
    }
}

pub(crate) fn decode_row(
    line: &[u8],
    color: png::ColorType,
    width: usize,
    out: &mut Vec<Rgb>,
) -> Result<(), RasterError> {
    use png::ColorType;
    match color {
        ColorType::Grayscale => out.extend(line[..width].iter().map(|&g| Rgb([g, g, g]))),
        ColorType::GrayscaleAlpha => out.extend(line[..2 * width].chunks_exact(2).map(|c| {
            let g = over_white(c[0], c[1]);
            Rgb([g, g, g])
        })),
        ColorType::Rgb => out.extend(
            line[..3 * width]
                .chunks_exact(3)
                .map(|c| Rgb([c[0], c[1], c[2]])),
        ),
        ColorType::Rgba => out.extend(line[..4 * width].chunks_exact(4).map(|c| {
            Rgb([
                over_white(c[0], c[3]),
                over_white(c[1], c[3]),
                over_white(c[2], c[3]),
            ])
        })),
        ColorType::Indexed => {
            return Err(RasterError::Decode(
                "indexed color survived palette expansion".into(),
            ))
        }
    }
    Ok(())
}

fn over_white(c: u8, a: u8) -> u8 {
    let (c, a) = (c as u32, a as u32);
    ((c * a + 255 * (255 - a) + 127) / 255) as u8
}

fn check_size(width: u32, height: u32) -> Result<(), RasterError> {
    if width == 0 || height == 0 {
        return Err(RasterError::ZeroSize { width, height });
    }
    Ok(())
}

/// Fixed data-to-pixel geometry for one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlotFrame<T> {
    x_min: T,
    x_max: T,
    y_min: T,
    y_max: T,
    width: u32,
    height: u32,
    background: Rgb,
}

impl<T: Scalar> PlotFrame<T> {
    pub fn new(
        x_range: (T, T),
        y_range: (T, T),
        width: u32,
        height: u32,
        background: Rgb,
    ) -> Result<Self, RasterError> {
        check_size(width, height)?;
        let ok = |(lo, hi): (T, T)| lo.is_finite() && hi.is_finite() && lo < hi;
        if !ok(x_range) || !ok(y_range) {
            return Err(RasterError::Frame(format!(
                "bounds must be finite with min < max, got x=[{}, {}] y=[{}, {}]",
                x_range.0, x_range.1, y_range.0, y_range.1
            )));
        }
        Ok(Self {
            x_min: x_range.0,
            x_max: x_range.1,
            y_min: y_range.0,
            y_max: y_range.1,
            width,
            height,
            background,
        })
    }

    pub fn x_range(&self) -> (T, T) {
        (self.x_min, self.x_max)
    }

    pub fn y_range(&self) -> (T, T) {
        (self.y_min, self.y_max)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn background(&self) -> Rgb {
        self.background
    }

    pub fn blank(&self) -> RasterImage {
        RasterImage {
            width: self.width,
            height: self.height,
            pixels: vec![self.background; self.width as usize * self.height as usize],
        }
    }

    /// Data x of the center of pixel column `col`.
    pub fn column_to_x(&self, col: u32) -> T {
        if self.width == 1 {
            return self.x_min;
        }
        let t = T::count(col as usize) / T::count(self.width as usize - 1);
        self.x_min + t * (self.x_max - self.x_min)
    }

    pub fn x_to_column(&self, x: T) -> i64 {
        let span = T::count(self.width as usize - 1);
        to_index((x - self.x_min) / (self.x_max - self.x_min) * span)
    }

    pub fn y_to_row(&self, y: T) -> i64 {
        let span = T::count(self.height as usize - 1);
        to_index((self.y_max - y) / (self.y_max - self.y_min) * span)
    }
}

/// Round half away from zero, saturating at the `i64` range. NaN maps to
/// `i64::MIN` so it always lands outside the raster.
fn to_index<T: Scalar>(v: T) -> i64 {
    if v.is_nan() {
        return i64::MIN;
    }
    v.round()
        .to_i64()
        .unwrap_or(if v > T::zero() { i64::MAX } else { i64::MIN })
}

/// Affine map from data coordinates to `(column, row)`: `x_min` lands on
/// column 0, `x_max` on column `width-1`, `y_max` on row 0. Fractional
/// positions round half away from zero. Points outside the frame give
/// out-of-range indices; callers clip.
pub fn data_to_pixel<T: Scalar>(frame: &PlotFrame<T>, x: T, y: T) -> (i64, i64) {
    (frame.x_to_column(x), frame.y_to_row(y))
}

/// Filled disc of pixels within Euclidean distance `radius` of the center.
/// Radius 0 is the center pixel alone.
pub fn fill_disc(img: &mut RasterImage, cx: i64, cy: i64, radius: u32, color: Rgb) {
    let r = radius as i64;
    let r2 = r * r;
    for dy in -r..=r {
        let y = cy.saturating_add(dy);
        if y < 0 || y >= img.height as i64 {
            continue;
        }
        // half-width of this scanline
        let mut half = 0;
        while (half + 1) * (half + 1) + dy * dy <= r2 {
            half += 1;
        }
        for x in cx.saturating_sub(half)..=cx.saturating_add(half) {
            img.put(x, y, color);
        }
    }
}

/// Filled axis-aligned rectangle, corners inclusive.
pub fn fill_rect(img: &mut RasterImage, x0: i64, y0: i64, x1: i64, y1: i64, color: Rgb) {
    let (x0, x1) = (x0.max(0), x1.min(img.width as i64 - 1));
    let (y0, y1) = (y0.max(0), y1.min(img.height as i64 - 1));
    for y in y0..=y1 {
        for x in x0..=x1 {
            img.put(x, y, color);
        }
    }
}

/// Vertical run at column `x` from `y0` to `y1` inclusive, either order.
pub fn draw_vspan(img: &mut RasterImage, x: i64, y0: i64, y1: i64, color: Rgb) {
    if x < 0 || x >= img.width as i64 {
        return;
    }
    let lo = y0.min(y1).max(0);
    let hi = y0.max(y1).min(img.height as i64 - 1);
    for y in lo..=hi {
        img.put(x, y, color);
    }
}

/// Rows a 1-px curve occupies at one column, given the curve's row here and
/// at the previous column: its own row plus the gap toward the previous row,
/// so consecutive columns stay 8-connected.
pub fn curve_column_span(row: i64, prev_row: Option<i64>) -> (i64, i64) {
    match prev_row {
        Some(prev) if prev > row.saturating_add(1) => (row, prev - 1),
        Some(prev) if prev < row.saturating_sub(1) => (prev + 1, row),
        _ => (row, row),
    }
}

/// Least-squares polynomial coefficients, lowest order first, from the
/// normal equations solved by Gaussian elimination with partial pivoting.
pub fn polyfit<T: Scalar>(xs: &[T], ys: &[T], degree: usize) -> Result<Vec<T>, RasterError> {
    assert_eq!(xs.len(), ys.len(), "polyfit needs paired samples");
    let needed = degree + 1;
    let mut distinct: Vec<T> = xs.to_vec();
    distinct.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    distinct.dedup();
    if distinct.len() < needed {
        return Err(RasterError::SingularFit {
            degree,
            needed,
            distinct: distinct.len(),
        });
    }

    // power sums Σx^k for k in 0..=2d and moments Σx^k y
    let mut sums = vec![T::zero(); 2 * degree + 1];
    let mut rhs = vec![T::zero(); needed];
    for (&x, &y) in xs.iter().zip(ys) {
        let mut p = T::one();
        for (k, s) in sums.iter_mut().enumerate() {
            *s = *s + p;
            if k < needed {
                rhs[k] = rhs[k] + p * y;
            }
            p = p * x;
        }
    }
    let mut m: Vec<Vec<T>> = (0..needed)
        .map(|i| {
            let mut row: Vec<T> = sums[i..i + needed].to_vec();
            row.push(rhs[i]);
            row
        })
        .collect();

    for col in 0..needed {
        let pivot = (col..needed)
            .max_by(|&a, &b| {
                m[a][col]
                    .abs()
                    .partial_cmp(&m[b][col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap_or(col);
        if m[pivot][col] == T::zero() || !m[pivot][col].is_finite() {
            return Err(RasterError::SingularFit {
                degree,
                needed,
                distinct: distinct.len(),
            });
        }
        m.swap(col, pivot);
        for r in col + 1..needed {
            let f = m[r][col] / m[col][col];
            let (upper, lower) = m.split_at_mut(r);
            for (target, &v) in lower[0][col..=needed]
                .iter_mut()
                .zip(&upper[col][col..=needed])
            {
                *target = *target - f * v;
            }
        }
    }
    let mut coef = vec![T::zero(); needed];
    for r in (0..needed).rev() {
        let mut acc = m[r][needed];
        for c in r + 1..needed {
            acc = acc - m[r][c] * coef[c];
        }
        coef[r] = acc / m[r][r];
    }
    Ok(coef)
}

/// Horner evaluation of ascending coefficients.
pub fn polyval<T: Scalar>(coef: &[T], x: T) -> T {
    coef.iter().rev().fold(T::zero(), |acc, &c| acc * x + c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PointStatistic {
    #[default]
    Mean,
    Median,
}

impl PointStatistic {
    pub fn apply(&self, values: &[f64]) -> f64 {
        match self {
            PointStatistic::Mean => values.iter().sum::<f64>() / values.len() as f64,
            PointStatistic::Median => {
                let mut v = values.to_vec();
                v.sort_by(|a, b| a.total_cmp(b));
                let mid = v.len() / 2;
                if v.len() % 2 == 1 {
                    v[mid]
                } else {
                    0.5 * (v[mid - 1] + v[mid])
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RenderKind {
    /// A disc at `(statistic(column), 0)`.
    PointEstimate {
        column: String,
        statistic: PointStatistic,
    },
    /// Least-squares polynomial over the resample, drawn on top of the full
    /// dataset's scatter.
    RegressionLine {
        x: String,
        y: String,
        degree: usize,
        scatter_color: Rgb,
        scatter_size: u32,
    },
    /// Relative category frequencies as bars, in the listed order.
    BarChart {
        column: String,
        categories: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderSpec {
    pub kind: RenderKind,
    pub color: Rgb,
    /// Marks of size `s` are discs of radius `s - 1`; size 1 is one pixel.
    pub mark_size: u32,
}

impl RenderSpec {
    pub fn point_estimate(column: &str) -> Self {
        Self {
            kind: RenderKind::PointEstimate {
                column: column.to_string(),
                statistic: PointStatistic::Mean,
            },
            color: Rgb::BLACK,
            mark_size: 3,
        }
    }

    pub fn regression_line(x: &str, y: &str, degree: usize) -> Self {
        Self {
            kind: RenderKind::RegressionLine {
                x: x.to_string(),
                y: y.to_string(),
                degree,
                scatter_color: Rgb::new(160, 160, 160),
                scatter_size: 2,
            },
            color: Rgb::BLACK,
            mark_size: 1,
        }
    }

    pub fn bar_chart(column: &str, categories: &[&str]) -> Self {
        Self {
            kind: RenderKind::BarChart {
                column: column.to_string(),
                categories: categories.iter().map(|c| c.to_string()).collect(),
            },
            color: Rgb::new(31, 119, 180),
            mark_size: 1,
        }
    }

    pub fn with_color(mut self, color: Rgb) -> Self {
        self.color = color;
        self
    }

    pub fn with_mark_size(mut self, size: u32) -> Self {
        self.mark_size = size;
        self
    }

    /// Checks the spec against the full dataset's columns and domain.
    pub fn validate(&self, full: &Dataset) -> Result<(), RasterError> {
        if self.mark_size == 0 {
            return Err(RasterError::Spec("mark size must be at least 1".into()));
        }
        match &self.kind {
            RenderKind::PointEstimate { column, .. } => {
                full.numeric_column(column)?;
            }
            RenderKind::RegressionLine {
                x, y, scatter_size, ..
            } => {
                full.numeric_column(x)?;
                full.numeric_column(y)?;
                if *scatter_size == 0 {
                    return Err(RasterError::Spec("scatter size must be at least 1".into()));
                }
            }
            RenderKind::BarChart { column, categories } => {
                if categories.is_empty() {
                    return Err(RasterError::Spec("bar chart needs categories".into()));
                }
                let domain = full.text_column(column)?;
                for cat in categories {
                    if !domain.contains(&cat.as_str()) {
                        return Err(RasterError::Spec(format!(
                            "category '{}' does not occur in column '{}'",
                            cat, column
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Something that maps a resample to an image of fixed size.
pub trait Renderer: Sync {
    fn size(&self) -> (u32, u32);

    fn render(
        &self,
        resample: &Dataset,
        full: &Dataset,
        index: usize,
    ) -> Result<RasterImage, RasterError>;
}

/// In-process renderer for the built-in chart kinds.
#[derive(Debug, Clone)]
pub struct BuiltinRenderer<T> {
    pub frame: PlotFrame<T>,
    pub spec: RenderSpec,
}

impl<T: Scalar> BuiltinRenderer<T> {
    pub fn new(frame: PlotFrame<T>, spec: RenderSpec) -> Self {
        Self { frame, spec }
    }
}

impl<T: Scalar> Renderer for BuiltinRenderer<T> {
    fn size(&self) -> (u32, u32) {
        (self.frame.width, self.frame.height)
    }

    fn render(
        &self,
        resample: &Dataset,
        full: &Dataset,
        _index: usize,
    ) -> Result<RasterImage, RasterError> {
        match self.spec.kind {
            RenderKind::PointEstimate { .. } => {
                render_point_estimate(resample, full, &self.frame, &self.spec)
            }
            RenderKind::RegressionLine { .. } => {
                render_regression_line(resample, full, &self.frame, &self.spec)
            }
            RenderKind::BarChart { .. } => {
                render_bar_chart(resample, full, &self.frame, &self.spec)
            }
        }
    }
}

/// Value of the point-estimate statistic for one resample.
pub fn point_statistic(resample: &Dataset, spec: &RenderSpec) -> Result<f64, RasterError> {
    match &spec.kind {
        RenderKind::PointEstimate { column, statistic } => {
            let values = resample.numeric_column(column)?;
            if values.is_empty() {
                return Err(DataError::Empty.into());
            }
            Ok(statistic.apply(&values))
        }
        _ => Err(RasterError::Spec("not a point-estimate spec".into())),
    }
}

pub fn render_point_estimate<T: Scalar>(
    resample: &Dataset,
    _full: &Dataset,
    frame: &PlotFrame<T>,
    spec: &RenderSpec,
) -> Result<RasterImage, RasterError> {
    let stat = point_statistic(resample, spec)?;
    let mut img = frame.blank();
    let (col, row) = data_to_pixel(frame, T::lit(stat), T::zero());
    fill_disc(
        &mut img,
        col,
        row,
        spec.mark_size.saturating_sub(1),
        spec.color,
    );
    Ok(img)
}

/// Coefficients (lowest order first) the regression renderer fits to `resample`.
pub fn regression_coefficients<T: Scalar>(
    resample: &Dataset,
    spec: &RenderSpec,
) -> Result<Vec<T>, RasterError> {
    match &spec.kind {
        RenderKind::RegressionLine { x, y, degree, .. } => {
            let xs: Vec<T> = resample
                .numeric_column(x)?
                .into_iter()
                .map(T::lit)
                .collect();
            let ys: Vec<T> = resample
                .numeric_column(y)?
                .into_iter()
                .map(T::lit)
                .collect();
            polyfit(&xs, &ys, *degree)
        }
        _ => Err(RasterError::Spec("not a regression spec".into())),
    }
}

/// Row the fitted curve occupies at each pixel column (may be off-raster).
pub fn curve_rows<T: Scalar>(frame: &PlotFrame<T>, coef: &[T]) -> Vec<i64> {
    (0..frame.width)
        .map(|c| frame.y_to_row(polyval(coef, frame.column_to_x(c))))
        .collect()
}

pub fn render_regression_line<T: Scalar>(
    resample: &Dataset,
    full: &Dataset,
    frame: &PlotFrame<T>,
    spec: &RenderSpec,
) -> Result<RasterImage, RasterError> {
    let RenderKind::RegressionLine {
        x,
        y,
        scatter_color,
        scatter_size,
        ..
    } = &spec.kind
    else {
        return Err(RasterError::Spec("not a regression spec".into()));
    };
    let coef = regression_coefficients::<T>(resample, spec)?;
    let mut img = frame.blank();

    let fx = full.numeric_column(x)?;
    let fy = full.numeric_column(y)?;
    for (&px, &py) in fx.iter().zip(&fy) {
        let (c, r) = data_to_pixel(frame, T::lit(px), T::lit(py));
        fill_disc(
            &mut img,
            c,
            r,
            scatter_size.saturating_sub(1),
            *scatter_color,
        );
    }

    let mut prev = None;
    for (col, row) in curve_rows(frame, &coef).into_iter().enumerate() {
        let (lo, hi) = curve_column_span(row, prev);
        draw_vspan(&mut img, col as i64, lo, hi, spec.color);
        prev = Some(row);
    }
    Ok(img)
}

/// Pixel columns `[left, right]` of bar `i` out of `m` on a raster `width` wide.
/// Each bar takes the middle 80% of its slot.
pub fn bar_columns(i: usize, m: usize, width: u32) -> (i64, i64) {
    let slot = width as f64 / m as f64;
    let left = (i as f64 * slot + 0.1 * slot).round() as i64;
    let right = ((i as f64 + 1.0) * slot - 0.1 * slot).round() as i64 - 1;
    (left, right.max(left))
}

/// Bar height in pixels: `frequency * height`, rounded half away from zero.
pub fn bar_height(frequency: f64, height: u32) -> i64 {
    (frequency * height as f64).round() as i64
}

pub fn render_bar_chart<T: Scalar>(
    resample: &Dataset,
    full: &Dataset,
    frame: &PlotFrame<T>,
    spec: &RenderSpec,
) -> Result<RasterImage, RasterError> {
    let RenderKind::BarChart { column, categories } = &spec.kind else {
        return Err(RasterError::Spec("not a bar-chart spec".into()));
    };
    spec.validate(full)?;
    let values = resample.text_column(column)?;
    let total = values.len();
    if total == 0 {
        return Err(DataError::Empty.into());
    }
    let mut img = frame.blank();
    let h = frame.height;
    for (i, cat) in categories.iter().enumerate() {
        let count = values.iter().filter(|v| **v == cat.as_str()).count();
        let bar = bar_height(count as f64 / total as f64, h);
        if bar == 0 {
            continue;
        }
        let (left, right) = bar_columns(i, categories.len(), frame.width);
        fill_rect(
            &mut img,
            left,
            h as i64 - bar,
            right,
            h as i64 - 1,
            spec.color,
        );
    }
    Ok(img)
}
