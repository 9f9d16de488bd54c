mod support;

use bootagg::raster::{bar_columns, polyval, regression_coefficients};
use bootagg::{
    data_to_pixel, load_dataset, BuiltinRenderer64, DataFormat, Dataset, PlotFrame64, RasterImage,
    RenderSpec, Renderer, Rgb,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::{column_of, line_normal_equations, row_of};

const RED: Rgb = Rgb::new(200, 20, 20);

fn frame(x: (f64, f64), y: (f64, f64), w: u32, h: u32) -> PlotFrame64 {
    PlotFrame64::new(x, y, w, h, Rgb::WHITE).unwrap()
}

fn xy(xs: &[f64], ys: &[f64]) -> Dataset {
    let mut text = String::from("x,y\n");
    for (x, y) in xs.iter().zip(ys) {
        text.push_str(&format!("{x},{y}\n"));
    }
    load_dataset(text.as_bytes(), DataFormat::Csv).unwrap()
}

fn categories(labels: &[(&str, usize)]) -> Dataset {
    let mut text = String::from("species\n");
    for (label, count) in labels {
        for _ in 0..*count {
            text.push_str(label);
            text.push('\n');
        }
    }
    load_dataset(text.as_bytes(), DataFormat::Csv).unwrap()
}

fn colored(img: &RasterImage) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for y in 0..img.height() {
        for x in 0..img.width() {
            if img.get(x, y) != Rgb::WHITE {
                out.push((x, y));
            }
        }
    }
    out
}

#[test]
fn corners_and_center_map_by_the_affine_rule() {
    let f = frame((0.0, 1.0), (0.0, 1.0), 100, 100);
    assert_eq!(data_to_pixel(&f, 0.0, 1.0), (0, 0));
    assert_eq!(data_to_pixel(&f, 1.0, 0.0), (99, 99));
    // 0.5 * 99 = 49.5 rounds away from zero
    assert_eq!(data_to_pixel(&f, 0.5, 0.5), (50, 50));
    assert_eq!(column_of(0.5, 0.0, 1.0, 100), 50);

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = frame((-2.0, 4.0), (-1.0, 1.0), 900, 450);
    for _ in 0..10_000 {
        let x = rng.random_range(-3.0..5.0);
        let y = rng.random_range(-2.0..2.0);
        assert_eq!(
            data_to_pixel(&g, x, y),
            (column_of(x, -2.0, 4.0, 900), row_of(y, -1.0, 1.0, 450))
        );
    }
}

#[test]
fn point_estimate_disc_sits_on_the_affine_center() {
    let f = frame((-2.0, 4.0), (-1.0, 1.0), 900, 450);
    let data = Dataset::from_column("v", &[2.0; 25]);
    let spec = RenderSpec::point_estimate("v")
        .with_color(RED)
        .with_mark_size(6);
    let img = BuiltinRenderer64::new(f, spec)
        .render(&data, &data, 0)
        .unwrap();
    let (cx, cy) = (column_of(2.0, -2.0, 4.0, 900), row_of(0.0, -1.0, 1.0, 450));
    assert_eq!((cx, cy), (599, 225));
    let pixels = colored(&img);
    let n = pixels.len() as f64;
    let mean_x = pixels.iter().map(|p| p.0 as f64).sum::<f64>() / n;
    let mean_y = pixels.iter().map(|p| p.1 as f64).sum::<f64>() / n;
    assert_eq!((mean_x, mean_y), (cx as f64, cy as f64));
    // radius 5: every pixel with dx^2 + dy^2 <= 25
    let expected = (-5i64..=5)
        .flat_map(|dx| (-5i64..=5).map(move |dy| (dx, dy)))
        .filter(|(dx, dy)| dx * dx + dy * dy <= 25)
        .count();
    assert_eq!(pixels.len(), expected);
    assert!(pixels.iter().all(|&(x, y)| img.get(x, y) == RED));
}

#[test]
fn unit_mark_is_one_pixel_and_off_frame_marks_vanish() {
    let f = frame((0.0, 10.0), (-1.0, 1.0), 50, 20);
    let data = Dataset::from_column("v", &[3.0, 4.0]);
    let img = BuiltinRenderer64::new(f, RenderSpec::point_estimate("v").with_mark_size(1))
        .render(&data, &data, 0)
        .unwrap();
    let (cx, cy) = data_to_pixel(&f, 3.5, 0.0);
    assert_eq!(colored(&img), vec![(cx as u32, cy as u32)]);

    let far = Dataset::from_column("v", &[25.0]);
    let img = BuiltinRenderer64::new(f, RenderSpec::point_estimate("v").with_mark_size(4))
        .render(&far, &far, 0)
        .unwrap();
    assert_eq!(img, f.blank());
}

#[test]
fn exact_line_is_recovered_and_hits_both_edges() {
    let xs: Vec<f64> = (0..20).map(|i| i as f64 * 0.25).collect();
    let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x + 1.0).collect();
    let data = xy(&xs, &ys);
    let spec = RenderSpec::regression_line("x", "y", 1).with_color(RED);
    let coef = regression_coefficients::<f64>(&data, &spec).unwrap();
    assert!((coef[0] - 1.0).abs() < 1e-9 && (coef[1] - 2.0).abs() < 1e-9);

    let f = frame((0.0, 5.0), (0.0, 12.0), 200, 120);
    let img = BuiltinRenderer64::new(f, spec)
        .render(&data, &data, 0)
        .unwrap();
    let (c0, r0) = data_to_pixel(&f, 0.0, 1.0);
    let (c1, r1) = data_to_pixel(&f, 5.0, 11.0);
    assert_eq!(img.get(c0 as u32, r0 as u32), RED);
    assert_eq!(img.get(c1 as u32, r1 as u32), RED);
    // the curve occupies every column
    for x in 0..200 {
        assert!((0..120).any(|y| img.get(x, y) == RED), "column {x}");
    }
}

#[test]
fn constant_fit_is_the_mean() {
    let data = xy(&[0.0, 1.0, 2.0, 3.0], &[1.0, 2.0, 4.0, 5.0]);
    let spec = RenderSpec::regression_line("x", "y", 0);
    let coef = regression_coefficients::<f64>(&data, &spec).unwrap();
    assert_eq!(coef.len(), 1);
    assert!((coef[0] - 3.0).abs() < 1e-12);
}

#[test]
fn noisy_line_matches_normal_equations() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let xs: Vec<f64> = (0..200).map(|_| rng.random_range(-3.0..7.0)).collect();
    let ys: Vec<f64> = xs
        .iter()
        .map(|x| 0.7 - 1.3 * x + rng.random_range(-0.5..0.5))
        .collect();
    let coef =
        regression_coefficients::<f64>(&xy(&xs, &ys), &RenderSpec::regression_line("x", "y", 1))
            .unwrap();
    let (b0, b1) = line_normal_equations(&xs, &ys);
    assert!((coef[0] - b0).abs() < 1e-9);
    assert!((coef[1] - b1).abs() < 1e-9);
}

#[test]
fn quadratic_fit_interpolates_a_parabola() {
    let xs: Vec<f64> = (-5..=5).map(|i| i as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|x| 0.5 * x * x - x + 3.0).collect();
    let coef =
        regression_coefficients::<f64>(&xy(&xs, &ys), &RenderSpec::regression_line("x", "y", 2))
            .unwrap();
    for (got, want) in coef.iter().zip([3.0, -1.0, 0.5]) {
        assert!((got - want).abs() < 1e-9);
    }
    assert!((polyval(&coef, 2.0) - 3.0).abs() < 1e-9);
}

#[test]
fn singular_fit_names_degree_and_distinct_count() {
    let data = xy(&[1.0, 1.0, 2.0, 2.0], &[0.0, 1.0, 2.0, 3.0]);
    let err = regression_coefficients::<f64>(&data, &RenderSpec::regression_line("x", "y", 2))
        .unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains('2') && msg.contains("distinct"), "{msg}");
}

#[test]
fn bar_heights_follow_frequencies() {
    let data = categories(&[("a", 2), ("b", 3), ("c", 5)]);
    let f = frame((0.0, 1.0), (0.0, 1.0), 300, 150);
    let spec = RenderSpec::bar_chart("species", &["a", "b", "c"]).with_color(RED);
    let img = BuiltinRenderer64::new(f, spec)
        .render(&data, &data, 0)
        .unwrap();
    for (i, freq) in [0.2, 0.3, 0.5].into_iter().enumerate() {
        let (left, right) = bar_columns(i, 3, 300);
        let mid = ((left + right) / 2) as u32;
        let height = (0..150).filter(|&y| img.get(mid, y) == RED).count();
        assert_eq!(height as f64, (freq * 150.0_f64).round());
        // bars are solid down to the bottom row
        assert_eq!(img.get(mid, 149), RED);
    }
}

#[test]
fn single_category_and_even_split() {
    let f = frame((0.0, 1.0), (0.0, 1.0), 90, 60);
    let full = categories(&[("a", 3), ("b", 3)]);
    let only_a = categories(&[("a", 6)]);
    let spec = RenderSpec::bar_chart("species", &["a", "b"]).with_color(RED);
    let r = BuiltinRenderer64::new(f, spec.clone());
    let img = r.render(&only_a, &full, 0).unwrap();
    let (la, _) = bar_columns(0, 2, 90);
    let (lb, _) = bar_columns(1, 2, 90);
    assert_eq!(
        (0..60).filter(|&y| img.get(la as u32, y) == RED).count(),
        60
    );
    assert_eq!((0..60).filter(|&y| img.get(lb as u32, y) == RED).count(), 0);

    let img = r.render(&full, &full, 0).unwrap();
    let ha = (0..60).filter(|&y| img.get(la as u32, y) == RED).count();
    let hb = (0..60).filter(|&y| img.get(lb as u32, y) == RED).count();
    assert_eq!((ha, hb), (30, 30));

    let bad = RenderSpec::bar_chart("species", &["a", "zebra"]);
    assert!(BuiltinRenderer64::new(f, bad)
        .render(&full, &full, 0)
        .is_err());
}

#[test]
fn disjoint_resamples_share_the_background() {
    let f = frame((0.0, 10.0), (-1.0, 1.0), 120, 40);
    let r = BuiltinRenderer64::new(f, RenderSpec::point_estimate("v").with_color(RED));
    let a = r
        .render(
            &Dataset::from_column("v", &[1.0, 2.0]),
            &Dataset::from_column("v", &[0.0]),
            0,
        )
        .unwrap();
    let b = r
        .render(
            &Dataset::from_column("v", &[8.0, 9.5]),
            &Dataset::from_column("v", &[0.0]),
            0,
        )
        .unwrap();
    for y in 0..40 {
        for x in 0..120 {
            let (pa, pb) = (a.get(x, y), b.get(x, y));
            if pa != RED && pb != RED {
                assert_eq!(pa, pb);
                assert_eq!(pa, Rgb::WHITE);
            }
        }
    }
}

#[test]
fn renders_use_only_full_intensity_colors() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let xs: Vec<f64> = (0..60).map(|_| rng.random_range(0.0..10.0)).collect();
    let ys: Vec<f64> = xs
        .iter()
        .map(|x| x.sin() * 3.0 + rng.random_range(-1.0..1.0))
        .collect();
    let data = xy(&xs, &ys);
    let f = frame((0.0, 10.0), (-5.0, 5.0), 160, 90);
    let spec = RenderSpec::regression_line("x", "y", 3).with_color(RED);
    let scatter = match &spec.kind {
        bootagg::RenderKind::RegressionLine { scatter_color, .. } => *scatter_color,
        _ => unreachable!(),
    };
    let img = BuiltinRenderer64::new(f, spec)
        .render(&data, &data, 0)
        .unwrap();
    assert!(img
        .pixels()
        .iter()
        .all(|p| [Rgb::WHITE, RED, scatter].contains(p)));
    let again = BuiltinRenderer64::new(f, RenderSpec::regression_line("x", "y", 3).with_color(RED))
        .render(&data, &data, 0)
        .unwrap();
    assert_eq!(img.encode_png().unwrap(), again.encode_png().unwrap());
}

#[test]
fn png_round_trip_and_errors() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let pixels: Vec<Rgb> = (0..7 * 5).map(|_| Rgb(rng.random())).collect();
    let img = RasterImage::from_pixels(7, 5, pixels).unwrap();
    let bytes = img.encode_png().unwrap();
    assert_eq!(RasterImage::decode_png(&bytes).unwrap(), img);
    assert!(RasterImage::decode_png(&bytes[..bytes.len() / 2]).is_err());
    assert!(RasterImage::filled(0, 4, Rgb::WHITE).is_err());

    let white = RasterImage::filled(2, 2, Rgb::WHITE).unwrap();
    let decoded = RasterImage::decode_png(&white.encode_png().unwrap()).unwrap();
    assert!(decoded.pixels().iter().all(|p| *p == Rgb::WHITE));
}

#[test]
fn encoded_png_reads_back_with_plain_decoder() {
    let img = RasterImage::filled(1, 1, Rgb::BLACK).unwrap();
    let bytes = img.encode_png().unwrap();
    let decoder = png::Decoder::new(std::io::Cursor::new(bytes));
    let mut reader = decoder.read_info().unwrap();
    let mut buf = vec![0; reader.output_buffer_size()];
    let info = reader.next_frame(&mut buf).unwrap();
    assert_eq!((info.width, info.height), (1, 1));
    assert_eq!(&buf[..3], &[0, 0, 0]);
}

#[test]
fn alpha_is_composited_over_white() {
    let mut bytes = Vec::new();
    {
        let mut enc = png::Encoder::new(&mut bytes, 2, 1);
        enc.set_color(png::ColorType::Rgba);
        enc.set_depth(png::BitDepth::Eight);
        let mut w = enc.write_header().unwrap();
        w.write_image_data(&[0, 0, 0, 0, 0, 0, 0, 255]).unwrap();
    }
    let img = RasterImage::decode_png(&bytes).unwrap();
    assert_eq!(img.get(0, 0), Rgb::WHITE);
    assert_eq!(img.get(1, 0), Rgb::BLACK);
}
