use std::path::Path;
use std::time::{Duration, Instant};

use bootagg::{
    invoke_renderer, render_stack, resample_stream, Dataset, ProtocolError, RasterImage,
    RendererCommand, Rgb, SeededRng,
};

fn write_png(path: &Path, w: u32, h: u32, color: Rgb) -> RasterImage {
    let img = RasterImage::filled(w, h, color).unwrap();
    std::fs::write(path, img.encode_png().unwrap()).unwrap();
    img
}

fn cmd(template: &str, seconds: f64) -> RendererCommand {
    RendererCommand::new(template, None, Duration::from_secs_f64(seconds)).unwrap()
}

fn data() -> Dataset {
    Dataset::from_column("v", &[1.0, 2.0, 3.5, 4.0, 8.0, 13.0])
}

#[test]
fn fixed_png_is_returned() {
    let dir = tempfile::tempdir().unwrap();
    let fixed = dir.path().join("fixed.png");
    let img = write_png(&fixed, 10, 10, Rgb::new(1, 2, 3));
    let c = cmd(
        &format!("cp '{}' {{out}} # {{resample}}", fixed.display()),
        10.0,
    );
    let got = invoke_renderer(&c, &data(), &data(), 0, (10, 10), dir.path()).unwrap();
    assert_eq!(got, img);
    // replicate files are cleaned up after success
    assert!(!dir.path().join("replicate_00000").exists());

    let stack = render_stack(&c, &[data(), data(), data()], &data(), (10, 10), 2).unwrap();
    assert_eq!(stack.len(), 3);
    assert!(stack.images().iter().all(|i| *i == img));
}

#[test]
fn wrong_size_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let fixed = dir.path().join("narrow.png");
    write_png(&fixed, 9, 10, Rgb::WHITE);
    let c = cmd(
        &format!("cp '{}' {{out}} # {{resample}}", fixed.display()),
        10.0,
    );
    let err = invoke_renderer(&c, &data(), &data(), 4, (10, 10), dir.path()).unwrap_err();
    match err {
        ProtocolError::Dimensions {
            index,
            expected_w,
            expected_h,
            actual_w,
            actual_h,
        } => {
            assert_eq!(
                (index, expected_w, expected_h, actual_w, actual_h),
                (4, 10, 10, 9, 10)
            );
        }
        other => panic!("unexpected {other}"),
    }
}

#[test]
fn slow_renderer_times_out() {
    let dir = tempfile::tempdir().unwrap();
    let c = cmd("sleep 20; echo {resample} > {out}", 0.3);
    let start = Instant::now();
    let err = invoke_renderer(&c, &data(), &data(), 1, (10, 10), dir.path()).unwrap_err();
    assert!(
        matches!(err, ProtocolError::Timeout { index: 1, .. }),
        "{err}"
    );
    assert!(start.elapsed() < Duration::from_secs(5));
}

#[test]
fn missing_or_garbage_output_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let none = cmd("true {resample} {out}", 10.0);
    assert!(invoke_renderer(&none, &data(), &data(), 0, (4, 4), dir.path()).is_err());
    let junk = cmd("echo nope > {out} # {resample}", 10.0);
    assert!(invoke_renderer(&junk, &data(), &data(), 0, (4, 4), dir.path()).is_err());
}

#[test]
fn placeholders_and_environment_reach_the_renderer() {
    let dir = tempfile::tempdir().unwrap();
    let fixed = dir.path().join("fixed.png");
    write_png(&fixed, 6, 3, Rgb::BLACK);
    let template = format!(
        "test \"$BOOTAGG_REPLICATE_INDEX\" = {{index}} && test {{width}}x{{height}} = 6x3 \
         && head -n 1 {{full}} | grep -qx v && test $(wc -l < {{resample}}) -eq 7 \
         && cp '{}' {{out}}",
        fixed.display()
    );
    let c = cmd(&template, 10.0);
    invoke_renderer(&c, &data(), &data(), 12, (6, 3), dir.path()).unwrap();
}

/// Copies one of four PNGs, picked by a checksum of the resample file.
fn content_renderer(dir: &Path) -> RendererCommand {
    let colors = [
        Rgb::BLACK,
        Rgb::WHITE,
        Rgb::new(255, 0, 0),
        Rgb::new(0, 0, 255),
    ];
    for (i, c) in colors.iter().enumerate() {
        write_png(&dir.join(format!("c{i}.png")), 8, 8, *c);
    }
    cmd(
        &format!(
            "k=$(( $(cksum < {{resample}} | cut -d' ' -f1) % 4 )); cp '{}'/c$k.png {{out}}",
            dir.display()
        ),
        30.0,
    )
}

#[test]
fn stack_order_does_not_depend_on_parallelism() {
    let dir = tempfile::tempdir().unwrap();
    let c = content_renderer(dir.path());
    let resamples = resample_stream(&data(), 39, &SeededRng::new(4), false).unwrap();
    let one = render_stack(&c, &resamples, &data(), (8, 8), 1).unwrap();
    let eight = render_stack(&c, &resamples, &data(), (8, 8), 8).unwrap();
    assert_eq!(one, eight);
    let distinct: std::collections::HashSet<_> = one.images().iter().map(|i| i.get(0, 0)).collect();
    assert!(distinct.len() > 1);
}

#[test]
fn failing_replicate_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let fixed = dir.path().join("fixed.png");
    write_png(&fixed, 5, 5, Rgb::WHITE);
    let template = format!(
        "if [ {{index}} -eq 17 ]; then echo 'broken replicate' >&2; exit 3; fi; cp '{}' {{out}} # {{resample}}",
        fixed.display()
    );
    let c = cmd(&template, 10.0);
    let resamples = vec![data(); 39];
    let err = render_stack(&c, &resamples, &data(), (5, 5), 4).unwrap_err();
    assert_eq!(err.replicate(), Some(17));
    let message = err.to_string();
    assert!(
        message.contains("17") && message.contains("broken replicate"),
        "{message}"
    );
    assert!(err.retained.join("replicate_00017").exists());
    std::fs::remove_dir_all(&err.retained).unwrap();
}
