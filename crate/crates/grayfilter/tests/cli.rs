use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use grayfilter::{read_pgm, write_pgm, PgmFormat};
use grayfilter_core::*;
use tempfile::TempDir;

fn grayfilter(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grayfilter"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn sample() -> Image {
    Image::from_fn(9, 6, |x, y| ((x * 29 + y * 53) % 256) as u8).unwrap()
}

fn put(dir: &TempDir, name: &str, img: &Image, format: PgmFormat) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, write_pgm(img, format)).unwrap();
    path
}

fn get(path: &Path) -> Image {
    read_pgm(&fs::read(path).unwrap()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn negate_writes_requested_format() {
    let dir = TempDir::new().unwrap();
    let input = put(&dir, "in.pgm", &sample(), PgmFormat::P5);
    let out = dir.path().join("out.pgm");
    let run = grayfilter(&["negate", "-i", s(&input), "-o", s(&out), "--format", "p2"]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let bytes = fs::read(&out).unwrap();
    assert!(bytes.starts_with(b"P2\n9 6\n255\n"));
    assert_eq!(read_pgm(&bytes).unwrap(), negate(&sample()));
}

#[test]
fn filters_match_library_calls() {
    let dir = TempDir::new().unwrap();
    let img = sample();
    let input = put(&dir, "in.pgm", &img, PgmFormat::P2);
    let out = dir.path().join("out.pgm");
    let cases: Vec<(Vec<&str>, Image)> = vec![
        (vec!["stretch", "--gamma", "0.5"], gray_stretch(&img, 0.5).unwrap()),
        (
            vec!["laplacian", "--variant", "eight", "--display", "rescale", "--border", "zero"],
            clamp_to_display(&laplacian(&img, LaplacianVariant::Eight, BorderPolicy::Zero), DisplayMode::Rescale),
        ),
        (vec!["sharpen"], laplacian_sharpen(&img, LaplacianVariant::Four, BorderPolicy::Replicate)),
        (
            vec!["unsharp", "--radius", "2"],
            unsharp_mask(&img, 2, DisplayMode::Clamp, BorderPolicy::Replicate).unwrap(),
        ),
        (vec!["binarize", "--threshold", "90"], render_binary(&binarize(&img, Threshold(90)))),
        (vec!["edges"], render_binary(&edge_points(&binarize(&img, Threshold(128))))),
        (vec!["shadow", "--invert"], shadow_invert(&img)),
        (vec!["--threads", "3", "shadow"], shadow_ne(&img)),
    ];
    for (args, want) in cases {
        let mut full = args.clone();
        full.extend(["-i", s(&input), "-o", s(&out)]);
        let run = grayfilter(&full);
        assert_eq!(code(&run), 0, "{args:?}: {}", String::from_utf8_lossy(&run.stderr));
        assert_eq!(get(&out), want, "{args:?}");
    }
}

#[test]
fn lut_and_kernel_files() {
    let dir = TempDir::new().unwrap();
    let img = sample();
    let input = put(&dir, "in.pgm", &img, PgmFormat::P5);
    let out = dir.path().join("out.pgm");

    let table = dir.path().join("table.txt");
    let entries: Vec<String> = (0..256).map(|i| ((i * 3) % 256).to_string()).collect();
    fs::write(&table, entries.join("\n")).unwrap();
    assert_eq!(code(&grayfilter(&["lut", "-i", s(&input), "-o", s(&out), "--table", s(&table)])), 0);
    assert_eq!(get(&out), apply_lut(&img, &Lut::from_fn(|i| i.wrapping_mul(3))));

    let kernel = dir.path().join("k.txt");
    fs::write(&kernel, "3 3\n0 1 0\n\n2 0 -1\n0 0 3\n").unwrap();
    assert_eq!(code(&grayfilter(&["convolve", "-i", s(&input), "-o", s(&out), "--kernel", s(&kernel)])), 0);
    let k = Kernel::from_rows([[0.0, 1.0, 0.0], [2.0, 0.0, -1.0], [0.0, 0.0, 3.0]]).unwrap();
    let want = clamp_to_display(&convolve(&img, &k, BorderPolicy::Replicate), DisplayMode::Clamp);
    assert_eq!(get(&out), want);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let input = put(&dir, "in.pgm", &sample(), PgmFormat::P5);
    let small = put(&dir, "small.pgm", &Image::filled(2, 2, 7).unwrap(), PgmFormat::P5);
    let out = dir.path().join("out.pgm");
    let missing = dir.path().join("missing.pgm");
    let garbage = dir.path().join("garbage.pgm");
    fs::write(&garbage, b"P5\n2 2\n15\n\0\0\0\0").unwrap();
    let even = dir.path().join("even.txt");
    fs::write(&even, "2 2\n1 1\n1 1\n").unwrap();

    assert_eq!(code(&grayfilter(&["--help"])), 0);
    assert_eq!(code(&grayfilter(&["frobnicate"])), 1);
    assert_eq!(code(&grayfilter(&["negate", "-i", s(&input)])), 1);
    assert_eq!(code(&grayfilter(&["unsharp", "-i", s(&input), "-o", s(&out), "--radius", "0"])), 1);
    assert_eq!(code(&grayfilter(&["stretch", "-i", s(&input), "-o", s(&out), "--gamma", "-1"])), 1);
    assert_eq!(code(&grayfilter(&["bench", "--size", "0"])), 1);
    assert_eq!(code(&grayfilter(&["negate", "-i", s(&missing), "-o", s(&out)])), 2);
    assert_eq!(code(&grayfilter(&["negate", "-i", s(&garbage), "-o", s(&out)])), 2);
    assert_eq!(code(&grayfilter(&["convolve", "-i", s(&input), "-o", s(&out), "--kernel", s(&even)])), 2);
    let run = grayfilter(&["add", "-i", s(&input), "-j", s(&small), "-o", s(&out)]);
    assert_eq!(code(&run), 3);
    assert!(String::from_utf8_lossy(&run.stderr).starts_with("grayfilter: "));
    assert!(!out.exists(), "failed runs leave no output behind");
}

#[test]
fn failed_run_keeps_existing_output() {
    let dir = TempDir::new().unwrap();
    let input = put(&dir, "in.pgm", &sample(), PgmFormat::P5);
    let small = put(&dir, "small.pgm", &Image::filled(2, 2, 7).unwrap(), PgmFormat::P5);
    let out = dir.path().join("out.pgm");
    fs::write(&out, b"previous").unwrap();
    assert_eq!(code(&grayfilter(&["add", "-i", s(&input), "-j", s(&small), "-o", s(&out)])), 3);
    assert_eq!(fs::read(&out).unwrap(), b"previous");
    let leftovers = fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(leftovers, 3);
}

#[test]
fn histogram_outputs() {
    let dir = TempDir::new().unwrap();
    let img = Image::new(4, 1, vec![0, 0, 7, 255]).unwrap();
    let input = put(&dir, "in.pgm", &img, PgmFormat::P2);
    let csv = dir.path().join("h.csv");
    let chart = dir.path().join("h.pgm");
    let run = grayfilter(&["histogram", "-i", s(&input), "--csv", s(&csv), "--render", s(&chart)]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 257);
    assert_eq!(lines[0], "level,count");
    assert_eq!(lines[1], "0,2");
    assert_eq!(lines[8], "7,1");
    assert_eq!(lines[256], "255,1");
    assert_eq!(get(&chart), render_histogram(&compute_histogram(&img)));
}

#[test]
fn pipeline_overlay_chain() {
    let dir = TempDir::new().unwrap();
    let img = Image::from_fn(20, 12, |x, y| if (x + y) % 7 < 3 { 220 } else { 30 }).unwrap();
    let input = put(&dir, "in.pgm", &img, PgmFormat::P5);
    let spec = dir.path().join("chain.json");
    fs::write(&spec, r#"{"stages": [{"op": "binarize", "threshold": 128}, {"op": "edges"}, {"op": "add"}]}"#).unwrap();
    let out = dir.path().join("out.pgm");
    let run = grayfilter(&["pipeline", "-i", s(&input), "-o", s(&out), "--spec", s(&spec)]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let edges = render_binary(&edge_points(&binarize(&img, Threshold(128))));
    assert_eq!(get(&out), image_add(&edges, &img).unwrap());
}

#[test]
fn pipeline_resolves_files_next_to_spec() {
    let dir = TempDir::new().unwrap();
    let img = sample();
    let input = put(&dir, "in.pgm", &img, PgmFormat::P5);
    let sub = dir.path().join("specs");
    fs::create_dir(&sub).unwrap();
    fs::write(sub.join("k.txt"), "1 3\n1 2 1\n").unwrap();
    let extra = Image::filled(9, 6, 40).unwrap();
    fs::write(sub.join("extra.pgm"), write_pgm(&extra, PgmFormat::P2)).unwrap();
    let spec = sub.join("spec.json");
    fs::write(
        &spec,
        r#"{"stages": [{"op": "convolve", "kernel_file": "k.txt", "display": "rescale"}, {"op": "add", "file": "extra.pgm"}]}"#,
    )
    .unwrap();
    let out = dir.path().join("out.pgm");
    let run = grayfilter(&["pipeline", "-i", s(&input), "-o", s(&out), "--spec", s(&spec)]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let k = Kernel::from_rows([[1.0, 2.0, 1.0]]).unwrap();
    let step = clamp_to_display(&convolve(&img, &k, BorderPolicy::Replicate), DisplayMode::Rescale);
    assert_eq!(get(&out), image_add(&step, &extra).unwrap());
}

#[test]
fn pipeline_errors() {
    let dir = TempDir::new().unwrap();
    let input = put(&dir, "in.pgm", &sample(), PgmFormat::P5);
    let out = dir.path().join("out.pgm");
    let cases = [
        (r#"{"stages": [{"op": "blur"}]}"#, 2),
        (r#"{"stages": [{"op": "negate", "extra": 1}]}"#, 2),
        (r#"{"stages": "#, 2),
        (r#"{"stages": [{"op": "negate"}, {"op": "unsharp", "radius": 0}]}"#, 1),
        (r#"{"stages": [{"op": "add", "file": "nope.pgm"}]}"#, 2),
    ];
    for (i, (json, want)) in cases.iter().enumerate() {
        let spec = dir.path().join(format!("spec{i}.json"));
        fs::write(&spec, json).unwrap();
        let run = grayfilter(&["pipeline", "-i", s(&input), "-o", s(&out), "--spec", s(&spec)]);
        assert_eq!(code(&run), *want, "{json}: {}", String::from_utf8_lossy(&run.stderr));
    }
}

fn bench_lines(out: &Output) -> Vec<String> {
    String::from_utf8_lossy(&out.stderr).lines().map(str::to_owned).collect()
}

fn field(lines: &[String], key: &str) -> String {
    let prefix = format!("{key}=");
    lines
        .iter()
        .find_map(|l| l.strip_prefix(&prefix).map(str::to_owned))
        .unwrap_or_else(|| panic!("no {key} in {lines:?}"))
}

#[test]
fn bench_checksum_is_deterministic() {
    let one = grayfilter(&["--threads", "1", "bench", "--size", "64", "--ksize", "3", "--iters", "2"]);
    let three = grayfilter(&["--threads", "3", "bench", "--size", "64", "--ksize", "3", "--iters", "1"]);
    assert_eq!(code(&one), 0);
    assert_eq!(code(&three), 0);
    let (a, b) = (bench_lines(&one), bench_lines(&three));
    assert!(a[0].starts_with("bench convolve size=64 ksize=3 iters=2 threads=1"), "{a:?}");
    assert_eq!(field(&a, "checksum"), field(&b, "checksum"));
    assert!(field(&a, "min_ms").parse::<f64>().is_ok());
    assert!(field(&a, "median_ms").parse::<f64>().is_ok());
    assert!(field(&a, "mpix_kernel_ops_per_sec").parse::<f64>().is_ok());
}

#[test]
fn bench_degenerate_sizes() {
    // a 1x1 image under a 1x1 ones kernel sums to its only pixel
    let run = grayfilter(&["bench", "--size", "1", "--ksize", "1", "--iters", "1"]);
    assert_eq!(code(&run), 0);
    let pixel = grayfilter::bench::bench_image(1).get(0, 0);
    assert_eq!(field(&bench_lines(&run), "checksum"), pixel.to_string());
    assert_eq!(code(&grayfilter(&["bench", "--size", "8", "--ksize", "4"])), 1);
}

#[test]
fn bench_report_file() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("bench.txt");
    let run = grayfilter(&["bench", "--size", "32", "--ksize", "5", "--iters", "1", "-o", s(&report)]);
    assert_eq!(code(&run), 0);
    assert_eq!(fs::read_to_string(&report).unwrap(), String::from_utf8_lossy(&run.stderr));
}
