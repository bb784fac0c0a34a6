use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fourierup_cli::{read_pnm, write_pnm, RasterImage};
use fourierup_core::fourierup::{bilinear_upsample2x, FeatureTensor};
use fourierup_core::RealGrid;

fn fourierup(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fourierup"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn save(dir: &Path, name: &str, img: &RasterImage) -> String {
    let path = dir.join(name);
    fs::write(&path, write_pnm(img)).unwrap();
    path.to_str().unwrap().to_string()
}

fn load(path: &str) -> RasterImage {
    read_pnm(&fs::read(path).unwrap()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn bilinear_two_by_two() {
    let dir = tempfile::tempdir().unwrap();
    let img = RasterImage::new(2, 2, 1, vec![0, 64, 128, 255]).unwrap();
    let input = save(dir.path(), "in.pgm", &img);
    let out = dir.path().join("out.pgm");
    let o = fourierup(&[
        "upsample",
        "--variant",
        "bilinear",
        "--in",
        &input,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let result = load(out.to_str().unwrap());
    assert_eq!((result.width(), result.height()), (4, 4));

    let x = FeatureTensor::single(
        RealGrid::from_rows(&[[0.0, 64.0 / 255.0], [128.0 / 255.0, 1.0]]).unwrap(),
    );
    let y = bilinear_upsample2x(&x);
    let expected: Vec<u8> = y.channels()[0]
        .as_slice()
        .iter()
        .map(|v| (v * 255.0).round() as u8)
        .collect();
    assert_eq!(result.samples(), expected.as_slice());
    // corners keep their source values under half-pixel sampling
    assert_eq!(result.get(0, 0, 0), 0);
    assert_eq!(result.get(3, 3, 0), 255);
}

#[test]
fn padding_identity_on_constant_gray_is_a_lattice() {
    let dir = tempfile::tempdir().unwrap();
    let img = RasterImage::new(4, 3, 1, vec![200; 12]).unwrap();
    let input = save(dir.path(), "gray.pgm", &img);
    let out = dir.path().join("lattice.pgm");
    let o = fourierup(&[
        "upsample",
        "--variant",
        "padding",
        "--mixer",
        "identity",
        "--in",
        &input,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let result = load(out.to_str().unwrap());
    assert_eq!((result.width(), result.height()), (8, 6));
    for y in 0..6 {
        for x in 0..8 {
            let expected = if x % 2 == 0 && y % 2 == 0 { 200 } else { 0 };
            assert_eq!(result.get(x, y, 0), expected, "({x},{y})");
        }
    }
}

#[test]
fn missing_input_is_usage_error() {
    let o = fourierup(&["upsample", "--variant", "area", "--out", "x.pgm"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("missing --in"), "{err}");
    assert!(err.contains("Usage"), "{err}");
}

#[test]
fn unknown_flag_is_usage_error() {
    let o = fourierup(&["upsample", "--varient", "area"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Usage"));
    assert_eq!(fourierup(&["resample"]).status.code(), Some(2));
    assert_eq!(fourierup(&[]).status.code(), Some(2));
}

#[test]
fn bad_values_are_usage_errors() {
    for args in [
        &["upsample", "--variant", "cubic", "--in", "a", "--out", "b"][..],
        &[
            "upsample",
            "--variant",
            "area",
            "--combine",
            "max",
            "--in",
            "a",
            "--out",
            "b",
        ],
        &["verify", "--theorem", "9"],
        &["verify", "--seed", "-1"],
        &["bench", "--sizes", "64,,8"],
        &["bench", "--sizes", "0"],
    ] {
        assert_eq!(fourierup(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn io_failures_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.pgm");
    let o = fourierup(&[
        "upsample",
        "--variant",
        "area",
        "--in",
        missing.to_str().unwrap(),
        "--out",
        "x.pgm",
    ]);
    assert_eq!(o.status.code(), Some(1));

    let junk = dir.path().join("junk.pgm");
    fs::write(&junk, b"P9 1 1 255 x").unwrap();
    let o = fourierup(&[
        "upsample",
        "--variant",
        "area",
        "--in",
        junk.to_str().unwrap(),
        "--out",
        "x.pgm",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("magic"));

    let o = fourierup(&[
        "upsample",
        "--variant",
        "bilinear",
        "--in",
        fixture("camera.pgm").to_str().unwrap(),
        "--out",
        dir.path().join("no/such/dir.pgm").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn help_and_version_exit_zero() {
    let o = fourierup(&["--help"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("upsample"));
    assert!(fourierup(&["--version"]).status.success());
}

#[test]
fn verify_single_theorem() {
    let o = fourierup(&["verify", "--theorem", "1", "--seed", "3"]);
    assert!(o.status.success());
    let stdout = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 1);
    assert!(lines[0].starts_with("name=theorem1 sizes=1x1,1x2,"));
    assert!(lines[0].ends_with("passed=true"));
}

#[test]
fn config_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let img = RasterImage::new(2, 2, 1, vec![10, 20, 30, 40]).unwrap();
    let input = save(dir.path(), "in.pgm", &img);
    let from_config = dir.path().join("a.pgm");
    let from_flag = dir.path().join("b.pgm");
    let config = dir.path().join("run.conf");
    fs::write(
        &config,
        format!(
            "# upsample defaults\nvariant = padding\nin = {input}\nout = {}\n",
            from_config.display()
        ),
    )
    .unwrap();
    let cfg = config.to_str().unwrap();

    assert!(fourierup(&["upsample", "--config", cfg]).status.success());
    let o = fourierup(&[
        "upsample",
        "--config",
        cfg,
        "--variant",
        "bilinear",
        "--out",
        from_flag.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));

    let padded = load(from_config.to_str().unwrap());
    assert_eq!(padded.get(1, 0, 0), 0, "padding leaves odd samples empty");
    let bilinear = load(from_flag.to_str().unwrap());
    assert_ne!(bilinear.get(1, 0, 0), 0);

    fs::write(&config, "theorem=1\nseed=2\n").unwrap();
    let o = fourierup(&["verify", "--config", cfg]);
    assert!(o.status.success());
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 1);

    fs::write(&config, "colour=blue\n").unwrap();
    assert_eq!(
        fourierup(&["verify", "--config", cfg]).status.code(),
        Some(2)
    );
    fs::write(&config, "just words\n").unwrap();
    assert_eq!(
        fourierup(&["verify", "--config", cfg]).status.code(),
        Some(1)
    );
}

#[test]
fn mixer_file_is_applied() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture("astronaut.ppm");
    let run = |mixer: &str, out: &str| {
        fourierup(&[
            "upsample",
            "--variant",
            "corner",
            "--mixer",
            mixer,
            "--in",
            input.to_str().unwrap(),
            "--out",
            out,
        ])
    };
    let gain = dir.path().join("gain4.txt");
    fs::write(&gain, "3\n4 0 0\n0 4 0\n0 0 4\n1 0 0\n0 1 0\n0 0 1\n").unwrap();
    let (a, b) = (dir.path().join("id.ppm"), dir.path().join("g4.ppm"));
    assert!(run("identity", a.to_str().unwrap()).status.success());
    let o = run(gain.to_str().unwrap(), b.to_str().unwrap());
    assert!(o.status.success(), "{}", stderr(&o));
    let (id, g4) = (load(a.to_str().unwrap()), load(b.to_str().unwrap()));
    let mean = |img: &RasterImage| {
        img.samples().iter().map(|&v| v as f64).sum::<f64>() / img.samples().len() as f64
    };
    assert!(mean(&g4) > 2.0 * mean(&id));

    let gray_mixer = dir.path().join("gray.txt");
    fs::write(&gray_mixer, "1 1 1").unwrap();
    let o = run(gray_mixer.to_str().unwrap(), b.to_str().unwrap());
    assert_eq!(o.status.code(), Some(1), "channel count mismatch");
}

#[test]
fn psnr_command() {
    let dir = tempfile::tempdir().unwrap();
    let a = save(
        dir.path(),
        "a.pgm",
        &RasterImage::new(1, 1, 1, vec![0]).unwrap(),
    );
    let b = save(
        dir.path(),
        "b.pgm",
        &RasterImage::new(1, 1, 1, vec![255]).unwrap(),
    );
    let o = fourierup(&["psnr", &a, &b]);
    assert_eq!(String::from_utf8(o.stdout).unwrap().trim(), "0.000000");
    let o = fourierup(&["psnr", &a, &a]);
    assert_eq!(String::from_utf8(o.stdout).unwrap().trim(), "99.000000");
    let c = save(
        dir.path(),
        "c.pgm",
        &RasterImage::new(2, 1, 1, vec![0, 0]).unwrap(),
    );
    assert_eq!(fourierup(&["psnr", &a, &c]).status.code(), Some(1));
}

#[test]
fn bench_lines_are_columnar() {
    let o = fourierup(&["bench", "--sizes", "8,128"]);
    assert!(o.status.success());
    let stdout = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines.iter().all(|l| l.len() == lines[0].len()));
    assert!(lines[1].starts_with("fft2") && lines[1].contains("8x8"));
    assert!(lines[4].starts_with("oracle") && lines[4].ends_with("skipped"));
}

#[test]
fn upsample_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for variant in ["padding", "area", "corner", "bilinear"] {
        for combine in ["none", "avg"] {
            let outputs: Vec<Vec<u8>> = (0..2)
                .map(|i| {
                    let out = dir.path().join(format!("{variant}-{combine}-{i}.ppm"));
                    let o = fourierup(&[
                        "upsample",
                        "--variant",
                        variant,
                        "--combine",
                        combine,
                        "--in",
                        fixture("astronaut.ppm").to_str().unwrap(),
                        "--out",
                        out.to_str().unwrap(),
                    ]);
                    assert!(o.status.success(), "{}", stderr(&o));
                    fs::read(out).unwrap()
                })
                .collect();
            assert_eq!(outputs[0], outputs[1], "{variant} {combine}");
            let img = read_pnm(&outputs[0]).unwrap();
            assert_eq!((img.width(), img.height(), img.channels()), (128, 128, 3));
        }
    }
}
