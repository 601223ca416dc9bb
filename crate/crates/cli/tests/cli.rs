//! End-to-end CLI behavior: exit codes (0 success, 1 user error, 2 data
//! error), file outputs, and the manifest/eval flows.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use svgkit::corpus::ICONS;
use svgkit::parse_svg;

fn svgkit_cmd<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_svgkit")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("process not killed by signal")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn icon_svg(name: &str) -> &'static str {
    ICONS.iter().find(|i| i.name == name).unwrap().svg
}

fn write_icon(dir: &Path, name: &str) -> std::path::PathBuf {
    let path = dir.join(format!("{name}.svg"));
    fs::write(&path, icon_svg(name)).unwrap();
    path
}

#[test]
fn help_and_version_exit_zero() {
    let help = svgkit_cmd(["--help"]);
    assert_eq!(code(&help), 0);
    assert!(stdout(&help).contains("rasterize"));

    let version = svgkit_cmd(["--version"]);
    assert_eq!(code(&version), 0);
    assert!(stdout(&version).contains("svgkit"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&svgkit_cmd::<[&str; 0], _>([])), 1);
    assert_eq!(code(&svgkit_cmd(["no-such-command"])), 1);
    assert_eq!(code(&svgkit_cmd(["rasterize", "in.svg", "out.ppm", "--size", "zero"])), 1);
    let augment = svgkit_cmd(["augment", "a.svg", "b.svg"]);
    assert_eq!(code(&augment), 1, "augment without --seed must be rejected");
}

#[test]
fn parse_reports_validity() {
    let tmp = tempfile::tempdir().unwrap();
    let good = write_icon(tmp.path(), "square");
    let out = svgkit_cmd(["parse".as_ref(), good.as_os_str()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("\"compilable\": true"));

    let missing = svgkit_cmd(["parse", "does-not-exist.svg"]);
    assert_eq!(code(&missing), 1);

    let bad = tmp.path().join("garbage.svg");
    fs::write(&bad, "this is not markup").unwrap();
    let out = svgkit_cmd(["parse".as_ref(), bad.as_os_str()]);
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).contains("\"compilable\": false"));
}

#[test]
fn repair_completes_truncated_documents() {
    let tmp = tempfile::tempdir().unwrap();
    let whole = icon_svg("ring");
    let cut = tmp.path().join("cut.svg");
    fs::write(&cut, &whole[..whole.len() * 2 / 3]).unwrap();
    let fixed = tmp.path().join("fixed.svg");
    let out = svgkit_cmd(["repair".as_ref(), cut.as_os_str(), fixed.as_os_str()]);
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(&fixed).unwrap();
    assert!(parse_svg(&text).is_ok());
}

#[test]
fn rasterize_writes_sized_ppm() {
    let tmp = tempfile::tempdir().unwrap();
    let input = write_icon(tmp.path(), "quadrants");
    let ppm = tmp.path().join("out.ppm");
    let out = svgkit_cmd([
        "rasterize".as_ref(),
        input.as_os_str(),
        ppm.as_os_str(),
        "--size".as_ref(),
        "64".as_ref(),
    ]);
    assert_eq!(code(&out), 0);
    let bytes = fs::read(&ppm).unwrap();
    assert!(bytes.starts_with(b"P6\n64 64\n255\n"));
    assert_eq!(bytes.len(), "P6\n64 64\n255\n".len() + 64 * 64 * 3);

    let garbage = tmp.path().join("noise.svg");
    fs::write(&garbage, "no svg here").unwrap();
    let out = svgkit_cmd(["rasterize".as_ref(), garbage.as_os_str(), ppm.as_os_str()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn simplify_reduces_to_stroked_paths() {
    let tmp = tempfile::tempdir().unwrap();
    let input = write_icon(tmp.path(), "house");
    let output = tmp.path().join("line-art.svg");
    let out = svgkit_cmd(["simplify".as_ref(), input.as_os_str(), output.as_os_str()]);
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(&output).unwrap();
    assert!(parse_svg(&text).is_ok());
    assert!(text.contains("<path"));
    assert!(!text.contains("<rect"));
    assert!(text.contains("fill=\"none\""));
}

#[test]
fn augment_is_seeded_and_identity_at_zero_strength() {
    let tmp = tempfile::tempdir().unwrap();
    let input = write_icon(tmp.path(), "moon");
    let run = |seed: &str, extra: &[&str], out_name: &str| -> String {
        let output = tmp.path().join(out_name);
        let mut args: Vec<String> = vec![
            "augment".into(),
            input.to_string_lossy().into_owned(),
            output.to_string_lossy().into_owned(),
            "--seed".into(),
            seed.into(),
        ];
        args.extend(extra.iter().map(|s| s.to_string()));
        let out = svgkit_cmd(&args);
        assert_eq!(code(&out), 0, "augment failed: {}", String::from_utf8_lossy(&out.stderr));
        fs::read_to_string(&output).unwrap()
    };

    let a = run("7", &[], "a.svg");
    let b = run("7", &[], "b.svg");
    let c = run("8", &[], "c.svg");
    assert_eq!(a, b, "same seed must give identical bytes");
    assert_ne!(a, c, "different seeds should change the document");
    assert!(parse_svg(&a).is_ok());

    let zero = run(
        "7",
        &["--rotation-range", "0,0", "--color-sigma", "0", "--curve-scale", "0,0"],
        "zero.svg",
    );
    assert_eq!(parse_svg(&zero).unwrap(), parse_svg(icon_svg("moon")).unwrap());
}

#[test]
fn vectorize_traces_a_rasterized_icon() {
    let tmp = tempfile::tempdir().unwrap();
    let input = write_icon(tmp.path(), "square");
    let ppm = tmp.path().join("img.ppm");
    let out = svgkit_cmd(["rasterize".as_ref(), input.as_os_str(), ppm.as_os_str()]);
    assert_eq!(code(&out), 0);

    let traced = tmp.path().join("traced.svg");
    let out = svgkit_cmd(["vectorize".as_ref(), ppm.as_os_str(), traced.as_os_str()]);
    assert_eq!(code(&out), 0);
    let doc = parse_svg(&fs::read_to_string(&traced).unwrap()).unwrap();
    assert!(!doc.nodes.is_empty());

    let out = svgkit_cmd(["vectorize".as_ref(), input.as_os_str(), traced.as_os_str()]);
    assert_eq!(code(&out), 2, "svg text is not an image");
}

#[test]
fn manifest_flow_builds_filters_splits_and_dedups() {
    let tmp = tempfile::tempdir().unwrap();
    let data = tmp.path().join("icons");
    fs::create_dir_all(&data).unwrap();
    for icon in &ICONS {
        write_icon(&data, icon.name);
    }

    let manifest = tmp.path().join("icons.jsonl");
    let build = svgkit_cmd([
        "manifest".as_ref(),
        "build".as_ref(),
        data.as_os_str(),
        "--out".as_ref(),
        manifest.as_os_str(),
    ]);
    assert_eq!(code(&build), 0);
    assert!(stdout(&build).contains("wrote 16 entries"));
    assert_eq!(fs::read_to_string(&manifest).unwrap().lines().count(), 16);

    let stats = svgkit_cmd(["stats".as_ref(), manifest.as_os_str()]);
    assert_eq!(code(&stats), 0);
    let text = stdout(&stats);
    assert!(text.contains("unassigned  16"));
    assert!(text.contains("avg token length:"));
    assert!(text.contains("tokenizer: approx-4-bytes"));

    let split_out = tmp.path().join("split.jsonl");
    let split = svgkit_cmd([
        "manifest".as_ref(),
        "split".as_ref(),
        manifest.as_os_str(),
        "--out".as_ref(),
        split_out.as_os_str(),
        "--seed".as_ref(),
        "3".as_ref(),
    ]);
    assert_eq!(code(&split), 0);
    assert!(stdout(&split).contains("train 14 / val 1 / test 1"));

    let bad_split = svgkit_cmd([
        "manifest".as_ref(),
        "split".as_ref(),
        manifest.as_os_str(),
        "--out".as_ref(),
        split_out.as_os_str(),
        "--seed".as_ref(),
        "3".as_ref(),
        "--ratios".as_ref(),
        "0.5,0.5,0.5".as_ref(),
    ]);
    assert_eq!(code(&bad_split), 1);

    let filtered = tmp.path().join("filtered.jsonl");
    let filter = svgkit_cmd([
        "manifest".as_ref(),
        "filter".as_ref(),
        manifest.as_os_str(),
        "--out".as_ref(),
        filtered.as_os_str(),
        "--max-tokens".as_ref(),
        "1".as_ref(),
    ]);
    assert_eq!(code(&filter), 0);
    assert!(stdout(&filter).contains("kept 0 entries, dropped 16"));

    let deduped = tmp.path().join("deduped.jsonl");
    let dedup = svgkit_cmd([
        "manifest".as_ref(),
        "dedup".as_ref(),
        manifest.as_os_str(),
        "--out".as_ref(),
        deduped.as_os_str(),
    ]);
    assert_eq!(code(&dedup), 0);
    assert!(stdout(&dedup).contains("kept 16 of 16"));

    let emptied = tmp.path().join("emptied.jsonl");
    let against = svgkit_cmd([
        "manifest".as_ref(),
        "dedup".as_ref(),
        manifest.as_os_str(),
        "--out".as_ref(),
        emptied.as_os_str(),
        "--against".as_ref(),
        manifest.as_os_str(),
    ]);
    assert_eq!(code(&against), 0);
    assert!(stdout(&against).contains("kept 0 of 16"));

    let missing = svgkit_cmd(["stats", "no-such-manifest.jsonl"]);
    assert_eq!(code(&missing), 2);
}

#[test]
fn eval_flags_are_checked_before_scoring() {
    let tmp = tempfile::tempdir().unwrap();
    let report = tmp.path().join("report.json");
    let unknown_split = svgkit_cmd([
        "eval".as_ref(),
        "--pred".as_ref(),
        tmp.path().as_os_str(),
        "--manifest".as_ref(),
        "missing.jsonl".as_ref(),
        "--out".as_ref(),
        report.as_os_str(),
        "--split".as_ref(),
        "holdout".as_ref(),
    ]);
    assert_eq!(code(&unknown_split), 1);

    let missing_manifest = svgkit_cmd([
        "eval".as_ref(),
        "--pred".as_ref(),
        tmp.path().as_os_str(),
        "--manifest".as_ref(),
        "missing.jsonl".as_ref(),
        "--out".as_ref(),
        report.as_os_str(),
    ]);
    assert_eq!(code(&missing_manifest), 2);
}
