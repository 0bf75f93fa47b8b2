use std::path::Path;
use std::process::{Command, Output};

fn polarmask(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polarmask"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(dir: &tempfile::TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

fn one_line_error(out: &Output) {
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert_eq!(stderr.trim_end().lines().count(), 1, "{stderr}");
    assert!(stderr.starts_with("error: "));
}

#[test]
fn sweep_writes_header_and_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(&dir, "sweep.csv");
    let o = polarmask(&[
        "sweep",
        "--synthetic",
        "circles",
        "--count",
        "10",
        "--n-list",
        "18,36",
        "--center",
        "mass",
        "--raster-size",
        "64",
        "--out",
        &out,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "n_rays,center_mode,mean_iou,instance_count,skipped"
    );
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("18,mass,"));
    assert!(!text.contains('\r'));
}

#[test]
fn empty_corpus_exits_2_without_csv() {
    let dir = tempfile::tempdir().unwrap();
    let ann = path(&dir, "empty.json");
    std::fs::write(&ann, r#"{"images": [], "annotations": []}"#).unwrap();
    let out = path(&dir, "sweep.csv");
    let o = polarmask(&["sweep", "--annotations", &ann, "--out", &out]);
    one_line_error(&o);
    assert!(!Path::new(&out).exists());
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(&dir, "x");
    one_line_error(&polarmask(&[
        "sweep",
        "--annotations",
        "/no/such/file.json",
        "--out",
        &out,
    ]));
    one_line_error(&polarmask(&["sweep", "--out", &out]));
    one_line_error(&polarmask(&[
        "sweep",
        "--synthetic",
        "circles",
        "--n-list",
        "3",
        "--out",
        &out,
    ]));
    one_line_error(&polarmask(&["losscheck", "--n", "2", "--out", &out]));
    one_line_error(&polarmask(&["losscheck", "--lr", "-1", "--out", &out]));
    one_line_error(&polarmask(&[
        "synth", "--kind", "circles", "--count", "0", "--out", &out,
    ]));

    let dets = path(&dir, "dets.json");
    std::fs::write(&dets, "[{\"center\": [1, 2]").unwrap();
    one_line_error(&polarmask(&[
        "pipeline",
        "--detections",
        &dets,
        "--out",
        &out,
    ]));
    std::fs::write(
        &dets,
        r#"[{"center": [1, 2], "rays": [1, 2, 3, 4], "score": 5, "class_id": 0}]"#,
    )
    .unwrap();
    one_line_error(&polarmask(&[
        "pipeline",
        "--detections",
        &dets,
        "--out",
        &out,
    ]));
    std::fs::write(&dets, "[]").unwrap();
    one_line_error(&polarmask(&[
        "pipeline",
        "--detections",
        &dets,
        "--iou-thresh",
        "1.5",
        "--out",
        &out,
    ]));
    assert!(!Path::new(&out).exists());
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec![],
        vec!["frobnicate"],
        vec!["sweep", "--synthetic", "blobs", "--out", "x"],
        vec![
            "sweep",
            "--synthetic",
            "circles",
            "--center",
            "middle",
            "--out",
            "x",
        ],
        vec!["losscheck"],
    ] {
        assert_eq!(polarmask(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn pipeline_output_uses_four_decimals() {
    let dir = tempfile::tempdir().unwrap();
    let dets = path(&dir, "dets.json");
    let out = path(&dir, "out.json");
    std::fs::write(
        &dets,
        r#"[{"center": [10.123456, 20], "rays": [1, 2, 3, 4], "score": 0.9, "class_id": 1},
            {"center": [10.123456, 20], "rays": [1, 2, 3, 4], "score": 0.5, "class_id": 2}]"#,
    )
    .unwrap();
    let o = polarmask(&["pipeline", "--detections", &dets, "--out", &out]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("10.1235"), "{text}");
    assert!(text.starts_with("{\"detections\":["));
    assert_eq!(text.matches("\"class_id\"").count(), 2);

    let o = polarmask(&[
        "pipeline",
        "--detections",
        &dets,
        "--class-agnostic",
        "--out",
        &out,
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.matches("\"class_id\"").count(), 1);
}

#[test]
fn synth_then_sweep_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let ann = path(&dir, "stars.json");
    assert!(
        polarmask(&["synth", "--kind", "stars", "--count", "8", "--seed", "4", "--out", &ann])
            .status
            .success()
    );
    let (a, b) = (path(&dir, "a.csv"), path(&dir, "b.csv"));
    assert!(polarmask(&[
        "sweep",
        "--annotations",
        &ann,
        "--raster-size",
        "64",
        "--out",
        &a
    ])
    .status
    .success());
    assert!(polarmask(&[
        "sweep",
        "--synthetic",
        "stars",
        "--count",
        "8",
        "--seed",
        "4",
        "--raster-size",
        "64",
        "--out",
        &b
    ])
    .status
    .success());
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}
