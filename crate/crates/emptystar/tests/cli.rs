//! CLI behavior: exit codes, output formats, and byte-level determinism
//! (acceptance criterion 12).

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_emptystar"))
}

fn tmp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("emptystar-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_square_file(path: &Path) {
    std::fs::write(path, "2 4\n0 0\n1 0\n1 1\n0 1\n").unwrap();
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

#[test]
fn analyze_square_corners() {
    let dir = tmp_dir("analyze");
    let input = dir.join("square.txt");
    write_square_file(&input);
    let out = run(&["analyze", "--input", input.to_str().unwrap(), "--k", "2"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["total"], 4);
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["witness_max"][1], 2);
    assert_eq!(v["per_vertex_degree"], serde_json::json!([3, 3, 3, 3]));
}

#[test]
fn analyze_triangle_centroid_k1() {
    let dir = tmp_dir("analyze-k1");
    let input = dir.join("tc.txt");
    std::fs::write(&input, "2 4\n0 0\n3 0\n0 3\n1 1\n").unwrap();
    let out = run(&["analyze", "--input", input.to_str().unwrap(), "--k", "1"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["total"], 3);
    assert_eq!(v["witness_max"][0], serde_json::json!({"indices": [3]}));
    assert_eq!(v["witness_max"][1], 3);
}

#[test]
fn analyze_degenerate_exits_2_naming_subset() {
    let dir = tmp_dir("degenerate");
    let input = dir.join("collinear.txt");
    std::fs::write(&input, "2 4\n0 0\n1 1\n2 2\n0 1\n").unwrap();
    let out = run(&["analyze", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("[0, 1, 2]"), "stderr was: {msg}");
}

#[test]
fn gen_then_analyze_round_trips() {
    let dir = tmp_dir("genroundtrip");
    let file = dir.join("pts.txt");
    let out = run(&[
        "gen", "--body", "disk", "--dim", "2", "--n", "25", "--seed", "5", "--out",
        file.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = run(&["analyze", "--input", file.to_str().unwrap(), "--k", "2"]);
    assert!(out.status.success(), "generated file should analyze cleanly");
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["n"], 25);
    assert!(v["total"].as_u64().unwrap() > 0);
}

#[test]
fn gen_rejects_n_zero_and_overwrite() {
    let dir = tmp_dir("genguards");
    let file = dir.join("pts.txt");
    let out = run(&[
        "gen", "--body", "disk", "--dim", "2", "--n", "0", "--seed", "1", "--out",
        file.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    // First write succeeds, second without --force is refused.
    assert!(run(&[
        "gen", "--body", "disk", "--dim", "2", "--n", "5", "--seed", "1", "--out",
        file.to_str().unwrap(),
    ])
    .status
    .success());
    let out = run(&[
        "gen", "--body", "disk", "--dim", "2", "--n", "5", "--seed", "1", "--out",
        file.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(run(&[
        "gen", "--body", "disk", "--dim", "2", "--n", "5", "--seed", "1", "--out",
        file.to_str().unwrap(), "--force",
    ])
    .status
    .success());
}

#[test]
fn gen_same_seed_identical_bytes() {
    let dir = tmp_dir("gendet");
    let (a, b) = (dir.join("a.txt"), dir.join("b.txt"));
    for f in [&a, &b] {
        assert!(run(&[
            "gen", "--body", "ellipse:2,1", "--dim", "2", "--n", "40", "--seed", "9", "--out",
            f.to_str().unwrap(),
        ])
        .status
        .success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn sweep_missing_gamma_exits_2() {
    let dir = tmp_dir("badflags");
    let out = run(&[
        "sweep", "--quantity", "n-gamma", "--body", "square", "--dim", "2", "--n", "50",
        "--trials", "2", "--seed", "1", "--out",
        dir.join("x").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_body_dim_mismatch_exits_2() {
    let dir = tmp_dir("dimmismatch");
    let out = run(&[
        "sweep", "--quantity", "empty-count", "--body", "disk", "--dim", "3", "--n", "30",
        "--trials", "1", "--seed", "1", "--out",
        dir.join("x").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn constants_dim2_and_dim3() {
    let out = run(&["constants", "--dim", "2"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["lower_c"], 1.0);
    assert!((v["upper_c"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert!((v["planar_deg_c"].as_f64().unwrap() - 0.11157).abs() < 1e-5);

    let out = run(&["constants", "--dim", "3"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["upper_c"].as_f64().unwrap() - 3.3841).abs() < 5e-3);
    assert!((v["lower_c"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-15);
}

#[test]
fn integral_disk_m3_matches_closed_form() {
    let out = run(&[
        "integral", "--body", "disk", "--m", "3", "--samples", "200000", "--seed", "3",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let mean = v["mean"].as_f64().unwrap();
    let closed = v["closed_form"].as_f64().unwrap();
    assert!((closed - 3.0 * std::f64::consts::PI).abs() < 1e-12);
    assert!((mean - closed).abs() < 0.05 * closed);
}

#[test]
fn star_svg_spike_count_matches_analyze() {
    let dir = tmp_dir("svg");
    let input = dir.join("pts.txt");
    assert!(run(&[
        "gen", "--body", "square", "--dim", "2", "--n", "25", "--seed", "31", "--out",
        input.to_str().unwrap(),
    ])
    .status
    .success());
    let analyze = run(&["analyze", "--input", input.to_str().unwrap(), "--k", "2"]);
    let v: serde_json::Value = serde_json::from_slice(&analyze.stdout).unwrap();
    let degree = v["witness_max"][1].as_u64().unwrap();

    let svg_path = dir.join("star.svg");
    assert!(run(&[
        "star-svg", "--input", input.to_str().unwrap(), "--k", "2", "--out",
        svg_path.to_str().unwrap(),
    ])
    .status
    .success());
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert_eq!(svg.matches("<polygon").count() as u64, degree);
    assert!(svg.contains(&format!("degree={degree}")));
}

#[test]
fn analyze_deg2_matches_library_on_25_point_file() {
    let dir = tmp_dir("deg2match");
    let input = dir.join("pts.txt");
    assert!(run(&[
        "gen", "--body", "disk", "--dim", "2", "--n", "25", "--seed", "17", "--out",
        input.to_str().unwrap(),
    ])
    .status
    .success());
    let out = run(&["analyze", "--input", input.to_str().unwrap(), "--k", "2"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let cli_degree = v["witness_max"][1].as_u64().unwrap();

    let ps = emptystar::geom::io::load_point_set(&input).unwrap();
    let (lib_degree, _) = emptystar::enumerate::deg_k_max(&ps, 2).unwrap();
    assert_eq!(cli_degree, lib_degree);
    // The witness star drawn in the report has exactly degree-many spikes.
    assert_eq!(
        v["witness_star"].as_array().unwrap().len() as u64,
        lib_degree
    );
}

#[test]
fn star_svg_rejects_non_planar() {
    let dir = tmp_dir("svg3d");
    let input = dir.join("pts3.txt");
    std::fs::write(&input, "3 4\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n").unwrap();
    let out = run(&[
        "star-svg", "--input", input.to_str().unwrap(), "--k", "1", "--out",
        dir.join("x.svg").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_trials_1_matches_analyze_total() {
    // A one-trial sweep on the same substream reproduces analyze on the
    // generated instance.
    let dir = tmp_dir("sweepanalyze");
    let out = run(&[
        "sweep", "--quantity", "empty-count", "--body", "square", "--dim", "2", "--n", "30",
        "--trials", "1", "--seed", "77", "--out",
        dir.join("s").to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let normalized = v["summaries"][0]["mean"].as_f64().unwrap();
    let total = normalized * 30.0 * 30.0;

    // Reproduce the instance through the library's substream allocation.
    let body = emptystar::bodies::ConvexBody::cube(2, 1.0).unwrap();
    let mut rng =
        emptystar::rng::RngStream::new(77, emptystar::rng::stream_id(0, 0));
    let ps = body.sample_uniform(&mut rng, 30).unwrap();
    let rep = emptystar::enumerate::count_empty_simplices(&ps, None).unwrap();
    assert_eq!(total.round() as u64, rep.total);
}

#[test]
fn polygon_body_end_to_end() {
    let dir = tmp_dir("polygon");
    let poly = dir.join("tri.poly");
    std::fs::write(&poly, "polygon 3\n0 0\n2 0\n1 1.5\n").unwrap();
    let pts = dir.join("pts.txt");
    let spec = format!("polygon:{}", poly.display());
    assert!(run(&[
        "gen", "--body", &spec, "--dim", "2", "--n", "30", "--seed", "4", "--out",
        pts.to_str().unwrap(),
    ])
    .status
    .success());
    let out = run(&["analyze", "--input", pts.to_str().unwrap(), "--k", "2"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["total"].as_u64().unwrap() > 0);
    // Sweep over the polygon body works too.
    let sweep_out = dir.join("s");
    assert!(run(&[
        "sweep", "--quantity", "empty-count", "--body", &spec, "--dim", "2", "--n", "20",
        "--trials", "3", "--seed", "4", "--out",
        sweep_out.to_str().unwrap(),
    ])
    .status
    .success());
}

#[test]
fn determinism_criterion_12() {
    let dir = tmp_dir("det12");
    let mut outputs: Vec<Vec<u8>> = Vec::new();
    for (run_id, threads) in [("a", "1"), ("b", "2")] {
        let prefix = dir.join(format!("sweep-{run_id}"));
        let status = bin()
            .env("EMPTYSTAR_THREADS", threads)
            .args([
                "sweep", "--quantity", "empty-count", "--body", "disk", "--dim", "2", "--n",
                "20,40", "--trials", "8", "--seed", "123", "--out",
                prefix.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert!(status.status.success());
        let mut blob = std::fs::read(prefix.with_extension("csv")).unwrap();
        blob.extend(std::fs::read(prefix.with_extension("json")).unwrap());
        blob.extend(status.stdout);
        outputs.push(blob);
    }
    assert_eq!(
        outputs[0], outputs[1],
        "sweep outputs differ across reruns/thread counts"
    );

    // SVG determinism.
    let input = dir.join("pts.txt");
    assert!(run(&[
        "gen", "--body", "disk", "--dim", "2", "--n", "20", "--seed", "3", "--out",
        input.to_str().unwrap(),
    ])
    .status
    .success());
    let mut svgs = Vec::new();
    for run_id in ["a", "b"] {
        let path = dir.join(format!("star-{run_id}.svg"));
        assert!(run(&[
            "star-svg", "--input", input.to_str().unwrap(), "--k", "1", "--out",
            path.to_str().unwrap(),
        ])
        .status
        .success());
        svgs.push(std::fs::read(path).unwrap());
    }
    assert_eq!(svgs[0], svgs[1], "SVG outputs differ across reruns");

    // Integral stdout determinism.
    let mut jsons = Vec::new();
    for threads in ["1", "2"] {
        let out = bin()
            .env("EMPTYSTAR_THREADS", threads)
            .args(["integral", "--body", "disk", "--m", "3", "--samples", "100000", "--seed", "1"])
            .output()
            .unwrap();
        assert!(out.status.success());
        jsons.push(out.stdout);
    }
    assert_eq!(jsons[0], jsons[1], "integral output differs across thread counts");

    println!("criterion 12 (byte-identical CLI outputs): PASS — CSV/JSON/SVG identical across reruns and thread counts");
}
