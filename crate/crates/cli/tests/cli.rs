use std::fs;
use std::process::{Command, Output};

use chromatope::cover::{CellComplex, CoverFile, LabeledSet, PolytopeSource};
use chromatope::polytope::descriptor;
use serde_json::Value;

fn chromatope(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chromatope")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn error_kind(out: &Output) -> String {
    let text = String::from_utf8_lossy(&out.stderr);
    let line = text.lines().last().expect("stderr envelope");
    let v: Value = serde_json::from_str(line).expect("envelope is JSON");
    v["error"]["kind"].as_str().unwrap().to_string()
}

#[test]
fn integrate_the_cube_vertex_sum() {
    let out = chromatope(&["ring", "integrate", "--builder", "cube:3", "--class", "(v1+v2+v3)^3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["value"], 6);
}

#[test]
fn normal_form_of_a_square_is_zero() {
    let out = chromatope(&["ring", "normal-form", "--builder", "cube:3", "--class", "v1^2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["normal_form"], "0");
}

#[test]
fn simplex_has_no_three_coloring() {
    let out = chromatope(&["polytope", "color", "--builder", "simplex:3", "--colors", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["coloring"].is_null());
    let out = chromatope(&["polytope", "color", "--builder", "simplex:3"]);
    assert_eq!(json(&out)["colors"], 4);
}

#[test]
fn fuzz_square_partitions() {
    let dir = tempfile::tempdir().unwrap();
    let repro = dir.path().join("repro");
    let out = chromatope(&[
        "cover",
        "fuzz",
        "--builder",
        "cube:2",
        "--profile",
        "partition",
        "--trials",
        "100",
        "--seed",
        "7",
        "--repro-dir",
        repro.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["witnesses_found"], 100);
    assert_eq!(v["absences"].as_array().unwrap().len(), 0);
    assert!(!repro.exists());
}

#[test]
fn identical_runs_give_identical_bytes() {
    let args = ["cover", "fuzz", "--builder", "hexagon", "--profile", "random-growth", "--trials", "40", "--seed", "3"];
    assert_eq!(chromatope(&args).stdout, chromatope(&args).stdout);
    let args = ["hex", "simulate", "--builder", "hexagon", "--sites", "random:20:4", "--games", "5", "--seed", "2"];
    assert_eq!(chromatope(&args).stdout, chromatope(&args).stdout);
}

#[test]
fn build_round_trips_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("p.json");
    let second = dir.path().join("q.json");
    let built = chromatope(&["polytope", "build", "--builder", "cube:3/trunc:0", "--out", first.to_str().unwrap()]);
    assert_eq!(built.status.code(), Some(0));
    let again =
        chromatope(&["polytope", "build", "--input", first.to_str().unwrap(), "--out", second.to_str().unwrap()]);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(fs::read(&first).unwrap(), fs::read(&second).unwrap());
    let faces = chromatope(&["polytope", "faces", "--input", first.to_str().unwrap(), "--dim", "0"]);
    assert_eq!(json(&faces)["count"], 10);
}

#[test]
fn validate_reports_simplicity() {
    let out = chromatope(&["polytope", "validate", "--builder", "octahedron"]);
    let v = json(&out);
    assert_eq!(v["simple"], false);
    assert_eq!(v["vertices"], 6);
}

fn slab_file(dir: &std::path::Path, slabs: usize) -> std::path::PathBuf {
    let b = descriptor::build::<f64>("cube:3").unwrap();
    let complex = CellComplex::build(&b.realization, 6).unwrap();
    let sets = (0..slabs)
        .map(|i| LabeledSet {
            label: format!("X{}", i + 1),
            cells: (0..complex.num_cells())
                .filter(|&c| (complex.cell(c).centroid[0] * slabs as f64).floor() as usize == i)
                .collect(),
        })
        .collect();
    let file = CoverFile { polytope: PolytopeSource::Named("cube:3".into()), grid: 6, sets };
    let path = dir.join("slabs.json");
    fs::write(&path, file.to_json()).unwrap();
    path
}

#[test]
fn verify_slabs_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let path = slab_file(dir.path(), 3);
    let out = chromatope(&["cover", "verify", "--cover", path.to_str().unwrap(), "--theorem", "lebesgue"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["sound"], true);
    assert_eq!(v["witness"]["kind"], "same_color_pair");
    assert_eq!(v["witness"]["color"], 1);

    // kkm needs an (n+1)-coloring; the cube's is a 3-coloring
    let out = chromatope(&["cover", "verify", "--cover", path.to_str().unwrap(), "--theorem", "kkm"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_kind(&out), "hypothesis_violation");
}

#[test]
fn usage_and_malformed_input_exit_two() {
    let out = chromatope(&["cover", "frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_kind(&out), "usage");

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{ not json").unwrap();
    let out = chromatope(&["cover", "verify", "--cover", bad.to_str().unwrap(), "--theorem", "lebesgue"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_kind(&out), "malformed_input");

    let out = chromatope(&["polytope", "build", "--builder", "dodecahedron"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn excess_multiplicity_is_a_hypothesis_violation() {
    let dir = tempfile::tempdir().unwrap();
    let b = descriptor::build::<f64>("cube:2").unwrap();
    let complex = CellComplex::build(&b.realization, 4).unwrap();
    // one label per cell: four labels meet at every interior grid point
    let sets = (0..complex.num_cells()).map(|c| LabeledSet { label: format!("c{c}"), cells: vec![c] }).collect();
    let file = CoverFile { polytope: PolytopeSource::Named("cube:2".into()), grid: 4, sets };
    let path = dir.path().join("cells.json");
    fs::write(&path, file.to_json()).unwrap();
    let out = chromatope(&["cover", "verify", "--cover", path.to_str().unwrap(), "--theorem", "lebesgue"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_kind(&out), "hypothesis_violation");
    assert!(out.stdout.is_empty());
}

#[test]
fn hex_no_tie_sweeps() {
    let out = chromatope(&[
        "hex",
        "no-tie",
        "--builder",
        "hexagon",
        "--sites",
        "random:20:1",
        "--trials",
        "100",
        "--instrument",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["ties"].as_array().unwrap().len(), 0);
    assert_eq!(v["mismatches"].as_array().unwrap().len(), 0);
    let total: u64 = v["wins"].as_object().unwrap().values().map(|x| x.as_u64().unwrap()).sum();
    assert_eq!(total, 100);
}
