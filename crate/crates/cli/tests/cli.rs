use std::process::{Command, Output};

use numwall::tiling::{checkpoint_load, checkpoint_save};

fn numwall(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_numwall"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn first_line(out: &Output) -> String {
    stdout(out).lines().next().unwrap_or("").to_string()
}

fn is_key_values(line: &str) -> bool {
    !line.is_empty()
        && line.split_whitespace().all(|kv| {
            kv.split_once('=')
                .is_some_and(|(k, v)| !k.is_empty() && !v.is_empty())
        })
}

#[test]
fn wall_summary() {
    let out = numwall(&["wall", "--seq", "pf1", "--p", "3", "--len", "1024"]);
    assert!(out.status.success());
    let line = first_line(&out);
    assert!(is_key_values(&line), "{line}");
    assert!(line.contains("max_side=3 unbounded=false"), "{line}");
}

#[test]
fn oracle_and_engine_dumps_agree() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("engine.txt"), dir.path().join("oracle.txt"));
    let base = ["wall", "--seq", "pf1", "--p", "3", "--len", "64", "--dump"];
    let mut engine = base.to_vec();
    engine.push(a.to_str().unwrap());
    let mut oracle = base.to_vec();
    oracle.extend([b.to_str().unwrap(), "--oracle"]);
    assert!(numwall(&engine).status.success());
    assert!(numwall(&oracle).status.success());
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn random_wall_renders() {
    let dir = tempfile::tempdir().unwrap();
    let img = dir.path().join("out.ppm");
    let out = numwall(&[
        "wall",
        "--seq",
        "random:seed=7",
        "--p",
        "5",
        "--len",
        "25",
        "--render",
        img.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(first_line(&out).starts_with("seq=random:seed=7 p=5 len=25 depth=12"));
    let bytes = std::fs::read(img).unwrap();
    assert!(bytes.starts_with(b"P6\n25 15\n255\n"));
}

#[test]
fn spec_files_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("pf1.txt");
    std::fs::write(
        &spec,
        "A -> A B : 0\nB -> C B : 0\nC -> A D : 1\nD -> C D : 1\n",
    )
    .unwrap();
    let out = numwall(&["tile", "--seq", spec.to_str().unwrap(), "--p", "3"]);
    assert!(out.status.success());
    assert!(first_line(&out).starts_with("tiles=390 status=closed"));
}

#[test]
fn verify_fails_on_a_tampered_store() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("pf1.nwts");
    let c = ckpt.to_str().unwrap();
    assert!(
        numwall(&["tile", "--seq", "pf1", "--p", "3", "--checkpoint", c])
            .status
            .success()
    );

    let mut store = checkpoint_load(&ckpt).unwrap();
    let n = store.len() as u32;
    let (a, b) = (2..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .find(|&(a, b)| {
            let (ia, ib) = (store.image_slots(a), store.image_slots(b));
            ia[2] != ib[2] && ia[2] > 1 && ib[2] > 1
        })
        .unwrap();
    let (mut ia, mut ib) = (store.image_slots(a), store.image_slots(b));
    std::mem::swap(&mut ia[2], &mut ib[2]);
    store.set_images(a, ia);
    store.set_images(b, ib);
    checkpoint_save(&store, &ckpt).unwrap();

    let out = numwall(&["verify", "--checkpoint", c, "--threads", "2"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(first_line(&out).ends_with("status=FAIL"));
    assert!(stdout(&out).contains("fails: west="));
}

#[test]
fn verify_needs_a_closed_store() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("open.nwts");
    let c = ckpt.to_str().unwrap();
    let tile = numwall(&[
        "tile",
        "--seq",
        "pf1",
        "--p",
        "3",
        "--checkpoint",
        c,
        "--max-tiles",
        "50",
        "--progress-every",
        "10",
    ]);
    assert!(first_line(&tile).contains("status=stopped"));
    assert_eq!(
        numwall(&["verify", "--checkpoint", c]).status.code(),
        Some(4)
    );
}

#[test]
fn search_outputs() {
    let out = numwall(&["search", "--p", "2", "--max-len", "24", "--window", "2"]);
    assert!(out.status.success());
    assert_eq!(first_line(&out), "p=2 window=2 max_len=24 min_len=14");

    let out = numwall(&["search", "--p", "3", "--max-len", "4", "--window", "2"]);
    assert_eq!(first_line(&out), "p=3 window=2 max_len=4 min_len=none");
    assert!(stdout(&out).contains("witness len=4 seq="));

    let out = numwall(&["search", "--p", "2", "--max-len", "56", "--window", "3"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(first_line(&out).contains("status=budget-exceeded"));
}

#[test]
fn subst_outputs() {
    let out = numwall(&[
        "subst", "--seq", "pf1", "--p", "3", "--poly", "0,1", "--len", "8",
    ]);
    assert_eq!(
        first_line(&out),
        "seq=pf1 p=3 poly=0,1 len=8 coeffs=0,0,1,0,0,1,1,0"
    );
    // (t^2 + 1)^-3 is the only nonzero term among the first three.
    let out = numwall(&[
        "subst", "--seq", "pf1", "--p", "3", "--poly", "1,0,1", "--len", "6",
    ]);
    assert_eq!(
        first_line(&out),
        "seq=pf1 p=3 poly=1,0,1 len=6 coeffs=0,0,0,0,0,1"
    );
    let out = numwall(&[
        "subst", "--seq", "pf1", "--p", "3", "--poly", "-1,1", "--len", "3",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let out = numwall(&[
        "subst", "--seq", "pf1", "--p", "3", "--poly", "5", "--len", "6",
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degree zero"));
}

#[test]
fn usage_errors_exit_4() {
    assert_eq!(numwall(&["wall", "--p", "3"]).status.code(), Some(4));
    assert_eq!(
        numwall(&["wall", "--seq", "pf1", "--p", "4", "--len", "5"])
            .status
            .code(),
        Some(4)
    );
    assert_eq!(
        numwall(&["wall", "--seq", "nope", "--p", "3", "--len", "5"])
            .status
            .code(),
        Some(4)
    );
    assert_eq!(
        numwall(&["tile", "--seq", "random:seed=1", "--p", "3"])
            .status
            .code(),
        Some(4)
    );
    assert_eq!(numwall(&["frobnicate"]).status.code(), Some(4));
    assert_eq!(numwall(&["--help"]).status.code(), Some(0));
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("numwall.toml");
    std::fs::write(&cfg, "seq = \"pf1\"\np = 3\n\n[wall]\nlen = 40\n").unwrap();
    let c = cfg.to_str().unwrap();
    let out = numwall(&["wall", "--config", c]);
    assert!(first_line(&out).starts_with("seq=pf1 p=3 len=40 "));
    let out = numwall(&["--config", c, "wall", "--len", "10"]);
    assert!(first_line(&out).starts_with("seq=pf1 p=3 len=10 "));
    std::fs::write(&cfg, "[wall]\nwindow = 2\n").unwrap();
    assert_eq!(numwall(&["wall", "--config", c]).status.code(), Some(4));
}
