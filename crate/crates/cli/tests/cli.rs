use std::path::Path;
use std::process::{Command, Output};

fn ek(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ek"))
        .args(args)
        .env_remove("EK_CACHE_DIR")
        .output()
        .expect("run ek")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn field(text: &str, name: &str) -> f64 {
    let prefix = format!("{name} = ");
    text.lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("no {name} in {text}"))
        .parse()
        .unwrap()
}

#[test]
fn compute_small_prime() {
    let o = ek(&["compute", "3"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!((field(&s, "ek") - 0.945_497_280_871_680_7).abs() < 1e-12);
    assert!((field(&s, "mq") - 0.368_281_615_970_147_8).abs() < 1e-12);
}

#[test]
fn compute_rejects_composite() {
    let o = ek(&["compute", "9"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not an odd prime"));
}

#[test]
fn compute_both_methods() {
    let o = ek(&["compute", "2003", "--method", "both"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(field(&s, "method_discrepancy") <= 1e-8);
    assert!((field(&s, "ek") - 5.793_421_369_079_363).abs() < 1e-9);
}

#[test]
fn scan_csv_is_thread_independent() {
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("one.csv");
    let four = dir.path().join("four.csv");
    let a = ek(&["--threads", "1", "scan", "3", "60", "--out", one.to_str().unwrap(), "--with-vq"]);
    let b = ek(&["--threads", "4", "scan", "3", "60", "--out", four.to_str().unwrap(), "--with-vq"]);
    assert!(a.status.success() && b.status.success());
    let text = std::fs::read_to_string(&one).unwrap();
    assert_eq!(text, std::fs::read_to_string(&four).unwrap());

    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "q,ek,ek_plus,ek_diff,mq,mq_odd,mq_even,ek_norm,ek_plus_norm,mq_norm,v_q");
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 16);
    let qs: Vec<u64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert!(qs.windows(2).all(|w| w[0] < w[1]));
    for r in &rows {
        for f in &r[1..] {
            assert_eq!(f.split('.').nth(1).unwrap().len(), 15, "{f}");
        }
    }
}

#[test]
fn scan_rejects_empty_range() {
    assert_eq!(ek(&["scan", "5", "3"]).status.code(), Some(2));
}

#[test]
fn gamma_n_and_vq() {
    let g = stdout(&ek(&["gamma-n", "10"]));
    assert!((g.trim().parse::<f64>().unwrap() - 0.000_205_332_814_909_064_7).abs() < 1e-12);
    let v = stdout(&ek(&["vq", "964477901"]));
    assert!((v.trim().parse::<f64>().unwrap() - 1.236_934_4).abs() < 1e-6);
}

fn precompute(dir: &Path, args: &[&str]) {
    let mut full = vec!["precompute"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--cache", dir.to_str().unwrap()]);
    let o = ek(&full);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn chunked_cache_workflow() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    precompute(d, &["101", "--tag", "S_PAIR", "--range", "0", "20", "--part", "0"]);
    precompute(d, &["101", "--tag", "S_PAIR", "--range", "20", "50", "--part", "1"]);
    precompute(d, &["101", "--tag", "LOGGAMMA"]);
    assert!(d.join("S_PAIR_q101_part1.ekc").exists());

    let o = ek(&["checksum", "101", "--tag", "S_PAIR", "--cache", d.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(field(&stdout(&o), "residual") <= 1e-10);

    let cached = ek(&["compute", "101", "--cache", d.to_str().unwrap()]);
    let fresh = ek(&["compute", "101"]);
    assert_eq!(stdout(&cached), stdout(&fresh));

    let merged = d.join("merged.ekc");
    let o = ek(&[
        "merge",
        d.join("S_PAIR_q101_part1.ekc").to_str().unwrap(),
        d.join("S_PAIR_q101_part0.ekc").to_str().unwrap(),
        "--out",
        merged.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(std::fs::read_to_string(&merged).unwrap().starts_with("EKCACHE 1 q=101 g=2 tag=S_PAIR k0=0 k1=50 digits=19"));
}

#[test]
fn merge_reports_gap() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    precompute(d, &["13", "--tag", "T", "--range", "0", "4", "--part", "0"]);
    precompute(d, &["13", "--tag", "T", "--range", "5", "12", "--part", "1"]);
    let o = ek(&[
        "merge",
        d.join("T_q13_part0.ekc").to_str().unwrap(),
        d.join("T_q13_part1.ekc").to_str().unwrap(),
        "--out",
        d.join("m.ekc").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("gap at k=4"));
}

#[test]
fn checksum_without_cache_and_corrupted_cache() {
    let o = ek(&["checksum", "101", "--tag", "T"]);
    assert!(o.status.success());
    assert!(field(&stdout(&o), "residual") <= 1e-9);

    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    precompute(d, &["31", "--tag", "PSI"]);
    let path = d.join("PSI_q31_part0.ekc");
    let text = std::fs::read_to_string(&path).unwrap().replacen("tag=PSI", "tag=PSX", 1);
    std::fs::write(&path, text).unwrap();
    let o = ek(&["checksum", "31", "--tag", "PSI", "--cache", d.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("format error"));
}

#[test]
fn stieltjes_offsets_candidates() {
    let s = stdout(&ek(&["stieltjes", "3", "--k-max", "1"]));
    let cell: f64 = s
        .lines()
        .find_map(|l| l.strip_prefix("0,3,"))
        .unwrap()
        .parse()
        .unwrap();
    assert!((cell + 0.173_798_874_588_858_9).abs() < 1e-14);

    let o = stdout(&ek(&["offsets", "5"]));
    let terms: Vec<&str> = o.lines().filter(|l| !l.starts_with('#')).map(|l| l.split(' ').nth(1).unwrap()).collect();
    assert_eq!(terms, ["0", "2", "6", "8", "12"]);

    let c = stdout(&ek(&["candidates", "964477900", "964477902"]));
    assert!(c.contains("964477901,1.2369344"));
    assert_eq!(ek(&["offsets", "0"]).status.code(), Some(2));
}
