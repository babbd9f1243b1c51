use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn hcwres(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hcwres"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn has_line(o: &Output, line: &str) -> bool {
    stdout(o).lines().any(|l| l == line)
}

fn path(p: &PathBuf) -> &str {
    p.to_str().unwrap()
}

#[test]
fn resolve_reports_total_betti_numbers() {
    let rp2 = fixture("rp2.ideal");
    let o = hcwres(&["resolve", path(&rp2), "--char", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(has_line(&o, "betti: 10 15 7 1"));

    let o = hcwres(&["resolve", path(&rp2)]);
    assert!(has_line(&o, "betti: 10 15 6"));

    let o = hcwres(&["resolve", path(&fixture("m.ideal")), "--char", "0"]);
    assert!(has_line(&o, "betti: 5 6 2"));

    let single = scratch("single.ideal", "x*y\n");
    assert!(has_line(&hcwres(&["resolve", path(&single)]), "betti: 1"));
}

#[test]
fn hcwify_counts_added_relations() {
    let o = hcwres(&["hcwify", path(&fixture("rp2.ideal")), "--char", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(has_line(&o, "added_relations: 1"));
    assert!(has_line(&o, "hcw: true"));

    let koszul = scratch("koszul.ideal", "vars: x y z\nx\ny\nz\n");
    assert!(has_line(&hcwres(&["hcwify", path(&koszul)]), "added_relations: 0"));

    for f in ["m_basis1.json", "m_basis2.json"] {
        let o = hcwres(&["hcwify", path(&fixture(f))]);
        assert!(has_line(&o, "added_relations: 0"), "{f}");
        assert!(has_line(&o, "hcw: true"), "{f}");
    }
}

#[test]
fn hcwify_dot_marks_the_new_relation() {
    let o = hcwres(&["hcwify", path(&fixture("rp2_complex.json")), "--dot"]);
    assert_eq!(o.status.code(), Some(0));
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("style=dashed").count(), 1);
}

#[test]
fn verify_passes_on_the_fixture_ideals() {
    let o = hcwres(&["verify", path(&fixture("rp2.ideal")), "--char", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(has_line(&o, "failed_checks: 0"));
    assert!(!stdout(&o).contains("FAIL"));

    let triangle = scratch("triangle.ideal", "x*y\nx*z\ny*z\n");
    let o = hcwres(&["verify", path(&triangle), "--char", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(has_line(&o, "rigid: false"));
    assert!(has_line(&o, "betti_poset_hcw: false"));
    assert!(has_line(&o, "failed_checks: 0"));

    for f in ["m_basis1.json", "m_basis2.json", "rp2_complex.json"] {
        let o = hcwres(&["verify", path(&fixture(f))]);
        assert_eq!(o.status.code(), Some(0), "{f}: {}", stdout(&o));
    }
}

#[test]
fn verify_detects_a_sign_error() {
    let text = std::fs::read_to_string(fixture("m_basis1.json")).unwrap();
    let mut json: serde_json::Value = serde_json::from_str(&text).unwrap();
    let entry = &mut json["matrices"][1][0]["scalar"];
    let flipped = -entry.as_i64().expect("integer scalar");
    *entry = flipped.into();
    let bad = scratch("m_sign_error.json", &serde_json::to_string(&json).unwrap());
    let o = hcwres(&["verify", path(&bad)]);
    assert_ne!(o.status.code(), Some(0));
    assert!(
        stdout(&o).lines().any(|l| l.starts_with("complex: ∂∘∂ ≠ 0")),
        "{}",
        stdout(&o)
    );
    assert!(has_line(&o, "failed_checks: 1"));
}

#[test]
fn rigid_and_betti_poset() {
    let o = hcwres(&["rigid", path(&fixture("m.ideal"))]);
    assert!(has_line(&o, "rigid: false"));
    assert!(has_line(&o, "rigid_iff_hcw: pass"));
    let koszul = scratch("koszul2.ideal", "1 0\n0 1\n");
    let o = hcwres(&["rigid", path(&koszul)]);
    assert!(has_line(&o, "rigid: true"));
    assert!(has_line(&o, "betti_poset_hcw: true"));
    let o = hcwres(&["betti-poset", path(&koszul), "--json"]);
    let p: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(p["elements"].as_array().unwrap().len(), 3);
}

#[test]
fn poset_files_round_trip_through_the_commands() {
    let o = hcwres(&["incidence", path(&fixture("rp2_complex.json")), "--json"]);
    let poset = scratch("rp2_incidence.json", &stdout(&o));
    let o = hcwres(&["hcwify", path(&poset), "--char", "2"]);
    assert!(has_line(&o, "added_relations: 1"), "{}", stdout(&o));
    let o = hcwres(&["conic", path(&poset), "--char", "2"]);
    assert!(has_line(&o, "ranks: 10 15 7 1"));
    assert!(has_line(&o, "supports_resolution: true"));
    let o = hcwres(&["verify", path(&poset), "--char", "2"]);
    assert!(has_line(&o, "hcw: false"));
    assert!(has_line(&o, "failed_checks: 0"));
}

#[test]
fn output_is_deterministic() {
    let (rp2, m) = (fixture("rp2.ideal"), fixture("m.ideal"));
    let args = ["hcwify", path(&rp2), "--char", "2", "--json"];
    let (a, b) = (hcwres(&args), hcwres(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let args = ["resolve", path(&m), "--json"];
    assert_eq!(hcwres(&args).stdout, hcwres(&args).stdout);
}

#[test]
fn exit_codes() {
    let bad = scratch("bad.ideal", "x*y\n1 0\n");
    assert_eq!(hcwres(&["resolve", path(&bad)]).status.code(), Some(2));
    assert_eq!(hcwres(&["resolve", "/nonexistent/file"]).status.code(), Some(2));
    let rp2 = fixture("rp2.ideal");
    assert_eq!(hcwres(&["resolve", path(&rp2), "--char", "4"]).status.code(), Some(2));
    let complex = fixture("rp2_complex.json");
    assert_eq!(
        hcwres(&["resolve", path(&complex), "--char", "3"]).status.code(),
        Some(2)
    );
    assert_eq!(hcwres(&["resolve", path(&rp2), "--dot"]).status.code(), Some(2));

    let many: String = (1..=17).map(|i| format!("x{i}\n")).collect();
    let big = scratch("big.ideal", &many);
    let o = hcwres(&["resolve", path(&big)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap"));
}
