//! Reports are compared byte for byte with files under tests/golden.
//! Set UPDATE_GOLDEN=1 to rewrite them.

use std::path::{Path, PathBuf};
use std::process::Command as Proc;
use troplift_cli::{run, Command, Outcome, Selection};

fn data(f: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(f)
}

fn transcript(o: &Outcome) -> String {
    let mut s = o.text.clone();
    if let Some(e) = &o.error {
        s.push_str(&format!("error: {e}\n"));
    }
    s.push_str(&format!("exit {}\n", o.code));
    s
}

fn check(name: &str, got: &str) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, got).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(got, want, "golden {name} differs");
}

fn case(name: &str, cmd: Command, files: &[&str], sel: Selection) -> Outcome {
    let paths: Vec<PathBuf> = files.iter().map(|f| data(f)).collect();
    let o = run(cmd, &paths, &sel);
    check(&format!("{name}.txt"), &transcript(&o));
    o
}

fn sel() -> Selection {
    Selection::default()
}

#[test]
fn lift_p1p1() {
    let o = case("lift_p1p1", Command::Lift, &["p1p1.json"], Selection { ty: Some("tau".into()), ..sel() });
    assert_eq!(o.code, 0);
    check("lift_p1p1.json", o.json.as_deref().unwrap());
}

#[test]
fn lift_tau_prime() {
    let o = case("lift_tau_prime", Command::Lift, &["p1p1.json"], Selection { ty: Some("tau-prime".into()), ..sel() });
    assert_eq!(o.code, 0);
}

#[test]
fn lift_identity() {
    let s = Selection { ty: Some("tau".into()), subdivision: Some("identity".into()), ..sel() };
    let o = case("lift_identity", Command::Lift, &["p1p1.json", "identity.json"], s);
    assert!(o.text.contains("lifts: 1\n") && o.text.contains("m = 1"));
}

#[test]
fn lift_errors() {
    let s = Selection { ty: Some("stuck".into()), ..sel() };
    assert_eq!(case("lift_unrealizable", Command::Lift, &["p1p1.json", "unrealizable.json"], s).code, 2);
    let o = case("validate_corrupt", Command::Validate, &["corrupt_fan.json"], sel());
    assert_eq!(o.code, 3);
    assert!(o.error.unwrap().contains("non-face intersection"));
    assert!(o.text.is_empty());
}

#[test]
fn index_crossing() {
    assert_eq!(case("index_crossing", Command::Index, &["crossing.json"], sel()).code, 0);
}

#[test]
fn validate_all() {
    let files = ["p1p1.json", "classes.json", "monoids.json", "maps.json", "walls.json", "fig4.json", "cone.json"];
    assert_eq!(case("validate_all", Command::Validate, &files, sel()).code, 0);
}

#[test]
fn subdivisions() {
    let m = |n: &str| Selection { map: Some(n.into()), ..sel() };
    case("pull_straddle", Command::PullSub, &["p1p1.json", "maps.json"], m("straddle-in"));
    case("pull_inside", Command::PullSub, &["p1p1.json", "maps.json"], m("inside-in"));
    case("push_roof", Command::PushSub, &["p1p1.json", "maps.json"], m("forget-z"));
}

#[test]
fn monoids_and_hilbert() {
    case("hilbert_wedge", Command::Hilbert, &["cone.json"], sel());
    case("monoid_misc", Command::Monoid, &["monoids.json"], sel());
    let o = case("monoid_fig4", Command::Monoid, &["fig4.json"], Selection { grid: Some((-2, 4)), ..sel() });
    assert_eq!(o.code, 0);
}

#[test]
fn walls() {
    let t = |n: &str| Selection { ty: Some(n.into()), ..sel() };
    assert_eq!(case("wall_primitive", Command::Wall, &["p1p1.json", "walls.json"], t("primitive-wall")).code, 0);
    assert_eq!(case("wall_double", Command::Wall, &["p1p1.json", "walls.json"], t("double-wall")).code, 0);
    assert_eq!(case("wall_two_legs", Command::Wall, &["p1p1.json", "walls.json"], t("two-legs")).code, 2);
}

#[test]
fn scatter_push() {
    let files = ["p1p1.json", "classes.json", "scatter_up.json", "scatter_ref.json"];
    let o = case("scatter_equivalent", Command::ScatterPush, &files, sel());
    assert!(o.text.contains("equivalent to reference") && o.code == 0);
    let files = ["p1p1.json", "classes.json", "scatter_up.json", "scatter_bad.json"];
    let o = case("scatter_perturbed", Command::ScatterPush, &files, sel());
    assert!(o.text.contains("inequivalent") && o.text.contains("witness") && o.code == 2);
}

#[test]
fn scatter_identity_echo() {
    // pushing along the identity subdivision and identity classes returns the input
    let up = r#"{"kind":"diagram","name":"d","fan":"P1xP1-copy","classes":"Q","ideal":"I","walls":[
        {"support":[[1,0]],"direction":[1,0],"exp":{"k":2,"n":"1/3","u":[1,0],"class":[1]}}]}"#;
    let id = r#"{"kind":"hom","name":"id","source":"Q","target":"Q","matrix":[[1]]}"#;
    let classes = r#"[{"kind":"monoid","name":"Q","ambient":1,"generators":[[1]]},
        {"kind":"ideal","name":"I","monoid":"Q","generators":[[2]]}]"#;
    let ws = troplift_cli::Workspace::from_json(&[
        &std::fs::read_to_string(data("p1p1.json")).unwrap(),
        &std::fs::read_to_string(data("identity.json")).unwrap(),
        classes,
        up,
        id,
    ])
    .unwrap();
    let s = Selection { subdivision: Some("identity".into()), ..sel() };
    let r = troplift_cli::cmd_scatter_push(&ws, &s).unwrap();
    assert_eq!(r.walls.len(), 1);
    let w = &r.walls[0];
    assert_eq!(w.support, vec![vec![1, 0]]);
    let terms: Vec<(Vec<i64>, String)> = w.terms.iter().map(|t| (t.m.clone(), t.c.clone())).collect();
    assert_eq!(terms, vec![(vec![-1, 0], "2/3".to_string()), (vec![0, 0], "1".to_string())]);
}

#[test]
fn mirror_check() {
    let o = case("mirror_pass", Command::MirrorCheck, &["classes.json", "mirror.json"], sel());
    assert_eq!(o.code, 0);
    let o = case("mirror_fail", Command::MirrorCheck, &["classes.json", "mirror_bad.json"], sel());
    assert_eq!(o.code, 2);
    assert_eq!(o.text.matches("N[").count(), 1);
    assert_eq!(case("mirror_empty", Command::MirrorCheck, &["classes.json", "mirror_empty.json"], sel()).code, 0);
}

#[test]
fn mirror_ideal_mismatch_exits_4() {
    let bad = std::fs::read_to_string(data("mirror.json")).unwrap().replace(r#""ideal": "J""#, r#""ideal": "Jbig""#);
    let extra = r#"{"kind":"ideal","name":"Jbig","monoid":"Qp","generators":[[1,0],[0,1]]}"#;
    let ws = troplift_cli::Workspace::from_json(&[&std::fs::read_to_string(data("classes.json")).unwrap(), &bad, extra])
        .unwrap();
    let o = troplift_cli::run_on(Command::MirrorCheck, &ws, &sel());
    assert_eq!(o.code, 4, "{o:?}");
}

#[test]
fn reports_are_reproducible() {
    let files: Vec<PathBuf> = ["p1p1.json"].iter().map(|f| data(f)).collect();
    let s = Selection { ty: Some("tau-prime".into()), ..sel() };
    let a = run(Command::Lift, &files, &s);
    let b = run(Command::Lift, &files, &s);
    assert_eq!(a, b);
}

#[test]
fn binary_end_to_end() {
    let out = std::env::temp_dir().join(format!("troplift-golden-{}.json", std::process::id()));
    let st = Proc::new(env!("CARGO_BIN_EXE_troplift"))
        .args(["lift", data("p1p1.json").to_str().unwrap(), "--type", "tau", "--out", out.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&st.stdout).contains("lifts: 2"));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(json["lifts"].as_array().unwrap().len(), 2);
    let _ = std::fs::remove_file(&out);

    let st = Proc::new(env!("CARGO_BIN_EXE_troplift")).args(["validate", data("corrupt_fan.json").to_str().unwrap()]).output().unwrap();
    assert_eq!(st.status.code(), Some(3));
    assert!(st.stdout.is_empty());
    assert!(String::from_utf8_lossy(&st.stderr).contains("non-face intersection"));
}
