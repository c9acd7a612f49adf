use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_coloured-neretin"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("coloured-neretin-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

// F = <(1 2)(3 4), (5 6)> on seven colours, swapping the root children 1 and 2
const SWAP: &str = r#"{"d": 6, "F_generators": ["(1 2)(3 4)", "(5 6)"],
 "domain": [[0],[1],[2],[3],[4],[5],[6]], "range": [[0],[2],[1],[3],[4],[5],[6]], "kappa": [0,1,2,3,4,5,6]}"#;

#[test]
fn abelianization_of_two_two_three() {
    let o = run(&["abelianization", "--orbits", "2,2,3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("abelianization: (Z/2)^2"), "{}", stdout(&o));
}

#[test]
fn abelianization_from_generators_agrees_with_orbits() {
    let a = stdout(&run(&["abelianization", "--d", "6", "--gen", "(1 2)(3 4)", "--gen", "(5 6)"]));
    let b = stdout(&run(&["abelianization", "--orbits", "1,2,2,2"]));
    assert_eq!(a, b);
}

#[test]
fn sign_not_well_defined_exits_one() {
    let e = scratch("swap_nf.json", SWAP);
    let o = run(&["sign", e.to_str().unwrap(), "--subset", "5,6", "--target", "nf"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not well defined"));
}

#[test]
fn sign_on_invariant_union_is_odd_transposition() {
    let e = scratch("swap_vf.json", SWAP);
    let class = run(&["sign", e.to_str().unwrap(), "--subset", "1,2,3,4"]);
    assert_eq!(class.status.code(), Some(0));
    assert!(stdout(&class).contains(": -1"));
    let honest = run(&["sign", e.to_str().unwrap(), "--subset", "1,2,3,4", "--honest-depth", "2"]);
    assert!(stdout(&honest).contains(": -1"));
}

#[test]
fn primes_window_seventeen() {
    let o = run(&["primes-window", "--max-m", "17"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("[11, 13, 17]"));
}

#[test]
fn missing_argument_is_usage_error() {
    assert_eq!(run(&["sign"]).status.code(), Some(2));
    assert_eq!(run(&["abelianization", "--orbits", "0,3"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn malformed_element_is_validation_failure() {
    let e = scratch("bad.json", r#"{"d": 2, "domain": [[0],[1],[2]], "range": [[0],[1],[2]], "kappa": [0,0,2]}"#);
    let o = run(&["reduce", e.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn compose_with_inverse_is_identity() {
    let e = scratch("swap_inv.json", SWAP);
    let inv = stdout(&run(&["invert", e.to_str().unwrap()]));
    let i = scratch("swap_inv_out.json", &inv);
    let id = stdout(&run(&["compose", e.to_str().unwrap(), i.to_str().unwrap()]));
    assert!(id.contains(r#""kappa":[0,1,2,3,4,5,6]"#), "{id}");
    assert!(id.contains(r#""range":[[0],[1],[2],[3],[4],[5],[6]]"#), "{id}");
}

#[test]
fn bisection_round_trip() {
    let e = scratch("swap_bis.json", SWAP);
    let reduced = stdout(&run(&["reduce", e.to_str().unwrap()]));
    let b = stdout(&run(&["bisection", e.to_str().unwrap()]));
    let bf = scratch("swap_bis_out.json", &b);
    let back = stdout(&run(&["bisection", bf.to_str().unwrap(), "--d", "6", "--gen", "(1 2)(3 4)", "--gen", "(5 6)"]));
    assert_eq!(back, reduced);
}

#[test]
fn covolume_table_writes_csv() {
    let dir = std::env::temp_dir().join(format!("coloured-neretin-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv = dir.join("table.csv");
    let o = run(&["covolume-table", "--orbits", "2,2", "--max-n", "4", "--csv", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines[0].starts_with("d,orbit_sizes,n,"));
    assert!(lines[1].starts_with("3,2;2,1,4,"));
    assert!(stdout(&o).contains("tends to zero"));
}

#[test]
fn graph_dot_file() {
    let dir = std::env::temp_dir().join(format!("coloured-neretin-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let dot = dir.join("g.dot");
    let o = run(&["graph", "--orbits", "2,1", "--dot", dot.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(std::fs::read_to_string(&dot).unwrap().contains("digraph"));
}

#[test]
fn appendix_counts_small() {
    let o = run(&["appendix-counts", "--d", "2", "--k", "3", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    // root: 3! orderings, then each of 3 children permutes its 2 children
    assert!(stdout(&o).contains("aut_ball: 48"));
}

#[test]
fn output_is_deterministic() {
    let a = run(&["verify-smallest", "--max-d", "6"]);
    let b = run(&["verify-smallest", "--max-d", "6"]);
    assert_eq!(a.stdout, b.stdout);
}
