use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "netmap", "data", name]
        .iter()
        .collect();
    path.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netmap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    stdout(&out)
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("netmap-cli-{}-{name}", std::process::id()))
}

#[test]
fn analyze_single_slope() {
    let main = data("main.net");
    assert_eq!(
        ok(&["analyze", &main, "--slope", "1/4"]),
        "d=5 d'=2 c=(0,0,2,2) ess=2 per=0 null=0 delta=2/5\n"
    );
}

#[test]
fn analyze_table_has_eight_rows() {
    let main = data("main.net");
    let text = ok(&["analyze", &main, "--table"]);
    assert_eq!(text.lines().count(), 8);
    assert!(text
        .lines()
        .any(|l| l.ends_with("1/8: d=1 d'=10 c=(0,0,2,2) ess=2 per=0 null=8 delta=2")));
    let csv = ok(&["analyze", &main, "--table", "--format", "csv"]);
    assert_eq!(csv.lines().count(), 9);
    assert!(csv.starts_with(
        "q mod 20,2p+q mod 5,slope,d,d',c1,c2,c3,c4,essential,peripheral,null,delta\n"
    ));
    assert!(csv.contains("\"±2\",\"0\",-1/2,1,10,0,2,8,10,6,4,0,6\n"));
}

#[test]
fn invalid_presentation_exits_2_naming_the_invariant() {
    let text = std::fs::read_to_string(data("main.net")).unwrap().replace(
        "correspondence = (2,-1) (0,5)",
        "correspondence = (4,-2) (0,5)",
    );
    let path = temp_path("bad.net");
    std::fs::write(&path, text).unwrap();
    let out = run(&["analyze", path.to_str().unwrap(), "--slope", "1/4"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(2));
    assert!(
        String::from_utf8_lossy(&out.stderr).contains("correspondence is not a basis of lambda1")
    );
}

#[test]
fn bad_arguments_exit_2() {
    let main = data("main.net");
    assert_eq!(run(&["slope", &main, "1/x"]).status.code(), Some(2));
    assert_eq!(
        run(&["slope", "/nonexistent/file.net", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["nonsep", "4,6", "--search"]).status.code(), Some(2));
    assert_eq!(run(&["analyze", &main]).status.code(), Some(2));
}

#[test]
fn slope_values() {
    let main = data("main.net");
    assert_eq!(ok(&["slope", &main, "1/4"]), "1/2\n");
    assert_eq!(ok(&["slope", &main, "3/2"]), "1\n");
    assert_eq!(ok(&["slope", &main, "inf"]), "inf\n");
    assert_eq!(ok(&["slope", &data("double.net"), "1/3"]), "o\n");
}

#[test]
fn slope_graph_csv() {
    let main = data("main.net");
    let csv = ok(&["slope", &main, "--graph", "6"]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("slope,value,sigma,sigma_value"));
    let rows: Vec<&str> = lines.collect();
    assert!(rows.contains(&"3/2,1.500000,1,1.000000"));
    assert!(rows.contains(&"1/4,0.250000,1/2,0.500000"));
    assert_eq!(rows.last(), Some(&"inf,inf,inf,inf"));
    // Deterministic output.
    assert_eq!(csv, ok(&["slope", &main, "--graph", "6"]));
}

#[test]
fn obstructions_main_example() {
    let main = data("main.net");
    let svg = temp_path("cover.svg");
    let text = ok(&[
        "obstructions",
        &main,
        "--height",
        "20",
        "--budget",
        "8",
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(text.lines().next(), Some("UNOBSTRUCTED (6 half-spaces)"));
    let picture = std::fs::read_to_string(&svg).unwrap();
    std::fs::remove_file(&svg).ok();
    let outlines = picture
        .split("<g fill=\"none\"")
        .nth(1)
        .unwrap()
        .split("</g>")
        .next()
        .unwrap();
    assert_eq!(
        outlines.matches("<circle").count() + outlines.matches("<line").count(),
        6
    );
    assert!(ok(&["obstructions", &main, "--budget", "1"]).starts_with("INCONCLUSIVE"));
}

#[test]
fn obstructions_with_given_slopes() {
    let main = data("main.net");
    let text = ok(&[
        "obstructions",
        &main,
        "--slopes=-1/2,-1/4,1/8,1/4,1/3,7/16,1/2,3/4",
    ]);
    assert!(text.starts_with("UNOBSTRUCTED (6 half-spaces)"));
    assert!(!text.contains("7/16 ->"));
    assert!(ok(&["obstructions", &data("euclidean.net")]).starts_with("OBSTRUCTED -1 1"));
}

#[test]
fn equations() {
    let main = data("main.net");
    let twist = ok(&["equations", &main, "inf", "--check", "6"]);
    assert!(twist.starts_with("Sigma_f . [[1,0],[-2,1]]^5 = [[1,0],[-2,1]]^2 . Sigma_f\n"));
    assert!(twist.contains("phi^5 = z/(-10z+1), psi^2 = z/(-4z+1)"));
    assert!(twist.ends_with("CONSISTENT (height 6)\n"));
    let affine = ok(&["equations", &main, "--affine", "1,0;5,1;0,0"]);
    assert_eq!(
        affine,
        "Sigma_f . [[1,0],[5,1]] = [[1,0],[2,1]] . Sigma_f\nSigma_delta2 = z/(5z+1)\n\
         Sigma_delta1 = z/(2z+1)\nlambda1 matrix = [[1,0],[2,1]]\n"
    );
    let flip = ok(&[
        "equations",
        &main,
        "--affine",
        "-1,0;1,1;0,0",
        "--check",
        "8",
    ]);
    assert!(flip.contains("Sigma_delta2 = z̄/(z̄-1)"));
    assert!(flip.contains("Sigma_delta1 = -z̄"));
}

#[test]
fn unsupported_affine_maps_exit_4() {
    let out = run(&[
        "equations",
        &data("double.net"),
        "--affine",
        "-1,0;0,-1;2,0",
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(
        run(&["equations", &data("main.net"), "--affine", "1,0;0,1;1,0"])
            .status
            .code(),
        Some(4)
    );
}

#[test]
fn nonsep_modes() {
    assert_eq!(
        ok(&["nonsep", "4,2", "--check", "(0,0);(1,0);(2,0);(1,1)"]),
        "group Z/4 + Z/2, subset {(0,0),±(1,0),±(1,1),(2,0)}\nNONSEPARATING\n"
    );
    let separating = ok(&["nonsep", "4,2", "--check", "(0,0);(1,0);(0,1);(1,1)"]);
    assert!(separating.contains("SEPARATING\n  witness B="));
    let search = ok(&["nonsep", "4,2", "--search"]);
    assert!(search.lines().any(|l| l == "{(0,0),±(1,0),±(1,1),(2,0)}"));
    assert_eq!(ok(&["nonsep", "2,6", "--search"]), "count: 0\n");
    assert!(ok(&["nonsep", "4,2", "--refute"]).ends_with("realizable: 0\n"));
    assert!(ok(&["nonsep", &data("double.net")]).ends_with("NONSEPARATING\n"));
    assert!(ok(&["nonsep", &data("main.net")]).contains("SEPARATING\n  witness"));
}
