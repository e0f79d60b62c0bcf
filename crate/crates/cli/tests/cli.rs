use std::path::PathBuf;
use std::process::{Command, Output};

use zxp::graphstate::{to_bare_diagram, to_diagram, WeightedGraph};
use zxp::rules::random_rewrites;
use zxp::{Diagram, EdgeKind, Prime};

fn pr(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

fn file(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("zxp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn save(name: &str, d: &Diagram) -> PathBuf {
    file(name, &d.to_json())
}

fn zxp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zxp")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &PathBuf) -> &str {
    p.to_str().unwrap()
}

#[test]
fn interp_of_identity() {
    let f = save("id.json", &Diagram::identity(pr(3), 1));
    let o = zxp(&["interp", path(&f)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1 | 0 | 0\n0 | 1 | 0\n0 | 0 | 1\n");
    let o = zxp(&["interp", "--format", "decimal", path(&f)]);
    assert!(stdout(&o).starts_with("approximate\n1.000000+0.000000i"));
}

#[test]
fn star_scalar_is_minus_one() {
    let f = save("star.json", &Diagram::star_diagram(pr(3)));
    let o = zxp(&["scalar", path(&f)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "unit=-1 s=0 r=0\nvalue -1\n");
}

#[test]
fn malformed_input_exits_two_with_location() {
    let f = file("bad.json", "{\"p\": 3, \"vertices\": [");
    let o = zxp(&["interp", path(&f)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1 column"));
    let o = zxp(&["interp", "/nonexistent/file.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn equal_reports_verdicts_and_traces() {
    let p = pr(3);
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(3);
    let g = WeightedGraph::from_matrix(p, &[vec![0, 1, 2], vec![1, 0, 0], vec![2, 0, 0]]).unwrap();
    let d = to_diagram(&g);
    let st = random_rewrites(&d, 10, 14, &mut rng);
    let e = zxp::normalize::with_scalar(&st.graph, &st.scalar).unwrap();
    let (a, b) = (save("eq_a.json", &d), save("eq_b.json", &e));
    let o = zxp(&["equal", path(&a), path(&b)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.starts_with("equal\n"));
    assert!(out.contains("trace A") && out.contains("form B:"));
    let trace = std::env::temp_dir().join(format!("zxp-cli-{}", std::process::id())).join("trace.txt");
    let o = zxp(&["equal", "--trace", path(&trace), path(&a), path(&b)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(std::fs::read_to_string(&trace).unwrap().starts_with("trace A"));

    let c = save("eq_c.json", &Diagram::wire(p, EdgeKind::Mul(p.one())));
    let i = save("eq_i.json", &Diagram::identity(p, 1));
    let o = zxp(&["equal", path(&c), path(&i)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("unequal\n"));
    let o = zxp(&["equal", path(&a), path(&i)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn simplify_graph_state() {
    let p = pr(5);
    let g = WeightedGraph::from_matrix(p, &[vec![0, 3, 1], vec![3, 0, 1], vec![1, 1, 0]]).unwrap();
    let f = save("gs.json", &to_diagram(&g));
    let o = zxp(&["simplify", path(&f)]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let gs = out.split("GS+LC\n").nth(2).unwrap();
    assert!(gs.starts_with("scalar 1\n"));
    assert!(gs.contains("5 3\n0 3 1\n3 0 1\n1 1 0\n"));
}

#[test]
fn discard_relation_is_coisotropic() {
    let f = save("disc.json", &Diagram::discard(pr(3)));
    let o = zxp(&["rel", path(&f)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("coisotropic true lagrangian false empty false\n"));
}

#[test]
fn soundcheck_reports() {
    let o = zxp(&["soundcheck", "--trials", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0 reports, 0 failing\n");
    let o = zxp(&["soundcheck", "--rules", "fusion,spider_wars", "--p", "3", "--trials", "20"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.find("fusion").unwrap() < out.find("spider_wars").unwrap());
    assert!(out.contains("pass 20/20"));
    let o = zxp(&["soundcheck", "--rules", "fusion", "--p", "3", "--trials", "20", "--skew"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("site RuleSite"));
    let again = zxp(&["soundcheck", "--rules", "fusion", "--p", "3", "--trials", "20", "--skew"]);
    assert_eq!(stdout(&o), stdout(&again));
}

#[test]
fn render_is_stable() {
    let f = save("rid.json", &Diagram::identity(pr(3), 1));
    let o = zxp(&["render", path(&f)]);
    let dot = stdout(&o);
    assert_eq!(dot.matches("[label=").count(), 2);
    assert_eq!(dot, stdout(&zxp(&["render", path(&f)])));
    let p = pr(5);
    let g = WeightedGraph::from_matrix(p, &[vec![0, 3, 1], vec![3, 0, 1], vec![1, 1, 0]]).unwrap();
    let f = save("rgs.json", &to_bare_diagram(&g));
    let dot = stdout(&zxp(&["render", path(&f)]));
    assert_eq!(dot.matches("fillcolor=\"#ccffcc\"").count(), 3);
    assert_eq!(dot.matches("style=dashed").count(), 3);
    assert!(dot.contains("label=\"3\""));
}
