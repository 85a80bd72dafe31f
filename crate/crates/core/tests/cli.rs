use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn dynapsp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dynapsp")).args(args).output().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn gen_zero_updates_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let (g, s) = (dir.path().join("g"), dir.path().join("s"));
    let o = dynapsp(&["gen", "--n", "8", "--updates", "0", "--graph", p(&g), "--stream", p(&s)]);
    assert!(o.status.success());
    let text = fs::read_to_string(&s).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with('#'));
}

#[test]
fn gen_pure_delete() {
    let dir = tempfile::tempdir().unwrap();
    let (g, s) = (dir.path().join("g"), dir.path().join("s"));
    let o = dynapsp(&[
        "gen",
        "--n",
        "8",
        "--updates",
        "8",
        "--insert-ratio",
        "0",
        "--graph",
        p(&g),
        "--stream",
        p(&s),
    ]);
    assert!(o.status.success());
    let text = fs::read_to_string(&s).unwrap();
    let mut ids: Vec<&str> = text.lines().skip(1).map(|l| l.strip_prefix("del ").unwrap()).collect();
    assert_eq!(ids.len(), 8);
    ids.sort_unstable();
    ids.dedup();
    assert_eq!(ids.len(), 8);
}

#[test]
fn verify_empty_and_deletion_streams() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g");
    fs::write(&g, "3 2\n0 1 1\n1 2 1\n").unwrap();
    let empty = dir.path().join("e");
    fs::write(&empty, "# nothing\n").unwrap();
    assert!(dynapsp(&["verify", "--graph", p(&g), "--stream", p(&empty)])
        .status
        .success());
    let del = dir.path().join("d");
    fs::write(&del, "del 1\n").unwrap();
    assert!(dynapsp(&["verify", "--graph", p(&g), "--stream", p(&del)])
        .status
        .success());
    let q = dir.path().join("q");
    fs::write(&q, "q 0 0\nq 0 2\ndel 1\nq 0 2\nqp 0 2\nqp 2 2\n").unwrap();
    let o = dynapsp(&["run", "--graph", p(&g), "--stream", p(&q)]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "0 0 0\n0 2 2\n0 2 inf\nunreachable\n2\n");
}

#[test]
fn bench_one_update_gives_two_lines() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g");
    fs::write(&g, "3 2\n0 1 1\n1 2 1\n").unwrap();
    let s = dir.path().join("s");
    fs::write(&s, "add 3 | in 2:4 | out 0:1\n").unwrap();
    let o = dynapsp(&["bench", "--graph", p(&g), "--stream", p(&s), "--csv"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(
        lines[0],
        "update_idx,wall_ns,relaxations,sketch_edges,affected_nodes,max_congestion,centers_total,swapped"
    );
    assert!(lines[1].starts_with("1,"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let neg = dir.path().join("neg");
    fs::write(&neg, "2 2\n0 1 1\n1 0 -2\n").unwrap();
    let empty = dir.path().join("e");
    fs::write(&empty, "").unwrap();
    assert_eq!(
        dynapsp(&["run", "--graph", p(&neg), "--stream", p(&empty)])
            .status
            .code(),
        Some(3)
    );

    let g = dir.path().join("g");
    fs::write(&g, "2 1\n0 1 1\n").unwrap();
    let cyc = dir.path().join("c");
    fs::write(&cyc, "add 2 | in 1:-1 | out 0:-1\n").unwrap();
    assert_eq!(
        dynapsp(&["run", "--graph", p(&g), "--stream", p(&cyc)]).status.code(),
        Some(3)
    );

    let bad = dir.path().join("b");
    fs::write(&bad, "frobnicate 1\n").unwrap();
    assert_eq!(
        dynapsp(&["run", "--graph", p(&g), "--stream", p(&bad)]).status.code(),
        Some(2)
    );
    assert_eq!(
        dynapsp(&["run", "--graph", p(&dir.path().join("missing")), "--stream", p(&bad)])
            .status
            .code(),
        Some(2)
    );
    let dead = dir.path().join("dead");
    fs::write(&dead, "del 7\n").unwrap();
    assert_eq!(
        dynapsp(&["verify", "--graph", p(&g), "--stream", p(&dead)])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(dynapsp(&["verify", "--graph", p(&g)]).status.code(), Some(2));
}

#[test]
fn adversary_trace_replays_identically() {
    let dir = tempfile::tempdir().unwrap();
    let (g, s) = (dir.path().join("g"), dir.path().join("s"));
    assert!(dynapsp(&[
        "gen",
        "--n",
        "24",
        "--seed",
        "5",
        "--updates",
        "0",
        "--graph",
        p(&g),
        "--stream",
        p(&s)
    ])
    .status
    .success());
    for adv in ["path", "center"] {
        let trace = dir.path().join(format!("trace-{adv}"));
        let o = dynapsp(&[
            "verify",
            "--graph",
            p(&g),
            "--adversary",
            adv,
            "--updates",
            "12",
            "--trace",
            p(&trace),
            "--seed",
            "2",
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let a = dynapsp(&["run", "--graph", p(&g), "--stream", p(&trace), "--seed", "2"]);
        let b = dynapsp(&["run", "--graph", p(&g), "--stream", p(&trace), "--seed", "2"]);
        assert!(a.status.success());
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn run_agrees_with_oracle() {
    use dynapsp::format::{load_graph, parse_stream, StreamRecord};
    use dynapsp::oracle::apsp_oracle;

    let dir = tempfile::tempdir().unwrap();
    let (g, s) = (dir.path().join("g"), dir.path().join("s"));
    let o = dynapsp(&[
        "gen",
        "--n",
        "20",
        "--seed",
        "9",
        "--updates",
        "25",
        "--query-ratio",
        "2",
        "--graph",
        p(&g),
        "--stream",
        p(&s),
    ]);
    assert!(o.status.success());
    let out = dynapsp(&["run", "--graph", p(&g), "--stream", p(&s)]);
    assert!(out.status.success());
    assert!(dynapsp(&["verify", "--graph", p(&g), "--stream", p(&s)])
        .status
        .success());

    let mut graph = load_graph(&fs::read_to_string(&g).unwrap()).unwrap();
    let mut expected = String::new();
    for r in parse_stream(&fs::read_to_string(&s).unwrap()).unwrap() {
        match r {
            StreamRecord::Update(e) => graph.apply_in_place(&e).unwrap(),
            StreamRecord::Query(a, b) => {
                let d = apsp_oracle(&graph).dist(a, b);
                let shown = if d == dynapsp::INFINITY {
                    "inf".to_string()
                } else {
                    d.to_string()
                };
                expected.push_str(&format!("{a} {b} {shown}\n"));
            }
            StreamRecord::PathQuery(a, b) => {
                if apsp_oracle(&graph).dist(a, b) == dynapsp::INFINITY {
                    expected.push_str("unreachable\n");
                } else {
                    expected.push_str("PATH\n");
                }
            }
        }
    }
    let got = stdout(&out);
    assert_eq!(got.lines().count(), expected.lines().count());
    for (g_line, e_line) in got.lines().zip(expected.lines()) {
        if e_line != "PATH" {
            assert_eq!(g_line, e_line);
        }
    }
}
