use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_rank1-nash"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn run_game(cmd: &[&str], game: &str) -> (i32, String, String) {
    let path = corpus(game);
    let mut args = cmd.to_vec();
    args.push(path.to_str().unwrap());
    run(&args)
}

fn temp_game(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rank1-nash-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn enumerate_trace_table() {
    let (code, out, _) = run_game(
        &["enumerate", "--factor", "b=2,4", "c=2,4", "--trace"],
        "kt2.game",
    );
    assert_eq!(code, 0);
    let expected = "\
xi        objective  binding
2         0          {2, 3, 5, 8}
(2, 5/2)  < 0        {2, 3, 5}
5/2       -1/4       {2, 3, 4, 5}
(5/2, 3)  < 0        {3, 4, 5}
3         0          {3, 4, 5, 6}
(3, 7/2)  < 0        {3, 4, 6}
7/2       -1/4       {1, 3, 4, 6}
(7/2, 4)  < 0        {1, 4, 6}
4         0          {1, 4, 6, 7}
";
    assert!(out.contains(expected), "{out}");
    assert!(out.starts_with("3 equilibria\n"));
}

#[test]
fn enumerate_json_fields() {
    let (code, out, _) = run(&[
        "--json",
        "enumerate",
        corpus("kt2.game").to_str().unwrap(),
        "--trace",
        "--factor",
        "c=2,4",
        "b=2,4",
    ]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let eq = v["equilibria"].as_array().unwrap();
    assert_eq!(eq.len(), 3);
    assert_eq!(eq[1]["x"], serde_json::json!(["1/2", "1/2"]));
    assert_eq!(eq[1]["payoff1"], "9/2");
    assert_eq!(eq[1]["source_xi"], "3");
    let trace = v["trace"].as_array().unwrap();
    assert_eq!(trace.len(), 9);
    assert_eq!(trace[2]["xi"], "5/2");
    assert_eq!(trace[2]["objective"], "-1/4");
    assert_eq!(trace[1]["interval"], serde_json::json!(["2", "5/2"]));
    assert_eq!(trace[1]["objective"], "negative");
    assert_eq!(v["pivots"][1]["case"], "feasibility");
}

#[test]
fn output_is_deterministic() {
    let a = run_game(&["--json", "enumerate"], "kt4.game");
    let b = run_game(&["--json", "enumerate"], "kt4.game");
    assert_eq!(a, b);
    assert_eq!(a.0, 0);
}

#[test]
fn oracle_and_labels_on_example() {
    let (code, out, _) = run_game(&["oracle"], "ex22.game");
    assert_eq!(code, 0);
    assert!(out.contains("x = (2/5, 3/5)  y = (1/2, 0, 1/2)"));
    let (code, out, _) = run_game(&["labels"], "ex22.game");
    assert_eq!(code, 0);
    assert!(out.starts_with("3 equilibria"));
    let (code, out, _) = run_game(&["--json", "oracle", "--strict"], "ex22.game");
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["equilibria"].as_array().unwrap().len(), 3);
}

#[test]
fn lh_single_and_all() {
    let (code, out, _) = run_game(&["lh", "--r", "1"], "aggarwal-rank1.game");
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "r = 1\n  ({1, 2} | {3, 4})\n  ({2, 4} | {3, 4})\n  ({2, 4} | {1, 3})\n\
         reaches x = (1, 0)  y = (0, 1)  payoffs = (-18, 30)\n"
    );
    let (code, out, _) = run_game(&["--json", "lh", "--all"], "aggarwal-rank1.game");
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["reached"], 2);
    assert_eq!(v["unreached"][0]["x"], serde_json::json!(["1/5", "4/5"]));
    let (code, _, err) = run_game(&["lh", "--r", "9"], "aggarwal-rank1.game");
    assert_eq!(code, 4, "{err}");
}

#[test]
fn gprime_report() {
    let (code, out, _) = run_game(&["gprime"], "wilson.game");
    assert_eq!(code, 0);
    assert!(out.starts_with("2 components\n"));
    assert!(out.contains(
        "x = (1/6, 1/3, 1/2)  y = (1/6, 1/3, 1/2)  payoffs = (1, 1)  component 1, not reachable"
    ));
}

#[test]
fn rank_and_reduce_rank() {
    let (code, out, _) = run_game(&["rank"], "kt3.game");
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "rank 1\nclass general\nb = (1, 2, 3)\nc = (4, 8, 12)\n"
    );
    let (code, out, _) = run_game(&["reduce-rank"], "wilson.game");
    assert_eq!(code, 0);
    let p = temp_game("reduced.game", &out);
    let (code, out, _) = run(&["--json", "rank", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v["rank"].as_u64().unwrap() <= 2);
    // same strategy pairs as the original; payoffs of player 1 move
    let strategies = |s: String| {
        s.lines()
            .map(|l| l.split("  payoffs").next().unwrap().to_string())
            .collect::<Vec<_>>()
    };
    let (_, a, _) = run_game(&["oracle"], "wilson.game");
    let (_, b, _) = run(&["oracle", p.to_str().unwrap()]);
    assert_eq!(strategies(a), strategies(b));
    let (code, _, _) = run_game(&["reduce-rank"], "ex22.game");
    assert_eq!(code, 4);
}

#[test]
fn check_and_degenerate_exit_code() {
    let (code, out, _) = run_game(&["check"], "kt3.game");
    assert_eq!((code, out.as_str()), (0, "non-degenerate\n"));
    let p = temp_game("degenerate.game", "2 2\n1 2\n3 0\n4 4\n1 1\n");
    let (code, _, err) = run(&["check", p.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("labels"), "{err}");
    // rank two: the rank precondition fails first
    let (code, _, _) = run(&["enumerate", p.to_str().unwrap()]);
    assert_eq!(code, 4);
    let p = temp_game("degenerate-zs.game", "2 2\n1 1\n0 2\n-1 -1\n0 -2\n");
    let (code, _, _) = run(&["enumerate", p.to_str().unwrap()]);
    assert_eq!(code, 2);
}

#[test]
fn error_exit_codes() {
    let p = temp_game("bad.game", "2 2\n1 2\n3 x\n1 1\n1 1\n");
    let (code, _, err) = run(&["oracle", p.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(err.contains("line 3"), "{err}");
    let (code, _, _) = run_game(&["enumerate"], "ex22.game");
    assert_eq!(code, 4);
    let (code, _, _) = run_game(&["enumerate", "--factor", "b=1,1", "c=2,4"], "kt2.game");
    assert_eq!(code, 4);
    let (code, _, _) = run_game(&["enumerate", "--factor", "b=1", "x=2"], "kt2.game");
    assert_eq!(code, 3);
    let (code, _, _) = run(&["oracle", "/nonexistent/game"]);
    assert_eq!(code, 1);
    let (code, _, _) = run(&["frobnicate"]);
    assert_eq!(code, 3);
}

#[test]
fn generate_matches_corpus() {
    for d in 1..=5 {
        let (code, out, _) = run(&["generate", "--kt", "--d", &d.to_string()]);
        assert_eq!(code, 0);
        let file = std::fs::read_to_string(corpus(&format!("kt{d}.game"))).unwrap();
        let a = rank1_nash::parse_game(&out).unwrap();
        let b = rank1_nash::parse_game(&file).unwrap();
        assert_eq!(a, b);
    }
    let (_, out, _) = run(&["generate", "--kt", "--d", "1"]);
    assert_eq!(out, "1 1\n2\n2\n");
}

#[test]
fn zero_sum_and_row_constant_files() {
    let p = temp_game("zs.game", "2 2\n3 -1\n-2 1\n-3 1\n2 -1\n");
    let (code, out, _) = run(&["enumerate", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(
        out.contains("x = (3/7, 4/7)  y = (2/7, 5/7)  payoffs = (1/7, -1/7)"),
        "{out}"
    );
    let p = temp_game("rc.game", "2 2\n3 -1\n-2 1\n-2 2\n4 1\n");
    let (code, out, _) = run(&["enumerate", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (_, oracle, _) = run(&["oracle", p.to_str().unwrap()]);
    let strip = |s: &str| {
        s.lines()
            .map(|l| l.split("  xi").next().unwrap().to_string())
            .collect::<Vec<_>>()
    };
    assert_eq!(strip(&out), strip(&oracle));
}
