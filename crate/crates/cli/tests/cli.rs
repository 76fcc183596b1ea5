use std::process::{Command, Output};

fn tbt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tbt"))
        .args(args)
        .env_remove("TBT_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn squared_twist_is_identity() {
    let o = tbt(&["eval", "--action", "c2", "tau[s] * tau[s]"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().any(|l| l == "identity"));
}

#[test]
fn local_twist_has_two_germinal_twists() {
    let o = tbt(&["eval", "--action", "c2", "iota1[1,s]"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("twist set: {c2:e, c2:s}"));
}

#[test]
fn malformed_word_is_a_usage_error_with_position() {
    let o = tbt(&["eval", "--action", "c2", "x[1] * (x[1"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("position 9"), "{err}");
    assert!(err.contains('^'));
}

#[test]
fn unknown_action_is_a_usage_error() {
    assert_eq!(
        tbt(&["--action", "z3", "eval", "id[1]"]).status.code(),
        Some(2)
    );
    assert_eq!(tbt(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn relations_pass_for_thompson_action() {
    let o = tbt(&["relations", "--action", "F", "--seed", "7"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(
        out.lines().filter(|l| l.starts_with("PASS")).count(),
        8,
        "{out}"
    );
}

#[test]
fn seed_env_overrides_flag() {
    let run = |env: Option<&str>, seed: &str| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_tbt"));
        c.args([
            "--format",
            "rows",
            "relations",
            "--instances",
            "5",
            "--seed",
            seed,
        ]);
        match env {
            Some(v) => c.env("TBT_SEED", v),
            None => c.env_remove("TBT_SEED"),
        };
        c.output().unwrap()
    };
    assert!(run(Some("3"), "99").status.success());
    assert_eq!(run(Some("x"), "1").status.code(), Some(2));
}

#[test]
fn matching_seven_is_connected() {
    let o = tbt(&["complex", "matching", "7"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("PASS"));
    let rows = tbt(&["--format", "rows", "complex", "matching", "7"]);
    assert_eq!(
        stdout(&rows),
        "complex,degree,rank,torsion\nmatching_7,0,0,\n"
    );
}

#[test]
fn vacuous_bounds_pass_despite_homology() {
    // Bound ν(4) − 1 is negative, so the verdict is vacuous.
    assert!(tbt(&["complex", "matching", "4"]).status.success());
    let o = tbt(&["--format", "rows", "complex", "VE", "3", "--colors", "1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "complex,degree,rank,torsion\nVE_3,0,5,\n");
}

#[test]
fn rho_inverts_iota0() {
    let o = tbt(&["rho", "--action", "c2", "iota0[s]"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "c2:s");
}

#[test]
fn factorization_prints_a_word() {
    let o = tbt(&["factorize", "--action", "c2", "iota1[1,s] * tau[s]"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(!stdout(&o).trim().is_empty());
}

#[test]
fn join_of_two_splits() {
    let o = tbt(&["join", "--action", "trivial:2", "x[1]", "x[2]"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("EL{4;1;"));
}

#[test]
fn facets_list_one_simplex_per_line() {
    let o = tbt(&["complex", "E", "3", "--colors", "1", "--facets"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 6);
}
