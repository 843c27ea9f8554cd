use ssendo::cli::dispatch;

fn run(args: &[&str]) -> (i32, String, String) {
    let dir = std::env::temp_dir().join("ssendo-cli-tests");
    let mut argv = vec!["ssendo".to_string(), "--cache-dir".into(), dir.display().to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = dispatch(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn mp_row_for_41() {
    let (code, out, _) = run(&["mp", "--p", "41"]);
    assert_eq!(code, 0);
    assert_eq!(out, "p,M,M_over_sqrtp,M_over_plog2p\n41,211,32.95,0.373\n");
}

#[test]
fn mp_range_is_ascending_and_checked() {
    let (code, out, _) = run(&["mp", "--p-range", "40", "60", "--check"]);
    assert_eq!(code, 0);
    let ps: Vec<u64> = out.lines().skip(1).map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(ps, vec![41, 43, 47, 53, 59]);
    assert!(out.lines().skip(1).all(|l| l.split(',').count() == 4));
}

#[test]
fn mismatch_exit_code() {
    // A ceiling below M(41) = 211 cannot finish the sweep.
    let (code, _, err) = run(&["mp", "--p", "41", "--q-ceiling", "100"]);
    assert_eq!(code, 3);
    assert!(err.contains("partial result"));
}

#[test]
fn qj_for_101() {
    let (code, out, _) = run(&["qj", "--p", "101"]);
    assert_eq!(code, 0);
    for row in ["57,11,O", "59,59,O", "66,67,O", "64,83,O", "3,139,O", "21,163,O", "0,3,O"] {
        assert!(out.lines().any(|l| l == row), "{row} missing from\n{out}");
    }
    let (_, one, _) = run(&["qj", "--p", "101", "--j", "57", "--format", "json"]);
    assert_eq!(one.trim(), r#"{"j":57,"kind":"O","q":11}"#);
}

#[test]
fn neighborhood_json() {
    let (code, out, _) = run(&["neighborhood", "--p", "311", "--ell", "5", "--j", "197"]);
    assert_eq!(code, 0);
    assert!(out.contains(r#""loops":0"#));
    assert!(out.contains(r#""fp_neighbors":[19,225]"#));
    assert!(out.contains(r#""distinct_neighbors":6"#));
}

#[test]
fn ordinary_curve_is_an_argument_error() {
    let (code, _, err) = run(&["neighborhood", "--p", "311", "--ell", "5", "--a", "122", "--b", "185"]);
    assert_eq!(code, 1);
    assert!(err.contains("not supersingular"));
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["frobnicate"]).0, 1);
    assert_eq!(run(&["mp", "--p", "41", "--bogus"]).0, 1);
    assert_eq!(run(&["mp", "--p", "42"]).0, 1);
    assert_eq!(run(&["nx", "--p", "101"]).0, 1);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn small_commands() {
    assert_eq!(run(&["nx", "--p", "101", "--x", "40.2"]).1, "p,x,N\n101,40.2,2\n");
    assert_eq!(run(&["ss-list", "--p", "101", "--format", "json"]).1.trim(), r#"{"count":7,"j":[0,3,21,57,59,64,66],"p":101}"#);
    let (_, h, _) = run(&["hilbert", "--d", "-23"]);
    assert_eq!(h, "degree,coefficient\n0,12771880859375\n1,-5151296875\n2,3491750\n3,1\n");
    let (code, c, _) = run(&["cheb", "--p", "2003", "--case", "Kzeta8", "--x", "1e6", "--format", "json"]);
    assert_eq!(code, 0);
    assert!(c.contains(r#""positive":true"#));
    let (_, g, _) = run(&["graph", "--p", "23", "--ell", "2"]);
    assert!(g.starts_with("strict graph"));
}

#[test]
fn verify_theorem1_passes_for_101() {
    let (code, out, _) = run(&["verify-theorem1", "--p", "101", "--ell", "3"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.starts_with("57,11,O,") && l.ends_with(",PASS")));
    assert!(!out.contains("FAIL"));
}

#[test]
fn identical_inputs_identical_bytes() {
    for args in [&["qj", "--p", "131", "--format", "json"][..], &["graph", "--p", "101", "--ell", "3"][..]] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.1, b.1);
    }
    let mut seeded = vec!["--seed", "99"];
    seeded.extend(["qj", "--p", "131"]);
    assert_eq!(run(&seeded).1, run(&["qj", "--p", "131"]).1);
}
