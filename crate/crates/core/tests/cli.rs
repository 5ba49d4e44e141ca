use std::io::Write as _;

use tetrabound::cli::{run, Output};

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("tetrabound").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn structured(args: &[&str]) -> (i32, String, Output) {
    let mut full = args.to_vec();
    full.extend(["--format", "structured"]);
    let (code, out, _) = cli(&full);
    let parsed = Output::from_json(&out).unwrap_or_else(|e| panic!("unparsable output {out}: {e}"));
    (code, out, parsed)
}

#[test]
fn eval_examples() {
    let (code, out, _) = cli(&["eval", "R[3,4,6]", "--map", "R=3dr", "--state", "1,1,1,1,1,1"]);
    assert_eq!((code, out.trim()), (0, "1, 1, 1/2, 2, 1, 1/2"));
    let (code, out, _) = cli(&["eval", "", "--state", "5"]);
    assert_eq!((code, out.trim()), (0, "5"));
    let (code, out, _) = cli(&["eval", "N[3,4,6]", "--map", "N=3dn", "--state", "1,0,0,3,0,0"]);
    assert_eq!((code, out.trim()), (0, "1, 0, 1, 2, 0, 1"));
}

#[test]
fn eval_errors_exit_2() {
    let (code, _, err) = cli(&["eval", "R[1,2", "--map", "R=3dr", "--state", "1,1"]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());
    let (code, _, _) = cli(&["eval", "R[1,2,3]", "--map", "R=3dr", "--state", "1,0,1"]);
    assert_eq!(code, 2);
}

#[test]
fn boundarize_examples() {
    let (code, out, _) = cli(&["boundarize", "3dr", "--point", "1,1,1,1"]);
    assert_eq!((code, out.trim()), (0, "1/5, 5/3, 9/5, 1/3"));
    let (code, _, r) = structured(&["boundarize", "3dr", "--match", "3dj", "--backend", "symbolic"]);
    assert_eq!(code, 0);
    match r {
        Output::Report(r) => assert!(r.passed() && r.instances.to_string() == "proved"),
        other => panic!("{other:?}"),
    }
    let (code, _, _) = cli(&["boundarize", "super-T", "--match", "3dx", "--backend", "exhaustive", "--bound", "8"]);
    assert_eq!(code, 0);
}

#[test]
fn verify_examples() {
    let (code, out, _) = cli(&["verify", "tre", "--backend", "sample", "--samples", "500", "--seed", "7"]);
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = cli(&["verify", "tre-super", "--backend", "exhaustive", "--bound", "4"]);
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = cli(&["verify", "te", "--map", "R=3dr-vec", "--backend", "symbolic"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn mismatched_closed_form_exits_1() {
    let (code, out, _) = cli(&["eval", "J[1,2,3,4]", "--map", "J=3dj-electrical", "--lambda", "2", "--state", "1,1,1,1"]);
    assert_eq!((code, out.trim()), (0, "1/13, 13/7, 49/13, 1/7"));
    let (code, _, r) = structured(&["boundarize", "3dr", "--match", "3dj-electrical", "--lambda", "2", "--backend", "symbolic"]);
    assert_eq!(code, 1);
    match r {
        Output::Report(r) => assert!(!r.passed() && r.counterexample.is_some()),
        other => panic!("{other:?}"),
    }
}

#[test]
fn unknown_ids_exit_2_and_list_known() {
    let (code, _, err) = cli(&["verify", "no-such-eq"]);
    assert_eq!(code, 2);
    for id in ["te", "tre", "tre-super", "r20"] {
        assert!(err.contains(id), "{err}");
    }
    let (code, _, err) = cli(&["boundarize", "no-such-map"]);
    assert_eq!(code, 2);
    assert!(err.contains("3dr"), "{err}");
    let (code, _, _) = cli(&["verify", "te", "--backend", "symbolic", "--map", "R=3dr-crystal"]);
    assert_eq!(code, 2);
}

#[test]
fn trace_examples() {
    let (code, _, t) = structured(&["trace", "A", "--samples", "20", "--seed", "1"]);
    assert_eq!(code, 0);
    match t {
        Output::Trace { report, lines } => {
            assert!(report.passed());
            assert_eq!(lines.len(), 27);
            assert!(lines.iter().all(|l| l.passed));
        }
        other => panic!("{other:?}"),
    }
    let (code, _, _) = cli(&["trace", "B", "--bound", "2"]);
    assert_eq!(code, 0);
}

#[test]
fn trace_names_a_corrupted_line() {
    let text = include_str!("../data/appendix_a.dsl");
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let file_line = 16;
    let target = &lines[file_line - 1];
    let open = target.find('[').unwrap();
    let close = open + target[open..].find(']').unwrap();
    let mut labels: Vec<&str> = target[open + 1..close].split(',').collect();
    labels.swap(0, 1);
    let mutated = format!("{}{}{}", &target[..=open], labels.join(","), &target[close..]);
    lines[file_line - 1] = mutated;

    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "{}", lines.join("\n")).unwrap();
    let path = file.path().to_str().unwrap();
    let (code, _, t) = structured(&["trace", "A", "--data", path, "--samples", "20", "--seed", "1"]);
    assert_eq!(code, 1);
    match t {
        Output::Trace { report, lines } => {
            let first_bad = lines.iter().find(|l| !l.passed).unwrap();
            assert_eq!((first_bad.line, first_bad.file_line), (10, file_line));
            assert_eq!(report.counterexample.unwrap().line, Some(10));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn structured_output_is_deterministic_and_round_trips() {
    let args = ["verify", "tre", "--samples", "50", "--seed", "3"];
    let (_, a, parsed) = structured(&args);
    let (_, b, _) = structured(&args);
    assert_eq!(a, b);
    assert_eq!(parsed.to_json().trim(), a.trim());

    let (_, e, parsed) = structured(&["eval", "R[1,2,3]", "--map", "R=3dr", "--state", "1,2,3"]);
    assert_eq!(parsed.to_json().trim(), e.trim());
    assert_eq!(
        parsed,
        Output::Evaluation {
            input: vec!["1".into(), "2".into(), "3".into()],
            output: vec!["1/2".into(), "4".into(), "3/2".into()],
        }
    );
}
