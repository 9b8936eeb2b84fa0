use symtrace_cli::{parse_form, run_args, ParseError};
use symtrace_core::derham::enumerate_forms;
use symtrace_core::{AlgebraElement, Form};

fn run(args: &[&str]) -> (i32, String) {
    run_args(std::iter::once("symtrace").chain(args.iter().copied()))
}

#[test]
fn trace_examples() {
    assert_eq!(run(&["trace", "--method", "simple", "--vars", "2", "x1*dx2"]), (0, "lam[1,2]\n".into()));
    assert_eq!(run(&["trace", "--method", "diffop", "x1*dx2*dx3"]), (0, "lam[1,2,3]\n".into()));
    assert_eq!(run(&["trace", "--method", "cs", "x1^3"]), (0, "x1^3\n".into()));
    assert_eq!(run(&["trace", "--aliases", "--vars", "3", "x1*dx2"]), (0, "-lambda\n".into()));
    assert_eq!(
        run(&["trace", "--cartan", "n=2", "x1*dx2"]),
        (0, "lam[1,2] ⊗ 1 + 1 ⊗ lam[1,2]\n".into())
    );
}

#[test]
fn methods_agree_from_the_command_line() {
    let expr = "x1^2*x2*dx3 - 3/2*x3*dx1*dx2";
    let outs: Vec<_> = ["simple", "cs", "collapsed", "diffop"]
        .iter()
        .map(|m| run(&["trace", "--method", m, "--vars", "3", expr]))
        .collect();
    assert_eq!(outs[0].0, 0, "{}", outs[0].1);
    assert!(outs.iter().all(|o| o == &outs[0]), "{outs:?}");
}

#[test]
fn json_output() {
    let (code, out) = run(&["trace", "--json", "x1*dx2"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["terms"][0]["coeff"], "1");
    assert_eq!(v["terms"][0]["monomial"][0], "lam[1,2]");
}

#[test]
fn errors_and_exit_codes() {
    let (code, out) = run(&["trace", "--vars", "3", "x4"]);
    assert_eq!(code, 2);
    assert!(out.contains("out of range"), "{out}");
    assert_eq!(run(&["trace", "x1 +* x2"]).0, 2);
    assert_eq!(run(&["verify", "nonsense"]).0, 2);
}

#[test]
fn verify_and_homology() {
    let (code, out) = run(&["verify", "routes", "--vars", "2", "--weight", "3", "--deg", "2"]);
    assert_eq!(code, 0, "{out}");
    let (code, out) = run(&["homology", "--ambient", "A", "--vars", "1", "--weight", "4"]);
    assert_eq!(code, 0, "{out}");
    let (code, out) = run(&["trees", "--k", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("15 labelled classes"), "{out}");
}

#[test]
fn parser_basics() {
    let a = parse_form("dx2*dx1", 2).unwrap();
    let b = Form::new(2, -(&AlgebraElement::dx(1) * &AlgebraElement::dx(2))).unwrap();
    assert_eq!(a, b);
    assert_eq!(parse_form("dx1*dx1", 1).unwrap(), Form::zero(1));
    assert!(matches!(parse_form("x0", 2), Err(ParseError::Range { index: 0, .. })));
    assert!(matches!(parse_form("x1/2", 2), Err(ParseError::Syntax { .. })));
    assert!(matches!(parse_form("(x1", 2), Err(ParseError::Syntax { .. })));
}

#[test]
fn render_parse_round_trip() {
    for om in enumerate_forms(3, 0..=3, 0..=3).unwrap() {
        let s = om.to_string();
        assert_eq!(parse_form(&s, 3).unwrap(), om, "{s}");
        let sum = om.add(&om.d()).scale(&symtrace_core::Rational::new((-3).into(), 7.into()));
        let t = sum.to_string();
        let back = parse_form(&t, 3).unwrap();
        assert_eq!(back, sum, "{t}");
        assert_eq!(back.to_string(), t);
    }
}
