//! Acceptance checks. Each criterion prints one PASS/FAIL line; the process
//! exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use itertools::Itertools;
use symtrace_core::ainfty::{enumerate_labeled_classes, enumerate_pbt, tree_sign, PlanarTree};
use symtrace_core::cyclic::{build_connes_complex, homology, Ambient};
use symtrace_core::derham::enumerate_forms;
use symtrace_core::resolution::s_inv;
use symtrace_core::trace::{cs_coefficient, d_op, hat_d_op, trace_simple};
use symtrace_core::verify::{self, VerificationReport};
use symtrace_core::{Rational, Result};

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn reports(rs: Vec<VerificationReport>, limit: Option<Duration>) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for r in &rs {
        ok &= r.ok() && r.cases > 0;
        if let Some(f) = r.failures.first() {
            parts.push(format!("{} [first failure: {} expected {} got {}]", r.summary(), f.input, f.expected, f.got));
        } else {
            parts.push(r.summary());
        }
    }
    if let Some(limit) = limit {
        let total: Duration = rs.iter().map(|r| r.wall_time).sum();
        if total > limit {
            ok = false;
            parts.push(format!("over time limit {:.0}s", limit.as_secs_f64()));
        }
    }
    Outcome { ok, detail: parts.join("; ") }
}

fn c1() -> Result<Outcome> {
    Ok(reports(vec![verify::two_variable(3)?], Some(Duration::from_secs(10))))
}

fn c2() -> Result<Outcome> {
    Ok(reports(vec![verify::three_variable(3)?], Some(Duration::from_secs(60))))
}

fn c3() -> Result<Outcome> {
    let rs = (1..=3).map(|n| verify::low_degree(n, 4)).collect::<Result<Vec<_>>>()?;
    Ok(reports(rs, None))
}

fn c4() -> Result<Outcome> {
    let rs = (1..=3).map(|n| verify::routes(n, 4, 3)).collect::<Result<Vec<_>>>()?;
    Ok(reports(rs, Some(Duration::from_secs(300))))
}

/// The operator identities, plus c^{(2,2)} = ĉ^{(2,2)}/(r+1) = −2/(r+1): with
/// ĉ^{(2,2,1)} = 1 the 2-form trace is s⁻¹dω + (1/(r+1))(D̂^{(2,2)} + D̂^{(2,2,1)})(dω).
fn c5() -> Result<Outcome> {
    let mut rep = verify::operator_identity(3, 3)?;
    let mut extra = VerificationReport::new("c(2,2)");
    for r in 0..=3usize {
        let inv = q(1, r as i64 + 1);
        let c22 = q(-2, r as i64 + 1);
        for w in enumerate_forms(3, r + 1..=r + 1, 2..=2)? {
            let eta = w.d();
            let lhs = trace_simple(&w) - s_inv(&eta)?;
            let rhs = hat_d_op(&eta, &[2, 2])?.scale(&inv) + hat_d_op(&eta, &[2, 2, 1])?.scale(&inv);
            extra.check(|| format!("hat expansion {w}"), &lhs, &rhs, |v| v.to_string());
            let via_c = d_op(&eta, &[2, 2])?.scale(&c22) + hat_d_op(&eta, &[2, 2, 1])?.scale(&inv);
            extra.check(|| format!("c(2,2)=-2/(r+1) {w}"), &lhs, &via_c, |v| v.to_string());
        }
    }
    rep.merge(extra);
    Ok(reports(vec![rep], None))
}

fn c6() -> Result<Outcome> {
    let rs = (1..=3).map(|n| verify::cstree(n, 4, 3)).collect::<Result<Vec<_>>>()?;
    Ok(reports(rs, Some(Duration::from_secs(300))))
}

fn c7() -> Result<Outcome> {
    Ok(reports(vec![verify::merkulov(3, 4, 3)?], None))
}

fn c8() -> Result<Outcome> {
    Ok(reports(vec![verify::conj1(3, 4)?], None))
}

fn c9() -> Result<Outcome> {
    let mut rs = (1..=2).map(|n| verify::homology_crosscheck(n, 4, 3)).collect::<Result<Vec<_>>>()?;
    let mut table = VerificationReport::new("N=1 table");
    let h = homology(&build_connes_complex(Ambient::A, 1, 4, 3)?)?;
    for d in 0..=3 {
        for w in 1..=4 {
            let want = usize::from(d == 0);
            table.check(|| format!("H{d} weight {w}"), &want, &h.dim(d, w), |v| v.to_string());
        }
    }
    rs.push(table);
    Ok(reports(rs, None))
}

fn c10() -> Result<Outcome> {
    let mut rep = VerificationReport::new("trees");
    for (k, n) in [(2, 2usize), (3, 5), (4, 14)] {
        rep.check(|| format!("|PBT_{k}|"), &n, &enumerate_pbt(k).len(), |v| v.to_string());
    }
    let signs: Vec<i8> = enumerate_pbt(3).iter().map(tree_sign).collect();
    rep.check(|| "signs k=3".into(), &vec![-1i8, 1, -1, 1, -1], &signs, |v| format!("{v:?}"));

    let classes = enumerate_labeled_classes(3);
    rep.check(|| "|clLPBT_3|".into(), &15usize, &classes.len(), |v| v.to_string());
    let balanced = PlanarTree::node(
        PlanarTree::node(PlanarTree::Leaf, PlanarTree::Leaf),
        PlanarTree::node(PlanarTree::Leaf, PlanarTree::Leaf),
    );
    let (bal, rest): (Vec<_>, Vec<_>) = classes.iter().partition(|c| c.shape() == balanced);
    let mut s1: Vec<Vec<usize>> = bal.iter().map(|c| c.labels()).collect();
    s1.sort();
    rep.check(|| "Sigma_1".into(), &vec![vec![0, 1, 2, 3], vec![0, 2, 1, 3], vec![0, 3, 1, 2]], &s1, |v| format!("{v:?}"));
    let rest_shapes: Vec<PlanarTree> = rest.iter().map(|c| c.shape()).unique().collect();
    rep.check(|| "one shape outside Sigma_1".into(), &1usize, &rest_shapes.len(), |v| v.to_string());
    let mut s2: Vec<Vec<usize>> = rest.iter().map(|c| c.labels()).collect();
    s2.sort();
    let want: Vec<Vec<usize>> = (0..4).permutations(4).filter(|p| p[2] < p[3]).sorted().collect();
    rep.check(|| "Sigma_2".into(), &want, &s2, |v| format!("{} tuples", v.len()));
    Ok(reports(vec![rep], None))
}

fn c11() -> Result<Outcome> {
    let rs = (1..=2).map(|n| verify::cartan(n, 3, 3, 2)).collect::<Result<Vec<_>>>()?;
    Ok(reports(rs, None))
}

fn c12() -> Result<Outcome> {
    let mut rep = VerificationReport::new("cs_coefficient");
    for r in 0..=6 {
        rep.check(|| format!("A0(r={r})"), &q(1, 1), &cs_coefficient(r, 0)?, |v| v.to_string());
    }
    rep.check(|| "A1(r=1)".into(), &q(-1, 6), &cs_coefficient(1, 1)?, |v| v.to_string());
    rep.check(|| "A2(r=2)".into(), &q(1, 30), &cs_coefficient(2, 2)?, |v| v.to_string());
    Ok(reports(vec![rep], None))
}

fn main() {
    let criteria: [(&str, fn() -> Result<Outcome>); 12] = [
        ("two-variable law", c1),
        ("three-variable laws", c2),
        ("low-degree closed forms", c3),
        ("route agreement", c4),
        ("operator identity", c5),
        ("tree sum equals Chern-Simons sum", c6),
        ("Merkulov consistency", c7),
        ("beta cocycle", c8),
        ("homology cross-check", c9),
        ("tree combinatorics", c10),
        ("Cartan factorization", c11),
        ("cs_coefficient values", c12),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = f().unwrap_or_else(|e| Outcome { ok: false, detail: format!("error: {e}") });
        if !out.ok {
            failed += 1;
        }
        println!(
            "criterion {:>2}: {} {} ({:.2}s) {}",
            i + 1,
            if out.ok { "PASS" } else { "FAIL" },
            name,
            start.elapsed().as_secs_f64(),
            out.detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
