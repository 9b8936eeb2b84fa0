//! Verification suites: each runs an exhaustive family of cases and
//! collects the mismatches into a report.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::ainfty::{enumerate_labeled_classes, enumerate_pbt, tree_sign, verify_cstree, verify_tree_lemma, MerkulovData};
use crate::cartan::{is_sn_invariant, render_tensor, symmetrization, trace_cartan, vartheta_total};
use crate::cyclic::{build_connes_complex, derham_quotient_dims, homology, verify_conj1, verify_hkr, Ambient};
use crate::derham::{cartan_euler_residual, enumerate_forms, split_monomial, Form};
use crate::error::Result;
use crate::gcalg::{int, AlgebraElement, Gen, Monomial};
use crate::resolution::{abelianize, alias_value, delta_r, s_inv, words_of_weight, RElement};
use crate::trace::{cs_trace_raw, d_op, f_eval, hat_d_op, trace, trace_diffop, trace_simple, TraceMethod};

/// One mismatching case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub input: String,
    pub expected: String,
    pub got: String,
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub suite: String,
    pub cases: usize,
    pub failures: Vec<Failure>,
    pub wall_time: Duration,
}

impl VerificationReport {
    pub fn new(suite: &str) -> Self {
        VerificationReport { suite: suite.into(), cases: 0, failures: Vec::new(), wall_time: Duration::ZERO }
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    /// Records one case; `expected`/`got` are only rendered on failure.
    pub fn check<T: PartialEq>(&mut self, input: impl FnOnce() -> String, expected: &T, got: &T, show: impl Fn(&T) -> String) {
        self.cases += 1;
        if expected != got {
            self.failures.push(Failure { input: input(), expected: show(expected), got: show(got) });
        }
    }

    pub fn fail(&mut self, input: String, expected: String, got: String) {
        self.cases += 1;
        self.failures.push(Failure { input, expected, got });
    }

    pub fn pass(&mut self) {
        self.cases += 1;
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.cases += other.cases;
        self.failures.extend(other.failures);
        self.wall_time += other.wall_time;
    }

    pub fn summary(&self) -> String {
        format!(
            "{}: {} cases, {} failures, {:.2}s",
            self.suite,
            self.cases,
            self.failures.len(),
            self.wall_time.as_secs_f64()
        )
    }
}

fn timed(suite: &str, f: impl FnOnce(&mut VerificationReport) -> Result<()>) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut r = VerificationReport::new(suite);
    f(&mut r)?;
    r.wall_time = start.elapsed();
    Ok(r)
}

fn show(e: &AlgebraElement) -> String {
    e.to_string()
}

/// Cs-raw = simple = F∘d on every basis form, plus the differential-operator
/// route for form degree ≤ 2. `weight` bounds the coefficient degree.
pub fn routes(nvars: u8, weight: usize, deg: usize) -> Result<VerificationReport> {
    timed("routes", |r| {
        let forms = enumerate_forms(nvars, 0..=weight, 0..=deg)?;
        let results: Vec<Vec<(String, String, Option<String>)>> = forms
            .par_iter()
            .map(|w| {
                let s = trace_simple(w);
                let mut v = vec![
                    (format!("cs {w}"), s.to_string(), Some(cs_trace_raw(w).to_string())),
                    (format!("collapsed {w}"), s.to_string(), Some(f_eval(&w.d()).to_string())),
                ];
                if w.form_degree().is_some_and(|p| p <= 2) {
                    v.push((format!("diffop {w}"), s.to_string(), trace_diffop(w).ok().map(|e| e.to_string())));
                }
                v
            })
            .collect();
        for (input, expected, got) in results.into_iter().flatten() {
            match got {
                Some(g) if g == expected => r.pass(),
                Some(g) => r.fail(input, expected, g),
                None => r.fail(input, expected, "error".into()),
            }
        }
        Ok(())
    })
}

/// Tr(f) = f on nonconstant 0-forms, Tr = s⁻¹d on 1-forms and
/// Tr = s⁻¹d − D^{(2,2)}d on 2-forms.
pub fn low_degree(nvars: u8, weight: usize) -> Result<VerificationReport> {
    timed("low-degree", |r| {
        for w in enumerate_forms(nvars, 0..=weight, 0..=2)? {
            let got = trace(&w, TraceMethod::ChernSimonsRaw)?;
            let eta = w.d();
            let expected = match w.form_degree() {
                Some(0) => {
                    let (m, _) = w.body().terms().next().expect("basis form");
                    if m.is_one() {
                        AlgebraElement::zero()
                    } else {
                        w.body().clone()
                    }
                }
                _ if eta.is_zero() => AlgebraElement::zero(),
                Some(1) => s_inv(&eta)?,
                _ => &s_inv(&eta)? - &d_op(&eta, &[2, 2])?,
            };
            r.check(|| w.to_string(), &expected, &got, show);
        }
        Ok(())
    })
}

fn coefficient_of(w: &Form, dx: &[u8]) -> AlgebraElement {
    let want: Vec<u8> = dx.to_vec();
    w.body().map_linear(|m| {
        let (x, dxs) = split_monomial(m);
        if dxs == want {
            x
        } else {
            AlgebraElement::zero()
        }
    })
}

fn poly_basis(nvars: u8, weight: usize) -> Result<Vec<AlgebraElement>> {
    Ok(enumerate_forms(nvars, 0..=weight, 0..=0)?.into_iter().map(|f| f.body().clone()).collect())
}

/// P dx + Q dy ↦ (Q_x − P_y) lam[1,2] for every trace method, P and Q running
/// over the monomials of degree ≤ weight.
pub fn two_variable(weight: usize) -> Result<VerificationReport> {
    timed("two-variable", |r| {
        let basis = poly_basis(2, weight)?;
        let zero = AlgebraElement::zero();
        let mut pairs = Vec::new();
        for b in &basis {
            pairs.push((b.clone(), zero.clone()));
            pairs.push((zero.clone(), b.clone()));
        }
        for (p, q) in pairs {
            let body = &(&p * &AlgebraElement::dx(1)) + &(&q * &AlgebraElement::dx(2));
            let w = Form::new(2, body)?;
            let expected = &(&q.partial(1) - &p.partial(2)) * &AlgebraElement::lam(&[1, 2]);
            for m in TraceMethod::ALL {
                let got = trace(&w, m)?;
                r.check(|| format!("{m:?} {w}"), &expected, &got, show);
            }
        }
        Ok(())
    })
}

fn alias(name: &str) -> AlgebraElement {
    alias_value(name).expect("known alias")
}

/// The three-variable laws for 1-forms and 2-forms (x, y, z = x1, x2, x3),
/// stated with the alias generators ξ, θ, λ, t.
pub fn three_variable(weight: usize) -> Result<VerificationReport> {
    timed("three-variable", |r| {
        let (lam, xi, theta, t) = (alias("lambda"), alias("xi"), alias("theta"), alias("t"));
        for w in enumerate_forms(3, 0..=weight, 1..=1)? {
            let (p, q, rr) = (coefficient_of(&w, &[1]), coefficient_of(&w, &[2]), coefficient_of(&w, &[3]));
            let expected = &(&(&(&p.partial(2) - &q.partial(1)) * &lam) + &(&(&q.partial(3) - &rr.partial(2)) * &xi))
                + &(&(&rr.partial(1) - &p.partial(3)) * &theta);
            for m in TraceMethod::ALL {
                let got = trace(&w, m)?;
                r.check(|| format!("{m:?} {w}"), &expected, &got, show);
            }
        }
        // ω = P dxdy + Q dydz + R dzdx
        for w in enumerate_forms(3, 0..=weight, 2..=2)? {
            let (p, q) = (coefficient_of(&w, &[1, 2]), coefficient_of(&w, &[2, 3]));
            let rr = -coefficient_of(&w, &[1, 3]);
            let div = &(&p.partial(3) + &q.partial(1)) + &rr.partial(2);
            let expected = &(&(&div * &t) + &(&div.partial(1) * &(&theta * &lam)))
                + &(&(&div.partial(2) * &(&lam * &xi)) + &(&div.partial(3) * &(&xi * &theta)));
            for m in TraceMethod::ALL {
                let got = trace(&w, m)?;
                r.check(|| format!("{m:?} {w}"), &expected, &got, show);
            }
        }
        Ok(())
    })
}

/// D̂^{(2,2,1)}∘d = −(r−1) D^{(2,2)}∘d and D̂^{(2,2)} = −2 D^{(2,2)} on
/// 2-forms with homogeneous coefficients of degree r+1, r ≤ r_max.
pub fn operator_identity(nvars: u8, r_max: usize) -> Result<VerificationReport> {
    timed("operator-identity", |rep| {
        for r in 0..=r_max {
            for w in enumerate_forms(nvars, r + 1..=r + 1, 2..=2)? {
                let eta = w.d();
                if eta.is_zero() {
                    rep.pass();
                    continue;
                }
                let d22 = d_op(&eta, &[2, 2])?;
                let lhs = hat_d_op(&eta, &[2, 2, 1])?;
                rep.check(|| format!("(2,2,1) {w}"), &d22.scale(&int(1 - r as i64)), &lhs, show);
                let hat = hat_d_op(&eta, &[2, 2])?;
                rep.check(|| format!("(2,2) {w}"), &d22.scale(&int(-2)), &hat, show);
            }
        }
        Ok(())
    })
}

/// Builds the homotopy (side conditions are checked on construction), then
/// checks the tree expansion and the two trace sums for k ≤ k_max, plus
/// the tree and class counts.
pub fn merkulov(nvars: u8, weight: usize, k_max: usize) -> Result<VerificationReport> {
    timed("merkulov", |r| {
        let md = MerkulovData::build(nvars, weight, k_max.max(1))?;
        r.pass();
        for k in 1..=k_max {
            for c in verify_tree_lemma(&md, k, weight)? {
                let input = || format!("k={k} args={}", render_args(&c.args));
                if c.expansion_ok {
                    r.pass();
                } else {
                    r.fail(input(), "f_{k+1} = tree expansion".into(), "differs".into());
                }
                if c.sums_ok {
                    r.pass();
                } else {
                    r.fail(input(), "permutation sum = class sum".into(), "differs".into());
                }
            }
        }
        let catalan = [1usize, 1, 2, 5, 14, 42];
        for k in 1..=4 {
            r.check(|| format!("|PBT_{k}|"), &catalan[k], &enumerate_pbt(k).len(), |v| v.to_string());
        }
        let signs: Vec<i8> = enumerate_pbt(3).iter().map(tree_sign).collect();
        r.check(|| "signs k=3".into(), &vec![-1i8, 1, -1, 1, -1], &signs, |v| format!("{v:?}"));
        r.check(|| "classes k=3".into(), &15, &enumerate_labeled_classes(3).len(), |v| v.to_string());
        Ok(())
    })
}

fn render_args(args: &[Monomial<Gen>]) -> String {
    args.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(", ")
}

/// Labelled-tree sum against the Chern–Simons sum for every tuple with k ≤ k_max.
pub fn cstree(nvars: u8, weight: usize, k_max: usize) -> Result<VerificationReport> {
    timed("cstree", |r| {
        let md = MerkulovData::build(nvars, weight, k_max.max(1))?;
        for k in 0..=k_max {
            for c in verify_cstree(&md, k, weight)? {
                r.check(|| format!("k={k} args={}", render_args(&c.args)), &c.cs_side, &c.tree_side, show);
            }
        }
        Ok(())
    })
}

/// Closedness, trace and co-side checks for β(u; n, p) with n + p ≤ cap.
pub fn conj1(nvars: u8, cap: usize) -> Result<VerificationReport> {
    timed("conj1", |r| {
        for c in verify_conj1(nvars, cap)? {
            let flags = format!("closed={} trace={} eps={}", c.closed, c.trace_matches, c.eps_matches);
            if c.ok() {
                r.pass();
            } else {
                r.fail(c.alpha.to_string(), "closed=true trace=true eps=true".into(), flags);
            }
        }
        Ok(())
    })
}

/// Both Cartan routes (asserted inside trace_cartan), S_n invariance, and
/// Σ_q P_q(ϑ) = symmetrization on a generator sample.
pub fn cartan(nvars: u8, weight: usize, n_max: u8, q_max: usize) -> Result<VerificationReport> {
    timed("cartan", |r| {
        for w in enumerate_forms(nvars, 0..=weight, 0..=nvars as usize)? {
            for n in 1..=n_max {
                for q in 0..=q_max {
                    match trace_cartan(&w, n, q) {
                        Ok(v) if is_sn_invariant(&v, n) => r.pass(),
                        Ok(v) => r.fail(format!("{w} n={n} q={q}"), "S_n invariant".into(), render_tensor(&v, n)),
                        Err(e) => r.fail(format!("{w} n={n} q={q}"), "routes agree".into(), e.to_string()),
                    }
                }
            }
        }
        let mut sample: Vec<AlgebraElement> = Vec::new();
        for i in 1..=nvars {
            sample.push(AlgebraElement::x(i));
            for j in i + 1..=nvars {
                sample.push(AlgebraElement::lam(&[i, j]));
                sample.push(&AlgebraElement::x(i) * &AlgebraElement::lam(&[i, j]));
            }
        }
        if nvars >= 3 {
            sample.push(AlgebraElement::lam(&[1, 2, 3]));
            sample.push(&AlgebraElement::lam(&[1, 2]) * &AlgebraElement::lam(&[1, 3]));
        }
        for t in &sample {
            for n in 1..=n_max {
                let got = vartheta_total(t, n)?;
                r.check(|| format!("symmetrization {t} n={n}"), &symmetrization(t, n), &got, |v| render_tensor(v, n));
            }
        }
        Ok(())
    })
}

/// d² = 0, ι² = 0 and the Cartan–Euler identity on basis forms, and the HKR round trip.
pub fn derham(nvars: u8, weight: usize) -> Result<VerificationReport> {
    timed("derham", |r| {
        for w in enumerate_forms(nvars, 0..=weight, 0..=nvars as usize)? {
            let z = Form::zero(nvars);
            r.check(|| format!("d² {w}"), &z, &w.d().d(), |f| f.to_string());
            r.check(|| format!("ι² {w}"), &z, &w.euler_contract().euler_contract(), |f| f.to_string());
            r.check(|| format!("Cartan–Euler {w}"), &z, &cartan_euler_residual(&w), |f| f.to_string());
        }
        for (w, ok) in verify_hkr(nvars, weight)? {
            if ok {
                r.pass();
            } else {
                r.fail(format!("HKR {w}"), "round trip".into(), "not homologous".into());
            }
        }
        Ok(())
    })
}

/// δ² = 0 and abelianisation kills δ on every word up to the weight cap.
pub fn resolution(nvars: u8, weight: usize) -> Result<VerificationReport> {
    timed("resolution", |r| {
        for wt in 1..=weight {
            for w in words_of_weight(nvars, wt) {
                let e = RElement::word(w.clone());
                let d = delta_r(&e);
                r.check(|| format!("δ² {w}"), &RElement::zero(), &delta_r(&d), |v| v.to_string());
                r.check(|| format!("ab∘δ {w}"), &AlgebraElement::zero(), &abelianize(&d), show);
            }
        }
        Ok(())
    })
}

/// Per-(degree, weight) dims of H(C̄^λ(A)) and H(C̄^λ(R)) against Ω/dΩ.
pub fn homology_crosscheck(nvars: u8, weight: usize, degree: usize) -> Result<VerificationReport> {
    timed("homology", |r| {
        let dr = derham_quotient_dims(nvars, weight, degree)?;
        for amb in [Ambient::A, Ambient::R] {
            let h = homology(&build_connes_complex(amb, nvars, weight, degree)?)?;
            for d in 0..=degree {
                for w in 1..=weight {
                    r.check(|| format!("{amb:?} N={nvars} d={d} w={w}"), &dr.dim(d, w), &h.dim(d, w), |v| v.to_string());
                }
            }
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcalg::Rational;

    fn assert_ok(r: VerificationReport) {
        assert!(r.ok(), "{}: {:?}", r.summary(), r.failures.first());
        assert!(r.cases > 0, "{}", r.summary());
    }

    #[test]
    fn small_suites() {
        assert_ok(two_variable(2).unwrap());
        assert_ok(three_variable(2).unwrap());
        assert_ok(low_degree(2, 3).unwrap());
        assert_ok(operator_identity(3, 2).unwrap());
        assert_ok(resolution(2, 4).unwrap());
        assert_ok(derham(2, 3).unwrap());
        assert_ok(cartan(2, 2, 2, 1).unwrap());
        assert_ok(merkulov(2, 3, 2).unwrap());
    }

    #[test]
    fn failures_are_reported() {
        let mut r = VerificationReport::new("t");
        r.check(|| "a".into(), &Rational::from_integer(1.into()), &Rational::from_integer(2.into()), |v| v.to_string());
        assert_eq!(r.cases, 1);
        assert_eq!(r.failures[0], Failure { input: "a".into(), expected: "1".into(), got: "2".into() });
    }
}
