//! Reduced trace evaluators Ω•/dΩ → R_ab and the differential operators D, D̂.
//!
//! All routes work on the multilinear expansion of a form monomial
//! `c * u_1..u_n du_{n+1}..du_{n+p}`, treating every factor as a distinct
//! labelled occupant. The du are odd; the sign of sending them to slots is
//! the parity of the inversions of their destination sequence.

use itertools::Itertools;
use num::{One, Zero};
use rayon::prelude::*;

use crate::derham::{split_monomial, ExpandedTerm, Form};
use crate::error::{Error, Result};
use crate::gcalg::{factorial, int, inversion_parity, AlgebraElement, Gen, Monomial, Rational};
use crate::resolution::s_inv;

/// The independent trace routes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TraceMethod {
    /// Σ_q 1/(q+1)! [θ·Ω^q](dω) by explicit slot assignment.
    ChernSimonsRaw,
    /// F(dω), the q = r slot sum with the symmetric factor collapsed.
    ChernSimonsCollapsed,
    /// The closed sum over maps f from differentials to polynomial factors.
    SimpleFormula,
    /// Closed differential-operator formulas, form degree at most 2.
    DiffOpLowDegree,
}

impl TraceMethod {
    pub const ALL: [TraceMethod; 4] = [
        TraceMethod::ChernSimonsRaw,
        TraceMethod::ChernSimonsCollapsed,
        TraceMethod::SimpleFormula,
        TraceMethod::DiffOpLowDegree,
    ];
}

pub fn trace(omega: &Form, method: TraceMethod) -> Result<AlgebraElement> {
    match method {
        TraceMethod::ChernSimonsRaw => Ok(cs_trace_raw(omega)),
        TraceMethod::ChernSimonsCollapsed => Ok(f_eval(&omega.d())),
        TraceMethod::SimpleFormula => Ok(trace_simple(omega)),
        TraceMethod::DiffOpLowDegree => trace_diffop(omega),
    }
}

fn product(factors: impl IntoIterator<Item = AlgebraElement>) -> AlgebraElement {
    let mut acc = AlgebraElement::one();
    for f in factors {
        if acc.is_zero() {
            break;
        }
        acc = &acc * &f;
    }
    acc
}

fn signed(neg: bool, c: &Rational) -> Rational {
    if neg {
        -c.clone()
    } else {
        c.clone()
    }
}

/// θ on a monomial f dx_I: f(0) λ(dx_I) when the form degree is positive.
pub fn theta_eval(m: &Monomial<Gen>) -> AlgebraElement {
    let (x, dxs) = split_monomial(m);
    if dxs.is_empty() || x.terms().any(|(m, _)| !m.is_one()) {
        return AlgebraElement::zero();
    }
    AlgebraElement::lam(&dxs)
}

/// Ω on a monomial f dx_I: λ(f, x_I) when f is a single variable, else 0.
pub fn omega_eval(m: &Monomial<Gen>) -> AlgebraElement {
    let (x, dxs) = split_monomial(m);
    let (xm, _) = x.terms().next().expect("monomial part is nonzero");
    match xm.factors() {
        [(Gen::X(i), 1)] => {
            let mut v = vec![*i];
            v.extend(&dxs);
            AlgebraElement::lam(&v)
        }
        _ => AlgebraElement::zero(),
    }
}

/// θ on an expanded slot: λ of the differentials if no polynomial factor.
pub(crate) fn theta_slot(us: &[u8], dus: &[u8]) -> AlgebraElement {
    if us.is_empty() && !dus.is_empty() {
        AlgebraElement::lam(dus)
    } else {
        AlgebraElement::zero()
    }
}

/// Ω on an expanded slot: λ(u, differentials) for exactly one polynomial factor.
pub(crate) fn omega_slot(us: &[u8], dus: &[u8]) -> AlgebraElement {
    if us.len() == 1 {
        let mut v = us.to_vec();
        v.extend_from_slice(dus);
        AlgebraElement::lam(&v)
    } else {
        AlgebraElement::zero()
    }
}

/// One summand of the iterated coproduct of a multilinear term into `q+1` slots.
#[derive(Clone, Debug)]
pub struct SlotAssignment {
    /// Sign flag of moving the differentials into slot order.
    pub neg: bool,
    /// Polynomial factors per slot (variable indices).
    pub us: Vec<Vec<u8>>,
    /// Differentials per slot (variable indices, in source order).
    pub dus: Vec<Vec<u8>>,
}

/// Enumerates the assignments of the factors of `term` to `q+1` slots.
///
/// With `prune` set, assignments that θ·Ω^q must kill (a polynomial factor
/// in slot 0, two in one later slot) are skipped.
pub fn for_each_slot_assignment(
    us: &[u8],
    dus: &[u8],
    q: usize,
    prune: bool,
    mut visit: impl FnMut(&SlotAssignment),
) {
    let slots = q + 1;
    let mut u_dest = vec![0usize; us.len()];
    let mut du_dest = vec![0usize; dus.len()];
    let mut u_count = vec![0usize; slots];

    fn rec_du(
        i: usize,
        slots: usize,
        us: &[u8],
        dus: &[u8],
        u_dest: &[usize],
        du_dest: &mut [usize],
        visit: &mut dyn FnMut(&SlotAssignment),
    ) {
        if i == dus.len() {
            let mut a = SlotAssignment {
                neg: inversion_parity(du_dest),
                us: vec![Vec::new(); slots],
                dus: vec![Vec::new(); slots],
            };
            for (k, &s) in u_dest.iter().enumerate() {
                a.us[s].push(us[k]);
            }
            for (k, &s) in du_dest.iter().enumerate() {
                a.dus[s].push(dus[k]);
            }
            visit(&a);
            return;
        }
        for s in 0..slots {
            du_dest[i] = s;
            rec_du(i + 1, slots, us, dus, u_dest, du_dest, visit);
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn rec_u(
        i: usize,
        slots: usize,
        prune: bool,
        us: &[u8],
        dus: &[u8],
        u_dest: &mut [usize],
        u_count: &mut [usize],
        du_dest: &mut [usize],
        visit: &mut dyn FnMut(&SlotAssignment),
    ) {
        if i == us.len() {
            rec_du(0, slots, us, dus, u_dest, du_dest, visit);
            return;
        }
        for s in 0..slots {
            if prune && (s == 0 || u_count[s] > 0) {
                continue;
            }
            u_dest[i] = s;
            u_count[s] += 1;
            rec_u(i + 1, slots, prune, us, dus, u_dest, u_count, du_dest, visit);
            u_count[s] -= 1;
        }
    }

    rec_u(0, slots, prune, us, dus, &mut u_dest, &mut u_count, &mut du_dest, &mut visit);
}

/// [θ·Ω^q] on one multilinear term (without the coefficient), optionally
/// restricted to assignments accepted by `keep`.
fn theta_omega_term(
    us: &[u8],
    dus: &[u8],
    q: usize,
    prune: bool,
    keep: &dyn Fn(&SlotAssignment) -> bool,
) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for_each_slot_assignment(us, dus, q, prune, |a| {
        if !keep(a) {
            return;
        }
        let v = product(
            std::iter::once(theta_slot(&a.us[0], &a.dus[0]))
                .chain((1..=q).map(|s| omega_slot(&a.us[s], &a.dus[s]))),
        );
        if !v.is_zero() {
            out += if a.neg { -v } else { v };
        }
    });
    out
}

/// 1/(q+1)! [θ·Ω^q](η) evaluated by the unpruned slot enumeration.
pub fn cs_component(eta: &Form, q: usize) -> AlgebraElement {
    let scale = Rational::from_integer(factorial(q + 1)).recip();
    eta.expanded_terms()
        .par_iter()
        .map(|t| theta_omega_term(&t.us, &t.dus, q, false, &|_| true).scale(&(&t.coeff * &scale)))
        .reduce(AlgebraElement::zero, |a, b| a + b)
}

/// Σ_q 1/(q+1)! [θ·Ω^q](dω), enumerating every slot count up to the number of factors.
pub fn cs_trace_raw(omega: &Form) -> AlgebraElement {
    let eta = omega.d();
    eta.expanded_terms()
        .par_iter()
        .map(|t| {
            let mut acc = AlgebraElement::zero();
            for q in 0..=t.us.len() + t.dus.len() {
                let scale = Rational::from_integer(factorial(q + 1)).recip();
                acc += theta_omega_term(&t.us, &t.dus, q, true, &|_| true).scale(&(&t.coeff * &scale));
            }
            acc
        })
        .reduce(AlgebraElement::zero, |a, b| a + b)
}

/// The slot counts q ≠ r (r = polynomial degree of dω) whose unpruned
/// slot sum on dω is nonzero; empty when only q = r contributes.
pub fn cs_spurious_components(omega: &Form) -> Vec<usize> {
    let eta = omega.d();
    let mut bad = Vec::new();
    for ((r, p), part) in eta.bigrade_split() {
        for q in 0..=r + p + 1 {
            if q != r && !cs_component(&part, q).is_zero() {
                bad.push(q);
            }
        }
    }
    bad
}

/// Σ_f (-1)^f Π_j λ(u_j, du_{f⁻¹(j)}) over maps f from differentials to
/// polynomial factors; a term with no polynomial factor contributes 0.
pub fn trace_simple(omega: &Form) -> AlgebraElement {
    omega
        .expanded_terms()
        .par_iter()
        .map(|t| simple_term(t))
        .reduce(AlgebraElement::zero, |a, b| a + b)
}

fn simple_term(t: &ExpandedTerm) -> AlgebraElement {
    let n = t.us.len();
    let mut out = AlgebraElement::zero();
    if n == 0 {
        return out;
    }
    for f in std::iter::repeat(0..n).take(t.dus.len()).multi_cartesian_product() {
        let v = product((0..n).map(|j| {
            let mut block = vec![t.us[j]];
            block.extend(f.iter().zip(&t.dus).filter(|(&b, _)| b == j).map(|(_, &d)| d));
            AlgebraElement::lam(&block)
        }));
        out += v.scale(&signed(inversion_parity(&f), &t.coeff));
    }
    out
}

/// F(η) = 1/(n+1) Σ_f ± λ(du_{f⁻¹(0)}) Π_j λ(u_j, du_{f⁻¹(j)}); an empty
/// block 0 gives 0. F(dω) is the trace of ω.
pub fn f_eval(eta: &Form) -> AlgebraElement {
    eta.expanded_terms()
        .par_iter()
        .map(|t| {
            let n = t.us.len();
            let mut out = AlgebraElement::zero();
            for f in std::iter::repeat(0..=n).take(t.dus.len()).multi_cartesian_product() {
                let block = |j: usize| -> Vec<u8> {
                    f.iter().zip(&t.dus).filter(|(&b, _)| b == j).map(|(_, &d)| d).collect()
                };
                let head = block(0);
                if head.is_empty() {
                    continue;
                }
                let v = product(std::iter::once(AlgebraElement::lam(&head)).chain((1..=n).map(|j| {
                    let mut b = vec![t.us[j - 1]];
                    b.extend(block(j));
                    AlgebraElement::lam(&b)
                })));
                out += v.scale(&signed(inversion_parity(&f), &t.coeff));
            }
            out.scale(&Rational::new(One::one(), (n as i64 + 1).into()))
        })
        .reduce(AlgebraElement::zero, |a, b| a + b)
}

fn check_tuple(k: usize, tuple: &[usize]) -> Result<()> {
    let m = tuple.len();
    let ok = m >= 1
        && tuple.iter().sum::<usize>() == k + m - 1
        && tuple[..m - 1].iter().all(|&i| i >= 2)
        && tuple[m - 1] >= 1;
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "tuple {tuple:?} is not admissible for {k}-forms (need i_1..i_(m-1) >= 2, i_m >= 1, sum = k+m-1)"
        )))
    }
}

/// The differential operator D^{(i_1..i_m)} on k-forms.
///
/// Iterates the splitting u ⊗ B ↦ 1/p! Σ_J ± (u ∧ B_J) ⊗ (B ∖ B_J) on the
/// leading block, contracts the dual vectors into the coefficient as
/// derivatives and maps every block through λ. The sign of choosing
/// positions j_1 < .. < j_{p-1} is (-1)^{Σ (j_s - s)}, the sign of moving
/// them to the front.
pub fn d_op(omega: &Form, tuple: &[usize]) -> Result<AlgebraElement> {
    let nvars = omega.nvars();
    let mut out = AlgebraElement::zero();
    for ((_, k), part) in omega.bigrade_split() {
        check_tuple(k, tuple)?;
        for (mono, c) in part.body().terms() {
            let (f, v) = split_monomial(mono);
            // (coefficient, derivative indices, blocks)
            let mut states: Vec<(Rational, Vec<u8>, Vec<Vec<u8>>)> = vec![(c.clone(), vec![], vec![v])];
            for s in (1..tuple.len()).rev() {
                let mut next = Vec::new();
                for (coef, ders, blocks) in &states {
                    let b = &blocks[0];
                    if tuple[s] > b.len() {
                        continue;
                    }
                    let p = b.len() + 1 - tuple[s];
                    let scale = Rational::from_integer(factorial(p)).recip();
                    for a in 1..=nvars {
                        for js in (0..b.len()).combinations(p - 1) {
                            let shift: usize = js.iter().enumerate().map(|(s, j)| j - s).sum();
                            let mut first = vec![a];
                            first.extend(js.iter().map(|&j| b[j]));
                            let rest: Vec<u8> =
                                (0..b.len()).filter(|j| !js.contains(j)).map(|j| b[j]).collect();
                            let mut nb = vec![first, rest];
                            nb.extend(blocks[1..].iter().cloned());
                            let mut nd = ders.clone();
                            nd.push(a);
                            let sc = if shift % 2 == 0 { coef * &scale } else { -(coef * &scale) };
                            next.push((sc, nd, nb));
                        }
                    }
                }
                states = next;
            }
            for (coef, ders, blocks) in states {
                let mut g = f.clone();
                for a in &ders {
                    g = g.partial(*a);
                }
                if g.is_zero() {
                    continue;
                }
                let v = product(std::iter::once(g).chain(blocks.iter().map(|b| AlgebraElement::lam(b))));
                out += v.scale(&coef);
            }
        }
    }
    Ok(out)
}

/// D̂^{(i_1..i_m)}(η): 1/r! times the q = r slot sum of [θ·Ω^r](η)
/// restricted to |T_1| = i_m and nonempty later differential blocks of
/// sizes i_1-1, .., i_{m-1}-1.
pub fn hat_d_op(eta: &Form, tuple: &[usize]) -> Result<AlgebraElement> {
    let mut out = AlgebraElement::zero();
    let m = tuple.len();
    let mut want: Vec<usize> = tuple[..m - 1].iter().map(|i| i - 1).collect();
    want.sort_unstable();
    for ((r, k), part) in eta.bigrade_split() {
        check_tuple(k, tuple)?;
        let keep = |a: &SlotAssignment| {
            if a.dus[0].len() != tuple[m - 1] {
                return false;
            }
            let mut sizes: Vec<usize> = a.dus[1..].iter().map(|d| d.len()).filter(|&l| l > 0).collect();
            sizes.sort_unstable();
            sizes == want
        };
        let scale = Rational::from_integer(factorial(r)).recip();
        for t in part.expanded_terms() {
            out += theta_omega_term(&t.us, &t.dus, r, true, &keep).scale(&(&t.coeff * &scale));
        }
    }
    Ok(out)
}

/// Closed formulas in low form degree: ω for 0-forms, s⁻¹dω for 1-forms
/// and s⁻¹dω - D^{(2,2)}dω for 2-forms.
pub fn trace_diffop(omega: &Form) -> Result<AlgebraElement> {
    let mut out = AlgebraElement::zero();
    for ((w, l), part) in omega.bigrade_split() {
        match l {
            0 => {
                if w > 0 {
                    out += part.body().clone();
                }
            }
            1 => out += s_inv(&part.d())?,
            2 => {
                let dw = part.d();
                out += s_inv(&dw)? - d_op(&dw, &[2, 2])?;
            }
            _ => {
                return Err(Error::UnsupportedDegree(format!(
                    "the differential-operator route covers form degree <= 2, got {l}; use the cs or simple route"
                )))
            }
        }
    }
    Ok(out)
}

/// A_i = (-1)^i (r+1)! r! / (2^i (r-i)! (r+1+i)!).
pub fn cs_coefficient(r: usize, i: usize) -> Result<Rational> {
    if i > r {
        return Err(Error::InvalidInput(format!("cs_coefficient needs 0 <= i <= r, got r={r}, i={i}")));
    }
    let num = factorial(r + 1) * factorial(r);
    let den = num::BigInt::from(2).pow(i as u32) * factorial(r - i) * factorial(r + 1 + i);
    let a = Rational::new(num, den);
    Ok(if i % 2 == 0 { a } else { -a })
}

/// Fits constants c with trace = s⁻¹dω + Σ_t c_t D^{t}(dω) on all l-forms
/// in `nvars` variables with coefficients of degree r+1, over the given tuples.
/// Returns `None` when no such constants exist.
pub fn fit_diffop_constants(nvars: u8, l: usize, r: usize, tuples: &[Vec<usize>]) -> Result<Option<Vec<Rational>>> {
    use std::collections::BTreeMap;
    let forms = crate::derham::enumerate_forms(nvars, r + 1..=r + 1, l..=l)?;
    let mut rows: Vec<(Vec<AlgebraElement>, AlgebraElement)> = Vec::new();
    for w in &forms {
        let dw = w.d();
        if dw.is_zero() {
            continue;
        }
        let target = trace_simple(w) - s_inv(&dw)?;
        let cols = tuples.iter().map(|t| d_op(&dw, t)).collect::<Result<Vec<_>>>()?;
        rows.push((cols, target));
    }
    let mut index: BTreeMap<Monomial<Gen>, usize> = BTreeMap::new();
    for (cols, target) in &rows {
        for e in cols.iter().chain(std::iter::once(target)) {
            for (m, _) in e.terms() {
                let n = index.len();
                index.entry(m.clone()).or_insert(n);
            }
        }
    }
    let dim = index.len() * rows.len();
    let mut columns = vec![vec![Rational::zero(); dim]; tuples.len()];
    let mut rhs = vec![Rational::zero(); dim];
    for (ri, (cols, target)) in rows.iter().enumerate() {
        let off = ri * index.len();
        for (ci, e) in cols.iter().enumerate() {
            for (m, c) in e.terms() {
                columns[ci][off + index[m]] = c.clone();
            }
        }
        for (m, c) in target.terms() {
            rhs[off + index[m]] = c.clone();
        }
    }
    Ok(crate::linalg::solve(&columns, dim, &rhs))
}

/// Convenience: the integer `n` as a rational.
pub fn q(n: i64) -> Rational {
    int(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derham::enumerate_forms;
    use crate::gcalg::rat;

    fn f(alpha: &[u32], dx: &[u8]) -> Form {
        Form::monomial(3, alpha, dx).unwrap()
    }
    fn lam(i: &[u8]) -> AlgebraElement {
        AlgebraElement::lam(i)
    }
    fn x(i: u8) -> AlgebraElement {
        AlgebraElement::x(i)
    }

    #[test]
    fn theta_and_omega_examples() {
        let m = |a: &[u32], dx: &[u8]| f(a, dx).body().terms().next().unwrap().0.clone();
        assert_eq!(theta_eval(&m(&[0, 0, 0], &[1, 2])), lam(&[1, 2]));
        assert!(theta_eval(&m(&[1, 0, 0], &[2])).is_zero());
        assert!(theta_eval(&Monomial::one()).is_zero());
        assert_eq!(omega_eval(&m(&[1, 0, 0], &[2])), lam(&[1, 2]));
        assert!(omega_eval(&m(&[2, 0, 0], &[2])).is_zero());
        assert_eq!(omega_eval(&m(&[0, 1, 0], &[1])), -lam(&[1, 2]));
    }

    #[test]
    fn simple_examples() {
        assert_eq!(trace_simple(&f(&[1, 0, 0], &[2])), lam(&[1, 2]));
        assert_eq!(
            trace_simple(&f(&[1, 1, 0], &[3])),
            &x(2) * &lam(&[1, 3]) + &x(1) * &lam(&[2, 3])
        );
        assert!(trace_simple(&f(&[0, 0, 0], &[1, 2])).is_zero());
        assert_eq!(trace_simple(&f(&[2, 0, 0], &[2])), (&x(1) * &lam(&[1, 2])).scale(&int(2)));
    }

    #[test]
    fn cs_examples() {
        let g = f(&[2, 1, 0], &[]);
        assert_eq!(cs_trace_raw(&g), g.body().clone());
        assert_eq!(cs_trace_raw(&f(&[1, 0, 0], &[2])), lam(&[1, 2]));
        assert_eq!(cs_trace_raw(&f(&[2, 0, 0], &[2])), (&x(1) * &lam(&[1, 2])).scale(&int(2)));
    }

    #[test]
    fn f_eval_examples() {
        assert_eq!(f_eval(&f(&[0, 0, 0], &[1])), x(1));
        assert_eq!(f_eval(&f(&[1, 0, 0], &[2]).d()), lam(&[1, 2]));
    }

    #[test]
    fn d22_display() {
        // D^{(2,2)}(x1 dx1 dx2 dx3) = 1/2 [0 - λ(1,2)λ(1,3) + λ(1,3)λ(1,2)] = -λ(1,2)λ(1,3)
        let got = d_op(&f(&[1, 0, 0], &[1, 2, 3]), &[2, 2]).unwrap();
        assert_eq!(got, -(&lam(&[1, 2]) * &lam(&[1, 3])));
        assert!(d_op(&f(&[1, 0, 0], &[1, 2, 3]), &[3, 3]).is_err());
        // the (1, k) splitting is the identity: D^{(1,k)}... p = 1 at the last step
        let w = f(&[1, 1, 0], &[1, 3]);
        assert_eq!(d_op(&w, &[2]).unwrap(), s_inv(&w).unwrap());
    }

    #[test]
    fn coefficients() {
        for r in 0..=6 {
            assert_eq!(cs_coefficient(r, 0).unwrap(), int(1));
        }
        assert_eq!(cs_coefficient(1, 1).unwrap(), rat(-1, 6));
        assert_eq!(cs_coefficient(2, 2).unwrap(), rat(1, 40));
        assert!(cs_coefficient(1, 2).is_err());
        // (r+1) C(r,i) (-1/2)^i ∫_0^1 t^r (1-t)^i dt, the Chern–Simons integral
        for r in 0..=6usize {
            for i in 0..=r {
                let binom = Rational::from_integer(factorial(r) / (factorial(i) * factorial(r - i)));
                let beta = Rational::new(factorial(r) * factorial(i), factorial(r + i + 1));
                let half = rat(-1, 2);
                let pow = (0..i).fold(int(1), |acc, _| acc * &half);
                let expect = int(r as i64 + 1) * binom * pow * beta;
                assert_eq!(cs_coefficient(r, i).unwrap(), expect, "A_{i} for r={r}");
            }
        }
    }

    #[test]
    fn routes_agree_small() {
        for w in enumerate_forms(3, 0..=3, 0..=2).unwrap() {
            let s = trace_simple(&w);
            assert_eq!(cs_trace_raw(&w), s, "cs vs simple on {w}");
            assert_eq!(f_eval(&w.d()), s, "F∘d vs simple on {w}");
            assert_eq!(trace_diffop(&w).unwrap(), s, "diffop vs simple on {w}");
        }
    }

    #[test]
    fn only_q_equal_r_contributes() {
        for w in enumerate_forms(2, 0..=3, 0..=1).unwrap() {
            assert!(cs_spurious_components(&w).is_empty(), "{w}");
        }
    }

    #[test]
    fn hat_d_relations() {
        for w in enumerate_forms(3, 1..=3, 1..=2).unwrap() {
            let eta = w.d();
            if eta.is_zero() {
                continue;
            }
            let l = eta.form_degree().unwrap() - 1;
            // D̂^{(l+1,1)} = s⁻¹(dι - l - 1)
            let lhs = hat_d_op(&eta, &[l + 1, 1]).unwrap();
            let rhs = s_inv(&eta.euler_contract().d().sub(&eta.scale(&int(l as i64 + 1)))).unwrap();
            assert_eq!(lhs, rhs, "hat D^(l+1,1) on {eta}");
            if l == 2 {
                let r = eta.bigrade_split().keys().next().unwrap().0 as i64;
                let d22 = d_op(&eta, &[2, 2]).unwrap();
                assert_eq!(hat_d_op(&eta, &[2, 2]).unwrap(), d22.scale(&int(-2)), "hat c(2,2) on {eta}");
                assert_eq!(hat_d_op(&eta, &[2, 2, 1]).unwrap(), d22.scale(&int(1 - r)), "(2,2,1) on {eta}");
            }
        }
    }

    #[test]
    fn two_variable_one_forms() {
        // P dx + Q dy ↦ (Q_x - P_y) λ(x,y)
        for w in enumerate_forms(2, 0..=3, 1..=1).unwrap() {
            let body = w.body();
            let p = body.filter(|m| m.exponent(&Gen::Dx(1)) == 1);
            let qq = body.filter(|m| m.exponent(&Gen::Dx(2)) == 1);
            let strip = |e: &AlgebraElement, i: u8| {
                e.map_linear(|m| {
                    let (xp, _) = split_monomial(m);
                    let _ = i;
                    xp
                })
            };
            let (p, qq) = (strip(&p, 1), strip(&qq, 2));
            let expect = &(qq.partial(1) - p.partial(2)) * &lam(&[1, 2]);
            assert_eq!(trace_diffop(&w).unwrap(), expect);
        }
    }
}
