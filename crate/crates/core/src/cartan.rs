//! Reduced traces for the diagonal Cartan data (h_n, S_n, power sums).
//!
//! A value in S^n[R_ab] is stored as a polynomial in slot generators
//! `Slot(α, g)`, the generator g of R_ab placed in tensor slot α.

use std::fmt;

use itertools::Itertools;
use num::{One, Zero};

use crate::derham::Form;
use crate::error::{check_budget, Error, Result};
use crate::gcalg::{factorial, AlgebraElement, Gen, Monomial, Rational, Symbol};
use crate::trace::{for_each_slot_assignment, omega_slot, theta_slot, trace_simple};

/// Generators used while evaluating on h_n: `Slot(α, g)` carries the parity of g,
/// `H(α)` is the even coordinate ξ_α of h_n.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CartanGen {
    Slot(u8, Gen),
    H(u8),
}

impl fmt::Display for CartanGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CartanGen::Slot(a, g) => write!(f, "{g}@{a}"),
            CartanGen::H(a) => write!(f, "xi{a}"),
        }
    }
}

impl Symbol for CartanGen {
    fn is_odd(&self) -> bool {
        match self {
            CartanGen::Slot(_, g) => g.is_odd(),
            CartanGen::H(_) => false,
        }
    }
}

pub type DiagonalTraceValue = AlgebraElement<CartanGen>;

/// An invariant polynomial on h_n, applied as a contraction of the ξ_α factors.
pub trait InvariantPolynomial {
    fn degree(&self) -> usize;
    fn contract(&self, v: &AlgebraElement<CartanGen>) -> DiagonalTraceValue;
}

/// P_q = Σ_α ξ_α^{q+1}, the monic (q+1)-th power sum.
#[derive(Clone, Copy, Debug)]
pub struct PowerSum {
    pub q: usize,
}

impl InvariantPolynomial for PowerSum {
    fn degree(&self) -> usize {
        self.q + 1
    }

    /// Keeps the terms whose ξ part is ξ_α^{q+1} for a single α, dropping it.
    fn contract(&self, v: &AlgebraElement<CartanGen>) -> DiagonalTraceValue {
        let mut out = DiagonalTraceValue::zero();
        for (m, c) in v.terms() {
            let hs: Vec<_> = m.factors().iter().filter(|(g, _)| matches!(g, CartanGen::H(_))).collect();
            if hs.len() != 1 || hs[0].1 as usize != self.q + 1 {
                continue;
            }
            let rest = m.factors().iter().filter(|(g, _)| !matches!(g, CartanGen::H(_))).cloned();
            let (neg, rest) = Monomial::from_factors(rest).expect("subset of a valid monomial");
            out.add_signed(neg, c.clone(), rest);
        }
        out
    }
}

fn theta_gen(g: &Gen, n: u8) -> AlgebraElement<CartanGen> {
    let mut out = AlgebraElement::zero();
    for a in 1..=n {
        let (_, m) = Monomial::from_factors([(CartanGen::Slot(a, g.clone()), 1), (CartanGen::H(a), 1)])
            .expect("distinct generators");
        out.add_term(Rational::one(), m);
    }
    out
}

/// ϑ_h: every generator g of R_ab becomes Σ_α Slot(α, g)·ξ_α, extended multiplicatively.
pub fn vartheta(t: &AlgebraElement, n: u8) -> Result<AlgebraElement<CartanGen>> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let mut out = AlgebraElement::zero();
    for (m, c) in t.terms() {
        check_budget("vartheta expansion", (n as usize).saturating_pow(m.length() as u32))?;
        let mut acc = AlgebraElement::constant(c.clone());
        for (g, e) in m.factors() {
            for _ in 0..*e {
                acc = &acc * &theta_gen(g, n);
            }
        }
        out += acc;
    }
    Ok(out)
}

/// P_q(ϑ_h)(t).
pub fn vartheta_power_sum(t: &AlgebraElement, n: u8, q: usize) -> Result<DiagonalTraceValue> {
    Ok(PowerSum { q }.contract(&vartheta(t, n)?))
}

/// Σ_q P_q(ϑ_h)(t), summing every q that can contribute.
pub fn vartheta_total(t: &AlgebraElement, n: u8) -> Result<DiagonalTraceValue> {
    let top = t.terms().map(|(m, _)| m.length()).max().unwrap_or(0);
    let mut out = DiagonalTraceValue::zero();
    for q in 0..top {
        out += vartheta_power_sum(t, n, q)?;
    }
    Ok(out)
}

/// r ↦ Σ_α (1, .., r, .., 1): the whole of r placed in slot α.
pub fn symmetrization(t: &AlgebraElement, n: u8) -> DiagonalTraceValue {
    let mut out = DiagonalTraceValue::zero();
    for a in 1..=n {
        out += t.map_linear(|m| {
            let (neg, mm) = Monomial::from_factors(m.factors().iter().map(|(g, e)| (CartanGen::Slot(a, g.clone()), *e)))
                .expect("same order and parity");
            let mut e = DiagonalTraceValue::zero();
            e.add_signed(neg, Rational::one(), mm);
            e
        });
    }
    out
}

/// Relabels slots by α ↦ perm[α-1], with Koszul signs from re-sorting.
pub fn permute_slots(v: &DiagonalTraceValue, perm: &[u8]) -> DiagonalTraceValue {
    v.map_linear(|m| {
        let f = m.factors().iter().map(|(g, e)| {
            let g = match g {
                CartanGen::Slot(a, x) => CartanGen::Slot(perm[*a as usize - 1], x.clone()),
                CartanGen::H(a) => CartanGen::H(perm[*a as usize - 1]),
            };
            (g, *e)
        });
        let mut e = DiagonalTraceValue::zero();
        if let Some((neg, mm)) = Monomial::from_factors(f) {
            e.add_signed(neg, Rational::one(), mm);
        }
        e
    })
}

pub fn is_sn_invariant(v: &DiagonalTraceValue, n: u8) -> bool {
    (1..=n).permutations(n as usize).all(|p| permute_slots(v, &p) == *v)
}

/// Route (ii): 1/(q+1)! P_q(θ_h Ω_h^q)(dω) with θ_h = ϑ_h(θ), Ω_h = ϑ_h(Ω) evaluated slot by slot.
pub fn direct_cartan(omega: &Form, n: u8, q: usize) -> Result<DiagonalTraceValue> {
    let scale = Rational::from_integer(factorial(q + 1)).recip();
    let p = PowerSum { q };
    let mut out = DiagonalTraceValue::zero();
    let mut err = None;
    for t in omega.d().expanded_terms() {
        for_each_slot_assignment(&t.us, &t.dus, q, true, |a| {
            if err.is_some() {
                return;
            }
            let slots = std::iter::once(theta_slot(&a.us[0], &a.dus[0]))
                .chain((1..=q).map(|s| omega_slot(&a.us[s], &a.dus[s])));
            let mut acc = AlgebraElement::<CartanGen>::one();
            for s in slots {
                match vartheta(&s, n) {
                    Ok(v) => acc = &acc * &v,
                    Err(e) => {
                        err = Some(e);
                        return;
                    }
                }
                if acc.is_zero() {
                    return;
                }
            }
            let c = &t.coeff * &scale;
            out += p.contract(&acc).scale(&if a.neg { -c } else { c });
        });
    }
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Tr_{h_n} in invariant degree q+1, computed as P_q(ϑ_h)∘TTr and directly;
/// the two must agree.
pub fn trace_cartan(omega: &Form, n: u8, q: usize) -> Result<DiagonalTraceValue> {
    let via_rank_one = vartheta_power_sum(&trace_simple(omega), n, q)?;
    let direct = direct_cartan(omega, n, q)?;
    if via_rank_one != direct {
        return Err(Error::Integrity(format!(
            "Cartan routes differ on {omega} (n={n}, q={q}): {} vs {}",
            render_tensor(&via_rank_one, n),
            render_tensor(&direct, n)
        )));
    }
    Ok(direct)
}

/// Renders a value as a sum of n-fold tensors, e.g. `lam[1,2] ⊗ 1 + 1 ⊗ lam[1,2]`.
pub fn render_tensor(v: &DiagonalTraceValue, n: u8) -> String {
    if v.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (m, c)) in v.terms().enumerate() {
        let neg = c < &Rational::zero();
        let a = if neg { -c.clone() } else { c.clone() };
        out.push_str(match (i, neg) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        });
        if !a.is_one() {
            out.push_str(&format!("{}*", crate::gcalg::fmt_rational(&a)));
        }
        let slots: Vec<String> = (1..=n)
            .map(|s| {
                let parts: Vec<String> = m
                    .factors()
                    .iter()
                    .filter_map(|(g, e)| match g {
                        CartanGen::Slot(b, x) if *b == s => {
                            Some(if *e == 1 { x.to_string() } else { format!("{x}^{e}") })
                        }
                        _ => None,
                    })
                    .collect();
                if parts.is_empty() {
                    "1".into()
                } else {
                    parts.join("*")
                }
            })
            .collect();
        let hs: Vec<String> = m
            .factors()
            .iter()
            .filter(|(g, _)| matches!(g, CartanGen::H(_)))
            .map(|(g, e)| if *e == 1 { g.to_string() } else { format!("{g}^{e}") })
            .collect();
        out.push_str(&slots.join(" ⊗ "));
        if !hs.is_empty() {
            out.push_str(&format!(" {}", hs.join("*")));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derham::enumerate_forms;

    fn x(i: u8) -> AlgebraElement {
        AlgebraElement::x(i)
    }

    #[test]
    fn symmetrization_is_total_power_sum() {
        let samples = vec![
            AlgebraElement::lam(&[1, 2]),
            x(1),
            &x(1) * &AlgebraElement::lam(&[1, 2]),
            &AlgebraElement::lam(&[1, 2]) * &AlgebraElement::lam(&[1, 3]),
            &(&x(1) * &x(2)) + &AlgebraElement::lam(&[1, 2, 3]),
        ];
        for t in samples {
            for n in 1..=3 {
                assert_eq!(vartheta_total(&t, n).unwrap(), symmetrization(&t, n), "{t} n={n}");
            }
        }
        assert_eq!(
            render_tensor(&symmetrization(&AlgebraElement::lam(&[1, 2]), 2), 2),
            "lam[1,2] ⊗ 1 + 1 ⊗ lam[1,2]"
        );
        assert!(vartheta_total(&AlgebraElement::zero(), 2).unwrap().is_zero());
    }

    #[test]
    fn x1_dx2_on_h2() {
        let om = Form::new(2, &x(1) * &AlgebraElement::dx(2)).unwrap();
        let v = trace_cartan(&om, 2, 0).unwrap();
        assert_eq!(v, symmetrization(&AlgebraElement::lam(&[1, 2]), 2));
        assert!(trace_cartan(&om, 2, 1).unwrap().is_zero());
    }

    #[test]
    fn rank_one_is_trace() {
        for om in enumerate_forms(2, 1..=3, 0..=2).unwrap() {
            let tot: DiagonalTraceValue = (0..=3).map(|q| trace_cartan(&om, 1, q).unwrap()).fold(DiagonalTraceValue::zero(), |a, b| a + b);
            assert_eq!(tot, symmetrization(&trace_simple(&om), 1), "{om}");
        }
    }

    #[test]
    fn routes_agree_and_invariant() {
        for om in enumerate_forms(2, 0..=3, 0..=2).unwrap() {
            for n in 1..=3 {
                for q in 0..=2 {
                    let v = trace_cartan(&om, n, q).unwrap();
                    assert!(is_sn_invariant(&v, n), "{om} n={n} q={q}");
                }
            }
        }
    }
}
