//! Polynomial differential forms on affine space and the de Rham operators.

use std::collections::BTreeMap;

use num::{One, Zero};

use crate::error::{check_budget, Error, Result};
use crate::gcalg::{int, AlgebraElement, Gen, Monomial, Rational};
use crate::linalg;

/// A polynomial differential form in `x_1..x_N` and `dx_1..dx_N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form {
    nvars: u8,
    body: AlgebraElement,
}

/// One monomial `c * u_1 .. u_n du_{n+1} .. du_{n+p}` with the polynomial part
/// expanded into a list of variables (with repetition).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpandedTerm {
    pub coeff: Rational,
    pub us: Vec<u8>,
    pub dus: Vec<u8>,
}

impl Form {
    pub fn new(nvars: u8, body: AlgebraElement) -> Result<Form> {
        for (m, _) in body.terms() {
            for (g, _) in m.factors() {
                match g {
                    Gen::X(i) | Gen::Dx(i) if *i >= 1 && *i <= nvars => {}
                    Gen::Lam(_) => {
                        return Err(Error::InvalidInput(format!("{g} is not a form generator")))
                    }
                    _ => {
                        return Err(Error::InvalidInput(format!(
                            "{g} is out of range for {nvars} variables"
                        )))
                    }
                }
            }
        }
        Ok(Form { nvars, body })
    }

    pub fn zero(nvars: u8) -> Form {
        Form { nvars, body: AlgebraElement::zero() }
    }

    /// The basis form `x^alpha dx_J` as a Form (J must be strictly increasing).
    pub fn monomial(nvars: u8, alpha: &[u32], dx: &[u8]) -> Result<Form> {
        let mut e = AlgebraElement::one();
        for (i, &a) in alpha.iter().enumerate() {
            for _ in 0..a {
                e = &e * &AlgebraElement::x(i as u8 + 1);
            }
        }
        for &j in dx {
            e = &e * &AlgebraElement::dx(j);
        }
        Form::new(nvars, e)
    }

    pub fn nvars(&self) -> u8 {
        self.nvars
    }

    pub fn body(&self) -> &AlgebraElement {
        &self.body
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    fn with(&self, body: AlgebraElement) -> Form {
        Form { nvars: self.nvars, body }
    }

    pub fn add(&self, other: &Form) -> Form {
        self.with(&self.body + &other.body)
    }

    pub fn sub(&self, other: &Form) -> Form {
        self.with(&self.body - &other.body)
    }

    pub fn scale(&self, c: &Rational) -> Form {
        self.with(self.body.scale(c))
    }

    pub fn wedge(&self, other: &Form) -> Form {
        self.with(&self.body * &other.body)
    }

    /// Exterior derivative.
    pub fn d(&self) -> Form {
        self.with(self.body.map_linear(|m| d_monomial(m)))
    }

    /// Contraction with the Euler vector field `sum x_i d/dx_i`.
    pub fn euler_contract(&self) -> Form {
        self.with(self.body.map_linear(|m| {
            let (xpart, dxs) = split_monomial(m);
            let mut out = AlgebraElement::zero();
            for k in 0..dxs.len() {
                let mut t = xpart.clone() * AlgebraElement::x(dxs[k]);
                for (l, &j) in dxs.iter().enumerate() {
                    if l != k {
                        t = &t * &AlgebraElement::dx(j);
                    }
                }
                out += if k % 2 == 0 { t } else { -t };
            }
            out
        }))
    }

    /// Splits into homogeneous parts keyed by (polynomial degree, form degree).
    pub fn bigrade_split(&self) -> BTreeMap<(usize, usize), Form> {
        let mut out: BTreeMap<(usize, usize), AlgebraElement> = BTreeMap::new();
        for (m, c) in self.body.terms() {
            out.entry((m.x_degree(), m.dx_count()))
                .or_default()
                .add_term(c.clone(), m.clone());
        }
        out.into_iter().map(|(k, v)| (k, self.with(v))).collect()
    }

    /// Form degree if homogeneous.
    pub fn form_degree(&self) -> Option<usize> {
        let degs: std::collections::BTreeSet<usize> = self.body.terms().map(|(m, _)| m.dx_count()).collect();
        (degs.len() == 1).then(|| *degs.iter().next().unwrap())
    }

    /// Expands every monomial into its list of variables and differentials.
    pub fn expanded_terms(&self) -> Vec<ExpandedTerm> {
        self.body
            .terms()
            .map(|(m, c)| {
                let mut us = Vec::new();
                let mut dus = Vec::new();
                for (g, e) in m.factors() {
                    match g {
                        Gen::X(i) => us.extend(std::iter::repeat(*i).take(*e as usize)),
                        Gen::Dx(i) => dus.push(*i),
                        Gen::Lam(_) => unreachable!("forms carry no lambda generators"),
                    }
                }
                ExpandedTerm { coeff: c.clone(), us, dus }
            })
            .collect()
    }

    /// If `self` is exact, returns some η with dη = self.
    ///
    /// Works one bigrade at a time by an exact linear solve in the basis of
    /// forms of polynomial degree w+1 and form degree p-1.
    pub fn exactness_witness(&self) -> Result<Option<Form>> {
        let mut eta = Form::zero(self.nvars);
        for ((w, p), part) in self.bigrade_split() {
            if p == 0 {
                return Ok(None);
            }
            let basis = form_basis(self.nvars, w + 1, p - 1)?;
            let images: Vec<AlgebraElement> = basis.iter().map(|b| d_monomial(b)).collect();
            let target = form_basis(self.nvars, w, p)?;
            let index: BTreeMap<&Monomial<Gen>, usize> = target.iter().enumerate().map(|(i, m)| (m, i)).collect();
            let to_vec = |e: &AlgebraElement| {
                let mut v = vec![Rational::zero(); target.len()];
                for (m, c) in e.terms() {
                    v[index[m]] = c.clone();
                }
                v
            };
            let cols: Vec<Vec<Rational>> = images.iter().map(&to_vec).collect();
            let Some(x) = linalg::solve(&cols, target.len(), &to_vec(&part.body)) else {
                return Ok(None);
            };
            for (b, c) in basis.into_iter().zip(x) {
                eta.body.add_term(c, b);
            }
        }
        Ok(Some(eta))
    }

    pub fn is_exact(&self) -> Result<bool> {
        Ok(self.exactness_witness()?.is_some())
    }
}

impl std::fmt::Display for Form {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.body)
    }
}

/// Splits a form monomial into its polynomial part and the sorted dx indices.
pub fn split_monomial(m: &Monomial<Gen>) -> (AlgebraElement, Vec<u8>) {
    let mut x = Monomial::one();
    let mut dxs = Vec::new();
    for (g, e) in m.factors() {
        match g {
            Gen::Dx(i) => dxs.push(*i),
            _ => {
                let (_, p) = x.mul(&Monomial::from_factors([(g.clone(), *e)]).unwrap().1).unwrap();
                x = p;
            }
        }
    }
    (AlgebraElement::term(Rational::one(), x), dxs)
}

fn d_monomial(m: &Monomial<Gen>) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    let rest = AlgebraElement::term(
        Rational::one(),
        Monomial::from_factors(m.factors().iter().filter(|(g, _)| matches!(g, Gen::Dx(_))).cloned())
            .unwrap()
            .1,
    );
    let (xpart, _) = split_monomial(m);
    for (g, _) in m.factors() {
        if let Gen::X(i) = g {
            out += &(&AlgebraElement::dx(*i) * &xpart.partial(*i)) * &rest;
        }
    }
    out
}

/// All exponent vectors of length `n` summing to `deg`.
pub fn compositions(n: usize, deg: usize) -> Vec<Vec<u32>> {
    if n == 0 {
        return if deg == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=deg).rev() {
        for mut rest in compositions(n - 1, deg - first) {
            rest.insert(0, first as u32);
            out.push(rest);
        }
    }
    out
}

/// Basis monomials `x^alpha dx_J` with |alpha| = w and |J| = p.
pub fn form_basis(nvars: u8, w: usize, p: usize) -> Result<Vec<Monomial<Gen>>> {
    use itertools::Itertools;
    let mut out = Vec::new();
    let comps = compositions(nvars as usize, w);
    for alpha in &comps {
        for js in (1..=nvars).combinations(p) {
            let f = Form::monomial(nvars, alpha, &js)?;
            let (m, _) = f.body.terms().next().expect("basis monomial is nonzero");
            out.push(m.clone());
        }
        check_budget("form basis", out.len())?;
    }
    Ok(out)
}

/// All basis forms with polynomial degree in `wrange` and form degree in `prange`.
pub fn enumerate_forms(
    nvars: u8,
    wrange: std::ops::RangeInclusive<usize>,
    prange: std::ops::RangeInclusive<usize>,
) -> Result<Vec<Form>> {
    let mut out = Vec::new();
    for w in wrange {
        for p in prange.clone() {
            if p > nvars as usize {
                continue;
            }
            for m in form_basis(nvars, w, p)? {
                out.push(Form { nvars, body: AlgebraElement::term(Rational::one(), m) });
            }
        }
    }
    Ok(out)
}

/// Cartan–Euler identity residual: (dι + ιd)ω - (w+p)ω on each bigrade.
pub fn cartan_euler_residual(omega: &Form) -> Form {
    let mut res = omega.d().euler_contract().add(&omega.euler_contract().d());
    for ((w, p), part) in omega.bigrade_split() {
        res = res.sub(&part.scale(&int((w + p) as i64)));
    }
    res
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(alpha: &[u32], dx: &[u8]) -> Form {
        Form::monomial(3, alpha, dx).unwrap()
    }

    #[test]
    fn d_examples() {
        // d(x1^2 x2) = 2 x1 x2 dx1 + x1^2 dx2
        let w = f(&[2, 1, 0], &[]);
        let expect = f(&[1, 1, 0], &[1]).scale(&int(2)).add(&f(&[2, 0, 0], &[2]));
        assert_eq!(w.d(), expect);
        // d(x2 dx1) = dx2 dx1 = -dx1 dx2
        assert_eq!(f(&[0, 1, 0], &[1]).d(), f(&[0, 0, 0], &[1, 2]).scale(&int(-1)));
    }

    #[test]
    fn euler_examples() {
        // iota(dx1 dx2) = x1 dx2 - x2 dx1
        let e = f(&[0, 0, 0], &[1, 2]).euler_contract();
        assert_eq!(e, f(&[1, 0, 0], &[2]).sub(&f(&[0, 1, 0], &[1])));
    }

    #[test]
    fn witness_for_exact_form() {
        let w = f(&[1, 0, 0], &[2]);
        let dw = w.d();
        let eta = dw.exactness_witness().unwrap().unwrap();
        assert_eq!(eta.d(), dw);
        assert!(f(&[1, 0, 0], &[2]).exactness_witness().unwrap().is_none());
        assert!(f(&[1, 0, 0], &[]).exactness_witness().unwrap().is_none());
    }

    #[test]
    fn basis_sizes() {
        assert_eq!(form_basis(3, 2, 1).unwrap().len(), 6 * 3);
        assert_eq!(form_basis(2, 0, 2).unwrap().len(), 1);
        assert_eq!(form_basis(2, 1, 3).unwrap().len(), 0);
    }

    fn form_strategy() -> impl Strategy<Value = Form> {
        prop::collection::vec(
            (-3i64..4, prop::collection::vec(0u32..3, 3), prop::sample::subsequence(vec![1u8, 2, 3], 0..=3)),
            0..4,
        )
        .prop_map(|ts| {
            ts.into_iter().fold(Form::zero(3), |acc, (c, a, j)| acc.add(&f(&a, &j).scale(&int(c))))
        })
    }

    proptest! {
        #[test]
        fn d_squares_to_zero(w in form_strategy()) {
            prop_assert!(w.d().d().is_zero());
        }

        #[test]
        fn euler_squares_to_zero(w in form_strategy()) {
            prop_assert!(w.euler_contract().euler_contract().is_zero());
        }

        #[test]
        fn cartan_euler_identity(w in form_strategy()) {
            prop_assert!(cartan_euler_residual(&w).is_zero());
        }

        #[test]
        fn leibniz_rule(a in form_strategy(), b in form_strategy()) {
            // d(ab) = da b + (-1)^{|a|} a db, checked on homogeneous pieces of a
            for ((_, p), a) in a.bigrade_split() {
                let lhs = a.wedge(&b).d();
                let sign = if p % 2 == 0 { int(1) } else { int(-1) };
                let rhs = a.d().wedge(&b).add(&a.wedge(&b.d()).scale(&sign));
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
