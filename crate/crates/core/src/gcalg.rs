//! Exact rational coefficients and free graded-commutative algebras.
//!
//! An [`AlgebraElement`] is a finite ℚ-linear combination of [`Monomial`]s in
//! generators implementing [`Symbol`]. Even generators commute and may carry
//! any exponent; odd generators anticommute and square to zero. Products are
//! normalised to sorted generator order and the Koszul sign is tracked.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `n/d` as a rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Renders a rational as `p` or `p/q`.
pub fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// A generator of a free graded-commutative algebra.
pub trait Symbol: Clone + Ord + fmt::Debug + fmt::Display {
    fn is_odd(&self) -> bool;
}

/// Generators shared by Ω_A and R_ab: `x_i` (even), `dx_i` (odd) and
/// `lam[I]` for an index set with `|I| >= 2`, of degree `|I|-1`.
///
/// The derived order (x < dx < lam, then by index) is the canonical order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    X(u8),
    Dx(u8),
    Lam(Vec<u8>),
}

impl Gen {
    /// Builds λ of the given variables. Sorting costs the sign of the
    /// permutation; a repeated index gives zero (`None`); a singleton is `x_i`.
    pub fn lam(indices: &[u8]) -> Option<(bool, Gen)> {
        if indices.is_empty() {
            return None;
        }
        let (neg, sorted) = sort_odd(indices)?;
        if sorted.len() == 1 {
            Some((neg, Gen::X(sorted[0])))
        } else {
            Some((neg, Gen::Lam(sorted)))
        }
    }

    pub fn weight(&self) -> usize {
        match self {
            Gen::X(_) | Gen::Dx(_) => 1,
            Gen::Lam(i) => i.len(),
        }
    }

    /// Homological degree: 0 for x, 1 for dx, |I|-1 for λ.
    pub fn degree(&self) -> usize {
        match self {
            Gen::X(_) => 0,
            Gen::Dx(_) => 1,
            Gen::Lam(i) => i.len() - 1,
        }
    }

    pub fn max_index(&self) -> u8 {
        match self {
            Gen::X(i) | Gen::Dx(i) => *i,
            Gen::Lam(v) => *v.last().unwrap_or(&0),
        }
    }
}

impl Symbol for Gen {
    fn is_odd(&self) -> bool {
        self.degree() % 2 == 1
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::X(i) => write!(f, "x{i}"),
            Gen::Dx(i) => write!(f, "dx{i}"),
            Gen::Lam(v) => {
                let s: Vec<String> = v.iter().map(|i| i.to_string()).collect();
                write!(f, "lam[{}]", s.join(","))
            }
        }
    }
}

/// Sorts a list of anticommuting indices. Returns the sign flag (true for
/// an odd permutation) or `None` if an index repeats.
pub fn sort_odd(indices: &[u8]) -> Option<(bool, Vec<u8>)> {
    let mut v = indices.to_vec();
    let mut neg = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            neg = !neg;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((neg, v))
}

/// Number of inversions of a sequence, mod 2.
pub fn inversion_parity<T: Ord>(seq: &[T]) -> bool {
    let mut neg = false;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                neg = !neg;
            }
        }
    }
    neg
}

/// Koszul sign of moving the object in slot `i` to slot `perm[i]`, where
/// only pairs of odd objects crossing each other contribute.
pub fn koszul_sign(perm: &[usize], degrees: &[i64]) -> Result<i8> {
    if perm.len() != degrees.len() {
        return Err(Error::InvalidInput(format!(
            "permutation of length {} with {} degrees",
            perm.len(),
            degrees.len()
        )));
    }
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || seen[p] {
            return Err(Error::InvalidInput(format!("{perm:?} is not a permutation")));
        }
        seen[p] = true;
    }
    let mut neg = false;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] && degrees[i] % 2 != 0 && degrees[j] % 2 != 0 {
                neg = !neg;
            }
        }
    }
    Ok(if neg { -1 } else { 1 })
}

/// A normalised product of generators: sorted, odd exponents at most one.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial<S> {
    factors: Vec<(S, u32)>,
}

impl<S: Symbol> Monomial<S> {
    pub fn one() -> Self {
        Monomial { factors: Vec::new() }
    }

    pub fn from_gen(g: S) -> Self {
        Monomial { factors: vec![(g, 1)] }
    }

    /// Builds a monomial from arbitrary factors, multiplying in the given
    /// order. Returns `None` if an odd generator repeats.
    pub fn from_factors(factors: impl IntoIterator<Item = (S, u32)>) -> Option<(bool, Self)> {
        let mut acc = (false, Monomial::one());
        for (g, e) in factors {
            for _ in 0..e {
                let (neg, m) = acc.1.mul(&Monomial::from_gen(g.clone()))?;
                acc = (acc.0 ^ neg, m);
            }
        }
        Some(acc)
    }

    pub fn factors(&self) -> &[(S, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_odd(&self) -> bool {
        self.factors.iter().filter(|(g, _)| g.is_odd()).count() % 2 == 1
    }

    /// Total number of generator factors counted with multiplicity.
    pub fn length(&self) -> usize {
        self.factors.iter().map(|(_, e)| *e as usize).sum()
    }

    /// Product `self * other` as (sign flag, monomial), or `None` if zero.
    pub fn mul(&self, other: &Self) -> Option<(bool, Self)> {
        let mut neg = false;
        // each odd factor of `other` passes the odd factors of `self` that sort after it
        for (g, _) in other.factors.iter().filter(|(g, _)| g.is_odd()) {
            let passed = self
                .factors
                .iter()
                .filter(|(h, _)| h.is_odd() && h > g)
                .count();
            if passed % 2 == 1 {
                neg = !neg;
            }
        }
        let mut out: Vec<(S, u32)> = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() || j < other.factors.len() {
            let take_left = match (self.factors.get(i), other.factors.get(j)) {
                (Some(a), Some(b)) => match a.0.cmp(&b.0) {
                    std::cmp::Ordering::Less => Some(true),
                    std::cmp::Ordering::Greater => Some(false),
                    std::cmp::Ordering::Equal => None,
                },
                (Some(_), None) => Some(true),
                (None, _) => Some(false),
            };
            match take_left {
                Some(true) => {
                    out.push(self.factors[i].clone());
                    i += 1;
                }
                Some(false) => {
                    out.push(other.factors[j].clone());
                    j += 1;
                }
                None => {
                    let (g, e1) = &self.factors[i];
                    if g.is_odd() {
                        return None;
                    }
                    out.push((g.clone(), e1 + other.factors[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        Some((neg, Monomial { factors: out }))
    }

    /// Exponent of an (even) generator, 0 if absent.
    pub fn exponent(&self, g: &S) -> u32 {
        self.factors
            .iter()
            .find(|(h, _)| h == g)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }
}

impl Monomial<Gen> {
    pub fn weight(&self) -> usize {
        self.factors.iter().map(|(g, e)| g.weight() * *e as usize).sum()
    }

    pub fn degree(&self) -> usize {
        self.factors.iter().map(|(g, e)| g.degree() * *e as usize).sum()
    }

    /// Polynomial degree of the `x` part.
    pub fn x_degree(&self) -> usize {
        self.factors
            .iter()
            .filter(|(g, _)| matches!(g, Gen::X(_)))
            .map(|(_, e)| *e as usize)
            .sum()
    }

    /// Number of `dx` factors.
    pub fn dx_count(&self) -> usize {
        self.factors.iter().filter(|(g, _)| matches!(g, Gen::Dx(_))).count()
    }
}

impl<S: Symbol> fmt::Display for Monomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(g, e)| if *e == 1 { g.to_string() } else { format!("{g}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// A finite ℚ-linear combination of monomials. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraElement<S = Gen> {
    terms: BTreeMap<Monomial<S>, Rational>,
}

impl<S: Symbol> Default for AlgebraElement<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Symbol> AlgebraElement<S> {
    pub fn zero() -> Self {
        AlgebraElement { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::term(Rational::one(), Monomial::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn term(c: Rational, m: Monomial<S>) -> Self {
        let mut e = Self::zero();
        e.add_term(c, m);
        e
    }

    pub fn gen(g: S) -> Self {
        Self::term(Rational::one(), Monomial::from_gen(g))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial<S>, &Rational)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial<S>, Rational)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, m: &Monomial<S>) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, c: Rational, m: Monomial<S>) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Adds `c * sign * m` where `neg` flips the sign.
    pub fn add_signed(&mut self, neg: bool, c: Rational, m: Monomial<S>) {
        self.add_term(if neg { -c } else { c }, m);
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        AlgebraElement {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, c: &Rational, m: &Monomial<S>) -> Self {
        let mut out = Self::zero();
        for (a, v) in &self.terms {
            if let Some((neg, p)) = a.mul(m) {
                out.add_signed(neg, v * c, p);
            }
        }
        out
    }

    /// Applies a linear map defined on monomials.
    pub fn map_linear<T: Symbol>(&self, mut f: impl FnMut(&Monomial<S>) -> AlgebraElement<T>) -> AlgebraElement<T> {
        let mut out = AlgebraElement::zero();
        for (m, c) in &self.terms {
            out += f(m).scale(c);
        }
        out
    }

    /// Keeps only the monomials satisfying `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Monomial<S>) -> bool) -> Self {
        AlgebraElement {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Renders with an alternative generator printer.
    pub fn render_with(&self, gen: impl Fn(&S) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = m
                .factors()
                .iter()
                .map(|(g, e)| if *e == 1 { gen(g) } else { format!("{}^{e}", gen(g)) })
                .collect();
            if mono.is_empty() {
                out.push_str(&fmt_rational(&a));
            } else if a.is_one() {
                out.push_str(&mono.join("*"));
            } else {
                out.push_str(&format!("{}*{}", fmt_rational(&a), mono.join("*")));
            }
        }
        out
    }
}

impl AlgebraElement<Gen> {
    /// Sets every `x_i` to zero.
    pub fn substitute_zero(&self) -> Self {
        self.filter(|m| m.factors().iter().all(|(g, _)| !matches!(g, Gen::X(_))))
    }

    /// λ of a list of variables (a sorted λ, an `x_i`, or zero).
    pub fn lam(indices: &[u8]) -> Self {
        match Gen::lam(indices) {
            None => Self::zero(),
            Some((neg, g)) => {
                let mut e = Self::zero();
                e.add_signed(neg, Rational::one(), Monomial::from_gen(g));
                e
            }
        }
    }

    pub fn x(i: u8) -> Self {
        Self::gen(Gen::X(i))
    }

    pub fn dx(i: u8) -> Self {
        Self::gen(Gen::Dx(i))
    }

    /// Largest variable index occurring.
    pub fn max_index(&self) -> u8 {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|(g, _)| g.max_index()))
            .max()
            .unwrap_or(0)
    }

    /// Partial derivative in `x_i` (acting on the polynomial part only).
    pub fn partial(&self, i: u8) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(&Gen::X(i));
            if e == 0 {
                continue;
            }
            let rest = Monomial {
                factors: m
                    .factors()
                    .iter()
                    .filter_map(|(g, k)| {
                        if *g == Gen::X(i) {
                            (k > &1).then(|| (g.clone(), k - 1))
                        } else {
                            Some((g.clone(), *k))
                        }
                    })
                    .collect(),
            };
            out.add_term(c * int(e as i64), rest);
        }
        out
    }
}

impl<S: Symbol> fmt::Display for AlgebraElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render_with(|g| g.to_string()))
    }
}

impl<S: Symbol> AddAssign<AlgebraElement<S>> for AlgebraElement<S> {
    fn add_assign(&mut self, rhs: AlgebraElement<S>) {
        for (m, c) in rhs.terms {
            self.add_term(c, m);
        }
    }
}

impl<S: Symbol> AddAssign<&AlgebraElement<S>> for AlgebraElement<S> {
    fn add_assign(&mut self, rhs: &AlgebraElement<S>) {
        for (m, c) in &rhs.terms {
            self.add_term(c.clone(), m.clone());
        }
    }
}

impl<S: Symbol> Add for AlgebraElement<S> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl<S: Symbol> Add for &AlgebraElement<S> {
    type Output = AlgebraElement<S>;
    fn add(self, rhs: Self) -> AlgebraElement<S> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<S: Symbol> Neg for AlgebraElement<S> {
    type Output = Self;
    fn neg(self) -> Self {
        AlgebraElement { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl<S: Symbol> Neg for &AlgebraElement<S> {
    type Output = AlgebraElement<S>;
    fn neg(self) -> AlgebraElement<S> {
        -self.clone()
    }
}

impl<S: Symbol> Sub for AlgebraElement<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<S: Symbol> Sub for &AlgebraElement<S> {
    type Output = AlgebraElement<S>;
    fn sub(self, rhs: Self) -> AlgebraElement<S> {
        self.clone() + (-rhs)
    }
}

impl<S: Symbol> Mul for &AlgebraElement<S> {
    type Output = AlgebraElement<S>;
    fn mul(self, rhs: Self) -> AlgebraElement<S> {
        let mut out = AlgebraElement::zero();
        for (a, u) in &self.terms {
            for (b, v) in &rhs.terms {
                if let Some((neg, m)) = a.mul(b) {
                    out.add_signed(neg, u * v, m);
                }
            }
        }
        out
    }
}

impl<S: Symbol> Mul for AlgebraElement<S> {
    type Output = AlgebraElement<S>;
    fn mul(self, rhs: Self) -> AlgebraElement<S> {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x(i: u8) -> AlgebraElement {
        AlgebraElement::x(i)
    }
    fn dx(i: u8) -> AlgebraElement {
        AlgebraElement::dx(i)
    }

    #[test]
    fn odd_generators_anticommute() {
        assert_eq!(&dx(2) * &dx(1), -(&dx(1) * &dx(2)));
        assert!((&dx(1) * &dx(1)).is_zero());
        let l = AlgebraElement::lam(&[1, 2]);
        assert!((&l * &l).is_zero());
        let t = AlgebraElement::lam(&[1, 2, 3]);
        assert_eq!(&t * &t, &t * &t);
        assert!(!(&t * &t).is_zero());
    }

    #[test]
    fn render_is_canonical() {
        let e = (&x(1) * &x(1)) * dx(2) * AlgebraElement::lam(&[3, 1]);
        assert_eq!(e.scale(&rat(-3, 2)).to_string(), "3/2*x1^2*dx2*lam[1,3]");
        assert_eq!(AlgebraElement::<Gen>::zero().to_string(), "0");
        assert_eq!((x(1) - x(2)).to_string(), "x1 - x2");
    }

    #[test]
    fn lam_normalisation() {
        assert_eq!(AlgebraElement::lam(&[2, 1]), -AlgebraElement::lam(&[1, 2]));
        assert!(AlgebraElement::lam(&[1, 1]).is_zero());
        assert_eq!(AlgebraElement::lam(&[3]), x(3));
        assert_eq!(AlgebraElement::lam(&[3, 1, 2]), AlgebraElement::lam(&[1, 2, 3]));
    }

    #[test]
    fn koszul_sign_examples() {
        assert_eq!(koszul_sign(&[1, 0], &[1, 1]).unwrap(), -1);
        assert_eq!(koszul_sign(&[1, 0], &[0, 1]).unwrap(), 1);
        assert!(koszul_sign(&[0, 0], &[1, 1]).is_err());
    }

    #[test]
    fn substitute_zero_keeps_pure_forms() {
        let e = &(&x(1) * &dx(2)) + &(&dx(1) * &dx(2));
        assert_eq!(e.substitute_zero(), &dx(1) * &dx(2));
    }

    fn gen_strategy() -> impl Strategy<Value = Gen> {
        prop_oneof![
            (1u8..4).prop_map(Gen::X),
            (1u8..4).prop_map(Gen::Dx),
            prop::sample::subsequence(vec![1u8, 2, 3], 2..=3).prop_map(Gen::Lam),
        ]
    }

    fn elem_strategy() -> impl Strategy<Value = AlgebraElement> {
        prop::collection::vec((-3i64..4, prop::collection::vec(gen_strategy(), 0..4)), 0..4).prop_map(|ts| {
            let mut e = AlgebraElement::zero();
            for (c, gens) in ts {
                let mut t = AlgebraElement::constant(int(c));
                for g in gens {
                    t = &t * &AlgebraElement::gen(g);
                }
                e += t;
            }
            e
        })
    }

    fn perm_strategy(n: usize) -> impl Strategy<Value = Vec<usize>> {
        Just((0..n).collect::<Vec<_>>()).prop_shuffle()
    }

    proptest! {
        #[test]
        fn multiplication_is_associative(a in elem_strategy(), b in elem_strategy(), c in elem_strategy()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }

        #[test]
        fn multiplication_distributes(a in elem_strategy(), b in elem_strategy(), c in elem_strategy()) {
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn homogeneous_graded_commutativity(g in gen_strategy(), h in gen_strategy()) {
            let a = AlgebraElement::gen(g.clone());
            let b = AlgebraElement::gen(h.clone());
            let sign = if g.is_odd() && h.is_odd() { int(-1) } else { int(1) };
            prop_assert_eq!(&a * &b, (&b * &a).scale(&sign));
        }

        #[test]
        fn koszul_sign_is_multiplicative(s in perm_strategy(4), t in perm_strategy(4), d in prop::collection::vec(0i64..2, 4)) {
            // apply t first, then s; degrees travel with their objects
            let st: Vec<usize> = (0..4).map(|i| s[t[i]]).collect();
            let mut moved = vec![0i64; 4];
            for i in 0..4 {
                moved[t[i]] = d[i];
            }
            let lhs = koszul_sign(&st, &d).unwrap();
            let rhs = koszul_sign(&t, &d).unwrap() * koszul_sign(&s, &moved).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
