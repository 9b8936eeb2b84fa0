//! The minimal resolution R of k[x_1..x_N]: a free noncommutative DG algebra
//! on letters x_I (I a nonempty increasing index set, degree |I|-1), its
//! differential, the abelianisation R_ab and the embedding s⁻¹ of forms.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num::{One, Zero};

use crate::derham::{split_monomial, Form};
use crate::error::{Error, Result};
use crate::gcalg::{fmt_rational, AlgebraElement, Gen, Rational};

/// A word in R: a sequence of letters x_I with I strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct RWord(pub Vec<Vec<u8>>);

impl RWord {
    pub fn unit() -> Self {
        RWord(Vec::new())
    }

    pub fn letter(i: Vec<u8>) -> Self {
        RWord(vec![i])
    }

    pub fn letters(&self) -> &[Vec<u8>] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|l| l.len() - 1).sum()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().map(|l| l.len()).sum()
    }

    pub fn concat(&self, other: &RWord) -> RWord {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        RWord(v)
    }
}

pub fn letter_name(l: &[u8]) -> String {
    if l.len() == 1 {
        format!("x{}", l[0])
    } else {
        format!("lam[{}]", l.iter().join(","))
    }
}

impl fmt::Display for RWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        write!(f, "{}", self.0.iter().map(|l| letter_name(l)).join("*"))
    }
}

/// A ℚ-linear combination of words in R.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RElement {
    terms: BTreeMap<RWord, Rational>,
}

impl RElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::word(RWord::unit())
    }

    pub fn word(w: RWord) -> Self {
        let mut e = Self::zero();
        e.add_term(Rational::one(), w);
        e
    }

    /// λ applied to a list of variables: the sorted letter with the sign of
    /// sorting, or zero on a repeat.
    pub fn lam(indices: &[u8]) -> Self {
        match crate::gcalg::sort_odd(indices) {
            Some((neg, v)) if !v.is_empty() => {
                let mut e = Self::zero();
                e.add_term(if neg { -Rational::one() } else { Rational::one() }, RWord::letter(v));
                e
            }
            _ => Self::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&RWord, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &RWord) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, c: Rational, w: RWord) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
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

    pub fn add(&self, other: &RElement) -> RElement {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &RElement) {
        for (w, c) in &other.terms {
            self.add_term(c.clone(), w.clone());
        }
    }

    pub fn sub(&self, other: &RElement) -> RElement {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> RElement {
        if c.is_zero() {
            return Self::zero();
        }
        RElement { terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect() }
    }

    /// Concatenation product.
    pub fn mul(&self, other: &RElement) -> RElement {
        let mut out = Self::zero();
        for (a, u) in &self.terms {
            for (b, v) in &other.terms {
                out.add_term(u * v, a.concat(b));
            }
        }
        out
    }

    /// Homological degree if homogeneous (zero counts as degree 0).
    pub fn degree(&self) -> Option<usize> {
        let d: Vec<usize> = self.terms.keys().map(|w| w.degree()).dedup().collect();
        match d.as_slice() {
            [] => Some(0),
            [x] => Some(*x),
            _ if d.iter().all_equal() => Some(d[0]),
            _ => None,
        }
    }

    /// Graded commutator ab - (-1)^{|a||b|} ba on homogeneous pieces.
    pub fn commutator(&self, other: &RElement) -> RElement {
        let mut out = Self::zero();
        for (a, u) in &self.terms {
            for (b, v) in &other.terms {
                let c = u * v;
                out.add_term(c.clone(), a.concat(b));
                if (a.degree() * b.degree()) % 2 == 1 {
                    out.add_term(c, b.concat(a));
                } else {
                    out.add_term(-c, b.concat(a));
                }
            }
        }
        out
    }

    /// Applies a linear map defined on words.
    pub fn map_linear(&self, mut f: impl FnMut(&RWord) -> RElement) -> RElement {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_assign(&f(w).scale(c));
        }
        out
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let neg = c < &Rational::zero();
            let a = if neg { -c.clone() } else { c.clone() };
            out.push_str(match (i, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            });
            if w.0.is_empty() {
                out.push_str(&fmt_rational(&a));
            } else if a.is_one() {
                out.push_str(&w.to_string());
            } else {
                out.push_str(&format!("{}*{}", fmt_rational(&a), w));
            }
        }
        out
    }
}

impl fmt::Display for RElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// δ of a single letter x_I, expanded on the x_I basis.
pub fn delta_letter(letter: &[u8]) -> RElement {
    let n = letter.len();
    let mut out = RElement::zero();
    for p in 1..=n / 2 {
        let sign_p = if p % 2 == 0 { 1 } else { -1 };
        for s in (0..n).combinations(p) {
            // for p = q each unordered split is one commutator
            if 2 * p == n && s[0] != 0 {
                continue;
            }
            let rest: Vec<usize> = (0..n).filter(|i| !s.contains(i)).collect();
            let inversions = s.iter().map(|&a| rest.iter().filter(|&&b| b < a).count()).sum::<usize>();
            let sign = if inversions % 2 == 0 { sign_p } else { -sign_p };
            let a = RElement::word(RWord::letter(s.iter().map(|&i| letter[i]).collect()));
            let b = RElement::word(RWord::letter(rest.iter().map(|&i| letter[i]).collect()));
            out.add_assign(&a.commutator(&b).scale(&Rational::from_integer(sign.into())));
        }
    }
    out
}

/// The differential of R: the degree -1 derivation extending `delta_letter`.
pub fn delta_r(e: &RElement) -> RElement {
    e.map_linear(|w| {
        let mut out = RElement::zero();
        let mut prefix_deg = 0;
        for (i, l) in w.0.iter().enumerate() {
            let dl = delta_letter(l);
            if !dl.is_zero() {
                let left = RElement::word(RWord(w.0[..i].to_vec()));
                let right = RElement::word(RWord(w.0[i + 1..].to_vec()));
                let t = left.mul(&dl).mul(&right);
                out.add_assign(&if prefix_deg % 2 == 0 { t } else { t.scale(&-Rational::one()) });
            }
            prefix_deg += l.len() - 1;
        }
        out
    })
}

/// The generator of R_ab corresponding to a letter.
pub fn letter_gen(l: &[u8]) -> Gen {
    if l.len() == 1 {
        Gen::X(l[0])
    } else {
        Gen::Lam(l.to_vec())
    }
}

/// The quotient map R → R_ab.
pub fn abelianize(e: &RElement) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for (w, c) in e.terms() {
        let mut t = AlgebraElement::constant(c.clone());
        for l in &w.0 {
            t = &t * &AlgebraElement::gen(letter_gen(l));
        }
        out += t;
    }
    out
}

/// s⁻¹: a dv_1..dv_k ↦ a λ(v_1..v_k) for forms with every term of form degree ≥ 1.
pub fn s_inv(omega: &Form) -> Result<AlgebraElement> {
    let mut out = AlgebraElement::zero();
    for (m, c) in omega.body().terms() {
        let (x, dxs) = split_monomial(m);
        if dxs.is_empty() {
            return Err(Error::InvalidInput(format!("s_inv needs form degree >= 1, got term {m}")));
        }
        out += (&x * &AlgebraElement::lam(&dxs)).scale(c);
    }
    Ok(out)
}

/// All words with letters over `nvars` variables of exactly the given weight.
pub fn words_of_weight(nvars: u8, weight: usize) -> Vec<RWord> {
    let letters: Vec<Vec<u8>> = (1..=nvars as usize)
        .flat_map(|k| (1..=nvars).combinations(k))
        .collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(letters: &[Vec<u8>], left: usize, cur: &mut Vec<Vec<u8>>, out: &mut Vec<RWord>) {
        if left == 0 {
            out.push(RWord(cur.clone()));
            return;
        }
        for l in letters {
            if l.len() <= left {
                cur.push(l.clone());
                rec(letters, left - l.len(), cur, out);
                cur.pop();
            }
        }
    }
    rec(&letters, weight, &mut cur, &mut out);
    out
}

/// Print-time names for three variables x, y, z:
/// ξ = λ(z,y), θ = λ(x,z), λ = λ(y,x), t = λ(x,y,z).
/// Each entry is (name, stored generator, sign with name = sign * generator).
pub fn three_variable_aliases() -> Vec<(&'static str, Gen, i64)> {
    vec![
        ("xi", Gen::Lam(vec![2, 3]), -1),
        ("theta", Gen::Lam(vec![1, 3]), 1),
        ("lambda", Gen::Lam(vec![1, 2]), -1),
        ("t", Gen::Lam(vec![1, 2, 3]), 1),
    ]
}

/// The R_ab element named by a three-variable alias.
pub fn alias_value(name: &str) -> Option<AlgebraElement> {
    three_variable_aliases()
        .into_iter()
        .find(|(n, _, _)| *n == name)
        .map(|(_, g, s)| AlgebraElement::gen(g).scale(&Rational::from_integer(s.into())))
}

/// Renders an R_ab element in three variables with the alias names, using
/// x, y, z for the polynomial variables.
pub fn render_aliased(e: &AlgebraElement) -> String {
    let mut aliased = AlgebraElement::<AliasGen>::zero();
    for (m, c) in e.terms() {
        let mut t = AlgebraElement::<AliasGen>::constant(c.clone());
        for (g, k) in m.factors() {
            let (neg, a) = AliasGen::from_gen(g);
            for _ in 0..*k {
                t = &t * &AlgebraElement::gen(a.clone());
            }
            if neg {
                t = -t;
            }
        }
        aliased += t;
    }
    aliased.to_string()
}

/// Generator type used only for aliased rendering.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AliasGen {
    base: Gen,
    name: String,
}

impl AliasGen {
    fn from_gen(g: &Gen) -> (bool, AliasGen) {
        for (n, h, s) in three_variable_aliases() {
            if &h == g {
                return (s < 0, AliasGen { base: g.clone(), name: n.to_string() });
            }
        }
        let name = match g {
            Gen::X(i) if *i <= 3 => ["x", "y", "z"][*i as usize - 1].to_string(),
            Gen::Dx(i) if *i <= 3 => ["dx", "dy", "dz"][*i as usize - 1].to_string(),
            _ => g.to_string(),
        };
        (false, AliasGen { base: g.clone(), name })
    }
}

impl fmt::Display for AliasGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

impl crate::gcalg::Symbol for AliasGen {
    fn is_odd(&self) -> bool {
        crate::gcalg::Symbol::is_odd(&self.base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcalg::int;

    fn w(ls: &[&[u8]]) -> RElement {
        RElement::word(RWord(ls.iter().map(|l| l.to_vec()).collect()))
    }

    #[test]
    fn delta_of_pair() {
        let d = delta_r(&w(&[&[1, 2]]));
        assert_eq!(d, w(&[&[1], &[2]]).sub(&w(&[&[2], &[1]])).scale(&int(-1)));
        assert!(delta_r(&w(&[&[1]])).is_zero());
    }

    #[test]
    fn delta_of_triple_matches_expansion() {
        // δλ(v1,v2,v3) = -[v1,λ(v2,v3)] - [v2,λ(v3,v1)] - [v3,λ(v1,v2)]
        let c = |a: &[u8], b: &[u8]| RElement::lam(a).commutator(&RElement::lam(b));
        let expect = c(&[1], &[2, 3])
            .add(&c(&[2], &[3, 1]))
            .add(&c(&[3], &[1, 2]))
            .scale(&int(-1));
        assert_eq!(delta_r(&w(&[&[1, 2, 3]])), expect);
    }

    #[test]
    fn delta_squared_vanishes() {
        for n in 1..=4u8 {
            for k in 1..=n as usize {
                for l in (1..=n).combinations(k) {
                    let e = RElement::word(RWord::letter(l.clone()));
                    assert!(delta_r(&delta_r(&e)).is_zero(), "δ² ≠ 0 on {l:?}");
                }
            }
        }
        // also on a few products
        let e = w(&[&[1, 2], &[1, 2, 3], &[3]]);
        assert!(delta_r(&delta_r(&e)).is_zero());
    }

    #[test]
    fn abelianize_kills_boundaries() {
        for weight in 1..=5 {
            for word in words_of_weight(3, weight) {
                let d = delta_r(&RElement::word(word.clone()));
                assert!(abelianize(&d).is_zero(), "abelianize(δ {word}) ≠ 0");
            }
        }
    }

    #[test]
    fn abelianize_examples() {
        assert!(abelianize(&w(&[&[1], &[2]]).sub(&w(&[&[2], &[1]]))).is_zero());
        assert_eq!(
            abelianize(&w(&[&[1, 2], &[1]])),
            &AlgebraElement::x(1) * &AlgebraElement::lam(&[1, 2])
        );
    }

    #[test]
    fn degree_bookkeeping() {
        for word in words_of_weight(3, 4) {
            let a = abelianize(&RElement::word(word.clone()));
            for (m, _) in a.terms() {
                assert_eq!(m.degree(), word.degree());
                assert_eq!(m.weight(), word.weight());
            }
        }
    }

    #[test]
    fn s_inv_examples() {
        let f = |a: &[u32], j: &[u8]| Form::monomial(3, a, j).unwrap();
        assert_eq!(
            s_inv(&f(&[1, 0, 0], &[2, 3])).unwrap(),
            &AlgebraElement::x(1) * &AlgebraElement::lam(&[2, 3])
        );
        let back = Form::new(3, &AlgebraElement::dx(2) * &AlgebraElement::dx(1)).unwrap();
        assert_eq!(s_inv(&back).unwrap(), -AlgebraElement::lam(&[1, 2]));
        let sq = Form::new(3, &AlgebraElement::dx(1) * &AlgebraElement::dx(1)).unwrap();
        assert!(s_inv(&sq).unwrap().is_zero());
        assert!(s_inv(&f(&[1, 0, 0], &[])).is_err());
    }

    #[test]
    fn aliases_render() {
        let e = AlgebraElement::lam(&[1, 2]).scale(&int(-1));
        assert_eq!(render_aliased(&e), "lambda");
        assert_eq!(alias_value("xi").unwrap(), AlgebraElement::lam(&[3, 2]));
    }
}
