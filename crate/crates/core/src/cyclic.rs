//! Reduced Connes cyclic complexes C^λ(Ā) for A = k[x_1..x_N] and for the
//! resolution R, the HKR maps, the cocycle β lifting a form to C^λ(R), and
//! homology over ℚ.
//!
//! Chains are words (a_0, .., a_n) of augmentation-ideal basis elements.
//! Signs follow the shifted convention: slot i carries degree |a_i|+1, the
//! cyclic operator t moves the last slot to the front with the Koszul sign,
//! the product contributes (-1)^{|a_i|} and the internal differential acts
//! as s δ with the Koszul sign of passing the earlier slots.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use num::{One, Zero};
use rayon::prelude::*;

use crate::derham::{compositions, enumerate_forms, form_basis, split_monomial, Form};
use crate::error::{check_budget, Error, Result};
use crate::gcalg::{factorial, inversion_parity, AlgebraElement, Gen, Monomial, Rational};
use crate::linalg;
use crate::resolution::{abelianize, delta_r, words_of_weight, RElement, RWord};
use crate::trace::trace_simple;

/// A graded algebra with a chosen basis of its augmentation ideal.
pub trait TensorAlgebra: Sync {
    type Elem: Clone + Ord + fmt::Debug + fmt::Display + Send + Sync;
    fn degree(&self, e: &Self::Elem) -> usize;
    fn weight(&self, e: &Self::Elem) -> usize;
    fn product(&self, a: &Self::Elem, b: &Self::Elem) -> Vec<(Self::Elem, Rational)>;
    fn differential(&self, e: &Self::Elem) -> Vec<(Self::Elem, Rational)>;
    /// Basis of the augmentation ideal in the given weight.
    fn basis(&self, weight: usize) -> Vec<Self::Elem>;
}

/// The polynomial algebra, concentrated in degree 0.
#[derive(Clone, Copy, Debug)]
pub struct PolyAlgebra {
    pub nvars: u8,
}

impl TensorAlgebra for PolyAlgebra {
    type Elem = Monomial<Gen>;
    fn degree(&self, _: &Self::Elem) -> usize {
        0
    }
    fn weight(&self, e: &Self::Elem) -> usize {
        e.x_degree()
    }
    fn product(&self, a: &Self::Elem, b: &Self::Elem) -> Vec<(Self::Elem, Rational)> {
        let (_, m) = a.mul(b).expect("polynomial monomials never vanish");
        vec![(m, Rational::one())]
    }
    fn differential(&self, _: &Self::Elem) -> Vec<(Self::Elem, Rational)> {
        Vec::new()
    }
    fn basis(&self, weight: usize) -> Vec<Self::Elem> {
        if weight == 0 {
            return Vec::new();
        }
        compositions(self.nvars as usize, weight)
            .into_iter()
            .map(|alpha| poly_monomial(&alpha))
            .collect()
    }
}

fn poly_monomial(alpha: &[u32]) -> Monomial<Gen> {
    Monomial::from_factors(
        alpha
            .iter()
            .enumerate()
            .filter(|(_, &a)| a > 0)
            .map(|(i, &a)| (Gen::X(i as u8 + 1), a)),
    )
    .expect("even generators")
    .1
}

/// The minimal resolution R with its differential.
#[derive(Clone, Copy, Debug)]
pub struct ResolutionAlgebra {
    pub nvars: u8,
}

impl TensorAlgebra for ResolutionAlgebra {
    type Elem = RWord;
    fn degree(&self, e: &Self::Elem) -> usize {
        e.degree()
    }
    fn weight(&self, e: &Self::Elem) -> usize {
        e.weight()
    }
    fn product(&self, a: &Self::Elem, b: &Self::Elem) -> Vec<(Self::Elem, Rational)> {
        vec![(a.concat(b), Rational::one())]
    }
    fn differential(&self, e: &Self::Elem) -> Vec<(Self::Elem, Rational)> {
        delta_r(&RElement::word(e.clone()))
            .terms()
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect()
    }
    fn basis(&self, weight: usize) -> Vec<Self::Elem> {
        if weight == 0 {
            return Vec::new();
        }
        words_of_weight(self.nvars, weight)
    }
}

/// A chain in C^λ, stored on canonical rotation representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicChain<E: Ord> {
    terms: BTreeMap<Vec<E>, Rational>,
}

impl<E: Ord + Clone> Default for CyclicChain<E> {
    fn default() -> Self {
        CyclicChain { terms: BTreeMap::new() }
    }
}

impl<E: Ord + Clone + fmt::Display> CyclicChain<E> {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<E>, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_raw(&mut self, c: Rational, w: Vec<E>) {
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

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(w, c)| format!("({})*({})", crate::gcalg::fmt_rational(c), w.iter().join(", ")))
            .join(" + ")
    }
}

/// Shifted degrees |a|+1 of a word's slots.
fn shifted<A: TensorAlgebra>(alg: &A, w: &[A::Elem]) -> Vec<usize> {
    w.iter().map(|a| alg.degree(a) + 1).collect()
}

/// Canonical representative of the rotation class of `w` with the sign
/// relating them, or `None` if the class is zero.
pub fn canonical_rotation<A: TensorAlgebra>(alg: &A, w: &[A::Elem]) -> Option<(bool, Vec<A::Elem>)> {
    let n = w.len();
    let e = shifted(alg, w);
    let mut best: Option<(bool, Vec<A::Elem>)> = None;
    let mut cur = w.to_vec();
    let mut cur_e = e;
    let mut neg = false;
    for _ in 0..n {
        match &best {
            None => best = Some((neg, cur.clone())),
            Some((bn, bw)) => {
                if cur < *bw {
                    best = Some((neg, cur.clone()));
                } else if cur == *bw && *bn != neg {
                    return None;
                }
            }
        }
        // t: last slot to the front
        let last_e = cur_e[n - 1];
        let rest: usize = cur_e[..n - 1].iter().sum();
        if (last_e * rest) % 2 == 1 {
            neg = !neg;
        }
        cur.rotate_right(1);
        cur_e.rotate_right(1);
    }
    best
}

impl<E: Ord + Clone + fmt::Display> CyclicChain<E> {
    /// Adds `c * w` after moving `w` to its canonical rotation.
    pub fn add_word<A: TensorAlgebra<Elem = E>>(&mut self, alg: &A, c: Rational, w: Vec<E>) {
        if let Some((neg, rep)) = canonical_rotation(alg, &w) {
            self.add_raw(if neg { -c } else { c }, rep);
        }
    }

    pub fn add_chain(&mut self, other: &CyclicChain<E>) {
        for (w, c) in &other.terms {
            self.add_raw(c.clone(), w.clone());
        }
    }

    pub fn scale(&self, c: &Rational) -> CyclicChain<E> {
        let mut out = CyclicChain::default();
        for (w, v) in &self.terms {
            out.add_raw(v * c, w.clone());
        }
        out
    }
}

/// The Hochschild differential plus the internal one, on a single word,
/// as raw (uncanonicalised) words.
pub fn word_differential<A: TensorAlgebra>(alg: &A, w: &[A::Elem]) -> Vec<(Vec<A::Elem>, Rational)> {
    let n = w.len();
    let e = shifted(alg, w);
    let mut out = Vec::new();
    let sign = |neg: bool| if neg { -Rational::one() } else { Rational::one() };
    let mut prefix = 0usize;
    for i in 0..n {
        for (d, c) in alg.differential(&w[i]) {
            let mut v = w.to_vec();
            v[i] = d;
            out.push((v, c * sign(prefix % 2 == 1)));
        }
        if i + 1 < n {
            for (p, c) in alg.product(&w[i], &w[i + 1]) {
                let mut v = w[..i].to_vec();
                v.push(p);
                v.extend_from_slice(&w[i + 2..]);
                let neg = (prefix + alg.degree(&w[i])) % 2 == 1;
                out.push((v, c * sign(neg)));
            }
        }
        prefix += e[i];
    }
    if n >= 2 {
        let rest: usize = e[..n - 1].iter().sum();
        let rot_neg = (e[n - 1] * rest) % 2 == 1;
        for (p, c) in alg.product(&w[n - 1], &w[0]) {
            let mut v = vec![p];
            v.extend_from_slice(&w[1..n - 1]);
            let neg = rot_neg ^ (alg.degree(&w[n - 1]) % 2 == 1);
            out.push((v, c * sign(neg)));
        }
    }
    out
}

pub fn chain_differential<A: TensorAlgebra>(alg: &A, c: &CyclicChain<A::Elem>) -> CyclicChain<A::Elem> {
    let mut out = CyclicChain::default();
    for (w, v) in c.terms() {
        for (dw, dc) in word_differential(alg, w) {
            out.add_word(alg, v * &dc, dw);
        }
    }
    out
}

/// Total degree of a word: number of slots minus one plus internal degrees.
pub fn word_degree<A: TensorAlgebra>(alg: &A, w: &[A::Elem]) -> usize {
    w.len() - 1 + w.iter().map(|a| alg.degree(a)).sum::<usize>()
}

/// A finite chain complex over ℚ graded by (degree, weight).
#[derive(Clone, Debug, Default)]
pub struct ChainComplexQ {
    /// Basis labels per (degree, weight).
    pub cells: BTreeMap<(usize, usize), Vec<String>>,
    /// Boundary from (degree, weight) to (degree-1, weight), as rows indexed by the target basis.
    pub boundaries: BTreeMap<(usize, usize), linalg::Matrix>,
    /// Largest degree whose homology is fully determined.
    pub degree_cap: usize,
}

/// Homology dimensions per (degree, weight).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HomologySummary {
    pub dims: BTreeMap<(usize, usize), usize>,
}

impl HomologySummary {
    pub fn dim(&self, degree: usize, weight: usize) -> usize {
        self.dims.get(&(degree, weight)).copied().unwrap_or(0)
    }

    /// Table with degrees as rows and weights as columns.
    pub fn table(&self) -> String {
        let degs: BTreeSet<usize> = self.dims.keys().map(|k| k.0).collect();
        let ws: BTreeSet<usize> = self.dims.keys().map(|k| k.1).collect();
        let mut out = format!("deg\\wt{}\n", ws.iter().map(|w| format!("\t{w}")).join(""));
        for d in degs {
            out.push_str(&format!("{d}{}\n", ws.iter().map(|w| format!("\t{}", self.dim(d, *w))).join("")));
        }
        out
    }
}

/// Which algebra a cyclic complex is built over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ambient {
    A,
    R,
}

/// Builds C^λ(Ā) (ambient A) or C^λ(R̄) with δ_R (ambient R) for weights
/// 1..=weight_cap and degrees 0..=degree_cap (plus one more degree so that
/// homology up to degree_cap is determined). Checks ∂∂ = 0.
pub fn build_connes_complex(ambient: Ambient, nvars: u8, weight_cap: usize, degree_cap: usize) -> Result<ChainComplexQ> {
    match ambient {
        Ambient::A => build_generic(&PolyAlgebra { nvars }, weight_cap, degree_cap),
        Ambient::R => build_generic(&ResolutionAlgebra { nvars }, weight_cap, degree_cap),
    }
}

/// All words of the given weight with at most `max_len` slots.
fn all_words<A: TensorAlgebra>(alg: &A, weight: usize, max_len: usize) -> Result<Vec<Vec<A::Elem>>> {
    let by_weight: Vec<Vec<A::Elem>> = (0..=weight).map(|w| alg.basis(w)).collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec<E: Clone>(by_weight: &[Vec<E>], left: usize, max_len: usize, cur: &mut Vec<E>, out: &mut Vec<Vec<E>>) {
        if left == 0 {
            if !cur.is_empty() {
                out.push(cur.clone());
            }
            return;
        }
        if cur.len() == max_len {
            return;
        }
        for w in 1..=left {
            for e in &by_weight[w] {
                cur.push(e.clone());
                rec(by_weight, left - w, max_len, cur, out);
                cur.pop();
            }
        }
    }
    rec(&by_weight, weight, max_len, &mut cur, &mut out);
    check_budget(&format!("tensor words of weight {weight}"), out.len())?;
    Ok(out)
}

fn build_generic<A: TensorAlgebra>(alg: &A, weight_cap: usize, degree_cap: usize) -> Result<ChainComplexQ> {
    let mut cx = ChainComplexQ { degree_cap, ..Default::default() };
    let top = degree_cap + 1;
    for weight in 1..=weight_cap {
        // classes per degree
        let mut classes: BTreeMap<usize, Vec<Vec<A::Elem>>> = BTreeMap::new();
        let mut seen = BTreeSet::new();
        for w in all_words(alg, weight, top + 1)? {
            let d = word_degree(alg, &w);
            if d > top {
                continue;
            }
            if let Some((_, rep)) = canonical_rotation(alg, &w) {
                if seen.insert(rep.clone()) {
                    classes.entry(d).or_default().push(rep);
                }
            }
        }
        for (d, reps) in &classes {
            check_budget(&format!("cyclic basis at degree {d}, weight {weight}"), reps.len())?;
        }
        let index: BTreeMap<usize, BTreeMap<&Vec<A::Elem>, usize>> = classes
            .iter()
            .map(|(d, reps)| (*d, reps.iter().enumerate().map(|(i, r)| (r, i)).collect()))
            .collect();
        for d in 0..=top {
            let reps = classes.get(&d).cloned().unwrap_or_default();
            cx.cells.insert(
                (d, weight),
                reps.iter().map(|w| format!("({})", w.iter().join(", "))).collect(),
            );
            if d == 0 {
                continue;
            }
            let target_len = classes.get(&(d - 1)).map_or(0, |v| v.len());
            let empty = BTreeMap::new();
            let tindex = index.get(&(d - 1)).unwrap_or(&empty);
            let cols: Vec<Vec<Rational>> = reps
                .par_iter()
                .map(|w| {
                    let mut ch = CyclicChain::default();
                    ch.add_word(alg, Rational::one(), w.clone());
                    let dch = chain_differential(alg, &ch);
                    let mut col = vec![Rational::zero(); target_len];
                    for (tw, c) in dch.terms() {
                        col[tindex[tw]] = c.clone();
                    }
                    col
                })
                .collect();
            let rows: linalg::Matrix = (0..target_len).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
            cx.boundaries.insert((d, weight), rows);
        }
        // ∂∂ = 0
        for d in 2..=top {
            let (Some(a), Some(b)) = (cx.boundaries.get(&(d - 1, weight)), cx.boundaries.get(&(d, weight))) else {
                continue;
            };
            if !matmul_is_zero(a, b) {
                return Err(Error::Integrity(format!("boundary squares to nonzero at degree {d}, weight {weight}")));
            }
        }
    }
    Ok(cx)
}

fn matmul_is_zero(a: &linalg::Matrix, b: &linalg::Matrix) -> bool {
    let inner = b.len();
    let ncols = b.first().map_or(0, |r| r.len());
    a.iter().all(|row| {
        (0..ncols).all(|j| {
            let mut s = Rational::zero();
            for k in 0..inner {
                if !row[k].is_zero() && !b[k][j].is_zero() {
                    s += &row[k] * &b[k][j];
                }
            }
            s.is_zero()
        })
    })
}

/// dim H = dim C − rank ∂_d − rank ∂_{d+1}, per (degree, weight) up to the degree cap.
pub fn homology(c: &ChainComplexQ) -> Result<HomologySummary> {
    let mut dims = BTreeMap::new();
    let weights: BTreeSet<usize> = c.cells.keys().map(|k| k.1).collect();
    for &w in &weights {
        for d in 0..=c.degree_cap {
            if let (Some(a), Some(b)) = (c.boundaries.get(&(d, w)), c.boundaries.get(&(d + 1, w))) {
                if !matmul_is_zero(a, b) {
                    return Err(Error::Integrity(format!("∂∂ ≠ 0 at degree {}, weight {w}", d + 1)));
                }
            }
            let n = c.cells.get(&(d, w)).map_or(0, |v| v.len());
            let r_out = c.boundaries.get(&(d, w)).map_or(0, |m| linalg::rank(m));
            let r_in = c.boundaries.get(&(d + 1, w)).map_or(0, |m| linalg::rank(m));
            dims.insert((d, w), n - r_out - r_in);
        }
    }
    Ok(HomologySummary { dims })
}

/// dim Ω^n_w − rank(d: Ω^{n−1}_w → Ω^n_w) for the reduced de Rham complex
/// (constants removed), weight = polynomial degree + form degree.
pub fn derham_quotient_dims(nvars: u8, weight_cap: usize, degree_cap: usize) -> Result<HomologySummary> {
    let mut dims = BTreeMap::new();
    for w in 1..=weight_cap {
        for n in 0..=degree_cap.min(w) {
            let target = if n > nvars as usize { Vec::new() } else { form_basis(nvars, w - n, n)? };
            let rank = if n == 0 || n > nvars as usize {
                0
            } else {
                let source = form_basis(nvars, w - n + 1, n - 1)?;
                let idx: BTreeMap<&Monomial<Gen>, usize> = target.iter().enumerate().map(|(i, m)| (m, i)).collect();
                let rows: linalg::Matrix = source
                    .iter()
                    .map(|m| {
                        let f = Form::new(nvars, AlgebraElement::term(Rational::one(), m.clone())).expect("basis form");
                        let mut row = vec![Rational::zero(); target.len()];
                        for (t, c) in f.d().body().terms() {
                            row[idx[t]] = c.clone();
                        }
                        row
                    })
                    .collect();
                linalg::rank(&rows)
            };
            dims.insert((n, w), target.len() - rank);
        }
    }
    Ok(HomologySummary { dims })
}

/// HKR antisymmetrisation: f dx_{j_1}..dx_{j_i} ↦ Σ_σ sgn(σ) (f, x_{j_σ(1)}, ..).
/// Terms with constant coefficient lie outside C^λ(Ā) and map to 0.
pub fn hkr_eps(omega: &Form) -> CyclicChain<Monomial<Gen>> {
    let alg = PolyAlgebra { nvars: omega.nvars() };
    let mut out = CyclicChain::default();
    for (m, c) in omega.body().terms() {
        let (x, dxs) = split_monomial(m);
        let (xm, _) = x.terms().next().expect("nonzero monomial part");
        if xm.is_one() {
            continue;
        }
        for perm in (0..dxs.len()).permutations(dxs.len()) {
            let mut w = vec![xm.clone()];
            w.extend(perm.iter().map(|&k| Monomial::from_gen(Gen::X(dxs[k]))));
            let s = if inversion_parity(&perm) { -c.clone() } else { c.clone() };
            out.add_word(&alg, s, w);
        }
    }
    out
}

/// (a_0, .., a_i) ↦ 1/i! a_0 da_1 .. da_i.
pub fn hkr_i(c: &CyclicChain<Monomial<Gen>>, nvars: u8) -> Form {
    let mut out = Form::zero(nvars);
    for (w, v) in c.terms() {
        let mono = |m: &Monomial<Gen>| Form::new(nvars, AlgebraElement::term(Rational::one(), m.clone())).expect("polynomial monomial");
        let mut f = mono(&w[0]);
        for a in &w[1..] {
            f = f.wedge(&mono(a).d());
        }
        let scale = v / Rational::from_integer(factorial(w.len() - 1));
        out = out.add(&f.scale(&scale));
    }
    out
}

/// λ of a list of variables as a signed letter of R.
fn letter(vars: &[u8]) -> Option<(bool, Vec<u8>)> {
    crate::gcalg::sort_odd(vars).filter(|(_, v)| !v.is_empty())
}

/// The lift β of α = u_1..u_n du_{n+1}..du_{n+p} to C^λ(R̄), where `u` lists
/// the variable index of each of the n+p factors. For n = 0 the unit slot is
/// dropped and the m-slot terms are weighted by 1/m, which keeps β closed.
pub fn beta_cocycle(u: &[u8], n: usize, p: usize) -> Result<CyclicChain<RWord>> {
    if u.len() != n + p {
        return Err(Error::InvalidInput(format!("beta_cocycle needs {} factors, got {}", n + p, u.len())));
    }
    let alg = ResolutionAlgebra { nvars: u.iter().copied().max().unwrap_or(1) };
    let mut out = CyclicChain::default();
    let inv_nfact = Rational::from_integer(factorial(n)).recip();
    let dus = &u[n..];
    for sigma in (0..n).permutations(n) {
        for m in 0..=p {
            for f in std::iter::repeat(0..n + m).take(p).multi_cartesian_product() {
                if (n..n + m).any(|b| !f.contains(&b)) {
                    continue;
                }
                let mut neg = inversion_parity(&f);
                let block = |j: usize| -> Vec<u8> { f.iter().zip(dus).filter(|(&t, _)| t == j).map(|(_, &d)| d).collect() };
                let mut x = Vec::new();
                let mut zero = false;
                for j in 0..n {
                    let mut vars = vec![u[sigma[j]]];
                    vars.extend(block(j));
                    match letter(&vars) {
                        Some((s, l)) => {
                            neg ^= s;
                            x.push(l);
                        }
                        None => zero = true,
                    }
                }
                let mut word = Vec::new();
                if n > 0 {
                    word.push(RWord(x));
                }
                for b in n..n + m {
                    match letter(&block(b)) {
                        Some((s, l)) => {
                            neg ^= s;
                            word.push(RWord::letter(l));
                        }
                        None => zero = true,
                    }
                }
                if zero || word.is_empty() {
                    continue;
                }
                let c = if n == 0 { Rational::new(One::one(), (m as i64).into()) } else { inv_nfact.clone() };
                out.add_word(&alg, if neg { -c } else { c }, word);
            }
        }
    }
    Ok(out)
}

/// The part of β with no barred slots (m = 0): its image in R_♮.
pub fn beta_natural_part(u: &[u8], n: usize, p: usize) -> Result<RElement> {
    let beta = beta_cocycle(u, n, p)?;
    let mut out = RElement::zero();
    if n == 0 {
        return Ok(out);
    }
    for (w, c) in beta.terms() {
        if w.len() == 1 && w[0].letters().len() == n {
            out.add_term(c.clone(), w[0].clone());
        }
    }
    Ok(out)
}

/// The co-HKR map ε on R_♮: a cyclic word x_{B_0} x_{a_1} .. x_{a_k} whose
/// letters after the head are all linear maps to dx_{B_0} x_{a_1}..x_{a_k};
/// summed over the rotations of the word.
pub fn co_hkr_eps(e: &RElement, nvars: u8) -> Form {
    let mut body = AlgebraElement::zero();
    for (w, c) in e.terms() {
        let ls = w.letters();
        let k = ls.len();
        let mut neg = false;
        for r in 0..k {
            // rotation by r: move the first r letters to the back
            if r > 0 {
                let first = ls[r - 1].len() - 1;
                let rest: usize = ls.iter().enumerate().filter(|(i, _)| *i != r - 1).map(|(_, l)| l.len() - 1).sum();
                if (first * rest) % 2 == 1 {
                    neg = !neg;
                }
            }
            let rot: Vec<&Vec<u8>> = ls[r..].iter().chain(&ls[..r]).collect();
            if rot[1..].iter().any(|l| l.len() != 1) {
                continue;
            }
            let mut t = AlgebraElement::constant(if neg { -c.clone() } else { c.clone() });
            for &i in rot[0] {
                t = &t * &AlgebraElement::dx(i);
            }
            for l in &rot[1..] {
                t = &t * &AlgebraElement::x(l[0]);
            }
            body += t;
        }
    }
    Form::new(nvars, body).expect("indices within range")
}

/// Outcome of checking the cyclic route for one form.
#[derive(Clone, Debug)]
pub struct Conj1Case {
    pub alpha: Form,
    pub closed: bool,
    pub trace_matches: bool,
    pub eps_matches: bool,
}

impl Conj1Case {
    pub fn ok(&self) -> bool {
        self.closed && self.trace_matches && self.eps_matches
    }
}

/// Checks one α: β closed, its R_♮ part abelianises to the simple trace,
/// and ε of the R_♮ part is dα.
pub fn check_conj1(nvars: u8, u: &[u8], n: usize, p: usize) -> Result<Conj1Case> {
    let mut body = AlgebraElement::one();
    for &v in &u[..n] {
        body = &body * &AlgebraElement::x(v);
    }
    for &v in &u[n..] {
        body = &body * &AlgebraElement::dx(v);
    }
    let alpha = Form::new(nvars, body)?;
    let alg = ResolutionAlgebra { nvars };
    let beta = beta_cocycle(u, n, p)?;
    let closed = chain_differential(&alg, &beta).is_zero();
    let nat = beta_natural_part(u, n, p)?;
    let trace_matches = abelianize(&nat) == trace_simple(&alpha);
    let eps_matches = co_hkr_eps(&nat, nvars) == alpha.d();
    Ok(Conj1Case { alpha, closed, trace_matches, eps_matches })
}

/// Runs `check_conj1` on every α = u_1..u_n du_{n+1}..du_{n+p} with
/// 1 ≤ n+p ≤ cap, u nondecreasing and du strictly increasing.
pub fn verify_conj1(nvars: u8, cap: usize) -> Result<Vec<Conj1Case>> {
    let mut inputs = Vec::new();
    for total in 1..=cap {
        for n in 0..=total {
            let p = total - n;
            for us in (1..=nvars).combinations_with_replacement(n) {
                for ds in (1..=nvars).combinations(p) {
                    let mut u = us.clone();
                    u.extend(ds);
                    inputs.push((u, n, p));
                }
            }
        }
    }
    inputs.par_iter().map(|(u, n, p)| check_conj1(nvars, u, *n, *p)).collect()
}

/// Checks hkr_I ∘ hkr_eps = id modulo exact forms, and that hkr_eps lands
/// in cycles, on all basis forms with weight ≤ `weight_cap`.
pub fn verify_hkr(nvars: u8, weight_cap: usize) -> Result<Vec<(Form, bool)>> {
    let alg = PolyAlgebra { nvars };
    let mut out = Vec::new();
    for w in enumerate_forms(nvars, 0..=weight_cap, 0..=nvars as usize)? {
        let (m, _) = w.body().terms().next().expect("basis form");
        if m.weight() > weight_cap || m.weight() == 0 {
            continue;
        }
        let eps = hkr_eps(&w);
        let back = hkr_i(&eps, nvars);
        let diff = back.sub(&w);
        let ok = chain_differential(&alg, &eps).is_zero() && (diff.is_zero() || diff.is_exact()?);
        out.push((w, ok));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcalg::int;

    fn xm(alpha: &[u32]) -> Monomial<Gen> {
        poly_monomial(alpha)
    }

    #[test]
    fn k_x_weight_one() {
        let cx = build_connes_complex(Ambient::A, 1, 1, 1).unwrap();
        assert_eq!(cx.cells[&(0, 1)].len(), 1);
        assert_eq!(homology(&cx).unwrap().dim(0, 1), 1);
    }

    #[test]
    fn rotation_sign_kills_symmetric_odd_words() {
        let alg = PolyAlgebra { nvars: 1 };
        // (x, x): t has sign (-1)^{1*1} so the class is zero
        assert!(canonical_rotation(&alg, &[xm(&[1]), xm(&[1])]).is_none());
        assert!(canonical_rotation(&alg, &[xm(&[1]), xm(&[1]), xm(&[1])]).is_some());
    }

    #[test]
    fn differential_respects_rotation() {
        for alg_n in 1..=2u8 {
            let alg = ResolutionAlgebra { nvars: alg_n };
            for w in all_words(&alg, 4, 4).unwrap() {
                let mut a = CyclicChain::default();
                a.add_word(&alg, Rational::one(), w.clone());
                let dd = chain_differential(&alg, &chain_differential(&alg, &a));
                assert!(dd.is_zero(), "D² ≠ 0 on {w:?}");
            }
        }
    }

    #[test]
    fn poly_homology_matches_derham_one_var() {
        let h = homology(&build_connes_complex(Ambient::A, 1, 4, 3).unwrap()).unwrap();
        let dr = derham_quotient_dims(1, 4, 3).unwrap();
        for w in 1..=4 {
            assert_eq!(h.dim(0, w), 1);
            for d in 1..=3 {
                assert_eq!(h.dim(d, w), 0, "H_{d} at weight {w}");
            }
            for d in 0..=3 {
                assert_eq!(h.dim(d, w), dr.dim(d, w));
            }
        }
    }

    #[test]
    fn homology_of_small_complexes() {
        let mut c = ChainComplexQ { degree_cap: 1, ..Default::default() };
        c.cells.insert((0, 1), vec!["a".into()]);
        c.cells.insert((1, 1), vec!["b".into()]);
        c.boundaries.insert((1, 1), vec![vec![int(1)]]);
        let h = homology(&c).unwrap();
        assert_eq!(h.dim(0, 1), 0);
        assert_eq!(h.dim(1, 1), 0);
        let mut z = ChainComplexQ::default();
        z.cells.insert((0, 1), vec!["a".into(), "b".into(), "c".into()]);
        assert_eq!(homology(&z).unwrap().dim(0, 1), 3);
    }

    #[test]
    fn hkr_examples() {
        let f = |a: &[u32], j: &[u8]| Form::monomial(3, a, j).unwrap();
        let alg = PolyAlgebra { nvars: 3 };
        let e = hkr_eps(&f(&[1, 0, 0], &[2]));
        let mut expect = CyclicChain::default();
        expect.add_word(&alg, int(1), vec![xm(&[1, 0, 0]), xm(&[0, 1, 0])]);
        assert_eq!(e, expect);
        let w = f(&[0, 0, 1], &[1, 2]);
        let mut expect = CyclicChain::default();
        expect.add_word(&alg, int(1), vec![xm(&[0, 0, 1]), xm(&[1, 0, 0]), xm(&[0, 1, 0])]);
        expect.add_word(&alg, int(-1), vec![xm(&[0, 0, 1]), xm(&[0, 1, 0]), xm(&[1, 0, 0])]);
        assert_eq!(hkr_eps(&w), expect);
        assert!(hkr_eps(&Form::zero(3)).is_zero());
        let mut c = CyclicChain::default();
        c.add_word(&alg, int(1), vec![xm(&[1, 0, 0]), xm(&[0, 1, 0]), xm(&[0, 1, 0])]);
        assert!(hkr_i(&c, 3).is_zero());
    }

    #[test]
    fn hkr_round_trip() {
        for (w, ok) in verify_hkr(2, 4).unwrap() {
            assert!(ok, "HKR round trip fails on {w}");
        }
    }

    #[test]
    fn beta_examples() {
        let b = beta_cocycle(&[1], 1, 0).unwrap();
        assert_eq!(b.len(), 1);
        let b = beta_cocycle(&[1], 0, 1).unwrap();
        assert_eq!(b.terms().next().unwrap().0, &vec![RWord::letter(vec![1])]);
        let c = check_conj1(2, &[1, 2], 1, 1).unwrap();
        assert!(c.ok(), "{c:?}");
        let c = check_conj1(2, &[1, 2], 2, 0).unwrap();
        assert!(c.ok(), "{c:?}");
        let c = check_conj1(2, &[1, 1], 1, 1).unwrap();
        assert!(c.ok(), "{c:?}");
    }

    #[test]
    fn conj1_exhaustive() {
        for c in verify_conj1(3, 4).unwrap() {
            assert!(c.ok(), "{c:?}");
        }
    }

    #[test]
    fn hodge_dims_two_variables() {
        let a = homology(&build_connes_complex(Ambient::A, 2, 4, 3).unwrap()).unwrap();
        let r = homology(&build_connes_complex(Ambient::R, 2, 4, 3).unwrap()).unwrap();
        let dr = derham_quotient_dims(2, 4, 3).unwrap();
        for w in 1..=4 {
            for d in 0..=3 {
                assert_eq!(a.dim(d, w), dr.dim(d, w), "A side at ({d}, {w})");
                assert_eq!(r.dim(d, w), dr.dim(d, w), "R side at ({d}, {w})");
            }
        }
    }
}
