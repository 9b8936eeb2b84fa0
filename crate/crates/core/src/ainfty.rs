//! Merkulov's homotopy transfer on the minimal resolution R, the planar
//! binary tree expansion of the A∞ components f_{k+1}, and the tree form
//! of the reduced trace.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use itertools::Itertools;
use num::{One, Zero};
use rayon::prelude::*;

use crate::derham::{form_basis, split_monomial, Form};
use crate::error::{check_budget, Error, Result};
use crate::gcalg::{inversion_parity, AlgebraElement, Gen, Monomial, Rational};
use crate::linalg::{rref, solve_many, Rref};
use crate::resolution::{abelianize, delta_r, words_of_weight, RElement, RWord};
use crate::trace::cs_trace_raw;

/// A rooted planar binary tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlanarTree {
    Leaf,
    Node(Box<PlanarTree>, Box<PlanarTree>),
}

impl PlanarTree {
    pub fn node(l: PlanarTree, r: PlanarTree) -> Self {
        PlanarTree::Node(Box::new(l), Box::new(r))
    }

    pub fn leaves(&self) -> usize {
        match self {
            PlanarTree::Leaf => 1,
            PlanarTree::Node(l, r) => l.leaves() + r.leaves(),
        }
    }

    pub fn height(&self) -> usize {
        match self {
            PlanarTree::Leaf => 0,
            PlanarTree::Node(l, r) => 1 + l.height().max(r.height()),
        }
    }

    fn inorder_heights(&self, out: &mut Vec<usize>) {
        if let PlanarTree::Node(l, r) = self {
            l.inorder_heights(out);
            out.push(self.height());
            r.inorder_heights(out);
        }
    }
}

impl fmt::Display for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanarTree::Leaf => write!(f, "o"),
            PlanarTree::Node(l, r) => write!(f, "({l}{r})"),
        }
    }
}

fn all_trees(n: usize) -> Vec<PlanarTree> {
    if n == 1 {
        return vec![PlanarTree::Leaf];
    }
    let mut out = Vec::new();
    for l in 1..n {
        for a in all_trees(l) {
            for b in all_trees(n - l) {
                out.push(PlanarTree::node(a.clone(), b));
            }
        }
    }
    out
}

/// All planar binary trees with k+1 leaves. The order is by the in-order
/// sequence of vertex heights read right to left, descending; at k = 3 this
/// lists ((ab)c)d, (a(bc))d, a((bc)d), a(b(cd)), (ab)(cd).
pub fn enumerate_pbt(k: usize) -> Vec<PlanarTree> {
    let mut trees = all_trees(k + 1);
    trees.sort_by_cached_key(|t| {
        let mut h = Vec::new();
        t.inorder_heights(&mut h);
        h.reverse();
        std::cmp::Reverse(h)
    });
    trees
}

/// (-1)^T: leaves are +1, a vertex gets l·r·(-1)^{s+1} with s the number of
/// leaves of its left subtree.
pub fn tree_sign(t: &PlanarTree) -> i8 {
    match t {
        PlanarTree::Leaf => 1,
        PlanarTree::Node(l, r) => {
            let s = tree_sign(l) * tree_sign(r);
            if l.leaves() % 2 == 0 {
                -s
            } else {
                s
            }
        }
    }
}

/// A planar tree with leaves labelled by a permutation of 0..=k.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LabeledTree {
    Leaf(usize),
    Node(Box<LabeledTree>, Box<LabeledTree>),
}

impl LabeledTree {
    pub fn from_tree(t: &PlanarTree, labels: &[usize]) -> Self {
        fn go(t: &PlanarTree, it: &mut std::slice::Iter<'_, usize>) -> LabeledTree {
            match t {
                PlanarTree::Leaf => LabeledTree::Leaf(*it.next().expect("label count")),
                PlanarTree::Node(l, r) => {
                    let a = go(l, it);
                    LabeledTree::Node(Box::new(a), Box::new(go(r, it)))
                }
            }
        }
        go(t, &mut labels.iter())
    }

    pub fn shape(&self) -> PlanarTree {
        match self {
            LabeledTree::Leaf(_) => PlanarTree::Leaf,
            LabeledTree::Node(l, r) => PlanarTree::node(l.shape(), r.shape()),
        }
    }

    /// Leaf labels left to right.
    pub fn labels(&self) -> Vec<usize> {
        match self {
            LabeledTree::Leaf(i) => vec![*i],
            LabeledTree::Node(l, r) => {
                let mut v = l.labels();
                v.extend(r.labels());
                v
            }
        }
    }

    fn key(&self) -> (usize, usize) {
        let l = self.labels();
        (l.len(), *l.iter().min().expect("nonempty"))
    }

    /// Class representative: at every vertex the smaller subtree goes left,
    /// ties broken by the smallest label.
    pub fn normalize(&self) -> Self {
        match self {
            LabeledTree::Leaf(_) => self.clone(),
            LabeledTree::Node(l, r) => {
                let (a, b) = (l.normalize(), r.normalize());
                if a.key() <= b.key() {
                    LabeledTree::Node(Box::new(a), Box::new(b))
                } else {
                    LabeledTree::Node(Box::new(b), Box::new(a))
                }
            }
        }
    }

    /// (-1)^σ of the leaf labelling.
    pub fn label_sign(&self) -> i8 {
        if inversion_parity(&self.labels()) {
            -1
        } else {
            1
        }
    }

    /// The bracket expression of [f]_T with h subscripts, e.g. h2[h0[a0,a1],h0[a2,a3]].
    pub fn render_bracket(&self) -> String {
        fn go(t: &LabeledTree) -> (String, usize) {
            match t {
                LabeledTree::Leaf(i) => (format!("a{i}"), 0),
                LabeledTree::Node(l, r) => {
                    let (a, la) = go(l);
                    let (b, lb) = go(r);
                    let lab = la + lb + 1;
                    (format!("h{}[{a},{b}]", lab - 1), lab)
                }
            }
        }
        go(self).0
    }
}

/// One representative per equivalence class of labelled planar trees with k+1 leaves.
pub fn enumerate_labeled_classes(k: usize) -> Vec<LabeledTree> {
    let mut seen = BTreeSet::new();
    for t in enumerate_pbt(k) {
        for p in (0..=k).permutations(k + 1) {
            seen.insert(LabeledTree::from_tree(&t, &p).normalize());
        }
    }
    seen.into_iter().collect()
}

/// f_1 on a single commutative monomial: its variables in increasing order.
pub fn f1_monomial(m: &Monomial<Gen>) -> Result<RWord> {
    let mut letters = Vec::new();
    for (g, e) in m.factors() {
        match g {
            Gen::X(i) => letters.extend(std::iter::repeat(vec![*i]).take(*e as usize)),
            _ => return Err(Error::InvalidInput(format!("f1 expects a polynomial, got {m}"))),
        }
    }
    Ok(RWord(letters))
}

pub fn f1(a: &AlgebraElement) -> Result<RElement> {
    let mut out = RElement::zero();
    for (m, c) in a.terms() {
        out.add_term(c.clone(), f1_monomial(m)?);
    }
    Ok(out)
}

/// π: R → A, the abelianisation of the degree 0 part.
pub fn pi(e: &RElement) -> AlgebraElement {
    let mut d0 = RElement::zero();
    for (w, c) in e.terms() {
        if w.degree() == 0 {
            d0.add_term(c.clone(), w.clone());
        }
    }
    abelianize(&d0)
}

fn sorted_word(w: &RWord) -> RWord {
    let mut v = w.0.clone();
    v.sort();
    RWord(v)
}

/// The splitting R_i = B_i ⊕ L_i at one bidegree.
#[derive(Clone, Debug)]
pub struct Splitting {
    /// Basis words spanning the complement L_i (sorted words when i = 0).
    pub complement: Vec<RWord>,
    pub image_rank: usize,
}

/// The homotopy h and its bookkeeping for fixed caps.
#[derive(Clone, Debug)]
pub struct MerkulovData {
    pub nvars: u8,
    pub weight_cap: usize,
    pub degree_cap: usize,
    h: HashMap<RWord, RElement>,
    pub splittings: BTreeMap<(usize, usize), Splitting>,
}

fn coords(e: &RElement, index: &HashMap<RWord, usize>, n: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    for (w, c) in e.terms() {
        v[index[w]] = c.clone();
    }
    v
}

fn from_coords(v: &[Rational], words: &[RWord]) -> RElement {
    let mut out = RElement::zero();
    for (c, w) in v.iter().zip(words) {
        out.add_term(c.clone(), w.clone());
    }
    out
}

struct WeightPiece {
    h: Vec<(RWord, RElement)>,
    splittings: Vec<((usize, usize), Splitting)>,
}

fn build_weight(nvars: u8, w: usize, degree_cap: usize) -> Result<WeightPiece> {
    let all = words_of_weight(nvars, w);
    let top = degree_cap + 2;
    let mut by_deg: Vec<Vec<RWord>> = vec![Vec::new(); top + 1];
    for word in all {
        if word.degree() <= top {
            by_deg[word.degree()].push(word);
        }
    }
    for v in &mut by_deg {
        v.sort();
    }
    let index: Vec<HashMap<RWord, usize>> = by_deg
        .iter()
        .map(|ws| ws.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect())
        .collect();
    let delta_coords = |i: usize, word: &RWord| coords(&delta_r(&RElement::word(word.clone())), &index[i - 1], by_deg[i - 1].len());

    // B_i = im δ_{i+1} in RREF; L_i = words on non-pivot columns (sorted words for i = 0).
    let mut images: Vec<Rref> = Vec::new();
    for i in 0..top {
        let rows: Vec<Vec<Rational>> = by_deg[i + 1].iter().map(|word| delta_coords(i + 1, word)).collect();
        let r = if rows.is_empty() { Rref { rows: vec![], pivots: vec![] } } else { rref(rows) };
        images.push(r);
    }
    let complement = |i: usize| -> Vec<RWord> {
        if i == 0 {
            by_deg[0].iter().filter(|w| sorted_word(w) == **w).cloned().collect()
        } else {
            let piv: BTreeSet<usize> = images[i].pivots.iter().copied().collect();
            by_deg[i].iter().enumerate().filter(|(j, _)| !piv.contains(j)).map(|(_, w)| w.clone()).collect()
        }
    };

    let mut piece = WeightPiece { h: Vec::new(), splittings: Vec::new() };
    for i in 0..=degree_cap {
        piece.splittings.push(((i, w), Splitting { complement: complement(i), image_rank: images[i].pivots.len() }));
        let n = by_deg[i].len();
        if n == 0 {
            continue;
        }
        let targets = complement(i + 1);
        let cols: Vec<Vec<Rational>> = targets.iter().map(|t| delta_coords(i + 1, t)).collect();
        let rhs: Vec<Vec<Rational>> = by_deg[i]
            .iter()
            .map(|word| {
                let v = coords(&RElement::word(word.clone()), &index[i], n);
                let rest = if i == 0 {
                    coords(&RElement::word(sorted_word(word)), &index[0], n)
                } else {
                    images[i].reduce(&v)
                };
                v.iter().zip(&rest).map(|(a, b)| a - b).collect()
            })
            .collect();
        let sols = if cols.is_empty() {
            rhs.iter()
                .map(|b| if b.iter().all(|c| c.is_zero()) { Some(vec![]) } else { None })
                .collect()
        } else {
            solve_many(&cols, n, &rhs)
        };
        for (word, sol) in by_deg[i].iter().zip(sols) {
            let x = sol.ok_or_else(|| {
                Error::Integrity(format!("homotopy: no preimage for the boundary part of {word} (weight {w})"))
            })?;
            piece.h.push((word.clone(), from_coords(&x, &targets)));
        }
    }
    Ok(piece)
}

impl MerkulovData {
    /// Builds h on every word of weight ≤ weight_cap and degree ≤ degree_cap,
    /// then checks the side conditions.
    pub fn build(nvars: u8, weight_cap: usize, degree_cap: usize) -> Result<Self> {
        if nvars == 0 {
            return Err(Error::InvalidInput("need at least one variable".into()));
        }
        let letters = (1usize << nvars) - 1;
        check_budget("resolution words", letters.saturating_pow(weight_cap as u32))?;
        let pieces: Vec<WeightPiece> = (1..=weight_cap)
            .into_par_iter()
            .map(|w| build_weight(nvars, w, degree_cap))
            .collect::<Result<_>>()?;
        let mut md = MerkulovData { nvars, weight_cap, degree_cap, h: HashMap::new(), splittings: BTreeMap::new() };
        md.h.insert(RWord::unit(), RElement::zero());
        for p in pieces {
            md.h.extend(p.h);
            md.splittings.extend(p.splittings);
        }
        md.check()?;
        Ok(md)
    }

    /// h on one word.
    pub fn h_word(&self, w: &RWord) -> Result<&RElement> {
        self.h.get(w).ok_or_else(|| {
            Error::Resource(format!(
                "h is only tabulated up to weight {} and degree {}; got {w}",
                self.weight_cap, self.degree_cap
            ))
        })
    }

    pub fn h(&self, e: &RElement) -> Result<RElement> {
        let mut out = RElement::zero();
        for (w, c) in e.terms() {
            out.add_assign(&self.h_word(w)?.scale(c));
        }
        Ok(out)
    }

    /// Verifies h² = 0, h f₁ = 0, δh₀ = id − f₁π and δh_i + h_{i−1}δ = id on every tabulated word.
    pub fn check(&self) -> Result<()> {
        let bad = self
            .h
            .par_iter()
            .find_any(|(w, hw)| {
                let mut expect = RElement::word((*w).clone());
                if w.degree() == 0 {
                    expect = expect.sub(&RElement::word(sorted_word(w)));
                    if sorted_word(w) == **w && !hw.is_zero() {
                        return true;
                    }
                }
                if w.degree() < self.degree_cap && !matches!(self.h(hw), Ok(ref z) if z.is_zero()) {
                    return true;
                }
                let mut got = delta_r(hw);
                if w.degree() > 0 {
                    match self.h(&delta_r(&RElement::word((*w).clone()))) {
                        Ok(v) => got.add_assign(&v),
                        Err(_) => return true,
                    }
                }
                got != expect
            })
            .map(|(w, _)| w.clone());
        match bad {
            Some(w) => Err(Error::Integrity(format!("homotopy side condition fails on {w}"))),
            None => Ok(()),
        }
    }

    fn h_mu(&self, args: &[RElement]) -> Result<RElement> {
        if args.len() == 1 {
            Ok(args[0].scale(&-Rational::one()))
        } else {
            self.h(&self.mu(args)?)
        }
    }

    /// μ_i for i ≥ 2: concatenation for i = 2, otherwise
    /// Σ_{s+t=i} (-1)^{s+1} μ₂(hμ_s ⊗ hμ_t) with hμ₁ = −id.
    pub fn mu(&self, args: &[RElement]) -> Result<RElement> {
        match args.len() {
            0 | 1 => Err(Error::InvalidInput("mu needs at least two arguments".into())),
            2 => Ok(args[0].mul(&args[1])),
            i => {
                let mut out = RElement::zero();
                for s in 1..i {
                    let t = self.h_mu(&args[..s])?.mul(&self.h_mu(&args[s..])?);
                    out.add_assign(&if s % 2 == 1 { t } else { t.scale(&-Rational::one()) });
                }
                Ok(out)
            }
        }
    }

    /// f_{k+1}(a_0..a_k) = −h μ_{k+1}(f₁a_0, .., f₁a_k); f₁ when given one argument.
    pub fn f_taylor(&self, args: &[AlgebraElement]) -> Result<RElement> {
        let lifted: Vec<RElement> = args.iter().map(f1).collect::<Result<_>>()?;
        match lifted.len() {
            0 => Err(Error::InvalidInput("f needs at least one argument".into())),
            1 => Ok(lifted[0].clone()),
            _ => Ok(self.h(&self.mu(&lifted)?)?.scale(&-Rational::one())),
        }
    }

    /// f_T (or [f]_T with `commutator`): f₁ at the leaves, h∘μ₂ at inner
    /// vertices and −h∘μ₂ at the root.
    pub fn f_tree(&self, t: &PlanarTree, args: &[AlgebraElement], commutator: bool) -> Result<RElement> {
        if args.len() != t.leaves() {
            return Err(Error::InvalidInput(format!("tree has {} leaves, got {} arguments", t.leaves(), args.len())));
        }
        let lifted: Vec<RElement> = args.iter().map(f1).collect::<Result<_>>()?;
        let mut it = lifted.into_iter();
        let v = self.eval_tree(t, &mut it, commutator)?;
        Ok(if matches!(t, PlanarTree::Leaf) { v } else { v.scale(&-Rational::one()) })
    }

    fn eval_tree(&self, t: &PlanarTree, it: &mut impl Iterator<Item = RElement>, comm: bool) -> Result<RElement> {
        match t {
            PlanarTree::Leaf => Ok(it.next().expect("argument count checked")),
            PlanarTree::Node(l, r) => {
                let a = self.eval_tree(l, it, comm)?;
                let b = self.eval_tree(r, it, comm)?;
                self.h(&if comm { a.commutator(&b) } else { a.mul(&b) })
            }
        }
    }

    /// (-1)^{k+1} Σ_T (-1)^T f_T over planar trees with k+1 = |args| leaves.
    /// The prefactor collects the hμ₁ = −id carried by each leaf; with it the
    /// sum equals f_{k+1} for every k.
    pub fn f_tree_sum(&self, args: &[AlgebraElement]) -> Result<RElement> {
        if args.len() == 1 {
            return f1(&args[0]);
        }
        let mut out = RElement::zero();
        for t in enumerate_pbt(args.len() - 1) {
            let v = self.f_tree(&t, args, false)?;
            out.add_assign(&if tree_sign(&t) > 0 { v } else { v.scale(&-Rational::one()) });
        }
        Ok(leaf_factor(args.len(), out))
    }

    /// Σ_σ (-1)^σ f̄_{k+1}(a_{σ(0)}, .., a_{σ(k)}).
    pub fn trfor(&self, args: &[AlgebraElement]) -> Result<AlgebraElement> {
        let n = args.len();
        let mut out = AlgebraElement::zero();
        for p in (0..n).permutations(n) {
            let perm: Vec<AlgebraElement> = p.iter().map(|&i| args[i].clone()).collect();
            let v = abelianize(&self.f_taylor(&perm)?);
            out += if inversion_parity(&p) { -v } else { v };
        }
        Ok(out)
    }

    /// (-1)^{k+1} Σ over labelled classes of (-1)^{σ₀}(-1)^{T₀} [f̄]_{T₀}(a_{σ₀(0)}, ..).
    pub fn class_sum(&self, args: &[AlgebraElement]) -> Result<AlgebraElement> {
        let k = args.len() - 1;
        if k == 0 {
            return Ok(abelianize(&f1(&args[0])?));
        }
        let mut out = AlgebraElement::zero();
        for c in enumerate_labeled_classes(k) {
            let t = c.shape();
            let perm: Vec<AlgebraElement> = c.labels().iter().map(|&i| args[i].clone()).collect();
            let v = abelianize(&self.f_tree(&t, &perm, true)?);
            out += if c.label_sign() * tree_sign(&t) > 0 { v } else { -v };
        }
        Ok(if args.len() % 2 == 0 { out } else { -out })
    }

    /// The reduced trace of a homogeneous k-form through the A∞ morphism,
    /// computed both as the permutation sum and as the labelled-tree sum.
    pub fn tree_trace(&self, omega: &Form) -> Result<AlgebraElement> {
        let mut out = AlgebraElement::zero();
        for (m, c) in omega.body().terms() {
            let (a0, dxs) = split_monomial(m);
            if m.factors().iter().any(|(g, _)| matches!(g, Gen::Lam(_))) {
                return Err(Error::InvalidInput(format!("not a differential form term: {m}")));
            }
            let mut args = vec![a0];
            args.extend(dxs.iter().map(|&i| AlgebraElement::x(i)));
            let a = self.trfor(&args)?;
            let b = self.class_sum(&args)?;
            if a != b {
                return Err(Error::Integrity(format!(
                    "tree sum and permutation sum differ on {m}: {b} vs {a}"
                )));
            }
            out += a.scale(c);
        }
        Ok(out)
    }
}

fn leaf_factor(leaves: usize, e: RElement) -> RElement {
    if leaves % 2 == 0 {
        e
    } else {
        e.scale(&-Rational::one())
    }
}

/// Outcome of one check of the tree sum and the Chern–Simons sum on a0 da1 .. dak.
#[derive(Clone, Debug)]
pub struct CsTreeCase {
    pub args: Vec<Monomial<Gen>>,
    pub tree_side: AlgebraElement,
    pub cs_side: AlgebraElement,
}

impl CsTreeCase {
    pub fn ok(&self) -> bool {
        self.tree_side == self.cs_side
    }
}

/// Ordered tuples (a_0..a_k) of monomials, a_1..a_k nonconstant (a_0 too when
/// k = 0), total degree ≤ weight_cap.
pub fn argument_tuples(nvars: u8, k: usize, weight_cap: usize) -> Result<Vec<Vec<Monomial<Gen>>>> {
    let mut by_deg: Vec<Vec<Monomial<Gen>>> = Vec::new();
    for d in 0..=weight_cap {
        by_deg.push(form_basis(nvars, d, 0)?);
    }
    let mut out = Vec::new();
    let mut cur: Vec<Monomial<Gen>> = Vec::new();
    fn rec(
        by_deg: &[Vec<Monomial<Gen>>],
        k: usize,
        left: usize,
        cur: &mut Vec<Monomial<Gen>>,
        out: &mut Vec<Vec<Monomial<Gen>>>,
    ) {
        if cur.len() == k + 1 {
            out.push(cur.clone());
            return;
        }
        let lo = if cur.is_empty() && k > 0 { 0 } else { 1 };
        for d in lo..=left {
            for m in &by_deg[d] {
                cur.push(m.clone());
                rec(by_deg, k, left - d, cur, out);
                cur.pop();
            }
        }
    }
    rec(&by_deg, k, weight_cap, &mut cur, &mut out);
    Ok(out)
}

/// a_0 da_1 .. da_k as a form.
pub fn form_of_tuple(nvars: u8, args: &[Monomial<Gen>]) -> Result<Form> {
    let mut f = Form::new(nvars, AlgebraElement::term(Rational::one(), args[0].clone()))?;
    for a in &args[1..] {
        f = f.wedge(&Form::new(nvars, AlgebraElement::term(Rational::one(), a.clone()))?.d());
    }
    Ok(f)
}

/// Compares the labelled-tree sum with cs_trace_raw on every tuple.
pub fn verify_cstree(md: &MerkulovData, k: usize, weight_cap: usize) -> Result<Vec<CsTreeCase>> {
    argument_tuples(md.nvars, k, weight_cap)?
        .into_par_iter()
        .map(|args| {
            let elems: Vec<AlgebraElement> =
                args.iter().map(|m| AlgebraElement::term(Rational::one(), m.clone())).collect();
            let tree_side = md.class_sum(&elems)?;
            let cs_side = cs_trace_raw(&form_of_tuple(md.nvars, &args)?);
            Ok(CsTreeCase { args, tree_side, cs_side })
        })
        .collect()
}

/// Outcome of the tree-expansion and trace-sum comparisons on one tuple.
#[derive(Clone, Debug)]
pub struct TreeLemmaCase {
    pub args: Vec<Monomial<Gen>>,
    pub expansion_ok: bool,
    pub sums_ok: bool,
}

/// f_{k+1} = Σ_T (-1)^T f_T and trfor = class sum on every tuple of nonconstant monomials.
pub fn verify_tree_lemma(md: &MerkulovData, k: usize, weight_cap: usize) -> Result<Vec<TreeLemmaCase>> {
    argument_tuples(md.nvars, k, weight_cap)?
        .into_par_iter()
        .filter(|args| !args[0].is_one())
        .map(|args| {
            let elems: Vec<AlgebraElement> =
                args.iter().map(|m| AlgebraElement::term(Rational::one(), m.clone())).collect();
            let expansion_ok = md.f_taylor(&elems)? == md.f_tree_sum(&elems)?;
            let sums_ok = md.trfor(&elems)? == md.class_sum(&elems)?;
            Ok(TreeLemmaCase { args, expansion_ok, sums_ok })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resolution::RWord;

    fn x(i: u8) -> AlgebraElement {
        AlgebraElement::x(i)
    }

    fn md() -> &'static MerkulovData {
        use std::sync::OnceLock;
        static MD: OnceLock<MerkulovData> = OnceLock::new();
        MD.get_or_init(|| MerkulovData::build(3, 4, 3).unwrap())
    }

    #[test]
    fn catalan_counts() {
        let c: Vec<usize> = (1..=5).map(|k| enumerate_pbt(k).len()).collect();
        assert_eq!(c, vec![1, 2, 5, 14, 42]);
    }

    #[test]
    fn signs() {
        let l = || PlanarTree::Leaf;
        assert_eq!(tree_sign(&PlanarTree::node(l(), PlanarTree::node(l(), l()))), 1);
        assert_eq!(tree_sign(&PlanarTree::node(PlanarTree::node(l(), l()), l())), -1);
        let s: Vec<i8> = enumerate_pbt(3).iter().map(tree_sign).collect();
        assert_eq!(s, vec![-1, 1, -1, 1, -1]);
        assert_eq!(enumerate_pbt(3)[4].to_string(), "((oo)(oo))");
        assert_eq!(enumerate_pbt(3)[3].to_string(), "(o(o(oo)))");
    }

    #[test]
    fn class_counts() {
        assert_eq!(enumerate_labeled_classes(1).len(), 1);
        assert_eq!(enumerate_labeled_classes(2).len(), 3);
        let c3 = enumerate_labeled_classes(3);
        assert_eq!(c3.len(), 15);
        let bal: Vec<Vec<usize>> = c3.iter().filter(|c| c.shape() == enumerate_pbt(3)[4]).map(|c| c.labels()).collect();
        assert_eq!(bal, vec![vec![0, 1, 2, 3], vec![0, 2, 1, 3], vec![0, 3, 1, 2]]);
        let comb: Vec<_> = c3.iter().filter(|c| c.shape() == enumerate_pbt(3)[3]).collect();
        assert_eq!(comb.len(), 12);
        assert!(comb.iter().all(|c| c.labels()[2] < c.labels()[3]));
        assert_eq!(enumerate_labeled_classes(4).len(), 105);
    }

    #[test]
    fn h0_on_commutator() {
        let md = md();
        let w = |v: Vec<Vec<u8>>| RElement::word(RWord(v));
        let comm = w(vec![vec![1], vec![2]]).sub(&w(vec![vec![2], vec![1]]));
        assert_eq!(md.h(&comm).unwrap(), RElement::lam(&[1, 2]).scale(&-Rational::one()));
        assert!(md.h(&w(vec![vec![1], vec![1]])).unwrap().is_zero());
        assert!(md.h(&w(vec![vec![1], vec![2]])).unwrap().is_zero());
    }

    #[test]
    fn low_arity_components() {
        let md = md();
        let mu2 = md.mu(&[f1(&x(1)).unwrap(), f1(&x(2)).unwrap()]).unwrap();
        assert_eq!(mu2, RElement::word(RWord(vec![vec![1], vec![2]])));
        assert!(md.f_taylor(&[x(1), x(1)]).unwrap().is_zero());
        let anti = md.f_taylor(&[x(1), x(2)]).unwrap().sub(&md.f_taylor(&[x(2), x(1)]).unwrap());
        assert_eq!(anti, RElement::lam(&[1, 2]));
    }

    #[test]
    fn tree_trace_small() {
        let md = md();
        let f = |s: &AlgebraElement| Form::new(3, s.clone()).unwrap();
        let om = f(&(&x(1) * &AlgebraElement::dx(2)));
        assert_eq!(md.tree_trace(&om).unwrap(), AlgebraElement::lam(&[1, 2]));
        let om = f(&(&x(1) * &AlgebraElement::dx(1)));
        assert!(md.tree_trace(&om).unwrap().is_zero());
    }

    #[test]
    fn tree_lemma_exhaustive() {
        let md = md();
        for k in 1..=3 {
            for c in verify_tree_lemma(md, k, 4).unwrap() {
                assert!(c.expansion_ok, "expansion k={k} {:?}", c.args);
                assert!(c.sums_ok, "sums k={k} {:?}", c.args);
            }
        }
    }

    #[test]
    fn cstree_exhaustive() {
        let md = md();
        for k in 0..=3 {
            for c in verify_cstree(md, k, 4).unwrap() {
                assert!(c.ok(), "k={k} {:?}: {} vs {}", c.args, c.tree_side, c.cs_side);
            }
        }
    }
}
