//! The induced module ℂ[Θ] ⊗ Λ(6) ⊗ F in Hodge-dual coordinates.
//!
//! A vector is stored through its dual coordinates: the key `(k, I)` holds
//! the F-component of Θᵏ η_I. The λ-action of ξ_L is computed from a
//! closed formula on each η_I ⊗ v and extended to Θᵏ η_I ⊗ v by the factor
//! (λ+Θ)ᵏ.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::exactnum::{add_term, binomial, BiPoly, Gr, Linear};
use crate::gmodule::{FVec, ModuleSpec};
use crate::grassmann::{self, derive_mono, hodge_bar_mono, mono_mul, Grass, GrassmannElement, Mono, N};

/// Highest Θ-power the coefficient families are defined for.
pub const FAMILY_MAX_THETA: u32 = 4;

/// Sparse vector of the induced module: `(k, I) ↦ v` stands for Θᵏ η_I ⊗ v.
pub type VermaVector<V = FVec> = BTreeMap<(u32, Mono), V>;

/// Degree of the original vector whose dual coordinates are Θᵏ η_I.
pub fn dual_degree(k: u32, i: Mono) -> u32 {
    2 * k + N as u32 - i.len()
}

/// How ξ_L acts on F-coordinates: the operator applied to `v` in one term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FOp {
    T,
    /// ξ_rs with r < s.
    Xi(u8, u8),
}

impl fmt::Display for FOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FOp::T => write!(f, "t"),
            FOp::Xi(r, s) => write!(f, "xi[{r}{s}]"),
        }
    }
}

/// A representation of g₀ = ℂt ⊕ so(6) in which the action is evaluated.
pub trait FRep {
    type V: Linear;
    fn act_t(&self, v: &Self::V) -> Self::V;
    /// ξ_rs.v for any r, s.
    fn act_xi(&self, r: u8, s: u8, v: &Self::V) -> Self::V;

    fn apply(&self, op: Option<FOp>, v: &Self::V) -> Self::V {
        match op {
            None => v.clone(),
            Some(FOp::T) => self.act_t(v),
            Some(FOp::Xi(r, s)) => self.act_xi(r, s, v),
        }
    }
}

impl FRep for ModuleSpec {
    type V = FVec;
    fn act_t(&self, v: &FVec) -> FVec {
        ModuleSpec::act_t(self, v)
    }
    fn act_xi(&self, r: u8, s: u8, v: &FVec) -> FVec {
        ModuleSpec::act_xi(self, r, s, v)
    }
}

/// An unknown F-vector `v_{I,k}` with a word of g₀-operators applied to it,
/// outermost first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sym {
    pub ops: Vec<FOp>,
    pub index: Mono,
    pub k: u32,
}

impl Sym {
    pub fn unknown(index: Mono, k: u32) -> Sym {
        Sym {
            ops: Vec::new(),
            index,
            k,
        }
    }

    fn with(&self, op: FOp) -> Sym {
        let mut ops = Vec::with_capacity(self.ops.len() + 1);
        ops.push(op);
        ops.extend_from_slice(&self.ops);
        Sym {
            ops,
            index: self.index,
            k: self.k,
        }
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for op in &self.ops {
            write!(f, "{op}.")?;
        }
        let label = if self.index == Mono::STAR {
            "*".to_string()
        } else {
            self.index.label()
        };
        write!(f, "v[{label},{}]", self.k)
    }
}

/// Linear combination of symbolic F-vectors.
pub type SymVec = BTreeMap<Sym, Gr>;

/// F with unspecified entries: every operator application stays formal.
#[derive(Clone, Copy, Debug, Default)]
pub struct Symbolic;

impl FRep for Symbolic {
    type V = SymVec;
    fn act_t(&self, v: &SymVec) -> SymVec {
        v.iter().map(|(s, c)| (s.with(FOp::T), c.clone())).collect()
    }
    fn act_xi(&self, r: u8, s: u8, v: &SymVec) -> SymVec {
        if r == s {
            return SymVec::new();
        }
        let (op, sign) = if r < s {
            (FOp::Xi(r, s), Gr::ONE)
        } else {
            (FOp::Xi(s, r), -Gr::ONE)
        };
        v.iter().map(|(x, c)| (x.with(op), c * &sign)).collect()
    }
}

pub fn sym_unknown(index: Mono, k: u32) -> SymVec {
    SymVec::from([(Sym::unknown(index, k), Gr::ONE)])
}

/// Σ_{k ≤ k_max} Σ_I Θᵏ η_I ⊗ v_{I,k} with every coordinate an unknown.
pub fn generic_vector(k_max: u32) -> VermaVector<SymVec> {
    let mut m = VermaVector::new();
    for k in 0..=k_max {
        for i in Mono::all() {
            m.insert((k, i), sym_unknown(i, k));
        }
    }
    m
}

pub fn render_symvec(v: &SymVec) -> String {
    if v.is_empty() {
        return "0".to_string();
    }
    v.iter()
        .map(|(s, c)| format!("({c}) {s}"))
        .collect::<Vec<_>>()
        .join(" + ")
}

pub fn render_fvec(v: &FVec) -> String {
    let parts: Vec<String> = v.iter().map(|(i, c)| format!("{}: {c}", i + 1)).collect();
    format!("({})", parts.join(", "))
}

/// Renders "Θ^k eta[I] ⊗ (coordinates)" terms joined by " + ".
pub fn render<V>(m: &VermaVector<V>, coords: impl Fn(&V) -> String) -> String {
    if m.is_empty() {
        return "0".to_string();
    }
    m.iter()
        .map(|(&(k, i), v)| {
            let theta = match k {
                0 => String::new(),
                1 => "Θ ".to_string(),
                _ => format!("Θ^{k} "),
            };
            format!("{theta}{} ⊗ {}", grassmann::eta_label(i), coords(v))
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

// ---------------------------------------------------------------------------
// η-words

/// Reduces a word in the η_i to Θ-power times a sorted monomial, using
/// η_i η_i = Θ and η_i η_j = −η_j η_i. An empty map means zero never occurs
/// here, since η_i² is not zero.
pub fn eta_normalize(word: &[u8]) -> Result<VermaVector<Gr>> {
    let mut k = 0u32;
    let mut acc = Mono::EMPTY;
    let mut sign = 1i64;
    for &i in word {
        if !(1..=N).contains(&i) {
            return Err(Error::Domain(format!("index {i} not in 1..={N}")));
        }
        // move η_i left past the larger indices already present
        let above = acc.indices().into_iter().filter(|&j| j > i).count();
        if above % 2 == 1 {
            sign = -sign;
        }
        if acc.contains(i) {
            acc = acc.without(i);
            k += 1;
        } else {
            acc = acc.union(Mono::single(i));
        }
    }
    Ok(VermaVector::from([((k, acc), Gr::from(sign))]))
}

/// Left multiplication by η_i on Θᵏ η_J ⊗ v (original coordinates).
pub fn eta_left<V: Linear>(i: u8, m: &VermaVector<V>) -> VermaVector<V> {
    let mut out = VermaVector::new();
    for (&(k, j), v) in m {
        let mut word = vec![i];
        word.extend(j.indices());
        let r = eta_normalize(&word).expect("indices in range");
        for (&(dk, mono), c) in &r {
            add_term(&mut out, (k + dk, mono), v, c);
        }
    }
    out
}

/// Multiplication by Θ (central).
pub fn theta_times<V: Linear>(m: &VermaVector<V>) -> VermaVector<V> {
    m.iter().map(|(&(k, i), v)| ((k + 1, i), v.clone())).collect()
}

/// The isomorphism T: Θᵏ η_J ⊗ v ↦ Θᵏ η̄_J ⊗ v.
pub fn to_dual<V: Linear>(m: &VermaVector<V>) -> VermaVector<V> {
    let mut out = VermaVector::new();
    for (&(k, j), v) in m {
        let (s, bar) = hodge_bar_mono(j);
        add_term(&mut out, (k, bar), v, &Gr::from(i64::from(s)));
    }
    out
}

/// T⁻¹, for rendering vectors in their original coordinates.
pub fn from_dual<V: Linear>(m: &VermaVector<V>) -> VermaVector<V> {
    let mut out = VermaVector::new();
    for (&(k, i), v) in m {
        // η_I = s η̄_J with J the complement of I and η̄_J = s η_I
        let j = i.complement();
        let (s, _) = hodge_bar_mono(j);
        add_term(&mut out, (k, j), v, &Gr::from(i64::from(s)));
    }
    out
}

// ---------------------------------------------------------------------------
// Action templates

/// One term of T∘ξ_L_λ∘T⁻¹ on η_I ⊗ v: coef · λ^lambda Θ^theta η_out ⊗ op.v.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub lambda: u32,
    pub theta: u32,
    pub out: Mono,
    pub coef: i64,
    pub op: Option<FOp>,
}

fn sgn(n: u32) -> i64 {
    if n % 2 == 0 {
        1
    } else {
        -1
    }
}

/// ξ_rs written over the ξ_ab, a < b: (sign, op) or None when r = s.
fn xi_op(r: u8, s: u8) -> Option<(i64, FOp)> {
    match r.cmp(&s) {
        std::cmp::Ordering::Less => Some((1, FOp::Xi(r, s))),
        std::cmp::Ordering::Greater => Some((-1, FOp::Xi(s, r))),
        std::cmp::Ordering::Equal => None,
    }
}

fn push(terms: &mut BTreeMap<(u32, u32, Mono, Option<FOp>), i64>, lambda: u32, theta: u32, out: Mono, op: Option<FOp>, c: i64) {
    *terms.entry((lambda, theta, out, op)).or_insert(0) += c;
}

/// The terms of the action of ξ_L on η_I ⊗ v, for sorted L and I.
fn compute_terms(l: Mono, i: Mono) -> Vec<Term> {
    let nl = l.len();
    let pre = sgn(nl * (nl + 1) / 2 + nl * i.len());
    let eps = sgn(nl);
    let mut acc = BTreeMap::new();
    let ids: Vec<u8> = (1..=N).collect();

    // (|L|−2) Θ (ξ_L ⋆ η_I) ⊗ v
    if let Some((s, out)) = mono_mul(l, i) {
        push(&mut acc, 0, 1, out, None, pre * (i64::from(nl) - 2) * i64::from(s));
    }
    // −(−1)^|L| Σ_i (∂_i ξ_L ⋆ ∂_i η_I) ⊗ v
    for &x in &ids {
        let (Some((s1, dl)), Some((s2, di))) = (derive_mono(x, l), derive_mono(x, i)) else {
            continue;
        };
        if let Some((s3, out)) = mono_mul(dl, di) {
            push(&mut acc, 0, 0, out, None, -pre * eps * i64::from(s1 * s2 * s3));
        }
    }
    // −Σ_{r<s} (∂_r ∂_s ξ_L ⋆ η_I) ⊗ ξ_sr.v
    for &r in &ids {
        for &s in &ids {
            if r >= s {
                continue;
            }
            let Some((s1, d1)) = derive_mono(s, l) else { continue };
            let Some((s2, d2)) = derive_mono(r, d1) else { continue };
            let Some((s3, out)) = mono_mul(d2, i) else { continue };
            let (s4, op) = xi_op(s, r).expect("r < s");
            push(&mut acc, 0, 0, out, Some(op), -pre * i64::from(s1 * s2 * s3) * s4);
        }
    }
    // λ (ξ_L ⋆ η_I) ⊗ t.v
    if let Some((s, out)) = mono_mul(l, i) {
        push(&mut acc, 1, 0, out, Some(FOp::T), pre * i64::from(s));
    }
    // −λ (−1)^|L| Σ_i ∂_i(ξ_{Li} ⋆ η_I) ⊗ v
    for &x in &ids {
        let Some((s1, li)) = mono_mul(l, Mono::single(x)) else { continue };
        let Some((s2, j)) = mono_mul(li, i) else { continue };
        let Some((s3, out)) = derive_mono(x, j) else { continue };
        push(&mut acc, 1, 0, out, None, -pre * eps * i64::from(s1 * s2 * s3));
    }
    // +λ (−1)^|L| Σ_{x≠y} (∂_x ξ_{Ly} ⋆ η_I) ⊗ ξ_yx.v
    for &x in &ids {
        for &y in &ids {
            if x == y {
                continue;
            }
            let Some((s1, ly)) = mono_mul(l, Mono::single(y)) else { continue };
            let Some((s2, d)) = derive_mono(x, ly) else { continue };
            let Some((s3, out)) = mono_mul(d, i) else { continue };
            let (s4, op) = xi_op(y, x).expect("x ≠ y");
            push(&mut acc, 1, 0, out, Some(op), pre * eps * i64::from(s1 * s2 * s3) * s4);
        }
    }
    // −λ² Σ_{x<y} (ξ_{Lxy} ⋆ η_I) ⊗ ξ_yx.v
    for &x in &ids {
        for &y in &ids {
            if x >= y {
                continue;
            }
            let Some((s1, lx)) = mono_mul(l, Mono::single(x)) else { continue };
            let Some((s2, lxy)) = mono_mul(lx, Mono::single(y)) else { continue };
            let Some((s3, out)) = mono_mul(lxy, i) else { continue };
            let (s4, op) = xi_op(y, x).expect("x < y");
            push(&mut acc, 2, 0, out, Some(op), -pre * i64::from(s1 * s2 * s3) * s4);
        }
    }

    acc.into_iter()
        .filter(|(_, c)| *c != 0)
        .map(|((lambda, theta, out, op), coef)| Term {
            lambda,
            theta,
            out,
            coef,
            op,
        })
        .collect()
}

/// Cached terms of the action of ξ_L on η_I ⊗ v, for sorted L and I.
pub fn action_terms(l: Mono, i: Mono) -> &'static [Term] {
    static TABLE: OnceLock<Vec<Vec<Term>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(64 * 64);
        for lb in 0..64u8 {
            for ib in 0..64u8 {
                t.push(compute_terms(Mono::from_bits(lb), Mono::from_bits(ib)));
            }
        }
        t
    });
    &table[usize::from(l.bits()) * 64 + usize::from(i.bits())]
}

// ---------------------------------------------------------------------------
// λ-action

/// A polynomial in λ with coefficients in the induced module (Θ stays inside
/// the vector).
#[derive(Clone, PartialEq)]
pub struct ActionPolynomial<V: Linear> {
    by_lambda: BTreeMap<u32, VermaVector<V>>,
}

impl<V: Linear> fmt::Debug for ActionPolynomial<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.by_lambda.iter()).finish()
    }
}

impl<V: Linear> Default for ActionPolynomial<V> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<V: Linear> ActionPolynomial<V> {
    pub fn lambda_power(j: u32, m: VermaVector<V>) -> Self {
        let mut p = Self::zero();
        if !m.is_empty() {
            p.by_lambda.insert(j, m);
        }
        p
    }

    /// Coefficient of λʲ.
    pub fn coeff(&self, j: u32) -> VermaVector<V> {
        self.by_lambda.get(&j).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&u32, &VermaVector<V>)> {
        self.by_lambda.iter()
    }

    /// Value at λ = 0, i.e. the action of ξ_L itself.
    pub fn at_zero(&self) -> VermaVector<V> {
        self.coeff(0)
    }

    pub fn lambda_degree(&self) -> Option<u32> {
        self.by_lambda.keys().next_back().copied()
    }

    pub fn add_term(&mut self, j: u32, k: u32, i: Mono, v: &V, c: &Gr) {
        let slot = self.by_lambda.entry(j).or_default();
        add_term(slot, (k, i), v, c);
        if slot.is_empty() {
            self.by_lambda.remove(&j);
        }
    }

    /// Multiply by λ^n.
    pub fn shifted(&self, n: u32) -> Self {
        ActionPolynomial {
            by_lambda: self.by_lambda.iter().map(|(&j, m)| (j + n, m.clone())).collect(),
        }
    }

    /// The same polynomial in the commuting variables (λ, Θ), with values in
    /// Λ(6) ⊗ F.
    pub fn to_bipoly(&self) -> BiPoly<Grass<V>> {
        let mut terms: BTreeMap<(u32, u32), Grass<V>> = BTreeMap::new();
        for (&j, m) in &self.by_lambda {
            for (&(k, i), v) in m {
                terms.entry((j, k)).or_default().insert(i, v.clone());
            }
        }
        BiPoly::from_terms(terms)
    }
}

impl<V: Linear> Linear for ActionPolynomial<V> {
    fn zero() -> Self {
        ActionPolynomial {
            by_lambda: BTreeMap::new(),
        }
    }
    fn is_zero(&self) -> bool {
        self.by_lambda.is_empty()
    }
    fn add_scaled(&mut self, other: &Self, c: &Gr) {
        if c.is_zero() {
            return;
        }
        for (&j, m) in &other.by_lambda {
            let slot = self.by_lambda.entry(j).or_default();
            slot.add_scaled(m, c);
            if slot.is_empty() {
                self.by_lambda.remove(&j);
            }
        }
    }
}

/// T∘ξ_L_λ∘T⁻¹ applied to `m`, for sorted L.
pub fn mono_action<F: FRep>(f: &F, l: Mono, m: &VermaVector<F::V>) -> ActionPolynomial<F::V> {
    let mut out = ActionPolynomial::zero();
    for (&(k, i), v) in m {
        for term in action_terms(l, i) {
            let w = f.apply(term.op, v);
            if w.is_zero() {
                continue;
            }
            // (λ+Θ)^k = Σ_a C(k,a) λ^a Θ^(k−a)
            for a in 0..=k {
                let c = &binomial(k, a) * &Gr::from(term.coef);
                out.add_term(term.lambda + a, term.theta + k - a, term.out, &w, &c);
            }
        }
    }
    out
}

/// T∘ξ_L_λ∘T⁻¹ for an arbitrary word L of distinct indices (zero if an
/// index repeats).
pub fn lambda_action_t<F: FRep>(f: &F, word: &[u8], m: &VermaVector<F::V>) -> Result<ActionPolynomial<F::V>> {
    let (s, l) = grassmann::normalize(word)?;
    if s == 0 {
        return Ok(ActionPolynomial::zero());
    }
    let p = mono_action(f, l, m);
    Ok(if s == 1 { p } else { p.scaled(&-Gr::ONE) })
}

/// The λ-action of a Grassmann element, extended linearly.
pub fn element_action<F: FRep>(f: &F, g: &GrassmannElement, m: &VermaVector<F::V>) -> ActionPolynomial<F::V> {
    let mut out = ActionPolynomial::zero();
    for (&l, c) in g {
        out.add_scaled(&mono_action(f, l, m), c);
    }
    out
}

/// −i(−1)^{|L|(|L|+1)/2}, the weight of λ^{3−|L|} ξ*_L in the combined
/// operator.
pub fn dual_weight(l: Mono) -> Gr {
    let n = l.len();
    let s = sgn(n * (n + 1) / 2);
    Gr::imag(-s)
}

/// ξ_L_λ − i(−1)^{|L|(|L|+1)/2} λ^{3−|L|} ξ*_L_λ applied to `m`, for
/// sorted L with |L| ≤ 3.
pub fn combined_action<F: FRep>(f: &F, l: Mono, m: &VermaVector<F::V>) -> Result<ActionPolynomial<F::V>> {
    if l.len() > 3 {
        return Err(Error::Domain(format!("combined operator needs |L| ≤ 3, got {l}")));
    }
    let mut out = mono_action(f, l, m);
    let (s, dual) = grassmann::hodge_star_mono(l);
    let dual_part = mono_action(f, dual, m).shifted(3 - l.len());
    out.add_scaled(&dual_part, &(&dual_weight(l) * &Gr::from(i64::from(s))));
    Ok(out)
}

// ---------------------------------------------------------------------------
// Coefficient families

/// The four families of a single operator ξ_L, indexed by the Θ-power p of
/// the input: the Θ-term, the λ-free rest, the λ-term and the λ²-term.
#[derive(Clone, Debug, PartialEq)]
pub struct Families<V: Linear> {
    pub theta: [Grass<V>; 5],
    pub constant: [Grass<V>; 5],
    pub linear: [Grass<V>; 5],
    pub quadratic: [Grass<V>; 5],
}

impl<V: Linear> Families<V> {
    fn zero() -> Self {
        Families {
            theta: Default::default(),
            constant: Default::default(),
            linear: Default::default(),
            quadratic: Default::default(),
        }
    }

    /// Σ_p (λ+Θ)^p [(θ_{p−1} + c_p) + λ(l_p − θ_p) + λ² q_p] + (λ+Θ)⁵ θ₄,
    /// expanded in (λ, Θ).
    pub fn reconstruct(&self) -> BiPoly<Grass<V>> {
        let mut out = BiPoly::new();
        for p in 0..=5u32 {
            let pu = p as usize;
            let mut inner = BiPoly::new();
            if p >= 1 {
                inner.add_term(0, 0, &self.theta[pu - 1], &Gr::ONE);
            }
            if p <= 4 {
                inner.add_term(0, 0, &self.constant[pu], &Gr::ONE);
                inner.add_term(1, 0, &self.linear[pu], &Gr::ONE);
                inner.add_term(1, 0, &self.theta[pu], &-Gr::ONE);
                inner.add_term(2, 0, &self.quadratic[pu], &Gr::ONE);
            }
            out.add_assign(&inner.mul_scalar_poly(&BiPoly::sum_power(p)));
        }
        out
    }
}

/// Families of ξ_L (direct) and of ξ*_L (dual).
#[derive(Clone, Debug, PartialEq)]
pub struct Functionals<V: Linear> {
    pub direct: Families<V>,
    pub dual: Families<V>,
}

fn families<F: FRep>(f: &F, l: Mono, sign: i64, m: &VermaVector<F::V>) -> Families<F::V> {
    let mut fam = Families::zero();
    let sign = Gr::from(sign);
    for (&(k, i), v) in m {
        let p = k as usize;
        for term in action_terms(l, i) {
            let w = f.apply(term.op, v);
            let slot = match (term.lambda, term.theta) {
                (0, 1) => &mut fam.theta[p],
                (0, 0) => &mut fam.constant[p],
                (1, 0) => &mut fam.linear[p],
                (2, 0) => &mut fam.quadratic[p],
                other => unreachable!("template term {other:?}"),
            };
            add_term(slot, term.out, &w, &(&sign * &Gr::from(term.coef)));
        }
    }
    fam
}

/// The coefficient families of ξ_L and ξ*_L on `m`, for a word L of
/// distinct indices. Requires Θ-degree at most 4.
pub fn coefficient_functionals<F: FRep>(f: &F, word: &[u8], m: &VermaVector<F::V>) -> Result<Functionals<F::V>> {
    if let Some(&(k, _)) = m.keys().find(|(k, _)| *k > FAMILY_MAX_THETA) {
        return Err(Error::UnsupportedDegree {
            found: k,
            max: FAMILY_MAX_THETA,
        });
    }
    let (s, l) = grassmann::normalize(word)?;
    if s == 0 {
        return Err(Error::Domain(format!("repeated index in {word:?}")));
    }
    let (t, dual) = grassmann::hodge_star_mono(l);
    Ok(Functionals {
        direct: families(f, l, i64::from(s), m),
        dual: families(f, dual, i64::from(s * t), m),
    })
}

/// Coefficient of λᵃ μˢ after writing Θ = μ − λ.
pub fn mixed_coefficient<V: Linear>(p: &ActionPolynomial<V>, a: u32, s: u32) -> Grass<V> {
    p.to_bipoly().rebase().coeff_or_zero(a, s)
}

// ---------------------------------------------------------------------------
// Commutator oracle

/// Both sides of [a_λ, b_μ] m = [a_λ b]_{λ+μ} m as polynomials in (λ, μ).
#[derive(Clone, Debug)]
pub struct OracleReport<V: Linear> {
    pub commutator: BiPoly<VermaVector<V>>,
    pub bracket: BiPoly<VermaVector<V>>,
}

impl<V: Linear> OracleReport<V> {
    pub fn holds(&self) -> bool {
        self.commutator == self.bracket
    }

    pub fn difference(&self) -> BiPoly<VermaVector<V>> {
        let mut d = self.commutator.clone();
        d.add_scaled(&self.bracket, &-Gr::ONE);
        d
    }
}

fn uniform_length(g: &GrassmannElement) -> Result<u32> {
    let mut lens = g.keys().map(|m| m.len());
    let first = lens.next().unwrap_or(0);
    if lens.any(|l| l != first) {
        return Err(Error::Domain("oracle needs elements of uniform length".into()));
    }
    Ok(first)
}

/// Σ_i (∂_i f)(∂_i g).
fn derivative_pairing(f: &GrassmannElement, g: &GrassmannElement) -> Result<GrassmannElement> {
    let mut out = GrassmannElement::new();
    for i in 1..=N {
        let df = grassmann::derive(i, f)?;
        let dg = grassmann::derive(i, g)?;
        out.add_assign_ref(&grassmann::product(&df, &dg));
    }
    Ok(out)
}

/// Compares the operator commutator of the actions of `a` and `b` with the
/// action of their λ-bracket, in two formal variables.
pub fn commutator_oracle<F: FRep>(
    f: &F,
    a: &GrassmannElement,
    b: &GrassmannElement,
    m: &VermaVector<F::V>,
) -> Result<OracleReport<F::V>> {
    let r = uniform_length(a)?;
    let s = uniform_length(b)?;

    // a_λ (b_μ m) − (−1)^{rs} b_μ (a_λ m)
    let mut commutator = BiPoly::new();
    for (&j, w) in element_action(f, b, m).iter() {
        for (&i, u) in element_action(f, a, w).iter() {
            commutator.add_term(i, j, u, &Gr::ONE);
        }
    }
    let swap = Gr::from(-sgn(r * s));
    for (&i, w) in element_action(f, a, m).iter() {
        for (&j, u) in element_action(f, b, w).iter() {
            commutator.add_term(i, j, u, &swap);
        }
    }

    // [a_λ b] = (r−2)∂(ab) + (−1)^r Σ(∂_i a)(∂_i b) + λ(r+s−4) ab, taken
    // at ν = λ+μ with (∂c)_ν = −ν c_ν; the ab part carries
    // −(r−2)(λ+μ) + (r+s−4)λ = (s−2)λ − (r−2)μ.
    let ab = grassmann::product(a, b);
    let pairing = derivative_pairing(a, b)?.scaled(&Gr::from(sgn(r)));
    let mut bracket = BiPoly::new();
    let spread = |bracket: &mut BiPoly<VermaVector<F::V>>, p: &ActionPolynomial<F::V>, x: u32, y: u32, c: &Gr| {
        for (&n, u) in p.iter() {
            for e in 0..=n {
                let coef = &binomial(n, e) * c;
                bracket.add_term(e + x, n - e + y, u, &coef);
            }
        }
    };
    let ab_action = element_action(f, &ab, m);
    spread(&mut bracket, &ab_action, 1, 0, &Gr::from(i64::from(s) - 2));
    spread(&mut bracket, &ab_action, 0, 1, &Gr::from(2 - i64::from(r)));
    spread(&mut bracket, &element_action(f, &pairing, m), 0, 0, &Gr::ONE);

    Ok(OracleReport { commutator, bracket })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::{contact_bracket, ContactElement};
    use crate::gmodule::{trivial, vector};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn one(dim_index: usize) -> FVec {
        FVec::from([(dim_index, Gr::ONE)])
    }

    fn basis_vector(k: u32, i: &[u8], v: FVec) -> VermaVector {
        VermaVector::from([((k, Mono::of(i)), v)])
    }

    fn random_vector(rng: &mut StdRng, dim: usize, k_max: u32, terms: usize) -> VermaVector {
        let mut m = VermaVector::new();
        for _ in 0..terms {
            let k = rng.gen_range(0..=k_max);
            let i = Mono::from_bits(rng.gen_range(0..64));
            let c = Gr::from_parts(rng.gen_range(-5..=5), rng.gen_range(1..=3), rng.gen_range(-5..=5), 1);
            let mut v = FVec::new();
            add_term(&mut v, rng.gen_range(0..dim), &c, &Gr::ONE);
            add_term(&mut m, (k, i), &v, &Gr::ONE);
        }
        m
    }

    #[test]
    fn eta_words() {
        let r = eta_normalize(&[1, 1]).unwrap();
        assert_eq!(r, VermaVector::from([((1, Mono::EMPTY), Gr::ONE)]));
        let r = eta_normalize(&[2, 1]).unwrap();
        assert_eq!(r, VermaVector::from([((0, Mono::of(&[1, 2])), -Gr::ONE)]));
        let r = eta_normalize(&[1, 2, 1]).unwrap();
        assert_eq!(r, VermaVector::from([((1, Mono::of(&[2])), -Gr::ONE)]));
    }

    // every maximal sequence of adjacent rewrites, collected by normal form
    fn all_rewrites(word: Vec<u8>, k: u32, sign: i64, out: &mut Vec<(u32, Mono, i64)>) {
        let mut reducible = false;
        for p in 0..word.len().saturating_sub(1) {
            let (x, y) = (word[p], word[p + 1]);
            if x < y {
                continue;
            }
            reducible = true;
            let mut next = word.clone();
            if x == y {
                next.drain(p..p + 2);
                all_rewrites(next, k + 1, sign, out);
            } else {
                next.swap(p, p + 1);
                all_rewrites(next, k, -sign, out);
            }
        }
        if !reducible {
            out.push((k, Mono::of(&word), sign));
        }
    }

    fn check_confluence(word: &[u8]) {
        let mut results = Vec::new();
        all_rewrites(word.to_vec(), 0, 1, &mut results);
        let expected = eta_normalize(word).unwrap();
        for (k, m, s) in results {
            assert_eq!(
                VermaVector::from([((k, m), Gr::from(s))]),
                expected,
                "word {word:?}"
            );
        }
    }

    #[test]
    fn eta_rewriting_is_confluent_up_to_length_four() {
        fn words(len: usize) -> Vec<Vec<u8>> {
            if len == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for w in words(len - 1) {
                for i in 1..=N {
                    let mut x = w.clone();
                    x.push(i);
                    out.push(x);
                }
            }
            out
        }
        for len in 0..=4 {
            for w in words(len) {
                check_confluence(&w);
            }
        }
    }

    #[test]
    fn eta_rewriting_is_confluent_on_random_long_words() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..40 {
            let len = rng.gen_range(5..=6);
            let w: Vec<u8> = (0..len).map(|_| rng.gen_range(1..=N)).collect();
            check_confluence(&w);
        }
    }

    #[test]
    fn dual_map_round_trips() {
        let mut rng = StdRng::seed_from_u64(3);
        let m = random_vector(&mut rng, 6, 3, 20);
        assert_eq!(from_dual(&to_dual(&m)), m);
        assert_eq!(to_dual(&from_dual(&m)), m);
    }

    #[test]
    fn xi1_on_empty_word_trivial_module() {
        // Θη₁ ⊗ v + (5 − c)λ η₁ ⊗ v
        let c = Gr::from_ratio(7, 3);
        let f = trivial(c.clone());
        let m = basis_vector(0, &[], one(0));
        let p = lambda_action_t(&f, &[1], &m).unwrap();
        assert_eq!(p.coeff(0), basis_vector(1, &[1], one(0)));
        let expected = &Gr::from(5) - &c;
        assert_eq!(p.coeff(1), VermaVector::from([((0, Mono::of(&[1])), FVec::from([(0, expected)]))]));
        assert_eq!(p.lambda_degree(), Some(1));
    }

    #[test]
    fn xi1_on_eta1_contracts() {
        // only −(−1)^{|L|}(∂₁ξ₁ ⋆ ∂₁η₁) survives at λ⁰, with overall sign
        // (−1)^{1+1}
        let f = trivial(Gr::ZERO);
        let m = basis_vector(0, &[1], one(0));
        let p = lambda_action_t(&f, &[1], &m).unwrap();
        assert_eq!(p.coeff(0), basis_vector(0, &[], one(0)));
    }

    #[test]
    fn empty_word_multiplies_by_minus_two_theta() {
        let f = vector(Gr::from(3));
        let m = basis_vector(0, &[2, 5], one(4));
        let p = lambda_action_t(&f, &[], &m).unwrap();
        let mut expected = VermaVector::new();
        expected.insert((1, Mono::of(&[2, 5])), FVec::from([(4, Gr::from(-2))]));
        assert_eq!(p.coeff(0), expected);
    }

    #[test]
    fn word_order_only_changes_sign() {
        let f = vector(Gr::from_ratio(1, 2));
        let mut rng = StdRng::seed_from_u64(5);
        let m = random_vector(&mut rng, 6, 2, 12);
        let p = lambda_action_t(&f, &[1, 3, 4], &m).unwrap();
        let q = lambda_action_t(&f, &[3, 1, 4], &m).unwrap();
        assert_eq!(q, p.scaled(&-Gr::ONE));
        let r = lambda_action_t(&f, &[4, 1, 3], &m).unwrap();
        assert_eq!(r, p);
        assert!(lambda_action_t(&f, &[2, 2], &m).unwrap().is_zero());
    }

    // The λ = 0 part of each g_{≤0} element against its action computed
    // from U(g) in original coordinates and conjugated by T.
    fn original_action_of_degree_zero(f: &ModuleSpec, pair: (u8, u8), m: &VermaVector) -> VermaVector {
        let x = ContactElement::xi(&[pair.0, pair.1]);
        let mut out = VermaVector::new();
        for (&(k, j), v) in m {
            // derivation part on η_J
            let word = j.indices();
            for p in 0..word.len() {
                let b = contact_bracket(&x, &ContactElement::xi(&[word[p]]));
                for (&(tk, mono), c) in b.terms() {
                    assert_eq!(tk, 0);
                    let idx = mono.indices();
                    assert_eq!(idx.len(), 1);
                    let mut w = word[..p].to_vec();
                    w.push(idx[0]);
                    w.extend_from_slice(&word[p + 1..]);
                    for (&(dk, res), s) in &eta_normalize(&w).unwrap() {
                        add_term(&mut out, (k + dk, res), v, &(c * s));
                    }
                }
            }
            add_term(&mut out, (k, j), &f.act_xi(pair.0, pair.1, v), &Gr::ONE);
        }
        out
    }

    #[test]
    fn degree_nonpositive_actions_match_enveloping_algebra() {
        let f = vector(Gr::from_ratio(3, 2));
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..10 {
            let m = random_vector(&mut rng, 6, 3, 10);
            let orig = from_dual(&m);
            let lhs = lambda_action_t(&f, &[], &m).unwrap();
            // 1 ∈ g₋₂ is −2Θ
            assert_eq!(lhs.at_zero(), to_dual(&theta_times(&orig)).scaled(&Gr::from(-2)));
            // t acts by its degree
            let mut graded = VermaVector::new();
            for (&(k, j), v) in &orig {
                let deg = -(2 * k as i64) - j.len() as i64;
                add_term(&mut graded, (k, j), v, &Gr::from(deg));
                add_term(&mut graded, (k, j), &f.act_t(v), &Gr::ONE);
            }
            assert_eq!(lhs.coeff(1), to_dual(&graded));
            for i in 1..=N {
                let p = lambda_action_t(&f, &[i], &m).unwrap();
                assert_eq!(p.at_zero(), to_dual(&eta_left(i, &orig)), "xi{i}");
            }
            for a in 1..=N {
                for b in a + 1..=N {
                    let p = lambda_action_t(&f, &[a, b], &m).unwrap();
                    let expected = to_dual(&original_action_of_degree_zero(&f, (a, b), &orig));
                    assert_eq!(p.at_zero(), expected, "xi{a}{b}");
                }
            }
        }
    }

    #[test]
    fn lambda_coefficients_shift_degree() {
        let f = vector(Gr::from(2));
        for l in Mono::all().filter(|l| l.len() <= 3) {
            for k in 0..=2u32 {
                for i in Mono::all() {
                    let d = dual_degree(k, i) as i64;
                    if d > 8 {
                        continue;
                    }
                    let m = VermaVector::from([((k, i), one(0))]);
                    let p = mono_action(&f, l, &m);
                    for (&j, part) in p.iter() {
                        for &(k2, i2) in part.keys() {
                            let expected = d - (2 * j as i64 + l.len() as i64 - 2);
                            assert_eq!(dual_degree(k2, i2) as i64, expected, "L={l} k={k} I={i} j={j}");
                        }
                    }
                    assert!(p.lambda_degree().unwrap_or(0) <= k + 2);
                }
            }
        }
    }

    #[test]
    fn oracle_examples() {
        let f = vector(Gr::from_ratio(5, 2));
        let mut rng = StdRng::seed_from_u64(23);
        let cases: [(&[u8], &[u8]); 4] = [(&[1], &[1]), (&[], &[]), (&[1, 2], &[1]), (&[1, 2, 3], &[3, 4])];
        for (l, mm) in cases {
            for _ in 0..3 {
                let m = random_vector(&mut rng, 6, 2, 6);
                let r = commutator_oracle(&f, &grassmann::xi(l), &grassmann::xi(mm), &m).unwrap();
                assert!(r.holds(), "{l:?} {mm:?}: {:?}", r.difference());
            }
        }
        let m = basis_vector(0, &[], one(2));
        let r = commutator_oracle(&f, &grassmann::xi(&[1, 2]), &grassmann::xi(&[1]), &m).unwrap();
        assert!(r.holds());
    }

    #[test]
    fn oracle_detects_a_wrong_sign() {
        // negating one side breaks the identity on any nonzero output
        let f = vector(Gr::from(1));
        let m = basis_vector(0, &[2], one(0));
        let r = commutator_oracle(&f, &grassmann::xi(&[1]), &grassmann::xi(&[1]), &m).unwrap();
        assert!(!r.bracket.is_zero());
        let broken = OracleReport {
            commutator: r.commutator.scaled(&-Gr::ONE),
            bracket: r.bracket,
        };
        assert!(!broken.holds());
    }

    #[test]
    fn families_vanish_where_expected() {
        let f = trivial(Gr::from(4));
        let mut rng = StdRng::seed_from_u64(31);
        let mut m = VermaVector::new();
        for _ in 0..10 {
            add_term(&mut m, (0, Mono::from_bits(rng.gen_range(0..64))), &one(0), &Gr::from(rng.gen_range(1..5)));
        }
        let fun = coefficient_functionals(&f, &[1, 2], &m).unwrap();
        for p in 1..5 {
            assert!(fun.direct.theta[p].is_empty());
            assert!(fun.direct.constant[p].is_empty());
        }
        for p in 0..5 {
            assert!(fun.direct.quadratic[p].is_empty());
            assert!(fun.dual.quadratic[p].is_empty());
        }
    }

    #[test]
    fn families_reject_high_theta_degree() {
        let f = trivial(Gr::ZERO);
        let m = basis_vector(5, &[1], one(0));
        assert!(matches!(
            coefficient_functionals(&f, &[1], &m),
            Err(Error::UnsupportedDegree { found: 5, max: 4 })
        ));
    }

    #[test]
    fn families_reconstruct_the_action() {
        let f = vector(Gr::from_ratio(-3, 2));
        let mut rng = StdRng::seed_from_u64(37);
        let reps: [&[u8]; 4] = [&[], &[2], &[1, 4], &[2, 3, 6]];
        for l in reps {
            for _ in 0..5 {
                let m = random_vector(&mut rng, 6, 4, 15);
                let fun = coefficient_functionals(&f, l, &m).unwrap();
                let direct = lambda_action_t(&f, l, &m).unwrap().to_bipoly();
                assert_eq!(fun.direct.reconstruct(), direct);
                let (s, dual) = grassmann::hodge_modified(l).unwrap();
                let dual_action = mono_action(&f, dual, &m).to_bipoly().scaled(&Gr::from(i64::from(s)));
                assert_eq!(fun.dual.reconstruct(), dual_action);
            }
        }
    }

    #[test]
    fn mixed_coefficients() {
        let w = Grass::<Gr>::from([(Mono::of(&[1]), Gr::ONE)]);
        let theta = ActionPolynomial::lambda_power(0, VermaVector::from([((1, Mono::of(&[1])), Gr::ONE)]));
        assert_eq!(mixed_coefficient(&theta, 0, 1), w);
        assert_eq!(mixed_coefficient(&theta, 1, 0), w.scaled(&-Gr::ONE));
        let p = ActionPolynomial::lambda_power(2, VermaVector::from([((2, Mono::of(&[1])), Gr::ONE)]));
        let expected = [((2, 2), 1), ((3, 1), -2), ((4, 0), 1)];
        for a in 0..6 {
            for s in 0..6 {
                let c = expected
                    .iter()
                    .find(|(k, _)| *k == (a, s))
                    .map(|(_, c)| w.scaled(&Gr::from(*c)))
                    .unwrap_or_default();
                assert_eq!(mixed_coefficient(&p, a, s), c, "({a},{s})");
            }
        }
    }

    #[test]
    fn mixed_coefficients_reconstruct_by_evaluation() {
        let f = vector(Gr::from(1));
        let mut rng = StdRng::seed_from_u64(41);
        let m = random_vector(&mut rng, 6, 3, 12);
        let p = lambda_action_t(&f, &[1, 5], &m).unwrap();
        let plain = p.to_bipoly();
        let mut mixed = BiPoly::<Grass<FVec>>::new();
        for a in 0..8 {
            for s in 0..8 {
                mixed.add_term(a, s, &mixed_coefficient(&p, a, s), &Gr::ONE);
            }
        }
        for _ in 0..20 {
            let lam = Gr::from_ratio(rng.gen_range(-9..=9), rng.gen_range(1..=4));
            let th = Gr::from_ratio(rng.gen_range(-9..=9), rng.gen_range(1..=4));
            let mu = &lam + &th;
            assert_eq!(mixed.eval(&lam, &mu), plain.eval(&lam, &th));
        }
    }

    #[test]
    fn symbolic_action_specializes_to_numeric() {
        // substituting concrete matrices into the symbolic result must agree
        let f = vector(Gr::from_ratio(2, 3));
        let generic = generic_vector(1);
        let mut rng = StdRng::seed_from_u64(43);
        let values: BTreeMap<(u32, Mono), FVec> = generic
            .keys()
            .map(|&(k, i)| {
                let mut v = FVec::new();
                add_term(&mut v, rng.gen_range(0..6), &Gr::from(rng.gen_range(-3..=3)), &Gr::ONE);
                ((k, i), v)
            })
            .collect();
        let numeric = lambda_action_t(&f, &[2, 3], &values).unwrap();
        let symbolic = lambda_action_t(&Symbolic, &[2, 3], &generic).unwrap();
        let eval = |s: &SymVec| -> FVec {
            let mut out = FVec::new();
            for (sym, c) in s {
                let mut v = values[&(sym.k, sym.index)].clone();
                for op in sym.ops.iter().rev() {
                    v = f.apply(Some(*op), &v);
                }
                out.add_scaled(&v, c);
            }
            out
        };
        for (&j, part) in symbolic.iter() {
            let mut converted = VermaVector::new();
            for (&key, s) in part {
                add_term(&mut converted, key, &eval(s), &Gr::ONE);
            }
            assert_eq!(converted, numeric.coeff(j));
        }
    }
}
