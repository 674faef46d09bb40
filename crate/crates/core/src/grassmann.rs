//! The Grassmann superalgebra Λ(6).
//!
//! A monomial ξ_I with I strictly increasing is stored as a 6-bit set
//! ([`Mono`]); unsorted index words only exist transiently and are normalized
//! on entry, carrying the permutation sign. The same monomials double as the
//! η-monomials of the Verma module, since η_I ⋆ η_J products of disjoint
//! index sets obey exactly the exterior rules.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exactnum::{add_term, Gr, Linear};

/// Number of odd generators. Everything else in the crate is derived from it.
pub const N: u8 = 6;

const FULL: u8 = (1 << N) - 1;

/// A sorted exterior monomial ξ_I, I ⊆ {1,…,6}.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Mono(u8);

impl Mono {
    pub const EMPTY: Mono = Mono(0);
    /// ξ_* = ξ_{123456}
    pub const STAR: Mono = Mono(FULL);

    pub fn from_bits(bits: u8) -> Mono {
        assert!(bits <= FULL, "bits outside Λ(6)");
        Mono(bits)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    /// Monomial of a strictly increasing (or at least distinct) index list,
    /// ignoring order. Panics on an out-of-range index.
    pub fn of(indices: &[u8]) -> Mono {
        let mut bits = 0;
        for &i in indices {
            assert!((1..=N).contains(&i), "index {i} out of range");
            bits |= 1 << (i - 1);
        }
        Mono(bits)
    }

    pub fn single(i: u8) -> Mono {
        Mono::of(&[i])
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: u8) -> bool {
        (1..=N).contains(&i) && self.0 & (1 << (i - 1)) != 0
    }

    pub fn complement(self) -> Mono {
        Mono(FULL & !self.0)
    }

    pub fn is_disjoint(self, other: Mono) -> bool {
        self.0 & other.0 == 0
    }

    pub fn union(self, other: Mono) -> Mono {
        Mono(self.0 | other.0)
    }

    pub fn without(self, i: u8) -> Mono {
        Mono(self.0 & !(1 << (i - 1)))
    }

    /// Increasing list of indices.
    pub fn indices(self) -> Vec<u8> {
        (1..=N).filter(|&i| self.contains(i)).collect()
    }

    /// Parity |I| mod 2.
    pub fn parity(self) -> u32 {
        self.len() % 2
    }

    /// All 64 monomials in increasing bit order.
    pub fn all() -> impl Iterator<Item = Mono> {
        (0..=FULL).map(Mono)
    }

    /// Monomials ordered by length, then lexicographically by index list.
    pub fn all_graded() -> Vec<Mono> {
        let mut v: Vec<Mono> = Mono::all().collect();
        v.sort_by_key(|m| (m.len(), m.indices()));
        v
    }

    /// Number of elements of `self` strictly smaller than `i`.
    fn count_below(self, i: u8) -> u32 {
        (self.0 & ((1u8 << (i - 1)) - 1)).count_ones()
    }

    pub fn label(self) -> String {
        self.indices().iter().map(|i| i.to_string()).collect()
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.label())
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.label())
    }
}

pub fn xi_label(m: Mono) -> String {
    format!("xi[{}]", m.label())
}

pub fn eta_label(m: Mono) -> String {
    format!("eta[{}]", m.label())
}

/// Sign of the product ξ_A ξ_B of sorted monomials, or `None` when they
/// share an index.
pub fn product_sign(a: Mono, b: Mono) -> Option<i8> {
    if !a.is_disjoint(b) {
        return None;
    }
    // count inversions: pairs (x ∈ A, y ∈ B) with x > y
    let mut inv = 0;
    for y in b.indices() {
        inv += a.len() - a.count_below(y);
    }
    Some(if inv % 2 == 0 { 1 } else { -1 })
}

/// ξ_A ξ_B as a signed monomial.
pub fn mono_mul(a: Mono, b: Mono) -> Option<(i8, Mono)> {
    product_sign(a, b).map(|s| (s, a.union(b)))
}

/// Canonical form of an arbitrary index word: `(sign, sorted)` with
/// `sign · ξ_sorted = ξ_word`, sign 0 iff an index repeats.
pub fn normalize(word: &[u8]) -> Result<(i8, Mono)> {
    let mut acc = Mono::EMPTY;
    let mut sign = 1i8;
    for &i in word {
        if !(1..=N).contains(&i) {
            return Err(Error::Domain(format!("index {i} not in 1..={N}")));
        }
        let m = Mono::single(i);
        match product_sign(acc, m) {
            Some(s) => {
                sign *= s;
                acc = acc.union(m);
            }
            None => return Ok((0, Mono::EMPTY)),
        }
    }
    Ok((sign, acc))
}

/// ∂_i ξ_I for sorted I: (−1)^{j+1} ξ_{I∖i} when i sits at position j.
pub fn derive_mono(i: u8, m: Mono) -> Option<(i8, Mono)> {
    if !m.contains(i) {
        return None;
    }
    let s = if m.count_below(i) % 2 == 0 { 1 } else { -1 };
    Some((s, m.without(i)))
}

/// Modified Hodge dual ξ*_I: the signed monomial with ξ_I ξ*_I = ξ_*.
pub fn hodge_star_mono(m: Mono) -> (i8, Mono) {
    let c = m.complement();
    (product_sign(m, c).expect("disjoint"), c)
}

/// Hodge dual ξ̄_I: the signed monomial with ξ̄_I ξ_I = ξ_*.
pub fn hodge_bar_mono(m: Mono) -> (i8, Mono) {
    let c = m.complement();
    (product_sign(c, m).expect("disjoint"), c)
}

/// ξ*_I for an arbitrary distinct index word I.
pub fn hodge_modified(word: &[u8]) -> Result<(i8, Mono)> {
    let (s, m) = distinct(word)?;
    let (t, c) = hodge_star_mono(m);
    // ξ_word = s ξ_m, so ξ*_word = s · ξ*_m keeps ξ_word ξ*_word = ξ_*
    Ok((s * t, c))
}

/// ξ̄_I for an arbitrary distinct index word I.
pub fn hodge_bar(word: &[u8]) -> Result<(i8, Mono)> {
    let (s, m) = distinct(word)?;
    let (t, c) = hodge_bar_mono(m);
    Ok((s * t, c))
}

fn distinct(word: &[u8]) -> Result<(i8, Mono)> {
    let (s, m) = normalize(word)?;
    if s == 0 {
        return Err(Error::Domain(format!("repeated index in {word:?}")));
    }
    Ok((s, m))
}

/// ξ_I ⋆ η_J = χ_{I∩J=∅} η_I η_J, as a signed sorted η-monomial.
pub fn star(xi: &[u8], eta: &[u8]) -> Result<Option<(i8, Mono)>> {
    let (s, a) = distinct(xi)?;
    let (t, b) = distinct(eta)?;
    Ok(mono_mul(a, b).map(|(u, m)| (s * t * u, m)))
}

/// η_J ⋆ ξ_I = χ_{I∩J=∅} η_J η_I.
pub fn star_right(eta: &[u8], xi: &[u8]) -> Result<Option<(i8, Mono)>> {
    let (s, a) = distinct(eta)?;
    let (t, b) = distinct(xi)?;
    Ok(mono_mul(a, b).map(|(u, m)| (s * t * u, m)))
}

/// A Grassmann-valued linear combination Σ ξ_I ⊗ v_I with coefficients in a
/// vector space `V`. With `V = Gr` this is an element of Λ(6).
pub type Grass<V> = BTreeMap<Mono, V>;

pub type GrassmannElement = Grass<Gr>;

pub fn mono<V: Linear>(m: Mono, v: V) -> Grass<V> {
    let mut g = Grass::new();
    add_term(&mut g, m, &v, &Gr::ONE);
    g
}

pub fn xi(indices: &[u8]) -> GrassmannElement {
    let (s, m) = normalize(indices).expect("valid indices");
    if s == 0 {
        return GrassmannElement::new();
    }
    mono(m, Gr::from(i64::from(s)))
}

/// Product `a · b` where `a` is scalar-valued and `b` carries coefficients in
/// `V` (the monomials anticommute; the coefficients ride along).
pub fn product<V: Linear>(a: &GrassmannElement, b: &Grass<V>) -> Grass<V> {
    let mut out = Grass::new();
    for (&ma, ca) in a {
        for (&mb, vb) in b {
            if let Some((s, m)) = mono_mul(ma, mb) {
                let c = if s > 0 { ca.clone() } else { -ca };
                add_term(&mut out, m, vb, &c);
            }
        }
    }
    out
}

/// Product `b · a` with `a` scalar-valued.
pub fn product_right<V: Linear>(b: &Grass<V>, a: &GrassmannElement) -> Grass<V> {
    let mut out = Grass::new();
    for (&mb, vb) in b {
        for (&ma, ca) in a {
            if let Some((s, m)) = mono_mul(mb, ma) {
                let c = if s > 0 { ca.clone() } else { -ca };
                add_term(&mut out, m, vb, &c);
            }
        }
    }
    out
}

/// The odd derivation ∂_i.
pub fn derive<V: Linear>(i: u8, a: &Grass<V>) -> Result<Grass<V>> {
    if !(1..=N).contains(&i) {
        return Err(Error::Domain(format!("index {i} not in 1..={N}")));
    }
    let mut out = Grass::new();
    for (&m, v) in a {
        if let Some((s, r)) = derive_mono(i, m) {
            add_term(&mut out, r, v, &Gr::from(i64::from(s)));
        }
    }
    Ok(out)
}

/// ∂_I = ∂_{i₁}∂_{i₂}⋯∂_{i_k}: the rightmost derivative is applied first.
pub fn derive_seq<V: Linear>(word: &[u8], a: &Grass<V>) -> Result<Grass<V>> {
    let mut acc = a.clone();
    for &i in word.iter().rev() {
        acc = derive(i, &acc)?;
    }
    Ok(acc)
}

/// Parity of a homogeneous element, `None` if mixed (or zero).
pub fn parity<V>(a: &Grass<V>) -> Option<u32> {
    let mut it = a.keys().map(|m| m.parity());
    let p = it.next()?;
    it.all(|q| q == p).then_some(p)
}

pub fn render<V: fmt::Display>(a: &Grass<V>, label: fn(Mono) -> String) -> String {
    if a.is_empty() {
        return "0".into();
    }
    a.iter()
        .map(|(m, v)| format!("({v}) {}", label(*m)))
        .collect::<Vec<_>>()
        .join(" + ")
}
