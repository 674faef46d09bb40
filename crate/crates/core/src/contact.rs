//! K(1,6)₊ = ℂ[t] ⊗ Λ(6) with the contact bracket, the operator A, the
//! subalgebra E(1,6) = Im(Id − iA), and the so(6) root data inside g₀.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;

use crate::check::CheckResult;
use crate::error::{Error, Result};
use crate::exactnum::{add_term, Gr, Linear};
use crate::grassmann::{derive_mono, hodge_star_mono, mono_mul, xi_label, Mono};
use crate::linalg::{self, Rref, SparseVec};

/// A contact monomial tᵏξ_I.
pub type CMono = (u32, Mono);

/// Standard grading deg(tᵏξ_I) = 2k + |I| − 2.
pub fn degree(m: CMono) -> i32 {
    2 * m.0 as i32 + m.1.len() as i32 - 2
}

#[derive(Clone, PartialEq, Eq, Default)]
pub struct ContactElement {
    terms: BTreeMap<CMono, Gr>,
}

impl ContactElement {
    pub fn zero() -> Self {
        ContactElement::default()
    }

    pub fn monomial(k: u32, m: Mono, c: Gr) -> Self {
        let mut e = ContactElement::zero();
        e.add_term(k, m, &c);
        e
    }

    pub fn one() -> Self {
        Self::monomial(0, Mono::EMPTY, Gr::ONE)
    }

    pub fn t() -> Self {
        Self::monomial(1, Mono::EMPTY, Gr::ONE)
    }

    /// tᵏ ξ_word for any index word (sign-normalized).
    pub fn t_xi(k: u32, word: &[u8]) -> Self {
        let (s, m) = crate::grassmann::normalize(word).expect("valid indices");
        if s == 0 {
            return Self::zero();
        }
        Self::monomial(k, m, Gr::from(i64::from(s)))
    }

    pub fn xi(word: &[u8]) -> Self {
        Self::t_xi(0, word)
    }

    pub fn add_term(&mut self, k: u32, m: Mono, c: &Gr) {
        add_term(&mut self.terms, (k, m), c, &Gr::ONE);
    }

    pub fn terms(&self) -> &BTreeMap<CMono, Gr> {
        &self.terms
    }

    pub fn coeff(&self, k: u32, m: Mono) -> Gr {
        self.terms.get(&(k, m)).cloned().unwrap_or(Gr::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The common degree of all terms, if homogeneous and nonzero.
    pub fn degree(&self) -> Option<i32> {
        let mut it = self.terms.keys().map(|&m| degree(m));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// The common parity of all terms, if homogeneous and nonzero.
    pub fn parity(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.1.parity());
        let p = it.next()?;
        it.all(|q| q == p).then_some(p)
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.terms.keys().map(|&m| degree(m)).max()
    }

    /// Splits into homogeneous components.
    pub fn by_degree(&self) -> BTreeMap<i32, ContactElement> {
        let mut out: BTreeMap<i32, ContactElement> = BTreeMap::new();
        for (&m, c) in &self.terms {
            out.entry(degree(m)).or_default().add_term(m.0, m.1, c);
        }
        out
    }

    /// ∂_t
    pub fn d_dt(&self) -> ContactElement {
        let mut out = ContactElement::zero();
        for (&(k, m), c) in &self.terms {
            if k > 0 {
                out.add_term(k - 1, m, &(c * &Gr::from(i64::from(k))));
            }
        }
        out
    }
}

impl Linear for ContactElement {
    fn zero() -> Self {
        ContactElement::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add_scaled(&mut self, other: &Self, c: &Gr) {
        self.terms.add_scaled(&other.terms, c);
    }
}

impl fmt::Display for ContactElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(k, m), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            match k {
                0 => {}
                1 => write!(f, " t")?,
                _ => write!(f, " t^{k}")?,
            }
            if !m.is_empty() {
                write!(f, " {}", xi_label(m))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ContactElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A deliberately corrupted bracket, for exercising the failure paths of
/// the verification suites: the bracket of the two listed monomials (in
/// either order) is replaced by zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fault {
    pub left: CMono,
    pub right: CMono,
}

impl Fault {
    /// Kills [ξ₁₂, ξ₂₃].
    pub fn standard() -> Fault {
        Fault {
            left: (0, Mono::of(&[1, 2])),
            right: (0, Mono::of(&[2, 3])),
        }
    }

    fn hits(&self, a: CMono, b: CMono) -> bool {
        (a, b) == (self.left, self.right) || (b, a) == (self.left, self.right)
    }
}

/// Bracket of two monomials with integer coefficients:
/// [f,g] = (2f − Eξ f)∂_t g − ∂_t f (2g − Eξ g) + (−1)^{p(f)} Σ ∂_i f ∂_i g,
/// where Eξ = Σ ξ_i∂_i multiplies ξ_I by |I|.
pub fn bracket_monomials(a: CMono, b: CMono) -> Vec<(CMono, i64)> {
    let ((ka, ma), (kb, mb)) = (a, b);
    let mut out = Vec::with_capacity(2);
    let la = i64::from(ma.len());
    let lb = i64::from(mb.len());
    let c1 = (2 - la) * i64::from(kb) - i64::from(ka) * (2 - lb);
    if c1 != 0 {
        if let Some((s, m)) = mono_mul(ma, mb) {
            out.push(((ka + kb - 1, m), c1 * i64::from(s)));
        }
    }
    let common = Mono::from_bits(ma.bits() & mb.bits());
    if common.len() == 1 {
        let i = common.indices()[0];
        let (s1, ra) = derive_mono(i, ma).expect("contains");
        let (s2, rb) = derive_mono(i, mb).expect("contains");
        let (s3, m) = mono_mul(ra, rb).expect("disjoint after removing the common index");
        let p = if ma.parity() == 0 { 1 } else { -1 };
        out.push(((ka + kb, m), p * i64::from(s1 * s2 * s3)));
    }
    out
}

pub fn contact_bracket(f: &ContactElement, g: &ContactElement) -> ContactElement {
    bracket_with(f, g, None)
}

pub fn bracket_with(f: &ContactElement, g: &ContactElement, fault: Option<&Fault>) -> ContactElement {
    let mut out = ContactElement::zero();
    for (&a, ca) in &f.terms {
        for (&b, cb) in &g.terms {
            if fault.is_some_and(|x| x.hits(a, b)) {
                continue;
            }
            let cab = ca * cb;
            for ((k, m), n) in bracket_monomials(a, b) {
                out.add_term(k, m, &(&cab * &Gr::from(n)));
            }
        }
    }
    out
}

/// The operator A(tᵏξ_L) = (−1)^{|L|(|L|+1)/2} (d/dt)^{3−|L|} (tᵏ ξ*_L),
/// negative orders meaning repeated integration in t.
pub fn op_a(x: &ContactElement) -> ContactElement {
    let mut out = ContactElement::zero();
    for (&(k, m), c) in &x.terms {
        let n = m.len();
        let sign = if (n * (n + 1) / 2) % 2 == 0 { 1 } else { -1 };
        let (s, dual) = hodge_star_mono(m);
        let sign = Gr::from(i64::from(sign * i32::from(s)));
        if n <= 3 {
            let d = 3 - n;
            if k < d {
                continue;
            }
            let falling: i64 = (0..d).map(|j| i64::from(k - j)).product();
            out.add_term(k - d, dual, &(c * &(&sign * &Gr::from(falling))));
        } else {
            let d = n - 3;
            let rising: i64 = (1..=d).map(|j| i64::from(k + j)).product();
            let factor = Gr::from_ratio(1, rising);
            out.add_term(k + d, dual, &(c * &(&sign * &factor)));
        }
    }
    out
}

/// (Id − iA)(x)
pub fn e16_project(x: &ContactElement) -> ContactElement {
    let mut out = x.clone();
    out.add_scaled(&op_a(x), &(-Gr::I));
    out
}

/// A graded basis element (Id − iA)(tᵏξ_L) of E(1,6).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub k: u32,
    pub generator: Mono,
    pub degree: i32,
    pub element: ContactElement,
}

/// All contact monomials of a given degree, in canonical order.
pub fn monomials_of_degree(d: i32) -> Vec<CMono> {
    let mut out = Vec::new();
    for m in Mono::all_graded() {
        let twice_k = d + 2 - m.len() as i32;
        if twice_k >= 0 && twice_k % 2 == 0 {
            out.push(((twice_k / 2) as u32, m));
        }
    }
    out
}

struct DegreePiece {
    range: Range<usize>,
    monomials: Vec<CMono>,
    index: BTreeMap<CMono, usize>,
    /// Basis vectors as rows in monomial coordinates.
    span: Rref,
    /// One equation per monomial, unknowns = basis coordinates.
    equations: Vec<SparseVec>,
}

/// The graded basis of E(1,6) up to a degree cap, with exact membership.
pub struct E16Basis {
    max_degree: i32,
    elements: Vec<BasisElement>,
    pieces: BTreeMap<i32, DegreePiece>,
}

/// Result of [`E16Basis::membership`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// Coordinates against the basis, by basis index.
    Member(Vec<(usize, Gr)>),
    /// What remains after subtracting the best approximation from the span.
    NonMember { residual: ContactElement },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member(_))
    }
}

impl E16Basis {
    /// Greedy basis: runs over (Id − iA)(tᵏξ_L), |L| ≤ 3, in canonical order
    /// and keeps the elements that raise the rank of their degree piece.
    pub fn new(max_degree: i32) -> Result<E16Basis> {
        if max_degree < -2 {
            return Err(Error::Domain(format!("max_degree {max_degree} < -2")));
        }
        let mut elements = Vec::new();
        let mut pieces = BTreeMap::new();
        for d in -2..=max_degree {
            let monomials = monomials_of_degree(d);
            let index: BTreeMap<CMono, usize> =
                monomials.iter().enumerate().map(|(i, &m)| (m, i)).collect();
            let mut span = Rref::new(monomials.len());
            let start = elements.len();
            for &(k, m) in &monomials {
                if m.len() > 3 {
                    continue;
                }
                let e = e16_project(&ContactElement::monomial(k, m, Gr::ONE));
                let row = to_row(&e, &index);
                if span.insert(&row) {
                    elements.push(BasisElement {
                        k,
                        generator: m,
                        degree: d,
                        element: e,
                    });
                }
            }
            let range = start..elements.len();
            let mut equations = vec![SparseVec::new(); monomials.len()];
            for (j, b) in elements[range.clone()].iter().enumerate() {
                for (c, v) in to_row(&b.element, &index) {
                    equations[c].push((j, v));
                }
            }
            pieces.insert(
                d,
                DegreePiece {
                    range,
                    monomials,
                    index,
                    span,
                    equations,
                },
            );
        }
        Ok(E16Basis {
            max_degree,
            elements,
            pieces,
        })
    }

    pub fn max_degree(&self) -> i32 {
        self.max_degree
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Basis indices of degree `d`.
    pub fn degree_range(&self, d: i32) -> Range<usize> {
        self.pieces.get(&d).map_or(0..0, |p| p.range.clone())
    }

    pub fn dim(&self, d: i32) -> usize {
        self.degree_range(d).len()
    }

    pub fn membership(&self, x: &ContactElement) -> Result<Membership> {
        if let Some(d) = x.max_degree() {
            if d > self.max_degree {
                return Err(Error::Domain(format!(
                    "element of degree {d} exceeds basis cap {}",
                    self.max_degree
                )));
            }
        }
        let mut coords = Vec::new();
        let mut residual = ContactElement::zero();
        for (d, part) in x.by_degree() {
            let piece = &self.pieces[&d];
            let row = to_row(&part, &piece.index);
            let r = piece.span.residual(&row);
            if !r.is_empty() {
                for (c, v) in r {
                    let (k, m) = piece.monomials[c];
                    residual.add_term(k, m, &v);
                }
                continue;
            }
            let mut rhs = vec![Gr::ZERO; piece.monomials.len()];
            for (c, v) in row {
                rhs[c] = v;
            }
            let sol = linalg::solve(&piece.equations, &rhs, piece.range.len())
                .expect("consistent after zero residual");
            for (j, v) in sol.into_iter().enumerate() {
                if !v.is_zero() {
                    coords.push((piece.range.start + j, v));
                }
            }
        }
        Ok(if residual.is_zero() {
            Membership::Member(coords)
        } else {
            Membership::NonMember { residual }
        })
    }

    /// Σ c_j b_j
    pub fn combine(&self, coords: &[(usize, Gr)]) -> ContactElement {
        let mut out = ContactElement::zero();
        for (j, c) in coords {
            out.add_scaled(&self.elements[*j].element, c);
        }
        out
    }
}

fn to_row(e: &ContactElement, index: &BTreeMap<CMono, usize>) -> SparseVec {
    linalg::sparse_from(e.terms.iter().map(|(m, c)| (index[m], c.clone())))
}

/// A root ±ε_l ± ε_j as its coefficient vector.
pub type Root = [i32; 3];

#[derive(Clone, Debug)]
pub struct RootDatum {
    pub cartan: [ContactElement; 3],
    /// All twelve roots with their root vectors.
    pub roots: Vec<(Root, ContactElement)>,
    pub positive: Vec<Root>,
    pub simple: Vec<Root>,
}

impl RootDatum {
    pub fn new() -> RootDatum {
        let xs = |a: u8, b: u8| {
            let (s, m) = crate::grassmann::normalize(&[a, b]).expect("valid");
            ContactElement::monomial(0, m, Gr::from(i64::from(s)))
        };
        let cartan = [1u8, 2, 3].map(|l| xs(2 * l - 1, 2 * l).scaled(&(-Gr::I)));
        let mut roots = Vec::new();
        let mut positive = Vec::new();
        let i = Gr::I;
        let mi = -Gr::I;
        let one = Gr::ONE;
        let mone = -Gr::ONE;
        for l in 1..=3u8 {
            for j in l + 1..=3u8 {
                let (a, b, c, d) = (
                    xs(2 * l - 1, 2 * j - 1),
                    xs(2 * l, 2 * j),
                    xs(2 * l - 1, 2 * j),
                    xs(2 * l, 2 * j - 1),
                );
                let lin = |ca: &Gr, cb: &Gr, cc: &Gr, cd: &Gr| {
                    let mut e = a.scaled(ca);
                    e.add_scaled(&b, cb);
                    e.add_scaled(&c, cc);
                    e.add_scaled(&d, cd);
                    e
                };
                let mut minus = [0; 3];
                minus[l as usize - 1] = 1;
                minus[j as usize - 1] = -1;
                let mut plus = [0; 3];
                plus[l as usize - 1] = 1;
                plus[j as usize - 1] = 1;
                let neg = |r: Root| r.map(|v| -v);
                roots.push((minus, lin(&mone, &mone, &mi, &i)));
                roots.push((plus, lin(&mone, &one, &i, &i)));
                roots.push((neg(minus), lin(&mone, &mone, &i, &mi)));
                roots.push((neg(plus), lin(&mone, &one, &mi, &mi)));
                positive.push(minus);
                positive.push(plus);
            }
        }
        RootDatum {
            cartan,
            roots,
            positive,
            simple: vec![[1, -1, 0], [0, 1, -1], [0, 1, 1]],
        }
    }

    pub fn root_vector(&self, alpha: Root) -> Option<&ContactElement> {
        self.roots.iter().find(|(r, _)| *r == alpha).map(|(_, e)| e)
    }

    /// Positive root vectors in the order of `positive`.
    pub fn positive_vectors(&self) -> Vec<(Root, ContactElement)> {
        self.positive
            .iter()
            .map(|&r| (r, self.root_vector(r).expect("root").clone()))
            .collect()
    }
}

impl Default for RootDatum {
    fn default() -> Self {
        RootDatum::new()
    }
}

pub fn root_label(r: Root) -> String {
    let mut s = String::new();
    for (l, &c) in r.iter().enumerate() {
        if c == 0 {
            continue;
        }
        s.push(if c > 0 { '+' } else { '-' });
        s.push_str(&format!("e{}", l + 1));
    }
    s
}

/// Super-skew-symmetry on all ordered pairs and super-Jacobi on all triples
/// of basis elements of degree ≤ `max_degree`. Since the cyclic Jacobi sum
/// changes only by a sign under any permutation once skew-symmetry holds,
/// triples are enumerated with nondecreasing indices.
pub fn jacobi_suite(basis: &E16Basis, max_degree: i32, fault: Option<&Fault>) -> Vec<CheckResult> {
    let els: Vec<&BasisElement> = basis.elements().iter().filter(|b| b.degree <= max_degree).collect();
    let n = els.len();
    let br = |x: &ContactElement, y: &ContactElement| bracket_with(x, y, fault);
    let parity = |b: &BasisElement| b.generator.parity() as i64;

    let mut skew = CheckResult::new(format!("super-skew-symmetry, basis degrees <= {max_degree}"));
    let mut table = vec![ContactElement::zero(); n * n];
    for a in 0..n {
        for b in 0..n {
            table[a * n + b] = br(&els[a].element, &els[b].element);
        }
    }
    for a in 0..n {
        for b in 0..n {
            let mut s = table[a * n + b].clone();
            let sign = Gr::sign(parity(els[a]) * parity(els[b]));
            s.add_scaled(&table[b * n + a], &sign);
            skew.record(s.is_zero(), || {
                format!("[{}, {}] not super-skew", els[a].element, els[b].element)
            });
        }
    }

    let mut jac = CheckResult::new(format!("super-Jacobi, basis degrees <= {max_degree}"));
    for a in 0..n {
        for b in a..n {
            for c in b..n {
                let (pa, pb, pc) = (parity(els[a]), parity(els[b]), parity(els[c]));
                let mut sum = br(&els[a].element, &table[b * n + c]).scaled(&Gr::sign(pa * pc));
                sum.add_scaled(&br(&els[b].element, &table[c * n + a]), &Gr::sign(pb * pa));
                sum.add_scaled(&br(&els[c].element, &table[a * n + b]), &Gr::sign(pc * pb));
                jac.record(sum.is_zero(), || {
                    format!(
                        "Jacobi fails on ({}, {}, {}): {}",
                        els[a].element, els[b].element, els[c].element, sum
                    )
                });
            }
        }
    }
    vec![skew, jac]
}

/// Brackets of basis elements with degree sum ≤ `max_sum` stay in E(1,6).
/// Needs a basis up to degree `max_sum + 2`.
pub fn closure_suite(basis: &E16Basis, max_sum: i32, fault: Option<&Fault>) -> CheckResult {
    let mut res = CheckResult::new(format!("E(1,6) closure, degree sum <= {max_sum}"));
    let els = basis.elements();
    for a in els {
        for b in els {
            if a.degree + b.degree > max_sum {
                continue;
            }
            let c = bracket_with(&a.element, &b.element, fault);
            match basis.membership(&c) {
                Ok(m) => res.record(m.is_member(), || {
                    format!("[{}, {}] = {} not in E(1,6)", a.element, b.element, c)
                }),
                Err(e) => res.fail(format!("[{}, {}]: {e}", a.element, b.element)),
            }
        }
    }
    res
}

/// [t, b] = deg(b)·b on the whole basis.
pub fn grading_suite(basis: &E16Basis, fault: Option<&Fault>) -> CheckResult {
    let mut res = CheckResult::new(format!("grading element t, basis degrees <= {}", basis.max_degree()));
    let t = ContactElement::t();
    for b in basis.elements() {
        let lhs = bracket_with(&t, &b.element, fault);
        let rhs = b.element.scaled(&Gr::from(i64::from(b.degree)));
        res.record(lhs == rhs, || format!("[t, {}] = {lhs}, expected {rhs}", b.element));
    }
    res
}

/// [Θ, g_i] = g_{i−2} for 0 ≤ i ≤ max_degree, with Θ = −1/2: every image
/// lies in g_{i−2} and the images have full rank there.
pub fn depth_suite(basis: &E16Basis, max_degree: i32, fault: Option<&Fault>) -> CheckResult {
    let mut res = CheckResult::new(format!("[Theta, g_i] = g_(i-2), 0 <= i <= {max_degree}"));
    let theta = ContactElement::one().scaled(&Gr::from_ratio(-1, 2));
    for i in 0..=max_degree {
        let target = basis.degree_range(i - 2);
        let mut images: Vec<SparseVec> = Vec::new();
        let mut ok = true;
        for b in &basis.elements()[basis.degree_range(i)] {
            let img = bracket_with(&theta, &b.element, fault);
            match basis.membership(&img) {
                Ok(Membership::Member(coords)) => images.push(
                    coords.into_iter().map(|(j, v)| (j - target.start, v)).collect(),
                ),
                _ => {
                    ok = false;
                    res.fail(format!("[Theta, {}] = {img} not in g_{}", b.element, i - 2));
                }
            }
        }
        if ok {
            let r = linalg::rank(&images, target.len());
            res.record(r == target.len(), || {
                format!("[Theta, g_{i}] has rank {r}, dim g_{} = {}", i - 2, target.len())
            });
        }
    }
    res
}

/// The so(6) matrix E_{ji} − E_{ij} attached to ξ_{ij}, as a dense 6×6 array.
pub fn so6_matrix(i: u8, j: u8) -> [[i64; 6]; 6] {
    let mut m = [[0; 6]; 6];
    m[j as usize - 1][i as usize - 1] += 1;
    m[i as usize - 1][j as usize - 1] -= 1;
    m
}

/// Root-system checks: eigen-relations for all twelve roots, [E_α, E_{−α}]
/// inside the Cartan span, and the so(6) structure constants of {ξ_ij}.
pub fn root_suite(fault: Option<&Fault>) -> Vec<CheckResult> {
    let rd = RootDatum::new();
    let br = |x: &ContactElement, y: &ContactElement| bracket_with(x, y, fault);

    let mut eig = CheckResult::new("[H_l, E_a] = a(H_l) E_a for all 12 roots");
    for (alpha, e) in &rd.roots {
        for l in 0..3 {
            let lhs = br(&rd.cartan[l], e);
            let rhs = e.scaled(&Gr::from(i64::from(alpha[l])));
            eig.record(lhs == rhs, || {
                format!("[H_{}, E_{}] = {lhs}, expected {rhs}", l + 1, root_label(*alpha))
            });
        }
    }

    let mut cartan = CheckResult::new("[E_a, E_-a] in span(H_1, H_2, H_3)");
    let h_rows: Vec<SparseVec> = rd.cartan.iter().map(|h| xi2_row(h)).collect();
    let mut h_span = Rref::new(15);
    for r in &h_rows {
        h_span.insert(r);
    }
    for &alpha in &rd.positive {
        let e = rd.root_vector(alpha).expect("root");
        let f = rd.root_vector(alpha.map(|v| -v)).expect("root");
        let c = br(e, f);
        let in_g0_xi = c.terms().keys().all(|(k, m)| *k == 0 && m.len() == 2);
        let ok = in_g0_xi && !c.is_zero() && h_span.residual(&xi2_row(&c)).is_empty();
        cartan.record(ok, || format!("[E_{0}, E_-({0})] = {c}", root_label(alpha)));
    }

    let mut so6 = CheckResult::new("xi_ij <-> E_ji - E_ij structure constants");
    let pairs = xi2_pairs();
    for &(i, j) in &pairs {
        for &(k, l) in &pairs {
            let c = br(&ContactElement::xi(&[i, j]), &ContactElement::xi(&[k, l]));
            let lhs = matrix_of(&c);
            let (a, b) = (so6_matrix(i, j), so6_matrix(k, l));
            let rhs = commutator(&a, &b);
            so6.record(lhs == Some(rhs), || {
                format!("[xi[{i}{j}], xi[{k}{l}]] = {c} does not match the matrix commutator")
            });
        }
    }
    vec![eig, cartan, so6]
}

/// Pairs (i, j), i < j, in lexicographic order.
pub fn xi2_pairs() -> Vec<(u8, u8)> {
    let mut v = Vec::new();
    for i in 1..=6u8 {
        for j in i + 1..=6u8 {
            v.push((i, j));
        }
    }
    v
}

fn xi2_row(e: &ContactElement) -> SparseVec {
    let pairs = xi2_pairs();
    linalg::sparse_from(e.terms().iter().filter_map(|((k, m), c)| {
        if *k != 0 || m.len() != 2 {
            return None;
        }
        let ix = m.indices();
        pairs
            .iter()
            .position(|&p| p == (ix[0], ix[1]))
            .map(|p| (p, c.clone()))
    }))
}

fn matrix_of(e: &ContactElement) -> Option<[[i64; 6]; 6]> {
    let mut out = [[0i64; 6]; 6];
    for ((k, m), c) in e.terms() {
        if *k != 0 || m.len() != 2 {
            return None;
        }
        let n = c.to_i64()?;
        let ix = m.indices();
        let s = so6_matrix(ix[0], ix[1]);
        for r in 0..6 {
            for q in 0..6 {
                out[r][q] += n * s[r][q];
            }
        }
    }
    Some(out)
}

fn commutator(a: &[[i64; 6]; 6], b: &[[i64; 6]; 6]) -> [[i64; 6]; 6] {
    let mut out = [[0; 6]; 6];
    for r in 0..6 {
        for c in 0..6 {
            for k in 0..6 {
                out[r][c] += a[r][k] * b[k][c] - b[r][k] * a[k][c];
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(w: &[u8]) -> ContactElement {
        ContactElement::xi(w)
    }

    #[test]
    fn bracket_examples() {
        assert_eq!(
            contact_bracket(&x(&[1]), &x(&[1])),
            ContactElement::one().scaled(&-Gr::ONE)
        );
        assert_eq!(
            contact_bracket(&ContactElement::t(), &x(&[1])),
            x(&[1]).scaled(&-Gr::ONE)
        );
        assert_eq!(contact_bracket(&x(&[1, 2]), &x(&[1])), x(&[2]));
        // ξ_{ij} ↦ E_{ji} − E_{ij} is a homomorphism: [ξ12, ξ23] = −ξ13
        assert_eq!(
            contact_bracket(&x(&[1, 2]), &x(&[2, 3])),
            x(&[1, 3]).scaled(&-Gr::ONE)
        );
        assert_eq!(
            contact_bracket(&ContactElement::t(), &ContactElement::one()),
            ContactElement::one().scaled(&Gr::from(-2))
        );
        let t_xi12 = ContactElement::t_xi(1, &[1, 2]);
        assert_eq!(
            contact_bracket(&ContactElement::t(), &t_xi12),
            t_xi12.scaled(&Gr::from(2))
        );
    }

    #[test]
    fn bracket_with_theta_is_minus_d_dt() {
        let theta = ContactElement::one().scaled(&Gr::from_ratio(-1, 2));
        for k in 0..4 {
            for m in Mono::all() {
                let f = ContactElement::monomial(k, m, Gr::ONE);
                assert_eq!(contact_bracket(&theta, &f), f.d_dt().scaled(&-Gr::ONE));
            }
        }
    }

    #[test]
    fn bracket_is_additive_in_degree() {
        for a in [(0, Mono::of(&[1, 2, 3])), (2, Mono::of(&[4])), (1, Mono::EMPTY)] {
            for b in [(1, Mono::of(&[3, 5])), (0, Mono::of(&[1, 4, 5, 6])), (3, Mono::of(&[2]))] {
                let c = contact_bracket(
                    &ContactElement::monomial(a.0, a.1, Gr::ONE),
                    &ContactElement::monomial(b.0, b.1, Gr::ONE),
                );
                if let Some(d) = c.degree() {
                    assert_eq!(d, degree(a) + degree(b));
                } else {
                    assert!(c.is_zero());
                }
            }
        }
    }

    #[test]
    fn operator_a_examples() {
        assert!(op_a(&ContactElement::one()).is_zero());
        assert_eq!(op_a(&x(&[1, 2, 3])), x(&[4, 5, 6]));
        assert_eq!(
            op_a(&ContactElement::t_xi(1, &[1, 2])),
            x(&[3, 4, 5, 6]).scaled(&-Gr::ONE)
        );
        assert_eq!(e16_project(&x(&[1])), x(&[1]));
        let mut expect = x(&[1, 2, 3]);
        expect.add_scaled(&x(&[4, 5, 6]), &-Gr::I);
        assert_eq!(e16_project(&x(&[1, 2, 3])), expect);
    }

    #[test]
    fn operator_a_preserves_degree() {
        for k in 0..5 {
            for m in Mono::all() {
                let a = op_a(&ContactElement::monomial(k, m, Gr::ONE));
                if let Some(d) = a.degree() {
                    assert_eq!(d, degree((k, m)));
                }
            }
        }
    }

    #[test]
    fn low_degree_dimensions() {
        let b = E16Basis::new(4).unwrap();
        assert_eq!(b.dim(-2), 1);
        assert_eq!(b.dim(-1), 6);
        assert_eq!(b.dim(0), 16);
        for d in 1..=4 {
            assert_eq!(b.dim(d), 16, "degree {d}");
        }
        // non-positive pieces agree with K(1,6)₊
        for d in -2..=0 {
            assert_eq!(b.dim(d), monomials_of_degree(d).len());
        }
    }

    #[test]
    fn membership_examples() {
        let b = E16Basis::new(4).unwrap();
        let mut m = x(&[1, 2, 3]);
        m.add_scaled(&x(&[4, 5, 6]), &-Gr::I);
        match b.membership(&m).unwrap() {
            Membership::Member(c) => assert_eq!(b.combine(&c), m),
            other => panic!("{other:?}"),
        }
        let mut n = x(&[1, 2, 3]);
        n.add_scaled(&x(&[4, 5, 6]), &Gr::ONE);
        assert!(!b.membership(&n).unwrap().is_member());
        assert!(b.membership(&ContactElement::t_xi(5, &[1])).is_err());
    }

    #[test]
    fn long_generators_reduce_to_dual_ones() {
        // (Id − iA)(tᵏξ_L), |L| > 3, equals (Id − iA) of a rescaled tᵏ⁺ⁿξ*_L
        // with n = |L| − 3 and factor −i(−1)^{|L|(|L|+1)/2} / ((k+1)⋯(k+n)).
        let b = E16Basis::new(6).unwrap();
        for m in Mono::all().filter(|m| m.len() > 3) {
            let n = m.len() - 3;
            for k in 0..=2u32 {
                if degree((k, m)) > 6 {
                    continue;
                }
                let lhs = e16_project(&ContactElement::monomial(k, m, Gr::ONE));
                assert!(b.membership(&lhs).unwrap().is_member());
                let l = m.len();
                let sign = Gr::sign(i64::from(l * (l + 1) / 2));
                let rising: i64 = (1..=n).map(|j| i64::from(k + j)).product();
                let (s, dual) = hodge_star_mono(m);
                let c = &(&(-Gr::I) * &sign) * &Gr::from_ratio(i64::from(s), rising);
                let rhs = e16_project(&ContactElement::monomial(k + n, dual, c));
                assert_eq!(lhs, rhs, "k={k} L={m:?}");
            }
        }
    }

    #[test]
    fn suites_pass_at_small_scale() {
        let b = E16Basis::new(4).unwrap();
        for r in jacobi_suite(&b, 2, None) {
            assert!(r.passed(), "{r}");
        }
        assert!(closure_suite(&b, 2, None).passed());
        assert!(grading_suite(&b, None).passed());
        let r = depth_suite(&b, 4, None);
        assert!(r.passed(), "{r}");
        for r in root_suite(None) {
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn fault_is_detected() {
        let b = E16Basis::new(2).unwrap();
        let f = Fault::standard();
        let rs = jacobi_suite(&b, 0, Some(&f));
        assert!(rs.iter().any(|r| !r.passed()));
        assert!(root_suite(Some(&f)).iter().any(|r| !r.passed()));
    }
}
