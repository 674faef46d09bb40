//! Symbolic re-derivation of the equations that bound the Θ-degree.
//!
//! Every display is transcribed term by term on a generic vector whose
//! F-coordinates are formal unknowns v_{I,k}, and compared exactly with
//! what the implemented λ-action produces.

use std::collections::{BTreeMap, BTreeSet};

use super::{relations, FamilyRef, GeneratorClass, Kind, Relation};
use crate::check::CheckResult;
use crate::exactnum::{add_term, BiPoly, Gr, Linear};
use crate::grassmann::{derive_mono, hodge_star_mono, mono_mul, normalize, Grass, Mono};
use crate::linalg::{self, SparseVec};
use crate::verma::{
    coefficient_functionals, combined_action, generic_vector, render_symvec, sym_unknown, FRep, Functionals,
    Sym, SymVec, Symbolic,
};

type GS = Grass<SymVec>;

/// Θ-degree of the generic vector behind the top-order relations.
const TOP_ORDER_K: u32 = 6;

/// A signed monomial; `None` is zero.
type Signed = Option<(i64, Mono)>;

fn word(w: &[u8]) -> Signed {
    match normalize(w).ok()? {
        (0, _) => None,
        (s, m) => Some((i64::from(s), m)),
    }
}

fn mono(m: Mono) -> Signed {
    Some((1, m))
}

fn d(i: u8, x: Signed) -> Signed {
    let (s, m) = x?;
    let (t, r) = derive_mono(i, m)?;
    Some((s * i64::from(t), r))
}

fn star(x: Signed, y: Signed) -> Signed {
    let (s, a) = x?;
    let (t, b) = y?;
    let (u, r) = mono_mul(a, b)?;
    Some((s * t * i64::from(u), r))
}

/// ξ_M ξ_l for a signed generator ξ_M.
fn append(g: Signed, l: u8) -> Signed {
    let (s, m) = g?;
    let mut w = m.indices();
    w.push(l);
    let (t, r) = word(&w)?;
    Some((s * t, r))
}

fn v(i: Mono, k: u32) -> SymVec {
    sym_unknown(i, k)
}

fn tv(x: &SymVec) -> SymVec {
    Symbolic.act_t(x)
}

fn xv(r: u8, s: u8, x: &SymVec) -> SymVec {
    Symbolic.act_xi(r, s, x)
}

fn put(acc: &mut GS, c: &Gr, out: Signed, x: &SymVec) {
    if let Some((s, m)) = out {
        add_term(acc, m, x, &(c * &Gr::from(s)));
    }
}

/// Sign of the summand for η_I.
type Sigma = fn(Mono) -> i64;

fn sigma_odd(i: Mono) -> i64 {
    if i.len() % 2 == 0 {
        -1
    } else {
        1
    }
}

fn sigma_even(i: Mono) -> i64 {
    -sigma_odd(i)
}

const IDX: [u8; 6] = [1, 2, 3, 4, 5, 6];

fn sum_over_i(sigma: Sigma, mut f: impl FnMut(&mut GS, Gr, Mono)) -> GS {
    let mut acc = GS::new();
    for i in Mono::all() {
        f(&mut acc, Gr::from(sigma(i)), i);
    }
    acc
}

/// Σ_I σ (g ⋆ η_I) ⊗ v_{I,k}
fn star_v(g: Signed, k: u32, sigma: Sigma) -> GS {
    sum_over_i(sigma, |acc, c, i| put(acc, &c, star(g, mono(i)), &v(i, k)))
}

/// Σ_I σ (g ⋆ η_I) ⊗ t.v_{I,k}
fn star_tv(g: Signed, k: u32, sigma: Sigma) -> GS {
    sum_over_i(sigma, |acc, c, i| put(acc, &c, star(g, mono(i)), &tv(&v(i, k))))
}

/// Σ_I σ Σ_l ∂_l(g ξ_l ⋆ η_I) ⊗ v_{I,k}
fn div_v(g: Signed, k: u32, sigma: Sigma) -> GS {
    sum_over_i(sigma, |acc, c, i| {
        for l in IDX {
            put(acc, &c, d(l, star(append(g, l), mono(i))), &v(i, k));
        }
    })
}

/// Σ_I σ Σ_{h≠l} (∂_h(g ξ_l) ⋆ η_I) ⊗ ξ_lh.v_{I,k}
fn rot_v(g: Signed, k: u32, sigma: Sigma) -> GS {
    sum_over_i(sigma, |acc, c, i| {
        for h in IDX {
            for l in IDX {
                if h != l {
                    put(acc, &c, star(d(h, append(g, l)), mono(i)), &xv(l, h, &v(i, k)));
                }
            }
        }
    })
}

/// Σ_I σ ∂_j η_I ⊗ v_{I,k}
fn d_eta(j: u8, k: u32, sigma: Sigma) -> GS {
    sum_over_i(sigma, |acc, c, i| put(acc, &c, d(j, mono(i)), &v(i, k)))
}

/// Σ_I σ [Σ_l (∂_l g ⋆ ∂_l η_I) ⊗ v − Σ_{r<p} (∂_r ∂_p g ⋆ η_I) ⊗ ξ_pr.v]
fn contraction(g: Signed, k: u32, sigma: Sigma) -> GS {
    sum_over_i(sigma, |acc, c, i| {
        for l in IDX {
            put(acc, &c, star(d(l, g), d(l, mono(i))), &v(i, k));
        }
        for r in IDX {
            for p in IDX.into_iter().filter(|&p| p > r) {
                put(acc, &-c.clone(), star(d(r, d(p, g)), mono(i)), &xv(p, r, &v(i, k)));
            }
        }
    })
}

fn lin(parts: &[(Gr, &GS)]) -> GS {
    let mut acc = GS::new();
    for (c, p) in parts {
        acc.add_scaled(p, c);
    }
    acc
}

fn g(x: i64) -> Gr {
    Gr::from(x)
}

fn gi(x: i64) -> Gr {
    Gr::imag(x)
}

fn render(a: &GS) -> String {
    if a.is_empty() {
        return "0".into();
    }
    let s: Vec<String> = a
        .iter()
        .map(|(m, x)| format!("eta[{}] ⊗ ({})", m.label(), render_symvec(x)))
        .collect();
    let s = s.join(" + ");
    if s.chars().count() > 600 {
        format!("{}…", s.chars().take(600).collect::<String>())
    } else {
        s
    }
}

fn compare(res: &mut CheckResult, what: impl Fn() -> String, lhs: &GS, rhs: &GS) {
    res.record(lhs == rhs, || format!("{}:\n  machine: {}\n  display: {}", what(), render(lhs), render(rhs)));
}

// ---------------------------------------------------------------------------
// Top-order relations for ξ₁

const XI1: [u8; 1] = [1];
const XI1_DUAL: [u8; 5] = [2, 3, 4, 5, 6];

/// Blocks of the S1 polynomial of ξ₁ for a fixed Θ-power k of the vector.
struct Blocks {
    /// Σ σ (ξ₁⋆η_I) v
    x1: GS,
    /// Σ σ ∂₁η_I v
    d1: GS,
    /// λ-part of ξ₁: (ξ₁⋆η) t.v + Σ ∂_l(ξ_1l⋆η) v − Σ_{j≠1} (ξ_j⋆η) ξ_j1.v
    lin1: GS,
    /// Σ_{l<j} (ξ_1lj⋆η) ξ_jl.v
    quad1: GS,
    /// Σ σ (ξ_23456⋆η_I) v
    y: GS,
    /// contraction terms of ξ_23456
    z: GS,
    /// λ-part of ξ_23456
    w: GS,
}

fn blocks(k: u32) -> Blocks {
    let s = sigma_odd as Sigma;
    let one = word(&XI1);
    let dual = word(&XI1_DUAL);
    let mut lin1 = lin(&[(g(1), &star_tv(one, k, s)), (g(1), &div_v(one, k, s))]);
    lin1.add_scaled(
        &sum_over_i(s, |acc, c, i| {
            for j in 2..=6u8 {
                put(acc, &c, star(word(&[j]), mono(i)), &xv(j, 1, &v(i, k)));
            }
        }),
        &g(-1),
    );
    let quad1 = sum_over_i(s, |acc, c, i| {
        for l in IDX {
            for j in IDX.into_iter().filter(|&j| j > l) {
                put(acc, &c, star(word(&[1, l, j]), mono(i)), &xv(j, l, &v(i, k)));
            }
        }
    });
    let w = lin(&[
        (g(1), &star_tv(dual, k, s)),
        (g(1), &div_v(dual, k, s)),
        (g(-1), &rot_v(dual, k, s)),
    ]);
    Blocks {
        x1: star_v(one, k, s),
        d1: d_eta(1, k, s),
        lin1,
        quad1,
        y: star_v(dual, k, s),
        z: contraction(dual, k, s),
        w,
    }
}

fn at(blocks: &[Blocks], k: i64) -> Option<&Blocks> {
    usize::try_from(k).ok().and_then(|k| blocks.get(k))
}

/// A block at Θ-power `k`, zero outside 0..=K.
fn block(blocks: &[Blocks], k: i64, pick: fn(&Blocks) -> &GS) -> GS {
    at(blocks, k).map(pick).cloned().unwrap_or_default()
}

type Poly = BiPoly<GS>;

fn power(k: u32) -> BiPoly<Gr> {
    BiPoly::sum_power(k)
}

/// λᵃ Θᵇ c(λ+Θ)ᵏ
fn monomial_times_power(a: u32, b: u32, k: i64, c: &Gr, value: &GS) -> Poly {
    if k < 0 || value.is_empty() {
        return Poly::new();
    }
    let p = power(k as u32).shifted(a, b);
    Poly::monomial(0, 0, value.clone()).mul_scalar_poly(&p.scaled(c))
}

fn falling(k: i64, n: i64) -> Gr {
    Gr::from((0..n).map(|j| k - j).product::<i64>())
}

/// The S1 polynomial of ξ₁ as displayed before differentiation.
fn display_polynomial(bl: &[Blocks]) -> Poly {
    let mut p = Poly::new();
    for (k, b) in bl.iter().enumerate() {
        let k = k as i64;
        let terms: [(u32, u32, Gr, &GS); 7] = [
            (0, 1, g(-1), &b.x1),
            (0, 0, g(1), &b.d1),
            (1, 0, g(1), &b.lin1),
            (2, 0, g(-1), &b.quad1),
            (2, 1, gi(3), &b.y),
            (2, 0, gi(1), &b.z),
            (3, 0, gi(1), &b.w),
        ];
        for (a, th, c, val) in terms {
            p.add_assign(&monomial_times_power(a, th, k, &c, val));
        }
    }
    p
}

/// The displayed second λ-derivative, term by term.
fn display_second_derivative(bl: &[Blocks]) -> Poly {
    let mut p = Poly::new();
    let mut add = |a: u32, th: u32, k: i64, c: Gr, val: &GS| {
        p.add_assign(&monomial_times_power(a, th, k, &c, val));
    };
    for (k, b) in bl.iter().enumerate() {
        let k = k as i64;
        add(0, 0, k, g(-2), &b.quad1);
        add(0, 0, k - 1, &g(2) * &falling(k, 1), &b.lin1);
        add(1, 0, k - 1, &g(-4) * &falling(k, 1), &b.quad1);
        let k2 = falling(k, 2);
        add(0, 1, k - 2, -k2.clone(), &b.x1);
        add(0, 0, k - 2, k2.clone(), &b.d1);
        add(1, 0, k - 2, k2.clone(), &b.lin1);
        add(2, 0, k - 2, -k2.clone(), &b.quad1);
        // (2i(λ+Θ)^k + 4iλk(λ+Θ)^{k−1} + iλ²k(k−1)(λ+Θ)^{k−2}) [3ΘY + Z + λW]
        let weights = [(0, k, gi(2)), (1, k - 1, &gi(4) * &falling(k, 1)), (2, k - 2, &gi(1) * &k2)];
        for (la, kk, c) in weights {
            add(la, 1, kk, &c * &g(3), &b.y);
            add(la, 0, kk, c.clone(), &b.z);
            add(la + 1, 0, kk, c, &b.w);
        }
        // (4iλ(λ+Θ)^k + 2iλ²k(λ+Θ)^{k−1}) W
        add(1, 0, k, gi(4), &b.w);
        add(2, 0, k - 1, &gi(2) * &falling(k, 1), &b.w);
    }
    p
}

fn diff_is_zero(a: &Poly, b: &Poly) -> bool {
    let mut d = a.clone();
    d.add_scaled(b, &g(-1));
    d.is_zero()
}

/// Coefficient of λ³(λ+Θ)ˢ, simplified: ξ_23456 at order s+2.
fn top_lambda3(bl: &[Blocks], s: i64) -> GS {
    lin(&[(g(1), &block(bl, s + 2, |b| &b.w)), (g(-3), &block(bl, s + 2, |b| &b.y))])
}

fn top_lambda2(bl: &[Blocks], s: i64) -> GS {
    lin(&[
        (g(-1), &block(bl, s + 2, |b| &b.quad1)),
        (gi(3), &block(bl, s + 1, |b| &b.y)),
        (gi(1), &block(bl, s + 2, |b| &b.z)),
    ])
}

fn top_lambda1(bl: &[Blocks], s: i64) -> GS {
    lin(&[(g(1), &block(bl, s + 2, |b| &b.x1)), (g(1), &block(bl, s + 2, |b| &b.lin1))])
}

fn top_lambda0(bl: &[Blocks], s: i64) -> GS {
    lin(&[(g(1), &block(bl, s + 1, |b| &b.x1)), (g(-1), &block(bl, s + 2, |b| &b.d1))])
}

/// The coefficients as displayed before simplification.
fn raw_lambda2(bl: &[Blocks], s: i64) -> GS {
    let sc = |x: i64| g(x);
    let inner = lin(&[
        (sc(-(s + 2)), &block(bl, s + 2, |b| &b.quad1)),
        (gi(4), &top_lambda3(bl, s - 1)),
        (gi(3 * s), &block(bl, s + 1, |b| &b.y)),
        (gi(s + 2), &block(bl, s + 2, |b| &b.z)),
        (gi(2), &block(bl, s + 1, |b| &b.w)),
    ]);
    inner.scaled(&g(s + 1))
}

fn raw_lambda1(bl: &[Blocks], s: i64) -> GS {
    lin(&[
        (g(-4 * (s + 1)), &block(bl, s + 1, |b| &b.quad1)),
        (g((s + 1) * (s + 2)), &top_lambda1(bl, s)),
        (gi(2), &top_lambda3(bl, s - 2)),
        (gi(12 * s), &block(bl, s, |b| &b.y)),
        (gi(4 * (s + 1)), &block(bl, s + 1, |b| &b.z)),
        (gi(4), &block(bl, s, |b| &b.w)),
    ])
}

fn raw_lambda0(bl: &[Blocks], s: i64) -> GS {
    lin(&[
        (g(-2), &block(bl, s, |b| &b.quad1)),
        (g(2 * (s + 1)), &block(bl, s + 1, |b| &b.lin1)),
        (g(-s * (s + 1)), &block(bl, s + 1, |b| &b.x1)),
        (g((s + 1) * (s + 2)), &block(bl, s + 2, |b| &b.d1)),
        (gi(6), &block(bl, s - 1, |b| &b.y)),
        (gi(2), &block(bl, s, |b| &b.z)),
    ])
}

fn top_order_steps() -> Vec<CheckResult> {
    let n = TOP_ORDER_K;
    let bl: Vec<Blocks> = (0..=n).map(blocks).collect();
    let machine = combined_action(&Symbolic, Mono::of(&XI1), &generic_vector(n))
        .expect("|L| = 1")
        .to_bipoly();

    let mut poly = CheckResult::new("S1 polynomial of xi[1], as a (lambda, lambda+Theta) expansion");
    poly.record(diff_is_zero(&machine, &display_polynomial(&bl)), || {
        "implemented action and displayed polynomial differ".into()
    });

    let second = machine.d_dx().d_dx();
    let mut deriv = CheckResult::new("second lambda-derivative of the S1 polynomial of xi[1]");
    deriv.record(diff_is_zero(&second, &display_second_derivative(&bl)), || {
        "displayed second derivative differs from d^2/dlambda^2".into()
    });

    let mixed = second.rebase();
    let coeff = |a: u32, s: i64| mixed.coeff_or_zero(a, s as u32);
    let top = n as i64 + 2;
    let mut c3 = CheckResult::new("coefficient of lambda^3 (lambda+Theta)^s, s >= 0");
    let mut c2 = CheckResult::new("coefficient of lambda^2 (lambda+Theta)^s, s >= 1");
    let mut c1 = CheckResult::new("coefficient of lambda (lambda+Theta)^s, s >= 2");
    let mut c0 = CheckResult::new("coefficient of (lambda+Theta)^s, s >= 3");
    for s in 0..=top {
        let sg = |x: i64| g(x);
        compare(
            &mut c3,
            || format!("lambda^3 mu^{s}"),
            &coeff(3, s),
            &top_lambda3(&bl, s).scaled(&gi((s + 1) * (s + 2))),
        );
        if s >= 1 {
            compare(&mut c2, || format!("lambda^2 mu^{s}, unsimplified"), &coeff(2, s), &raw_lambda2(&bl, s));
            let simplified = lin(&[
                (sg((s + 1) * (s + 2)), &top_lambda2(&bl, s)),
                (gi(6 * (s + 1)), &top_lambda3(&bl, s - 1)),
            ]);
            compare(&mut c2, || format!("lambda^2 mu^{s}, simplified"), &coeff(2, s), &simplified);
        }
        if s >= 2 {
            compare(&mut c1, || format!("lambda mu^{s}, unsimplified"), &coeff(1, s), &raw_lambda1(&bl, s));
            let simplified = lin(&[
                (sg((s + 1) * (s + 2)), &top_lambda1(&bl, s)),
                (sg(4 * (s + 1)), &top_lambda2(&bl, s - 1)),
                (gi(6), &top_lambda3(&bl, s - 2)),
            ]);
            compare(&mut c1, || format!("lambda mu^{s}, simplified"), &coeff(1, s), &simplified);
        }
        if s >= 3 {
            compare(&mut c0, || format!("mu^{s}, unsimplified"), &coeff(0, s), &raw_lambda0(&bl, s));
            let simplified = lin(&[
                (sg(2), &top_lambda2(&bl, s - 2)),
                (sg(2 * (s + 1)), &top_lambda1(&bl, s - 1)),
                (sg(-(s + 1) * (s + 2)), &top_lambda0(&bl, s)),
            ]);
            compare(&mut c0, || format!("mu^{s}, simplified"), &coeff(0, s), &simplified);
        }
    }

    // In Σ σ (ξ₁⋆η_I) v_{I,s+1} − ∂₁η_I v_{I,s+2}, the η_23456 coefficient
    // is v_{*,s+2}, and the products ξ₁⋆η_I with 1 ∉ I are distinct.
    let mut last = CheckResult::new("top-order conclusions: v[*,k] and v[I,k], 1 not in I");
    for s in 3..=(n as i64 - 2) {
        let rel = top_lambda0(&bl, s);
        let got = rel.get(&Mono::of(&XI1_DUAL)).cloned().unwrap_or_default();
        let want = v(Mono::STAR, (s + 2) as u32);
        last.record(got == want, || {
            format!("eta[23456] coefficient at s = {s}: {} vs {}", render_symvec(&got), render_symvec(&want))
        });
    }
    let outs: Vec<Mono> = Mono::all()
        .filter(|i| !i.contains(1))
        .filter_map(|i| star(word(&XI1), mono(i)).map(|(_, m)| m))
        .collect();
    let distinct: BTreeSet<Mono> = outs.iter().copied().collect();
    last.record(outs.len() == 32 && distinct.len() == 32, || {
        format!("xi[1] * eta[I], 1 not in I: {} products, {} distinct", outs.len(), distinct.len())
    });

    vec![poly, deriv, c3, c2, c1, c0, last]
}

// ---------------------------------------------------------------------------
// Explicit coefficient relations and the rows read off from them

fn families(w: &[u8]) -> Functionals<SymVec> {
    coefficient_functionals(&Symbolic, w, &generic_vector(4)).expect("Θ-degree 4")
}

fn family<'a>(f: &'a Functionals<SymVec>, r: FamilyRef) -> &'a GS {
    let fam = if r.dual { &f.dual } else { &f.direct };
    match r.kind {
        Kind::Theta => &fam.theta[r.p],
        Kind::Constant => &fam.constant[r.p],
        Kind::Linear => &fam.linear[r.p],
        Kind::Quadratic => &fam.quadratic[r.p],
    }
}

fn fr(dual: bool, kind: Kind, p: usize) -> FamilyRef {
    FamilyRef { dual, kind, p }
}

fn combo(f: &Functionals<SymVec>, terms: &[(Gr, FamilyRef)]) -> GS {
    let mut acc = GS::new();
    for (c, r) in terms {
        acc.add_scaled(family(f, *r), c);
    }
    acc
}

/// `direct` − i·`direct with the dual generator`.
fn with_dual(terms: &[(i64, Kind, usize)]) -> Vec<(Gr, FamilyRef)> {
    let mut out: Vec<(Gr, FamilyRef)> = terms.iter().map(|&(c, k, p)| (g(c), fr(false, k, p))).collect();
    out.extend(terms.iter().map(|&(c, k, p)| (gi(-c), fr(true, k, p))));
    out
}

/// (g ⋆ η) t.v + Σ∂_l(g ξ_l ⋆ η) v − Σ_{h≠l}(∂_h(g ξ_l) ⋆ η) ξ_lh.v
fn lambda_part(gen: Signed, k: u32, sigma: Sigma) -> GS {
    lin(&[
        (g(1), &star_tv(gen, k, sigma)),
        (g(1), &div_v(gen, k, sigma)),
        (g(-1), &rot_v(gen, k, sigma)),
    ])
}

fn single_displays(j: u8) -> [(&'static str, GS, Vec<(Gr, FamilyRef)>); 3] {
    use Kind::*;
    let s = sigma_odd as Sigma;
    let gen = word(&[j]);
    let plain = |c: &[(i64, Kind, usize)]| c.iter().map(|&(x, k, p)| (g(x), fr(false, k, p))).collect::<Vec<_>>();
    [
        (
            "B1 + a1 + 2 b2",
            lin(&[
                (g(1), &lambda_part(gen, 1, s)),
                (g(-1), &star_v(gen, 1, s)),
                (g(2), &d_eta(j, 2, s)),
            ]),
            plain(&[(1, Linear, 1), (1, Theta, 1), (2, Constant, 2)]),
        ),
        (
            "B0 + b1",
            lin(&[(g(1), &lambda_part(gen, 0, s)), (g(1), &d_eta(j, 1, s))]),
            plain(&[(1, Linear, 0), (1, Constant, 1)]),
        ),
        (
            "2 a2 + B2 + 3 b3",
            lin(&[
                (g(-2), &star_v(gen, 2, s)),
                (g(1), &lambda_part(gen, 2, s)),
                (g(3), &d_eta(j, 3, s)),
            ]),
            plain(&[(2, Theta, 2), (1, Linear, 2), (3, Constant, 3)]),
        ),
    ]
}

fn triple_displays(l: Mono) -> [(&'static str, GS, Vec<(Gr, FamilyRef)>); 3] {
    use Kind::*;
    let s = sigma_even as Sigma;
    let gen = mono(l);
    let (t, m) = hodge_star_mono(l);
    let dual = Some((i64::from(t), m));
    let both = |f: &dyn Fn(Signed) -> GS| lin(&[(g(1), &f(gen)), (gi(-1), &f(dual))]);
    [
        (
            "B1 - a1 - i(Bd1 - ad1)",
            both(&|x| lin(&[(g(1), &lambda_part(x, 1, s)), (g(-1), &star_v(x, 1, s))])),
            with_dual(&[(1, Linear, 1), (-1, Theta, 1)]),
        ),
        (
            "a0 - B0 - i(ad0 - Bd0)",
            both(&|x| lin(&[(g(1), &star_v(x, 0, s)), (g(-1), &lambda_part(x, 0, s))])),
            with_dual(&[(1, Theta, 0), (-1, Linear, 0)]),
        ),
        (
            "-a2 + B2 - i(-ad2 + Bd2)",
            both(&|x| lin(&[(g(-1), &star_v(x, 2, s)), (g(1), &lambda_part(x, 2, s))])),
            with_dual(&[(-1, Theta, 2), (1, Linear, 2)]),
        ),
    ]
}

fn triples() -> Vec<Mono> {
    GeneratorClass::Triple.members()
}

fn explicit_displays() -> CheckResult {
    let mut res = CheckResult::new("explicit S2/S3 displays equal their family combinations");
    for j in IDX {
        let f = families(&[j]);
        for (name, display, terms) in single_displays(j) {
            compare(&mut res, || format!("{name}, L = {j}"), &combo(&f, &terms), &display);
        }
    }
    for l in triples() {
        let f = families(&l.indices());
        for (name, display, terms) in triple_displays(l) {
            compare(&mut res, || format!("{name}, L = {}", l.label()), &combo(&f, &terms), &display);
        }
    }
    res
}

fn coefficient(a: &GS, out: Mono) -> SymVec {
    a.get(&out).cloned().unwrap_or_default()
}

/// c·(t.v − e·v)
fn eigen_row(i: Mono, k: u32, e: i64, c: i64) -> SymVec {
    let mut r = tv(&v(i, k));
    r.add_scaled(&v(i, k), &g(-e));
    r.scaled(&g(c))
}

/// Rank of the SymVecs as rows over their symbols.
fn sym_rank(rows: &[SymVec]) -> usize {
    let cols: BTreeMap<&Sym, usize> = rows
        .iter()
        .flat_map(|r| r.keys())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .enumerate()
        .map(|(n, s)| (s, n))
        .collect();
    let rows: Vec<SparseVec> = rows
        .iter()
        .map(|r| linalg::sparse_from(r.iter().map(|(s, c)| (cols[s], c.clone()))))
        .collect();
    linalg::rank(&rows, cols.len())
}

fn drop_symbols(x: &SymVec, gone: impl Fn(&Sym) -> bool) -> SymVec {
    x.iter().filter(|(s, _)| !gone(s)).map(|(s, c)| (s.clone(), c.clone())).collect()
}

fn low_order_rows() -> Vec<CheckResult> {
    let empty = Mono::EMPTY;
    let mut eig = CheckResult::new("eigenvalue rows for v[,0], v[,1], v[,2]");
    let mut low = CheckResult::new("rows v[j,1], v[j,2], v[jl,1]");
    for j in IDX {
        let [(_, b1, _), (_, b0, _), (_, b2, _)] = single_displays(j);
        let ej = Mono::single(j);
        // (scalar, Θ-power, eigenvalue) per display, read at η_j
        for (disp, k, e) in [(&b1, 1, 6), (&b0, 0, 5), (&b2, 2, 7)] {
            let got = coefficient(disp, ej);
            let want = eigen_row(empty, k, e, -1);
            eig.record(got == want, || {
                format!("eta[{j}] coefficient, k = {k}: {} vs {}", render_symvec(&got), render_symvec(&want))
            });
        }
        let got = coefficient(&b0, empty);
        low.record(got == v(ej, 1), || format!("eta[] in B0 + b1, L = {j}: {}", render_symvec(&got)));
        let got = coefficient(&b1, empty);
        low.record(got == v(ej, 2).scaled(&g(2)), || {
            format!("eta[] in B1 + a1 + 2 b2, L = {j}: {}", render_symvec(&got))
        });
        for l in IDX.into_iter().filter(|&l| l > j) {
            let got = coefficient(&b0, Mono::single(l));
            let mut want = v(Mono::of(&[j, l]), 1).scaled(&g(-1));
            want.add_assign_ref(&xv(l, j, &v(empty, 0)));
            low.record(got == want, || {
                format!("eta[{l}] in B0 + b1, L = {j}: {} vs {}", render_symvec(&got), render_symvec(&want))
            });
            let reduced = drop_symbols(&got, |s| s.index == empty && s.k == 0);
            low.record(reduced == v(Mono::of(&[j, l]), 1).scaled(&g(-1)), || {
                format!("eta[{l}] in B0 + b1, L = {j}, once v[,0] = 0: {}", render_symvec(&reduced))
            });
        }
    }
    for l in triples() {
        let [(_, b1, _), (_, a0, _), (_, a2, _)] = triple_displays(l);
        for (disp, k, c, name) in [(&b1, 1, 1, "B1 - a1"), (&a0, 0, -1, "a0 - B0"), (&a2, 2, 1, "-a2 + B2")] {
            let got = coefficient(disp, l);
            let want = eigen_row(empty, k, 4, c);
            eig.record(got == want, || {
                format!(
                    "eta[{}] in {name}: {} vs {}",
                    l.label(),
                    render_symvec(&got),
                    render_symvec(&want)
                )
            });
        }
    }
    // the eigenvalue pairs (6, 4), (5, 4), (7, 4) are incompatible
    for (k, e) in [(1, 6), (0, 5), (2, 7)] {
        let rows = [eigen_row(empty, k, e, 1), eigen_row(empty, k, 4, 1)];
        eig.record(sym_rank(&rows) == 2, || format!("rows for v[,{k}] do not force it to vanish"));
    }
    vec![eig, low]
}

/// The last step: on degrees 8, 7, 6 only v_{I,2} with 2 ≤ |I| ≤ 4
/// survive, B₁(j)+a₁(j)+2b₂(j) reduces to 2b₂(j) = Σ ±∂_jη_I ⊗ v_{I,2}, and
/// the ∂_jη_I are distinct.
fn final_step() -> CheckResult {
    let mut res = CheckResult::new("b2(j) step for degrees 6, 7, 8");
    let mut m = crate::verma::VermaVector::<SymVec>::new();
    for i in Mono::all().filter(|i| (2..=4).contains(&i.len())) {
        m.insert((2, i), v(i, 2));
    }
    let mut covered = BTreeSet::new();
    for j in IDX {
        let f = coefficient_functionals(&Symbolic, &[j], &m).expect("Θ-degree 2");
        let s1 = combo(
            &f,
            &[
                (g(1), fr(false, Kind::Linear, 1)),
                (g(1), fr(false, Kind::Theta, 1)),
                (g(2), fr(false, Kind::Constant, 2)),
            ],
        );
        let b2 = family(&f, fr(false, Kind::Constant, 2)).clone();
        res.record(s1 == b2.scaled(&g(2)), || format!("L = {j}: relation is not 2 b2: {}", render(&s1)));
        let mut want = GS::new();
        for i in Mono::all().filter(|i| (2..=4).contains(&i.len())) {
            put(&mut want, &g(sigma_odd(i)), d(j, mono(i)), &v(i, 2));
        }
        compare(&mut res, || format!("b2({j})"), &b2, &want);
        // each output monomial carries exactly one unknown
        let single = b2.values().all(|x| x.len() == 1);
        res.record(single, || format!("b2({j}) mixes unknowns in one eta-coefficient"));
        covered.extend(b2.values().flat_map(|x| x.keys().map(|s| s.index)));
    }
    let all: BTreeSet<Mono> = Mono::all().filter(|i| (2..=4).contains(&i.len())).collect();
    res.record(covered == all, || format!("{} of {} unknowns reached", covered.len(), all.len()));
    res
}

// ---------------------------------------------------------------------------
// Eliminating Θ³ and Θ⁴ through the conditions for L = ∅

type Form = BTreeMap<(bool, u8, usize), Gr>;

fn kind_code(k: Kind) -> u8 {
    match k {
        Kind::Theta => 0,
        Kind::Constant => 1,
        Kind::Linear => 2,
        Kind::Quadratic => 3,
    }
}

fn form(terms: &[(Gr, FamilyRef)]) -> Form {
    let mut f = Form::new();
    for (c, r) in terms {
        add_term(&mut f, (r.dual, kind_code(r.kind), r.p), c, &Gr::ONE);
    }
    f
}

fn form_lin(parts: &[(Gr, &Form)]) -> Form {
    let mut f = Form::new();
    for (c, p) in parts {
        f.add_scaled(p, c);
    }
    f
}

/// Replaces the family `key` by `by` in `f`.
fn substitute(f: &Form, key: (bool, u8, usize), by: &Form) -> Form {
    let mut out = f.clone();
    if let Some(c) = out.remove(&key) {
        out.add_scaled(by, &c);
    }
    out
}

fn drop_keys(f: &Form, keys: &[(bool, u8, usize)]) -> Form {
    f.iter().filter(|(k, _)| !keys.contains(k)).map(|(k, c)| (*k, c.clone())).collect()
}

fn supported_on(a: &GS, ok: impl Fn(Mono, &Sym) -> bool) -> bool {
    a.iter().all(|(m, x)| x.keys().all(|s| ok(*m, s)))
}

fn empty_generator_steps() -> CheckResult {
    let mut res = CheckResult::new("eliminating Theta^4 and Theta^3 via S1 for L = empty");
    let f = families(&[]);
    let empty = Mono::EMPTY;
    let (th, co, li, qu) = (0u8, 1u8, 2u8, 3u8);

    // families for L = ∅
    for p in 0..5 {
        res.record(family(&f, fr(false, Kind::Constant, p)).is_empty(), || format!("b{p}(empty) is not zero"));
        let mut want = GS::new();
        for i in Mono::all() {
            add_term(&mut want, i, &v(i, p as u32), &g(-2));
        }
        compare(&mut res, || format!("a{p}(empty)"), family(&f, fr(false, Kind::Theta, p)), &want);
    }
    res.record(family(&f, fr(true, Kind::Quadratic, 0)).is_empty(), || "Cd0(empty) is not zero".into());
    for (kind, p) in [(Kind::Theta, 0), (Kind::Linear, 0), (Kind::Theta, 1), (Kind::Linear, 1)] {
        let a = family(&f, fr(true, kind, p));
        res.record(supported_on(a, |m, s| m == Mono::STAR && s.index == empty && s.k == p as u32), || {
            format!("dual {kind:?} {p} (empty) involves more than v[,{p}]: {}", render(a))
        });
    }
    let bd1 = family(&f, fr(true, Kind::Constant, 1));
    res.record(supported_on(bd1, |_, s| s.k == 1 && s.index.len() <= 2), || {
        format!("bd1(empty) involves v[I,1] with |I| > 2: {}", render(bd1))
    });

    let rel: Vec<Relation> = relations().into_iter().filter(|r| r.class == GeneratorClass::Empty).collect();
    let eq: Vec<Form> = rel.iter().map(|r| form(&r.terms)).collect();
    let (e11, e12, e21, e26, e27, e31, e32) = (&eq[0], &eq[1], &eq[2], &eq[3], &eq[4], &eq[5], &eq[6]);

    // bd2 = −4 Bd1 + 3 ad1, using Cd0 = 0
    let e32 = drop_keys(e32, &[(true, qu, 0)]);
    let bd2 = form_lin(&[(g(-1), &e32), (g(1), &Form::from([((true, co, 2), g(1))]))]);
    res.record(
        bd2 == Form::from([((true, li, 1), g(-4)), ((true, th, 1), g(3))]),
        || format!("bd2 from the last relation: {bd2:?}"),
    );
    let r21 = substitute(e21, (true, co, 2), &bd2);
    let r27 = substitute(e27, (true, co, 2), &bd2);
    let x = |c: i64| Form::from([((true, th, 1), gi(c)), ((true, li, 1), gi(-c))]);
    let want21 = form_lin(&[
        (g(1), &Form::from([((false, qu, 3), g(2)), ((false, li, 4), g(2)), ((false, th, 4), g(-2))])),
        (g(1), &x(-4)),
    ]);
    let want27 = form_lin(&[(g(1), &Form::from([((false, qu, 3), g(1))])), (g(1), &x(-6))]);
    res.record(r21 == want21 && r27 == want27, || format!("reduced relations: {r21:?}; {r27:?}"));
    let c1 = form_lin(&[(g(2), e11), (g(-1), &r21)]);
    let c2 = form_lin(&[(g(1), &r21), (g(-2), &r27)]);
    let want1 = form_lin(&[(g(1), &Form::from([((false, li, 4), g(6)), ((false, th, 4), g(14))])), (g(1), &x(4))]);
    let want2 = form_lin(&[(g(1), &Form::from([((false, li, 4), g(2)), ((false, th, 4), g(-2))])), (g(1), &x(8))]);
    res.record(c1 == want1 && c2 == want2, || format!("combinations: {c1:?}; {c2:?}"));
    // with ad1 = Bd1 = 0 the pair in (B4, a4) is regular
    let pair = [
        drop_keys(&c1, &[(true, th, 1), (true, li, 1)]),
        drop_keys(&c2, &[(true, th, 1), (true, li, 1)]),
    ];
    res.record(form_rank(&pair) == 2, || "B4 and a4 are not determined".into());

    // Θ³: drop b4 = 0, ad0, Bd0 (v[,0] = 0), bd1 (v[,1] = v[i,1] = 0)
    let gone = [(false, co, 4), (true, th, 0), (true, li, 0), (true, co, 1)];
    let three = [drop_keys(e12, &gone), drop_keys(e26, &gone), drop_keys(e31, &gone)];
    let expected = [
        Form::from([((false, qu, 2), g(1)), ((false, th, 3), g(3)), ((false, li, 3), g(3))]),
        Form::from([((false, qu, 2), g(4)), ((false, li, 3), g(3)), ((false, th, 3), g(-3))]),
        Form::from([((false, qu, 2), g(1))]),
    ];
    res.record(three == expected, || format!("reduced relations: {three:?}"));
    res.record(form_rank(&three) == 3, || "C2, a3, B3 are not determined".into());
    res
}

fn form_rank(rows: &[Form]) -> usize {
    let keys: BTreeMap<(bool, u8, usize), usize> = rows
        .iter()
        .flat_map(|r| r.keys().copied())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .enumerate()
        .map(|(n, k)| (k, n))
        .collect();
    let rows: Vec<SparseVec> = rows
        .iter()
        .map(|r| linalg::sparse_from(r.iter().map(|(k, c)| (keys[k], c.clone()))))
        .collect();
    linalg::rank(&rows, keys.len())
}

/// All proof steps, each compared exactly with the implemented action.
pub fn reproduce_proof_steps() -> Vec<CheckResult> {
    let mut out = top_order_steps();
    out.push(explicit_displays());
    out.extend(low_order_rows());
    out.push(empty_generator_steps());
    out.push(final_step());
    out
}
