//! Singular vectors as the kernel of an exact linear system.
//!
//! The unknowns are the F-coordinates of v_{I,k} in the dual coordinates
//! Σ Θᵏ η_I ⊗ v_{I,k}. Each combined operator ξ_L − i(−1)^{|L|(|L|+1)/2}
//! λ^{3−|L|} ξ*_L with |L| ≤ 3 contributes one row per vanishing
//! coefficient: every λ-power ≥ 2, the λ¹ term when |L| ≥ 1, and the λ⁰
//! term when |L| = 3. Optionally the positive root vectors of so(6) must
//! annihilate the vector as well.

mod steps;

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::check::CheckResult;
use crate::contact::{root_label, Root, RootDatum};
use crate::error::{Error, Result};
use crate::exactnum::{add_term, Gr, Linear};
use crate::gmodule::{self, FVec, ModuleSpec};
use crate::grassmann::{Grass, GrassmannElement, Mono};
use crate::linalg::{self, Rref, SparseVec};
use crate::verma::{self, combined_action, coefficient_functionals, dual_degree, element_action, Families, VermaVector};

pub use steps::reproduce_proof_steps;

/// Default highest Θ-power of the unknowns: one above the first bound of
/// the argument, so that bound is tested rather than assumed.
pub const DEFAULT_K_MAX: u32 = 5;

/// The default scan of t-eigenvalues.
pub fn default_t_scan() -> Vec<Gr> {
    (-10..=10).map(Gr::from).collect()
}

/// The unknown coordinate `coord` of v_{index,k}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnknownIndex {
    pub k: u32,
    pub index: Mono,
    pub coord: usize,
}

/// Column numbering of the unknowns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Layout {
    pub k_max: u32,
    pub dim: usize,
}

impl Layout {
    pub fn ncols(&self) -> usize {
        64 * (self.k_max as usize + 1) * self.dim
    }

    pub fn column(&self, u: UnknownIndex) -> usize {
        (u.k as usize * 64 + usize::from(u.index.bits())) * self.dim + u.coord
    }

    pub fn unknown(&self, col: usize) -> UnknownIndex {
        let coord = col % self.dim;
        let rest = col / self.dim;
        UnknownIndex {
            k: (rest / 64) as u32,
            index: Mono::from_bits((rest % 64) as u8),
            coord,
        }
    }

    /// Degree of the original vector whose coordinate is this column.
    pub fn degree(&self, col: usize) -> u32 {
        let u = self.unknown(col);
        dual_degree(u.k, u.index)
    }

    pub fn unit(&self, col: usize) -> VermaVector {
        let u = self.unknown(col);
        VermaVector::from([((u.k, u.index), FVec::from([(u.coord, Gr::ONE)]))])
    }

    pub fn to_vector(&self, x: &[(usize, Gr)]) -> VermaVector {
        let mut m = VermaVector::new();
        for (col, c) in x {
            let u = self.unknown(*col);
            add_term(&mut m, (u.k, u.index), &FVec::from([(u.coord, c.clone())]), &Gr::ONE);
        }
        m
    }

    /// Coordinates of `m`; `None` if it has components outside the layout.
    pub fn to_sparse(&self, m: &VermaVector) -> Option<SparseVec> {
        let mut out = Vec::new();
        for (&(k, i), v) in m {
            for (&coord, c) in v {
                if k > self.k_max || coord >= self.dim {
                    return None;
                }
                out.push((self.column(UnknownIndex { k, index: i, coord }), c.clone()));
            }
        }
        Some(linalg::sparse_from(out))
    }
}

/// Where a scalar equation comes from.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum RowOrigin {
    /// Coefficient of λ^lambda Θ^theta η_out ⊗ e_coord in the combined
    /// operator built on ξ_generator.
    Action {
        generator: Mono,
        lambda: u32,
        theta: u32,
        out: Mono,
        coord: usize,
    },
    /// Coefficient of Θ^theta η_out ⊗ e_coord in E_root applied to the vector.
    RootVector {
        root: Root,
        theta: u32,
        out: Mono,
        coord: usize,
    },
}

impl fmt::Display for RowOrigin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowOrigin::Action {
                generator,
                lambda,
                theta,
                out,
                coord,
            } => write!(
                f,
                "xi[{}] lambda^{lambda} theta^{theta} eta[{}] e{}",
                generator.label(),
                out.label(),
                coord + 1
            ),
            RowOrigin::RootVector { root, theta, out, coord } => write!(
                f,
                "E[{}] theta^{theta} eta[{}] e{}",
                root_label(*root),
                out.label(),
                coord + 1
            ),
        }
    }
}

/// Whether the λ^j coefficient of the combined operator on ξ_L is required
/// to vanish.
pub fn imposed(generator_len: u32, lambda: u32) -> bool {
    match lambda {
        0 => generator_len == 3,
        1 => generator_len >= 1,
        _ => true,
    }
}

/// Generators ξ_L, |L| ≤ 3, in graded order.
pub fn generators() -> Vec<Mono> {
    Mono::all_graded().into_iter().filter(|l| l.len() <= 3).collect()
}

/// Sparse exact system with one provenance tag per row.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintSystem {
    pub layout: Layout,
    pub rows: Vec<SparseVec>,
    pub origins: Vec<RowOrigin>,
}

impl ConstraintSystem {
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    /// One line per row, stable across runs.
    pub fn canonical_text(&self) -> String {
        let mut s = String::new();
        for (o, r) in self.origins.iter().zip(&self.rows) {
            s.push_str(&o.to_string());
            s.push(':');
            for (c, v) in r {
                s.push_str(&format!(" {c}={v}"));
            }
            s.push('\n');
        }
        s
    }

    /// Rows not satisfied by `m`, with their values.
    pub fn violations(&self, m: &VermaVector) -> Vec<(RowOrigin, Gr)> {
        let Some(x) = self.layout.to_sparse(m) else {
            return vec![];
        };
        self.rows
            .iter()
            .zip(&self.origins)
            .filter_map(|(r, o)| {
                let v = linalg::dot_sparse(r, &x);
                (!v.is_zero()).then(|| (o.clone(), v))
            })
            .collect()
    }

    pub fn is_solution(&self, m: &VermaVector) -> bool {
        self.layout.to_sparse(m).is_some() && self.violations(m).is_empty()
    }

    /// The subsystem of rows selected by `keep`.
    pub fn filtered(&self, keep: impl Fn(&RowOrigin) -> bool) -> ConstraintSystem {
        let (rows, origins) = self
            .rows
            .iter()
            .zip(&self.origins)
            .filter(|(_, o)| keep(o))
            .map(|(r, o)| (r.clone(), o.clone()))
            .unzip();
        ConstraintSystem {
            layout: self.layout,
            rows,
            origins,
        }
    }
}

/// Turns a linear map on vectors into rows: column j of the result is the
/// image of the j-th unit vector.
fn linear_rows<K: Ord + Clone + Send>(
    layout: Layout,
    image: impl Fn(&VermaVector) -> Vec<(K, Gr)> + Sync,
) -> BTreeMap<K, SparseVec> {
    let mut rows: BTreeMap<K, SparseVec> = BTreeMap::new();
    let columns: Vec<Vec<(K, Gr)>> = (0..layout.ncols())
        .into_par_iter()
        .map(|col| image(&layout.unit(col)))
        .collect();
    for (col, entries) in columns.into_iter().enumerate() {
        for (key, v) in entries {
            if !v.is_zero() {
                rows.entry(key).or_default().push((col, v));
            }
        }
    }
    rows
}

fn action_rows(f: &ModuleSpec, layout: Layout, generator: Mono, lambdas: impl Fn(u32) -> bool + Sync) -> Vec<(RowOrigin, SparseVec)> {
    let rows = linear_rows(layout, |m| {
        let p = combined_action(f, generator, m).expect("|L| ≤ 3");
        let mut out = Vec::new();
        for (&lambda, part) in p.iter() {
            if !lambdas(lambda) {
                continue;
            }
            for (&(theta, o), v) in part {
                for (&coord, c) in v {
                    out.push((
                        RowOrigin::Action {
                            generator,
                            lambda,
                            theta,
                            out: o,
                            coord,
                        },
                        c.clone(),
                    ));
                }
            }
        }
        out
    });
    rows.into_iter().collect()
}

fn root_rows(f: &ModuleSpec, layout: Layout) -> Vec<(RowOrigin, SparseVec)> {
    let mut all = Vec::new();
    for (root, e) in RootDatum::new().positive_vectors() {
        let g: GrassmannElement = e.terms().iter().map(|(&(_, m), c)| (m, c.clone())).collect();
        let rows = linear_rows(layout, |m| {
            let mut out = Vec::new();
            for (&(theta, o), v) in &element_action(f, &g, m).at_zero() {
                for (&coord, c) in v {
                    out.push((
                        RowOrigin::RootVector {
                            root,
                            theta,
                            out: o,
                            coord,
                        },
                        c.clone(),
                    ));
                }
            }
            out
        });
        all.extend(rows);
    }
    all
}

fn from_rows(layout: Layout, rows: Vec<(RowOrigin, SparseVec)>) -> ConstraintSystem {
    let (origins, rows) = rows.into_iter().unzip();
    ConstraintSystem { layout, rows, origins }
}

/// The singular-vector conditions on vectors of Θ-degree ≤ `k_max`, plus
/// the highest-weight conditions when requested.
pub fn assemble(f: &ModuleSpec, k_max: u32, highest_weight: bool) -> Result<ConstraintSystem> {
    gmodule::validate(f).into_result()?;
    let layout = Layout { k_max, dim: f.dim() };
    let mut rows = Vec::new();
    for l in generators() {
        let len = l.len();
        rows.extend(action_rows(f, layout, l, |j| imposed(len, j)));
    }
    if highest_weight {
        rows.extend(root_rows(f, layout));
    }
    Ok(from_rows(layout, rows))
}

/// Only the rows of the combined operator on ξ_generator with the given
/// λ-powers.
pub fn assemble_partial(f: &ModuleSpec, k_max: u32, generator: Mono, lambdas: &[u32]) -> ConstraintSystem {
    let layout = Layout { k_max, dim: f.dim() };
    from_rows(layout, action_rows(f, layout, generator, |j| lambdas.contains(&j)))
}

/// Exact kernel basis. The system splits into independent blocks (one per
/// degree for the singular-vector system); each block is eliminated on its
/// own, shortest rows first, and abandoned as soon as it has full rank.
pub fn kernel(sys: &ConstraintSystem) -> Vec<VermaVector> {
    kernel_sparse(sys).iter().map(|x| sys.layout.to_vector(x)).collect()
}

fn block_rref(sys: &ConstraintSystem, b: &linalg::Block) -> (Rref, Vec<usize>) {
    let local: BTreeMap<usize, usize> = b.cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut rows: Vec<SparseVec> = b
        .rows
        .iter()
        .map(|&r| sys.rows[r].iter().map(|(c, v)| (local[c], v.clone())).collect())
        .collect();
    rows.sort_by_key(|r: &SparseVec| r.len());
    let mut e = Rref::new(b.cols.len());
    for r in &rows {
        if e.is_full() {
            break;
        }
        e.insert(r);
    }
    (e, b.cols.clone())
}

pub fn kernel_sparse(sys: &ConstraintSystem) -> Vec<SparseVec> {
    let blocks = linalg::blocks(&sys.rows, sys.layout.ncols());
    let parts: Vec<Vec<SparseVec>> = blocks
        .par_iter()
        .map(|b| {
            let (e, cols) = block_rref(sys, b);
            e.kernel()
                .into_iter()
                .map(|v| linalg::sparse_from(v.into_iter().map(|(c, x)| (cols[c], x))))
                .collect()
        })
        .collect();
    parts.into_iter().flatten().collect()
}

/// Splits a vector by the degree of the original vector.
pub fn homogeneous_components(m: &VermaVector) -> BTreeMap<u32, VermaVector> {
    let mut out: BTreeMap<u32, VermaVector> = BTreeMap::new();
    for (&(k, i), v) in m {
        out.entry(dual_degree(k, i)).or_default().insert((k, i), v.clone());
    }
    out
}

// ---------------------------------------------------------------------------
// The bound and the shapes

/// Coordinates forbidden by the bound: Θ-power ≥ 3; Θ² with |I| ≤ 4; Θ
/// with |I| ≤ 2; Θ⁰ with I = ∅.
pub fn violates_bound(k: u32, i: Mono) -> bool {
    match k {
        0 => i.is_empty(),
        1 => i.len() <= 2,
        2 => i.len() <= 4,
        _ => true,
    }
}

/// The Θ-powers allowed in a homogeneous vector of the given degree.
pub fn allowed_theta_powers(degree: u32) -> &'static [u32] {
    match degree {
        0 | 1 => &[0],
        2 | 3 => &[0, 1],
        4 | 5 => &[0, 1, 2],
        6..=8 => &[2],
        _ => &[],
    }
}

/// Whether a homogeneous vector matches one of the admissible shapes.
pub fn matches_shape(degree: u32, m: &VermaVector) -> bool {
    let allowed = allowed_theta_powers(degree);
    m.keys().all(|&(k, i)| dual_degree(k, i) == degree && allowed.contains(&k))
}

/// Re-checks the conditions on `m` directly through the combined operators.
pub fn satisfies_conditions(f: &ModuleSpec, m: &VermaVector) -> std::result::Result<(), String> {
    for l in generators() {
        let p = combined_action(f, l, m).expect("|L| ≤ 3");
        for (&j, part) in p.iter() {
            if imposed(l.len(), j) && !part.is_empty() {
                return Err(format!("xi[{}] leaves a lambda^{j} coefficient", l.label()));
            }
        }
    }
    Ok(())
}

/// Kernel summary and checks for one value of t.
#[derive(Clone, Debug)]
pub struct ScanEntry {
    pub t_scalar: Gr,
    pub rows: usize,
    pub kernel_by_degree: BTreeMap<u32, usize>,
    pub checks: Vec<CheckResult>,
}

impl ScanEntry {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }
}

#[derive(Clone, Debug)]
pub struct BoundReport {
    pub module: String,
    pub k_max: u32,
    pub entries: Vec<ScanEntry>,
}

impl BoundReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(ScanEntry::passed)
    }
}

fn render(m: &VermaVector) -> String {
    verma::render(m, verma::render_fvec)
}

/// Computes the kernel for every t in the scan and checks the bound, the
/// shapes, homogeneous closure, the conditions themselves and the
/// coefficient relations on every homogeneous component.
pub fn verify_bound(base: &ModuleSpec, k_max: u32, t_scan: &[Gr], highest_weight: bool) -> Result<BoundReport> {
    gmodule::validate(base).into_result()?;
    let entries = t_scan
        .par_iter()
        .map(|c| scan_one(&base.with_t_scalar(c.clone()), k_max, highest_weight))
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundReport {
        module: base.name.clone(),
        k_max,
        entries,
    })
}

fn scan_one(f: &ModuleSpec, k_max: u32, highest_weight: bool) -> Result<ScanEntry> {
    let sys = assemble(f, k_max, highest_weight)?;
    let basis = kernel(&sys);
    let relations = relations();
    let mut bound = CheckResult::new("theta bound");
    let mut shape = CheckResult::new("degree shapes");
    let mut closure = CheckResult::new("homogeneous closure");
    let mut sound = CheckResult::new("conditions re-verified");
    let mut identities = CheckResult::new("coefficient relations");
    let mut by_degree = BTreeMap::new();
    for v in &basis {
        for (d, part) in homogeneous_components(v) {
            *by_degree.entry(d).or_insert(0) += 1;
            let bad: Vec<(u32, Mono)> = part.keys().copied().filter(|&(k, i)| violates_bound(k, i)).collect();
            bound.record(bad.is_empty(), || format!("degree {d}: {}", render(&part)));
            shape.record(matches_shape(d, &part), || format!("degree {d}: {}", render(&part)));
            closure.record(sys.is_solution(&part), || format!("degree {d} projection: {}", render(&part)));
            let s = satisfies_conditions(f, &part);
            sound.record(s.is_ok(), || format!("{}: {}", s.clone().unwrap_err(), render(&part)));
            identities.merge(audit_relations(f, &relations, &part));
        }
    }
    Ok(ScanEntry {
        t_scalar: f.t_scalar().clone(),
        rows: sys.nrows(),
        kernel_by_degree: by_degree,
        checks: vec![bound, shape, closure, sound, identities],
    })
}

// ---------------------------------------------------------------------------
// Coefficient relations

/// Which family: Θ-term, λ-free rest, λ-term or λ²-term.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Theta,
    Constant,
    Linear,
    Quadratic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilyRef {
    pub dual: bool,
    pub kind: Kind,
    pub p: usize,
}

impl fmt::Display for FamilyRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            Kind::Theta => "theta",
            Kind::Constant => "const",
            Kind::Linear => "lin",
            Kind::Quadratic => "quad",
        };
        let d = if self.dual { "dual." } else { "" };
        write!(f, "{d}{k}{}", self.p)
    }
}

/// Generators a relation is stated for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorClass {
    Empty,
    Single,
    Triple,
}

impl GeneratorClass {
    pub fn members(self) -> Vec<Mono> {
        let len = match self {
            GeneratorClass::Empty => 0,
            GeneratorClass::Single => 1,
            GeneratorClass::Triple => 3,
        };
        Mono::all_graded().into_iter().filter(|m| m.len() == len).collect()
    }
}

/// A linear relation among the coefficient families that the conditions
/// on the given λ-powers of the combined operator are claimed to imply.
#[derive(Clone, Debug)]
pub struct Relation {
    pub class: GeneratorClass,
    pub lambdas: Vec<u32>,
    pub terms: Vec<(Gr, FamilyRef)>,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(c, r)| format!("({c}){r}")).collect();
        write!(f, "{} = 0", parts.join(" + "))
    }
}

impl Relation {
    pub fn evaluate<V: Linear>(&self, fun: &verma::Functionals<V>) -> Grass<V> {
        let mut out = Grass::<V>::new();
        for (c, r) in &self.terms {
            let fam: &Families<V> = if r.dual { &fun.dual } else { &fun.direct };
            let part = match r.kind {
                Kind::Theta => &fam.theta[r.p],
                Kind::Constant => &fam.constant[r.p],
                Kind::Linear => &fam.linear[r.p],
                Kind::Quadratic => &fam.quadratic[r.p],
            };
            out.add_scaled(part, c);
        }
        out
    }
}

fn term(c: Gr, dual: bool, kind: Kind, p: usize) -> (Gr, FamilyRef) {
    (c, FamilyRef { dual, kind, p })
}

/// `combo` for ξ_L minus i times the same combination for ξ*_L.
fn with_dual(combo: &[(i64, Kind, usize)]) -> Vec<(Gr, FamilyRef)> {
    let mut out: Vec<_> = combo.iter().map(|&(c, k, p)| term(Gr::from(c), false, k, p)).collect();
    out.extend(combo.iter().map(|&(c, k, p)| term(Gr::imag(-c), true, k, p)));
    out
}

/// The relations used in bounding the Θ-degree.
pub fn relations() -> Vec<Relation> {
    use Kind::*;
    let s2_single: [&[(i64, Kind, usize)]; 5] = [
        &[(4, Theta, 4), (1, Linear, 4)],
        &[(3, Theta, 3), (1, Linear, 3), (4, Constant, 4)],
        &[(2, Theta, 2), (1, Linear, 2), (3, Constant, 3)],
        &[(1, Linear, 1), (1, Theta, 1), (2, Constant, 2)],
        &[(1, Linear, 0), (1, Constant, 1)],
    ];
    let s3_triple: [&[(i64, Kind, usize)]; 6] = [
        &[(1, Theta, 4)],
        &[(1, Theta, 3), (1, Constant, 4)],
        &[(1, Theta, 2), (1, Constant, 3)],
        &[(1, Theta, 1), (1, Constant, 2)],
        &[(1, Theta, 0), (1, Constant, 1)],
        &[(1, Constant, 0)],
    ];
    let s23_triple: [&[(i64, Kind, usize)]; 3] = [
        &[(1, Linear, 1), (-1, Theta, 1)],
        &[(1, Theta, 0), (-1, Linear, 0)],
        &[(-1, Theta, 2), (1, Linear, 2)],
    ];
    let mut out = Vec::new();
    for c in s2_single {
        out.push(Relation {
            class: GeneratorClass::Single,
            lambdas: vec![1],
            terms: c.iter().map(|&(x, k, p)| term(Gr::from(x), false, k, p)).collect(),
        });
    }
    for c in s2_single {
        out.push(Relation {
            class: GeneratorClass::Triple,
            lambdas: vec![1],
            terms: with_dual(c),
        });
    }
    for c in s3_triple {
        out.push(Relation {
            class: GeneratorClass::Triple,
            lambdas: vec![0],
            terms: with_dual(c),
        });
    }
    for c in s23_triple {
        out.push(Relation {
            class: GeneratorClass::Triple,
            lambdas: vec![0, 1],
            terms: with_dual(c),
        });
    }
    let g = |re: i64, im: i64| Gr::from_parts(re, 1, im, 1);
    let empty: Vec<Vec<(Gr, FamilyRef)>> = vec![
        vec![term(g(1, 0), false, Quadratic, 3), term(g(4, 0), false, Linear, 4), term(g(6, 0), false, Theta, 4)],
        vec![
            term(g(1, 0), false, Quadratic, 2),
            term(g(3, 0), false, Theta, 3),
            term(g(3, 0), false, Linear, 3),
            term(g(6, 0), false, Constant, 4),
        ],
        vec![
            term(g(2, 0), false, Quadratic, 3),
            term(g(2, 0), false, Linear, 4),
            term(g(-2, 0), false, Theta, 4),
            term(g(0, -1), true, Theta, 1),
            term(g(0, -1), true, Constant, 2),
        ],
        vec![
            term(g(4, 0), false, Quadratic, 2),
            term(g(3, 0), false, Linear, 3),
            term(g(-3, 0), false, Theta, 3),
            term(g(0, -3), true, Theta, 0),
            term(g(0, -3), true, Constant, 1),
        ],
        vec![
            term(g(1, 0), false, Quadratic, 3),
            term(g(0, -2), true, Linear, 1),
            term(g(0, -2), true, Constant, 2),
        ],
        vec![
            term(g(1, 0), false, Quadratic, 2),
            term(g(0, -6), true, Linear, 0),
            term(g(0, 3), true, Theta, 0),
            term(g(0, -3), true, Constant, 1),
        ],
        vec![
            term(g(10, 0), true, Quadratic, 0),
            term(g(4, 0), true, Linear, 1),
            term(g(-3, 0), true, Theta, 1),
            term(g(1, 0), true, Constant, 2),
        ],
    ];
    for terms in empty {
        out.push(Relation {
            class: GeneratorClass::Empty,
            lambdas: (2..=12).collect(),
            terms,
        });
    }
    out
}

/// Evaluates every relation on `m` for every generator of its class.
pub fn audit_relations(f: &ModuleSpec, relations: &[Relation], m: &VermaVector) -> CheckResult {
    let mut res = CheckResult::new("coefficient relations");
    if let Some(&(k, _)) = m.keys().find(|(k, _)| *k > verma::FAMILY_MAX_THETA) {
        res.fail(format!("Θ-degree {k} is outside the family view: {}", render(m)));
        return res;
    }
    let mut cache: BTreeMap<Mono, verma::Functionals<FVec>> = BTreeMap::new();
    for rel in relations {
        for l in rel.class.members() {
            let fun = cache
                .entry(l)
                .or_insert_with(|| coefficient_functionals(f, &l.indices(), m).expect("Θ-degree checked"));
            let value = rel.evaluate(fun);
            res.record(value.is_empty(), || format!("xi[{}]: {rel} fails on {}", l.label(), render(m)));
        }
    }
    res
}

/// Checks that each relation is a consequence of its conditions alone: the
/// relation's scalar rows must lie in the row space of the partial system
/// for the same generator, on vectors of Θ-degree ≤ 4.
pub fn relations_implied(f: &ModuleSpec, relations: &[Relation]) -> CheckResult {
    let mut res = CheckResult::new(format!("coefficient relations implied ({}, t = {})", f.name, f.t_scalar()));
    let layout = Layout {
        k_max: verma::FAMILY_MAX_THETA,
        dim: f.dim(),
    };
    let mut generators: Vec<(Mono, Vec<u32>)> = Vec::new();
    for rel in relations {
        for l in rel.class.members() {
            if !generators.contains(&(l, rel.lambdas.clone())) {
                generators.push((l, rel.lambdas.clone()));
            }
        }
    }
    let outcomes: Vec<Vec<(bool, String)>> = generators
        .par_iter()
        .map(|(l, lambdas)| {
            let sys = assemble_partial(f, layout.k_max, *l, lambdas);
            let mut e = Rref::new(layout.ncols());
            for r in &sys.rows {
                e.insert(r);
            }
            let mine: Vec<&Relation> = relations
                .iter()
                .filter(|r| &r.lambdas == lambdas && r.class.members().contains(l))
                .collect();
            let rows = linear_rows(layout, |m| {
                let fun = coefficient_functionals(f, &l.indices(), m).expect("Θ ≤ 4");
                let mut out = Vec::new();
                for (n, rel) in mine.iter().enumerate() {
                    for (o, v) in rel.evaluate(&fun) {
                        for (coord, c) in v {
                            out.push(((n, o, coord), c));
                        }
                    }
                }
                out
            });
            let mut verdicts: Vec<(bool, String)> = Vec::new();
            for (n, rel) in mine.iter().enumerate() {
                let ok = rows
                    .iter()
                    .filter(|((k, _, _), _)| *k == n)
                    .all(|(_, row)| e.residual(row).is_empty());
                verdicts.push((ok, format!("xi[{}]: {rel} does not follow from its conditions", l.label())));
            }
            verdicts
        })
        .collect();
    for (ok, detail) in outcomes.into_iter().flatten() {
        res.record(ok, || detail);
    }
    res
}

// ---------------------------------------------------------------------------
// Highest-weight singular vectors

/// A kernel vector of the full system (with highest-weight rows).
#[derive(Clone, Debug, Serialize)]
pub struct FoundVector {
    pub degree: u32,
    pub weight: [Gr; 3],
    pub dual_coordinates: String,
    pub original_coordinates: String,
}

#[derive(Clone, Debug)]
pub struct SingularReport {
    pub t_scalar: Gr,
    pub vectors: Vec<FoundVector>,
    pub checks: Vec<CheckResult>,
}

fn cartan_elements() -> Vec<GrassmannElement> {
    RootDatum::new()
        .cartan
        .iter()
        .map(|h| h.terms().iter().map(|(&(_, m), c)| (m, c.clone())).collect())
        .collect()
}

/// Basis of {x ∈ span(space) : h.x = λx}, with h acting at λ = 0.
fn eigen_subspace(f: &ModuleSpec, h: &GrassmannElement, value: &Gr, space: &[VermaVector]) -> Vec<VermaVector> {
    let mut rows: BTreeMap<(u32, Mono, usize), SparseVec> = BTreeMap::new();
    for (n, v) in space.iter().enumerate() {
        let mut img = element_action(f, h, v).at_zero();
        img.add_scaled(v, &-value.clone());
        for (&(k, i), x) in &img {
            for (&coord, c) in x {
                rows.entry((k, i, coord)).or_default().push((n, c.clone()));
            }
        }
    }
    let rows: Vec<SparseVec> = rows.into_values().collect();
    linalg::kernel(&rows, space.len())
        .into_iter()
        .map(|y| {
            let mut v = VermaVector::new();
            for (n, c) in y {
                v.add_scaled(&space[n], &c);
            }
            v
        })
        .collect()
}

/// Splits the span of `space` into simultaneous eigenvectors of H₁, H₂,
/// H₃. Fails when the span is not H-stable or not diagonalizable. Each
/// η_I shifts an eigenvalue of F by at most one, which bounds the search.
pub fn weight_vectors(f: &ModuleSpec, space: &[VermaVector]) -> Result<Vec<(VermaVector, [Gr; 3])>> {
    let module_weights = gmodule::weights(f)?;
    let hs = cartan_elements();
    let mut spaces: Vec<(Vec<Gr>, Vec<VermaVector>)> = vec![(Vec::new(), space.to_vec())];
    for (l, h) in hs.iter().enumerate() {
        let mut candidates: Vec<Gr> = module_weights
            .iter()
            .flat_map(|w| (-1..=1).map(move |e| &w.weight[l] + &Gr::from(e)))
            .collect();
        candidates.sort();
        candidates.dedup();
        let mut next = Vec::new();
        for (w, sp) in spaces {
            let mut found = 0;
            for value in &candidates {
                let eig = eigen_subspace(f, h, value, &sp);
                if eig.is_empty() {
                    continue;
                }
                found += eig.len();
                let mut w2 = w.clone();
                w2.push(value.clone());
                next.push((w2, eig));
            }
            if found != sp.len() {
                return Err(Error::Validation(format!(
                    "H_{} does not act diagonally on a {}-dimensional kernel piece",
                    l + 1,
                    sp.len()
                )));
            }
        }
        spaces = next;
    }
    Ok(spaces
        .into_iter()
        .flat_map(|(w, sp)| {
            let weight = [w[0].clone(), w[1].clone(), w[2].clone()];
            sp.into_iter().map(move |v| (v, weight.clone()))
        })
        .collect())
}

/// Independent check that `m` is an H-eigenvector with the given weight.
pub fn has_weight(f: &ModuleSpec, m: &VermaVector, weight: &[Gr; 3]) -> bool {
    cartan_elements()
        .iter()
        .zip(weight)
        .all(|(h, w)| element_action(f, h, m).at_zero() == m.scaled(w))
}

/// Kernel of the full system with the highest-weight rows, per t, split
/// by degree and weight.
pub fn find_singular(base: &ModuleSpec, k_max: u32, t_scan: &[Gr]) -> Result<Vec<SingularReport>> {
    gmodule::validate(base).into_result()?;
    t_scan
        .par_iter()
        .map(|c| {
            let f = base.with_t_scalar(c.clone());
            let sys = assemble(&f, k_max, true)?;
            let mut weights = CheckResult::new("weight vectors");
            let mut sound = CheckResult::new("conditions re-verified");
            let mut vectors = Vec::new();
            let mut by_degree: BTreeMap<u32, Vec<VermaVector>> = BTreeMap::new();
            for v in kernel(&sys) {
                for (d, part) in homogeneous_components(&v) {
                    by_degree.entry(d).or_default().push(part);
                }
            }
            for (degree, space) in by_degree {
                let split = match weight_vectors(&f, &space) {
                    Ok(split) => split,
                    Err(e) => {
                        weights.fail(format!("degree {degree}: {e}"));
                        continue;
                    }
                };
                for (v, w) in split {
                    weights.record(has_weight(&f, &v, &w), || format!("not of weight {w:?}: {}", render(&v)));
                    let s = satisfies_conditions(&f, &v);
                    sound.record(s.is_ok() && sys.is_solution(&v), || format!("{s:?}: {}", render(&v)));
                    vectors.push(FoundVector {
                        degree,
                        weight: w,
                        dual_coordinates: render(&v),
                        original_coordinates: render(&verma::from_dual(&v)),
                    });
                }
            }
            Ok(SingularReport {
                t_scalar: c.clone(),
                vectors,
                checks: vec![weights, sound],
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmodule::{trivial, vector};

    #[test]
    fn layout_round_trips() {
        let layout = Layout { k_max: 5, dim: 6 };
        assert_eq!(layout.ncols(), 64 * 6 * 6);
        for col in 0..layout.ncols() {
            assert_eq!(layout.column(layout.unknown(col)), col);
        }
    }

    #[test]
    fn trivial_module_small_system() {
        // only v_{∅,0}: the η_j coefficient of the λ¹ row of ξ_j reads
        // (c − 5) v = 0
        let c = Gr::from(2);
        let f = trivial(c.clone());
        let sys = assemble(&f, 0, false).unwrap();
        let col = sys.layout.column(UnknownIndex {
            k: 0,
            index: Mono::EMPTY,
            coord: 0,
        });
        let found = sys.rows.iter().zip(&sys.origins).any(|(r, o)| {
            matches!(o, RowOrigin::Action { generator, lambda: 1, theta: 0, out, .. }
                if generator.len() == 1 && *out == *generator)
                && r.iter().any(|(j, v)| *j == col && (*v == &c - &Gr::from(5) || *v == &Gr::from(5) - &c))
        });
        assert!(found);
    }

    #[test]
    fn assembly_is_deterministic() {
        let f = vector(Gr::from(3));
        let a = assemble(&f, 1, true).unwrap();
        let b = assemble(&f, 1, true).unwrap();
        assert_eq!(a.canonical_text(), b.canonical_text());
        assert!(a.rows.iter().all(|r| !r.is_empty()));
    }

    #[test]
    fn kernel_of_unconstrained_and_identity_systems() {
        let layout = Layout { k_max: 0, dim: 1 };
        let empty = ConstraintSystem {
            layout,
            rows: vec![],
            origins: vec![],
        };
        assert_eq!(kernel(&empty).len(), 64);
        let origins: Vec<RowOrigin> = (0..64)
            .map(|b| RowOrigin::Action {
                generator: Mono::EMPTY,
                lambda: 2,
                theta: 0,
                out: Mono::from_bits(b),
                coord: 0,
            })
            .collect();
        let identity = ConstraintSystem {
            layout,
            rows: (0..64).map(|c| vec![(c, Gr::ONE)]).collect(),
            origins,
        };
        assert!(kernel(&identity).is_empty());
    }

    #[test]
    fn trivial_module_kernel_is_bounded() {
        let f = trivial(Gr::ZERO);
        let report = verify_bound(&f, 3, &[Gr::ZERO, Gr::from(4)], false).unwrap();
        for e in &report.entries {
            for c in &e.checks {
                assert!(c.passed(), "{c}");
            }
        }
        // 1 ⊗ F sits at degree 0 in the original coordinates
        assert_eq!(report.entries[0].kernel_by_degree.get(&0), Some(&1));
    }

    #[test]
    fn relations_follow_from_their_conditions_trivial_module() {
        let f = trivial(Gr::from_ratio(5, 2));
        let res = relations_implied(&f, &relations());
        assert!(res.passed(), "{res}");
        assert!(res.checked >= 25);
    }

    #[test]
    fn unrelated_terms_are_not_implied() {
        let f = vector(Gr::from_ratio(5, 2));
        let mut single = relations()[4].clone();
        single.terms.push(term(Gr::ONE, false, Kind::Constant, 0));
        let res = relations_implied(&f, &[single]);
        assert_eq!((res.checked, res.failed), (6, 6));
        let empty = Relation {
            class: GeneratorClass::Empty,
            lambdas: (2..=12).collect(),
            terms: vec![term(Gr::ONE, false, Kind::Theta, 1)],
        };
        assert!(!relations_implied(&f, &[empty]).passed());
    }

    #[test]
    fn shapes() {
        assert!(matches_shape(0, &VermaVector::from([((0, Mono::STAR), FVec::new())])));
        assert!(!matches_shape(6, &VermaVector::from([((1, Mono::of(&[1, 2])), FVec::new())])));
        assert!(violates_bound(1, Mono::of(&[1, 2])));
        assert!(!violates_bound(1, Mono::of(&[1, 2, 3])));
    }
}
