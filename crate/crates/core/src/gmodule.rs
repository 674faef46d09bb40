//! Finite-dimensional g₀ = ℂt ⊕ so(6) modules given by explicit matrices.
//!
//! A module is its dimension, the scalar by which the central element t acts,
//! and one matrix per ξ_ij (i < j). Matrices are stored column-sparse since
//! they are only ever applied to sparse vectors.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::contact::{contact_bracket, xi2_pairs, ContactElement, RootDatum};
use crate::error::{Error, Result};
use crate::exactnum::{add_term, Gr, Linear};
use crate::linalg::{self, SparseVec};

/// A sparse vector of F, keyed by basis index.
pub type FVec = BTreeMap<usize, Gr>;

/// Column-sparse square matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    dim: usize,
    cols: Vec<Vec<(usize, Gr)>>,
}

impl Matrix {
    pub fn zero(dim: usize) -> Matrix {
        Matrix {
            dim,
            cols: vec![Vec::new(); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Gr {
        self.cols[col]
            .iter()
            .find(|(r, _)| *r == row)
            .map_or(Gr::ZERO, |(_, v)| v.clone())
    }

    /// `self[row][col] += v`
    pub fn add_entry(&mut self, row: usize, col: usize, v: &Gr) {
        let c = &mut self.cols[col];
        match c.iter().position(|(r, _)| *r == row) {
            Some(k) => {
                c[k].1 += v;
                if c[k].1.is_zero() {
                    c.remove(k);
                }
            }
            None if !v.is_zero() => {
                c.push((row, v.clone()));
                c.sort_by_key(|e| e.0);
            }
            None => {}
        }
    }

    pub fn apply(&self, v: &FVec) -> FVec {
        let mut out = FVec::new();
        for (&c, x) in v {
            for (r, m) in &self.cols[c] {
                add_term(&mut out, *r, m, x);
            }
        }
        out
    }

    pub fn add_scaled(&mut self, other: &Matrix, c: &Gr) {
        for (col, entries) in other.cols.iter().enumerate() {
            for (r, v) in entries {
                self.add_entry(*r, col, &(v * c));
            }
        }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zero(self.dim);
        for (col, entries) in other.cols.iter().enumerate() {
            let v: FVec = entries.iter().cloned().collect();
            for (r, x) in self.apply(&v) {
                out.add_entry(r, col, &x);
            }
        }
        out
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Gr)> {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(c, e)| e.iter().map(move |(r, v)| (*r, c, v)))
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    /// Rows of the matrix as sparse vectors.
    fn rows(&self) -> Vec<SparseVec> {
        let mut rows = vec![SparseVec::new(); self.dim];
        for (r, c, v) in self.entries() {
            rows[r].push((c, v.clone()));
        }
        for r in &mut rows {
            r.sort_by_key(|e| e.0);
        }
        rows
    }
}

/// A g₀-module F.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleSpec {
    pub name: String,
    dim: usize,
    t_scalar: Gr,
    /// Indexed like [`xi2_pairs`].
    xi: Vec<Matrix>,
}

fn pair_index(i: u8, j: u8) -> usize {
    xi2_pairs()
        .iter()
        .position(|&p| p == (i, j))
        .expect("1 <= i < j <= 6")
}

impl ModuleSpec {
    /// Builds a module from matrices for every ξ_ij, in [`xi2_pairs`] order.
    pub fn new(name: impl Into<String>, dim: usize, t_scalar: Gr, xi: Vec<Matrix>) -> Result<ModuleSpec> {
        if dim == 0 {
            return Err(Error::format("module dimension must be positive"));
        }
        if xi.len() != 15 {
            return Err(Error::format(format!("expected 15 matrices, got {}", xi.len())));
        }
        if let Some(m) = xi.iter().find(|m| m.dim != dim) {
            return Err(Error::format(format!(
                "matrix of size {} in a module of dimension {dim}",
                m.dim
            )));
        }
        Ok(ModuleSpec {
            name: name.into(),
            dim,
            t_scalar,
            xi,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn t_scalar(&self) -> &Gr {
        &self.t_scalar
    }

    pub fn with_t_scalar(&self, c: Gr) -> ModuleSpec {
        ModuleSpec {
            t_scalar: c,
            ..self.clone()
        }
    }

    /// Matrix of ξ_ij, i < j.
    pub fn xi_matrix(&self, i: u8, j: u8) -> &Matrix {
        &self.xi[pair_index(i, j)]
    }

    /// ξ_rs.v for any r, s (ξ_sr = −ξ_rs, ξ_rr = 0).
    pub fn act_xi(&self, r: u8, s: u8, v: &FVec) -> FVec {
        match r.cmp(&s) {
            std::cmp::Ordering::Equal => FVec::new(),
            std::cmp::Ordering::Less => self.xi_matrix(r, s).apply(v),
            std::cmp::Ordering::Greater => self.xi_matrix(s, r).apply(v).scaled(&-Gr::ONE),
        }
    }

    pub fn act_t(&self, v: &FVec) -> FVec {
        v.scaled(&self.t_scalar)
    }

    /// Matrix of an element of g₀ (t and the ξ_ij); `None` if it has
    /// components outside g₀.
    pub fn matrix_of(&self, e: &ContactElement) -> Option<Matrix> {
        let mut out = Matrix::zero(self.dim);
        for (&(k, m), c) in e.terms() {
            match (k, m.len()) {
                (1, 0) => {
                    for d in 0..self.dim {
                        out.add_entry(d, d, &(c * &self.t_scalar));
                    }
                }
                (0, 2) => {
                    let ix = m.indices();
                    out.add_scaled(self.xi_matrix(ix[0], ix[1]), c);
                }
                _ => return None,
            }
        }
        Some(out)
    }

    /// Action of an element of g₀ on a vector.
    pub fn act(&self, e: &ContactElement, v: &FVec) -> Option<FVec> {
        self.matrix_of(e).map(|m| m.apply(v))
    }

    /// Writes the module-spec document (one entry per line).
    pub fn to_json(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{{").unwrap();
        writeln!(s, "  \"dim\": {},", self.dim).unwrap();
        writeln!(s, "  \"t_scalar\": \"{}\",", self.t_scalar).unwrap();
        writeln!(s, "  \"entries\": [").unwrap();
        let mut lines = Vec::new();
        for (p, &(i, j)) in xi2_pairs().iter().enumerate() {
            let mut es: Vec<_> = self.xi[p].entries().collect();
            es.sort_by_key(|(r, c, _)| (*r, *c));
            for (r, c, v) in es {
                let e = FileEntry {
                    i,
                    j,
                    row: r + 1,
                    col: c + 1,
                    value: v.clone(),
                };
                lines.push(format!("    {}", serde_json::to_string(&e).expect("serializable")));
            }
        }
        writeln!(s, "{}", lines.join(",\n")).unwrap();
        writeln!(s, "  ]").unwrap();
        writeln!(s, "}}").unwrap();
        s
    }

    /// Strict parser for the module-spec document.
    pub fn from_json(name: &str, text: &str) -> Result<ModuleSpec> {
        let doc: FileDoc = serde_json::from_str(text).map_err(|e| Error::Format {
            line: Some(e.line()),
            message: e.to_string(),
        })?;
        if doc.dim == 0 {
            return Err(Error::Format {
                line: line_of(text, "\"dim\""),
                message: "dim must be positive".into(),
            });
        }
        let mut xi = vec![Matrix::zero(doc.dim); 15];
        let mut seen = std::collections::BTreeSet::new();
        for (n, e) in doc.entries.iter().enumerate() {
            let line = entry_line(text, n);
            if !(1..=6).contains(&e.i) || !(1..=6).contains(&e.j) {
                return Err(Error::Format {
                    line,
                    message: format!("entry {} has index pair ({}, {}) outside 1..=6", n + 1, e.i, e.j),
                });
            }
            if e.i >= e.j {
                return Err(Error::Format {
                    line,
                    message: format!("entry {} has index pair ({}, {}); need i < j", n + 1, e.i, e.j),
                });
            }
            if e.row == 0 || e.col == 0 || e.row > doc.dim || e.col > doc.dim {
                return Err(Error::Format {
                    line,
                    message: format!(
                        "entry {} has row/col ({}, {}) outside 1..={}",
                        n + 1,
                        e.row,
                        e.col,
                        doc.dim
                    ),
                });
            }
            if !seen.insert((e.i, e.j, e.row, e.col)) {
                return Err(Error::Format {
                    line,
                    message: format!("duplicate entry for xi[{}{}] at ({}, {})", e.i, e.j, e.row, e.col),
                });
            }
            xi[pair_index(e.i, e.j)].add_entry(e.row - 1, e.col - 1, &e.value);
        }
        ModuleSpec::new(name, doc.dim, doc.t_scalar, xi)
    }

    pub fn read(path: &Path) -> Result<ModuleSpec> {
        let text = std::fs::read_to_string(path)?;
        let name = path.display().to_string();
        ModuleSpec::from_json(&name, &text)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

fn line_of(text: &str, needle: &str) -> Option<usize> {
    text.find(needle).map(|p| text[..p].matches('\n').count() + 1)
}

/// Line of the n-th object inside the entries array (entries hold no nested
/// objects, so counting opening braces is exact).
fn entry_line(text: &str, n: usize) -> Option<usize> {
    let start = text.find("\"entries\"")?;
    let (p, _) = text[start..].match_indices('{').nth(n)?;
    let abs = start + p;
    Some(text[..abs].matches('\n').count() + 1)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FileDoc {
    dim: usize,
    t_scalar: Gr,
    entries: Vec<FileEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileEntry {
    i: u8,
    j: u8,
    row: usize,
    col: usize,
    value: Gr,
}

/// Outcome of [`validate`]: `Ok` or the first violated commutator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validation {
    pub checked: usize,
    pub failure: Option<String>,
}

impl Validation {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    pub fn into_result(self) -> Result<()> {
        match self.failure {
            None => Ok(()),
            Some(f) => Err(Error::Validation(f)),
        }
    }
}

/// Checks ρ([x, y]) = ρ(x)ρ(y) − ρ(y)ρ(x) for all pairs of ξ_ij.
pub fn validate(spec: &ModuleSpec) -> Validation {
    let pairs = xi2_pairs();
    let mut checked = 0;
    for &(i, j) in &pairs {
        for &(k, l) in &pairs {
            checked += 1;
            let br = contact_bracket(&ContactElement::xi(&[i, j]), &ContactElement::xi(&[k, l]));
            let Some(lhs) = spec.matrix_of(&br) else {
                return Validation {
                    checked,
                    failure: Some(format!("[xi[{i}{j}], xi[{k}{l}]] leaves g0")),
                };
            };
            let (a, b) = (spec.xi_matrix(i, j), spec.xi_matrix(k, l));
            let mut rhs = a.mul(b);
            rhs.add_scaled(&b.mul(a), &-Gr::ONE);
            if lhs != rhs {
                return Validation {
                    checked,
                    failure: Some(format!(
                        "rho([xi[{i}{j}], xi[{k}{l}]]) != [rho(xi[{i}{j}]), rho(xi[{k}{l}])]"
                    )),
                };
            }
        }
    }
    Validation {
        checked,
        failure: None,
    }
}

pub fn trivial(t_scalar: Gr) -> ModuleSpec {
    ModuleSpec::new("trivial", 1, t_scalar, vec![Matrix::zero(1); 15]).expect("well-formed")
}

/// ξ_ij ↦ E_ji − E_ij on ℂ⁶.
pub fn vector(t_scalar: Gr) -> ModuleSpec {
    let xi = xi2_pairs()
        .into_iter()
        .map(|(i, j)| {
            let mut m = Matrix::zero(6);
            m.add_entry(j as usize - 1, i as usize - 1, &Gr::ONE);
            m.add_entry(i as usize - 1, j as usize - 1, &-Gr::ONE);
            m
        })
        .collect();
    ModuleSpec::new("vector", 6, t_scalar, xi).expect("well-formed")
}

/// so(6) acting on itself by the contact bracket, basis ξ_ij in
/// lexicographic order.
pub fn adjoint(t_scalar: Gr) -> ModuleSpec {
    let pairs = xi2_pairs();
    let xi = pairs
        .iter()
        .map(|&(i, j)| {
            let mut m = Matrix::zero(15);
            for (col, &(k, l)) in pairs.iter().enumerate() {
                let br = contact_bracket(&ContactElement::xi(&[i, j]), &ContactElement::xi(&[k, l]));
                for (&(_, mono), c) in br.terms() {
                    let ix = mono.indices();
                    m.add_entry(pair_index(ix[0], ix[1]), col, c);
                }
            }
            m
        })
        .collect();
    ModuleSpec::new("adjoint", 15, t_scalar, xi).expect("well-formed")
}

pub fn builtin(name: &str, t_scalar: Gr) -> Result<ModuleSpec> {
    match name {
        "trivial" => Ok(trivial(t_scalar)),
        "vector" => Ok(vector(t_scalar)),
        "adjoint" => Ok(adjoint(t_scalar)),
        other => Err(Error::UnknownModule(other.to_string())),
    }
}

/// A simultaneous eigenvector of H₁, H₂, H₃.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector {
    pub vector: FVec,
    pub weight: [Gr; 3],
}

/// Matrices of H₁, H₂, H₃.
pub fn cartan_matrices(spec: &ModuleSpec) -> [Matrix; 3] {
    let rd = RootDatum::new();
    rd.cartan
        .clone()
        .map(|h| spec.matrix_of(&h).expect("Cartan elements lie in g0"))
}

/// Upper bound on |eigenvalue| via the largest absolute column sum, using
/// |re| + |im| ≥ modulus.
fn spectral_bound(m: &Matrix) -> i64 {
    let mut best = 0i64;
    for col in &m.cols {
        let mut s = malachite::Rational::from(0u32);
        for (_, v) in col {
            s += abs_q(v.re()) + abs_q(v.im());
        }
        let ceil = ceil_q(&s);
        best = best.max(ceil);
    }
    best
}

fn abs_q(q: &malachite::Rational) -> malachite::Rational {
    if *q < 0u32 {
        -q.clone()
    } else {
        q.clone()
    }
}

fn ceil_q(q: &malachite::Rational) -> i64 {
    use malachite::num::arithmetic::traits::Ceiling;
    let c = q.clone().ceiling();
    i64::try_from(&c).unwrap_or(i64::MAX / 4)
}

/// Splits the span of `basis` (an H-stable subspace) into simultaneous
/// eigenspaces of H₁, H₂, H₃. Eigenvalues are searched in ½ℤ within the
/// spectral bound; if they do not exhaust the subspace, an error names the
/// operator that failed to diagonalize.
pub fn weight_decomposition(spec: &ModuleSpec, basis: &[FVec]) -> Result<Vec<WeightVector>> {
    let hs = cartan_matrices(spec);
    let mut spaces: Vec<(Vec<Gr>, Vec<FVec>)> = vec![(Vec::new(), basis.to_vec())];
    for (l, h) in hs.iter().enumerate() {
        let bound = 2 * spectral_bound(h);
        let mut next = Vec::new();
        for (w, space) in spaces {
            if space.is_empty() {
                continue;
            }
            let mut found = 0;
            for twice in -bound..=bound {
                let lambda = Gr::from_ratio(twice, 2);
                let eig = restricted_kernel(h, &lambda, &space, spec.dim());
                if eig.is_empty() {
                    continue;
                }
                found += eig.len();
                let mut w2 = w.clone();
                w2.push(lambda);
                next.push((w2, eig));
            }
            if found != space.len() {
                return Err(Error::Validation(format!(
                    "H_{} is not diagonalizable with eigenvalues in Z/2 on a {}-dimensional subspace",
                    l + 1,
                    space.len()
                )));
            }
        }
        spaces = next;
    }
    let mut out = Vec::new();
    for (w, space) in spaces {
        let weight = [w[0].clone(), w[1].clone(), w[2].clone()];
        for v in space {
            out.push(WeightVector {
                vector: v,
                weight: weight.clone(),
            });
        }
    }
    Ok(out)
}

/// Basis of {x ∈ span(space) : (h − λ)x = 0}.
fn restricted_kernel(h: &Matrix, lambda: &Gr, space: &[FVec], dim: usize) -> Vec<FVec> {
    // columns: coefficients y_k of Σ y_k space[k]; rows: output coordinates
    let mut rows = vec![SparseVec::new(); dim];
    for (k, v) in space.iter().enumerate() {
        let mut img = h.apply(v);
        img.add_scaled(v, &-lambda.clone());
        for (r, x) in img {
            rows[r].push((k, x));
        }
    }
    linalg::kernel(&rows, space.len())
        .into_iter()
        .map(|y| {
            let mut v = FVec::new();
            for (k, c) in y {
                v.add_scaled(&space[k], &c);
            }
            v
        })
        .collect()
}

/// Standard basis of F.
pub fn standard_basis(dim: usize) -> Vec<FVec> {
    (0..dim).map(|d| FVec::from([(d, Gr::ONE)])).collect()
}

/// Weight vectors spanning all of F.
pub fn weights(spec: &ModuleSpec) -> Result<Vec<WeightVector>> {
    weight_decomposition(spec, &standard_basis(spec.dim()))
}

/// Matrices of the positive root vectors E_α, α ∈ Δ⁺.
pub fn positive_root_matrices(spec: &ModuleSpec) -> Vec<Matrix> {
    RootDatum::new()
        .positive_vectors()
        .iter()
        .map(|(_, e)| spec.matrix_of(e).expect("root vectors lie in g0"))
        .collect()
}

/// Kernel of all E_α, α ∈ Δ⁺, split into weight vectors.
pub fn highest_weight_vectors(spec: &ModuleSpec) -> Result<Vec<WeightVector>> {
    let mut rows = Vec::new();
    for m in positive_root_matrices(spec) {
        rows.extend(m.rows().into_iter().filter(|r| !r.is_empty()));
    }
    let ker: Vec<FVec> = linalg::kernel(&rows, spec.dim())
        .into_iter()
        .map(|v| v.into_iter().collect())
        .collect();
    weight_decomposition(spec, &ker)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(a: i64, b: i64, c: i64) -> [Gr; 3] {
        [Gr::from(a), Gr::from(b), Gr::from(c)]
    }

    #[test]
    fn builtins_validate() {
        for c in [Gr::ZERO, Gr::from(5), Gr::from_parts(1, 2, 1, 3)] {
            assert!(validate(&trivial(c.clone())).passed());
            assert!(validate(&vector(c.clone())).passed());
            assert!(validate(&adjoint(c.clone())).passed());
        }
        assert_eq!(builtin("trivial", Gr::ZERO).unwrap().dim(), 1);
        let v = builtin("vector", Gr::from(5)).unwrap();
        assert_eq!((v.dim(), v.t_scalar().clone()), (6, Gr::from(5)));
        assert_eq!(builtin("adjoint", Gr::ONE).unwrap().dim(), 15);
        assert!(matches!(builtin("spin", Gr::ZERO), Err(Error::UnknownModule(_))));
    }

    #[test]
    fn perturbed_vector_module_fails_with_named_commutator() {
        let v = vector(Gr::ZERO);
        let mut xi = v.xi.clone();
        xi[pair_index(1, 2)].add_entry(1, 0, &Gr::from(-2)); // flip one sign
        let bad = ModuleSpec::new("bad", 6, Gr::ZERO, xi).unwrap();
        let r = validate(&bad);
        assert!(!r.passed());
        assert!(r.failure.unwrap().contains("xi[12]"));
    }

    #[test]
    fn dimension_mismatch_is_a_format_error() {
        let r = ModuleSpec::new("x", 2, Gr::ZERO, vec![Matrix::zero(3); 15]);
        assert!(matches!(r, Err(Error::Format { .. })));
    }

    #[test]
    fn highest_weights_of_builtins() {
        let hw = highest_weight_vectors(&trivial(Gr::ZERO)).unwrap();
        assert_eq!(hw.len(), 1);
        assert_eq!(hw[0].weight, w(0, 0, 0));
        let hw = highest_weight_vectors(&vector(Gr::ZERO)).unwrap();
        assert_eq!(hw.len(), 1);
        assert_eq!(hw[0].weight, w(1, 0, 0));
        let hw = highest_weight_vectors(&adjoint(Gr::ZERO)).unwrap();
        assert_eq!(hw.len(), 1);
        assert_eq!(hw[0].weight, w(1, 1, 0));
    }

    #[test]
    fn vector_module_weights_are_plus_minus_epsilons() {
        let spec = vector(Gr::ZERO);
        let mut ws: Vec<[Gr; 3]> = weights(&spec).unwrap().into_iter().map(|x| x.weight).collect();
        ws.sort();
        let mut expect = vec![
            w(1, 0, 0),
            w(-1, 0, 0),
            w(0, 1, 0),
            w(0, -1, 0),
            w(0, 0, 1),
            w(0, 0, -1),
        ];
        expect.sort();
        assert_eq!(ws, expect);
        let hs = cartan_matrices(&spec);
        for x in weights(&spec).unwrap() {
            for l in 0..3 {
                assert_eq!(hs[l].apply(&x.vector), x.vector.scaled(&x.weight[l]));
            }
        }
    }

    #[test]
    fn adjoint_weights_are_roots_and_zeros() {
        let ws = weights(&adjoint(Gr::ZERO)).unwrap();
        assert_eq!(ws.len(), 15);
        let zeros = ws.iter().filter(|x| x.weight == w(0, 0, 0)).count();
        assert_eq!(zeros, 3);
    }

    #[test]
    fn json_round_trip() {
        for spec in [trivial(Gr::from(3)), vector(Gr::from_parts(1, 2, -1, 1)), adjoint(Gr::ZERO)] {
            let text = spec.to_json();
            let back = ModuleSpec::from_json(&spec.name, &text).unwrap();
            assert_eq!(back, spec);
        }
    }

    #[test]
    fn strict_parser_rejects_bad_documents() {
        let bad_field = "{\"dim\": 1, \"t_scalar\": \"0\", \"entries\": [], \"extra\": 1}";
        assert!(matches!(
            ModuleSpec::from_json("x", bad_field),
            Err(Error::Format { line: Some(1), .. })
        ));
        let bad_order = "{\n \"dim\": 2,\n \"t_scalar\": \"0\",\n \"entries\": [\n  {\"i\": 2, \"j\": 1, \"row\": 1, \"col\": 1, \"value\": \"1\"}\n ]\n}";
        match ModuleSpec::from_json("x", bad_order) {
            Err(Error::Format { line: Some(5), message }) => assert!(message.contains("i < j"), "{message}"),
            other => panic!("{other:?}"),
        }
        let bad_range = "{\n \"dim\": 2,\n \"t_scalar\": \"0\",\n \"entries\": [\n  {\"i\": 1, \"j\": 2, \"row\": 1, \"col\": 1, \"value\": \"1\"},\n  {\"i\": 1, \"j\": 7, \"row\": 1, \"col\": 1, \"value\": \"1\"}\n ]\n}";
        assert!(matches!(
            ModuleSpec::from_json("x", bad_range),
            Err(Error::Format { line: Some(6), .. })
        ));
        let bad_row = "{\n \"dim\": 2,\n \"t_scalar\": \"0\",\n \"entries\": [\n  {\"i\": 1, \"j\": 2, \"row\": 3, \"col\": 1, \"value\": \"1\"}\n ]\n}";
        assert!(matches!(
            ModuleSpec::from_json("x", bad_row),
            Err(Error::Format { line: Some(5), .. })
        ));
        let bad_value = "{\"dim\": 1, \"t_scalar\": \"1+2i\", \"entries\": []}";
        assert!(ModuleSpec::from_json("x", bad_value).is_err());
    }
}
