//! Exact sparse linear algebra over ℚ(i).
//!
//! Rows enter as sparse vectors of Gaussian rationals, are scaled to primitive
//! Gaussian-integer rows, and are eliminated fraction-free: a reduction step
//! is `r ← p_c·r − r_c·p` followed by division by the integer content, so
//! no rational arithmetic (and no gcd per operation) happens inside the loop.
//! The echelon form is kept fully reduced, which makes kernel extraction a
//! read-off. Pivots are chosen Markowitz-style: among the columns of the new
//! row, the one occurring in the fewest stored rows.

use std::collections::BTreeSet;

use malachite::num::arithmetic::traits::{DivExact, Gcd, Lcm};
use malachite::num::basic::traits::{One, Zero};
use malachite::{Integer, Natural, Rational};

use crate::exactnum::Gr;

/// A sparse vector: strictly increasing column indices, nonzero values.
pub type SparseVec = Vec<(usize, Gr)>;

/// Builds a sparse vector from unsorted entries, summing duplicates and
/// dropping zeros.
pub fn sparse_from(entries: impl IntoIterator<Item = (usize, Gr)>) -> SparseVec {
    let mut map = std::collections::BTreeMap::new();
    for (c, v) in entries {
        crate::exactnum::add_term(&mut map, c, &v, &Gr::ONE);
    }
    map.into_iter().collect()
}

/// Σ row_j · x_j for a dense `x`.
pub fn dot(row: &[(usize, Gr)], x: &[Gr]) -> Gr {
    let mut acc = Gr::ZERO;
    for (c, v) in row {
        if !x[*c].is_zero() {
            acc.add_mul(v, &x[*c]);
        }
    }
    acc
}

/// Σ row_j · x_j for a sparse `x`.
pub fn dot_sparse(row: &[(usize, Gr)], x: &[(usize, Gr)]) -> Gr {
    let mut acc = Gr::ZERO;
    let (mut a, mut b) = (0, 0);
    while a < row.len() && b < x.len() {
        match row[a].0.cmp(&x[b].0) {
            std::cmp::Ordering::Less => a += 1,
            std::cmp::Ordering::Greater => b += 1,
            std::cmp::Ordering::Equal => {
                acc.add_mul(&row[a].1, &x[b].1);
                a += 1;
                b += 1;
            }
        }
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct GInt {
    re: Integer,
    im: Integer,
}

impl GInt {
    fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    fn mul(&self, o: &GInt) -> GInt {
        GInt {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    /// a·x − b·y
    fn cross(a: &GInt, x: &GInt, b: &GInt, y: &GInt) -> GInt {
        let p = a.mul(x);
        let q = b.mul(y);
        GInt {
            re: p.re - q.re,
            im: p.im - q.im,
        }
    }

    fn to_gr(&self) -> Gr {
        Gr::new(Rational::from(&self.re), Rational::from(&self.im))
    }

    fn neg(&self) -> GInt {
        GInt {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

type IRow = Vec<(usize, GInt)>;

/// Scales a ℚ(i) row to a primitive ℤ[i] row.
fn integerize(row: &[(usize, Gr)]) -> IRow {
    let mut den = Natural::ONE;
    for (_, v) in row {
        den = den.lcm(v.re().denominator_ref());
        den = den.lcm(v.im().denominator_ref());
    }
    let den = Rational::from(den);
    let to_int = |q: &Rational| {
        let scaled = q * &den;
        debug_assert_eq!(*scaled.denominator_ref(), 1u32);
        Integer::from_sign_and_abs(scaled >= 0u32, scaled.into_numerator())
    };
    let mut out: IRow = row
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(c, v)| {
            (
                *c,
                GInt {
                    re: to_int(v.re()),
                    im: to_int(v.im()),
                },
            )
        })
        .collect();
    make_primitive(&mut out);
    out
}

fn make_primitive(row: &mut IRow) {
    let mut g = Natural::ZERO;
    for (_, v) in row.iter() {
        g = g.gcd(v.re.unsigned_abs_ref());
        g = g.gcd(v.im.unsigned_abs_ref());
        if g == 1u32 {
            return;
        }
    }
    if g == 0u32 {
        return;
    }
    let g = Integer::from(g);
    for (_, v) in row.iter_mut() {
        v.re = (&v.re).div_exact(&g);
        v.im = (&v.im).div_exact(&g);
    }
}

/// `a·x − b·y` on sparse rows.
fn combine(a: &GInt, x: &IRow, b: &GInt, y: &IRow) -> IRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            let v = a.mul(&x[i].1);
            out.push((x[i].0, v));
            i += 1;
        } else if take_y {
            let v = b.mul(&y[j].1).neg();
            out.push((y[j].0, v));
            j += 1;
        } else {
            let v = GInt::cross(a, &x[i].1, b, &y[j].1);
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn lookup(row: &IRow, c: usize) -> Option<&GInt> {
    row.binary_search_by_key(&c, |e| e.0).ok().map(|k| &row[k].1)
}

/// Incrementally maintained reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Rref {
    ncols: usize,
    rows: Vec<IRow>,
    pivot_col: Vec<usize>,
    pivot_of_col: Vec<Option<usize>>,
    /// For every column, the stored rows with a nonzero entry there.
    col_rows: Vec<BTreeSet<usize>>,
}

impl Rref {
    pub fn new(ncols: usize) -> Rref {
        Rref {
            ncols,
            rows: Vec::new(),
            pivot_col: Vec::new(),
            pivot_of_col: vec![None; ncols],
            col_rows: vec![BTreeSet::new(); ncols],
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ncols
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        let mut v = self.pivot_col.clone();
        v.sort_unstable();
        v
    }

    fn reduce_int(&self, mut r: IRow) -> IRow {
        let pivots: Vec<(usize, usize)> = r
            .iter()
            .filter_map(|(c, _)| self.pivot_of_col[*c].map(|p| (*c, p)))
            .collect();
        for (c, p) in pivots {
            let Some(rc) = lookup(&r, c).cloned() else {
                continue;
            };
            let prow = &self.rows[p];
            let pc = lookup(prow, c).expect("pivot entry");
            r = combine(pc, &r, &rc, prow);
        }
        make_primitive(&mut r);
        r
    }

    /// Adds a row; returns whether the rank increased.
    pub fn insert(&mut self, row: &[(usize, Gr)]) -> bool {
        if self.is_full() {
            return false;
        }
        let r = self.reduce_int(integerize(row));
        if r.is_empty() {
            return false;
        }
        let (c, _) = r
            .iter()
            .min_by_key(|(c, _)| (self.col_rows[*c].len(), *c))
            .expect("nonempty");
        let c = *c;
        let rc = lookup(&r, c).expect("entry").clone();
        let touched: Vec<usize> = self.col_rows[c].iter().copied().collect();
        for p in touched {
            let old = std::mem::take(&mut self.rows[p]);
            let pc = lookup(&old, c).expect("entry").clone();
            let mut new = combine(&rc, &old, &pc, &r);
            make_primitive(&mut new);
            for (k, _) in &old {
                self.col_rows[*k].remove(&p);
            }
            for (k, _) in &new {
                self.col_rows[*k].insert(p);
            }
            self.rows[p] = new;
        }
        let idx = self.rows.len();
        for (k, _) in &r {
            self.col_rows[*k].insert(idx);
        }
        self.rows.push(r);
        self.pivot_col.push(c);
        self.pivot_of_col[c] = Some(idx);
        true
    }

    /// The residual of `row` modulo the row space: zero iff `row` lies in it.
    pub fn residual(&self, row: &[(usize, Gr)]) -> SparseVec {
        let mut r: Vec<(usize, Gr)> = row.iter().filter(|(_, v)| !v.is_zero()).cloned().collect();
        for (idx, p) in self.rows.iter().enumerate() {
            let c = self.pivot_col[idx];
            let Ok(k) = r.binary_search_by_key(&c, |e| e.0) else {
                continue;
            };
            let factor = r[k].1.checked_div(&lookup(p, c).expect("pivot").to_gr()).expect("nonzero pivot");
            let prow: SparseVec = p.iter().map(|(j, v)| (*j, v.to_gr())).collect();
            r = axpy(&r, &prow, &(-factor));
        }
        r
    }

    /// Basis of {x : row·x = 0 for every inserted row}, one vector per free
    /// column, in increasing free-column order.
    pub fn kernel(&self) -> Vec<SparseVec> {
        let mut out = Vec::new();
        for f in 0..self.ncols {
            if self.pivot_of_col[f].is_some() {
                continue;
            }
            let mut v = vec![(f, Gr::ONE)];
            for &p in &self.col_rows[f] {
                let row = &self.rows[p];
                let pc = self.pivot_col[p];
                let num = lookup(row, f).expect("entry").to_gr();
                let den = lookup(row, pc).expect("pivot").to_gr();
                v.push((pc, -num.checked_div(&den).expect("nonzero pivot")));
            }
            v.sort_by_key(|e| e.0);
            out.push(v);
        }
        out
    }

    /// Solves for the column designated as right-hand side: treating column
    /// `rhs` as the constant term of `Σ a_j x_j = b`, returns a particular
    /// solution with free variables set to zero, or `None` if inconsistent.
    pub fn particular_solution(&self, rhs: usize) -> Option<Vec<Gr>> {
        if self.pivot_of_col[rhs].is_some() {
            return None;
        }
        let mut x = vec![Gr::ZERO; self.ncols];
        for (idx, row) in self.rows.iter().enumerate() {
            let pc = self.pivot_col[idx];
            if let Some(b) = lookup(row, rhs) {
                let den = lookup(row, pc).expect("pivot").to_gr();
                x[pc] = b.to_gr().checked_div(&den).expect("nonzero pivot");
            }
        }
        x.truncate(rhs);
        Some(x)
    }
}

/// `x + c·y` on sparse vectors.
pub fn axpy(x: &[(usize, Gr)], y: &[(usize, Gr)], c: &Gr) -> SparseVec {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        if j >= y.len() || (i < x.len() && x[i].0 < y[j].0) {
            out.push(x[i].clone());
            i += 1;
        } else if i >= x.len() || y[j].0 < x[i].0 {
            out.push((y[j].0, &y[j].1 * c));
            j += 1;
        } else {
            let mut v = x[i].1.clone();
            v.add_mul(&y[j].1, c);
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Rank of a set of rows.
pub fn rank(rows: &[SparseVec], ncols: usize) -> usize {
    let mut e = Rref::new(ncols);
    for r in rows {
        e.insert(r);
        if e.is_full() {
            break;
        }
    }
    e.rank()
}

/// Kernel basis of a row system.
pub fn kernel(rows: &[SparseVec], ncols: usize) -> Vec<SparseVec> {
    let mut e = Rref::new(ncols);
    for r in rows {
        e.insert(r);
        if e.is_full() {
            break;
        }
    }
    e.kernel()
}

/// Solves `Σ_j a_{ij} x_j = b_i`; `None` when inconsistent.
pub fn solve(rows: &[SparseVec], rhs: &[Gr], ncols: usize) -> Option<Vec<Gr>> {
    let mut e = Rref::new(ncols + 1);
    for (r, b) in rows.iter().zip(rhs) {
        let mut aug = r.clone();
        if !b.is_zero() {
            aug.push((ncols, b.clone()));
        }
        e.insert(&aug);
    }
    e.particular_solution(ncols)
}

/// Columns grouped into connected components of the row/column incidence
/// graph, each with the indices of the rows touching it. Isolated columns
/// form singleton components with no rows; empty rows are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub cols: Vec<usize>,
    pub rows: Vec<usize>,
}

pub fn blocks(rows: &[SparseVec], ncols: usize) -> Vec<Block> {
    let mut parent: Vec<usize> = (0..ncols).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for r in rows {
        if let Some((first, _)) = r.first() {
            let mut a = find(&mut parent, *first);
            for (c, _) in &r[1..] {
                let b = find(&mut parent, *c);
                if a != b {
                    let (lo, hi) = (a.min(b), a.max(b));
                    parent[hi] = lo;
                    a = lo;
                }
            }
        }
    }
    let mut by_root: std::collections::BTreeMap<usize, Block> = Default::default();
    for c in 0..ncols {
        let root = find(&mut parent, c);
        by_root
            .entry(root)
            .or_insert_with(|| Block {
                cols: Vec::new(),
                rows: Vec::new(),
            })
            .cols
            .push(c);
    }
    for (i, r) in rows.iter().enumerate() {
        if let Some((first, _)) = r.first() {
            let root = find(&mut parent, *first);
            by_root.get_mut(&root).expect("root").rows.push(i);
        }
    }
    by_root.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn g(n: i64) -> Gr {
        Gr::from(n)
    }

    fn residual_zero(rows: &[SparseVec], v: &SparseVec) -> bool {
        rows.iter().all(|r| dot_sparse(r, v).is_zero())
    }

    #[test]
    fn empty_system_kernel_is_everything() {
        let k = kernel(&[], 4);
        assert_eq!(k.len(), 4);
    }

    #[test]
    fn identity_has_trivial_kernel() {
        let rows: Vec<SparseVec> = (0..5).map(|i| vec![(i, Gr::ONE)]).collect();
        assert!(kernel(&rows, 5).is_empty());
        assert_eq!(rank(&rows, 5), 5);
    }

    #[test]
    fn rank_two_system() {
        // r3 = r1 + i·r2
        let r1 = vec![(0, g(1)), (1, g(2)), (3, Gr::from_ratio(1, 3))];
        let r2 = vec![(1, g(1)), (2, g(-1))];
        let r3 = axpy(&r1, &r2, &Gr::I);
        let rows = vec![r1, r2, r3];
        let k = kernel(&rows, 4);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(residual_zero(&rows, v));
        }
        assert_eq!(rank(&rows, 4), 2);
    }

    #[test]
    fn random_systems_back_multiply_to_zero() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..40 {
            let ncols = rng.gen_range(1..12);
            let nrows = rng.gen_range(0..12);
            let rows: Vec<SparseVec> = (0..nrows)
                .map(|_| {
                    let cols: Vec<usize> = (0..ncols).filter(|_| rng.gen_bool(0.4)).collect();
                    sparse_from(cols.into_iter().map(|c| {
                        (
                            c,
                            Gr::from_parts(
                                rng.gen_range(-3..4),
                                rng.gen_range(1..4),
                                rng.gen_range(-2..3),
                                rng.gen_range(1..3),
                            ),
                        )
                    }))
                })
                .collect();
            let k = kernel(&rows, ncols);
            assert_eq!(k.len() + rank(&rows, ncols), ncols);
            for v in &k {
                assert!(residual_zero(&rows, v));
            }
            // each row lies in its own row space
            let mut e = Rref::new(ncols);
            for r in &rows {
                e.insert(r);
            }
            for r in &rows {
                assert!(e.residual(r).is_empty());
            }
        }
    }

    #[test]
    fn solve_and_inconsistency() {
        // x + y = 1, x − y = i
        let rows = vec![vec![(0, g(1)), (1, g(1))], vec![(0, g(1)), (1, g(-1))]];
        let x = solve(&rows, &[g(1), Gr::I], 2).unwrap();
        assert_eq!(x[0], Gr::from_parts(1, 2, 1, 2));
        assert_eq!(x[1], Gr::from_parts(1, 2, -1, 2));
        let rows = vec![vec![(0, g(1))], vec![(0, g(2))]];
        assert!(solve(&rows, &[g(1), g(1)], 1).is_none());
    }

    #[test]
    fn residual_certifies_non_membership() {
        let mut e = Rref::new(3);
        e.insert(&[(0, g(1)), (1, g(1))]);
        let r = e.residual(&[(0, g(1))]);
        assert!(!r.is_empty());
        assert!(e.residual(&[(0, g(2)), (1, g(2))]).is_empty());
    }

    #[test]
    fn blocks_split_components() {
        let rows = vec![
            vec![(0, g(1)), (2, g(1))],
            vec![(3, g(1))],
            vec![(2, g(1)), (4, g(1))],
            vec![],
        ];
        let b = blocks(&rows, 6);
        assert_eq!(
            b,
            vec![
                Block { cols: vec![0, 2, 4], rows: vec![0, 2] },
                Block { cols: vec![1], rows: vec![] },
                Block { cols: vec![3], rows: vec![1] },
                Block { cols: vec![5], rows: vec![] },
            ]
        );
    }
}
