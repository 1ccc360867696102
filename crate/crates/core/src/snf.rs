//! Smith normal form over the integers.
//!
//! Pivot rule: a nonzero entry of minimal absolute value in the active
//! submatrix, ties broken by lowest row then lowest column. The pivot column
//! is cleared by row operations and the pivot row by column operations, both
//! with nearest-integer quotients; a nonzero remainder restarts the pivot
//! search. Afterwards pivots are moved to the diagonal and a pass of 2×2
//! Bézout transforms enforces the divisibility chain.

use std::collections::BTreeSet;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::matrix::{axpy, lincomb, sparse_get, Integer, IntegerMatrix, SparseVec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub rows: usize,
    pub cols: usize,
    /// Nonzero diagonal entries `d_1 | d_2 | …`, all positive.
    pub diagonal: Vec<Integer>,
    pub u: IntegerMatrix,
    pub u_inv: IntegerMatrix,
    pub v: IntegerMatrix,
    pub v_inv: IntegerMatrix,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    /// Some integer solution of `A·x = b`, if one exists.
    pub fn solve(&self, b: &[Integer]) -> Option<Vec<Integer>> {
        assert_eq!(b.len(), self.rows);
        let ub = self.u.mul_vec(b);
        let mut y = vec![Integer::zero(); self.cols];
        for (i, c) in ub.iter().enumerate() {
            if i < self.diagonal.len() {
                let (q, r) = c.div_rem(&self.diagonal[i]);
                if !r.is_zero() {
                    return None;
                }
                y[i] = q;
            } else if !c.is_zero() {
                return None;
            }
        }
        Some(self.v.mul_vec(&y))
    }

    /// `S` as a matrix.
    pub fn s(&self) -> IntegerMatrix {
        IntegerMatrix::from_triplets(
            self.rows,
            self.cols,
            self.diagonal.iter().enumerate().map(|(i, d)| (i, i, d.clone())),
        )
    }
}

/// `round(a / b)`, ties towards +∞.
pub fn nearest_quotient(a: &Integer, b: &Integer) -> Integer {
    let (a, b) = if b.is_negative() { (-a, -b) } else { (a.clone(), b.clone()) };
    (Integer::from(2) * a + &b).div_floor(&(Integer::from(2) * b))
}

struct Transforms {
    u: Vec<SparseVec>,
    u_inv_t: Vec<SparseVec>,
    v_t: Vec<SparseVec>,
    v_inv: Vec<SparseVec>,
}

fn identity_rows(n: usize) -> Vec<SparseVec> {
    (0..n).map(|i| vec![(i, Integer::one())]).collect()
}

impl Transforms {
    fn new(rows: usize, cols: usize) -> Self {
        Transforms {
            u: identity_rows(rows),
            u_inv_t: identity_rows(rows),
            v_t: identity_rows(cols),
            v_inv: identity_rows(cols),
        }
    }

    /// row_r ← row_r − k·row_p
    fn row_op(&mut self, r: usize, p: usize, k: &Integer) {
        self.u[r] = axpy(&self.u[r], &-k, &self.u[p]);
        self.u_inv_t[p] = axpy(&self.u_inv_t[p], k, &self.u_inv_t[r]);
    }

    /// col_c ← col_c − k·col_q
    fn col_op(&mut self, c: usize, q: usize, k: &Integer) {
        self.v_t[c] = axpy(&self.v_t[c], &-k, &self.v_t[q]);
        self.v_inv[q] = axpy(&self.v_inv[q], k, &self.v_inv[c]);
    }

    fn negate_row(&mut self, r: usize) {
        for (_, v) in self.u[r].iter_mut() {
            *v = -&*v;
        }
        for (_, v) in self.u_inv_t[r].iter_mut() {
            *v = -&*v;
        }
    }
}

struct Elimination {
    rows: Vec<SparseVec>,
    col_index: Vec<BTreeSet<usize>>,
    row_done: Vec<bool>,
    pivots: Vec<(usize, usize, Integer)>,
}

impl Elimination {
    fn new(a: &IntegerMatrix) -> Self {
        let rows = a.row_data().to_vec();
        let mut col_index = vec![BTreeSet::new(); a.cols()];
        for (i, r) in rows.iter().enumerate() {
            for (j, _) in r {
                col_index[*j].insert(i);
            }
        }
        Elimination { rows, col_index, row_done: vec![false; a.rows()], pivots: Vec::new() }
    }

    fn find_pivot(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, &Integer)> = None;
        for (i, r) in self.rows.iter().enumerate() {
            if self.row_done[i] {
                continue;
            }
            for (j, v) in r {
                if v.is_one() || (-v).is_one() {
                    return Some((i, *j));
                }
                match best {
                    Some((_, _, b)) if b.magnitude() <= v.magnitude() => {}
                    _ => best = Some((i, *j, v)),
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    fn set_row(&mut self, r: usize, new: SparseVec) {
        for (j, _) in &self.rows[r] {
            self.col_index[*j].remove(&r);
        }
        for (j, _) in &new {
            self.col_index[*j].insert(r);
        }
        self.rows[r] = new;
    }

    /// Returns true when column `q` is clear apart from the pivot.
    fn clear_column(&mut self, p: usize, q: usize, t: &mut Option<Transforms>) -> bool {
        let piv = sparse_get(&self.rows[p], q).expect("pivot entry").clone();
        let targets: Vec<usize> = self.col_index[q].iter().copied().filter(|&r| r != p).collect();
        let mut clean = true;
        for r in targets {
            let a = sparse_get(&self.rows[r], q).expect("indexed entry").clone();
            let k = nearest_quotient(&a, &piv);
            if !k.is_zero() {
                let new = axpy(&self.rows[r], &-&k, &self.rows[p]);
                self.set_row(r, new);
                if let Some(t) = t.as_mut() {
                    t.row_op(r, p, &k);
                }
            }
            if sparse_get(&self.rows[r], q).is_some() {
                clean = false;
            }
        }
        clean
    }

    /// Column `q` must already be clear. Returns true when row `p` is clear.
    fn clear_row(&mut self, p: usize, q: usize, t: &mut Option<Transforms>) -> bool {
        let piv = sparse_get(&self.rows[p], q).expect("pivot entry").clone();
        let mut new = Vec::with_capacity(1);
        let mut clean = true;
        for (c, a) in &self.rows[p] {
            if *c == q {
                new.push((q, piv.clone()));
                continue;
            }
            let k = nearest_quotient(a, &piv);
            let rem = a - &k * &piv;
            if !k.is_zero() {
                if let Some(t) = t.as_mut() {
                    t.col_op(*c, q, &k);
                }
            }
            if !rem.is_zero() {
                clean = false;
                new.push((*c, rem));
            }
        }
        self.set_row(p, new);
        clean
    }

    fn run(&mut self, t: &mut Option<Transforms>) {
        while let Some((p, q)) = self.find_pivot() {
            if !self.clear_column(p, q, t) {
                continue;
            }
            if !self.clear_row(p, q, t) {
                continue;
            }
            let piv = sparse_get(&self.rows[p], q).expect("pivot entry").clone();
            self.row_done[p] = true;
            self.pivots.push((p, q, piv));
        }
    }
}

/// Bring `(a, b)` on positions `i < j` to `(gcd, lcm)`.
fn bezout_fix(diag: &mut [Integer], i: usize, j: usize, t: &mut Option<Transforms>) {
    let (a, b) = (diag[i].clone(), diag[j].clone());
    if b.is_multiple_of(&a) {
        return;
    }
    let e = a.extended_gcd(&b);
    let (g, s, tt) = (e.gcd, e.x, e.y);
    let alpha = &a / &g;
    let beta = &b / &g;
    if let Some(tr) = t.as_mut() {
        let (ui, uj) = (tr.u[i].clone(), tr.u[j].clone());
        tr.u[i] = lincomb(&s, &ui, &tt, &uj);
        tr.u[j] = lincomb(&-&beta, &ui, &alpha, &uj);
        let (wi, wj) = (tr.u_inv_t[i].clone(), tr.u_inv_t[j].clone());
        tr.u_inv_t[i] = lincomb(&alpha, &wi, &beta, &wj);
        tr.u_inv_t[j] = lincomb(&-&tt, &wi, &s, &wj);
        let (vi, vj) = (tr.v_t[i].clone(), tr.v_t[j].clone());
        tr.v_t[i] = lincomb(&Integer::one(), &vi, &Integer::one(), &vj);
        tr.v_t[j] = lincomb(&-(&tt * &beta), &vi, &(&s * &alpha), &vj);
        let (xi, xj) = (tr.v_inv[i].clone(), tr.v_inv[j].clone());
        tr.v_inv[i] = lincomb(&(&s * &alpha), &xi, &(&tt * &beta), &xj);
        tr.v_inv[j] = lincomb(&-Integer::one(), &xi, &Integer::one(), &xj);
    }
    diag[j] = &a * &beta;
    diag[i] = g;
}

fn permute<T: Clone>(v: &[T], order: &[usize]) -> Vec<T> {
    order.iter().map(|&i| v[i].clone()).collect()
}

fn completed_order(first: &[usize], n: usize) -> Vec<usize> {
    let mut used = vec![false; n];
    for &i in first {
        used[i] = true;
    }
    let mut order = first.to_vec();
    order.extend((0..n).filter(|&i| !used[i]));
    order
}

fn finish(rows: usize, cols: usize, pivots: Vec<(usize, usize, Integer)>, mut t: Option<Transforms>) -> (Vec<Integer>, Option<Transforms>) {
    let row_order = completed_order(&pivots.iter().map(|p| p.0).collect::<Vec<_>>(), rows);
    let col_order = completed_order(&pivots.iter().map(|p| p.1).collect::<Vec<_>>(), cols);
    let mut diag: Vec<Integer> = pivots.into_iter().map(|p| p.2).collect();
    if let Some(tr) = t.as_mut() {
        tr.u = permute(&tr.u, &row_order);
        tr.u_inv_t = permute(&tr.u_inv_t, &row_order);
        tr.v_t = permute(&tr.v_t, &col_order);
        tr.v_inv = permute(&tr.v_inv, &col_order);
    }
    for i in 0..diag.len() {
        if diag[i].is_negative() {
            diag[i] = -&diag[i];
            if let Some(tr) = t.as_mut() {
                tr.negate_row(i);
            }
        }
    }
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            bezout_fix(&mut diag, i, j, &mut t);
        }
    }
    (diag, t)
}

/// Full Smith normal form `U·A·V = S` with both transforms and inverses.
pub fn smith_normal_form(a: &IntegerMatrix) -> SnfResult {
    let (rows, cols) = a.shape();
    let mut e = Elimination::new(a);
    let mut t = Some(Transforms::new(rows, cols));
    e.run(&mut t);
    let (diagonal, t) = finish(rows, cols, std::mem::take(&mut e.pivots), t);
    let t = t.expect("transforms tracked");
    SnfResult {
        rows,
        cols,
        diagonal,
        u: IntegerMatrix::from_rows(rows, t.u),
        u_inv: IntegerMatrix::from_rows(rows, t.u_inv_t).transpose(),
        v: IntegerMatrix::from_rows(cols, t.v_t).transpose(),
        v_inv: IntegerMatrix::from_rows(cols, t.v_inv),
    }
}

/// Invariant factors only (no transforms).
pub fn invariant_factors(a: &IntegerMatrix) -> Vec<Integer> {
    let mut e = Elimination::new(a);
    let mut t = None;
    e.run(&mut t);
    finish(a.rows(), a.cols(), std::mem::take(&mut e.pivots), t).0
}

/// Rank over the integers.
pub fn rank(a: &IntegerMatrix) -> usize {
    invariant_factors(a).len()
}
