//! Oracles and generators shared by the integration tests. Nothing here
//! calls into the algorithms it is used to check.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use plhm::corpus;
use plhm::{IntegerMatrix, SimplicialComplex};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn dense(m: &IntegerMatrix) -> Vec<Vec<BigInt>> {
    m.to_dense()
}

pub fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>], inner: usize, cols: usize) -> Vec<Vec<BigInt>> {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(BigInt::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

pub fn is_zero_dense(m: &[Vec<BigInt>]) -> bool {
    m.iter().all(|r| r.iter().all(|x| x.is_zero()))
}

pub fn is_identity(m: &[Vec<BigInt>]) -> bool {
    m.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, x)| *x == BigInt::from((i == j) as i32)))
}

/// Fraction-free Gaussian elimination.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors from gcds of minors: `d_k = D_k / D_{k−1}`.
pub fn invariant_factors_by_minors(a: &[Vec<BigInt>], rows: usize, cols: usize) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut prev = BigInt::one();
    for k in 1..=rows.min(cols) {
        let mut g = BigInt::zero();
        for r in subsets(rows, k) {
            for c in subsets(cols, k) {
                let minor: Vec<Vec<BigInt>> = r.iter().map(|&i| c.iter().map(|&j| a[i][j].clone()).collect()).collect();
                g = g.gcd(&determinant(&minor));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

/// `E8` lattice from its Dynkin diagram: a chain of seven nodes with an
/// eighth attached to the third.
pub fn e8_gram() -> Vec<Vec<BigInt>> {
    let mut m = vec![vec![BigInt::zero(); 8]; 8];
    let mut bond = |a: usize, b: usize| {
        m[a][b] = BigInt::from(-1);
        m[b][a] = BigInt::from(-1);
    };
    for i in 0..6 {
        bond(i, i + 1);
    }
    bond(2, 7);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigInt::from(2);
    }
    m
}

/// Signature of a symmetric matrix whose leading principal minors are all
/// nonzero, from the sign changes in the minor sequence (Jacobi).
pub fn signature_by_minors(m: &[Vec<BigInt>]) -> Option<i64> {
    let mut prev = BigInt::one();
    let mut sig = 0;
    for k in 1..=m.len() {
        let minor: Vec<Vec<BigInt>> = m[..k].iter().map(|r| r[..k].to_vec()).collect();
        let d = determinant(&minor);
        if d.is_zero() {
            return None;
        }
        sig += if d.is_positive() == prev.is_positive() { 1 } else { -1 };
        prev = d;
    }
    Some(sig)
}

/// Permutation product applying `p` first.
pub fn perm_then(p: &[u32], q: &[u32]) -> Vec<u32> {
    p.iter().map(|&i| q[i as usize]).collect()
}

pub fn perm_inverse(p: &[u32]) -> Vec<u32> {
    let mut out = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        out[x as usize] = i as u32;
    }
    out
}

pub fn perm_word(word: &[i32], images: &[Vec<u32>], degree: usize) -> Vec<u32> {
    word.iter().fold((0..degree as u32).collect(), |acc: Vec<u32>, &l| {
        let g = &images[l.unsigned_abs() as usize - 1];
        if l > 0 {
            perm_then(&acc, g)
        } else {
            perm_then(&acc, &perm_inverse(g))
        }
    })
}

pub fn closure_size(gens: &[Vec<u32>], degree: usize) -> usize {
    let id: Vec<u32> = (0..degree as u32).collect();
    let mut seen = BTreeSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = perm_then(&x, g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen.len()
}

pub fn is_even(p: &[u32]) -> bool {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 0
}

/// Rename every vertex to a random fresh token with the given prefix.
pub fn shuffle_tokens<R: Rng>(k: &SimplicialComplex, prefix: &str, rng: &mut R) -> SimplicialComplex {
    let mut ids: Vec<usize> = (0..k.vertex_count()).collect();
    ids.shuffle(rng);
    let map: HashMap<String, String> =
        k.vertices().iter().zip(ids).map(|(t, i)| (t.clone(), format!("{prefix}{i}"))).collect();
    k.relabel(|t| map[t].clone()).expect("fresh tokens")
}

pub fn join_fresh<R: Rng>(a: &SimplicialComplex, b: &SimplicialComplex, rng: &mut R) -> SimplicialComplex {
    let tag: u32 = rng.gen();
    let b = shuffle_tokens(b, &format!("j{tag}_"), rng);
    a.join(&b).expect("disjoint tokens")
}

/// A homology sphere of dimension 4 to 6 built from corpus spheres by
/// random suspensions and joins, under a random vertex naming.
pub fn random_sphere_combination<R: Rng>(rng: &mut R) -> (String, SimplicialComplex) {
    let d = rng.gen_range(1..=3);
    let mut k = shuffle_tokens(&corpus::sphere(d), "a", rng);
    let mut name = format!("S{d}");
    let target = rng.gen_range(4..=6);
    while k.dim() < target {
        let room = (target - k.dim()) as usize;
        if rng.gen_bool(0.5) {
            k = k.suspension().expect("fresh poles");
            name = format!("susp({name})");
        } else {
            let e = rng.gen_range(0..room);
            k = join_fresh(&k, &corpus::sphere(e), rng);
            name = format!("{name}*S{e}");
        }
    }
    (name, k)
}

/// A homology 5-sphere with codimension-4 simplices whose links are the
/// Poincare sphere: a double suspension or a join with a circle.
pub fn random_poincare_combination<R: Rng>(rng: &mut R) -> (String, SimplicialComplex) {
    let p = shuffle_tokens(&corpus::poincare(), "p", rng);
    if rng.gen_bool(0.5) {
        ("susp(susp(P))".into(), corpus::iterated_suspension(&p, 2))
    } else {
        ("P*S1".into(), join_fresh(&p, &corpus::sphere(1), rng))
    }
}

/// Closed homology manifolds of the corpus.
pub fn corpus_manifolds() -> Vec<(String, SimplicialComplex)> {
    let mut out: Vec<(String, SimplicialComplex)> = (1..=5).map(|n| (format!("S{n}"), corpus::sphere(n))).collect();
    out.push(("RP2".into(), corpus::rp2()));
    out.push(("T2".into(), corpus::torus()));
    out.push(("P".into(), corpus::poincare()));
    out.push(("susp(P)".into(), corpus::sigma_p()));
    out.push(("susp2(P)".into(), corpus::sigma2p()));
    out
}

/// Whether `a·b` vanishes, by row-wise sparse accumulation.
pub fn product_is_zero(a: &IntegerMatrix, b: &IntegerMatrix) -> bool {
    (0..a.rows()).all(|i| {
        let mut acc: HashMap<usize, BigInt> = HashMap::new();
        for (k, x) in a.row(i) {
            for (j, y) in b.row(*k) {
                *acc.entry(*j).or_insert_with(BigInt::zero) += x * y;
            }
        }
        acc.values().all(|v| v.is_zero())
    })
}
