//! The conical chain complex of a closed homology manifold: one generator
//! per dual cone, degree `d` dual to the `(n−d)`-simplices.
//!
//! # Orientation convention
//!
//! Write `ε(σ, F)` for the canonical orientation sign, relative to sorted
//! order, of the lift of the facet `F ⊇ σ` to the orientation cover that
//! contains the representative lift of `σ`. The dual cone `D(σ)` of a
//! `k`-simplex is oriented by the subdivision chain
//!
//! ```text
//! z_σ = Σ ε(σ, F) · sgn(σ, v_1, …, v_m) · [b_σ, b_{σ+v_1}, …, b_F]
//! ```
//!
//! over facets `F ⊇ σ` and orderings `v_1, …, v_m` of `F ∖ σ`, where
//! `sgn(σ, v_1, …, v_m)` sorts `σ` (in vertex order) followed by the `v_i`
//! into `F`. Then
//!
//! ```text
//! ∂z_σ = Σ_τ (−1)^(k+1) [τ:σ] w(σ, τ) z_τ,   w(σ, τ) = ε(σ, F) ε(τ, F)
//! ```
//!
//! summed over the cofaces `τ ⊃ σ` (any facet `F ⊇ τ` gives the same `w`).
//! `w(σ, τ) = −1` exactly when the face `σ` of the representative lift of
//! `τ` is the deck image of the representative lift of `σ`, so the conical
//! boundary `C_{d+1} → C_d` is `(−1)^(n−d)` times the transpose of the
//! boundary `∂_{n−d}` of simplicial chains with `Z⁻` coefficients.

use std::collections::HashMap;

use num_traits::Zero;
use rayon::prelude::*;

use crate::chain::{BasisKind, ChainComplexData};
use crate::complex::{permutation_sign, Simplex, SimplicialComplex, VertexId};
use crate::cover::{orientability_and_double_cover, DoubleCover};
use crate::error::ManifoldError;
use crate::manifold::{certify_links, LinkVerdict};
use crate::matrix::IntegerMatrix;
use crate::subdivision::barycentric_subdivision;

#[derive(Clone, Debug)]
pub struct ConicalChainComplex {
    pub data: ChainComplexData,
    pub n: usize,
    pub cover: DoubleCover,
    pub orientable: bool,
}

/// Local orientation sign `ε(σ, F)`.
pub fn local_orientation(k: &SimplicialComplex, cover: &DoubleCover, sigma: &Simplex, facet: &Simplex) -> i8 {
    let f = cover.facet_index(facet).expect("facet of the base");
    cover.orientation_near(k, f, sigma)
}

/// Sign sorting `first` followed by `rest` into increasing order.
pub fn shuffle_sign(first: &[VertexId], rest: &[VertexId]) -> i8 {
    let seq: Vec<VertexId> = first.iter().chain(rest).copied().collect();
    permutation_sign(&seq)
}

fn cone_label(k: &SimplicialComplex, s: &Simplex) -> String {
    format!("D{}", k.describe(s))
}

impl ConicalChainComplex {
    /// Requires a closed homology manifold of dimension at least one.
    pub fn new(k: &SimplicialComplex) -> Result<Self, ManifoldError> {
        let certs = certify_links(k)?;
        if let Some(c) = certs.iter().find(|c| c.verdict != LinkVerdict::SphereLike) {
            return Err(ManifoldError::Precondition(format!(
                "not a closed homology manifold: link of {} is {:?}",
                k.describe(&c.simplex),
                c.verdict
            )));
        }
        Self::from_certified(k)
    }

    /// Skips certification; the caller vouches for the manifold property.
    pub fn from_certified(k: &SimplicialComplex) -> Result<Self, ManifoldError> {
        if k.dim() < 1 {
            return Err(ManifoldError::Precondition("dimension below one".into()));
        }
        let n = k.dim() as usize;
        let (orientable, cover) = orientability_and_double_cover(k)?;
        let labels: Vec<Vec<String>> =
            (0..=n).map(|d| k.simplices(n - d).iter().map(|s| cone_label(k, s)).collect()).collect();
        let mut plain = vec![IntegerMatrix::zeros(0, k.simplices(n).len())];
        for d in 1..=n {
            plain.push(conical_boundary(k, &cover, n, d)?);
        }
        let data = ChainComplexData::new(BasisKind::DualCones, labels, plain, None)
            .map_err(|e| ManifoldError::Precondition(format!("conical complex: {e}")))?;
        Ok(ConicalChainComplex { data, n, cover, orientable })
    }

    /// Base simplex of the `j`-th cone in degree `d`.
    pub fn carrier<'a>(&self, k: &'a SimplicialComplex, d: usize, j: usize) -> &'a Simplex {
        &k.simplices(self.n - d)[j]
    }
}

/// `∂_d : C_d → C_{d−1}`; columns are cones on `(n−d)`-simplices, rows cones
/// on `(n−d+1)`-simplices.
fn conical_boundary(k: &SimplicialComplex, cover: &DoubleCover, n: usize, d: usize) -> Result<IntegerMatrix, ManifoldError> {
    let dim_sigma = n - d;
    let rows = k.simplices(dim_sigma + 1);
    let cols = k.simplices(dim_sigma).len();
    let sign_k = if (dim_sigma + 1).is_multiple_of(2) { 1 } else { -1 };
    let entries: Vec<(usize, usize, i64)> = rows
        .par_iter()
        .enumerate()
        .map(|(i, tau)| {
            let facets: Vec<&Simplex> = k.facets_containing(tau).into_iter().map(|f| &k.facets()[f]).collect();
            let mut out = Vec::with_capacity(tau.len());
            for (incidence, sigma) in tau.boundary() {
                let weights: Vec<i8> = facets
                    .iter()
                    .map(|f| local_orientation(k, cover, &sigma, f) * local_orientation(k, cover, tau, f))
                    .collect();
                if weights.iter().any(|w| *w != weights[0]) {
                    return Err(ManifoldError::Precondition(format!(
                        "local orientations of {} and {} disagree",
                        k.describe(&sigma),
                        k.describe(tau)
                    )));
                }
                let j = k.index_of(&sigma).expect("face present");
                out.push((i, j, sign_k * incidence as i64 * weights[0] as i64));
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(IntegerMatrix::from_triplets(rows.len(), cols, entries))
}

/// Orderings of a vertex list.
fn orderings(v: &[VertexId]) -> Vec<Vec<VertexId>> {
    if v.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..v.len() {
        let mut rest = v.to_vec();
        let x = rest.remove(i);
        for mut tail in orderings(&rest) {
            tail.insert(0, x);
            out.push(tail);
        }
    }
    out
}

/// The orienting chain `z_σ` in the barycentric subdivision, keyed by
/// subdivision simplices (vertex ids of `sd`).
fn orienting_chain(
    k: &SimplicialComplex,
    cover: &DoubleCover,
    sd_index: &HashMap<Simplex, VertexId>,
    sigma: &Simplex,
) -> HashMap<Simplex, i64> {
    let mut z = HashMap::new();
    for fi in k.facets_containing(sigma) {
        let f = &k.facets()[fi];
        let eps = local_orientation(k, cover, sigma, f) as i64;
        let rest: Vec<VertexId> = f.vertices().iter().copied().filter(|v| !sigma.contains(*v)).collect();
        for order in orderings(&rest) {
            let sign = shuffle_sign(sigma.vertices(), &order) as i64;
            let mut face = sigma.vertices().to_vec();
            let mut ids = vec![sd_index[sigma]];
            for &v in &order {
                face.push(v);
                face.sort_unstable();
                ids.push(sd_index[&Simplex::new(face.clone()).expect("distinct")]);
            }
            ids.sort_unstable();
            *z.entry(Simplex::new(ids).expect("distinct")).or_insert(0) += eps * sign;
        }
    }
    z.retain(|_, c| *c != 0);
    z
}

/// Recompute every conical boundary from the subdivision chains `z_σ` and
/// compare with the formula. Returns a description of the first mismatch.
pub fn verify_with_subdivision(k: &SimplicialComplex, c: &ConicalChainComplex) -> Result<(), String> {
    let sd = barycentric_subdivision(k);
    let sd_index: HashMap<Simplex, VertexId> =
        sd.carriers.iter().enumerate().map(|(i, s)| (s.clone(), i as VertexId)).collect();
    let n = c.n;
    let chains: Vec<Vec<HashMap<Simplex, i64>>> = (0..=n)
        .map(|d| k.simplices(n - d).par_iter().map(|s| orienting_chain(k, &c.cover, &sd_index, s)).collect())
        .collect();
    for d in 1..=n {
        let m = c.data.boundary_plain(d);
        for (j, z) in chains[d].iter().enumerate() {
            let mut lhs: HashMap<Simplex, i64> = HashMap::new();
            for (s, coef) in z {
                for (sign, face) in s.boundary() {
                    *lhs.entry(face).or_insert(0) += coef * sign as i64;
                }
            }
            let mut rhs: HashMap<Simplex, i64> = HashMap::new();
            for (i, row) in (0..m.rows()).filter_map(|i| {
                let v = m.get(i, j);
                (!v.is_zero()).then_some((i, v))
            }) {
                let w: i64 = row.try_into().map_err(|_| "large entry".to_string())?;
                for (s, coef) in &chains[d - 1][i] {
                    *rhs.entry(s.clone()).or_insert(0) += w * coef;
                }
            }
            lhs.retain(|_, v| *v != 0);
            rhs.retain(|_, v| *v != 0);
            if lhs != rhs {
                return Err(format!("boundary of {} disagrees in degree {d}", c.data.labels(d)[j]));
            }
        }
    }
    Ok(())
}

/// Incidence between `sd(τ)` and `D(σ)` for `k`-simplices: the number of
/// common subdivision vertices (faces `ρ` with `σ ⊆ ρ ⊆ τ`). Both are full
/// subcomplexes, so an entry of one means the two meet in one point.
pub fn incidence_matrix(k: &SimplicialComplex, dim: usize) -> IntegerMatrix {
    let simplices = k.simplices(dim);
    let entries: Vec<(usize, usize, i64)> = simplices
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, tau)| {
            // faces of τ that contain σ, for each σ of the same dimension
            simplices.iter().enumerate().filter_map(move |(j, sigma)| {
                let common = tau.faces().iter().filter(|rho| sigma.is_face_of(rho)).count();
                (common > 0).then_some((i, j, common as i64))
            })
        })
        .collect();
    IntegerMatrix::from_triplets(simplices.len(), simplices.len(), entries)
}

pub fn is_permutation_matrix(m: &IntegerMatrix) -> bool {
    if m.rows() != m.cols() {
        return false;
    }
    let one = crate::matrix::Integer::from(1);
    let mut col_seen = vec![false; m.cols()];
    for i in 0..m.rows() {
        let row = m.row(i);
        if row.len() != 1 || row[0].1 != one || col_seen[row[0].0] {
            return false;
        }
        col_seen[row[0].0] = true;
    }
    true
}
