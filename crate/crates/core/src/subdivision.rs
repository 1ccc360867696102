//! Barycentric subdivision and dual cones.
//!
//! Subdivision vertices are the faces of the original complex, ordered by
//! dimension and then lexicographically, so the sorted vertex list of a
//! subdivision simplex is its flag in increasing order.

use std::collections::HashMap;

use crate::complex::{Simplex, SimplicialComplex, VertexId};
use crate::error::ComplexError;

/// Token used for the barycenter of a face.
pub fn barycenter_token(k: &SimplicialComplex, face: &Simplex) -> String {
    format!("<{}>", k.tokens_of(face).join(","))
}

#[derive(Clone, Debug)]
pub struct SubdividedComplex {
    pub complex: SimplicialComplex,
    /// Carrier face (in the original complex) of each subdivision vertex.
    pub carriers: Vec<Simplex>,
}

impl SubdividedComplex {
    pub fn carrier(&self, v: VertexId) -> &Simplex {
        &self.carriers[v as usize]
    }
}

/// Orderings of `rest` produce the maximal chains from `start` (which may be
/// empty) up to `start ∪ rest`; each chain lists the successive faces.
fn chains_above(start: &[VertexId], rest: &[VertexId], out: &mut Vec<Vec<Vec<VertexId>>>) {
    fn go(
        current: Vec<VertexId>,
        rest: Vec<VertexId>,
        prefix: &mut Vec<Vec<VertexId>>,
        out: &mut Vec<Vec<Vec<VertexId>>>,
    ) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..rest.len() {
            let mut next = current.clone();
            next.push(rest[i]);
            next.sort_unstable();
            let mut remaining = rest.clone();
            remaining.remove(i);
            prefix.push(next.clone());
            go(next, remaining, prefix, out);
            prefix.pop();
        }
    }
    go(start.to_vec(), rest.to_vec(), &mut Vec::new(), out);
}

/// First barycentric subdivision.
pub fn barycentric_subdivision(k: &SimplicialComplex) -> SubdividedComplex {
    if k.is_void_link() {
        return SubdividedComplex { complex: SimplicialComplex::empty(), carriers: Vec::new() };
    }
    let mut carriers = Vec::with_capacity(k.simplex_count());
    let mut index: HashMap<Vec<VertexId>, VertexId> = HashMap::new();
    for d in 0..=k.dim() as usize {
        for s in k.simplices(d) {
            index.insert(s.vertices().to_vec(), carriers.len() as VertexId);
            carriers.push(s.clone());
        }
    }
    let tokens: Vec<String> = carriers.iter().map(|c| barycenter_token(k, c)).collect();
    let mut facets = Vec::new();
    for f in k.facets() {
        let mut chains = Vec::new();
        chains_above(&[], f.vertices(), &mut chains);
        for chain in chains {
            let ids: Vec<VertexId> = chain.iter().map(|c| index[c]).collect();
            facets.push(Simplex::from_sorted(ids));
        }
    }
    let complex = SimplicialComplex::from_indexed(tokens, facets).expect("flags form a complex");
    SubdividedComplex { complex, carriers }
}

/// The dual cone of a simplex: all flags of faces containing it, as a
/// subcomplex of the barycentric subdivision.
#[derive(Clone, Debug)]
pub struct DualCone {
    pub base: Simplex,
    /// Cone on `link_part` with apex the barycenter of `base` (vertex 0).
    pub cone_complex: SimplicialComplex,
    /// Simplices of the cone opposite the barycenter.
    pub link_part: SimplicialComplex,
    /// Carrier faces of the cone vertices (indices of the original complex).
    pub carriers: Vec<Simplex>,
}

impl DualCone {
    /// Dimension of the cone; zero for the dual cone of a facet.
    pub fn dim(&self) -> isize {
        self.cone_complex.dim()
    }
}

pub fn dual_cone(k: &SimplicialComplex, sigma: &Simplex) -> Result<DualCone, ComplexError> {
    if !k.contains(sigma) {
        return Err(ComplexError::MissingSimplex(k.describe_checked(sigma)));
    }
    let star_facets: Vec<&Simplex> =
        k.facets_containing(sigma).into_iter().map(|i| &k.facets()[i]).collect();
    // faces containing sigma, ordered by dimension then lexicographically
    let mut above: Vec<Vec<VertexId>> = Vec::new();
    for f in &star_facets {
        let rest: Vec<VertexId> = f.vertices().iter().copied().filter(|v| !sigma.contains(*v)).collect();
        let n = rest.len();
        for mask in 0u64..(1u64 << n) {
            let mut face = sigma.vertices().to_vec();
            face.extend((0..n).filter(|i| mask >> i & 1 == 1).map(|i| rest[i]));
            face.sort_unstable();
            above.push(face);
        }
    }
    above.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    above.dedup();
    let index: HashMap<&[VertexId], VertexId> =
        above.iter().enumerate().map(|(i, f)| (f.as_slice(), i as VertexId)).collect();
    let carriers: Vec<Simplex> = above.iter().map(|f| Simplex::from_sorted(f.clone())).collect();
    let tokens: Vec<String> = carriers.iter().map(|c| barycenter_token(k, c)).collect();

    let mut cone_facets = Vec::new();
    let mut link_facets = Vec::new();
    for f in &star_facets {
        let rest: Vec<VertexId> = f.vertices().iter().copied().filter(|v| !sigma.contains(*v)).collect();
        let mut chains = Vec::new();
        chains_above(sigma.vertices(), &rest, &mut chains);
        for chain in chains {
            let tail: Vec<VertexId> = chain.iter().map(|c| index[c.as_slice()]).collect();
            let mut full = vec![0];
            full.extend(tail.iter().copied());
            cone_facets.push(Simplex::from_sorted(full));
            if !tail.is_empty() {
                link_facets.push(Simplex::from_sorted(tail));
            }
        }
    }
    let cone_complex = SimplicialComplex::from_indexed(tokens.clone(), cone_facets)?;
    // every cone vertex but the apex occurs in the link part, so link vertex
    // i is cone vertex i + 1
    let link_part = if link_facets.is_empty() {
        SimplicialComplex::empty()
    } else {
        SimplicialComplex::from_indexed(tokens, link_facets)?
    };
    Ok(DualCone { base: sigma.clone(), cone_complex, link_part, carriers })
}

impl SimplicialComplex {
    pub(crate) fn describe_checked(&self, s: &Simplex) -> String {
        if s.vertices().iter().all(|&v| (v as usize) < self.vertex_count()) {
            self.describe(s)
        } else {
            format!("{:?}", s.vertices())
        }
    }
}
