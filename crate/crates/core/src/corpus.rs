//! Named complexes and the facet-file text format.
//!
//! A facet file has one facet per line as whitespace-separated vertex
//! tokens. Lines starting with `#` are comments; blank lines are skipped.

use crate::complex::SimplicialComplex;
use crate::error::ComplexError;

const POINCARE: &str = include_str!("../assets/poincare.txt");

pub fn parse_facets(text: &str) -> Result<SimplicialComplex, ComplexError> {
    let mut facets: Vec<Vec<&str>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let facet: Vec<&str> = line.split_whitespace().collect();
        let mut sorted = facet.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(ComplexError::Parse {
                line: i + 1,
                message: format!("malformed facet (duplicate vertex {})", w[0]),
            });
        }
        facets.push(facet);
    }
    if facets.is_empty() {
        return Err(ComplexError::EmptyComplex);
    }
    SimplicialComplex::from_facets(&facets)
}

/// Facet-file text; `parse_facets` reads it back to an equal complex up to
/// vertex order.
pub fn to_facet_file(k: &SimplicialComplex) -> String {
    k.to_string()
}

fn numbered(facets: Vec<Vec<u32>>) -> SimplicialComplex {
    let facets: Vec<Vec<String>> =
        facets.into_iter().map(|f| f.into_iter().map(|v| v.to_string()).collect()).collect();
    SimplicialComplex::from_facets(&facets).expect("corpus facets are well formed")
}

/// The full simplex `Δ^d` on vertices `0..=d`.
pub fn simplex(d: usize) -> SimplicialComplex {
    numbered(vec![(0..=d as u32).collect()])
}

/// The boundary `∂Δ^{d+1}`, a combinatorial `d`-sphere on `d + 2` vertices.
pub fn sphere(d: usize) -> SimplicialComplex {
    let n = d as u32 + 2;
    numbered((0..n).map(|skip| (0..n).filter(|&v| v != skip).collect()).collect())
}

/// Six-vertex real projective plane (hemi-icosahedron).
pub fn rp2() -> SimplicialComplex {
    numbered(vec![
        vec![1, 2, 3],
        vec![1, 3, 4],
        vec![1, 4, 5],
        vec![1, 5, 6],
        vec![1, 2, 6],
        vec![2, 3, 5],
        vec![3, 4, 6],
        vec![2, 4, 5],
        vec![3, 5, 6],
        vec![2, 4, 6],
    ])
}

/// Seven-vertex torus.
pub fn torus() -> SimplicialComplex {
    let mut facets = Vec::new();
    for i in 0..7u32 {
        facets.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
        facets.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
    }
    numbered(facets)
}

/// 16-vertex Poincaré homology sphere.
pub fn poincare() -> SimplicialComplex {
    parse_facets(POINCARE).expect("shipped asset parses")
}

pub fn iterated_suspension(k: &SimplicialComplex, times: usize) -> SimplicialComplex {
    let mut out = k.clone();
    for _ in 0..times {
        out = out.suspension().expect("generated poles are fresh");
    }
    out
}

pub fn sigma_p() -> SimplicialComplex {
    iterated_suspension(&poincare(), 1)
}

pub fn sigma2p() -> SimplicialComplex {
    iterated_suspension(&poincare(), 2)
}

pub fn sigma3rp2() -> SimplicialComplex {
    iterated_suspension(&rp2(), 3)
}
