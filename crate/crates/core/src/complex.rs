//! Finite abstract simplicial complexes.
//!
//! A complex owns an ordered list of vertex tokens; simplices are strictly
//! increasing lists of indices into that list. Orientation signs everywhere in
//! the crate are relative to this sorted order.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use crate::error::ComplexError;

pub type VertexId = u32;

/// Prefix reserved for generated apex and suspension tokens.
pub const RESERVED_PREFIX: char = '~';

/// A nonempty, strictly sorted set of vertex indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Simplex(Vec<VertexId>);

impl Simplex {
    pub fn new(mut vertices: Vec<VertexId>) -> Result<Self, ComplexError> {
        if vertices.is_empty() {
            return Err(ComplexError::EmptyFacet);
        }
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(ComplexError::DuplicateVertex(format!("{vertices:?}")));
        }
        Ok(Simplex(vertices))
    }

    pub(crate) fn from_sorted(vertices: Vec<VertexId>) -> Self {
        debug_assert!(!vertices.is_empty());
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Simplex(vertices)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn position(&self, v: VertexId) -> Option<usize> {
        self.0.binary_search(&v).ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        is_sorted_subset(&self.0, &other.0)
    }

    pub fn is_disjoint(&self, other: &Simplex) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn union(&self, other: &Simplex) -> Simplex {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            if j == other.0.len() || (i < self.0.len() && self.0[i] < other.0[j]) {
                out.push(self.0[i]);
                i += 1;
            } else if i == self.0.len() || other.0[j] < self.0[i] {
                out.push(other.0[j]);
                j += 1;
            } else {
                out.push(self.0[i]);
                i += 1;
                j += 1;
            }
        }
        Simplex(out)
    }

    /// Vertices of `self` not in `other`; `None` when nothing is left.
    pub fn difference(&self, other: &Simplex) -> Option<Simplex> {
        let rest: Vec<_> = self.0.iter().copied().filter(|v| !other.contains(*v)).collect();
        (!rest.is_empty()).then_some(Simplex(rest))
    }

    /// Codimension-one faces paired with the incidence sign `(-1)^i`.
    /// A vertex has no nonempty faces.
    pub fn boundary(&self) -> Vec<(i8, Simplex)> {
        if self.0.len() < 2 {
            return Vec::new();
        }
        (0..self.0.len())
            .map(|i| {
                let mut f = self.0.clone();
                f.remove(i);
                (if i % 2 == 0 { 1 } else { -1 }, Simplex(f))
            })
            .collect()
    }

    /// All nonempty faces, including the simplex itself.
    pub fn faces(&self) -> Vec<Simplex> {
        let n = self.0.len();
        let mut out = Vec::with_capacity((1usize << n) - 1);
        for mask in 1u64..(1u64 << n) {
            let f: Vec<_> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| self.0[i]).collect();
            out.push(Simplex(f));
        }
        out
    }
}

/// A simplex with a sign relative to its sorted vertex order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct OrientedSimplex {
    pub simplex: Simplex,
    pub sign: i8,
}

impl OrientedSimplex {
    /// Orient by an arbitrary vertex ordering.
    pub fn from_ordering(order: &[VertexId]) -> Result<Self, ComplexError> {
        let simplex = Simplex::new(order.to_vec())?;
        let sign = permutation_sign(order);
        Ok(OrientedSimplex { simplex, sign })
    }

    pub fn reversed(&self) -> Self {
        OrientedSimplex { simplex: self.simplex.clone(), sign: -self.sign }
    }
}

/// Sign of the permutation that sorts `seq` (entries distinct).
pub fn permutation_sign<T: Ord>(seq: &[T]) -> i8 {
    let mut inversions = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn is_sorted_subset(a: &[VertexId], b: &[VertexId]) -> bool {
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

/// Token order used when a complex is built from text: integers by value,
/// then everything else lexicographically.
pub fn natural_token_cmp(a: &str, b: &str) -> Ordering {
    match (a.parse::<i64>(), b.parse::<i64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        (Ok(_), Err(_)) => Ordering::Less,
        (Err(_), Ok(_)) => Ordering::Greater,
        (Err(_), Err(_)) => a.cmp(b),
    }
}

/// Immutable finite simplicial complex.
///
/// The complex with no vertices is `{∅}` (dimension −1); it arises as the
/// link of a facet.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    vertices: Vec<String>,
    facets: Vec<Simplex>,
    faces: Vec<Vec<Simplex>>,
    lookup: HashMap<Simplex, usize>,
    vertex_facets: Vec<Vec<usize>>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.facets == other.facets
    }
}

impl Eq for SimplicialComplex {}

impl SimplicialComplex {
    /// The complex `{∅}` with no vertices.
    pub fn empty() -> Self {
        SimplicialComplex {
            vertices: Vec::new(),
            facets: Vec::new(),
            faces: Vec::new(),
            lookup: HashMap::new(),
            vertex_facets: Vec::new(),
        }
    }

    /// Build from facet lists of tokens. Vertices are ordered by
    /// [`natural_token_cmp`]; non-maximal input facets are absorbed.
    pub fn from_facets<S: AsRef<str>>(facets: &[Vec<S>]) -> Result<Self, ComplexError> {
        if facets.is_empty() {
            return Err(ComplexError::EmptyComplex);
        }
        let mut tokens: Vec<String> = Vec::new();
        let mut seen = HashSet::new();
        for f in facets {
            if f.is_empty() {
                return Err(ComplexError::EmptyFacet);
            }
            for t in f {
                let t = t.as_ref();
                if seen.insert(t.to_string()) {
                    tokens.push(t.to_string());
                }
            }
        }
        tokens.sort_by(|a, b| natural_token_cmp(a, b));
        let index: HashMap<&str, VertexId> =
            tokens.iter().enumerate().map(|(i, t)| (t.as_str(), i as VertexId)).collect();
        let mut idx_facets = Vec::with_capacity(facets.len());
        for f in facets {
            let ids: Vec<VertexId> = f.iter().map(|t| index[t.as_ref()]).collect();
            let s = Simplex::new(ids).map_err(|_| {
                ComplexError::DuplicateVertex(
                    f.iter().map(|t| t.as_ref()).collect::<Vec<_>>().join(" "),
                )
            })?;
            idx_facets.push(s);
        }
        Self::from_indexed(tokens, idx_facets)
    }

    /// Build from an explicit vertex order and index-based facets. Vertices
    /// that occur in no facet are dropped (order of the rest is kept).
    pub fn from_indexed(vertices: Vec<String>, facets: Vec<Simplex>) -> Result<Self, ComplexError> {
        {
            let mut seen = HashSet::new();
            for t in &vertices {
                if !seen.insert(t) {
                    return Err(ComplexError::DuplicateToken(t.clone()));
                }
            }
        }
        if facets.is_empty() {
            return Ok(Self::empty());
        }
        // compact the vertex list to used vertices
        let mut used = vec![false; vertices.len()];
        for f in &facets {
            for &v in f.vertices() {
                used[v as usize] = true;
            }
        }
        let mut remap = vec![u32::MAX; vertices.len()];
        let mut kept = Vec::new();
        for (i, t) in vertices.into_iter().enumerate() {
            if used[i] {
                remap[i] = kept.len() as VertexId;
                kept.push(t);
            }
        }
        let facets: Vec<Simplex> = facets
            .into_iter()
            .map(|f| Simplex(f.0.iter().map(|&v| remap[v as usize]).collect()))
            .collect();

        // level-wise closure from the top down; an input facet already
        // produced as a face of a larger one is not maximal
        let dim = facets.iter().map(|f| f.len()).max().unwrap_or(0);
        let mut by_size: Vec<Vec<Simplex>> = vec![Vec::new(); dim + 1];
        for f in facets {
            let n = f.len();
            by_size[n].push(f);
        }
        let mut levels: Vec<HashSet<Simplex>> = vec![HashSet::new(); dim + 1];
        let mut maximal = Vec::new();
        for size in (1..=dim).rev() {
            for f in std::mem::take(&mut by_size[size]) {
                if !levels[size].contains(&f) {
                    levels[size].insert(f.clone());
                    maximal.push(f);
                }
            }
            if size > 1 {
                let (lower, upper) = levels.split_at_mut(size);
                let below = &mut lower[size - 1];
                for s in upper[0].iter() {
                    for j in 0..size {
                        let mut v = s.0.clone();
                        v.remove(j);
                        below.insert(Simplex(v));
                    }
                }
            }
        }
        maximal.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));

        let mut faces: Vec<Vec<Simplex>> =
            levels.into_iter().skip(1).map(|l| l.into_iter().collect()).collect();
        let mut lookup = HashMap::new();
        for level in faces.iter_mut() {
            level.sort_unstable();
            for (i, s) in level.iter().enumerate() {
                lookup.insert(s.clone(), i);
            }
        }
        let mut vertex_facets = vec![Vec::new(); kept.len()];
        for (i, f) in maximal.iter().enumerate() {
            for &v in f.vertices() {
                vertex_facets[v as usize].push(i);
            }
        }
        Ok(SimplicialComplex { vertices: kept, facets: maximal, faces, lookup, vertex_facets })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn token(&self, v: VertexId) -> &str {
        &self.vertices[v as usize]
    }

    pub fn vertex_id(&self, token: &str) -> Option<VertexId> {
        self.vertices.iter().position(|t| t == token).map(|i| i as VertexId)
    }

    /// Facets sorted by size, then lexicographically.
    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }

    /// Dimension; −1 for `{∅}`.
    pub fn dim(&self) -> isize {
        self.faces.len() as isize - 1
    }

    pub fn is_void_link(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Simplices of dimension `d`, lexicographically sorted.
    pub fn simplices(&self, d: usize) -> &[Simplex] {
        self.faces.get(d).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.faces.iter().map(|l| l.len()).collect()
    }

    pub fn simplex_count(&self) -> usize {
        self.faces.iter().map(|l| l.len()).sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.faces
            .iter()
            .enumerate()
            .map(|(d, l)| if d % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) })
            .sum()
    }

    /// Index of `s` among the simplices of its dimension.
    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.lookup.get(s).copied()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.lookup.contains_key(s)
    }

    pub fn is_pure(&self) -> bool {
        self.facets.iter().all(|f| f.len() == self.faces.len())
    }

    pub fn simplex_from_tokens<S: AsRef<str>>(&self, tokens: &[S]) -> Result<Simplex, ComplexError> {
        let mut ids = Vec::with_capacity(tokens.len());
        for t in tokens {
            let t = t.as_ref();
            ids.push(self.vertex_id(t).ok_or_else(|| ComplexError::MissingSimplex(t.to_string()))?);
        }
        let s = Simplex::new(ids)?;
        if !self.contains(&s) {
            return Err(ComplexError::MissingSimplex(self.describe(&s)));
        }
        Ok(s)
    }

    pub fn tokens_of(&self, s: &Simplex) -> Vec<String> {
        s.vertices().iter().map(|&v| self.vertices[v as usize].clone()).collect()
    }

    /// Space-separated tokens of a simplex.
    pub fn describe(&self, s: &Simplex) -> String {
        s.vertices().iter().map(|&v| self.token(v)).collect::<Vec<_>>().join(" ")
    }

    /// Facets as token lists, in facet order.
    pub fn facet_tokens(&self) -> Vec<Vec<String>> {
        self.facets.iter().map(|f| self.tokens_of(f)).collect()
    }

    /// Indices (into [`Self::facets`]) of the facets containing `s`.
    pub fn facets_containing(&self, s: &Simplex) -> Vec<usize> {
        let Some(shortest) = s
            .vertices()
            .iter()
            .map(|&v| &self.vertex_facets[v as usize])
            .min_by_key(|l| l.len())
        else {
            return Vec::new();
        };
        shortest.iter().copied().filter(|&i| s.is_face_of(&self.facets[i])).collect()
    }

    /// Subcomplex generated by `facets` (indices of this complex), keeping
    /// this complex's vertex order.
    pub fn subcomplex(&self, facets: Vec<Simplex>) -> SimplicialComplex {
        SimplicialComplex::from_indexed(self.vertices.clone(), facets)
            .expect("subcomplex of a valid complex")
    }

    /// Facets of the link of `s`, in this complex's vertex indices.
    pub fn link_facets(&self, s: &Simplex) -> Result<Vec<Simplex>, ComplexError> {
        if !self.contains(s) {
            return Err(ComplexError::MissingSimplex(format!("{:?}", s.vertices())));
        }
        let mut out: Vec<Simplex> = self
            .facets_containing(s)
            .into_iter()
            .filter_map(|i| self.facets[i].difference(s))
            .collect();
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// The link `{τ : τ ∩ σ = ∅, τ ∪ σ ∈ K}`; `{∅}` for a facet.
    pub fn link(&self, s: &Simplex) -> Result<SimplicialComplex, ComplexError> {
        let facets = self.link_facets(s)?;
        Ok(self.subcomplex(facets))
    }

    /// Closed star of `s`.
    pub fn star(&self, s: &Simplex) -> Result<SimplicialComplex, ComplexError> {
        if !self.contains(s) {
            return Err(ComplexError::MissingSimplex(format!("{:?}", s.vertices())));
        }
        let facets = self.facets_containing(s).into_iter().map(|i| self.facets[i].clone()).collect();
        Ok(self.subcomplex(facets))
    }

    fn fresh_token(&self, stem: &str, other: Option<&SimplicialComplex>) -> String {
        let taken = |t: &str| {
            self.vertices.iter().any(|v| v == t) || other.is_some_and(|o| o.vertices.iter().any(|v| v == t))
        };
        (1..)
            .map(|i| format!("{RESERVED_PREFIX}{stem}{i}"))
            .find(|t| !taken(t))
            .expect("unbounded search")
    }

    /// Cone with an explicit apex token.
    pub fn cone_with(&self, apex: &str) -> Result<SimplicialComplex, ComplexError> {
        if self.vertices.iter().any(|t| t == apex) {
            return Err(ComplexError::TokenCollision(apex.to_string()));
        }
        let mut vertices = self.vertices.clone();
        vertices.push(apex.to_string());
        let a = (vertices.len() - 1) as VertexId;
        let facets = if self.facets.is_empty() {
            vec![Simplex(vec![a])]
        } else {
            self.facets
                .iter()
                .map(|f| {
                    let mut v = f.0.clone();
                    v.push(a);
                    Simplex(v)
                })
                .collect()
        };
        SimplicialComplex::from_indexed(vertices, facets)
    }

    /// Cone with a generated apex `~c<i>`.
    pub fn cone(&self) -> Result<SimplicialComplex, ComplexError> {
        let apex = self.fresh_token("c", None);
        self.cone_with(&apex)
    }

    /// Join; token sets must be disjoint. Vertices of `self` precede those
    /// of `other`.
    pub fn join(&self, other: &SimplicialComplex) -> Result<SimplicialComplex, ComplexError> {
        for t in &other.vertices {
            if self.vertices.contains(t) {
                return Err(ComplexError::TokenCollision(t.clone()));
            }
        }
        let mut vertices = self.vertices.clone();
        let shift = vertices.len() as VertexId;
        vertices.extend(other.vertices.iter().cloned());
        let lift = |f: &Simplex| Simplex(f.0.iter().map(|v| v + shift).collect::<Vec<_>>());
        let facets: Vec<Simplex> = match (self.facets.is_empty(), other.facets.is_empty()) {
            (true, true) => Vec::new(),
            (true, false) => other.facets.iter().map(lift).collect(),
            (false, true) => self.facets.clone(),
            (false, false) => {
                let mut out = Vec::with_capacity(self.facets.len() * other.facets.len());
                for f in &self.facets {
                    for g in &other.facets {
                        let mut v = f.0.clone();
                        v.extend(g.0.iter().map(|x| x + shift));
                        out.push(Simplex(v));
                    }
                }
                out
            }
        };
        SimplicialComplex::from_indexed(vertices, facets)
    }

    /// Two-point sphere with the given tokens.
    pub fn zero_sphere(a: &str, b: &str) -> SimplicialComplex {
        SimplicialComplex::from_indexed(
            vec![a.to_string(), b.to_string()],
            vec![Simplex(vec![0]), Simplex(vec![1])],
        )
        .expect("two distinct tokens")
    }

    /// Suspension `K * S⁰` with generated poles `~n<i>`, `~s<i>`.
    pub fn suspension(&self) -> Result<SimplicialComplex, ComplexError> {
        let i = (1..)
            .find(|i| {
                let n = format!("{RESERVED_PREFIX}n{i}");
                let s = format!("{RESERVED_PREFIX}s{i}");
                !self.vertices.iter().any(|t| *t == n || *t == s)
            })
            .expect("unbounded search");
        let poles = SimplicialComplex::zero_sphere(
            &format!("{RESERVED_PREFIX}n{i}"),
            &format!("{RESERVED_PREFIX}s{i}"),
        );
        self.join(&poles)
    }

    /// Rename every vertex; the new order follows [`natural_token_cmp`].
    pub fn relabel<F: Fn(&str) -> String>(&self, f: F) -> Result<SimplicialComplex, ComplexError> {
        let facets: Vec<Vec<String>> =
            self.facets.iter().map(|s| s.0.iter().map(|&v| f(self.token(v))).collect()).collect();
        SimplicialComplex::from_facets(&facets)
    }

    /// Connected components of the 1-skeleton, as sorted vertex lists.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let n = self.vertices.len();
        let mut adj = vec![Vec::new(); n];
        for e in self.simplices(1) {
            let (a, b) = (e.0[0] as usize, e.0[1] as usize);
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(v) = queue.pop_front() {
                comp.push(v as VertexId);
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Codimension-one faces of a pure complex with their containing facets.
    pub(crate) fn ridge_map(&self) -> HashMap<Vec<VertexId>, Vec<usize>> {
        let mut ridges: HashMap<Vec<VertexId>, Vec<usize>> = HashMap::new();
        for (i, f) in self.facets.iter().enumerate() {
            for j in 0..f.len() {
                let mut r = f.0.clone();
                r.remove(j);
                ridges.entry(r).or_default().push(i);
            }
        }
        ridges
    }
}

impl fmt::Display for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.facets {
            writeln!(f, "{}", self.describe(s))?;
        }
        Ok(())
    }
}
