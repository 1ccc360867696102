//! Orientation double cover of a pseudomanifold.
//!
//! A lifted facet is a facet `F` together with an orientation `s·[F]`,
//! `s = ±1` relative to sorted order. Two lifted facets across a shared ridge
//! are glued when they induce opposite orientations on it. The total space
//! carries the canonical orientation `s` on the lift `(F, s)`, and the deck
//! involution `(F, s) ↦ (F, −s)` reverses it.

use std::collections::{HashMap, VecDeque};

use crate::complex::{Simplex, SimplicialComplex, VertexId};
use crate::error::ComplexError;

#[derive(Clone, Debug)]
pub struct DoubleCover {
    pub total: SimplicialComplex,
    orientable: bool,
    /// `sheets[f][i]`: sheet of the i-th vertex of base facet `f` in the
    /// lift `(f, +1)`.
    sheets: Vec<Vec<u8>>,
    /// Orientation chosen for each base facet by propagation from facet 0;
    /// a global orientation when the base is orientable.
    propagated: Vec<i8>,
    base_facets: Vec<Simplex>,
    base_lookup: HashMap<Simplex, usize>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Lifted-facet node id.
fn node(f: usize, s: i8) -> usize {
    2 * f + usize::from(s < 0)
}

fn ridge_position(facet: &Simplex, ridge: &[VertexId]) -> usize {
    facet.vertices().iter().position(|v| ridge.binary_search(v).is_err()).expect("ridge of facet")
}

/// Gluing rule: `(F, s)` meets `(G, t)` with `t = −s·(−1)^{p_F + p_G}`.
fn glue_sign(pf: usize, pg: usize) -> i8 {
    if (pf + pg).is_multiple_of(2) {
        -1
    } else {
        1
    }
}

impl DoubleCover {
    pub fn is_orientable(&self) -> bool {
        self.orientable
    }

    pub fn projection(&self, v: VertexId) -> VertexId {
        v / 2
    }

    pub fn deck(&self, v: VertexId) -> VertexId {
        v ^ 1
    }

    /// Propagated orientation of a base facet (index into the base facets).
    pub fn propagated_orientation(&self, facet: usize) -> i8 {
        self.propagated[facet]
    }

    fn facet_sheets(&self, facet: usize) -> &[u8] {
        &self.sheets[facet]
    }

    /// Sheet of each vertex of `sigma` in its representative lift: the lift
    /// whose first vertex lies on sheet 0.
    pub fn representative_sheets(&self, base: &SimplicialComplex, sigma: &Simplex) -> Vec<u8> {
        let f = base.facets_containing(sigma)[0];
        let facet = &self.base_facets[f];
        let sheets = self.facet_sheets(f);
        let mut out: Vec<u8> = sigma
            .vertices()
            .iter()
            .map(|v| sheets[facet.position(*v).expect("face of facet")])
            .collect();
        if out[0] == 1 {
            for s in out.iter_mut() {
                *s ^= 1;
            }
        }
        out
    }

    /// Representative lift of `sigma` as a simplex of the total space.
    pub fn representative_lift(&self, base: &SimplicialComplex, sigma: &Simplex) -> Simplex {
        let sheets = self.representative_sheets(base, sigma);
        Simplex::from_sorted(
            sigma.vertices().iter().zip(sheets).map(|(&v, s)| 2 * v + s as VertexId).collect(),
        )
    }

    /// Whether the face `sigma ⊂ tau` of the representative lift of `tau` is
    /// the representative lift of `sigma` (otherwise it is its deck image).
    pub fn face_is_representative(&self, base: &SimplicialComplex, tau: &Simplex, sigma: &Simplex) -> bool {
        let tau_sheets = self.representative_sheets(base, tau);
        let first = sigma.vertices()[0];
        let pos = tau.position(first).expect("face");
        tau_sheets[pos] == 0
    }

    /// Canonical orientation sign of the lift of facet `facet` (index into
    /// the base facets) that contains the representative lift of `sigma`.
    pub fn orientation_near(&self, base: &SimplicialComplex, facet: usize, sigma: &Simplex) -> i8 {
        let f = &self.base_facets[facet];
        let first = sigma.vertices()[0];
        let rep_sheet = self.representative_sheets(base, sigma)[0];
        let plus_sheet = self.facet_sheets(facet)[f.position(first).expect("face")];
        if plus_sheet == rep_sheet {
            1
        } else {
            -1
        }
    }

    /// Canonical orientation of a facet of the total space.
    pub fn total_orientation(&self, total_facet: &Simplex) -> Option<i8> {
        let base: Vec<VertexId> = total_facet.vertices().iter().map(|&v| v / 2).collect();
        let f = *self.base_lookup.get(&Simplex::from_sorted(base))?;
        let first_sheet = (total_facet.vertices()[0] & 1) as u8;
        Some(if self.sheets[f][0] == first_sheet { 1 } else { -1 })
    }

    /// Index of a base facet.
    pub fn facet_index(&self, facet: &Simplex) -> Option<usize> {
        self.base_lookup.get(facet).copied()
    }
}

/// Check the pseudomanifold conditions and build the orientation cover.
pub fn orientability_and_double_cover(k: &SimplicialComplex) -> Result<(bool, DoubleCover), ComplexError> {
    if k.is_void_link() || k.dim() < 1 {
        return Err(ComplexError::NotAPseudomanifold("dimension below one".into()));
    }
    if !k.is_pure() {
        return Err(ComplexError::NotAPseudomanifold("complex is not pure".into()));
    }
    let facets = k.facets();
    let nf = facets.len();
    let ridges = k.ridge_map();
    let mut ridge_list: Vec<(&Vec<VertexId>, &Vec<usize>)> = ridges.iter().collect();
    ridge_list.sort();
    for (r, fs) in &ridge_list {
        if fs.len() > 2 {
            let s = Simplex::from_sorted((*r).clone());
            return Err(ComplexError::NotAPseudomanifold(format!(
                "ridge {} lies in {} facets",
                k.describe(&s),
                fs.len()
            )));
        }
    }
    // facet adjacency with gluing signs
    let mut adj: Vec<Vec<(usize, i8, &Vec<VertexId>)>> = vec![Vec::new(); nf];
    for (r, fs) in &ridge_list {
        if let [a, b] = fs.as_slice() {
            let g = glue_sign(ridge_position(&facets[*a], r), ridge_position(&facets[*b], r));
            adj[*a].push((*b, g, r));
            adj[*b].push((*a, g, r));
        }
    }
    // strong connectivity and propagated orientation
    let mut propagated = vec![0i8; nf];
    propagated[0] = 1;
    let mut queue = VecDeque::from([0usize]);
    while let Some(f) = queue.pop_front() {
        for &(g, sign, _) in &adj[f] {
            if propagated[g] == 0 {
                propagated[g] = propagated[f] * sign;
                queue.push_back(g);
            }
        }
    }
    if propagated.contains(&0) {
        return Err(ComplexError::NotAPseudomanifold("not strongly connected".into()));
    }
    let mut global = UnionFind::new(2 * nf);
    for (f, list) in adj.iter().enumerate() {
        for &(g, sign, _) in list {
            global.union(node(f, 1), node(g, sign));
            global.union(node(f, -1), node(g, -sign));
        }
    }
    let orientable = global.find(node(0, 1)) != global.find(node(0, -1));

    // per-vertex sheets from local components around each vertex
    let nv = k.vertex_count();
    let mut sheet_of: HashMap<(VertexId, usize), u8> = HashMap::new();
    for v in 0..nv as VertexId {
        let vs = Simplex::from_sorted(vec![v]);
        let around = k.facets_containing(&vs);
        let local_index: HashMap<usize, usize> = around.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let mut uf = UnionFind::new(2 * around.len());
        for (i, &f) in around.iter().enumerate() {
            for &(g, sign, r) in &adj[f] {
                if r.binary_search(&v).is_ok() {
                    let j = local_index[&g];
                    uf.union(node(i, 1), node(j, sign));
                    uf.union(node(i, -1), node(j, -sign));
                }
            }
        }
        let roots: std::collections::BTreeSet<usize> =
            (0..2 * around.len()).map(|x| uf.find(x)).collect();
        if uf.find(node(0, 1)) == uf.find(node(0, -1)) {
            return Err(ComplexError::CoverNotSimplicial(format!(
                "star of vertex {} is not orientable",
                k.token(v)
            )));
        }
        if roots.len() != 2 {
            return Err(ComplexError::CoverNotSimplicial(format!(
                "link of vertex {} is not strongly connected",
                k.token(v)
            )));
        }
        let first = around[0];
        let zero_root = uf.find(node(0, propagated[first]));
        for (i, &f) in around.iter().enumerate() {
            let s = if uf.find(node(i, 1)) == zero_root { 0 } else { 1 };
            sheet_of.insert((v, f), s);
        }
    }
    let sheets: Vec<Vec<u8>> = facets
        .iter()
        .enumerate()
        .map(|(f, s)| s.vertices().iter().map(|&v| sheet_of[&(v, f)]).collect())
        .collect();

    let mut tokens = Vec::with_capacity(2 * nv);
    for t in k.vertices() {
        tokens.push(format!("{t}^0"));
        tokens.push(format!("{t}^1"));
    }
    let mut total_facets = Vec::with_capacity(2 * nf);
    for (f, s) in facets.iter().enumerate() {
        for flip in [0u8, 1] {
            total_facets.push(Simplex::from_sorted(
                s.vertices()
                    .iter()
                    .zip(&sheets[f])
                    .map(|(&v, &sh)| 2 * v + (sh ^ flip) as VertexId)
                    .collect(),
            ));
        }
    }
    let expected = total_facets.len();
    let total = SimplicialComplex::from_indexed(tokens, total_facets)?;
    if total.facets().len() != expected || total.vertex_count() != 2 * nv {
        return Err(ComplexError::CoverNotSimplicial("lifts collide".into()));
    }
    let base_lookup = facets.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
    Ok((
        orientable,
        DoubleCover { total, orientable, sheets, propagated, base_facets: facets.to_vec(), base_lookup },
    ))
}

/// Orientation signs per facet (first facet positive) for an orientable,
/// strongly connected pseudomanifold; `None` otherwise.
pub fn coherent_orientation(k: &SimplicialComplex) -> Option<Vec<i8>> {
    if k.is_void_link() || k.dim() < 1 || !k.is_pure() {
        return None;
    }
    let facets = k.facets();
    let ridges = k.ridge_map();
    let mut adj: Vec<Vec<(usize, i8)>> = vec![Vec::new(); facets.len()];
    for (r, fs) in &ridges {
        match fs.as_slice() {
            [a, b] => {
                let g = glue_sign(ridge_position(&facets[*a], r), ridge_position(&facets[*b], r));
                adj[*a].push((*b, g));
                adj[*b].push((*a, g));
            }
            [_] => {}
            _ => return None,
        }
    }
    let mut sign = vec![0i8; facets.len()];
    sign[0] = 1;
    let mut queue = VecDeque::from([0usize]);
    while let Some(f) = queue.pop_front() {
        for &(g, s) in &adj[f] {
            let want = sign[f] * s;
            if sign[g] == 0 {
                sign[g] = want;
                queue.push_back(g);
            } else if sign[g] != want {
                return None;
            }
        }
    }
    sign.iter().all(|&s| s != 0).then_some(sign)
}
