//! Chain complexes of free abelian groups, with coefficients in presented
//! groups (optionally twisted by an involution), homology and cohomology
//! groups, and explicit class arithmetic.
//!
//! A twisted complex is stored as `∂ = P + T·Q` where `T` is the deck
//! involution; with coefficients `(A, τ)` the boundary becomes
//! `P ⊗ 1 + Q ⊗ τ`. Coefficients `A = Z^g / R` are handled through the
//! mapping cone of `1 ⊗ R'ᵀ : C ⊗ Z^m → C ⊗ Z^g`, with `R'` a basis of the
//! relation lattice, so no classification of `A` is needed.

use rayon::prelude::*;
use serde::Serialize;

use num_traits::Zero;

use crate::coefficients::CoefficientSystem;
use crate::complex::SimplicialComplex;
use crate::cover::DoubleCover;
use crate::error::AlgebraError;
use crate::group::{int_json, GroupDescriptor};
use crate::matrix::{Integer, IntegerMatrix};
use crate::snf::{invariant_factors, smith_normal_form, SnfResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisKind {
    Simplices,
    DualCones,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Homology,
    Cohomology,
}

#[derive(Clone, Debug)]
pub struct ChainComplexData {
    pub basis: BasisKind,
    labels: Vec<Vec<String>>,
    /// `plain[k] : C_k → C_{k−1}`; `plain[0]` has no rows.
    plain: Vec<IntegerMatrix>,
    twisted: Option<Vec<IntegerMatrix>>,
}

impl ChainComplexData {
    pub fn new(
        basis: BasisKind,
        labels: Vec<Vec<String>>,
        plain: Vec<IntegerMatrix>,
        twisted: Option<Vec<IntegerMatrix>>,
    ) -> Result<Self, AlgebraError> {
        let dims: Vec<usize> = labels.iter().map(|l| l.len()).collect();
        if plain.len() != dims.len() {
            return Err(AlgebraError::Dimension("one boundary matrix per degree expected".into()));
        }
        let shape_ok = |m: &IntegerMatrix, k: usize| {
            m.cols() == dims[k] && m.rows() == if k == 0 { 0 } else { dims[k - 1] }
        };
        for (k, m) in plain.iter().enumerate() {
            if !shape_ok(m, k) {
                return Err(AlgebraError::Dimension(format!("boundary in degree {k} has the wrong shape")));
            }
        }
        if let Some(q) = &twisted {
            if q.len() != dims.len() || q.iter().enumerate().any(|(k, m)| !shape_ok(m, k)) {
                return Err(AlgebraError::Dimension("twisted part has the wrong shape".into()));
            }
        }
        let c = ChainComplexData { basis, labels, plain, twisted };
        if let Some(k) = c.first_nonzero_square() {
            return Err(AlgebraError::NotACycle(k));
        }
        Ok(c)
    }

    /// Simplicial chains of `K`.
    pub fn simplicial(k: &SimplicialComplex) -> Self {
        let n = k.dim().max(0) as usize;
        let labels: Vec<Vec<String>> =
            (0..=n).map(|d| k.simplices(d).iter().map(|s| k.describe(s)).collect()).collect();
        let plain = (0..=n).map(|d| simplicial_boundary(k, d, None)).collect();
        ChainComplexData { basis: BasisKind::Simplices, labels, plain, twisted: None }
    }

    /// Chains of the orientation cover over `Z[Z/2]`, one basis element per
    /// simplex of `K` (its representative lift).
    pub fn twisted_simplicial(k: &SimplicialComplex, cover: &DoubleCover) -> Self {
        let n = k.dim().max(0) as usize;
        let labels: Vec<Vec<String>> =
            (0..=n).map(|d| k.simplices(d).iter().map(|s| k.describe(s)).collect()).collect();
        let (plain, twisted): (Vec<_>, Vec<_>) = (0..=n)
            .into_par_iter()
            .map(|d| (simplicial_boundary(k, d, Some((cover, false))), simplicial_boundary(k, d, Some((cover, true)))))
            .unzip();
        ChainComplexData { basis: BasisKind::Simplices, labels, plain, twisted: Some(twisted) }
    }

    pub fn top(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn dims(&self) -> Vec<usize> {
        self.labels.iter().map(|l| l.len()).collect()
    }

    pub fn labels(&self, degree: usize) -> &[String] {
        &self.labels[degree]
    }

    pub fn boundary_plain(&self, k: usize) -> &IntegerMatrix {
        &self.plain[k]
    }

    pub fn boundary_twisted(&self, k: usize) -> Option<&IntegerMatrix> {
        self.twisted.as_ref().map(|t| &t[k])
    }

    pub fn is_twisted(&self) -> bool {
        self.twisted.is_some()
    }

    /// First degree `k` with `∂_{k−1} ∘ ∂_k ≠ 0`, if any.
    pub fn first_nonzero_square(&self) -> Option<usize> {
        (2..self.plain.len()).find(|&k| {
            let (p0, p1) = (&self.plain[k - 1], &self.plain[k]);
            match &self.twisted {
                None => !p0.mul(p1).is_zero(),
                Some(q) => {
                    let (q0, q1) = (&q[k - 1], &q[k]);
                    !p0.mul(p1).add(&q0.mul(q1)).is_zero() || !q0.mul(p1).add(&p0.mul(q1)).is_zero()
                }
            }
        })
    }

    /// `∂_k ⊗ 1 + Q_k ⊗ τ` (or its transpose for cochains); without an
    /// action the deck transformation acts trivially.
    pub(crate) fn tensored(&self, k: usize, dir: Direction, id: &IntegerMatrix, t: Option<&IntegerMatrix>) -> IntegerMatrix {
        let orient = |m: &IntegerMatrix| match dir {
            Direction::Homology => m.clone(),
            Direction::Cohomology => m.transpose(),
        };
        let out = orient(&self.plain[k]).kron(id);
        match &self.twisted {
            Some(q) => out.add(&orient(&q[k]).kron(t.unwrap_or(id))),
            None => out,
        }
    }

    /// Integral coboundary `δ^d : C^d → C^{d+1}` with trivial action.
    pub fn coboundary_matrix(&self, d: usize) -> IntegerMatrix {
        if d >= self.top() {
            return IntegerMatrix::zeros(0, self.dims()[d.min(self.top())]);
        }
        self.tensored(d + 1, Direction::Cohomology, &IntegerMatrix::identity(1), None)
    }

    /// The complex with coefficients, arranged as an increasing sequence.
    pub fn with_coefficients(&self, coeffs: &CoefficientSystem, dir: Direction) -> CoefficientComplex {
        CoefficientComplex::new(self, coeffs, dir)
    }

    pub fn homology(&self, d: usize, coeffs: &CoefficientSystem) -> GroupDescriptor {
        if d > self.top() {
            return GroupDescriptor::zero();
        }
        let c = self.with_coefficients(coeffs, Direction::Homology);
        c.group(c.position(d))
    }

    pub fn cohomology(&self, d: usize, coeffs: &CoefficientSystem) -> GroupDescriptor {
        if d > self.top() {
            return GroupDescriptor::zero();
        }
        let c = self.with_coefficients(coeffs, Direction::Cohomology);
        c.group(c.position(d))
    }

    /// `H_0 … H_n`.
    pub fn homology_all(&self, coeffs: &CoefficientSystem) -> Vec<GroupDescriptor> {
        let c = self.with_coefficients(coeffs, Direction::Homology);
        c.all_groups().into_iter().rev().collect()
    }

    /// `H^0 … H^n`.
    pub fn cohomology_all(&self, coeffs: &CoefficientSystem) -> Vec<GroupDescriptor> {
        self.with_coefficients(coeffs, Direction::Cohomology).all_groups()
    }

    /// Class arithmetic for `H^d` (or `H_d`).
    pub fn classes(&self, d: usize, coeffs: &CoefficientSystem, dir: Direction) -> Result<ClassGroup, AlgebraError> {
        if d > self.top() {
            return Err(AlgebraError::Dimension(format!("degree {d} exceeds the top degree {}", self.top())));
        }
        let c = self.with_coefficients(coeffs, dir);
        let p = c.position(d);
        let space = c.class_space(p);
        Ok(ClassGroup { complex: c, degree: d, position: p, space })
    }

    /// `δx` for a cochain of degree `d` (values on generator coordinates,
    /// not reduced).
    pub fn coboundary(&self, x: &Cochain, coeffs: &CoefficientSystem) -> Cochain {
        let p = x.degree;
        let g = coeffs.generators();
        if p >= self.top() {
            return Cochain::zero(p + 1, 0, g);
        }
        let m = self.tensored(p + 1, Direction::Cohomology, &IntegerMatrix::identity(g), coeffs.twist());
        Cochain::from_flat(p + 1, g, m.mul_vec(&x.flat()))
    }

    /// `∂x` for a chain of degree `d ≥ 1`.
    pub fn boundary(&self, x: &Cochain, coeffs: &CoefficientSystem) -> Cochain {
        let g = coeffs.generators();
        if x.degree == 0 {
            return Cochain::zero(0, 0, g);
        }
        let m = self.tensored(x.degree, Direction::Homology, &IntegerMatrix::identity(g), coeffs.twist());
        Cochain::from_flat(x.degree - 1, g, m.mul_vec(&x.flat()))
    }
}

/// `∂_d` of `K`; with a cover, either the untwisted (`false`) or the deck
/// (`true`) part.
fn simplicial_boundary(k: &SimplicialComplex, d: usize, cover: Option<(&DoubleCover, bool)>) -> IntegerMatrix {
    let cols = k.simplices(d);
    if d == 0 {
        return IntegerMatrix::zeros(0, cols.len());
    }
    let rows = k.simplices(d - 1).len();
    let entries: Vec<(usize, usize, i64)> = cols
        .par_iter()
        .enumerate()
        .flat_map_iter(|(j, s)| {
            s.boundary()
                .into_iter()
                .filter_map(|(sign, f)| {
                    let i = k.index_of(&f).expect("faces are present");
                    let keep = match cover {
                        None => true,
                        Some((c, deck)) => c.face_is_representative(k, s, &f) != deck,
                    };
                    keep.then_some((i, j, sign as i64))
                })
                .collect::<Vec<_>>()
        })
        .collect();
    IntegerMatrix::from_triplets(rows, cols.len(), entries)
}

/// Values of a (co)chain: one coefficient vector per basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub degree: usize,
    pub generators: usize,
    pub values: Vec<Vec<Integer>>,
}

/// Chains use the same representation.
pub type Chain = Cochain;

impl Cochain {
    pub fn zero(degree: usize, size: usize, generators: usize) -> Self {
        Cochain { degree, generators, values: vec![vec![Integer::zero(); generators]; size] }
    }

    pub fn from_flat(degree: usize, generators: usize, flat: Vec<Integer>) -> Self {
        let values = if generators == 0 {
            Vec::new()
        } else {
            flat.chunks(generators).map(|c| c.to_vec()).collect()
        };
        Cochain { degree, generators, values }
    }

    /// Scalar cochain (one generator).
    pub fn from_scalars(degree: usize, values: &[i64]) -> Self {
        Cochain { degree, generators: 1, values: values.iter().map(|&v| vec![Integer::from(v)]).collect() }
    }

    pub fn flat(&self) -> Vec<Integer> {
        self.values.iter().flatten().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Indices whose value is nonzero in the coefficient group.
    pub fn support(&self, coeffs: &CoefficientSystem) -> Vec<usize> {
        (0..self.values.len()).filter(|&i| !coeffs.group().is_zero_element(&self.values[i])).collect()
    }

    pub fn is_zero_in(&self, coeffs: &CoefficientSystem) -> bool {
        self.support(coeffs).is_empty()
    }

    pub fn neg(&self) -> Self {
        Cochain {
            degree: self.degree,
            generators: self.generators,
            values: self.values.iter().map(|v| v.iter().map(|x| -x).collect()).collect(),
        }
    }

    /// JSON form: `{dimension, basis, values: [[label, [coefficients]]]}`,
    /// listing only basis elements with nonzero values.
    pub fn to_json(&self, basis: BasisKind, labels: &[String], coeffs: &CoefficientSystem) -> serde_json::Value {
        let values: Vec<serde_json::Value> = self
            .support(coeffs)
            .into_iter()
            .map(|i| {
                let v: Vec<serde_json::Value> = self.values[i].iter().map(int_json).collect();
                serde_json::json!([labels[i], v])
            })
            .collect();
        serde_json::json!({
            "dimension": self.degree,
            "basis": basis,
            "values": values,
        })
    }
}

impl Cochain {
    /// Parse the JSON form written by [`Cochain::to_json`]. Basis elements
    /// not listed are zero; coefficients may be numbers or decimal strings.
    pub fn from_json(
        value: &serde_json::Value,
        expected: BasisKind,
        labels: &[String],
        generators: usize,
    ) -> Result<Self, AlgebraError> {
        let bad = |m: &str| AlgebraError::Dimension(format!("cochain JSON: {m}"));
        let degree = value["dimension"].as_u64().ok_or_else(|| bad("missing dimension"))? as usize;
        if let Some(b) = value.get("basis") {
            let b: BasisKind = serde_json::from_value(b.clone()).map_err(|e| bad(&e.to_string()))?;
            if b != expected {
                return Err(bad("basis does not match"));
            }
        }
        let mut out = Cochain::zero(degree, labels.len(), generators);
        for entry in value["values"].as_array().ok_or_else(|| bad("missing values"))? {
            let label = entry[0].as_str().ok_or_else(|| bad("label must be a string"))?;
            let i = labels.iter().position(|l| l == label).ok_or_else(|| bad(&format!("unknown basis element {label}")))?;
            let coeffs = entry[1].as_array().ok_or_else(|| bad("coefficients must be a list"))?;
            if coeffs.len() != generators {
                return Err(bad(&format!("{label} has {} coefficients, expected {generators}", coeffs.len())));
            }
            for (slot, c) in out.values[i].iter_mut().zip(coeffs) {
                *slot = match c {
                    serde_json::Value::Number(n) => Integer::from(n.as_i64().ok_or_else(|| bad("coefficient is not an integer"))?),
                    serde_json::Value::String(s) => s.parse().map_err(|_| bad("coefficient is not an integer"))?,
                    _ => return Err(bad("coefficient is not an integer")),
                };
            }
        }
        Ok(out)
    }
}

/// A complex with coefficients as an increasing sequence `E^0 → … → E^N`
/// (for homology the degrees are reversed), together with the relation
/// part `F` and the cone `Cone^p = F^{p+1} ⊕ E^p`.
#[derive(Clone, Debug)]
pub struct CoefficientComplex {
    pub direction: Direction,
    pub coeffs: CoefficientSystem,
    top: usize,
    g: usize,
    m: usize,
    /// Basis sizes of the underlying free complex, by position.
    dims: Vec<usize>,
    e_maps: Vec<IntegerMatrix>,
    f_maps: Vec<IntegerMatrix>,
    relations_t: IntegerMatrix,
    relations_snf: Option<SnfResult>,
}

impl CoefficientComplex {
    fn new(c: &ChainComplexData, coeffs: &CoefficientSystem, dir: Direction) -> Self {
        let top = c.top();
        let g = coeffs.generators();
        let group = coeffs.group();
        let m = group.relation_rank();
        let raw_dims = c.dims();
        let position_degree = |p: usize| match dir {
            Direction::Homology => top - p,
            Direction::Cohomology => p,
        };
        let dims: Vec<usize> = (0..=top).map(|p| raw_dims[position_degree(p)]).collect();
        let tau = coeffs.twist().cloned();
        let tau_r = coeffs.twist_on_relations().cloned();
        let idg = IntegerMatrix::identity(g);
        let idm = IntegerMatrix::identity(m);
        let build = |p: usize, id: &IntegerMatrix, t: Option<&IntegerMatrix>| -> IntegerMatrix {
            // map from position p to p + 1
            let k = match dir {
                Direction::Homology => top - p,
                Direction::Cohomology => p + 1,
            };
            c.tensored(k, dir, id, t)
        };
        let e_maps: Vec<IntegerMatrix> = (0..top).into_par_iter().map(|p| build(p, &idg, tau.as_ref())).collect();
        let f_maps: Vec<IntegerMatrix> = if m == 0 {
            Vec::new()
        } else {
            (0..top).into_par_iter().map(|p| build(p, &idm, tau_r.as_ref())).collect()
        };
        let relations_t = group.relation_basis().transpose();
        let relations_snf = (m > 0).then(|| smith_normal_form(&relations_t));
        CoefficientComplex {
            direction: dir,
            coeffs: coeffs.clone(),
            top,
            g,
            m,
            dims,
            e_maps,
            f_maps,
            relations_t,
            relations_snf,
        }
    }

    /// Position of degree `d`.
    pub fn position(&self, d: usize) -> usize {
        match self.direction {
            Direction::Homology => self.top - d,
            Direction::Cohomology => d,
        }
    }

    pub fn degree(&self, p: usize) -> usize {
        self.position(p)
    }

    pub fn generators(&self) -> usize {
        self.g
    }

    fn edim(&self, q: isize) -> usize {
        if q < 0 || q as usize > self.top {
            0
        } else {
            self.dims[q as usize] * self.g
        }
    }

    fn fdim(&self, q: isize) -> usize {
        if q < 0 || q as usize > self.top {
            0
        } else {
            self.dims[q as usize] * self.m
        }
    }

    pub fn cone_dim(&self, p: isize) -> usize {
        self.fdim(p + 1) + self.edim(p)
    }

    fn e_map(&self, q: isize) -> Option<&IntegerMatrix> {
        (q >= 0 && (q as usize) < self.top).then(|| &self.e_maps[q as usize])
    }

    fn f_map(&self, q: isize) -> Option<&IntegerMatrix> {
        (self.m > 0 && q >= 0 && (q as usize) < self.top).then(|| &self.f_maps[q as usize])
    }

    fn phi(&self, q: isize) -> Option<IntegerMatrix> {
        (self.m > 0 && q >= 0 && q as usize <= self.top)
            .then(|| IntegerMatrix::identity(self.dims[q as usize]).kron(&self.relations_t))
    }

    /// `D : Cone^p → Cone^{p+1}`, `(f, e) ↦ (−δf, φf + δe)`.
    pub fn cone_map(&self, p: isize) -> IntegerMatrix {
        let rows = [self.fdim(p + 2), self.edim(p + 1)];
        let cols = [self.fdim(p + 1), self.edim(p)];
        let neg_f = self.f_map(p + 1).map(|f| f.neg());
        let phi = self.phi(p + 1);
        let e = self.e_map(p);
        IntegerMatrix::block(&rows, &cols, &[vec![neg_f.as_ref(), None], vec![phi.as_ref(), e]])
    }

    pub fn group(&self, p: usize) -> GroupDescriptor {
        let p = p as isize;
        let incoming = invariant_factors(&self.cone_map(p - 1));
        let out_rank = invariant_factors(&self.cone_map(p)).len();
        GroupDescriptor::from_factors(self.cone_dim(p) - out_rank - incoming.len(), &incoming)
    }

    /// Groups at positions `0..=N`.
    pub fn all_groups(&self) -> Vec<GroupDescriptor> {
        let n = self.top as isize;
        let factors: Vec<Vec<Integer>> =
            (-1..=n).into_par_iter().map(|p| invariant_factors(&self.cone_map(p))).collect();
        (0..=n)
            .map(|p| {
                let incoming = &factors[p as usize];
                let out_rank = factors[p as usize + 1].len();
                GroupDescriptor::from_factors(self.cone_dim(p) - out_rank - incoming.len(), incoming)
            })
            .collect()
    }

    pub fn class_space(&self, p: usize) -> ClassSpace {
        let p = p as isize;
        ClassSpace::new(&self.cone_map(p - 1), &self.cone_map(p))
    }

    /// Apply the differential to an `E`-element at position `p`.
    pub fn apply_e(&self, p: usize, x: &[Integer]) -> Vec<Integer> {
        match self.e_map(p as isize) {
            Some(m) => m.mul_vec(x),
            None => Vec::new(),
        }
    }

    /// Solve `R'ᵀ·y = x` blockwise.
    fn relation_preimage(&self, x: &[Integer]) -> Option<Vec<Integer>> {
        if self.m == 0 {
            return x.iter().all(|v| v.is_zero()).then(Vec::new);
        }
        let snf = self.relations_snf.as_ref().expect("relations present");
        let mut out = Vec::with_capacity(x.len() / self.g * self.m);
        for block in x.chunks(self.g) {
            out.extend(snf.solve(block)?);
        }
        Some(out)
    }

    /// Lift a cocycle of `E^p ⊗ A` to a cone cocycle.
    pub fn lift(&self, p: usize, e: &[Integer]) -> Option<Vec<Integer>> {
        let de = self.apply_e(p, e);
        let f = self.relation_preimage(&de)?;
        let mut out: Vec<Integer> = f.into_iter().map(|v| -v).collect();
        out.extend(e.iter().cloned());
        Some(out)
    }

    /// `E`-part of a cone element at position `p`.
    pub fn e_part(&self, p: isize, x: &[Integer]) -> Vec<Integer> {
        x[self.fdim(p + 1)..].to_vec()
    }
}

/// `ker(out) / im(in)` at one position of a sequence of free groups, with
/// coordinates: torsion coordinates from the SNF of `in`, free coordinates
/// from the SNF of `out` restricted to the complement of its image.
#[derive(Clone, Debug)]
pub struct ClassSpace {
    dim: usize,
    outgoing: IntegerMatrix,
    incoming: SnfResult,
    kernel: SnfResult,
    pub descriptor: GroupDescriptor,
}

impl ClassSpace {
    pub fn new(incoming: &IntegerMatrix, outgoing: &IntegerMatrix) -> Self {
        let dim = incoming.rows();
        assert_eq!(outgoing.cols(), dim, "sequence shapes");
        let inc = smith_normal_form(incoming);
        let r1 = inc.rank();
        let w = outgoing.mul(&inc.u_inv).column_slice(r1, dim);
        let kernel = smith_normal_form(&w);
        let free = dim - r1 - kernel.rank();
        let descriptor = GroupDescriptor::from_factors(free, &inc.diagonal);
        ClassSpace { dim, outgoing: outgoing.clone(), incoming: inc, kernel, descriptor }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_cycle(&self, x: &[Integer]) -> bool {
        self.outgoing.mul_vec(x).iter().all(|v| v.is_zero())
    }

    /// Coordinates (torsion residues, then free coordinates) of a cycle.
    pub fn coordinates(&self, x: &[Integer]) -> Vec<Integer> {
        let y = self.incoming.u.mul_vec(x);
        let r1 = self.incoming.rank();
        let mut out = Vec::new();
        for (i, d) in self.incoming.diagonal.iter().enumerate() {
            if !num_traits::One::is_one(d) {
                out.push(crate::coefficients::modulo(&y[i], d));
            }
        }
        let z = self.kernel.v_inv.mul_vec(&y[r1..]);
        out.extend(z[self.kernel.rank()..].iter().cloned());
        out
    }

    /// `w` with `in·w = x` when `x` is a boundary.
    pub fn preimage(&self, x: &[Integer]) -> Option<Vec<Integer>> {
        self.incoming.solve(x)
    }

    /// Representative reduced against the image lattice.
    pub fn canonical(&self, x: &[Integer]) -> Vec<Integer> {
        let mut y = self.incoming.u.mul_vec(x);
        for (i, d) in self.incoming.diagonal.iter().enumerate() {
            y[i] = crate::coefficients::modulo(&y[i], d);
        }
        self.incoming.u_inv.mul_vec(&y)
    }

    /// Representative cycles of the generators, in coordinate order.
    pub fn generators(&self) -> Vec<Vec<Integer>> {
        let r1 = self.incoming.rank();
        let mut out = Vec::new();
        for (i, d) in self.incoming.diagonal.iter().enumerate() {
            if !num_traits::One::is_one(d) {
                out.push(self.incoming.u_inv.column(i));
            }
        }
        let r2 = self.kernel.rank();
        for j in r2..self.kernel.cols {
            let mut y = vec![Integer::zero(); self.dim];
            let col = self.kernel.v.column(j);
            for (k, v) in col.into_iter().enumerate() {
                y[r1 + k] = v;
            }
            out.push(self.incoming.u_inv.mul_vec(&y));
        }
        out
    }
}

/// A cohomology (or homology) class: coordinates in the invariant-factor
/// basis of its group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassHandle {
    pub degree: usize,
    pub group: GroupDescriptor,
    pub coordinates: Vec<Integer>,
}

impl ClassHandle {
    pub fn is_zero(&self) -> bool {
        self.coordinates.iter().all(|c| c.is_zero())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "degree": self.degree,
            "group": self.group,
            "coordinates": self.coordinates.iter().map(int_json).collect::<Vec<_>>(),
            "zero": self.is_zero(),
        })
    }
}

/// Class arithmetic at one degree with given coefficients.
#[derive(Clone, Debug)]
pub struct ClassGroup {
    pub complex: CoefficientComplex,
    pub degree: usize,
    position: usize,
    space: ClassSpace,
}

impl ClassGroup {
    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.space.descriptor
    }

    fn lift(&self, x: &Cochain) -> Result<Vec<Integer>, AlgebraError> {
        let expected = self.complex.dims[self.position];
        if x.degree != self.degree || x.values.len() != expected || x.generators != self.complex.g {
            return Err(AlgebraError::Dimension(format!(
                "expected {} values of length {} in degree {}",
                expected, self.complex.g, self.degree
            )));
        }
        let flat = x.flat();
        let lifted = self.complex.lift(self.position, &flat);
        match lifted {
            Some(v) if self.space.is_cycle(&v) => Ok(v),
            _ => Err(match self.complex.direction {
                Direction::Cohomology => AlgebraError::NotACocycle(self.degree),
                Direction::Homology => AlgebraError::NotACycle(self.degree),
            }),
        }
    }

    pub fn is_cocycle(&self, x: &Cochain) -> bool {
        self.lift(x).is_ok()
    }

    pub fn class_of(&self, x: &Cochain) -> Result<ClassHandle, AlgebraError> {
        let v = self.lift(x)?;
        Ok(ClassHandle { degree: self.degree, group: self.space.descriptor.clone(), coordinates: self.space.coordinates(&v) })
    }

    /// `Some(w)` with `δw ≡ x` (modulo relations) when `x` is a coboundary.
    pub fn coboundary_witness(&self, x: &Cochain) -> Result<Option<Cochain>, AlgebraError> {
        let v = self.lift(x)?;
        let p = self.position as isize;
        Ok(self.space.preimage(&v).map(|w| {
            let e = self.complex.e_part(p - 1, &w);
            let degree = match self.complex.direction {
                Direction::Cohomology => self.degree.wrapping_sub(1),
                Direction::Homology => self.degree + 1,
            };
            Cochain::from_flat(degree, self.complex.g, e)
        }))
    }

    pub fn is_coboundary(&self, x: &Cochain) -> Result<bool, AlgebraError> {
        Ok(self.class_of(x)?.is_zero())
    }

    /// Representative of the class of `x` reduced against the image lattice.
    pub fn canonical(&self, x: &Cochain) -> Result<Cochain, AlgebraError> {
        let v = self.lift(x)?;
        let c = self.space.canonical(&v);
        Ok(Cochain::from_flat(self.degree, self.complex.g, self.complex.e_part(self.position as isize, &c)))
    }

    /// Representatives of the generators of the group.
    pub fn generators(&self) -> Vec<Cochain> {
        self.space
            .generators()
            .into_iter()
            .map(|v| Cochain::from_flat(self.degree, self.complex.g, self.complex.e_part(self.position as isize, &v)))
            .collect()
    }
}

/// Reduced homology `H̃_{−1} … H̃_{dim}` over the integers, from the
/// augmented chain complex. The complex `{∅}` has `H̃_{−1} = Z`.
pub fn reduced_homology(k: &SimplicialComplex) -> Vec<GroupDescriptor> {
    if k.is_void_link() {
        return vec![GroupDescriptor::free(1)];
    }
    let n = k.dim() as usize;
    let dims: Vec<usize> = (0..=n).map(|d| k.simplices(d).len()).collect();
    // boundary maps ∂_0 (augmentation) … ∂_n
    let factors: Vec<Vec<Integer>> = (0..=n)
        .into_par_iter()
        .map(|d| {
            if d == 0 {
                let e = IntegerMatrix::from_triplets(1, dims[0], (0..dims[0]).map(|j| (0, j, 1)));
                invariant_factors(&e)
            } else {
                invariant_factors(&simplicial_boundary(k, d, None))
            }
        })
        .collect();
    let mut out = Vec::with_capacity(n + 2);
    // degree −1: one generator, hit by the augmentation
    out.push(GroupDescriptor::from_factors(1 - factors[0].len(), &factors[0]));
    for d in 0..=n {
        let out_rank = factors[d].len();
        let incoming: &[Integer] = if d < n { &factors[d + 1] } else { &[] };
        out.push(GroupDescriptor::from_factors(dims[d] - out_rank - incoming.len(), incoming));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::cover::orientability_and_double_cover;

    fn z() -> CoefficientSystem {
        CoefficientSystem::integers()
    }

    fn descr(v: &[GroupDescriptor]) -> Vec<String> {
        v.iter().map(|g| g.to_string()).collect()
    }

    #[test]
    fn boundary_matrix_shapes() {
        let c = ChainComplexData::simplicial(&corpus::sphere(2));
        assert_eq!(c.boundary_plain(1).shape(), (4, 6));
        assert_eq!(c.boundary_plain(2).shape(), (6, 4));
        assert!(c.first_nonzero_square().is_none());
    }

    #[test]
    fn sphere_and_projective_plane() {
        let c = ChainComplexData::simplicial(&corpus::sphere(2));
        assert_eq!(descr(&c.homology_all(&z())), ["Z", "0", "Z"]);
        let c = ChainComplexData::simplicial(&corpus::rp2());
        assert_eq!(descr(&c.homology_all(&z())), ["Z", "Z/2", "0"]);
        assert_eq!(descr(&c.cohomology_all(&z())), ["Z", "0", "Z/2"]);
        let z2 = CoefficientSystem::mod_k(2);
        assert_eq!(descr(&c.homology_all(&z2)), ["Z/2", "Z/2", "Z/2"]);
        assert_eq!(descr(&c.cohomology_all(&z2)), ["Z/2", "Z/2", "Z/2"]);
    }

    #[test]
    fn torus_with_presented_coefficients() {
        let c = ChainComplexData::simplicial(&corpus::torus());
        assert_eq!(descr(&c.homology_all(&z())), ["Z", "Z^2", "Z"]);
        let z6 = CoefficientSystem::mod_k(6);
        assert_eq!(descr(&c.homology_all(&z6)), ["Z/6", "Z/6 + Z/6", "Z/6"]);
        let a = CoefficientSystem::presented("A", 2, IntegerMatrix::from_dense(&[vec![2, 0]])).unwrap();
        assert_eq!(descr(&c.cohomology_all(&a)), ["Z + Z/2", "Z^2 + Z/2 + Z/2", "Z + Z/2"]);
    }

    #[test]
    fn circle_mod_two_rank() {
        let c = ChainComplexData::simplicial(&corpus::sphere(1));
        let d1 = c.boundary_plain(1).to_dense();
        let mod2_rank = {
            let m = IntegerMatrix::from_dense(&d1);
            invariant_factors(&m).iter().filter(|d| (*d % 2u32) != Integer::zero()).count()
        };
        assert_eq!(mod2_rank, 2);
    }

    #[test]
    fn twisted_projective_plane() {
        let k = corpus::rp2();
        let (orientable, cover) = orientability_and_double_cover(&k).unwrap();
        assert!(!orientable);
        let c = ChainComplexData::twisted_simplicial(&k, &cover);
        assert!(c.first_nonzero_square().is_none());
        let zm = z().orientation_twisted();
        assert_eq!(descr(&c.homology_all(&zm)), ["Z/2", "0", "Z"]);
        // trivial action recovers ordinary homology
        assert_eq!(descr(&c.homology_all(&z())), ["Z", "Z/2", "0"]);
    }

    #[test]
    fn twisted_sphere_splits() {
        let k = corpus::sphere(4);
        let (orientable, cover) = orientability_and_double_cover(&k).unwrap();
        assert!(orientable);
        let c = ChainComplexData::twisted_simplicial(&k, &cover);
        let zm = z().orientation_twisted();
        assert_eq!(c.homology(4, &zm), GroupDescriptor::free(1));
        assert_eq!(c.homology(0, &zm), GroupDescriptor::free(1));
    }

    #[test]
    fn classes_and_witnesses() {
        let k = corpus::sphere(2);
        let c = ChainComplexData::simplicial(&k);
        let h2 = c.classes(2, &z(), Direction::Cohomology).unwrap();
        assert!(h2.descriptor().is_integers());
        // a single facet generates H^2
        let x = Cochain::from_scalars(2, &[1, 0, 0, 0]);
        let class = h2.class_of(&x).unwrap();
        assert!(!class.is_zero());
        assert_eq!(h2.coboundary_witness(&x).unwrap(), None);
        // a coboundary has a witness
        let w = Cochain::from_scalars(1, &[1, -2, 0, 3, 0, 1]);
        let dw = c.coboundary(&w, &z());
        let wit = h2.coboundary_witness(&dw).unwrap().unwrap();
        assert_eq!(c.coboundary(&wit, &z()), dw);
        // non-cocycles are rejected
        let h1 = c.classes(1, &z(), Direction::Cohomology).unwrap();
        assert_eq!(h1.class_of(&w).unwrap_err(), AlgebraError::NotACocycle(1));
    }

    #[test]
    fn torsion_classes_mod_relations() {
        let c = ChainComplexData::simplicial(&corpus::rp2());
        let z2 = CoefficientSystem::mod_k(2);
        let h1 = c.classes(1, &z2, Direction::Cohomology).unwrap();
        assert_eq!(h1.descriptor().to_string(), "Z/2");
        let gens = h1.generators();
        assert_eq!(gens.len(), 1);
        let class = h1.class_of(&gens[0]).unwrap();
        assert_eq!(class.coordinates, vec![Integer::from(1)]);
        let doubled = Cochain { degree: 1, generators: 1, values: gens[0].values.iter().map(|v| vec![&v[0] * 2]).collect() };
        assert!(h1.is_coboundary(&doubled).unwrap());
        let can = h1.canonical(&gens[0]).unwrap();
        assert_eq!(h1.class_of(&can).unwrap(), class);
    }

    #[test]
    fn reduced_homology_of_links() {
        assert_eq!(descr(&reduced_homology(&SimplicialComplex::empty())), ["Z"]);
        assert_eq!(descr(&reduced_homology(&corpus::sphere(2))), ["0", "0", "0", "Z"]);
        let two_points = SimplicialComplex::zero_sphere("a", "b");
        assert_eq!(descr(&reduced_homology(&two_points)), ["0", "Z"]);
        assert_eq!(descr(&reduced_homology(&corpus::torus())), ["0", "0", "Z^2", "Z"]);
    }

    #[test]
    fn cochain_json_round_trip() {
        let k = corpus::rp2();
        let c = ChainComplexData::simplicial(&k);
        let z2 = CoefficientSystem::mod_k(2);
        let x = c.classes(1, &z2, Direction::Cohomology).unwrap().generators().remove(0);
        let j = x.to_json(BasisKind::Simplices, c.labels(1), &z2);
        let y = Cochain::from_json(&j, BasisKind::Simplices, c.labels(1), 1).unwrap();
        assert_eq!(x.support(&z2), y.support(&z2));
        assert!(Cochain::from_json(&j, BasisKind::DualCones, c.labels(1), 1).is_err());
    }
}
