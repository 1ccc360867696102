//! Coefficient groups given by presentations, optional Z/2 actions, and
//! short exact sequences between them.

use num_traits::{One, Signed, Zero};

use crate::error::AlgebraError;
use crate::group::GroupDescriptor;
use crate::matrix::{Integer, IntegerMatrix};
use crate::snf::{smith_normal_form, SnfResult};

/// `Z^g / R` where the rows of `R` are relations.
#[derive(Clone, Debug)]
pub struct PresentedGroup {
    generators: usize,
    relations: IntegerMatrix,
    /// Full-row-rank basis `R'` of the relation lattice.
    basis: IntegerMatrix,
    snf: SnfResult,
    descriptor: GroupDescriptor,
}

impl PartialEq for PresentedGroup {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators && self.relations == other.relations
    }
}

impl Eq for PresentedGroup {}

impl PresentedGroup {
    pub fn new(generators: usize, relations: IntegerMatrix) -> Result<Self, AlgebraError> {
        if relations.cols() != generators {
            return Err(AlgebraError::Dimension(format!(
                "relation matrix has {} columns for {} generators",
                relations.cols(),
                generators
            )));
        }
        let snf = smith_normal_form(&relations);
        let rank = snf.rank();
        let rows: Vec<_> = (0..rank)
            .map(|i| snf.v_inv.row(i).iter().map(|(c, v)| (*c, v * &snf.diagonal[i])).collect())
            .collect();
        let basis = IntegerMatrix::from_rows(generators, rows);
        let descriptor = GroupDescriptor::from_factors(generators - rank, &snf.diagonal);
        Ok(PresentedGroup { generators, relations, basis, snf, descriptor })
    }

    pub fn free(generators: usize) -> Self {
        Self::new(generators, IntegerMatrix::zeros(0, generators)).expect("shape is consistent")
    }

    pub fn cyclic(k: u64) -> Self {
        Self::new(1, IntegerMatrix::from_dense(&[vec![Integer::from(k)]])).expect("shape is consistent")
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> &IntegerMatrix {
        &self.relations
    }

    pub fn relation_basis(&self) -> &IntegerMatrix {
        &self.basis
    }

    pub fn relation_rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.descriptor
    }

    /// Coordinates of an element in the invariant-factor decomposition:
    /// torsion coordinates (reduced) first, then free coordinates.
    pub fn coordinates(&self, x: &[Integer]) -> Vec<Integer> {
        assert_eq!(x.len(), self.generators);
        let c = self.snf.v.transpose().mul_vec(x);
        let rank = self.snf.rank();
        let mut out = Vec::with_capacity(self.descriptor.generator_count());
        for (i, d) in self.snf.diagonal.iter().enumerate() {
            if !d.is_one() {
                out.push(modulo(&c[i], d));
            }
        }
        out.extend(c[rank..].iter().cloned());
        out
    }

    pub fn is_zero_element(&self, x: &[Integer]) -> bool {
        self.coordinates(x).iter().all(|c| c.is_zero())
    }

    pub fn elements_equal(&self, x: &[Integer], y: &[Integer]) -> bool {
        let d: Vec<Integer> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        self.is_zero_element(&d)
    }

    /// Does `x` lie in the relation lattice.
    pub fn in_relations(&self, x: &[Integer]) -> bool {
        self.is_zero_element(x)
    }

    /// `y` with `R'ᵀ·y = x`, when `x` lies in the relation lattice.
    pub fn relation_coefficients(&self, x: &[Integer]) -> Option<Vec<Integer>> {
        if self.basis.rows() == 0 {
            return x.iter().all(|v| v.is_zero()).then(Vec::new);
        }
        let snf = smith_normal_form(&self.basis.transpose());
        snf.solve(x)
    }
}

pub(crate) fn modulo(a: &Integer, m: &Integer) -> Integer {
    let r = a % m;
    if r.is_negative() {
        r + m
    } else {
        r
    }
}

/// A coefficient group with an optional involution (the action of the
/// orientation character).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientSystem {
    pub name: String,
    group: PresentedGroup,
    twist: Option<IntegerMatrix>,
    /// Action of the twist on the relation basis: `τ·R'ᵀ = R'ᵀ·τ_R`.
    twist_on_relations: Option<IntegerMatrix>,
}

impl CoefficientSystem {
    pub fn new(name: impl Into<String>, group: PresentedGroup) -> Self {
        CoefficientSystem { name: name.into(), group, twist: None, twist_on_relations: None }
    }

    pub fn integers() -> Self {
        Self::new("Z", PresentedGroup::free(1))
    }

    pub fn mod_k(k: u64) -> Self {
        Self::new(format!("Z/{k}"), PresentedGroup::cyclic(k))
    }

    pub fn presented(name: impl Into<String>, generators: usize, relations: IntegerMatrix) -> Result<Self, AlgebraError> {
        Ok(Self::new(name, PresentedGroup::new(generators, relations)?))
    }

    /// Attach an involution `τ` (acting on generator coordinates).
    pub fn with_twist(mut self, tau: IntegerMatrix) -> Result<Self, AlgebraError> {
        let g = self.group.generators();
        if tau.shape() != (g, g) {
            return Err(AlgebraError::Dimension(format!("twist must be {g}x{g}")));
        }
        if tau.mul(&tau) != IntegerMatrix::identity(g) {
            return Err(AlgebraError::TwistNotInvolution);
        }
        let rt = self.group.relation_basis().transpose();
        let m = rt.cols();
        let image = tau.mul(&rt);
        let mut cols = Vec::with_capacity(m);
        if m > 0 {
            let snf = smith_normal_form(&rt);
            for j in 0..m {
                cols.push(snf.solve(&image.column(j)).ok_or(AlgebraError::TwistBreaksRelations)?);
            }
        }
        let tau_r = IntegerMatrix::from_triplets(
            m,
            m,
            cols.iter().enumerate().flat_map(|(j, c)| c.iter().enumerate().map(move |(i, v)| (i, j, v.clone()))),
        );
        self.twist = Some(tau);
        self.twist_on_relations = Some(tau_r);
        self.name = format!("{}~", self.name);
        Ok(self)
    }

    /// The action by `−1`.
    pub fn orientation_twisted(self) -> Self {
        let g = self.group.generators();
        self.with_twist(IntegerMatrix::identity(g).neg()).expect("negation preserves every lattice")
    }

    pub fn group(&self) -> &PresentedGroup {
        &self.group
    }

    pub fn generators(&self) -> usize {
        self.group.generators()
    }

    pub fn twist(&self) -> Option<&IntegerMatrix> {
        self.twist.as_ref()
    }

    pub fn twist_on_relations(&self) -> Option<&IntegerMatrix> {
        self.twist_on_relations.as_ref()
    }

    pub fn is_twisted(&self) -> bool {
        self.twist.is_some()
    }

    pub fn untwisted(&self) -> Self {
        let mut c = self.clone();
        c.twist = None;
        c.twist_on_relations = None;
        c.name = c.name.trim_end_matches('~').to_string();
        c
    }
}

/// A homomorphism `Z^{g_s} → Z^{g_t}` inducing a map of presented groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupMap {
    /// `g_t × g_s`.
    pub matrix: IntegerMatrix,
}

impl GroupMap {
    pub fn new(source: &PresentedGroup, target: &PresentedGroup, matrix: IntegerMatrix) -> Result<Self, AlgebraError> {
        if matrix.shape() != (target.generators(), source.generators()) {
            return Err(AlgebraError::BadGroupMap(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.generators(),
                source.generators()
            )));
        }
        for r in 0..source.relations().rows() {
            let rel = (0..source.generators()).map(|c| source.relations().get(r, c)).collect::<Vec<_>>();
            if !target.in_relations(&matrix.mul_vec(&rel)) {
                return Err(AlgebraError::BadGroupMap(format!("relation {r} is not sent to a relation")));
            }
        }
        Ok(GroupMap { matrix })
    }
}

/// `0 → A →i→ B →π→ C → 0`.
#[derive(Clone, Debug)]
pub struct ShortExactSequence {
    pub a: PresentedGroup,
    pub b: PresentedGroup,
    pub c: PresentedGroup,
    pub i: GroupMap,
    pub pi: GroupMap,
}

impl ShortExactSequence {
    pub fn new(a: PresentedGroup, b: PresentedGroup, c: PresentedGroup, i: IntegerMatrix, pi: IntegerMatrix) -> Result<Self, AlgebraError> {
        let i = GroupMap::new(&a, &b, i)?;
        let pi = GroupMap::new(&b, &c, pi)?;
        let comp = pi.matrix.mul(&i.matrix);
        for j in 0..a.generators() {
            if !c.in_relations(&comp.column(j)) {
                return Err(AlgebraError::BadGroupMap("composite A → C is not zero".into()));
            }
        }
        Ok(ShortExactSequence { a, b, c, i, pi })
    }

    /// `0 → Z →×k→ Z → Z/k → 0`.
    pub fn multiplication(k: u64) -> Self {
        let one = IntegerMatrix::identity(1);
        Self::new(
            PresentedGroup::free(1),
            PresentedGroup::free(1),
            PresentedGroup::cyclic(k),
            IntegerMatrix::from_dense(&[vec![Integer::from(k)]]),
            one,
        )
        .expect("standard sequence")
    }

    /// `0 → ker(r) → B → Z/2 → 0` for a character `r: B → Z/2` given on
    /// generators. When `r` is zero the sequence degenerates to
    /// `0 → B → B → 0 → 0` with a zero map to `Z/2`.
    pub fn kernel_of_character(b: &PresentedGroup, r: &[u8]) -> Result<Self, AlgebraError> {
        let g = b.generators();
        if r.len() != g {
            return Err(AlgebraError::Dimension(format!("character has {} values for {g} generators", r.len())));
        }
        let pi = IntegerMatrix::from_triplets(1, g, r.iter().enumerate().map(|(j, &v)| (0, j, Integer::from(v % 2))));
        let lattice = match r.iter().position(|v| v % 2 == 1) {
            None => IntegerMatrix::identity(g),
            Some(j) => {
                // columns: e_i − r_i e_j (i ≠ j) and 2 e_j
                let mut t = Vec::new();
                for i in 0..g {
                    if i == j {
                        t.push((j, i, Integer::from(2)));
                    } else {
                        t.push((i, i, Integer::one()));
                        if r[i] % 2 == 1 {
                            t.push((j, i, -Integer::one()));
                        }
                    }
                }
                IntegerMatrix::from_triplets(g, g, t)
            }
        };
        // relations of B rewritten in the lattice basis
        let rt = b.relation_basis().transpose();
        let snf = smith_normal_form(&lattice);
        let mut rows = Vec::new();
        for k in 0..rt.cols() {
            let coeffs = snf
                .solve(&rt.column(k))
                .ok_or_else(|| AlgebraError::BadGroupMap("character does not vanish on relations".into()))?;
            rows.push(coeffs);
        }
        let a_rel = IntegerMatrix::from_dense(&if rows.is_empty() { vec![] } else { rows });
        let a_rel = if a_rel.cols() == 0 { IntegerMatrix::zeros(0, g) } else { a_rel };
        let a = PresentedGroup::new(g, a_rel)?;
        Self::new(a, b.clone(), PresentedGroup::cyclic(2), lattice, pi)
    }
}
