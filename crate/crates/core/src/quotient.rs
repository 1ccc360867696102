//! Finite quotients of presented groups and the three-valued
//! simple-connectivity verdict.

use std::collections::{BTreeSet, HashMap};

use num_integer::Integer as _;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::matrix::Integer;
use crate::presentation::{simplify, GroupPresentation, TietzeMove, TietzeState, Word};

/// Permutation of `0..n`; composition applies the left factor first.
pub type Perm = Vec<u32>;

pub fn compose(p: &[u32], q: &[u32]) -> Perm {
    p.iter().map(|&i| q[i as usize]).collect()
}

pub fn invert(p: &[u32]) -> Perm {
    let mut out = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        out[x as usize] = i as u32;
    }
    out
}

fn identity(n: usize) -> Perm {
    (0..n as u32).collect()
}

/// Image of a word under generator images (`images[g-1]` for generator g).
pub fn evaluate(word: &[i32], images: &[Perm], degree: usize) -> Perm {
    let mut acc = identity(degree);
    for &x in word {
        let p = &images[x.unsigned_abs() as usize - 1];
        acc = if x > 0 { compose(&acc, p) } else { compose(&acc, &invert(p)) };
    }
    acc
}

/// Size of the subgroup generated by `gens`.
pub fn generated_order(gens: &[Perm], degree: usize) -> usize {
    let mut seen: BTreeSet<Perm> = BTreeSet::new();
    let id = identity(degree);
    let mut frontier = vec![id.clone()];
    seen.insert(id);
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = compose(&x, g);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen.len()
}

/// A finite permutation group with its multiplication table.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    pub name: String,
    pub degree: usize,
    pub elements: Vec<Perm>,
    table: Vec<u16>,
    inverses: Vec<u16>,
    class_reps: Vec<u16>,
}

impl FiniteGroup {
    pub fn generated(name: impl Into<String>, degree: usize, gens: &[Perm]) -> Self {
        let id = identity(degree);
        let mut index: HashMap<Perm, usize> = HashMap::from([(id.clone(), 0)]);
        let mut elements = vec![id];
        let mut i = 0;
        while i < elements.len() {
            for g in gens {
                let y = compose(&elements[i], g);
                if !index.contains_key(&y) {
                    index.insert(y.clone(), elements.len());
                    elements.push(y);
                }
            }
            i += 1;
        }
        let n = elements.len();
        assert!(n <= u16::MAX as usize);
        let mut table = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = index[&compose(&elements[a], &elements[b])] as u16;
            }
        }
        let inverses = elements.iter().map(|p| index[&invert(p)] as u16).collect();
        let mut g = FiniteGroup { name: name.into(), degree, elements, table, inverses, class_reps: Vec::new() };
        g.class_reps = g.conjugacy_class_reps();
        g
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    fn mul(&self, a: u16, b: u16) -> u16 {
        self.table[a as usize * self.order() + b as usize]
    }

    fn conjugacy_class_reps(&self) -> Vec<u16> {
        let n = self.order();
        let mut assigned = vec![false; n];
        let mut reps = Vec::new();
        for x in 0..n as u16 {
            if assigned[x as usize] {
                continue;
            }
            reps.push(x);
            for g in 0..n as u16 {
                let c = self.mul(self.mul(self.inverses[g as usize], x), g);
                assigned[c as usize] = true;
            }
        }
        reps
    }

    fn eval(&self, word: &[i32], images: &[u16]) -> u16 {
        let mut acc = 0u16;
        for &x in word {
            let e = images[x.unsigned_abs() as usize - 1];
            acc = self.mul(acc, if x > 0 { e } else { self.inverses[e as usize] });
        }
        acc
    }

    fn generates_all(&self, images: &[u16]) -> bool {
        let n = self.order();
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0u16];
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &g in images {
                let y = self.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == n
    }

    pub fn cyclic(n: usize) -> Self {
        let rot: Perm = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
        Self::generated(format!("Z/{n}"), n, &[rot])
    }

    pub fn symmetric(n: usize) -> Self {
        let mut t = identity(n);
        t.swap(0, 1);
        let c: Perm = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
        Self::generated(format!("S{n}"), n, &[t, c])
    }

    pub fn alternating(n: usize) -> Self {
        let gens: Vec<Perm> = (2..n)
            .map(|k| {
                let mut p = identity(n);
                p[0] = 1;
                p[1] = k as u32;
                p[k] = 0;
                p
            })
            .collect();
        Self::generated(format!("A{n}"), n, &gens)
    }

    pub fn dihedral(n: usize) -> Self {
        let rot: Perm = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
        let refl: Perm = (0..n as u32).map(|i| (n as u32 - i) % n as u32).collect();
        Self::generated(format!("D{n}"), n, &[rot, refl])
    }

    /// `SL(2, p)` acting on the nonzero vectors of `F_p²`.
    pub fn special_linear(p: u32) -> Self {
        let vectors: Vec<(u32, u32)> = (0..p).flat_map(|a| (0..p).map(move |b| (a, b))).filter(|v| *v != (0, 0)).collect();
        let pos: HashMap<(u32, u32), u32> = vectors.iter().enumerate().map(|(i, v)| (*v, i as u32)).collect();
        let act = |m: [u32; 4]| -> Perm {
            vectors.iter().map(|&(x, y)| pos[&((m[0] * x + m[1] * y) % p, (m[2] * x + m[3] * y) % p)]).collect()
        };
        let gens = [act([1, 1, 0, 1]), act([1, 0, 1, 1])];
        Self::generated(format!("SL(2,{p})"), vectors.len(), &gens)
    }

    /// The quaternion group inside `SL(2,3)`.
    pub fn quaternion() -> Self {
        let vectors: Vec<(u32, u32)> = (0..3).flat_map(|a| (0..3).map(move |b| (a, b))).filter(|v| *v != (0, 0)).collect();
        let pos: HashMap<(u32, u32), u32> = vectors.iter().enumerate().map(|(i, v)| (*v, i as u32)).collect();
        let act = |m: [u32; 4]| -> Perm {
            vectors.iter().map(|&(x, y)| pos[&((m[0] * x + m[1] * y) % 3, (m[2] * x + m[3] * y) % 3)]).collect()
        };
        Self::generated("Q8", 8, &[act([0, 2, 1, 0]), act([1, 1, 1, 2])])
    }
}

/// Non-abelian groups tried for epimorphisms, in increasing order. Cyclic
/// quotients are decided through the abelianization instead. Every
/// nontrivial group of order ≤ 120 maps onto a simple group of that order
/// or less, and the simple ones are the `Z/p` and `A5`, so the verdict is
/// complete relative to the bound.
pub fn nonabelian_catalog(bound: usize) -> Vec<FiniteGroup> {
    let builders: [(usize, fn() -> FiniteGroup); 11] = [
        (6, || FiniteGroup::symmetric(3)),
        (8, || FiniteGroup::dihedral(4)),
        (8, FiniteGroup::quaternion),
        (10, || FiniteGroup::dihedral(5)),
        (12, || FiniteGroup::alternating(4)),
        (12, || FiniteGroup::dihedral(6)),
        (24, || FiniteGroup::symmetric(4)),
        (24, || FiniteGroup::special_linear(3)),
        (60, || FiniteGroup::alternating(5)),
        (120, || FiniteGroup::symmetric(5)),
        (120, || FiniteGroup::special_linear(5)),
    ];
    builders.iter().filter(|(o, _)| *o <= bound).map(|(_, b)| b()).collect()
}

/// A homomorphism from the original presentation onto a finite group,
/// given by permutation images of the generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientWitness {
    pub group: String,
    pub order: usize,
    pub degree: usize,
    pub images: Vec<Perm>,
}

impl QuotientWitness {
    /// Relators map to the identity and the images generate a group of the
    /// stated order.
    pub fn verify(&self, p: &GroupPresentation) -> bool {
        if self.images.len() != p.generators || self.images.iter().any(|q| q.len() != self.degree) {
            return false;
        }
        let id = identity(self.degree);
        p.relators.iter().all(|r| evaluate(r, &self.images, self.degree) == id)
            && generated_order(&self.images, self.degree) == self.order
    }
}

/// Search outcome for one catalog group.
pub enum Search {
    Found(Vec<u16>),
    None,
    Exhausted,
}

/// Backtracking search for an epimorphism, with the first generator's image
/// restricted to conjugacy class representatives.
pub fn find_epimorphism(p: &GroupPresentation, g: &FiniteGroup, node_budget: usize) -> Search {
    let k = p.generators;
    if k == 0 {
        return if g.order() == 1 { Search::Found(Vec::new()) } else { Search::None };
    }
    // relators become checkable once their highest generator is assigned
    let mut by_level: Vec<Vec<&Word>> = vec![Vec::new(); k];
    for r in &p.relators {
        if let Some(m) = r.iter().map(|x| x.unsigned_abs() as usize).max() {
            by_level[m - 1].push(r);
        }
    }
    let all: Vec<u16> = (0..g.order() as u16).collect();
    let mut images = vec![0u16; k];
    let mut nodes = 0usize;
    fn rec(
        level: usize,
        p: (&[Vec<&Word>], &FiniteGroup, &[u16]),
        images: &mut Vec<u16>,
        nodes: &mut usize,
        budget: usize,
    ) -> Option<bool> {
        let (by_level, g, all) = p;
        let k = images.len();
        if level == k {
            return Some(g.generates_all(images));
        }
        let candidates = if level == 0 { &g.class_reps[..] } else { all };
        for &c in candidates {
            *nodes += 1;
            if *nodes > budget {
                return None;
            }
            images[level] = c;
            if by_level[level].iter().all(|r| g.eval(r, &images[..]) == 0) && rec(level + 1, p, images, nodes, budget)? {
                return Some(true);
            }
        }
        Some(false)
    }
    match rec(0, (&by_level, g, &all), &mut images, &mut nodes, node_budget) {
        Some(true) => Search::Found(images),
        Some(false) => Search::None,
        None => Search::Exhausted,
    }
}

/// Epimorphism onto `Z/n` read off the abelianization, if one exists.
pub fn cyclic_witness(p: &GroupPresentation, n: usize) -> Option<QuotientWitness> {
    let ab = p.abelianization_group();
    let desc = ab.descriptor();
    let index = if desc.free_rank > 0 {
        desc.torsion.len()
    } else {
        desc.torsion.iter().position(|t| t.is_multiple_of(&Integer::from(n)))?
    };
    let modulus = Integer::from(n);
    let images = (0..p.generators)
        .map(|j| {
            let mut e = vec![Integer::zero(); p.generators];
            e[j] = Integer::from(1);
            let a = ab.coordinates(&e)[index].mod_floor(&modulus).to_u32().expect("small");
            (0..n as u32).map(|i| (i + a) % n as u32).collect()
        })
        .collect();
    Some(QuotientWitness { group: format!("Z/{n}"), order: n, degree: n, images })
}

/// Images of all original generators from images of the generators that
/// survived simplification.
fn extend_through(state: &TietzeState, live_order: &[i32], live_images: &[Perm], total: usize, degree: usize) -> Vec<Perm> {
    let mut images: Vec<Option<Perm>> = vec![None; total];
    for (g, img) in live_order.iter().zip(live_images) {
        images[*g as usize - 1] = Some(img.clone());
    }
    for (g, expr) in state.eliminated.iter().rev() {
        let mut acc = identity(degree);
        for &x in expr {
            let p = images[x.unsigned_abs() as usize - 1].as_ref().expect("eliminated in order");
            acc = if x > 0 { compose(&acc, p) } else { compose(&acc, &invert(p)) };
        }
        images[*g as usize - 1] = Some(acc);
    }
    images.into_iter().map(|x| x.expect("every generator has an image")).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budgets {
    pub tietze_moves: usize,
    pub quotient_bound: usize,
    pub search_nodes: usize,
    pub seed: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { tietze_moves: 5000, quotient_bound: 120, search_nodes: 5_000_000, seed: 0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    Trivialization { moves: Vec<TietzeMove>, seed: u64 },
    Epimorphism { witness: QuotientWitness },
    BudgetsExhausted { tietze_moves: usize, quotient_bound: usize, incomplete_searches: Vec<String>, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SCVerdict {
    pub value: Verdict,
    pub evidence: Evidence,
}

impl SCVerdict {
    /// Replay the evidence against the presentation.
    pub fn verify(&self, p: &GroupPresentation) -> bool {
        match (&self.value, &self.evidence) {
            (Verdict::Yes, Evidence::Trivialization { moves, .. }) => {
                crate::presentation::replay(p, moves).map(|s| s.is_trivial()).unwrap_or(false)
            }
            (Verdict::No, Evidence::Epimorphism { witness }) => witness.order > 1 && witness.verify(p),
            (Verdict::Unknown, Evidence::BudgetsExhausted { .. }) => true,
            _ => false,
        }
    }
}

struct Simplified {
    state: TietzeState,
    reduced: GroupPresentation,
    order: Vec<i32>,
}

fn lift_witness(p: &GroupPresentation, s: &Simplified, g: &FiniteGroup, found: &[u16]) -> QuotientWitness {
    let live: Vec<Perm> = found.iter().map(|&e| g.elements[e as usize].clone()).collect();
    let images = extend_through(&s.state, &s.order, &live, p.generators, g.degree);
    QuotientWitness { group: g.name.clone(), order: g.order(), degree: g.degree, images }
}

pub fn simply_connected_verdict(p: &GroupPresentation, budgets: &Budgets) -> SCVerdict {
    let out = simplify(p, budgets.tietze_moves, budgets.seed);
    if out.trivialized {
        return SCVerdict { value: Verdict::Yes, evidence: Evidence::Trivialization { moves: out.moves, seed: budgets.seed } };
    }
    let (reduced, order) = out.state.remaining();
    let s = Simplified { state: out.state, reduced, order };
    let catalog = nonabelian_catalog(budgets.quotient_bound);
    let mut incomplete = Vec::new();
    let mut next = catalog.iter().peekable();
    for n in 2..=budgets.quotient_bound {
        if let Some(w) = cyclic_witness(p, n) {
            return SCVerdict { value: Verdict::No, evidence: Evidence::Epimorphism { witness: w } };
        }
        while let Some(g) = next.next_if(|g| g.order() == n) {
            match find_epimorphism(&s.reduced, g, budgets.search_nodes) {
                Search::Found(img) => {
                    let witness = lift_witness(p, &s, g, &img);
                    return SCVerdict { value: Verdict::No, evidence: Evidence::Epimorphism { witness } };
                }
                Search::None => {}
                Search::Exhausted => incomplete.push(g.name.clone()),
            }
        }
    }
    SCVerdict {
        value: Verdict::Unknown,
        evidence: Evidence::BudgetsExhausted {
            tietze_moves: out.moves_used,
            quotient_bound: budgets.quotient_bound,
            incomplete_searches: incomplete,
            seed: budgets.seed,
        },
    }
}

/// Orders of catalog groups (cyclic and non-abelian) that are quotients,
/// sorted and without repeats.
pub fn quotient_orders(p: &GroupPresentation, budgets: &Budgets) -> Vec<usize> {
    let out = simplify(p, budgets.tietze_moves, budgets.seed);
    let (reduced, _) = out.state.remaining();
    let mut orders = BTreeSet::new();
    if out.trivialized {
        return Vec::new();
    }
    for n in 2..=budgets.quotient_bound {
        if cyclic_witness(p, n).is_some() {
            orders.insert(n);
        }
    }
    for g in nonabelian_catalog(budgets.quotient_bound) {
        if !orders.contains(&g.order()) && matches!(find_epimorphism(&reduced, &g, budgets.search_nodes), Search::Found(_)) {
            orders.insert(g.order());
        }
    }
    orders.into_iter().collect()
}
