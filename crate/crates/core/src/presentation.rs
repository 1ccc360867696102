//! Finite group presentations: edge-path presentations of complexes,
//! Tietze simplification with a replayable transcript, abelianization.

use std::collections::{BTreeSet, HashMap, VecDeque};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coefficients::PresentedGroup;
use crate::complex::SimplicialComplex;
use crate::error::ManifoldError;
use crate::group::GroupDescriptor;
use crate::matrix::IntegerMatrix;

/// Letters are generator numbers starting at 1; a negative letter is an
/// inverse.
pub type Word = Vec<i32>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupPresentation {
    pub generators: usize,
    pub relators: Vec<Word>,
}

pub fn inverse(w: &[i32]) -> Word {
    w.iter().rev().map(|x| -x).collect()
}

pub fn free_reduce(w: &[i32]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &x in w {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

pub fn cyclic_reduce(w: &[i32]) -> Word {
    let mut w = free_reduce(w);
    while w.len() >= 2 && w[0] == -w[w.len() - 1] {
        w.pop();
        w.remove(0);
    }
    w
}

impl GroupPresentation {
    pub fn new(generators: usize, relators: Vec<Word>) -> Result<Self, ManifoldError> {
        for r in &relators {
            if let Some(x) = r.iter().find(|x| **x == 0 || x.unsigned_abs() as usize > generators) {
                return Err(ManifoldError::Precondition(format!("relator uses invalid generator {x}")));
            }
        }
        Ok(GroupPresentation { generators, relators })
    }

    /// Exponent-sum matrix (relators × generators).
    pub fn exponent_matrix(&self) -> IntegerMatrix {
        let entries = self.relators.iter().enumerate().flat_map(|(i, r)| {
            r.iter().map(move |&x| (i, x.unsigned_abs() as usize - 1, x.signum() as i64))
        });
        IntegerMatrix::from_triplets(self.relators.len(), self.generators, entries)
    }

    pub fn abelianization_group(&self) -> PresentedGroup {
        PresentedGroup::new(self.generators, self.exponent_matrix()).expect("shape is consistent")
    }

    pub fn abelianization(&self) -> GroupDescriptor {
        self.abelianization_group().descriptor().clone()
    }
}

/// Edge-path presentation: generators are the edges outside a breadth-first
/// spanning tree (from the first vertex, neighbours in vertex order),
/// numbered in edge order and oriented from the smaller vertex; one relator
/// per triangle.
pub fn edge_path_presentation(k: &SimplicialComplex) -> Result<GroupPresentation, ManifoldError> {
    if k.is_void_link() {
        return Ok(GroupPresentation { generators: 0, relators: Vec::new() });
    }
    if !k.is_connected() {
        return Err(ManifoldError::Disconnected);
    }
    let n = k.vertex_count();
    let edges = if k.dim() >= 1 { k.simplices(1) } else { &[] };
    let mut adj = vec![Vec::new(); n];
    for e in edges {
        let (a, b) = (e.vertices()[0] as usize, e.vertices()[1] as usize);
        adj[a].push(b);
        adj[b].push(a);
    }
    for l in adj.iter_mut() {
        l.sort_unstable();
    }
    let mut tree = BTreeSet::new();
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                tree.insert((v.min(w), v.max(w)));
                queue.push_back(w);
            }
        }
    }
    let mut gen_of: HashMap<(usize, usize), i32> = HashMap::new();
    for e in edges {
        let key = (e.vertices()[0] as usize, e.vertices()[1] as usize);
        if !tree.contains(&key) {
            let id = gen_of.len() as i32 + 1;
            gen_of.insert(key, id);
        }
    }
    let mut relators = Vec::new();
    if k.dim() >= 2 {
        for t in k.simplices(2) {
            let v: Vec<usize> = t.vertices().iter().map(|&x| x as usize).collect();
            let mut w = Vec::new();
            for (a, b, sign) in [(v[0], v[1], 1), (v[1], v[2], 1), (v[0], v[2], -1)] {
                if let Some(&g) = gen_of.get(&(a, b)) {
                    w.push(sign * g);
                }
            }
            relators.push(w);
        }
    }
    Ok(GroupPresentation { generators: gen_of.len(), relators })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum TietzeMove {
    /// Remove the relator at this index; it cyclically reduces to the
    /// empty word.
    DropTrivial { relator: usize },
    /// The generator occurs exactly once in the relator; solve for it,
    /// substitute it everywhere, and remove it and the relator.
    Eliminate { generator: i32, relator: usize },
}

/// Presentation state during simplification; generators keep their
/// original numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TietzeState {
    pub live: BTreeSet<i32>,
    pub relators: Vec<Word>,
    /// Eliminated generators with their expressions, in order.
    pub eliminated: Vec<(i32, Word)>,
}

impl TietzeState {
    pub fn new(p: &GroupPresentation) -> Self {
        TietzeState {
            live: (1..=p.generators as i32).collect(),
            relators: p.relators.iter().map(|r| cyclic_reduce(r)).collect(),
            eliminated: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.live.is_empty()
    }

    /// Apply a move, checking that it is legal.
    pub fn apply(&mut self, m: &TietzeMove) -> Result<(), String> {
        match *m {
            TietzeMove::DropTrivial { relator } => {
                let r = self.relators.get(relator).ok_or("relator index out of range")?;
                if !cyclic_reduce(r).is_empty() {
                    return Err(format!("relator {relator} is not trivial"));
                }
                self.relators.remove(relator);
            }
            TietzeMove::Eliminate { generator, relator } => {
                if !self.live.contains(&generator) {
                    return Err(format!("generator {generator} is not live"));
                }
                let r = self.relators.get(relator).ok_or("relator index out of range")?.clone();
                let positions: Vec<usize> =
                    r.iter().enumerate().filter(|(_, x)| x.abs() == generator).map(|(i, _)| i).collect();
                if positions.len() != 1 {
                    return Err(format!("generator {generator} does not occur exactly once in relator {relator}"));
                }
                let i = positions[0];
                // r = A x^e B, so x^e = A⁻¹ B⁻¹
                let (a, b) = (&r[..i], &r[i + 1..]);
                let mut expr = inverse(a);
                expr.extend(inverse(b));
                let expr = if r[i] > 0 { free_reduce(&expr) } else { inverse(&free_reduce(&expr)) };
                self.relators.remove(relator);
                for w in self.relators.iter_mut() {
                    if w.iter().any(|x| x.abs() == generator) {
                        let mut out = Vec::with_capacity(w.len() + expr.len());
                        for &x in w.iter() {
                            if x == generator {
                                out.extend(expr.iter().copied());
                            } else if x == -generator {
                                out.extend(inverse(&expr));
                            } else {
                                out.push(x);
                            }
                        }
                        *w = cyclic_reduce(&out);
                    }
                }
                self.live.remove(&generator);
                self.eliminated.push((generator, expr));
            }
        }
        Ok(())
    }

    pub fn total_length(&self) -> usize {
        self.relators.iter().map(|r| r.len()).sum()
    }

    /// The remaining presentation with generators renumbered `1..` in
    /// increasing order of their original numbers.
    pub fn remaining(&self) -> (GroupPresentation, Vec<i32>) {
        let order: Vec<i32> = self.live.iter().copied().collect();
        let index: HashMap<i32, i32> = order.iter().enumerate().map(|(i, &g)| (g, i as i32 + 1)).collect();
        let relators = self
            .relators
            .iter()
            .filter(|r| !r.is_empty())
            .map(|r| r.iter().map(|x| x.signum() * index[&x.abs()]).collect())
            .collect();
        (GroupPresentation { generators: order.len(), relators }, order)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TietzeOutcome {
    pub moves: Vec<TietzeMove>,
    pub trivialized: bool,
    pub moves_used: usize,
    pub attempts: usize,
    #[serde(skip)]
    pub state: TietzeState,
}

const MAX_ATTEMPTS: usize = 64;

/// Greedy simplification: drop trivial relators, then eliminate a generator
/// from a shortest relator in which it occurs once (preferring generators
/// with fewest occurrences). When stuck, restart with shuffled tie-breaks.
/// `budget` bounds the total number of moves over all attempts.
pub fn simplify(p: &GroupPresentation, budget: usize, seed: u64) -> TietzeOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut used = 0;
    let mut best: Option<(TietzeState, Vec<TietzeMove>)> = None;
    let mut attempts = 0;
    while used < budget {
        attempts += 1;
        let randomize = attempts > 1;
        if randomize {
            // a restart costs one move so the budget always runs out
            used += 1;
        }
        let mut state = TietzeState::new(p);
        let mut moves = Vec::new();
        loop {
            if used >= budget {
                break;
            }
            if let Some(i) = state.relators.iter().position(|r| r.is_empty()) {
                let m = TietzeMove::DropTrivial { relator: i };
                state.apply(&m).expect("legal move");
                moves.push(m);
                used += 1;
                continue;
            }
            let Some(m) = choose_elimination(&state, randomize.then_some(&mut rng)) else { break };
            state.apply(&m).expect("legal move");
            moves.push(m);
            used += 1;
        }
        let better = match &best {
            None => true,
            Some((b, _)) => (state.live.len(), state.total_length()) < (b.live.len(), b.total_length()),
        };
        if better {
            best = Some((state, moves));
        }
        let done = best.as_ref().map(|(s, _)| s.is_trivial()).unwrap_or(false);
        if done || p.generators == 0 || attempts >= MAX_ATTEMPTS {
            break;
        }
    }
    let (state, moves) = best.unwrap_or_else(|| (TietzeState::new(p), Vec::new()));
    TietzeOutcome { trivialized: state.is_trivial(), moves, moves_used: used, attempts, state }
}

fn choose_elimination(state: &TietzeState, rng: Option<&mut ChaCha8Rng>) -> Option<TietzeMove> {
    let mut occurrences: HashMap<i32, usize> = HashMap::new();
    for r in &state.relators {
        for x in r {
            *occurrences.entry(x.abs()).or_default() += 1;
        }
    }
    let mut candidates: Vec<(usize, usize, usize, i32)> = Vec::new();
    for (ri, r) in state.relators.iter().enumerate() {
        let mut count: HashMap<i32, usize> = HashMap::new();
        for x in r {
            *count.entry(x.abs()).or_default() += 1;
        }
        for (&g, &c) in &count {
            if c == 1 {
                candidates.push((r.len(), occurrences[&g], ri, g));
            }
        }
    }
    if candidates.is_empty() {
        return None;
    }
    candidates.sort_unstable();
    let pick = match rng {
        None => candidates[0],
        Some(rng) => {
            let shortest = candidates[0].0;
            let pool: Vec<_> = candidates.iter().filter(|c| c.0 <= shortest + 2).copied().collect();
            *pool.choose(rng).expect("nonempty")
        }
    };
    Some(TietzeMove::Eliminate { generator: pick.3, relator: pick.2 })
}

/// Replay a transcript from the original presentation.
pub fn replay(p: &GroupPresentation, moves: &[TietzeMove]) -> Result<TietzeState, String> {
    let mut state = TietzeState::new(p);
    for (i, m) in moves.iter().enumerate() {
        state.apply(m).map_err(|e| format!("move {i}: {e}"))?;
    }
    Ok(state)
}
