//! Finitely generated abelian groups.

use std::fmt;

use num_traits::{One, ToPrimitive};
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::matrix::Integer;

/// `Z^free_rank ⊕ Z/t_1 ⊕ … ⊕ Z/t_m` with `t_1 | t_2 | … | t_m`, `t_i > 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GroupDescriptor {
    pub free_rank: usize,
    pub torsion: Vec<Integer>,
}

impl GroupDescriptor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        GroupDescriptor { free_rank: rank, torsion: Vec::new() }
    }

    /// From invariant factors of a presentation; unit factors are dropped.
    pub fn from_factors(free_rank: usize, factors: &[Integer]) -> Self {
        let torsion = factors.iter().filter(|d| !d.is_one()).cloned().collect();
        GroupDescriptor { free_rank, torsion }
    }

    pub fn cyclic(k: u64) -> Self {
        match k {
            0 => Self::free(1),
            1 => Self::zero(),
            _ => GroupDescriptor { free_rank: 0, torsion: vec![Integer::from(k)] },
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_integers(&self) -> bool {
        self.free_rank == 1 && self.torsion.is_empty()
    }

    /// Number of generators in the invariant-factor form.
    pub fn generator_count(&self) -> usize {
        self.torsion.len() + self.free_rank
    }

    pub fn torsion_u64(&self) -> Vec<u64> {
        self.torsion.iter().map(|t| t.to_u64().unwrap_or(u64::MAX)).collect()
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        write!(f, "{}", parts.join(" + "))
    }
}

/// JSON form of an integer: a number when it fits, a decimal string otherwise.
pub fn int_json(v: &Integer) -> serde_json::Value {
    match v.to_i64() {
        Some(x) => serde_json::Value::from(x),
        None => serde_json::Value::from(v.to_string()),
    }
}

impl Serialize for GroupDescriptor {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("GroupDescriptor", 3)?;
        st.serialize_field("free_rank", &self.free_rank)?;
        let torsion: Vec<serde_json::Value> = self.torsion.iter().map(int_json).collect();
        st.serialize_field("torsion", &torsion)?;
        st.serialize_field("text", &self.to_string())?;
        st.end()
    }
}
