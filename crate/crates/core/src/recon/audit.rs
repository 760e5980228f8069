use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::error::Result;
use crate::ghost::SwitchingUnion;
use crate::lattice::{forward_project, LineKey, LineSumTable};
use crate::Value;

use super::{Provenance, ReconResult};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport<const N: usize> {
    /// Largest absolute line-sum discrepancy per direction.
    pub max_discrepancy: Vec<Value>,
    pub mismatched: Vec<LineKey<N>>,
}

impl<const N: usize> VerifyReport<N> {
    pub fn passed(&self) -> bool {
        self.mismatched.is_empty()
    }
}

/// Compares the line sums of `values` with `table`.
pub fn verify<const N: usize>(table: &LineSumTable<N>, values: &[Value]) -> Result<VerifyReport<N>> {
    let actual = forward_project(table.grid(), values, table.directions())?;
    let mut max_discrepancy = vec![Value::zero(); table.directions().len()];
    let mut mismatched = Vec::new();
    for ((key, want), (_, got)) in table.iter().zip(actual.iter()) {
        let diff = (got - want).abs();
        if !diff.is_zero() {
            mismatched.push(key);
            if diff > max_discrepancy[key.direction] {
                max_discrepancy[key.direction] = diff;
            }
        }
    }
    Ok(VerifyReport { max_discrepancy, mismatched })
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ProvenanceAudit {
    /// Points outside the switching union that are not forced.
    pub unforced_outside: Vec<usize>,
    /// Free or free-dependent points inside the union.
    pub dependent_inside: usize,
}

impl ProvenanceAudit {
    pub fn passed(&self) -> bool {
        self.unforced_outside.is_empty()
    }
}

/// Checks that only points of the switching union depend on free choices.
pub fn provenance_audit<const N: usize>(result: &ReconResult<N>, union: &SwitchingUnion<N>) -> ProvenanceAudit {
    let mut audit = ProvenanceAudit::default();
    for (i, p) in result.provenance.iter().enumerate() {
        let inside = union.contains(i);
        match (p, inside) {
            (Provenance::Forced, _) => {}
            (_, true) => audit.dependent_inside += 1,
            (_, false) => audit.unforced_outside.push(i),
        }
    }
    audit
}
