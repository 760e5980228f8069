//! Reconstruction from line sums.
//!
//! Both reconstructors run a weight-ordered schedule first and the peel
//! engine after every step. Free values are assigned only at the free
//! positions of [`crate::ghost::free_positions`]; any assignment there
//! extends to exactly one solution, so the runs never get stuck on
//! consistent input.

mod audit;
mod peel;
mod solve2d;
mod solve3d;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::hull::BorderFan;
use crate::ops::OpCounter;
use crate::order2d::{corner_transform, Corner, CornerFrame, WeightTable};
use crate::Value;

pub use audit::{provenance_audit, verify, ProvenanceAudit, VerifyReport};
pub use peel::{peel, PeelState, Status};
pub use solve2d::reconstruct_2d;
pub use solve3d::reconstruct_3d;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    /// Same value in every solution.
    Forced,
    /// Chosen by the policy.
    Free,
    /// Deduced, but depends on free choices.
    FreeDependent,
}

impl Provenance {
    pub fn code(self) -> char {
        match self {
            Provenance::Forced => 'F',
            Provenance::Free => 'C',
            Provenance::FreeDependent => 'D',
        }
    }

    pub fn from_code(c: char) -> Option<Self> {
        match c {
            'F' => Some(Provenance::Forced),
            'C' => Some(Provenance::Free),
            'D' => Some(Provenance::FreeDependent),
            _ => None,
        }
    }
}

/// Values for the free positions.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum FreeChoicePolicy<const N: usize> {
    /// 0 everywhere.
    #[default]
    Default,
    /// One value per free position; must cover exactly the free positions.
    Explicit(Vec<([usize; N], Value)>),
}

impl<const N: usize> FreeChoicePolicy<N> {
    /// Values aligned with `free`.
    pub fn resolve(&self, free: &[[usize; N]]) -> Result<Vec<Value>> {
        match self {
            FreeChoicePolicy::Default => Ok(alloc::vec![Value::zero(); free.len()]),
            FreeChoicePolicy::Explicit(list) => {
                if list.len() != free.len() {
                    return Err(Error::Policy(format!(
                        "{} values given, {} free positions",
                        list.len(),
                        free.len()
                    )));
                }
                let map: BTreeMap<[usize; N], &Value> = list.iter().map(|(x, v)| (*x, v)).collect();
                if map.len() != list.len() {
                    return Err(Error::Policy("a position is listed twice".into()));
                }
                free.iter()
                    .map(|x| {
                        map.get(x)
                            .map(|v| (*v).clone())
                            .ok_or_else(|| Error::Policy(format!("no value for free position {x:?}")))
                    })
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    /// Pages outside the x-projection of the hull.
    ExteriorX,
    /// Pages outside the y-projection of the hull.
    ExteriorY,
    /// Top slice of the current depth.
    Slice,
    /// Columns of the nonvalid remainder.
    Remainder,
    /// Weight-ordered corners of a 2D grid.
    Corners,
    /// Final assignment of leftover free positions.
    Free,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageRecord<const N: usize> {
    pub stage: Stage,
    /// Remaining depth for 3D stages, 0 otherwise.
    pub depth: usize,
    /// Points solved by the schedule itself.
    pub scheduled: usize,
    /// Schedule entries whose coupled lines still had other unknowns.
    pub misses: usize,
    /// Points deduced by the peel engine after the step.
    pub peeled: usize,
    /// For slice stages: points of the slice still unknown when the slice
    /// step began.
    pub open: Vec<[usize; N]>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReconResult<const N: usize> {
    pub values: Vec<Value>,
    pub provenance: Vec<Provenance>,
    /// Free positions in assignment order.
    pub free_positions: Vec<[usize; N]>,
    pub ops: OpCounter,
    pub trace: Vec<StageRecord<N>>,
}

impl<const N: usize> ReconResult<N> {
    pub fn free_count(&self) -> usize {
        self.free_positions.len()
    }

    fn from_state(st: PeelState<N>, free_positions: Vec<[usize; N]>, trace: Vec<StageRecord<N>>) -> Self {
        let provenance = (0..st.grid().len())
            .map(|i| match st.status(i) {
                Status::Assigned => Provenance::Free,
                _ if st.is_forced(i) => Provenance::Forced,
                _ => Provenance::FreeDependent,
            })
            .collect();
        let ops = st.ops();
        ReconResult { values: st.into_values(), provenance, free_positions, ops, trace }
    }
}

/// Weight-ordered points of one corner of a page family, in the corner's
/// frame.
pub(crate) struct CornerSweep {
    pub corner: Corner,
    pub fan: BorderFan,
    pub table: WeightTable,
    pub order: Vec<[usize; 2]>,
}

impl CornerSweep {
    /// Directions (as ids of the projected list) coupled to a frame point.
    pub fn members(&self, x: [usize; 2]) -> &[usize] {
        &self.fan.segments()[self.table.segment(x)].members
    }
}

/// One sweep per corner whose fan is nonempty. Weights depend only on frame
/// coordinates, so the tables cover `frame_extent` and serve every page
/// that fits inside it.
pub(crate) fn corner_sweeps(
    dirs2: &[[i64; 2]],
    frame_extent: [usize; 2],
    include_all: bool,
    ops: &mut OpCounter,
) -> Result<Vec<CornerSweep>> {
    let mut out = Vec::new();
    for corner in Corner::ALL {
        let (fan, _) = corner_transform(dirs2, corner, frame_extent);
        if let Some(fan) = fan {
            let table = WeightTable::build(&fan, frame_extent, ops)?;
            let order = table.order(include_all, ops);
            out.push(CornerSweep { corner, fan, table, order });
        }
    }
    Ok(out)
}

/// Page points of `sweep` in order for a page of extent `page`, each with
/// its coupled projected-direction ids.
pub(crate) fn page_entries<'a>(
    sweep: &'a CornerSweep,
    page: [usize; 2],
) -> impl Iterator<Item = ([usize; 2], &'a [usize])> + 'a {
    let frame = CornerFrame::new(sweep.corner, page);
    sweep
        .order
        .iter()
        .filter(move |x| x[0] < page[0] && x[1] < page[1])
        .map(move |&x| (frame.map(x), sweep.members(x)))
}
