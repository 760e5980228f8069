use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::ghost::free_positions;
use crate::lattice::LineSumTable;

use super::{corner_sweeps, page_entries, FreeChoicePolicy, PeelState, ReconResult, Stage, StageRecord};

/// Reconstructs a 2D function from its line sums.
///
/// Points below weight 1 from each corner are solved in weight order, then
/// the peel engine runs; whatever is left is settled by assigning policy
/// values at the free positions, each followed by peeling.
pub fn reconstruct_2d(table: &LineSumTable<2>, policy: &FreeChoicePolicy<2>) -> Result<ReconResult<2>> {
    let grid = *table.grid();
    let dirs = table.directions().to_vec();
    let free = free_positions(&grid, &dirs)?;
    let free_values = policy.resolve(&free)?;
    let mut st = PeelState::new(table)?;
    let mut trace = Vec::new();

    let sweeps = corner_sweeps(&dirs, grid.extents(), false, st.ops_mut())?;
    let mut scheduled = 0;
    let mut misses = 0;
    for sweep in &sweeps {
        for (x, members) in page_entries(sweep, grid.extents()) {
            let flat = grid.flat(x);
            if !st.is_unknown(flat) {
                continue;
            }
            let mut done = false;
            for &h in members {
                if st.solve_on(h, flat)? {
                    done = true;
                    break;
                }
            }
            if done {
                scheduled += 1;
            } else {
                misses += 1;
            }
        }
    }
    let peeled = st.drain()?;
    trace.push(StageRecord { stage: Stage::Corners, depth: 0, scheduled, misses, peeled, open: Vec::new() });

    let mut peeled = 0;
    for (x, v) in free.iter().zip(free_values) {
        let flat = grid.flat(*x);
        if st.is_unknown(flat) {
            st.assign(flat, v)?;
            peeled += st.drain()?;
        }
    }
    trace.push(StageRecord { stage: Stage::Free, depth: 0, scheduled: 0, misses: 0, peeled, open: Vec::new() });

    if st.remaining() > 0 {
        let first = st.unknown_points().next().unwrap();
        return Err(Error::Stall { unknown: st.remaining(), first: grid.point(first).to_vec() });
    }
    Ok(ReconResult::from_state(st, free, trace))
}
