use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::ghost::free_positions;
use crate::lattice::{component_sums, is_normalized, Axis, LineSumTable};

use super::{
    corner_sweeps, page_entries, CornerSweep, FreeChoicePolicy, PeelState, ReconResult, Stage, StageRecord,
};

/// Solves, page point by page point in sweep order, every unknown point of
/// the fiber above it through one of the coupled directions. Peels after
/// each corner.
fn sweep_fibers(
    st: &mut PeelState<3>,
    sweeps: &[CornerSweep],
    page: [usize; 2],
    fiber_len: usize,
    to_flat: impl Fn([usize; 2], usize) -> usize,
    record: &mut StageRecord<3>,
) -> Result<()> {
    for sweep in sweeps {
        for (x, members) in page_entries(sweep, page) {
            for t in 0..fiber_len {
                let flat = to_flat(x, t);
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
                    record.scheduled += 1;
                } else {
                    record.misses += 1;
                }
            }
        }
        record.peeled += st.drain()?;
    }
    // also when no corner has a fan
    record.peeled += st.drain()?;
    Ok(())
}

fn record(stage: Stage, depth: usize) -> StageRecord<3> {
    StageRecord { stage, depth, scheduled: 0, misses: 0, peeled: 0, open: Vec::new() }
}

fn project(dirs: &[[i64; 3]], axis: Axis) -> Vec<[i64; 2]> {
    let [i, j] = axis.kept();
    dirs.iter().map(|v| [v[i], v[j]]).collect()
}

/// Reconstructs a 3D function from its line sums.
///
/// Works down from the top slice while the remaining box is valid: solve
/// the fibers over the pages outside the x- and y-shadows of the hull, then
/// the top slice with the directions that stay in it (assigning free values
/// there), and drop the slice. The nonvalid remainder is swept column by
/// column in z-shadow weight order. The peel engine runs after every step.
pub fn reconstruct_3d(table: &LineSumTable<3>, policy: &FreeChoicePolicy<3>) -> Result<ReconResult<3>> {
    let grid = *table.grid();
    let [m, n, o] = grid.extents();
    let dirs = table.directions().to_vec();
    if let Some(i) = dirs.iter().position(|d| !is_normalized(*d)) {
        return Err(Error::NotNormalized { index: i });
    }
    let free = free_positions(&grid, &dirs)?;
    let free_values = policy.resolve(&free)?;
    let mut st = PeelState::new(table)?;
    let mut trace = Vec::new();

    let sums = component_sums(&dirs).map(|s| s as usize);
    let valid_at = |depth: usize| sums[0] < m && sums[1] < n && sums[2] < depth;
    let x_dirs = project(&dirs, Axis::X);
    let y_dirs = project(&dirs, Axis::Y);
    // only directions with c = 0 stay inside a slice
    let slice_dirs: Vec<[i64; 2]> =
        dirs.iter().map(|v| if v[2] == 0 { [v[0], v[1]] } else { [0, 0] }).collect();

    let mut depth = o;
    let mut next_free = 0;
    if valid_at(depth) {
        let x_sweeps = corner_sweeps(&x_dirs, [n, o], false, st.ops_mut())?;
        let y_sweeps = corner_sweeps(&y_dirs, [m, o], false, st.ops_mut())?;
        let slice_sweeps = corner_sweeps(&slice_dirs, [m, n], false, st.ops_mut())?;
        while valid_at(depth) {
            let mut rec = record(Stage::ExteriorX, depth);
            sweep_fibers(&mut st, &x_sweeps, [n, depth], m, |[q, r], p| grid.flat([p, q, r]), &mut rec)?;
            trace.push(rec);

            let mut rec = record(Stage::ExteriorY, depth);
            sweep_fibers(&mut st, &y_sweeps, [m, depth], n, |[p, r], q| grid.flat([p, q, r]), &mut rec)?;
            trace.push(rec);

            let top = depth - 1;
            let mut rec = record(Stage::Slice, depth);
            for q in 0..n {
                for p in 0..m {
                    if st.is_unknown(grid.flat([p, q, top])) {
                        rec.open.push([p, q, top]);
                    }
                }
            }
            sweep_fibers(&mut st, &slice_sweeps, [m, n], 1, |[p, q], _| grid.flat([p, q, top]), &mut rec)?;
            // free positions are sorted top slice first
            while next_free < free.len() && free[next_free][2] == top {
                let flat = grid.flat(free[next_free]);
                if st.is_unknown(flat) {
                    st.assign(flat, free_values[next_free].clone())?;
                    rec.peeled += st.drain()?;
                }
                next_free += 1;
            }
            trace.push(rec);
            depth -= 1;
        }
    }

    if depth > 0 && st.remaining() > 0 {
        let z_dirs = project(&dirs, Axis::Z);
        let z_sweeps = corner_sweeps(&z_dirs, [m, n], true, st.ops_mut())?;
        let mut rec = record(Stage::Remainder, depth);
        sweep_fibers(&mut st, &z_sweeps, [m, n], depth, |[p, q], r| grid.flat([p, q, r]), &mut rec)?;
        trace.push(rec);
    }

    let mut rec = record(Stage::Free, depth);
    for (x, v) in free.iter().zip(free_values).skip(next_free) {
        let flat = grid.flat(*x);
        if st.is_unknown(flat) {
            st.assign(flat, v)?;
            rec.peeled += st.drain()?;
        }
    }
    trace.push(rec);

    if st.remaining() > 0 {
        let first = st.unknown_points().next().unwrap();
        return Err(Error::Stall { unknown: st.remaining(), first: grid.point(first).to_vec() });
    }
    Ok(ReconResult::from_state(st, free, trace))
}
