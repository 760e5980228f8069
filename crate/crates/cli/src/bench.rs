//! Operation-count benchmark: reconstructions over families of cubes.

use std::io::Write;
use std::time::Instant;

use dtomo_core::lattice::forward_project;
use dtomo_core::recon::{reconstruct_3d, FreeChoicePolicy};
use dtomo_core::{Grid3, Value};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::format::{OpCounts, Rational};
use crate::CliError;

/// Direction pool; the size sweep uses the first four, the d sweep the
/// first `d`.
pub const BENCH_DIRS: [[i64; 3]; 6] = [[1, 1, 2], [1, -2, 1], [1, 1, -2], [1, 0, 0], [0, 1, 1], [1, -1, 0]];
pub const CUBE_SIDES: [usize; 5] = [8, 12, 16, 24, 32];
pub const D_VALUES: [usize; 4] = [2, 3, 4, 6];
pub const D_SWEEP_SIDE: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BenchRecord {
    pub sweep: &'static str,
    pub d: usize,
    pub m: usize,
    pub n: usize,
    pub o: usize,
    pub ops: OpCounts,
    pub free_choices: usize,
    /// `total / (d m n o)`.
    pub ops_per_dmno: Rational,
    /// `mul_div / (d + m + n + o)`.
    pub mul_div_per_size: Rational,
    pub wall_us: u64,
}

impl BenchRecord {
    pub fn ops_per_dmno_f64(&self) -> f64 {
        self.ops.total as f64 / (self.d * self.m * self.n * self.o) as f64
    }

    pub fn mul_div_per_size_f64(&self) -> f64 {
        self.ops.mul_div as f64 / (self.d + self.m + self.n + self.o) as f64
    }
}

/// Integer phantom with values in `-9..=9`.
pub fn phantom(len: usize, seed: u64) -> Vec<Value> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| Value::from_integer(BigInt::from(rng.gen_range(-9i64..=9)))).collect()
}

fn ratio(num: u64, den: usize) -> Rational {
    Rational(Value::new(BigInt::from(num), BigInt::from(den)))
}

/// Projects a random phantom on an `s^3` cube and reconstructs it with the
/// first `d` pool directions.
pub fn run_case(sweep: &'static str, d: usize, s: usize, seed: u64) -> Result<BenchRecord, CliError> {
    let grid = Grid3::new([s, s, s])?;
    let dirs = &BENCH_DIRS[..d];
    let table = forward_project(&grid, &phantom(grid.len(), seed), dirs)?;
    let start = Instant::now();
    let r = reconstruct_3d(&table, &FreeChoicePolicy::Default)?;
    let wall_us = start.elapsed().as_micros().to_u64().unwrap_or(u64::MAX);
    let ops: OpCounts = r.ops.into();
    Ok(BenchRecord {
        sweep,
        d,
        m: s,
        n: s,
        o: s,
        ops,
        free_choices: r.free_count(),
        ops_per_dmno: ratio(ops.total, d * s * s * s),
        mul_div_per_size: ratio(ops.mul_div, d + 3 * s),
        wall_us,
    })
}

pub fn size_sweep(sides: &[usize], d: usize, seed: u64) -> Result<Vec<BenchRecord>, CliError> {
    sides.iter().map(|&s| run_case("size", d, s, seed)).collect()
}

pub fn d_sweep(ds: &[usize], side: usize, seed: u64) -> Result<Vec<BenchRecord>, CliError> {
    ds.iter().map(|&d| run_case("d", d, side, seed)).collect()
}

/// Largest over smallest value.
pub fn spread(xs: impl IntoIterator<Item = f64>) -> f64 {
    let (lo, hi) = xs.into_iter().fold((f64::INFINITY, 0f64), |(lo, hi), x| (lo.min(x), hi.max(x)));
    hi / lo
}

pub fn write_table(records: &[BenchRecord], w: &mut dyn Write) -> std::io::Result<()> {
    writeln!(w, "{:<5} {:>2} {:>4} {:>12} {:>8} {:>9} {:>9} {:>10}", "sweep", "d", "side", "total", "mul/div", "ops/dmno", "md/size", "wall ms")?;
    for r in records {
        writeln!(
            w,
            "{:<5} {:>2} {:>4} {:>12} {:>8} {:>9.2} {:>9.2} {:>10.1}",
            r.sweep,
            r.d,
            r.m,
            r.ops.total,
            r.ops.mul_div,
            r.ops_per_dmno_f64(),
            r.mul_div_per_size_f64(),
            r.wall_us as f64 / 1000.0
        )?;
    }
    Ok(())
}
