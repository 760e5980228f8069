//! JSON file formats.
//!
//! Rationals are written as `[numerator, denominator]` integer pairs of
//! arbitrary size; bare integers are accepted on input. Points and lines are
//! keyed by coordinate lists, flat arrays use index `p + m (q + n r)`.

use std::str::FromStr;

use dtomo_core::lattice::{normalize_direction, LineSumTable};
use dtomo_core::{Direction2, Grid, OpCounter, Value};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::CliError;

/// An exact rational in a JSON file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rational(pub Value);

fn number(b: &BigInt) -> serde_json::Number {
    serde_json::Number::from_str(&b.to_string()).expect("integers are valid JSON numbers")
}

fn integer(v: &serde_json::Value) -> Option<BigInt> {
    match v {
        serde_json::Value::Number(n) => BigInt::from_str(&n.to_string()).ok(),
        _ => None,
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [number(self.0.numer()), number(self.0.denom())].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        if let Some(n) = integer(&v) {
            return Ok(Rational(Value::from_integer(n)));
        }
        if let serde_json::Value::Array(a) = &v {
            if let [n, den] = &a[..] {
                if let (Some(n), Some(den)) = (integer(n), integer(den)) {
                    if den.is_zero() {
                        return Err(D::Error::custom("zero denominator"));
                    }
                    return Ok(Rational(Value::new(n, den)));
                }
            }
        }
        Err(D::Error::custom(format!("expected an integer or [numerator, denominator], got {v}")))
    }
}

impl From<Value> for Rational {
    fn from(v: Value) -> Self {
        Rational(v)
    }
}

impl Rational {
    pub fn integer(v: i64) -> Self {
        Rational(Value::from_integer(BigInt::from(v)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub grid: Vec<usize>,
    pub directions: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<Rational>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineEntry {
    pub base: Vec<usize>,
    pub sum: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectionSums {
    pub direction: Vec<i64>,
    pub lines: Vec<LineEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineSumFile {
    pub grid: Vec<usize>,
    pub directions: Vec<Vec<i64>>,
    pub sums: Vec<DirectionSums>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpCounts {
    pub add_sub: u64,
    pub mul_div: u64,
    pub comparisons: u64,
    pub assignments: u64,
    pub value_mul_div: u64,
    pub total: u64,
}

impl From<OpCounter> for OpCounts {
    fn from(c: OpCounter) -> Self {
        OpCounts {
            add_sub: c.add_sub,
            mul_div: c.mul_div,
            comparisons: c.comparisons,
            assignments: c.assignments,
            value_mul_div: c.value_mul_div,
            total: c.total(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReconstructionFile {
    pub grid: Vec<usize>,
    pub directions: Vec<Vec<i64>>,
    pub values: Vec<Rational>,
    pub free_choices: usize,
    pub free_positions: Vec<Vec<usize>>,
    /// One character per point in flat order: `F` forced, `C` chosen, `D`
    /// depends on chosen values.
    pub provenance: String,
    pub op_counts: OpCounts,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeValue {
    pub position: Vec<usize>,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeValuesFile {
    pub free_values: Vec<FreeValue>,
}

/// Any file with a `values` array (instances and reconstructions).
#[derive(Debug, Clone, Deserialize)]
pub struct ValuesOnly {
    pub values: Vec<Rational>,
}

fn malformed(msg: impl Into<String>) -> CliError {
    CliError::Malformed(msg.into())
}

pub fn grid_of<const N: usize>(extents: &[usize]) -> Result<Grid<N>, CliError> {
    let arr: [usize; N] = extents
        .try_into()
        .map_err(|_| malformed(format!("grid has {} extents, expected {N}", extents.len())))?;
    Grid::new(arr).map_err(|e| malformed(e.to_string()))
}

/// Directions of a file, normalized: 3D directions by
/// [`normalize_direction`], 2D ones to primitive form.
pub fn directions_of<const N: usize>(dirs: &[Vec<i64>]) -> Result<Vec<[i64; N]>, CliError> {
    if dirs.is_empty() {
        return Err(malformed("direction list is empty"));
    }
    dirs.iter()
        .map(|d| {
            let arr: [i64; N] = d
                .as_slice()
                .try_into()
                .map_err(|_| malformed(format!("direction {d:?} should have {N} components")))?;
            let v = match N {
                3 => normalize_direction([arr[0], arr[1], arr[2]]).map(|x| x.vector().to_vec()),
                _ => Direction2::primitive(arr[0], arr[1]).map(|x| x.vector().to_vec()),
            }
            .map_err(|e| malformed(format!("direction {d:?}: {e}")))?;
            Ok(v.try_into().unwrap())
        })
        .collect()
}

pub fn values_of(values: &[Rational], len: usize) -> Result<Vec<Value>, CliError> {
    if values.len() != len {
        return Err(malformed(format!("{} values for a grid of {len} points", values.len())));
    }
    Ok(values.iter().map(|r| r.0.clone()).collect())
}

impl LineSumFile {
    pub fn from_table<const N: usize>(table: &LineSumTable<N>) -> Self {
        let grid = table.grid();
        let directions: Vec<Vec<i64>> = table.directions().iter().map(|d| d.to_vec()).collect();
        let sums = (0..directions.len())
            .map(|h| DirectionSums {
                direction: directions[h].clone(),
                lines: table
                    .direction_sums(h)
                    .iter()
                    .map(|(b, s)| LineEntry { base: grid.point(*b).to_vec(), sum: Rational(s.clone()) })
                    .collect(),
            })
            .collect();
        LineSumFile { grid: grid.extents().to_vec(), directions, sums }
    }

    /// Rebuilds the table, checking that the sums cover every line once and
    /// are listed per direction in the order of `directions`.
    pub fn to_table<const N: usize>(&self) -> Result<LineSumTable<N>, CliError> {
        let grid = grid_of::<N>(&self.grid)?;
        let dirs = directions_of::<N>(&self.directions)?;
        if dirs.iter().map(|d| d.to_vec()).collect::<Vec<_>>() != self.directions {
            return Err(malformed("directions must be given normalized"));
        }
        if self.sums.len() != dirs.len() {
            return Err(malformed(format!("{} sum lists for {} directions", self.sums.len(), dirs.len())));
        }
        let mut lines = Vec::with_capacity(dirs.len());
        for (h, ds) in self.sums.iter().enumerate() {
            if ds.direction != self.directions[h] {
                return Err(malformed(format!("sum list {h} is for {:?}, expected {:?}", ds.direction, self.directions[h])));
            }
            let mut list = Vec::with_capacity(ds.lines.len());
            for e in &ds.lines {
                let base: [usize; N] = e
                    .base
                    .as_slice()
                    .try_into()
                    .map_err(|_| malformed(format!("line base {:?} should have {N} coordinates", e.base)))?;
                list.push((base, e.sum.0.clone()));
            }
            lines.push(list);
        }
        LineSumTable::from_lines(grid, dirs, lines).map_err(|e| malformed(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trip() {
        let big = BigInt::from_str("123456789012345678901234567891").unwrap();
        let r = Rational(Value::new(big, BigInt::from(7)));
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, "[123456789012345678901234567891,7]");
        assert_eq!(serde_json::from_str::<Rational>(&s).unwrap(), r);
        assert_eq!(serde_json::from_str::<Rational>("-4").unwrap(), Rational::integer(-4));
        assert_eq!(serde_json::from_str::<Rational>("[6,4]").unwrap().0, Value::new(3.into(), 2.into()));
        assert!(serde_json::from_str::<Rational>("1.5").is_err());
        assert!(serde_json::from_str::<Rational>("[1,0]").is_err());
    }
}
