use serde::{Deserialize, Serialize};

use super::TrimParams;
use crate::error::{Error, Result};

/// Index vector `(k_1, .., k_β)` of a Δ-box. Positive-degree coordinates
/// carry their geometric level; zero-degree coordinates carry their value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BoxIndex(pub Vec<u64>);

// Integer thresholds: level k (0 < k < L) holds ceil(Δ^{k-1}) ..= ceil(Δ^k) - 1,
// level L holds ceil(Δ^{L-1}) ..= floor(Δ^L). Comparing integers against
// the rounded powers keeps the tiling exact despite float error in Δ^k.
fn ceil_power(params: &TrimParams, k: u64) -> u64 {
    let p = params.power(k).ceil();
    if p >= u64::MAX as f64 {
        u64::MAX
    } else {
        p as u64
    }
}

fn universe_top(params: &TrimParams) -> u64 {
    let p = params.power(params.levels).floor();
    if p >= u64::MAX as f64 {
        u64::MAX
    } else {
        p as u64
    }
}

impl TrimParams {
    /// Level of a positive-degree coordinate value.
    pub fn level_of(&self, value: u64) -> Option<u64> {
        if value == 0 {
            return Some(0);
        }
        if value > universe_top(self) {
            return None;
        }
        let l = self.levels;
        let guess = ((value as f64).ln() / self.delta.ln()).floor() as u64 + 1;
        let mut k = guess.clamp(1, l);
        while k > 1 && value < ceil_power(self, k - 1) {
            k -= 1;
        }
        while k < l && value >= ceil_power(self, k) {
            k += 1;
        }
        Some(k)
    }

    /// Inclusive integer range of level `k`, or `None` when it holds no integer.
    pub fn level_range(&self, k: u64) -> Option<(u64, u64)> {
        let (lo, hi) = match k {
            0 => (0, 0),
            k if k < self.levels => (
                ceil_power(self, k - 1),
                ceil_power(self, k).saturating_sub(1),
            ),
            k if k == self.levels => (ceil_power(self, k - 1), universe_top(self)),
            _ => return None,
        };
        (lo <= hi).then_some((lo, hi))
    }
}

/// Δ-box containing the point `coordinates`.
pub fn box_index(
    coordinates: &[u64],
    degree_vector: &[u32],
    params: &TrimParams,
) -> Result<BoxIndex> {
    if coordinates.len() != degree_vector.len() {
        return Err(Error::DimensionMismatch {
            expected: degree_vector.len(),
            got: coordinates.len(),
        });
    }
    coordinates
        .iter()
        .zip(degree_vector)
        .enumerate()
        .map(|(coordinate, (&value, &degree))| {
            if degree == 0 {
                Ok(value)
            } else {
                params.level_of(value).ok_or(Error::OutsideBoxUniverse {
                    coordinate,
                    value,
                    limit: params.power(params.levels),
                })
            }
        })
        .collect::<Result<Vec<_>>>()
        .map(BoxIndex)
}

// Past this many levels the table costs more memory than the lookups save.
const MAX_TABLE_LEVELS: u64 = 1 << 22;

/// Box lookup for one fixed parameter set, with the level thresholds
/// computed once. Agrees with [`box_index`].
#[derive(Clone, Debug)]
pub struct BoxGrid {
    params: TrimParams,
    degrees: Vec<u32>,
    /// `lower[k-1] = ceil(Δ^{k-1})`, the first value of level `k`.
    lower: Option<Vec<u64>>,
    top: u64,
}

impl BoxGrid {
    pub fn new(params: &TrimParams, degree_vector: &[u32]) -> Self {
        let lower = (params.levels <= MAX_TABLE_LEVELS)
            .then(|| (0..params.levels).map(|k| ceil_power(params, k)).collect());
        BoxGrid {
            params: params.clone(),
            degrees: degree_vector.to_vec(),
            lower,
            top: universe_top(params),
        }
    }

    pub fn level_of(&self, value: u64) -> Option<u64> {
        match &self.lower {
            Some(_) if value == 0 => Some(0),
            Some(_) if value > self.top => None,
            Some(lower) => Some(lower.partition_point(|&t| t <= value) as u64),
            None => self.params.level_of(value),
        }
    }

    pub fn index(&self, coordinates: &[u64]) -> Result<BoxIndex> {
        if coordinates.len() != self.degrees.len() {
            return Err(Error::DimensionMismatch {
                expected: self.degrees.len(),
                got: coordinates.len(),
            });
        }
        coordinates
            .iter()
            .zip(&self.degrees)
            .enumerate()
            .map(|(coordinate, (&value, &degree))| {
                if degree == 0 {
                    Ok(value)
                } else {
                    self.level_of(value).ok_or(Error::OutsideBoxUniverse {
                        coordinate,
                        value,
                        limit: self.params.power(self.params.levels),
                    })
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(BoxIndex)
    }
}

// Absorbs rounding in Δ^d · s for points that are close by construction.
const CLOSE_REL_TOL: f64 = 1e-12;

/// `(D, Δ)`-closeness of `a` to `b`: `Δ^{-d} a_ℓ <= b_ℓ <= Δ^{d} a_ℓ` for
/// every coordinate; degree 0 demands equality.
pub fn is_close(a: &[u64], b: &[u64], degree_vector: &[u32], delta: f64) -> Result<bool> {
    if a.len() != degree_vector.len() || b.len() != degree_vector.len() {
        return Err(Error::DimensionMismatch {
            expected: degree_vector.len(),
            got: if a.len() != degree_vector.len() {
                a.len()
            } else {
                b.len()
            },
        });
    }
    Ok(a.iter().zip(b).zip(degree_vector).all(|((&x, &y), &d)| {
        if d == 0 {
            return x == y;
        }
        let scale = delta.powi(d as i32);
        let (x, y) = (x as f64, y as f64);
        y <= scale * x * (1.0 + CLOSE_REL_TOL) && x <= scale * y * (1.0 + CLOSE_REL_TOL)
    }))
}
