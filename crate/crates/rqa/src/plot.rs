//! Recurrence plots: the full binary recurrence matrix, bit-packed.

use rayon::prelude::*;

use crate::embedding::EmbeddedSeries;
use crate::error::{Error, Result};

/// Largest embedded point count a recurrence plot may materialize.
pub const PLOT_POINT_GUARD: usize = 20_000;

/// Symmetric binary recurrence matrix with unit diagonal, stored bit-packed
/// row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrencePlot {
    size: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl RecurrencePlot {
    pub fn size(&self) -> usize {
        self.size
    }

    /// Whether points u and v recur (squared distance strictly below δ²).
    #[inline]
    pub fn is_recurrent(&self, u: usize, v: usize) -> bool {
        let word = self.bits[u * self.words_per_row + v / 64];
        (word >> (v % 64)) & 1 == 1
    }
}

/// Builds the recurrence matrix of an embedded series; rows and columns
/// follow embedding order, so row 0 belongs to the first embedded point.
pub fn recurrence_plot(emb: &EmbeddedSeries, delta: f64) -> Result<RecurrencePlot> {
    let size = emb.count();
    if size > PLOT_POINT_GUARD {
        return Err(Error::Guard {
            context: "recurrence plot size",
            limit: PLOT_POINT_GUARD,
            actual: size,
        });
    }
    let delta_sq = delta * delta;
    let words_per_row = size.div_ceil(64);
    let bits: Vec<u64> = (0..size)
        .into_par_iter()
        .flat_map_iter(|u| {
            let mut row = vec![0u64; words_per_row];
            for v in 0..size {
                if emb.dist_sq(u, v) < delta_sq {
                    row[v / 64] |= 1u64 << (v % 64);
                }
            }
            row
        })
        .collect();
    Ok(RecurrencePlot {
        size,
        words_per_row,
        bits,
    })
}
