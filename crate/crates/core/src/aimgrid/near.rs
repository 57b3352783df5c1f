use std::collections::HashMap;

use rayon::prelude::*;

use super::AimGrid;
use crate::linalg::Pattern;
use crate::num::Real;

/// Pairs whose stencil node sets are at most `radius` cells apart.
///
/// The stencil of anchor `a` spans `a..=a+n` per axis, so the gap between two
/// stencils along an axis is `max(0, |a_m - a_n| - n)` cells.
pub fn build_near_map<T: Real>(grid: &AimGrid<T>, anchors: &[[usize; 3]], radius: usize) -> Pattern {
    let n = grid.order as isize;
    let mut by_anchor: HashMap<[usize; 3], Vec<usize>> = HashMap::new();
    for (m, a) in anchors.iter().enumerate() {
        by_anchor.entry(*a).or_default().push(m);
    }
    let reach = radius as isize + n;
    let r2 = (radius * radius) as isize;
    let dims = grid.dims.map(|d| d as isize);
    let rows: Vec<Vec<usize>> = anchors
        .par_iter()
        .map(|a| {
            let a = a.map(|v| v as isize);
            let mut row = Vec::new();
            for dz in -reach..=reach {
                let gz = (dz.abs() - n).max(0);
                for dy in -reach..=reach {
                    let gy = (dy.abs() - n).max(0);
                    for dx in -reach..=reach {
                        let gx = (dx.abs() - n).max(0);
                        if gx * gx + gy * gy + gz * gz > r2 {
                            continue;
                        }
                        let b = [a[0] + dx, a[1] + dy, a[2] + dz];
                        if (0..3).any(|i| b[i] < 0 || b[i] >= dims[i]) {
                            continue;
                        }
                        if let Some(list) = by_anchor.get(&b.map(|v| v as usize)) {
                            row.extend_from_slice(list);
                        }
                    }
                }
            }
            row
        })
        .collect();
    Pattern::from_rows(anchors.len(), rows)
}
