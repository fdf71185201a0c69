//! Post-hoc two-objective analysis. Both objectives are maximized.

use alloc::vec::Vec;
use core::fmt;

/// Indices of the non-dominated points, in input order. A point is
/// dominated when another is at least as good in both objectives and
/// strictly better in one. Duplicates of a front point all stay.
pub fn pareto_front(points: &[(f64, f64)]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    // Descending on the first objective, then the second.
    order.sort_by(|&a, &b| {
        points[b].0.total_cmp(&points[a].0).then(points[b].1.total_cmp(&points[a].1)).then(a.cmp(&b))
    });
    let mut keep = alloc::vec![false; points.len()];
    let mut best_y = f64::NEG_INFINITY;
    let mut i = 0;
    while i < order.len() {
        // Group exact ties on the first objective.
        let x = points[order[i]].0;
        let mut j = i;
        while j < order.len() && points[order[j]].0 == x {
            j += 1;
        }
        let group_max = points[order[i]].1;
        for &k in &order[i..j] {
            let y = points[k].1;
            if y == group_max && y > best_y {
                keep[k] = true;
            }
        }
        best_y = best_y.max(group_max);
        i = j;
    }
    (0..points.len()).filter(|&k| keep[k]).collect()
}

pub fn dominates(a: (f64, f64), b: (f64, f64)) -> bool {
    a.0 >= b.0 && a.1 >= b.1 && (a.0 > b.0 || a.1 > b.1)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NadirError {
    pub point: (f64, f64),
    pub nadir: (f64, f64),
}

impl fmt::Display for NadirError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "point {:?} does not dominate the nadir {:?}", self.point, self.nadir)
    }
}

#[cfg(feature = "std")]
impl std::error::Error for NadirError {}

/// Area of the union of the boxes spanned by each point and the nadir.
/// Points equal to the nadir in a coordinate contribute nothing.
pub fn hypervolume_2d(front: &[(f64, f64)], nadir: (f64, f64)) -> Result<f64, NadirError> {
    for &p in front {
        if !(p.0 >= nadir.0 && p.1 >= nadir.1) {
            return Err(NadirError { point: p, nadir });
        }
    }
    let mut pts: Vec<(f64, f64)> = front.to_vec();
    pts.sort_by(|a, b| b.0.total_cmp(&a.0).then(b.1.total_cmp(&a.1)));
    let mut area = 0.0;
    let mut covered_y = nadir.1;
    for (x, y) in pts {
        if y > covered_y {
            area += (x - nadir.0) * (y - covered_y);
            covered_y = y;
        }
    }
    Ok(area)
}
