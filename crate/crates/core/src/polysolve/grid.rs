use std::collections::BTreeMap;

use crate::error::{check_open_unit, Result};
use crate::points::{squared_distance, PointSet};

/// The lattice `gamma * Z^d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub cell: f64,
    pub d: usize,
}

impl GridSpec {
    /// `gamma = 2 sqrt(ln(1/(eps rho)) / d)`.
    pub fn for_params(d: usize, eps: f64, rho: f64) -> Result<Self> {
        let er = eps * rho;
        check_open_unit("eps*rho", er)?;
        Ok(Self {
            cell: 2.0 * ((1.0 / er).ln() / d as f64).sqrt(),
            d,
        })
    }

    pub fn point(&self, index: &[i64]) -> Vec<f64> {
        index.iter().map(|&i| i as f64 * self.cell).collect()
    }

    /// Indices of every lattice point within `radius` of `center`, in
    /// lexicographic order.
    pub fn points_in_ball(&self, center: &[f64], radius: f64) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        let mut idx = Vec::with_capacity(self.d);
        let r2 = radius * radius;
        self.enumerate(center, r2, r2, &mut idx, &mut out);
        out
    }

    fn enumerate(
        &self,
        center: &[f64],
        r2: f64,
        remaining: f64,
        idx: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
    ) {
        let k = idx.len();
        if k == self.d {
            if squared_distance(&self.point(idx), center) <= r2 {
                out.push(idx.clone());
            }
            return;
        }
        // One cell of slack on each side; the exact test happens at the leaf.
        let reach = remaining.max(0.0).sqrt();
        let lo = ((center[k] - reach) / self.cell).floor() as i64 - 1;
        let hi = ((center[k] + reach) / self.cell).ceil() as i64 + 1;
        for i in lo..=hi {
            let off = i as f64 * self.cell - center[k];
            let rest = remaining - off * off;
            if rest < -1e-9 * r2.max(1.0) {
                continue;
            }
            idx.push(i);
            self.enumerate(center, r2, rest, idx, out);
            idx.pop();
        }
    }
}

/// A lattice point `q` and the indices of the points of `P` within
/// `r' sqrt(ln(1/(eps rho)))` of it.
#[derive(Debug, Clone, PartialEq)]
pub struct Neighborhood {
    pub index: Vec<i64>,
    pub q: Vec<f64>,
    pub members: Vec<usize>,
}

/// Radius `r' sqrt(ln(1/(eps rho)))` of the neighborhood `Q_{P,q}(r')`.
pub fn neighborhood_radius(r_prime: f64, eps: f64, rho: f64) -> Result<f64> {
    let er = eps * rho;
    check_open_unit("eps*rho", er)?;
    Ok(r_prime * (1.0 / er).ln().sqrt())
}

/// The non-empty neighborhoods `Q_{P,q}(4)` over the lattice with side
/// `2 sqrt(ln(1/(eps rho)) / d)`, ordered by lattice index.
pub fn grid_neighborhoods(points: &PointSet, eps: f64, rho: f64) -> Result<Vec<Neighborhood>> {
    grid_neighborhoods_with(points, eps, rho, 4.0)
}

pub fn grid_neighborhoods_with(
    points: &PointSet,
    eps: f64,
    rho: f64,
    r_prime: f64,
) -> Result<Vec<Neighborhood>> {
    let grid = GridSpec::for_params(points.dim(), eps, rho)?;
    let radius = neighborhood_radius(r_prime, eps, rho)?;
    let mut cells: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
    for (i, p) in points.iter().enumerate() {
        for index in grid.points_in_ball(p, radius) {
            cells.entry(index).or_default().push(i);
        }
    }
    Ok(cells
        .into_iter()
        .map(|(index, members)| Neighborhood {
            q: grid.point(&index),
            index,
            members,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn cell_side() {
        let g = GridSpec::for_params(4, 1.0 / std::f64::consts::E, 0.999_999_999).unwrap();
        assert!((g.cell - 1.0).abs() < 1e-8);
        assert!(GridSpec::for_params(2, 1.0, 1.0).is_err());
    }

    #[test]
    fn single_point_matches_brute_force_enumeration() {
        for d in 1..=3 {
            let origin = vec![0.0; d];
            let p = PointSet::new(std::slice::from_ref(&origin)).unwrap();
            let (eps, rho) = (0.3, 0.2);
            let g = GridSpec::for_params(d, eps, rho).unwrap();
            let radius = neighborhood_radius(4.0, eps, rho).unwrap();
            let hs = grid_neighborhoods(&p, eps, rho).unwrap();

            let span = (radius / g.cell).ceil() as i64 + 2;
            let mut expected = BTreeSet::new();
            let mut idx = vec![-span; d];
            loop {
                if squared_distance(&g.point(&idx), &origin) <= radius * radius {
                    expected.insert(idx.clone());
                }
                let mut k = 0;
                while k < d {
                    idx[k] += 1;
                    if idx[k] <= span {
                        break;
                    }
                    idx[k] = -span;
                    k += 1;
                }
                if k == d {
                    break;
                }
            }
            let got: BTreeSet<_> = hs.iter().map(|h| h.index.clone()).collect();
            assert_eq!(got, expected, "d={d}");
            assert!(hs.iter().all(|h| h.members == vec![0]));
        }
    }

    #[test]
    fn one_dimension_has_five_cells_per_point() {
        // Radius 4 sqrt(L) over side 2 sqrt(L): indices -2..=2.
        let p = PointSet::new(&[[0.0]]).unwrap();
        let hs = grid_neighborhoods(&p, 0.5, 0.5).unwrap();
        let idx: Vec<i64> = hs.iter().map(|h| h.index[0]).collect();
        assert_eq!(idx, vec![-2, -1, 0, 1, 2]);
    }

    #[test]
    fn members_respect_radius_and_order_is_lexicographic() {
        let p = PointSet::new(&[[0.0, 0.0], [1.3, -0.4], [2.5, 2.0], [-1.0, 0.7]]).unwrap();
        let (eps, rho) = (0.2, 0.3);
        let radius = neighborhood_radius(4.0, eps, rho).unwrap();
        let hs = grid_neighborhoods(&p, eps, rho).unwrap();
        for h in &hs {
            assert!(!h.members.is_empty());
            for &i in &h.members {
                assert!(squared_distance(p.point(i), &h.q) <= radius * radius);
            }
        }
        for w in hs.windows(2) {
            assert!(w[0].index < w[1].index);
        }
    }

    #[test]
    fn far_points_have_disjoint_families() {
        let p = PointSet::new(&[[0.0, 0.0], [1000.0, 1000.0]]).unwrap();
        let hs = grid_neighborhoods(&p, 0.3, 0.3).unwrap();
        assert!(hs.iter().all(|h| h.members.len() == 1));
    }

    #[test]
    fn translation_by_one_period_shifts_indices() {
        let (eps, rho) = (0.25, 0.4);
        let p = PointSet::new(&[[0.1, -0.3], [0.9, 0.4], [-0.6, 1.1]]).unwrap();
        let g = GridSpec::for_params(2, eps, rho).unwrap();
        let q = p.translated(&[g.cell, g.cell]).unwrap();
        let a = grid_neighborhoods(&p, eps, rho).unwrap();
        let b = grid_neighborhoods(&q, eps, rho).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(vec![x.index[0] + 1, x.index[1] + 1], y.index);
            assert_eq!(x.members, y.members);
        }
    }
}
