use crate::error::{Error, Result};

/// An ordered, immutable collection of `n` points in `R^d`, stored row-major.
///
/// Construction rejects empty input, ragged rows and non-finite coordinates,
/// so every other routine can assume `n >= 1`, `d >= 1` and finite values.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    coords: Vec<f64>,
    n: usize,
    d: usize,
}

impl PointSet {
    pub fn new<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let first = rows.first().ok_or(Error::EmptyPointSet)?;
        let d = first.as_ref().len();
        if d == 0 {
            return Err(Error::InvalidParameter {
                name: "d",
                value: 0.0,
                reason: "points need at least one coordinate",
            });
        }
        let mut coords = Vec::with_capacity(rows.len() * d);
        for row in rows {
            let row = row.as_ref();
            if row.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: row.len(),
                });
            }
            coords.extend_from_slice(row);
        }
        Self::from_flat(coords, d)
    }

    /// Builds a point set from a row-major buffer of `n * d` coordinates.
    pub fn from_flat(coords: Vec<f64>, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter {
                name: "d",
                value: 0.0,
                reason: "points need at least one coordinate",
            });
        }
        if coords.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        if coords.len() % d != 0 {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: coords.len() % d,
            });
        }
        if let Some(pos) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index: pos / d });
        }
        let n = coords.len() / d;
        Ok(Self { coords, n, d })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    /// Always false; kept for API symmetry with slices.
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.d..(i + 1) * self.d]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.d)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.coords
    }

    /// A new point set made of the listed rows, in the order given.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        let mut coords = Vec::with_capacity(indices.len() * self.d);
        for &i in indices {
            coords.extend_from_slice(self.point(i));
        }
        Self::from_flat(coords, self.d)
    }

    /// Concatenates point sets of equal dimension.
    pub fn concat(sets: &[&PointSet]) -> Result<Self> {
        let first = sets.first().ok_or(Error::EmptyPointSet)?;
        let mut coords = Vec::new();
        for s in sets {
            if s.d != first.d {
                return Err(Error::DimensionMismatch {
                    expected: first.d,
                    found: s.d,
                });
            }
            coords.extend_from_slice(&s.coords);
        }
        Self::from_flat(coords, first.d)
    }

    pub fn translated(&self, shift: &[f64]) -> Result<Self> {
        self.check_dim(shift)?;
        let coords = self
            .coords
            .chunks_exact(self.d)
            .flat_map(|p| p.iter().zip(shift).map(|(a, b)| a + b))
            .collect();
        Self::from_flat(coords, self.d)
    }

    /// Coordinate-wise `(min, max)` over all points.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = self.point(0).to_vec();
        let mut hi = lo.clone();
        for p in self.iter() {
            for k in 0..self.d {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        (lo, hi)
    }

    pub(crate) fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() == self.d {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.d,
                found: x.len(),
            })
        }
    }
}

pub fn squared_distance(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum()
}

pub fn distance(x: &[f64], y: &[f64]) -> f64 {
    squared_distance(x, y).sqrt()
}
