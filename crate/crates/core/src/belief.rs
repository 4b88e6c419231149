//! Points in a bounded box-shaped decision space.

use crate::error::{invalid, Result};

/// A point in the decision space.
#[derive(Debug, Clone, PartialEq)]
pub struct Belief(pub Vec<f64>);

impl Belief {
    pub fn scalar(x: f64) -> Self {
        Belief(vec![x])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    /// First coordinate; convenient for the one-dimensional environments.
    pub fn x(&self) -> f64 {
        self.0[0]
    }
}

/// Axis-aligned box `[lo_k, hi_k]` per coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl Domain {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(invalid("domain bounds must be nonempty and of equal length"));
        }
        if lo.iter().zip(&hi).any(|(l, h)| !(l.is_finite() && h.is_finite() && l < h)) {
            return Err(invalid("every domain interval must satisfy lo < hi"));
        }
        Ok(Domain { lo, hi })
    }

    pub fn unit_interval() -> Self {
        Domain { lo: vec![0.0], hi: vec![1.0] }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    /// Euclidean diameter of the box.
    pub fn diameter(&self) -> f64 {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| (h - l) * (h - l))
            .sum::<f64>()
            .sqrt()
    }

    pub fn midpoint(&self) -> Belief {
        Belief(self.lo.iter().zip(&self.hi).map(|(l, h)| 0.5 * (l + h)).collect())
    }

    pub fn contains(&self, b: &Belief) -> bool {
        b.dim() == self.dim()
            && b.0
                .iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(x, (l, h))| *l <= *x && *x <= *h)
    }

    /// Euclidean projection onto the box (coordinate-wise clamp).
    pub fn project(&self, b: &mut Belief) {
        for (x, (l, h)) in b.0.iter_mut().zip(self.lo.iter().zip(&self.hi)) {
            *x = x.clamp(*l, *h);
        }
    }

    /// Points of a regular grid with `resolution` points per coordinate,
    /// in lexicographic order (first coordinate most significant).
    pub fn grid(&self, resolution: usize) -> Vec<Belief> {
        assert!(resolution >= 2, "grid resolution must be at least 2");
        let axes: Vec<Vec<f64>> = self
            .lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| grid_axis(*l, *h, resolution))
            .collect();
        let total = resolution.pow(self.dim() as u32);
        let mut points = Vec::with_capacity(total);
        let mut idx = vec![0usize; self.dim()];
        for _ in 0..total {
            points.push(Belief(idx.iter().zip(&axes).map(|(i, a)| a[*i]).collect()));
            for k in (0..idx.len()).rev() {
                idx[k] += 1;
                if idx[k] < resolution {
                    break;
                }
                idx[k] = 0;
            }
        }
        points
    }
}

/// `resolution` evenly spaced values from `lo` to `hi` inclusive.
pub fn grid_axis(lo: f64, hi: f64, resolution: usize) -> Vec<f64> {
    let steps = (resolution - 1) as f64;
    (0..resolution)
        .map(|i| {
            if i + 1 == resolution {
                hi
            } else {
                lo + (hi - lo) * (i as f64) / steps
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_lexicographic() {
        let d = Domain::new(vec![0.0, 0.0], vec![1.0, 2.0]).unwrap();
        let g = d.grid(3);
        assert_eq!(g.len(), 9);
        assert_eq!(g[0].0, vec![0.0, 0.0]);
        assert_eq!(g[1].0, vec![0.0, 1.0]);
        assert_eq!(g[3].0, vec![0.5, 0.0]);
        assert_eq!(g[8].0, vec![1.0, 2.0]);
    }

    #[test]
    fn unit_grid_hits_quarters() {
        let g = grid_axis(0.0, 1.0, 5);
        assert_eq!(g, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn projection_clamps() {
        let d = Domain::unit_interval();
        let mut b = Belief::scalar(-0.3);
        d.project(&mut b);
        assert_eq!(b.x(), 0.0);
        assert!(d.contains(&b));
        assert!(!d.contains(&Belief::scalar(1.5)));
    }

    #[test]
    fn rejects_empty_interval() {
        assert!(Domain::new(vec![1.0], vec![1.0]).is_err());
        assert!(Domain::new(vec![0.0], vec![1.0, 2.0]).is_err());
    }
}
