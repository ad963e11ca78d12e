//! Radial grids on `[0, 1]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minimum node count.
pub const MIN_NODES: usize = 33;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GridKind {
    Uniform,
    /// Cubic Hermite map `xi -> r` with end slopes `1/stretch0` at `r = 0`
    /// and `1/stretch1` at `r = 1`; a stretch above 1 clusters nodes there.
    Graded { stretch0: f64, stretch1: f64 },
}

impl GridKind {
    /// Clustered toward the clamped boundary, where `Δu` has its layer.
    pub const DEFAULT: GridKind = GridKind::Graded {
        stretch0: 1.0,
        stretch1: 3.0,
    };
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialGrid {
    pub kind: GridKind,
    pub nodes: Vec<f64>,
}

impl RadialGrid {
    pub fn new(n: usize, kind: GridKind) -> Result<Self> {
        if n < MIN_NODES {
            return Err(Error::InvalidParameter(format!("grid needs at least {MIN_NODES} nodes, got {n}")));
        }
        let nodes = match kind {
            GridKind::Uniform => (0..n).map(|i| i as f64 / (n - 1) as f64).collect(),
            GridKind::Graded { stretch0, stretch1 } => {
                for s in [stretch0, stretch1] {
                    if !(s >= 1.0 / 3.0) || !s.is_finite() {
                        return Err(Error::InvalidParameter(format!(
                            "stretch factor {s} outside [1/3, inf): the map would not be monotone"
                        )));
                    }
                }
                let (m0, m1) = (1.0 / stretch0, 1.0 / stretch1);
                (0..n)
                    .map(|i| {
                        let x = i as f64 / (n - 1) as f64;
                        let x2 = x * x;
                        let x3 = x2 * x;
                        (3.0 * x2 - 2.0 * x3) + m0 * (x3 - 2.0 * x2 + x) + m1 * (x3 - x2)
                    })
                    .collect()
            }
        };
        let mut grid = Self { kind, nodes };
        grid.nodes[0] = 0.0;
        grid.nodes[n - 1] = 1.0;
        if grid.nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter("grid nodes are not strictly increasing".into()));
        }
        Ok(grid)
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(n, GridKind::Uniform)
    }

    pub fn graded(n: usize, stretch0: f64, stretch1: f64) -> Result<Self> {
        Self::new(n, GridKind::Graded { stretch0, stretch1 })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Same map with the computational spacing halved (`2n - 1` nodes).
    pub fn refined(&self) -> Self {
        Self::new(2 * self.len() - 1, self.kind).expect("refining a valid grid")
    }

    /// `s = r²` at the nodes.
    pub fn squares(&self) -> Vec<f64> {
        self.nodes.iter().map(|r| r * r).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn uniform_nodes() {
        let g = RadialGrid::uniform(33).unwrap();
        assert_eq!(g.nodes[0], 0.0);
        assert_eq!(g.nodes[32], 1.0);
        assert!((g.nodes[16] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn default_clusters_at_boundary() {
        let g = RadialGrid::new(513, GridKind::DEFAULT).unwrap();
        let h = 1.0 / 512.0;
        let first = g.nodes[1] - g.nodes[0];
        let last = g.nodes[512] - g.nodes[511];
        assert!((first / h - 1.0).abs() < 0.01);
        assert!((last / h - 1.0 / 3.0).abs() < 0.01);
    }

    #[test]
    fn rejects_small_or_folded() {
        assert!(RadialGrid::uniform(32).is_err());
        assert!(RadialGrid::graded(65, 0.2, 1.0).is_err());
    }

    #[test]
    fn refinement_contains_parent_nodes() {
        let g = RadialGrid::graded(65, 4.0, 2.0).unwrap();
        let f = g.refined();
        assert_eq!(f.len(), 129);
        for (i, r) in g.nodes.iter().enumerate() {
            assert!((f.nodes[2 * i] - r).abs() < 1e-15);
        }
    }

    proptest! {
        #[test]
        fn graded_is_strictly_increasing(n in 33usize..400, s0 in 0.34f64..50.0, s1 in 0.34f64..50.0) {
            let g = RadialGrid::graded(n, s0, s1).unwrap();
            prop_assert!(g.nodes.windows(2).all(|w| w[1] > w[0]));
            prop_assert_eq!(g.nodes[0], 0.0);
            prop_assert_eq!(*g.nodes.last().unwrap(), 1.0);
        }
    }
}
