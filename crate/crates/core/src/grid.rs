use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest node count accepted by [`RadialGrid::new`].
pub const MIN_NODES: usize = 16;

/// Uniform mesh on `[0, r_max]`. Node 0 is the origin, the last node is `r_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    r_max: f64,
    n: usize,
    dr: f64,
}

impl RadialGrid {
    pub fn new(r_max: f64, n: usize) -> Result<Self> {
        if n < MIN_NODES {
            return Err(Error::validation(
                "grid",
                format!("need at least {MIN_NODES} nodes, got {n}"),
            ));
        }
        if !(r_max > 0.0 && r_max.is_finite()) {
            return Err(Error::validation(
                "grid",
                format!("r_max must be positive and finite, got {r_max}"),
            ));
        }
        Ok(Self {
            r_max,
            n,
            dr: r_max / (n - 1) as f64,
        })
    }

    /// Grid with spacing as close to `dr` as possible that ends exactly at `r_max`.
    pub fn with_spacing(r_max: f64, dr: f64) -> Result<Self> {
        if !(dr > 0.0 && dr.is_finite()) {
            return Err(Error::validation("grid", format!("bad spacing {dr}")));
        }
        let cells = (r_max / dr).round().max(1.0) as usize;
        Self::new(r_max, cells + 1)
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dr(&self) -> f64 {
        self.dr
    }

    #[inline]
    pub fn r(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.r_max
        } else {
            i as f64 * self.dr
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.r(i))
    }

    /// Samples `f` at every node.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.nodes().map(f).collect()
    }

    /// Index of the node nearest to `r`, clamped to the grid.
    pub fn nearest(&self, r: f64) -> usize {
        ((r / self.dr).round().max(0.0) as usize).min(self.n - 1)
    }
}

pub fn make_grid(r_max: f64, n: usize) -> Result<RadialGrid> {
    RadialGrid::new(r_max, n)
}
