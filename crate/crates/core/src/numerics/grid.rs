use crate::error::{Error, Result};

/// Radial nodes `0 = r[0] < r[1] < ... < r[n-1] = r_max`.
///
/// Spacing may vary; the GP discretization uses a uniform core around the
/// well edge and a geometrically stretched tail.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    r: Vec<f64>,
}

impl RadialGrid {
    pub fn new(r: Vec<f64>) -> Result<Self> {
        if r.len() < 3 {
            return Err(Error::precondition(format!(
                "radial grid needs at least 3 nodes, got {}",
                r.len()
            )));
        }
        if r[0] != 0.0 {
            return Err(Error::precondition("radial grid must start at r = 0"));
        }
        if r.iter().any(|x| !x.is_finite()) {
            return Err(Error::precondition("radial grid contains non-finite nodes"));
        }
        if r.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::precondition("radial grid must be strictly increasing"));
        }
        Ok(Self { r })
    }

    /// `node_count` equally spaced nodes on `[0, r_max]`.
    pub fn uniform(r_max: f64, node_count: usize) -> Result<Self> {
        if !(r_max > 0.0) || !r_max.is_finite() {
            return Err(Error::precondition("r_max must be positive and finite"));
        }
        if node_count < 3 {
            return Err(Error::precondition("node_count must be at least 3"));
        }
        let h = r_max / (node_count - 1) as f64;
        let mut r: Vec<f64> = (0..node_count).map(|i| i as f64 * h).collect();
        r[node_count - 1] = r_max;
        Self::new(r)
    }

    /// Uniform spacing `h` on `[0, r_core]`, then spacing growing by `ratio`
    /// per cell up to `max_spacing`, ending exactly at `r_max`.
    ///
    /// `r_core` is rounded to a whole number of cells so that any integer
    /// multiple of `h` inside the core (in particular `r = 1` when
    /// `h = 1/m`) is a node.
    pub fn stretched(
        h: f64,
        r_core: f64,
        r_max: f64,
        ratio: f64,
        max_spacing: f64,
    ) -> Result<Self> {
        if !(h > 0.0) || !(r_max > 0.0) || !(ratio >= 1.0) || !(max_spacing >= h) {
            return Err(Error::precondition(
                "stretched grid needs h > 0, r_max > 0, ratio >= 1, max_spacing >= h",
            ));
        }
        let core_cells = ((r_core.min(r_max) / h).round() as usize).max(2);
        let mut r: Vec<f64> = (0..=core_cells).map(|i| i as f64 * h).collect();
        if *r.last().unwrap() >= r_max {
            // Core reaches the cutoff; fall back to a uniform grid ending at r_max.
            return Self::uniform(r_max, core_cells + 1);
        }
        let mut dr = h;
        loop {
            dr = (dr * ratio).min(max_spacing);
            let last = *r.last().unwrap();
            let next = last + dr;
            if next >= r_max - 0.5 * dr {
                // Close the grid at r_max, merging a sliver cell into its neighbour.
                if r_max - last < 0.5 * dr && r.len() > core_cells + 1 {
                    r.pop();
                }
                r.push(r_max);
                break;
            }
            r.push(next);
        }
        Self::new(r)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.r
    }

    pub fn node_count(&self) -> usize {
        self.r.len()
    }

    pub fn r_max(&self) -> f64 {
        self.r[self.r.len() - 1]
    }

    /// Areas of the control volumes around each node: annuli bounded by the
    /// midpoints between neighbouring nodes (a disk of radius `r[1]/2` at the
    /// origin, a half-cell at the outer node). They sum to `pi * r_max^2`.
    pub fn cell_areas(&self) -> Vec<f64> {
        let n = self.r.len();
        let pi = std::f64::consts::PI;
        (0..n)
            .map(|i| {
                let inner = if i == 0 { 0.0 } else { 0.5 * (self.r[i - 1] + self.r[i]) };
                let outer = if i + 1 == n { self.r[i] } else { 0.5 * (self.r[i] + self.r[i + 1]) };
                pi * (outer * outer - inner * inner)
            })
            .collect()
    }

    /// Linear interpolation of samples `values` (on this grid) at radius `x`;
    /// zero beyond `r_max`.
    pub fn interpolate(&self, values: &[f64], x: f64) -> f64 {
        let r = &self.r;
        if x <= 0.0 {
            return values[0];
        }
        if x >= self.r_max() {
            return if x == self.r_max() { values[r.len() - 1] } else { 0.0 };
        }
        let j = r.partition_point(|&ri| ri <= x);
        let (a, b) = (r[j - 1], r[j]);
        let t = (x - a) / (b - a);
        values[j - 1] * (1.0 - t) + values[j] * t
    }
}
