use super::{grid_cells, KnnStructure};

/// `wx × wy` occupancy grid over (distance, orientation) space.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantGrid {
    pub wx: usize,
    pub wy: usize,
    pub cx: f64,
    pub cy: f64,
    cells: Vec<bool>,
}

impl QuantGrid {
    pub fn empty(wx: usize, wy: usize, cx: f64, cy: f64) -> Self {
        QuantGrid { wx, wy, cx, cy, cells: vec![false; wx * wy] }
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.cells[x * self.wy + y]
    }

    pub fn set(&mut self, x: usize, y: usize) {
        self.cells[x * self.wy + y] = true;
    }

    pub fn occupied(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }
}

/// Marks the cell `(⌊d/cx⌋, ⌊θ/cy⌋)` of each neighbour. Distances beyond
/// the grid clamp to the last distance row so the grid size never depends
/// on the input.
pub fn quantize(s: &KnnStructure, cx: f64, cy: f64, d_max: f64) -> QuantGrid {
    let wx = grid_cells(d_max, cx).max(1);
    let wy = grid_cells(std::f64::consts::TAU, cy).max(1);
    let mut grid = QuantGrid::empty(wx, wy, cx, cy);
    for n in &s.neighbors {
        let x = ((n.d / cx).floor() as usize).min(wx - 1);
        let y = ((n.theta_avg / cy).floor() as usize).min(wy - 1);
        grid.set(x, y);
    }
    grid
}

/// Fixed-length bit string read from a grid row by row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitString {
    pub bits: Vec<bool>,
}

impl BitString {
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

pub fn to_bitstring(g: &QuantGrid) -> BitString {
    BitString { bits: g.cells.clone() }
}
