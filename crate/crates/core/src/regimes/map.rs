use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cycle::OperatingMode;
use crate::error::{OttoError, Result};

use super::{BoundaryCurve, CaseFamily, Window, DEFAULT_CURVE_SAMPLES};

pub const DEFAULT_RESOLUTION: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub x: f64,
    pub y: f64,
    pub mode: OperatingMode,
    pub w: f64,
}

/// Operating-mode labels on a uniform grid of a control plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionMap {
    pub family: CaseFamily,
    pub window: Window,
    pub nx: usize,
    pub ny: usize,
    pub zero_tol: f64,
    /// Row-major: `y` index outer, `x` index inner.
    pub cells: Vec<Cell>,
    pub boundaries: Vec<BoundaryCurve>,
}

/// A connected set of same-mode cells (4-neighbour connectivity).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Region {
    pub mode: OperatingMode,
    pub size: usize,
}

/// Label every grid node of `window` with its operating mode.
///
/// Rows are evaluated in parallel; the output does not depend on scheduling.
pub fn region_map(
    family: &CaseFamily,
    window: &Window,
    nx: usize,
    ny: usize,
    zero_tol: f64,
) -> Result<RegionMap> {
    family.validate()?;
    window.validate()?;
    if nx < 2 || ny < 2 {
        return Err(OttoError::InvalidArgument(format!(
            "resolution must be at least 2x2, got {nx}x{ny}"
        )));
    }
    let xs = Window::axis(window.x_min, window.x_max, nx);
    let ys = Window::axis(window.y_min, window.y_max, ny);
    let rows: Vec<Vec<Cell>> = ys
        .par_iter()
        .map(|&y| {
            xs.iter()
                .map(|&x| {
                    let r = family.evaluate(x, y, zero_tol)?;
                    Ok(Cell {
                        x,
                        y,
                        mode: r.mode,
                        w: r.w,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let boundaries = family.boundaries(window, DEFAULT_CURVE_SAMPLES)?;
    Ok(RegionMap {
        family: *family,
        window: *window,
        nx,
        ny,
        zero_tol,
        cells: rows.into_iter().flatten().collect(),
        boundaries,
    })
}

impl RegionMap {
    pub fn cell(&self, ix: usize, iy: usize) -> &Cell {
        &self.cells[iy * self.nx + ix]
    }

    /// Cell nearest to `(x, y)`.
    pub fn cell_near(&self, x: f64, y: f64) -> &Cell {
        let fx = (x - self.window.x_min) / (self.window.x_max - self.window.x_min);
        let fy = (y - self.window.y_min) / (self.window.y_max - self.window.y_min);
        let ix = (fx * (self.nx - 1) as f64)
            .round()
            .clamp(0.0, (self.nx - 1) as f64) as usize;
        let iy = (fy * (self.ny - 1) as f64)
            .round()
            .clamp(0.0, (self.ny - 1) as f64) as usize;
        self.cell(ix, iy)
    }

    pub fn mode_counts(&self) -> BTreeMap<OperatingMode, usize> {
        let mut counts = BTreeMap::new();
        for c in &self.cells {
            *counts.entry(c.mode).or_insert(0) += 1;
        }
        counts
    }

    fn neighbours(&self, idx: usize) -> impl Iterator<Item = usize> + '_ {
        let (ix, iy) = (idx % self.nx, idx / self.nx);
        let right = (ix + 1 < self.nx).then(|| idx + 1);
        let left = (ix > 0).then(|| idx - 1);
        let up = (iy + 1 < self.ny).then(|| idx + self.nx);
        let down = (iy > 0).then(|| idx - self.nx);
        [right, left, up, down].into_iter().flatten()
    }

    /// Connected non-idle regions, in order of their first cell.
    pub fn regions(&self) -> Vec<Region> {
        let mut seen = vec![false; self.cells.len()];
        let mut out = Vec::new();
        for start in 0..self.cells.len() {
            let mode = self.cells[start].mode;
            if seen[start] || mode == OperatingMode::Idle {
                continue;
            }
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            let mut size = 0;
            while let Some(i) = queue.pop_front() {
                size += 1;
                for j in self.neighbours(i) {
                    if !seen[j] && self.cells[j].mode == mode {
                        seen[j] = true;
                        queue.push_back(j);
                    }
                }
            }
            out.push(Region { mode, size });
        }
        out
    }

    /// Unordered pairs of distinct non-idle modes that share a grid edge.
    pub fn adjacent_modes(&self) -> BTreeSet<(OperatingMode, OperatingMode)> {
        let mut pairs = BTreeSet::new();
        for i in 0..self.cells.len() {
            let a = self.cells[i].mode;
            if a == OperatingMode::Idle {
                continue;
            }
            for j in self.neighbours(i) {
                let b = self.cells[j].mode;
                if b != OperatingMode::Idle && a != b {
                    pairs.insert((a.min(b), a.max(b)));
                }
            }
        }
        pairs
    }

    /// One `x,y,mode,w` row per grid node, header first.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        let io = |e: csv::Error| OttoError::InvalidArgument(format!("csv output: {e}"));
        wtr.write_record(["x", "y", "mode", "w"]).map_err(io)?;
        for c in &self.cells {
            wtr.write_record([
                c.x.to_string(),
                c.y.to_string(),
                c.mode.as_str().to_string(),
                c.w.to_string(),
            ])
            .map_err(io)?;
        }
        wtr.flush()
            .map_err(|e| OttoError::InvalidArgument(format!("csv output: {e}")))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is ascii"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_level_has_four_wedges() {
        let fam = CaseFamily::ThreeLevel { tc: 1.0, th: 2.0 };
        let w = Window::square(0.0, 8.0).unwrap();
        let m = region_map(&fam, &w, 64, 64, 1e-9).unwrap();
        let regions: Vec<_> = m.regions().into_iter().filter(|r| r.size > 4).collect();
        assert_eq!(regions.len(), 4, "{regions:?}");
        let engines = regions
            .iter()
            .filter(|r| r.mode == OperatingMode::Engine)
            .count();
        let fridges = regions
            .iter()
            .filter(|r| r.mode == OperatingMode::Refrigerator)
            .count();
        assert_eq!((engines, fridges), (2, 2));
        assert_eq!(m.boundaries.len(), 3);
    }

    #[test]
    fn single_mode_window() {
        // deep inside the engine wedge
        let fam = CaseFamily::ThreeLevel { tc: 1.0, th: 2.0 };
        let w = Window::new(3.0, 3.2, 4.0, 4.2).unwrap();
        let m = region_map(&fam, &w, 8, 8, 1e-9).unwrap();
        assert_eq!(m.regions().len(), 1);
        assert!(m.adjacent_modes().is_empty());
        assert!(m.boundaries.iter().all(|b| b.is_empty()));
    }

    #[test]
    fn csv_layout() {
        let fam = CaseFamily::Jz {
            r1: 0.7,
            r2: 2.0,
            tc: 1.0,
            th: 1.5,
        };
        let w = Window::square(-1.0, 1.0).unwrap();
        let m = region_map(&fam, &w, 3, 2, 1e-9).unwrap();
        let s = m.to_csv_string().unwrap();
        let lines: Vec<_> = s.lines().collect();
        assert_eq!(lines.len(), 7);
        assert_eq!(lines[0], "x,y,mode,w");
        assert!(lines[1].starts_with("-1,-1,"));
        assert!(lines[2].starts_with("0,-1,"));
    }

    #[test]
    fn rejects_tiny_resolution() {
        let fam = CaseFamily::ThreeLevel { tc: 1.0, th: 2.0 };
        let w = Window::square(0.0, 1.0).unwrap();
        assert!(region_map(&fam, &w, 1, 5, 1e-9).is_err());
    }

    #[test]
    fn cell_lookup() {
        let fam = CaseFamily::Jz {
            r1: 0.7,
            r2: 2.0,
            tc: 1.0,
            th: 1.5,
        };
        let w = Window::square(-3.0, 3.0).unwrap();
        let m = region_map(&fam, &w, 61, 61, 1e-9).unwrap();
        let c = m.cell_near(0.659, 0.976);
        assert!((c.x - 0.7).abs() < 1e-12 && (c.y - 1.0).abs() < 1e-12);
        assert_eq!(c.mode, OperatingMode::Engine);
    }
}
