use crate::error::{Error, Result};

use super::{Point, Window};

/// Uniform-grid bucketing of a point set for nearest-neighbour queries under
/// the wrap-around metric.
///
/// Buckets are stored contiguously: the points of cell `c` are
/// `order[starts[c]..starts[c + 1]]`.
#[derive(Debug, Clone)]
pub struct NearestIndex<'a> {
    points: &'a [Point],
    window: Window,
    cols: usize,
    rows: usize,
    cell_w: f64,
    cell_h: f64,
    starts: Vec<usize>,
    order: Vec<u32>,
}

impl<'a> NearestIndex<'a> {
    /// Buckets sized to hold about two points each.
    pub fn new(points: &'a [Point], window: Window) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::NoRrus);
        }
        let target = (2.0 * window.area() / points.len() as f64).sqrt();
        let cols = ((window.width / target).floor() as usize).clamp(1, 4096);
        let rows = ((window.height / target).floor() as usize).clamp(1, 4096);
        let cell_w = window.width / cols as f64;
        let cell_h = window.height / rows as f64;

        let mut index = NearestIndex {
            points,
            window,
            cols,
            rows,
            cell_w,
            cell_h,
            starts: vec![0; cols * rows + 1],
            order: vec![0; points.len()],
        };
        let cells: Vec<usize> = points.iter().map(|&p| index.cell_of(p)).collect();
        for &c in &cells {
            index.starts[c + 1] += 1;
        }
        for c in 0..cols * rows {
            index.starts[c + 1] += index.starts[c];
        }
        let mut fill = index.starts.clone();
        for (i, &c) in cells.iter().enumerate() {
            index.order[fill[c]] = i as u32;
            fill[c] += 1;
        }
        Ok(index)
    }

    fn cell_coords(&self, p: Point) -> (usize, usize) {
        let cx = ((p.x / self.cell_w) as usize).min(self.cols - 1);
        let cy = ((p.y / self.cell_h) as usize).min(self.rows - 1);
        (cx, cy)
    }

    fn cell_of(&self, p: Point) -> usize {
        let (cx, cy) = self.cell_coords(p);
        cy * self.cols + cx
    }

    fn scan(&self, cell: usize, q: Point, best: &mut (f64, usize)) {
        for &i in &self.order[self.starts[cell]..self.starts[cell + 1]] {
            let i = i as usize;
            let d2 = self.window.dist2(q, self.points[i]);
            if d2 < best.0 || (d2 == best.0 && i < best.1) {
                *best = (d2, i);
            }
        }
    }

    /// Index of the point nearest to `q`; ties go to the lowest index.
    pub fn nearest(&self, q: Point) -> usize {
        let (cx, cy) = self.cell_coords(q);
        let (cols, rows) = (self.cols as isize, self.rows as isize);
        let cell_min = self.cell_w.min(self.cell_h);
        // Rings up to this radius never revisit a cell after wrapping.
        let max_ring = (self.cols.min(self.rows) - 1) / 2;
        let mut best = (f64::INFINITY, usize::MAX);

        for r in 0..=max_ring as isize {
            for dy in -r..=r {
                let y = (cy as isize + dy).rem_euclid(rows) as usize;
                let step = if dy.abs() == r { 1 } else { 2 * r.max(1) };
                let mut dx = -r;
                while dx <= r {
                    let x = (cx as isize + dx).rem_euclid(cols) as usize;
                    self.scan(y * self.cols + x, q, &mut best);
                    dx += step;
                }
            }
            // Unvisited cells are at least `r` whole cells away from `q`.
            let reach = r as f64 * cell_min;
            if best.0 < reach * reach {
                return best.1;
            }
        }

        best = (f64::INFINITY, usize::MAX);
        for cell in 0..self.cols * self.rows {
            self.scan(cell, q, &mut best);
        }
        best.1
    }
}

/// Nearest-RRU index for every user.
pub fn assign_users(users: &[Point], rrus: &[Point], window: &Window) -> Result<Vec<usize>> {
    let index = NearestIndex::new(rrus, *window)?;
    Ok(users.iter().map(|&u| index.nearest(u)).collect())
}

/// Number of users served by each RRU.
pub fn assign_nearest(users: &[Point], rrus: &[Point], window: &Window) -> Result<Vec<u64>> {
    let mut counts = vec![0u64; rrus.len()];
    for i in assign_users(users, rrus, window)? {
        counts[i] += 1;
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_rru_takes_everyone() {
        let w = Window::new(10.0, 10.0);
        let rrus = [Point { x: 1.0, y: 9.0 }];
        let users: Vec<Point> = (0..50)
            .map(|i| Point {
                x: (i as f64 * 0.19) % 10.0,
                y: (i as f64 * 0.37) % 10.0,
            })
            .collect();
        assert_eq!(assign_nearest(&users, &rrus, &w).unwrap(), vec![50]);
    }

    #[test]
    fn empty_rru_set_is_an_error() {
        let w = Window::new(1.0, 1.0);
        assert_eq!(assign_nearest(&[], &[], &w), Err(Error::NoRrus));
    }

    #[test]
    fn wraps_across_edges() {
        let w = Window::new(10.0, 10.0);
        let rrus = [Point { x: 5.0, y: 5.0 }, Point { x: 9.9, y: 9.9 }];
        // (0.1, 0.1) is 0.28 from (9.9, 9.9) through the corner.
        let idx = NearestIndex::new(&rrus, w).unwrap();
        assert_eq!(idx.nearest(Point { x: 0.1, y: 0.1 }), 1);
    }

    #[test]
    fn ties_go_to_lowest_index() {
        let w = Window::new(4.0, 4.0);
        let rrus = [Point { x: 3.0, y: 2.0 }, Point { x: 1.0, y: 2.0 }];
        let idx = NearestIndex::new(&rrus, w).unwrap();
        assert_eq!(idx.nearest(Point { x: 2.0, y: 2.0 }), 0);
    }
}
