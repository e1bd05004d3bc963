//! 8-connected A* over the inflated grid.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::SQRT_2;

use thiserror::Error;

use crate::world::{FootprintMap, OccupancyGrid, Pose};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum GlobalPlanError {
    #[error("no path between start and goal")]
    NoPath,
    #[error("start or goal lies in a lethal region or outside the grid")]
    InvalidEndpoint,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Open {
    f: f64,
    g: f64,
    cell: usize,
}

impl Eq for Open {}

impl Ord for Open {
    fn cmp(&self, other: &Self) -> Ordering {
        // BinaryHeap is a max-heap: invert so the smallest f pops first, with
        // deeper nodes and then lower indices preferred on ties.
        other
            .f
            .total_cmp(&self.f)
            .then(self.g.total_cmp(&other.g))
            .then(other.cell.cmp(&self.cell))
    }
}

impl PartialOrd for Open {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn octile(a: (usize, usize), b: (usize, usize)) -> f64 {
    let dx = a.0.abs_diff(b.0) as f64;
    let dy = a.1.abs_diff(b.1) as f64;
    (dx.max(dy) - dx.min(dy)) + SQRT_2 * dx.min(dy)
}

/// A* path for a point robot: only lethal cells block.
pub fn plan_global(grid: &OccupancyGrid, start: &Pose, goal: &Pose) -> Result<Vec<Pose>, GlobalPlanError> {
    plan_global_footprint(&FootprintMap::new(grid, 0.0), start, goal)
}

/// A* path for a disc robot described by `map`. Cells the footprint cannot
/// occupy block; every step costs its length times `1 + footprint cost`.
/// Returns cell-center poses from start to goal, each facing the next one
/// and the last carrying the goal heading.
pub fn plan_global_footprint(map: &FootprintMap, start: &Pose, goal: &Pose) -> Result<Vec<Pose>, GlobalPlanError> {
    let grid = map.grid();
    let s = grid.cell_of(start.x, start.y).ok_or(GlobalPlanError::InvalidEndpoint)?;
    let g = grid.cell_of(goal.x, goal.y).ok_or(GlobalPlanError::InvalidEndpoint)?;
    if map.cell_cost(s.0, s.1).is_none() || map.cell_cost(g.0, g.1).is_none() {
        return Err(GlobalPlanError::InvalidEndpoint);
    }

    let n = grid.width * grid.height;
    let res = grid.resolution;
    let mut best = vec![f64::INFINITY; n];
    let mut parent = vec![usize::MAX; n];
    let mut closed = vec![false; n];
    let mut open = BinaryHeap::new();
    let si = grid.index(s.0, s.1);
    let gi = grid.index(g.0, g.1);
    best[si] = 0.0;
    open.push(Open {
        f: octile(s, g) * res,
        g: 0.0,
        cell: si,
    });

    while let Some(Open { g: cost, cell, .. }) = open.pop() {
        if closed[cell] {
            continue;
        }
        closed[cell] = true;
        if cell == gi {
            break;
        }
        let (i, j) = (cell % grid.width, cell / grid.width);
        for (di, dj) in [(-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1)] {
            let (ni, nj) = (i as i64 + di, j as i64 + dj);
            if ni < 0 || nj < 0 || ni >= grid.width as i64 || nj >= grid.height as i64 {
                continue;
            }
            let (ni, nj) = (ni as usize, nj as usize);
            let Some(c) = map.cell_cost(ni, nj) else {
                continue;
            };
            let step = if di != 0 && dj != 0 { SQRT_2 * res } else { res };
            let next = cost + step * (1.0 + c);
            let k = grid.index(ni, nj);
            if next < best[k] {
                best[k] = next;
                parent[k] = cell;
                open.push(Open {
                    f: next + octile((ni, nj), g) * res,
                    g: next,
                    cell: k,
                });
            }
        }
    }

    if !closed[gi] {
        return Err(GlobalPlanError::NoPath);
    }
    let mut cells = vec![gi];
    while *cells.last().unwrap() != si {
        cells.push(parent[*cells.last().unwrap()]);
    }
    cells.reverse();
    let centers: Vec<_> = cells
        .iter()
        .map(|c| grid.cell_center(c % grid.width, c / grid.width))
        .collect();
    Ok(centers
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let theta = match centers.get(k + 1) {
                Some(q) => p.bearing_to(q),
                None => goal.theta,
            };
            Pose::new(p.x, p.y, theta)
        })
        .collect())
}

/// Sum of segment lengths of a pose sequence.
pub fn path_length(path: &[Pose]) -> f64 {
    path.windows(2).map(|w| w[0].distance(&w[1])).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::world::StaticObstacle;

    #[test]
    fn diagonal_on_empty_grid() {
        let grid = OccupancyGrid::empty(10.0, 10.0, 0.1);
        let path = plan_global(&grid, &Pose::new(0.05, 0.05, 0.0), &Pose::new(9.95, 9.95, 0.0)).unwrap();
        let straight = (2.0f64).sqrt() * 9.9;
        assert!((path_length(&path) - straight).abs() / straight < 0.05);
        assert_eq!(path.len(), 100);
    }

    #[test]
    fn same_cell_gives_single_pose() {
        let grid = OccupancyGrid::empty(4.0, 4.0, 0.1);
        let path = plan_global(&grid, &Pose::new(1.01, 1.01, 0.0), &Pose::new(1.04, 1.02, 0.3)).unwrap();
        assert_eq!(path.len(), 1);
        assert_eq!(path_length(&path), 0.0);
    }

    #[test]
    fn enclosed_goal_has_no_path() {
        let walls = [
            StaticObstacle::rect(3.0, 3.0, 7.0, 3.3),
            StaticObstacle::rect(3.0, 6.7, 7.0, 7.0),
            StaticObstacle::rect(3.0, 3.0, 3.3, 7.0),
            StaticObstacle::rect(6.7, 3.0, 7.0, 7.0),
        ];
        let grid = OccupancyGrid::rasterize(10.0, 10.0, 0.1, &walls, 0.0);
        let err = plan_global(&grid, &Pose::new(1.0, 1.0, 0.0), &Pose::new(5.0, 5.0, 0.0)).unwrap_err();
        assert_eq!(err, GlobalPlanError::NoPath);
    }

    #[test]
    fn lethal_endpoint_is_invalid() {
        let grid = OccupancyGrid::rasterize(10.0, 10.0, 0.1, &[StaticObstacle::circle(5.0, 5.0, 1.0)], 0.0);
        let err = plan_global(&grid, &Pose::new(1.0, 1.0, 0.0), &Pose::new(5.0, 5.0, 0.0)).unwrap_err();
        assert_eq!(err, GlobalPlanError::InvalidEndpoint);
        let err = plan_global(&grid, &Pose::new(-1.0, 1.0, 0.0), &Pose::new(2.0, 2.0, 0.0)).unwrap_err();
        assert_eq!(err, GlobalPlanError::InvalidEndpoint);
    }

    #[test]
    fn path_avoids_obstacle_and_footprint_keeps_distance() {
        let grid = OccupancyGrid::rasterize(10.0, 4.0, 0.05, &[StaticObstacle::rect(4.0, 0.0, 6.0, 2.5)], 0.3);
        let map = FootprintMap::new(&grid, 0.3);
        let path = plan_global_footprint(&map, &Pose::new(1.0, 1.0, 0.0), &Pose::new(9.0, 1.0, 0.0)).unwrap();
        for p in &path {
            assert!(map.cost_at(p.x, p.y).is_ok());
        }
        assert!(path.iter().any(|p| p.y > 2.8));
    }
}
