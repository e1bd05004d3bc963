use super::{Point2, Pose, StaticObstacle};

/// Cost value of a cell whose center lies inside a static obstacle.
pub const LETHAL: f64 = f64::INFINITY;

/// Returned when a footprint touches a lethal cell or leaves the map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("pose is infeasible")]
pub struct Infeasible;

/// Row-major rasterized world. Cell `(i, j)` covers
/// `[origin.x + i·res, origin.x + (i+1)·res) × [origin.y + j·res, ...)`.
/// Non-lethal cells hold an inflation cost in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyGrid {
    pub resolution: f64,
    pub width: usize,
    pub height: usize,
    pub origin: Point2,
    cells: Vec<f64>,
}

impl OccupancyGrid {
    /// Empty grid covering `width_m × height_m` starting at the origin.
    pub fn empty(width_m: f64, height_m: f64, resolution: f64) -> Self {
        let width = (width_m / resolution - 1e-9).ceil().max(1.0) as usize;
        let height = (height_m / resolution - 1e-9).ceil().max(1.0) as usize;
        Self {
            resolution,
            width,
            height,
            origin: Point2::new(0.0, 0.0),
            cells: vec![0.0; width * height],
        }
    }

    /// Marks every cell whose center lies in an obstacle as lethal, then
    /// inflates: a cell at center distance `d < radius` from the nearest
    /// lethal cell gets cost `1 - d / radius`.
    pub fn rasterize(
        width_m: f64,
        height_m: f64,
        resolution: f64,
        obstacles: &[StaticObstacle],
        inflation_radius: f64,
    ) -> Self {
        let mut grid = Self::empty(width_m, height_m, resolution);
        let mut lethal = Vec::new();
        for j in 0..grid.height {
            for i in 0..grid.width {
                let c = grid.cell_center(i, j);
                if obstacles.iter().any(|o| o.contains(&c)) {
                    let k = grid.index(i, j);
                    grid.cells[k] = LETHAL;
                    lethal.push((i, j));
                }
            }
        }
        if inflation_radius > 0.0 {
            let reach = (inflation_radius / resolution).ceil() as isize;
            for &(li, lj) in &lethal {
                for dj in -reach..=reach {
                    for di in -reach..=reach {
                        let (i, j) = (li as isize + di, lj as isize + dj);
                        if i < 0 || j < 0 || i >= grid.width as isize || j >= grid.height as isize {
                            continue;
                        }
                        let d = ((di * di + dj * dj) as f64).sqrt() * resolution;
                        if d >= inflation_radius {
                            continue;
                        }
                        let k = grid.index(i as usize, j as usize);
                        let cost = 1.0 - d / inflation_radius;
                        if grid.cells[k] < cost {
                            grid.cells[k] = cost;
                        }
                    }
                }
            }
        }
        grid
    }

    pub fn width_m(&self) -> f64 {
        self.width as f64 * self.resolution
    }

    pub fn height_m(&self) -> f64 {
        self.height as f64 * self.resolution
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.width + i
    }

    pub fn cell_center(&self, i: usize, j: usize) -> Point2 {
        Point2::new(
            self.origin.x + (i as f64 + 0.5) * self.resolution,
            self.origin.y + (j as f64 + 0.5) * self.resolution,
        )
    }

    /// Cell containing a world point, if inside the grid.
    pub fn cell_of(&self, x: f64, y: f64) -> Option<(usize, usize)> {
        let fx = (x - self.origin.x) / self.resolution;
        let fy = (y - self.origin.y) / self.resolution;
        if !(fx >= 0.0 && fy >= 0.0) {
            return None;
        }
        let (i, j) = (fx.floor() as usize, fy.floor() as usize);
        (i < self.width && j < self.height).then_some((i, j))
    }

    pub fn contains(&self, p: &Point2) -> bool {
        self.cell_of(p.x, p.y).is_some()
    }

    pub fn cost(&self, i: usize, j: usize) -> f64 {
        self.cells[self.index(i, j)]
    }

    pub fn is_lethal(&self, i: usize, j: usize) -> bool {
        self.cost(i, j) == LETHAL
    }

    pub fn cells(&self) -> &[f64] {
        &self.cells
    }

    pub fn lethal_count(&self) -> usize {
        self.cells.iter().filter(|c| **c == LETHAL).count()
    }

    /// Indices of the cells whose centers are within `radius` of `(x, y)`.
    fn cells_within(&self, x: f64, y: f64, radius: f64) -> impl Iterator<Item = (usize, usize)> + '_ {
        let res = self.resolution;
        let i0 = (((x - radius - self.origin.x) / res).floor().max(0.0)) as usize;
        let j0 = (((y - radius - self.origin.y) / res).floor().max(0.0)) as usize;
        let i1 = ((((x + radius - self.origin.x) / res).floor()) as isize).min(self.width as isize - 1);
        let j1 = ((((y + radius - self.origin.y) / res).floor()) as isize).min(self.height as isize - 1);
        let r2 = radius * radius;
        (j0 as isize..=j1)
            .flat_map(move |j| (i0 as isize..=i1).map(move |i| (i, j)))
            .filter(|&(i, j)| i >= 0 && j >= 0)
            .map(|(i, j)| (i as usize, j as usize))
            .filter(move |&(i, j)| {
                let c = self.cell_center(i, j);
                let (dx, dy) = (c.x - x, c.y - y);
                dx * dx + dy * dy <= r2
            })
    }

    /// Euclidean distance from `p` to the nearest lethal cell center, searching
    /// no further than `max_range`.
    pub fn distance_to_lethal(&self, p: &Point2, max_range: f64) -> Option<f64> {
        self.cells_within(p.x, p.y, max_range)
            .filter(|&(i, j)| self.is_lethal(i, j))
            .map(|(i, j)| self.cell_center(i, j).distance(p))
            .min_by(|a, b| a.total_cmp(b))
    }
}

/// Maximum inflated cost under a circular footprint centered at `pose`.
///
/// Cells of the footprint that fall outside the grid are ignored; only the
/// pose itself must lie inside the grid.
pub fn occupancy_cost(grid: &OccupancyGrid, pose: &Pose, footprint_radius: f64) -> Result<f64, Infeasible> {
    if grid.cell_of(pose.x, pose.y).is_none() {
        return Err(Infeasible);
    }
    let mut worst: f64 = 0.0;
    for (i, j) in grid.cells_within(pose.x, pose.y, footprint_radius) {
        let c = grid.cost(i, j);
        if c == LETHAL {
            return Err(Infeasible);
        }
        worst = worst.max(c);
    }
    // a zero radius still samples the cell under the pose
    if footprint_radius == 0.0 {
        let (i, j) = grid.cell_of(pose.x, pose.y).unwrap();
        let c = grid.cost(i, j);
        if c == LETHAL {
            return Err(Infeasible);
        }
        worst = worst.max(c);
    }
    Ok(worst)
}

/// Per-cell footprint cost for a robot of fixed radius, precomputed once per
/// grid so rollouts can be scored with a single lookup per pose.
///
/// A cell is infeasible when a lethal cell center lies within
/// `radius + res·√2/2` of its center (so every pose inside the cell is
/// collision-free when the cell is feasible) or when the footprint of a pose in
/// the cell could cross the map boundary. The cost of a feasible cell is the
/// maximum inflated cost within `radius` of the cell center.
#[derive(Debug, Clone)]
pub struct FootprintMap {
    grid: OccupancyGrid,
    radius: f64,
    costs: Vec<Option<f64>>,
}

impl FootprintMap {
    pub fn new(grid: &OccupancyGrid, radius: f64) -> Self {
        let res = grid.resolution;
        let margin = if radius > 0.0 { res * std::f64::consts::FRAC_1_SQRT_2 } else { 0.0 };
        let mut costs = Vec::with_capacity(grid.width * grid.height);
        let (wm, hm) = (grid.width_m(), grid.height_m());
        for j in 0..grid.height {
            for i in 0..grid.width {
                let c = grid.cell_center(i, j);
                let lo_x = c.x - res / 2.0 - grid.origin.x;
                let lo_y = c.y - res / 2.0 - grid.origin.y;
                let out_of_bounds = radius > 0.0
                    && (lo_x < radius || lo_y < radius || lo_x + res + radius > wm || lo_y + res + radius > hm);
                if out_of_bounds || grid.is_lethal(i, j) {
                    costs.push(None);
                    continue;
                }
                let mut worst: f64 = grid.cost(i, j);
                let mut hit = false;
                for (a, b) in grid.cells_within(c.x, c.y, radius + margin) {
                    let v = grid.cost(a, b);
                    if v == LETHAL {
                        hit = true;
                        break;
                    }
                    if grid.cell_center(a, b).distance(&c) <= radius {
                        worst = worst.max(v);
                    }
                }
                costs.push(if hit { None } else { Some(worst) });
            }
        }
        Self {
            grid: grid.clone(),
            radius,
            costs,
        }
    }

    pub fn grid(&self) -> &OccupancyGrid {
        &self.grid
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Footprint cost at the cell containing `(x, y)`.
    #[inline]
    pub fn cost_at(&self, x: f64, y: f64) -> Result<f64, Infeasible> {
        let (i, j) = self.grid.cell_of(x, y).ok_or(Infeasible)?;
        self.costs[self.grid.index(i, j)].ok_or(Infeasible)
    }

    #[inline]
    pub fn cell_cost(&self, i: usize, j: usize) -> Option<f64> {
        self.costs[self.grid.index(i, j)]
    }
}
