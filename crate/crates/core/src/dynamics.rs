//! Orbit classification against the fast and quite-fast escape thresholds,
//! rasters of the classes, and ring detection on the raster.
//!
//! Ring reports are raster-scale evidence: connectivity is decided on grid
//! cells, not on the plane.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::logpolar::{reduce_arg, LogComplex};
use crate::modulus::log_max_modulus_tower;
use crate::product::EntireProductFunction;
use crate::tower::Tower;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EscapeParams {
    pub log_r: f64,
    pub eps: f64,
    pub n_max: usize,
    pub l: f64,
}

impl EscapeParams {
    /// `eps = 1/L`.
    pub fn new(log_r: f64, l: f64, n_max: usize) -> EscapeParams {
        EscapeParams {
            log_r,
            eps: 1.0 / l,
            n_max,
            l,
        }
    }
}

/// `log M^k(R)` and `log μ^k(R)` for `k = 1..=n_max`; entries too large for
/// an `f64` are `+∞`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Thresholds {
    pub params: EscapeParams,
    pub log_max: Vec<f64>,
    pub log_mu: Vec<f64>,
}

fn finite(t: Tower) -> f64 {
    t.to_f64().unwrap_or(f64::INFINITY)
}

/// Iterated thresholds. Rejects parameters whose `μ` iterates fail to
/// increase strictly from `R`.
pub fn thresholds(f: &EntireProductFunction, params: EscapeParams) -> Result<Thresholds> {
    if !(params.eps > 0.0 && params.eps <= 1.0) {
        return Err(Error::InvalidArgument("eps must lie in (0, 1]".into()));
    }
    if params.n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be positive".into()));
    }
    let (mut m, mut mu) = (Tower::from_f64(params.log_r), Tower::from_f64(params.log_r));
    let (mut log_max, mut log_mu) = (Vec::new(), Vec::new());
    for _ in 0..params.n_max {
        m = log_max_modulus_tower(f, m)?;
        let next = log_max_modulus_tower(f, mu)?.scale(params.eps);
        if !(next > mu) {
            return Err(Error::InvalidArgument(alloc::format!(
                "μ iterates do not increase from log R = {}",
                params.log_r
            )));
        }
        mu = next;
        log_max.push(finite(m));
        log_mu.push(finite(mu));
    }
    Ok(Thresholds {
        params,
        log_max,
        log_mu,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Class {
    Low = 0,
    Undecided = 1,
    QuiteFast = 2,
    Fast = 3,
}

impl Class {
    /// Meets the quite-fast thresholds (so also every fast cell).
    pub fn escapes(self) -> bool {
        matches!(self, Class::QuiteFast | Class::Fast)
    }
}

fn fold(z: LogComplex) -> LogComplex {
    LogComplex::new(z.log_mod, reduce_arg(z.arg).abs())
}

/// Class of `z` and the number of iterates computed. Only `|f^k|` enters,
/// so points are folded into the upper half plane first: `z` and `z̄`
/// always agree.
pub fn classify_point(f: &EntireProductFunction, z: LogComplex, th: &Thresholds) -> (Class, usize) {
    let mut w = fold(z);
    let mut fast = true;
    for k in 1..=th.params.n_max {
        if w.log_mod > f.max_log_radius() {
            return (Class::Undecided, k - 1);
        }
        w = match f.eval_log(w) {
            Ok(v) => fold(v),
            Err(Error::ZeroFactor) => return (Class::Low, k),
            Err(_) => return (Class::Undecided, k - 1),
        };
        if w.log_mod < th.log_mu[k - 1] {
            return (Class::Low, k);
        }
        if w.log_mod < th.log_max[k - 1] {
            fast = false;
        }
    }
    let class = if fast { Class::Fast } else { Class::QuiteFast };
    (class, th.params.n_max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Window {
    Cartesian {
        x0: f64,
        x1: f64,
        y0: f64,
        y1: f64,
    },
    LogPolar {
        log_r0: f64,
        log_r1: f64,
        theta0: f64,
        theta1: f64,
    },
}

impl Window {
    pub fn square(r: f64) -> Window {
        Window::Cartesian {
            x0: -r,
            x1: r,
            y0: -r,
            y1: r,
        }
    }
}

/// Center of cell `i` of `n` over `[a, b]`; mirror-exact for `a = -b`.
fn center(a: f64, b: f64, i: usize, n: usize) -> f64 {
    let half = 0.5 * (b - a) / n as f64;
    0.5 * (a + b) + (2.0 * i as f64 + 1.0 - n as f64) * half
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Cell {
    pub class: Class,
    pub depth: u8,
}

/// Row-major cells; row 0 is the top (largest `y` or `θ`).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClassGrid {
    pub window: Window,
    pub width: usize,
    pub height: usize,
    pub cells: Vec<Cell>,
}

impl ClassGrid {
    pub fn get(&self, col: usize, row: usize) -> Cell {
        self.cells[row * self.width + col]
    }

    pub fn cell_center(&self, col: usize, row: usize) -> LogComplex {
        cell_center(self.window, self.width, self.height, col, row)
    }
}

pub fn cell_center(
    window: Window,
    width: usize,
    height: usize,
    col: usize,
    row: usize,
) -> LogComplex {
    let flipped = height - 1 - row;
    match window {
        Window::Cartesian { x0, x1, y0, y1 } => {
            let x = center(x0, x1, col, width);
            let y = center(y0, y1, flipped, height);
            if x == 0.0 && y == 0.0 {
                return LogComplex::ZERO;
            }
            LogComplex::from_cartesian(x, y)
        }
        Window::LogPolar {
            log_r0,
            log_r1,
            theta0,
            theta1,
        } => LogComplex::new(
            center(log_r0, log_r1, col, width),
            center(theta0, theta1, flipped, height),
        ),
    }
}

fn check_resolution(width: usize, height: usize) -> Result<()> {
    if width < 16 || height < 16 {
        return Err(Error::InvalidArgument(
            "resolution must be at least 16×16".into(),
        ));
    }
    Ok(())
}

/// One raster row; rows are independent, so callers may compute them in
/// parallel and concatenate.
pub fn raster_row(
    f: &EntireProductFunction,
    window: Window,
    width: usize,
    height: usize,
    row: usize,
    th: &Thresholds,
) -> Vec<Cell> {
    (0..width)
        .map(|col| {
            let (class, depth) =
                classify_point(f, cell_center(window, width, height, col, row), th);
            Cell {
                class,
                depth: depth.min(u8::MAX as usize) as u8,
            }
        })
        .collect()
}

pub fn raster(
    f: &EntireProductFunction,
    window: Window,
    width: usize,
    height: usize,
    th: &Thresholds,
) -> Result<ClassGrid> {
    check_resolution(width, height)?;
    let mut cells = Vec::with_capacity(width * height);
    for row in 0..height {
        cells.extend(raster_row(f, window, width, height, row, th));
    }
    Ok(ClassGrid {
        window,
        width,
        height,
        cells,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ComponentKind {
    /// A 4-connected set of non-escaping cells.
    Hole,
    /// An 8-connected set of escaping cells with a loop around the origin.
    Ring,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RingReport {
    pub component_id: usize,
    pub kind: ComponentKind,
    pub cells: usize,
    pub log_r_min: f64,
    pub log_r_max: f64,
    pub surrounds_origin: bool,
    pub touches_boundary: bool,
    /// `log r_max <= L log r_min`.
    pub annulus_ok: bool,
    /// `log r_min > L log R`, where the annulus bound is claimed.
    pub in_scope: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RingAnalysis {
    pub holes: Vec<RingReport>,
    pub rings: Vec<RingReport>,
}

const N4: [(isize, isize); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];
const N8: [(isize, isize); 8] = [
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
];

/// Labels connected cells with `member(i)`; unlabelled cells get `usize::MAX`.
fn label<F: Fn(usize) -> bool>(
    w: usize,
    h: usize,
    member: F,
    nbrs: &[(isize, isize)],
) -> (Vec<usize>, usize) {
    let mut labels = vec![usize::MAX; w * h];
    let mut count = 0;
    let mut queue = VecDeque::new();
    for start in 0..w * h {
        if labels[start] != usize::MAX || !member(start) {
            continue;
        }
        labels[start] = count;
        queue.push_back(start);
        while let Some(i) = queue.pop_front() {
            let (c, r) = ((i % w) as isize, (i / w) as isize);
            for &(dc, dr) in nbrs {
                let (nc, nr) = (c + dc, r + dr);
                if nc < 0 || nr < 0 || nc >= w as isize || nr >= h as isize {
                    continue;
                }
                let j = nr as usize * w + nc as usize;
                if labels[j] == usize::MAX && member(j) {
                    labels[j] = count;
                    queue.push_back(j);
                }
            }
        }
        count += 1;
    }
    (labels, count)
}

fn on_boundary(i: usize, w: usize, h: usize) -> bool {
    let (c, r) = (i % w, i / w);
    c == 0 || r == 0 || c + 1 == w || r + 1 == h
}

/// Cell containing `z = 0`, by cell index.
fn origin_cell(grid: &ClassGrid) -> Result<usize> {
    let Window::Cartesian { x0, x1, y0, y1 } = grid.window else {
        return Err(Error::InvalidArgument(
            "ring detection needs a Cartesian window".into(),
        ));
    };
    if !(x0 < 0.0 && 0.0 < x1 && y0 < 0.0 && 0.0 < y1) {
        return Err(Error::InvalidArgument(
            "window does not surround the origin".into(),
        ));
    }
    let col = ((-x0) / (x1 - x0) * grid.width as f64) as usize;
    let flipped = ((-y0) / (y1 - y0) * grid.height as f64) as usize;
    let col = col.min(grid.width - 1);
    let row = grid.height - 1 - flipped.min(grid.height - 1);
    Ok(row * grid.width + col)
}

/// Walks the outer boundary of a bounded 4-connected cell set `inside`
/// (holding the origin cell) along cell edges with the set on the right,
/// and returns the winding about the origin cell of the loop formed by the
/// cells on the left. Those cells lie outside the set, so they belong to the
/// enclosing component, and consecutive ones are 8-adjacent.
fn enclosing_loop_winding(inside: &[bool], w: usize, h: usize, origin: usize) -> (f64, usize) {
    let is_in = |c: isize, r: isize| -> bool {
        c >= 0
            && r >= 0
            && (c as usize) < w
            && (r as usize) < h
            && inside[r as usize * w + c as usize]
    };
    // topmost-leftmost cell: its top edge is on the outer boundary
    let start = inside.iter().position(|&b| b).expect("non-empty set");
    let (sc, sr) = ((start % w) as isize, (start / w) as isize);
    // vertices are cell corners (x, y) with y growing downward; walk the top
    // edge of the start cell eastward, so the cell is on the right (south)
    let (mut x, mut y) = (sc, sr);
    let (mut dx, mut dy) = (1isize, 0isize);
    let (oc, or) = ((origin % w) as f64, (origin / w) as f64);
    let mut total = 0.0f64;
    let mut prev: Option<(isize, isize)> = None;
    let mut first: Option<(isize, isize)> = None;
    let mut loop_cells = 0usize;
    let angle_of = |c: isize, r: isize| libm::atan2(-(r as f64 - or), c as f64 - oc);
    let push = |cell: (isize, isize), total: &mut f64, prev: &mut Option<(isize, isize)>| {
        if *prev == Some(cell) {
            return;
        }
        if let Some(p) = *prev {
            let mut d = angle_of(cell.0, cell.1) - angle_of(p.0, p.1);
            if d > PI {
                d -= 2.0 * PI;
            } else if d < -PI {
                d += 2.0 * PI;
            }
            *total += d;
        }
        *prev = Some(cell);
    };
    loop {
        // cell to the left of the edge (x,y) -> (x+dx, y+dy)
        let left = if dx != 0 {
            (x.min(x + dx), if dx > 0 { y - 1 } else { y })
        } else {
            (if dy > 0 { x } else { x - 1 }, y.min(y + dy))
        };
        if first.is_none() {
            first = Some(left);
        }
        push(left, &mut total, &mut prev);
        loop_cells += 1;
        x += dx;
        y += dy;
        // cells ahead-right and ahead-left of the new vertex
        let (ar, al) = match (dx, dy) {
            (1, 0) => ((x, y), (x, y - 1)),
            (-1, 0) => ((x - 1, y - 1), (x - 1, y)),
            (0, 1) => ((x - 1, y), (x, y)),
            _ => ((x, y - 1), (x - 1, y - 1)),
        };
        if !is_in(ar.0, ar.1) {
            // turn right: (dx, dy) -> (-dy, dx) in y-down coordinates
            (dx, dy) = (-dy, dx);
        } else if is_in(al.0, al.1) {
            (dx, dy) = (dy, -dx);
        }
        if (x, y) == (sc, sr) && (dx, dy) == (1, 0) {
            break;
        }
    }
    if let Some(f0) = first {
        push(f0, &mut total, &mut prev);
    }
    (total / (2.0 * PI), loop_cells)
}

fn extent(grid: &ClassGrid, members: impl Iterator<Item = usize>) -> (f64, f64, usize, bool) {
    let (mut lo, mut hi, mut n, mut edge) = (f64::INFINITY, f64::NEG_INFINITY, 0, false);
    for i in members {
        let z = grid.cell_center(i % grid.width, i / grid.width);
        lo = lo.min(z.log_mod);
        hi = hi.max(z.log_mod);
        n += 1;
        edge |= on_boundary(i, grid.width, grid.height);
    }
    (lo, hi, n, edge)
}

/// Holes (4-connected non-escaping components) and rings (8-connected
/// escaping components with a cell loop around the origin).
pub fn detect_rings(grid: &ClassGrid, params: &EscapeParams) -> Result<RingAnalysis> {
    let (w, h) = (grid.width, grid.height);
    let origin = origin_cell(grid)?;
    let esc: Vec<bool> = grid.cells.iter().map(|c| c.class.escapes()).collect();
    let report = |id, kind, lo: f64, hi: f64, cells, surrounds, edge| RingReport {
        component_id: id,
        kind,
        cells,
        log_r_min: lo,
        log_r_max: hi,
        surrounds_origin: surrounds,
        touches_boundary: edge,
        annulus_ok: lo > 0.0 && hi <= params.l * lo,
        in_scope: lo > params.l * params.log_r,
    };

    let (hole_labels, n_holes) = label(w, h, |i| !esc[i], &N4);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); n_holes];
    for (i, &l) in hole_labels.iter().enumerate() {
        if l != usize::MAX {
            members[l].push(i);
        }
    }
    let mut holes = Vec::with_capacity(n_holes);
    for (id, m) in members.iter().enumerate() {
        let (lo, hi, n, edge) = extent(grid, m.iter().copied());
        holes.push(report(
            id,
            ComponentKind::Hole,
            lo,
            hi,
            n,
            m.contains(&origin),
            edge,
        ));
    }
    let (ring_labels, n_comp) = label(w, h, |i| esc[i], &N8);
    let mut sizes = vec![0usize; n_comp];
    let mut comp_edge = vec![false; n_comp];
    for (i, &l) in ring_labels.iter().enumerate() {
        if l != usize::MAX {
            sizes[l] += 1;
            comp_edge[l] |= on_boundary(i, w, h);
        }
    }
    if holes.iter().all(|r| r.touches_boundary) && comp_edge.iter().all(|&e| e) {
        return Err(Error::WindowTooSmall);
    }

    // a cell loop around the origin has a cell in the origin's row to the
    // right of it, since rows change by at most one per step
    let mut candidates: Vec<usize> = (origin + 1..(origin / w + 1) * w)
        .map(|i| ring_labels[i])
        .filter(|&l| l != usize::MAX && l != ring_labels[origin])
        .collect();
    candidates.sort_unstable();
    candidates.dedup();

    let mut rings = Vec::new();
    let mut inside = vec![false; w * h];
    for id in candidates {
        // the origin's 4-connected region in the complement of the component
        inside.iter_mut().for_each(|b| *b = false);
        let mut queue = VecDeque::from([origin]);
        inside[origin] = true;
        let mut bounded = true;
        while let Some(i) = queue.pop_front() {
            if on_boundary(i, w, h) {
                bounded = false;
                break;
            }
            let (c, r) = ((i % w) as isize, (i / w) as isize);
            for &(dc, dr) in &N4 {
                let j = (r + dr) as usize * w + (c + dc) as usize;
                if !inside[j] && ring_labels[j] != id {
                    inside[j] = true;
                    queue.push_back(j);
                }
            }
        }
        if !bounded {
            continue;
        }
        let (winding, _) = enclosing_loop_winding(&inside, w, h, origin);
        let surrounds = libm::fabs(winding) > 0.5;
        if !surrounds {
            continue;
        }
        let cells = ring_labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == id)
            .map(|(i, _)| i);
        let (lo, hi, n, edge) = extent(grid, cells);
        debug_assert_eq!(n, sizes[id]);
        rings.push(report(id, ComponentKind::Ring, lo, hi, n, true, edge));
    }
    Ok(RingAnalysis { holes, rings })
}
