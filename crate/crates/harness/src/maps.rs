//! Generators for the bundled benchmark maps.
//!
//! Every generator is deterministic; the PGM files under `maps/` are their
//! output and a test keeps the two in sync.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rrf_core::cspace::OccupancyGrid;

/// Names accepted by [`generate`], in bundling order.
pub const MAP_NAMES: [&str; 5] = ["empty", "corridor", "rooms", "maze", "rover"];

const MAZE_SEED: u64 = 0x6d617a65;

pub fn generate(name: &str) -> Option<OccupancyGrid> {
    Some(match name {
        "empty" => empty(),
        "corridor" => corridor(),
        "rooms" => rooms(),
        "maze" => maze(),
        "rover" => rover(),
        _ => return None,
    })
}

pub fn empty() -> OccupancyGrid {
    OccupancyGrid::empty(32, 32, 1.0).expect("valid size")
}

/// A 4-cell-thick wall splitting the map in two, crossed by one 2-cell
/// passage away from the straight line between the rooms.
pub fn corridor() -> OccupancyGrid {
    let mut g = OccupancyGrid::empty(32, 32, 1.0).expect("valid size");
    g.fill_rect(14, 0, 18, 32, true);
    g.fill_rect(14, 24, 18, 26, false);
    g
}

/// Four rooms separated by 2-cell walls. Doors join top-left to top-right,
/// top-right to bottom-right and bottom-right to bottom-left, so the two
/// left rooms are only connected the long way round.
pub fn rooms() -> OccupancyGrid {
    let mut g = OccupancyGrid::empty(40, 40, 1.0).expect("valid size");
    g.fill_rect(19, 0, 21, 40, true);
    g.fill_rect(0, 19, 40, 21, true);
    g.fill_rect(19, 8, 21, 11, false);
    g.fill_rect(29, 19, 32, 21, false);
    g.fill_rect(19, 29, 21, 32, false);
    g
}

/// Recursive-division maze on 64x64 cells with 1-cell walls, 3-cell doors
/// and corridors at least 3 cells wide.
pub fn maze() -> OccupancyGrid {
    let mut g = OccupancyGrid::empty(64, 64, 1.0).expect("valid size");
    let mut rng = ChaCha8Rng::seed_from_u64(MAZE_SEED);
    divide(&mut g, &mut rng, 0, 0, 64, 64);
    g
}

const WALL: usize = 1;
const DOOR: usize = 3;
const MIN_ROOM: usize = 3;

fn divide(g: &mut OccupancyGrid, rng: &mut ChaCha8Rng, x: usize, y: usize, w: usize, h: usize) {
    let can_cut = |len: usize| len >= 2 * MIN_ROOM + WALL;
    let horizontal = match (can_cut(w), can_cut(h)) {
        (false, false) => return,
        (true, false) => false,
        (false, true) => true,
        (true, true) if w != h => h > w,
        _ => rng.random::<bool>(),
    };
    let (len, span) = if horizontal { (h, w) } else { (w, h) };
    let at = rng.random_range(MIN_ROOM..=len - MIN_ROOM - WALL);
    let door = rng.random_range(0..=span - DOOR);
    if horizontal {
        g.fill_rect(x, y + at, x + w, y + at + WALL, true);
        g.fill_rect(x + door, y + at, x + door + DOOR, y + at + WALL, false);
        divide(g, rng, x, y, w, at);
        divide(g, rng, x, y + at + WALL, w, h - at - WALL);
    } else {
        g.fill_rect(x + at, y, x + at + WALL, y + h, true);
        g.fill_rect(x + at, y + door, x + at + WALL, y + door + DOOR, false);
        divide(g, rng, x, y, at, h);
        divide(g, rng, x + at + WALL, y, w - at - WALL, h);
    }
}

/// Workspace for the mobile two-link arm: scattered blocks and a partition
/// with a 6-cell gap.
pub fn rover() -> OccupancyGrid {
    let mut g = OccupancyGrid::empty(32, 32, 1.0).expect("valid size");
    g.fill_rect(15, 0, 17, 13, true);
    g.fill_rect(15, 19, 17, 32, true);
    for &(c, r) in &[(5, 6), (8, 22), (23, 8), (25, 22)] {
        g.fill_rect(c, r, c + 3, r + 3, true);
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic() {
        for name in MAP_NAMES {
            assert_eq!(generate(name), generate(name), "{name}");
        }
        assert!(generate("nope").is_none());
    }

    /// Free cells reachable from the first free cell, 4-connected.
    fn reachable(g: &OccupancyGrid) -> usize {
        let (w, h) = (g.width(), g.height());
        let start = (0..w * h).find(|&i| !g.cells()[i]).unwrap();
        let mut seen = vec![false; w * h];
        let mut stack = vec![start];
        seen[start] = true;
        let mut count = 0;
        while let Some(i) = stack.pop() {
            count += 1;
            let (c, r) = (i % w, i / w);
            let mut push = |c: usize, r: usize| {
                let j = r * w + c;
                if !g.cells()[j] && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            };
            if c > 0 {
                push(c - 1, r);
            }
            if c + 1 < w {
                push(c + 1, r);
            }
            if r > 0 {
                push(c, r - 1);
            }
            if r + 1 < h {
                push(c, r + 1);
            }
        }
        count
    }

    #[test]
    fn free_space_is_one_component() {
        for name in MAP_NAMES {
            let g = generate(name).unwrap();
            assert_eq!(reachable(&g), g.free_cells(), "{name}");
        }
    }

    #[test]
    fn maze_has_walls_and_stays_open() {
        let g = maze();
        let free = g.free_cells() as f64 / (64.0 * 64.0);
        assert!(free > 0.6 && free < 0.95, "{free}");
    }
}
