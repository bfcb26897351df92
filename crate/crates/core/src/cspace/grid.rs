use std::path::Path;

use image::{GrayImage, Luma};

use super::CspaceError;

/// Pixels darker than this are obstacles.
const OBSTACLE_THRESHOLD: u8 = 128;

/// Boolean 2D occupancy grid.
///
/// The top-left cell sits at world `(0, 0)`, `+x` runs right along columns
/// and `+y` runs down along rows. Anything outside the grid is occupied.
#[derive(Clone, Debug, PartialEq)]
pub struct OccupancyGrid {
    width: usize,
    height: usize,
    resolution: f64,
    cells: Vec<bool>,
}

impl OccupancyGrid {
    /// A grid with every cell free.
    pub fn empty(width: usize, height: usize, resolution: f64) -> Result<Self, CspaceError> {
        Self::from_cells(width, height, resolution, vec![false; width * height])
    }

    pub fn from_cells(
        width: usize,
        height: usize,
        resolution: f64,
        cells: Vec<bool>,
    ) -> Result<Self, CspaceError> {
        if width == 0 || height == 0 {
            return Err(CspaceError::InvalidGrid(format!(
                "grid must be non-empty, got {width}x{height}"
            )));
        }
        if !(resolution.is_finite() && resolution > 0.0) {
            return Err(CspaceError::InvalidGrid(format!(
                "resolution must be positive, got {resolution}"
            )));
        }
        if cells.len() != width * height {
            return Err(CspaceError::InvalidGrid(format!(
                "expected {} cells, got {}",
                width * height,
                cells.len()
            )));
        }
        Ok(OccupancyGrid {
            width,
            height,
            resolution,
            cells,
        })
    }

    /// Loads a PGM file (P2 or P5).
    pub fn from_pgm(path: impl AsRef<Path>, resolution: f64) -> Result<Self, CspaceError> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| CspaceError::MapIo {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        Self::from_pgm_bytes(&bytes, resolution).map_err(|e| match e {
            CspaceError::MapIo { reason, .. } => CspaceError::MapIo {
                path: path.display().to_string(),
                reason,
            },
            other => other,
        })
    }

    /// Decodes PGM bytes. Pixel values are scaled to 8 bits before applying
    /// the `< 128` obstacle threshold, so 16-bit maps behave like 8-bit ones.
    pub fn from_pgm_bytes(bytes: &[u8], resolution: f64) -> Result<Self, CspaceError> {
        let io_err = |reason: String| CspaceError::MapIo {
            path: "<memory>".into(),
            reason,
        };
        if !(bytes.starts_with(b"P2") || bytes.starts_with(b"P5")) {
            return Err(io_err("not a P2/P5 PGM file".into()));
        }
        let img = image::load_from_memory_with_format(bytes, image::ImageFormat::Pnm)
            .map_err(|e| io_err(e.to_string()))?
            .to_luma8();
        let (w, h) = (img.width() as usize, img.height() as usize);
        let cells = img.pixels().map(|p| p.0[0] < OBSTACLE_THRESHOLD).collect();
        Self::from_cells(w, h, resolution, cells)
    }

    /// Writes a binary (P5) PGM: obstacles black, free space white.
    pub fn write_pgm(&self, path: impl AsRef<Path>) -> Result<(), CspaceError> {
        let path = path.as_ref();
        let encoded = self.to_pgm_bytes();
        std::fs::write(path, encoded).map_err(|e| CspaceError::MapIo {
            path: path.display().to_string(),
            reason: e.to_string(),
        })
    }

    pub fn to_pgm_bytes(&self) -> Vec<u8> {
        let img = GrayImage::from_fn(self.width as u32, self.height as u32, |x, y| {
            if self.is_occupied(x as usize, y as usize) {
                Luma([0u8])
            } else {
                Luma([255u8])
            }
        });
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(img.as_raw());
        out
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn world_width(&self) -> f64 {
        self.width as f64 * self.resolution
    }

    pub fn world_height(&self) -> f64 {
        self.height as f64 * self.resolution
    }

    pub fn is_occupied(&self, col: usize, row: usize) -> bool {
        if col >= self.width || row >= self.height {
            return true;
        }
        self.cells[row * self.width + col]
    }

    pub fn set(&mut self, col: usize, row: usize, occupied: bool) {
        assert!(col < self.width && row < self.height);
        self.cells[row * self.width + col] = occupied;
    }

    /// Marks the half-open cell rectangle `[c0, c1) x [r0, r1)` (clipped).
    pub fn fill_rect(&mut self, c0: usize, r0: usize, c1: usize, r1: usize, occupied: bool) {
        for row in r0..r1.min(self.height) {
            for col in c0..c1.min(self.width) {
                self.cells[row * self.width + col] = occupied;
            }
        }
    }

    /// Cell containing a world point, if inside the grid.
    pub fn cell_of(&self, x: f64, y: f64) -> Option<(usize, usize)> {
        if !(x >= 0.0 && y >= 0.0) {
            return None;
        }
        let col = (x / self.resolution).floor();
        let row = (y / self.resolution).floor();
        if col >= self.width as f64 || row >= self.height as f64 {
            return None;
        }
        Some((col as usize, row as usize))
    }

    /// Whether a world point lies in a free, in-bounds cell.
    pub fn is_free_world(&self, x: f64, y: f64) -> bool {
        match self.cell_of(x, y) {
            Some((c, r)) => !self.cells[r * self.width + c],
            None => false,
        }
    }

    /// Whether every point of the straight segment from `a` to `b` lies in a
    /// free, in-bounds cell. Walks the cells column by column, so grazes of
    /// any length are caught.
    pub fn segment_free(&self, a: [f64; 2], b: [f64; 2]) -> bool {
        if !self.is_free_world(a[0], a[1]) || !self.is_free_world(b[0], b[1]) {
            return false;
        }
        let s = 1.0 / self.resolution;
        let (mut a, mut b) = ([a[0] * s, a[1] * s], [b[0] * s, b[1] * s]);
        if b[0] < a[0] {
            std::mem::swap(&mut a, &mut b);
        }
        let dx = b[0] - a[0];
        let y_at = |x: f64| if dx > 0.0 { a[1] + (x - a[0]) / dx * (b[1] - a[1]) } else { a[1] };
        let occupied = |c: f64, r: f64| c < 0.0 || r < 0.0 || self.is_occupied(c as usize, r as usize);
        let (c0, c1) = (a[0].floor(), b[0].floor());
        let mut c = c0;
        while c <= c1 {
            let (lo, hi) = if dx > 0.0 {
                (y_at(a[0].max(c)), y_at(b[0].min(c + 1.0)))
            } else {
                (a[1], b[1])
            };
            let (r0, r1) = (lo.min(hi).floor(), lo.max(hi).floor());
            let mut r = r0;
            while r <= r1 {
                if occupied(c, r) {
                    return false;
                }
                r += 1.0;
            }
            c += 1.0;
        }
        true
    }

    pub fn free_cells(&self) -> usize {
        self.cells.iter().filter(|&&c| !c).count()
    }

    /// Free area in world units squared.
    pub fn free_area(&self) -> f64 {
        self.free_cells() as f64 * self.resolution * self.resolution
    }

    pub fn cells(&self) -> &[bool] {
        &self.cells
    }
}
