use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Rect {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let r = Self { re_min, re_max, im_min, im_max };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.re_min, self.re_max, self.im_min, self.im_max]
            .iter()
            .all(|x| x.is_finite());
        if !finite || self.re_min >= self.re_max || self.im_min >= self.im_max {
            return Err(Error::Grid(format!(
                "degenerate rectangle [{}, {}] x [{}, {}]",
                self.re_min, self.re_max, self.im_min, self.im_max
            )));
        }
        Ok(())
    }

    pub fn width(&self) -> f64 {
        self.re_max - self.re_min
    }

    pub fn height(&self) -> f64 {
        self.im_max - self.im_min
    }
}

/// Cell-centred sample grid. Point `(ix, iy)` is stored at `iy * nx + ix`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub rect: Rect,
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    pub dy: f64,
    pub points: Vec<Complex64>,
}

impl Grid {
    /// `max(dx, dy)`.
    pub fn spacing(&self) -> f64 {
        self.dx.max(self.dy)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.nx + ix
    }

    /// `(ix, iy)` of a flat index.
    pub fn coords(&self, idx: usize) -> (usize, usize) {
        (idx % self.nx, idx / self.nx)
    }
}

pub fn make_grid(rect: Rect, nx: usize, ny: usize) -> Result<Grid> {
    rect.validate()?;
    if nx == 0 || ny == 0 {
        return Err(Error::Grid(format!("grid needs at least one cell per axis, got {nx} x {ny}")));
    }
    let dx = rect.width() / nx as f64;
    let dy = rect.height() / ny as f64;
    let mut points = Vec::with_capacity(nx * ny);
    for iy in 0..ny {
        let im = rect.im_min + (iy as f64 + 0.5) * dy;
        for ix in 0..nx {
            points.push(Complex64::new(rect.re_min + (ix as f64 + 0.5) * dx, im));
        }
    }
    Ok(Grid { rect, nx, ny, dx, dy, points })
}
