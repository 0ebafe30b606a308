use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::DeviceProfile;
use crate::math::Point2;
use crate::rng::{stream, Stream};

pub const GRID_ROWS: u32 = 12;
pub const GRID_COLS: u32 = 6;
pub const ELEMENT_SIZES_PT: [f64; 2] = [50.0, 100.0];

#[derive(Debug, Error, PartialEq)]
pub enum LayoutError {
    #[error("screen {width}x{height} pt cannot be split into {GRID_ROWS}x{GRID_COLS} cells that fit a 100 pt square")]
    NotPartitionable { width: u32, height: u32 },
    #[error("no element with id {0}")]
    UnknownElement(u32),
}

/// Axis-aligned rectangle in screen points; `contains` treats it as closed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x: f64,
    pub y: f64,
    pub width: f64,
    pub height: f64,
}

impl Rect {
    pub fn new(x: f64, y: f64, width: f64, height: f64) -> Self {
        Self { x, y, width, height }
    }

    pub fn center(&self) -> Point2 {
        Point2::new(self.x + self.width / 2.0, self.y + self.height / 2.0)
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.x >= self.x && p.x <= self.x + self.width && p.y >= self.y && p.y <= self.y + self.height
    }

    pub fn nearest_point(&self, p: Point2) -> Point2 {
        Point2::new(p.x.clamp(self.x, self.x + self.width), p.y.clamp(self.y, self.y + self.height))
    }

    /// Distance from `p` to the closest point of the rectangle (0 inside).
    pub fn distance_to(&self, p: Point2) -> f64 {
        p.distance(self.nearest_point(p))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Element {
    pub id: u32,
    pub rect_pt: Rect,
    pub is_target: bool,
}

/// A 12×6 grid of square elements, exactly one of which is the target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetLayout {
    pub seed: u64,
    pub cell_pt: (f64, f64),
    pub elements: Vec<Element>,
}

impl TargetLayout {
    /// Builds a layout from arbitrary elements (ids must be unique); mainly for tests.
    pub fn from_elements(elements: Vec<Element>) -> Self {
        Self { seed: 0, cell_pt: (0.0, 0.0), elements }
    }

    pub fn get(&self, id: u32) -> Option<&Element> {
        self.elements.iter().find(|e| e.id == id)
    }

    pub fn target(&self) -> Option<&Element> {
        self.elements.iter().find(|e| e.is_target)
    }

    pub fn target_id(&self) -> Option<u32> {
        self.target().map(|e| e.id)
    }

    pub fn set_target(&mut self, id: u32) -> Result<(), LayoutError> {
        if self.get(id).is_none() {
            return Err(LayoutError::UnknownElement(id));
        }
        for e in &mut self.elements {
            e.is_target = e.id == id;
        }
        Ok(())
    }

    /// The lowest-id element whose closed rectangle contains `p`.
    pub fn element_at(&self, p: Point2) -> Option<u32> {
        self.elements.iter().filter(|e| e.rect_pt.contains(p)).map(|e| e.id).min()
    }
}

/// Grid cell size (width, height) in pt for a profile.
pub fn cell_size_pt(profile: &DeviceProfile) -> Result<(f64, f64), LayoutError> {
    let (w, h) = profile.screen_pt;
    let max_side = ELEMENT_SIZES_PT[1] as u32;
    if w % GRID_COLS != 0 || h % GRID_ROWS != 0 || w / GRID_COLS < max_side || h / GRID_ROWS < max_side {
        return Err(LayoutError::NotPartitionable { width: w, height: h });
    }
    Ok((f64::from(w / GRID_COLS), f64::from(h / GRID_ROWS)))
}

/// Random layout: one square per cell, size 50 or 100 pt, uniformly placed inside its
/// cell, plus one uniformly chosen target. Element ids run row-major from 0.
pub fn generate_layout(seed: u64, profile: &DeviceProfile) -> Result<TargetLayout, LayoutError> {
    let (cw, ch) = cell_size_pt(profile)?;
    let mut rng = stream(seed, Stream::Layout);
    let mut elements = Vec::with_capacity((GRID_ROWS * GRID_COLS) as usize);
    for row in 0..GRID_ROWS {
        for col in 0..GRID_COLS {
            let size = ELEMENT_SIZES_PT[rng.random_range(0..ELEMENT_SIZES_PT.len())];
            let x0 = f64::from(col) * cw;
            let y0 = f64::from(row) * ch;
            let x = x0 + rng.random::<f64>() * (cw - size);
            let y = y0 + rng.random::<f64>() * (ch - size);
            elements.push(Element { id: row * GRID_COLS + col, rect_pt: Rect::new(x, y, size, size), is_target: false });
        }
    }
    let target = rng.random_range(0..elements.len());
    elements[target].is_target = true;
    Ok(TargetLayout { seed, cell_pt: (cw, ch), elements })
}
