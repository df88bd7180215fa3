//! Axis-aligned box arithmetic, polygon rasterization, and the maximal
//! inscribed box extracted from chain-code outlines.
//!
//! Boxes live in continuous pixel coordinates with the origin at the top
//! left, x growing rightward and y growing downward. Areas are real-valued
//! products of side lengths; for integer-corner boxes they coincide with
//! unit-cell counts, which is what the counting oracles in the test suite
//! exploit.

use alloc::vec;
use alloc::vec::Vec;

use crate::math;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("box coordinates must be finite")]
    NonFinite,
    #[error("box corners are not ordered (x1 <= x2, y1 <= y2)")]
    UnorderedCorners,
    #[error("polygon needs at least 3 vertices")]
    TooFewVertices,
    #[error("polygon extends outside the raster target")]
    PolygonOutOfBounds,
    #[error("mask has no true cells")]
    EmptyRegion,
    #[error("mask dimensions do not match the cell count")]
    BadMaskShape,
}

/// Axis-aligned box in continuous pixel coordinates, `x1 <= x2`, `y1 <= y2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox {
    pub x1: f64,
    pub y1: f64,
    pub x2: f64,
    pub y2: f64,
}

impl BBox {
    /// Rejects non-finite or unordered corners.
    pub fn new(x1: f64, y1: f64, x2: f64, y2: f64) -> Result<Self, GeometryError> {
        if ![x1, y1, x2, y2].iter().all(|v| v.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        if x1 > x2 || y1 > y2 {
            return Err(GeometryError::UnorderedCorners);
        }
        Ok(Self { x1, y1, x2, y2 })
    }

    /// Builds a box from two arbitrary corner points, swapping as needed.
    pub fn normalized(xa: f64, ya: f64, xb: f64, yb: f64) -> Result<Self, GeometryError> {
        Self::new(xa.min(xb), ya.min(yb), xa.max(xb), ya.max(yb))
    }

    pub fn width(&self) -> f64 {
        self.x2 - self.x1
    }

    pub fn height(&self) -> f64 {
        self.y2 - self.y1
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn center(&self) -> (f64, f64) {
        ((self.x1 + self.x2) / 2.0, (self.y1 + self.y2) / 2.0)
    }

    pub fn is_degenerate(&self) -> bool {
        self.area() == 0.0
    }

    /// Overlap box when the two boxes share positive area, `None` otherwise.
    pub fn intersection(&self, other: &BBox) -> Option<BBox> {
        let x1 = self.x1.max(other.x1);
        let y1 = self.y1.max(other.y1);
        let x2 = self.x2.min(other.x2);
        let y2 = self.y2.min(other.y2);
        if x1 < x2 && y1 < y2 {
            Some(BBox { x1, y1, x2, y2 })
        } else {
            None
        }
    }

    pub fn intersection_area(&self, other: &BBox) -> f64 {
        self.intersection(other).map_or(0.0, |b| b.area())
    }

    /// `|a| + |b| - |a ∩ b|`.
    pub fn union_area(&self, other: &BBox) -> f64 {
        self.area() + other.area() - self.intersection_area(other)
    }

    pub fn translate(&self, dx: f64, dy: f64) -> BBox {
        BBox {
            x1: self.x1 + dx,
            y1: self.y1 + dy,
            x2: self.x2 + dx,
            y2: self.y2 + dy,
        }
    }

    /// Grows the box about its center by `factor` in both dimensions.
    pub fn dilate(&self, factor: f64) -> BBox {
        let (cx, cy) = self.center();
        let hw = self.width() * factor / 2.0;
        let hh = self.height() * factor / 2.0;
        BBox {
            x1: cx - hw,
            y1: cy - hh,
            x2: cx + hw,
            y2: cy + hh,
        }
    }

    /// Clips to `[0, width] × [0, height]`; `None` when nothing remains.
    pub fn clamp_to_frame(&self, width: f64, height: f64) -> Option<BBox> {
        let x1 = self.x1.max(0.0).min(width);
        let y1 = self.y1.max(0.0).min(height);
        let x2 = self.x2.max(0.0).min(width);
        let y2 = self.y2.min(height).max(0.0);
        if x1 < x2 && y1 < y2 {
            Some(BBox { x1, y1, x2, y2 })
        } else {
            None
        }
    }

    pub fn corners(&self) -> [(f64, f64); 4] {
        [
            (self.x1, self.y1),
            (self.x2, self.y1),
            (self.x2, self.y2),
            (self.x1, self.y2),
        ]
    }
}

/// Smallest axis-aligned box covering a four-corner annotation.
pub fn bbox_from_corners(xs: [f64; 4], ys: [f64; 4]) -> Result<BBox, GeometryError> {
    if !xs.iter().chain(ys.iter()).all(|v| v.is_finite()) {
        return Err(GeometryError::NonFinite);
    }
    let (mut xmin, mut xmax) = (xs[0], xs[0]);
    let (mut ymin, mut ymax) = (ys[0], ys[0]);
    for i in 1..4 {
        xmin = xmin.min(xs[i]);
        xmax = xmax.max(xs[i]);
        ymin = ymin.min(ys[i]);
        ymax = ymax.max(ys[i]);
    }
    BBox::new(xmin, ymin, xmax, ymax)
}

/// Closed polygon in pixel coordinates; the last vertex connects back to the
/// first implicitly.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<(f64, f64)>,
}

impl Polygon {
    pub fn new(vertices: Vec<(f64, f64)>) -> Result<Self, GeometryError> {
        if vertices.len() < 3 {
            return Err(GeometryError::TooFewVertices);
        }
        if !vertices.iter().all(|(x, y)| x.is_finite() && y.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        Ok(Self { vertices })
    }

    /// Decodes an 8-direction Freeman chain into a vertex polygon by
    /// accumulating unit steps from `start`. Direction 0 is east and the
    /// code turns counterclockwise on screen (1 = northeast, 2 = north, ...,
    /// 6 = south), with y growing downward.
    pub fn from_freeman_chain(start: (f64, f64), codes: &[u8]) -> Result<Self, GeometryError> {
        const STEPS: [(f64, f64); 8] = [
            (1.0, 0.0),
            (1.0, -1.0),
            (0.0, -1.0),
            (-1.0, -1.0),
            (-1.0, 0.0),
            (-1.0, 1.0),
            (0.0, 1.0),
            (1.0, 1.0),
        ];
        let mut vertices = Vec::with_capacity(codes.len() + 1);
        let (mut x, mut y) = start;
        vertices.push((x, y));
        for &c in codes {
            let (dx, dy) = STEPS[(c & 7) as usize];
            x += dx;
            y += dy;
            vertices.push((x, y));
        }
        // Drop a final vertex that returns to the start; closure is implicit.
        if vertices.len() > 3 && vertices.last() == vertices.first() {
            vertices.pop();
        }
        Self::new(vertices)
    }

    pub fn vertices(&self) -> &[(f64, f64)] {
        &self.vertices
    }

    /// Even-odd containment test via ray crossing.
    pub fn contains(&self, px: f64, py: f64) -> bool {
        let n = self.vertices.len();
        let mut inside = false;
        let mut j = n - 1;
        for i in 0..n {
            let (xi, yi) = self.vertices[i];
            let (xj, yj) = self.vertices[j];
            if (yi > py) != (yj > py) {
                let x_cross = xi + (py - yi) * (xj - xi) / (yj - yi);
                if px < x_cross {
                    inside = !inside;
                }
            }
            j = i;
        }
        inside
    }

    pub fn bounds(&self) -> (f64, f64, f64, f64) {
        let mut it = self.vertices.iter();
        let &(x0, y0) = it.next().expect("polygon has vertices");
        it.fold((x0, y0, x0, y0), |(x1, y1, x2, y2), &(x, y)| {
            (x1.min(x), y1.min(y), x2.max(x), y2.max(y))
        })
    }
}

/// Row-major boolean grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    cells: Vec<bool>,
}

impl BinaryMask {
    pub fn new(width: usize, height: usize, cells: Vec<bool>) -> Result<Self, GeometryError> {
        if width == 0 || height == 0 || cells.len() != width * height {
            return Err(GeometryError::BadMaskShape);
        }
        Ok(Self {
            width,
            height,
            cells,
        })
    }

    pub fn filled(width: usize, height: usize, value: bool) -> Result<Self, GeometryError> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.cells[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        self.cells[y * self.width + x] = value;
    }

    pub fn count_true(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }
}

/// Rasterizes a polygon onto a `width × height` grid: a cell is set when its
/// center lies inside the polygon under the even-odd rule. The polygon must
/// lie within `[0, width] × [0, height]`.
pub fn rasterize(p: &Polygon, width: usize, height: usize) -> Result<BinaryMask, GeometryError> {
    let (bx1, by1, bx2, by2) = p.bounds();
    if bx1 < 0.0 || by1 < 0.0 || bx2 > width as f64 || by2 > height as f64 {
        return Err(GeometryError::PolygonOutOfBounds);
    }
    let mut mask = BinaryMask::filled(width, height, false)?;
    // Only cells under the polygon's bounding box can be inside.
    let x_lo = math::floor(bx1).max(0.0) as usize;
    let y_lo = math::floor(by1).max(0.0) as usize;
    let x_hi = (math::ceil(bx2) as usize).min(width);
    let y_hi = (math::ceil(by2) as usize).min(height);
    for y in y_lo..y_hi {
        for x in x_lo..x_hi {
            if p.contains(x as f64 + 0.5, y as f64 + 0.5) {
                mask.set(x, y, true);
            }
        }
    }
    Ok(mask)
}

/// Largest axis-aligned all-true rectangle in the mask, as an integer-corner
/// box. Ties go to the smallest `y1`, then `x1`, then `y2`, then `x2`.
///
/// Uses the per-row height histogram with a monotonic stack, O(W·H). Every
/// non-extendable rectangle is visited, so the tie-break sees all candidates.
pub fn maximal_inscribed_box(mask: &BinaryMask) -> Result<BBox, GeometryError> {
    let (w, h) = (mask.width(), mask.height());
    let mut heights = vec![0usize; w];
    let mut best: Option<(usize, BBox)> = None;

    let mut consider = |area: usize, cand: BBox| {
        let better = match &best {
            None => true,
            Some((best_area, b)) => {
                area > *best_area
                    || (area == *best_area
                        && (cand.y1, cand.x1, cand.y2, cand.x2) < (b.y1, b.x1, b.y2, b.x2))
            }
        };
        if better {
            best = Some((area, cand));
        }
    };

    for row in 0..h {
        for col in 0..w {
            heights[col] = if mask.get(col, row) {
                heights[col] + 1
            } else {
                0
            };
        }
        // Largest rectangle in the histogram ending at this row. The stack
        // keeps column indices with strictly increasing heights.
        let mut stack: Vec<usize> = Vec::with_capacity(w + 1);
        for col in 0..=w {
            let cur = if col < w { heights[col] } else { 0 };
            while let Some(&top) = stack.last() {
                if heights[top] <= cur {
                    break;
                }
                stack.pop();
                let height = heights[top];
                let left = stack.last().map_or(0, |&i| i + 1);
                let width = col - left;
                if height > 0 {
                    consider(
                        width * height,
                        BBox {
                            x1: left as f64,
                            y1: (row + 1 - height) as f64,
                            x2: col as f64,
                            y2: (row + 1) as f64,
                        },
                    );
                }
            }
            // Push unless a bar of equal height is already on top; keeping
            // the earlier column makes popped widths span the full run.
            if cur > 0 && stack.last().map_or(true, |&i| heights[i] < cur) {
                stack.push(col);
            }
        }
    }

    best.map(|(_, b)| b).ok_or(GeometryError::EmptyRegion)
}
