//! Helioprojective-Cartesian (HPC) ↔ pixel conversion and solar-limb
//! containment tests.
//!
//! HPC coordinates are arcseconds from disk center with solar north up.
//! Pixel coordinates are 0-based with y growing downward, so the conversion
//! flips the y axis and shifts the FITS-style 1-based reference pixel once,
//! here.

use crate::dataset::Timestamp;
use crate::geometry::BBox;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoordError {
    #[error("non-finite coordinate input")]
    NonFinite,
    #[error("invalid header field: {0}")]
    InvalidHeader(&'static str),
}

/// Plate-scale subset of an SDO-style image header.
///
/// `crpix1`/`crpix2` follow the FITS convention (1-based, may be
/// fractional); `cdelt1`/`cdelt2` are arcsec per pixel; `rsun` is the solar
/// radius in arcsec.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageHeader {
    pub cdelt1: f64,
    pub cdelt2: f64,
    pub crpix1: f64,
    pub crpix2: f64,
    pub rsun: f64,
    pub width: usize,
    pub height: usize,
    pub obs_time: Timestamp,
}

impl ImageHeader {
    pub fn validate(&self) -> Result<(), CoordError> {
        if !(self.cdelt1 > 0.0 && self.cdelt1.is_finite()) {
            return Err(CoordError::InvalidHeader("cdelt1"));
        }
        if !(self.cdelt2 > 0.0 && self.cdelt2.is_finite()) {
            return Err(CoordError::InvalidHeader("cdelt2"));
        }
        if !(self.rsun > 0.0 && self.rsun.is_finite()) {
            return Err(CoordError::InvalidHeader("rsun"));
        }
        if !(self.crpix1 >= 1.0 && self.crpix1 <= self.width as f64) {
            return Err(CoordError::InvalidHeader("crpix1"));
        }
        if !(self.crpix2 >= 1.0 && self.crpix2 <= self.height as f64) {
            return Err(CoordError::InvalidHeader("crpix2"));
        }
        Ok(())
    }
}

/// HPC arcseconds to 0-based pixel coordinates.
pub fn hpc_to_pixel(x_arcsec: f64, y_arcsec: f64, h: &ImageHeader) -> Result<(f64, f64), CoordError> {
    if !(x_arcsec.is_finite() && y_arcsec.is_finite()) {
        return Err(CoordError::NonFinite);
    }
    let px = (h.crpix1 - 1.0) + x_arcsec / h.cdelt1;
    let py = (h.crpix2 - 1.0) - y_arcsec / h.cdelt2;
    Ok((px, py))
}

/// Exact inverse of [`hpc_to_pixel`].
pub fn pixel_to_hpc(px: f64, py: f64, h: &ImageHeader) -> Result<(f64, f64), CoordError> {
    if !(px.is_finite() && py.is_finite()) {
        return Err(CoordError::NonFinite);
    }
    let x = (px - (h.crpix1 - 1.0)) * h.cdelt1;
    let y = ((h.crpix2 - 1.0) - py) * h.cdelt2;
    Ok((x, y))
}

/// Whether an HPC point lies on the visible disk (boundary inclusive).
pub fn on_disk(x_arcsec: f64, y_arcsec: f64, rsun_arcsec: f64) -> bool {
    x_arcsec * x_arcsec + y_arcsec * y_arcsec <= rsun_arcsec * rsun_arcsec
}

/// Whether all four corners of an HPC-space box lie on the disk. Any
/// off-disk corner excludes the box.
pub fn box_within_limb(hpc_box: &BBox, rsun_arcsec: f64) -> bool {
    hpc_box
        .corners()
        .iter()
        .all(|&(x, y)| on_disk(x, y, rsun_arcsec))
}
