//! Scanner-style augmentations applied after rasterization.
//!
//! The pipeline warps first and adds noise second: the scanner sees the
//! already-skewed page. Masks are warped with the same homography as the
//! image and are never noised.

use crate::error::{ConfigError, RasterError};
use crate::raster::{Channels, MaskImage, RasterImage};
use crate::rng::{Poisson, SampleRng};

/// Projective map of the page plane, normalized so `m[2][2] == 1`.
///
/// Maps source (unwarped) page coordinates to destination coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Homography {
    m: [[f64; 3]; 3],
}

impl Homography {
    pub const IDENTITY: Homography = Homography {
        m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
    };

    /// Normalizes by `m[2][2]`; `None` if that entry is zero or the matrix
    /// is singular.
    pub fn from_matrix(m: [[f64; 3]; 3]) -> Option<Self> {
        let s = m[2][2];
        if s == 0.0 || !s.is_finite() {
            return None;
        }
        let mut n = m;
        for row in &mut n {
            for v in row {
                *v /= s;
            }
        }
        let h = Homography { m: n };
        (h.determinant() != 0.0 && h.determinant().is_finite()).then_some(h)
    }

    pub fn matrix(&self) -> [[f64; 3]; 3] {
        self.m
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    pub fn determinant(&self) -> f64 {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    #[inline]
    pub fn apply(&self, x: f64, y: f64) -> (f64, f64) {
        let m = &self.m;
        let w = m[2][0] * x + m[2][1] * y + m[2][2];
        (
            (m[0][0] * x + m[0][1] * y + m[0][2]) / w,
            (m[1][0] * x + m[1][1] * y + m[1][2]) / w,
        )
    }

    /// Adjugate divided by the determinant, renormalized.
    pub fn inverse(&self) -> Option<Homography> {
        if self.is_identity() {
            return Some(*self);
        }
        let m = &self.m;
        let det = self.determinant();
        if det == 0.0 {
            return None;
        }
        let adj = [
            [
                m[1][1] * m[2][2] - m[1][2] * m[2][1],
                m[0][2] * m[2][1] - m[0][1] * m[2][2],
                m[0][1] * m[1][2] - m[0][2] * m[1][1],
            ],
            [
                m[1][2] * m[2][0] - m[1][0] * m[2][2],
                m[0][0] * m[2][2] - m[0][2] * m[2][0],
                m[0][2] * m[1][0] - m[0][0] * m[1][2],
            ],
            [
                m[1][0] * m[2][1] - m[1][1] * m[2][0],
                m[0][1] * m[2][0] - m[0][0] * m[2][1],
                m[0][0] * m[1][1] - m[0][1] * m[1][0],
            ],
        ];
        let mut inv = adj;
        for row in &mut inv {
            for v in row {
                *v /= det;
            }
        }
        Homography::from_matrix(inv)
    }

    /// The map taking each `src[i]` to `dst[i]`, from the 8x8 direct linear
    /// system with `m[2][2] = 1`. `None` for degenerate correspondences.
    pub fn from_correspondences(src: &[(f64, f64); 4], dst: &[(f64, f64); 4]) -> Option<Self> {
        let mut a = [[0.0f64; 9]; 8];
        for i in 0..4 {
            let (x, y) = src[i];
            let (u, v) = dst[i];
            a[2 * i] = [x, y, 1.0, 0.0, 0.0, 0.0, -u * x, -u * y, u];
            a[2 * i + 1] = [0.0, 0.0, 0.0, x, y, 1.0, -v * x, -v * y, v];
        }
        let h = solve8(a)?;
        Homography::from_matrix([[h[0], h[1], h[2]], [h[3], h[4], h[5]], [h[6], h[7], 1.0]])
    }
}

/// Gaussian elimination with partial pivoting on an augmented 8x9 system.
fn solve8(mut a: [[f64; 9]; 8]) -> Option<[f64; 8]> {
    for col in 0..8 {
        let pivot = (col..8).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot);
        let pivot_row = a[col];
        for row in a.iter_mut().skip(col + 1) {
            let f = row[col] / pivot_row[col];
            for (v, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                *v -= f * p;
            }
        }
    }
    let mut x = [0.0; 8];
    for row in (0..8).rev() {
        let mut s = a[row][8];
        for k in row + 1..8 {
            s -= a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    Some(x)
}

fn is_convex(q: &[(f64, f64); 4]) -> bool {
    let mut sign = 0.0;
    for i in 0..4 {
        let (a, b, c) = (q[i], q[(i + 1) % 4], q[(i + 2) % 4]);
        let cross = (b.0 - a.0) * (c.1 - b.1) - (b.1 - a.1) * (c.0 - b.0);
        if cross == 0.0 || (sign != 0.0 && cross.signum() != sign) {
            return false;
        }
        sign = cross.signum();
    }
    true
}

/// Random perspective: every page corner moves independently by a uniform
/// offset in `[-j, j)` on each axis, `j = jitter_fraction * min(w, h)`, and the
/// homography is solved from the four correspondences.
///
/// Corners are drawn clockwise from the top-left, x before y. Degenerate
/// draws are discarded and redrawn. `jitter_fraction = 0` is the identity.
pub fn sample_homography(
    rng: &mut SampleRng,
    jitter_fraction: f64,
    page_w: f64,
    page_h: f64,
) -> Result<Homography, ConfigError> {
    if !(0.0..=0.05).contains(&jitter_fraction) {
        return Err(ConfigError::OutOfRange {
            name: "jitter_fraction",
            value: jitter_fraction,
            expected: "0 <= jitter_fraction <= 0.05",
        });
    }
    if jitter_fraction == 0.0 {
        return Ok(Homography::IDENTITY);
    }
    let j = jitter_fraction * page_w.min(page_h);
    let src = [(0.0, 0.0), (page_w, 0.0), (page_w, page_h), (0.0, page_h)];
    loop {
        let mut dst = src;
        for corner in &mut dst {
            corner.0 += rng.uniform(-j, j);
            corner.1 += rng.uniform(-j, j);
        }
        if !is_convex(&dst) {
            continue;
        }
        if let Some(h) = Homography::from_correspondences(&src, &dst) {
            if h.inverse().is_some() {
                return Ok(h);
            }
        }
    }
}

/// Per pixel, draws `k ~ Poisson(lambda)`; when `k > 0` every channel of the
/// pixel is replaced by one uniform value in `[0, 255]`. Returns how many
/// pixels were replaced.
pub fn apply_poisson_noise_in_place(
    image: &mut RasterImage,
    lambda: f64,
    rng: &mut SampleRng,
) -> Result<usize, ConfigError> {
    let poisson = Poisson::new(lambda).ok_or(ConfigError::OutOfRange {
        name: "noise_lambda",
        value: lambda,
        expected: "0 <= noise_lambda <= 100",
    })?;
    if lambda == 0.0 {
        return Ok(0);
    }
    let c = image.channels() as usize;
    let mut corrupted = 0;
    for px in image.pixels_mut().chunks_exact_mut(c) {
        if rng.poisson(&poisson) > 0 {
            px.fill(rng.below(256) as u8);
            corrupted += 1;
        }
    }
    Ok(corrupted)
}

pub fn apply_poisson_noise(
    image: &RasterImage,
    lambda: f64,
    rng: &mut SampleRng,
) -> Result<RasterImage, ConfigError> {
    let mut out = image.clone();
    apply_poisson_noise_in_place(&mut out, lambda, rng)?;
    Ok(out)
}

/// Warps the image and both masks with the same homography.
///
/// Each output pixel centre is mapped through the inverse homography. The
/// image is sampled bilinearly, masks by nearest neighbour and re-binarized
/// at 128. Points that land outside the source become `fill` in the image
/// and 0 in the masks.
pub fn warp(
    image: &RasterImage,
    table_mask: &MaskImage,
    column_mask: &MaskImage,
    homography: &Homography,
    fill: [u8; 3],
) -> Result<(RasterImage, MaskImage, MaskImage), RasterError> {
    let (w, h) = (image.width(), image.height());
    for (what, m) in [("table mask vs image", table_mask), ("column mask vs image", column_mask)] {
        if (m.width(), m.height()) != (w, h) {
            return Err(RasterError::DimensionMismatch {
                what,
                a_w: m.width(),
                a_h: m.height(),
                b_w: w,
                b_h: h,
            });
        }
    }
    if homography.is_identity() {
        return Ok((image.clone(), table_mask.clone(), column_mask.clone()));
    }
    let inv = homography.inverse().ok_or(RasterError::SingularTransform)?;

    let c = image.channels() as usize;
    let fill_px: &[u8] = match image.channels() {
        Channels::Rgb => &fill,
        Channels::Gray => &fill[..1],
    };
    let src = image.pixels();
    let stride = w as usize * c;
    let (wf, hf) = (f64::from(w), f64::from(h));
    let mut out = alloc::vec::Vec::with_capacity(src.len());
    let mut table = alloc::vec::Vec::with_capacity(table_mask.pixels().len());
    let mut column = alloc::vec::Vec::with_capacity(column_mask.pixels().len());

    for y in 0..h {
        for x in 0..w {
            let (sx, sy) = inv.apply(f64::from(x) + 0.5, f64::from(y) + 0.5);
            if !(sx >= 0.0 && sy >= 0.0 && sx < wf && sy < hf) {
                out.extend_from_slice(fill_px);
                table.push(0);
                column.push(0);
                continue;
            }
            let (nx, ny) = (sx as usize, sy as usize);
            let i = ny * w as usize + nx;
            table.push(if table_mask.pixels()[i] >= 128 { 255 } else { 0 });
            column.push(if column_mask.pixels()[i] >= 128 { 255 } else { 0 });

            let fx = (sx - 0.5).max(0.0);
            let fy = (sy - 0.5).max(0.0);
            let x0 = (fx as usize).min(w as usize - 1);
            let y0 = (fy as usize).min(h as usize - 1);
            let x1 = (x0 + 1).min(w as usize - 1);
            let y1 = (y0 + 1).min(h as usize - 1);
            let (ax, ay) = (fx - x0 as f64, fy - y0 as f64);
            for k in 0..c {
                let p = |yy: usize, xx: usize| f64::from(src[yy * stride + xx * c + k]);
                let top = p(y0, x0) * (1.0 - ax) + p(y0, x1) * ax;
                let bottom = p(y1, x0) * (1.0 - ax) + p(y1, x1) * ax;
                out.push(libm::round(top * (1.0 - ay) + bottom * ay).clamp(0.0, 255.0) as u8);
            }
        }
    }
    Ok((
        RasterImage::from_raw(w, h, image.channels(), out)?,
        MaskImage::from_raw(w, h, table)?,
        MaskImage::from_raw(w, h, column)?,
    ))
}
