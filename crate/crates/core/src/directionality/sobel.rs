use crate::border::reflect;
use crate::error::Result;
use crate::image::GrayImage;

/// Gradient baseline: `(sum |Gx| - sum |Gy|) / (sum |Gx| + sum |Gy|)` with
/// 3x3 Sobel kernels and reflected borders. `Gx` differentiates along x and
/// so responds to vertical edges, giving the same sign convention as the
/// pyramid score. Returns 0 for images without gradient.
pub fn sobel_score(img: &GrayImage) -> Result<f64> {
    img.require_min(3)?;
    let (w, h) = img.dims();
    let s = img.samples();
    let mut sx = 0.0;
    let mut sy = 0.0;
    let mut rows = [0usize; 3];
    for y in 0..h {
        for (d, r) in rows.iter_mut().enumerate() {
            *r = reflect(y as isize + d as isize - 1, h) * w;
        }
        let (up, mid, dn) = (
            &s[rows[0]..rows[0] + w],
            &s[rows[1]..rows[1] + w],
            &s[rows[2]..rows[2] + w],
        );
        let mut line = |xl: usize, x: usize, xr: usize| {
            let gx = (up[xr] - up[xl]) + 2.0 * (mid[xr] - mid[xl]) + (dn[xr] - dn[xl]);
            let gy = (dn[xl] - up[xl]) + 2.0 * (dn[x] - up[x]) + (dn[xr] - up[xr]);
            sx += libm::fabs(gx);
            sy += libm::fabs(gy);
        };
        line(reflect(-1, w), 0, reflect(1, w));
        for x in 1..w - 1 {
            line(x - 1, x, x + 1);
        }
        line(w - 2, w - 1, reflect(w as isize, w));
    }
    let total = sx + sy;
    if total <= 1e-12 * img.area() as f64 {
        return Ok(0.0);
    }
    Ok((sx - sy) / total)
}
