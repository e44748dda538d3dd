use super::{BinaryImage, GrayImage, MinutiaeError};

pub const DEFAULT_BINARIZE_WINDOW: usize = 16;

/// Adaptive local-mean threshold.
///
/// The neighbourhood of a pixel is the square of side `2·⌊window/2⌋ + 1`
/// centred on it, clipped at the image border. A pixel is set when it is
/// brighter than its neighbourhood mean; in perfectly flat regions (pixel
/// equal to the mean) the absolute mid-level 128 breaks the tie.
pub fn binarize(img: &GrayImage, window: usize) -> Result<BinaryImage, MinutiaeError> {
    let (w, h) = (img.width(), img.height());
    if w == 0 || h == 0 {
        return Err(MinutiaeError::Dimension { width: w, height: h });
    }
    let half = window / 2;

    // summed-area table with a zero guard row/column
    let stride = w + 1;
    let mut sat = vec![0u64; stride * (h + 1)];
    for y in 0..h {
        let mut row = 0u64;
        for x in 0..w {
            row += img.get(x, y) as u64;
            sat[(y + 1) * stride + x + 1] = sat[y * stride + x + 1] + row;
        }
    }

    let mut bits = Vec::with_capacity(w * h);
    for y in 0..h {
        let y0 = y.saturating_sub(half);
        let y1 = (y + half + 1).min(h);
        for x in 0..w {
            let x0 = x.saturating_sub(half);
            let x1 = (x + half + 1).min(w);
            let sum = sat[y1 * stride + x1] + sat[y0 * stride + x0] - sat[y0 * stride + x1] - sat[y1 * stride + x0];
            let count = ((y1 - y0) * (x1 - x0)) as u64;
            // compare p against sum/count without division
            let p = img.get(x, y) as u64 * count;
            let ridge = p > sum || (p == sum && img.get(x, y) >= 128);
            bits.push(ridge);
        }
    }
    BinaryImage::new(w, h, bits)
}
