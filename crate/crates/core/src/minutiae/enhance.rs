use super::{GrayImage, MinutiaeError};

/// Contrast stretch, histogram equalization, then a 3×3 median filter.
pub fn enhance(img: &GrayImage) -> Result<GrayImage, MinutiaeError> {
    check_dims(img)?;
    let stretched = contrast_stretch(img);
    let equalized = equalize_histogram(&stretched);
    Ok(median_filter(&equalized))
}

fn check_dims(img: &GrayImage) -> Result<(), MinutiaeError> {
    if img.width() == 0 || img.height() == 0 {
        return Err(MinutiaeError::Dimension { width: img.width(), height: img.height() });
    }
    Ok(())
}

/// Linearly maps `[min, max]` onto `[0, 255]`. Constant images are returned as-is.
pub fn contrast_stretch(img: &GrayImage) -> GrayImage {
    let lo = *img.pixels().iter().min().unwrap_or(&0) as u32;
    let hi = *img.pixels().iter().max().unwrap_or(&0) as u32;
    if hi == lo {
        return img.clone();
    }
    let span = hi - lo;
    let pixels = img
        .pixels()
        .iter()
        .map(|&p| (((p as u32 - lo) * 255 + span / 2) / span) as u8)
        .collect();
    img.with_pixels(pixels)
}

/// Classic CDF remapping. A single-level histogram maps to itself.
pub fn equalize_histogram(img: &GrayImage) -> GrayImage {
    let mut hist = [0u64; 256];
    for &p in img.pixels() {
        hist[p as usize] += 1;
    }
    let mut cdf = [0u64; 256];
    let mut acc = 0;
    for (c, h) in cdf.iter_mut().zip(hist.iter()) {
        acc += h;
        *c = acc;
    }
    let total = acc;
    let cdf_min = hist.iter().zip(cdf.iter()).find(|(h, _)| **h > 0).map_or(0, |(_, c)| *c);
    if total == cdf_min {
        return img.clone();
    }
    let denom = total - cdf_min;
    let mut map = [0u8; 256];
    for (v, m) in map.iter_mut().enumerate() {
        let num = cdf[v].saturating_sub(cdf_min) * 255;
        *m = ((num + denom / 2) / denom).min(255) as u8;
    }
    img.with_pixels(img.pixels().iter().map(|&p| map[p as usize]).collect())
}

/// 3×3 median with edge replication.
pub fn median_filter(img: &GrayImage) -> GrayImage {
    let (w, h) = (img.width() as isize, img.height() as isize);
    let clamp = |v: isize, max: isize| v.clamp(0, max - 1) as usize;
    let mut out = Vec::with_capacity(img.pixels().len());
    let mut window = [0u8; 9];
    for y in 0..h {
        for x in 0..w {
            let mut i = 0;
            for dy in -1..=1 {
                for dx in -1..=1 {
                    window[i] = img.get(clamp(x + dx, w), clamp(y + dy, h));
                    i += 1;
                }
            }
            window.sort_unstable();
            out.push(window[4]);
        }
    }
    img.with_pixels(out)
}

/// Nearest-neighbour resampling.
pub fn resize_nearest(img: &GrayImage, width: usize, height: usize) -> Result<GrayImage, MinutiaeError> {
    if width == 0 || height == 0 {
        return Err(MinutiaeError::Dimension { width, height });
    }
    GrayImage::from_fn(width, height, |x, y| {
        let sx = x * img.width() / width;
        let sy = y * img.height() / height;
        img.get(sx, sy)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_image_is_unchanged() {
        let img = GrayImage::filled(7, 5, 128).unwrap();
        assert_eq!(enhance(&img).unwrap(), img);
    }

    #[test]
    fn full_range_pair_is_fixed_point() {
        let img = GrayImage::new(2, 1, vec![0, 255]).unwrap();
        assert_eq!(enhance(&img).unwrap().pixels(), &[0, 255]);
    }

    #[test]
    fn stretch_spans_full_range() {
        let img = GrayImage::new(3, 1, vec![100, 150, 200]).unwrap();
        assert_eq!(contrast_stretch(&img).pixels(), &[0, 128, 255]);
    }

    #[test]
    fn equalization_spreads_clustered_levels() {
        let img = GrayImage::new(4, 1, vec![10, 11, 12, 13]).unwrap();
        assert_eq!(equalize_histogram(&img).pixels(), &[0, 85, 170, 255]);
    }

    #[test]
    fn median_removes_salt_noise() {
        let mut px = vec![50u8; 25];
        px[12] = 255;
        let img = GrayImage::new(5, 5, px).unwrap();
        assert!(median_filter(&img).pixels().iter().all(|&p| p == 50));
    }

    #[test]
    fn resize_small_sensor_to_400() {
        let img = GrayImage::from_fn(96, 96, |x, y| ((x + y) % 256) as u8).unwrap();
        let big = resize_nearest(&img, 400, 400).unwrap();
        assert_eq!((big.width(), big.height()), (400, 400));
        assert_eq!(big.get(0, 0), img.get(0, 0));
        assert_eq!(big.get(399, 399), img.get(95, 95));
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(matches!(GrayImage::new(0, 4, vec![]), Err(MinutiaeError::Dimension { .. })));
        let img = GrayImage::filled(2, 2, 1).unwrap();
        assert!(resize_nearest(&img, 0, 3).is_err());
    }

    #[test]
    fn enhance_is_deterministic() {
        let img = GrayImage::from_fn(31, 17, |x, y| ((x * 37 + y * 11) % 251) as u8).unwrap();
        assert_eq!(enhance(&img).unwrap(), enhance(&img).unwrap());
    }
}
