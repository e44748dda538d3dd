use super::MinutiaeError;

/// 8-bit grayscale image, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self, MinutiaeError> {
        if width == 0 || height == 0 || pixels.len() != width * height {
            return Err(MinutiaeError::Dimension { width, height });
        }
        Ok(GrayImage { width, height, pixels })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self, MinutiaeError> {
        GrayImage::new(width, height, vec![value; width * height])
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        f: impl Fn(usize, usize) -> u8,
    ) -> Result<Self, MinutiaeError> {
        let pixels = (0..height).flat_map(|y| (0..width).map(move |x| (x, y))).map(|(x, y)| f(x, y)).collect();
        GrayImage::new(width, height, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    pub fn inverted(&self) -> GrayImage {
        GrayImage {
            width: self.width,
            height: self.height,
            pixels: self.pixels.iter().map(|&p| 255 - p).collect(),
        }
    }

    pub(crate) fn with_pixels(&self, pixels: Vec<u8>) -> GrayImage {
        debug_assert_eq!(pixels.len(), self.pixels.len());
        GrayImage { width: self.width, height: self.height, pixels }
    }
}

/// Row-major boolean image; `true` marks ridge pixels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryImage {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl BinaryImage {
    pub fn new(width: usize, height: usize, bits: Vec<bool>) -> Result<Self, MinutiaeError> {
        if width == 0 || height == 0 || bits.len() != width * height {
            return Err(MinutiaeError::Dimension { width, height });
        }
        Ok(BinaryImage { width, height, bits })
    }

    pub fn empty(width: usize, height: usize) -> Result<Self, MinutiaeError> {
        BinaryImage::new(width, height, vec![false; width * height])
    }

    /// Builds an image from rows of `'#'` (true) and any other char (false).
    pub fn from_ascii(rows: &[&str]) -> Result<Self, MinutiaeError> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.chars().count());
        let mut bits = Vec::with_capacity(width * height);
        for row in rows {
            if row.chars().count() != width {
                return Err(MinutiaeError::Dimension { width, height });
            }
            bits.extend(row.chars().map(|c| c == '#'));
        }
        BinaryImage::new(width, height, bits)
    }

    pub fn to_ascii(&self) -> Vec<String> {
        self.bits
            .chunks(self.width)
            .map(|row| row.iter().map(|&b| if b { '#' } else { '.' }).collect())
            .collect()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    /// Out-of-bounds coordinates read as background.
    pub fn get_signed(&self, x: isize, y: isize) -> bool {
        if x < 0 || y < 0 || x as usize >= self.width || y as usize >= self.height {
            return false;
        }
        self.get(x as usize, y as usize)
    }

    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        self.bits[y * self.width + x] = value;
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}
