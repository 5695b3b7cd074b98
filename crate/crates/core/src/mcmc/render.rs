use std::path::Path;

use crate::error::{Error, Result};
use crate::graphs::{Board, BoardMeta};

const BACKGROUND: [u8; 3] = [255, 255, 255];
const EVEN: [u8; 3] = [30, 60, 160];
const ODD: [u8; 3] = [200, 40, 40];
const PALETTE: [[u8; 3]; 8] = [
    [40, 160, 60],
    [230, 200, 40],
    [200, 40, 40],
    [30, 60, 160],
    [140, 60, 170],
    [40, 170, 170],
    [240, 130, 30],
    [90, 90, 90],
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderStyle {
    /// Occupied even sites blue, occupied odd sites red, everything else
    /// background.
    Parity { occupied: u8 },
    /// One colour per spin; `blank` is drawn as background.
    Spins { blank: Option<u8> },
}

/// An RGB raster.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Image {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<[u8; 3]>,
}

impl Image {
    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        self.pixels[y * self.width + x]
    }

    /// Binary PPM (P6).
    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend(self.pixels.iter().flatten());
        out
    }

    pub fn write_ppm(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_ppm())?;
        Ok(())
    }
}

/// Draws a configuration on a 1- or 2-dimensional grid board, `block`
/// pixels per site. Spins beyond the palette cycle through it.
pub fn render(g: &Board, spins: &[u8], style: RenderStyle, block: usize) -> Result<Image> {
    let BoardMeta::Grid { n, d } = *g.meta() else {
        return Err(Error::Invalid("rendering needs a grid board".into()));
    };
    if d > 2 {
        return Err(Error::Invalid("rendering needs a 1- or 2-dimensional grid".into()));
    }
    if spins.len() != g.n_sites() {
        return Err(Error::LengthMismatch { expected: g.n_sites(), got: spins.len() });
    }
    let block = block.max(1);
    let side = 2 * n + 1;
    let (cols, rows) = if d == 1 { (side, 1) } else { (side, side) };
    let (width, height) = (cols * block, rows * block);
    let mut pixels = vec![BACKGROUND; width * height];
    let parity = g.parity().expect("grids are bipartite");
    for (s, &spin) in spins.iter().enumerate() {
        let colour = match style {
            RenderStyle::Parity { occupied } if spin == occupied => {
                if parity[s] {
                    ODD
                } else {
                    EVEN
                }
            }
            RenderStyle::Parity { .. } => BACKGROUND,
            RenderStyle::Spins { blank } if blank == Some(spin) => BACKGROUND,
            RenderStyle::Spins { .. } => PALETTE[spin as usize % PALETTE.len()],
        };
        let (row, col) = (s / cols, s % cols);
        for y in row * block..(row + 1) * block {
            pixels[y * width + col * block..y * width + (col + 1) * block].fill(colour);
        }
    }
    Ok(Image { width, height, pixels })
}
