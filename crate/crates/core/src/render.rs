//! Black-and-white rasters of trajectories, written as portable bitmaps.
//!
//! By default `S0` is black and `S1` white. In PBM a `1` pixel is black.

use serde::{Deserialize, Serialize};

use crate::analysis::AtlasTile;
use crate::eca::EcaRow;
use crate::engine::Trajectory;
use crate::error::{Error, Result};
use crate::machine::State;

/// Longest line emitted in plain PBM output.
const PLAIN_LINE: usize = 70;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowFilter {
    All,
    Even,
    Odd,
    /// Even rows in a left panel, odd rows in a right panel, separated by a
    /// one-cell white gutter.
    SplitEvenOdd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Palette {
    /// `S0` black, `S1` white.
    S0Black,
    S1Black,
}

impl Palette {
    fn is_black(self, q: State) -> bool {
        match self {
            Palette::S0Black => q == State::S0,
            Palette::S1Black => q == State::S1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RasterSpec {
    pub row_filter: RowFilter,
    pub scale: usize,
    pub palette: Palette,
}

impl RasterSpec {
    pub fn new(row_filter: RowFilter) -> Self {
        RasterSpec {
            row_filter,
            scale: 1,
            palette: Palette::S0Black,
        }
    }

    pub fn with_scale(mut self, scale: usize) -> Self {
        self.scale = scale;
        self
    }

    pub fn with_palette(mut self, palette: Palette) -> Self {
        self.palette = palette;
        self
    }
}

/// Row-major 1-bit image; `true` is black.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bitmap {
    width: usize,
    height: usize,
    pixels: Vec<bool>,
}

impl Bitmap {
    pub fn new(width: usize, height: usize) -> Self {
        Bitmap {
            width,
            height,
            pixels: vec![false; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.pixels[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, black: bool) {
        self.pixels[y * self.width + x] = black;
    }

    pub fn row(&self, y: usize) -> &[bool] {
        &self.pixels[y * self.width..(y + 1) * self.width]
    }

    /// Copies `src` with its top-left corner at `(x, y)`.
    pub fn blit(&mut self, src: &Bitmap, x: usize, y: usize) {
        for sy in 0..src.height {
            let dst = (y + sy) * self.width + x;
            self.pixels[dst..dst + src.width].copy_from_slice(src.row(sy));
        }
    }

    /// The `w × h` region with top-left corner `(x, y)`.
    pub fn crop(&self, x: usize, y: usize, w: usize, h: usize) -> Bitmap {
        let mut out = Bitmap::new(w, h);
        for sy in 0..h {
            let src = (y + sy) * self.width + x;
            out.pixels[sy * w..(sy + 1) * w].copy_from_slice(&self.pixels[src..src + w]);
        }
        out
    }

    /// Plain PBM: `P1`, dimensions, then each raster row as `0`/`1` digits
    /// wrapped at 70 characters per line.
    pub fn to_pbm_plain(&self) -> Vec<u8> {
        let mut out = format!("P1\n{} {}\n", self.width, self.height).into_bytes();
        for y in 0..self.height {
            for chunk in self.row(y).chunks(PLAIN_LINE) {
                out.extend(chunk.iter().map(|&b| if b { b'1' } else { b'0' }));
                out.push(b'\n');
            }
        }
        out
    }

    /// Raw PBM: `P4`, dimensions, then rows packed MSB-first, each padded to
    /// a whole byte.
    pub fn to_pbm_raw(&self) -> Vec<u8> {
        let mut out = format!("P4\n{} {}\n", self.width, self.height).into_bytes();
        for y in 0..self.height {
            for chunk in self.row(y).chunks(8) {
                let byte = chunk
                    .iter()
                    .enumerate()
                    .fold(0u8, |acc, (k, &b)| acc | (u8::from(b) << (7 - k)));
                out.push(byte);
            }
        }
        out
    }
}

fn select<T>(rows: &[T], filter: RowFilter) -> Vec<&T> {
    match filter {
        RowFilter::All | RowFilter::SplitEvenOdd => rows.iter().collect(),
        RowFilter::Even => rows.iter().step_by(2).collect(),
        RowFilter::Odd => rows.iter().skip(1).step_by(2).collect(),
    }
}

fn paint(rows: &[Vec<bool>], scale: usize) -> Bitmap {
    let width = rows.first().map_or(0, Vec::len) * scale;
    let mut bmp = Bitmap::new(width, rows.len() * scale);
    for (r, cells) in rows.iter().enumerate() {
        for (c, &black) in cells.iter().enumerate() {
            for dy in 0..scale {
                for dx in 0..scale {
                    bmp.set(c * scale + dx, r * scale + dy, black);
                }
            }
        }
    }
    bmp
}

/// Rasterises pre-coloured rows (`true` = black), top row first.
pub fn render_rows(rows: &[Vec<bool>], filter: RowFilter, scale: usize) -> Result<Bitmap> {
    if rows.is_empty() {
        return Err(Error::Domain("nothing to render".into()));
    }
    if scale == 0 {
        return Err(Error::Domain("scale must be at least 1".into()));
    }
    if filter != RowFilter::SplitEvenOdd {
        let picked: Vec<Vec<bool>> = select(rows, filter).into_iter().cloned().collect();
        return Ok(paint(&picked, scale));
    }
    let n = rows[0].len();
    let even: Vec<Vec<bool>> = rows.iter().step_by(2).cloned().collect();
    let mut odd: Vec<Vec<bool>> = rows.iter().skip(1).step_by(2).cloned().collect();
    odd.resize(even.len(), vec![false; n]);
    let (left, right) = (paint(&even, scale), paint(&odd, scale));
    let mut out = Bitmap::new(left.width * 2 + scale, left.height);
    out.blit(&left, 0, 0);
    out.blit(&right, left.width + scale, 0);
    Ok(out)
}

pub fn render_trajectory(traj: &Trajectory, spec: &RasterSpec) -> Result<Bitmap> {
    let rows: Vec<Vec<bool>> = traj
        .rows
        .iter()
        .map(|r| {
            r.cells()
                .iter()
                .map(|&q| spec.palette.is_black(q))
                .collect()
        })
        .collect();
    render_rows(&rows, spec.row_filter, spec.scale)
}

/// Renders automaton rows with `1` drawn like `S1` under `palette`.
pub fn render_eca(
    rows: &[EcaRow],
    filter: RowFilter,
    scale: usize,
    palette: Palette,
) -> Result<Bitmap> {
    let colour: Vec<Vec<bool>> = rows
        .iter()
        .map(|r| {
            r.cells
                .iter()
                .map(|&c| palette.is_black(State::from_bit(c)))
                .collect()
        })
        .collect();
    render_rows(&colour, filter, scale)
}

/// Pixel position of tile `index` in an atlas grid.
pub fn atlas_tile_origin(
    index: usize,
    columns: usize,
    tile_w: usize,
    tile_h: usize,
) -> (usize, usize) {
    (
        (index % columns) * (tile_w + 1),
        (index / columns) * (tile_h + 1),
    )
}

/// All 256 tiles in id order, row-major, `columns` per row, separated by a
/// one-pixel white gutter.
pub fn render_atlas(tiles: &[AtlasTile], columns: usize, spec: &RasterSpec) -> Result<Bitmap> {
    let in_order = tiles.len() == 256
        && tiles
            .iter()
            .enumerate()
            .all(|(k, t)| t.machine.0 as usize == k);
    if !in_order {
        return Err(Error::MissingTiles(tiles.len()));
    }
    if columns == 0 {
        return Err(Error::Domain("atlas needs at least one column".into()));
    }
    let rendered = tiles
        .iter()
        .map(|t| render_trajectory(&t.trajectory, spec))
        .collect::<Result<Vec<_>>>()?;
    let (tw, th) = (rendered[0].width, rendered[0].height);
    if rendered.iter().any(|b| b.width != tw || b.height != th) {
        return Err(Error::Domain("atlas tiles differ in size".into()));
    }
    let grid_rows = tiles.len().div_ceil(columns);
    let mut out = Bitmap::new(columns * (tw + 1) - 1, grid_rows * (th + 1) - 1);
    for (k, bmp) in rendered.iter().enumerate() {
        let (x, y) = atlas_tile_origin(k, columns, tw, th);
        out.blit(bmp, x, y);
    }
    Ok(out)
}
