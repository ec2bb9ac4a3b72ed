//! Binary PPM (P6) images of walls: zero is red, nonzero entries are grey
//! with 1 darkest, and cells outside the populated region are white.

use std::io::{self, Write};

use crate::wall::{WallGrid, UNKNOWN};

const RED: [u8; 3] = [255, 0, 0];
const WHITE: [u8; 3] = [255, 255, 255];

fn colour(v: u8, p: u8) -> [u8; 3] {
    match v {
        UNKNOWN => WHITE,
        0 => RED,
        v => {
            let g = ((255.0 * v as f64) / (p as f64 - 1.0)).round() as u8;
            [g, g, g]
        }
    }
}

/// One pixel per entry, rows `-2..=depth` top to bottom.
///
/// ```
/// use numwall::{ff::PrimeField, render::render_ppm, wall::generate_wall};
///
/// let wall = generate_wall(&[0], &PrimeField::new(5).unwrap());
/// let mut out = Vec::new();
/// render_ppm(&wall, &mut out).unwrap();
/// assert!(out.starts_with(b"P6\n1 3\n255\n"));
/// assert_eq!(&out[out.len() - 3..], &[255, 0, 0]);
/// ```
pub fn render_ppm(grid: &WallGrid, out: impl Write) -> io::Result<()> {
    render(grid, None, out)
}

/// Like [`render_ppm`], with the tiles of length `tile_length` shaded in a
/// checkerboard so their outlines show.
pub fn render_ppm_tiled(grid: &WallGrid, tile_length: usize, out: impl Write) -> io::Result<()> {
    render(grid, Some(tile_length.max(2) as i64), out)
}

fn render(grid: &WallGrid, tiles: Option<i64>, out: impl Write) -> io::Result<()> {
    let mut out = io::BufWriter::new(out);
    let rows = grid.depth() + 3;
    write!(out, "P6\n{} {}\n255\n", grid.cols(), rows)?;
    for m in -2..=grid.depth() {
        for (n, &v) in grid.row(m).iter().enumerate() {
            let mut px = colour(v, grid.p());
            if let Some(len) = tiles {
                let n = n as i64;
                let odd = ((n + m).div_euclid(len) + (n - m).div_euclid(len)) % 2 != 0;
                if odd && v != UNKNOWN {
                    px = [px[0] * 4 / 5, px[1] * 9 / 10, px[2].saturating_add(40)];
                }
            }
            out.write_all(&px)?;
        }
    }
    out.flush()
}
