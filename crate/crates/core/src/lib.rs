//! Number walls over prime fields and the tile morphisms that generate the
//! walls of paperfolding sequences.
//!
//! * [`ff`]: arithmetic in `F_p`.
//! * [`seq`]: uniform morphisms, codings and the paperfolding sequences.
//! * [`wall`]: number walls, windows and window searches.
//! * [`tiling`]: tiles and discovery of the two-dimensional morphism.
//! * [`verify`]: checking a discovered morphism against the frame constraints.
//! * [`render`]: PPM images.

pub mod ff;
pub mod render;
pub mod seq;
pub mod tiling;
pub mod verify;
pub mod wall;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/walls.md")]
    mod walls {}
    #[doc = include_str!("../../../book/src/windows.md")]
    mod windows {}
    #[doc = include_str!("../../../book/src/sequences.md")]
    mod sequences {}
    #[doc = include_str!("../../../book/src/tiles.md")]
    mod tiles {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
