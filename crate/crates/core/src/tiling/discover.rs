use std::ops::ControlFlow;

use crate::ff::{PrimeField, Residue};
use crate::seq::SequenceSpec;
use crate::wall::{frame_entry, generate_wall, Boundary, Canvas, FrameError, WallGrid};

use super::store::{EAST, NORTH, SOUTH, WEST};
use super::{
    extract_tile, read_tile, write_tile, Morphism2DResult, TileId, TileShape, TileStore,
    TilingError, SIGMA_NEG, SIGMA_ZERO,
};

/// A square block of `n x n` tile positions laid out as in the wall, with
/// some positions known and the rest computed from the frame constraints.
///
/// Tile `(i, j)` of the block has its origin at row `k(i-j)`, column
/// `k(i+j)`. Targets must lie along the lower left edge of the block so that
/// everything they depend on is inside it.
pub struct Scaffolder {
    field: PrimeField,
    shape: TileShape,
    canvas: Canvas,
    order: Vec<(i64, i64)>,
    targets: Vec<(i64, i64)>,
}

impl Scaffolder {
    pub fn new(
        field: PrimeField,
        shape: TileShape,
        blocks: usize,
        targets: &[(usize, usize)],
    ) -> Self {
        let k = shape.half() as i64;
        let n = blocks as i64;
        let top = -k * (n - 1) - (k - 1);
        let rows = (2 * (k * (n - 1) + k - 1) + 1) as usize;
        let canvas = Canvas::new(top, rows, 2 * shape.half() * blocks);
        let targets: Vec<(i64, i64)> = targets.iter().map(|&(i, j)| (i as i64, j as i64)).collect();
        let mut order: Vec<(i64, i64)> = targets
            .iter()
            .flat_map(|&(i, j)| {
                let (r0, c0) = shape.origin(i, j);
                shape.cells().map(move |(r, c)| (r0 + r, c0 + c))
            })
            .collect();
        order.sort_unstable();
        Scaffolder {
            field,
            shape,
            canvas,
            order,
            targets,
        }
    }

    /// The 4x4 block used to find the children of a tile: the images of its
    /// west, north and east scaffolding tiles are known and the image of the
    /// tile itself is computed.
    pub fn children(field: PrimeField, shape: TileShape) -> Self {
        Scaffolder::new(field, shape, 4, &[(2, 0), (2, 1), (3, 0), (3, 1)])
    }

    /// The 2x2 block used to recompute the south tile of a 4-tuple.
    pub fn south(field: PrimeField, shape: TileShape) -> Self {
        Scaffolder::new(field, shape, 2, &[(1, 0)])
    }

    pub fn place(&mut self, i: usize, j: usize, value: &[Residue]) {
        debug_assert!(!self.targets.contains(&(i as i64, j as i64)));
        let (r, c) = self.shape.origin(i as i64, j as i64);
        write_tile(&mut self.canvas, r, c, self.shape, value);
    }

    pub fn fill(&mut self) -> Result<(), FrameError> {
        for &(m, n) in &self.order {
            let v = frame_entry(&self.canvas, &self.field, m, n, Boundary::Strict)?;
            self.canvas.set(m, n, v);
        }
        Ok(())
    }

    pub fn read(&self, i: usize, j: usize, out: &mut Vec<Residue>) {
        let (r, c) = self.shape.origin(i as i64, j as i64);
        read_tile(&self.canvas, r, c, self.shape, out);
    }

    pub fn canvas(&self) -> &Canvas {
        &self.canvas
    }
}

fn frame_error(tile: TileId, source: FrameError) -> TilingError {
    match source {
        FrameError::WindowTooLarge { .. } => TilingError::WindowTooLarge { tile, source },
        _ => TilingError::Frame { tile, source },
    }
}

/// Places the images of the `(east, north, west)` scaffolding into the 4x4
/// block. Fails if one of them has no images yet.
fn place_scaffolding(
    store: &TileStore,
    sc: &mut Scaffolder,
    [east, north, west]: [TileId; 3],
) -> Result<[[TileId; 4]; 3], TilingError> {
    let img = |id| store.images(id).ok_or(TilingError::Incomplete(id));
    let (we, no, ea) = (img(west)?, img(north)?, img(east)?);
    for (parent, (bi, bj)) in [(we, (0, 0)), (no, (0, 2)), (ea, (2, 2))] {
        for (slot, &child) in parent.iter().enumerate() {
            sc.place(bi + slot / 2, bj + slot % 2, store.value(child));
        }
    }
    Ok([ea, no, we])
}

/// The four children `(west, north, east, south)` of a tile with the given
/// scaffolding.
///
/// Entries above the wall are zero, so an all-zero scaffolding gives
/// all-zero children without consulting the frame constraints.
pub fn scaffold_generate(
    store: &TileStore,
    east: TileId,
    north: TileId,
    west: TileId,
) -> Result<[Vec<Residue>; 4], TilingError> {
    let zero = store.shape().sigma_zero();
    if [east, north, west] == [SIGMA_ZERO; 3] {
        return Ok([zero.clone(), zero.clone(), zero.clone(), zero]);
    }
    let mut sc = Scaffolder::children(store.field().clone(), store.shape());
    place_scaffolding(store, &mut sc, [east, north, west])?;
    sc.fill().map_err(|e| frame_error(NO_PARENT, e))?;
    let mut out: [Vec<Residue>; 4] = Default::default();
    for (slot, (i, j)) in out.iter_mut().zip([(2, 0), (2, 1), (3, 1), (3, 0)]) {
        sc.read(i, j, slot);
    }
    Ok(out)
}

const NO_PARENT: TileId = super::NO_TILE;

/// Initial tiles from the zeroth row.
///
/// Registers one tile per letter from the wall of its coded block, then for
/// each letter the tile directly below its image pair. Those second-row
/// tiles start the frontier.
pub fn algorithm_1_1(
    spec: &SequenceSpec,
    field: &PrimeField,
    tile_length: usize,
) -> Result<TileStore, TilingError> {
    let shape = TileShape::new(tile_length)?;
    let k = spec.morphism().k();
    if k != 2 {
        return Err(TilingError::NotTwoMorphism(k));
    }
    let spec = spec
        .compressed_to(tile_length)
        .ok_or(TilingError::CodingMismatch {
            coding: spec.coding().d(),
            tile_length,
        })?;
    let coding = spec.coding().reduced(field);
    let mut store = TileStore::new(field.clone(), shape);
    let letters = 0..spec.morphism().alphabet_size() as u32;
    let zeroth_scaffolding = [SIGMA_NEG, SIGMA_ZERO, SIGMA_NEG];
    let mut zeroth = Vec::new();
    for gamma in letters.clone() {
        let wall = generate_wall(coding.image(gamma), field);
        let value = extract_tile(&wall, 0, 0, shape)?;
        zeroth.push(store.insert(&value, Some(zeroth_scaffolding), false).0);
    }
    let half = shape.half() as i64;
    for gamma in letters {
        let pair = spec.morphism().image(gamma);
        let (left, right) = (zeroth[pair[0] as usize], zeroth[pair[1] as usize]);
        let row = coding.apply(pair);
        let wall = generate_wall(&row, field);
        let south = extract_tile(&wall, half, half, shape)?;
        let (south, _) = store.insert(&south, Some([right, SIGMA_NEG, left]), true);
        let id = zeroth[gamma as usize];
        if !store.is_complete(id) {
            store.set_images(id, [left, SIGMA_NEG, south, right]);
        }
    }
    store.set_start(zeroth[spec.start() as usize]);
    Ok(store)
}

/// Computes the children of `id` and defines its image.
fn process(
    store: &mut TileStore,
    sc: &mut Scaffolder,
    id: TileId,
    buf: &mut Vec<Residue>,
) -> Result<(), TilingError> {
    let scaffolding = store.scaffolding(id).ok_or(TilingError::Incomplete(id))?;
    let [ea, no, we] = place_scaffolding(store, sc, scaffolding)?;
    sc.fill().map_err(|e| frame_error(id, e))?;
    sc.read(2, 1, buf);
    let (north, _) = store.insert(buf, Some([ea[WEST], no[SOUTH], we[EAST]]), true);
    sc.read(2, 0, buf);
    let (west, _) = store.insert(buf, Some([north, we[EAST], we[SOUTH]]), true);
    sc.read(3, 1, buf);
    let (east, _) = store.insert(buf, Some([ea[SOUTH], ea[WEST], north]), true);
    sc.read(3, 0, buf);
    let (south, _) = store.insert(buf, Some([east, north, west]), true);
    let mut images = [0; 4];
    images[WEST] = west;
    images[NORTH] = north;
    images[SOUTH] = south;
    images[EAST] = east;
    store.set_images(id, images);
    Ok(())
}

/// Whether discovery ran to closure or was stopped by the caller.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Closed,
    Stopped,
}

/// Works through the frontier in FIFO order until every tile has images.
///
/// `on_progress` runs after every `every` processed tiles (never when
/// `every` is 0) and may stop the run; the store then resumes where it left
/// off on the next call. On error the failing tile stays at the head of the
/// frontier.
pub fn algorithm_1_2(
    store: &mut TileStore,
    every: usize,
    mut on_progress: impl FnMut(&TileStore) -> ControlFlow<()>,
) -> Result<RunStatus, TilingError> {
    let mut sc = Scaffolder::children(store.field().clone(), store.shape());
    let mut buf = Vec::with_capacity(store.shape().size());
    let mut processed = 0usize;
    while let Some(id) = store.pop_frontier() {
        if store.is_complete(id) {
            continue;
        }
        if let Err(e) = process(store, &mut sc, id, &mut buf) {
            store.rebuild_frontier();
            return Err(e);
        }
        processed += 1;
        if every > 0 && processed.is_multiple_of(every) && on_progress(store).is_break() {
            return Ok(RunStatus::Stopped);
        }
    }
    Ok(RunStatus::Closed)
}

/// Both discovery algorithms, run to closure.
///
/// ```
/// use numwall::{ff::PrimeField, seq::paperfolding_level1, tiling::discover};
///
/// let f3 = PrimeField::new(3).unwrap();
/// let result = discover(&paperfolding_level1(), &f3, 8).unwrap();
/// assert_eq!(result.len(), 390);
/// ```
pub fn discover(
    spec: &SequenceSpec,
    field: &PrimeField,
    tile_length: usize,
) -> Result<Morphism2DResult, TilingError> {
    let mut store = algorithm_1_1(spec, field, tile_length)?;
    algorithm_1_2(&mut store, 0, |_| ControlFlow::Continue(()))?;
    Morphism2DResult::new(store)
}

/// Ids of `Psi^generations(start)` as a square array.
pub fn iterate_psi(result: &Morphism2DResult, generations: u32) -> Vec<Vec<TileId>> {
    iterate_store(result.store(), generations).expect("closed tile set")
}

fn iterate_store(store: &TileStore, generations: u32) -> Result<Vec<Vec<TileId>>, TilingError> {
    let mut ids = vec![vec![store.start()]];
    for _ in 0..generations {
        let n = ids.len();
        let mut next = vec![vec![0; 2 * n]; 2 * n];
        for (i, row) in ids.iter().enumerate() {
            for (j, &id) in row.iter().enumerate() {
                let img = store.images(id).ok_or(TilingError::Incomplete(id))?;
                for (slot, &child) in img.iter().enumerate() {
                    next[2 * i + slot / 2][2 * j + slot % 2] = child;
                }
            }
        }
        ids = next;
    }
    Ok(ids)
}

/// The wall triangle covered by `Psi^generations(start)`.
///
/// The zeroth row has `tile_length * 2^generations` entries. Rows `-2` and
/// `-1` are filled in full; rows above them are not part of the grid.
pub fn assemble(result: &Morphism2DResult, generations: u32) -> WallGrid {
    assemble_partial(result.store(), generations).expect("closed tile set")
}

/// [`assemble`] for a store that may still be open. Fails with
/// [`TilingError::Incomplete`] if the iteration reaches a tile without
/// images.
pub fn assemble_partial(store: &TileStore, generations: u32) -> Result<WallGrid, TilingError> {
    let shape = store.shape();
    let ids = iterate_store(store, generations)?;
    let n = ids.len() as i64;
    let cols = shape.tile_length() * ids.len();
    let depth = shape.half() as i64 * n - 1;
    let mut grid = WallGrid::blank(store.field().modulus(), cols, depth);
    for c in 0..cols as i64 {
        grid.set(-2, c, 0);
        grid.set(-1, c, 1);
    }
    for (a, row) in ids.iter().enumerate() {
        for (b, &id) in row.iter().enumerate().take(a + 1) {
            let (r0, c0) = shape.origin(a as i64, b as i64);
            for ((r, c), &v) in shape.cells().zip(store.value(id)) {
                if r0 + r >= 0 {
                    grid.set(r0 + r, c0 + c, v);
                }
            }
        }
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::{paperfolding_level1, Coding, Morphism1D};
    use crate::tiling::NO_TILE;

    fn f3() -> PrimeField {
        PrimeField::new(3).unwrap()
    }

    #[test]
    fn all_zero_sequence_closes_immediately() {
        let spec = SequenceSpec::new(
            Morphism1D::new(vec![vec![0, 0]]).unwrap(),
            Coding::new(vec![vec![0]]).unwrap(),
            0,
        )
        .unwrap();
        let result = discover(&spec, &f3(), 8).unwrap();
        assert_eq!(result.len(), 3);
        assert_eq!(result.psi(2), [2, SIGMA_NEG, SIGMA_ZERO, 2]);
    }

    #[test]
    fn zero_scaffolding_gives_zero_children() {
        let store = TileStore::new(f3(), TileShape::new(8).unwrap());
        let children = scaffold_generate(&store, SIGMA_ZERO, SIGMA_ZERO, SIGMA_ZERO).unwrap();
        assert!(children.iter().all(|c| c.iter().all(|&v| v == 0)));
    }

    #[test]
    fn incomplete_scaffolding_is_reported() {
        let mut store = TileStore::new(f3(), TileShape::new(4).unwrap());
        let (id, _) = store.insert(&[1; 8], None, false);
        assert!(matches!(
            scaffold_generate(&store, id, SIGMA_ZERO, SIGMA_NEG),
            Err(TilingError::Incomplete(i)) if i == id
        ));
    }

    #[test]
    fn init_for_first_level_paperfolding() {
        let store = algorithm_1_1(&paperfolding_level1(), &f3(), 8).unwrap();
        assert_eq!(store.start(), 2);
        for id in 2..6 {
            assert_eq!(
                store.scaffolding(id),
                Some([SIGMA_NEG, SIGMA_ZERO, SIGMA_NEG])
            );
            assert!(store.is_complete(id) || store.image_slots(id) == [NO_TILE; 4]);
        }
        assert!(store.frontier_len() > 0);
    }
}
