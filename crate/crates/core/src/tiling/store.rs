use std::collections::VecDeque;
use std::hash::{BuildHasher, RandomState};

use hashbrown::HashTable;

use crate::ff::{PrimeField, Residue};

use super::{TileShape, TilingError};

/// Dense tile identifier, assigned in creation order.
pub type TileId = u32;

/// The tile whose bottom row is row `-1`.
pub const SIGMA_NEG: TileId = 0;
/// The all-zero tile.
pub const SIGMA_ZERO: TileId = 1;
/// Marks an unset image or scaffolding slot.
pub const NO_TILE: TileId = TileId::MAX;

/// Image slots, in the order the images sit in the 2x2 block
/// `[[west, north], [south, east]]` read row by row.
pub(crate) const WEST: usize = 0;
pub(crate) const NORTH: usize = 1;
pub(crate) const SOUTH: usize = 2;
pub(crate) const EAST: usize = 3;

/// Every tile found so far, its images and the scaffolding it was found
/// from.
///
/// Tile values live in one arena; the hash index stores ids only and hashes
/// through the arena.
#[derive(Clone)]
pub struct TileStore {
    field: PrimeField,
    shape: TileShape,
    values: Vec<Residue>,
    images: Vec<[TileId; 4]>,
    scaffolding: Vec<[TileId; 3]>,
    index: HashTable<TileId>,
    hasher: RandomState,
    frontier: VecDeque<TileId>,
    start: TileId,
}

impl std::fmt::Debug for TileStore {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TileStore")
            .field("field", &self.field)
            .field("tile_length", &self.shape.tile_length())
            .field("tiles", &self.len())
            .field("frontier", &self.frontier.len())
            .finish()
    }
}

impl PartialEq for TileStore {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.shape == other.shape
            && self.values == other.values
            && self.images == other.images
            && self.scaffolding == other.scaffolding
            && self.frontier == other.frontier
            && self.start == other.start
    }
}

impl TileStore {
    /// A store holding the two built-in tiles and their images.
    pub fn new(field: PrimeField, shape: TileShape) -> Self {
        let mut store = TileStore::empty(field, shape, NO_TILE);
        let (neg, _) = store.insert(&shape.sigma_neg(), None, false);
        let (zero, _) = store.insert(&shape.sigma_zero(), None, false);
        debug_assert_eq!((neg, zero), (SIGMA_NEG, SIGMA_ZERO));
        store.set_images(SIGMA_NEG, [SIGMA_ZERO, SIGMA_ZERO, SIGMA_NEG, SIGMA_ZERO]);
        store.set_images(SIGMA_ZERO, [SIGMA_ZERO; 4]);
        store
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn shape(&self) -> TileShape {
        self.shape
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn start(&self) -> TileId {
        self.start
    }

    pub(crate) fn set_start(&mut self, id: TileId) {
        self.start = id;
    }

    pub fn value(&self, id: TileId) -> &[Residue] {
        let n = self.shape.size();
        &self.values[id as usize * n..(id as usize + 1) * n]
    }

    /// `(west, north, south, east)` images, if all four are set.
    pub fn images(&self, id: TileId) -> Option<[TileId; 4]> {
        let img = self.images[id as usize];
        img.iter().all(|&i| i != NO_TILE).then_some(img)
    }

    /// Raw image slots, [`NO_TILE`] where unset.
    pub fn image_slots(&self, id: TileId) -> [TileId; 4] {
        self.images[id as usize]
    }

    /// `(east, north, west)` scaffolding, `None` for tiles not found from one.
    pub fn scaffolding(&self, id: TileId) -> Option<[TileId; 3]> {
        let s = self.scaffolding[id as usize];
        (s[0] != NO_TILE).then_some(s)
    }

    pub fn is_complete(&self, id: TileId) -> bool {
        self.images(id).is_some()
    }

    pub fn lookup(&self, value: &[Residue]) -> Option<TileId> {
        let hash = self.hasher.hash_one(value);
        self.index
            .find(hash, |&id| self.value(id) == value)
            .copied()
    }

    /// Returns the id of `value`, adding it if new. A new tile records
    /// `scaffolding` and joins the back of the frontier when `enqueue` is set.
    pub fn insert(
        &mut self,
        value: &[Residue],
        scaffolding: Option<[TileId; 3]>,
        enqueue: bool,
    ) -> (TileId, bool) {
        assert_eq!(value.len(), self.shape.size());
        let hash = self.hasher.hash_one(value);
        let Self {
            values,
            index,
            hasher,
            shape,
            ..
        } = self;
        let n = shape.size();
        let arena = &*values;
        if let Some(&id) = index.find(hash, |&id| {
            &arena[id as usize * n..(id as usize + 1) * n] == value
        }) {
            return (id, false);
        }
        let id = self.images.len() as TileId;
        assert!(id != NO_TILE, "tile ids exhausted");
        values.extend_from_slice(value);
        let arena = &*values;
        index.insert_unique(hash, id, |&i| {
            hasher.hash_one(&arena[i as usize * n..(i as usize + 1) * n])
        });
        self.images.push([NO_TILE; 4]);
        self.scaffolding.push(scaffolding.unwrap_or([NO_TILE; 3]));
        if enqueue {
            self.frontier.push_back(id);
        }
        (id, true)
    }

    /// Defines the image of `id` as `(west, north, south, east)`.
    pub fn set_images(&mut self, id: TileId, images: [TileId; 4]) {
        self.images[id as usize] = images;
    }

    pub fn frontier_len(&self) -> usize {
        self.frontier.len()
    }

    /// Head of the frontier, or the tile count when it is empty.
    pub fn frontier_cursor(&self) -> TileId {
        self.frontier
            .front()
            .copied()
            .unwrap_or(self.len() as TileId)
    }

    pub(crate) fn pop_frontier(&mut self) -> Option<TileId> {
        self.frontier.pop_front()
    }

    /// Rebuilds the frontier from the incomplete tiles, in id order.
    pub(crate) fn rebuild_frontier(&mut self) {
        self.frontier = (0..self.len() as TileId)
            .filter(|&id| !self.is_complete(id))
            .collect();
    }

    pub(crate) fn empty(field: PrimeField, shape: TileShape, start: TileId) -> Self {
        TileStore {
            field,
            shape,
            values: Vec::new(),
            images: Vec::new(),
            scaffolding: Vec::new(),
            index: HashTable::new(),
            hasher: RandomState::new(),
            frontier: VecDeque::new(),
            start,
        }
    }

    /// Appends a tile read back from a checkpoint. Call
    /// [`TileStore::rebuild_frontier`] once all are in.
    pub(crate) fn push_restored(
        &mut self,
        value: &[Residue],
        images: [TileId; 4],
        scaffolding: [TileId; 3],
    ) -> Result<(), TilingError> {
        let expected = self.len() as TileId;
        let (id, fresh) = self.insert(value, None, false);
        if !fresh {
            return Err(TilingError::CorruptCheckpoint(format!(
                "tile {expected} repeats tile {id}"
            )));
        }
        self.images[id as usize] = images;
        self.scaffolding[id as usize] = scaffolding;
        Ok(())
    }

    /// Rough heap footprint in bytes.
    pub fn approx_bytes(&self) -> usize {
        self.values.capacity()
            + self.images.capacity() * 16
            + self.scaffolding.capacity() * 12
            + self.index.capacity() * 5
            + self.frontier.capacity() * 4
    }
}

/// A closed tile set: every tile has its four images.
#[derive(Debug, Clone, PartialEq)]
pub struct Morphism2DResult {
    store: TileStore,
}

impl Morphism2DResult {
    /// Fails with [`TilingError::Incomplete`] naming the first tile without
    /// images.
    pub fn new(store: TileStore) -> Result<Self, TilingError> {
        if let Some(id) = (0..store.len() as TileId).find(|&id| !store.is_complete(id)) {
            return Err(TilingError::Incomplete(id));
        }
        Ok(Morphism2DResult { store })
    }

    pub fn store(&self) -> &TileStore {
        &self.store
    }

    pub fn into_store(self) -> TileStore {
        self.store
    }

    /// `(west, north, south, east)` images of `id`.
    #[inline]
    pub fn psi(&self, id: TileId) -> [TileId; 4] {
        self.store.images[id as usize]
    }

    pub fn start(&self) -> TileId {
        self.store.start
    }

    pub fn len(&self) -> usize {
        self.store.len()
    }

    pub fn is_empty(&self) -> bool {
        self.store.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn store() -> TileStore {
        TileStore::new(PrimeField::new(3).unwrap(), TileShape::new(4).unwrap())
    }

    #[test]
    fn built_ins() {
        let s = store();
        assert_eq!(s.len(), 2);
        assert_eq!(s.value(SIGMA_NEG), &[0, 0, 0, 0, 0, 0, 1, 1]);
        assert_eq!(s.value(SIGMA_ZERO), &[0; 8]);
        assert_eq!(
            s.images(SIGMA_NEG),
            Some([SIGMA_ZERO, SIGMA_ZERO, SIGMA_NEG, SIGMA_ZERO])
        );
        assert_eq!(s.images(SIGMA_ZERO), Some([SIGMA_ZERO; 4]));
        assert_eq!(s.scaffolding(SIGMA_ZERO), None);
        assert_eq!(s.frontier_len(), 0);
    }

    #[test]
    fn insert_dedups_and_enqueues() {
        let mut s = store();
        let v = [1, 2, 0, 1, 1, 2, 2, 0];
        assert_eq!(s.insert(&v, Some([0, 1, 0]), true), (2, true));
        assert_eq!(s.insert(&v, Some([1, 1, 1]), true), (2, false));
        assert_eq!(s.insert(&[0; 8], None, true), (SIGMA_ZERO, false));
        assert_eq!(s.lookup(&v), Some(2));
        assert_eq!(s.lookup(&[2; 8]), None);
        assert_eq!(s.scaffolding(2), Some([0, 1, 0]));
        assert_eq!(s.frontier_len(), 1);
        assert_eq!(s.frontier_cursor(), 2);
        assert!(!s.is_complete(2));
        assert!(matches!(
            Morphism2DResult::new(s.clone()),
            Err(TilingError::Incomplete(2))
        ));
        s.set_images(2, [2, 2, 2, 2]);
        assert!(Morphism2DResult::new(s).is_ok());
    }
}
