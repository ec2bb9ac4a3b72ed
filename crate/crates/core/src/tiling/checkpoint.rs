//! Binary snapshots of a [`TileStore`].
//!
//! All integers are little-endian.
//!
//! ```text
//! magic            4 bytes  "NWTS"
//! version          u32      1
//! p                u32
//! tile_length      u32
//! tile_count       u64
//! frontier_cursor  u64      head of the frontier, or tile_count if empty
//! start            u32      id of the start tile
//! tile_count times:
//!     value        2k^2 bytes
//!     images       4 x u32  west, north, south, east; u32::MAX if unset
//!     scaffolding  3 x u32  east, north, west; u32::MAX if none
//! checksum         u64      64-bit FNV-1a of the tile records
//! ```

use std::fs::File;
use std::hash::Hasher;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use fnv::FnvHasher;

use crate::ff::PrimeField;

use super::{TileId, TileShape, TileStore, TilingError, NO_TILE};

const MAGIC: &[u8; 4] = b"NWTS";
const VERSION: u32 = 1;

struct HashingWriter<W> {
    inner: W,
    hash: FnvHasher,
}

impl<W: Write> HashingWriter<W> {
    fn put(&mut self, bytes: &[u8]) -> io::Result<()> {
        self.hash.write(bytes);
        self.inner.write_all(bytes)
    }
}

pub fn write_checkpoint(store: &TileStore, out: impl Write) -> io::Result<()> {
    let mut out = BufWriter::new(out);
    out.write_all(MAGIC)?;
    out.write_all(&VERSION.to_le_bytes())?;
    out.write_all(&(store.field().modulus() as u32).to_le_bytes())?;
    out.write_all(&(store.shape().tile_length() as u32).to_le_bytes())?;
    out.write_all(&(store.len() as u64).to_le_bytes())?;
    out.write_all(&(store.frontier_cursor() as u64).to_le_bytes())?;
    out.write_all(&store.start().to_le_bytes())?;
    let mut body = HashingWriter {
        inner: out,
        hash: FnvHasher::default(),
    };
    for id in 0..store.len() as TileId {
        body.put(store.value(id))?;
        for image in store.image_slots(id) {
            body.put(&image.to_le_bytes())?;
        }
        for parent in store.scaffolding(id).unwrap_or([NO_TILE; 3]) {
            body.put(&parent.to_le_bytes())?;
        }
    }
    let checksum = body.hash.finish();
    let mut out = body.inner;
    out.write_all(&checksum.to_le_bytes())?;
    out.flush()
}

fn corrupt(msg: impl Into<String>) -> TilingError {
    TilingError::CorruptCheckpoint(msg.into())
}

fn read_exact(input: &mut impl Read, buf: &mut [u8]) -> Result<(), TilingError> {
    input.read_exact(buf).map_err(|e| match e.kind() {
        io::ErrorKind::UnexpectedEof => corrupt("file is truncated"),
        _ => TilingError::Io(e),
    })
}

fn read_u32(input: &mut impl Read) -> Result<u32, TilingError> {
    let mut b = [0; 4];
    read_exact(input, &mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64(input: &mut impl Read) -> Result<u64, TilingError> {
    let mut b = [0; 8];
    read_exact(input, &mut b)?;
    Ok(u64::from_le_bytes(b))
}

pub fn read_checkpoint(input: impl Read) -> Result<TileStore, TilingError> {
    let mut input = BufReader::new(input);
    let mut magic = [0; 4];
    read_exact(&mut input, &mut magic)?;
    if &magic != MAGIC {
        return Err(corrupt("bad magic"));
    }
    let version = read_u32(&mut input)?;
    if version != VERSION {
        return Err(corrupt(format!("unsupported version {version}")));
    }
    let field = PrimeField::new(read_u32(&mut input)?).map_err(|e| corrupt(e.to_string()))?;
    let shape =
        TileShape::new(read_u32(&mut input)? as usize).map_err(|e| corrupt(e.to_string()))?;
    let count = read_u64(&mut input)?;
    if count < 2 || count >= NO_TILE as u64 {
        return Err(corrupt(format!("tile count {count}")));
    }
    let cursor = read_u64(&mut input)?;
    let start = read_u32(&mut input)?;
    if start as u64 >= count {
        return Err(corrupt(format!("start tile {start}")));
    }
    let mut hash = FnvHasher::default();
    let mut store = TileStore::empty(field, shape, start);
    let mut value = vec![0; shape.size()];
    let mut ids = [0u8; 28];
    for _ in 0..count {
        read_exact(&mut input, &mut value)?;
        read_exact(&mut input, &mut ids)?;
        hash.write(&value);
        hash.write(&ids);
        if value.iter().any(|&v| v >= store.field().modulus()) {
            return Err(corrupt("tile entry outside the field"));
        }
        let id = |i: usize| -> Result<TileId, TilingError> {
            let id = u32::from_le_bytes(ids[4 * i..4 * i + 4].try_into().unwrap());
            if id != NO_TILE && id as u64 >= count {
                return Err(corrupt(format!("reference to missing tile {id}")));
            }
            Ok(id)
        };
        let images = [id(0)?, id(1)?, id(2)?, id(3)?];
        let scaffolding = [id(4)?, id(5)?, id(6)?];
        let expected = match store.len() {
            0 => Some(shape.sigma_neg()),
            1 => Some(shape.sigma_zero()),
            _ => None,
        };
        if expected.is_some_and(|e| e != value) {
            return Err(corrupt("built-in tiles are wrong"));
        }
        store.push_restored(&value, images, scaffolding)?;
    }
    if read_u64(&mut input)? != hash.finish() {
        return Err(corrupt("checksum mismatch"));
    }
    if input.read(&mut [0])? != 0 {
        return Err(corrupt("trailing bytes"));
    }
    store.rebuild_frontier();
    if store.frontier_cursor() as u64 != cursor {
        return Err(corrupt(format!(
            "frontier starts at {} but the header says {cursor}",
            store.frontier_cursor()
        )));
    }
    Ok(store)
}

/// Writes to a sibling temporary file first so that an interrupted save
/// leaves the previous checkpoint intact.
pub fn checkpoint_save(store: &TileStore, path: impl AsRef<Path>) -> Result<(), TilingError> {
    let path = path.as_ref();
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    write_checkpoint(store, File::create(&tmp)?)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

pub fn checkpoint_load(path: impl AsRef<Path>) -> Result<TileStore, TilingError> {
    read_checkpoint(File::open(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::paperfolding_level1;
    use crate::tiling::algorithm_1_1;

    fn sample() -> TileStore {
        algorithm_1_1(&paperfolding_level1(), &PrimeField::new(3).unwrap(), 8).unwrap()
    }

    fn bytes(store: &TileStore) -> Vec<u8> {
        let mut out = Vec::new();
        write_checkpoint(store, &mut out).unwrap();
        out
    }

    #[test]
    fn round_trip() {
        let store = sample();
        let raw = bytes(&store);
        assert_eq!(&raw[..4], b"NWTS");
        let back = read_checkpoint(&raw[..]).unwrap();
        assert_eq!(back, store);
        assert_eq!(bytes(&back), raw);
    }

    #[test]
    fn truncation_and_bit_flips_are_caught() {
        let raw = bytes(&sample());
        for cut in [0, 3, 20, 40, raw.len() / 2, raw.len() - 1] {
            assert!(matches!(
                read_checkpoint(&raw[..cut]),
                Err(TilingError::CorruptCheckpoint(_))
            ));
        }
        let mut flipped = raw.clone();
        flipped[40] ^= 1;
        assert!(matches!(
            read_checkpoint(&flipped[..]),
            Err(TilingError::CorruptCheckpoint(_))
        ));
        let mut longer = raw;
        longer.push(0);
        assert!(matches!(
            read_checkpoint(&longer[..]),
            Err(TilingError::CorruptCheckpoint(_))
        ));
    }
}
