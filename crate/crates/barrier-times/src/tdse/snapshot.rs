//! Compact binary container for density snapshots.
//!
//! Layout (all numbers little-endian):
//!
//! ```text
//! bytes 0..8   magic "BTWV0001"
//! u64          grid points per snapshot
//! f64          x_min
//! f64          dx
//! u64          number of snapshots
//! repeated     f64 time, then `points` f64 density values
//! ```

use std::io::{Read, Write};

use crate::error::{Error, Result};

pub const MAGIC: &[u8; 8] = b"BTWV0001";

/// Upper bound on the per-snapshot point count accepted when reading, to
/// fail fast on corrupt headers instead of attempting absurd allocations.
const MAX_POINTS: u64 = 1 << 28;

/// One recorded density profile.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    pub density: Vec<f64>,
}

/// A run's worth of snapshots on a fixed grid.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SnapshotSeries {
    pub x_min: f64,
    pub dx: f64,
    pub snapshots: Vec<Snapshot>,
}

impl SnapshotSeries {
    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    /// Serialize into the binary layout above.
    pub fn write_to<W: Write>(&self, sink: &mut W) -> Result<()> {
        let points = self.snapshots.first().map_or(0, |s| s.density.len());
        if let Some(bad) = self.snapshots.iter().find(|s| s.density.len() != points) {
            return Err(Error::Internal(format!(
                "snapshot at t = {} has {} points, expected {points}",
                bad.time,
                bad.density.len()
            )));
        }
        let io = |e: std::io::Error| Error::Internal(format!("snapshot write failed: {e}"));
        sink.write_all(MAGIC).map_err(io)?;
        sink.write_all(&(points as u64).to_le_bytes()).map_err(io)?;
        sink.write_all(&self.x_min.to_le_bytes()).map_err(io)?;
        sink.write_all(&self.dx.to_le_bytes()).map_err(io)?;
        sink.write_all(&(self.snapshots.len() as u64).to_le_bytes())
            .map_err(io)?;
        for snap in &self.snapshots {
            sink.write_all(&snap.time.to_le_bytes()).map_err(io)?;
            for &d in &snap.density {
                sink.write_all(&d.to_le_bytes()).map_err(io)?;
            }
        }
        Ok(())
    }

    /// Parse the binary layout back; rejects wrong magic or implausible
    /// headers.
    pub fn read_from<R: Read>(source: &mut R) -> Result<Self> {
        let io = |e: std::io::Error| Error::Config(format!("snapshot read failed: {e}"));
        let mut magic = [0u8; 8];
        source.read_exact(&mut magic).map_err(io)?;
        if &magic != MAGIC {
            return Err(Error::Config(format!(
                "not a snapshot file: magic {:02x?}",
                magic
            )));
        }
        let points = read_u64(source).map_err(io)?;
        if points > MAX_POINTS {
            return Err(Error::Config(format!(
                "snapshot header claims {points} points per profile"
            )));
        }
        let x_min = read_f64(source).map_err(io)?;
        let dx = read_f64(source).map_err(io)?;
        let count = read_u64(source).map_err(io)?;
        let mut snapshots = Vec::new();
        for _ in 0..count {
            let time = read_f64(source).map_err(io)?;
            let mut density = Vec::with_capacity(points as usize);
            for _ in 0..points {
                density.push(read_f64(source).map_err(io)?);
            }
            snapshots.push(Snapshot { time, density });
        }
        Ok(SnapshotSeries {
            x_min,
            dx,
            snapshots,
        })
    }
}

fn read_u64<R: Read>(source: &mut R) -> std::io::Result<u64> {
    let mut buf = [0u8; 8];
    source.read_exact(&mut buf)?;
    Ok(u64::from_le_bytes(buf))
}

fn read_f64<R: Read>(source: &mut R) -> std::io::Result<f64> {
    let mut buf = [0u8; 8];
    source.read_exact(&mut buf)?;
    Ok(f64::from_le_bytes(buf))
}
