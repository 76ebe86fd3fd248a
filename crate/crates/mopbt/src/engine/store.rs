//! In-memory checkpoint store with per-slot locking.

use std::path::Path;
use std::sync::RwLock;

use crate::task::Checkpoint;
use crate::{Error, Result};

/// One slot per population member. Distinct slots can be read and written
/// concurrently; each write is exclusive for its slot only.
pub struct CheckpointStore {
    slots: Vec<RwLock<Checkpoint>>,
}

impl CheckpointStore {
    pub fn new(initial: Vec<Checkpoint>) -> Self {
        CheckpointStore { slots: initial.into_iter().map(RwLock::new).collect() }
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// Snapshot of the bytes in `id`'s slot.
    pub fn read(&self, id: usize) -> Checkpoint {
        self.slots[id].read().expect("checkpoint lock poisoned").clone()
    }

    pub fn write(&self, id: usize, ckpt: Checkpoint) {
        *self.slots[id].write().expect("checkpoint lock poisoned") = ckpt;
    }

    /// Copies `donor`'s current bytes over `loser`'s slot. The donor lock is
    /// released before the loser lock is taken, so concurrent copies cannot
    /// deadlock.
    pub fn copy(&self, donor: usize, loser: usize) {
        let bytes = self.read(donor);
        self.write(loser, bytes);
    }

    /// Writes every slot to `<dir>/<id>.bin`.
    pub fn persist(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        for (id, slot) in self.slots.iter().enumerate() {
            let ckpt = slot.read().expect("checkpoint lock poisoned");
            std::fs::write(dir.join(format!("{id}.bin")), ckpt.as_bytes())
                .map_err(Error::from)?;
        }
        Ok(())
    }
}
