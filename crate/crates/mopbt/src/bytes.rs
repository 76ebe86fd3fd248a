//! Little-endian byte (de)serialization for task checkpoints.

use crate::{Error, Result};

/// Appends fixed-width little-endian values to a byte buffer.
pub struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    pub fn with_version(version: u8) -> Self {
        Self { buf: vec![version] }
    }

    pub fn u64(&mut self, v: u64) -> &mut Self {
        self.buf.extend_from_slice(&v.to_le_bytes());
        self
    }

    pub fn f64(&mut self, v: f64) -> &mut Self {
        self.buf.extend_from_slice(&v.to_le_bytes());
        self
    }

    pub fn finish(self) -> Vec<u8> {
        self.buf
    }
}

/// Reads fixed-width little-endian values from a byte slice.
pub struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    /// Starts reading and checks the leading version byte.
    pub fn expect_version(buf: &'a [u8], version: u8) -> Result<Self> {
        let mut r = Self { buf, pos: 0 };
        let found = r.u8()?;
        if found != version {
            return Err(Error::Task(format!(
                "checkpoint version {found} but this task writes version {version}"
            )));
        }
        Ok(r)
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.buf.len() {
            return Err(Error::Task("checkpoint truncated".into()));
        }
        let slice = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(slice)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    pub fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    pub fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    /// Fails unless every byte has been consumed.
    pub fn finish(self) -> Result<()> {
        if self.pos != self.buf.len() {
            return Err(Error::Task("checkpoint has trailing bytes".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut w = Writer::with_version(3);
        w.f64(1.5).u64(42);
        let bytes = w.finish();
        let mut r = Reader::expect_version(&bytes, 3).unwrap();
        assert_eq!(r.f64().unwrap(), 1.5);
        assert_eq!(r.u64().unwrap(), 42);
        r.finish().unwrap();
    }

    #[test]
    fn version_mismatch_is_rejected() {
        let bytes = Writer::with_version(1).finish();
        assert!(Reader::expect_version(&bytes, 2).is_err());
    }

    #[test]
    fn truncation_and_trailing_bytes_are_rejected() {
        let mut w = Writer::with_version(1);
        w.u64(9);
        let bytes = w.finish();

        let mut r = Reader::expect_version(&bytes[..5], 1).unwrap();
        assert!(r.u64().is_err());

        let r = Reader::expect_version(&bytes, 1).unwrap();
        assert!(r.finish().is_err());
    }
}
