//! Portable binary container for lists of 2-D tensors.
//!
//! Layout: an 8-byte magic tag, `u32` format version, `u32` tensor count, then
//! per tensor `u64` rows, `u64` cols and `rows·cols` `f64` values. All integers
//! and reals are little-endian.

use std::io::{Read, Write};

use crate::nncore::Matrix;
use crate::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

pub fn write_tensors<W: Write>(mut w: W, magic: &[u8; 8], tensors: &[&Matrix]) -> Result<()> {
    w.write_all(magic)?;
    w.write_all(&FORMAT_VERSION.to_le_bytes())?;
    w.write_all(&(tensors.len() as u32).to_le_bytes())?;
    for t in tensors {
        w.write_all(&(t.rows() as u64).to_le_bytes())?;
        w.write_all(&(t.cols() as u64).to_le_bytes())?;
        for v in t.as_slice() {
            w.write_all(&v.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_tensors<R: Read>(mut r: R, magic: &[u8; 8]) -> Result<Vec<Matrix>> {
    let mut tag = [0u8; 8];
    read_exact(&mut r, &mut tag)?;
    if &tag != magic {
        return Err(Error::Format(format!(
            "expected magic {:?}, found {:?}",
            String::from_utf8_lossy(magic),
            String::from_utf8_lossy(&tag)
        )));
    }
    let version = read_u32(&mut r)?;
    if version != FORMAT_VERSION {
        return Err(Error::Format(format!("unsupported format version {version}")));
    }
    let count = read_u32(&mut r)? as usize;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let rows = read_u64(&mut r)? as usize;
        let cols = read_u64(&mut r)? as usize;
        let len = rows
            .checked_mul(cols)
            .ok_or_else(|| Error::Format(format!("tensor shape {rows}x{cols} overflows")))?;
        let mut data = Vec::with_capacity(len.min(1 << 24));
        let mut buf = [0u8; 8];
        for _ in 0..len {
            read_exact(&mut r, &mut buf)?;
            data.push(f64::from_le_bytes(buf));
        }
        out.push(Matrix::from_vec(rows, cols, data)?);
    }
    let mut trailing = [0u8; 1];
    if r.read(&mut trailing)? != 0 {
        return Err(Error::Format("trailing bytes after last tensor".into()));
    }
    Ok(out)
}

fn read_exact<R: Read>(r: &mut R, buf: &mut [u8]) -> Result<()> {
    r.read_exact(buf).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => Error::Format("unexpected end of file".into()),
        _ => Error::Io(e),
    })
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    read_exact(r, &mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    read_exact(r, &mut b)?;
    Ok(u64::from_le_bytes(b))
}
