//! IDX (MNIST distribution format) reader.
//!
//! Header integers are big-endian `u32`; pixels and labels are unsigned bytes.

use std::path::Path;

use super::{Dataset, Split};
use crate::nncore::Matrix;
use crate::{Error, Result};

pub const IDX_IMAGES_MAGIC: u32 = 0x0000_0803;
pub const IDX_LABELS_MAGIC: u32 = 0x0000_0801;

/// Loads an image/label file pair. Pixels become reals in `0..=255`; labels are
/// the class indices, with `K = max label + 1`.
pub fn load_idx(images_path: impl AsRef<Path>, labels_path: impl AsRef<Path>, split: Split) -> Result<Dataset> {
    let images_path = images_path.as_ref();
    let labels_path = labels_path.as_ref();
    let images = std::fs::read(images_path)?;
    let labels = std::fs::read(labels_path)?;
    parse_idx(&images, &labels, &images_path.display().to_string(), &labels_path.display().to_string(), split)
}

pub fn parse_idx(images: &[u8], labels: &[u8], images_name: &str, labels_name: &str, split: Split) -> Result<Dataset> {
    let (count, dims, pixels) = parse_payload(images, IDX_IMAGES_MAGIC, 3, images_name)?;
    let (label_count, _, label_bytes) = parse_payload(labels, IDX_LABELS_MAGIC, 1, labels_name)?;
    if count != label_count {
        return Err(Error::IdxCountMismatch {
            images: count,
            labels: label_count,
        });
    }
    let dim = dims[1] * dims[2];
    let data = pixels.iter().map(|&b| f64::from(b)).collect();
    let inputs = Matrix::from_vec(count, dim, data)?;
    let labels: Vec<usize> = label_bytes.iter().map(|&b| usize::from(b)).collect();
    let classes = labels.iter().max().map_or(0, |m| m + 1);
    Dataset::new(inputs, labels, classes, split)
}

/// Returns the item count, the dimension sizes, and the payload bytes.
fn parse_payload<'a>(bytes: &'a [u8], magic: u32, ndims: usize, name: &str) -> Result<(usize, Vec<usize>, &'a [u8])> {
    let header_len = 4 + 4 * ndims;
    let truncated = |expected: usize| Error::IdxTruncated {
        path: name.to_string(),
        expected,
        found: bytes.len(),
    };
    if bytes.len() < 4 {
        return Err(truncated(header_len));
    }
    let found = be_u32(&bytes[0..4]);
    if found != magic {
        return Err(Error::IdxBadMagic {
            path: name.to_string(),
            expected: magic,
            found,
        });
    }
    if bytes.len() < header_len {
        return Err(truncated(header_len));
    }
    let dims: Vec<usize> = (0..ndims)
        .map(|i| be_u32(&bytes[4 + 4 * i..8 + 4 * i]) as usize)
        .collect();
    let payload_len: usize = dims.iter().product();
    let expected = header_len + payload_len;
    if bytes.len() < expected {
        return Err(truncated(expected));
    }
    if bytes.len() > expected {
        return Err(Error::Format(format!(
            "{name}: {} trailing bytes after IDX payload",
            bytes.len() - expected
        )));
    }
    Ok((dims[0], dims, &bytes[header_len..]))
}

fn be_u32(b: &[u8]) -> u32 {
    u32::from_be_bytes([b[0], b[1], b[2], b[3]])
}
