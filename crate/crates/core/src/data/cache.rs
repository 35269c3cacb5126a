//! Binary dataset cache in the tensor container format.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use super::{Dataset, Scaling, Split};
use crate::nncore::Matrix;
use crate::tensor_io::{read_tensors, write_tensors};
use crate::{Error, Result};

pub const DATASET_MAGIC: &[u8; 8] = b"AUXITDAT";

pub fn save_dataset(dataset: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let n = dataset.len();
    let d = dataset.input_dim();
    let labels = Matrix::from_vec(n, 1, dataset.labels.iter().map(|&y| y as f64).collect())?;
    let split = match dataset.split {
        Split::Train => 0.0,
        Split::Test => 1.0,
    };
    let meta = Matrix::from_vec(1, 2, vec![dataset.classes as f64, split])?;
    let scaling = match &dataset.scaling {
        Some(s) => Matrix::from_vec(2, d, s.min.iter().chain(&s.max).copied().collect())?,
        None => Matrix::zeros(0, d),
    };
    let w = BufWriter::new(File::create(path)?);
    write_tensors(w, DATASET_MAGIC, &[&dataset.inputs, &labels, &meta, &scaling])
}

pub fn load_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    let tensors = read_tensors(BufReader::new(File::open(path)?), DATASET_MAGIC)?;
    let [inputs, labels, meta, scaling]: [Matrix; 4] = tensors
        .try_into()
        .map_err(|t: Vec<Matrix>| Error::Format(format!("dataset cache holds {} tensors, expected 4", t.len())))?;
    if labels.cols() != 1 || meta.shape() != (1, 2) {
        return Err(Error::Format("malformed dataset cache header tensors".into()));
    }
    let as_index = |v: f64| -> Result<usize> {
        if v >= 0.0 && v.fract() == 0.0 && v < 2f64.powi(53) {
            Ok(v as usize)
        } else {
            Err(Error::Format(format!("expected a non-negative integer, found {v}")))
        }
    };
    let labels = labels.as_slice().iter().map(|&v| as_index(v)).collect::<Result<Vec<_>>>()?;
    let classes = as_index(meta.get(0, 0))?;
    let split = match meta.get(0, 1) {
        0.0 => Split::Train,
        1.0 => Split::Test,
        v => return Err(Error::Format(format!("unknown split tag {v}"))),
    };
    let d = inputs.cols();
    let mut dataset = Dataset::new(inputs, labels, classes, split)?;
    dataset.scaling = match scaling.rows() {
        0 => None,
        2 if scaling.cols() == d => Some(Scaling {
            min: scaling.row(0).to_vec(),
            max: scaling.row(1).to_vec(),
        }),
        _ => return Err(Error::Format(format!("bad scaling tensor shape {:?}", scaling.shape()))),
    };
    Ok(dataset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{scale_unit, synth_blobs};

    #[test]
    fn round_trip_with_and_without_scaling() {
        let dir = tempfile::tempdir().unwrap();
        let (tr, te) = synth_blobs(3, 5, &[6, 7, 8], 0.3, 11).unwrap();
        let (str_, ste) = scale_unit(&tr, &te).unwrap();
        for (i, d) in [tr, te, str_, ste].into_iter().enumerate() {
            let path = dir.path().join(format!("{i}.bin"));
            save_dataset(&d, &path).unwrap();
            assert_eq!(load_dataset(&path).unwrap(), d);
        }
    }

    #[test]
    fn rejects_foreign_magic() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.bin");
        let m = Matrix::zeros(1, 1);
        write_tensors(File::create(&path).unwrap(), b"OTHERFMT", &[&m]).unwrap();
        assert!(load_dataset(&path).is_err());
    }
}
