use super::{Dataset, Scaling};
use crate::nncore::Matrix;
use crate::{Error, Result};

/// Per-feature min-max scaling fitted on `train` and applied to both splits.
///
/// Training entries land in `[0, 1]`; test entries are mapped by the same
/// affine transform and are not clipped. Constant training features map to 0.
pub fn scale_unit(train: &Dataset, test: &Dataset) -> Result<(Dataset, Dataset)> {
    if train.input_dim() != test.input_dim() {
        return Err(Error::ShapeMismatch {
            op: "scale_unit",
            left: train.inputs.shape(),
            right: test.inputs.shape(),
        });
    }
    let fitted = fit_scaling(&train.inputs);
    let scaling = match &train.scaling {
        Some(prev) => compose(prev, &fitted),
        None => fitted.clone(),
    };
    let mut out_train = train.clone();
    let mut out_test = test.clone();
    apply_scaling(&mut out_train.inputs, &fitted);
    apply_scaling(&mut out_test.inputs, &fitted);
    out_train.scaling = Some(scaling.clone());
    out_test.scaling = Some(scaling);
    Ok((out_train, out_test))
}

pub fn fit_scaling(inputs: &Matrix) -> Scaling {
    let d = inputs.cols();
    if inputs.rows() == 0 {
        return Scaling {
            min: vec![0.0; d],
            max: vec![0.0; d],
        };
    }
    let mut min = vec![f64::INFINITY; d];
    let mut max = vec![f64::NEG_INFINITY; d];
    for row in inputs.row_iter() {
        for (j, &v) in row.iter().enumerate() {
            min[j] = min[j].min(v);
            max[j] = max[j].max(v);
        }
    }
    Scaling { min, max }
}

pub fn apply_scaling(inputs: &mut Matrix, scaling: &Scaling) {
    for i in 0..inputs.rows() {
        let row = inputs.row_mut(i);
        for ((v, &lo), &hi) in row.iter_mut().zip(&scaling.min).zip(&scaling.max) {
            *v = if hi > lo { (*v - lo) / (hi - lo) } else { 0.0 };
        }
    }
}

/// Metadata of `second ∘ first`, expressed against the original raw features.
fn compose(first: &Scaling, second: &Scaling) -> Scaling {
    let mut out = first.clone();
    for j in 0..first.min.len() {
        if second.min[j] == 0.0 && second.max[j] == 1.0 {
            continue;
        }
        let range = first.max[j] - first.min[j];
        let lo = first.min[j] + second.min[j] * range;
        out.min[j] = lo;
        out.max[j] = lo + (second.max[j] - second.min[j]) * range;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Split;

    fn ds(rows: &[[f64; 2]], split: Split) -> Dataset {
        Dataset::new(Matrix::from_rows(rows).unwrap(), vec![0; rows.len()], 1, split).unwrap()
    }

    #[test]
    fn pixel_range_maps_to_unit() {
        let train = ds(&[[0.0, 5.0], [255.0, 5.0], [127.5, 5.0]], Split::Train);
        let test = ds(&[[510.0, 9.0], [-255.0, 5.0]], Split::Test);
        let (tr, te) = scale_unit(&train, &test).unwrap();
        assert_eq!(tr.inputs.row(1), &[1.0, 0.0]);
        assert_eq!(tr.inputs.row(2), &[0.5, 0.0]);
        assert_eq!(te.inputs.row(0), &[2.0, 0.0]);
        assert_eq!(te.inputs.row(1), &[-1.0, 0.0]);
        let s = tr.scaling.as_ref().unwrap();
        assert_eq!(s.min, vec![0.0, 5.0]);
        assert_eq!(s.max, vec![255.0, 5.0]);
        assert_eq!(te.scaling, tr.scaling);
    }

    #[test]
    fn second_pass_is_identity() {
        let train = ds(&[[3.0, -1.0], [7.0, 2.5], [4.1, 0.3]], Split::Train);
        let test = ds(&[[9.0, 0.0]], Split::Test);
        let once = scale_unit(&train, &test).unwrap();
        let twice = scale_unit(&once.0, &once.1).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn dimension_mismatch() {
        let train = ds(&[[1.0, 2.0]], Split::Train);
        let test = Dataset::new(Matrix::zeros(1, 3), vec![0], 1, Split::Test).unwrap();
        assert!(scale_unit(&train, &test).is_err());
    }
}
