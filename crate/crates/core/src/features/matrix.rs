use crate::{Error, Result};

/// Channel vectors zero-padded to the longest one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaddedFeatureMatrix {
    pub rows: Vec<Vec<u8>>,
    pub l_max: usize,
}

impl PaddedFeatureMatrix {
    pub fn row_f64(&self, i: usize) -> Vec<f64> {
        self.rows[i].iter().map(|&x| f64::from(x)).collect()
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.rows.len()).map(|i| self.row_f64(i)).collect()
    }
}

pub fn pad_matrix<V: AsRef<[u8]>>(vectors: &[V]) -> Result<PaddedFeatureMatrix> {
    let l_max = vectors
        .iter()
        .map(|v| v.as_ref().len())
        .max()
        .ok_or(Error::NoBursts)?;
    let rows = vectors
        .iter()
        .map(|v| {
            let mut row = v.as_ref().to_vec();
            row.resize(l_max, 0);
            row
        })
        .collect();
    Ok(PaddedFeatureMatrix { rows, l_max })
}
