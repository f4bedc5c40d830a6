//! Serde adapters for the JSON wire formats: vectors are plain arrays of
//! doubles, matrices are `{rows, cols, data}` with row-major `data`.

pub mod vector {
    use ndarray::Array1;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Array1<f64>, ser: S) -> Result<S::Ok, S::Error> {
        v.as_slice()
            .expect("contiguous vector")
            .serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Array1<f64>, D::Error> {
        let data = Vec::<f64>::deserialize(de)?;
        Ok(Array1::from_vec(data))
    }
}

pub mod matrix {
    use ndarray::Array2;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct MatrixRepr {
        rows: usize,
        cols: usize,
        data: Vec<f64>,
    }

    pub fn serialize<S: Serializer>(m: &Array2<f64>, ser: S) -> Result<S::Ok, S::Error> {
        let repr = MatrixRepr {
            rows: m.nrows(),
            cols: m.ncols(),
            data: m.iter().copied().collect(),
        };
        repr.serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Array2<f64>, D::Error> {
        let repr = MatrixRepr::deserialize(de)?;
        if repr.data.len() != repr.rows * repr.cols {
            return Err(serde::de::Error::custom(format!(
                "matrix data length {} does not match {}x{}",
                repr.data.len(),
                repr.rows,
                repr.cols
            )));
        }
        Array2::from_shape_vec((repr.rows, repr.cols), repr.data)
            .map_err(serde::de::Error::custom)
    }
}
