use std::fs;
use std::path::Path;

use anyhow::{bail, Context};
use htube_core::algebra::HTypeAlgebra;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// An H-type algebra described by its structure maps, one row-major matrix
/// per orthonormal center basis vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraConfig {
    pub name: String,
    pub dim_v: usize,
    pub dim_z: usize,
    pub j_maps: Vec<Vec<Vec<f64>>>,
}

impl AlgebraConfig {
    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        serde_json::from_str(text).context("malformed algebra config")
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("in {}", path.display()))
    }

    /// Validates the maps and builds the algebra.
    pub fn build(&self) -> anyhow::Result<HTypeAlgebra> {
        let mut maps = Vec::with_capacity(self.j_maps.len());
        for (k, rows) in self.j_maps.iter().enumerate() {
            if rows.len() != self.dim_v || rows.iter().any(|r| r.len() != self.dim_v) {
                bail!("j_maps[{k}] is not a {0}x{0} matrix", self.dim_v);
            }
            maps.push(DMatrix::from_fn(self.dim_v, self.dim_v, |i, j| rows[i][j]));
        }
        Ok(HTypeAlgebra::custom(self.dim_v, self.dim_z, maps)?)
    }

    pub fn from_algebra(name: &str, alg: &HTypeAlgebra) -> Self {
        Self {
            name: name.to_string(),
            dim_v: alg.dim_v(),
            dim_z: alg.dim_z(),
            j_maps: alg
                .j_maps()
                .iter()
                .map(|m| m.row_iter().map(|r| r.iter().copied().collect()).collect())
                .collect(),
        }
    }
}
