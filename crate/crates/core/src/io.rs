//! Map files: `{"model", "source_dim", "target_dim", "components", "denominator"}`
//! with optional `"base_point"` (sphere sources) and `"target_model"` (when
//! the two sides use different models).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypersurface::{CRMap, ModelKind};
use crate::poly::{Poly, RatTuple};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapFile {
    pub model: ModelKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_model: Option<ModelKind>,
    pub source_dim: usize,
    pub target_dim: usize,
    pub components: Vec<Poly>,
    pub denominator: Poly,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_point: Option<[Scalar; 2]>,
}

impl From<&CRMap> for MapFile {
    fn from(h: &CRMap) -> Self {
        MapFile {
            model: h.source,
            target_model: (h.target != h.source).then_some(h.target),
            source_dim: 2,
            target_dim: h.target_dim(),
            components: h.numerators().to_vec(),
            denominator: h.denominator().clone(),
            base_point: h.base_point.clone(),
        }
    }
}

impl TryFrom<MapFile> for CRMap {
    type Error = Error;

    fn try_from(f: MapFile) -> Result<CRMap> {
        if f.source_dim != 2 {
            return Err(Error::DimensionMismatch(format!(
                "source_dim must be 2, got {}",
                f.source_dim
            )));
        }
        if f.components.len() != f.target_dim {
            return Err(Error::DimensionMismatch(format!(
                "target_dim is {} but {} components are given",
                f.target_dim,
                f.components.len()
            )));
        }
        let target = f.target_model.unwrap_or(f.model);
        let mut h = CRMap::new(f.model, target, RatTuple::new(f.components, f.denominator))?;
        if let Some(p) = f.base_point {
            h = h.with_base_point(p);
        }
        Ok(h)
    }
}

pub fn map_to_json(h: &CRMap) -> String {
    serde_json::to_string_pretty(&MapFile::from(h)).expect("map files serialize")
}

pub fn map_from_json(src: &str) -> Result<CRMap> {
    let f: MapFile = serde_json::from_str(src).map_err(|e| Error::Parse(e.to_string()))?;
    CRMap::try_from(f)
}

pub fn read_map(path: &Path) -> Result<CRMap> {
    let src = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    map_from_json(&src)
}

pub fn write_map(path: &Path, h: &CRMap) -> Result<()> {
    std::fs::write(path, map_to_json(h) + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::explicit_map;
    use crate::hypersurface::{cayley, CayleyDirection, Side};

    #[test]
    fn round_trip() {
        for name in ["h1n", "f24"] {
            let h = explicit_map(name, 5).unwrap();
            let back = map_from_json(&map_to_json(&h)).unwrap();
            assert_eq!(back, h);
        }
        let mixed = cayley(&explicit_map("f24", 4).unwrap(), CayleyDirection::SphereToHeisenberg, Side::Target).unwrap();
        assert_eq!(map_from_json(&map_to_json(&mixed)).unwrap(), mixed);
    }

    #[test]
    fn literal_format() {
        let src = r#"{"model":"heisenberg","source_dim":2,"target_dim":2,
            "components":[[{"e":[1,0,0,0],"c":"1"}],[{"e":[0,1,0,0],"c":"1"}]],
            "denominator":[{"e":[0,0,0,0],"c":"1"}]}"#;
        let h = map_from_json(src).unwrap();
        assert_eq!(h.target_dim(), 2);
        let bad = src.replace("\"target_dim\":2", "\"target_dim\":3");
        assert!(matches!(map_from_json(&bad), Err(Error::DimensionMismatch(_))));
        assert!(matches!(map_from_json("{"), Err(Error::Parse(_))));
    }
}
