use serde::{Deserialize, Serialize};

use super::decoration::{Decoration, DecorationLandmarks};
use super::domain::PlanarDomain;
use super::primitives::{Polygon, Polyline};
use crate::error::{Error, Result};

/// Interchange form of a [`PlanarDomain`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainFile {
    pub outer: Vec<Polygon>,
    #[serde(default)]
    pub holes: Vec<Polygon>,
    #[serde(default)]
    pub slits: Vec<Polyline>,
    #[serde(default)]
    pub landmarks: Vec<DecorationLandmarks>,
}

impl From<&PlanarDomain> for DomainFile {
    fn from(d: &PlanarDomain) -> Self {
        DomainFile {
            outer: d.outer().to_vec(),
            holes: d.holes().to_vec(),
            slits: d.slits().to_vec(),
            landmarks: d.landmarks(),
        }
    }
}

impl DomainFile {
    pub fn into_domain(self) -> Result<PlanarDomain> {
        let decorations = self
            .landmarks
            .iter()
            .map(|l| Decoration::new(l.spec.clone()))
            .collect::<Result<Vec<_>>>()?;
        for (d, l) in decorations.iter().zip(&self.landmarks) {
            if &d.landmarks() != l {
                return Err(Error::Parse(format!("landmarks of decoration {} do not match its parameters", d.j())));
            }
        }
        PlanarDomain::with_decorations(self.outer, self.holes, self.slits, decorations)
    }
}

pub fn domain_to_json(d: &PlanarDomain) -> String {
    crate::json::to_string(&DomainFile::from(d))
}

pub fn domain_from_json(s: &str) -> Result<PlanarDomain> {
    let f: DomainFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    f.into_domain()
}
