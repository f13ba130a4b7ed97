//! JSON molecule documents.
//!
//! ```json
//! {
//!   "name": "pna",
//!   "units": { "energy": "eV", "dipole": "debye" },
//!   "levels": [ { "energy": 0, "width": 0 }, { "energy": 4.2, "width": 0.1 } ],
//!   "dipoles": { "0,0": [6.2, 0, 0], "0,1": [5.1, 0, 0], "1,1": [15.0, 0, 0] }
//! }
//! ```
//!
//! Pairs are keyed `"r,s"`; omitted pairs are zero and the `"s,r"` partner is
//! implied. Giving both orders is allowed as long as they agree.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::units::{DipoleUnit, EnergyUnit};
use super::{DipoleMatrix, MolecularModel, Vec3};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitsSpec {
    #[serde(default)]
    pub energy: EnergyUnit,
    #[serde(default)]
    pub dipole: DipoleUnit,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelSpec {
    pub energy: f64,
    #[serde(default)]
    pub width: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoleculeDocument {
    pub name: String,
    #[serde(default)]
    pub units: UnitsSpec,
    pub levels: Vec<LevelSpec>,
    #[serde(default)]
    pub dipoles: BTreeMap<String, [f64; 3]>,
}

fn parse_pair(key: &str, levels: usize) -> Result<(usize, usize)> {
    let bad = || Error::Parse(format!("dipole key {key:?} is not of the form \"r,s\""));
    let (a, b) = key.split_once(',').ok_or_else(bad)?;
    let r: usize = a.trim().parse().map_err(|_| bad())?;
    let s: usize = b.trim().parse().map_err(|_| bad())?;
    if r >= levels || s >= levels {
        return Err(Error::Parse(format!(
            "dipole key {key:?} refers to a level outside 0..{levels}"
        )));
    }
    Ok((r, s))
}

impl MoleculeDocument {
    /// Converts to an internal (atomic unit, standard representation) model.
    pub fn to_model(&self) -> Result<MolecularModel> {
        let n = self.levels.len();
        if n == 0 {
            return Err(Error::InvalidModel("missing ground level".into()));
        }
        let eu = self.units.energy;
        let du = self.units.dipole;
        let energies = self.levels.iter().map(|l| eu.to_hartree(l.energy)).collect();
        let widths = self.levels.iter().map(|l| eu.to_hartree(l.width)).collect();

        let mut seen = vec![false; n * n];
        let mut dipoles = DipoleMatrix::zeros(n);
        for (key, v) in &self.dipoles {
            let (r, s) = parse_pair(key, n)?;
            if seen[r * n + s] {
                return Err(Error::Parse(format!("duplicate dipole entry for pair {r},{s}")));
            }
            seen[r * n + s] = true;
            let v = Vec3::new(du.to_au(v[0]), du.to_au(v[1]), du.to_au(v[2]));
            dipoles.set_entry(r, s, v);
            if !seen[s * n + r] {
                dipoles.set_entry(s, r, v);
            }
        }
        MolecularModel::new(self.name.clone(), energies, widths, dipoles)
    }

    /// Writes a model out in the requested units, listing every nonzero
    /// upper-triangle pair. Fluctuation models are written with their shifted
    /// moments; the document format itself carries no representation flag.
    pub fn from_model(m: &MolecularModel, units: UnitsSpec) -> Self {
        let eu = units.energy;
        let du = units.dipole;
        let levels = (0..m.levels())
            .map(|r| LevelSpec {
                energy: eu.from_hartree(m.energy(r)),
                width: eu.from_hartree(m.width(r)),
            })
            .collect();
        let mut dipoles = BTreeMap::new();
        for r in 0..m.levels() {
            for s in r..m.levels() {
                let v = m.dipole(r, s);
                if *v != Vec3::zeros() {
                    dipoles.insert(format!("{r},{s}"), [du.from_au(v.x), du.from_au(v.y), du.from_au(v.z)]);
                }
            }
        }
        Self {
            name: m.label().to_string(),
            units,
            levels,
            dipoles,
        }
    }
}

/// Parses and validates a molecule document.
pub fn load_model(document: &str) -> Result<MolecularModel> {
    let doc: MoleculeDocument = serde_json::from_str(document)?;
    doc.to_model()
}

/// Same as [`load_model`] for an already-parsed JSON value.
pub fn load_model_value(value: serde_json::Value) -> Result<MolecularModel> {
    let doc: MoleculeDocument = serde_json::from_value(value)?;
    doc.to_model()
}
