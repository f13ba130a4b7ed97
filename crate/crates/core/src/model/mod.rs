//! Molecular level data: energies, damping widths and the dipole matrix.

mod file;
pub mod random;
pub mod units;

use std::fmt;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use file::{load_model, load_model_value, LevelSpec, MoleculeDocument, UnitsSpec};
pub use units::Constants;

/// Largest tolerated |mu_rs - mu_sr| component on input.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;
/// Tolerance on R^T R = 1 and det R = 1.
pub const ROTATION_TOLERANCE: f64 = 1e-12;

pub type Vec3 = Vector3<f64>;

/// Which dipole operator the model carries.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    /// Full moments, permanent ground dipole included.
    #[default]
    Standard,
    /// Moments with the ground-state permanent dipole subtracted from every
    /// diagonal element.
    Fluctuation,
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Representation::Standard => f.write_str("standard"),
            Representation::Fluctuation => f.write_str("fluctuation"),
        }
    }
}

/// Square matrix of dipole 3-vectors indexed by level pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct DipoleMatrix {
    levels: usize,
    data: Vec<Vec3>,
}

impl DipoleMatrix {
    pub fn zeros(levels: usize) -> Self {
        Self {
            levels,
            data: vec![Vec3::zeros(); levels * levels],
        }
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn get(&self, r: usize, s: usize) -> &Vec3 {
        &self.data[r * self.levels + s]
    }

    /// Sets `mu_rs` only; the partner `mu_sr` is left alone.
    pub fn set_entry(&mut self, r: usize, s: usize, v: Vec3) {
        self.data[r * self.levels + s] = v;
    }

    /// Sets `mu_rs` and `mu_sr` together.
    pub fn set(&mut self, r: usize, s: usize, v: Vec3) {
        self.set_entry(r, s, v);
        self.set_entry(s, r, v);
    }

    pub fn with(mut self, r: usize, s: usize, v: [f64; 3]) -> Self {
        self.set(r, s, Vec3::from(v));
        self
    }

    fn map(&self, f: impl Fn(usize, usize, &Vec3) -> Vec3) -> Self {
        let n = self.levels;
        let data = (0..n * n).map(|idx| f(idx / n, idx % n, &self.data[idx])).collect();
        Self { levels: n, data }
    }

    /// Largest component-wise asymmetry and where it occurs.
    fn max_asymmetry(&self) -> (usize, usize, f64) {
        let mut worst = (0, 0, 0.0);
        for r in 0..self.levels {
            for s in r + 1..self.levels {
                let d = (self.get(r, s) - self.get(s, r)).amax();
                if d > worst.2 || d.is_nan() {
                    worst = (r, s, d);
                }
            }
        }
        worst
    }
}

/// Level energies (relative to the ground state), widths and dipole moments
/// of one molecule, in atomic units. Immutable once constructed.
#[derive(Clone, Debug, PartialEq)]
pub struct MolecularModel {
    label: String,
    energies: Vec<f64>,
    widths: Vec<f64>,
    dipoles: DipoleMatrix,
    representation: Representation,
}

impl MolecularModel {
    /// Builds a standard-representation model, validating every invariant.
    pub fn new(label: impl Into<String>, energies: Vec<f64>, widths: Vec<f64>, dipoles: DipoleMatrix) -> Result<Self> {
        Self::with_representation(label, energies, widths, dipoles, Representation::Standard)
    }

    /// Like [`MolecularModel::new`] but with the representation given
    /// explicitly; a fluctuation model must have a zero ground dipole.
    pub fn with_representation(
        label: impl Into<String>,
        energies: Vec<f64>,
        widths: Vec<f64>,
        dipoles: DipoleMatrix,
        representation: Representation,
    ) -> Result<Self> {
        let n = energies.len();
        if n == 0 {
            return Err(Error::InvalidModel("missing ground level".into()));
        }
        if widths.len() != n {
            return Err(Error::InvalidModel(format!(
                "{} widths given for {} levels",
                widths.len(),
                n
            )));
        }
        if dipoles.levels() != n {
            return Err(Error::InvalidModel(format!(
                "dipole matrix has {} levels, model has {}",
                dipoles.levels(),
                n
            )));
        }
        if energies[0] != 0.0 {
            return Err(Error::InvalidModel(format!(
                "ground level energy must be 0, got {}",
                energies[0]
            )));
        }
        for (r, &e) in energies.iter().enumerate().skip(1) {
            if !e.is_finite() || e <= 0.0 {
                return Err(Error::InvalidModel(format!(
                    "negative or zero excitation energy {e} at level {r}"
                )));
            }
            if e < energies[r - 1] {
                return Err(Error::InvalidModel(format!(
                    "non-monotone excitation energies at level {r}"
                )));
            }
        }
        for (r, &w) in widths.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidModel(format!("negative width {w} at level {r}")));
            }
        }
        if widths[0] != 0.0 {
            return Err(Error::InvalidModel("ground level width must be 0".into()));
        }
        if dipoles.data.iter().any(|v| !v.iter().all(|x| x.is_finite())) {
            return Err(Error::InvalidModel("non-finite dipole moment".into()));
        }
        let (r, s, deviation) = dipoles.max_asymmetry();
        if deviation > SYMMETRY_TOLERANCE {
            return Err(Error::AsymmetricDipoles { r, s, deviation });
        }
        // Within tolerance: store the exact average so mu_rs == mu_sr.
        let dipoles = dipoles.map(|r, s, v| {
            if r > s {
                0.5 * (dipoles.get(s, r) + v)
            } else if r < s {
                0.5 * (v + dipoles.get(s, r))
            } else {
                *v
            }
        });
        if representation == Representation::Fluctuation && *dipoles.get(0, 0) != Vec3::zeros() {
            return Err(Error::InvalidModel(
                "fluctuation representation requires a zero ground-state dipole".into(),
            ));
        }
        Ok(Self {
            label: label.into(),
            energies,
            widths,
            dipoles,
            representation,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn levels(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn energy(&self, r: usize) -> f64 {
        self.energies[r]
    }

    pub fn widths(&self) -> &[f64] {
        &self.widths
    }

    pub fn width(&self, r: usize) -> f64 {
        self.widths[r]
    }

    pub fn dipoles(&self) -> &DipoleMatrix {
        &self.dipoles
    }

    pub fn dipole(&self, r: usize, s: usize) -> &Vec3 {
        self.dipoles.get(r, s)
    }

    pub fn ground_dipole(&self) -> &Vec3 {
        self.dipoles.get(0, 0)
    }

    pub fn representation(&self) -> Representation {
        self.representation
    }

    /// Same model with damping widths replaced.
    pub fn with_widths(&self, widths: Vec<f64>) -> Result<Self> {
        Self::with_representation(
            self.label.clone(),
            self.energies.clone(),
            widths,
            self.dipoles.clone(),
            self.representation,
        )
    }

    /// Same model with level energies replaced. Used for environment-shifted
    /// ladders; all invariants are re-checked.
    pub fn with_energies(&self, energies: Vec<f64>) -> Result<Self> {
        Self::with_representation(
            self.label.clone(),
            energies,
            self.widths.clone(),
            self.dipoles.clone(),
            self.representation,
        )
    }
}

/// Subtracts the ground-state permanent dipole from every diagonal moment.
///
/// Off-diagonal moments, energies and widths are untouched. Applying it to a
/// model that is already in fluctuation form returns an identical copy.
pub fn to_fluctuation(m: &MolecularModel) -> MolecularModel {
    let ground = *m.ground_dipole();
    let dipoles = m.dipoles.map(|r, s, v| if r == s { v - ground } else { *v });
    MolecularModel {
        label: m.label.clone(),
        energies: m.energies.clone(),
        widths: m.widths.clone(),
        dipoles,
        representation: Representation::Fluctuation,
    }
}

/// Checks that `rot` is a proper rotation within [`ROTATION_TOLERANCE`].
pub fn check_rotation(rot: &Matrix3<f64>) -> Result<()> {
    let defect = (rot.transpose() * rot - Matrix3::identity()).amax();
    if !(defect <= ROTATION_TOLERANCE) {
        return Err(Error::NotRotation(format!("|R^T R - 1| = {defect:e}")));
    }
    let det = rot.determinant();
    if !((det - 1.0).abs() <= ROTATION_TOLERANCE) {
        return Err(Error::NotRotation(format!("det R = {det}")));
    }
    Ok(())
}

/// Rotates every dipole vector by `rot`.
pub fn rotate_model(m: &MolecularModel, rot: &Matrix3<f64>) -> Result<MolecularModel> {
    check_rotation(rot)?;
    Ok(MolecularModel {
        dipoles: m.dipoles.map(|_, _, v| rot * v),
        ..m.clone()
    })
}
