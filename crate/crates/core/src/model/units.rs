//! Physical constants and unit conversions. Everything inside the crate is
//! in atomic units (hbar = 1, 4*pi*eps0 = 1); conversions happen at the I/O
//! boundary only.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

/// Hartree energy in electronvolts (CODATA 2018).
pub const HARTREE_IN_EV: f64 = 27.211_386_245_988;
/// Atomic unit of electric dipole moment (e a0) in debye.
pub const AU_DIPOLE_IN_DEBYE: f64 = 2.541_746_473;
/// Bohr radius in angstrom (CODATA 2018).
pub const BOHR_IN_ANGSTROM: f64 = 0.529_177_210_903;
/// Speed of light in atomic units, 1/alpha (CODATA 2018).
pub const SPEED_OF_LIGHT_AU: f64 = 137.035_999_084;

/// hbar, c and eps0 in one unit system.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Constants {
    pub hbar: f64,
    pub c: f64,
    pub eps0: f64,
}

impl Constants {
    pub const ATOMIC: Constants = Constants {
        hbar: 1.0,
        c: SPEED_OF_LIGHT_AU,
        eps0: 1.0 / (4.0 * PI),
    };

    /// 1 / (4 pi eps0)
    pub fn coulomb(&self) -> f64 {
        1.0 / (4.0 * PI * self.eps0)
    }
}

impl Default for Constants {
    fn default() -> Self {
        Self::ATOMIC
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnergyUnit {
    #[default]
    #[serde(rename = "hartree")]
    Hartree,
    #[serde(rename = "eV")]
    ElectronVolt,
}

impl EnergyUnit {
    pub fn to_hartree(self, x: f64) -> f64 {
        match self {
            EnergyUnit::Hartree => x,
            EnergyUnit::ElectronVolt => x / HARTREE_IN_EV,
        }
    }

    pub fn from_hartree(self, x: f64) -> f64 {
        match self {
            EnergyUnit::Hartree => x,
            EnergyUnit::ElectronVolt => x * HARTREE_IN_EV,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            EnergyUnit::Hartree => "hartree",
            EnergyUnit::ElectronVolt => "eV",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum DipoleUnit {
    #[default]
    #[serde(rename = "au")]
    AtomicUnit,
    #[serde(rename = "debye")]
    Debye,
}

impl DipoleUnit {
    pub fn to_au(self, x: f64) -> f64 {
        match self {
            DipoleUnit::AtomicUnit => x,
            DipoleUnit::Debye => x / AU_DIPOLE_IN_DEBYE,
        }
    }

    pub fn from_au(self, x: f64) -> f64 {
        match self {
            DipoleUnit::AtomicUnit => x,
            DipoleUnit::Debye => x * AU_DIPOLE_IN_DEBYE,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum LengthUnit {
    #[default]
    #[serde(rename = "bohr")]
    Bohr,
    #[serde(rename = "angstrom")]
    Angstrom,
    #[serde(rename = "nm")]
    Nanometer,
}

impl LengthUnit {
    pub fn to_bohr(self, x: f64) -> f64 {
        match self {
            LengthUnit::Bohr => x,
            LengthUnit::Angstrom => x / BOHR_IN_ANGSTROM,
            LengthUnit::Nanometer => x * 10.0 / BOHR_IN_ANGSTROM,
        }
    }
}
