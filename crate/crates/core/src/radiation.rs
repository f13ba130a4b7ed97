//! Photon-mode bookkeeping for the single-centre SHG amplitude.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::beta::BetaTensor;
use crate::error::{Error, Result};
use crate::model::{Constants, Vec3};
use crate::summation::{CompensatedSum, ComplexSum};

pub const POLARIZATION_TOLERANCE: f64 = 1e-12;
pub const FREQUENCY_TOLERANCE: f64 = 1e-12;

pub type CVec3 = Vector3<Complex64>;

/// Polarization presets for propagation along +z.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Polarization {
    X,
    Y,
    CircPlus,
    CircMinus,
}

impl Polarization {
    pub fn vector(self) -> CVec3 {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let h = FRAC_1_SQRT_2;
        match self {
            Polarization::X => CVec3::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)),
            Polarization::Y => CVec3::new(c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)),
            Polarization::CircPlus => CVec3::new(c(h, 0.0), c(0.0, h), c(0.0, 0.0)),
            Polarization::CircMinus => CVec3::new(c(h, 0.0), c(0.0, -h), c(0.0, 0.0)),
        }
    }
}

impl FromStr for Polarization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" => Ok(Polarization::X),
            "y" => Ok(Polarization::Y),
            "circ+" => Ok(Polarization::CircPlus),
            "circ-" => Ok(Polarization::CircMinus),
            _ => Err(Error::InvalidInput(format!("unknown polarization {s:?}"))),
        }
    }
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarization::X => "x",
            Polarization::Y => "y",
            Polarization::CircPlus => "circ+",
            Polarization::CircMinus => "circ-",
        })
    }
}

/// One radiation mode: wavevector, unit transverse polarization and
/// quantization volume.
#[derive(Clone, Debug, PartialEq)]
pub struct PhotonMode {
    k: Vec3,
    polarization: CVec3,
    volume: f64,
}

impl PhotonMode {
    pub fn new(k: Vec3, polarization: CVec3, volume: f64) -> Result<Self> {
        let kn = k.norm();
        if !(kn > 0.0 && kn.is_finite()) {
            return Err(Error::InvalidInput("wavevector must be nonzero".into()));
        }
        if !(volume > 0.0 && volume.is_finite()) {
            return Err(Error::InvalidInput("quantization volume must be positive".into()));
        }
        let norm = polarization.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !((norm - 1.0).abs() <= POLARIZATION_TOLERANCE) {
            return Err(Error::InvalidInput(format!("polarization norm is {norm}, expected 1")));
        }
        let overlap: Complex64 = polarization.iter().zip(k.iter()).map(|(e, &kc)| e * kc).sum();
        if !(overlap.norm() <= POLARIZATION_TOLERANCE * kn) {
            return Err(Error::InvalidInput("polarization is not transverse to k".into()));
        }
        Ok(Self {
            k,
            polarization,
            volume,
        })
    }

    /// Mode travelling along +z with `c|k| = omega`.
    pub fn along_z(constants: &Constants, omega: f64, polarization: Polarization, volume: f64) -> Result<Self> {
        Self::new(Vec3::new(0.0, 0.0, omega / constants.c), polarization.vector(), volume)
    }

    pub fn k(&self) -> &Vec3 {
        &self.k
    }

    pub fn wavenumber(&self) -> f64 {
        self.k.norm()
    }

    pub fn polarization(&self) -> &CVec3 {
        &self.polarization
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// Angular frequency under vacuum dispersion.
    pub fn omega(&self, constants: &Constants) -> f64 {
        constants.c * self.wavenumber()
    }
}

/// Fundamental and harmonic modes plus the initial fundamental occupation.
#[derive(Clone, Debug, PartialEq)]
pub struct ShgConfig {
    fundamental: PhotonMode,
    harmonic: PhotonMode,
    n: u64,
}

impl ShgConfig {
    pub fn new(fundamental: PhotonMode, harmonic: PhotonMode, n: u64) -> Result<Self> {
        let k = fundamental.wavenumber();
        let k2 = harmonic.wavenumber();
        if !((k2 - 2.0 * k).abs() <= FREQUENCY_TOLERANCE * 2.0 * k) {
            return Err(Error::InvalidInput(format!(
                "harmonic wavenumber {k2} is not twice the fundamental {k}"
            )));
        }
        Ok(Self {
            fundamental,
            harmonic,
            n,
        })
    }

    pub fn fundamental(&self) -> &PhotonMode {
        &self.fundamental
    }

    pub fn harmonic(&self) -> &PhotonMode {
        &self.harmonic
    }

    pub fn n(&self) -> u64 {
        self.n
    }
}

/// Per-mode field scale `(hbar c |k| / (2 eps0 V))^(1/2)`.
pub fn mode_normalization(constants: &Constants, mode: &PhotonMode) -> f64 {
    (constants.hbar * constants.c * mode.wavenumber() / (2.0 * constants.eps0 * mode.volume())).sqrt()
}

/// `-i (hbar c / 2 eps0 V)^(3/2) (k^2 k')^(1/2) (n(n-1))^(1/2)`.
///
/// The fundamental mode's volume is used; both modes normally share one box.
pub fn shg_prefactor(constants: &Constants, cfg: &ShgConfig) -> Complex64 {
    let n = cfg.n as f64;
    let occupation = (n * (n - 1.0)).max(0.0).sqrt();
    let k = cfg.fundamental.wavenumber();
    let k2 = cfg.harmonic.wavenumber();
    let field = constants.hbar * constants.c / (2.0 * constants.eps0 * cfg.fundamental.volume());
    let magnitude = field.powf(1.5) * (k * k * k2).sqrt() * occupation;
    Complex64::new(0.0, -magnitude)
}

/// `prefactor * conj(e'_i) e_j e_k beta_ijk`.
pub fn contract_amplitude(constants: &Constants, cfg: &ShgConfig, b: &BetaTensor) -> Result<Complex64> {
    let mode_omega = cfg.fundamental.omega(constants);
    if !((mode_omega - b.omega).abs() <= FREQUENCY_TOLERANCE * b.omega.abs().max(mode_omega)) {
        return Err(Error::FrequencyMismatch {
            tensor: b.omega,
            mode: mode_omega,
        });
    }
    let out = cfg.harmonic.polarization();
    let inp = cfg.fundamental.polarization();
    let mut acc = ComplexSum::default();
    for ([i, j, k], z) in b.iter() {
        acc.add(out[i].conj() * inp[j] * inp[k] * z);
    }
    Ok(shg_prefactor(constants, cfg) * acc.value())
}

/// Free-field energy `sum (n + 1/2) hbar c |k|`.
pub fn mode_energy(constants: &Constants, occupations: &[(PhotonMode, u64)]) -> f64 {
    let quanta: CompensatedSum = occupations
        .iter()
        .map(|(mode, n)| (*n as f64 + 0.5) * mode.wavenumber())
        .collect();
    constants.hbar * constants.c * quanta.value()
}
