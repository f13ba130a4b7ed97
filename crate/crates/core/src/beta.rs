//! Sum-over-states evaluation of the SHG hyperpolarizability
//! beta_ijk(-2w; w, w), in whichever representation the model carries.

use std::fmt;

use nalgebra::Matrix3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::diagrams::{enumerate_terms, Term};
use crate::error::{Error, Result};
use crate::model::{to_fluctuation, MolecularModel, Representation};
use crate::summation::ComplexSum;

/// Undamped denominators smaller than this (hartree) are treated as exact
/// resonances.
pub const RESONANCE_TOLERANCE: f64 = 1e-12;

/// Floor for the relative-difference denominator.
const REL_DIFF_FLOOR: f64 = 1e-300;

/// How phenomenological widths enter the energy denominators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DampingConvention {
    #[default]
    None,
    /// `+i*Gamma_r` in every factor, resonant or not.
    ConstantSign,
    /// `+i*Gamma_r` in resonant factors (positive photon multiple),
    /// `-i*Gamma_r` in anti-resonant ones.
    SignAlternating,
}

impl fmt::Display for DampingConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DampingConvention::None => "none",
            DampingConvention::ConstantSign => "constant-sign",
            DampingConvention::SignAlternating => "sign-alternating",
        })
    }
}

pub type Components = [[[Complex64; 3]; 3]; 3];

#[derive(Clone, Debug, PartialEq)]
pub struct BetaTensor {
    pub components: Components,
    /// Fundamental angular frequency; with hbar = 1 also the photon energy.
    pub omega: f64,
    pub representation: Representation,
    pub damping: DampingConvention,
    pub symmetrized: bool,
}

impl BetaTensor {
    pub fn get(&self, i: usize, j: usize, k: usize) -> Complex64 {
        self.components[i][j][k]
    }

    pub fn iter(&self) -> impl Iterator<Item = ([usize; 3], Complex64)> + '_ {
        (0..27).map(move |n| {
            let (i, j, k) = (n / 9, (n / 3) % 3, n % 3);
            ([i, j, k], self.components[i][j][k])
        })
    }

    /// Largest |Im| over all components.
    pub fn max_imag(&self) -> f64 {
        self.iter().map(|(_, z)| z.im.abs()).fold(0.0, f64::max)
    }

    /// Largest |component|.
    pub fn max_abs(&self) -> f64 {
        self.iter().map(|(_, z)| z.norm()).fold(0.0, f64::max)
    }

    /// Transforms all three indices: `b'_abc = R_ai R_bj R_ck b_ijk`.
    pub fn rotated(&self, rot: &Matrix3<f64>) -> BetaTensor {
        let mut out = [[[Complex64::new(0.0, 0.0); 3]; 3]; 3];
        for (a, plane) in out.iter_mut().enumerate() {
            for (b, row) in plane.iter_mut().enumerate() {
                for (c, slot) in row.iter_mut().enumerate() {
                    let mut acc = ComplexSum::default();
                    for ([i, j, k], z) in self.iter() {
                        acc.add(z * (rot[(a, i)] * rot[(b, j)] * rot[(c, k)]));
                    }
                    *slot = acc.value();
                }
            }
        }
        BetaTensor {
            components: out,
            ..self.clone()
        }
    }
}

/// `E~_0r + multiple * hbar*omega` with `E~_0r = -E_r`, damped according to
/// `convention`.
pub fn denominator(
    m: &MolecularModel,
    level: usize,
    multiple: i32,
    omega: f64,
    convention: DampingConvention,
) -> Result<Complex64> {
    if level >= m.levels() {
        return Err(Error::InvalidInput(format!(
            "level {level} out of range for {}-level model",
            m.levels()
        )));
    }
    if !matches!(multiple, -2 | -1 | 1 | 2) {
        return Err(Error::InvalidInput(format!(
            "photon multiple {multiple} not in {{-2, -1, 1, 2}}"
        )));
    }
    let re = -m.energy(level) + f64::from(multiple) * omega;
    let gamma = m.width(level);
    let im = match convention {
        DampingConvention::None => 0.0,
        DampingConvention::ConstantSign => gamma,
        DampingConvention::SignAlternating => {
            if multiple > 0 {
                gamma
            } else {
                -gamma
            }
        }
    };
    if im == 0.0 && re.abs() < RESONANCE_TOLERANCE {
        return Err(Error::Resonance {
            level,
            multiple,
            value: re.abs(),
        });
    }
    Ok(Complex64::new(re, im))
}

fn check_omega(omega: f64) -> Result<()> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::InvalidInput(format!(
            "omega must be positive and finite, got {omega}"
        )));
    }
    Ok(())
}

/// Sums every term of the model's term list into the 27 tensor components.
pub fn evaluate_beta(m: &MolecularModel, omega: f64, convention: DampingConvention) -> Result<BetaTensor> {
    check_omega(omega)?;
    let terms = enumerate_terms(m);
    let mut acc = [[[ComplexSum::default(); 3]; 3]; 3];
    for term in &terms {
        accumulate_term(m, term, omega, convention, &mut acc)?;
    }
    let components = acc.map(|plane| plane.map(|row| row.map(|s| s.value())));
    Ok(BetaTensor {
        components,
        omega,
        representation: m.representation(),
        damping: convention,
        symmetrized: false,
    })
}

fn accumulate_term(
    m: &MolecularModel,
    term: &Term,
    omega: f64,
    convention: DampingConvention,
    acc: &mut [[[ComplexSum; 3]; 3]; 3],
) -> Result<()> {
    let [d0, d1] = term.denominators;
    let weight = (denominator(m, d0.level, d0.multiple, omega, convention)?
        * denominator(m, d1.level, d1.multiple, omega, convention)?)
    .inv();
    let [p0, p1, p2] = term.numerator_pairs();
    let (f0, f1, f2) = (m.dipole(p0.0, p0.1), m.dipole(p1.0, p1.1), m.dipole(p2.0, p2.1));
    for (i, plane) in acc.iter_mut().enumerate() {
        for (j, row) in plane.iter_mut().enumerate() {
            for (k, slot) in row.iter_mut().enumerate() {
                let [a, b, c] = term.pattern.select([i, j, k]);
                let numerator = f0[a] * f1[b] * f2[c];
                slot.add(weight * numerator);
            }
        }
    }
    Ok(())
}

/// `b_i(jk) = (b_ijk + b_ikj) / 2`.
pub fn symmetrize(b: &BetaTensor) -> BetaTensor {
    let mut out = b.components;
    for (i, plane) in out.iter_mut().enumerate() {
        for (j, row) in plane.iter_mut().enumerate() {
            for (k, slot) in row.iter_mut().enumerate() {
                *slot = 0.5 * (b.components[i][j][k] + b.components[i][k][j]);
            }
        }
    }
    BetaTensor {
        components: out,
        symmetrized: true,
        ..b.clone()
    }
}

/// Largest per-component `|a - b| / max(|a|, |b|, 1e-300)`.
pub fn max_rel_diff(a: &BetaTensor, b: &BetaTensor) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|((_, x), (_, y))| (x - y).norm() / x.norm().max(y.norm()).max(REL_DIFF_FLOOR))
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceReport {
    pub omega: f64,
    pub beta_standard: BetaTensor,
    pub beta_fluctuation: BetaTensor,
    pub max_rel_diff_symmetrized: f64,
    pub max_rel_diff_raw: f64,
}

/// Evaluates a standard-representation model in both representations and
/// compares them.
pub fn equivalence_report(m: &MolecularModel, omega: f64, convention: DampingConvention) -> Result<EquivalenceReport> {
    if m.representation() != Representation::Standard {
        return Err(Error::InvalidInput(
            "equivalence report needs a standard-representation model".into(),
        ));
    }
    let beta_standard = evaluate_beta(m, omega, convention)?;
    let beta_fluctuation = evaluate_beta(&to_fluctuation(m), omega, convention)?;
    let max_rel_diff_raw = max_rel_diff(&beta_standard, &beta_fluctuation);
    let max_rel_diff_symmetrized = max_rel_diff(&symmetrize(&beta_standard), &symmetrize(&beta_fluctuation));
    Ok(EquivalenceReport {
        omega,
        beta_standard,
        beta_fluctuation,
        max_rel_diff_symmetrized,
        max_rel_diff_raw,
    })
}
