//! Static corrections from the permanent ground-state dipoles of
//! neighbouring molecules: a scalar energy per site and a perturbation
//! matrix in each molecule's level basis.

use std::fmt;
use std::path::Path;

use nalgebra::DMatrix;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::model::units::LengthUnit;
use crate::model::{load_model, load_model_value, to_fluctuation, MolecularModel, Representation, Vec3};
use crate::summation::{compensated_sum, CompensatedSum};

/// Overall sign applied to both environment terms.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SignConvention {
    /// Leading minus sign on both terms of the transformed Hamiltonian.
    #[default]
    AsPrinted,
    /// Opposite overall sign, i.e. the textbook electrostatic dipole-dipole
    /// energy for the scalar term.
    Classical,
}

impl SignConvention {
    fn factor(self) -> f64 {
        match self {
            SignConvention::AsPrinted => 1.0,
            SignConvention::Classical => -1.0,
        }
    }
}

impl fmt::Display for SignConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignConvention::AsPrinted => "as-printed",
            SignConvention::Classical => "classical",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Site {
    pub position: Vec3,
    pub model: MolecularModel,
}

/// Positioned molecules. Every pair is at least `min_separation` apart;
/// pairs farther than `interaction_radius` (if set) are skipped.
#[derive(Clone, Debug, PartialEq)]
pub struct Assembly {
    sites: Vec<Site>,
    min_separation: f64,
    interaction_radius: Option<f64>,
}

impl Assembly {
    pub fn new(sites: Vec<Site>, min_separation: f64) -> Result<Self> {
        if !(min_separation > 0.0 && min_separation.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "separation cutoff must be positive, got {min_separation}"
            )));
        }
        for (a, sa) in sites.iter().enumerate() {
            if !sa.position.iter().all(|x| x.is_finite()) {
                return Err(Error::InvalidInput(format!("site {a} has a non-finite position")));
            }
            if sa.model.representation() != Representation::Standard {
                return Err(Error::InvalidInput(format!(
                    "site {a} must be given in the standard representation"
                )));
            }
            for (b, sb) in sites.iter().enumerate().skip(a + 1) {
                let distance = (sa.position - sb.position).norm();
                if !(distance >= min_separation) {
                    return Err(Error::Cutoff {
                        a,
                        b,
                        distance,
                        cutoff: min_separation,
                    });
                }
            }
        }
        Ok(Self {
            sites,
            min_separation,
            interaction_radius: None,
        })
    }

    pub fn with_interaction_radius(mut self, radius: Option<f64>) -> Result<Self> {
        if let Some(r) = radius {
            if !(r > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "interaction radius must be positive, got {r}"
                )));
            }
        }
        self.interaction_radius = radius;
        Ok(self)
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn min_separation(&self) -> f64 {
        self.min_separation
    }

    /// Neighbours of `x` inside the interaction radius with their
    /// displacement `R_x - R_x'`.
    fn neighbours(&self, x: usize) -> impl Iterator<Item = (&Site, Vec3)> + '_ {
        let here = self.sites[x].position;
        let radius = self.interaction_radius;
        self.sites
            .iter()
            .enumerate()
            .filter(move |&(y, _)| y != x)
            .map(move |(_, s)| (s, here - s.position))
            .filter(move |(_, rvec)| radius.is_none_or(|r| rvec.norm() <= r))
    }
}

/// `[mu1 . mu2 - 3 (mu1 . R^)(R^ . mu2)] / (4 pi eps0 |R|^3)` in atomic units.
pub fn pair_orientation_factor(mu1: &Vec3, mu2: &Vec3, rvec: &Vec3, cutoff: f64) -> Result<f64> {
    let r = rvec.norm();
    if !(r >= cutoff) {
        return Err(Error::Cutoff {
            a: 0,
            b: 1,
            distance: r,
            cutoff,
        });
    }
    let u = rvec / r;
    Ok((mu1.dot(mu2) - 3.0 * mu1.dot(&u) * u.dot(mu2)) / (r * r * r))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalarShift {
    pub per_molecule: Vec<f64>,
    pub total: f64,
}

/// Ground-dipole pair energy, half attributed to each partner.
pub fn ground_state_shift(a: &Assembly, sign: SignConvention) -> Result<ScalarShift> {
    let cutoff = a.min_separation;
    let mut per_molecule = Vec::with_capacity(a.len());
    for (x, site) in a.sites.iter().enumerate() {
        let mut acc = CompensatedSum::new();
        for (other, rvec) in a.neighbours(x) {
            acc.add(pair_orientation_factor(
                other.model.ground_dipole(),
                site.model.ground_dipole(),
                &rvec,
                cutoff,
            )?);
        }
        // `+ 0.0` keeps a vanishing shift from printing as -0
        per_molecule.push(-0.5 * sign.factor() * acc.value() + 0.0);
    }
    let total = compensated_sum(per_molecule.iter().copied());
    Ok(ScalarShift { per_molecule, total })
}

/// Coupling of site `x`'s fluctuation moments to the neighbours' ground
/// dipoles, as an L x L matrix in the site's level basis.
pub fn perturbation_matrix(a: &Assembly, x: usize, sign: SignConvention) -> Result<DMatrix<f64>> {
    if x >= a.len() {
        return Err(Error::InvalidInput(format!("site {x} out of range")));
    }
    let cutoff = a.min_separation;
    let fluct = to_fluctuation(&a.sites[x].model);
    let n = fluct.levels();
    let neighbours: Vec<(&Site, Vec3)> = a.neighbours(x).collect();
    let mut out = DMatrix::zeros(n, n);
    for l in 0..n {
        for j in l..n {
            let mut acc = CompensatedSum::new();
            for (other, rvec) in &neighbours {
                acc.add(pair_orientation_factor(
                    other.model.ground_dipole(),
                    fluct.dipole(l, j),
                    rvec,
                    cutoff,
                )?);
            }
            let v = -sign.factor() * acc.value() + 0.0;
            out[(l, j)] = v;
            out[(j, l)] = v;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnvironmentShift {
    pub per_molecule_scalar: Vec<f64>,
    pub total_scalar: f64,
    pub per_molecule_matrix: Vec<DMatrix<f64>>,
}

pub fn environment_shift(a: &Assembly, sign: SignConvention) -> Result<EnvironmentShift> {
    let scalar = ground_state_shift(a, sign)?;
    let per_molecule_matrix = (0..a.len())
        .map(|x| perturbation_matrix(a, x, sign))
        .collect::<Result<_>>()?;
    Ok(EnvironmentShift {
        per_molecule_scalar: scalar.per_molecule,
        total_scalar: scalar.total,
        per_molecule_matrix,
    })
}

/// First-order shifted ladder: adds the diagonal of `matrix` to the level
/// energies. The ground diagonal is zero, so the ground level stays at 0.
pub fn apply_shifts(m: &MolecularModel, matrix: &DMatrix<f64>) -> Result<MolecularModel> {
    if matrix.nrows() != m.levels() || matrix.ncols() != m.levels() {
        return Err(Error::InvalidInput("shift matrix does not match level count".into()));
    }
    let energies = m
        .energies()
        .iter()
        .enumerate()
        .map(|(r, e)| if r == 0 { 0.0 } else { e + matrix[(r, r)] })
        .collect();
    m.with_energies(energies)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SiteDocument {
    position: [f64; 3],
    molecule: serde_json::Value,
}

/// Parses an assembly document: a JSON array of
/// `{ "position": [x, y, z], "molecule": <object or path> }`.
///
/// String molecule references are resolved against `base_dir`; without one
/// they are rejected.
pub fn parse_sites(text: &str, base_dir: Option<&Path>, length: LengthUnit) -> Result<Vec<Site>> {
    let docs: Vec<SiteDocument> = serde_json::from_str(text)?;
    docs.into_iter()
        .enumerate()
        .map(|(idx, d)| {
            let model = match d.molecule {
                serde_json::Value::String(reference) => {
                    let dir = base_dir.ok_or_else(|| {
                        Error::Parse(format!(
                            "site {idx}: molecule file reference {reference:?} not allowed here"
                        ))
                    })?;
                    load_model(&std::fs::read_to_string(dir.join(&reference))?)?
                }
                v @ serde_json::Value::Object(_) => load_model_value(v)?,
                _ => {
                    return Err(Error::Parse(format!(
                        "site {idx}: molecule must be an object or a file reference"
                    )))
                }
            };
            let p = d.position.map(|x| length.to_bohr(x));
            Ok(Site {
                position: Vec3::from(p),
                model,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DipoleMatrix;

    fn polar(ground: [f64; 3]) -> MolecularModel {
        let d = DipoleMatrix::zeros(1).with(0, 0, ground);
        MolecularModel::new("p", vec![0.0], vec![0.0], d).unwrap()
    }

    fn site(pos: [f64; 3], model: MolecularModel) -> Site {
        Site {
            position: Vec3::from(pos),
            model,
        }
    }

    #[test]
    fn orientation_factor_cases() {
        let z = Vec3::new(0.0, 0.0, 1.0);
        let f = pair_orientation_factor(&z, &z, &Vec3::new(0.0, 0.0, 10.0), 1.0).unwrap();
        assert!((f + 0.002).abs() < 1e-15);
        let f = pair_orientation_factor(&z, &z, &Vec3::new(10.0, 0.0, 0.0), 1.0).unwrap();
        assert!((f - 0.001).abs() < 1e-15);
        let f = pair_orientation_factor(&Vec3::x(), &Vec3::y(), &Vec3::new(0.0, 0.0, 7.0), 1.0).unwrap();
        assert_eq!(f, 0.0);
        assert!(pair_orientation_factor(&z, &z, &Vec3::new(0.0, 0.0, 0.5), 1.0).is_err());
    }

    #[test]
    fn collinear_pair_shift() {
        let a = Assembly::new(
            vec![
                site([0.0; 3], polar([0.0, 0.0, 1.0])),
                site([0.0, 0.0, 10.0], polar([0.0, 0.0, 1.0])),
            ],
            1.0,
        )
        .unwrap();
        let s = ground_state_shift(&a, SignConvention::AsPrinted).unwrap();
        for v in &s.per_molecule {
            assert!((v - 0.001).abs() < 1e-15);
        }
        assert!((s.total - 0.002).abs() < 1e-15);
        let c = ground_state_shift(&a, SignConvention::Classical).unwrap();
        assert!((c.total + 0.002).abs() < 1e-15);
    }

    #[test]
    fn zero_dipoles_no_shift() {
        let a = Assembly::new(
            vec![site([0.0; 3], polar([0.0; 3])), site([3.0, 0.0, 0.0], polar([0.0; 3]))],
            1.0,
        )
        .unwrap();
        let s = environment_shift(&a, SignConvention::AsPrinted).unwrap();
        assert_eq!(s.total_scalar, 0.0);
        assert!(s.per_molecule_matrix.iter().all(|m| m.amax() == 0.0));
    }

    #[test]
    fn two_level_matrix_elements() {
        let d = DipoleMatrix::zeros(2)
            .with(0, 1, [0.0, 0.0, 0.5])
            .with(1, 1, [0.0, 0.0, 2.0]);
        let tl = MolecularModel::new("tl", vec![0.0, 0.3], vec![0.0; 2], d).unwrap();
        let a = Assembly::new(
            vec![site([0.0; 3], tl), site([0.0, 0.0, 10.0], polar([0.0, 0.0, 1.0]))],
            1.0,
        )
        .unwrap();
        let m = perturbation_matrix(&a, 0, SignConvention::AsPrinted).unwrap();
        assert_eq!(m[(0, 0)], 0.0);
        assert!((m[(0, 1)] - 0.001).abs() < 1e-15);
        assert!((m[(1, 0)] - 0.001).abs() < 1e-15);
        assert!((m[(1, 1)] - 0.004).abs() < 1e-15);
    }

    #[test]
    fn isolated_molecule_has_zero_matrix() {
        let d = DipoleMatrix::zeros(2)
            .with(0, 0, [1.0, 0.0, 0.0])
            .with(0, 1, [1.0, 1.0, 0.0]);
        let m = MolecularModel::new("m", vec![0.0, 0.3], vec![0.0; 2], d).unwrap();
        let a = Assembly::new(vec![site([0.0; 3], m)], 1.0).unwrap();
        assert_eq!(
            perturbation_matrix(&a, 0, SignConvention::AsPrinted).unwrap().amax(),
            0.0
        );
        assert!(perturbation_matrix(&a, 1, SignConvention::AsPrinted).is_err());
    }

    #[test]
    fn rejects_close_pairs() {
        let r = Assembly::new(
            vec![site([0.0; 3], polar([0.0; 3])), site([0.1, 0.0, 0.0], polar([0.0; 3]))],
            1.0,
        );
        assert!(matches!(r, Err(Error::Cutoff { a: 0, b: 1, .. })));
        assert!(Assembly::new(vec![], 0.0).is_err());
    }

    #[test]
    fn interaction_radius_drops_far_pairs() {
        let a = Assembly::new(
            vec![
                site([0.0; 3], polar([0.0, 0.0, 1.0])),
                site([0.0, 0.0, 10.0], polar([0.0, 0.0, 1.0])),
            ],
            1.0,
        )
        .unwrap()
        .with_interaction_radius(Some(5.0))
        .unwrap();
        assert_eq!(ground_state_shift(&a, SignConvention::AsPrinted).unwrap().total, 0.0);
    }

    #[test]
    fn shifts_move_excited_levels() {
        let d = DipoleMatrix::zeros(2).with(1, 1, [0.0, 0.0, 2.0]);
        let tl = MolecularModel::new("tl", vec![0.0, 0.3], vec![0.0; 2], d).unwrap();
        let mut mat = DMatrix::zeros(2, 2);
        mat[(1, 1)] = 0.004;
        let shifted = apply_shifts(&tl, &mat).unwrap();
        assert_eq!(shifted.energies(), &[0.0, 0.304]);
        assert!(apply_shifts(&tl, &DMatrix::zeros(3, 3)).is_err());
    }

    #[test]
    fn parse_inline_sites() {
        let text = r#"[
            { "position": [0, 0, 0], "molecule": { "name": "a", "levels": [ {"energy": 0} ], "dipoles": { "0,0": [0,0,1] } } },
            { "position": [0, 0, 1], "molecule": { "name": "b", "levels": [ {"energy": 0} ] } }
        ]"#;
        let sites = parse_sites(text, None, LengthUnit::Nanometer).unwrap();
        assert_eq!(sites.len(), 2);
        assert!((sites[1].position.z - 18.897_261_246).abs() < 1e-8);
        let by_ref = r#"[ { "position": [0,0,0], "molecule": "a.json" } ]"#;
        assert!(parse_sites(by_ref, None, LengthUnit::Bohr).is_err());
        assert!(parse_sites(r#"[ { "position": [0,0,0], "molecule": 3 } ]"#, None, LengthUnit::Bohr).is_err());
    }
}
