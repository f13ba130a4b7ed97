#![allow(dead_code)]

use nalgebra::{Matrix3, Rotation3, Unit, Vector3};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use sosbeta::model::random::random_model;
use sosbeta::{BetaTensor, DipoleMatrix, MolecularModel};

pub fn data_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn random(seed: u64, levels: usize) -> MolecularModel {
    random_model(&mut rng(seed), levels, (0.2, 0.6), 2.0)
}

pub fn random_rotation<R: Rng>(rng: &mut R) -> Matrix3<f64> {
    let axis = Vector3::new(
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0f64),
    );
    let axis = Unit::new_normalize(axis + Vector3::new(1e-3, 0.0, 0.0));
    let angle = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    Rotation3::from_axis_angle(&axis, angle).into_inner()
}

/// Frequency at least `margin` away from every one- and two-photon
/// resonance of `m` (and from zero).
pub fn off_resonant_omega<R: Rng>(rng: &mut R, m: &MolecularModel, range: (f64, f64), margin: f64) -> f64 {
    loop {
        let w: f64 = rng.random_range(range.0..range.1);
        let ok = m.energies()[1..]
            .iter()
            .all(|&e| (e - w).abs() > margin && (e - 2.0 * w).abs() > margin);
        if ok && w > margin {
            return w;
        }
    }
}

/// Damping conventions understood by the oracle.
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum OracleDamping {
    None,
    Constant,
    Alternating,
}

/// Independent brute-force sum over all (r, s), written out term by term
/// without pruning or compensation.
pub fn oracle_beta(
    energies: &[f64],
    widths: &[f64],
    mu: &dyn Fn(usize, usize) -> [f64; 3],
    omega: f64,
    damping: OracleDamping,
) -> [[[Complex64; 3]; 3]; 3] {
    let n = energies.len();
    let den = |r: usize, mult: f64| {
        let g = widths[r];
        let im = match damping {
            OracleDamping::None => 0.0,
            OracleDamping::Constant => g,
            OracleDamping::Alternating => {
                if mult > 0.0 {
                    g
                } else {
                    -g
                }
            }
        };
        Complex64::new(-energies[r] + mult * omega, im)
    };
    let mut b = [[[Complex64::new(0.0, 0.0); 3]; 3]; 3];
    for r in 0..n {
        for s in 0..n {
            let (a, m, c) = (mu(0, r), mu(r, s), mu(s, 0));
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        b[i][j][k] += a[i] * m[j] * c[k] / (den(r, 2.0) * den(s, 1.0));
                        b[i][j][k] += a[j] * m[i] * c[k] / (den(r, -1.0) * den(s, 1.0));
                        b[i][j][k] += a[j] * m[k] * c[i] / (den(r, -1.0) * den(s, -2.0));
                    }
                }
            }
        }
    }
    b
}

/// Oracle evaluated on the moments a model carries.
pub fn oracle_for(m: &MolecularModel, omega: f64, damping: OracleDamping) -> [[[Complex64; 3]; 3]; 3] {
    let mu = |r: usize, s: usize| -> [f64; 3] { (*m.dipole(r, s)).into() };
    oracle_beta(m.energies(), m.widths(), &mu, omega, damping)
}

pub fn rel_diff_components(a: &[[[Complex64; 3]; 3]; 3], b: &[[[Complex64; 3]; 3]; 3]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let (x, y) = (a[i][j][k], b[i][j][k]);
                let d = (x - y).norm() / x.norm().max(y.norm()).max(1e-300);
                worst = worst.max(d);
            }
        }
    }
    worst
}

pub fn symmetrized(b: &[[[Complex64; 3]; 3]; 3]) -> [[[Complex64; 3]; 3]; 3] {
    let mut out = *b;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                out[i][j][k] = 0.5 * (b[i][j][k] + b[i][k][j]);
            }
        }
    }
    out
}

/// Largest relative change of any component under any of the six index
/// permutations.
pub fn max_permutation_asymmetry(b: &BetaTensor) -> f64 {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut worst: f64 = 0.0;
    for ([i, j, k], z) in b.iter() {
        let idx = [i, j, k];
        for p in PERMS {
            let w = b.get(idx[p[0]], idx[p[1]], idx[p[2]]);
            worst = worst.max((z - w).norm() / z.norm().max(w.norm()).max(1e-300));
        }
    }
    worst
}

/// The two-level molecule used throughout: E = 0.3, mu_01 = x, mu_00 = 5x,
/// mu_11 = 7x.
pub fn two_level(width: f64) -> MolecularModel {
    let d = DipoleMatrix::zeros(2)
        .with(0, 0, [5.0, 0.0, 0.0])
        .with(0, 1, [1.0, 0.0, 0.0])
        .with(1, 1, [7.0, 0.0, 0.0]);
    MolecularModel::new("two-level", vec![0.0, 0.3], vec![0.0, width], d).unwrap()
}

/// Adds `c` to every diagonal moment.
pub fn shift_diagonals(m: &MolecularModel, c: Vector3<f64>) -> MolecularModel {
    let n = m.levels();
    let mut d = m.dipoles().clone();
    for r in 0..n {
        d.set(r, r, m.dipole(r, r) + c);
    }
    MolecularModel::new(m.label(), m.energies().to_vec(), m.widths().to_vec(), d).unwrap()
}
