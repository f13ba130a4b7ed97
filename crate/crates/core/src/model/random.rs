//! Seeded random models for self-checks.

use rand::Rng;

use super::{DipoleMatrix, MolecularModel, Vec3};

/// Random standard-representation model: excitation energies drawn uniformly
/// from `energies` and sorted, zero widths, symmetric moments with every
/// component uniform in `[-bound, bound]`.
pub fn random_model<R: Rng + ?Sized>(rng: &mut R, levels: usize, energies: (f64, f64), bound: f64) -> MolecularModel {
    assert!(levels >= 1, "need at least the ground level");
    let mut e: Vec<f64> = (1..levels).map(|_| rng.random_range(energies.0..energies.1)).collect();
    e.sort_by(f64::total_cmp);
    e.insert(0, 0.0);
    let mut d = DipoleMatrix::zeros(levels);
    for r in 0..levels {
        for s in r..levels {
            let v = Vec3::from_fn(|_, _| rng.random_range(-bound..=bound));
            d.set(r, s, v);
        }
    }
    MolecularModel::new(format!("random-{levels}"), e, vec![0.0; levels], d).expect("random model satisfies invariants")
}
