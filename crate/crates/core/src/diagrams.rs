//! Time orderings and state sequences for second harmonic generation.
//!
//! Two photons of the fundamental are absorbed and one harmonic photon is
//! emitted, giving three chronological orderings of the vertices. Each
//! ordering combined with a pair of intermediate levels `(r, s)` is one
//! term of the sum over states. The numerator is always
//! `mu^{0r} mu^{rs} mu^{s0}` read right to left in time; the ordering fixes
//! which Cartesian slot of the tensor each factor carries and which photon
//! energies enter the two denominators.

use std::fmt;

use serde::Serialize;

use crate::model::{MolecularModel, Representation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Vertex {
    /// Annihilation of a fundamental photon (energy hbar*omega).
    Absorb,
    /// Creation of the harmonic photon (energy 2*hbar*omega).
    Emit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TimeOrdering {
    pub id: u8,
    /// Vertices in chronological order.
    pub events: [Vertex; 3],
}

const ORDERINGS: [TimeOrdering; 3] = [
    TimeOrdering {
        id: 0,
        events: [Vertex::Absorb, Vertex::Absorb, Vertex::Emit],
    },
    TimeOrdering {
        id: 1,
        events: [Vertex::Absorb, Vertex::Emit, Vertex::Absorb],
    },
    TimeOrdering {
        id: 2,
        events: [Vertex::Emit, Vertex::Absorb, Vertex::Absorb],
    },
];

pub fn enumerate_orderings() -> Vec<TimeOrdering> {
    ORDERINGS.to_vec()
}

impl TimeOrdering {
    /// Cartesian slot carried by each numerator factor, left to right
    /// (`0r`, `rs`, `s0`). The emission vertex carries slot `i`; the earlier
    /// absorption carries `k`, the later one `j`.
    pub fn index_pattern(&self) -> IndexPattern {
        // Factors left to right are the third, second and first event.
        let mut absorptions_seen = 0;
        let mut slots = [0u8; 3];
        for (t, ev) in self.events.iter().enumerate() {
            let factor = 2 - t;
            slots[factor] = match ev {
                Vertex::Emit => 0,
                Vertex::Absorb => {
                    absorptions_seen += 1;
                    if absorptions_seen == 1 {
                        2
                    } else {
                        1
                    }
                }
            };
        }
        IndexPattern(slots)
    }

    /// Photon-energy multiples for the `(r, s)` denominators. The level-`s`
    /// state follows the first event and the level-`r` state the second; each
    /// absorption adds `+1` and the emission `-2`.
    pub fn denominator_multiples(&self) -> (i32, i32) {
        let step = |v: Vertex| match v {
            Vertex::Absorb => 1,
            Vertex::Emit => -2,
        };
        let after_first = step(self.events[0]);
        let after_second = after_first + step(self.events[1]);
        (after_second, after_first)
    }
}

/// Cartesian slot (0 = i, 1 = j, 2 = k) of each numerator factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IndexPattern(pub [u8; 3]);

impl IndexPattern {
    /// Picks the Cartesian index of each factor given the tensor indices.
    #[inline]
    pub fn select(&self, ijk: [usize; 3]) -> [usize; 3] {
        [
            ijk[self.0[0] as usize],
            ijk[self.0[1] as usize],
            ijk[self.0[2] as usize],
        ]
    }
}

impl fmt::Display for IndexPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &slot in &self.0 {
            f.write_str(["i", "j", "k"][slot as usize])?;
        }
        Ok(())
    }
}

/// One energy factor: `E~_{0,level} + multiple * hbar*omega`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DenominatorFactor {
    pub level: usize,
    pub multiple: i32,
}

/// One state-sequence contribution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Term {
    pub ordering: u8,
    pub r: usize,
    pub s: usize,
    pub pattern: IndexPattern,
    pub denominators: [DenominatorFactor; 2],
}

impl Term {
    /// Level pairs of the three numerator moments, left to right.
    pub fn numerator_pairs(&self) -> [(usize, usize); 3] {
        [(0, self.r), (self.r, self.s), (self.s, 0)]
    }

    /// True when a numerator factor is the ground-state diagonal moment,
    /// which is identically zero in the fluctuation representation.
    pub fn has_ground_diagonal(&self) -> bool {
        self.numerator_pairs().contains(&(0, 0))
    }
}

/// Every term for `levels` levels in the given representation, sorted by
/// (ordering, r, s).
pub fn enumerate_terms_for(levels: usize, representation: Representation) -> Vec<Term> {
    let mut terms = Vec::with_capacity(3 * levels * levels);
    for ord in ORDERINGS {
        let pattern = ord.index_pattern();
        let (mr, ms) = ord.denominator_multiples();
        for r in 0..levels {
            for s in 0..levels {
                let term = Term {
                    ordering: ord.id,
                    r,
                    s,
                    pattern,
                    denominators: [
                        DenominatorFactor { level: r, multiple: mr },
                        DenominatorFactor { level: s, multiple: ms },
                    ],
                };
                if representation == Representation::Fluctuation && term.has_ground_diagonal() {
                    continue;
                }
                terms.push(term);
            }
        }
    }
    terms
}

pub fn enumerate_terms(m: &MolecularModel) -> Vec<Term> {
    enumerate_terms_for(m.levels(), m.representation())
}

/// Number of terms, obtained by enumerating and pruning.
pub fn term_count(levels: usize, representation: Representation) -> usize {
    enumerate_terms_for(levels, representation).len()
}
