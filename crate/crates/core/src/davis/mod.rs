//! Right-angled Coxeter groups, the Davis chamber and finite quotients of
//! the Davis complex.

pub(crate) mod cover;
mod cube;
mod group;

use serde::{Deserialize, Serialize};

use crate::complex::{Simplex, SimplicialComplex};
use crate::label::VertexId;
use crate::rational::Rational;

pub use cover::{abelian_p_cover, abelian_p_cover_bounded, first_betti_integral};
pub use cube::{
    basic_construction, basic_construction_bounded, chamber, Chamber, ChamberCell, CubeComplex, DEFAULT_MAX_CELLS,
};
pub use group::{canonical_quotient, FiniteGroup, FiniteQuotient, Perm, MAX_GROUP_ORDER};

/// `W_L = ⟨S | s² = 1, [s, t] = 1 for {s, t} ∈ L⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RacgPresentation {
    pub generators: Vec<VertexId>,
    pub commuting_pairs: Vec<(VertexId, VertexId)>,
}

impl RacgPresentation {
    pub fn of(l: &SimplicialComplex) -> Self {
        RacgPresentation {
            generators: l.vertices().iter().cloned().collect(),
            commuting_pairs: l
                .edges()
                .into_iter()
                .map(|e| (e.vertices()[0].clone(), e.vertices()[1].clone()))
                .collect(),
        }
    }

    /// The nerve: the flag complex on the commutation graph.
    pub fn nerve(&self) -> SimplicialComplex {
        SimplicialComplex::flag_complex(self.generators.iter().cloned(), self.commuting_pairs.iter().cloned())
    }

    /// Relations as words, `s s` and `s t s t`.
    pub fn relations(&self) -> Vec<Vec<VertexId>> {
        let squares = self.generators.iter().map(|s| vec![s.clone(), s.clone()]);
        let commutators = self.commuting_pairs.iter().map(|(s, t)| vec![s.clone(), t.clone(), s.clone(), t.clone()]);
        squares.chain(commutators).collect()
    }
}

/// `Σ_{σ ∈ L ∪ {∅}} (-1/2)^{|σ|}`, the orbifold Euler characteristic of
/// `W_L`.
pub fn euler_l2(l: &SimplicialComplex) -> Rational {
    let mut total = Rational::one();
    for s in l.simplices() {
        let term = Rational::inv_pow2(s.len());
        total = if s.len() % 2 == 0 { total + term } else { total - term };
    }
    total
}

/// The simplices `μ ∪ F` of the chamber cell, for callers matching cells
/// back to `L`.
pub fn cell_support(c: &ChamberCell) -> Simplex {
    c.mirrors.union(&c.free)
}

#[cfg(test)]
mod tests;
