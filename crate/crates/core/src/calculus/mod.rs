//! Vanishing certificates for `F`-L²-Betti numbers of right-angled Coxeter
//! groups.
//!
//! A [`Certificate`] is a tree of rule applications. Each node states what
//! is known about `b_i^{(2)}(W_L; F)` for one flag complex `L`, and
//! [`verify`] re-checks every node from its premises alone.

mod certificate;
mod derive;
mod torsion;
mod trivalent;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::davis::euler_l2;
use crate::rational::Rational;

pub use certificate::{
    verify, Certificate, CertificateReport, IteratedMode, NodeFailure, Rule, SphereTag, SubEquivDirection,
};
pub use derive::{derive, derive_with, relative_barycentric_schedule, DeriveOptions, Failure, DEFAULT_BUDGET};
pub use torsion::{torsion_bookkeeping, TorsionReport, TorsionRow};
pub use trivalent::{
    minimally_branching_decision, trivalent_decision, BranchingOutcome, K33Witness, ThreeJoinWitness, TrivalentOutcome,
};

/// What is known about one L²-Betti number.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Zero,
    Exact(Rational),
    UpperBound(Rational),
    Unknown,
}

impl Status {
    /// Folds `Exact(0)` and `UpperBound(0)` into `Zero`.
    pub fn normalized(self) -> Status {
        match self {
            Status::Exact(q) | Status::UpperBound(q) if q.is_zero() => Status::Zero,
            s => s,
        }
    }

    pub fn exact(&self) -> Option<Rational> {
        match self {
            Status::Zero => Some(Rational::zero()),
            Status::Exact(q) => Some(q.clone()),
            _ => None,
        }
    }

    pub fn upper(&self) -> Option<Rational> {
        match self {
            Status::UpperBound(q) => Some(q.clone()),
            s => s.exact(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Status::Zero)
    }

    pub fn is_exact(&self) -> bool {
        self.exact().is_some()
    }

    pub fn add(&self, other: &Status) -> Status {
        match (self.exact(), other.exact()) {
            (Some(a), Some(b)) => Status::Exact(a + b).normalized(),
            _ => match (self.upper(), other.upper()) {
                (Some(a), Some(b)) => Status::UpperBound(a + b).normalized(),
                _ => Status::Unknown,
            },
        }
    }

    pub fn mul(&self, other: &Status) -> Status {
        if self.is_zero() || other.is_zero() {
            return Status::Zero;
        }
        match (self.exact(), other.exact()) {
            (Some(a), Some(b)) => Status::Exact(a * b).normalized(),
            _ => match (self.upper(), other.upper()) {
                (Some(a), Some(b)) => Status::UpperBound(a * b).normalized(),
                _ => Status::Unknown,
            },
        }
    }

    pub fn scale(&self, q: &Rational) -> Status {
        self.mul(&Status::Exact(q.clone()).normalized())
    }

    /// Whether a claim of `claim` follows from knowing `self`.
    pub fn implies(&self, claim: &Status) -> bool {
        match claim {
            Status::Unknown => true,
            Status::Zero => self.upper().is_some_and(|u| u.is_zero()),
            Status::Exact(q) => self.exact().as_ref() == Some(q),
            Status::UpperBound(q) => self.upper().is_some_and(|u| &u <= q),
        }
    }

    /// The stronger of two statuses about the same number. `None` when both
    /// are exact and disagree, or an exact value exceeds an upper bound.
    pub fn meet(&self, other: &Status) -> Option<Status> {
        match (self.exact(), other.exact()) {
            (Some(a), Some(b)) => (a == b).then(|| self.clone()),
            (Some(a), None) => other.upper().is_none_or(|u| a <= u).then(|| self.clone()),
            (None, Some(b)) => self.upper().is_none_or(|u| b <= u).then(|| other.clone()),
            (None, None) => Some(match (self.upper(), other.upper()) {
                (Some(a), Some(b)) => Status::UpperBound(a.min(b)),
                (Some(_), None) => self.clone(),
                (None, _) => other.clone(),
            }),
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Zero => write!(f, "0"),
            Status::Exact(q) => write!(f, "{q}"),
            Status::UpperBound(q) => write!(f, "<={q}"),
            Status::Unknown => write!(f, "?"),
        }
    }
}

/// Per-degree statuses for `L` over a field of characteristic `char`.
/// Degrees `0..=dim L + 1` are stored; all higher degrees are zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiKnowledge {
    pub complex: SimplicialComplex,
    #[serde(rename = "char")]
    pub characteristic: u64,
    pub degrees: Vec<Status>,
}

/// Number of stored degrees for `L`.
pub fn stored_degrees(l: &SimplicialComplex) -> usize {
    (l.dim() + 2).max(1) as usize
}

impl BettiKnowledge {
    pub fn unknown(complex: SimplicialComplex, characteristic: u64) -> Self {
        let n = stored_degrees(&complex);
        BettiKnowledge { complex, characteristic, degrees: vec![Status::Unknown; n] }
    }

    pub fn all_zero(complex: SimplicialComplex, characteristic: u64) -> Self {
        let n = stored_degrees(&complex);
        BettiKnowledge { complex, characteristic, degrees: vec![Status::Zero; n] }
    }

    /// Status in degree `i`, with the dimension bound applied.
    pub fn status(&self, i: usize) -> Status {
        self.degrees.get(i).cloned().unwrap_or(Status::Zero)
    }

    /// `status(i - 1)`, zero for `i = 0`.
    pub fn below(&self, i: usize) -> Status {
        if i == 0 {
            Status::Zero
        } else {
            self.status(i - 1)
        }
    }

    pub fn is_complete(&self) -> bool {
        self.degrees.iter().all(Status::is_exact)
    }

    pub fn covers(&self, goal: &Goal) -> bool {
        match goal {
            Goal::All => self.is_complete(),
            Goal::Degrees(ds) => ds.iter().all(|&i| self.status(i).is_exact()),
        }
    }

    pub fn non_exact_degrees(&self) -> Vec<usize> {
        (0..self.degrees.len()).filter(|&i| !self.degrees[i].is_exact()).collect()
    }

    /// `Σ (-1)^i b_i` when every degree is exact.
    pub fn alternating_sum(&self) -> Option<Rational> {
        let mut total = Rational::zero();
        for (i, s) in self.degrees.iter().enumerate() {
            let v = s.exact()?;
            total = if i % 2 == 0 { total + v } else { total - v };
        }
        Some(total)
    }

    /// Checks the stored-degree count, signs, and the Euler relation when
    /// complete.
    pub fn check_invariants(&self) -> Result<(), String> {
        if self.degrees.len() != stored_degrees(&self.complex) {
            return Err(format!("{} degrees stored, expected {}", self.degrees.len(), stored_degrees(&self.complex)));
        }
        if let Some(i) = self.degrees.iter().position(|s| s.upper().is_some_and(|u| u.is_negative())) {
            return Err(format!("negative value in degree {i}"));
        }
        if let Some(sum) = self.alternating_sum() {
            let chi = euler_l2(&self.complex);
            if sum != chi {
                return Err(format!("alternating sum {sum} differs from euler_l2 = {chi}"));
            }
        }
        Ok(())
    }

    pub fn summary(&self) -> String {
        let parts: Vec<String> = self.degrees.iter().map(|s| s.to_string()).collect();
        format!("({})", parts.join(", "))
    }
}

/// Which degrees a derivation must determine.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Goal {
    All,
    Degrees(BTreeSet<usize>),
}

#[cfg(test)]
mod tests;
