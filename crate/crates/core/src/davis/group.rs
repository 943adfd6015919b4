//! Finite permutation groups and quotients of right-angled Coxeter groups.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::label::VertexId;

/// Largest group the closure enumeration will build.
pub const MAX_GROUP_ORDER: usize = 1_000_000;

pub type Perm = Vec<u32>;

fn compose(a: &[u32], b: &[u32]) -> Perm {
    // (a * b)(x) = b(a(x)): apply a first, then b
    a.iter().map(|&x| b[x as usize]).collect()
}

fn identity(n: usize) -> Perm {
    (0..n as u32).collect()
}

fn check_perm(p: &[u32], degree: usize) -> Result<()> {
    let mut seen = vec![false; degree];
    if p.len() != degree {
        return Err(Error::InvalidQuotient(format!("permutation has length {}, expected {degree}", p.len())));
    }
    for &x in p {
        if x as usize >= degree || std::mem::replace(&mut seen[x as usize], true) {
            return Err(Error::InvalidQuotient(format!("{p:?} is not a permutation")));
        }
    }
    Ok(())
}

/// A finite group enumerated from permutation generators, with its right
/// Cayley table.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    elements: Vec<Perm>,
    /// `right[g][i]` = index of `elements[g] * generators[i]`
    right: Vec<Vec<u32>>,
}

impl FiniteGroup {
    /// Breadth-first closure from the identity. Fails once more than `bound`
    /// elements are found.
    pub fn generate(degree: usize, generators: &[Perm], bound: usize) -> Result<Self> {
        for g in generators {
            check_perm(g, degree)?;
        }
        let mut elements = vec![identity(degree)];
        let mut index: HashMap<Perm, u32> = HashMap::from([(identity(degree), 0)]);
        let mut right: Vec<Vec<u32>> = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(g) = queue.pop_front() {
            let mut row = Vec::with_capacity(generators.len());
            for s in generators {
                let h = compose(&elements[g], s);
                let next = match index.get(&h) {
                    Some(&i) => i,
                    None => {
                        let i = elements.len() as u32;
                        if elements.len() >= bound {
                            return Err(Error::SizeLimitExceeded {
                                what: "group order",
                                actual: elements.len() + 1,
                                bound,
                            });
                        }
                        index.insert(h.clone(), i);
                        elements.push(h);
                        queue.push_back(i as usize);
                        i
                    }
                };
                row.push(next);
            }
            if right.len() <= g {
                right.resize(g + 1, Vec::new());
            }
            right[g] = row;
        }
        Ok(FiniteGroup { elements, right })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, g: usize) -> &Perm {
        &self.elements[g]
    }

    /// Index of `g * generator_i`.
    pub fn right_mul(&self, g: usize, i: usize) -> usize {
        self.right[g][i] as usize
    }

    /// Partition of the group into left cosets `g⟨gens⟩` of the subgroup
    /// generated by the given generator indices. Returns, for every
    /// element, the number of its coset; cosets are numbered in order of
    /// their least element.
    pub fn left_cosets(&self, gens: &[usize]) -> (Vec<u32>, usize) {
        let n = self.order();
        let mut coset = vec![u32::MAX; n];
        let mut count = 0u32;
        for start in 0..n {
            if coset[start] != u32::MAX {
                continue;
            }
            coset[start] = count;
            let mut stack = vec![start];
            while let Some(g) = stack.pop() {
                for &i in gens {
                    let h = self.right_mul(g, i);
                    if coset[h] == u32::MAX {
                        coset[h] = count;
                        stack.push(h);
                    }
                }
            }
            count += 1;
        }
        (coset, count as usize)
    }
}

/// `φ: W_L → G` given by the images of the generators as permutations of
/// `0..degree`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteQuotient {
    pub degree: usize,
    pub images: BTreeMap<VertexId, Perm>,
}

impl FiniteQuotient {
    /// Checks the quotient against `L` and enumerates the group.
    pub fn validate(&self, l: &SimplicialComplex) -> Result<FiniteGroup> {
        for v in l.vertices() {
            if !self.images.contains_key(v) {
                return Err(Error::InvalidQuotient(format!("no image for generator {v}")));
            }
        }
        if let Some(extra) = self.images.keys().find(|k| !l.has_vertex(k)) {
            return Err(Error::InvalidQuotient(format!("{extra} is not a vertex of L")));
        }
        let id = identity(self.degree);
        for (v, p) in &self.images {
            check_perm(p, self.degree)?;
            if compose(p, p) != id {
                return Err(Error::InvalidQuotient(format!("image of {v} is not an involution")));
            }
        }
        for e in l.edges() {
            let a = &self.images[&e.vertices()[0]];
            let b = &self.images[&e.vertices()[1]];
            if compose(a, b) != compose(b, a) {
                return Err(Error::InvalidQuotient(format!("images of the adjacent generators {e} do not commute")));
            }
        }
        for s in l.simplices() {
            let gens: Vec<Perm> = s.vertices().iter().map(|v| self.images[v].clone()).collect();
            let want = 1usize << s.len();
            let sub = FiniteGroup::generate(self.degree, &gens, want + 1)
                .map_err(|_| Error::InvalidQuotient(format!("images of {s} generate a group larger than {want}")))?;
            if sub.order() != want {
                return Err(Error::InvalidQuotient(format!(
                    "images of {s} generate a group of order {}, expected {want}",
                    sub.order()
                )));
            }
        }
        let gens: Vec<Perm> = self.images.values().cloned().collect();
        FiniteGroup::generate(self.degree, &gens, MAX_GROUP_ORDER)
    }

    pub fn generator_index(&self, v: &VertexId) -> Option<usize> {
        self.images.keys().position(|k| k == v)
    }

    /// Indices (in `images` order) of the vertices of `s`.
    pub(crate) fn indices_of(&self, s: &Simplex) -> Vec<usize> {
        s.vertices().iter().filter_map(|v| self.generator_index(v)).collect()
    }
}

/// `W_L → (Z/2)^{|L⁰|}`, the `i`-th generator swapping points `2i` and
/// `2i + 1`.
pub fn canonical_quotient(l: &SimplicialComplex) -> FiniteQuotient {
    let n = l.num_vertices();
    let images = l
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let mut p = identity(2 * n);
            p.swap(2 * i, 2 * i + 1);
            (v.clone(), p)
        })
        .collect();
    FiniteQuotient { degree: 2 * n, images }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::catalog::{octahedron, polygon};

    #[test]
    fn canonical_orders() {
        for (l, order) in [(polygon(5), 32), (crate::complex::catalog::simplex(0), 2), (polygon(4), 16)] {
            let g = canonical_quotient(&l).validate(&l).unwrap();
            assert_eq!(g.order(), order);
        }
    }

    #[test]
    fn cosets_of_a_vertex_subgroup() {
        let l = polygon(4);
        let q = canonical_quotient(&l);
        let g = q.validate(&l).unwrap();
        let (_, n) = g.left_cosets(&[0]);
        assert_eq!(n, 8);
        let (_, n) = g.left_cosets(&[0, 1]);
        assert_eq!(n, 4);
    }

    #[test]
    fn rejects_bad_quotients() {
        let l = octahedron(1);
        // both generators sent to the same involution: fine on S⁰ (no edges)
        let mut q = canonical_quotient(&l);
        let first = q.images.values().next().unwrap().clone();
        for p in q.images.values_mut() {
            *p = first.clone();
        }
        assert!(q.validate(&l).is_ok());

        // on an edge the same identification breaks spherical injectivity
        let edge = SimplicialComplex::from_labels(&[&["a", "b"]]);
        let mut q = canonical_quotient(&edge);
        let first = q.images.values().next().unwrap().clone();
        for p in q.images.values_mut() {
            *p = first.clone();
        }
        assert!(matches!(q.validate(&edge), Err(Error::InvalidQuotient(_))));

        // a 3-cycle is not an involution
        let pt = crate::complex::catalog::simplex(0);
        let q = FiniteQuotient { degree: 3, images: BTreeMap::from([(VertexId::from("1"), vec![1, 2, 0])]) };
        assert!(matches!(q.validate(&pt), Err(Error::InvalidQuotient(_))));

        // non-commuting transpositions on an edge
        let q = FiniteQuotient {
            degree: 3,
            images: BTreeMap::from([(VertexId::from("a"), vec![1, 0, 2]), (VertexId::from("b"), vec![0, 2, 1])]),
        };
        assert!(matches!(q.validate(&edge), Err(Error::InvalidQuotient(_))));
    }
}
