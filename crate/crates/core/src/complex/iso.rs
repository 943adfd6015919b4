//! Simplicial isomorphism by backtracking.
//!
//! Vertices are first split into classes by a refined invariant (degree,
//! link f-vector, then the multiset of neighbor classes). The search assigns
//! vertices in an order that keeps each new vertex adjacent to already placed
//! ones, and checks after every assignment that the simplices spanned by the
//! placed vertices correspond exactly.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::label::VertexId;

pub const DEFAULT_ISO_VERTEX_BOUND: usize = 64;

pub type Isomorphism = BTreeMap<VertexId, VertexId>;

pub fn is_isomorphic(a: &SimplicialComplex, b: &SimplicialComplex) -> bool {
    matches!(find_isomorphism(a, b, usize::MAX), Ok(Some(_)))
}

struct Indexed {
    labels: Vec<VertexId>,
    adj: Vec<Vec<bool>>,
    /// simplices (as sorted index lists) containing each vertex
    star: Vec<Vec<Vec<usize>>>,
    simplices: BTreeSet<Vec<usize>>,
    class: Vec<u64>,
}

fn index(c: &SimplicialComplex) -> Indexed {
    let labels: Vec<VertexId> = c.vertices().iter().cloned().collect();
    let pos: HashMap<&VertexId, usize> = labels.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let n = labels.len();
    let mut adj = vec![vec![false; n]; n];
    let mut star = vec![Vec::new(); n];
    let mut simplices = BTreeSet::new();
    for s in c.simplices() {
        let idx: Vec<usize> = s.vertices().iter().map(|v| pos[v]).collect();
        if idx.len() == 2 {
            adj[idx[0]][idx[1]] = true;
            adj[idx[1]][idx[0]] = true;
        }
        for &i in &idx {
            star[i].push(idx.clone());
        }
        simplices.insert(idx);
    }
    // initial invariant: degree and counts of star simplices by size
    let mut class: Vec<u64> = (0..n)
        .map(|i| {
            let mut counts = vec![0u64; 1 + star[i].iter().map(|s| s.len()).max().unwrap_or(0)];
            for s in &star[i] {
                counts[s.len()] += 1;
            }
            hash_vec(&counts)
        })
        .collect();
    // two rounds of neighbor refinement
    for _ in 0..2 {
        class = (0..n)
            .map(|i| {
                let mut nb: Vec<u64> = (0..n).filter(|&j| adj[i][j]).map(|j| class[j]).collect();
                nb.sort_unstable();
                nb.push(class[i]);
                hash_vec(&nb)
            })
            .collect();
    }
    Indexed { labels, adj, star, simplices, class }
}

fn hash_vec(v: &[u64]) -> u64 {
    // FNV-1a; deterministic across runs
    let mut h: u64 = 0xcbf29ce484222325;
    for x in v {
        for byte in x.to_le_bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    }
    h
}

/// Finds a vertex bijection carrying the simplices of `a` onto those of `b`.
/// Deterministic for fixed inputs. Fails with `SizeLimitExceeded` if either
/// complex has more than `bound` vertices.
pub fn find_isomorphism(a: &SimplicialComplex, b: &SimplicialComplex, bound: usize) -> Result<Option<Isomorphism>> {
    for c in [a, b] {
        if c.num_vertices() > bound {
            return Err(Error::SizeLimitExceeded {
                what: "vertices for isomorphism test",
                actual: c.num_vertices(),
                bound,
            });
        }
    }
    if a.num_vertices() != b.num_vertices() || a.f_vector() != b.f_vector() {
        return Ok(None);
    }
    let ia = index(a);
    let ib = index(b);
    let mut ca = ia.class.clone();
    let mut cb = ib.class.clone();
    ca.sort_unstable();
    cb.sort_unstable();
    if ca != cb {
        return Ok(None);
    }
    let n = ia.labels.len();
    if n == 0 {
        return Ok(Some(BTreeMap::new()));
    }

    // class sizes in b, to start from rare classes
    let mut class_size: HashMap<u64, usize> = HashMap::new();
    for &c in &ib.class {
        *class_size.entry(c).or_default() += 1;
    }

    // placement order: greedy by connections to placed vertices, then rarity
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    for _ in 0..n {
        let next = (0..n)
            .filter(|&i| !placed[i])
            .max_by_key(|&i| {
                let links = order.iter().filter(|&&j: &&usize| ia.adj[i][j]).count();
                (links, std::cmp::Reverse(class_size[&ia.class[i]]), std::cmp::Reverse(i))
            })
            .unwrap();
        placed[next] = true;
        order.push(next);
    }

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if search(&ia, &ib, &order, 0, &mut map, &mut used) {
        Ok(Some((0..n).map(|i| (ia.labels[i].clone(), ib.labels[map[i]].clone())).collect()))
    } else {
        Ok(None)
    }
}

fn search(a: &Indexed, b: &Indexed, order: &[usize], depth: usize, map: &mut [usize], used: &mut [bool]) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    for w in 0..b.labels.len() {
        if used[w] || b.class[w] != a.class[v] {
            continue;
        }
        if !consistent(a, b, order, depth, map, v, w) {
            continue;
        }
        map[v] = w;
        used[w] = true;
        if search(a, b, order, depth + 1, map, used) {
            return true;
        }
        map[v] = usize::MAX;
        used[w] = false;
    }
    false
}

fn consistent(a: &Indexed, b: &Indexed, order: &[usize], depth: usize, map: &[usize], v: usize, w: usize) -> bool {
    for &u in &order[..depth] {
        if a.adj[v][u] != b.adj[w][map[u]] {
            return false;
        }
    }
    // placed simplices through v map onto placed simplices through w
    let mut count_a = 0;
    for s in &a.star[v] {
        if s.iter().all(|&x| x == v || map[x] != usize::MAX) {
            let mut img: Vec<usize> = s.iter().map(|&x| if x == v { w } else { map[x] }).collect();
            img.sort_unstable();
            if !b.simplices.contains(&img) {
                return false;
            }
            count_a += 1;
        }
    }
    let mut inverse_placed = vec![false; b.labels.len()];
    for &u in &order[..depth] {
        inverse_placed[map[u]] = true;
    }
    let count_b = b.star[w].iter().filter(|s| s.iter().all(|&x| x == w || inverse_placed[x])).count();
    count_a == count_b
}

/// Applies a vertex map to a simplex.
pub fn map_simplex(iso: &Isomorphism, s: &Simplex) -> Simplex {
    s.map(|v| iso[v].clone())
}
