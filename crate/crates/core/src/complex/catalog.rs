//! Named complexes with canonical labels.

use super::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::label::VertexId;

/// A catalog complex together with its sphere tag, if it is a known
/// triangulation of a sphere.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub complex: SimplicialComplex,
    pub sphere_dim: Option<usize>,
}

pub fn catalog_names() -> &'static [&'static str] {
    &[
        "empty",
        "point",
        "S0",
        "polygon",
        "simplex",
        "boundary-simplex",
        "octahedron",
        "three-join",
        "cube-1-skeleton",
        "K33",
        "petersen",
        "suspension-hexagon",
    ]
}

fn v(s: impl AsRef<str>) -> VertexId {
    VertexId::from(s.as_ref())
}

fn numbered(n: usize) -> Vec<VertexId> {
    (1..=n).map(|i| v(i.to_string())).collect()
}

fn graph(edges: &[(String, String)]) -> SimplicialComplex {
    SimplicialComplex::from_simplices(edges.iter().map(|(a, b)| Simplex::new([v(a), v(b)])))
}

pub fn polygon(m: usize) -> SimplicialComplex {
    let vs = numbered(m);
    SimplicialComplex::from_simplices((0..m).map(|i| Simplex::new([vs[i].clone(), vs[(i + 1) % m].clone()])))
}

pub fn simplex(n: usize) -> SimplicialComplex {
    SimplicialComplex::from_simplices([Simplex::new(numbered(n + 1))])
}

pub fn boundary_simplex(n: usize) -> SimplicialComplex {
    let full = Simplex::new(numbered(n + 1));
    SimplicialComplex::from_simplices(full.facets())
}

/// `O^n`, the n-fold join of `S^0`, on vertices `1+, 1-, ..., n+, n-`.
pub fn octahedron(n: usize) -> SimplicialComplex {
    let mut c = SimplicialComplex::empty();
    for i in 1..=n {
        let pair = SimplicialComplex::from_simplices([
            Simplex::vertex(v(format!("{i}+"))),
            Simplex::vertex(v(format!("{i}-"))),
        ]);
        c = c.join(&pair);
    }
    c
}

/// `3^{*n}` on vertices `1a, 1b, 1c, ..., na, nb, nc`.
pub fn three_join(n: usize) -> SimplicialComplex {
    let mut c = SimplicialComplex::empty();
    for i in 1..=n {
        let three =
            SimplicialComplex::from_simplices(["a", "b", "c"].iter().map(|x| Simplex::vertex(v(format!("{i}{x}")))));
        c = c.join(&three);
    }
    c
}

pub fn k33() -> SimplicialComplex {
    let mut edges = Vec::new();
    for i in 1..=3 {
        for j in 1..=3 {
            edges.push((format!("a{i}"), format!("b{j}")));
        }
    }
    graph(&edges)
}

pub fn cube_one_skeleton() -> SimplicialComplex {
    let mut edges = Vec::new();
    for x in 0u8..8 {
        for bit in 0..3 {
            let y = x ^ (1 << bit);
            if x < y {
                edges.push((format!("{x:03b}"), format!("{y:03b}")));
            }
        }
    }
    graph(&edges)
}

pub fn petersen() -> SimplicialComplex {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((format!("o{i}"), format!("o{}", (i + 1) % 5)));
        edges.push((format!("o{i}"), format!("i{i}")));
        edges.push((format!("i{i}"), format!("i{}", (i + 2) % 5)));
    }
    graph(&edges)
}

/// Looks up a catalog complex. `param` is the size parameter for the
/// parametrised families (`polygon`, `simplex`, `boundary-simplex`,
/// `octahedron`, `three-join`).
pub fn special_complex(name: &str, param: Option<usize>) -> Result<CatalogEntry> {
    let need = |what: &str, min: usize| -> Result<usize> {
        match param {
            Some(p) if p >= min => Ok(p),
            Some(p) => Err(Error::MalformedInput(format!("{what} needs parameter >= {min}, got {p}"))),
            None => Err(Error::MalformedInput(format!("{what} needs a size parameter"))),
        }
    };
    let (complex, sphere_dim) = match name {
        "empty" => (SimplicialComplex::empty(), None),
        "point" => (simplex(0), None),
        "S0" => (octahedron(1), Some(0)),
        "polygon" => (polygon(need("polygon", 3)?), Some(1)),
        "simplex" => (simplex(need("simplex", 0)?), None),
        "boundary-simplex" => {
            let n = need("boundary-simplex", 1)?;
            (boundary_simplex(n), Some(n - 1))
        }
        "octahedron" => {
            let n = need("octahedron", 1)?;
            (octahedron(n), Some(n - 1))
        }
        "three-join" => (three_join(need("three-join", 1)?), None),
        "cube-1-skeleton" => (cube_one_skeleton(), None),
        "K33" => (k33(), None),
        "petersen" => (petersen(), None),
        "suspension-hexagon" => (polygon(6).suspension(), Some(2)),
        other => return Err(Error::UnknownCatalogName(other.to_string())),
    };
    Ok(CatalogEntry {
        name: match param {
            Some(p) => format!("{name}-{p}"),
            None => name.to_string(),
        },
        complex,
        sphere_dim,
    })
}
