use super::catalog::{boundary_simplex, cube_one_skeleton, k33, octahedron, polygon};
use super::*;

fn c4() -> SimplicialComplex {
    SimplicialComplex::from_labels(&[&["a", "b"], &["b", "c"], &["c", "d"], &["d", "a"]])
}

fn s(labels: &[&str]) -> Simplex {
    Simplex::from_labels(labels)
}

#[test]
fn build_examples() {
    assert_eq!(c4().f_vector().proper(), &[4, 4]);
    let bd = SimplicialComplex::from_labels(&[&["1", "2", "3"], &["1", "2", "4"], &["1", "3", "4"], &["2", "3", "4"]]);
    assert_eq!(bd.f_vector().proper(), &[4, 6, 4]);
    assert_eq!(bd, boundary_simplex(3));
    let pt = SimplicialComplex::from_labels(&[&["a"]]);
    assert_eq!(pt.f_vector().proper(), &[1]);
}

#[test]
fn build_rejects_bad_input() {
    let v = |x: &str| VertexId::from(x);
    assert!(matches!(SimplicialComplex::build(vec![vec![v("a"), v("a")]]), Err(Error::MalformedInput(_))));
    assert!(matches!(SimplicialComplex::build(vec![vec![]]), Err(Error::MalformedInput(_))));
    assert!(matches!(
        SimplicialComplex::build(vec![vec![v("a"), v("b")], vec![v("b"), v("a")]]),
        Err(Error::MalformedInput(_))
    ));
}

#[test]
fn flagness() {
    assert!(c4().is_flag());
    // 1-skeleton of the tetrahedron boundary is K4; the 4-clique is unfilled
    assert!(!boundary_simplex(3).is_flag());
    // the 3-cycle without its triangle
    assert!(!polygon(3).is_flag());
    assert!(k33().is_flag());
}

#[test]
fn links() {
    let bd = boundary_simplex(3);
    let lk = bd.link(&s(&["1", "2"])).unwrap();
    assert_eq!(lk, SimplicialComplex::from_labels(&[&["3"], &["4"]]));
    assert_eq!(bd.link(&Simplex::empty()).unwrap(), bd);
    assert_eq!(c4().link(&s(&["a"])).unwrap(), SimplicialComplex::from_labels(&[&["b"], &["d"]]));
    assert!(matches!(c4().link(&s(&["a", "c"])), Err(Error::SimplexNotPresent(_))));
}

#[test]
fn removals() {
    let path = c4().remove_vertex(&"a".into()).unwrap();
    assert_eq!(path, SimplicialComplex::from_labels(&[&["b", "c"], &["c", "d"]]));
    let bd = boundary_simplex(3).remove_simplices(&[s(&["1", "2"])]).unwrap();
    assert_eq!(bd.f_vector().proper(), &[4, 5, 2]);
}

#[test]
fn suspension_of_hexagon_minus_suspension_edges() {
    let sh = polygon(6).suspension_with("u".into(), "v".into());
    assert_eq!(sh.f_vector().proper(), &[8, 18, 12]);
    let one = sh.remove_simplices(&[s(&["u", "2"])]).unwrap();
    assert_eq!(one.edges().len(), 17);
    // removing the six suspension edges to the wrong parity gives the cube
    let six: Vec<Simplex> =
        ["2", "4", "6"].iter().map(|x| s(&["u", x])).chain(["1", "3", "5"].iter().map(|x| s(&["v", x]))).collect();
    let cube = sh.remove_simplices(&six).unwrap();
    assert_eq!(cube.edges().len(), 12);
    assert!(is_isomorphic(&cube, &cube_one_skeleton()));
}

#[test]
fn joins() {
    let s0 = octahedron(1);
    let j = s0.join(&s0);
    assert!(is_isomorphic(&j, &c4()));
    assert_eq!(j.num_vertices(), 4, "colliding labels are primed");
    let o3 = j.join(&s0);
    assert_eq!(o3.f_vector().proper(), &[6, 12, 8]);
    assert!(is_isomorphic(&o3, &octahedron(3)));
    assert_eq!(polygon(6).suspension().f_vector().proper(), &[8, 18, 12]);
    let cone = polygon(5).cone("c".into());
    assert_eq!(cone.f_vector().proper(), &[6, 10, 5]);
}

#[test]
fn isomorphism_examples() {
    assert!(find_isomorphism(&c4(), &octahedron(2), 40).unwrap().is_some());
    assert!(find_isomorphism(&c4(), &polygon(5), 40).unwrap().is_none());
    assert!(matches!(find_isomorphism(&polygon(50), &polygon(50), 40), Err(Error::SizeLimitExceeded { .. })));
    // same f-vector, different complexes: C6 vs two triangles' boundaries
    let disjoint = SimplicialComplex::from_simplices(
        polygon(3).simplices().cloned().chain(polygon(3).rename(|v| v.primed()).simplices().cloned()),
    );
    assert_eq!(disjoint.f_vector(), polygon(6).f_vector());
    assert!(!is_isomorphic(&disjoint, &polygon(6)));
}

#[test]
fn isomorphism_is_a_simplicial_bijection() {
    let a = octahedron(3);
    let b = octahedron(1).join(&octahedron(1)).join(&octahedron(1));
    let iso = find_isomorphism(&a, &b, 40).unwrap().unwrap();
    for sx in a.simplices() {
        assert!(b.contains(&iso::map_simplex(&iso, sx)));
    }
}

#[test]
fn catalog() {
    let k = special_complex("K33", None).unwrap().complex;
    assert_eq!(k.f_vector().proper(), &[6, 9]);
    assert!(k.is_flag());
    assert_eq!(special_complex("polygon", Some(5)).unwrap().complex, polygon(5));
    assert!(matches!(special_complex("nope", None), Err(Error::UnknownCatalogName(_))));
    for name in catalog_names() {
        let entry = special_complex(name, Some(3)).unwrap();
        assert!(entry.complex.is_downward_closed(), "{name}");
    }
    assert_eq!(super::catalog::three_join(2).f_vector().proper(), &[6, 9]);
    assert!(is_isomorphic(&super::catalog::three_join(2), &k33()));
}

#[test]
fn join_decomposition_finds_factors() {
    let f = octahedron(3).join_decomposition().unwrap();
    assert_eq!(f.len(), 3);
    assert!(polygon(5).join_decomposition().is_none());
    let cone = polygon(5).cone("c".into());
    let parts = cone.join_decomposition().unwrap();
    assert_eq!(parts.len(), 2);
}

#[test]
fn json_round_trip() {
    let c = octahedron(2).with_vertices(["iso".into()]);
    let text = serde_json::to_string(&c).unwrap();
    let back: SimplicialComplex = serde_json::from_str(&text).unwrap();
    assert_eq!(back, c);
    let bad = r#"{"vertices":["a"],"maximal_simplices":[["a","b"]]}"#;
    assert!(serde_json::from_str::<SimplicialComplex>(bad).is_err());
}
