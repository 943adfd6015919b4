use super::*;
use crate::complex::catalog::{octahedron, polygon, simplex};
use crate::error::Error;

fn pl(l: &SimplicialComplex) -> CubeComplex {
    basic_construction(l, &canonical_quotient(l)).unwrap()
}

#[test]
fn chamber_counts() {
    let c5 = chamber(&polygon(5));
    assert_eq!(c5.counts(), vec![11, 15, 5]);
    assert_eq!(c5.cube_complex().euler_characteristic(), 1);
    assert_eq!(chamber(&simplex(0)).counts(), vec![2, 1]);
    assert_eq!(chamber(&SimplicialComplex::empty()).counts(), vec![1]);
    let k = chamber(&polygon(5)).cube_complex();
    k.chain.check_boundary_squared().unwrap();
}

#[test]
fn mirrors_are_stars_in_the_face_poset() {
    let c = chamber(&polygon(5));
    // K_s: cells (μ, F) with s ∈ μ; μ ∪ F ranges over simplices containing s
    let m = c.mirror(&VertexId::from("1"));
    // {1}: one cell; each of the edges 12, 15: (σ, ∅) and ({1}, {other})
    assert_eq!(m.len(), 1 + 2 * 2);
}

#[test]
fn chamber_faces_have_alternating_signs() {
    let cell = ChamberCell { mirrors: Simplex::empty(), free: Simplex::from_labels(&["a", "b"]) };
    let faces = cell.faces();
    assert_eq!(faces.len(), 4);
    assert_eq!(faces.iter().map(|f| f.1).sum::<i64>(), 0);
}

#[test]
fn basic_construction_examples() {
    let s0 = pl(&octahedron(1));
    assert_eq!(s0.counts(), &[8, 8]);
    assert_eq!(s0.euler_characteristic(), 0);

    let torus = pl(&polygon(4));
    // 16 chambers, each a square cut into 4 cubes
    assert_eq!(torus.counts(), &[64, 128, 64]);
    assert_eq!(torus.euler_characteristic(), 0);
    assert_eq!(torus.index, 16);

    let square = pl(&simplex(1));
    // four chambers tile one big square
    assert_eq!(square.counts(), &[9, 12, 4]);
    assert_eq!(square.euler_characteristic(), 1);

    let c5 = pl(&polygon(5));
    assert_eq!(c5.counts(), &[152, 320, 160]);
    assert_eq!(c5.euler_characteristic(), -8);
}

#[test]
fn euler_l2_values() {
    assert_eq!(euler_l2(&polygon(4)), Rational::zero());
    assert_eq!(euler_l2(&polygon(5)), Rational::new(-1, 4));
    assert_eq!(euler_l2(&polygon(6)), Rational::new(-1, 2));
    for l in [polygon(4), polygon(5), polygon(6), octahedron(2), octahedron(3), simplex(2)] {
        let chi = pl(&l).euler_characteristic();
        let scale = Rational::from_int(1i64 << l.num_vertices());
        assert_eq!(Rational::from_int(chi), scale * euler_l2(&l));
    }
}

#[test]
fn presentation_round_trip() {
    let l = polygon(5);
    let p = RacgPresentation::of(&l);
    assert_eq!(p.generators.len(), 5);
    assert_eq!(p.relations().len(), 10);
    assert_eq!(p.nerve(), l);
}

#[test]
fn first_betti_numbers() {
    assert_eq!(first_betti_integral(&pl(&octahedron(1))).unwrap(), 1);
    assert_eq!(first_betti_integral(&pl(&polygon(4))).unwrap(), 2);
    assert_eq!(first_betti_integral(&pl(&polygon(5))).unwrap(), 10);
}

#[test]
fn covers_multiply_cells() {
    let circle = pl(&octahedron(1));
    let triple = abelian_p_cover(&circle, 3, &[1]).unwrap();
    assert_eq!(triple.counts(), &[24, 24]);
    assert_eq!(triple.index, 12);
    assert_eq!(first_betti_integral(&triple).unwrap(), 1);

    let surface = pl(&polygon(5));
    for p in [2u64, 3, 5] {
        let cover = abelian_p_cover(&surface, p, &[1]).unwrap();
        assert_eq!(cover.euler_characteristic(), -8 * p as i64);
        // connected: the spanning tree reaches everything
        assert_eq!(first_betti_integral(&cover).unwrap(), 8 * p as usize + 2);
    }

    let torus = pl(&polygon(4));
    let cover = abelian_p_cover(&torus, 2, &[1, 1]).unwrap();
    assert_eq!(cover.euler_characteristic(), 0);
    assert_eq!(first_betti_integral(&cover).unwrap(), 2);
}

#[test]
fn cover_errors() {
    let circle = pl(&octahedron(1));
    assert!(matches!(abelian_p_cover(&circle, 3, &[1, 1]), Err(Error::RankTooLarge { requested: 2, available: 1 })));
    assert!(matches!(abelian_p_cover(&circle, 4, &[1]), Err(Error::MalformedInput(_))));
    let two_points = chamber(&octahedron(1)).cube_complex();
    // the chamber over S⁰ is a path, so it is connected; remove its edges
    let mut disconnected = two_points.clone();
    disconnected.chain.dims.truncate(1);
    disconnected.chain.boundaries.clear();
    disconnected.cells.truncate(1);
    assert!(matches!(abelian_p_cover(&disconnected, 2, &[1]), Err(Error::Disconnected)));
}

#[test]
fn size_bound_is_enforced() {
    let l = polygon(5);
    assert!(matches!(
        basic_construction_bounded(&l, &canonical_quotient(&l), 100),
        Err(Error::SizeLimitExceeded { .. })
    ));
}

#[test]
fn cube_complex_json_round_trip() {
    let x = pl(&polygon(4));
    let text = serde_json::to_string(&x).unwrap();
    let back: CubeComplex = serde_json::from_str(&text).unwrap();
    assert_eq!(back, x);
}
