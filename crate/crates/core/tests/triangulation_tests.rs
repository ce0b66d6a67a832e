use num_bigint::BigInt;
use toricnp::Rational;
use toricnp::family::{build_delta, ABParams};
use toricnp::triangulation::{
    build_triangulation, cell_volume_check, ordinarity_modulus, verify_triangulation, Mode, Subdivision,
};

fn params(a: u64, b: u64, d: u64, n: usize) -> ABParams {
    ABParams::new(a, b, d, n).unwrap()
}

fn build(a: u64, b: u64, d: u64, n: usize) -> Subdivision {
    build_triangulation(params(a, b, d, n), Mode::Strict).unwrap()
}

#[test]
fn grid_subset_verifies() {
    for (a, b, d, n) in [(1, 1, 2, 1), (1, 2, 3, 2), (2, 1, 4, 2), (2, 2, 5, 2), (1, 1, 3, 3), (2, 1, 2, 3)] {
        let sub = build(a, b, d, n);
        let report = verify_triangulation(&sub).unwrap();
        assert!(report.passed(), "{a},{b},{d},{n}: {}", report.to_json());
        assert!(cell_volume_check(&sub));
    }
}

#[test]
fn cells_have_volume_db_over_s() {
    let sub = build(2, 1, 6, 2);
    let q = sub.params;
    assert_eq!(q.cell_volume(), 2);
    for c in &sub.cells {
        assert_eq!(c.cone_volume(&q), BigInt::from(2));
    }
    let ab = build_delta(q).unwrap();
    let total = Rational::from_integer(BigInt::from(sub.cells.len() * 2));
    assert_eq!(total, ab.cone_d.normalized_volume());
}

#[test]
fn moving_a_vertex_is_caught() {
    let mut sub = build(1, 1, 4, 2);
    let stranger = sub
        .cells
        .iter()
        .flat_map(|c| c.vertices.iter())
        .find(|v| !sub.cells[0].vertices.contains(v) && v.iter().sum::<i64>() > 0)
        .unwrap()
        .clone();
    sub.cells[0].vertices[0] = stranger;
    let report = verify_triangulation(&sub).unwrap();
    assert!(!report.passed());
    let failed: Vec<_> = report.checks.iter().filter(|c| !c.passed).collect();
    assert!(failed.iter().all(|c| c.counterexample.is_some()));
    assert!(failed.iter().any(|c| matches!(c.name, "face_to_face" | "simplices" | "volume")));
}

#[test]
fn dropping_a_cell_breaks_the_volume() {
    let mut sub = build(1, 2, 3, 2);
    sub.cells.pop();
    let report = verify_triangulation(&sub).unwrap();
    assert!(!report.get("volume").unwrap().passed);
}

#[test]
fn extended_mode_handles_four_variables() {
    let q = params(1, 1, 2, 4);
    assert!(build_triangulation(q, Mode::Strict).is_err());
    let sub = build_triangulation(q, Mode::Extended).unwrap();
    let report = verify_triangulation(&sub).unwrap();
    assert!(report.get("simplices").unwrap().passed, "{}", report.to_json());
    assert!(report.get("volume").unwrap().passed);
    assert!(report.get("face_to_face").unwrap().passed);
    assert!(report.get("regularity").unwrap().passed);
}

#[test]
fn outputs_are_well_formed() {
    let sub = build(1, 1, 2, 2);
    let json = sub.to_json();
    assert_eq!(json["cells"].as_array().unwrap().len(), sub.cells.len());
    assert_eq!(json["mode"], "strict");
    let off = sub.to_off();
    let mut lines = off.lines();
    assert_eq!(lines.next(), Some("OFF"));
    let counts: Vec<usize> = lines.next().unwrap().split(' ').map(|x| x.parse().unwrap()).collect();
    assert_eq!(counts[1], sub.cells.len());
    assert_eq!(off.lines().count(), 2 + counts[0] + counts[1]);

    let off3 = build(1, 1, 2, 3).to_off();
    assert!(off3.starts_with("nOFF\n4\n"));
}

#[test]
fn modulus_combines_both_cones() {
    let m = ordinarity_modulus(&params(2, 1, 6, 2));
    assert_eq!(m.modulus, 2);
    let m = ordinarity_modulus(&params(1, 2, 3, 2));
    assert_eq!(m.modulus, 2);
}
