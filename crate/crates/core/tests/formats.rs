//! Text file formats: round trips, bundled data and error paths.

use kuniform::codes::{self, Distance, LinearCode};
use kuniform::gf::FiniteField;
use kuniform::oa::OrthogonalArray;
use kuniform::states::{bundled, PureState};
use kuniform::Error;

fn scratch(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("kuniform-formats-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn code_round_trip() {
    let f = FiniteField::of_order(3).unwrap().into_shared();
    let c = LinearCode::mds(&f, 2).unwrap();
    let path = scratch("tetra.code");
    c.save(&path).unwrap();
    let back = LinearCode::load(&path).unwrap();
    assert_eq!(back.generator(), c.generator());
    assert_eq!(back.length(), 4);
    assert_eq!(back.min_distance().unwrap(), Distance::Finite(3));
}

#[test]
fn bundled_codes_verify_on_load() {
    for (name, q) in [("golay12_3", 3), ("sd12_4", 4)] {
        let c = codes::bundled::by_name(name).unwrap();
        assert_eq!((c.field().order(), c.length(), c.dimension()), (q, 12, 6));
        assert!(c.is_self_dual());
        assert_eq!(c.min_distance().unwrap(), Distance::Finite(6));
        assert_eq!(c.dual_distance().unwrap(), Distance::Finite(6));
    }
    assert!(codes::bundled::by_name("nope").is_err());
}

#[test]
fn code_parse_errors_are_distinct() {
    let short_row = "code 3 1 4 2\n1 0 0 0\n0 1 1\n";
    match LinearCode::parse(short_row) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("expected a parse error, got {other:?}"),
    }
    let rank = "code 3 1 4 2\n1 0 1 2\n2 0 2 1\n";
    assert!(matches!(LinearCode::parse(rank), Err(Error::RankDeficient { rank: 1, expected: 2 })));
    let out_of_field = "code 3 1 4 1\n1 0 3 2\n";
    assert!(matches!(LinearCode::parse(out_of_field), Err(Error::Parse { line: 2, .. })));
    assert!(matches!(LinearCode::parse("code 4 1 2 1\n1 1\n"), Err(Error::NotPrime(4))));
}

#[test]
fn code_comments_are_ignored() {
    let text = "# tetracode\ncode 3 1 4 2\n1 0 1 1 # first\n\n0 1 1 2\n";
    let c = LinearCode::parse(text).unwrap();
    assert_eq!(c.min_distance().unwrap(), Distance::Finite(3));
}

#[test]
fn array_round_trip() {
    let f = FiniteField::of_order(5).unwrap().into_shared();
    let oa = OrthogonalArray::from_code(&LinearCode::mds(&f, 2).unwrap()).unwrap().trim_to_iroa(2, 4).unwrap();
    let path = scratch("rs.oa");
    oa.save(&path).unwrap();
    let back = OrthogonalArray::load(&path).unwrap();
    assert_eq!(back.to_text(), oa.to_text());
    assert_eq!((back.runs(), back.factors(), back.levels(), back.strength()), (25, 4, 5, 2));
}

#[test]
fn state_round_trips() {
    let ghz = PureState::ghz(3, 4).unwrap();
    let path = scratch("ghz.state");
    ghz.save(&path).unwrap();
    assert_eq!(PureState::load(&path).unwrap(), ghz);

    let six = bundled::six_qubit_ame().unwrap();
    assert_eq!(PureState::parse(&six.to_text()).unwrap(), six);

    let float = six.to_float();
    let back = PureState::parse(&float.to_text()).unwrap();
    assert!(!back.is_exact());
    assert_eq!(back.support_len(), 16);
    for (idx, amp) in float.float_terms() {
        assert!((back.amplitude(&idx) - amp).norm() < 1e-15);
    }
}

#[test]
fn bundled_state_shape() {
    let six = bundled::by_name("six_qubit_ame").unwrap();
    assert_eq!((six.parties(), six.dim(), six.support_len()), (6, 2, 16));
    assert!(six.is_exact());
    assert!(bundled::by_name("seven").is_err());
}

#[test]
fn state_norm_is_enforced() {
    let bad = "state 2 2 2 exact\n0 0 1 0\n";
    assert!(matches!(PureState::parse(bad), Err(Error::NormViolation { .. })));
    let bad_float = "state 2 2 1 float\n0 0 0.5 0\n";
    assert!(matches!(PureState::parse(bad_float), Err(Error::NormViolation { .. })));
    assert!(matches!(PureState::parse("state 2 2 1 exact\n0 1 0\n"), Err(Error::Parse { line: 2, .. })));
}
