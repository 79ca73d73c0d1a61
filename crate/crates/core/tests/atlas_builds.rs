use std::time::Instant;

use srl_core::atlas::{build, order_formula, parse_group_spec, projective_order_formula, ElementKind, Family};

const SUPPORTED: &[&str] = &[
    "SL(2,3)", "PSL(2,5)", "PSL(2,7)", "PSL(2,8)", "PSL(2,9)", "PSL(2,11)", "PSL(2,13)", "GL(2,4)", "PGL(2,9)",
    "SL(3,2)", "PSL(3,3)", "GL(3,3)", "PSL(3,4)", "SL(4,2)", "PSL(4,3)", "Sp(4,2)", "Sp(4,3)", "PSp(4,3)",
    "Sp(6,2)", "SU(2,3)", "SU(3,2)", "SU(3,3)", "PSU(3,3)", "GU(3,2)", "PSU(3,4)", "PGU(4,2)", "SU(4,2)",
    "PSU(4,3)", "OmegaPlus(4,3)", "OmegaPlus(6,3)", "OmegaMinus(6,3)", "OmegaMinus(4,3)",
];

#[test]
fn every_build_matches_its_order_formula() {
    for s in SUPPORTED {
        let start = Instant::now();
        let spec = parse_group_spec(s).unwrap();
        let built = build(&spec).unwrap_or_else(|e| panic!("{s}: {e}"));
        let srl_core::atlas::GroupSpec::Classical { family, n, q } = spec else { unreachable!() };
        let lin = built.linear.as_ref().unwrap();
        assert_eq!(lin.matrix_order, order_formula(family.linear(), n, q).unwrap(), "{s}");
        assert_eq!(lin.projective.group.order(), projective_order_formula(family, n, q).unwrap(), "{s}");
        if family.is_projective() {
            assert_eq!(built.group.order(), order_formula(family, n, q).unwrap(), "{s}");
        }
        eprintln!("{s}: {} gens, {:?}", lin.generators.len(), start.elapsed());
    }
}

#[test]
fn distinguished_elements_lie_in_their_groups() {
    let cases = [
        ("PSL(3,3)", ElementKind::Transvection),
        ("SL(3,3)", ElementKind::Transvection),
        ("Sp(4,3)", ElementKind::Transvection),
        ("PSp(4,3)", ElementKind::Transvection),
        ("PSU(3,3)", ElementKind::Transvection),
        ("PGU(4,2)", ElementKind::Reflection),
        ("OmegaPlus(6,3)", ElementKind::LongRoot),
        ("OmegaMinus(6,3)", ElementKind::LongRoot),
    ];
    for (s, kind) in cases {
        let built = build(&parse_group_spec(s).unwrap()).unwrap();
        let lin = built.linear.as_ref().unwrap();
        let (m, p) = lin.distinguished(kind).unwrap();
        assert!(built.group.contains(&p), "{s}");
        assert_eq!(p.order(), 3, "{s}");
        assert_eq!(lin.detect_kind(&p), kind, "{s}");
        let fixed = m.minus_identity().rank();
        if kind == ElementKind::Transvection {
            assert_eq!(fixed, 1, "{s}: fixed space has dimension n-1");
        }
    }
    let _ = Family::ALL;
}
