use tetrabound::catalog::{equation_registry, Catalog};
use tetrabound::verify::{Appendix, AppendixData};

#[test]
fn registry_has_ten_resolvable_equations() {
    let c = Catalog::new();
    let reg = equation_registry();
    assert_eq!(reg.len(), 10);
    for spec in reg {
        spec.resolve(&c).unwrap_or_else(|e| panic!("{}: {e}", spec.id));
    }
}

#[test]
fn twenty_factor_sides_are_the_appendix_end_lines() {
    let c = Catalog::new();
    for (a, id) in [(Appendix::A, "r20"), (Appendix::B, "r20-super")] {
        let data = AppendixData::parse(a.embedded(), a.file_name()).unwrap();
        let eq = c.equation(id).unwrap().resolve(&c).unwrap();
        let first = &data.lines.first().unwrap().1;
        let last = &data.lines.last().unwrap().1;
        assert_eq!(first.to_string(), eq.lhs_expr.to_string(), "{id} lhs");
        assert_eq!(last.to_string(), eq.rhs_expr.to_string(), "{id} rhs");
        assert_eq!(data.labels, eq.signature.labels().map(String::from).collect::<Vec<_>>());
        for (_, line) in &data.lines {
            assert_eq!(line.len(), 20);
        }
    }
}

#[test]
fn tetrahedral_ids_have_partners() {
    let c = Catalog::new();
    for id in c.tetrahedral_ids() {
        assert!(c.partner(id).is_ok(), "{id}");
    }
}
