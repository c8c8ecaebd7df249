use mplus_core::eval::{Matrix, ModuleFamily, TopLevelAction};
use mplus_core::fock::Rank;
use mplus_core::rational::q;
use mplus_verify::runner::Runner;
use mplus_verify::tables::{compute, emit_tables, golden, parse_tables, Format};

fn r(n: usize) -> Rank {
    Rank::new(n).unwrap()
}

#[test]
fn twisted_s_row_has_the_fractions() {
    let csv = emit_tables(r(2), Format::Csv).unwrap();
    assert!(csv.starts_with("table,element,family,value\n"));
    let row = csv.lines().find(|l| l.contains("S(1,1;2,4)") && l.contains("Tminus")).unwrap();
    assert!(row.contains("-35/32") && row.contains("-5/32"), "{row}");
    assert_eq!(csv.lines().count(), 41);
}

#[test]
fn rank_one_uses_one_by_one_matrices() {
    let json = emit_tables(r(1), Format::Json).unwrap();
    let rows = parse_tables(&json, Format::Json, r(1)).unwrap();
    assert_eq!(rows.len(), 10);
    for (row, action) in rows {
        if row.family == ModuleFamily::Hminus || row.family == ModuleFamily::Tminus {
            let TopLevelAction::Matrix(m) = action else { panic!("{row:?}") };
            assert_eq!(m.dim(), 1);
        }
    }
    assert!(json.contains("\"value\": \"[[-6]]\""), "{json}");
}

#[test]
fn export_round_trips() {
    for (ell, format) in [(3, Format::Csv), (2, Format::Json), (1, Format::Csv)] {
        let text = emit_tables(r(ell), format).unwrap();
        let parsed = parse_tables(&text, format, r(ell)).unwrap();
        let runner = Runner::new(r(ell));
        assert_eq!(parsed.len(), golden(r(ell)).len());
        for (row, action) in parsed {
            let e = mplus_verify::parser::parse_expr(&row.element).unwrap();
            assert_eq!(runner.eval_expr(&e, row.family).unwrap(), action, "{row:?}");
        }
        assert_eq!(emit_tables(r(ell), format).unwrap(), text);
    }
}

#[test]
fn computed_cells_match_golden_values() {
    let rows = compute(r(2)).unwrap();
    let find = |el: &str, fam: ModuleFamily| rows.iter().find(|x| x.element == el && x.family == fam).unwrap().value.clone();
    assert_eq!(find("J1", ModuleFamily::Tplus), "3/128");
    assert_eq!(find("w1", ModuleFamily::Tplus), "1/16");
    assert_eq!(find("S(1,1;2,5)", ModuleFamily::Tminus), Matrix::from_rows(vec![vec![q(0), "315/256".parse().unwrap()], vec!["35/256".parse().unwrap(), q(0)]]).unwrap().to_string());
    assert_eq!(find("J1", ModuleFamily::Mlambda), "l1^4 - 1/2*l1^2");
}

#[test]
fn malformed_exports_are_rejected() {
    assert!(parse_tables("table,element,family,value\n1,w1,Nowhere,0\n", Format::Csv, r(2)).is_err());
    assert!(parse_tables("table,element\n1,w1\n", Format::Csv, r(2)).is_err());
    assert!(parse_tables("[{\"table\": 3}]", Format::Json, r(2)).is_err());
    assert!("xml".parse::<Format>().is_err());
}
