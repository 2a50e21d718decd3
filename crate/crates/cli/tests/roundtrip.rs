use semikernel::coring::{check_semicoring, gallery};
use semikernel_cli::doc::{coring_document, coring_value, semiring_value, to_text};
use semikernel_cli::{parse, Decl};

#[test]
fn gallery_round_trips_through_text() {
    for c in gallery().unwrap() {
        let text = to_text(&coring_document(&c, vec![]).unwrap());
        let doc = parse(&text).unwrap_or_else(|e| panic!("{}: {e}\n{text}", c.name));
        let Some(Decl::Coring(back)) = doc.get(&c.name) else { panic!("{} missing", c.name) };
        let base = semiring_value(c.base())["name"].as_str().unwrap().to_string();
        assert_eq!(coring_value(back, &base).unwrap(), coring_value(&c, &base).unwrap(), "{}", c.name);
        let again = to_text(&coring_document(back, vec![]).unwrap());
        assert_eq!(again, text, "{}", c.name);
        assert!(check_semicoring(back).unwrap().passed());
    }
}

