use frey_core::eliminate::{eliminate_all, EliminationCertificate, Verdict};
use frey_core::ingest::{self, parse_newforms};

const FIXTURE: &str = include_str!("../../../fixtures/newforms_d19.toml");

#[test]
fn fixture_loads_sorted() {
    let forms = parse_newforms(FIXTURE).unwrap();
    let labels: Vec<&str> = forms.iter().map(|f| f.label.as_str()).collect();
    assert_eq!(labels, ["2888.a", "2888.b", "2888.c"]);
    assert_eq!(forms[2].degree(), 2);
    assert_eq!(forms[2].char_order(), 2);
}

#[test]
fn loading_is_order_independent() {
    let (head, rest) = FIXTURE.split_once("[[newform]]").unwrap();
    let mut blocks: Vec<String> = rest.split("[[newform]]").map(|b| format!("[[newform]]{b}")).collect();
    blocks.reverse();
    let permuted = format!("{head}{}", blocks.concat());
    assert_ne!(permuted, FIXTURE);
    let a = parse_newforms(FIXTURE).unwrap();
    let b = parse_newforms(&permuted).unwrap();
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.label, y.label);
        assert_eq!(x.ap, y.ap);
    }
}

#[test]
fn duplicate_labels_rejected() {
    let (_, rest) = FIXTURE.split_once("[[newform]]").unwrap();
    let first = rest.split("[[newform]]").next().unwrap();
    let doubled = format!("{FIXTURE}\n[[newform]]{first}");
    assert!(matches!(parse_newforms(&doubled), Err(ingest::IngestError::DuplicateLabel(_))));
}

#[test]
fn certificate_round_trip() {
    let forms = parse_newforms(FIXTURE).unwrap();
    let digest = ingest::sha256_hex(FIXTURE.as_bytes());
    let cert = eliminate_all(&[7, 3, 5, 3], 19, &forms, 13, Some(digest)).unwrap();
    assert_eq!(cert.ells, [3, 5, 7]);
    assert!(cert.is_consistent());
    let verdicts: Vec<Verdict> = cert.forms.iter().map(|f| f.verdict.clone()).collect();
    assert_eq!(verdicts, [Verdict::Bounded, Verdict::NotEliminable, Verdict::Bounded]);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    ingest::write_certificate(&cert, &path).unwrap();
    let (_, back): (_, EliminationCertificate) = ingest::read_certificate(&path).unwrap();
    assert_eq!(back, cert);
    assert_eq!(ingest::canonical_body(&back).unwrap(), ingest::canonical_body(&cert).unwrap());
}

#[test]
fn missing_coefficient_is_an_error() {
    let forms = parse_newforms(FIXTURE).unwrap();
    assert!(eliminate_all(&[13], 19, &forms, 13, None).is_err());
}
