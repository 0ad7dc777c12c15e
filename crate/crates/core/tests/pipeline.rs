use linpres::betti::betti_table;
use linpres::bundles::{line_bundle_pipeline, westwick_pencil};
use linpres::pencil::PencilDocument;
use linpres::rankverify::{assert_constant_rank, CertificationPlan};
use linpres::{GradedModuleWindow, PrimeField, Rationals, WindowDocument};

#[test]
fn window_documents_round_trip_through_json() {
    let f = PrimeField::new(101).unwrap();
    let w = GradedModuleWindow::free(&f, 2, &[0], 0, 6).truncate(2).unwrap();
    let text = serde_json::to_string(&w.to_document()).unwrap();
    let doc: WindowDocument = serde_json::from_str(&text).unwrap();
    let back = doc.to_window(&f).unwrap();
    assert_eq!(betti_table(&back), betti_table(&w));
    assert_eq!(serde_json::to_string(&back.to_document()).unwrap(), text);
}

#[test]
fn westwick_document_certifies_after_reload() {
    let a = westwick_pencil(&Rationals, 2, 2);
    let text = serde_json::to_string(&a.to_document(serde_json::Value::Null)).unwrap();
    let doc: PencilDocument = serde_json::from_str(&text).unwrap();
    let b = doc.to_pencil(&Rationals).unwrap();
    assert_eq!(a, b);
    let plan = CertificationPlan { primes: vec![5, 7], samples: 200, seed: 1 };
    assert!(assert_constant_rank(&b, 4, &plan).is_certified());
}

#[test]
fn line_bundle_pencil_is_square_of_even_rank() {
    let r = line_bundle_pipeline(&Rationals, 2, 3).unwrap();
    assert_eq!((r.pencil.rows(), r.pencil.cols()), (5, 5));
    let plan = CertificationPlan { primes: vec![5, 7], samples: 200, seed: 0 };
    assert!(assert_constant_rank(&r.pencil, 4, &plan).is_certified());
}
