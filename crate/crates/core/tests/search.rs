use halpern::operators::{search_nonspreading_not_nonexpansive, SearchConfig};
use halpern::{Certifier, SelfMap};

#[test]
fn finds_nonspreading_map_that_expands() {
    let cfg = SearchConfig {
        seed: 1,
        confirmation_pairs: 20_000,
        ..SearchConfig::default()
    };
    let found = search_nonspreading_not_nonexpansive(&cfg)
        .unwrap()
        .expect("a candidate within the default budget");
    assert!(found.nonspreading.passed());
    assert!(!found.nonexpansive.passed());

    // independent recheck with fresh samples
    let c = Certifier::new(50_000, 777).unwrap();
    assert!(c.nonspreading(&found.operator).unwrap().passed());
    assert!(!c.nonexpansive(&found.operator).unwrap().passed());
    assert!(c.self_map(&found.operator).unwrap().passed());
    assert_eq!(found.operator.dim(), 1);
}
