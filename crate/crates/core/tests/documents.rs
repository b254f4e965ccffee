mod common;

use framecheck::io::{builtin_documents, parse_set, parse_system, set_to_json, System, SystemDoc, BUILTINS};
use framecheck::spectral::SpectralGenerator;
use framecheck::{FrameError, SpectralSet};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn generators(s: &System) -> Vec<SpectralGenerator> {
    match s {
        System::Translation(t) => t.entries().iter().map(|e| (*e.generator).clone()).collect(),
        System::Affine(a) => a.generators.iter().map(|g| (**g).clone()).collect(),
    }
}

fn reserialize(s: &System) -> System {
    let doc = match s {
        System::Translation(t) => SystemDoc::from_translation(t).unwrap(),
        System::Affine(a) => SystemDoc::from_affine(a).unwrap(),
    };
    parse_system(&doc.to_json().to_string()).unwrap()
}

fn same_values(a: &[SpectralGenerator], b: &[SpectralGenerator]) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(f, g)| {
            (-400..400).all(|i| {
                let x = i as f64 / 256.0;
                (f.eval_f64(&[x]) - g.eval_f64(&[x])).norm() <= 1e-15
            })
        })
}

#[test]
fn builtins_survive_a_roundtrip() {
    for name in BUILTINS {
        for (file, doc) in builtin_documents(name).unwrap() {
            let text = doc.to_string();
            if file == "E.json" {
                let e = parse_set(&text).unwrap();
                assert_eq!(parse_set(&set_to_json(&e).to_string()).unwrap(), e);
                continue;
            }
            let sys = parse_system(&text).unwrap();
            let back = reserialize(&sys);
            assert!(same_values(&generators(&sys), &generators(&back)), "{file}");
        }
    }
}

#[test]
fn unknown_builtin_is_an_error() {
    assert!(builtin_documents("nope").is_err());
}

#[test]
fn malformed_documents_are_parse_errors() {
    for text in [
        "{",
        r#"{"kind": "wavelet", "dim": 1, "generators": []}"#,
        r#"{"kind": "translation", "dim": 1, "generators": [{"name": "shannon"}]}"#,
    ] {
        assert!(matches!(parse_system(text), Err(FrameError::Parse(_))), "{text}");
    }
    assert!(parse_set(r#"[["1/2", "x"]]"#).is_err());
}

#[test]
fn overlapping_set_boxes_are_merged() {
    let u = parse_set(r#"[["0", "1/2"], ["1/4", "1"]]"#).unwrap();
    assert_eq!(u.measure(), framecheck::rational::q(1));
    let e: SpectralSet = parse_set(r#"[["-1/4", "1/4"]]"#).unwrap();
    assert_eq!(e.boxes().len(), 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn random_systems_roundtrip(seed in any::<u64>(), kind in 0usize..4) {
        let c = common::random_case(&mut ChaCha8Rng::seed_from_u64(seed), kind);
        for sys in [c.h, c.g] {
            let s = System::Translation(sys);
            let back = reserialize(&s);
            prop_assert!(same_values(&generators(&s), &generators(&back)));
        }
    }
}
