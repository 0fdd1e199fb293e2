mod common;
mod oracles;

use common::*;
use oracles::turtle::arb_doc_graph;
use proptest::prelude::*;
use sleuth_core::kg::{
    expand_or, parse_turtle, scene_ids, scene_view, serialize_turtle, validate_schema, SceneError, SceneKind, Term,
};

/// Counted by hand from the fixture, section by section.
const FIXTURE_TRIPLES: usize = 217;
const FIXTURE_SCENES: usize = 29;

#[test]
fn fixture_has_hand_counted_size() {
    let g = story();
    assert_eq!(g.len(), FIXTURE_TRIPLES);
    assert_eq!(scene_ids(&g).len(), FIXTURE_SCENES);
}

#[test]
fn fixture_is_schema_valid() {
    assert_eq!(validate_schema(&story()), vec![]);
}

#[test]
fn fixture_round_trips_and_serializes_deterministically() {
    let g = story();
    let text = serialize_turtle(&g);
    assert_eq!(parse_turtle(&text).unwrap(), g);
    assert_eq!(serialize_turtle(&parse_turtle(&text).unwrap()), text);
    assert_eq!(serialize_turtle(&story()), text);
}

#[test]
fn roylott_owns_scene() {
    let g = story();
    let s = scene_view(&g, &sb("s12")).unwrap();
    assert_eq!(s.subjects, vec![sb("Roylott")]);
    assert_eq!(s.predicate, Some(sb("own")));
    assert_eq!(s.what, vec![sb("Baboon"), sb("Cheetah")]);
}

#[test]
fn statement_carries_speaker() {
    let g = story();
    let s = scene_view(&g, &sb("s22")).unwrap();
    assert_eq!(s.kind, SceneKind::Statement);
    assert_eq!(s.info_source, Some(sb("Helen")));
    let langs: Vec<_> = s.sources.iter().map(|l| l.language().unwrap()).collect();
    assert_eq!(langs, ["en", "ja"]);
}

#[test]
fn unknown_scene_id() {
    assert_eq!(
        scene_view(&story(), &sb("s99")),
        Err(SceneError::UnknownScene(sb("s99")))
    );
}

#[test]
fn snake_or_rope_expands_to_two_valid_scenes() {
    let g = story();
    let s = scene_view(&g, &sb("s29")).unwrap();
    let alts = expand_or(&g, &s).unwrap();
    let whats: Vec<_> = alts.iter().map(|a| a.what.clone()).collect();
    assert_eq!(whats, vec![vec![sb("BellRope")], vec![sb("Snake")]]);
    for a in &alts {
        assert!(sleuth_core::kg::validate_scene(&g, a).is_empty());
    }
}

#[test]
fn expansion_count_is_product_of_arities() {
    let doc = r#"
        @prefix kgc: <http://kgc.knowledge-graph.jp/ontology/kgc.owl#> .
        @prefix : <http://ex.org/> .
        :s a kgc:Situation ; kgc:subject :o1 ; kgc:hasPredicate :p ; kgc:what :o2 ; kgc:where :o3 .
        :o1 a kgc:ORobj ; kgc:orTarget :A , :B .
        :o2 a kgc:ORobj ; kgc:orTarget :C , :D , :E .
        :o3 a kgc:ORobj ; kgc:orTarget :F , :G .
    "#;
    let g = parse_turtle(doc).unwrap();
    let s = scene_view(&g, &Term::iri("http://ex.org/s").unwrap()).unwrap();
    assert_eq!(expand_or(&g, &s).unwrap().len(), 12);
}

proptest! {
    #[test]
    fn parse_serialize_parse_is_parse(g in arb_doc_graph()) {
        let once = parse_turtle(&serialize_turtle(&g)).unwrap();
        prop_assert_eq!(&once, &g);
        let twice = parse_turtle(&serialize_turtle(&once)).unwrap();
        prop_assert_eq!(twice, once);
    }
}
