use serde::{Deserialize, Serialize};

use super::graph::Graph;
use super::scene::{is_scene, scene_ids, scene_view, Scene, SceneKind, Timestamp};
use super::term::Term;
use super::vocab::kgc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ViolationCode {
    BothPredProp,
    NoPredProp,
    MissingInfosource,
    DanglingSceneLink,
    BadTimeLiteral,
    NegationWithoutPositive,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Violation {
    pub scene: Term,
    pub code: ViolationCode,
    pub detail: String,
}

/// A verb is negative when typed `kgc:NegativeVerb` or when it carries a
/// `kgc:Not`/`kgc:canNot` link.
pub(crate) fn is_negative_verb(g: &Graph, verb: &Term) -> bool {
    g.has_type(verb, &kgc("NegativeVerb")) || !negation_targets(g, verb).is_empty()
}

fn negation_targets<'g>(g: &'g Graph, verb: &Term) -> Vec<&'g Term> {
    let mut out = g.objects(verb, &kgc("Not"));
    out.extend(g.objects(verb, &kgc("canNot")));
    out
}

/// Checks one scene view against the schema rules. Raw `kgc:time` literals
/// and link targets are looked up in `g`.
pub fn validate_scene(g: &Graph, scene: &Scene) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |code, detail: String| {
        out.push(Violation {
            scene: scene.id.clone(),
            code,
            detail,
        })
    };

    match (&scene.predicate, &scene.property) {
        (Some(p), Some(q)) => push(
            ViolationCode::BothPredProp,
            format!("scene has both hasPredicate {p} and hasProperty {q}"),
        ),
        (None, None) => push(
            ViolationCode::NoPredProp,
            "scene has neither hasPredicate nor hasProperty".into(),
        ),
        _ => {}
    }

    if matches!(scene.kind, SceneKind::Statement | SceneKind::Thought) && scene.info_source.is_none() {
        push(
            ViolationCode::MissingInfosource,
            format!("{:?} scene has no infoSource", scene.kind),
        );
    }

    for (relation, target) in &scene.links {
        if !is_scene(g, target) {
            push(
                ViolationCode::DanglingSceneLink,
                format!("{relation:?} link points at {target}, which is not a scene"),
            );
        }
    }

    for value in g.objects(&scene.id, &kgc("time")) {
        if Timestamp::from_term(value).is_none() {
            push(
                ViolationCode::BadTimeLiteral,
                format!("time value {value} is not an xsd:dateTime"),
            );
        }
    }

    for verb in [&scene.predicate, &scene.property].into_iter().flatten() {
        if !is_negative_verb(g, verb) {
            continue;
        }
        let targets = negation_targets(g, verb);
        if targets.is_empty() {
            push(
                ViolationCode::NegationWithoutPositive,
                format!("negative verb {verb} has no Not/canNot link"),
            );
        }
        for target in targets {
            if target.as_iri().is_none() || is_negative_verb(g, target) {
                push(
                    ViolationCode::NegationWithoutPositive,
                    format!("negative verb {verb} links to {target}, which is not a positive verb"),
                );
            }
        }
    }
    out
}

/// All schema violations in the graph, sorted by (scene, code).
pub fn validate_schema(g: &Graph) -> Vec<Violation> {
    let mut out: Vec<Violation> = scene_ids(g)
        .iter()
        .filter_map(|id| scene_view(g, id).ok())
        .flat_map(|s| validate_scene(g, &s))
        .collect();
    out.sort();
    out
}
