use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::sync::Arc;

use serde_json::{json, Value};
use sleuth_core::eval::{aggregate, evaluate_trace, paired_t_test, Deviation, ExplanationTrace, ScoreTable};
use sleuth_core::ibis::{discuss, IbisGraph, IbisNode, Rulebooks};
use sleuth_core::kg::{parse_turtle, validate_schema, Graph, Term};
use sleuth_core::query::{match_pattern, parse_pattern};
use sleuth_core::rules::{find_incident, parse_rules, run_mom, Derivation, Incident, Rule};
use sleuth_core::solver::{backbone, enumerate_models, load_scenario, scenario_report, solve_weighted, Verdict};
use sleuth_core::tensor::{build_tensor, complete, hooi};

use crate::{read, Cli, Command, Failure, Report};

pub(crate) fn dispatch(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::Validate { graph } => validate(graph),
        Command::Query { graph, pattern } => query(graph, pattern),
        Command::Mom { graph, rules, incident } => mom(graph, rules, incident.as_deref()),
        Command::Sat {
            spec,
            enumerate,
            max_models,
            weighted,
            backbone,
            verdict_pred,
        } => sat(spec, *enumerate, *max_models, *weighted, *backbone, verdict_pred),
        Command::Tucker {
            graph,
            ranks,
            iters,
            top_k,
        } => tucker(graph, ranks, *iters, *top_k, cli.common.seed),
        Command::Ibis {
            graph,
            rules,
            incident,
            export,
            dot,
        } => ibis(graph, rules, incident.as_deref(), export.as_ref(), dot.as_ref()),
        Command::Eval {
            table,
            population,
            paired_t,
            alpha,
            trace,
            truth,
        } => eval(
            table.as_ref(),
            *population,
            paired_t.as_deref(),
            *alpha,
            trace.as_ref(),
            truth.as_deref(),
        ),
    }
}

fn load_graph(path: &PathBuf) -> Result<Graph, Failure> {
    parse_turtle(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_rules(path: &PathBuf, g: &Graph) -> Result<Vec<Rule>, Failure> {
    parse_rules(&read(path)?, g.prefixes()).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Plain IRI text for IRIs, N-Triples syntax otherwise.
fn iri(t: &Term) -> String {
    t.as_iri().map_or_else(|| t.to_string(), |i| i.as_str().to_string())
}

/// A full IRI, or `prefix:local` expanded with the graph's prefixes.
fn resolve(g: &Graph, text: &str) -> Result<Term, Failure> {
    let expanded = match text.split_once(':') {
        Some((prefix, local)) if !local.starts_with("//") => match g.prefixes().get(prefix) {
            Some(ns) => format!("{ns}{local}"),
            None => return Err(Failure::Usage(format!("unknown prefix in {text:?}"))),
        },
        _ => text.trim_start_matches('<').trim_end_matches('>').to_string(),
    };
    Term::iri(expanded).map_err(|e| Failure::Usage(format!("{text:?}: {e}")))
}

fn incident_of(g: &Graph, given: Option<&str>) -> Result<Term, Failure> {
    match given {
        Some(text) => resolve(g, text),
        None => find_incident(g)
            .ok_or_else(|| Failure::domain("NO_INCIDENT", "the graph names no single mom:incident; pass --incident")),
    }
}

fn scenes(ds: &[&Arc<Derivation>]) -> BTreeSet<String> {
    ds.iter().flat_map(|d| d.scenes_used.iter().map(iri)).collect()
}

fn validate(path: &PathBuf) -> Result<Report, Failure> {
    let g = load_graph(path)?;
    let violations = validate_schema(&g);
    let mut text = String::new();
    for v in &violations {
        let _ = writeln!(
            text,
            "{}\t{}\t{}",
            g.compact(&v.scene),
            json!(v.code).as_str().unwrap_or(""),
            v.detail
        );
    }
    let _ = writeln!(text, "{} violations", violations.len());
    Ok(Report {
        pipeline: "validate",
        scenes_used: violations.iter().map(|v| iri(&v.scene)).collect(),
        steps: json!({ "triples": g.len(), "violations": violations }),
        diagnostics: violations
            .iter()
            .map(|v| format!("{} {:?}: {}", iri(&v.scene), v.code, v.detail))
            .collect(),
        text,
        status: u8::from(!violations.is_empty()),
        ..Report::default()
    })
}

fn query(graph: &PathBuf, pattern: &PathBuf) -> Result<Report, Failure> {
    let g = load_graph(graph)?;
    let p = parse_pattern(&read(pattern)?, &g).map_err(|e| Failure::Usage(format!("{}: {e}", pattern.display())))?;
    let vars: Vec<String> = p.vars().iter().map(|v| v.name().to_string()).collect();
    let bindings = match_pattern(&g, &p);
    let mut text = vars.iter().map(|v| format!("?{v}")).collect::<Vec<_>>().join("\t");
    text.push('\n');
    let mut rows = Vec::new();
    for b in &bindings {
        let cells: Vec<String> = b.values().map(|t| g.compact(t)).collect();
        let _ = writeln!(text, "{}", cells.join("\t"));
        rows.push(
            b.iter()
                .map(|(v, t)| (v.name().to_string(), json!(t)))
                .collect::<serde_json::Map<_, _>>(),
        );
    }
    let _ = writeln!(text, "{} bindings", bindings.len());
    Ok(Report {
        pipeline: "query",
        steps: json!({ "vars": vars, "bindings": rows }),
        text,
        ..Report::default()
    })
}

fn mom(graph: &PathBuf, rules: &PathBuf, incident: Option<&str>) -> Result<Report, Failure> {
    let g = load_graph(graph)?;
    let rules = load_rules(rules, &g)?;
    let incident = incident_of(&g, incident)?;
    let inc = Incident::read(&g, &incident).map_err(|e| Failure::domain(e.code(), e))?;
    let report = run_mom(&g, &rules, &incident).map_err(|e| Failure::domain(e.code(), e))?;
    let c = |t: &Term| g.compact(t);

    let mut text = format!(
        "incident {}: {} at {}\nmotives:\n",
        c(&incident),
        c(&inc.victim),
        c(&inc.crime_scene)
    );
    for m in &report.motives {
        let _ = writeln!(
            text,
            "  {} against {}: {}",
            c(&m.suspect),
            c(&m.victim),
            g.label(&m.motive)
        );
    }
    text.push_str("opportunity:\n");
    for o in &report.opportunities {
        let via: Vec<String> = o.path.iter().map(c).collect();
        let _ = writeln!(
            text,
            "  {} from {} via [{}]",
            c(&o.suspect),
            c(&o.location),
            via.join(", ")
        );
    }
    text.push_str("means:\n");
    for m in &report.means {
        let _ = writeln!(text, "  {} by {}", c(&m.suspect), g.label(&m.method));
    }
    text.push_str("verdict:\n");
    for v in &report.verdict {
        let parts: Vec<&str> = [(v.motive, "motive"), (v.opportunity, "opportunity"), (v.means, "means")]
            .into_iter()
            .filter_map(|(ok, name)| ok.then_some(name))
            .collect();
        let line = format!("  {} {}/3 {}", c(&v.suspect), v.components, parts.join(" "));
        let _ = writeln!(text, "{}", line.trim_end());
    }
    let top: Vec<&Term> = report.top_suspects();
    let names: Vec<String> = top.iter().map(|t| c(t)).collect();
    let _ = writeln!(
        text,
        "top suspects: {}",
        if names.is_empty() {
            "none".into()
        } else {
            names.join(", ")
        }
    );
    let top_entries: Vec<_> = report.verdict.iter().filter(|v| top.contains(&&v.suspect)).collect();
    for v in &top_entries {
        let _ = writeln!(text, "explanation for {}:", c(&v.suspect));
        for d in &v.derivations {
            for line in d.render(&g).lines() {
                let _ = writeln!(text, "  {line}");
            }
        }
    }

    let label_of = |t: &Term| g.label(t);
    let steps = json!({
        "incident": iri(&incident),
        "victim": iri(&inc.victim),
        "crime_scene": iri(&inc.crime_scene),
        "motives": report.motives.iter().map(|m| json!({
            "suspect": iri(&m.suspect),
            "victim": iri(&m.victim),
            "motive": iri(&m.motive),
            "label": label_of(&m.motive),
            "derivation": m.derivation,
        })).collect::<Vec<_>>(),
        "opportunities": report.opportunities.iter().map(|o| json!({
            "suspect": iri(&o.suspect),
            "location": iri(&o.location),
            "path": o.path.iter().map(iri).collect::<Vec<_>>(),
            "derivation": o.derivation,
        })).collect::<Vec<_>>(),
        "means": report.means.iter().map(|m| json!({
            "suspect": iri(&m.suspect),
            "method": iri(&m.method),
            "label": label_of(&m.method),
            "derivation": m.derivation,
        })).collect::<Vec<_>>(),
        "verdict": report.verdict.iter().map(|v| json!({
            "suspect": iri(&v.suspect),
            "components": v.components,
            "motive": v.motive,
            "opportunity": v.opportunity,
            "means": v.means,
        })).collect::<Vec<_>>(),
    });
    let scenes_used = top_entries.iter().flat_map(|v| v.scenes_used.iter().map(iri)).collect();
    Ok(Report {
        pipeline: "mom",
        conclusion: top.iter().map(|t| iri(t)).collect(),
        scenes_used,
        steps,
        text,
        ..Report::default()
    })
}

fn sat(
    spec: &PathBuf,
    list_models: bool,
    max_models: usize,
    weighted: bool,
    show_backbone: bool,
    verdict_pred: &str,
) -> Result<Report, Failure> {
    if max_models == 0 {
        return Err(Failure::Usage("--max-models must be at least 1".into()));
    }
    let (_, grounding) =
        load_scenario(&read(spec)?).map_err(|e| Failure::Usage(format!("{}: {} {e}", spec.display(), e.code())))?;
    let enc = grounding.encode();
    let n = grounding.atoms.len();
    let e = enumerate_models(&enc.cnf, max_models);
    let bb = if e.models.is_empty() {
        BTreeSet::new()
    } else {
        backbone(&enc.cnf).map_err(|e| Failure::domain(e.code(), e))?
    };
    let report = scenario_report(&grounding, &e.models, e.truncated, &bb, verdict_pred);
    let true_atoms = |m: &sleuth_core::solver::Model| -> Vec<String> {
        (1..=n)
            .filter(|&v| m.value(v))
            .map(|v| grounding.atom(v as u32).to_string())
            .collect()
    };

    let mut text = report.to_string();
    let mut steps = json!({ "report": report });
    let mut diagnostics = Vec::new();
    if e.truncated {
        diagnostics.push(format!("enumeration stopped at {max_models} models"));
    }
    if show_backbone && report.satisfiable {
        text.push_str("backbone:\n");
        for l in &report.backbone {
            let _ = writeln!(text, "  {l}");
        }
    }
    if list_models {
        let models: Vec<Vec<String>> = e.models.iter().map(true_atoms).collect();
        text.push_str("models:\n");
        for (i, m) in models.iter().enumerate() {
            let _ = writeln!(text, "  {}: {}", i + 1, m.join(", "));
        }
        steps["models"] = json!(models);
    }
    if weighted && report.satisfiable {
        let w = solve_weighted(&enc.cnf, &enc.soft).map_err(|e| Failure::domain(e.code(), e))?;
        let total = w.weight + enc.soft_constant;
        let atoms = true_atoms(&w.model);
        let _ = writeln!(text, "weighted optimum {total}:");
        for a in &atoms {
            let _ = writeln!(text, "  {a}");
        }
        steps["weighted"] = json!({ "weight": total, "model": atoms });
    }
    let conclusion = report
        .suspects
        .iter()
        .filter(|s| s.verdict == Verdict::GuiltyInAll)
        .map(|s| s.suspect.clone())
        .collect();
    Ok(Report {
        pipeline: "sat",
        conclusion,
        steps,
        diagnostics,
        status: u8::from(!report.satisfiable),
        text,
        ..Report::default()
    })
}

fn tucker(graph: &PathBuf, ranks: &[usize; 3], iters: usize, top_k: usize, seed: u64) -> Result<Report, Failure> {
    if top_k == 0 {
        return Err(Failure::Usage("--top-k must be at least 1".into()));
    }
    let g = load_graph(graph)?;
    let t = build_tensor(&g).map_err(|e| Failure::domain(e.code(), e))?;
    let ranks: [usize; 3] = std::array::from_fn(|m| ranks[m].min(t.dims[m]));
    let f = hooi(&t, ranks, iters, seed).map_err(|e| Failure::domain(e.code(), e))?;
    let cands = complete(&t, &f, top_k);
    let [d0, d1, d2] = t.dims;
    let [r0, r1, r2] = ranks;
    let mut text = format!(
        "# tensor {d0}x{d1}x{d2}, {} observed, ranks {r0},{r1},{r2}, fit {:.6}\n",
        t.nnz(),
        f.fit()
    );
    for c in &cands {
        let _ = writeln!(text, "{:.6}\t{}\t{}\t{}", c.score, c.subject, c.predicate, c.object);
    }
    Ok(Report {
        pipeline: "tucker",
        steps: json!({
            "dims": t.dims,
            "observed": t.nnz(),
            "ranks": ranks,
            "seed": seed,
            "fits": f.fits,
            "candidates": cands,
        }),
        text,
        ..Report::default()
    })
}

fn ibis(
    graph: &PathBuf,
    rules: &PathBuf,
    incident: Option<&str>,
    export: Option<&PathBuf>,
    dot: Option<&PathBuf>,
) -> Result<Report, Failure> {
    let g = load_graph(graph)?;
    let rules = load_rules(rules, &g)?;
    let incident = incident_of(&g, incident)?;
    let d = discuss(
        &g,
        Rulebooks {
            motive: &rules,
            means: &rules,
        },
        &incident,
    )
    .map_err(|e| Failure::domain(e.code(), e))?;
    let doc = d.ibis.export();
    let write = |path: &PathBuf, body: String| {
        fs::write(path, body).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
    };
    if let Some(path) = export {
        write(
            path,
            serde_json::to_string_pretty(&doc).expect("documents serialize") + "\n",
        )?;
    }
    if let Some(path) = dot {
        write(path, d.ibis.to_dot())?;
    }

    fn outline(ibis: &IbisGraph, node: &IbisNode, depth: usize, text: &mut String) {
        let _ = writeln!(
            text,
            "{:indent$}[{:?}] {}",
            "",
            node.kind,
            node.text,
            indent = depth * 2
        );
        for child in ibis.children(&node.id) {
            outline(ibis, child, depth + 1, text);
        }
    }
    let mut text = String::new();
    for root in d.ibis.roots() {
        outline(&d.ibis, root, 0, &mut text);
    }
    text.push_str("consistency:\n");
    for (suspect, s) in &d.scores {
        let _ = writeln!(text, "  {} {:.3}", g.compact(suspect), s.value);
    }
    let ex = &d.explanation;
    let _ = writeln!(
        text,
        "murderer of {}: {}",
        g.compact(&ex.victim),
        g.compact(&ex.suspect)
    );

    let derivations: Vec<&Arc<Derivation>> = [&ex.how, &ex.why, &ex.opportunity].into_iter().flatten().collect();
    let scores: serde_json::Map<String, Value> = d.scores.iter().map(|(k, v)| (iri(k), json!(v))).collect();
    Ok(Report {
        pipeline: "ibis",
        conclusion: vec![iri(&ex.suspect)],
        scenes_used: scenes(&derivations),
        steps: json!({
            "victim": iri(&d.victim),
            "scores": scores,
            "explanation": ex,
            "ibis": doc,
        }),
        text,
        ..Report::default()
    })
}

fn eval(
    table: Option<&PathBuf>,
    population: bool,
    paired: Option<&[String]>,
    alpha: f64,
    trace: Option<&PathBuf>,
    truth: Option<&str>,
) -> Result<Report, Failure> {
    if table.is_none() && trace.is_none() {
        return Err(Failure::Usage("eval needs --table or --trace".into()));
    }
    let fail = |e: sleuth_core::eval::EvalError| Failure::domain(e.code(), e);
    let mut text = String::new();
    let mut steps = json!({});
    let mut conclusion = Vec::new();
    let mut scenes_used = BTreeSet::new();

    if let Some(path) = trace {
        let t: ExplanationTrace =
            serde_json::from_str(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        let r = evaluate_trace(&t, truth).map_err(fail)?;
        let _ = writeln!(text, "pipeline {}: knowledge usage {}", r.pipeline, r.knowledge_usage);
        if let Some(c) = r.correctness {
            let _ = writeln!(text, "correctness: {}", json!(c).as_str().unwrap_or_default());
        }
        conclusion = t.conclusion.clone();
        scenes_used = t.scenes_used.clone();
        steps["trace"] = json!(r);
    }

    if let Some(path) = table {
        let t = ScoreTable::from_csv(&read(path)?).map_err(fail)?;
        let kind = if population {
            Deviation::Population
        } else {
            Deviation::Sample
        };
        let summary = aggregate(&t, kind).map_err(fail)?;
        text.push_str("column\tn\tmean\tmedian\tsd\taverage\n");
        for s in &summary {
            let _ = writeln!(
                text,
                "{}\t{}\t{:.4}\t{:.4}\t{:.4}\t{}",
                s.column, s.count, s.mean, s.median, s.std_dev, s.display_mean
            );
        }
        steps["columns"] = json!(summary);
        if let Some([a, b]) = paired {
            let col = |name: &String| {
                t.columns
                    .iter()
                    .position(|c| c == name)
                    .ok_or_else(|| Failure::Usage(format!("no column {name:?}")))
            };
            let (ia, ib) = (col(a)?, col(b)?);
            let pairs: Vec<(f64, f64)> = t.cells.iter().filter_map(|row| Some((row[ia]?, row[ib]?))).collect();
            let (xs, ys): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
            let r = paired_t_test(&xs, &ys, alpha).map_err(fail)?;
            let _ = writeln!(
                text,
                "paired t {a} vs {b}: t = {:.4}, df = {}, critical {} at {alpha}, {}",
                r.t,
                r.df,
                r.critical,
                if r.significant {
                    "significant"
                } else {
                    "not significant"
                }
            );
            steps["t_test"] = json!({ "a": a, "b": b, "alpha": alpha, "result": r });
        }
    }
    Ok(Report {
        pipeline: "eval",
        conclusion,
        scenes_used,
        steps,
        text,
        ..Report::default()
    })
}
