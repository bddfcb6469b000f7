//! Plain-text input documents plus DOT and JSON exporters.
//!
//! Input grammar (line oriented; `#` starts a comment):
//!
//! ```text
//! p = <int>              characteristic (0 or prime), required
//! gen <name> order <int> generator declaration; order 0 = infinite
//! rank = <int>           number of vertices (1..=9), required
//! v<i> = <expr>          diagram vertex label
//! e<i><j> = <expr>       diagram edge label, i < j (absent edge = omit line)
//! q<i><j> = <expr>       full braiding-matrix entry (all of them required)
//! <expr>                 signed product of name^int factors, `1`, or `-1`
//! ```
//!
//! A document uses either `v`/`e` lines (a diagram, lifted to the
//! upper-triangular matrix representative) or `q` lines (a full matrix),
//! never both. `-1` under `p = 2` normalizes to `1` with a warning.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::{json, Value};
use thiserror::Error;

use crate::braiding::{BraidingMatrix, DynkinDiagram};
use crate::cartangraph::{exchange_graph, CartanGraph, GraphError};
use crate::classification::{row_by_id, MatchResult, Report};
use crate::rootsystem::FinitenessVerdict;
use crate::unitgroup::{FieldUnit, GroupError, GroupSpec, SIGN_NAME};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Group(#[from] GroupError),
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        msg: msg.into(),
    }
}

/// What an input document describes.
#[derive(Debug, Clone)]
pub enum ParsedObject {
    Matrix(BraidingMatrix),
    Diagram(DynkinDiagram),
}

impl ParsedObject {
    /// The braiding matrix, lifting diagrams to the upper-triangular
    /// representative (justified by twist invariance).
    pub fn to_braiding(&self) -> BraidingMatrix {
        match self {
            ParsedObject::Matrix(m) => m.clone(),
            ParsedObject::Diagram(d) => d.to_braiding(),
        }
    }
}

#[derive(Debug)]
pub struct ParsedInput {
    pub spec: GroupSpec,
    pub object: ParsedObject,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum EntryKind {
    Vertex,
    Edge,
    Matrix,
}

pub fn parse_input(text: &str) -> Result<ParsedInput, ParseError> {
    let mut p: Option<(usize, u64)> = None;
    let mut rank: Option<(usize, usize)> = None;
    let mut gens: Vec<(String, u64)> = Vec::new();
    let mut entries: BTreeMap<(EntryKind, usize, usize), (usize, String)> = BTreeMap::new();

    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("gen ") {
            let words: Vec<&str> = rest.split_whitespace().collect();
            let [name, "order", order] = words[..] else {
                return Err(syntax(ln, "expected `gen <name> order <int>`"));
            };
            let order: u64 = order
                .parse()
                .map_err(|_| syntax(ln, format!("bad order {order:?}")))?;
            gens.push((name.to_string(), order));
            continue;
        }
        let Some((lhs, rhs)) = line.split_once('=') else {
            return Err(syntax(ln, format!("expected `<key> = <value>`, got {line:?}")));
        };
        let (lhs, rhs) = (lhs.trim(), rhs.trim());
        match lhs {
            "p" => {
                if p.is_some() {
                    return Err(syntax(ln, "duplicate `p`"));
                }
                let v = rhs
                    .parse()
                    .map_err(|_| syntax(ln, format!("bad characteristic {rhs:?}")))?;
                p = Some((ln, v));
            }
            "rank" => {
                if rank.is_some() {
                    return Err(syntax(ln, "duplicate `rank`"));
                }
                let v: usize = rhs
                    .parse()
                    .map_err(|_| syntax(ln, format!("bad rank {rhs:?}")))?;
                if !(1..=9).contains(&v) {
                    return Err(syntax(ln, "rank must be between 1 and 9"));
                }
                rank = Some((ln, v));
            }
            _ => {
                let key = parse_entry_key(lhs, ln)?;
                if entries.insert(key, (ln, rhs.to_string())).is_some() {
                    return Err(syntax(ln, format!("duplicate assignment of {lhs:?}")));
                }
            }
        }
    }

    let (_, p) = p.ok_or_else(|| syntax(0, "missing `p = <int>` line"))?;
    let (_, rank) = rank.ok_or_else(|| syntax(0, "missing `rank = <int>` line"))?;
    let gen_refs: Vec<(&str, u64)> = gens.iter().map(|(n, o)| (n.as_str(), *o)).collect();
    let spec = GroupSpec::new(p, &gen_refs)?;

    let mut warnings = Vec::new();
    let has_matrix = entries.keys().any(|&(k, ..)| k == EntryKind::Matrix);
    let has_diagram = entries.keys().any(|&(k, ..)| k != EntryKind::Matrix);
    if has_matrix && has_diagram {
        return Err(syntax(0, "cannot mix q<i><j> lines with v/e lines"));
    }

    let mut eval = |key: &(EntryKind, usize, usize)| -> Result<Option<FieldUnit>, ParseError> {
        match entries.get(key) {
            None => Ok(None),
            Some((ln, expr)) => parse_expr(expr, &spec, *ln, &mut warnings).map(Some),
        }
    };

    let object = if has_matrix {
        let mut q = Vec::new();
        for i in 1..=rank {
            let mut row = Vec::new();
            for j in 1..=rank {
                let u = eval(&(EntryKind::Matrix, i, j))?
                    .ok_or_else(|| syntax(0, format!("missing entry q{i}{j}")))?;
                row.push(u);
            }
            q.push(row);
        }
        let m = BraidingMatrix::new(spec.clone(), q)
            .expect("rows were built at the declared rank");
        ParsedObject::Matrix(m)
    } else {
        let mut vertices = Vec::new();
        for i in 1..=rank {
            let u = eval(&(EntryKind::Vertex, i, i))?
                .ok_or_else(|| syntax(0, format!("missing vertex v{i}")))?;
            vertices.push(u);
        }
        let mut edges = Vec::new();
        for i in 1..=rank {
            for j in i + 1..=rank {
                if let Some(u) = eval(&(EntryKind::Edge, i, j))? {
                    edges.push(((i - 1, j - 1), u));
                }
            }
        }
        ParsedObject::Diagram(DynkinDiagram::new(vertices, edges))
    };

    // Any leftover entries referenced indices outside the rank.
    for (&(kind, i, j), &(ln, _)) in &entries {
        let ok = match kind {
            EntryKind::Vertex => i <= rank,
            EntryKind::Edge => i < j && j <= rank,
            EntryKind::Matrix => i <= rank && j <= rank,
        };
        if !ok {
            return Err(syntax(ln, format!("index out of range for rank {rank}")));
        }
    }

    Ok(ParsedInput {
        spec,
        object,
        warnings,
    })
}

fn parse_entry_key(lhs: &str, ln: usize) -> Result<(EntryKind, usize, usize), ParseError> {
    let bad = || syntax(ln, format!("unknown key {lhs:?}"));
    let digits = |s: &str, n: usize| -> Result<Vec<usize>, ParseError> {
        let ds: Vec<usize> = s.chars().filter_map(|c| c.to_digit(10)).map(|d| d as usize).collect();
        if ds.len() == n && s.chars().all(|c| c.is_ascii_digit()) && ds.iter().all(|&d| d >= 1) {
            Ok(ds)
        } else {
            Err(bad())
        }
    };
    if let Some(rest) = lhs.strip_prefix('v') {
        let d = digits(rest, 1)?;
        return Ok((EntryKind::Vertex, d[0], d[0]));
    }
    if let Some(rest) = lhs.strip_prefix('e') {
        let d = digits(rest, 2)?;
        if d[0] >= d[1] {
            return Err(syntax(ln, format!("edge key {lhs:?} needs i < j")));
        }
        return Ok((EntryKind::Edge, d[0], d[1]));
    }
    if let Some(rest) = lhs.strip_prefix('q') {
        let d = digits(rest, 2)?;
        return Ok((EntryKind::Matrix, d[0], d[1]));
    }
    Err(bad())
}

/// Parses a signed product of `name^int` factors, `1`, or `-1`.
fn parse_expr(
    expr: &str,
    spec: &GroupSpec,
    ln: usize,
    warnings: &mut Vec<String>,
) -> Result<FieldUnit, ParseError> {
    let expr = expr.trim();
    let (negative, body) = match expr.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, expr),
    };
    if body.is_empty() {
        return Err(syntax(ln, "empty expression"));
    }
    let mut u = spec.identity();
    for factor in body.split('*') {
        let factor = factor.trim();
        if factor == "1" {
            continue;
        }
        let (name, exp) = match factor.split_once('^') {
            Some((n, e)) => {
                let e: i64 = e
                    .trim()
                    .parse()
                    .map_err(|_| syntax(ln, format!("bad exponent in {factor:?}")))?;
                (n.trim(), e)
            }
            None => (factor, 1),
        };
        let g = spec
            .generator_unit(name)
            .map_err(|_| syntax(ln, format!("undeclared generator {name:?}")))?;
        u = u.mul(&g.power(exp));
    }
    if negative {
        if spec.characteristic() == 2 {
            let w = "warning: -1 = 1 in characteristic 2".to_string();
            if !warnings.contains(&w) {
                warnings.push(w);
            }
        }
        u = u.mul(&spec.sign());
    }
    Ok(u)
}

/// Renders a document that `parse_input` maps back to the same spec and
/// object.
pub fn render_input(spec: &GroupSpec, object: &ParsedObject) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p = {}", spec.characteristic());
    for g in spec.generators() {
        if g.name != SIGN_NAME {
            let _ = writeln!(out, "gen {} order {}", g.name, g.order);
        }
    }
    match object {
        ParsedObject::Matrix(m) => {
            let _ = writeln!(out, "rank = {}", m.theta());
            for i in 0..m.theta() {
                for j in 0..m.theta() {
                    let _ = writeln!(out, "q{}{} = {}", i + 1, j + 1, m.entry(i, j));
                }
            }
        }
        ParsedObject::Diagram(d) => {
            let _ = writeln!(out, "rank = {}", d.theta());
            for i in 0..d.theta() {
                let _ = writeln!(out, "v{} = {}", i + 1, d.vertex(i));
            }
            for (i, j, l) in d.edges() {
                let _ = writeln!(out, "e{}{} = {}", i + 1, j + 1, l);
            }
        }
    }
    out
}

/// Undirected DOT rendering of the exchange graph; node label = point id
/// plus the compact diagram string, edge label = 1-based reflection indices.
pub fn export_dot(g: &CartanGraph) -> String {
    let mut out = String::new();
    out.push_str("graph exchange {\n  node [shape=box];\n");
    for p in g.points() {
        let _ = writeln!(
            out,
            "  p{} [label=\"{}: {}\"];",
            p.id,
            p.id,
            p.diagram.compact_string()
        );
    }
    for ((a, b), labels) in &exchange_graph(g).edges {
        let joined = labels
            .iter()
            .map(|i| (i + 1).to_string())
            .collect::<Vec<_>>()
            .join(",");
        let _ = writeln!(out, "  p{a} -- p{b} [label=\"{joined}\"];");
    }
    out.push_str("}\n");
    out
}

fn spec_json(spec: &GroupSpec) -> Value {
    json!({
        "p": spec.characteristic(),
        "generators": spec
            .generators()
            .iter()
            .map(|g| json!({ "name": g.name, "order": g.order }))
            .collect::<Vec<_>>(),
    })
}

fn unit_json(u: &FieldUnit) -> Value {
    json!({ "exponents": u.exponents(), "display": u.display() })
}

fn diagram_json(d: &DynkinDiagram) -> Value {
    json!({
        "vertices": (0..d.theta()).map(|i| unit_json(d.vertex(i))).collect::<Vec<_>>(),
        "edges": d
            .edges()
            .map(|(i, j, l)| json!({ "i": i + 1, "j": j + 1, "label": unit_json(l) }))
            .collect::<Vec<_>>(),
    })
}

/// JSON for a built Cartan graph: every point's diagram, Cartan matrix, and
/// reflection neighbors; keys sorted, deterministic.
pub fn graph_json(g: &CartanGraph) -> Value {
    json!({
        "groupspec": spec_json(g.spec()),
        "theta": g.theta(),
        "origin": g.origin(),
        "points": g
            .points()
            .iter()
            .map(|p| json!({
                "id": p.id,
                "diagram": diagram_json(&p.diagram),
                "gcm": p.gcm.rows(),
                "neighbors": p.neighbor,
            }))
            .collect::<Vec<_>>(),
    })
}

/// JSON for a graph-construction failure, e.g. a non-i-finite point.
pub fn graph_error_json(e: &GraphError) -> Value {
    match e {
        GraphError::NotIFinite { point, i, j, diagram } => json!({
            "verdict": "not_i_finite",
            "at": { "point": point, "i": i + 1, "j": j + 1, "diagram": diagram },
        }),
        GraphError::PointLimitExceeded { limit } => json!({
            "verdict": "point_limit_exceeded",
            "max_points": limit,
        }),
    }
}

/// JSON for a root enumeration outcome.
pub fn roots_json(g: &CartanGraph, v: &FinitenessVerdict) -> Value {
    match v {
        FinitenessVerdict::Finite(r) => json!({
            "verdict": "finite",
            "iterations": r.iterations,
            "positive_root_count": (0..g.points().len())
                .map(|x| r.positive(x).len())
                .collect::<Vec<_>>(),
            "positive_roots": (0..g.points().len())
                .map(|x| r.positive(x).iter().cloned().collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        }),
        FinitenessVerdict::ExceededLimits { stage } => json!({
            "verdict": "exceeded_limits",
            "stage": stage,
        }),
        FinitenessVerdict::MixedSignRoot { point, root } => json!({
            "verdict": "mixed_sign_root",
            "point": point,
            "root": root,
        }),
    }
}

/// JSON for classification matches.
pub fn matches_json(matches: &[MatchResult]) -> Value {
    let rows: Vec<Value> = matches
        .iter()
        .map(|m| {
            let assignment = m.assignment.as_ref().map(|v| {
                let name = row_by_id(m.row).map_or("q", |r| r.param_name);
                json!({ name: unit_json(v) })
            });
            json!({
                "row": m.row,
                "assignment": assignment,
                "base": m.base + 1,
                "perm": m.perm.iter().map(|&x| x + 1).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "matches": rows })
}

/// JSON for per-row verification reports.
pub fn reports_json(reports: &[(u64, Report)]) -> Value {
    let rows: Vec<Value> = reports
        .iter()
        .map(|(p, r)| {
            json!({
                "row": r.row,
                "p": p,
                "ok": r.ok(),
                "points": r.points,
                "positive_roots": r.positive_roots,
                "standard": r.standard,
                "neighborhood": r.neighborhood.as_ref().map(|n| format!("{n:?}")),
                "failures": r.failures,
            })
        })
        .collect();
    json!({ "rows": rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartangraph::{build_graph, DEFAULT_MAX_POINTS};
    use crate::rootsystem::{enumerate_roots, DEFAULT_MAX_POS_ROOTS};
    use proptest::prelude::*;

    const ROW1_DOC: &str = "\
# row-1 style chain over F_7(q)
p = 7
gen q order 0
rank = 4
v1 = q
v2 = q
v3 = q
v4 = q
e12 = q^-1
e23 = q^-1
e34 = q^-1
";

    #[test]
    fn parses_row1_document() {
        let parsed = parse_input(ROW1_DOC).unwrap();
        assert!(parsed.warnings.is_empty());
        let ParsedObject::Diagram(d) = &parsed.object else {
            panic!("expected a diagram");
        };
        let q = parsed.spec.generator_unit("q").unwrap();
        assert_eq!(d.vertex(0), &q);
        assert_eq!(d.edge_label(0, 1), Some(&q.inverse()));
        assert_eq!(d.edge_label(0, 2), None);
        // The lift puts the edge label above the diagonal and 1 below.
        let m = parsed.object.to_braiding();
        assert_eq!(m.entry(0, 1), &q.inverse());
        assert!(m.entry(1, 0).is_identity());
    }

    #[test]
    fn order_divisible_by_p_is_an_error() {
        let doc = "p = 3\ngen z order 3\nrank = 1\nv1 = z\n";
        assert!(matches!(parse_input(doc), Err(ParseError::Group(_))));
    }

    #[test]
    fn sign_canonicalizes_and_warns_at_p2() {
        let doc = "p = 5\ngen z order 3\nrank = 1\nv1 = -z^-1\n";
        let parsed = parse_input(doc).unwrap();
        let ParsedObject::Diagram(d) = &parsed.object else {
            panic!()
        };
        let s = &parsed.spec;
        let z = s.generator_unit("z").unwrap();
        assert_eq!(d.vertex(0), &s.sign().mul(&z.power(2)));

        let doc2 = "p = 2\ngen z order 3\nrank = 1\nv1 = -z\n";
        let parsed2 = parse_input(doc2).unwrap();
        assert_eq!(parsed2.warnings.len(), 1);
        let ParsedObject::Diagram(d2) = &parsed2.object else {
            panic!()
        };
        assert_eq!(d2.vertex(0), &parsed2.spec.generator_unit("z").unwrap());
    }

    #[test]
    fn rejects_malformed_documents() {
        assert!(parse_input("rank = 4\n").is_err()); // no p
        assert!(parse_input("p = 5\n").is_err()); // no rank
        assert!(parse_input("p = 5\nrank = 2\nv1 = 1\n").is_err()); // missing v2
        assert!(parse_input("p = 5\nrank = 2\nv1 = 1\nv1 = 1\nv2 = 1\n").is_err());
        assert!(parse_input("p = 5\nrank = 2\nv1 = w\nv2 = 1\n").is_err());
        assert!(parse_input("p = 5\nrank = 2\nq11 = 1\nv1 = 1\nv2 = 1\n").is_err());
        assert!(parse_input("p = 5\nrank = 1\nv1 = 1\nv4 = 1\n").is_err());
        assert!(parse_input("p = 5\nrank = 2\ne21 = 1\nv1 = 1\nv2 = 1\n").is_err());
    }

    #[test]
    fn dot_export_row6_is_deterministic() {
        let doc = "\
p = 5
gen q order 0
rank = 4
v1 = -1
v2 = q
v3 = q
v4 = q
e12 = q^-1
e23 = q^-1
e34 = q^-1
";
        let parsed = parse_input(doc).unwrap();
        let g = build_graph(&parsed.object.to_braiding(), DEFAULT_MAX_POINTS).unwrap();
        let dot = export_dot(&g);
        assert_eq!(dot, export_dot(&g));
        assert_eq!(dot.matches(" -- ").count(), 4);
        assert_eq!(dot.matches("[label=\"").count(), 5 + 4);
        assert!(dot.starts_with("graph exchange {"));
    }

    #[test]
    fn json_reports_ten_positive_roots_for_row1() {
        let parsed = parse_input(ROW1_DOC).unwrap();
        let g = build_graph(&parsed.object.to_braiding(), DEFAULT_MAX_POINTS).unwrap();
        let v = enumerate_roots(&g, DEFAULT_MAX_POS_ROOTS);
        let j = roots_json(&g, &v);
        assert_eq!(j["verdict"], "finite");
        assert_eq!(j["positive_root_count"], json!([10]));
        let gj = graph_json(&g);
        assert_eq!(gj["points"].as_array().unwrap().len(), 1);
        assert_eq!(gj["groupspec"]["p"], 7);
    }

    fn arb_spec() -> impl Strategy<Value = GroupSpec> {
        (
            prop::sample::select(vec![0u64, 2, 3, 5, 7]),
            prop::sample::select(vec![0u64, 3, 5, 7, 9, 4]),
            any::<bool>(),
        )
            .prop_filter_map("order divisible by p", |(p, ord, free)| {
                if p != 0 && ord != 0 && ord % p == 0 {
                    return None;
                }
                let mut gens = vec![("z", ord)];
                if free {
                    gens.push(("t", 0));
                }
                GroupSpec::new(p, &gens).ok()
            })
    }

    proptest! {
        // Round-trip: parse(render(doc)) reproduces the same canonical
        // values for random diagrams over random specs.
        #[test]
        fn render_parse_round_trip(
            spec in arb_spec(),
            vexps in prop::collection::vec((-3i64..=3, -3i64..=3), 3),
            eexps in prop::collection::vec(prop::option::of((-3i64..=3, -3i64..=3)), 3),
        ) {
            let z = spec.generator_unit("z").unwrap();
            let t = spec.generator_unit("t").ok();
            let unit = |a: i64, b: i64| {
                let mut u = z.power(a);
                if let Some(t) = &t {
                    u = u.mul(&t.power(b));
                }
                u
            };
            let vertices: Vec<FieldUnit> =
                vexps.iter().map(|&(a, b)| unit(a, b)).collect();
            let pairs = [(0usize, 1usize), (1, 2), (0, 2)];
            let edges = eexps.iter().zip(pairs).filter_map(|(e, ij)| {
                e.map(|(a, b)| (ij, unit(a, b)))
            });
            let d = DynkinDiagram::new(vertices, edges);
            let doc = render_input(&spec, &ParsedObject::Diagram(d.clone()));
            let reparsed = parse_input(&doc).unwrap();
            prop_assert_eq!(&reparsed.spec, &spec);
            let ParsedObject::Diagram(d2) = reparsed.object else {
                return Err(TestCaseError::fail("expected a diagram"));
            };
            prop_assert_eq!(d2, d);
        }
    }
}
