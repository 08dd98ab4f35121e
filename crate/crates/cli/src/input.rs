//! Graph, budget and id-list arguments.

use std::path::Path;

use pdpm_core::constructions::build_gk;
use pdpm_core::matching::Budget;
use pdpm_core::multigraph::document::read_multigraph;
use pdpm_core::multigraph::graph6::parse_graph6;
use pdpm_core::petersen::petersen;
use pdpm_core::Multigraph;

/// A graph argument: a file (multigraph document, or graph6/sparse6 on the
/// first non-blank line) or one of the names `petersen`, `k<n>`,
/// `theta<t>`, `g<k>`.
pub fn load_graph(arg: &str) -> Result<Multigraph, String> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{arg}: {e}"))?;
        return parse_graph_text(&text).map_err(|e| format!("{arg}: {e}"));
    }
    named_graph(arg).ok_or_else(|| format!("{arg}: no such file and not a known graph name"))?
}

pub fn parse_graph_text(text: &str) -> Result<Multigraph, String> {
    let first = text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#')).ok_or("empty graph file")?;
    if first.starts_with("mgf") {
        read_multigraph(text).map_err(|e| e.to_string())
    } else {
        parse_graph6(first).map_err(|e| e.to_string())
    }
}

fn named_graph(name: &str) -> Option<Result<Multigraph, String>> {
    let num = |p: &str| name.strip_prefix(p).and_then(|s| s.parse::<usize>().ok());
    if name == "petersen" {
        return Some(Ok(petersen()));
    }
    if let Some(t) = num("theta") {
        return Some(if t == 0 { Err("theta needs t ≥ 1".into()) } else { Ok(Multigraph::theta(t)) });
    }
    if let Some(n) = num("k") {
        return Some(if n < 2 { Err("k<n> needs n ≥ 2".into()) } else { Ok(Multigraph::complete(n)) });
    }
    if let Some(k) = num("g") {
        return Some(build_gk(k).map(|o| o.graph).map_err(|e| e.to_string()));
    }
    None
}

/// `unlimited`, a node count (`250000`), or a duration (`90s`, `1h`).
pub fn parse_budget(s: &str) -> Result<Budget, String> {
    let s = s.trim();
    if s.is_empty() || s == "unlimited" {
        return Ok(Budget::UNLIMITED);
    }
    if let Ok(n) = s.parse::<u64>() {
        return Ok(Budget::nodes(n));
    }
    humantime::parse_duration(s).map(Budget::time).map_err(|e| format!("budget `{s}`: {e}"))
}

pub fn format_budget(b: &Budget) -> String {
    match (b.nodes, b.time) {
        (None, None) => "unlimited".into(),
        (Some(n), None) => n.to_string(),
        (None, Some(t)) => humantime::format_duration(t).to_string().replace(' ', ""),
        (Some(n), Some(t)) => format!("{n}+{}", humantime::format_duration(t).to_string().replace(' ', "")),
    }
}

pub fn parse_ids(s: &str) -> Result<Vec<usize>, String> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|t| t.trim().parse().map_err(|_| format!("`{t}` is not an id"))).collect()
}

pub fn join_ids(ids: &[usize]) -> String {
    ids.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

/// `e:i` pairs, comma separated.
pub fn parse_slots(s: &str) -> Result<Vec<(usize, usize)>, String> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            let (e, i) = t.split_once(':').ok_or(format!("slot `{t}` is not e:i"))?;
            Ok((e.trim().parse().map_err(|_| format!("bad edge in `{t}`"))?, i.trim().parse().map_err(|_| format!("bad slot in `{t}`"))?))
        })
        .collect()
}

pub fn join_slots(slots: &[(usize, usize)]) -> String {
    slots.iter().map(|(e, i)| format!("{e}:{i}")).collect::<Vec<_>>().join(",")
}
