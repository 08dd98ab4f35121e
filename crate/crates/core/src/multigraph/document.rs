//! The line-oriented multigraph document.
//!
//! ```text
//! mgf 1
//! n 3
//! v 0 left          (optional, one per labelled vertex)
//! e 0 1
//! e 0 1
//! e 1 2
//! ```
//!
//! Edge lines appear in id order and a repeated pair is a parallel instance.
//! Blank lines and lines starting with `#` are ignored.

use sha2::{Digest, Sha256};

use super::Multigraph;
use crate::error::{Error, Result};

pub const VERSION_LINE: &str = "mgf 1";

pub fn write_multigraph(g: &Multigraph) -> String {
    let mut out = String::with_capacity(16 + 12 * g.m());
    out.push_str(VERSION_LINE);
    out.push('\n');
    out.push_str(&format!("n {}\n", g.n()));
    if let Some(labels) = g.labels() {
        for (v, l) in labels.iter().enumerate() {
            out.push_str(&format!("v {v} {l}\n"));
        }
    }
    for (_, u, v) in g.edges() {
        out.push_str(&format!("e {u} {v}\n"));
    }
    out
}

/// `sha256:<hex>` of [`write_multigraph`]; labels are part of the content.
pub fn document_digest(g: &Multigraph) -> String {
    format!("sha256:{:x}", Sha256::digest(write_multigraph(g).as_bytes()))
}

pub fn read_multigraph(doc: &str) -> Result<Multigraph> {
    let mut offset = 0usize;
    let mut version_seen = false;
    let mut n: Option<usize> = None;
    let mut labels: Vec<Option<String>> = Vec::new();
    let mut edges: Vec<[usize; 2]> = Vec::new();
    for raw in doc.split_inclusive('\n') {
        let at = offset;
        offset += raw.len();
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse { offset: at, message };
        if !version_seen {
            if line != VERSION_LINE {
                return Err(err(format!("expected `{VERSION_LINE}`, found `{line}`")));
            }
            version_seen = true;
            continue;
        }
        let mut fields = line.split_whitespace();
        let tag = fields.next().unwrap_or_default();
        let int = |s: Option<&str>, what: &str| -> Result<usize> {
            s.ok_or_else(|| err(format!("missing {what}")))?
                .parse()
                .map_err(|_| err(format!("{what} is not a non-negative integer")))
        };
        match (tag, n) {
            ("n", None) => {
                let count = int(fields.next(), "vertex count")?;
                n = Some(count);
                labels = vec![None; count];
            }
            ("n", Some(_)) => return Err(err("duplicate `n` line".into())),
            (_, None) => return Err(err("`n` line must precede vertices and edges".into())),
            ("v", Some(count)) => {
                let v = int(fields.next(), "vertex id")?;
                if v >= count {
                    return Err(err(format!("vertex {v} is outside 0..{count}")));
                }
                let rest = line[1..].trim_start();
                let label = rest[rest.find(char::is_whitespace).unwrap_or(rest.len())..].trim();
                labels[v] = Some(label.to_string());
            }
            ("e", Some(count)) => {
                let u = int(fields.next(), "first endpoint")?;
                let v = int(fields.next(), "second endpoint")?;
                if fields.next().is_some() {
                    return Err(err("trailing fields after edge".into()));
                }
                if u >= count || v >= count {
                    return Err(err(format!("edge ({u},{v}) has an endpoint outside 0..{count}")));
                }
                if u == v {
                    return Err(err(format!("edge ({u},{v}) is a loop")));
                }
                edges.push([u, v]);
            }
            (other, _) => return Err(err(format!("unknown line tag `{other}`"))),
        }
    }
    let Some(n) = n else {
        return Err(Error::Parse { offset, message: "document has no `n` line".into() });
    };
    let g = Multigraph::from_checked(n, edges);
    if labels.iter().any(Option::is_some) {
        let labels = labels.into_iter().enumerate().map(|(v, l)| l.unwrap_or_else(|| v.to_string())).collect();
        return g.with_labels(labels);
    }
    Ok(g)
}
