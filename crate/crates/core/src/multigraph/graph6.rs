//! graph6 and sparse6 encodings.
//!
//! Both formats pack bits six at a time into printable bytes `63..=126` and
//! share the `N(n)` vertex-count prefix. sparse6 additionally carries parallel
//! edges, which are kept as separate instances; loops are rejected because
//! [`Multigraph`] has none.

use super::Multigraph;
use crate::error::{Error, Result};

const G6_HEADER: &str = ">>graph6<<";
const S6_HEADER: &str = ">>sparse6<<";

fn parse_err<T>(offset: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse { offset, message: message.into() })
}

/// Decodes one graph6 or sparse6 line (trailing newline allowed).
pub fn parse_graph6(line: &str) -> Result<Multigraph> {
    let line = line.trim_end_matches(['\n', '\r']);
    if let Some(rest) = line.strip_prefix(S6_HEADER) {
        return parse_sparse6_body(rest.as_bytes(), S6_HEADER.len());
    }
    if let Some(rest) = line.strip_prefix(G6_HEADER) {
        return parse_graph6_body(rest.as_bytes(), G6_HEADER.len());
    }
    if line.starts_with(':') {
        return parse_sparse6_body(line.as_bytes(), 0);
    }
    parse_graph6_body(line.as_bytes(), 0)
}

fn sixbits(bytes: &[u8], base: usize) -> Result<Vec<u8>> {
    bytes
        .iter()
        .enumerate()
        .map(|(i, &b)| {
            if (63..=126).contains(&b) {
                Ok(b - 63)
            } else {
                parse_err(base + i, format!("byte {b:#04x} is outside the printable range 63..=126"))
            }
        })
        .collect()
}

/// Reads `N(n)`; returns `(n, bytes consumed)`.
fn read_n(data: &[u8], base: usize) -> Result<(usize, usize)> {
    let Some(&first) = data.first() else {
        return parse_err(base, "missing vertex count");
    };
    if first < 63 {
        return Ok((first as usize, 1));
    }
    if data.len() >= 2 && data[1] == 63 {
        if data.len() < 8 {
            return parse_err(base + data.len(), "truncated 8-byte vertex count");
        }
        let n = data[2..8].iter().fold(0usize, |acc, &b| (acc << 6) | b as usize);
        return Ok((n, 8));
    }
    if data.len() < 4 {
        return parse_err(base + data.len(), "truncated 4-byte vertex count");
    }
    let n = data[1..4].iter().fold(0usize, |acc, &b| (acc << 6) | b as usize);
    Ok((n, 4))
}

fn parse_graph6_body(bytes: &[u8], base: usize) -> Result<Multigraph> {
    let data = sixbits(bytes, base)?;
    let (n, used) = read_n(&data, base)?;
    let nbits = n * n.saturating_sub(1) / 2;
    let need = nbits.div_ceil(6);
    let have = data.len() - used;
    if have != need {
        return parse_err(
            base + used + have.min(need),
            format!("graph6 body for n={n} needs {need} bytes, found {have}"),
        );
    }
    let body = &data[used..];
    let bit = |k: usize| (body[k / 6] >> (5 - k % 6)) & 1 == 1;
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Multigraph::new(n, edges)
}

fn parse_sparse6_body(bytes: &[u8], base: usize) -> Result<Multigraph> {
    let Some(rest) = bytes.strip_prefix(b":") else {
        return parse_err(base, "sparse6 line must start with ':'");
    };
    let data = sixbits(rest, base + 1)?;
    let (n, used) = read_n(&data, base + 1)?;
    let k = bits_for(n);
    let body = &data[used..];
    let total = body.len() * 6;
    let bit = |p: usize| (body[p / 6] >> (5 - p % 6)) & 1;
    let mut edges = Vec::new();
    let mut v = 0usize;
    let mut pos = 0usize;
    while pos + 1 + k <= total {
        let b = bit(pos);
        let mut x = 0usize;
        for q in 0..k {
            x = (x << 1) | bit(pos + 1 + q) as usize;
        }
        let unit_offset = base + 1 + used + pos / 6;
        pos += 1 + k;
        if b == 1 {
            v += 1;
        }
        if v >= n {
            break;
        }
        if x > v {
            v = x;
        } else if x == v {
            return parse_err(unit_offset, format!("loop at vertex {v} is not supported"));
        } else {
            edges.push((x, v));
        }
    }
    Multigraph::new(n, edges).map_err(|e| Error::Parse { offset: base, message: e.to_string() })
}

fn bits_for(n: usize) -> usize {
    let mut k = 0;
    while n > 1 && (1usize << k) < n {
        k += 1;
    }
    k
}

fn push_n(out: &mut Vec<u8>, n: usize) {
    if n <= 62 {
        out.push(n as u8);
    } else if n <= 258_047 {
        out.push(63);
        for s in [12, 6, 0] {
            out.push(((n >> s) & 63) as u8);
        }
    } else {
        out.push(63);
        out.push(63);
        for s in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> s) & 63) as u8);
        }
    }
}

fn pack(bits: &[u8]) -> Vec<u8> {
    bits.chunks(6)
        .map(|c| c.iter().enumerate().fold(0u8, |acc, (i, &b)| acc | (b << (5 - i))))
        .collect()
}

fn printable(sixes: Vec<u8>) -> String {
    sixes.into_iter().map(|x| (x + 63) as char).collect()
}

/// Encodes a simple graph as graph6 (no header, no newline).
pub fn write_graph6(g: &Multigraph) -> Result<String> {
    if !g.is_simple() {
        return Err(Error::InvalidInput("graph6 cannot encode parallel edges; use sparse6".into()));
    }
    let n = g.n();
    let w = g.weight_matrix();
    let mut bits = Vec::with_capacity(n * n / 2);
    for j in 1..n {
        for i in 0..j {
            bits.push(u8::from(w[i * n + j] > 0));
        }
    }
    while bits.len() % 6 != 0 {
        bits.push(0);
    }
    let mut out = Vec::new();
    push_n(&mut out, n);
    out.extend(pack(&bits));
    Ok(printable(out))
}

/// Encodes a multigraph as sparse6 (leading ':', no newline).
pub fn write_sparse6(g: &Multigraph) -> String {
    let n = g.n();
    let k = bits_for(n);
    let mut pairs: Vec<(usize, usize)> = g.edges().map(|(_, u, v)| (u.max(v), u.min(v))).collect();
    pairs.sort_unstable();
    let mut bits: Vec<u8> = Vec::new();
    let push_x = |bits: &mut Vec<u8>, x: usize| {
        for q in (0..k).rev() {
            bits.push(((x >> q) & 1) as u8);
        }
    };
    let mut last = 0usize;
    for &(j, i) in &pairs {
        if j == last {
            bits.push(0);
            push_x(&mut bits, i);
        } else {
            bits.push(1);
            if j > last + 1 {
                push_x(&mut bits, j);
                bits.push(0);
            }
            push_x(&mut bits, i);
            last = j;
        }
    }
    let pad = (6 - bits.len() % 6) % 6;
    if k < 6 && n == (1 << k) && last == n - 2 && pad > k {
        bits.push(0);
        bits.extend(std::iter::repeat_n(1, pad - 1));
    } else {
        bits.extend(std::iter::repeat_n(1, pad));
    }
    let mut out = Vec::new();
    push_n(&mut out, n);
    out.extend(pack(&bits));
    let mut s = String::from(":");
    s.push_str(&printable(out));
    s
}
