//! Line-delimited certificates.
//!
//! ```text
//! cert 1
//! claim 2-PDPM
//! graph-digest sha256:...
//! outcome holds
//! verified true
//! seed 0
//! nodes 12
//! wall-time 3ms
//! param k 2
//! witness matching 0 5 9
//! end
//! ```
//!
//! Fields always appear in this order. `param` values are single tokens;
//! lists are comma separated. Everything except `wall-time` is a pure
//! function of the invocation when a single worker is used.

use std::fmt;
use std::time::Duration;

pub const VERSION_LINE: &str = "cert 1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Claim {
    Regular(usize),
    EdgeConnectivity(usize),
    RGraph(usize),
    ThreeConnected,
    UnderlyingCubic,
    CyclicEdgeConnectivity(usize),
    Pdpm(usize),
    NoPdpm(usize),
    FrTriple,
    BfCover,
    Cdc5,
    Special2Factor,
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Claim::Regular(r) => write!(f, "{r}-regular"),
            Claim::EdgeConnectivity(r) => write!(f, "edge-connectivity≥{r}"),
            Claim::RGraph(r) => write!(f, "{r}-graph"),
            Claim::ThreeConnected => f.write_str("3-connected"),
            Claim::UnderlyingCubic => f.write_str("underlying-cubic"),
            Claim::CyclicEdgeConnectivity(k) => write!(f, "cyclic-edge-connectivity≥{k}"),
            Claim::Pdpm(k) => write!(f, "{k}-PDPM"),
            Claim::NoPdpm(k) => write!(f, "no-{k}-PDPM"),
            Claim::FrTriple => f.write_str("FR-triple"),
            Claim::BfCover => f.write_str("BF-cover"),
            Claim::Cdc5 => f.write_str("5-CDC"),
            Claim::Special2Factor => f.write_str("special-2-factor"),
        }
    }
}

impl std::str::FromStr for Claim {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let fixed = [
            ("3-connected", Claim::ThreeConnected),
            ("underlying-cubic", Claim::UnderlyingCubic),
            ("FR-triple", Claim::FrTriple),
            ("BF-cover", Claim::BfCover),
            ("5-CDC", Claim::Cdc5),
            ("special-2-factor", Claim::Special2Factor),
        ];
        if let Some((_, c)) = fixed.iter().find(|(t, _)| *t == s) {
            return Ok(*c);
        }
        let num = |t: &str| t.parse::<usize>().map_err(|_| format!("unknown claim `{s}`"));
        if let Some(rest) = s.strip_prefix("edge-connectivity≥") {
            return Ok(Claim::EdgeConnectivity(num(rest)?));
        }
        if let Some(rest) = s.strip_prefix("cyclic-edge-connectivity≥") {
            return Ok(Claim::CyclicEdgeConnectivity(num(rest)?));
        }
        if let Some(rest) = s.strip_prefix("no-").and_then(|r| r.strip_suffix("-PDPM")) {
            return Ok(Claim::NoPdpm(num(rest)?));
        }
        if let Some(rest) = s.strip_suffix("-PDPM") {
            return Ok(Claim::Pdpm(num(rest)?));
        }
        if let Some(rest) = s.strip_suffix("-regular") {
            return Ok(Claim::Regular(num(rest)?));
        }
        if let Some(rest) = s.strip_suffix("-graph") {
            return Ok(Claim::RGraph(num(rest)?));
        }
        Err(format!("unknown claim `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Holds,
    Refuted,
    Exhausted,
}

impl Outcome {
    fn tag(self) -> &'static str {
        match self {
            Outcome::Holds => "holds",
            Outcome::Refuted => "refuted",
            Outcome::Exhausted => "exhausted",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub claim: Claim,
    pub graph_digest: String,
    pub outcome: Outcome,
    /// Set only after an independent check of the claim passed.
    pub verified: bool,
    pub seed: u64,
    pub nodes: u64,
    pub wall_time: Duration,
    pub params: Vec<(String, String)>,
    pub witness: Vec<(String, Vec<usize>)>,
}

impl Certificate {
    pub fn new(claim: Claim, graph_digest: String) -> Self {
        Certificate {
            claim,
            graph_digest,
            outcome: Outcome::Holds,
            verified: false,
            seed: 0,
            nodes: 0,
            wall_time: Duration::ZERO,
            params: Vec::new(),
            witness: Vec::new(),
        }
    }

    pub fn param(&self, key: &str) -> Option<&str> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn with_param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    pub fn witnesses<'a>(&'a self, kind: &'a str) -> impl Iterator<Item = &'a [usize]> + 'a {
        self.witness.iter().filter(move |(k, _)| k == kind).map(|(_, ids)| ids.as_slice())
    }

    pub fn render(&self) -> String {
        let mut s = format!(
            "{VERSION_LINE}\nclaim {}\ngraph-digest {}\noutcome {}\nverified {}\nseed {}\nnodes {}\nwall-time {}\n",
            self.claim,
            self.graph_digest,
            self.outcome.tag(),
            self.verified,
            self.seed,
            self.nodes,
            humantime::format_duration(Duration::from_millis(self.wall_time.as_millis() as u64)),
        );
        for (k, v) in &self.params {
            s.push_str(&format!("param {k} {v}\n"));
        }
        for (kind, ids) in &self.witness {
            s.push_str("witness ");
            s.push_str(kind);
            for id in ids {
                s.push_str(&format!(" {id}"));
            }
            s.push('\n');
        }
        s.push_str("end\n");
        s
    }
}

/// Parses a stream of certificates; errors carry the 1-based line number.
pub fn parse_certificates(text: &str) -> Result<Vec<Certificate>, String> {
    let mut out = Vec::new();
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
    while let Some((no, first)) = lines.next() {
        if first != VERSION_LINE {
            return Err(format!("line {no}: expected `{VERSION_LINE}`"));
        }
        let mut next = |tag: &str| -> Result<(usize, String), String> {
            let (no, line) = lines.next().ok_or(format!("unexpected end of input, wanted `{tag}`"))?;
            let rest = line
                .strip_prefix(tag)
                .and_then(|r| r.strip_prefix(' '))
                .ok_or(format!("line {no}: expected `{tag}`"))?;
            Ok((no, rest.to_string()))
        };
        let (no_c, claim) = next("claim")?;
        let claim: Claim = claim.parse().map_err(|e| format!("line {no_c}: {e}"))?;
        let (_, graph_digest) = next("graph-digest")?;
        let (no_o, outcome) = next("outcome")?;
        let outcome = match outcome.as_str() {
            "holds" => Outcome::Holds,
            "refuted" => Outcome::Refuted,
            "exhausted" => Outcome::Exhausted,
            other => return Err(format!("line {no_o}: unknown outcome `{other}`")),
        };
        let (no_v, verified) = next("verified")?;
        let verified = verified.parse().map_err(|_| format!("line {no_v}: verified must be true or false"))?;
        let (no_s, seed) = next("seed")?;
        let seed = seed.parse().map_err(|_| format!("line {no_s}: bad seed"))?;
        let (no_n, nodes) = next("nodes")?;
        let nodes = nodes.parse().map_err(|_| format!("line {no_n}: bad node count"))?;
        let (no_w, wall) = next("wall-time")?;
        let wall_time = humantime::parse_duration(&wall).map_err(|e| format!("line {no_w}: {e}"))?;
        let mut cert = Certificate { claim, graph_digest, outcome, verified, seed, nodes, wall_time, params: vec![], witness: vec![] };
        loop {
            let (no, line) = lines.next().ok_or("unexpected end of input, wanted `end`")?;
            if line == "end" {
                break;
            }
            let mut f = line.split_whitespace();
            match f.next() {
                Some("param") => {
                    let (Some(k), Some(v), None) = (f.next(), f.next(), f.next()) else {
                        return Err(format!("line {no}: param needs a key and one value"));
                    };
                    cert.params.push((k.to_string(), v.to_string()));
                }
                Some("witness") => {
                    let kind = f.next().ok_or(format!("line {no}: witness needs a kind"))?.to_string();
                    let ids = f.map(str::parse).collect::<Result<Vec<usize>, _>>().map_err(|_| format!("line {no}: bad id"))?;
                    cert.witness.push((kind, ids));
                }
                _ => return Err(format!("line {no}: expected `param`, `witness` or `end`")),
            }
        }
        out.push(cert);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn claims_round_trip() {
        for c in [
            Claim::Regular(5),
            Claim::EdgeConnectivity(6),
            Claim::RGraph(3),
            Claim::ThreeConnected,
            Claim::UnderlyingCubic,
            Claim::CyclicEdgeConnectivity(4),
            Claim::Pdpm(2),
            Claim::NoPdpm(12),
            Claim::FrTriple,
            Claim::BfCover,
            Claim::Cdc5,
            Claim::Special2Factor,
        ] {
            assert_eq!(c.to_string().parse::<Claim>().unwrap(), c);
        }
        assert!("2-flavours".parse::<Claim>().is_err());
    }

    #[test]
    fn certificates_round_trip() {
        let mut c = Certificate::new(Claim::Pdpm(2), "sha256:00".into()).with_param("k", 2).with_param("avoid", "1,2");
        c.verified = true;
        c.nodes = 41;
        c.wall_time = Duration::from_millis(1500);
        c.witness.push(("matching".into(), vec![0, 3]));
        c.witness.push(("matching".into(), vec![]));
        let text = c.render() + &c.render();
        let back = parse_certificates(&text).unwrap();
        assert_eq!(back, vec![c.clone(), c]);
    }

    #[test]
    fn malformed_certificates_name_the_line() {
        let err = parse_certificates("cert 1\nclaim 2-PDPM\noutcome holds\n").unwrap_err();
        assert!(err.contains("line 3"), "{err}");
        assert!(parse_certificates("cert 2\n").is_err());
    }
}
