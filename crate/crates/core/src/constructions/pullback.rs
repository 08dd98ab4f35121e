//! Reading a PDPM of a gadget back onto the copies it was built from.

use super::GadgetOutput;
use crate::error::{Error, Result};
use crate::matching::verify::is_perfect_matching;
use crate::matching::{verify_pdpm, Constraints, PdpmWitness};
use crate::multigraph::{EdgeId, Matching};

/// Why member `matching` of a gadget PDPM does not restrict to a perfect
/// matching of the copy: it uses `crossing.len()` edges of the copy's cut.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PullbackFailure {
    pub matching: usize,
    /// Gadget edges of the cut around the copy that the member uses.
    pub crossing: Vec<EdgeId>,
    /// Every gadget edge of that cut.
    pub cut: Vec<EdgeId>,
}

/// The restriction of a gadget PDPM to one declared copy.
#[derive(Clone, Debug)]
pub struct CopyPullback {
    pub copy: usize,
    pub name: String,
    /// A verified PDPM of the copy's source graph in source edge ids. Its
    /// constraints record whether the tracked edge is contained or avoided.
    pub witness: std::result::Result<PdpmWitness, PullbackFailure>,
}

impl CopyPullback {
    /// `Some(true)` when the tracked edge lies in a member.
    pub fn contains_tracked(&self) -> Option<bool> {
        let w = self.witness.as_ref().ok()?;
        if !w.constraints.contain.is_empty() {
            Some(true)
        } else if !w.constraints.avoid.is_empty() {
            Some(false)
        } else {
            None
        }
    }
}

/// Restricts every member of `witness` to each copy in `gadget.pullbacks`.
/// The witness itself must be valid for the gadget graph.
pub fn pullback_pdpm(gadget: &GadgetOutput, witness: &PdpmWitness) -> Result<Vec<CopyPullback>> {
    if let Err(why) = verify_pdpm(&gadget.graph, witness.k(), &witness.constraints, &witness.matchings) {
        return Err(Error::InvalidInput(format!("witness is not a PDPM of the gadget: {why}")));
    }
    let prov = &gadget.provenance;
    let mut out = Vec::with_capacity(gadget.pullbacks.len());
    for pb in &gadget.pullbacks {
        let info = &prov.copies[pb.copy];
        let source = &info.source;
        // Edges that carry a part of the copy together with a part of
        // something else cross the copy's boundary.
        let cut: Vec<EdgeId> = (0..gadget.graph.m())
            .filter(|&e| {
                let parts = &prov.edges[e];
                parts.iter().any(|p| p.copy == pb.copy) && parts.iter().any(|p| p.copy != pb.copy)
            })
            .collect();
        let mut members = Vec::with_capacity(witness.k());
        let mut failure = None;
        for (i, m) in witness.matchings.iter().enumerate() {
            let projected = prov.restrict(m.edges(), pb.copy);
            if !is_perfect_matching(source, &projected) {
                let crossing = m.edges().iter().copied().filter(|e| cut.binary_search(e).is_ok()).collect();
                failure = Some(PullbackFailure { matching: i, crossing, cut: cut.clone() });
                break;
            }
            members.push(Matching::new(projected));
        }
        let witness = match failure {
            Some(f) => Err(f),
            None => {
                let constraints = match pb.tracked {
                    Some(t) if members.iter().any(|m| m.contains(t)) => Constraints::none().containing([t]),
                    Some(t) => Constraints::none().avoiding([t]),
                    None => Constraints::none(),
                };
                let w = PdpmWitness { matchings: members, constraints };
                if let Err(why) = w.verify(source) {
                    return Err(Error::Internal(format!("pullback onto {} is not a PDPM: {why}", info.name)));
                }
                Ok(w)
            }
        };
        out.push(CopyPullback { copy: pb.copy, name: info.name.clone(), witness });
    }
    Ok(out)
}
