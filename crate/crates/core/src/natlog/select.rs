//! Proof candidates at several granularities and the choice between them.

use std::cmp::Reverse;

use super::dfa::Verdict;
use super::proof::Proof;
use crate::numerals::NatOp;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SelectError {
    #[error("no proof candidates")]
    Empty,
}

/// Splits `n` atomic spans into runs of at most `max_merge` consecutive spans.
/// The finest segmentation comes first; at most `cap` are returned.
pub fn segmentations(n: usize, max_merge: usize, cap: usize) -> Vec<Vec<(usize, usize)>> {
    fn go(from: usize, n: usize, max_merge: usize, cap: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if out.len() >= cap {
            return;
        }
        if from == n {
            out.push(cur.clone());
            return;
        }
        for len in 1..=max_merge.max(1).min(n - from) {
            cur.push((from, from + len));
            go(from + len, n, max_merge, cap, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, max_merge, cap.max(1), &mut Vec::new(), &mut out);
    out
}

/// Relation of a span made of parts with the given relations. Any part
/// without support makes the whole unsupported; one contradicting part
/// contradicts the whole if the rest is entailed.
pub fn conjoin(ops: &[NatOp]) -> NatOp {
    use NatOp::*;
    let ops: Vec<NatOp> = ops.iter().map(|o| o.collapse_cover()).collect();
    if ops.is_empty() || ops.iter().any(|o| matches!(o, Independence | Cover)) {
        return Independence;
    }
    let entailed = |o: &NatOp| matches!(o, Equiv | Forward);
    let clashes: Vec<&NatOp> = ops.iter().filter(|o| matches!(o, Alternation | Negation)).collect();
    if !clashes.is_empty() {
        return if ops.iter().filter(|o| !matches!(o, Alternation | Negation)).all(entailed) {
            Alternation
        } else {
            Independence
        };
    }
    if ops.iter().all(|o| *o == Equiv) {
        Equiv
    } else if ops.iter().all(entailed) {
        Forward
    } else if ops.iter().all(|o| matches!(o, Equiv | Reverse)) {
        Reverse
    } else {
        Independence
    }
}

/// Lower is better: fewer independence steps, then a decided verdict, then
/// finer granularity.
pub fn proof_score(p: &Proof) -> (usize, u8, Reverse<usize>) {
    (p.count(NatOp::Independence), u8::from(p.verdict == Verdict::Nei), Reverse(p.steps.len()))
}

/// Best candidate by [`proof_score`]; the earliest wins ties.
pub fn select_proof(candidates: Vec<Proof>) -> Result<Proof, SelectError> {
    let mut best: Option<Proof> = None;
    for p in candidates {
        if best.as_ref().map_or(true, |b| proof_score(&p) < proof_score(b)) {
            best = Some(p);
        }
    }
    best.ok_or(SelectError::Empty)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::natlog::proof::ProofStep;

    fn proof(ops: &[NatOp]) -> Proof {
        let steps = ops
            .iter()
            .map(|&op| {
                let mut s = ProofStep::new("x", op);
                s.e = Some("x".into());
                s
            })
            .collect();
        Proof::from_steps("x", steps)
    }

    #[test]
    fn segmentation_counts() {
        assert_eq!(segmentations(4, 1, 100), vec![vec![(0, 1), (1, 2), (2, 3), (3, 4)]]);
        // compositions of 4 into parts of size at most 3
        assert_eq!(segmentations(4, 3, 100).len(), 7);
        assert_eq!(segmentations(4, 3, 100)[0].len(), 4);
        assert_eq!(segmentations(10, 3, 5).len(), 5);
        assert_eq!(segmentations(0, 3, 5), vec![Vec::<(usize, usize)>::new()]);
    }

    #[test]
    fn conjunction() {
        use NatOp::*;
        assert_eq!(conjoin(&[Alternation, Forward]), Alternation);
        assert_eq!(conjoin(&[Equiv, Equiv]), Equiv);
        assert_eq!(conjoin(&[Equiv, Forward]), Forward);
        assert_eq!(conjoin(&[Equiv, Reverse]), Reverse);
        assert_eq!(conjoin(&[Forward, Reverse]), Independence);
        assert_eq!(conjoin(&[Alternation, Reverse]), Independence);
        assert_eq!(conjoin(&[Equiv, Cover]), Independence);
    }

    #[test]
    fn selection_prefers_decided_proofs() {
        use NatOp::*;
        let nei = proof(&[Equiv, Equiv, Alternation, Forward]);
        let refuted = proof(&[Equiv, Equiv, Alternation]);
        let best = select_proof(vec![nei, refuted.clone()]).unwrap();
        assert_eq!(best, refuted);
        let with_gap = proof(&[Independence]);
        let best = select_proof(vec![with_gap, proof(&[Reverse, Equiv])]).unwrap();
        assert_eq!(best.ops(), vec![Reverse, Equiv]);
        assert_eq!(select_proof(vec![]), Err(SelectError::Empty));
    }
}
