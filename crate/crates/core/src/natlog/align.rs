//! Partitioning a subclaim into question-targeted spans and residual spans,
//! with residual spans matched to extracted evidence.

use std::collections::BTreeSet;

use super::lexical::{content_set, tokenize, Token};

const SPLITTING_PREPOSITIONS: &[&str] = &["of", "in", "at", "during", "on", "for", "from", "with", "by", "to"];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlignError {
    #[error("claim span {0:?} does not occur in the subclaim")]
    SpanNotFound(String),
}

/// Evidence text a residual span may be aligned to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvidenceText {
    pub text: String,
    pub question: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualEvidence {
    /// `None` when nothing overlaps: the span is unsupported.
    pub evidence: Option<String>,
    pub question: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpanKind {
    /// Index into the targeted spans passed to [`align_spans`].
    Target { index: usize, c_start: usize, c_end: usize },
    Residual(ResidualEvidence),
}

/// A byte range of the subclaim. Ranges of consecutive spans touch, so the
/// spans partition the subclaim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignedSpan {
    pub start: usize,
    pub end: usize,
    pub kind: SpanKind,
}

impl AlignedSpan {
    pub fn text<'a>(&self, subclaim: &'a str) -> &'a str {
        subclaim[self.start..self.end].trim()
    }

    pub fn target(&self) -> Option<usize> {
        match self.kind {
            SpanKind::Target { index, .. } => Some(index),
            SpanKind::Residual(_) => None,
        }
    }
}

/// Window of `source` covering one occurrence of every content word it shares
/// with `span`, with the number of shared words.
fn best_window(span: &BTreeSet<String>, source: &str) -> Option<(usize, String)> {
    let toks: Vec<Token> = tokenize(source).into_iter().filter(Token::is_content).collect();
    let shared: BTreeSet<&String> = toks.iter().map(|t| &t.norm).filter(|n| span.contains(*n)).collect();
    if shared.is_empty() {
        return None;
    }
    let first = toks.iter().position(|t| shared.contains(&t.norm))?;
    let mut seen = BTreeSet::new();
    let mut last = first;
    for (i, t) in toks.iter().enumerate().skip(first) {
        if shared.contains(&t.norm) && seen.insert(&t.norm) {
            last = i;
            if seen.len() == shared.len() {
                break;
            }
        }
    }
    Some((shared.len(), source[toks[first].start..toks[last].end].to_string()))
}

/// Aligns a residual span to the extraction sharing the most content words,
/// falling back to `fallbacks` (e.g. table captions) and then to N/A.
pub fn align_residual(text: &str, extractions: &[EvidenceText], fallbacks: &[EvidenceText]) -> ResidualEvidence {
    let words = content_set(text);
    for pool in [extractions, fallbacks] {
        let mut best: Option<(usize, String, &EvidenceText)> = None;
        for src in pool {
            if let Some((score, window)) = best_window(&words, &src.text) {
                if best.as_ref().map_or(true, |(s, _, _)| score > *s) {
                    best = Some((score, window, src));
                }
            }
        }
        if let Some((_, window, src)) = best {
            return ResidualEvidence { evidence: Some(window), question: src.question.clone() };
        }
    }
    ResidualEvidence { evidence: None, question: None }
}

fn is_splitting_preposition(tok: &Token) -> bool {
    SPLITTING_PREPOSITIONS.contains(&tok.raw.to_lowercase().as_str())
}

/// Splits a gap into chunks that each start at a preposition.
fn chunk_gap(subclaim: &str, start: usize, end: usize) -> Vec<(usize, usize)> {
    let gap = &subclaim[start..end];
    let mut cuts = vec![start];
    for tok in tokenize(gap) {
        if is_splitting_preposition(&tok) && start + tok.start > start {
            cuts.push(start + tok.start);
        }
    }
    cuts.push(end);
    cuts.dedup();
    cuts.windows(2).map(|w| (w[0], w[1])).collect()
}

fn starts_with_preposition(text: &str) -> bool {
    tokenize(text).first().map_or(false, is_splitting_preposition)
}

/// Anchors each targeted span at its first free occurrence and covers the
/// rest of the subclaim with residual spans. A chunk directly following a
/// target joins it unless it opens with a preposition; chunks without content
/// words join their neighbour.
pub fn align_spans(
    subclaim: &str,
    targets: &[&str],
    extractions: &[EvidenceText],
    fallbacks: &[EvidenceText],
) -> Result<Vec<AlignedSpan>, AlignError> {
    let mut anchored: Vec<(usize, usize, usize)> = Vec::new();
    for (i, c) in targets.iter().enumerate() {
        let c = c.trim();
        if c.is_empty() {
            return Err(AlignError::SpanNotFound(c.to_string()));
        }
        let free = subclaim
            .match_indices(c)
            .map(|(s, _)| (s, s + c.len()))
            .find(|(s, e)| anchored.iter().all(|(a, b, _)| *e <= *a || *s >= *b));
        let (s, e) = free.ok_or_else(|| AlignError::SpanNotFound(c.to_string()))?;
        anchored.push((s, e, i));
    }
    anchored.sort();

    enum Piece {
        Target(usize, usize, usize),
        Chunk,
    }
    let mut pieces: Vec<(usize, usize, Piece)> = Vec::new();
    let mut pending: Option<usize> = None;
    let mut cursor = 0;
    let gaps_and_targets = anchored.iter().map(|&(s, e, i)| (Some((s, e, i)), s)).chain(std::iter::once((None, subclaim.len())));
    for (target, gap_end) in gaps_and_targets {
        for (k, (cs, ce)) in chunk_gap(subclaim, cursor, gap_end).into_iter().enumerate() {
            if cs == ce {
                continue;
            }
            let text = &subclaim[cs..ce];
            let after_target = matches!(pieces.last(), Some((_, e, Piece::Target(..))) if *e == cs);
            if k == 0 && after_target && !starts_with_preposition(text) {
                pieces.last_mut().expect("checked").1 = ce;
            } else if content_set(text).is_empty() {
                match pieces.last_mut() {
                    Some(last) => last.1 = ce,
                    None => pending = pending.or(Some(cs)),
                }
            } else {
                pieces.push((pending.take().unwrap_or(cs), ce, Piece::Chunk));
            }
        }
        if let Some((s, e, i)) = target {
            pieces.push((pending.take().unwrap_or(s), e, Piece::Target(i, s, e)));
            cursor = e;
        }
    }

    Ok(pieces
        .into_iter()
        .map(|(start, end, piece)| {
            let kind = match piece {
                Piece::Target(index, s, e) => SpanKind::Target { index, c_start: s, c_end: e },
                Piece::Chunk => SpanKind::Residual(align_residual(&subclaim[start..end], extractions, fallbacks)),
            };
            AlignedSpan { start, end, kind }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(text: &str) -> EvidenceText {
        EvidenceText { text: text.into(), question: Some("q".into()) }
    }

    fn texts(subclaim: &str, spans: &[AlignedSpan]) -> Vec<String> {
        spans.iter().map(|s| s.text(subclaim).to_string()).collect()
    }

    #[test]
    fn residual_spans_cover_the_gaps() {
        let sc = "In 2018 Ortegal had three municipalities";
        let spans = align_spans(sc, &["Ortegal", "three"], &[ev("The population was measured in 2018 for Ortegal.")], &[]).unwrap();
        assert_eq!(texts(sc, &spans), vec!["In 2018", "Ortegal had", "three municipalities"]);
        match &spans[0].kind {
            SpanKind::Residual(r) => assert_eq!(r.evidence.as_deref(), Some("2018")),
            other => panic!("{other:?}"),
        }
        assert_eq!(spans.first().unwrap().start, 0);
        assert_eq!(spans.last().unwrap().end, sc.len());
        assert!(spans.windows(2).all(|w| w[0].end == w[1].start));
    }

    #[test]
    fn prepositional_chunks_stay_separate() {
        let sc = "John McCain won 16 delegates during the 2008 Washington Republican presidential primary.";
        let ext = ev("John McCain won 16 delegates in the 2008 Washington Republican presidential primary.");
        let spans = align_spans(sc, &["16"], &[ext], &[]).unwrap();
        assert_eq!(
            texts(sc, &spans),
            vec!["John McCain won", "16 delegates", "during the 2008 Washington Republican presidential primary."]
        );
        match &spans[2].kind {
            SpanKind::Residual(r) => {
                assert_eq!(r.evidence.as_deref(), Some("2008 Washington Republican presidential primary"))
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn whole_subclaim_target() {
        let sc = "Paris is in France.";
        let spans = align_spans(sc, &["Paris is in France."], &[], &[]).unwrap();
        assert_eq!(spans.len(), 1);
        assert_eq!(spans[0].target(), Some(0));
    }

    #[test]
    fn no_extractions_means_no_evidence() {
        let sc = "In 2018 Ortegal";
        let spans = align_spans(sc, &["Ortegal"], &[], &[]).unwrap();
        assert_eq!(spans[0].kind, SpanKind::Residual(ResidualEvidence { evidence: None, question: None }));
    }

    #[test]
    fn missing_span_is_an_error() {
        assert_eq!(align_spans("abc", &["Ortegall"], &[], &[]), Err(AlignError::SpanNotFound("Ortegall".into())));
    }

    #[test]
    fn repeated_spans_take_free_occurrences() {
        let sc = "3 goals and 3 assists";
        let spans = align_spans(sc, &["3", "3"], &[], &[]).unwrap();
        let starts: Vec<_> = spans.iter().filter_map(|s| match s.kind {
            SpanKind::Target { c_start, .. } => Some(c_start),
            _ => None,
        }).collect();
        assert_eq!(starts, vec![0, 12]);
    }
}
