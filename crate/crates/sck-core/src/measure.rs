//! Small pieces and the Λ/Λ′ measures.
//!
//! A candidate word `c` is a *small piece* when some occurrence of `c` in a
//! relation can be transported into the context of another occurrence (of any
//! relation) so that the transported polynomial leaves the relation set. The
//! two transports for an occurrence pair with contexts (â₁, â₂) and (b̂₁, b̂₂)
//! are `b̂₁·â₁⁻¹·p` and `p·â₂⁻¹·b̂₂`; `c` is a piece as soon as at least one
//! transport of at least one pair is definitively outside the set.
//!
//! Membership tests against a truncated closure can come back [`Tri::Unknown`];
//! those candidates get verdict [`PieceVerdict::Unknown`]. [`lambda`] treats
//! them as non-pieces (an upper bracket on the true measure, the sound
//! direction for "Λ ≥ bound" claims); [`lambda_admitting_unknown`] admits them
//! (the lower bracket) so callers can detect when a claim depends on an
//! unresolved verdict.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use thiserror::Error;

use crate::poly::{Poly, Side};
use crate::relset::{RelSet, Tri};
use crate::trie::WordTrie;
use crate::word::{Letter, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MeasureError {
    #[error("closure is not saturated at bound {bound}; piece verdicts would silently depend on truncated membership (pass allow_unsaturated to proceed)")]
    UnsaturatedClosure { bound: usize },
}

/// Three-valued outcome of the small-piece test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PieceVerdict {
    Piece,
    NotPiece,
    Unknown,
}

/// Which piece set a measure draws from: S (plain) or S′ = S ∪ letters of Mon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeasureVariant {
    Plain,
    Prime,
}

/// Minimal number of nonempty pieces concatenating to a word, or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LambdaValue {
    Finite(u32),
    Infinite,
}

impl LambdaValue {
    pub fn is_finite(self) -> bool {
        matches!(self, LambdaValue::Finite(_))
    }

    pub fn as_finite(self) -> Option<u32> {
        match self {
            LambdaValue::Finite(t) => Some(t),
            LambdaValue::Infinite => None,
        }
    }
}

impl std::fmt::Display for LambdaValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LambdaValue::Finite(t) => write!(f, "{t}"),
            LambdaValue::Infinite => write!(f, "∞"),
        }
    }
}

/// Piece verdicts for every member of Mon plus the derived piece sets.
///
/// `pieces` is S (always containing the empty word); `prime_pieces` is
/// S′ = S ∪ {letters of Mon}. Both sets are closed under taking subwords,
/// which is what makes the trie-backed segmentation search in [`lambda`]
/// exact: every prefix of a stored piece is itself a piece.
#[derive(Debug, Clone)]
pub struct PieceTable {
    tau: u32,
    verdicts: BTreeMap<Word, PieceVerdict>,
    pieces: BTreeSet<Word>,
    prime_pieces: BTreeSet<Word>,
    saturated: bool,
    unknown_count: usize,
    // Tries over nonempty pieces: hi = definite pieces only (upper-bracket Λ),
    // lo = definite ∪ unknown (lower-bracket Λ).
    plain_hi: WordTrie,
    plain_lo: WordTrie,
    prime_hi: WordTrie,
    prime_lo: WordTrie,
}

impl PieceTable {
    /// Assembles a table from raw verdicts. The piece set and the
    /// piece-or-unknown set must each be closed under taking subwords
    /// (debug-asserted); tables built by [`small_pieces`] satisfy this.
    pub fn from_parts(
        tau: u32,
        mut verdicts: BTreeMap<Word, PieceVerdict>,
        mon_letters: impl IntoIterator<Item = Letter>,
        rank: usize,
        saturated: bool,
    ) -> PieceTable {
        verdicts.insert(Word::empty(), PieceVerdict::Piece);
        let width = 2 * rank;
        let mut pieces = BTreeSet::new();
        let mut prime_pieces = BTreeSet::new();
        let mut unknown_count = 0;
        let mut plain_hi = WordTrie::new(width);
        let mut plain_lo = WordTrie::new(width);
        for (w, v) in &verdicts {
            match v {
                PieceVerdict::Piece => {
                    pieces.insert(w.clone());
                    prime_pieces.insert(w.clone());
                    if !w.is_empty() {
                        plain_hi.insert(w.letters());
                        plain_lo.insert(w.letters());
                    }
                }
                PieceVerdict::Unknown => {
                    unknown_count += 1;
                    if !w.is_empty() {
                        plain_lo.insert(w.letters());
                    }
                }
                PieceVerdict::NotPiece => {}
            }
        }
        let mut prime_hi = plain_hi.clone();
        let mut prime_lo = plain_lo.clone();
        for letter in mon_letters {
            prime_pieces.insert(Word::single(letter));
            prime_hi.insert(&[letter]);
            prime_lo.insert(&[letter]);
        }
        let table = PieceTable {
            tau,
            verdicts,
            pieces,
            prime_pieces,
            saturated,
            unknown_count,
            plain_hi,
            plain_lo,
            prime_hi,
            prime_lo,
        };
        debug_assert!(table.subword_closed(), "piece sets must be subword-closed");
        table
    }

    // Every proper one-letter-trimmed subword of a piece (or unknown) that has
    // a verdict must itself be a piece (or piece/unknown); otherwise the trie
    // lookup and the verdict map would disagree.
    fn subword_closed(&self) -> bool {
        self.verdicts.iter().all(|(w, v)| {
            if w.len() < 2 || *v == PieceVerdict::NotPiece {
                return true;
            }
            [w.subword(0, w.len() - 1), w.subword(1, w.len())]
                .iter()
                .all(|sub| match self.verdicts.get(sub) {
                    Some(PieceVerdict::NotPiece) => *v != PieceVerdict::Piece,
                    _ => true,
                })
        })
    }

    pub fn tau(&self) -> u32 {
        self.tau
    }

    /// The small pieces S, including the empty word.
    pub fn pieces(&self) -> &BTreeSet<Word> {
        &self.pieces
    }

    /// S′ = S together with every letter occurring in Mon.
    pub fn prime_pieces(&self) -> &BTreeSet<Word> {
        &self.prime_pieces
    }

    /// Verdict for a word; words outside Mon are trivially not pieces.
    pub fn verdict(&self, w: &Word) -> PieceVerdict {
        self.verdicts
            .get(w)
            .copied()
            .unwrap_or(PieceVerdict::NotPiece)
    }

    pub fn verdicts(&self) -> impl Iterator<Item = (&Word, PieceVerdict)> {
        self.verdicts.iter().map(|(w, v)| (w, *v))
    }

    /// Number of unresolved verdicts (nonzero only over truncated closures).
    pub fn unknown_count(&self) -> usize {
        self.unknown_count
    }

    /// Whether the underlying closure was saturated.
    pub fn saturated(&self) -> bool {
        self.saturated
    }

    /// (piece, not_piece, unknown) counts over the verdict map.
    pub fn verdict_counts(&self) -> (usize, usize, usize) {
        let mut counts = (0, 0, 0);
        for v in self.verdicts.values() {
            match v {
                PieceVerdict::Piece => counts.0 += 1,
                PieceVerdict::NotPiece => counts.1 += 1,
                PieceVerdict::Unknown => counts.2 += 1,
            }
        }
        counts
    }

    fn trie(&self, variant: MeasureVariant, admit_unknown: bool) -> &WordTrie {
        match (variant, admit_unknown) {
            (MeasureVariant::Plain, false) => &self.plain_hi,
            (MeasureVariant::Plain, true) => &self.plain_lo,
            (MeasureVariant::Prime, false) => &self.prime_hi,
            (MeasureVariant::Prime, true) => &self.prime_lo,
        }
    }
}

// Occurrences of every Mon member inside the closure's monomials, grouped by
// the occurring word. Contexts are recovered on demand from (monomial, start).
struct OccurrenceIndex {
    monomials: Vec<Word>,
    owners: Vec<Vec<u32>>,
    occs: HashMap<Word, Vec<(u32, u32)>>,
}

impl OccurrenceIndex {
    fn build(rs: &RelSet) -> OccurrenceIndex {
        let mut ids: HashMap<Word, u32> = HashMap::new();
        let mut monomials: Vec<Word> = Vec::new();
        let mut owners: Vec<Vec<u32>> = Vec::new();
        for (pi, p) in rs.closure().iter().enumerate() {
            for m in p.monomials() {
                if m.is_empty() {
                    continue;
                }
                let id = *ids.entry(m.clone()).or_insert_with(|| {
                    monomials.push(m.clone());
                    owners.push(Vec::new());
                    (monomials.len() - 1) as u32
                });
                owners[id as usize].push(pi as u32);
            }
        }
        let mut occs: HashMap<Word, Vec<(u32, u32)>> = HashMap::new();
        for (id, m) in monomials.iter().enumerate() {
            for start in 0..m.len() {
                // Mon is subword-closed, so match lengths per start are the
                // contiguous range 1..=longest prefix stored in the Mon trie.
                let max = rs.mon_prefix_len(&m.letters()[start..]);
                for len in 1..=max {
                    occs.entry(m.subword(start, start + len))
                        .or_default()
                        .push((id as u32, start as u32));
                }
            }
        }
        OccurrenceIndex {
            monomials,
            owners,
            occs,
        }
    }

    // Verdict for one candidate. For a fixed occurrence of c in p, the left
    // transport depends only on the q-side left context and the right
    // transport only on the q-side right context, so the pair search
    // decouples into the two context sets gathered over all occurrences.
    fn verdict(&self, c: &Word, rs: &RelSet) -> PieceVerdict {
        if c.is_empty() {
            return PieceVerdict::Piece;
        }
        let Some(instances) = self.occs.get(c) else {
            return PieceVerdict::NotPiece;
        };
        let mut left_contexts = BTreeSet::new();
        let mut right_contexts = BTreeSet::new();
        for &(mid, start) in instances {
            let m = &self.monomials[mid as usize];
            left_contexts.insert(m.subword(0, start as usize));
            right_contexts.insert(m.subword(start as usize + c.len(), m.len()));
        }
        let mut saw_unknown = false;
        for &(mid, start) in instances {
            let m = &self.monomials[mid as usize];
            let a1 = m.subword(0, start as usize);
            let a2 = m.subword(start as usize + c.len(), m.len());
            let a1_inv = a1.inverse();
            let a2_inv = a2.inverse();
            for pi in &self.owners[mid as usize] {
                let p = &rs.closure()[*pi as usize];
                for b1 in &left_contexts {
                    if b1 == &a1 {
                        continue; // transport is p itself
                    }
                    let (shift, _) = b1.mul(&a1_inv);
                    match rs.contains_up_to_scalar(&transported(p, &shift, Side::Left)) {
                        Tri::No => return PieceVerdict::Piece,
                        Tri::Unknown => saw_unknown = true,
                        Tri::Yes => {}
                    }
                }
                for b2 in &right_contexts {
                    if b2 == &a2 {
                        continue;
                    }
                    let (shift, _) = a2_inv.mul(b2);
                    match rs.contains_up_to_scalar(&transported(p, &shift, Side::Right)) {
                        Tri::No => return PieceVerdict::Piece,
                        Tri::Unknown => saw_unknown = true,
                        Tri::Yes => {}
                    }
                }
            }
        }
        if saw_unknown {
            PieceVerdict::Unknown
        } else {
            PieceVerdict::NotPiece
        }
    }
}

// Closure members never mix fields, so monomial shifts cannot fail.
fn transported(p: &Poly, shift: &Word, side: Side) -> Poly {
    p.word_mul(shift, side)
        .expect("closure members are single-field")
}

/// Small-piece verdict for a single candidate.
pub fn is_small_piece(c: &Word, rs: &RelSet) -> PieceVerdict {
    if c.is_empty() {
        return PieceVerdict::Piece;
    }
    if !rs.in_mon(c) {
        return PieceVerdict::NotPiece;
    }
    OccurrenceIndex::build(rs).verdict(c, rs)
}

/// Piece verdicts for every member of Mon.
///
/// Requires a saturated closure unless `allow_unsaturated` is set; over a
/// truncated closure some verdicts come back [`PieceVerdict::Unknown`].
/// Candidates are processed in length order so that a definite non-piece
/// verdict prunes all its superwords (a superword's occurrence pairs restrict
/// to pairs of any subword with identical transports).
pub fn small_pieces(
    rs: &RelSet,
    tau: u32,
    allow_unsaturated: bool,
) -> Result<PieceTable, MeasureError> {
    if !rs.saturated() && !allow_unsaturated {
        return Err(MeasureError::UnsaturatedClosure { bound: rs.bound() });
    }
    let index = OccurrenceIndex::build(rs);
    let mut verdicts: BTreeMap<Word, PieceVerdict> = BTreeMap::new();
    // Deglex word order groups Mon by length; shorter verdicts are final
    // before any longer candidate consults them.
    let mon: Vec<&Word> = rs.mon().iter().filter(|w| !w.is_empty()).collect();
    for group in mon.chunk_by(|a, b| a.len() == b.len()) {
        let computed: Vec<(Word, PieceVerdict)> = group
            .par_iter()
            .map(|c| {
                let pruned = c.len() >= 2
                    && [c.subword(0, c.len() - 1), c.subword(1, c.len())]
                        .iter()
                        .any(|sub| verdicts.get(sub) == Some(&PieceVerdict::NotPiece));
                let v = if pruned {
                    PieceVerdict::NotPiece
                } else {
                    index.verdict(c, rs)
                };
                ((*c).clone(), v)
            })
            .collect();
        verdicts.extend(computed);
    }
    let letters: BTreeSet<Letter> = rs
        .mon()
        .iter()
        .flat_map(|w| w.letters().iter().copied())
        .collect();
    Ok(PieceTable::from_parts(
        tau,
        verdicts,
        letters,
        rs.alphabet().rank(),
        rs.saturated(),
    ))
}

fn lambda_search(u: &Word, trie: &WordTrie) -> LambdaValue {
    if u.is_empty() {
        return LambdaValue::Finite(0);
    }
    let n = u.len();
    // Unweighted shortest path over cut positions 0..=n; from position i every
    // prefix of u[i..] stored in the piece trie is a one-piece edge.
    let mut dist = vec![u32::MAX; n + 1];
    dist[0] = 0;
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &i in &frontier {
            let max = trie.max_walk(&u.letters()[i..]);
            for j in i + 1..=i + max {
                if dist[j] == u32::MAX {
                    dist[j] = dist[i] + 1;
                    if j == n {
                        return LambdaValue::Finite(dist[n]);
                    }
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    LambdaValue::Infinite
}

/// Λ (or Λ′ for [`MeasureVariant::Prime`]): the minimal number of nonempty
/// pieces whose concatenation is exactly `u`. Unknown-verdict words are
/// treated as non-pieces, making this the upper bracket of the true measure.
pub fn lambda(u: &Word, pt: &PieceTable, variant: MeasureVariant) -> LambdaValue {
    lambda_search(u, pt.trie(variant, false))
}

/// Lower-bracket companion of [`lambda`]: unknown-verdict words are admitted
/// as pieces. A claim `lambda(u) ≥ bound` is independent of unresolved
/// verdicts exactly when `lambda_admitting_unknown(u) ≥ bound` as well.
pub fn lambda_admitting_unknown(
    u: &Word,
    pt: &PieceTable,
    variant: MeasureVariant,
) -> LambdaValue {
    lambda_search(u, pt.trie(variant, true))
}

/// One hypothesis failure reported by [`lambda_inverse_symmetric`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryViolation {
    pub word: Word,
    pub lambda_word: LambdaValue,
    pub lambda_inverse: LambdaValue,
}

/// Checks the hypothesis "if both u, u⁻¹ ∈ Mon then Λ′(u) = Λ′(u⁻¹)";
/// returns every violating pair (listed once, by the smaller word).
pub fn lambda_inverse_symmetric(pt: &PieceTable, rs: &RelSet) -> Vec<SymmetryViolation> {
    let mut violations = Vec::new();
    for u in rs.mon() {
        let inv = u.inverse();
        if *u >= inv || !rs.mon().contains(&inv) {
            continue;
        }
        let fwd = lambda(u, pt, MeasureVariant::Prime);
        let bwd = lambda(&inv, pt, MeasureVariant::Prime);
        if fwd != bwd {
            violations.push(SymmetryViolation {
                word: u.clone(),
                lambda_word: fwd,
                lambda_inverse: bwd,
            });
        }
    }
    violations
}
