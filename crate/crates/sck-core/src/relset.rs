//! Relation sets: the bounded closure of seed polynomials under field
//! scaling and cancelling letter multiplications, plus the subword-closed
//! monomial set Mon.
//!
//! The true closure can be infinite; this one is truncated at a monomial
//! length bound `L`. A `saturated` closure lost nothing to the bound — and
//! since every closure step changes monomial lengths by exactly one, a
//! saturated truncation *equals* the full closure, so absence is definitive.
//! Unsaturated closures give three-valued membership instead: anything
//! absent is [`Tri::Unknown`].

use std::collections::{BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::poly::{FieldError, FieldSpec, Poly, Side};
use crate::trie::WordTrie;
use crate::word::{Alphabet, Letter, Word, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RelSetError {
    #[error("seed #{index} is the zero polynomial")]
    ZeroSeed { index: usize },
    #[error("seed #{index} has a monomial of length {len} above the closure bound {bound}")]
    SeedExceedsBound { index: usize, len: usize, bound: usize },
    #[error("seed #{index}: {source}")]
    SeedWord {
        index: usize,
        #[source]
        source: WordError,
    },
    #[error("seed #{index} has coefficients in {got}, presentation field is {expected}")]
    FieldMismatch { index: usize, expected: FieldSpec, got: FieldSpec },
    #[error("closure exceeded the member cap {cap}; raise the cap or lower the bound")]
    CapExceeded { cap: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Three-valued membership under closure truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

/// Bounds for [`RelSet::close`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CloseOptions {
    /// Maximum monomial length admitted into the closure.
    pub bound: usize,
    /// Hard cap on closure size (guards runaway seeds).
    pub cap: usize,
}

pub const DEFAULT_CAP: usize = 1_000_000;

impl CloseOptions {
    pub fn bounded(bound: usize) -> Self {
        CloseOptions { bound, cap: DEFAULT_CAP }
    }
}

/// Provenance of a closure member: which seed it descends from and the
/// letter multiplications applied. Replayable via [`RelSet::replay_chain`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub seed: usize,
    pub steps: Vec<(Side, Letter)>,
}

/// A relation set: seeds, bounded closure (canonical representatives, one
/// per scalar-multiple class), and the monomial subword set Mon.
#[derive(Clone, Debug)]
pub struct RelSet {
    alphabet: Alphabet,
    field: FieldSpec,
    seeds: Vec<Poly>,
    closure: Vec<Poly>,
    index: HashMap<Poly, usize>,
    chains: Vec<Chain>,
    mon: BTreeSet<Word>,
    mon_trie: WordTrie,
    bound: usize,
    cap: usize,
    saturated: bool,
}

impl RelSet {
    /// Builds the bounded closure of `seeds` breadth-first.
    ///
    /// Each member is stored canonically (leading coefficient 1), so closure
    /// under scaling is implicit. A letter multiplication is admissible when
    /// the letter cancels into some monomial; results whose monomials exceed
    /// the bound are dropped and clear the `saturated` flag.
    pub fn close(
        alphabet: Alphabet,
        field: FieldSpec,
        seeds: Vec<Poly>,
        options: CloseOptions,
    ) -> Result<RelSet, RelSetError> {
        let CloseOptions { bound, cap } = options;
        let mut rs = RelSet {
            mon_trie: WordTrie::new(2 * alphabet.rank()),
            alphabet,
            field,
            seeds,
            closure: Vec::new(),
            index: HashMap::new(),
            chains: Vec::new(),
            mon: BTreeSet::new(),
            bound,
            cap,
            saturated: true,
        };
        let mut queue: VecDeque<usize> = VecDeque::new();
        for (i, seed) in rs.seeds.iter().enumerate() {
            if seed.is_zero() {
                return Err(RelSetError::ZeroSeed { index: i });
            }
            for m in seed.monomials() {
                rs.alphabet
                    .validate_word(m)
                    .map_err(|source| RelSetError::SeedWord { index: i, source })?;
                if m.len() > bound {
                    return Err(RelSetError::SeedExceedsBound { index: i, len: m.len(), bound });
                }
            }
            for (_, c) in seed.terms() {
                if c.field() != field {
                    return Err(RelSetError::FieldMismatch {
                        index: i,
                        expected: field,
                        got: c.field(),
                    });
                }
            }
            let canon = seed.canonicalize()?;
            if !rs.index.contains_key(&canon) {
                rs.index.insert(canon.clone(), rs.closure.len());
                rs.closure.push(canon);
                rs.chains.push(Chain { seed: i, steps: Vec::new() });
                queue.push_back(rs.closure.len() - 1);
            }
        }
        while let Some(at) = queue.pop_front() {
            let p = rs.closure[at].clone();
            for side in Side::BOTH {
                for letter in admissible_letters(&p, side) {
                    let q = p.word_mul(&Word::single(letter), side)?;
                    if q.max_monomial_len() > bound {
                        rs.saturated = false;
                        continue;
                    }
                    let canon = q.canonicalize()?;
                    if rs.index.contains_key(&canon) {
                        continue;
                    }
                    if rs.closure.len() >= cap {
                        return Err(RelSetError::CapExceeded { cap });
                    }
                    let mut chain = rs.chains[at].clone();
                    chain.steps.push((side, letter));
                    rs.index.insert(canon.clone(), rs.closure.len());
                    rs.closure.push(canon);
                    rs.chains.push(chain);
                    queue.push_back(rs.closure.len() - 1);
                }
            }
        }
        rs.build_mon();
        Ok(rs)
    }

    /// Mon = all subwords of all monomials of all closure members.
    fn build_mon(&mut self) {
        let mut distinct: BTreeSet<&Word> = BTreeSet::new();
        for p in &self.closure {
            distinct.extend(p.monomials());
        }
        if !self.closure.is_empty() {
            self.mon.insert(Word::empty());
        }
        for m in distinct {
            // If m is already a recorded subword, so is every subword of m.
            if m.is_empty() || self.mon.contains(m) {
                continue;
            }
            let letters = m.letters();
            for s in 0..letters.len() {
                self.mon_trie.insert(&letters[s..]);
                for e in s + 1..=letters.len() {
                    self.mon.insert(m.subword(s, e));
                }
            }
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn seeds(&self) -> &[Poly] {
        &self.seeds
    }

    /// Closure members in deterministic construction order, canonical forms.
    pub fn closure(&self) -> &[Poly] {
        &self.closure
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// True iff no admissible extension was cut off by the bound — in which
    /// case the closure is the entire relation set, not a truncation.
    pub fn saturated(&self) -> bool {
        self.saturated
    }

    /// Mon in deglex order (includes the empty word when the closure is
    /// nonempty).
    pub fn mon(&self) -> &BTreeSet<Word> {
        &self.mon
    }

    pub fn max_mon_len(&self) -> usize {
        self.mon.iter().next_back().map_or(0, Word::len)
    }

    pub fn in_mon(&self, w: &Word) -> bool {
        if w.is_empty() {
            !self.closure.is_empty()
        } else {
            self.mon_trie.contains(w.letters())
        }
    }

    /// Longest prefix of `letters` that lies in Mon (0 for none); Mon is
    /// subword-closed, so prefixes in Mon are exactly lengths `1..=result`.
    pub(crate) fn mon_prefix_len(&self, letters: &[Letter]) -> usize {
        self.mon_trie.max_walk(letters)
    }

    /// Membership of `p`'s scalar-multiple class in the relation set:
    /// definite on saturated closures, `Unknown` when truncation could hide
    /// the member.
    pub fn contains_up_to_scalar(&self, p: &Poly) -> Tri {
        let canon = match p.canonicalize() {
            Ok(c) => c,
            Err(_) => return Tri::No,
        };
        if canon.is_zero() {
            return Tri::No;
        }
        if self.index.contains_key(&canon) {
            Tri::Yes
        } else if self.saturated {
            Tri::No
        } else {
            Tri::Unknown
        }
    }

    pub fn chains(&self) -> &[Chain] {
        &self.chains
    }

    /// Recomputes closure member `i` from its seed via the recorded chain.
    pub fn replay_chain(&self, i: usize) -> Result<Poly, RelSetError> {
        let chain = &self.chains[i];
        let mut p = self.seeds[chain.seed].canonicalize()?;
        for &(side, letter) in &chain.steps {
            p = p.word_mul(&Word::single(letter), side)?;
        }
        Ok(p.canonicalize()?)
    }
}

/// Letters whose multiplication on `side` cancels into some monomial of
/// `p` — the only multiplications the closure admits.
pub(crate) fn admissible_letters(p: &Poly, side: Side) -> BTreeSet<Letter> {
    p.monomials()
        .filter_map(|m| match side {
            Side::Left => m.first(),
            Side::Right => m.last(),
        })
        .map(Letter::inverse)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(rank: usize, seeds: &[&str], bound: usize) -> Result<RelSet, RelSetError> {
        let a = Alphabet::new(rank).unwrap();
        let f = FieldSpec::Rational;
        let seeds = seeds
            .iter()
            .map(|s| Poly::parse(s, &a, f).unwrap())
            .collect();
        RelSet::close(a, f, seeds, CloseOptions::bounded(bound))
    }

    fn poly(rs: &RelSet, s: &str) -> Poly {
        Poly::parse(s, rs.alphabet(), rs.field()).unwrap()
    }

    fn word(rs: &RelSet, s: &str) -> Word {
        rs.alphabet().parse_word(s).unwrap()
    }

    #[test]
    fn single_letter_seed_closure() {
        let rs = setup(2, &["x + 1"], 4).unwrap();
        assert_eq!(rs.closure().len(), 2);
        assert!(rs.saturated());
        assert_eq!(rs.contains_up_to_scalar(&poly(&rs, "2*x + 2")), Tri::Yes);
        assert_eq!(rs.contains_up_to_scalar(&poly(&rs, "X + 1")), Tri::Yes);
        assert_eq!(rs.contains_up_to_scalar(&poly(&rs, "x + y")), Tri::No);
        let mon: Vec<Word> = rs.mon().iter().cloned().collect();
        assert_eq!(mon, vec![Word::empty(), word(&rs, "x"), word(&rs, "X")]);
    }

    #[test]
    fn xyx_minus_one_closure_is_twelve_members() {
        let rs = setup(2, &["xyx - 1"], 3).unwrap();
        assert!(rs.saturated());
        // Every member keeps monomial-length sum 3, so nothing exceeds L = 3
        // and the closure is exact. Canonical member list, frozen:
        let expected = [
            "xyx - 1",
            "yx - X",
            "xy - X",
            "YX - x",
            "XX - y", // canonical form of y − x⁻²
            "yxx - 1",
            "xx - Y",
            "xxy - 1",
            "YXX - 1",
            "XYX - 1",
            "XY - x",
            "XXY - 1",
        ];
        assert_eq!(rs.closure().len(), expected.len());
        for text in expected {
            assert_eq!(rs.contains_up_to_scalar(&poly(&rs, text)), Tri::Yes, "{text}");
        }
        for text in ["x", "y", "xy", "yx", "xyx", "X"] {
            assert!(rs.in_mon(&word(&rs, text)), "{text}");
        }
        assert!(rs.in_mon(&Word::empty()));
        assert!(!rs.in_mon(&word(&rs, "yy")));
    }

    #[test]
    fn truncation_flags_unsaturated_and_unknown() {
        let rs = setup(2, &["xy + x"], 2).unwrap();
        assert!(!rs.saturated());
        // xyx⁻¹ + 1 is a real relation but its monomial exceeds L = 2.
        assert_eq!(rs.contains_up_to_scalar(&poly(&rs, "xyX + 1")), Tri::Unknown);
        assert_eq!(rs.contains_up_to_scalar(&poly(&rs, "xy + x")), Tri::Yes);
    }

    #[test]
    fn mon_is_subword_closed() {
        let rs = setup(2, &["xyx - 1", "xxyy + y"], 4).unwrap();
        for w in rs.mon() {
            for s in 0..w.len() {
                for e in s..=w.len() {
                    assert!(rs.in_mon(&w.subword(s, e)), "{:?} of {:?}", w.subword(s, e), w);
                }
            }
        }
    }

    #[test]
    fn bound_monotonicity() {
        for seeds in [&["xy + x"][..], &["xyx - 1"], &["xy + yx - 1"]] {
            let small = setup(2, seeds, 3).unwrap();
            let large = setup(2, seeds, 4).unwrap();
            for p in small.closure() {
                assert_eq!(large.contains_up_to_scalar(p), Tri::Yes);
            }
        }
    }

    #[test]
    fn chains_replay_to_members() {
        let rs = setup(2, &["xyx - 1", "xx + y"], 3).unwrap();
        for i in 0..rs.closure().len() {
            assert_eq!(&rs.replay_chain(i).unwrap(), &rs.closure()[i], "member {i}");
        }
        // root chains are seeds themselves
        assert_eq!(rs.chains()[0], Chain { seed: 0, steps: Vec::new() });
    }

    #[test]
    fn closure_is_idempotent() {
        let rs = setup(2, &["x + 1"], 4).unwrap();
        let again = RelSet::close(
            rs.alphabet().clone(),
            rs.field(),
            rs.closure().to_vec(),
            CloseOptions::bounded(4),
        )
        .unwrap();
        let a: BTreeSet<_> = rs.closure().iter().cloned().collect();
        let b: BTreeSet<_> = again.closure().iter().cloned().collect();
        assert_eq!(a, b);
    }

    #[test]
    fn cap_guards_runaway_closures() {
        let a = Alphabet::new(2).unwrap();
        let f = FieldSpec::Rational;
        let seeds = vec![Poly::parse("xy + yx", &a, f).unwrap()];
        let err = RelSet::close(a, f, seeds, CloseOptions { bound: 8, cap: 5 }).unwrap_err();
        assert_eq!(err, RelSetError::CapExceeded { cap: 5 });
    }

    #[test]
    fn seed_validation() {
        assert_eq!(
            setup(2, &["x - x"], 3).unwrap_err(),
            RelSetError::ZeroSeed { index: 0 }
        );
        assert_eq!(
            setup(2, &["xyxy + 1"], 3).unwrap_err(),
            RelSetError::SeedExceedsBound { index: 0, len: 4, bound: 3 }
        );
        // field mismatch caught even though parsing normally prevents it
        let a = Alphabet::new(2).unwrap();
        let gf = FieldSpec::gf(5).unwrap();
        let seeds = vec![Poly::parse("x + 1", &a, gf).unwrap()];
        let err = RelSet::close(a, FieldSpec::Rational, seeds, CloseOptions::bounded(3));
        assert!(matches!(err, Err(RelSetError::FieldMismatch { .. })));
    }

    #[test]
    fn degenerate_relation_sets() {
        // no seeds: empty closure, empty mon
        let a = Alphabet::new(2).unwrap();
        let rs = RelSet::close(a, FieldSpec::Rational, vec![], CloseOptions::bounded(3)).unwrap();
        assert!(rs.closure().is_empty());
        assert!(rs.saturated());
        assert!(!rs.in_mon(&Word::empty()));
        // constant seed: closure = {1}, mon = {empty}
        let rs = setup(2, &["1"], 3).unwrap();
        assert_eq!(rs.closure().len(), 1);
        assert!(rs.in_mon(&Word::empty()));
        assert_eq!(rs.max_mon_len(), 0);
    }
}
