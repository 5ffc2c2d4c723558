//! Reduced words over a free group of configurable rank.
//!
//! [`Word`] is the universal carrier of the crate: a freely reduced sequence
//! of [`Letter`]s. Every constructor reduces, so an unreduced `Word` cannot
//! be observed. [`Alphabet`] owns generator naming and text syntax; the
//! algebra itself is name-independent.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

/// Largest supported alphabet rank (single-character generator names).
pub const MAX_RANK: usize = 26;

/// Default generator naming order: `x`, `y`, `z`, then `a`, `b`, … `w`.
const DEFAULT_NAMES: &[u8; 26] = b"xyzabcdefghijklmnopqrstuvw";

/// Exponents in word syntax are capped to keep parse output bounded.
const MAX_EXPONENT: i64 = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("the empty word is not valid input here")]
    EmptyWord,
    #[error("word is not cyclically reduced")]
    NotCyclicallyReduced,
    #[error("alphabet rank {0} outside supported range 2..={MAX_RANK}")]
    RankOutOfRange(usize),
    #[error("generator names must be distinct lowercase ASCII letters, got `{0}`")]
    InvalidName(char),
    #[error("duplicate generator name `{0}`")]
    DuplicateName(char),
    #[error("letter {0:?} does not belong to an alphabet of rank {1}")]
    LetterOutOfRange(Letter, usize),
}

/// A generator or inverse generator of the free group.
///
/// Ordering is `x₀ < x₀⁻¹ < x₁ < x₁⁻¹ < …` (generator index first, plain
/// before inverse); this is the letter order underlying every deglex
/// comparison in the crate.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    generator: u16,
    inverse: bool,
}

impl Letter {
    pub fn new(generator: u16, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn generator(self) -> u16 {
        self.generator
    }

    pub fn is_inverse(self) -> bool {
        self.inverse
    }

    /// The formal inverse (flips the sign).
    pub fn inverse(self) -> Self {
        Letter { generator: self.generator, inverse: !self.inverse }
    }

    /// True iff `self · other` cancels, i.e. `other == self⁻¹`.
    pub fn cancels(self, other: Letter) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }

    /// Dense index `2·generator + sign`, consistent with `Ord`.
    pub fn index(self) -> usize {
        self.generator as usize * 2 + usize::from(self.inverse)
    }

    pub fn from_index(index: usize) -> Self {
        Letter { generator: (index / 2) as u16, inverse: index % 2 == 1 }
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{}{}", self.generator, if self.inverse { "'" } else { "" })
    }
}

/// A freely reduced word: no adjacent letter cancels its neighbour.
///
/// `Ord` is deglex: shorter words first, ties broken letterwise by the
/// [`Letter`] order.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

fn is_reduced(letters: &[Letter]) -> bool {
    letters.windows(2).all(|w| !w[0].cancels(w[1]))
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn single(letter: Letter) -> Self {
        Word { letters: vec![letter] }
    }

    /// Freely reduces an arbitrary letter sequence (stack pass; the result
    /// is the unique reduced form).
    pub fn reduce(letters: impl IntoIterator<Item = Letter>) -> Self {
        let iter = letters.into_iter();
        let mut stack: Vec<Letter> = Vec::with_capacity(iter.size_hint().0);
        for l in iter {
            if stack.last().is_some_and(|&t| t.cancels(l)) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        Word { letters: stack }
    }

    /// Wraps a sequence already known to be reduced.
    pub(crate) fn from_reduced(letters: Vec<Letter>) -> Self {
        debug_assert!(is_reduced(&letters));
        Word { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn letter(&self, i: usize) -> Letter {
        self.letters[i]
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    /// Product with free cancellation at the junction; returns the reduced
    /// product and the number of cancelled letter pairs.
    pub fn mul(&self, other: &Word) -> (Word, usize) {
        let a = &self.letters;
        let b = &other.letters;
        let mut i = a.len();
        let mut j = 0;
        while i > 0 && j < b.len() && a[i - 1].cancels(b[j]) {
            i -= 1;
            j += 1;
        }
        let mut out = Vec::with_capacity(i + b.len() - j);
        out.extend_from_slice(&a[..i]);
        out.extend_from_slice(&b[j..]);
        // a[..i] and b[j..] are reduced and the junction no longer cancels.
        (Word::from_reduced(out), j)
    }

    pub fn inverse(&self) -> Word {
        Word::from_reduced(self.letters.iter().rev().map(|l| l.inverse()).collect())
    }

    /// `self · self · … · self` (`k` factors), freely reduced.
    pub fn pow(&self, k: u32) -> Word {
        let mut acc = Word::empty();
        for _ in 0..k {
            acc = acc.mul(self).0;
        }
        acc
    }

    /// The contiguous subword at letter positions `[start, end)`.
    ///
    /// Subwords of reduced words are reduced, so this never re-reduces.
    pub fn subword(&self, start: usize, end: usize) -> Word {
        Word::from_reduced(self.letters[start..end].to_vec())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(&a), Some(&b)) => !a.cancels(b),
            _ => true,
        }
    }

    /// Splits `self = conjugator · core · conjugator⁻¹` with `core`
    /// cyclically reduced and `conjugator` shortest possible.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let mut i = 0;
        let mut j = self.len();
        while j - i >= 2 && self.letters[i].cancels(self.letters[j - 1]) {
            i += 1;
            j -= 1;
        }
        (self.subword(i, j), self.subword(0, i))
    }

    /// The primitive root and maximal exponent if `self` is a proper power
    /// (`root^e` with `e ≥ 2`), else `None`.
    ///
    /// Requires a nonempty, cyclically reduced word: powers of such words
    /// concatenate without cancellation, so this is a periodicity check.
    pub fn is_proper_power(&self) -> Result<Option<(Word, u32)>, WordError> {
        if self.is_empty() {
            return Err(WordError::EmptyWord);
        }
        if !self.is_cyclically_reduced() {
            return Err(WordError::NotCyclicallyReduced);
        }
        let n = self.len();
        for d in 1..n {
            if n % d != 0 {
                continue;
            }
            if (d..n).all(|i| self.letters[i] == self.letters[i - d]) {
                return Ok(Some((self.subword(0, d), (n / d) as u32)));
            }
        }
        Ok(None)
    }

    pub fn common_prefix(&self, other: &Word) -> Word {
        let n = self
            .letters
            .iter()
            .zip(&other.letters)
            .take_while(|(a, b)| a == b)
            .count();
        self.subword(0, n)
    }

    pub fn common_suffix(&self, other: &Word) -> Word {
        let n = self
            .letters
            .iter()
            .rev()
            .zip(other.letters.iter().rev())
            .take_while(|(a, b)| a == b)
            .count();
        self.subword(self.len() - n, self.len())
    }

    pub fn starts_with(&self, prefix: &Word) -> bool {
        self.letters.starts_with(&prefix.letters)
    }

    pub fn ends_with(&self, suffix: &Word) -> bool {
        self.letters.ends_with(&suffix.letters)
    }

    /// Cyclic rotation moving the first `i` letters to the end, then
    /// reduced. Rotations of cyclically reduced words never reduce.
    pub fn rotate_left(&self, i: usize) -> Word {
        let i = if self.is_empty() { 0 } else { i % self.len() };
        Word::reduce(self.letters[i..].iter().chain(&self.letters[..i]).copied())
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        for l in &self.letters {
            write!(f, "{l:?}")?;
        }
        Ok(())
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<T: IntoIterator<Item = Letter>>(iter: T) -> Self {
        Word::reduce(iter)
    }
}

/// Generator naming for a free group of rank ≥ 2.
///
/// Names are single lowercase ASCII letters; the uppercase form denotes the
/// inverse (`X` = `x⁻¹`). The default naming order starts at `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<char>,
}

impl Alphabet {
    pub fn new(rank: usize) -> Result<Self, WordError> {
        if !(2..=MAX_RANK).contains(&rank) {
            return Err(WordError::RankOutOfRange(rank));
        }
        Ok(Alphabet {
            names: DEFAULT_NAMES[..rank].iter().map(|&b| b as char).collect(),
        })
    }

    pub fn with_names(names: Vec<char>) -> Result<Self, WordError> {
        if !(2..=MAX_RANK).contains(&names.len()) {
            return Err(WordError::RankOutOfRange(names.len()));
        }
        for (i, &c) in names.iter().enumerate() {
            if !c.is_ascii_lowercase() {
                return Err(WordError::InvalidName(c));
            }
            if names[..i].contains(&c) {
                return Err(WordError::DuplicateName(c));
            }
        }
        Ok(Alphabet { names })
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[char] {
        &self.names
    }

    /// All `2·rank` letters in the fixed letter order.
    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..2 * self.rank()).map(Letter::from_index)
    }

    pub fn contains(&self, letter: Letter) -> bool {
        (letter.generator as usize) < self.rank()
    }

    pub fn validate_word(&self, word: &Word) -> Result<(), WordError> {
        for &l in word.letters() {
            if !self.contains(l) {
                return Err(WordError::LetterOutOfRange(l, self.rank()));
            }
        }
        Ok(())
    }

    /// The letter named by `c`: lowercase = generator, uppercase = inverse.
    pub fn letter(&self, c: char) -> Option<Letter> {
        let lower = c.to_ascii_lowercase();
        let generator = self.names.iter().position(|&n| n == lower)? as u16;
        Some(Letter::new(generator, c.is_ascii_uppercase()))
    }

    pub fn name(&self, letter: Letter) -> char {
        let c = self.names[letter.generator as usize];
        if letter.is_inverse() {
            c.to_ascii_uppercase()
        } else {
            c
        }
    }

    /// Renders a word in text syntax; the empty word is `1`.
    pub fn format_word(&self, word: &Word) -> String {
        if word.is_empty() {
            return "1".to_string();
        }
        word.letters().iter().map(|&l| self.name(l)).collect()
    }

    /// Parses word text syntax: letter characters with optional integer
    /// exponents (`xyX`, `x^-1y`, `yx^3`), or `1` for the empty word.
    /// Surrounding whitespace is allowed; the result is freely reduced.
    pub fn parse_word(&self, s: &str) -> Result<Word, ParseWordError> {
        let fail = |col: usize, kind: ParseWordErrorKind| Err(ParseWordError { col: col + 1, kind });
        if s.trim() == "1" {
            return Ok(Word::empty());
        }
        let mut letters: Vec<Letter> = Vec::new();
        let mut chars = s.char_indices().peekable();
        let mut seen_any = false;
        while let Some((pos, c)) = chars.next() {
            if c.is_whitespace() {
                if seen_any && chars.peek().is_some_and(|&(_, c)| !c.is_whitespace()) {
                    return fail(pos, ParseWordErrorKind::UnexpectedChar(c));
                }
                continue;
            }
            if c == '1' {
                return fail(pos, ParseWordErrorKind::MisplacedOne);
            }
            if !c.is_ascii_alphabetic() {
                return fail(pos, ParseWordErrorKind::UnexpectedChar(c));
            }
            let Some(letter) = self.letter(c) else {
                return fail(pos, ParseWordErrorKind::UnknownLetter(c));
            };
            seen_any = true;
            let mut exponent: i64 = 1;
            if chars.peek().is_some_and(|&(_, c)| c == '^') {
                let (caret_pos, _) = chars.next().unwrap();
                let negative = if chars.peek().is_some_and(|&(_, c)| c == '-') {
                    chars.next();
                    true
                } else {
                    false
                };
                let mut digits = String::new();
                while chars.peek().is_some_and(|&(_, c)| c.is_ascii_digit()) {
                    digits.push(chars.next().unwrap().1);
                }
                if digits.is_empty() {
                    return fail(caret_pos, ParseWordErrorKind::BadExponent);
                }
                exponent = match digits.parse::<i64>() {
                    Ok(e) if e <= MAX_EXPONENT => e,
                    _ => return fail(caret_pos, ParseWordErrorKind::ExponentOutOfRange),
                };
                if negative {
                    exponent = -exponent;
                }
            }
            let l = if exponent < 0 { letter.inverse() } else { letter };
            for _ in 0..exponent.unsigned_abs() {
                letters.push(l);
            }
        }
        if !seen_any {
            return fail(0, ParseWordErrorKind::Empty);
        }
        Ok(Word::reduce(letters))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("column {col}: {kind}")]
pub struct ParseWordError {
    /// 1-based byte offset into the parsed string.
    pub col: usize,
    pub kind: ParseWordErrorKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseWordErrorKind {
    #[error("unknown generator name `{0}`")]
    UnknownLetter(char),
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("malformed exponent")]
    BadExponent,
    #[error("exponent magnitude exceeds {MAX_EXPONENT}")]
    ExponentOutOfRange,
    #[error("`1` (the empty word) must stand alone")]
    MisplacedOne,
    #[error("empty word text (use `1` for the empty word)")]
    Empty,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(3).unwrap()
    }

    fn w(s: &str) -> Word {
        ab().parse_word(s).unwrap()
    }

    #[test]
    fn reduce_cancels_inverse_pairs() {
        let x = Letter::new(0, false);
        assert!(Word::reduce([x, x.inverse()]).is_empty());
        let y = Letter::new(1, false);
        assert_eq!(Word::reduce([x, y, y.inverse(), x]), w("xx"));
    }

    #[test]
    fn reduce_is_idempotent() {
        let v = w("xyX");
        assert_eq!(Word::reduce(v.letters().iter().copied()), v);
    }

    #[test]
    fn mul_counts_junction_cancellation() {
        assert_eq!(w("xy").mul(&w("Yz")), (w("xz"), 1));
        assert_eq!(w("xy").mul(&w("zx")), (w("xyzx"), 0));
        let v = w("xyXY");
        assert_eq!(v.mul(&v.inverse()), (Word::empty(), 4));
    }

    #[test]
    fn inverse_is_involution() {
        let v = w("xYx");
        assert_eq!(v.inverse(), w("XyX"));
        assert_eq!(v.inverse().inverse(), v);
        assert!(Word::empty().inverse().is_empty());
    }

    #[test]
    fn cyclic_reduce_splits_conjugator() {
        let (core, conj) = w("xyX").cyclic_reduce();
        assert_eq!((core, conj), (w("y"), w("x")));
        let (core, conj) = w("xy").cyclic_reduce();
        assert_eq!((core, conj), (w("xy"), Word::empty()));
        // Deep conjugation: xy · z · (xy)⁻¹
        let (core, conj) = w("xyzYX").cyclic_reduce();
        assert_eq!((core, conj), (w("z"), w("xy")));
    }

    #[test]
    fn proper_power_detection() {
        assert_eq!(w("xyxy").is_proper_power(), Ok(Some((w("xy"), 2))));
        assert_eq!(w("xyx").is_proper_power(), Ok(None));
        assert_eq!(w("xxx").is_proper_power(), Ok(Some((w("x"), 3))));
        assert_eq!(Word::empty().is_proper_power(), Err(WordError::EmptyWord));
        assert_eq!(w("xyX").is_proper_power(), Err(WordError::NotCyclicallyReduced));
    }

    #[test]
    fn prefix_suffix() {
        assert_eq!(w("xyx").common_prefix(&w("xyz")), w("xy"));
        assert_eq!(w("x").common_prefix(&w("x")), w("x"));
        assert_eq!(w("yx").common_suffix(&w("zx")), w("x"));
        assert_eq!(w("xy").common_suffix(&w("zY")), Word::empty());
    }

    #[test]
    fn deglex_order() {
        // length first, then letterwise with x < X < y < Y
        assert!(w("yy") < w("xxx"));
        assert!(w("x") < w("X"));
        assert!(w("X") < w("y"));
        assert!(w("xy") < w("xY"));
        assert!(Word::empty() < w("x"));
    }

    #[test]
    fn parse_and_format() {
        let a = ab();
        assert_eq!(a.format_word(&w("xyX")), "xyX");
        assert_eq!(a.parse_word("x^-1y").unwrap(), w("Xy"));
        assert_eq!(a.parse_word("yx^3").unwrap(), w("yxxx"));
        assert_eq!(a.parse_word("x^0").unwrap(), Word::empty());
        assert_eq!(a.parse_word(" 1 ").unwrap(), Word::empty());
        assert_eq!(a.parse_word("xX").unwrap(), Word::empty());
        assert_eq!(a.format_word(&Word::empty()), "1");
    }

    #[test]
    fn parse_errors_carry_column() {
        let a = ab();
        let e = a.parse_word("xq").unwrap_err();
        assert_eq!((e.col, e.kind), (2, ParseWordErrorKind::UnknownLetter('q')));
        let e = a.parse_word("x^y").unwrap_err();
        assert_eq!((e.col, e.kind), (2, ParseWordErrorKind::BadExponent));
        let e = a.parse_word("x1").unwrap_err();
        assert_eq!((e.col, e.kind), (2, ParseWordErrorKind::MisplacedOne));
        let e = a.parse_word("x y").unwrap_err();
        assert_eq!(e.kind, ParseWordErrorKind::UnexpectedChar(' '));
        let e = a.parse_word("").unwrap_err();
        assert_eq!(e.kind, ParseWordErrorKind::Empty);
    }

    #[test]
    fn alphabet_validation() {
        assert_eq!(Alphabet::new(1).unwrap_err(), WordError::RankOutOfRange(1));
        assert_eq!(
            Alphabet::with_names(vec!['a', 'A']).unwrap_err(),
            WordError::InvalidName('A')
        );
        assert_eq!(
            Alphabet::with_names(vec!['a', 'a']).unwrap_err(),
            WordError::DuplicateName('a')
        );
        let a = Alphabet::new(3).unwrap();
        assert_eq!(a.names(), &['x', 'y', 'z']);
        assert!(a.validate_word(&w("xy")).is_ok());
        assert!(Alphabet::new(2)
            .unwrap()
            .validate_word(&a.parse_word("z").unwrap())
            .is_err());
    }

    #[test]
    fn rotation() {
        assert_eq!(w("xyx").rotate_left(1), w("yxx"));
        assert_eq!(w("xyx").rotate_left(3), w("xyx"));
        // Rotating a non-cyclically-reduced word reduces the junction.
        assert_eq!(w("xyX").rotate_left(1), w("y"));
        assert_eq!(Word::empty().rotate_left(5), Word::empty());
    }

    #[test]
    fn letter_index_roundtrip() {
        for i in 0..8 {
            assert_eq!(Letter::from_index(i).index(), i);
        }
    }
}
