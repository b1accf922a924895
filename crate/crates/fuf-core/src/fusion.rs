//! Word arithmetic and the fusion (tensor-decomposition) calculus for the
//! irreducible corepresentations of a free unitary quantum group.
//!
//! Irreducibles are labelled by finite words on the two-letter alphabet
//! `{u, ū}`. The tensor product of two irreducibles decomposes as the plain
//! concatenation plus one extra summand per step of conjugate cancellation
//! between the end of the left word and the start of the right word:
//!
//! ```text
//! xu ⊗ uy  = xuuy                 xu ⊗ ūy = xuūy ⊕ x⊗y
//! xū ⊗ ūy  = xūūy                 xū ⊗ uy = xūuy ⊕ x⊗y
//! ```
//!
//! Words are packed as bit sequences (one bit per letter) so that level sets
//! `I_n = {x : |x| = n}` can be enumerated exhaustively.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

/// One of the two generators `u`, `ū` of the free monoid of irreducibles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    U,
    Ubar,
}

impl Letter {
    /// The conjugate letter; an involution swapping `u` and `ū`.
    pub fn conjugate(self) -> Self {
        match self {
            Letter::U => Letter::Ubar,
            Letter::Ubar => Letter::U,
        }
    }

    /// Single-character form used by the CLI word syntax: `u` and `b`.
    pub fn as_char(self) -> char {
        match self {
            Letter::U => 'u',
            Letter::Ubar => 'b',
        }
    }

    fn from_bit(b: u8) -> Self {
        if b == 0 {
            Letter::U
        } else {
            Letter::Ubar
        }
    }

    fn bit(self) -> u128 {
        match self {
            Letter::U => 0,
            Letter::Ubar => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WordError {
    #[error("word length {0} exceeds the maximum of {max}", max = Word::MAX_LEN)]
    TooLong(usize),
    #[error("invalid letter {0:?}; words use 'u', 'b' and \"e\" for the empty word")]
    BadChar(char),
}

/// A finite word on `{u, ū}` indexing an irreducible corepresentation.
///
/// The empty word is the trivial corepresentation. Letters are packed one
/// bit per position (`0 = u`, `1 = ū`), little end = first letter. Ordering
/// is by length first, then lexicographic on the packed bits.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Word {
    len: u8,
    bits: u128,
}

impl Word {
    /// Maximum representable length.
    pub const MAX_LEN: usize = 127;

    /// The empty word (trivial corepresentation).
    pub const EMPTY: Word = Word { len: 0, bits: 0 };

    pub fn from_letters(letters: &[Letter]) -> Result<Self, WordError> {
        if letters.len() > Self::MAX_LEN {
            return Err(WordError::TooLong(letters.len()));
        }
        let mut bits = 0u128;
        for (i, l) in letters.iter().enumerate() {
            bits |= l.bit() << i;
        }
        Ok(Word {
            len: letters.len() as u8,
            bits,
        })
    }

    /// Builds a word from raw packed bits; bit `i` is the letter at
    /// position `i` (`0 = u`, `1 = ū`). Used for exhaustive enumeration.
    pub fn from_bits(bits: u128, len: usize) -> Result<Self, WordError> {
        if len > Self::MAX_LEN {
            return Err(WordError::TooLong(len));
        }
        let mask = if len == 128 { !0 } else { (1u128 << len) - 1 };
        Ok(Word {
            len: len as u8,
            bits: bits & mask,
        })
    }

    /// The alternating word `α^(k) = α ᾱ α …` of length `k` starting with `alpha`.
    pub fn alternating(alpha: Letter, k: usize) -> Result<Self, WordError> {
        if k > Self::MAX_LEN {
            return Err(WordError::TooLong(k));
        }
        // alternating pattern 0101... or 1010... over k bits
        let pattern = 0xAAAA_AAAA_AAAA_AAAA_AAAA_AAAA_AAAA_AAAAu128;
        let bits = match alpha {
            Letter::U => pattern,
            Letter::Ubar => !pattern,
        };
        Self::from_bits(bits, k)
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Letter at position `i` (0-based from the left).
    pub fn letter(&self, i: usize) -> Letter {
        debug_assert!(i < self.len());
        Letter::from_bit(((self.bits >> i) & 1) as u8)
    }

    pub fn first(&self) -> Option<Letter> {
        (!self.is_empty()).then(|| self.letter(0))
    }

    pub fn last(&self) -> Option<Letter> {
        (!self.is_empty()).then(|| self.letter(self.len() - 1))
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.len()).map(|i| self.letter(i))
    }

    /// Appends a letter.
    pub fn push(&self, l: Letter) -> Result<Self, WordError> {
        if self.len() >= Self::MAX_LEN {
            return Err(WordError::TooLong(self.len() + 1));
        }
        Ok(Word {
            len: self.len + 1,
            bits: self.bits | (l.bit() << self.len()),
        })
    }

    /// First `n` letters.
    pub fn prefix(&self, n: usize) -> Self {
        debug_assert!(n <= self.len());
        Word::from_bits(self.bits, n).expect("prefix within length")
    }

    /// Word with the first `n` letters removed.
    pub fn drop_first(&self, n: usize) -> Self {
        debug_assert!(n <= self.len());
        Word {
            len: self.len - n as u8,
            bits: self.bits >> n,
        }
    }

    /// Word with the last `n` letters removed.
    pub fn drop_last(&self, n: usize) -> Self {
        debug_assert!(n <= self.len());
        self.prefix(self.len() - n)
    }

    pub fn concat(&self, other: &Word) -> Result<Self, WordError> {
        let len = self.len() + other.len();
        if len > Self::MAX_LEN {
            return Err(WordError::TooLong(len));
        }
        Ok(Word {
            len: len as u8,
            bits: self.bits | (other.bits << self.len()),
        })
    }

    /// The conjugate corepresentation: reverse the word and conjugate every
    /// letter. An involution.
    pub fn conjugate(&self) -> Self {
        let mut bits = 0u128;
        for i in 0..self.len() {
            let b = (self.bits >> i) & 1;
            bits |= (b ^ 1) << (self.len() - 1 - i);
        }
        Word {
            len: self.len,
            bits,
        }
    }

    /// True if `prefix` is an initial segment of `self`.
    pub fn starts_with(&self, prefix: &Word) -> bool {
        if prefix.len() > self.len() {
            return false;
        }
        let mask = if prefix.len() == 0 {
            0
        } else {
            (1u128 << prefix.len()) - 1
        };
        self.bits & mask == prefix.bits
    }

    /// Maximal alternating blocks, greedy from the left. Each block is
    /// `(starting letter, run length)`; a new block starts exactly where a
    /// letter repeats. Concatenating the blocks reproduces the word.
    pub fn blocks(&self) -> Vec<(Letter, usize)> {
        let mut out = Vec::new();
        if self.is_empty() {
            return out;
        }
        let mut start = 0usize;
        let mut prev = self.letter(0);
        for i in 1..self.len() {
            let cur = self.letter(i);
            if cur == prev {
                out.push((self.letter(start), i - start));
                start = i;
            }
            prev = cur;
        }
        out.push((self.letter(start), self.len() - start));
        out
    }

    /// Length of the final maximal alternating block (0 for the empty word).
    pub fn last_block_len(&self) -> usize {
        if self.is_empty() {
            return 0;
        }
        let mut l = 1;
        for i in (1..self.len()).rev() {
            if self.letter(i) == self.letter(i - 1) {
                break;
            }
            l += 1;
        }
        l
    }

    /// All `2^n` words of length `n`, in packed-bits order.
    pub fn all_of_len(n: usize) -> impl Iterator<Item = Word> {
        assert!(n <= 32, "level enumeration is meant for desk-scale n");
        (0u128..(1u128 << n)).map(move |bits| Word {
            len: n as u8,
            bits,
        })
    }

    /// All words of length at most `n`, shortest first.
    pub fn all_up_to_len(n: usize) -> impl Iterator<Item = Word> {
        (0..=n).flat_map(Word::all_of_len)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "e");
        }
        for l in self.letters() {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({})", self)
    }
}

impl FromStr for Word {
    type Err = WordError;

    /// Parses the CLI syntax: `u` and `b` (= ū) letters, `e` alone for the
    /// empty word.
    fn from_str(s: &str) -> Result<Self, WordError> {
        if s == "e" {
            return Ok(Word::EMPTY);
        }
        let mut letters = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                'u' => letters.push(Letter::U),
                'b' => letters.push(Letter::Ubar),
                other => return Err(WordError::BadChar(other)),
            }
        }
        Word::from_letters(&letters)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.len, self.bits).cmp(&(other.len, other.bits))
    }
}

/// Irreducible decomposition of a tensor product: a multiset of words.
///
/// Multiplicities are kept as arbitrary-size integers. For a product of two
/// factors every multiplicity is 1; iterated products accumulate.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Decomposition {
    summands: BTreeMap<Word, BigUint>,
}

impl Decomposition {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, w: Word, mult: BigUint) {
        if mult != BigUint::ZERO {
            *self.summands.entry(w).or_insert(BigUint::ZERO) += mult;
        }
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.summands.contains_key(w)
    }

    pub fn multiplicity(&self, w: &Word) -> BigUint {
        self.summands.get(w).cloned().unwrap_or(BigUint::ZERO)
    }

    /// Number of distinct summands.
    pub fn num_summands(&self) -> usize {
        self.summands.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &BigUint)> {
        self.summands.iter()
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.summands.keys()
    }
}

/// The number of conjugate-cancelling steps between the end of `x` and the
/// start of `y`: the largest `j` such that for every `i < j` the letters
/// `x[|x|-1-i]` and `y[i]` are conjugate.
pub fn cancellation_depth(x: &Word, y: &Word) -> usize {
    let max = x.len().min(y.len());
    let mut j = 0;
    while j < max && x.letter(x.len() - 1 - j) == y.letter(j).conjugate() {
        j += 1;
    }
    j
}

/// Decomposes `x ⊗ y` into irreducibles.
///
/// The result always contains the concatenation `xy`; each cancellation step
/// contributes one further summand `x' y'` where `x = x'v`, `y = v̄ y'`.
/// Products of two irreducibles are multiplicity free.
pub fn tensor_decompose(x: &Word, y: &Word) -> Decomposition {
    let mut out = Decomposition::new();
    let one = BigUint::from(1u8);
    for j in 0..=cancellation_depth(x, y) {
        let w = x
            .drop_last(j)
            .concat(&y.drop_first(j))
            .expect("summand no longer than xy");
        out.add(w, one.clone());
    }
    out
}

/// Decomposes `x ⊗ y ⊗ z`, accumulating multiplicities across the two
/// pairwise steps. The result does not depend on the association order.
pub fn triple_decompose(x: &Word, y: &Word, z: &Word) -> Decomposition {
    let mut out = Decomposition::new();
    for (w, m) in tensor_decompose(x, y).iter() {
        for (t, m2) in tensor_decompose(w, z).iter() {
            out.add(*t, m * m2);
        }
    }
    out
}

/// Decomposes an iterated product `ws[0] ⊗ ws[1] ⊗ …`, folding left.
/// The empty product is the trivial corepresentation.
pub fn iterated_decompose(ws: &[Word]) -> Decomposition {
    let mut out = Decomposition::new();
    out.add(Word::EMPTY, BigUint::from(1u8));
    for w in ws {
        let mut next = Decomposition::new();
        for (t, m) in out.iter() {
            for (s, m2) in tensor_decompose(t, w).iter() {
                next.add(*s, m * m2);
            }
        }
        out = next;
    }
    out
}

/// Subobject test: `w ⊂ x ⊗ y` iff `x = x'v`, `y = v̄ y'` and `w = x'y'`
/// for some cancellation split `v`.
pub fn is_subobject(w: &Word, x: &Word, y: &Word) -> bool {
    if w.len() > x.len() + y.len() {
        return false;
    }
    let diff = x.len() + y.len() - w.len();
    if diff % 2 != 0 {
        return false;
    }
    let j = diff / 2;
    if j > cancellation_depth(x, y) {
        return false;
    }
    let candidate = x
        .drop_last(j)
        .concat(&y.drop_first(j))
        .expect("within bounds");
    candidate == *w
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(Word::EMPTY.conjugate(), Word::EMPTY);
        assert_eq!(w("u").conjugate(), w("b"));
        // reverse-and-flip of uuū
        assert_eq!(w("uub").conjugate(), w("ubb"));
    }

    #[test]
    fn conjugate_is_involution() {
        for word in Word::all_up_to_len(8) {
            assert_eq!(word.conjugate().conjugate(), word);
        }
    }

    #[test]
    fn block_decomposition_examples() {
        assert_eq!(w("uub").blocks(), vec![(Letter::U, 1), (Letter::U, 2)]);
        assert_eq!(Word::EMPTY.blocks(), vec![]);
        let alt = Word::alternating(Letter::U, 5).unwrap();
        assert_eq!(alt.blocks(), vec![(Letter::U, 5)]);
        assert_eq!(alt, w("ububu"));
    }

    #[test]
    fn blocks_reconstruct_word() {
        for word in Word::all_up_to_len(9) {
            let mut rebuilt = Word::EMPTY;
            for (letter, len) in word.blocks() {
                let block = Word::alternating(letter, len).unwrap();
                rebuilt = rebuilt.concat(&block).unwrap();
            }
            assert_eq!(rebuilt, word);
            assert_eq!(
                word.last_block_len(),
                word.blocks().last().map_or(0, |b| b.1)
            );
        }
    }

    #[test]
    fn tensor_examples() {
        let d = tensor_decompose(&w("u"), &w("u"));
        assert_eq!(d.num_summands(), 1);
        assert!(d.contains(&w("uu")));

        let d = tensor_decompose(&Word::EMPTY, &w("ubu"));
        assert_eq!(d.num_summands(), 1);
        assert!(d.contains(&w("ubu")));

        let d = tensor_decompose(&w("ub"), &w("ub"));
        assert_eq!(d.num_summands(), 3);
        assert!(d.contains(&w("ubub")));
        assert!(d.contains(&w("ub")));
        assert!(d.contains(&Word::EMPTY));
    }

    #[test]
    fn triple_examples() {
        let d = triple_decompose(&w("u"), &Word::EMPTY, &w("b"));
        assert_eq!(d.num_summands(), 2);
        assert_eq!(d.multiplicity(&w("ub")), BigUint::from(1u8));
        assert_eq!(d.multiplicity(&Word::EMPTY), BigUint::from(1u8));

        // the sandwich computation for F = {u} at N = 1
        let d = triple_decompose(&w("ub"), &w("u"), &w("ub"));
        assert_eq!(d.num_summands(), 2);
        assert!(d.contains(&w("ubuub")));
        assert!(d.contains(&w("uub")));
    }

    #[test]
    fn subobject_examples() {
        assert!(is_subobject(&w("uu"), &w("u"), &w("u")));
        assert!(is_subobject(&Word::EMPTY, &w("u"), &w("b")));
        assert!(!is_subobject(&w("u"), &w("u"), &w("u")));
    }

    #[test]
    fn subobject_matches_decomposition() {
        let words: Vec<Word> = Word::all_up_to_len(4).collect();
        for x in &words {
            for y in &words {
                let d = tensor_decompose(x, y);
                for cand in Word::all_up_to_len(8) {
                    assert_eq!(is_subobject(&cand, x, y), d.contains(&cand));
                }
            }
        }
    }

    #[test]
    fn multiplicity_free_and_count_law_exhaustive() {
        let words: Vec<Word> = Word::all_up_to_len(4).collect();
        for x in &words {
            for y in &words {
                let d = tensor_decompose(x, y);
                for (_, m) in d.iter() {
                    assert_eq!(*m, BigUint::from(1u8));
                }
                assert_eq!(d.num_summands(), 1 + cancellation_depth(x, y));
            }
        }
    }

    #[test]
    fn associativity_exhaustive_small() {
        let words: Vec<Word> = Word::all_up_to_len(3).collect();
        for x in &words {
            for y in &words {
                for z in &words {
                    let mut left = Decomposition::new();
                    for (t, m) in tensor_decompose(x, y).iter() {
                        for (s, m2) in tensor_decompose(t, z).iter() {
                            left.add(*s, m * m2);
                        }
                    }
                    let mut right = Decomposition::new();
                    for (t, m) in tensor_decompose(y, z).iter() {
                        for (s, m2) in tensor_decompose(x, t).iter() {
                            right.add(*s, m * m2);
                        }
                    }
                    assert_eq!(left, right, "x={x} y={y} z={z}");
                }
            }
        }
    }

    #[test]
    fn frobenius_trivial_summand() {
        // ε ⊂ x⊗y iff y is the conjugate of x
        for x in Word::all_up_to_len(5) {
            for y in Word::all_of_len(x.len()) {
                let has_unit = tensor_decompose(&x, &y).contains(&Word::EMPTY);
                assert_eq!(has_unit, y == x.conjugate(), "x={x} y={y}");
            }
        }
    }

    #[test]
    fn word_parse_roundtrip() {
        assert_eq!(w("e"), Word::EMPTY);
        assert_eq!(format!("{}", w("ubu")), "ubu");
        assert!("uxb".parse::<Word>().is_err());
    }

    proptest! {
        #[test]
        fn prop_conjugation_compatibility(xb in 0u128..1u128<<8, xl in 0usize..=8,
                                          yb in 0u128..1u128<<8, yl in 0usize..=8) {
            // w ⊂ x⊗y iff conjugate(w) ⊂ conjugate(y)⊗conjugate(x)
            let x = Word::from_bits(xb, xl).unwrap();
            let y = Word::from_bits(yb, yl).unwrap();
            let d = tensor_decompose(&x, &y);
            let dc = tensor_decompose(&y.conjugate(), &x.conjugate());
            for (wrd, _) in d.iter() {
                prop_assert!(dc.contains(&wrd.conjugate()));
            }
            prop_assert_eq!(d.num_summands(), dc.num_summands());
        }

        #[test]
        fn prop_multiplicity_free_sampled(xb in 0u128..1u128<<8, yb in 0u128..1u128<<8) {
            let x = Word::from_bits(xb, 8).unwrap();
            let y = Word::from_bits(yb, 8).unwrap();
            for (_, m) in tensor_decompose(&x, &y).iter() {
                prop_assert_eq!(m.clone(), BigUint::from(1u8));
            }
        }

        #[test]
        fn prop_concat_always_summand(xb in 0u128..1u128<<7, xl in 0usize..=7,
                                      yb in 0u128..1u128<<7, yl in 0usize..=7) {
            let x = Word::from_bits(xb, xl).unwrap();
            let y = Word::from_bits(yb, yl).unwrap();
            let cat = x.concat(&y).unwrap();
            prop_assert!(tensor_decompose(&x, &y).contains(&cat));
        }
    }
}
