//! Words over the two-letter alphabet {e0, e1} and their index (composition) form.
//!
//! A word is stored in display order: the leftmost letter is at position 0.
//! Weight is the number of letters, depth the number of e1 letters. Words are
//! small `Copy` values (bit-packed, at most [`MAX_WEIGHT`] letters) so they can
//! key sparse maps cheaply.

use std::cmp::Ordering;
use std::fmt;

use crate::Error;

/// Hard cap on word length; everything in this crate is weight-truncated far below this.
pub const MAX_WEIGHT: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    E0,
    E1,
}

impl Letter {
    pub fn bit(self) -> u16 {
        match self {
            Letter::E0 => 0,
            Letter::E1 => 1,
        }
    }

    pub fn from_bit(b: u16) -> Letter {
        if b == 0 {
            Letter::E0
        } else {
            Letter::E1
        }
    }
}

/// A word over {e0, e1}, possibly empty. Bit k of `bits` holds the letter at
/// position k (0 = leftmost, display order), with e1 = 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Word {
    len: u8,
    bits: u16,
}

impl Word {
    pub fn empty() -> Word {
        Word { len: 0, bits: 0 }
    }

    pub fn from_letters(letters: &[Letter]) -> Word {
        assert!(letters.len() <= MAX_WEIGHT, "word too long");
        let mut bits = 0u16;
        for (k, l) in letters.iter().enumerate() {
            bits |= l.bit() << k;
        }
        Word {
            len: letters.len() as u8,
            bits,
        }
    }

    /// Single-letter words.
    pub fn letter(l: Letter) -> Word {
        Word::from_letters(&[l])
    }

    pub fn e0() -> Word {
        Word::letter(Letter::E0)
    }

    pub fn e1() -> Word {
        Word::letter(Letter::E1)
    }

    pub fn weight(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of e1 letters.
    pub fn depth(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn get(&self, k: usize) -> Letter {
        debug_assert!(k < self.weight());
        Letter::from_bit((self.bits >> k) & 1)
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.weight()).map(move |k| self.get(k))
    }

    pub fn concat(&self, other: &Word) -> Word {
        assert!(
            self.weight() + other.weight() <= MAX_WEIGHT,
            "concatenation exceeds supported weight"
        );
        Word {
            len: self.len + other.len,
            bits: self.bits | (other.bits << self.len),
        }
    }

    /// Prefix of the first `k` letters.
    pub fn prefix(&self, k: usize) -> Word {
        debug_assert!(k <= self.weight());
        Word {
            len: k as u8,
            bits: self.bits & ((1u16 << k) - 1).wrapping_sub(0),
        }
    }

    /// Suffix starting at position `k`.
    pub fn suffix(&self, k: usize) -> Word {
        debug_assert!(k <= self.weight());
        Word {
            len: self.len - k as u8,
            bits: self.bits >> k,
        }
    }

    /// Split into (prefix of k letters, rest).
    pub fn split(&self, k: usize) -> (Word, Word) {
        (self.prefix(k), self.suffix(k))
    }

    pub fn first(&self) -> Option<Letter> {
        if self.is_empty() {
            None
        } else {
            Some(self.get(0))
        }
    }

    pub fn last(&self) -> Option<Letter> {
        if self.is_empty() {
            None
        } else {
            Some(self.get(self.weight() - 1))
        }
    }

    /// Word with letter order reversed.
    pub fn reverse(&self) -> Word {
        let mut bits = 0u16;
        for k in 0..self.weight() {
            bits |= ((self.bits >> k) & 1) << (self.weight() - 1 - k);
        }
        Word {
            len: self.len,
            bits,
        }
    }

    /// Number of leading letters equal to `l`.
    pub fn leading_run(&self, l: Letter) -> usize {
        self.letters().take_while(|&x| x == l).count()
    }

    /// Number of trailing letters equal to `l`.
    pub fn trailing_run(&self, l: Letter) -> usize {
        (0..self.weight())
            .rev()
            .take_while(|&k| self.get(k) == l)
            .count()
    }

    /// e0^k.
    pub fn e0_pow(k: usize) -> Word {
        Word::from_letters(&vec![Letter::E0; k])
    }

    /// e1^k.
    pub fn e1_pow(k: usize) -> Word {
        Word::from_letters(&vec![Letter::E1; k])
    }

    /// All words of the given weight, in canonical order.
    pub fn all_of_weight(n: usize) -> Vec<Word> {
        assert!(n <= MAX_WEIGHT);
        let mut out = Vec::with_capacity(1 << n);
        for raw in 0..(1u32 << n) {
            // enumerate so that the canonical (lexicographic, e0 < e1) order comes out sorted
            let mut bits = 0u16;
            for k in 0..n {
                // raw's most significant of the n bits is position 0
                if (raw >> (n - 1 - k)) & 1 == 1 {
                    bits |= 1 << k;
                }
            }
            out.push(Word {
                len: n as u8,
                bits,
            });
        }
        out
    }

    /// All words of weight between `lo` and `hi` inclusive, canonical order.
    pub fn all_in_range(lo: usize, hi: usize) -> Vec<Word> {
        (lo..=hi).flat_map(Word::all_of_weight).collect()
    }

    /// Parse "0"/"1" concatenated text, e.g. "001" = e0 e0 e1. Empty string is the empty word.
    pub fn parse(s: &str) -> Result<Word, Error> {
        let mut letters = Vec::new();
        for c in s.chars() {
            match c {
                '0' => letters.push(Letter::E0),
                '1' => letters.push(Letter::E1),
                _ => return Err(Error::Parse(format!("bad letter {c:?} in word {s:?}"))),
            }
        }
        if letters.len() > MAX_WEIGHT {
            return Err(Error::Parse(format!("word {s:?} exceeds max weight")));
        }
        Ok(Word::from_letters(&letters))
    }

    /// Sort key: weight first, then lexicographic with e0 < e1 (leftmost letter most significant).
    fn key(&self) -> u32 {
        let mut k = (self.len as u32) << 16;
        for i in 0..self.weight() {
            k |= (((self.bits >> i) & 1) as u32) << (15 - i);
        }
        k
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.letters() {
            write!(f, "{}", if l == Letter::E1 { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "Word(∅)")
        } else {
            write!(f, "Word({self})")
        }
    }
}

/// Index (composition) form of a nonempty word: exponents (s_d, ..., s_1) each >= 1,
/// a trailing e0-block exponent s_0 >= 1, and an optional extra leading exponent b
/// (prefixing the word with e0^b e1) used for adjoint coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Index {
    /// (s_d, ..., s_1), leftmost first; may be empty for pure e0-blocks.
    pub exponents: Vec<u32>,
    /// Trailing block exponent s_0 >= 1 (s_0 = 1 means the word ends with e1).
    pub trailing: u32,
    /// Optional adjoint prefix: Some(b) prefixes e0^b e1.
    pub leading_b: Option<u32>,
}

impl Index {
    pub fn new(exponents: Vec<u32>, trailing: u32) -> Index {
        Index {
            exponents,
            trailing,
            leading_b: None,
        }
    }

    /// Depth of the corresponding word.
    pub fn depth(&self) -> usize {
        self.exponents.len() + usize::from(self.leading_b.is_some())
    }

    /// Weight of the corresponding word.
    pub fn weight(&self) -> usize {
        let base: u32 = self.exponents.iter().sum::<u32>() + self.trailing - 1;
        base as usize + self.leading_b.map_or(0, |b| b as usize + 1)
    }

    /// Parse "(s_d,...,s_1;s_0)"; ";s_0" may be omitted and defaults to 1.
    pub fn parse(s: &str) -> Result<Index, Error> {
        let t = s.trim();
        let t = t
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("index {s:?} must be parenthesized")))?;
        let (exps, trailing) = match t.split_once(';') {
            Some((a, b)) => (a, b.trim().parse::<u32>().map_err(|e| {
                Error::Parse(format!("bad trailing exponent in {s:?}: {e}"))
            })?),
            None => (t, 1),
        };
        let mut exponents = Vec::new();
        if !exps.trim().is_empty() {
            for part in exps.split(',') {
                exponents.push(part.trim().parse::<u32>().map_err(|e| {
                    Error::Parse(format!("bad exponent {part:?} in {s:?}: {e}"))
                })?);
            }
        }
        let idx = Index::new(exponents, trailing);
        idx.validate()?;
        Ok(idx)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.trailing < 1 {
            return Err(Error::BadIndex("trailing exponent must be >= 1".into()));
        }
        if self.exponents.iter().any(|&s| s < 1) {
            return Err(Error::BadIndex("all exponents must be >= 1".into()));
        }
        Ok(())
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.exponents.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ";{})", self.trailing)
    }
}

/// Build the word e0^{s_d-1} e1 ... e0^{s_1-1} e1 e0^{s_0-1} (with the optional
/// adjoint prefix e0^b e1 when `leading_b` is set).
pub fn word_from_index(idx: &Index) -> Result<Word, Error> {
    idx.validate()?;
    let mut letters = Vec::new();
    if let Some(b) = idx.leading_b {
        letters.extend(std::iter::repeat(Letter::E0).take(b as usize));
        letters.push(Letter::E1);
    }
    for &s in &idx.exponents {
        letters.extend(std::iter::repeat(Letter::E0).take(s as usize - 1));
        letters.push(Letter::E1);
    }
    letters.extend(std::iter::repeat(Letter::E0).take(idx.trailing as usize - 1));
    if letters.len() > MAX_WEIGHT {
        return Err(Error::BadIndex("index exceeds max weight".into()));
    }
    Ok(Word::from_letters(&letters))
}

/// Inverse of [`word_from_index`] on nonempty words (never sets `leading_b`).
pub fn index_from_word(w: &Word) -> Result<Index, Error> {
    if w.is_empty() {
        return Err(Error::BadIndex("empty word has no index".into()));
    }
    let mut exponents = Vec::new();
    let mut run = 0u32;
    for l in w.letters() {
        match l {
            Letter::E0 => run += 1,
            Letter::E1 => {
                exponents.push(run + 1);
                run = 0;
            }
        }
    }
    Ok(Index::new(exponents, run + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(exps: &[u32], t: u32) -> Index {
        Index::new(exps.to_vec(), t)
    }

    #[test]
    fn word_from_index_examples() {
        // (s_1=2; s_0=1) -> e0 e1
        assert_eq!(word_from_index(&idx(&[2], 1)).unwrap(), Word::parse("01").unwrap());
        // (s_2=2, s_1=1; s_0=1) -> e0 e1 e1
        assert_eq!(word_from_index(&idx(&[2, 1], 1)).unwrap(), Word::parse("011").unwrap());
        // (s_1=3; s_0=2) -> e0 e0 e1 e0
        assert_eq!(word_from_index(&idx(&[3], 2)).unwrap(), Word::parse("0010").unwrap());
    }

    #[test]
    fn index_from_word_examples() {
        assert_eq!(index_from_word(&Word::parse("01").unwrap()).unwrap(), idx(&[2], 1));
        assert_eq!(index_from_word(&Word::parse("10").unwrap()).unwrap(), idx(&[1], 2));
        // e0 e1 e0 e0 e1 -> (2,3;1)
        assert_eq!(index_from_word(&Word::parse("01001").unwrap()).unwrap(), idx(&[2, 3], 1));
    }

    #[test]
    fn index_rejects_bad_exponents() {
        assert!(word_from_index(&idx(&[0], 1)).is_err());
        assert!(word_from_index(&idx(&[2], 0)).is_err());
        assert!(index_from_word(&Word::empty()).is_err());
    }

    #[test]
    fn round_trip_exhaustive_weight_10() {
        for n in 1..=10 {
            for w in Word::all_of_weight(n) {
                let i = index_from_word(&w).unwrap();
                assert_eq!(word_from_index(&i).unwrap(), w);
                assert_eq!(i.weight(), w.weight());
                assert_eq!(i.depth(), w.depth());
            }
        }
    }

    #[test]
    fn weight_depth_additive_under_concat() {
        for a in Word::all_in_range(0, 5) {
            for b in Word::all_in_range(0, 5) {
                let c = a.concat(&b);
                assert_eq!(c.weight(), a.weight() + b.weight());
                assert_eq!(c.depth(), a.depth() + b.depth());
            }
        }
    }

    #[test]
    fn canonical_order_weight_then_lex() {
        let mut ws = vec![
            Word::parse("1").unwrap(),
            Word::parse("0").unwrap(),
            Word::parse("00").unwrap(),
            Word::parse("01").unwrap(),
            Word::parse("10").unwrap(),
            Word::empty(),
        ];
        ws.sort();
        let shown: Vec<String> = ws.iter().map(|w| w.to_string()).collect();
        assert_eq!(shown, vec!["", "0", "1", "00", "01", "10"]);
    }

    #[test]
    fn adjoint_prefix_word() {
        let mut i = idx(&[2], 1);
        i.leading_b = Some(2);
        // e0^2 e1  then  e0 e1
        assert_eq!(word_from_index(&i).unwrap(), Word::parse("00101").unwrap());
        assert_eq!(i.weight(), 5);
        assert_eq!(i.depth(), 2);
    }

    #[test]
    fn parse_index_forms() {
        assert_eq!(Index::parse("(3;1)").unwrap(), idx(&[3], 1));
        assert_eq!(Index::parse("(2,1;1)").unwrap(), idx(&[2, 1], 1));
        assert_eq!(Index::parse("(5)").unwrap(), idx(&[5], 1));
        assert!(Index::parse("3;1").is_err());
        assert!(Index::parse("(0;1)").is_err());
    }

    #[test]
    fn reverse_and_runs() {
        let w = Word::parse("00110").unwrap();
        assert_eq!(w.reverse(), Word::parse("01100").unwrap());
        assert_eq!(w.leading_run(Letter::E0), 2);
        assert_eq!(w.trailing_run(Letter::E0), 1);
    }
}
