use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use crate::{Error, Result};

/// A signed generator index: `i` stands for `x_i`, `-i` for `x_i^{-1}`.
pub type Letter = i32;

/// A freely reduced word in the generators `x_1, x_2, ...`.
///
/// Reduction happens on construction, so two words are equal exactly when
/// they represent the same element of the free group.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    /// Builds the reduced word of a letter sequence. Letters must be nonzero.
    pub fn new<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            assert!(l != 0, "generator index 0 is not a letter");
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// The one-letter word `x_i`.
    pub fn generator(i: usize) -> Self {
        Word(vec![i as Letter])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|l| -l).collect())
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.len() * n.unsigned_abs() as usize);
        for _ in 0..n.unsigned_abs() {
            letters.extend_from_slice(&base.0);
        }
        Word::new(letters)
    }

    /// Sum of the exponents of `x_gen` in the word.
    pub fn exponent_sum(&self, gen: usize) -> i64 {
        self.0
            .iter()
            .filter(|l| l.unsigned_abs() as usize == gen)
            .map(|l| l.signum() as i64)
            .sum()
    }

    /// Largest generator index appearing, 0 for the identity.
    pub fn max_generator(&self) -> usize {
        self.0.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0)
    }

    /// Replaces every `x_i` by `image(i)` (and `x_i^{-1}` by its inverse).
    pub fn substitute<F: Fn(usize) -> Word>(&self, image: F) -> Word {
        let mut letters = Vec::new();
        for &l in &self.0 {
            let w = image(l.unsigned_abs() as usize);
            if l > 0 {
                letters.extend_from_slice(&w.0);
            } else {
                letters.extend(w.0.iter().rev().map(|x| -x));
            }
        }
        Word::new(letters)
    }

    /// All cyclic rotations `l_k … l_m l_1 … l_{k-1}` (reduced).
    pub fn cyclic_rotation(&self, k: usize) -> Word {
        if self.0.is_empty() {
            return self.clone();
        }
        let k = k % self.0.len();
        Word::new(self.0[k..].iter().chain(self.0[..k].iter()).copied())
    }
}

impl Mul<&Word> for &Word {
    type Output = Word;

    fn mul(self, rhs: &Word) -> Word {
        Word::new(self.0.iter().chain(rhs.0.iter()).copied())
    }
}

impl Mul for Word {
    type Output = Word;

    fn mul(self, rhs: Word) -> Word {
        &self * &rhs
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *l > 0 {
                write!(f, "x{l}")?;
            } else {
                write!(f, "x{}^-1", -l)?;
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        parse_word(s)
    }
}

/// Parses `term ("*" term)*` where a term is `x<n>`, `x<n>^<exp>` or the
/// inverse shorthand `X<n>`. The literal `1` denotes the identity.
pub fn parse_word(text: &str) -> Result<Word> {
    let bytes = text.as_bytes();
    let err = |offset: usize, message: &str| Error::Parse {
        offset,
        message: message.to_string(),
    };
    let skip_ws = |mut i: usize| {
        while i < bytes.len() && bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        i
    };

    let mut i = skip_ws(0);
    if i == bytes.len() {
        return Err(err(i, "empty word"));
    }
    if text[i..].trim() == "1" {
        return Ok(Word::identity());
    }

    let mut letters = Vec::new();
    loop {
        i = skip_ws(i);
        let start = i;
        let inverse = match bytes.get(i) {
            Some(b'x') => false,
            Some(b'X') => true,
            Some(_) => return Err(err(i, "expected generator `x<n>` or `X<n>`")),
            None => return Err(err(i, "unexpected end of input, expected a generator")),
        };
        i += 1;
        let digits_start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        if i == digits_start {
            return Err(err(i, "expected generator index digits"));
        }
        let index: i64 = text[digits_start..i]
            .parse()
            .map_err(|_| err(digits_start, "generator index out of range"))?;
        if index == 0 {
            return Err(err(start, "generator index 0 is not allowed"));
        }
        if index > i32::MAX as i64 {
            return Err(err(digits_start, "generator index out of range"));
        }
        let mut exponent: i64 = 1;
        if bytes.get(i) == Some(&b'^') {
            i += 1;
            let exp_start = i;
            if bytes.get(i) == Some(&b'-') {
                i += 1;
            }
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            exponent = text[exp_start..i]
                .parse()
                .map_err(|_| err(exp_start, "expected integer exponent"))?;
        }
        if inverse {
            exponent = -exponent;
        }
        let letter = if exponent < 0 {
            -(index as Letter)
        } else {
            index as Letter
        };
        for _ in 0..exponent.unsigned_abs() {
            letters.push(letter);
        }

        i = skip_ws(i);
        match bytes.get(i) {
            None => break,
            Some(b'*') => i += 1,
            Some(_) => return Err(err(i, "expected `*` between terms")),
        }
    }
    Ok(Word::new(letters))
}
