use std::str::FromStr;

use super::{Presentation, Word};
use crate::{Error, Result};

/// A braid word on `strands` strands; entry `i` is the Artin generator
/// `σ_|i|` with the sign of `i` as exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Braid {
    pub strands: usize,
    pub word: Vec<i32>,
}

impl Braid {
    pub fn new(strands: usize, word: Vec<i32>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::Braid("a braid needs at least one strand".into()));
        }
        for &g in &word {
            if g == 0 || g.unsigned_abs() as usize >= strands {
                return Err(Error::Braid(format!("generator {g} is invalid on {strands} strands")));
            }
        }
        Ok(Braid { strands, word })
    }

    pub fn to_presentation(&self) -> Result<Presentation> {
        braid_to_presentation(&self.word, self.strands)
    }
}

impl FromStr for Braid {
    type Err = Error;

    /// Parses `n; i1 i2 ...` (the form used after `braid:` and by `--braid`).
    fn from_str(s: &str) -> Result<Self> {
        let base = s.as_ptr() as usize;
        let (n, rest) = s.split_once(';').ok_or_else(|| Error::Parse {
            offset: 0,
            message: "expected `<strands>; <generators>`".into(),
        })?;
        let strands = n.trim().parse::<usize>().map_err(|_| Error::Parse {
            offset: 0,
            message: format!("invalid strand count `{}`", n.trim()),
        })?;
        let mut word = Vec::new();
        for tok in rest
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
        {
            let g = tok.parse::<i32>().map_err(|_| Error::Parse {
                offset: tok.as_ptr() as usize - base,
                message: format!("invalid braid generator `{tok}`"),
            })?;
            word.push(g);
        }
        Braid::new(strands, word)
    }
}

/// Permutation of the strands induced by the braid; `perm[j]` is where
/// strand `j` ends up (0-based).
pub fn closure_permutation(braid: &[i32], strands: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..strands).collect();
    for &g in braid {
        let i = g.unsigned_abs() as usize - 1;
        for p in perm.iter_mut() {
            if *p == i {
                *p = i + 1;
            } else if *p == i + 1 {
                *p = i;
            }
        }
    }
    perm
}

fn cycle_count(perm: &[usize]) -> usize {
    let mut seen = vec![false; perm.len()];
    let mut cycles = 0;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            j = perm[j];
        }
    }
    cycles
}

/// Wirtinger presentation of the braid closure.
///
/// The braid acts on the free group by `σ_i: x_i ↦ x_i x_{i+1} x_i^{-1},
/// x_{i+1} ↦ x_i` (letters applied left to right), and the closure group is
/// `⟨x_1..x_n | x_j = β(x_j)⟩`. The last relator is redundant and dropped.
pub fn braid_to_presentation(braid: &[i32], strands: usize) -> Result<Presentation> {
    let b = Braid::new(strands, braid.to_vec())?;
    let components = cycle_count(&closure_permutation(&b.word, strands));
    if components != 1 {
        return Err(Error::NotAKnot(components));
    }

    let mut images: Vec<Word> = (1..=strands).map(Word::generator).collect();
    for &g in &b.word {
        let i = g.unsigned_abs() as usize;
        let sigma = |j: usize| -> Word {
            let (xi, xi1) = (Word::generator(i), Word::generator(i + 1));
            if g > 0 {
                if j == i {
                    &(&xi * &xi1) * &xi.inverse()
                } else if j == i + 1 {
                    xi
                } else {
                    Word::generator(j)
                }
            } else if j == i {
                xi1
            } else if j == i + 1 {
                &(&xi1.inverse() * &xi) * &xi1
            } else {
                Word::generator(j)
            }
        };
        for w in images.iter_mut() {
            *w = w.substitute(sigma);
        }
    }

    let relators: Vec<Word> = (1..strands)
        .map(|j| &Word::generator(j) * &images[j - 1].inverse())
        .collect();
    let p = Presentation::new(strands, relators)?;
    debug_assert!(p.is_meridional());
    Ok(p)
}
