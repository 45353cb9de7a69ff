use std::fmt;
use std::str::FromStr;

use super::{parse_word, Braid, Word};
use crate::{Error, Result};

/// Default number of Tietze moves [`normalize_presentation`] may spend.
pub const DEFAULT_TIETZE_BUDGET: usize = 64;

/// A deficiency-one presentation `⟨x_1, …, x_k | r_1, …, r_{k-1}⟩` together
/// with its abelianization `α(x_i) = t^{n_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    generator_count: usize,
    relators: Vec<Word>,
    exponents: Vec<i64>,
}

impl Presentation {
    /// Validates the relators and computes the abelianization exponents.
    pub fn new(generator_count: usize, relators: Vec<Word>) -> Result<Self> {
        if generator_count == 0 {
            return Err(Error::Presentation("at least one generator is required".into()));
        }
        if relators.len() + 1 != generator_count {
            return Err(Error::Presentation(format!(
                "deficiency must be 1: {} generators but {} relators",
                generator_count,
                relators.len()
            )));
        }
        for (i, r) in relators.iter().enumerate() {
            if r.max_generator() > generator_count {
                return Err(Error::Presentation(format!(
                    "relator {} uses x{} but only {} generators are declared",
                    i + 1,
                    r.max_generator(),
                    generator_count
                )));
            }
        }
        let exponents = abelianization(generator_count, &relators)?;
        Ok(Presentation {
            generator_count,
            relators,
            exponents,
        })
    }

    /// Free group of rank one: the unknot group.
    pub fn unknot() -> Self {
        Presentation {
            generator_count: 1,
            relators: Vec::new(),
            exponents: vec![1],
        }
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// `n_i` with `α(x_i) = t^{n_i}`.
    pub fn exponents(&self) -> &[i64] {
        &self.exponents
    }

    /// Every generator abelianizes to `t`.
    pub fn is_meridional(&self) -> bool {
        self.exponents.iter().all(|&n| n == 1)
    }

    pub fn require_meridional(&self) -> Result<()> {
        if self.is_meridional() {
            Ok(())
        } else {
            Err(Error::NotMeridional(self.exponents.clone()))
        }
    }

    /// Exponent of `t` in `α(w)`.
    pub fn alpha(&self, w: &Word) -> i64 {
        w.letters()
            .iter()
            .map(|l| l.signum() as i64 * self.exponents[l.unsigned_abs() as usize - 1])
            .sum()
    }

    /// Serializes to the `.pres` text format.
    pub fn to_text(&self) -> String {
        let gens: Vec<String> = (1..=self.generator_count).map(|i| format!("x{i}")).collect();
        let mut out = format!("gens: {}\n", gens.join(" "));
        for r in &self.relators {
            out.push_str(&format!("rel: {r}\n"));
        }
        out
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = (1..=self.generator_count).map(|i| format!("x{i}")).collect();
        let rels: Vec<String> = self.relators.iter().map(|r| r.to_string()).collect();
        write!(f, "<{} | {}>", gens.join(", "), rels.join(", "))
    }
}

impl FromStr for Presentation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_presentation(s)
    }
}

/// Abelianization exponents of a deficiency-one presentation.
///
/// The kernel of the exponent-sum matrix is spanned by its signed maximal
/// minors; the abelianization is `Z` exactly when those minors are coprime.
/// The sign is fixed so that the first nonzero exponent is positive.
pub fn abelianization(generator_count: usize, relators: &[Word]) -> Result<Vec<i64>> {
    let k = generator_count;
    if k == 0 || relators.len() + 1 != k {
        return Err(Error::Presentation("abelianization needs deficiency one".into()));
    }
    if k == 1 {
        return Ok(vec![1]);
    }
    let rows: Vec<Vec<i128>> = relators
        .iter()
        .map(|r| (1..=k).map(|j| r.exponent_sum(j) as i128).collect())
        .collect();
    let mut n = Vec::with_capacity(k);
    for j in 0..k {
        let minor: Vec<Vec<i128>> = rows
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, v)| *v)
                    .collect()
            })
            .collect();
        let d = integer_det(minor)?;
        n.push(if j % 2 == 0 { d } else { -d });
    }
    let g = n.iter().fold(0i128, |g, v| gcd(g, v.abs()));
    if g == 0 {
        return Err(Error::Presentation(
            "inconsistent abelianization: the relators leave first homology of rank > 1".into(),
        ));
    }
    if g != 1 {
        return Err(Error::Presentation(format!(
            "abelianization has torsion of order {g}; α is not surjective onto Z"
        )));
    }
    let sign = n.iter().find(|v| **v != 0).map(|v| v.signum()).unwrap_or(1);
    n.into_iter()
        .map(|v| i64::try_from(v * sign).map_err(|_| Error::Overflow))
        .collect()
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Fraction-free Gaussian elimination over the integers.
fn integer_det(mut m: Vec<Vec<i128>>) -> Result<i128> {
    let n = m.len();
    if n == 0 {
        return Ok(1);
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[k][k]
                    .checked_mul(m[i][j])
                    .and_then(|a| m[i][k].checked_mul(m[k][j]).and_then(|b| a.checked_sub(b)))
                    .ok_or(Error::Overflow)?;
                m[i][j] = v / prev;
            }
        }
        prev = m[k][k];
    }
    Ok(sign * m[n - 1][n - 1])
}

/// Parses the `.pres` text format.
///
/// ```text
/// # trefoil
/// gens: x1 x2
/// rel: x1*x2*x1*X2*X1*X2
/// ```
///
/// A single `braid: n; i1 i2 ...` line may replace the `gens`/`rel` lines.
/// `/` is accepted as a line separator so presentations fit on one line.
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let base = text.as_ptr() as usize;
    let mut gens: Option<usize> = None;
    let mut relators = Vec::new();
    let mut braid: Option<Braid> = None;

    for raw_line in text.lines() {
        let line = match raw_line.find('#') {
            Some(i) => &raw_line[..i],
            None => raw_line,
        };
        for segment in line.split('/') {
            let offset = segment.as_ptr() as usize - base;
            let trimmed = segment.trim_start();
            let offset = offset + (segment.len() - trimmed.len());
            let trimmed = trimmed.trim_end();
            if trimmed.is_empty() {
                continue;
            }
            let (key, rest) = match trimmed.split_once(':') {
                Some(kv) => kv,
                None => {
                    return Err(Error::Parse {
                        offset,
                        message: "expected `gens:`, `rel:` or `braid:`".into(),
                    })
                }
            };
            let rest_offset = offset + key.len() + 1;
            match key.trim() {
                "gens" => {
                    if gens.is_some() {
                        return Err(Error::Parse {
                            offset,
                            message: "duplicate `gens:` line".into(),
                        });
                    }
                    gens = Some(parse_generators(rest, rest_offset)?);
                }
                "rel" => {
                    let w = parse_word(rest).map_err(|e| match e {
                        Error::Parse { offset: o, message } => Error::Parse {
                            offset: o + rest_offset,
                            message,
                        },
                        other => other,
                    })?;
                    relators.push(w);
                }
                "braid" => {
                    if braid.is_some() {
                        return Err(Error::Parse {
                            offset,
                            message: "duplicate `braid:` line".into(),
                        });
                    }
                    braid = Some(rest.parse::<Braid>().map_err(|e| match e {
                        Error::Parse { offset: o, message } => Error::Parse {
                            offset: o + rest_offset,
                            message,
                        },
                        other => other,
                    })?);
                }
                other => {
                    return Err(Error::Parse {
                        offset,
                        message: format!("unknown key `{other}`"),
                    })
                }
            }
        }
    }

    match (braid, gens) {
        (Some(_), Some(_)) => Err(Error::Presentation(
            "a `braid:` line cannot be combined with `gens:`".into(),
        )),
        (Some(b), None) => {
            if !relators.is_empty() {
                return Err(Error::Presentation(
                    "a `braid:` line cannot be combined with `rel:`".into(),
                ));
            }
            b.to_presentation()
        }
        (None, Some(k)) => Presentation::new(k, relators),
        (None, None) => Err(Error::Presentation("missing `gens:` line".into())),
    }
}

fn parse_generators(rest: &str, rest_offset: usize) -> Result<usize> {
    let base = rest.as_ptr() as usize;
    let mut count = 0;
    for name in rest
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
    {
        let offset = rest_offset + (name.as_ptr() as usize - base);
        let idx = name
            .strip_prefix('x')
            .and_then(|d| d.parse::<usize>().ok())
            .ok_or_else(|| Error::Parse {
                offset,
                message: format!("generator names must look like x<n>, got `{name}`"),
            })?;
        count += 1;
        if idx != count {
            return Err(Error::Parse {
                offset,
                message: format!("generators must be listed as x1 x2 ... in order; expected x{count}"),
            });
        }
    }
    if count == 0 {
        return Err(Error::Parse {
            offset: rest_offset,
            message: "no generators listed".into(),
        });
    }
    Ok(count)
}

/// Tietze-equivalent presentation in which every generator abelianizes to `t`.
///
/// Runs a Euclidean algorithm on the exponents: substitutions
/// `x_i = x_i' x_g^q` replace `n_i` by `n_i - q n_g`, and `x_i = x_i'^{-1}`
/// flips a sign. Each substitution counts as one move against `budget`.
pub fn normalize_presentation(p: &Presentation, budget: usize) -> Result<Presentation> {
    if p.is_meridional() {
        return Ok(p.clone());
    }
    let k = p.generator_count;
    let mut relators = p.relators.clone();
    let mut n = p.exponents.clone();
    let mut moves = 0usize;

    let apply = |relators: &mut Vec<Word>, i: usize, image: Word, moves: &mut usize| -> Result<()> {
        if *moves >= budget {
            return Err(Error::TietzeBudget(budget));
        }
        *moves += 1;
        for r in relators.iter_mut() {
            *r = r.substitute(|g| if g == i { image.clone() } else { Word::generator(g) });
        }
        Ok(())
    };

    for i in 1..=k {
        if n[i - 1] < 0 {
            apply(&mut relators, i, Word::generator(i).inverse(), &mut moves)?;
            n[i - 1] = -n[i - 1];
        }
    }

    loop {
        let g = match (1..=k).filter(|&i| n[i - 1] > 0).min_by_key(|&i| (n[i - 1], i)) {
            Some(g) => g,
            None => return Err(Error::Presentation("all abelianization exponents vanish".into())),
        };
        let ng = n[g - 1];
        if ng == 1 {
            for i in 1..=k {
                if i != g && n[i - 1] != 1 {
                    let q = n[i - 1] - 1;
                    let image = &Word::generator(i) * &Word::generator(g).pow(q);
                    apply(&mut relators, i, image, &mut moves)?;
                    n[i - 1] = 1;
                }
            }
            break;
        }
        let i = (1..=k)
            .find(|&i| i != g && n[i - 1].rem_euclid(ng) != 0)
            .ok_or_else(|| Error::Presentation("exponents share a common factor".into()))?;
        let q = n[i - 1].div_euclid(ng);
        let image = &Word::generator(i) * &Word::generator(g).pow(q);
        apply(&mut relators, i, image, &mut moves)?;
        n[i - 1] -= q * ng;
    }

    let out = Presentation::new(k, relators)?;
    if !out.is_meridional() {
        return Err(Error::Presentation(format!(
            "normalization produced exponents {:?}",
            out.exponents
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trefoil_abelianizes_to_ones() {
        let p = parse_presentation("gens: x1 x2\nrel: x1*x2*x1*X2*X1*X2").unwrap();
        assert_eq!(p.exponents(), &[1, 1]);
        assert!(p.is_meridional());
        let inline = parse_presentation("gens: x1 x2 / rel: x1*x2*x1*X2*X1*X2").unwrap();
        assert_eq!(inline, p);
    }

    #[test]
    fn unknot_has_no_relators() {
        let p = parse_presentation("# free group\ngens: x1\n").unwrap();
        assert_eq!(p, Presentation::unknot());
    }

    #[test]
    fn rejects_wrong_deficiency() {
        let err = parse_presentation("gens: x1 x2\nrel: x1*X2\nrel: x1*x2*X1*X2").unwrap_err();
        assert!(matches!(err, Error::Presentation(_)), "{err:?}");
    }

    #[test]
    fn rejects_bad_abelianization() {
        // <x1, x2 | x1^2> has H1 = Z/2 + Z
        let err = parse_presentation("gens: x1 x2\nrel: x1^2").unwrap_err();
        assert!(err.to_string().contains("torsion"), "{err}");
        // <x1, x2, x3 | x1 X2, x1 X2> leaves rank 2
        let err = parse_presentation("gens: x1 x2 x3\nrel: x1*X2\nrel: x1*X2").unwrap_err();
        assert!(err.to_string().contains("inconsistent"), "{err}");
    }

    #[test]
    fn parse_errors_carry_offsets() {
        let text = "gens: x1 x2\nrel: x1*x0";
        match parse_presentation(text) {
            Err(Error::Parse { offset, .. }) => assert_eq!(&text[offset..offset + 2], "x0"),
            other => panic!("{other:?}"),
        }
        assert!(parse_presentation("gens: x2 x1\nrel: x1").is_err());
        assert!(parse_presentation("rel: x1").is_err());
        assert!(parse_presentation("gens: x1 x2\nrel: x1*x3").is_err());
        assert!(parse_presentation("foo: bar").is_err());
    }

    #[test]
    fn torus_presentation_abelianizes() {
        // a^3 = b^2: α(a) = t^2, α(b) = t^3
        let p = parse_presentation("gens: x1 x2\nrel: x1^3*x2^-2").unwrap();
        assert_eq!(p.exponents(), &[2, 3]);
        assert!(!p.is_meridional());
        assert!(matches!(p.require_meridional(), Err(Error::NotMeridional(_))));
    }

    #[test]
    fn normalization_reaches_meridional_form() {
        let p = parse_presentation("gens: x1 x2\nrel: x1^3*x2^-2").unwrap();
        let q = normalize_presentation(&p, DEFAULT_TIETZE_BUDGET).unwrap();
        assert_eq!(q.generator_count(), 2);
        assert_eq!(q.exponents(), &[1, 1]);
        // alpha of each substituted generator is t: check on the relator
        assert_eq!(q.alpha(&q.relators()[0]), 0);
    }

    #[test]
    fn normalization_is_identity_on_meridional_input() {
        let p = parse_presentation("gens: x1 x2\nrel: x1*x2*x1*X2*X1*X2").unwrap();
        assert_eq!(normalize_presentation(&p, 0).unwrap(), p);
        let u = Presentation::unknot();
        assert_eq!(normalize_presentation(&u, 0).unwrap(), u);
    }

    #[test]
    fn normalization_respects_budget() {
        let p = parse_presentation("gens: x1 x2\nrel: x1^3*x2^-2").unwrap();
        assert_eq!(normalize_presentation(&p, 1), Err(Error::TietzeBudget(1)));
    }

    #[test]
    fn normalization_handles_negative_and_zero_exponents() {
        // x3 has exponent 0 and x2 abelianizes to t^-1
        let p = parse_presentation("gens: x1 x2 x3\nrel: x1*x2\nrel: x3*x1*X3*X1*x3").unwrap();
        assert_eq!(p.exponents(), &[1, -1, 0]);
        let q = normalize_presentation(&p, DEFAULT_TIETZE_BUDGET).unwrap();
        assert!(q.is_meridional());
    }

    #[test]
    fn text_round_trip() {
        let p = parse_presentation("gens: x1 x2\nrel: x1*x2*x1*X2*X1*X2").unwrap();
        assert_eq!(parse_presentation(&p.to_text()).unwrap(), p);
    }
}
