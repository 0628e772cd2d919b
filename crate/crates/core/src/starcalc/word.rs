//! Words in the generators and their text form.
//!
//! Tokens are whitespace separated: `U<j>`, `U<j>^<int>`, `U<j>*`, `S`, `S*`, the operators
//! `+` and `-`, and a leading coefficient `<int>` or `<int>/<int>` with an optional trailing `i`.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Algebra, Coeff};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    /// `U_j^e`, `j` is 1-based and `e != 0`.
    U {
        j: usize,
        e: i64,
    },
    S,
    SStar,
}

impl Letter {
    pub fn adjoint(self) -> Letter {
        match self {
            Letter::U { j, e } => Letter::U { j, e: -e },
            Letter::S => Letter::SStar,
            Letter::SStar => Letter::S,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Letter::U { j, e: 1 } => write!(f, "U{j}"),
            Letter::U { j, e } => write!(f, "U{j}^{e}"),
            Letter::S => f.write_str("S"),
            Letter::SStar => f.write_str("S*"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct GeneratorWord(pub Vec<Letter>);

impl GeneratorWord {
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Self {
        GeneratorWord(letters.into_iter().collect())
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

    /// Reversed word with every letter replaced by its adjoint.
    pub fn adjoint(&self) -> GeneratorWord {
        GeneratorWord(self.0.iter().rev().map(|l| l.adjoint()).collect())
    }

    pub fn concat(&self, other: &GeneratorWord) -> GeneratorWord {
        GeneratorWord(self.0.iter().chain(&other.0).copied().collect())
    }

    /// Letters `U_j^{v_j}` for the nonzero entries of `v`.
    pub fn u_power(v: &[i64]) -> GeneratorWord {
        GeneratorWord(
            v.iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(j, &e)| Letter::U { j: j + 1, e })
                .collect(),
        )
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// A formal linear combination of words.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct WordSum(pub Vec<(Coeff, GeneratorWord)>);

impl WordSum {
    pub fn word(w: GeneratorWord) -> Self {
        WordSum(vec![(Coeff::one(), w)])
    }

    pub fn terms(&self) -> &[(Coeff, GeneratorWord)] {
        &self.0
    }

    pub fn adjoint(&self) -> WordSum {
        WordSum(
            self.0
                .iter()
                .map(|(c, w)| (c.conj(), w.adjoint()))
                .collect(),
        )
    }

    /// Distributes the concatenation product.
    pub fn concat(&self, other: &WordSum) -> WordSum {
        WordSum(
            self.0
                .iter()
                .flat_map(|(c, w)| other.0.iter().map(move |(c2, w2)| (c * c2, w.concat(w2))))
                .collect(),
        )
    }
}

impl std::ops::Add for WordSum {
    type Output = WordSum;

    fn add(mut self, other: WordSum) -> WordSum {
        self.0.extend(other.0);
        self
    }
}

impl From<GeneratorWord> for WordSum {
    fn from(w: GeneratorWord) -> Self {
        WordSum::word(w)
    }
}

pub(crate) fn format_rational(r: &BigRational) -> String {
    r.to_string()
}

/// Writes `c * body` as a signed sum of a real and an imaginary part.
/// `first` controls whether a leading `+` is suppressed.
pub(crate) fn write_scaled(out: &mut String, c: &Coeff, body: &str, first: &mut bool) {
    for (part, imag) in [(&c.re, false), (&c.im, true)] {
        if part.is_zero() {
            continue;
        }
        let neg = part.is_negative();
        if *first {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        *first = false;
        let mag = part.abs();
        let unit = mag.is_one() && !imag && !body.is_empty();
        if !unit {
            out.push_str(&format_rational(&mag));
            if imag {
                out.push('i');
            }
            if !body.is_empty() {
                out.push(' ');
            }
        }
        out.push_str(body);
    }
}

impl fmt::Display for WordSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let mut first = true;
        for (c, w) in &self.0 {
            let body = if w.is_empty() {
                String::new()
            } else {
                w.to_string()
            };
            write_scaled(&mut out, c, &body, &mut first);
        }
        if first {
            out.push('0');
        }
        f.write_str(&out)
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

fn parse_coefficient(tok: &str, pos: usize) -> Result<Option<Coeff>> {
    let first = tok.chars().next().unwrap_or(' ');
    if !(first.is_ascii_digit() || (first == '-' && tok.len() > 1)) {
        return Ok(None);
    }
    let (body, imag) = match tok.strip_suffix('i') {
        Some(b) => (b, true),
        None => (tok, false),
    };
    let value = match body.split_once('/') {
        Some((num, den)) => {
            let num = parse_int(num)
                .ok_or_else(|| Error::parse(pos, format!("malformed coefficient '{tok}'")))?;
            let den = parse_int(den)
                .filter(|d| d.is_positive())
                .ok_or_else(|| Error::parse(pos, format!("malformed coefficient '{tok}'")))?;
            BigRational::new(num, den)
        }
        None => BigRational::from_integer(
            parse_int(body)
                .ok_or_else(|| Error::parse(pos, format!("malformed coefficient '{tok}'")))?,
        ),
    };
    Ok(Some(if imag {
        Complex::new(BigRational::zero(), value)
    } else {
        Complex::new(value, BigRational::zero())
    }))
}

fn parse_letter(tok: &str, pos: usize, d: usize) -> Result<Letter> {
    match tok {
        "S" => return Ok(Letter::S),
        "S*" => return Ok(Letter::SStar),
        _ => {}
    }
    let rest = tok
        .strip_prefix('U')
        .ok_or_else(|| Error::parse(pos, format!("unknown token '{tok}'")))?;
    let digits_end = rest
        .find(|c: char| !c.is_ascii_digit())
        .unwrap_or(rest.len());
    let (idx, tail) = rest.split_at(digits_end);
    let j: usize = idx
        .parse()
        .map_err(|_| Error::parse(pos, format!("unknown token '{tok}'")))?;
    if j < 1 || j > d {
        return Err(Error::parse(
            pos,
            format!("index out of range: '{tok}' with d = {d}"),
        ));
    }
    let e = match tail {
        "" => 1,
        "*" => -1,
        _ => {
            let exp = tail
                .strip_prefix('^')
                .ok_or_else(|| Error::parse(pos, format!("unknown token '{tok}'")))?;
            let e: i64 = parse_int(exp)
                .and_then(|b| i64::try_from(b).ok())
                .ok_or_else(|| {
                    Error::parse(
                        pos + 1 + idx.len() + 1,
                        format!("malformed exponent '{exp}'"),
                    )
                })?;
            if e == 0 {
                return Err(Error::parse(
                    pos + 1 + idx.len() + 1,
                    "exponent must be nonzero",
                ));
            }
            e
        }
    };
    Ok(Letter::U { j, e })
}

/// Parses a sum of words for an algebra with `d` unitaries.
pub fn parse_word_sum(text: &str, d: usize) -> Result<WordSum> {
    let mut tokens: Vec<(usize, &str)> = Vec::new();
    let mut start = None;
    for (i, ch) in text
        .char_indices()
        .chain(std::iter::once((text.len(), ' ')))
    {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                let (pos, tok) = (text[..s].chars().count(), &text[s..i]);
                // "-S" splits into an operator and a letter; "-2" stays a coefficient
                match tok.strip_prefix('-') {
                    Some(rest)
                        if !rest.is_empty() && !rest.starts_with(|c: char| c.is_ascii_digit()) =>
                    {
                        tokens.push((pos, "-"));
                        tokens.push((pos + 1, rest));
                    }
                    _ => tokens.push((pos, tok)),
                }
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if tokens.is_empty() {
        return Err(Error::parse(0, "empty input"));
    }

    let mut sum = Vec::new();
    let mut sign = Coeff::one();
    let mut coeff: Option<Coeff> = None;
    let mut letters: Vec<Letter> = Vec::new();
    let mut term_open = false;
    let mut last_pos = 0;
    for &(pos, tok) in &tokens {
        last_pos = pos;
        if tok == "+" || tok == "-" {
            if term_open {
                let c = coeff.take().unwrap_or_else(Coeff::one);
                sum.push((
                    sign.clone() * c,
                    GeneratorWord(std::mem::take(&mut letters)),
                ));
                term_open = false;
            } else if !sum.is_empty() || sign != Coeff::one() {
                return Err(Error::parse(pos, format!("unexpected '{tok}'")));
            }
            sign = if tok == "-" {
                -Coeff::one()
            } else {
                Coeff::one()
            };
            continue;
        }
        if let Some(c) = parse_coefficient(tok, pos)? {
            if term_open {
                return Err(Error::parse(
                    pos,
                    format!("coefficient '{tok}' must lead its term"),
                ));
            }
            coeff = Some(c);
            term_open = true;
            continue;
        }
        letters.push(parse_letter(tok, pos, d)?);
        term_open = true;
    }
    if !term_open {
        return Err(Error::parse(
            last_pos,
            "expected a term after the last operator",
        ));
    }
    let c = coeff.take().unwrap_or_else(Coeff::one);
    sum.push((sign * c, GeneratorWord(letters)));
    Ok(WordSum(sum))
}

/// `count` seeded random words of length `0..=max_len` over `U_j^{+-1}`, `U_j^{+-2}`, `S`, `S*`.
pub fn random_words(d: usize, count: usize, max_len: usize, seed: u64) -> Vec<GeneratorWord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let len = rng.random_range(0..=max_len);
            GeneratorWord(
                (0..len)
                    .map(|_| match rng.random_range(0..d + 2) {
                        0 => Letter::S,
                        1 => Letter::SStar,
                        j => {
                            let e = rng.random_range(1..=2);
                            Letter::U {
                                j: j - 1,
                                e: if rng.random_bool(0.5) { e } else { -e },
                            }
                        }
                    })
                    .collect(),
            )
        })
        .collect()
}

impl Algebra {
    pub fn parse_word(&self, text: &str) -> Result<WordSum> {
        parse_word_sum(text, self.d())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::starcalc::coeff;

    #[test]
    fn single_word() {
        let w = parse_word_sum("S* U1^2 S", 1).unwrap();
        assert_eq!(
            w,
            WordSum::word(GeneratorWord(vec![
                Letter::SStar,
                Letter::U { j: 1, e: 2 },
                Letter::S
            ]))
        );
    }

    #[test]
    fn two_word_sum() {
        let w = parse_word_sum("S S* + U1 S S* U1^-1", 1).unwrap();
        assert_eq!(w.terms().len(), 2);
        assert_eq!(w.terms()[1].1.letters()[3], Letter::U { j: 1, e: -1 });
    }

    #[test]
    fn index_out_of_range() {
        let err = parse_word_sum("U3 S", 2).unwrap_err();
        assert_eq!(err, Error::parse(0, "index out of range: 'U3' with d = 2"));
        assert!(err.to_string().contains("index out of range"));
    }

    #[test]
    fn positions_are_reported() {
        match parse_word_sum("S S* X", 1).unwrap_err() {
            Error::Parse { pos, .. } => assert_eq!(pos, 5),
            e => panic!("{e:?}"),
        }
        match parse_word_sum("S U1^x", 1).unwrap_err() {
            Error::Parse { pos, msg } => {
                assert_eq!(pos, 5);
                assert!(msg.contains("exponent"));
            }
            e => panic!("{e:?}"),
        }
        assert!(parse_word_sum("U1^0", 1).is_err());
        assert!(parse_word_sum("S +", 1).is_err());
        assert!(parse_word_sum("", 1).is_err());
        assert!(parse_word_sum("S 2", 1).is_err());
    }

    #[test]
    fn coefficients() {
        let w = parse_word_sum("1/2 + 3i", 1).unwrap();
        assert_eq!(
            w.terms()[0].0,
            Complex::new(BigRational::new(1.into(), 2.into()), BigRational::zero())
        );
        assert_eq!(w.terms()[1].0, coeff(0, 3));
        let w = parse_word_sum("- 2 S - U1*", 1).unwrap();
        assert_eq!(w.terms()[0].0, coeff(-2, 0));
        assert_eq!(
            w.terms()[1],
            (coeff(-1, 0), GeneratorWord(vec![Letter::U { j: 1, e: -1 }]))
        );
        assert!(parse_word_sum("1/0 S", 1).is_err());
    }

    #[test]
    fn printer_round_trips() {
        for text in [
            "S* U1^2 S",
            "S S* + U1 S S* U1^-1",
            "1/2 + 3i",
            "-S + 2i U1 S - 1/3 S*",
            "U1* U2^4 S",
        ] {
            let w = parse_word_sum(text, 2).unwrap();
            assert_eq!(parse_word_sum(&w.to_string(), 2).unwrap(), w, "{text}");
        }
        assert_eq!(parse_word_sum("U1* S", 1).unwrap().to_string(), "U1^-1 S");
    }

    #[test]
    fn word_adjoint() {
        let w = parse_word_sum("2i U1^2 S", 1).unwrap().adjoint();
        assert_eq!(w.to_string(), "-2i S* U1^-2");
    }
}
