//! Freely reduced words over a finite alphabet and their evaluation in
//! concrete groups.
//!
//! Words are kept reduced at all times; every letter carries exponent +1 or
//! -1 (powers are expanded). The text syntax accepted by [`parse_word`] uses
//! letters `x1`, `x2`, ... with `x`/`y` as aliases for `x1`/`x2`, optional
//! `*` separators and `^<integer>` exponents, e.g. `x*y*x*y^-1*x^-1*y^-1`.

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, IDENTITY};
use std::fmt;

/// One letter: generator index plus exponent sign.
pub type Letter = (usize, i8);

/// A freely reduced word in the free group of the given rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FreeWord {
    rank: usize,
    letters: Vec<Letter>,
}

impl FreeWord {
    /// Builds a word from raw letters, reducing eagerly.
    pub fn new(rank: usize, letters: impl IntoIterator<Item = Letter>) -> Result<Self> {
        let mut word = FreeWord {
            rank,
            letters: Vec::new(),
        };
        for (gen, sign) in letters {
            if gen >= rank {
                return Err(Error::IndexOutOfRange {
                    index: gen,
                    order: rank,
                });
            }
            if sign != 1 && sign != -1 {
                return Err(Error::InvalidArgument(format!(
                    "letter exponent must be +1 or -1, got {sign}"
                )));
            }
            word.push(gen, sign);
        }
        Ok(word)
    }

    pub fn empty(rank: usize) -> Self {
        FreeWord {
            rank,
            letters: Vec::new(),
        }
    }

    /// The single-letter word `x_i`.
    pub fn generator(rank: usize, i: usize) -> Result<Self> {
        Self::new(rank, [(i, 1)])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    fn push(&mut self, gen: usize, sign: i8) {
        match self.letters.last() {
            Some(&(g, s)) if g == gen && s == -sign => {
                self.letters.pop();
            }
            _ => self.letters.push((gen, sign)),
        }
    }

    /// Concatenation, reduced.
    pub fn concat(&self, other: &FreeWord) -> FreeWord {
        let mut out = self.clone();
        out.rank = self.rank.max(other.rank);
        for &(g, s) in &other.letters {
            out.push(g, s);
        }
        out
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|&(g, s)| (g, -s)).collect(),
        }
    }

    /// `w^e` with powers expanded letter by letter.
    pub fn power(&self, e: i64) -> FreeWord {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut out = FreeWord::empty(self.rank);
        for _ in 0..e.unsigned_abs() {
            out = out.concat(&base);
        }
        out.rank = self.rank;
        out
    }

    /// Evaluates the word at the given generator images.
    pub fn evaluate(&self, group: &FiniteGroup, images: &[usize]) -> Result<usize> {
        if images.len() != self.rank {
            return Err(Error::ArityMismatch {
                rank: self.rank,
                given: images.len(),
            });
        }
        for &im in images {
            if im >= group.order() {
                return Err(Error::IndexOutOfRange {
                    index: im,
                    order: group.order(),
                });
            }
        }
        let mut acc = IDENTITY;
        for &(g, s) in &self.letters {
            let im = if s > 0 {
                images[g]
            } else {
                group.inv(images[g])
            };
            acc = group.mul(acc, im);
        }
        Ok(acc)
    }

    /// Exponent-sum vector: the image of the word in the free abelianization.
    pub fn abelianized_vector(&self) -> Vec<i64> {
        let mut v = vec![0i64; self.rank];
        for &(g, s) in &self.letters {
            v[g] += s as i64;
        }
        v
    }
}

/// Re-reduces a word; included for callers holding raw letter sequences.
/// Idempotent by construction.
pub fn reduce(word: &FreeWord) -> FreeWord {
    FreeWord::new(word.rank, word.letters.iter().copied())
        .expect("letters of an existing word are in range")
}

/// The pair `(u, v_n) = (x y x y^-1 x^-1 y^-1, x^n y^-(n+1))` of rank 2,
/// defined for `n >= 2`.
pub fn akbulut_kirby(n: i64) -> Result<(FreeWord, FreeWord)> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "Akbulut-Kirby pair needs n >= 2, got {n}"
        )));
    }
    let x = FreeWord::generator(2, 0)?;
    let y = FreeWord::generator(2, 1)?;
    let u = x
        .concat(&y)
        .concat(&x)
        .concat(&y.inverse())
        .concat(&x.inverse())
        .concat(&y.inverse());
    let v = x.power(n).concat(&y.power(-(n + 1)));
    Ok((u, v))
}

/// Parses the CLI word syntax. `rank_hint` raises the resulting rank when
/// the word mentions fewer generators than the context requires.
pub fn parse_word(input: &str, rank_hint: Option<usize>) -> Result<FreeWord> {
    let text = input.trim();
    let mut letters: Vec<(usize, i64)> = Vec::new();
    let mut max_gen = 0usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            '*' | ' ' => {
                chars.next();
            }
            '1' => {
                // bare "1" is the empty word
                chars.next();
            }
            'x' | 'y' => {
                chars.next();
                let mut digits = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                let gen = if digits.is_empty() {
                    if c == 'x' {
                        0
                    } else {
                        1
                    }
                } else {
                    if c == 'y' {
                        return Err(Error::WordParse(format!(
                            "'y' takes no index in {input:?}"
                        )));
                    }
                    let idx: usize = digits
                        .parse()
                        .map_err(|_| Error::WordParse(format!("bad index in {input:?}")))?;
                    if idx == 0 {
                        return Err(Error::WordParse("generator indices start at x1".into()));
                    }
                    idx - 1
                };
                let mut exp: i64 = 1;
                if chars.peek() == Some(&'^') {
                    chars.next();
                    let mut num = String::new();
                    if chars.peek() == Some(&'-') {
                        num.push('-');
                        chars.next();
                    }
                    while let Some(&d) = chars.peek() {
                        if d.is_ascii_digit() {
                            num.push(d);
                            chars.next();
                        } else {
                            break;
                        }
                    }
                    exp = num
                        .parse()
                        .map_err(|_| Error::WordParse(format!("bad exponent in {input:?}")))?;
                }
                max_gen = max_gen.max(gen + 1);
                letters.push((gen, exp));
            }
            other => {
                return Err(Error::WordParse(format!(
                    "unexpected character {other:?} in {input:?}"
                )));
            }
        }
    }
    let rank = rank_hint.unwrap_or(0).max(max_gen).max(1);
    let mut expanded: Vec<Letter> = Vec::new();
    for (gen, exp) in letters {
        let sign: i8 = if exp < 0 { -1 } else { 1 };
        for _ in 0..exp.unsigned_abs() {
            expanded.push((gen, sign));
        }
    }
    FreeWord::new(rank, expanded)
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|&(g, s)| {
                let name = match (self.rank, g) {
                    (r, 0) if r <= 2 => "x".to_string(),
                    (r, 1) if r <= 2 => "y".to_string(),
                    (_, g) => format!("x{}", g + 1),
                };
                if s > 0 {
                    name
                } else {
                    format!("{name}^-1")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    #[test]
    fn reduction_cancels_adjacent_inverses() {
        let w = FreeWord::new(2, [(0, 1), (0, -1)]).unwrap();
        assert!(w.is_empty());
        let w = FreeWord::new(2, [(0, 1), (1, 1), (1, -1), (0, 1)]).unwrap();
        assert_eq!(w.letters(), &[(0, 1), (0, 1)]);
    }

    #[test]
    fn reduce_is_idempotent() {
        let w = FreeWord::new(2, [(0, 1), (1, -1), (0, 1)]).unwrap();
        assert_eq!(reduce(&w), w);
    }

    #[test]
    fn akbulut_kirby_shape() {
        let (u, v) = akbulut_kirby(2).unwrap();
        assert_eq!(u.len(), 6);
        assert_eq!(u.letters(), &[(0, 1), (1, 1), (0, 1), (1, -1), (0, -1), (1, -1)]);
        assert_eq!(v.letters(), &[(0, 1), (0, 1), (1, -1), (1, -1), (1, -1)]);
        let (_, v3) = akbulut_kirby(3).unwrap();
        assert_eq!(v3.len(), 7);
        assert!(akbulut_kirby(1).is_err());
    }

    #[test]
    fn abelianized_vectors() {
        let (u, v) = akbulut_kirby(4).unwrap();
        assert_eq!(u.abelianized_vector(), vec![1, -1]);
        assert_eq!(v.abelianized_vector(), vec![4, -5]);
        assert_eq!(FreeWord::empty(3).abelianized_vector(), vec![0, 0, 0]);
    }

    #[test]
    fn ak_pair_hits_a_basis_of_the_abelianization() {
        // det [[1,-1],[n,-(n+1)]] = -1 for every n.
        for n in 2..50 {
            let (u, v) = akbulut_kirby(n).unwrap();
            let a = u.abelianized_vector();
            let b = v.abelianized_vector();
            assert_eq!(a[0] * b[1] - a[1] * b[0], -1, "n = {n}");
        }
    }

    #[test]
    fn evaluation_examples() {
        let z6 = FiniteGroup::abelian(&[6], 64).unwrap();
        let w = FreeWord::new(2, [(0, 1), (1, 1)]).unwrap();
        assert_eq!(w.evaluate(&z6, &[2, 3]).unwrap(), 5);
        assert_eq!(FreeWord::empty(2).evaluate(&z6, &[2, 3]).unwrap(), 0);
        let (u, _) = akbulut_kirby(2).unwrap();
        // In an abelian group u evaluates to a * b^-1.
        let a = 4;
        let b = 1;
        assert_eq!(
            u.evaluate(&z6, &[a, b]).unwrap(),
            z6.mul(a, z6.inv(b))
        );
    }

    #[test]
    fn evaluation_arity_checked() {
        let z6 = FiniteGroup::abelian(&[6], 64).unwrap();
        let w = FreeWord::generator(2, 0).unwrap();
        assert!(matches!(
            w.evaluate(&z6, &[1]),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn parse_word_syntax() {
        let w = parse_word("x*y*x*y^-1*x^-1*y^-1", None).unwrap();
        let (u, _) = akbulut_kirby(2).unwrap();
        assert_eq!(w, u);
        assert_eq!(parse_word("x^2*y^-3", None).unwrap().len(), 5);
        assert_eq!(parse_word("x1*x3", None).unwrap().rank(), 3);
        assert_eq!(parse_word("1", Some(2)).unwrap(), FreeWord::empty(2));
        assert!(parse_word("z", None).is_err());
        assert!(parse_word("y2", None).is_err());
    }

    #[test]
    fn display_round_trips_through_parser() {
        let w = parse_word("x*y^-1*x", None).unwrap();
        assert_eq!(parse_word(&w.to_string(), None).unwrap(), w);
    }
}
