use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{binom_mod, FpScalar, PrimeChar};

use super::LieError;

/// One of the two degree-one generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Generator {
    X,
    Y,
}

impl Generator {
    /// Position in the basis `(x, y)` of `L_1`.
    pub fn index(self) -> usize {
        match self {
            Generator::X => 0,
            Generator::Y => 1,
        }
    }

    pub fn other(self) -> Generator {
        match self {
            Generator::X => Generator::Y,
            Generator::Y => Generator::X,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Generator::X => 'x',
            Generator::Y => 'y',
        }
    }
}

/// Left-normed bracket `[g_1 g_2 ... g_n] = [[...[g_1, g_2], ...], g_n]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LeftNormedWord {
    letters: Vec<Generator>,
}

impl LeftNormedWord {
    pub fn new(letters: Vec<Generator>) -> Result<Self, LieError> {
        if letters.is_empty() {
            return Err(LieError::EmptyWord);
        }
        Ok(LeftNormedWord { letters })
    }

    pub fn generator(g: Generator) -> Self {
        LeftNormedWord { letters: vec![g] }
    }

    /// Parses a word such as `"yxxy"`.
    pub fn parse(s: &str) -> Result<Self, LieError> {
        let letters = s
            .chars()
            .map(|c| match c {
                'x' | 'X' => Ok(Generator::X),
                'y' | 'Y' => Ok(Generator::Y),
                other => Err(LieError::BadLetter(other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(letters)
    }

    pub fn degree(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Generator] {
        &self.letters
    }

    /// Appends `g` repeated `n` times.
    pub fn then(mut self, g: Generator, n: usize) -> Self {
        self.letters.extend(std::iter::repeat_n(g, n));
        self
    }

    /// `[y x^i]`-style shorthand: `head` followed by `tail` repeated `n` times.
    pub fn power(head: Generator, tail: Generator, n: usize) -> Self {
        Self::generator(head).then(tail, n)
    }
}

impl fmt::Display for LeftNormedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for g in &self.letters {
            write!(f, "{}", g.letter())?;
        }
        write!(f, "]")
    }
}

/// Homogeneous linear combination of left-normed words.
///
/// Kept normalized: words sorted, duplicates merged, zero terms dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalSum {
    ch: PrimeChar,
    degree: usize,
    terms: Vec<(FpScalar, LeftNormedWord)>,
}

impl FormalSum {
    pub fn new(
        ch: PrimeChar,
        degree: usize,
        terms: impl IntoIterator<Item = (FpScalar, LeftNormedWord)>,
    ) -> Result<Self, LieError> {
        let mut raw: Vec<(FpScalar, LeftNormedWord)> = Vec::new();
        for (c, w) in terms {
            if w.degree() != degree {
                return Err(LieError::Inhomogeneous { expected: degree, found: w.degree() });
            }
            raw.push((c, w));
        }
        raw.sort_by(|a, b| a.1.cmp(&b.1));
        let mut terms: Vec<(FpScalar, LeftNormedWord)> = Vec::with_capacity(raw.len());
        for (c, w) in raw {
            match terms.last_mut() {
                Some((acc, last)) if *last == w => *acc = ch.add(acc, &c),
                _ => terms.push((c, w)),
            }
        }
        terms.retain(|(c, _)| !c.is_zero());
        Ok(FormalSum { ch, degree, terms })
    }

    pub fn characteristic(&self) -> PrimeChar {
        self.ch
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &[(FpScalar, LeftNormedWord)] {
        &self.terms
    }

    pub fn coefficient(&self, w: &LeftNormedWord) -> FpScalar {
        self.terms.iter().find(|(_, t)| t == w).map(|(c, _)| c.clone()).unwrap_or_else(|| self.ch.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Right side of `[v [y z^j]] = sum_i (-1)^i C(j, i) [v z^i y z^(j-i)]`
/// with `v = prefix`, `y = inner_head` and `z = inner_tail`.
pub fn expand_generalized_jacobi(
    prefix: &LeftNormedWord,
    inner_head: Generator,
    inner_tail: Generator,
    j: usize,
    ch: PrimeChar,
) -> FormalSum {
    let terms = (0..=j).map(|i| {
        let c = binom_mod(j as u64, i as u64, ch);
        let c = if i % 2 == 1 { ch.neg(&c) } else { c };
        let w = prefix.clone().then(inner_tail, i).then(inner_head, 1).then(inner_tail, j - i);
        (c, w)
    });
    FormalSum::new(ch, prefix.degree() + j + 1, terms).expect("all words share one degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> LeftNormedWord {
        LeftNormedWord::parse(s).unwrap()
    }

    #[test]
    fn ordinary_jacobi() {
        let ch = PrimeChar::new(5).unwrap();
        let s = expand_generalized_jacobi(&w("x"), Generator::Y, Generator::X, 1, ch);
        assert_eq!(s.terms().len(), 2);
        assert_eq!(s.coefficient(&w("xyx")), ch.one());
        assert_eq!(s.coefficient(&w("xxy")), ch.from_i64(-1));
    }

    #[test]
    fn second_power() {
        let ch = PrimeChar::ZERO;
        let s = expand_generalized_jacobi(&w("yx"), Generator::Y, Generator::X, 2, ch);
        assert_eq!(s.coefficient(&w("yxyxx")), ch.one());
        assert_eq!(s.coefficient(&w("yxxyx")), ch.from_i64(-2));
        assert_eq!(s.coefficient(&w("yxxxy")), ch.one());
    }

    #[test]
    fn middle_terms_vanish_mod_three() {
        let ch = PrimeChar::new(3).unwrap();
        let s = expand_generalized_jacobi(&w("y"), Generator::Y, Generator::X, 3, ch);
        // the leading word [yyxxx] is itself zero in any algebra but is kept formally
        assert_eq!(s.terms().len(), 2);
        assert_eq!(s.coefficient(&w("yxxxy")), ch.from_i64(-1));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert_eq!(LeftNormedWord::parse("xz"), Err(LieError::BadLetter('z')));
        assert_eq!(LeftNormedWord::parse(""), Err(LieError::EmptyWord));
        assert_eq!(w("yxx").to_string(), "[yxx]");
    }
}
