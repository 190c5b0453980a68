use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite prefix `s_0, ..., s_M` of a real sequence, held exactly.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SequenceDoc", into = "SequenceDoc")]
pub struct MomentSequence {
    terms: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SequenceDoc {
    #[serde(with = "crate::scalar::serde_rational::vec")]
    sequence: Vec<Rational>,
}

impl TryFrom<SequenceDoc> for MomentSequence {
    type Error = Error;
    fn try_from(doc: SequenceDoc) -> Result<Self> {
        MomentSequence::new(doc.sequence)
    }
}

impl From<MomentSequence> for SequenceDoc {
    fn from(s: MomentSequence) -> Self {
        SequenceDoc { sequence: s.terms }
    }
}

impl MomentSequence {
    pub fn new(terms: Vec<Rational>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(MomentSequence { terms })
    }

    /// Convenience constructor from integers.
    pub fn from_integers<I: IntoIterator<Item = i64>>(terms: I) -> Result<Self> {
        Self::new(terms.into_iter().map(Rational::from).collect())
    }

    pub fn terms(&self) -> &[Rational] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Rational> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Always false: a sequence holds at least one term.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest available index `M`.
    pub fn max_index(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn get(&self, n: usize) -> Option<&Rational> {
        self.terms.get(n)
    }

    /// `s_n`, or `IndexOutOfRange` when the prefix is too short.
    pub fn term(&self, n: usize) -> Result<&Rational> {
        self.terms.get(n).ok_or(Error::IndexOutOfRange {
            needed: n,
            len: self.terms.len(),
        })
    }

    pub fn require(&self, needed: usize) -> Result<()> {
        self.term(needed).map(|_| ())
    }

    pub fn is_nonzero(&self) -> bool {
        self.terms.iter().any(|t| *t != 0)
    }

    /// The first `len` terms.
    pub fn prefix(&self, len: usize) -> Result<MomentSequence> {
        if len == 0 {
            return Err(Error::EmptySequence);
        }
        self.require(len - 1)?;
        Ok(MomentSequence {
            terms: self.terms[..len].to_vec(),
        })
    }

    /// `(s_{i+j})` for `i, j = 0..=n`.
    pub fn hankel_matrix(&self, n: usize) -> Result<Vec<Vec<Rational>>> {
        self.require(2 * n)?;
        Ok((0..=n).map(|i| self.terms[i..=i + n].to_vec()).collect())
    }

    /// `β(s)_n = Σ_k C(n, k) s_k`.
    pub fn binomial_transform(&self) -> MomentSequence {
        let terms = (0..self.terms.len())
            .map(|n| {
                let mut acc = Rational::new();
                let mut binom = Integer::from(1);
                for (k, s) in self.terms[..=n].iter().enumerate() {
                    acc += Rational::from(s * &binom);
                    binom *= n - k;
                    binom /= k + 1;
                }
                acc
            })
            .collect();
        MomentSequence { terms }
    }
}
