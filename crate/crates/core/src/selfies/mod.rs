//! SELFIES strings: alphabets, the derivation decoder, an encoder and a
//! uniform random sampler.
//!
//! Decoding follows the derivation rules of the reference implementation
//! (v1.0.2) with the bond capacities of [`Element::max_valence`]. Every
//! symbol sequence decodes to a valid molecule.
//!
//! [`Element::max_valence`]: crate::chem::Element::max_valence

mod alphabet;
mod decode;
mod encode;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng as _;

pub use alphabet::{
    Alphabet, AlphabetError, Symbol, SymbolKind, DEFAULT_TOKENS, EXTENDED_EXTRA_TOKENS, INDEX_DIGITS,
};
pub use decode::{decode, decode_symbols};
pub use encode::{encode, EncodeError};

pub const DEFAULT_MAX_LEN: usize = 81;

/// Symbol indices into an [`Alphabet`].
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SelfiesString {
    symbols: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SelfiesError {
    TooLong { len: usize, max: usize },
    IndexOutOfRange(u8),
    Alphabet(AlphabetError),
}

impl fmt::Display for SelfiesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SelfiesError::TooLong { len, max } => write!(f, "string has {len} symbols, limit is {max}"),
            SelfiesError::IndexOutOfRange(i) => write!(f, "symbol index {i} outside the alphabet"),
            SelfiesError::Alphabet(e) => e.fmt(f),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SelfiesError {}

impl From<AlphabetError> for SelfiesError {
    fn from(e: AlphabetError) -> Self {
        SelfiesError::Alphabet(e)
    }
}

impl SelfiesString {
    pub fn new(symbols: Vec<u8>, alphabet: &Alphabet, max_len: usize) -> Result<Self, SelfiesError> {
        if symbols.len() > max_len {
            return Err(SelfiesError::TooLong { len: symbols.len(), max: max_len });
        }
        if let Some(&bad) = symbols.iter().find(|&&s| s as usize >= alphabet.len()) {
            return Err(SelfiesError::IndexOutOfRange(bad));
        }
        Ok(SelfiesString { symbols })
    }

    pub fn parse(text: &str, alphabet: &Alphabet, max_len: usize) -> Result<Self, SelfiesError> {
        let symbols = alphabet.tokenize(text)?;
        Self::new(symbols, alphabet, max_len)
    }

    pub fn empty() -> Self {
        SelfiesString { symbols: Vec::new() }
    }

    #[inline]
    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Rewrites the symbols through `f`, then truncates to `max_len`.
    pub fn edited(&self, max_len: usize, f: impl FnOnce(&mut Vec<u8>)) -> SelfiesString {
        let mut symbols = self.symbols.clone();
        f(&mut symbols);
        symbols.truncate(max_len);
        SelfiesString { symbols }
    }

    pub fn prefix(&self, len: usize) -> SelfiesString {
        SelfiesString { symbols: self.symbols[..len.min(self.symbols.len())].to_vec() }
    }

    pub fn to_text(&self, alphabet: &Alphabet) -> String {
        let mut out = String::new();
        for &s in &self.symbols {
            out.push_str(&alphabet.symbol(s).token);
        }
        out
    }
}

/// `length` symbols drawn uniformly and independently from the alphabet.
pub fn random_selfies(
    length: usize,
    alphabet: &Alphabet,
    rng: &mut crate::Rng,
    max_len: usize,
) -> Result<SelfiesString, SelfiesError> {
    if length > max_len {
        return Err(SelfiesError::TooLong { len: length, max: max_len });
    }
    let n = alphabet.len() as u8;
    let symbols = (0..length).map(|_| rng.gen_range(0..n)).collect();
    Ok(SelfiesString { symbols })
}
