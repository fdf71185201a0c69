use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::chem::Element;

/// Meaning of one SELFIES symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolKind {
    /// Append an atom bonded to the current atom with the requested order.
    Atom { element: Element, bond: u8 },
    /// Open a branch; `digits` length symbols follow, `bond` caps the
    /// branch's initial state.
    Branch { digits: u8, bond: u8 },
    /// Close a ring to an earlier atom; `digits` length symbols follow.
    Ring { digits: u8, bond: u8 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symbol {
    pub token: String,
    pub kind: SymbolKind,
    /// Value of the symbol when read as a base-16 length digit.
    pub digit: u8,
}

/// Digit values of the reference index alphabet. Tokens not listed read
/// as 0.
pub const INDEX_DIGITS: [(&str, u8); 16] = [
    ("[C]", 0),
    ("[Ring1]", 1),
    ("[Ring2]", 2),
    ("[Branch1_1]", 3),
    ("[Branch1_2]", 4),
    ("[Branch1_3]", 5),
    ("[Branch2_1]", 6),
    ("[Branch2_2]", 7),
    ("[Branch2_3]", 8),
    ("[O]", 9),
    ("[N]", 10),
    ("[=N]", 11),
    ("[=C]", 12),
    ("[#C]", 13),
    ("[S]", 14),
    ("[P]", 15),
];

pub const DEFAULT_TOKENS: [&str; 21] = [
    "[C]", "[=C]", "[#C]", "[O]", "[=O]", "[N]", "[=N]", "[#N]", "[F]", "[S]", "[=S]", "[P]", "[Cl]",
    "[Br]", "[Branch1_1]", "[Branch1_2]", "[Branch1_3]", "[Branch2_1]", "[Branch2_2]", "[Ring1]",
    "[Ring2]",
];

pub const EXTENDED_EXTRA_TOKENS: [&str; 11] = [
    "[#S]", "[=P]", "[#P]", "[Branch2_3]", "[Branch3_1]", "[Branch3_2]", "[Branch3_3]", "[Ring3]",
    "[Expl=Ring1]", "[Expl=Ring2]", "[Expl=Ring3]",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlphabetError {
    Empty,
    TooLarge(usize),
    DuplicateToken(String),
    BadDigit { token: String, digit: u8 },
    UnknownToken(String),
    BadSymbol { token: String, reason: &'static str },
}

impl fmt::Display for AlphabetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphabetError::Empty => write!(f, "alphabet has no symbols"),
            AlphabetError::TooLarge(n) => write!(f, "alphabet has {n} symbols; at most 255 are supported"),
            AlphabetError::DuplicateToken(t) => write!(f, "duplicate token {t}"),
            AlphabetError::BadDigit { token, digit } => {
                write!(f, "token {token} has digit value {digit}, expected 0..=15")
            }
            AlphabetError::UnknownToken(t) => write!(f, "token {t} is not in the alphabet"),
            AlphabetError::BadSymbol { token, reason } => write!(f, "cannot interpret {token}: {reason}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for AlphabetError {}

impl Symbol {
    /// Interprets a token written in the usual SELFIES notation, e.g.
    /// `[=C]`, `[Branch1_2]`, `[Expl=Ring1]`, with the reference digit.
    pub fn from_token(token: &str) -> Result<Symbol, AlphabetError> {
        let bad = |reason| AlphabetError::BadSymbol { token: token.to_string(), reason };
        let inner = token
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| bad("missing brackets"))?;
        let kind = if let Some(rest) = inner.strip_prefix("Branch") {
            let (l, x) = rest.split_once('_').ok_or_else(|| bad("expected BranchL_X"))?;
            let digits = parse_small(l).ok_or_else(|| bad("branch digit count must be 1..=3"))?;
            let bond = parse_small(x).ok_or_else(|| bad("branch bond must be 1..=3"))?;
            SymbolKind::Branch { digits, bond }
        } else if let Some(rest) = inner.strip_prefix("Ring") {
            let digits = parse_small(rest).ok_or_else(|| bad("ring digit count must be 1..=3"))?;
            SymbolKind::Ring { digits, bond: 1 }
        } else if let Some(rest) = inner.strip_prefix("Expl") {
            let (bond, rest) = split_bond(rest);
            let digits = rest
                .strip_prefix("Ring")
                .and_then(parse_small)
                .ok_or_else(|| bad("expected Expl<bond>RingL"))?;
            SymbolKind::Ring { digits, bond }
        } else {
            let (bond, rest) = split_bond(inner);
            let element = Element::from_symbol(rest).ok_or_else(|| bad("unsupported element"))?;
            SymbolKind::Atom { element, bond }
        };
        let digit = INDEX_DIGITS.iter().find(|(t, _)| *t == token).map_or(0, |&(_, d)| d);
        Ok(Symbol { token: token.to_string(), kind, digit })
    }
}

fn parse_small(s: &str) -> Option<u8> {
    match s {
        "1" => Some(1),
        "2" => Some(2),
        "3" => Some(3),
        _ => None,
    }
}

fn split_bond(s: &str) -> (u8, &str) {
    if let Some(rest) = s.strip_prefix('=') {
        (2, rest)
    } else if let Some(rest) = s.strip_prefix('#') {
        (3, rest)
    } else {
        (1, s)
    }
}

/// Ordered symbol set. Strings store symbol indices into it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<Symbol>,
    index: BTreeMap<String, u8>,
}

impl Alphabet {
    pub fn new(symbols: Vec<Symbol>) -> Result<Alphabet, AlphabetError> {
        if symbols.is_empty() {
            return Err(AlphabetError::Empty);
        }
        if symbols.len() > u8::MAX as usize {
            return Err(AlphabetError::TooLarge(symbols.len()));
        }
        let mut index = BTreeMap::new();
        for (i, s) in symbols.iter().enumerate() {
            if s.digit > 15 {
                return Err(AlphabetError::BadDigit { token: s.token.clone(), digit: s.digit });
            }
            if index.insert(s.token.clone(), i as u8).is_some() {
                return Err(AlphabetError::DuplicateToken(s.token.clone()));
            }
        }
        Ok(Alphabet { symbols, index })
    }

    pub fn from_tokens<'t>(tokens: impl IntoIterator<Item = &'t str>) -> Result<Alphabet, AlphabetError> {
        let symbols = tokens.into_iter().map(Symbol::from_token).collect::<Result<Vec<_>, _>>()?;
        Alphabet::new(symbols)
    }

    /// The 21-token alphabet used for the baseline experiments.
    pub fn default_21() -> Alphabet {
        Alphabet::from_tokens(DEFAULT_TOKENS).expect("built-in tokens are valid")
    }

    /// Default tokens plus the remaining bond/branch/ring variants
    /// (32 tokens).
    pub fn extended() -> Alphabet {
        Alphabet::from_tokens(DEFAULT_TOKENS.iter().chain(&EXTENDED_EXTRA_TOKENS).copied())
            .expect("built-in tokens are valid")
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    #[inline]
    pub fn symbol(&self, index: u8) -> &Symbol {
        &self.symbols[index as usize]
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn index_of(&self, token: &str) -> Option<u8> {
        self.index.get(token).copied()
    }

    /// Splits concatenated bracketed tokens into symbol indices.
    pub fn tokenize(&self, text: &str) -> Result<Vec<u8>, AlphabetError> {
        let mut out = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            if !rest.starts_with('[') {
                return Err(AlphabetError::UnknownToken(rest.to_string()));
            }
            let end = rest.find(']').ok_or_else(|| AlphabetError::UnknownToken(rest.to_string()))?;
            let token = &rest[..=end];
            let idx = self.index_of(token).ok_or_else(|| AlphabetError::UnknownToken(token.to_string()))?;
            out.push(idx);
            rest = &rest[end + 1..];
        }
        Ok(out)
    }
}
