//! Alphabet files (TOML). Every symbol lists its token, its meaning and
//! the digit value it has when read as a branch or ring length.
//!
//! ```toml
//! [[symbol]]
//! token = "[=C]"
//! kind = "atom"
//! element = "C"
//! bond = 2
//! digit = 12
//! ```
//!
//! `kind` is `atom`, `branch` or `ring`; branch and ring symbols carry
//! `digits` (how many length symbols follow) and `bond`.

use std::fs;

use molga_core::chem::Element;
use molga_core::selfies::{Symbol, SymbolKind};
use molga_core::Alphabet;
use serde::{Deserialize, Serialize};

use crate::Error;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphabetFile {
    #[serde(default)]
    pub name: Option<String>,
    pub symbol: Vec<SymbolEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolEntry {
    pub token: String,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element: Option<String>,
    pub bond: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub digits: Option<u8>,
    pub digit: u8,
}

impl SymbolEntry {
    fn from_symbol(s: &Symbol) -> Self {
        let (kind, element, bond, digits) = match s.kind {
            SymbolKind::Atom { element, bond } => ("atom", Some(element.symbol().to_string()), bond, None),
            SymbolKind::Branch { digits, bond } => ("branch", None, bond, Some(digits)),
            SymbolKind::Ring { digits, bond } => ("ring", None, bond, Some(digits)),
        };
        SymbolEntry { token: s.token.clone(), kind: kind.into(), element, bond, digits, digit: s.digit }
    }

    fn to_symbol(&self) -> Result<Symbol, Error> {
        let bad = |why: &str| Error::Alphabet(format!("{}: {why}", self.token));
        if !(1..=3).contains(&self.bond) {
            return Err(bad("bond must be 1, 2 or 3"));
        }
        let digits = || match self.digits {
            Some(d @ 1..=3) => Ok(d),
            _ => Err(bad("digits must be 1, 2 or 3")),
        };
        let kind = match self.kind.as_str() {
            "atom" => {
                let sym = self.element.as_deref().ok_or_else(|| bad("atom symbols need an element"))?;
                let element = Element::from_symbol(sym).ok_or_else(|| bad("unsupported element"))?;
                SymbolKind::Atom { element, bond: self.bond }
            }
            "branch" => SymbolKind::Branch { digits: digits()?, bond: self.bond },
            "ring" => SymbolKind::Ring { digits: digits()?, bond: self.bond },
            _ => return Err(bad("kind must be atom, branch or ring")),
        };
        Ok(Symbol { token: self.token.clone(), kind, digit: self.digit })
    }
}

pub fn to_file(alphabet: &Alphabet, name: &str) -> AlphabetFile {
    AlphabetFile { name: Some(name.into()), symbol: alphabet.symbols().iter().map(SymbolEntry::from_symbol).collect() }
}

pub fn write_alphabet(alphabet: &Alphabet, name: &str) -> String {
    let header = "# SELFIES alphabet. `digit` is the value of the symbol when it is read as a\n\
                  # base-16 branch or ring length; symbols outside the index table read as 0.\n";
    format!("{header}{}", toml::to_string(&to_file(alphabet, name)).expect("alphabet serializes"))
}

pub fn parse_alphabet(text: &str) -> Result<Alphabet, Error> {
    let file: AlphabetFile = toml::from_str(text).map_err(|e| Error::Alphabet(e.to_string()))?;
    let symbols = file.symbol.iter().map(SymbolEntry::to_symbol).collect::<Result<Vec<_>, _>>()?;
    Alphabet::new(symbols).map_err(|e| Error::Alphabet(e.to_string()))
}

/// `"default"` (21 tokens), `"extended"` or a path to an alphabet file.
pub fn load_alphabet(spec: &str) -> Result<Alphabet, Error> {
    match spec {
        "default" => Ok(Alphabet::default_21()),
        "extended" => Ok(Alphabet::extended()),
        path => parse_alphabet(&fs::read_to_string(path).map_err(|e| Error::io(path, e))?),
    }
}
