use core::fmt;

/// Heavy elements the toolkit supports. Hydrogens are always implicit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    C,
    N,
    O,
    F,
    P,
    S,
    Cl,
    Br,
}

impl Element {
    pub const ALL: [Element; 8] = [
        Element::C,
        Element::N,
        Element::O,
        Element::F,
        Element::P,
        Element::S,
        Element::Cl,
        Element::Br,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Element::C => "C",
            Element::N => "N",
            Element::O => "O",
            Element::F => "F",
            Element::P => "P",
            Element::S => "S",
            Element::Cl => "Cl",
            Element::Br => "Br",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Element> {
        Some(match s {
            "C" => Element::C,
            "N" => Element::N,
            "O" => Element::O,
            "F" => Element::F,
            "P" => Element::P,
            "S" => Element::S,
            "Cl" => Element::Cl,
            "Br" => Element::Br,
            _ => return None,
        })
    }

    pub fn atomic_number(self) -> u8 {
        match self {
            Element::C => 6,
            Element::N => 7,
            Element::O => 8,
            Element::F => 9,
            Element::P => 15,
            Element::S => 16,
            Element::Cl => 17,
            Element::Br => 35,
        }
    }

    /// Maximum number of bonds (including hydrogens) of the neutral atom.
    pub fn max_valence(self) -> u8 {
        match self {
            Element::C => 4,
            Element::N => 3,
            Element::O => 2,
            Element::F | Element::Cl | Element::Br => 1,
            Element::S => 6,
            Element::P => 5,
        }
    }

    /// Maximum valence adjusted for a formal charge.
    ///
    /// Pnictogens and chalcogens gain one bond per positive charge and lose
    /// one per negative charge; carbon and the halogens lose one bond per
    /// unit of charge of either sign.
    pub fn max_valence_charged(self, charge: i8) -> u8 {
        let base = self.max_valence() as i16;
        let v = match self {
            Element::N | Element::O | Element::S | Element::P => base + charge as i16,
            _ => base - (charge as i16).abs(),
        };
        v.clamp(0, 8) as u8
    }

    /// Standard valences used to infer implicit hydrogens, lowest first.
    pub fn default_valences(self, charge: i8) -> &'static [u8] {
        match (self, charge) {
            (Element::C, 0) => &[4],
            (Element::C, _) => &[3],
            (Element::N, 0) => &[3],
            (Element::P, 0) => &[3, 5],
            (Element::N, 1) | (Element::P, 1) => &[4],
            (Element::N, -1) | (Element::P, -1) => &[2],
            (Element::O, 0) => &[2],
            (Element::O, 1) => &[3],
            (Element::O, -1) => &[1],
            (Element::S, 0) => &[2, 4, 6],
            (Element::S, 1) => &[3, 5],
            (Element::S, -1) => &[1, 3, 5],
            (Element::F | Element::Cl | Element::Br, 0) => &[1],
            _ => &[],
        }
    }

    pub fn is_halogen(self) -> bool {
        matches!(self, Element::F | Element::Cl | Element::Br)
    }

    /// Whether the element may be written as a lowercase aromatic atom.
    pub fn can_be_aromatic(self) -> bool {
        matches!(self, Element::C | Element::N | Element::O | Element::S | Element::P)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Hydrogens needed to bring `bond_sum` up to the lowest standard valence
/// that accommodates it; zero when no standard valence fits.
pub fn implicit_hydrogens(element: Element, charge: i8, bond_sum: u8) -> u8 {
    element
        .default_valences(charge)
        .iter()
        .find(|&&v| v >= bond_sum)
        .map_or(0, |&v| v - bond_sum)
}
