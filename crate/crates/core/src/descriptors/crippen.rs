//! Wildman-Crippen atom-contribution logP.
//!
//! Heavy atoms are typed by the first matching rule of the standard
//! Crippen table (same rule order); each implicit hydrogen takes the
//! contribution of the hydrogen type implied by its heavy atom.

use crate::chem::{BondOrder, Element, MoleculeGraph, Perceived};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Bt {
    Single,
    Double,
    Triple,
    Aromatic,
}

#[derive(Clone, Copy)]
enum BondQ {
    /// SMARTS default: single or aromatic.
    Default,
    Single,
    Double,
    Triple,
    Aromatic,
}

impl BondQ {
    fn matches(self, b: Bt) -> bool {
        match self {
            BondQ::Default => matches!(b, Bt::Single | Bt::Aromatic),
            BondQ::Single => b == Bt::Single,
            BondQ::Double => b == Bt::Double,
            BondQ::Triple => b == Bt::Triple,
            BondQ::Aromatic => b == Bt::Aromatic,
        }
    }
}

struct Ctx<'a> {
    p: &'a Perceived<'a>,
}

type AtomQ = fn(&Ctx<'_>, usize) -> bool;

impl Ctx<'_> {
    fn mol(&self) -> &MoleculeGraph {
        self.p.mol
    }
    fn el(&self, i: usize) -> Element {
        self.mol().atom(i).element
    }
    fn arom(&self, i: usize) -> bool {
        self.p.aromatic.atoms[i]
    }
    fn h(&self, i: usize) -> u8 {
        self.mol().atom(i).hydrogens
    }
    fn charge(&self, i: usize) -> i8 {
        self.mol().atom(i).charge
    }
    fn x(&self, i: usize) -> usize {
        self.mol().total_degree(i)
    }
    fn bt(&self, b: usize) -> Bt {
        if self.p.aromatic.bonds[b] {
            return Bt::Aromatic;
        }
        match self.mol().bond(b).order {
            BondOrder::Single => Bt::Single,
            BondOrder::Double => Bt::Double,
            BondOrder::Triple => Bt::Triple,
        }
    }
    fn is(&self, i: usize, e: Element, aromatic: bool) -> bool {
        self.el(i) == e && self.arom(i) == aromatic
    }

    /// Whether distinct neighbours of `i` satisfy every (bond, atom) query.
    fn nbrs(&self, i: usize, queries: &[(BondQ, AtomQ)]) -> bool {
        let nb = self.mol().neighbors(i);
        let mut used = [false; 8];
        fn go(ctx: &Ctx<'_>, nb: &[(usize, usize)], q: &[(BondQ, AtomQ)], used: &mut [bool; 8]) -> bool {
            let Some((&(bq, aq), rest)) = q.split_first() else { return true };
            for (k, &(j, b)) in nb.iter().enumerate().take(8) {
                if !used[k] && bq.matches(ctx.bt(b)) && aq(ctx, j) {
                    used[k] = true;
                    if go(ctx, nb, rest, used) {
                        return true;
                    }
                    used[k] = false;
                }
            }
            false
        }
        go(self, nb, queries, &mut used)
    }
}

// Atom queries written as in the rule table: uppercase = aliphatic.
fn any_heavy(_: &Ctx<'_>, _: usize) -> bool {
    true
}
fn al(c: &Ctx<'_>, j: usize) -> bool {
    !c.arom(j)
}
fn ar(c: &Ctx<'_>, j: usize) -> bool {
    c.arom(j)
}
fn al_c(c: &Ctx<'_>, j: usize) -> bool {
    c.is(j, Element::C, false)
}
fn ar_c(c: &Ctx<'_>, j: usize) -> bool {
    c.is(j, Element::C, true)
}
fn al_n(c: &Ctx<'_>, j: usize) -> bool {
    c.is(j, Element::N, false)
}
fn al_o(c: &Ctx<'_>, j: usize) -> bool {
    c.is(j, Element::O, false)
}
fn al_s(c: &Ctx<'_>, j: usize) -> bool {
    c.is(j, Element::S, false)
}
fn any_n(c: &Ctx<'_>, j: usize) -> bool {
    c.el(j) == Element::N
}
fn any_c(c: &Ctx<'_>, j: usize) -> bool {
    c.el(j) == Element::C
}
fn is_f(c: &Ctx<'_>, j: usize) -> bool {
    c.el(j) == Element::F
}
fn is_cl(c: &Ctx<'_>, j: usize) -> bool {
    c.el(j) == Element::Cl
}
fn is_br(c: &Ctx<'_>, j: usize) -> bool {
    c.el(j) == Element::Br
}
fn any_s(c: &Ctx<'_>, j: usize) -> bool {
    c.el(j) == Element::S
}
fn any_n_or_o(c: &Ctx<'_>, j: usize) -> bool {
    matches!(c.el(j), Element::N | Element::O)
}
/// [N,O,P,S,F,Cl,Br,I]
fn hetero(c: &Ctx<'_>, j: usize) -> bool {
    match c.el(j) {
        Element::N | Element::O | Element::P | Element::S => !c.arom(j),
        Element::F | Element::Cl | Element::Br => true,
        Element::C => false,
    }
}
/// [!C;A;!#1]
fn al_not_c(c: &Ctx<'_>, j: usize) -> bool {
    !c.arom(j) && c.el(j) != Element::C
}
/// [A;!C;!N;!O;!S;!F;!Cl;!Br;!I]: only aliphatic P among supported elements.
fn al_p(c: &Ctx<'_>, j: usize) -> bool {
    c.is(j, Element::P, false)
}
/// [C,N,O] aliphatic
fn al_cno(c: &Ctx<'_>, j: usize) -> bool {
    !c.arom(j) && matches!(c.el(j), Element::C | Element::N | Element::O)
}
/// [C,c]
fn any_carbon(c: &Ctx<'_>, j: usize) -> bool {
    c.el(j) == Element::C
}
/// [!#1;!#6]
fn not_carbon(c: &Ctx<'_>, j: usize) -> bool {
    c.el(j) != Element::C
}
/// [N,O,P,S] aliphatic
fn al_nops(c: &Ctx<'_>, j: usize) -> bool {
    !c.arom(j) && matches!(c.el(j), Element::N | Element::O | Element::P | Element::S)
}
/// [#6,#7,O,S]
fn c_n_o_s(c: &Ctx<'_>, j: usize) -> bool {
    match c.el(j) {
        Element::C | Element::N => true,
        Element::O | Element::S => !c.arom(j),
        _ => false,
    }
}
/// [CH] aliphatic carbon with one H
fn al_ch1(c: &Ctx<'_>, j: usize) -> bool {
    al_c(c, j) && c.h(j) == 1
}
fn al_ch2(c: &Ctx<'_>, j: usize) -> bool {
    al_c(c, j) && c.h(j) == 2
}
fn al_cx2(c: &Ctx<'_>, j: usize) -> bool {
    al_c(c, j) && c.x(j) == 2
}
fn al_cx4(c: &Ctx<'_>, j: usize) -> bool {
    al_c(c, j) && c.x(j) == 4
}
fn cx4_or_ar_c(c: &Ctx<'_>, j: usize) -> bool {
    al_cx4(c, j) || ar_c(c, j)
}
/// [!#6;!#7;!#8;!#16]
fn not_cnos(c: &Ctx<'_>, j: usize) -> bool {
    !matches!(c.el(j), Element::C | Element::N | Element::O | Element::S)
}
fn neutral_s(c: &Ctx<'_>, j: usize) -> bool {
    c.el(j) == Element::S && c.charge(j) == 0
}
fn n_minus(c: &Ctx<'_>, j: usize) -> bool {
    c.el(j) == Element::N && c.charge(j) < 0
}

use BondQ::{Aromatic as AR, Default as D, Double as DB, Single as SG, Triple as TR};

/// Type label and logP contribution of heavy atom `i`.
fn heavy_type(c: &Ctx<'_>, i: usize) -> (&'static str, f64) {
    let (el, arom, h, q, x) = (c.el(i), c.arom(i), c.h(i), c.charge(i), c.x(i));
    let n = |qs: &[(BondQ, AtomQ)]| c.nbrs(i, qs);
    match el {
        Element::C if !arom => {
            if h == 4
                || (h == 3 && n(&[(D, al_c)]))
                || (h == 2 && n(&[(D, al_c), (D, al_c)]))
            {
                return ("C1", 0.1441);
            }
            if (h == 1 && n(&[(D, al_c), (D, al_c), (D, al_c)])) || n(&[(D, al_c), (D, al_c), (D, al_c), (D, al_c)]) {
                return ("C2", 0.0);
            }
            if (h == 3 && n(&[(D, hetero)])) || (h == 2 && x == 4 && n(&[(D, hetero), (D, al)])) {
                return ("C3", -0.2035);
            }
            if (h == 1 && x == 4 && n(&[(D, hetero), (D, al), (D, al)]))
                || (h == 0 && x == 4 && n(&[(D, hetero), (D, al), (D, al), (D, al)]))
            {
                return ("C4", -0.2051);
            }
            if n(&[(DB, al_not_c)]) {
                return ("C5", -0.2783);
            }
            if (h == 2 && n(&[(DB, al_c)]))
                || (h == 1 && n(&[(DB, al_c), (D, al)]))
                || (h == 0 && n(&[(DB, al_c), (D, al), (D, al)]))
                || n(&[(DB, al_c), (DB, al_c)])
            {
                return ("C6", 0.1551);
            }
            if x == 2 && n(&[(TR, al)]) {
                return ("C7", 0.0017);
            }
            if h == 3 && n(&[(D, ar_c)]) {
                return ("C8", 0.08452);
            }
            if h == 3 && n(&[(D, ar)]) {
                return ("C9", -0.1444);
            }
            if h == 2 && x == 4 && n(&[(D, ar)]) {
                return ("C10", -0.0516);
            }
            if h == 1 && x == 4 && n(&[(D, ar)]) {
                return ("C11", 0.1193);
            }
            if h == 0 && x == 4 && n(&[(D, ar)]) {
                return ("C12", -0.0967);
            }
            if n(&[(DB, al_c), (D, ar), (D, al)])
                || n(&[(DB, al_c), (D, ar_c), (D, ar)])
                || (h == 1 && n(&[(DB, al_c), (D, ar)]))
                || n(&[(DB, ar_c)])
            {
                return ("C26", 0.264);
            }
            if x == 4 && n(&[(D, al_p)]) {
                return ("C27", 0.2148);
            }
            ("CS", 0.08129)
        }
        Element::C => {
            if h == 0 && n(&[(SG, al_p)]) {
                return ("C13", -0.5443);
            }
            if n(&[(D, is_f)]) {
                return ("C14", 0.0);
            }
            if n(&[(D, is_cl)]) {
                return ("C15", 0.245);
            }
            if n(&[(D, is_br)]) {
                return ("C16", 0.198);
            }
            if h == 1 {
                return ("C18", 0.1581);
            }
            if n(&[(AR, ar), (AR, ar), (AR, ar)]) {
                return ("C19", 0.2955);
            }
            let two_ring = [(AR, ar as AtomQ), (AR, ar as AtomQ)];
            let with = |extra: (BondQ, AtomQ)| n(&[two_ring[0], two_ring[1], extra]);
            if with((SG, ar)) {
                return ("C20", 0.2713);
            }
            if with((SG, al_c)) {
                return ("C21", 0.136);
            }
            if with((SG, al_n)) {
                return ("C22", 0.4619);
            }
            if with((SG, al_o)) {
                return ("C23", 0.5437);
            }
            if with((SG, al_s)) {
                return ("C24", 0.1893);
            }
            if with((DB, al_cno)) {
                return ("C25", -0.8186);
            }
            ("CS", 0.08129)
        }
        Element::N => {
            if !arom && q == 0 {
                if h == 2 && n(&[(D, al)]) {
                    return ("N1", -1.019);
                }
                if h == 1 && n(&[(D, al), (D, al)]) {
                    return ("N2", -0.7096);
                }
                if h == 2 && n(&[(D, ar)]) {
                    return ("N3", -1.027);
                }
                if h == 1 && n(&[(D, ar), (D, any_heavy)]) {
                    return ("N4", -0.5188);
                }
                if h == 1 && n(&[(DB, any_heavy)]) {
                    return ("N5", 0.08387);
                }
                if n(&[(DB, any_heavy), (D, any_heavy)]) {
                    return ("N6", 0.1836);
                }
                if n(&[(D, al), (D, al), (D, al)]) {
                    return ("N7", -0.3187);
                }
                if n(&[(D, ar), (D, any_heavy), (D, al)]) || n(&[(D, ar), (D, ar), (D, ar)]) {
                    return ("N8", -0.4458);
                }
                if n(&[(TR, al)]) {
                    return ("N9", 0.01508);
                }
            }
            if !arom && q > 0 && (1..=3).contains(&h) {
                return ("N10", -1.95);
            }
            if arom {
                return if q == 0 { ("N11", -0.3239) } else if q > 0 { ("N12", -1.119) } else { ("NS", -0.4806) };
            }
            if q > 0
                && h == 0
                && (n(&[(D, al), (D, al), (D, al), (D, al)])
                    || n(&[(DB, al), (D, al), (D, any_heavy)])
                    || n(&[(DB, any_c), (DB, any_n)]))
            {
                return ("N13", -0.3396);
            }
            if (q > 0 && n(&[(TR, al)])) || q < 0 || (q > 0 && n(&[(DB, n_minus), (DB, al_n)])) {
                return ("N14", 0.2887);
            }
            ("NS", -0.4806)
        }
        Element::O => {
            if arom {
                return ("O1", 0.1552);
            }
            if h == 1 || h == 2 {
                return ("O2", -0.2893);
            }
            if n(&[(D, al), (D, al)]) {
                return ("O3", -0.0684);
            }
            if n(&[(D, ar), (D, any_heavy)]) {
                return ("O4", -0.4195);
            }
            if n(&[(DB, any_n_or_o)]) || (x == 1 && q < 0 && n(&[(D, any_n)])) {
                return ("O5", 0.0335);
            }
            if (x == 1 && q < 0 && n(&[(D, any_s)])) || (q == 0 && n(&[(DB, neutral_s)])) {
                return ("O6", -0.3339);
            }
            if q == -1 && h == 0 && n(&[(D, carbonyl_carbon)]) {
                return ("O12", -1.326);
            }
            if x == 1 && q < 0 && n(&[(D, not_n_s)]) {
                return ("O7", -1.189);
            }
            if n(&[(DB, ar_c)]) {
                return ("O8", 0.1788);
            }
            if let Some(cc) = double_partner(c, i) {
                if c.is(cc, Element::C, false) {
                    let others = |qs: &[(BondQ, AtomQ)]| nbrs_except(c, cc, i, qs);
                    if (al_ch1(c, cc) && others(&[(D, al_c)]))
                        || others(&[(D, al_c), (D, al)])
                        || (al_ch1(c, cc) && others(&[(D, al_nops_no)]))
                        || al_ch2(c, cc)
                        || (al_cx2(c, cc) && others(&[(DB, al_o)]))
                    {
                        return ("O9", -0.1526);
                    }
                    if (al_ch1(c, cc) && others(&[(D, ar_c)]))
                        || others(&[(D, any_carbon), (D, ar)])
                        || others(&[(D, ar_c), (D, al)])
                    {
                        return ("O10", 0.1129);
                    }
                    if others(&[(D, not_carbon), (D, not_carbon)]) {
                        return ("O11", 0.4833);
                    }
                }
            }
            ("OS", -0.1188)
        }
        Element::F if q == 0 => ("F", 0.4202),
        Element::Cl if q == 0 => ("Cl", 0.6895),
        Element::Br if q == 0 => ("Br", 0.8456),
        Element::F | Element::Cl | Element::Br => ("Hal", -2.996),
        Element::P => ("P", 0.8612),
        Element::S => {
            if arom {
                return ("S3", 0.6237);
            }
            if q != 0 || n(&[(DB, al_nops)]) {
                return ("S2", -0.0024);
            }
            ("S1", 0.6482)
        }
    }
}

/// [N,O] for the aldehyde-like "[O]=[CH][N,O]" rule.
fn al_nops_no(c: &Ctx<'_>, j: usize) -> bool {
    !c.arom(j) && matches!(c.el(j), Element::N | Element::O)
}

fn not_n_s(c: &Ctx<'_>, j: usize) -> bool {
    !(c.is(j, Element::N, false) || c.is(j, Element::S, false))
}

/// Carbon of C(=O) used by the carboxylate rule.
fn carbonyl_carbon(c: &Ctx<'_>, j: usize) -> bool {
    al_c(c, j) && c.nbrs(j, &[(DB, al_o)])
}

fn double_partner(c: &Ctx<'_>, i: usize) -> Option<usize> {
    c.mol().neighbors(i).iter().find(|&&(_, b)| c.bt(b) == Bt::Double).map(|&(j, _)| j)
}

/// Neighbour queries on `center`, never matching atom `skip`.
fn nbrs_except(c: &Ctx<'_>, center: usize, skip: usize, qs: &[(BondQ, AtomQ)]) -> bool {
    let nb: alloc::vec::Vec<(usize, usize)> =
        c.mol().neighbors(center).iter().copied().filter(|&(j, _)| j != skip).collect();
    let mut used = [false; 8];
    fn go(ctx: &Ctx<'_>, nb: &[(usize, usize)], q: &[(BondQ, AtomQ)], used: &mut [bool; 8]) -> bool {
        let Some((&(bq, aq), rest)) = q.split_first() else { return true };
        for (k, &(j, b)) in nb.iter().enumerate().take(8) {
            if !used[k] && bq.matches(ctx.bt(b)) && aq(ctx, j) {
                used[k] = true;
                if go(ctx, nb, rest, used) {
                    return true;
                }
                used[k] = false;
            }
        }
        false
    }
    go(c, &nb, qs, &mut used)
}

/// Contribution of one hydrogen attached to heavy atom `i`.
fn hydrogen_type(c: &Ctx<'_>, i: usize) -> (&'static str, f64) {
    let el = c.el(i);
    if el == Element::C {
        return ("H1", 0.123);
    }
    // Hydrogen rules match on element, not aromaticity.
    let aliphatic_o = c.is(i, Element::O, false);
    if aliphatic_o && (c.nbrs(i, &[(D, cx4_or_ar_c)]) || c.nbrs(i, &[(D, not_cnos)])) {
        return ("H2", -0.2677);
    }
    if !matches!(el, Element::C | Element::N | Element::O) {
        return ("H2", -0.2677);
    }
    if el == Element::N || (aliphatic_o && c.nbrs(i, &[(D, any_n)])) {
        return ("H3", 0.2142);
    }
    if aliphatic_o && (c.nbrs(i, &[(D, acid_carbon)]) || c.nbrs(i, &[(D, o_or_s)])) {
        return ("H4", 0.298);
    }
    ("HS", 0.1125)
}

/// Aliphatic C double-bonded to [#6,#7,O,S].
fn acid_carbon(c: &Ctx<'_>, j: usize) -> bool {
    al_c(c, j) && c.nbrs(j, &[(DB, c_n_o_s)])
}

fn o_or_s(c: &Ctx<'_>, j: usize) -> bool {
    al_o(c, j) || al_s(c, j)
}

/// Per-atom contributions, hydrogens included.
pub fn crippen_contributions(p: &Perceived<'_>) -> alloc::vec::Vec<f64> {
    let c = Ctx { p };
    (0..p.mol.atom_count())
        .map(|i| {
            let (_, heavy) = heavy_type(&c, i);
            let h = c.h(i) as f64;
            let hv = if h > 0.0 { hydrogen_type(&c, i).1 } else { 0.0 };
            heavy + h * hv
        })
        .collect()
}

/// Crippen type label of every heavy atom.
pub fn crippen_types(p: &Perceived<'_>) -> alloc::vec::Vec<&'static str> {
    let c = Ctx { p };
    (0..p.mol.atom_count()).map(|i| heavy_type(&c, i).0).collect()
}

pub fn crippen_logp_perceived(p: &Perceived<'_>) -> f64 {
    crippen_contributions(p).iter().sum()
}

pub fn crippen_logp(mol: &MoleculeGraph) -> f64 {
    crippen_logp_perceived(&Perceived::new(mol))
}
