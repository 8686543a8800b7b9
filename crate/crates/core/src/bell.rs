//! Tripartite two-setting Bell expressions.
//!
//! A term is a correlator ⟨A_x B_y C_z⟩ where any party may be replaced by the
//! identity, so bipartite terms like ⟨B₁C₀⟩ and single-party marginals share one
//! 27-slot coefficient table. Expressions are stored signed: `expr ≤ bound` is
//! the facet, and optimizers maximize `expr` itself.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::{Error, Result};

/// What a party measures in a term: nothing, setting 0 or setting 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Id,
    S0,
    S1,
}

impl Slot {
    pub const ALL: [Slot; 3] = [Slot::Id, Slot::S0, Slot::S1];

    fn index(self) -> usize {
        self as usize
    }

    pub fn setting(self) -> Option<usize> {
        match self {
            Slot::Id => None,
            Slot::S0 => Some(0),
            Slot::S1 => Some(1),
        }
    }

    pub fn from_setting(setting: usize) -> Slot {
        if setting == 0 {
            Slot::S0
        } else {
            Slot::S1
        }
    }
}

/// One correlator, e.g. `A1B0C0` or `B1C0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub slots: [Slot; 3],
}

pub const PARTY_NAMES: [char; 3] = ['A', 'B', 'C'];

impl Term {
    pub const fn new(a: Slot, b: Slot, c: Slot) -> Self {
        Term { slots: [a, b, c] }
    }

    /// Flat index into a 27-entry table, `9a + 3b + c`.
    pub fn index(self) -> usize {
        self.slots[0].index() * 9 + self.slots[1].index() * 3 + self.slots[2].index()
    }

    pub fn from_index(index: usize) -> Term {
        assert!(index < 27, "term index out of range");
        Term::new(
            Slot::ALL[index / 9],
            Slot::ALL[(index / 3) % 3],
            Slot::ALL[index % 3],
        )
    }

    pub fn is_identity(self) -> bool {
        self.slots == [Slot::Id; 3]
    }

    /// All 26 non-identity terms in index order.
    pub fn all() -> impl Iterator<Item = Term> {
        (1..27).map(Term::from_index)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("1");
        }
        for (party, slot) in PARTY_NAMES.iter().zip(self.slots) {
            if let Some(s) = slot.setting() {
                write!(f, "{party}{s}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Term {
    type Err = Error;

    /// Parses `A0`, `B1C0`, `A1B1C1`, ...; parties must appear in A, B, C order.
    fn from_str(s: &str) -> Result<Term> {
        const BAD: Error = Error::InvalidExpression("malformed term");
        let bytes = s.as_bytes();
        if bytes.is_empty() || !bytes.len().is_multiple_of(2) {
            return Err(BAD);
        }
        let mut slots = [Slot::Id; 3];
        let mut next_party = 0;
        for pair in bytes.chunks(2) {
            let party = match pair[0] {
                b'A' => 0,
                b'B' => 1,
                b'C' => 2,
                _ => return Err(BAD),
            };
            if party < next_party {
                return Err(BAD);
            }
            slots[party] = match pair[1] {
                b'0' => Slot::S0,
                b'1' => Slot::S1,
                _ => return Err(BAD),
            };
            next_party = party + 1;
        }
        Ok(Term { slots })
    }
}

/// Which polytope the bound refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polytope {
    /// Fully local correlations.
    L3,
    /// Hybrid local models with no-signaling bipartite resources.
    Ns2,
}

impl Polytope {
    pub fn as_str(self) -> &'static str {
        match self {
            Polytope::L3 => "L3",
            Polytope::Ns2 => "NS2",
        }
    }
}

impl FromStr for Polytope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Polytope> {
        match s {
            "L3" => Ok(Polytope::L3),
            "NS2" => Ok(Polytope::Ns2),
            _ => Err(Error::InvalidExpression("unknown polytope tag")),
        }
    }
}

impl fmt::Display for Polytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A linear Bell expression `Σ coeff(term)·⟨term⟩ ≤ bound`.
#[derive(Debug, Clone, PartialEq)]
pub struct BellExpression {
    name: String,
    coefficients: [f64; 27],
    bound: f64,
    polytope: Polytope,
}

impl BellExpression {
    /// Validates and builds an expression. Repeated terms are rejected.
    pub fn new(
        name: impl Into<String>,
        terms: impl IntoIterator<Item = (Term, f64)>,
        bound: f64,
        polytope: Polytope,
    ) -> Result<Self> {
        let mut coefficients = [0.0; 27];
        let mut seen = 0u32;
        for (term, coeff) in terms {
            if term.is_identity() {
                return Err(Error::InvalidExpression("identity term has no correlator"));
            }
            if !coeff.is_finite() {
                return Err(Error::InvalidExpression("non-finite coefficient"));
            }
            let bit = 1u32 << term.index();
            if seen & bit != 0 {
                return Err(Error::InvalidExpression("duplicate term"));
            }
            seen |= bit;
            coefficients[term.index()] = coeff;
        }
        if !bound.is_finite() {
            return Err(Error::InvalidExpression("non-finite bound"));
        }
        if bound == 0.0 {
            return Err(Error::InvalidExpression("zero bound"));
        }
        if bound < 0.0 {
            return Err(Error::InvalidExpression("negative bound"));
        }
        if coefficients.iter().all(|&c| c == 0.0) {
            return Err(Error::InvalidExpression("no nonzero coefficient"));
        }
        Ok(BellExpression {
            name: name.into(),
            coefficients,
            bound,
            polytope,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn polytope(&self) -> Polytope {
        self.polytope
    }

    pub fn coefficient(&self, term: Term) -> f64 {
        self.coefficients[term.index()]
    }

    pub fn coefficients(&self) -> &[f64; 27] {
        &self.coefficients
    }

    /// Nonzero terms in index order.
    pub fn terms(&self) -> impl Iterator<Item = (Term, f64)> + '_ {
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0.0)
            .map(|(i, &c)| (Term::from_index(i), c))
    }

    /// Same coefficients, bound and polytope, ignoring the name.
    pub fn same_inequality(&self, other: &BellExpression) -> bool {
        self.coefficients == other.coefficients
            && self.bound == other.bound
            && self.polytope == other.polytope
    }

    /// `−expr`, keeping the bound. Not a facet in general.
    pub fn negated(&self) -> BellExpression {
        let mut out = self.clone();
        for c in out.coefficients.iter_mut() {
            *c = -*c;
        }
        out.name.insert(0, '-');
        out
    }

    /// Signed value `Σ coeff·correlator`.
    pub fn evaluate(&self, correlations: &CorrelationTensor) -> Result<f64> {
        let mut total = 0.0;
        for (term, coeff) in self.terms() {
            let value = correlations
                .get(term)
                .ok_or(Error::MissingCorrelator(term))?;
            total += coeff * value;
        }
        Ok(total)
    }
}

/// The inequalities shipped with the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Builtin {
    /// Mermin, `A₁B₀C₀ + A₀B₁C₀ + A₀B₀C₁ − A₁B₁C₁ ≤ 2`.
    Mermin,
    /// Śliwa's facet #15 of the local polytope, `≤ 4`.
    Sliwa15,
    /// Svetlichny, eight full correlators, `≤ 4`.
    Svetlichny,
    /// Bancal et al. facet #99 of the NS₂ polytope, `≤ 3`.
    Bancal99,
}

impl Builtin {
    pub const ALL: [Builtin; 4] = [
        Builtin::Mermin,
        Builtin::Sliwa15,
        Builtin::Svetlichny,
        Builtin::Bancal99,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Mermin => "mermin",
            Builtin::Sliwa15 => "sliwa15",
            Builtin::Svetlichny => "svetlichny",
            Builtin::Bancal99 => "bancal99",
        }
    }

    fn definition(self) -> (&'static [(i8, &'static str)], f64, Polytope) {
        match self {
            Builtin::Mermin => (
                &[(1, "A1B0C0"), (1, "A0B1C0"), (1, "A0B0C1"), (-1, "A1B1C1")],
                2.0,
                Polytope::L3,
            ),
            Builtin::Sliwa15 => (
                &[
                    (2, "A0B0"),
                    (2, "A1B0"),
                    (1, "A0C0"),
                    (1, "A1C0"),
                    (-2, "B0C0"),
                    (1, "A0B1C0"),
                    (-1, "A1B1C0"),
                    (1, "A0C1"),
                    (1, "A1C1"),
                    (-2, "B0C1"),
                    (-1, "A0B1C1"),
                    (1, "A1B1C1"),
                ],
                4.0,
                Polytope::L3,
            ),
            Builtin::Svetlichny => (
                &[
                    (1, "A0B0C0"),
                    (1, "A1B0C0"),
                    (-1, "A0B1C0"),
                    (1, "A1B1C0"),
                    (1, "A0B0C1"),
                    (-1, "A1B0C1"),
                    (1, "A0B1C1"),
                    (1, "A1B1C1"),
                ],
                4.0,
                Polytope::Ns2,
            ),
            Builtin::Bancal99 => (
                &[
                    (1, "A1B1"),
                    (1, "A0B0C0"),
                    (1, "B1C0"),
                    (1, "A1C1"),
                    (-1, "A0B0C1"),
                ],
                3.0,
                Polytope::Ns2,
            ),
        }
    }

    pub fn expression(self) -> BellExpression {
        let (terms, bound, polytope) = self.definition();
        let terms = terms.iter().map(|&(c, t)| {
            (
                t.parse::<Term>().expect("builtin terms are well formed"),
                c as f64,
            )
        });
        BellExpression::new(self.name(), terms, bound, polytope)
            .expect("builtin expressions are valid")
    }
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Builtin> {
        Builtin::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| Error::UnknownInequality(s.to_string()))
    }
}

/// Looks up a built-in expression by name.
pub fn builtin(name: &str) -> Result<BellExpression> {
    Ok(name.parse::<Builtin>()?.expression())
}

/// Correlator values over the 26 non-identity terms; entries may be absent.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationTensor {
    values: [f64; 27],
    present: u32,
}

impl Default for CorrelationTensor {
    fn default() -> Self {
        Self::empty()
    }
}

impl CorrelationTensor {
    const ALL_PRESENT: u32 = ((1u32 << 27) - 1) & !1;

    pub fn empty() -> Self {
        CorrelationTensor {
            values: [0.0; 27],
            present: 0,
        }
    }

    /// A fully populated tensor from a closure over terms.
    pub fn from_fn(mut f: impl FnMut(Term) -> f64) -> Self {
        let mut out = Self::empty();
        for term in Term::all() {
            out.set(term, f(term));
        }
        out
    }

    /// Correlations of a deterministic strategy; `outcomes[2·party + setting]`
    /// is the ±1 answer.
    pub fn deterministic(outcomes: [i8; 6]) -> Self {
        Self::from_fn(|term| {
            term.slots
                .iter()
                .enumerate()
                .filter_map(|(party, slot)| slot.setting().map(|s| outcomes[2 * party + s] as f64))
                .product()
        })
    }

    pub fn set(&mut self, term: Term, value: f64) {
        assert!(!term.is_identity(), "identity has no correlator");
        self.values[term.index()] = value;
        self.present |= 1 << term.index();
    }

    pub fn get(&self, term: Term) -> Option<f64> {
        (self.present & (1 << term.index()) != 0).then(|| self.values[term.index()])
    }

    pub fn is_complete(&self) -> bool {
        self.present == Self::ALL_PRESENT
    }

    /// Present entries as `(term, value)` pairs in index order.
    pub fn entries(&self) -> Vec<(Term, f64)> {
        Term::all()
            .filter_map(|t| self.get(t).map(|v| (t, v)))
            .collect()
    }
}
