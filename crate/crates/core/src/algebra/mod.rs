//! Canonical-form arithmetic for the two presentation kinds: the builtin
//! Weyl-hyperbolic family (closed-form commutation rules) and generic PBW
//! presentations (ordered generators with confluent swap/reduction rewriting).

mod confluence;
mod pbw;
mod weyl;

pub use confluence::{check_local_confluence, ConfluenceReport, ConfluenceWitness};
pub use pbw::{ore_extend, tensor_product, PbwPresentation, RawRule, Word};
pub use weyl::{HyperMode, WeylMonomial, WeylPresentation};

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use crate::error::{Error, Result};
use crate::scalars::{Scalar, Tower};

/// Generator index within a PBW presentation; the generator order is the
/// index order.
pub type GenId = u16;

static NEXT_PRESENTATION_ID: AtomicU64 = AtomicU64::new(1);

pub(crate) fn fresh_presentation_id() -> u64 {
    NEXT_PRESENTATION_ID.fetch_add(1, AtomicOrdering::Relaxed)
}

/// A basis monomial of either presentation kind.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Monomial {
    Word(Word),
    Weyl(WeylMonomial),
}

impl Monomial {
    pub fn degree(&self) -> u64 {
        match self {
            Monomial::Word(w) => w.len() as u64,
            Monomial::Weyl(m) => m.degree(),
        }
    }

    pub fn is_unit(&self) -> bool {
        self.degree() == 0
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    /// Degree-graded order; within a degree, words compare lexicographically
    /// (this is the deglex order the termination check relies on).
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree().cmp(&other.degree()).then_with(|| match (self, other) {
            (Monomial::Word(a), Monomial::Word(b)) => a.cmp(b),
            (Monomial::Weyl(a), Monomial::Weyl(b)) => a.cmp(b),
            (Monomial::Word(_), Monomial::Weyl(_)) => std::cmp::Ordering::Less,
            (Monomial::Weyl(_), Monomial::Word(_)) => std::cmp::Ordering::Greater,
        })
    }
}

/// Finite scalar-weighted sum of canonical monomials; zero coefficients are
/// never stored, so structural equality decides element equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub(crate) pres: u64,
    pub(crate) terms: BTreeMap<Monomial, Scalar>,
}

impl Element {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn degree(&self) -> u64 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Coefficient of the unit monomial, if the element is a pure scalar.
    pub fn as_scalar(&self, p: &Presentation) -> Option<Scalar> {
        if self.terms.is_empty() {
            return Some(p.tower().zero());
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.is_unit() {
                return Some(c.clone());
            }
        }
        None
    }
}

/// A finitely presented algebra: either the builtin Weyl-hyperbolic family or
/// a generic PBW presentation. Immutable once constructed.
#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)] // presentations are cloned rarely and never stored in bulk
pub enum Presentation {
    Pbw(PbwPresentation),
    Weyl(WeylPresentation),
}

impl Presentation {
    pub fn id(&self) -> u64 {
        match self {
            Presentation::Pbw(p) => p.id(),
            Presentation::Weyl(p) => p.id(),
        }
    }

    pub fn tower(&self) -> &Tower {
        match self {
            Presentation::Pbw(p) => p.tower(),
            Presentation::Weyl(p) => p.tower(),
        }
    }

    fn check_same(&self, a: &Element, b: &Element) -> Result<()> {
        if a.pres != self.id() || b.pres != self.id() {
            return Err(Error::MixedPresentations);
        }
        Ok(())
    }

    pub fn check_owned(&self, a: &Element) -> Result<()> {
        if a.pres != self.id() {
            return Err(Error::MixedPresentations);
        }
        Ok(())
    }

    // ----- element constructors -----

    pub fn zero_element(&self) -> Element {
        Element { pres: self.id(), terms: BTreeMap::new() }
    }

    pub fn scalar_element(&self, s: Scalar) -> Element {
        let mut e = self.zero_element();
        if !self.tower().is_zero(&s) {
            e.terms.insert(self.unit_monomial(), s);
        }
        e
    }

    pub fn one_element(&self) -> Element {
        self.scalar_element(self.tower().one())
    }

    pub fn unit_monomial(&self) -> Monomial {
        match self {
            Presentation::Pbw(_) => Monomial::Word(Vec::new()),
            Presentation::Weyl(p) => Monomial::Weyl(p.unit_monomial()),
        }
    }

    /// Element with a single canonical monomial (canonicalized for the fiber
    /// specialization if one is active).
    pub fn monomial_element(&self, m: Monomial, coeff: Scalar) -> Result<Element> {
        match (self, &m) {
            (Presentation::Pbw(p), Monomial::Word(w)) => Ok(p.element_from_terms(vec![(w.clone(), coeff)])),
            (Presentation::Weyl(p), Monomial::Weyl(w)) => p.monomial_element(w.clone(), coeff),
            _ => Err(Error::MixedPresentations),
        }
    }

    // ----- linear operations -----

    pub fn add(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check_same(a, b)?;
        let tower = self.tower();
        let mut out = a.clone();
        for (m, c) in &b.terms {
            match out.terms.remove(m) {
                Some(old) => {
                    let s = tower.add(&old, c);
                    if !tower.is_zero(&s) {
                        out.terms.insert(m.clone(), s);
                    }
                }
                None => {
                    out.terms.insert(m.clone(), c.clone());
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Result<Element> {
        self.add(a, &self.scale(b, &self.tower().from_int(-1)))
    }

    pub fn neg(&self, a: &Element) -> Element {
        self.scale(a, &self.tower().from_int(-1))
    }

    pub fn scale(&self, a: &Element, k: &Scalar) -> Element {
        let tower = self.tower();
        if tower.is_zero(k) {
            return self.zero_element();
        }
        let mut out = self.zero_element();
        for (m, c) in &a.terms {
            let s = tower.mul(c, k);
            if !tower.is_zero(&s) {
                out.terms.insert(m.clone(), s);
            }
        }
        out
    }

    // ----- products -----

    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check_same(a, b)?;
        match self {
            Presentation::Pbw(p) => p.multiply(a, b),
            Presentation::Weyl(p) => p.multiply(a, b),
        }
    }

    /// `ab - ba`.
    pub fn commutator(&self, a: &Element, b: &Element) -> Result<Element> {
        let ab = self.multiply(a, b)?;
        let ba = self.multiply(b, a)?;
        self.sub(&ab, &ba)
    }

    // ----- structure -----

    /// Distinguished generators as (name, element) pairs. For PBW
    /// presentations these are the declared generators; for the builtin
    /// family: x^{b_i}, e^{b_i x}, the hyperbolic pair, and the derivatives.
    pub fn generators(&self) -> Vec<(String, Element)> {
        match self {
            Presentation::Pbw(p) => p.generators(),
            Presentation::Weyl(p) => p.generators(),
        }
    }

    /// All canonical monomials of degree at most `d` (with exponent supports
    /// limited to coordinate 1-norm at most `d`), capped.
    pub fn monomials_up_to_degree(&self, d: u64, cap: usize) -> Result<Vec<Monomial>> {
        match self {
            Presentation::Pbw(p) => p.monomials_up_to_degree(d, cap),
            Presentation::Weyl(p) => p.monomials_up_to_degree(d, cap),
        }
    }

    pub fn render_monomial(&self, m: &Monomial) -> String {
        match (self, m) {
            (Presentation::Pbw(p), Monomial::Word(w)) => p.render_word(w),
            (Presentation::Weyl(p), Monomial::Weyl(w)) => p.render_monomial(w),
            _ => "<foreign monomial>".to_string(),
        }
    }

    /// Grammar-compatible rendering: the output reparses to the same element.
    pub fn render_element(&self, e: &Element) -> String {
        if e.is_zero() {
            return "0".to_string();
        }
        let tower = self.tower();
        let mut out = String::new();
        for (i, (m, c)) in e.terms.iter().rev().enumerate() {
            let ms = self.render_monomial(m);
            let cs = tower.render(c);
            let compound = cs.contains('+');
            let (neg, body) = if !compound && cs.starts_with('-') {
                (true, cs[1..].to_string())
            } else {
                (false, cs)
            };
            let body = if compound { format!("({body})") } else { body };
            let part = if ms == "1" {
                body
            } else if body == "1" {
                ms
            } else {
                format!("{body}*{ms}")
            };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&part);
        }
        out
    }

    /// Stable description used in growth-table fingerprints.
    pub fn describe(&self) -> String {
        match self {
            Presentation::Pbw(p) => p.describe(),
            Presentation::Weyl(p) => p.describe(),
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Monomial::Word(w) => write!(f, "word{w:?}"),
            Monomial::Weyl(m) => write!(f, "{m}"),
        }
    }
}

/// Exact binomial coefficient for the small exponents that arise in
/// derivative pushes.
pub(crate) fn binomial(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    u64::try_from(acc).expect("binomial fits in u64 at desk scale")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(6, 6), 1);
        assert_eq!(binomial(3, 5), 0);
    }

    #[test]
    fn monomial_order_is_degree_graded() {
        let a = Monomial::Word(vec![0, 1]);
        let b = Monomial::Word(vec![2]);
        assert!(b < a);
        let c = Monomial::Word(vec![1, 0]);
        assert!(a < c); // same degree, lex on indices
    }
}
