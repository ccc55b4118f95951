//! The Jordan-type non-associative product with a kappa correction:
//! `a * b = (ab + ba)/2 + kappa(a,b) 1`, with `kappa` a finite bilinear table
//! that is not symmetric. Includes the two-condition center (as a certified
//! superset on a truncation), flexibility and left-multiplication probes, and
//! the bracketing-aware growth harness.

use std::collections::BTreeMap;

use crate::algebra::Presentation;
use crate::error::{Error, Result};
use crate::growth::GrowthTable;
use crate::linalg::{nullspace, IncrementalSpan, SparseVec};
use crate::scalars::Scalar;
use crate::{Element, Monomial};

/// Finite bilinear form on canonical monomials, extended bilinearly to
/// elements. Entries absent from the table are zero.
#[derive(Debug, Clone)]
pub struct KappaForm {
    table: BTreeMap<(Monomial, Monomial), Scalar>,
}

impl KappaForm {
    pub fn zero() -> Self {
        KappaForm { table: BTreeMap::new() }
    }

    pub fn from_table(entries: Vec<(Monomial, Monomial, Scalar)>) -> Self {
        let table = entries.into_iter().map(|(a, b, v)| ((a, b), v)).collect();
        KappaForm { table }
    }

    /// Default generator: on the seed set (the unit together with the
    /// presentation's distinguished generator monomials), kappa(M1, M2) is +1
    /// when M1 precedes M2 in the canonical monomial order and -1 when it
    /// follows; everything else is 0. Antisymmetric on the seed, hence not
    /// symmetric.
    pub fn default_for(p: &Presentation) -> Self {
        let mut seed: Vec<Monomial> = vec![p.unit_monomial()];
        for (_, g) in p.generators() {
            for (m, _) in g.terms() {
                if !seed.contains(m) {
                    seed.push(m.clone());
                }
            }
        }
        seed.sort();
        let tower = p.tower();
        let mut table = BTreeMap::new();
        for (i, a) in seed.iter().enumerate() {
            for (j, b) in seed.iter().enumerate() {
                if i < j {
                    table.insert((a.clone(), b.clone()), tower.one());
                } else if i > j {
                    table.insert((a.clone(), b.clone()), tower.from_int(-1));
                }
            }
        }
        KappaForm { table }
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }

    pub fn eval(&self, p: &Presentation, a: &Element, b: &Element) -> Scalar {
        let tower = p.tower();
        let mut acc = tower.zero();
        if self.table.is_empty() {
            return acc;
        }
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                if let Some(v) = self.table.get(&(ma.clone(), mb.clone())) {
                    acc = tower.add(&acc, &tower.mul(&tower.mul(ca, cb), v));
                }
            }
        }
        acc
    }
}

/// Bracketing policy for the non-associative growth harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bracketing {
    /// Faithful non-associative filtration over all bracket shapes.
    All,
    /// Left-normed products only; a cheap lower bound.
    LeftNormed,
}

/// Non-associative algebra: an associative presentation with a kappa form.
#[derive(Debug, Clone)]
pub struct NAAlgebra {
    pres: Presentation,
    kappa: KappaForm,
}

impl NAAlgebra {
    pub fn new(pres: Presentation, kappa: KappaForm) -> Self {
        NAAlgebra { pres, kappa }
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn kappa(&self) -> &KappaForm {
        &self.kappa
    }

    /// `a * b = (ab + ba)/2 + kappa(a,b) 1`.
    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        let p = &self.pres;
        let tower = p.tower();
        let ab = p.multiply(a, b)?;
        let ba = p.multiply(b, a)?;
        let half = tower.ratio(1, 2);
        let sym = p.scale(&p.add(&ab, &ba)?, &half);
        let k = self.kappa.eval(p, a, b);
        p.add(&sym, &p.scalar_element(k))
    }

    /// Candidate monomials of degree at most `d`.
    fn candidates(&self, d: u64, cap: usize) -> Result<Vec<Element>> {
        let tower = self.pres.tower();
        self.pres
            .monomials_up_to_degree(d, cap)?
            .into_iter()
            .map(|m| self.pres.monomial_element(m, tower.one()))
            .collect()
    }

    /// Certified superset of the truncated two-condition center.
    ///
    /// Both center conditions are linear in z, so each imposed (n, m) pair
    /// only shrinks the solution space: any subset of constraints yields a
    /// superset of the center. An empty result therefore certifies that the
    /// truncated center is {0}. Constraints are imposed in degree order with
    /// early exit once the space is empty; `pair_budget` bounds the
    /// associativity pairs when the space refuses to shrink.
    pub fn na_center_superset(
        &self,
        d_candidates: u64,
        d_tests: u64,
        cap: usize,
        pair_budget: usize,
    ) -> Result<NaCenterResult> {
        let p = &self.pres;
        let tower = p.tower();
        let candidates = self.candidates(d_candidates, cap)?;
        let tests = self.candidates(d_tests, cap)?;
        let ncand = candidates.len();
        let mut rows: IncrementalSpan<usize> = IncrementalSpan::new(tower.clone());
        let mut pairs_imposed = 0usize;
        let mut exhausted = true;

        let add_element_rows =
            |rows: &mut IncrementalSpan<usize>, per_candidate: &[Element]| {
                // rows keyed by target monomial across the candidate axis
                let mut by_target: BTreeMap<Monomial, SparseVec<usize>> = BTreeMap::new();
                for (ci, e) in per_candidate.iter().enumerate() {
                    for (m, c) in e.terms() {
                        by_target.entry(m.clone()).or_default().insert(ci, c.clone());
                    }
                }
                for (_, row) in by_target {
                    rows.insert(row);
                }
            };

        // condition (1): z * n = n * z for every test monomial n. The
        // symmetric Jordan part cancels identically, so
        // z * n - n * z = (kappa(z, n) - kappa(n, z)) * 1
        // and each test contributes one scalar row in the kappa values.
        for n in &tests {
            let mut row: SparseVec<usize> = SparseVec::new();
            for (ci, z) in candidates.iter().enumerate() {
                let k1 = self.kappa.eval(p, z, n);
                let k2 = self.kappa.eval(p, n, z);
                let d = tower.sub(&k1, &k2);
                if !tower.is_zero(&d) {
                    row.insert(ci, d);
                }
            }
            rows.insert(row);
            if rows.rank() == ncand {
                break;
            }
        }

        // condition (2): (z * n) * m = z * (n * m) over test pairs
        if rows.rank() < ncand {
            'pairs: for n in &tests {
                for m in &tests {
                    if pairs_imposed >= pair_budget {
                        exhausted = false;
                        break 'pairs;
                    }
                    pairs_imposed += 1;
                    let nm = self.multiply(n, m)?;
                    let per: Result<Vec<Element>> = candidates
                        .iter()
                        .map(|z| {
                            let zn = self.multiply(z, n)?;
                            let lhs = self.multiply(&zn, m)?;
                            let rhs = self.multiply(z, &nm)?;
                            p.sub(&lhs, &rhs)
                        })
                        .collect();
                    add_element_rows(&mut rows, &per?);
                    if rows.rank() == ncand {
                        break 'pairs;
                    }
                }
            }
        }

        let kernel = if rows.rank() == ncand {
            Vec::new()
        } else {
            let row_vecs: Vec<SparseVec<usize>> = rows.rows().cloned().collect();
            nullspace(tower, &row_vecs, ncand)
        };
        let mut basis = Vec::new();
        for vec in kernel {
            let mut z = p.zero_element();
            for (ci, coeff) in vec.iter().enumerate() {
                if !tower.is_zero(coeff) {
                    z = p.add(&z, &p.scale(&candidates[ci], coeff))?;
                }
            }
            if !z.is_zero() {
                basis.push(z);
            }
        }
        Ok(NaCenterResult {
            candidate_degree: d_candidates,
            test_degree: d_tests,
            candidates: ncand,
            basis,
            pairs_imposed,
            constraints_exhausted: exhausted,
        })
    }

    /// Evaluate the flexibility identity `(a*b)*a = a*(b*a)` on all monomial
    /// pairs up to the sample degree and report every nonzero witness.
    pub fn flexibility_report(&self, sample_degree: u64, cap: usize) -> Result<FlexibilityReport> {
        let p = &self.pres;
        let monos = self.candidates(sample_degree, cap)?;
        let mut witnesses = Vec::new();
        let mut checked = 0usize;
        for a in &monos {
            for b in &monos {
                checked += 1;
                let ab = self.multiply(a, b)?;
                let lhs = self.multiply(&ab, a)?;
                let ba = self.multiply(b, a)?;
                let rhs = self.multiply(a, &ba)?;
                let diff = p.sub(&lhs, &rhs)?;
                if !diff.is_zero() {
                    witnesses.push(FlexibilityWitness {
                        a: p.render_element(a),
                        b: p.render_element(b),
                        associator_gap: p.render_element(&diff),
                    });
                }
            }
        }
        Ok(FlexibilityReport { pairs_checked: checked, witnesses })
    }

    /// Rank probe of v -> u * v on the degree-<= d truncation.
    pub fn left_mult_injectivity(
        &self,
        u: &Element,
        d: u64,
        cap: usize,
    ) -> Result<InjectivityVerdict> {
        if u.is_zero() {
            return Err(Error::Validation {
                path: "u".into(),
                message: "left multiplication operand must be nonzero".into(),
            });
        }
        let p = &self.pres;
        let tower = p.tower();
        let candidates = self.candidates(d, cap)?;
        let ncand = candidates.len();
        let mut by_target: BTreeMap<Monomial, SparseVec<usize>> = BTreeMap::new();
        for (ci, v) in candidates.iter().enumerate() {
            let image = self.multiply(u, v)?;
            for (m, c) in image.terms() {
                by_target.entry(m.clone()).or_default().insert(ci, c.clone());
            }
        }
        let rows: Vec<SparseVec<usize>> = by_target.into_values().collect();
        let kernel = nullspace(tower, &rows, ncand);
        let mut kernel_witness = None;
        if let Some(vec) = kernel.first() {
            let mut z = p.zero_element();
            for (ci, coeff) in vec.iter().enumerate() {
                if !tower.is_zero(coeff) {
                    z = p.add(&z, &p.scale(&candidates[ci], coeff))?;
                }
            }
            kernel_witness = Some(z);
        }
        Ok(InjectivityVerdict {
            degree: d,
            candidates: ncand,
            rank: ncand - kernel.len(),
            injective_on_truncation: kernel.is_empty(),
            kernel_witness,
        })
    }

    /// Span dimensions of all star-products of at most n factors from V under
    /// the chosen bracketing policy.
    pub fn na_growth_table(
        &self,
        v: &[Element],
        n_max: usize,
        bracketing: Bracketing,
        cap: usize,
    ) -> Result<GrowthTable> {
        if bracketing == Bracketing::All && n_max > 6 {
            return Err(Error::Validation {
                path: "n_max".into(),
                message: "all-bracketings harness is resource-guarded to n_max <= 6".into(),
            });
        }
        let p = &self.pres;
        let v = crate::growth::normalize_subspace(p, v)?;
        let mut cumulative: IncrementalSpan<Monomial> = IncrementalSpan::new(p.tower().clone());
        let mut dims = Vec::with_capacity(n_max);
        let mut truncated = false;

        // layer bases: independent spanning sets of each P_k
        let mut layers: Vec<Vec<Element>> = Vec::new();
        let mut layer1 = Vec::new();
        {
            let mut span1: IncrementalSpan<Monomial> = IncrementalSpan::new(p.tower().clone());
            for e in &v {
                let red = span1.reduce(e.terms.clone());
                if !red.is_empty() {
                    layer1.push(Element { pres: e.pres, terms: red.clone() });
                    span1.insert(red);
                }
            }
        }
        for e in &layer1 {
            cumulative.insert(e.terms.clone());
        }
        dims.push(cumulative.rank());
        layers.push(layer1);

        'outer: for k in 2..=n_max {
            let mut span_k: IncrementalSpan<Monomial> = IncrementalSpan::new(p.tower().clone());
            let mut layer_k = Vec::new();
            let combos: Vec<(usize, usize)> = match bracketing {
                Bracketing::All => (1..k).map(|i| (i, k - i)).collect(),
                Bracketing::LeftNormed => vec![(k - 1, 1)],
            };
            for (i, j) in combos {
                for a in &layers[i - 1] {
                    for b in &layers[j - 1] {
                        let prod = self.multiply(a, b)?;
                        if cumulative.total_terms() + prod.num_terms() > cap {
                            truncated = true;
                            break 'outer;
                        }
                        let red = span_k.reduce(prod.terms.clone());
                        if !red.is_empty() {
                            layer_k.push(Element { pres: prod.pres, terms: red.clone() });
                            span_k.insert(red);
                        }
                        cumulative.insert(prod.terms);
                    }
                }
            }
            dims.push(cumulative.rank());
            layers.push(layer_k);
        }
        Ok(GrowthTable { dims, n_max, truncated, fingerprint: 0 })
    }
}

#[derive(Debug, Clone)]
pub struct NaCenterResult {
    pub candidate_degree: u64,
    pub test_degree: u64,
    pub candidates: usize,
    /// Basis of the computed superset; empty certifies a trivial truncated center.
    pub basis: Vec<Element>,
    pub pairs_imposed: usize,
    /// False when the pair budget stopped constraint generation early.
    pub constraints_exhausted: bool,
}

impl NaCenterResult {
    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct FlexibilityWitness {
    pub a: String,
    pub b: String,
    pub associator_gap: String,
}

#[derive(Debug, Clone)]
pub struct FlexibilityReport {
    pub pairs_checked: usize,
    pub witnesses: Vec<FlexibilityWitness>,
}

#[derive(Debug, Clone)]
pub struct InjectivityVerdict {
    pub degree: u64,
    pub candidates: usize,
    pub rank: usize,
    pub injective_on_truncation: bool,
    pub kernel_witness: Option<Element>,
}
