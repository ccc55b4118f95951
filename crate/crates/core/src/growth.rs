//! Exact growth measurement: dim V^n tables for filtered generating
//! subspaces, cyclic-module growth, finite-window GK estimation, and the
//! property report over the shipped presets.
//!
//! The GK estimate is reported as the polynomial degree detected over the
//! computed window (constant finite differences), never as a claimed limit.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use crate::algebra::{PbwPresentation, Presentation, RawRule, Word};
use crate::error::{Error, Result};
use crate::linalg::IncrementalSpan;
use crate::scalars::Scalar;
use crate::Element;
use crate::Monomial;

pub const DEFAULT_N_MAX: usize = 8;
pub const DEFAULT_MONOMIAL_CAP: usize = 1_000_000;

/// Exact dim V^n sequence with provenance metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthTable {
    /// `dims[i]` holds dim V^(i+1).
    pub dims: Vec<usize>,
    pub n_max: usize,
    /// True when the monomial cap stopped the computation early.
    pub truncated: bool,
    /// Hash of the presentation description and subspace rendering.
    pub fingerprint: u64,
}

impl GrowthTable {
    pub fn csv(&self) -> String {
        let mut out = String::from("n,dim\n");
        for (i, d) in self.dims.iter().enumerate() {
            out.push_str(&format!("{},{}\n", i + 1, d));
        }
        out
    }
}

/// Normalize a generating subspace: drop zero elements and adjoin the unit.
pub fn normalize_subspace(p: &Presentation, v: &[Element]) -> Result<Vec<Element>> {
    let mut out = Vec::new();
    let one = p.one_element();
    let mut has_one = false;
    for e in v {
        p.check_owned(e)?;
        if e.is_zero() {
            continue;
        }
        if *e == one {
            has_one = true;
        }
        out.push(e.clone());
    }
    if !has_one {
        out.push(one);
    }
    if out.is_empty() {
        return Err(Error::Validation {
            path: "subspace".into(),
            message: "generating subspace must be nonempty".into(),
        });
    }
    Ok(out)
}

fn subspace_fingerprint(p: &Presentation, v: &[Element]) -> u64 {
    let mut h = DefaultHasher::new();
    p.describe().hash(&mut h);
    for e in v {
        p.render_element(e).hash(&mut h);
    }
    h.finish()
}

/// dim V^n for n = 1..n_max, computed as the rank of the reduced elements
/// over the canonical monomials they touch. V^n = span(V^{n-1} + V^{n-1} V);
/// only the newly independent directions of each step are multiplied again.
pub fn growth_table(
    p: &Presentation,
    v: &[Element],
    n_max: usize,
    cap: usize,
) -> Result<GrowthTable> {
    if n_max < 1 {
        return Err(Error::Validation {
            path: "n_max".into(),
            message: "n_max must be >= 1".into(),
        });
    }
    let v = normalize_subspace(p, v)?;
    let fingerprint = subspace_fingerprint(p, &v);
    let mut span: IncrementalSpan<Monomial> = IncrementalSpan::new(p.tower().clone());
    let mut frontier: Vec<Element> = Vec::new();
    let mut dims = Vec::with_capacity(n_max);
    let mut truncated = false;

    // step 1: the subspace itself
    for e in &v {
        let vec = e.terms.clone();
        let red = span.reduce(vec);
        if !red.is_empty() {
            frontier.push(Element { pres: e.pres, terms: red.clone() });
            span.insert(red);
        }
    }
    dims.push(span.rank());

    'outer: for _n in 2..=n_max {
        let mut next_frontier = Vec::new();
        for f in &frontier {
            for gen in &v {
                if gen.num_terms() == 1 && gen.terms.keys().next().map(|m| m.is_unit()) == Some(true)
                {
                    continue; // multiplying by the unit adds nothing
                }
                let prod = p.multiply(f, gen)?;
                if span.total_terms() + prod.num_terms() > cap {
                    truncated = true;
                    break 'outer;
                }
                let red = span.reduce(prod.terms);
                if !red.is_empty() {
                    next_frontier.push(Element { pres: f.pres, terms: red.clone() });
                    span.insert(red);
                }
            }
        }
        dims.push(span.rank());
        frontier = next_frontier;
        if frontier.is_empty() {
            // growth saturated; remaining dims are constant
            while dims.len() < n_max {
                let last = *dims.last().unwrap();
                dims.push(last);
            }
            break;
        }
    }

    Ok(GrowthTable { dims, n_max, truncated, fingerprint })
}

/// Growth of a cyclic module presented as the base algebra with extra
/// confluence-checked reduction rules. A rule with empty left-hand side and
/// zero right-hand side marks the zero module A/A.
pub fn module_growth_table(
    base: &PbwPresentation,
    module_rules: Vec<RawRule>,
    v_words: &[Vec<(Word, Scalar)>],
    n_max: usize,
    cap: usize,
) -> Result<(GrowthTable, bool)> {
    if module_rules.iter().any(|r| r.lhs.is_empty() && r.rhs.is_empty()) {
        // degenerate zero module
        return Ok((
            GrowthTable { dims: vec![0; n_max], n_max, truncated: false, fingerprint: 0 },
            true,
        ));
    }
    let mut rules = base.rules().to_vec();
    rules.extend(module_rules);
    let quotient = PbwPresentation::new(
        base.tower().clone(),
        base.generator_names().to_vec(),
        rules,
        base.confluence_asserted(),
    )?;
    let v: Vec<Element> = v_words
        .iter()
        .map(|terms| quotient.element_from_terms(terms.clone()))
        .collect();
    let p = Presentation::Pbw(quotient);
    let table = growth_table(&p, &v, n_max, cap)?;
    Ok((table, false))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimateMethod {
    FiniteDifference,
    LogRatio,
}

/// Result of a GK estimation over a finite window.
#[derive(Debug, Clone, PartialEq)]
pub struct GkEstimate {
    pub method: EstimateMethod,
    /// Detected polynomial degree (finite-difference method, when stabilized).
    pub degree: Option<u64>,
    /// log dim V^{n_max} / log n_max, as a diagnostic value.
    pub log_ratio: f64,
    /// True when the detected degree's difference sequence is constant over
    /// the whole observed window.
    pub exact: bool,
    pub stabilized: bool,
}

/// Difference sequences Delta^0, Delta^1, ... of the dimension table.
pub fn finite_differences(dims: &[usize]) -> Vec<Vec<i64>> {
    let mut seqs = vec![dims.iter().map(|&d| d as i64).collect::<Vec<_>>()];
    while let Some(last) = seqs.last() {
        if last.len() < 2 {
            break;
        }
        let next: Vec<i64> = last.windows(2).map(|w| w[1] - w[0]).collect();
        seqs.push(next);
    }
    seqs
}

pub fn gk_estimate(table: &GrowthTable, method: EstimateMethod) -> Result<GkEstimate> {
    let dims = &table.dims;
    let n = dims.len();
    let log_ratio = if n >= 1 && dims[n - 1] >= 1 {
        (dims[n - 1] as f64).ln() / ((n as f64).ln().max(f64::MIN_POSITIVE))
    } else {
        0.0
    };
    match method {
        EstimateMethod::LogRatio => Ok(GkEstimate {
            method,
            degree: None,
            log_ratio,
            exact: false,
            stabilized: false,
        }),
        EstimateMethod::FiniteDifference => {
            if n < 4 {
                return Err(Error::Validation {
                    path: "table".into(),
                    message: "finite-difference estimation needs at least 4 entries".into(),
                });
            }
            let seqs = finite_differences(dims);
            for (k, seq) in seqs.iter().enumerate() {
                if seq.len() >= 2 && seq.windows(2).all(|w| w[0] == w[1]) {
                    // all-zero difference sequence means the true degree is lower
                    let degree = if seq.iter().all(|&x| x == 0) && k > 0 { k - 1 } else { k };
                    return Ok(GkEstimate {
                        method,
                        degree: Some(degree as u64),
                        log_ratio,
                        exact: true,
                        stabilized: true,
                    });
                }
            }
            Ok(GkEstimate { method, degree: None, log_ratio, exact: false, stabilized: false })
        }
    }
}

/// One measured property with its verdict.
#[derive(Debug, Clone)]
pub struct PropertyLine {
    pub property: String,
    pub detail: String,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct PropertyReport {
    pub lines: Vec<PropertyLine>,
}

impl PropertyReport {
    pub fn all_pass(&self) -> bool {
        self.lines.iter().all(|l| l.pass)
    }
}

fn detected_degree(p: &Presentation, v: &[Element], n_max: usize, cap: usize) -> Result<u64> {
    let t = growth_table(p, v, n_max, cap)?;
    let est = gk_estimate(&t, EstimateMethod::FiniteDifference)?;
    est.degree.ok_or_else(|| Error::Validation {
        path: "estimate".into(),
        message: "growth did not stabilize over the window".into(),
    })
}

/// Measured property suite over the shipped presets: one line per property
/// with the quantities observed and a pass/fail verdict.
pub fn gk_property_report(presets: &crate::presets::Presets, n_max: usize, cap: usize) -> Result<PropertyReport> {
    let mut lines = Vec::new();

    // invariance: two generating subspaces of the same algebra detect the
    // same polynomial degree
    {
        let so3 = presets.presentation("so3")?;
        let v1 = presets.subspace("so3", "default")?;
        let v2 = presets.subspace("so3", "v2")?;
        let d1 = detected_degree(so3, &v1, n_max, cap)?;
        let d2 = detected_degree(so3, &v2, n_max, cap)?;
        lines.push(PropertyLine {
            property: "invariance".into(),
            detail: format!("so3 with V1 -> degree {d1}, with V2 -> degree {d2}"),
            pass: d1 == d2,
        });
    }

    // subalgebra bound: the subalgebra generated by x inside so3 grows no
    // faster than so3 itself
    {
        let so3 = presets.presentation("so3")?;
        let full = presets.subspace("so3", "default")?;
        let x = full[1].clone();
        let sub = vec![so3.one_element(), x];
        let db = detected_degree(so3, &sub, n_max, cap)?;
        let da = detected_degree(so3, &full, n_max, cap)?;
        lines.push(PropertyLine {
            property: "subalgebra".into(),
            detail: format!("degree(<x>) = {db} <= degree(so3) = {da}"),
            pass: db <= da,
        });
    }

    // additivity under tensor products
    {
        let d = tensor_degree(presets, "poly1", "poly2", n_max, cap)?;
        let d1 = preset_degree(presets, "poly1", n_max, cap)?;
        let d2 = preset_degree(presets, "poly2", n_max, cap)?;
        lines.push(PropertyLine {
            property: "additivity".into(),
            detail: format!("poly1 (x) poly2 -> {d} vs {d1} + {d2}"),
            pass: d == d1 + d2,
        });
        let d = tensor_degree(presets, "weyl", "weyl", n_max, cap)?;
        let dw = preset_degree(presets, "weyl", n_max, cap)?;
        lines.push(PropertyLine {
            property: "additivity".into(),
            detail: format!("weyl (x) weyl -> {d} vs {dw} + {dw}"),
            pass: d == 2 * dw,
        });
    }

    // module bound: a cyclic module grows no faster than the algebra
    {
        let (base, rules) = presets.module_view("module-x2y2")?;
        let v_words: Vec<Vec<(Word, crate::scalars::Scalar)>> = {
            let t = base.tower();
            vec![
                vec![(Vec::new(), t.one())],
                vec![(vec![0], t.one())],
                vec![(vec![1], t.one())],
            ]
        };
        let (table, _) = module_growth_table(&base, rules, &v_words, n_max.max(4), cap)?;
        let est = gk_estimate(&table, EstimateMethod::FiniteDifference)?;
        let dm = est.degree.unwrap_or(0);
        let da = preset_degree(presets, "poly2", n_max, cap)?;
        lines.push(PropertyLine {
            property: "module-bound".into(),
            detail: format!("degree(module-x2y2) = {dm} <= degree(algebra) = {da}"),
            pass: dm <= da,
        });
    }

    // dichotomy: stabilized estimates avoid the open interval (1, 2)
    {
        let growth_presets = [
            "poly1",
            "poly2",
            "poly3",
            "weyl",
            "so3",
            "sphere-quotient",
            "solvable2",
            "ore-paper",
            "weyltype-r1",
            "weyltype-r2-sqrt2",
        ];
        let mut all_ok = true;
        let mut observed = Vec::new();
        for name in growth_presets {
            let d = preset_degree(presets, name, n_max, cap)?;
            observed.push(format!("{name}={d}"));
            if d != 0 && d != 1 && d < 2 {
                all_ok = false;
            }
        }
        lines.push(PropertyLine {
            property: "dichotomy".into(),
            detail: observed.join(", "),
            pass: all_ok,
        });
    }

    // extension subadditivity: B = sphere quotient of A = so3, with the ideal
    // free of rank one over A (generated by a central nonzerodivisor), so its
    // module growth equals the growth of A
    {
        let db = preset_degree(presets, "sphere-quotient", n_max, cap)?;
        let da = preset_degree(presets, "so3", n_max, cap)?;
        let di = da; // ideal is isomorphic to A as a module
        lines.push(PropertyLine {
            property: "subadditivity".into(),
            detail: format!("{db} <= {da} <= {di} + {db}"),
            pass: db <= da && da <= di + db,
        });
    }

    // Ore extension adds exactly one
    {
        let dore = preset_degree(presets, "ore-paper", n_max, cap)?;
        let dbase = preset_degree(presets, "solvable2", n_max, cap)?;
        lines.push(PropertyLine {
            property: "ore".into(),
            detail: format!("degree(ore-paper) = {dore} vs degree(solvable2) + 1 = {}", dbase + 1),
            pass: dore == dbase + 1,
        });
    }

    Ok(PropertyReport { lines })
}

fn preset_degree(
    presets: &crate::presets::Presets,
    name: &str,
    n_max: usize,
    cap: usize,
) -> Result<u64> {
    let p = presets.presentation(name)?;
    let v = presets.subspace(name, "default")?;
    detected_degree(p, &v, n_max, cap)
}

fn tensor_degree(
    presets: &crate::presets::Presets,
    a: &str,
    b: &str,
    n_max: usize,
    cap: usize,
) -> Result<u64> {
    let Presentation::Pbw(pa) = presets.presentation(a)? else {
        return Err(Error::Unsupported("tensor property needs pbw presets".into()));
    };
    let Presentation::Pbw(pb) = presets.presentation(b)? else {
        return Err(Error::Unsupported("tensor property needs pbw presets".into()));
    };
    let t = crate::algebra::tensor_product(pa, pb)?;
    let p = Presentation::Pbw(t);
    let mut v = vec![p.one_element()];
    v.extend(p.generators().into_iter().map(|(_, e)| e));
    detected_degree(&p, &v, n_max, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{GenId, PbwPresentation, RawRule};
    use crate::scalars::Tower;

    fn poly(names: &[&str]) -> Presentation {
        let tower = Tower::rationals();
        let n = names.len();
        let mut rules = Vec::new();
        for j in 0..n {
            for i in 0..j {
                rules.push(RawRule {
                    lhs: vec![j as GenId, i as GenId],
                    rhs: vec![(vec![i as GenId, j as GenId], tower.one())],
                });
            }
        }
        Presentation::Pbw(
            PbwPresentation::new(tower, names.iter().map(|s| s.to_string()).collect(), rules, true)
                .unwrap(),
        )
    }

    fn gens(p: &Presentation) -> Vec<Element> {
        let mut v = vec![p.one_element()];
        v.extend(p.generators().into_iter().map(|(_, e)| e));
        v
    }

    fn binom(n: usize, k: usize) -> usize {
        let mut acc: u128 = 1;
        for i in 0..k {
            acc = acc * (n - i) as u128 / (i + 1) as u128;
        }
        acc as usize
    }

    #[test]
    fn polynomial_growth_matches_binomials() {
        let p = poly(&["x", "y", "z"]);
        let v = gens(&p);
        let t = growth_table(&p, &v, 6, DEFAULT_MONOMIAL_CAP).unwrap();
        let expect: Vec<usize> = (1..=6).map(|n| binom(n + 3, 3)).collect();
        assert_eq!(t.dims, expect);
        assert!(!t.truncated);
        // dims are nondecreasing and below the crude words-count bound
        let mut words_bound = 0usize;
        let mut pow = 1usize;
        for (i, d) in t.dims.iter().enumerate() {
            pow *= v.len();
            words_bound += pow;
            assert!(*d <= words_bound + 1);
            if i > 0 {
                assert!(t.dims[i - 1] <= *d);
            }
        }
    }

    #[test]
    fn saturating_growth_pads_table() {
        // Q[x]/(x^2): growth saturates at dimension 2
        let tower = Tower::rationals();
        let rules = vec![RawRule { lhs: vec![0, 0], rhs: vec![] }];
        let p = Presentation::Pbw(
            PbwPresentation::new(tower, vec!["x".into()], rules, true).unwrap(),
        );
        let v = gens(&p);
        let t = growth_table(&p, &v, 5, DEFAULT_MONOMIAL_CAP).unwrap();
        assert_eq!(t.dims, vec![2, 2, 2, 2, 2]);
        let est = gk_estimate(&t, EstimateMethod::FiniteDifference).unwrap();
        assert_eq!(est.degree, Some(0));
        assert!(est.exact);
    }

    #[test]
    fn module_growth_x2y2() {
        // commutative Q[y, x] (order y < x so x^2 -> -y^2 decreases deglex)
        let tower = Tower::rationals();
        let swap = RawRule {
            lhs: vec![1, 0],
            rhs: vec![(vec![0, 1], tower.one())],
        };
        let base = PbwPresentation::new(
            tower.clone(),
            vec!["y".into(), "x".into()],
            vec![swap],
            true,
        )
        .unwrap();
        let module_rule = RawRule {
            lhs: vec![1, 1],
            rhs: vec![(vec![0, 0], tower.from_int(-1))],
        };
        let v: Vec<Vec<(Word, Scalar)>> = vec![
            vec![(Vec::new(), tower.one())],
            vec![(vec![0], tower.one())],
            vec![(vec![1], tower.one())],
        ];
        let (t, degenerate) =
            module_growth_table(&base, vec![module_rule], &v, 12, DEFAULT_MONOMIAL_CAP).unwrap();
        assert!(!degenerate);
        let expect: Vec<usize> = (1..=12).map(|n| 2 * n + 1).collect();
        assert_eq!(t.dims, expect);
        let est = gk_estimate(&t, EstimateMethod::FiniteDifference).unwrap();
        assert_eq!(est.degree, Some(1));
    }

    #[test]
    fn zero_module_flagged_degenerate() {
        let base = match poly(&["x"]) {
            Presentation::Pbw(p) => p,
            _ => unreachable!(),
        };
        let marker = RawRule { lhs: Vec::new(), rhs: Vec::new() };
        let (t, degenerate) =
            module_growth_table(&base, vec![marker], &[], 4, DEFAULT_MONOMIAL_CAP).unwrap();
        assert!(degenerate);
        assert_eq!(t.dims, vec![0, 0, 0, 0]);
    }

    #[test]
    fn estimates_for_known_shapes() {
        let constant = GrowthTable { dims: vec![1, 1, 1, 1, 1], n_max: 5, truncated: false, fingerprint: 0 };
        let est = gk_estimate(&constant, EstimateMethod::FiniteDifference).unwrap();
        assert_eq!(est.degree, Some(0));

        let linear = GrowthTable { dims: (1..=8).map(|n| n + 1).collect(), n_max: 8, truncated: false, fingerprint: 0 };
        let est = gk_estimate(&linear, EstimateMethod::FiniteDifference).unwrap();
        assert_eq!(est.degree, Some(1));

        let cubic = GrowthTable {
            dims: (1..=8).map(|n| binom(n + 3, 3)).collect(),
            n_max: 8,
            truncated: false,
            fingerprint: 0,
        };
        let est = gk_estimate(&cubic, EstimateMethod::FiniteDifference).unwrap();
        assert_eq!(est.degree, Some(3));
        assert!(est.exact);

        // exponential growth never stabilizes
        let expo = GrowthTable { dims: vec![1, 2, 4, 8, 16, 32], n_max: 6, truncated: false, fingerprint: 0 };
        let est = gk_estimate(&expo, EstimateMethod::FiniteDifference).unwrap();
        assert_eq!(est.degree, None);
        assert!(!est.stabilized);
    }

    #[test]
    fn cap_truncates_with_marker() {
        let p = poly(&["x", "y", "z"]);
        let v = gens(&p);
        let t = growth_table(&p, &v, 8, 30).unwrap();
        assert!(t.truncated);
        assert!(t.dims.len() < 8);
    }

    /// The same algebra through both engines: the builtin family restricted
    /// to {1, x, dx} and the two-generator PBW presentation must produce
    /// identical growth tables.
    #[test]
    fn builtin_and_pbw_weyl_growth_agree() {
        use crate::algebra::{HyperMode, WeylPresentation};
        use crate::exponents::{ExponentModule, ExponentVec};

        let tower = Tower::rationals();
        let module = ExponentModule::integers(&tower);
        let z = tower.zero();
        let builtin = Presentation::Weyl(
            WeylPresentation::new(
                tower.clone(),
                module,
                HyperMode::Central,
                ExponentVec(vec![1]),
                z.clone(),
                z,
            )
            .unwrap(),
        );
        let wb = match &builtin {
            Presentation::Weyl(w) => w,
            _ => unreachable!(),
        };
        let v_builtin = vec![
            builtin.one_element(),
            wb.x_power(ExponentVec(vec![1])).unwrap(),
            wb.dx().unwrap(),
        ];
        let t_builtin = growth_table(&builtin, &v_builtin, 8, DEFAULT_MONOMIAL_CAP).unwrap();

        let rules = vec![RawRule {
            lhs: vec![1, 0],
            rhs: vec![(vec![0, 1], tower.one()), (Vec::new(), tower.one())],
        }];
        let pbw = Presentation::Pbw(
            PbwPresentation::new(tower, vec!["x".into(), "d".into()], rules, true).unwrap(),
        );
        let v_pbw = gens(&pbw);
        let t_pbw = growth_table(&pbw, &v_pbw, 8, DEFAULT_MONOMIAL_CAP).unwrap();

        assert_eq!(t_builtin.dims, t_pbw.dims);
        let expect: Vec<usize> = (1..=8).map(|n| binom(n + 2, 2)).collect();
        assert_eq!(t_builtin.dims, expect);
    }

    #[test]
    fn mixed_presentations_error() {
        let p1 = poly(&["x"]);
        let p2 = poly(&["x"]);
        let a = p1.generators()[0].1.clone();
        let b = p2.generators()[0].1.clone();
        match p1.multiply(&a, &b) {
            Err(crate::error::Error::MixedPresentations) => {}
            other => panic!("expected mixed-presentation rejection, got {other:?}"),
        }
    }

    #[test]
    fn invariance_under_changed_subspace() {
        let p = poly(&["x", "y"]);
        let g = p.generators();
        let x = &g[0].1;
        let y = &g[1].1;
        let v1 = vec![p.one_element(), x.clone(), y.clone()];
        let xy = p.add(x, y).unwrap();
        let xmy = p.sub(x, y).unwrap();
        let v2 = vec![p.one_element(), xy, xmy];
        let t1 = growth_table(&p, &v1, 8, DEFAULT_MONOMIAL_CAP).unwrap();
        let t2 = growth_table(&p, &v2, 8, DEFAULT_MONOMIAL_CAP).unwrap();
        let e1 = gk_estimate(&t1, EstimateMethod::FiniteDifference).unwrap();
        let e2 = gk_estimate(&t2, EstimateMethod::FiniteDifference).unwrap();
        assert_eq!(e1.degree, e2.degree);
    }
}
