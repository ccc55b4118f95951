//! Local confluence checking by critical-pair enumeration: overlap words of
//! generator triples plus rule-rule superpositions, each reduced along every
//! one-step branch and compared at normal form.

use crate::algebra::pbw::PbwPresentation;
use crate::algebra::{Element, GenId, Word};

/// A word whose branches reduce to different normal forms.
#[derive(Debug, Clone)]
pub struct ConfluenceWitness {
    pub word: Word,
    pub word_rendered: String,
    pub normal_form_a: Element,
    pub normal_form_b: Element,
    pub rendered_a: String,
    pub rendered_b: String,
}

#[derive(Debug, Clone)]
pub struct ConfluenceReport {
    pub degree_bound: u64,
    pub words_checked: usize,
    pub failures: Vec<ConfluenceWitness>,
}

impl ConfluenceReport {
    pub fn is_confluent(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Enumerate candidate overlap words up to the degree bound and test that all
/// one-step branches rejoin.
pub fn check_local_confluence(p: &PbwPresentation, degree_bound: u64) -> ConfluenceReport {
    let mut candidates: std::collections::BTreeSet<Word> = std::collections::BTreeSet::new();

    // generator triples g_k g_j g_i with k >= j >= i
    let n = p.generator_names().len() as GenId;
    if degree_bound >= 3 {
        for k in 0..n {
            for j in 0..=k {
                for i in 0..=j {
                    candidates.insert(vec![k, j, i]);
                }
            }
        }
    }

    // rule-rule superpositions: suffix/prefix overlaps and containments
    for r1 in p.rules() {
        for r2 in p.rules() {
            let l1 = &r1.lhs;
            let l2 = &r2.lhs;
            for olap in 1..l1.len().min(l2.len()) {
                if l1[l1.len() - olap..] == l2[..olap] {
                    let mut w = l1.clone();
                    w.extend_from_slice(&l2[olap..]);
                    if w.len() as u64 <= degree_bound {
                        candidates.insert(w);
                    }
                }
            }
            // containment: l2 inside l1
            if l2.len() < l1.len() {
                for pos in 0..=l1.len() - l2.len() {
                    if &l1[pos..pos + l2.len()] == l2.as_slice() && l1.len() as u64 <= degree_bound
                    {
                        candidates.insert(l1.clone());
                    }
                }
            }
        }
    }

    let mut failures = Vec::new();
    let mut words_checked = 0usize;
    for word in &candidates {
        words_checked += 1;
        // every one-step branch
        let mut branch_nfs: Vec<Element> = Vec::new();
        for pos in 0..word.len() {
            for rule in p.rules() {
                if !word[pos..].starts_with(&rule.lhs) {
                    continue;
                }
                let mut terms = Vec::new();
                for (rw, rc) in &rule.rhs {
                    let mut spliced = Vec::with_capacity(word.len());
                    spliced.extend_from_slice(&word[..pos]);
                    spliced.extend_from_slice(rw);
                    spliced.extend_from_slice(&word[pos + rule.lhs.len()..]);
                    terms.push((spliced, rc.clone()));
                }
                branch_nfs.push(p.element_from_terms(terms));
            }
        }
        for i in 1..branch_nfs.len() {
            if branch_nfs[i] != branch_nfs[0] {
                failures.push(ConfluenceWitness {
                    word: word.clone(),
                    word_rendered: p.render_word(word),
                    normal_form_a: branch_nfs[0].clone(),
                    normal_form_b: branch_nfs[i].clone(),
                    rendered_a: render(p, &branch_nfs[0]),
                    rendered_b: render(p, &branch_nfs[i]),
                });
                break;
            }
        }
    }
    ConfluenceReport { degree_bound, words_checked, failures }
}

fn render(p: &PbwPresentation, e: &Element) -> String {
    if e.is_zero() {
        return "0".to_string();
    }
    e.terms
        .iter()
        .map(|(m, c)| {
            let crate::algebra::Monomial::Word(w) = m else { unreachable!() };
            format!("{}*{}", p.tower().render(c), p.render_word(w))
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::pbw::RawRule;
    use crate::scalars::Tower;

    fn weyl() -> PbwPresentation {
        let tower = Tower::rationals();
        let rules = vec![RawRule {
            lhs: vec![1, 0],
            rhs: vec![(vec![0, 1], tower.one()), (Vec::new(), tower.one())],
        }];
        PbwPresentation::new(tower, vec!["x".into(), "d".into()], rules, true).unwrap()
    }

    fn so3() -> PbwPresentation {
        let tower = Tower::rationals();
        let one = tower.one();
        let neg = tower.from_int(-1);
        let rules = vec![
            RawRule { lhs: vec![1, 0], rhs: vec![(vec![0, 1], one.clone()), (vec![2], neg.clone())] },
            RawRule { lhs: vec![2, 1], rhs: vec![(vec![1, 2], one.clone()), (vec![0], neg.clone())] },
            RawRule { lhs: vec![2, 0], rhs: vec![(vec![0, 2], one.clone()), (vec![1], one.clone())] },
        ];
        PbwPresentation::new(tower, vec!["x".into(), "y".into(), "z".into()], rules, true).unwrap()
    }

    #[test]
    fn weyl_rules_are_confluent_to_degree_six() {
        let report = check_local_confluence(&weyl(), 6);
        assert!(report.is_confluent(), "failures: {:?}", report.failures);
    }

    #[test]
    fn so3_rules_are_confluent_to_degree_six() {
        // the Jacobi identity makes zyx reduce consistently
        let report = check_local_confluence(&so3(), 6);
        assert!(report.is_confluent(), "failures: {:?}", report.failures);
    }

    #[test]
    fn known_nonconfluent_pair_reports_witness() {
        // rules {xy -> y, yx -> x} fail on xyx: reducing the left redex gives
        // y*x -> x, reducing the right gives x*x (irreducible), so the two
        // normal forms are x and x^2.
        let tower = Tower::rationals();
        let rules = vec![
            RawRule { lhs: vec![0, 1], rhs: vec![(vec![1], tower.one())] },
            RawRule { lhs: vec![1, 0], rhs: vec![(vec![0], tower.one())] },
        ];
        let p = PbwPresentation::new(tower, vec!["x".into(), "y".into()], rules, false).unwrap();
        let report = check_local_confluence(&p, 6);
        assert!(!report.is_confluent());
        let w = &report.failures[0];
        let nf_x = p.reduce_word(&[0]);
        let nf_xx = p.element_from_terms(vec![(vec![0, 0], p.tower().one())]);
        let pair = (w.normal_form_a.clone(), w.normal_form_b.clone());
        assert!(
            (pair.0 == nf_x && pair.1 == nf_xx) || (pair.0 == nf_xx && pair.1 == nf_x),
            "unexpected witness: {} vs {}",
            w.rendered_a,
            w.rendered_b
        );
    }
}
