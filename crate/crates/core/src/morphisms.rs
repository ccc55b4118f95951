//! Automorphism specifications (torus scales, exponent-module automorphism,
//! x/d involution), endomorphism verification against the presentation
//! relations, and the isomorphism / rigidity decision for the builtin family.
//!
//! Verification is deliberate: specs are applied formally and then checked
//! against every relation, so inconsistent scale choices fail with a witness
//! instead of being silently corrected.

use std::collections::BTreeMap;

use crate::algebra::{Monomial, PbwPresentation, Presentation};
use crate::error::{Error, Result};
use crate::exponents::{content_reduce, ExponentVec, ModuleAutomorphism};
use crate::scalars::Scalar;
use crate::Element;

/// An automorphism candidate: per-generator scales (PBW), an exponent-module
/// automorphism plus hyperbolic scale/flip (builtin), and the optional
/// x/d involution (pure Weyl presentations only).
#[derive(Debug, Clone)]
pub struct AutomorphismSpec {
    /// PBW: generator name -> nonzero scale. Builtin: the key `y` scales the
    /// hyperbolic generator.
    pub scales: BTreeMap<String, Scalar>,
    /// Builtin: acts on the exponent coordinates of x-powers and exponentials.
    pub sigma: Option<ModuleAutomorphism>,
    /// Builtin: send y to y^{-1} (the sign choice of the hyperbolic pair).
    pub flip_hyper: bool,
    /// x -> d, d -> -x on a two-generator Weyl presentation.
    pub involution: bool,
}

impl AutomorphismSpec {
    pub fn identity() -> Self {
        AutomorphismSpec {
            scales: BTreeMap::new(),
            sigma: None,
            flip_hyper: false,
            involution: false,
        }
    }

    pub fn with_scale(mut self, name: &str, v: Scalar) -> Self {
        self.scales.insert(name.to_string(), v);
        self
    }

    pub fn with_sigma(mut self, sigma: ModuleAutomorphism) -> Self {
        self.sigma = Some(sigma);
        self
    }

    pub fn with_involution(mut self) -> Self {
        self.involution = true;
        self
    }
}

/// Does a PBW presentation have the x < d Weyl shape (one rule dx = xd + 1)?
fn is_weyl_shaped(p: &PbwPresentation) -> bool {
    if p.generator_names().len() != 2 || p.rules().len() != 1 {
        return false;
    }
    let r = &p.rules()[0];
    if r.lhs != vec![1, 0] || r.rhs.len() != 2 {
        return false;
    }
    let tower = p.tower();
    let mut swap_ok = false;
    let mut unit_ok = false;
    for (w, c) in &r.rhs {
        if w == &vec![0, 1] && tower.is_one(c) {
            swap_ok = true;
        }
        if w.is_empty() && tower.is_one(c) {
            unit_ok = true;
        }
    }
    swap_ok && unit_ok
}

/// Generator images of a spec over a PBW presentation.
fn pbw_images(spec: &AutomorphismSpec, p: &PbwPresentation) -> Result<Vec<Element>> {
    let tower = p.tower();
    if spec.involution && !is_weyl_shaped(p) {
        return Err(Error::Unsupported(
            "the involution is supported only on the two-generator Weyl presentation".into(),
        ));
    }
    let mut images = Vec::new();
    for (i, name) in p.generator_names().iter().enumerate() {
        let scale = spec.scales.get(name).cloned().unwrap_or_else(|| tower.one());
        if tower.is_zero(&scale) {
            return Err(Error::Validation {
                path: format!("scales.{name}"),
                message: "scales must be nonzero".into(),
            });
        }
        let base = if spec.involution {
            // x -> d, d -> -x
            if i == 0 {
                p.generator_element(1)
            } else {
                let e = p.generator_element(0);
                scaled(p, &e, &tower.from_int(-1))
            }
        } else {
            p.generator_element(i as u16)
        };
        images.push(scaled(p, &base, &scale));
    }
    Ok(images)
}

fn scaled(p: &PbwPresentation, e: &Element, k: &Scalar) -> Element {
    let terms = e
        .terms
        .iter()
        .map(|(m, c)| {
            let Monomial::Word(w) = m else { unreachable!() };
            (w.clone(), p.tower().mul(c, k))
        })
        .collect();
    p.element_from_terms(terms)
}

/// Apply the spec generator-wise, extended multiplicatively and linearly.
pub fn apply_automorphism(
    spec: &AutomorphismSpec,
    a: &Element,
    p: &Presentation,
) -> Result<Element> {
    p.check_owned(a)?;
    match p {
        Presentation::Pbw(pb) => {
            let images = pbw_images(spec, pb)?;
            let mut out = p.zero_element();
            for (m, c) in a.terms() {
                let Monomial::Word(w) = m else { return Err(Error::MixedPresentations) };
                let mut acc = p.scalar_element(c.clone());
                for g in w {
                    acc = p.multiply(&acc, &images[usize::from(*g)])?;
                }
                out = p.add(&out, &acc)?;
            }
            Ok(out)
        }
        Presentation::Weyl(w) => {
            if spec.involution {
                return Err(Error::Unsupported(
                    "the involution is not constructive on hyperbolic presentations".into(),
                ));
            }
            let tower = p.tower();
            for name in spec.scales.keys() {
                if name != "y" {
                    return Err(Error::Unsupported(format!(
                        "builtin presentations only support the hyperbolic scale `y`, got `{name}`"
                    )));
                }
            }
            let xi = spec.scales.get("y").cloned().unwrap_or_else(|| tower.one());
            if tower.is_zero(&xi) {
                return Err(Error::Validation {
                    path: "scales.y".into(),
                    message: "scales must be nonzero".into(),
                });
            }
            if let Some(sigma) = &spec.sigma {
                if sigma.rank() != w.rank() {
                    return Err(Error::Validation {
                        path: "sigma".into(),
                        message: "module automorphism has wrong rank".into(),
                    });
                }
                if !sigma.is_unimodular() {
                    return Err(Error::Validation {
                        path: "sigma".into(),
                        message: "module automorphism must be unimodular".into(),
                    });
                }
            }
            let mut out = p.zero_element();
            for (m, c) in a.terms() {
                let Monomial::Weyl(wm) = m else { return Err(Error::MixedPresentations) };
                let mut nm = wm.clone();
                if let Some(sigma) = &spec.sigma {
                    nm.beta = sigma.apply(&nm.beta);
                    nm.gamma = sigma.apply(&nm.gamma);
                }
                if spec.flip_hyper {
                    nm.hyper = -nm.hyper;
                }
                let coeff = tower.mul(c, &tower.pow(&xi, wm.hyper)?);
                let piece = w.monomial_element(nm, coeff)?;
                out = p.add(&out, &piece)?;
            }
            Ok(out)
        }
    }
}

#[derive(Debug, Clone)]
pub struct RelationCheck {
    pub relation: String,
    pub pass: bool,
    /// Rendered residual when the relation is not preserved.
    pub witness: Option<String>,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub pass: bool,
    pub checks: Vec<RelationCheck>,
}

/// Check relation preservation: for every presentation relation, reduce the
/// image of the left side and compare with the image of the right side.
pub fn verify_endomorphism(
    spec: &AutomorphismSpec,
    p: &Presentation,
    _degree: u64,
) -> Result<VerifyReport> {
    let mut checks = Vec::new();
    match p {
        Presentation::Pbw(pb) => {
            let images = pbw_images(spec, pb)?;
            for rule in pb.rules() {
                let mut lhs = p.one_element();
                for g in &rule.lhs {
                    lhs = p.multiply(&lhs, &images[usize::from(*g)])?;
                }
                let rhs_elem = pb.element_from_terms(rule.rhs.clone());
                let rhs = apply_automorphism(spec, &rhs_elem, p)?;
                let diff = p.sub(&lhs, &rhs)?;
                let pass = diff.is_zero();
                checks.push(RelationCheck {
                    relation: format!(
                        "{} = {}",
                        pb.render_word(&rule.lhs),
                        p.render_element(&rhs_elem)
                    ),
                    pass,
                    witness: if pass { None } else { Some(p.render_element(&diff)) },
                });
            }
        }
        Presentation::Weyl(_) => {
            // the builtin relation set is the commutation table on the
            // distinguished generators: phi(g h) must equal phi(g) phi(h)
            let gens = p.generators();
            for (na, a) in &gens {
                for (nb, b) in &gens {
                    let prod = p.multiply(a, b)?;
                    let lhs = apply_automorphism(spec, &prod, p)?;
                    let fa = apply_automorphism(spec, a, p)?;
                    let fb = apply_automorphism(spec, b, p)?;
                    let rhs = p.multiply(&fa, &fb)?;
                    let diff = p.sub(&lhs, &rhs)?;
                    let pass = diff.is_zero();
                    checks.push(RelationCheck {
                        relation: format!("phi({na} * {nb}) = phi({na}) phi({nb})"),
                        pass,
                        witness: if pass { None } else { Some(p.render_element(&diff)) },
                    });
                }
            }
        }
    }
    Ok(VerifyReport { pass: checks.iter().all(|c| c.pass), checks })
}

/// Outcome of the isomorphism decision for two members of the builtin family.
#[derive(Debug, Clone)]
pub enum IsoVerdict {
    Iso {
        /// Unimodular witness with sigma(p1) = sign * p2.
        sigma: ModuleAutomorphism,
        sign: i64,
        mapped: ExponentVec,
    },
    NotIso {
        reason: String,
    },
}

impl IsoVerdict {
    pub fn is_iso(&self) -> bool {
        matches!(self, IsoVerdict::Iso { .. })
    }
}

/// Decide A(p1, t1) ~ A(p2, t2): isomorphic exactly when the t-tags agree and
/// p1, p2 lie in the same GL(r, Z)-orbit up to sign, i.e. their contents
/// match. On success the witness automorphism is constructed and re-verified
/// by direct application.
pub fn iso_decide(
    p1: &ExponentVec,
    t1: &str,
    p2: &ExponentVec,
    t2: &str,
) -> Result<IsoVerdict> {
    if p1.is_zero() || p2.is_zero() {
        return Err(Error::ZeroExponentVector);
    }
    if p1.rank() != p2.rank() {
        return Err(Error::Validation {
            path: "p2".into(),
            message: "exponent vectors must have equal rank".into(),
        });
    }
    if t1 != t2 {
        return Ok(IsoVerdict::NotIso { reason: format!("t differs: `{t1}` vs `{t2}`") });
    }
    let (g1, s1, _s1_inv) = content_reduce(p1)?;
    let (g2, _s2, s2_inv) = content_reduce(p2)?;
    if g1 != g2 {
        return Ok(IsoVerdict::NotIso {
            reason: format!(
                "no module automorphism maps p1 to +-p2: contents {g1} and {g2} differ"
            ),
        });
    }
    let sigma = s2_inv.compose(&s1);
    let mapped = sigma.apply(p1);
    debug_assert!(sigma.is_unimodular());
    let sign = if &mapped == p2 {
        1
    } else if mapped == p2.neg() {
        -1
    } else {
        return Err(Error::Validation {
            path: "iso".into(),
            message: "internal: composed witness failed verification".into(),
        });
    };
    Ok(IsoVerdict::Iso { sigma, sign, mapped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{HyperMode, PbwPresentation, RawRule, WeylPresentation};
    use crate::exponents::ExponentModule;
    use crate::scalars::Tower;

    fn weyl_pbw() -> Presentation {
        let tower = Tower::rationals();
        let rules = vec![RawRule {
            lhs: vec![1, 0],
            rhs: vec![(vec![0, 1], tower.one()), (Vec::new(), tower.one())],
        }];
        Presentation::Pbw(
            PbwPresentation::new(tower, vec!["x".into(), "d".into()], rules, true).unwrap(),
        )
    }

    fn central_rank2() -> Presentation {
        let tower = crate::scalars::sqrt2_tower();
        let r2 = tower.constant("r2").unwrap();
        let module =
            ExponentModule::new(&tower, vec![tower.one(), r2], ExponentVec(vec![1, 0])).unwrap();
        let z = tower.zero();
        Presentation::Weyl(
            WeylPresentation::new(
                tower,
                module,
                HyperMode::Central,
                ExponentVec(vec![1, 0]),
                z.clone(),
                z,
            )
            .unwrap(),
        )
    }

    #[test]
    fn identity_spec_is_identity() {
        let p = weyl_pbw();
        let x = p.generators()[0].1.clone();
        let spec = AutomorphismSpec::identity();
        assert_eq!(apply_automorphism(&spec, &x, &p).unwrap(), x);
        assert!(verify_endomorphism(&spec, &p, 4).unwrap().pass);
    }

    #[test]
    fn balanced_torus_passes_unbalanced_fails() {
        let p = weyl_pbw();
        let t = p.tower().clone();
        let good = AutomorphismSpec::identity()
            .with_scale("x", t.from_int(2))
            .with_scale("d", t.ratio(1, 2));
        let report = verify_endomorphism(&good, &p, 4).unwrap();
        assert!(report.pass, "[mu d, lambda x] = lambda mu = 1 must pass");

        // x dp -> x d is preserved as a product of scales 1
        let x = p.generators()[0].1.clone();
        let d = p.generators()[1].1.clone();
        let xd = p.multiply(&x, &d).unwrap();
        assert_eq!(apply_automorphism(&good, &xd, &p).unwrap(), xd);

        let bad = AutomorphismSpec::identity().with_scale("x", t.from_int(2));
        let report = verify_endomorphism(&bad, &p, 4).unwrap();
        assert!(!report.pass);
        // witness is the residual of [phi d, phi x] - 1 = 2x d + 2 - x d - 1... reduced: 1
        let failing = report.checks.iter().find(|c| !c.pass).unwrap();
        assert_eq!(failing.witness.as_deref(), Some("1"));
    }

    #[test]
    fn involution_passes_on_weyl() {
        let p = weyl_pbw();
        let spec = AutomorphismSpec::identity().with_involution();
        let report = verify_endomorphism(&spec, &p, 4).unwrap();
        assert!(report.pass, "tau(d) tau(x) - tau(x) tau(d) = [-x, d] = 1");
        // involution is rejected away from the Weyl shape
        let poly = Presentation::Pbw(
            PbwPresentation::new(Tower::rationals(), vec!["x".into()], vec![], true).unwrap(),
        );
        assert!(verify_endomorphism(&spec, &poly, 4).is_err());
        let hyp = central_rank2();
        let e = hyp.one_element();
        assert!(apply_automorphism(&spec, &e, &hyp).is_err());
    }

    #[test]
    fn multiplicativity_of_passing_specs() {
        let p = weyl_pbw();
        let t = p.tower().clone();
        let spec = AutomorphismSpec::identity()
            .with_scale("x", t.from_int(3))
            .with_scale("d", t.ratio(1, 3));
        assert!(verify_endomorphism(&spec, &p, 4).unwrap().pass);
        let mut rng = crate::scalars::XorShift::new(7);
        let monos = p.monomials_up_to_degree(3, 10_000).unwrap();
        for _ in 0..40 {
            let a = p
                .monomial_element(monos[rng.below(monos.len() as u64) as usize].clone(), t.one())
                .unwrap();
            let b = p
                .monomial_element(monos[rng.below(monos.len() as u64) as usize].clone(), t.one())
                .unwrap();
            let lhs = apply_automorphism(&spec, &p.multiply(&a, &b).unwrap(), &p).unwrap();
            let rhs = p
                .multiply(
                    &apply_automorphism(&spec, &a, &p).unwrap(),
                    &apply_automorphism(&spec, &b, &p).unwrap(),
                )
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn sigma_swaps_exponential_coordinates() {
        let p = central_rank2();
        let w = match &p {
            Presentation::Weyl(w) => w,
            _ => unreachable!(),
        };
        let swap = ModuleAutomorphism { rows: vec![vec![0, 1], vec![1, 0]] };
        let spec = AutomorphismSpec::identity().with_sigma(swap);
        let e10 = w.exp_gamma(ExponentVec(vec![1, 0])).unwrap();
        let e01 = w.exp_gamma(ExponentVec(vec![0, 1])).unwrap();
        assert_eq!(apply_automorphism(&spec, &e10, &p).unwrap(), e01);
    }

    #[test]
    fn hyper_scale_passes_verification_on_builtin() {
        let p = central_rank2();
        let t = p.tower().clone();
        let spec = AutomorphismSpec::identity().with_scale("y", t.from_int(5));
        let report = verify_endomorphism(&spec, &p, 2).unwrap();
        assert!(report.pass, "scaling the central generator preserves all relations");
    }

    #[test]
    fn hyper_flip_with_scale_passes() {
        // y -> xi y^{-1}: the sign automorphism of the hyperbolic pair
        let p = central_rank2();
        let t = p.tower().clone();
        let mut spec = AutomorphismSpec::identity().with_scale("y", t.from_int(5));
        spec.flip_hyper = true;
        let report = verify_endomorphism(&spec, &p, 2).unwrap();
        assert!(report.pass, "flipping a central Laurent generator preserves all relations");
        let Presentation::Weyl(w) = &p else { unreachable!() };
        let y = w.hyper_power(1).unwrap();
        let image = apply_automorphism(&spec, &y, &p).unwrap();
        let expect = p.scale(&w.hyper_power(-1).unwrap(), &t.from_int(5));
        assert_eq!(image, expect);
    }

    #[test]
    fn iso_decide_rank1_and_tags() {
        let v = iso_decide(&ExponentVec(vec![2]), "T", &ExponentVec(vec![-2]), "T").unwrap();
        assert!(v.is_iso());
        if let IsoVerdict::Iso { sign, mapped, .. } = v {
            assert_eq!(mapped.0, vec![-2]);
            assert_eq!(sign, 1);
        }
        let v = iso_decide(&ExponentVec(vec![2]), "t1", &ExponentVec(vec![2]), "t2").unwrap();
        assert!(!v.is_iso());
        let v = iso_decide(&ExponentVec(vec![2]), "T", &ExponentVec(vec![3]), "T").unwrap();
        assert!(!v.is_iso());
        assert!(iso_decide(&ExponentVec(vec![0]), "T", &ExponentVec(vec![1]), "T").is_err());
    }

    #[test]
    fn iso_decide_rank2_with_witness() {
        let p1 = ExponentVec(vec![2, 0]);
        let p2 = ExponentVec(vec![0, 2]);
        let v = iso_decide(&p1, "T", &p2, "T").unwrap();
        match v {
            IsoVerdict::Iso { sigma, sign, mapped } => {
                assert!(sigma.is_unimodular());
                let applied = sigma.apply(&p1);
                assert_eq!(applied, mapped);
                if sign == 1 {
                    assert_eq!(applied, p2);
                } else {
                    assert_eq!(applied, p2.neg());
                }
            }
            IsoVerdict::NotIso { reason } => panic!("expected iso, got: {reason}"),
        }
    }

    #[test]
    fn iso_decide_is_symmetric_and_reflexive() {
        let mut rng = crate::scalars::XorShift::new(12345);
        for _ in 0..60 {
            let rank = 1 + rng.below(3) as usize;
            let a = ExponentVec((0..rank).map(|_| rng.int_in(-6, 6)).collect());
            let b = ExponentVec((0..rank).map(|_| rng.int_in(-6, 6)).collect());
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let ab = iso_decide(&a, "T", &b, "T").unwrap().is_iso();
            let ba = iso_decide(&b, "T", &a, "T").unwrap().is_iso();
            assert_eq!(ab, ba);
            assert!(iso_decide(&a, "T", &a, "T").unwrap().is_iso());
        }
    }
}
