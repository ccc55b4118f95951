//! The `.alg.json` presentation document format: constants, exponent module,
//! mode, rules, named subspaces and kappa tables, with a serializer whose
//! output reconstructs a behaviorally identical presentation.

mod element_parser;

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::algebra::{HyperMode, PbwPresentation, Presentation, RawRule, WeylPresentation};
use crate::error::{Error, Result};
use crate::exponents::{ExponentModule, ExponentVec};
use crate::nonassoc::KappaForm;
use crate::scalars::{ConstantKind, ConstantSpec, Derivative, Tower};
use crate::{Element, Monomial};

pub(crate) use element_parser::parse_element;

/// Parse raw rule terms against a generator list, without reduction (used
/// for module reduction rules, which apply to a presentation built later).
pub fn parse_raw_terms_public(
    text: &str,
    tower: &Tower,
    gens: &[String],
) -> Result<Vec<(crate::algebra::Word, crate::scalars::Scalar)>> {
    element_parser::parse_raw_terms(text, "reduction rule", tower, gens)
}

/// Serde model of a presentation document. Unknown keys are rejected.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationDocument {
    /// "central" | "analytic" | "pbw"
    pub mode: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub constants: Vec<ConstantDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent_module: Option<ExponentModuleDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rules: Option<Vec<RuleDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reductions: Option<Vec<RuleDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subspaces: Option<BTreeMap<String, Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<KappaDoc>,
    /// Extra relation polynomials verified when constants are specialized.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relations: Option<Vec<String>>,
    /// Confluence of the rule set is asserted by the author; the checker can
    /// audit it up to a degree bound.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub confluent: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantDoc {
    pub name: String,
    /// "transcendental" or {"algebraic": ["-2", "0", "1"]} (monic, low to high).
    pub kind: ConstantKindDoc,
    /// Name of the derivative constant, or "0" for t-independent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_derivative: Option<String>,
    /// Rational specialization value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstantKindDoc {
    Transcendental,
    Algebraic(Vec<String>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExponentModuleDoc {
    pub rank: usize,
    pub embeddings: Vec<String>,
    /// Coordinates of the element embedding to 1; defaults to the first basis vector.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub one: Option<Vec<i64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleDoc {
    pub lhs: Vec<String>,
    pub rhs: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KappaDoc {
    /// The literal string "default": the built-in antisymmetric seed form.
    Named(String),
    Table(Vec<KappaEntryDoc>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KappaEntryDoc {
    pub m1: String,
    pub m2: String,
    pub value: String,
}

/// Fully constructed presentation with its named subspaces and kappa form.
#[derive(Debug, Clone)]
pub struct ParsedPresentation {
    pub presentation: Presentation,
    pub subspaces: BTreeMap<String, Vec<Element>>,
    pub kappa: Option<KappaForm>,
    pub kappa_is_default: bool,
    /// module reduction rules given under "reductions" (kept for serialization)
    pub document: PresentationDocument,
}

impl ParsedPresentation {
    pub fn subspace(&self, name: &str) -> Result<&Vec<Element>> {
        self.subspaces.get(name).ok_or_else(|| Error::Validation {
            path: format!("subspaces.{name}"),
            message: "no such subspace".into(),
        })
    }

    pub fn parse_element(&self, text: &str) -> Result<Element> {
        parse_element(text, "element", &self.presentation)
    }
}

fn parse_rational(path: &str, s: &str) -> Result<BigRational> {
    s.trim().parse::<BigRational>().map_err(|_| Error::Validation {
        path: path.to_string(),
        message: format!("not a rational literal: `{s}`"),
    })
}

/// Build the formal tower plus, when every constant carries a value, the
/// verified specialized tower.
fn build_towers(doc: &PresentationDocument) -> Result<(Tower, Option<Tower>)> {
    let mut specs = Vec::new();
    for (i, c) in doc.constants.iter().enumerate() {
        let kind = match &c.kind {
            ConstantKindDoc::Transcendental => ConstantKind::Transcendental,
            ConstantKindDoc::Algebraic(coeffs) => {
                let parsed: Result<Vec<BigRational>> = coeffs
                    .iter()
                    .map(|s| parse_rational(&format!("constants[{i}].kind.algebraic"), s))
                    .collect();
                ConstantKind::Algebraic(parsed?)
            }
        };
        let t_derivative = match c.t_derivative.as_deref() {
            None => Derivative::Undeclared,
            Some("0") => Derivative::Zero,
            Some(name) => Derivative::Constant(name.to_string()),
        };
        specs.push(ConstantSpec { name: c.name.clone(), kind, t_derivative });
    }
    let tower = Tower::new(specs)?;

    // specialization: all-or-nothing
    let with_values: Vec<&ConstantDoc> = doc.constants.iter().filter(|c| c.value.is_some()).collect();
    if with_values.is_empty() {
        return Ok((tower, None));
    }
    if with_values.len() != doc.constants.len() {
        return Err(Error::Validation {
            path: "constants".into(),
            message: "either all constants carry specialization values or none do".into(),
        });
    }
    let values: Result<Vec<(String, BigRational)>> = doc
        .constants
        .iter()
        .map(|c| {
            Ok((
                c.name.clone(),
                parse_rational(&format!("constants.{}.value", c.name), c.value.as_ref().unwrap())?,
            ))
        })
        .collect();
    let specialized = tower.specialize(&values?)?;
    // verify declared relation polynomials at the specialized values
    if let Some(relations) = &doc.relations {
        for (i, rel) in relations.iter().enumerate() {
            let v = specialized.parse_scalar(rel)?;
            if !specialized.is_zero(&v) {
                return Err(Error::Validation {
                    path: format!("relations[{i}]"),
                    message: format!(
                        "relation `{rel}` does not vanish under the specialization"
                    ),
                });
            }
        }
    }
    Ok((tower, Some(specialized)))
}

/// Parse and validate a presentation document.
pub fn parse_presentation(text: &str) -> Result<ParsedPresentation> {
    let doc: PresentationDocument = serde_json::from_str(text).map_err(|e| Error::Parse {
        context: format!("document line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    build_presentation(doc)
}

pub fn build_presentation(doc: PresentationDocument) -> Result<ParsedPresentation> {
    let (formal, specialized) = build_towers(&doc)?;
    // Analytic mode must keep the formal constants: the d/dt structure is
    // only associative when the coefficient derivation is alive (s' = c);
    // replacing s, c by numbers while keeping [dt, E] nonzero breaks the
    // mixed-partial consistency. Specialized values still get verified above
    // and remain available for t-independent modes.
    let tower = match (doc.mode.as_str(), &specialized) {
        ("analytic", _) | (_, None) => formal,
        (_, Some(sp)) => sp.clone(),
    };
    let presentation = match doc.mode.as_str() {
        "pbw" => {
            let gens = doc.generators.clone().ok_or_else(|| Error::Validation {
                path: "generators".into(),
                message: "pbw mode requires a generator list".into(),
            })?;
            let mut raw_rules = Vec::new();
            let all_rules = doc
                .rules
                .iter()
                .flatten()
                .chain(doc.reductions.iter().flatten());
            for (i, r) in all_rules.enumerate() {
                let lhs: Result<Vec<u16>> = r
                    .lhs
                    .iter()
                    .map(|n| {
                        gens.iter().position(|g| g == n).map(|x| x as u16).ok_or_else(|| {
                            Error::Validation {
                                path: format!("rules[{i}].lhs"),
                                message: format!("unknown generator `{n}`"),
                            }
                        })
                    })
                    .collect();
                let rhs = element_parser::parse_raw_terms(
                    &r.rhs,
                    &format!("rules[{i}].rhs"),
                    &tower,
                    &gens,
                )?;
                raw_rules.push(RawRule { lhs: lhs?, rhs });
            }
            Presentation::Pbw(PbwPresentation::new(tower, gens, raw_rules, doc.confluent)?)
        }
        "central" | "analytic" => {
            let mode = if doc.mode == "central" { HyperMode::Central } else { HyperMode::Analytic };
            let em = doc.exponent_module.as_ref().ok_or_else(|| Error::Validation {
                path: "exponent_module".into(),
                message: "builtin modes require an exponent module".into(),
            })?;
            if em.embeddings.len() != em.rank {
                return Err(Error::Validation {
                    path: "exponent_module.embeddings".into(),
                    message: "one embedding per basis vector required".into(),
                });
            }
            let embeddings: Result<Vec<_>> =
                em.embeddings.iter().map(|s| tower.parse_scalar(s)).collect();
            let one = em
                .one
                .clone()
                .map(ExponentVec)
                .unwrap_or_else(|| ExponentVec::unit(em.rank, 0));
            let module = ExponentModule::new(&tower, embeddings?, one)?;
            let p_coords = doc.p.clone().ok_or_else(|| Error::Validation {
                path: "p".into(),
                message: "builtin modes require the hyperbolic exponent p".into(),
            })?;
            if p_coords.len() != em.rank {
                return Err(Error::Validation {
                    path: "p".into(),
                    message: "p has wrong rank".into(),
                });
            }
            if p_coords.iter().all(|&c| c == 0) {
                return Err(Error::Validation {
                    path: "p".into(),
                    message: "hyperbolic exponent must be nonzero".into(),
                });
            }
            // the designated hyperbolic scalar pair: the constant named `s`
            // and its declared derivative, or zero placeholders in central mode
            let (s_val, c_val) = if mode == HyperMode::Analytic {
                let s_doc = doc
                    .constants
                    .iter()
                    .find(|c| c.name == "s")
                    .ok_or_else(|| Error::Validation {
                        path: "constants".into(),
                        message: "analytic mode requires a constant named `s` (sinh t)".into(),
                    })?;
                let c_name = match s_doc.t_derivative.as_deref() {
                    Some(n) if n != "0" => n.to_string(),
                    _ => {
                        return Err(Error::Validation {
                            path: "constants.s.t_derivative".into(),
                            message: "analytic mode requires s to have a derivative constant".into(),
                        })
                    }
                };
                (tower.constant("s")?, tower.constant(&c_name)?)
            } else {
                (tower.zero(), tower.zero())
            };
            Presentation::Weyl(WeylPresentation::new(
                tower,
                module,
                mode,
                ExponentVec(p_coords),
                s_val,
                c_val,
            )?)
        }
        other => {
            return Err(Error::Validation {
                path: "mode".into(),
                message: format!("unknown mode `{other}` (expected central | analytic | pbw)"),
            })
        }
    };

    let mut subspaces = BTreeMap::new();
    if let Some(subs) = &doc.subspaces {
        for (name, strings) in subs {
            let elems: Result<Vec<Element>> = strings
                .iter()
                .map(|s| {
                    element_parser::parse_element(
                        s,
                        &format!("subspaces.{name}"),
                        &presentation,
                    )
                })
                .collect();
            subspaces.insert(name.clone(), elems?);
        }
    }

    let (kappa, kappa_is_default) = match &doc.kappa {
        None => (None, false),
        Some(KappaDoc::Named(n)) if n == "default" => {
            (Some(KappaForm::default_for(&presentation)), true)
        }
        Some(KappaDoc::Named(n)) if n == "zero" => (Some(KappaForm::zero()), false),
        Some(KappaDoc::Named(n)) => {
            return Err(Error::Validation {
                path: "kappa".into(),
                message: format!("unknown kappa name `{n}` (expected default | zero | table)"),
            })
        }
        Some(KappaDoc::Table(entries)) => {
            let mut table = Vec::new();
            for (i, e) in entries.iter().enumerate() {
                let m1 = single_monomial(&presentation, &e.m1, &format!("kappa[{i}].m1"))?;
                let m2 = single_monomial(&presentation, &e.m2, &format!("kappa[{i}].m2"))?;
                let value = presentation.tower().parse_scalar(&e.value)?;
                table.push((m1, m2, value));
            }
            (Some(KappaForm::from_table(table)), false)
        }
    };

    Ok(ParsedPresentation { presentation, subspaces, kappa, kappa_is_default, document: doc })
}

fn single_monomial(p: &Presentation, text: &str, path: &str) -> Result<Monomial> {
    let e = element_parser::parse_element(text, path, p)?;
    let mut terms = e.terms();
    match (terms.next(), terms.next()) {
        (Some((m, c)), None) if p.tower().is_one(c) => Ok(m.clone()),
        _ => Err(Error::Validation {
            path: path.to_string(),
            message: "kappa entries must be single monomials with coefficient 1".into(),
        }),
    }
}

/// Serialize back to document JSON. The result parses to a presentation with
/// identical behavior (canonical forms agree on any probe set).
pub fn serialize_presentation(parsed: &ParsedPresentation) -> Result<String> {
    serde_json::to_string_pretty(&parsed.document).map_err(|e| Error::Parse {
        context: "serialization".into(),
        message: e.to_string(),
    })
}

/// Serde model of an automorphism specification document.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomorphismDoc {
    /// Generator (or family) name -> nonzero scale expression.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub scales: BTreeMap<String, String>,
    /// Row-major integer matrix acting on exponent coordinates; must be
    /// unimodular.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub flip_hyper: bool,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub involution: bool,
}

/// Parse an automorphism specification against a presentation's tower.
pub fn parse_automorphism(
    text: &str,
    tower: &Tower,
) -> Result<crate::morphisms::AutomorphismSpec> {
    let doc: AutomorphismDoc = serde_json::from_str(text).map_err(|e| Error::Parse {
        context: format!("automorphism document line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    let mut spec = crate::morphisms::AutomorphismSpec::identity();
    for (name, expr) in &doc.scales {
        let v = tower.parse_scalar(expr)?;
        if tower.is_zero(&v) {
            return Err(Error::Validation {
                path: format!("scales.{name}"),
                message: "scales must be nonzero".into(),
            });
        }
        spec.scales.insert(name.clone(), v);
    }
    if let Some(rows) = doc.sigma {
        let m = crate::exponents::ModuleAutomorphism { rows };
        if m.rank() == 0 || m.rows.iter().any(|r| r.len() != m.rank()) {
            return Err(Error::Validation {
                path: "sigma".into(),
                message: "sigma must be a square matrix".into(),
            });
        }
        if !m.is_unimodular() {
            return Err(Error::Validation {
                path: "sigma".into(),
                message: "sigma must be unimodular (determinant +1 or -1)".into(),
            });
        }
        spec.sigma = Some(m);
    }
    spec.flip_hyper = doc.flip_hyper;
    spec.involution = doc.involution;
    Ok(spec)
}
