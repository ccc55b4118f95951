//! Shipped presentation documents, parsed on demand. Every preset used by
//! the CLI and the acceptance suite lives here as an embedded `.alg.json`
//! document (the same files ship in `presets/`).

use std::collections::BTreeMap;

use crate::algebra::{PbwPresentation, Presentation, RawRule};
use crate::dsl::{build_presentation, parse_presentation, ParsedPresentation};
use crate::error::{Error, Result};
use crate::Element;

pub const PRESET_NAMES: &[&str] = &[
    "poly1",
    "poly2",
    "poly3",
    "weyl",
    "so3",
    "sphere-quotient",
    "solvable2",
    "ore-paper",
    "module-x2y2",
    "weyltype-r1",
    "weyltype-r2-sqrt2",
    "na-example-31",
    "xy-quotient",
    "nonconfluent-toy",
];

/// Raw document text of a shipped preset.
pub fn preset_document(name: &str) -> Option<&'static str> {
    Some(match name {
        "poly1" => include_str!("../presets/poly1.alg.json"),
        "poly2" => include_str!("../presets/poly2.alg.json"),
        "poly3" => include_str!("../presets/poly3.alg.json"),
        "weyl" => include_str!("../presets/weyl.alg.json"),
        "so3" => include_str!("../presets/so3.alg.json"),
        "sphere-quotient" => include_str!("../presets/sphere-quotient.alg.json"),
        "solvable2" => include_str!("../presets/solvable2.alg.json"),
        "ore-paper" => include_str!("../presets/ore-paper.alg.json"),
        "module-x2y2" => include_str!("../presets/module-x2y2.alg.json"),
        "weyltype-r1" => include_str!("../presets/weyltype-r1.alg.json"),
        "weyltype-r2-sqrt2" => include_str!("../presets/weyltype-r2-sqrt2.alg.json"),
        "na-example-31" => include_str!("../presets/na-example-31.alg.json"),
        "xy-quotient" => include_str!("../presets/xy-quotient.alg.json"),
        "nonconfluent-toy" => include_str!("../presets/nonconfluent-toy.alg.json"),
        _ => return None,
    })
}

/// Load a preset by name.
pub fn load_preset(name: &str) -> Result<ParsedPresentation> {
    let text = preset_document(name).ok_or_else(|| Error::Validation {
        path: "preset".into(),
        message: format!(
            "unknown preset `{name}` (available: {})",
            PRESET_NAMES.join(", ")
        ),
    })?;
    parse_presentation(text)
}

/// Lazily loaded catalog used by reports.
pub struct Presets {
    cache: BTreeMap<String, ParsedPresentation>,
}

impl Presets {
    pub fn load_all() -> Result<Self> {
        let mut cache = BTreeMap::new();
        for name in PRESET_NAMES {
            cache.insert(name.to_string(), load_preset(name)?);
        }
        Ok(Presets { cache })
    }

    pub fn get(&self, name: &str) -> Result<&ParsedPresentation> {
        self.cache.get(name).ok_or_else(|| Error::Validation {
            path: "preset".into(),
            message: format!("unknown preset `{name}`"),
        })
    }

    pub fn presentation(&self, name: &str) -> Result<&Presentation> {
        Ok(&self.get(name)?.presentation)
    }

    pub fn subspace(&self, name: &str, sub: &str) -> Result<Vec<Element>> {
        Ok(self.get(name)?.subspace(sub)?.clone())
    }

    /// Base presentation (without reductions) plus the reduction rules,
    /// giving the cyclic-module view of a quotient document.
    pub fn module_view(&self, name: &str) -> Result<(PbwPresentation, Vec<RawRule>)> {
        let parsed = self.get(name)?;
        let mut doc = parsed.document.clone();
        let reductions = doc.reductions.take().unwrap_or_default();
        let base = build_presentation(doc)?;
        let Presentation::Pbw(base_pbw) = base.presentation else {
            return Err(Error::Unsupported(
                "module view requires a pbw presentation".into(),
            ));
        };
        let gens = base_pbw.generator_names().to_vec();
        let tower = base_pbw.tower().clone();
        let mut rules = Vec::new();
        for (i, r) in reductions.iter().enumerate() {
            let lhs: Result<Vec<u16>> = r
                .lhs
                .iter()
                .map(|n| {
                    gens.iter().position(|g| g == n).map(|x| x as u16).ok_or_else(|| {
                        Error::Validation {
                            path: format!("reductions[{i}].lhs"),
                            message: format!("unknown generator `{n}`"),
                        }
                    })
                })
                .collect();
            let rhs = crate::dsl::parse_raw_terms_public(&r.rhs, &tower, &gens)?;
            rules.push(RawRule { lhs: lhs?, rhs });
        }
        Ok((base_pbw, rules))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_parses_cleanly() {
        for name in PRESET_NAMES {
            let parsed = load_preset(name);
            assert!(parsed.is_ok(), "preset `{name}` failed to parse: {parsed:?}");
            let parsed = parsed.unwrap();
            assert!(
                parsed.subspaces.contains_key("default"),
                "preset `{name}` must ship a default subspace"
            );
        }
    }

    #[test]
    fn preset_round_trips_through_serializer() {
        for name in PRESET_NAMES {
            let parsed = load_preset(name).unwrap();
            let text = crate::dsl::serialize_presentation(&parsed).unwrap();
            let reparsed = crate::dsl::parse_presentation(&text).unwrap();
            assert_eq!(
                parsed.presentation.describe(),
                reparsed.presentation.describe(),
                "round trip changed `{name}`"
            );
        }
    }

    #[test]
    fn module_view_splits_reductions() {
        let presets = Presets::load_all().unwrap();
        let (base, rules) = presets.module_view("module-x2y2").unwrap();
        assert_eq!(base.rules().len(), 1);
        assert_eq!(rules.len(), 1);
    }

    #[test]
    fn rendered_elements_reparse_identically() {
        use crate::scalars::XorShift;
        let mut rng = XorShift::new(0xc0ffee);
        for name in ["so3", "weyl", "weyltype-r1", "weyltype-r2-sqrt2", "na-example-31"] {
            let parsed = load_preset(name).unwrap();
            let p = &parsed.presentation;
            let tower = p.tower();
            let monos = p.monomials_up_to_degree(2, 100_000).unwrap();
            for _ in 0..30 {
                let mut e = p.zero_element();
                for _ in 0..1 + rng.below(3) {
                    let m = monos[rng.below(monos.len() as u64) as usize].clone();
                    let mut c = tower.ratio(rng.int_in(-4, 4), rng.int_in(1, 3));
                    if !tower.constants().is_empty() && rng.below(2) == 0 {
                        let cname = tower.constants()[0].name.clone();
                        c = tower.mul(&c, &tower.constant(&cname).unwrap());
                    }
                    e = p.add(&e, &p.monomial_element(m, c).unwrap()).unwrap();
                }
                let rendered = p.render_element(&e);
                let back = parsed.parse_element(&rendered).unwrap();
                assert_eq!(e, back, "render/parse mismatch for `{rendered}` in {name}");
            }
        }
    }
}
