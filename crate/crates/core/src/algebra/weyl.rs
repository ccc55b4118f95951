//! The builtin Weyl-hyperbolic family.
//!
//! Basis monomials are `h . x^beta . e^{gamma x} . dx^m . dt^n` where `h` is
//! either `y^k` (central mode: an atomic central Laurent generator) or
//! `e^{j x^p s}` (analytic mode: `s` is the designated hyperbolic scalar and
//! `dx`, `dt` act by the chain rule). Hyperbolic sines and cosines of `alpha x`
//! are always handled as exponential combinations, never as primitive symbols,
//! so products close linearly and canonical forms are unique.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{binomial, fresh_presentation_id, Element, Monomial};
use crate::error::{Error, Result};
use crate::exponents::{ExponentModule, ExponentVec};
use crate::scalars::{Scalar, Tower};

/// Which reading of the hyperbolic generator the presentation uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HyperMode {
    /// `y = sinh(x^p sinh t)` is central by fiat; `y^k` with k Laurent.
    Central,
    /// `e^{j x^p s}` with the commutators given by the formal chain rule.
    Analytic,
}

/// Canonical monomial of the builtin family.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeylMonomial {
    /// Laurent power `k` of `y` (central) or exponent `j` of `e^{j x^p s}`
    /// (analytic), depending on the presentation mode.
    pub hyper: i64,
    /// Power of `x` as an exponent-module element.
    pub beta: ExponentVec,
    /// Exponent of `e^{gamma x}`.
    pub gamma: ExponentVec,
    /// Power of `d/dx`.
    pub dx: u32,
    /// Power of `d/dt`.
    pub dt: u32,
}

impl WeylMonomial {
    pub fn unit(rank: usize) -> Self {
        WeylMonomial {
            hyper: 0,
            beta: ExponentVec::zero(rank),
            gamma: ExponentVec::zero(rank),
            dx: 0,
            dt: 0,
        }
    }

    /// Total degree: |h| + |beta|_1 + |gamma|_1 + m + n.
    pub fn degree(&self) -> u64 {
        self.hyper.unsigned_abs() + self.beta.norm1() + self.gamma.norm1()
            + u64::from(self.dx)
            + u64::from(self.dt)
    }
}

impl fmt::Display for WeylMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "y^{} x^{:?} E^{:?} dx^{} dt^{}",
            self.hyper, self.beta.0, self.gamma.0, self.dx, self.dt
        )
    }
}

/// Builtin presentation: exponent module, mode, hyperbolic exponent `p`, and
/// the designated hyperbolic scalar pair (`s`, its t-derivative).
#[derive(Debug, Clone)]
pub struct WeylPresentation {
    id: u64,
    tower: Tower,
    module: ExponentModule,
    mode: HyperMode,
    p: ExponentVec,
    /// sinh(t) as a field value; formal constant or specialized rational.
    s_val: Scalar,
    /// cosh(t) as a field value: the declared t-derivative of `s_val`.
    c_val: Scalar,
    /// Fiber specialization `y = lambda` (central mode only).
    y_value: Option<Scalar>,
}

impl WeylPresentation {
    pub fn new(
        tower: Tower,
        module: ExponentModule,
        mode: HyperMode,
        p: ExponentVec,
        s_val: Scalar,
        c_val: Scalar,
    ) -> Result<Self> {
        if p.rank() != module.rank() {
            return Err(Error::Validation {
                path: "p".into(),
                message: "hyperbolic exponent has wrong rank".into(),
            });
        }
        if p.is_zero() {
            return Err(Error::ZeroExponentVector);
        }
        Ok(WeylPresentation {
            id: fresh_presentation_id(),
            tower,
            module,
            mode,
            p,
            s_val,
            c_val,
            y_value: None,
        })
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn module(&self) -> &ExponentModule {
        &self.module
    }

    pub fn mode(&self) -> HyperMode {
        self.mode
    }

    pub fn hyper_exponent(&self) -> &ExponentVec {
        &self.p
    }

    pub fn rank(&self) -> usize {
        self.module.rank()
    }

    pub fn is_fiber(&self) -> bool {
        self.y_value.is_some()
    }

    pub fn unit_monomial(&self) -> WeylMonomial {
        WeylMonomial::unit(self.rank())
    }

    /// Element with one monomial; collapses `y^k` into the coefficient when a
    /// fiber specialization is active. The t-derivative direction only exists
    /// in analytic mode (central mode has no t-structure: `y` is atomic).
    pub fn monomial_element(&self, m: WeylMonomial, coeff: Scalar) -> Result<Element> {
        if self.mode == HyperMode::Central && m.dt > 0 {
            return Err(Error::Unsupported(
                "dt is not a generator of the central-mode family".into(),
            ));
        }
        let (m, coeff) = self.canonicalize(m, coeff)?;
        let mut e = Element { pres: self.id, terms: BTreeMap::new() };
        if !self.tower.is_zero(&coeff) {
            e.terms.insert(Monomial::Weyl(m), coeff);
        }
        Ok(e)
    }

    fn canonicalize(&self, mut m: WeylMonomial, mut coeff: Scalar) -> Result<(WeylMonomial, Scalar)> {
        if let Some(lambda) = &self.y_value {
            if m.hyper != 0 {
                coeff = self.tower.mul(&coeff, &self.tower.pow(lambda, m.hyper)?);
                m.hyper = 0;
            }
        }
        Ok((m, coeff))
    }

    /// Replace `y` by a nonzero scalar, producing the fiber presentation.
    pub fn specialize_y(&self, lambda: Scalar) -> Result<WeylPresentation> {
        if self.mode != HyperMode::Central {
            return Err(Error::Unsupported(
                "fiber specialization requires the central hyperbolic mode".into(),
            ));
        }
        if self.tower.is_zero(&lambda) {
            return Err(Error::Validation {
                path: "lambda".into(),
                message: "fiber point must be nonzero".into(),
            });
        }
        let mut out = self.clone();
        out.id = fresh_presentation_id();
        out.y_value = Some(lambda);
        Ok(out)
    }

    /// Map an element of this presentation into the fiber presentation.
    pub fn specialize_element(&self, fiber: &WeylPresentation, e: &Element) -> Result<Element> {
        if e.pres != self.id {
            return Err(Error::MixedPresentations);
        }
        let mut out = fiber.zero_element_raw();
        for (m, c) in &e.terms {
            let Monomial::Weyl(m) = m else { return Err(Error::MixedPresentations) };
            let piece = fiber.monomial_element(m.clone(), c.clone())?;
            out = merge(&fiber.tower, out, piece);
        }
        Ok(out)
    }

    fn zero_element_raw(&self) -> Element {
        Element { pres: self.id, terms: BTreeMap::new() }
    }

    // ----- distinguished generator elements -----

    pub fn x_power(&self, beta: ExponentVec) -> Result<Element> {
        let mut m = self.unit_monomial();
        m.beta = beta;
        self.monomial_element(m, self.tower.one())
    }

    pub fn exp_gamma(&self, gamma: ExponentVec) -> Result<Element> {
        let mut m = self.unit_monomial();
        m.gamma = gamma;
        self.monomial_element(m, self.tower.one())
    }

    pub fn hyper_power(&self, k: i64) -> Result<Element> {
        let mut m = self.unit_monomial();
        m.hyper = k;
        self.monomial_element(m, self.tower.one())
    }

    pub fn dx(&self) -> Result<Element> {
        let mut m = self.unit_monomial();
        m.dx = 1;
        self.monomial_element(m, self.tower.one())
    }

    pub fn dt(&self) -> Result<Element> {
        let mut m = self.unit_monomial();
        m.dt = 1;
        self.monomial_element(m, self.tower.one())
    }

    /// sinh(alpha x) = (e^{alpha x} - e^{-alpha x})/2.
    pub fn sinh_alpha(&self, alpha: &ExponentVec) -> Result<Element> {
        let half = self.tower.ratio(1, 2);
        let plus = self.exp_gamma(alpha.clone())?;
        let minus = self.exp_gamma(alpha.neg())?;
        let mut out = self.zero_element_raw();
        out = merge(&self.tower, out, scaled(&self.tower, &plus, &half));
        out = merge(&self.tower, out, scaled(&self.tower, &minus, &self.tower.neg(&half)));
        Ok(out)
    }

    /// cosh(alpha x) = (e^{alpha x} + e^{-alpha x})/2.
    pub fn cosh_alpha(&self, alpha: &ExponentVec) -> Result<Element> {
        let half = self.tower.ratio(1, 2);
        let plus = self.exp_gamma(alpha.clone())?;
        let minus = self.exp_gamma(alpha.neg())?;
        let mut out = self.zero_element_raw();
        out = merge(&self.tower, out, scaled(&self.tower, &plus, &half));
        out = merge(&self.tower, out, scaled(&self.tower, &minus, &half));
        Ok(out)
    }

    pub fn generators(&self) -> Vec<(String, Element)> {
        let rank = self.rank();
        let mut gens = Vec::new();
        let one = self.module.one_vec().clone();
        gens.push(("x".to_string(), self.x_power(one).expect("valid monomial")));
        for i in 0..rank {
            let b = ExponentVec::unit(rank, i);
            gens.push((format!("x^{:?}", b.0), self.x_power(b.clone()).expect("valid")));
            gens.push((format!("E^{:?}", b.0), self.exp_gamma(b.clone()).expect("valid")));
            gens.push((format!("E^-{:?}", b.0), self.exp_gamma(b.neg()).expect("valid")));
        }
        if !self.is_fiber() {
            gens.push(("y".to_string(), self.hyper_power(1).expect("valid")));
            gens.push(("y^-1".to_string(), self.hyper_power(-1).expect("valid")));
        }
        gens.push(("dx".to_string(), self.dx().expect("valid")));
        if self.mode == HyperMode::Analytic {
            gens.push(("dt".to_string(), self.dt().expect("valid")));
        }
        // deduplicate x == x^{one} when the module is rank 1 with basis 1
        let mut seen = std::collections::BTreeSet::new();
        gens.retain(|(_, e)| seen.insert(format!("{:?}", e.terms)));
        gens
    }

    // ----- multiplication -----

    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        let mut out = self.zero_element_raw();
        for (ma, ca) in &a.terms {
            let Monomial::Weyl(ma) = ma else { return Err(Error::MixedPresentations) };
            for (mb, cb) in &b.terms {
                let Monomial::Weyl(mb) = mb else { return Err(Error::MixedPresentations) };
                let piece = self.mono_mul(ma, ca, mb, cb)?;
                out = merge(&self.tower, out, piece);
            }
        }
        Ok(out)
    }

    /// Product of two canonical monomials with the right-hand coefficient
    /// inside the derivative push (d/dt differentiates coefficients).
    fn mono_mul(
        &self,
        a: &WeylMonomial,
        ca: &Scalar,
        b: &WeylMonomial,
        cb: &Scalar,
    ) -> Result<Element> {
        let tower = &self.tower;
        // Layers of the t-derivation applied to cb * (function part of b).
        // The function part varies only in beta (the hyperbolic chain rule
        // multiplies by c * x^p), so each layer maps beta -> coefficient.
        let mut t_layers: Vec<BTreeMap<ExponentVec, Scalar>> = Vec::with_capacity(a.dt as usize + 1);
        let mut cur = BTreeMap::from([(b.beta.clone(), cb.clone())]);
        t_layers.push(cur.clone());
        for _ in 0..a.dt {
            let mut next: BTreeMap<ExponentVec, Scalar> = BTreeMap::new();
            for (beta, c) in &cur {
                let dc = tower.derive(c)?;
                if !tower.is_zero(&dc) {
                    add_into(tower, &mut next, beta.clone(), dc);
                }
                if self.mode == HyperMode::Analytic && b.hyper != 0 {
                    let factor = tower.mul(&tower.from_int(b.hyper), &self.c_val);
                    let coeff = tower.mul(c, &factor);
                    if !tower.is_zero(&coeff) {
                        add_into(tower, &mut next, beta.add(&self.p), coeff);
                    }
                }
            }
            t_layers.push(next.clone());
            cur = next;
        }

        let ep = self.module.embed(tower, &self.p);
        let eg = self.module.embed(tower, &b.gamma);
        let one_vec = self.module.one_vec().clone();

        let mut out = self.zero_element_raw();
        for (i, layer) in t_layers.iter().enumerate() {
            let bin_t = tower.from_int(binomial(a.dt, i as u32) as i64);
            if layer.is_empty() {
                continue;
            }
            // x-derivation layers for this t-layer; again only beta moves.
            let mut x_cur: BTreeMap<ExponentVec, Scalar> = layer.clone();
            for j in 0..=a.dx {
                let bin_x = tower.from_int(binomial(a.dx, j) as i64);
                let weight = tower.mul(&bin_t, &bin_x);
                for (beta, c) in &x_cur {
                    let coeff = tower.mul(&tower.mul(ca, &weight), c);
                    if tower.is_zero(&coeff) {
                        continue;
                    }
                    let mono = WeylMonomial {
                        hyper: a.hyper + b.hyper,
                        beta: a.beta.add(beta),
                        gamma: a.gamma.add(&b.gamma),
                        dx: a.dx - j + b.dx,
                        dt: a.dt - i as u32 + b.dt,
                    };
                    let piece = self.monomial_element(mono, coeff)?;
                    out = merge(tower, out, piece);
                }
                if j == a.dx {
                    break;
                }
                // apply the x-derivation once
                let mut next: BTreeMap<ExponentVec, Scalar> = BTreeMap::new();
                for (beta, c) in &x_cur {
                    let eb = self.module.embed(tower, beta);
                    if !tower.is_zero(&eb) {
                        add_into(tower, &mut next, beta.sub(&one_vec), tower.mul(c, &eb));
                    }
                    if !tower.is_zero(&eg) {
                        add_into(tower, &mut next, beta.clone(), tower.mul(c, &eg));
                    }
                    if self.mode == HyperMode::Analytic && b.hyper != 0 && !tower.is_zero(&ep) {
                        let factor = tower.mul(
                            &tower.mul(&tower.from_int(b.hyper), &ep),
                            &self.s_val,
                        );
                        let coeff = tower.mul(c, &factor);
                        if !tower.is_zero(&coeff) {
                            add_into(tower, &mut next, beta.add(&self.p).sub(&one_vec), coeff);
                        }
                    }
                }
                x_cur = next;
                if x_cur.is_empty() {
                    break;
                }
            }
        }
        Ok(out)
    }

    // ----- enumeration -----

    /// All canonical monomials of total degree <= d; exponent supports are
    /// automatically limited to coordinate 1-norm <= d by the degree bound.
    pub fn monomials_up_to_degree(&self, d: u64, cap: usize) -> Result<Vec<Monomial>> {
        let rank = self.rank();
        let d = d as i64;
        let mut out = Vec::new();
        let hyper_range: Vec<i64> = if self.is_fiber() { vec![0] } else { (-d..=d).collect() };
        let mut betas: Vec<ExponentVec> = Vec::new();
        signed_vectors(rank, d, &mut vec![0; rank], 0, &mut betas);
        for h in hyper_range {
            let rem_h = d - h.abs();
            if rem_h < 0 {
                continue;
            }
            for beta in betas.iter().filter(|b| (b.norm1() as i64) <= rem_h) {
                let rem_b = rem_h - beta.norm1() as i64;
                for gamma in betas.iter().filter(|g| (g.norm1() as i64) <= rem_b) {
                    let rem_g = rem_b - gamma.norm1() as i64;
                    for m in 0..=rem_g {
                        let n_limit = match self.mode {
                            HyperMode::Analytic => rem_g - m,
                            HyperMode::Central => 0,
                        };
                        for n in 0..=n_limit {
                            out.push(Monomial::Weyl(WeylMonomial {
                                hyper: h,
                                beta: beta.clone(),
                                gamma: gamma.clone(),
                                dx: m as u32,
                                dt: n as u32,
                            }));
                            if out.len() > cap {
                                return Err(Error::CapExceeded { cap, needed: out.len() });
                            }
                        }
                    }
                }
            }
        }
        out.sort();
        Ok(out)
    }

    pub fn render_monomial(&self, m: &WeylMonomial) -> String {
        let mut parts = Vec::new();
        if m.hyper != 0 {
            parts.push(format!("y^{}", m.hyper));
        }
        if !m.beta.is_zero() {
            parts.push(format!(
                "x^({})",
                m.beta.0.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
            ));
        }
        if !m.gamma.is_zero() {
            parts.push(format!(
                "E^({})",
                m.gamma.0.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
            ));
        }
        for _ in 0..m.dx {
            parts.push("dx".to_string());
        }
        for _ in 0..m.dt {
            parts.push("dt".to_string());
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    pub fn describe(&self) -> String {
        format!(
            "weyl-hyperbolic rank={} mode={:?} p={:?} fiber={}",
            self.rank(),
            self.mode,
            self.p.0,
            self.y_value.is_some()
        )
    }
}

/// All integer vectors of the given rank with 1-norm <= budget.
fn signed_vectors(rank: usize, budget: i64, cur: &mut Vec<i64>, idx: usize, out: &mut Vec<ExponentVec>) {
    if idx == rank {
        out.push(ExponentVec(cur.clone()));
        return;
    }
    let used: i64 = cur[..idx].iter().map(|c| c.abs()).sum();
    let room = budget - used;
    for v in -room..=room {
        cur[idx] = v;
        signed_vectors(rank, budget, cur, idx + 1, out);
    }
    cur[idx] = 0;
}

fn add_into(tower: &Tower, map: &mut BTreeMap<ExponentVec, Scalar>, key: ExponentVec, val: Scalar) {
    match map.remove(&key) {
        Some(old) => {
            let s = tower.add(&old, &val);
            if !tower.is_zero(&s) {
                map.insert(key, s);
            }
        }
        None => {
            map.insert(key, val);
        }
    }
}

fn merge(tower: &Tower, mut a: Element, b: Element) -> Element {
    for (m, c) in b.terms {
        match a.terms.remove(&m) {
            Some(old) => {
                let s = tower.add(&old, &c);
                if !tower.is_zero(&s) {
                    a.terms.insert(m, s);
                }
            }
            None => {
                a.terms.insert(m, c);
            }
        }
    }
    a
}

fn scaled(tower: &Tower, e: &Element, k: &Scalar) -> Element {
    let mut out = Element { pres: e.pres, terms: BTreeMap::new() };
    for (m, c) in &e.terms {
        let s = tower.mul(c, k);
        if !tower.is_zero(&s) {
            out.terms.insert(m.clone(), s);
        }
    }
    out
}
