//! Exact coefficient arithmetic.
//!
//! The coefficient field is built as a tower over the rationals: each level
//! adjoins one named constant, either transcendental (rational-function
//! arithmetic in that constant) or algebraic (reduction by a monic minimal
//! polynomial with rational coefficients). A formal t-derivation acts through
//! declared edges between constants (e.g. `s -> c`, `c -> s`).
//!
//! A [`Scalar`] is always stored in a unique normal form: algebraic powers are
//! reduced below the minimal-polynomial degree, transcendental levels are
//! reduced fractions with monic denominators. Equality is therefore plain
//! structural comparison.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// How a constant behaves under the formal d/dt.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Derivative {
    /// No derivative declared; applying the derivation to this constant is an error.
    Undeclared,
    /// The constant is t-independent.
    Zero,
    /// The derivative is another declared constant.
    Constant(String),
}

/// Kind of an adjoined constant.
#[derive(Debug, Clone, PartialEq)]
pub enum ConstantKind {
    Transcendental,
    /// Monic minimal polynomial with rational coefficients, given as
    /// `c[0] + c[1] X + ... + c[d] X^d` with `c[d] = 1` and `d >= 1`.
    Algebraic(Vec<BigRational>),
}

/// Declaration of a single constant in the tower.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantSpec {
    pub name: String,
    pub kind: ConstantKind,
    pub t_derivative: Derivative,
}

impl ConstantSpec {
    pub fn transcendental(name: &str, t_derivative: Derivative) -> Self {
        ConstantSpec {
            name: name.to_string(),
            kind: ConstantKind::Transcendental,
            t_derivative,
        }
    }

    pub fn algebraic(name: &str, minpoly: Vec<BigRational>, t_derivative: Derivative) -> Self {
        ConstantSpec {
            name: name.to_string(),
            kind: ConstantKind::Algebraic(minpoly),
            t_derivative,
        }
    }
}

/// Normal-form representation. The nesting depth equals the (effective)
/// number of tower levels: level 0 is a plain rational, an algebraic level is
/// a polynomial of bounded degree in its constant, a transcendental level is
/// a reduced fraction of polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Node {
    Q(BigRational),
    /// Coefficients over the next level down; trailing zeros trimmed.
    Poly(Vec<Node>),
    /// (numerator, denominator); denominator monic and coprime to numerator.
    Frac(Vec<Node>, Vec<Node>),
}

/// An element of the coefficient field, owned data only; all arithmetic goes
/// through the [`Tower`] it was built with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scalar(Node);

/// The coefficient field: rationals extended by the declared constants.
///
/// When a specialization is present every constant is replaced by its rational
/// value and all scalars collapse to plain rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct Tower {
    constants: Vec<ConstantSpec>,
    specialization: Option<Vec<BigRational>>,
}

impl Tower {
    /// The rationals: no constants.
    pub fn rationals() -> Self {
        Tower { constants: Vec::new(), specialization: None }
    }

    /// Build a tower, validating names, minimal polynomials and the
    /// derivation graph.
    pub fn new(constants: Vec<ConstantSpec>) -> Result<Self> {
        for (i, c) in constants.iter().enumerate() {
            if constants[..i].iter().any(|d| d.name == c.name) {
                return Err(Error::Validation {
                    path: format!("constants[{i}].name"),
                    message: format!("duplicate constant `{}`", c.name),
                });
            }
            if let ConstantKind::Algebraic(mp) = &c.kind {
                if mp.len() < 2 {
                    return Err(Error::Validation {
                        path: format!("constants[{i}].minpoly"),
                        message: "minimal polynomial must have degree >= 1".into(),
                    });
                }
                if !mp.last().unwrap().is_one() {
                    return Err(Error::Validation {
                        path: format!("constants[{i}].minpoly"),
                        message: "minimal polynomial must be monic".into(),
                    });
                }
            }
            if let Derivative::Constant(d) = &c.t_derivative {
                if !constants.iter().any(|e| &e.name == d) {
                    return Err(Error::Validation {
                        path: format!("constants[{i}].t_derivative"),
                        message: format!("derivative `{d}` is not a declared constant"),
                    });
                }
            }
        }
        Ok(Tower { constants, specialization: None })
    }

    /// Replace every constant by a rational value. Algebraic relations are
    /// verified to hold at the chosen values; extra relation polynomials can
    /// be checked by the caller via [`Tower::parse_scalar`] on the original
    /// tower.
    pub fn specialize(&self, values: &[(String, BigRational)]) -> Result<Tower> {
        let mut assigned = Vec::with_capacity(self.constants.len());
        for (i, c) in self.constants.iter().enumerate() {
            let v = values
                .iter()
                .find(|(n, _)| n == &c.name)
                .map(|(_, v)| v.clone())
                .ok_or_else(|| Error::Validation {
                    path: format!("constants[{i}]"),
                    message: format!("no specialization value for `{}`", c.name),
                })?;
            if let ConstantKind::Algebraic(mp) = &c.kind {
                let mut acc = BigRational::zero();
                for coeff in mp.iter().rev() {
                    acc = acc * &v + coeff;
                }
                if !acc.is_zero() {
                    return Err(Error::Validation {
                        path: format!("constants[{i}]"),
                        message: format!(
                            "specialization {}={} does not satisfy the minimal polynomial",
                            c.name, v
                        ),
                    });
                }
            }
            assigned.push(v);
        }
        Ok(Tower { constants: self.constants.clone(), specialization: Some(assigned) })
    }

    pub fn is_specialized(&self) -> bool {
        self.specialization.is_some()
    }

    pub fn constants(&self) -> &[ConstantSpec] {
        &self.constants
    }

    /// Effective number of levels in the normal form.
    fn height(&self) -> usize {
        if self.specialization.is_some() { 0 } else { self.constants.len() }
    }

    fn level_kind(&self, level: usize) -> &ConstantKind {
        &self.constants[level - 1].kind
    }

    // ----- construction -----

    pub fn zero(&self) -> Scalar {
        Scalar(self.node_from_rat(self.height(), BigRational::zero()))
    }

    pub fn one(&self) -> Scalar {
        Scalar(self.node_from_rat(self.height(), BigRational::one()))
    }

    pub fn from_rational(&self, q: BigRational) -> Scalar {
        Scalar(self.node_from_rat(self.height(), q))
    }

    pub fn from_int(&self, n: i64) -> Scalar {
        self.from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(&self, num: i64, den: i64) -> Scalar {
        self.from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// The named constant as a field element. Under a specialization this is
    /// its rational value.
    pub fn constant(&self, name: &str) -> Result<Scalar> {
        let idx = self
            .constants
            .iter()
            .position(|c| c.name == name)
            .ok_or_else(|| Error::Validation {
                path: "constant".into(),
                message: format!("unknown constant `{name}`"),
            })?;
        if let Some(values) = &self.specialization {
            return Ok(Scalar(Node::Q(values[idx].clone())));
        }
        // X at level idx+1, embedded to the top.
        let level = idx + 1;
        let x = vec![self.node_from_rat(idx, BigRational::zero()), self.node_from_rat(idx, BigRational::one())];
        let node = match self.level_kind(level) {
            ConstantKind::Algebraic(_) => Node::Poly(x),
            ConstantKind::Transcendental => Node::Frac(x, vec![self.node_from_rat(idx, BigRational::one())]),
        };
        Ok(Scalar(self.embed(level, node)))
    }

    fn node_from_rat(&self, level: usize, q: BigRational) -> Node {
        if level == 0 {
            return Node::Q(q);
        }
        let inner = self.node_from_rat(level - 1, q.clone());
        let coeffs = if self.node_is_zero(&inner) { Vec::new() } else { vec![inner] };
        match self.level_kind(level) {
            ConstantKind::Algebraic(_) => Node::Poly(coeffs),
            ConstantKind::Transcendental => {
                Node::Frac(coeffs, vec![self.node_from_rat(level - 1, BigRational::one())])
            }
        }
    }

    /// Lift a node at `level` to the top of the tower.
    fn embed(&self, level: usize, node: Node) -> Node {
        let mut node = node;
        for lv in level + 1..=self.height() {
            let coeffs = if self.node_is_zero(&node) { Vec::new() } else { vec![node] };
            node = match self.level_kind(lv) {
                ConstantKind::Algebraic(_) => Node::Poly(coeffs),
                ConstantKind::Transcendental => {
                    Node::Frac(coeffs, vec![self.node_from_rat(lv - 1, BigRational::one())])
                }
            };
        }
        node
    }

    // ----- predicates -----

    fn node_is_zero(&self, n: &Node) -> bool {
        match n {
            Node::Q(q) => q.is_zero(),
            Node::Poly(c) => c.is_empty(),
            Node::Frac(num, _) => num.is_empty(),
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        self.node_is_zero(&a.0)
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        a == &self.one()
    }

    // ----- field operations -----

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        Scalar(self.nadd(self.height(), &a.0, &b.0))
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        Scalar(self.nadd(self.height(), &a.0, &self.nneg(self.height(), &b.0)))
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        Scalar(self.nneg(self.height(), &a.0))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        Scalar(self.nmul(self.height(), &a.0, &b.0))
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        Ok(Scalar(self.ninv(self.height(), &a.0)?))
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Returns `a + c*b`.
    pub fn add_mul(&self, a: &Scalar, c: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.mul(c, b))
    }

    pub fn pow(&self, a: &Scalar, n: i64) -> Result<Scalar> {
        let base = if n < 0 { self.inv(a)? } else { a.clone() };
        let mut acc = self.one();
        for _ in 0..n.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        Ok(acc)
    }

    fn nadd(&self, level: usize, a: &Node, b: &Node) -> Node {
        match (a, b) {
            (Node::Q(x), Node::Q(y)) => Node::Q(x + y),
            (Node::Poly(x), Node::Poly(y)) => Node::Poly(self.padd(level - 1, x, y)),
            (Node::Frac(an, ad), Node::Frac(bn, bd)) => {
                // an/ad + bn/bd = (an*bd + bn*ad) / (ad*bd)
                let num = self.padd(
                    level - 1,
                    &self.pmul(level - 1, an, bd),
                    &self.pmul(level - 1, bn, ad),
                );
                let den = self.pmul(level - 1, ad, bd);
                self.make_frac(level, num, den)
            }
            _ => unreachable!("mismatched scalar shapes"),
        }
    }

    fn nneg(&self, level: usize, a: &Node) -> Node {
        match a {
            Node::Q(x) => Node::Q(-x),
            Node::Poly(x) => Node::Poly(self.pneg(level - 1, x)),
            Node::Frac(n, d) => Node::Frac(self.pneg(level - 1, n), d.clone()),
        }
    }

    fn nmul(&self, level: usize, a: &Node, b: &Node) -> Node {
        match (a, b) {
            (Node::Q(x), Node::Q(y)) => Node::Q(x * y),
            (Node::Poly(x), Node::Poly(y)) => {
                let prod = self.pmul(level - 1, x, y);
                Node::Poly(self.reduce_algebraic(level, prod))
            }
            (Node::Frac(an, ad), Node::Frac(bn, bd)) => {
                let num = self.pmul(level - 1, an, bn);
                let den = self.pmul(level - 1, ad, bd);
                self.make_frac(level, num, den)
            }
            _ => unreachable!("mismatched scalar shapes"),
        }
    }

    fn ninv(&self, level: usize, a: &Node) -> Result<Node> {
        if self.node_is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        match a {
            Node::Q(x) => Ok(Node::Q(x.recip())),
            Node::Poly(f) => {
                // extended Euclid against the minimal polynomial
                let minpoly = self.minpoly_at(level);
                let (g, u) = self.pegcd(level - 1, f, &minpoly);
                if g.len() != 1 {
                    return Err(Error::NonInvertible {
                        constant: self.constants[level - 1].name.clone(),
                    });
                }
                let ginv = self.ninv(level - 1, &g[0])?;
                let scaled = self.pscale(level - 1, &u, &ginv);
                Ok(Node::Poly(self.reduce_algebraic(level, scaled)))
            }
            Node::Frac(n, d) => Ok(self.make_frac(level, d.clone(), n.clone())),
        }
    }

    /// Minimal polynomial of the level's constant, lifted to level-1 coefficients.
    fn minpoly_at(&self, level: usize) -> Vec<Node> {
        match self.level_kind(level) {
            ConstantKind::Algebraic(mp) => mp
                .iter()
                .map(|q| self.node_from_rat(level - 1, q.clone()))
                .collect(),
            ConstantKind::Transcendental => unreachable!(),
        }
    }

    /// Reduce a polynomial in an algebraic constant below the minpoly degree.
    fn reduce_algebraic(&self, level: usize, poly: Vec<Node>) -> Vec<Node> {
        let minpoly = self.minpoly_at(level);
        let (_, r) = self.pdivrem(level - 1, &poly, &minpoly);
        r
    }

    /// Normalized fraction constructor: reduce by gcd, make denominator monic.
    fn make_frac(&self, level: usize, num: Vec<Node>, den: Vec<Node>) -> Node {
        assert!(!den.is_empty(), "zero denominator");
        if num.is_empty() {
            return Node::Frac(Vec::new(), vec![self.node_from_rat(level - 1, BigRational::one())]);
        }
        let g = self.pgcd(level - 1, &num, &den);
        let (num, _) = self.pdivrem(level - 1, &num, &g);
        let (den, _) = self.pdivrem(level - 1, &den, &g);
        // make denominator monic
        let lc = den.last().unwrap().clone();
        let lcinv = self.ninv(level - 1, &lc).expect("leading coefficient invertible");
        let num = self.pscale(level - 1, &num, &lcinv);
        let den = self.pscale(level - 1, &den, &lcinv);
        Node::Frac(num, den)
    }

    // ----- polynomial helpers over level-`lv` coefficients -----

    fn ptrim(&self, mut p: Vec<Node>) -> Vec<Node> {
        while let Some(last) = p.last() {
            if self.node_is_zero(last) {
                p.pop();
            } else {
                break;
            }
        }
        p
    }

    fn padd(&self, lv: usize, a: &[Node], b: &[Node]) -> Vec<Node> {
        let n = a.len().max(b.len());
        let zero = self.node_from_rat(lv, BigRational::zero());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let x = a.get(i).unwrap_or(&zero);
            let y = b.get(i).unwrap_or(&zero);
            out.push(self.nadd(lv, x, y));
        }
        self.ptrim(out)
    }

    fn pneg(&self, lv: usize, a: &[Node]) -> Vec<Node> {
        a.iter().map(|x| self.nneg(lv, x)).collect()
    }

    fn pmul(&self, lv: usize, a: &[Node], b: &[Node]) -> Vec<Node> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.node_from_rat(lv, BigRational::zero()); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if self.node_is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let prod = self.nmul(lv, x, y);
                out[i + j] = self.nadd(lv, &out[i + j], &prod);
            }
        }
        self.ptrim(out)
    }

    fn pscale(&self, lv: usize, a: &[Node], k: &Node) -> Vec<Node> {
        self.ptrim(a.iter().map(|x| self.nmul(lv, x, k)).collect())
    }

    /// Division with remainder; coefficients form a field, so this is exact.
    fn pdivrem(&self, lv: usize, a: &[Node], b: &[Node]) -> (Vec<Node>, Vec<Node>) {
        assert!(!b.is_empty(), "polynomial division by zero");
        let zero = self.node_from_rat(lv, BigRational::zero());
        let mut rem: Vec<Node> = a.to_vec();
        rem = self.ptrim(rem);
        if rem.len() < b.len() {
            return (Vec::new(), rem);
        }
        let mut quot = vec![zero; rem.len() - b.len() + 1];
        let lcinv = self.ninv(lv, b.last().unwrap()).expect("leading coefficient invertible");
        while rem.len() >= b.len() && !rem.is_empty() {
            let shift = rem.len() - b.len();
            let coef = self.nmul(lv, rem.last().unwrap(), &lcinv);
            quot[shift] = coef.clone();
            for (i, bc) in b.iter().enumerate() {
                let sub = self.nmul(lv, &coef, bc);
                rem[shift + i] = self.nadd(lv, &rem[shift + i], &self.nneg(lv, &sub));
            }
            rem = self.ptrim(rem);
        }
        (self.ptrim(quot), rem)
    }

    /// Monic gcd via Euclid.
    fn pgcd(&self, lv: usize, a: &[Node], b: &[Node]) -> Vec<Node> {
        let mut a = self.ptrim(a.to_vec());
        let mut b = self.ptrim(b.to_vec());
        while !b.is_empty() {
            let (_, r) = self.pdivrem(lv, &a, &b);
            a = b;
            b = r;
        }
        if a.is_empty() {
            return a;
        }
        let lcinv = self.ninv(lv, a.last().unwrap()).expect("leading coefficient invertible");
        self.pscale(lv, &a, &lcinv)
    }

    /// Partial extended Euclid: returns (g, u) with u*a = g (mod m).
    fn pegcd(&self, lv: usize, a: &[Node], m: &[Node]) -> (Vec<Node>, Vec<Node>) {
        let one = vec![self.node_from_rat(lv, BigRational::one())];
        let mut r0 = self.ptrim(m.to_vec());
        let mut r1 = self.ptrim(a.to_vec());
        let mut u0: Vec<Node> = Vec::new();
        let mut u1 = one;
        while !r1.is_empty() {
            let (q, r) = self.pdivrem(lv, &r0, &r1);
            let qu = self.pmul(lv, &q, &u1);
            let unew = self.padd(lv, &u0, &self.pneg(lv, &qu));
            r0 = r1;
            r1 = r;
            u0 = u1;
            u1 = unew;
        }
        (r0, u0)
    }

    // ----- t-derivation -----

    /// Formal d/dt. Linear, satisfies the product rule; rationals map to zero.
    pub fn derive(&self, a: &Scalar) -> Result<Scalar> {
        self.derive_node(self.height(), &a.0)
    }

    fn constant_derivative(&self, level: usize) -> Result<Scalar> {
        match &self.constants[level - 1].t_derivative {
            Derivative::Undeclared => Err(Error::UndeclaredDerivative {
                constant: self.constants[level - 1].name.clone(),
            }),
            Derivative::Zero => Ok(self.zero()),
            Derivative::Constant(name) => self.constant(name),
        }
    }

    /// Derivative of a level-`level` node, returned as a top-level scalar.
    fn derive_node(&self, level: usize, node: &Node) -> Result<Scalar> {
        match node {
            Node::Q(_) => Ok(self.zero()),
            Node::Poly(coeffs) => self.derive_poly(level, coeffs),
            Node::Frac(num, den) => {
                // (n/d)' = (n' d - n d') / d^2
                let n = Scalar(self.embed(level, Node::Frac(num.clone(), vec![self.node_from_rat(level - 1, BigRational::one())])));
                let d = Scalar(self.embed(level, Node::Frac(den.clone(), vec![self.node_from_rat(level - 1, BigRational::one())])));
                let dn = self.derive_poly(level, num)?;
                let dd = self.derive_poly(level, den)?;
                let top = self.sub(&self.mul(&dn, &d), &self.mul(&n, &dd));
                self.div(&top, &self.mul(&d, &d))
            }
        }
    }

    /// Derivative of sum a_i X^i with X the constant at `level`.
    fn derive_poly(&self, level: usize, coeffs: &[Node]) -> Result<Scalar> {
        let mut acc = self.zero();
        if coeffs.is_empty() {
            return Ok(acc);
        }
        let x = self.level_constant_scalar(level);
        // chain-rule part: sum over i >= 1 of i * a_i * X^{i-1} * X'
        if coeffs.len() > 1 {
            let dx = self.constant_derivative(level)?;
            if !self.is_zero(&dx) {
                let mut xpow = self.one();
                for (i, c) in coeffs.iter().enumerate().skip(1) {
                    let ci = Scalar(self.embed(level - 1, c.clone()));
                    let term = self.mul(&self.mul(&self.from_int(i as i64), &ci), &xpow);
                    acc = self.add(&acc, &self.mul(&term, &dx));
                    xpow = self.mul(&xpow, &x);
                }
            }
        }
        // coefficient part
        let mut xpow = self.one();
        for (i, c) in coeffs.iter().enumerate() {
            let dc = self.derive_node(level - 1, c)?;
            if !self.is_zero(&dc) {
                acc = self.add(&acc, &self.mul(&dc, &xpow));
            }
            if i + 1 < coeffs.len() {
                xpow = self.mul(&xpow, &x);
            }
        }
        Ok(acc)
    }

    /// X at `level` as a top-level scalar (never specialized here: callers
    /// only reach this for formal towers).
    fn level_constant_scalar(&self, level: usize) -> Scalar {
        let x = vec![
            self.node_from_rat(level - 1, BigRational::zero()),
            self.node_from_rat(level - 1, BigRational::one()),
        ];
        let node = match self.level_kind(level) {
            ConstantKind::Algebraic(_) => Node::Poly(x),
            ConstantKind::Transcendental => {
                Node::Frac(x, vec![self.node_from_rat(level - 1, BigRational::one())])
            }
        };
        Scalar(self.embed(level, node))
    }

    // ----- conversions and rendering -----

    /// Rational value of a scalar that contains no constants.
    pub fn to_rational(&self, a: &Scalar) -> Option<BigRational> {
        Self::node_to_rational(&a.0)
    }

    fn node_to_rational(node: &Node) -> Option<BigRational> {
        match node {
            Node::Q(q) => Some(q.clone()),
            Node::Poly(c) => match c.len() {
                0 => Some(BigRational::zero()),
                1 => Self::node_to_rational(&c[0]),
                _ => None,
            },
            Node::Frac(n, d) => {
                if d.len() != 1 {
                    return None;
                }
                let dv = Self::node_to_rational(&d[0])?;
                let nv = match n.len() {
                    0 => BigRational::zero(),
                    1 => Self::node_to_rational(&n[0])?,
                    _ => return None,
                };
                Some(nv / dv)
            }
        }
    }

    pub fn render(&self, a: &Scalar) -> String {
        self.render_node(self.height(), &a.0)
    }

    fn render_node(&self, level: usize, node: &Node) -> String {
        match node {
            Node::Q(q) => render_rational(q),
            Node::Poly(c) => self.render_poly(level, c),
            Node::Frac(n, d) => {
                let num = self.render_poly(level, n);
                if d.len() == 1 && self.node_is_zero(&self.nadd(level - 1, &d[0], &self.nneg(level - 1, &self.node_from_rat(level - 1, BigRational::one())))) {
                    num
                } else {
                    format!("({})/({})", num, self.render_poly(level, d))
                }
            }
        }
    }

    fn render_poly(&self, level: usize, coeffs: &[Node]) -> String {
        if coeffs.is_empty() {
            return "0".to_string();
        }
        let name = &self.constants[level - 1].name;
        let mut parts = Vec::new();
        for (i, c) in coeffs.iter().enumerate() {
            if self.node_is_zero(c) {
                continue;
            }
            let cs = self.render_node(level - 1, c);
            let coef = if cs == "1" && i > 0 {
                String::new()
            } else if needs_parens(&cs) {
                format!("({cs})")
            } else {
                cs
            };
            let var = match i {
                0 => String::new(),
                1 => name.clone(),
                _ => format!("{name}^{i}"),
            };
            let part = match (coef.is_empty(), var.is_empty()) {
                (true, false) => var,
                (false, true) => coef,
                (false, false) => format!("{coef}*{var}"),
                (true, true) => "1".to_string(),
            };
            parts.push(part);
        }
        parts.join(" + ")
    }

    // ----- scalar expression parsing -----

    /// Parse a scalar expression: sums of terms, each a product of rational
    /// literals and constant names with optional integer powers, with
    /// parenthesized subexpressions and `/` between factors.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar> {
        let mut p = ScalarParser { tower: self, chars: text.chars().collect(), pos: 0, src: text };
        let v = p.sum()?;
        p.skip_ws();
        if p.pos != p.chars.len() {
            return Err(p.err("trailing input"));
        }
        Ok(v)
    }
}

fn render_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn needs_parens(s: &str) -> bool {
    s.contains('+') || s.contains('/') || (s.len() > 1 && s[1..].contains('-')) || s.contains('*')
}

struct ScalarParser<'a> {
    tower: &'a Tower,
    chars: Vec<char>,
    pos: usize,
    src: &'a str,
}

impl<'a> ScalarParser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            context: format!("scalar `{}` at position {}", self.src, self.pos),
            message: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn sum(&mut self) -> Result<Scalar> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.pos += 1;
                self.tower.neg(&self.product()?)
            }
            Some('+') => {
                self.pos += 1;
                self.product()?
            }
            _ => self.product()?,
        };
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    let t = self.product()?;
                    acc = self.tower.add(&acc, &t);
                }
                '-' => {
                    self.pos += 1;
                    let t = self.product()?;
                    acc = self.tower.sub(&acc, &t);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Scalar> {
        let mut acc = self.atom()?;
        while let Some(c) = self.peek() {
            match c {
                '*' => {
                    self.pos += 1;
                    let t = self.atom()?;
                    acc = self.tower.mul(&acc, &t);
                }
                '/' => {
                    self.pos += 1;
                    let t = self.atom()?;
                    acc = self.tower.div(&acc, &t)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Scalar> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.sum()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                self.maybe_pow(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                self.maybe_pow(self.tower.from_rational(BigRational::from_integer(n)))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let name = self.name();
                let v = self.tower.constant(&name)?;
                self.maybe_pow(v)
            }
            _ => Err(self.err("expected scalar atom")),
        }
    }

    fn maybe_pow(&mut self, base: Scalar) -> Result<Scalar> {
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let mut sign = 1i64;
            if self.chars.get(self.pos) == Some(&'-') {
                sign = -1;
                self.pos += 1;
            }
            let n = self.integer()?;
            let exp: i64 = n.to_string().parse().map_err(|_| self.err("exponent too large"))?;
            return self.tower.pow(&base, sign * exp);
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err("bad integer"))
    }

    fn name(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len()
            && (self.chars[self.pos].is_alphanumeric() || self.chars[self.pos] == '_')
        {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }
}

/// sinh/cosh tower `s, c` with `s' = c`, `c' = s`. The relation
/// `c^2 - s^2 = 1` is not imposed formally (both constants are free); it is
/// verified when the tower is specialized to rational values.
pub fn hyperbolic_tower() -> Tower {
    Tower::new(vec![
        ConstantSpec::transcendental("s", Derivative::Constant("c".into())),
        ConstantSpec::transcendental("c", Derivative::Constant("s".into())),
    ])
    .expect("valid tower")
}

/// Quadratic extension by sqrt2 (named `r2`), t-independent.
pub fn sqrt2_tower() -> Tower {
    Tower::new(vec![ConstantSpec::algebraic(
        "r2",
        vec![
            BigRational::from_integer(BigInt::from(-2)),
            BigRational::zero(),
            BigRational::one(),
        ],
        Derivative::Zero,
    )])
    .expect("valid tower")
}

/// Deterministic xorshift generator for randomized exactness tests.
#[derive(Clone)]
pub struct XorShift(u64);

impl XorShift {
    pub fn new(seed: u64) -> Self {
        XorShift(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.below((hi - lo + 1) as u64) as i64)
    }
}

/// Small random scalar drawn from rationals and the tower's constants.
pub fn random_scalar(tower: &Tower, rng: &mut XorShift) -> Scalar {
    let mut acc = tower.zero();
    let nterms = 1 + rng.below(2);
    for _ in 0..nterms {
        let num = rng.int_in(-5, 5);
        let den = rng.int_in(1, 4);
        let mut term = tower.ratio(num, den);
        if !tower.is_specialized() && !tower.constants().is_empty() && rng.below(2) == 0 {
            let idx = rng.below(tower.constants().len() as u64) as usize;
            let name = tower.constants()[idx].name.clone();
            let c = tower.constant(&name).unwrap();
            term = tower.mul(&term, &c);
            if rng.below(3) == 0 {
                term = tower.mul(&term, &c);
            }
        }
        acc = tower.add(&acc, &term);
    }
    acc
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Display without a tower falls back to the raw node; the tower-aware
        // renderer is `Tower::render`.
        match &self.0 {
            Node::Q(q) => write!(f, "{}", render_rational(q)),
            _ => write!(f, "<scalar>"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_field_ops() {
        let t = Tower::rationals();
        let a = t.ratio(1, 2);
        let b = t.ratio(1, 3);
        assert_eq!(t.add(&a, &b), t.ratio(5, 6));
        assert_eq!(t.mul(&a, &b), t.ratio(1, 6));
        assert_eq!(t.inv(&b).unwrap(), t.from_int(3));
        assert_eq!(t.inv(&t.zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn sqrt2_reduces_eagerly() {
        let t = sqrt2_tower();
        let r2 = t.constant("r2").unwrap();
        assert_eq!(t.mul(&r2, &r2), t.from_int(2));
        // inv(1 + r2) = r2 - 1, since (1 + r2)(r2 - 1) = 2 - 1 = 1
        let x = t.add(&t.one(), &r2);
        let inv = t.inv(&x).unwrap();
        let expected = t.sub(&r2, &t.one());
        assert_eq!(inv, expected);
        assert!(t.is_one(&t.mul(&x, &inv)));
    }

    #[test]
    fn reducible_minpoly_inverse_reports() {
        // X^2 - 1 is reducible; theta - 1 is a zero divisor.
        let t = Tower::new(vec![ConstantSpec::algebraic(
            "theta",
            vec![
                BigRational::from_integer(BigInt::from(-1)),
                BigRational::zero(),
                BigRational::one(),
            ],
            Derivative::Zero,
        )])
        .unwrap();
        let th = t.constant("theta").unwrap();
        let x = t.sub(&th, &t.one());
        match t.inv(&x) {
            Err(Error::NonInvertible { constant }) => assert_eq!(constant, "theta"),
            other => panic!("expected NonInvertible, got {other:?}"),
        }
    }

    #[test]
    fn transcendental_fractions_normalize() {
        let t = hyperbolic_tower();
        let s = t.constant("s").unwrap();
        // s^2 / s = s
        let s2 = t.mul(&s, &s);
        assert_eq!(t.div(&s2, &s).unwrap(), s);
        // (s + 1)(s - 1) = s^2 - 1
        let lhs = t.mul(&t.add(&s, &t.one()), &t.sub(&s, &t.one()));
        let rhs = t.sub(&s2, &t.one());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivation_follows_declared_edges() {
        let t = hyperbolic_tower();
        let s = t.constant("s").unwrap();
        let c = t.constant("c").unwrap();
        assert_eq!(t.derive(&s).unwrap(), c);
        assert_eq!(t.derive(&c).unwrap(), s);
        assert!(t.is_zero(&t.derive(&t.from_int(7)).unwrap()));
        // s^2 -> 2 s c
        let s2 = t.mul(&s, &s);
        let expected = t.mul(&t.from_int(2), &t.mul(&s, &c));
        assert_eq!(t.derive(&s2).unwrap(), expected);
    }

    #[test]
    fn derivation_quotient_rule_on_fractions() {
        let t = hyperbolic_tower();
        let s = t.constant("s").unwrap();
        let c = t.constant("c").unwrap();
        // (1/s)' = -c/s^2
        let inv_s = t.inv(&s).unwrap();
        let got = t.derive(&inv_s).unwrap();
        let expect = t.div(&t.neg(&c), &t.mul(&s, &s)).unwrap();
        assert_eq!(got, expect);
        // (s/c)' = (c^2 - s^2)/c^2
        let q = t.div(&s, &c).unwrap();
        let got = t.derive(&q).unwrap();
        let num = t.sub(&t.mul(&c, &c), &t.mul(&s, &s));
        let expect = t.div(&num, &t.mul(&c, &c)).unwrap();
        assert_eq!(got, expect);
    }

    #[test]
    fn cubic_extension_inverse() {
        // theta^3 = 2
        let t = Tower::new(vec![ConstantSpec::algebraic(
            "cbrt2",
            vec![
                BigRational::from_integer(BigInt::from(-2)),
                BigRational::zero(),
                BigRational::zero(),
                BigRational::one(),
            ],
            Derivative::Zero,
        )])
        .unwrap();
        let th = t.constant("cbrt2").unwrap();
        let x = t.add(&t.mul(&th, &th), &t.one()); // theta^2 + 1
        let inv = t.inv(&x).unwrap();
        assert!(t.is_one(&t.mul(&x, &inv)));
        // theta^3 reduces to 2, theta^4 to 2 theta
        assert_eq!(t.mul(&t.mul(&th, &th), &th), t.from_int(2));
        let th4 = t.mul(&t.mul(&th, &th), &t.mul(&th, &th));
        assert_eq!(th4, t.mul(&t.from_int(2), &th));
    }

    #[test]
    fn derivation_undeclared_errors() {
        let t =
            Tower::new(vec![ConstantSpec::transcendental("u", Derivative::Undeclared)]).unwrap();
        let u = t.constant("u").unwrap();
        match t.derive(&u) {
            Err(Error::UndeclaredDerivative { constant }) => assert_eq!(constant, "u"),
            other => panic!("expected UndeclaredDerivative, got {other:?}"),
        }
    }

    #[test]
    fn specialization_checks_minpoly_and_collapses() {
        let t = sqrt2_tower();
        let bad = t.specialize(&[("r2".into(), BigRational::from_integer(BigInt::from(3)))]);
        assert!(bad.is_err());

        let hyp = hyperbolic_tower();
        let spec = hyp
            .specialize(&[
                ("s".into(), BigRational::new(BigInt::from(3), BigInt::from(4))),
                ("c".into(), BigRational::new(BigInt::from(5), BigInt::from(4))),
            ])
            .unwrap();
        let s = spec.constant("s").unwrap();
        let c = spec.constant("c").unwrap();
        // c^2 - s^2 = 1 holds exactly at sinh(log 2) = 3/4, cosh(log 2) = 5/4
        let rel = spec.sub(&spec.mul(&c, &c), &spec.mul(&s, &s));
        assert!(spec.is_one(&rel));
        assert!(spec.to_rational(&s).is_some());
    }

    #[test]
    fn sinh_cosh_log2_values() {
        // sinh(log 2) = (2 - 1/2)/2 and cosh(log 2) = (2 + 1/2)/2
        let t = Tower::rationals();
        let two = t.from_int(2);
        let half = t.ratio(1, 2);
        let sinh = t.div(&t.sub(&two, &half), &two).unwrap();
        let cosh = t.div(&t.add(&two, &half), &two).unwrap();
        assert_eq!(sinh, t.ratio(3, 4));
        assert_eq!(cosh, t.ratio(5, 4));
    }

    #[test]
    fn parse_and_render_round_trip() {
        let t = hyperbolic_tower();
        for src in ["3/4", "s", "2*s", "s^2 + 1", "-1/2*c", "(s + 1)/(c)"] {
            let v = t.parse_scalar(src).unwrap();
            let rendered = t.render(&v);
            let back = t.parse_scalar(&rendered).unwrap();
            assert_eq!(v, back, "round trip failed for `{src}` -> `{rendered}`");
        }
    }

    #[test]
    fn field_axioms_randomized() {
        for tower in [Tower::rationals(), sqrt2_tower(), hyperbolic_tower()] {
            let mut rng = XorShift::new(0x5eed_1234);
            for _ in 0..300 {
                let a = random_scalar(&tower, &mut rng);
                let b = random_scalar(&tower, &mut rng);
                let c = random_scalar(&tower, &mut rng);
                // associativity
                let lhs = tower.mul(&tower.mul(&a, &b), &c);
                let rhs = tower.mul(&a, &tower.mul(&b, &c));
                assert_eq!(lhs, rhs);
                // distributivity
                let lhs = tower.mul(&a, &tower.add(&b, &c));
                let rhs = tower.add(&tower.mul(&a, &b), &tower.mul(&a, &c));
                assert_eq!(lhs, rhs);
                // commutativity and units
                assert_eq!(tower.add(&a, &b), tower.add(&b, &a));
                assert_eq!(tower.mul(&a, &b), tower.mul(&b, &a));
                assert_eq!(tower.mul(&a, &tower.one()), a);
                if !tower.is_zero(&a) {
                    let inv = tower.inv(&a).unwrap();
                    assert!(tower.is_one(&tower.mul(&a, &inv)));
                }
            }
        }
    }

    #[test]
    fn derivation_product_rule_randomized() {
        let tower = hyperbolic_tower();
        let mut rng = XorShift::new(0xabcdef);
        for _ in 0..200 {
            let a = random_scalar(&tower, &mut rng);
            let b = random_scalar(&tower, &mut rng);
            let lhs = tower.derive(&tower.mul(&a, &b)).unwrap();
            let rhs = tower.add(
                &tower.mul(&tower.derive(&a).unwrap(), &b),
                &tower.mul(&a, &tower.derive(&b).unwrap()),
            );
            assert_eq!(lhs, rhs);
        }
    }
}
