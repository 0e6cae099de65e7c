//! The presented algebra D(q) for deg q ≥ 4: derived parameters, free
//! expressions in the generators u, v, w, rewriting onto the PBW basis
//! uⁱvʲwᵏ (k ≤ 1), the star anti-automorphism, and the embedding φ into the
//! skew group algebra, computed as ψ∘(generator images in the GWA) so the
//! closed forms stay available as independent cross-checks.
//!
//! Defining relations:
//!   [u,v] = 2w + v
//!   [u,w] = 2vu + w + ρ
//!   [v,w] = −v² − p₁(u)
//!   w²    = v²u + vw + ρv + p₀(u)
//! with ρ = 2q(−½) and p(t) = (−4q(t)q(−t−1) + ρ²)/(1+2t)², split as
//! p(t) = p₀(t²) + t·p₁(t²).

use crate::gwa::{beta, require_degree, DegreeTooSmall, Psi};
use crate::poly::Polynomial;
use crate::rat::{rat, rat_int, ParseError, Rat};
use crate::ratfun::RationalFunction;
use crate::skew::SkewElement;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

pub use crate::gwa::Gen;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("rewriting exceeded {steps} steps without reaching normal form")]
pub struct NonTermination {
    pub steps: u64,
}

const REWRITE_STEP_LIMIT: u64 = 10_000_000;

/// Derived data attached to q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DqParams {
    q: Polynomial,
    rho: Rat,
    p: Polynomial,
    p0: Polynomial,
    p1: Polynomial,
    s: RationalFunction,
}

impl DqParams {
    pub fn new(q: Polynomial) -> Result<Self, DegreeTooSmall> {
        require_degree(&q)?;
        let n = q.degree().unwrap();
        let rho = q.eval(&rat(-1, 2)) * rat_int(2);
        // p·(1+2t)² = −4·q(t)·q(−t−1) + ρ²; the right side has a double
        // root at −½, so the division is exact for every admissible q
        let qq = &q * &q.negate_var().shift(&rat_int(1));
        let num = &qq.scale(&rat_int(-4)) + &Polynomial::constant(&rho * &rho);
        let den_lin = Polynomial::from_ints(&[1, 2]);
        let p = num
            .exact_div(&(&den_lin * &den_lin))
            .expect("divisibility at -1/2 is forced");
        assert_eq!(p.degree(), Some(2 * n - 2));
        let (p0, p1) = p.even_odd_split();
        let t = Polynomial::variable();
        let s_den = &(&t * &t.shift(&rat_int(1))) * &(&den_lin * &den_lin);
        let s = RationalFunction::new(qq, s_den).unwrap();
        Ok(DqParams { q, rho, p, p0, p1, s })
    }

    pub fn q(&self) -> &Polynomial {
        &self.q
    }

    pub fn rho(&self) -> &Rat {
        &self.rho
    }

    pub fn p(&self) -> &Polynomial {
        &self.p
    }

    pub fn p0(&self) -> &Polynomial {
        &self.p0
    }

    pub fn p1(&self) -> &Polynomial {
        &self.p1
    }

    pub fn s(&self) -> &RationalFunction {
        &self.s
    }
}

/// A finite ℚ-combination of words over {u, v, w}; the empty word is 1.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FreeExpression {
    // invariant: no zero coefficients stored
    terms: BTreeMap<Vec<Gen>, Rat>,
}

impl FreeExpression {
    pub fn zero() -> Self {
        FreeExpression::default()
    }

    pub fn one() -> Self {
        Self::word(&[])
    }

    pub fn gen(g: Gen) -> Self {
        Self::word(&[g])
    }

    pub fn word(w: &[Gen]) -> Self {
        Self::term(w.to_vec(), Rat::one())
    }

    pub fn scalar(c: Rat) -> Self {
        Self::term(vec![], c)
    }

    pub fn term(word: Vec<Gen>, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(word, c);
        }
        FreeExpression { terms }
    }

    /// Σ cᵢ·uⁱ for a polynomial Σ cᵢtⁱ.
    pub fn poly_in_u(p: &Polynomial) -> Self {
        let mut out = Self::zero();
        for (i, c) in p.coeffs().iter().enumerate() {
            out.add_term(vec![Gen::U; i], c.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Gen>, &Rat)> {
        self.terms.iter()
    }

    fn add_term(&mut self, word: Vec<Gen>, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        FreeExpression {
            terms: self.terms.iter().map(|(w, a)| (w.clone(), a * c)).collect(),
        }
    }

    /// Anti-multiplicative star: reverse each word and substitute
    /// u ↦ u, v ↦ v, w ↦ −w−v, expanding the products.
    pub fn star(&self) -> FreeExpression {
        let u = Self::gen(Gen::U);
        let v = Self::gen(Gen::V);
        let w_star = &(-&Self::gen(Gen::W)) - &v;
        let mut out = Self::zero();
        for (word, c) in &self.terms {
            let mut prod = Self::scalar(c.clone());
            for g in word.iter().rev() {
                let factor = match g {
                    Gen::U => &u,
                    Gen::V => &v,
                    Gen::W => &w_star,
                };
                prod = &prod * factor;
            }
            out = &out + &prod;
        }
        out
    }
}

impl std::ops::Add for &FreeExpression {
    type Output = FreeExpression;
    fn add(self, rhs: &FreeExpression) -> FreeExpression {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &FreeExpression {
    type Output = FreeExpression;
    fn sub(self, rhs: &FreeExpression) -> FreeExpression {
        self + &(-rhs)
    }
}

impl std::ops::Neg for &FreeExpression {
    type Output = FreeExpression;
    fn neg(self) -> FreeExpression {
        FreeExpression {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }
}

impl std::ops::Mul for &FreeExpression {
    type Output = FreeExpression;
    fn mul(self, rhs: &FreeExpression) -> FreeExpression {
        let mut out = FreeExpression::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &rhs.terms {
                let mut word = wa.clone();
                word.extend_from_slice(wb);
                out.add_term(word, ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned_binop {
    ($ty:ident, $trait:ident, $method:ident) => {
        impl std::ops::$trait for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                (&self).$method(&rhs)
            }
        }
        impl std::ops::$trait<&$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: &$ty) -> $ty {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned_binop!(FreeExpression, Add, add);
forward_owned_binop!(FreeExpression, Sub, sub);
forward_owned_binop!(FreeExpression, Mul, mul);

impl std::ops::Neg for FreeExpression {
    type Output = FreeExpression;
    fn neg(self) -> FreeExpression {
        -&self
    }
}

impl fmt::Display for FreeExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (word, c) in &self.terms {
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let mut pieces: Vec<String> = vec![];
            if !mag.is_one() || word.is_empty() {
                pieces.push(mag.to_string());
            }
            // run-length encode repeated letters as powers
            let mut i = 0;
            while i < word.len() {
                let g = word[i];
                let mut j = i;
                while j < word.len() && word[j] == g {
                    j += 1;
                }
                if j - i == 1 {
                    pieces.push(g.to_string());
                } else {
                    pieces.push(format!("{}^{}", g, j - i));
                }
                i = j;
            }
            write!(f, "{}", pieces.join("*"))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Tok {
    Num(i8),       // index into the numbers side table
    Gen(Gen),
    Star,
    Plus,
    Minus,
    Caret,
}

fn lex(s: &str) -> Result<(Vec<Tok>, Vec<Rat>), ParseError> {
    let mut toks = vec![];
    let mut nums = vec![];
    let bytes: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '*' => {
                toks.push(Tok::Star);
                i += 1;
            }
            '+' => {
                toks.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                toks.push(Tok::Minus);
                i += 1;
            }
            '^' => {
                toks.push(Tok::Caret);
                i += 1;
            }
            'u' => {
                toks.push(Tok::Gen(Gen::U));
                i += 1;
            }
            'v' => {
                toks.push(Tok::Gen(Gen::V));
                i += 1;
            }
            'w' => {
                toks.push(Tok::Gen(Gen::W));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                // optional /denominator glued to the literal
                if i < bytes.len() && bytes[i] == '/' {
                    i += 1;
                    let dstart = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if i == dstart {
                        return Err(ParseError("missing denominator digits".into()));
                    }
                }
                let text: String = bytes[start..i].iter().collect();
                let value = crate::rat::parse_rat(&text)?;
                if nums.len() > i8::MAX as usize {
                    return Err(ParseError("expression too large".into()));
                }
                toks.push(Tok::Num(nums.len() as i8));
                nums.push(value);
            }
            other => {
                return Err(ParseError(format!("unexpected character {other:?}")));
            }
        }
    }
    Ok((toks, nums))
}

struct Parser {
    toks: Vec<Tok>,
    nums: Vec<Rat>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.peek();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn num(&self, idx: i8) -> Rat {
        self.nums[idx as usize].clone()
    }

    // expr := [+|-] term ((+|-) term)*
    fn expr(&mut self) -> Result<FreeExpression, ParseError> {
        let mut negate = false;
        match self.peek() {
            Some(Tok::Minus) => {
                negate = true;
                self.bump();
            }
            Some(Tok::Plus) => {
                self.bump();
            }
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                Some(other) => {
                    return Err(ParseError(format!("unexpected token {other:?}")));
                }
                None => return Ok(acc),
            }
        }
    }

    // term := factor (* factor)*
    fn term(&mut self) -> Result<FreeExpression, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(Tok::Star) {
            self.bump();
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    // factor := rational | generator [^ exponent]
    fn factor(&mut self) -> Result<FreeExpression, ParseError> {
        match self.bump() {
            Some(Tok::Num(idx)) => Ok(FreeExpression::scalar(self.num(idx))),
            Some(Tok::Gen(g)) => {
                if self.peek() == Some(Tok::Caret) {
                    self.bump();
                    let e = match self.bump() {
                        Some(Tok::Num(idx)) => {
                            let r = self.num(idx);
                            if !r.is_integer() || r.is_negative() {
                                return Err(ParseError(format!(
                                    "exponent must be a nonnegative integer, got {r}"
                                )));
                            }
                            u32::try_from(r.to_integer())
                                .map_err(|_| ParseError("exponent too large".into()))?
                        }
                        _ => return Err(ParseError("missing exponent after ^".into())),
                    };
                    Ok(FreeExpression::word(&vec![g; e as usize]))
                } else {
                    Ok(FreeExpression::gen(g))
                }
            }
            Some(other) => Err(ParseError(format!("unexpected token {other:?}"))),
            None => Err(ParseError("unexpected end of expression".into())),
        }
    }
}

impl FromStr for FreeExpression {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        if s.trim().is_empty() {
            return Err(ParseError("empty expression".into()));
        }
        let (toks, nums) = lex(s)?;
        let mut parser = Parser { toks, nums, pos: 0 };
        parser.expr()
    }
}

/// Σ c·uⁱvʲwᵏ with k ≤ 1.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PbwForm {
    // invariant: no zero coefficients; k ∈ {0, 1}
    terms: BTreeMap<(u32, u32, u8), Rat>,
}

impl PbwForm {
    pub fn zero() -> Self {
        PbwForm::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32, u8), &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32, k: u8) -> Rat {
        self.terms.get(&(i, j, k)).cloned().unwrap_or_else(Rat::zero)
    }

    fn add_term(&mut self, key: (u32, u32, u8), c: Rat) {
        debug_assert!(key.2 <= 1);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn to_free(&self) -> FreeExpression {
        let mut out = FreeExpression::zero();
        for (&(i, j, k), c) in &self.terms {
            let mut word = vec![Gen::U; i as usize];
            word.extend(vec![Gen::V; j as usize]);
            word.extend(vec![Gen::W; k as usize]);
            out.add_term(word, c.clone());
        }
        out
    }
}

impl fmt::Display for PbwForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_free())
    }
}

#[derive(serde::Serialize, serde::Deserialize)]
struct PbwTermDto {
    i: u32,
    j: u32,
    k: u8,
    coeff: String,
}

#[derive(serde::Serialize, serde::Deserialize)]
struct PbwDto {
    terms: Vec<PbwTermDto>,
}

impl serde::Serialize for PbwForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let dto = PbwDto {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j, k), c)| PbwTermDto { i, j, k, coeff: c.to_string() })
                .collect(),
        };
        dto.serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for PbwForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let dto = PbwDto::deserialize(d)?;
        let mut out = PbwForm::zero();
        for t in dto.terms {
            if t.k > 1 {
                return Err(D::Error::custom("w-exponent must be 0 or 1"));
            }
            let c = crate::rat::parse_rat(&t.coeff).map_err(D::Error::custom)?;
            out.add_term((t.i, t.j, t.k), c);
        }
        Ok(out)
    }
}

fn is_violation(a: Gen, b: Gen) -> bool {
    matches!(
        (a, b),
        (Gen::V, Gen::U) | (Gen::W, Gen::U) | (Gen::W, Gen::V) | (Gen::W, Gen::W)
    )
}

/// Rewrite onto the PBW basis with the oriented rules
///   vu → uv − 2w − v
///   wu → uw − 2vu − w − ρ
///   wv → vw + v² + p₁(u)
///   ww → v²u + vw + ρv + p₀(u)
/// applied at the leftmost violation. Termination follows from the
/// filtration weighting deg u = 4, deg v = 2n−4, deg w = 2n−2: each rule
/// strictly drops (degree, w-count, inversion count) lexicographically.
/// The step counter is a defensive circuit breaker only.
pub fn pbw_normal_form(
    x: &FreeExpression,
    params: &DqParams,
) -> Result<PbwForm, NonTermination> {
    use Gen::*;
    let rho = FreeExpression::scalar(params.rho().clone());
    let r_vu = &(&FreeExpression::word(&[U, V]) - &FreeExpression::word(&[W]).scale(&rat_int(2)))
        - &FreeExpression::gen(V);
    let r_wu = &(&(&FreeExpression::word(&[U, W])
        - &FreeExpression::word(&[V, U]).scale(&rat_int(2)))
        - &FreeExpression::gen(W))
        - &rho;
    let r_wv = &(&FreeExpression::word(&[V, W]) + &FreeExpression::word(&[V, V]))
        + &FreeExpression::poly_in_u(params.p1());
    let r_ww = &(&(&FreeExpression::word(&[V, V, U]) + &FreeExpression::word(&[V, W]))
        + &(&rho * &FreeExpression::gen(V)))
        + &FreeExpression::poly_in_u(params.p0());

    let mut pending = x.terms.clone();
    let mut out = PbwForm::zero();
    let mut steps: u64 = 0;
    while let Some((word, c)) = pending.pop_first() {
        if c.is_zero() {
            continue;
        }
        let viol = (0..word.len().saturating_sub(1))
            .find(|&i| is_violation(word[i], word[i + 1]));
        match viol {
            None => {
                let i = word.iter().filter(|&&g| g == U).count() as u32;
                let j = word.iter().filter(|&&g| g == V).count() as u32;
                let k = word.iter().filter(|&&g| g == W).count() as u8;
                out.add_term((i, j, k), c);
            }
            Some(idx) => {
                steps += 1;
                if steps > REWRITE_STEP_LIMIT {
                    return Err(NonTermination { steps });
                }
                let replacement = match (word[idx], word[idx + 1]) {
                    (V, U) => &r_vu,
                    (W, U) => &r_wu,
                    (W, V) => &r_wv,
                    (W, W) => &r_ww,
                    _ => unreachable!(),
                };
                for (mid, rc) in &replacement.terms {
                    let mut w2 = Vec::with_capacity(word.len() - 2 + mid.len());
                    w2.extend_from_slice(&word[..idx]);
                    w2.extend_from_slice(mid);
                    w2.extend_from_slice(&word[idx + 2..]);
                    let contrib = &c * rc;
                    match pending.entry(w2) {
                        std::collections::btree_map::Entry::Vacant(e) => {
                            e.insert(contrib);
                        }
                        std::collections::btree_map::Entry::Occupied(mut e) => {
                            let sum = e.get() + &contrib;
                            if sum.is_zero() {
                                e.remove();
                            } else {
                                *e.get_mut() = sum;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// The embedding φ = ψ∘β into the skew group algebra, with the generator
/// images precomputed for a fixed q.
#[derive(Debug, Clone)]
pub struct Phi {
    params: DqParams,
    images: [SkewElement; 3],
}

impl Phi {
    pub fn new(q: &Polynomial) -> Result<Self, DegreeTooSmall> {
        let params = DqParams::new(q.clone())?;
        let psi = Psi::new(q)?;
        let img = |g| psi.apply(&beta(g, q).unwrap());
        let images = [img(Gen::U), img(Gen::V), img(Gen::W)];
        Ok(Phi { params, images })
    }

    pub fn params(&self) -> &DqParams {
        &self.params
    }

    pub fn gen_image(&self, g: Gen) -> &SkewElement {
        match g {
            Gen::U => &self.images[0],
            Gen::V => &self.images[1],
            Gen::W => &self.images[2],
        }
    }

    pub fn apply(&self, x: &FreeExpression) -> SkewElement {
        let mut out = SkewElement::zero();
        for (word, c) in x.terms() {
            let mut prod = SkewElement::scalar(c.clone());
            for g in word {
                prod = &prod * self.gen_image(*g);
            }
            out = &out + &prod;
        }
        out
    }

    /// Image of a PBW form, reusing generator powers across terms.
    pub fn apply_pbw(&self, x: &PbwForm) -> SkewElement {
        let mut u_pows = vec![SkewElement::one()];
        let mut v_pows = vec![SkewElement::one()];
        let mut out = SkewElement::zero();
        for (&(i, j, k), c) in x.terms() {
            while u_pows.len() <= i as usize {
                let next = u_pows.last().unwrap() * self.gen_image(Gen::U);
                u_pows.push(next);
            }
            while v_pows.len() <= j as usize {
                let next = v_pows.last().unwrap() * self.gen_image(Gen::V);
                v_pows.push(next);
            }
            let mut term = &u_pows[i as usize] * &v_pows[j as usize];
            if k == 1 {
                term = &term * self.gen_image(Gen::W);
            }
            out = &out + &term.scale(c);
        }
        out
    }
}

pub fn phi(x: &FreeExpression, q: &Polynomial) -> Result<SkewElement, DegreeTooSmall> {
    Ok(Phi::new(q)?.apply(x))
}
