//! Sparse multivariate polynomials with rational coefficients, taken in the
//! quotient ring with relations `x_i^{n_i} = 1`, plus exact evaluation at
//! tuples of roots of unity.
//!
//! Exponents are always kept reduced (`0 <= e_i < n_i`), zero coefficients
//! are never stored, and terms are ordered lexicographically by exponent
//! tuple, so structural equality of two polynomials is equality of normal
//! forms. Evaluating variable `i` at `zeta_{n_i}^{b_i}` lands in
//! `Q(zeta_L)` with `L = lcm(n_1, ..., n_m)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::cyclotomic::{CyclotomicError, CyclotomicNumber};
use crate::rational::{format_rational, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("variable orders must be at least 1")]
    InvalidProfile,
    #[error("profile mismatch: {0:?} vs {1:?}")]
    ProfileMismatch(Vec<u64>, Vec<u64>),
    #[error("point arity {0} does not match variable count {1}")]
    ArityMismatch(usize, usize),
    #[error("geometric factor requires at least one term")]
    EmptyGeometricFactor,
    #[error("substitution does not fit target profile")]
    BadSubstitution,
    #[error("evaluation order {0} exceeds the supported bound {1}")]
    OrderTooLarge(u64, u64),
    #[error("invalid polynomial JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Cyclotomic(#[from] CyclotomicError),
}

/// Largest lcm of variable orders for which evaluation is attempted.
pub const MAX_EVALUATION_ORDER: u64 = 1 << 20;

/// The orders `(n_1, ..., n_m)` of the ambient quotient ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableProfile {
    orders: Vec<u64>,
}

impl VariableProfile {
    pub fn new(orders: Vec<u64>) -> Result<Self, PolyError> {
        if orders.contains(&0) {
            return Err(PolyError::InvalidProfile);
        }
        Ok(VariableProfile { orders })
    }

    pub fn arity(&self) -> usize {
        self.orders.len()
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    /// lcm of the orders, the order of the cyclotomic field evaluations
    /// land in.
    pub fn evaluation_order(&self) -> Result<u64, PolyError> {
        let mut l: u128 = 1;
        for &n in &self.orders {
            l = l.lcm(&(n as u128));
            if l > MAX_EVALUATION_ORDER as u128 {
                return Err(PolyError::OrderTooLarge(l.min(u64::MAX as u128) as u64, MAX_EVALUATION_ORDER));
            }
        }
        Ok(l as u64)
    }

    /// Number of points in the full evaluation grid, if it fits in `u64`.
    pub fn grid_size(&self) -> Option<u64> {
        let mut acc: u64 = 1;
        for &n in &self.orders {
            acc = acc.checked_mul(n)?;
        }
        Some(acc)
    }
}

/// An evaluation point: variable `i` takes the value `zeta_{n_i}^{b_i}`.
/// Exponents are interpreted modulo `n_i` componentwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvaluationPoint {
    pub exponents: Vec<i64>,
}

impl EvaluationPoint {
    pub fn new(exponents: Vec<i64>) -> Self {
        EvaluationPoint { exponents }
    }

    pub fn from_unsigned(exponents: &[u64]) -> Self {
        EvaluationPoint { exponents: exponents.iter().map(|&e| e as i64).collect() }
    }
}

/// A normalized element of the quotient ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    profile: VariableProfile,
    terms: BTreeMap<Vec<u64>, Rational>,
}

impl MultiPoly {
    pub fn zero(profile: VariableProfile) -> Self {
        MultiPoly { profile, terms: BTreeMap::new() }
    }

    pub fn constant(profile: VariableProfile, value: Rational) -> Self {
        let mut poly = Self::zero(profile);
        if !value.is_zero() {
            poly.terms.insert(vec![0; poly.profile.arity()], value);
        }
        poly
    }

    pub fn one(profile: VariableProfile) -> Self {
        Self::constant(profile, Rational::one())
    }

    /// A single normalized monomial `coeff * x^exps`.
    pub fn monomial(profile: VariableProfile, exps: &[i64], coeff: Rational) -> Result<Self, PolyError> {
        Self::from_terms(profile, [(exps.to_vec(), coeff)])
    }

    /// Normalization: reduce exponents modulo the profile orders, combine
    /// like terms, drop zeros.
    pub fn from_terms<I>(profile: VariableProfile, raw: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Vec<i64>, Rational)>,
    {
        let mut terms: BTreeMap<Vec<u64>, Rational> = BTreeMap::new();
        for (exps, coeff) in raw {
            if exps.len() != profile.arity() {
                return Err(PolyError::ArityMismatch(exps.len(), profile.arity()));
            }
            if coeff.is_zero() {
                continue;
            }
            let reduced: Vec<u64> = exps
                .iter()
                .zip(profile.orders())
                .map(|(&e, &n)| e.rem_euclid(n as i64) as u64)
                .collect();
            let entry = terms.entry(reduced).or_insert_with(Rational::zero);
            *entry += coeff;
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(MultiPoly { profile, terms })
    }

    pub fn profile(&self) -> &VariableProfile {
        &self.profile
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u64], &Rational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[u64]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    fn check_profile(&self, other: &Self) -> Result<(), PolyError> {
        if self.profile != other.profile {
            return Err(PolyError::ProfileMismatch(
                self.profile.orders().to_vec(),
                other.profile.orders().to_vec(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_profile(other)?;
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(e.clone()).or_insert_with(Rational::zero);
            *entry += c;
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(MultiPoly { profile: self.profile.clone(), terms })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            profile: self.profile.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scalar_mul(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero(self.profile.clone());
        }
        MultiPoly {
            profile: self.profile.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * r)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_profile(other)?;
        let orders = self.profile.orders();
        let mut acc: HashMap<Vec<u64>, Rational> = HashMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let mut e: Vec<u64> = Vec::with_capacity(ea.len());
                for i in 0..ea.len() {
                    let s = ea[i] + eb[i];
                    e.push(if s >= orders[i] { s - orders[i] } else { s });
                }
                let entry = acc.entry(e).or_insert_with(Rational::zero);
                *entry += ca * cb;
            }
        }
        let terms: BTreeMap<Vec<u64>, Rational> =
            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(MultiPoly { profile: self.profile.clone(), terms })
    }

    /// The geometric sum `1 + s + s^2 + ... + s^(count-1)` for a monomial
    /// `s = x^exps`, normalized. Terms that collide after exponent reduction
    /// accumulate their coefficients.
    pub fn geometric_factor(
        profile: VariableProfile,
        exps: &[i64],
        count: u64,
    ) -> Result<Self, PolyError> {
        if count == 0 {
            return Err(PolyError::EmptyGeometricFactor);
        }
        if exps.len() != profile.arity() {
            return Err(PolyError::ArityMismatch(exps.len(), profile.arity()));
        }
        let orders = profile.orders().to_vec();
        let step: Vec<u64> = exps
            .iter()
            .zip(&orders)
            .map(|(&e, &n)| e.rem_euclid(n as i64) as u64)
            .collect();
        let mut terms: BTreeMap<Vec<u64>, Rational> = BTreeMap::new();
        let mut current = vec![0u64; orders.len()];
        for _ in 0..count {
            let entry = terms.entry(current.clone()).or_insert_with(Rational::zero);
            *entry += Rational::one();
            for i in 0..current.len() {
                current[i] = (current[i] + step[i]) % orders[i];
            }
        }
        Ok(MultiPoly { profile, terms })
    }

    /// Exact evaluation at `x_i = zeta_{n_i}^{b_i}`, in `Q(zeta_L)` with
    /// `L = lcm(n_i)`. A monomial `x^e` contributes
    /// `zeta_L^(sum_i e_i b_i L/n_i)`.
    pub fn evaluate(&self, point: &EvaluationPoint) -> Result<CyclotomicNumber, PolyError> {
        let orders = self.profile.orders();
        if point.exponents.len() != orders.len() {
            return Err(PolyError::ArityMismatch(point.exponents.len(), orders.len()));
        }
        let l = self.profile.evaluation_order()?;
        let b: Vec<u64> = point
            .exponents
            .iter()
            .zip(orders)
            .map(|(&e, &n)| e.rem_euclid(n as i64) as u64)
            .collect();
        let weights: Vec<u64> = orders.iter().map(|&n| l / n).collect();
        let mut slots: HashMap<u64, Rational> = HashMap::new();
        for (exps, coeff) in &self.terms {
            let mut k: u128 = 0;
            for i in 0..exps.len() {
                k += exps[i] as u128 * b[i] as u128 % l as u128 * weights[i] as u128;
            }
            let slot = (k % l as u128) as u64;
            let entry = slots.entry(slot).or_insert_with(Rational::zero);
            *entry += coeff;
        }
        Ok(CyclotomicNumber::from_exponent_sums(l, slots)?)
    }

    /// Substitute `x_i -> x_i^(multipliers[i])` and renormalize in
    /// `target`, which must have the same arity. Used to re-express an
    /// orbit polynomial over the full group's orders.
    pub fn substitute_powers(
        &self,
        multipliers: &[u64],
        target: &VariableProfile,
    ) -> Result<Self, PolyError> {
        if multipliers.len() != self.profile.arity() || target.arity() != self.profile.arity() {
            return Err(PolyError::BadSubstitution);
        }
        let orders = target.orders();
        let mut terms: BTreeMap<Vec<u64>, Rational> = BTreeMap::new();
        for (exps, coeff) in &self.terms {
            let e: Vec<u64> = exps
                .iter()
                .zip(multipliers)
                .zip(orders)
                .map(|((&ei, &mi), &ni)| (ei as u128 * mi as u128 % ni as u128) as u64)
                .collect();
            let entry = terms.entry(e).or_insert_with(Rational::zero);
            *entry += coeff;
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(MultiPoly { profile: target.clone(), terms })
    }

    /// JSON form: `{"orders":[...],"terms":[{"coeff":[num,den],"exps":[...]},...]}`
    /// with terms in lexicographic exponent order.
    pub fn to_json(&self) -> serde_json::Value {
        let orders: Vec<serde_json::Value> =
            self.profile.orders().iter().map(|&n| serde_json::Value::from(n)).collect();
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(exps, coeff)| {
                let mut term = serde_json::Map::new();
                term.insert(
                    "coeff".to_string(),
                    serde_json::Value::Array(vec![
                        bigint_to_json(coeff.numer()),
                        bigint_to_json(coeff.denom()),
                    ]),
                );
                term.insert(
                    "exps".to_string(),
                    serde_json::Value::Array(exps.iter().map(|&e| serde_json::Value::from(e)).collect()),
                );
                serde_json::Value::Object(term)
            })
            .collect();
        let mut obj = serde_json::Map::new();
        obj.insert("orders".to_string(), serde_json::Value::Array(orders));
        obj.insert("terms".to_string(), serde_json::Value::Array(terms));
        serde_json::Value::Object(obj)
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, PolyError> {
        let obj = value.as_object().ok_or_else(|| PolyError::Json("expected object".into()))?;
        let orders = obj
            .get("orders")
            .and_then(|v| v.as_array())
            .ok_or_else(|| PolyError::Json("missing orders".into()))?
            .iter()
            .map(|v| v.as_u64().ok_or_else(|| PolyError::Json("orders must be positive integers".into())))
            .collect::<Result<Vec<u64>, _>>()?;
        let profile = VariableProfile::new(orders)?;
        let mut terms: BTreeMap<Vec<u64>, Rational> = BTreeMap::new();
        let raw_terms = obj
            .get("terms")
            .and_then(|v| v.as_array())
            .ok_or_else(|| PolyError::Json("missing terms".into()))?;
        for t in raw_terms {
            let t = t.as_object().ok_or_else(|| PolyError::Json("term must be an object".into()))?;
            let coeff = t
                .get("coeff")
                .and_then(|v| v.as_array())
                .ok_or_else(|| PolyError::Json("term missing coeff".into()))?;
            if coeff.len() != 2 {
                return Err(PolyError::Json("coeff must be [numerator, denominator]".into()));
            }
            let numer = bigint_from_json(&coeff[0])?;
            let denom = bigint_from_json(&coeff[1])?;
            if denom.is_zero() {
                return Err(PolyError::Json("zero denominator".into()));
            }
            let exps = t
                .get("exps")
                .and_then(|v| v.as_array())
                .ok_or_else(|| PolyError::Json("term missing exps".into()))?
                .iter()
                .map(|v| v.as_u64().ok_or_else(|| PolyError::Json("exponents must be nonnegative integers".into())))
                .collect::<Result<Vec<u64>, _>>()?;
            if exps.len() != profile.arity() {
                return Err(PolyError::Json("exponent arity mismatch".into()));
            }
            let reduced: Vec<u64> = exps.iter().zip(profile.orders()).map(|(&e, &n)| e % n).collect();
            let c = Rational::new(numer, denom);
            if !c.is_zero() {
                let entry = terms.entry(reduced).or_insert_with(Rational::zero);
                *entry += c;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(MultiPoly { profile, terms })
    }

    /// LaTeX rendering with variables `x_1, ..., x_m`.
    pub fn to_latex(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (exps, coeff)) in self.terms.iter().enumerate() {
            let negative = coeff < &Rational::zero();
            let abs = if negative { -coeff } else { coeff.clone() };
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let vars: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        format!("x_{{{}}}", i + 1)
                    } else {
                        format!("x_{{{}}}^{{{}}}", i + 1, e)
                    }
                })
                .collect();
            let coeff_str = if abs.is_integer() {
                abs.numer().to_string()
            } else {
                format!("\\frac{{{}}}{{{}}}", abs.numer(), abs.denom())
            };
            if vars.is_empty() {
                out.push_str(&coeff_str);
            } else if abs.is_one() {
                out.push_str(&vars.join(" "));
            } else {
                out.push_str(&coeff_str);
                out.push(' ');
                out.push_str(&vars.join(" "));
            }
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (exps, coeff)) in self.terms.iter().enumerate() {
            let negative = coeff < &Rational::zero();
            let abs = if negative { -coeff } else { coeff.clone() };
            if idx == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            }
            let vars: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, e) })
                .collect();
            if vars.is_empty() {
                write!(f, "{}", format_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(&abs), vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Outcome of evaluating a polynomial at a grid point, for verification
/// loops that only need the rational value (or the fact that there is none).
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum EvalValue {
    Rational(Rational),
    NonRational,
}

/// Repeated exact evaluation of one polynomial at many grid points.
///
/// When the coefficients clear to integers that fit comfortably in machine
/// words, evaluation accumulates integer counts per root-of-unity exponent
/// and reduces through the integer power table, avoiding big-rational
/// traffic entirely; otherwise it falls back to the general path. Both paths
/// compute the same exact canonical residue.
pub(crate) struct FastEvaluator<'a> {
    poly: &'a MultiPoly,
    order: u64,
    degree: usize,
    fast: Option<FastData>,
    slots: Vec<i128>,
    dirty: Vec<bool>,
    touched: Vec<u64>,
}

struct FastData {
    table: std::sync::Arc<crate::cyclotomic::PowerTable>,
    /// Per term: `e_i * (L / n_i) mod L` for each variable.
    term_weights: Vec<Vec<u64>>,
    /// Numerators after clearing the common denominator.
    term_coeffs: Vec<i128>,
    den: BigInt,
}

impl<'a> FastEvaluator<'a> {
    pub fn new(poly: &'a MultiPoly) -> Result<Self, PolyError> {
        let l = poly.profile().evaluation_order()?;
        let table = crate::cyclotomic::power_table(l)?;
        let degree = table.degree;
        let fast = Self::prepare_fast(poly, l, &table);
        Ok(FastEvaluator {
            poly,
            order: l,
            degree,
            fast,
            slots: vec![0; l as usize],
            dirty: vec![false; l as usize],
            touched: Vec::new(),
        })
    }

    fn prepare_fast(
        poly: &MultiPoly,
        l: u64,
        table: &std::sync::Arc<crate::cyclotomic::PowerTable>,
    ) -> Option<FastData> {
        let rows = table.rows_i64.as_ref()?;
        let max_row: i128 = rows
            .iter()
            .flat_map(|r| r.iter().map(|&c| (c as i128).abs()))
            .max()
            .unwrap_or(1)
            .max(1);
        let mut den = BigInt::one();
        for (_, c) in poly.terms() {
            let d = c.denom();
            den = &den / den.gcd(d) * d;
        }
        // Keep the cleared denominator small enough that scaled numerators
        // stay in machine range.
        den.to_u64()?;
        let orders = poly.profile().orders();
        let weights: Vec<u64> = orders.iter().map(|&n| l / n).collect();
        let mut term_weights = Vec::with_capacity(poly.num_terms());
        let mut term_coeffs = Vec::with_capacity(poly.num_terms());
        let mut abs_sum: i128 = 0;
        for (exps, c) in poly.terms() {
            let scaled = c.numer() * (&den / c.denom());
            let v = scaled.to_i64()? as i128;
            abs_sum = abs_sum.checked_add(v.abs())?;
            term_coeffs.push(v);
            term_weights.push(
                exps.iter()
                    .zip(&weights)
                    .map(|(&e, &w)| (e as u128 * w as u128 % l as u128) as u64)
                    .collect(),
            );
        }
        // Slot sums are bounded by abs_sum; the reduction multiplies by table
        // entries and sums over at most min(L, #terms) touched slots.
        let budget = abs_sum
            .checked_mul(max_row)?
            .checked_mul((l as i128).min(term_coeffs.len().max(1) as i128))?;
        if budget > (1i128 << 110) {
            return None;
        }
        Some(FastData { table: table.clone(), term_weights, term_coeffs, den })
    }

    /// Exact value at the point `x_i = zeta_{n_i}^{b_i}`; `b` is reduced
    /// modulo the orders.
    pub fn value_at(&mut self, b: &[u64]) -> Result<EvalValue, PolyError> {
        let orders = self.poly.profile().orders();
        if b.len() != orders.len() {
            return Err(PolyError::ArityMismatch(b.len(), orders.len()));
        }
        if let Some(fast) = &self.fast {
            let l = self.order;
            for (w, &c) in fast.term_weights.iter().zip(&fast.term_coeffs) {
                let mut k: u64 = 0;
                for (i, &wi) in w.iter().enumerate() {
                    k = (k + (wi as u128 * (b[i] % orders[i]) as u128 % l as u128) as u64) % l;
                }
                if !self.dirty[k as usize] {
                    self.dirty[k as usize] = true;
                    self.touched.push(k);
                }
                self.slots[k as usize] += c;
            }
            let rows = fast.table.rows_i64.as_ref().expect("fast path has integer rows");
            let mut acc: Vec<i128> = vec![0; self.degree];
            for &k in &self.touched {
                let c = self.slots[k as usize];
                if c != 0 {
                    for (t, &r) in rows[k as usize].iter().enumerate() {
                        if r != 0 {
                            acc[t] += c * r as i128;
                        }
                    }
                }
            }
            for &k in &self.touched {
                self.slots[k as usize] = 0;
                self.dirty[k as usize] = false;
            }
            self.touched.clear();
            if acc[1..].iter().any(|&a| a != 0) {
                return Ok(EvalValue::NonRational);
            }
            Ok(EvalValue::Rational(Rational::new(BigInt::from(acc[0]), fast.den.clone())))
        } else {
            let point = EvaluationPoint::from_unsigned(b);
            let value = self.poly.evaluate(&point)?;
            Ok(match value.as_rational() {
                Some(r) => EvalValue::Rational(r),
                None => EvalValue::NonRational,
            })
        }
    }
}

fn bigint_to_json(n: &BigInt) -> serde_json::Value {
    // arbitrary_precision keeps every digit of a numeric literal.
    let number: serde_json::Number = serde_json::from_str(&n.to_string())
        .expect("integer literal is a valid JSON number");
    serde_json::Value::Number(number)
}

fn bigint_from_json(v: &serde_json::Value) -> Result<BigInt, PolyError> {
    match v {
        serde_json::Value::Number(n) => n
            .to_string()
            .parse::<BigInt>()
            .map_err(|_| PolyError::Json(format!("not an integer: {n}"))),
        _ => Err(PolyError::Json("coefficient entries must be integers".into())),
    }
}
