//! Exact arithmetic in cyclotomic fields `Q(zeta_L)`.
//!
//! A value is stored as its canonical residue modulo the L-th cyclotomic
//! polynomial `Phi_L`, so two elements of the same field are equal exactly
//! when their coefficient vectors are equal. All arithmetic is exact; the
//! only floating point in this module is [`CyclotomicNumber::approx`], which
//! exists as a debugging cross-check and never feeds back into results.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CyclotomicError {
    #[error("cyclotomic order must be at least 1")]
    InvalidOrder,
    #[error("order mismatch: {0} vs {1}")]
    OrderMismatch(u64, u64),
    #[error("cannot embed Q(zeta_{0}) into Q(zeta_{1}): {0} does not divide {1}")]
    NotAnExtension(u64, u64),
}

/// Divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            divs.push(i);
            if i != n / i {
                divs.push(n / i);
            }
        }
        i += 1;
    }
    divs.sort_unstable();
    divs
}

/// Prime factorization as `(prime, exponent)` pairs with ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Euler's totient; `euler_phi(1) == 1`.
pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .map(|(p, e)| p.pow(e - 1) * (p - 1))
        .product()
}

/// Exact division of integer polynomials, `num / den`, with `den` monic.
/// Panics if the division is not exact; callers only divide `x^L - 1` by
/// products of cyclotomic factors, where exactness is guaranteed.
fn exact_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    assert!(den.last().map(|c| c.is_one()).unwrap_or(false), "divisor must be monic");
    let mut rem: Vec<BigInt> = num.to_vec();
    let dn = den.len() - 1;
    assert!(rem.len() > dn);
    let qn = rem.len() - 1 - dn;
    let mut quot = vec![BigInt::zero(); qn + 1];
    for k in (0..=qn).rev() {
        let c = rem[k + dn].clone();
        if !c.is_zero() {
            for (j, d) in den.iter().enumerate() {
                rem[k + j] -= &c * d;
            }
        }
        quot[k] = c;
    }
    assert!(rem.iter().all(|c| c.is_zero()), "division was not exact");
    quot
}

fn x_pow_minus_one(l: u64) -> Vec<BigInt> {
    let mut coeffs = vec![BigInt::zero(); l as usize + 1];
    coeffs[0] = BigInt::from(-1);
    coeffs[l as usize] = BigInt::one();
    coeffs
}

type PolyCache = Mutex<HashMap<u64, Arc<Vec<BigInt>>>>;

fn phi_cache() -> &'static PolyCache {
    static CACHE: OnceLock<PolyCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Integer coefficients of the L-th cyclotomic polynomial `Phi_L`, ascending
/// degree. Computed by dividing `x^L - 1` by `Phi_d` for every proper divisor
/// `d` of `L`, and memoized per process.
pub fn cyclotomic_polynomial(l: u64) -> Result<Arc<Vec<BigInt>>, CyclotomicError> {
    if l == 0 {
        return Err(CyclotomicError::InvalidOrder);
    }
    if let Some(p) = phi_cache().lock().unwrap().get(&l) {
        return Ok(p.clone());
    }
    // Fill the cache bottom-up over divisors so no lock is held recursively.
    for d in divisors(l) {
        let cached = phi_cache().lock().unwrap().contains_key(&d);
        if cached {
            continue;
        }
        let poly = if d == 1 {
            vec![BigInt::from(-1), BigInt::one()]
        } else {
            let mut num = x_pow_minus_one(d);
            for e in divisors(d) {
                if e == d {
                    continue;
                }
                let phi_e = phi_cache().lock().unwrap().get(&e).unwrap().clone();
                num = exact_div(&num, &phi_e);
            }
            num
        };
        phi_cache().lock().unwrap().insert(d, Arc::new(poly));
    }
    Ok(phi_cache().lock().unwrap().get(&l).unwrap().clone())
}

/// Canonical residues of powers of `zeta_L`: `rows[j]` holds the integer
/// coordinates of `zeta_L^j` in the basis `1, zeta, ..., zeta^(deg-1)`.
/// Rows cover `j < max(L, 2*deg - 1)`, enough for both multiplication
/// (products of residues have degree at most `2*deg - 2`) and direct
/// bucketing of exponents below `L`.
pub(crate) struct PowerTable {
    pub degree: usize,
    pub rows: Vec<Vec<BigInt>>,
    /// Same rows in `i64`, present when every entry fits. All orders used in
    /// practice fit comfortably; this is the fast path for integer-heavy
    /// evaluation loops.
    pub rows_i64: Option<Vec<Vec<i64>>>,
}

type TableCache = Mutex<HashMap<u64, Arc<PowerTable>>>;

fn table_cache() -> &'static TableCache {
    static CACHE: OnceLock<TableCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub(crate) fn power_table(l: u64) -> Result<Arc<PowerTable>, CyclotomicError> {
    if l == 0 {
        return Err(CyclotomicError::InvalidOrder);
    }
    if let Some(t) = table_cache().lock().unwrap().get(&l) {
        return Ok(t.clone());
    }
    let phi = cyclotomic_polynomial(l)?;
    let deg = phi.len() - 1;
    let nrows = std::cmp::max(l as usize, 2 * deg.max(1) - 1);
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(nrows);
    for j in 0..nrows {
        if j < deg {
            let mut row = vec![BigInt::zero(); deg];
            row[j] = BigInt::one();
            rows.push(row);
        } else {
            // zeta^j = zeta * zeta^(j-1), reduced by x^deg = -(phi - x^deg).
            let prev = &rows[j - 1];
            let top = prev[deg - 1].clone();
            let mut row = vec![BigInt::zero(); deg];
            for k in 0..deg {
                let mut c = if k > 0 { prev[k - 1].clone() } else { BigInt::zero() };
                if !top.is_zero() {
                    c -= &top * &phi[k];
                }
                row[k] = c;
            }
            rows.push(row);
        }
    }
    let rows_i64 = rows
        .iter()
        .map(|row| row.iter().map(|c| c.to_i64()).collect::<Option<Vec<i64>>>())
        .collect::<Option<Vec<Vec<i64>>>>();
    let table = Arc::new(PowerTable { degree: deg, rows, rows_i64 });
    table_cache().lock().unwrap().insert(l, table.clone());
    Ok(table)
}

/// An element of `Q(zeta_L)` in canonical form: the residue of a rational
/// polynomial modulo `Phi_L`, with `coeffs.len() == phi(L)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicNumber {
    order: u64,
    coeffs: Vec<Rational>,
}

impl CyclotomicNumber {
    pub fn zero(order: u64) -> Result<Self, CyclotomicError> {
        if order == 0 {
            return Err(CyclotomicError::InvalidOrder);
        }
        let deg = euler_phi(order) as usize;
        Ok(CyclotomicNumber { order, coeffs: vec![Rational::zero(); deg] })
    }

    pub fn one(order: u64) -> Result<Self, CyclotomicError> {
        Self::from_rational(order, Rational::one())
    }

    pub fn from_rational(order: u64, r: Rational) -> Result<Self, CyclotomicError> {
        let mut out = Self::zero(order)?;
        out.coeffs[0] = r;
        Ok(out)
    }

    /// `zeta_L^k`, with `k` taken modulo `L`.
    pub fn root_power(order: u64, k: i64) -> Result<Self, CyclotomicError> {
        if order == 0 {
            return Err(CyclotomicError::InvalidOrder);
        }
        let e = k.rem_euclid(order as i64) as u64;
        let table = power_table(order)?;
        let mut out = Self::zero(order)?;
        for (t, c) in table.rows[e as usize].iter().enumerate() {
            if !c.is_zero() {
                out.coeffs[t] = Rational::from_integer(c.clone());
            }
        }
        Ok(out)
    }

    /// Canonical value of a sparse sum `sum coeff * zeta_L^exp`; exponents are
    /// reduced modulo `L`.
    pub fn from_exponent_sums<I>(order: u64, sums: I) -> Result<Self, CyclotomicError>
    where
        I: IntoIterator<Item = (u64, Rational)>,
    {
        if order == 0 {
            return Err(CyclotomicError::InvalidOrder);
        }
        let table = power_table(order)?;
        let mut out = Self::zero(order)?;
        for (exp, c) in sums {
            if c.is_zero() {
                continue;
            }
            let row = &table.rows[(exp % order) as usize];
            for (t, rc) in row.iter().enumerate() {
                if !rc.is_zero() {
                    out.coeffs[t] += &c * rc;
                }
            }
        }
        Ok(out)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn check_order(&self, other: &Self) -> Result<(), CyclotomicError> {
        if self.order != other.order {
            return Err(CyclotomicError::OrderMismatch(self.order, other.order));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, CyclotomicError> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CyclotomicNumber { order: self.order, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, CyclotomicError> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(CyclotomicNumber { order: self.order, coeffs })
    }

    pub fn neg(&self) -> Self {
        CyclotomicNumber {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scalar_mul(&self, r: &Rational) -> Self {
        CyclotomicNumber {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, CyclotomicError> {
        self.check_order(other)?;
        let deg = self.coeffs.len();
        let mut conv = vec![Rational::zero(); 2 * deg.max(1) - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    conv[i + j] += a * b;
                }
            }
        }
        let table = power_table(self.order)?;
        let mut out = Self::zero(self.order)?;
        for (k, c) in conv.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k < deg {
                out.coeffs[k] += c;
            } else {
                for (t, rc) in table.rows[k].iter().enumerate() {
                    if !rc.is_zero() {
                        out.coeffs[t] += c * rc;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Value-preserving embedding into `Q(zeta_L2)` where `L | L2`:
    /// `zeta_L^j` maps to `zeta_L2^(j * L2/L)`.
    pub fn embed(&self, order2: u64) -> Result<Self, CyclotomicError> {
        if order2 == 0 {
            return Err(CyclotomicError::InvalidOrder);
        }
        if !order2.is_multiple_of(self.order) {
            return Err(CyclotomicError::NotAnExtension(self.order, order2));
        }
        if order2 == self.order {
            return Ok(self.clone());
        }
        let scale = order2 / self.order;
        Self::from_exponent_sums(
            order2,
            self.coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| (j as u64 * scale, c.clone())),
        )
    }

    /// The rational value of this element, if it lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Floating-point approximation `(re, im)`. Debugging cross-check only.
    pub fn approx(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, c) in self.coeffs.iter().enumerate() {
            let v = c.numer().to_f64().unwrap_or(f64::NAN)
                / c.denom().to_f64().unwrap_or(f64::NAN);
            let theta = 2.0 * std::f64::consts::PI * (j as f64) / (self.order as f64);
            re += v * theta.cos();
            im += v * theta.sin();
        }
        (re, im)
    }
}
