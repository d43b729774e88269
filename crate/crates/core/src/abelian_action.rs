//! Finite abelian group actions on finite sets.
//!
//! An action is given by moduli `(q_1, ..., q_m)` and one permutation of the
//! base set per generator. This module validates such specifications,
//! computes orbits, and extracts the per-orbit stabilizer structure: reduced
//! orders, stabilizer elements, minimal elements, a minimal generating set,
//! and element indices. It also provides the CRT canonicalization that
//! rewrites arbitrary moduli into prime-power factors, the setting the
//! polynomial constructions require.

use std::collections::HashSet;

use num_integer::Integer;
use thiserror::Error;

use crate::cyclotomic::{divisors, factorize};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ActionError {
    #[error("action needs at least one generator")]
    EmptyGroup,
    #[error("modulus {0} must be at least 2")]
    ModulusTooSmall(u64),
    #[error("generator {index} image list has length {got}, expected {expected}")]
    BadMapLength { index: usize, got: usize, expected: usize },
    #[error("generator {index} is not a bijection: value {value} repeated")]
    NotBijective { index: usize, value: usize },
    #[error("generator {index} has order {order} on point {point}; it does not divide modulus {modulus}")]
    OrderDoesNotDivide { index: usize, point: usize, order: u64, modulus: u64 },
    #[error("generators {i} and {j} do not commute; witness point {point}")]
    NonCommuting { i: usize, j: usize, point: usize },
    #[error("enumeration size {0} exceeds the configured limit {1}")]
    ScaleExceeded(u64, u64),
    #[error("orbit size formula gave a non-integer {numerator}/{denominator}; a structural assumption was violated")]
    FormulaInconsistent { numerator: u64, denominator: u64 },
}

/// Default cap on the number of reduced-group elements enumerated while
/// computing a stabilizer.
pub const DEFAULT_MAX_STABILIZER_ENUM: u64 = 1_000_000;

/// Raw description of an abelian action: the ground truth everything else is
/// checked against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianActionSpec {
    pub moduli: Vec<u64>,
    pub set_size: usize,
    pub generator_maps: Vec<Vec<usize>>,
}

/// A validated action with per-generator power maps precomputed.
#[derive(Debug, Clone)]
pub struct Action {
    spec: AbelianActionSpec,
    /// `power_maps[i][a]` is the permutation of generator `i` applied `a`
    /// times, for `0 <= a < q_i`.
    power_maps: Vec<Vec<Vec<usize>>>,
}

/// One orbit: sorted members and the smallest member as base point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitData {
    pub members: Vec<usize>,
    pub base_point: usize,
}

/// Stabilizer structure of one orbit, inside the reduced group
/// `G' = Z_{n_1} + ... + Z_{n_m}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerData {
    /// `n_i`: the order of generator `i` acting on the orbit's base point.
    pub reduced_orders: Vec<u64>,
    /// All elements of `G'` fixing the base point, ascending lexicographic.
    pub stabilizer_elements: Vec<Vec<u64>>,
    /// Elements of the stabilizer that are not a positive integer multiple
    /// (coordinates read as nonnegative integers) of any other stabilizer
    /// element. The identity is always listed.
    pub minimal_elements: Vec<Vec<u64>>,
    /// A minimal generating subset of the minimal elements, chosen by a
    /// deterministic greedy scan in lexicographic order followed by pruning.
    pub generating_set: Vec<Vec<u64>>,
    /// `g_ind` for each element of `generating_set`.
    pub indices: Vec<u64>,
}

impl Action {
    pub fn spec(&self) -> &AbelianActionSpec {
        &self.spec
    }

    pub fn moduli(&self) -> &[u64] {
        &self.spec.moduli
    }

    pub fn set_size(&self) -> usize {
        self.spec.set_size
    }

    pub fn num_generators(&self) -> usize {
        self.spec.moduli.len()
    }

    /// Group order `q_1 * ... * q_m`, if it fits in `u64`.
    pub fn group_order(&self) -> Option<u64> {
        self.spec.moduli.iter().try_fold(1u64, |acc, &q| acc.checked_mul(q))
    }

    /// Image of `point` under generator `i` applied `power` times.
    pub fn apply_generator_power(&self, i: usize, power: u64, point: usize) -> usize {
        let q = self.spec.moduli[i];
        self.power_maps[i][(power % q) as usize][point]
    }

    /// Image of `point` under the group element with the given coordinates.
    pub fn apply_element(&self, coords: &[u64], point: usize) -> usize {
        let mut p = point;
        for (i, &a) in coords.iter().enumerate() {
            p = self.apply_generator_power(i, a, p);
        }
        p
    }

    /// Order of generator `i` on `point`: the length of the cycle of
    /// `point` under the generator's map.
    pub fn generator_order_on(&self, i: usize, point: usize) -> u64 {
        let map = &self.spec.generator_maps[i];
        let mut p = map[point];
        let mut len = 1u64;
        while p != point {
            p = map[p];
            len += 1;
        }
        len
    }
}

fn permutation_cycle_lengths(map: &[usize]) -> Vec<(usize, u64)> {
    let mut seen = vec![false; map.len()];
    let mut out = Vec::new();
    for start in 0..map.len() {
        if seen[start] {
            continue;
        }
        let mut p = start;
        let mut len = 0u64;
        loop {
            seen[p] = true;
            len += 1;
            p = map[p];
            if p == start {
                break;
            }
        }
        out.push((start, len));
    }
    out
}

/// Check every invariant of an action specification and return a validated
/// action. The first violated relation is reported with a witness.
pub fn validate_action(spec: AbelianActionSpec) -> Result<Action, ActionError> {
    if spec.moduli.is_empty() {
        return Err(ActionError::EmptyGroup);
    }
    for &q in &spec.moduli {
        if q < 2 {
            return Err(ActionError::ModulusTooSmall(q));
        }
    }
    if spec.generator_maps.len() != spec.moduli.len() {
        return Err(ActionError::BadMapLength {
            index: spec.generator_maps.len(),
            got: spec.generator_maps.len(),
            expected: spec.moduli.len(),
        });
    }
    let n = spec.set_size;
    for (i, map) in spec.generator_maps.iter().enumerate() {
        if map.len() != n {
            return Err(ActionError::BadMapLength { index: i, got: map.len(), expected: n });
        }
        let mut seen = vec![false; n];
        for &img in map {
            if img >= n || seen[img] {
                return Err(ActionError::NotBijective { index: i, value: img });
            }
            seen[img] = true;
        }
        for (point, len) in permutation_cycle_lengths(map) {
            if !spec.moduli[i].is_multiple_of(len) {
                return Err(ActionError::OrderDoesNotDivide {
                    index: i,
                    point,
                    order: len,
                    modulus: spec.moduli[i],
                });
            }
        }
    }
    for i in 0..spec.generator_maps.len() {
        for j in (i + 1)..spec.generator_maps.len() {
            let (a, b) = (&spec.generator_maps[i], &spec.generator_maps[j]);
            for p in 0..n {
                if a[b[p]] != b[a[p]] {
                    return Err(ActionError::NonCommuting { i, j, point: p });
                }
            }
        }
    }
    let mut power_maps = Vec::with_capacity(spec.moduli.len());
    for (i, map) in spec.generator_maps.iter().enumerate() {
        let q = spec.moduli[i] as usize;
        let mut powers: Vec<Vec<usize>> = Vec::with_capacity(q);
        powers.push((0..n).collect());
        for a in 1..q {
            let prev = &powers[a - 1];
            powers.push(prev.iter().map(|&p| map[p]).collect());
        }
        power_maps.push(powers);
    }
    Ok(Action { spec, power_maps })
}

/// Orbits of the full group, as a partition of `{0, ..., N-1}` ordered by
/// smallest member.
pub fn compute_orbits(action: &Action) -> Vec<OrbitData> {
    let n = action.set_size();
    let mut seen = vec![false; n];
    let mut orbits = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut members = vec![start];
        seen[start] = true;
        let mut queue = vec![start];
        while let Some(p) = queue.pop() {
            for map in &action.spec.generator_maps {
                let img = map[p];
                if !seen[img] {
                    seen[img] = true;
                    members.push(img);
                    queue.push(img);
                }
            }
        }
        members.sort_unstable();
        orbits.push(OrbitData { members, base_point: start });
    }
    orbits
}

/// The index of `g` in the group with the given orders: the smallest
/// positive `t` with `t * g = 0`, equal to `lcm_i(n_i / gcd(n_i, g_i))`.
pub fn element_index(g: &[u64], orders: &[u64]) -> u64 {
    let mut acc = 1u64;
    for (&a, &n) in g.iter().zip(orders) {
        acc = acc.lcm(&(n / n.gcd(&(a % n))));
    }
    acc
}

/// Subgroup closure of `generators` inside the group with the given orders.
/// Returns the elements in ascending lexicographic order.
pub fn subgroup_closure(generators: &[Vec<u64>], orders: &[u64]) -> Vec<Vec<u64>> {
    let mut set: HashSet<Vec<u64>> = HashSet::new();
    set.insert(vec![0; orders.len()]);
    let mut queue: Vec<Vec<u64>> = vec![vec![0; orders.len()]];
    while let Some(e) = queue.pop() {
        for g in generators {
            let sum: Vec<u64> = e
                .iter()
                .zip(g)
                .zip(orders)
                .map(|((&a, &b), &n)| (a + b) % n)
                .collect();
            if set.insert(sum.clone()) {
                queue.push(sum);
            }
        }
    }
    let mut out: Vec<Vec<u64>> = set.into_iter().collect();
    out.sort_unstable();
    out
}

/// Stabilizer structure of `orbit` with the default enumeration limit.
pub fn stabilizer_data(action: &Action, orbit: &OrbitData) -> Result<StabilizerData, ActionError> {
    stabilizer_data_with_limit(action, orbit, DEFAULT_MAX_STABILIZER_ENUM)
}

/// Stabilizer structure of `orbit`, enumerating at most `max_enum` elements
/// of the reduced group.
pub fn stabilizer_data_with_limit(
    action: &Action,
    orbit: &OrbitData,
    max_enum: u64,
) -> Result<StabilizerData, ActionError> {
    let m = action.num_generators();
    let base = orbit.base_point;
    let reduced_orders: Vec<u64> = (0..m).map(|i| action.generator_order_on(i, base)).collect();
    let total = reduced_orders
        .iter()
        .try_fold(1u64, |acc, &n| acc.checked_mul(n))
        .ok_or(ActionError::ScaleExceeded(u64::MAX, max_enum))?;
    if total > max_enum {
        return Err(ActionError::ScaleExceeded(total, max_enum));
    }

    // Enumerate G' in odometer (lexicographic) order, tracking the image of
    // the base point incrementally: one generator application per step.
    let mut stabilizer_elements: Vec<Vec<u64>> = Vec::new();
    let mut coords = vec![0u64; m];
    let mut images = vec![base; m + 1]; // images[k] = (g_0^{a_0} ... g_{k-1}^{a_{k-1}})(base)
    loop {
        if images[m] == base {
            stabilizer_elements.push(coords.clone());
        }
        // Advance the odometer, last coordinate fastest.
        let mut k = m;
        loop {
            if k == 0 {
                break;
            }
            let i = k - 1;
            coords[i] += 1;
            if coords[i] < reduced_orders[i] {
                images[i + 1] = action.apply_generator_power(i, 1, images[i + 1]);
                for j in (i + 1)..m {
                    images[j + 1] = images[j];
                }
                break;
            }
            coords[i] = 0;
            k -= 1;
        }
        if k == 0 {
            break;
        }
    }

    let stab_set: HashSet<Vec<u64>> = stabilizer_elements.iter().cloned().collect();
    let zero = vec![0u64; m];
    let mut minimal_elements: Vec<Vec<u64>> = Vec::new();
    for h in &stabilizer_elements {
        if h == &zero {
            minimal_elements.push(h.clone());
            continue;
        }
        let gcd_all = h.iter().fold(0u64, |acc, &c| acc.gcd(&c));
        let mut is_minimal = true;
        for k in divisors(gcd_all) {
            if k < 2 {
                continue;
            }
            let candidate: Vec<u64> = h.iter().map(|&c| c / k).collect();
            if stab_set.contains(&candidate) {
                is_minimal = false;
                break;
            }
        }
        if is_minimal {
            minimal_elements.push(h.clone());
        }
    }

    // Generating set: an independent basis drawn from the minimal elements,
    // so that the product of the element indices equals the stabilizer order
    // and the orbit-size formula is exact. Candidates are the minimal
    // elements whose support sits at orders of a single prime (equivalently,
    // the minimal elements of prime-power order), grouped by that prime and
    // scanned by descending order with lexicographic tie-breaks; an element
    // is kept only when it enlarges the span by a full factor of its order.
    // Not every inclusion-minimal choice works here: a greedy lexicographic
    // scan can pick a dependent set whose index product overcounts the
    // stabilizer.
    let full_size = stabilizer_elements.len();
    let mut candidates: Vec<(u64, u64, &Vec<u64>)> = Vec::new(); // (prime, order, element)
    for g in &minimal_elements {
        if g == &zero {
            continue;
        }
        let mut support_primes: Vec<u64> = Vec::new();
        let mut pure = true;
        for (&a, &n) in g.iter().zip(&reduced_orders) {
            if a == 0 {
                continue;
            }
            let f = factorize(n);
            if f.len() != 1 {
                pure = false;
                break;
            }
            support_primes.push(f[0].0);
        }
        support_primes.dedup();
        if pure && support_primes.len() == 1 {
            candidates.push((support_primes[0], element_index(g, &reduced_orders), g));
        }
    }
    candidates.sort_by(|a, b| (a.0, std::cmp::Reverse(a.1), a.2).cmp(&(b.0, std::cmp::Reverse(b.1), b.2)));

    let mut generating_set: Vec<Vec<u64>> = Vec::new();
    let mut span: HashSet<Vec<u64>> = HashSet::new();
    span.insert(zero.clone());
    for (_, order, g) in &candidates {
        if span.len() == full_size {
            break;
        }
        let mut extended = generating_set.clone();
        extended.push((*g).clone());
        let closed = subgroup_closure(&extended, &reduced_orders);
        if closed.len() == span.len() * *order as usize {
            generating_set = extended;
            span = closed.into_iter().collect();
        }
    }
    if span.len() != full_size {
        // Fallback cover when no independent basis of minimal elements was
        // reached: any enlarging minimal element, then prune. The formula
        // consumer detects and reports the resulting index-product mismatch.
        for g in &minimal_elements {
            if span.contains(g) {
                continue;
            }
            generating_set.push(g.clone());
            span = subgroup_closure(&generating_set, &reduced_orders).into_iter().collect();
        }
        let mut idx = 0;
        while idx < generating_set.len() {
            let mut without: Vec<Vec<u64>> = generating_set.clone();
            without.remove(idx);
            if subgroup_closure(&without, &reduced_orders).len() == full_size {
                generating_set = without;
            } else {
                idx += 1;
            }
        }
    }

    let indices: Vec<u64> = generating_set
        .iter()
        .map(|g| element_index(g, &reduced_orders))
        .collect();

    Ok(StabilizerData {
        reduced_orders,
        stabilizer_elements,
        minimal_elements,
        generating_set,
        indices,
    })
}

/// Orbit size from the stabilizer data:
/// `prod(n_i) / prod(g_ind over the generating set)`. A non-integer result
/// means a structural assumption failed and is reported, not panicked on.
pub fn orbit_size_formula(data: &StabilizerData) -> Result<u64, ActionError> {
    let numerator: u64 = data.reduced_orders.iter().product();
    let denominator: u64 = data.indices.iter().product();
    if denominator == 0 || !numerator.is_multiple_of(denominator) {
        return Err(ActionError::FormulaInconsistent { numerator, denominator });
    }
    Ok(numerator / denominator)
}

/// One prime-power coordinate of the canonicalized group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrtFactor {
    /// Index of the original coordinate this factor came from.
    pub source: usize,
    pub prime: u64,
    /// The prime power `p^k` dividing the original modulus exactly.
    pub modulus: u64,
}

/// An action re-expressed over prime-power moduli via the CRT splitting of
/// each `Z_{q_i}`. When every original modulus is already a prime power the
/// canonical action coincides with the original coordinate by coordinate.
#[derive(Debug, Clone)]
pub struct CanonicalAction {
    pub action: Action,
    pub factors: Vec<CrtFactor>,
    original_moduli: Vec<u64>,
}

impl CanonicalAction {
    pub fn original_moduli(&self) -> &[u64] {
        &self.original_moduli
    }

    /// True when the canonicalization is the identity re-labeling.
    pub fn is_identity(&self) -> bool {
        self.original_moduli == self.action.moduli()
    }

    /// Coordinates of an original group element in the canonical group.
    pub fn project(&self, original: &[u64]) -> Vec<u64> {
        self.factors.iter().map(|f| original[f.source] % f.modulus).collect()
    }

    /// Coordinates of a canonical group element in the original group,
    /// combining residues with the CRT.
    pub fn lift(&self, canonical: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; self.original_moduli.len()];
        for (i, &q) in self.original_moduli.iter().enumerate() {
            let mut x: u64 = 0;
            for (f, &c) in self.factors.iter().zip(canonical) {
                if f.source != i {
                    continue;
                }
                let cofactor = q / f.modulus;
                let inv = mod_inverse(cofactor % f.modulus, f.modulus);
                let idempotent = cofactor % q * (inv % q) % q;
                x = (x + (c % q) * idempotent) % q;
            }
            out[i] = x;
        }
        out
    }
}

fn mod_inverse(a: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (n as i128, (a % n) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert!(r == 1, "{a} is not invertible mod {n}");
    (t.rem_euclid(n as i128)) as u64
}

/// Split each `Z_{q_i}` into its prime-power factors, producing an
/// equivalent action whose moduli are all prime powers. The generator for
/// factor `p^k` of `q_i` is the original generator raised to the CRT
/// idempotent `c` with `c = 1 mod p^k` and `c = 0 mod q_i/p^k`, so the
/// element with original coordinates `(a_i)` corresponds to canonical
/// coordinates `(a_i mod p^k)`.
pub fn canonicalize(action: &Action) -> Result<CanonicalAction, ActionError> {
    let mut moduli = Vec::new();
    let mut maps = Vec::new();
    let mut factors = Vec::new();
    for (i, &q) in action.moduli().iter().enumerate() {
        for (p, e) in factorize(q) {
            let pk = p.pow(e);
            let cofactor = q / pk;
            let shift = if cofactor == 1 {
                1
            } else {
                let inv = mod_inverse(cofactor % pk, pk);
                cofactor % q * (inv % q) % q
            };
            moduli.push(pk);
            maps.push(action.power_maps[i][shift as usize].clone());
            factors.push(CrtFactor { source: i, prime: p, modulus: pk });
        }
    }
    let spec = AbelianActionSpec {
        moduli,
        set_size: action.set_size(),
        generator_maps: maps,
    };
    let canonical = validate_action(spec)?;
    Ok(CanonicalAction {
        action: canonical,
        factors,
        original_moduli: action.moduli().to_vec(),
    })
}
