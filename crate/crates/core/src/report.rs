//! Report structures shared by the abelian and dihedral pipelines, with
//! JSON, plain-text, and LaTeX emitters.
//!
//! A report carries the per-orbit polynomials, the assembled polynomial for
//! the whole action, one verification verdict per group element, and a list
//! of recorded divergences of the closed-form product constructions (which
//! are first-class outputs, never silently papered over).

use crate::multipoly::MultiPoly;
use crate::oracle::VerificationVerdict;
use crate::rational::{format_rational, Rational};
use crate::sieving::ConstructionTag;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupDescriptor {
    Abelian {
        original_moduli: Vec<u64>,
        canonical_moduli: Vec<u64>,
    },
    Dihedral {
        n: u64,
    },
}

impl GroupDescriptor {
    pub fn describe(&self) -> String {
        match self {
            GroupDescriptor::Abelian { original_moduli, canonical_moduli } => {
                let orig = moduli_string(original_moduli);
                if original_moduli == canonical_moduli {
                    orig
                } else {
                    format!("{orig} (canonicalized to {})", moduli_string(canonical_moduli))
                }
            }
            GroupDescriptor::Dihedral { n } => format!("D_{n}"),
        }
    }
}

fn moduli_string(moduli: &[u64]) -> String {
    moduli.iter().map(|q| format!("Z_{q}")).collect::<Vec<_>>().join(" + ")
}

/// A recorded divergence: some construction evaluated to the wrong value at
/// a witness element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discrepancy {
    /// Base point of the orbit the construction belongs to, when per-orbit.
    pub orbit_base: Option<usize>,
    pub construction: String,
    /// Witness group element. For per-orbit checks these are reduced-group
    /// coordinates; for whole-action checks, full group coordinates.
    pub element: Vec<u64>,
    pub expected: Rational,
    /// `None` when the evaluation was not even rational.
    pub got: Option<Rational>,
    pub detail: String,
}

/// Aggregate agreement of one construction across the checked elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionStats {
    pub construction: String,
    pub passed: usize,
    pub total: usize,
    pub first_witness: Option<Vec<u64>>,
}

impl ConstructionStats {
    pub fn all_passed(&self) -> bool {
        self.passed == self.total
    }
}

/// Per-orbit record: structure data plus the orbit polynomial re-expressed
/// over the whole group's orders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitSummary {
    pub base_point: usize,
    pub size: u64,
    pub reduced_orders: Vec<u64>,
    /// Dihedral orbit shape, when applicable.
    pub kind: Option<String>,
    pub minimal_elements: Vec<Vec<u64>>,
    pub generating_set: Vec<Vec<u64>>,
    pub indices: Vec<u64>,
    /// Orbit size from the index formula, when it was consistent.
    pub formula_size: Option<u64>,
    /// The verified orbit polynomial over the group profile.
    pub polynomial: MultiPoly,
    pub construction: ConstructionTag,
    /// The closed-form (product formula) polynomial, when it exists.
    pub paper_polynomial: Option<MultiPoly>,
    pub paper_agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveReport {
    pub group: GroupDescriptor,
    pub set_size: usize,
    pub orbits: Vec<OrbitSummary>,
    /// The assembled polynomial whose verdicts are reported.
    pub polynomial: MultiPoly,
    /// The assembly of the closed-form constructions, when every orbit has
    /// one. Equal to `polynomial` exactly when no divergence was found.
    pub paper_polynomial: Option<MultiPoly>,
    /// One verdict per group element for `polynomial`.
    pub verdicts: Vec<VerificationVerdict>,
    pub constructions: Vec<ConstructionStats>,
    pub discrepancies: Vec<Discrepancy>,
}

impl SieveReport {
    /// True when every verdict on the assembled polynomial passed.
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    /// True when some closed-form construction diverged somewhere.
    pub fn paper_divergent(&self) -> bool {
        self.orbits.iter().any(|o| !o.paper_agrees)
            || self.discrepancies.iter().any(|d| d.construction.starts_with("paper")
                || d.construction.starts_with("formula"))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut obj = serde_json::Map::new();
        let group = match &self.group {
            GroupDescriptor::Abelian { original_moduli, canonical_moduli } => {
                let mut g = serde_json::Map::new();
                g.insert("kind".into(), "abelian".into());
                g.insert("moduli".into(), json_u64s(original_moduli));
                g.insert("canonical_moduli".into(), json_u64s(canonical_moduli));
                serde_json::Value::Object(g)
            }
            GroupDescriptor::Dihedral { n } => {
                let mut g = serde_json::Map::new();
                g.insert("kind".into(), "dihedral".into());
                g.insert("n".into(), (*n).into());
                serde_json::Value::Object(g)
            }
        };
        obj.insert("group".into(), group);
        obj.insert("set_size".into(), (self.set_size as u64).into());
        obj.insert("polynomial".into(), self.polynomial.to_json());
        if let Some(p) = &self.paper_polynomial {
            obj.insert("paper_polynomial".into(), p.to_json());
        }
        obj.insert(
            "orbits".into(),
            serde_json::Value::Array(self.orbits.iter().map(orbit_json).collect()),
        );
        obj.insert(
            "verdicts".into(),
            serde_json::Value::Array(self.verdicts.iter().map(verdict_json).collect()),
        );
        obj.insert(
            "constructions".into(),
            serde_json::Value::Array(
                self.constructions
                    .iter()
                    .map(|c| {
                        let mut s = serde_json::Map::new();
                        s.insert("construction".into(), c.construction.clone().into());
                        s.insert("passed".into(), (c.passed as u64).into());
                        s.insert("total".into(), (c.total as u64).into());
                        if let Some(w) = &c.first_witness {
                            s.insert("first_witness".into(), json_u64s(w));
                        }
                        serde_json::Value::Object(s)
                    })
                    .collect(),
            ),
        );
        obj.insert(
            "discrepancies".into(),
            serde_json::Value::Array(self.discrepancies.iter().map(discrepancy_json).collect()),
        );
        obj.insert("all_pass".into(), self.all_pass().into());
        serde_json::Value::Object(obj)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let push = |out: &mut String, s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        push(&mut out, format!("group: {}", self.group.describe()));
        push(&mut out, format!("set size: {}", self.set_size));
        push(&mut out, format!("orbits: {}", self.orbits.len()));
        for o in &self.orbits {
            push(
                &mut out,
                format!(
                    "  orbit at {}: size {}, reduced orders {:?}{}",
                    o.base_point,
                    o.size,
                    o.reduced_orders,
                    o.kind.as_ref().map(|k| format!(", {k}")).unwrap_or_default()
                ),
            );
            if !o.generating_set.is_empty() {
                push(&mut out, format!("    generating set {:?} indices {:?}", o.generating_set, o.indices));
            }
            push(&mut out, format!("    polynomial [{}]: {}", o.construction.as_str(), o.polynomial));
            if let Some(p) = &o.paper_polynomial {
                if o.paper_agrees {
                    push(&mut out, "    product formula agrees".to_string());
                } else {
                    push(&mut out, format!("    product formula DIVERGES: {p}"));
                }
            }
        }
        push(&mut out, format!("polynomial: {}", self.polynomial));
        let pass = self.verdicts.iter().filter(|v| v.pass).count();
        push(&mut out, format!("verdicts: {pass}/{} pass", self.verdicts.len()));
        for c in &self.constructions {
            push(
                &mut out,
                format!(
                    "construction {}: {}/{} agree{}",
                    c.construction,
                    c.passed,
                    c.total,
                    c.first_witness
                        .as_ref()
                        .map(|w| format!(", first divergence at {w:?}"))
                        .unwrap_or_default()
                ),
            );
        }
        for d in &self.discrepancies {
            push(
                &mut out,
                format!(
                    "divergence [{}] at {:?}: expected {}, got {}{}",
                    d.construction,
                    d.element,
                    format_rational(&d.expected),
                    d.got.as_ref().map(format_rational).unwrap_or_else(|| "non-rational".into()),
                    if d.detail.is_empty() { String::new() } else { format!(" ({})", d.detail) }
                ),
            );
        }
        out
    }

    pub fn to_latex(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("% group: {}\n", self.group.describe()));
        out.push_str(&format!("f = {}\n", self.polynomial.to_latex()));
        for o in &self.orbits {
            out.push_str(&format!(
                "% orbit at {} (size {}):\n f_{{{}}} = {}\n",
                o.base_point,
                o.size,
                o.base_point,
                o.polynomial.to_latex()
            ));
        }
        out
    }
}

fn json_u64s(v: &[u64]) -> serde_json::Value {
    serde_json::Value::Array(v.iter().map(|&x| x.into()).collect())
}

fn rational_json(r: &Rational) -> serde_json::Value {
    serde_json::Value::Array(vec![
        serde_json::Value::String(r.numer().to_string()),
        serde_json::Value::String(r.denom().to_string()),
    ])
}

fn orbit_json(o: &OrbitSummary) -> serde_json::Value {
    let mut s = serde_json::Map::new();
    s.insert("base_point".into(), (o.base_point as u64).into());
    s.insert("size".into(), o.size.into());
    s.insert("reduced_orders".into(), json_u64s(&o.reduced_orders));
    if let Some(k) = &o.kind {
        s.insert("kind".into(), k.clone().into());
    }
    s.insert(
        "minimal_elements".into(),
        serde_json::Value::Array(o.minimal_elements.iter().map(|e| json_u64s(e)).collect()),
    );
    s.insert(
        "generating_set".into(),
        serde_json::Value::Array(o.generating_set.iter().map(|e| json_u64s(e)).collect()),
    );
    s.insert("indices".into(), json_u64s(&o.indices));
    if let Some(f) = o.formula_size {
        s.insert("formula_size".into(), f.into());
    }
    s.insert("construction".into(), o.construction.as_str().into());
    s.insert("polynomial".into(), o.polynomial.to_json());
    if let Some(p) = &o.paper_polynomial {
        s.insert("paper_polynomial".into(), p.to_json());
    }
    s.insert("paper_agrees".into(), o.paper_agrees.into());
    serde_json::Value::Object(s)
}

fn verdict_json(v: &VerificationVerdict) -> serde_json::Value {
    let mut s = serde_json::Map::new();
    s.insert("element".into(), json_u64s(&v.element));
    s.insert("expected".into(), v.expected.into());
    s.insert(
        "got".into(),
        match &v.got {
            Some(r) => rational_json(r),
            None => serde_json::Value::Null,
        },
    );
    s.insert("pass".into(), v.pass.into());
    serde_json::Value::Object(s)
}

fn discrepancy_json(d: &Discrepancy) -> serde_json::Value {
    let mut s = serde_json::Map::new();
    if let Some(b) = d.orbit_base {
        s.insert("orbit_base".into(), (b as u64).into());
    }
    s.insert("construction".into(), d.construction.clone().into());
    s.insert("element".into(), json_u64s(&d.element));
    s.insert("expected".into(), rational_json(&d.expected));
    s.insert(
        "got".into(),
        match &d.got {
            Some(r) => rational_json(r),
            None => serde_json::Value::Null,
        },
    );
    if !d.detail.is_empty() {
        s.insert("detail".into(), d.detail.clone().into());
    }
    serde_json::Value::Object(s)
}
