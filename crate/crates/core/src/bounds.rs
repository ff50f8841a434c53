//! Catalog of known values and upper bounds for m2(n, q) (largest cap or
//! arc) and m2'(n, q) (second largest complete cap or arc), q even.
//!
//! Every bound is held as an exact [`Surd`]; integer caps, comparisons and
//! the forbidden-interval admissibility test are decided without floating
//! point. Floats appear only in the `value` field for display.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::surd::{int, pow, Surd};

/// Largest q accepted (2^30).
pub const MAX_Q: u64 = 1 << 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Strictness {
    #[serde(rename = "=")]
    Exact,
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = "<")]
    Below,
}

impl Strictness {
    pub fn symbol(self) -> &'static str {
        match self {
            Strictness::Exact => "=",
            Strictness::AtMost => "<=",
            Strictness::Below => "<",
        }
    }
}

/// Which extremal quantity a bound is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// m2(n, q): largest cap (arc when n = 2).
    Largest,
    /// m2'(n, q): second largest complete cap.
    SecondLargest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundId {
    PlaneHyperoval,
    Ovoid,
    BinaryLargest,
    Pg44,
    SolidQ8,
    SolidSqrt5,
    SolidSqrtQ,
    GeneralQ4,
    GeneralQ8,
    GeneralSqrt5,
    GeneralSqrtQ,
    BinarySecond,
    Pg34Second,
    Chao,
    LinearThree,
    Sqrt5,
    SqrtQ,
    CaoOuDisputed,
}

impl BoundId {
    pub const ALL: [BoundId; 18] = [
        BoundId::PlaneHyperoval,
        BoundId::Ovoid,
        BoundId::BinaryLargest,
        BoundId::Pg44,
        BoundId::SolidQ8,
        BoundId::SolidSqrt5,
        BoundId::SolidSqrtQ,
        BoundId::GeneralQ4,
        BoundId::GeneralQ8,
        BoundId::GeneralSqrt5,
        BoundId::GeneralSqrtQ,
        BoundId::BinarySecond,
        BoundId::Pg34Second,
        BoundId::Chao,
        BoundId::LinearThree,
        BoundId::Sqrt5,
        BoundId::SqrtQ,
        BoundId::CaoOuDisputed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundId::PlaneHyperoval => "plane-hyperoval",
            BoundId::Ovoid => "ovoid",
            BoundId::BinaryLargest => "binary-largest",
            BoundId::Pg44 => "pg44",
            BoundId::SolidQ8 => "solid-q8",
            BoundId::SolidSqrt5 => "solid-sqrt5",
            BoundId::SolidSqrtQ => "solid-sqrt-q",
            BoundId::GeneralQ4 => "general-q4",
            BoundId::GeneralQ8 => "general-q8",
            BoundId::GeneralSqrt5 => "general-sqrt5",
            BoundId::GeneralSqrtQ => "general-sqrt-q",
            BoundId::BinarySecond => "binary-second",
            BoundId::Pg34Second => "pg34-second",
            BoundId::Chao => "chao",
            BoundId::LinearThree => "linear-three",
            BoundId::Sqrt5 => "sqrt5",
            BoundId::SqrtQ => "sqrt-q",
            BoundId::CaoOuDisputed => "cao-ou-disputed",
        }
    }

    pub fn quantity(self) -> Quantity {
        use BoundId::*;
        match self {
            PlaneHyperoval | Ovoid | BinaryLargest | Pg44 | SolidQ8 | SolidSqrt5 | SolidSqrtQ
            | GeneralQ4 | GeneralQ8 | GeneralSqrt5 | GeneralSqrtQ => Quantity::Largest,
            BinarySecond | Pg34Second | Chao | LinearThree | Sqrt5 | SqrtQ | CaoOuDisputed => {
                Quantity::SecondLargest
            }
        }
    }

    pub fn strictness(self) -> Strictness {
        use BoundId::*;
        match self {
            PlaneHyperoval | Ovoid | BinaryLargest | Pg44 | BinarySecond | Pg34Second => {
                Strictness::Exact
            }
            SolidQ8 | GeneralQ4 | GeneralQ8 | Chao | LinearThree => Strictness::AtMost,
            SolidSqrt5 | SolidSqrtQ | GeneralSqrt5 | GeneralSqrtQ | Sqrt5 | SqrtQ
            | CaoOuDisputed => Strictness::Below,
        }
    }

    pub fn formula(self) -> &'static str {
        use BoundId::*;
        match self {
            PlaneHyperoval => "q + 2",
            Ovoid => "q^2 + 1",
            BinaryLargest => "2^n",
            Pg44 => "41",
            SolidQ8 => "479",
            SolidSqrt5 => "q^3 - q^2 + 2 sqrt(5) q - 8",
            SolidSqrtQ => "q^3 - 2q^2 + 3q sqrt(q) + 8q - 9 sqrt(q) - 6",
            GeneralQ4 => "(118/3) 4^(n-4) + 5/3",
            GeneralQ8 => "478 * 8^(n-4) - 2(8^(n-5) + ... + 8 + 1) + 1",
            GeneralSqrt5 => {
                "q^(n-1) - q^(n-2) + 2 sqrt(5) q^(n-3) - 9q^(n-4) - 2(q^(n-5) + ... + 1) + 1"
            }
            GeneralSqrtQ => {
                "q^(n-1) - 2q^(n-2) + 3q^(n-3) sqrt(q) + 8q^(n-3) - 9q^(n-4) sqrt(q) \
                 - 7q^(n-4) - 2(q^(n-5) + ... + 1) + 1"
            }
            BinarySecond => "2^(n-1) + 2^(n-3)",
            Pg34Second => "14",
            Chao => "q^2 - q + 5",
            LinearThree => "q^2 - q + 3",
            Sqrt5 => "q^2 - (sqrt(5) - 1) q + 5",
            SqrtQ => "q^2 - 2q + 3 sqrt(q) + 2",
            CaoOuDisputed => "q^2 - 2q + 8",
        }
    }

    pub fn applicability(self) -> &'static str {
        use BoundId::*;
        match self {
            PlaneHyperoval => "n = 2, q even",
            Ovoid => "n = 3, q even, q > 2",
            BinaryLargest => "q = 2, n >= 2",
            Pg44 => "n = 4, q = 4",
            SolidQ8 => "n = 4, q = 8",
            SolidSqrt5 => "n = 4, q even, q > 8",
            SolidSqrtQ => "n = 4, q even, q >= 2048",
            GeneralQ4 => "n >= 5, q = 4",
            GeneralQ8 => "n >= 5, q = 8",
            GeneralSqrt5 => "n >= 5, q even, q > 8",
            GeneralSqrtQ => "n >= 5, q even, q >= 2048",
            BinarySecond => "q = 2, n >= 3",
            Pg34Second => "n = 3, q = 4",
            Chao | LinearThree | Sqrt5 => "n = 3, q even, q >= 8",
            SqrtQ => "n = 3, q even, q >= 2048",
            CaoOuDisputed => "n = 3, q even, q >= 128 (disputed)",
        }
    }

    pub fn applies(self, n: usize, q: u64) -> bool {
        use BoundId::*;
        match self {
            PlaneHyperoval => n == 2,
            Ovoid => n == 3 && q > 2,
            BinaryLargest => q == 2 && n >= 2,
            Pg44 => n == 4 && q == 4,
            SolidQ8 => n == 4 && q == 8,
            SolidSqrt5 => n == 4 && q > 8,
            SolidSqrtQ => n == 4 && q >= 2048,
            GeneralQ4 => n >= 5 && q == 4,
            GeneralQ8 => n >= 5 && q == 8,
            GeneralSqrt5 => n >= 5 && q > 8,
            GeneralSqrtQ => n >= 5 && q >= 2048,
            BinarySecond => q == 2 && n >= 3,
            Pg34Second => n == 3 && q == 4,
            Chao | LinearThree | Sqrt5 => n == 3 && q >= 8,
            SqrtQ => n == 3 && q >= 2048,
            CaoOuDisputed => n == 3 && q >= 128,
        }
    }

    /// Disputed bounds are listed but never enter the minimum.
    pub fn disputed(self) -> bool {
        self == BoundId::CaoOuDisputed
    }

    /// The exact right-hand side at (n, q). Meaningful when `applies`.
    pub fn exact_value(self, n: usize, q: u64) -> Surd {
        use BoundId::*;
        let qi = |e: u32| pow(q, e);
        let n32 = n as u32;
        // q^(n-5) + ... + q + 1
        let geometric = |n: u32| -> BigInt { (0..=n.saturating_sub(5)).map(|i| pow(q, i)).sum() };
        match self {
            PlaneHyperoval => Surd::integer(int(q as i64) + 2),
            Ovoid => Surd::integer(qi(2) + 1),
            BinaryLargest => Surd::integer(pow(2, n32)),
            Pg44 => Surd::integer(41),
            SolidQ8 => Surd::integer(479),
            SolidSqrt5 => Surd::new(qi(3) - qi(2) - 8, int(2) * qi(1), 5, int(1)),
            SolidSqrtQ => Surd::new(
                qi(3) - int(2) * qi(2) + int(8) * qi(1) - 6,
                int(3) * qi(1) - 9,
                q,
                int(1),
            ),
            GeneralQ4 => Surd::rational(int(118) * pow(4, n32 - 4) + 5, 3),
            GeneralQ8 => Surd::integer(int(478) * pow(8, n32 - 4) - int(2) * geometric(n32) + 1),
            GeneralSqrt5 => Surd::new(
                qi(n32 - 1) - qi(n32 - 2) - int(9) * qi(n32 - 4) - int(2) * geometric(n32) + 1,
                int(2) * qi(n32 - 3),
                5,
                int(1),
            ),
            GeneralSqrtQ => Surd::new(
                qi(n32 - 1) - int(2) * qi(n32 - 2) + int(8) * qi(n32 - 3)
                    - int(7) * qi(n32 - 4)
                    - int(2) * geometric(n32)
                    + 1,
                int(3) * qi(n32 - 3) - int(9) * qi(n32 - 4),
                q,
                int(1),
            ),
            BinarySecond => Surd::integer(pow(2, n32 - 1) + pow(2, n32 - 3)),
            Pg34Second => Surd::integer(14),
            Chao => Surd::integer(qi(2) - qi(1) + 5),
            LinearThree => Surd::integer(qi(2) - qi(1) + 3),
            // q^2 + q + 5 - sqrt(5) q
            Sqrt5 => Surd::new(qi(2) + qi(1) + 5, -qi(1), 5, int(1)),
            SqrtQ => Surd::from_parts(qi(2) - int(2) * qi(1) + 2, 3, q),
            CaoOuDisputed => Surd::integer(qi(2) - int(2) * qi(1) + 8),
        }
    }
}

/// Largest integer permitted by a bound of the given strictness.
pub fn integer_cap(value: &Surd, strictness: Strictness) -> BigInt {
    match strictness {
        Strictness::Exact | Strictness::AtMost => value.floor(),
        Strictness::Below => value.strict_floor(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundValue {
    pub name: &'static str,
    #[serde(skip)]
    pub id: BoundId,
    pub quantity: Quantity,
    pub formula: &'static str,
    pub applicability: &'static str,
    pub strictness: Strictness,
    pub exact: String,
    pub value: f64,
    pub integer_cap: i128,
    /// Irrational value within 10^-6 of an integer.
    pub near_integer: bool,
    pub disputed: bool,
    pub is_minimum: bool,
    #[serde(skip)]
    pub surd: Surd,
}

impl BoundValue {
    fn evaluate(id: BoundId, n: usize, q: u64) -> Result<Self> {
        let surd = id.exact_value(n, q);
        let cap = integer_cap(&surd, id.strictness());
        let integer_cap = cap.to_i128().ok_or_else(|| {
            Error::Range(format!("bound {} at n = {n}, q = {q} exceeds 128 bits", id.name()))
        })?;
        Ok(Self {
            name: id.name(),
            id,
            quantity: id.quantity(),
            formula: id.formula(),
            applicability: id.applicability(),
            strictness: id.strictness(),
            exact: surd.to_string(),
            value: surd.to_f64(),
            integer_cap,
            near_integer: surd.near_integer(6),
            disputed: id.disputed(),
            is_minimum: false,
            surd,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundSet {
    pub quantity: Quantity,
    pub bounds: Vec<BoundValue>,
    /// Tightest integer cap among undisputed bounds.
    pub minimum: Option<i128>,
    /// Names of every bound attaining the minimum.
    pub minimum_provenance: Vec<&'static str>,
}

impl BoundSet {
    fn new(quantity: Quantity, mut bounds: Vec<BoundValue>) -> Self {
        let minimum = bounds.iter().filter(|b| !b.disputed).map(|b| b.integer_cap).min();
        let mut provenance = Vec::new();
        for b in &mut bounds {
            if !b.disputed && Some(b.integer_cap) == minimum {
                b.is_minimum = true;
                provenance.push(b.name);
            }
        }
        Self { quantity, bounds, minimum, minimum_provenance: provenance }
    }

    pub fn get(&self, name: &str) -> Option<&BoundValue> {
        self.bounds.iter().find(|b| b.name == name)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundTable {
    pub n: usize,
    pub q: u64,
    pub largest: BoundSet,
    pub second_largest: BoundSet,
}

impl BoundTable {
    pub fn all(&self) -> impl Iterator<Item = &BoundValue> {
        self.largest.bounds.iter().chain(self.second_largest.bounds.iter())
    }

    pub fn get(&self, name: &str) -> Option<&BoundValue> {
        self.all().find(|b| b.name == name)
    }
}

pub fn validate_q(q: u64) -> Result<()> {
    if q < 2 || !q.is_power_of_two() || q > MAX_Q {
        return Err(Error::NotEvenPrimePower(q));
    }
    Ok(())
}

/// Every catalog entry that applies at (n, q), split into m2 and m2'.
pub fn evaluate_bounds(n: usize, q: u64) -> Result<BoundTable> {
    validate_q(q)?;
    if n < 2 {
        return Err(Error::Range(format!("n must be at least 2, got {n}")));
    }
    let mut largest = Vec::new();
    let mut second = Vec::new();
    for id in BoundId::ALL.into_iter().filter(|id| id.applies(n, q)) {
        let value = BoundValue::evaluate(id, n, q)?;
        match id.quantity() {
            Quantity::Largest => largest.push(value),
            Quantity::SecondLargest => second.push(value),
        }
    }
    Ok(BoundTable {
        n,
        q,
        largest: BoundSet::new(Quantity::Largest, largest),
        second_largest: BoundSet::new(Quantity::SecondLargest, second),
    })
}

/// An interval of sizes excluded for complete caps of PG(3, q), q >= 64,
/// indexed by an integer parameter a >= 2.
#[derive(Debug, Clone, Serialize)]
pub struct ForbiddenInterval {
    pub q: u64,
    pub a: u64,
    pub lo_exact: String,
    pub hi_exact: String,
    pub lo: f64,
    pub hi: f64,
    /// Whether a is at most the admissibility ceiling.
    pub admissible: bool,
    /// The ceiling on a, as a float for display.
    pub a_ceiling: f64,
    #[serde(skip)]
    pub lo_surd: Surd,
    #[serde(skip)]
    pub hi_surd: Surd,
}

/// lo = q^2 - (a-1)q + a sqrt(q) + 2 - a + a(a-1)/2,
/// hi = q^2 - (a-2)q - a^2 sqrt(q).
fn interval_ends(q: u64, a: u64) -> (Surd, Surd) {
    let (qi, ai) = (int(q as i64), int(a as i64));
    let lo_rational = &qi * &qi - (&ai - 1) * &qi + 2 - &ai + &ai * (&ai - 1) / 2;
    let lo = Surd::from_parts(lo_rational, ai.clone(), q);
    let hi = Surd::from_parts(&qi * &qi - (&ai - 2) * &qi, -(&ai * &ai), q);
    (lo, hi)
}

/// a <= (-2s + 3 + sqrt(16qs + 12q - 44s - 7)) / (4s + 2) with s = sqrt(q).
///
/// With L = (4a + 2)s + 2a - 3 > 0 this is L^2 <= 16qs + 12q - 44s - 7,
/// and both sides are of the form x + y s.
pub fn admissible(q: u64, a: u64) -> bool {
    let (qi, ai) = (int(q as i64), int(a as i64));
    let m = &ai * 4 + 2; // coefficient of s in L
    let c = &ai * 2 - 3; // constant of L
    // L^2 = m^2 q + c^2 + 2mc s
    let rational = &qi * 12 - 7 - &m * &m * &qi - &c * &c;
    let radical = &qi * 16 - 44 - int(2) * &m * &c;
    Surd::from_parts(rational, radical, q).sign() != Ordering::Less
}

fn a_ceiling(q: u64) -> f64 {
    let qf = q as f64;
    let s = qf.sqrt();
    (-2.0 * s + 3.0 + (16.0 * qf * s + 12.0 * qf - 44.0 * s - 7.0).sqrt()) / (4.0 * s + 2.0)
}

pub fn ss_interval(q: u64, a: u64) -> Result<ForbiddenInterval> {
    validate_q(q)?;
    if q < 64 {
        return Err(Error::Range(format!("forbidden intervals need q >= 64, got {q}")));
    }
    if a < 2 {
        return Err(Error::Range(format!("interval parameter a must be >= 2, got {a}")));
    }
    let (lo, hi) = interval_ends(q, a);
    if a == 3 {
        let sqrt_q = BoundId::SqrtQ.exact_value(3, q);
        if lo != sqrt_q {
            return Err(Error::Internal(format!(
                "a = 3 lower end {lo} differs from q^2 - 2q + 3 sqrt(q) + 2 = {sqrt_q}"
            )));
        }
    }
    Ok(ForbiddenInterval {
        q,
        a,
        lo_exact: lo.to_string(),
        hi_exact: hi.to_string(),
        lo: lo.to_f64(),
        hi: hi.to_f64(),
        admissible: admissible(q, a),
        a_ceiling: a_ceiling(q),
        lo_surd: lo,
        hi_surd: hi,
    })
}

/// Largest admissible a, if a = 2 is admissible at all.
pub fn largest_admissible_a(q: u64) -> Option<u64> {
    if !admissible(q, 2) {
        return None;
    }
    let mut a = 2;
    while admissible(q, a + 1) {
        a += 1;
    }
    Some(a)
}

#[derive(Debug, Clone, Serialize)]
pub struct ConsistencyRow {
    pub id: String,
    pub q: u64,
    pub n: usize,
    pub statement: String,
    pub pass: bool,
    pub detail: String,
}

/// Powers of two from `lo` to `hi` inclusive.
pub fn powers_of_two(lo: u64, hi: u64) -> impl Iterator<Item = u64> {
    (1..63).map(|e| 1u64 << e).filter(move |&q| q >= lo && q <= hi)
}

pub const MATRIX_MAX_Q: u64 = 1 << 16;

/// Cross-checks between bounds over q = 8, 16, ..., 2^16, plus known
/// constructions against the catalog.
pub fn consistency_matrix() -> Result<Vec<ConsistencyRow>> {
    let mut rows = Vec::new();
    for q in powers_of_two(8, MATRIX_MAX_Q) {
        let chao = BoundId::Chao.exact_value(3, q);
        let sqrt5 = BoundId::Sqrt5.exact_value(3, q);
        rows.push(ConsistencyRow {
            id: "sqrt5-below-chao".into(),
            q,
            n: 3,
            statement: "q^2 - (sqrt(5) - 1)q + 5 < q^2 - q + 5".into(),
            pass: sqrt5.cmp_exact(&chao) == Ordering::Less,
            detail: format!("{:.4} vs {:.4}", sqrt5.to_f64(), chao.to_f64()),
        });

        // (1 + sqrt(1 + 16q(q-2))) / 2 >= 2q - 7/4  <=>  4(1 + 16q(q-2)) >= (8q - 9)^2
        let qi = int(q as i64);
        let lhs = int(4) * (int(1) + int(16) * &qi * (&qi - 2));
        let e = int(8) * &qi - 9;
        let rhs = &e * &e;
        rows.push(ConsistencyRow {
            id: "tangent-lower-bound".into(),
            q,
            n: 3,
            statement: "(1 + sqrt(1 + 16q(q - 2)))/2 >= 2q - 7/4".into(),
            pass: lhs >= rhs,
            detail: format!("4D - (8q-9)^2 = {}", lhs - rhs),
        });

        // 0 >= 12 + 15q - 7 sqrt(5) q, claimed for q > 16.
        let alpha3 = Surd::new(int(12) + int(15) * &qi, -(int(7) * &qi), 5, int(1));
        let holds = alpha3.sign() != Ordering::Greater;
        rows.push(ConsistencyRow {
            id: "alpha-three-condition".into(),
            q,
            n: 3,
            statement: "0 >= 12 + 15q - 7 sqrt(5) q exactly when q > 16".into(),
            pass: holds == (q > 16),
            detail: format!("12 + 15q - 7 sqrt(5) q = {:.4}", alpha3.to_f64()),
        });

        if q >= 2048 {
            let sqrt_q = BoundId::SqrtQ.exact_value(3, q);
            rows.push(ConsistencyRow {
                id: "sqrt-q-below-sqrt5".into(),
                q,
                n: 3,
                statement: "q^2 - 2q + 3 sqrt(q) + 2 < q^2 - (sqrt(5) - 1)q + 5".into(),
                pass: sqrt_q.cmp_exact(&sqrt5) == Ordering::Less,
                detail: format!("{:.4} vs {:.4}", sqrt_q.to_f64(), sqrt5.to_f64()),
            });
        }

        for n in 3..=6 {
            let table = evaluate_bounds(n, q)?;
            let near: Vec<&str> = table.all().filter(|b| b.near_integer).map(|b| b.name).collect();
            rows.push(ConsistencyRow {
                id: "no-near-integer".into(),
                q,
                n,
                statement: "irrational bounds stay 1e-6 away from integers".into(),
                pass: near.is_empty(),
                detail: format!("near-integer: {near:?}"),
            });
        }
    }

    // Known constructions must respect every applicable bound on m2.
    for q in [4u64, 8, 16, 32] {
        rows.push(construction_row("ovoid-size", 3, q, BigInt::from(q * q + 1))?);
    }
    for n in 3..=8 {
        rows.push(construction_row("binary-affine-size", n, 2, BigInt::from(1u64 << n))?);
    }
    Ok(rows)
}

fn construction_row(id: &str, n: usize, q: u64, size: BigInt) -> Result<ConsistencyRow> {
    let table = evaluate_bounds(n, q)?;
    let violated: Vec<&str> = table
        .largest
        .bounds
        .iter()
        .filter(|b| !b.disputed && BigInt::from(b.integer_cap) < size)
        .map(|b| b.name)
        .collect();
    let attained: Vec<&str> = table
        .largest
        .bounds
        .iter()
        .filter(|b| b.strictness == Strictness::Exact && BigInt::from(b.integer_cap) == size)
        .map(|b| b.name)
        .collect();
    Ok(ConsistencyRow {
        id: id.into(),
        q,
        n,
        statement: format!("constructed size {size} respects every bound on m2({n}, {q})"),
        pass: violated.is_empty() && !size.is_zero(),
        detail: format!("violated: {violated:?}; attains: {attained:?}"),
    })
}
