//! Exact symbolic algebra of the left-invariant vector fields at n = 1.
//!
//! Coordinates are ordered `x0, x1, x2, x3, t1, t2, t3`. Coefficients are
//! polynomials over the rationals, so commutators, the commutation table,
//! the Jacobi identity, and the sum-of-squares sub-Laplacian are all
//! checked with zero tolerance.

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::HqError;

/// Number of coordinates (4 horizontal + 3 center).
pub const DIM: usize = 7;

const VAR_NAMES: [&str; DIM] = ["x0", "x1", "x2", "x3", "t1", "t2", "t3"];

/// Exponent multi-index over the 7 coordinates.
pub type MultiIndex = [u8; DIM];

/// Sparse polynomial in x0..x3, t1..t3 with rational coefficients.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial7 {
    terms: BTreeMap<MultiIndex, Rational64>,
}

impl Polynomial7 {
    pub fn zero() -> Self {
        Polynomial7::default()
    }

    pub fn constant(c: Rational64) -> Self {
        let mut p = Polynomial7::zero();
        if !c.is_zero() {
            p.terms.insert([0; DIM], c);
        }
        p
    }

    pub fn from_int(c: i64) -> Self {
        Polynomial7::constant(Rational64::from_integer(c))
    }

    /// The coordinate monomial `x_i` (index order x0..x3, t1..t3).
    pub fn var(i: usize) -> Self {
        assert!(i < DIM);
        let mut exp = [0u8; DIM];
        exp[i] = 1;
        let mut p = Polynomial7::zero();
        p.terms.insert(exp, Rational64::one());
        p
    }

    pub fn monomial(exp: MultiIndex, c: Rational64) -> Self {
        let mut p = Polynomial7::zero();
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rational64)> {
        self.terms.iter()
    }

    fn add_term(&mut self, exp: MultiIndex, c: Rational64) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(Rational64::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn add(&self, other: &Polynomial7) -> Polynomial7 {
        let mut out = self.clone();
        for (exp, c) in &other.terms {
            out.add_term(*exp, *c);
        }
        out
    }

    pub fn sub(&self, other: &Polynomial7) -> Polynomial7 {
        let mut out = self.clone();
        for (exp, c) in &other.terms {
            out.add_term(*exp, -c);
        }
        out
    }

    pub fn neg(&self) -> Polynomial7 {
        Polynomial7 {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial7) -> Polynomial7 {
        let mut out = Polynomial7::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let mut exp = *ea;
                for (e, d) in exp.iter_mut().zip(eb) {
                    *e += d;
                }
                out.add_term(exp, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: Rational64) -> Polynomial7 {
        if c.is_zero() {
            return Polynomial7::zero();
        }
        Polynomial7 {
            terms: self.terms.iter().map(|(e, k)| (*e, k * c)).collect(),
        }
    }

    /// Exact partial derivative ∂/∂(coordinate i).
    pub fn partial(&self, i: usize) -> Polynomial7 {
        assert!(i < DIM);
        let mut out = Polynomial7::zero();
        for (exp, c) in &self.terms {
            if exp[i] == 0 {
                continue;
            }
            let mut e = *exp;
            e[i] -= 1;
            out.add_term(e, c * Rational64::from_integer(exp[i] as i64));
        }
        out
    }

    /// Total degree of the polynomial (0 for the zero polynomial).
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&k| k as u32).sum())
            .max()
            .unwrap_or(0)
    }

    /// Numeric evaluation at a coordinate point.
    pub fn eval(&self, point: &[f64; DIM]) -> f64 {
        self.terms
            .iter()
            .map(|(exp, c)| {
                let m: f64 = exp
                    .iter()
                    .zip(point)
                    .map(|(&e, &x)| x.powi(e as i32))
                    .product();
                rational_to_f64(*c) * m
            })
            .sum()
    }
}

fn rational_to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn fmt_monomial(exp: &MultiIndex) -> String {
    let mut parts = Vec::new();
    for (i, &e) in exp.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(VAR_NAMES[i].to_string()),
            _ => parts.push(format!("{}^{}", VAR_NAMES[i], e)),
        }
    }
    parts.join("*")
}

impl fmt::Display for Polynomial7 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exp, c) in &self.terms {
            let mono = fmt_monomial(exp);
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

/// First-order differential operator Σᵢ pᵢ ∂ᵢ with polynomial
/// coefficients and no zeroth-order term.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FirstOrderOperator {
    pub coeffs: [Polynomial7; DIM],
}

impl FirstOrderOperator {
    pub fn zero() -> Self {
        FirstOrderOperator::default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Polynomial7::is_zero)
    }

    /// ∂/∂(coordinate i).
    pub fn partial(i: usize) -> Self {
        let mut op = FirstOrderOperator::zero();
        op.coeffs[i] = Polynomial7::from_int(1);
        op
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = FirstOrderOperator::zero();
        for i in 0..DIM {
            out.coeffs[i] = self.coeffs[i].add(&other.coeffs[i]);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = FirstOrderOperator::zero();
        for i in 0..DIM {
            out.coeffs[i] = self.coeffs[i].sub(&other.coeffs[i]);
        }
        out
    }

    pub fn scale(&self, c: Rational64) -> Self {
        let mut out = FirstOrderOperator::zero();
        for i in 0..DIM {
            out.coeffs[i] = self.coeffs[i].scale(c);
        }
        out
    }

    /// Exact symbolic application to a polynomial; linear in `f`.
    pub fn apply(&self, f: &Polynomial7) -> Polynomial7 {
        let mut out = Polynomial7::zero();
        for i in 0..DIM {
            if !self.coeffs[i].is_zero() {
                out = out.add(&self.coeffs[i].mul(&f.partial(i)));
            }
        }
        out
    }
}

impl fmt::Display for FirstOrderOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for i in 0..DIM {
            if self.coeffs[i].is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}) d/d{}", self.coeffs[i], VAR_NAMES[i])?;
        }
        Ok(())
    }
}

/// Commutator AB − BA of first-order operators; the second-order parts
/// cancel, so the result is again first order.
pub fn commutator(a: &FirstOrderOperator, b: &FirstOrderOperator) -> FirstOrderOperator {
    let mut out = FirstOrderOperator::zero();
    for j in 0..DIM {
        let mut c = Polynomial7::zero();
        for i in 0..DIM {
            if !a.coeffs[i].is_zero() {
                c = c.add(&a.coeffs[i].mul(&b.coeffs[j].partial(i)));
            }
            if !b.coeffs[i].is_zero() {
                c = c.sub(&b.coeffs[i].mul(&a.coeffs[j].partial(i)));
            }
        }
        out.coeffs[j] = c;
    }
    out
}

/// The named basis fields of the Lie algebra at n = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldName {
    X0,
    X1,
    X2,
    X3,
    T1,
    T2,
    T3,
}

impl FieldName {
    pub const ALL: [FieldName; 7] = [
        FieldName::X0,
        FieldName::X1,
        FieldName::X2,
        FieldName::X3,
        FieldName::T1,
        FieldName::T2,
        FieldName::T3,
    ];
}

impl fmt::Display for FieldName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FieldName::X0 => "X0",
            FieldName::X1 => "X1",
            FieldName::X2 => "X2",
            FieldName::X3 => "X3",
            FieldName::T1 => "T1",
            FieldName::T2 => "T2",
            FieldName::T3 => "T3",
        };
        write!(f, "{s}")
    }
}

impl FromStr for FieldName {
    type Err = HqError;
    fn from_str(s: &str) -> Result<Self, HqError> {
        match s.to_ascii_uppercase().as_str() {
            "X0" => Ok(FieldName::X0),
            "X1" => Ok(FieldName::X1),
            "X2" => Ok(FieldName::X2),
            "X3" => Ok(FieldName::X3),
            "T1" => Ok(FieldName::T1),
            "T2" => Ok(FieldName::T2),
            "T3" => Ok(FieldName::T3),
            _ => Err(HqError::Parse(format!("unknown vector field {s:?}"))),
        }
    }
}

/// Coefficients of T1, T2, T3 in the field X_i: row i of the table below,
/// scaled by 2. Entry (i, k) is the coordinate index whose variable
/// appears, with the given sign.
///
///   X0 = d/dx0 - 2 x1 T1 - 2 x2 T2 - 2 x3 T3
///   X1 = d/dx1 + 2 x0 T1 - 2 x3 T2 + 2 x2 T3
///   X2 = d/dx2 + 2 x3 T1 + 2 x0 T2 - 2 x1 T3
///   X3 = d/dx3 - 2 x2 T1 + 2 x1 T2 + 2 x0 T3
const TWIST: [[(usize, i64); 3]; 4] = [
    [(1, -2), (2, -2), (3, -2)],
    [(0, 2), (3, -2), (2, 2)],
    [(3, 2), (0, 2), (1, -2)],
    [(2, -2), (1, 2), (0, 2)],
];

/// The exact left-invariant basis field with the given name.
pub fn vector_field(name: FieldName) -> FirstOrderOperator {
    match name {
        FieldName::T1 => FirstOrderOperator::partial(4),
        FieldName::T2 => FirstOrderOperator::partial(5),
        FieldName::T3 => FirstOrderOperator::partial(6),
        FieldName::X0 | FieldName::X1 | FieldName::X2 | FieldName::X3 => {
            let i = match name {
                FieldName::X0 => 0,
                FieldName::X1 => 1,
                FieldName::X2 => 2,
                FieldName::X3 => 3,
                _ => unreachable!(),
            };
            let mut op = FirstOrderOperator::partial(i);
            for (k, &(var, c)) in TWIST[i].iter().enumerate() {
                op.coeffs[4 + k] = Polynomial7::var(var).scale(Rational64::from_integer(c));
            }
            op
        }
    }
}

/// One verified relation of the commutation table.
#[derive(Debug, Clone)]
pub struct RelationCheck {
    pub name: String,
    pub pass: bool,
}

/// Report from [`check_commutation_table`].
#[derive(Debug, Clone)]
pub struct TableReport {
    pub relations: Vec<RelationCheck>,
}

impl TableReport {
    pub fn all_pass(&self) -> bool {
        self.relations.iter().all(|r| r.pass)
    }
}

/// Verifies the full commutation table exactly: the six structure
/// relations, antisymmetry diagonals `[Xi,Xi] = 0`, and centrality of the
/// T fields.
pub fn check_commutation_table() -> TableReport {
    check_commutation_table_of(&FieldName::ALL.map(vector_field))
}

/// Table check against caller-supplied fields, in the order
/// X0, X1, X2, X3, T1, T2, T3. Lets tests inject perturbed fields.
pub fn check_commutation_table_of(fields: &[FirstOrderOperator; 7]) -> TableReport {
    let x = &fields[0..4];
    let t = &fields[4..7];
    let four = |k: usize| t[k].scale(Rational64::from_integer(4));

    let mut relations = Vec::new();
    let mut check = |name: String, got: FirstOrderOperator, want: FirstOrderOperator| {
        relations.push(RelationCheck {
            name,
            pass: got == want,
        });
    };

    // the six structure relations
    check("[X0,X1] = 4T1".into(), commutator(&x[0], &x[1]), four(0));
    check("[X3,X2] = 4T1".into(), commutator(&x[3], &x[2]), four(0));
    check("[X0,X2] = 4T2".into(), commutator(&x[0], &x[2]), four(1));
    check("[X1,X3] = 4T2".into(), commutator(&x[1], &x[3]), four(1));
    check("[X0,X3] = 4T3".into(), commutator(&x[0], &x[3]), four(2));
    check("[X2,X1] = 4T3".into(), commutator(&x[2], &x[1]), four(2));

    // diagonals
    for i in 0..4 {
        check(
            format!("[X{i},X{i}] = 0"),
            commutator(&x[i], &x[i]),
            FirstOrderOperator::zero(),
        );
    }

    // the T fields are central
    for (k, tk) in t.iter().enumerate() {
        for (name, f) in FieldName::ALL.iter().zip(fields) {
            check(
                format!("[T{},{name}] = 0", k + 1),
                commutator(tk, f),
                FirstOrderOperator::zero(),
            );
        }
    }

    TableReport { relations }
}

/// Second-order operator: symmetric second-order part (slot (i,j), i ≤ j,
/// carries the full coefficient of ∂i∂j) plus a first-order part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecondOrderOperator {
    second: Vec<Polynomial7>, // DIM × DIM upper triangle, row-major full matrix
    pub first: FirstOrderOperator,
}

impl Default for SecondOrderOperator {
    fn default() -> Self {
        SecondOrderOperator {
            second: vec![Polynomial7::zero(); DIM * DIM],
            first: FirstOrderOperator::zero(),
        }
    }
}

impl SecondOrderOperator {
    pub fn zero() -> Self {
        SecondOrderOperator::default()
    }

    /// Coefficient of ∂i∂j (unordered pair).
    pub fn second(&self, i: usize, j: usize) -> &Polynomial7 {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        &self.second[i * DIM + j]
    }

    fn second_mut(&mut self, i: usize, j: usize) -> &mut Polynomial7 {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        &mut self.second[i * DIM + j]
    }

    pub fn add_second(&mut self, i: usize, j: usize, p: &Polynomial7) {
        let slot = self.second_mut(i, j);
        *slot = slot.add(p);
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for i in 0..DIM * DIM {
            out.second[i] = out.second[i].add(&other.second[i]);
        }
        out.first = out.first.add(&other.first);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Rational64::from_integer(-1)))
    }

    pub fn scale(&self, c: Rational64) -> Self {
        SecondOrderOperator {
            second: self.second.iter().map(|p| p.scale(c)).collect(),
            first: self.first.scale(c),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.second.iter().all(Polynomial7::is_zero) && self.first.is_zero()
    }

    /// Exact symbolic application; linear in `f`.
    pub fn apply(&self, f: &Polynomial7) -> Polynomial7 {
        let mut out = self.first.apply(f);
        for i in 0..DIM {
            for j in i..DIM {
                let c = &self.second[i * DIM + j];
                if !c.is_zero() {
                    out = out.add(&c.mul(&f.partial(i).partial(j)));
                }
            }
        }
        out
    }
}

impl fmt::Display for SecondOrderOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for i in 0..DIM {
            for j in i..DIM {
                let c = &self.second[i * DIM + j];
                if c.is_zero() {
                    continue;
                }
                if wrote {
                    write!(f, " + ")?;
                }
                wrote = true;
                if i == j {
                    write!(f, "({c}) d2/d{}2", VAR_NAMES[i])?;
                } else {
                    write!(f, "({c}) d2/d{}d{}", VAR_NAMES[i], VAR_NAMES[j])?;
                }
            }
        }
        if !self.first.is_zero() {
            if wrote {
                write!(f, " + ")?;
            }
            wrote = true;
            write!(f, "{}", self.first)?;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Composition A∘B of first-order operators:
/// `aᵢ∂ᵢ(bⱼ∂ⱼf) = aᵢbⱼ ∂ᵢ∂ⱼf + aᵢ(∂ᵢbⱼ) ∂ⱼf`.
pub fn compose(a: &FirstOrderOperator, b: &FirstOrderOperator) -> SecondOrderOperator {
    let mut out = SecondOrderOperator::zero();
    for i in 0..DIM {
        if a.coeffs[i].is_zero() {
            continue;
        }
        for j in 0..DIM {
            if !b.coeffs[j].is_zero() {
                out.add_second(i, j, &a.coeffs[i].mul(&b.coeffs[j]));
            }
            let db = b.coeffs[j].partial(i);
            if !db.is_zero() {
                out.first.coeffs[j] = out.first.coeffs[j].add(&a.coeffs[i].mul(&db));
            }
        }
    }
    out
}

/// The sum of squares Σᵢ Xᵢ² of the horizontal fields.
pub fn horizontal_sum_of_squares() -> SecondOrderOperator {
    let mut out = SecondOrderOperator::zero();
    for name in [FieldName::X0, FieldName::X1, FieldName::X2, FieldName::X3] {
        let x = vector_field(name);
        out = out.add(&compose(&x, &x));
    }
    out
}

/// The sub-Laplacian −¼ Σᵢ Xᵢ², assembled exactly.
pub fn sublaplacian() -> SecondOrderOperator {
    horizontal_sum_of_squares().scale(Rational64::new(-1, 4))
}

/// A widely quoted expanded form of −Σᵢ Xᵢ² (the negated Kohn Laplacian)
/// on this group, encoded verbatim for comparison:
///
///   −Δ = −(∂²/∂x0² + … + ∂²/∂x3²) + 4|x|²(∂²/∂t1² + ∂²/∂t2² + ∂²/∂t3²)
///        + (−x1 ∂x0 + x0 ∂x1 + x3 ∂x2 − x2 ∂x3) T1
///        + (−x2 ∂x0 − x3 ∂x1 + x0 ∂x2 + x1 ∂x3) T2
///        + (−x3 ∂x0 + x2 ∂x1 − x1 ∂x2 + x0 ∂x3) T3
///
/// See [`expansion_diff`] for the exact disagreement with the direct
/// expansion of −Σᵢ Xᵢ².
pub fn quoted_negated_kohn_expansion() -> SecondOrderOperator {
    let mut out = SecondOrderOperator::zero();
    let minus_one = Rational64::from_integer(-1);
    for i in 0..4 {
        out.add_second(i, i, &Polynomial7::constant(minus_one));
    }
    // 4|x|² on each center diagonal
    let mut x_sq = Polynomial7::zero();
    for i in 0..4 {
        x_sq = x_sq.add(&Polynomial7::var(i).mul(&Polynomial7::var(i)));
    }
    let four_x_sq = x_sq.scale(Rational64::from_integer(4));
    for k in 4..DIM {
        out.add_second(k, k, &four_x_sq);
    }
    // cross blocks (∂xi ∂tk) with unit-magnitude coefficients
    let cross: [[(usize, i64); 4]; 3] = [
        [(1, -1), (0, 1), (3, 1), (2, -1)],
        [(2, -1), (3, -1), (0, 1), (1, 1)],
        [(3, -1), (2, 1), (1, -1), (0, 1)],
    ];
    for (k, row) in cross.iter().enumerate() {
        for (i, &(var, c)) in row.iter().enumerate() {
            out.add_second(i, 4 + k, &Polynomial7::var(var).scale(Rational64::from_integer(c)));
        }
    }
    out
}

/// One differing coefficient between two second-order operators.
#[derive(Debug, Clone)]
pub struct ExpansionDiffEntry {
    /// Human-readable derivative slot, e.g. `d2/dt1^2` or `d/dx0 d/dt1`.
    pub slot: String,
    pub computed: String,
    pub quoted: String,
}

/// Machine-checked diff of the exact expansion of −Σᵢ Xᵢ² against
/// [`quoted_negated_kohn_expansion`]. Empty iff they agree slot by slot.
pub fn expansion_diff() -> Vec<ExpansionDiffEntry> {
    let computed = horizontal_sum_of_squares().scale(Rational64::from_integer(-1));
    let quoted = quoted_negated_kohn_expansion();
    let mut out = Vec::new();
    for i in 0..DIM {
        for j in i..DIM {
            let a = computed.second(i, j);
            let b = quoted.second(i, j);
            if a != b {
                let slot = if i == j {
                    format!("d2/d{}^2", VAR_NAMES[i])
                } else {
                    format!("d2/d{}d{}", VAR_NAMES[i], VAR_NAMES[j])
                };
                out.push(ExpansionDiffEntry {
                    slot,
                    computed: a.to_string(),
                    quoted: b.to_string(),
                });
            }
        }
    }
    for j in 0..DIM {
        let a = &computed.first.coeffs[j];
        let b = &quoted.first.coeffs[j];
        if a != b {
            out.push(ExpansionDiffEntry {
                slot: format!("d/d{}", VAR_NAMES[j]),
                computed: a.to_string(),
                quoted: b.to_string(),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> FirstOrderOperator {
        vector_field(match i {
            0 => FieldName::X0,
            1 => FieldName::X1,
            2 => FieldName::X2,
            3 => FieldName::X3,
            _ => panic!(),
        })
    }

    fn t(k: usize) -> FirstOrderOperator {
        vector_field(match k {
            1 => FieldName::T1,
            2 => FieldName::T2,
            3 => FieldName::T3,
            _ => panic!(),
        })
    }

    fn four_t(k: usize) -> FirstOrderOperator {
        t(k).scale(Rational64::from_integer(4))
    }

    #[test]
    fn field_coefficients_read_off() {
        // apply(X0, x0) = 1, apply(X0, t1) = -2 x1
        assert_eq!(x(0).apply(&Polynomial7::var(0)), Polynomial7::from_int(1));
        assert_eq!(
            x(0).apply(&Polynomial7::var(4)),
            Polynomial7::var(1).scale(Rational64::from_integer(-2))
        );
        // apply(X2, t3) = -2 x1
        assert_eq!(
            x(2).apply(&Polynomial7::var(6)),
            Polynomial7::var(1).scale(Rational64::from_integer(-2))
        );
        // apply(X3, t2) = 2 x1
        assert_eq!(
            x(3).apply(&Polynomial7::var(5)),
            Polynomial7::var(1).scale(Rational64::from_integer(2))
        );
        // apply(T2, t2) = 1
        assert_eq!(t(2).apply(&Polynomial7::var(5)), Polynomial7::from_int(1));
    }

    #[test]
    fn structure_relations_exact() {
        assert_eq!(commutator(&x(0), &x(1)), four_t(1));
        assert_eq!(commutator(&x(3), &x(2)), four_t(1));
        assert_eq!(commutator(&x(0), &x(2)), four_t(2));
        assert_eq!(commutator(&x(1), &x(3)), four_t(2));
        assert_eq!(commutator(&x(0), &x(3)), four_t(3));
        assert_eq!(commutator(&x(2), &x(1)), four_t(3));
        // antisymmetry: [X1,X2] = -[X2,X1] = -4T3
        assert_eq!(
            commutator(&x(1), &x(2)),
            four_t(3).scale(Rational64::from_integer(-1))
        );
        assert!(commutator(&t(1), &x(0)).is_zero());
    }

    #[test]
    fn full_table_passes() {
        let report = check_commutation_table();
        assert!(report.all_pass());
        assert!(report.relations.len() >= 10);
    }

    #[test]
    fn perturbed_field_is_caught() {
        // mutate X0's T1 coefficient from -2x1 to -x1
        let mut fields = FieldName::ALL.map(vector_field);
        fields[0].coeffs[4] = Polynomial7::var(1).scale(Rational64::from_integer(-1));
        let report = check_commutation_table_of(&fields);
        assert!(!report.all_pass());
        let first = report.relations.iter().find(|r| r.name.contains("[X0,X1]")).unwrap();
        assert!(!first.pass);
    }

    #[test]
    fn jacobi_identity_exact() {
        let a = commutator(&x(0), &commutator(&x(1), &x(2)));
        let b = commutator(&x(1), &commutator(&x(2), &x(0)));
        let c = commutator(&x(2), &commutator(&x(0), &x(1)));
        assert!(a.add(&b).add(&c).is_zero());
    }

    #[test]
    fn step_two_stratification() {
        for i in 0..4 {
            for j in 0..4 {
                let bracket = commutator(&x(i), &x(j));
                // lies in span{T1,T2,T3} with constant coefficients
                for c in 0..4 {
                    assert!(bracket.coeffs[c].is_zero());
                }
                for c in 4..DIM {
                    assert!(bracket.coeffs[c].degree() == 0);
                }
                // second bracket with any horizontal field vanishes
                for k in 0..4 {
                    assert!(commutator(&bracket, &x(k)).is_zero());
                }
            }
        }
    }

    #[test]
    fn derivation_property_exact() {
        // pseudo-random degree <= 3 polynomials with rational coefficients
        let mut polys = Vec::new();
        let mut state = 1234u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) as i64 % 7 - 3
        };
        for _ in 0..6 {
            let mut p = Polynomial7::zero();
            for _ in 0..8 {
                let mut exp = [0u8; DIM];
                let mut total = 0;
                for e in exp.iter_mut() {
                    let v = (next().unsigned_abs() % 2) as u8;
                    if total + v <= 3 {
                        *e = v;
                        total += v;
                    }
                }
                p = p.add(&Polynomial7::monomial(exp, Rational64::from_integer(next())));
            }
            polys.push(p);
        }
        for op in FieldName::ALL.map(vector_field) {
            for f in &polys {
                for g in &polys {
                    let lhs = op.apply(&f.mul(g));
                    let rhs = op.apply(f).mul(g).add(&f.mul(&op.apply(g)));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn product_rule_example() {
        // apply(X0, x1*t1) = x1 * (-2 x1) = -2 x1^2
        let f = Polynomial7::var(1).mul(&Polynomial7::var(4));
        let expect = Polynomial7::var(1)
            .mul(&Polynomial7::var(1))
            .scale(Rational64::from_integer(-2));
        assert_eq!(x(0).apply(&f), expect);
    }

    #[test]
    fn sublaplacian_structure() {
        let sos = horizontal_sum_of_squares();
        // apply(Σ Xi², x0²) = 2
        let x0_sq = Polynomial7::var(0).mul(&Polynomial7::var(0));
        assert_eq!(sos.apply(&x0_sq), Polynomial7::from_int(2));
        // apply(Σ Xi², 1) = 0
        assert!(sos.apply(&Polynomial7::from_int(1)).is_zero());
        // each center diagonal carries 4|x|²
        let mut x_sq = Polynomial7::zero();
        for i in 0..4 {
            x_sq = x_sq.add(&Polynomial7::var(i).mul(&Polynomial7::var(i)));
        }
        let four_x_sq = x_sq.scale(Rational64::from_integer(4));
        for k in 4..DIM {
            assert_eq!(sos.second(k, k), &four_x_sq);
        }
        // off-diagonal center slots vanish
        assert!(sos.second(4, 5).is_zero());
        assert!(sos.second(5, 6).is_zero());
        // sub-Laplacian is -1/4 of the sum of squares
        let l = sublaplacian();
        assert_eq!(l.second(0, 0), &Polynomial7::constant(Rational64::new(-1, 4)));
        assert_eq!(l.scale(Rational64::from_integer(-4)), sos);
    }

    #[test]
    fn quoted_expansion_disagrees_in_known_slots() {
        let diff = expansion_diff();
        assert!(!diff.is_empty());
        // the center second-order block and all cross terms differ
        let slots: Vec<&str> = diff.iter().map(|d| d.slot.as_str()).collect();
        for s in ["d2/dt1^2", "d2/dt2^2", "d2/dt3^2", "d2/dx0dt1"] {
            assert!(slots.contains(&s), "missing slot {s} in {slots:?}");
        }
        // but the horizontal Laplacian block agrees
        assert!(!slots.contains(&"d2/dx0^2"));
    }

    #[test]
    fn second_order_apply_linear() {
        let l = sublaplacian();
        let f = Polynomial7::var(0).mul(&Polynomial7::var(4));
        let g = Polynomial7::var(2).mul(&Polynomial7::var(2));
        let lhs = l.apply(&f.add(&g));
        let rhs = l.apply(&f).add(&l.apply(&g));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn polynomial_display_canonical() {
        let p = Polynomial7::var(1)
            .scale(Rational64::from_integer(-2))
            .add(&Polynomial7::from_int(3));
        assert_eq!(p.to_string(), "3 - 2*x1");
    }
}
