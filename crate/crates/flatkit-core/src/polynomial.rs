//! Sparse multivariate polynomials over `Q`.
//!
//! Terms are kept in a `Vec` sorted ascending by the structural monomial
//! order, with no zero coefficients and no duplicate monomials. Two
//! polynomials over the same universe are equal as ring elements iff they are
//! structurally equal, which is what makes deduplication, ordered sets and
//! byte-identical rendering work.

use crate::monomial::Monomial;
use crate::variable::{VarId, VarSet};
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Coef = BigRational;

pub fn coef(n: i64, d: i64) -> Coef {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn coef_int(n: i64) -> Coef {
    BigRational::from(BigInt::from(n))
}

/// A polynomial with rational coefficients, canonical by construction.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Polynomial {
    terms: Vec<(Monomial, Coef)>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }

    pub fn constant(c: Coef, nvars: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial {
            terms: alloc::vec![(Monomial::one(nvars), c)],
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(Coef::one(), nvars)
    }

    pub fn variable(id: VarId, nvars: usize) -> Self {
        Polynomial {
            terms: alloc::vec![(Monomial::var(id, nvars), Coef::one())],
        }
    }

    pub fn monomial(m: Monomial, c: Coef) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial {
            terms: alloc::vec![(m, c)],
        }
    }

    /// Builds a polynomial from arbitrary terms: merges duplicates, drops
    /// zeros, sorts into canonical form.
    pub fn from_terms(terms: Vec<(Monomial, Coef)>) -> Self {
        let mut map: BTreeMap<Monomial, Coef> = BTreeMap::new();
        for (m, c) in terms {
            if c.is_zero() {
                continue;
            }
            let entry = map.entry(m).or_insert_with(Coef::zero);
            *entry += c;
        }
        map.retain(|_, c| !c.is_zero());
        Polynomial {
            terms: map.into_iter().collect(),
        }
    }

    pub fn terms(&self) -> &[(Monomial, Coef)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.total_degree()).max()
    }

    pub fn uses_var(&self, id: VarId) -> bool {
        self.terms.iter().any(|(m, _)| m.uses(id))
    }

    pub fn supported_within(&self, keep: impl Fn(VarId) -> bool + Copy) -> bool {
        self.terms.iter().all(|(m, _)| m.supported_within(keep))
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out: Vec<(Monomial, Coef)> =
            Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut i = 0;
        let mut j = 0;
        while i < self.terms.len() && j < other.terms.len() {
            match self.terms[i].0.cmp(&other.terms[j].0) {
                Ordering::Less => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &self.terms[i].1 + &other.terms[j].1;
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Polynomial { terms: out }
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    /// Multiplies by a single term. Preserves canonical ordering because
    /// multiplication by a fixed monomial is monotone for the structural order.
    pub fn mul_term(&self, m: &Monomial, c: &Coef) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(tm, tc)| (tm.mul(m), tc * c))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Coef) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, tc)| (m.clone(), tc * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut acc = Polynomial::zero();
        for (m, c) in &other.terms {
            acc = acc.add(&self.mul_term(m, c));
        }
        acc
    }

    pub fn pow(&self, e: u32, nvars: usize) -> Polynomial {
        let mut acc = Polynomial::one(nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Leading term in display order: highest total degree, ties broken by the
    /// structural order.
    pub fn display_lead(&self) -> Option<&(Monomial, Coef)> {
        self.terms.iter().max_by(|(a, _), (b, _)| display_cmp(a, b))
    }

    /// Divides by the display-leading rational coefficient, so the result has
    /// leading coefficient 1. Zero stays zero.
    pub fn monic_by_display_lead(&self) -> Polynomial {
        match self.display_lead() {
            None => Polynomial::zero(),
            Some((_, c)) => {
                let inv = Coef::one() / c.clone();
                self.scale(&inv)
            }
        }
    }

    /// Substitutes rational values for a subset of the variables; the result
    /// stays in the same universe with those exponents zeroed.
    pub fn evaluate(&self, assignment: &BTreeMap<VarId, Coef>) -> Polynomial {
        let mut out: Vec<(Monomial, Coef)> = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut c = c.clone();
            for (id, val) in assignment {
                let e = m.exp(*id);
                if e > 0 {
                    c *= pow_coef(val, e);
                }
            }
            out.push((m.restricted(|v| !assignment.contains_key(&v)), c));
        }
        Polynomial::from_terms(out)
    }

    /// Full evaluation at a point covering every variable of the universe.
    pub fn evaluate_full(&self, point: &[Coef]) -> Coef {
        let mut acc = Coef::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (id, e) in m.support() {
                t *= pow_coef(&point[id.0], e);
            }
            acc += t;
        }
        acc
    }

    /// Renames variables into a universe with `nvars_out` slots.
    pub fn map_vars(&self, nvars_out: usize, f: impl Fn(VarId) -> VarId + Copy) -> Polynomial {
        Polynomial::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| (m.map_vars(nvars_out, f), c.clone()))
                .collect(),
        )
    }

    /// Substitutes a polynomial image for every variable; `images[i]` replaces
    /// the variable with index `i`. All images live in a universe with
    /// `nvars_out` variables.
    pub fn substitute(&self, images: &[Polynomial], nvars_out: usize) -> Polynomial {
        let mut acc = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(c.clone(), nvars_out);
            for (id, e) in m.support() {
                t = t.mul(&images[id.0].pow(e, nvars_out));
            }
            acc = acc.add(&t);
        }
        acc
    }

    pub fn display<'a>(&'a self, vars: &'a VarSet) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, vars }
    }

    pub fn to_display_string(&self, vars: &VarSet) -> String {
        use alloc::string::ToString;
        self.display(vars).to_string()
    }
}

fn pow_coef(c: &Coef, e: u32) -> Coef {
    let mut acc = Coef::one();
    for _ in 0..e {
        acc *= c;
    }
    acc
}

/// Display order on monomials: total degree first, then the structural order.
/// Rendering lists terms descending under this order.
pub fn display_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    a.total_degree()
        .cmp(&b.total_degree())
        .then_with(|| a.cmp(b))
}

pub struct PolyDisplay<'a> {
    poly: &'a Polynomial,
    vars: &'a VarSet,
}

fn fmt_coef_abs(f: &mut fmt::Formatter<'_>, c: &Coef) -> fmt::Result {
    let a = c.abs();
    if a.is_integer() {
        write!(f, "{}", a.numer())
    } else {
        write!(f, "{}/{}", a.numer(), a.denom())
    }
}

fn fmt_mono(f: &mut fmt::Formatter<'_>, m: &Monomial, vars: &VarSet) -> fmt::Result {
    let mut first = true;
    for (id, e) in m.support() {
        if !first {
            write!(f, "*")?;
        }
        first = false;
        write!(f, "{}", vars.name(id))?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<&(Monomial, Coef)> = self.poly.terms.iter().collect();
        terms.sort_by(|(ma, _), (mb, _)| display_cmp(mb, ma));
        for (i, (m, c)) in terms.iter().enumerate() {
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                fmt_coef_abs(f, c)?;
            } else {
                if !c.abs().is_one() {
                    fmt_coef_abs(f, c)?;
                    write!(f, "*")?;
                }
                fmt_mono(f, m, self.vars)?;
            }
        }
        Ok(())
    }
}

impl core::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::add(self, rhs)
    }
}

impl core::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::sub(self, rhs)
    }
}

impl core::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::mul(self, rhs)
    }
}

impl core::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::variable::{Block, Variable};
    use alloc::vec;

    fn vars() -> VarSet {
        VarSet::new(vec![
            Variable::new("y1", Block::Base),
            Variable::new("y2", Block::Base),
            Variable::new("x", Block::Fiber(1)),
        ])
        .unwrap()
    }

    fn v(i: usize) -> Polynomial {
        Polynomial::variable(VarId(i), 3)
    }

    #[test]
    fn ring_identities() {
        let y1 = v(0);
        let y2 = v(1);
        let x = v(2);
        let p = &(&x * &x) - &y1;
        let q = &x + &y2;
        assert_eq!(&p * &q, &q * &p);
        assert_eq!(&p - &p, Polynomial::zero());
        let lhs = (&p + &q).pow(2, 3);
        let rhs = &(&(&p * &p) + &(&(&p * &q) + &(&p * &q))) + &(&q * &q);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn canonical_merge() {
        let m = Monomial::from_exps(vec![1, 0, 0]);
        let p = Polynomial::from_terms(vec![
            (m.clone(), coef_int(2)),
            (m.clone(), coef_int(-2)),
            (Monomial::one(3), coef(1, 2)),
        ]);
        assert_eq!(p.terms().len(), 1);
        assert!(p.is_constant());
    }

    #[test]
    fn display_formatting() {
        let vs = vars();
        let y1 = v(0);
        let y2 = v(1);
        let x = v(2);
        let p = &(&(&x * &x) * &y1) - &y2;
        assert_eq!(p.to_display_string(&vs), "y1*x^2 - y2");
        let q = &y1.scale(&coef(-1, 2)) + &Polynomial::one(3);
        assert_eq!(q.to_display_string(&vs), "-1/2*y1 + 1");
        assert_eq!(Polynomial::zero().to_display_string(&vs), "0");
        let r = &(&x * &y1).scale(&coef_int(3)) + &y1;
        assert_eq!(r.to_display_string(&vs), "3*y1*x + y1");
    }

    #[test]
    fn display_lead_and_monic() {
        let y1 = v(0);
        let x = v(2);
        let p = &(&x * &y1).scale(&coef_int(-2)) + &y1;
        let (m, c) = p.display_lead().unwrap();
        assert_eq!(m, &Monomial::from_exps(vec![1, 0, 1]));
        assert_eq!(c, &coef_int(-2));
        let mp = p.monic_by_display_lead();
        assert_eq!(mp.display_lead().unwrap().1, coef_int(1));
    }

    #[test]
    fn evaluation() {
        let y1 = v(0);
        let y2 = v(1);
        let x = v(2);
        let p = &(&(&x * &x) * &y1) - &y2;
        let mut a = BTreeMap::new();
        a.insert(VarId(0), coef_int(1));
        a.insert(VarId(1), coef_int(4));
        let e = p.evaluate(&a);
        assert_eq!(e, &(&x * &x) - &Polynomial::constant(coef_int(4), 3));
        let full = p.evaluate_full(&[coef_int(1), coef_int(4), coef_int(2)]);
        assert_eq!(full, coef_int(0));
        let _ = (y1, y2);
    }

    #[test]
    fn substitution_composes() {
        let x = v(2);
        let y1 = v(0);
        let p = &(&x * &x) - &y1;
        // x -> y1 + 1, y1 -> y1, y2 -> y2
        let images = vec![v(0), v(1), &y1 + &Polynomial::one(3)];
        let s = p.substitute(&images, 3);
        let expected = &(&(&y1 * &y1) + &y1.scale(&coef_int(2))).add(&Polynomial::one(3)) - &y1;
        assert_eq!(s, expected);
    }

    #[test]
    fn renaming_preserves_structure() {
        let p = &(&v(0) * &v(2)) - &v(1);
        let moved = p.map_vars(4, |id| VarId(id.0 + 1));
        let back = moved.map_vars(3, |id| VarId(id.0 - 1));
        assert_eq!(&back, &p);
    }
}
