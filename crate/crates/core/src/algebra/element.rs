use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

use serde::Serialize;

use super::laurent::LaurentPoly;
use crate::canon::CanonicalWeb;
use crate::error::Error;

/// What a [`Combination`] may use as coefficients.
pub trait Coefficient: Clone + PartialEq + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_to(&mut self, other: &Self);
    fn times(&self, other: &Self) -> Self;
}

impl Coefficient for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::zero()
    }
    fn one() -> Self {
        LaurentPoly::one()
    }
    fn is_zero(&self) -> bool {
        LaurentPoly::is_zero(self)
    }
    fn add_to(&mut self, other: &Self) {
        *self += other;
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
}

impl Coefficient for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add_to(&mut self, other: &Self) {
        *self += *other;
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
}

/// Commutative product of irreducible connected webs. The empty product is
/// the scalar monomial.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Monomial {
    factors: Vec<CanonicalWeb>,
}

impl Monomial {
    pub fn scalar() -> Self {
        Self::default()
    }

    pub fn from_factors<I: IntoIterator<Item = CanonicalWeb>>(factors: I) -> Self {
        let mut factors: Vec<_> = factors.into_iter().collect();
        factors.sort();
        Self { factors }
    }

    pub fn is_scalar(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[CanonicalWeb] {
        &self.factors
    }

    pub fn vertex_count(&self) -> usize {
        self.factors.iter().map(CanonicalWeb::vertex_count).sum()
    }

    /// Multiset union.
    pub fn times(&self, other: &Monomial) -> Monomial {
        Monomial::from_factors(self.factors.iter().chain(&other.factors).cloned())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.vertex_count()
            .cmp(&other.vertex_count())
            .then_with(|| self.factors.cmp(&other.factors))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, w) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "[{w}]")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Finite linear combination of monomials with coefficients in `C`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Combination<C> {
    terms: BTreeMap<Monomial, C>,
}

/// An element of the bracket's target module.
pub type ModuleElement = Combination<LaurentPoly>;
/// A specialization of a [`ModuleElement`] at `A = ±1`.
pub type IntModuleElement = Combination<i64>;

impl<C: Coefficient> Default for Combination<C> {
    fn default() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }
}

impl<C: Coefficient> Combination<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(c: C) -> Self {
        Self::term(c, Monomial::scalar())
    }

    pub fn term(c: C, m: Monomial) -> Self {
        let mut out = Self::zero();
        out.add_term(c, m);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, c: C, m: Monomial) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                slot.add_to(&c);
                if slot.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.add_term(c.clone(), m.clone());
        }
    }

    /// Adds `c * other`.
    pub fn add_scaled(&mut self, c: &C, other: &Self) {
        for (m, d) in &other.terms {
            self.add_term(c.times(d), m.clone());
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero();
        out.add_scaled(c, self);
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(c1.times(c2), m1.times(m2));
            }
        }
        out
    }

    /// True iff only the scalar monomial carries a nonzero coefficient.
    pub fn is_scalar(&self) -> bool {
        self.terms.keys().all(Monomial::is_scalar)
    }

    pub fn scalar_part(&self) -> C {
        self.terms
            .get(&Monomial::scalar())
            .cloned()
            .unwrap_or_else(C::zero)
    }

    pub fn coefficient(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    /// Terms in monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Term {
            monomial: Vec<String>,
            coefficient: String,
        }
        let terms: Vec<Term> = self
            .terms
            .iter()
            .map(|(m, c)| Term {
                monomial: m.factors().iter().map(ToString::to_string).collect(),
                coefficient: c.to_string(),
            })
            .collect();
        serde_json::to_value(terms).expect("terms serialize")
    }
}

impl ModuleElement {
    /// Evaluates every coefficient at `A = a`.
    pub fn specialize(&self, a: i64) -> Result<IntModuleElement, Error> {
        let mut out = IntModuleElement::zero();
        for (m, c) in &self.terms {
            out.add_term(c.eval_unit(a)?, m.clone());
        }
        Ok(out)
    }

    /// Applies `A -> A^-1` to every coefficient.
    pub fn mirror(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.mirror()))
                .collect(),
        }
    }

    /// Multiplies by `A^k`.
    pub fn shift(&self, k: i32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.shift(k)))
                .collect(),
        }
    }
}

impl<C: Coefficient> Add for &Combination<C> {
    type Output = Combination<C>;
    fn add(self, rhs: Self) -> Combination<C> {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl<C: Coefficient> Mul for &Combination<C> {
    type Output = Combination<C>;
    fn mul(self, rhs: Self) -> Combination<C> {
        Combination::mul(self, rhs)
    }
}

/// `0`, a bare coefficient for pure scalars, otherwise
/// `(c1)*m1 + (c2)*m2 + ...` in monomial order.
impl<C: Coefficient> fmt::Display for Combination<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        if self.is_scalar() {
            return write!(f, "{}", self.scalar_part());
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})*{m}")?;
        }
        Ok(())
    }
}

impl<C: Coefficient> fmt::Debug for Combination<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::canonical_form;
    use crate::web::Web;
    use proptest::prelude::*;

    fn theta() -> CanonicalWeb {
        canonical_form(&Web::theta()).unwrap()
    }

    fn heawood() -> CanonicalWeb {
        canonical_form(&Web::heawood()).unwrap()
    }

    fn a(e: i32) -> LaurentPoly {
        LaurentPoly::monomial(1, e)
    }

    fn gen(w: &CanonicalWeb) -> ModuleElement {
        ModuleElement::term(LaurentPoly::one(), Monomial::from_factors([w.clone()]))
    }

    #[test]
    fn add_examples() {
        let x = gen(&heawood()).scale(&a(1));
        assert_eq!(&x + &ModuleElement::zero(), x);
        let two = gen(&theta()).scale(&LaurentPoly::constant(2));
        let minus_two = gen(&theta()).scale(&LaurentPoly::constant(-2));
        assert!((&two + &minus_two).is_zero());
        let sum = &gen(&theta()).scale(&a(1)) + &gen(&heawood()).scale(&a(1));
        assert_eq!(sum.len(), 2);
    }

    #[test]
    fn mul_examples() {
        let p = &ModuleElement::scalar(a(2)) * &ModuleElement::scalar(a(-2));
        assert_eq!(p, ModuleElement::scalar(LaurentPoly::one()));
        let h = gen(&heawood());
        let sq = &h * &h;
        let m = Monomial::from_factors([heawood(), heawood()]);
        assert_eq!(sq.coefficient(&m), LaurentPoly::one());
        assert_eq!(sq.len(), 1);
        let t = gen(&theta());
        let lhs = &(&t + &h) * &h;
        let rhs = &(&t * &h) + &(&h * &h);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn specialize_examples() {
        let b = LaurentPoly::from_terms([(1, 3), (1, -3)]);
        let x = &ModuleElement::scalar(LaurentPoly::constant(3)) + &gen(&theta()).scale(&b);
        let s = x.specialize(1).unwrap();
        assert_eq!(s.scalar_part(), 3);
        assert_eq!(s.coefficient(&Monomial::from_factors([theta()])), 2);
        assert!(ModuleElement::zero().specialize(1).unwrap().is_zero());
        let y = gen(&theta()).scale(&b).specialize(-1).unwrap();
        assert_eq!(y.coefficient(&Monomial::from_factors([theta()])), -2);
        assert!(x.specialize(0).is_err());
    }

    #[test]
    fn specialization_drops_vanishing_terms() {
        let x = gen(&theta()).scale(&LaurentPoly::from_terms([(1, 1), (-1, -1)]));
        assert!(x.specialize(1).unwrap().is_zero());
    }

    #[test]
    fn is_scalar_examples() {
        assert!(ModuleElement::scalar(super::super::loop_value()).is_scalar());
        assert!(!gen(&heawood()).scale(&a(1)).is_scalar());
        assert!(ModuleElement::zero().is_scalar());
    }

    #[test]
    fn display() {
        let x = &ModuleElement::scalar(super::super::loop_value()) + &gen(&theta()).scale(&a(-1));
        assert_eq!(x.to_string(), "(A^6+1+A^-6)*1 + (A^-1)*[1;(0,1),(0,1),(0,1)]");
        assert_eq!(ModuleElement::scalar(super::super::loop_value()).to_string(), "A^6+1+A^-6");
    }

    fn arb_element() -> impl Strategy<Value = ModuleElement> {
        let mono = prop::collection::vec(0usize..3, 0..3).prop_map(|idx| {
            let pool = [theta(), heawood(), canonical_form(&Web::k33()).unwrap()];
            Monomial::from_factors(idx.into_iter().map(|i| pool[i].clone()))
        });
        let coeff = prop::collection::vec((-3i64..=3, -4i32..=4), 0..3).prop_map(LaurentPoly::from_terms);
        prop::collection::vec((coeff, mono), 0..4).prop_map(|ts| {
            let mut x = ModuleElement::zero();
            for (c, m) in ts {
                x.add_term(c, m);
            }
            x
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn module_ring_laws(x in arb_element(), y in arb_element(), z in arb_element()) {
            prop_assert_eq!(&x + &y, &y + &x);
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            let one = ModuleElement::scalar(LaurentPoly::one());
            prop_assert_eq!(&x * &one, x.clone());
        }

        #[test]
        fn specialize_is_ring_hom(x in arb_element(), y in arb_element()) {
            for a in [1, -1] {
                prop_assert_eq!((&x * &y).specialize(a).unwrap(), &x.specialize(a).unwrap() * &y.specialize(a).unwrap());
            }
        }
    }
}
