//! Multivariate polynomials with arbitrary-precision integer coefficients
//! over the fixed set of loop-weight and series variables.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;

pub const NVARS: usize = 10;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Var {
    N,
    NL,
    NR,
    NB,
    Ell,
    EllL,
    EllR,
    EllB,
    Z,
    ZTilde,
}

impl Var {
    pub const ALL: [Var; NVARS] = [
        Var::N,
        Var::NL,
        Var::NR,
        Var::NB,
        Var::Ell,
        Var::EllL,
        Var::EllR,
        Var::EllB,
        Var::Z,
        Var::ZTilde,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::N => "n",
            Var::NL => "n_l",
            Var::NR => "n_r",
            Var::NB => "n_b",
            Var::Ell => "ell",
            Var::EllL => "ell_l",
            Var::EllR => "ell_r",
            Var::EllB => "ell_b",
            Var::Z => "z",
            Var::ZTilde => "ztilde",
        }
    }

    pub fn from_name(s: &str) -> Option<Var> {
        Var::ALL.iter().copied().find(|v| v.name() == s)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exponent vector, one slot per [`Var`]. Ordered graded-lexicographically.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(pub [u16; NVARS]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; NVARS])
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; NVARS];
        e[v.index()] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn exp(&self, v: Var) -> u16 {
        self.0[v.index()]
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a += *b;
        }
        Monomial(e)
    }

    /// `self / other` when every exponent of `other` is at most that of `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            if *a < *b {
                return None;
            }
            *a -= *b;
        }
        Some(Monomial(e))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in Var::ALL {
            let e = self.exp(v);
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{}", v)?;
            } else {
                write!(f, "{}^{}", v, e)?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Polynomial in canonical form: no zero coefficients, terms keyed by
/// graded-lex monomial order, so `==` is structural equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(1)
    }

    pub fn constant<T: Into<BigInt>>(c: T) -> Self {
        Poly::term(c, Monomial::one())
    }

    pub fn var(v: Var) -> Self {
        Poly::term(1, Monomial::var(v))
    }

    pub fn term<T: Into<BigInt>>(c: T, m: Monomial) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    /// `c * v1^e1 * v2^e2 * ...`
    pub fn monomial<T: Into<BigInt>>(c: T, powers: &[(Var, u16)]) -> Self {
        let mut m = Monomial::one();
        for &(v, e) in powers {
            m.0[v.index()] += e;
        }
        Poly::term(c, m)
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigInt)>>(it: I) -> Self {
        let mut acc: HashMap<Monomial, BigInt> = HashMap::new();
        for (m, c) in it {
            *acc.entry(m).or_insert_with(BigInt::zero) += c;
        }
        Poly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn degree_in(&self, v: Var) -> Option<u16> {
        self.terms.keys().map(|m| m.exp(v)).max()
    }

    /// Variables that occur with a nonzero exponent.
    pub fn vars(&self) -> Vec<Var> {
        Var::ALL
            .into_iter()
            .filter(|v| self.terms.keys().any(|m| m.exp(*v) > 0))
            .collect()
    }

    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    fn add_scaled_term(&mut self, other: &Poly, m: &Monomial, c: &BigInt) {
        for (k, a) in &other.terms {
            let key = k.mul(m);
            let v = a * c;
            match self.terms.get_mut(&key) {
                Some(x) => {
                    *x += v;
                    if x.is_zero() {
                        self.terms.remove(&key);
                    }
                }
                None => {
                    self.terms.insert(key, v);
                }
            }
        }
    }

    /// Exact quotient `self / d`, or `Err(NotDivisible)` if `d` does not
    /// divide `self` in the integer polynomial ring.
    pub fn exact_div(&self, d: &Poly) -> Result<Poly, Error> {
        let (lm, lc) = match d.leading() {
            Some((m, c)) => (*m, c.clone()),
            None => return Err(Error::DivisionByZero),
        };
        if let Some(c) = d.as_constant() {
            let mut terms = BTreeMap::new();
            for (m, a) in &self.terms {
                let (q, r) = a.div_rem(&c);
                if !r.is_zero() {
                    return Err(Error::NotDivisible);
                }
                terms.insert(*m, q);
            }
            return Ok(Poly { terms });
        }
        let mut r = self.clone();
        let mut q: Vec<(Monomial, BigInt)> = Vec::new();
        while let Some((rm, rc)) = r.leading() {
            let tm = rm.checked_div(&lm).ok_or(Error::NotDivisible)?;
            let (tc, rem) = rc.div_rem(&lc);
            if !rem.is_zero() {
                return Err(Error::NotDivisible);
            }
            r.add_scaled_term(d, &tm, &-&tc);
            q.push((tm, tc));
        }
        Ok(Poly {
            terms: q.into_iter().collect(),
        })
    }

    pub fn eval_int(&self, assignment: &HashMap<Var, BigInt>) -> Result<BigInt, Error> {
        for v in self.vars() {
            if !assignment.contains_key(&v) {
                return Err(Error::MissingVariable(v.name().to_string()));
            }
        }
        let mut total = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for v in Var::ALL {
                let e = m.exp(v);
                if e > 0 {
                    t *= num_traits::pow(assignment[&v].clone(), e as usize);
                }
            }
            total += t;
        }
        Ok(total)
    }

    pub fn eval_f64(&self, assignment: &HashMap<Var, f64>) -> Result<f64, Error> {
        for v in self.vars() {
            if !assignment.contains_key(&v) {
                return Err(Error::MissingVariable(v.name().to_string()));
            }
        }
        let mut total = 0.0;
        for (m, c) in &self.terms {
            let mut t = c.to_f64().unwrap_or(f64::NAN);
            for v in Var::ALL {
                let e = m.exp(v);
                if e > 0 {
                    t *= assignment[&v].powi(e as i32);
                }
            }
            total += t;
        }
        Ok(total)
    }

    /// Replace every occurrence of `v` by `p`.
    pub fn substitute(&self, v: Var, p: &Poly) -> Poly {
        let maxe = self.degree_in(v).unwrap_or(0) as usize;
        let mut powers = vec![Poly::one()];
        for i in 1..=maxe {
            powers.push(&powers[i - 1] * p);
        }
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v) as usize;
            let mut rest = *m;
            rest.0[v.index()] = 0;
            out.add_scaled_term(&powers[e], &rest, c);
        }
        out
    }

    /// Rename variables according to `map`; the images must not collide with
    /// unmapped variables already present unless that is intended.
    pub fn rename(&self, map: &[(Var, Var)]) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| {
            let mut e = m.0;
            for &(from, _) in map {
                e[from.index()] = 0;
            }
            for &(from, to) in map {
                e[to.index()] += m.exp(from);
            }
            (Monomial(e), c.clone())
        }))
    }

    /// Parse the canonical text form, e.g. `n^3 - 2*n` or `-ell_l*ell_r + 1`.
    pub fn parse(s: &str) -> Result<Poly, Error> {
        let bad = || Error::Parse(s.to_string());
        let mut terms: Vec<(Monomial, BigInt)> = Vec::new();
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        let mut chunks: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        for (i, ch) in compact.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
                chunks.push((neg, std::mem::take(&mut cur)));
                neg = ch == '-';
            } else if (ch == '+' || ch == '-') && i == 0 {
                neg = ch == '-';
            } else {
                cur.push(ch);
            }
        }
        chunks.push((neg, cur));
        for (neg, chunk) in chunks {
            if chunk.is_empty() {
                return Err(bad());
            }
            let mut c = BigInt::one();
            let mut m = Monomial::one();
            for factor in chunk.split('*') {
                let (base, exp) = match factor.split_once('^') {
                    Some((b, e)) => (b, e.parse::<u16>().map_err(|_| bad())?),
                    None => (factor, 1),
                };
                if let Some(v) = Var::from_name(base) {
                    m.0[v.index()] += exp;
                } else {
                    let k: BigInt = base.parse().map_err(|_| bad())?;
                    c *= num_traits::pow(k, exp as usize);
                }
            }
            terms.push((m, if neg { -c } else { c }));
        }
        Ok(Poly::from_terms(terms))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.degree() == 0 {
                write!(f, "{}", a)?;
            } else if a.is_one() {
                write!(f, "{}", m)?;
            } else {
                write!(f, "{}*{}", a, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

impl Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl From<Var> for Poly {
    fn from(v: Var) -> Self {
        Poly::var(v)
    }
}

impl From<i64> for Poly {
    fn from(c: i64) -> Self {
        Poly::constant(c)
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        self.add_scaled_term(rhs, &Monomial::one(), &BigInt::one());
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        self.add_scaled_term(rhs, &Monomial::one(), &-BigInt::one());
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut acc: HashMap<Monomial, BigInt> =
            HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let prod = ca * cb;
                match acc.get_mut(&ma.mul(mb)) {
                    Some(x) => *x += prod,
                    None => {
                        acc.insert(ma.mul(mb), prod);
                    }
                }
            }
        }
        Poly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: &Poly) -> Poly {
                (&self).$f(rhs)
            }
        }
        impl $tr<Poly> for &Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                self.$f(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl std::iter::Sum for Poly {
    fn sum<I: Iterator<Item = Poly>>(iter: I) -> Poly {
        let mut acc = Poly::zero();
        for p in iter {
            acc += &p;
        }
        acc
    }
}

impl std::iter::Product for Poly {
    fn product<I: Iterator<Item = Poly>>(iter: I) -> Poly {
        let mut acc = Poly::one();
        for p in iter {
            acc = &acc * &p;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Poly {
        Poly::parse(s).unwrap()
    }

    #[test]
    fn monomial_products() {
        assert_eq!(p("ell") * p("ell"), p("ell^2"));
        assert_eq!(p("ell^2 - 1") + p("1"), p("ell^2"));
    }

    #[test]
    fn expansion_has_six_terms() {
        let prod = p("ell - ell_l") * p("n_l*n^2 - n_l - n");
        assert_eq!(prod.num_terms(), 6);
        assert_eq!(
            prod,
            p("ell*n_l*n^2 - ell*n_l - ell*n - ell_l*n_l*n^2 + ell_l*n_l + ell_l*n")
        );
    }

    #[test]
    fn exact_division() {
        assert_eq!(p("n^3 - 2*n").exact_div(&p("n")).unwrap(), p("n^2 - 2"));
        assert!(matches!(
            p("ell^4 - 3*ell^2 + 1").exact_div(&p("ell^2 - 1")),
            Err(Error::NotDivisible)
        ));
        let det = p("n - n_l") * p("n_l*n^2 - n_l - n");
        assert_eq!(det.exact_div(&p("n - n_l")).unwrap(), p("n_l*n^2 - n_l - n"));
        assert!(matches!(p("n").exact_div(&Poly::zero()), Err(Error::DivisionByZero)));
        assert!(matches!(p("3*n").exact_div(&p("2")), Err(Error::NotDivisible)));
    }

    #[test]
    fn evaluation() {
        let at = |v: Var, x: i64| HashMap::from([(v, BigInt::from(x))]);
        assert_eq!(p("ell^2 - 1").eval_int(&at(Var::Ell, 3)).unwrap(), BigInt::from(8));
        assert_eq!(p("n^3 - 2*n").eval_int(&at(Var::N, 2)).unwrap(), BigInt::from(4));
        assert_eq!(
            p("ell^4 - 3*ell^2 + 1").eval_int(&at(Var::Ell, 2)).unwrap(),
            BigInt::from(5)
        );
        match p("n*ell").eval_int(&at(Var::N, 2)) {
            Err(Error::MissingVariable(name)) => assert_eq!(name, "ell"),
            other => panic!("unexpected {:?}", other),
        }
    }

    #[test]
    fn canonical_text() {
        assert_eq!(p("ell_r*ell_l").to_string(), "ell_l*ell_r");
        assert_eq!(p("-2*n + n^3").to_string(), "n^3 - 2*n");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!(p("-1 + ell*ell_l").to_string(), "ell*ell_l - 1");
        assert_eq!(p("n^2*n_l").to_string(), "n^2*n_l");
        for s in ["n^3 - 2*n", "ell_l*ell_r - 1", "-ell^2*ell_l + 3*ell - 7", "0"] {
            assert_eq!(p(s).to_string(), s);
        }
    }

    #[test]
    fn substitution_and_renaming() {
        let d = p("ell*ell_l - 1");
        assert_eq!(d.substitute(Var::EllL, &p("ell")), p("ell^2 - 1"));
        assert_eq!(d.rename(&[(Var::Ell, Var::N), (Var::EllL, Var::NL)]), p("n*n_l - 1"));
        let swapped = p("ell_l^2*ell_r").rename(&[(Var::EllL, Var::EllR), (Var::EllR, Var::EllL)]);
        assert_eq!(swapped, p("ell_l*ell_r^2"));
    }

    #[test]
    fn power() {
        assert_eq!(p("n + 1").pow(3), p("n^3 + 3*n^2 + 3*n + 1"));
        assert_eq!(p("n").pow(0), Poly::one());
    }

    const PVARS: [Var; 4] = [Var::N, Var::NL, Var::Ell, Var::EllR];

    fn arb_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec(
            (-20i64..=20, prop::collection::vec(0u16..=2, PVARS.len())),
            0..5,
        )
        .prop_map(|ts| {
            Poly::from_terms(ts.into_iter().filter_map(|(c, es)| {
                // keep total degree at most 6
                if es.iter().sum::<u16>() > 6 {
                    return None;
                }
                let mut m = Monomial::one();
                for (v, e) in PVARS.iter().zip(es) {
                    m.0[v.index()] = e;
                }
                Some((m, BigInt::from(c)))
            }))
        })
    }

    fn arb_point() -> impl Strategy<Value = HashMap<Var, BigInt>> {
        prop::collection::vec(-9i64..=9, PVARS.len())
            .prop_map(|xs| PVARS.iter().copied().zip(xs.into_iter().map(BigInt::from)).collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
        }

        #[test]
        fn division_inverts_multiplication(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b).exact_div(&b).unwrap(), a);
        }

        #[test]
        fn evaluation_is_a_homomorphism(a in arb_poly(), b in arb_poly(), x in arb_point()) {
            let ea = a.eval_int(&x).unwrap();
            let eb = b.eval_int(&x).unwrap();
            prop_assert_eq!((&a * &b).eval_int(&x).unwrap(), &ea * &eb);
            prop_assert_eq!((&a + &b).eval_int(&x).unwrap(), ea + eb);
        }

        #[test]
        fn text_roundtrip(a in arb_poly()) {
            prop_assert_eq!(Poly::parse(&a.to_string()).unwrap(), a);
        }
    }
}
