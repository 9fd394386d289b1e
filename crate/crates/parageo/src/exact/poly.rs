//! Sparse multivariate polynomials over the rationals with graded-lex
//! monomial order. The gcd is a primitive pseudo-remainder sequence, which
//! is all the canonical-form machinery needs at this scale.

use super::{ParamSet, Rational};
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Exponent vector, ordered graded-lexicographically: total degree first,
/// then lexicographic with the earliest parameter most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn unit(nvars: usize) -> Self {
        Mono(vec![0; nvars])
    }

    pub fn var(nvars: usize, idx: usize) -> Self {
        let mut e = vec![0; nvars];
        e[idx] = 1;
        Mono(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise division; `None` when `other` does not divide `self`.
    pub fn checked_div(&self, other: &Mono) -> Option<Mono> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(Mono(out))
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone)]
pub struct Poly {
    params: Arc<ParamSet>,
    /// Nonzero terms only, keyed by monomial.
    terms: BTreeMap<Mono, Rational>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}
impl Eq for Poly {}

impl Poly {
    pub fn zero(params: &Arc<ParamSet>) -> Self {
        Poly { params: params.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(params: &Arc<ParamSet>, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono::unit(params.len()), c);
        }
        Poly { params: params.clone(), terms }
    }

    pub fn one(params: &Arc<ParamSet>) -> Self {
        Self::constant(params, Rational::one())
    }

    pub fn var(params: &Arc<ParamSet>, idx: usize) -> Self {
        assert!(idx < params.len());
        let mut terms = BTreeMap::new();
        terms.insert(Mono::var(params.len(), idx), Rational::one());
        Poly { params: params.clone(), terms }
    }

    pub fn params(&self) -> &Arc<ParamSet> {
        &self.params
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_unit())
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.terms.is_empty() {
            return Some(Rational::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Leading term under graded-lex.
    pub fn leading(&self) -> Option<(&Mono, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    fn same_params(&self, other: &Poly) {
        assert!(
            Arc::ptr_eq(&self.params, &other.params) || self.params == other.params,
            "mixed parameter sets: {} vs {}",
            self.params,
            other.params
        );
    }

    fn insert_term(terms: &mut BTreeMap<Mono, Rational>, m: Mono, c: Rational) {
        if c.is_zero() {
            return;
        }
        match terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get().clone() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.same_params(other);
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            Self::insert_term(&mut terms, m.clone(), c.clone());
        }
        Poly { params: self.params.clone(), terms }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.same_params(other);
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            Self::insert_term(&mut terms, m.clone(), -c.clone());
        }
        Poly { params: self.params.clone(), terms }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            params: self.params.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.same_params(other);
        let mut terms = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                Self::insert_term(&mut terms, m1.mul(m2), c1 * c2);
            }
        }
        Poly { params: self.params.clone(), terms }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.params);
        }
        Poly {
            params: self.params.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_mono(&self, m: &Mono, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.params);
        }
        Poly {
            params: self.params.clone(),
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect(),
        }
    }

    /// Exact division; panics if `divisor` does not divide `self` exactly.
    /// Only used internally on gcd cofactors, where exactness is guaranteed.
    pub fn exact_div(&self, divisor: &Poly) -> Poly {
        self.try_exact_div(divisor)
            .expect("exact_div: divisor does not divide dividend")
    }

    pub fn try_exact_div(&self, divisor: &Poly) -> Option<Poly> {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Poly::zero(&self.params));
        }
        if let Some(c) = divisor.as_constant() {
            return Some(self.scale(&(Rational::one() / c)));
        }
        let (dm, dc) = divisor.leading().unwrap();
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut rem = self.clone();
        let mut quo = BTreeMap::new();
        while !rem.is_zero() {
            let (lm, lc) = rem.leading().unwrap();
            let qm = lm.checked_div(&dm)?;
            let qc = lc / &dc;
            Self::insert_term(&mut quo, qm.clone(), qc.clone());
            rem = rem.sub(&divisor.mul_mono(&qm, &qc));
        }
        Some(Poly { params: self.params.clone(), terms: quo })
    }

    /// Normalize to leading coefficient 1.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(&(Rational::one() / c)),
        }
    }

    /// Highest variable index that actually occurs, if any.
    fn main_var(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 && best.map_or(true, |b| i > b) {
                    best = Some(i);
                }
            }
        }
        best
    }

    /// Coefficients as a univariate polynomial in `var` (index = power of `var`).
    fn coeffs_in(&self, var: usize) -> Vec<Poly> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![Poly::zero(&self.params); deg + 1];
        for (m, c) in &self.terms {
            let p = m.0[var] as usize;
            let mut m2 = m.clone();
            m2.0[var] = 0;
            Self::insert_term(&mut out[p].terms, m2, c.clone());
        }
        out
    }

    /// Content with respect to `var`: gcd of the univariate coefficients.
    fn content_in(&self, var: usize) -> Poly {
        let mut acc = Poly::zero(&self.params);
        for c in self.coeffs_in(var) {
            if !c.is_zero() {
                acc = Poly::gcd(&acc, &c);
                if c.is_constant() || acc.as_constant().map_or(false, |v| v.is_one()) {
                    return Poly::one(&self.params);
                }
            }
        }
        acc
    }

    /// Pseudo-remainder of `self` by `g` in variable `var`.
    fn prem(&self, g: &Poly, var: usize) -> Poly {
        let dg = g.degree_in(var);
        let glead = {
            let coeffs = g.coeffs_in(var);
            coeffs[dg as usize].clone()
        };
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(var) >= dg {
            let dr = r.degree_in(var);
            let rlead = r.coeffs_in(var)[dr as usize].clone();
            let mut shift = Mono::unit(self.params.len());
            shift.0[var] = dr - dg;
            // r := glead*r - rlead*x^(dr-dg)*g
            let t = rlead.mul(&g).mul(&Poly {
                params: self.params.clone(),
                terms: {
                    let mut t = BTreeMap::new();
                    t.insert(shift, Rational::one());
                    t
                },
            });
            r = glead.mul(&r).sub(&t);
        }
        r
    }

    /// Gcd normalized to monic leading coefficient. Unique up to this
    /// normalization; gcd(0, 0) = 0.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return a.monic();
        }
        if a.is_constant() || b.is_constant() {
            return Poly::one(a.params());
        }
        let va = a.main_var().unwrap();
        let vb = b.main_var().unwrap();
        if va != vb {
            // One polynomial does not involve the other's main variable;
            // any common divisor lives in the smaller variable range.
            let (hi, lo, var) = if va > vb { (a, b, va) } else { (b, a, vb) };
            let cont = hi.content_in(var);
            return Poly::gcd(&cont, lo);
        }
        let var = va;
        let ca = a.content_in(var);
        let cb = b.content_in(var);
        let c = Poly::gcd(&ca, &cb);
        let mut f = a.exact_div(&ca);
        let mut g = b.exact_div(&cb);
        if f.degree_in(var) < g.degree_in(var) {
            std::mem::swap(&mut f, &mut g);
        }
        loop {
            let r = f.prem(&g, var);
            if r.is_zero() {
                break;
            }
            if r.degree_in(var) == 0 {
                // common divisor is free of var: only the content survives
                return c.monic();
            }
            let rc = r.content_in(var);
            let r = r.exact_div(&rc);
            f = g;
            g = r;
        }
        c.mul(&g).monic()
    }

    /// Substitute bound parameters by rationals; unbound parameters stay.
    pub fn substitute_indexed(&self, values: &[Option<Rational>]) -> Poly {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut m2 = m.clone();
            for (i, v) in values.iter().enumerate() {
                if let Some(v) = v {
                    for _ in 0..m.0[i] {
                        coeff *= v;
                    }
                    m2.0[i] = 0;
                }
            }
            Self::insert_term(&mut terms, m2, coeff);
        }
        Poly { params: self.params.clone(), terms }
    }

    /// Formal partial derivative with respect to parameter `var`.
    pub fn derivative(&self, var: usize) -> Poly {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if m.0[var] > 0 {
                let mut m2 = m.clone();
                m2.0[var] -= 1;
                let f = Rational::from_integer(m.0[var].into());
                Self::insert_term(&mut terms, m2, c * f);
            }
        }
        Poly { params: self.params.clone(), terms }
    }

    /// Remainder of division by a single polynomial under graded-lex;
    /// the normal form modulo the principal ideal (q).
    pub fn reduce_mod(&self, q: &Poly) -> Poly {
        let (qm, qc) = match q.leading() {
            Some(l) => l,
            None => return self.clone(),
        };
        let (qm, qc) = (qm.clone(), qc.clone());
        let mut rem = Poly::zero(&self.params);
        let mut work = self.clone();
        while let Some((lm, lc)) = work.leading().map(|(m, c)| (m.clone(), c.clone())) {
            match lm.checked_div(&qm) {
                Some(f) => {
                    let coeff = &lc / &qc;
                    work = work.sub(&q.mul_mono(&f, &coeff));
                }
                None => {
                    // move the leading term to the remainder
                    let mut t = BTreeMap::new();
                    t.insert(lm.clone(), lc.clone());
                    let term = Poly { params: self.params.clone(), terms: t };
                    rem = rem.add(&term);
                    work = work.sub(&term);
                }
            }
        }
        rem
    }

    /// Exact square root, if `self` is a perfect square.
    pub fn sqrt_exact(&self) -> Option<Poly> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let (lm, lc) = self.leading().unwrap();
        if lm.0.iter().any(|e| e % 2 != 0) || lc.is_negative() {
            return None;
        }
        let rl = rational_sqrt(lc)?;
        let root_m = Mono(lm.0.iter().map(|e| e / 2).collect());
        let mut q = Poly {
            params: self.params.clone(),
            terms: {
                let mut t = BTreeMap::new();
                t.insert(root_m, rl);
                t
            },
        };
        let max_iter = 4 * (self.num_terms() + 2) * (self.num_terms() + 2);
        for _ in 0..max_iter {
            let r = self.sub(&q.mul(&q));
            if r.is_zero() {
                return Some(q);
            }
            let (rm, rc) = r.leading().unwrap();
            let (qm, qc) = q.leading().unwrap();
            let tm = rm.checked_div(qm)?;
            let tc = rc / (qc * Rational::from_integer(2.into()));
            let t = Poly {
                params: self.params.clone(),
                terms: {
                    let mut m = BTreeMap::new();
                    m.insert(tm, tc);
                    m
                },
            };
            let q2 = q.add(&t);
            if q2 == q {
                return None;
            }
            q = q2;
        }
        None
    }
}

fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = self.params.names();
        let mut first = true;
        // descending graded-lex: largest term first
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || m.is_unit() {
                factors.push(mag.to_string());
            }
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    factors.push(names[i].clone());
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}
