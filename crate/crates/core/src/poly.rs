//! Sparse Laurent polynomials with exact rational coefficients.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::context::VarContext;
use crate::error::{AlgebraError, Result};
use crate::rational::Rational;

/// Exponent vector indexed by context position.
///
/// Ordered by total degree first, then lexicographically with larger
/// exponents in earlier variables coming first. This is the printing order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Box<[i32]>);

impl Monomial {
    pub fn new(exponents: Vec<i32>) -> Self {
        Monomial(exponents.into_boxed_slice())
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars].into_boxed_slice())
    }

    pub fn unit(nvars: usize, var: usize, exp: i32) -> Self {
        let mut e = vec![0; nvars];
        e[var] = exp;
        Monomial::new(e)
    }

    pub fn exponents(&self) -> &[i32] {
        &self.0
    }

    pub fn exp(&self, var: usize) -> i32 {
        self.0[var]
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn pow(&self, k: i32) -> Monomial {
        Monomial(self.0.iter().map(|a| a * k).collect())
    }

    pub fn with_exp(&self, var: usize, exp: i32) -> Monomial {
        let mut e = self.0.clone();
        e[var] = exp;
        Monomial(e)
    }

    fn respects(&self, ctx: &VarContext) -> Result<()> {
        for (i, &e) in self.0.iter().enumerate() {
            if e < 0 && !ctx.is_invertible(i) {
                return Err(AlgebraError::NotInvertible(ctx.name(i).to_string()));
            }
        }
        Ok(())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Element of a Laurent polynomial ring over a [`VarContext`].
///
/// Terms with zero coefficient are never stored, so structural equality is
/// mathematical equality.
#[derive(Clone)]
pub struct LaurentPoly {
    ctx: Arc<VarContext>,
    terms: BTreeMap<Monomial, Rational>,
}

impl LaurentPoly {
    pub fn zero(ctx: &Arc<VarContext>) -> Self {
        LaurentPoly { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ctx: &Arc<VarContext>) -> Self {
        Self::constant(ctx, Rational::one())
    }

    pub fn constant(ctx: &Arc<VarContext>, c: Rational) -> Self {
        let mut p = Self::zero(ctx);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(ctx.len()), c);
        }
        p
    }

    pub fn var(ctx: &Arc<VarContext>, name: &str) -> Result<Self> {
        let i = ctx.require(name)?;
        Ok(Self::var_at(ctx, i))
    }

    pub fn var_at(ctx: &Arc<VarContext>, i: usize) -> Self {
        let mut p = Self::zero(ctx);
        p.terms.insert(Monomial::unit(ctx.len(), i, 1), Rational::one());
        p
    }

    /// Single term `coeff * x^exps`, checked against the invertibility mask.
    pub fn monomial(ctx: &Arc<VarContext>, exps: Vec<i32>, coeff: Rational) -> Result<Self> {
        if exps.len() != ctx.len() {
            return Err(AlgebraError::ContextMismatch);
        }
        let m = Monomial::new(exps);
        m.respects(ctx)?;
        let mut p = Self::zero(ctx);
        if !coeff.is_zero() {
            p.terms.insert(m, coeff);
        }
        Ok(p)
    }

    pub fn from_terms<I>(ctx: &Arc<VarContext>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Self::zero(ctx);
        for (m, c) in terms {
            if m.0.len() != ctx.len() {
                return Err(AlgebraError::ContextMismatch);
            }
            m.respects(ctx)?;
            p.add_term(m, &c);
        }
        Ok(p)
    }

    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, Rational> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one(self.ctx.len()))
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// `Some((m, c))` when the polynomial is a single nonzero term.
    pub fn as_monomial(&self) -> Option<(&Monomial, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Largest total degree among the terms; `None` for zero.
    pub fn total_degree(&self) -> Option<i64> {
        self.terms.keys().map(Monomial::total_degree).max()
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: &Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    fn same_context(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx {
            Ok(())
        } else {
            Err(AlgebraError::ContextMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_context(other)?;
        let (mut acc, small) = if self.len() >= other.len() { (self.clone(), other) } else { (other.clone(), self) };
        for (m, c) in &small.terms {
            acc.add_term(m.clone(), c);
        }
        Ok(acc)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_context(other)?;
        let mut acc = self.clone();
        for (m, c) in &other.terms {
            acc.add_term(m.clone(), &-c);
        }
        Ok(acc)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_context(other)?;
        let mut acc: HashMap<Monomial, Rational> = HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = ca * cb;
                acc.entry(ma.mul(mb)).and_modify(|e| *e += &c).or_insert(c);
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(LaurentPoly { ctx: self.ctx.clone(), terms })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ctx);
        }
        LaurentPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Multiply by a bare monomial (no validity check beyond the mask).
    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Result<Self> {
        m.respects(&self.ctx)?;
        if c.is_zero() {
            return Ok(Self::zero(&self.ctx));
        }
        let mut out = Self::zero(&self.ctx);
        for (mm, v) in &self.terms {
            let prod = mm.mul(m);
            prod.respects(&self.ctx)?;
            out.terms.insert(prod, v * c);
        }
        Ok(out)
    }

    /// Integer power. Negative powers exist only for single terms whose
    /// variables are all invertible.
    pub fn pow(&self, k: i32) -> Result<Self> {
        if k >= 0 {
            let mut acc = Self::one(&self.ctx);
            let mut base = self.clone();
            let mut e = k as u32;
            while e > 0 {
                if e & 1 == 1 {
                    acc = &acc * &base;
                }
                e >>= 1;
                if e > 0 {
                    base = &base * &base;
                }
            }
            return Ok(acc);
        }
        let (m, c) = self.as_monomial().ok_or_else(|| self.non_invertible_error())?;
        let inv = m.pow(k);
        inv.respects(&self.ctx)?;
        let mut p = Self::zero(&self.ctx);
        p.terms.insert(inv, c.pow(k)?);
        Ok(p)
    }

    fn non_invertible_error(&self) -> AlgebraError {
        match self.as_constant() {
            Some(c) if c.is_zero() => AlgebraError::DivisionByZero,
            _ => AlgebraError::NotInvertible(format!("({self})")),
        }
    }

    /// Exact quotient `self / d` when `d` divides `self` in the polynomial
    /// ring; `None` otherwise. Both operands must have non-negative
    /// exponents (any operand with a negative exponent yields `None`).
    pub fn try_div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() || self.same_context(d).is_err() {
            return None;
        }
        let nonneg = |p: &Self| p.terms.keys().all(|m| m.0.iter().all(|&e| e >= 0));
        if !nonneg(self) || !nonneg(d) {
            return None;
        }
        let (lm, lc) = d.terms.iter().next_back().expect("nonzero");
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.ctx);
        while let Some((m, c)) = rem.terms.iter().next_back() {
            if m.0.iter().zip(lm.0.iter()).any(|(a, b)| a < b) {
                return None;
            }
            let qm = Monomial(m.0.iter().zip(lm.0.iter()).map(|(a, b)| a - b).collect());
            let qc = c / lc;
            for (dm, dc) in &d.terms {
                rem.add_term(dm.mul(&qm), &-(dc * &qc));
            }
            quot.add_term(qm, &qc);
        }
        Some(quot)
    }

    /// Formal partial derivative in variable `var`; valid for negative
    /// exponents.
    pub fn partial(&self, var: usize) -> Self {
        let mut out = Self::zero(&self.ctx);
        for (m, c) in &self.terms {
            let e = m.exp(var);
            if e != 0 {
                out.terms.insert(m.with_exp(var, e - 1), c * &Rational::integer(e as i64));
            }
        }
        out
    }

    pub fn partial_by_name(&self, name: &str) -> Result<Self> {
        Ok(self.partial(self.ctx.require(name)?))
    }

    /// Simultaneous substitution `var -> image`. Unmapped variables are sent
    /// to the variable of the same name in the images' context.
    pub fn substitute(&self, images: &BTreeMap<String, LaurentPoly>) -> Result<Self> {
        let target = match images.values().next() {
            Some(p) => p.ctx.clone(),
            None => self.ctx.clone(),
        };
        let mut table: Vec<LaurentPoly> = Vec::with_capacity(self.ctx.len());
        for (i, name) in self.ctx.names().iter().enumerate() {
            let img = match images.get(name) {
                Some(p) => {
                    if *p.ctx != *target {
                        return Err(AlgebraError::ContextMismatch);
                    }
                    p.clone()
                }
                None => {
                    let t = target.require(name)?;
                    if self.ctx.is_invertible(i) && !target.is_invertible(t) && self.uses_negative(i) {
                        return Err(AlgebraError::NotInvertible(name.clone()));
                    }
                    LaurentPoly::var_at(&target, t)
                }
            };
            table.push(img);
        }
        for name in images.keys() {
            self.ctx.require(name)?;
        }
        self.substitute_with(&target, |i| Ok(table[i].clone()))
    }

    fn uses_negative(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.exp(var) < 0)
    }

    /// Substitution driven by a per-variable image function over `target`.
    pub fn substitute_with<F>(&self, target: &Arc<VarContext>, image: F) -> Result<Self>
    where
        F: Fn(usize) -> Result<LaurentPoly>,
    {
        let mut powers: HashMap<(usize, i32), LaurentPoly> = HashMap::new();
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut term = LaurentPoly::constant(target, c.clone());
            for (var, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !powers.contains_key(&(var, e)) {
                    let img = image(var)?;
                    let p = if e < 0 {
                        img.pow(e).map_err(|_| AlgebraError::NonMonomialImage(self.ctx.name(var).to_string()))?
                    } else {
                        img.pow(e)?
                    };
                    powers.insert((var, e), p);
                }
                term = term.checked_mul(&powers[&(var, e)])?;
            }
            out = out.checked_add(&term)?;
        }
        Ok(out)
    }

    /// Re-home into another context by variable name.
    pub fn with_context(&self, ctx: &Arc<VarContext>) -> Result<Self> {
        if Arc::ptr_eq(&self.ctx, ctx) {
            return Ok(self.clone());
        }
        let map: Vec<Option<usize>> = self.ctx.names().iter().map(|n| ctx.index_of(n)).collect();
        let mut out = Self::zero(ctx);
        for (m, c) in &self.terms {
            let mut e = vec![0; ctx.len()];
            for (i, &x) in m.exponents().iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let j = map[i].ok_or_else(|| AlgebraError::UnknownIdentifier(self.ctx.name(i).to_string()))?;
                e[j] = x;
            }
            let mm = Monomial::new(e);
            mm.respects(ctx)?;
            out.terms.insert(mm, c.clone());
        }
        Ok(out)
    }

    /// Keep only the terms selected by `keep`.
    pub fn filter_terms<F: Fn(&Monomial) -> bool>(&self, keep: F) -> Self {
        LaurentPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub fn max_exponent(&self, var: usize) -> Option<i32> {
        self.terms.keys().map(|m| m.exp(var)).max()
    }

    pub fn min_exponent(&self, var: usize) -> Option<i32> {
        self.terms.keys().map(|m| m.exp(var)).min()
    }

    /// Format a monomial (coefficient one) in the expression grammar.
    pub fn format_monomial(ctx: &VarContext, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.exponents().iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(ctx.name(i).to_string()),
                _ => parts.push(format!("{}^{}", ctx.name(i), e)),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl PartialEq for LaurentPoly {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx) && self.terms == other.terms
    }
}

impl Eq for LaurentPoly {}

impl Hash for LaurentPoly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for (m, c) in &self.terms {
            m.hash(state);
            c.hash(state);
        }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", Self::format_monomial(&self.ctx, m))?;
            } else {
                write!(f, "{abs}*{}", Self::format_monomial(&self.ctx, m))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    /// Panics on a context mismatch; see [`LaurentPoly::checked_add`].
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_add(rhs).expect("context mismatch in addition")
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_sub(rhs).expect("context mismatch in subtraction")
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_mul(rhs).expect("context mismatch in multiplication")
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&Rational::integer(-1))
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}
