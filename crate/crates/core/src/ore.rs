//! Iterated Poisson-Ore presentations `{X_i, a} = sigma_i(a) X_i + delta_i(a)`.
//!
//! Each `sigma_i` is diagonal on the earlier generators, `sigma_i(X_j) =
//! mu_ij X_j`, and each `delta_i` is given by its images on `X_1..X_{i-1}`.
//! Both extend to `K[X_1..X_{i-1}]` as derivations.

use std::sync::Arc;

use crate::context::VarContext;
use crate::error::{AlgebraError, Result};
use crate::poisson::{DerivationSpec, PoissonStructure};
use crate::poly::LaurentPoly;
use crate::rational::Rational;

/// Default iteration bound for local-nilpotency witnesses and PDDA series.
pub const DEFAULT_NILPOTENCY_BOUND: usize = 16;

#[derive(Clone, Debug)]
pub struct PoissonOreData {
    ctx: Arc<VarContext>,
    /// Generator indices in adjunction order.
    gens: Vec<usize>,
    /// `mu[i][j]` for positions in `gens`; antisymmetric.
    mu: Vec<Vec<Rational>>,
    /// `delta[i][j] = delta_i(X_j)` for `j < i`, zero otherwise.
    delta: Vec<Vec<LaurentPoly>>,
    eta: Vec<Option<Rational>>,
}

impl PoissonOreData {
    /// `sigma` holds `(i, j, mu_ij)` and `delta` holds `(i, j, delta_i(X_j))`
    /// with `j < i`, both in generator positions (0-based). Missing entries
    /// are zero.
    pub fn new(
        ctx: &Arc<VarContext>,
        sigma: impl IntoIterator<Item = (usize, usize, Rational)>,
        delta: impl IntoIterator<Item = (usize, usize, LaurentPoly)>,
    ) -> Result<Self> {
        let gens: Vec<usize> = ctx.generators().collect();
        let n = gens.len();
        let mut mu = vec![vec![Rational::zero(); n]; n];
        let mut set = vec![vec![false; n]; n];
        for (i, j, m) in sigma {
            check_lower(i, j, n, "sigma")?;
            if set[i][j] {
                return Err(AlgebraError::Input(format!("sigma entry ({},{}) given twice", i + 1, j + 1)));
            }
            set[i][j] = true;
            mu[j][i] = -&m;
            mu[i][j] = m;
        }
        let mut dtab = vec![vec![LaurentPoly::zero(ctx); n]; n];
        for (i, j, p) in delta {
            check_lower(i, j, n, "delta")?;
            let p = p.with_context(ctx)?;
            // delta_i must take values in K[X_1..X_{i-1}] (and parameters).
            for (m, _) in p.terms() {
                if let Some(bad) = gens[i..].iter().find(|&&g| m.exp(g) != 0) {
                    return Err(AlgebraError::Input(format!(
                        "delta_{}({}) involves `{}`",
                        i + 1,
                        ctx.name(gens[j]),
                        ctx.name(*bad)
                    )));
                }
            }
            dtab[i][j] = p;
        }
        Ok(PoissonOreData { ctx: ctx.clone(), gens, mu, delta: dtab, eta: vec![None; n] })
    }

    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// Context index of the generator in position `i`.
    pub fn generator(&self, i: usize) -> usize {
        self.gens[i]
    }

    pub fn mu(&self, i: usize, j: usize) -> &Rational {
        &self.mu[i][j]
    }

    pub fn mu_matrix(&self) -> &[Vec<Rational>] {
        &self.mu
    }

    pub fn delta_image(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.delta[i][j]
    }

    pub fn delta_is_zero(&self, i: usize) -> bool {
        self.delta[i].iter().all(LaurentPoly::is_zero)
    }

    pub fn eta(&self, i: usize) -> Option<&Rational> {
        self.eta[i].as_ref()
    }

    /// `sigma_i` as a derivation of the ambient context.
    pub fn sigma_derivation(&self, i: usize) -> DerivationSpec {
        let weights: Vec<Rational> = (0..self.ctx.len())
            .map(|v| match self.gens.iter().position(|&g| g == v) {
                Some(j) if j < i => self.mu[i][j].clone(),
                _ => Rational::zero(),
            })
            .collect();
        DerivationSpec::diagonal(&self.ctx, &weights)
    }

    /// `delta_i` as a derivation of the ambient context.
    pub fn delta_derivation(&self, i: usize) -> DerivationSpec {
        let mut images = std::collections::BTreeMap::new();
        for v in self.ctx.generators() {
            let j = self.gens.iter().position(|&g| g == v).expect("generator");
            let img = if j < i { self.delta[i][j].clone() } else { LaurentPoly::zero(&self.ctx) };
            images.insert(self.ctx.name(v).to_string(), img);
        }
        DerivationSpec::new(&self.ctx, images).expect("images cover all generators")
    }

    /// The unique `eta` with `(delta_i sigma_i - sigma_i delta_i)(X_j) =
    /// eta delta_i(X_j)` for every `j < i` where `delta_i(X_j) != 0`.
    pub fn compute_eta(&self, i: usize) -> Result<Rational> {
        if self.delta_is_zero(i) {
            return Err(AlgebraError::EtaUndefined(i + 1));
        }
        let sigma = self.sigma_derivation(i);
        let mut found: Option<(usize, Rational)> = None;
        for j in 0..i {
            let d = &self.delta[i][j];
            if d.is_zero() {
                continue;
            }
            // delta(sigma(X_j)) = mu_ij delta(X_j).
            let comm = &d.scale(&self.mu[i][j]) - &sigma.apply(d);
            let (lead, c) = d.terms().next().expect("nonzero");
            let eta = comm.coefficient(lead).checked_div(c)?;
            if comm != d.scale(&eta) {
                return Err(AlgebraError::EtaInconsistent {
                    index: i + 1,
                    detail: format!("commutator on {} is not a multiple of delta", self.ctx.name(self.gens[j])),
                });
            }
            match &found {
                Some((k, e)) if *e != eta => {
                    return Err(AlgebraError::EtaInconsistent {
                        index: i + 1,
                        detail: format!(
                            "{} gives {e} but {} gives {eta}",
                            self.ctx.name(self.gens[*k]),
                            self.ctx.name(self.gens[j])
                        ),
                    })
                }
                Some(_) => {}
                None => found = Some((j, eta)),
            }
        }
        Ok(found.expect("delta nonzero").1)
    }

    /// Fill in `eta_i` for every index with nonzero `delta_i`.
    pub fn with_computed_eta(mut self) -> Result<Self> {
        for i in 0..self.len() {
            self.eta[i] = if self.delta_is_zero(i) { None } else { Some(self.compute_eta(i)?) };
        }
        Ok(self)
    }

    /// Largest number of `delta_i` applications needed to annihilate any
    /// earlier generator, or an error if some orbit survives `bound` steps.
    pub fn nilpotency_witness(&self, i: usize, bound: usize) -> Result<usize> {
        let d = self.delta_derivation(i);
        let mut worst = 0;
        for j in 0..i {
            let mut cur = LaurentPoly::var_at(&self.ctx, self.gens[j]);
            let mut steps = 0;
            while !cur.is_zero() {
                if steps == bound {
                    return Err(AlgebraError::NotNilpotent { index: i + 1, bound });
                }
                cur = d.apply(&cur);
                steps += 1;
            }
            worst = worst.max(steps);
        }
        Ok(worst)
    }

    /// The bracket table this presentation defines.
    pub fn to_structure(&self) -> Result<PoissonStructure> {
        let mut entries = Vec::new();
        for i in 0..self.len() {
            let xi = LaurentPoly::var_at(&self.ctx, self.gens[i]);
            for j in 0..i {
                let xj = LaurentPoly::var_at(&self.ctx, self.gens[j]);
                let v = &(&xj * &xi).scale(&self.mu[i][j]) + &self.delta[i][j];
                entries.push((self.gens[i], self.gens[j], v));
            }
        }
        PoissonStructure::new(&self.ctx, entries)
    }

    /// First pair `(i, j)`, `j < i`, where the presentation disagrees with
    /// the table of `s`.
    pub fn check_against(&self, s: &PoissonStructure) -> Option<(usize, usize)> {
        let own = self.to_structure().ok()?;
        for i in 0..self.len() {
            for j in 0..i {
                let (a, b) = (self.gens[i], self.gens[j]);
                if own.entry(a, b) != s.entry(a, b) {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

fn check_lower(i: usize, j: usize, n: usize, what: &str) -> Result<()> {
    if i >= n || j >= i {
        return Err(AlgebraError::Input(format!("{what} entry ({},{}) must satisfy j < i <= {n}", i + 1, j + 1)));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expr;

    // Quantum-plane-with-derivation toy: {X2, X1} = X1X2 + X1^2 has
    // sigma_2(X1) = X1 and delta_2(X1) = X1^2, whose commutator is
    // delta(X1) - sigma(X1^2) = X1^2 - 2X1^2 = -X1^2, so eta = -1.
    #[test]
    fn eta_of_small_example() {
        let ctx = VarContext::polynomial(&["X1", "X2"]).unwrap();
        let d = parse_expr("X1^2", &ctx).unwrap();
        let o = PoissonOreData::new(&ctx, vec![(1, 0, Rational::one())], vec![(1, 0, d)]).unwrap();
        assert_eq!(o.compute_eta(1).unwrap(), Rational::integer(-1));
        assert!(matches!(o.compute_eta(0), Err(AlgebraError::EtaUndefined(1))));
        assert!(matches!(o.nilpotency_witness(1, 16), Err(AlgebraError::NotNilpotent { .. })));
    }

    #[test]
    fn rejects_upper_entries_and_forward_references() {
        let ctx = VarContext::polynomial(&["X1", "X2"]).unwrap();
        assert!(PoissonOreData::new(&ctx, vec![(0, 1, Rational::one())], vec![]).is_err());
        let d = parse_expr("X2", &ctx).unwrap();
        assert!(PoissonOreData::new(&ctx, vec![], vec![(1, 0, d)]).is_err());
    }
}
