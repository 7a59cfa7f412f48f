//! Poisson group algebras `K[Z^n]` with bracket `{t^a, t^b} = lambda(a,b)
//! t^{a+b}`: centre lattices and the decomposition of Poisson derivations
//! into a hamiltonian part and a central part.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::Rng;

use crate::context::VarContext;
use crate::error::{AlgebraError, Result};
use crate::lattice::{hermite_normal_form, left_kernel};
use crate::parse::parse_expr;
use crate::poisson::{DerivationSpec, PoissonStructure};
use crate::poly::{LaurentPoly, Monomial};
use crate::rational::Rational;
use crate::schema::TorusFile;

#[derive(Clone, Debug)]
pub struct TorusStructure {
    lambda: Vec<Vec<Rational>>,
    ctx: Arc<VarContext>,
    structure: PoissonStructure,
}

impl TorusStructure {
    /// Generators are named `t1..tn`.
    pub fn new(lambda: Vec<Vec<Rational>>) -> Result<Self> {
        let n = lambda.len();
        if lambda.iter().any(|r| r.len() != n) {
            return Err(AlgebraError::Input("lambda must be square".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if lambda[i][j] != -&lambda[j][i] {
                    return Err(AlgebraError::Input(format!("lambda is not antisymmetric at ({}, {})", i + 1, j + 1)));
                }
            }
        }
        let mut b = VarContext::builder();
        for i in 1..=n {
            b = b.invertible(format!("t{i}"));
        }
        let ctx = b.build()?;
        let structure = PoissonStructure::log_canonical(&ctx, &lambda)?;
        Ok(TorusStructure { lambda, ctx, structure })
    }

    pub fn from_integers(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| Rational::integer(x)).collect()).collect())
    }

    pub fn rank(&self) -> usize {
        self.lambda.len()
    }

    pub fn lambda_matrix(&self) -> &[Vec<Rational>] {
        &self.lambda
    }

    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn structure(&self) -> &PoissonStructure {
        &self.structure
    }

    /// `lambda(a, b) = a^T Lambda b`.
    pub fn lambda(&self, a: &[i32], b: &[i32]) -> Rational {
        let mut acc = Rational::zero();
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y != 0 && !self.lambda[i][j].is_zero() {
                    acc += &(&self.lambda[i][j] * &Rational::integer(x as i64 * y as i64));
                }
            }
        }
        acc
    }

    /// `lambda(g, e_y)`.
    pub fn lambda_with_generator(&self, g: &[i32], y: usize) -> Rational {
        g.iter().enumerate().map(|(i, &x)| &self.lambda[i][y] * &Rational::integer(x as i64)).sum()
    }

    pub fn is_central(&self, g: &[i32]) -> bool {
        (0..self.rank()).all(|y| self.lambda_with_generator(g, y).is_zero())
    }

    /// Canonical (Hermite) basis of `{v in Z^n : lambda(v, e_i) = 0 for all i}`.
    pub fn central_lattice(&self) -> Vec<Vec<i64>> {
        let n = self.rank();
        let lcm = self.lambda.iter().flatten().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let scaled: Vec<Vec<BigInt>> = self
            .lambda
            .iter()
            .map(|row| row.iter().map(|r| r.numer() * (&lcm / r.denom())).collect())
            .collect();
        let basis = if n == 0 { Vec::new() } else { hermite_normal_form(&left_kernel(&scaled)) };
        basis.iter().map(|r| r.iter().map(|x| x.to_i64().expect("lattice entry fits in i64")).collect()).collect()
    }

    pub fn from_file(file: &TorusFile) -> Result<(Self, Option<DerivationSpec>)> {
        if file.lambda.len() != file.rank {
            return Err(AlgebraError::Input(format!("lambda has {} rows, rank is {}", file.lambda.len(), file.rank)));
        }
        let lambda = file
            .lambda
            .iter()
            .map(|r| r.iter().map(|v| v.to_rational()).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let t = Self::new(lambda)?;
        let d = if file.images.is_empty() {
            None
        } else {
            let mut images = BTreeMap::new();
            for (k, v) in &file.images {
                images.insert(k.clone(), parse_expr(v, &t.ctx)?);
            }
            Some(DerivationSpec::new(&t.ctx, images)?)
        };
        Ok((t, d))
    }
}

/// `D = ham_gamma + D_theta` where `D_theta(t_i) = theta(e_i) t_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub gamma: LaurentPoly,
    /// `theta(e_i)`, each supported on the centre lattice.
    pub theta: Vec<LaurentPoly>,
}

/// Which generator index serves as the witness `y` with `lambda(g, e_y) != 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Witness {
    Smallest,
    Largest,
}

pub fn decompose_derivation(d: &DerivationSpec, t: &TorusStructure) -> Result<Decomposition> {
    decompose_with_witness(d, t, Witness::Smallest)
}

pub fn decompose_with_witness(d: &DerivationSpec, t: &TorusStructure, witness: Witness) -> Result<Decomposition> {
    let n = t.rank();
    let ctx = t.context();
    let d = DerivationSpec::new(ctx, (0..n).map(|i| Ok((ctx.name(i).to_string(), d.image(i).with_context(ctx)?))).collect::<Result<_>>()?)?;
    if let Some(v) = t.structure().check_poisson_derivation(&d) {
        return Err(AlgebraError::Compatibility(format!(
            "not a Poisson derivation on ({}, {}): residue {}",
            ctx.name(v.pair.0),
            ctx.name(v.pair.1),
            v.residue
        )));
    }
    // a[g][i] = coefficient of t^g in D(t_i) t_i^{-1}.
    let mut a: BTreeMap<Vec<i32>, Vec<Rational>> = BTreeMap::new();
    for i in 0..n {
        let img = d.image(i).with_context(ctx)?;
        let shifted = img.mul_monomial(&Monomial::unit(n, i, -1), &Rational::one())?;
        for (m, c) in shifted.terms() {
            a.entry(m.exponents().to_vec()).or_insert_with(|| vec![Rational::zero(); n])[i] = c.clone();
        }
    }
    let mut gamma = LaurentPoly::zero(ctx);
    let mut theta = vec![LaurentPoly::zero(ctx); n];
    for (g, coeffs) in &a {
        let lam: Vec<Rational> = (0..n).map(|y| t.lambda_with_generator(g, y)).collect();
        let nonzero: Vec<usize> = (0..n).filter(|&y| !lam[y].is_zero()).collect();
        if nonzero.is_empty() {
            for i in 0..n {
                let term = LaurentPoly::monomial(ctx, g.clone(), coeffs[i].clone())?;
                theta[i] = &theta[i] + &term;
            }
            continue;
        }
        for x in 0..n {
            for y in (x + 1)..n {
                if &coeffs[x] * &lam[y] != &coeffs[y] * &lam[x] {
                    return Err(AlgebraError::Compatibility(format!(
                        "a_g(e_{})lambda(g,e_{}) != a_g(e_{})lambda(g,e_{}) for g = {g:?}",
                        x + 1,
                        y + 1,
                        y + 1,
                        x + 1
                    )));
                }
            }
        }
        let y = match witness {
            Witness::Smallest => nonzero[0],
            Witness::Largest => *nonzero.last().expect("nonempty"),
        };
        let c = coeffs[y].checked_div(&lam[y])?;
        gamma = &gamma + &LaurentPoly::monomial(ctx, g.clone(), c)?;
    }
    Ok(Decomposition { gamma, theta })
}

/// The derivation `ham_gamma + D_theta` on generators.
pub fn compose(dec: &Decomposition, t: &TorusStructure) -> DerivationSpec {
    let ctx = t.context();
    let ham = t.structure().hamiltonian(&dec.gamma);
    let mut images = BTreeMap::new();
    for i in 0..t.rank() {
        let ti = LaurentPoly::var_at(ctx, i);
        images.insert(ctx.name(i).to_string(), ham.image(i) + &(&dec.theta[i] * &ti));
    }
    DerivationSpec::new(ctx, images).expect("every generator has an image")
}

/// `ham_gamma(t_i) + theta(e_i) t_i == D(t_i)` for every generator.
pub fn verify_decomposition(d: &DerivationSpec, dec: &Decomposition, t: &TorusStructure) -> bool {
    let rebuilt = compose(dec, t);
    (0..t.rank()).all(|i| match d.image(i).with_context(t.context()) {
        Ok(img) => &img == rebuilt.image(i),
        Err(_) => false,
    })
}

/// Random instance for roundtrip tests: `gamma` avoids the centre lattice,
/// `theta(e_i)` is supported on it.
pub fn random_decomposition<R: Rng>(t: &TorusStructure, rng: &mut R) -> Decomposition {
    let n = t.rank();
    let ctx = t.context();
    let small = |rng: &mut R| Rational::new(rng.gen_range(-9..=9), rng.gen_range(1..=4));
    let mut gamma = LaurentPoly::zero(ctx);
    let mut used = BTreeSet::new();
    for _ in 0..rng.gen_range(1..=4) {
        let g: Vec<i32> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
        if t.is_central(&g) || !used.insert(g.clone()) {
            continue;
        }
        gamma = &gamma + &LaurentPoly::monomial(ctx, g, small(rng)).expect("all generators invertible");
    }
    let lattice = t.central_lattice();
    let theta = (0..n)
        .map(|_| {
            let mut th = LaurentPoly::zero(ctx);
            for _ in 0..rng.gen_range(0..=2) {
                let mut g = vec![0i32; n];
                for v in &lattice {
                    let k: i32 = rng.gen_range(-1..=1);
                    for (gi, vi) in g.iter_mut().zip(v) {
                        *gi += k * *vi as i32;
                    }
                }
                th = &th + &LaurentPoly::monomial(ctx, g, small(rng)).expect("all generators invertible");
            }
            th
        })
        .collect();
    Decomposition { gamma, theta }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_two_example() {
        let t = TorusStructure::from_integers(&[vec![0, 1], vec![-1, 0]]).unwrap();
        assert!(t.central_lattice().is_empty());
        let ctx = t.context().clone();
        let mut images = BTreeMap::new();
        images.insert("t1".to_string(), parse_expr("t1*t2", &ctx).unwrap());
        images.insert("t2".to_string(), LaurentPoly::zero(&ctx));
        let d = DerivationSpec::new(&ctx, images).unwrap();
        let dec = decompose_derivation(&d, &t).unwrap();
        assert_eq!(dec.gamma, parse_expr("-t2", &ctx).unwrap());
        assert!(dec.theta.iter().all(LaurentPoly::is_zero));
        assert!(verify_decomposition(&d, &dec, &t));
    }

    #[test]
    fn zero_matrix_is_all_central() {
        let t = TorusStructure::from_integers(&[vec![0; 3], vec![0; 3], vec![0; 3]]).unwrap();
        assert_eq!(t.central_lattice(), vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn incompatible_input_is_rejected() {
        let t = TorusStructure::from_integers(&[vec![0, 1, 0], vec![-1, 0, 1], vec![0, -1, 0]]).unwrap();
        let ctx = t.context().clone();
        let mut images = BTreeMap::new();
        images.insert("t1".to_string(), parse_expr("t1*t2", &ctx).unwrap());
        images.insert("t2".to_string(), LaurentPoly::zero(&ctx));
        images.insert("t3".to_string(), parse_expr("t3*t2", &ctx).unwrap());
        let d = DerivationSpec::new(&ctx, images).unwrap();
        assert!(matches!(decompose_derivation(&d, &t), Err(AlgebraError::Compatibility(_))));
    }

    #[test]
    fn non_antisymmetric_rejected() {
        assert!(TorusStructure::from_integers(&[vec![0, 1], vec![1, 0]]).is_err());
    }
}
