//! Bounded-degree searches: Casimirs of a Poisson structure and exact
//! comparison of finite-dimensional polynomial spaces.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::linalg::{canonical_span, Echelon, SparseRow};
use crate::poisson::PoissonStructure;
use crate::poly::{LaurentPoly, Monomial};
use crate::rational::Rational;

/// Exponent vectors over the generators of `ctx` with total degree `<= d`
/// and per-variable caps (`None` = uncapped), parameters held at 0.
pub fn exponents_up_to(nvars: usize, gens: &[usize], d: u32, caps: &[Option<u32>]) -> Vec<Vec<i32>> {
    fn go(gens: &[usize], caps: &[Option<u32>], left: u32, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        let Some((&g, rest)) = gens.split_first() else {
            out.push(cur.clone());
            return;
        };
        let cap = caps[g].map_or(left, |c| c.min(left));
        for e in 0..=cap {
            cur[g] = e as i32;
            go(rest, caps, left - e, cur, out);
        }
        cur[g] = 0;
    }
    let mut out = Vec::new();
    go(gens, caps, d, &mut vec![0; nvars], &mut out);
    out.sort_by(|a, b| Monomial::new(a.clone()).cmp(&Monomial::new(b.clone())));
    out
}

/// Canonical basis of `{ sum c_m m : sum c_m image(m) = 0 }` over the
/// given `basis` monomials. `image(m)` returns the list of components.
pub fn kernel<F>(basis: &[LaurentPoly], image: F) -> Vec<LaurentPoly>
where
    F: Fn(&LaurentPoly) -> Vec<LaurentPoly> + Sync,
{
    let columns: Vec<Vec<LaurentPoly>> = basis.par_iter().map(&image).collect();
    let mut rows: BTreeMap<(usize, Monomial), SparseRow> = BTreeMap::new();
    for (c, comps) in columns.iter().enumerate() {
        for (k, p) in comps.iter().enumerate() {
            for (m, v) in p.terms() {
                rows.entry((k, m.clone())).or_default().insert(c, v.clone());
            }
        }
    }
    let mut e = Echelon::new(basis.len());
    for r in rows.into_values() {
        e.insert(r);
    }
    let vectors = e.nullspace();
    canonical_span(basis.len(), &vectors).iter().map(|r| combine(basis, r)).collect()
}

fn combine(basis: &[LaurentPoly], row: &SparseRow) -> LaurentPoly {
    let ctx = basis[0].context();
    let mut acc = LaurentPoly::zero(ctx);
    for (&c, v) in row {
        acc = &acc + &basis[c].scale(v);
    }
    acc
}

/// Casimirs of `s` among polynomials of total degree `<= d` in the generators.
pub fn bounded_centre(s: &PoissonStructure, d: u32) -> Vec<LaurentPoly> {
    let ctx = s.context();
    let gens = s.generators();
    let caps = vec![None; ctx.len()];
    let basis: Vec<LaurentPoly> = exponents_up_to(ctx.len(), &gens, d, &caps)
        .into_iter()
        .map(|e| LaurentPoly::monomial(ctx, e, Rational::one()).expect("non-negative exponents"))
        .collect();
    kernel(&basis, |f| gens.iter().map(|&i| s.bracket(f, &LaurentPoly::var_at(ctx, i))).collect())
}

/// Whether two finite families of polynomials span the same space.
pub fn same_span(a: &[LaurentPoly], b: &[LaurentPoly]) -> bool {
    let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
    for p in a.iter().chain(b) {
        for (m, _) in p.terms() {
            let n = index.len();
            index.entry(m.clone()).or_insert(n);
        }
    }
    let coords = |ps: &[LaurentPoly]| -> Vec<Vec<Rational>> {
        ps.iter()
            .map(|p| {
                let mut v = vec![Rational::zero(); index.len()];
                for (m, c) in p.terms() {
                    v[index[m]] = c.clone();
                }
                v
            })
            .collect()
    };
    canonical_span(index.len(), &coords(a)) == canonical_span(index.len(), &coords(b))
}
