//! Sparse exact Gauss-Jordan elimination over the rationals.

use std::collections::BTreeMap;

use crate::rational::Rational;

pub type SparseRow = BTreeMap<usize, Rational>;

/// A row space kept in reduced row echelon form: every pivot row has a 1 at
/// its pivot column and zeros in all other pivot columns.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    width: usize,
    pivots: BTreeMap<usize, SparseRow>,
}

impl Echelon {
    pub fn new(width: usize) -> Self {
        Echelon { width, pivots: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    pub fn pivot_row(&self, col: usize) -> Option<&SparseRow> {
        self.pivots.get(&col)
    }

    /// Reduce `row` against the current pivots.
    pub fn reduce(&self, mut row: SparseRow) -> SparseRow {
        let hits: Vec<(usize, Rational)> =
            row.iter().filter(|(c, _)| self.pivots.contains_key(c)).map(|(c, v)| (*c, v.clone())).collect();
        for (col, coeff) in hits {
            axpy(&mut row, &-coeff, &self.pivots[&col]);
        }
        row
    }

    /// Add a row; returns whether the rank grew.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let mut row = self.reduce(row);
        let Some((&lead, lc)) = row.iter().next() else {
            return false;
        };
        let inv = lc.recip().expect("stored entries are nonzero");
        for v in row.values_mut() {
            *v *= &inv;
        }
        for other in self.pivots.values_mut() {
            if let Some(c) = other.get(&lead).cloned() {
                axpy(other, &-c, &row);
            }
        }
        self.pivots.insert(lead, std::mem::take(&mut row));
        true
    }

    /// Basis of `{x : row . x = 0 for every row}`, one vector per free
    /// column, with that free entry set to 1.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        (0..self.width)
            .filter(|c| !self.pivots.contains_key(c))
            .map(|free| {
                let mut v = vec![Rational::zero(); self.width];
                v[free] = Rational::one();
                for (&p, row) in &self.pivots {
                    if let Some(c) = row.get(&free) {
                        v[p] = -c;
                    }
                }
                v
            })
            .collect()
    }
}

/// `row += c * other`, dropping cancelled entries.
fn axpy(row: &mut SparseRow, c: &Rational, other: &SparseRow) {
    if c.is_zero() {
        return;
    }
    for (&k, v) in other {
        let sum = row.get(&k).cloned().unwrap_or_else(Rational::zero) + &(c * v);
        if sum.is_zero() {
            row.remove(&k);
        } else {
            row.insert(k, sum);
        }
    }
}

/// Solve `A x = b` where the system is given by rows `(a_row, b_value)`.
/// Free variables are set to zero. `None` if inconsistent.
pub fn solve(width: usize, rows: impl IntoIterator<Item = (SparseRow, Rational)>) -> Option<Vec<Rational>> {
    let mut e = Echelon::new(width + 1);
    for (mut r, b) in rows {
        if !b.is_zero() {
            r.insert(width, b);
        }
        e.insert(r);
    }
    if e.pivots.contains_key(&width) {
        return None;
    }
    let mut x = vec![Rational::zero(); width];
    for (&p, row) in &e.pivots {
        x[p] = row.get(&width).cloned().unwrap_or_else(Rational::zero);
    }
    Some(x)
}

/// Reduced echelon basis of the span of `vectors`; equal spans give equal output.
pub fn canonical_span(width: usize, vectors: &[Vec<Rational>]) -> Vec<SparseRow> {
    let mut e = Echelon::new(width);
    for v in vectors {
        e.insert(v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect());
    }
    e.pivots.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(entries: &[(usize, i64)]) -> SparseRow {
        entries.iter().map(|&(c, v)| (c, Rational::integer(v))).collect()
    }

    #[test]
    fn nullspace_of_rank_one() {
        let mut e = Echelon::new(3);
        assert!(e.insert(row(&[(0, 1), (1, 2), (2, 3)])));
        assert!(!e.insert(row(&[(0, 2), (1, 4), (2, 6)])));
        let ns = e.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            let dot: Rational = v.iter().zip([1, 2, 3]).map(|(x, c)| x * &Rational::integer(c)).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn solve_consistent_and_not() {
        let x = solve(2, vec![(row(&[(0, 1), (1, 1)]), Rational::integer(3)), (row(&[(0, 1), (1, -1)]), Rational::one())])
            .unwrap();
        assert_eq!(x, vec![Rational::integer(2), Rational::one()]);
        assert!(solve(1, vec![(row(&[(0, 1)]), Rational::one()), (row(&[(0, 2)]), Rational::one())]).is_none());
    }

    #[test]
    fn spans_compare_canonically() {
        let a = canonical_span(2, &[vec![Rational::integer(2), Rational::integer(4)]]);
        let b = canonical_span(2, &[vec![Rational::integer(-1), Rational::integer(-2)]]);
        assert_eq!(a, b);
    }
}
