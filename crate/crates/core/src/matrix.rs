//! Square matrices over truncated Puiseux series and their invariant factors.
//!
//! Invariant factors are computed in two independent ways:
//!
//! * from determinantal divisors: `d_k` is the least valuation of a `k×k`
//!   minor and `α_i = d_{n-i+1} - d_{n-i}` (see
//!   [`SeriesMatrix::invariant_factors_minors`]);
//! * from an explicit Smith normal form `g·M·h = D` with `g`, `h` invertible
//!   over `k[[t^{1/m}]]` (see [`SeriesMatrix::smith_normal_form`]).
//!
//! Invariant factors are always reported in weakly decreasing order.

use std::collections::HashMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::expr::{Assignment, Expression};
use crate::par::Exec;
use crate::rat::{fmt_q, q, Q};
use crate::series::PuiseuxSeries;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesMatrix {
    n: usize,
    entries: Vec<PuiseuxSeries>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InvariantFactors {
    alphas: Vec<Q>,
}

impl InvariantFactors {
    pub fn new(alphas: Vec<Q>) -> Self {
        debug_assert!(alphas.windows(2).all(|w| w[0] >= w[1]), "invariant factors must decrease");
        InvariantFactors { alphas }
    }

    pub fn alphas(&self) -> &[Q] {
        &self.alphas
    }

    pub fn into_vec(self) -> Vec<Q> {
        self.alphas
    }

    pub fn sum(&self) -> Q {
        self.alphas.iter().sum()
    }
}

impl fmt::Display for InvariantFactors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::rat::fmt_q_tuple(&self.alphas))
    }
}

/// `g·M·h = D` with `D` diagonal, diagonal entries pure monomials of weakly
/// decreasing valuation, and `g`, `h` with entries of valuation `≥ 0` and
/// unit determinants.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub left: SeriesMatrix,
    pub diagonal: SeriesMatrix,
    pub right: SeriesMatrix,
}

impl SmithForm {
    pub fn invariant_factors(&self) -> InvariantFactors {
        let alphas = (0..self.diagonal.n)
            .map(|i| self.diagonal.get(i, i).valuation().expect("diagonal entries are monomials"))
            .collect();
        InvariantFactors::new(alphas)
    }

    /// Checks `g·M·h = D` entrywise to the available precision.
    pub fn reproduces(&self, m: &SeriesMatrix) -> bool {
        let product = self.left.mul_matrix(m).mul_matrix(&self.right);
        product.agrees_with(&self.diagonal)
    }
}

/// All minors of a matrix, keyed by `(row mask, column mask)` and grouped by
/// size (`levels[k-1]` holds the `k×k` minors).
#[derive(Clone, Debug)]
pub struct MinorTable {
    levels: Vec<HashMap<(u32, u32), PuiseuxSeries>>,
}

impl MinorTable {
    pub fn minors(&self, k: usize) -> impl Iterator<Item = (&(u32, u32), &PuiseuxSeries)> {
        self.levels[k - 1].iter()
    }

    pub fn get(&self, rows: u32, cols: u32) -> Option<&PuiseuxSeries> {
        let k = rows.count_ones() as usize;
        self.levels.get(k.checked_sub(1)?)?.get(&(rows, cols))
    }
}

/// Bitmasks of all `k`-subsets of `{0..n}` in increasing numeric order.
pub(crate) fn subsets(n: usize, k: usize) -> Vec<u32> {
    (0u32..(1u32 << n)).filter(|m| m.count_ones() as usize == k).collect()
}

impl SeriesMatrix {
    pub fn new(n: usize, entries: Vec<PuiseuxSeries>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        Ok(SeriesMatrix { n, entries })
    }

    pub fn from_rows(rows: Vec<Vec<PuiseuxSeries>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(SeriesMatrix { n, entries })
    }

    /// Evaluates a matrix of expressions (as returned by
    /// [`parse_matrix`](crate::expr::parse_matrix)).
    pub fn from_expressions(rows: &[Vec<Expression>], assignment: &Assignment) -> Result<Self> {
        let evaluated = rows
            .iter()
            .map(|row| row.iter().map(|e| e.evaluate(assignment)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(evaluated)
    }

    pub fn parse(text: &str, precision: Q) -> Result<Self> {
        let rows = crate::expr::parse_matrix(text)?;
        Self::from_expressions(&rows, &Assignment::new(precision))
    }

    pub fn identity(n: usize, precision: Q) -> Self {
        let mut entries = vec![PuiseuxSeries::zero(precision); n * n];
        for i in 0..n {
            entries[i * n + i] = PuiseuxSeries::one(precision);
        }
        SeriesMatrix { n, entries }
    }

    /// Diagonal matrix; off-diagonal zeros get the least diagonal precision.
    pub fn diagonal(diag: Vec<PuiseuxSeries>) -> Self {
        let n = diag.len();
        let p = diag.iter().map(|s| s.precision()).min().unwrap_or(q(0));
        let mut entries = vec![PuiseuxSeries::zero(p); n * n];
        for (i, s) in diag.into_iter().enumerate() {
            entries[i * n + i] = s;
        }
        SeriesMatrix { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &PuiseuxSeries {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: PuiseuxSeries) {
        self.entries[i * self.n + j] = value;
    }

    pub fn entries(&self) -> &[PuiseuxSeries] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<PuiseuxSeries>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn ramification(&self) -> i64 {
        self.entries
            .iter()
            .fold(1i64, |m, s| num_integer::lcm(m, s.ramification()))
    }

    pub fn min_precision(&self) -> Q {
        self.entries.iter().map(|s| s.precision()).min().unwrap_or(q(0))
    }

    pub fn map_entries<F: Fn(&PuiseuxSeries) -> PuiseuxSeries>(&self, f: F) -> Self {
        SeriesMatrix {
            n: self.n,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn try_map_entries<F: Fn(&PuiseuxSeries) -> Result<PuiseuxSeries>>(&self, f: F) -> Result<Self> {
        Ok(SeriesMatrix {
            n: self.n,
            entries: self.entries.iter().map(f).collect::<Result<_>>()?,
        })
    }

    /// Multiplies every entry by `c`.
    pub fn scale(&self, c: &PuiseuxSeries) -> Self {
        self.map_entries(|s| s.mul(c))
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                entries.push(self.get(i, j).clone());
            }
        }
        SeriesMatrix { n, entries }
    }

    pub fn multiply(&self, other: &SeriesMatrix) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(self.mul_matrix(other))
    }

    fn mul_matrix(&self, other: &SeriesMatrix) -> Self {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = self.get(i, 0).mul(other.get(0, j));
                for k in 1..n {
                    acc = acc.add(&self.get(i, k).mul(other.get(k, j)));
                }
                entries.push(acc);
            }
        }
        SeriesMatrix { n, entries }
    }

    /// Entrywise agreement to precision.
    pub fn agrees_with(&self, other: &SeriesMatrix) -> bool {
        self.n == other.n
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a.agrees_with(b))
    }

    /// Determinant by Laplace expansion along the top row, memoized over the
    /// column subsets of the bottom `k` rows.
    pub fn determinant(&self) -> PuiseuxSeries {
        let n = self.n;
        if n == 0 {
            return PuiseuxSeries::one(q(0));
        }
        let mut prev: HashMap<u32, PuiseuxSeries> = HashMap::new();
        for c in 0..n {
            prev.insert(1 << c, self.get(n - 1, c).clone());
        }
        for k in 2..=n {
            let row = n - k;
            let mut next = HashMap::new();
            for cols in subsets(n, k) {
                next.insert(cols, self.expand_row(row, cols, |rest| &prev[&rest]));
            }
            prev = next;
        }
        prev.remove(&((1u32 << n) - 1)).expect("full minor")
    }

    /// `Σ_idx (-1)^idx a[row][c_idx] · minor(cols \ c_idx)`.
    fn expand_row<'a, F>(&self, row: usize, cols: u32, sub: F) -> PuiseuxSeries
    where
        F: Fn(u32) -> &'a PuiseuxSeries,
    {
        let mut acc: Option<PuiseuxSeries> = None;
        let mut idx = 0;
        for c in 0..self.n {
            if cols & (1 << c) == 0 {
                continue;
            }
            let term = self.get(row, c).mul(sub(cols & !(1 << c)));
            let term = if idx % 2 == 1 { term.neg() } else { term };
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term),
            });
            idx += 1;
        }
        acc.expect("nonempty column set")
    }

    /// Every minor of every size, built level by level: a `k×k` minor is
    /// expanded along its first row into `(k-1)×(k-1)` minors from the
    /// previous level. Each level is computed in parallel across
    /// `(rows, cols)` pairs.
    pub fn minor_table(&self) -> MinorTable {
        self.minor_table_with(Exec::default())
    }

    pub fn minor_table_with(&self, exec: Exec) -> MinorTable {
        let n = self.n;
        let mut levels: Vec<HashMap<(u32, u32), PuiseuxSeries>> = Vec::with_capacity(n);
        let mut first = HashMap::new();
        for i in 0..n {
            for j in 0..n {
                first.insert((1 << i, 1 << j), self.get(i, j).clone());
            }
        }
        levels.push(first);
        for k in 2..=n {
            let masks = subsets(n, k);
            let pairs: Vec<(u32, u32)> = masks
                .iter()
                .flat_map(|r| masks.iter().map(move |c| (*r, *c)))
                .collect();
            let prev = &levels[k - 2];
            let computed = exec.map(pairs, |(rows, cols)| {
                let top = rows.trailing_zeros() as usize;
                let rest = rows & !(1 << top);
                let minor = self.expand_row(top, cols, |c| &prev[&(rest, c)]);
                ((rows, cols), minor)
            });
            levels.push(computed.into_iter().collect());
        }
        MinorTable { levels }
    }

    /// `(d_1, …, d_n)` where `d_k` is the least valuation among the `k×k`
    /// minors.
    ///
    /// Minors that vanish to precision are skipped, but only when their
    /// precision is at least the minimum found; otherwise the minimum is not
    /// certain and the call fails with `IndeterminateValuation`.
    pub fn determinantal_valuations(&self) -> Result<Vec<Q>> {
        self.determinantal_valuations_with(Exec::default())
    }

    pub fn determinantal_valuations_with(&self, exec: Exec) -> Result<Vec<Q>> {
        let table = self.minor_table_with(exec);
        let mut out = Vec::with_capacity(self.n);
        for k in 1..=self.n {
            let mut best: Option<Q> = None;
            let mut unknown_floor: Option<Q> = None;
            for (_, minor) in table.minors(k) {
                match minor.valuation() {
                    Ok(v) => best = Some(best.map_or(v, |b| b.min(v))),
                    Err(_) => {
                        let p = minor.precision();
                        unknown_floor = Some(unknown_floor.map_or(p, |u| u.min(p)));
                    }
                }
            }
            match (best, unknown_floor) {
                (None, floor) => return Err(Error::IndeterminateValuation(floor.unwrap_or(q(0)))),
                (Some(b), Some(floor)) if floor < b => return Err(Error::IndeterminateValuation(floor)),
                (Some(b), _) => out.push(b),
            }
        }
        Ok(out)
    }

    /// Invariant factors from determinantal divisors:
    /// `α_i = d_{n-i+1} - d_{n-i}` with `d_0 = 0`.
    pub fn invariant_factors_minors(&self) -> Result<InvariantFactors> {
        self.invariant_factors_minors_with(Exec::default())
    }

    pub fn invariant_factors_minors_with(&self, exec: Exec) -> Result<InvariantFactors> {
        let mut d = vec![q(0)];
        d.extend(self.determinantal_valuations_with(exec)?);
        let n = self.n;
        let alphas: Vec<Q> = (1..=n).map(|i| d[n - i + 1] - d[n - i]).collect();
        assert!(
            alphas.windows(2).all(|w| w[0] >= w[1]),
            "determinantal divisors produced non-monotone invariant factors {alphas:?}"
        );
        Ok(InvariantFactors { alphas })
    }

    /// Smith normal form over `k[[t^{1/m}]]`.
    ///
    /// At each corner the entry of least valuation in the remaining block is
    /// chosen as pivot (ties go to the lexicographically smallest
    /// `(row, col)`), moved to the corner, and its row and column are cleared
    /// with elementary operations whose multipliers have valuation `≥ 0`.
    /// The pivot is then normalized to a pure monomial by a unit column
    /// scaling, and finally the diagonal is permuted into decreasing order.
    ///
    /// Because the pivot always has minimal valuation, eliminations never
    /// lose absolute precision. The call fails with `IndeterminateValuation`
    /// if a block vanishes to precision or if a vanishing entry might hide a
    /// smaller valuation than the chosen pivot.
    pub fn smith_normal_form(&self) -> Result<SmithForm> {
        let n = self.n;
        let mut a = self.clone();
        let top = self.entries.iter().map(|s| s.precision()).max().unwrap_or(q(0));
        let mut g = SeriesMatrix::identity(n, top);
        let mut h = SeriesMatrix::identity(n, top);

        for k in 0..n {
            let (r, c) = a.pivot(k)?;
            a.swap_rows(k, r);
            g.swap_rows(k, r);
            a.swap_cols(k, c);
            h.swap_cols(k, c);

            let pivot_inv = a.get(k, k).invert()?;
            for i in k + 1..n {
                let f = a.get(i, k).mul(&pivot_inv);
                if f.is_zero_to_precision() && a.get(i, k).is_zero_to_precision() {
                    continue;
                }
                for j in k..n {
                    let v = a.get(i, j).sub(&f.mul(a.get(k, j)));
                    a.set(i, j, v);
                }
                for j in 0..n {
                    let v = g.get(i, j).sub(&f.mul(g.get(k, j)));
                    g.set(i, j, v);
                }
            }
            for j in k + 1..n {
                let f = a.get(k, j).mul(&pivot_inv);
                if f.is_zero_to_precision() && a.get(k, j).is_zero_to_precision() {
                    continue;
                }
                // column k has only the pivot left below row k-1
                let v = a.get(k, j).sub(&f.mul(a.get(k, k)));
                a.set(k, j, v);
                for i in 0..n {
                    let v = h.get(i, j).sub(&h.get(i, k).mul(&f));
                    h.set(i, j, v);
                }
            }

            // pivot = u·t^v with u a unit; scale column k by u^{-1}
            let v = a.get(k, k).valuation()?;
            let unit = a.get(k, k).shift(-v);
            let unit_inv = unit.invert()?;
            for i in 0..n {
                let s = h.get(i, k).mul(&unit_inv);
                h.set(i, k, s);
            }
            let normalized = a.get(k, k).mul(&unit_inv);
            debug_assert!(normalized.agrees_with(&PuiseuxSeries::monomial(
                BigRational::one(),
                v,
                normalized.precision()
            )));
            a.set(k, k, PuiseuxSeries::monomial(BigRational::one(), v, normalized.precision()));
        }

        // decreasing order of diagonal valuations
        let vals: Vec<Q> = (0..n).map(|i| a.get(i, i).valuation().expect("monomial")).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|x, y| vals[*y].cmp(&vals[*x]).then(x.cmp(y)));
        let permute_rows = |m: &SeriesMatrix| {
            let rows = m.rows();
            SeriesMatrix::from_rows(order.iter().map(|&i| rows[i].clone()).collect()).expect("square")
        };
        let g = permute_rows(&g);
        let h = permute_rows(&h.transpose()).transpose();
        let d = permute_rows(&permute_rows(&a).transpose()).transpose();
        Ok(SmithForm {
            left: g,
            diagonal: d,
            right: h,
        })
    }

    fn pivot(&self, k: usize) -> Result<(usize, usize)> {
        let mut best: Option<(Q, usize, usize)> = None;
        let mut unknown_floor: Option<Q> = None;
        for i in k..self.n {
            for j in k..self.n {
                match self.get(i, j).valuation() {
                    Ok(v) => {
                        if best.as_ref().is_none_or(|(b, _, _)| v < *b) {
                            best = Some((v, i, j));
                        }
                    }
                    Err(_) => {
                        let p = self.get(i, j).precision();
                        unknown_floor = Some(unknown_floor.map_or(p, |u| u.min(p)));
                    }
                }
            }
        }
        match (best, unknown_floor) {
            (None, floor) => Err(Error::IndeterminateValuation(floor.unwrap_or(q(0)))),
            (Some((v, _, _)), Some(floor)) if floor < v => Err(Error::IndeterminateValuation(floor)),
            (Some((_, i, j)), _) => Ok((i, j)),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.n {
            self.entries.swap(a * self.n + j, b * self.n + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.n {
            self.entries.swap(i * self.n + a, i * self.n + b);
        }
    }

    /// True when every entry has valuation `≥ 0` (or vanishes) and the
    /// determinant has valuation exactly 0.
    pub fn is_unimodular(&self) -> bool {
        let integral = self
            .entries
            .iter()
            .all(|s| s.valuation().map_or(true, |v| v >= q(0)));
        integral && self.determinant().valuation() == Ok(q(0))
    }

    /// Matrix literal `a, b; c, d` with each entry in series literal form.
    pub fn to_literal(&self) -> String {
        self.rows()
            .iter()
            .map(|r| r.iter().map(|s| s.to_literal()).collect::<Vec<_>>().join(", "))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

impl fmt::Display for SeriesMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows().iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(|s| s.to_literal()).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Renders valuations for diagnostics.
pub fn fmt_valuations(v: &[Q]) -> String {
    v.iter().map(fmt_q).collect::<Vec<_>>().join(", ")
}

#[allow(dead_code)]
fn is_identity(m: &SeriesMatrix) -> bool {
    (0..m.n).all(|i| {
        (0..m.n).all(|j| {
            let e = m.get(i, j);
            if i == j {
                e.agrees_with(&PuiseuxSeries::one(e.precision()))
            } else {
                e.coefficient(&q(0)).is_zero() && e.is_zero_to_precision()
            }
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::big;

    const P: i64 = 32;

    fn m(text: &str) -> SeriesMatrix {
        SeriesMatrix::parse(text, q(P)).unwrap()
    }

    fn qs(xs: &[i64]) -> Vec<Q> {
        xs.iter().map(|x| q(*x)).collect()
    }

    #[test]
    fn determinantal_valuations_examples() {
        assert_eq!(m("t^3, 0; 0, t").determinantal_valuations().unwrap(), qs(&[1, 4]));
        // minors: 1, t^5, t^-2, 0 and det = -t^3
        assert_eq!(m("1, t^5; t^-2, 0").determinantal_valuations().unwrap(), qs(&[-2, 3]));
        assert_eq!(
            SeriesMatrix::identity(4, q(P)).determinantal_valuations().unwrap(),
            qs(&[0, 0, 0, 0])
        );
    }

    #[test]
    fn invariant_factors_examples() {
        assert_eq!(m("t^3, 0; 0, t").invariant_factors_minors().unwrap().alphas(), &qs(&[3, 1])[..]);
        assert_eq!(m("1, t^5; t^-2, 0").invariant_factors_minors().unwrap().alphas(), &qs(&[5, -2])[..]);
        let x = m("1 + t, t^2, 3; t^-1, 2, t; 0, t^4, 1 - t");
        assert_eq!(
            x.invariant_factors_minors().unwrap(),
            x.transpose().invariant_factors_minors().unwrap()
        );
    }

    #[test]
    fn singular_matrix_is_indeterminate() {
        let x = m("1, t; 1, t");
        assert!(matches!(x.invariant_factors_minors(), Err(Error::IndeterminateValuation(_))));
        assert!(matches!(x.smith_normal_form(), Err(Error::IndeterminateValuation(_))));
        let z = m("0, 0; 0, 0");
        assert!(z.determinantal_valuations().is_err());
    }

    #[test]
    fn determinant_and_transpose() {
        assert!(m("t, 0; 0, t").determinant().agrees_with(m("t^2, 0; 0, 0").get(0, 0)));
        let x = m("1, 2, t; 3, t^-1, 4; 5, 6, 7");
        assert_eq!(x.transpose().transpose(), x);
        // cofactor expansion by hand: 1*(7t^-1 - 24) - 2*(21 - 20) + t*(18 - 5t^-1)
        let expected = PuiseuxSeries::from_terms(
            [(q(-1), big(7)), (q(0), big(-24 - 2 - 5)), (q(1), big(18))],
            q(P - 1),
        );
        assert!(x.determinant().agrees_with(&expected));
        let table = x.minor_table();
        assert!(table.get(0b111, 0b111).unwrap().agrees_with(&expected));
    }

    #[test]
    fn smith_identity() {
        let s = SeriesMatrix::identity(3, q(P)).smith_normal_form().unwrap();
        assert!(is_identity(&s.diagonal));
        assert!(s.left.is_unimodular() && s.right.is_unimodular());
    }

    #[test]
    fn smith_sorts_decreasing() {
        let x = m("t, 0; 0, t^3");
        let s = x.smith_normal_form().unwrap();
        assert_eq!(s.invariant_factors().alphas(), &qs(&[3, 1])[..]);
        assert_eq!(s.diagonal.get(0, 0), &PuiseuxSeries::monomial(big(1), q(3), s.diagonal.get(0, 0).precision()));
        assert!(s.reproduces(&x));
    }

    #[test]
    fn smith_dense_example() {
        let x = m("1 + t, t^2, 3; t^-1, 2, t; 0, t^4, 1 - t");
        let s = x.smith_normal_form().unwrap();
        assert_eq!(s.invariant_factors(), x.invariant_factors_minors().unwrap());
        assert!(s.reproduces(&x));
        assert!(s.left.is_unimodular());
        assert!(s.right.is_unimodular());
    }

    #[test]
    fn smith_puiseux_entries() {
        let x = m("t^(1/2), 1; 0, t^(-1/3)");
        let s = x.smith_normal_form().unwrap();
        assert_eq!(s.invariant_factors(), x.invariant_factors_minors().unwrap());
        assert!(s.reproduces(&x));
    }

    #[test]
    fn scalar_monomial_shifts_factors() {
        let x = m("1 + t, t^2; t^-1, 2");
        let shifted = x.scale(&PuiseuxSeries::monomial(big(1), q(5), q(P)));
        let a = x.invariant_factors_minors().unwrap();
        let b = shifted.invariant_factors_minors().unwrap();
        let expected: Vec<Q> = a.alphas().iter().map(|v| v + q(5)).collect();
        assert_eq!(b.alphas(), &expected[..]);
    }

    #[test]
    fn dimension_errors() {
        assert!(SeriesMatrix::new(2, vec![]).is_err());
        let a = SeriesMatrix::identity(2, q(P));
        let b = SeriesMatrix::identity(3, q(P));
        assert!(matches!(a.multiply(&b), Err(Error::DimensionMismatch { .. })));
        assert_eq!(fmt_valuations(&qs(&[1, 2])), "1, 2");
        assert!(num_traits::Zero::is_zero(&big(0)));
    }
}
