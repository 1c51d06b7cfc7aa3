//! Horn's equality and inequalities for invariant factors of products.
//!
//! For `n×n` matrices `x`, `y`, `z' = xy` over a discrete valuation ring with
//! invariant factors `α`, `β`, `γ'` (all weakly decreasing), the triples that
//! occur are exactly those with `Σα + Σβ = Σγ'` and
//!
//! ```text
//! Σ_{k∈K} γ'_k ≤ Σ_{i∈I} α_i + Σ_{j∈J} β_j     for every (I,J,K) ∈ T_r^n, r < n.
//! ```
//!
//! The index sets are built recursively: `U_r^n` holds the triples of
//! `r`-subsets of `{1..n}` with `ΣI + ΣJ = ΣK + r(r+1)/2`, and `T_r^n` keeps
//! those that also satisfy the analogous inequalities indexed by `T_p^r` for
//! every `p < r`. Note the superscript `r` there: the inner triples live in
//! `{1..r}` and index positions inside `I`, `J`, `K`.
//!
//! The inequalities are applied to the decreasing tuples as they stand.
//! [`realizability_oracle`] checks this against explicit matrix products.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::SeriesMatrix;
use crate::par::Exec;
use crate::rat::{big, fmt_q_tuple, q, Q};
use crate::series::PuiseuxSeries;

/// Three ascending, equally sized subsets of `{1..n}` (1-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexTriple {
    pub i: Vec<usize>,
    pub j: Vec<usize>,
    pub k: Vec<usize>,
}

impl IndexTriple {
    pub fn new(i: Vec<usize>, j: Vec<usize>, k: Vec<usize>) -> Result<Self> {
        let ascending = |s: &[usize]| s.windows(2).all(|w| w[0] < w[1]) && s.iter().all(|x| *x >= 1);
        if i.len() != j.len() || j.len() != k.len() {
            return Err(Error::invalid("index sets must have the same size"));
        }
        if !(ascending(&i) && ascending(&j) && ascending(&k)) {
            return Err(Error::invalid("index sets must be strictly increasing and 1-based"));
        }
        Ok(IndexTriple { i, j, k })
    }

    pub fn size(&self) -> usize {
        self.i.len()
    }

    /// `ΣI + ΣJ - ΣK - r(r+1)/2`; zero exactly for members of `U_r^n`.
    pub fn sum_defect(&self) -> i64 {
        let s = |v: &[usize]| v.iter().sum::<usize>() as i64;
        let r = self.size() as i64;
        s(&self.i) + s(&self.j) - s(&self.k) - r * (r + 1) / 2
    }
}

impl fmt::Display for IndexTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let set = |v: &[usize]| {
            let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            format!("{{{}}}", parts.join(","))
        };
        write!(f, "{}|{}|{}", set(&self.i), set(&self.j), set(&self.k))
    }
}

impl FromStr for IndexTriple {
    type Err = Error;

    /// Parses `{1,3}|{2,3}|{3,4}`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split('|').collect();
        if parts.len() != 3 {
            return Err(Error::invalid(format!("expected I|J|K, got {s:?}")));
        }
        let mut sets = Vec::with_capacity(3);
        for part in parts {
            let inner = part
                .trim()
                .strip_prefix('{')
                .and_then(|p| p.strip_suffix('}'))
                .ok_or_else(|| Error::invalid(format!("expected {{...}}, got {part:?}")))?;
            let set = inner
                .split(',')
                .filter(|x| !x.trim().is_empty())
                .map(|x| x.trim().parse::<usize>().map_err(|e| Error::invalid(e.to_string())))
                .collect::<Result<Vec<_>>>()?;
            sets.push(set);
        }
        let k = sets.pop().unwrap();
        let j = sets.pop().unwrap();
        let i = sets.pop().unwrap();
        IndexTriple::new(i, j, k)
    }
}

/// Ascending `r`-subsets of `{1..n}` in lexicographic order.
fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for x in start..=n {
            if n - x + 1 < r - cur.len() {
                break;
            }
            cur.push(x);
            go(x + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, r, &mut Vec::with_capacity(r), &mut out);
    out
}

/// `U_r^n` in lexicographic order.
pub fn enumerate_u(n: usize, r: usize) -> Vec<IndexTriple> {
    assert!(1 <= r && r <= n, "need 1 <= r <= n");
    let subsets = combinations(n, r);
    let mut out = Vec::new();
    for i in &subsets {
        for j in &subsets {
            for k in &subsets {
                let t = IndexTriple {
                    i: i.clone(),
                    j: j.clone(),
                    k: k.clone(),
                };
                if t.sum_defect() == 0 {
                    out.push(t);
                }
            }
        }
    }
    out
}

type Memo = RwLock<HashMap<(usize, usize), Arc<Vec<IndexTriple>>>>;

fn memo() -> &'static Memo {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `T_r^n` in lexicographic order. Results are memoized process-wide.
pub fn enumerate_t(n: usize, r: usize) -> Arc<Vec<IndexTriple>> {
    assert!(1 <= r && r <= n, "need 1 <= r <= n");
    if let Some(hit) = memo().read().expect("memo poisoned").get(&(n, r)) {
        return Arc::clone(hit);
    }
    let inner: Vec<Arc<Vec<IndexTriple>>> = (1..r).map(|p| enumerate_t(r, p)).collect();
    let kept: Vec<IndexTriple> = enumerate_u(n, r)
        .into_iter()
        .filter(|t| {
            inner.iter().flat_map(|level| level.iter()).all(|fgh| {
                let p = fgh.size() as i64;
                let pick = |set: &[usize], idx: &[usize]| idx.iter().map(|f| set[f - 1]).sum::<usize>() as i64;
                pick(&t.i, &fgh.i) + pick(&t.j, &fgh.j) <= pick(&t.k, &fgh.k) + p * (p + 1) / 2
            })
        })
        .collect();
    let kept = Arc::new(kept);
    memo()
        .write()
        .expect("memo poisoned")
        .entry((n, r))
        .or_insert_with(|| Arc::clone(&kept))
        .clone()
}

/// Invariant factors `α`, `β`, `γ'` of a candidate product `xy = z'`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HornQuery {
    pub alpha: Vec<Q>,
    pub beta: Vec<Q>,
    pub gamma_prime: Vec<Q>,
}

fn decreasing(v: &[Q]) -> bool {
    v.windows(2).all(|w| w[0] >= w[1])
}

impl HornQuery {
    pub fn new(alpha: Vec<Q>, beta: Vec<Q>, gamma_prime: Vec<Q>) -> Result<Self> {
        let n = alpha.len();
        for v in [&beta, &gamma_prime] {
            if v.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: v.len(),
                });
            }
        }
        if n == 0 {
            return Err(Error::invalid("empty tuples"));
        }
        for (name, v) in [("alpha", &alpha), ("beta", &beta), ("gamma'", &gamma_prime)] {
            if !decreasing(v) {
                return Err(Error::invalid(format!("{name} = {} is not weakly decreasing", fmt_q_tuple(v))));
            }
        }
        Ok(HornQuery {
            alpha,
            beta,
            gamma_prime,
        })
    }

    pub fn from_ints(alpha: &[i64], beta: &[i64], gamma_prime: &[i64]) -> Result<Self> {
        let conv = |v: &[i64]| v.iter().map(|x| q(*x)).collect();
        Self::new(conv(alpha), conv(beta), conv(gamma_prime))
    }

    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    pub fn satisfies_equality(&self) -> bool {
        let s = |v: &[Q]| v.iter().sum::<Q>();
        s(&self.alpha) + s(&self.beta) == s(&self.gamma_prime)
    }

    /// True when the inequality for `t` holds.
    pub fn satisfies(&self, t: &IndexTriple) -> bool {
        let pick = |v: &[Q], idx: &[usize]| idx.iter().map(|i| v[i - 1]).sum::<Q>();
        pick(&self.gamma_prime, &t.k) <= pick(&self.alpha, &t.i) + pick(&self.beta, &t.j)
    }

    /// The first violated inequality, if any, scanning `r = 1..n-1` in order.
    pub fn first_violation(&self) -> Option<IndexTriple> {
        (1..self.n())
            .flat_map(|r| enumerate_t(self.n(), r).iter().cloned().collect::<Vec<_>>())
            .find(|t| !self.satisfies(t))
    }
}

impl fmt::Display for HornQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {}",
            fmt_q_tuple(&self.alpha),
            fmt_q_tuple(&self.beta),
            fmt_q_tuple(&self.gamma_prime)
        )
    }
}

/// Horn's equality plus every inequality over `T_r^n`, `r = 1..n-1`.
pub fn horn_check(q: &HornQuery) -> bool {
    horn_check_with(q, Exec::default())
}

pub fn horn_check_with(query: &HornQuery, exec: Exec) -> bool {
    if !query.satisfies_equality() {
        return false;
    }
    let n = query.n();
    // warm the memo on this thread so the sweep below only reads it
    let levels: Vec<Arc<Vec<IndexTriple>>> = (1..n).map(|r| enumerate_t(n, r)).collect();
    exec.all(&levels, |level| level.iter().all(|t| query.satisfies(t)))
}

/// Settings for [`realizability_oracle`].
#[derive(Clone, Copy, Debug)]
pub struct OracleConfig {
    pub draws: usize,
    /// Largest exponent of `t` used in elementary-operation multipliers.
    pub degree_bound: u32,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            draws: 1000,
            degree_bound: 8,
            seed: 0,
        }
    }
}

/// A random element of `GL_n(k[t])`: a product of row swaps, sign flips and
/// elementary operations `row_a += p(t)·row_b` with small polynomials `p`.
fn random_unimodular(n: usize, degree_bound: u32, precision: Q, rng: &mut ChaCha8Rng) -> SeriesMatrix {
    let mut m = SeriesMatrix::identity(n, precision);
    if n == 1 {
        if rng.gen_bool(0.5) {
            m.set(0, 0, PuiseuxSeries::constant(big(-1), precision));
        }
        return m;
    }
    let steps = rng.gen_range(1..=2 * n);
    for _ in 0..steps {
        let rows = m.rows();
        let a = rng.gen_range(0..n);
        let mut b = rng.gen_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        match rng.gen_range(0..6) {
            0 => {
                let mut rows = rows;
                rows.swap(a, b);
                m = SeriesMatrix::from_rows(rows).expect("square");
            }
            1 => {
                let neg: Vec<PuiseuxSeries> = rows[a].iter().map(|s| s.neg()).collect();
                let mut rows = rows;
                rows[a] = neg;
                m = SeriesMatrix::from_rows(rows).expect("square");
            }
            _ => {
                let low = rng.gen_range(0..=degree_bound);
                let extra = rng.gen_range(0..=1u32);
                let terms = (0..=extra).map(|d| {
                    let mut c = 0i64;
                    while c == 0 {
                        c = rng.gen_range(-3..=3);
                    }
                    (q((low + d) as i64), big(c))
                });
                let p = PuiseuxSeries::from_terms(terms.collect::<Vec<_>>(), precision);
                let mut rows = rows;
                let updated: Vec<PuiseuxSeries> =
                    rows[a].iter().zip(&rows[b]).map(|(x, y)| x.add(&p.mul(y))).collect();
                rows[a] = updated;
                m = SeriesMatrix::from_rows(rows).expect("square");
            }
        }
    }
    m
}

/// Every `γ'` seen among `config.draws` random products `x·y` where `x` has
/// invariant factors `alpha` and `y` has `beta`.
///
/// Writing `x = g₁·D_α·h₁` and `y = g₂·D_β·h₂`, the invariant factors of `xy`
/// are those of `D_α·W·D_β` with `W = h₁g₂` unimodular, so each draw samples
/// `W` as a product of two random unimodular matrices over `k[t]`. Draw `i`
/// uses its own ChaCha stream, so the result does not depend on scheduling.
pub fn attained_products(alpha: &[Q], beta: &[Q], config: &OracleConfig) -> BTreeSet<Vec<Q>> {
    attained_products_with(alpha, beta, config, Exec::default())
}

pub fn attained_products_with(alpha: &[Q], beta: &[Q], config: &OracleConfig, exec: Exec) -> BTreeSet<Vec<Q>> {
    let n = alpha.len();
    let span = alpha.iter().chain(beta).map(|x| x.abs()).max().unwrap_or(q(0));
    // draws whose minors run past this are dropped, which keeps the oracle sound
    let precision = q(16) + span * 4;
    let results = exec.map((0..config.draws).collect::<Vec<_>>(), |draw| {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(draw as u64);
        let w1 = random_unimodular(n, config.degree_bound, precision, &mut rng);
        let w2 = random_unimodular(n, config.degree_bound, precision, &mut rng);
        let w = w1.multiply(&w2).expect("same size");
        // D_α·W·D_β scales entry (i, j) by t^{α_i + β_j}
        let mut product = w;
        for i in 0..n {
            for j in 0..n {
                let e = product.get(i, j).shift(alpha[i] + beta[j]);
                product.set(i, j, e);
            }
        }
        product.invariant_factors_minors_with(Exec::Sequential).ok().map(|f| f.into_vec())
    });
    results.into_iter().flatten().collect()
}

/// Brute-force ground truth for [`horn_check`]: true iff some sampled product
/// with factors `alpha`, `beta` has invariant factors `gamma_prime`.
pub fn realizability_oracle(query: &HornQuery, config: &OracleConfig) -> bool {
    attained_products(&query.alpha, &query.beta, config).contains(&query.gamma_prime)
}

/// The groups for which the representation-variety question is answered.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RepGroup {
    Gl,
    Sl,
}

/// Whether `(α, β, γ)` lies in the tropicalization of `{(x, y, z) : xyz = e}`.
///
/// Since `xy = z⁻¹` and `z⁻¹` has invariant factors `(-γ_n, …, -γ_1)`, this is
/// [`horn_check`] with that `γ'`. For `SL_n` the tuples have `n-1` entries and
/// are completed with `-Σ` so that the determinant has valuation zero.
pub fn rep_variety_membership(group: RepGroup, n: usize, alpha: &[Q], beta: &[Q], gamma: &[Q]) -> Result<bool> {
    let want = match group {
        RepGroup::Gl => n,
        RepGroup::Sl => n - 1,
    };
    for v in [alpha, beta, gamma] {
        if v.len() != want {
            return Err(Error::DimensionMismatch {
                expected: want,
                found: v.len(),
            });
        }
    }
    let complete = |v: &[Q]| {
        let mut out = v.to_vec();
        if group == RepGroup::Sl {
            out.push(-v.iter().sum::<Q>());
        }
        out
    };
    let (a, b, c) = (complete(alpha), complete(beta), complete(gamma));
    let gamma_prime: Vec<Q> = c.iter().rev().map(|x| -x).collect();
    let query = HornQuery::new(a, b, gamma_prime)?;
    Ok(horn_check(&query))
}

/// True when every coordinate is an integer.
pub fn is_integral(v: &[Q]) -> bool {
    v.iter().all(|x| x.is_integer())
}
