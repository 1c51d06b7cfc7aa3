//! Tropical points of the five supported spaces.
//!
//! | space              | coordinates | `val` of a point                         |
//! |--------------------|-------------|------------------------------------------|
//! | `TORUS_n`          | `n`         | coordinatewise valuation                 |
//! | `PUNCTURED_AFFINE_n` | `1`       | least coordinate valuation               |
//! | `GL_n`             | `n`         | invariant factors                        |
//! | `SL_n`             | `n-1`       | the `n-1` largest invariant factors      |
//! | `PGL_n`            | `n-1`       | `α_i - α_n` for `i < n`                  |
//!
//! Families are explored by [`sample_family`], which only ever reports values
//! actually attained by K-points; [`ray_closure`] then recovers the rays
//! through them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::expr::{Assignment, Expression, Variable};
use crate::matrix::SeriesMatrix;
use crate::par::Exec;
use crate::rat::{big, fmt_q_tuple, primitive, q, Q};
use crate::series::{PuiseuxSeries, DEFAULT_PRECISION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpaceKind {
    Torus,
    PuncturedAffine,
    Gl,
    Sl,
    Pgl,
}

impl SpaceKind {
    pub fn name(self) -> &'static str {
        match self {
            SpaceKind::Torus => "TORUS",
            SpaceKind::PuncturedAffine => "PUNCTURED_AFFINE",
            SpaceKind::Gl => "GL",
            SpaceKind::Sl => "SL",
            SpaceKind::Pgl => "PGL",
        }
    }

    pub fn is_matrix_group(self) -> bool {
        matches!(self, SpaceKind::Gl | SpaceKind::Sl | SpaceKind::Pgl)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupSpace {
    pub kind: SpaceKind,
    pub n: usize,
}

impl GroupSpace {
    pub fn new(kind: SpaceKind, n: usize) -> Result<Self> {
        let min = match kind {
            SpaceKind::Sl | SpaceKind::Pgl => 2,
            _ => 1,
        };
        if n < min {
            return Err(Error::invalid(format!("{}_{n} needs n >= {min}", kind.name())));
        }
        Ok(GroupSpace { kind, n })
    }

    pub fn torus(n: usize) -> Self {
        Self::new(SpaceKind::Torus, n).expect("n >= 1")
    }

    pub fn punctured_affine(n: usize) -> Self {
        Self::new(SpaceKind::PuncturedAffine, n).expect("n >= 1")
    }

    pub fn gl(n: usize) -> Self {
        Self::new(SpaceKind::Gl, n).expect("n >= 1")
    }

    pub fn sl(n: usize) -> Self {
        Self::new(SpaceKind::Sl, n).expect("n >= 2")
    }

    pub fn pgl(n: usize) -> Self {
        Self::new(SpaceKind::Pgl, n).expect("n >= 2")
    }

    /// Number of tropical coordinates.
    pub fn dim(&self) -> usize {
        match self.kind {
            SpaceKind::Torus | SpaceKind::Gl => self.n,
            SpaceKind::PuncturedAffine => 1,
            SpaceKind::Sl | SpaceKind::Pgl => self.n - 1,
        }
    }

    /// Number of coordinates of an ambient point: `n` for vectors, `n²` for
    /// matrices.
    pub fn ambient_len(&self) -> usize {
        if self.kind.is_matrix_group() {
            self.n * self.n
        } else {
            self.n
        }
    }

    pub fn origin(&self) -> TropPoint {
        TropPoint {
            coords: vec![q(0); self.dim()],
            space: *self,
        }
    }
}

impl fmt::Display for GroupSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.kind.name(), self.n)
    }
}

impl FromStr for GroupSpace {
    type Err = Error;

    /// `GL_2`, `sl3`, `PGL_3`, `TORUS_2`, `PUNCTURED_AFFINE_2` (case-insensitive,
    /// underscore optional).
    fn from_str(s: &str) -> Result<Self> {
        let upper = s.trim().to_ascii_uppercase();
        let split = upper
            .find(|c: char| c.is_ascii_digit())
            .ok_or_else(|| Error::invalid(format!("space {s:?} has no dimension")))?;
        let (name, digits) = upper.split_at(split);
        let n: usize = digits
            .parse()
            .map_err(|_| Error::invalid(format!("bad dimension in {s:?}")))?;
        let kind = match name.trim_end_matches('_') {
            "TORUS" | "T" => SpaceKind::Torus,
            "PUNCTURED_AFFINE" | "AFFINE" | "A" => SpaceKind::PuncturedAffine,
            "GL" => SpaceKind::Gl,
            "SL" => SpaceKind::Sl,
            "PGL" => SpaceKind::Pgl,
            other => return Err(Error::invalid(format!("unknown space {other:?}"))),
        };
        GroupSpace::new(kind, n)
    }
}

/// A point of the valuation cone of a space. Orders lexicographically by
/// coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TropPoint {
    pub coords: Vec<Q>,
    pub space: GroupSpace,
}

impl TropPoint {
    pub fn new(space: GroupSpace, coords: Vec<Q>) -> Result<Self> {
        if coords.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: coords.len(),
            });
        }
        Ok(TropPoint { coords, space })
    }

    pub fn from_ints(space: GroupSpace, coords: &[i64]) -> Result<Self> {
        Self::new(space, coords.iter().map(|x| q(*x)).collect())
    }

    pub fn is_origin(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn scaled(&self, c: Q) -> Self {
        TropPoint {
            coords: self.coords.iter().map(|x| x * c).collect(),
            space: self.space,
        }
    }
}

impl fmt::Display for TropPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_q_tuple(&self.coords))
    }
}

/// A K̄-point of an ambient space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Point {
    Vector(Vec<PuiseuxSeries>),
    Matrix(SeriesMatrix),
}

impl Point {
    /// The assignment `x[i] ↦ v_i` or `x[i][j] ↦ m_ij`, at the point's
    /// least precision.
    pub fn assignment(&self) -> Assignment {
        match self {
            Point::Vector(v) => {
                let p = v.iter().map(|s| s.precision()).min().unwrap_or(q(DEFAULT_PRECISION));
                let mut a = Assignment::new(p);
                for (i, s) in v.iter().enumerate() {
                    a.set(Variable::Coord(i + 1), s.clone());
                }
                a
            }
            Point::Matrix(m) => {
                let mut a = Assignment::new(m.min_precision());
                for i in 0..m.dim() {
                    for j in 0..m.dim() {
                        a.set(Variable::Entry(i + 1, j + 1), m.get(i, j).clone());
                    }
                }
                a
            }
        }
    }

    /// Applies `f(t) ↦ f(t^c)` to every coordinate.
    pub fn scale_exponents(&self, c: Q) -> Result<Point> {
        Ok(match self {
            Point::Vector(v) => Point::Vector(v.iter().map(|s| s.scale_exponents(c)).collect::<Result<_>>()?),
            Point::Matrix(m) => Point::Matrix(m.try_map_entries(|s| s.scale_exponents(c))?),
        })
    }

    pub fn to_literal(&self) -> String {
        match self {
            Point::Vector(v) => v.iter().map(|s| s.to_literal()).collect::<Vec<_>>().join(", "),
            Point::Matrix(m) => m.to_literal(),
        }
    }
}

fn not_on(space: &GroupSpace, reason: impl Into<String>) -> Error {
    Error::NotOnSpace {
        space: space.to_string(),
        reason: reason.into(),
    }
}

/// The tropical point `val(γ)` of a K̄-point `γ`.
pub fn val_point(space: &GroupSpace, point: &Point) -> Result<TropPoint> {
    val_point_with(space, point, Exec::default())
}

pub fn val_point_with(space: &GroupSpace, point: &Point, exec: Exec) -> Result<TropPoint> {
    let coords = match (space.kind, point) {
        (SpaceKind::Torus | SpaceKind::PuncturedAffine, Point::Vector(v)) => {
            if v.len() != space.n {
                return Err(Error::DimensionMismatch {
                    expected: space.n,
                    found: v.len(),
                });
            }
            if space.kind == SpaceKind::Torus {
                v.iter().map(|s| s.valuation()).collect::<Result<Vec<_>>>()?
            } else {
                vec![least_valuation(v)?]
            }
        }
        (SpaceKind::Gl | SpaceKind::Sl | SpaceKind::Pgl, Point::Matrix(m)) => {
            if m.dim() != space.n {
                return Err(Error::DimensionMismatch {
                    expected: space.n,
                    found: m.dim(),
                });
            }
            let det = m.determinant();
            if det.is_zero_to_precision() {
                // singular, or invertible with det(x) beyond the precision; no way to tell
                return Err(Error::IndeterminateValuation(det.precision()));
            }
            if space.kind == SpaceKind::Sl {
                let diff = det.sub(&PuiseuxSeries::one(det.precision()));
                if !diff.is_zero_to_precision() {
                    return Err(not_on(space, format!("determinant {} is not 1", det.to_literal())));
                }
            }
            let alphas = m.invariant_factors_minors_with(exec)?.into_vec();
            match space.kind {
                SpaceKind::Gl => alphas,
                SpaceKind::Sl => alphas[..space.n - 1].to_vec(),
                _ => {
                    let last = alphas[space.n - 1];
                    alphas[..space.n - 1].iter().map(|a| a - last).collect()
                }
            }
        }
        (_, Point::Vector(_)) => return Err(not_on(space, "expected a matrix")),
        (_, Point::Matrix(_)) => return Err(not_on(space, "expected a vector")),
    };
    Ok(TropPoint { coords, space: *space })
}

/// `min_i ν(x_i)`, refusing to answer when a vanishing coordinate could hide
/// a smaller valuation.
fn least_valuation(v: &[PuiseuxSeries]) -> Result<Q> {
    let known = v.iter().filter_map(|s| s.valuation().ok()).min();
    let floor = v
        .iter()
        .filter(|s| s.is_zero_to_precision())
        .map(|s| s.precision())
        .min();
    match (known, floor) {
        (None, f) => Err(Error::IndeterminateValuation(f.unwrap_or(q(0)))),
        (Some(k), Some(f)) if f < k => Err(Error::IndeterminateValuation(f)),
        (Some(k), _) => Ok(k),
    }
}

/// Membership in the valuation cone of `space`.
pub fn in_valuation_cone(space: &GroupSpace, coords: &[Q]) -> Result<bool> {
    if coords.len() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            found: coords.len(),
        });
    }
    let decreasing = coords.windows(2).all(|w| w[0] >= w[1]);
    Ok(match space.kind {
        SpaceKind::Torus | SpaceKind::PuncturedAffine => true,
        SpaceKind::Gl => decreasing,
        SpaceKind::Sl => {
            let last = coords[coords.len() - 1];
            decreasing && coords.iter().sum::<Q>() + last >= q(0)
        }
        SpaceKind::Pgl => decreasing && coords[coords.len() - 1] >= q(0),
    })
}

/// How a subvariety is given.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VarietyMode {
    /// Generators of the ideal, in `x[i][j]` (matrix spaces) or `x[i]`.
    Ideal(Vec<Expression>),
    /// Ambient coordinates (row-major for matrices) as expressions in
    /// `s1..sm` and `t`.
    Param(Vec<Expression>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarietySpec {
    pub space: GroupSpace,
    pub mode: VarietyMode,
}

impl VarietySpec {
    pub fn ideal(space: GroupSpace, generators: Vec<Expression>) -> Result<Self> {
        for g in &generators {
            if g.mentions_t() {
                return Err(Error::invalid(format!("generator {g} mentions t")));
            }
            for v in g.variables() {
                let ok = match v {
                    Variable::Entry(i, j) => space.kind.is_matrix_group() && i <= space.n && j <= space.n,
                    Variable::Coord(i) => !space.kind.is_matrix_group() && i <= space.n,
                    Variable::Param(_) => false,
                };
                if !ok {
                    return Err(Error::invalid(format!("variable {v} does not belong to {space}")));
                }
            }
        }
        Ok(VarietySpec {
            space,
            mode: VarietyMode::Ideal(generators),
        })
    }

    pub fn param(space: GroupSpace, entries: Vec<Expression>) -> Result<Self> {
        if entries.len() != space.ambient_len() {
            return Err(Error::DimensionMismatch {
                expected: space.ambient_len(),
                found: entries.len(),
            });
        }
        for e in &entries {
            if let Some(v) = e.variables().into_iter().find(|v| !matches!(v, Variable::Param(_))) {
                return Err(Error::invalid(format!("family entry {e} uses {v}; only s1, s2, ... are allowed")));
            }
        }
        Ok(VarietySpec {
            space,
            mode: VarietyMode::Param(entries),
        })
    }

    /// Highest parameter index used by a family (0 for ideals).
    pub fn num_params(&self) -> usize {
        match &self.mode {
            VarietyMode::Ideal(_) => 0,
            VarietyMode::Param(entries) => entries
                .iter()
                .flat_map(|e| e.variables())
                .filter_map(|v| match v {
                    Variable::Param(k) => Some(k),
                    _ => None,
                })
                .max()
                .unwrap_or(0),
        }
    }

    /// The point of a family at the given parameter values.
    pub fn instantiate(&self, params: &[PuiseuxSeries], precision: Q) -> Result<Point> {
        let VarietyMode::Param(entries) = &self.mode else {
            return Err(Error::invalid("instantiate needs a parametrized family"));
        };
        let mut a = Assignment::new(precision);
        for (k, s) in params.iter().enumerate() {
            a.set(Variable::Param(k + 1), s.clone());
        }
        let values = entries.iter().map(|e| e.evaluate(&a)).collect::<Result<Vec<_>>>()?;
        Ok(if self.space.kind.is_matrix_group() {
            Point::Matrix(SeriesMatrix::new(self.space.n, values)?)
        } else {
            Point::Vector(values)
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    OnVariety,
    /// The first generator (0-based) that evaluates to a nonzero series.
    Violated { generator: usize, valuation: Q },
    Inconclusive,
}

/// Evaluates every generator at `point`. Generators that vanish to precision
/// count as zero.
pub fn check_on_variety(generators: &[Expression], point: &Point) -> Result<Membership> {
    let a = point.assignment();
    for (idx, g) in generators.iter().enumerate() {
        let value = g.evaluate(&a)?;
        if let Ok(v) = value.valuation() {
            return Ok(Membership::Violated {
                generator: idx,
                valuation: v,
            });
        }
    }
    Ok(Membership::OnVariety)
}

/// Settings for [`sample_family`]. Each parameter ranges over `0` and the
/// exponents `lo..=hi`.
#[derive(Clone, Debug)]
pub struct SampleConfig {
    pub lo: i64,
    pub hi: i64,
    pub draws_per_cell: usize,
    pub seed: u64,
    pub precision: Q,
    /// Checked against every instantiation when present.
    pub ideal: Option<Vec<Expression>>,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            lo: -4,
            hi: 4,
            draws_per_cell: 2,
            seed: 0,
            precision: q(DEFAULT_PRECISION),
            ideal: None,
        }
    }
}

/// One attained tropical point with the instantiation that produced it.
#[derive(Clone, Debug)]
pub struct Sample {
    pub point: TropPoint,
    pub params: Vec<PuiseuxSeries>,
    pub witness: Point,
}

#[derive(Clone, Debug, Default)]
pub struct SampleReport {
    /// Distinct attained points, sorted by coordinates; each keeps its first
    /// witness in cell order.
    pub samples: Vec<Sample>,
    pub cells: usize,
    pub instantiations: usize,
    /// Instantiations off the ambient space or beyond working precision.
    pub skipped: usize,
    pub ideal_violations: usize,
    pub generators_checked: usize,
}

impl SampleReport {
    pub fn points(&self) -> Vec<TropPoint> {
        self.samples.iter().map(|s| s.point.clone()).collect()
    }
}

enum Outcome {
    Hit(Sample, usize),
    Skip,
    Violation,
}

/// Exponent choice per parameter: `None` is the zero parameter.
fn cells(m: usize, lo: i64, hi: i64) -> Vec<Vec<Option<i64>>> {
    let choices: Vec<Option<i64>> = std::iter::once(None).chain((lo..=hi).map(Some)).collect();
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |c| {
                    let mut p = prefix.clone();
                    p.push(*c);
                    p
                })
            })
            .collect();
    }
    out
}

/// Explores a parametrized family on K-points.
///
/// For every cell (each parameter either `0` or an exponent in `lo..=hi`)
/// the parameters are set to `c·t^e` with `c` a random nonzero integer in
/// `[-100, 100]`, `draws_per_cell` times (once if all parameters are zero).
/// Cell `i` draws from ChaCha stream `i` of the seed, so results do not
/// depend on thread count. Instantiations that are not on the ambient space
/// or run out of precision are skipped and counted.
pub fn sample_family(spec: &VarietySpec, config: &SampleConfig) -> Result<SampleReport> {
    sample_family_with(spec, config, Exec::default())
}

pub fn sample_family_with(spec: &VarietySpec, config: &SampleConfig, exec: Exec) -> Result<SampleReport> {
    if !matches!(spec.mode, VarietyMode::Param(_)) {
        return Err(Error::invalid("sample_family needs a parametrized family"));
    }
    if config.lo > config.hi {
        return Err(Error::invalid(format!("empty box [{}, {}]", config.lo, config.hi)));
    }
    let m = spec.num_params();
    let grid: Vec<(usize, Vec<Option<i64>>)> = cells(m, config.lo, config.hi).into_iter().enumerate().collect();
    let cell_count = grid.len();
    let p = config.precision;

    let per_cell = exec.map(grid, |(index, cell)| {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(index as u64);
        let draws = if cell.iter().all(Option::is_none) {
            1
        } else {
            config.draws_per_cell
        };
        let mut outcomes = Vec::with_capacity(draws);
        for _ in 0..draws {
            let params: Vec<PuiseuxSeries> = cell
                .iter()
                .map(|e| match e {
                    None => PuiseuxSeries::zero(p),
                    Some(e) => {
                        let mut c = 0i64;
                        while c == 0 {
                            c = rng.gen_range(-100..=100);
                        }
                        PuiseuxSeries::monomial(big(c), q(*e), p)
                    }
                })
                .collect();
            outcomes.push(evaluate_cell(spec, config, params, p));
        }
        outcomes
    });

    let mut report = SampleReport {
        cells: cell_count,
        ..SampleReport::default()
    };
    let mut seen: BTreeMap<Vec<Q>, Sample> = BTreeMap::new();
    for outcome in per_cell.into_iter().flatten() {
        report.instantiations += 1;
        match outcome {
            Outcome::Hit(sample, checked) => {
                report.generators_checked += checked;
                seen.entry(sample.point.coords.clone()).or_insert(sample);
            }
            Outcome::Skip => report.skipped += 1,
            Outcome::Violation => report.ideal_violations += 1,
        }
    }
    report.samples = seen.into_values().collect();
    Ok(report)
}

fn evaluate_cell(spec: &VarietySpec, config: &SampleConfig, params: Vec<PuiseuxSeries>, p: Q) -> Outcome {
    let Ok(point) = spec.instantiate(&params, p) else {
        return Outcome::Skip;
    };
    let Ok(trop) = val_point_with(&spec.space, &point, Exec::Sequential) else {
        return Outcome::Skip;
    };
    let mut checked = 0;
    if let Some(ideal) = &config.ideal {
        match check_on_variety(ideal, &point) {
            Ok(Membership::OnVariety) => checked = ideal.len(),
            Ok(_) => return Outcome::Violation,
            Err(_) => return Outcome::Skip,
        }
    }
    Outcome::Hit(
        Sample {
            point: trop,
            params,
            witness: point,
        },
        checked,
    )
}

/// The origin together with the primitive lattice generator of the ray
/// through every nonzero point, sorted and deduplicated. Empty input gives
/// empty output.
pub fn ray_closure(points: &[TropPoint]) -> Result<Vec<TropPoint>> {
    let Some(first) = points.first() else {
        return Ok(Vec::new());
    };
    let space = first.space;
    if points.iter().any(|p| p.space != space) {
        return Err(Error::MixedSpaces);
    }
    let mut out: Vec<TropPoint> = std::iter::once(space.origin())
        .chain(points.iter().filter(|p| !p.is_origin()).map(|p| TropPoint {
            coords: primitive(&p.coords),
            space,
        }))
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Tropicalization of a plane curve in punctured affine 2-space, where the
/// single coordinate is `min(ν(x), ν(y))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveTrop {
    /// `{v ≤ 0}`: the curve misses the origin.
    RayMinus,
    /// Every value: the curve passes through the origin.
    FullCone,
}

impl CurveTrop {
    pub fn contains(&self, v: Q) -> bool {
        match self {
            CurveTrop::RayMinus => v <= q(0),
            CurveTrop::FullCone => true,
        }
    }
}

impl fmt::Display for CurveTrop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurveTrop::RayMinus => "ray-minus",
            CurveTrop::FullCone => "full-cone",
        })
    }
}

/// Classifies `V(f) ⊆ 𝔸² ∖ {0}` by whether `f` vanishes at the origin.
pub fn punctured_curve_classifier(generator: &Expression) -> Result<CurveTrop> {
    if let Some(v) = generator
        .variables()
        .into_iter()
        .find(|v| !matches!(v, Variable::Coord(1) | Variable::Coord(2)))
    {
        return Err(Error::invalid(format!("plane curves use x and y only, found {v}")));
    }
    let poly = generator.expand()?;
    if poly.is_zero() {
        return Err(Error::invalid("the zero polynomial does not define a curve"));
    }
    if poly.as_constant().is_some() {
        return Err(Error::invalid("a nonzero constant defines the empty set"));
    }
    Ok(if poly.constant_term().is_zero() {
        CurveTrop::FullCone
    } else {
        CurveTrop::RayMinus
    })
}

/// `c·t^e` as a series, for tests and witnesses.
pub fn monomial(c: i64, e: i64, precision: Q) -> PuiseuxSeries {
    PuiseuxSeries::monomial(BigRational::from_integer(BigInt::from(c)), q(e), precision)
}
