//! Job files: a `key: value` header where any value may continue on
//! indented lines. Payload values use the expression and matrix grammars.
//!
//! ```text
//! # the line {x22 = 0} in GL_2
//! space: GL_2
//! mode: family-sweep
//! params: s1
//! box: -4..4
//! family:
//!     s1 + 1, s1;
//!     s1, 0
//! ```

use std::collections::BTreeMap;
use std::fmt::Display;
use std::str::FromStr;

use sphtrop::expr::{parse, parse_list, parse_matrix, Variable};
use sphtrop::rat::{parse_q, parse_q_tuple, q};
use sphtrop::trop::Point;
use sphtrop::{Assignment, Error, Expression, GroupSpace, SeriesMatrix, DEFAULT_PRECISION, Q};

use crate::error::{CliError, CliResult};

pub const KEYS: &[&str] = &[
    "space",
    "mode",
    "precision",
    "box",
    "draws",
    "seed",
    "point",
    "generators",
    "family",
    "params",
    "coords",
    "curve",
    "alpha",
    "beta",
    "gamma",
];

pub const MODES: &[&str] = &["point", "ideal-check", "family-sweep", "horn", "cone", "classify"];

#[derive(Clone, Debug)]
struct Segment {
    at: usize,
    line: usize,
    col: usize,
}

#[derive(Clone, Debug)]
enum Source {
    File(String),
    Flag,
}

#[derive(Clone, Debug)]
pub struct Field {
    pub key: String,
    pub value: String,
    line: usize,
    source: Source,
    segments: Vec<Segment>,
}

impl Field {
    fn flag(key: &str, value: &str) -> Self {
        Field {
            key: key.to_string(),
            value: value.to_string(),
            line: 0,
            source: Source::Flag,
            segments: vec![Segment { at: 0, line: 0, col: 1 }],
        }
    }

    fn push(&mut self, text: &str, line: usize, col: usize) {
        if !self.value.is_empty() {
            self.value.push('\n');
        }
        self.segments.push(Segment {
            at: self.value.len(),
            line,
            col,
        });
        self.value.push_str(text);
    }

    /// `file:line:col` for a byte offset into the value, or the flag name and
    /// column for values given on the command line.
    pub fn locate(&self, offset: usize) -> String {
        match &self.source {
            Source::Flag => format!("--{} column {}", self.key, offset + 1),
            Source::File(name) => match self.segments.iter().rev().find(|s| s.at <= offset) {
                Some(seg) => format!("{name}:{}:{}", seg.line, seg.col + (offset - seg.at)),
                None => format!("{name}:{}:1", self.line),
            },
        }
    }

    pub fn error(&self, offset: usize, message: impl Display) -> CliError {
        CliError::input(format!("{}: {message}", self.locate(offset)))
    }

    pub fn core_error(&self, e: Error, precision: Q) -> CliError {
        match e {
            Error::Parse { offset, message } => self.error(offset, message),
            other => core_error(other, precision),
        }
    }

    pub fn expression(&self) -> CliResult<Expression> {
        parse(&self.value).map_err(|e| self.core_error(e, q(DEFAULT_PRECISION)))
    }

    pub fn expressions(&self) -> CliResult<Vec<Expression>> {
        parse_list(&self.value).map_err(|e| self.core_error(e, q(DEFAULT_PRECISION)))
    }

    pub fn matrix(&self) -> CliResult<Vec<Vec<Expression>>> {
        parse_matrix(&self.value).map_err(|e| self.core_error(e, q(DEFAULT_PRECISION)))
    }

    pub fn tuple(&self) -> CliResult<Vec<Q>> {
        parse_q_tuple(&self.value).ok_or_else(|| self.error(0, "expected comma separated rationals such as 3, -1/2"))
    }
}

/// Maps a library error that carries no source position.
pub fn core_error(e: Error, precision: Q) -> CliError {
    if e.is_precision_exhaustion() {
        CliError::Precision {
            message: e.to_string(),
            precision,
        }
    } else {
        CliError::input(e.to_string())
    }
}

#[derive(Clone, Debug, Default)]
pub struct Job {
    fields: BTreeMap<String, Field>,
}

impl Job {
    pub fn parse(name: &str, text: &str) -> CliResult<Job> {
        let mut job = Job::default();
        let mut current: Option<String> = None;
        let at = |line: usize, col: usize, m: String| CliError::input(format!("{name}:{line}:{col}: {m}"));
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let indent = raw.len() - raw.trim_start().len();
            if indent > 0 {
                let Some(key) = &current else {
                    return Err(at(line, indent + 1, "indented payload line before any key".into()));
                };
                let field = job.fields.get_mut(key).expect("current key is stored");
                field.push(raw.trim_end().trim_start(), line, indent + 1);
                continue;
            }
            let Some(colon) = raw.find(':') else {
                return Err(at(line, 1, "expected 'key: value'".into()));
            };
            let key = raw[..colon].trim();
            if !KEYS.contains(&key) {
                return Err(at(line, 1, format!("unknown key '{key}' (known keys: {})", KEYS.join(", "))));
            }
            if job.fields.contains_key(key) {
                return Err(at(line, 1, format!("duplicate key '{key}'")));
            }
            let rest = &raw[colon + 1..];
            let lead = rest.len() - rest.trim_start().len();
            let mut field = Field {
                key: key.to_string(),
                value: String::new(),
                line,
                source: Source::File(name.to_string()),
                segments: Vec::new(),
            };
            if !rest.trim().is_empty() {
                field.push(rest.trim(), line, colon + lead + 2);
            }
            job.fields.insert(key.to_string(), field);
            current = Some(key.to_string());
        }
        if let Some(f) = job.fields.values().find(|f| f.value.is_empty()) {
            return Err(at(f.line, 1, format!("'{}' has no value", f.key)));
        }
        if let Some(mode) = job.get("mode") {
            if !MODES.contains(&mode.value.as_str()) {
                return Err(mode.error(0, format!("unknown mode '{}' (one of {})", mode.value, MODES.join(", "))));
            }
        }
        Ok(job)
    }

    /// Sets a value from a command-line flag, replacing any value from the
    /// job file.
    pub fn set_flag(&mut self, key: &str, value: Option<&str>) {
        if let Some(v) = value {
            self.fields.insert(key.to_string(), Field::flag(key, v));
        }
    }

    pub fn get(&self, key: &str) -> Option<&Field> {
        self.fields.get(key)
    }

    pub fn require(&self, key: &str) -> CliResult<&Field> {
        self.get(key)
            .ok_or_else(|| CliError::input(format!("missing '{key}' (give it in the job file or as --{key})")))
    }

    /// A job declares at most one mode, and it must be the one the
    /// subcommand runs.
    pub fn expect_mode(&self, mode: &str) -> CliResult<()> {
        match self.get("mode") {
            Some(f) if f.value != mode => Err(f.error(0, format!("this is a '{}' job, the subcommand needs '{mode}'", f.value))),
            _ => Ok(()),
        }
    }

    fn parsed<T: FromStr>(&self, key: &str, what: &str) -> CliResult<Option<T>> {
        match self.get(key) {
            None => Ok(None),
            Some(f) => f.value.trim().parse().map(Some).map_err(|_| f.error(0, format!("expected {what}"))),
        }
    }

    pub fn space(&self) -> CliResult<GroupSpace> {
        let f = self.require("space")?;
        f.value.parse().map_err(|e: Error| f.error(0, e))
    }

    pub fn space_or(&self, default: GroupSpace) -> CliResult<GroupSpace> {
        if self.get("space").is_some() {
            self.space()
        } else {
            Ok(default)
        }
    }

    pub fn precision(&self) -> CliResult<Q> {
        match self.get("precision") {
            None => Ok(q(DEFAULT_PRECISION)),
            Some(f) => match parse_q(&f.value) {
                Some(p) if p > q(0) => Ok(p),
                _ => Err(f.error(0, "precision must be a positive rational")),
            },
        }
    }

    /// `lo..hi` or `lo, hi`; defaults to `-4..4`.
    pub fn exponent_box(&self) -> CliResult<(i64, i64)> {
        let Some(f) = self.get("box") else {
            return Ok((-4, 4));
        };
        let text = f.value.trim();
        let parts = text.split_once("..").or_else(|| text.split_once(','));
        let bounds = parts.and_then(|(a, b)| Some((a.trim().parse::<i64>().ok()?, b.trim().parse::<i64>().ok()?)));
        match bounds {
            Some((lo, hi)) if lo <= hi && hi - lo <= 64 => Ok((lo, hi)),
            Some(_) => Err(f.error(0, "box needs lo <= hi and at most 65 exponents")),
            None => Err(f.error(0, "expected a box like -4..4")),
        }
    }

    pub fn draws(&self) -> CliResult<usize> {
        match self.parsed::<usize>("draws", "a positive integer")? {
            Some(0) => Err(self.require("draws")?.error(0, "draws must be positive")),
            Some(d) => Ok(d),
            None => Ok(2),
        }
    }

    pub fn seed(&self) -> CliResult<u64> {
        Ok(self.parsed("seed", "an unsigned integer")?.unwrap_or(0))
    }

    /// The `point` payload evaluated as a point of `space`.
    pub fn point(&self, space: &GroupSpace, precision: Q) -> CliResult<Point> {
        let f = self.require("point")?;
        let a = Assignment::new(precision);
        let eval = |e: &Expression| e.evaluate(&a).map_err(|err| f.core_error(err, precision));
        if space.kind.is_matrix_group() {
            let rows = f.matrix()?;
            let values = rows.iter().map(|r| r.iter().map(eval).collect()).collect::<CliResult<Vec<Vec<_>>>>()?;
            let m = SeriesMatrix::from_rows(values).map_err(|e| f.core_error(e, precision))?;
            Ok(Point::Matrix(m))
        } else {
            Ok(Point::Vector(f.expressions()?.iter().map(eval).collect::<CliResult<_>>()?))
        }
    }

    /// The `family` payload, row-major for matrix spaces, with its
    /// parameters checked against `params`.
    pub fn family(&self, space: &GroupSpace) -> CliResult<Vec<Expression>> {
        let f = self.require("family")?;
        let entries: Vec<Expression> = if space.kind.is_matrix_group() {
            f.matrix()?.into_iter().flatten().collect()
        } else {
            f.expressions()?
        };
        let mut used: Vec<usize> = entries
            .iter()
            .flat_map(|e| e.variables())
            .filter_map(|v| match v {
                Variable::Param(k) => Some(k),
                _ => None,
            })
            .collect();
        used.sort_unstable();
        used.dedup();
        let declared = self.params()?;
        for k in &used {
            if !declared.contains(k) {
                return Err(f.error(0, format!("parameter s{k} is not declared in 'params'")));
            }
        }
        if let Some(k) = declared.iter().find(|k| !used.contains(k)) {
            return Err(self.require("params")?.error(0, format!("declared parameter s{k} is not used by the family")));
        }
        if used.iter().enumerate().any(|(i, k)| *k != i + 1) {
            return Err(f.error(0, "parameters must be numbered s1, s2, ... without gaps"));
        }
        Ok(entries)
    }

    fn params(&self) -> CliResult<Vec<usize>> {
        let Some(f) = self.get("params") else {
            return Ok(Vec::new());
        };
        let mut out = Vec::new();
        for e in f.expressions()? {
            match e {
                Expression::Var(Variable::Param(k)) if !out.contains(&k) => out.push(k),
                Expression::Var(Variable::Param(k)) => return Err(f.error(0, format!("s{k} is declared twice"))),
                other => return Err(f.error(0, format!("'{other}' is not a parameter name"))),
            }
        }
        Ok(out)
    }
}
