use serde::Serialize;
use sphtrop::rat::fmt_q;
use sphtrop::{GroupSpace, TropPoint, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// One tropical point, with the K̄-point that attains it when known.
#[derive(Clone, Debug, Serialize)]
pub struct PointRecord {
    pub space: String,
    pub coords: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub generators_checked: usize,
}

impl PointRecord {
    pub fn new(point: &TropPoint, witness: Option<String>, generators_checked: usize) -> Self {
        PointRecord {
            space: point.space.to_string(),
            coords: strings(&point.coords),
            witness,
            generators_checked,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleMeta {
    pub space: String,
    pub seed: u64,
    #[serde(rename = "box")]
    pub exponent_box: [i64; 2],
    pub draws: usize,
    pub precision: String,
    pub cells: usize,
    pub instantiations: usize,
    pub skipped: usize,
    pub ideal_violations: usize,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Document {
    Val {
        points: Vec<PointRecord>,
    },
    Sample {
        meta: SampleMeta,
        points: Vec<PointRecord>,
    },
    Snf {
        space: String,
        left: String,
        diagonal: String,
        right: String,
        invariant_factors: Vec<String>,
        minor_method: Vec<String>,
        agree: bool,
        reproduces: bool,
    },
    Check {
        space: String,
        verdict: &'static str,
        #[serde(skip_serializing_if = "Option::is_none")]
        generator: Option<String>,
        #[serde(skip_serializing_if = "Option::is_none")]
        valuation: Option<String>,
        generators_checked: usize,
    },
    HornEnumerate {
        n: usize,
        r: usize,
        triples: Vec<String>,
    },
    HornCheck {
        alpha: Vec<String>,
        beta: Vec<String>,
        gamma: Vec<String>,
        holds: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        violation: Option<String>,
    },
    Cone {
        space: String,
        coords: Vec<String>,
        member: bool,
    },
    Classify {
        curve: String,
        trop: String,
    },
}

/// What a subcommand produced, in every format it supports.
pub struct Output {
    pub document: Document,
    pub text: String,
    /// Present for commands that emit point clouds.
    pub csv: Option<String>,
}

impl Output {
    pub fn render(&self, format: Format) -> Option<String> {
        match format {
            Format::Text => Some(self.text.clone()),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.document).expect("documents serialize");
                s.push('\n');
                Some(s)
            }
            Format::Csv => self.csv.clone(),
        }
    }
}

pub fn strings(xs: &[Q]) -> Vec<String> {
    xs.iter().map(fmt_q).collect()
}

/// `space,alpha1,...,alphaD` followed by one row per point.
pub fn points_csv(space: &GroupSpace, points: &[TropPoint]) -> String {
    let mut out = String::from("space");
    for i in 1..=space.dim() {
        out.push_str(&format!(",alpha{i}"));
    }
    out.push('\n');
    for p in points {
        out.push_str(&p.space.to_string());
        for c in &p.coords {
            out.push(',');
            out.push_str(&fmt_q(c));
        }
        out.push('\n');
    }
    out
}
