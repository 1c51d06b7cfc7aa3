//! SVG scatter plots of 2-D point clouds, read back from the CSV that
//! `sample` writes. Nothing but the CSV goes into the picture, so plotting a
//! saved file twice gives the same bytes.

use std::fmt::Write;

use sphtrop::rat::parse_q;
use sphtrop::trop::SpaceKind;
use sphtrop::{GroupSpace, Q};

use crate::error::{CliError, CliResult};

const SIZE: f64 = 480.0;
const MARGIN: f64 = 48.0;

#[derive(Debug)]
pub struct Cloud {
    pub space: GroupSpace,
    pub points: Vec<(Q, Q)>,
}

pub fn read_csv(name: &str, text: &str) -> CliResult<Cloud> {
    let err = |line: usize, m: String| CliError::input(format!("{name}:{line}: {m}"));
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == "space,alpha1,alpha2" => {}
        Some((i, h)) => return Err(err(i + 1, format!("expected header 'space,alpha1,alpha2', found '{h}'"))),
        None => return Err(err(1, "empty file".into())),
    }
    let mut space: Option<GroupSpace> = None;
    let mut points = Vec::new();
    for (i, line) in lines {
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        let [s, a, b] = cells[..] else {
            return Err(err(i + 1, format!("expected 3 columns, found {}", cells.len())));
        };
        let here: GroupSpace = s.parse().map_err(|e| err(i + 1, format!("{e}")))?;
        match space {
            Some(sp) if sp != here => return Err(err(i + 1, format!("mixed spaces {sp} and {here}"))),
            _ => space = Some(here),
        }
        let coord = |c: &str| parse_q(c).ok_or_else(|| err(i + 1, format!("'{c}' is not a rational")));
        points.push((coord(a)?, coord(b)?));
    }
    let space = space.ok_or_else(|| err(1, "no points to plot".into()))?;
    if space.dim() != 2 {
        return Err(CliError::input(format!("{name}: {space} is {}-dimensional; plot draws 2-D clouds", space.dim())));
    }
    Ok(Cloud { space, points })
}

/// Normals `(a, b)` of the walls `a·α1 + b·α2 = 0` of the valuation cone.
fn walls(space: &GroupSpace) -> Vec<(f64, f64)> {
    match space.kind {
        SpaceKind::Gl => vec![(1.0, -1.0)],
        SpaceKind::Sl => vec![(1.0, -1.0), (1.0, 2.0)],
        SpaceKind::Pgl => vec![(1.0, -1.0), (0.0, 1.0)],
        SpaceKind::Torus | SpaceKind::PuncturedAffine => Vec::new(),
    }
}

fn to_f64(x: &Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

fn tick_step(span: f64) -> f64 {
    let mut step = 1.0;
    for m in [2.0, 2.5, 2.0].iter().cycle() {
        if span / step <= 12.0 {
            return step;
        }
        step *= m;
    }
    unreachable!()
}

pub fn render(cloud: &Cloud) -> String {
    let xs: Vec<(f64, f64)> = cloud.points.iter().map(|(a, b)| (to_f64(a), to_f64(b))).collect();
    let min = xs.iter().flat_map(|(a, b)| [*a, *b]).fold(0.0f64, f64::min).floor() - 1.0;
    let max = xs.iter().flat_map(|(a, b)| [*a, *b]).fold(0.0f64, f64::max).ceil() + 1.0;
    let inner = SIZE - 2.0 * MARGIN;
    let sx = |x: f64| MARGIN + (x - min) / (max - min) * inner;
    let sy = |y: f64| MARGIN + (max - y) / (max - min) * inner;

    let mut s = String::new();
    let w = &mut s;
    writeln!(w, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#).unwrap();
    writeln!(w, "<title>{}: {} points</title>", cloud.space, cloud.points.len()).unwrap();
    writeln!(w, r#"<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>"#).unwrap();
    writeln!(
        w,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{inner}" height="{inner}" fill="none" stroke="#444"/>"##
    )
    .unwrap();

    let step = tick_step(max - min);
    let mut t = (min / step).ceil() * step;
    while t <= max {
        let (x, y) = (sx(t), sy(t));
        writeln!(w, r##"<line x1="{x:.2}" y1="{MARGIN}" x2="{x:.2}" y2="{:.2}" stroke="#eee"/>"##, SIZE - MARGIN).unwrap();
        writeln!(w, r##"<line x1="{MARGIN}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#eee"/>"##, SIZE - MARGIN).unwrap();
        writeln!(
            w,
            r#"<text x="{x:.2}" y="{:.2}" font-size="11" text-anchor="middle">{t}</text>"#,
            SIZE - MARGIN + 16.0
        )
        .unwrap();
        writeln!(
            w,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{t}</text>"#,
            MARGIN - 6.0,
            y + 4.0
        )
        .unwrap();
        t += step;
    }

    let (ox, oy) = (sx(0.0), sy(0.0));
    writeln!(w, r##"<line x1="{MARGIN}" y1="{oy:.2}" x2="{:.2}" y2="{oy:.2}" stroke="#888"/>"##, SIZE - MARGIN).unwrap();
    writeln!(w, r##"<line x1="{ox:.2}" y1="{MARGIN}" x2="{ox:.2}" y2="{:.2}" stroke="#888"/>"##, SIZE - MARGIN).unwrap();

    for (a, b) in walls(&cloud.space) {
        // the wall is spanned by (-b, a); clip it to the square
        let (dx, dy) = (-b, a);
        let reach = |d: f64| if d > 0.0 { max / d } else if d < 0.0 { min / d } else { f64::INFINITY };
        let back = |d: f64| if d > 0.0 { min / d } else if d < 0.0 { max / d } else { f64::NEG_INFINITY };
        let hi = reach(dx).min(reach(dy));
        let lo = back(dx).max(back(dy));
        writeln!(
            w,
            r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#c0392b" stroke-width="1.5" stroke-dasharray="6 4"/>"##,
            sx(lo * dx),
            sy(lo * dy),
            sx(hi * dx),
            sy(hi * dy)
        )
        .unwrap();
    }

    for (a, b) in &xs {
        writeln!(w, r##"<circle cx="{:.2}" cy="{:.2}" r="3" fill="#1f4e79"/>"##, sx(*a), sy(*b)).unwrap();
    }

    writeln!(
        w,
        r#"<text x="{:.2}" y="{:.2}" font-size="13" text-anchor="middle">α1</text>"#,
        SIZE / 2.0,
        SIZE - 10.0
    )
    .unwrap();
    writeln!(
        w,
        r#"<text x="14" y="{:.2}" font-size="13" text-anchor="middle" transform="rotate(-90 14 {:.2})">α2</text>"#,
        SIZE / 2.0,
        SIZE / 2.0
    )
    .unwrap();
    writeln!(
        w,
        r#"<text x="{:.2}" y="24" font-size="14" text-anchor="middle">{}</text>"#,
        SIZE / 2.0,
        cloud.space
    )
    .unwrap();
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_points() {
        let c = read_csv("c", "space,alpha1,alpha2\nGL_2,1,0\nGL_2,-1/2,-1\n").unwrap();
        assert_eq!(c.points.len(), 2);
        assert_eq!(c.space, GroupSpace::gl(2));
    }

    #[test]
    fn rejects_bad_csv() {
        assert!(read_csv("c", "space,alpha1\nGL_1,1\n").is_err());
        assert!(read_csv("c", "space,alpha1,alpha2\nGL_2,1,0\nSL_3,0,0\n").is_err());
        assert!(read_csv("c", "space,alpha1,alpha2\nGL_2,x,0\n").unwrap_err().to_string().contains("c:2"));
    }

    #[test]
    fn draws_one_wall_for_gl2() {
        let c = read_csv("c", "space,alpha1,alpha2\nGL_2,2,-1\n").unwrap();
        let svg = render(&c);
        assert_eq!(svg.matches("stroke-dasharray").count(), 1);
        assert_eq!(svg.matches("<circle").count(), 1);
        // the wall α1 = α2 runs corner to corner of the square
        assert!(svg.contains(r#"x1="48.00" y1="432.00" x2="432.00" y2="48.00""#), "{svg}");
    }

    #[test]
    fn tick_steps() {
        assert_eq!(tick_step(8.0), 1.0);
        assert_eq!(tick_step(20.0), 2.0);
        assert_eq!(tick_step(50.0), 5.0);
        assert_eq!(tick_step(100.0), 10.0);
    }
}
