//! Draws a track family as three horizontal lanes, track 1 on top, over an
//! integer axis from `-(n+1)` to `n+1`.
//!
//! Text mode prints one row per drawn member per lane. A segment `(lo, hi)`
//! is drawn as `(` at `lo`, `)` at `hi` and `-` in between; the parentheses
//! mark excluded endpoints. SVG mode emits one `<rect>` per segment.

use std::fmt::Write as _;

use thiserror::Error;

use crate::intervals::{Member, Tag, TrackFamily, VertexClass, TRACKS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("scale must be positive")]
    InvalidScale,
    #[error("{tag} track {track} leaves the axis range [-{bound}, {bound}]")]
    OutOfRange { tag: Tag, track: usize, bound: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Text,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderSpec {
    pub format: RenderFormat,
    /// Pixels per axis unit (SVG only).
    pub scale: u32,
    /// Draw one row per literal instead of one per copy.
    pub collapse_copies: bool,
}

impl Default for RenderSpec {
    fn default() -> Self {
        Self {
            format: RenderFormat::Text,
            scale: 40,
            collapse_copies: true,
        }
    }
}

/// Characters per axis unit in text mode.
const CELL: usize = 4;
/// Room left of the axis origin for tick labels.
const MARGIN: usize = 3;

struct Row {
    label: String,
    member: Member,
}

fn label(tag: &Tag, with_copy: bool) -> String {
    match (tag, with_copy) {
        (Tag::Pos { var, copy }, true) => format!("x{var}.{copy}"),
        (Tag::Neg { var, copy }, true) => format!("~x{var}.{copy}"),
        _ => tag.class().to_string(),
    }
}

/// Rows in family order. When collapsing, a copy is dropped only if an
/// earlier member of its class has the same geometry.
fn rows(family: &TrackFamily, collapse: bool) -> Vec<Row> {
    let mut out: Vec<Row> = Vec::new();
    let mut shown: Vec<(VertexClass, Member)> = Vec::new();
    for member in family.members() {
        let class = member.tag.class();
        if collapse {
            let same_class = shown.iter().filter(|(c, _)| *c == class).count();
            if shown
                .iter()
                .any(|(c, m)| *c == class && m.interval == member.interval)
            {
                continue;
            }
            shown.push((class, *member));
            out.push(Row {
                label: label(&member.tag, same_class > 0),
                member: *member,
            });
        } else {
            out.push(Row {
                label: label(&member.tag, true),
                member: *member,
            });
        }
    }
    out
}

fn check_range(family: &TrackFamily, rows: &[Row]) -> Result<(), RenderError> {
    let bound = family.coordinate_bound();
    for row in rows {
        for (idx, t) in row.member.interval.tracks().iter().enumerate() {
            if t.lo() < -bound || t.hi() > bound {
                return Err(RenderError::OutOfRange {
                    tag: row.member.tag,
                    track: idx + 1,
                    bound,
                });
            }
        }
    }
    Ok(())
}

pub fn render(family: &TrackFamily, spec: &RenderSpec) -> Result<String, RenderError> {
    if spec.scale == 0 {
        return Err(RenderError::InvalidScale);
    }
    let rows = rows(family, spec.collapse_copies);
    check_range(family, &rows)?;
    Ok(match spec.format {
        RenderFormat::Text => render_text(family, &rows),
        RenderFormat::Svg => render_svg(family, &rows, spec.scale),
    })
}

fn render_text(family: &TrackFamily, rows: &[Row]) -> String {
    let bound = family.coordinate_bound();
    let col = |x: i64| MARGIN + (x + bound) as usize * CELL;
    let width = col(bound) + 1;
    let label_width = rows.iter().map(|r| r.label.len()).max().unwrap_or(0).max(5);
    let pad = " ".repeat(label_width + 1);

    let mut numbers = vec![' '; width];
    let mut ticks = vec![' '; width];
    for x in -bound..=bound {
        let text = x.to_string();
        let start = col(x) + 1 - text.len();
        for (offset, ch) in text.chars().enumerate() {
            numbers[start + offset] = ch;
        }
        ticks[col(x)] = '|';
    }
    let numbers: String = numbers.into_iter().collect();
    let ticks: String = ticks.into_iter().collect();

    let mut out = String::new();
    for track in 1..=TRACKS {
        if track > 1 {
            out.push('\n');
        }
        let _ = writeln!(out, "track {track}");
        let _ = writeln!(out, "{pad}{}", numbers.trim_end());
        let _ = writeln!(out, "{pad}{}", ticks.trim_end());
        for row in rows {
            let seg = row.member.interval.track(track);
            let mut line = vec![' '; width];
            let (lo, hi) = (col(seg.lo()), col(seg.hi()));
            line[lo] = '(';
            line[hi] = ')';
            for cell in &mut line[lo + 1..hi] {
                *cell = '-';
            }
            let line: String = line.into_iter().collect();
            let _ = writeln!(out, "{:<label_width$} {}", row.label, line.trim_end());
        }
    }
    out
}

fn render_svg(family: &TrackFamily, rows: &[Row], scale: u32) -> String {
    let bound = family.coordinate_bound();
    let scale = i64::from(scale);
    let row_height = 18i64;
    let left = 70i64;
    let axis_height = 30i64;
    let lane_height = axis_height + row_height * rows.len() as i64 + 20;
    let width = left + 2 * bound * scale + 20;
    let height = lane_height * TRACKS as i64;
    let x_of = |x: i64| left + (x + bound) * scale;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="monospace" font-size="12">"#
    );
    for track in 1..=TRACKS {
        let top = (track as i64 - 1) * lane_height;
        let axis_y = top + axis_height - 8;
        let _ = writeln!(out, r#"<g class="track" data-track="{track}">"#);
        let _ = writeln!(out, r#"<text x="4" y="{}">track {track}</text>"#, top + 14);
        let _ = writeln!(
            out,
            r##"<line x1="{}" y1="{axis_y}" x2="{}" y2="{axis_y}" stroke="#888"/>"##,
            x_of(-bound),
            x_of(bound)
        );
        for x in -bound..=bound {
            let _ = writeln!(
                out,
                r##"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="#888"/><text x="{0}" y="{3}" text-anchor="middle">{x}</text>"##,
                x_of(x),
                axis_y - 3,
                axis_y + 3,
                axis_y - 6
            );
        }
        for (idx, row) in rows.iter().enumerate() {
            let seg = row.member.interval.track(track);
            let y = top + axis_height + row_height * idx as i64;
            let _ = writeln!(
                out,
                r#"<text x="4" y="{}">{}</text>"#,
                y + 11,
                escape(&row.label)
            );
            let fill = if row.member.tag.is_clause() {
                "#d62728"
            } else {
                "#1f77b4"
            };
            let _ = writeln!(
                out,
                r#"<rect class="segment" x="{}" y="{}" width="{}" height="10" rx="5" fill="{fill}"/>"#,
                x_of(seg.lo()),
                y + 2,
                (seg.hi() - seg.lo()) * scale
            );
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::sample_csat;
    use crate::intervals::OpenInterval;
    use crate::reductions::construct_tracks;

    #[test]
    fn empty_family_draws_axes_only() {
        let f = TrackFamily::new(0, 0, vec![]).unwrap();
        let text = render(&f, &RenderSpec::default()).unwrap();
        assert_eq!(text.lines().count(), 3 * 3 + 2);
        assert!(text.contains("-1   0   1"));
        assert!(!text.contains('('));
    }

    #[test]
    fn collapsed_rows_per_lane() {
        let f = construct_tracks(&sample_csat()).unwrap();
        let text = render(&f, &RenderSpec::default()).unwrap();
        let rows = text.lines().filter(|l| l.contains('(')).count();
        assert_eq!(rows, 3 * 12);
        let expanded = render(
            &f,
            &RenderSpec {
                collapse_copies: false,
                ..RenderSpec::default()
            },
        )
        .unwrap();
        assert_eq!(
            expanded.lines().filter(|l| l.contains('(')).count(),
            3 * 100
        );
    }

    #[test]
    fn svg_has_one_rect_per_segment() {
        let f = construct_tracks(&sample_csat()).unwrap();
        let spec = RenderSpec {
            format: RenderFormat::Svg,
            ..RenderSpec::default()
        };
        let svg = render(&f, &spec).unwrap();
        assert_eq!(svg.matches("<rect").count(), 3 * 12);
        assert!(svg.starts_with("<svg"));
    }

    #[test]
    fn rejects_zero_scale_and_out_of_range() {
        let f = construct_tracks(&sample_csat()).unwrap();
        let spec = RenderSpec {
            scale: 0,
            ..RenderSpec::default()
        };
        assert_eq!(render(&f, &spec).unwrap_err(), RenderError::InvalidScale);
        let wide = f
            .with_replaced_track(&Tag::Clause(1), 2, OpenInterval::new(-9, 1).unwrap())
            .unwrap();
        assert!(matches!(
            render(&wide, &RenderSpec::default()).unwrap_err(),
            RenderError::OutOfRange {
                track: 2,
                bound: 5,
                ..
            }
        ));
    }

    #[test]
    fn diverging_copy_gets_its_own_row() {
        let f = construct_tracks(&sample_csat()).unwrap();
        let tag = Tag::Pos { var: 1, copy: 5 };
        let moved = f
            .with_replaced_track(&tag, 3, OpenInterval::new(-2, -1).unwrap())
            .unwrap();
        let text = render(&moved, &RenderSpec::default()).unwrap();
        assert!(text.contains("x1.5"));
    }
}
