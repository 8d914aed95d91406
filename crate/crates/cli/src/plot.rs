//! Figure emission: parse a sweep CSV and render a panel-per-branch SVG
//! with theory curves, measurement markers, and error bars.

use quncert::infotheory::{uncertainty_report, DeltaVariant};
use quncert::states::{bell_diagonal_state, mub_qubit, StateParams};

use crate::sweep::SWEEP_SCHEMA;
use crate::CliError;

/// Parsed sweep CSV.
#[derive(Debug, Clone)]
pub struct SweepTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl SweepTable {
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, idx: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[idx]).collect()
    }
}

/// Parse the sweep CSV format: schema comment line, header, float rows.
pub fn parse_sweep_csv(text: &str) -> Result<SweepTable, CliError> {
    let bad = |msg: String| CliError::MalformedCsv(msg);
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let first = lines.next().ok_or_else(|| bad("empty file".into()))?;
    if !first.trim_start().starts_with('#') || !first.contains(SWEEP_SCHEMA) {
        return Err(bad(format!(
            "missing schema comment line `# schema: {SWEEP_SCHEMA}`"
        )));
    }
    let header = lines.next().ok_or_else(|| bad("missing header row".into()))?;
    let columns: Vec<String> = header.split(',').map(|c| c.trim().to_string()).collect();
    if columns.first().map(String::as_str) != Some("theta_deg")
        || columns.get(1).map(String::as_str) != Some("p")
    {
        return Err(bad("header must start with theta_deg,p".into()));
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim_start().starts_with('#') {
            continue;
        }
        let row: Result<Vec<f64>, _> = line.split(',').map(|v| v.trim().parse::<f64>()).collect();
        let row = row.map_err(|e| bad(format!("data row {}: {e}", i + 1)))?;
        if row.len() != columns.len() {
            return Err(bad(format!(
                "data row {}: {} fields, expected {}",
                i + 1,
                row.len(),
                columns.len()
            )));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(bad("no data rows".into()));
    }
    Ok(SweepTable { columns, rows })
}

fn distinct(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

struct PanelSeries {
    name: &'static str,
    theory: Vec<(f64, f64)>,
    points: Vec<(f64, f64, Option<f64>)>,
}

struct Panel {
    tag: String,
    title: String,
    x_label: String,
    series: Vec<PanelSeries>,
}

const EUR_QUANTITIES: [&str; 3] = ["elhs", "erhs1", "erhs2"];
const CUR_QUANTITIES: [&str; 3] = ["clhs", "crhs1", "crhs2"];

fn theory_value(name: &str, p: f64, theta: f64) -> f64 {
    let rho = bell_diagonal_state(StateParams::new(p, theta).unwrap()).unwrap();
    let rep = uncertainty_report(&rho, &mub_qubit(), DeltaVariant::Consistent).unwrap();
    match name {
        "elhs" => rep.elhs,
        "erhs1" => rep.erhs1,
        "erhs2" => rep.erhs2,
        "clhs" => rep.clhs,
        "crhs1" => rep.crhs1,
        "crhs2" => rep.crhs2,
        _ => f64::NAN,
    }
}

fn build_panels(table: &SweepTable) -> Result<Vec<Panel>, CliError> {
    let theta_idx = 0;
    let p_idx = 1;
    let thetas = distinct(&table.column(theta_idx));
    let ps = distinct(&table.column(p_idx));
    // The sweep axis is whichever parameter actually varies.
    let theta_is_x = thetas.len() >= ps.len();
    let (x_idx, branch_values, x_label) = if theta_is_x {
        (theta_idx, ps, "theta (deg)".to_string())
    } else {
        (p_idx, thetas, "p".to_string())
    };
    let branch_idx = if theta_is_x { p_idx } else { theta_idx };

    let mut panels = Vec::new();
    for (bi, &branch) in branch_values.iter().enumerate() {
        let mut rows: Vec<&Vec<f64>> = table
            .rows
            .iter()
            .filter(|r| r[branch_idx] == branch)
            .collect();
        rows.sort_by(|a, b| a[x_idx].total_cmp(&b[x_idx]));
        let x_lo = rows.first().unwrap()[x_idx];
        let x_hi = rows.last().unwrap()[x_idx];
        let dense: Vec<f64> = (0..=120)
            .map(|k| x_lo + (x_hi - x_lo) * k as f64 / 120.0)
            .collect();

        let branch_label = if theta_is_x {
            format!("p = {branch}")
        } else {
            format!("theta = {branch} deg")
        };
        let letter = char::from(b'a' + (bi % 26) as u8);
        for (pi, quantities) in [EUR_QUANTITIES, CUR_QUANTITIES].iter().enumerate() {
            let mut series = Vec::new();
            for &name in quantities.iter() {
                let col = table
                    .column_index(name)
                    .ok_or_else(|| CliError::MalformedCsv(format!("missing column {name}")))?;
                let std_col = table.column_index(&format!("{name}_std"));
                let points = rows
                    .iter()
                    .map(|r| (r[x_idx], r[col], std_col.map(|s| r[s])))
                    .collect();
                let theory = dense
                    .iter()
                    .map(|&x| {
                        let (p, theta) = if theta_is_x { (branch, x) } else { (x, branch) };
                        (x, theory_value(name, p, theta))
                    })
                    .collect();
                series.push(PanelSeries {
                    name,
                    theory,
                    points,
                });
            }
            panels.push(Panel {
                tag: format!("({letter}{})", pi + 1),
                title: format!(
                    "{} {} [{branch_label}]",
                    if pi == 0 { "uncertainty" } else { "coherence" },
                    "vs sweep axis",
                ),
                x_label: x_label.clone(),
                series,
            });
        }
    }
    Ok(panels)
}

const SERIES_COLORS: [(&str, &str); 6] = [
    ("elhs", "#7b2d8b"),
    ("erhs1", "#8b5a2b"),
    ("erhs2", "#e07b00"),
    ("clhs", "#7b2d8b"),
    ("crhs1", "#8b5a2b"),
    ("crhs2", "#e07b00"),
];

fn color_of(name: &str) -> &'static str {
    SERIES_COLORS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, c)| *c)
        .unwrap_or("#333333")
}

fn marker_svg(name: &str, x: f64, y: f64) -> String {
    let color = color_of(name);
    let class = format!("marker marker-{name}");
    match name {
        // Squares for measured LHS, diamonds for the base bound, triangles
        // for the strengthened bound, mirroring the figure conventions.
        "elhs" | "clhs" => format!(
            r##"<rect class="{class}" x="{:.2}" y="{:.2}" width="7" height="7" fill="{color}"/>"##,
            x - 3.5,
            y - 3.5
        ),
        "erhs1" | "crhs1" => format!(
            r##"<polygon class="{class}" points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="{color}"/>"##,
            x, y - 4.5, x + 4.5, y, x, y + 4.5, x - 4.5, y
        ),
        _ => format!(
            r##"<polygon class="{class}" points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="{color}"/>"##,
            x, y - 4.5, x + 4.0, y + 3.5, x - 4.0, y + 3.5
        ),
    }
}

/// Render the four-panel (two per branch) figure as an SVG document.
pub fn render_svg(table: &SweepTable) -> Result<String, CliError> {
    let panels = build_panels(table)?;
    let cols = 2usize;
    let rows = panels.len().div_ceil(cols);
    let (pw, ph) = (430.0, 300.0);
    let (ml, mt) = (60.0, 40.0);
    let width = cols as f64 * pw + 40.0;
    let height = rows as f64 * ph + 30.0;

    let mut svg = String::new();
    svg.push_str(&format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#,
    ));
    svg.push('\n');
    svg.push_str(r#"<style>text { font-family: sans-serif; font-size: 11px; } .tag { font-size: 14px; font-weight: bold; }</style>"#);
    svg.push('\n');
    svg.push_str(&format!(
        r#"<rect x="0" y="0" width="{width:.0}" height="{height:.0}" fill="white"/>"#
    ));
    svg.push('\n');

    for (pi, panel) in panels.iter().enumerate() {
        let ox = (pi % cols) as f64 * pw + ml;
        let oy = (pi / cols) as f64 * ph + mt;
        let (aw, ah) = (pw - 110.0, ph - 80.0);

        let mut y_lo = f64::INFINITY;
        let mut y_hi = f64::NEG_INFINITY;
        let mut x_lo = f64::INFINITY;
        let mut x_hi = f64::NEG_INFINITY;
        for s in &panel.series {
            for &(x, y) in &s.theory {
                x_lo = x_lo.min(x);
                x_hi = x_hi.max(x);
                y_lo = y_lo.min(y);
                y_hi = y_hi.max(y);
            }
            for &(x, y, std) in &s.points {
                x_lo = x_lo.min(x);
                x_hi = x_hi.max(x);
                let e = std.unwrap_or(0.0);
                y_lo = y_lo.min(y - e);
                y_hi = y_hi.max(y + e);
            }
        }
        let pad = 0.08 * (y_hi - y_lo).max(1e-6);
        y_lo -= pad;
        y_hi += pad;
        let x_span = (x_hi - x_lo).max(1e-12);
        let y_span = y_hi - y_lo;
        let to_px = |x: f64, y: f64| -> (f64, f64) {
            (
                ox + (x - x_lo) / x_span * aw,
                oy + ah - (y - y_lo) / y_span * ah,
            )
        };

        // Frame and labels.
        svg.push_str(&format!(
            r##"<rect x="{ox:.1}" y="{oy:.1}" width="{aw:.1}" height="{ah:.1}" fill="none" stroke="#444"/>"##
        ));
        svg.push_str(&format!(
            r#"<text class="tag" x="{:.1}" y="{:.1}">{}</text>"#,
            ox + 8.0,
            oy + 18.0,
            panel.tag
        ));
        svg.push_str(&format!(
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            ox + aw / 2.0,
            oy + ah + 32.0,
            panel.x_label
        ));
        svg.push_str(&format!(
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            ox + aw / 2.0,
            oy - 12.0,
            panel.title
        ));
        // Axis ticks: ends plus midpoint.
        for frac in [0.0, 0.5, 1.0] {
            let xv = x_lo + frac * x_span;
            let (px, _) = to_px(xv, y_lo);
            svg.push_str(&format!(
                r##"<line x1="{px:.1}" y1="{:.1}" x2="{px:.1}" y2="{:.1}" stroke="#444"/>"##,
                oy + ah,
                oy + ah + 5.0
            ));
            svg.push_str(&format!(
                r#"<text x="{px:.1}" y="{:.1}" text-anchor="middle">{xv:.2}</text>"#,
                oy + ah + 18.0
            ));
            let yv = y_lo + frac * y_span;
            let (_, py) = to_px(x_lo, yv);
            svg.push_str(&format!(
                r##"<line x1="{:.1}" y1="{py:.1}" x2="{ox:.1}" y2="{py:.1}" stroke="#444"/>"##,
                ox - 5.0
            ));
            svg.push_str(&format!(
                r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{yv:.2}</text>"#,
                ox - 8.0,
                py + 4.0
            ));
        }

        for s in &panel.series {
            // Theory as a solid polyline.
            let pts: Vec<String> = s
                .theory
                .iter()
                .map(|&(x, y)| {
                    let (px, py) = to_px(x, y);
                    format!("{px:.2},{py:.2}")
                })
                .collect();
            svg.push_str(&format!(
                r#"<polyline class="theory theory-{}" points="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
                s.name,
                pts.join(" "),
                color_of(s.name)
            ));
            svg.push('\n');
            // Error bars beneath markers.
            for &(x, y, std) in &s.points {
                if let Some(e) = std {
                    let (px, py_lo) = to_px(x, y - e);
                    let (_, py_hi) = to_px(x, y + e);
                    svg.push_str(&format!(
                        r#"<line class="errorbar errorbar-{}" x1="{px:.2}" y1="{py_lo:.2}" x2="{px:.2}" y2="{py_hi:.2}" stroke="{}" stroke-width="1"/>"#,
                        s.name,
                        color_of(s.name)
                    ));
                }
            }
            for &(x, y, _) in &s.points {
                let (px, py) = to_px(x, y);
                svg.push_str(&marker_svg(s.name, px, py));
                svg.push('\n');
            }
        }
        // Legend.
        for (si, s) in panel.series.iter().enumerate() {
            let lx = ox + aw - 70.0;
            let ly = oy + 14.0 + 14.0 * si as f64;
            svg.push_str(&marker_svg(s.name, lx, ly - 3.0));
            svg.push_str(&format!(
                r#"<text x="{:.1}" y="{ly:.1}">{}</text>"#,
                lx + 10.0,
                s.name.to_uppercase()
            ));
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
