//! SVG rendering of analysis outputs. All renderers are pure string
//! builders: identical inputs produce byte-identical documents. Layout is
//! fixed-grid SVG 1.1 with no external resources.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use ndarray::Array2;

use crate::ensemble::DiffReport;
use crate::error::{Error, Result};
use crate::rca::CategoryTable;
use crate::rsa::RsaMatrix;
use crate::store::DataType;

#[derive(Debug, Clone, PartialEq)]
pub struct RenderSpec {
    pub color_min: f64,
    pub color_max: f64,
    /// Representation whose cells order the columns of an rca heatmap
    /// (descending). Natural (lexicographic) category order when absent.
    pub order_by: Option<String>,
}

impl RenderSpec {
    /// Diverging scale over the full correlation range.
    pub fn rsa_default() -> Self {
        RenderSpec {
            color_min: -1.0,
            color_max: 1.0,
            order_by: None,
        }
    }

    /// Sequential scale over the typical probe-score range; values outside
    /// are clipped.
    pub fn rca_default() -> Self {
        RenderSpec {
            color_min: -0.1,
            color_max: 0.6,
            order_by: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if !self.color_min.is_finite() || !self.color_max.is_finite() {
            return Err(Error::InvalidRenderSpec(
                "color bounds must be finite".into(),
            ));
        }
        if self.color_min >= self.color_max {
            return Err(Error::InvalidRenderSpec(format!(
                "color bounds reversed: [{}, {}]",
                self.color_min, self.color_max
            )));
        }
        Ok(())
    }

    fn unit(&self, v: f64) -> f64 {
        ((v - self.color_min) / (self.color_max - self.color_min)).clamp(0.0, 1.0)
    }
}

fn lerp(a: u8, b: u8, t: f64) -> u8 {
    (f64::from(a) + (f64::from(b) - f64::from(a)) * t).round() as u8
}

fn color_at(stops: &[(f64, [u8; 3])], t: f64) -> ([u8; 3], String) {
    let t = t.clamp(0.0, 1.0);
    let mut rgb = stops[0].1;
    for w in stops.windows(2) {
        let (t0, c0) = w[0];
        let (t1, c1) = w[1];
        if t <= t1 {
            let local = if t1 > t0 { (t - t0) / (t1 - t0) } else { 0.0 };
            rgb = [
                lerp(c0[0], c1[0], local),
                lerp(c0[1], c1[1], local),
                lerp(c0[2], c1[2], local),
            ];
            return (rgb, format!("#{:02x}{:02x}{:02x}", rgb[0], rgb[1], rgb[2]));
        }
        rgb = c1;
    }
    (rgb, format!("#{:02x}{:02x}{:02x}", rgb[0], rgb[1], rgb[2]))
}

fn diverging(t: f64) -> ([u8; 3], String) {
    color_at(
        &[
            (0.0, [33, 102, 172]),
            (0.5, [247, 247, 247]),
            (1.0, [178, 24, 43]),
        ],
        t,
    )
}

fn sequential(t: f64) -> ([u8; 3], String) {
    color_at(&[(0.0, [247, 251, 255]), (1.0, [8, 48, 107])], t)
}

fn label_color(rgb: [u8; 3]) -> &'static str {
    let luma = 0.299 * f64::from(rgb[0]) + 0.587 * f64::from(rgb[1]) + 0.114 * f64::from(rgb[2]);
    if luma > 140.0 {
        "#111111"
    } else {
        "#ffffff"
    }
}

fn type_color(t: DataType) -> &'static str {
    match t {
        DataType::Text => "#1f77b4",
        DataType::Behavior => "#ff7f0e",
        DataType::Brain => "#2ca02c",
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

const CELL: f64 = 36.0;
const GUTTER: f64 = 140.0;

fn svg_open(width: f64, height: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\" font-family=\"sans-serif\">\n"
    )
}

/// Heatmap of the pairwise RSA matrix: one colored cell per pair, row and
/// column labels, and heavier separators between data-type groups. Missing
/// cells render as flat gray with no value label.
pub fn render_rsa(rsa: &RsaMatrix, spec: &RenderSpec) -> Result<String> {
    spec.validate()?;
    let n = rsa.len();
    if n == 0 {
        return Err(Error::InvalidRenderSpec("empty rsa matrix".into()));
    }
    let width = GUTTER + CELL * n as f64 + 20.0;
    let height = GUTTER + CELL * n as f64 + 20.0;
    let mut out = svg_open(width, height);
    out.push_str("<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n");

    for j in 0..n {
        let x = GUTTER + CELL * j as f64 + CELL / 2.0;
        let _ = writeln!(
            out,
            "<text x=\"{x:.1}\" y=\"{y:.1}\" font-size=\"11\" text-anchor=\"start\" transform=\"rotate(-60 {x:.1} {y:.1})\" fill=\"{c}\">{t}</text>",
            y = GUTTER - 8.0,
            c = type_color(rsa.labels()[j]),
            t = escape(&rsa.names()[j]),
        );
    }
    for i in 0..n {
        let y = GUTTER + CELL * i as f64 + CELL / 2.0 + 4.0;
        let _ = writeln!(
            out,
            "<text x=\"{x:.1}\" y=\"{y:.1}\" font-size=\"11\" text-anchor=\"end\" fill=\"{c}\">{t}</text>",
            x = GUTTER - 8.0,
            c = type_color(rsa.labels()[i]),
            t = escape(&rsa.names()[i]),
        );
    }

    for i in 0..n {
        for j in 0..n {
            let x = GUTTER + CELL * j as f64;
            let y = GUTTER + CELL * i as f64;
            match rsa.rho(i, j) {
                Some(v) => {
                    let (rgb, fill) = diverging(spec.unit(v));
                    let _ = writeln!(
                        out,
                        "<rect class=\"cell\" x=\"{x:.1}\" y=\"{y:.1}\" width=\"{w:.1}\" height=\"{w:.1}\" fill=\"{fill}\"/>",
                        w = CELL - 1.0,
                    );
                    let _ = writeln!(
                        out,
                        "<text x=\"{cx:.1}\" y=\"{cy:.1}\" font-size=\"10\" text-anchor=\"middle\" fill=\"{tc}\">{v:.2}</text>",
                        cx = x + CELL / 2.0 - 0.5,
                        cy = y + CELL / 2.0 + 3.5,
                        tc = label_color(rgb),
                    );
                }
                None => {
                    let _ = writeln!(
                        out,
                        "<rect class=\"cell missing\" x=\"{x:.1}\" y=\"{y:.1}\" width=\"{w:.1}\" height=\"{w:.1}\" fill=\"#dcdcdc\"/>",
                        w = CELL - 1.0,
                    );
                }
            }
        }
    }

    // heavier rules where the data type changes
    for i in 1..n {
        if rsa.labels()[i] != rsa.labels()[i - 1] {
            let p = GUTTER + CELL * i as f64 - 0.5;
            let end = GUTTER + CELL * n as f64;
            let _ = writeln!(
                out,
                "<line class=\"sep\" x1=\"{GUTTER}\" y1=\"{p:.1}\" x2=\"{end:.1}\" y2=\"{p:.1}\" stroke=\"#222222\" stroke-width=\"2\"/>"
            );
            let _ = writeln!(
                out,
                "<line class=\"sep\" x1=\"{p:.1}\" y1=\"{GUTTER}\" x2=\"{p:.1}\" y2=\"{end:.1}\" stroke=\"#222222\" stroke-width=\"2\"/>"
            );
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Scatter plot of MDS coordinates, colored by data type, with a small
/// legend. Uses the first two coordinate columns.
pub fn render_mds(
    coords: &Array2<f64>,
    names: &[String],
    labels: &[DataType],
) -> Result<String> {
    let n = coords.nrows();
    if n == 0 || coords.ncols() < 2 {
        return Err(Error::InvalidRenderSpec(
            "mds scatter needs ≥ 1 point and 2 coordinate columns".into(),
        ));
    }
    if names.len() != n || labels.len() != n {
        return Err(Error::InvalidRenderSpec(
            "mds names/labels do not match coordinates".into(),
        ));
    }
    let (width, height, pad) = (460.0, 420.0, 50.0);
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for i in 0..n {
        xmin = xmin.min(coords[[i, 0]]);
        xmax = xmax.max(coords[[i, 0]]);
        ymin = ymin.min(coords[[i, 1]]);
        ymax = ymax.max(coords[[i, 1]]);
    }
    let place = |v: f64, lo: f64, hi: f64, extent: f64| {
        if hi > lo {
            pad + (v - lo) / (hi - lo) * (extent - 2.0 * pad)
        } else {
            extent / 2.0
        }
    };

    let mut out = svg_open(width, height);
    out.push_str("<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n");
    let _ = writeln!(
        out,
        "<rect x=\"{pad}\" y=\"{pad}\" width=\"{w:.1}\" height=\"{h:.1}\" fill=\"none\" stroke=\"#999999\"/>",
        w = width - 2.0 * pad,
        h = height - 2.0 * pad,
    );
    for i in 0..n {
        let x = place(coords[[i, 0]], xmin, xmax, width);
        let y = height - place(coords[[i, 1]], ymin, ymax, height);
        let _ = writeln!(
            out,
            "<circle class=\"point\" cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"5\" fill=\"{c}\"/>",
            c = type_color(labels[i]),
        );
        let _ = writeln!(
            out,
            "<text x=\"{tx:.2}\" y=\"{ty:.2}\" font-size=\"10\" fill=\"#333333\">{t}</text>",
            tx = x + 7.0,
            ty = y + 3.5,
            t = escape(&names[i]),
        );
    }
    let mut seen: Vec<DataType> = Vec::new();
    for &t in labels {
        if !seen.contains(&t) {
            seen.push(t);
        }
    }
    seen.sort();
    for (k, t) in seen.iter().enumerate() {
        let y = 16.0 + 14.0 * k as f64;
        let _ = writeln!(
            out,
            "<circle cx=\"{x}\" cy=\"{cy:.1}\" r=\"4\" fill=\"{c}\"/><text x=\"{tx}\" y=\"{ty:.1}\" font-size=\"10\" fill=\"#333333\">{t}</text>",
            x = width - 90.0,
            cy = y,
            c = type_color(*t),
            tx = width - 82.0,
            ty = y + 3.5,
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Heatmap of the representation × category score table. Rows are grouped
/// by data type and sorted within each group by mean score, descending;
/// columns follow the reference representation's cells (descending, stable)
/// when `order_by` is set, natural order otherwise. Missing cells render
/// as gray with a dash.
pub fn render_rca(
    table: &CategoryTable,
    type_of: &BTreeMap<String, DataType>,
    spec: &RenderSpec,
) -> Result<String> {
    spec.validate()?;
    let n_reps = table.representations().len();
    let n_cats = table.categories().len();
    if n_reps == 0 || n_cats == 0 {
        return Err(Error::InvalidRenderSpec("empty score table".into()));
    }
    let mut types = Vec::with_capacity(n_reps);
    for rep in table.representations() {
        let t = type_of.get(rep).copied().ok_or_else(|| {
            Error::InvalidRenderSpec(format!("representation {rep} has no data type"))
        })?;
        types.push(t);
    }

    let row_mean = |i: usize| {
        let vals: Vec<f64> = (0..n_cats).filter_map(|j| table.cell(i, j)).collect();
        if vals.is_empty() {
            f64::NEG_INFINITY
        } else {
            vals.iter().sum::<f64>() / vals.len() as f64
        }
    };
    let mut row_order: Vec<usize> = (0..n_reps).collect();
    row_order.sort_by(|&a, &b| {
        types[a]
            .cmp(&types[b])
            .then(row_mean(b).total_cmp(&row_mean(a)))
    });

    let mut col_order: Vec<usize> = (0..n_cats).collect();
    if let Some(reference) = &spec.order_by {
        let r = table
            .representations()
            .iter()
            .position(|name| name == reference)
            .ok_or_else(|| {
                Error::InvalidRenderSpec(format!("unknown ordering reference {reference}"))
            })?;
        let key = |j: usize| table.cell(r, j).unwrap_or(f64::NEG_INFINITY);
        col_order.sort_by(|&a, &b| key(b).total_cmp(&key(a)));
    }

    let width = GUTTER + CELL * n_cats as f64 + 20.0;
    let height = GUTTER + CELL * n_reps as f64 + 20.0;
    let mut out = svg_open(width, height);
    out.push_str("<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n");

    for (jj, &j) in col_order.iter().enumerate() {
        let x = GUTTER + CELL * jj as f64 + CELL / 2.0;
        let _ = writeln!(
            out,
            "<text x=\"{x:.1}\" y=\"{y:.1}\" font-size=\"11\" text-anchor=\"start\" transform=\"rotate(-60 {x:.1} {y:.1})\" fill=\"#333333\">{t}</text>",
            y = GUTTER - 8.0,
            t = escape(&table.categories()[j]),
        );
    }
    for (ii, &i) in row_order.iter().enumerate() {
        let y = GUTTER + CELL * ii as f64 + CELL / 2.0 + 4.0;
        let _ = writeln!(
            out,
            "<text x=\"{x:.1}\" y=\"{y:.1}\" font-size=\"11\" text-anchor=\"end\" fill=\"{c}\">{t}</text>",
            x = GUTTER - 8.0,
            c = type_color(types[i]),
            t = escape(&table.representations()[i]),
        );
    }

    for (ii, &i) in row_order.iter().enumerate() {
        for (jj, &j) in col_order.iter().enumerate() {
            let x = GUTTER + CELL * jj as f64;
            let y = GUTTER + CELL * ii as f64;
            match table.cell(i, j) {
                Some(v) => {
                    let (rgb, fill) = sequential(spec.unit(v));
                    let _ = writeln!(
                        out,
                        "<rect class=\"cell\" x=\"{x:.1}\" y=\"{y:.1}\" width=\"{w:.1}\" height=\"{w:.1}\" fill=\"{fill}\"/>",
                        w = CELL - 1.0,
                    );
                    let _ = writeln!(
                        out,
                        "<text x=\"{cx:.1}\" y=\"{cy:.1}\" font-size=\"10\" text-anchor=\"middle\" fill=\"{tc}\">{v:.2}</text>",
                        cx = x + CELL / 2.0 - 0.5,
                        cy = y + CELL / 2.0 + 3.5,
                        tc = label_color(rgb),
                    );
                }
                None => {
                    let _ = writeln!(
                        out,
                        "<rect class=\"cell missing\" x=\"{x:.1}\" y=\"{y:.1}\" width=\"{w:.1}\" height=\"{w:.1}\" fill=\"#dcdcdc\"/>",
                        w = CELL - 1.0,
                    );
                    let _ = writeln!(
                        out,
                        "<text x=\"{cx:.1}\" y=\"{cy:.1}\" font-size=\"10\" text-anchor=\"middle\" fill=\"#777777\">&#8211;</text>",
                        cx = x + CELL / 2.0 - 0.5,
                        cy = y + CELL / 2.0 + 3.5,
                    );
                }
            }
        }
    }

    for ii in 1..n_reps {
        if types[row_order[ii]] != types[row_order[ii - 1]] {
            let p = GUTTER + CELL * ii as f64 - 0.5;
            let end = GUTTER + CELL * n_cats as f64;
            let _ = writeln!(
                out,
                "<line class=\"sep\" x1=\"{GUTTER}\" y1=\"{p:.1}\" x2=\"{end:.1}\" y2=\"{p:.1}\" stroke=\"#222222\" stroke-width=\"2\"/>"
            );
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Tabular rendering of a paired difference report. Rows with p < 0.05 are
/// set in bold.
pub fn render_diff_table(report: &DiffReport) -> Result<String> {
    let n = report.rows.len();
    let row_h = 24.0;
    let width = 560.0;
    let height = 70.0 + row_h * n as f64 + 10.0;
    let cols = [10.0, 230.0, 300.0, 400.0, 480.0];
    let mut out = svg_open(width, height);
    out.push_str("<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n");
    let _ = writeln!(
        out,
        "<text x=\"10\" y=\"22\" font-size=\"13\" font-weight=\"bold\" fill=\"#111111\">{a} &#8722; {b}</text>",
        a = escape(&report.label_a),
        b = escape(&report.label_b),
    );
    let headers = ["category", "n", "median &#916;", "W", "p"];
    for (c, h) in cols.iter().zip(headers) {
        let _ = writeln!(
            out,
            "<text x=\"{c}\" y=\"48\" font-size=\"11\" font-weight=\"bold\" fill=\"#333333\">{h}</text>"
        );
    }
    let _ = writeln!(
        out,
        "<line x1=\"10\" y1=\"56\" x2=\"{x:.1}\" y2=\"56\" stroke=\"#666666\"/>",
        x = width - 10.0
    );
    for (k, row) in report.rows.iter().enumerate() {
        let y = 74.0 + row_h * k as f64;
        let significant = row.test.as_ref().is_some_and(|t| t.p_value < 0.05);
        let weight = if significant { " font-weight=\"bold\"" } else { "" };
        let cells = [
            escape(&row.category),
            row.n_norms.to_string(),
            row.median_diff.map_or("&#8211;".into(), |d| format!("{d:.3}")),
            row.test
                .as_ref()
                .map_or("&#8211;".into(), |t| format!("{:.0}", t.statistic)),
            row.test
                .as_ref()
                .map_or("&#8211;".into(), |t| format!("{:.4}", t.p_value)),
        ];
        for (c, cell) in cols.iter().zip(cells) {
            let _ = writeln!(
                out,
                "<text class=\"row\" x=\"{c}\" y=\"{y:.1}\" font-size=\"11\"{weight} fill=\"#111111\">{cell}</text>"
            );
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::DiffRow;
    use crate::kernels::TestResult;
    use crate::rca::{aggregate_by_category, ContentProfile, ProbeResult};
    use ndarray::array;

    fn rsa_fixture(n: usize) -> RsaMatrix {
        let names: Vec<String> = (0..n).map(|i| format!("rep{i}")).collect();
        let labels: Vec<DataType> = (0..n)
            .map(|i| match i % 3 {
                0 => DataType::Text,
                1 => DataType::Behavior,
                _ => DataType::Brain,
            })
            .collect();
        let mut rho = vec![Some(0.25); n * n];
        for i in 0..n {
            rho[i * n + i] = Some(1.0);
        }
        RsaMatrix::from_parts(names, labels, rho, vec![10; n * n])
    }

    #[test]
    fn rsa_heatmap_has_one_cell_per_pair() {
        let names = vec!["a".to_string(), "b".to_string()];
        let labels = vec![DataType::Text, DataType::Brain];
        let rho = vec![Some(1.0), Some(0.0), Some(0.0), Some(1.0)];
        let rsa = RsaMatrix::from_parts(names, labels, rho, vec![3; 4]);
        let svg = render_rsa(&rsa, &RenderSpec::rsa_default()).unwrap();
        assert_eq!(svg.matches("class=\"cell").count(), 4);
        assert!(svg.contains("1.00"));
        assert!(svg.contains("0.00"));
        assert!(svg.starts_with("<svg xmlns"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn rendering_is_deterministic() {
        let rsa = rsa_fixture(5);
        let a = render_rsa(&rsa, &RenderSpec::rsa_default()).unwrap();
        let b = render_rsa(&rsa, &RenderSpec::rsa_default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn large_heatmap_renders_quickly() {
        let rsa = rsa_fixture(26);
        let start = std::time::Instant::now();
        let svg = render_rsa(&rsa, &RenderSpec::rsa_default()).unwrap();
        assert!(start.elapsed().as_secs_f64() < 1.0);
        assert_eq!(svg.matches("class=\"cell").count(), 26 * 26);
    }

    #[test]
    fn missing_rsa_cell_is_marked() {
        let names = vec!["a".to_string(), "b".to_string()];
        let labels = vec![DataType::Text, DataType::Text];
        let rho = vec![Some(1.0), None, None, Some(1.0)];
        let rsa = RsaMatrix::from_parts(names, labels, rho, vec![3; 4]);
        let svg = render_rsa(&rsa, &RenderSpec::rsa_default()).unwrap();
        assert_eq!(svg.matches("class=\"cell missing\"").count(), 2);
    }

    #[test]
    fn bad_bounds_are_rejected() {
        let rsa = rsa_fixture(3);
        let spec = RenderSpec {
            color_min: 1.0,
            color_max: -1.0,
            order_by: None,
        };
        assert!(matches!(
            render_rsa(&rsa, &spec),
            Err(Error::InvalidRenderSpec(_))
        ));
    }

    #[test]
    fn color_scale_endpoints() {
        let (_, low) = diverging(0.0);
        let (_, mid) = diverging(0.5);
        let (_, high) = diverging(1.0);
        assert_eq!(low, "#2166ac");
        assert_eq!(mid, "#f7f7f7");
        assert_eq!(high, "#b2182b");
        let (_, s0) = sequential(0.0);
        let (_, s1) = sequential(1.0);
        assert_eq!(s0, "#f7fbff");
        assert_eq!(s1, "#08306b");
    }

    #[test]
    fn mds_scatter_renders_points_and_legend() {
        let coords = array![[0.0, 0.0], [1.0, 0.5], [-1.0, -0.5]];
        let names = vec!["a".to_string(), "b".to_string(), "c".to_string()];
        let labels = vec![DataType::Text, DataType::Text, DataType::Brain];
        let svg = render_mds(&coords, &names, &labels).unwrap();
        assert_eq!(svg.matches("class=\"point\"").count(), 3);
        assert!(svg.contains("text"));
        let again = render_mds(&coords, &names, &labels).unwrap();
        assert_eq!(svg, again);
    }

    fn table_fixture() -> (CategoryTable, BTreeMap<String, DataType>) {
        // categories ordered lexicographically by aggregate_by_category:
        // c1..c4; reference rep "t1" scores descending c3 > c1 > c4 > c2
        let mk = |rep: &str, norm: &str, mean: f64| ProbeResult {
            representation: rep.into(),
            norm: norm.into(),
            per_fold_scores: vec![mean; 5],
            mean_score: mean,
            chosen_penalties: vec![1.0; 5],
            n_samples: 100,
            skipped: false,
            skip_reason: None,
            fold_digest: 7,
        };
        let profiles = vec![
            ContentProfile {
                representation: "t1".into(),
                scores: [
                    ("n1".to_string(), mk("t1", "n1", 0.4)),
                    ("n2".to_string(), mk("t1", "n2", 0.1)),
                    ("n3".to_string(), mk("t1", "n3", 0.6)),
                    ("n4".to_string(), mk("t1", "n4", 0.2)),
                ]
                .into(),
            },
            ContentProfile {
                representation: "b1".into(),
                scores: [
                    ("n1".to_string(), mk("b1", "n1", 0.3)),
                    ("n2".to_string(), mk("b1", "n2", 0.5)),
                    ("n3".to_string(), mk("b1", "n3", 0.2)),
                    ("n4".to_string(), mk("b1", "n4", 0.1)),
                ]
                .into(),
            },
            ContentProfile {
                representation: "t2".into(),
                scores: [
                    ("n1".to_string(), mk("t2", "n1", 0.35)),
                    ("n2".to_string(), mk("t2", "n2", 0.15)),
                    ("n3".to_string(), mk("t2", "n3", 0.5)),
                    ("n4".to_string(), mk("t2", "n4", 0.25)),
                ]
                .into(),
            },
        ];
        let map: BTreeMap<String, String> = [
            ("n1".to_string(), "c1".to_string()),
            ("n2".to_string(), "c2".to_string()),
            ("n3".to_string(), "c3".to_string()),
            ("n4".to_string(), "c4".to_string()),
        ]
        .into();
        let table = aggregate_by_category(&profiles, &map).unwrap();
        let types: BTreeMap<String, DataType> = [
            ("t1".to_string(), DataType::Text),
            ("t2".to_string(), DataType::Text),
            ("b1".to_string(), DataType::Behavior),
        ]
        .into();
        (table, types)
    }

    #[test]
    fn rca_columns_follow_reference_descending() {
        let (table, types) = table_fixture();
        let spec = RenderSpec {
            order_by: Some("t1".into()),
            ..RenderSpec::rca_default()
        };
        let svg = render_rca(&table, &types, &spec).unwrap();
        let pos = |cat: &str| svg.find(&format!(">{cat}</text>")).unwrap();
        // t1 cells: c3=0.6, c1=0.4, c4=0.2, c2=0.1
        assert!(pos("c3") < pos("c1"));
        assert!(pos("c1") < pos("c4"));
        assert!(pos("c4") < pos("c2"));
    }

    #[test]
    fn rca_rows_group_by_type_then_performance() {
        let (table, types) = table_fixture();
        let svg = render_rca(&table, &types, &RenderSpec::rca_default()).unwrap();
        // t1 mean .325 > t2 mean .3125; behavior group after text
        let pos = |rep: &str| svg.find(&format!(">{rep}</text>")).unwrap();
        assert!(pos("t1") < pos("t2"));
        assert!(pos("t2") < pos("b1"));
        assert_eq!(svg.matches("class=\"sep\"").count(), 1);
    }

    #[test]
    fn equal_cells_keep_input_order() {
        let mk = |rep: &str| ContentProfile {
            representation: rep.into(),
            scores: [(
                "n1".to_string(),
                ProbeResult {
                    representation: rep.into(),
                    norm: "n1".into(),
                    per_fold_scores: vec![0.3; 5],
                    mean_score: 0.3,
                    chosen_penalties: vec![1.0; 5],
                    n_samples: 100,
                    skipped: false,
                    skip_reason: None,
                    fold_digest: 7,
                },
            )]
            .into(),
        };
        let profiles = vec![mk("z"), mk("a"), mk("m")];
        let map: BTreeMap<String, String> = [("n1".to_string(), "c1".to_string())].into();
        let table = aggregate_by_category(&profiles, &map).unwrap();
        let types: BTreeMap<String, DataType> = [
            ("z".to_string(), DataType::Text),
            ("a".to_string(), DataType::Text),
            ("m".to_string(), DataType::Text),
        ]
        .into();
        let svg = render_rca(&table, &types, &RenderSpec::rca_default()).unwrap();
        let pos = |rep: &str| svg.find(&format!(">{rep}</text>")).unwrap();
        assert!(pos("z") < pos("a"));
        assert!(pos("a") < pos("m"));
    }

    #[test]
    fn missing_rca_cell_is_marked() {
        let profile = ContentProfile {
            representation: "r".into(),
            scores: [(
                "n1".to_string(),
                ProbeResult {
                    representation: "r".into(),
                    norm: "n1".into(),
                    per_fold_scores: Vec::new(),
                    mean_score: f64::NAN,
                    chosen_penalties: Vec::new(),
                    n_samples: 40,
                    skipped: true,
                    skip_reason: Some("insufficient-samples".into()),
                    fold_digest: 0,
                },
            )]
            .into(),
        };
        let map: BTreeMap<String, String> = [("n1".to_string(), "c1".to_string())].into();
        let table = aggregate_by_category(&[profile], &map).unwrap();
        let types: BTreeMap<String, DataType> = [("r".to_string(), DataType::Text)].into();
        let svg = render_rca(&table, &types, &RenderSpec::rca_default()).unwrap();
        assert_eq!(svg.matches("class=\"cell missing\"").count(), 1);
    }

    #[test]
    fn unknown_reference_is_rejected() {
        let (table, types) = table_fixture();
        let spec = RenderSpec {
            order_by: Some("nope".into()),
            ..RenderSpec::rca_default()
        };
        assert!(matches!(
            render_rca(&table, &types, &spec),
            Err(Error::InvalidRenderSpec(_))
        ));
    }

    #[test]
    fn diff_table_bolds_significant_rows() {
        let report = DiffReport {
            label_a: "ens".into(),
            label_b: "solo".into(),
            rows: vec![
                DiffRow {
                    category: "size".into(),
                    n_norms: 5,
                    median_diff: Some(0.1),
                    test: Some(TestResult {
                        statistic: 0.0,
                        p_value: 0.03125,
                        n: 5,
                    }),
                },
                DiffRow {
                    category: "danger".into(),
                    n_norms: 2,
                    median_diff: Some(0.01),
                    test: None,
                },
            ],
        };
        let svg = render_diff_table(&report).unwrap();
        assert!(svg.contains("font-weight=\"bold\" fill=\"#111111\">size</text>"));
        assert!(!svg.contains("font-weight=\"bold\" fill=\"#111111\">danger</text>"));
        assert!(svg.contains("0.0312") || svg.contains("0.0313"));
        assert_eq!(svg, render_diff_table(&report).unwrap());
    }
}
