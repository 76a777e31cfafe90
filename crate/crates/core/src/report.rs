//! Static output files: matrix CSV, heatmap SVG, JSON and markdown reports.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::confusion::ConfusionPercent;
use crate::error::{Error, Result};
use crate::patterns::{ChiSquareResult, ErrorPattern};
use crate::phoneset::{inventory, MannerClass, Phone, PhoneKind, Token};
use crate::pipeline::AnalysisReport;

pub const UNSUPPORTED_MARKER: &str = "#unsupported";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subset {
    Vowels,
    /// Consonants plus the coda and tap allophones.
    Consonants,
    All,
}

impl Subset {
    pub fn phones(self) -> Vec<Phone> {
        inventory()
            .filter(|p| match self {
                Subset::All => true,
                Subset::Vowels => p.kind() == PhoneKind::Vowel,
                Subset::Consonants => p.kind() != PhoneKind::Vowel,
            })
            .collect()
    }

    /// Subset axes with `*` appended.
    pub fn axes(self) -> Vec<Token> {
        with_star(&self.phones())
    }
}

impl std::str::FromStr for Subset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vowels" => Ok(Subset::Vowels),
            "consonants" => Ok(Subset::Consonants),
            "all" => Ok(Subset::All),
            other => Err(Error::Parse(format!("unknown subset {other:?}"))),
        }
    }
}

fn with_star(phones: &[Phone]) -> Vec<Token> {
    phones
        .iter()
        .copied()
        .map(Token::Phone)
        .chain(std::iter::once(Token::Star))
        .collect()
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content).map_err(|e| Error::io(path, e))
}

/// Matrix restricted to `phones` (plus `*`) as CSV text. Values have two
/// decimals; unsupported rows get a trailing marker field.
pub fn matrix_csv(m: &ConfusionPercent, phones: &[Phone]) -> String {
    let axes = with_star(phones);
    let mut out = String::new();
    for t in &axes {
        out.push(',');
        out.push_str(t.symbol());
    }
    out.push('\n');
    for row in &axes {
        let r = row.axis_index();
        out.push_str(row.symbol());
        for col in &axes {
            write!(out, ",{:.2}", m.cell(r, col.axis_index())).unwrap();
        }
        if !m.is_supported(r) {
            out.push(',');
            out.push_str(UNSUPPORTED_MARKER);
        }
        out.push('\n');
    }
    out
}

pub fn write_matrix_csv(m: &ConfusionPercent, path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &matrix_csv(m, &Subset::All.phones()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedMatrixRow {
    pub canonical: Token,
    pub values: Vec<f64>,
    pub unsupported: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedMatrix {
    pub columns: Vec<Token>,
    pub rows: Vec<ParsedMatrixRow>,
}

pub fn parse_matrix_csv(text: &str) -> Result<ParsedMatrix> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let columns = header
        .split(',')
        .skip(1)
        .map(Token::parse)
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for line in lines {
        let mut fields = line.split(',');
        let canonical = Token::parse(fields.next().unwrap_or_default())?;
        let mut values = Vec::with_capacity(columns.len());
        let mut unsupported = false;
        for f in fields {
            if f == UNSUPPORTED_MARKER {
                unsupported = true;
            } else {
                values.push(
                    f.parse::<f64>()
                        .map_err(|_| Error::Parse(format!("bad matrix value {f:?}")))?,
                );
            }
        }
        if values.len() != columns.len() {
            return Err(Error::Parse(format!(
                "row {canonical} has {} values for {} columns",
                values.len(),
                columns.len()
            )));
        }
        rows.push(ParsedMatrixRow {
            canonical,
            values,
            unsupported,
        });
    }
    Ok(ParsedMatrix { columns, rows })
}

const CELL: usize = 30;
const MARGIN: usize = 56;

/// Linear ramp from white to dark blue; darker means larger.
fn shade(value: f64) -> (u8, u8, u8) {
    let t = (value / 100.0).clamp(0.0, 1.0);
    let lerp = |a: f64, b: f64| (a + (b - a) * t).round() as u8;
    (lerp(255.0, 8.0), lerp(255.0, 48.0), lerp(255.0, 107.0))
}

/// Heatmap of `m` over `subset` as a standalone SVG document. Output is a
/// pure function of the matrix values.
pub fn heatmap_svg(m: &ConfusionPercent, subset: Subset, title: &str) -> String {
    let axes = subset.axes();
    let n = axes.len();
    let size = MARGIN + n * CELL + 8;
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{h}" viewBox="0 0 {size} {h}" font-family="sans-serif" font-size="10">"#,
        h = size + 20
    )
    .unwrap();
    writeln!(out, r#"<title>{}</title>"#, escape(title)).unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        out,
        r#"<text x="{MARGIN}" y="14" font-size="12">{}</text>"#,
        escape(title)
    )
    .unwrap();
    let top = MARGIN;
    for (i, t) in axes.iter().enumerate() {
        let center = MARGIN + i * CELL + CELL / 2;
        writeln!(
            out,
            r#"<text x="{center}" y="{}" text-anchor="middle">{}</text>"#,
            top - 6,
            escape(t.symbol())
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
            MARGIN - 6,
            top + i * CELL + CELL / 2 + 3,
            escape(t.symbol())
        )
        .unwrap();
    }
    for (i, row) in axes.iter().enumerate() {
        for (j, col) in axes.iter().enumerate() {
            let v = m.cell(row.axis_index(), col.axis_index());
            let (r, g, b) = shade(v);
            let x = MARGIN + j * CELL;
            let y = top + i * CELL;
            writeln!(
                out,
                r##"<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="#{r:02x}{g:02x}{b:02x}" stroke="#dddddd" stroke-width="0.5"/>"##
            )
            .unwrap();
            if v >= 0.5 {
                let ink = if v > 50.0 { "white" } else { "black" };
                writeln!(
                    out,
                    r#"<text x="{}" y="{}" text-anchor="middle" fill="{ink}">{:.0}</text>"#,
                    x + CELL / 2,
                    y + CELL / 2 + 3,
                    v
                )
                .unwrap();
            }
        }
    }
    writeln!(
        out,
        r#"<text x="{MARGIN}" y="{}">rows: canonical, columns: realized, * = insertion / deletion</text>"#,
        size + 12
    )
    .unwrap();
    out.push_str("</svg>\n");
    out
}

pub fn render_heatmap_svg(
    m: &ConfusionPercent,
    subset: Subset,
    title: &str,
    path: impl AsRef<Path>,
) -> Result<()> {
    write_file(path.as_ref(), &heatmap_svg(m, subset, title))
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Markdown,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            other => Err(Error::Parse(format!("unknown report format {other:?}"))),
        }
    }
}

pub fn report_json(r: &AnalysisReport) -> String {
    serde_json::to_string_pretty(r).expect("report is serializable") + "\n"
}

pub fn parse_report_json(text: &str) -> Result<AnalysisReport> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("report JSON: {e}")))
}

pub fn write_report(r: &AnalysisReport, path: impl AsRef<Path>, format: ReportFormat) -> Result<()> {
    let text = match format {
        ReportFormat::Json => report_json(r),
        ReportFormat::Markdown => report_markdown(r),
    };
    write_file(path.as_ref(), &text)
}

pub const DEPENDENCE_HEADER: &str =
    "| L1 | Canon | Real | L1 Freq. (%) | Average Freq. (%) | P-value |";
const DEPENDENCE_RULE: &str = "|---|---|---|---|---|---|";

/// One dependence result as a markdown table row.
pub fn dependence_row(r: &ChiSquareResult) -> String {
    format!(
        "| {} | {} | {} | {:.2} | {:.2} | {} |",
        r.group.group(),
        r.pattern.canonical,
        r.pattern.realized,
        r.group_frequency,
        r.average_frequency,
        r.stars
    )
}

fn dependence_table(out: &mut String, rows: &[&ChiSquareResult]) {
    out.push_str(DEPENDENCE_HEADER);
    out.push('\n');
    out.push_str(DEPENDENCE_RULE);
    out.push('\n');
    for r in rows {
        out.push_str(&dependence_row(r));
        out.push('\n');
    }
}

fn pattern_list(patterns: &[ErrorPattern]) -> String {
    if patterns.is_empty() {
        return "-".into();
    }
    patterns
        .iter()
        .map(|p| format!("{}→{} ({:.2})", p.canonical, p.realized, p.frequency))
        .collect::<Vec<_>>()
        .join(", ")
}

fn category(p: &ErrorPattern) -> &'static str {
    let manner = |t: Token| t.phone().map(Phone::manner);
    match (manner(p.canonical), manner(p.realized)) {
        (_, None) => "deletion",
        (None, _) => "insertion",
        (Some(MannerClass::Aspirated | MannerClass::Tense), Some(MannerClass::Plain)) => {
            "laryngeal to plain"
        }
        (Some(MannerClass::Diphthong), Some(MannerClass::Monophthong)) => "diphthong to monophthong",
        (Some(a), Some(b)) if a == b => "same class",
        _ => "other",
    }
}

/// Markdown summary mirroring the published table layout.
pub fn report_markdown(r: &AnalysisReport) -> String {
    let md = &r.metadata;
    let mut out = String::new();
    out.push_str("# Pronunciation error pattern report\n\n");
    out.push_str("## Run\n\n");
    writeln!(out, "- schema version: {}", r.schema_version).unwrap();
    writeln!(
        out,
        "- weights: sub={}, ins={}, del={}",
        md.weights.substitute, md.weights.insert, md.weights.delete
    )
    .unwrap();
    writeln!(out, "- minimum row support: {}", md.min_support).unwrap();
    writeln!(out, "- common patterns per phone: {}", md.common_top_k).unwrap();
    writeln!(out, "- realizations tested per row: {}", md.scan_k).unwrap();
    let [a, b, c] = md.star_levels.0;
    writeln!(out, "- stars: * < {a}, ** < {b}, *** < {c}").unwrap();
    writeln!(
        out,
        "- multiple-comparison correction: {}",
        if md.bonferroni { "Bonferroni" } else { "none" }
    )
    .unwrap();
    if let Some(seed) = md.seed {
        writeln!(out, "- seed: {seed}").unwrap();
    }
    if let Some(p) = md.proficiency {
        writeln!(out, "- proficiency filter: {p}").unwrap();
    }
    writeln!(
        out,
        "- baseline subtraction: {}",
        if md.baseline_subtracted {
            "applied"
        } else {
            "no baseline subtraction"
        }
    )
    .unwrap();
    for note in &md.notes {
        writeln!(out, "- note: {note}").unwrap();
    }
    writeln!(out, "- skipped tests: {}", md.skipped.len()).unwrap();

    out.push_str("\n## Phone error rate\n\n");
    out.push_str("| Group | Utterances | Canonical phones | S | D | I | PER (%) |\n");
    out.push_str("|---|---|---|---|---|---|---|\n");
    for s in &r.summaries {
        let per = s.per.map_or("-".to_string(), |p| format!("{:.2}", 100.0 * p));
        writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} | {} |",
            s.group, s.utterances, s.canonical_phones, s.substitutions, s.deletions, s.insertions, per
        )
        .unwrap();
    }

    out.push_str("\n## Common error patterns\n\n");
    out.push_str("| Canon | Real | Mean Freq. (%) | Count | Category |\n");
    out.push_str("|---|---|---|---|---|\n");
    for p in &r.common.common {
        writeln!(
            out,
            "| {} | {} | {:.2} | {} | {} |",
            p.canonical,
            p.realized,
            p.frequency,
            p.count,
            category(p)
        )
        .unwrap();
    }
    out.push_str("\n### Per-group lists\n\n");
    out.push_str("| L1 | Mean accuracy (%) | Below-average phones | Patterns |\n");
    out.push_str("|---|---|---|---|\n");
    for g in &r.common.per_group {
        let mean = g.mean_accuracy.map_or("-".to_string(), |m| format!("{m:.2}"));
        let low: Vec<&str> = g.low_accuracy.iter().map(|p| p.symbol()).collect();
        writeln!(
            out,
            "| {} | {} | {} | {} |",
            g.group,
            mean,
            if low.is_empty() { "-".into() } else { low.join(" ") },
            pattern_list(&g.patterns)
        )
        .unwrap();
    }

    let significant: Vec<&ChiSquareResult> =
        r.dependence.iter().filter(|x| !x.stars.is_empty()).collect();
    let (harmful, helpful): (Vec<&ChiSquareResult>, Vec<&ChiSquareResult>) =
        significant.iter().partition(|x| x.is_harmful());
    out.push_str("\n## Language-dependent error patterns\n\n");
    writeln!(
        out,
        "{} of {} tested patterns are significant.\n",
        significant.len(),
        r.dependence.len()
    )
    .unwrap();
    out.push_str("### More errors than average\n\n");
    dependence_table(&mut out, &harmful);
    out.push_str("\n### Fewer errors than average\n\n");
    dependence_table(&mut out, &helpful);
    out
}
