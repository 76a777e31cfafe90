mod support;

use l2k::confusion::{Proficiency, L1};
use l2k::manifest::{load_manifest, parse_record, write_manifest, UtteranceRecord};
use l2k::patterns::Direction;
use l2k::phoneset::AXIS_LEN;
use l2k::pipeline::{run_pipeline, AnalysisReport, PipelineConfig};
use l2k::report::{
    heatmap_svg, matrix_csv, parse_matrix_csv, parse_report_json, report_json, report_markdown,
    write_matrix_csv, write_report, ReportFormat, Subset,
};
use l2k::{g2p, Error, Mode};
use support::*;

const SEED: u64 = 42;
const TOKENS: usize = 20_000;

fn planted_corpus() -> (Vec<UtteranceRecord>, Vec<UtteranceRecord>) {
    let learners = L1::LEARNERS
        .iter()
        .enumerate()
        .flat_map(|(g, &l1)| synthetic_records(l1, &planted_group_model(l1, SEED + g as u64), TOKENS))
        .collect();
    let natives = synthetic_records(L1::Native, &native_model(SEED + 10), TOKENS);
    (learners, natives)
}

fn planted_report() -> AnalysisReport {
    let (learners, natives) = planted_corpus();
    run_pipeline(&learners, &natives, &PipelineConfig::default()).unwrap()
}

#[test]
fn every_supported_row_sums_to_100() {
    let report = planted_report();
    for m in &report.matrices {
        assert!(max_row_sum_error(&m.normalized) <= 1e-6, "{}", m.group);
        if let Some(adj) = &m.adjusted {
            assert!(max_row_sum_error(adj) <= 1e-6, "{} adjusted", m.group);
        }
    }
}

#[test]
fn planted_common_pattern_is_recovered() {
    let report = planted_report();
    let th: Vec<_> = report
        .common
        .common
        .iter()
        .filter(|p| p.canonical == tok("th"))
        .collect();
    assert_eq!(th.len(), 1, "{th:?}");
    assert_eq!(th[0].realized, tok("t"));
    assert!((th[0].frequency - 20.0).abs() < 1.5, "{}", th[0].frequency);
}

#[test]
fn exclusive_excess_is_flagged() {
    let report = planted_report();
    let hit = report
        .dependence
        .iter()
        .find(|r| {
            r.group.group() == L1::VI && r.pattern.canonical == tok("l") && r.pattern.realized == tok("n")
        })
        .expect("VI l->n tested");
    assert!(hit.p < 0.001, "{}", hit.p);
    assert_eq!(hit.stars, "***");
    assert_eq!(hit.direction, Direction::AboveAverage);
    assert!(hit.is_harmful());
    // Nobody else has an l->n excess.
    assert!(report
        .dependence
        .iter()
        .filter(|r| r.group.group() != L1::VI && r.pattern.key() == (tok("l"), tok("n")))
        .all(|r| r.direction == Direction::BelowAverage));
}

#[test]
fn record_order_does_not_matter() {
    let (mut learners, natives) = planted_corpus();
    learners.truncate(6000);
    let config = PipelineConfig::default();
    let a = run_pipeline(&learners, &natives, &config).unwrap();
    learners.reverse();
    let b = run_pipeline(&learners, &natives, &config).unwrap();
    assert_eq!(report_json(&a), report_json(&b));
}

#[test]
fn proficiency_filter_keeps_axes() {
    let (mut learners, natives) = planted_corpus();
    for (i, r) in learners.iter_mut().enumerate() {
        r.proficiency = Some(if i % 2 == 0 { Proficiency::Beginner } else { Proficiency::Advanced });
    }
    let all = run_pipeline(&learners, &natives, &PipelineConfig::default()).unwrap();
    let config = PipelineConfig {
        proficiency: Some(Proficiency::Beginner),
        ..PipelineConfig::default()
    };
    let beginners = run_pipeline(&learners, &natives, &config).unwrap();
    let vi_all = all.matrices_for(L1::VI).unwrap();
    let vi_beg = beginners.matrices_for(L1::VI).unwrap();
    assert_eq!(vi_beg.group.proficiency(), Some(Proficiency::Beginner));
    let total = |m: &l2k::ConfusionPercent| (0..AXIS_LEN).map(|r| m.support(r)).sum::<u64>();
    assert!(total(&vi_beg.normalized) < total(&vi_all.normalized));
    let csv = matrix_csv(&vi_beg.normalized, &Subset::All.phones());
    let parsed = parse_matrix_csv(&csv).unwrap();
    assert_eq!(parsed.columns.len(), AXIS_LEN);
    assert_eq!(parsed.rows.len(), AXIS_LEN);
}

#[test]
fn empty_native_set_is_noted() {
    let (learners, _) = planted_corpus();
    let report = run_pipeline(&learners, &[], &PipelineConfig::default()).unwrap();
    assert!(!report.metadata.baseline_subtracted);
    assert!(report
        .metadata
        .notes
        .iter()
        .any(|n| n.contains("no baseline subtraction")));
    assert!(report.matrices.iter().all(|m| m.adjusted.is_none()));
    assert!(report_markdown(&report).contains("no baseline subtraction"));
}

#[test]
fn no_learners_is_an_error() {
    let natives = synthetic_records(L1::Native, &native_model(1), 100);
    assert!(matches!(
        run_pipeline(&natives, &[], &PipelineConfig::default()),
        Err(Error::EmptyCorpus)
    ));
}

#[test]
fn single_group_skips_the_scan() {
    let records = synthetic_records(L1::JP, &planted_group_model(L1::JP, 3), 2000);
    let report = run_pipeline(&records, &[], &PipelineConfig::default()).unwrap();
    assert!(report.dependence.is_empty());
    assert!(report.metadata.notes.iter().any(|n| n.contains("fewer than two")));
}

#[test]
fn text_records_go_through_g2p() {
    let r = parse_record("u1\tVI\t-\t학교\t-\th a k> kk yo").unwrap();
    let canonical = g2p(r.text.as_deref().unwrap(), Mode::Strict).unwrap().phones;
    assert_eq!(canonical, r.realized);
    let report = run_pipeline(&[r], &[], &PipelineConfig::default()).unwrap();
    let vi = report.summaries.iter().find(|s| s.group.group() == L1::VI).unwrap();
    assert_eq!(vi.canonical_phones, 5);
    assert_eq!(vi.per, Some(0.0));
}

#[test]
fn manifest_file_round_trip() {
    let (learners, _) = planted_corpus();
    let sample: Vec<_> = learners.into_iter().step_by(97).collect();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.tsv");
    write_manifest(&sample, std::fs::File::create(&path).unwrap()).unwrap();
    assert_eq!(load_manifest(&path).unwrap(), sample);
}

#[test]
fn output_files_round_trip() {
    let report = planted_report();
    let dir = tempfile::tempdir().unwrap();
    let vi = &report.matrices_for(L1::VI).unwrap().normalized;

    let csv_path = dir.path().join("vi.csv");
    write_matrix_csv(vi, &csv_path).unwrap();
    let parsed = parse_matrix_csv(&std::fs::read_to_string(&csv_path).unwrap()).unwrap();
    for row in &parsed.rows {
        for (col, v) in parsed.columns.iter().zip(&row.values) {
            let exact = vi.get(row.canonical, *col);
            assert_eq!(*v, format!("{exact:.2}").parse::<f64>().unwrap());
        }
        assert_eq!(row.unsupported, !vi.is_supported(row.canonical.axis_index()));
    }

    let json_path = dir.path().join("r.json");
    write_report(&report, &json_path, ReportFormat::Json).unwrap();
    let back = parse_report_json(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(report_json(&back), report_json(&report));
    assert_eq!(report_markdown(&back), report_markdown(&report));

    let md_path = dir.path().join("r.md");
    write_report(&report, &md_path, ReportFormat::Markdown).unwrap();
    let md = std::fs::read_to_string(&md_path).unwrap();
    assert!(md.contains("| VI | l | n |"));
}

#[test]
fn heatmaps_are_deterministic_and_monotone() {
    let report = planted_report();
    let jp = &report.matrices_for(L1::JP).unwrap().normalized;
    let a = heatmap_svg(jp, Subset::Vowels, "JP");
    let b = heatmap_svg(jp, Subset::Vowels, "JP");
    assert_eq!(a, b);
    assert_eq!(a.matches("<rect x=").count(), 18 * 18);
    let c = heatmap_svg(jp, Subset::Consonants, "JP");
    assert_eq!(c.matches("<rect x=").count(), 24 * 24);
    // The diagonal of a mostly-correct row is darker than its zero cells.
    let fill = |svg: &str, nth: usize| -> String {
        let rect = svg.match_indices("<rect x=").nth(nth).unwrap().0;
        let at = svg[rect..].find("fill=\"#").unwrap() + rect + 7;
        svg[at..at + 6].to_string()
    };
    assert_eq!(fill(&a, 2), "ffffff");
    assert_ne!(fill(&a, 0), "ffffff");
}

#[test]
fn empty_results_still_render() {
    let records = synthetic_records(L1::EN, &native_model(5), 500);
    let report = run_pipeline(&records, &[], &PipelineConfig::default()).unwrap();
    let md = report_markdown(&report);
    assert!(md.contains("| L1 | Canon | Real | L1 Freq. (%) | Average Freq. (%) | P-value |"));
    assert!(md.contains("schema version: 1"));
}
