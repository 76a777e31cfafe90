//! Utterance manifests: one tab-separated record per line.
//!
//! Columns: `id  l1  proficiency  text  canonical  realized`, with `-` for an
//! absent optional field. Blank lines and lines starting with `#` are
//! ignored.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::confusion::{Proficiency, L1};
use crate::error::{Error, ManifestError, ManifestErrorKind, Result};
use crate::phoneset::PhoneSeq;

const ABSENT: &str = "-";
const COLUMNS: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UtteranceRecord {
    pub id: String,
    pub l1: L1,
    pub proficiency: Option<Proficiency>,
    pub text: Option<String>,
    pub canonical: Option<PhoneSeq>,
    pub realized: PhoneSeq,
}

fn optional(field: &str) -> Option<&str> {
    (field != ABSENT && !field.is_empty()).then_some(field)
}

fn parse_phones(field: &str) -> std::result::Result<PhoneSeq, ManifestErrorKind> {
    PhoneSeq::parse(field).map_err(|e| match e {
        Error::UnknownPhone(s) => ManifestErrorKind::UnknownPhone(s),
        other => ManifestErrorKind::Parse(other.to_string()),
    })
}

/// Parses one manifest line.
pub fn parse_record(line: &str) -> std::result::Result<UtteranceRecord, ManifestErrorKind> {
    let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
    if fields.len() != COLUMNS {
        return Err(ManifestErrorKind::Parse(format!(
            "expected {COLUMNS} tab-separated fields, found {}",
            fields.len()
        )));
    }
    let id = optional(fields[0])
        .ok_or_else(|| ManifestErrorKind::Parse("missing id".into()))?
        .to_string();
    let l1: L1 = fields[1]
        .parse()
        .map_err(|_| ManifestErrorKind::UnknownGroup(fields[1].to_string()))?;
    if l1 == L1::All {
        return Err(ManifestErrorKind::UnknownGroup(fields[1].to_string()));
    }
    let proficiency = optional(fields[2])
        .map(|p| p.parse::<Proficiency>())
        .transpose()
        .map_err(|e| ManifestErrorKind::Parse(e.to_string()))?;
    if l1 == L1::Native && proficiency.is_some() {
        return Err(ManifestErrorKind::Parse(
            "native records carry no proficiency".into(),
        ));
    }
    let text = optional(fields[3]).map(str::to_string);
    let canonical = optional(fields[4]).map(parse_phones).transpose()?;
    if text.is_none() && canonical.is_none() {
        return Err(ManifestErrorKind::Parse(
            "one of text or canonical is required".into(),
        ));
    }
    let realized = optional(fields[5])
        .ok_or_else(|| ManifestErrorKind::Parse("missing realized phones".into()))
        .and_then(parse_phones)?;
    Ok(UtteranceRecord {
        id,
        l1,
        proficiency,
        text,
        canonical,
        realized,
    })
}

/// Parses a whole manifest, collecting every bad line.
pub fn parse_manifest(content: &str) -> Result<Vec<UtteranceRecord>> {
    let mut records = Vec::new();
    let mut errors = Vec::new();
    for (i, line) in content.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        match parse_record(line) {
            Ok(r) => records.push(r),
            Err(kind) => errors.push(ManifestError { line: i + 1, kind }),
        }
    }
    if errors.is_empty() {
        Ok(records)
    } else {
        Err(Error::Manifest(errors))
    }
}

pub fn load_manifest(path: impl AsRef<Path>) -> Result<Vec<UtteranceRecord>> {
    let path = path.as_ref();
    let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_manifest(&content)
}

pub fn format_record(r: &UtteranceRecord) -> String {
    let opt = |s: Option<String>| s.unwrap_or_else(|| ABSENT.to_string());
    [
        r.id.clone(),
        r.l1.code().to_string(),
        opt(r.proficiency.map(|p| p.to_string())),
        opt(r.text.clone()),
        opt(r.canonical.as_ref().map(|c| c.to_string())),
        r.realized.to_string(),
    ]
    .join("\t")
}

pub fn write_manifest(records: &[UtteranceRecord], mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "# id\tl1\tproficiency\ttext\tcanonical\trealized")?;
    for r in records {
        writeln!(out, "{}", format_record(r))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valid_line() {
        let r = parse_record("u1\tVI\t-\t학교\t-\th a k> kk yo").unwrap();
        assert_eq!(r.id, "u1");
        assert_eq!(r.l1, L1::VI);
        assert_eq!(r.text.as_deref(), Some("학교"));
        assert_eq!(r.realized.to_string(), "h a k> kk yo");
        assert!(r.canonical.is_none());
    }

    #[test]
    fn missing_realized() {
        assert!(matches!(
            parse_record("u1\tVI\t-\t학교\t-\t-"),
            Err(ManifestErrorKind::Parse(_))
        ));
        assert!(matches!(
            parse_record("u1\tVI\t-\t학교\t-"),
            Err(ManifestErrorKind::Parse(_))
        ));
    }

    #[test]
    fn unknown_group_and_phone() {
        assert_eq!(
            parse_record("u1\tXX\t-\t학교\t-\th a"),
            Err(ManifestErrorKind::UnknownGroup("XX".into()))
        );
        assert_eq!(
            parse_record("u1\tVI\t-\t-\th a\th zz"),
            Err(ManifestErrorKind::UnknownPhone("zz".into()))
        );
    }

    #[test]
    fn native_without_proficiency() {
        assert!(parse_record("n1\tNATIVE\tbeginner\t학교\t-\th a").is_err());
        assert!(parse_record("n1\tNATIVE\t-\t학교\t-\th a").is_ok());
    }

    #[test]
    fn needs_text_or_canonical() {
        assert!(parse_record("u1\tVI\t-\t-\t-\th a").is_err());
    }

    #[test]
    fn collects_line_numbers() {
        let content = "# header\nu1\tVI\t-\t학교\t-\th a\n\nu2\tXX\t-\t학교\t-\th a\nu3\tVI\t-\t학교\t-\t-\n";
        match parse_manifest(content) {
            Err(Error::Manifest(errors)) => {
                let lines: Vec<_> = errors.iter().map(|e| e.line).collect();
                assert_eq!(lines, [4, 5]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn format_round_trip() {
        let line = "u9\tJP\tadvanced\t-\tp a t a\tp a";
        let r = parse_record(line).unwrap();
        assert_eq!(format_record(&r), line);
    }
}
