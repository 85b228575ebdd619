//! Labels, content categories, and the CSV files exchanged between commands:
//! dataset manifests, feature tables and prediction lists.

use std::collections::HashSet;
use std::fmt;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::FeatureSchema;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Authentic,
    Spliced,
}

impl Label {
    /// −1 for authentic, +1 for spliced.
    pub fn sign(self) -> f64 {
        match self {
            Label::Authentic => -1.0,
            Label::Spliced => 1.0,
        }
    }

    /// Maps a decision value to a label; zero counts as spliced.
    pub fn from_decision(value: f64) -> Self {
        if value >= 0.0 {
            Label::Spliced
        } else {
            Label::Authentic
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Authentic => "authentic",
            Label::Spliced => "spliced",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "authentic" => Ok(Label::Authentic),
            "spliced" => Ok(Label::Spliced),
            other => Err(Error::invalid(format!("unknown label `{other}` (expected authentic or spliced)"))),
        }
    }
}

/// Image content classes used to break down results.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Category {
    UniformTexture,
    UniformSmooth,
    TextureTexture,
    SmoothSmooth,
    TextureSmooth,
    Uncategorized,
}

impl Category {
    /// The five named categories, in report order.
    pub const NAMED: [Category; 5] = [
        Category::UniformTexture,
        Category::UniformSmooth,
        Category::TextureTexture,
        Category::SmoothSmooth,
        Category::TextureSmooth,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            Category::UniformTexture => "uniform-texture",
            Category::UniformSmooth => "uniform-smooth",
            Category::TextureTexture => "texture-texture",
            Category::SmoothSmooth => "smooth-smooth",
            Category::TextureSmooth => "texture-smooth",
            Category::Uncategorized => "uncategorized",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Category::UniformTexture => "Uniform Texture",
            Category::UniformSmooth => "Uniform Smooth",
            Category::TextureTexture => "Texture-to-Texture",
            Category::SmoothSmooth => "Smooth-to-Smooth",
            Category::TextureSmooth => "Texture-to-Smooth",
            Category::Uncategorized => "Uncategorized",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for Category {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        if s.is_empty() {
            return Ok(Category::Uncategorized);
        }
        Category::NAMED
            .into_iter()
            .chain([Category::Uncategorized])
            .find(|c| c.slug() == s)
            .ok_or_else(|| Error::invalid(format!("unknown category `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifestRow {
    /// Path exactly as written in the manifest.
    pub path: String,
    pub label: Label,
    pub category: Category,
}

/// A row that could not be parsed, with its 1-based line number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RejectedRow {
    pub line: u64,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Manifest {
    pub rows: Vec<ManifestRow>,
    /// Directory that relative image paths are resolved against.
    pub base_dir: PathBuf,
}

impl Manifest {
    /// Parses a `path,label,category` CSV. Malformed rows are returned
    /// separately; a missing header or duplicate paths fail the whole file.
    pub fn parse<R: Read>(reader: R, base_dir: impl Into<PathBuf>) -> Result<(Self, Vec<RejectedRow>)> {
        let mut rdr = csv::ReaderBuilder::new().flexible(true).trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers()?.clone();
        let col = |name: &str| {
            headers
                .iter()
                .position(|h| h.eq_ignore_ascii_case(name))
                .ok_or_else(|| Error::invalid(format!("manifest header lacks a `{name}` column")))
        };
        let (pi, li) = (col("path")?, col("label")?);
        let ci = headers.iter().position(|h| h.eq_ignore_ascii_case("category"));

        let mut rows = Vec::new();
        let mut rejected = Vec::new();
        let mut seen = HashSet::new();
        for record in rdr.records() {
            let record = record?;
            let line = record.position().map_or(0, |p| p.line());
            let parsed = (|| -> Result<ManifestRow> {
                let path = record.get(pi).filter(|p| !p.is_empty()).ok_or_else(|| Error::invalid("missing path"))?;
                let label = record.get(li).ok_or_else(|| Error::invalid("missing label"))?.parse()?;
                let category = match ci.and_then(|i| record.get(i)) {
                    Some(c) => c.parse()?,
                    None => Category::Uncategorized,
                };
                Ok(ManifestRow { path: path.to_owned(), label, category })
            })();
            match parsed {
                Ok(row) => {
                    if !seen.insert(row.path.clone()) {
                        return Err(Error::invalid(format!("duplicate manifest path `{}` on line {line}", row.path)));
                    }
                    rows.push(row);
                }
                Err(e) => rejected.push(RejectedRow { line, message: e.to_string() }),
            }
        }
        Ok((Self { rows, base_dir: base_dir.into() }, rejected))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<(Self, Vec<RejectedRow>)> {
        let path = path.as_ref();
        let file = std::fs::File::open(path)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(file, base)
    }

    pub fn resolve(&self, row: &ManifestRow) -> PathBuf {
        let p = Path::new(&row.path);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn write<W: Write>(rows: &[ManifestRow], writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["path", "label", "category"])?;
        for r in rows {
            w.write_record([r.path.as_str(), r.label.as_str(), r.category.slug()])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FeatureRow {
    pub path: String,
    pub label: Label,
    pub category: Category,
    pub values: Vec<f64>,
}

/// Feature CSV: a `# schema_version=...` line, a header naming every column,
/// then one row per image.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureTable {
    pub schema: FeatureSchema,
    pub rows: Vec<FeatureRow>,
}

const SCHEMA_LINE: &str = "# schema_version=";

impl FeatureTable {
    pub fn new(schema: FeatureSchema) -> Self {
        Self { schema, rows: Vec::new() }
    }

    pub fn matrix(&self) -> Vec<Vec<f64>> {
        self.rows.iter().map(|r| r.values.clone()).collect()
    }

    pub fn labels(&self) -> Vec<Label> {
        self.rows.iter().map(|r| r.label).collect()
    }

    pub fn write<W: Write>(&self, mut writer: W) -> Result<()> {
        writeln!(writer, "{SCHEMA_LINE}{}", self.schema.version())?;
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["path".to_owned(), "label".to_owned(), "category".to_owned()];
        header.extend(self.schema.names());
        w.write_record(&header)?;
        for row in &self.rows {
            let mut rec = vec![row.path.clone(), row.label.to_string(), row.category.to_string()];
            rec.extend(row.values.iter().map(|v| v.to_string()));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read<R: Read>(mut reader: R) -> Result<Self> {
        let mut text = String::new();
        reader.read_to_string(&mut text)?;
        let (first, rest) = text.split_once('\n').unwrap_or((&text, ""));
        let version = first
            .trim_end_matches('\r')
            .strip_prefix(SCHEMA_LINE)
            .ok_or_else(|| Error::Schema { expected: format!("{SCHEMA_LINE}<version>"), found: first.to_owned() })?;
        let schema = FeatureSchema::parse_version(version.trim())?;

        let mut rdr = csv::Reader::from_reader(rest.as_bytes());
        let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
        let mut expected = vec!["path".to_owned(), "label".to_owned(), "category".to_owned()];
        expected.extend(schema.names());
        if header != expected {
            return Err(Error::Schema { expected: expected.join(","), found: header.join(",") });
        }
        let mut rows = Vec::new();
        for record in rdr.records() {
            let record = record?;
            let line = record.position().map_or(0, |p| p.line() + 1);
            let bad = |m: String| Error::invalid(format!("feature row on line {line}: {m}"));
            let values = record
                .iter()
                .skip(3)
                .map(|v| v.parse::<f64>().map_err(|e| bad(format!("`{v}`: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            if values.iter().any(|v| !v.is_finite()) {
                return Err(bad("non-finite feature".into()));
            }
            rows.push(FeatureRow {
                path: record[0].to_owned(),
                label: record[1].parse().map_err(|e: Error| bad(e.to_string()))?,
                category: record[2].parse().map_err(|e: Error| bad(e.to_string()))?,
                values,
            });
        }
        Ok(Self { schema, rows })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::read(std::fs::File::open(path)?)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PredictionRow {
    pub path: String,
    pub true_label: Option<Label>,
    pub predicted_label: Label,
    pub decision_value: f64,
    pub category: Category,
}

pub fn write_predictions<W: Write>(rows: &[PredictionRow], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["path", "true_label", "predicted_label", "decision_value", "category"])?;
    for r in rows {
        w.write_record([
            r.path.clone(),
            r.true_label.map(|l| l.to_string()).unwrap_or_default(),
            r.predicted_label.to_string(),
            r.decision_value.to_string(),
            r.category.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_predictions<R: Read>(reader: R) -> Result<Vec<PredictionRow>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    let expected = ["path", "true_label", "predicted_label", "decision_value", "category"];
    if header != expected {
        return Err(Error::Schema { expected: expected.join(","), found: header.join(",") });
    }
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let true_label = match record[1].trim() {
            "" => None,
            s => Some(s.parse()?),
        };
        rows.push(PredictionRow {
            path: record[0].to_owned(),
            true_label,
            predicted_label: record[2].parse()?,
            decision_value: record[3]
                .parse()
                .map_err(|_| Error::invalid(format!("bad decision value `{}`", &record[3])))?,
            category: record[4].parse()?,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_conventions() {
        assert_eq!(Label::Authentic.sign(), -1.0);
        assert_eq!(Label::Spliced.sign(), 1.0);
        assert_eq!(Label::from_decision(0.0), Label::Spliced);
        assert_eq!(Label::from_decision(-1e-300), Label::Authentic);
        assert_eq!("Spliced".parse::<Label>().unwrap(), Label::Spliced);
        assert!("fake".parse::<Label>().is_err());
    }

    #[test]
    fn manifest_rows_and_rejections() {
        let text = "path,label,category\na.pgm,authentic,uniform-smooth\nb.pgm,bogus,uniform-smooth\nc.pgm,spliced,\n";
        let (m, rejected) = Manifest::parse(text.as_bytes(), "/data").unwrap();
        assert_eq!(m.rows.len(), 2);
        assert_eq!(m.rows[1].category, Category::Uncategorized);
        assert_eq!(rejected.len(), 1);
        assert_eq!(rejected[0].line, 3);
        assert_eq!(m.resolve(&m.rows[0]), PathBuf::from("/data/a.pgm"));
    }

    #[test]
    fn manifest_requires_header_and_unique_paths() {
        assert!(Manifest::parse("a.pgm,authentic\n".as_bytes(), "").is_err());
        let dup = "path,label,category\na.pgm,authentic,\na.pgm,spliced,\n";
        assert!(Manifest::parse(dup.as_bytes(), "").is_err());
    }

    #[test]
    fn feature_table_round_trip() {
        let schema = FeatureSchema::default();
        let mut table = FeatureTable::new(schema);
        table.rows.push(FeatureRow {
            path: "x, with comma.pgm".into(),
            label: Label::Spliced,
            category: Category::TextureSmooth,
            values: (0..40).map(|i| (i as f64).sqrt() * 1e-3 + 0.1).collect(),
        });
        let mut buf = Vec::new();
        table.write(&mut buf).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with("# schema_version=splicestat-v1-b8-l3\n"));
        assert_eq!(FeatureTable::read(buf.as_slice()).unwrap(), table);
    }

    #[test]
    fn feature_table_schema_mismatch() {
        let text = "# schema_version=splicestat-v1-b8-l2\npath,label,category,dc_mu\n";
        assert!(matches!(FeatureTable::read(text.as_bytes()), Err(Error::Schema { .. })));
        assert!(matches!(FeatureTable::read("path,label\n".as_bytes()), Err(Error::Schema { .. })));
    }

    #[test]
    fn predictions_round_trip() {
        let rows = vec![PredictionRow {
            path: "a.pgm".into(),
            true_label: Some(Label::Authentic),
            predicted_label: Label::Spliced,
            decision_value: 0.125,
            category: Category::SmoothSmooth,
        }];
        let mut buf = Vec::new();
        write_predictions(&rows, &mut buf).unwrap();
        assert_eq!(read_predictions(buf.as_slice()).unwrap(), rows);
    }
}
