//! On-disk JSON formats.
//!
//! Debates file: `{"format_version": "1", "debates": [{id, topic, ia_text, ca_text}]}`.
//! Annotations file: `{"format_version": "1", "annotations": [...]}`.
//! Any `1.x` minor version is accepted; fields unknown to this version are
//! kept on the annotation, node or relation they appeared on and written back
//! on save. Output is canonical: sorted keys, two-space indent, LF endings,
//! trailing newline.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Condvar, Mutex, OnceLock};

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};
use thiserror::Error;

use crate::model::{Annotation, Debate, Extra};

pub const FORMAT_VERSION: &str = "1";

pub const DEBATES_SCHEMA: &str = include_str!("../schemas/debates.schema.json");
pub const ANNOTATIONS_SCHEMA: &str = include_str!("../schemas/annotations.schema.json");
pub const REPORT_SCHEMA: &str = include_str!("../schemas/report.schema.json");

const ANNOTATION_KEYS: &[&str] = &[
    "debate_id",
    "annotator_id",
    "status",
    "base_pattern",
    "central_concept",
    "nodes",
    "relations",
    "text_form",
];
const NODE_KEYS: &[&str] = &["id", "content", "polarity", "negated"];
const RELATION_KEYS: &[&str] = &["id", "kind", "args", "negated", "mitigated", "region"];

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("JSON syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{pointer}: {message}")]
    Schema { pointer: String, message: String },
    #[error("unsupported format_version {0:?} (this build reads 1 and 1.x)")]
    UnsupportedVersion(String),
    #[error("{pointer}: duplicate {what} id {id:?}")]
    DuplicateId { pointer: String, what: &'static str, id: String },
    #[error("{pointer}: debate {id:?} has an empty {field}")]
    EmptyText { pointer: String, id: String, field: &'static str },
    #[error("{pointer}: {message}")]
    Structure { pointer: String, message: String },
}

impl IoError {
    /// JSON pointer of the offending value, when there is one.
    pub fn pointer(&self) -> Option<&str> {
        match self {
            IoError::Schema { pointer, .. }
            | IoError::DuplicateId { pointer, .. }
            | IoError::EmptyText { pointer, .. }
            | IoError::Structure { pointer, .. } => Some(pointer),
            IoError::UnsupportedVersion(_) => Some("/format_version"),
            IoError::Io { .. } | IoError::Syntax { .. } => None,
        }
    }

    fn io(path: &Path, source: std::io::Error) -> Self {
        IoError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// Drops a leading byte-order mark and converts CRLF to LF.
pub fn normalize_input(text: &str) -> String {
    text.strip_prefix('\u{feff}').unwrap_or(text).replace("\r\n", "\n")
}

fn parse_value(text: &str) -> Result<Value, IoError> {
    serde_json::from_str(&normalize_input(text)).map_err(|e| IoError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn escape_token(token: &str) -> String {
    token.replace('~', "~0").replace('/', "~1")
}

fn typed<T: DeserializeOwned>(value: &Value, prefix: &str) -> Result<T, IoError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let mut pointer = prefix.to_string();
        for seg in e.path().iter() {
            use serde_path_to_error::Segment;
            match seg {
                Segment::Seq { index } => pointer.push_str(&format!("/{index}")),
                Segment::Map { key } => pointer.push_str(&format!("/{}", escape_token(key))),
                Segment::Enum { .. } | Segment::Unknown => {}
            }
        }
        IoError::Schema {
            pointer,
            message: e.into_inner().to_string(),
        }
    })
}

fn check_version(root: &Value) -> Result<(), IoError> {
    let version = root.get("format_version").ok_or_else(|| IoError::Schema {
        pointer: "/format_version".into(),
        message: "missing field `format_version`".into(),
    })?;
    let version = version.as_str().ok_or_else(|| IoError::Schema {
        pointer: "/format_version".into(),
        message: "format_version must be a string".into(),
    })?;
    if version == FORMAT_VERSION || version.strip_prefix("1.").is_some_and(|minor| !minor.is_empty()) {
        Ok(())
    } else {
        Err(IoError::UnsupportedVersion(version.to_string()))
    }
}

fn list<'a>(root: &'a Value, key: &str) -> Result<&'a Vec<Value>, IoError> {
    root.get(key).and_then(Value::as_array).ok_or_else(|| IoError::Schema {
        pointer: format!("/{key}"),
        message: format!("expected an array at `{key}`"),
    })
}

pub fn parse_debates(text: &str) -> Result<Vec<Debate>, IoError> {
    let root = parse_value(text)?;
    check_version(&root)?;
    let items = list(&root, "debates")?;
    let mut seen = BTreeSet::new();
    let mut debates = Vec::with_capacity(items.len());
    for (i, item) in items.iter().enumerate() {
        let pointer = format!("/debates/{i}");
        let d: Debate = typed(item, &pointer)?;
        for (field, text) in [("ia_text", &d.ia_text), ("ca_text", &d.ca_text)] {
            if text.trim().is_empty() {
                return Err(IoError::EmptyText {
                    pointer: format!("{pointer}/{field}"),
                    id: d.id.clone(),
                    field,
                });
            }
        }
        if !seen.insert(d.id.clone()) {
            return Err(IoError::DuplicateId {
                pointer: format!("{pointer}/id"),
                what: "debate",
                id: d.id,
            });
        }
        debates.push(d);
    }
    Ok(debates)
}

pub fn load_debates(path: impl AsRef<Path>) -> Result<Vec<Debate>, IoError> {
    let path = path.as_ref();
    parse_debates(&fs::read_to_string(path).map_err(|e| IoError::io(path, e))?)
}

#[derive(Serialize)]
struct DebatesFile<'a> {
    format_version: &'a str,
    debates: &'a [Debate],
}

pub fn debates_to_string(debates: &[Debate]) -> String {
    let value = serde_json::to_value(DebatesFile {
        format_version: FORMAT_VERSION,
        debates,
    })
    .expect("debates serialize");
    to_canonical_string(&value)
}

pub fn save_debates(path: impl AsRef<Path>, debates: &[Debate]) -> Result<(), IoError> {
    write_atomic(path.as_ref(), debates_to_string(debates).as_bytes())
}

fn unknown_fields(value: &Value, known: &[&str]) -> Extra {
    value
        .as_object()
        .map(|obj| {
            obj.iter()
                .filter(|(k, _)| !known.contains(&k.as_str()))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect()
        })
        .unwrap_or_default()
}

/// Decodes one annotation object. `pointer` prefixes error locations.
pub fn annotation_from_value(value: &Value, pointer: &str) -> Result<Annotation, IoError> {
    let mut ann: Annotation = typed(value, pointer)?;
    ann.extra = unknown_fields(value, ANNOTATION_KEYS);
    let nested = |key: &str| value.get(key).and_then(Value::as_array).cloned().unwrap_or_default();
    for (node, raw) in ann.nodes.iter_mut().zip(nested("nodes")) {
        node.extra = unknown_fields(&raw, NODE_KEYS);
    }
    for (rel, raw) in ann.relations.iter_mut().zip(nested("relations")) {
        rel.extra = unknown_fields(&raw, RELATION_KEYS);
    }
    check_structure(&ann, pointer)?;
    Ok(ann)
}

fn merge_extra(target: &mut Value, extra: &Extra) {
    if let Some(obj) = target.as_object_mut() {
        for (k, v) in extra {
            obj.entry(k.clone()).or_insert_with(|| v.clone());
        }
    }
}

/// Encodes one annotation, including any carried unknown fields.
pub fn annotation_to_value(ann: &Annotation) -> Value {
    let mut value = serde_json::to_value(ann).expect("annotations serialize");
    merge_extra(&mut value, &ann.extra);
    if let Some(nodes) = value.get_mut("nodes").and_then(Value::as_array_mut) {
        for (raw, node) in nodes.iter_mut().zip(&ann.nodes) {
            merge_extra(raw, &node.extra);
        }
    }
    if let Some(rels) = value.get_mut("relations").and_then(Value::as_array_mut) {
        for (raw, rel) in rels.iter_mut().zip(&ann.relations) {
            merge_extra(raw, &rel.extra);
        }
    }
    value
}

/// Structural well-formedness required for saving: unique ids across nodes
/// and relations, and Not-Applicable annotations carry no graph.
pub fn check_structure(ann: &Annotation, pointer: &str) -> Result<(), IoError> {
    if ann.is_not_applicable() && (!ann.nodes.is_empty() || !ann.relations.is_empty()) {
        return Err(IoError::Structure {
            pointer: format!("{pointer}/status"),
            message: "a not_applicable annotation must not have nodes or relations".into(),
        });
    }
    let mut seen = BTreeSet::new();
    let ids = ann
        .nodes
        .iter()
        .enumerate()
        .map(|(i, n)| (&n.id, "node", format!("{pointer}/nodes/{i}/id")))
        .chain(
            ann.relations
                .iter()
                .enumerate()
                .map(|(i, r)| (&r.id, "relation", format!("{pointer}/relations/{i}/id"))),
        );
    for (id, what, at) in ids {
        if !seen.insert(id) {
            return Err(IoError::DuplicateId {
                pointer: at,
                what,
                id: id.clone(),
            });
        }
    }
    Ok(())
}

pub fn parse_annotations(text: &str) -> Result<Vec<Annotation>, IoError> {
    let root = parse_value(text)?;
    check_version(&root)?;
    list(&root, "annotations")?
        .iter()
        .enumerate()
        .map(|(i, v)| annotation_from_value(v, &format!("/annotations/{i}")))
        .collect()
}

pub fn load_annotations(path: impl AsRef<Path>) -> Result<Vec<Annotation>, IoError> {
    let path = path.as_ref();
    let _guard = lock_path(path);
    parse_annotations(&fs::read_to_string(path).map_err(|e| IoError::io(path, e))?)
}

pub fn annotations_to_string(annotations: &[Annotation]) -> Result<String, IoError> {
    for (i, ann) in annotations.iter().enumerate() {
        check_structure(ann, &format!("/annotations/{i}"))?;
    }
    let mut root = Map::new();
    root.insert("format_version".into(), Value::from(FORMAT_VERSION));
    root.insert(
        "annotations".into(),
        Value::Array(annotations.iter().map(annotation_to_value).collect()),
    );
    Ok(to_canonical_string(&Value::Object(root)))
}

pub fn save_annotations(path: impl AsRef<Path>, annotations: &[Annotation]) -> Result<(), IoError> {
    let path = path.as_ref();
    let text = annotations_to_string(annotations)?;
    let _guard = lock_path(path);
    write_atomic(path, text.as_bytes())
}

/// Annotation debate ids with no matching debate, in first-seen order.
pub fn dangling_debate_ids(annotations: &[Annotation], debates: &[Debate]) -> Vec<String> {
    let known: BTreeSet<&str> = debates.iter().map(|d| d.id.as_str()).collect();
    let mut out: Vec<String> = Vec::new();
    for a in annotations {
        if !known.contains(a.debate_id.as_str()) && !out.contains(&a.debate_id) {
            out.push(a.debate_id.clone());
        }
    }
    out
}

fn sorted(value: &Value) -> Value {
    match value {
        Value::Object(obj) => {
            let mut keys: Vec<&String> = obj.keys().collect();
            keys.sort();
            Value::Object(keys.into_iter().map(|k| (k.clone(), sorted(&obj[k]))).collect())
        }
        Value::Array(items) => Value::Array(items.iter().map(sorted).collect()),
        other => other.clone(),
    }
}

/// Pretty-printed JSON with recursively sorted keys and a trailing newline.
pub fn to_canonical_string(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(&sorted(value)).expect("JSON values serialize");
    text.push('\n');
    text
}

/// Wraps a report in the versioned envelope `{format_version, kind, report}`.
pub fn report_to_json<T: Serialize>(kind: &str, report: &T) -> String {
    let mut root = Map::new();
    root.insert("format_version".into(), Value::from(FORMAT_VERSION));
    root.insert("kind".into(), Value::from(kind));
    root.insert("report".into(), serde_json::to_value(report).expect("reports serialize"));
    to_canonical_string(&Value::Object(root))
}

struct PathGuard(PathBuf);

fn busy_paths() -> &'static (Mutex<BTreeSet<PathBuf>>, Condvar) {
    static BUSY: OnceLock<(Mutex<BTreeSet<PathBuf>>, Condvar)> = OnceLock::new();
    BUSY.get_or_init(Default::default)
}

/// Serializes file operations on one path within this process.
fn lock_path(path: &Path) -> PathGuard {
    let key = match (path.parent(), path.file_name()) {
        (Some(dir), Some(name)) => dir
            .canonicalize()
            .map(|d| d.join(name))
            .unwrap_or_else(|_| path.to_path_buf()),
        _ => path.to_path_buf(),
    };
    let (set, cond) = busy_paths();
    let mut busy = set.lock().unwrap_or_else(|p| p.into_inner());
    while busy.contains(&key) {
        busy = cond.wait(busy).unwrap_or_else(|p| p.into_inner());
    }
    busy.insert(key.clone());
    PathGuard(key)
}

impl Drop for PathGuard {
    fn drop(&mut self) {
        let (set, cond) = busy_paths();
        set.lock().unwrap_or_else(|p| p.into_inner()).remove(&self.0);
        cond.notify_all();
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), IoError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| IoError::io(path, e))?;
    tmp.write_all(bytes).map_err(|e| IoError::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| IoError::io(path, e))?;
    tmp.persist(path).map_err(|e| IoError::io(path, e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use serde_json::json;

    fn debates_json() -> String {
        debates_to_string(&[fixtures::fig1_debate(), fixtures::homework_debate()])
    }

    #[test]
    fn debates_parse() {
        let ds = parse_debates(&debates_json()).unwrap();
        assert_eq!(ds.len(), 2);
    }

    #[test]
    fn bom_and_crlf_are_normalized() {
        let lf = debates_json();
        let crlf = format!("\u{feff}{}", lf.replace('\n', "\r\n"));
        assert_eq!(parse_debates(&crlf).unwrap(), parse_debates(&lf).unwrap());
    }

    #[test]
    fn duplicate_debate_is_named() {
        let d = fixtures::fig1_debate();
        let text = debates_to_string(&[d.clone(), d.clone()]);
        let err = parse_debates(&text).unwrap_err();
        assert!(matches!(&err, IoError::DuplicateId { id, .. } if *id == d.id), "{err}");
        assert_eq!(err.pointer(), Some("/debates/1/id"));
    }

    #[test]
    fn empty_text_rejected() {
        let text = json!({"format_version": "1", "debates": [{"id": "a", "topic": "t", "ia_text": " ", "ca_text": "x"}]});
        let err = parse_debates(&text.to_string()).unwrap_err();
        assert!(matches!(err, IoError::EmptyText { field: "ia_text", .. }));
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_debates("{\n  \"format_version\": \"1\",\n  \"debates\": [,]\n}").unwrap_err();
        assert!(matches!(err, IoError::Syntax { line: 3, .. }), "{err}");
    }

    #[test]
    fn versions() {
        for ok in ["1", "1.3"] {
            assert!(parse_debates(&json!({"format_version": ok, "debates": []}).to_string()).is_ok());
        }
        for bad in ["2", "1.", "0.9"] {
            assert!(matches!(
                parse_debates(&json!({"format_version": bad, "debates": []}).to_string()),
                Err(IoError::UnsupportedVersion(_))
            ));
        }
    }

    #[test]
    fn fig1_round_trip_through_disk() {
        let (_, ann) = fixtures::fig1();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.json");
        save_annotations(&path, std::slice::from_ref(&ann)).unwrap();
        let first = fs::read(&path).unwrap();
        assert_eq!(load_annotations(&path).unwrap(), vec![ann.clone()]);
        save_annotations(&path, &[ann]).unwrap();
        assert_eq!(fs::read(&path).unwrap(), first);
        assert!(first.ends_with(b"\n") && !first.contains(&b'\r'));
    }

    #[test]
    fn unknown_enum_cites_field() {
        let (_, ann) = fixtures::fig1();
        let mut v = json!({"format_version": "1", "annotations": [annotation_to_value(&ann)]});
        v["annotations"][0]["relations"][0]["kind"] = json!("promotes");
        let err = parse_annotations(&v.to_string()).unwrap_err();
        assert_eq!(err.pointer(), Some("/annotations/0/relations/0/kind"));
        assert!(err.to_string().contains("promotes"), "{err}");
    }

    #[test]
    fn unknown_fields_survive() {
        let (_, ann) = fixtures::fig1();
        let mut v = json!({"format_version": "1.4", "annotations": [annotation_to_value(&ann)]});
        v["annotations"][0]["reviewer"] = json!("kim");
        v["annotations"][0]["nodes"][1]["color"] = json!("#ff0");
        v["annotations"][0]["relations"][2]["weight"] = json!(0.25);
        let loaded = parse_annotations(&v.to_string()).unwrap();
        assert_eq!(loaded[0].extra["reviewer"], json!("kim"));
        let out: Value = serde_json::from_str(&annotations_to_string(&loaded).unwrap()).unwrap();
        assert_eq!(out["annotations"][0]["reviewer"], json!("kim"));
        assert_eq!(out["annotations"][0]["nodes"][1]["color"], json!("#ff0"));
        assert_eq!(out["annotations"][0]["relations"][2]["weight"], json!(0.25));
        assert_eq!(out["format_version"], json!("1"));
    }

    #[test]
    fn structure_checks() {
        let (_, ann) = fixtures::fig1();
        let mut dup = ann.clone();
        dup.relations[1].id = dup.nodes[0].id.clone();
        assert!(matches!(annotations_to_string(&[dup]), Err(IoError::DuplicateId { .. })));
        let mut na = Annotation::not_applicable("fig1", "a");
        na.nodes = ann.nodes.clone();
        assert!(matches!(annotations_to_string(&[na]), Err(IoError::Structure { .. })));
    }

    #[test]
    fn dangling_ids() {
        let (d, ann) = fixtures::fig1();
        let other = Annotation::not_applicable("ghost", "a");
        assert_eq!(dangling_debate_ids(&[ann, other.clone(), other], &[d]), ["ghost"]);
    }

    #[test]
    fn keys_are_sorted_recursively() {
        let text = to_canonical_string(&json!({"b": 1, "a": {"d": [{"z": 1, "y": 2}], "c": 0.1}}));
        assert_eq!(
            text,
            "{\n  \"a\": {\n    \"c\": 0.1,\n    \"d\": [\n      {\n        \"y\": 2,\n        \"z\": 1\n      }\n    ]\n  },\n  \"b\": 1\n}\n"
        );
    }
}
