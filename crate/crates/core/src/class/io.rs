//! JSON class and stream files.
//!
//! Class file:
//! `{"instances": [..], "labels": [..], "hypotheses": [{"name": .., "map": [..]}]}`
//! where `map` lists one label name per instance in instance order.
//! Stream file: `{"examples": [{"x": .., "y": ..}]}`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{HypothesisClass, LabelId, Stream, StreamExample};
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassFile {
    instances: Vec<String>,
    labels: Vec<String>,
    hypotheses: Vec<HypothesisEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HypothesisEntry {
    name: String,
    map: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StreamFile {
    examples: Vec<ExampleEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExampleEntry {
    x: String,
    y: String,
}

fn json_error(source: &str, e: serde_json::Error) -> Error {
    Error::parse(
        format!("{source} line {} column {}", e.line(), e.column()),
        e.to_string(),
    )
}

pub fn parse_class(text: &str) -> Result<HypothesisClass> {
    let file: ClassFile = serde_json::from_str(text).map_err(|e| json_error("class file", e))?;
    let lookup = |name: &str| file.labels.iter().position(|l| l == name);
    let mut rows = Vec::with_capacity(file.hypotheses.len());
    let mut names = Vec::with_capacity(file.hypotheses.len());
    for (i, h) in file.hypotheses.iter().enumerate() {
        if h.map.len() != file.instances.len() {
            return Err(Error::parse(
                format!("hypotheses[{i}].map"),
                format!(
                    "'{}' lists {} labels for {} instances",
                    h.name,
                    h.map.len(),
                    file.instances.len()
                ),
            ));
        }
        let mut row = Vec::with_capacity(h.map.len());
        for (j, cell) in h.map.iter().enumerate() {
            let y = lookup(cell).ok_or_else(|| {
                Error::parse(format!("hypotheses[{i}].map[{j}]"), format!("unknown label '{cell}'"))
            })?;
            row.push(LabelId(y as u32));
        }
        rows.push(row);
        names.push(h.name.clone());
    }
    HypothesisClass::new(file.instances, file.labels, names, rows)
}

pub fn class_to_json(class: &HypothesisClass) -> String {
    let file = ClassFile {
        instances: class.instance_names().to_vec(),
        labels: class.label_names().to_vec(),
        hypotheses: (0..class.num_hypotheses())
            .map(|h| HypothesisEntry {
                name: class.hypothesis_name(h).to_string(),
                map: class.row(h).iter().map(|&y| class.label_name(y).to_string()).collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("class file serializes")
}

pub fn load_class(path: impl AsRef<Path>) -> Result<HypothesisClass> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_class(&text)
}

pub fn save_class(class: &HypothesisClass, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, class_to_json(class) + "\n").map_err(|e| Error::io(path, e))
}

/// Parses a stream against `class`; the realizability flag is computed.
pub fn parse_stream(text: &str, class: &HypothesisClass) -> Result<Stream> {
    let file: StreamFile = serde_json::from_str(text).map_err(|e| json_error("stream file", e))?;
    let mut examples = Vec::with_capacity(file.examples.len());
    for (i, ex) in file.examples.iter().enumerate() {
        let x = class.instance_by_name(&ex.x).ok_or_else(|| {
            Error::Validation(format!("examples[{i}].x: unknown instance '{}'", ex.x))
        })?;
        let y = class.label_by_name(&ex.y).ok_or_else(|| {
            Error::Validation(format!("examples[{i}].y: unknown label '{}'", ex.y))
        })?;
        examples.push(StreamExample { x, y });
    }
    let mut stream = Stream::new(examples);
    stream.check_realizable(class);
    Ok(stream)
}

pub fn stream_to_json(stream: &Stream, class: &HypothesisClass) -> String {
    let file = StreamFile {
        examples: stream
            .examples
            .iter()
            .map(|ex| ExampleEntry {
                x: class.instance_name(ex.x).to_string(),
                y: class.label_name(ex.y).to_string(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("stream file serializes")
}

pub fn load_stream(path: impl AsRef<Path>, class: &HypothesisClass) -> Result<Stream> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_stream(&text, class)
}

pub fn save_stream(stream: &Stream, class: &HypothesisClass, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    stream.validate(class)?;
    std::fs::write(path, stream_to_json(stream, class) + "\n").map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::class::{gen_constants, gen_random, with_extra_labels, InstanceId};
    use proptest::prelude::*;

    #[test]
    fn save_then_load_constants() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        let c = gen_constants(3, 2).unwrap();
        save_class(&c, &path).unwrap();
        assert_eq!(load_class(&path).unwrap(), c);
    }

    #[test]
    fn unknown_label_cell_is_a_parse_error() {
        let text = r#"{"instances":["x1"],"labels":["a"],"hypotheses":[{"name":"h","map":["z"]}]}"#;
        match parse_class(text) {
            Err(Error::Parse { context, .. }) => assert_eq!(context, "hypotheses[0].map[0]"),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(parse_class("{\"instances\": [}"), Err(Error::Parse { .. })));
    }

    #[test]
    fn duplicate_rows_are_a_validation_error() {
        let text = r#"{"instances":["x1","x2"],"labels":["a","b"],
            "hypotheses":[{"name":"h1","map":["a","b"]},{"name":"h2","map":["a","b"]}]}"#;
        assert!(matches!(parse_class(text), Err(Error::Validation(_))));
    }

    #[test]
    fn stream_round_trip_and_realizability() {
        let c = gen_constants(3, 2).unwrap();
        let s = Stream::labeled_by(&c, 1, &[InstanceId(0), InstanceId(1), InstanceId(0)]);
        let back = parse_stream(&stream_to_json(&s, &c), &c).unwrap();
        assert_eq!(back.examples, s.examples);
        assert_eq!(back.realizable, Some(true));

        let mixed = r#"{"examples":[{"x":"x1","y":"1"},{"x":"x1","y":"2"}]}"#;
        assert_eq!(parse_stream(mixed, &c).unwrap().realizable, Some(false));
        let empty = parse_stream(r#"{"examples":[]}"#, &c).unwrap();
        assert!(empty.is_empty());
        let bad = r#"{"examples":[{"x":"x9","y":"1"}]}"#;
        assert!(matches!(parse_stream(bad, &c), Err(Error::Validation(_))));
    }

    proptest! {
        #[test]
        fn json_round_trip(m in 1usize..4, k in 1usize..4, seed in any::<u64>(), extra in 0usize..3) {
            let n = (k.pow(m as u32)).min(6);
            let c = with_extra_labels(&gen_random(m, k, n, seed).unwrap(), extra).unwrap();
            prop_assert_eq!(parse_class(&class_to_json(&c)).unwrap(), c);
        }
    }
}
