//! OEIS b-files: one `<n> <a(n)>` pair per line, `#` comments, blank lines
//! ignored, indices consecutive and ascending.

use holorec::exactnum::parse_bigint;
use holorec::SequenceTable;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BFileError {
    #[error("line {line}: expected '<n> <a(n)>', got '{text}'")]
    Malformed { line: usize, text: String },
    #[error("line {line}: invalid integer '{text}'")]
    Integer { line: usize, text: String },
    #[error("line {line}: index {found} does not follow {expected_prev}")]
    NonConsecutive {
        line: usize,
        expected_prev: i64,
        found: i64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BFileDocument {
    pub sequence_id: Option<String>,
    pub entries: SequenceTable,
}

/// `A` followed by six or seven digits.
pub fn is_valid_sequence_id(id: &str) -> bool {
    id.strip_prefix('A').is_some_and(|digits| {
        (6..=7).contains(&digits.len()) && digits.bytes().all(|b| b.is_ascii_digit())
    })
}

pub fn parse_bfile(bytes: &[u8]) -> Result<BFileDocument, BFileError> {
    let text = String::from_utf8_lossy(bytes);
    let mut sequence_id = None;
    let mut offset = None;
    let mut terms = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            if sequence_id.is_none() && offset.is_none() {
                let first = comment.split_whitespace().next().unwrap_or("");
                if is_valid_sequence_id(first) {
                    sequence_id = Some(first.to_string());
                }
            }
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let (Some(n_text), Some(a_text), None) = (fields.next(), fields.next(), fields.next())
        else {
            return Err(BFileError::Malformed {
                line,
                text: trimmed.to_string(),
            });
        };
        let n: i64 = n_text.parse().map_err(|_| BFileError::Integer {
            line,
            text: n_text.to_string(),
        })?;
        let a = parse_bigint(a_text).map_err(|_| BFileError::Integer {
            line,
            text: a_text.to_string(),
        })?;
        match offset {
            None => offset = Some(n),
            Some(o) => {
                let prev = o + terms.len() as i64 - 1;
                if n != prev + 1 {
                    return Err(BFileError::NonConsecutive {
                        line,
                        expected_prev: prev,
                        found: n,
                    });
                }
            }
        }
        terms.push(a);
    }
    Ok(BFileDocument {
        sequence_id,
        entries: SequenceTable::new(offset.unwrap_or(0), terms),
    })
}

pub fn write_bfile(doc: &BFileDocument) -> String {
    let mut out = String::new();
    if let Some(id) = &doc.sequence_id {
        out.push_str(&format!("# {id}\n"));
    }
    for (n, a) in doc.entries.iter() {
        out.push_str(&format!("{n} {a}\n"));
    }
    out
}
