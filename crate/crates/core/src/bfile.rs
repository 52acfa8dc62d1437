//! OEIS b-file reading and writing.
//!
//! One `index value` pair per line, indices increasing by one, `#` starts a
//! comment line. Blank lines and trailing whitespace are dropped on parse;
//! comments keep their position relative to the entries.

use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BFile {
    offset: u64,
    values: Vec<u64>,
    /// `(entries before the comment, comment text including '#')`
    comments: Vec<(usize, String)>,
}

impl BFile {
    /// A b-file of `values` starting at index 1.
    pub fn from_terms(values: &[u64]) -> Self {
        BFile {
            offset: 1,
            values: values.to_vec(),
            comments: Vec::new(),
        }
    }

    pub fn with_comment(mut self, text: &str) -> Self {
        let line = if text.starts_with('#') {
            text.to_string()
        } else {
            format!("# {text}")
        };
        self.comments.push((self.values.len(), line));
        self
    }

    /// First index; 1 for sequences produced here.
    pub fn offset(&self) -> u64 {
        self.offset
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        (self.offset..).zip(self.values.iter().copied())
    }

    /// Values for indices `1..`, when the file starts at index 1.
    pub fn terms_from_one(&self) -> Result<&[u64]> {
        if self.offset != 1 && !self.values.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "b-file starts at index {}, expected 1",
                self.offset
            )));
        }
        Ok(&self.values)
    }
}

pub fn parse_bfile(text: &str) -> Result<BFile> {
    let mut out = BFile::default();
    let mut next: Option<u64> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            out.comments.push((out.values.len(), line.to_string()));
            continue;
        }
        let mut fields = line.split_whitespace();
        let (Some(idx), Some(val), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::MalformedLine { line: line_no });
        };
        let (Ok(index), Ok(value)) = (idx.parse::<u64>(), val.parse::<u64>()) else {
            return Err(Error::MalformedLine { line: line_no });
        };
        match next {
            None if index == 0 => return Err(Error::MalformedLine { line: line_no }),
            None => out.offset = index,
            Some(expected) if index != expected => {
                return Err(Error::NonContiguousIndex { line: line_no })
            }
            Some(_) => {}
        }
        out.values.push(value);
        next = Some(index + 1);
    }
    if out.values.is_empty() {
        out.offset = 1;
    }
    Ok(out)
}

pub fn serialize_bfile(file: &BFile) -> String {
    let mut out = String::new();
    let mut comments = file.comments.iter().peekable();
    for (pos, (index, value)) in file.entries().enumerate() {
        while let Some((_, c)) = comments.next_if(|(at, _)| *at <= pos) {
            let _ = writeln!(out, "{c}");
        }
        let _ = writeln!(out, "{index} {value}");
    }
    for (_, c) in comments {
        let _ = writeln!(out, "{c}");
    }
    out
}
