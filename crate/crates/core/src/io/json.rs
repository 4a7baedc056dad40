//! Deterministic JSON: sorted object keys, two-space indentation and every
//! float written with 17 significant digits. Reading goes through
//! [`Node`], which tracks the path of each value for error messages.

use std::io;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::linalg::{CMat, RMat};

struct FixedFloat<'a>(PrettyFormatter<'a>);

impl Formatter for FixedFloat<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        // Normalize −0 so that equal values emit equal bytes.
        let v = if value == 0.0 { 0.0 } else { value };
        write!(w, "{v:.16e}")
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Serialize with the fixed float format and a trailing newline.
pub fn to_string(value: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser =
        serde_json::Serializer::with_formatter(&mut buf, FixedFloat(PrettyFormatter::new()));
    value
        .serialize(&mut ser)
        .expect("serializing a JSON value cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serializer emits UTF-8")
}

pub fn real(x: f64) -> Value {
    // Non-finite values have no JSON form; callers never emit them.
    Value::from(x)
}

pub fn complex(z: Complex64) -> Value {
    Value::Array(vec![real(z.re), real(z.im)])
}

pub fn real_matrix(m: &RMat) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| real(m[(i, j)])).collect()))
            .collect(),
    )
}

pub fn complex_matrix(m: &CMat) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| complex(m[(i, j)])).collect()))
            .collect(),
    )
}

pub fn object<const N: usize>(fields: [(&str, Value); N]) -> Value {
    Value::Object(
        fields
            .into_iter()
            .map(|(k, v)| (k.to_owned(), v))
            .collect::<Map<_, _>>(),
    )
}

/// Parse a document, reporting syntax errors by line and column.
pub fn parse(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| {
        Error::parse(
            format!("line {}, column {}", e.line(), e.column()),
            e.to_string(),
        )
    })
}

/// A value together with its path from the document root.
#[derive(Clone, Copy)]
pub struct Node<'a> {
    value: &'a Value,
    path: Path<'a>,
}

#[derive(Clone, Copy)]
enum Path<'a> {
    Root,
    Key(&'a Node<'a>, &'a str),
    Index(&'a Node<'a>, usize),
}

impl<'a> Node<'a> {
    pub fn root(value: &'a Value) -> Self {
        Node {
            value,
            path: Path::Root,
        }
    }

    pub fn value(&self) -> &'a Value {
        self.value
    }

    pub fn path(&self) -> String {
        match self.path {
            Path::Root => "$".to_owned(),
            Path::Key(parent, key) => format!("{}.{}", parent.path(), key),
            Path::Index(parent, i) => format!("{}[{}]", parent.path(), i),
        }
    }

    pub fn error(&self, message: impl Into<String>) -> Error {
        Error::parse(self.path(), message)
    }

    fn object(&self) -> Result<&'a Map<String, Value>> {
        self.value
            .as_object()
            .ok_or_else(|| self.error("expected an object"))
    }

    /// Reject keys outside `allowed`.
    pub fn expect_keys(&self, allowed: &[&str]) -> Result<()> {
        for key in self.object()?.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(self.error(format!("unknown field {key:?}")));
            }
        }
        Ok(())
    }

    pub fn has(&self, key: &str) -> bool {
        self.value.as_object().is_some_and(|o| o.contains_key(key))
    }

    pub fn get(&'a self, key: &'a str) -> Result<Node<'a>> {
        let value = self
            .object()?
            .get(key)
            .ok_or_else(|| self.error(format!("missing field {key:?}")))?;
        Ok(Node {
            value,
            path: Path::Key(self, key),
        })
    }

    pub fn len(&self) -> Result<usize> {
        self.value
            .as_array()
            .map(Vec::len)
            .ok_or_else(|| self.error("expected an array"))
    }

    pub fn is_empty(&self) -> Result<bool> {
        Ok(self.len()? == 0)
    }

    pub fn at(&'a self, i: usize) -> Result<Node<'a>> {
        let arr = self
            .value
            .as_array()
            .ok_or_else(|| self.error("expected an array"))?;
        let value = arr
            .get(i)
            .ok_or_else(|| self.error(format!("missing element {i}")))?;
        Ok(Node {
            value,
            path: Path::Index(self, i),
        })
    }

    pub fn str(&self) -> Result<&'a str> {
        self.value
            .as_str()
            .ok_or_else(|| self.error("expected a string"))
    }

    pub fn usize(&self) -> Result<usize> {
        self.value
            .as_u64()
            .and_then(|u| usize::try_from(u).ok())
            .ok_or_else(|| self.error("expected a nonnegative integer"))
    }

    pub fn f64(&self) -> Result<f64> {
        let x = self
            .value
            .as_f64()
            .ok_or_else(|| self.error("expected a number"))?;
        if !x.is_finite() {
            return Err(self.error("number is not finite"));
        }
        Ok(x)
    }

    /// `[re, im]`, or a bare number for a real value.
    pub fn complex(&self) -> Result<Complex64> {
        if self.value.is_number() {
            return Ok(Complex64::new(self.f64()?, 0.0));
        }
        if self.len()? != 2 {
            return Err(self.error("expected a [re, im] pair"));
        }
        Ok(Complex64::new(self.at(0)?.f64()?, self.at(1)?.f64()?))
    }

    fn matrix<T>(
        &self,
        rows: usize,
        cols: usize,
        entry: impl Fn(&Node) -> Result<T>,
    ) -> Result<Vec<T>> {
        if self.len()? != rows {
            return Err(self.error(format!("expected {rows} rows, found {}", self.len()?)));
        }
        let mut out = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            let row = self.at(i)?;
            if row.len()? != cols {
                return Err(row.error(format!("expected {cols} columns, found {}", row.len()?)));
            }
            for j in 0..cols {
                out.push(entry(&row.at(j)?)?);
            }
        }
        Ok(out)
    }

    pub fn real_matrix(&self, rows: usize, cols: usize) -> Result<RMat> {
        let data = self.matrix(rows, cols, |n| n.f64())?;
        Ok(RMat::from_row_slice(rows, cols, &data))
    }

    pub fn complex_matrix(&self, rows: usize, cols: usize) -> Result<CMat> {
        let data = self.matrix(rows, cols, |n| n.complex())?;
        Ok(CMat::from_row_slice(rows, cols, &data))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    #[test]
    fn fixed_float_format() {
        let v = object([
            ("b", real(0.1)),
            ("a", complex(c(-0.0, 2.0))),
            ("n", Value::from(3u64)),
        ]);
        let text = to_string(&v);
        assert_eq!(
            text,
            "{\n  \"a\": [\n    0.0000000000000000e0,\n    2.0000000000000000e0\n  ],\n  \"b\": 1.0000000000000001e-1,\n  \"n\": 3\n}\n"
        );
        assert_eq!(to_string(&parse(&text).unwrap()), text);
    }

    #[test]
    fn paths_in_errors() {
        let v = parse(r#"{"m": [[1, 2], [3, "x"]]}"#).unwrap();
        let root = Node::root(&v);
        let m = root.get("m").unwrap();
        let err = m.real_matrix(2, 2).unwrap_err().to_string();
        assert!(err.contains("$.m[1][1]"), "{err}");
        assert!(m.real_matrix(3, 2).is_err());
        assert!(root.get("q").is_err());
        assert!(root.expect_keys(&["x"]).is_err());
    }

    #[test]
    fn syntax_error_location() {
        let err = parse("{\n  \"a\": ]\n}").unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
        assert!(parse("[1e999]").is_err());
    }

    #[test]
    fn complex_forms() {
        let v = parse("[2.5, [1, -1]]").unwrap();
        let root = Node::root(&v);
        assert_eq!(root.at(0).unwrap().complex().unwrap(), c(2.5, 0.0));
        assert_eq!(root.at(1).unwrap().complex().unwrap(), c(1.0, -1.0));
    }
}
