//! Minimal JSON document model with deterministic serialization: object
//! keys keep insertion order and every float is written with 17
//! significant digits, so identical inputs yield byte-identical reports.

/// A JSON value with ordered object fields.
#[derive(Clone, Debug)]
pub enum Doc {
    Bool(bool),
    Int(i64),
    Float(f64),
    Str(String),
    Arr(Vec<Doc>),
    Obj(Vec<(&'static str, Doc)>),
}

pub fn b(v: bool) -> Doc {
    Doc::Bool(v)
}

pub fn i(v: usize) -> Doc {
    Doc::Int(v as i64)
}

pub fn f(v: f64) -> Doc {
    Doc::Float(v)
}

pub fn s(v: impl Into<String>) -> Doc {
    Doc::Str(v.into())
}

pub fn arr(items: impl IntoIterator<Item = Doc>) -> Doc {
    Doc::Arr(items.into_iter().collect())
}

pub fn floats(values: &[f64]) -> Doc {
    Doc::Arr(values.iter().map(|&v| f(v)).collect())
}

pub fn obj(fields: Vec<(&'static str, Doc)>) -> Doc {
    Doc::Obj(fields)
}

/// Fixed-width float form: 17 significant digits in scientific notation,
/// which round-trips every finite f64. Non-finite values become strings,
/// since JSON has no literal for them.
pub fn float_repr(v: f64) -> String {
    if v.is_nan() {
        "\"nan\"".to_string()
    } else if v.is_infinite() {
        if v > 0.0 {
            "\"inf\"".to_string()
        } else {
            "\"-inf\"".to_string()
        }
    } else {
        format!("{v:.16e}")
    }
}

fn escape_into(text: &str, out: &mut String) {
    out.push('"');
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
}

impl Doc {
    fn write_into(&self, indent: usize, out: &mut String) {
        match self {
            Doc::Bool(v) => out.push_str(if *v { "true" } else { "false" }),
            Doc::Int(v) => out.push_str(&v.to_string()),
            Doc::Float(v) => out.push_str(&float_repr(*v)),
            Doc::Str(v) => escape_into(v, out),
            Doc::Arr(items) => {
                if items.is_empty() {
                    out.push_str("[]");
                    return;
                }
                out.push('[');
                for (idx, item) in items.iter().enumerate() {
                    if idx > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    out.push_str(&"  ".repeat(indent + 1));
                    item.write_into(indent + 1, out);
                }
                out.push('\n');
                out.push_str(&"  ".repeat(indent));
                out.push(']');
            }
            Doc::Obj(fields) => {
                if fields.is_empty() {
                    out.push_str("{}");
                    return;
                }
                out.push('{');
                for (idx, (key, value)) in fields.iter().enumerate() {
                    if idx > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    out.push_str(&"  ".repeat(indent + 1));
                    escape_into(key, out);
                    out.push_str(": ");
                    value.write_into(indent + 1, out);
                }
                out.push('\n');
                out.push_str(&"  ".repeat(indent));
                out.push('}');
            }
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write_into(0, &mut out);
        out.push('\n');
        out
    }
}
