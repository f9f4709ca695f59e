//! CSV assembly. Floats carry 17 significant digits so files are
//! reproducible byte for byte.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// Growing CSV text with a provenance comment first.
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(command: &str, provenance: &str) -> Self {
        let mut text = format!("# kerrmetro {VERSION} {command}\n");
        for line in provenance.lines() {
            text.push_str("# ");
            text.push_str(line);
            text.push('\n');
        }
        Csv { text }
    }

    pub fn comment(&mut self, line: &str) {
        self.text.push_str("# ");
        self.text.push_str(line);
        self.text.push('\n');
    }

    pub fn row<S: AsRef<str>>(&mut self, fields: &[S]) {
        let mut first = true;
        for f in fields {
            if !first {
                self.text.push(',');
            }
            self.text.push_str(f.as_ref());
            first = false;
        }
        self.text.push('\n');
    }

    #[cfg(test)]
    pub fn as_str(&self) -> &str {
        &self.text
    }

    /// Writes to `path`, or stdout when absent.
    pub fn emit(&self, path: Option<&Path>) -> io::Result<()> {
        match path {
            Some(p) => fs::write(p, &self.text),
            None => {
                let mut out = io::stdout().lock();
                out.write_all(self.text.as_bytes())?;
                out.flush()
            }
        }
    }
}
