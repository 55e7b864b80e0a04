//! Deterministic report formatting.
//!
//! All numeric output goes through [`f17`], which prints 17 significant
//! digits in scientific notation, so identical inputs produce byte-identical
//! JSON and CSV across runs.  JSON objects are assembled with explicit field
//! order.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use crate::CliError;

/// Fixed 17-significant-digit rendering of a float.
pub fn f17(x: f64) -> String {
    format!("{x:.16e}")
}

/// A JSON object with insertion-ordered fields.
pub struct JsonObject {
    buf: String,
    first: bool,
}

impl JsonObject {
    pub fn new() -> Self {
        JsonObject {
            buf: String::from("{"),
            first: true,
        }
    }

    fn sep(&mut self) {
        if !self.first {
            self.buf.push(',');
        }
        self.first = false;
    }

    pub fn num(mut self, key: &str, value: f64) -> Self {
        self.sep();
        let _ = write!(self.buf, "\"{key}\":{}", f17(value));
        self
    }

    pub fn int(mut self, key: &str, value: i64) -> Self {
        self.sep();
        let _ = write!(self.buf, "\"{key}\":{value}");
        self
    }

    pub fn bool(mut self, key: &str, value: bool) -> Self {
        self.sep();
        let _ = write!(self.buf, "\"{key}\":{value}");
        self
    }

    pub fn str(mut self, key: &str, value: &str) -> Self {
        self.sep();
        let _ = write!(self.buf, "\"{key}\":\"{value}\"");
        self
    }

    /// Insert a pre-rendered JSON fragment (array or object).
    pub fn raw(mut self, key: &str, value: &str) -> Self {
        self.sep();
        let _ = write!(self.buf, "\"{key}\":{value}");
        self
    }

    pub fn finish(mut self) -> String {
        self.buf.push('}');
        self.buf
    }
}

/// Render a slice of pre-rendered JSON values as an array.
pub fn json_array(items: &[String]) -> String {
    format!("[{}]", items.join(","))
}

/// Write a file atomically: stage to a sibling temp file, rename on
/// success, so failures leave no partial output behind.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io_err = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp_path = Path::new(&tmp);
    let result = (|| {
        let mut file = fs::File::create(tmp_path).map_err(io_err)?;
        file.write_all(contents.as_bytes()).map_err(io_err)?;
        file.sync_all().map_err(io_err)?;
        drop(file);
        fs::rename(tmp_path, path).map_err(io_err)
    })();
    if result.is_err() {
        fs::remove_file(tmp_path).ok();
    }
    result
}
