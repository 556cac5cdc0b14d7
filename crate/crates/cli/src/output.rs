//! Deterministic CSV emission and atomic file writes.
//!
//! Every float is printed in scientific notation with 12 significant
//! digits and a '.' decimal separator, so identical runs produce
//! byte-identical files.  Files are written to a sibling temp path and
//! renamed into place.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

/// 12 significant digits, locale-independent.
pub fn sig12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{x:.11e}")
}

/// A CSV accumulator: one header, then rows; every row newline-terminated.
pub struct Csv {
    text: String,
    columns: usize,
}

impl Csv {
    pub fn new(header: &str) -> Self {
        let columns = header.split(',').count();
        let mut text = String::with_capacity(4096);
        text.push_str(header);
        text.push('\n');
        Csv { text, columns }
    }

    pub fn row(&mut self, fields: &[String]) {
        assert_eq!(fields.len(), self.columns, "row width mismatch");
        self.text.push_str(&fields.join(","));
        self.text.push('\n');
    }

    pub fn into_string(self) -> String {
        self.text
    }
}

/// Write content to path atomically: temp file in the same directory, then
/// rename over the target.
pub fn write_atomic(path: &Path, content: &str) -> io::Result<()> {
    let mut tmp: PathBuf = path.to_path_buf();
    let name = path
        .file_name()
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "output path has no file name"))?
        .to_os_string();
    let mut tmp_name = name;
    tmp_name.push(".tmp");
    tmp.set_file_name(tmp_name);
    fs::write(&tmp, content)?;
    fs::rename(&tmp, path)
}

/// A generic plain-text plotting script consuming the CSV: column picks
/// and axis hints only, no tool-specific extras beyond gnuplot basics.
pub fn plot_script(csv_path: &Path, title: &str, x: (usize, &str), ys: &[(usize, &str)]) -> String {
    let mut s = String::new();
    s.push_str(&format!("# plot commands for {}\n", csv_path.display()));
    s.push_str("set datafile separator ','\n");
    s.push_str(&format!("set title '{title}'\n"));
    s.push_str(&format!("set xlabel '{}'\n", x.1));
    s.push_str("set key top right\n");
    let parts: Vec<String> = ys
        .iter()
        .map(|(col, label)| {
            format!(
                "'{}' using {}:{} with lines title '{}'",
                csv_path.display(),
                x.0,
                col,
                label
            )
        })
        .collect();
    s.push_str(&format!("plot {}\n", parts.join(", \\\n     ")));
    s
}
