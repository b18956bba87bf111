//! Rendering and delivery. Every float that leaves the binary goes through
//! one formatter (12 significant digits, scientific notation) so that
//! repeated runs with the same configuration are byte-identical and
//! regression diffs stay meaningful.

use std::env;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::CliError;

/// Environment variable naming the default directory for `--out` paths.
pub const OUT_DIR_VAR: &str = "MQ2_OUT_DIR";

/// What the report is rendered as. CSV exists for histogram data only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Pretty JSON whose floats are rendered as `{:.11e}` — a fixed 12
/// significant digits — instead of shortest-round-trip notation.
struct TwelveDigitPretty<'a> {
    inner: PrettyFormatter<'a>,
}

impl TwelveDigitPretty<'_> {
    fn new() -> Self {
        TwelveDigitPretty {
            inner: PrettyFormatter::new(),
        }
    }
}

impl Formatter for TwelveDigitPretty<'_> {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{value:.11e}")
    }

    fn begin_array<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.inner.begin_array(writer)
    }

    fn end_array<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.inner.end_array(writer)
    }

    fn begin_array_value<W>(&mut self, writer: &mut W, first: bool) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.inner.begin_array_value(writer, first)
    }

    fn end_array_value<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.inner.end_array_value(writer)
    }

    fn begin_object<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.inner.begin_object(writer)
    }

    fn end_object<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.inner.end_object(writer)
    }

    fn begin_object_key<W>(&mut self, writer: &mut W, first: bool) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.inner.begin_object_key(writer, first)
    }

    fn begin_object_value<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.inner.begin_object_value(writer)
    }

    fn end_object_value<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.inner.end_object_value(writer)
    }
}

/// Serialize `value` as pretty JSON with pinned float formatting, newline
/// terminated.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut buffer = Vec::new();
    let mut serializer =
        serde_json::Serializer::with_formatter(&mut buffer, TwelveDigitPretty::new());
    value
        .serialize(&mut serializer)
        .expect("report serialization is infallible");
    buffer.push(b'\n');
    String::from_utf8(buffer).expect("serde_json emits UTF-8")
}

/// One histogram line: a measured `a'` outcome and its probability mass.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct HistogramRow {
    pub a_prime: u64,
    pub probability: f64,
}

/// The CSV rendering of a histogram, same float convention as the JSON.
pub fn histogram_csv(rows: &[HistogramRow]) -> String {
    let mut text = String::from("a_prime,probability\n");
    for row in rows {
        text.push_str(&format!("{},{:.11e}\n", row.a_prime, row.probability));
    }
    text
}

/// Write `body` to stdout, or to `--out` when given. Relative `--out` paths
/// land inside `$MQ2_OUT_DIR` when that variable is set.
pub fn deliver(body: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        None => io::stdout()
            .write_all(body.as_bytes())
            .map_err(|e| CliError::Usage(format!("cannot write to stdout: {e}"))),
        Some(path) => {
            let resolved = resolve_out_path(path);
            fs::write(&resolved, body).map_err(|e| {
                CliError::Usage(format!("cannot write {}: {e}", resolved.display()))
            })
        }
    }
}

fn resolve_out_path(path: &Path) -> PathBuf {
    if path.is_relative() {
        if let Ok(dir) = env::var(OUT_DIR_VAR) {
            return PathBuf::from(dir).join(path);
        }
    }
    path.to_path_buf()
}
