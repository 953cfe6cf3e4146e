use std::fs;
use std::io::Write;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

/// Exit code for failed checks and property violations.
pub const EXIT_CHECK: u8 = 1;
/// Exit code for bad arguments, unreadable or invalid input.
pub const EXIT_USAGE: u8 = 2;

/// Error printed to stderr as `{"error": {...}}`.
#[derive(Debug, Serialize)]
pub struct CliError {
    pub code: &'static str,
    pub message: String,
    /// File, or file plus JSON path, that caused the error.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(skip)]
    pub exit: u8,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: "usage",
            message: message.into(),
            path: None,
            exit: EXIT_USAGE,
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        Self {
            code: "io",
            message: err.to_string(),
            path: Some(path.display().to_string()),
            exit: EXIT_USAGE,
        }
    }

    pub fn domain(err: blindconv::Error) -> Self {
        Self {
            code: "precondition",
            message: err.to_string(),
            path: None,
            exit: EXIT_USAGE,
        }
    }

    pub fn print(&self) {
        let body = serde_json::json!({ "error": self });
        eprintln!("{}", serde_json::to_string_pretty(&body).expect("plain data"));
    }
}

impl From<blindconv::Error> for CliError {
    fn from(err: blindconv::Error) -> Self {
        Self::domain(err)
    }
}

/// Reads and validates a JSON file, reporting the path of the first
/// offending field.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let json_path = e.path().to_string();
        let inner = e.into_inner();
        CliError {
            code: if inner.is_syntax() || inner.is_eof() { "parse" } else { "schema" },
            message: inner.to_string(),
            path: Some(format!("{}:{}", path.display(), json_path)),
            exit: EXIT_USAGE,
        }
    })
}

/// Sends finished output to `--out` or stdout.
pub fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::io(Path::new("<stdout>"), e))
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data");
    s.push('\n');
    s
}

/// Serializes rows with a header taken from the row type.
pub fn to_csv<R: Serialize>(rows: impl IntoIterator<Item = R>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| CliError::usage(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::usage(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Headerless CSV of numeric rows.
pub fn matrix_csv<'a>(rows: impl IntoIterator<Item = &'a [f64]>) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| CliError::usage(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::usage(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
