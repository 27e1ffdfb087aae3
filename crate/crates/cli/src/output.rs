use std::io::{self, Write};

use clap::ValueEnum;
use delbound_core::{ConeCertificate, Error};
use serde::Serialize;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Serialize)]
pub struct Envelope<T: Serialize> {
    pub schema: u32,
    #[serde(flatten)]
    pub body: T,
}

pub fn json<T: Serialize>(body: T) -> io::Result<()> {
    let out = serde_json::to_string_pretty(&Envelope { schema: SCHEMA, body })?;
    let mut stdout = io::stdout().lock();
    quiet_pipe(writeln!(stdout, "{out}"))
}

/// A closed downstream pipe (e.g. `| head`) is not an error.
fn quiet_pipe(r: io::Result<()>) -> io::Result<()> {
    match r {
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        r => r,
    }
}

pub fn csv_rows<T: Serialize>(rows: &[T]) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(io::stdout().lock());
    for r in rows {
        if let Err(e) = w.serialize(r) {
            return quiet_pipe(Err(e.into()));
        }
    }
    quiet_pipe(w.flush())
}

/// Diagnostic emitted when a command fails.
#[derive(Debug, Serialize)]
pub struct Failure {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    pub kind: &'static str,
    pub message: String,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<ConeCertificate>,
}

impl Failure {
    pub fn new(method: Option<String>, e: &Error) -> Self {
        let kind = match e.exit_code() {
            2 => "validation",
            3 => "no_certified_bound",
            _ => "numeric",
        };
        let certificate = match e {
            Error::NotInCone(c) => Some((**c).clone()),
            _ => None,
        };
        Self { method, kind, message: e.to_string(), exit_code: e.exit_code(), certificate }
    }
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    error: &'a Failure,
}

/// Reports `e` on stderr (and as JSON on stdout for JSON output); returns the
/// process exit code.
pub fn report_error(format: Format, method: Option<String>, e: &Error) -> i32 {
    let failure = Failure::new(method, e);
    eprintln!("error: {e}");
    if format == Format::Json {
        let _ = json(ErrorBody { error: &failure });
    }
    failure.exit_code
}
