use clap::ValueEnum;
use serde::Serialize;
use theta_core::relations::VerificationReport;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    name: &'a str,
    item: String,
    engine: String,
    from: u64,
    to: u64,
    checked: u64,
    status: String,
    witness_n: Option<u64>,
    witness_lhs: Option<&'a str>,
    witness_rhs: Option<&'a str>,
    message: Option<&'a str>,
    flags: String,
    nonzero: usize,
    elapsed_ms: Option<u64>,
}

pub fn render_reports(reports: &[VerificationReport], format: Format) -> Result<String, String> {
    match format {
        Format::Text => Ok(reports.iter().map(|r| format!("{r}\n")).collect()),
        Format::Json => serde_json::to_string_pretty(reports)
            .map(|s| s + "\n")
            .map_err(|e| e.to_string()),
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            for r in reports {
                let w = r.witness.as_ref();
                writer
                    .serialize(CsvRow {
                        name: &r.name,
                        item: r.item.to_string(),
                        engine: r.engine.to_string(),
                        from: r.range.from,
                        to: r.range.to,
                        checked: r.checked,
                        status: r.status.to_string(),
                        witness_n: w.map(|w| w.n),
                        witness_lhs: w.map(|w| w.lhs.as_str()),
                        witness_rhs: w.map(|w| w.rhs.as_str()),
                        message: r.message.as_deref(),
                        flags: r.flags.join(";"),
                        nonzero: r.exceptional.len(),
                        elapsed_ms: r.elapsed_ms,
                    })
                    .map_err(|e| e.to_string())?;
            }
            let bytes = writer.into_inner().map_err(|e| e.to_string())?;
            String::from_utf8(bytes).map_err(|e| e.to_string())
        }
    }
}
