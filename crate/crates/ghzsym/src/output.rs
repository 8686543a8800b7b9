//! Number formatting, metadata headers and the CSV/JSON encodings of reports.

use std::io::{self, Write};

use ghzsym_core::optimizer::SeesawConfig;
use ghzsym_core::region::{NonlocalityReport, ScanPoint};
use serde::Serialize;
use serde_json::{json, Map, Value};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Significant digits of every printed float.
pub const SIG_DIGITS: usize = 12;

/// `%.12g`-style formatting: fixed notation for exponents in [−5, 12),
/// scientific otherwise, trailing zeros removed. `-0` prints as `0`.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci
        .split_once('e')
        .expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIG_DIGITS as i32).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// `x` rounded to [`SIG_DIGITS`] significant digits, for JSON output.
pub fn round_sig(x: f64) -> f64 {
    fmt_num(x).parse().unwrap_or(x)
}

fn json_num(x: f64) -> Value {
    json!(round_sig(x))
}

/// Self-describing header written at the top of every output stream.
#[derive(Debug, Clone, PartialEq)]
pub struct Metadata {
    pub command: String,
    pub seed: Option<u64>,
    pub seesaw: Option<SeesawConfig>,
    pub timestamp: Option<u64>,
    pub extra: Vec<(String, String)>,
}

impl Metadata {
    pub fn new(command: &str) -> Self {
        Metadata {
            command: command.into(),
            seed: None,
            seesaw: None,
            timestamp: None,
            extra: Vec::new(),
        }
    }

    pub fn with_seesaw(mut self, config: &SeesawConfig) -> Self {
        self.seed = Some(config.seed);
        self.seesaw = Some(*config);
        self
    }

    pub fn with_timestamp(mut self, enabled: bool) -> Self {
        self.timestamp = enabled.then(|| {
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0)
        });
        self
    }

    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.extra.push((key.into(), value.to_string()));
    }

    /// Ordered key/value pairs; the timestamp, when present, comes last.
    pub fn entries(&self) -> Vec<(String, String)> {
        let mut out = vec![
            ("tool".to_string(), "ghzsym".to_string()),
            ("version".to_string(), VERSION.to_string()),
            ("command".to_string(), self.command.clone()),
        ];
        if let Some(seed) = self.seed {
            out.push(("seed".into(), seed.to_string()));
        }
        if let Some(cfg) = &self.seesaw {
            out.push(("starts".into(), cfg.starts.to_string()));
            out.push(("seesaw_tol".into(), fmt_num(cfg.tol)));
            out.push(("max_sweeps".into(), cfg.max_sweeps.to_string()));
        }
        out.push((
            "validate_slack".into(),
            fmt_num(ghzsym_core::state::VALIDATE_SLACK),
        ));
        out.push((
            "boundary_slack".into(),
            fmt_num(ghzsym_core::entanglement::BOUNDARY_SLACK),
        ));
        out.push((
            "l15_window".into(),
            fmt_num(ghzsym_core::region::L15_WINDOW),
        ));
        out.extend(self.extra.iter().cloned());
        if let Some(ts) = self.timestamp {
            out.push(("timestamp_unix".into(), ts.to_string()));
        }
        out
    }

    /// `# key: value` lines.
    pub fn write_comment_block(&self, out: &mut dyn Write) -> io::Result<()> {
        for (k, v) in self.entries() {
            writeln!(out, "# {k}: {v}")?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (k, v) in self.entries() {
            map.insert(k, Value::String(v));
        }
        Value::Object(map)
    }
}

pub const CSV_HEADER: [&str; 17] = [
    "p",
    "q",
    "valid",
    "ent_class",
    "cgm",
    "cgm_unclamped",
    "mermin_max",
    "l15_max",
    "svet_max",
    "ns99_max",
    "mermin_num",
    "l15_num",
    "svet_num",
    "ns99_num",
    "standard_nl",
    "genuine_nl",
    "witnesses",
];

/// Field values of one scan row, in [`CSV_HEADER`] order.
pub fn csv_fields(point: &ScanPoint) -> Vec<String> {
    let mut row = vec![fmt_num(point.p), fmt_num(point.q)];
    let Some(r) = &point.report else {
        row.push("false".into());
        row.resize(CSV_HEADER.len(), String::new());
        return row;
    };
    row.push("true".into());
    row.push(r.ent_class.as_str().into());
    for x in [
        r.cgm,
        r.cgm_unclamped,
        r.mermin_max,
        r.l15_max,
        r.svet_max,
        r.ns99_max,
    ] {
        row.push(fmt_num(x));
    }
    match &r.numeric {
        Some(n) => {
            for x in [n.mermin, n.sliwa15, n.svetlichny, n.bancal99] {
                row.push(fmt_num(x));
            }
        }
        None => row.extend(std::iter::repeat_n(String::new(), 4)),
    }
    row.push(r.standard_nonlocal().to_string());
    row.push(r.genuine_nonlocal().to_string());
    row.push(r.witnesses().join(";"));
    row
}

pub fn write_scan_csv(
    out: &mut dyn Write,
    meta: &Metadata,
    points: &[ScanPoint],
) -> io::Result<()> {
    meta.write_comment_block(out)?;
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(CSV_HEADER)?;
    for point in points {
        writer.write_record(csv_fields(point))?;
    }
    writer.flush()
}

/// One report as a JSON object with the scan field names.
pub fn report_json(p: f64, q: f64, report: Option<&NonlocalityReport>) -> Value {
    let mut map = Map::new();
    map.insert("p".into(), json_num(p));
    map.insert("q".into(), json_num(q));
    map.insert("valid".into(), json!(report.is_some()));
    if let Some(r) = report {
        map.insert("ent_class".into(), json!(r.ent_class.as_str()));
        for (k, v) in [
            ("cgm", r.cgm),
            ("cgm_unclamped", r.cgm_unclamped),
            ("mermin_max", r.mermin_max),
            ("l15_max", r.l15_max),
            ("svet_max", r.svet_max),
            ("ns99_max", r.ns99_max),
        ] {
            map.insert(k.into(), json_num(v));
        }
        let numeric = r
            .numeric
            .map(|n| [n.mermin, n.sliwa15, n.svetlichny, n.bancal99]);
        for (i, k) in ["mermin_num", "l15_num", "svet_num", "ns99_num"]
            .into_iter()
            .enumerate()
        {
            map.insert(k.into(), numeric.map_or(Value::Null, |v| json_num(v[i])));
        }
        if let Some(n) = r.numeric {
            map.insert("numeric_converged".into(), json!(n.converged));
        }
        map.insert("standard_nl".into(), json!(r.standard_nonlocal()));
        map.insert("genuine_nl".into(), json!(r.genuine_nonlocal()));
        map.insert("witnesses".into(), json!(r.witnesses()));
    }
    Value::Object(map)
}

pub fn write_scan_json(
    out: &mut dyn Write,
    meta: &Metadata,
    points: &[ScanPoint],
) -> io::Result<()> {
    let doc = json!({
        "metadata": meta.to_json(),
        "points": points.iter().map(|s| report_json(s.p, s.q, s.report.as_ref())).collect::<Vec<_>>(),
    });
    write_json(out, &doc)
}

pub fn write_json(out: &mut dyn Write, value: &impl Serialize) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)
}
