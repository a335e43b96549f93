//! CSV formats for trajectories, window scans, sweeps and tables.
//!
//! Every writer has a matching reader so outputs can be checked by round
//! trip. Floats are written in shortest round-trip form, so output is
//! byte-identical across runs and parses back exactly.

use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::dynamics::{Sample, Trajectory};
use crate::error::{Error, Result};
use crate::esd::{GridPoint, WindowClass};
use crate::state::to_dicke;
use crate::tables::TableReport;

pub const TRAJECTORY_HEADER: [&str; 11] = [
    "tau", "c", "c1", "c2", "rho_ee", "rho_ss", "rho_aa", "rho_gg", "re_rho_sa", "im_rho_sa", "abs_rho_ge",
];

/// One trajectory CSV row. `c1` and `c2` are empty for non-X states.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub tau: f64,
    pub c: f64,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub rho_ee: f64,
    pub rho_ss: f64,
    pub rho_aa: f64,
    pub rho_gg: f64,
    pub re_rho_sa: f64,
    pub im_rho_sa: f64,
    pub abs_rho_ge: f64,
}

impl From<&Sample> for TrajectoryRow {
    fn from(s: &Sample) -> Self {
        let d = to_dicke(&s.rho);
        Self {
            tau: s.tau,
            c: s.concurrence,
            c1: s.breakdown.map(|b| b.c1),
            c2: s.breakdown.map(|b| b.c2),
            rho_ee: d.ee(),
            rho_ss: d.ss(),
            rho_aa: d.aa(),
            rho_gg: d.gg(),
            re_rho_sa: d.sa().re,
            im_rho_sa: d.sa().im,
            abs_rho_ge: d.ge().norm(),
        }
    }
}

/// A switch recorded in a trajectory file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SwitchNote {
    pub tau: f64,
    pub gate: String,
}

/// Parsed trajectory file.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryFile {
    /// Free-form `# key=value` lines before the header.
    pub metadata: Vec<String>,
    pub rows: Vec<TrajectoryRow>,
    pub switches: Vec<SwitchNote>,
}

impl TrajectoryFile {
    pub fn from_trajectory(traj: &Trajectory, metadata: Vec<String>) -> Self {
        Self {
            metadata,
            rows: traj.samples.iter().map(TrajectoryRow::from).collect(),
            switches: traj
                .events
                .iter()
                .map(|e| SwitchNote { tau: e.tau, gate: e.event.gate.label() })
                .collect(),
        }
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |v| v.to_string())
}

const SWITCH_PREFIX: &str = "# switch ";

/// Trajectory CSV. Switch events appear as comment lines just before the
/// first row at or after their time.
pub fn write_trajectory_csv(file: &TrajectoryFile) -> String {
    let mut out = String::new();
    for m in &file.metadata {
        out.push_str(&format!("# {m}\n"));
    }
    out.push_str(&TRAJECTORY_HEADER.join(","));
    out.push('\n');
    let mut switches = file.switches.iter().peekable();
    for r in &file.rows {
        while let Some(s) = switches.next_if(|s| s.tau <= r.tau) {
            out.push_str(&format!("{SWITCH_PREFIX}tau={} gate={}\n", s.tau, s.gate));
        }
        let fields = [
            r.tau.to_string(),
            r.c.to_string(),
            opt(r.c1),
            opt(r.c2),
            r.rho_ee.to_string(),
            r.rho_ss.to_string(),
            r.rho_aa.to_string(),
            r.rho_gg.to_string(),
            r.re_rho_sa.to_string(),
            r.im_rho_sa.to_string(),
            r.abs_rho_ge.to_string(),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    for s in switches {
        out.push_str(&format!("{SWITCH_PREFIX}tau={} gate={}\n", s.tau, s.gate));
    }
    out
}

fn parse_switch(line: &str) -> Result<SwitchNote> {
    let bad = || Error::Parse(format!("malformed switch line '{line}'"));
    let rest = line.strip_prefix(SWITCH_PREFIX).ok_or_else(bad)?;
    let mut tau = None;
    let mut gate = None;
    for part in rest.split_whitespace() {
        match part.split_once('=') {
            Some(("tau", v)) => tau = Some(v.parse::<f64>().map_err(|_| bad())?),
            Some(("gate", v)) => gate = Some(v.to_string()),
            _ => return Err(bad()),
        }
    }
    Ok(SwitchNote { tau: tau.ok_or_else(bad)?, gate: gate.ok_or_else(bad)? })
}

pub fn read_trajectory_csv(text: &str) -> Result<TrajectoryFile> {
    let mut file = TrajectoryFile::default();
    let mut seen_header = false;
    for line in text.lines() {
        if line.starts_with(SWITCH_PREFIX) {
            file.switches.push(parse_switch(line)?);
        } else if let Some(m) = line.strip_prefix("# ") {
            if !seen_header {
                file.metadata.push(m.to_string());
            }
        } else if !line.is_empty() && !seen_header {
            seen_header = true;
            if line.split(',').ne(TRAJECTORY_HEADER) {
                return Err(Error::Parse(format!("unexpected trajectory header '{line}'")));
            }
        }
    }
    if !seen_header {
        return Err(Error::Parse("trajectory header row missing".into()));
    }
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    for row in reader.deserialize() {
        file.rows.push(row.map_err(csv_err)?);
    }
    if file.rows.windows(2).any(|w| w[1].tau <= w[0].tau) {
        return Err(Error::Parse("trajectory tau column is not increasing".into()));
    }
    Ok(file)
}

#[derive(Serialize, Deserialize)]
struct WindowCsvRow {
    tau_s: f64,
    class: String,
    new_tau_d: Option<f64>,
    new_tau_r: Option<f64>,
}

/// One row per scan grid point.
pub fn write_window_csv(grid: &[GridPoint]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if grid.is_empty() {
        w.write_record(["tau_s", "class", "new_tau_d", "new_tau_r"]).map_err(csv_err)?;
    }
    for g in grid {
        w.serialize(WindowCsvRow {
            tau_s: g.tau_s,
            class: g.class.to_string(),
            new_tau_d: g.new_tau_d,
            new_tau_r: g.new_tau_r,
        })
        .map_err(csv_err)?;
    }
    finish(w)
}

pub fn read_window_csv(text: &str) -> Result<Vec<GridPoint>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for row in reader.deserialize::<WindowCsvRow>() {
        let row = row.map_err(csv_err)?;
        out.push(GridPoint {
            tau_s: row.tau_s,
            class: row.class.parse::<WindowClass>()?,
            new_tau_d: row.new_tau_d,
            new_tau_r: row.new_tau_r,
        });
    }
    Ok(out)
}

/// Baseline times at one value of a swept parameter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    pub tau_d: Option<f64>,
    pub tau_r: Option<f64>,
}

/// Sweep CSV with the parameter name as the first column header.
pub fn write_sweep_csv(param: &str, rows: &[SweepRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([param, "tau_d", "tau_r"]).map_err(csv_err)?;
    for r in rows {
        w.write_record([r.value.to_string(), opt(r.tau_d), opt(r.tau_r)]).map_err(csv_err)?;
    }
    finish(w)
}

pub fn read_sweep_csv(text: &str) -> Result<(String, Vec<SweepRow>)> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let param = reader
        .headers()
        .map_err(csv_err)?
        .get(0)
        .ok_or_else(|| Error::Parse("sweep header missing".into()))?
        .to_string();
    let parse = |s: &str| -> Result<Option<f64>> {
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse().map(Some).map_err(|_| Error::Parse(format!("bad number '{s}'")))
        }
    };
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(csv_err)?;
        if rec.len() != 3 {
            return Err(Error::Parse(format!("sweep row has {} fields", rec.len())));
        }
        let value = parse(&rec[0])?.ok_or_else(|| Error::Parse("sweep value missing".into()))?;
        rows.push(SweepRow { value, tau_d: parse(&rec[1])?, tau_r: parse(&rec[2])? });
    }
    Ok((param, rows))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableCsvRow {
    pub table: u8,
    pub state: String,
    pub gate: String,
    pub item: String,
    pub published: String,
    pub computed: String,
    pub deviation: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
}

pub fn write_table_csv(tables: &[TableReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for t in tables {
        for r in &t.rows {
            w.serialize(TableCsvRow {
                table: t.id,
                state: r.state.clone(),
                gate: r.gate.clone().unwrap_or_default(),
                item: r.item.clone(),
                published: r.published.clone(),
                computed: r.computed.clone(),
                deviation: r.deviation,
                tolerance: r.tolerance,
                pass: r.pass,
            })
            .map_err(csv_err)?;
        }
    }
    finish(w)
}

pub fn read_table_csv(text: &str) -> Result<Vec<TableCsvRow>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .map(|r| r.map_err(csv_err))
        .collect()
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

/// Read a whole UTF-8 stream.
pub fn read_to_string(mut r: impl Read) -> Result<String> {
    let mut s = String::new();
    r.read_to_string(&mut s)?;
    Ok(s)
}
