//! CSV and JSON file formats.
//!
//! Parse errors carry `source:line` so a bad row can be found directly.
//!
//! | file        | columns                                                                  |
//! |-------------|--------------------------------------------------------------------------|
//! | schedule    | `flight_id,tail,sched_arr_min,sched_dep_min,pax_in,pax_origin,pax_dest` |
//! | transfers   | `flight_i,flight_k,pax`                                                  |
//! | delays      | `flight_id,tail,sched_dep_min,act_dep_min,sched_arr_min,act_arr_min`     |
//!
//! Only `flight_id`, `sched_arr_min` and `sched_dep_min` are mandatory in a
//! schedule; a missing tail defaults to the flight id and missing passenger
//! counts to zero. In a delay file either the arrival or the departure pair
//! may be blank.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimizer::Assignment;
use crate::schedule::{ArrivalRecord, DepartureRecord, Flight, Schedule, TransferMatrix};

struct Table {
    source: String,
    headers: Vec<String>,
    rows: Vec<(u64, csv::StringRecord)>,
}

impl Table {
    fn read<R: Read>(reader: R, source: &str) -> Result<Table> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .flexible(false)
            .from_reader(reader);
        let headers: Vec<String> = rdr
            .headers()
            .map_err(|e| Error::parse(format!("{source}:1"), e))?
            .iter()
            .map(str::to_owned)
            .collect();
        if headers.iter().all(|h| h.is_empty()) {
            return Err(Error::parse(source, "empty file"));
        }
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| {
                let line = e.position().map_or(0, |p| p.line());
                Error::parse(format!("{source}:{line}"), e)
            })?;
            let line = rec.position().map_or(0, |p| p.line());
            if rec.iter().all(str::is_empty) {
                continue;
            }
            rows.push((line, rec));
        }
        Ok(Table {
            source: source.to_owned(),
            headers,
            rows,
        })
    }

    fn column(&self, name: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == name)
    }

    fn require(&self, name: &str) -> Result<usize> {
        self.column(name)
            .ok_or_else(|| Error::parse(format!("{}:1", self.source), format!("missing column `{name}`")))
    }

    fn at(&self, line: u64) -> String {
        format!("{}:{line}", self.source)
    }

    fn text<'r>(&self, rec: &'r csv::StringRecord, line: u64, col: usize, name: &str) -> Result<&'r str> {
        match rec.get(col) {
            Some(s) if !s.is_empty() => Ok(s),
            _ => Err(Error::parse(self.at(line), format!("empty `{name}`"))),
        }
    }

    fn value<T: FromStr>(&self, rec: &csv::StringRecord, line: u64, col: usize, name: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        let s = self.text(rec, line, col, name)?;
        s.parse()
            .map_err(|e| Error::parse(self.at(line), format!("bad `{name}` value {s:?}: {e}")))
    }

    fn optional<T: FromStr>(&self, rec: &csv::StringRecord, line: u64, col: Option<usize>, name: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match col.and_then(|c| rec.get(c)) {
            None | Some("") => Ok(None),
            Some(_) => self.value(rec, line, col.unwrap(), name).map(Some),
        }
    }

    fn finite(&self, line: u64, name: &str, v: f64) -> Result<f64> {
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::parse(self.at(line), format!("`{name}` is not finite")))
        }
    }
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::parse(path.display().to_string(), e))
}

// ---------------------------------------------------------------------------
// Schedule
// ---------------------------------------------------------------------------

pub fn parse_schedule_csv<R: Read>(reader: R, gate_count: usize, source: &str) -> Result<Schedule> {
    let t = Table::read(reader, source)?;
    let id = t.require("flight_id")?;
    let arr = t.require("sched_arr_min")?;
    let dep = t.require("sched_dep_min")?;
    let tail = t.column("tail");
    let pax = [t.column("pax_in"), t.column("pax_origin"), t.column("pax_dest")];
    let mut flights = Vec::with_capacity(t.rows.len());
    for (line, rec) in &t.rows {
        let line = *line;
        let flight_id = t.text(rec, line, id, "flight_id")?.to_owned();
        let sched_arr = t.finite(line, "sched_arr_min", t.value(rec, line, arr, "sched_arr_min")?)?;
        let sched_dep = t.finite(line, "sched_dep_min", t.value(rec, line, dep, "sched_dep_min")?)?;
        if sched_arr >= sched_dep {
            return Err(Error::parse(
                t.at(line),
                format!("flight {flight_id} arrives at {sched_arr} but departs at {sched_dep}"),
            ));
        }
        let tail = match tail.and_then(|c| rec.get(c)) {
            Some(s) if !s.is_empty() => s.to_owned(),
            _ => flight_id.clone(),
        };
        flights.push(Flight {
            id: flight_id,
            tail,
            sched_arr,
            sched_dep,
            pax_in: t.optional(rec, line, pax[0], "pax_in")?.unwrap_or(0),
            pax_origin: t.optional(rec, line, pax[1], "pax_origin")?.unwrap_or(0),
            pax_dest: t.optional(rec, line, pax[2], "pax_dest")?.unwrap_or(0),
        });
    }
    Schedule::new(flights, gate_count).map_err(|e| Error::parse(source, e))
}

pub fn read_schedule_csv(path: &Path, gate_count: usize) -> Result<Schedule> {
    parse_schedule_csv(open(path)?, gate_count, &path.display().to_string())
}

pub fn write_schedule_csv<W: Write>(schedule: &Schedule, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["flight_id", "tail", "sched_arr_min", "sched_dep_min", "pax_in", "pax_origin", "pax_dest"])
        .map_err(csv_err)?;
    for f in schedule.flights() {
        w.write_record([
            f.id.clone(),
            f.tail.clone(),
            f.sched_arr.to_string(),
            f.sched_dep.to_string(),
            f.pax_in.to_string(),
            f.pax_origin.to_string(),
            f.pax_dest.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::parse("csv", format!("{other:?}")),
    }
}

// ---------------------------------------------------------------------------
// Transfers
// ---------------------------------------------------------------------------

pub fn parse_transfers_csv<R: Read>(reader: R, schedule: &Schedule, source: &str) -> Result<TransferMatrix> {
    let t = Table::read(reader, source)?;
    let (a, b, p) = (t.require("flight_i")?, t.require("flight_k")?, t.require("pax")?);
    let mut m = TransferMatrix::new();
    for (line, rec) in &t.rows {
        let line = *line;
        let fi = t.text(rec, line, a, "flight_i")?;
        let fk = t.text(rec, line, b, "flight_k")?;
        let pax: u32 = t.value(rec, line, p, "pax")?;
        m.add_by_id(schedule, fi, fk, pax).map_err(|e| Error::parse(t.at(line), e))?;
    }
    Ok(m)
}

pub fn read_transfers_csv(path: &Path, schedule: &Schedule) -> Result<TransferMatrix> {
    parse_transfers_csv(open(path)?, schedule, &path.display().to_string())
}

pub fn write_transfers_csv<W: Write>(schedule: &Schedule, transfers: &TransferMatrix, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["flight_i", "flight_k", "pax"]).map_err(csv_err)?;
    for (i, k, pax) in transfers.iter() {
        w.write_record([&schedule.flight(i).id, &schedule.flight(k).id, &pax.to_string()])
            .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Delay records
// ---------------------------------------------------------------------------

/// Arrival and departure records of an operations log.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DelayRecords {
    pub arrivals: Vec<ArrivalRecord>,
    pub departures: Vec<DepartureRecord>,
}

impl DelayRecords {
    pub fn arrival_delays(&self) -> Vec<f64> {
        self.arrivals.iter().map(|a| a.act_arr - a.sched_arr).collect()
    }

    pub fn departure_delays(&self) -> Vec<f64> {
        self.departures.iter().map(|d| d.act_dep - d.sched_dep).collect()
    }
}

pub fn parse_delays_csv<R: Read>(reader: R, source: &str) -> Result<DelayRecords> {
    let t = Table::read(reader, source)?;
    let id = t.require("flight_id")?;
    let tail = t.column("tail");
    let cols = ["sched_dep_min", "act_dep_min", "sched_arr_min", "act_arr_min"].map(|n| (n, t.column(n)));
    if cols.iter().all(|(_, c)| c.is_none()) {
        return Err(Error::parse(format!("{source}:1"), "no delay columns"));
    }
    let mut out = DelayRecords::default();
    for (line, rec) in &t.rows {
        let line = *line;
        let flight_id = t.text(rec, line, id, "flight_id")?.to_owned();
        let tail = tail
            .and_then(|c| rec.get(c))
            .filter(|s| !s.is_empty())
            .unwrap_or(&flight_id)
            .to_owned();
        let mut v = [None; 4];
        for (slot, (name, col)) in v.iter_mut().zip(cols) {
            *slot = t.optional::<f64>(rec, line, col, name)?;
            if let Some(x) = *slot {
                t.finite(line, name, x)?;
            }
        }
        let pair = |s: Option<f64>, a: Option<f64>, what: &str| -> Result<Option<(f64, f64)>> {
            match (s, a) {
                (Some(s), Some(a)) => Ok(Some((s, a))),
                (None, None) => Ok(None),
                _ => Err(Error::parse(t.at(line), format!("{what} needs both scheduled and actual times"))),
            }
        };
        let dep = pair(v[0], v[1], "departure")?;
        let arr = pair(v[2], v[3], "arrival")?;
        if dep.is_none() && arr.is_none() {
            return Err(Error::parse(t.at(line), "row has neither arrival nor departure times"));
        }
        if let Some((sched_arr, act_arr)) = arr {
            out.arrivals.push(ArrivalRecord {
                flight_id: flight_id.clone(),
                tail: tail.clone(),
                sched_arr,
                act_arr,
            });
        }
        if let Some((sched_dep, act_dep)) = dep {
            out.departures.push(DepartureRecord {
                flight_id,
                tail,
                sched_dep,
                act_dep,
            });
        }
    }
    Ok(out)
}

pub fn read_delays_csv(path: &Path) -> Result<DelayRecords> {
    parse_delays_csv(open(path)?, &path.display().to_string())
}

/// One row per record: arrivals first, then departures.
pub fn write_delays_csv<W: Write>(records: &DelayRecords, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["flight_id", "tail", "sched_dep_min", "act_dep_min", "sched_arr_min", "act_arr_min"])
        .map_err(csv_err)?;
    for a in &records.arrivals {
        w.write_record([&a.flight_id, &a.tail, "", "", &a.sched_arr.to_string(), &a.act_arr.to_string()])
            .map_err(csv_err)?;
    }
    for d in &records.departures {
        w.write_record([&d.flight_id, &d.tail, &d.sched_dep.to_string(), &d.act_dep.to_string(), "", ""])
            .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Assignment JSON
// ---------------------------------------------------------------------------

/// `{"gates": N, "assignment": {"<flight_id>": <gate_index>}}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssignmentFile {
    pub gates: usize,
    pub assignment: BTreeMap<String, usize>,
}

impl AssignmentFile {
    pub fn from_assignment(schedule: &Schedule, assignment: &Assignment) -> Self {
        AssignmentFile {
            gates: schedule.gate_count(),
            assignment: schedule
                .flights()
                .iter()
                .zip(assignment.gate_of())
                .map(|(f, &g)| (f.id.clone(), g))
                .collect(),
        }
    }

    /// Index-form assignment over `schedule`. Every flight must appear
    /// exactly once and every gate must be below `gates`.
    pub fn to_assignment(&self, schedule: &Schedule) -> Result<Assignment> {
        if self.gates != schedule.gate_count() {
            return Err(Error::IncompleteAssignment(format!(
                "file has {} gates, schedule has {}",
                self.gates,
                schedule.gate_count()
            )));
        }
        if let Some(id) = self.assignment.keys().find(|id| schedule.index_of(id).is_none()) {
            return Err(Error::IncompleteAssignment(format!("unknown flight {id}")));
        }
        let mut gate_of = Vec::with_capacity(schedule.len());
        for f in schedule.flights() {
            let g = *self
                .assignment
                .get(&f.id)
                .ok_or_else(|| Error::IncompleteAssignment(format!("flight {} has no gate", f.id)))?;
            if g >= self.gates {
                return Err(Error::IncompleteAssignment(format!("flight {} on gate {g} of {}", f.id, self.gates)));
            }
            gate_of.push(g);
        }
        Ok(Assignment::new(gate_of))
    }
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let mut text = String::new();
    open(path)?.read_to_string(&mut text)?;
    serde_json::from_str(&text).map_err(|e| Error::parse(format!("{}:{}", path.display(), e.line()), e))
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}
