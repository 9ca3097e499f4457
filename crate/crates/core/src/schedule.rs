//! Flights, gate occupancy intervals and passenger transfers.
//!
//! Each [`Flight`] is one gate occupancy: an aircraft arriving at
//! `sched_arr` and leaving on its tail departure at `sched_dep`, both in
//! minutes since local midnight.

use std::collections::{BTreeMap, HashMap, HashSet};

use rand::Rng;
use rand_distr::{Distribution, LogNormal, Normal};
use serde::{Deserialize, Serialize};

use crate::conflict::SeparationMinutes;
use crate::error::{Error, Result};
use crate::rng;

pub const MINUTES_PER_DAY: f64 = 1440.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Flight {
    pub id: String,
    pub tail: String,
    pub sched_arr: f64,
    pub sched_dep: f64,
    pub pax_in: u32,
    pub pax_origin: u32,
    pub pax_dest: u32,
}

impl Flight {
    pub fn turn_time(&self) -> f64 {
        self.sched_dep - self.sched_arr
    }
}

/// Flights sharing one pool of interchangeable gates.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    flights: Vec<Flight>,
    gate_count: usize,
    index: HashMap<String, usize>,
}

impl Schedule {
    pub fn new(flights: Vec<Flight>, gate_count: usize) -> Result<Self> {
        if gate_count == 0 {
            return Err(Error::InvalidSchedule("gate count must be positive".into()));
        }
        let mut index = HashMap::with_capacity(flights.len());
        for (k, f) in flights.iter().enumerate() {
            if !(f.sched_arr.is_finite() && f.sched_dep.is_finite()) {
                return Err(Error::InvalidSchedule(format!("flight {} has non-finite times", f.id)));
            }
            if f.sched_arr >= f.sched_dep {
                return Err(Error::InvalidSchedule(format!(
                    "flight {} arrives at {} but departs at {}",
                    f.id, f.sched_arr, f.sched_dep
                )));
            }
            if index.insert(f.id.clone(), k).is_some() {
                return Err(Error::InvalidSchedule(format!("duplicate flight id {}", f.id)));
            }
        }
        Ok(Schedule {
            flights,
            gate_count,
            index,
        })
    }

    pub fn flights(&self) -> &[Flight] {
        &self.flights
    }

    pub fn len(&self) -> usize {
        self.flights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flights.is_empty()
    }

    pub fn gate_count(&self) -> usize {
        self.gate_count
    }

    pub fn with_gate_count(&self, gate_count: usize) -> Result<Self> {
        Schedule::new(self.flights.clone(), gate_count)
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn flight(&self, idx: usize) -> &Flight {
        &self.flights[idx]
    }

    /// Separation between flights at positions `i` and `k`.
    #[inline]
    pub fn separation(&self, i: usize, k: usize) -> f64 {
        separation_minutes(&self.flights[i], &self.flights[k])
    }

    /// Flight indices ordered by scheduled arrival (ties by departure, then index).
    pub fn arrival_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.flights.len()).collect();
        order.sort_by(|&a, &b| {
            let fa = &self.flights[a];
            let fb = &self.flights[b];
            fa.sched_arr
                .total_cmp(&fb.sched_arr)
                .then(fa.sched_dep.total_cmp(&fb.sched_dep))
                .then(a.cmp(&b))
        });
        order
    }

    /// Index of the flight whose arrival follows the other's departure.
    #[inline]
    pub fn follower(&self, i: usize, k: usize) -> usize {
        if self.flights[i].sched_dep <= self.flights[k].sched_dep {
            k
        } else {
            i
        }
    }
}

#[inline]
fn separation_minutes(i: &Flight, k: &Flight) -> f64 {
    if i.sched_dep < k.sched_dep {
        k.sched_arr - i.sched_dep
    } else if k.sched_dep < i.sched_dep {
        i.sched_arr - k.sched_dep
    } else {
        // Equal departures: either order is valid, keep the tighter gap.
        i.sched_arr.min(k.sched_arr) - i.sched_dep
    }
}

/// Gap between the earlier flight's departure and the later flight's arrival.
/// Symmetric in its arguments.
pub fn gate_separation(i: &Flight, k: &Flight) -> Result<SeparationMinutes> {
    if i.id == k.id {
        return Err(Error::SameFlight(i.id.clone()));
    }
    Ok(SeparationMinutes(separation_minutes(i, k)))
}

/// Transfer passengers between flight pairs, keyed by unordered pair of
/// schedule indices.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TransferMatrix {
    entries: BTreeMap<(usize, usize), u32>,
}

impl TransferMatrix {
    pub fn new() -> Self {
        Self::default()
    }

    fn key(i: usize, k: usize) -> (usize, usize) {
        if i < k {
            (i, k)
        } else {
            (k, i)
        }
    }

    /// Adds `pax` transfers between flights `i` and `k`.
    pub fn add(&mut self, i: usize, k: usize, pax: u32) -> Result<()> {
        if i == k {
            return Err(Error::InvalidParameter(format!("self-transfer on flight index {i}")));
        }
        if pax > 0 {
            *self.entries.entry(Self::key(i, k)).or_insert(0) += pax;
        }
        Ok(())
    }

    pub fn add_by_id(&mut self, schedule: &Schedule, a: &str, b: &str, pax: u32) -> Result<()> {
        let i = schedule
            .index_of(a)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown flight {a} in transfers")))?;
        let k = schedule
            .index_of(b)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown flight {b} in transfers")))?;
        self.add(i, k, pax)
    }

    pub fn get(&self, i: usize, k: usize) -> u32 {
        self.entries.get(&Self::key(i, k)).copied().unwrap_or(0)
    }

    /// `(i, k, pax)` with `i < k`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.entries.iter().map(|(&(i, k), &p)| (i, k, p))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_pax(&self) -> u64 {
        self.entries.values().map(|&p| p as u64).sum()
    }
}

// ---------------------------------------------------------------------------
// Tail pairing
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrivalRecord {
    pub flight_id: String,
    pub tail: String,
    pub sched_arr: f64,
    pub act_arr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepartureRecord {
    pub flight_id: String,
    pub tail: String,
    pub sched_dep: f64,
    pub act_dep: f64,
}

/// An arrival and the next departure of the same aircraft.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TurnPair {
    pub tail: String,
    pub arrival_id: String,
    pub departure_id: String,
    pub sched_arr: f64,
    pub act_arr: f64,
    pub sched_dep: f64,
    pub act_dep: f64,
}

impl TurnPair {
    pub fn scheduled_turn(&self) -> f64 {
        self.sched_dep - self.sched_arr
    }

    pub fn actual_turn(&self) -> f64 {
        self.act_dep - self.act_arr
    }

    pub fn dep_delay(&self) -> f64 {
        self.act_dep - self.sched_dep
    }
}

/// Turn-time filter bounds, in minutes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurnFilter {
    pub min_scheduled: f64,
    pub max_scheduled: f64,
    pub min_actual: f64,
}

impl Default for TurnFilter {
    fn default() -> Self {
        TurnFilter {
            min_scheduled: 20.0,
            max_scheduled: 200.0,
            min_actual: 20.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TurnPairing {
    pub pairs: Vec<TurnPair>,
    pub matched: usize,
    pub filtered_scheduled: usize,
    pub filtered_actual: usize,
    pub unmatched_arrivals: usize,
    pub unmatched_departures: usize,
}

pub fn pair_turns(arrivals: &[ArrivalRecord], departures: &[DepartureRecord]) -> TurnPairing {
    pair_turns_with(arrivals, departures, &TurnFilter::default())
}

/// Matches each arrival with the next scheduled departure of the same tail,
/// provided no other arrival of that tail intervenes, then applies the
/// scheduled- and actual-turn filters in that order.
pub fn pair_turns_with(arrivals: &[ArrivalRecord], departures: &[DepartureRecord], filter: &TurnFilter) -> TurnPairing {
    // (time, is_departure, record index); arrivals sort before departures at equal times.
    let mut by_tail: BTreeMap<&str, Vec<(f64, bool, usize)>> = BTreeMap::new();
    for (k, a) in arrivals.iter().enumerate() {
        by_tail.entry(a.tail.as_str()).or_default().push((a.sched_arr, false, k));
    }
    for (k, d) in departures.iter().enumerate() {
        by_tail.entry(d.tail.as_str()).or_default().push((d.sched_dep, true, k));
    }

    let mut out = TurnPairing {
        pairs: Vec::new(),
        matched: 0,
        filtered_scheduled: 0,
        filtered_actual: 0,
        unmatched_arrivals: 0,
        unmatched_departures: 0,
    };
    for events in by_tail.values_mut() {
        events.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        let mut pending: Option<usize> = None;
        for &(_, is_dep, k) in events.iter() {
            match (is_dep, pending) {
                (false, prev) => {
                    if prev.is_some() {
                        out.unmatched_arrivals += 1;
                    }
                    pending = Some(k);
                }
                (true, Some(ai)) => {
                    pending = None;
                    out.matched += 1;
                    let a = &arrivals[ai];
                    let d = &departures[k];
                    let pair = TurnPair {
                        tail: a.tail.clone(),
                        arrival_id: a.flight_id.clone(),
                        departure_id: d.flight_id.clone(),
                        sched_arr: a.sched_arr,
                        act_arr: a.act_arr,
                        sched_dep: d.sched_dep,
                        act_dep: d.act_dep,
                    };
                    let st = pair.scheduled_turn();
                    if st < filter.min_scheduled || st > filter.max_scheduled {
                        out.filtered_scheduled += 1;
                    } else if pair.actual_turn() < filter.min_actual {
                        out.filtered_actual += 1;
                    } else {
                        out.pairs.push(pair);
                    }
                }
                (true, None) => out.unmatched_departures += 1,
            }
        }
        if pending.is_some() {
            out.unmatched_arrivals += 1;
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Traffic scaling
// ---------------------------------------------------------------------------

/// Maximum jitter applied to duplicated flights, in minutes.
pub const SCALE_JITTER: i64 = 30;

/// Grows `base` by `factor` by duplicating uniformly chosen flights with a
/// uniform integer shift in `[-30, 30]` minutes, clamped to the day.
/// Base flights are kept unchanged and the gate count is preserved.
pub fn scale_traffic(base: &Schedule, factor: f64, seed: u64) -> Result<Schedule> {
    if !(1.0..=2.0).contains(&factor) {
        return Err(Error::BadFactor(factor));
    }
    let extra = ((factor - 1.0) * base.len() as f64).round() as usize;
    if extra == 0 {
        return Ok(base.clone());
    }
    if base.is_empty() {
        return Err(Error::InvalidSchedule("cannot scale an empty schedule".into()));
    }
    let mut rng = rng::stream(seed, rng::stage::SCALING);
    let mut flights = base.flights.clone();
    let mut ids: HashSet<String> = flights.iter().map(|f| f.id.clone()).collect();
    for n in 0..extra {
        let src = &base.flights[rng.random_range(0..base.len())];
        let shift = rng.random_range(-SCALE_JITTER..=SCALE_JITTER) as f64;
        let duration = src.turn_time();
        let mut arr = src.sched_arr + shift;
        arr = arr.max(0.0).min((MINUTES_PER_DAY - duration).max(0.0));
        let mut k = n;
        let id = loop {
            let candidate = format!("{}+s{}", src.id, k);
            if ids.insert(candidate.clone()) {
                break candidate;
            }
            k += extra;
        };
        flights.push(Flight {
            tail: format!("{}+s{}", src.tail, n),
            id,
            sched_arr: arr,
            sched_dep: arr + duration,
            ..src.clone()
        });
    }
    Schedule::new(flights, base.gate_count)
}

// ---------------------------------------------------------------------------
// Synthetic instances
// ---------------------------------------------------------------------------

/// Parameters of the synthetic hub-day generator.
///
/// Arrivals are a mixture of connecting banks (normal around evenly spaced
/// bank centres) and a uniform background. Turn times are log-normal with
/// a median of `turn_median` minutes, rounded and clamped to
/// `[turn_min, turn_max]`. Aircraft carry `seats` uniform in
/// `[seats_min, seats_max]` at a load factor uniform in `[0.65, 0.95]`;
/// `local_share` (uniform in `[0.3, 0.7]`) of arriving passengers end
/// their trip here, the rest connect to departures leaving at least
/// `min_connection` minutes later.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GeneratorParams {
    pub flights: usize,
    pub gates: usize,
    pub day_start: f64,
    pub day_end: f64,
    pub banks: usize,
    pub bank_spread: f64,
    pub bank_fraction: f64,
    pub turn_median: f64,
    pub turn_log_sigma: f64,
    pub turn_min: f64,
    pub turn_max: f64,
    pub seats_min: u32,
    pub seats_max: u32,
    pub min_connection: f64,
    pub max_connections_per_flight: usize,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        GeneratorParams {
            flights: 226,
            gates: 44,
            day_start: 360.0,
            day_end: 1320.0,
            banks: 8,
            bank_spread: 30.0,
            bank_fraction: 0.5,
            turn_median: 60.0,
            turn_log_sigma: 0.25,
            turn_min: 35.0,
            turn_max: 200.0,
            seats_min: 50,
            seats_max: 190,
            min_connection: 30.0,
            max_connections_per_flight: 6,
        }
    }
}

impl GeneratorParams {
    /// A compact instance for trade-off studies: `flights` flights squeezed
    /// into a four-hour window so that gates must be shared.
    pub fn compact(flights: usize, gates: usize) -> Self {
        GeneratorParams {
            flights,
            gates,
            day_start: 600.0,
            day_end: 840.0,
            banks: 2,
            ..Default::default()
        }
    }
}

pub fn generate_schedule(params: &GeneratorParams, seed: u64) -> Result<(Schedule, TransferMatrix)> {
    if params.flights == 0 || params.gates == 0 {
        return Err(Error::InvalidParameter("generator needs flights > 0 and gates > 0".into()));
    }
    if !(params.day_end > params.day_start && params.turn_max >= params.turn_min && params.turn_min > 0.0) {
        return Err(Error::InvalidParameter("bad generator time window".into()));
    }
    if params.seats_min > params.seats_max {
        return Err(Error::InvalidParameter("seats_min exceeds seats_max".into()));
    }
    let mut rng = rng::stream(seed, rng::stage::SCHEDULE);
    let turn_law = LogNormal::new(params.turn_median.ln(), params.turn_log_sigma)
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let bank_noise = Normal::new(0.0, params.bank_spread.max(1e-9)).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let span = params.day_end - params.day_start;
    let bank_gap = span / params.banks.max(1) as f64;

    let mut flights = Vec::with_capacity(params.flights);
    for n in 0..params.flights {
        let arr = if params.banks > 0 && rng.random::<f64>() < params.bank_fraction {
            let bank = rng.random_range(0..params.banks);
            let centre = params.day_start + bank_gap * (bank as f64 + 0.5);
            (centre + bank_noise.sample(&mut rng)).clamp(params.day_start, params.day_end)
        } else {
            params.day_start + span * rng.random::<f64>()
        };
        let turn = turn_law.sample(&mut rng).round().clamp(params.turn_min, params.turn_max);
        let arr = arr.round().min(MINUTES_PER_DAY - turn).max(0.0);
        let seats = rng.random_range(params.seats_min..=params.seats_max) as f64;
        let load_in: f64 = rng.random_range(0.65..0.95);
        let load_out: f64 = rng.random_range(0.65..0.95);
        let share: f64 = rng.random_range(0.3..0.7);
        let pax_in = (seats * load_in).round() as u32;
        let pax_out = (seats * load_out).round() as u32;
        flights.push(Flight {
            id: format!("F{:04}", n + 1),
            tail: format!("N{:04}", n + 1),
            sched_arr: arr,
            sched_dep: arr + turn,
            pax_in,
            pax_origin: (pax_out as f64 * share).round() as u32,
            pax_dest: (pax_in as f64 * share).round() as u32,
        });
    }

    let mut transfers = TransferMatrix::new();
    for i in 0..flights.len() {
        let connecting = flights[i].pax_in - flights[i].pax_dest;
        let ready = flights[i].sched_arr + params.min_connection;
        let candidates: Vec<usize> = (0..flights.len())
            .filter(|&k| k != i && flights[k].sched_dep >= ready)
            .collect();
        if candidates.is_empty() || connecting == 0 || params.max_connections_per_flight == 0 {
            continue;
        }
        let fan_out = rng.random_range(1..=params.max_connections_per_flight.min(candidates.len()));
        let mut remaining = connecting;
        for c in 0..fan_out {
            let k = candidates[rng.random_range(0..candidates.len())];
            let pax = if c + 1 == fan_out {
                remaining
            } else {
                rng.random_range(0..=remaining)
            };
            remaining -= pax;
            transfers.add(i, k, pax)?;
        }
    }
    Ok((Schedule::new(flights, params.gates)?, transfers))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flight(id: &str, arr: f64, dep: f64) -> Flight {
        Flight {
            id: id.into(),
            tail: format!("T{id}"),
            sched_arr: arr,
            sched_dep: dep,
            pax_in: 100,
            pax_origin: 50,
            pax_dest: 50,
        }
    }

    #[test]
    fn separation_examples() {
        let i = flight("i", 60.0, 120.0);
        let k = flight("k", 150.0, 300.0);
        assert_eq!(gate_separation(&i, &k).unwrap().value(), 30.0);
        assert_eq!(gate_separation(&k, &i).unwrap().value(), 30.0);
        let k2 = flight("k2", 110.0, 300.0);
        assert_eq!(gate_separation(&i, &k2).unwrap().value(), -10.0);
        assert!(matches!(gate_separation(&i, &i), Err(Error::SameFlight(_))));
    }

    #[test]
    fn separation_tie_on_departure_is_symmetric() {
        let i = flight("i", 60.0, 120.0);
        let k = flight("k", 90.0, 120.0);
        assert_eq!(gate_separation(&i, &k).unwrap().value(), -60.0);
        assert_eq!(gate_separation(&k, &i).unwrap().value(), -60.0);
    }

    #[test]
    fn schedule_rejects_overnight_and_duplicates() {
        assert!(Schedule::new(vec![flight("a", 100.0, 100.0)], 1).is_err());
        assert!(Schedule::new(vec![flight("a", 100.0, 90.0)], 1).is_err());
        assert!(Schedule::new(vec![flight("a", 1.0, 2.0), flight("a", 3.0, 4.0)], 1).is_err());
        assert!(Schedule::new(vec![flight("a", 1.0, 2.0)], 0).is_err());
    }

    fn arr(id: &str, tail: &str, s: f64, a: f64) -> ArrivalRecord {
        ArrivalRecord {
            flight_id: id.into(),
            tail: tail.into(),
            sched_arr: s,
            act_arr: a,
        }
    }

    fn dep(id: &str, tail: &str, s: f64, a: f64) -> DepartureRecord {
        DepartureRecord {
            flight_id: id.into(),
            tail: tail.into(),
            sched_dep: s,
            act_dep: a,
        }
    }

    #[test]
    fn pairs_arrival_with_next_departure() {
        let p = pair_turns(&[arr("A1", "T", 600.0, 600.0)], &[dep("D1", "T", 660.0, 660.0)]);
        assert_eq!(p.pairs.len(), 1);
        assert_eq!(p.pairs[0].scheduled_turn(), 60.0);
        assert_eq!(p.matched, 1);
    }

    #[test]
    fn filters_short_long_and_fast_turns() {
        let p = pair_turns(&[arr("A1", "T", 600.0, 600.0)], &[dep("D1", "T", 615.0, 615.0)]);
        assert_eq!((p.pairs.len(), p.filtered_scheduled), (0, 1));
        let p = pair_turns(&[arr("A1", "T", 600.0, 600.0)], &[dep("D1", "T", 900.0, 900.0)]);
        assert_eq!((p.pairs.len(), p.filtered_scheduled), (0, 1));
        let p = pair_turns(&[arr("A1", "T", 600.0, 650.0)], &[dep("D1", "T", 660.0, 660.0)]);
        assert_eq!((p.pairs.len(), p.filtered_actual), (0, 1));
    }

    #[test]
    fn unmatched_records_are_counted() {
        let arrivals = [arr("A1", "T", 600.0, 600.0), arr("A2", "T", 700.0, 700.0), arr("A3", "U", 1.0, 1.0)];
        let departures = [dep("D0", "T", 500.0, 500.0), dep("D1", "T", 760.0, 760.0)];
        let p = pair_turns(&arrivals, &departures);
        assert_eq!(p.matched, 1);
        assert_eq!(p.pairs[0].arrival_id, "A2");
        assert_eq!(p.unmatched_arrivals, 2);
        assert_eq!(p.unmatched_departures, 1);
    }

    fn base_schedule(n: usize) -> Schedule {
        let flights = (0..n)
            .map(|k| flight(&format!("F{k}"), 300.0 + 3.0 * k as f64, 360.0 + 3.0 * k as f64))
            .collect();
        Schedule::new(flights, 44).unwrap()
    }

    #[test]
    fn scaling_counts_and_identity() {
        let base = base_schedule(226);
        assert_eq!(scale_traffic(&base, 1.0, 1).unwrap(), base);
        let scaled = scale_traffic(&base, 1.3, 1).unwrap();
        assert_eq!(scaled.len(), 294);
        assert_eq!(scaled.gate_count(), 44);
        assert_eq!(&scaled.flights()[..226], base.flights());
        assert_eq!(scaled, scale_traffic(&base, 1.3, 1).unwrap());
        assert!(matches!(scale_traffic(&base, 0.9, 1), Err(Error::BadFactor(_))));
        assert!(matches!(scale_traffic(&base, 2.5, 1), Err(Error::BadFactor(_))));
    }

    #[test]
    fn scaled_flights_are_jittered_copies() {
        let base = base_schedule(50);
        let scaled = scale_traffic(&base, 1.2, 9).unwrap();
        for f in &scaled.flights()[50..] {
            let src_id = f.id.split('+').next().unwrap();
            let src = &base.flights()[base.index_of(src_id).unwrap()];
            assert_eq!(f.turn_time(), src.turn_time());
            assert!((f.sched_arr - src.sched_arr).abs() <= SCALE_JITTER as f64);
            assert_eq!(f.pax_in, src.pax_in);
        }
    }

    #[test]
    fn transfer_matrix_is_unordered() {
        let mut t = TransferMatrix::new();
        t.add(3, 1, 5).unwrap();
        t.add(1, 3, 2).unwrap();
        assert_eq!(t.get(1, 3), 7);
        assert_eq!(t.get(3, 1), 7);
        assert!(t.add(2, 2, 1).is_err());
    }

    #[test]
    fn generator_is_deterministic_and_valid() {
        let p = GeneratorParams::default();
        let (a, ta) = generate_schedule(&p, 5).unwrap();
        let (b, tb) = generate_schedule(&p, 5).unwrap();
        assert_eq!(a, b);
        assert_eq!(ta, tb);
        assert_eq!(a.len(), 226);
        for f in a.flights() {
            assert!(f.sched_arr >= 0.0 && f.sched_dep <= MINUTES_PER_DAY);
            assert!(f.pax_dest <= f.pax_in);
        }
        for (i, k, _) in ta.iter() {
            assert!(i < k);
        }
    }
}
