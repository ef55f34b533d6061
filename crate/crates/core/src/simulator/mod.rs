//! Deterministic packet-level discrete-event simulation.
//!
//! Links are full duplex; each direction is a channel with a DropTail FIFO
//! and a single server. Packets follow the source route of their pair; TCP
//! acks take the reverse route. Events are processed in `(time, sequence)`
//! order, so a run is a pure function of its inputs.

mod routing;
pub mod tcp;

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};
use std::fmt::Write as _;
use std::path::Path;

pub use routing::{compute_routes, RoutingTable};
use tcp::{AckOutcome, TcpReceiver, TcpSender, TcpTimers};

use crate::error::{Error, Result};
use crate::scenario::{topology_alpha, FlowModel, FlowSchedule, TrafficConfig};
use crate::textio::{fmt_f64, write_file};
use crate::topology::{NodeId, Topology};

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    /// Must equal the α recorded on the topology.
    pub alpha: f64,
    pub flow_model: FlowModel,
    pub packet_size: u32,
    pub ack_size: u32,
    pub buffer: usize,
    /// Unscaled UDP rate; sources send at `udp_rate·α` packets per second.
    pub udp_rate: f64,
    /// Unscaled TCP time constants in seconds.
    pub initial_rtt: f64,
    pub min_rto: f64,
    pub max_rto: f64,
    /// End of simulated time; `None` uses the schedule's horizon.
    pub horizon: Option<f64>,
    pub record_trace: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            alpha: 1.0,
            flow_model: FlowModel::TcpLite,
            packet_size: 1000,
            ack_size: 40,
            buffer: 300,
            udp_rate: 6.0,
            initial_rtt: 1.0,
            min_rto: 1.0,
            max_rto: 60.0,
            horizon: None,
            record_trace: false,
        }
    }
}

impl SimConfig {
    pub fn from_traffic(cfg: &TrafficConfig, alpha: f64) -> Self {
        SimConfig {
            alpha,
            flow_model: cfg.flow_model,
            packet_size: cfg.packet_size,
            buffer: cfg.buffer,
            udp_rate: cfg.udp_rate,
            ..SimConfig::default()
        }
    }

    fn timers(&self) -> TcpTimers {
        TcpTimers {
            initial_rto: self.initial_rtt / self.alpha,
            min_rto: self.min_rto / self.alpha,
            max_rto: self.max_rto / self.alpha,
        }
    }
}

/// Queue length of one channel right after an event changed it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QueueSample {
    pub seq: u64,
    pub channel: u32,
    pub len: u32,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SimTrace {
    /// `(sequence, time)` of every processed event.
    pub events: Vec<(u64, f64)>,
    pub queues: Vec<QueueSample>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PacketCounts {
    pub injected: u64,
    pub delivered: u64,
    pub dropped: u64,
    pub in_flight: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimResults {
    pub alpha: f64,
    /// `(flow id, completion time)` for completed flows, by flow id.
    pub fct: Vec<(u32, f64)>,
    /// End-to-end delays of delivered data packets, in delivery order.
    pub delays: Vec<f64>,
    /// Drops per channel; channel `2i` is link `i` from `u` to `v`,
    /// `2i + 1` the reverse.
    pub drops: Vec<u64>,
    pub flows_total: usize,
    pub flows_completed: usize,
    pub data: PacketCounts,
    pub acks: PacketCounts,
    /// Per flow `(injected, delivered, dropped)` data packets.
    pub per_flow: Vec<(u64, u64, u64)>,
    pub events_processed: u64,
    pub end_time: f64,
    pub trace: Option<SimTrace>,
}

impl SimResults {
    pub fn completion_fraction(&self) -> f64 {
        if self.flows_total == 0 {
            0.0
        } else {
            self.flows_completed as f64 / self.flows_total as f64
        }
    }

    pub fn fct_text(&self) -> String {
        let mut s = String::from("# flow_id completion_s\n");
        for (id, t) in &self.fct {
            let _ = writeln!(s, "{id} {}", fmt_f64(*t));
        }
        s
    }

    pub fn delay_text(&self) -> String {
        let mut s = String::from("# packet delay_s\n");
        for (i, d) in self.delays.iter().enumerate() {
            let _ = writeln!(s, "{i} {}", fmt_f64(*d));
        }
        s
    }

    pub fn summary_text(&self) -> String {
        let mut s = String::from("# netrescale simulation summary\n");
        let _ = writeln!(s, "alpha={}", fmt_f64(self.alpha));
        let _ = writeln!(s, "flows_total={}", self.flows_total);
        let _ = writeln!(s, "flows_completed={}", self.flows_completed);
        let _ = writeln!(s, "completion_fraction={}", fmt_f64(self.completion_fraction()));
        let _ = writeln!(s, "packets_injected={}", self.data.injected);
        let _ = writeln!(s, "packets_delivered={}", self.data.delivered);
        let _ = writeln!(s, "packets_dropped={}", self.data.dropped);
        let _ = writeln!(s, "packets_in_flight={}", self.data.in_flight);
        let _ = writeln!(s, "acks_injected={}", self.acks.injected);
        let _ = writeln!(s, "acks_dropped={}", self.acks.dropped);
        let _ = writeln!(s, "drops_total={}", self.drops.iter().sum::<u64>());
        let _ = writeln!(s, "events_processed={}", self.events_processed);
        let _ = writeln!(s, "end_time={}", fmt_f64(self.end_time));
        s
    }

    /// Write `fct.txt`, `delay.txt`, and `summary.txt` into `dir`.
    pub fn write_dir(&self, dir: &Path) -> Result<()> {
        write_file(&dir.join("fct.txt"), &self.fct_text())?;
        write_file(&dir.join("delay.txt"), &self.delay_text())?;
        write_file(&dir.join("summary.txt"), &self.summary_text())
    }
}

#[derive(Clone, Copy, Debug)]
enum Ev {
    FlowArrival(u32),
    UdpSend(u32),
    TxDone(u32),
    Arrive(u32),
    Timeout(u32, u32),
}

#[derive(Debug)]
struct Scheduled {
    time: f64,
    seq: u64,
    ev: Ev,
}

impl PartialEq for Scheduled {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Scheduled {}
impl PartialOrd for Scheduled {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Scheduled {
    // Reversed so the max-heap pops the earliest event.
    fn cmp(&self, o: &Self) -> Ordering {
        o.time.total_cmp(&self.time).then(o.seq.cmp(&self.seq))
    }
}

struct Channel {
    /// Packet in service at the front; at most `buffer` packets in total.
    queue: VecDeque<u32>,
    bps: f64,
    prop: f64,
}

#[derive(Clone, Copy)]
struct Packet {
    flow: u32,
    seq: u32,
    ack: bool,
    hop: u16,
    sent: f64,
}

enum FlowState {
    Pending,
    Udp { sent: u32, resolved: u32, delivered: u32, last_delivery: f64 },
    Tcp { sender: TcpSender, receiver: TcpReceiver, timer: u32, armed: bool },
    Done,
}

struct Sim<'a> {
    cfg: &'a SimConfig,
    schedule: &'a FlowSchedule,
    horizon: f64,
    now: f64,
    current_seq: u64,
    next_seq: u64,
    heap: BinaryHeap<Scheduled>,
    channels: Vec<Channel>,
    fwd: Vec<Vec<u32>>,
    rev: Vec<Vec<u32>>,
    packets: Vec<Packet>,
    free: Vec<u32>,
    flows: Vec<FlowState>,
    data_bits: f64,
    ack_bits: f64,
    timers: TcpTimers,
    udp_gap: f64,
    fct: Vec<(u32, f64)>,
    delays: Vec<f64>,
    drops: Vec<u64>,
    data: PacketCounts,
    acks: PacketCounts,
    per_flow: Vec<(u64, u64, u64)>,
    trace: Option<SimTrace>,
}

impl Sim<'_> {
    fn schedule(&mut self, time: f64, ev: Ev) {
        let seq = self.next_seq;
        self.next_seq += 1;
        self.heap.push(Scheduled { time, seq, ev });
    }

    fn record_queue(&mut self, ch: u32) {
        if let Some(tr) = &mut self.trace {
            tr.queues.push(QueueSample {
                seq: self.current_seq,
                channel: ch,
                len: self.channels[ch as usize].queue.len() as u32,
            });
        }
    }

    fn path(&self, p: &Packet) -> &[u32] {
        let pair = self.schedule.flows[p.flow as usize].pair as usize;
        if p.ack {
            &self.rev[pair]
        } else {
            &self.fwd[pair]
        }
    }

    fn bits(&self, p: &Packet) -> f64 {
        if p.ack {
            self.ack_bits
        } else {
            self.data_bits
        }
    }

    fn alloc(&mut self, p: Packet) -> u32 {
        if let Some(id) = self.free.pop() {
            self.packets[id as usize] = p;
            id
        } else {
            self.packets.push(p);
            (self.packets.len() - 1) as u32
        }
    }

    /// Put packet `id` on the channel for its current hop.
    fn enqueue(&mut self, id: u32) {
        let p = self.packets[id as usize];
        let ch = self.path(&p)[p.hop as usize];
        let bits = self.bits(&p);
        let c = &mut self.channels[ch as usize];
        if c.queue.len() >= self.cfg.buffer {
            self.drops[ch as usize] += 1;
            self.free.push(id);
            if p.ack {
                self.acks.dropped += 1;
            } else {
                self.data.dropped += 1;
                self.per_flow[p.flow as usize].2 += 1;
                self.on_data_lost(p.flow);
            }
        } else {
            c.queue.push_back(id);
            if c.queue.len() == 1 {
                let dt = bits / c.bps;
                self.schedule(self.now + dt, Ev::TxDone(ch));
            }
        }
        self.record_queue(ch);
    }

    fn inject(&mut self, flow: u32, seq: u32, ack: bool) {
        let id = self.alloc(Packet {
            flow,
            seq,
            ack,
            hop: 0,
            sent: self.now,
        });
        if ack {
            self.acks.injected += 1;
        } else {
            self.data.injected += 1;
            self.per_flow[flow as usize].0 += 1;
        }
        self.enqueue(id);
    }

    fn tx_done(&mut self, ch: u32) {
        let c = &mut self.channels[ch as usize];
        let id = c.queue.pop_front().expect("busy channel has a packet");
        let prop = c.prop;
        let next = c.queue.front().copied();
        self.schedule(self.now + prop, Ev::Arrive(id));
        if let Some(n) = next {
            let dt = self.bits(&self.packets[n as usize]) / self.channels[ch as usize].bps;
            self.schedule(self.now + dt, Ev::TxDone(ch));
        }
        self.record_queue(ch);
    }

    fn arrive(&mut self, id: u32) {
        let p = &mut self.packets[id as usize];
        p.hop += 1;
        let p = *p;
        if (p.hop as usize) < self.path(&p).len() {
            self.enqueue(id);
            return;
        }
        self.free.push(id);
        if p.ack {
            self.acks.delivered += 1;
            self.on_ack(p.flow, p.seq);
        } else {
            self.data.delivered += 1;
            self.per_flow[p.flow as usize].1 += 1;
            self.delays.push(self.now - p.sent);
            self.on_data(p.flow, p.seq);
        }
    }

    fn complete(&mut self, flow: u32) {
        let arrival = self.schedule.flows[flow as usize].arrival;
        self.fct.push((flow, self.now - arrival));
    }

    fn flow_arrival(&mut self, flow: u32) {
        let size = self.schedule.flows[flow as usize].size;
        match self.cfg.flow_model {
            FlowModel::UdpCbr => {
                self.flows[flow as usize] = FlowState::Udp {
                    sent: 0,
                    resolved: 0,
                    delivered: 0,
                    last_delivery: 0.0,
                };
                self.udp_send(flow);
            }
            FlowModel::TcpLite => {
                self.flows[flow as usize] = FlowState::Tcp {
                    sender: TcpSender::new(size, self.timers),
                    receiver: TcpReceiver::new(size),
                    timer: 0,
                    armed: false,
                };
                self.tcp_pump(flow);
            }
        }
    }

    fn udp_send(&mut self, flow: u32) {
        let size = self.schedule.flows[flow as usize].size;
        let FlowState::Udp { sent, .. } = &mut self.flows[flow as usize] else {
            return;
        };
        let seq = *sent;
        *sent += 1;
        let more = *sent < size;
        self.inject(flow, seq, false);
        if more {
            self.schedule(self.now + self.udp_gap, Ev::UdpSend(flow));
        }
    }

    fn udp_resolve(&mut self, flow: u32, delivered_now: bool) {
        let size = self.schedule.flows[flow as usize].size;
        let now = self.now;
        let FlowState::Udp {
            resolved,
            delivered,
            last_delivery,
            ..
        } = &mut self.flows[flow as usize]
        else {
            return;
        };
        *resolved += 1;
        if delivered_now {
            *delivered += 1;
            *last_delivery = now;
        }
        if *resolved == size {
            let done = *delivered > 0;
            let last = *last_delivery;
            self.flows[flow as usize] = FlowState::Done;
            if done {
                let arrival = self.schedule.flows[flow as usize].arrival;
                self.fct.push((flow, last - arrival));
            }
        }
    }

    fn on_data_lost(&mut self, flow: u32) {
        if matches!(self.flows[flow as usize], FlowState::Udp { .. }) {
            self.udp_resolve(flow, false);
        }
    }

    fn on_data(&mut self, flow: u32, seq: u32) {
        match &mut self.flows[flow as usize] {
            FlowState::Udp { .. } => self.udp_resolve(flow, true),
            FlowState::Tcp { receiver, .. } => {
                let was_complete = receiver.is_complete();
                let ackno = receiver.on_data(seq);
                if !was_complete && receiver.is_complete() {
                    self.complete(flow);
                }
                self.inject(flow, ackno, true);
            }
            // Late retransmissions after the sender finished.
            FlowState::Done => self.inject(flow, seq + 1, true),
            FlowState::Pending => unreachable!("data before flow start"),
        }
    }

    fn arm_timer(&mut self, flow: u32) {
        let now = self.now;
        let FlowState::Tcp {
            sender, timer, armed, ..
        } = &mut self.flows[flow as usize]
        else {
            return;
        };
        *timer += 1;
        *armed = true;
        let (gen, at) = (*timer, now + sender.rto);
        self.schedule(at, Ev::Timeout(flow, gen));
    }

    fn disarm_timer(&mut self, flow: u32) {
        if let FlowState::Tcp { timer, armed, .. } = &mut self.flows[flow as usize] {
            *timer += 1;
            *armed = false;
        }
    }

    /// Send everything the window allows and make sure a timer runs.
    fn tcp_pump(&mut self, flow: u32) {
        let now = self.now;
        loop {
            let FlowState::Tcp { sender, .. } = &mut self.flows[flow as usize] else {
                return;
            };
            match sender.next_to_send(now) {
                Some(seq) => self.inject(flow, seq, false),
                None => break,
            }
        }
        if let FlowState::Tcp { armed, sender, .. } = &self.flows[flow as usize] {
            if !*armed && sender.outstanding() {
                self.arm_timer(flow);
            }
        }
    }

    fn on_ack(&mut self, flow: u32, ackno: u32) {
        let now = self.now;
        let FlowState::Tcp { sender, .. } = &mut self.flows[flow as usize] else {
            return;
        };
        match sender.on_ack(ackno, now) {
            AckOutcome::NewAck { done: true } => {
                self.disarm_timer(flow);
                self.flows[flow as usize] = FlowState::Done;
            }
            AckOutcome::NewAck { done: false } => {
                self.disarm_timer(flow);
                self.tcp_pump(flow);
            }
            AckOutcome::FastRetransmit(seq) => {
                sender.mark_sent(seq, now);
                self.inject(flow, seq, false);
                self.arm_timer(flow);
            }
            AckOutcome::Duplicate | AckOutcome::Stale => {}
        }
    }

    fn on_timeout(&mut self, flow: u32, gen: u32) {
        let FlowState::Tcp { sender, timer, armed, .. } = &mut self.flows[flow as usize] else {
            return;
        };
        if *timer != gen || !*armed {
            return;
        }
        *armed = false;
        sender.on_timeout();
        self.tcp_pump(flow);
    }

    fn run(mut self) -> SimResults {
        for (i, f) in self.schedule.flows.iter().enumerate() {
            if f.arrival <= self.horizon {
                let seq = self.next_seq;
                self.next_seq += 1;
                self.heap.push(Scheduled {
                    time: f.arrival,
                    seq,
                    ev: Ev::FlowArrival(i as u32),
                });
            }
        }
        let flows_total = self.heap.len();
        let mut processed = 0u64;
        while let Some(top) = self.heap.peek() {
            if top.time > self.horizon {
                break;
            }
            let Scheduled { time, seq, ev } = self.heap.pop().unwrap();
            self.now = time;
            self.current_seq = seq;
            processed += 1;
            if let Some(tr) = &mut self.trace {
                tr.events.push((seq, time));
            }
            match ev {
                Ev::FlowArrival(f) => self.flow_arrival(f),
                Ev::UdpSend(f) => self.udp_send(f),
                Ev::TxDone(ch) => self.tx_done(ch),
                Ev::Arrive(id) => self.arrive(id),
                Ev::Timeout(f, g) => self.on_timeout(f, g),
            }
        }
        let live = self.packets.len() as u64 - self.free.len() as u64;
        let live_acks = {
            let mut free = vec![false; self.packets.len()];
            for &i in &self.free {
                free[i as usize] = true;
            }
            self.packets
                .iter()
                .zip(&free)
                .filter(|(p, &f)| !f && p.ack)
                .count() as u64
        };
        self.data.in_flight = live - live_acks;
        self.acks.in_flight = live_acks;
        self.fct.sort_by_key(|&(id, _)| id);
        SimResults {
            alpha: self.cfg.alpha,
            fct: self.fct,
            delays: self.delays,
            drops: self.drops,
            flows_total,
            flows_completed: 0,
            data: self.data,
            acks: self.acks,
            per_flow: self.per_flow,
            events_processed: processed,
            end_time: self.now,
            trace: self.trace,
        }
        .with_completed()
    }
}

impl SimResults {
    fn with_completed(mut self) -> Self {
        self.flows_completed = self.fct.len();
        self
    }
}

/// Directed channel ids along a node path.
fn channels_of(t: &Topology, path: &[NodeId]) -> Vec<u32> {
    path.windows(2)
        .map(|w| {
            let nb = t.neighbors(w[0]);
            let i = nb
                .binary_search_by_key(&w[1], |&(n, _)| n)
                .expect("consecutive path nodes are adjacent");
            let li = nb[i].1;
            let dir = u32::from(t.link(li).u != w[0]);
            2 * li as u32 + dir
        })
        .collect()
}

/// Simulate `schedule` on `t` until the horizon.
pub fn run(t: &Topology, schedule: &FlowSchedule, cfg: &SimConfig) -> Result<SimResults> {
    if !t.is_weighted() {
        return Err(Error::Unweighted);
    }
    let topo_alpha = topology_alpha(t)?;
    if !(cfg.alpha > 0.0) || (topo_alpha - cfg.alpha).abs() > 1e-12 * cfg.alpha {
        return Err(Error::AlphaMismatch {
            topology: topo_alpha,
            config: cfg.alpha,
        });
    }
    let horizon = cfg.horizon.unwrap_or(schedule.horizon);
    if !(horizon > 0.0) {
        return Err(Error::config("horizon must be positive"));
    }
    if cfg.buffer == 0 || cfg.packet_size == 0 || cfg.ack_size == 0 || !(cfg.udp_rate > 0.0) {
        return Err(Error::config("buffer, packet sizes, and UDP rate must be positive"));
    }
    for f in &schedule.flows {
        if f.pair as usize >= schedule.pairs.len() {
            return Err(Error::config(format!("flow {} refers to a missing pair", f.id)));
        }
    }
    let routes = compute_routes(t)?;
    let paths = routes.routes(&schedule.pairs)?;
    let fwd: Vec<Vec<u32>> = paths.iter().map(|p| channels_of(t, p)).collect();
    let rev: Vec<Vec<u32>> = paths
        .iter()
        .map(|p| {
            let mut r = p.clone();
            r.reverse();
            channels_of(t, &r)
        })
        .collect();
    if fwd.iter().any(|p| p.is_empty()) {
        return Err(Error::config("a source-destination pair has identical endpoints"));
    }
    let channels = t
        .links()
        .iter()
        .flat_map(|l| {
            let a = l.attrs.expect("weighted");
            let c = Channel {
                queue: VecDeque::new(),
                bps: a.capacity * 1e6,
                prop: a.prop_delay * 1e-3,
            };
            let d = Channel {
                queue: VecDeque::new(),
                bps: a.capacity * 1e6,
                prop: a.prop_delay * 1e-3,
            };
            [c, d]
        })
        .collect::<Vec<_>>();
    let n_ch = channels.len();
    let n_flows = schedule.flows.len();
    let sim = Sim {
        cfg,
        schedule,
        horizon,
        now: 0.0,
        current_seq: 0,
        next_seq: 0,
        heap: BinaryHeap::new(),
        channels,
        fwd,
        rev,
        packets: Vec::new(),
        free: Vec::new(),
        flows: (0..n_flows).map(|_| FlowState::Pending).collect(),
        data_bits: f64::from(cfg.packet_size) * 8.0,
        ack_bits: f64::from(cfg.ack_size) * 8.0,
        timers: cfg.timers(),
        udp_gap: 1.0 / (cfg.udp_rate * cfg.alpha),
        fct: Vec::new(),
        delays: Vec::new(),
        drops: vec![0; n_ch],
        data: PacketCounts::default(),
        acks: PacketCounts::default(),
        per_flow: vec![(0, 0, 0); n_flows],
        trace: cfg.record_trace.then(SimTrace::default),
    };
    Ok(sim.run())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{apply_alpha_transform, AlphaTransform, Flow};

    fn one_link(cap: f64, delay: f64) -> Topology {
        Topology::from_weighted_edges(2, &[(0, 1, cap, delay)]).unwrap()
    }

    fn schedule(pairs: Vec<(u32, u32)>, flows: &[(u32, f64, u32)], horizon: f64) -> FlowSchedule {
        FlowSchedule {
            pairs: pairs.into_iter().map(|(a, b)| (NodeId(a), NodeId(b))).collect(),
            flows: flows
                .iter()
                .enumerate()
                .map(|(i, &(pair, arrival, size))| Flow {
                    id: i as u32,
                    pair,
                    arrival,
                    size,
                })
                .collect(),
            horizon,
        }
    }

    fn udp() -> SimConfig {
        SimConfig {
            flow_model: FlowModel::UdpCbr,
            ..SimConfig::default()
        }
    }

    #[test]
    fn single_packet_delay_by_hand() {
        let r = run(&one_link(8.0, 1.0), &schedule(vec![(0, 1)], &[(0, 0.0, 1)], 10.0), &udp()).unwrap();
        assert_eq!(r.delays.len(), 1);
        assert!((r.delays[0] - 0.002).abs() < 1e-15);
        assert_eq!(r.fct.len(), 1);
    }

    #[test]
    fn fifo_queueing_delays_second_packet() {
        let s = schedule(vec![(0, 1), (0, 1)], &[(0, 0.0, 1), (1, 0.0, 1)], 10.0);
        let r = run(&one_link(8.0, 1.0), &s, &udp()).unwrap();
        assert!((r.delays[0] - 0.002).abs() < 1e-15);
        assert!((r.delays[1] - 0.003).abs() < 1e-15);
    }

    #[test]
    fn buffer_overflow_drops_exactly_one() {
        let flows: Vec<(u32, f64, u32)> = (0..301).map(|_| (0, 0.0, 1)).collect();
        let r = run(&one_link(8.0, 1.0), &schedule(vec![(0, 1)], &flows, 10.0), &udp()).unwrap();
        assert_eq!(r.data.dropped, 1);
        assert_eq!(r.data.delivered, 300);
        assert_eq!(r.drops.iter().sum::<u64>(), 1);
    }

    #[test]
    fn alpha_mismatch_and_bad_horizon() {
        let t = apply_alpha_transform(&one_link(8.0, 1.0), AlphaTransform::new(0.5).unwrap()).unwrap();
        let s = schedule(vec![(0, 1)], &[(0, 0.0, 1)], 10.0);
        assert!(matches!(run(&t, &s, &udp()), Err(Error::AlphaMismatch { .. })));
        let cfg = SimConfig { alpha: 0.5, horizon: Some(0.0), ..udp() };
        assert!(run(&t, &s, &cfg).is_err());
        let cfg = SimConfig { alpha: 0.5, ..udp() };
        assert!(run(&t, &s, &cfg).is_ok());
    }

    #[test]
    fn udp_rate_spacing() {
        let r = run(&one_link(100.0, 1.0), &schedule(vec![(0, 1)], &[(0, 0.0, 3)], 10.0), &udp()).unwrap();
        assert_eq!(r.delays.len(), 3);
        let fct = r.fct[0].1;
        assert!((fct - (2.0 / 6.0 + 0.001 + 8000.0 / 1e8)).abs() < 1e-12);
    }

    #[test]
    fn tcp_completes_and_conserves() {
        let t = Topology::from_weighted_edges(3, &[(0, 1, 10.0, 5.0), (1, 2, 2.0, 5.0)]).unwrap();
        let s = schedule(vec![(0, 2), (2, 0)], &[(0, 0.0, 500), (1, 0.1, 50), (0, 0.2, 7)], 100.0);
        let r = run(&t, &s, &SimConfig::default()).unwrap();
        assert_eq!(r.flows_completed, 3);
        let c = r.data;
        assert_eq!(c.injected, c.delivered + c.dropped + c.in_flight);
        for (i, d, x) in &r.per_flow {
            assert!(i >= &(d + x));
        }
    }

    #[test]
    fn runs_are_deterministic() {
        let g = crate::synth::power_law_network(60, 2.2, 1, None, 4);
        let t = crate::scenario::assign_scenario(&g, crate::scenario::ScenarioId::Scenario1, 1).unwrap();
        let cfg = TrafficConfig {
            horizon: 50.0,
            ..TrafficConfig::default()
        };
        let s = crate::scenario::build_traffic(&t, &cfg).unwrap();
        let sc = SimConfig::from_traffic(&cfg, 1.0);
        assert_eq!(run(&t, &s, &sc).unwrap(), run(&t, &s, &sc).unwrap());
    }
}
