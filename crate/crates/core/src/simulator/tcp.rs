//! Window-based sender with slow start, AIMD, fast retransmit, and RTO.

/// Timer constants already divided by α.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TcpTimers {
    pub initial_rto: f64,
    pub min_rto: f64,
    pub max_rto: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AckOutcome {
    /// Cumulative ack advanced; `done` once every packet is acknowledged.
    NewAck { done: bool },
    Duplicate,
    /// Third duplicate: the packet at `snd_una` must be resent.
    FastRetransmit(u32),
    Stale,
}

#[derive(Clone, Debug)]
pub struct TcpSender {
    pub size: u32,
    pub cwnd: f64,
    pub ssthresh: f64,
    pub snd_una: u32,
    pub snd_nxt: u32,
    pub rto: f64,
    srtt: Option<f64>,
    rttvar: f64,
    dupacks: u32,
    timers: TcpTimers,
    sent_at: Vec<f64>,
    retransmitted: Vec<bool>,
}

impl TcpSender {
    pub fn new(size: u32, timers: TcpTimers) -> Self {
        TcpSender {
            size,
            cwnd: 1.0,
            ssthresh: f64::INFINITY,
            snd_una: 0,
            snd_nxt: 0,
            rto: timers.initial_rto,
            srtt: None,
            rttvar: 0.0,
            dupacks: 0,
            timers,
            sent_at: vec![f64::NAN; size as usize],
            retransmitted: vec![false; size as usize],
        }
    }

    pub fn in_slow_start(&self) -> bool {
        self.cwnd < self.ssthresh
    }

    pub fn srtt(&self) -> Option<f64> {
        self.srtt
    }

    pub fn is_done(&self) -> bool {
        self.snd_una == self.size
    }

    pub fn outstanding(&self) -> bool {
        self.snd_una < self.snd_nxt
    }

    /// Next new sequence number the window allows, advancing `snd_nxt`.
    pub fn next_to_send(&mut self, now: f64) -> Option<u32> {
        let window = (self.cwnd.floor() as u32).max(1);
        if self.snd_nxt < self.size && self.snd_nxt - self.snd_una < window {
            let seq = self.snd_nxt;
            self.snd_nxt += 1;
            self.mark_sent(seq, now);
            Some(seq)
        } else {
            None
        }
    }

    /// Record a transmission of `seq` at `now`.
    pub fn mark_sent(&mut self, seq: u32, now: f64) {
        let i = seq as usize;
        if !self.sent_at[i].is_nan() {
            self.retransmitted[i] = true;
        }
        self.sent_at[i] = now;
    }

    fn sample_rtt(&mut self, r: f64) {
        match self.srtt {
            None => {
                self.srtt = Some(r);
                self.rttvar = r / 2.0;
            }
            Some(s) => {
                self.rttvar = 0.75 * self.rttvar + 0.25 * (s - r).abs();
                self.srtt = Some(s + (r - s) / 8.0);
            }
        }
        let base = self.srtt.unwrap() + 4.0 * self.rttvar;
        self.rto = base.max(self.timers.min_rto).min(self.timers.max_rto);
    }

    /// Cumulative ack meaning every packet below `ackno` has arrived.
    pub fn on_ack(&mut self, ackno: u32, now: f64) -> AckOutcome {
        if ackno > self.snd_una {
            let last = (ackno - 1) as usize;
            if !self.retransmitted[last] && !self.sent_at[last].is_nan() {
                self.sample_rtt(now - self.sent_at[last]);
            }
            for _ in self.snd_una..ackno {
                if self.in_slow_start() {
                    self.cwnd += 1.0;
                } else {
                    self.cwnd += 1.0 / self.cwnd;
                }
            }
            self.snd_una = ackno;
            self.snd_nxt = self.snd_nxt.max(ackno);
            self.dupacks = 0;
            AckOutcome::NewAck {
                done: self.is_done(),
            }
        } else if ackno == self.snd_una && self.outstanding() {
            self.dupacks += 1;
            if self.dupacks == 3 {
                self.ssthresh = (self.cwnd / 2.0).max(2.0);
                self.cwnd = self.ssthresh;
                AckOutcome::FastRetransmit(self.snd_una)
            } else {
                AckOutcome::Duplicate
            }
        } else {
            AckOutcome::Stale
        }
    }

    /// Retransmission timer fired: collapse the window and go back to
    /// `snd_una`.
    pub fn on_timeout(&mut self) {
        self.ssthresh = (self.cwnd / 2.0).max(2.0);
        self.cwnd = 1.0;
        self.rto = (2.0 * self.rto).min(self.timers.max_rto);
        self.snd_nxt = self.snd_una;
        self.dupacks = 0;
    }
}

/// Cumulative-ack receiver.
#[derive(Clone, Debug)]
pub struct TcpReceiver {
    got: Vec<bool>,
    pub rcv_nxt: u32,
}

impl TcpReceiver {
    pub fn new(size: u32) -> Self {
        TcpReceiver {
            got: vec![false; size as usize],
            rcv_nxt: 0,
        }
    }

    /// Accept `seq` and return the ack number to send.
    pub fn on_data(&mut self, seq: u32) -> u32 {
        self.got[seq as usize] = true;
        while (self.rcv_nxt as usize) < self.got.len() && self.got[self.rcv_nxt as usize] {
            self.rcv_nxt += 1;
        }
        self.rcv_nxt
    }

    pub fn is_complete(&self) -> bool {
        self.rcv_nxt as usize == self.got.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const T: TcpTimers = TcpTimers {
        initial_rto: 1.0,
        min_rto: 1.0,
        max_rto: 60.0,
    };

    fn drain(s: &mut TcpSender, now: f64) -> Vec<u32> {
        std::iter::from_fn(|| s.next_to_send(now)).collect()
    }

    #[test]
    fn slow_start_doubles_per_round() {
        let mut s = TcpSender::new(100, T);
        let mut now = 0.0;
        let mut windows = Vec::new();
        for _ in 0..5 {
            let sent = drain(&mut s, now);
            windows.push(sent.len());
            now += 0.1;
            for &q in &sent {
                s.on_ack(q + 1, now);
            }
        }
        assert_eq!(windows, vec![1, 2, 4, 8, 16]);
    }

    #[test]
    fn congestion_avoidance_adds_one_per_round() {
        let mut s = TcpSender::new(1000, T);
        s.ssthresh = 4.0;
        s.cwnd = 4.0;
        let sent = drain(&mut s, 0.0);
        assert_eq!(sent.len(), 4);
        for &q in &sent {
            s.on_ack(q + 1, 0.1);
        }
        assert!((s.cwnd - 5.0).abs() < 0.1);
    }

    #[test]
    fn lossless_growth_is_monotone() {
        let mut s = TcpSender::new(200, T);
        let mut r = TcpReceiver::new(200);
        let mut last = s.cwnd;
        let mut now = 0.0;
        while !s.is_done() {
            let sent = drain(&mut s, now);
            now += 0.05;
            for q in sent {
                let a = r.on_data(q);
                s.on_ack(a, now);
                assert!(s.cwnd >= last);
                last = s.cwnd;
            }
        }
        assert!(r.is_complete());
    }

    #[test]
    fn timeout_halves_threshold_and_resets_window() {
        let mut s = TcpSender::new(100, T);
        s.cwnd = 10.0;
        drain(&mut s, 0.0);
        s.on_timeout();
        assert_eq!(s.ssthresh, 5.0);
        assert_eq!(s.cwnd, 1.0);
        assert_eq!(s.rto, 2.0);
        assert_eq!(s.snd_nxt, 0);
        assert_eq!(drain(&mut s, 3.0), vec![0]);
        // The resent packet is excluded from RTT sampling.
        s.on_ack(1, 3.5);
        assert_eq!(s.srtt(), None);
        for _ in 0..10 {
            s.on_timeout();
        }
        assert_eq!(s.rto, 60.0);
    }

    #[test]
    fn triple_duplicate_triggers_fast_retransmit() {
        let mut s = TcpSender::new(100, T);
        s.cwnd = 8.0;
        drain(&mut s, 0.0);
        assert_eq!(s.on_ack(1, 0.1), AckOutcome::NewAck { done: false });
        assert_eq!(s.on_ack(1, 0.1), AckOutcome::Duplicate);
        assert_eq!(s.on_ack(1, 0.1), AckOutcome::Duplicate);
        let cwnd = s.cwnd;
        assert_eq!(s.on_ack(1, 0.1), AckOutcome::FastRetransmit(1));
        assert_eq!(s.cwnd, (cwnd / 2.0).max(2.0));
    }

    #[test]
    fn rtt_estimator_gains() {
        let mut s = TcpSender::new(10, T);
        s.next_to_send(0.0);
        s.on_ack(1, 2.0);
        assert_eq!(s.srtt(), Some(2.0));
        assert_eq!(s.rto, 2.0 + 4.0 * 1.0);
        s.next_to_send(2.0);
        s.on_ack(2, 3.0);
        // rttvar = 3/4·1 + 1/4·|2-1|, srtt = 2 + (1-2)/8.
        assert_eq!(s.srtt(), Some(1.875));
        assert_eq!(s.rto, 1.875 + 4.0 * 1.0);
    }

    #[test]
    fn receiver_cumulative_acks() {
        let mut r = TcpReceiver::new(4);
        assert_eq!(r.on_data(1), 0);
        assert_eq!(r.on_data(0), 2);
        assert_eq!(r.on_data(3), 2);
        assert_eq!(r.on_data(2), 4);
        assert!(r.is_complete());
    }
}
