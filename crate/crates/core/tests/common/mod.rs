//! Independent reference computations shared by the integration tests.
//!
//! Nothing here calls into the library's solvers; the sailing rules are
//! re-derived from the cost table directly.

#![allow(dead_code)]

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};

pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

pub fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

/// Depth sequence of `me` choosing bar 1, written as a softmax agent whose
/// meeting reward is weighted by `2q − 1`.
pub fn fable_depths(me: (f64, f64), other: (f64, f64), max_depth: usize) -> Vec<f64> {
    let (mut a, mut b) = (me.0, other.0);
    let mut out = vec![a];
    for _ in 0..max_depth {
        let na = sigmoid(logit(me.0) + (2.0 * b - 1.0) * logit(me.1));
        let nb = sigmoid(logit(other.0) + (2.0 * a - 1.0) * logit(other.1));
        a = na;
        b = nb;
        out.push(a);
    }
    out
}

/// Fixed point of `p = σ(logit p1 + (2p − 1) logit pm)` by plain iteration.
pub fn symmetric_fixed_point(p1: f64, pm: f64) -> f64 {
    let mut p = p1;
    for _ in 0..100_000 {
        let next = sigmoid(logit(p1) + (2.0 * p - 1.0) * logit(pm));
        if (next - p).abs() < 1e-15 {
            return next;
        }
        p = next;
    }
    p
}

// ---- sailing ----

pub const OFFSETS: [(i32, i32); 8] = [(0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1)];
pub const WIND: [(i32, f64); 3] = [(0, 0.4), (-1, 0.3), (1, 0.3)];

/// (x, y, wind 0..8, tack: 0 unset, 1 port, 2 starboard)
pub type S = (i32, i32, usize, usize);

pub struct Lake {
    pub n: i32,
}

impl Lake {
    pub fn goal(&self) -> (i32, i32) {
        (self.n - 1, self.n - 1)
    }

    pub fn is_goal(&self, s: S) -> bool {
        (s.0, s.1) == self.goal()
    }

    pub fn states(&self) -> Vec<S> {
        let mut v = Vec::new();
        for x in 0..self.n {
            for y in 0..self.n {
                for w in 0..8 {
                    for t in 0..3 {
                        v.push((x, y, w, t));
                    }
                }
            }
        }
        v
    }

    /// `(heading, cost, next position, tack after)` for every allowed leg.
    pub fn legs(&self, s: S) -> Vec<(usize, f64, (i32, i32), usize)> {
        let mut out = Vec::new();
        for h in 0..8 {
            let mut d = (h as i32 - s.2 as i32).rem_euclid(8);
            if d > 4 {
                d -= 8;
            }
            if d.abs() == 4 {
                continue;
            }
            let (dx, dy) = OFFSETS[h];
            let (nx, ny) = (s.0 + dx, s.1 + dy);
            if nx < 0 || ny < 0 || nx >= self.n || ny >= self.n {
                continue;
            }
            let unit = [1.0, 2.0, 3.0, 4.0][d.unsigned_abs() as usize];
            let len = if h % 2 == 1 { 2f64.sqrt() } else { 1.0 };
            let tack = match d.signum() {
                0 => 0,
                1 => 2,
                _ => 1,
            };
            let flip = s.3 != 0 && tack != 0 && tack != s.3;
            out.push((h, unit * len + if flip { 4.0 } else { 0.0 }, (nx, ny), tack));
        }
        out
    }

    pub fn distance_to_goal(&self, p: (i32, i32)) -> f64 {
        let g = self.goal();
        (((g.0 - p.0).pow(2) + (g.1 - p.1).pow(2)) as f64).sqrt()
    }

    /// Distance-only softmax policy over the allowed legs.
    pub fn softmax(&self, s: S, theta: f64) -> Vec<f64> {
        let legs = self.legs(s);
        let scores: Vec<f64> = legs.iter().map(|l| -theta * self.distance_to_goal(l.2)).collect();
        let m = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let w: Vec<f64> = scores.iter().map(|x| (x - m).exp()).collect();
        let z: f64 = w.iter().sum();
        w.iter().map(|x| x / z).collect()
    }

    pub fn successors(&self, pos: (i32, i32), wind: usize, tack: usize) -> Vec<(S, f64)> {
        WIND.iter()
            .map(|(dw, p)| ((pos.0, pos.1, (wind as i32 + dw).rem_euclid(8) as usize, tack), *p))
            .collect()
    }

    fn start_average(&self, v: impl Fn(S) -> f64) -> f64 {
        (0..8).map(|w| v((0, 0, w, 0))).sum::<f64>() / 8.0
    }

    /// Memoized finite-horizon expectimax; beyond the horizon a non-goal state
    /// is worth `+∞`, so the values decrease to the infinite-horizon optimum.
    pub fn expectimax(&self, horizon: usize) -> f64 {
        let states = self.states();
        let mut v: HashMap<S, f64> = states
            .iter()
            .map(|s| (*s, if self.is_goal(*s) { 0.0 } else { f64::INFINITY }))
            .collect();
        for _ in 0..horizon {
            let mut next = HashMap::new();
            for &s in &states {
                let val = if self.is_goal(s) {
                    0.0
                } else {
                    self.legs(s)
                        .iter()
                        .map(|(_, c, p, t)| c + self.successors(*p, s.2, *t).iter().map(|(n, q)| q * v[n]).sum::<f64>())
                        .fold(f64::INFINITY, f64::min)
                };
                next.insert(s, val);
            }
            v = next;
        }
        self.start_average(|s| v[&s])
    }

    /// Expected cost of a stochastic policy `pi(s) -> probabilities over
    /// self.legs(s)` from an exact linear solve.
    pub fn evaluate(&self, pi: impl Fn(S) -> Vec<f64>) -> HashMap<S, f64> {
        let states: Vec<S> = self.states().into_iter().filter(|s| !self.is_goal(*s)).collect();
        let idx: HashMap<S, usize> = states.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let n = states.len();
        let mut a = DMatrix::<f64>::identity(n, n);
        let mut b = DVector::<f64>::zeros(n);
        for (i, &s) in states.iter().enumerate() {
            for (leg, pa) in self.legs(s).iter().zip(pi(s)) {
                b[i] += pa * leg.1;
                for (next, q) in self.successors(leg.2, s.2, leg.3) {
                    if let Some(&j) = idx.get(&next) {
                        a[(i, j)] -= pa * q;
                    }
                }
            }
        }
        let x = a.lu().solve(&b).expect("proper policy");
        let mut out: HashMap<S, f64> = states.iter().map(|s| (*s, x[idx[s]])).collect();
        for s in self.states().into_iter().filter(|s| self.is_goal(*s)) {
            out.insert(s, 0.0);
        }
        out
    }

    pub fn start_value(&self, v: &HashMap<S, f64>) -> f64 {
        self.start_average(|s| v[&s])
    }

    /// Howard policy iteration, starting from the cheapest leg that shortens
    /// the distance to the goal.
    pub fn policy_iteration(&self) -> f64 {
        let mut choice: HashMap<S, usize> = HashMap::new();
        for s in self.states().into_iter().filter(|s| !self.is_goal(*s)) {
            let d0 = self.distance_to_goal((s.0, s.1));
            let legs = self.legs(s);
            let best = (0..legs.len())
                .filter(|&i| self.distance_to_goal(legs[i].2) < d0)
                .min_by(|&i, &j| legs[i].1.total_cmp(&legs[j].1))
                .unwrap_or_else(|| {
                    (0..legs.len())
                        .min_by(|&i, &j| self.distance_to_goal(legs[i].2).total_cmp(&self.distance_to_goal(legs[j].2)))
                        .unwrap()
                });
            choice.insert(s, best);
        }
        loop {
            let v = self.evaluate(|s| {
                let mut p = vec![0.0; self.legs(s).len()];
                p[choice[&s]] = 1.0;
                p
            });
            let mut changed = false;
            for (s, c) in choice.iter_mut() {
                let q: Vec<f64> = self
                    .legs(*s)
                    .iter()
                    .map(|(_, cost, p, t)| cost + self.successors(*p, s.2, *t).iter().map(|(n, q)| q * v[n]).sum::<f64>())
                    .collect();
                let best = (0..q.len()).min_by(|&i, &j| q[i].total_cmp(&q[j])).unwrap();
                if q[best] < q[*c] - 1e-12 {
                    *c = best;
                    changed = true;
                }
            }
            if !changed {
                return self.start_value(&v);
            }
        }
    }

    /// `log E_θ[exp(−travel cost)]` from the start, by iterating the linear
    /// desirability equations `u = Σ π e^{−c} E[u(next)]`.
    pub fn exact_log_likelihood(&self, theta: f64) -> f64 {
        let states = self.states();
        let mut u: HashMap<S, f64> = states.iter().map(|s| (*s, if self.is_goal(*s) { 1.0 } else { 0.0 })).collect();
        let pis: HashMap<S, Vec<f64>> = states
            .iter()
            .filter(|s| !self.is_goal(**s))
            .map(|s| (*s, self.softmax(*s, theta)))
            .collect();
        for _ in 0..10_000 {
            let mut delta: f64 = 0.0;
            let mut next = u.clone();
            for (&s, pi) in &pis {
                let val: f64 = self
                    .legs(s)
                    .iter()
                    .zip(pi)
                    .map(|((_, c, p, t), pa)| {
                        pa * (-c).exp() * self.successors(*p, s.2, *t).iter().map(|(n, q)| q * u[n]).sum::<f64>()
                    })
                    .sum();
                delta = delta.max(((val + 1e-300).ln() - (u[&s] + 1e-300).ln()).abs());
                next.insert(s, val);
            }
            u = next;
            if delta < 1e-12 {
                break;
            }
        }
        self.start_average(|s| u[&s]).ln()
    }
}
