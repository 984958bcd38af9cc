//! Test-only reference code, written from the cost definitions without
//! going through the library's evaluators: Floyd–Warshall distances and
//! subset-enumeration costs over plain vectors.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rftfl::graph::{generate_random_instance, Instance};

pub type Dist = Vec<Vec<f64>>;

/// Seeded random connected instances with `n ∈ [4, 8]` and integer data.
pub fn corpus(count: u64) -> Vec<Instance> {
    (0..count)
        .map(|i| {
            let n = 4 + (i % 5) as usize;
            let density = 0.2 + 0.1 * (i % 7) as f64;
            generate_random_instance(n, density, 9, 9, 15, 1000 + i).unwrap()
        })
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Floyd–Warshall over the edge list; nodes are 0-based here.
pub fn floyd_warshall(inst: &Instance) -> Dist {
    let n = inst.n();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for e in inst.edges() {
        let (u, v) = (e.u - 1, e.v - 1);
        if e.length < d[u][v] {
            d[u][v] = e.length;
            d[v][u] = e.length;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

fn sc(w: f64, d: f64) -> f64 {
    if w == 0.0 {
        0.0
    } else {
        w * d
    }
}

fn nearest(d: &Dist, v: usize, set: &[usize]) -> f64 {
    let mut best = f64::INFINITY;
    for &s in set {
        if d[v][s] < best {
            best = d[v][s];
        }
    }
    best
}

/// Members of `mask` as 0-based ids.
pub fn members(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|b| mask >> b & 1 == 1).collect()
}

/// Sub-masks of `mask` with at most `k` bits.
fn small_submasks(mask: u64, k: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut s = mask;
    loop {
        if (s.count_ones() as usize) <= k {
            out.push(s);
        }
        if s == 0 {
            break;
        }
        s = (s - 1) & mask;
    }
    out
}

fn set_mask(set: &[usize]) -> u64 {
    set.iter().fold(0, |m, &v| m | 1 << v)
}

/// `Σ f + Σ ω d(v, R)` with 0-based `set`.
pub fn ufl(inst: &Instance, d: &Dist, set: &[usize]) -> f64 {
    let facil: f64 = set.iter().map(|&r| inst.opening_costs()[r]).sum();
    let ship: f64 = (0..inst.n())
        .map(|v| sc(inst.demands()[v], nearest(d, v, set)))
        .sum();
    facil + ship
}

/// Robust cost with every failure of at most `alpha` facilities enumerated.
pub fn alpha_rftfl(inst: &Instance, d: &Dist, set: &[usize], alpha: usize) -> f64 {
    if set.len() <= alpha {
        return f64::INFINITY;
    }
    let facil: f64 = set.iter().map(|&r| inst.opening_costs()[r]).sum();
    let mut worst = 0.0f64;
    for fail in small_submasks(set_mask(set), alpha) {
        let rest: Vec<usize> = set.iter().copied().filter(|&s| fail >> s & 1 == 0).collect();
        let ship: f64 = (0..inst.n())
            .map(|v| sc(inst.demands()[v], nearest(d, v, &rest)))
            .sum();
        worst = worst.max(ship);
    }
    facil + worst
}

/// Backup cost: lone servers (no other facility at all) are infeasible.
pub fn bu(w: &[f64], d: &Dist, r1: &[usize], r2: &[usize]) -> f64 {
    let all: Vec<usize> = {
        let mut a: Vec<usize> = r1.iter().chain(r2).copied().collect();
        a.sort();
        a.dedup();
        a
    };
    let mut worst = 0.0f64;
    for &r in r1 {
        let others: Vec<usize> = all.iter().copied().filter(|&x| x != r).collect();
        let c = if others.is_empty() {
            f64::INFINITY
        } else {
            sc(w[r], nearest(d, r, &others))
        };
        worst = worst.max(c);
    }
    worst
}

fn union_sorted(r1: &[usize], r2: &[usize]) -> Vec<usize> {
    let mut a: Vec<usize> = r1.iter().chain(r2).copied().collect();
    a.sort();
    a.dedup();
    a
}

/// Maximum α-backup cost by enumerating every failure set.
pub fn alpha_bu(w: &[f64], d: &Dist, r1: &[usize], r2: &[usize], alpha: usize) -> f64 {
    let all = union_sorted(r1, r2);
    let mut worst = 0.0f64;
    for fail in small_submasks(set_mask(&all), alpha) {
        let rest: Vec<usize> = all.iter().copied().filter(|&s| fail >> s & 1 == 0).collect();
        let mut total = 0.0;
        for &r in r1 {
            if fail >> r & 1 == 1 {
                total += if rest.is_empty() {
                    f64::INFINITY
                } else {
                    sc(w[r], nearest(d, r, &rest))
                };
            }
        }
        worst = worst.max(total);
    }
    worst
}

/// Light α-backup cost by enumerating every failure set for every server.
pub fn light_alpha_bu(w: &[f64], d: &Dist, r1: &[usize], r2: &[usize], alpha: usize) -> f64 {
    let all = union_sorted(r1, r2);
    let mut worst = 0.0f64;
    for fail in small_submasks(set_mask(&all), alpha) {
        let rest: Vec<usize> = all.iter().copied().filter(|&s| fail >> s & 1 == 0).collect();
        for &r in r1 {
            let c = if rest.is_empty() {
                f64::INFINITY
            } else {
                sc(w[r], nearest(d, r, &rest))
            };
            worst = worst.max(c);
        }
    }
    worst
}

/// Min of `cost` over all masks of `n` nodes accepted by `keep`.
pub fn brute_min(n: usize, keep: impl Fn(u64) -> bool, cost: impl Fn(&[usize]) -> f64) -> f64 {
    let mut best = f64::INFINITY;
    for mask in 0..1u64 << n {
        if keep(mask) {
            best = best.min(cost(&members(mask, n)));
        }
    }
    best
}

/// Transformed demands: every node's demand moves to its nearest server
/// (lowest id on ties). 0-based.
pub fn relocated_demand(inst: &Instance, d: &Dist, r1: &[usize]) -> Vec<f64> {
    let mut w = vec![0.0; inst.n()];
    for (v, row) in d.iter().enumerate() {
        let mut best = r1[0];
        for &r in r1 {
            if row[r] < row[best] || (row[r] == row[best] && r < best) {
                best = r;
            }
        }
        w[best] += inst.demands()[v];
    }
    w
}

/// Random nonempty subset of `0..n` (0-based) of size at most `max`.
pub fn random_subset(rng: &mut ChaCha8Rng, n: usize, max: usize) -> Vec<usize> {
    let size = rng.random_range(1..=max.min(n));
    let mut all: Vec<usize> = (0..n).collect();
    for i in 0..size {
        let j = rng.random_range(i..n);
        all.swap(i, j);
    }
    let mut s = all[..size].to_vec();
    s.sort();
    s
}

/// 1-based ids.
pub fn ids(set: &[usize]) -> rftfl::FacilitySet {
    rftfl::FacilitySet::new(set.iter().map(|v| v + 1))
}
