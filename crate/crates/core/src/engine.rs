//! Incremental supernode-merge engine shared by the agglomerative
//! summarizers (Greedy, Randomized, SWeG and their holistic variants).
//!
//! Per-supernode cost is C(U) = Σ_r Σ_{X ∈ N_r(U)} C(U,X,r) with
//! C(U,W,r) = min{|Π_UW| − |A_UW,r| + 1, |A_UW,r|}; self pairs count
//! |U|(|U|−1)/2 candidate pairs. Cross-pair costs are charged to both
//! endpoints, which is what the fractional reduction
//! ΔC(U,W) = (C(U)+C(W)−C(H)) / (C(U)+C(W)) measures.

// per-relation count vectors are iterated by index alongside parallel
// arrays; the range form is the readable one here
#![allow(clippy::needless_range_loop)]

use std::collections::{BinaryHeap, HashMap};

use rand::Rng;

use crate::graph::{NodeId, RelationSet};
use crate::partition::Partition;

/// Exact fraction for cost reductions; den is 0 only for the 0/0 case,
/// which compares as zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Reduction {
    pub num: i64,
    pub den: i64,
}

impl Reduction {
    pub const ZERO: Reduction = Reduction { num: 0, den: 1 };

    pub fn is_positive(&self) -> bool {
        self.num > 0 && self.den > 0
    }

    pub fn as_f64(&self) -> f64 {
        if self.den == 0 {
            0.0
        } else {
            self.num as f64 / self.den as f64
        }
    }

    fn cmp_value(&self, other: &Reduction) -> std::cmp::Ordering {
        // a/b vs c/d with b, d >= 0
        let (a, b) = (self.num as i128, self.den.max(1) as i128);
        let (c, d) = (other.num as i128, other.den.max(1) as i128);
        (a * d).cmp(&(c * b))
    }
}

/// One executed merge, for traces.
#[derive(Debug, Clone, Copy)]
pub struct MergeRecord {
    /// minimum member of each side, ascending
    pub pair: (NodeId, NodeId),
    pub reduction: Reduction,
}

#[derive(Debug)]
struct Supernode {
    members: Vec<NodeId>,
    /// other-slot -> per-relation edge counts
    cross: HashMap<u32, Vec<u32>>,
    /// per-relation intra-pair edge counts
    selfc: Vec<u32>,
    cost: u64,
}

pub struct MergeEngine<'g, G: RelationSet> {
    g: &'g G,
    q: usize,
    slots: Vec<Option<Supernode>>,
    node_slot: Vec<u32>,
    version: Vec<u64>,
    alive: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Candidate {
    reduction: Reduction,
    /// (min rep, max rep): unique per supernode pair, the tie-break key
    key: (NodeId, NodeId),
    u: u32,
    w: u32,
    vu: u64,
    vw: u64,
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.reduction
            .cmp_value(&other.reduction)
            .then_with(|| other.key.cmp(&self.key))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

fn pair_cost(pi: u64, a: u64) -> u64 {
    if a == 0 {
        0
    } else {
        a.min(pi - a + 1)
    }
}

impl<'g, G: RelationSet> MergeEngine<'g, G> {
    pub fn new(g: &'g G) -> Self {
        Self::with_partition(g, &Partition::identity(g.node_count()))
    }

    pub fn with_partition(g: &'g G, p: &Partition) -> Self {
        let q = g.relation_count();
        let n = g.node_count();
        debug_assert_eq!(p.n(), n);
        let k = p.k();
        let mut slots: Vec<Option<Supernode>> = (0..k)
            .map(|id| {
                Some(Supernode {
                    members: p.members(id as u32).to_vec(),
                    cross: HashMap::new(),
                    selfc: vec![0; q],
                    cost: 0,
                })
            })
            .collect();
        let node_slot: Vec<u32> = p.assignment().to_vec();
        for u in 0..n as NodeId {
            let su = node_slot[u as usize];
            for r in 0..q {
                for &v in g.rel_neighbors(r, u) {
                    if v <= u {
                        continue;
                    }
                    let sv = node_slot[v as usize];
                    if su == sv {
                        slots[su as usize].as_mut().unwrap().selfc[r] += 1;
                    } else {
                        for (x, y) in [(su, sv), (sv, su)] {
                            let e = slots[x as usize]
                                .as_mut()
                                .unwrap()
                                .cross
                                .entry(y)
                                .or_insert_with(|| vec![0; q]);
                            e[r] += 1;
                        }
                    }
                }
            }
        }
        let mut engine = MergeEngine { g, q, slots, node_slot, version: vec![0; k], alive: k };
        for id in 0..k as u32 {
            let c = engine.compute_cost(id);
            engine.slots[id as usize].as_mut().unwrap().cost = c;
        }
        engine
    }

    pub fn alive_count(&self) -> usize {
        self.alive
    }

    pub fn alive_slots(&self) -> Vec<u32> {
        (0..self.slots.len() as u32).filter(|&s| self.slots[s as usize].is_some()).collect()
    }

    pub fn cost_of(&self, slot: u32) -> u64 {
        self.slots[slot as usize].as_ref().unwrap().cost
    }

    /// Σ_U C(U): the engine objective (cross-pair costs counted from both
    /// sides). Strictly decreases on every positive-reduction merge.
    pub fn total_cost(&self) -> u64 {
        self.slots.iter().flatten().map(|s| s.cost).sum()
    }

    fn rep(&self, slot: u32) -> NodeId {
        self.slots[slot as usize].as_ref().unwrap().members[0]
    }

    fn size(&self, slot: u32) -> u64 {
        self.slots[slot as usize].as_ref().unwrap().members.len() as u64
    }

    fn self_pairs(size: u64) -> u64 {
        size * (size - 1) / 2
    }

    fn compute_cost(&self, slot: u32) -> u64 {
        let s = self.slots[slot as usize].as_ref().unwrap();
        let size = s.members.len() as u64;
        let mut cost = 0;
        let sp = Self::self_pairs(size);
        for r in 0..self.q {
            cost += pair_cost(sp, s.selfc[r] as u64);
        }
        for (&other, counts) in &s.cross {
            let pi = size * self.size(other);
            for r in 0..self.q {
                cost += pair_cost(pi, counts[r] as u64);
            }
        }
        cost
    }

    /// C(H) for the hypothetical merge of u and w.
    fn merged_cost(&self, u: u32, w: u32) -> u64 {
        let su = self.slots[u as usize].as_ref().unwrap();
        let sw = self.slots[w as usize].as_ref().unwrap();
        let size = su.members.len() as u64 + sw.members.len() as u64;
        let sp = Self::self_pairs(size);
        let zero = vec![0u32; self.q];
        let uw = su.cross.get(&w).unwrap_or(&zero);
        let mut cost = 0;
        for r in 0..self.q {
            let a = su.selfc[r] as u64 + sw.selfc[r] as u64 + uw[r] as u64;
            cost += pair_cost(sp, a);
        }
        for (&x, cu) in &su.cross {
            if x == w {
                continue;
            }
            let cw = sw.cross.get(&x).unwrap_or(&zero);
            let pi = size * self.size(x);
            for r in 0..self.q {
                cost += pair_cost(pi, cu[r] as u64 + cw[r] as u64);
            }
        }
        for (&x, cw) in &sw.cross {
            if x == u || su.cross.contains_key(&x) {
                continue;
            }
            let pi = size * self.size(x);
            for r in 0..self.q {
                cost += pair_cost(pi, cw[r] as u64);
            }
        }
        cost
    }

    /// Fractional cost reduction ΔC(u, w).
    pub fn reduction(&self, u: u32, w: u32) -> Reduction {
        let base = self.cost_of(u) + self.cost_of(w);
        if base == 0 {
            return Reduction::ZERO;
        }
        let merged = self.merged_cost(u, w);
        Reduction { num: base as i64 - merged as i64, den: base as i64 }
    }

    /// Merges two supernodes; returns the surviving slot id (a fresh slot).
    pub fn merge(&mut self, u: u32, w: u32) -> u32 {
        debug_assert_ne!(u, w);
        let su = self.slots[u as usize].take().unwrap();
        let sw = self.slots[w as usize].take().unwrap();
        self.alive -= 2;
        let h = self.slots.len() as u32;

        let mut members = Vec::with_capacity(su.members.len() + sw.members.len());
        members.extend_from_slice(&su.members);
        members.extend_from_slice(&sw.members);
        members.sort_unstable();
        for &m in &members {
            self.node_slot[m as usize] = h;
        }

        let zero = vec![0u32; self.q];
        let mut selfc = vec![0u32; self.q];
        let uw = su.cross.get(&w).unwrap_or(&zero);
        for r in 0..self.q {
            selfc[r] = su.selfc[r] + sw.selfc[r] + uw[r];
        }
        let mut cross: HashMap<u32, Vec<u32>> = HashMap::new();
        for (src, skip) in [(&su.cross, w), (&sw.cross, u)] {
            for (&x, counts) in src {
                if x == skip {
                    continue;
                }
                let e = cross.entry(x).or_insert_with(|| vec![0; self.q]);
                for r in 0..self.q {
                    e[r] += counts[r];
                }
            }
        }

        // fix neighbor maps and costs
        let mut touched: Vec<u32> = cross.keys().copied().collect();
        touched.sort_unstable();
        let (hu, hw) = (su.members.len() as u64, sw.members.len() as u64);
        let hsize = hu + hw;
        for &x in &touched {
            let sx_size = self.size(x);
            let sx = self.slots[x as usize].as_mut().unwrap();
            let cu = sx.cross.remove(&u);
            let cw = sx.cross.remove(&w);
            let mut old = 0u64;
            if let Some(c) = &cu {
                for r in 0..self.q {
                    old += pair_cost(sx_size * hu, c[r] as u64);
                }
            }
            if let Some(c) = &cw {
                for r in 0..self.q {
                    old += pair_cost(sx_size * hw, c[r] as u64);
                }
            }
            let mut merged = vec![0u32; self.q];
            for c in [cu, cw].into_iter().flatten() {
                for r in 0..self.q {
                    merged[r] += c[r];
                }
            }
            let mut new = 0u64;
            for r in 0..self.q {
                new += pair_cost(sx_size * hsize, merged[r] as u64);
            }
            sx.cross.insert(h, merged);
            sx.cost = sx.cost + new - old;
        }

        self.slots.push(Some(Supernode { members, cross, selfc, cost: 0 }));
        self.version.push(0);
        self.alive += 1;
        let c = self.compute_cost(h);
        self.slots[h as usize].as_mut().unwrap().cost = c;

        // version bumps: the dead pair, the new slot, and every neighbor
        // whose cost changed
        self.version[u as usize] += 1;
        self.version[w as usize] += 1;
        self.version[h as usize] += 1;
        for &x in &touched {
            self.version[x as usize] += 1;
        }
        h
    }

    /// Supernodes within two hops of `slot` (shared edge, or a common
    /// neighbor supernode), sorted.
    pub fn two_hop(&self, slot: u32) -> Vec<u32> {
        let s = self.slots[slot as usize].as_ref().unwrap();
        let mut out: Vec<u32> = Vec::new();
        for &x in s.cross.keys() {
            out.push(x);
            for &y in self.slots[x as usize].as_ref().unwrap().cross.keys() {
                if y != slot {
                    out.push(y);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    fn candidate(&self, u: u32, w: u32) -> Candidate {
        let (ru, rw) = (self.rep(u), self.rep(w));
        let key = if ru < rw { (ru, rw) } else { (rw, ru) };
        Candidate {
            reduction: self.reduction(u, w),
            key,
            u,
            w,
            vu: self.version[u as usize],
            vw: self.version[w as usize],
        }
    }

    /// Greedy loop: merge the best positive-reduction 2-hop pair until none
    /// remains, or until `k_target` supernodes are reached. When the
    /// positive phase ends above `k_target`, continues with the
    /// least-sacrifice merges over all pairs. Returns the merge trace.
    pub fn run_greedy(&mut self, k_target: Option<usize>) -> Vec<MergeRecord> {
        let mut trace = Vec::new();
        if let Some(k) = k_target {
            if self.alive <= k {
                return trace;
            }
        }
        let mut heap: BinaryHeap<Candidate> = BinaryHeap::new();
        let alive = self.alive_slots();
        for &u in &alive {
            for w in self.two_hop(u) {
                if self.rep(w) > self.rep(u) {
                    let c = self.candidate(u, w);
                    if c.reduction.is_positive() {
                        heap.push(c);
                    }
                }
            }
        }
        while let Some(c) = heap.pop() {
            if self.slots[c.u as usize].is_none()
                || self.slots[c.w as usize].is_none()
                || self.version[c.u as usize] != c.vu
                || self.version[c.w as usize] != c.vw
                || !c.reduction.is_positive()
            {
                continue;
            }
            trace.push(MergeRecord { pair: c.key, reduction: c.reduction });
            let h = self.merge(c.u, c.w);
            if let Some(k) = k_target {
                if self.alive <= k {
                    return trace;
                }
            }
            // refresh candidates around every supernode whose cost changed
            let mut affected: Vec<u32> =
                self.slots[h as usize].as_ref().unwrap().cross.keys().copied().collect();
            affected.push(h);
            affected.sort_unstable();
            for &y in &affected {
                for z in self.two_hop(y) {
                    let cand = self.candidate(y, z);
                    if cand.reduction.is_positive() {
                        heap.push(cand);
                    }
                }
            }
        }
        if let Some(k) = k_target {
            while self.alive > k {
                let alive = self.alive_slots();
                let mut best: Option<Candidate> = None;
                for (i, &u) in alive.iter().enumerate() {
                    for &w in &alive[i + 1..] {
                        let c = self.candidate(u, w);
                        match &best {
                            None => best = Some(c),
                            Some(b) => {
                                if c.cmp(b) == std::cmp::Ordering::Greater {
                                    best = Some(c);
                                }
                            }
                        }
                    }
                }
                let c = best.expect("alive > k >= 1 implies at least one pair");
                trace.push(MergeRecord { pair: c.key, reduction: c.reduction });
                self.merge(c.u, c.w);
            }
        }
        trace
    }

    /// Randomized loop: repeatedly pick a random unexplored supernode and
    /// merge it with its best 2-hop neighbor when the reduction is
    /// positive, otherwise mark it explored. A merge produces a fresh
    /// unexplored supernode, so absorbed explored nodes come back into
    /// play through it.
    pub fn run_randomized<R: Rng>(&mut self, rng: &mut R) {
        let mut unexplored: Vec<u32> = self.alive_slots();
        while !unexplored.is_empty() {
            let idx = rng.gen_range(0..unexplored.len());
            let u = unexplored[idx];
            if self.slots[u as usize].is_none() {
                unexplored.swap_remove(idx);
                continue;
            }
            let mut best: Option<Candidate> = None;
            for w in self.two_hop(u) {
                let c = self.candidate(u, w);
                if !c.reduction.is_positive() {
                    continue;
                }
                match &best {
                    None => best = Some(c),
                    Some(b) => {
                        if c.cmp(b) == std::cmp::Ordering::Greater {
                            best = Some(c);
                        }
                    }
                }
            }
            match best {
                Some(c) => {
                    let h = self.merge(c.u, c.w);
                    unexplored.swap_remove(idx);
                    unexplored.retain(|&s| self.slots[s as usize].is_some());
                    unexplored.push(h);
                }
                None => {
                    unexplored.swap_remove(idx);
                }
            }
        }
    }

    /// One SWeG round: group supernodes by shingle under the permutation
    /// `h_perm` (h_perm[node] = rank), then run the Randomized procedure
    /// inside each group.
    pub fn run_sweg_round<R: Rng>(&mut self, h_perm: &[u32], rng: &mut R) {
        let n = self.g.node_count();
        let mut f = vec![u32::MAX; n];
        for u in 0..n {
            let mut best = h_perm[u];
            for r in 0..self.q {
                for &v in self.g.rel_neighbors(r, u as NodeId) {
                    best = best.min(h_perm[v as usize]);
                }
            }
            f[u] = best;
        }
        let mut slots: Vec<(u32, u32)> = self
            .alive_slots()
            .into_iter()
            .map(|s| {
                let shingle = self.slots[s as usize]
                    .as_ref()
                    .unwrap()
                    .members
                    .iter()
                    .map(|&m| f[m as usize])
                    .min()
                    .unwrap();
                (shingle, s)
            })
            .collect();
        slots.sort_unstable_by_key(|&(sh, s)| (sh, self.rep(s)));

        let mut i = 0;
        while i < slots.len() {
            let shingle = slots[i].0;
            let mut group: Vec<u32> = Vec::new();
            while i < slots.len() && slots[i].0 == shingle {
                group.push(slots[i].1);
                i += 1;
            }
            if group.len() < 2 {
                continue;
            }
            self.randomized_within(&group, rng);
        }
    }

    fn randomized_within<R: Rng>(&mut self, group: &[u32], rng: &mut R) {
        let mut in_group: HashMap<u32, bool> = group.iter().map(|&s| (s, true)).collect();
        let mut unexplored: Vec<u32> = group.to_vec();
        while !unexplored.is_empty() {
            let idx = rng.gen_range(0..unexplored.len());
            let u = unexplored[idx];
            if self.slots[u as usize].is_none() {
                unexplored.swap_remove(idx);
                continue;
            }
            let mut best: Option<Candidate> = None;
            for w in self.two_hop(u) {
                if !in_group.get(&w).copied().unwrap_or(false)
                    || self.slots[w as usize].is_none()
                {
                    continue;
                }
                let c = self.candidate(u, w);
                if !c.reduction.is_positive() {
                    continue;
                }
                match &best {
                    None => best = Some(c),
                    Some(b) => {
                        if c.cmp(b) == std::cmp::Ordering::Greater {
                            best = Some(c);
                        }
                    }
                }
            }
            match best {
                Some(c) => {
                    in_group.insert(c.u, false);
                    in_group.insert(c.w, false);
                    let h = self.merge(c.u, c.w);
                    in_group.insert(h, true);
                    unexplored.swap_remove(idx);
                    unexplored.retain(|&s| self.slots[s as usize].is_some());
                    unexplored.push(h);
                }
                None => {
                    unexplored.swap_remove(idx);
                }
            }
        }
    }

    pub fn current_partition(&self) -> Partition {
        Partition::from_assignment(&self.node_slot)
    }

    /// Recomputes every count and cost from the graph and compares with the
    /// incrementally maintained state.
    pub fn state_matches_recomputation(&self) -> bool {
        let fresh = MergeEngine::with_partition(self.g, &self.current_partition());
        let mut mine: Vec<(Vec<NodeId>, u64)> = self
            .slots
            .iter()
            .flatten()
            .map(|s| (s.members.clone(), s.cost))
            .collect();
        let mut theirs: Vec<(Vec<NodeId>, u64)> =
            fresh.slots.iter().flatten().map(|s| (s.members.clone(), s.cost)).collect();
        mine.sort();
        theirs.sort();
        mine == theirs
    }
}
