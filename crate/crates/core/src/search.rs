//! Exact search over the flip graph of odd matchings.
//!
//! The flip graph is never materialized unless asked for: a state is keyed
//! by the bitset of its matched edge ids (the isolated vertex is implied by
//! the key and carried alongside for speed). `flip_distance` runs a
//! bidirectional BFS over this implicit graph; diameter, radius and center
//! go through an explicit [`FlipGraph`] and one BFS per source state.

use std::hash::BuildHasher;

use hashbrown::HashTable;
use rayon::prelude::*;
use rustc_hash::FxBuildHasher;
use thiserror::Error;

use crate::graph::Graph;
use crate::matching::{charging_lower_bound, decompose_union, FlipSequence, MatchingError, OddMatching};

/// Default bound on states touched by any single search.
pub const DEFAULT_CAP: u64 = 50_000_000;

#[derive(Clone, Copy, Debug)]
pub struct SearchConfig {
    /// Hard bound on stored/expanded states.
    pub cap: u64,
    /// Worker threads for per-source BFS; 0 uses the global pool.
    pub jobs: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            cap: DEFAULT_CAP,
            jobs: 0,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("graph has an even number of vertices ({0}); no odd matchings exist")]
    NoOddMatchings(usize),
    #[error("the flip graph is empty")]
    EmptyFlipGraph,
    #[error(
        "the flip graph is disconnected: no flip sequence from the matching isolating {} to the one isolating {}",
        .from.isolated() + 1,
        .to.isolated() + 1
    )]
    Disconnected { from: OddMatching, to: OddMatching },
    #[error("search cap of {cap} states exceeded")]
    CapExceeded { cap: u64 },
    #[error("no flip sequence of length at most {budget} (expanded {nodes_expanded} states)")]
    BudgetExceeded { budget: usize, nodes_expanded: u64 },
    #[error(transparent)]
    Matching(#[from] MatchingError),
}

/// Packs matchings of one host graph into edge bitsets.
pub(crate) struct Codec<'g> {
    g: &'g Graph,
    words: usize,
}

impl<'g> Codec<'g> {
    pub(crate) fn new(g: &'g Graph) -> Self {
        Codec {
            g,
            words: g.edge_count().div_ceil(64).max(1),
        }
    }

    pub(crate) fn words(&self) -> usize {
        self.words
    }

    pub(crate) fn encode(&self, m: &OddMatching) -> Vec<u64> {
        let mut key = vec![0u64; self.words];
        for (a, b) in m.edges() {
            let id = self.g.edge_id(a, b).expect("matching edge not in graph");
            key[id / 64] |= 1 << (id % 64);
        }
        key
    }

    pub(crate) fn decode(&self, key: &[u64], iso: usize) -> OddMatching {
        let n = self.g.vertex_count();
        let mut mate = vec![usize::MAX; n];
        mate[iso] = iso;
        for (wi, &word) in key.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let id = wi * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let (a, b) = self.g.edges()[id];
                mate[a] = b;
                mate[b] = a;
            }
        }
        OddMatching::from_mates(mate, iso)
    }

    #[inline]
    fn matched_edge(&self, key: &[u64], w: usize) -> (usize, usize) {
        for &(u, id) in self.g.incident(w) {
            if key[id / 64] >> (id % 64) & 1 == 1 {
                return (u, id);
            }
        }
        unreachable!("vertex {w} is unmatched but not isolated")
    }

    /// Calls `f(w, successor_key, successor_iso)` for every legal flip,
    /// in ascending order of `w`.
    #[inline]
    pub(crate) fn for_each_successor(
        &self,
        key: &[u64],
        iso: usize,
        scratch: &mut Vec<u64>,
        mut f: impl FnMut(usize, &[u64], usize),
    ) {
        for &(w, add) in self.g.incident(iso) {
            let (p, drop) = self.matched_edge(key, w);
            scratch.clear();
            scratch.extend_from_slice(key);
            scratch[drop / 64] &= !(1 << (drop % 64));
            scratch[add / 64] |= 1 << (add % 64);
            f(w, scratch, p);
        }
    }
}

/// Arena of distinct states with a hash index over their keys.
pub(crate) struct StateStore {
    words: usize,
    keys: Vec<u64>,
    iso: Vec<u32>,
    table: HashTable<u32>,
    hasher: FxBuildHasher,
}

impl StateStore {
    pub(crate) fn new(words: usize) -> Self {
        StateStore {
            words,
            keys: Vec::new(),
            iso: Vec::new(),
            table: HashTable::new(),
            hasher: FxBuildHasher,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.iso.len()
    }

    pub(crate) fn key(&self, i: u32) -> &[u64] {
        let i = i as usize;
        &self.keys[i * self.words..(i + 1) * self.words]
    }

    pub(crate) fn iso(&self, i: u32) -> usize {
        self.iso[i as usize] as usize
    }

    pub(crate) fn find(&self, key: &[u64]) -> Option<u32> {
        let h = self.hasher.hash_one(key);
        let (keys, words) = (&self.keys, self.words);
        self.table
            .find(h, |&i| &keys[i as usize * words..(i as usize + 1) * words] == key)
            .copied()
    }

    /// Returns the index of `key` and whether it was newly added.
    pub(crate) fn insert(&mut self, key: &[u64], iso: usize) -> (u32, bool) {
        let h = self.hasher.hash_one(key);
        let words = self.words;
        let keys = &self.keys;
        if let Some(&i) = self
            .table
            .find(h, |&i| &keys[i as usize * words..(i as usize + 1) * words] == key)
        {
            return (i, false);
        }
        let idx = self.iso.len() as u32;
        self.keys.extend_from_slice(key);
        self.iso.push(iso as u32);
        let (keys, hasher) = (&self.keys, &self.hasher);
        self.table.insert_unique(h, idx, |&i| {
            hasher.hash_one(&keys[i as usize * words..(i as usize + 1) * words])
        });
        (idx, true)
    }
}

fn check_odd(g: &Graph) -> Result<(), SearchError> {
    if g.vertex_count() % 2 == 0 {
        Err(SearchError::NoOddMatchings(g.vertex_count()))
    } else {
        Ok(())
    }
}

/// Backtracking over vertices in index order: the lowest unassigned vertex
/// is either made isolated (tried first) or matched to a higher neighbor.
fn enumerate_keys(g: &Graph, cap: u64, mut emit: impl FnMut(&[u64], usize)) -> Result<u64, SearchError> {
    check_odd(g)?;
    struct Walk<'a, F> {
        g: &'a Graph,
        assigned: Vec<bool>,
        key: Vec<u64>,
        iso: Option<usize>,
        count: u64,
        cap: u64,
        emit: F,
    }
    impl<F: FnMut(&[u64], usize)> Walk<'_, F> {
        fn rec(&mut self, from: usize) -> Result<(), SearchError> {
            let n = self.g.vertex_count();
            let Some(v) = (from..n).find(|&v| !self.assigned[v]) else {
                self.count += 1;
                if self.count > self.cap {
                    return Err(SearchError::CapExceeded { cap: self.cap });
                }
                (self.emit)(&self.key, self.iso.expect("odd vertex count leaves one vertex"));
                return Ok(());
            };
            self.assigned[v] = true;
            if self.iso.is_none() {
                self.iso = Some(v);
                self.rec(v + 1)?;
                self.iso = None;
            }
            for &(u, id) in self.g.incident(v) {
                if u > v && !self.assigned[u] {
                    self.assigned[u] = true;
                    self.key[id / 64] |= 1 << (id % 64);
                    self.rec(v + 1)?;
                    self.key[id / 64] &= !(1 << (id % 64));
                    self.assigned[u] = false;
                }
            }
            self.assigned[v] = false;
            Ok(())
        }
    }
    let codec = Codec::new(g);
    let mut walk = Walk {
        g,
        assigned: vec![false; g.vertex_count()],
        key: vec![0; codec.words()],
        iso: None,
        count: 0,
        cap,
        emit: &mut emit,
    };
    walk.rec(0)?;
    Ok(walk.count)
}

/// All odd matchings of `g`, each once, in backtracking order.
pub fn enumerate_odd_matchings(g: &Graph) -> Result<Vec<OddMatching>, SearchError> {
    let codec = Codec::new(g);
    let mut out = Vec::new();
    enumerate_keys(g, DEFAULT_CAP, |key, iso| out.push(codec.decode(key, iso)))?;
    Ok(out)
}

pub fn count_odd_matchings(g: &Graph, cap: u64) -> Result<u64, SearchError> {
    enumerate_keys(g, cap, |_, _| {})
}

/// Explicit flip graph: every odd matching, indexed in enumeration order.
pub struct FlipGraph {
    graph: Graph,
    store: StateStore,
    offsets: Vec<u32>,
    targets: Vec<u32>,
}

pub fn build_flip_graph(g: &Graph, cfg: &SearchConfig) -> Result<FlipGraph, SearchError> {
    let codec = Codec::new(g);
    let mut store = StateStore::new(codec.words());
    enumerate_keys(g, cfg.cap, |key, iso| {
        store.insert(key, iso);
    })?;
    let mut offsets = Vec::with_capacity(store.len() + 1);
    let mut targets = Vec::new();
    let mut scratch = Vec::new();
    offsets.push(0);
    for i in 0..store.len() as u32 {
        codec.for_each_successor(store.key(i), store.iso(i), &mut scratch, |_, key, _| {
            targets.push(store.find(key).expect("successor of an odd matching is an odd matching"));
        });
        offsets.push(targets.len() as u32);
    }
    Ok(FlipGraph {
        graph: g.clone(),
        store,
        offsets,
        targets,
    })
}

pub(crate) fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> T {
    if jobs == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

impl FlipGraph {
    pub fn host(&self) -> &Graph {
        &self.graph
    }

    pub fn state_count(&self) -> usize {
        self.store.len()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn state(&self, i: usize) -> OddMatching {
        Codec::new(&self.graph).decode(self.store.key(i as u32), self.store.iso(i as u32))
    }

    pub fn index_of(&self, m: &OddMatching) -> Option<usize> {
        if m.vertex_count() != self.graph.vertex_count() {
            return None;
        }
        let key = Codec::new(&self.graph).encode(m);
        self.store.find(&key).map(|i| i as usize)
    }

    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.targets[self.offsets[i] as usize..self.offsets[i + 1] as usize]
    }

    /// BFS distances from `src`; `None` where unreachable.
    pub fn distances_from(&self, src: usize) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.state_count()];
        dist[src] = Some(0);
        let mut queue = std::collections::VecDeque::from([src]);
        while let Some(x) = queue.pop_front() {
            let d = dist[x].unwrap();
            for &y in self.neighbors(x) {
                if dist[y as usize].is_none() {
                    dist[y as usize] = Some(d + 1);
                    queue.push_back(y as usize);
                }
            }
        }
        dist
    }

    /// Component label per state, numbered by smallest member.
    pub fn components(&self) -> Vec<u32> {
        let n = self.state_count();
        let mut comp = vec![u32::MAX; n];
        let mut next = 0;
        let mut stack = Vec::new();
        for s in 0..n {
            if comp[s] != u32::MAX {
                continue;
            }
            comp[s] = next;
            stack.push(s as u32);
            while let Some(x) = stack.pop() {
                for &y in self.neighbors(x as usize) {
                    if comp[y as usize] == u32::MAX {
                        comp[y as usize] = next;
                        stack.push(y);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn component_count(&self) -> usize {
        self.components().into_iter().max().map_or(0, |c| c as usize + 1)
    }

    fn require_connected(&self) -> Result<(), SearchError> {
        if self.state_count() == 0 {
            return Err(SearchError::EmptyFlipGraph);
        }
        let comp = self.components();
        if let Some(j) = comp.iter().position(|&c| c != 0) {
            return Err(SearchError::Disconnected {
                from: self.state(0),
                to: self.state(j),
            });
        }
        Ok(())
    }

    /// Eccentricity of every state (within its component); the result
    /// does not depend on `jobs`.
    pub fn eccentricities(&self, jobs: usize) -> Vec<u32> {
        let sources: Vec<u32> = (0..self.state_count() as u32).collect();
        with_jobs(jobs, || {
            sources
                .par_chunks(64)
                .flat_map_iter(|chunk| self.batch_eccentricities(chunk))
                .collect()
        })
    }

    /// Eccentricities of up to 64 sources in one bit-parallel BFS: bit `b`
    /// of a state's word marks that source `b` has reached it.
    fn batch_eccentricities(&self, sources: &[u32]) -> Vec<u32> {
        debug_assert!(sources.len() <= 64);
        let n = self.state_count();
        let full = if sources.len() == 64 { u64::MAX } else { (1u64 << sources.len()) - 1 };
        let mut seen = vec![0u64; n];
        let mut frontier = vec![0u64; n];
        let mut next = vec![0u64; n];
        for (b, &x) in sources.iter().enumerate() {
            seen[x as usize] |= 1 << b;
            frontier[x as usize] |= 1 << b;
        }
        let mut ecc = vec![0u32; sources.len()];
        let mut depth = 0;
        loop {
            let mut active = 0u64;
            for x in 0..n {
                if seen[x] == full {
                    next[x] = 0;
                    continue;
                }
                let mut acc = 0u64;
                for &y in self.neighbors(x) {
                    acc |= frontier[y as usize];
                }
                let new = acc & !seen[x];
                next[x] = new;
                seen[x] |= new;
                active |= new;
            }
            if active == 0 {
                return ecc;
            }
            depth += 1;
            let mut bits = active;
            while bits != 0 {
                ecc[bits.trailing_zeros() as usize] = depth;
                bits &= bits - 1;
            }
            std::mem::swap(&mut frontier, &mut next);
        }
    }

    pub fn diameter(&self, jobs: usize) -> Result<usize, SearchError> {
        self.require_connected()?;
        Ok(self.eccentricities(jobs).into_iter().max().unwrap_or(0) as usize)
    }

    /// Exact diameter by the fringe method: a double sweep picks a
    /// central state `u`, then eccentricities are taken level by level
    /// from the states farthest from `u`. Once the best eccentricity seen
    /// exceeds `2(i - 1)`, no pair within distance `i - 1` of `u` can beat
    /// it and the search stops.
    pub fn diameter_bounded(&self) -> Result<usize, SearchError> {
        self.require_connected()?;
        let n = self.state_count();
        let mut dist = vec![u32::MAX; n];
        let farthest = |dist: &[u32]| (0..n).max_by_key(|&x| (dist[x], std::cmp::Reverse(x))).unwrap();
        self.bfs_into(0, &mut dist);
        let a = farthest(&dist);
        let mut best = self.bfs_into(a, &mut dist);
        let from_a = dist.clone();
        let b = farthest(&from_a);
        best = best.max(self.bfs_into(b, &mut dist));
        let half = best / 2;
        let u = (0..n)
            .find(|&x| from_a[x] == half && dist[x] == best - half)
            .unwrap_or(a);
        let ecc_u = self.bfs_into(u, &mut dist);
        best = best.max(ecc_u);
        let mut levels: Vec<Vec<u32>> = vec![Vec::new(); ecc_u as usize + 1];
        for x in 0..n {
            levels[dist[x] as usize].push(x as u32);
        }
        for i in (1..=ecc_u as usize).rev() {
            for chunk in levels[i].chunks(64) {
                best = best.max(self.batch_eccentricities(chunk).into_iter().max().unwrap_or(0));
            }
            if best as usize > 2 * (i - 1) {
                break;
            }
        }
        Ok(best as usize)
    }

    fn bfs_into(&self, src: usize, dist: &mut [u32]) -> u32 {
        dist.fill(u32::MAX);
        dist[src] = 0;
        let mut cur = vec![src as u32];
        let mut next = Vec::new();
        let mut depth = 0;
        loop {
            next.clear();
            for &x in &cur {
                for &y in self.neighbors(x as usize) {
                    if dist[y as usize] == u32::MAX {
                        dist[y as usize] = depth + 1;
                        next.push(y);
                    }
                }
            }
            if next.is_empty() {
                return depth;
            }
            depth += 1;
            std::mem::swap(&mut cur, &mut next);
        }
    }

    /// Radius and the indices of all center states, ascending.
    pub fn radius_center_indices(&self, jobs: usize) -> Result<(usize, Vec<usize>), SearchError> {
        self.require_connected()?;
        let ecc = self.eccentricities(jobs);
        let radius = *ecc.iter().min().unwrap();
        let centers = (0..ecc.len()).filter(|&i| ecc[i] == radius).collect();
        Ok((radius as usize, centers))
    }
}

pub fn diameter(g: &Graph, cfg: &SearchConfig) -> Result<usize, SearchError> {
    build_flip_graph(g, cfg)?.diameter(cfg.jobs)
}

/// Same value as [`diameter`], from few BFS runs on large flip graphs.
pub fn diameter_exact(g: &Graph, cfg: &SearchConfig) -> Result<usize, SearchError> {
    build_flip_graph(g, cfg)?.diameter_bounded()
}

pub fn radius_center(g: &Graph, cfg: &SearchConfig) -> Result<(usize, Vec<OddMatching>), SearchError> {
    let fg = build_flip_graph(g, cfg)?;
    let (r, idx) = fg.radius_center_indices(cfg.jobs)?;
    Ok((r, idx.into_iter().map(|i| fg.state(i)).collect()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EccentricityReport {
    pub eccentricity: usize,
    pub reached: u64,
    pub total: u64,
}

impl EccentricityReport {
    pub fn all_reached(&self) -> bool {
        self.reached == self.total
    }
}

/// Largest distance from `m` to any odd matching reachable from it.
pub fn eccentricity(g: &Graph, m: &OddMatching, cfg: &SearchConfig) -> Result<EccentricityReport, SearchError> {
    check_odd(g)?;
    let codec = Codec::new(g);
    let mut store = StateStore::new(codec.words());
    store.insert(&codec.encode(m), m.isolated());
    let mut frontier = vec![0u32];
    let mut next = Vec::new();
    let mut depth = 0;
    let mut scratch = Vec::new();
    loop {
        next.clear();
        for &x in &frontier {
            let key = store.key(x).to_vec();
            codec.for_each_successor(&key, store.iso(x), &mut scratch, |_, k, iso| {
                let (i, fresh) = store.insert(k, iso);
                if fresh {
                    next.push(i);
                }
            });
        }
        if store.len() as u64 > cfg.cap {
            return Err(SearchError::CapExceeded { cap: cfg.cap });
        }
        if next.is_empty() {
            break;
        }
        depth += 1;
        std::mem::swap(&mut frontier, &mut next);
    }
    Ok(EccentricityReport {
        eccentricity: depth,
        reached: store.len() as u64,
        total: count_odd_matchings(g, cfg.cap)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceReport {
    /// `None` when the target is unreachable.
    pub distance: Option<usize>,
    pub witness: Option<FlipSequence>,
    pub nodes_expanded: u64,
}

struct Side {
    store: StateStore,
    parent: Vec<u32>,
    via: Vec<u32>,
    depth: Vec<u32>,
    frontier: Vec<u32>,
    level: usize,
}

impl Side {
    fn new(words: usize, key: &[u64], iso: usize) -> Side {
        let mut store = StateStore::new(words);
        store.insert(key, iso);
        Side {
            store,
            parent: vec![u32::MAX],
            via: vec![u32::MAX],
            depth: vec![0],
            frontier: vec![0],
            level: 0,
        }
    }

    /// Flip targets from the root to state `i`.
    fn steps_to(&self, mut i: u32) -> Vec<usize> {
        let mut out = Vec::new();
        while self.parent[i as usize] != u32::MAX {
            out.push(self.via[i as usize] as usize);
            i = self.parent[i as usize];
        }
        out.reverse();
        out
    }
}

/// Exact flip distance by bidirectional BFS. The smaller frontier is
/// expanded one full level at a time (ties go forward). With a budget,
/// states whose depth plus charging lower bound to the opposite root
/// exceeds it are pruned, and failing to find a sequence within the
/// budget is reported as [`SearchError::BudgetExceeded`].
pub fn flip_distance(
    g: &Graph,
    m1: &OddMatching,
    m2: &OddMatching,
    budget: Option<usize>,
    cfg: &SearchConfig,
) -> Result<DistanceReport, SearchError> {
    check_odd(g)?;
    let codec = Codec::new(g);
    let k1 = codec.encode(m1);
    let k2 = codec.encode(m2);
    if k1 == k2 {
        return Ok(DistanceReport {
            distance: Some(0),
            witness: Some(FlipSequence {
                start: m1.clone(),
                steps: vec![],
            }),
            nodes_expanded: 0,
        });
    }
    let mut fwd = Side::new(codec.words(), &k1, m1.isolated());
    let mut bwd = Side::new(codec.words(), &k2, m2.isolated());
    let mut best: Option<(usize, u32, u32)> = None;
    let mut expanded: u64 = 0;
    let mut pruned = false;
    let mut scratch = Vec::new();
    let over_budget = |expanded| SearchError::BudgetExceeded {
        budget: budget.unwrap_or(usize::MAX),
        nodes_expanded: expanded,
    };

    loop {
        if let Some((len, _, _)) = best {
            if len <= fwd.level + bwd.level + 1 {
                break;
            }
        }
        if let Some(b) = budget {
            if fwd.level + bwd.level + 1 > b && best.map_or(true, |(len, _, _)| len > b) {
                return Err(over_budget(expanded));
            }
        }
        if fwd.frontier.is_empty() || bwd.frontier.is_empty() {
            if best.is_some() {
                break;
            }
            if pruned {
                return Err(over_budget(expanded));
            }
            return Ok(DistanceReport {
                distance: None,
                witness: None,
                nodes_expanded: expanded,
            });
        }
        let forward = fwd.frontier.len() <= bwd.frontier.len();
        let (side, other, target) = if forward {
            (&mut fwd, &bwd, m2)
        } else {
            (&mut bwd, &fwd, m1)
        };
        let frontier = std::mem::take(&mut side.frontier);
        let depth = side.level as u32 + 1;
        let mut next = Vec::new();
        for &x in &frontier {
            expanded += 1;
            if expanded > cfg.cap {
                return Err(SearchError::CapExceeded { cap: cfg.cap });
            }
            let key = side.store.key(x).to_vec();
            let iso = side.store.iso(x);
            codec.for_each_successor(&key, iso, &mut scratch, |w, k, new_iso| {
                if side.store.find(k).is_some() {
                    return;
                }
                if let Some(b) = budget {
                    let m = codec.decode(k, new_iso);
                    let lb = decompose_union(&m, target).map(|d| charging_lower_bound(&d)).unwrap_or(0);
                    if depth as usize + lb > b {
                        pruned = true;
                        return;
                    }
                }
                let (i, _) = side.store.insert(k, new_iso);
                side.parent.push(x);
                side.via.push(w as u32);
                side.depth.push(depth);
                next.push(i);
                if let Some(j) = other.store.find(k) {
                    let total = depth as usize + other.depth[j as usize] as usize;
                    if best.map_or(true, |(len, _, _)| total < len) {
                        best = Some(if forward { (total, i, j) } else { (total, j, i) });
                    }
                }
            });
        }
        side.frontier = next;
        side.level += 1;
    }

    let (len, fi, bi) = best.expect("loop exits with a meeting point");
    if let Some(b) = budget {
        if len > b {
            return Err(over_budget(expanded));
        }
    }
    let mut steps = fwd.steps_to(fi);
    let mut back = bwd.steps_to(bi);
    // a flip to w is undone by flipping to w again
    back.reverse();
    steps.extend(back);
    debug_assert_eq!(steps.len(), len);
    Ok(DistanceReport {
        distance: Some(len),
        witness: Some(FlipSequence {
            start: m1.clone(),
            steps,
        }),
        nodes_expanded: expanded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::{cycle, path};
    use crate::matching::validate_sequence;

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_odd_matchings(&Graph::empty(1)).unwrap().len(), 1);
        let p3 = enumerate_odd_matchings(&path(3)).unwrap();
        assert_eq!(p3.iter().map(|m| m.isolated()).collect::<Vec<_>>(), vec![0, 2]);
        let c5 = enumerate_odd_matchings(&cycle(5)).unwrap();
        let mut isos: Vec<_> = c5.iter().map(|m| m.isolated()).collect();
        isos.sort();
        assert_eq!(isos, vec![0, 1, 2, 3, 4]);
        assert_eq!(enumerate_odd_matchings(&cycle(4)), Err(SearchError::NoOddMatchings(4)));
    }

    #[test]
    fn distances_on_small_graphs() {
        let cfg = SearchConfig::default();
        let p3 = path(3);
        let ms = enumerate_odd_matchings(&p3).unwrap();
        let r = flip_distance(&p3, &ms[0], &ms[0], None, &cfg).unwrap();
        assert_eq!(r.distance, Some(0));
        let r = flip_distance(&p3, &ms[1], &ms[0], None, &cfg).unwrap();
        assert_eq!(r.distance, Some(1));

        let c5 = cycle(5);
        let ms = enumerate_odd_matchings(&c5).unwrap();
        let mut worst = 0;
        for a in &ms {
            for b in &ms {
                let r = flip_distance(&c5, a, b, None, &cfg).unwrap();
                let d = r.distance.unwrap();
                let (end, len) = validate_sequence(&c5, &r.witness.unwrap()).unwrap();
                assert_eq!((&end, len), (b, d));
                if a != b {
                    assert!(d == 1 || d == 2);
                }
                worst = worst.max(d);
            }
        }
        assert_eq!(worst, 2);
    }

    #[test]
    fn unreachable_and_budget() {
        // 4-cycle plus an isolated vertex: the isolated vertex never moves
        let g = Graph::new(5, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let ms = enumerate_odd_matchings(&g).unwrap();
        assert_eq!(ms.len(), 2);
        let cfg = SearchConfig::default();
        let r = flip_distance(&g, &ms[0], &ms[1], None, &cfg).unwrap();
        assert_eq!(r.distance, None);
        assert!(r.witness.is_none());

        let c5 = cycle(5);
        let a = OddMatching::new(&c5, 0, [(1, 2), (3, 4)]).unwrap();
        let b = OddMatching::new(&c5, 1, [(2, 3), (4, 0)]).unwrap();
        assert_eq!(flip_distance(&c5, &a, &b, None, &cfg).unwrap().distance, Some(2));
        assert_eq!(flip_distance(&c5, &a, &b, Some(2), &cfg).unwrap().distance, Some(2));
        assert!(matches!(
            flip_distance(&c5, &a, &b, Some(1), &cfg),
            Err(SearchError::BudgetExceeded { budget: 1, .. })
        ));
    }

    #[test]
    fn cap_is_enforced() {
        let c9 = cycle(9);
        let cfg = SearchConfig { cap: 3, jobs: 0 };
        assert_eq!(build_flip_graph(&c9, &cfg).err(), Some(SearchError::CapExceeded { cap: 3 }));
    }

    #[test]
    fn flip_graph_examples() {
        let cfg = SearchConfig::default();
        let fg = build_flip_graph(&cycle(5), &cfg).unwrap();
        assert_eq!(fg.state_count(), 5);
        assert!((0..5).all(|i| fg.neighbors(i).len() == 2));
        for i in 0..5 {
            for &j in fg.neighbors(i) {
                assert!(fg.neighbors(j as usize).contains(&(i as u32)));
            }
        }
        let fg = build_flip_graph(&path(3), &cfg).unwrap();
        assert_eq!((fg.state_count(), fg.edge_count()), (2, 1));
        let fg = build_flip_graph(&Graph::empty(1), &cfg).unwrap();
        assert_eq!((fg.state_count(), fg.edge_count()), (1, 0));
    }

    #[test]
    fn diameter_radius_examples() {
        let cfg = SearchConfig::default();
        assert_eq!(diameter(&Graph::empty(1), &cfg).unwrap(), 0);
        assert_eq!(diameter(&cycle(5), &cfg).unwrap(), 2);
        assert_eq!(diameter(&path(3), &cfg).unwrap(), 1);
        let (r, c) = radius_center(&Graph::empty(1), &cfg).unwrap();
        assert_eq!((r, c.len()), (0, 1));
        let (r, c) = radius_center(&cycle(5), &cfg).unwrap();
        assert_eq!((r, c.len()), (2, 5));
        let (r, c) = radius_center(&path(3), &cfg).unwrap();
        assert_eq!((r, c.len()), (1, 2));

        let split = Graph::new(5, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert!(matches!(diameter(&split, &cfg), Err(SearchError::Disconnected { .. })));
        let star = Graph::new(5, [(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert_eq!(diameter(&star, &cfg), Err(SearchError::EmptyFlipGraph));
    }

    #[test]
    fn eccentricity_examples() {
        let cfg = SearchConfig::default();
        let k1 = Graph::empty(1);
        let m = OddMatching::new(&k1, 0, []).unwrap();
        assert_eq!(eccentricity(&k1, &m, &cfg).unwrap().eccentricity, 0);
        for m in enumerate_odd_matchings(&cycle(5)).unwrap() {
            let r = eccentricity(&cycle(5), &m, &cfg).unwrap();
            assert_eq!(r.eccentricity, 2);
            assert!(r.all_reached());
        }
        let p3 = path(3);
        for m in enumerate_odd_matchings(&p3).unwrap() {
            assert_eq!(eccentricity(&p3, &m, &cfg).unwrap().eccentricity, 1);
        }
        let split = Graph::new(5, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let m = &enumerate_odd_matchings(&split).unwrap()[0];
        let r = eccentricity(&split, m, &cfg).unwrap();
        assert_eq!((r.eccentricity, r.reached, r.total), (0, 1, 2));
        assert!(!r.all_reached());
    }

    #[test]
    fn eccentricities_independent_of_jobs() {
        let g = Graph::new(7, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 0), (0, 3), (2, 5)]).unwrap();
        let fg = build_flip_graph(&g, &SearchConfig::default()).unwrap();
        assert_eq!(fg.eccentricities(1), fg.eccentricities(3));
    }
}
