//! Complete-cap search.
//!
//! [`greedy_complete`] grows a cap one extension point at a time until none
//! is left. The set of extension points is maintained incrementally: adding
//! `x` blocks every point on a line joining `x` to an existing member.
//!
//! Restarts are independent. Run `i` of a spectrum draws its randomness from
//! a ChaCha8 stream seeded with [`run_seed`]`(seed, i)`, so results do not
//! depend on thread count or scheduling.

use std::collections::BTreeMap;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::caps::Cap;
use crate::error::{Error, Result};
use crate::geometry::{Geometry, PointId};
use crate::pointset::{self, PointSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Pick uniformly among the current extension points.
    UniformRandom,
    /// Pick the extension point whose addition removes the most other
    /// extension points; ties go to the lowest index.
    MaxExtenderElimination,
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" | "uniform_random" => Ok(Strategy::UniformRandom),
            "elim" | "max_extender_elimination" => Ok(Strategy::MaxExtenderElimination),
            other => Err(Error::Config(format!("unknown strategy {other:?} (uniform|elim)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchConfig {
    pub seed: u64,
    pub restarts: usize,
    pub strategy: Strategy,
    pub start: Option<Vec<PointId>>,
}

impl SearchConfig {
    pub fn new(seed: u64, restarts: usize, strategy: Strategy) -> Self {
        Self { seed, restarts, strategy, start: None }
    }

    fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::Config("restarts must be at least 1".into()));
        }
        Ok(())
    }
}

/// SplitMix64 finalizer; a bijection on u64.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of restart `run`: mix64(seed ^ mix64(run)).
pub fn run_seed(seed: u64, run: u64) -> u64 {
    mix64(seed ^ mix64(run))
}

/// A cap under construction together with its extension points.
struct Growth<'g> {
    g: &'g Geometry,
    cap: PointSet,
    /// On a secant or on the cap.
    blocked: Vec<bool>,
    extenders: Vec<PointId>,
}

impl<'g> Growth<'g> {
    fn new(g: &'g Geometry, start: PointSet) -> Self {
        let blocked = pointset::secant_cover(g, &start);
        let extenders = g.all_points().filter(|&p| !blocked[p as usize]).collect();
        Self { g, cap: start, blocked, extenders }
    }

    fn add(&mut self, x: PointId) {
        debug_assert!(!self.blocked[x as usize]);
        for &y in self.cap.members() {
            let blocked = &mut self.blocked;
            self.g.for_each_on_line(x, y, |p| blocked[p as usize] = true);
        }
        self.blocked[x as usize] = true;
        self.cap.insert(x);
        let blocked = &self.blocked;
        self.extenders.retain(|&p| !blocked[p as usize]);
    }

    /// Extension points lost if `x` were added (not counting `x`). Lines
    /// from `x` to distinct members meet only in `x`, so no double counting.
    fn elimination_count(&self, x: PointId, is_ext: &[bool]) -> usize {
        let mut n = 0;
        for &y in self.cap.members() {
            self.g.for_each_on_line(x, y, |p| {
                n += (p != x && is_ext[p as usize]) as usize;
            });
        }
        n
    }

    fn pick_eliminating(&self) -> PointId {
        let mut is_ext = vec![false; self.g.num_points()];
        for &p in &self.extenders {
            is_ext[p as usize] = true;
        }
        let mut best = (0usize, self.extenders[0]);
        for &x in &self.extenders {
            let c = self.elimination_count(x, &is_ext);
            // extenders are ascending, so strict > keeps the lowest index on ties
            if c > best.0 {
                best = (c, x);
            }
        }
        best.1
    }
}

/// Grows `start` (a cap) to a complete cap. Deterministic for a given seed.
///
/// With the elimination strategy and an empty start, the first point is
/// drawn from the seed; every later choice is deterministic.
pub fn greedy_complete(
    g: &Geometry,
    start: &Cap,
    strategy: Strategy,
    seed: u64,
) -> Result<Cap> {
    if g.n() != 3 {
        return Err(Error::Dimension(g.n()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut growth = Growth::new(g, start.points().clone());
    while !growth.extenders.is_empty() {
        let x = match strategy {
            Strategy::UniformRandom => {
                growth.extenders[rng.random_range(0..growth.extenders.len())]
            }
            Strategy::MaxExtenderElimination if growth.cap.is_empty() => {
                growth.extenders[rng.random_range(0..growth.extenders.len())]
            }
            Strategy::MaxExtenderElimination => growth.pick_eliminating(),
        };
        growth.add(x);
    }
    // Search never certifies its own output.
    let cap = Cap::new(g, growth.cap.members().iter().copied())?;
    if !cap.is_complete(g) {
        return Err(Error::Internal("greedy search stopped on an incomplete cap".into()));
    }
    Ok(cap)
}

/// A uniformly grown arc or cap (PG(2, q) or PG(3, q)) with `target` points,
/// or fewer if it becomes complete first.
pub fn random_partial(g: &Geometry, target: usize, rng: &mut impl Rng) -> PointSet {
    let mut growth = Growth::new(g, PointSet::empty(g));
    while growth.cap.len() < target && !growth.extenders.is_empty() {
        let x = growth.extenders[rng.random_range(0..growth.extenders.len())];
        growth.add(x);
    }
    growth.cap
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Spectrum {
    pub q: u32,
    /// size -> number of runs (or caps) of that size
    pub counts: BTreeMap<usize, usize>,
    /// size -> the first cap found with that size
    pub witnesses: BTreeMap<usize, Vec<PointId>>,
    /// Sizes in run order; empty for exhaustive spectra.
    pub run_sizes: Vec<usize>,
    pub config: Option<SearchConfig>,
}

impl Spectrum {
    pub fn sizes(&self) -> Vec<usize> {
        self.counts.keys().copied().collect()
    }

    pub fn max_size(&self) -> Option<usize> {
        self.counts.keys().next_back().copied()
    }

    fn record(&mut self, cap: &[PointId]) {
        let k = cap.len();
        *self.counts.entry(k).or_insert(0) += 1;
        self.witnesses.entry(k).or_insert_with(|| cap.to_vec());
    }
}

/// `cfg.restarts` independent greedy completions; the merge is by run index.
pub fn spectrum_sample(g: &Geometry, cfg: &SearchConfig) -> Result<Spectrum> {
    cfg.validate()?;
    let start = match &cfg.start {
        Some(pts) => Cap::new(g, pts.iter().copied())?,
        None => Cap::empty(g)?,
    };
    let caps = (0..cfg.restarts as u64)
        .into_par_iter()
        .map(|i| greedy_complete(g, &start, cfg.strategy, run_seed(cfg.seed, i)))
        .collect::<Result<Vec<Cap>>>()?;
    let mut spectrum = Spectrum {
        q: g.q(),
        counts: BTreeMap::new(),
        witnesses: BTreeMap::new(),
        run_sizes: Vec::with_capacity(caps.len()),
        config: Some(cfg.clone()),
    };
    for cap in &caps {
        spectrum.record(cap.members());
        spectrum.run_sizes.push(cap.k());
    }
    Ok(spectrum)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExhaustiveResult {
    pub spectrum: Spectrum,
    /// Every complete cap containing the base, each sorted, in DFS order.
    pub complete_caps: Vec<Vec<PointId>>,
    /// Number of caps (complete or not) visited, base included.
    pub caps_visited: u64,
}

/// All complete caps of PG(3, 2).
pub fn exhaustive_complete_caps(g: &Geometry) -> Result<ExhaustiveResult> {
    exhaustive_complete_supersets(g, &Cap::empty(g)?)
}

/// All complete caps of PG(3, 2) containing `base`. Points are added in
/// increasing index order, so each superset is visited once.
pub fn exhaustive_complete_supersets(g: &Geometry, base: &Cap) -> Result<ExhaustiveResult> {
    if g.n() != 3 || g.q() != 2 {
        return Err(Error::Capacity {
            n: g.n(),
            q: g.q(),
            reason: "exhaustive enumeration is limited to PG(3, 2)",
        });
    }
    let mut out = ExhaustiveResult {
        spectrum: Spectrum {
            q: g.q(),
            counts: BTreeMap::new(),
            witnesses: BTreeMap::new(),
            run_sizes: Vec::new(),
            config: None,
        },
        complete_caps: Vec::new(),
        caps_visited: 0,
    };
    let mut current = base.points().clone();
    dfs(g, &mut current, 0, &mut out);
    Ok(out)
}

fn dfs(g: &Geometry, current: &mut PointSet, min_index: PointId, out: &mut ExhaustiveResult) {
    out.caps_visited += 1;
    let ext = pointset::extenders(g, current);
    if ext.is_empty() {
        out.spectrum.record(current.members());
        out.complete_caps.push(current.members().to_vec());
        return;
    }
    for x in ext.into_iter().filter(|&x| x >= min_index) {
        current.insert(x);
        dfs(g, current, x + 1, out);
        current.remove(x);
    }
}
