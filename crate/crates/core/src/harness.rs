//! Configuration, report schema and the end-to-end verification pipeline.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arcs::Arc;
use crate::bounds::{self, evaluate_bounds};
use crate::caps::{self, Cap, ScanMode};
use crate::constructions;
use crate::error::{Error, Result};
use crate::geometry::{point_count, Geometry, PointId};
use crate::gf2e::{FieldTable, MAX_DEGREE};
use crate::pointset::PointSet;
use crate::search::{self, run_seed, SearchConfig, Spectrum, Strategy};

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_QS: [u64; 3] = [2, 4, 8];
/// Largest q the pipeline builds PG(3, q) for.
pub const MAX_VERIFY_Q: u64 = 32;

/// Flat key = value configuration. Every key is optional; command-line flags
/// take precedence.
#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub q: Option<Vec<u64>>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub format: Option<String>,
    pub out: Option<String>,
    /// Overrides the restart count of every search step.
    pub restarts: Option<usize>,
    /// External points sampled when q is too large for a full scan.
    pub samples: Option<usize>,
    /// Random caps / arcs per q in the counting-identity step.
    pub random_sets: Option<usize>,
    /// Random arcs per q in the completion step.
    pub completion_trials: Option<usize>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Fields set in `over` win.
    pub fn overlay(self, over: Config) -> Config {
        Config {
            q: over.q.or(self.q),
            seed: over.seed.or(self.seed),
            threads: over.threads.or(self.threads),
            format: over.format.or(self.format),
            out: over.out.or(self.out),
            restarts: over.restarts.or(self.restarts),
            samples: over.samples.or(self.samples),
            random_sets: over.random_sets.or(self.random_sets),
            completion_trials: over.completion_trials.or(self.completion_trials),
        }
    }
}

/// A validated configuration for [`run_verify`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifySettings {
    pub qs: Vec<u64>,
    pub seed: u64,
    pub restarts: Option<usize>,
    pub samples: usize,
    pub random_sets: usize,
    pub completion_trials: usize,
}

impl VerifySettings {
    pub fn from_config(cfg: &Config) -> Result<Self> {
        let mut qs = cfg.q.clone().unwrap_or_else(|| DEFAULT_QS.to_vec());
        if qs.is_empty() {
            return Err(Error::Config("q list is empty".into()));
        }
        for &q in &qs {
            if q < 2 || !q.is_power_of_two() {
                return Err(Error::Config(format!("q = {q} is not a power of 2 (q >= 2)")));
            }
            if q > MAX_VERIFY_Q {
                return Err(Error::Config(format!("q = {q} exceeds {MAX_VERIFY_Q}")));
            }
        }
        qs.sort_unstable();
        qs.dedup();
        if cfg.restarts == Some(0) {
            return Err(Error::Config("restarts must be at least 1".into()));
        }
        Ok(Self {
            qs,
            seed: cfg.seed.unwrap_or(DEFAULT_SEED),
            restarts: cfg.restarts,
            samples: cfg.samples.unwrap_or(caps::DEFAULT_SAMPLES),
            random_sets: cfg.random_sets.unwrap_or(100),
            completion_trials: cfg.completion_trials.unwrap_or(50),
        })
    }

    fn has(&self, q: u64) -> bool {
        self.qs.contains(&q)
    }

    fn restarts_or(&self, default: usize) -> usize {
        self.restarts.unwrap_or(default)
    }

    fn scan(&self, q: u32) -> ScanMode {
        match ScanMode::default_for(q, self.seed) {
            ScanMode::Sampled { seed, .. } => ScanMode::Sampled { samples: self.samples, seed },
            s => s,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Severity {
    Required,
    Expected,
    Info,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// Nothing to check under the configured q values.
    Skip,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub id: String,
    /// The mathematical statement the check exercises.
    pub claim: String,
    pub severity: Severity,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    pub runtime_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: Vec<String>,
    pub version: String,
    pub seed: u64,
    pub qs: Vec<u64>,
    /// q -> modulus bitmask of GF(q)
    pub moduli: BTreeMap<u64, u32>,
    pub threads: usize,
    pub entries: Vec<ReportEntry>,
    pub required_pass: bool,
}

impl RunManifest {
    pub fn exit_code(&self) -> i32 {
        if self.required_pass {
            0
        } else {
            1
        }
    }

    /// The entries with runtimes zeroed, for reproducibility comparisons.
    pub fn verdicts(&self) -> Vec<ReportEntry> {
        self.entries.iter().map(|e| ReportEntry { runtime_ms: 0, ..e.clone() }).collect()
    }
}

struct Outcome {
    verdict: Verdict,
    witness: Option<Value>,
}

impl Outcome {
    fn of(pass: bool, witness: Value) -> Self {
        Self { verdict: if pass { Verdict::Pass } else { Verdict::Fail }, witness: Some(witness) }
    }

    fn skip() -> Self {
        Self { verdict: Verdict::Skip, witness: None }
    }
}

struct Check {
    id: &'static str,
    claim: &'static str,
    severity: Severity,
    run: fn(&VerifySettings) -> Result<Outcome>,
}

fn pg(n: usize, q: u64) -> Result<Geometry> {
    Geometry::build_pg(n, q)
}

fn field_self_test(_: &VerifySettings) -> Result<Outcome> {
    let mut bad = Vec::new();
    for h in 1..=MAX_DEGREE {
        let f = FieldTable::new(h)?;
        let q = f.q();
        let units: BTreeSet<u8> = (0..q - 1).map(|i| f.exp(i)).collect();
        let ok_cycle = units.len() == (q - 1) as usize && !units.contains(&0);
        let ok_inv = f.elements().skip(1).all(|a| f.inv(a).map(|b| f.mul(a, b) == 1).unwrap_or(false));
        let ok_frob = f.elements().all(|a| f.square(f.sqrt(a)) == a);
        if !(ok_cycle && ok_inv && ok_frob) {
            bad.push(h);
        }
    }
    Ok(Outcome::of(bad.is_empty(), json!({ "failed_degrees": bad })))
}

fn geometry_counts(s: &VerifySettings) -> Result<Outcome> {
    let mut rows = Vec::new();
    let mut pass = true;
    for &q in &s.qs {
        let plane = pg(2, q)?;
        let space = pg(3, q)?;
        let mut row = json!({
            "q": q,
            "plane_points": plane.num_points(),
            "space_points": space.num_points(),
            "space_planes": space.num_planes(),
        });
        pass &= plane.num_points() as u64 == point_count(2, q)
            && space.num_points() as u64 == point_count(3, q)
            && space.num_planes() == space.num_points();
        if q <= 16 {
            let lines = space.all_lines().len() as u64;
            row["space_lines"] = json!(lines);
            pass &= lines == (q * q + 1) * (q * q + q + 1);
        }
        match q {
            4 => pass &= space.num_points() == 85 && space.num_planes() == 85 && row["space_lines"] == 357,
            8 => pass &= space.num_points() == 585,
            _ => {}
        }
        rows.push(row);
    }
    Ok(Outcome::of(pass, json!(rows)))
}

fn ovoid_qs(s: &VerifySettings) -> Vec<u64> {
    s.qs.iter().copied().filter(|&q| q >= 4).collect()
}

fn ovoid_construction(s: &VerifySettings) -> Result<Outcome> {
    let qs = ovoid_qs(s);
    if qs.is_empty() {
        return Ok(Outcome::skip());
    }
    let mut rows = Vec::new();
    let mut pass = true;
    for q in qs {
        let g = pg(3, q)?;
        let (cap, spec) = constructions::elliptic_quadric(&g)?;
        let is_cap = caps::is_cap(&g, cap.points()).is_cap;
        let complete = cap.is_complete(&g);
        pass &= cap.k() as u64 == q * q + 1 && is_cap && complete;
        rows.push(json!({
            "q": q, "k": cap.k(), "is_cap": is_cap, "complete": complete,
            "parameter": spec.irreducible_parameter,
        }));
    }
    Ok(Outcome::of(pass, json!(rows)))
}

fn plane_sections(s: &VerifySettings) -> Result<Outcome> {
    let qs = ovoid_qs(s);
    if qs.is_empty() {
        return Ok(Outcome::skip());
    }
    let mut rows = Vec::new();
    let mut pass = true;
    for q in qs {
        let g = pg(3, q)?;
        let (cap, _) = constructions::elliptic_quadric(&g)?;
        let check = cap.check_plane_sections(&g)?;
        pass &= check.pass && check.min_margin == 0;
        rows.push(json!({ "q": q, "check": check, "profile": cap.section_profile(&g) }));
    }
    Ok(Outcome::of(pass, json!(rows)))
}

fn external_tangents(s: &VerifySettings) -> Result<Outcome> {
    let mut rows = Vec::new();
    let mut pass = true;
    for &q in &s.qs {
        let g = pg(3, q)?;
        let scan = s.scan(g.q());
        let mut named: Vec<(String, Cap)> = vec![("elliptic-quadric".into(), constructions::elliptic_quadric(&g)?.0)];
        if q == 2 {
            let (_, binary) = constructions::binary_affine_cap(3)?.materialized.expect("n = 3 is built");
            named.push(("binary-affine".into(), binary));
        }
        for (name, cap) in &named {
            let c = cap.check_external_tangents(&g, scan)?;
            pass &= c.pass;
            rows.push(json!({ "q": q, "source": name, "k": cap.k(), "check": c }));
        }
        if q <= 8 {
            let restarts = s.restarts_or(100);
            let empty = Cap::empty(&g)?;
            let results = (0..restarts as u64)
                .into_par_iter()
                .map(|i| {
                    let cap = search::greedy_complete(&g, &empty, Strategy::UniformRandom, run_seed(s.seed, i))?;
                    Ok((cap.k(), cap.check_external_tangents(&g, scan)?))
                })
                .collect::<Result<Vec<_>>>()?;
            let failures: Vec<_> = results.iter().enumerate().filter(|(_, (_, c))| !c.pass).collect();
            pass &= failures.is_empty();
            let worst = results.iter().map(|(k, c)| (c.max_sigma1 as i64 - c.t, *k)).max();
            rows.push(json!({
                "q": q, "source": "search", "restarts": restarts,
                "violations": failures.iter().map(|(i, (k, c))| json!({"run": i, "k": k, "check": c})).collect::<Vec<_>>(),
                "max_sigma1_minus_t": worst.map(|w| w.0),
            }));
        }
    }
    Ok(Outcome::of(pass, json!(rows)))
}

fn exhaustive_pg32(s: &VerifySettings) -> Result<Outcome> {
    if !s.has(2) {
        return Ok(Outcome::skip());
    }
    let g = pg(3, 2)?;
    let res = search::exhaustive_complete_caps(&g)?;
    let sizes = res.spectrum.sizes();
    let pass = sizes == [5, 8] && res.spectrum.counts.get(&8) == Some(&15);
    Ok(Outcome::of(pass, json!({ "counts": res.spectrum.counts, "caps_visited": res.caps_visited })))
}

fn spectrum(s: &VerifySettings, q: u64, default_restarts: usize) -> Result<Spectrum> {
    let g = pg(3, q)?;
    let cfg = SearchConfig::new(s.seed, s.restarts_or(default_restarts), Strategy::UniformRandom);
    search::spectrum_sample(&g, &cfg)
}

fn spectrum_witness(sp: &Spectrum) -> Result<Value> {
    Ok(json!({
        "restarts": sp.run_sizes.len(),
        "counts": sp.counts,
        "annotations": annotate_sizes(sp.q as u64, sp)?,
    }))
}

fn sampled_pg32(s: &VerifySettings) -> Result<Outcome> {
    if !s.has(2) {
        return Ok(Outcome::skip());
    }
    let sp = spectrum(s, 2, 200)?;
    Ok(Outcome::of(sp.sizes() == [5, 8], spectrum_witness(&sp)?))
}

fn spectrum_pg34(s: &VerifySettings) -> Result<Outcome> {
    if !s.has(4) {
        return Ok(Outcome::skip());
    }
    let sp = spectrum(s, 4, 1000)?;
    let pass = !sp.counts.contains_key(&15)
        && !sp.counts.contains_key(&16)
        && sp.max_size().is_some_and(|m| m <= 17);
    Ok(Outcome::of(pass, spectrum_witness(&sp)?))
}

fn spectrum_pg34_max(s: &VerifySettings) -> Result<Outcome> {
    if !s.has(4) {
        return Ok(Outcome::skip());
    }
    let sp = spectrum(s, 4, 1000)?;
    Ok(Outcome::of(sp.max_size() == Some(17), json!({ "max": sp.max_size() })))
}

fn spectrum_pg38(s: &VerifySettings) -> Result<Outcome> {
    if !s.has(8) {
        return Ok(Outcome::skip());
    }
    let sp = spectrum(s, 8, 300)?;
    let pass = sp.counts.keys().all(|&k| !(60..=64).contains(&k) && k <= 65);
    Ok(Outcome::of(pass, spectrum_witness(&sp)?))
}

fn bounds_3_8(s: &VerifySettings) -> Result<Outcome> {
    let t = evaluate_bounds(3, 8)?;
    let sec = &t.second_largest;
    let cap = |name: &str| sec.get(name).map(|b| b.integer_cap);
    let pass = cap("chao") == Some(61)
        && cap("linear-three") == Some(59)
        && cap("sqrt5") == Some(59)
        && sec.minimum == Some(59)
        && sec.minimum_provenance == ["linear-three", "sqrt5"];
    let mut minima = BTreeMap::new();
    for &q in &s.qs {
        let t = evaluate_bounds(3, q)?;
        minima.insert(q, json!({ "largest": t.largest.minimum, "second_largest": t.second_largest.minimum }));
    }
    Ok(Outcome::of(
        pass,
        json!({
            "chao": cap("chao"), "linear-three": cap("linear-three"), "sqrt5": cap("sqrt5"),
            "minimum": sec.minimum, "provenance": sec.minimum_provenance, "minima_by_q": minima,
        }),
    ))
}

fn ss_plumbing(_: &VerifySettings) -> Result<Outcome> {
    let q = 2048;
    // ss_interval itself errors if the a = 3 endpoint differs from sqrt-q.
    let iv = bounds::ss_interval(q, 3)?;
    let sqrt_q = bounds::BoundId::SqrtQ.exact_value(3, q);
    let sqrt5 = bounds::BoundId::Sqrt5.exact_value(3, q);
    let a_max = bounds::largest_admissible_a(q);
    let below = sqrt_q.cmp_exact(&sqrt5) == std::cmp::Ordering::Less;
    let rel = (iv.lo - sqrt_q.to_f64()).abs() / sqrt_q.to_f64();
    let pass = iv.lo_surd == sqrt_q && a_max == Some(6) && below && rel < 1e-6;
    Ok(Outcome::of(
        pass,
        json!({ "lo_exact": iv.lo_exact, "a_max": a_max, "a_ceiling": iv.a_ceiling, "sqrt_q_below_sqrt5": below }),
    ))
}

fn consistency(_: &VerifySettings) -> Result<Outcome> {
    let rows = bounds::consistency_matrix()?;
    let failed: Vec<_> = rows.iter().filter(|r| !r.pass).collect();
    Ok(Outcome::of(failed.is_empty(), json!({ "rows": rows.len(), "failed": failed })))
}

/// Random caps with a uniformly chosen target size in 1..=q^2+1.
pub fn random_caps(g: &Geometry, count: usize, seed: u64) -> Vec<PointSet> {
    let max = (g.q() * g.q() + 1) as usize;
    (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(run_seed(seed, i));
            let target = rng.random_range(1..=max);
            search::random_partial(g, target, &mut rng)
        })
        .collect()
}

/// Random plane arcs with a uniformly chosen target size in 1..=q+2.
pub fn random_arcs(g: &Geometry, count: usize, seed: u64) -> Vec<PointSet> {
    let max = g.q() as usize + 2;
    (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(run_seed(seed, i));
            let target = rng.random_range(1..=max);
            search::random_partial(g, target, &mut rng)
        })
        .collect()
}

/// Tangent identity at every member plus the three profile identities.
pub fn cap_identities(g: &Geometry, set: &PointSet) -> std::result::Result<(), String> {
    let cap = Cap::new(g, set.members().iter().copied()).map_err(|e| e.to_string())?;
    for &p in cap.members() {
        cap.tangent_count_at(g, p).map_err(|e| e.to_string())?;
    }
    caps::profile_identities(g, cap.k(), &cap.section_profile(g))
}

fn counting_identities(s: &VerifySettings) -> Result<Outcome> {
    let cap_qs: Vec<u64> = s.qs.iter().copied().filter(|&q| q <= 8).collect();
    let arc_qs: Vec<u64> = s.qs.iter().copied().filter(|&q| q == 4 || q == 8).collect();
    if cap_qs.is_empty() && arc_qs.is_empty() {
        return Ok(Outcome::skip());
    }
    let mut failures = Vec::new();
    let mut tested = BTreeMap::new();
    for &q in &cap_qs {
        let g = pg(3, q)?;
        let sets = random_caps(&g, s.random_sets, s.seed);
        for (i, set) in sets.iter().enumerate() {
            if let Err(e) = cap_identities(&g, set) {
                failures.push(json!({ "q": q, "cap": i, "points": set.members(), "error": e }));
            }
        }
        tested.insert(format!("caps_q{q}"), sets.len());
    }
    for &q in &arc_qs {
        let g = pg(2, q)?;
        let sets = random_arcs(&g, s.random_sets, s.seed);
        for (i, set) in sets.iter().enumerate() {
            let arc = Arc::new(&g, set.members().iter().copied())?;
            if !arc.tangent_parity_ok(&g) {
                failures.push(json!({ "q": q, "arc": i, "points": arc.members() }));
            }
        }
        tested.insert(format!("arcs_q{q}"), sets.len());
    }
    Ok(Outcome::of(failures.is_empty(), json!({ "tested": tested, "failures": failures })))
}

/// Every hyperoval of PG(2, q) containing `arc`, by exhaustive extension.
pub fn hyperoval_supersets(g: &Geometry, arc: &PointSet) -> Vec<Vec<PointId>> {
    fn go(g: &Geometry, cur: &mut PointSet, min_next: PointId, out: &mut Vec<Vec<PointId>>) {
        if cur.len() == g.q() as usize + 2 {
            out.push(cur.members().to_vec());
            return;
        }
        for x in crate::pointset::extenders(g, cur) {
            if x >= min_next {
                cur.insert(x);
                go(g, cur, x + 1, out);
                cur.remove(x);
            }
        }
    }
    let mut out = Vec::new();
    go(g, &mut arc.clone(), 0, &mut out);
    out
}

fn hyperoval_completion(s: &VerifySettings) -> Result<Outcome> {
    let cases: Vec<(u64, usize)> = [(4u64, 4usize), (8, 7)].into_iter().filter(|&(q, _)| s.has(q)).collect();
    if cases.is_empty() {
        return Ok(Outcome::skip());
    }
    let mut failures = Vec::new();
    let mut tested = BTreeMap::new();
    for (q, k) in cases {
        let g = pg(2, q)?;
        let mut done = 0;
        let mut i = 0u64;
        while done < s.completion_trials {
            let mut rng = ChaCha8Rng::seed_from_u64(run_seed(s.seed, i));
            i += 1;
            let set = search::random_partial(&g, k, &mut rng);
            if set.len() < k {
                continue;
            }
            done += 1;
            let arc = Arc::new(&g, set.members().iter().copied())?;
            let result = arc.complete_to_hyperoval(&g);
            let ok = match &result {
                Ok(h) => {
                    let zero = g.all_points().all(|x| h.tangents_through(&g, x) == 0);
                    let unique = q != 4 || hyperoval_supersets(&g, &set) == vec![h.members().to_vec()];
                    zero && unique && h.k() as u64 == q + 2
                }
                Err(_) => false,
            };
            if !ok {
                failures.push(json!({
                    "q": q, "arc": set.members(),
                    "error": result.err().map(|e| e.to_string()),
                }));
            }
        }
        tested.insert(format!("q{q}"), done);
    }
    Ok(Outcome::of(failures.is_empty(), json!({ "tested": tested, "failures": failures })))
}

const CHECKS: [Check; 15] = [
    Check { id: "c00-field-self-test", claim: "GF(2^h) tables for h <= 7 form fields", severity: Severity::Required, run: field_self_test },
    Check { id: "c01-geometry-counts", claim: "PG(n, q) has (q^(n+1) - 1)/(q - 1) points; PG(3, 4) has 85 points, 85 planes, 357 lines; PG(3, 8) has 585 points", severity: Severity::Required, run: geometry_counts },
    Check { id: "c02-ovoid", claim: "the elliptic quadric is a complete (q^2 + 1)-cap", severity: Severity::Required, run: ovoid_construction },
    Check { id: "c03-plane-sections", claim: "t(t - 1) >= q(q + 2 - x)x for every plane, with equality for the ovoid", severity: Severity::Required, run: plane_sections },
    Check { id: "c04-external-tangents", claim: "sigma_1(Q) <= t at every point off a complete cap", severity: Severity::Required, run: external_tangents },
    Check { id: "c05-exhaustive-pg32", claim: "complete caps of PG(3, 2) have sizes exactly 5 and 8", severity: Severity::Required, run: exhaustive_pg32 },
    Check { id: "c05-sampled-pg32", claim: "random completion in PG(3, 2) reaches both 5 and 8", severity: Severity::Expected, run: sampled_pg32 },
    Check { id: "c06-spectrum-pg34", claim: "no complete cap of PG(3, 4) has size 15 or 16 or exceeds 17", severity: Severity::Required, run: spectrum_pg34 },
    Check { id: "c06-spectrum-pg34-max", claim: "random completion in PG(3, 4) reaches 17", severity: Severity::Expected, run: spectrum_pg34_max },
    Check { id: "c07-spectrum-pg38", claim: "no complete cap of PG(3, 8) has size in 60..64 or exceeds 65", severity: Severity::Required, run: spectrum_pg38 },
    Check { id: "c08-bounds-3-8", claim: "second-largest complete cap of PG(3, 8) is at most 59", severity: Severity::Required, run: bounds_3_8 },
    Check { id: "c09-consistency-matrix", claim: "bounds are mutually consistent for q = 8..2^16", severity: Severity::Required, run: consistency },
    Check { id: "c09-interval-q2048", claim: "at q = 2048 the a = 3 interval starts at q^2 - 2q + 3 sqrt(q) + 2, a <= 6, and that bound is below the sqrt(5) bound", severity: Severity::Required, run: ss_plumbing },
    Check { id: "c10-counting-identities", claim: "tangent count, section-profile identities and tangent parity hold for random caps and arcs", severity: Severity::Required, run: counting_identities },
    Check { id: "c11-hyperoval-completion", claim: "an arc with more than q - sqrt(q) + 1 points lies on a unique hyperoval", severity: Severity::Required, run: hyperoval_completion },
];

/// Runs every check in id order. Errors inside a check become a failed
/// entry; the pipeline itself only fails on invalid settings.
pub fn run_verify(settings: &VerifySettings, command: Vec<String>) -> Result<RunManifest> {
    let start = Instant::now();
    let mut entries = Vec::new();
    for check in &CHECKS {
        let t0 = Instant::now();
        let outcome = (check.run)(settings).unwrap_or_else(|e| Outcome {
            verdict: Verdict::Fail,
            witness: Some(json!({ "error": e.to_string() })),
        });
        entries.push(ReportEntry {
            id: check.id.into(),
            claim: check.claim.into(),
            severity: check.severity,
            verdict: outcome.verdict,
            witness: outcome.witness,
            runtime_ms: t0.elapsed().as_millis() as u64,
        });
    }
    entries.push(ReportEntry {
        id: "c12-runtime".into(),
        claim: "total wall-clock time".into(),
        severity: Severity::Info,
        verdict: Verdict::Pass,
        witness: None,
        runtime_ms: start.elapsed().as_millis() as u64,
    });
    let required_pass = entries
        .iter()
        .filter(|e| e.severity == Severity::Required)
        .all(|e| e.verdict != Verdict::Fail);
    let mut moduli = BTreeMap::new();
    for &q in &settings.qs {
        moduli.insert(q, FieldTable::with_order(q)?.modulus());
    }
    Ok(RunManifest {
        command,
        version: env!("CARGO_PKG_VERSION").into(),
        seed: settings.seed,
        qs: settings.qs.clone(),
        moduli,
        threads: rayon::current_num_threads(),
        entries,
        required_pass,
    })
}

/// Labels each size of a PG(3, q) spectrum against the catalog: "largest"
/// at the bound on m2, "excluded" strictly between the bounds on m2' and
/// m2, "above-largest" beyond m2, and "unconstrained" at or below m2'.
pub fn annotate_sizes(q: u64, spectrum: &Spectrum) -> Result<BTreeMap<usize, &'static str>> {
    let t = evaluate_bounds(3, q)?;
    let largest = t.largest.minimum.unwrap_or(i128::MAX);
    let second = t.second_largest.minimum.unwrap_or(largest - 1);
    Ok(spectrum
        .counts
        .keys()
        .map(|&k| {
            let ki = k as i128;
            let label = if ki > largest {
                "above-largest"
            } else if ki == largest {
                "largest"
            } else if ki > second {
                "excluded"
            } else {
                "unconstrained"
            };
            (k, label)
        })
        .collect())
}

/// Points given as JSON: a list of indices or a list of coordinate vectors.
/// `source` is either the JSON text itself or a path to a file holding it.
pub fn parse_points(g: &Geometry, source: &str) -> Result<Vec<PointId>> {
    let text = if Path::new(source).is_file() {
        std::fs::read_to_string(source).map_err(|e| Error::Config(format!("{source}: {e}")))?
    } else {
        source.to_string()
    };
    let value: Value = serde_json::from_str(&text).map_err(|e| Error::Config(format!("points: {e}")))?;
    let items = match &value {
        Value::Array(items) => items,
        Value::Object(map) => match map.get("points").or_else(|| map.get("members")) {
            Some(Value::Array(items)) => items,
            _ => return Err(Error::Config("points object needs a \"points\" list".into())),
        },
        _ => return Err(Error::Config("points must be a JSON list".into())),
    };
    items
        .iter()
        .map(|item| match item {
            Value::Number(n) => {
                let p = n.as_u64().and_then(|p| PointId::try_from(p).ok()).ok_or_else(|| Error::Config(format!("bad point index {n}")))?;
                g.check_point(p)?;
                Ok(p)
            }
            Value::Array(cs) => {
                let coords = cs
                    .iter()
                    .map(|c| c.as_u64().filter(|&c| c < g.q() as u64).map(|c| c as u8))
                    .collect::<Option<Vec<u8>>>()
                    .ok_or_else(|| Error::Config(format!("bad coordinates {item}")))?;
                g.index_of(&coords)
            }
            other => Err(Error::Config(format!("bad point {other}"))),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parsing() {
        let cfg = Config::parse("q = [4, 2]\nseed = 7\nrestarts = 5\n").unwrap();
        assert_eq!(cfg.q, Some(vec![4, 2]));
        let s = VerifySettings::from_config(&cfg).unwrap();
        assert_eq!(s.qs, vec![2, 4]);
        assert_eq!(s.seed, 7);
        assert!(Config::parse("unknown = 1").is_err());
        assert!(Config::parse("[table]\nq = [2]").is_err());
        let six = Config { q: Some(vec![6]), ..Config::default() };
        assert!(matches!(VerifySettings::from_config(&six), Err(Error::Config(_))));
    }

    #[test]
    fn overlay_prefers_flags() {
        let file = Config { seed: Some(3), restarts: Some(9), ..Config::default() };
        let flags = Config { seed: Some(5), ..Config::default() };
        let merged = file.overlay(flags);
        assert_eq!((merged.seed, merged.restarts), (Some(5), Some(9)));
    }

    #[test]
    fn point_parsing() {
        let g = Geometry::build_pg(2, 4).unwrap();
        assert_eq!(parse_points(&g, "[0, 1, 5]").unwrap(), vec![0, 1, 5]);
        let by_coords = parse_points(&g, "[[1,0,0],[0,1,0],[0,0,1]]").unwrap();
        assert_eq!(by_coords.len(), 3);
        assert!(parse_points(&g, "[1000]").is_err());
        assert!(parse_points(&g, "[[1,9,0]]").is_err());
        assert!(parse_points(&g, "{\"x\": 1}").is_err());
    }

    #[test]
    fn small_pipeline_is_reproducible() {
        let cfg = Config { q: Some(vec![2]), restarts: Some(20), random_sets: Some(10), ..Config::default() };
        let s = VerifySettings::from_config(&cfg).unwrap();
        let a = run_verify(&s, vec![]).unwrap();
        let b = run_verify(&s, vec![]).unwrap();
        assert_eq!(a.exit_code(), 0);
        assert_eq!(a.verdicts(), b.verdicts());
        let ids: Vec<&str> = a.entries.iter().map(|e| e.id.as_str()).collect();
        let mut sorted = ids.clone();
        sorted.sort_unstable();
        assert_eq!(ids, sorted);
        let skipped = a.entries.iter().find(|e| e.id == "c02-ovoid").unwrap();
        assert_eq!(skipped.verdict, Verdict::Skip);
    }

    #[test]
    fn annotations() {
        let g = Geometry::build_pg(3, 2).unwrap();
        let res = search::exhaustive_complete_caps(&g).unwrap();
        let labels = annotate_sizes(2, &res.spectrum).unwrap();
        assert_eq!(labels[&8], "largest");
        assert_eq!(labels[&5], "unconstrained");
    }

    #[test]
    fn superset_oracle_finds_the_conic_hyperoval() {
        let g = Geometry::build_pg(2, 4).unwrap();
        let (hyperoval, _) = constructions::hyperoval_conic(&g).unwrap();
        let four = PointSet::new(&g, hyperoval.members()[..4].iter().copied()).unwrap();
        assert_eq!(hyperoval_supersets(&g, &four), vec![hyperoval.members().to_vec()]);
    }
}
