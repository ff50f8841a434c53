//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pgcaps::arcs::Arc;
use pgcaps::bounds::{self, evaluate_bounds, BoundId};
use pgcaps::caps::{self, Cap, ScanMode};
use pgcaps::constructions;
use pgcaps::geometry::{Geometry, PointId};
use pgcaps::harness;
use pgcaps::search::{self, run_seed, SearchConfig, Strategy};

use common::*;

const SEED: u64 = harness::DEFAULT_SEED;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn pg(n: usize, q: u64) -> Geometry {
    Geometry::build_pg(n, q).unwrap()
}

fn geometry_counts() -> Outcome {
    let g = pg(3, 4);
    let lines = g.all_lines().len();
    ensure(g.num_points() == 85, format!("PG(3,4) points {}", g.num_points()))?;
    ensure(g.num_planes() == 85, format!("PG(3,4) planes {}", g.num_planes()))?;
    ensure(lines == 357, format!("PG(3,4) lines {lines}"))?;
    let g8 = pg(3, 8);
    ensure(g8.num_points() == 585, format!("PG(3,8) points {}", g8.num_points()))?;
    Ok("85 / 85 / 357, 585".into())
}

fn ovoid_construction() -> Outcome {
    let mut sizes = Vec::new();
    for q in [4u64, 8] {
        let g = pg(3, q);
        let (cap, _) = constructions::elliptic_quadric(&g).unwrap();
        ensure(cap.k() as u64 == q * q + 1, format!("q={q}: k = {}", cap.k()))?;
        ensure(caps::is_cap(&g, cap.points()).is_cap && cap.is_complete(&g), format!("q={q}: library check"))?;
        ensure(is_arc_brute(&g, cap.members()), format!("q={q}: collinear triple"))?;
        ensure(is_complete_brute(&g, cap.members()), format!("q={q}: extendable"))?;
        sizes.push(cap.k());
    }
    Ok(format!("sizes {sizes:?}, caps and complete"))
}

fn plane_section_equality() -> Outcome {
    for q in [4u64, 8] {
        let g = pg(3, q);
        let (cap, _) = constructions::elliptic_quadric(&g).unwrap();
        let check = cap.check_plane_sections(&g).unwrap();
        ensure(check.min_margin == 0 && check.pass, format!("q={q}: {check:?}"))?;
        let t = (q + 1) as i64;
        let qi = q as i64;
        let oracle_min = profile_brute(&g, cap.members())
            .keys()
            .map(|&x| t * (t - 1) - qi * (qi + 2 - x as i64) * x as i64)
            .min()
            .unwrap();
        ensure(oracle_min == 0, format!("q={q}: oracle margin {oracle_min}"))?;
        let equal: BTreeSet<usize> = profile_brute(&g, cap.members()).into_keys().collect();
        ensure(equal == BTreeSet::from([1, q as usize + 1]), format!("q={q}: sections {equal:?}"))?;
    }
    Ok("min margin 0 at q = 4, 8; sections of sizes 1 and q + 1".into())
}

fn external_tangents() -> Outcome {
    let mut checked = 0;
    for q in [2u64, 4, 8] {
        let g = pg(3, q);
        let mut complete: Vec<Cap> = vec![constructions::elliptic_quadric(&g).unwrap().0];
        if q == 2 {
            complete.push(constructions::binary_affine_cap(3).unwrap().materialized.unwrap().1);
        }
        let empty = Cap::empty(&g).unwrap();
        for i in 0..100 {
            complete.push(search::greedy_complete(&g, &empty, Strategy::UniformRandom, run_seed(SEED, i)).unwrap());
        }
        for (idx, cap) in complete.iter().enumerate() {
            let c = cap.check_external_tangents(&g, ScanMode::Exhaustive).unwrap();
            ensure(c.pass, format!("q={q} cap {idx}: sigma1 {} > t {}", c.max_sigma1, c.t))?;
            // Brute-force sigma_1 for the smaller fields and the ovoid.
            if q <= 4 || idx == 0 {
                let t = caps::tangents_per_point(g.q(), cap.k()) as usize;
                for x in g.all_points().filter(|&x| !cap.contains(x)) {
                    let s = sigma1_brute(&g, cap.members(), x);
                    ensure(s <= t, format!("q={q} cap {idx}: oracle sigma1({x}) = {s} > {t}"))?;
                    ensure(s == cap.sigma1(&g, x).unwrap(), format!("q={q}: sigma1 mismatch at {x}"))?;
                }
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} complete caps, no violation"))
}

fn exhaustive_pg32() -> Outcome {
    let g = pg(3, 2);
    let res = search::exhaustive_complete_caps(&g).unwrap();
    ensure(res.spectrum.sizes() == [5, 8], format!("library sizes {:?}", res.spectrum.sizes()))?;
    // Oracle: all 2^15 subsets of GF(2)^4 \ {0}; the lines are {a, b, a ^ b}.
    let vec_of = |p: PointId| g.coords(p).iter().fold(0u32, |v, &c| (v << 1) | c as u32);
    let vectors: Vec<u32> = g.all_points().map(vec_of).collect();
    let mut sizes = BTreeMap::new();
    for mask in 1u32..(1 << 15) {
        let set: Vec<u32> = (0..15).filter(|i| mask >> i & 1 == 1).map(|i| vectors[i]).collect();
        let has = |v: u32| set.contains(&v);
        let cap = set.iter().all(|&a| set.iter().all(|&b| a == b || !has(a ^ b)));
        if !cap {
            continue;
        }
        let complete = vectors
            .iter()
            .filter(|&&x| !has(x))
            .all(|&x| set.iter().any(|&a| has(a ^ x)));
        if complete {
            *sizes.entry(set.len()).or_insert(0usize) += 1;
        }
    }
    ensure(sizes.keys().copied().collect::<Vec<_>>() == [5, 8], format!("oracle sizes {sizes:?}"))?;
    ensure(sizes == res.spectrum.counts, format!("counts {:?} vs oracle {sizes:?}", res.spectrum.counts))?;
    Ok(format!("sizes {{5, 8}}, counts {sizes:?}"))
}

/// `ceiling` is the largest cap size; `expected_max`, if set, must be reached.
fn spectrum_check(
    q: u64,
    restarts: usize,
    forbidden: std::ops::RangeInclusive<usize>,
    ceiling: usize,
    expected_max: Option<usize>,
) -> Outcome {
    let g = pg(3, q);
    let cfg = SearchConfig::new(SEED, restarts, Strategy::UniformRandom);
    let sp = search::spectrum_sample(&g, &cfg).unwrap();
    ensure(sp.run_sizes.len() == restarts, "missing runs")?;
    for (k, pts) in &sp.witnesses {
        ensure(is_arc_brute(&g, pts) && is_complete_brute(&g, pts), format!("witness of size {k} is not a complete cap"))?;
    }
    let bad: Vec<usize> = sp.sizes().into_iter().filter(|k| forbidden.contains(k)).collect();
    ensure(bad.is_empty(), format!("forbidden sizes {bad:?} in {:?}", sp.counts))?;
    ensure(sp.max_size().is_some_and(|m| m <= ceiling), format!("size above {ceiling}: {:?}", sp.counts))?;
    if let Some(max) = expected_max {
        ensure(sp.max_size() == Some(max), format!("max {:?}, expected {max}; {:?}", sp.max_size(), sp.counts))?;
    }
    Ok(format!("{restarts} runs, counts {:?}", sp.counts))
}

fn bounds_3_8() -> Outcome {
    let t = evaluate_bounds(3, 8).unwrap();
    let s = &t.second_largest;
    let cap = |n: &str| s.get(n).unwrap().integer_cap;
    // 77 - 8 sqrt 5 = 77 - sqrt 320 and 17^2 < 320 < 18^2.
    let oracle_sqrt5 = 77 - 17 - 1;
    ensure(cap("chao") == 8 * 8 - 8 + 5, format!("chao {}", cap("chao")))?;
    ensure(cap("linear-three") == 59, format!("linear-three {}", cap("linear-three")))?;
    ensure(cap("sqrt5") == oracle_sqrt5, format!("sqrt5 {}", cap("sqrt5")))?;
    ensure(s.minimum == Some(59), format!("minimum {:?}", s.minimum))?;
    ensure(s.minimum_provenance == ["linear-three", "sqrt5"], format!("provenance {:?}", s.minimum_provenance))?;
    ensure(s.get("cao-ou-disputed").is_none_or(|b| !b.is_minimum), "disputed bound used as minimum")?;
    Ok("61 / 59 / 59, minimum 59 from linear-three and sqrt5".into())
}

fn ss_plumbing() -> Outcome {
    let q = 2048u64;
    let iv = bounds::ss_interval(q, 3).unwrap();
    let sqrt_q = BoundId::SqrtQ.exact_value(3, q);
    ensure(iv.lo_surd == sqrt_q, format!("{} != {sqrt_q}", iv.lo_exact))?;
    // Float oracle for the endpoint: q^2 - 2q + 3 sqrt(q) + 2.
    let qf = q as f64;
    let lo = qf * qf - 2.0 * qf + 3.0 * qf.sqrt() + 2.0;
    ensure(((iv.lo - lo) / lo).abs() < 1e-6, format!("endpoint {} vs {lo}", iv.lo))?;
    let s = qf.sqrt();
    let ceiling = (-2.0 * s + 3.0 + (16.0 * qf * s + 12.0 * qf - 44.0 * s - 7.0).sqrt()) / (4.0 * s + 2.0);
    let a_max = bounds::largest_admissible_a(q);
    ensure(a_max == Some(ceiling.floor() as u64) && a_max == Some(6), format!("a_max {a_max:?}, ceiling {ceiling}"))?;
    let sqrt5 = qf * qf - (5f64.sqrt() - 1.0) * qf + 5.0;
    ensure(lo < sqrt5, "float order")?;
    ensure(sqrt_q.cmp_exact(&BoundId::Sqrt5.exact_value(3, q)).is_lt(), "exact order")?;
    Ok(format!("endpoint {lo:.4}, a <= {ceiling:.4}, {lo:.2} < {sqrt5:.2}"))
}

fn counting_identities() -> Outcome {
    let mut caps_done = 0;
    for q in [2u64, 4, 8] {
        let g = pg(3, q);
        let qq = q as usize;
        for set in harness::random_caps(&g, 100, SEED) {
            let pts = set.members();
            let k = pts.len();
            ensure(is_arc_brute(&g, pts), format!("q={q}: random set is not a cap"))?;
            let cap = Cap::new(&g, pts.iter().copied()).unwrap();
            let t = qq * qq + qq + 2 - k;
            let oracle_members: &[PointId] = if q <= 4 { pts } else { &pts[..pts.len().min(3)] };
            for &p in pts {
                ensure(cap.tangent_count_at(&g, p).unwrap() == t, format!("q={q}: tangents at {p}"))?;
            }
            for &p in oracle_members {
                // Points other than p on no secant through p fill the tangents, q per line.
                let free = g
                    .all_points()
                    .filter(|&x| x != p && !pts.iter().any(|&y| y != p && collinear(&g, p, x, y)))
                    .count();
                ensure(free == t * qq, format!("q={q}: oracle tangents at {p}: {free} / {qq}"))?;
            }
            let profile = profile_brute(&g, pts);
            ensure(profile == cap.section_profile(&g), format!("q={q}: profile mismatch"))?;
            let planes: usize = profile.values().sum();
            let inc: usize = profile.iter().map(|(x, n)| x * n).sum();
            let pairs: usize = profile.iter().map(|(x, n)| x * x.saturating_sub(1) / 2 * n).sum();
            ensure(planes == qq * qq * qq + qq * qq + qq + 1, "plane total")?;
            ensure(inc == k * (qq * qq + qq + 1), format!("q={q}: sum x n_x = {inc}"))?;
            ensure(pairs == k * k.saturating_sub(1) / 2 * (qq + 1), format!("q={q}: sum C(x,2) n_x = {pairs}"))?;
            caps_done += 1;
        }
    }
    let mut arcs_done = 0;
    for q in [4u64, 8] {
        let g = pg(2, q);
        for set in harness::random_arcs(&g, 100, SEED) {
            let pts = set.members();
            let parity = pts.len() % 2;
            for x in g.all_points().filter(|x| !set.contains(*x)) {
                let s = sigma1_brute(&g, pts, x);
                ensure(s % 2 == parity, format!("q={q}: sigma1({x}) = {s} for k = {}", pts.len()))?;
            }
            ensure(Arc::new(&g, pts.iter().copied()).unwrap().tangent_parity_ok(&g), "library parity")?;
            arcs_done += 1;
        }
    }
    Ok(format!("{caps_done} caps, {arcs_done} arcs"))
}

fn hyperoval_completion() -> Outcome {
    let mut done = 0;
    for (q, k) in [(4u64, 4usize), (8, 7)] {
        let g = pg(2, q);
        let mut trials = 0;
        let mut i = 0;
        while trials < 50 {
            let mut rng = ChaCha8Rng::seed_from_u64(run_seed(SEED, i));
            i += 1;
            let set = search::random_partial(&g, k, &mut rng);
            if set.len() < k {
                continue;
            }
            trials += 1;
            let arc = Arc::new(&g, set.members().iter().copied()).unwrap();
            let h = arc.complete_to_hyperoval(&g).map_err(|e| format!("q={q}: {e}"))?;
            let hp = h.members();
            ensure(hp.len() == q as usize + 2 && is_arc_brute(&g, hp), format!("q={q}: bad hyperoval {hp:?}"))?;
            ensure(set.members().iter().all(|p| hp.contains(p)), "hyperoval drops a point")?;
            for x in g.all_points().filter(|x| !hp.contains(x)) {
                ensure(sigma1_brute(&g, hp, x) == 0, format!("q={q}: tangent through {x}"))?;
            }
            if q == 4 {
                // Oracle: every pair of further points.
                let rest: Vec<PointId> = g.all_points().filter(|x| !set.contains(*x)).collect();
                let mut found = Vec::new();
                for a in 0..rest.len() {
                    for b in a + 1..rest.len() {
                        let mut cand = set.members().to_vec();
                        cand.extend([rest[a], rest[b]]);
                        if is_arc_brute(&g, &cand) {
                            cand.sort_unstable();
                            found.push(cand);
                        }
                    }
                }
                ensure(found == vec![hp.to_vec()], format!("q=4: {} hyperovals contain {:?}", found.len(), set.members()))?;
            }
            done += 1;
        }
    }
    Ok(format!("{done} arcs completed uniquely"))
}

struct Criterion {
    number: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn spectrum_pg34() -> Outcome {
    spectrum_check(4, 1000, 15..=16, 17, Some(17))
}

fn spectrum_pg38() -> Outcome {
    spectrum_check(8, 300, 60..=64, 65, None)
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion { number: 1, name: "geometry counts", limit: secs(1), run: geometry_counts },
        Criterion { number: 2, name: "ovoid construction", limit: secs(10), run: ovoid_construction },
        Criterion { number: 3, name: "plane-section equality", limit: secs(10), run: plane_section_equality },
        Criterion { number: 4, name: "external tangents", limit: secs(300), run: external_tangents },
        Criterion { number: 5, name: "PG(3,2) exhaustive", limit: secs(10), run: exhaustive_pg32 },
        Criterion { number: 6, name: "PG(3,4) spectrum", limit: secs(300), run: spectrum_pg34 },
        Criterion { number: 7, name: "PG(3,8) spectrum", limit: secs(900), run: spectrum_pg38 },
        Criterion { number: 8, name: "bounds at (3, 8)", limit: secs(60), run: bounds_3_8 },
        Criterion { number: 9, name: "forbidden interval at 2048", limit: secs(60), run: ss_plumbing },
        Criterion { number: 10, name: "counting identities", limit: secs(600), run: counting_identities },
        Criterion { number: 11, name: "hyperoval completion", limit: secs(60), run: hyperoval_completion },
    ];
    let mut failed = 0;
    for c in &criteria {
        let t0 = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = t0.elapsed();
        let result = match result {
            Ok(_) if elapsed > c.limit => Err(format!("took {elapsed:?}, limit {:?}", c.limit)),
            r => r,
        };
        match &result {
            Ok(detail) => println!("criterion {:>2} {:<28} PASS  {:>8.2?}  {detail}", c.number, c.name, elapsed),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} {:<28} FAIL  {:>8.2?}  {why}", c.number, c.name, elapsed);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
