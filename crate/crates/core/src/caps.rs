//! Caps in PG(3, q): validity, tangents, completeness, tangent counts
//! through external points, plane-section profiles, and two executable
//! checks that complete caps in even characteristic must pass:
//!
//! * plane sections: t(t - 1) >= q(q + 2 - x)x for every plane meeting the
//!   cap in x points;
//! * external points: at most t tangents pass through any point off the cap.
//!
//! Here t = q^2 + q + 2 - k is the number of tangents at each cap point.

use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Geometry, PointId};
use crate::pointset::{self, PointSet};

/// A set of points of PG(3, q), no three collinear.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cap {
    points: PointSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CapCheck {
    pub is_cap: bool,
    pub witness: Option<[PointId; 3]>,
}

fn require_space(g: &Geometry) -> Result<()> {
    if g.n() == 3 {
        Ok(())
    } else {
        Err(Error::Dimension(g.n()))
    }
}

pub fn is_cap(g: &Geometry, set: &PointSet) -> CapCheck {
    let witness = pointset::collinear_triple(g, set);
    CapCheck { is_cap: witness.is_none(), witness }
}

/// Tangents at each point of a k-cap of PG(3, q): q^2 + q + 2 - k.
pub fn tangents_per_point(q: u32, k: usize) -> i64 {
    let q = q as i64;
    q * q + q + 2 - k as i64
}

/// How external-point scans visit PG(3, q).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ScanMode {
    Exhaustive,
    Sampled { samples: usize, seed: u64 },
}

pub const DEFAULT_SAMPLES: usize = 2000;
/// Largest q scanned exhaustively by default.
pub const EXHAUSTIVE_Q_LIMIT: u32 = 16;

impl ScanMode {
    pub fn default_for(q: u32, seed: u64) -> Self {
        if q <= EXHAUSTIVE_Q_LIMIT {
            ScanMode::Exhaustive
        } else {
            ScanMode::Sampled { samples: DEFAULT_SAMPLES, seed }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Completeness {
    pub complete: bool,
    pub extenders: Vec<PointId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlaneSectionCheck {
    pub pass: bool,
    pub t: i64,
    /// min over planes of t(t-1) - q(q+2-x)x
    pub min_margin: i64,
    pub worst_plane: PointId,
    pub worst_x: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExternalTangentCheck {
    pub pass: bool,
    pub t: i64,
    pub max_sigma1: usize,
    pub worst_point: Option<PointId>,
    pub scanned: usize,
    pub scan: ScanMode,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CapReport {
    pub q: u32,
    pub k: usize,
    pub t: i64,
    pub members: Vec<PointId>,
    pub complete: bool,
    pub extenders: Vec<PointId>,
    /// x -> number of planes meeting the cap in exactly x points
    pub section_profile: BTreeMap<usize, usize>,
    pub sigma1_max: usize,
    pub sigma1_witness: Option<PointId>,
    /// Present only for complete caps.
    pub plane_section_check: Option<PlaneSectionCheck>,
    pub external_tangent_check: Option<ExternalTangentCheck>,
}

impl Cap {
    pub fn new(g: &Geometry, points: impl IntoIterator<Item = PointId>) -> Result<Self> {
        require_space(g)?;
        let set = PointSet::new(g, points)?;
        match pointset::collinear_triple(g, &set) {
            Some(t) => Err(Error::NotACap(t)),
            None => Ok(Self { points: set }),
        }
    }

    pub fn empty(g: &Geometry) -> Result<Self> {
        require_space(g)?;
        Ok(Self { points: PointSet::empty(g) })
    }

    pub fn k(&self) -> usize {
        self.points.len()
    }

    pub fn members(&self) -> &[PointId] {
        self.points.members()
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn contains(&self, p: PointId) -> bool {
        self.points.contains(p)
    }

    pub fn t(&self, g: &Geometry) -> i64 {
        tangents_per_point(g.q(), self.k())
    }

    /// Tangent lines through the member `p`, counted from the secants and
    /// checked against q^2 + q + 2 - k.
    pub fn tangent_count_at(&self, g: &Geometry, p: PointId) -> Result<usize> {
        if !self.contains(p) {
            return Err(Error::Precondition(format!("point {p} is not on the cap")));
        }
        let mut secants = Vec::with_capacity(self.k());
        for &y in self.members().iter().filter(|&&y| y != p) {
            let line = g.line_through(p, y)?;
            let on = line.points.iter().filter(|&&x| self.contains(x)).count();
            if on != 2 {
                return Err(Error::Internal(format!("line {p}-{y} meets the cap in {on} points")));
            }
            secants.push(line.points);
        }
        secants.sort_unstable();
        secants.dedup();
        let t = g.lines_per_point() - secants.len();
        if t as i64 != self.t(g) {
            return Err(Error::Internal(format!(
                "tangent count {t} at {p} disagrees with q^2+q+2-k = {}",
                self.t(g)
            )));
        }
        Ok(t)
    }

    /// Number of tangents through the external point `x`.
    pub fn sigma1(&self, g: &Geometry, x: PointId) -> Result<usize> {
        g.check_point(x)?;
        if self.contains(x) {
            return Err(Error::Precondition(format!("point {x} lies on the cap")));
        }
        Ok(pointset::tangents_through(g, &self.points, x))
    }

    /// Completeness by the definition: a point extends the cap iff it lies
    /// on no secant.
    pub fn completeness(&self, g: &Geometry) -> Completeness {
        let extenders = pointset::extenders(g, &self.points);
        Completeness { complete: extenders.is_empty(), extenders }
    }

    pub fn is_complete(&self, g: &Geometry) -> bool {
        self.completeness(g).complete
    }

    /// Histogram x -> number of planes meeting the cap in x points.
    pub fn section_profile(&self, g: &Geometry) -> BTreeMap<usize, usize> {
        let counts: Vec<usize> = (0..g.num_planes() as PointId)
            .into_par_iter()
            .map(|pl| self.members().iter().filter(|&&p| g.on_plane(pl, p)).count())
            .collect();
        let mut profile = BTreeMap::new();
        for x in counts {
            *profile.entry(x).or_insert(0) += 1;
        }
        profile
    }

    fn require_complete(&self, g: &Geometry) -> Result<()> {
        let c = self.completeness(g);
        if c.complete {
            Ok(())
        } else {
            Err(Error::Hypothesis(format!(
                "cap of size {} is not complete ({} extension points)",
                self.k(),
                c.extenders.len()
            )))
        }
    }

    /// t(t-1) >= q(q+2-x)x over all planes. The witness is the smallest
    /// plane index attaining the minimum margin.
    pub fn check_plane_sections(&self, g: &Geometry) -> Result<PlaneSectionCheck> {
        self.require_complete(g)?;
        Ok(self.plane_sections_unchecked(g))
    }

    fn plane_sections_unchecked(&self, g: &Geometry) -> PlaneSectionCheck {
        let q = g.q() as i64;
        let t = self.t(g);
        let lhs = t * (t - 1);
        let (worst_plane, worst_x, min_margin) = (0..g.num_planes() as PointId)
            .into_par_iter()
            .map(|pl| {
                let x = self.members().iter().filter(|&&p| g.on_plane(pl, p)).count();
                let xi = x as i64;
                (pl, x, lhs - q * (q + 2 - xi) * xi)
            })
            .min_by_key(|&(pl, _, margin)| (margin, pl))
            .expect("PG(3, q) has planes");
        PlaneSectionCheck { pass: min_margin >= 0, t, min_margin, worst_plane, worst_x }
    }

    /// sigma_1(Q) <= t for every point Q off the cap. The witness is the
    /// smallest scanned point attaining the maximum.
    pub fn check_external_tangents(
        &self,
        g: &Geometry,
        scan: ScanMode,
    ) -> Result<ExternalTangentCheck> {
        self.require_complete(g)?;
        Ok(self.external_tangents_unchecked(g, scan))
    }

    fn scan_points(&self, g: &Geometry, scan: ScanMode) -> Vec<PointId> {
        let external: Vec<PointId> = g.all_points().filter(|&x| !self.contains(x)).collect();
        match scan {
            ScanMode::Exhaustive => external,
            ScanMode::Sampled { samples, seed } => {
                if samples >= external.len() {
                    return external;
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut picked: Vec<PointId> = sample(&mut rng, external.len(), samples)
                    .into_iter()
                    .map(|i| external[i])
                    .collect();
                picked.sort_unstable();
                picked
            }
        }
    }

    fn external_tangents_unchecked(&self, g: &Geometry, scan: ScanMode) -> ExternalTangentCheck {
        let points = self.scan_points(g, scan);
        let t = self.t(g);
        let best = points
            .par_iter()
            .map(|&x| (pointset::tangents_through(g, &self.points, x), x))
            // max sigma_1, then smallest index
            .min_by_key(|&(s, x)| (std::cmp::Reverse(s), x));
        let (max_sigma1, worst_point) = match best {
            Some((s, x)) => (s, Some(x)),
            None => (0, None),
        };
        ExternalTangentCheck {
            pass: max_sigma1 as i64 <= t,
            t,
            max_sigma1,
            worst_point,
            scanned: points.len(),
            scan,
        }
    }

    pub fn report(&self, g: &Geometry, scan: ScanMode) -> CapReport {
        let completeness = self.completeness(g);
        let external = self.external_tangents_unchecked(g, scan);
        let (plane_section_check, external_tangent_check) = if completeness.complete {
            (Some(self.plane_sections_unchecked(g)), Some(external.clone()))
        } else {
            (None, None)
        };
        CapReport {
            q: g.q(),
            k: self.k(),
            t: self.t(g),
            members: self.members().to_vec(),
            complete: completeness.complete,
            extenders: completeness.extenders,
            section_profile: self.section_profile(g),
            sigma1_max: external.max_sigma1,
            sigma1_witness: external.worst_point,
            plane_section_check,
            external_tangent_check,
        }
    }
}

/// The three double-counting identities a section profile must satisfy.
/// Returns the first one that fails.
pub fn profile_identities(
    g: &Geometry,
    k: usize,
    profile: &BTreeMap<usize, usize>,
) -> std::result::Result<(), String> {
    let q = g.q() as u64;
    let k = k as u64;
    let planes: u64 = profile.values().map(|&c| c as u64).sum();
    if planes != g.num_planes() as u64 {
        return Err(format!("plane total {planes} != {}", g.num_planes()));
    }
    let incidences: u64 = profile.iter().map(|(&x, &c)| x as u64 * c as u64).sum();
    if incidences != k * (q * q + q + 1) {
        return Err(format!("sum x*n_x = {incidences} != k(q^2+q+1)"));
    }
    let pairs: u64 = profile.iter().map(|(&x, &c)| choose2(x as u64) * c as u64).sum();
    if pairs != choose2(k) * (q + 1) {
        return Err(format!("sum C(x,2)*n_x = {pairs} != C(k,2)(q+1)"));
    }
    Ok(())
}

fn choose2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pg3(q: u64) -> Geometry {
        Geometry::build_pg(3, q).unwrap()
    }

    /// Points with x0 = 1 in PG(3, 2).
    fn affine_eight(g: &Geometry) -> Vec<PointId> {
        g.all_points().filter(|&p| g.coords(p)[0] == 1).collect()
    }

    #[test]
    fn affine_part_of_pg32_is_a_complete_cap() {
        let g = pg3(2);
        let pts = affine_eight(&g);
        assert_eq!(pts.len(), 8);
        let cap = Cap::new(&g, pts).unwrap();
        assert!(cap.is_complete(&g));
        assert_eq!(cap.t(&g), 0);
        let r = cap.report(&g, ScanMode::Exhaustive);
        assert!(r.external_tangent_check.unwrap().pass);
        assert!(r.plane_section_check.unwrap().pass);
    }

    #[test]
    fn collinear_triple_is_not_a_cap() {
        let g = pg3(4);
        let l = g.line_through(1, 50).unwrap();
        let set = PointSet::new(&g, l.points[..3].iter().copied()).unwrap();
        let c = is_cap(&g, &set);
        assert!(!c.is_cap);
        assert_eq!(c.witness.unwrap().to_vec(), l.points[..3].to_vec());
        assert!(matches!(Cap::new(&g, l.points), Err(Error::NotACap(_))));
    }

    #[test]
    fn single_point_cap() {
        let g = pg3(4);
        let cap = Cap::new(&g, [7]).unwrap();
        assert_eq!(cap.tangent_count_at(&g, 7).unwrap(), 21);
        for x in g.all_points().filter(|&x| x != 7) {
            assert_eq!(cap.sigma1(&g, x).unwrap(), 1);
        }
        assert!(cap.sigma1(&g, 7).is_err());
        assert!(cap.tangent_count_at(&g, 8).is_err());
    }

    #[test]
    fn empty_cap_profile() {
        let g = pg3(4);
        let cap = Cap::empty(&g).unwrap();
        let profile = cap.section_profile(&g);
        assert_eq!(profile, BTreeMap::from([(0, 85)]));
        profile_identities(&g, 0, &profile).unwrap();
        assert!(!cap.is_complete(&g));
    }

    #[test]
    fn incomplete_cap_rejects_hypothesis_checks() {
        let g = pg3(4);
        let cap = Cap::new(&g, [0, 1, 5]).unwrap();
        assert!(matches!(cap.check_plane_sections(&g), Err(Error::Hypothesis(_))));
        assert!(matches!(
            cap.check_external_tangents(&g, ScanMode::Exhaustive),
            Err(Error::Hypothesis(_))
        ));
        let r = cap.report(&g, ScanMode::Exhaustive);
        assert!(!r.complete && r.plane_section_check.is_none());
    }

    #[test]
    fn removing_a_point_makes_it_an_extender() {
        let g = pg3(2);
        let mut pts = affine_eight(&g);
        let removed = pts.remove(3);
        let cap = Cap::new(&g, pts).unwrap();
        let c = cap.completeness(&g);
        assert!(!c.complete);
        assert!(c.extenders.contains(&removed));
    }

    #[test]
    fn sampled_scan_is_deterministic() {
        let g = pg3(4);
        let cap = Cap::new(&g, [0]).unwrap();
        let a = cap.scan_points(&g, ScanMode::Sampled { samples: 10, seed: 3 });
        let b = cap.scan_points(&g, ScanMode::Sampled { samples: 10, seed: 3 });
        assert_eq!(a, b);
        assert_eq!(a.len(), 10);
        assert!(!a.contains(&0));
    }

    #[test]
    fn scan_mode_defaults() {
        assert_eq!(ScanMode::default_for(16, 0), ScanMode::Exhaustive);
        assert!(matches!(ScanMode::default_for(32, 0), ScanMode::Sampled { .. }));
    }
}
