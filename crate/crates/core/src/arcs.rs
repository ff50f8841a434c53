//! Arcs in PG(2, q), q even: validity, tangent counts, the nucleus of a
//! (q+1)-arc, completion of large arcs to hyperovals, and the parity law
//! for tangents through external points.
//!
//! Plane sections of PG(3, q) are handled through [`PlaneChart`], which
//! identifies a plane with a standalone PG(2, q).

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Coords, Geometry, PointId};
use crate::pointset::{self, PointSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArcCheck {
    pub is_arc: bool,
    pub witness: Option<[PointId; 3]>,
}

/// A set of points of PG(2, q), no three collinear.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Arc {
    points: PointSet,
}

fn require_plane(g: &Geometry) -> Result<()> {
    if g.n() == 2 {
        Ok(())
    } else {
        Err(Error::Dimension(g.n()))
    }
}

pub fn is_arc(g: &Geometry, set: &PointSet) -> ArcCheck {
    let witness = pointset::collinear_triple(g, set);
    ArcCheck { is_arc: witness.is_none(), witness }
}

impl Arc {
    pub fn new(g: &Geometry, points: impl IntoIterator<Item = PointId>) -> Result<Self> {
        require_plane(g)?;
        let set = PointSet::new(g, points)?;
        match pointset::collinear_triple(g, &set) {
            Some(t) => Err(Error::NotAnArc(t)),
            None => Ok(Self { points: set }),
        }
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

    /// Tangents (lines meeting the arc in one point) through `x`. For a
    /// member this is q + 2 - k.
    pub fn tangents_through(&self, g: &Geometry, x: PointId) -> usize {
        pointset::tangents_through(g, &self.points, x)
    }

    pub fn extenders(&self, g: &Geometry) -> Vec<PointId> {
        pointset::extenders(g, &self.points)
    }

    pub fn tangent_report(&self, g: &Geometry) -> ArcTangentReport {
        let per_member_tangents =
            self.members().iter().map(|&p| (p, self.tangents_through(g, p))).collect();
        let through_point = g
            .all_points()
            .filter(|&x| !self.contains(x))
            .map(|x| (x, self.tangents_through(g, x)))
            .collect();
        ArcTangentReport { k: self.k(), per_member_tangents, through_point }
    }

    /// The unique point extending a (q+1)-arc to a (q+2)-arc.
    pub fn nucleus(&self, g: &Geometry) -> Result<PointId> {
        let q = g.q() as usize;
        if self.k() != q + 1 {
            return Err(Error::Precondition(format!(
                "nucleus needs a (q+1)-arc, got k = {} with q = {q}",
                self.k()
            )));
        }
        match self.extenders(g).as_slice() {
            [n] => Ok(*n),
            other => Err(Error::Internal(format!(
                "(q+1)-arc has {} extension points, expected exactly one",
                other.len()
            ))),
        }
    }

    /// Completes the arc to the unique (q+2)-arc containing it. Applies
    /// when q > 2 and q - sqrt(q) + 1 < k <= q + 2.
    pub fn complete_to_hyperoval(&self, g: &Geometry) -> Result<Arc> {
        let q = g.q() as usize;
        let k = self.k();
        if !in_completion_range(q as u64, k as u64) {
            return Err(Error::CompletionRange { k, q: g.q() });
        }
        let mut current = self.points.clone();
        let mut pending = pointset::extenders(g, &current);
        while current.len() < q + 2 {
            // Every extension point of an arc in range lies on the unique
            // hyperoval, so exactly q + 2 - k of them must remain.
            let expected = q + 2 - current.len();
            if pending.len() != expected {
                return Err(Error::UniquenessViolation(format!(
                    "{}-arc has {} extension points, expected {expected}",
                    current.len(),
                    pending.len()
                )));
            }
            current.insert(pending[0]);
            let next = pointset::extenders(g, &current);
            if next != pending[1..] {
                return Err(Error::UniquenessViolation(format!(
                    "adding point {} changed the remaining extension points",
                    pending[0]
                )));
            }
            pending = next;
        }
        if !pending.is_empty() {
            return Err(Error::Internal("hyperoval still has extension points".into()));
        }
        Ok(Arc { points: current })
    }

    /// True iff every point off the arc lies on a number of tangents with
    /// the same parity as k.
    pub fn tangent_parity_ok(&self, g: &Geometry) -> bool {
        let parity = self.k() % 2;
        g.all_points()
            .filter(|&x| !self.contains(x))
            .all(|x| self.tangents_through(g, x) % 2 == parity)
    }
}

/// Exact test of q - sqrt(q) + 1 < k <= q + 2 with q > 2.
///
/// For k <= q + 1 the left inequality is sqrt(q) > q + 1 - k >= 0, i.e.
/// q > (q + 1 - k)^2.
pub fn in_completion_range(q: u64, k: u64) -> bool {
    if q <= 2 || k > q + 2 {
        return false;
    }
    if k == q + 2 {
        return true;
    }
    let gap = q + 1 - k;
    q > gap * gap
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArcTangentReport {
    pub k: usize,
    pub per_member_tangents: BTreeMap<PointId, usize>,
    /// sigma_1 for every point off the arc.
    pub through_point: BTreeMap<PointId, usize>,
}

/// A plane of PG(3, q) identified with PG(2, q).
///
/// The chart sends local coordinates (x, y, z) to x*b0 + y*b1 + z*b2, where
/// b0, b1 are the two smallest points of the plane and b2 is the smallest
/// plane point off the line b0 b1.
#[derive(Debug)]
pub struct PlaneChart {
    plane: PointId,
    local: Geometry,
    to_global: Vec<PointId>,
    to_local: HashMap<PointId, PointId>,
}

impl PlaneChart {
    pub fn new(space: &Geometry, plane: PointId) -> Result<Self> {
        if space.n() != 3 {
            return Err(Error::Dimension(space.n()));
        }
        if plane as usize >= space.num_planes() {
            return Err(Error::PointOutOfRange { index: plane, points: space.num_planes() });
        }
        let pts = space.plane_points(plane);
        let (b0, b1) = (pts[0], pts[1]);
        let line = space.line_through(b0, b1)?;
        let b2 = *pts.iter().find(|&&p| !line.contains(p)).expect("plane is not a line");
        let basis: [Coords; 3] = [b0, b1, b2].map(|p| space.raw_coords(p));
        let local = Geometry::build(2, space.field().clone())?;
        let f = space.field();
        let mut to_global = Vec::with_capacity(local.num_points());
        let mut to_local = HashMap::with_capacity(local.num_points());
        for lp in local.all_points() {
            let c = local.coords(lp);
            let mut v = [0u8; 4];
            for (coef, b) in c.iter().zip(basis.iter()) {
                for j in 0..4 {
                    v[j] ^= f.mul(*coef, b[j]);
                }
            }
            let gp = space.index_of(&v)?;
            to_global.push(gp);
            to_local.insert(gp, lp);
        }
        Ok(Self { plane, local, to_global, to_local })
    }

    pub fn plane(&self) -> PointId {
        self.plane
    }

    pub fn local(&self) -> &Geometry {
        &self.local
    }

    pub fn to_global(&self, local: PointId) -> PointId {
        self.to_global[local as usize]
    }

    pub fn to_local(&self, global: PointId) -> Option<PointId> {
        self.to_local.get(&global).copied()
    }

    /// The section of `set` by this plane, in local coordinates.
    pub fn section(&self, set: &PointSet) -> Vec<PointId> {
        let mut out: Vec<PointId> =
            set.members().iter().filter_map(|&p| self.to_local(p)).collect();
        out.sort_unstable();
        out
    }
}
