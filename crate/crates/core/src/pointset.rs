//! Point sets with O(1) membership, plus the line scans shared by arcs and caps.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Geometry, PointId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointSet {
    members: Vec<PointId>,
    #[serde(skip)]
    mask: Vec<bool>,
}

impl PointSet {
    /// Sorted, deduplicated set; every index must belong to `g`.
    pub fn new(g: &Geometry, points: impl IntoIterator<Item = PointId>) -> Result<Self> {
        let mut members: Vec<PointId> = points.into_iter().collect();
        for &p in &members {
            g.check_point(p)?;
        }
        members.sort_unstable();
        members.dedup();
        let mut mask = vec![false; g.num_points()];
        for &p in &members {
            mask[p as usize] = true;
        }
        Ok(Self { members, mask })
    }

    pub fn empty(g: &Geometry) -> Self {
        Self { members: Vec::new(), mask: vec![false; g.num_points()] }
    }

    #[inline]
    pub fn contains(&self, p: PointId) -> bool {
        self.mask.get(p as usize).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[PointId] {
        &self.members
    }

    pub fn insert(&mut self, p: PointId) {
        if !self.mask[p as usize] {
            self.mask[p as usize] = true;
            let at = self.members.partition_point(|&m| m < p);
            self.members.insert(at, p);
        }
    }

    pub fn remove(&mut self, p: PointId) {
        if self.mask[p as usize] {
            self.mask[p as usize] = false;
            self.members.retain(|&m| m != p);
        }
    }

    /// Members of this set on the line through `a` and `b`.
    pub fn count_on_line(&self, g: &Geometry, a: PointId, b: PointId) -> usize {
        let mut n = 0;
        g.for_each_on_line(a, b, |p| n += self.contains(p) as usize);
        n
    }
}

/// The lexicographically smallest collinear triple of members, if any.
pub fn collinear_triple(g: &Geometry, set: &PointSet) -> Option<[PointId; 3]> {
    let m = set.members();
    for (i, &a) in m.iter().enumerate() {
        for &b in &m[i + 1..] {
            let mut third = PointId::MAX;
            g.for_each_on_line(a, b, |p| {
                if p > b && p < third && set.contains(p) {
                    third = p;
                }
            });
            if third != PointId::MAX {
                return Some([a, b, third]);
            }
        }
    }
    None
}

/// Points lying on at least one secant (a line through two members).
/// Members themselves are marked as well.
pub fn secant_cover(g: &Geometry, set: &PointSet) -> Vec<bool> {
    let mut covered = vec![false; g.num_points()];
    for &p in set.members() {
        covered[p as usize] = true;
    }
    let m = set.members();
    for (i, &a) in m.iter().enumerate() {
        for &b in &m[i + 1..] {
            g.for_each_on_line(a, b, |p| covered[p as usize] = true);
        }
    }
    covered
}

/// Points off the set that lie on no secant, ascending. Adding any one of
/// them keeps the set free of collinear triples.
pub fn extenders(g: &Geometry, set: &PointSet) -> Vec<PointId> {
    let covered = secant_cover(g, set);
    g.all_points().filter(|&p| !covered[p as usize]).collect()
}

/// Number of tangent lines (lines meeting the set in exactly one point)
/// through `x`. The set must be free of collinear triples.
pub fn tangents_through(g: &Geometry, set: &PointSet, x: PointId) -> usize {
    if set.contains(x) {
        // Lines from x to the other members are pairwise distinct secants.
        g.lines_per_point() - (set.len() - 1)
    } else {
        set.members().iter().filter(|&&y| set.count_on_line(g, x, y) == 1).count()
    }
}

/// Tangents through `x` counted line by line, without assuming the set is an
/// arc or cap. Slower; used to cross-check [`tangents_through`].
pub fn tangents_through_by_lines(g: &Geometry, set: &PointSet, x: PointId) -> usize {
    g.lines_through_point(x)
        .iter()
        .filter(|l| l.points.iter().filter(|&&p| set.contains(p)).count() == 1)
        .count()
}

pub fn require_members(g: &Geometry, points: &[PointId]) -> Result<()> {
    for &p in points {
        g.check_point(p)?;
    }
    if points.is_empty() {
        return Err(Error::Precondition("empty point list".into()));
    }
    Ok(())
}
