//! Incidence model of PG(2, q) and PG(3, q).
//!
//! Points are stored as normalized homogeneous coordinates (first nonzero
//! entry equal to 1) and numbered in lexicographic order of those vectors.
//! The numbering has a closed form, so coordinates map back to an index
//! without any lookup table. Planes of PG(3, q) reuse the same scheme on
//! their dual coordinates, which makes plane `i` the dual of point `i`.
//!
//! Lines are never enumerated up front; [`Geometry::line_through`] spans
//! them on demand from two points.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2e::{Elem, FieldTable};

/// Point or plane index.
pub type PointId = u32;

/// Homogeneous coordinates; only the first `n + 1` entries are meaningful.
pub type Coords = [Elem; 4];

pub const MAX_Q_PLANE: u32 = 128;
pub const MAX_Q_SPACE: u32 = 32;
/// Largest q for which the line memo may be switched on.
pub const MAX_Q_LINE_CACHE: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Point {
    pub index: PointId,
    pub coords: Vec<Elem>,
}

/// The q + 1 points of a line, sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Line {
    pub points: Vec<PointId>,
}

impl Line {
    pub fn contains(&self, p: PointId) -> bool {
        self.points.binary_search(&p).is_ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Plane {
    pub index: PointId,
    pub dual_coords: Vec<Elem>,
    pub points: Vec<PointId>,
}

type LineMemo = HashMap<(PointId, PointId), Arc<[PointId]>>;

#[derive(Debug)]
pub struct Geometry {
    n: usize,
    field: FieldTable,
    points: Vec<Coords>,
    /// Dual coordinates of the planes (n = 3 only); same numbering as points.
    planes: Vec<Coords>,
    plane_points: Vec<OnceLock<Vec<PointId>>>,
    line_cache: Option<Mutex<LineMemo>>,
}

/// Number of points of PG(n, q): (q^(n+1) - 1) / (q - 1).
pub fn point_count(n: usize, q: u64) -> u64 {
    (0..=n as u32).map(|i| q.pow(i)).sum()
}

impl Geometry {
    pub fn build(n: usize, field: FieldTable) -> Result<Self> {
        let q = field.q();
        match n {
            2 if q > MAX_Q_PLANE => {
                return Err(Error::Capacity { n, q, reason: "q <= 128 in the plane" })
            }
            3 if q > MAX_Q_SPACE => {
                return Err(Error::Capacity { n, q, reason: "q <= 32 in space" })
            }
            2 | 3 => {}
            _ => return Err(Error::Dimension(n)),
        }
        let total = point_count(n, q as u64) as usize;
        let mut points = Vec::with_capacity(total);
        // Leading position from the right: (0,..,0,1) first, (1,*,..,*) last.
        for lead in (0..=n).rev() {
            let trailing = n - lead;
            let count = (q as usize).pow(trailing as u32);
            for value in 0..count {
                let mut c: Coords = [0; 4];
                c[lead] = 1;
                let mut v = value;
                for j in (lead + 1..=n).rev() {
                    c[j] = (v % q as usize) as Elem;
                    v /= q as usize;
                }
                points.push(c);
            }
        }
        debug_assert_eq!(points.len(), total);
        let planes = if n == 3 { points.clone() } else { Vec::new() };
        let plane_points = (0..planes.len()).map(|_| OnceLock::new()).collect();
        Ok(Self { n, field, points, planes, plane_points, line_cache: None })
    }

    pub fn build_pg(n: usize, q: u64) -> Result<Self> {
        Self::build(n, FieldTable::with_order(q)?)
    }

    /// Turns on the pair-of-points line memo (q <= 16 only).
    pub fn with_line_cache(mut self) -> Result<Self> {
        if self.q() > MAX_Q_LINE_CACHE {
            return Err(Error::Capacity {
                n: self.n,
                q: self.q(),
                reason: "line memo needs q <= 16",
            });
        }
        self.line_cache = Some(Mutex::new(HashMap::new()));
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn field(&self) -> &FieldTable {
        &self.field
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn num_planes(&self) -> usize {
        self.planes.len()
    }

    /// Points on a line, q + 1.
    pub fn line_size(&self) -> usize {
        self.q() as usize + 1
    }

    /// Lines through a point: (q^n - 1) / (q - 1).
    pub fn lines_per_point(&self) -> usize {
        point_count(self.n - 1, self.q() as u64) as usize
    }

    /// Points on a plane of PG(3, q): q^2 + q + 1.
    pub fn plane_size(&self) -> usize {
        point_count(2, self.q() as u64) as usize
    }

    pub fn coords(&self, p: PointId) -> &[Elem] {
        &self.points[p as usize][..=self.n]
    }

    pub fn point(&self, p: PointId) -> Point {
        Point { index: p, coords: self.coords(p).to_vec() }
    }

    pub fn check_point(&self, p: PointId) -> Result<()> {
        if (p as usize) < self.points.len() {
            Ok(())
        } else {
            Err(Error::PointOutOfRange { index: p, points: self.points.len() })
        }
    }

    /// Scales `v` so its first nonzero entry is 1; `None` for the zero vector.
    pub fn normalize(&self, v: &Coords) -> Option<Coords> {
        let lead = v[..=self.n].iter().position(|&x| x != 0)?;
        let inv = self.field.inv(v[lead]).ok()?;
        let mut out = [0; 4];
        for j in lead..=self.n {
            out[j] = self.field.mul(v[j], inv);
        }
        Some(out)
    }

    /// Index of a normalized coordinate vector.
    fn index_normalized(&self, c: &Coords) -> PointId {
        let q = self.q() as u64;
        let lead = c[..=self.n].iter().position(|&x| x != 0).expect("normalized vector");
        // Points whose leading entry sits further right come first.
        let idx: u64 = (0..(self.n - lead) as u32).map(|i| q.pow(i)).sum();
        let mut tail = 0u64;
        for &x in &c[lead + 1..=self.n] {
            tail = tail * q + x as u64;
        }
        (idx + tail) as PointId
    }

    /// Index of the point with (not necessarily normalized) coordinates `v`.
    pub fn index_of(&self, v: &[Elem]) -> Result<PointId> {
        if v.len() != self.n + 1 || v.iter().any(|&x| x as u32 >= self.q()) {
            return Err(Error::InvalidCoords {
                coords: v.iter().map(|&x| x as u32).collect(),
                reason: "wrong length or entry outside the field",
            });
        }
        let mut c: Coords = [0; 4];
        c[..v.len()].copy_from_slice(v);
        let norm = self.normalize(&c).ok_or_else(|| Error::InvalidCoords {
            coords: v.iter().map(|&x| x as u32).collect(),
            reason: "zero vector",
        })?;
        Ok(self.index_normalized(&norm))
    }

    /// Index of normalize(a + lambda * b).
    #[inline]
    fn combine(&self, a: &Coords, b: &Coords, lambda: Elem) -> PointId {
        let mut v = [0; 4];
        for j in 0..=self.n {
            v[j] = a[j] ^ self.field.mul(lambda, b[j]);
        }
        let norm = self.normalize(&v).expect("distinct points are independent");
        self.index_normalized(&norm)
    }

    /// Calls `f` on every point of the line through `a` and `b` (unsorted,
    /// `a` and `b` first). No allocation.
    #[inline]
    pub fn for_each_on_line(&self, a: PointId, b: PointId, mut f: impl FnMut(PointId)) {
        let ca = self.points[a as usize];
        let cb = self.points[b as usize];
        f(a);
        f(b);
        for lambda in 1..self.q() {
            f(self.combine(&ca, &cb, lambda as Elem));
        }
    }

    fn span_line(&self, a: PointId, b: PointId) -> Vec<PointId> {
        let mut pts = Vec::with_capacity(self.line_size());
        self.for_each_on_line(a, b, |p| pts.push(p));
        pts.sort_unstable();
        pts
    }

    pub fn line_through(&self, a: PointId, b: PointId) -> Result<Line> {
        self.check_point(a)?;
        self.check_point(b)?;
        if a == b {
            return Err(Error::DegenerateLine(a));
        }
        let key = (a.min(b), a.max(b));
        if let Some(cache) = &self.line_cache {
            if let Some(hit) = cache.lock().expect("line cache poisoned").get(&key) {
                return Ok(Line { points: hit.to_vec() });
            }
            let pts = self.span_line(key.0, key.1);
            let shared: Arc<[PointId]> = pts.clone().into();
            let mut guard = cache.lock().expect("line cache poisoned");
            // Memoize under every pair of the line so later lookups hit too.
            for (i, &x) in pts.iter().enumerate() {
                for &y in &pts[i + 1..] {
                    guard.insert((x, y), shared.clone());
                }
            }
            return Ok(Line { points: pts });
        }
        Ok(Line { points: self.span_line(key.0, key.1) })
    }

    /// All lines through `p`, each sorted, in order of their smallest other point.
    pub fn lines_through_point(&self, p: PointId) -> Vec<Line> {
        let mut covered = vec![false; self.num_points()];
        covered[p as usize] = true;
        let mut lines = Vec::with_capacity(self.lines_per_point());
        for other in 0..self.num_points() as PointId {
            if covered[other as usize] {
                continue;
            }
            let pts = self.span_line(p, other);
            for &x in &pts {
                covered[x as usize] = true;
            }
            lines.push(Line { points: pts });
        }
        lines
    }

    /// Every line of the geometry, each emitted once (from its two smallest points).
    pub fn all_lines(&self) -> Vec<Line> {
        let mut lines = Vec::new();
        let total = self.num_points() as PointId;
        for a in 0..total {
            for b in a + 1..total {
                let mut smallest = PointId::MAX;
                let mut second = PointId::MAX;
                self.for_each_on_line(a, b, |p| {
                    if p < smallest {
                        second = smallest;
                        smallest = p;
                    } else if p < second {
                        second = p;
                    }
                });
                if smallest == a && second == b {
                    lines.push(Line { points: self.span_line(a, b) });
                }
            }
        }
        lines
    }

    fn dot(&self, u: &Coords, v: &Coords) -> Elem {
        (0..=self.n).fold(0, |acc, j| acc ^ self.field.mul(u[j], v[j]))
    }

    fn require_space(&self) -> Result<()> {
        if self.n == 3 {
            Ok(())
        } else {
            Err(Error::Dimension(self.n))
        }
    }

    /// Incidence test between plane `plane` and point `p` (n = 3).
    #[inline]
    pub fn on_plane(&self, plane: PointId, p: PointId) -> bool {
        self.dot(&self.planes[plane as usize], &self.points[p as usize]) == 0
    }

    pub fn plane_dual(&self, plane: PointId) -> &[Elem] {
        &self.planes[plane as usize][..=self.n]
    }

    /// Sorted point list of a plane; computed on first use and then kept.
    pub fn plane_points(&self, plane: PointId) -> &[PointId] {
        self.plane_points[plane as usize].get_or_init(|| {
            (0..self.num_points() as PointId).filter(|&p| self.on_plane(plane, p)).collect()
        })
    }

    pub fn plane(&self, plane: PointId) -> Plane {
        Plane {
            index: plane,
            dual_coords: self.plane_dual(plane).to_vec(),
            points: self.plane_points(plane).to_vec(),
        }
    }

    /// Planes containing the line `l`, ascending by index. Requires n = 3.
    pub fn planes_through_line(&self, l: &Line) -> Result<Vec<PointId>> {
        self.require_space()?;
        let (a, b) = match l.points.as_slice() {
            [a, b, ..] => (*a, *b),
            _ => return Err(Error::Precondition("line needs at least two points".into())),
        };
        Ok((0..self.num_planes() as PointId)
            .filter(|&pl| self.on_plane(pl, a) && self.on_plane(pl, b))
            .collect())
    }

    /// Applies a linear map (rows of `m`) to a point; `None` if the image is zero.
    pub fn apply(&self, m: &[[Elem; 4]; 4], p: PointId) -> Option<PointId> {
        let c = self.points[p as usize];
        let mut v = [0; 4];
        for (i, row) in m.iter().enumerate().take(self.n + 1) {
            v[i] = self.dot(row, &c);
        }
        self.normalize(&v).map(|norm| self.index_normalized(&norm))
    }

    /// Rank over GF(q) of the given vectors (length n + 1 each).
    pub fn rank(&self, rows: &[Coords]) -> usize {
        let f = &self.field;
        let mut m: Vec<Coords> = rows.to_vec();
        let mut rank = 0;
        for col in 0..=self.n {
            let Some(pivot) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
                continue;
            };
            m.swap(rank, pivot);
            let inv = f.inv(m[rank][col]).expect("pivot is nonzero");
            let prow = m[rank];
            for (r, row) in m.iter_mut().enumerate() {
                if r != rank && row[col] != 0 {
                    let factor = f.mul(row[col], inv);
                    for j in 0..=self.n {
                        row[j] ^= f.mul(factor, prow[j]);
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn raw_coords(&self, p: PointId) -> Coords {
        self.points[p as usize]
    }

    pub fn all_points(&self) -> impl Iterator<Item = PointId> {
        0..self.num_points() as PointId
    }
}

/// Free-function form of [`Geometry::build`].
pub fn build_pg(n: usize, field: FieldTable) -> Result<Geometry> {
    Geometry::build(n, field)
}

#[derive(Debug, Serialize)]
pub struct GeometryDump {
    pub n: usize,
    pub q: u32,
    pub modulus: u32,
    pub points: Vec<Point>,
    pub planes: Vec<Plane>,
}

impl Geometry {
    pub fn dump(&self) -> GeometryDump {
        GeometryDump {
            n: self.n,
            q: self.q(),
            modulus: self.field.modulus(),
            points: self.all_points().map(|p| self.point(p)).collect(),
            planes: (0..self.num_planes() as PointId).map(|pl| self.plane(pl)).collect(),
        }
    }
}
