//! Extremal objects: the elliptic quadric of PG(3, q), the conic plus
//! nucleus hyperoval of PG(2, q), and the affine 2^n-cap of PG(n, 2).

use serde::Serialize;

use crate::arcs::Arc;
use crate::caps::Cap;
use crate::error::{Error, Result};
use crate::geometry::{Geometry, PointId};
use crate::gf2e::Elem;
use crate::pointset::PointSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstructionKind {
    EllipticQuadric,
    HyperovalConic,
    BinaryAffine,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstructionSpec {
    pub kind: ConstructionKind,
    pub q: u32,
    pub n: usize,
    /// `a` with x^2 + x + a irreducible; elliptic quadric only.
    pub irreducible_parameter: Option<Elem>,
}

/// Smallest field element of absolute trace 1.
pub fn quadric_parameter(g: &Geometry) -> Result<Elem> {
    g.field()
        .least_trace_one()
        .ok_or_else(|| Error::Internal(format!("GF({}) has no element of trace 1", g.q())))
}

/// The elliptic quadric x0 x1 = x2^2 + x2 x3 + a x3^2, with `a` the smallest
/// trace-1 element. It has q^2 + 1 points. For q = 2 this is a complete
/// 5-cap rather than a largest cap.
pub fn elliptic_quadric(g: &Geometry) -> Result<(Cap, ConstructionSpec)> {
    if g.n() != 3 {
        return Err(Error::Dimension(g.n()));
    }
    let f = g.field();
    let a = quadric_parameter(g)?;
    let points = g.all_points().filter(|&p| {
        let c = g.coords(p);
        let lhs = f.mul(c[0], c[1]);
        let rhs = f.square(c[2]) ^ f.mul(c[2], c[3]) ^ f.mul(a, f.square(c[3]));
        lhs == rhs
    });
    let set = PointSet::new(g, points)?;
    let expected = (g.q() * g.q() + 1) as usize;
    if set.len() != expected {
        return Err(Error::Internal(format!(
            "quadric has {} points, expected {expected}",
            set.len()
        )));
    }
    let cap = Cap::new(g, set.members().iter().copied())?;
    let spec = ConstructionSpec {
        kind: ConstructionKind::EllipticQuadric,
        q: g.q(),
        n: 3,
        irreducible_parameter: Some(a),
    };
    Ok((cap, spec))
}

/// Points of the conic x1^2 = x0 x2: (1, t, t^2) for t in GF(q) and (0, 0, 1).
pub fn conic_points(g: &Geometry) -> Result<Vec<PointId>> {
    if g.n() != 2 {
        return Err(Error::Dimension(g.n()));
    }
    let f = g.field();
    let mut pts = f
        .elements()
        .map(|t| g.index_of(&[1, t, f.square(t)]))
        .collect::<Result<Vec<_>>>()?;
    pts.push(g.index_of(&[0, 0, 1])?);
    Ok(pts)
}

/// The conic together with its nucleus (0, 1, 0): a (q + 2)-arc.
pub fn hyperoval_conic(g: &Geometry) -> Result<(Arc, ConstructionSpec)> {
    let mut pts = conic_points(g)?;
    pts.push(g.index_of(&[0, 1, 0])?);
    let arc = Arc::new(g, pts)?;
    let spec = ConstructionSpec {
        kind: ConstructionKind::HyperovalConic,
        q: g.q(),
        n: 2,
        irreducible_parameter: None,
    };
    Ok((arc, spec))
}

#[derive(Debug)]
pub struct BinaryAffineCap {
    pub n: usize,
    pub size: u64,
    /// PG(3, 2) and the cap inside it; `None` for n >= 4.
    pub materialized: Option<(Geometry, Cap)>,
}

/// The 2^n points of PG(n, 2) off the hyperplane x0 = 0. Only n = 3 is
/// built point by point.
pub fn binary_affine_cap(n: usize) -> Result<BinaryAffineCap> {
    if n < 3 {
        return Err(Error::Range(format!("binary affine cap needs n >= 3, got {n}")));
    }
    if n >= 64 {
        return Err(Error::Range(format!("2^{n} does not fit in 64 bits")));
    }
    let size = 1u64 << n;
    if n > 3 {
        return Ok(BinaryAffineCap { n, size, materialized: None });
    }
    let g = Geometry::build_pg(3, 2)?;
    let cap = Cap::new(&g, g.all_points().filter(|&p| g.coords(p)[0] != 0))?;
    Ok(BinaryAffineCap { n, size, materialized: Some((g, cap)) })
}
