//! Brute-force oracles shared by the integration tests. Nothing here uses
//! the library's incidence code: collinearity is a rank computation on raw
//! coordinates and plane incidence is a dot product.

#![allow(dead_code)]

use pgcaps::geometry::{Geometry, PointId};
use pgcaps::gf2e::{Elem, FieldTable};

/// Rank of a list of vectors over GF(q) by Gaussian elimination.
pub fn rank(f: &FieldTable, rows: &[Vec<Elem>]) -> usize {
    let mut m: Vec<Vec<Elem>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, piv);
        let inv = f.inv(m[r][c]).unwrap();
        let pivot_row: Vec<Elem> = m[r].iter().map(|&x| f.mul(x, inv)).collect();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let factor = row[c];
                for (x, &p) in row.iter_mut().zip(&pivot_row) {
                    *x ^= f.mul(factor, p);
                }
            }
        }
        m[r] = pivot_row;
        r += 1;
    }
    r
}

pub fn coords(g: &Geometry, p: PointId) -> Vec<Elem> {
    g.coords(p).to_vec()
}

pub fn collinear(g: &Geometry, a: PointId, b: PointId, c: PointId) -> bool {
    rank(g.field(), &[coords(g, a), coords(g, b), coords(g, c)]) < 3
}

/// No three collinear, by checking every triple.
pub fn is_arc_brute(g: &Geometry, pts: &[PointId]) -> bool {
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            for k in j + 1..pts.len() {
                if collinear(g, pts[i], pts[j], pts[k]) {
                    return false;
                }
            }
        }
    }
    true
}

/// Every point off the set lies on a secant.
pub fn is_complete_brute(g: &Geometry, pts: &[PointId]) -> bool {
    g.all_points().filter(|x| !pts.contains(x)).all(|x| {
        (0..pts.len()).any(|i| (i + 1..pts.len()).any(|j| collinear(g, x, pts[i], pts[j])))
    })
}

pub fn dot(f: &FieldTable, u: &[Elem], v: &[Elem]) -> Elem {
    u.iter().zip(v).fold(0, |acc, (&a, &b)| acc ^ f.mul(a, b))
}

/// Number of members y such that no other member lies on the line xy.
pub fn sigma1_brute(g: &Geometry, pts: &[PointId], x: PointId) -> usize {
    pts.iter()
        .filter(|&&y| !pts.iter().any(|&z| z != y && collinear(g, x, y, z)))
        .count()
}

/// x -> number of planes meeting the set in x points; planes are taken as
/// the dual of the normalized coordinate vectors.
pub fn profile_brute(g: &Geometry, pts: &[PointId]) -> std::collections::BTreeMap<usize, usize> {
    let mut profile = std::collections::BTreeMap::new();
    for plane in g.all_points() {
        let u = coords(g, plane);
        let x = pts.iter().filter(|&&p| dot(g.field(), &u, g.coords(p)) == 0).count();
        *profile.entry(x).or_insert(0) += 1;
    }
    profile
}
