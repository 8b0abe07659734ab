//! Independent oracles for the integration tests. Nothing here calls into
//! the library; all arithmetic is over `Ratio<i64>` on small inputs.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

pub type Q = Ratio<i64>;

pub fn q(x: i64) -> Q {
    Q::from_integer(x)
}

/// Solve a square system by Gaussian elimination; `None` if singular.
pub fn solve(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col] / a[col][col];
                for c in col..n {
                    let t = a[col][c];
                    a[r][c] -= f * t;
                }
                let t = b[col];
                b[r] -= f * t;
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

fn dot(x: &[i64], y: &[Q]) -> Q {
    x.iter().zip(y).map(|(a, b)| q(*a) * b).sum()
}

/// Every integer point of the box spanned by `lo..=hi` in each coordinate.
pub fn box_points(lo: &[i64], hi: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for (l, h) in lo.iter().zip(hi) {
        out = out.into_iter().flat_map(|p| (*l..=*h).map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    out
}

/// Barycentric coordinates of lattice points in a full-dimensional simplex.
pub struct Simplex {
    pub vertices: Vec<Vec<Q>>,
    /// Points of the bounding box inside the simplex, with coordinates.
    pub points: Vec<(Vec<i64>, Vec<Q>)>,
}

impl Simplex {
    pub fn new(vertices: Vec<Vec<Q>>) -> Self {
        let n = vertices[0].len();
        let lo: Vec<i64> = (0..n).map(|i| vertices.iter().map(|v| v[i].floor().to_integer()).min().unwrap()).collect();
        let hi: Vec<i64> = (0..n).map(|i| vertices.iter().map(|v| v[i].ceil().to_integer()).max().unwrap()).collect();
        // Rows: coordinates, then the all-ones row; columns: vertices.
        let mut m: Vec<Vec<Q>> = (0..n).map(|i| vertices.iter().map(|v| v[i]).collect()).collect();
        m.push(vec![Q::one(); n + 1]);
        let points = box_points(&lo, &hi)
            .into_iter()
            .filter_map(|x| {
                let mut rhs: Vec<Q> = x.iter().map(|&c| q(c)).collect();
                rhs.push(Q::one());
                let lam = solve(m.clone(), rhs).expect("simplex is full-dimensional");
                lam.iter().all(|l| !l.is_negative()).then_some((x, lam))
            })
            .collect();
        Simplex { vertices, points }
    }

    pub fn from_ints(vertices: &[Vec<i64>]) -> Self {
        Self::new(vertices.iter().map(|v| v.iter().map(|&x| q(x)).collect()).collect())
    }

    /// Points whose positive barycentric coordinates are exactly `support`.
    pub fn relint_points_of(&self, support: &[usize]) -> Vec<Vec<i64>> {
        self.points
            .iter()
            .filter(|(_, lam)| (0..lam.len()).all(|i| support.contains(&i) == lam[i].is_positive()))
            .map(|(x, _)| x.clone())
            .collect()
    }

    /// Number of facets through the point (zero barycentric coordinates).
    pub fn facets_through(lam: &[Q]) -> usize {
        lam.iter().filter(|l| l.is_zero()).count()
    }

    /// Vertices of `{y : <v, y> >= -1}`; vertex `j` is opposite facet `j`
    /// in the sense that it is tight on every `v_i` with `i != j`.
    pub fn dual(&self) -> Simplex {
        let m = self.vertices.len();
        let verts = (0..m)
            .map(|j| {
                let rows: Vec<Vec<Q>> = (0..m).filter(|&i| i != j).map(|i| self.vertices[i].clone()).collect();
                solve(rows, vec![q(-1); m - 1]).expect("origin is interior")
            })
            .collect();
        Simplex::new(verts)
    }

    pub fn is_integral(&self) -> bool {
        self.vertices.iter().flatten().all(|x| x.is_integer())
    }
}

/// Face-by-face counts of the anticanonical correction for a reflexive
/// simplex, keyed by the vertex set of the codimension-two face.
pub struct SimplexCorrections {
    pub per_face: BTreeMap<Vec<usize>, (usize, usize)>,
    pub total: usize,
    pub maximal_rays: Vec<Vec<i64>>,
}

pub fn simplex_corrections(vertices: &[Vec<i64>]) -> SimplexCorrections {
    let s = Simplex::from_ints(vertices);
    let d = s.dual();
    let m = vertices.len();
    let mut per_face = BTreeMap::new();
    let mut total = 0;
    for a in 0..m {
        for b in a + 1..m {
            let face: Vec<usize> = (0..m).filter(|&i| i != a && i != b).collect();
            let f = s.relint_points_of(&face).len();
            let g = d.relint_points_of(&[a, b]).len();
            total += f * g;
            per_face.insert(face, (f, g));
        }
    }
    let maximal_rays = s.points.iter().filter(|(_, lam)| Simplex::facets_through(lam) >= 2).map(|(x, _)| x.clone()).collect();
    SimplexCorrections { per_face, total, maximal_rays }
}

/// `min { sum c_i rho_i : sum c_i r_i = x, c >= 0 }`, the largest convex
/// function below the lifted rays, by trying every basis.
pub fn lower_envelope(rays: &[Vec<i64>], rho: &[i64], x: &[i64]) -> Q {
    let n = x.len();
    let mut best: Option<Q> = None;
    for subset in subsets(rays.len(), n) {
        let a: Vec<Vec<Q>> = (0..n).map(|row| subset.iter().map(|&j| q(rays[j][row])).collect()).collect();
        let Some(c) = solve(a, x.iter().map(|&v| q(v)).collect()) else { continue };
        if c.iter().any(|v| v.is_negative()) {
            continue;
        }
        let cost: Q = subset.iter().zip(&c).map(|(&j, cj)| q(rho[j]) * cj).sum();
        best = Some(best.map_or(cost, |b: Q| b.min(cost)));
    }
    best.expect("complete fan covers x")
}

pub fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if m < k {
        return vec![];
    }
    let mut out = subsets(m - 1, k);
    for mut s in subsets(m - 1, k - 1) {
        s.push(m - 1);
        out.push(s);
    }
    out
}

/// `<x, y>` for an integer and a rational vector.
pub fn pair(x: &[i64], y: &[Q]) -> Q {
    dot(x, y)
}

/// Number of monomials of degree `d` in `k` variables.
pub fn stars_and_bars(d: u64, k: u64) -> u64 {
    let (n, r) = (d + k - 1, k - 1);
    (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
