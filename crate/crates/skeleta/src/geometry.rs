//! Exact rational linear algebra at desk scale: Gaussian elimination,
//! integer kernels via column Hermite reduction, and vertex/ray
//! enumeration for rational polyhedra given by inequalities.
//!
//! Everything here works over `Rat = Ratio<i128>`. Inputs are small
//! (dimension <= 8, a few dozen constraints), so dense enumeration of
//! basis subsets is fine and keeps the arithmetic exact.

use num_rational::Ratio;
use num_traits::{One, Zero};

pub type Int = i128;
pub type Rat = Ratio<Int>;

pub fn rat(p: Int, q: Int) -> Rat {
    Ratio::new(p, q)
}

pub fn rat_int(p: Int) -> Rat {
    Ratio::from_integer(p)
}

/// Formats a rational as `p` or `p/q` (the CLI literal syntax).
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_ir(a: &[Int], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| Rat::from_integer(*x) * y).sum()
}

pub fn dot_ii(a: &[Int], b: &[Int]) -> Int {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn gcd(a: Int, b: Int) -> Int {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn gcd_int(a: Int, b: Int) -> Int {
    gcd(a, b).max(1)
}

/// Clears denominators and divides by the content, preserving direction.
pub fn primitive(v: &[Rat]) -> Vec<Int> {
    if v.iter().all(|x| x.is_zero()) {
        return vec![0; v.len()];
    }
    let mut l: Int = 1;
    for x in v {
        l = l / gcd(l, *x.denom()) * *x.denom();
    }
    let ints: Vec<Int> = v.iter().map(|x| x.numer() * (l / x.denom())).collect();
    let mut g = 0;
    for x in &ints {
        g = gcd(g, *x);
    }
    ints.iter().map(|x| x / g).collect()
}

pub fn primitive_int(v: &[Int]) -> Vec<Int> {
    let mut g = 0;
    for x in v {
        g = gcd(g, *x);
    }
    if g == 0 {
        return v.to_vec();
    }
    v.iter().map(|x| x / g).collect()
}

/// Solves the square system `a x = b` exactly. Returns `None` when `a`
/// is singular.
pub fn solve_square(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    if n == 0 {
        return Some(vec![]);
    }
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let p = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x = &*x / &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=n {
                    let sub = &f * &m[col][c];
                    m[r][c] = &m[r][c] - &sub;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Rank of a rational matrix.
pub fn rank(rows: &[Vec<Rat>]) -> usize {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        if let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) {
            m.swap(rank, p);
            let pv = m[rank][col].clone();
            for r in 0..m.len() {
                if r != rank && !m[r][col].is_zero() {
                    let f = &m[r][col] / &pv;
                    for c in 0..ncols {
                        let sub = &f * &m[rank][c];
                        m[r][c] = &m[r][c] - &sub;
                    }
                }
            }
            rank += 1;
        }
    }
    rank
}

/// Basis of the rational kernel {x : rows * x = 0}.
pub fn kernel_basis(rows: &[Vec<Rat>], dim: usize) -> Vec<Vec<Rat>> {
    let mut m: Vec<Vec<Rat>> = rows.iter().filter(|r| !r.iter().all(|x| x.is_zero())).cloned().collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..dim {
        if let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) {
            m.swap(row, p);
            let pv = m[row][col].clone();
            for x in m[row].iter_mut() {
                *x = &*x / &pv;
            }
            for r in 0..m.len() {
                if r != row && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for c in 0..dim {
                        let sub = &f * &m[row][c];
                        m[r][c] = &m[r][c] - &sub;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
    }
    let mut basis = Vec::new();
    for free in 0..dim {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); dim];
        v[free] = Rat::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Exact basis of the integer kernel {v in Z^dim : rows * v = 0}.
///
/// Column-reduces an identity-augmented copy of the matrix with
/// unimodular operations; the columns that reduce the matrix to zero
/// form a saturated (hence exact) lattice basis.
pub fn integer_kernel(rows: &[Vec<Int>], dim: usize) -> Vec<Vec<Int>> {
    let nrows = rows.len();
    // work columns: dim columns, each carrying the matrix column plus a
    // unimodular bookkeeping tail
    let mut cols: Vec<(Vec<Int>, Vec<Int>)> = (0..dim)
        .map(|j| {
            let col: Vec<Int> = rows.iter().map(|r| r[j]).collect();
            let mut tail = vec![0; dim];
            tail[j] = 1;
            (col, tail)
        })
        .collect();
    let mut used = 0;
    for r in 0..nrows {
        loop {
            // find the column with the smallest nonzero entry in row r
            let mut best: Option<usize> = None;
            for (j, c) in cols.iter().enumerate().skip(used) {
                if c.0[r] != 0 && best.map_or(true, |b| c.0[r].abs() < cols[b].0[r].abs()) {
                    best = Some(j);
                }
            }
            let Some(b) = best else { break };
            cols.swap(used, b);
            let pivot = cols[used].0[r];
            let mut done = true;
            for j in used + 1..cols.len() {
                let q = div_round(cols[j].0[r], pivot);
                if q != 0 {
                    for i in 0..nrows {
                        cols[j].0[i] -= q * cols[used].0[i];
                    }
                    for i in 0..dim {
                        cols[j].1[i] -= q * cols[used].1[i];
                    }
                }
                if cols[j].0[r] != 0 {
                    done = false;
                }
            }
            if done {
                used += 1;
                break;
            }
        }
    }
    cols[used..]
        .iter()
        .filter(|c| c.0.iter().all(|&x| x == 0))
        .map(|c| c.1.clone())
        .collect()
}

fn div_round(a: Int, b: Int) -> Int {
    // round a/b to the nearest integer (ties toward zero); keeps the
    // Euclidean-style reduction shrinking
    let q = a / b;
    let r = a - q * b;
    if 2 * r.abs() > b.abs() {
        q + if (a < 0) == (b < 0) { 1 } else { -1 }
    } else {
        q
    }
}

/// A halfspace `<normal, x> <= offset`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfSpace {
    pub normal: Vec<Rat>,
    pub offset: Rat,
}

impl HalfSpace {
    pub fn new(normal: Vec<Rat>, offset: Rat) -> Self {
        HalfSpace { normal, offset }
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        dot(&self.normal, x) <= self.offset
    }

    pub fn active_at(&self, x: &[Rat]) -> bool {
        dot(&self.normal, x) == self.offset
    }
}

/// V-representation of a rational polyhedron: affine span decomposes as
/// conv(vertices) + cone(rays) + span(lineality). `vertices` is empty
/// iff the polyhedron is empty (after quotienting lineality, a nonempty
/// pointed polyhedron always has a vertex).
#[derive(Debug, Clone)]
pub struct VRep {
    pub vertices: Vec<Vec<Rat>>,
    pub rays: Vec<Vec<Int>>,
    pub lineality: Vec<Vec<Int>>,
}

impl VRep {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Enumerates the V-representation of {x : constraints}. Equalities are
/// passed as pairs of opposite halfspaces by the caller.
pub fn v_representation(halfspaces: &[HalfSpace], dim: usize) -> VRep {
    if dim == 0 {
        // the zero-dimensional space: a single point unless some constant
        // constraint is violated
        let feasible = halfspaces.iter().all(|h| Rat::zero() <= h.offset);
        return VRep {
            vertices: if feasible { vec![vec![]] } else { vec![] },
            rays: vec![],
            lineality: vec![],
        };
    }
    // lineality: directions annihilated by every normal
    let normal_rows: Vec<Vec<Int>> = halfspaces.iter().map(|h| primitive(&h.normal)).collect();
    let lineality = integer_kernel(&normal_rows, dim);
    // pin lineality directions to zero so the remaining polyhedron is pointed
    let mut pinned: Vec<HalfSpace> = halfspaces.to_vec();
    for l in &lineality {
        let n: Vec<Rat> = l.iter().map(|&x| rat_int(x)).collect();
        pinned.push(HalfSpace::new(n.clone(), Rat::zero()));
        pinned.push(HalfSpace::new(n.iter().map(|x| -x).collect(), Rat::zero()));
    }
    let vertices = enumerate_vertices(&pinned, dim);
    let rays = enumerate_rays(&pinned, dim);
    VRep {
        vertices,
        rays,
        lineality,
    }
}

fn enumerate_vertices(halfspaces: &[HalfSpace], dim: usize) -> Vec<Vec<Rat>> {
    let m = halfspaces.len();
    let mut verts: Vec<Vec<Rat>> = Vec::new();
    let mut idx: Vec<usize> = (0..dim).collect();
    if dim > m {
        return verts;
    }
    loop {
        let a: Vec<Vec<Rat>> = idx.iter().map(|&i| halfspaces[i].normal.clone()).collect();
        let b: Vec<Rat> = idx.iter().map(|&i| halfspaces[i].offset.clone()).collect();
        if let Some(x) = solve_square(&a, &b) {
            if halfspaces.iter().all(|h| h.contains(&x)) && !verts.contains(&x) {
                verts.push(x);
            }
        }
        // next combination
        let mut i = dim;
        loop {
            if i == 0 {
                verts.sort();
                return verts;
            }
            i -= 1;
            if idx[i] != i + m - dim {
                idx[i] += 1;
                for j in i + 1..dim {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn enumerate_rays(halfspaces: &[HalfSpace], dim: usize) -> Vec<Vec<Int>> {
    let m = halfspaces.len();
    if dim == 0 {
        return vec![];
    }
    let mut rays: Vec<Vec<Int>> = Vec::new();
    // extreme rays of the recession cone {x : <n,x> <= 0}: kernels of
    // (dim-1)-subsets with active rank dim-1
    let k = dim - 1;
    let mut subsets: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..k {
        let mut next = Vec::new();
        for s in &subsets {
            let start = s.last().map_or(0, |&x| x + 1);
            for i in start..m {
                let mut t = s.clone();
                t.push(i);
                next.push(t);
            }
        }
        subsets = next;
    }
    for s in &subsets {
        let rows: Vec<Vec<Rat>> = s.iter().map(|&i| halfspaces[i].normal.clone()).collect();
        let ker = kernel_basis(&rows, dim);
        if ker.len() != 1 {
            continue;
        }
        for dir in [primitive(&ker[0]), primitive(&ker[0]).iter().map(|x| -x).collect()] {
            let dr: Vec<Rat> = dir.iter().map(|&x| rat_int(x)).collect();
            if dir.iter().all(|&x| x == 0) {
                continue;
            }
            if !halfspaces.iter().all(|h| dot(&h.normal, &dr) <= Rat::zero()) {
                continue;
            }
            // extremality: active normals span a hyperplane
            let active: Vec<Vec<Rat>> = halfspaces
                .iter()
                .filter(|h| dot(&h.normal, &dr).is_zero())
                .map(|h| h.normal.clone())
                .collect();
            if rank(&active) == dim - 1 && !rays.contains(&dir) {
                rays.push(dir);
            }
        }
    }
    // a ray without extremality structure can only happen when the cone is
    // a single ray in a low-dimensional span; catch dim == 1 directly
    if dim == 1 {
        for d in [vec![1], vec![-1]] {
            let dr = vec![rat_int(d[0])];
            if halfspaces.iter().all(|h| dot(&h.normal, &dr) <= Rat::zero())
                && halfspaces.iter().any(|h| !dot(&h.normal, &dr).is_zero())
                && !rays.contains(&d)
            {
                rays.push(d);
            }
        }
        // keep only directions not cancelled by an opposite ray (that would
        // be lineality, already pinned by the caller)
    }
    rays.sort();
    rays
}

/// Row Hermite normal form of a small integer matrix: echelon rows with
/// positive pivots and entries above each pivot reduced into [0, pivot).
pub fn row_hnf(rows: &[Vec<Int>]) -> Vec<Vec<Int>> {
    let mut m: Vec<Vec<Int>> = rows.iter().filter(|r| r.iter().any(|&x| x != 0)).cloned().collect();
    let dim = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..dim {
        if r == m.len() {
            break;
        }
        loop {
            let pivot = (r..m.len())
                .filter(|&i| m[i][c] != 0)
                .min_by_key(|&i| m[i][c].abs());
            let Some(p) = pivot else { break };
            m.swap(r, p);
            let mut done = true;
            for i in r + 1..m.len() {
                let q = div_round(m[i][c], m[r][c]);
                if q != 0 {
                    for j in 0..dim {
                        m[i][j] -= q * m[r][j];
                    }
                }
                if m[i][c] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if m[r][c] != 0 {
            if m[r][c] < 0 {
                for x in m[r].iter_mut() {
                    *x = -*x;
                }
            }
            let pv = m[r][c];
            for i in 0..r {
                let q = m[i][c].div_euclid(pv);
                if q != 0 {
                    for j in 0..dim {
                        m[i][j] -= q * m[r][j];
                    }
                }
            }
            r += 1;
        }
    }
    m.truncate(r);
    m
}

/// Reduces `point` to the canonical representative of `point + lattice`.
/// Internally HNF-reduces the basis, so any generating set of the same
/// lattice yields the same representative.
pub fn reduce_mod_lattice(point: &[Int], lattice: &[Vec<Int>]) -> Vec<Int> {
    let mut p = point.to_vec();
    if lattice.is_empty() {
        return p;
    }
    let hnf = row_hnf(lattice);
    for row in &hnf {
        let c = row.iter().position(|&x| x != 0).unwrap();
        let q = p[c].div_euclid(row[c]);
        if q != 0 {
            for (pi, vi) in p.iter_mut().zip(row) {
                *pi -= q * vi;
            }
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_square_systems() {
        let a = vec![
            vec![rat_int(2), rat_int(1)],
            vec![rat_int(1), rat_int(-1)],
        ];
        let b = vec![rat_int(3), rat_int(0)];
        let x = solve_square(&a, &b).unwrap();
        assert_eq!(x, vec![rat_int(1), rat_int(1)]);
        let singular = vec![
            vec![rat_int(1), rat_int(2)],
            vec![rat_int(2), rat_int(4)],
        ];
        assert!(solve_square(&singular, &b).is_none());
    }

    #[test]
    fn integer_kernel_is_saturated() {
        // kernel of (2, -4) is generated by (2, 1), not (4, 2)
        let k = integer_kernel(&[vec![2, -4]], 2);
        assert_eq!(k.len(), 1);
        let v = primitive_int(&k[0]);
        assert!(v == vec![2, 1] || v == vec![-2, -1]);
    }

    #[test]
    fn vertex_enumeration_square() {
        // unit square 0 <= x,y <= 1
        let hs = vec![
            HalfSpace::new(vec![rat_int(1), rat_int(0)], rat_int(1)),
            HalfSpace::new(vec![rat_int(-1), rat_int(0)], rat_int(0)),
            HalfSpace::new(vec![rat_int(0), rat_int(1)], rat_int(1)),
            HalfSpace::new(vec![rat_int(0), rat_int(-1)], rat_int(0)),
        ];
        let v = v_representation(&hs, 2);
        assert_eq!(v.vertices.len(), 4);
        assert!(v.rays.is_empty());
        assert!(v.lineality.is_empty());
    }

    #[test]
    fn vertex_enumeration_quadrant() {
        // {x <= 1, y <= 1}: one vertex, two rays, no lineality
        let hs = vec![
            HalfSpace::new(vec![rat_int(1), rat_int(0)], rat_int(1)),
            HalfSpace::new(vec![rat_int(0), rat_int(1)], rat_int(1)),
        ];
        let v = v_representation(&hs, 2);
        assert_eq!(v.vertices, vec![vec![rat_int(1), rat_int(1)]]);
        assert_eq!(v.rays.len(), 2);
        assert!(v.rays.contains(&vec![-1, 0]));
        assert!(v.rays.contains(&vec![0, -1]));
    }

    #[test]
    fn lineality_detected() {
        // {x <= 0} in the plane: lineality along y
        let hs = vec![HalfSpace::new(vec![rat_int(1), rat_int(0)], Rat::zero())];
        let v = v_representation(&hs, 2);
        assert_eq!(v.lineality.len(), 1);
        assert_eq!(v.vertices.len(), 1);
        assert_eq!(v.rays.len(), 1);
    }

    #[test]
    fn empty_polyhedron() {
        let hs = vec![
            HalfSpace::new(vec![rat_int(1)], rat_int(0)),
            HalfSpace::new(vec![rat_int(-1)], rat_int(-1)),
        ];
        let v = v_representation(&hs, 1);
        assert!(v.is_empty());
    }
}
