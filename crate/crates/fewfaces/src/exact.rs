//! Exact rational volume of bounded slab bodies in low dimension.
//!
//! Vertices are found by exact solves of active constraint subsets
//! (k ≤ 3) or by incremental halfspace clipping from a verified bounding
//! box (4 ≤ k ≤ cap). The volume is the central fan over triangulated
//! facets: the origin is interior by symmetry, so K is partitioned into
//! cones over the facet triangulations and each simplex contributes
//! |det|/k!.
//!
//! Constraint indexing convention, used by `VertexList::active`:
//! index i < n is ⟨x,uᵢ⟩ ≤ 1 and index n+i is −⟨x,uᵢ⟩ ≤ 1.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::instance::SlabBody;
use crate::linalg::{self, Rat};

/// Exact vertex enumeration refuses dimensions above this unless the
/// caller raises the cap explicitly.
pub const DEFAULT_DIMENSION_CAP: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VolumeMethod {
    Exact,
    Mc,
}

impl VolumeMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            VolumeMethod::Exact => "exact",
            VolumeMethod::Mc => "mc",
        }
    }
}

/// A volume value together with how it was obtained. Confidence-interval
/// fields are present exactly when `method` is `Mc`.
#[derive(Debug, Clone)]
pub struct VolumeResult {
    pub volume: f64,
    /// Exact rational value, present when `method` is `Exact`.
    pub exact: Option<Rat>,
    pub kth_root: f64,
    pub method: VolumeMethod,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    /// Set when a Monte Carlo run scored zero hits: `volume` is then 0
    /// and only `ci_high` carries information.
    pub censored: bool,
}

impl VolumeResult {
    pub fn from_exact(vol: Rat, k: usize) -> Self {
        let volume = linalg::rat_to_f64(&vol);
        let kth_root = exact_kth_root(&vol, k);
        VolumeResult {
            volume,
            exact: Some(vol),
            kth_root,
            method: VolumeMethod::Exact,
            ci_low: None,
            ci_high: None,
            samples: None,
            seed: None,
            censored: false,
        }
    }
}

/// k-th root of an exact rational, exact when the value is a perfect
/// k-th power (so the cube reports kth_root = 2, not 1.9999…).
fn exact_kth_root(vol: &Rat, k: usize) -> f64 {
    if vol.is_zero() {
        return 0.0;
    }
    debug_assert!(vol.is_positive());
    let (num, den) = (vol.numer(), vol.denom());
    if k >= 1 && k <= u32::MAX as usize {
        let rn = num.nth_root(k as u32);
        let rd = den.nth_root(k as u32);
        if rn.pow(k as u32) == *num && rd.pow(k as u32) == *den {
            return linalg::rat_to_f64(&Rat::new(rn, rd));
        }
    }
    linalg::rat_to_f64(vol).powf(1.0 / k as f64)
}

/// All vertices of a bounded slab body, exact, with the set of tight
/// constraints per vertex.
#[derive(Debug, Clone)]
pub struct VertexList {
    pub k: usize,
    pub vertices: Vec<Vec<Rat>>,
    /// Sorted tight-constraint indices per vertex (see module docs for
    /// the indexing convention).
    pub active: Vec<Vec<usize>>,
}

impl VertexList {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

pub fn enumerate_vertices(body: &SlabBody) -> Result<VertexList> {
    enumerate_vertices_capped(body, DEFAULT_DIMENSION_CAP)
}

pub fn enumerate_vertices_capped(body: &SlabBody, cap: usize) -> Result<VertexList> {
    let k = body.k();
    if k > cap {
        return Err(Error::DimensionCapExceeded { k, cap });
    }
    if !body.is_bounded() {
        return Err(Error::UnboundedBody);
    }
    let verts = if k <= 3 {
        vertices_by_subset_solve(body)
    } else {
        vertices_by_clipping(body)
    };
    Ok(verts)
}

pub fn exact_volume(body: &SlabBody) -> Result<VolumeResult> {
    exact_volume_capped(body, DEFAULT_DIMENSION_CAP)
}

pub fn exact_volume_capped(body: &SlabBody, cap: usize) -> Result<VolumeResult> {
    let vl = enumerate_vertices_capped(body, cap)?;
    let vol = fan_volume(&vl, &constraint_normals(body));
    Ok(VolumeResult::from_exact(vol, body.k()))
}

/// The 2n outward functionals: +u₀…+u_{n−1}, then −u₀…−u_{n−1}.
fn constraint_normals(body: &SlabBody) -> Vec<Vec<Rat>> {
    let gens = body.generators().vectors();
    let mut normals: Vec<Vec<Rat>> = gens.to_vec();
    normals.extend(gens.iter().map(|u| u.iter().map(|e| -e.clone()).collect::<Vec<_>>()));
    normals
}

fn one() -> Rat {
    Rat::one()
}

/// Tight-constraint indices of `x` among `normals`.
fn active_set(normals: &[Vec<Rat>], x: &[Rat]) -> Vec<usize> {
    normals
        .iter()
        .enumerate()
        .filter(|(_, a)| linalg::dot(a, x) == one())
        .map(|(j, _)| j)
        .collect()
}

// ---------------------------------------------------------------------------
// k ≤ 3: exact solves over k-subsets of generators with sign patterns
// ---------------------------------------------------------------------------

fn vertices_by_subset_solve(body: &SlabBody) -> VertexList {
    let k = body.k();
    let gens = body.generators().vectors();
    let n = gens.len();
    let normals = constraint_normals(body);

    let mut found: BTreeSet<Vec<Rat>> = BTreeSet::new();
    let mut subset = vec![0usize; k];
    enumerate_subsets(n, k, &mut subset, 0, 0, &mut |idxs| {
        // sign of the first row is pinned to +1; the mirror vertex is
        // added explicitly below.
        for signs in 0..(1u32 << (k - 1)) {
            let rows: Vec<Vec<Rat>> = idxs
                .iter()
                .enumerate()
                .map(|(j, &i)| {
                    let flip = j > 0 && (signs >> (j - 1)) & 1 == 1;
                    if flip {
                        gens[i].iter().map(|e| -e.clone()).collect()
                    } else {
                        gens[i].clone()
                    }
                })
                .collect();
            let rhs = vec![one(); k];
            if let Some(q) = linalg::solve(&rows, &rhs) {
                if body.contains(&q) {
                    let neg: Vec<Rat> = q.iter().map(|e| -e.clone()).collect();
                    found.insert(q);
                    found.insert(neg);
                }
            }
        }
    });

    let vertices: Vec<Vec<Rat>> = found.into_iter().collect();
    let active = vertices.iter().map(|v| active_set(&normals, v)).collect();
    VertexList { k, vertices, active }
}

fn enumerate_subsets(
    n: usize,
    k: usize,
    buf: &mut Vec<usize>,
    depth: usize,
    start: usize,
    f: &mut impl FnMut(&[usize]),
) {
    if depth == k {
        f(buf);
        return;
    }
    for i in start..n {
        buf[depth] = i;
        enumerate_subsets(n, k, buf, depth + 1, i + 1, f);
    }
}

// ---------------------------------------------------------------------------
// 4 ≤ k ≤ cap: incremental clipping from a bounding box
// ---------------------------------------------------------------------------

struct ClipVertex {
    coords: Vec<Rat>,
    active: Vec<usize>,
}

/// Incremental vertex enumeration: start from an integer box that
/// strictly contains K (side bounds from the covering ellipsoid
/// Σ⟨uᵢ,x⟩² ≤ n), clip with each slab halfspace, and certify every new
/// vertex by an exact rank-k solve of its tight constraints. Coordinates
/// therefore stay solves of the original data and never accumulate
/// precision from the clip order.
fn vertices_by_clipping(body: &SlabBody) -> VertexList {
    let k = body.k();
    let slab_normals = constraint_normals(body);
    let n_slabs = slab_normals.len();

    // Box bounds: x_j² ≤ n·(M⁻¹)_jj on K for M = Σ uᵢuᵢᵀ.
    let m = linalg::gram(&transpose(body.generators().vectors(), k));
    let m_inv = linalg::inverse(&m).expect("bounded body has positive definite M");
    let n_rat = Rat::from_integer(BigInt::from(body.n() as u64));
    let box_bounds: Vec<BigInt> = (0..k)
        .map(|j| linalg::ceil_sqrt(&(&m_inv[j][j] * &n_rat)) + BigInt::one())
        .collect();

    // All constraints in ⟨a,x⟩ ≤ 1 form: slabs first, then ±e_j/b_j.
    let mut normals = slab_normals;
    for j in 0..k {
        let mut a = vec![Rat::zero(); k];
        a[j] = Rat::new(BigInt::one(), box_bounds[j].clone());
        normals.push(a);
    }
    for j in 0..k {
        let mut a = vec![Rat::zero(); k];
        a[j] = Rat::new(-BigInt::one(), box_bounds[j].clone());
        normals.push(a);
    }

    // Box corners.
    let mut verts: Vec<ClipVertex> = Vec::with_capacity(1 << k);
    for mask in 0..(1u32 << k) {
        let mut coords = Vec::with_capacity(k);
        let mut active = Vec::with_capacity(k);
        for j in 0..k {
            if (mask >> j) & 1 == 0 {
                coords.push(Rat::from_integer(box_bounds[j].clone()));
                active.push(n_slabs + j);
            } else {
                coords.push(Rat::from_integer(-box_bounds[j].clone()));
                active.push(n_slabs + k + j);
            }
        }
        active.sort_unstable();
        verts.push(ClipVertex { coords, active });
    }

    // processed = box constraints plus slabs clipped so far
    let mut processed: Vec<usize> = (n_slabs..n_slabs + 2 * k).collect();

    for h in 0..n_slabs {
        let vals: Vec<Rat> = verts.iter().map(|v| linalg::dot(&normals[h], &v.coords)).collect();
        let any_outside = vals.iter().any(|val| *val > one());
        if !any_outside {
            for (v, val) in verts.iter_mut().zip(&vals) {
                if *val == one() {
                    insert_sorted(&mut v.active, h);
                }
            }
            processed.push(h);
            continue;
        }

        let inside: Vec<usize> =
            (0..verts.len()).filter(|&i| vals[i] < one()).collect();
        let outside: Vec<usize> =
            (0..verts.len()).filter(|&i| vals[i] > one()).collect();

        let on_coords: BTreeSet<Vec<Rat>> = verts
            .iter()
            .zip(&vals)
            .filter(|(_, val)| **val == one())
            .map(|(v, _)| v.coords.clone())
            .collect();

        let mut fresh: BTreeSet<Vec<Rat>> = BTreeSet::new();
        for &vi in &inside {
            for &vo in &outside {
                let common = sorted_intersection(&verts[vi].active, &verts[vo].active);
                if common.len() < k - 1 {
                    continue;
                }
                let rows: Vec<Vec<Rat>> = common.iter().map(|&j| normals[j].clone()).collect();
                if linalg::rank(&rows) != k - 1 {
                    continue;
                }
                let mut system = rows;
                system.push(normals[h].clone());
                let Some(q) = solve_tight(&system, k) else { continue };
                if on_coords.contains(&q) || fresh.contains(&q) {
                    continue;
                }
                if processed.iter().chain([&h]).all(|&j| linalg::dot(&normals[j], &q) <= one()) {
                    fresh.insert(q);
                }
            }
        }

        processed.push(h);
        let mut next: Vec<ClipVertex> = Vec::new();
        for (i, v) in verts.into_iter().enumerate() {
            if vals[i] < one() {
                next.push(v);
            } else if vals[i] == one() {
                let mut v = v;
                insert_sorted(&mut v.active, h);
                next.push(v);
            }
        }
        for q in fresh {
            let mut active: Vec<usize> = processed
                .iter()
                .copied()
                .filter(|&j| linalg::dot(&normals[j], &q) == one())
                .collect();
            active.sort_unstable();
            next.push(ClipVertex { coords: q, active });
        }
        verts = next;
    }

    // The box strictly contains K, so no box constraint may be tight.
    for v in &verts {
        debug_assert!(v.active.iter().all(|&j| j < n_slabs));
    }

    let mut vertices: Vec<(Vec<Rat>, Vec<usize>)> = verts
        .into_iter()
        .map(|v| (v.coords, v.active.into_iter().filter(|&j| j < n_slabs).collect()))
        .collect();
    vertices.sort_by(|a, b| a.0.cmp(&b.0));
    let (vertices, active): (Vec<_>, Vec<_>) = vertices.into_iter().unzip();
    VertexList { k, vertices, active }
}

/// Rows of length k as columns: returns the k×n transposed layout used to
/// form M = Σ uᵢuᵢᵀ via a Gram product.
fn transpose(rows: &[Vec<Rat>], k: usize) -> Vec<Vec<Rat>> {
    (0..k)
        .map(|j| rows.iter().map(|r| r[j].clone()).collect())
        .collect()
}

/// Solves ⟨aⱼ,x⟩ = 1 over a set of normals with rank k: selects k
/// independent rows by elimination and solves the square system.
fn solve_tight(normals: &[Vec<Rat>], k: usize) -> Option<Vec<Rat>> {
    let chosen = independent_rows(normals, k)?;
    let rows: Vec<Vec<Rat>> = chosen.iter().map(|&i| normals[i].clone()).collect();
    linalg::solve(&rows, &vec![one(); k])
}

/// Indices of k linearly independent rows, or None if rank < k.
fn independent_rows(rows: &[Vec<Rat>], k: usize) -> Option<Vec<usize>> {
    let mut m: Vec<(usize, Vec<Rat>)> =
        rows.iter().enumerate().map(|(i, r)| (i, r.clone())).collect();
    let mut chosen = Vec::with_capacity(k);
    let mut row = 0;
    for c in 0..k {
        let piv = (row..m.len()).find(|&i| !m[i].1[c].is_zero());
        let Some(piv) = piv else { continue };
        m.swap(row, piv);
        chosen.push(m[row].0);
        let inv = m[row].1[c].clone();
        for i in row + 1..m.len() {
            if m[i].1[c].is_zero() {
                continue;
            }
            let f = &m[i].1[c] / &inv;
            for j in c..k {
                let sub = &f * &m[row].1[j];
                m[i].1[j] -= sub;
            }
        }
        row += 1;
        if row == k {
            break;
        }
    }
    if chosen.len() == k {
        chosen.sort_unstable();
        Some(chosen)
    } else {
        None
    }
}

fn insert_sorted(v: &mut Vec<usize>, x: usize) {
    if let Err(pos) = v.binary_search(&x) {
        v.insert(pos, x);
    }
}

fn sorted_intersection(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Volume: central fan over recursively triangulated facets
// ---------------------------------------------------------------------------

fn fan_volume(vl: &VertexList, normals: &[Vec<Rat>]) -> Rat {
    let k = vl.k;
    if vl.vertices.is_empty() {
        return Rat::zero();
    }
    let mut seen_facets: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut total = Rat::zero();
    for j in 0..normals.len() {
        let face: Vec<usize> = (0..vl.len())
            .filter(|&i| vl.active[i].binary_search(&j).is_ok())
            .collect();
        if face.len() < k || !seen_facets.insert(face.clone()) {
            continue;
        }
        if affine_rank(vl, &face) != k - 1 {
            continue;
        }
        for simplex in triangulate(vl, &face, k - 1) {
            let rows: Vec<Vec<Rat>> =
                simplex.iter().map(|&i| vl.vertices[i].clone()).collect();
            total += linalg::det(&rows).abs();
        }
    }
    let mut k_fact = BigInt::one();
    for i in 2..=k {
        k_fact *= BigInt::from(i as u64);
    }
    total / Rat::from_integer(k_fact)
}

/// Triangulates a d-dimensional face into d-simplices (vertex index
/// lists of length d+1) by fanning from the face's first vertex over its
/// sub-facets.
fn triangulate(vl: &VertexList, face: &[usize], d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        debug_assert_eq!(face.len(), 1);
        return vec![face.to_vec()];
    }
    let anchor = face[0];
    let mut simplices = Vec::new();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for j in candidate_constraints(vl, face) {
        let sub: Vec<usize> = face
            .iter()
            .copied()
            .filter(|&i| vl.active[i].binary_search(&j).is_ok())
            .collect();
        if sub.len() < d || sub.len() == face.len() {
            continue;
        }
        if sub.contains(&anchor) || !seen.insert(sub.clone()) {
            continue;
        }
        if affine_rank(vl, &sub) != d - 1 {
            continue;
        }
        for mut t in triangulate(vl, &sub, d - 1) {
            t.insert(0, anchor);
            simplices.push(t);
        }
    }
    simplices
}

/// Constraints tight on some but not all vertices of the face.
fn candidate_constraints(vl: &VertexList, face: &[usize]) -> Vec<usize> {
    let mut counts: std::collections::BTreeMap<usize, usize> = Default::default();
    for &i in face {
        for &j in &vl.active[i] {
            *counts.entry(j).or_insert(0) += 1;
        }
    }
    counts
        .into_iter()
        .filter(|&(_, c)| c < face.len())
        .map(|(j, _)| j)
        .collect()
}

fn affine_rank(vl: &VertexList, face: &[usize]) -> usize {
    if face.len() <= 1 {
        return 0;
    }
    let base = &vl.vertices[face[0]];
    let diffs: Vec<Vec<Rat>> = face[1..]
        .iter()
        .map(|&i| {
            vl.vertices[i]
                .iter()
                .zip(base)
                .map(|(a, b)| a - b)
                .collect()
        })
        .collect();
    linalg::rank(&diffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{random_unit_instance, VectorSet};
    use crate::linalg::{rat_frac, rat_int};

    fn body(k: usize, rows: &[&[i64]]) -> SlabBody {
        let vectors = rows
            .iter()
            .map(|r| r.iter().map(|&v| rat_int(v)).collect())
            .collect();
        SlabBody::new(VectorSet::new(k, vectors).unwrap())
    }

    fn hexagon() -> SlabBody {
        body(2, &[&[1, 0], &[0, 1], &[1, 1]])
    }

    #[test]
    fn square_vertices() {
        let vl = enumerate_vertices(&body(2, &[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(vl.len(), 4);
        for v in &vl.vertices {
            assert!(v.iter().all(|c| c.abs() == rat_int(1)));
        }
        // closed under negation
        for v in &vl.vertices {
            let neg: Vec<Rat> = v.iter().map(|c| -c.clone()).collect();
            assert!(vl.vertices.contains(&neg));
        }
    }

    #[test]
    fn hexagon_vertices_match_hand_list() {
        let vl = enumerate_vertices(&hexagon()).unwrap();
        let expect: BTreeSet<Vec<Rat>> = [
            [1, 0], [0, 1], [-1, 1], [-1, 0], [0, -1], [1, -1],
        ]
        .iter()
        .map(|p| p.iter().map(|&c| rat_int(c)).collect())
        .collect();
        let got: BTreeSet<Vec<Rat>> = vl.vertices.iter().cloned().collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn unbounded_and_cap_errors() {
        let b = body(2, &[&[1, 0]]);
        assert!(matches!(enumerate_vertices(&b), Err(Error::UnboundedBody)));
        let b7 = SlabBody::new(VectorSet::standard_basis(7).unwrap());
        assert!(matches!(
            enumerate_vertices(&b7),
            Err(Error::DimensionCapExceeded { k: 7, cap: 6 })
        ));
        assert!(enumerate_vertices_capped(&b7, 7).is_ok());
    }

    #[test]
    fn cube_volume_all_k() {
        for k in 1..=6 {
            let b = SlabBody::new(VectorSet::standard_basis(k).unwrap());
            let res = exact_volume(&b).unwrap();
            assert_eq!(res.exact.as_ref().unwrap(), &rat_int(1 << k));
            assert_eq!(res.kth_root, 2.0, "k={k}");
            assert_eq!(res.method, VolumeMethod::Exact);
            assert!(res.ci_low.is_none() && res.ci_high.is_none());
        }
    }

    #[test]
    fn hexagon_volume_is_three() {
        let res = exact_volume(&hexagon()).unwrap();
        assert_eq!(res.exact.as_ref().unwrap(), &rat_int(3));
        assert!((res.kth_root - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn scaling_identity() {
        // λ = 2 on all generators → volume · λ^{−k}
        let scaled = SlabBody::new(hexagon().generators().scaled(&rat_int(2)));
        let res = exact_volume(&scaled).unwrap();
        assert_eq!(res.exact.as_ref().unwrap(), &rat_frac(3, 4));
    }

    #[test]
    fn appending_vector_never_increases_volume() {
        let base = exact_volume(&hexagon()).unwrap().exact.unwrap();
        for extra in [[1i64, 2], [2, 1], [0, 1], [3, -1]] {
            let mut rows = hexagon().generators().vectors().to_vec();
            rows.push(extra.iter().map(|&c| rat_int(c)).collect());
            let b = SlabBody::new(VectorSet::new(2, rows).unwrap());
            let vol = exact_volume(&b).unwrap().exact.unwrap();
            assert!(vol <= base);
        }
    }

    #[test]
    fn cross_polytope_volume() {
        // Generators (±1,±1,±1)/1: K = {|x₁±x₂±x₃| ≤ 1 for all signs} is the
        // octahedron {Σ|xᵢ| ≤ 1} with volume 4/3... the four sign rows give
        // max over signs of |Σ ±xᵢ| = Σ|xᵢ| ≤ 1.
        let b = body(3, &[&[1, 1, 1], &[1, 1, -1], &[1, -1, 1], &[1, -1, -1]]);
        let res = exact_volume(&b).unwrap();
        assert_eq!(res.exact.as_ref().unwrap(), &rat_frac(4, 3));
    }

    #[test]
    fn zero_vector_rows_are_ignored_by_volume() {
        let b = body(2, &[&[1, 0], &[0, 1], &[0, 0]]);
        let res = exact_volume(&b).unwrap();
        assert_eq!(res.exact.as_ref().unwrap(), &rat_int(4));
    }

    #[test]
    fn duplicate_generators_are_harmless() {
        let b = body(2, &[&[1, 0], &[0, 1], &[1, 1], &[1, 1]]);
        let res = exact_volume(&b).unwrap();
        assert_eq!(res.exact.as_ref().unwrap(), &rat_int(3));
    }

    #[test]
    fn clipping_path_agrees_with_subset_path_on_k3() {
        // Same instance through both engines: k=3 uses subset solves by
        // default; force the clipping path and compare.
        for seed in 0..5u64 {
            let v = random_unit_instance(3, 6, seed).unwrap();
            let b = SlabBody::new(v);
            let subset = vertices_by_subset_solve(&b);
            let clipped = vertices_by_clipping(&b);
            assert_eq!(subset.vertices, clipped.vertices, "seed {seed}");
            let normals = constraint_normals(&b);
            assert_eq!(fan_volume(&subset, &normals), fan_volume(&clipped, &normals));
        }
    }

    #[test]
    fn k4_cube_via_clipping_and_rotated_instance() {
        let b = SlabBody::new(VectorSet::standard_basis(4).unwrap());
        let vl = vertices_by_clipping(&b);
        assert_eq!(vl.len(), 16);
        // k=4 random instance: volume positive, symmetric vertex list
        let v = random_unit_instance(4, 7, 11).unwrap();
        let res = exact_volume(&SlabBody::new(v)).unwrap();
        assert!(res.volume > 0.0);
    }

    #[test]
    fn vertex_invariants_hold_on_random_instances() {
        for seed in 0..8u64 {
            let v = random_unit_instance(2 + (seed as usize % 3), 6, seed).unwrap();
            let b = SlabBody::new(v);
            let vl = enumerate_vertices(&b).unwrap();
            assert!(!vl.is_empty());
            for (v, act) in vl.vertices.iter().zip(&vl.active) {
                assert!(b.contains(v));
                assert!(act.len() >= vl.k, "vertex must have ≥ k tight constraints");
                let neg: Vec<Rat> = v.iter().map(|c| -c.clone()).collect();
                assert!(vl.vertices.contains(&neg), "not symmetric");
            }
        }
    }

    #[test]
    fn kth_root_of_perfect_powers_is_exact() {
        assert_eq!(exact_kth_root(&rat_int(8), 3), 2.0);
        assert_eq!(exact_kth_root(&rat_int(64), 6), 2.0);
        assert_eq!(exact_kth_root(&rat_frac(27, 8), 3), 1.5);
        let irr = exact_kth_root(&rat_int(3), 2);
        assert!((irr - 3f64.sqrt()).abs() < 1e-15);
    }
}
