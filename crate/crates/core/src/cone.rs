//! Geometry of the rational cone spanned by the columns of `A`: primitive
//! support functions of the facets, the face lattice, and the incidence signs
//! that turn the face lattice into a cochain complex.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{rank_i64, IntMatrix};

/// Primitive integer functional, nonnegative on the cone and vanishing on
/// exactly one facet.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SupportFunction {
    pub facet_id: usize,
    pub coefficients: Vec<i64>,
}

impl SupportFunction {
    pub fn eval(&self, a: &[i64]) -> i64 {
        self.coefficients.iter().zip(a).map(|(c, x)| c * x).sum()
    }
}

/// Set of facet ids, as a bitmask (at most 64 facets).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FacetSet(pub u64);

impl FacetSet {
    pub fn contains(self, facet: usize) -> bool {
        self.0 >> facet & 1 == 1
    }

    pub fn insert(&mut self, facet: usize) {
        self.0 |= 1 << facet;
    }

    pub fn is_superset(self, other: FacetSet) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.contains(i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Face {
    pub face_id: usize,
    /// Columns of `A` lying on the face (0-based).
    pub column_indices: Vec<usize>,
    pub dim: usize,
    #[serde(serialize_with = "serialize_facet_set")]
    pub zero_facets: FacetSet,
    /// Oriented basis: greedily chosen independent columns, in index order.
    #[serde(skip)]
    pub basis: Vec<usize>,
}

fn serialize_facet_set<S: serde::Serializer>(set: &FacetSet, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(set.iter())
}

#[derive(Clone, Debug)]
pub struct FaceLattice {
    faces: Vec<Face>,
    /// Upper covers of each face with their incidence signs.
    covers: Vec<Vec<(usize, i8)>>,
    by_zero_facets: HashMap<FacetSet, usize>,
    facet_faces: Vec<usize>,
}

impl FaceLattice {
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, id: usize) -> &Face {
        &self.faces[id]
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// The whole cone.
    pub fn top(&self) -> usize {
        self.faces.len() - 1
    }

    /// The minimal face (`{0}` when pointed).
    pub fn bottom(&self) -> usize {
        0
    }

    /// `tau ⊆ other`.
    pub fn is_subface(&self, tau: usize, other: usize) -> bool {
        self.faces[tau].zero_facets.is_superset(self.faces[other].zero_facets)
    }

    pub fn upper_covers(&self, tau: usize) -> &[(usize, i8)] {
        &self.covers[tau]
    }

    /// Incidence sign for `dim other = dim tau + 1`; zero when not a cover.
    pub fn incidence_sign(&self, tau: usize, other: usize) -> i8 {
        self.covers[tau]
            .iter()
            .find(|(f, _)| *f == other)
            .map_or(0, |&(_, s)| s)
    }

    pub fn by_zero_facets(&self, set: FacetSet) -> Option<usize> {
        self.by_zero_facets.get(&set).copied()
    }

    /// Face id of a facet.
    pub fn facet_face(&self, facet_id: usize) -> usize {
        self.facet_faces[facet_id]
    }

    pub fn faces_of_dim(&self, dim: usize) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(move |f| f.dim == dim)
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn det_i64(rows: &[Vec<i64>]) -> BigInt {
    if rows.is_empty() {
        return BigInt::from(1);
    }
    IntMatrix::from_i64_rows(rows.len(), rows).determinant()
}

/// Primitive normal of `d - 1` vectors in `Z^d` (generalized cross
/// product), or `None` if they are dependent.
fn primitive_normal(vectors: &[&Vec<i64>], d: usize) -> Option<Vec<i64>> {
    let mut normal: Vec<BigInt> = (0..d)
        .map(|k| {
            let minor: Vec<Vec<i64>> = vectors
                .iter()
                .map(|v| v.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &x)| x).collect())
                .collect();
            let det = det_i64(&minor);
            if k % 2 == 0 {
                det
            } else {
                -det
            }
        })
        .collect();
    let g = normal.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return None;
    }
    for x in normal.iter_mut() {
        *x = &*x / &g;
    }
    normal.iter().map(ToPrimitive::to_i64).collect()
}

/// Facets of the cone over `columns`, by exhaustive search over
/// `(d-1)`-subsets of columns.
pub fn compute_facets(columns: &[Vec<i64>], d: usize) -> Result<Vec<SupportFunction>> {
    let rank = rank_i64(columns, d);
    if rank < d {
        return Err(Error::NotFullDimensional { rank, dim: d });
    }
    let mut found: BTreeSet<Vec<i64>> = BTreeSet::new();
    for subset in combinations(columns.len(), d - 1) {
        let vectors: Vec<&Vec<i64>> = subset.iter().map(|&i| &columns[i]).collect();
        let Some(normal) = primitive_normal(&vectors, d) else {
            continue;
        };
        let values: Vec<i64> = columns
            .iter()
            .map(|c| c.iter().zip(&normal).map(|(x, y)| x * y).sum())
            .collect();
        let oriented = if values.iter().all(|&v| v >= 0) {
            normal
        } else if values.iter().all(|&v| v <= 0) {
            normal.iter().map(|x| -x).collect()
        } else {
            continue;
        };
        // a normal vanishing on every column cannot happen at full rank
        found.insert(oriented);
    }
    Ok(found
        .into_iter()
        .enumerate()
        .map(|(facet_id, coefficients)| SupportFunction {
            facet_id,
            coefficients,
        })
        .collect())
}

pub fn is_pointed(d: usize, facets: &[SupportFunction]) -> bool {
    let rows: Vec<Vec<i64>> = facets.iter().map(|f| f.coefficients.clone()).collect();
    !facets.is_empty() && rank_i64(&rows, d) == d
}

pub fn is_simplicial(d: usize, facets: &[SupportFunction]) -> bool {
    facets.len() == d
}

fn greedy_basis(columns: &[Vec<i64>], indices: &[usize], d: usize) -> Vec<usize> {
    let mut basis: Vec<usize> = Vec::new();
    for &i in indices {
        let mut rows: Vec<Vec<i64>> = basis.iter().map(|&b| columns[b].clone()).collect();
        rows.push(columns[i].clone());
        if rank_i64(&rows, d) == rows.len() {
            basis.push(i);
        }
    }
    basis
}

/// Sign comparing the orientation "interior direction, then basis of `tau`"
/// with the chosen basis of the cover `upper`.
fn orientation_sign(columns: &[Vec<i64>], d: usize, tau: &Face, upper: &Face) -> i8 {
    let inward = upper
        .column_indices
        .iter()
        .copied()
        .find(|c| !tau.column_indices.contains(c))
        .expect("a cover has a column outside the smaller face");
    let mut lhs: Vec<&Vec<i64>> = vec![&columns[inward]];
    lhs.extend(tau.basis.iter().map(|&b| &columns[b]));
    let rhs: Vec<&Vec<i64>> = upper.basis.iter().map(|&b| &columns[b]).collect();
    let k = rhs.len();
    for coords in combinations(d, k) {
        let pick = |vs: &[&Vec<i64>]| -> Vec<Vec<i64>> {
            vs.iter().map(|v| coords.iter().map(|&j| v[j]).collect()).collect()
        };
        let dr = det_i64(&pick(&rhs));
        if dr.is_zero() {
            continue;
        }
        let dl = det_i64(&pick(&lhs));
        debug_assert!(!dl.is_zero());
        return if dl.is_positive() == dr.is_positive() { 1 } else { -1 };
    }
    unreachable!("basis of a face has a nonzero maximal minor")
}

/// Enumerates all faces as intersections of facets, ordered by
/// `(dim, column indices)`, with cover relations and incidence signs.
pub fn build_face_lattice(columns: &[Vec<i64>], d: usize, facets: &[SupportFunction]) -> Result<FaceLattice> {
    if facets.len() > 64 {
        return Err(Error::InvalidMatrix(format!(
            "cone has {} facets; at most 64 are supported",
            facets.len()
        )));
    }
    let n = columns.len();
    let facet_columns: Vec<Vec<usize>> = facets
        .iter()
        .map(|f| (0..n).filter(|&i| f.eval(&columns[i]) == 0).collect())
        .collect();

    let mut sets: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut queue: Vec<Vec<usize>> = vec![(0..n).collect()];
    while let Some(face) = queue.pop() {
        if !sets.insert(face.clone()) {
            continue;
        }
        for fc in &facet_columns {
            let meet: Vec<usize> = face.iter().copied().filter(|i| fc.contains(i)).collect();
            if !sets.contains(&meet) {
                queue.push(meet);
            }
        }
    }

    let mut faces: Vec<Face> = sets
        .into_iter()
        .map(|cols| {
            let rows: Vec<Vec<i64>> = cols.iter().map(|&i| columns[i].clone()).collect();
            let dim = rank_i64(&rows, d);
            let mut zero_facets = FacetSet::default();
            for (fid, fc) in facet_columns.iter().enumerate() {
                if cols.iter().all(|i| fc.contains(i)) {
                    zero_facets.insert(fid);
                }
            }
            let basis = greedy_basis(columns, &cols, d);
            Face {
                face_id: 0,
                column_indices: cols,
                dim,
                zero_facets,
                basis,
            }
        })
        .collect();
    faces.sort_by(|a, b| (a.dim, &a.column_indices).cmp(&(b.dim, &b.column_indices)));
    for (i, f) in faces.iter_mut().enumerate() {
        f.face_id = i;
    }

    let mut covers = vec![Vec::new(); faces.len()];
    for tau in &faces {
        for upper in &faces {
            if upper.dim == tau.dim + 1 && tau.zero_facets.is_superset(upper.zero_facets) {
                let sign = orientation_sign(columns, d, tau, upper);
                covers[tau.face_id].push((upper.face_id, sign));
            }
        }
    }
    let by_zero_facets = faces.iter().map(|f| (f.zero_facets, f.face_id)).collect();
    let facet_faces = (0..facets.len())
        .map(|fid| {
            faces
                .iter()
                .find(|f| f.zero_facets == FacetSet(1 << fid))
                .map(|f| f.face_id)
                .expect("each facet is a face")
        })
        .collect();
    Ok(FaceLattice {
        faces,
        covers,
        by_zero_facets,
        facet_faces,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cols(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let d = a.len();
        (0..a[0].len()).map(|j| (0..d).map(|i| a[i][j]).collect()).collect()
    }

    fn twodim() -> Vec<Vec<i64>> {
        cols(&[vec![1, 1, 1], vec![0, 1, 2]])
    }

    fn hartshorne() -> Vec<Vec<i64>> {
        cols(&[vec![1, 1, 1, 1], vec![0, 1, 0, 1], vec![0, 0, 1, 1]])
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
    }

    #[test]
    fn twodim_facets() {
        let f = compute_facets(&twodim(), 2).unwrap();
        let coeffs: Vec<Vec<i64>> = f.iter().map(|s| s.coefficients.clone()).collect();
        assert_eq!(coeffs.len(), 2);
        assert!(coeffs.contains(&vec![0, 1]));
        assert!(coeffs.contains(&vec![2, -1]));
        assert!(is_pointed(2, &f));
        assert!(is_simplicial(2, &f));
    }

    #[test]
    fn identity_facets() {
        let id = cols(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let f = compute_facets(&id, 3).unwrap();
        let coeffs: Vec<Vec<i64>> = f.iter().map(|s| s.coefficients.clone()).collect();
        assert_eq!(coeffs, vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
        let lat = build_face_lattice(&id, 3, &f).unwrap();
        assert_eq!(lat.len(), 8);
    }

    #[test]
    fn hartshorne_facets_and_faces() {
        let c = hartshorne();
        let f = compute_facets(&c, 3).unwrap();
        assert_eq!(f.len(), 4);
        assert!(is_pointed(3, &f));
        assert!(!is_simplicial(3, &f));
        let lat = build_face_lattice(&c, 3, &f).unwrap();
        assert_eq!(lat.len(), 10);
        let dims: Vec<usize> = lat.faces().iter().map(|f| f.dim).collect();
        assert_eq!(dims, vec![0, 1, 1, 1, 1, 2, 2, 2, 2, 3]);
        // every facet vanishes on two columns
        for s in &f {
            assert_eq!(c.iter().filter(|a| s.eval(a) == 0).count(), 2);
        }
    }

    #[test]
    fn lineality_is_not_pointed() {
        let f = compute_facets(&[vec![1], vec![-1]], 1).unwrap();
        assert!(f.is_empty());
        assert!(!is_pointed(1, &f));
    }

    #[test]
    fn rank_deficient_rejected() {
        let c = cols(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(compute_facets(&c, 2), Err(Error::NotFullDimensional { rank: 1, dim: 2 }));
    }

    #[test]
    fn twodim_lattice() {
        let c = twodim();
        let f = compute_facets(&c, 2).unwrap();
        let lat = build_face_lattice(&c, 2, &f).unwrap();
        assert_eq!(lat.len(), 4);
        assert_eq!(lat.face(0).dim, 0);
        assert_eq!(lat.face(1).column_indices, vec![0]);
        assert_eq!(lat.face(2).column_indices, vec![2]);
        assert_eq!(lat.face(3).column_indices, vec![0, 1, 2]);
        assert!(lat.is_subface(0, 3));
        assert!(lat.is_subface(1, 3));
        assert!(!lat.is_subface(1, 2));
    }

    fn check_d_squared(c: &[Vec<i64>], d: usize) {
        let f = compute_facets(c, d).unwrap();
        let lat = build_face_lattice(c, d, &f).unwrap();
        for tau in lat.faces() {
            for top in lat.faces() {
                if top.dim != tau.dim + 2 || !lat.is_subface(tau.face_id, top.face_id) {
                    continue;
                }
                let mut sum = 0i64;
                for &(mid, s1) in lat.upper_covers(tau.face_id) {
                    let s2 = lat.incidence_sign(mid, top.face_id);
                    sum += (s1 * s2) as i64;
                }
                assert_eq!(sum, 0, "d∘d ≠ 0 between {} and {}", tau.face_id, top.face_id);
            }
        }
        // graded: each maximal chain has length d
        assert_eq!(lat.face(lat.top()).dim, d);
    }

    #[test]
    fn incidence_signs_square_to_zero() {
        check_d_squared(&twodim(), 2);
        check_d_squared(&hartshorne(), 3);
        check_d_squared(&cols(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]), 3);
        // cone over a pentagon
        check_d_squared(
            &cols(&[vec![1, 1, 1, 1, 1], vec![0, 2, 3, 1, -1], vec![0, 0, 2, 3, 2]]),
            3,
        );
        // a 4-dimensional cone over a square pyramid
        check_d_squared(
            &cols(&[
                vec![1, 1, 1, 1, 1],
                vec![0, 1, 0, 1, 0],
                vec![0, 0, 1, 1, 0],
                vec![0, 0, 0, 0, 1],
            ]),
            4,
        );
    }
}
