//! The affine semigroup `NA` and its decision oracles.
//!
//! Membership in `NA + Z(A∩τ)` is decided by a memoized descent in the
//! quotient `Z^d / Z(A∩τ)`: a degree is a member iff some chain of column
//! subtractions, staying inside `{F_σ >= 0 : σ ⊇ τ}`, reaches the zero class.
//! The sum of the support functions over `σ ⊇ τ` is positive on every column
//! outside `τ`, which bounds the depth of the descent.

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::cone::{self, FaceLattice, FacetSet, SupportFunction};
use crate::error::{Error, Result};
use crate::lattice::{
    self, quotient, smith_normal_form, torsion_coset_reps, IntMatrix, QuotientGroup, Sublattice,
};

/// Largest accepted absolute value of an entry of `A`.
pub const MAX_ENTRY: i64 = 1 << 20;

/// Default extra facet-value range of the classification box.
pub const DEFAULT_MARGIN: i64 = 10;

/// Image `F_σ(NA)` of the semigroup under a support function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NumericalSemigroup {
    pub generators: Vec<i64>,
    /// Smallest `c` with every integer `>= c` a member.
    pub conductor: i64,
    pub gaps: Vec<i64>,
}

impl NumericalSemigroup {
    /// Requires positive generators with gcd 1.
    pub fn new(values: &[i64]) -> Self {
        let mut generators: Vec<i64> = values.iter().copied().filter(|&v| v > 0).collect();
        generators.sort_unstable();
        generators.dedup();
        assert!(!generators.is_empty(), "numerical semigroup needs a positive generator");
        let g = generators.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
        assert_eq!(g, 1, "generators {generators:?} have gcd {g}");
        let limit = (generators[0] * generators[generators.len() - 1] + 1) as usize;
        let mut member = vec![false; limit + 1];
        member[0] = true;
        for x in 1..=limit {
            member[x] = generators.iter().any(|&g| g as usize <= x && member[x - g as usize]);
        }
        let gaps: Vec<i64> = (0..=limit).filter(|&x| !member[x]).map(|x| x as i64).collect();
        let conductor = gaps.last().map_or(0, |&f| f + 1);
        NumericalSemigroup {
            generators,
            conductor,
            gaps,
        }
    }

    pub fn contains(&self, x: i64) -> bool {
        x >= self.conductor || (x >= 0 && self.gaps.binary_search(&x).is_err())
    }

    /// `#{x ∈ N : x + s ∉ N}`.
    pub fn shift_count(&self, s: i64) -> u64 {
        let top = self.conductor.max(self.conductor - s);
        (0..top).filter(|&x| self.contains(x) && !self.contains(x + s)).count() as u64
    }

    /// Largest gap, or -1 when the semigroup is all of `N`.
    pub fn frobenius(&self) -> i64 {
        self.conductor - 1
    }
}

/// Flags from [`ToricPresentation::classify`], with the box they were
/// verified on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub normal: bool,
    pub scored: bool,
    pub s2: bool,
    /// Normality proved by checking every half-open parallelepiped of
    /// independent columns, not just the box.
    pub normal_certified: bool,
    pub margin: i64,
    /// Upper bound of `F_σ` on the box, per facet (lower bound is 0).
    pub facet_bounds: Vec<i64>,
    pub box_points: usize,
    /// Whether the facet-value test for `NA + Z(A∩τ)` agreed with the
    /// search oracle on every box point and face.
    pub scored_fast_path_agrees: bool,
}

#[derive(Clone, Copy, Debug)]
enum Memo {
    Reachable,
    /// Not reachable within the recorded budget; `u64::MAX` means never.
    Unreachable(u64),
}

/// Coordinates of `Z^d / Z(A∩τ)` in machine integers.
#[derive(Clone, Debug)]
struct Projector {
    /// Columns of the Smith transform `V`.
    v_columns: Vec<Vec<i64>>,
    sublattice_rank: usize,
    diagonal: Vec<i64>,
}

impl Projector {
    fn new(q: &QuotientGroup, sub: &Sublattice) -> Self {
        let v = q.adapted_transform();
        let d = v.rows();
        let v_columns = (0..d)
            .map(|j| (0..d).map(|i| v.get(i, j).to_i64().expect("small transform")).collect())
            .collect();
        let diagonal = if sub.rank() == 0 {
            Vec::new()
        } else {
            smith_normal_form(sub.basis())
                .invariants()
                .iter()
                .map(|x| x.to_i64().expect("small invariant"))
                .collect()
        };
        Projector {
            v_columns,
            sublattice_rank: sub.rank(),
            diagonal,
        }
    }

    fn key(&self, a: &[i64]) -> Vec<i64> {
        let y: Vec<i64> = self
            .v_columns
            .iter()
            .map(|col| col.iter().zip(a).map(|(v, x)| *v as i128 * *x as i128).sum::<i128>() as i64)
            .collect();
        let mut key = y[self.sublattice_rank..].to_vec();
        for (i, &d) in self.diagonal.iter().enumerate() {
            if d > 1 {
                key.push(y[i].rem_euclid(d));
            }
        }
        key
    }
}

#[derive(Debug)]
struct FaceData {
    sublattice: Sublattice,
    quotient: QuotientGroup,
    coset_reps: Vec<Vec<i64>>,
    projector: Projector,
    outside: Vec<usize>,
    above: Vec<usize>,
    weight: Vec<i64>,
    min_weight: i64,
    cache: RwLock<HashMap<Vec<i64>, bool>>,
}

/// The matrix `A` with its cone, face lattice, numerical images and flags.
#[derive(Debug)]
pub struct ToricPresentation {
    matrix: IntMatrix,
    d: usize,
    columns: Vec<Vec<i64>>,
    facets: Vec<SupportFunction>,
    lattice: FaceLattice,
    pointed: bool,
    simplicial: bool,
    numerical: Vec<NumericalSemigroup>,
    search_bound: u64,
    face_data: Vec<FaceData>,
    classification: Option<Classification>,
}

pub fn default_search_bound(matrix: &IntMatrix) -> u64 {
    let max = matrix.max_abs_entry().to_u64().unwrap_or(u64::MAX / 100);
    10 * max.max(1) * matrix.rows() as u64
}

fn dot(u: &[i64], v: &[i64]) -> i64 {
    u.iter().zip(v).map(|(x, y)| x * y).sum()
}

impl ToricPresentation {
    pub fn new(matrix: IntMatrix) -> Result<Self> {
        let bound = default_search_bound(&matrix);
        Self::with_options(matrix, bound, DEFAULT_MARGIN)
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(IntMatrix::from_rows(rows)?)
    }

    pub fn with_options(matrix: IntMatrix, search_bound: u64, margin: i64) -> Result<Self> {
        let d = matrix.rows();
        let n = matrix.cols();
        let rows = matrix
            .to_i64_rows()
            .filter(|rows| rows.iter().flatten().all(|x| x.abs() <= MAX_ENTRY))
            .ok_or_else(|| Error::InvalidMatrix(format!("entries must lie in [-{MAX_ENTRY}, {MAX_ENTRY}]")))?;
        let columns: Vec<Vec<i64>> = (0..n).map(|j| (0..d).map(|i| rows[i][j]).collect()).collect();
        if let Some(j) = columns.iter().position(|c| c.iter().all(|&x| x == 0)) {
            return Err(Error::InvalidMatrix(format!("column {} is zero", j + 1)));
        }
        let facets = cone::compute_facets(&columns, d)?;
        let invariants = smith_normal_form(&matrix).invariants();
        if invariants.iter().any(|x| !x.is_one()) {
            return Err(Error::LatticeNotFull {
                invariants: invariants.iter().map(ToString::to_string).collect(),
            });
        }
        let pointed = cone::is_pointed(d, &facets);
        let simplicial = cone::is_simplicial(d, &facets);
        let lattice = cone::build_face_lattice(&columns, d, &facets)?;
        let numerical = facets
            .iter()
            .map(|f| NumericalSemigroup::new(&columns.iter().map(|c| f.eval(c)).collect::<Vec<_>>()))
            .collect();
        let face_data = lattice
            .faces()
            .iter()
            .map(|face| {
                let gens: Vec<Vec<i64>> = face.column_indices.iter().map(|&j| columns[j].clone()).collect();
                let sublattice = Sublattice::from_i64_generators(d, &gens);
                let quotient = quotient(d, &sublattice);
                let coset_reps = torsion_coset_reps(&quotient)
                    .iter()
                    .map(|r| lattice::to_i64(r).expect("small coset representative"))
                    .collect();
                let projector = Projector::new(&quotient, &sublattice);
                let outside: Vec<usize> = (0..n).filter(|j| !face.column_indices.contains(j)).collect();
                let above: Vec<usize> = face.zero_facets.iter().collect();
                let mut weight = vec![0i64; d];
                for &s in &above {
                    for (w, c) in weight.iter_mut().zip(&facets[s].coefficients) {
                        *w += c;
                    }
                }
                let min_weight = outside.iter().map(|&j| dot(&weight, &columns[j])).min().unwrap_or(1);
                FaceData {
                    sublattice,
                    quotient,
                    coset_reps,
                    projector,
                    outside,
                    above,
                    weight,
                    min_weight,
                    cache: RwLock::new(HashMap::new()),
                }
            })
            .collect();
        let mut p = ToricPresentation {
            matrix,
            d,
            columns,
            facets,
            lattice,
            pointed,
            simplicial,
            numerical,
            search_bound,
            face_data,
            classification: None,
        };
        if pointed {
            p.classification = Some(p.compute_classification(margin));
        }
        Ok(p)
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn num_columns(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Vec<i64>] {
        &self.columns
    }

    pub fn facets(&self) -> &[SupportFunction] {
        &self.facets
    }

    pub fn face_lattice(&self) -> &FaceLattice {
        &self.lattice
    }

    pub fn is_pointed(&self) -> bool {
        self.pointed
    }

    pub fn is_simplicial(&self) -> bool {
        self.simplicial
    }

    pub fn search_bound(&self) -> u64 {
        self.search_bound
    }

    /// Replaces the search bound. Cached answers stay valid: only exact
    /// results are memoized.
    pub fn set_search_bound(&mut self, bound: u64) {
        self.search_bound = bound;
    }

    /// Largest search depth any membership query `a - l ∈ NA + Z(A∩τ)` can
    /// need for `|a|_∞ <= r` and `l` a coset representative of `τ`.
    pub fn depth_for_radius(&self, r: i64) -> u64 {
        self.face_data
            .iter()
            .filter(|fd| fd.min_weight > 0)
            .map(|fd| {
                let rep = fd.coset_reps.iter().flatten().map(|x| x.abs()).max().unwrap_or(0);
                let w: i64 = fd.weight.iter().map(|x| x.abs()).sum();
                (w * (r + rep) / fd.min_weight) as u64
            })
            .max()
            .unwrap_or(0)
    }

    pub fn max_abs_entry(&self) -> i64 {
        self.columns.iter().flatten().map(|x| x.abs()).max().unwrap_or(0)
    }

    pub fn numerical_image(&self, facet: usize) -> &NumericalSemigroup {
        &self.numerical[facet]
    }

    pub fn max_conductor(&self) -> i64 {
        self.numerical.iter().map(|n| n.conductor).max().unwrap_or(0)
    }

    pub fn facet_values(&self, a: &[i64]) -> Vec<i64> {
        self.facets.iter().map(|f| f.eval(a)).collect()
    }

    /// `Z(A∩τ)`.
    pub fn face_sublattice(&self, face: usize) -> &Sublattice {
        &self.face_data[face].sublattice
    }

    /// `Z^d / Z(A∩τ)`.
    pub fn face_quotient(&self, face: usize) -> &QuotientGroup {
        &self.face_data[face].quotient
    }

    /// Representatives of `sat(Z(A∩τ)) / Z(A∩τ)`, zero first.
    pub fn coset_reps(&self, face: usize) -> &[Vec<i64>] {
        &self.face_data[face].coset_reps
    }

    /// Face of `b`: the smallest face containing `b` (which must lie in
    /// the cone).
    pub fn face_of(&self, b: &[i64]) -> Option<usize> {
        let mut set = FacetSet::default();
        for f in &self.facets {
            match f.eval(b) {
                0 => set.insert(f.facet_id),
                v if v < 0 => return None,
                _ => {}
            }
        }
        self.lattice.by_zero_facets(set)
    }

    fn require_pointed(&self) -> Result<()> {
        if self.pointed {
            Ok(())
        } else {
            Err(Error::NotPointed)
        }
    }

    pub fn classification(&self) -> Result<&Classification> {
        self.classification.as_ref().ok_or(Error::NotPointed)
    }

    pub fn classify(&self) -> Result<&Classification> {
        self.classification()
    }

    pub fn is_normal(&self) -> Result<bool> {
        Ok(self.classification()?.normal)
    }

    pub fn is_scored(&self) -> Result<bool> {
        Ok(self.classification()?.scored)
    }

    /// `a ∈ NA`.
    pub fn member_na(&self, a: &[i64]) -> Result<bool> {
        self.member_na_plus_face(a, self.lattice.bottom())
    }

    /// `a ∈ NA + Z(A∩τ)`, within the configured search bound.
    pub fn member_na_plus_face(&self, a: &[i64], face: usize) -> Result<bool> {
        self.member_with_bound(a, face, self.search_bound)
    }

    /// Same as [`member_na_plus_face`](Self::member_na_plus_face) with no
    /// depth limit. The descent always terminates; the bound only caps work.
    pub fn member_exact(&self, a: &[i64], face: usize) -> Result<bool> {
        self.member_with_bound(a, face, u64::MAX)
    }

    fn member_with_bound(&self, a: &[i64], face: usize, bound: u64) -> Result<bool> {
        self.require_pointed()?;
        assert_eq!(a.len(), self.d, "degree has wrong length");
        let fd = &self.face_data[face];
        if fd.above.iter().any(|&s| self.facets[s].eval(a) < 0) {
            return Ok(false);
        }
        let key = fd.projector.key(a);
        if key.iter().all(|&x| x == 0) {
            return Ok(true);
        }
        if self.classification.as_ref().is_some_and(|c| c.normal_certified) {
            return Ok(true);
        }
        let needed = (dot(&fd.weight, a) / fd.min_weight) as u64;
        if needed > bound {
            return Err(Error::SearchBoundExceeded {
                degree: a.to_vec(),
                face,
                needed,
                bound,
            });
        }
        if let Some(&r) = fd.cache.read().expect("cache lock").get(&key) {
            return Ok(r);
        }
        let mut local = HashMap::new();
        let found = self.reach(fd, a, needed, &mut local);
        let mut shared = fd.cache.write().expect("cache lock");
        for (k, m) in local {
            match m {
                Memo::Reachable => {
                    shared.insert(k, true);
                }
                Memo::Unreachable(u64::MAX) => {
                    shared.insert(k, false);
                }
                Memo::Unreachable(_) => {}
            }
        }
        Ok(found)
    }

    fn reach(&self, fd: &FaceData, c: &[i64], budget: u64, local: &mut HashMap<Vec<i64>, Memo>) -> bool {
        let key = fd.projector.key(c);
        if key.iter().all(|&x| x == 0) {
            return true;
        }
        if let Some(&r) = fd.cache.read().expect("cache lock").get(&key) {
            return r;
        }
        match local.get(&key) {
            Some(Memo::Reachable) => return true,
            Some(&Memo::Unreachable(b)) if b >= budget => return false,
            _ => {}
        }
        let needed = (dot(&fd.weight, c) / fd.min_weight) as u64;
        let mut found = false;
        if budget > 0 {
            let mut next = c.to_vec();
            for &j in &fd.outside {
                for (x, y) in next.iter_mut().zip(&self.columns[j]) {
                    *x -= y;
                }
                let inside = fd.above.iter().all(|&s| self.facets[s].eval(&next) >= 0);
                if inside && self.reach(fd, &next, budget - 1, local) {
                    found = true;
                    break;
                }
                next.copy_from_slice(c);
            }
        }
        let memo = if found {
            Memo::Reachable
        } else if budget >= needed {
            Memo::Unreachable(u64::MAX)
        } else {
            Memo::Unreachable(budget)
        };
        local.insert(key, memo);
        found
    }

    /// Facet-value test `F_σ(a) ∈ F_σ(NA)` for all facets `σ ⊇ τ`.
    ///
    /// Never used to answer membership queries; it is compared against the
    /// search oracle during classification.
    pub fn scored_fast_path(&self, a: &[i64], face: usize) -> bool {
        self.face_data[face]
            .above
            .iter()
            .all(|&s| self.numerical[s].contains(self.facets[s].eval(a)))
    }

    /// `∃ m >= 0 : a + m b ∈ NA`, i.e. `a` is a degree of `S_A[1/t^b]`.
    ///
    /// The localization has degrees `NA + Z(A∩τ)` for the face `τ` containing
    /// `b` in its relative interior.
    pub fn member_localization(&self, a: &[i64], b: &[i64]) -> Result<bool> {
        self.require_pointed()?;
        if !self.member_na(b)? {
            return Err(Error::GeneratorNotInSemigroup { degree: b.to_vec() });
        }
        let face = self.face_of(b).expect("members of NA lie in the cone");
        self.member_na_plus_face(a, face)
    }

    /// Smallest `m <= max_m` with `a + m b ∈ NA`, by direct search.
    pub fn localization_witness(&self, a: &[i64], b: &[i64], max_m: u64) -> Result<Option<u64>> {
        let mut x = a.to_vec();
        for m in 0..=max_m {
            if self.member_exact(&x, self.lattice.bottom())? {
                return Ok(Some(m));
            }
            for (xi, bi) in x.iter_mut().zip(b) {
                *xi += bi;
            }
        }
        Ok(None)
    }

    /// `x ∈ Ω(w) = NA ∖ (−w + NA)`.
    pub fn in_omega(&self, w: &[i64], x: &[i64]) -> Result<bool> {
        let shifted: Vec<i64> = x.iter().zip(w).map(|(a, b)| a + b).collect();
        Ok(self.member_na(x)? && !self.member_na(&shifted)?)
    }

    /// `|Ω(w)|` for `d = 1`.
    pub fn omega_size(&self, w: &[i64]) -> Result<u64> {
        if self.d != 1 {
            return Err(Error::DimensionUnsupported {
                expected: 1,
                got: self.d,
            });
        }
        self.require_pointed()?;
        Ok(self.numerical[0].shift_count(self.facets[0].eval(w)))
    }

    /// Lattice points `a` with `0 <= F_σ(a) <= bounds[σ]` for every facet.
    pub fn facet_box(&self, bounds: &[i64]) -> Vec<Vec<i64>> {
        let d = self.d;
        let mut chosen: Vec<usize> = Vec::new();
        for f in &self.facets {
            let mut rows: Vec<Vec<i64>> = chosen.iter().map(|&s| self.facets[s].coefficients.clone()).collect();
            rows.push(f.coefficients.clone());
            if lattice::rank_i64(&rows, d) == rows.len() {
                chosen.push(f.facet_id);
            }
        }
        assert_eq!(chosen.len(), d, "pointed cone has d independent facets");
        let rows: Vec<Vec<i64>> = chosen.iter().map(|&s| self.facets[s].coefficients.clone()).collect();
        let inv = IntMatrix::from_i64_rows(d, &rows)
            .rational_inverse()
            .expect("independent facets");
        let mut lo = vec![0i64; d];
        let mut hi = vec![0i64; d];
        for i in 0..d {
            let mut min = BigRational::zero();
            let mut max = BigRational::zero();
            for (j, &s) in chosen.iter().enumerate() {
                let t = &inv[i][j] * BigRational::from_integer(BigInt::from(bounds[s]));
                if t.is_negative() {
                    min += t;
                } else {
                    max += t;
                }
            }
            lo[i] = min.floor().to_integer().to_i64().expect("small box");
            hi[i] = max.ceil().to_integer().to_i64().expect("small box");
        }
        lattice::box_points(&lo, &hi)
            .into_iter()
            .filter(|a| {
                self.facets
                    .iter()
                    .all(|f| (0..=bounds[f.facet_id]).contains(&f.eval(a)))
            })
            .collect()
    }

    /// Every lattice point of every half-open parallelepiped spanned by `d`
    /// independent columns lies in `NA`.
    fn certify_normal(&self) -> bool {
        let d = self.d;
        for subset in cone::combinations(self.columns.len(), d) {
            let rows: Vec<Vec<i64>> = subset.iter().map(|&j| self.columns[j].clone()).collect();
            let basis = IntMatrix::from_i64_rows(d, &rows);
            let det = basis.determinant().abs();
            if det.is_zero() || det.is_one() {
                continue;
            }
            if det > BigInt::from(100_000) {
                return false;
            }
            let inv = basis.rational_inverse().expect("nonsingular");
            let sub = Sublattice::from_i64_generators(d, &rows);
            let q = quotient(d, &sub);
            for rep in torsion_coset_reps(&q) {
                // fractional part of the coordinates of rep in the basis
                let coords: Vec<BigRational> = (0..d)
                    .map(|k| {
                        let c: BigRational = (0..d)
                            .map(|i| BigRational::from_integer(rep[i].clone()) * &inv[i][k])
                            .sum();
                        &c - c.floor()
                    })
                    .collect();
                let point: Vec<i64> = (0..d)
                    .map(|i| {
                        let x: BigRational = (0..d)
                            .map(|k| &coords[k] * BigRational::from_integer(BigInt::from(rows[k][i])))
                            .sum();
                        debug_assert!(x.is_integer());
                        x.to_integer().to_i64().expect("small point")
                    })
                    .collect();
                if !self.member_exact(&point, self.lattice.bottom()).expect("pointed") {
                    return false;
                }
            }
        }
        true
    }

    fn compute_classification(&self, margin: i64) -> Classification {
        let bottom = self.lattice.bottom();
        let normal_certified = self.certify_normal();
        let facet_bounds: Vec<i64> = self.numerical.iter().map(|n| n.conductor + margin).collect();
        let points = self.facet_box(&facet_bounds);
        let facet_faces: Vec<usize> = (0..self.facets.len()).map(|s| self.lattice.facet_face(s)).collect();
        let faces = self.lattice.len();
        let results: Vec<(bool, bool, bool, bool)> = points
            .par_iter()
            .map(|a| {
                let member = self.member_exact(a, bottom).expect("pointed");
                let scored = member == self.scored_fast_path(a, bottom);
                let mut s2_meet = true;
                for &f in &facet_faces {
                    s2_meet &= self.member_exact(a, f).expect("pointed");
                }
                let agrees = (0..faces).all(|t| {
                    self.member_exact(a, t).expect("pointed") == self.scored_fast_path(a, t)
                });
                (member, scored, member == s2_meet, agrees)
            })
            .collect();
        let normal = results.iter().all(|r| r.0);
        let scored = results.iter().all(|r| r.1);
        let s2 = results.iter().all(|r| r.2);
        let scored_fast_path_agrees = results.iter().all(|r| r.3);
        debug_assert!(!normal_certified || normal);
        assert!(!normal || scored, "normal but not scored on the box");
        assert!(!scored || s2, "scored but not (S2) on the box");
        Classification {
            normal,
            scored,
            s2,
            normal_certified,
            margin,
            facet_bounds,
            box_points: points.len(),
            scored_fast_path_agrees,
        }
    }
}
