//! Degree slices of the Ishida and Čech complexes, and local cohomology
//! modules assembled class by class.

use std::collections::HashMap;
use std::sync::Mutex;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{self, rank_i64};
use crate::sector::{self, class_poset, ClassEnumeration};
use crate::semigroup::ToricPresentation;

/// A monomial ideal given by the degrees of its generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialIdeal {
    pub generator_degrees: Vec<Vec<i64>>,
}

impl MonomialIdeal {
    pub fn new(p: &ToricPresentation, generators: &[Vec<i64>]) -> Result<Self> {
        let mut generator_degrees: Vec<Vec<i64>> = Vec::new();
        for g in generators {
            if g.len() != p.dim() {
                return Err(Error::InvalidMatrix(format!(
                    "ideal generator {g:?} has length {}, expected {}",
                    g.len(),
                    p.dim()
                )));
            }
            if !p.member_exact(g, p.face_lattice().bottom())? || g.iter().all(|&x| x == 0) {
                return Err(Error::GeneratorNotInSemigroup { degree: g.clone() });
            }
            if !generator_degrees.contains(g) {
                generator_degrees.push(g.clone());
            }
        }
        if generator_degrees.is_empty() {
            return Err(Error::HypothesisFailed("the ideal needs at least one generator".into()));
        }
        Ok(MonomialIdeal { generator_degrees })
    }

    /// The maximal graded ideal, generated by the columns.
    pub fn maximal(p: &ToricPresentation) -> Self {
        let mut generator_degrees: Vec<Vec<i64>> = Vec::new();
        for c in p.columns() {
            if !generator_degrees.contains(c) {
                generator_degrees.push(c.clone());
            }
        }
        MonomialIdeal { generator_degrees }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IdealSpec {
    Maximal,
    Generators { generator_degrees: Vec<Vec<i64>> },
}

impl IdealSpec {
    pub fn generators(ideal: &MonomialIdeal) -> Self {
        IdealSpec::Generators {
            generator_degrees: ideal.generator_degrees.clone(),
        }
    }
}

/// One degree of a cochain complex whose terms are at most one-dimensional
/// per basis label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedComplexSlice {
    pub degree: Vec<i64>,
    /// Basis labels per cohomological index: face ids (Ishida) or generator
    /// subsets as bitmasks (Čech).
    pub terms: Vec<Vec<u64>>,
    /// `differentials[i]` maps term `i` to term `i + 1`; rows index the target.
    pub differentials: Vec<Vec<Vec<i64>>>,
}

impl GradedComplexSlice {
    pub fn ranks(&self) -> Vec<usize> {
        let k = self.terms.len();
        let drank: Vec<usize> = self
            .differentials
            .iter()
            .enumerate()
            .map(|(i, m)| rank_i64(m, self.terms[i].len()))
            .collect();
        (0..k)
            .map(|i| {
                let incoming = if i == 0 { 0 } else { drank[i - 1] };
                let outgoing = if i + 1 < k { drank[i] } else { 0 };
                self.terms[i].len() - incoming - outgoing
            })
            .collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.terms
            .iter()
            .enumerate()
            .map(|(i, t)| if i % 2 == 0 { t.len() as i64 } else { -(t.len() as i64) })
            .sum()
    }

    /// `d ∘ d = 0`.
    pub fn is_complex(&self) -> bool {
        self.differentials.windows(2).all(|w| {
            let (a, b) = (&w[0], &w[1]);
            b.iter().all(|row| {
                (0..a.first().map_or(0, Vec::len)).all(|c| {
                    row.iter().enumerate().map(|(k, x)| x * a[k][c]).sum::<i64>() == 0
                })
            })
        })
    }
}

fn alternating(ranks: &[usize]) -> i64 {
    ranks
        .iter()
        .enumerate()
        .map(|(i, &r)| if i % 2 == 0 { r as i64 } else { -(r as i64) })
        .sum()
}

/// The complex with one generator per face of `nabla` in degree `dim τ`.
pub fn ishida_slice(p: &ToricPresentation, nabla: &[usize]) -> GradedComplexSlice {
    let lat = p.face_lattice();
    let d = p.dim();
    let terms: Vec<Vec<u64>> = (0..=d)
        .map(|i| {
            nabla
                .iter()
                .filter(|&&t| lat.face(t).dim == i)
                .map(|&t| t as u64)
                .collect()
        })
        .collect();
    let differentials = (0..d)
        .map(|i| {
            terms[i + 1]
                .iter()
                .map(|&u| {
                    terms[i]
                        .iter()
                        .map(|&t| lat.incidence_sign(t as usize, u as usize) as i64)
                        .collect()
                })
                .collect()
        })
        .collect();
    GradedComplexSlice {
        degree: Vec::new(),
        terms,
        differentials,
    }
}

/// Ranks `H^0..H^d` of the Ishida complex restricted to `nabla`.
pub fn ishida_ranks(p: &ToricPresentation, nabla: &[usize]) -> Vec<usize> {
    ishida_slice(p, nabla).ranks()
}

fn subset_sum(ideal: &MonomialIdeal, mask: u64, d: usize) -> Vec<i64> {
    let mut s = vec![0i64; d];
    for (j, g) in ideal.generator_degrees.iter().enumerate() {
        if mask >> j & 1 == 1 {
            for (x, y) in s.iter_mut().zip(g) {
                *x += y;
            }
        }
    }
    s
}

/// Degree-`a` slice of the Čech complex of `S_A` on the generators of `I`.
pub fn cech_slice(p: &ToricPresentation, ideal: &MonomialIdeal, a: &[i64]) -> Result<GradedComplexSlice> {
    let t = ideal.generator_degrees.len();
    if t > 20 {
        return Err(Error::HypothesisFailed(format!("{t} ideal generators; at most 20 are supported")));
    }
    let d = p.dim();
    let mut terms: Vec<Vec<u64>> = vec![Vec::new(); t + 1];
    for mask in 0..(1u64 << t) {
        let b = subset_sum(ideal, mask, d);
        let face = p.face_of(&b).expect("sums of generators lie in the cone");
        if p.member_na_plus_face(a, face)? {
            terms[mask.count_ones() as usize].push(mask);
        }
    }
    let differentials = (0..t)
        .map(|i| {
            terms[i + 1]
                .iter()
                .map(|&big| {
                    terms[i]
                        .iter()
                        .map(|&small| {
                            if small & big != small {
                                return 0;
                            }
                            let j = (big ^ small).trailing_zeros();
                            let before = (small & ((1u64 << j) - 1)).count_ones();
                            if before.is_multiple_of(2) {
                                1
                            } else {
                                -1
                            }
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    Ok(GradedComplexSlice {
        degree: a.to_vec(),
        terms,
        differentials,
    })
}

/// Ranks `H^0..H^t` of the degree-`a` Čech slice, `t` = number of generators.
pub fn cech_ranks(p: &ToricPresentation, ideal: &MonomialIdeal, a: &[i64]) -> Result<Vec<usize>> {
    let slice = cech_slice(p, ideal, a)?;
    let ranks = slice.ranks();
    debug_assert_eq!(alternating(&ranks), slice.euler_characteristic());
    Ok(ranks)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Piece {
    pub class_id: usize,
    pub index: usize,
    pub rank: usize,
}

/// `H^i_I(S_A)` for one `i`, as composition factors `K[class]` in series
/// order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleSeries {
    pub index: usize,
    pub length: usize,
    /// `(class_id, multiplicity)`, larger classes first.
    pub series: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedModuleDescription {
    pub ideal: IdealSpec,
    pub pieces: Vec<Piece>,
    /// One entry per cohomological index with a nonzero module.
    pub modules: Vec<ModuleSeries>,
    pub length: usize,
    /// Degrees per class at which ranks were evaluated and compared.
    pub samples_per_class: Vec<usize>,
}

impl GradedModuleDescription {
    pub fn module(&self, index: usize) -> Option<&ModuleSeries> {
        self.modules.iter().find(|m| m.index == index)
    }

    pub fn length_at(&self, index: usize) -> usize {
        self.module(index).map_or(0, |m| m.length)
    }
}

/// Per-degree cohomology of `S_A` with support in an ideal.
pub struct SupportOracle<'a> {
    p: &'a ToricPresentation,
    ideal: IdealSpec,
    generators: MonomialIdeal,
    ishida_cache: Mutex<HashMap<Vec<usize>, Vec<usize>>>,
}

impl<'a> SupportOracle<'a> {
    pub fn new(p: &'a ToricPresentation, ideal: IdealSpec) -> Result<Self> {
        if !p.is_pointed() {
            return Err(Error::NotPointed);
        }
        let generators = match &ideal {
            IdealSpec::Maximal => MonomialIdeal::maximal(p),
            IdealSpec::Generators { generator_degrees } => MonomialIdeal::new(p, generator_degrees)?,
        };
        Ok(SupportOracle {
            p,
            ideal,
            generators,
            ishida_cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn ideal(&self) -> &IdealSpec {
        &self.ideal
    }

    /// Ranks of `H^i_I(S_A)_a` for all `i`. The maximal ideal uses the Ishida
    /// complex of `∇(a)`, other ideals the Čech complex.
    pub fn ranks(&self, a: &[i64]) -> Result<Vec<usize>> {
        match self.ideal {
            IdealSpec::Maximal => {
                let nabla = sector::nabla(self.p, a)?;
                if let Some(r) = self.ishida_cache.lock().expect("cache lock").get(&nabla) {
                    return Ok(r.clone());
                }
                let r = ishida_ranks(self.p, &nabla);
                self.ishida_cache.lock().expect("cache lock").insert(nabla, r.clone());
                Ok(r)
            }
            IdealSpec::Generators { .. } => cech_ranks(self.p, &self.generators, a),
        }
    }

    pub fn rank_at(&self, a: &[i64], index: usize) -> Result<usize> {
        Ok(self.ranks(a)?.get(index).copied().unwrap_or(0))
    }
}

/// `H^*_I(S_A)` assembled over the classes of `enumeration`.
pub fn assemble_module(
    p: &ToricPresentation,
    enumeration: &ClassEnumeration,
    ideal: IdealSpec,
) -> Result<GradedModuleDescription> {
    let oracle = SupportOracle::new(p, ideal)?;
    let poset = class_poset(&enumeration.classes)?;
    let per_class: Vec<Vec<usize>> = enumeration
        .classes
        .par_iter()
        .map(|class| {
            let ranks = class
                .samples
                .iter()
                .map(|a| oracle.ranks(a))
                .collect::<Result<Vec<_>>>()?;
            if ranks.windows(2).any(|w| w[0] != w[1]) {
                return Err(Error::ClassRankMismatch {
                    class_id: class.class_id,
                    ranks,
                });
            }
            Ok(ranks.into_iter().next().expect("every class has a sample"))
        })
        .collect::<Result<Vec<_>>>()?;
    // Γ_I(S_A) vanishes for a nonzero ideal of a domain
    assert!(per_class.iter().all(|r| r[0] == 0), "nonzero H^0");
    let top = per_class.iter().map(Vec::len).max().unwrap_or(0);
    let mut pieces = Vec::new();
    let mut modules = Vec::new();
    for i in 0..top {
        let series: Vec<(usize, usize)> = poset
            .linear_extension
            .iter()
            .filter_map(|&c| match per_class[c].get(i) {
                Some(&r) if r > 0 => Some((c, r)),
                _ => None,
            })
            .collect();
        for &(c, r) in &series {
            pieces.push(Piece {
                class_id: c,
                index: i,
                rank: r,
            });
        }
        if !series.is_empty() {
            modules.push(ModuleSeries {
                index: i,
                length: series.iter().map(|s| s.1).sum(),
                series,
            });
        }
    }
    pieces.sort_by_key(|p| (p.index, p.class_id));
    Ok(GradedModuleDescription {
        ideal: oracle.ideal.clone(),
        length: pieces.iter().map(|p| p.rank).sum(),
        pieces,
        modules,
        samples_per_class: enumeration.classes.iter().map(|c| c.samples.len()).collect(),
    })
}

/// `H^*_m(S_A)` from the Ishida complex of each class's sector.
pub fn local_cohomology_max(p: &ToricPresentation, enumeration: &ClassEnumeration) -> Result<GradedModuleDescription> {
    assemble_module(p, enumeration, IdealSpec::Maximal)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SocleCount {
    pub radius: i64,
    pub count: usize,
    pub degrees: Vec<Vec<i64>>,
}

/// Largest number of socle degrees listed per radius.
pub const SOCLE_LIST_LIMIT: usize = 256;

/// Socle degrees of `H^index_I(S_A)` in centered boxes: degrees in the support
/// whose translates by every column leave the support.
pub fn socle_probe(
    p: &ToricPresentation,
    ideal: IdealSpec,
    index: usize,
    radii: &[i64],
) -> Result<Vec<SocleCount>> {
    let oracle = SupportOracle::new(p, ideal)?;
    let Some(&rmax) = radii.iter().max() else {
        return Ok(Vec::new());
    };
    let d = p.dim();
    let reach = rmax + p.max_abs_entry();
    let pts = lattice::box_points(&vec![-reach; d], &vec![reach; d]);
    let support: Vec<bool> = pts
        .par_iter()
        .map(|a| Ok(oracle.rank_at(a, index)? > 0))
        .collect::<Result<Vec<_>>>()?;
    let side = (2 * reach + 1) as usize;
    let lookup = |a: &[i64]| -> bool {
        let mut idx = 0usize;
        for &x in a {
            idx = idx * side + (x + reach) as usize;
        }
        support[idx]
    };
    let mut socle: Vec<Vec<i64>> = pts
        .iter()
        .zip(&support)
        .filter(|(a, &s)| {
            s && a.iter().all(|x| x.abs() <= rmax)
                && p.columns().iter().all(|c| {
                    let b: Vec<i64> = a.iter().zip(c).map(|(x, y)| x + y).collect();
                    !lookup(&b)
                })
        })
        .map(|(a, _)| a.clone())
        .collect();
    socle.sort();
    Ok(radii
        .iter()
        .map(|&r| {
            let inside: Vec<Vec<i64>> = socle
                .iter()
                .filter(|a| a.iter().all(|x| x.abs() <= r))
                .cloned()
                .collect();
            SocleCount {
                radius: r,
                count: inside.len(),
                degrees: inside.into_iter().take(SOCLE_LIST_LIMIT).collect(),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sector::{enumerate_classes, BoxPolicy};

    fn p(rows: &[Vec<i64>]) -> ToricPresentation {
        ToricPresentation::from_rows(rows).unwrap()
    }

    #[test]
    fn ishida_small() {
        let t = p(&[vec![1, 1, 1], vec![0, 1, 2]]);
        let top = t.face_lattice().top();
        assert_eq!(ishida_ranks(&t, &[top]), vec![0, 0, 1]);
        let all: Vec<usize> = (0..4).collect();
        assert_eq!(ishida_ranks(&t, &all), vec![0, 0, 0]);
        assert_eq!(ishida_ranks(&t, &[]), vec![0, 0, 0]);
        assert!(ishida_slice(&t, &all).is_complex());
    }

    #[test]
    fn cech_twodim() {
        let t = p(&[vec![1, 1, 1], vec![0, 1, 2]]);
        let i = MonomialIdeal::new(&t, &[vec![1, 1]]).unwrap();
        assert_eq!(cech_ranks(&t, &i, &[-1, -1]).unwrap(), vec![0, 1]);
        assert_eq!(cech_ranks(&t, &i, &[0, 0]).unwrap(), vec![0, 0]);
    }

    #[test]
    fn cech_hartshorne() {
        let t = p(&[vec![1, 1, 1, 1], vec![0, 1, 0, 1], vec![0, 0, 1, 1]]);
        let i = MonomialIdeal::new(&t, &[vec![1, 0, 0], vec![1, 1, 0]]).unwrap();
        assert_eq!(cech_ranks(&t, &i, &[-2, -1, 0]).unwrap(), vec![0, 0, 1]);
        let slice = cech_slice(&t, &i, &[-2, -1, 0]).unwrap();
        assert!(slice.is_complex());
    }

    #[test]
    fn bad_ideal_rejected() {
        let t = p(&[vec![2, 3]]);
        assert!(matches!(
            MonomialIdeal::new(&t, &[vec![1]]),
            Err(Error::GeneratorNotInSemigroup { .. })
        ));
    }

    #[test]
    fn twodim_series() {
        let t = p(&[vec![1, 1, 1], vec![0, 1, 2]]);
        let e = enumerate_classes(&t, &BoxPolicy::default()).unwrap();
        let m = assemble_module(
            &t,
            &e,
            IdealSpec::Generators {
                generator_degrees: vec![vec![1, 1]],
            },
        )
        .unwrap();
        assert_eq!(m.length_at(1), 3);
        let order: Vec<usize> = m.module(1).unwrap().series.iter().map(|s| s.0).collect();
        assert_eq!(order, vec![1, 2, 3]);
        let max = local_cohomology_max(&t, &e).unwrap();
        assert_eq!(max.length, 1);
        assert_eq!(max.pieces, vec![Piece { class_id: 3, index: 2, rank: 1 }]);
    }

    #[test]
    fn polynomial_ring_socle() {
        let t = p(&[vec![1, 0], vec![0, 1]]);
        let s = socle_probe(&t, IdealSpec::Maximal, 2, &[1, 3]).unwrap();
        assert_eq!(s[0].degrees, vec![vec![-1, -1]]);
        assert_eq!(s[1].count, 1);
        // H^1_m vanishes
        let z = socle_probe(&t, IdealSpec::Maximal, 1, &[3]).unwrap();
        assert_eq!(z[0].count, 0);
    }
}
