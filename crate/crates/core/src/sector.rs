//! Signatures `τ ↦ E_τ(a)`, the sector filters `∇(a)`, enumeration of the
//! `∼`-classes by growing box scans, and the class poset.

use std::cmp::Ordering;
use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice;
use crate::semigroup::ToricPresentation;

/// `E_τ(a)` for every face, as sorted indices into
/// [`ToricPresentation::coset_reps`]. Faces appear in lattice order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Signature {
    pub sets: Vec<Vec<usize>>,
}

impl Signature {
    /// `E_τ(self) ⊆ E_τ(other)` for every face.
    pub fn leq(&self, other: &Signature) -> bool {
        self.sets
            .iter()
            .zip(&other.sets)
            .all(|(a, b)| a.iter().all(|x| b.binary_search(x).is_ok()))
    }

    pub fn equiv(&self, other: &Signature) -> bool {
        self == other
    }

    pub fn size(&self) -> usize {
        self.sets.iter().map(Vec::len).sum()
    }

    /// `∇`: the faces whose set contains the zero coset.
    pub fn sector(&self) -> Vec<usize> {
        self.sets
            .iter()
            .enumerate()
            .filter(|(_, s)| s.first() == Some(&0))
            .map(|(i, _)| i)
            .collect()
    }
}

/// An upward-closed set of faces with sample points of its region `P_∇`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectorFilter {
    pub faces: Vec<usize>,
    pub nonempty: bool,
    pub sample_points: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivClass {
    pub class_id: usize,
    pub signature: Signature,
    pub representative: Vec<i64>,
    /// `∇(a)` of any member `a`.
    pub sector: Vec<usize>,
    /// First members in scan order, representative included.
    pub samples: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoxPolicy {
    /// Defaults to `2 × max conductor + max |entry of A|`.
    pub initial_radius: Option<i64>,
    pub growth_factor: i64,
    /// Consecutive growth steps without a new signature before stopping.
    pub stable_steps: usize,
    /// Defaults to the initial radius times `growth_factor^4`.
    pub max_radius: Option<i64>,
    pub samples_per_class: usize,
}

impl Default for BoxPolicy {
    fn default() -> Self {
        BoxPolicy {
            initial_radius: None,
            growth_factor: 2,
            stable_steps: 2,
            max_radius: None,
            samples_per_class: 3,
        }
    }
}

impl BoxPolicy {
    pub fn initial_radius_for(&self, p: &ToricPresentation) -> i64 {
        self.initial_radius
            .unwrap_or_else(|| 2 * p.max_conductor() + p.max_abs_entry())
            .max(1)
    }

    pub fn max_radius_for(&self, p: &ToricPresentation) -> i64 {
        self.max_radius
            .unwrap_or_else(|| self.initial_radius_for(p) * self.growth_factor.max(2).pow(4))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassEnumeration {
    pub classes: Vec<EquivClass>,
    /// Every filter of the face lattice containing the whole cone.
    pub sectors: Vec<SectorFilter>,
    pub sectors_truncated: bool,
    /// Radii of the successive scanned boxes; the last one is final.
    pub radii: Vec<i64>,
    pub points_scanned: usize,
}

impl ClassEnumeration {
    pub fn final_radius(&self) -> i64 {
        *self.radii.last().expect("at least one box")
    }

    pub fn class_of_signature(&self, s: &Signature) -> Option<usize> {
        self.classes.iter().position(|c| &c.signature == s)
    }

    /// Class of an arbitrary degree.
    pub fn class_of(&self, p: &ToricPresentation, a: &[i64]) -> Result<usize> {
        let s = signature(p, a)?;
        self.class_of_signature(&s)
            .ok_or_else(|| Error::UnknownClass { degree: a.to_vec() })
    }
}

/// `E_τ(a)` as indices of coset representatives.
pub fn e_tau(p: &ToricPresentation, a: &[i64], face: usize) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (i, l) in p.coset_reps(face).iter().enumerate() {
        let shifted: Vec<i64> = a.iter().zip(l).map(|(x, y)| x - y).collect();
        if p.member_na_plus_face(&shifted, face)? {
            out.push(i);
        }
    }
    Ok(out)
}

pub fn signature(p: &ToricPresentation, a: &[i64]) -> Result<Signature> {
    let sets = (0..p.face_lattice().len())
        .map(|t| e_tau(p, a, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(Signature { sets })
}

/// `∇(a) = {τ : a ∈ NA + Z(A∩τ)}`, sorted by face id.
pub fn nabla(p: &ToricPresentation, a: &[i64]) -> Result<Vec<usize>> {
    let mut faces = Vec::new();
    for t in 0..p.face_lattice().len() {
        if p.member_na_plus_face(a, t)? {
            faces.push(t);
        }
    }
    debug_assert!(is_upward_closed(p, &faces));
    Ok(faces)
}

pub fn is_upward_closed(p: &ToricPresentation, faces: &[usize]) -> bool {
    let lat = p.face_lattice();
    faces.iter().all(|&t| {
        (0..lat.len()).all(|u| !lat.is_subface(t, u) || faces.contains(&u))
    })
}

/// Ordering of degrees in a scan: max-norm, then 1-norm, then lexicographic.
fn scan_key(a: &[i64]) -> (i64, i64, Vec<i64>) {
    let max = a.iter().map(|x| x.abs()).max().unwrap_or(0);
    let l1 = a.iter().map(|x| x.abs()).sum();
    (max, l1, a.to_vec())
}

/// Degrees with `inner < max-norm <= outer` (all of the box when `inner < 0`),
/// in scan order.
fn shell(d: usize, inner: i64, outer: i64) -> Vec<Vec<i64>> {
    let mut pts: Vec<Vec<i64>> = lattice::box_points(&vec![-outer; d], &vec![outer; d])
        .into_iter()
        .filter(|a| a.iter().map(|x| x.abs()).max().unwrap_or(0) > inner)
        .collect();
    pts.sort_by_key(|a| scan_key(a));
    pts
}

/// All upward-closed face sets containing the whole cone, largest first.
fn all_filters(p: &ToricPresentation, cap: usize) -> (Vec<Vec<usize>>, bool) {
    let lat = p.face_lattice();
    let mut order: Vec<usize> = (0..lat.len()).collect();
    order.sort_by(|a, b| lat.face(*b).dim.cmp(&lat.face(*a).dim).then(a.cmp(b)));
    let mut out = Vec::new();
    let mut chosen = vec![false; lat.len()];
    let mut truncated = false;
    fn go(
        p: &ToricPresentation,
        order: &[usize],
        pos: usize,
        chosen: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
        cap: usize,
        truncated: &mut bool,
    ) {
        if out.len() >= cap {
            *truncated = true;
            return;
        }
        if pos == order.len() {
            out.push((0..chosen.len()).filter(|&i| chosen[i]).collect());
            return;
        }
        let t = order[pos];
        let lat = p.face_lattice();
        let can_include = lat.upper_covers(t).iter().all(|&(u, _)| chosen[u]);
        let is_top = t == lat.top();
        if can_include {
            chosen[t] = true;
            go(p, order, pos + 1, chosen, out, cap, truncated);
            chosen[t] = false;
        }
        if !is_top {
            go(p, order, pos + 1, chosen, out, cap, truncated);
        }
    }
    go(p, &order, 0, &mut chosen, &mut out, cap, &mut truncated);
    out.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    (out, truncated)
}

const FILTER_CAP: usize = 4096;

/// Collects the distinct signatures of degrees in growing centered boxes.
pub fn enumerate_classes(p: &ToricPresentation, policy: &BoxPolicy) -> Result<ClassEnumeration> {
    if !p.is_pointed() {
        return Err(Error::NotPointed);
    }
    let d = p.dim();
    let mut radius = policy.initial_radius_for(p);
    let mut inner = -1;
    let mut radii = Vec::new();
    let mut classes: Vec<EquivClass> = Vec::new();
    let mut index: HashMap<Signature, usize> = HashMap::new();
    let mut stable = 0;
    let mut scanned = 0;
    loop {
        let pts = shell(d, inner, radius);
        let sigs = pts
            .par_iter()
            .map(|a| signature(p, a))
            .collect::<Result<Vec<_>>>()?;
        scanned += pts.len();
        let mut new = 0;
        for (a, s) in pts.into_iter().zip(sigs) {
            match index.get(&s) {
                Some(&c) => {
                    let class = &mut classes[c];
                    if class.samples.len() < policy.samples_per_class {
                        class.samples.push(a);
                    }
                }
                None => {
                    new += 1;
                    index.insert(s.clone(), classes.len());
                    classes.push(EquivClass {
                        class_id: classes.len(),
                        sector: s.sector(),
                        signature: s,
                        representative: a.clone(),
                        samples: vec![a],
                    });
                }
            }
        }
        radii.push(radius);
        if radii.len() > 1 {
            stable = if new == 0 { stable + 1 } else { 0 };
        }
        if stable >= policy.stable_steps {
            break;
        }
        let next = radius * policy.growth_factor.max(2);
        if next > policy.max_radius_for(p) {
            return Err(Error::EnumerationUnstable { radius });
        }
        inner = radius;
        radius = next;
    }
    let (filters, sectors_truncated) = all_filters(p, FILTER_CAP);
    let sectors = filters
        .into_iter()
        .map(|faces| {
            let sample_points: Vec<Vec<i64>> = classes
                .iter()
                .filter(|c| c.sector == faces)
                .flat_map(|c| c.samples.iter().cloned())
                .take(policy.samples_per_class)
                .collect();
            SectorFilter {
                nonempty: !sample_points.is_empty(),
                faces,
                sample_points,
            }
        })
        .collect();
    Ok(ClassEnumeration {
        classes,
        sectors,
        sectors_truncated,
        radii,
        points_scanned: scanned,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassPoset {
    /// `(larger, smaller)` for every strictly comparable pair.
    pub edges: Vec<(usize, usize)>,
    /// Larger classes first.
    pub linear_extension: Vec<usize>,
}

/// Priority among incomparable classes: bigger signatures first, then face by
/// face the larger set first.
fn priority(a: &Signature, b: &Signature) -> Ordering {
    b.size().cmp(&a.size()).then_with(|| {
        for (x, y) in a.sets.iter().zip(&b.sets) {
            let o = y.len().cmp(&x.len()).then_with(|| x.cmp(y));
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    })
}

pub fn class_poset(classes: &[EquivClass]) -> Result<ClassPoset> {
    let k = classes.len();
    let mut edges = Vec::new();
    let mut above = vec![0usize; k];
    for i in 0..k {
        for j in 0..k {
            if i != j && classes[j].signature.leq(&classes[i].signature) {
                if classes[i].signature.leq(&classes[j].signature) {
                    return Err(Error::CycleDetected(i, j));
                }
                edges.push((i, j));
                above[j] += 1;
            }
        }
    }
    let mut done = vec![false; k];
    let mut order = Vec::with_capacity(k);
    while order.len() < k {
        let next = (0..k)
            .filter(|&i| !done[i] && above[i] == 0)
            .min_by(|&a, &b| priority(&classes[a].signature, &classes[b].signature).then(a.cmp(&b)));
        let Some(i) = next else {
            let stuck: Vec<usize> = (0..k).filter(|&i| !done[i]).collect();
            return Err(Error::CycleDetected(stuck[0], *stuck.get(1).unwrap_or(&stuck[0])));
        };
        done[i] = true;
        order.push(i);
        for &(x, y) in &edges {
            if x == i {
                above[y] -= 1;
            }
        }
    }
    Ok(ClassPoset {
        edges,
        linear_extension: order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(rows: &[Vec<i64>]) -> ToricPresentation {
        ToricPresentation::from_rows(rows).unwrap()
    }

    fn face_with_columns(p: &ToricPresentation, cols: &[usize]) -> usize {
        (0..p.face_lattice().len())
            .find(|&f| p.face_lattice().face(f).column_indices == cols)
            .unwrap()
    }

    #[test]
    fn twodim_sectors() {
        let t = p(&[vec![1, 1, 1], vec![0, 1, 2]]);
        let s1 = face_with_columns(&t, &[0]);
        let s2 = face_with_columns(&t, &[2]);
        let top = t.face_lattice().top();
        assert_eq!(nabla(&t, &[0, 0]).unwrap().len(), 4);
        assert_eq!(nabla(&t, &[-1, 0]).unwrap(), vec![s1, top]);
        assert_eq!(nabla(&t, &[-1, -2]).unwrap(), vec![s2, top]);
        assert_eq!(nabla(&t, &[-1, -1]).unwrap(), vec![top]);

        let e = enumerate_classes(&t, &BoxPolicy::default()).unwrap();
        assert_eq!(e.classes.len(), 4);
        let reps: Vec<Vec<i64>> = e.classes.iter().map(|c| c.representative.clone()).collect();
        assert_eq!(reps, vec![vec![0, 0], vec![-1, 0], vec![0, -1], vec![-1, -1]]);
        let empty: Vec<&SectorFilter> = e.sectors.iter().filter(|s| !s.nonempty).collect();
        assert_eq!(empty.len(), 1);
        assert_eq!(empty[0].faces, vec![s1, s2, top]);
        assert_eq!(e.sectors.len(), 5);

        let poset = class_poset(&e.classes).unwrap();
        assert_eq!(poset.linear_extension, vec![0, 1, 2, 3]);
        assert!(poset.edges.contains(&(0, 3)));
        assert!(!poset.edges.contains(&(1, 2)) && !poset.edges.contains(&(2, 1)));
    }

    #[test]
    fn one_dim_two_classes() {
        for g in [vec![1], vec![2, 3], vec![3, 5, 7]] {
            let t = p(&[g.clone()]);
            let e = enumerate_classes(&t, &BoxPolicy::default()).unwrap();
            assert_eq!(e.classes.len(), 2, "{g:?}");
            assert_eq!(e.classes[0].representative, vec![0]);
            assert_eq!(e.classes[1].representative, vec![-1]);
            let poset = class_poset(&e.classes).unwrap();
            assert_eq!(poset.linear_extension, vec![0, 1]);
        }
    }

    #[test]
    fn identity_four_classes() {
        let t = p(&[vec![1, 0], vec![0, 1]]);
        let e = enumerate_classes(&t, &BoxPolicy::default()).unwrap();
        assert_eq!(e.classes.len(), 4);
        let poset = class_poset(&e.classes).unwrap();
        assert_eq!(poset.linear_extension[0], 0);
        assert_eq!(*poset.linear_extension.last().unwrap(), 3);
    }

    #[test]
    fn leq_is_a_preorder() {
        let t = p(&[vec![1, 1, 1], vec![0, 2, 3]]);
        let sigs: Vec<Signature> = lattice::box_points(&[-3, -3], &[3, 3])
            .iter()
            .map(|a| signature(&t, a).unwrap())
            .collect();
        for a in &sigs {
            assert!(a.leq(a));
            for b in &sigs {
                for c in &sigs {
                    if a.leq(b) && b.leq(c) {
                        assert!(a.leq(c));
                    }
                }
            }
        }
    }

    #[test]
    fn torsion_signature_sets() {
        // the face spanned by (2,0) has quotient torsion Z/2
        let t = p(&[vec![2, 0, 1], vec![0, 1, 1]]);
        let f = face_with_columns(&t, &[0]);
        assert_eq!(t.coset_reps(f).len(), 2);
        let e = enumerate_classes(&t, &BoxPolicy::default()).unwrap();
        assert!(e.classes.iter().any(|c| c.signature.sets[f].len() == 2));
    }
}
