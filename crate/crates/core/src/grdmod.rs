//! Exponent data of `gr D_A` for scored semigroups: the counts `n_{σ,a}`,
//! the identities relating them, the two-dimensional semigroup `gr D_A` of a
//! numerical semigroup, and certificates for the fibers of
//! `Spec gr D_A → Spec S_A` and the characteristic variety of `H^d_m`.

use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cohomology::ishida_ranks;
use crate::cone::combinations;
use crate::error::{Error, Result};
use crate::lattice::{self, IntMatrix};
use crate::sector::nabla;
use crate::semigroup::{Classification, ToricPresentation, DEFAULT_MARGIN};

/// Fixed seed for every sampled verification.
pub const SAMPLE_SEED: u64 = 0x5eed_2011;

/// `t^a · P_a` with `P_a = ∏_σ F_σ(Θ)^{n_{σ,a}}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GrMonomial {
    pub degree: Vec<i64>,
    pub theta_exponents: Vec<u64>,
}

fn require_scored(p: &ToricPresentation) -> Result<()> {
    if p.is_scored()? {
        Ok(())
    } else {
        Err(Error::NotScored)
    }
}

/// `n_{σ,a} = #{x ∈ N : x + F_σ(a) ∉ N}` with `N = F_σ(NA)`.
pub fn n_sigma(p: &ToricPresentation, a: &[i64], facet: usize) -> Result<u64> {
    require_scored(p)?;
    Ok(n_unchecked(p, a, facet))
}

fn n_unchecked(p: &ToricPresentation, a: &[i64], facet: usize) -> u64 {
    p.numerical_image(facet).shift_count(p.facets()[facet].eval(a))
}

pub fn gr_monomial(p: &ToricPresentation, a: &[i64]) -> Result<GrMonomial> {
    require_scored(p)?;
    Ok(GrMonomial {
        degree: a.to_vec(),
        theta_exponents: (0..p.facets().len()).map(|s| n_unchecked(p, a, s)).collect(),
    })
}

/// The "large k" used for `a` and `σ`.
pub fn large_k(p: &ToricPresentation, a: &[i64], facet: usize) -> i64 {
    p.numerical_image(facet).conductor + p.facets()[facet].eval(a).abs() + 1
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ClauseResult {
    /// Instances where the hypothesis of the clause held.
    pub checked: usize,
    pub failures: Vec<(Vec<i64>, usize)>,
}

impl ClauseResult {
    fn record(&mut self, ok: bool, a: &[i64], facet: usize) {
        self.checked += 1;
        if !ok {
            self.failures.push((a.to_vec(), facet));
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberLemmaReport {
    pub samples: usize,
    pub pairs: usize,
    /// `n_{σ,−a} = n_{σ,a} + F_σ(a)`.
    pub main: ClauseResult,
    pub clause1: ClauseResult,
    /// Facet index in failures is meaningless for this clause.
    pub clause2: ClauseResult,
    pub clause3: ClauseResult,
    pub clause4: ClauseResult,
    pub threshold: String,
}

impl FiberLemmaReport {
    pub fn passed(&self) -> bool {
        [&self.main, &self.clause1, &self.clause2, &self.clause3, &self.clause4]
            .iter()
            .all(|c| c.passed())
    }
}

fn scale(a: &[i64], k: i64) -> Vec<i64> {
    a.iter().map(|x| x * k).collect()
}

fn neg(a: &[i64]) -> Vec<i64> {
    a.iter().map(|x| -x).collect()
}

/// Checks the identity and its four consequences on every sample and facet.
pub fn verify_fiber_lemma(p: &ToricPresentation, samples: &[Vec<i64>]) -> Result<FiberLemmaReport> {
    require_scored(p)?;
    let bottom = p.face_lattice().bottom();
    let nf = p.facets().len();
    let mut report = FiberLemmaReport {
        samples: samples.len(),
        pairs: samples.len() * nf,
        main: ClauseResult::default(),
        clause1: ClauseResult::default(),
        clause2: ClauseResult::default(),
        clause3: ClauseResult::default(),
        clause4: ClauseResult::default(),
        threshold: "k = conductor(F_σ(NA)) + |F_σ(a)| + 1".into(),
    };
    for a in samples {
        let minus = neg(a);
        let in_na = p.member_exact(a, bottom)?;
        let all_nonpositive = p.facets().iter().all(|f| f.eval(a) <= 0);
        for s in 0..nf {
            let f = p.facets()[s].eval(a);
            let n_a = n_unchecked(p, a, s);
            let n_minus = n_unchecked(p, &minus, s);
            report.main.record(n_minus as i64 == n_a as i64 + f, a, s);
            let k = large_k(p, a, s);
            let n_ka = n_unchecked(p, &scale(a, k), s);
            if f <= 0 {
                report.clause1.record(n_ka <= k as u64 * n_a, a, s);
            }
            if in_na {
                report.clause3.record(n_minus as i64 == f && n_a == 0, a, s);
            }
            if f > 0 {
                report.clause4.record(n_ka == 0, a, s);
            }
        }
        if all_nonpositive && !p.member_exact(&minus, bottom)? {
            let k = (0..nf).map(|s| large_k(p, a, s)).max().unwrap_or(1);
            let ka = scale(a, k);
            let strict = (0..nf).any(|s| n_unchecked(p, &ka, s) < k as u64 * n_unchecked(p, a, s));
            report.clause2.record(strict, a, 0);
        }
    }
    Ok(report)
}

fn random_member(p: &ToricPresentation, rng: &mut ChaCha8Rng, max_coeff: i64) -> Vec<i64> {
    let mut b = vec![0i64; p.dim()];
    for c in p.columns() {
        let x = rng.gen_range(0..=max_coeff);
        for (bi, ci) in b.iter_mut().zip(c) {
            *bi += x * ci;
        }
    }
    b
}

/// Deterministic degrees for the lemma: uniform ones in a box around the
/// conductors, semigroup members, and their negatives, in rotation.
pub fn lemma_samples(p: &ToricPresentation, count: usize, seed: u64) -> Vec<Vec<i64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = 2 * p.max_conductor() + p.max_abs_entry() + 2;
    (0..count)
        .map(|i| match i % 3 {
            0 => (0..p.dim()).map(|_| rng.gen_range(-r..=r)).collect(),
            1 => random_member(p, &mut rng, 3),
            _ => neg(&random_member(p, &mut rng, 3)),
        })
        .collect()
}

/// Generators `(t-exponent, ξ-exponent)` of `gr D_A` for `d = 1`.
pub fn gr_generators_dim1(p: &ToricPresentation) -> Result<Vec<(u64, u64)>> {
    if p.dim() != 1 {
        return Err(Error::DimensionUnsupported {
            expected: 1,
            got: p.dim(),
        });
    }
    if !p.is_pointed() {
        return Err(Error::NotPointed);
    }
    let n = p.numerical_image(0);
    let mut out: BTreeSet<(u64, u64)> = BTreeSet::new();
    out.insert((1, 1));
    for &w in n.generators.iter().chain(&n.gaps) {
        let (u, v) = (n.shift_count(w), n.shift_count(-w));
        out.insert((u, v));
        out.insert((v, u));
    }
    Ok(out.into_iter().collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NotCmCertificate {
    pub generators: Vec<(u64, u64)>,
    pub holes: Vec<i64>,
    /// `max 2|Ω(−h)|` over holes `h`.
    pub ell: u64,
    /// Every `(u,v)` with `u + v ∈ {ℓ, ℓ+1}` lies in the semigroup.
    pub strip_contained: bool,
    /// `ℓ` is at least the conductor, so `(w,0), (0,w)` lie in it for `w >= ℓ`.
    pub ell_at_least_conductor: bool,
    /// Points of `N^2` outside the semigroup; all satisfy `u + v < ℓ`.
    pub gaps: Vec<(u64, u64)>,
    /// Classification of the semigroup generated by `generators`.
    pub gr_classification: Classification,
}

impl NotCmCertificate {
    pub fn finite_codimension(&self) -> bool {
        self.strip_contained && self.ell_at_least_conductor
    }

    pub fn s2_fails(&self) -> bool {
        !self.gr_classification.s2
    }
}

/// Finite codimension of `gr D_A` in `K[t, ξ]` and failure of (S2).
pub fn notcm_certificate(p: &ToricPresentation) -> Result<NotCmCertificate> {
    let generators = gr_generators_dim1(p)?;
    if p.is_normal()? {
        return Err(Error::IsNormal);
    }
    let n = p.numerical_image(0);
    let ell = n.gaps.iter().map(|&h| 2 * n.shift_count(-h)).max().unwrap_or(0);
    let top = (ell + 1) as usize;
    // member[u][v] for u + v <= ℓ + 1
    let mut member = vec![vec![false; top + 1]; top + 1];
    member[0][0] = true;
    for total in 1..=top {
        for u in 0..=total {
            let v = total - u;
            member[u][v] = generators.iter().any(|&(gu, gv)| {
                let (gu, gv) = (gu as usize, gv as usize);
                (gu, gv) != (0, 0) && gu <= u && gv <= v && member[u - gu][v - gv]
            });
        }
    }
    let strip_contained = [ell as usize, top]
        .iter()
        .all(|&t| (0..=t).all(|u| member[u][t - u]));
    let gaps = (0..ell as usize)
        .flat_map(|t| (0..=t).map(move |u| (u, t - u)))
        .filter(|&(u, v)| !member[u][v])
        .map(|(u, v)| (u as u64, v as u64))
        .collect();
    let columns: Vec<Vec<i64>> = generators
        .iter()
        .map(|&(u, v)| vec![u as i64, v as i64])
        .filter(|c| c != &vec![0, 0])
        .collect();
    let rows = vec![
        columns.iter().map(|c| c[0]).collect::<Vec<_>>(),
        columns.iter().map(|c| c[1]).collect::<Vec<_>>(),
    ];
    let gr = ToricPresentation::with_options(
        IntMatrix::from_rows(&rows)?,
        u64::MAX,
        DEFAULT_MARGIN.max(ell as i64),
    )?;
    Ok(NotCmCertificate {
        generators,
        holes: n.gaps.clone(),
        ell,
        strip_contained,
        ell_at_least_conductor: ell as i64 >= n.conductor,
        gaps,
        gr_classification: gr.classification()?.clone(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    OriginFiber,
    OrbitFiber,
    CharVarietyMax,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub checked: usize,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, checked: usize, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            checked,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberCertificate {
    pub kind: CertificateKind,
    pub generator_monomials: Vec<GrMonomial>,
    /// Rows of the matrix presenting the target semigroup.
    pub target_semigroup: Vec<Vec<i64>>,
    pub poly_vars: usize,
    pub face: Option<usize>,
    pub interior_point: Option<Vec<i64>>,
    pub checks: Vec<Check>,
}

impl FiberCertificate {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Number of random sums used for the additivity and injectivity checks.
pub const SUM_SAMPLES: usize = 50;

fn generator_monomials(p: &ToricPresentation) -> Vec<GrMonomial> {
    p.columns()
        .iter()
        .map(|c| {
            let a = neg(c);
            GrMonomial {
                theta_exponents: (0..p.facets().len()).map(|s| n_unchecked(p, &a, s)).collect(),
                degree: a,
            }
        })
        .collect()
}

/// `n_{σ,−a_i} = F_σ(a_i)` for every column and facet.
fn check_generator_exponents(p: &ToricPresentation, gens: &[GrMonomial]) -> Check {
    let mut bad = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        for (s, f) in p.facets().iter().enumerate() {
            if g.theta_exponents[s] as i64 != f.eval(&p.columns()[i]) {
                bad.push((i + 1, s));
            }
        }
    }
    Check::new(
        "generator_exponents",
        bad.is_empty(),
        gens.len() * p.facets().len(),
        if bad.is_empty() {
            "n_{σ,-a_i} = F_σ(a_i) for all columns and facets".to_string()
        } else {
            format!("mismatch at (column, facet) {bad:?}")
        },
    )
}

/// Additivity and injectivity of `x ↦ (−Ax, (n_{σ,−Ax})_σ)` on random
/// coefficient vectors.
fn check_exponent_map(p: &ToricPresentation, gens: &[GrMonomial]) -> (Check, Check) {
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let nf = p.facets().len();
    let mut additive_failures = 0;
    let mut images: HashMap<Vec<u64>, Vec<i64>> = HashMap::new();
    let mut injective = true;
    for _ in 0..SUM_SAMPLES {
        let x: Vec<u64> = (0..gens.len()).map(|_| rng.gen_range(0..=4)).collect();
        let mut degree = vec![0i64; p.dim()];
        let mut expected = vec![0u64; nf];
        for (xi, g) in x.iter().zip(gens) {
            for (d, gd) in degree.iter_mut().zip(&g.degree) {
                *d += *xi as i64 * gd;
            }
            for (e, ge) in expected.iter_mut().zip(&g.theta_exponents) {
                *e += xi * ge;
            }
        }
        let actual: Vec<u64> = (0..nf).map(|s| n_unchecked(p, &degree, s)).collect();
        if actual != expected {
            additive_failures += 1;
        }
        // the exponents alone must already determine the degree
        match images.get(&actual) {
            Some(prev) if prev != &degree => injective = false,
            _ => {
                images.insert(actual, degree);
            }
        }
    }
    (
        Check::new(
            "additive_on_sums",
            additive_failures == 0,
            SUM_SAMPLES,
            format!("{additive_failures} failures; seed {SAMPLE_SEED:#x}"),
        ),
        Check::new(
            "injective_on_sums",
            injective,
            SUM_SAMPLES,
            format!("{} distinct images", images.len()),
        ),
    )
}

fn rows_of(p: &ToricPresentation) -> Vec<Vec<i64>> {
    p.matrix().to_i64_rows().expect("validated entries")
}

/// Reduced fiber of `Spec gr D_A` over the origin for simplicial scored `NA`.
pub fn fiber_at_origin(p: &ToricPresentation) -> Result<FiberCertificate> {
    if !p.is_pointed() {
        return Err(Error::HypothesisFailed("the semigroup is not pointed".into()));
    }
    if !p.is_simplicial() {
        return Err(Error::HypothesisFailed(format!(
            "the cone has {} facets in dimension {}; not simplicial",
            p.facets().len(),
            p.dim()
        )));
    }
    if !p.is_scored()? {
        return Err(Error::HypothesisFailed("the semigroup is not scored".into()));
    }
    let gens = generator_monomials(p);
    let mut checks = vec![check_generator_exponents(p, &gens)];
    let (add, inj) = check_exponent_map(p, &gens);
    checks.push(add);
    checks.push(inj);
    Ok(FiberCertificate {
        kind: CertificateKind::OriginFiber,
        generator_monomials: gens,
        target_semigroup: rows_of(p),
        poly_vars: 0,
        face: None,
        interior_point: None,
        checks,
    })
}

/// Reduced fiber over a point of the orbit of `face`: the semigroup
/// `(NA + Z(A∩τ)) / Z(A∩τ)` in Smith coordinates, times `dim τ` free
/// variables.
pub fn fiber_at_orbit(p: &ToricPresentation, face: usize) -> Result<FiberCertificate> {
    if !p.is_pointed() || !p.is_simplicial() || !p.is_scored()? {
        return Err(Error::HypothesisFailed(
            "the semigroup must be pointed, simplicial and scored".into(),
        ));
    }
    let lat = p.face_lattice();
    if face >= lat.len() || face == lat.top() {
        return Err(Error::HypothesisFailed(format!("face {face} is not a proper face")));
    }
    let q = p.face_quotient(face);
    if !q.torsion_invariants().is_empty() {
        return Err(Error::HypothesisFailed(format!(
            "Z^d / Z(A∩τ) has torsion {:?}",
            q.torsion_invariants().iter().map(ToString::to_string).collect::<Vec<_>>()
        )));
    }
    let e = lat.face(face).dim;
    let free = q.free_rank();
    let mut columns: Vec<Vec<i64>> = Vec::new();
    for (j, c) in p.columns().iter().enumerate() {
        if lat.face(face).column_indices.contains(&j) {
            continue;
        }
        let y = lattice::to_i64(&q.project(&lattice::to_big(c)))?;
        debug_assert_eq!(y.len(), free);
        if !columns.contains(&y) {
            columns.push(y);
        }
    }
    let rows: Vec<Vec<i64>> = (0..free).map(|i| columns.iter().map(|c| c[i]).collect()).collect();
    let b = ToricPresentation::new(IntMatrix::from_rows(&rows)?)?;
    let simplicial = b.is_pointed() && b.is_simplicial();
    let scored = b.is_pointed() && b.is_scored()?;
    let mut checks = vec![Check::new(
        "quotient_simplicial_scored",
        simplicial && scored,
        1,
        format!("simplicial: {simplicial}, scored: {scored}"),
    )];
    let gens = if scored { generator_monomials(&b) } else { Vec::new() };
    if scored {
        checks.push(check_generator_exponents(&b, &gens));
        let (add, inj) = check_exponent_map(&b, &gens);
        checks.push(add);
        checks.push(inj);
    }
    Ok(FiberCertificate {
        kind: CertificateKind::OrbitFiber,
        generator_monomials: gens,
        target_semigroup: rows,
        poly_vars: e,
        face: Some(face),
        interior_point: None,
        checks,
    })
}

/// First sum of columns, by subset size then lexicographically, that is
/// positive on every facet.
pub fn interior_point(p: &ToricPresentation) -> Result<Vec<i64>> {
    let n = p.num_columns();
    for k in 1..=n {
        for subset in combinations(n, k) {
            let mut a = vec![0i64; p.dim()];
            for &j in &subset {
                for (x, y) in a.iter_mut().zip(&p.columns()[j]) {
                    *x += y;
                }
            }
            if p.facets().iter().all(|f| f.eval(&a) > 0) {
                return Ok(a);
            }
        }
    }
    Err(Error::NoInteriorPoint)
}

/// Largest multiplier tried in step (1).
pub const STEP1_MAX_N: i64 = 64;

/// Characteristic variety of `H^d_m(S_A)` for scored pointed `NA`.
pub fn char_variety_max(p: &ToricPresentation) -> Result<FiberCertificate> {
    if !p.is_pointed() {
        return Err(Error::HypothesisFailed("the semigroup is not pointed".into()));
    }
    if !p.is_scored()? {
        return Err(Error::HypothesisFailed("the semigroup is not scored".into()));
    }
    let d = p.dim();
    let bottom = p.face_lattice().bottom();
    let alpha = interior_point(p)?;
    let facet_faces: Vec<usize> = (0..p.facets().len()).map(|s| p.face_lattice().facet_face(s)).collect();
    let mut checks = Vec::new();

    // (1) degrees outside −sat(NA): n·a − α reaches NA + Z(A∩σ) whenever F_σ(a) > 0
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let r = 2 * p.max_conductor() + p.max_abs_entry() + 2;
    let mut checked = 0;
    let mut max_n = 0;
    let mut ok1 = true;
    for _ in 0..SUM_SAMPLES {
        let a: Vec<i64> = (0..d).map(|_| rng.gen_range(-r..=r)).collect();
        for (s, f) in p.facets().iter().enumerate() {
            if f.eval(&a) <= 0 {
                continue;
            }
            checked += 1;
            let hit = (1..=STEP1_MAX_N).find(|&n| {
                let b: Vec<i64> = a.iter().zip(&alpha).map(|(x, y)| n * x - y).collect();
                p.member_exact(&b, facet_faces[s]).expect("pointed")
            });
            match hit {
                Some(n) => max_n = max_n.max(n),
                None => ok1 = false,
            }
        }
    }
    checks.push(Check::new(
        "step1_outside_negative_cone",
        ok1,
        checked,
        format!("largest n needed: {max_n} (searched up to {STEP1_MAX_N})"),
    ));

    // (2) t^{-α} spans a degree of H^d_m
    let top_rank = ishida_ranks(p, &nabla(p, &neg(&alpha))?)[d];
    checks.push(Check::new(
        "step2_interior_degree",
        top_rank == 1,
        1,
        format!("rank of H^d_m in degree -α: {top_rank}"),
    ));

    // (3) −sat ∖ −NA is killed by a power; −NA∖{0} factors through generators
    let bounds: Vec<i64> = (0..p.facets().len())
        .map(|s| p.numerical_image(s).conductor + DEFAULT_MARGIN)
        .collect();
    let mut holes_checked = 0;
    let mut ok3 = true;
    for c in p.facet_box(&bounds) {
        if p.member_exact(&c, bottom)? {
            continue;
        }
        holes_checked += 1;
        let a = neg(&c);
        let nf = p.facets().len();
        let k = (0..nf).map(|s| large_k(p, &a, s)).max().unwrap_or(1);
        let ka = scale(&a, k);
        ok3 &= (0..nf).any(|s| n_unchecked(p, &ka, s) < k as u64 * n_unchecked(p, &a, s));
    }
    let gens = generator_monomials(p);
    checks.push(Check::new(
        "step3_holes_nilpotent",
        ok3,
        holes_checked,
        "strict drop n_{σ,ka} < k n_{σ,a} on negated holes of the classification box",
    ));

    // (4) for a ∈ −NA ∖ {0}: a − α avoids NA + Z(A∩σ) for every facet
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED ^ 4);
    let mut ok4 = true;
    let mut checked4 = 0;
    for _ in 0..SUM_SAMPLES {
        let b = random_member(p, &mut rng, 3);
        if b.iter().all(|&x| x == 0) {
            continue;
        }
        checked4 += 1;
        let shifted: Vec<i64> = b.iter().zip(&alpha).map(|(x, y)| -x - y).collect();
        for &f in &facet_faces {
            if p.member_exact(&shifted, f)? {
                ok4 = false;
            }
        }
    }
    checks.push(Check::new(
        "step4_nonvanishing",
        ok4,
        checked4,
        "a - α outside every NA + Z(A∩σ)",
    ));
    checks.push(check_generator_exponents(p, &gens));
    let (add, inj) = check_exponent_map(p, &gens);
    checks.push(add);
    checks.push(inj);
    Ok(FiberCertificate {
        kind: CertificateKind::CharVarietyMax,
        generator_monomials: gens,
        target_semigroup: rows_of(p),
        poly_vars: 0,
        face: None,
        interior_point: Some(alpha),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(rows: &[Vec<i64>]) -> ToricPresentation {
        ToricPresentation::from_rows(rows).unwrap()
    }

    #[test]
    fn n_sigma_two_three() {
        let t = p(&[vec![2, 3]]);
        assert_eq!(n_sigma(&t, &[-1], 0).unwrap(), 2);
        assert_eq!(n_sigma(&t, &[1], 0).unwrap(), 1);
        assert_eq!(n_sigma(&t, &[5], 0).unwrap(), 0);
        let r = verify_fiber_lemma(&t, &[vec![1], vec![0], vec![-4], vec![7]]).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn n_sigma_requires_scored() {
        let t = p(&[vec![1, 1, 1, 1], vec![0, 1, 3, 4]]);
        assert_eq!(n_sigma(&t, &[0, 0], 0), Err(Error::NotScored));
    }

    #[test]
    fn generators_dim1() {
        let g = gr_generators_dim1(&p(&[vec![2, 3]])).unwrap();
        for x in [(1, 1), (0, 2), (2, 0), (0, 3), (3, 0), (1, 2), (2, 1)] {
            assert!(g.contains(&x), "{x:?}");
        }
        assert_eq!(g.len(), 7);
        assert_eq!(gr_generators_dim1(&p(&[vec![1]])).unwrap(), vec![(0, 1), (1, 0), (1, 1)]);
    }

    #[test]
    fn notcm_two_three() {
        let c = notcm_certificate(&p(&[vec![2, 3]])).unwrap();
        assert_eq!(c.ell, 4);
        assert_eq!(c.gaps, vec![(0, 1), (1, 0)]);
        assert!(c.finite_codimension());
        assert!(c.s2_fails());
        assert_eq!(notcm_certificate(&p(&[vec![1]])), Err(Error::IsNormal));
    }

    #[test]
    fn fibers() {
        let two = p(&[vec![1, 1, 1], vec![0, 1, 2]]);
        assert!(fiber_at_origin(&two).unwrap().passed());
        let s1 = (0..4).find(|&f| two.face_lattice().face(f).column_indices == vec![0]).unwrap();
        let orbit = fiber_at_orbit(&two, s1).unwrap();
        assert!(orbit.passed(), "{orbit:?}");
        assert_eq!(orbit.poly_vars, 1);
        assert_eq!(orbit.target_semigroup.len(), 1);

        let h = p(&[vec![1, 1, 1, 1], vec![0, 1, 0, 1], vec![0, 0, 1, 1]]);
        assert!(matches!(fiber_at_origin(&h), Err(Error::HypothesisFailed(_))));
        let cv = char_variety_max(&h).unwrap();
        assert!(cv.passed(), "{cv:?}");
        assert_eq!(cv.interior_point, Some(vec![2, 1, 1]));
    }

    #[test]
    fn orbit_identity() {
        let id = p(&[vec![1, 0], vec![0, 1]]);
        let axis = (0..4).find(|&f| id.face_lattice().face(f).column_indices == vec![0]).unwrap();
        let c = fiber_at_orbit(&id, axis).unwrap();
        assert_eq!(c.target_semigroup.len(), 1);
        assert_eq!(c.target_semigroup[0].iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![1]);
        assert_eq!(c.poly_vars, 1);
        let origin = fiber_at_orbit(&id, 0).unwrap();
        assert_eq!(origin.poly_vars, 0);
        assert_eq!(origin.target_semigroup, vec![vec![1, 0], vec![0, 1]]);
    }
}
