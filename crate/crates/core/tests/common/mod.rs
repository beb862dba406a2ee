//! Corpus loading and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashSet;
use std::path::PathBuf;

use toriclc::cli::ProblemFile;
use toriclc::semigroup::ToricPresentation;

pub const CORPUS: &[&str] = &[
    "twodim",
    "hartshorne",
    "identity2",
    "identity3",
    "ns1",
    "ns23",
    "ns25",
    "ns345",
    "ns357",
    "ns469",
    "scored",
    "nons2",
    "hole",
];

pub const NUMERICAL: &[&str] = &["ns1", "ns23", "ns25", "ns345", "ns357", "ns469"];

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn corpus_path(name: &str) -> PathBuf {
    corpus_dir().join(format!("{name}.txt"))
}

pub fn load_problem(name: &str) -> ProblemFile {
    let text = std::fs::read_to_string(corpus_path(name)).expect("corpus file");
    ProblemFile::parse(&text).expect("corpus file parses")
}

pub fn load(name: &str) -> ToricPresentation {
    ToricPresentation::from_rows(&load_problem(name).matrix).expect("corpus matrix")
}

pub fn columns(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    (0..rows[0].len()).map(|j| rows.iter().map(|r| r[j]).collect()).collect()
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[i64], k: i64) -> Vec<i64> {
    a.iter().map(|x| k * x).collect()
}

/// Every point of `NA` up to a grading level, found by breadth-first search
/// over the columns.
pub struct BruteSemigroup {
    pub grading: Vec<i64>,
    pub level: i64,
    members: HashSet<Vec<i64>>,
}

impl BruteSemigroup {
    pub fn new(cols: &[Vec<i64>], level: i64) -> Self {
        let d = cols[0].len();
        let grading = positive_grading(cols).expect("pointed input");
        let mut members = HashSet::new();
        let mut frontier = vec![vec![0i64; d]];
        members.insert(vec![0i64; d]);
        while let Some(a) = frontier.pop() {
            for c in cols {
                let b = add(&a, c);
                if dot(&grading, &b) <= level && members.insert(b.clone()) {
                    frontier.push(b);
                }
            }
        }
        BruteSemigroup { grading, level, members }
    }

    pub fn contains(&self, a: &[i64]) -> bool {
        let w = dot(&self.grading, a);
        assert!(w <= self.level, "oracle level {} too low for {a:?}", self.level);
        self.members.contains(a)
    }

    /// `a + m b ∈ NA` for some `0 <= m <= max_m`.
    pub fn in_localization(&self, a: &[i64], b: &[i64], max_m: i64) -> bool {
        (0..=max_m).any(|m| self.contains(&add(a, &scale(b, m))))
    }
}

/// A functional in `[-3, 3]^d` positive on every column, smallest in L1 norm.
pub fn positive_grading(cols: &[Vec<i64>]) -> Option<Vec<i64>> {
    let d = cols[0].len();
    box_points(d, 3)
        .into_iter()
        .filter(|w| cols.iter().all(|c| dot(w, c) > 0))
        .min_by_key(|w| (w.iter().map(|x| x.abs()).sum::<i64>(), w.clone()))
}

/// Membership table of the numerical semigroup generated by `gens` on `0..=limit`.
pub fn numerical_members(gens: &[i64], limit: usize) -> Vec<bool> {
    let mut member = vec![false; limit + 1];
    member[0] = true;
    for x in 1..=limit {
        member[x] = gens.iter().any(|&g| g > 0 && g as usize <= x && member[x - g as usize]);
    }
    member
}

/// `#{x ∈ N : x + s ∉ N}` for `N` generated by `values`, by direct counting.
pub fn shift_count_oracle(values: &[i64], s: i64) -> u64 {
    let max = values.iter().copied().max().unwrap_or(1).max(1);
    let limit = (4 * max * max + 2 * s.abs() + 64) as usize;
    let member = numerical_members(values, limit);
    let is_member = |x: i64| x >= 0 && (x as usize) <= limit && member[x as usize];
    (0..(limit as i64 - s.abs()))
        .filter(|&x| is_member(x) && !is_member(x + s))
        .count() as u64
}

pub fn box_points(d: usize, r: i64) -> Vec<Vec<i64>> {
    toriclc::lattice::box_points(&vec![-r; d], &vec![r; d])
}
