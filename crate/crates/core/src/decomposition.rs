//! Admissible decompositions of a class into curve classes on `X_k`.
//!
//! Components are either rigid (a fixed list, by default the chain classes
//! `H_0` together with `E_3` and `E_k`) or free classes `(d; m)` with `d > 0`,
//! `m >= 0` satisfying positivity and the genus zero adjunction bound
//!
//! ```text
//! d >= m1 + m2 + m3        2d >= m4 + .. + mk
//! m1 >= m2 >= m3           m4 >= .. >= mk
//! sum (m_i^2 - m_i) <= 2 + d^2 - 3d
//! ```
//!
//! The search fixes the positive-degree parts by depth-first search and
//! solves for the degree-zero rigid part, which is unique because the
//! degree-zero rigid classes are linearly independent.

use std::fmt;

use serde::Serialize;

use crate::lattice::DivisorClass;
use crate::rational::q;
use crate::reduced_space::h0_classes;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("target must be an integral class")]
    NotIntegral,
    #[error("target degree {0} is outside 0..=8")]
    DegreeOutOfRange(i128),
    #[error("target lives on X_{0}, profile on X_{1}")]
    WrongK(usize, usize),
    #[error("search budget exceeded: {0}")]
    Budget(String),
}

/// How the within-block ordering conditions are applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Ordering {
    /// Each block must be nonincreasing as written. These inequalities are
    /// positivity against the chain curves `E_i - E_{i+1}`.
    Literal,
    /// Blocks are sorted before testing, so classes are taken up to
    /// permutations within each block.
    UpToBlockSymmetry,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdmissibilityProfile {
    pub name: String,
    pub k: usize,
    pub rigid: Vec<DivisorClass>,
    pub excluded: Vec<DivisorClass>,
    /// Whether `2d >= m4 + .. + mk` is imposed.
    pub second_block_bound: bool,
    /// Represented classes every free component must pair nonnegatively with.
    pub positive_against: Vec<DivisorClass>,
    pub ordering: Ordering,
}

impl AdmissibilityProfile {
    /// Rigid set `H_0 + {E_3, E_k}`, no exclusions.
    pub fn base(k: usize) -> Self {
        let mut rigid = h0_classes(k);
        rigid.push(DivisorClass::exceptional(k, 3).expect("k >= 3"));
        rigid.push(DivisorClass::exceptional(k, k).expect("k >= 3"));
        Self {
            name: format!("base{k}"),
            k,
            rigid,
            excluded: Vec::new(),
            second_block_bound: true,
            positive_against: Vec::new(),
            ordering: Ordering::Literal,
        }
    }

    /// Eight points, with `L - E145`, `L - E1234` and `3L - 2E4 - (others)`
    /// excluded.
    pub fn step2() -> Self {
        let mut p = Self::base(8);
        p.name = "step2".into();
        p.excluded = vec![
            DivisorClass::from_tuple(1, &[1, 0, 0, 1, 1, 0, 0, 0]),
            DivisorClass::from_tuple(1, &[1, 1, 1, 1, 0, 0, 0, 0]),
            DivisorClass::from_tuple(3, &[1, 1, 1, 2, 1, 1, 1, 1]),
        ];
        p
    }

    /// `step2` without the bound on the second block, with positivity
    /// against `E_3'` and `E_8'` instead.
    pub fn step3() -> Self {
        let mut p = Self::step2();
        p.name = "step3".into();
        p.second_block_bound = false;
        p.positive_against = vec![e3_prime(), e8_prime()];
        p
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "step2" => Some(Self::step2()),
            "step3" => Some(Self::step3()),
            "base" | "base8" => Some(Self::base(8)),
            _ => None,
        }
    }

    pub fn without_exclusion(mut self, c: &DivisorClass) -> Self {
        self.excluded.retain(|e| e != c);
        self.name = format!("{}-lifted", self.name);
        self
    }

    pub fn up_to_block_symmetry(mut self) -> Self {
        self.ordering = Ordering::UpToBlockSymmetry;
        self
    }

    /// Index blocks `{1,2,3}` and `{4..k}`, 0-based half-open.
    fn blocks(&self) -> [(usize, usize); 2] {
        [(0, 3), (3, self.k)]
    }
}

/// A reason a class is not a free component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Violation {
    NotIntegral,
    NonPositiveDegree,
    NegativeMultiplicity,
    FirstBlockSum,
    SecondBlockSum,
    NotMonotone,
    Adjunction,
    NegativePairing,
    Excluded,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::NotIntegral => "class is not integral",
            Self::NonPositiveDegree => "degree is not positive",
            Self::NegativeMultiplicity => "negative multiplicity",
            Self::FirstBlockSum => "d < m1 + m2 + m3",
            Self::SecondBlockSum => "2d < m4 + .. + mk",
            Self::NotMonotone => "multiplicities not nonincreasing within a block",
            Self::Adjunction => "genus zero adjunction bound fails",
            Self::NegativePairing => "negative pairing with a represented class",
            Self::Excluded => "class is excluded",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Admissibility {
    pub admissible: bool,
    pub rigid: bool,
    pub violations: Vec<Violation>,
}

fn tuple_ints(c: &DivisorClass) -> Option<(i128, Vec<i128>)> {
    if !c.is_integral() {
        return None;
    }
    Some((c.d().to_integer(), c.tuple_m().iter().map(|x| x.to_integer()).collect()))
}

/// Checks every condition and reports all that fail.
pub fn is_admissible(c: &DivisorClass, profile: &AdmissibilityProfile) -> Admissibility {
    if profile.rigid.contains(c) {
        return Admissibility { admissible: true, rigid: true, violations: Vec::new() };
    }
    let mut v = Vec::new();
    match tuple_ints(c) {
        None => v.push(Violation::NotIntegral),
        Some((d, m)) => {
            if c.k() != profile.k {
                v.push(Violation::NotIntegral);
            } else {
                v.extend(free_violations(d, &m, profile));
            }
        }
    }
    if profile.excluded.contains(c) {
        v.push(Violation::Excluded);
    }
    Admissibility { admissible: v.is_empty(), rigid: false, violations: v }
}

fn free_violations(d: i128, m: &[i128], profile: &AdmissibilityProfile) -> Vec<Violation> {
    let mut v = Vec::new();
    let [b1, b2] = profile.blocks();
    if d <= 0 {
        v.push(Violation::NonPositiveDegree);
    }
    if m.iter().any(|&x| x < 0) {
        v.push(Violation::NegativeMultiplicity);
    }
    let s1: i128 = m[b1.0..b1.1].iter().sum();
    let s2: i128 = m[b2.0..b2.1].iter().sum();
    if d < s1 {
        v.push(Violation::FirstBlockSum);
    }
    if profile.second_block_bound && 2 * d < s2 {
        v.push(Violation::SecondBlockSum);
    }
    if profile.ordering == Ordering::Literal {
        let mono = |r: &[i128]| r.windows(2).all(|w| w[0] >= w[1]);
        if !mono(&m[b1.0..b1.1]) || !mono(&m[b2.0..b2.1]) {
            v.push(Violation::NotMonotone);
        }
    }
    let lhs: i128 = m.iter().map(|x| x * x - x).sum();
    if lhs > 2 + d * d - 3 * d {
        v.push(Violation::Adjunction);
    }
    let negative = profile.positive_against.iter().any(|p| {
        let pm = p.tuple_m();
        let dot = *p.d() * q(d) - pm.iter().zip(m).map(|(a, b)| a * q(*b)).sum::<crate::Q>();
        dot < q(0) && p != &DivisorClass::from_tuple(d, m)
    });
    if negative {
        v.push(Violation::NegativePairing);
    }
    v
}

/// All free classes of degree `1..=max_d` admissible under `profile`.
pub fn free_classes(profile: &AdmissibilityProfile, max_d: i128) -> Vec<DivisorClass> {
    let mut out = Vec::new();
    let mut m = Vec::with_capacity(profile.k);
    for d in 1..=max_d {
        collect_free(profile, d, &mut m, &mut out);
    }
    out.sort_by(|a, b| b.d().cmp(a.d()).then_with(|| a.cmp(b)));
    out
}

fn collect_free(profile: &AdmissibilityProfile, d: i128, m: &mut Vec<i128>, out: &mut Vec<DivisorClass>) {
    let budget = 2 + d * d - 3 * d;
    let used: i128 = m.iter().map(|x| x * x - x).sum();
    if used > budget {
        return;
    }
    if m.len() == profile.k {
        let c = DivisorClass::from_tuple(d, m);
        if free_violations(d, m, profile).is_empty() && !profile.excluded.contains(&c) && !profile.rigid.contains(&c) {
            out.push(c);
        }
        return;
    }
    // partial sums only grow, so a violated block bound or ordering is final
    let i = m.len();
    let b2_start = profile.blocks()[1].0;
    let (block_start, block_cap) = if i < b2_start {
        (0, d)
    } else if profile.second_block_bound {
        (b2_start, 2 * d)
    } else {
        (b2_start, i128::MAX)
    };
    let block_sum: i128 = m[block_start..].iter().sum();
    // m_i <= d since a single point cannot exceed the degree under adjunction
    let mut hi = d.min(block_cap.saturating_sub(block_sum));
    if profile.ordering == Ordering::Literal && i > block_start {
        hi = hi.min(m[i - 1]);
    }
    for x in 0..=hi {
        m.push(x);
        collect_free(profile, d, m, out);
        m.pop();
    }
}

/// A multiset of components, sorted by decreasing degree then class order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Decomposition {
    pub parts: Vec<Part>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Part {
    pub class: DivisorClass,
    pub multiplicity: u32,
}

impl Decomposition {
    pub fn part_count(&self) -> u32 {
        self.parts.iter().map(|p| p.multiplicity).sum()
    }

    pub fn total(&self, k: usize) -> DivisorClass {
        self.parts
            .iter()
            .fold(DivisorClass::zero(k), |acc, p| acc + p.class.scale(q(p.multiplicity as i128)))
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .parts
            .iter()
            .map(|p| {
                if p.multiplicity == 1 {
                    format!("({})", p.class)
                } else {
                    format!("{}*({})", p.multiplicity, p.class)
                }
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

/// Limits on the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Largest number of parts (with multiplicity) a reported decomposition
    /// may have; a larger one is an error rather than being dropped.
    pub max_parts: u32,
    pub max_nodes: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self { max_parts: 64, max_nodes: 5_000_000 }
    }
}

/// Receives each decomposition as `(rank, class, multiplicity)` triples.
type Visitor<'a, 'v> = dyn FnMut(&[(u32, &'a DivisorClass, u32)]) + 'v;

struct Search<'a, 'v> {
    profile: &'a AdmissibilityProfile,
    candidates: &'a [(i128, Vec<i128>, DivisorClass)],
    /// degree-zero rigid classes in prefix-sum order, per block
    zero_rigid: &'a [DivisorClass],
    /// position of each part in the display order of a decomposition
    rank: &'a [u32],
    zero_rank: &'a [u32],
    target_raw: Vec<i128>,
    /// max over candidates of (prefix contribution / degree) per prefix index
    prefix_rate: &'a [i128],
    nodes: u64,
    budget: SearchBudget,
    picked: Vec<(u32, &'a DivisorClass, u32)>,
    visit: &'v mut Visitor<'a, 'v>,
}

/// Every multiset of at least two admissible classes summing to `target`,
/// ordered by their parts in display order.
pub fn enumerate_decompositions(
    target: &DivisorClass,
    profile: &AdmissibilityProfile,
    budget: SearchBudget,
) -> Result<Vec<Decomposition>, SearchError> {
    let (d, _) = tuple_ints(target).ok_or(SearchError::NotIntegral)?;
    if !(0..=MAX_DEGREE).contains(&d) {
        return Err(SearchError::DegreeOutOfRange(d));
    }
    Decomposer::new(profile, d).decompose(target, budget)
}

const MAX_DEGREE: i128 = 8;

/// Candidate parts for one profile up to a fixed degree, reusable across
/// many targets.
pub struct Decomposer<'a> {
    profile: &'a AdmissibilityProfile,
    max_d: i128,
    /// positive-degree parts, decreasing degree
    candidates: Vec<(i128, Vec<i128>, DivisorClass)>,
    zero_rigid: Vec<DivisorClass>,
    rank: Vec<u32>,
    zero_rank: Vec<u32>,
    /// per target degree: max over usable candidates of the block prefix
    /// sum of multiplicities per unit of degree, rounded up
    prefix_rate: Vec<Vec<i128>>,
}

impl<'a> Decomposer<'a> {
    pub fn new(profile: &'a AdmissibilityProfile, max_d: i128) -> Self {
        let max_d = max_d.clamp(0, MAX_DEGREE);
        let mut candidates: Vec<(i128, Vec<i128>, DivisorClass)> = free_classes(profile, max_d)
            .into_iter()
            .map(|c| {
                let (d, m) = tuple_ints(&c).expect("integral");
                (d, m, c)
            })
            .collect();
        let mut zero_rigid = Vec::new();
        for r in &profile.rigid {
            let (rd, rm) = tuple_ints(r).expect("rigid classes are integral");
            if rd > 0 {
                candidates.push((rd, rm, r.clone()));
            } else if rd == 0 {
                zero_rigid.push(r.clone());
            }
        }
        candidates.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.2.cmp(&b.2)));
        let zero_rigid = order_zero_rigid(profile.k, &profile.blocks(), zero_rigid);
        let all: Vec<&DivisorClass> = candidates.iter().map(|c| &c.2).chain(&zero_rigid).collect();
        let mut order: Vec<usize> = (0..all.len()).collect();
        order.sort_by(|&a, &b| part_order(all[a], all[b]));
        let mut ranks = vec![0u32; all.len()];
        for (r, &i) in order.iter().enumerate() {
            ranks[i] = r as u32;
        }
        let zero_rank = ranks.split_off(candidates.len());
        let prefix_rate = (0..=max_d)
            .map(|d| {
                let mut rate = vec![0i128; profile.k];
                for (cd, cm, _) in candidates.iter().filter(|c| c.0 <= d) {
                    for (j, r) in rate.iter_mut().enumerate() {
                        let start = if j < 3 { 0 } else { 3 };
                        let s: i128 = cm[start..=j].iter().sum();
                        *r = (*r).max((s + cd - 1) / cd);
                    }
                }
                rate
            })
            .collect();
        Self { profile, max_d, candidates, zero_rigid, rank: ranks, zero_rank, prefix_rate }
    }

    pub fn decompose(&self, target: &DivisorClass, budget: SearchBudget) -> Result<Vec<Decomposition>, SearchError> {
        let mut found: Vec<(Vec<(u32, u32)>, Decomposition)> = Vec::new();
        self.search(target, budget, &mut |picked| {
            let key = picked.iter().map(|p| (p.0, p.2)).collect();
            let parts = picked
                .iter()
                .map(|&(_, class, multiplicity)| Part { class: class.clone(), multiplicity })
                .collect();
            found.push((key, Decomposition { parts }));
        })?;
        found.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        Ok(found.into_iter().map(|(_, d)| d).collect())
    }

    /// Calls `f` with the parts of each decomposition, in display order,
    /// without collecting them. Returns the number of decompositions.
    pub fn for_each<'s>(
        &'s self,
        target: &DivisorClass,
        budget: SearchBudget,
        mut f: impl FnMut(&[(&'s DivisorClass, u32)]),
    ) -> Result<u64, SearchError> {
        let mut count = 0;
        let mut buf = Vec::new();
        self.search(target, budget, &mut |picked| {
            buf.clear();
            buf.extend(picked.iter().map(|&(_, c, n)| (c, n)));
            f(&buf);
            count += 1;
        })?;
        Ok(count)
    }

    fn search<'s>(
        &'s self,
        target: &DivisorClass,
        budget: SearchBudget,
        visit: &mut Visitor<'s, '_>,
    ) -> Result<(), SearchError> {
        let (d, _) = tuple_ints(target).ok_or(SearchError::NotIntegral)?;
        let k = self.profile.k;
        if target.k() != k {
            return Err(SearchError::WrongK(target.k(), k));
        }
        if !(0..=self.max_d).contains(&d) {
            return Err(SearchError::DegreeOutOfRange(d));
        }
        let first = self.candidates.partition_point(|c| c.0 > d);
        let candidates = &self.candidates[first..];
        let prefix_rate = &self.prefix_rate[d as usize];
        let mut s = Search {
            profile: self.profile,
            candidates,
            zero_rigid: &self.zero_rigid,
            rank: &self.rank[first..],
            zero_rank: &self.zero_rank,
            target_raw: target.m().iter().map(|x| x.to_integer()).collect(),
            prefix_rate,
            nodes: 0,
            budget,
            picked: Vec::new(),
            visit,
        };
        let mut chosen = Vec::new();
        s.dfs(0, d, &mut vec![0; k], &mut chosen)
    }
}

/// Decreasing degree, then increasing multiplicity tuple.
fn part_order(a: &DivisorClass, b: &DivisorClass) -> std::cmp::Ordering {
    b.d().cmp(a.d()).then_with(|| a.tuple_m().cmp(&b.tuple_m()))
}

/// When the degree-zero rigid classes are the chain `E_a - E_{a+1}, .., E_b`
/// for each block, they are returned in that order; otherwise `None` is
/// signalled by an empty vector and the generic solver is used.
fn order_zero_rigid(k: usize, blocks: &[(usize, usize); 2], zero: Vec<DivisorClass>) -> Vec<DivisorClass> {
    let mut ordered = Vec::new();
    for &(lo, hi) in blocks {
        for i in lo + 1..hi {
            ordered.push(
                DivisorClass::exceptional(k, i).expect("range") - DivisorClass::exceptional(k, i + 1).expect("range"),
            );
        }
        ordered.push(DivisorClass::exceptional(k, hi).expect("range"));
    }
    let mut a = ordered.clone();
    let mut b = zero.clone();
    a.sort();
    b.sort();
    if a == b {
        ordered
    } else {
        zero
    }
}

impl Search<'_, '_> {
    fn dfs(
        &mut self,
        start: usize,
        remaining: i128,
        added: &mut Vec<i128>,
        chosen: &mut Vec<usize>,
    ) -> Result<(), SearchError> {
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes {
            return Err(SearchError::Budget(format!("more than {} search nodes", self.budget.max_nodes)));
        }
        if remaining == 0 {
            return self.finish(added, chosen);
        }
        if !self.prefixes_reachable(added, remaining) {
            return Ok(());
        }
        for idx in start..self.candidates.len() {
            let cd = self.candidates[idx].0;
            if cd > remaining {
                continue;
            }
            for (a, x) in added.iter_mut().zip(&self.candidates[idx].1) {
                *a += x;
            }
            chosen.push(idx);
            self.dfs(idx, remaining - cd, added, chosen)?;
            chosen.pop();
            for (a, x) in added.iter_mut().zip(&self.candidates[idx].1) {
                *a -= x;
            }
        }
        Ok(())
    }

    /// Each block prefix sum of the remainder must end up `>= 0`; future parts
    /// can raise prefix `j` by at most `prefix_rate[j]` per unit of degree.
    fn prefixes_reachable(&self, added: &[i128], remaining: i128) -> bool {
        if self.zero_rigid.len() != self.profile.k {
            return true;
        }
        let mut acc = 0;
        for j in 0..self.profile.k {
            if j == 3 {
                acc = 0;
            }
            acc += self.target_raw[j] + added[j];
            if acc + self.prefix_rate[j] * remaining < 0 {
                return false;
            }
        }
        true
    }

    fn finish(&mut self, added: &[i128], chosen: &[usize]) -> Result<(), SearchError> {
        let k = self.profile.k;
        let remainder: Vec<i128> = self.target_raw.iter().zip(added).map(|(t, a)| t + a).collect();
        let coeffs = if self.zero_rigid.len() == k {
            // chain order: prefix sums within each block
            let mut out = Vec::with_capacity(k);
            let mut acc = 0;
            for (j, r) in remainder.iter().enumerate() {
                if j == 3 {
                    acc = 0;
                }
                acc += r;
                out.push(acc);
            }
            Some(out)
        } else {
            solve_zero_part(k, self.zero_rigid, &remainder)
        };
        let Some(coeffs) = coeffs else {
            return Ok(());
        };
        if coeffs.iter().any(|&c| c < 0) {
            return Ok(());
        }
        // chosen is nondecreasing, so equal parts are adjacent
        self.picked.clear();
        let mut total = 0u32;
        for &i in chosen {
            total += 1;
            match self.picked.last_mut() {
                Some(last) if last.0 == self.rank[i] => last.2 += 1,
                _ => self.picked.push((self.rank[i], &self.candidates[i].2, 1)),
            }
        }
        for ((c, &n), &r) in self.zero_rigid.iter().zip(&coeffs).zip(self.zero_rank) {
            if n > 0 {
                total += n as u32;
                self.picked.push((r, c, n as u32));
            }
        }
        if total < 2 {
            return Ok(());
        }
        if total > self.budget.max_parts {
            return Err(SearchError::Budget(format!(
                "decomposition with {total} parts exceeds max_parts = {}",
                self.budget.max_parts
            )));
        }
        self.picked.sort_unstable_by_key(|p| p.0);
        (self.visit)(&self.picked);
        Ok(())
    }
}

/// Nonnegative-or-not integer coefficients writing the degree-zero remainder
/// in terms of the given rigid classes, when they are independent.
fn solve_zero_part(k: usize, zero: &[DivisorClass], remainder: &[i128]) -> Option<Vec<i128>> {
    let target = DivisorClass::from_ints(0, remainder);
    let x = crate::lattice::coordinates_in(zero, &target)?;
    debug_assert_eq!(target.k(), k);
    x.iter().map(|v| v.is_integer().then(|| v.to_integer())).collect()
}

/// `E_8' = 6L - 2E123 - 3E4 - 2E5678`.
pub fn e8_prime() -> DivisorClass {
    DivisorClass::from_tuple(6, &[2, 2, 2, 3, 2, 2, 2, 2])
}

/// `E_3' = 5L - E12 - 2E3 - 2E45678`.
pub fn e3_prime() -> DivisorClass {
    DivisorClass::from_tuple(5, &[1, 1, 2, 2, 2, 2, 2, 2])
}

/// `2L - E45678`.
pub fn conic_class() -> DivisorClass {
    DivisorClass::from_tuple(2, &[0, 0, 0, 1, 1, 1, 1, 1])
}

/// `3L - 2E4 - (E1 + .. + E8 except E4)`.
pub fn nodal_cubic_class() -> DivisorClass {
    DivisorClass::from_tuple(3, &[1, 1, 1, 2, 1, 1, 1, 1])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IrreducibilityCase {
    pub label: String,
    pub target: DivisorClass,
    pub profile: String,
    pub decompositions: Vec<Decomposition>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IrreducibilityReport {
    pub cases: Vec<IrreducibilityCase>,
    /// The decompositions of `E_8'` once the nodal cubic class is allowed.
    pub lifted_e8_prime: Vec<Decomposition>,
    pub passed: bool,
}

/// `E_8'` and `E_3'` under `step2`, `2L - E45678` under `step3`: all must
/// have no admissible decomposition.
pub fn verify_irreducibility_suite(budget: SearchBudget) -> Result<IrreducibilityReport, SearchError> {
    let runs = [
        ("E8'", e8_prime(), AdmissibilityProfile::step2()),
        ("E3'", e3_prime(), AdmissibilityProfile::step2()),
        ("2L-E45678", conic_class(), AdmissibilityProfile::step3()),
    ];
    let mut cases = Vec::new();
    for (label, target, profile) in runs {
        cases.push(IrreducibilityCase {
            label: label.into(),
            decompositions: enumerate_decompositions(&target, &profile, budget)?,
            target,
            profile: profile.name,
        });
    }
    let lifted = AdmissibilityProfile::step2().without_exclusion(&nodal_cubic_class());
    let lifted_e8_prime = enumerate_decompositions(&e8_prime(), &lifted, budget)?;
    Ok(IrreducibilityReport {
        passed: cases.iter().all(|c| c.decompositions.is_empty()),
        cases,
        lifted_e8_prime,
    })
}

/// Componentwise-maximal nonincreasing multiplicity vectors of length `k`
/// allowed by the adjunction bound alone, for degree `d`.
pub fn adjunction_maxima(d: i128, k: usize) -> Vec<Vec<i128>> {
    let budget = 2 + d * d - 3 * d;
    let mut all = Vec::new();
    fn rec(k: usize, cap: i128, budget: i128, m: &mut Vec<i128>, all: &mut Vec<Vec<i128>>) {
        if m.len() == k {
            all.push(m.clone());
            return;
        }
        for x in (0..=cap).rev() {
            let cost = x * x - x;
            if cost <= budget {
                m.push(x);
                rec(k, x, budget - cost, m, all);
                m.pop();
            }
        }
    }
    rec(k, d, budget, &mut Vec::new(), &mut all);
    let dominated = |a: &Vec<i128>, b: &Vec<i128>| a != b && a.iter().zip(b).all(|(x, y)| x <= y);
    let maxima: Vec<Vec<i128>> = all
        .iter()
        .filter(|a| !all.iter().any(|b| dominated(a, b)))
        .cloned()
        .collect();
    maxima
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(d: i128, m: &[i128]) -> DivisorClass {
        DivisorClass::from_tuple(d, m)
    }

    #[test]
    fn admissibility_examples() {
        let p = AdmissibilityProfile::step2();
        let cubic = is_admissible(&nodal_cubic_class(), &p);
        assert_eq!(cubic.violations, vec![Violation::Excluded]);
        let quartic = is_admissible(&t(4, &[2, 2, 2, 1, 1, 1, 1, 1]), &p);
        assert_eq!(quartic.violations, vec![Violation::FirstBlockSum]);
        let line = is_admissible(&t(1, &[1, 1, 1, 1, 0, 0, 0, 0]), &p);
        assert!(line.violations.contains(&Violation::Excluded));
        assert!(is_admissible(&t(1, &[1, 1, 1, 0, 0, 0, 0, 0]), &p).rigid);
        assert_eq!(
            is_admissible(&conic_class(), &p).violations,
            vec![Violation::SecondBlockSum]
        );
        assert!(is_admissible(&conic_class(), &AdmissibilityProfile::step3()).admissible);
        let long_line = t(1, &[1, 0, 0, 1, 1, 1, 1, 1]);
        assert_eq!(
            is_admissible(&long_line, &AdmissibilityProfile::step3()).violations,
            vec![Violation::NegativePairing]
        );
        assert_eq!(
            is_admissible(&t(1, &[0, 0, 0, 0, 0, 1, 1, 1]), &p).violations,
            vec![Violation::SecondBlockSum, Violation::NotMonotone]
        );
    }

    #[test]
    fn conic_is_irreducible_under_step3() {
        let b = SearchBudget::default();
        assert!(enumerate_decompositions(&conic_class(), &AdmissibilityProfile::step3(), b).unwrap().is_empty());
    }

    #[test]
    fn step2_constraints_leave_conic_components() {
        let b = SearchBudget::default();
        let p = AdmissibilityProfile::step2();
        let e8 = enumerate_decompositions(&e8_prime(), &p, b).unwrap();
        let e3 = enumerate_decompositions(&e3_prime(), &p, b).unwrap();
        assert_eq!((e8.len(), e3.len()), (3, 3));
        let witness = "3*(2L-E1-E2-E4-E5-E6-E7) + (E1-E2) + 2*(E2-E3) + (E5-E6) + 2*(E6-E7) + 3*(E7-E8) + (E8)";
        assert!(e8.iter().any(|d| d.to_string() == witness));
        let conic = t(2, &[1, 1, 0, 1, 1, 1, 1, 0]);
        for dec in &e8 {
            assert!(dec.parts.iter().any(|part| part.class == conic), "{dec}");
        }
    }

    #[test]
    fn lifting_the_cubic_exclusion() {
        let p = AdmissibilityProfile::step2().without_exclusion(&nodal_cubic_class());
        let found = enumerate_decompositions(&e8_prime(), &p, SearchBudget::default()).unwrap();
        let want = "2*(3L-E1-E2-E3-2E4-E5-E6-E7-E8) + (E4-E5) + (E5-E6) + (E6-E7) + (E7-E8) + (E8)";
        let shown: Vec<String> = found.iter().map(ToString::to_string).collect();
        assert!(shown.iter().any(|s| s == want), "{shown:?}");
        for dec in &found {
            assert_eq!(dec.total(8), e8_prime());
        }
    }

    #[test]
    fn degree_zero_targets() {
        let p = AdmissibilityProfile::step2();
        let e1 = DivisorClass::exceptional(8, 1).unwrap();
        let found = enumerate_decompositions(&e1, &p, SearchBudget::default()).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].to_string(), "(E1-E2) + (E2-E3) + (E3)");
        let e8 = DivisorClass::exceptional(8, 8).unwrap();
        assert!(enumerate_decompositions(&e8, &p, SearchBudget::default()).unwrap().is_empty());
    }

    #[test]
    fn guards() {
        let p = AdmissibilityProfile::step2();
        assert_eq!(
            enumerate_decompositions(&t(9, &[0; 8]), &p, SearchBudget::default()),
            Err(SearchError::DegreeOutOfRange(9))
        );
        let tight = SearchBudget { max_parts: 64, max_nodes: 3 };
        assert!(matches!(enumerate_decompositions(&e8_prime(), &p, tight), Err(SearchError::Budget(_))));
        let few = SearchBudget { max_parts: 2, max_nodes: 1_000_000 };
        let e1 = DivisorClass::exceptional(8, 1).unwrap();
        assert!(matches!(enumerate_decompositions(&e1, &p, few), Err(SearchError::Budget(_))));
    }

    #[test]
    fn adjunction_cross_check() {
        assert_eq!(adjunction_maxima(3, 8), vec![vec![2, 1, 1, 1, 1, 1, 1, 1]]);
        assert_eq!(
            adjunction_maxima(4, 8),
            vec![vec![3, 1, 1, 1, 1, 1, 1, 1], vec![2, 2, 2, 1, 1, 1, 1, 1]]
        );
        let five = adjunction_maxima(5, 8);
        for printed in [
            vec![3, 3, 1, 1, 1, 1, 1, 1],
            vec![3, 2, 2, 2, 1, 1, 1, 1],
            vec![2, 2, 2, 2, 2, 2, 1, 1],
        ] {
            assert!(five.contains(&printed));
        }
        assert!(five.contains(&vec![4, 1, 1, 1, 1, 1, 1, 1]));
        assert_eq!(five.len(), 4);
    }
}
