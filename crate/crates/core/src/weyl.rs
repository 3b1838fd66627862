//! Cremona transformations, permutations and the automorphisms of the
//! lattice `H_2(X_k)` that preserve the form and `K`.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::lattice::{DivisorClass, LatticeError};
use crate::rational::{q, Q};
use crate::reduced_space::{epsilon_class, h0_classes};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeylError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("Cremona indices must be distinct, got ({0}, {1}, {2})")]
    RepeatedIndex(usize, usize, usize),
    #[error("not a permutation of 1..={0}: {1:?}")]
    BadPermutation(usize, Vec<usize>),
    #[error("the set of exceptional classes is infinite for k = {0}")]
    Unsupported(usize),
    #[error("lattice map needs k + 1 = {0} images, got {1}")]
    ImageCount(usize, usize),
    #[error("unknown dictionary {0:?}")]
    UnknownDictionary(String),
}

/// One generator of the reflection group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeylGenerator {
    /// `R_ijl`: reflection in `L - E_i - E_j - E_l`.
    Cremona(usize, usize, usize),
    /// `E_i -> E_{sigma(i)}`, with `sigma[i - 1] = sigma(i)`.
    Permutation(Vec<usize>),
}

impl WeylGenerator {
    pub fn cremona(i: usize, j: usize, l: usize) -> Result<Self, WeylError> {
        if i == j || j == l || i == l {
            return Err(WeylError::RepeatedIndex(i, j, l));
        }
        Ok(Self::Cremona(i, j, l))
    }

    /// The transposition of `E_i` and `E_j` on `X_k`.
    pub fn transposition(k: usize, i: usize, j: usize) -> Self {
        let mut s: Vec<usize> = (1..=k).collect();
        s.swap(i - 1, j - 1);
        Self::Permutation(s)
    }

    pub fn apply(&self, a: &DivisorClass) -> Result<DivisorClass, WeylError> {
        match self {
            Self::Cremona(i, j, l) => cremona_reflect(a, *i, *j, *l),
            Self::Permutation(s) => permute(a, s),
        }
    }
}

impl fmt::Display for WeylGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Cremona(i, j, l) => write!(f, "R{i}{j}{l}"),
            Self::Permutation(s) => {
                let moved: Vec<usize> = (1..=s.len()).filter(|&i| s[i - 1] != i).collect();
                if moved.len() == 2 && s[moved[0] - 1] == moved[1] {
                    write!(f, "({} {})", moved[0], moved[1])
                } else {
                    let body: Vec<String> = s.iter().map(ToString::to_string).collect();
                    write!(f, "P[{}]", body.join(","))
                }
            }
        }
    }
}

/// `A + (A.B) B` with `B = L - E_i - E_j - E_l`.
pub fn cremona_reflect(a: &DivisorClass, i: usize, j: usize, l: usize) -> Result<DivisorClass, WeylError> {
    if i == j || j == l || i == l {
        return Err(WeylError::RepeatedIndex(i, j, l));
    }
    let k = a.k();
    let b = DivisorClass::line(k) - DivisorClass::e_sum(k, &[i, j, l])?;
    let ab = a.intersect(&b)?;
    Ok(a + &b.scale(ab))
}

fn permute(a: &DivisorClass, sigma: &[usize]) -> Result<DivisorClass, WeylError> {
    let k = a.k();
    let mut seen = vec![false; k];
    if sigma.len() != k || sigma.iter().any(|&s| s == 0 || s > k || std::mem::replace(&mut seen[s - 1], true)) {
        return Err(WeylError::BadPermutation(k, sigma.to_vec()));
    }
    let mut m = vec![Q::zero(); k];
    for (i, &s) in sigma.iter().enumerate() {
        m[s - 1] = a.m()[i];
    }
    Ok(DivisorClass::new(*a.d(), m))
}

/// Applies the generators left to right: `word[0]` acts first.
pub fn apply_word(word: &[WeylGenerator], a: &DivisorClass) -> Result<DivisorClass, WeylError> {
    word.iter().try_fold(a.clone(), |acc, g| g.apply(&acc))
}

/// Cremonas `R_ijl` with `i < j < l` in lexicographic order, then the
/// transpositions `(i j)`, `i < j`, in lexicographic order.
pub fn generators(k: usize) -> Vec<WeylGenerator> {
    let mut out = Vec::new();
    for i in 1..=k {
        for j in i + 1..=k {
            for l in j + 1..=k {
                out.push(WeylGenerator::Cremona(i, j, l));
            }
        }
    }
    for i in 1..=k {
        for j in i + 1..=k {
            out.push(WeylGenerator::transposition(k, i, j));
        }
    }
    out
}

/// Shortest word taking `source` to `target`, by breadth-first search. Among
/// shortest words the lexicographically smallest in generator order is
/// returned. `Ok(None)` means no word of length `<= max_len` exists.
pub fn find_word(
    source: &DivisorClass,
    target: &DivisorClass,
    max_len: usize,
) -> Result<Option<Vec<WeylGenerator>>, WeylError> {
    if source.k() != target.k() {
        return Err(LatticeError::DimensionMismatch(source.k(), target.k()).into());
    }
    if source == target {
        return Ok(Some(Vec::new()));
    }
    let gens = generators(source.k());
    // parent pointers: class -> (previous class, generator index)
    let mut parent: HashMap<DivisorClass, Option<(DivisorClass, usize)>> = HashMap::new();
    parent.insert(source.clone(), None);
    let mut frontier = VecDeque::from([(source.clone(), 0usize)]);
    while let Some((cur, depth)) = frontier.pop_front() {
        if depth == max_len {
            continue;
        }
        for (gi, g) in gens.iter().enumerate() {
            let next = g.apply(&cur)?;
            if parent.contains_key(&next) {
                continue;
            }
            parent.insert(next.clone(), Some((cur.clone(), gi)));
            if &next == target {
                return Ok(Some(unwind(&parent, &next, &gens)));
            }
            frontier.push_back((next, depth + 1));
        }
    }
    Ok(None)
}

fn unwind(
    parent: &HashMap<DivisorClass, Option<(DivisorClass, usize)>>,
    end: &DivisorClass,
    gens: &[WeylGenerator],
) -> Vec<WeylGenerator> {
    let mut word = Vec::new();
    let mut cur = end.clone();
    while let Some(Some((prev, gi))) = parent.get(&cur) {
        word.push(gens[*gi].clone());
        cur = prev.clone();
    }
    word.reverse();
    word
}

/// All classes with `E.E = -1`, `K.E = -1` on `X_k`, sorted. Searches
/// `0 <= d <= 6` and curve multiplicities `0 <= m_i <= 3`, plus the `E_i`.
pub fn enumerate_exceptional(k: usize) -> Result<Vec<DivisorClass>, WeylError> {
    if k > 8 {
        return Err(WeylError::Unsupported(k));
    }
    let mut out: BTreeSet<DivisorClass> = (1..=k)
        .map(|i| DivisorClass::exceptional(k, i).expect("in range"))
        .collect();
    for d in 0..=6i128 {
        let mut m = Vec::with_capacity(k);
        search_tuples(k, d, 0, 3, &mut m, &mut out);
    }
    Ok(out.into_iter().collect())
}

/// Integer search for tuples `(d; m)` with `lo <= m_i <= hi`, `sum m_i^2 = d^2 + 1`,
/// `sum m_i = 3d - 1`.
pub(crate) fn search_tuples(
    k: usize,
    d: i128,
    lo: i128,
    hi: i128,
    m: &mut Vec<i128>,
    out: &mut BTreeSet<DivisorClass>,
) {
    let sq: i128 = m.iter().map(|x| x * x).sum();
    if sq > d * d + 1 {
        return;
    }
    if m.len() == k {
        let s: i128 = m.iter().sum();
        if sq == d * d + 1 && s == 3 * d - 1 {
            out.insert(DivisorClass::from_tuple(d, m));
        }
        return;
    }
    for x in lo..=hi {
        m.push(x);
        search_tuples(k, d, lo, hi, m, out);
        m.pop();
    }
}

/// Closure of `seeds` under all generators.
pub fn orbit(seeds: &[DivisorClass]) -> Result<BTreeSet<DivisorClass>, WeylError> {
    let Some(k) = seeds.first().map(DivisorClass::k) else {
        return Ok(BTreeSet::new());
    };
    let gens = generators(k);
    let mut seen: BTreeSet<DivisorClass> = seeds.iter().cloned().collect();
    let mut queue: VecDeque<DivisorClass> = seeds.iter().cloned().collect();
    while let Some(c) = queue.pop_front() {
        for g in &gens {
            let n = g.apply(&c)?;
            if seen.insert(n.clone()) {
                queue.push_back(n);
            }
        }
    }
    Ok(seen)
}

/// A linear map of `H_2(X_k; Q)` given by the images of `L, E_1, .., E_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeMap {
    k: usize,
    images: Vec<DivisorClass>,
}

impl LatticeMap {
    pub fn new(images: Vec<DivisorClass>) -> Result<Self, WeylError> {
        let k = images.len().saturating_sub(1);
        if images.is_empty() {
            return Err(WeylError::ImageCount(1, 0));
        }
        if let Some(bad) = images.iter().find(|c| c.k() != k) {
            return Err(LatticeError::DimensionMismatch(k, bad.k()).into());
        }
        Ok(Self { k, images })
    }

    pub fn identity(k: usize) -> Self {
        Self {
            k,
            images: (0..=k).map(|i| DivisorClass::basis(k, i)).collect(),
        }
    }

    pub fn from_generator(k: usize, g: &WeylGenerator) -> Result<Self, WeylError> {
        let images = (0..=k)
            .map(|i| g.apply(&DivisorClass::basis(k, i)))
            .collect::<Result<_, _>>()?;
        Ok(Self { k, images })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `[image(L), image(E_1), ..]`.
    pub fn images(&self) -> &[DivisorClass] {
        &self.images
    }

    pub fn apply(&self, a: &DivisorClass) -> Result<DivisorClass, WeylError> {
        if a.k() != self.k {
            return Err(LatticeError::DimensionMismatch(self.k, a.k()).into());
        }
        let mut acc = DivisorClass::zero(self.k);
        for (c, img) in a.coords().iter().zip(&self.images) {
            acc = acc + img.scale(*c);
        }
        Ok(acc)
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &LatticeMap) -> Result<LatticeMap, WeylError> {
        let images = first
            .images
            .iter()
            .map(|c| self.apply(c))
            .collect::<Result<_, _>>()?;
        LatticeMap::new(images)
    }

    /// Every way the map fails to preserve the form or `K`; empty iff valid.
    pub fn validity_failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        let names: Vec<String> = (0..=self.k)
            .map(|i| if i == 0 { "L".into() } else { format!("E{i}") })
            .collect();
        for i in 0..=self.k {
            for j in i..=self.k {
                let want = match (i, j) {
                    (0, 0) => q(1),
                    (a, b) if a == b => q(-1),
                    _ => Q::zero(),
                };
                let got = self.images[i].square_with(&self.images[j]);
                if got != want {
                    out.push(format!("image({}).image({}) = {got}, expected {want}", names[i], names[j]));
                }
            }
        }
        let kk = DivisorClass::canonical(self.k);
        let image_k = self.apply(&kk).expect("same k");
        if image_k != kk {
            out.push(format!("image(K) = {image_k}, expected {kk}"));
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validity_failures().is_empty()
    }
}

// pairing without the k check, for classes already known to share k
trait PairWith {
    fn square_with(&self, other: &Self) -> Q;
}

impl PairWith for DivisorClass {
    fn square_with(&self, other: &Self) -> Q {
        self.intersect(other).expect("same k")
    }
}

/// The built-in basis changes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dictionary {
    Hat7,
    Tilde8,
    Primed7,
    Primed8,
    Hat5,
    Hat6,
}

impl Dictionary {
    pub const ALL: [Dictionary; 6] = [
        Dictionary::Hat7,
        Dictionary::Tilde8,
        Dictionary::Primed7,
        Dictionary::Primed8,
        Dictionary::Hat5,
        Dictionary::Hat6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Hat7 => "hat7",
            Self::Tilde8 => "tilde8",
            Self::Primed7 => "primed7",
            Self::Primed8 => "primed8",
            Self::Hat5 => "hat5",
            Self::Hat6 => "hat6",
        }
    }

    pub fn from_name(s: &str) -> Result<Self, WeylError> {
        Self::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| WeylError::UnknownDictionary(s.to_string()))
    }

    pub fn k(self) -> usize {
        match self {
            Self::Hat7 | Self::Primed7 => 7,
            Self::Tilde8 | Self::Primed8 => 8,
            Self::Hat5 => 5,
            Self::Hat6 => 6,
        }
    }

    pub fn ell(self) -> i128 {
        self.k() as i128 - 3
    }

    pub fn map(self) -> LatticeMap {
        let k = self.k();
        let p = |s: &str| DivisorClass::parse(s, Some(k)).expect("literal class");
        let e = |i: usize| DivisorClass::exceptional(k, i).expect("index in range");
        let all = DivisorClass::e_sum(k, &(1..=k).collect::<Vec<_>>()).expect("range");
        let high = DivisorClass::e_sum(k, &(4..=k).collect::<Vec<_>>()).expect("range");
        let low = DivisorClass::e_sum(k, &[1, 2, 3]).expect("range");
        let l = DivisorClass::line(k);
        let mut images = Vec::with_capacity(k + 1);
        match self {
            Self::Hat7 => {
                images.push(p("8L-3E1234567"));
                images.extend((1..=k).map(|i| l.scale(q(3)) - all.clone() - e(i)));
            }
            Self::Tilde8 => {
                images.push(p("17L-6E12345678"));
                images.extend((1..=k).map(|i| l.scale(q(6)) - all.scale(q(2)) - e(i)));
            }
            Self::Primed7 => {
                images.push(p("7L-2E123-3E4567"));
                for j in [3, 2, 1] {
                    images.push(l.scale(q(2)) - e(j) - high.clone());
                }
                for i in 4..=7 {
                    images.push(l.scale(q(3)) - all.clone() - e(11 - i));
                }
            }
            Self::Primed8 => {
                images.push(p("16L-5E123-6E45678"));
                // the doubled index runs 3, 2, 1 as in the seven-point case
                for i in 1..=3 {
                    images.push(l.scale(q(5)) - low.clone() - e(4 - i) - high.scale(q(2)));
                }
                for i in 4..=8 {
                    images.push(l.scale(q(6)) - all.scale(q(2)) - e(12 - i));
                }
            }
            Self::Hat5 => {
                images.push(p("3L-E1234-2E5"));
                for j in [3, 2, 1] {
                    images.push(l.clone() - e(j) - e(5));
                }
                images.push(p("2L-E12345"));
                images.push(p("L-E4-E5"));
            }
            Self::Hat6 => {
                images.push(p("4L-2E123-E456"));
                for i in 1..=3 {
                    images.push(l.clone() - low.clone() + e(i));
                }
                for i in 4..=6 {
                    images.push(l.scale(q(2)) - all.clone() + e(i));
                }
            }
        }
        LatticeMap::new(images).expect("well-formed dictionary")
    }
}

/// `A` and `A + image(A)`, with the rational `c` such that the sum is `c K`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnticanonicalPair {
    pub source: String,
    pub sum: DivisorClass,
    #[serde(with = "crate::rational::serde_opt_q")]
    pub multiple_of_k: Option<Q>,
}

/// Everything `verify_dictionary` computes about one map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DictionaryReport {
    pub name: String,
    pub k: usize,
    pub ell: i128,
    pub images: Vec<DivisorClass>,
    pub valid: bool,
    pub validity_failures: Vec<String>,
    pub epsilon: DivisorClass,
    pub epsilon_image: DivisorClass,
    pub epsilon_negated: bool,
    pub h0_image: Vec<DivisorClass>,
    pub h0_preserved: bool,
    pub anticanonical_pairs: Vec<AnticanonicalPair>,
    pub all_pairs_anticanonical: bool,
    pub notes: Vec<String>,
}

/// Checks a map on `X_{l+3}`: validity, `eps -> -eps`, `H_0 = H_0'` and the
/// anticanonical-pair property.
pub fn verify_lattice_map(name: &str, map: &LatticeMap) -> Result<DictionaryReport, WeylError> {
    let k = map.k();
    let ell = k as i128 - 3;
    let epsilon = epsilon_class(ell).map_err(|_| WeylError::Unsupported(k))?;
    let epsilon_image = map.apply(&epsilon)?;
    let h0 = h0_classes(k);
    let h0_image: Vec<DivisorClass> = h0.iter().map(|c| map.apply(c)).collect::<Result<_, _>>()?;
    let h0_set: BTreeSet<_> = h0.iter().collect();
    let h0_image_set: BTreeSet<_> = h0_image.iter().collect();
    let kk = DivisorClass::canonical(k);
    let anticanonical_pairs: Vec<AnticanonicalPair> = (0..=k)
        .map(|i| {
            let a = DivisorClass::basis(k, i);
            let sum = &a + &map.images()[i];
            AnticanonicalPair {
                source: a.to_string(),
                multiple_of_k: if sum.is_zero() { Some(Q::zero()) } else { sum.ratio_to(&kk) },
                sum,
            }
        })
        .collect();
    let validity_failures = map.validity_failures();
    Ok(DictionaryReport {
        name: name.to_string(),
        k,
        ell,
        images: map.images().to_vec(),
        valid: validity_failures.is_empty(),
        validity_failures,
        epsilon_negated: epsilon_image == -&epsilon,
        epsilon,
        epsilon_image,
        h0_preserved: h0_set == h0_image_set,
        h0_image,
        all_pairs_anticanonical: anticanonical_pairs.iter().all(|p| p.multiple_of_k.is_some()),
        anticanonical_pairs,
        notes: Vec::new(),
    })
}

pub fn verify_dictionary(dict: Dictionary) -> DictionaryReport {
    let mut r = verify_lattice_map(dict.name(), &dict.map()).expect("built-in dictionaries are well formed");
    match dict {
        Dictionary::Hat5 => r.notes.push(
            "third image uses the displayed rule L - E_(4-i) - E5 = L - E1 - E5; \
             the prose form L - E14 disagrees and is not used"
                .into(),
        ),
        Dictionary::Primed8 => r.notes.push(
            "first three images double E3, E2, E1 in turn; doubling E1, E2, E3 in turn \
             gives the same map up to a permutation but sends E1 - E2 to E2 - E1"
                .into(),
        ),
        Dictionary::Hat6 if !r.epsilon_negated => r.notes.push(format!(
            "image of eps_6 is {}; no expected value is asserted for l = 3",
            r.epsilon_image
        )),
        _ => {}
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn ck(s: &str, k: usize) -> DivisorClass {
        DivisorClass::parse(s, Some(k)).unwrap()
    }

    #[test]
    fn cremona_examples() {
        let r = |s| cremona_reflect(&ck(s, 4), 1, 2, 3).unwrap();
        assert_eq!(r("L"), ck("2L-E123", 4));
        assert_eq!(r("E1"), ck("L-E2-E3", 4));
        assert_eq!(r("E4"), ck("E4", 4));
        assert!(cremona_reflect(&ck("L", 4), 1, 1, 2).is_err());
        assert!(cremona_reflect(&ck("L", 4), 1, 2, 5).is_err());
    }

    #[test]
    fn composite_word() {
        let w = vec![
            WeylGenerator::Cremona(1, 2, 3),
            WeylGenerator::Cremona(1, 4, 5),
            WeylGenerator::Cremona(1, 6, 7),
        ];
        assert_eq!(apply_word(&w, &ck("E1", 7)).unwrap(), ck("3L-2E1-E234567", 7));
        assert_eq!(apply_word(&[], &ck("E1", 7)).unwrap(), ck("E1", 7));
        let twice = vec![WeylGenerator::Cremona(1, 2, 3); 2];
        assert_eq!(apply_word(&twice, &ck("5L-E1-3E4", 7)).unwrap(), ck("5L-E1-3E4", 7));
    }

    #[test]
    fn word_search() {
        let w = find_word(&ck("E1", 7), &ck("3L-2E1-E234567", 7), 3).unwrap().unwrap();
        assert_eq!(w.len(), 3);
        let names: Vec<String> = w.iter().map(ToString::to_string).collect();
        assert_eq!(names, ["R123", "R145", "R167"]);
        assert_eq!(find_word(&ck("E1", 7), &ck("E1", 7), 3).unwrap(), Some(vec![]));
        let swap = find_word(&ck("E1", 7), &ck("E2", 7), 3).unwrap().unwrap();
        assert_eq!(swap, vec![WeylGenerator::transposition(7, 1, 2)]);
        assert_eq!(find_word(&ck("E1", 7), &ck("3L-2E1-E234567", 7), 2).unwrap(), None);
        assert_eq!(find_word(&ck("E1", 7), &ck("L", 7), 4).unwrap(), None);
    }

    #[test]
    fn exceptional_counts() {
        let counts: Vec<usize> = (1..=8).map(|k| enumerate_exceptional(k).unwrap().len()).collect();
        assert_eq!(counts, [1, 3, 6, 10, 16, 27, 56, 240]);
        assert!(enumerate_exceptional(9).is_err());
        let three: Vec<String> = enumerate_exceptional(3).unwrap().iter().map(ToString::to_string).collect();
        assert_eq!(three, ["E3", "E2", "E1", "L-E1-E2", "L-E1-E3", "L-E2-E3"]);
    }

    #[test]
    fn orbit_matches_enumeration() {
        for k in 3..=8 {
            let seeds: Vec<_> = (1..=k).map(|i| DivisorClass::exceptional(k, i).unwrap()).collect();
            let orb = orbit(&seeds).unwrap();
            let list: BTreeSet<_> = enumerate_exceptional(k).unwrap().into_iter().collect();
            assert_eq!(orb, list, "k = {k}");
        }
    }

    #[test]
    fn built_in_dictionaries_are_valid() {
        for d in Dictionary::ALL {
            assert!(d.map().is_valid(), "{}: {:?}", d.name(), d.map().validity_failures());
        }
    }

    #[test]
    fn dictionary_reports() {
        let hat7 = verify_dictionary(Dictionary::Hat7);
        assert!(hat7.epsilon_negated);
        assert!(hat7.all_pairs_anticanonical);
        assert_eq!(hat7.anticanonical_pairs[0].multiple_of_k, Some(q(-3)));
        assert_eq!(hat7.anticanonical_pairs[1].multiple_of_k, Some(q(-1)));
        let tilde8 = verify_dictionary(Dictionary::Tilde8);
        assert!(tilde8.epsilon_negated && tilde8.all_pairs_anticanonical);
        for d in [Dictionary::Primed7, Dictionary::Primed8] {
            let r = verify_dictionary(d);
            assert!(r.valid && r.epsilon_negated && r.h0_preserved, "{}", r.name);
        }
        assert!(verify_dictionary(Dictionary::Hat5).epsilon_negated);
        let hat6 = verify_dictionary(Dictionary::Hat6);
        assert!(!hat6.epsilon_negated);
        assert_eq!(hat6.epsilon_image, -ck("1/6(3L-2E123-E456)", 6));
        assert_eq!(hat6.notes.len(), 1);
    }

    #[test]
    fn unreversed_primed8_labelling_moves_h0() {
        let map = Dictionary::Primed8.map();
        let mut images = map.images().to_vec();
        images.swap(1, 3);
        let r = verify_lattice_map("primed8-unreversed", &LatticeMap::new(images).unwrap()).unwrap();
        assert!(r.valid && r.epsilon_negated);
        assert!(!r.h0_preserved);
        assert!(r.h0_image.contains(&ck("E2-E1", 8)));
    }

    #[test]
    fn corrupted_map_is_invalid() {
        let mut images = Dictionary::Hat7.map().images().to_vec();
        images[1] = ck("3L-2E1-E23456", 7);
        let r = verify_lattice_map("broken", &LatticeMap::new(images).unwrap()).unwrap();
        assert!(!r.valid);
        assert!(!r.validity_failures.is_empty());
    }

    #[test]
    fn generators_are_automorphisms() {
        for k in 3..=8 {
            for g in generators(k) {
                assert!(LatticeMap::from_generator(k, &g).unwrap().is_valid());
            }
        }
        let _ = frac(1, 2);
    }
}
