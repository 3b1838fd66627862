//! One report aggregating every numeric claim the library can check.

use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use crate::cubic::verify_nodal_configuration;
use crate::decomposition::{adjunction_maxima, verify_irreducibility_suite, SearchBudget, SearchError};
use crate::hamiltonian::{ell23_dictionary_report, moment_polytope, tolman_data, HamiltonianError};
use crate::lattice::{gram_matrix, DivisorClass};
use crate::rational::{frac, q, Q};
use crate::reduced_space::{
    chi_class, euler_class, homology_z, min_area_exceptional, omega_class, ReducedError,
};
use crate::toric::resolve_cut_triangle;
use crate::weyl::{enumerate_exceptional, find_word, verify_dictionary, verify_lattice_map, Dictionary, LatticeMap, WeylGenerator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// A known discrepancy in the source formulas; never counts as failure.
    Flagged,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Pass => "PASS",
            Self::Fail => "FAIL",
            Self::Flagged => "FLAG",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    /// What is being checked, in words.
    pub anchor: String,
    pub status: Status,
    pub witness: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Hamiltonian(#[from] HamiltonianError),
    #[error(transparent)]
    Reduced(#[from] ReducedError),
    #[error("{0}")]
    Other(String),
}

impl VerificationReport {
    pub fn new(suite: &str) -> Self {
        Self { suite: suite.into(), checks: Vec::new() }
    }

    pub fn push(&mut self, id: &str, anchor: &str, passed: bool, witness: Value) {
        let status = if passed { Status::Pass } else { Status::Fail };
        self.checks.push(Check { id: id.into(), anchor: anchor.into(), status, witness });
    }

    pub fn flag(&mut self, id: &str, anchor: &str, witness: Value) {
        self.checks.push(Check { id: id.into(), anchor: anchor.into(), status: Status::Flagged, witness });
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn passed(&self) -> bool {
        self.count(Status::Fail) == 0
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{} {:<34} {}", c.status, c.id, c.anchor)?;
        }
        write!(
            f,
            "{}: {} passed, {} failed, {} flagged",
            self.suite,
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Flagged)
        )
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn strings<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

/// Gram matrix and canonical pairings of a dictionary's images.
pub fn gram_checks(dict: Dictionary) -> VerificationReport {
    let mut r = VerificationReport::new("gram");
    let map = dict.map();
    let k = map.k();
    let gram = gram_matrix(map.images()).expect("same k");
    let n = k + 1;
    let unimodular_diag = (0..n).all(|i| {
        (0..n).all(|j| {
            let want = if i != j {
                q(0)
            } else if i == 0 {
                q(1)
            } else {
                q(-1)
            };
            gram[i][j] == want
        })
    });
    let kdots: Vec<Q> = map.images().iter().map(|c| c.k_dot()).collect();
    let canonical = kdots[0] == q(-3) && kdots[1..].iter().all(|x| *x == q(-1));
    r.push(
        &format!("gram.{}", dict.name()),
        "images of L, E_i have pairings diag(1, -1, .., -1), K.L' = -3, K.E_i' = -1",
        unimodular_diag && canonical,
        json!({
            "images": strings(map.images()),
            "k_dot": kdots.iter().map(crate::rational::fmt_q).collect::<Vec<_>>(),
        }),
    );
    r
}

/// Validity, negation of epsilon and preservation of `H_0` for one
/// dictionary or an arbitrary map read from a fixture.
pub fn dictionary_checks(name: &str, map: &LatticeMap) -> VerificationReport {
    let mut r = VerificationReport::new(&format!("dictionary {name}"));
    let report = match verify_lattice_map(name, map) {
        Ok(rep) => rep,
        Err(e) => {
            r.push(&format!("dictionary.{name}.valid"), "map is a lattice automorphism fixing K", false, json!({ "error": e.to_string() }));
            return r;
        }
    };
    r.push(
        &format!("dictionary.{name}.valid"),
        "map is a lattice automorphism fixing K",
        report.valid,
        json!({ "failures": report.validity_failures }),
    );
    let eps_witness = json!({
        "epsilon": report.epsilon.to_string(),
        "image": report.epsilon_image.to_string(),
    });
    if name == Dictionary::Hat6.name() {
        r.flag(
            &format!("dictionary.{name}.epsilon"),
            "epsilon image for l = 3 has no stated expectation",
            eps_witness,
        );
    } else {
        r.push(
            &format!("dictionary.{name}.epsilon"),
            "epsilon is sent to -epsilon",
            report.epsilon_negated,
            eps_witness,
        );
    }
    r
}

fn dictionary_suite() -> VerificationReport {
    let mut r = VerificationReport::new("dictionaries");
    r.extend(gram_checks(Dictionary::Hat7));
    r.extend(gram_checks(Dictionary::Tilde8));
    for d in Dictionary::ALL {
        r.extend(dictionary_checks(d.name(), &d.map()));
    }
    for d in [Dictionary::Primed7, Dictionary::Primed8] {
        let rep = verify_dictionary(d);
        r.push(
            &format!("h0.{}", d.name()),
            "chain classes H_0 are permuted by the primed dictionary",
            rep.h0_preserved,
            json!({ "image": strings(&rep.h0_image), "notes": rep.notes }),
        );
    }
    let hat7 = verify_dictionary(Dictionary::Hat7);
    r.push(
        "anticanonical.hat7",
        "each class plus its image is a multiple of -K",
        hat7.all_pairs_anticanonical,
        to_value(&hat7.anticanonical_pairs),
    );
    r
}

fn lattice_suite() -> Result<VerificationReport, VerifyError> {
    let mut r = VerificationReport::new("lattice");
    let e1 = DivisorClass::exceptional(7, 1).expect("k = 7");
    let target: DivisorClass = "3L-2E1-E2-E3-E4-E5-E6-E7".parse().expect("literal");
    let word = find_word(&e1, &target, 3).map_err(|e| VerifyError::Other(e.to_string()))?;
    let ok = word
        .as_ref()
        .is_some_and(|w| w.len() == 3 && w.iter().all(|g| matches!(g, WeylGenerator::Cremona(..))));
    r.push(
        "weyl.word",
        "three Cremona reflections take E1 to 3L - 2E1 - E234567",
        ok,
        json!({ "word": word.map(|w| strings(&w)) }),
    );
    let want = [1usize, 3, 6, 10, 16, 27, 56, 240];
    let mut counts = Vec::new();
    for k in 1..=8 {
        counts.push(enumerate_exceptional(k).map_err(|e| VerifyError::Other(e.to_string()))?.len());
    }
    r.push(
        "weyl.exceptional_counts",
        "numbers of exceptional classes on X_1, .., X_8",
        counts == want,
        json!({ "counts": counts, "expected": want }),
    );
    Ok(r)
}

fn toric_suite() -> Result<VerificationReport, VerifyError> {
    let mut r = VerificationReport::new("toric");
    let res = resolve_cut_triangle(4, frac(1, 2)).map_err(|e| VerifyError::Other(e.to_string()))?;
    let want: Vec<[i128; 2]> = vec![
        [0, 1], [1, 2], [2, 3], [1, 1], [0, -1], [-1, -4], [-1, -3], [-1, -2], [-1, -1], [-1, 0],
    ];
    let n = res.conormals.len();
    let dets: Vec<i128> = (0..n)
        .map(|i| crate::toric::det(res.conormals[i], res.conormals[(i + 1) % n]))
        .collect();
    r.push(
        "toric.conormals",
        "resolved fan of the cut triangle for l = 4, lambda = 1/2",
        res.conormals == want && dets.iter().all(|d| d.abs() == 1),
        json!({ "conormals": res.conormals, "determinants": dets }),
    );
    let si_want = vec![-2, -2, -1, -2, -3, -1, -2, -2, -2, -1];
    let sum: i128 = res.self_intersections.iter().sum();
    r.push(
        "toric.self_intersections",
        "self-intersections of the toric divisors, summing to 12 - 3n",
        res.self_intersections == si_want && sum == 12 - 3 * n as i128,
        json!({ "self_intersections": res.self_intersections, "sum": sum }),
    );
    Ok(r)
}

fn reduced_suite() -> Result<VerificationReport, VerifyError> {
    let mut r = VerificationReport::new("reduced");
    for (ell, want) in [(4, vec![2, 12]), (5, vec![1, 30])] {
        let h = homology_z(ell)?;
        r.push(
            &format!("homology.l{ell}"),
            "invariant factors of diag(6, l) and isomorphism with Z6 + Zl",
            h.invariant_factors == want && h.isomorphic_to_z6_zl,
            to_value(&h),
        );
    }
    for k in [7usize, 8] {
        let ell = k as i128 - 3;
        let chi = chi_class(k)?;
        let e3 = DivisorClass::exceptional(k, 3).expect("k >= 3");
        let ek = DivisorClass::exceptional(k, k).expect("k >= 3");
        let mut m = vec![0; k];
        m[..3].fill(1);
        let line = DivisorClass::from_tuple(1, &m);
        let vals: Vec<Q> = [e3, ek, line].iter().map(|c| chi.intersect(c).expect("same k")).collect();
        r.push(
            &format!("chi.k{k}"),
            "chi pairs to 1/6 with E3, 1/l with E_k, 0 with L - E123",
            vals == [frac(1, 6), frac(1, ell), q(0)],
            json!({ "chi": chi.to_string(), "values": vals.iter().map(crate::rational::fmt_q).collect::<Vec<_>>() }),
        );
    }
    let euler_ok = (2..=5).all(|ell| {
        omega_class(ell).map(|w| w.neg_derivative()).ok() == euler_class(ell).ok()
    });
    r.push("euler.derivative", "euler class is minus the kappa-derivative of [omega_kappa]", euler_ok, json!({ "ells": [2, 3, 4, 5] }));
    for k in [7usize, 8] {
        let m = min_area_exceptional(k, q(1), frac(1, 100))?;
        let ek = DivisorClass::exceptional(k, k).expect("k >= 3");
        r.push(
            &format!("min_area.k{k}"),
            "E_k is the unique exceptional class of least tau area at lambda = 1, eps = 1/100",
            m.argmin == vec![ek],
            json!({
                "minimum": crate::rational::fmt_q(&m.minimum),
                "argmin": strings(&m.argmin),
                "candidates": m.candidates,
            }),
        );
    }
    Ok(r)
}

fn decomposition_suite(budget: SearchBudget) -> Result<VerificationReport, VerifyError> {
    let mut r = VerificationReport::new("decomposition");
    let suite = verify_irreducibility_suite(budget)?;
    for case in &suite.cases {
        r.push(
            &format!("irreducible.{}", case.label),
            "no admissible decomposition into curve classes",
            case.decompositions.is_empty(),
            json!({
                "target": case.target.to_string(),
                "profile": case.profile,
                "decompositions": strings(&case.decompositions),
            }),
        );
    }
    let want = "2*(3L-E1-E2-E3-2E4-E5-E6-E7-E8) + (E4-E5) + (E5-E6) + (E6-E7) + (E7-E8) + (E8)";
    let lifted = strings(&suite.lifted_e8_prime);
    r.push(
        "irreducible.lifted",
        "allowing the nodal cubic class produces its double plus the chain to E8",
        lifted.iter().any(|s| s == want),
        json!({ "decompositions": lifted }),
    );
    let printed: [(i128, Vec<Vec<i128>>); 3] = [
        (3, vec![vec![2, 1, 1, 1, 1, 1, 1, 1]]),
        (4, vec![vec![2, 2, 2, 1, 1, 1, 1, 1], vec![3, 1, 1, 1, 1, 1, 1, 1]]),
        (5, vec![vec![3, 3, 1, 1, 1, 1, 1, 1], vec![3, 2, 2, 2, 1, 1, 1, 1], vec![2, 2, 2, 2, 2, 2, 1, 1]]),
    ];
    for (d, list) in printed {
        let derived = adjunction_maxima(d, 8);
        let mut a = derived.clone();
        let mut b = list.clone();
        a.sort();
        b.sort();
        let witness = json!({ "degree": d, "derived": derived, "listed": list });
        if a == b {
            r.push(&format!("adjunction.d{d}"), "maximal multiplicities allowed by adjunction", true, witness);
        } else {
            r.flag(&format!("adjunction.d{d}"), "maximal multiplicities allowed by adjunction differ from the listed ones", witness);
        }
    }
    Ok(r)
}

fn cubic_suite() -> VerificationReport {
    let mut r = VerificationReport::new("cubic");
    let list = verify_nodal_configuration();
    let ids = ["node", "flex", "tangent", "contact", "reflection_z1", "reflection_z2"];
    for (id, c) in ids.iter().zip(&list.checks) {
        r.push(&format!("cubic.{id}"), &c.name, c.passed, json!({ "polynomial": list.polynomial, "detail": c.detail }));
    }
    r
}

fn hamiltonian_suite() -> Result<VerificationReport, VerifyError> {
    let mut r = VerificationReport::new("hamiltonian");
    for ell in 2..=5 {
        let d = tolman_data(ell)?;
        let levels: Vec<Q> = d.points.iter().map(|p| p.level).collect();
        let sum: Q = levels.iter().sum();
        let symmetric = levels.iter().zip(levels.iter().rev()).all(|(a, b)| *a == -*b);
        let mirrored = d.points[0].weights.iter().all(|w| d.points[3].weights.contains(&-w));
        r.push(
            &format!("fixed_points.l{ell}"),
            "levels sum to zero, are symmetric about 0, and x1, x4 carry opposite weights",
            sum == q(0) && symmetric && mirrored,
            to_value(&d),
        );
        let p = moment_polytope(ell)?;
        let crit = p.critical_height();
        let (_, hi) = p.height_range();
        let below = p.slice(crit - frac(1, 1000))?.facet_count;
        let at = p.slice(crit)?.facet_count;
        let above = p.slice(crit + frac(1, 1000))?.facet_count;
        let mut samples = Vec::new();
        let mut all_match = true;
        for i in 1..=20 {
            let x3 = hi * frac(i, 21);
            let s = p.slice(x3)?;
            let ok = s.matches_omega()?;
            all_match &= ok;
            samples.push(json!({ "x3": crate::rational::fmt_q(&x3), "facets": s.facet_count, "matches": ok }));
        }
        r.push(
            &format!("slice.l{ell}"),
            "slice becomes a quadrilateral exactly past x3 = 6 - l and edge lengths equal [omega_kappa]",
            below == 3 && at == 3 && above == 4 && all_match,
            json!({ "facets_below_at_above": [below, at, above], "samples": samples }),
        );
    }
    let s = moment_polytope(4)?.slice(q(3))?;
    let lambda = s.d2_length.map(|d2| d2 / s.d1_length);
    r.push(
        "slice.figure",
        "at kappa = -3 and l = 4 the cut has relative size lambda = 1/2 and scale c = 2",
        lambda == Some(frac(1, 2)) && crate::reduced_space::scale_of_kappa(q(-3)) == q(2),
        json!({ "lambda": lambda.map(|l| crate::rational::fmt_q(&l)) }),
    );
    let small = ell23_dictionary_report()?;
    for p in &small.pullbacks {
        let id = format!("pullback.l{}.{}", p.ell, if p.formula.contains("kappa/2)") { "printed" } else { "general" });
        let witness = to_value(p);
        if p.ell == 3 && !p.consistent {
            r.flag(&id, "printed pullback formula for l = 3 uses 1 + kappa/2 on the second block", witness);
        } else {
            r.push(&id, "pullback of [omega_kappa] takes the values of [omega_kappa] on E3 and E_k", p.consistent, witness);
        }
    }
    Ok(r)
}

/// Every suite, in a fixed order.
pub fn verify_all(budget: SearchBudget) -> Result<VerificationReport, VerifyError> {
    let mut r = VerificationReport::new("verify-all");
    r.extend(dictionary_suite());
    r.extend(lattice_suite()?);
    r.extend(toric_suite()?);
    r.extend(reduced_suite()?);
    r.extend(decomposition_suite(budget)?);
    r.extend(cubic_suite());
    r.extend(hamiltonian_suite()?);
    Ok(r)
}
