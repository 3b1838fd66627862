//! Fixed-point data of the circle actions with four fixed points, slices of
//! the moment polytope of the toric models, and consistency checks between
//! the reduced-space formulas for `l = 2, 3`.

use serde::Serialize;

use crate::lattice::DivisorClass;
use crate::rational::{fmt_q, q, serde_q, serde_opt_q, Q};
use crate::reduced_space::{omega_class, pullback_class, ReducedError};
use crate::toric::{Facet, Polytope2, ToricError};
use crate::weyl::{verify_dictionary, Dictionary, DictionaryReport};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HamiltonianError {
    #[error("l must be 2, 3, 4 or 5, got {0}")]
    UnsupportedEll(i128),
    #[error("height x3 = {0} outside the open range (0, {1})")]
    HeightOutOfRange(String, String),
    #[error(transparent)]
    Toric(#[from] ToricError),
    #[error(transparent)]
    Reduced(#[from] ReducedError),
}

fn check_ell(ell: i128) -> Result<(), HamiltonianError> {
    if (2..=5).contains(&ell) {
        Ok(())
    } else {
        Err(HamiltonianError::UnsupportedEll(ell))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedPointDatum {
    pub name: String,
    #[serde(with = "serde_q")]
    pub level: Q,
    pub index: u32,
    pub weights: [i128; 3],
}

impl FixedPointDatum {
    pub fn weight_sum(&self) -> i128 {
        self.weights.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedPointData {
    pub ell: i128,
    pub points: Vec<FixedPointDatum>,
    /// `c1` of the generator `beta` of `H_2`.
    pub c1_beta: i128,
    /// The constant `r` in the ring relation `x^2 = r y`, where known.
    pub ring_constant: Option<i128>,
}

/// Weights `(-1,-2,-3), (1,-1,-l), (1,l,-1), (1,2,3)` at levels
/// `6, l, -l, -6`, index `8 - 2k` at `x_k`.
pub fn tolman_data(ell: i128) -> Result<FixedPointData, HamiltonianError> {
    check_ell(ell)?;
    let weights = [[-1, -2, -3], [1, -1, -ell], [1, ell, -1], [1, 2, 3]];
    let levels = [q(6), q(ell), q(-ell), q(-6)];
    let points = (0..4)
        .map(|i| FixedPointDatum {
            name: format!("x{}", i + 1),
            level: levels[i],
            index: 8 - 2 * (i as u32 + 1),
            weights: weights[i],
        })
        .collect();
    let ring_constant = match ell {
        4 => Some(5),
        5 => Some(22),
        _ => None,
    };
    Ok(FixedPointData { ell, points, c1_beta: 6 - ell, ring_constant })
}

/// `sum(weights(to)) - sum(weights(from))`, the raw Chern number of the
/// orbit of a gradient sphere from `from` to `to`.
pub fn weight_sum_difference(from: &FixedPointDatum, to: &FixedPointDatum) -> i128 {
    to.weight_sum() - from.weight_sum()
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct IsotropySphere {
    /// The point carrying weight `+order`.
    pub from: String,
    /// The point carrying weight `-order`.
    pub to: String,
    pub order: i128,
}

/// Every pair of distinct fixed points with `+m` among the weights of the
/// first and `-m` among those of the second, for `m >= 2`.
pub fn isotropy_spheres(data: &FixedPointData) -> Vec<IsotropySphere> {
    let mut out = Vec::new();
    for a in &data.points {
        for b in &data.points {
            if a.name == b.name {
                continue;
            }
            for &m in &a.weights {
                if m >= 2 && b.weights.contains(&-m) {
                    out.push(IsotropySphere { from: a.name.clone(), to: b.name.clone(), order: m });
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Half-space `n . x <= h` in `R^3`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Inequality3 {
    pub normal: [i128; 3],
    #[serde(with = "serde_q")]
    pub bound: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MomentPolytope3 {
    pub ell: i128,
    pub inequalities: Vec<Inequality3>,
}

/// `x1 >= 0, x2 >= 0, 2x1 + 3x2 <= x3, x1 + l x2 >= x3 - (6 - l)`.
pub fn moment_polytope(ell: i128) -> Result<MomentPolytope3, HamiltonianError> {
    check_ell(ell)?;
    let ineq = |normal: [i128; 3], bound: Q| Inequality3 { normal, bound };
    Ok(MomentPolytope3 {
        ell,
        inequalities: vec![
            ineq([-1, 0, 0], q(0)),
            ineq([0, -1, 0], q(0)),
            ineq([2, 3, -1], q(0)),
            ineq([-1, -ell, 1], q(6 - ell)),
        ],
    })
}

impl MomentPolytope3 {
    /// Open range of heights where the slice is a nondegenerate polygon.
    pub fn height_range(&self) -> (Q, Q) {
        (q(0), q(12 - 2 * self.ell))
    }

    pub fn critical_height(&self) -> Q {
        q(6 - self.ell)
    }

    pub fn slice(&self, x3: Q) -> Result<Slice, HamiltonianError> {
        let (lo, hi) = self.height_range();
        if x3 <= lo || x3 >= hi {
            return Err(HamiltonianError::HeightOutOfRange(fmt_q(&x3), fmt_q(&hi)));
        }
        let facets: Vec<Facet> = self
            .inequalities
            .iter()
            .map(|i| Facet { conormal: [i.normal[0], i.normal[1]], support: i.bound - q(i.normal[2]) * x3 })
            .collect();
        let polytope = Polytope2::from_inequalities(&facets)?;
        let edge = |n: [i128; 2]| {
            polytope
                .facets()
                .iter()
                .zip(polytope.edge_lengths())
                .find(|(f, _)| f.conormal == n)
                .map(|(_, len)| len)
        };
        let d1_length = edge([2, 3]).expect("the slanted edge is always present");
        let d2_length = edge([-1, -self.ell]);
        Ok(Slice {
            ell: self.ell,
            x3,
            kappa: x3 - q(6),
            facet_count: polytope.vertices().len(),
            d1_length,
            d2_length,
            polytope,
        })
    }

    /// The inequalities as printed for the toric model, before rescaling:
    /// `2x1 + 3x2 <= x3/6` and `x1 + l x2 >= 1 - 6/l + x3/l`.
    pub fn unnormalized_description(&self) -> Vec<String> {
        vec![
            "x1 >= 0".into(),
            "x2 >= 0".into(),
            "2x1 + 3x2 <= x3/6".into(),
            format!("x1 + {}x2 >= 1 - 6/{} + x3/{}", self.ell, self.ell, self.ell),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Slice {
    pub ell: i128,
    #[serde(with = "serde_q")]
    pub x3: Q,
    #[serde(with = "serde_q")]
    pub kappa: Q,
    pub facet_count: usize,
    /// Affine length of the edge with conormal `(2, 3)`.
    #[serde(with = "serde_q")]
    pub d1_length: Q,
    /// Affine length of the cut edge with conormal `(-1, -l)`, when present.
    #[serde(with = "serde_opt_q")]
    pub d2_length: Option<Q>,
    #[serde(skip)]
    pub polytope: Polytope2,
}

impl Slice {
    /// Whether the edge lengths equal the values of `[omega_kappa]` on
    /// `D_1` and, past the critical level, `D_2`.
    pub fn matches_omega(&self) -> Result<bool, HamiltonianError> {
        let (w1, w2) = omega_class(self.ell)?.at(self.kappa);
        Ok(self.d1_length == w1
            && match self.d2_length {
                Some(len) => len == w2,
                None => w2 <= q(0),
            })
    }
}

/// One formula for the pullback `Phi^*[omega_kappa]` checked against the
/// values it must take on `E_3` and `E_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PullbackCheck {
    pub ell: i128,
    pub formula: String,
    #[serde(with = "serde_q")]
    pub kappa: Q,
    pub class: DivisorClass,
    #[serde(with = "serde_q")]
    pub on_e3: Q,
    #[serde(with = "serde_q")]
    pub on_ek: Q,
    #[serde(with = "serde_q")]
    pub on_line: Q,
    pub consistent: bool,
}

fn pullback_check(ell: i128, kappa: Q, denominator: i128, class: DivisorClass) -> Result<PullbackCheck, HamiltonianError> {
    let k = class.k();
    let (w1, w2) = omega_class(ell)?.at(kappa);
    let e3 = DivisorClass::exceptional(k, 3).expect("k >= 3");
    let ek = DivisorClass::exceptional(k, k).expect("k >= 3");
    let mut m = vec![0; k];
    m[..3].fill(1);
    let line = DivisorClass::from_tuple(1, &m);
    let dot = |c: &DivisorClass| class.intersect(c).expect("same k");
    let (on_e3, on_ek, on_line) = (dot(&e3), dot(&ek), dot(&line));
    Ok(PullbackCheck {
        ell,
        formula: format!("(1 + kappa/6)(3L - E123) - (1 + kappa/{denominator})(E4 + .. + E{k})"),
        kappa,
        consistent: on_e3 == w1 && on_ek == w2 && on_line == q(0),
        class,
        on_e3,
        on_ek,
        on_line,
    })
}

/// The printed formula with `(1 + kappa/2)` on the second block.
pub fn printed_pullback(ell: i128, kappa: Q) -> Result<DivisorClass, HamiltonianError> {
    check_ell(ell)?;
    let k = (ell + 3) as usize;
    let a = q(1) + kappa / q(6);
    let b = q(1) + kappa / q(2);
    let m = (1..=k).map(|i| if i <= 3 { -a } else { -b }).collect();
    Ok(DivisorClass::new(q(3) * a, m))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmallEllReport {
    pub dictionaries: Vec<DictionaryReport>,
    pub pullbacks: Vec<PullbackCheck>,
    pub isotropy: Vec<(i128, Vec<IsotropySphere>)>,
    pub flags: Vec<String>,
}

/// Dictionaries `hat5`, `hat6`, the printed pullback formulas at a
/// sample level, and isotropy spheres for `l = 2, 3`.
pub fn ell23_dictionary_report() -> Result<SmallEllReport, HamiltonianError> {
    let dictionaries = vec![verify_dictionary(Dictionary::Hat5), verify_dictionary(Dictionary::Hat6)];
    let mut flags = Vec::new();
    for d in &dictionaries {
        if !d.valid {
            flags.push(format!("{}: not a lattice automorphism", d.name));
        }
        if !d.epsilon_negated {
            flags.push(format!("{}: epsilon is not negated; image {}", d.name, d.epsilon_image));
        }
    }
    let kappa = q(1);
    let mut pullbacks = Vec::new();
    for ell in [2, 3] {
        pullbacks.push(pullback_check(ell, kappa, 2, printed_pullback(ell, kappa)?)?);
        if ell != 2 {
            pullbacks.push(pullback_check(ell, kappa, ell, pullback_class(ell, kappa)?)?);
        }
    }
    for p in &pullbacks {
        if !p.consistent {
            flags.push(format!(
                "l = {}: {} gives {} on E{}, expected 1 + kappa/{}",
                p.ell,
                p.formula,
                fmt_q(&p.on_ek),
                p.class.k(),
                p.ell
            ));
        }
    }
    let mut isotropy = Vec::new();
    for ell in [2, 3] {
        isotropy.push((ell, isotropy_spheres(&tolman_data(ell)?)));
    }
    Ok(SmallEllReport { dictionaries, pullbacks, isotropy, flags })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn fixed_point_data() {
        let d4 = tolman_data(4).unwrap();
        assert_eq!(d4.points[1].weights, [1, -1, -4]);
        assert_eq!(d4.points[1].level, q(4));
        assert_eq!(d4.ring_constant, Some(5));
        let d5 = tolman_data(5).unwrap();
        assert_eq!(d5.points[2].weights, [1, 5, -1]);
        assert_eq!(d5.points[2].level, q(-5));
        assert_eq!(d5.points.iter().map(|p| p.index).collect::<Vec<_>>(), vec![6, 4, 2, 0]);
        assert!(tolman_data(6).is_err());
    }

    #[test]
    fn weight_differences() {
        let d = tolman_data(4).unwrap();
        let [x1, x2, _, x4] = [0, 1, 2, 3].map(|i| d.points[i].clone());
        assert_eq!(weight_sum_difference(&x4, &x1), -12);
        assert_eq!(weight_sum_difference(&x4, &x2), -10);
        assert_eq!(weight_sum_difference(&x2, &x2), 0);
    }

    #[test]
    fn isotropy() {
        let s2 = isotropy_spheres(&tolman_data(2).unwrap());
        let has = |s: &[IsotropySphere], a: &str, b: &str, m: i128| {
            s.contains(&IsotropySphere { from: a.into(), to: b.into(), order: m })
        };
        assert!(has(&s2, "x4", "x2", 2));
        assert!(has(&s2, "x3", "x1", 2));
        assert!(has(&s2, "x4", "x1", 3));
        let s3 = isotropy_spheres(&tolman_data(3).unwrap());
        assert!(has(&s3, "x4", "x2", 3));
        assert!(has(&s3, "x3", "x1", 3));
        let s5 = isotropy_spheres(&tolman_data(5).unwrap());
        assert!(!has(&s5, "x4", "x2", 5));
        assert!(has(&s5, "x3", "x2", 5));
    }

    #[test]
    fn slices() {
        let p = moment_polytope(4).unwrap();
        let low = p.slice(q(1)).unwrap();
        assert_eq!(low.facet_count, 3);
        assert_eq!(low.d1_length, frac(1, 6));
        assert_eq!(low.d2_length, None);
        let high = p.slice(q(3)).unwrap();
        assert_eq!(high.facet_count, 4);
        assert_eq!(high.d2_length, Some(frac(1, 4)));
        assert!(high.matches_omega().unwrap());
        let critical = p.slice(q(2)).unwrap();
        assert_eq!(critical.facet_count, 3);
        assert!(p.slice(q(0)).is_err());
        assert!(p.slice(q(4)).is_err());
    }

    #[test]
    fn small_ell_report() {
        let r = ell23_dictionary_report().unwrap();
        let two = &r.pullbacks[0];
        assert_eq!(two.class, pullback_class(2, q(1)).unwrap());
        assert!(two.consistent);
        assert!(!r.pullbacks[1].consistent);
        assert!(r.pullbacks[2].consistent);
        assert_eq!(
            printed_pullback(2, q(0)).unwrap(),
            DivisorClass::from_tuple(3, &[1, 1, 1, 1, 1])
        );
        assert!(r.flags.iter().any(|f| f.starts_with("hat6")));
        assert!(r.flags.iter().any(|f| f.starts_with("l = 3")));
        assert_eq!(r.flags.len(), 2);
    }
}
