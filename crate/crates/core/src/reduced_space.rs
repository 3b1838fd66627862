//! Cohomology of the reduced orbifolds: the family `[omega_kappa]`, the Euler
//! class of the level bundle, the classes `eps_k`, `chi_k`, `tau_{lambda,eps}`
//! pulled back to `X_k`, the minimal-area check and the homology of `Z`.
//!
//! Conventions: `k = l + 3`, `D_1 = CP^1_{2,3}` is covered by the chain
//! `C_0 = L - E_123, C_1 = E_1 - E_2, C_2 = E_2 - E_3, C_3 = E_3` and
//! `D_2 = CP^1_{1,l}` by `C_4 = E_4 - E_5, .., C_{k-1} = E_{k-1} - E_k, C_k = E_k`.

use num_traits::Zero;
use serde::Serialize;

use crate::lattice::{class_with_pairings, coordinates_in, inflation_class, DivisorClass};
use crate::rational::{frac, q, serde_q, Q};
use crate::snf::{describe_group, same_abelian_group, smith_normal_form, IntMatrix};
use crate::weyl::enumerate_exceptional;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReducedError {
    #[error("l = {0} is outside 2..=5")]
    UnsupportedEll(i128),
    #[error("k = {0} is not supported here")]
    UnsupportedK(usize),
    #[error("{0}")]
    Inconsistent(String),
}

fn check_ell(ell: i128) -> Result<(), ReducedError> {
    if (2..=5).contains(&ell) {
        Ok(())
    } else {
        Err(ReducedError::UnsupportedEll(ell))
    }
}

/// `constant + slope * kappa`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Affine {
    #[serde(with = "serde_q")]
    pub constant: Q,
    #[serde(with = "serde_q")]
    pub slope: Q,
}

impl Affine {
    pub fn new(constant: Q, slope: Q) -> Self {
        Self { constant, slope }
    }

    pub fn eval(&self, kappa: Q) -> Q {
        self.constant + self.slope * kappa
    }

    pub fn derivative(&self) -> Q {
        self.slope
    }
}

/// A class on `Z` given by its values on `D_1` and `D_2`, affine in `kappa`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ReducedClass {
    pub ell: i128,
    pub d1: Affine,
    pub d2: Affine,
}

impl ReducedClass {
    pub fn at(&self, kappa: Q) -> (Q, Q) {
        (self.d1.eval(kappa), self.d2.eval(kappa))
    }

    /// `-d/dkappa`, as a constant class.
    pub fn neg_derivative(&self) -> ReducedClass {
        ReducedClass {
            ell: self.ell,
            d1: Affine::new(-self.d1.slope, Q::zero()),
            d2: Affine::new(-self.d2.slope, Q::zero()),
        }
    }
}

/// `[omega_kappa]`: `(6 + kappa)/6` on `D_1`, `(l + kappa)/l` on `D_2`.
pub fn omega_class(ell: i128) -> Result<ReducedClass, ReducedError> {
    check_ell(ell)?;
    Ok(ReducedClass {
        ell,
        d1: Affine::new(q(1), frac(1, 6)),
        d2: Affine::new(q(1), frac(1, ell)),
    })
}

/// Euler class of the level bundle: `-1/6` on `D_1`, `-1/l` on `D_2`.
pub fn euler_class(ell: i128) -> Result<ReducedClass, ReducedError> {
    check_ell(ell)?;
    Ok(ReducedClass {
        ell,
        d1: Affine::new(frac(-1, 6), Q::zero()),
        d2: Affine::new(frac(-1, ell), Q::zero()),
    })
}

/// `lambda(kappa) = 6(l + kappa) / (l (6 + kappa))`.
pub fn lambda_of_kappa(ell: i128, kappa: Q) -> Q {
    q(6) * (q(ell) + kappa) / (q(ell) * (q(6) + kappa))
}

/// Rescaling `c = 6 / (kappa + 6)` that normalizes the `D_1` edge to `T_{2,3}`.
pub fn scale_of_kappa(kappa: Q) -> Q {
    q(6) / (kappa + q(6))
}

/// Whether the cut `lambda T_{1,l}` fits in `T_{2,3}` globally:
/// `-l < kappa < 2(3 - l)`.
pub fn in_toric_range(ell: i128, kappa: Q) -> bool {
    -q(ell) < kappa && kappa < q(2) * q(3 - ell)
}

/// The same predicate in the form `l + kappa > 0` and `l + kappa < 3 + kappa/2`.
pub fn in_toric_range_unsimplified(ell: i128, kappa: Q) -> bool {
    q(ell) + kappa > Q::zero() && q(ell) + kappa < q(3) + kappa / q(2)
}

fn k_of(ell: i128) -> usize {
    (ell + 3) as usize
}

/// The chain `C_0, .., C_k` on `X_k`.
pub fn chain_classes(k: usize) -> Vec<DivisorClass> {
    let e = |i| DivisorClass::exceptional(k, i).expect("index in range");
    let mut out = vec![DivisorClass::line(k) - DivisorClass::e_sum(k, &[1, 2, 3]).expect("k >= 3")];
    out.push(e(1) - e(2));
    out.push(e(2) - e(3));
    out.push(e(3));
    for i in 4..k {
        out.push(e(i) - e(i + 1));
    }
    out.push(e(k));
    out
}

/// `H_0 = {L - E_123, E_i - E_{i+1} : i != 3}`.
pub fn h0_classes(k: usize) -> Vec<DivisorClass> {
    chain_classes(k)
        .into_iter()
        .enumerate()
        .filter(|&(i, _)| i != 3 && i != k)
        .map(|(_, c)| c)
        .collect()
}

/// The class that pairs to zero with `H_0`, to `1/6` with `E_3` and to
/// `1/l` with `E_k`.
fn solved_epsilon(ell: i128) -> DivisorClass {
    let k = k_of(ell);
    let constraints: Vec<(DivisorClass, Q)> = chain_classes(k)
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            let v = if i == 3 {
                frac(1, 6)
            } else if i == k {
                frac(1, ell)
            } else {
                Q::zero()
            };
            (c, v)
        })
        .collect();
    class_with_pairings(k, &constraints).expect("chain classes form a basis")
}

/// `eps_k` for `k = l + 3`. For `l = 4, 5` this is the class written as
/// `1/12(6L - 2E_123 - 3E_4567)` and `1/30(15L - 5E_123 - 6E_45678)`; for
/// `l = 2, 3` it is solved from the pairing conditions.
pub fn epsilon_class(ell: i128) -> Result<DivisorClass, ReducedError> {
    check_ell(ell)?;
    Ok(match ell {
        4 => "1/12(6L-2E123-3E4567)".parse().expect("literal"),
        5 => "1/30(15L-5E123-6E45678)".parse().expect("literal"),
        _ => solved_epsilon(ell),
    })
}

/// `chi_7 = 1/12(6a - 2e_123 - 3e_4567)`, `chi_8 = 1/30(15a - 5e_123 - 6e_45678)`,
/// identified with classes through the pairing.
pub fn chi_class(k: usize) -> Result<DivisorClass, ReducedError> {
    match k {
        7 => Ok("1/12(6L-2E123-3E4567)".parse().expect("literal")),
        8 => Ok("1/30(15L-5E123-6E45678)".parse().expect("literal")),
        _ => Err(ReducedError::UnsupportedK(k)),
    }
}

/// The pullback `(1 + kappa/6)(3L - E_123) - (1 + kappa/l)(E_4 + .. + E_k)`.
pub fn pullback_class(ell: i128, kappa: Q) -> Result<DivisorClass, ReducedError> {
    check_ell(ell)?;
    let k = k_of(ell);
    let a = q(1) + kappa / q(6);
    let b = q(1) + kappa / q(ell);
    let m = (1..=k).map(|i| if i <= 3 { -a } else { -b }).collect();
    Ok(DivisorClass::new(q(3) * a, m))
}

/// `[tau_{lambda,eps}]` on `X_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TauClass {
    pub k: usize,
    #[serde(with = "serde_q")]
    pub lambda: Q,
    #[serde(with = "serde_q")]
    pub eps: Q,
    pub class: DivisorClass,
}

impl TauClass {
    /// Areas: `eps` on `C_0, C_1, C_2` and on `C_4 .. C_{k-1}`, `1 - 3 eps` on
    /// `C_3`, `lambda - (l - 1) eps` on `C_k`.
    pub fn new(k: usize, lambda: Q, eps: Q) -> Result<Self, ReducedError> {
        if !(5..=8).contains(&k) {
            return Err(ReducedError::UnsupportedK(k));
        }
        let ell = k as i128 - 3;
        let areas = Self::chain_areas(k, lambda, eps);
        let constraints: Vec<_> = chain_classes(k).into_iter().zip(areas).collect();
        let class = class_with_pairings(k, &constraints).expect("chain classes form a basis");
        debug_assert!(ell >= 2);
        Ok(Self { k, lambda, eps, class })
    }

    fn chain_areas(k: usize, lambda: Q, eps: Q) -> Vec<Q> {
        let ell = k as i128 - 3;
        (0..=k)
            .map(|i| match i {
                3 => q(1) - q(3) * eps,
                i if i == k => lambda - q(ell - 1) * eps,
                _ => eps,
            })
            .collect()
    }

    pub fn area(&self, c: &DivisorClass) -> Q {
        self.class.intersect(c).expect("same k")
    }

    /// Total over `C_0 .. C_3`.
    pub fn d1_total(&self) -> Q {
        chain_classes(self.k)[..4].iter().map(|c| self.area(c)).sum()
    }

    /// Total over `C_4 .. C_k`.
    pub fn d2_total(&self) -> Q {
        chain_classes(self.k)[4..].iter().map(|c| self.area(c)).sum()
    }

    /// The `eps -> 0` limit `3L - E_123 - lambda (E_4 + .. + E_k)`.
    pub fn limit_class(k: usize, lambda: Q) -> DivisorClass {
        let m = (1..=k).map(|i| if i <= 3 { q(-1) } else { -lambda }).collect();
        DivisorClass::new(q(3), m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinArea {
    pub k: usize,
    #[serde(with = "serde_q")]
    pub lambda: Q,
    #[serde(with = "serde_q")]
    pub eps: Q,
    #[serde(with = "serde_q")]
    pub minimum: Q,
    /// All exceptional classes attaining the minimum, sorted.
    pub argmin: Vec<DivisorClass>,
    pub candidates: usize,
}

/// Minimizes the `tau_{lambda,eps}` area over all exceptional classes.
pub fn min_area_exceptional(k: usize, lambda: Q, eps: Q) -> Result<MinArea, ReducedError> {
    let tau = TauClass::new(k, lambda, eps)?;
    let classes = enumerate_exceptional(k).map_err(|e| ReducedError::Inconsistent(e.to_string()))?;
    let areas: Vec<Q> = classes.iter().map(|c| tau.area(c)).collect();
    let minimum = *areas.iter().min().expect("nonempty");
    let argmin = classes
        .iter()
        .zip(&areas)
        .filter(|(_, a)| **a == minimum)
        .map(|(c, _)| c.clone())
        .collect();
    Ok(MinArea {
        k,
        lambda,
        eps,
        minimum,
        argmin,
        candidates: classes.len(),
    })
}

/// `mu` with `A_k` proportional to the pullback class at `kappa = mu`.
pub fn inflation_mu(k: usize) -> Result<Q, ReducedError> {
    let a = inflation_class(k).ok_or(ReducedError::UnsupportedK(k))?;
    let ell = k as i128 - 3;
    let alpha = -*a.e(1);
    let beta = -*a.e(4);
    if *a.d() != q(3) * alpha || alpha <= Q::zero() {
        return Err(ReducedError::Inconsistent(format!("{a} is not of the form alpha(3L - E_123) - beta E")));
    }
    // beta (1 + mu/6) = alpha (1 + mu/l)
    let denom = alpha / q(ell) - beta / q(6);
    if denom.is_zero() {
        return Err(ReducedError::Inconsistent("no solution for mu".into()));
    }
    let mu = (beta - alpha) / denom;
    if mu <= Q::zero() {
        return Err(ReducedError::Inconsistent(format!("mu = {mu} is not positive")));
    }
    let pb = pullback_class(ell, mu)?;
    if a.ratio_to(&pb).is_none() {
        return Err(ReducedError::Inconsistent("A_k not proportional to the pullback".into()));
    }
    Ok(mu)
}

/// The map `H_2(X_k) -> H_2(X_k)/H_2(V)` on the classes `3L - E_123` and
/// `E_4 + .. + E_k`, in the basis given by the images of `E_3` and `E_k`.
/// `V` is the neighbourhood of the chain `H_0`.
pub fn mayer_vietoris_matrix(ell: i128) -> Result<IntMatrix, ReducedError> {
    check_ell(ell)?;
    let k = k_of(ell);
    let chain = chain_classes(k);
    let tail = DivisorClass::e_sum(k, &(4..=k).collect::<Vec<_>>()).expect("range");
    let gens = [DivisorClass::parse("3L-E123", Some(k)).expect("literal"), tail];
    let mut columns = Vec::new();
    for g in &gens {
        let coords = coordinates_in(&chain, g)
            .ok_or_else(|| ReducedError::Inconsistent("chain is not a basis".into()))?;
        let col: Vec<i128> = [coords[3], coords[k]]
            .iter()
            .map(|x| {
                if x.is_integer() {
                    Ok(x.to_integer())
                } else {
                    Err(ReducedError::Inconsistent(format!("non-integral coordinate {x}")))
                }
            })
            .collect::<Result<_, _>>()?;
        columns.push(col);
    }
    Ok((0..2).map(|i| columns.iter().map(|c| c[i]).collect()).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyReport {
    pub ell: i128,
    pub matrix: IntMatrix,
    pub invariant_factors: Vec<i128>,
    pub cokernel: String,
    pub isomorphic_to_z6_zl: bool,
    pub caveat: Option<String>,
}

/// Torsion of `H_1` of the reduced space from the cokernel of `diag(6, l)`.
pub fn homology_z(ell: i128) -> Result<HomologyReport, ReducedError> {
    check_ell(ell)?;
    let matrix = mayer_vietoris_matrix(ell)?;
    let snf = smith_normal_form(&matrix).expect("rectangular");
    let invariant_factors = snf.diagonal.clone();
    let caveat = (ell < 4).then(|| format!("the homology computation is stated for l = 4, 5; l = {ell} is extrapolated"));
    Ok(HomologyReport {
        ell,
        isomorphic_to_z6_zl: same_abelian_group(&invariant_factors, &[6, ell]),
        cokernel: describe_group(&invariant_factors),
        matrix,
        invariant_factors,
        caveat,
    })
}
