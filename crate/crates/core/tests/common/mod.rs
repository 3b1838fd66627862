//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use hamlat_core::decomposition::{AdmissibilityProfile, Decomposer, Decomposition, SearchBudget, SearchError};
use hamlat_core::linalg;
use hamlat_core::{q, DivisorClass, Q};
use num_integer::Integer;

/// Exceptional classes by brute force over `0 <= d <= 8`, `-1 <= m_i <= 4`,
/// using only `sum m = 3d - 1` and `sum m^2 = d^2 + 1`.
pub fn exceptional_slack(k: usize) -> Vec<DivisorClass> {
    let mut out = Vec::new();
    for d in 0..=8i128 {
        let mut m = Vec::new();
        slack_rec(k, 3 * d - 1, d * d + 1, &mut m, &mut |m| out.push(DivisorClass::from_tuple(d, m)));
    }
    out.sort();
    out
}

fn slack_rec(k: usize, sum: i128, sq: i128, m: &mut Vec<i128>, emit: &mut dyn FnMut(&[i128])) {
    let left = (k - m.len()) as i128;
    if left == 0 {
        if sum == 0 && sq == 0 {
            emit(m);
        }
        return;
    }
    if sq < 0 || sum < -left || sum > 4 * left {
        return;
    }
    for x in -1..=4 {
        m.push(x);
        slack_rec(k, sum - x, sq - x * x, m, emit);
        m.pop();
    }
}

/// `(d; m sorted decreasing)` with zeros dropped.
pub fn orbit_type(c: &DivisorClass) -> (i128, Vec<i128>) {
    let mut m: Vec<i128> = c.tuple_m().iter().map(|x| x.to_integer()).filter(|&x| x != 0).collect();
    m.sort_by(|a, b| b.cmp(a));
    (c.d().to_integer(), m)
}

pub fn listed_orbit_types() -> Vec<(i128, Vec<i128>)> {
    vec![
        (0, vec![-1]),
        (1, vec![1, 1]),
        (2, vec![1; 5]),
        (3, [vec![2], vec![1; 6]].concat()),
        (4, [vec![2; 3], vec![1; 5]].concat()),
        (5, [vec![2; 6], vec![1; 2]].concat()),
        (6, [vec![3], vec![2; 7]].concat()),
    ]
}

/// Free-component test written directly from the inequalities.
pub fn naive_free(d: i128, m: &[i128], second_block_bound: bool) -> bool {
    let k = m.len();
    d > 0
        && m.iter().all(|&x| x >= 0)
        && d >= m[..3].iter().sum::<i128>()
        && (!second_block_bound || 2 * d >= m[3..].iter().sum::<i128>())
        && m[..3].windows(2).all(|w| w[0] >= w[1])
        && m[3..k].windows(2).all(|w| w[0] >= w[1])
        && m.iter().map(|x| x * x - x).sum::<i128>() <= 2 + d * d - 3 * d
}

pub type Multiset = BTreeMap<DivisorClass, u32>;

pub fn as_multiset(dec: &Decomposition) -> Multiset {
    dec.parts.iter().map(|p| (p.class.clone(), p.multiplicity)).collect()
}

/// Sorted printable form, for comparisons with readable failure messages.
pub fn show(sets: &[Multiset]) -> Vec<String> {
    let mut out: Vec<String> = sets
        .iter()
        .map(|ms| ms.iter().map(|(c, n)| format!("{n}*({c})")).collect::<Vec<_>>().join(" + "))
        .collect();
    out.sort();
    out
}

/// Exhaustive decompositions for profiles with no positivity list: every
/// multiset of positive-degree parts (all free classes in a box plus rigid
/// classes of positive degree) with the right degree, completed by the
/// unique combination of degree-zero rigid classes found by inverting their
/// coordinate matrix.
pub struct NaiveDecomposer {
    k: usize,
    /// positive-degree parts followed by the degree-zero rigid classes
    classes: Vec<DivisorClass>,
    keys: Vec<[i128; 9]>,
    zero_start: usize,
    /// inverse of the degree-zero coordinate matrix; the profiles used
    /// here have unimodular ones
    inverse: Vec<Vec<i128>>,
    /// per degree: (inverse applied to the raw sum, part indices with counts)
    by_degree: Vec<Vec<(Vec<i128>, Vec<(usize, u32)>)>>,
}

/// A decomposition as sorted `((d, m_1, .., m_8), count)` pairs.
pub type PartList = Vec<([i128; 9], u32)>;

/// Integer coordinates of an integral class with `k <= 8`, zero padded.
pub fn int_key(c: &DivisorClass) -> [i128; 9] {
    let int = |x: &Q| {
        assert!(x.is_integer());
        *x.numer()
    };
    let mut out = [0; 9];
    out[0] = int(c.d());
    for (o, x) in out[1..].iter_mut().zip(c.m()) {
        *o = int(x);
    }
    out
}

impl NaiveDecomposer {
    pub fn new(profile: &AdmissibilityProfile, max_d: i128) -> Self {
        let k = profile.k;
        let mut classes: Vec<DivisorClass> =
            profile.rigid.iter().filter(|c| *c.d() > q(0)).cloned().collect();
        for d in 1..=max_d {
            let mut m = vec![0i128; k];
            loop {
                let c = DivisorClass::from_tuple(d, &m);
                if naive_free(d, &m, profile.second_block_bound)
                    && !profile.excluded.contains(&c)
                    && !profile.rigid.contains(&c)
                {
                    classes.push(c);
                }
                if !odometer(&mut m, 0, d) {
                    break;
                }
            }
        }
        let zero_start = classes.len();
        classes.extend(profile.rigid.iter().filter(|c| *c.d() == q(0)).cloned());
        let cols: Vec<Vec<Q>> = classes[zero_start..].iter().map(|c| c.m().to_vec()).collect();
        let inverse: Vec<Vec<i128>> = invert(&linalg::transpose(&cols))
            .iter()
            .map(|row| row.iter().map(|x| {
                assert!(x.is_integer(), "degree-zero rigid classes must form a unimodular basis");
                x.to_integer()
            }).collect())
            .collect();
        let mut raw_by_degree = vec![Vec::new(); max_d as usize + 1];
        let mut current = Vec::new();
        collect_multisets(&classes[..zero_start], 0, max_d, &mut current, &mut raw_by_degree, k);
        let by_degree = raw_by_degree
            .into_iter()
            .map(|level| level.into_iter().map(|(raw, parts)| (apply(&inverse, &raw), parts)).collect())
            .collect();
        let keys = classes.iter().map(int_key).collect();
        Self { k, classes, keys, zero_start, inverse, by_degree }
    }

    /// Sorted list of decompositions, each sorted by class.
    pub fn decompose_parts(&self, target: &DivisorClass) -> Vec<PartList> {
        let d = target.d().to_integer();
        let t: Vec<i128> = target.m().iter().map(|x| x.to_integer()).collect();
        let base = apply(&self.inverse, &t);
        let mut out = Vec::new();
        for (offset, parts) in &self.by_degree[d as usize] {
            if base.iter().zip(offset).any(|(b, o)| b < o) {
                continue;
            }
            let coeffs: Vec<i128> = base.iter().zip(offset).map(|(b, o)| b - o).collect();
            let mut list: PartList = parts.iter().map(|&(i, n)| (self.keys[i], n)).collect();
            for (j, &c) in coeffs.iter().enumerate() {
                if c > 0 {
                    list.push((self.keys[self.zero_start + j], c as u32));
                }
            }
            if list.iter().map(|p| p.1).sum::<u32>() >= 2 {
                list.sort();
                out.push(list);
            }
        }
        out.sort();
        out
    }

    pub fn decompose(&self, target: &DivisorClass) -> Vec<Multiset> {
        let mut out: Vec<Multiset> = self
            .decompose_parts(target)
            .into_iter()
            .map(|l| l.into_iter().map(|(key, n)| (self.class_of(&key).clone(), n)).collect())
            .collect();
        out.sort();
        out
    }

    pub fn k(&self) -> usize {
        self.k
    }

    fn class_of(&self, key: &[i128; 9]) -> &DivisorClass {
        let i = self.keys.iter().position(|k| k == key).expect("key of a known class");
        &self.classes[i]
    }
}

/// Library output in the same shape as [`NaiveDecomposer::decompose_parts`].
pub fn library_parts(lib: &Decomposer<'_>, target: &DivisorClass) -> Result<Vec<PartList>, SearchError> {
    let mut out = Vec::new();
    lib.for_each(target, SearchBudget::default(), |parts| {
        let mut l: PartList = parts.iter().map(|&(c, n)| (int_key(c), n)).collect();
        l.sort();
        out.push(l);
    })?;
    out.sort();
    Ok(out)
}

fn apply(m: &[Vec<i128>], v: &[i128]) -> Vec<i128> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

fn odometer(m: &mut [i128], lo: i128, hi: i128) -> bool {
    for x in m.iter_mut() {
        if *x < hi {
            *x += 1;
            return true;
        }
        *x = lo;
    }
    false
}

fn collect_multisets(
    parts: &[DivisorClass],
    start: usize,
    max_d: i128,
    current: &mut Vec<(usize, u32)>,
    by_degree: &mut [Vec<(Vec<i128>, Vec<(usize, u32)>)>],
    k: usize,
) {
    let deg: i128 = current.iter().map(|&(i, n)| parts[i].d().to_integer() * n as i128).sum();
    let mut raw = vec![0i128; k];
    for &(i, n) in current.iter() {
        for (r, x) in raw.iter_mut().zip(parts[i].m()) {
            *r += x.to_integer() * n as i128;
        }
    }
    by_degree[deg as usize].push((raw, current.clone()));
    for i in start..parts.len() {
        if deg + parts[i].d().to_integer() <= max_d {
            match current.last_mut() {
                Some(last) if last.0 == i => last.1 += 1,
                _ => current.push((i, 1)),
            }
            collect_multisets(parts, i, max_d, current, by_degree, k);
            let last = current.last_mut().expect("just pushed");
            last.1 -= 1;
            if last.1 == 0 {
                current.pop();
            }
        }
    }
}

/// Inverse of a square rational matrix by Gauss-Jordan on `[A | I]`.
pub fn invert(a: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = a.len();
    let mut aug: Vec<Vec<Q>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { q(1) } else { q(0) }));
            r
        })
        .collect();
    linalg::row_reduce(&mut aug);
    aug.iter().map(|r| r[n..].to_vec()).collect()
}

/// Determinantal divisors of an integer matrix: `d_i` is the gcd of all
/// `i x i` minors. Invariant factors are `d_i / d_{i-1}`.
pub fn invariant_factors_by_minors(a: &[Vec<i128>]) -> Vec<i128> {
    let rows = a.len();
    let cols = a[0].len();
    let r = rows.min(cols);
    let mut prev = 1i128;
    let mut out = Vec::new();
    for size in 1..=r {
        let mut g = 0i128;
        for rs in subsets(rows, size) {
            for cs in subsets(cols, size) {
                let minor: Vec<Vec<Q>> = rs.iter().map(|&i| cs.iter().map(|&j| q(a[i][j])).collect()).collect();
                g = g.gcd(&linalg::det(&minor).to_integer());
            }
        }
        if g == 0 {
            out.push(0);
            prev = 0;
        } else {
            out.push(if prev == 0 { 0 } else { g / prev });
            prev = g;
        }
    }
    out
}

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, size, cur, out);
            cur.pop();
        }
    }
    rec(0, n, size, &mut cur, &mut out);
    out
}

/// Vertices of the compact boundary of the convex hull of nonzero lattice
/// points in the cone spanned by `u`, `v`, strictly between them, found by
/// scanning a box.
pub fn hull_rays(u: [i128; 2], v: [i128; 2]) -> Vec<[i128; 2]> {
    let det = |a: [i128; 2], b: [i128; 2]| a[0] * b[1] - a[1] * b[0];
    let bound = u[0].abs().max(u[1].abs()).max(v[0].abs()).max(v[1].abs());
    let mut pts = Vec::new();
    for x in -bound..=bound {
        for y in -bound..=bound {
            let p = [x, y];
            if p != [0, 0] && det(u, p) >= 0 && det(p, v) >= 0 {
                pts.push(p);
            }
        }
    }
    // gift-wrap from u to v keeping every point to the right of each edge
    let mut out = Vec::new();
    let mut cur = u;
    while cur != v {
        let mut best: Option<[i128; 2]> = None;
        for &p in &pts {
            if p == cur || det(cur, p) <= 0 && p != v {
                continue;
            }
            let e = [p[0] - cur[0], p[1] - cur[1]];
            best = match best {
                None => Some(p),
                Some(b) => {
                    let eb = [b[0] - cur[0], b[1] - cur[1]];
                    let t = det(eb, e);
                    let farther = |a: [i128; 2]| (a[0] - cur[0]).pow(2) + (a[1] - cur[1]).pow(2);
                    if t > 0 || (t == 0 && farther(p) < farther(b)) {
                        Some(p)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        cur = best.expect("v is always a candidate");
        if cur != v {
            out.push(cur);
        }
    }
    out
}
