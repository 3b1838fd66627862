//! Smith normal form over the integers.
//!
//! `smith_normal_form(a)` returns unimodular `u`, `v` and the diagonal `d`
//! with `u * a * v = diag(d)` and `d[i] | d[i + 1]`. Everything is `i128`;
//! the matrices that occur are tiny.

use num_integer::Integer;
use serde::Serialize;

pub type IntMatrix = Vec<Vec<i128>>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SnfError {
    #[error("matrix rows have different lengths")]
    Ragged,
    #[error("cannot parse matrix {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmithForm {
    /// Diagonal entries, non-negative, each dividing the next. Length is
    /// `min(rows, cols)`.
    pub diagonal: Vec<i128>,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries other than 1: the torsion of the cokernel.
    pub fn torsion(&self) -> Vec<i128> {
        self.diagonal.iter().copied().filter(|&x| x > 1).collect()
    }

    /// Rank of the free part of the cokernel of an `rows x cols` matrix.
    pub fn free_rank(&self, rows: usize) -> usize {
        rows - self.diagonal.iter().filter(|&&x| x != 0).count()
    }
}

fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

pub fn mat_mul(a: &[Vec<i128>], b: &[Vec<i128>]) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|t| row[t] * b[t][j]).sum())
                .collect()
        })
        .collect()
}

/// Parses `"6,0;0,4"` (rows separated by `;`).
pub fn parse_matrix(s: &str) -> Result<IntMatrix, SnfError> {
    let rows: Vec<Vec<i128>> = s
        .split(';')
        .map(|r| {
            r.split(',')
                .map(|x| x.trim().parse::<i128>())
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()
        .map_err(|_| SnfError::Parse(s.to_string()))?;
    check_rect(&rows)?;
    Ok(rows)
}

fn check_rect(a: &[Vec<i128>]) -> Result<(), SnfError> {
    let cols = a.first().map_or(0, Vec::len);
    if a.iter().any(|r| r.len() != cols) {
        return Err(SnfError::Ragged);
    }
    Ok(())
}

pub fn smith_normal_form(a: &[Vec<i128>]) -> Result<SmithForm, SnfError> {
    check_rect(a)?;
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: IntMatrix = a.to_vec();
    let mut u = identity(rows);
    let mut v = identity(cols);

    for t in 0..rows.min(cols) {
        // pick the smallest nonzero entry in the remaining block as pivot
        let Some((pi, pj)) = smallest_nonzero(&m, t) else {
            break;
        };
        swap_rows(&mut m, &mut u, t, pi);
        swap_cols(&mut m, &mut v, t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if m[i][t] != 0 {
                    let qt = nearest_quotient(m[i][t], m[t][t]);
                    add_row(&mut m, &mut u, i, t, -qt);
                    if m[i][t] != 0 {
                        swap_rows(&mut m, &mut u, t, i);
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if m[t][j] != 0 {
                    let qt = nearest_quotient(m[t][j], m[t][t]);
                    add_col(&mut m, &mut v, j, t, -qt);
                    if m[t][j] != 0 {
                        swap_cols(&mut m, &mut v, t, j);
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            // the pivot must divide the rest of the block
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| m[i][j] % m[t][t] != 0);
            match bad {
                Some((i, _)) => add_row(&mut m, &mut u, t, i, 1),
                None => break,
            }
        }
        if m[t][t] < 0 {
            for x in m[t].iter_mut() {
                *x = -*x;
            }
            for x in u[t].iter_mut() {
                *x = -*x;
            }
        }
    }
    let diagonal = (0..rows.min(cols)).map(|i| m[i][i]).collect();
    Ok(SmithForm { diagonal, u, v })
}

fn nearest_quotient(a: i128, b: i128) -> i128 {
    let (q, r) = a.div_mod_floor(&b);
    if 2 * r.abs() > b.abs() {
        q + 1
    } else {
        q
    }
}

fn smallest_nonzero(m: &[Vec<i128>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(i128, usize, usize)> = None;
    for (i, row) in m.iter().enumerate().skip(t) {
        for (j, &x) in row.iter().enumerate().skip(t) {
            if x != 0 && best.is_none_or(|(b, _, _)| x.abs() < b) {
                best = Some((x.abs(), i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

fn swap_rows(m: &mut IntMatrix, u: &mut IntMatrix, a: usize, b: usize) {
    m.swap(a, b);
    u.swap(a, b);
}

fn swap_cols(m: &mut IntMatrix, v: &mut IntMatrix, a: usize, b: usize) {
    for row in m.iter_mut().chain(v.iter_mut()) {
        row.swap(a, b);
    }
}

/// row[dst] += f * row[src]
fn add_row(m: &mut IntMatrix, u: &mut IntMatrix, dst: usize, src: usize, f: i128) {
    for mat in [m, u] {
        let s = mat[src].clone();
        for (x, y) in mat[dst].iter_mut().zip(s) {
            *x += f * y;
        }
    }
}

/// col[dst] += f * col[src]
fn add_col(m: &mut IntMatrix, v: &mut IntMatrix, dst: usize, src: usize, f: i128) {
    for mat in [m, v] {
        for row in mat.iter_mut() {
            row[dst] += f * row[src];
        }
    }
}

/// Integer determinant by cofactor expansion; only used on small matrices.
pub fn int_det(a: &[Vec<i128>]) -> i128 {
    let n = a.len();
    match n {
        0 => 1,
        1 => a[0][0],
        _ => (0..n)
            .map(|j| {
                let minor: IntMatrix = a[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * a[0][j] * int_det(&minor)
            })
            .sum(),
    }
}

/// Prime-power decomposition of `Z/n1 + Z/n2 + ..` (zeros stand for free
/// summands and are counted separately). Two finitely generated abelian
/// groups are isomorphic iff these agree.
pub fn elementary_divisors(orders: &[i128]) -> (usize, Vec<(i128, u32)>) {
    let free = orders.iter().filter(|&&n| n == 0).count();
    let mut out = Vec::new();
    for &n in orders.iter().filter(|&&n| n != 0) {
        let mut n = n.abs();
        let mut p = 2;
        while p * p <= n {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            if e > 0 {
                out.push((p, e));
            }
            p += 1;
        }
        if n > 1 {
            out.push((n, 1));
        }
    }
    out.sort();
    (free, out)
}

/// Whether `Z/a1 + ..` and `Z/b1 + ..` are isomorphic.
pub fn same_abelian_group(a: &[i128], b: &[i128]) -> bool {
    elementary_divisors(a) == elementary_divisors(b)
}

/// Formats a cyclic decomposition like `Z2 + Z12`, `Z` for a free summand,
/// `0` for the trivial group.
pub fn describe_group(orders: &[i128]) -> String {
    let parts: Vec<String> = orders
        .iter()
        .filter(|&&n| n != 1)
        .map(|&n| if n == 0 { "Z".to_string() } else { format!("Z{n}") })
        .collect();
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}
