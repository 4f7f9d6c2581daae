//! Small exact linear algebra: row reduction over Z/pZ and integer Smith
//! normal form, plus prime helpers. Matrices here are tiny (rows indexed by
//! subgroup basis elements), so clarity beats asymptotics.

/// Reduced row-echelon form over Z/pZ. Returns the nonzero rows (each with a
/// leading 1) and their pivot columns.
pub struct ModPSpace {
    pub p: u64,
    pub rows: Vec<Vec<u64>>,
    pub pivots: Vec<usize>,
}

fn mod_p(x: i64, p: u64) -> u64 {
    (x.rem_euclid(p as i64)) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p is prime; Fermat.
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

pub fn rowspace_mod_p(rows: &[Vec<i64>], n_cols: usize, p: u64) -> ModPSpace {
    let mut space = ModPSpace { p, rows: Vec::new(), pivots: Vec::new() };
    for r in rows {
        let v: Vec<u64> = (0..n_cols).map(|c| mod_p(r[c], p)).collect();
        insert_row(&mut space, v);
    }
    space
}

fn insert_row(space: &mut ModPSpace, mut v: Vec<u64>) {
    let p = space.p;
    for (row, &piv) in space.rows.iter().zip(&space.pivots) {
        let c = v[piv] % p;
        if c != 0 {
            for (x, y) in v.iter_mut().zip(row) {
                *x = (*x + (p - c) * y) % p;
            }
        }
    }
    if let Some(piv) = v.iter().position(|&x| x % p != 0) {
        let inv = inv_mod(v[piv], p);
        for x in v.iter_mut() {
            *x = *x * inv % p;
        }
        // Clear the new pivot column in the existing rows.
        for row in space.rows.iter_mut() {
            let c = row[piv] % p;
            if c != 0 {
                for (y, x) in row.iter_mut().zip(&v) {
                    *y = (*y + (p - c) * x) % p;
                }
            }
        }
        space.rows.push(v);
        space.pivots.push(piv);
    }
}

impl ModPSpace {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Whether the vector lies in the span of the stored rows.
    pub fn contains(&self, v: &[i64]) -> bool {
        let p = self.p;
        let mut w: Vec<u64> = v.iter().map(|&x| mod_p(x, p)).collect();
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = w[piv] % p;
            if c != 0 {
                for (x, y) in w.iter_mut().zip(row) {
                    *x = (*x + (p - c) * y) % p;
                }
            }
        }
        w.iter().all(|&x| x % p == 0)
    }
}

/// Nonzero elementary divisors d_1 | d_2 | ... of an integer matrix.
pub fn elementary_divisors(mat: &[Vec<i64>]) -> Vec<i64> {
    let mut m: Vec<Vec<i128>> = mat
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut out = Vec::new();
    let mut top = 0usize;
    while top < rows.min(cols) {
        // Find the nonzero entry of least absolute value in the submatrix.
        let mut best: Option<(usize, usize)> = None;
        for i in top..rows {
            for j in top..cols {
                if m[i][j] != 0
                    && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let (bi, bj) = match best {
            Some(b) => b,
            None => break,
        };
        m.swap(top, bi);
        for row in m.iter_mut() {
            row.swap(top, bj);
        }
        // Reduce the pivot row and column until the pivot divides everything
        // in its row and column, then clear them.
        loop {
            let mut clean = true;
            for i in top + 1..rows {
                let q = m[i][top] / m[top][top];
                if q != 0 {
                    for j in top..cols {
                        m[i][j] -= q * m[top][j];
                    }
                }
                if m[i][top] != 0 {
                    clean = false;
                    m.swap(top, i);
                }
            }
            for j in top + 1..cols {
                let q = m[top][j] / m[top][top];
                if q != 0 {
                    for row in m.iter_mut().take(rows).skip(top) {
                        row[j] -= q * row[top];
                    }
                }
                if m[top][j] != 0 {
                    clean = false;
                    for row in m.iter_mut() {
                        row.swap(top, j);
                    }
                }
            }
            if clean {
                break;
            }
        }
        // Ensure divisibility into the remaining block.
        let pivot = m[top][top].abs();
        let mut fixed = true;
        'outer: for i in top + 1..rows {
            for j in top + 1..cols {
                if m[i][j] % pivot != 0 {
                    // Fold that row into the pivot row and redo this step.
                    for jj in top..cols {
                        m[top][jj] += m[i][jj];
                    }
                    fixed = false;
                    break 'outer;
                }
            }
        }
        if !fixed {
            continue;
        }
        out.push(pivot as i64);
        top += 1;
    }
    out
}

/// Rank of an integer matrix over the rationals.
pub fn rational_rank(mat: &[Vec<i64>]) -> usize {
    elementary_divisors(mat).len()
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&m| is_prime(m)).collect()
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rowspace_rank_and_membership() {
        let rows = vec![vec![1, -1], vec![6, 0]];
        let s5 = rowspace_mod_p(&rows, 2, 5);
        assert_eq!(s5.rank(), 2);
        let s2 = rowspace_mod_p(&rows, 2, 2);
        assert_eq!(s2.rank(), 1);
        assert!(s2.contains(&[1, 1]));
        assert!(!s2.contains(&[1, 0]));
        let s3 = rowspace_mod_p(&rows, 2, 3);
        assert_eq!(s3.rank(), 1);
    }

    #[test]
    fn divisors_of_known_matrices() {
        // The two-generator cyclic pattern: divisors 1, 6.
        let m = vec![vec![1, -1], vec![6, 0]];
        assert_eq!(elementary_divisors(&m), vec![1, 6]);
        assert_eq!(rational_rank(&m), 2);
        let singular = vec![vec![2, 4], vec![1, 2]];
        assert_eq!(rational_rank(&singular), 1);
        let diag = vec![vec![2, 0], vec![0, 3]];
        assert_eq!(elementary_divisors(&diag), vec![1, 6]);
    }

    #[test]
    fn primes() {
        assert_eq!(primes_up_to(7), vec![2, 3, 5, 7]);
        assert_eq!(prime_factors(15), vec![3, 5]);
        assert_eq!(prime_factors(8), vec![2]);
        assert!(is_prime(13));
        assert!(!is_prime(1));
    }
}
