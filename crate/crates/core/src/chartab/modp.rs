//! Arithmetic and small dense linear algebra over a prime field F_ℓ with
//! ℓ < 2³².

use crate::field::{is_prime, pow_mod};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModP {
    l: u64,
}

pub type Row = Vec<u64>;

impl ModP {
    pub fn new(l: u64) -> Self {
        debug_assert!(is_prime(l) && l < (1 << 32));
        ModP { l }
    }

    pub fn modulus(self) -> u64 {
        self.l
    }

    #[inline]
    pub fn reduce(self, x: u64) -> u64 {
        x % self.l
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        (a + b) % self.l
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.l - b) % self.l
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.l
    }

    pub fn neg(self, a: u64) -> u64 {
        (self.l - a) % self.l
    }

    pub fn pow(self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.l)
    }

    /// Inverse of a nonzero residue (Fermat).
    pub fn inv(self, a: u64) -> u64 {
        debug_assert!(a % self.l != 0);
        self.pow(a, self.l - 2)
    }

    pub fn from_i64(self, x: i64) -> u64 {
        x.rem_euclid(self.l as i64) as u64
    }

    /// Smallest generator of F_ℓ^*.
    pub fn primitive_root(self) -> u64 {
        let order = self.l - 1;
        let primes = prime_factors(order);
        (2..self.l)
            .find(|&g| primes.iter().all(|&r| self.pow(g, order / r) != 1))
            .unwrap_or(1)
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(self, rows: &mut [Row]) -> Vec<usize> {
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..ncols {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
                continue;
            };
            rows.swap(p, r);
            let inv = self.inv(rows[r][c]);
            for x in rows[r].iter_mut() {
                *x = self.mul(*x, inv);
            }
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == r || row[c] == 0 {
                    continue;
                }
                let f = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = self.sub(*x, self.mul(f, y));
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Basis of {x : m·x = 0} for a square or rectangular `m` (rows).
    pub fn nullspace(self, m: &[Row]) -> Vec<Row> {
        let ncols = m.first().map_or(0, |r| r.len());
        let mut work = m.to_vec();
        let pivots = self.rref(&mut work);
        let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![0; ncols];
                x[f] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    x[pc] = self.neg(work[r][f]);
                }
                x
            })
            .collect()
    }

    pub fn mat_vec(self, m: &[Row], v: &[u64]) -> Row {
        m.iter()
            .map(|row| row.iter().zip(v).fold(0, |acc, (&a, &b)| self.add(acc, self.mul(a, b))))
            .collect()
    }

    /// Characteristic polynomial det(xI − m), ascending coefficients, via
    /// reduction to upper Hessenberg form.
    pub fn charpoly(self, m: &[Row]) -> Row {
        let n = m.len();
        let mut h = m.to_vec();
        for k in 1..n.saturating_sub(1) {
            let Some(i) = (k..n).find(|&i| h[i][k - 1] != 0) else {
                continue;
            };
            if i != k {
                h.swap(i, k);
                for row in h.iter_mut() {
                    row.swap(i, k);
                }
            }
            let t_inv = self.inv(h[k][k - 1]);
            for i in k + 1..n {
                let u = self.mul(h[i][k - 1], t_inv);
                if u == 0 {
                    continue;
                }
                for j in 0..n {
                    let x = self.mul(u, h[k][j]);
                    h[i][j] = self.sub(h[i][j], x);
                }
                for row in h.iter_mut() {
                    let x = self.mul(u, row[i]);
                    row[k] = self.add(row[k], x);
                }
            }
        }
        // p[m] = charpoly of the leading m×m block
        let mut p: Vec<Row> = vec![vec![1]];
        for k in 0..n {
            let prev = &p[k];
            let mut next = vec![0; k + 2];
            for (d, &c) in prev.iter().enumerate() {
                next[d + 1] = self.add(next[d + 1], c);
                next[d] = self.sub(next[d], self.mul(h[k][k], c));
            }
            let mut t = 1;
            for i in (0..k).rev() {
                t = self.mul(t, h[i + 1][i]);
                let coef = self.mul(h[i][k], t);
                if coef == 0 {
                    continue;
                }
                for (d, &c) in p[i].iter().enumerate() {
                    next[d] = self.sub(next[d], self.mul(coef, c));
                }
            }
            p.push(next);
        }
        p.pop().unwrap()
    }

    pub fn eval(self, poly: &[u64], x: u64) -> u64 {
        poly.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }

    /// Distinct roots in F_ℓ, ascending, by scanning every residue.
    pub fn roots(self, poly: &[u64]) -> Vec<u64> {
        (0..self.l).filter(|&x| self.eval(poly, x) == 0).collect()
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
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

/// Smallest prime ℓ > `above` with ℓ ≡ 1 (mod m).
pub fn dixon_prime(m: u64, above: u64) -> Option<u64> {
    let mut l = (above / m) * m + 1;
    if l <= above {
        l += m;
    }
    while l < (1 << 32) {
        if is_prime(l) {
            return Some(l);
        }
        l += m;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn det(f: ModP, m: &[Row]) -> u64 {
        let n = m.len();
        if n == 0 {
            return 1;
        }
        // Laplace expansion along the first row; independent of rref/charpoly
        (0..n).fold(0, |acc, j| {
            let minor: Vec<Row> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                .collect();
            let term = f.mul(m[0][j], det(f, &minor));
            if j % 2 == 0 { f.add(acc, term) } else { f.sub(acc, term) }
        })
    }

    proptest! {
        #[test]
        fn charpoly_matches_determinant(entries in prop::collection::vec(0u64..13, 16), x in 0u64..13) {
            let f = ModP::new(13);
            let m: Vec<Row> = entries.chunks(4).map(|c| c.to_vec()).collect();
            let shifted: Vec<Row> = (0..4)
                .map(|i| (0..4).map(|j| {
                    let d = if i == j { x } else { 0 };
                    f.sub(d, m[i][j])
                }).collect())
                .collect();
            prop_assert_eq!(f.eval(&f.charpoly(&m), x), det(f, &shifted));
        }

        #[test]
        fn nullspace_vectors_are_killed(entries in prop::collection::vec(0u64..7, 12)) {
            let f = ModP::new(7);
            let m: Vec<Row> = entries.chunks(4).map(|c| c.to_vec()).collect();
            let ns = f.nullspace(&m);
            let mut work = m.clone();
            let rank = f.rref(&mut work).len();
            prop_assert_eq!(ns.len(), 4 - rank);
            for v in ns {
                prop_assert!(f.mat_vec(&m, &v).iter().all(|&x| x == 0));
            }
        }
    }

    #[test]
    fn primes_and_roots() {
        assert_eq!(dixon_prime(6, 12), Some(13));
        assert_eq!(dixon_prime(4, 96), Some(97));
        let f = ModP::new(13);
        assert_eq!(f.primitive_root(), 2);
        // (x - 3)(x - 5) = x² - 8x + 15
        assert_eq!(f.roots(&[f.from_i64(15), f.from_i64(-8), 1]), vec![3, 5]);
        assert_eq!(f.charpoly(&[vec![2, 0], vec![0, 7]]), vec![1, 4, 1]);
    }
}
