//! Character tables by Dixon's method: the class matrices of the group are
//! reduced mod a prime ℓ ≡ 1 (mod exponent) and simultaneously diagonalized;
//! each common eigenvector gives one irreducible character.

use rayon::prelude::*;

use super::classes::ConjClasses;
use super::modp::{dixon_prime, ModP, Row};
use crate::error::{Error, Result};
use crate::group::GroupTable;

/// Irreducible characters of a group as residues mod ℓ.
///
/// Rows are irreducibles sorted by (degree, values); columns follow the class
/// ids of the `ConjClasses` the table was built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterTable {
    pub modulus: u64,
    /// primitive exponent-th root of unity mod ℓ
    pub root: u64,
    pub exponent: u64,
    pub group_order: u64,
    pub values: Vec<Row>,
    pub degrees: Vec<u64>,
}

impl CharacterTable {
    pub fn field(&self) -> ModP {
        ModP::new(self.modulus)
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    /// Sorts rows by (degree, values lexicographic).
    pub(crate) fn sort_rows(&mut self) {
        let mut rows: Vec<(u64, Row)> = self
            .degrees
            .iter()
            .copied()
            .zip(self.values.drain(..))
            .collect();
        rows.sort();
        (self.degrees, self.values) = rows.into_iter().unzip();
    }

    /// Orthogonality relations, Σ d² = |G| and d | |G|.
    pub fn validate(&self, classes: &ConjClasses) -> Result<()> {
        let f = self.field();
        let k = classes.count();
        if self.values.len() != k || self.values.iter().any(|r| r.len() != k) {
            return Err(Error::internal(format!(
                "character table is not {k}x{k}"
            )));
        }
        let order = self.group_order;
        for (a, chi) in self.values.iter().enumerate() {
            for (b, psi) in self.values.iter().enumerate() {
                let s = (0..k).fold(0, |acc, i| {
                    let term = f.mul(
                        f.mul(classes.sizes[i] as u64 % self.modulus, chi[i]),
                        psi[classes.inverse_class[i] as usize],
                    );
                    f.add(acc, term)
                });
                let want = if a == b { order % self.modulus } else { 0 };
                if s != want {
                    return Err(Error::internal(format!(
                        "row orthogonality fails for characters {a}, {b}"
                    )));
                }
            }
        }
        for i in 0..k {
            for j in 0..k {
                let s = self.values.iter().fold(0, |acc, chi| {
                    f.add(acc, f.mul(chi[i], chi[classes.inverse_class[j] as usize]))
                });
                let want = if i == j {
                    f.mul(order % self.modulus, f.inv(classes.sizes[i] as u64))
                } else {
                    0
                };
                if s != want {
                    return Err(Error::internal(format!(
                        "column orthogonality fails for classes {i}, {j}"
                    )));
                }
            }
        }
        let id = classes.identity_class as usize;
        let mut sum_sq = 0;
        for (chi, &d) in self.values.iter().zip(&self.degrees) {
            if d == 0 || chi[id] != d || order % d != 0 || d * d > order {
                return Err(Error::internal(format!("bad degree {d}")));
            }
            sum_sq += d * d;
        }
        if sum_sq != order {
            return Err(Error::internal(format!(
                "sum of squared degrees is {sum_sq}, not {order}"
            )));
        }
        Ok(())
    }
}

/// a[i][j][k] = #{(x, y) : x ∈ C_i, y ∈ C_j, xy = rep_k}.
fn structure_constants(group: &GroupTable, classes: &ConjClasses, inverses: &[u32]) -> Vec<Vec<Vec<u64>>> {
    let k = classes.count();
    // per target class: k×k slab
    let slabs: Vec<Vec<u64>> = classes
        .reps
        .par_iter()
        .map(|&z| {
            let mut slab = vec![0u64; k * k];
            for y in 0..group.order() as u32 {
                let x = group.mul(z, inverses[y as usize]);
                let ci = classes.class_of[x as usize] as usize;
                let cj = classes.class_of[y as usize] as usize;
                slab[ci * k + cj] += 1;
            }
            slab
        })
        .collect();
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| (0..k).map(|t| slabs[t][i * k + j]).collect())
                .collect()
        })
        .collect()
}

/// Splits a subspace (RREF basis rows) into eigenspaces of `m`, ascending by
/// eigenvalue.
fn split(f: ModP, m: &[Row], basis: Vec<Row>) -> Result<Vec<Vec<Row>>> {
    let d = basis.len();
    let pivots: Vec<usize> = basis
        .iter()
        .map(|b| b.iter().position(|&x| x != 0).expect("basis rows are nonzero"))
        .collect();
    // m·b_s = Σ_t r[t][s] b_t
    let images: Vec<Row> = basis.iter().map(|b| f.mat_vec(m, b)).collect();
    let r: Vec<Row> = (0..d)
        .map(|t| (0..d).map(|s| images[s][pivots[t]]).collect())
        .collect();
    let eigenvalues = f.roots(&f.charpoly(&r));
    if eigenvalues.len() == 1 {
        return Ok(vec![basis]);
    }
    let mut out = Vec::with_capacity(eigenvalues.len());
    let mut total = 0;
    for lambda in eigenvalues {
        let shifted: Vec<Row> = (0..d)
            .map(|t| {
                (0..d)
                    .map(|s| if s == t { f.sub(r[t][s], lambda) } else { r[t][s] })
                    .collect()
            })
            .collect();
        let mut space: Vec<Row> = f
            .nullspace(&shifted)
            .into_iter()
            .map(|c| {
                let mut v = vec![0; basis[0].len()];
                for (ct, b) in c.iter().zip(&basis) {
                    for (x, &y) in v.iter_mut().zip(b) {
                        *x = f.add(*x, f.mul(*ct, y));
                    }
                }
                v
            })
            .collect();
        f.rref(&mut space);
        total += space.len();
        out.push(space);
    }
    if total != d {
        return Err(Error::internal("class matrix is not diagonalizable mod ℓ"));
    }
    Ok(out)
}

/// Degrees need ℓ > 2|G|; the prime must also be ≡ 1 mod the exponent.
pub fn choose_modulus(order: u64, exponent: u64) -> Result<(u64, u64)> {
    let l = dixon_prime(exponent, 2 * order)
        .ok_or_else(|| Error::domain("no suitable prime for the character computation"))?;
    let f = ModP::new(l);
    let g = f.primitive_root();
    Ok((l, f.pow(g, (l - 1) / exponent)))
}

pub fn character_table(group: &GroupTable, classes: &ConjClasses) -> Result<CharacterTable> {
    let inverses = group.inverse_ids()?;
    character_table_with(group, classes, &inverses)
}

pub fn character_table_with(
    group: &GroupTable,
    classes: &ConjClasses,
    inverses: &[u32],
) -> Result<CharacterTable> {
    let order = group.order() as u64;
    let exponent = classes.exponent();
    let (l, root) = choose_modulus(order, exponent)?;
    let f = ModP::new(l);
    let k = classes.count();
    log::debug!("{}: {k} classes, exponent {exponent}, working mod {l}", group.name());

    let a = structure_constants(group, classes, inverses);
    let identity: Vec<Row> = (0..k)
        .map(|i| (0..k).map(|j| u64::from(i == j)).collect())
        .collect();
    let mut spaces = vec![identity];
    for j in 0..k {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        // (M_j)_{ik} = a[j][i][k]
        let m: Vec<Row> = a[j].iter().map(|row| row.iter().map(|&x| x % l).collect()).collect();
        let mut next = Vec::with_capacity(k);
        for s in spaces {
            if s.len() == 1 {
                next.push(s);
            } else {
                next.extend(split(f, &m, s)?);
            }
        }
        spaces = next;
    }
    if spaces.iter().any(|s| s.len() != 1) {
        return Err(Error::internal(
            "class matrices did not split into one-dimensional eigenspaces",
        ));
    }

    let id = classes.identity_class as usize;
    let mut values = Vec::with_capacity(k);
    let mut degrees = Vec::with_capacity(k);
    for s in spaces {
        let w = &s[0];
        if w[id] == 0 {
            return Err(Error::internal("eigenvector vanishes at the identity class"));
        }
        // ω_i = |C_i| χ(g_i) / χ(1), normalized so ω at the identity is 1
        let scale = f.inv(w[id]);
        let omega: Row = w.iter().map(|&x| f.mul(x, scale)).collect();
        // Σ ω_i ω_{i*} / |C_i| = |G| / χ(1)²
        let norm = (0..k).fold(0, |acc, i| {
            let t = f.mul(omega[i], omega[classes.inverse_class[i] as usize]);
            f.add(acc, f.mul(t, f.inv(classes.sizes[i] as u64)))
        });
        if norm == 0 {
            return Err(Error::internal("degenerate character norm"));
        }
        let d_sq = f.mul(order, f.inv(norm));
        let d = (1..).take_while(|d| d * d <= d_sq).last().unwrap_or(0);
        if d == 0 || d * d != d_sq || d_sq > order {
            return Err(Error::internal(format!(
                "squared degree residue {d_sq} does not lift to a square ≤ {order}"
            )));
        }
        degrees.push(d);
        values.push(
            (0..k)
                .map(|i| f.mul(f.mul(d, omega[i]), f.inv(classes.sizes[i] as u64)))
                .collect(),
        );
    }
    let mut table = CharacterTable {
        modulus: l,
        root,
        exponent,
        group_order: order,
        values,
        degrees,
    };
    table.sort_rows();
    table.validate(classes)?;
    Ok(table)
}
