use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::classes::ConjClasses;
use super::dixon::CharacterTable;
use crate::error::{Error, Result};
use crate::group::{Embedding, GroupKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrrepInvariants {
    pub degree: u64,
    pub dim_inv: u64,
    pub dim_dual_inv: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub characters: Vec<IrrepInvariants>,
    pub max_dim_inv: u64,
    /// dim π^H → number of irreducibles
    pub histogram: BTreeMap<u64, usize>,
}

impl InvariantReport {
    pub fn from_characters(characters: Vec<IrrepInvariants>) -> Self {
        let max_dim_inv = characters.iter().map(|c| c.dim_inv).max().unwrap_or(0);
        let mut histogram = BTreeMap::new();
        for c in &characters {
            *histogram.entry(c.dim_inv).or_insert(0) += 1;
        }
        InvariantReport {
            characters,
            max_dim_inv,
            histogram,
        }
    }

    /// Σ_π (dim π^H)².
    pub fn sum_of_squares(&self) -> u64 {
        self.characters.iter().map(|c| c.dim_inv * c.dim_inv).sum()
    }

    pub fn dual_dims_agree(&self) -> bool {
        self.characters.iter().all(|c| c.dim_inv == c.dim_dual_inv)
    }
}

/// Lifts the residue of an integer known to lie in [0, bound].
fn lift(residue: u64, bound: u64, what: &str) -> Result<u64> {
    if residue <= bound {
        Ok(residue)
    } else {
        Err(Error::internal(format!(
            "{what}: residue {residue} does not lift into [0, {bound}]"
        )))
    }
}

/// dim π^H = (1/|H|) Σ_{h∈H} χ(h), and the same for π* via χ(h⁻¹).
pub fn dim_invariants(
    table: &CharacterTable,
    classes: &ConjClasses,
    emb: &Embedding<'_>,
) -> Result<InvariantReport> {
    if table.group_order != emb.big.order() as u64 || classes.class_of.len() != emb.big.order() {
        return Err(Error::domain("character table does not belong to the embedding's group"));
    }
    let f = table.field();
    let mut hits = vec![0u64; classes.count()];
    for &g in &emb.map {
        hits[classes.class_of[g as usize] as usize] += 1;
    }
    let h_inv = f.inv(emb.map.len() as u64 % table.modulus);
    let average = |chi: &[u64], dual: bool| {
        let s = hits.iter().enumerate().fold(0, |acc, (c, &n)| {
            let col = if dual { classes.inverse_class[c] as usize } else { c };
            f.add(acc, f.mul(n % table.modulus, chi[col]))
        });
        f.mul(s, h_inv)
    };
    let characters = table
        .values
        .iter()
        .zip(&table.degrees)
        .map(|(chi, &d)| {
            Ok(IrrepInvariants {
                degree: d,
                dim_inv: lift(average(chi, false), d, "dim of invariants")?,
                dim_dual_inv: lift(average(chi, true), d, "dim of dual invariants")?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(InvariantReport::from_characters(characters))
}

/// For central z, χ(z)/χ(1) must be a root of unity of order dividing the
/// exponent.
pub fn central_characters_coherent(
    table: &CharacterTable,
    classes: &ConjClasses,
    center: &[u32],
) -> bool {
    let f = table.field();
    table.values.iter().zip(&table.degrees).all(|(chi, &d)| {
        center.iter().all(|&z| {
            let c = classes.class_of[z as usize] as usize;
            classes.sizes[c] == 1 && {
                let ratio = f.mul(chi[c], f.inv(d));
                f.pow(ratio, table.exponent) == 1
            }
        })
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationOutcome {
    pub kind: GroupKind,
    pub k: u64,
    /// k + 1
    pub bound: u64,
    /// 2 for GL pairs, 1 for orthogonal pairs
    pub family_bound: u64,
    pub max_dim_inv: u64,
    pub attained: bool,
    pub pass: bool,
    pub violations: Vec<String>,
}

impl VerificationOutcome {
    pub fn ensure(&self) -> Result<()> {
        if self.pass {
            Ok(())
        } else {
            Err(Error::Verification(self.violations.join("; ")))
        }
    }
}

/// Checks max dim π^H ≤ k + 1 and the family bound.
pub fn verify_pair(kind: GroupKind, report: &InvariantReport, k: u64) -> VerificationOutcome {
    let bound = k + 1;
    let family_bound = match kind {
        GroupKind::GL => 2,
        GroupKind::O => 1,
    };
    let mut violations = Vec::new();
    for (i, c) in report.characters.iter().enumerate() {
        if c.dim_inv > bound {
            violations.push(format!(
                "irreducible #{i} (degree {}) has dim π^H = {} > k + 1 = {bound}",
                c.degree, c.dim_inv
            ));
        }
        if c.dim_inv > family_bound {
            violations.push(format!(
                "irreducible #{i} (degree {}) has dim π^H = {} > {family_bound}",
                c.degree, c.dim_inv
            ));
        }
    }
    VerificationOutcome {
        kind,
        k,
        bound,
        family_bound,
        max_dim_inv: report.max_dim_inv,
        attained: report.max_dim_inv == bound.min(family_bound),
        pass: violations.is_empty(),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartab::{character_table, conjugacy_classes};
    use crate::field::build_field;
    use crate::group::{embed_standard, enumerate_gl, enumerate_o, Embedding, DEFAULT_GROUP_CAP};

    #[test]
    fn trivial_subgroup_gives_degrees() {
        let f = build_field(2, 1).unwrap();
        let h = enumerate_gl(1, &f, DEFAULT_GROUP_CAP).unwrap();
        let g = enumerate_gl(2, &f, DEFAULT_GROUP_CAP).unwrap();
        let emb = embed_standard(&h, &g).unwrap();
        let c = conjugacy_classes(&g, DEFAULT_GROUP_CAP).unwrap();
        let t = character_table(&g, &c).unwrap();
        let r = dim_invariants(&t, &c, &emb).unwrap();
        let dims: Vec<u64> = r.characters.iter().map(|x| x.dim_inv).collect();
        assert_eq!(dims, vec![1, 1, 2]);
        assert_eq!(r.max_dim_inv, 2);
        let out = verify_pair(GroupKind::GL, &r, 1);
        assert!(out.pass && out.attained);
        assert!(central_characters_coherent(&t, &c, &g.center_ids()));
    }

    #[test]
    fn self_pair_picks_out_the_trivial_character() {
        let f = build_field(3, 1).unwrap();
        let g = enumerate_gl(2, &f, DEFAULT_GROUP_CAP).unwrap();
        let emb = Embedding {
            small: &g,
            big: &g,
            map: (0..g.order() as u32).collect(),
        };
        let c = conjugacy_classes(&g, DEFAULT_GROUP_CAP).unwrap();
        let t = character_table(&g, &c).unwrap();
        let r = dim_invariants(&t, &c, &emb).unwrap();
        let dims: Vec<u64> = r.characters.iter().map(|x| x.dim_inv).collect();
        let mut want = vec![0; t.len()];
        want[0] = 1;
        assert_eq!(dims, want);
        assert!(central_characters_coherent(&t, &c, &g.center_ids()));
    }

    #[test]
    fn orthogonal_pair_is_multiplicity_free() {
        let f = build_field(3, 1).unwrap();
        let h = enumerate_o(2, &f, DEFAULT_GROUP_CAP).unwrap();
        let g = enumerate_o(3, &f, DEFAULT_GROUP_CAP).unwrap();
        let emb = embed_standard(&h, &g).unwrap();
        let c = conjugacy_classes(&g, DEFAULT_GROUP_CAP).unwrap();
        let t = character_table(&g, &c).unwrap();
        let r = dim_invariants(&t, &c, &emb).unwrap();
        assert!(r.characters.iter().all(|x| x.dim_inv <= 1));
        assert!(r.dual_dims_agree());
        assert!(verify_pair(GroupKind::O, &r, 0).pass);
    }

    #[test]
    fn violations_are_reported() {
        let r = InvariantReport::from_characters(vec![
            IrrepInvariants { degree: 1, dim_inv: 1, dim_dual_inv: 1 },
            IrrepInvariants { degree: 5, dim_inv: 3, dim_dual_inv: 3 },
        ]);
        let out = verify_pair(GroupKind::GL, &r, 1);
        assert!(!out.pass);
        assert_eq!(out.violations.len(), 2);
        assert!(matches!(out.ensure(), Err(Error::Verification(_))));
        let out = verify_pair(GroupKind::O, &r, 0);
        assert!(!out.pass);
        assert_eq!(r.histogram.get(&3), Some(&1));
        assert!(lift(7, 5, "x").is_err());
    }
}
