//! Double cosets H\G/K for the standard embedding, with K = H or K = Z(G)·H,
//! and the permutation transpose induces on them.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::group::{Embedding, GroupTable};
use crate::matrix::MatFq;

pub struct DoubleCosetDecomposition<'a> {
    pub group: &'a GroupTable,
    pub mod_center: bool,
    /// element id → coset id
    pub coset_of: Vec<u32>,
    /// coset id → minimal element id in the coset
    pub reps: Vec<u32>,
}

impl DoubleCosetDecomposition<'_> {
    pub fn count(&self) -> usize {
        self.reps.len()
    }

    pub fn coset_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.count()];
        for &c in &self.coset_of {
            sizes[c as usize] += 1;
        }
        sizes
    }
}

/// Partition of the group elements into H x K orbits.
///
/// Seeds are taken in ascending element id, so each seed is the minimum of its
/// coset and coset ids come out ordered by representative.
pub fn double_cosets<'a>(
    group: &'a GroupTable,
    emb: &Embedding<'_>,
    mod_center: bool,
    cap: u64,
) -> Result<DoubleCosetDecomposition<'a>> {
    if !std::ptr::eq(emb.big, group) {
        return Err(Error::domain("embedding does not target this group"));
    }
    if group.order() as u64 > cap {
        return Err(Error::Capacity {
            what: "group order",
            value: group.order() as u64,
            cap,
        });
    }
    let left: Vec<u32> = emb
        .small
        .generators()
        .iter()
        .map(|&s| emb.map[s as usize])
        .collect();
    let mut right = left.clone();
    if mod_center {
        let id = group.identity_id();
        right.extend(group.center_ids().into_iter().filter(|&z| z != id));
    }

    const UNSEEN: u32 = u32::MAX;
    let mut coset_of = vec![UNSEEN; group.order()];
    let mut reps = Vec::new();
    let mut queue = VecDeque::new();
    for seed in 0..group.order() as u32 {
        if coset_of[seed as usize] != UNSEEN {
            continue;
        }
        let c = reps.len() as u32;
        reps.push(seed);
        coset_of[seed as usize] = c;
        queue.push_back(seed);
        while let Some(x) = queue.pop_front() {
            let next = left
                .iter()
                .map(|&h| group.mul(h, x))
                .chain(right.iter().map(|&k| group.mul(x, k)));
            for y in next {
                if coset_of[y as usize] == UNSEEN {
                    coset_of[y as usize] = c;
                    queue.push_back(y);
                }
            }
        }
    }
    Ok(DoubleCosetDecomposition {
        group,
        mod_center,
        coset_of,
        reps,
    })
}

/// The permutation of double cosets induced by transpose.
pub struct InvolutionAction<'d, 'a> {
    pub decomp: &'d DoubleCosetDecomposition<'a>,
    pub perm: Vec<u32>,
    pub fixed_count: usize,
    pub nonfixed_count: usize,
}

impl InvolutionAction<'_, '_> {
    /// Half the number of non-fixed cosets.
    pub fn k(&self) -> usize {
        self.nonfixed_count / 2
    }

    pub fn nonfixed_cosets(&self) -> Vec<u32> {
        (0..self.perm.len() as u32)
            .filter(|&c| self.perm[c as usize] != c)
            .collect()
    }

    pub fn nonfixed_reps(&self) -> Vec<&MatFq> {
        self.nonfixed_cosets()
            .into_iter()
            .map(|c| self.decomp.group.element(self.decomp.reps[c as usize]))
            .collect()
    }
}

/// Applies transpose to every element and checks it is well defined on cosets.
pub fn involution_action<'d, 'a>(
    decomp: &'d DoubleCosetDecomposition<'a>,
) -> Result<InvolutionAction<'d, 'a>> {
    let transposed = decomp.group.transpose_ids()?;
    let perm: Vec<u32> = decomp
        .reps
        .iter()
        .map(|&r| decomp.coset_of[transposed[r as usize] as usize])
        .collect();
    for (x, &tx) in transposed.iter().enumerate() {
        let c = decomp.coset_of[x];
        if decomp.coset_of[tx as usize] != perm[c as usize] {
            return Err(Error::internal(format!(
                "transpose is not well defined on coset {c} (element {x})"
            )));
        }
    }
    if perm
        .iter()
        .enumerate()
        .any(|(c, &pc)| perm[pc as usize] != c as u32)
    {
        return Err(Error::internal("transpose does not act as an involution on cosets"));
    }
    let fixed_count = perm.iter().enumerate().filter(|&(c, &pc)| c as u32 == pc).count();
    let nonfixed_count = perm.len() - fixed_count;
    Ok(InvolutionAction {
        decomp,
        perm,
        fixed_count,
        nonfixed_count,
    })
}

/// The number 2k of cosets not preserved by transpose.
pub fn count_nonfixed(action: &InvolutionAction<'_, '_>) -> usize {
    action.nonfixed_count
}

/// For an (n+1)×(n+1) matrix, whether the last row and the last column,
/// each without the corner entry, vanish.
pub fn border_zero_pattern(m: &MatFq) -> (bool, bool) {
    let n = m.rows() - 1;
    let row_zero = (0..n).all(|j| m.get(n, j).is_zero());
    let col_zero = (0..n).all(|i| m.get(i, n).is_zero());
    (row_zero, col_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;
    use crate::group::{embed_standard, enumerate_gl, enumerate_o, DEFAULT_GROUP_CAP};

    const CAP: u64 = DEFAULT_GROUP_CAP;

    #[test]
    fn trivial_subgroup_gives_singletons() {
        let f = build_field(2, 1).unwrap();
        let h = enumerate_gl(1, &f, CAP).unwrap();
        let g = enumerate_gl(2, &f, CAP).unwrap();
        let emb = embed_standard(&h, &g).unwrap();
        let d = double_cosets(&g, &emb, false, CAP).unwrap();
        assert_eq!(d.count(), 6);
        assert_eq!(d.reps, (0..6).collect::<Vec<u32>>());

        let dz = double_cosets(&g, &emb, true, CAP).unwrap();
        let a = involution_action(&dz).unwrap();
        assert_eq!(count_nonfixed(&a), 2);
        assert_eq!(a.fixed_count, 4);
        let mut reps: Vec<String> = a
            .nonfixed_cosets()
            .iter()
            .map(|&c| g.element(dz.reps[c as usize]).to_literal())
            .collect();
        reps.sort();
        assert_eq!(reps, vec!["1,0;1,1", "1,1;0,1"]);
        // fixed cosets are exactly the symmetric elements
        for c in 0..dz.count() as u32 {
            let sym = g.element(dz.reps[c as usize]).is_symmetric();
            assert_eq!(sym, a.perm[c as usize] == c);
        }
    }

    #[test]
    fn gl3_over_gl2_f2_has_k_one() {
        let f = build_field(2, 1).unwrap();
        let h = enumerate_gl(2, &f, CAP).unwrap();
        let g = enumerate_gl(3, &f, CAP).unwrap();
        let emb = embed_standard(&h, &g).unwrap();
        let d = double_cosets(&g, &emb, true, CAP).unwrap();
        let a = involution_action(&d).unwrap();
        assert_eq!(count_nonfixed(&a), 2);
        assert_eq!(a.k(), 1);
        let cs = a.nonfixed_cosets();
        assert_eq!(a.perm[cs[0] as usize], cs[1]);
        let patterns: Vec<(bool, bool)> = a.nonfixed_reps().into_iter().map(border_zero_pattern).collect();
        assert!(patterns.contains(&(true, false)));
        assert!(patterns.contains(&(false, true)));
    }

    #[test]
    fn self_pair_has_one_coset() {
        let f = build_field(3, 1).unwrap();
        let g = enumerate_gl(2, &f, CAP).unwrap();
        let emb = crate::group::Embedding {
            small: &g,
            big: &g,
            map: (0..g.order() as u32).collect(),
        };
        let d = double_cosets(&g, &emb, false, CAP).unwrap();
        assert_eq!(d.count(), 1);
        let a = involution_action(&d).unwrap();
        assert_eq!(count_nonfixed(&a), 0);
    }

    #[test]
    fn center_coarsens_plain_decomposition() {
        let f = build_field(3, 1).unwrap();
        let h = enumerate_gl(1, &f, CAP).unwrap();
        let g = enumerate_gl(2, &f, CAP).unwrap();
        let emb = embed_standard(&h, &g).unwrap();
        let plain = double_cosets(&g, &emb, false, CAP).unwrap();
        let modz = double_cosets(&g, &emb, true, CAP).unwrap();
        let zsize = g.center_ids().len();
        let mut merged = vec![Vec::new(); modz.count()];
        for x in 0..g.order() {
            let coarse = modz.coset_of[x] as usize;
            if !merged[coarse].contains(&plain.coset_of[x]) {
                merged[coarse].push(plain.coset_of[x]);
            }
        }
        let total: usize = merged.iter().map(|m| m.len()).sum();
        assert_eq!(total, plain.count());
        assert!(merged.iter().all(|m| !m.is_empty() && m.len() <= zsize));
        assert!(modz.count() < plain.count());
    }

    #[test]
    fn orthogonal_cosets_all_fixed() {
        let f = build_field(3, 1).unwrap();
        let h = enumerate_o(2, &f, CAP).unwrap();
        let g = enumerate_o(3, &f, CAP).unwrap();
        let emb = embed_standard(&h, &g).unwrap();
        for mod_center in [false, true] {
            let d = double_cosets(&g, &emb, mod_center, CAP).unwrap();
            let a = involution_action(&d).unwrap();
            assert_eq!(count_nonfixed(&a), 0);
        }
    }

    #[test]
    fn cap_and_wrong_group_are_rejected() {
        let f = build_field(2, 1).unwrap();
        let h = enumerate_gl(1, &f, CAP).unwrap();
        let g = enumerate_gl(2, &f, CAP).unwrap();
        let other = enumerate_gl(2, &f, CAP).unwrap();
        let emb = embed_standard(&h, &g).unwrap();
        assert!(matches!(double_cosets(&g, &emb, false, 5), Err(Error::Capacity { .. })));
        assert!(double_cosets(&other, &emb, false, CAP).is_err());
    }
}
