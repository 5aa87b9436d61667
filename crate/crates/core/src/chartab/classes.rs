use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::group::GroupTable;

/// Conjugacy classes, ordered by their minimal element id.
#[derive(Clone, Debug)]
pub struct ConjClasses {
    pub class_of: Vec<u32>,
    pub reps: Vec<u32>,
    pub sizes: Vec<usize>,
    /// class of g⁻¹ for g in the class
    pub inverse_class: Vec<u32>,
    /// element order of the class representative
    pub rep_orders: Vec<u32>,
    pub identity_class: u32,
}

impl ConjClasses {
    pub fn count(&self) -> usize {
        self.reps.len()
    }

    /// Least common multiple of element orders.
    pub fn exponent(&self) -> u64 {
        self.rep_orders.iter().fold(1u64, |acc, &o| lcm(acc, o as u64))
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Orbits of the conjugation action of the generators.
///
/// `inverses` must be the inverse table of `group`.
pub fn conjugacy_classes_with(group: &GroupTable, inverses: &[u32], cap: u64) -> Result<ConjClasses> {
    if group.order() as u64 > cap {
        return Err(Error::Capacity {
            what: "group order",
            value: group.order() as u64,
            cap,
        });
    }
    let gens: Vec<(u32, u32)> = group
        .generators()
        .iter()
        .map(|&s| (s, inverses[s as usize]))
        .collect();
    const UNSEEN: u32 = u32::MAX;
    let mut class_of = vec![UNSEEN; group.order()];
    let mut reps = Vec::new();
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();
    for seed in 0..group.order() as u32 {
        if class_of[seed as usize] != UNSEEN {
            continue;
        }
        let c = reps.len() as u32;
        reps.push(seed);
        class_of[seed as usize] = c;
        let mut size = 1;
        queue.push_back(seed);
        while let Some(x) = queue.pop_front() {
            for &(s, si) in &gens {
                let y = group.mul(group.mul(s, x), si);
                if class_of[y as usize] == UNSEEN {
                    class_of[y as usize] = c;
                    size += 1;
                    queue.push_back(y);
                }
            }
        }
        sizes.push(size);
    }
    let inverse_class = reps
        .iter()
        .map(|&r| class_of[inverses[r as usize] as usize])
        .collect();
    let rep_orders = reps.iter().map(|&r| group.element_order(r)).collect();
    let identity_class = class_of[group.identity_id() as usize];
    if sizes[identity_class as usize] != 1 {
        return Err(Error::internal("identity is not alone in its class"));
    }
    Ok(ConjClasses {
        class_of,
        reps,
        sizes,
        inverse_class,
        rep_orders,
        identity_class,
    })
}

pub fn conjugacy_classes(group: &GroupTable, cap: u64) -> Result<ConjClasses> {
    let inverses = group.inverse_ids()?;
    conjugacy_classes_with(group, &inverses, cap)
}

/// Whether every g lies in the same class as its transpose.
pub fn transpose_preserves_classes(group: &GroupTable, classes: &ConjClasses) -> Result<bool> {
    let t = group.transpose_ids()?;
    Ok(t.iter()
        .enumerate()
        .all(|(g, &tg)| classes.class_of[g] == classes.class_of[tg as usize]))
}
