//! Enumerated matrix groups GL_n(F_q) and O_n(F_q), their centers, and the
//! standard block embedding H ↪ G, B ↦ diag(B, 1).

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::matrix::{dot, MatFq};

pub const DEFAULT_GROUP_CAP: u64 = 25_000;

/// Direct filtering of all q^(n²) matrices is only attempted below this.
pub const FILTER_CROSS_CHECK_LIMIT: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    #[serde(rename = "gl")]
    GL,
    #[serde(rename = "o")]
    O,
}

impl GroupKind {
    pub fn tag(self) -> &'static str {
        match self {
            GroupKind::GL => "gl",
            GroupKind::O => "o",
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupKind::GL => "GL",
            GroupKind::O => "O",
        })
    }
}

impl std::str::FromStr for GroupKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gl" => Ok(GroupKind::GL),
            "o" => Ok(GroupKind::O),
            _ => Err(Error::Parse(format!("unknown group type {s:?}"))),
        }
    }
}

/// A finite matrix group with every element listed in canonical order.
pub struct GroupTable {
    kind: GroupKind,
    n: usize,
    field: Field,
    elements: Vec<MatFq>,
    index: HashMap<Vec<u8>, u32>,
    generators: Vec<u32>,
}

impl fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Order of GL_n(F_q): Π_{i<n} (qⁿ − qⁱ).
pub fn gl_order(n: usize, q: u64) -> Option<u64> {
    let qn = q.checked_pow(n as u32)?;
    (0..n).try_fold(1u64, |acc, i| acc.checked_mul(qn - q.pow(i as u32)))
}

fn capacity(value: u64, cap: u64) -> Error {
    Error::Capacity {
        what: "group order",
        value,
        cap,
    }
}

/// Breadth-first closure of a generating set under right multiplication.
fn closure(field: &Field, n: usize, gens: &[MatFq], cap: u64) -> Result<Vec<MatFq>> {
    let id = MatFq::identity(field, n);
    let mut seen: HashMap<Vec<u8>, ()> = HashMap::new();
    seen.insert(id.canonical_bytes(), ());
    let mut out = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.mul_unchecked(g);
            let key = y.canonical_bytes();
            if seen.contains_key(&key) {
                continue;
            }
            seen.insert(key, ());
            if out.len() as u64 >= cap {
                return Err(capacity(out.len() as u64 + 1, cap));
            }
            out.push(y.clone());
            queue.push_back(y);
        }
    }
    Ok(out)
}

/// All vectors of F_qⁿ in canonical order (first coordinate most significant).
pub(crate) fn all_vectors(field: &Field, n: usize) -> Vec<Vec<Scalar>> {
    let q = field.q() as usize;
    let total = q.pow(n as u32);
    (0..total)
        .map(|mut code| {
            let mut v = vec![Scalar::ZERO; n];
            for slot in v.iter_mut().rev() {
                *slot = Scalar((code % q) as u8);
                code /= q;
            }
            v
        })
        .collect()
}

/// Reduces `v` against an echelon basis (pivot column, normalized row).
fn reduce(field: &Field, basis: &[(usize, Vec<Scalar>)], v: &[Scalar]) -> Vec<Scalar> {
    let mut r = v.to_vec();
    for (piv, row) in basis {
        let c = r[*piv];
        if c.is_zero() {
            continue;
        }
        for (x, &b) in r.iter_mut().zip(row) {
            *x = field.sub(*x, field.mul(c, b));
        }
    }
    r
}

impl GroupTable {
    fn from_elements(
        kind: GroupKind,
        n: usize,
        field: &Field,
        mut elements: Vec<MatFq>,
        generators: &[MatFq],
    ) -> Result<Self> {
        elements.sort_by(|a, b| a.entries().cmp(b.entries()));
        let index: HashMap<Vec<u8>, u32> = elements
            .iter()
            .enumerate()
            .map(|(i, m)| (m.canonical_bytes(), i as u32))
            .collect();
        if index.len() != elements.len() {
            return Err(Error::internal("duplicate group elements"));
        }
        let mut gens: Vec<u32> = generators
            .iter()
            .map(|g| {
                index
                    .get(&g.canonical_bytes())
                    .copied()
                    .ok_or_else(|| Error::internal(format!("generator {g} outside the group")))
            })
            .collect::<Result<_>>()?;
        gens.sort_unstable();
        gens.dedup();
        let identity = MatFq::identity(field, n).canonical_bytes();
        gens.retain(|&g| elements[g as usize].canonical_bytes() != identity);
        Ok(GroupTable {
            kind,
            n,
            field: field.clone(),
            elements,
            index,
            generators: gens,
        })
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn name(&self) -> String {
        format!("{}_{}(F_{})", self.kind, self.n, self.field.q())
    }

    pub fn elements(&self) -> &[MatFq] {
        &self.elements
    }

    pub fn element(&self, id: u32) -> &MatFq {
        &self.elements[id as usize]
    }

    /// Element ids of the stored generating set.
    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn id_of(&self, m: &MatFq) -> Option<u32> {
        self.index.get(&m.canonical_bytes()).copied()
    }

    fn require_id(&self, m: &MatFq) -> Result<u32> {
        self.id_of(m)
            .ok_or_else(|| Error::internal(format!("{m} is not an element of {}", self.name())))
    }

    pub fn identity_id(&self) -> u32 {
        self.id_of(&MatFq::identity(&self.field, self.n))
            .expect("groups contain the identity")
    }

    /// Product of two elements by id.
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let m = self.element(a).mul_unchecked(self.element(b));
        self.id_of(&m).expect("group tables are closed under multiplication")
    }

    pub fn inverse_ids(&self) -> Result<Vec<u32>> {
        self.elements
            .iter()
            .map(|m| self.require_id(&m.inverse()?))
            .collect()
    }

    /// Transpose of every element; an error if the group is not transpose-stable.
    pub fn transpose_ids(&self) -> Result<Vec<u32>> {
        self.elements
            .iter()
            .map(|m| self.require_id(&m.transpose()))
            .collect()
    }

    pub fn element_order(&self, id: u32) -> u32 {
        let g = self.element(id);
        let mut x = g.clone();
        let mut k = 1;
        while !x.is_identity() {
            x = x.mul_unchecked(g);
            k += 1;
        }
        k
    }

    /// Elements commuting with every generator, i.e. Z(G).
    pub fn center_ids(&self) -> Vec<u32> {
        (0..self.order() as u32)
            .filter(|&z| {
                self.generators
                    .iter()
                    .all(|&s| self.mul(z, s) == self.mul(s, z))
            })
            .collect()
    }

    /// Closure of the generating set has the full order.
    pub fn generators_span(&self) -> bool {
        let mut seen = vec![false; self.order()];
        let id = self.identity_id();
        seen[id as usize] = true;
        let mut queue = VecDeque::from([id]);
        let mut count = 1;
        while let Some(x) = queue.pop_front() {
            for &s in &self.generators {
                let y = self.mul(x, s);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    count += 1;
                    queue.push_back(y);
                }
            }
        }
        count == self.order()
    }
}

/// GL_n(F_q), enumerated by extending linearly independent row sets.
pub fn enumerate_gl(n: usize, field: &Field, cap: u64) -> Result<GroupTable> {
    if n == 0 {
        return Err(Error::domain("matrix size must be at least 1"));
    }
    let q = field.q() as u64;
    let expected = gl_order(n, q).unwrap_or(u64::MAX);
    if expected > cap {
        return Err(capacity(expected, cap));
    }
    let vectors = all_vectors(field, n);
    let mut out: Vec<MatFq> = Vec::with_capacity(expected as usize);
    let mut rows: Vec<usize> = Vec::with_capacity(n);
    let mut basis: Vec<(usize, Vec<Scalar>)> = Vec::with_capacity(n);

    fn extend(
        field: &Field,
        n: usize,
        vectors: &[Vec<Scalar>],
        rows: &mut Vec<usize>,
        basis: &mut Vec<(usize, Vec<Scalar>)>,
        out: &mut Vec<MatFq>,
    ) {
        if rows.len() == n {
            let entries = rows.iter().flat_map(|&r| vectors[r].iter().copied()).collect();
            out.push(MatFq::from_raw(field, n, n, entries));
            return;
        }
        for (vid, v) in vectors.iter().enumerate() {
            let r = reduce(field, basis, v);
            let Some(piv) = r.iter().position(|x| !x.is_zero()) else {
                continue;
            };
            let inv = field.inv(r[piv]).expect("nonzero pivot");
            let row: Vec<Scalar> = r.iter().map(|&x| field.mul(inv, x)).collect();
            // keep the basis fully reduced so `reduce` is a single pass
            let saved = basis.clone();
            for (_, b) in basis.iter_mut() {
                let c = b[piv];
                if !c.is_zero() {
                    for (x, &y) in b.iter_mut().zip(&row) {
                        *x = field.sub(*x, field.mul(c, y));
                    }
                }
            }
            basis.push((piv, row));
            rows.push(vid);
            extend(field, n, vectors, rows, basis, out);
            rows.pop();
            *basis = saved;
        }
    }

    extend(field, n, &vectors, &mut rows, &mut basis, &mut out);
    if out.len() as u64 != expected {
        return Err(Error::internal(format!(
            "enumerated {} elements of GL_{n}(F_{q}), expected {expected}",
            out.len()
        )));
    }

    let mut gens = Vec::new();
    let p = field.p();
    // x^k for k < e spans F_q over F_p
    let basis_scalars: Vec<Scalar> = (0..field.e()).map(|k| Scalar(p.pow(k) as u8)).collect();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for &a in &basis_scalars {
                let mut t = MatFq::identity(field, n);
                t.set(i, j, a);
                gens.push(t);
            }
        }
    }
    let mut d = MatFq::identity(field, n);
    d.set(0, 0, field.generator());
    gens.push(d);

    let table = GroupTable::from_elements(GroupKind::GL, n, field, out, &gens)?;
    if !table.generators_span() {
        return Err(Error::internal("GL generators do not span the group"));
    }
    Ok(table)
}

/// Hyperplane reflection x ↦ x − 2(⟨w,x⟩/⟨w,w⟩)w for non-isotropic w.
pub fn reflection(field: &Field, w: &[Scalar]) -> Result<MatFq> {
    let ww = dot(field, w, w);
    if ww.is_zero() {
        return Err(Error::domain("reflection vector is isotropic"));
    }
    let coef = field.div(field.from_int(-2), ww)?;
    let n = w.len();
    let mut m = MatFq::identity(field, n);
    for i in 0..n {
        for j in 0..n {
            let delta = field.mul(coef, field.mul(w[i], w[j]));
            m.set(i, j, field.add(m.get(i, j), delta));
        }
    }
    Ok(m)
}

fn is_orthogonal_entries(field: &Field, n: usize, e: &[Scalar]) -> bool {
    for i in 0..n {
        for j in i..n {
            let ip = dot(field, &e[i * n..(i + 1) * n], &e[j * n..(j + 1) * n]);
            let want = if i == j { Scalar::ONE } else { Scalar::ZERO };
            if ip != want {
                return false;
            }
        }
    }
    true
}

/// O_n(F_q) for the dot product, built as the closure of all hyperplane
/// reflections and cross-checked against direct filtering when feasible.
pub fn enumerate_o(n: usize, field: &Field, cap: u64) -> Result<GroupTable> {
    if n == 0 {
        return Err(Error::domain("matrix size must be at least 1"));
    }
    if field.p() == 2 {
        return Err(Error::domain(
            "orthogonal groups are only supported in odd characteristic",
        ));
    }
    let mut gens: Vec<MatFq> = Vec::new();
    let mut seen = HashMap::new();
    for w in all_vectors(field, n) {
        if dot(field, &w, &w).is_zero() {
            continue;
        }
        let r = reflection(field, &w)?;
        if seen.insert(r.canonical_bytes(), ()).is_none() {
            gens.push(r);
        }
    }
    let elements = closure(field, n, &gens, cap)?;

    let q = field.q() as u64;
    let space = q.checked_pow((n * n) as u32);
    if let Some(space) = space.filter(|&s| s <= FILTER_CROSS_CHECK_LIMIT) {
        let mut filtered = 0u64;
        let qs = q as usize;
        let mut e = vec![Scalar::ZERO; n * n];
        for mut code in 0..space as usize {
            for slot in e.iter_mut().rev() {
                *slot = Scalar((code % qs) as u8);
                code /= qs;
            }
            if is_orthogonal_entries(field, n, &e) {
                filtered += 1;
            }
        }
        if filtered != elements.len() as u64 {
            return Err(Error::internal(format!(
                "reflection closure has {} elements, direct filter {filtered}",
                elements.len()
            )));
        }
    }
    if let Some(bad) = elements.iter().find(|g| !g.transpose().mul_unchecked(g).is_identity()) {
        return Err(Error::internal(format!("{bad} is not orthogonal")));
    }
    GroupTable::from_elements(GroupKind::O, n, field, elements, &gens)
}

pub fn enumerate(kind: GroupKind, n: usize, field: &Field, cap: u64) -> Result<GroupTable> {
    match kind {
        GroupKind::GL => enumerate_gl(n, field, cap),
        GroupKind::O => enumerate_o(n, field, cap),
    }
}

/// The standard embedding H ↪ G, B ↦ diag(B, 1).
#[derive(Debug)]
pub struct Embedding<'a> {
    pub small: &'a GroupTable,
    pub big: &'a GroupTable,
    pub map: Vec<u32>,
}

/// Pairs checked exhaustively for the homomorphism property up to this |H|;
/// above it, products with generators are checked (which still implies it).
const EXHAUSTIVE_HOM_LIMIT: usize = 1_000;

pub fn embed_standard<'a>(small: &'a GroupTable, big: &'a GroupTable) -> Result<Embedding<'a>> {
    if small.kind != big.kind {
        return Err(Error::domain("embedding between different group kinds"));
    }
    if small.n + 1 != big.n {
        return Err(Error::DimensionMismatch(format!(
            "cannot embed size {} into size {}",
            small.n, big.n
        )));
    }
    if !small.field.same_as(&big.field) {
        return Err(Error::FieldMismatch);
    }
    let map: Vec<u32> = small
        .elements
        .iter()
        .map(|h| big.require_id(&h.block_diag_one()))
        .collect::<Result<_>>()?;

    let mut image = map.clone();
    image.sort_unstable();
    image.dedup();
    if image.len() != map.len() {
        return Err(Error::internal("embedding is not injective"));
    }
    let hom_fails = |a: u32, b: u32| big.mul(map[a as usize], map[b as usize]) != map[small.mul(a, b) as usize];
    let h = small.order() as u32;
    let bad = if small.order() <= EXHAUSTIVE_HOM_LIMIT {
        (0..h).any(|a| (0..h).any(|b| hom_fails(a, b)))
    } else {
        (0..h).any(|a| small.generators.iter().any(|&s| hom_fails(a, s)))
    };
    if bad {
        return Err(Error::internal("embedding is not a homomorphism"));
    }
    Ok(Embedding { small, big, map })
}
