//! Symmetric invertible solutions of Bφ = v.
//!
//! For nonzero φ, v ∈ F_qⁿ the solver builds B recursively on the block form
//!
//! ```text
//! (a₁)   (c   r₁ᵀ) (b₁)
//! (v₁) = (r₁  A  ) (φ₁)
//! ```
//!
//! where a₁, b₁, c are scalars, v₁, φ₁, r₁ are (n−1)-vectors and A is a
//! symmetric (n−1)×(n−1) block. `oracle_symmetric` is an independent
//! exhaustive search used to cross-check it.

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::matrix::{dot, MatFq};

/// Largest number of symmetric matrices the oracle will scan.
pub const ORACLE_SEARCH_CAP: u64 = 15_625;

#[derive(Clone, Debug)]
pub struct SymSolveInstance {
    pub field: Field,
    pub phi: Vec<Scalar>,
    pub v: Vec<Scalar>,
}

impl SymSolveInstance {
    pub fn new(field: &Field, phi: Vec<Scalar>, v: Vec<Scalar>) -> Result<Self> {
        if phi.len() != v.len() || phi.is_empty() {
            return Err(Error::DimensionMismatch(format!(
                "phi has length {}, v has length {}",
                phi.len(),
                v.len()
            )));
        }
        if let Some(bad) = phi.iter().chain(&v).find(|&&a| !field.is_valid(a)) {
            return Err(Error::domain(format!("{bad} is not an element of F_{}", field.q())));
        }
        if is_zero(&phi) || is_zero(&v) {
            return Err(Error::domain("phi and v must both be nonzero"));
        }
        Ok(SymSolveInstance {
            field: field.clone(),
            phi,
            v,
        })
    }

    pub fn n(&self) -> usize {
        self.phi.len()
    }
}

/// Which branch of the recursion handled a (sub)problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SolveCase {
    Scalar,
    /// φ₁ = 0 and r₁ = v₁/b₁ = 0
    TailZeroDiagonal,
    /// φ₁ = 0 and r₁ ≠ 0
    TailZeroBordered,
    /// v₁ = 0, solved through the swapped instance
    SwapTail,
    /// b₁ = 0: recurse, then pick c ∈ {0, 1}
    HeadZero,
    /// a₁ = 0, b₁ ≠ 0: solved through the swapped instance
    SwapHead,
    Generic,
}

fn is_zero(v: &[Scalar]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// Assembles [[c, rᵀ], [r, A]].
fn bordered(field: &Field, c: Scalar, r: &[Scalar], a: &MatFq) -> MatFq {
    let n = r.len() + 1;
    let mut b = MatFq::zeros(field, n, n);
    b.set(0, 0, c);
    for (i, &x) in r.iter().enumerate() {
        b.set(0, i + 1, x);
        b.set(i + 1, 0, x);
    }
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            b.set(i + 1, j + 1, a.get(i, j));
        }
    }
    b
}

fn solve(field: &Field, phi: &[Scalar], v: &[Scalar], trace: &mut Vec<SolveCase>) -> Result<MatFq> {
    let n = phi.len();
    if n == 1 {
        trace.push(SolveCase::Scalar);
        return MatFq::new(field, 1, 1, vec![field.div(v[0], phi[0])?]);
    }
    let (b1, phi1) = (phi[0], &phi[1..]);
    let (a1, v1) = (v[0], &v[1..]);

    if is_zero(phi1) {
        // b₁ ≠ 0 since φ ≠ 0
        let binv = field.inv(b1)?;
        let c = field.mul(a1, binv);
        let r: Vec<Scalar> = v1.iter().map(|&x| field.mul(x, binv)).collect();
        let mut a = MatFq::identity(field, n - 1);
        match r.iter().position(|x| !x.is_zero()) {
            None => trace.push(SolveCase::TailZeroDiagonal),
            Some(first) => {
                // Permuting the support of r₁ to the top, zeroing the leading
                // diagonal slot and permuting back zeroes this slot.
                trace.push(SolveCase::TailZeroBordered);
                a.set(first, first, Scalar::ZERO);
            }
        }
        return Ok(bordered(field, c, &r, &a));
    }
    if is_zero(v1) {
        trace.push(SolveCase::SwapTail);
        return solve(field, v, phi, trace)?.inverse();
    }
    if b1.is_zero() {
        trace.push(SolveCase::HeadZero);
        let a = solve(field, phi1, v1, trace)?;
        let j = phi1.iter().position(|x| !x.is_zero()).expect("phi1 is nonzero");
        let mut r = vec![Scalar::ZERO; n - 1];
        r[j] = field.div(a1, phi1[j])?;
        for c in [Scalar::ZERO, Scalar::ONE] {
            let b = bordered(field, c, &r, &a);
            if b.is_invertible() {
                return Ok(b);
            }
        }
        return Err(Error::internal(format!(
            "counterexample: neither c = 0 nor c = 1 gives an invertible matrix for phi = {}, v = {} over F_{} (A = {}, r = {})",
            crate::matrix::format_vector(phi),
            crate::matrix::format_vector(v),
            field.q(),
            a,
            crate::matrix::format_vector(&r),
        )));
    }
    if a1.is_zero() {
        trace.push(SolveCase::SwapHead);
        return solve(field, v, phi, trace)?.inverse();
    }
    trace.push(SolveCase::Generic);
    let a = solve(field, phi1, v1, trace)?;
    let c = field.div(a1, b1)?;
    Ok(bordered(field, c, &vec![Scalar::ZERO; n - 1], &a))
}

/// Checks the three defining properties of a solution.
pub fn is_solution(inst: &SymSolveInstance, b: &MatFq) -> bool {
    b.rows() == inst.n()
        && b.is_symmetric()
        && b.is_invertible()
        && b.apply(&inst.phi).map(|w| w == inst.v).unwrap_or(false)
}

/// Solves and also reports the branches taken, outermost first.
pub fn solve_symmetric_traced(inst: &SymSolveInstance) -> Result<(MatFq, Vec<SolveCase>)> {
    if is_zero(&inst.phi) || is_zero(&inst.v) {
        return Err(Error::domain("phi and v must both be nonzero"));
    }
    let mut trace = Vec::new();
    let b = solve(&inst.field, &inst.phi, &inst.v, &mut trace)?;
    if !is_solution(inst, &b) {
        return Err(Error::internal(format!(
            "solver produced {b}, which does not solve phi = {}, v = {}",
            crate::matrix::format_vector(&inst.phi),
            crate::matrix::format_vector(&inst.v)
        )));
    }
    Ok((b, trace))
}

/// A symmetric invertible B with Bφ = v.
pub fn solve_symmetric(inst: &SymSolveInstance) -> Result<MatFq> {
    solve_symmetric_traced(inst).map(|(b, _)| b)
}

/// First symmetric invertible solution in canonical order, by exhaustion.
pub fn oracle_symmetric(inst: &SymSolveInstance) -> Result<Option<MatFq>> {
    let field = &inst.field;
    let n = inst.n();
    if is_zero(&inst.phi) || is_zero(&inst.v) {
        return Err(Error::domain("phi and v must both be nonzero"));
    }
    let slots = n * (n + 1) / 2;
    let q = field.q() as u64;
    let space = q.checked_pow(slots as u32).unwrap_or(u64::MAX);
    if space > ORACLE_SEARCH_CAP {
        return Err(Error::Capacity {
            what: "symmetric search space",
            value: space,
            cap: ORACLE_SEARCH_CAP,
        });
    }
    // Upper-triangle positions in row-major order; enumerating them with the
    // first slot most significant is the canonical order of the full matrix.
    let positions: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let mut b = MatFq::zeros(field, n, n);
    for code in 0..space {
        let mut rest = code;
        for &(i, j) in positions.iter().rev() {
            let x = Scalar((rest % q) as u8);
            rest /= q;
            b.set(i, j, x);
            b.set(j, i, x);
        }
        let hits = (0..n).all(|i| dot(field, &b.entries()[i * n..(i + 1) * n], &inst.phi) == inst.v[i]);
        if hits && b.is_invertible() {
            return Ok(Some(b));
        }
    }
    Ok(None)
}
