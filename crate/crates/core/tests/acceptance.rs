//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use rayon::prelude::*;

use gelfand_core::field::{build_field, field_of_order, DEFAULT_FIELD_CAP};
use gelfand_core::matrix::dot;
use gelfand_core::reflect::{check_swap, sphere_points, swap_branch, swap_element, SpherePoint, SwapBranch};
use gelfand_core::symsolve::{oracle_symmetric, solve_symmetric, SymSolveInstance};
use gelfand_core::verify::{default_gl_grid, default_o_grid, run_verify, VerificationReport};
use gelfand_core::{Field, RunOptions, Scalar};

struct Criterion {
    id: u32,
    title: &'static str,
    failures: Vec<String>,
    detail: String,
    seconds: f64,
}

fn all_vectors(field: &Field, n: usize) -> Vec<Vec<Scalar>> {
    let q = field.q();
    let total = (q as usize).pow(n as u32);
    (0..total)
        .map(|mut code| {
            let mut v = vec![Scalar::ZERO; n];
            for slot in v.iter_mut().rev() {
                *slot = Scalar((code % q as usize) as u8);
                code /= q as usize;
            }
            v
        })
        .collect()
}

fn gl_reports() -> Vec<VerificationReport> {
    default_gl_grid()
        .into_iter()
        .map(|p| run_verify(p, &RunOptions::default()).unwrap_or_else(|e| panic!("{p}: {e}")))
        .collect()
}

fn o_reports() -> Vec<VerificationReport> {
    default_o_grid()
        .into_iter()
        .map(|p| run_verify(p, &RunOptions::default()).unwrap_or_else(|e| panic!("{p}: {e}")))
        .collect()
}

fn transpose_swaps_two(gl: &[VerificationReport]) -> (Vec<String>, String) {
    let mut failures = Vec::new();
    for r in gl {
        if r.cosets.sigma_nonfixed != 2 || r.cosets.k != 1 || !r.checks["transpose_swaps_two_cosets"] {
            failures.push(format!(
                "{}: nonfixed = {}, k = {}",
                r.pair, r.cosets.sigma_nonfixed, r.cosets.k
            ));
        }
    }
    (failures, format!("{} GL pairs, each with exactly 2 swapped cosets", gl.len()))
}

fn gl_bound(gl: &[VerificationReport]) -> (Vec<String>, String) {
    let mut failures = Vec::new();
    let mut attained = 0;
    for r in gl {
        if let Some(c) = r.characters.iter().find(|c| c.dim_inv > 2) {
            failures.push(format!("{}: degree {} has dim {}", r.pair, c.degree, c.dim_inv));
        }
        if r.max_dim_inv == 2 {
            attained += 1;
        }
    }
    (failures, format!("max dim <= 2 everywhere; 2 attained on {attained}/{} pairs", gl.len()))
}

fn orthogonal_gelfand(o: &[VerificationReport]) -> (Vec<String>, String) {
    let mut failures = Vec::new();
    for r in o {
        if r.cosets.k != 0 || r.cosets.sigma_nonfixed != 0 || r.max_dim_inv > 1 {
            failures.push(format!(
                "{}: k = {}, max dim = {}",
                r.pair, r.cosets.k, r.max_dim_inv
            ));
        }
        if !r.pass {
            failures.push(format!("{}: failed checks {:?}", r.pair, r.failed_checks()));
        }
    }
    (failures, format!("{} orthogonal pairs with k = 0 and max dim <= 1", o.len()))
}

fn symmetric_solver() -> (Vec<String>, String) {
    let mut failures = Vec::new();
    let mut instances = 0usize;
    for q in [2u32, 3, 5] {
        let f = field_of_order(q, DEFAULT_FIELD_CAP).unwrap();
        for n in 1..=3 {
            let nonzero: Vec<Vec<Scalar>> =
                all_vectors(&f, n).into_iter().filter(|v| v.iter().any(|x| !x.is_zero())).collect();
            let pairs: Vec<(&Vec<Scalar>, &Vec<Scalar>)> =
                nonzero.iter().flat_map(|p| nonzero.iter().map(move |v| (p, v))).collect();
            instances += pairs.len();
            let bad: Vec<String> = pairs
                .par_iter()
                .filter_map(|&(phi, v)| {
                    let inst = SymSolveInstance::new(&f, phi.clone(), v.clone()).unwrap();
                    let label = || format!("q={q} phi={phi:?} v={v:?}");
                    let b = match solve_symmetric(&inst) {
                        Ok(b) => b,
                        Err(e) => return Some(format!("{}: {e}", label())),
                    };
                    let symmetric = b.transpose() == b;
                    let invertible = b.det().map(|d| !d.is_zero()).unwrap_or(false);
                    let maps = b.apply(phi).map(|x| &x == v).unwrap_or(false);
                    if !(symmetric && invertible && maps) {
                        return Some(format!("{}: bad B = {}", label(), b.to_literal()));
                    }
                    match oracle_symmetric(&inst) {
                        Ok(Some(_)) => None,
                        Ok(None) => Some(format!("{}: oracle finds no solution", label())),
                        Err(e) => Some(format!("{}: oracle error {e}", label())),
                    }
                })
                .collect();
            failures.extend(bad);
        }
    }
    (failures, format!("{instances} instances, all solved and confirmed by the oracle"))
}

fn reflections() -> (Vec<String>, String) {
    let mut failures = Vec::new();
    let mut pairs = 0usize;
    let mut isotropic = 0usize;
    for (n, q) in [(2usize, 3u32), (3, 3), (2, 5), (3, 5)] {
        let f = field_of_order(q, DEFAULT_FIELD_CAP).unwrap();
        let sphere = sphere_points(n, &f).unwrap();
        for u in &sphere {
            for v in &sphere {
                pairs += 1;
                let diff: Vec<Scalar> = u.coords().iter().zip(v.coords()).map(|(&a, &b)| f.sub(a, b)).collect();
                if u != v && dot(&f, &diff, &diff).is_zero() {
                    isotropic += 1;
                }
                match swap_element(&f, u, v) {
                    Ok(g) if check_swap(&g, u, v).all() => {}
                    Ok(g) => failures.push(format!("n={n} q={q} u={:?} v={:?}: g = {}", u.coords(), v.coords(), g.to_literal())),
                    Err(e) => failures.push(format!("n={n} q={q} u={:?} v={:?}: {e}", u.coords(), v.coords())),
                }
            }
        }
    }
    let f5 = build_field(5, 1).unwrap();
    let s = |xs: &[u32]| xs.iter().map(|&x| f5.scalar(x).unwrap()).collect::<Vec<_>>();
    let u = SpherePoint::new(&f5, s(&[1, 0, 0])).unwrap();
    let v = SpherePoint::new(&f5, s(&[1, 1, 2])).unwrap();
    if swap_branch(&f5, &u, &v) != SwapBranch::Sum {
        failures.push("u=(1,0,0), v=(1,1,2) over F_5 should use the sum branch".to_string());
    }
    if isotropic == 0 {
        failures.push("no self-orthogonal differences encountered".to_string());
    }
    (failures, format!("{pairs} ordered pairs, {isotropic} with self-orthogonal difference"))
}

fn duality(all: &[VerificationReport]) -> (Vec<String>, String) {
    let mut failures = Vec::new();
    for r in all {
        if let Some(c) = r.characters.iter().find(|c| c.dim_inv != c.dim_dual_inv) {
            failures.push(format!("{}: degree {} has {} != {}", r.pair, c.degree, c.dim_inv, c.dim_dual_inv));
        }
        if !r.checks["transpose_classes"] {
            failures.push(format!("{}: transpose moves a conjugacy class", r.pair));
        }
    }
    (failures, format!("{} pairs, dual dims equal and transpose fixes every class", all.len()))
}

fn mackey(all: &[VerificationReport]) -> (Vec<String>, String) {
    let mut failures = Vec::new();
    for r in all {
        let squares: u64 = r.characters.iter().map(|c| c.dim_inv * c.dim_inv).sum();
        if squares != r.cosets.plain_count as u64 {
            failures.push(format!(
                "{}: sum of squares {squares} != {} double cosets",
                r.pair, r.cosets.plain_count
            ));
        }
    }
    (failures, format!("{} pairs, sum of squared dims equals |H\\G/H|", all.len()))
}

fn timed(id: u32, title: &'static str, f: impl FnOnce() -> (Vec<String>, String)) -> Criterion {
    let start = Instant::now();
    let (failures, detail) = f();
    Criterion {
        id,
        title,
        failures,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let gl = gl_reports();
    let o = o_reports();
    println!("pipeline over {} grid points: {:.1}s", gl.len() + o.len(), start.elapsed().as_secs_f64());
    let all: Vec<VerificationReport> = gl.iter().chain(&o).cloned().collect();

    let results = vec![
        timed(1, "transpose moves exactly two mod-center double cosets", || transpose_swaps_two(&gl)),
        timed(2, "GL pairs have dim pi^H <= 2", || gl_bound(&gl)),
        timed(3, "orthogonal pairs are Gelfand pairs", || orthogonal_gelfand(&o)),
        timed(4, "symmetric solver, exhaustive for n <= 3, q in {2,3,5}", symmetric_solver),
        timed(5, "reflection swaps, exhaustive over unit-vector pairs", reflections),
        timed(6, "dual invariants and transpose-stable classes", || duality(&all)),
        timed(7, "sum of squared invariant dims equals double-coset count", || mackey(&all)),
    ];

    let mut ok = true;
    for c in &results {
        let status = if c.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {}: {status} - {} ({}; {:.1}s)", c.id, c.title, c.detail, c.seconds);
        for f in c.failures.iter().take(10) {
            println!("    {f}");
        }
        ok &= c.failures.is_empty();
    }
    if ok {
        println!("acceptance: all {} criteria pass", results.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}
