//! Unit spheres in F_qⁿ and orthogonal elements swapping two unit vectors.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::group::{all_vectors, GroupTable};
use crate::matrix::{dot, MatFq};

pub const SPHERE_CAP: u64 = 10_000_000;

/// A vector x with ⟨x, x⟩ = 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpherePoint {
    coords: Vec<Scalar>,
}

impl SpherePoint {
    pub fn new(field: &Field, coords: Vec<Scalar>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::DimensionMismatch("empty vector".into()));
        }
        if dot(field, &coords, &coords) != Scalar::ONE {
            return Err(Error::domain(format!(
                "{} is not a unit vector",
                crate::matrix::format_vector(&coords)
            )));
        }
        Ok(SpherePoint { coords })
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }
}

/// Every unit vector of F_qⁿ, in canonical order.
pub fn sphere_points(n: usize, field: &Field) -> Result<Vec<SpherePoint>> {
    let space = (field.q() as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    if space > SPHERE_CAP {
        return Err(Error::Capacity {
            what: "vector space size",
            value: space,
            cap: SPHERE_CAP,
        });
    }
    Ok(all_vectors(field, n)
        .into_iter()
        .filter(|x| dot(field, x, x) == Scalar::ONE)
        .map(|coords| SpherePoint { coords })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SwapBranch {
    /// reflection in the hyperplane orthogonal to u − v
    Difference,
    /// reflection through the line of u + v
    Sum,
}

/// Which formula `swap_element` uses for (u, v).
pub fn swap_branch(field: &Field, u: &SpherePoint, v: &SpherePoint) -> SwapBranch {
    let d: Vec<Scalar> = u.coords.iter().zip(&v.coords).map(|(&a, &b)| field.sub(a, b)).collect();
    if dot(field, &d, &d).is_zero() {
        SwapBranch::Sum
    } else {
        SwapBranch::Difference
    }
}

/// An orthogonal g with gu = v and gv = u.
///
/// If ⟨u−v, u−v⟩ ≠ 0 this is x ↦ x − 2(⟨u−v,x⟩/⟨u−v,u−v⟩)(u−v); otherwise
/// ⟨u,v⟩ = 1, ⟨u+v,u+v⟩ = 4 and g is x ↦ (⟨u+v,x⟩/2)(u+v) − x.
pub fn swap_element(field: &Field, u: &SpherePoint, v: &SpherePoint) -> Result<MatFq> {
    if field.p() == 2 {
        return Err(Error::domain("swap reflections need odd characteristic"));
    }
    let n = u.coords.len();
    if v.coords.len() != n {
        return Err(Error::DimensionMismatch("u and v have different lengths".into()));
    }
    let two = field.from_int(2);
    let (w, coef, sign) = match swap_branch(field, u, v) {
        SwapBranch::Difference => {
            let w: Vec<Scalar> = u.coords.iter().zip(&v.coords).map(|(&a, &b)| field.sub(a, b)).collect();
            let ww = dot(field, &w, &w);
            (w, field.neg(field.div(two, ww)?), Scalar::ONE)
        }
        SwapBranch::Sum => {
            let w: Vec<Scalar> = u.coords.iter().zip(&v.coords).map(|(&a, &b)| field.add(a, b)).collect();
            (w, field.inv(two)?, field.neg(Scalar::ONE))
        }
    };
    // g = sign·I + coef·w wᵀ; columns are the images of the basis vectors
    let mut g = MatFq::zeros(field, n, n);
    for i in 0..n {
        for j in 0..n {
            let mut x = field.mul(coef, field.mul(w[i], w[j]));
            if i == j {
                x = field.add(x, sign);
            }
            g.set(i, j, x);
        }
    }
    Ok(g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SwapCheck {
    pub orthogonal: bool,
    pub involution: bool,
    pub maps_u_to_v: bool,
    pub maps_v_to_u: bool,
}

impl SwapCheck {
    pub fn all(&self) -> bool {
        self.orthogonal && self.involution && self.maps_u_to_v && self.maps_v_to_u
    }
}

pub fn check_swap(g: &MatFq, u: &SpherePoint, v: &SpherePoint) -> SwapCheck {
    SwapCheck {
        orthogonal: g.transpose().mul_unchecked(g).is_identity(),
        involution: g.mul_unchecked(g).is_identity(),
        maps_u_to_v: g.apply(&u.coords).map(|x| x == v.coords).unwrap_or(false),
        maps_v_to_u: g.apply(&v.coords).map(|x| x == u.coords).unwrap_or(false),
    }
}

/// Size of the orbit of `points[0]` under the group generated by all swap
/// elements.
pub fn swap_orbit_size(field: &Field, points: &[SpherePoint]) -> Result<usize> {
    let Some(start) = points.first() else {
        return Ok(0);
    };
    let mut gens = Vec::new();
    for u in points {
        for v in points {
            gens.push(swap_element(field, u, v)?);
        }
    }
    let mut seen = HashMap::new();
    seen.insert(start.coords.clone(), ());
    let mut queue = VecDeque::from([start.coords.clone()]);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y = g.apply(&x)?;
            if seen.insert(y.clone(), ()).is_none() {
                queue.push_back(y);
            }
        }
    }
    Ok(seen.len())
}

/// Number of orbits of an orthogonal group on ordered pairs of unit vectors.
pub fn pair_orbit_count(group: &GroupTable) -> Result<usize> {
    let field = group.field();
    let points = sphere_points(group.n(), field)?;
    let index: HashMap<&[Scalar], usize> =
        points.iter().enumerate().map(|(i, p)| (p.coords(), i)).collect();
    let m = points.len();
    // generator action on point indices
    let actions: Vec<Vec<usize>> = group
        .generators()
        .iter()
        .map(|&s| {
            let g = group.element(s);
            points
                .iter()
                .map(|p| {
                    let y = g.apply(p.coords())?;
                    index
                        .get(y.as_slice())
                        .copied()
                        .ok_or_else(|| Error::internal("group element leaves the sphere"))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut seen = vec![false; m * m];
    let mut orbits = 0;
    for seed in 0..m * m {
        if seen[seed] {
            continue;
        }
        orbits += 1;
        seen[seed] = true;
        let mut queue = VecDeque::from([seed]);
        while let Some(pair) = queue.pop_front() {
            let (a, b) = (pair / m, pair % m);
            for act in &actions {
                let next = act[a] * m + act[b];
                if !seen[next] {
                    seen[next] = true;
                    queue.push_back(next);
                }
            }
        }
    }
    Ok(orbits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;
    use crate::group::{enumerate_o, DEFAULT_GROUP_CAP};

    fn pt(field: &Field, xs: &[u32]) -> SpherePoint {
        SpherePoint::new(field, xs.iter().map(|&x| field.scalar(x).unwrap()).collect()).unwrap()
    }

    #[test]
    fn sphere_examples() {
        let f3 = build_field(3, 1).unwrap();
        let s: Vec<String> = sphere_points(2, &f3)
            .unwrap()
            .iter()
            .map(|p| crate::matrix::format_vector(p.coords()))
            .collect();
        assert_eq!(s, vec!["0,1", "0,2", "1,0", "2,0"]);

        let f5 = build_field(5, 1).unwrap();
        let s: Vec<String> = sphere_points(1, &f5)
            .unwrap()
            .iter()
            .map(|p| crate::matrix::format_vector(p.coords()))
            .collect();
        assert_eq!(s, vec!["1", "4"]);

        let o3 = enumerate_o(3, &f3, DEFAULT_GROUP_CAP).unwrap();
        let o2 = enumerate_o(2, &f3, DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(sphere_points(3, &f3).unwrap().len(), o3.order() / o2.order());
        assert!(SpherePoint::new(&f3, vec![Scalar(1), Scalar(1)]).is_err());
    }

    #[test]
    fn swap_examples() {
        let f3 = build_field(3, 1).unwrap();
        let e1 = pt(&f3, &[1, 0]);
        let e2 = pt(&f3, &[0, 1]);
        let g = swap_element(&f3, &e1, &e2).unwrap();
        assert_eq!(swap_branch(&f3, &e1, &e2), SwapBranch::Difference);
        assert_eq!(g.to_literal(), "0,1;1,0");

        let g = swap_element(&f3, &e1, &e1).unwrap();
        assert_eq!(swap_branch(&f3, &e1, &e1), SwapBranch::Sum);
        assert_eq!(g.to_literal(), "1,0;0,2");
        assert!(check_swap(&g, &e1, &e1).all());

        let f5 = build_field(5, 1).unwrap();
        let u = pt(&f5, &[1, 0, 0]);
        let v = pt(&f5, &[1, 1, 2]);
        assert_eq!(swap_branch(&f5, &u, &v), SwapBranch::Sum);
        let g = swap_element(&f5, &u, &v).unwrap();
        assert_eq!(g.apply(u.coords()).unwrap(), v.coords());
        assert!(check_swap(&g, &u, &v).all());
    }

    #[test]
    fn char_two_rejected() {
        let f4 = build_field(2, 2).unwrap();
        let u = pt(&f4, &[1, 0]);
        assert!(matches!(swap_element(&f4, &u, &u), Err(Error::Domain(_))));
    }

    #[test]
    fn transitivity() {
        for (n, p) in [(2, 3), (3, 3), (2, 5), (3, 5)] {
            let f = build_field(p, 1).unwrap();
            let pts = sphere_points(n, &f).unwrap();
            assert_eq!(swap_orbit_size(&f, &pts).unwrap(), pts.len());
        }
    }
}
