use serde::Serialize;

use super::{
    compose_substitution, homogenize_components, normalize_components, positional_substitution,
    record, RationalMapRecord,
};
use crate::algebra::{Monomial, Polynomial, Ring, Substitution};
use crate::error::{Error, Result};
use crate::fano::check_family;

/// A simultaneous parametrization of the fibers `X_p = {y : g(y) ∝ p}` of
/// `y ↦ (g_0(y), ..., g_n(y))`, cut out by `p_i·g_j - p_j·g_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberFamily {
    pub p_vars: Vec<String>,
    pub gs: Vec<Polynomial>,
    /// Map from `(p, e)` to `y`; its constraints are the binomial pairs.
    pub record: RationalMapRecord,
}

/// Fiber family for single-term `g_i` of one degree with pairwise disjoint
/// supports. Each `g_i = c_i·y_{v_i}·r_i` needs some variable `y_{v_i}` of
/// exponent one; it is sent to `p_i·Π_{i'≠i} c_{i'}·r_{i'}(e)`, and every other
/// `y_u` to a free parameter `e_u`, so that `g(y) = (Π c_i·r_i(e))·p`.
pub fn monomial_fiber_family(gs: &[Polynomial], seed: u64) -> Result<FiberFamily> {
    let (y_ring, field) = check_family(gs)?;
    super::common_degree(gs)?;
    let mut chosen = Vec::with_capacity(gs.len());
    let mut used = vec![false; y_ring.len()];
    for g in gs {
        if g.num_terms() != 1 {
            return Err(Error::InvalidInput(format!(
                "fiber family needs single-term polynomials, got {g}"
            )));
        }
        let (m, _) = g.leading_term().unwrap();
        for i in g.support_vars() {
            if used[i] {
                return Err(Error::InvalidInput(
                    "supports of the polynomials overlap".into(),
                ));
            }
            used[i] = true;
        }
        let v = (0..m.len())
            .find(|&i| m.exponent(i) == 1)
            .ok_or_else(|| Error::InvalidInput(format!("{g} has no variable of exponent one")))?;
        chosen.push(v);
    }
    let p_vars: Vec<String> = (0..gs.len()).map(|i| format!("p{i}")).collect();
    let e_vars: Vec<(usize, String)> = (0..y_ring.len())
        .filter(|i| !chosen.contains(i))
        .map(|i| (i, format!("e_{}", y_ring.var(i))))
        .collect();
    let ring = Ring::new(
        p_vars
            .iter()
            .cloned()
            .chain(e_vars.iter().map(|(_, n)| n.clone())),
    )?;

    let mut to_e = Substitution::new(&ring, field);
    for (i, name) in &e_vars {
        to_e.insert(y_ring.var(*i), Polynomial::var(&ring, field, name)?)?;
    }
    // c_i·r_i(e): g_i with its chosen variable set to 1.
    let cofactors: Vec<Polynomial> = gs
        .iter()
        .zip(&chosen)
        .map(|(g, &v)| {
            let (m, c) = g.leading_term().unwrap();
            let mut rest = m.clone();
            let mut exps = rest.exponents().to_vec();
            exps[v] = 0;
            rest = Monomial::from_exponents(exps);
            Polynomial::from_terms(&y_ring, field, [(rest, c.clone())]).substitute(&to_e)
        })
        .collect::<Result<_>>()?;

    let mut comps = Vec::with_capacity(y_ring.len());
    for j in 0..y_ring.len() {
        let image = match chosen.iter().position(|&v| v == j) {
            Some(i) => {
                let mut acc = Polynomial::var(&ring, field, &p_vars[i])?;
                for (k, cf) in cofactors.iter().enumerate() {
                    if k != i {
                        acc = &acc * cf;
                    }
                }
                acc
            }
            None => Polynomial::var(&ring, field, &format!("e_{}", y_ring.var(j)))?,
        };
        comps.push(image);
    }
    let comps = normalize_components(homogenize_components(comps)?);
    let source = comps[0].ring().clone();

    let cons_ring = Ring::new(p_vars.iter().chain(y_ring.vars()).cloned())?;
    let lifted: Vec<Polynomial> = gs
        .iter()
        .map(|g| g.to_ring(&cons_ring))
        .collect::<Result<_>>()?;
    let mut constraints = Vec::new();
    for i in 0..gs.len() {
        for j in i + 1..gs.len() {
            let pi = Polynomial::var(&cons_ring, field, &p_vars[i])?;
            let pj = Polynomial::var(&cons_ring, field, &p_vars[j])?;
            constraints.push(&(&pi * &lifted[j]) - &(&pj * &lifted[i]));
        }
    }
    let mut subst = Substitution::new(&source, field);
    for p in &p_vars {
        subst.insert(p, Polynomial::var(&source, field, p)?)?;
    }
    for (j, c) in comps.iter().enumerate() {
        subst.insert(y_ring.var(j), c.clone())?;
    }
    let rec = record(comps, constraints, &subst, y_ring.len() as i64 - 1, seed)?;
    Ok(FiberFamily {
        p_vars,
        gs: gs.to_vec(),
        record: rec,
    })
}

/// Plugs a parametrization of `Z = V(F)` into the `p`-slots of a fiber
/// family, giving a map into `V(F(g_0, ..., g_n))`.
pub fn pullback_parametrization(
    f: &Polynomial,
    gs: &[Polynomial],
    family: &FiberFamily,
    z_param: &RationalMapRecord,
    seed: u64,
) -> Result<RationalMapRecord> {
    let composite = compose_substitution(f, gs)?;
    if family.gs != gs {
        return Err(Error::InvalidInput(
            "fiber family was built for different polynomials".into(),
        ));
    }
    if z_param.components.len() != family.p_vars.len() {
        return Err(Error::LengthMismatch {
            expected: family.p_vars.len(),
            actual: z_param.components.len(),
        });
    }
    let field = f.field();
    let fam_ring = &family.record.source;
    let fiber_vars: Vec<String> = fam_ring
        .vars()
        .iter()
        .filter(|v| !family.p_vars.contains(v))
        .cloned()
        .collect();
    let ring = z_param.source.extend(&fiber_vars)?;
    if ring.len() != z_param.source.len() + fiber_vars.len() {
        return Err(Error::InvalidInput(
            "parameter names of the two maps collide".into(),
        ));
    }
    let mut subst = Substitution::new(&ring, field);
    for (p, z) in family.p_vars.iter().zip(&z_param.components) {
        subst.insert(p, z.to_ring(&ring)?)?;
    }
    for v in &fiber_vars {
        subst.insert(v, Polynomial::var(&ring, field, v)?)?;
    }
    let comps = family
        .record
        .components
        .iter()
        .map(|c| c.substitute(&subst))
        .collect::<Result<Vec<_>>>()?;
    let comps = normalize_components(homogenize_components(comps)?);
    let y_ring = gs[0].ring();
    let check = positional_substitution(y_ring, &comps)?;
    record(
        comps,
        vec![composite],
        &check,
        y_ring.len() as i64 - 2,
        seed,
    )
}
