use crate::algebra::parse::format_monomial;
use crate::algebra::Monomial;
use crate::error::{Error, Result};

use super::{
    groebner_basis, DimensionEvidence, DimensionMethod, DimensionReport, GroebnerLimits, IdealBasis,
};

/// Largest size of a variable set `S` such that no leading monomial is
/// supported inside `S`. Computed as `n` minus a minimum hitting set of the
/// leading-monomial supports. Returns `-1` if some leading monomial is `1`.
pub fn combinatorial_dimension(nvars: usize, leading: &[Monomial]) -> i64 {
    let mut masks: Vec<u64> = leading.iter().map(Monomial::support_mask).collect();
    if masks.contains(&0) {
        return -1;
    }
    masks.sort_unstable_by_key(|m| (m.count_ones(), *m));
    masks.dedup();
    // keep only inclusion-minimal supports
    let minimal: Vec<u64> = masks
        .iter()
        .copied()
        .filter(|&m| !masks.iter().any(|&o| o != m && o & m == o))
        .collect();
    let mut best = nvars as u32;
    hitting_set(&minimal, 0, 0, &mut best);
    nvars as i64 - best as i64
}

fn hitting_set(masks: &[u64], chosen: u64, size: u32, best: &mut u32) {
    if size >= *best {
        return;
    }
    let unhit = masks
        .iter()
        .filter(|&&m| m & chosen == 0)
        .min_by_key(|m| m.count_ones());
    let Some(&m) = unhit else {
        *best = size;
        return;
    };
    let mut bits = m;
    while bits != 0 {
        let b = bits & bits.wrapping_neg();
        hitting_set(masks, chosen | b, size + 1, best);
        bits &= bits - 1;
    }
}

/// Dimension of `V(b)` in affine space from the leading terms of a reduced
/// grevlex Gröbner basis.
pub fn affine_dimension(b: &IdealBasis, limits: GroebnerLimits) -> Result<DimensionReport> {
    let n = b.ring().len();
    if n > 64 {
        return Err(Error::InvalidInput(
            "at most 64 variables are supported".into(),
        ));
    }
    let gb = groebner_basis(b, limits)?;
    let leading: Vec<Monomial> = gb
        .generators()
        .iter()
        .map(|g| g.leading_term().unwrap().0.clone())
        .collect();
    let text = leading
        .iter()
        .map(|m| {
            let s = format_monomial(gb.ring(), m);
            if s.is_empty() {
                "1".to_string()
            } else {
                s
            }
        })
        .collect();
    Ok(DimensionReport {
        dimension: combinatorial_dimension(n, &leading),
        method: DimensionMethod::Groebner,
        evidence: DimensionEvidence::LeadingTerms(text),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_in, FieldSpec, Ring};

    fn dim(n: usize, gens: &[&str]) -> i64 {
        let r = Ring::indexed("x", n);
        let b = IdealBasis::new(
            gens.iter()
                .map(|g| parse_in(g, &r, FieldSpec::Rationals).unwrap())
                .collect(),
        )
        .unwrap();
        affine_dimension(&b, GroebnerLimits::default())
            .unwrap()
            .dimension
    }

    #[test]
    fn small_dimensions() {
        assert_eq!(dim(3, &["x0", "x1"]), 1);
        assert_eq!(dim(2, &["1"]), -1);
        assert_eq!(dim(4, &["x0*x1 + x2*x3", "x1", "x0", "x3", "x2"]), 0);
        assert_eq!(dim(3, &["x0*x1", "x0*x2"]), 2);
        assert_eq!(dim(3, &["x0*x1*x2"]), 2);
        assert_eq!(dim(3, &["0"]), 3);
    }

    #[test]
    fn hitting_sets() {
        let m = |e: &[u16]| Monomial::from_exponents(e.iter().copied());
        // x0*x1, x1*x2, x0*x2: any two variables hit all
        assert_eq!(
            combinatorial_dimension(3, &[m(&[1, 1, 0]), m(&[0, 1, 1]), m(&[1, 0, 1])]),
            1
        );
        assert_eq!(combinatorial_dimension(2, &[]), 2);
    }
}
