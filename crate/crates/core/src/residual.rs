//! Planes in projective space and residual hypersurfaces: for `Λ ⊂ V(f)` and
//! a `(k+1)`-plane `Φ ⊃ Λ`, `f|_Φ = t·g` where `t` cuts out `Λ` in `Φ`.

use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::algebra::monomial::monomials_of_degree;
use crate::algebra::parse::format_monomial;
use crate::algebra::{FieldSpec, Matrix, Polynomial, Ring, Scalar, Substitution};
use crate::error::{Error, Result};

/// A parametrized `k`-plane in `P^n`: a full-rank `(k+1)×(n+1)` matrix whose
/// rows span it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneChart {
    matrix: Matrix,
    field: FieldSpec,
}

impl Serialize for PlaneChart {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.matrix.serialize(s)
    }
}

impl PlaneChart {
    pub fn new(matrix: Matrix, field: FieldSpec) -> Result<Self> {
        if matrix.rows() == 0 || matrix.cols() <= matrix.rows() {
            return Err(Error::InvalidInput(format!(
                "a plane chart needs 1 <= k+1 < n+1, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let mut m = Matrix::zeros(matrix.rows(), matrix.cols());
        for r in 0..matrix.rows() {
            for c in 0..matrix.cols() {
                m.set(r, c, field.from_rational(matrix.get(r, c))?);
            }
        }
        if m.rank(field) != m.rows() {
            return Err(Error::InvalidInput(
                "plane matrix does not have full row rank".into(),
            ));
        }
        Ok(PlaneChart { matrix: m, field })
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>, field: FieldSpec) -> Result<Self> {
        PlaneChart::new(Matrix::from_rows(rows)?, field)
    }

    /// Parses `"r0c0,r0c1,...;r1c0,..."` with rational entries.
    pub fn parse(text: &str, field: FieldSpec) -> Result<Self> {
        let rows = text
            .split(';')
            .map(|row| row.split(',').map(parse_scalar).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        PlaneChart::from_rows(rows, field)
    }

    /// The span of the first `k+1` coordinate points.
    pub fn coordinate(k: usize, n: usize, field: FieldSpec) -> Result<Self> {
        let rows = (0..=k)
            .map(|i| {
                (0..=n)
                    .map(|j| if i == j { field.one() } else { field.zero() })
                    .collect()
            })
            .collect();
        PlaneChart::from_rows(rows, field)
    }

    pub fn k(&self) -> usize {
        self.matrix.rows() - 1
    }

    pub fn n(&self) -> usize {
        self.matrix.cols() - 1
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Reduced row echelon form with the leftmost pivot set. In these
    /// coordinates the point `Σ y_i R_i` has `x_{p_i} = y_i`.
    pub fn standardize(&self) -> StandardChart {
        let (rref, pivots) = self.matrix.rref(self.field);
        let free = (0..self.matrix.cols())
            .filter(|c| !pivots.contains(c))
            .collect();
        StandardChart { rref, pivots, free }
    }

    /// The plane spanned by this one and `v`.
    pub fn extend(&self, v: &[Scalar]) -> Result<PlaneChart> {
        let mut rows = self.matrix.to_rows();
        rows.push(v.to_vec());
        PlaneChart::from_rows(rows, self.field)
    }
}

pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let bad = || Error::InvalidInput(format!("bad number `{t}`"));
    let num: num_bigint::BigInt = num.parse().map_err(|_| bad())?;
    let den: num_bigint::BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Scalar::new(num, den))
}

pub fn parse_vector(text: &str) -> Result<Vec<Scalar>> {
    text.trim()
        .trim_start_matches('[')
        .trim_end_matches(']')
        .split(',')
        .map(parse_scalar)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardChart {
    pub rref: Matrix,
    pub pivots: Vec<usize>,
    /// Non-pivot columns: the direction coordinates.
    pub free: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Direction variables `a_j` for every non-pivot column `j`.
    Symbolic,
    /// A vector in `k^{n+1}`; its component along the plane is discarded.
    Numeric(Vec<Scalar>),
}

/// `f` pulled back along `(y, t) ↦ Σ y_i R_i + t·a`, with the names used for
/// the chart coordinates.
pub(crate) struct ChartPullback {
    pub chart: StandardChart,
    pub ring: Ring,
    pub plane_vars: Vec<String>,
    pub t_var: String,
    pub dir_vars: Vec<String>,
    pub dir_values: Option<Vec<Scalar>>,
    pub subst: Substitution,
    /// Substitution onto `Λ` alone, into the ring of the plane variables.
    pub restrict: Substitution,
}

pub(crate) fn direction_name(source: &Ring, j: usize) -> String {
    let v = source.var(j);
    match v.strip_prefix('x') {
        Some(rest) if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) => {
            format!("a{rest}")
        }
        _ => format!("a_{v}"),
    }
}

pub(crate) fn chart_pullback(
    source: &Ring,
    plane: &PlaneChart,
    dir: &Direction,
) -> Result<ChartPullback> {
    let field = plane.field();
    if source.len() != plane.n() + 1 {
        return Err(Error::LengthMismatch {
            expected: plane.n() + 1,
            actual: source.len(),
        });
    }
    let chart = plane.standardize();
    let plane_vars: Vec<String> = chart
        .pivots
        .iter()
        .map(|&p| source.var(p).to_string())
        .collect();
    let t_var = "t".to_string();
    let (dir_vars, dir_values) = match dir {
        Direction::Symbolic => (
            chart
                .free
                .iter()
                .map(|&j| direction_name(source, j))
                .collect(),
            None,
        ),
        Direction::Numeric(v) => {
            if v.len() != plane.n() + 1 {
                return Err(Error::LengthMismatch {
                    expected: plane.n() + 1,
                    actual: v.len(),
                });
            }
            let v: Vec<Scalar> = v
                .iter()
                .map(|x| field.from_rational(x))
                .collect::<Result<_>>()?;
            // a_j = v_j - Σ_i v_{p_i} R_i[j]
            let a: Vec<Scalar> = chart
                .free
                .iter()
                .map(|&j| {
                    chart
                        .pivots
                        .iter()
                        .enumerate()
                        .fold(v[j].clone(), |acc, (i, &p)| {
                            field.sub(&acc, &field.mul(&v[p], chart.rref.get(i, j)))
                        })
                })
                .collect();
            if a.iter().all(Zero::is_zero) {
                return Err(Error::DependentDirection);
            }
            (Vec::new(), Some(a))
        }
    };
    let mut names = plane_vars.clone();
    names.push(t_var.clone());
    names.extend(dir_vars.iter().cloned());
    let ring = Ring::new(names.clone())
        .map_err(|_| Error::InvalidInput(format!("chart variable names collide: {names:?}")))?;
    let plane_ring = Ring::new(plane_vars.clone())?;
    let t = Polynomial::var(&ring, field, &t_var)?;
    let mut subst = Substitution::new(&ring, field);
    let mut restrict = Substitution::new(&plane_ring, field);
    for j in 0..=plane.n() {
        let mut image = Polynomial::zero(&ring, field);
        let mut on_plane = Polynomial::zero(&plane_ring, field);
        for (i, name) in plane_vars.iter().enumerate() {
            let c = chart.rref.get(i, j);
            if !c.is_zero() {
                image = &image + &Polynomial::var(&ring, field, name)?.scale(c);
                on_plane = &on_plane + &Polynomial::var(&plane_ring, field, name)?.scale(c);
            }
        }
        if let Some(pos) = chart.free.iter().position(|&f| f == j) {
            let a = match &dir_values {
                None => Polynomial::var(&ring, field, &dir_vars[pos])?,
                Some(v) => Polynomial::constant(&ring, field, v[pos].clone()),
            };
            image = &image + &(&t * &a);
        }
        subst.insert(source.var(j), image)?;
        restrict.insert(source.var(j), on_plane)?;
    }
    Ok(ChartPullback {
        chart,
        ring,
        plane_vars,
        t_var,
        dir_vars,
        dir_values,
        subst,
        restrict,
    })
}

fn check_plane(f: &Polynomial, plane: &PlaneChart) -> Result<()> {
    if f.field() != plane.field() {
        return Err(Error::FieldMismatch(format!(
            "polynomial over {} but plane over {}",
            f.field(),
            plane.field()
        )));
    }
    Ok(())
}

/// Fails with [`Error::PlaneNotContained`] unless `f` vanishes on the plane.
pub fn check_containment(f: &Polynomial, plane: &PlaneChart) -> Result<()> {
    check_plane(f, plane)?;
    let pb = chart_pullback(f.ring(), plane, &Direction::Symbolic)?;
    let r = f.substitute(&pb.restrict)?;
    if !r.is_zero() {
        return Err(Error::PlaneNotContained {
            restriction: r.to_string(),
        });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidualResult {
    /// Direction coordinates: variable names, or values for a numeric direction.
    pub direction: Vec<String>,
    /// `g` in the chart variables of `Λ`, `t`, and the direction variables.
    pub residual: Polynomial,
    /// `g` at `t = 0`.
    pub restriction: Polynomial,
    /// `g = 0`, i.e. the spanned plane lies in `V(f)`.
    pub plane_in_variety: bool,
}

/// `g = f(Σ y_i R_i + t·a) / t`, after checking `Λ ⊂ V(f)` and exact
/// divisibility by `t`.
pub fn residual(
    f: &Polynomial,
    plane: &PlaneChart,
    direction: &Direction,
) -> Result<ResidualResult> {
    check_containment(f, plane)?;
    let pb = chart_pullback(f.ring(), plane, direction)?;
    let on_phi = f.substitute(&pb.subst)?;
    let ti = pb.ring.index_of(&pb.t_var).unwrap();
    let mut quotient = Vec::with_capacity(on_phi.num_terms());
    for (m, c) in on_phi.terms() {
        if m.exponent(ti) == 0 {
            return Err(Error::Verification(format!(
                "restriction to the spanned plane is not divisible by {}",
                pb.t_var
            )));
        }
        let mut q = m.clone();
        q.set(ti, m.exponent(ti) - 1);
        quotient.push((q, c.clone()));
    }
    let g = Polynomial::from_terms(&pb.ring, f.field(), quotient);
    let restriction = drop_t(&g, &pb)?;
    let direction = match &pb.dir_values {
        None => pb.dir_vars.clone(),
        Some(v) => v.iter().map(crate::algebra::field::format_scalar).collect(),
    };
    Ok(ResidualResult {
        direction,
        plane_in_variety: g.is_zero(),
        residual: g,
        restriction,
    })
}

fn restriction_ring(pb: &ChartPullback) -> Result<Ring> {
    Ring::new(pb.plane_vars.iter().chain(&pb.dir_vars).cloned())
}

fn drop_t(g: &Polynomial, pb: &ChartPullback) -> Result<Polynomial> {
    let ti = pb.ring.index_of(&pb.t_var).unwrap();
    let at_zero = Polynomial::from_terms(
        g.ring(),
        g.field(),
        g.terms()
            .filter(|(m, _)| m.exponent(ti) == 0)
            .map(|(m, c)| (m.clone(), c.clone())),
    );
    at_zero.to_ring(&restriction_ring(pb)?)
}

/// `Σ_j a_j·(∂f/∂x_j)|_Λ` over the non-pivot columns `j`.
pub fn first_order_formula(
    f: &Polynomial,
    plane: &PlaneChart,
    direction: &Direction,
) -> Result<Polynomial> {
    check_containment(f, plane)?;
    let pb = chart_pullback(f.ring(), plane, direction)?;
    let target = restriction_ring(&pb)?;
    let lift = Substitution::identity(pb.restrict.target(), &target, f.field())?;
    let mut acc = Polynomial::zero(&target, f.field());
    for (pos, &j) in pb.chart.free.iter().enumerate() {
        let d = f
            .derivative(j)
            .substitute(&pb.restrict)?
            .substitute(&lift)?;
        let a = match &pb.dir_values {
            None => Polynomial::var(&target, f.field(), &pb.dir_vars[pos])?,
            Some(v) => Polynomial::constant(&target, f.field(), v[pos].clone()),
        };
        acc = &acc + &(&a * &d);
    }
    Ok(acc)
}

/// Matrix of the linear map `a ↦ (Σ_j a_j ∂f_i/∂x_j |_Λ)_i`, rows indexed by
/// the degree-`(d_i - 1)` monomials on `Λ` stacked per `f_i`, columns by the
/// non-pivot coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidualMapMatrix {
    pub matrix: Matrix,
    pub row_labels: Vec<String>,
    pub column_labels: Vec<String>,
}

pub fn psi_matrix(fs: &[Polynomial], plane: &PlaneChart) -> Result<ResidualMapMatrix> {
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let mut row_labels = Vec::new();
    let mut column_labels = Vec::new();
    for (idx, f) in fs.iter().enumerate() {
        check_containment(f, plane)?;
        let d = f.degree().unwrap_or(0);
        if d == 0 {
            continue;
        }
        let pb = chart_pullback(f.ring(), plane, &Direction::Symbolic)?;
        if column_labels.is_empty() {
            column_labels = pb.dir_vars.clone();
        }
        let partials: Vec<Polynomial> = pb
            .chart
            .free
            .iter()
            .map(|&j| f.derivative(j).substitute(&pb.restrict))
            .collect::<Result<_>>()?;
        let plane_ring = pb.restrict.target();
        for m in monomials_of_degree(plane_ring.len(), d - 1) {
            rows.push(partials.iter().map(|p| p.coefficient(&m)).collect());
            let label = format_monomial(plane_ring, &m);
            row_labels.push(format!(
                "f{idx}:{}",
                if label.is_empty() { "1" } else { &label }
            ));
        }
    }
    let cols = plane.n() - plane.k();
    let matrix = if rows.is_empty() {
        Matrix::zeros(0, cols)
    } else {
        Matrix::from_rows(rows)?
    };
    Ok(ResidualMapMatrix {
        matrix,
        row_labels,
        column_labels,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsiRank {
    pub rank: usize,
    pub rows: usize,
    pub cols: usize,
    pub surjective: bool,
}

pub fn psi_surjective(m: &ResidualMapMatrix, field: FieldSpec) -> PsiRank {
    let rank = m.matrix.rank(field);
    PsiRank {
        rank,
        rows: m.matrix.rows(),
        cols: m.matrix.cols(),
        surjective: rank == m.matrix.rows(),
    }
}

/// `ψ` applied to a direction given as values on the non-pivot coordinates.
pub fn psi_apply(m: &ResidualMapMatrix, field: FieldSpec, a: &[Scalar]) -> Vec<Scalar> {
    m.matrix.mul_vec(field, a)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidualIntersection {
    pub residuals: Vec<ResidualResult>,
    /// Every residual is nonzero: a candidate residual complete intersection.
    pub all_nonzero: bool,
    /// Every residual vanishes: the spanned plane lies in `V(fs)`.
    pub plane_in_variety: bool,
}

pub fn residual_ci(
    fs: &[Polynomial],
    plane: &PlaneChart,
    direction: &Direction,
) -> Result<ResidualIntersection> {
    let residuals: Vec<ResidualResult> = fs
        .iter()
        .map(|f| residual(f, plane, direction))
        .collect::<Result<_>>()?;
    Ok(ResidualIntersection {
        all_nonzero: residuals.iter().all(|r| !r.plane_in_variety),
        plane_in_variety: residuals.iter().all(|r| r.plane_in_variety),
        residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_in;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn p(n: usize, s: &str) -> Polynomial {
        parse_in(s, &Ring::indexed("x", n), Q).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Q.from_i64(x)).collect()
    }

    #[test]
    fn residual_of_singular_cubic() {
        let f = p(4, "x0^2*x2 + x1^2*x3");
        let plane = PlaneChart::coordinate(1, 3, Q).unwrap();
        let r = residual(&f, &plane, &Direction::Symbolic).unwrap();
        assert_eq!(r.residual.to_string(), "x0^2*a2 + x1^2*a3");
        assert_eq!(r.restriction.to_string(), "x0^2*a2 + x1^2*a3");
        let fo = first_order_formula(&f, &plane, &Direction::Symbolic).unwrap();
        assert_eq!(fo, r.restriction);
    }

    #[test]
    fn residual_keeps_higher_order_terms() {
        let f = p(3, "x0^2*x2 + x2^2*x1");
        let plane = PlaneChart::coordinate(1, 2, Q).unwrap();
        let r = residual(&f, &plane, &Direction::Symbolic).unwrap();
        assert_eq!(r.residual.to_string(), "x1*t*a2^2 + x0^2*a2");
        assert_eq!(r.restriction.to_string(), "x0^2*a2");
    }

    #[test]
    fn residual_of_hyperplane_and_numeric_directions() {
        let f = p(4, "x2");
        let plane = PlaneChart::coordinate(1, 3, Q).unwrap();
        let r = residual(&f, &plane, &Direction::Symbolic).unwrap();
        assert_eq!(r.residual.to_string(), "a2");
        let zero = residual(&f, &plane, &Direction::Numeric(ints(&[5, 1, 0, 1]))).unwrap();
        assert!(zero.plane_in_variety);
        assert_eq!(
            residual(&f, &plane, &Direction::Numeric(ints(&[1, 2, 0, 0]))),
            Err(Error::DependentDirection)
        );
        assert!(matches!(
            residual(&p(4, "x0"), &plane, &Direction::Symbolic),
            Err(Error::PlaneNotContained { .. })
        ));
    }

    #[test]
    fn non_standard_plane() {
        let f = p(4, "x0*x1 + x2*x3");
        // the line x1 = x3 = 0 written in a skewed basis
        let plane = PlaneChart::parse("1,0,1,0;2,0,1,0", Q).unwrap();
        let fo = first_order_formula(&f, &plane, &Direction::Symbolic).unwrap();
        assert_eq!(fo.to_string(), "x0*a1 + x2*a3");
        let r = residual(&f, &plane, &Direction::Symbolic).unwrap();
        assert_eq!(r.restriction, fo);
    }

    #[test]
    fn psi_examples() {
        let f = p(5, "x2*x0^2 + x3*x0*x1 + x4*x1^2");
        let plane = PlaneChart::coordinate(1, 4, Q).unwrap();
        let m = psi_matrix(&[f], &plane).unwrap();
        let r = psi_surjective(&m, Q);
        assert_eq!((r.rank, r.rows, r.surjective), (3, 3, true));

        let g = p(4, "x0^2*x2 + x1^2*x3");
        let plane = PlaneChart::coordinate(1, 3, Q).unwrap();
        let m = psi_matrix(&[g], &plane).unwrap();
        let r = psi_surjective(&m, Q);
        assert_eq!((r.rank, r.rows, r.cols, r.surjective), (2, 3, 2, false));

        let m = psi_matrix(&[p(4, "x2*x0"), p(4, "x3*x1")], &plane).unwrap();
        assert_eq!(m.matrix.rows(), 4);
        assert_eq!(psi_surjective(&m, Q).rank, 2);

        let zero = ResidualMapMatrix {
            matrix: Matrix::zeros(2, 2),
            row_labels: vec![],
            column_labels: vec![],
        };
        assert!(!psi_surjective(&zero, Q).surjective);
    }

    #[test]
    fn residual_intersection() {
        let fs = vec![p(4, "x0^2*x2 + x1^2*x3"), p(4, "x0*x3 - x1*x2")];
        let plane = PlaneChart::coordinate(1, 3, Q).unwrap();
        let r = residual_ci(&fs, &plane, &Direction::Symbolic).unwrap();
        assert_eq!(r.residuals[0].residual.to_string(), "x0^2*a2 + x1^2*a3");
        assert_eq!(r.residuals[1].residual.to_string(), "-x1*a2 + x0*a3");
        assert!(r.all_nonzero);
        let h = residual_ci(
            &[p(4, "x2")],
            &plane,
            &Direction::Numeric(ints(&[0, 0, 0, 1])),
        )
        .unwrap();
        assert!(h.plane_in_variety);
    }
}
