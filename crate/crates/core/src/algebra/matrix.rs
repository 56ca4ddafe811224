//! Dense exact matrices: rank, reduced row echelon form, kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::field::{format_scalar, FieldSpec, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in &rows {
            if r.len() != cols {
                return Err(Error::LengthMismatch {
                    expected: cols,
                    actual: r.len(),
                });
            }
            data.extend(r.iter().cloned());
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, field: FieldSpec, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r).iter().zip(v).fold(field.zero(), |acc, (a, b)| {
                    field.add(&acc, &field.mul(a, b))
                })
            })
            .collect()
    }

    /// Exact rank. Over the rationals rows are cleared to integers and
    /// eliminated fraction-free (Bareiss); over `F_p` by plain elimination.
    pub fn rank(&self, field: FieldSpec) -> usize {
        match field {
            FieldSpec::Rationals => bareiss_rank(self),
            FieldSpec::Prime(p) => modular_rank(self, p as u64),
        }
    }

    /// Reduced row echelon form and pivot columns (the leftmost possible).
    pub fn rref(&self, field: FieldSpec) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    m.data.swap(pr * m.cols + j, r * m.cols + j);
                }
            }
            let inv = field.inv(m.get(r, c)).unwrap();
            for j in 0..m.cols {
                let v = field.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in 0..m.cols {
                    let v = field.sub(m.get(i, j), &field.mul(&factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Basis of `{v : M v = 0}`, one vector per free column.
    pub fn nullspace(&self, field: FieldSpec) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref(field);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![field.zero(); self.cols];
                v[f] = field.one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = field.neg(r.get(i, f));
                }
                v
            })
            .collect()
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(format_scalar).collect())
            .collect()
    }
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

fn integer_rows(m: &Matrix) -> Vec<Vec<BigInt>> {
    (0..m.rows)
        .map(|r| {
            let row = m.row(r);
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect()
}

fn bareiss_rank(m: &Matrix) -> usize {
    let mut a = integer_rows(m);
    let (rows, cols) = (m.rows, m.cols);
    let mut prev = BigInt::one();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pr) = (rank..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(pr, rank);
        for i in rank + 1..rows {
            for j in c + 1..cols {
                let v = &a[rank][c] * &a[i][j] - &a[i][c] * &a[rank][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[rank][c].clone();
        rank += 1;
    }
    rank
}

fn modular_rank(m: &Matrix, p: u64) -> usize {
    let mut a: Vec<Vec<u64>> = (0..m.rows)
        .map(|r| {
            m.row(r)
                .iter()
                .map(|x| x.numer().mod_floor(&BigInt::from(p)).to_u64().unwrap())
                .collect()
        })
        .collect();
    let mut rank = 0;
    for c in 0..m.cols {
        if rank == m.rows {
            break;
        }
        let Some(pr) = (rank..m.rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(pr, rank);
        let inv = super::field::mod_pow(a[rank][c], p - 2, p);
        for i in rank + 1..m.rows {
            if a[i][c] == 0 {
                continue;
            }
            let f = a[i][c] * inv % p;
            for j in c..m.cols {
                a[i][j] = (a[i][j] + p - f * a[rank][j] % p) % p;
            }
        }
        rank += 1;
    }
    rank
}
