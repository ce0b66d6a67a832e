//! Integer matrices, Smith normal form and the diagonal criteria.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::rational::bigint_json;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidInput("matrix dimensions must be positive".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "expected {} entries for a {rows}x{cols} matrix, found {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    /// Builds from equal-length rows. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        let data = rows.iter().flatten().map(|&x| BigInt::from(x)).collect();
        IntMatrix { rows: r, cols: c, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<i64>]) -> Self {
        Self::from_rows(cols).transpose()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|r| (0..self.cols).all(|c| r == c || self.get(r, c).is_zero()))
    }

    /// Fraction-free Gaussian elimination (Bareiss).
    pub fn determinant(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::InvalidInput(format!(
                "determinant of a non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|r| self.row(r).to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                let Some(sel) = ((k + 1)..n).find(|&i| !a[i][k].is_zero()) else {
                    return Ok(BigInt::zero());
                };
                a.swap(k, sel);
                sign = -sign;
            }
            for i in (k + 1)..n {
                for j in (k + 1)..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    /// Text format: `rows cols` followed by the entries in row-major order.
    pub fn parse(text: &str) -> Result<Self> {
        let mut tokens = text.split_whitespace();
        let mut dim = |what: &str| -> Result<usize> {
            tokens
                .next()
                .ok_or_else(|| Error::InvalidInput(format!("missing {what}")))?
                .parse::<usize>()
                .map_err(|e| Error::InvalidInput(format!("bad {what}: {e}")))
        };
        let rows = dim("row count")?;
        let cols = dim("column count")?;
        let data = tokens
            .map(|t| {
                t.parse::<BigInt>()
                    .map_err(|e| Error::InvalidInput(format!("bad entry {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows, cols, data)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.rows)
                .map(|r| Value::Array(self.row(r).iter().map(bigint_json).collect()))
                .collect(),
        )
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }

    /// row[dst] += f · row[src]
    fn add_row(&mut self, dst: usize, src: usize, f: &BigInt) {
        for c in 0..self.cols {
            let v = f * self.get(src, c);
            self.data[dst * self.cols + c] += v;
        }
    }

    /// col[dst] += f · col[src]
    fn add_col(&mut self, dst: usize, src: usize, f: &BigInt) {
        for r in 0..self.rows {
            let v = f * self.get(r, src);
            self.data[r * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let idx = r * self.cols + c;
            self.data[idx] = -&self.data[idx];
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// `u · m · v = diag(diag)` with `u`, `v` unimodular and `diag[i] | diag[i+1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub diag: Vec<BigInt>,
}

impl SmithForm {
    pub fn largest_invariant(&self) -> &BigInt {
        self.diag.last().expect("nonempty diagonal")
    }
}

/// Smith normal form of any rectangular integer matrix.
///
/// The diagonal has `min(rows, cols)` entries, all nonnegative.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let n = rows.min(cols);

    for k in 0..n {
        loop {
            // Pivot: smallest nonzero |entry| in the trailing block, first in row-major order.
            let mut best: Option<(usize, usize)> = None;
            for r in k..rows {
                for c in k..cols {
                    let x = a.get(r, c);
                    if x.is_zero() {
                        continue;
                    }
                    match best {
                        Some((br, bc)) if a.get(br, bc).abs() <= x.abs() => {}
                        _ => best = Some((r, c)),
                    }
                }
            }
            let Some((pr, pc)) = best else {
                break;
            };
            a.swap_rows(k, pr);
            u.swap_rows(k, pr);
            a.swap_cols(k, pc);
            v.swap_cols(k, pc);

            let pivot = a.get(k, k).clone();
            let mut clean = true;
            for r in (k + 1)..rows {
                let q = a.get(r, k).div_floor(&pivot);
                if !q.is_zero() {
                    let f = -q;
                    a.add_row(r, k, &f);
                    u.add_row(r, k, &f);
                }
                if !a.get(r, k).is_zero() {
                    clean = false;
                }
            }
            for c in (k + 1)..cols {
                let q = a.get(k, c).div_floor(&pivot);
                if !q.is_zero() {
                    let f = -q;
                    a.add_col(c, k, &f);
                    v.add_col(c, k, &f);
                }
                if !a.get(k, c).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Enforce divisibility of the remaining block by the pivot.
            let offender = (k + 1..rows)
                .flat_map(|r| (k + 1..cols).map(move |c| (r, c)))
                .find(|&(r, c)| !a.get(r, c).is_multiple_of(&pivot));
            match offender {
                Some((r, _)) => {
                    let one = BigInt::one();
                    a.add_row(k, r, &one);
                    u.add_row(k, r, &one);
                }
                None => break,
            }
        }
        if a.get(k, k).is_negative() {
            a.negate_row(k);
            u.negate_row(k);
        }
    }

    let diag = (0..n).map(|i| a.get(i, i).clone()).collect();
    SmithForm { u, v, diag }
}

fn check_prime_and_det(m: &IntMatrix, p: u64) -> Result<BigInt> {
    if !crate::rational::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let d = m.determinant()?;
    if d.is_zero() {
        return Err(Error::Singular);
    }
    Ok(d)
}

/// `p ∤ det M`.
pub fn diagonal_nondegenerate(m: &IntMatrix, p: u64) -> Result<bool> {
    let d = check_prime_and_det(m, p)?;
    Ok(!d.is_multiple_of(&BigInt::from(p)))
}

/// `p ≡ 1 (mod s_n)` for the largest invariant factor `s_n`.
///
/// Sufficient for ordinarity only; `false` carries no conclusion.
pub fn diagonal_ordinary_test(m: &IntMatrix, p: u64) -> Result<bool> {
    check_prime_and_det(m, p)?;
    let snf = smith_normal_form(m);
    let s = snf.largest_invariant();
    Ok((BigInt::from(p) - 1u32).is_multiple_of(s))
}

/// Index of the lattice spanned by the columns inside its saturation:
/// the product of the nonzero invariant factors. Zero for dependent columns.
pub fn lattice_index(m: &IntMatrix) -> BigInt {
    let snf = smith_normal_form(m);
    let rank_needed = m.cols();
    if snf.diag.len() < rank_needed || snf.diag.iter().any(Zero::is_zero) {
        return BigInt::zero();
    }
    snf.diag.iter().product()
}

/// Basis of `{y ∈ F_p^cols : M y = 0}` with residues in `[0, p)`.
pub fn nullspace_mod_p(m: &IntMatrix, p: u64) -> Vec<Vec<u64>> {
    let pi = BigInt::from(p);
    let mut a: Vec<Vec<u64>> = (0..m.rows)
        .map(|r| {
            m.row(r)
                .iter()
                .map(|x| u64::try_from(x.mod_floor(&pi)).expect("residue fits"))
                .collect()
        })
        .collect();
    let cols = m.cols;
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..cols {
        let Some(sel) = (row..a.len()).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(row, sel);
        let inv = inv_mod(a[row][c], p);
        for x in a[row].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..a.len() {
            if r != row && a[r][c] != 0 {
                let f = a[r][c];
                for j in 0..cols {
                    a[r][j] = (a[r][j] + (p - f) * a[row][j]) % p;
                }
            }
        }
        pivots.push(c);
        row += 1;
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0u64; cols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - a[r][free]) % p;
            }
            v
        })
        .collect()
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut r, mut b, mut e) = (1u64, a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}
