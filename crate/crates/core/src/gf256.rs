//! Arithmetic over GF(2^8) and the dense linear algebra used by the coding
//! layer: rank, elimination and solving of coefficient systems.
//!
//! The field is built over the reduction polynomial x^8 + x^4 + x^3 + x + 1
//! (0x11B). Multiplication goes through log/antilog tables generated at
//! compile time with generator 0x03.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Gf256Error {
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("not yet decodable: coefficient matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

const REDUCTION_POLY: u16 = 0x11B;

/// Carry-less polynomial multiply reduced mod 0x11B, usable in const context.
const fn mul_slow(mut x: u8, mut y: u8) -> u8 {
    let mut acc: u8 = 0;
    while y != 0 {
        if y & 1 != 0 {
            acc ^= x;
        }
        let carry = x & 0x80;
        x <<= 1;
        if carry != 0 {
            x ^= (REDUCTION_POLY & 0xFF) as u8;
        }
        y >>= 1;
    }
    acc
}

const fn build_exp() -> [u8; 256] {
    // exp[i] = g^i with g = 0x03; exp[255] wraps back to 1.
    let mut exp = [0u8; 256];
    let mut value: u8 = 1;
    let mut i = 0;
    while i < 256 {
        exp[i] = value;
        value = mul_slow(value, 0x03);
        i += 1;
    }
    exp
}

const fn build_log(exp: &[u8; 256]) -> [u8; 256] {
    let mut log = [0u8; 256];
    let mut i = 0;
    while i < 255 {
        log[exp[i] as usize] = i as u8;
        i += 1;
    }
    log
}

static EXP: [u8; 256] = build_exp();
static LOG: [u8; 256] = build_log(&EXP);

/// One element of GF(2^8).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct FieldElement(pub u8);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl From<u8> for FieldElement {
    fn from(v: u8) -> Self {
        FieldElement(v)
    }
}

/// Addition is bitwise XOR; every element is its own additive inverse.
pub fn gf_add(x: FieldElement, y: FieldElement) -> FieldElement {
    FieldElement(x.0 ^ y.0)
}

pub fn gf_mul(x: FieldElement, y: FieldElement) -> FieldElement {
    if x.0 == 0 || y.0 == 0 {
        return FieldElement::ZERO;
    }
    let sum = LOG[x.0 as usize] as usize + LOG[y.0 as usize] as usize;
    FieldElement(EXP[sum % 255])
}

pub fn gf_inv(x: FieldElement) -> Result<FieldElement, Gf256Error> {
    if x.0 == 0 {
        return Err(Gf256Error::ZeroInverse);
    }
    let log = LOG[x.0 as usize] as usize;
    Ok(FieldElement(EXP[(255 - log) % 255]))
}

/// Division helper; panics on zero divisor only through the explicit error.
pub fn gf_div(x: FieldElement, y: FieldElement) -> Result<FieldElement, Gf256Error> {
    Ok(gf_mul(x, gf_inv(y)?))
}

/// Dense row-major matrix over GF(2^8).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<FieldElement>,
}

impl CoeffMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        CoeffMatrix {
            rows,
            cols,
            entries: vec![FieldElement::ZERO; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut m = CoeffMatrix::new(nrows, ncols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), ncols, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, FieldElement(v));
            }
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CoeffMatrix::new(n, n);
        for i in 0..n {
            m.set(i, i, FieldElement::ONE);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        self.entries[r * self.cols + c] = v;
    }

    /// Row rank via Gaussian elimination on an internal copy.
    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        let mut rank = 0;
        for col in 0..work.cols {
            if rank == work.rows {
                break;
            }
            // first nonzero entry in column order; no magnitude pivoting
            // exists over a finite field
            let pivot = (rank..work.rows).find(|&r| !work.get(r, col).is_zero());
            let Some(pivot) = pivot else { continue };
            work.swap_rows(rank, pivot);
            let inv = gf_inv(work.get(rank, col)).expect("pivot is nonzero");
            for c in col..work.cols {
                let v = gf_mul(work.get(rank, c), inv);
                work.set(rank, c, v);
            }
            for r in (rank + 1)..work.rows {
                let factor = work.get(r, col);
                if factor.is_zero() {
                    continue;
                }
                for c in col..work.cols {
                    let v = gf_add(work.get(r, c), gf_mul(factor, work.get(rank, c)));
                    work.set(r, c, v);
                }
            }
            rank += 1;
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            let tmp = self.get(a, c);
            self.set(a, c, self.get(b, c));
            self.set(b, c, tmp);
        }
    }

    /// Solves `self * X = rhs` for a square full-rank coefficient matrix.
    /// `rhs` rows are raw payload bytes; the result has the same shape.
    pub fn solve(&self, rhs: &[Vec<u8>]) -> Result<Vec<Vec<u8>>, Gf256Error> {
        if self.rows != self.cols {
            return Err(Gf256Error::Dimension(format!(
                "matrix is {}x{}, expected square",
                self.rows, self.cols
            )));
        }
        if rhs.len() != self.rows {
            return Err(Gf256Error::Dimension(format!(
                "rhs has {} rows, expected {}",
                rhs.len(),
                self.rows
            )));
        }
        let mut coeffs = self.clone();
        let mut data: Vec<Vec<u8>> = rhs.to_vec();

        // Gauss-Jordan to the identity; data rows follow every row operation.
        for col in 0..coeffs.cols {
            let pivot = (col..coeffs.rows).find(|&r| !coeffs.get(r, col).is_zero());
            let Some(pivot) = pivot else {
                return Err(Gf256Error::Singular);
            };
            coeffs.swap_rows(col, pivot);
            data.swap(col, pivot);

            let inv = gf_inv(coeffs.get(col, col)).expect("pivot is nonzero");
            for c in 0..coeffs.cols {
                let v = gf_mul(coeffs.get(col, c), inv);
                coeffs.set(col, c, v);
            }
            for byte in data[col].iter_mut() {
                *byte = gf_mul(FieldElement(*byte), inv).0;
            }

            let pivot_data = data[col].clone();
            for (r, data_row) in data.iter_mut().enumerate() {
                if r == col {
                    continue;
                }
                let factor = coeffs.get(r, col);
                if factor.is_zero() {
                    continue;
                }
                for c in 0..coeffs.cols {
                    let v = gf_add(coeffs.get(r, c), gf_mul(factor, coeffs.get(col, c)));
                    coeffs.set(r, c, v);
                }
                for (t, &p) in data_row.iter_mut().zip(&pivot_data) {
                    *t ^= gf_mul(factor, FieldElement(p)).0;
                }
            }
        }
        Ok(data)
    }

    /// `self * rhs` where rhs rows are raw payload bytes.
    pub fn mul_rows(&self, rhs: &[Vec<u8>]) -> Result<Vec<Vec<u8>>, Gf256Error> {
        if rhs.len() != self.cols {
            return Err(Gf256Error::Dimension(format!(
                "rhs has {} rows, expected {}",
                rhs.len(),
                self.cols
            )));
        }
        let width = rhs.first().map_or(0, |r| r.len());
        let mut out = vec![vec![0u8; width]; self.rows];
        for (r, out_row) in out.iter_mut().enumerate() {
            for (c, rhs_row) in rhs.iter().enumerate() {
                let coeff = self.get(r, c);
                if coeff.is_zero() {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o ^= gf_mul(coeff, FieldElement(b)).0;
                }
            }
        }
        Ok(out)
    }
}
